//! Coverings of brane complexes: enumeration, local invariants, cuts.

use std::collections::{BTreeMap, HashMap};

use num::{BigInt, BigRational, Zero};
use rayon::prelude::*;

use super::frame::Frame;
use super::sector::Sector;
use super::{matches, Bounds, ClassKey, CoveringClass, CoveringError, HurwitzValue};
use crate::complex::{BraneComplex, Contraction, Cut};
use crate::group::FiniteGroup;

#[derive(Clone, Debug)]
struct LocalFrame {
    sector: Sector,
    /// sector arc -> base arc carrying the same attaching map
    arc_source: Vec<usize>,
}

/// A brane complex prepared for covering enumeration.
#[derive(Clone, Debug)]
pub struct CoveringBase {
    brane: BraneComplex,
    frame: Frame,
    two_dim: bool,
    face_start: Vec<usize>,
    locals: Vec<LocalFrame>,
}

/// How the sheet group acts on the fiber of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberAction {
    /// permutations on `{1, .., d}`
    Defining,
    /// the group on itself by left multiplication
    Regular,
}

/// A class of coverings of a brane complex, keyed relative to the base as given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaClass {
    pub class_key: ClassKey,
    pub aut_order: u64,
    pub labels: Vec<usize>,
    /// local invariant class key at each vertex
    pub local: Vec<ClassKey>,
    /// number of gauge-fixed labelings in the class
    pub tree_fixed: u64,
}

impl CoveringBase {
    pub fn new(brane: &BraneComplex, bounds: &Bounds) -> Result<CoveringBase, CoveringError> {
        let c = brane.complex();
        let (nv, ne, nf) = c.cell_counts();
        if ne + nf > bounds.max_cells {
            return Err(CoveringError::OutOfBounds(format!(
                "{} positive-dimension cells",
                ne + nf
            )));
        }
        let two_dim = c.dim() == 2;
        let mut arcs = Vec::new();
        let mut face_start = Vec::new();
        let nodes = if two_dim {
            for (f, face) in c.faces().iter().enumerate() {
                face_start.push(arcs.len());
                for s in &face.boundary {
                    arcs.push((ne + f, s.edge));
                }
            }
            ne + nf
        } else {
            for (e, edge) in c.edges().iter().enumerate() {
                arcs.push((nv + e, edge.tail));
                arcs.push((nv + e, edge.head));
            }
            nv + ne
        };
        let frame = Frame::new(nodes, arcs);
        let mut locals = Vec::with_capacity(nv);
        for q in 0..nv {
            let link = c.link(q)?;
            let (sector, emap) = Sector::with_edge_map(&link.graph)?;
            let mut arc_source = vec![0; sector.arc_count()];
            for (le, &(f, j)) in link.edge_corner.iter().enumerate() {
                let k = c.faces()[f].boundary.len();
                let ce = emap[le];
                arc_source[2 * ce] = face_start[f] + j;
                arc_source[2 * ce + 1] = face_start[f] + (j + 1) % k;
            }
            locals.push(LocalFrame { sector, arc_source });
        }
        Ok(CoveringBase {
            brane: brane.clone(),
            frame,
            two_dim,
            face_start,
            locals,
        })
    }

    pub fn brane(&self) -> &BraneComplex {
        &self.brane
    }

    pub fn arc_count(&self) -> usize {
        self.frame.arcs.len()
    }

    pub fn node_count(&self) -> usize {
        self.frame.nodes
    }

    pub fn gauge_components(&self) -> usize {
        self.frame.comps
    }

    /// Arc of side `k` of face `f` (two-dimensional bases).
    pub fn side_arc(&self, f: usize, k: usize) -> usize {
        self.face_start[f] + k
    }

    /// Arc from edge `e` to its tail (`end = 0`) or head (`end = 1`) (graph bases).
    pub fn edge_arc(&self, e: usize, end: usize) -> usize {
        2 * e + end
    }

    pub fn is_two_dimensional(&self) -> bool {
        self.two_dim
    }

    pub fn link_sector(&self, q: usize) -> &Sector {
        &self.locals[q].sector
    }

    pub(crate) fn local_labels(&self, q: usize, labels: &[usize]) -> Vec<usize> {
        self.locals[q].arc_source.iter().map(|&a| labels[a]).collect()
    }

    pub fn check_constraints(&self, constraints: &[Option<CoveringClass>]) -> Result<(), CoveringError> {
        if constraints.len() != self.locals.len() {
            return Err(CoveringError::ConstraintCount {
                expected: self.locals.len(),
                found: constraints.len(),
            });
        }
        for (q, c) in constraints.iter().enumerate() {
            if let Some(c) = c {
                let expected = self.locals[q].sector.key();
                if &c.base_key != expected {
                    return Err(CoveringError::ConstraintMismatch {
                        vertex: self.brane.complex().vertices()[q].id.clone(),
                        expected: expected.to_string(),
                        found: c.base_key.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn covering<'a>(&'a self, g: &'a FiniteGroup, labels: Vec<usize>) -> Covering<'a> {
        Covering {
            base: self,
            group: g,
            labels,
        }
    }

    fn local_keys(&self, g: &FiniteGroup, labels: &[usize]) -> Vec<ClassKey> {
        (0..self.locals.len())
            .map(|q| {
                self.locals[q]
                    .sector
                    .class_of(g, &self.local_labels(q, labels))
                    .class_key
            })
            .collect()
    }

    /// Every covering class with its automorphism order and local invariants.
    pub fn table(&self, g: &FiniteGroup, bounds: &Bounds) -> Result<HurwitzTable, CoveringError> {
        if g.order() > bounds.max_group_order {
            return Err(CoveringError::OutOfBounds(format!("group of order {}", g.order())));
        }
        let k = self.frame.nontree_count() as u32;
        let total = (g.order() as u64)
            .checked_pow(k)
            .filter(|&t| t <= bounds.max_states)
            .ok_or_else(|| {
                CoveringError::OutOfBounds(format!("{}^{} gauge-fixed labelings", g.order(), k))
            })?;
        const CHUNK: u64 = 4096;
        let chunks = total.div_ceil(CHUNK);
        let merged: HashMap<Vec<usize>, (u64, u64)> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut m: HashMap<Vec<usize>, (u64, u64)> = HashMap::new();
                for i in c * CHUNK..((c + 1) * CHUNK).min(total) {
                    let labels = self.frame.tree_fixed(g, i);
                    let (canon, aut) = self.frame.canonize(g, &labels);
                    m.entry(canon).or_insert((aut, 0)).1 += 1;
                }
                m
            })
            .reduce(HashMap::new, |mut a, b| {
                for (key, (aut, n)) in b {
                    a.entry(key).or_insert((aut, 0)).1 += n;
                }
                a
            });
        let sorted: BTreeMap<Vec<usize>, (u64, u64)> = merged.into_iter().collect();
        let classes: Vec<OmegaClass> = sorted
            .into_par_iter()
            .map(|(canon, (aut, n))| OmegaClass {
                class_key: ClassKey(self.frame.key_text(g, &canon)),
                aut_order: aut,
                local: self.local_keys(g, &canon),
                labels: canon,
                tree_fixed: n,
            })
            .collect();
        Ok(HurwitzTable {
            group: g.name().to_string(),
            group_order: g.order(),
            link_keys: self.locals.iter().map(|l| l.sector.key().clone()).collect(),
            classes,
            nodes: self.frame.nodes,
            gauge_components: self.frame.comps,
            tree_fixed_total: total,
        })
    }

    /// Counts every labeling (no gauge fixing) by its local invariants, when
    /// there are at most `limit` of them.
    pub fn labeled_counts(
        &self,
        g: &FiniteGroup,
        limit: u64,
    ) -> Option<BTreeMap<Vec<ClassKey>, u64>> {
        let arcs = self.arc_count() as u32;
        let total = (g.order() as u64).checked_pow(arcs).filter(|&t| t <= limit)?;
        let n = g.order() as u64;
        let counts = (0..total)
            .into_par_iter()
            .fold(BTreeMap::new, |mut m: BTreeMap<Vec<ClassKey>, u64>, i| {
                let mut x = i;
                let labels: Vec<usize> = (0..arcs)
                    .map(|_| {
                        let t = (x % n) as usize;
                        x /= n;
                        t
                    })
                    .collect();
                *m.entry(self.local_keys(g, &labels)).or_default() += 1;
                m
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_default() += v;
                }
                a
            });
        Some(counts)
    }
}

/// All classes over one base, with the data to answer any constrained query.
#[derive(Clone, Debug)]
pub struct HurwitzTable {
    pub group: String,
    pub group_order: usize,
    pub link_keys: Vec<crate::complex::CanonicalKey>,
    pub classes: Vec<OmegaClass>,
    pub nodes: usize,
    pub gauge_components: usize,
    pub tree_fixed_total: u64,
}

fn ratio(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

impl HurwitzTable {
    pub fn value(&self, constraints: &[Option<CoveringClass>]) -> HurwitzValue {
        let mut v = HurwitzValue::zero();
        for c in &self.classes {
            if matches(&c.local, constraints) {
                let w = ratio(1, c.aut_order);
                v.value += &w;
                v.breakdown.push((c.class_key.clone(), w));
            }
        }
        v
    }

    /// Value for fully specified local invariants given by key.
    pub fn value_at(&self, local: &[ClassKey]) -> BigRational {
        self.classes
            .iter()
            .filter(|c| c.local == local)
            .map(|c| ratio(1, c.aut_order))
            .sum()
    }

    /// Nonzero values by local invariant tuple.
    pub fn entries(&self) -> BTreeMap<Vec<ClassKey>, BigRational> {
        let mut m: BTreeMap<Vec<ClassKey>, BigRational> = BTreeMap::new();
        for c in &self.classes {
            *m.entry(c.local.clone()).or_insert_with(BigRational::zero) += ratio(1, c.aut_order);
        }
        m
    }

    /// Compares class weights with labeled counts for every invariant tuple.
    /// Labeled counts come from `labeled` when given, and otherwise from the
    /// gauge-fixed counts times the size of the free part of the gauge group.
    pub fn burnside_check(
        &self,
        labeled: Option<&BTreeMap<Vec<ClassKey>, u64>>,
    ) -> Result<usize, CoveringError> {
        let weights = self.entries();
        let order = BigInt::from(self.group_order);
        let counts: BTreeMap<Vec<ClassKey>, BigRational> = match labeled {
            Some(l) => l
                .iter()
                .map(|(k, &n)| {
                    (k.clone(), BigRational::new(BigInt::from(n), num::pow(order.clone(), self.nodes)))
                })
                .collect(),
            None => {
                let mut m: BTreeMap<Vec<ClassKey>, u64> = BTreeMap::new();
                for c in &self.classes {
                    *m.entry(c.local.clone()).or_default() += c.tree_fixed;
                }
                m.into_iter()
                    .map(|(k, n)| {
                        (
                            k,
                            BigRational::new(
                                BigInt::from(n),
                                num::pow(order.clone(), self.gauge_components),
                            ),
                        )
                    })
                    .collect()
            }
        };
        let keys: std::collections::BTreeSet<&Vec<ClassKey>> = weights.keys().chain(counts.keys()).collect();
        for k in &keys {
            let w = weights.get(*k).cloned().unwrap_or_else(BigRational::zero);
            let c = counts.get(*k).cloned().unwrap_or_else(BigRational::zero);
            if w != c {
                return Err(CoveringError::Burnside {
                    invariants: k.iter().map(|x| x.0.clone()).collect::<Vec<_>>().join(" ; "),
                    weights: w.to_string(),
                    labeled: c.to_string(),
                });
            }
        }
        let total: BigRational = weights.values().sum();
        let all = BigRational::new(
            BigInt::from(self.tree_fixed_total),
            num::pow(order, self.gauge_components),
        );
        if total != all {
            return Err(CoveringError::Burnside {
                invariants: "all".into(),
                weights: total.to_string(),
                labeled: all.to_string(),
            });
        }
        Ok(keys.len())
    }
}

/// One labeling over a prepared base.
#[derive(Clone, Debug)]
pub struct Covering<'a> {
    pub base: &'a CoveringBase,
    pub group: &'a FiniteGroup,
    pub labels: Vec<usize>,
}

/// A covering split along a cut: the covering induced on the cut complex and
/// the covering of the contracted complex.
#[derive(Clone, Debug)]
pub struct CutRestriction {
    pub gamma: CoveringClass,
    pub contraction: Contraction,
    pub contracted: CoveringBase,
    pub contracted_labels: Vec<usize>,
}

impl Covering<'_> {
    pub fn trivial<'a>(base: &'a CoveringBase, g: &'a FiniteGroup) -> Covering<'a> {
        base.covering(g, vec![g.identity(); base.arc_count()])
    }

    pub fn class(&self) -> OmegaClass {
        let g = self.group;
        let n = self.base.frame.normalize(g, &self.labels);
        let (canon, aut) = self.base.frame.canonize(g, &n);
        OmegaClass {
            class_key: ClassKey(self.base.frame.key_text(g, &canon)),
            aut_order: aut,
            local: self.base.local_keys(g, &canon),
            labels: canon,
            tree_fixed: 0,
        }
    }

    pub fn automorphism_order(&self) -> u64 {
        self.class().aut_order
    }

    pub fn local_invariant(&self, q: usize) -> Result<CoveringClass, CoveringError> {
        let l = self
            .base
            .locals
            .get(q)
            .ok_or_else(|| CoveringError::UnknownVertex(q.to_string()))?;
        Ok(l.sector.class_of(self.group, &self.base.local_labels(q, &self.labels)))
    }

    /// Sizes of the preimages of `q`: the components of the induced link covering.
    pub fn vertex_fibers(&self, q: usize, action: FiberAction) -> Result<Vec<usize>, CoveringError> {
        let l = self
            .base
            .locals
            .get(q)
            .ok_or_else(|| CoveringError::UnknownVertex(q.to_string()))?;
        let g = self.group;
        let sheets = match action {
            FiberAction::Regular => g.order(),
            FiberAction::Defining => g.perm(0).ok_or(CoveringError::NotSymmetricGroup)?.degree(),
        };
        let act = |t: usize, i: usize| match action {
            FiberAction::Regular => g.mul(t, i),
            FiberAction::Defining => g.perm(t).unwrap().apply(i),
        };
        let c = l.sector.complex();
        let nodes = c.vertices().len() + c.edges().len();
        let mut parent: Vec<usize> = (0..nodes * sheets).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let local = self.base.local_labels(q, &self.labels);
        let nv = c.vertices().len();
        for (e, edge) in c.edges().iter().enumerate() {
            for (end, v) in [(0, edge.tail), (1, edge.head)] {
                let t = local[2 * e + end];
                for i in 0..sheets {
                    let a = root(&mut parent, (nv + e) * sheets + i);
                    let b = root(&mut parent, v * sheets + act(t, i));
                    parent[a] = b;
                }
            }
        }
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        // a component's size is the number of sheets over any one link vertex
        for i in 0..sheets {
            let r = root(&mut parent, i);
            *sizes.entry(r).or_default() += 1;
        }
        let mut out: Vec<usize> = sizes.into_values().collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        Ok(out)
    }

    pub fn restrict_to_cut(&self, cut: &Cut) -> Result<CutRestriction, CoveringError> {
        let brane = &self.base.brane;
        let reference = brane.cut_for(&cut.split)?;
        if reference.crossed_edges != cut.crossed_edges || reference.crossed_faces != cut.crossed_faces {
            return Err(CoveringError::CutMismatch(cut.split.display(brane.complex())));
        }
        let g = self.group;
        let (sector, emap) = Sector::with_edge_map(&cut.gamma)?;
        let mut gl = vec![g.identity(); sector.arc_count()];
        for (j, &(f, p, q)) in cut.crossed_faces.iter().enumerate() {
            gl[2 * emap[j]] = self.labels[self.base.side_arc(f, p)];
            gl[2 * emap[j] + 1] = self.labels[self.base.side_arc(f, q)];
        }
        let gamma = sector.class_of(g, &gl);
        let contraction = brane.contract_along_cut(cut)?;
        let bounds = Bounds {
            max_cells: usize::MAX,
            ..Bounds::default()
        };
        let contracted = CoveringBase::new(&contraction.complex, &bounds)?;
        let mut labels = vec![g.identity(); contracted.arc_count()];
        for (new, old) in origin_pairs(self.base, &contracted, &contraction) {
            labels[new] = self.labels[old];
        }
        Ok(CutRestriction {
            gamma,
            contraction,
            contracted,
            contracted_labels: labels,
        })
    }
}

/// (arc of the contracted base, arc of the original base) pairs.
fn origin_pairs(original: &CoveringBase, contracted: &CoveringBase, con: &Contraction) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if original.two_dim {
        for (f, (of, positions)) in con.face_origin.iter().enumerate() {
            for (k, &p) in positions.iter().enumerate() {
                out.push((contracted.side_arc(f, k), original.side_arc(*of, p)));
            }
        }
    } else {
        for (e, &oe) in con.edge_origin.iter().enumerate() {
            for end in 0..2 {
                out.push((contracted.edge_arc(e, end), original.edge_arc(oe, end)));
            }
        }
    }
    out
}

impl CutRestriction {
    /// The contracted covering.
    pub fn contracted_covering<'a>(&'a self, g: &'a FiniteGroup) -> Covering<'a> {
        self.contracted.covering(g, self.contracted_labels.clone())
    }

    /// Reassembles a labeling of the original base from a labeling of the
    /// contracted one; the two copies of each crossed cell must agree.
    pub fn glue(
        &self,
        original: &CoveringBase,
        contracted_labels: &[usize],
    ) -> Result<Vec<usize>, CoveringError> {
        let mut out: Vec<Option<usize>> = vec![None; original.arc_count()];
        for (new, old) in origin_pairs(original, &self.contracted, &self.contraction) {
            let t = contracted_labels[new];
            match out[old] {
                Some(s) if s != t => {
                    return Err(CoveringError::CutMismatch("halves disagree on a crossed cell".into()))
                }
                _ => out[old] = Some(t),
            }
        }
        out.into_iter()
            .map(|x| x.ok_or_else(|| CoveringError::CutMismatch("uncovered incidence".into())))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{single_edge, sphere_complex, BraneComplex};
    use crate::group::symmetric_lex;

    fn edge_brane() -> BraneComplex {
        BraneComplex::new(single_edge("a", "b", "red"), &[vec!["a", "b"]]).unwrap()
    }

    #[test]
    fn single_edge_has_one_class() {
        let g = symmetric_lex(3);
        let b = Bounds::default();
        let base = CoveringBase::new(&edge_brane(), &b).unwrap();
        let t = base.table(&g, &b).unwrap();
        assert_eq!(t.classes.len(), 1);
        assert_eq!(t.classes[0].aut_order, 6);
        assert_eq!(t.burnside_check(base.labeled_counts(&g, 1_000_000).as_ref()).unwrap(), 1);
    }

    #[test]
    fn trivial_cover_has_full_automorphisms() {
        let g = symmetric_lex(3);
        let base = CoveringBase::new(&sphere_complex(3), &Bounds::default()).unwrap();
        let f = Covering::trivial(&base, &g);
        assert_eq!(f.automorphism_order(), 6);
        assert_eq!(f.vertex_fibers(0, FiberAction::Defining).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn fibers_follow_monodromy() {
        let g = symmetric_lex(2);
        let b = Bounds::default();
        let base = CoveringBase::new(&sphere_complex(2), &b).unwrap();
        let t = base.table(&g, &b).unwrap();
        let mut profiles: Vec<Vec<usize>> = t
            .classes
            .iter()
            .map(|c| base.covering(&g, c.labels.clone()).vertex_fibers(0, FiberAction::Defining).unwrap())
            .collect();
        profiles.sort();
        assert_eq!(profiles, vec![vec![1, 1], vec![2]]);
    }
}

//! Hurwitz theories as colored Frobenius algebras, and the checks tying the
//! topological side (enumerated coverings) to the algebraic side.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::complex::{
    compatible_complex, point, sphere_complex, suspension, theta_graph, bigon_circle, BraneComplex, CanonicalKey,
    ColoredComplex, ComplexError, Cut, Orientation, Relabeling,
};
use crate::covering::{degree_group, Bounds, ClassKey, CoveringBase, CoveringClass, CoveringError, HurwitzTable, Sector};
use crate::format::serialize_complex;
use crate::frobenius::{assemble_algebra, AlgebraError, FrobeniusAlgebra, SectorSpec};
use crate::gcover::sd_correspondence;
use crate::group::FiniteGroup;
use crate::linalg::{det, invert, transpose, Matrix};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LabError {
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("sector closure exceeded {0} sectors")]
    ClosureTooLarge(usize),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Clone, Debug)]
pub enum TheoryKind {
    Degree(usize),
    Group(FiniteGroup),
}

#[derive(Clone, Debug)]
pub struct TheoryConfig {
    pub kind: TheoryKind,
    pub bounds: Bounds,
}

impl TheoryConfig {
    pub fn degree(d: usize) -> Self {
        TheoryConfig {
            kind: TheoryKind::Degree(d),
            bounds: Bounds::default(),
        }
    }

    pub fn group(g: FiniteGroup) -> Self {
        TheoryConfig {
            kind: TheoryKind::Group(g),
            bounds: Bounds::default(),
        }
    }

    /// Short tag used in report lines, e.g. `d2` or `G:S3`.
    pub fn tag(&self) -> String {
        match &self.kind {
            TheoryKind::Degree(d) => format!("d{d}"),
            TheoryKind::Group(g) => format!("G:{}", g.name()),
        }
    }
}

/// One theory with memoized tables, keyed by the exact complex text.
pub struct Lab {
    config: TheoryConfig,
    group: FiniteGroup,
    tables: Mutex<HashMap<String, Arc<HurwitzTable>>>,
}

impl Lab {
    pub fn new(config: TheoryConfig) -> Result<Lab, LabError> {
        let group = match &config.kind {
            TheoryKind::Degree(d) => degree_group(*d, &config.bounds)?,
            TheoryKind::Group(g) => {
                if g.order() > config.bounds.max_group_order {
                    return Err(CoveringError::OutOfBounds(format!("group of order {}", g.order())).into());
                }
                g.clone()
            }
        };
        Ok(Lab {
            config,
            group,
            tables: Mutex::new(HashMap::new()),
        })
    }

    pub fn config(&self) -> &TheoryConfig {
        &self.config
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn bounds(&self) -> &Bounds {
        &self.config.bounds
    }

    pub fn table(&self, omega: &BraneComplex) -> Result<Arc<HurwitzTable>, LabError> {
        let key = serialize_complex(omega.complex());
        if let Some(t) = self.tables.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let base = CoveringBase::new(omega, self.bounds())?;
        let t = Arc::new(base.table(&self.group, self.bounds())?);
        self.tables.lock().unwrap().insert(key, t.clone());
        Ok(t)
    }

    /// Sector of a graph with its classes.
    pub fn sector(&self, sigma: &ColoredComplex) -> Result<(Sector, Vec<CoveringClass>), LabError> {
        let s = Sector::new(sigma)?;
        let c = s.classes(&self.group, self.bounds())?;
        Ok((s, c))
    }

    /// Classes of every vertex link of `omega`, in vertex order.
    pub fn link_classes(&self, omega: &BraneComplex) -> Result<Vec<Vec<CoveringClass>>, LabError> {
        let base = CoveringBase::new(omega, self.bounds())?;
        (0..omega.complex().vertices().len())
            .map(|q| Ok(base.link_sector(q).classes(&self.group, self.bounds())?))
            .collect()
    }

    /// Pairing matrix of a sector: rows are classes of `sigma`, columns
    /// classes of its star, entries Hurwitz numbers of the suspension.
    pub fn gram(&self, sigma: &ColoredComplex) -> Result<Matrix, LabError> {
        let (s, rows) = self.sector(sigma)?;
        let (t, cols) = self.sector(&sigma.star_involution())?;
        let omega = suspension(sigma)?;
        let base = CoveringBase::new(&omega, self.bounds())?;
        let q = if base.link_sector(0).key() == s.key() { 0 } else { 1 };
        if base.link_sector(q).key() != s.key() || base.link_sector(1 - q).key() != t.key() {
            return Err(LabError::Unsupported("suspension links differ from the sector".into()));
        }
        let entries = self.table(&omega)?.entries();
        Ok(rows
            .iter()
            .map(|r| {
                cols.iter()
                    .map(|c| {
                        let mut k = vec![ClassKey(String::new()); 2];
                        k[q] = r.class_key.clone();
                        k[1 - q] = c.class_key.clone();
                        entries.get(&k).cloned().unwrap_or_else(BigRational::zero)
                    })
                    .collect()
            })
            .collect())
    }
}

/// A Hurwitz algebra with the covering classes behind its bases.
#[derive(Clone, Debug)]
pub struct HurwitzAlgebra {
    pub algebra: FrobeniusAlgebra,
    pub sectors: Vec<Sector>,
    pub classes: Vec<Vec<CoveringClass>>,
}

impl HurwitzAlgebra {
    pub fn sector_of(&self, key: &CanonicalKey) -> Option<usize> {
        self.algebra.sector_index(key)
    }

    pub fn basis_index(&self, s: usize, key: &ClassKey) -> Option<usize> {
        self.classes[s].iter().position(|c| &c.class_key == key)
    }
}

type Signature = (BTreeSet<String>, BTreeSet<String>);

/// Outgoing and incoming vertex colors, if every vertex is labeled and no
/// color repeats.
fn signature(sigma: &ColoredComplex) -> Option<Signature> {
    let mut outs = BTreeSet::new();
    let mut ins = BTreeSet::new();
    for v in sigma.vertices() {
        let l = v.label.as_ref()?;
        let fresh = match l.orientation {
            Orientation::Out => outs.insert(l.color.as_str().to_string()),
            Orientation::In => ins.insert(l.color.as_str().to_string()),
        };
        if !fresh {
            return None;
        }
    }
    Some((outs, ins))
}

/// Cheap necessary condition for a compatible complex.
fn colors_match(sigs: &[&Signature]) -> bool {
    let mut outs = BTreeSet::new();
    let mut ins = BTreeSet::new();
    for (o, i) in sigs {
        if o.intersection(i).next().is_some() {
            return false;
        }
        for c in o.iter() {
            if !outs.insert(c) {
                return false;
            }
        }
        for c in i.iter() {
            if !ins.insert(c) {
                return false;
            }
        }
    }
    outs == ins
}

struct SectorSet {
    by_key: BTreeMap<CanonicalKey, ColoredComplex>,
}

impl SectorSet {
    fn add(&mut self, sigma: &ColoredComplex) -> bool {
        let mut fresh = false;
        for s in [sigma.clone(), sigma.star_involution()] {
            let k = s.canonical_key();
            if let std::collections::btree_map::Entry::Vacant(e) = self.by_key.entry(k) {
                e.insert(s.canonical_copy().0);
                fresh = true;
            }
        }
        fresh
    }

    fn add_brane(&mut self, omega: &BraneComplex) -> Result<bool, LabError> {
        let mut fresh = false;
        for q in 0..omega.complex().vertices().len() {
            fresh |= self.add(&omega.complex().link(q)?.graph);
        }
        for cut in omega.certificate() {
            fresh |= self.add(&cut.gamma);
        }
        Ok(fresh)
    }
}

/// Compatible sector triples, each listed in all three rotations.
fn compatible_triples(sectors: &[ColoredComplex]) -> BTreeSet<[usize; 3]> {
    let sigs: Vec<Option<Signature>> = sectors.iter().map(signature).collect();
    let n = sectors.len();
    let mut cands = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if [b, c, a] < [a, b, c] || [c, a, b] < [a, b, c] {
                    continue;
                }
                if let (Some(x), Some(y), Some(z)) = (&sigs[a], &sigs[b], &sigs[c]) {
                    if colors_match(&[x, y, z]) {
                        cands.push([a, b, c]);
                    }
                }
            }
        }
    }
    let found: Vec<[usize; 3]> = cands
        .into_par_iter()
        .filter(|t| compatible_complex(&t.map(|i| sectors[i].clone())).is_some())
        .collect();
    let mut out = BTreeSet::new();
    for t in found {
        out.insert(t);
        out.insert([t[1], t[2], t[0]]);
        out.insert([t[2], t[0], t[1]]);
    }
    out
}

/// Sectors needed to evaluate the given brane complexes algebraically: vertex
/// links and cut complexes with their stars, closed under the channels of the
/// crossing identity.
pub fn sector_closure(complexes: &[BraneComplex], max_sectors: usize) -> Result<Vec<ColoredComplex>, LabError> {
    let mut set = SectorSet { by_key: BTreeMap::new() };
    for omega in complexes {
        set.add_brane(omega)?;
    }
    loop {
        if set.by_key.len() > max_sectors {
            return Err(LabError::ClosureTooLarge(max_sectors));
        }
        let sectors: Vec<ColoredComplex> = set.by_key.values().cloned().collect();
        let index: HashMap<CanonicalKey, usize> = set.by_key.keys().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let star: Vec<usize> = sectors
            .iter()
            .map(|s| index[&s.star_involution().canonical_key()])
            .collect();
        let triples = compatible_triples(&sectors);
        let mut by_first: HashMap<usize, Vec<[usize; 3]>> = HashMap::new();
        for t in &triples {
            by_first.entry(t[0]).or_default().push(*t);
        }
        let mut quads = BTreeSet::new();
        for t in &triples {
            for u in by_first.get(&star[t[2]]).into_iter().flatten() {
                quads.insert([t[0], t[1], u[1], u[2]]);
            }
        }
        let glued: Vec<BraneComplex> = quads
            .into_par_iter()
            .filter_map(|q| compatible_complex(&q.map(|i| sectors[i].clone())))
            .collect();
        let mut fresh = false;
        for omega in &glued {
            fresh |= set.add_brane(omega)?;
        }
        if !fresh {
            return Ok(sectors);
        }
    }
}

/// Builds the Hurwitz algebra on the given sectors (closed under star first).
pub fn build_hurwitz_algebra(lab: &Lab, sectors: &[ColoredComplex]) -> Result<HurwitzAlgebra, LabError> {
    let mut set = SectorSet { by_key: BTreeMap::new() };
    for s in sectors {
        set.add(s);
    }
    let sectors: Vec<ColoredComplex> = set.by_key.into_values().collect();
    let mut secs = Vec::new();
    let mut classes = Vec::new();
    for s in &sectors {
        let (sec, cl) = lab.sector(s)?;
        secs.push(sec);
        classes.push(cl);
    }
    let gram = sectors.iter().map(|s| lab.gram(s)).collect::<Result<Vec<_>, _>>()?;
    let index: Vec<HashMap<&ClassKey, usize>> = classes
        .iter()
        .map(|cl| cl.iter().enumerate().map(|(i, c)| (&c.class_key, i)).collect())
        .collect();
    let triples: Vec<[usize; 3]> = compatible_triples(&sectors)
        .into_iter()
        .filter(|t| [t[1], t[2], t[0]] > *t && [t[2], t[0], t[1]] > *t || (t[0] == t[1] && t[1] == t[2]))
        .collect();
    let blocks = triples
        .par_iter()
        .map(|t| {
            let omega = compatible_complex(&t.map(|i| sectors[i].clone())).expect("compatible triple");
            let base = CoveringBase::new(&omega, lab.bounds())?;
            for q in 0..3 {
                if base.link_sector(q).key() != secs[t[q]].key() {
                    return Err(LabError::Unsupported("glued links differ from sectors".into()));
                }
            }
            let d = t.map(|i| classes[i].len());
            let mut data = vec![BigRational::zero(); d[0] * d[1] * d[2]];
            for (k, v) in lab.table(&omega)?.entries() {
                let i = [0, 1, 2].map(|q| index[t[q]][&k[q]]);
                data[(i[0] * d[1] + i[1]) * d[2] + i[2]] = v;
            }
            Ok((*t, data))
        })
        .collect::<Result<Vec<_>, LabError>>()?;
    let specs = sectors
        .iter()
        .zip(&secs)
        .zip(&classes)
        .map(|((s, sec), cl)| SectorSpec {
            complex: s.clone(),
            basis: cl.iter().map(|c| sec.class_name(lab.group(), c, lab.bounds())).collect(),
        })
        .collect();
    let algebra = assemble_algebra(specs, gram, blocks)?;
    // assembly keeps the sector order, which is already canonical
    Ok(HurwitzAlgebra {
        algebra,
        sectors: secs,
        classes,
    })
}

/// Convenience: the algebra on the closure of the given complexes.
pub fn algebra_for(lab: &Lab, complexes: &[BraneComplex]) -> Result<HurwitzAlgebra, LabError> {
    build_hurwitz_algebra(lab, &sector_closure(complexes, 200)?)
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub instance: String,
    pub expected: BigRational,
    pub computed: BigRational,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CHECK {} {} {} {} {}",
            self.name,
            self.instance,
            self.expected,
            self.computed,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn push(&mut self, name: &str, instance: &str, expected: BigRational, computed: BigRational) {
        let passed = expected == computed;
        self.checks.push(Check {
            name: name.into(),
            instance: instance.into(),
            expected,
            computed,
            passed,
        });
    }

    /// Compares two tables of values entrywise; the line carries the totals
    /// when everything agrees and the first disagreeing entry otherwise.
    pub fn push_tables<K: Ord + fmt::Debug>(
        &mut self,
        name: &str,
        instance: &str,
        expected: &BTreeMap<K, BigRational>,
        computed: &BTreeMap<K, BigRational>,
    ) {
        let zero = BigRational::zero();
        let keys: BTreeSet<&K> = expected.keys().chain(computed.keys()).collect();
        for (n, k) in keys.into_iter().enumerate() {
            let e = expected.get(k).unwrap_or(&zero);
            let c = computed.get(k).unwrap_or(&zero);
            if e != c {
                self.checks.push(Check {
                    name: name.into(),
                    instance: format!("{instance}#{n}"),
                    expected: e.clone(),
                    computed: c.clone(),
                    passed: false,
                });
                return;
            }
        }
        let total: BigRational = expected.values().sum();
        self.push(name, instance, total.clone(), total);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn nonzero<K: Ord>(m: BTreeMap<K, BigRational>) -> BTreeMap<K, BigRational> {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

fn ratio(p: u64, q: u64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// The default verification universe.
pub fn standard_catalog() -> Vec<(String, BraneComplex)> {
    let s = |x: &ColoredComplex| suspension(x).expect("suspension of a catalog graph");
    vec![
        ("suspension_point".into(), s(&point())),
        ("suspension_bigon".into(), s(&bigon_circle())),
        ("suspension_theta".into(), s(&theta_graph())),
        ("sphere3".into(), sphere_complex(3)),
        ("sphere4".into(), sphere_complex(4)),
    ]
}

/// Topological invariance: tables agree under random isomorphic relabelings.
pub fn verify_invariance(
    lab: &Lab,
    name: &str,
    omega: &BraneComplex,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport, LabError> {
    let reference = nonzero(lab.table(omega)?.entries());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let relabeled: Vec<(BraneComplex, Relabeling)> =
        (0..trials).map(|_| Relabeling::random_brane(omega, &mut rng)).collect();
    let tables = relabeled
        .par_iter()
        .map(|(b, r)| {
            let base = CoveringBase::new(b, lab.bounds())?;
            let t = base.table(lab.group(), lab.bounds())?;
            // read back in the original vertex order
            Ok(t.entries()
                .into_iter()
                .map(|(k, v)| ((0..k.len()).map(|q| k[r.vertex_map[q]].clone()).collect::<Vec<_>>(), v))
                .collect::<BTreeMap<_, _>>())
        })
        .collect::<Result<Vec<_>, LabError>>()?;
    let agreeing = tables.iter().filter(|t| nonzero((*t).clone()) == reference).count();
    let mut r = VerificationReport::default();
    r.push(
        "invariance",
        &format!("{name}/{}", lab.config().tag()),
        BigRational::from_integer(trials.into()),
        BigRational::from_integer(agreeing.into()),
    );
    Ok(r)
}

/// Non-degeneracy: `|det|` of each pairing block against the product of
/// inverse automorphism orders predicted by the pairing formula.
pub fn verify_nondegeneracy(lab: &Lab, sectors: &[ColoredComplex]) -> Result<VerificationReport, LabError> {
    let mut r = VerificationReport::default();
    for (i, s) in sectors.iter().enumerate() {
        let (_, classes) = lab.sector(s)?;
        let g = lab.gram(s)?;
        let expected: BigRational = classes.iter().map(|c| ratio(1, c.aut_order)).product();
        let computed = if invert(&g).is_some() { det(&g).abs() } else { BigRational::zero() };
        r.push(
            "nondegeneracy",
            &format!("sector{i}/{}", lab.config().tag()),
            expected,
            computed,
        );
    }
    Ok(r)
}

/// Cut invariance: the value on a complex equals the value on its contraction
/// with the copairing of the cut sector inserted at the two new vertices.
pub fn verify_cut_invariance(lab: &Lab, name: &str, omega: &BraneComplex) -> Result<VerificationReport, LabError> {
    let mut r = VerificationReport::default();
    let lhs = nonzero(lab.table(omega)?.entries());
    let v = omega.complex().vertices().len();
    for cut in omega.certificate() {
        let con = omega.contract_along_cut(cut)?;
        let (gs, gcl) = lab.sector(&cut.gamma)?;
        let (ss, scl) = lab.sector(&cut.gamma.star_involution())?;
        let base = CoveringBase::new(&con.complex, lab.bounds())?;
        if base.link_sector(con.q_plus).key() != gs.key() || base.link_sector(con.q_minus).key() != ss.key() {
            return Err(CoveringError::CutMismatch(cut.split.display(omega.complex())).into());
        }
        let k = transpose(&invert(&lab.gram(&cut.gamma)?).ok_or_else(|| {
            AlgebraError::DegenerateGram(gs.key().to_string())
        })?);
        let gi: HashMap<&ClassKey, usize> = gcl.iter().enumerate().map(|(i, c)| (&c.class_key, i)).collect();
        let si: HashMap<&ClassKey, usize> = scl.iter().enumerate().map(|(i, c)| (&c.class_key, i)).collect();
        let mut rhs: BTreeMap<Vec<ClassKey>, BigRational> = BTreeMap::new();
        for (key, val) in lab.table(&con.complex)?.entries() {
            let c = &k[gi[&key[con.q_plus]]][si[&key[con.q_minus]]];
            if c.is_zero() {
                continue;
            }
            *rhs.entry(key[..v].to_vec()).or_insert_with(BigRational::zero) += c * val;
        }
        r.push_tables(
            "cut-invariance",
            &format!("{name}:{}/{}", cut.split.display(omega.complex()), lab.config().tag()),
            &lhs,
            &nonzero(rhs),
        );
    }
    Ok(r)
}

/// Multiplicativity over disjoint unions of seeded random catalog pairs of
/// equal dimension (a union must be the closure of its top cells).
pub fn verify_multiplicativity(
    lab: &Lab,
    catalog: &[(String, BraneComplex)],
    pairs: usize,
    seed: u64,
) -> Result<VerificationReport, LabError> {
    let mut r = VerificationReport::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..pairs {
        let i = rng.gen_range(0..catalog.len());
        let dim = catalog[i].1.complex().dim();
        let same: Vec<usize> = (0..catalog.len()).filter(|&j| catalog[j].1.complex().dim() == dim).collect();
        let j = same[rng.gen_range(0..same.len())];
        let (a, b) = (&catalog[i].1, &catalog[j].1);
        let u = a.disjoint_union(b);
        let ta = nonzero(lab.table(a)?.entries());
        let tb = nonzero(lab.table(b)?.entries());
        let mut expected = BTreeMap::new();
        for (ka, va) in &ta {
            for (kb, vb) in &tb {
                let k: Vec<ClassKey> = ka.iter().chain(kb).cloned().collect();
                expected.insert(k, va * vb);
            }
        }
        let computed = nonzero(lab.table(&u)?.entries());
        r.push_tables(
            "multiplicativity",
            &format!("{}+{}/{}", catalog[i].0, catalog[j].0, lab.config().tag()),
            &expected,
            &computed,
        );
    }
    Ok(r)
}

/// All four axioms on a catalog.
pub fn verify_tft_axioms(lab: &Lab, catalog: &[(String, BraneComplex)]) -> Result<VerificationReport, LabError> {
    let mut r = VerificationReport::default();
    for (i, (name, omega)) in catalog.iter().enumerate() {
        r.extend(verify_invariance(lab, name, omega, 100, 1000 + i as u64)?);
    }
    let mut set = SectorSet { by_key: BTreeMap::new() };
    for (_, omega) in catalog {
        set.add_brane(omega)?;
    }
    let sectors: Vec<ColoredComplex> = set.by_key.into_values().collect();
    r.extend(verify_nondegeneracy(lab, &sectors)?);
    for (name, omega) in catalog {
        r.extend(verify_cut_invariance(lab, name, omega)?);
    }
    r.extend(verify_multiplicativity(lab, catalog, 20, 7)?);
    Ok(r)
}

/// Gluing identity along one cut: the value on the complex equals the sum
/// over classes `b` of the cut sector of the values on the two pieces with `b`
/// and its star inserted, weighted by `|Aut(b)| + aut_shift`. A nonzero shift
/// is a mutation and should make the check fail.
pub fn verify_gluing_identity(
    lab: &Lab,
    name: &str,
    omega: &BraneComplex,
    cut: &Cut,
    aut_shift: u64,
) -> Result<VerificationReport, LabError> {
    let c = omega.complex();
    if !omega.certificate().iter().any(|x| x == cut) {
        return Err(CoveringError::CutMismatch(cut.split.display(c)).into());
    }
    let con = omega.contract_along_cut(cut)?;
    let ((plus, pmap), (minus, mmap)) = con.pieces();
    let (gs, gcl) = lab.sector(&cut.gamma)?;
    let qp = pmap.vertices.iter().position(|&v| v == con.q_plus).expect("q+ in its piece");
    let qm = mmap.vertices.iter().position(|&v| v == con.q_minus).expect("q- in its piece");
    let pbase = CoveringBase::new(&plus, lab.bounds())?;
    let mbase = CoveringBase::new(&minus, lab.bounds())?;
    if pbase.link_sector(qp).key() != gs.key() {
        return Err(CoveringError::CutMismatch(cut.split.display(c)).into());
    }
    let tp = lab.table(&plus)?.entries();
    let tm = lab.table(&minus)?.entries();
    let v = c.vertices().len();
    let mut rhs: BTreeMap<Vec<ClassKey>, BigRational> = BTreeMap::new();
    for b in &gcl {
        let bs = gs.star_class(lab.group(), b);
        if mbase.link_sector(qm).key() != &bs.base_key {
            return Err(CoveringError::CutMismatch(cut.split.display(c)).into());
        }
        let w = BigRational::from_integer(BigInt::from(b.aut_order + aut_shift));
        for (kp, vp) in tp.iter().filter(|(k, _)| k[qp] == b.class_key) {
            for (km, vm) in tm.iter().filter(|(k, _)| k[qm] == bs.class_key) {
                let mut key = vec![ClassKey(String::new()); v];
                for (i, &x) in pmap.vertices.iter().enumerate() {
                    if x < v {
                        key[x] = kp[i].clone();
                    }
                }
                for (i, &x) in mmap.vertices.iter().enumerate() {
                    if x < v {
                        key[x] = km[i].clone();
                    }
                }
                *rhs.entry(key).or_insert_with(BigRational::zero) += vp * &w * vm;
            }
        }
    }
    let lhs = nonzero(lab.table(omega)?.entries());
    let mut r = VerificationReport::default();
    r.push_tables(
        if aut_shift == 0 { "gluing" } else { "gluing-mutated" },
        &format!("{name}:{}/{}", cut.split.display(c), lab.config().tag()),
        &lhs,
        &nonzero(rhs),
    );
    Ok(r)
}

/// Gluing identity on every certificate cut, plus a mutation per complex that
/// must be detected.
pub fn verify_gluing_catalog(lab: &Lab, catalog: &[(String, BraneComplex)]) -> Result<VerificationReport, LabError> {
    let mut r = VerificationReport::default();
    for (name, omega) in catalog {
        for cut in omega.certificate() {
            r.extend(verify_gluing_identity(lab, name, omega, cut, 0)?);
        }
        if let Some(cut) = omega.certificate().first() {
            let m = verify_gluing_identity(lab, name, omega, cut, 1)?;
            let detected = !m.all_passed();
            r.push(
                "mutation-detected",
                &format!("{name}/{}", lab.config().tag()),
                BigRational::one(),
                if detected { BigRational::one() } else { BigRational::zero() },
            );
        }
    }
    Ok(r)
}

/// Theory kinds for [`character_oracle`].
#[derive(Clone, Debug)]
pub enum OracleKind {
    Degree(usize),
    Group(FiniteGroup),
}

/// `#{(g_1..g_n) : g_i in c_i, g_1 ... g_n = 1} / |G|`, by direct enumeration.
pub fn character_oracle(kind: &OracleKind, classes: &[String], bounds: &Bounds) -> Result<BigRational, CoveringError> {
    let g = match kind {
        OracleKind::Degree(d) => degree_group(*d, bounds)?,
        OracleKind::Group(g) => g.clone(),
    };
    let members: Vec<&[usize]> = classes
        .iter()
        .map(|n| {
            g.class_by_name(n)
                .map(|c| g.classes()[c].members.as_slice())
                .ok_or_else(|| CoveringError::UnknownClass(n.clone()))
        })
        .collect::<Result<_, _>>()?;
    let Some((last, rest)) = members.split_last() else {
        return Ok(BigRational::zero());
    };
    let size: u64 = rest.iter().map(|m| m.len() as u64).product();
    if size > bounds.max_states {
        return Err(CoveringError::OutOfBounds(format!("{size} tuples")));
    }
    fn walk(g: &FiniteGroup, rest: &[&[usize]], acc: usize, last: &[usize]) -> u64 {
        match rest.split_first() {
            None => last.contains(&g.inv(acc)) as u64,
            Some((m, tail)) => m.iter().map(|&x| walk(g, tail, g.mul(acc, x), last)).sum(),
        }
    }
    let n = walk(&g, rest, g.identity(), last);
    Ok(ratio(n, g.order() as u64))
}

/// The same count from a shipped character table, when there is one:
/// `prod |c_i| / |G|^2 * sum_chi prod chi(c_i) / chi(1)^(n-2)`.
pub fn character_formula(g: &FiniteGroup, classes: &[String]) -> Option<BigRational> {
    let table = g.character_table()?;
    let cols: Vec<usize> = classes.iter().map(|n| g.class_by_name(n)).collect::<Option<_>>()?;
    let n = cols.len() as i32;
    let size: BigRational = cols
        .iter()
        .map(|&c| BigRational::from_integer(BigInt::from(g.classes()[c].members.len())))
        .product();
    let order = BigRational::from_integer(BigInt::from(g.order()));
    let sum: BigRational = table
        .iter()
        .map(|row| {
            let p: BigRational = cols.iter().map(|&c| BigRational::from_integer(row[c].into())).product();
            let dim = BigRational::from_integer(row[0].into());
            if n >= 2 {
                p / num::pow(dim, (n - 2) as usize)
            } else {
                p * num::pow(dim, (2 - n) as usize)
            }
        })
        .sum();
    Some(size * sum / (order.clone() * order))
}

/// The chain evaluator against direct enumeration on every basis tuple.
pub fn cross_check_evaluator(
    lab: &Lab,
    h: &HurwitzAlgebra,
    name: &str,
    omega: &BraneComplex,
) -> Result<VerificationReport, LabError> {
    let c = omega.complex();
    if !c.is_connected() {
        return Err(LabError::Unsupported("the evaluator needs a connected complex".into()));
    }
    let missing = |s: &ColoredComplex| {
        [s.clone(), s.star_involution()]
            .iter()
            .any(|x| h.sector_of(&x.canonical_key()).is_none())
    };
    for cut in omega.certificate() {
        if missing(&cut.gamma) {
            return Err(AlgebraError::TruncationInsufficient(cut.split.display(c)).into());
        }
    }
    let order = &omega.orders()[0];
    let mut sectors = Vec::new();
    for &q in order {
        let link = c.link(q)?.graph;
        let s = h
            .sector_of(&link.canonical_key())
            .ok_or_else(|| AlgebraError::TruncationInsufficient(c.vertices()[q].id.clone()))?;
        sectors.push(s);
    }
    let base = CoveringBase::new(omega, lab.bounds())?;
    for (i, &q) in order.iter().enumerate() {
        if base.link_sector(q).key() != h.sectors[sectors[i]].key() {
            return Err(LabError::Unsupported("link sector keys disagree".into()));
        }
    }
    let direct = nonzero(lab.table(omega)?.entries());
    let dims: Vec<usize> = sectors.iter().map(|&s| h.classes[s].len()).collect();
    let total: usize = dims.iter().product();
    let computed = (0..total)
        .into_par_iter()
        .map(|mut t| {
            let mut idx = vec![0; dims.len()];
            for i in (0..dims.len()).rev() {
                idx[i] = t % dims[i];
                t /= dims[i];
            }
            let xs: Vec<Vec<BigRational>> = idx
                .iter()
                .zip(&dims)
                .map(|(&i, &d)| {
                    let mut v = vec![BigRational::zero(); d];
                    v[i] = BigRational::one();
                    v
                })
                .collect();
            let val = h.algebra.evaluate_phi(&sectors, &xs)?;
            let mut key = vec![ClassKey(String::new()); order.len()];
            for (pos, &q) in order.iter().enumerate() {
                key[q] = h.classes[sectors[pos]][idx[pos]].class_key.clone();
            }
            Ok((key, val))
        })
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    let mut r = VerificationReport::default();
    r.push_tables(
        "evaluator",
        &format!("{name}/{}", lab.config().tag()),
        &direct,
        &nonzero(computed.into_iter().collect()),
    );
    Ok(r)
}

fn random_invertible(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let m: Matrix = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| BigRational::new(rng.gen_range(-3..=3).into(), rng.gen_range(1..=3).into()))
                    .collect()
            })
            .collect();
        if invert(&m).is_some() {
            return m;
        }
    }
}

/// Basis-change invariance of the evaluator on the link sectors of `omega`:
/// `changes` random rational bases, each tested on `inputs` random arguments.
pub fn verify_basis_change(
    h: &HurwitzAlgebra,
    name: &str,
    omega: &BraneComplex,
    changes: usize,
    inputs: usize,
    seed: u64,
) -> Result<VerificationReport, LabError> {
    let c = omega.complex();
    let sectors: Vec<usize> = omega.orders()[0]
        .iter()
        .map(|&q| {
            h.sector_of(&c.link(q)?.graph.canonical_key())
                .ok_or_else(|| AlgebraError::TruncationInsufficient(c.vertices()[q].id.clone()).into())
        })
        .collect::<Result<_, LabError>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agree = 0usize;
    for _ in 0..changes {
        let ms: Vec<Matrix> = h
            .algebra
            .sectors()
            .iter()
            .map(|s| random_invertible(s.basis.len(), &mut rng))
            .collect();
        let changed = h.algebra.change_basis(&ms)?;
        let mut ok = true;
        for _ in 0..inputs {
            let new: Vec<Vec<BigRational>> = sectors
                .iter()
                .map(|&s| {
                    (0..ms[s].len())
                        .map(|_| BigRational::from_integer(rng.gen_range(-4..=4).into()))
                        .collect()
                })
                .collect();
            // coordinates in the old basis: row vector times the change matrix
            let old: Vec<Vec<BigRational>> = new
                .iter()
                .zip(&sectors)
                .map(|(x, &s)| {
                    (0..ms[s].len())
                        .map(|j| x.iter().enumerate().map(|(i, xi)| xi * &ms[s][i][j]).sum())
                        .collect()
                })
                .collect();
            if changed.evaluate_phi(&sectors, &new)? != h.algebra.evaluate_phi(&sectors, &old)? {
                ok = false;
            }
        }
        agree += ok as usize;
    }
    let mut r = VerificationReport::default();
    r.push(
        "basis-change",
        name,
        BigRational::from_integer(changes.into()),
        BigRational::from_integer(agree.into()),
    );
    Ok(r)
}

/// Structural checks of a built algebra. Counted checks report the number of
/// items examined as expected and the number that passed as computed.
pub fn verify_algebra(h: &HurwitzAlgebra, tag: &str) -> VerificationReport {
    let mut r = VerificationReport::default();
    let int = |n: usize| BigRational::from_integer(n.into());
    let n = h.algebra.sectors().len();
    for a in h.algebra.verify_axioms() {
        if a.axiom == "crossing" {
            continue;
        }
        r.push(&format!("axiom-{}", a.axiom), tag, int(1), int(a.passed as usize));
    }
    let tuples = h.algebra.crossing_tuples().len();
    let crossing = h.algebra.crossing_check();
    let assoc = h.algebra.associativity_check();
    r.push("axiom-crossing", tag, int(tuples), int(crossing.as_ref().map_or(0, |&k| k)));
    r.push("associativity", tag, int(tuples), int(assoc.as_ref().map_or(0, |&k| k)));
    r.push(
        "crossing-vs-associativity",
        tag,
        int(crossing.is_ok() as usize),
        int(assoc.is_ok() as usize),
    );
    let copairing = (0..n).filter(|&s| h.algebra.copairing_identity(s)).count();
    r.push("copairing-identity", tag, int(n), int(copairing));
    r
}

/// Compares the `S_d` algebra with the degree-`d` algebra entrywise after
/// mapping bases through the symmetric-group correspondence.
pub fn compare_sd(group_side: &HurwitzAlgebra, degree_side: &HurwitzAlgebra, g: &FiniteGroup) -> Result<VerificationReport, LabError> {
    g.symmetric_degree().ok_or(CoveringError::NotSymmetricGroup)?;
    let n = group_side.algebra.sectors().len();
    if n != degree_side.algebra.sectors().len() {
        return Err(AlgebraError::SectorMismatch("different sector sets".into()).into());
    }
    // basis map: group-side index -> degree-side index, per sector
    let mut maps = Vec::new();
    for s in 0..n {
        let key = &group_side.algebra.sectors()[s].label.key;
        let t = degree_side
            .sector_of(key)
            .ok_or_else(|| AlgebraError::SectorMismatch(key.to_string()))?;
        if t != s {
            return Err(AlgebraError::SectorMismatch(key.to_string()).into());
        }
        let m = group_side.classes[s]
            .iter()
            .map(|c| {
                let k = sd_correspondence(&group_side.sectors[s], g, c)?.class_key;
                degree_side.basis_index(s, &k).ok_or(CoveringError::UnknownClass(k.0))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let distinct: BTreeSet<&usize> = m.iter().collect();
        if distinct.len() != m.len() || m.len() != degree_side.classes[s].len() {
            return Err(LabError::Unsupported("correspondence is not a bijection".into()));
        }
        maps.push(m);
    }
    let mut gram_g = BTreeMap::new();
    let mut gram_d = BTreeMap::new();
    for s in 0..n {
        let t = group_side.algebra.sectors()[s].star;
        for i in 0..maps[s].len() {
            for j in 0..maps[t].len() {
                gram_g.insert((s, maps[s][i], maps[t][j]), group_side.algebra.gram(s)[i][j].clone());
                gram_d.insert((s, maps[s][i], maps[t][j]), degree_side.algebra.gram(s)[maps[s][i]][maps[t][j]].clone());
            }
        }
    }
    let mut r = VerificationReport::default();
    r.push_tables("sd-gram", g.name(), &nonzero(gram_d), &nonzero(gram_g));
    let mut tri_g = BTreeMap::new();
    let mut tri_d = BTreeMap::new();
    for b in group_side.algebra.blocks() {
        let s = b.sectors;
        let dims = s.map(|x| maps[x].len());
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    let di = [maps[s[0]][i], maps[s[1]][j], maps[s[2]][k]];
                    tri_g.insert((s, di), group_side.algebra.trilinear(s, [i, j, k]));
                    tri_d.insert((s, di), degree_side.algebra.trilinear(s, di));
                }
            }
        }
    }
    r.push_tables("sd-trilinear", g.name(), &nonzero(tri_d), &nonzero(tri_g));
    Ok(r)
}

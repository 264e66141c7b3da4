//! Coverings of vertex complexes (graphs) and their classes.

use super::frame::Frame;
use super::{Bounds, ClassKey, CoveringClass, CoveringError};
use crate::complex::{CanonicalKey, ColoredComplex};
use crate::group::FiniteGroup;

/// A connected graph in canonical form, ready to carry coverings.
///
/// Nodes are the vertices followed by the edges; edge `e` has arcs `2e` (to
/// its tail) and `2e + 1` (to its head).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sector {
    key: CanonicalKey,
    complex: ColoredComplex,
    frame: Frame,
}

impl Sector {
    pub fn new(sigma: &ColoredComplex) -> Result<Sector, CoveringError> {
        Ok(Sector::with_edge_map(sigma)?.0)
    }

    /// Also returns the map from edges of `sigma` to edges of the canonical copy.
    pub fn with_edge_map(sigma: &ColoredComplex) -> Result<(Sector, Vec<usize>), CoveringError> {
        if sigma.dim() > 1 {
            return Err(CoveringError::NotAGraph);
        }
        let (complex, cf) = sigma.canonical_copy();
        let v = complex.vertices().len();
        let mut arcs = Vec::new();
        for (i, e) in complex.edges().iter().enumerate() {
            arcs.push((v + i, e.tail));
            arcs.push((v + i, e.head));
        }
        let frame = Frame::new(v + complex.edges().len(), arcs);
        Ok((
            Sector {
                key: cf.key,
                complex,
                frame,
            },
            cf.edge_map,
        ))
    }

    pub fn key(&self) -> &CanonicalKey {
        &self.key
    }

    /// The canonical copy of the graph.
    pub fn complex(&self) -> &ColoredComplex {
        &self.complex
    }

    pub fn arc_count(&self) -> usize {
        self.frame.arcs.len()
    }

    /// Positive-dimension cells plus vertices: every node carries sheets.
    pub fn node_count(&self) -> usize {
        self.frame.nodes
    }

    /// Class of the covering with the given arc labels (canonical edge order).
    pub fn class_of(&self, g: &FiniteGroup, labels: &[usize]) -> CoveringClass {
        let n = self.frame.normalize(g, labels);
        let (canon, aut) = self.frame.canonize(g, &n);
        CoveringClass {
            base_key: self.key.clone(),
            class_key: ClassKey(self.frame.key_text(g, &canon)),
            aut_order: aut,
            labels: canon,
        }
    }

    pub fn trivial_class(&self, g: &FiniteGroup) -> CoveringClass {
        self.class_of(g, &vec![g.identity(); self.arc_count()])
    }

    /// Every class, ordered by representative labels.
    pub fn classes(&self, g: &FiniteGroup, bounds: &Bounds) -> Result<Vec<CoveringClass>, CoveringError> {
        let k = self.frame.nontree_count() as u32;
        let total = (g.order() as u64)
            .checked_pow(k)
            .filter(|&t| t <= bounds.max_states)
            .ok_or_else(|| {
                CoveringError::OutOfBounds(format!(
                    "{}^{} labelings over a sector",
                    g.order(),
                    k
                ))
            })?;
        let mut seen = std::collections::BTreeMap::new();
        for i in 0..total {
            let labels = self.frame.tree_fixed(g, i);
            let (canon, aut) = self.frame.canonize(g, &labels);
            seen.entry(canon).or_insert(aut);
        }
        Ok(seen
            .into_iter()
            .map(|(canon, aut)| CoveringClass {
                base_key: self.key.clone(),
                class_key: ClassKey(self.frame.key_text(g, &canon)),
                aut_order: aut,
                labels: canon,
            })
            .collect())
    }

    /// The starred sector.
    pub fn star(&self) -> Sector {
        Sector::new(&self.complex.star_involution()).expect("star of a graph")
    }

    /// The same covering read over the starred graph.
    pub fn star_class(&self, g: &FiniteGroup, c: &CoveringClass) -> CoveringClass {
        let starred = self.complex.star_involution();
        let (s, emap) = Sector::with_edge_map(&starred).expect("star of a graph");
        let mut labels = vec![g.identity(); c.labels.len()];
        for (e, &ce) in emap.iter().enumerate() {
            // tail and head swap roles
            labels[2 * ce] = c.labels[2 * e + 1];
            labels[2 * ce + 1] = c.labels[2 * e];
        }
        s.class_of(g, &labels)
    }

    fn is_cycle(&self) -> bool {
        let c = &self.complex;
        c.is_connected()
            && !c.edges().is_empty()
            && c.vertices().len() == c.edges().len()
            && (0..c.vertices().len()).all(|v| c.degree(v) == 2)
    }

    /// Holonomy around a cycle graph, starting at vertex 0 and leaving along
    /// its first outgoing edge.
    pub fn holonomy(&self, g: &FiniteGroup, labels: &[usize]) -> Option<usize> {
        if !self.is_cycle() {
            return None;
        }
        let edges = self.complex.edges();
        let incident = |v: usize| (0..edges.len()).filter(move |&e| edges[e].tail == v || edges[e].head == v);
        let mut e = incident(0)
            .find(|&e| edges[e].tail == 0)
            .or_else(|| incident(0).next())?;
        let mut at = 0;
        let mut hol = g.identity();
        for _ in 0..edges.len() {
            let (from_end, to_end, to) = if edges[e].tail == at {
                (0, 1, edges[e].head)
            } else {
                (1, 0, edges[e].tail)
            };
            let step = g.mul(labels[2 * e + to_end], g.inv(labels[2 * e + from_end]));
            hol = g.mul(step, hol);
            at = to;
            e = incident(at).find(|&x| x != e)?;
        }
        Some(hol)
    }

    /// Display name: `pt` over a point, the holonomy class over a cycle, and
    /// `k<i>` (position in [`Self::classes`]) otherwise.
    pub fn class_name(&self, g: &FiniteGroup, c: &CoveringClass, bounds: &Bounds) -> String {
        if self.complex.edges().is_empty() && self.complex.vertices().len() == 1 {
            return "pt".into();
        }
        if let Some(h) = self.holonomy(g, &c.labels) {
            return g.classes()[g.class_of(h)].name.clone();
        }
        match self.classes(g, bounds) {
            Ok(all) => match all.iter().position(|x| x.class_key == c.class_key) {
                Some(i) => format!("k{i}"),
                None => c.class_key.0.clone(),
            },
            Err(_) => c.class_key.0.clone(),
        }
    }

    /// Inverse of [`Self::class_name`]; also accepts a raw class key.
    pub fn class_by_name(
        &self,
        g: &FiniteGroup,
        name: &str,
        bounds: &Bounds,
    ) -> Result<CoveringClass, CoveringError> {
        let all = self.classes(g, bounds)?;
        let name = name.trim();
        if let Some(i) = name.strip_prefix('k').and_then(|s| s.parse::<usize>().ok()) {
            if let Some(c) = all.get(i) {
                return Ok(c.clone());
            }
        }
        if self.is_cycle() {
            if let Some(cls) = g.class_by_name(name) {
                if let Some(c) = all
                    .iter()
                    .find(|c| self.holonomy(g, &c.labels).map(|h| g.class_of(h)) == Some(cls))
                {
                    return Ok(c.clone());
                }
            }
        }
        if name == "pt" && all.len() == 1 {
            return Ok(all[0].clone());
        }
        all.into_iter()
            .find(|c| c.class_key.0 == name)
            .ok_or_else(|| CoveringError::UnknownClass(name.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{bigon_circle, point, theta_graph};
    use crate::group::symmetric_lex;

    fn auts(sigma: &ColoredComplex, d: usize) -> Vec<u64> {
        let g = symmetric_lex(d);
        let s = Sector::new(sigma).unwrap();
        s.classes(&g, &Bounds::default())
            .unwrap()
            .iter()
            .map(|c| c.aut_order)
            .collect()
    }

    #[test]
    fn circle_classes() {
        assert_eq!(auts(&bigon_circle(), 2), vec![2, 2]);
        let mut a = auts(&bigon_circle(), 3);
        a.sort();
        assert_eq!(a, vec![2, 3, 6]);
    }

    #[test]
    fn point_has_one_class() {
        for d in 1..=4 {
            let f: u64 = (1..=d as u64).product();
            assert_eq!(auts(&point(), d), vec![f]);
        }
    }

    #[test]
    fn theta_has_eleven_classes_in_degree_three() {
        assert_eq!(auts(&theta_graph(), 3).len(), 11);
    }

    #[test]
    fn names_round_trip_on_the_circle() {
        let g = symmetric_lex(3);
        let b = Bounds::default();
        let s = Sector::new(&bigon_circle()).unwrap();
        let mut names = Vec::new();
        for c in s.classes(&g, &b).unwrap() {
            let n = s.class_name(&g, &c, &b);
            assert_eq!(s.class_by_name(&g, &n, &b).unwrap(), c);
            names.push(n);
        }
        names.sort();
        assert_eq!(names, vec!["[1,1,1]", "[2,1]", "[3]"]);
    }

    #[test]
    fn star_of_star_is_identity() {
        let g = symmetric_lex(3);
        let s = Sector::new(&theta_graph()).unwrap();
        let ss = s.star();
        for c in s.classes(&g, &Bounds::default()).unwrap() {
            let back = ss.star_class(&g, &s.star_class(&g, &c));
            assert_eq!(back, c);
        }
    }
}

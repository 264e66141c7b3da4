//! Brane complexes: colored complexes with cyclic vertex orders whose every
//! contiguous vertex bipartition is realized by a cut.

use std::collections::HashSet;
use std::fmt;

use super::canon::{complex_canonical_form, CanonicalKey};
use super::cut::Cut;
use super::{CellMaps, ColoredComplex, ComplexError};

/// A bipartition of one component's vertices into two cyclic arcs.
/// Both sides are listed in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Split {
    pub component: usize,
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
}

impl Split {
    pub fn display(&self, c: &ColoredComplex) -> String {
        let names = |s: &[usize]| {
            s.iter()
                .map(|&v| c.vertices()[v].id.clone())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("{{{}}}|{{{}}}", names(&self.side_a), names(&self.side_b))
    }

    /// The same split with the sides exchanged.
    pub fn swapped(&self) -> Split {
        Split {
            component: self.component,
            side_a: self.side_b.clone(),
            side_b: self.side_a.clone(),
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}|{:?}", self.side_a, self.side_b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraneComplex {
    complex: ColoredComplex,
    orders: Vec<Vec<usize>>,
    certificate: Vec<Cut>,
}

impl BraneComplex {
    /// Checks the brane property for orders given by vertex ids.
    pub fn new(complex: ColoredComplex, orders: &[Vec<&str>]) -> Result<Self, ComplexError> {
        let mut idx = Vec::new();
        for o in orders {
            let mut row = Vec::new();
            for id in o {
                row.push(
                    complex
                        .vertex_index(id)
                        .ok_or_else(|| ComplexError::UnknownVertex(id.to_string()))?,
                );
            }
            idx.push(row);
        }
        is_brane(complex, idx)
    }

    pub fn complex(&self) -> &ColoredComplex {
        &self.complex
    }

    /// Cyclic orders, one per component in component order.
    pub fn orders(&self) -> &[Vec<usize>] {
        &self.orders
    }

    /// One realizing cut per unordered contiguous split.
    pub fn certificate(&self) -> &[Cut] {
        &self.certificate
    }

    /// Every unordered contiguous split, side A holding the first vertex of the order.
    pub fn contiguous_splits(&self) -> Vec<Split> {
        contiguous_splits(&self.orders)
    }

    /// Normalizes a vertex set into a split if it is a proper contiguous arc.
    pub fn split(&self, side_a: &[usize]) -> Result<Split, ComplexError> {
        split_from_set(&self.complex, &self.orders, side_a)
    }

    /// Split given by vertex ids.
    pub fn split_by_ids(&self, side_a: &[&str]) -> Result<Split, ComplexError> {
        let mut v = Vec::new();
        for id in side_a {
            v.push(
                self.complex
                    .vertex_index(id)
                    .ok_or_else(|| ComplexError::UnknownVertex(id.to_string()))?,
            );
        }
        self.split(&v)
    }

    pub fn find_cuts(&self, split: &Split) -> Result<Vec<Cut>, ComplexError> {
        check_split(&self.orders, split)?;
        Ok(super::cut::find_cuts(&self.complex, split))
    }

    /// Certificate cut for a split, in the orientation requested.
    pub fn cut_for(&self, split: &Split) -> Result<Cut, ComplexError> {
        self.find_cuts(split)?
            .into_iter()
            .next()
            .ok_or_else(|| ComplexError::MissingCut(split.display(&self.complex)))
    }

    /// Canonical key including the cyclic orders.
    pub fn canonical_key(&self) -> CanonicalKey {
        complex_canonical_form(&self.complex, Some(&self.orders), true)
            .expect("canonical search on a validated complex")
            .key
    }

    /// Component `c` as a standalone brane complex.
    pub fn component(&self, c: usize) -> (BraneComplex, CellMaps) {
        let (sub, maps) = self.complex.component_subcomplex(c);
        let inv: std::collections::HashMap<usize, usize> = maps
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let order = self.orders[c].iter().map(|v| inv[v]).collect();
        let b = is_brane(sub, vec![order]).expect("component of a brane complex is brane");
        (b, maps)
    }

    /// Disjoint union keeping both orders.
    pub fn disjoint_union(&self, other: &BraneComplex) -> BraneComplex {
        let (c, shift) = super::build::union_with_shift(&self.complex, &other.complex);
        let mut orders: Vec<Vec<usize>> = self.orders.clone();
        orders.extend(
            other
                .orders
                .iter()
                .map(|o| o.iter().map(|v| v + shift).collect()),
        );
        is_brane(c, orders).expect("union of brane complexes is brane")
    }
}

pub(crate) fn contiguous_splits(orders: &[Vec<usize>]) -> Vec<Split> {
    let mut out = Vec::new();
    for (c, o) in orders.iter().enumerate() {
        let k = o.len();
        for i in 1..k {
            for j in i..k {
                let side_b: Vec<usize> = o[i..=j].to_vec();
                let side_a: Vec<usize> = o[j + 1..].iter().chain(&o[..i]).copied().collect();
                out.push(Split {
                    component: c,
                    side_a,
                    side_b,
                });
            }
        }
    }
    out
}

fn check_split(orders: &[Vec<usize>], split: &Split) -> Result<(), ComplexError> {
    let o = orders
        .get(split.component)
        .ok_or_else(|| ComplexError::NonContiguousSplit(split.to_string()))?;
    let k = o.len();
    let a = split.side_a.len();
    if a == 0 || split.side_b.is_empty() || a + split.side_b.len() != k {
        return Err(ComplexError::NonContiguousSplit(split.to_string()));
    }
    let start = o
        .iter()
        .position(|&v| v == split.side_a[0])
        .ok_or_else(|| ComplexError::NonContiguousSplit(split.to_string()))?;
    for (j, &v) in split.side_a.iter().chain(&split.side_b).enumerate() {
        if o[(start + j) % k] != v {
            return Err(ComplexError::NonContiguousSplit(split.to_string()));
        }
    }
    Ok(())
}

fn split_from_set(
    c: &ColoredComplex,
    orders: &[Vec<usize>],
    side_a: &[usize],
) -> Result<Split, ComplexError> {
    let set: HashSet<usize> = side_a.iter().copied().collect();
    let bad = || {
        ComplexError::NonContiguousSplit(
            side_a
                .iter()
                .map(|&v| c.vertices().get(v).map_or("?".into(), |x| x.id.clone()))
                .collect::<Vec<_>>()
                .join(","),
        )
    };
    let first = *side_a.first().ok_or_else(bad)?;
    if first >= c.vertices().len() {
        return Err(ComplexError::UnknownVertex(first.to_string()));
    }
    let comp = c.component_of_vertex(first);
    let o = &orders[comp];
    let k = o.len();
    if set.len() != side_a.len() || set.len() >= k || set.iter().any(|v| !o.contains(v)) {
        return Err(bad());
    }
    // start of the arc: a member whose predecessor is not a member
    let start = (0..k)
        .find(|&j| set.contains(&o[j]) && !set.contains(&o[(j + k - 1) % k]))
        .ok_or_else(bad)?;
    let a: Vec<usize> = (0..set.len()).map(|j| o[(start + j) % k]).collect();
    if a.iter().any(|v| !set.contains(v)) {
        return Err(bad());
    }
    let b: Vec<usize> = (set.len()..k).map(|j| o[(start + j) % k]).collect();
    Ok(Split {
        component: comp,
        side_a: a,
        side_b: b,
    })
}

/// Runs the cut search on every contiguous split; returns the brane complex
/// with a complete certificate or the first unrealizable split.
pub fn is_brane(complex: ColoredComplex, orders: Vec<Vec<usize>>) -> Result<BraneComplex, ComplexError> {
    let comps = complex.components();
    if orders.len() != comps.len() {
        return Err(ComplexError::BadOrder(format!(
            "{} orders for {} components",
            orders.len(),
            comps.len()
        )));
    }
    let mut sorted: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    for o in orders {
        let first = *o
            .first()
            .ok_or_else(|| ComplexError::BadOrder("empty order".into()))?;
        if first >= complex.vertices().len() {
            return Err(ComplexError::UnknownVertex(first.to_string()));
        }
        let c = complex.component_of_vertex(first);
        let mut members = o.clone();
        members.sort();
        let mut expected = comps[c].clone();
        expected.sort();
        if members != expected || !sorted[c].is_empty() {
            return Err(ComplexError::BadOrder(format!(
                "order does not list component {} exactly once",
                c
            )));
        }
        sorted[c] = o;
    }
    let mut certificate = Vec::new();
    for split in contiguous_splits(&sorted) {
        match super::cut::find_cuts(&complex, &split).into_iter().next() {
            Some(cut) => certificate.push(cut),
            None => return Err(ComplexError::MissingCut(split.display(&complex))),
        }
    }
    Ok(BraneComplex {
        complex,
        orders: sorted,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{path_graph, single_edge, sphere_complex};

    #[test]
    fn split_counts() {
        let s = sphere_complex(4);
        assert_eq!(s.contiguous_splits().len(), 6);
        assert_eq!(s.certificate().len(), 6);
        assert_eq!(sphere_complex(2).contiguous_splits().len(), 1);
    }

    #[test]
    fn single_edge_is_brane() {
        let e = single_edge("a", "b", "red");
        let b = is_brane(e, vec![vec![0, 1]]).unwrap();
        assert_eq!(b.certificate().len(), 1);
    }

    #[test]
    fn path_center_is_not_separable() {
        // q2 - q1 - q3 with order (q1, q2, q3)
        let p = path_graph();
        let err = BraneComplex::new(p, &[vec!["q1", "q2", "q3"]]).unwrap_err();
        assert_eq!(err, ComplexError::MissingCut("{q1}|{q2,q3}".into()));
    }

    #[test]
    fn non_contiguous_split_is_rejected() {
        let s = sphere_complex(4);
        let err = s.split(&[0, 2]).unwrap_err();
        assert!(matches!(err, ComplexError::NonContiguousSplit(_)));
        let ok = s.split(&[3, 0]).unwrap();
        assert_eq!(ok.side_a, vec![3, 0]);
        assert_eq!(ok.side_b, vec![1, 2]);
    }
}

//! Cuts realizing vertex splits, and contraction of a brane complex along a cut.

use std::collections::HashSet;

use super::brane::{is_brane, BraneComplex, Split};
use super::{CellMaps, ColoredComplex, ComplexError, Orientation, RawComplex};

/// A cut realizing a split: the crossed edges and faces, and the cut complex
/// they span.
///
/// Vertex `i` of `gamma` is the trace of `crossed_edges[i]`; edge `j` of
/// `gamma` is the trace of `crossed_faces[j].0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub split: Split,
    pub crossed_edges: Vec<usize>,
    /// (face, position of the side leaving A, position of the side entering A)
    pub crossed_faces: Vec<(usize, usize, usize)>,
    pub gamma: ColoredComplex,
}

/// Union-find over `n` items; returns the number of classes.
fn count_classes(n: usize, pairs: impl Iterator<Item = (usize, usize)>) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut classes = n;
    for (a, b) in pairs {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            classes -= 1;
        }
    }
    classes
}

fn side_connected(c: &ColoredComplex, side: &[usize]) -> bool {
    let local: std::collections::HashMap<usize, usize> =
        side.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let pairs = c.edges().iter().filter_map(|e| {
        match (local.get(&e.tail), local.get(&e.head)) {
            (Some(&a), Some(&b)) => Some((a, b)),
            _ => None,
        }
    });
    count_classes(side.len(), pairs) == 1
}

/// Checks whether the edge set `crossed` realizes `split` and builds the cut.
pub(crate) fn cut_from_edges(
    c: &ColoredComplex,
    split: &Split,
    crossed: &[usize],
) -> Option<Cut> {
    let a: HashSet<usize> = split.side_a.iter().copied().collect();
    let b: HashSet<usize> = split.side_b.iter().copied().collect();
    let in_cut: HashSet<usize> = crossed.iter().copied().collect();
    if crossed.is_empty() {
        return None;
    }
    // every crossed edge straddles the split, every straddling edge is crossed
    for (i, e) in c.edges().iter().enumerate() {
        let straddles = (a.contains(&e.tail) && b.contains(&e.head))
            || (b.contains(&e.tail) && a.contains(&e.head));
        if straddles != in_cut.contains(&i) {
            return None;
        }
    }
    if !side_connected(c, &split.side_a) || !side_connected(c, &split.side_b) {
        return None;
    }
    let mut crossed_faces = Vec::new();
    for (fi, f) in c.faces().iter().enumerate() {
        let hits: Vec<usize> = (0..f.boundary.len())
            .filter(|&j| in_cut.contains(&f.boundary[j].edge))
            .collect();
        match hits.len() {
            0 => {}
            2 => {
                let (p, q) = (hits[0], hits[1]);
                if a.contains(&c.side_start(f.boundary[p])) {
                    crossed_faces.push((fi, p, q));
                } else {
                    crossed_faces.push((fi, q, p));
                }
            }
            _ => return None,
        }
    }
    let local: std::collections::HashMap<usize, usize> =
        crossed.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let links = crossed_faces.iter().map(|&(f, p, q)| {
        let bd = &c.faces()[f].boundary;
        (local[&bd[p].edge], local[&bd[q].edge])
    });
    if count_classes(crossed.len(), links) != 1 {
        return None;
    }

    let mut raw = RawComplex::new();
    for &e in crossed {
        let edge = &c.edges()[e];
        let o = if a.contains(&edge.tail) {
            Orientation::In
        } else {
            Orientation::Out
        };
        raw = raw.labeled_vertex(&edge.id, edge.color.as_str(), o);
    }
    for &(f, p, q) in &crossed_faces {
        let face = &c.faces()[f];
        raw = raw.edge(
            &face.id,
            &c.edges()[face.boundary[p].edge].id,
            &c.edges()[face.boundary[q].edge].id,
            face.color.as_str(),
        );
    }
    let gamma = raw.validate().ok()?;
    Some(Cut {
        split: split.clone(),
        crossed_edges: crossed.to_vec(),
        crossed_faces,
        gamma,
    })
}

/// All cuts realizing `split`. The crossed edges are forced to be the edges
/// straddling the split, so there is at most one.
pub(crate) fn find_cuts(c: &ColoredComplex, split: &Split) -> Vec<Cut> {
    let a: HashSet<usize> = split.side_a.iter().copied().collect();
    let crossed: Vec<usize> = c
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| {
            c.component_of_vertex(e.tail) == split.component
                && a.contains(&e.tail) != a.contains(&e.head)
        })
        .map(|(i, _)| i)
        .collect();
    cut_from_edges(c, split, &crossed).into_iter().collect()
}

/// Result of contracting a brane complex along a cut: side A is glued to a new
/// vertex `q_plus` and side B to a new vertex `q_minus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub complex: BraneComplex,
    pub cut: Cut,
    pub q_plus: usize,
    pub q_minus: usize,
    /// new edge -> original edge
    pub edge_origin: Vec<usize>,
    /// new face -> (original face, original boundary position of each side)
    pub face_origin: Vec<(usize, Vec<usize>)>,
}

impl Contraction {
    /// The component holding `q_plus`, then the one holding `q_minus`, each with
    /// cell maps into the contracted complex.
    pub fn pieces(&self) -> ((BraneComplex, CellMaps), (BraneComplex, CellMaps)) {
        let c = self.complex.complex();
        let p = self.complex.component(c.component_of_vertex(self.q_plus));
        let m = self.complex.component(c.component_of_vertex(self.q_minus));
        (p, m)
    }
}

fn fresh(base: String, taken: &mut HashSet<String>) -> String {
    let mut id = base;
    while taken.contains(&id) {
        id.push('\'');
    }
    taken.insert(id.clone());
    id
}

impl BraneComplex {
    /// Contracts along a cut of this complex.
    pub fn contract_along_cut(&self, cut: &Cut) -> Result<Contraction, ComplexError> {
        let c = self.complex();
        let reference = self.cut_for(&cut.split)?;
        if reference.crossed_edges != cut.crossed_edges
            || reference.crossed_faces != cut.crossed_faces
        {
            return Err(ComplexError::CutMismatch(cut.split.display(c)));
        }
        let a: HashSet<usize> = cut.split.side_a.iter().copied().collect();
        let crossed: HashSet<usize> = cut.crossed_edges.iter().copied().collect();

        let mut vids: HashSet<String> = c.vertices().iter().map(|v| v.id.clone()).collect();
        let mut eids: HashSet<String> = c.edges().iter().map(|e| e.id.clone()).collect();
        let mut fids: HashSet<String> = c.faces().iter().map(|f| f.id.clone()).collect();
        let qp = fresh("cut+".into(), &mut vids);
        let qm = fresh("cut-".into(), &mut vids);

        let mut raw = RawComplex::new();
        for v in c.vertices() {
            raw = match &v.label {
                Some(l) => raw.labeled_vertex(&v.id, l.color.as_str(), l.orientation),
                None => raw.vertex(&v.id),
            };
        }
        raw = raw.vertex(&qp).vertex(&qm);

        let mut edge_origin = Vec::new();
        // original edge -> (plus copy id, minus copy id), or its own id twice
        let mut copies: Vec<(String, String)> = Vec::new();
        for (i, e) in c.edges().iter().enumerate() {
            let tail = &c.vertices()[e.tail].id;
            let head = &c.vertices()[e.head].id;
            if !crossed.contains(&i) {
                raw = raw.edge(&e.id, tail, head, e.color.as_str());
                edge_origin.push(i);
                copies.push((e.id.clone(), e.id.clone()));
                continue;
            }
            let plus = fresh(format!("{}+", e.id), &mut eids);
            let minus = fresh(format!("{}-", e.id), &mut eids);
            if a.contains(&e.tail) {
                raw = raw
                    .edge(&plus, tail, &qp, e.color.as_str())
                    .edge(&minus, &qm, head, e.color.as_str());
            } else {
                raw = raw
                    .edge(&plus, &qp, head, e.color.as_str())
                    .edge(&minus, tail, &qm, e.color.as_str());
            }
            edge_origin.push(i);
            edge_origin.push(i);
            copies.push((plus, minus));
        }

        let mut face_origin = Vec::new();
        let crossed_at: std::collections::HashMap<usize, (usize, usize)> = cut
            .crossed_faces
            .iter()
            .map(|&(f, p, q)| (f, (p, q)))
            .collect();
        for (fi, f) in c.faces().iter().enumerate() {
            let k = f.boundary.len();
            let side = |j: usize, plus: bool| {
                let s = f.boundary[j];
                let (p, m) = &copies[s.edge];
                (if plus { p.clone() } else { m.clone() }, s.forward)
            };
            match crossed_at.get(&fi) {
                None => {
                    let bd: Vec<(String, bool)> = (0..k).map(|j| side(j, true)).collect();
                    push_face(&mut raw, &f.id, f.color.as_str(), &bd);
                    face_origin.push((fi, (0..k).collect()));
                }
                Some(&(p, q)) => {
                    // plus face: arc inside A from the end of q to the start of p, then p and q
                    let mut pos_a: Vec<usize> = Vec::new();
                    let mut j = (q + 1) % k;
                    while j != p {
                        pos_a.push(j);
                        j = (j + 1) % k;
                    }
                    pos_a.push(p);
                    pos_a.push(q);
                    let mut pos_b: Vec<usize> = vec![p];
                    let mut j = (p + 1) % k;
                    while j != q {
                        pos_b.push(j);
                        j = (j + 1) % k;
                    }
                    pos_b.push(q);
                    let bd_a: Vec<(String, bool)> = pos_a.iter().map(|&j| side(j, true)).collect();
                    let bd_b: Vec<(String, bool)> =
                        pos_b.iter().map(|&j| side(j, false)).collect();
                    let plus = fresh(format!("{}+", f.id), &mut fids);
                    let minus = fresh(format!("{}-", f.id), &mut fids);
                    push_face(&mut raw, &plus, f.color.as_str(), &bd_a);
                    push_face(&mut raw, &minus, f.color.as_str(), &bd_b);
                    face_origin.push((fi, pos_a));
                    face_origin.push((fi, pos_b));
                }
            }
        }

        let out = raw.validate()?;
        let q_plus = c.vertices().len();
        let q_minus = q_plus + 1;
        let mut orders: Vec<Vec<usize>> = Vec::new();
        for (ci, o) in self.orders().iter().enumerate() {
            if ci == cut.split.component {
                let mut oa = cut.split.side_a.clone();
                oa.push(q_plus);
                let mut ob = cut.split.side_b.clone();
                ob.push(q_minus);
                orders.push(oa);
                orders.push(ob);
            } else {
                orders.push(o.clone());
            }
        }
        let complex = is_brane(out, orders)?;
        Ok(Contraction {
            complex,
            cut: cut.clone(),
            q_plus,
            q_minus,
            edge_origin,
            face_origin,
        })
    }
}

fn push_face(raw: &mut RawComplex, id: &str, color: &str, bd: &[(String, bool)]) {
    let refs: Vec<(&str, bool)> = bd.iter().map(|(e, f)| (e.as_str(), *f)).collect();
    *raw = std::mem::take(raw).face(id, color, &refs);
}

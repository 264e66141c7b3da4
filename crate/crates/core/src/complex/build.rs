//! Constructors for standard complexes.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::brane::{is_brane, BraneComplex};
use super::{ColoredComplex, ComplexError, Orientation, RawComplex};

/// A single vertex, the link of an endpoint of an edge colored `a`.
pub fn point() -> ColoredComplex {
    RawComplex::new()
        .labeled_vertex("x", "a", Orientation::Out)
        .validate()
        .expect("point")
}

/// One edge `tail -> head`.
pub fn single_edge(tail: &str, head: &str, color: &str) -> ColoredComplex {
    RawComplex::new()
        .vertex(tail)
        .vertex(head)
        .edge("e", tail, head, color)
        .validate()
        .expect("single edge")
}

/// The link of an equatorial vertex of a sphere: two labeled vertices joined by
/// a directed two-cycle.
pub fn bigon_circle() -> ColoredComplex {
    RawComplex::new()
        .labeled_vertex("x", "a", Orientation::In)
        .labeled_vertex("y", "b", Orientation::Out)
        .edge("n", "x", "y", "N")
        .edge("s", "y", "x", "S")
        .validate()
        .expect("bigon circle")
}

/// Three parallel edges between an incoming and an outgoing vertex.
pub fn theta_graph() -> ColoredComplex {
    RawComplex::new()
        .labeled_vertex("x", "a", Orientation::In)
        .labeled_vertex("y", "b", Orientation::Out)
        .edge("r", "x", "y", "R")
        .edge("g", "x", "y", "G")
        .edge("b", "x", "y", "B")
        .validate()
        .expect("theta graph")
}

/// Directed triangle `q1 -> q2 -> q3 -> q1`.
pub fn triangle_graph() -> ColoredComplex {
    RawComplex::new()
        .vertex("q1")
        .vertex("q2")
        .vertex("q3")
        .edge("e1", "q1", "q2", "a")
        .edge("e2", "q2", "q3", "b")
        .edge("e3", "q3", "q1", "c")
        .validate()
        .expect("triangle")
}

/// Star-shaped path `q2 <- q1 -> q3`.
pub fn path_graph() -> ColoredComplex {
    RawComplex::new()
        .vertex("q1")
        .vertex("q2")
        .vertex("q3")
        .edge("e1", "q1", "q2", "a")
        .edge("e2", "q1", "q3", "b")
        .validate()
        .expect("path")
}

/// Sphere with `n >= 2` vertices on the equator, edges `e_i: q_i -> q_{i+1}`
/// and two hemispheres `N` and `S`, ordered along the equator.
pub fn sphere_complex(n: usize) -> BraneComplex {
    assert!(n >= 2, "sphere needs at least two equator vertices");
    let mut raw = RawComplex::new();
    for i in 1..=n {
        raw = raw.vertex(&format!("q{i}"));
    }
    let mut north = Vec::new();
    for i in 1..=n {
        let j = i % n + 1;
        let id = format!("e{i}");
        raw = raw.edge(&id, &format!("q{i}"), &format!("q{j}"), &id);
        north.push(id);
    }
    let n_bd: Vec<(&str, bool)> = north.iter().map(|e| (e.as_str(), true)).collect();
    let s_bd: Vec<(&str, bool)> = north.iter().rev().map(|e| (e.as_str(), false)).collect();
    raw = raw.face("N", "N", &n_bd).face("S", "S", &s_bd);
    let c = raw.validate().expect("sphere");
    is_brane(c, vec![(0..n).collect()]).expect("sphere is brane")
}

/// Two-vertex complex whose first vertex has link `sigma` and whose second has
/// link `star(sigma)`.
pub fn suspension(sigma: &ColoredComplex) -> Result<BraneComplex, ComplexError> {
    if sigma.dim() > 1 {
        return Err(ComplexError::BadOrder(
            "only graphs can be suspended".into(),
        ));
    }
    if !sigma.is_connected() {
        return Err(ComplexError::NotConnected);
    }
    let taken: HashSet<&str> = sigma
        .vertices()
        .iter()
        .filter_map(|v| v.label.as_ref().map(|l| l.color.as_str()))
        .collect();
    let mut raw = RawComplex::new().vertex("q1").vertex("q2");
    let mut out = Vec::new();
    for v in sigma.vertices() {
        let (color, o) = match &v.label {
            Some(l) => (l.color.as_str().to_string(), l.orientation),
            None => {
                let mut c = format!("v.{}", v.id);
                while taken.contains(c.as_str()) {
                    c.push('\'');
                }
                (c, Orientation::Out)
            }
        };
        let is_out = o == Orientation::Out;
        raw = if is_out {
            raw.edge(&v.id, "q1", "q2", &color)
        } else {
            raw.edge(&v.id, "q2", "q1", &color)
        };
        out.push(is_out);
    }
    for a in sigma.edges() {
        let x = &sigma.vertices()[a.tail].id;
        let y = &sigma.vertices()[a.head].id;
        raw = raw.face(
            &a.id,
            a.color.as_str(),
            &[(y.as_str(), out[a.head]), (x.as_str(), !out[a.tail])],
        );
    }
    is_brane(raw.validate()?, vec![vec![0, 1]])
}

/// Glues a connected complex whose vertex links are `sigmas`, in order, if one
/// exists. Each vertex color must occur once outgoing and once incoming, at
/// different positions; corners are stitched into faces by matching colors.
pub fn compatible_complex(sigmas: &[ColoredComplex]) -> Option<BraneComplex> {
    let n = sigmas.len();
    if n < 2 {
        return None;
    }
    // color -> (position, vertex) of its outgoing and incoming occurrences
    let mut ends: BTreeMap<String, (Option<(usize, usize)>, Option<(usize, usize)>)> =
        BTreeMap::new();
    for (i, s) in sigmas.iter().enumerate() {
        if s.dim() > 1 {
            return None;
        }
        for (v, x) in s.vertices().iter().enumerate() {
            let l = x.label.as_ref()?;
            let slot = ends.entry(l.color.as_str().to_string()).or_default();
            let target = match l.orientation {
                Orientation::Out => &mut slot.0,
                Orientation::In => &mut slot.1,
            };
            if target.is_some() {
                return None;
            }
            *target = Some((i, v));
        }
    }
    let mut raw = RawComplex::new();
    for i in 1..=n {
        raw = raw.vertex(&format!("q{i}"));
    }
    // (position, sigma vertex) -> color
    let mut vertex_color: HashMap<(usize, usize), String> = HashMap::new();
    for (color, (out, inc)) in &ends {
        let (out, inc) = ((*out)?, (*inc)?);
        if out.0 == inc.0 {
            return None;
        }
        raw = raw.edge(
            color,
            &format!("q{}", out.0 + 1),
            &format!("q{}", inc.0 + 1),
            color,
        );
        vertex_color.insert(out, color.clone());
        vertex_color.insert(inc, color.clone());
    }
    // corner (i, sigma edge) -> next corner along its face
    let mut corners: Vec<(usize, usize)> = Vec::new();
    for (i, s) in sigmas.iter().enumerate() {
        for a in 0..s.edges().len() {
            corners.push((i, a));
        }
    }
    let index: HashMap<(usize, usize), usize> =
        corners.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut next = vec![usize::MAX; corners.len()];
    let mut seen = vec![false; corners.len()];
    for (k, &(i, a)) in corners.iter().enumerate() {
        let edge = &sigmas[i].edges()[a];
        let leave = &vertex_color[&(i, edge.head)];
        let (out, inc) = ends[leave];
        let (out, inc) = (out?, inc?);
        let other = if out.0 == i { inc } else { out };
        let s = &sigmas[other.0];
        let mut found = s
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, b)| b.tail == other.1 && b.color == edge.color);
        let (b, _) = found.next()?;
        if found.next().is_some() {
            return None;
        }
        let t = index[&(other.0, b)];
        if seen[t] {
            return None;
        }
        seen[t] = true;
        next[k] = t;
    }
    let mut done = vec![false; corners.len()];
    for start in 0..corners.len() {
        if done[start] {
            continue;
        }
        let (i0, a0) = corners[start];
        let color = sigmas[i0].edges()[a0].color.as_str().to_string();
        let mut boundary: Vec<(String, bool)> = Vec::new();
        let mut k = start;
        loop {
            done[k] = true;
            let (i, a) = corners[k];
            let edge = &sigmas[i].edges()[a];
            let leave = vertex_color[&(i, edge.head)].clone();
            let forward = ends[&leave].0 == Some((i, edge.head));
            boundary.push((leave, forward));
            k = next[k];
            if k == start {
                break;
            }
        }
        let refs: Vec<(&str, bool)> = boundary.iter().map(|(e, f)| (e.as_str(), *f)).collect();
        raw = raw.face(&color, &color, &refs);
    }
    let c = raw.validate().ok()?;
    if !c.is_connected() {
        return None;
    }
    for (i, s) in sigmas.iter().enumerate() {
        if c.link(i).ok()?.graph.canonical_key() != s.canonical_key() {
            return None;
        }
    }
    is_brane(c, vec![(0..n).collect()]).ok()
}

/// Disjoint union, renaming ids of `b` that collide with ids of `a`.
pub fn disjoint_union(a: &ColoredComplex, b: &ColoredComplex) -> ColoredComplex {
    union_with_shift(a, b).0
}

pub(crate) fn union_with_shift(a: &ColoredComplex, b: &ColoredComplex) -> (ColoredComplex, usize) {
    // `ids` holds the ids of both complexes, so a renamed id never lands on
    // another id of `b`
    fn rename(ids: &mut HashSet<String>, clash: &HashSet<String>, id: &str, renamed: &mut HashMap<String, String>) -> String {
        if let Some(r) = renamed.get(id) {
            return r.clone();
        }
        let mut out = id.to_string();
        if clash.contains(&out) {
            while ids.contains(&out) {
                out.push('\'');
            }
            ids.insert(out.clone());
        }
        renamed.insert(id.to_string(), out.clone());
        out
    }
    let mut raw = a.to_raw();
    let rb = b.to_raw();
    let va: HashSet<String> = raw.vertices.iter().map(|v| v.id.clone()).collect();
    let ea: HashSet<String> = raw.edges.iter().map(|e| e.id.clone()).collect();
    let fa: HashSet<String> = raw.faces.iter().map(|f| f.id.clone()).collect();
    let mut vids: HashSet<String> = va.iter().cloned().chain(rb.vertices.iter().map(|v| v.id.clone())).collect();
    let mut eids: HashSet<String> = ea.iter().cloned().chain(rb.edges.iter().map(|e| e.id.clone())).collect();
    let mut fids: HashSet<String> = fa.iter().cloned().chain(rb.faces.iter().map(|f| f.id.clone())).collect();
    let (mut vr, mut er, mut fr) = (HashMap::new(), HashMap::new(), HashMap::new());
    for mut v in rb.vertices {
        v.id = rename(&mut vids, &va, &v.id, &mut vr);
        raw.vertices.push(v);
    }
    for mut e in rb.edges {
        e.id = rename(&mut eids, &ea, &e.id, &mut er);
        e.tail = vr[&e.tail].clone();
        e.head = vr[&e.head].clone();
        raw.edges.push(e);
    }
    for mut f in rb.faces {
        f.id = rename(&mut fids, &fa, &f.id, &mut fr);
        for s in &mut f.boundary {
            s.0 = er[&s.0].clone();
        }
        raw.faces.push(f);
    }
    let shift = a.vertices().len();
    (raw.validate().expect("union of valid complexes"), shift)
}

//! Canonical labeling of small labeled digraphs by partition refinement and
//! individualization, and its application to colored complexes.
//!
//! A complex is encoded as a digraph whose nodes are vertices, edges, faces and
//! face sides; arcs record endpoints, side membership, side succession along a
//! face boundary and, for brane complexes, the cyclic vertex order. The search
//! explores every individualization branch without pruning, so the number of
//! leaves reaching the minimal certificate equals the automorphism count.

use std::fmt;

use super::{ColoredComplex, ComplexError};

const LEAF_LIMIT: usize = 200_000;

/// Canonical key of a complex (or brane complex); equal keys iff isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(pub(crate) String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn from_string(s: String) -> Self {
        CanonicalKey(s)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) struct LabeledDigraph {
    pub labels: Vec<String>,
    pub arcs: Vec<(usize, usize, u8)>,
}

pub(crate) struct Labeling {
    /// node -> canonical position
    pub position: Vec<usize>,
    pub automorphisms: usize,
}

type Adjacency = Vec<Vec<(u8, bool, usize)>>;

fn adjacency(g: &LabeledDigraph) -> Adjacency {
    let mut adj = vec![Vec::new(); g.labels.len()];
    for &(u, v, l) in &g.arcs {
        adj[u].push((l, true, v));
        adj[v].push((l, false, u));
    }
    adj
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> (Vec<usize>, usize) {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    let cells = sigs
        .iter()
        .map(|s| sorted.binary_search(s).unwrap())
        .collect();
    (cells, sorted.len())
}

fn refine(adj: &Adjacency, cells: &mut Vec<usize>) {
    let mut count = {
        let mut c = cells.clone();
        c.sort();
        c.dedup();
        c.len()
    };
    loop {
        let sigs: Vec<(usize, Vec<(u8, bool, usize)>)> = (0..cells.len())
            .map(|u| {
                let mut nb: Vec<(u8, bool, usize)> =
                    adj[u].iter().map(|&(l, o, v)| (l, o, cells[v])).collect();
                nb.sort();
                (cells[u], nb)
            })
            .collect();
        let (next, n) = rank(&sigs);
        *cells = next;
        if n == count {
            break;
        }
        count = n;
    }
}

fn certificate(g: &LabeledDigraph, cells: &[usize]) -> Vec<(usize, usize, u8)> {
    let mut cert: Vec<(usize, usize, u8)> = g
        .arcs
        .iter()
        .map(|&(u, v, l)| (cells[u], cells[v], l))
        .collect();
    cert.sort();
    cert
}

struct Search<'a> {
    g: &'a LabeledDigraph,
    adj: Adjacency,
    best: Option<(Vec<(usize, usize, u8)>, Vec<usize>)>,
    ties: usize,
    leaves: usize,
}

impl Search<'_> {
    fn run(&mut self, mut cells: Vec<usize>) -> Result<(), ComplexError> {
        refine(&self.adj, &mut cells);
        let n = cells.len();
        let mut sizes = vec![0usize; n];
        for &c in &cells {
            sizes[c] += 1;
        }
        let target = (0..n).find(|&c| sizes[c] > 1);
        match target {
            None => {
                self.leaves += 1;
                if self.leaves > LEAF_LIMIT {
                    return Err(ComplexError::CanonLimit(LEAF_LIMIT));
                }
                let cert = certificate(self.g, &cells);
                match &self.best {
                    Some((b, _)) if *b < cert => {}
                    Some((b, _)) if *b == cert => self.ties += 1,
                    _ => {
                        self.best = Some((cert, cells));
                        self.ties = 1;
                    }
                }
                Ok(())
            }
            Some(t) => {
                let members: Vec<usize> = (0..n).filter(|&u| cells[u] == t).collect();
                for &u in &members {
                    let sigs: Vec<(usize, bool)> = (0..n)
                        .map(|x| (cells[x], !(x == u)))
                        .collect();
                    let (child, _) = rank(&sigs);
                    self.run(child)?;
                }
                Ok(())
            }
        }
    }
}

pub(crate) fn canonical_labeling(g: &LabeledDigraph) -> Result<Labeling, ComplexError> {
    let (initial, _) = rank(&g.labels);
    let mut s = Search {
        g,
        adj: adjacency(g),
        best: None,
        ties: 0,
        leaves: 0,
    };
    s.run(initial)?;
    let (_, position) = s.best.expect("at least one leaf");
    Ok(Labeling {
        position,
        automorphisms: s.ties,
    })
}

/// Canonical key plus the isomorphism from a complex to its canonical labeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    /// vertex index -> canonical vertex index
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub face_map: Vec<usize>,
    /// Number of automorphisms of the structure that was canonized.
    pub automorphisms: usize,
}

const ARC_TAIL: u8 = 0;
const ARC_HEAD: u8 = 1;
const ARC_SIDE_FACE: u8 = 2;
const ARC_SIDE_EDGE: u8 = 3;
const ARC_SIDE_NEXT: u8 = 4;
const ARC_ORDER_NEXT: u8 = 5;

/// Canonizes `c`, optionally together with cyclic vertex orders, with or
/// without colors in the node labels.
pub(crate) fn complex_canonical_form(
    c: &ColoredComplex,
    orders: Option<&[Vec<usize>]>,
    colored: bool,
) -> Result<CanonicalForm, ComplexError> {
    let nv = c.vertices.len();
    let ne = c.edges.len();
    let nf = c.faces.len();
    let mut labels = Vec::new();
    for v in &c.vertices {
        labels.push(match (&v.label, colored) {
            (Some(l), true) => format!("0{}/{}", l.color, l.orientation.as_str()),
            (Some(l), false) => format!("0/{}", l.orientation.as_str()),
            (None, _) => "0".to_string(),
        });
    }
    for e in &c.edges {
        labels.push(if colored {
            format!("1{}", e.color)
        } else {
            "1".into()
        });
    }
    for f in &c.faces {
        labels.push(if colored {
            format!("2{}", f.color)
        } else {
            "2".into()
        });
    }
    let mut arcs = Vec::new();
    for (i, e) in c.edges.iter().enumerate() {
        arcs.push((nv + i, e.tail, ARC_TAIL));
        arcs.push((nv + i, e.head, ARC_HEAD));
    }
    let mut side_nodes: Vec<Vec<usize>> = Vec::with_capacity(nf);
    for (fi, f) in c.faces.iter().enumerate() {
        let base = labels.len();
        let k = f.boundary.len();
        let mut nodes = Vec::with_capacity(k);
        for (j, s) in f.boundary.iter().enumerate() {
            labels.push(if s.forward { "3+".into() } else { "3-".into() });
            arcs.push((base + j, nv + ne + fi, ARC_SIDE_FACE));
            arcs.push((base + j, nv + s.edge, ARC_SIDE_EDGE));
            arcs.push((base + j, base + (j + 1) % k, ARC_SIDE_NEXT));
            nodes.push(base + j);
        }
        side_nodes.push(nodes);
    }
    if let Some(orders) = orders {
        for o in orders {
            for j in 0..o.len() {
                if o.len() > 1 {
                    arcs.push((o[j], o[(j + 1) % o.len()], ARC_ORDER_NEXT));
                }
            }
        }
    }
    let g = LabeledDigraph { labels, arcs };
    let lab = canonical_labeling(&g)?;

    // Positions are grouped by kind because labels sort by their kind digit.
    let vertex_map: Vec<usize> = (0..nv).map(|v| lab.position[v]).collect();
    let edge_map: Vec<usize> = (0..ne).map(|e| lab.position[nv + e] - nv).collect();
    let face_map: Vec<usize> = (0..nf).map(|f| lab.position[nv + ne + f] - nv - ne).collect();

    let mut vinv = vec![0; nv];
    for (v, &p) in vertex_map.iter().enumerate() {
        vinv[p] = v;
    }
    let mut einv = vec![0; ne];
    for (e, &p) in edge_map.iter().enumerate() {
        einv[p] = e;
    }
    let mut finv = vec![0; nf];
    for (f, &p) in face_map.iter().enumerate() {
        finv[p] = f;
    }

    let mut key = String::new();
    key.push('V');
    for &v in &vinv {
        key.push('[');
        if let Some(l) = &c.vertices[v].label {
            if colored {
                key.push_str(l.color.as_str());
            }
            key.push('/');
            key.push_str(l.orientation.as_str());
        }
        key.push(']');
    }
    key.push_str(";E");
    for &e in &einv {
        let e = &c.edges[e];
        key.push_str(&format!("[{}>{}", vertex_map[e.tail], vertex_map[e.head]));
        if colored {
            key.push(':');
            key.push_str(e.color.as_str());
        }
        key.push(']');
    }
    key.push_str(";F");
    for &f in &finv {
        let face = &c.faces[f];
        key.push('[');
        if colored {
            key.push_str(face.color.as_str());
            key.push(':');
        }
        let nodes = &side_nodes[f];
        let start = (0..nodes.len())
            .min_by_key(|&j| lab.position[nodes[j]])
            .unwrap_or(0);
        let k = face.boundary.len();
        for j in 0..k {
            let s = face.boundary[(start + j) % k];
            key.push_str(&format!(
                "{}{}",
                edge_map[s.edge],
                if s.forward { '+' } else { '-' }
            ));
        }
        key.push(']');
    }
    if let Some(orders) = orders {
        let mut rendered: Vec<String> = orders
            .iter()
            .map(|o| {
                let start = (0..o.len())
                    .min_by_key(|&j| vertex_map[o[j]])
                    .unwrap_or(0);
                let seq: Vec<String> = (0..o.len())
                    .map(|j| vertex_map[o[(start + j) % o.len()]].to_string())
                    .collect();
                format!("({})", seq.join(","))
            })
            .collect();
        rendered.sort();
        key.push_str(";O");
        for r in rendered {
            key.push_str(&r);
        }
    }

    Ok(CanonicalForm {
        key: CanonicalKey(key),
        vertex_map,
        edge_map,
        face_map,
        automorphisms: lab.automorphisms,
    })
}

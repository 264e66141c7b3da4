//! Colored simple CW-complexes of dimension at most two.
//!
//! A complex is stored combinatorially: vertices, directed edges with distinct
//! endpoints, and faces whose boundary is a simple closed walk of edge sides.
//! Every positive-dimensional cell carries a color. Vertices carry an optional
//! `(color, orientation)` label; labels appear on complexes that arise as
//! vertex links or cut complexes, where the 0-cells are traces of edges.

mod brane;
mod build;
pub(crate) mod canon;
mod cut;
mod link;
mod relabel;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

pub use brane::{BraneComplex, Split};
pub use build::{
    bigon_circle, compatible_complex, disjoint_union, path_graph, point, single_edge,
    sphere_complex, suspension, theta_graph, triangle_graph,
};
pub use canon::CanonicalKey;
pub use cut::{Contraction, Cut};
pub use link::LinkGraph;
pub use relabel::Relabeling;

/// Errors raised by complex construction and surgery.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("invalid complex: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("split is not contiguous in the cyclic order: {0}")]
    NonContiguousSplit(String),
    #[error("no cut realizes split {0}")]
    MissingCut(String),
    #[error("cut does not belong to this complex: {0}")]
    CutMismatch(String),
    #[error("complex is not connected")]
    NotConnected,
    #[error("malformed cyclic order: {0}")]
    BadOrder(String),
    #[error("invalid token `{0}`")]
    InvalidToken(String),
    #[error("canonical labeling search exceeded {0} leaves")]
    CanonLimit(usize),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// One violated invariant, naming the offending cell.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Violation {
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("cell `{cell}` refers to unknown `{reference}`")]
    UnknownReference { cell: String, reference: String },
    #[error("edge `{0}` has equal endpoints")]
    LoopEdge(String),
    #[error("face `{face}` boundary is not simple: {reason}")]
    NonSimpleFaceBoundary { face: String, reason: String },
    #[error("cell `{0}` is not in the closure of a top-dimensional cell")]
    DanglingCell(String),
    #[error("cells `{first}` and `{second}` share color `{color}` in one component")]
    ColorClash {
        color: String,
        first: String,
        second: String,
    },
}

impl Violation {
    /// Id of the cell the violation is about.
    pub fn cell(&self) -> &str {
        match self {
            Violation::DuplicateId(c) | Violation::LoopEdge(c) | Violation::DanglingCell(c) => c,
            Violation::UnknownReference { cell, .. } => cell,
            Violation::NonSimpleFaceBoundary { face, .. } => face,
            Violation::ColorClash { second, .. } => second,
        }
    }
}

pub(crate) fn valid_token(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || "_.^'*+-@".contains(c))
}

/// A color token from the color set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(String);

impl Color {
    pub fn new(token: impl Into<String>) -> Result<Self, ComplexError> {
        let token = token.into();
        if valid_token(&token) {
            Ok(Color(token))
        } else {
            Err(ComplexError::InvalidToken(token))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Orientation of a 0-cell: whether the edge it traces enters or leaves the cone point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    In,
    Out,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::In => Orientation::Out,
            Orientation::Out => Orientation::In,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::In => "in",
            Orientation::Out => "out",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "in" => Some(Orientation::In),
            "out" => Some(Orientation::Out),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexLabel {
    pub color: Color,
    pub orientation: Orientation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub label: Option<VertexLabel>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub color: Color,
}

/// An edge traversed forwards (tail to head) or backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Side {
    pub edge: usize,
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: String,
    pub color: Color,
    pub boundary: Vec<Side>,
}

/// Unvalidated cell lists with string ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawComplex {
    pub vertices: Vec<RawVertex>,
    pub edges: Vec<RawEdge>,
    pub faces: Vec<RawFace>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawVertex {
    pub id: String,
    pub label: Option<(String, Orientation)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawEdge {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub color: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawFace {
    pub id: String,
    pub color: String,
    pub boundary: Vec<(String, bool)>,
}

impl RawComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: &str) -> Self {
        self.vertices.push(RawVertex {
            id: id.to_string(),
            label: None,
        });
        self
    }

    pub fn labeled_vertex(mut self, id: &str, color: &str, orientation: Orientation) -> Self {
        self.vertices.push(RawVertex {
            id: id.to_string(),
            label: Some((color.to_string(), orientation)),
        });
        self
    }

    pub fn edge(mut self, id: &str, tail: &str, head: &str, color: &str) -> Self {
        self.edges.push(RawEdge {
            id: id.to_string(),
            tail: tail.to_string(),
            head: head.to_string(),
            color: color.to_string(),
        });
        self
    }

    /// Adds a face; boundary entries are `(edge id, forward)`.
    pub fn face(mut self, id: &str, color: &str, boundary: &[(&str, bool)]) -> Self {
        self.faces.push(RawFace {
            id: id.to_string(),
            color: color.to_string(),
            boundary: boundary
                .iter()
                .map(|(e, f)| (e.to_string(), *f))
                .collect(),
        });
        self
    }

    pub fn validate(self) -> Result<ColoredComplex, ComplexError> {
        validate_complex(self)
    }
}

/// A validated colored simple complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredComplex {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    component_of: Vec<usize>,
    components: Vec<Vec<usize>>,
}

/// Checks every invariant of a colored simple complex and returns all violations at once.
pub fn validate_complex(raw: RawComplex) -> Result<ColoredComplex, ComplexError> {
    let mut violations = Vec::new();
    let token = |s: &str, v: &mut Vec<Violation>| {
        if !valid_token(s) {
            v.push(Violation::UnknownReference {
                cell: s.to_string(),
                reference: "invalid token".into(),
            });
        }
    };

    let mut vindex: HashMap<&str, usize> = HashMap::new();
    let mut vertices = Vec::with_capacity(raw.vertices.len());
    for v in &raw.vertices {
        token(&v.id, &mut violations);
        if vindex.insert(v.id.as_str(), vertices.len()).is_some() {
            violations.push(Violation::DuplicateId(v.id.clone()));
        }
        let label = match &v.label {
            Some((c, o)) => match Color::new(c.clone()) {
                Ok(color) => Some(VertexLabel {
                    color,
                    orientation: *o,
                }),
                Err(_) => {
                    token(c, &mut violations);
                    None
                }
            },
            None => None,
        };
        vertices.push(Vertex {
            id: v.id.clone(),
            label,
        });
    }

    let mut eindex: HashMap<&str, usize> = HashMap::new();
    let mut edges = Vec::with_capacity(raw.edges.len());
    for e in &raw.edges {
        token(&e.id, &mut violations);
        if eindex.insert(e.id.as_str(), edges.len()).is_some() {
            violations.push(Violation::DuplicateId(e.id.clone()));
        }
        let lookup = |r: &str, v: &mut Vec<Violation>| match vindex.get(r) {
            Some(&i) => Some(i),
            None => {
                v.push(Violation::UnknownReference {
                    cell: e.id.clone(),
                    reference: r.to_string(),
                });
                None
            }
        };
        let tail = lookup(&e.tail, &mut violations);
        let head = lookup(&e.head, &mut violations);
        let color = match Color::new(e.color.clone()) {
            Ok(c) => c,
            Err(_) => {
                token(&e.color, &mut violations);
                continue;
            }
        };
        if let (Some(t), Some(h)) = (tail, head) {
            if t == h {
                violations.push(Violation::LoopEdge(e.id.clone()));
            }
            edges.push(Edge {
                id: e.id.clone(),
                tail: t,
                head: h,
                color,
            });
        }
    }
    if !violations.is_empty() {
        return Err(ComplexError::Invalid(violations));
    }

    let mut findex: HashSet<&str> = HashSet::new();
    let mut faces = Vec::with_capacity(raw.faces.len());
    for f in &raw.faces {
        token(&f.id, &mut violations);
        if !findex.insert(f.id.as_str()) {
            violations.push(Violation::DuplicateId(f.id.clone()));
        }
        let mut boundary = Vec::with_capacity(f.boundary.len());
        for (e, fwd) in &f.boundary {
            match eindex.get(e.as_str()) {
                Some(&i) => boundary.push(Side {
                    edge: i,
                    forward: *fwd,
                }),
                None => violations.push(Violation::UnknownReference {
                    cell: f.id.clone(),
                    reference: e.clone(),
                }),
            }
        }
        if boundary.len() != f.boundary.len() {
            continue;
        }
        if let Some(reason) = boundary_defect(&edges, &boundary) {
            violations.push(Violation::NonSimpleFaceBoundary {
                face: f.id.clone(),
                reason,
            });
        }
        match Color::new(f.color.clone()) {
            Ok(color) => faces.push(Face {
                id: f.id.clone(),
                color,
                boundary,
            }),
            Err(_) => token(&f.color, &mut violations),
        }
    }
    if !violations.is_empty() {
        return Err(ComplexError::Invalid(violations));
    }

    // closure of top cells
    let dim = if !faces.is_empty() {
        2
    } else if !edges.is_empty() {
        1
    } else {
        0
    };
    if dim == 2 {
        let mut on_face = vec![false; edges.len()];
        for f in &faces {
            for s in &f.boundary {
                on_face[s.edge] = true;
            }
        }
        for (e, covered) in edges.iter().zip(&on_face) {
            if !covered {
                violations.push(Violation::DanglingCell(e.id.clone()));
            }
        }
    }
    if dim >= 1 {
        let mut on_edge = vec![false; vertices.len()];
        for e in &edges {
            on_edge[e.tail] = true;
            on_edge[e.head] = true;
        }
        for (v, covered) in vertices.iter().zip(&on_edge) {
            if !covered {
                violations.push(Violation::DanglingCell(v.id.clone()));
            }
        }
    }

    let (component_of, components) = vertex_components(vertices.len(), &edges);

    // distinct colors per dimension inside each component
    let mut seen: HashMap<(usize, u8, &Color), &str> = HashMap::new();
    for v in &vertices {
        if let Some(l) = &v.label {
            let c = component_of[vindex[v.id.as_str()]];
            if let Some(prev) = seen.insert((c, 0, &l.color), &v.id) {
                violations.push(Violation::ColorClash {
                    color: l.color.to_string(),
                    first: prev.to_string(),
                    second: v.id.clone(),
                });
            }
        }
    }
    for e in &edges {
        let c = component_of[e.tail];
        if let Some(prev) = seen.insert((c, 1, &e.color), &e.id) {
            violations.push(Violation::ColorClash {
                color: e.color.to_string(),
                first: prev.to_string(),
                second: e.id.clone(),
            });
        }
    }
    for f in &faces {
        let c = component_of[edges[f.boundary[0].edge].tail];
        if let Some(prev) = seen.insert((c, 2, &f.color), &f.id) {
            violations.push(Violation::ColorClash {
                color: f.color.to_string(),
                first: prev.to_string(),
                second: f.id.clone(),
            });
        }
    }
    if !violations.is_empty() {
        return Err(ComplexError::Invalid(violations));
    }

    Ok(ColoredComplex {
        vertices,
        edges,
        faces,
        component_of,
        components,
    })
}

fn boundary_defect(edges: &[Edge], boundary: &[Side]) -> Option<String> {
    if boundary.len() < 2 {
        return Some("fewer than two sides".into());
    }
    let mut seen_edges = HashSet::new();
    let mut seen_vertices = HashSet::new();
    for (k, s) in boundary.iter().enumerate() {
        if !seen_edges.insert(s.edge) {
            return Some(format!("edge `{}` repeated", edges[s.edge].id));
        }
        let next = boundary[(k + 1) % boundary.len()];
        if side_end(edges, *s) != side_start(edges, next) {
            return Some(format!(
                "sides {} and {} do not chain",
                k,
                (k + 1) % boundary.len()
            ));
        }
        if !seen_vertices.insert(side_start(edges, *s)) {
            return Some("vertex visited twice".into());
        }
    }
    None
}

pub(crate) fn side_start(edges: &[Edge], s: Side) -> usize {
    let e = &edges[s.edge];
    if s.forward {
        e.tail
    } else {
        e.head
    }
}

pub(crate) fn side_end(edges: &[Edge], s: Side) -> usize {
    let e = &edges[s.edge];
    if s.forward {
        e.head
    } else {
        e.tail
    }
}

fn vertex_components(n: usize, edges: &[Edge]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in edges {
        let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut root_to_comp: BTreeMap<usize, usize> = BTreeMap::new();
    let mut component_of = vec![0; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        let c = *root_to_comp.entry(r).or_insert_with(|| {
            components.push(Vec::new());
            components.len() - 1
        });
        component_of[v] = c;
        components[c].push(v);
    }
    (component_of, components)
}

impl ColoredComplex {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Dimension of the top cells (0, 1 or 2).
    pub fn dim(&self) -> u8 {
        if !self.faces.is_empty() {
            2
        } else if !self.edges.is_empty() {
            1
        } else {
            0
        }
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn face_index(&self, id: &str) -> Option<usize> {
        self.faces.iter().position(|f| f.id == id)
    }

    pub fn side_start(&self, s: Side) -> usize {
        side_start(&self.edges, s)
    }

    pub fn side_end(&self, s: Side) -> usize {
        side_end(&self.edges, s)
    }

    /// Vertex lists of the connected components, ordered by smallest vertex index.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of_vertex(&self, v: usize) -> usize {
        self.component_of[v]
    }

    pub fn component_of_edge(&self, e: usize) -> usize {
        self.component_of[self.edges[e].tail]
    }

    pub fn component_of_face(&self, f: usize) -> usize {
        self.component_of_edge(self.faces[f].boundary[0].edge)
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    /// Number of vertices, edges and faces.
    pub fn cell_counts(&self) -> (usize, usize, usize) {
        (self.vertices.len(), self.edges.len(), self.faces.len())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Back to string-id cell lists.
    pub fn to_raw(&self) -> RawComplex {
        RawComplex {
            vertices: self
                .vertices
                .iter()
                .map(|v| RawVertex {
                    id: v.id.clone(),
                    label: v
                        .label
                        .as_ref()
                        .map(|l| (l.color.to_string(), l.orientation)),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    id: e.id.clone(),
                    tail: self.vertices[e.tail].id.clone(),
                    head: self.vertices[e.head].id.clone(),
                    color: e.color.to_string(),
                })
                .collect(),
            faces: self
                .faces
                .iter()
                .map(|f| RawFace {
                    id: f.id.clone(),
                    color: f.color.to_string(),
                    boundary: f
                        .boundary
                        .iter()
                        .map(|s| (self.edges[s.edge].id.clone(), s.forward))
                        .collect(),
                })
                .collect(),
        }
    }

    /// Reverses every orientation: edge directions, face boundaries and vertex labels.
    pub fn star_involution(&self) -> ColoredComplex {
        let mut out = self.clone();
        for v in &mut out.vertices {
            if let Some(l) = &mut v.label {
                l.orientation = l.orientation.flip();
            }
        }
        for e in &mut out.edges {
            std::mem::swap(&mut e.tail, &mut e.head);
        }
        for f in &mut out.faces {
            // reversed walk over reversed edges keeps each side's direction flag
            f.boundary.reverse();
        }
        out
    }

    /// The component containing vertex `v` as a standalone complex, with the
    /// maps from its vertex, edge and face indices back into `self`.
    pub fn component_subcomplex(&self, c: usize) -> (ColoredComplex, CellMaps) {
        let vmap: Vec<usize> = self.components[c].clone();
        let emap: Vec<usize> = (0..self.edges.len())
            .filter(|&e| self.component_of_edge(e) == c)
            .collect();
        let fmap: Vec<usize> = (0..self.faces.len())
            .filter(|&f| self.component_of_face(f) == c)
            .collect();
        let vinv: HashMap<usize, usize> = vmap.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let einv: HashMap<usize, usize> = emap.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let vertices = vmap.iter().map(|&v| self.vertices[v].clone()).collect();
        let edges = emap
            .iter()
            .map(|&e| {
                let e = &self.edges[e];
                Edge {
                    id: e.id.clone(),
                    tail: vinv[&e.tail],
                    head: vinv[&e.head],
                    color: e.color.clone(),
                }
            })
            .collect::<Vec<_>>();
        let faces = fmap
            .iter()
            .map(|&f| {
                let f = &self.faces[f];
                Face {
                    id: f.id.clone(),
                    color: f.color.clone(),
                    boundary: f
                        .boundary
                        .iter()
                        .map(|s| Side {
                            edge: einv[&s.edge],
                            forward: s.forward,
                        })
                        .collect(),
                }
            })
            .collect();
        let n = vmap.len();
        let (component_of, components) = vertex_components(n, &edges);
        (
            ColoredComplex {
                vertices,
                edges,
                faces,
                component_of,
                components,
            },
            CellMaps {
                vertices: vmap,
                edges: emap,
                faces: fmap,
            },
        )
    }

    /// Canonical key and isomorphism to the canonical labeling, respecting colors.
    pub fn canonical_form(&self) -> canon::CanonicalForm {
        canon::complex_canonical_form(self, None, true)
            .expect("canonical search on a validated complex")
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        self.canonical_form().key
    }

    /// Canonical key that ignores colors (but keeps orientations).
    pub fn shape_key(&self) -> CanonicalKey {
        canon::complex_canonical_form(self, None, false)
            .expect("canonical search on a validated complex")
            .key
    }

    /// The isomorphic complex with cells in canonical order and ids `v<i>`,
    /// `e<i>`, `f<i>`. Isomorphic complexes have equal canonical copies.
    pub fn canonical_copy(&self) -> (ColoredComplex, canon::CanonicalForm) {
        let cf = self.canonical_form();
        let mut vinv = vec![0; self.vertices.len()];
        for (v, &p) in cf.vertex_map.iter().enumerate() {
            vinv[p] = v;
        }
        let mut einv = vec![0; self.edges.len()];
        for (e, &p) in cf.edge_map.iter().enumerate() {
            einv[p] = e;
        }
        let mut finv = vec![0; self.faces.len()];
        for (f, &p) in cf.face_map.iter().enumerate() {
            finv[p] = f;
        }
        let mut raw = RawComplex::new();
        for (i, &v) in vinv.iter().enumerate() {
            let id = format!("v{i}");
            raw = match &self.vertices[v].label {
                Some(l) => raw.labeled_vertex(&id, l.color.as_str(), l.orientation),
                None => raw.vertex(&id),
            };
        }
        for (i, &e) in einv.iter().enumerate() {
            let e = &self.edges[e];
            raw = raw.edge(
                &format!("e{i}"),
                &format!("v{}", cf.vertex_map[e.tail]),
                &format!("v{}", cf.vertex_map[e.head]),
                e.color.as_str(),
            );
        }
        for (i, &f) in finv.iter().enumerate() {
            let f = &self.faces[f];
            let mut bd: Vec<(String, bool)> = f
                .boundary
                .iter()
                .map(|s| (format!("e{}", cf.edge_map[s.edge]), s.forward))
                .collect();
            let start = (0..f.boundary.len())
                .min_by_key(|&j| cf.edge_map[f.boundary[j].edge])
                .unwrap_or(0);
            bd.rotate_left(start);
            let refs: Vec<(&str, bool)> = bd.iter().map(|(e, d)| (e.as_str(), *d)).collect();
            raw = raw.face(&format!("f{i}"), f.color.as_str(), &refs);
        }
        (raw.validate().expect("canonical copy of a valid complex"), cf)
    }

    /// Vertices incident to the given vertex via an edge, counted with multiplicity.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.tail == v || e.head == v)
            .count()
    }
}

/// Index maps from a derived complex back to the complex it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellMaps {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub faces: Vec<usize>,
}

//! Vertex links (vertex complexes).

use super::{ColoredComplex, ComplexError, Orientation, RawComplex, Side};

/// The vertex complex of `q`: one labeled 0-cell per edge end at `q` and one
/// 1-cell per face corner at `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkGraph {
    pub graph: ColoredComplex,
    /// link vertex -> parent edge
    pub vertex_edge: Vec<usize>,
    /// link edge -> (parent face, position of the side entering `q`)
    pub edge_corner: Vec<(usize, usize)>,
}

impl ColoredComplex {
    /// Link of vertex `q`.
    ///
    /// A corner of face `f` at `q` becomes a link edge directed from the end of
    /// the edge entering `q` along the boundary of `f` to the end of the edge
    /// leaving `q`. A link vertex is oriented `In` when its edge has head `q`.
    pub fn link(&self, q: usize) -> Result<LinkGraph, ComplexError> {
        if q >= self.vertices.len() {
            return Err(ComplexError::UnknownVertex(q.to_string()));
        }
        let mut raw = RawComplex::new();
        let mut vertex_edge = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let orientation = if e.head == q {
                Orientation::In
            } else if e.tail == q {
                Orientation::Out
            } else {
                continue;
            };
            vertex_edge.push(i);
            raw = raw.labeled_vertex(&e.id, e.color.as_str(), orientation);
        }
        let mut edge_corner = Vec::new();
        for (fi, f) in self.faces.iter().enumerate() {
            let k = f.boundary.len();
            for j in 0..k {
                let enter: Side = f.boundary[j];
                if self.side_end(enter) != q {
                    continue;
                }
                let leave = f.boundary[(j + 1) % k];
                edge_corner.push((fi, j));
                raw = raw.edge(
                    &f.id,
                    &self.edges[enter.edge].id,
                    &self.edges[leave.edge].id,
                    f.color.as_str(),
                );
            }
        }
        let graph = raw.validate()?;
        Ok(LinkGraph {
            graph,
            vertex_edge,
            edge_corner,
        })
    }
}

#[cfg(test)]
mod tests {
    use crate::complex::{
        bigon_circle, single_edge, sphere_complex, suspension, theta_graph,
    };

    #[test]
    fn equatorial_links_are_bigon_circles() {
        for n in 3..=5 {
            let s = sphere_complex(n);
            for q in 0..n {
                let l = s.complex().link(q).unwrap();
                assert_eq!(l.graph.cell_counts(), (2, 2, 0));
                assert!(l.graph.is_connected());
            }
        }
    }

    #[test]
    fn suspension_apex_link_is_the_suspended_graph() {
        for sigma in [bigon_circle(), theta_graph()] {
            let s = suspension(&sigma).unwrap();
            let l1 = s.complex().link(0).unwrap();
            assert_eq!(l1.graph.canonical_key(), sigma.canonical_key());
            let l2 = s.complex().link(1).unwrap();
            assert_eq!(
                l2.graph.canonical_key(),
                sigma.star_involution().canonical_key()
            );
        }
    }

    #[test]
    fn endpoint_of_single_edge_has_point_link() {
        let e = single_edge("a", "b", "red");
        let l = e.link(0).unwrap();
        assert_eq!(l.graph.cell_counts(), (1, 0, 0));
        assert_eq!(l.graph.dim(), 0);
    }

    #[test]
    fn unknown_vertex() {
        let e = single_edge("a", "b", "red");
        assert!(e.link(7).is_err());
    }
}

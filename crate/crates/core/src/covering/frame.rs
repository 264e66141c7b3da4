//! Gauge fixing for group-labeled incidence data.
//!
//! Nodes are sheeted cells, arcs are incidences `upper -> lower` labeled by a
//! group element (the attaching map of sheets). A relabeling of sheets by
//! `h_u` on each node acts as `t -> h_v t h_u^-1` on an arc `u -> v`.

use crate::group::FiniteGroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Frame {
    pub nodes: usize,
    pub arcs: Vec<(usize, usize)>,
    /// spanning forest arcs in discovery order; flag is true when the
    /// discovered node is the lower end
    tree_steps: Vec<(usize, bool)>,
    pub is_tree: Vec<bool>,
    pub comps: usize,
    /// non-tree arcs of each incidence component, in arc order
    pub comp_nontree: Vec<Vec<usize>>,
}

impl Frame {
    pub fn new(nodes: usize, arcs: Vec<(usize, usize)>) -> Frame {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
        for (a, &(u, v)) in arcs.iter().enumerate() {
            adj[u].push(a);
            adj[v].push(a);
        }
        let mut comp = vec![usize::MAX; nodes];
        let mut is_tree = vec![false; arcs.len()];
        let mut tree_steps = Vec::new();
        let mut comps = 0;
        for root in 0..nodes {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = comps;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for &a in &adj[x] {
                    let (u, v) = arcs[a];
                    let other = if u == x { v } else { u };
                    if comp[other] == usize::MAX {
                        comp[other] = comps;
                        is_tree[a] = true;
                        tree_steps.push((a, other == v));
                        queue.push_back(other);
                    }
                }
            }
            comps += 1;
        }
        let mut comp_nontree = vec![Vec::new(); comps];
        for (a, &(u, _)) in arcs.iter().enumerate() {
            if !is_tree[a] {
                comp_nontree[comp[u]].push(a);
            }
        }
        Frame {
            nodes,
            arcs,
            tree_steps,
            is_tree,
            comps,
            comp_nontree,
        }
    }

    pub fn nontree_count(&self) -> usize {
        self.comp_nontree.iter().map(Vec::len).sum()
    }

    /// Applies the gauge that turns every tree arc into the identity.
    pub fn normalize(&self, g: &FiniteGroup, labels: &[usize]) -> Vec<usize> {
        let mut h = vec![g.identity(); self.nodes];
        for &(a, child_is_lower) in &self.tree_steps {
            let (u, v) = self.arcs[a];
            let t = labels[a];
            if child_is_lower {
                h[v] = g.mul(h[u], g.inv(t));
            } else {
                h[u] = g.mul(h[v], t);
            }
        }
        self.arcs
            .iter()
            .zip(labels)
            .map(|(&(u, v), &t)| g.mul(g.mul(h[v], t), g.inv(h[u])))
            .collect()
    }

    /// Canonical representative of a normalized labeling under the residual
    /// gauge (one simultaneous conjugation per component), and the order of
    /// its stabilizer in the full gauge group.
    pub fn canonize(&self, g: &FiniteGroup, normalized: &[usize]) -> (Vec<usize>, u64) {
        let mut out = normalized.to_vec();
        let mut aut: u64 = 1;
        let mut buf = Vec::new();
        for arcs in &self.comp_nontree {
            let cur: Vec<usize> = arcs.iter().map(|&a| normalized[a]).collect();
            let mut best = cur.clone();
            let mut stab = 0u64;
            for h in 0..g.order() {
                buf.clear();
                buf.extend(cur.iter().map(|&t| g.conj(h, t)));
                if buf < best {
                    best.clone_from(&buf);
                }
                if buf == cur {
                    stab += 1;
                }
            }
            for (&a, &t) in arcs.iter().zip(&best) {
                out[a] = t;
            }
            aut *= stab;
        }
        (out, aut)
    }

    /// Readable key: non-tree labels by component.
    pub fn key_text(&self, g: &FiniteGroup, canonical: &[usize]) -> String {
        self.comp_nontree
            .iter()
            .map(|arcs| {
                arcs.iter()
                    .map(|&a| g.element_name(canonical[a]))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join(" | ")
    }

    /// Labelings with identity on the tree and arbitrary non-tree labels, as a
    /// mixed-radix counter over non-tree arcs in component order.
    pub fn tree_fixed(&self, g: &FiniteGroup, index: u64) -> Vec<usize> {
        let mut labels = vec![g.identity(); self.arcs.len()];
        let n = g.order() as u64;
        let mut x = index;
        for arcs in &self.comp_nontree {
            for &a in arcs {
                labels[a] = (x % n) as usize;
                x /= n;
            }
        }
        labels
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::symmetric_lex;

    #[test]
    fn normalization_fixes_tree_and_preserves_gauge_class() {
        let g = symmetric_lex(3);
        // a square of four nodes and four arcs
        let f = Frame::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(f.nontree_count(), 1);
        let labels = vec![1, 3, 4, 2];
        let n = f.normalize(&g, &labels);
        for a in 0..4 {
            if f.is_tree[a] {
                assert_eq!(n[a], g.identity());
            }
        }
        // gauge-equivalent input normalizes to a conjugate
        let h = [2, 5, 1, 3];
        let moved: Vec<usize> = f
            .arcs
            .iter()
            .zip(&labels)
            .map(|(&(u, v), &t)| g.mul(g.mul(h[v], t), g.inv(h[u])))
            .collect();
        let m = f.normalize(&g, &moved);
        assert_eq!(f.canonize(&g, &n), f.canonize(&g, &m));
    }
}

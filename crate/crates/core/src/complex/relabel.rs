//! Random renaming and reindexing of cells.

use rand::seq::SliceRandom;
use rand::Rng;

use super::brane::{is_brane, BraneComplex};
use super::{ColoredComplex, RawComplex};

/// A copy of a complex with permuted cell order and fresh ids, plus the maps
/// from old indices to new ones.
#[derive(Clone, Debug)]
pub struct Relabeling {
    pub complex: ColoredComplex,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub face_map: Vec<usize>,
}

fn shuffled<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

impl Relabeling {
    pub fn random<R: Rng>(c: &ColoredComplex, rng: &mut R) -> Relabeling {
        let raw = c.to_raw();
        let vm = shuffled(c.vertices().len(), rng);
        let em = shuffled(c.edges().len(), rng);
        let fm = shuffled(c.faces().len(), rng);
        let tag: u32 = rng.gen_range(0..1000);
        let vid = |i: usize| format!("v{tag}_{}", vm[i]);
        let eid = |i: usize| format!("e{tag}_{}", em[i]);

        let mut out = RawComplex::new();
        let mut inv = vec![0; vm.len()];
        for (old, &new) in vm.iter().enumerate() {
            inv[new] = old;
        }
        for &old in &inv {
            let mut v = raw.vertices[old].clone();
            v.id = vid(old);
            out.vertices.push(v);
        }
        let vindex = |id: &str| c.vertex_index(id).unwrap();
        let mut inv = vec![0; em.len()];
        for (old, &new) in em.iter().enumerate() {
            inv[new] = old;
        }
        for &old in &inv {
            let mut e = raw.edges[old].clone();
            e.id = eid(old);
            e.tail = vid(vindex(&e.tail));
            e.head = vid(vindex(&e.head));
            out.edges.push(e);
        }
        let mut inv = vec![0; fm.len()];
        for (old, &new) in fm.iter().enumerate() {
            inv[new] = old;
        }
        for &old in &inv {
            let mut f = raw.faces[old].clone();
            f.id = format!("f{tag}_{}", fm[old]);
            // rotate the boundary start as well
            let k = f.boundary.len();
            let r = rng.gen_range(0..k);
            f.boundary.rotate_left(r);
            for s in &mut f.boundary {
                s.0 = eid(c.edge_index(&s.0).unwrap());
            }
            out.faces.push(f);
        }
        Relabeling {
            complex: out.validate().expect("relabeling keeps validity"),
            vertex_map: vm,
            edge_map: em,
            face_map: fm,
        }
    }

    /// Relabels a brane complex, carrying its orders along with a random rotation.
    pub fn random_brane<R: Rng>(b: &BraneComplex, rng: &mut R) -> (BraneComplex, Relabeling) {
        let r = Relabeling::random(b.complex(), rng);
        let orders: Vec<Vec<usize>> = b
            .orders()
            .iter()
            .map(|o| {
                let mut o: Vec<usize> = o.iter().map(|&v| r.vertex_map[v]).collect();
                let k = rng.gen_range(0..o.len());
                o.rotate_left(k);
                o
            })
            .collect();
        let out = is_brane(r.complex.clone(), orders).expect("relabeling keeps the brane property");
        (out, r)
    }
}

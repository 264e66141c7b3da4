use std::sync::OnceLock;

use brane_core::complex::{bigon_circle, point, sphere_complex, theta_graph, BraneComplex, Relabeling};
use brane_core::format::{parse_complex, serialize_brane, Parsed};
use brane_core::lab::{algebra_for, standard_catalog, verify_basis_change, HurwitzAlgebra, Lab, TheoryConfig};
use brane_core::linalg::{identity, invert, mul, rat, transpose, Matrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn catalog() -> Vec<BraneComplex> {
    standard_catalog().into_iter().map(|(_, c)| c).collect()
}

fn relabeled(i: usize, seed: u64) -> (BraneComplex, BraneComplex) {
    let omega = catalog()[i % catalog().len()].clone();
    let (r, _) = Relabeling::random_brane(&omega, &mut ChaCha8Rng::seed_from_u64(seed));
    (omega, r)
}

fn degree_two() -> &'static HurwitzAlgebra {
    static H: OnceLock<HurwitzAlgebra> = OnceLock::new();
    H.get_or_init(|| algebra_for(&Lab::new(TheoryConfig::degree(2)).unwrap(), &[sphere_complex(4)]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn canonical_keys_ignore_names(i in 0usize..5, seed in any::<u64>()) {
        let (omega, r) = relabeled(i, seed);
        prop_assert_eq!(omega.canonical_key(), r.canonical_key());
        prop_assert_eq!(omega.complex().canonical_key(), r.complex().canonical_key());
    }

    #[test]
    fn text_round_trip_after_relabeling(i in 0usize..5, seed in any::<u64>()) {
        let (_, r) = relabeled(i, seed);
        let text = serialize_brane(&r);
        match parse_complex(&text).unwrap() {
            Parsed::Brane(b) => {
                prop_assert_eq!(&b, &r);
                prop_assert_eq!(serialize_brane(&b), text);
            }
            Parsed::Plain(_) => prop_assert!(false, "orders were dropped"),
        }
    }

    #[test]
    fn star_is_an_involution(i in 0usize..5, seed in any::<u64>()) {
        let (_, r) = relabeled(i, seed);
        let c = r.complex();
        prop_assert_eq!(c.star_involution().star_involution(), c.clone());
        for q in 0..c.vertices().len() {
            let link = c.link(q).unwrap().graph;
            let starred = c.star_involution().link(q).unwrap().graph;
            prop_assert_eq!(starred.canonical_key(), link.star_involution().canonical_key());
        }
    }

    #[test]
    fn hurwitz_tables_survive_relabeling(i in 0usize..5, seed in any::<u64>()) {
        let lab = Lab::new(TheoryConfig::degree(2)).unwrap();
        let (omega, r) = relabeled(i, seed);
        let a: Vec<_> = lab.table(&omega).unwrap().entries().into_values().collect();
        let b: Vec<_> = lab.table(&r).unwrap().entries().into_values().collect();
        let sum = |v: &[num::BigRational]| v.iter().fold(rat(0, 1), |x, y| x + y);
        prop_assert_eq!(sum(&a), sum(&b));
        prop_assert_eq!(a.len(), b.len());
    }

    #[test]
    fn chain_values_survive_basis_changes(seed in any::<u64>()) {
        let r = verify_basis_change(degree_two(), "sphere4", &sphere_complex(4), 1, 3, seed).unwrap();
        prop_assert!(r.all_passed(), "{}", r);
    }

    #[test]
    fn unitriangular_products_invert(entries in prop::collection::vec(-5i64..=5, 9), diag in prop::collection::vec(1i64..=4, 3)) {
        let mut l: Matrix = identity(3);
        let mut u: Matrix = identity(3);
        for i in 0..3 {
            u[i][i] = rat(diag[i], 1);
            for j in 0..i {
                l[i][j] = rat(entries[3 * i + j], 1);
                u[j][i] = rat(entries[3 * j + i], 2);
            }
        }
        let m = mul(&l, &u);
        let inv = invert(&m).unwrap();
        prop_assert_eq!(mul(&m, &inv), identity(3));
    }
}

#[test]
fn star_pairing_is_the_transpose() {
    let lab = Lab::new(TheoryConfig::degree(3)).unwrap();
    for sigma in [point(), bigon_circle(), theta_graph()] {
        let g = lab.gram(&sigma).unwrap();
        let h = lab.gram(&sigma.star_involution()).unwrap();
        assert_eq!(transpose(&g), h);
    }
}

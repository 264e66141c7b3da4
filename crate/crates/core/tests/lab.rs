mod common;

use brane_core::complex::{bigon_circle, point, sphere_complex, theta_graph, ColoredComplex};
use brane_core::covering::Bounds;
use brane_core::group::catalog_group;
use brane_core::lab::*;
use brane_core::linalg::rat;
use common::{centralizer_order, factorial, partitions, partition_name};
use num::{BigRational, Zero};

fn degree(d: usize) -> Lab {
    Lab::new(TheoryConfig::degree(d)).unwrap()
}

#[test]
fn suspension_pairing_is_diagonal_in_star_classes() {
    // sum over classes of 1/|Aut| counts homomorphisms from the free group
    // of rank b1: (d!)^b1 / d!
    for (sigma, b1) in [(point(), 0u32), (bigon_circle(), 1), (theta_graph(), 2)] {
        for d in 1..=3 {
            let lab = degree(d);
            let (s, rows) = lab.sector(&sigma).unwrap();
            let (_, cols) = lab.sector(&sigma.star_involution()).unwrap();
            let gram = lab.gram(&sigma).unwrap();
            let mut total = BigRational::zero();
            for (i, beta) in rows.iter().enumerate() {
                let star = s.star_class(lab.group(), beta);
                for (j, gamma) in cols.iter().enumerate() {
                    let expected = if gamma.class_key == star.class_key {
                        rat(1, beta.aut_order as i64)
                    } else {
                        rat(0, 1)
                    };
                    assert_eq!(gram[i][j], expected);
                    total += &gram[i][j];
                }
            }
            let f = factorial(d) as i64;
            assert_eq!(total, rat(f.pow(b1), f), "b1={b1} d={d}");
        }
    }
}

#[test]
fn circle_automorphisms_are_centralizers() {
    for d in 1..=4 {
        let lab = degree(d);
        let (s, classes) = lab.sector(&bigon_circle()).unwrap();
        assert_eq!(classes.len(), partitions(d).len());
        for p in partitions(d) {
            let c = s.class_by_name(lab.group(), &partition_name(&p), lab.bounds()).unwrap();
            assert_eq!(c.aut_order, centralizer_order(&p));
        }
    }
}

#[test]
fn cyclic_two_gram_on_circles() {
    let lab = Lab::new(TheoryConfig::group(catalog_group("C2").unwrap())).unwrap();
    let h = algebra_for(&lab, &[sphere_complex(3)]).unwrap();
    let mut seen = 0;
    for s in 0..h.algebra.sectors().len() {
        if h.algebra.sectors()[s].complex.dim() == 1 && h.classes[s].len() == 2 {
            seen += 1;
            assert_eq!(h.algebra.gram(s), &vec![vec![rat(1, 2), rat(0, 1)], vec![rat(0, 1), rat(1, 2)]]);
        }
    }
    assert!(seen >= 3);
}

#[test]
fn gluing_along_the_equator() {
    let lab = degree(2);
    let s4 = sphere_complex(4);
    let cut = s4.cut_for(&s4.split(&[0, 1]).unwrap()).unwrap();
    let r = verify_gluing_identity(&lab, "sphere4", &s4, &cut, 0).unwrap();
    assert!(r.all_passed(), "{r}");
    let bad = verify_gluing_identity(&lab, "sphere4", &s4, &cut, 1).unwrap();
    assert!(!bad.all_passed());
    assert!(bad.checks.iter().all(|c| c.name == "gluing-mutated"));
}

#[test]
fn gluing_catalog_for_small_degrees() {
    for d in 1..=3 {
        let r = verify_gluing_catalog(&degree(d), &standard_catalog()).unwrap();
        assert!(r.all_passed(), "{r}");
        assert!(r.checks.iter().any(|c| c.name == "mutation-detected"));
    }
}

#[test]
fn axioms_hold_in_degree_two() {
    let r = verify_tft_axioms(&degree(2), &standard_catalog()).unwrap();
    assert!(r.all_passed(), "{r}");
    for name in ["invariance", "nondegeneracy", "cut-invariance", "multiplicativity"] {
        assert!(r.checks.iter().any(|c| c.name == name), "missing {name}");
    }
}

#[test]
fn evaluator_against_enumeration() {
    let lab = degree(3);
    let catalog: Vec<_> = [3, 4].map(sphere_complex).to_vec();
    let h = algebra_for(&lab, &catalog).unwrap();
    for (i, omega) in catalog.iter().enumerate() {
        let r = cross_check_evaluator(&lab, &h, &format!("sphere{}", i + 3), omega).unwrap();
        assert!(r.all_passed(), "{r}");
        let r = verify_basis_change(&h, "sphere", omega, 3, 4, 11).unwrap();
        assert!(r.all_passed(), "{r}");
    }
}

#[test]
fn evaluator_refuses_missing_channels() {
    let lab = degree(2);
    let h = algebra_for(&lab, &[sphere_complex(3)]).unwrap();
    let err = cross_check_evaluator(&lab, &h, "sphere5", &sphere_complex(5)).unwrap_err();
    assert!(matches!(err, LabError::Algebra(_)), "{err}");
}

#[test]
fn symmetric_group_matches_degree_three() {
    let catalog = [sphere_complex(3), sphere_complex(4)];
    let s3 = catalog_group("S3").unwrap();
    let g = algebra_for(&Lab::new(TheoryConfig::group(s3.clone())).unwrap(), &catalog).unwrap();
    let d = algebra_for(&degree(3), &catalog).unwrap();
    let r = compare_sd(&g, &d, &s3).unwrap();
    assert!(r.all_passed(), "{r}");
    let c3 = catalog_group("C3").unwrap();
    assert!(compare_sd(&g, &d, &c3).is_err());
}

#[test]
fn oracle_values() {
    let b = Bounds::default();
    let names = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    assert_eq!(character_oracle(&OracleKind::Degree(2), &names(&["[2]", "[2]", "[1,1]"]), &b).unwrap(), rat(1, 2));
    assert_eq!(character_oracle(&OracleKind::Degree(3), &names(&["[3]"; 3]), &b).unwrap(), rat(1, 3));
    assert_eq!(character_oracle(&OracleKind::Degree(3), &names(&["[2,1]"; 4]), &b).unwrap(), rat(9, 2));
    assert!(character_oracle(&OracleKind::Degree(9), &names(&["[9]"]), &b).is_err());
}

#[test]
fn report_lines_are_exact() {
    let mut r = VerificationReport::default();
    r.push("pairing", "point/d1", rat(1, 1), rat(1, 1));
    r.push("pairing", "point/d2", rat(1, 2), rat(1, 3));
    assert_eq!(
        r.to_string(),
        "CHECK pairing point/d1 1 1 PASS\nCHECK pairing point/d2 1/2 1/3 FAIL\n"
    );
    assert!(!r.all_passed());
}

#[test]
fn closure_is_bounded() {
    let catalog: Vec<_> = standard_catalog().into_iter().map(|(_, c)| c).collect();
    assert!(matches!(sector_closure(&catalog, 3), Err(LabError::ClosureTooLarge(3))));
    let all = sector_closure(&catalog, 1000).unwrap();
    let stars: Vec<ColoredComplex> = all.iter().map(|s| s.star_involution()).collect();
    for s in &stars {
        assert!(all.iter().any(|t| t.canonical_key() == s.canonical_key()));
    }
}

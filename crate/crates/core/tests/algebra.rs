use brane_core::complex::{bigon_circle, sphere_complex, BraneComplex};
use brane_core::frobenius::{assemble_algebra, AlgebraElement, AlgebraError, FrobeniusAlgebra, SectorSpec};
use brane_core::lab::{algebra_for, HurwitzAlgebra, Lab, TheoryConfig};
use brane_core::linalg::{rat, Matrix};
use num::{BigRational, Zero};

fn link_sector(h: &HurwitzAlgebra, omega: &BraneComplex, q: usize) -> usize {
    h.sector_of(&omega.complex().link(q).unwrap().graph.canonical_key()).unwrap()
}

fn idx(a: &FrobeniusAlgebra, s: usize, name: &str) -> usize {
    a.sectors()[s].basis.iter().position(|b| b == name).unwrap()
}

fn unit(a: &FrobeniusAlgebra, s: usize, name: &str) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); a.sectors()[s].basis.len()];
    v[idx(a, s, name)] = rat(1, 1);
    v
}

fn degree2(omegas: &[BraneComplex]) -> HurwitzAlgebra {
    algebra_for(&Lab::new(TheoryConfig::degree(2)).unwrap(), omegas).unwrap()
}

#[test]
fn degree_two_circle_data() {
    let s3 = sphere_complex(3);
    let h = degree2(std::slice::from_ref(&s3));
    let a = &h.algebra;
    let s: Vec<usize> = (0..3).map(|q| link_sector(&h, &s3, q)).collect();
    for &x in &s {
        assert_eq!(a.sectors()[x].basis, vec!["[1,1]", "[2]"]);
        assert_eq!(a.gram(x), &vec![vec![rat(1, 2), rat(0, 1)], vec![rat(0, 1), rat(1, 2)]]);
        assert_eq!(a.copairing(x).unwrap(), &vec![vec![rat(2, 1), rat(0, 1)], vec![rat(0, 1), rat(2, 1)]]);
    }
    let t = [s[0], s[1], s[2]];
    let (e, o) = (0, 1);
    assert_eq!(a.trilinear(t, [e, e, e]), rat(1, 2));
    for r in [[o, o, e], [o, e, o], [e, o, o]] {
        assert_eq!(a.trilinear(t, r), rat(1, 2));
        // stored once, readable from every rotation
        assert_eq!(a.trilinear([t[1], t[2], t[0]], [r[1], r[2], r[0]]), rat(1, 2));
    }
    for r in [[o, e, e], [e, o, e], [e, e, o], [o, o, o]] {
        assert_eq!(a.trilinear(t, r), rat(0, 1));
    }
}

#[test]
fn products_and_associativity() {
    let s3 = sphere_complex(3);
    let h = degree2(std::slice::from_ref(&s3));
    let a = &h.algebra;
    let s: Vec<usize> = (0..3).map(|q| link_sector(&h, &s3, q)).collect();
    let x = AlgebraElement::single(s[0], unit(a, s[0], "[2]"));
    let y = AlgebraElement::single(s[1], unit(a, s[1], "[2]"));
    let p = a.product(&x, &y);
    let target = a.sectors()[s[2]].star;
    assert_eq!(p.parts.keys().copied().collect::<Vec<_>>(), vec![target]);
    assert_eq!(p.parts[&target], unit(a, target, "[1,1]"));
    // (xy, z) = (x, y, z)
    for z in ["[1,1]", "[2]"] {
        let zz = AlgebraElement::single(s[2], unit(a, s[2], z));
        assert_eq!(a.pairing(&p, &zz), a.trilinear([s[0], s[1], s[2]], [1, 1, idx(a, s[2], z)]));
    }
    // sectors with no common block multiply to zero
    let lone = AlgebraElement::single(s[0], unit(a, s[0], "[2]"));
    assert!(a.product(&lone, &lone).is_zero());
    let h4 = degree2(&[sphere_complex(4)]);
    assert!(h4.algebra.associativity_check().unwrap() > 0);
}

#[test]
fn chain_formula_on_the_four_point_sphere() {
    let s4 = sphere_complex(4);
    let h = degree2(std::slice::from_ref(&s4));
    let a = &h.algebra;
    let sectors: Vec<usize> = (0..4).map(|q| link_sector(&h, &s4, q)).collect();
    let xs: Vec<Vec<BigRational>> = sectors.iter().map(|&s| unit(a, s, "[2]")).collect();
    assert_eq!(a.evaluate_phi(&sectors, &xs).unwrap(), rat(1, 2));
    // two arguments give the pairing
    let x = unit(a, sectors[0], "[2]");
    let st = a.sectors()[sectors[0]].star;
    assert_eq!(a.evaluate_phi(&[sectors[0], st], &[x.clone(), unit(a, st, "[2]")]).unwrap(), rat(1, 2));
    assert_eq!(a.evaluate_phi(&[sectors[0], st], &[x, unit(a, st, "[1,1]")]).unwrap(), rat(0, 1));
    assert!(matches!(
        a.evaluate_phi(&sectors[..2], &xs),
        Err(AlgebraError::SectorMismatch(_))
    ));
}

#[test]
fn cyclic_rotation_leaves_the_chain_invariant() {
    let s4 = sphere_complex(4);
    let h = degree2(std::slice::from_ref(&s4));
    let a = &h.algebra;
    let sectors: Vec<usize> = (0..4).map(|q| link_sector(&h, &s4, q)).collect();
    for mask in 0..16u32 {
        let names: Vec<&str> = (0..4).map(|i| if mask >> i & 1 == 1 { "[2]" } else { "[1,1]" }).collect();
        let xs: Vec<Vec<BigRational>> = sectors.iter().zip(&names).map(|(&s, n)| unit(a, s, n)).collect();
        let v = a.evaluate_phi(&sectors, &xs).unwrap();
        for r in 1..4 {
            let mut s2 = sectors.clone();
            let mut x2 = xs.clone();
            s2.rotate_left(r);
            x2.rotate_left(r);
            assert_eq!(a.evaluate_phi(&s2, &x2).unwrap(), v);
        }
        // reversing the order and starring every argument
        let g = brane_core::group::symmetric_lex(2);
        let mut rs = Vec::new();
        let mut rx = Vec::new();
        for (&s, x) in sectors.iter().zip(&xs).rev() {
            let i = x.iter().position(|c| !c.is_zero()).unwrap();
            let st = a.sectors()[s].star;
            let class = h.sectors[s].star_class(&g, &h.classes[s][i]);
            let j = h.basis_index(st, &class.class_key).unwrap();
            let mut v = vec![BigRational::zero(); h.classes[st].len()];
            v[j] = rat(1, 1);
            rs.push(st);
            rx.push(v);
        }
        assert_eq!(a.evaluate_phi(&rs, &rx).unwrap(), v, "{names:?}");
    }
}

#[test]
fn chain_factors_through_any_cut_position() {
    let s5 = sphere_complex(5);
    let h = degree2(std::slice::from_ref(&s5));
    let a = &h.algebra;
    let sectors: Vec<usize> = (0..5).map(|q| link_sector(&h, &s5, q)).collect();
    // the channel between positions 3 and 4: the cut separating q1..q3 from q4, q5
    let cut = s5.cut_for(&s5.split(&[3, 4]).unwrap()).unwrap();
    let gamma = h.sector_of(&cut.gamma.canonical_key()).unwrap();
    let (r, rs) = if a.sectors()[gamma].star == gamma { (gamma, gamma) } else { (gamma, a.sectors()[gamma].star) };
    for mask in 0..32u32 {
        let xs: Vec<Vec<BigRational>> = (0..5)
            .map(|i| unit(a, sectors[i], if mask >> i & 1 == 1 { "[2]" } else { "[1,1]" }))
            .collect();
        let whole = a.evaluate_phi(&sectors, &xs).unwrap();
        let mut split = BigRational::zero();
        for (left, right) in [(r, rs), (rs, r)] {
            let k = if left == r { a.copairing(r).unwrap().clone() } else { a.copairing(rs).unwrap().clone() };
            for i in 0..a.sectors()[left].basis.len() {
                for j in 0..a.sectors()[right].basis.len() {
                    if k[i][j].is_zero() {
                        continue;
                    }
                    let mut bi = vec![BigRational::zero(); k.len()];
                    bi[i] = rat(1, 1);
                    let mut bj = vec![BigRational::zero(); k[0].len()];
                    bj[j] = rat(1, 1);
                    let l = a
                        .evaluate_phi(&[sectors[0], sectors[1], sectors[2], left], &[xs[0].clone(), xs[1].clone(), xs[2].clone(), bi])
                        .unwrap();
                    let rr = a
                        .evaluate_phi(&[right, sectors[3], sectors[4]], &[bj, xs[3].clone(), xs[4].clone()])
                        .unwrap();
                    split += &k[i][j] * l * rr;
                }
            }
            if r == rs {
                break;
            }
        }
        assert_eq!(split, whole, "mask {mask}");
    }
}

#[test]
fn perturbed_entry_breaks_crossing() {
    let h = degree2(&[sphere_complex(4)]);
    let a = &h.algebra;
    assert!(a.crossing_check().unwrap() > 0);
    let b = a.blocks().next().unwrap();
    let old = a.trilinear(b.sectors, [0, 0, 0]);
    let bad = a.with_trilinear_entry(b.sectors, [0, 0, 0], old + rat(1, 1));
    let err = bad.crossing_check().unwrap_err();
    assert!(matches!(err, AlgebraError::CrossingFailure { .. }), "{err}");
    let report = bad.verify_axioms();
    assert!(report.iter().any(|r| r.axiom == "crossing" && !r.passed));
    assert!(bad.associativity_check().is_err());
    // and assembly from the perturbed text is refused
    assert!(matches!(
        FrobeniusAlgebra::from_text(&bad.to_text()),
        Err(AlgebraError::CrossingFailure { .. })
    ));
}

#[test]
fn degree_one_algebra_is_trivial() {
    let catalog: Vec<BraneComplex> = vec![sphere_complex(3), sphere_complex(4)];
    let h = algebra_for(&Lab::new(TheoryConfig::degree(1)).unwrap(), &catalog).unwrap();
    let a = &h.algebra;
    for (s, sec) in a.sectors().iter().enumerate() {
        assert_eq!(sec.basis.len(), 1);
        assert_eq!(a.gram(s), &vec![vec![rat(1, 1)]]);
        assert_eq!(a.copairing(s).unwrap(), &vec![vec![rat(1, 1)]]);
    }
    for b in a.blocks() {
        assert_eq!(b.data, vec![rat(1, 1)]);
    }
    assert!(a.verify_axioms().iter().all(|r| r.passed));
}

#[test]
fn text_round_trip() {
    let h = degree2(&[sphere_complex(4)]);
    let text = h.algebra.to_text();
    let back = FrobeniusAlgebra::from_text(&text).unwrap();
    assert_eq!(back, h.algebra);
    assert_eq!(back.to_text(), text);
}

#[test]
fn shape_errors() {
    let circle = bigon_circle();
    let spec = |c: &brane_core::complex::ColoredComplex| SectorSpec {
        complex: c.clone(),
        basis: vec!["x".into(), "y".into()],
    };
    let specs = vec![spec(&circle), spec(&circle.star_involution())];
    let good: Matrix = vec![vec![rat(1, 2), rat(0, 1)], vec![rat(0, 1), rat(1, 2)]];
    assert!(assemble_algebra(specs.clone(), vec![good.clone(), good.clone()], vec![]).is_ok());
    let zero: Matrix = vec![vec![rat(0, 1); 2]; 2];
    assert!(matches!(
        assemble_algebra(specs.clone(), vec![zero.clone(), zero], vec![]),
        Err(AlgebraError::DegenerateGram(_))
    ));
    let skew: Matrix = vec![vec![rat(1, 2), rat(1, 1)], vec![rat(0, 1), rat(1, 2)]];
    assert!(matches!(
        assemble_algebra(specs.clone(), vec![skew, good.clone()], vec![]),
        Err(AlgebraError::GramAsymmetry(_))
    ));
    assert!(matches!(
        assemble_algebra(specs[..1].to_vec(), vec![good.clone()], vec![]),
        Err(AlgebraError::MissingStar(_))
    ));
    assert!(matches!(
        assemble_algebra(specs, vec![good.clone(), good], vec![([0, 1, 0], vec![rat(1, 1); 8])]),
        Err(AlgebraError::IllegalBlock(_))
    ));
}

#[test]
fn colored_products_are_not_associative_everywhere() {
    let catalog: Vec<BraneComplex> = vec![sphere_complex(3), sphere_complex(4)];
    let h = degree2(&catalog);
    // a product chain through a sector pair that would repeat a color
    assert!(h.algebra.unrestricted_associativity().is_some());
    assert!(h.algebra.associativity_check().is_ok());
}

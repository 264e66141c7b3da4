//! One line per acceptance criterion; exits nonzero when any fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use brane_core::complex::{bigon_circle, compatible_complex, point, sphere_complex, theta_graph, BraneComplex};
use brane_core::covering::{hurwitz_with, Bounds, ClassKey, CoveringBase, CoveringClass};
use brane_core::format::{parse_complex, serialize_brane, Parsed};
use brane_core::gcover::sd_correspondence;
use brane_core::group::{catalog_group, symmetric_lex, FiniteGroup};
use brane_core::lab::*;
use brane_core::linalg::rat;
use common::{factorial, partition_name, partitions, tuple_count};
use num::BigRational;

type Outcome = Result<String, String>;

fn theories() -> Vec<TheoryConfig> {
    let mut v: Vec<TheoryConfig> = (1..=3).map(TheoryConfig::degree).collect();
    for g in ["C2", "C3", "S3"] {
        v.push(TheoryConfig::group(catalog_group(g).unwrap()));
    }
    v
}

fn catalog() -> Vec<(String, BraneComplex)> {
    standard_catalog()
}

fn complexes() -> Vec<BraneComplex> {
    catalog().into_iter().map(|(_, c)| c).collect()
}

fn report(r: &VerificationReport) -> Outcome {
    let bad: Vec<String> = r.checks.iter().filter(|c| !c.passed).map(|c| c.to_string()).collect();
    if bad.is_empty() {
        Ok(format!("{} checks", r.checks.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn pairing_formula() -> Outcome {
    let mut n = 0;
    for (name, sigma, b1) in [("point", point(), 0u32), ("bigon", bigon_circle(), 1), ("theta", theta_graph(), 2)] {
        for d in 1..=3 {
            let lab = Lab::new(TheoryConfig::degree(d)).map_err(err)?;
            let (s, rows) = lab.sector(&sigma).map_err(err)?;
            let (_, cols) = lab.sector(&sigma.star_involution()).map_err(err)?;
            let gram = lab.gram(&sigma).map_err(err)?;
            let mut total = rat(0, 1);
            for (i, beta) in rows.iter().enumerate() {
                let star = s.star_class(lab.group(), beta);
                for (j, gamma) in cols.iter().enumerate() {
                    let expected = if gamma.class_key == star.class_key {
                        rat(1, beta.aut_order as i64)
                    } else {
                        rat(0, 1)
                    };
                    ensure(gram[i][j] == expected, || format!("{name} d{d} entry ({i},{j}): {} vs {expected}", gram[i][j]))?;
                    total += &gram[i][j];
                    n += 1;
                }
            }
            // independent count of homomorphisms from a free group of rank b1
            let f = factorial(d) as i64;
            ensure(total == rat(f.pow(b1), f), || format!("{name} d{d}: total {total}"))?;
        }
    }
    Ok(format!("{n} entries"))
}

fn named(omega: &BraneComplex, g: &FiniteGroup, names: &[String]) -> Result<Vec<Option<CoveringClass>>, String> {
    let b = Bounds::default();
    let base = CoveringBase::new(omega, &b).map_err(err)?;
    names
        .iter()
        .enumerate()
        .map(|(q, n)| base.link_sector(q).class_by_name(g, n, &b).map(Some).map_err(err))
        .collect()
}

fn tuples(items: &[Vec<usize>], n: usize) -> Vec<Vec<Vec<usize>>> {
    (0..n).fold(vec![vec![]], |acc, _| {
        acc.iter()
            .flat_map(|t| {
                items.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect()
    })
}

fn classical_oracle() -> Outcome {
    let b = Bounds::default();
    let mut n = 0;
    let mut check = |d: usize, types: &[Vec<usize>]| -> Result<(), String> {
        let g = symmetric_lex(d);
        let omega = sphere_complex(types.len());
        let names: Vec<String> = types.iter().map(|t| partition_name(t)).collect();
        let h = hurwitz_with(&omega, &g, &named(&omega, &g, &names)?, &b).map_err(err)?.value;
        let expected = BigRational::new(tuple_count(d, types).into(), factorial(d).into());
        n += 1;
        ensure(h == expected, || format!("d{d} {names:?}: {h} vs {expected}"))
    };
    for d in 1..=3 {
        for len in 2..=4 {
            for types in tuples(&partitions(d), len) {
                check(d, &types)?;
            }
        }
    }
    for types in tuples(&partitions(4), 2) {
        check(4, &types)?;
    }
    for types in [
        vec![vec![2, 1, 1], vec![2, 1, 1], vec![2, 2]],
        vec![vec![3, 1], vec![3, 1], vec![3, 1]],
        vec![vec![4], vec![4], vec![2, 2]],
        vec![vec![4], vec![2, 1, 1], vec![3, 1]],
        vec![vec![2, 1, 1], vec![2, 1, 1], vec![2, 1, 1]],
    ] {
        check(4, &types)?;
    }
    // the three named values, against hand counts
    let s = |x: &[&str]| x.iter().map(|y| y.to_string()).collect::<Vec<_>>();
    for (d, names, expected) in [
        (2, s(&["[2]", "[2]", "[1,1]"]), rat(1, 2)),
        (3, s(&["[2,1]"; 4]), rat(9, 2)),
        (3, s(&["[3]"; 3]), rat(1, 3)),
    ] {
        let g = symmetric_lex(d);
        let omega = sphere_complex(names.len());
        let h = hurwitz_with(&omega, &g, &named(&omega, &g, &names)?, &b).map_err(err)?.value;
        ensure(h == expected, || format!("d{d} {names:?}: {h}"))?;
        n += 1;
    }
    Ok(format!("{n} values"))
}

fn cut_gluing() -> Outcome {
    let mut r = VerificationReport::default();
    for d in 1..=3 {
        let lab = Lab::new(TheoryConfig::degree(d)).map_err(err)?;
        r.extend(verify_gluing_catalog(&lab, &catalog()).map_err(err)?);
    }
    ensure(r.checks.iter().filter(|c| c.name == "mutation-detected").count() == 15, || "mutation lines missing".into())?;
    report(&r)
}

fn build_all() -> Result<Vec<(TheoryConfig, HurwitzAlgebra)>, String> {
    theories()
        .into_iter()
        .map(|t| {
            let lab = Lab::new(t.clone()).map_err(err)?;
            let h = algebra_for(&lab, &complexes()).map_err(err)?;
            Ok((t, h))
        })
        .collect()
}

fn algebra_axioms(built: &[(TheoryConfig, HurwitzAlgebra)]) -> Outcome {
    let mut r = VerificationReport::default();
    for (t, h) in built {
        r.extend(verify_algebra(h, &t.tag()));
    }
    report(&r)
}

fn chain_loop() -> Outcome {
    let spheres = [sphere_complex(3), sphere_complex(4)];
    let mut configs: Vec<TheoryConfig> = (1..=3).map(TheoryConfig::degree).collect();
    configs.push(TheoryConfig::group(catalog_group("C2").unwrap()));
    let mut r = VerificationReport::default();
    for t in configs {
        let lab = Lab::new(t).map_err(err)?;
        let h = algebra_for(&lab, &spheres).map_err(err)?;
        for (i, omega) in spheres.iter().enumerate() {
            let name = format!("sphere{}", i + 3);
            r.extend(cross_check_evaluator(&lab, &h, &name, omega).map_err(err)?);
            r.extend(verify_basis_change(&h, &name, omega, 20, 1, 7 + i as u64).map_err(err)?);
        }
    }
    report(&r)
}

fn copairing(built: &[(TheoryConfig, HurwitzAlgebra)]) -> Outcome {
    let mut n = 0;
    for (t, h) in built {
        for s in 0..h.algebra.sectors().len() {
            ensure(h.algebra.copairing_identity(s), || format!("{} sector {s}", t.tag()))?;
            n += 1;
        }
    }
    Ok(format!("{n} sectors"))
}

/// Group-side table mapped to degree-side keys through the defining action.
fn mapped_table(g_lab: &Lab, omega: &BraneComplex) -> Result<BTreeMap<Vec<ClassKey>, BigRational>, String> {
    let b = Bounds::default();
    let base = CoveringBase::new(omega, &b).map_err(err)?;
    let links = g_lab.link_classes(omega).map_err(err)?;
    let mut out = BTreeMap::new();
    for (keys, v) in g_lab.table(omega).map_err(err)?.entries() {
        let mapped = keys
            .iter()
            .enumerate()
            .map(|(q, k)| {
                let c = links[q].iter().find(|c| &c.class_key == k).ok_or("unknown class")?;
                sd_correspondence(base.link_sector(q), g_lab.group(), c).map(|c| c.class_key).map_err(err)
            })
            .collect::<Result<Vec<_>, String>>()?;
        *out.entry(mapped).or_insert_with(|| rat(0, 1)) += v;
    }
    Ok(out)
}

fn sd_coincidence(built: &[(TheoryConfig, HurwitzAlgebra)]) -> Outcome {
    let find = |tag: &str| built.iter().find(|(t, _)| t.tag() == tag).map(|(_, h)| h);
    let s2 = catalog_group("S2").map_err(err)?;
    let s3 = catalog_group("S3").map_err(err)?;
    let mut r = VerificationReport::default();
    let s2_lab = Lab::new(TheoryConfig::group(s2.clone())).map_err(err)?;
    let s2_alg = algebra_for(&s2_lab, &complexes()).map_err(err)?;
    r.extend(compare_sd(&s2_alg, find("d2").unwrap(), &s2).map_err(err)?);
    r.extend(compare_sd(find("G:S3").unwrap(), find("d3").unwrap(), &s3).map_err(err)?);
    let s3_lab = Lab::new(TheoryConfig::group(s3)).map_err(err)?;
    let mut spheres = catalog();
    spheres.extend([2, 5].map(|n| (format!("sphere{n}"), sphere_complex(n))));
    for (g_lab, d, set) in [(&s2_lab, 2, catalog()), (&s3_lab, 3, spheres)] {
        let d_lab = Lab::new(TheoryConfig::degree(d)).map_err(err)?;
        for (name, omega) in &set {
            let expected = d_lab.table(omega).map_err(err)?.entries();
            let computed = mapped_table(g_lab, omega)?;
            r.push_tables("sd-values", &format!("{name}/d{d}"), &expected, &computed);
        }
    }
    report(&r)
}

fn burnside() -> Outcome {
    let b = Bounds::default();
    let mut instances: Vec<BraneComplex> = complexes();
    instances.extend([2, 5].map(sphere_complex));
    let mut n = 0;
    let mut exhaustive = 0;
    for omega in &instances {
        let base = CoveringBase::new(omega, &b).map_err(err)?;
        for t in theories() {
            let lab = Lab::new(t).map_err(err)?;
            let table = lab.table(omega).map_err(err)?;
            table.burnside_check(None).map_err(err)?;
            if let Some(l) = base.labeled_counts(lab.group(), 200_000) {
                table.burnside_check(Some(&l)).map_err(err)?;
                exhaustive += 1;
            }
            n += 1;
        }
    }
    Ok(format!("{n} instances, {exhaustive} with exhaustive labeled counts"))
}

fn tft_axioms() -> Outcome {
    let mut r = VerificationReport::default();
    for t in theories() {
        let lab = Lab::new(t).map_err(err)?;
        r.extend(verify_tft_axioms(&lab, &catalog()).map_err(err)?);
    }
    report(&r)
}

fn round_trips() -> Outcome {
    let b = Bounds::default();
    let mut n = 0;
    let mut all = complexes();
    all.push(sphere_complex(5));
    for omega in &all {
        let text = serialize_brane(omega);
        match parse_complex(&text).map_err(err)? {
            Parsed::Brane(back) => ensure(&back == omega && serialize_brane(&back) == text, || "parse mismatch".into())?,
            Parsed::Plain(_) => return Err("orders lost".into()),
        }
        let c = omega.complex();
        let links: Vec<_> = omega.orders()[0]
            .iter()
            .map(|&q| c.link(q).map(|l| l.graph))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let rebuilt = compatible_complex(&links).ok_or("links do not glue")?;
        ensure(rebuilt.canonical_key() == omega.canonical_key(), || "rebuilt complex differs".into())?;
        let base = CoveringBase::new(omega, &b).map_err(err)?;
        for d in 2..=3 {
            let g = symmetric_lex(d);
            for class in base.table(&g, &b).map_err(err)?.classes {
                let f = base.covering(&g, class.labels.clone());
                for cut in omega.certificate() {
                    let res = f.restrict_to_cut(cut).map_err(err)?;
                    let glued = res.glue(&base, &res.contracted_labels).map_err(err)?;
                    let back = base.covering(&g, glued).class();
                    ensure(back.class_key == class.class_key && back.local == class.local, || "cut/glue changed the class".into())?;
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{} complexes, {n} cut/glue round trips", all.len()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut built = None;
    let mut failed = 0;
    let mut run = |k: usize, name: &str, limit: Option<u64>, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let out = f();
        let dt = t.elapsed();
        let slow = limit.is_some_and(|l| dt > Duration::from_secs(l));
        let (status, detail) = match (&out, slow) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over {}s", limit.unwrap())),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {k:>2} {name}: {status} ({detail}) [{:.2}s]", dt.as_secs_f64());
    };
    run(1, "pairing-formula", Some(10), &mut pairing_formula);
    run(2, "classical-oracle", Some(60), &mut classical_oracle);
    run(3, "cut-gluing", Some(60), &mut cut_gluing);
    run(4, "algebra-axioms", Some(120), &mut || {
        let b = build_all()?;
        let out = algebra_axioms(&b);
        built = Some(b);
        out
    });
    let built = built.unwrap_or_default();
    run(5, "evaluator-loop", Some(120), &mut chain_loop);
    run(6, "copairing", None, &mut || copairing(&built));
    run(7, "sd-coincidence", None, &mut || sd_coincidence(&built));
    run(8, "burnside", None, &mut burnside);
    run(9, "tft-axioms", None, &mut tft_axioms);
    run(10, "round-trips", None, &mut round_trips);
    println!("acceptance: {} of 10 passed in {:.2}s", 10 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use brane_core::complex::{sphere_complex, BraneComplex, ColoredComplex};
use brane_core::covering::{CoveringBase, CoveringClass};
use brane_core::format::{parse_complex, serialize_brane, serialize_complex, Parsed};
use brane_core::group::{catalog_group, FiniteGroup};
use brane_core::lab::*;
use num::BigRational;

use crate::cache::Cache;
use crate::{Command, Theory};

pub fn run(cmd: Command, cache: Option<&Path>) -> Result<ExitCode> {
    let cache = Cache::new(cache)?;
    let mut out = String::new();
    let ok = match cmd {
        Command::Validate { file } => validate(&file, &mut out)?,
        Command::Link { file, vertex } => link(&file, &vertex, &mut out)?,
        Command::Cuts { file } => cuts(&file, &mut out)?,
        Command::Classes { theory, file } => classes(&lab(&theory)?, &cache, &file, &mut out)?,
        Command::Hurwitz {
            theory,
            file,
            at,
            breakdown,
        } => hurwitz(&lab(&theory)?, &cache, &file, &at, breakdown, &mut out)?,
        Command::Algebra { theory, sectors, out: dest } => algebra(&lab(&theory)?, &sectors, &dest, &mut out)?,
        Command::Verify { theory, catalog } => verify(&lab(&theory)?, &catalog, &mut out)?,
        Command::Oracle { theory, classes } => oracle(&lab(&theory)?, &classes, &mut out)?,
        Command::Catalog { dir } => write_catalog(&dir, &mut out)?,
    };
    print!("{out}");
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn lab(t: &Theory) -> Result<Lab> {
    let config = match (t.degree, &t.group) {
        (Some(d), None) => TheoryConfig::degree(d),
        (None, Some(g)) => TheoryConfig::group(group(g)?),
        _ => bail!("give exactly one of --degree and --group"),
    };
    Ok(Lab::new(config)?)
}

fn group(name: &str) -> Result<FiniteGroup> {
    if let Ok(g) = catalog_group(name) {
        return Ok(g);
    }
    let text = fs::read_to_string(name).with_context(|| format!("`{name}` is neither a catalog group nor a readable file"))?;
    Ok(FiniteGroup::parse_table(&text)?)
}

fn read(path: &Path) -> Result<(String, Parsed)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = parse_complex(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    Ok((text, parsed))
}

fn read_brane(path: &Path) -> Result<(String, BraneComplex)> {
    match read(path)? {
        (text, Parsed::Brane(b)) => Ok((text, b)),
        (_, Parsed::Plain(_)) => bail!("{}: no `order` lines, not a brane complex", path.display()),
    }
}

fn read_plain(path: &Path) -> Result<(String, ColoredComplex)> {
    let (text, p) = read(path)?;
    Ok((text, p.complex().clone()))
}

fn validate(file: &Path, out: &mut String) -> Result<bool> {
    let (_, parsed) = read(file)?;
    let c = parsed.complex();
    let (v, e, f) = c.cell_counts();
    let kind = match parsed {
        Parsed::Brane(_) => "brane complex",
        Parsed::Plain(_) => "colored complex",
    };
    writeln!(
        out,
        "valid {kind}: dim {}, {v} vertices, {e} edges, {f} faces, {} components, euler {}",
        c.dim(),
        c.components().len(),
        c.euler_characteristic()
    )?;
    Ok(true)
}

fn vertex(c: &ColoredComplex, id: &str) -> Result<usize> {
    c.vertex_index(id).ok_or_else(|| anyhow!("unknown vertex `{id}`"))
}

fn link(file: &Path, id: &str, out: &mut String) -> Result<bool> {
    let (_, parsed) = read(file)?;
    let c = parsed.complex();
    let l = c.link(vertex(c, id)?)?;
    out.push_str(&serialize_complex(&l.graph));
    Ok(true)
}

fn cuts(file: &Path, out: &mut String) -> Result<bool> {
    let (_, b) = read_brane(file)?;
    let c = b.complex();
    for cut in b.certificate() {
        let crossed: Vec<&str> = cut.crossed_edges.iter().map(|&e| c.edges()[e].id.as_str()).collect();
        let (v, e, _) = cut.gamma.cell_counts();
        writeln!(
            out,
            "cut {} crosses {} (gamma: {v} vertices, {e} edges)",
            cut.split.display(c),
            if crossed.is_empty() { "-".to_string() } else { crossed.join(",") }
        )?;
    }
    Ok(true)
}

fn classes(lab: &Lab, cache: &Cache, file: &Path, out: &mut String) -> Result<bool> {
    let (_, sigma) = read_plain(file)?;
    if sigma.dim() > 1 {
        bail!("{}: coverings are classified over graphs only", file.display());
    }
    let key = sigma.canonical_key();
    let text = cache.text("classes", &lab.config().tag(), &key, || {
        let (s, cl) = lab.sector(&sigma)?;
        let mut t = String::new();
        for c in &cl {
            writeln!(t, "{}\taut {}", s.class_name(lab.group(), c, lab.bounds()), c.aut_order)?;
        }
        Ok(t)
    })?;
    out.push_str(&text);
    Ok(true)
}

fn hurwitz(lab: &Lab, cache: &Cache, file: &Path, at: &[String], breakdown: bool, out: &mut String) -> Result<bool> {
    let (text, b) = read_brane(file)?;
    let c = b.complex();
    let base = CoveringBase::new(&b, lab.bounds())?;
    let g = lab.group();
    let mut constraints: Vec<Option<CoveringClass>> =
        (0..c.vertices().len()).map(|q| Some(base.link_sector(q).trivial_class(g))).collect();
    for a in at {
        let (v, name) = a.split_once('=').ok_or_else(|| anyhow!("`--at {a}`: expected VERTEX=CLASS"))?;
        let q = vertex(c, v)?;
        constraints[q] = match name {
            "*" => None,
            _ => Some(base.link_sector(q).class_by_name(g, name, lab.bounds())?),
        };
    }
    if breakdown {
        let table = lab.table(&b)?;
        let v = table.value(&constraints);
        writeln!(out, "{}", v.value)?;
        for (k, w) in &v.breakdown {
            writeln!(out, "  {w}\t{k}")?;
        }
        return Ok(true);
    }
    let (key, map) = cache.canonical_form(&text, c)?;
    let entries = cache.table(&lab.config().tag(), &key, &map, || Ok(lab.table(&b)?.entries()))?;
    let value: BigRational = entries
        .iter()
        .filter(|(k, _)| brane_core::covering::matches(k, &constraints))
        .map(|(_, v)| v)
        .sum();
    writeln!(out, "{value}")?;
    Ok(true)
}

fn algebra(lab: &Lab, files: &[PathBuf], dest: &Path, out: &mut String) -> Result<bool> {
    let mut graphs = Vec::new();
    let mut branes = Vec::new();
    for f in files {
        match read(f)? {
            (_, Parsed::Brane(b)) => branes.push(b),
            (_, Parsed::Plain(c)) if c.dim() <= 1 => graphs.push(c),
            _ => bail!("{}: a sector must be a graph", f.display()),
        }
    }
    if !branes.is_empty() {
        graphs.extend(sector_closure(&branes, 200)?);
    }
    let h = build_hurwitz_algebra(lab, &graphs)?;
    fs::write(dest, h.algebra.to_text()).with_context(|| format!("writing {}", dest.display()))?;
    let dims: usize = h.algebra.sectors().iter().map(|s| s.basis.len()).sum();
    writeln!(
        out,
        "{} sectors, total dimension {dims}, {} blocks",
        h.algebra.sectors().len(),
        h.algebra.blocks().count()
    )?;
    let r = verify_algebra(&h, &lab.config().tag());
    write!(out, "{r}")?;
    Ok(r.all_passed())
}

fn load_catalog(dir: &Path) -> Result<Vec<(String, BraneComplex)>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    files.retain(|p| p.extension().is_some_and(|x| x == "cw"));
    files.sort();
    let mut out = Vec::new();
    for f in files {
        if let (_, Parsed::Brane(b)) = read(&f)? {
            let name = f.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            out.push((name, b));
        }
    }
    if out.is_empty() {
        bail!("{}: no brane complexes (*.cw with `order` lines)", dir.display());
    }
    Ok(out)
}

fn verify(lab: &Lab, dir: &Path, out: &mut String) -> Result<bool> {
    let catalog = load_catalog(dir)?;
    let tag = lab.config().tag();
    let mut r = verify_tft_axioms(lab, &catalog)?;
    r.extend(verify_gluing_catalog(lab, &catalog)?);
    let complexes: Vec<BraneComplex> = catalog.iter().map(|(_, c)| c.clone()).collect();
    let h = algebra_for(lab, &complexes)?;
    r.extend(verify_algebra(&h, &tag));
    for (name, omega) in &catalog {
        if omega.complex().is_connected() && omega.complex().dim() == 2 {
            r.extend(cross_check_evaluator(lab, &h, name, omega)?);
        }
    }
    r.extend(oracle_agreement(lab)?);
    write!(out, "{r}")?;
    let failed = r.checks.iter().filter(|c| !c.passed).count();
    writeln!(out, "{} checks, {failed} failed", r.checks.len())?;
    Ok(failed == 0)
}

/// Sphere tables against exhaustive tuple counts, every class tuple.
fn oracle_agreement(lab: &Lab) -> Result<VerificationReport> {
    let kind = oracle_kind(lab);
    let mut r = VerificationReport::default();
    for n in 2..=4 {
        let omega = sphere_complex(n);
        let base = CoveringBase::new(&omega, lab.bounds())?;
        let links = lab.link_classes(&omega)?;
        let table = lab.table(&omega)?;
        let mut expected = BTreeMap::new();
        let mut computed = BTreeMap::new();
        let mut idx = vec![0usize; n];
        loop {
            let cls: Vec<&CoveringClass> = (0..n).map(|q| &links[q][idx[q]]).collect();
            let names: Vec<String> = (0..n)
                .map(|q| base.link_sector(q).class_name(lab.group(), cls[q], lab.bounds()))
                .collect();
            let keys: Vec<_> = cls.iter().map(|c| c.class_key.clone()).collect();
            expected.insert(names.clone(), character_oracle(&kind, &names, lab.bounds())?);
            computed.insert(names, table.value_at(&keys));
            // odometer over the class lists
            let mut q = 0;
            while q < n {
                idx[q] += 1;
                if idx[q] < links[q].len() {
                    break;
                }
                idx[q] = 0;
                q += 1;
            }
            if q == n {
                break;
            }
        }
        r.push_tables("oracle", &format!("sphere{n}/{}", lab.config().tag()), &expected, &computed);
    }
    Ok(r)
}

fn oracle_kind(lab: &Lab) -> OracleKind {
    match &lab.config().kind {
        TheoryKind::Degree(d) => OracleKind::Degree(*d),
        TheoryKind::Group(g) => OracleKind::Group(g.clone()),
    }
}

fn oracle(lab: &Lab, classes: &[String], out: &mut String) -> Result<bool> {
    let v = character_oracle(&oracle_kind(lab), classes, lab.bounds())?;
    writeln!(out, "count\t{v}")?;
    match character_formula(lab.group(), classes) {
        Some(w) => {
            writeln!(out, "characters\t{w}")?;
            Ok(v == w)
        }
        None => Ok(true),
    }
}

fn write_catalog(dir: &Path, out: &mut String) -> Result<bool> {
    fs::create_dir_all(dir)?;
    for (name, b) in standard_catalog() {
        let p = dir.join(format!("{name}.cw"));
        fs::write(&p, serialize_brane(&b))?;
        writeln!(out, "{}", p.display())?;
    }
    Ok(true)
}

//! Content-addressed on-disk memoization: one file per canonical key.
//!
//! `forms/<sha256 of file text>` holds the canonical key and vertex map of a
//! complex; `tables/<sha256 of theory and key>` holds a Hurwitz table with
//! its vertices in canonical order, and `classes/...` the class list of a
//! sector. Entries are plain text and are recomputed whenever they are
//! missing or unreadable.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use brane_core::complex::{CanonicalKey, ColoredComplex};
use brane_core::covering::ClassKey;
use num::BigRational;
use sha2::{Digest, Sha256};

pub struct Cache {
    root: Option<PathBuf>,
}

fn digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

fn key_field(k: &ClassKey) -> &str {
    if k.0.is_empty() {
        "-"
    } else {
        &k.0
    }
}

fn parse_key(s: &str) -> ClassKey {
    ClassKey(if s == "-" { String::new() } else { s.to_string() })
}

pub type Entries = BTreeMap<Vec<ClassKey>, BigRational>;

impl Cache {
    pub fn new(root: Option<&Path>) -> Result<Cache> {
        if let Some(r) = root {
            for sub in ["forms", "tables", "classes"] {
                fs::create_dir_all(r.join(sub)).with_context(|| format!("creating cache {}", r.display()))?;
            }
        }
        Ok(Cache {
            root: root.map(Path::to_path_buf),
        })
    }

    fn path(&self, kind: &str, name: &str) -> Option<PathBuf> {
        self.root.as_ref().map(|r| r.join(kind).join(name))
    }

    fn read(&self, kind: &str, name: &str) -> Option<String> {
        fs::read_to_string(self.path(kind, name)?).ok()
    }

    fn write(&self, kind: &str, name: &str, text: &str) -> Result<()> {
        if let Some(p) = self.path(kind, name) {
            // write then rename, so readers never see half a file
            let tmp = p.with_extension("tmp");
            fs::write(&tmp, text)?;
            fs::rename(&tmp, &p)?;
        }
        Ok(())
    }

    /// Canonical key and vertex map (vertex -> canonical position).
    pub fn canonical_form(&self, text: &str, c: &ColoredComplex) -> Result<(CanonicalKey, Vec<usize>)> {
        let name = digest(&[text]);
        if let Some(hit) = self.read("forms", &name).and_then(|s| parse_form(&s)) {
            if hit.1.len() == c.vertices().len() {
                return Ok(hit);
            }
        }
        let f = c.canonical_form();
        let map: Vec<String> = f.vertex_map.iter().map(usize::to_string).collect();
        self.write("forms", &name, &format!("{}\n{}\n", f.key, map.join(" ")))?;
        Ok((f.key, f.vertex_map))
    }

    /// Hurwitz table entries in the caller's vertex order.
    pub fn table(
        &self,
        theory: &str,
        key: &CanonicalKey,
        vertex_map: &[usize],
        compute: impl FnOnce() -> Result<Entries>,
    ) -> Result<Entries> {
        let name = digest(&["table", theory, key.as_str()]);
        let n = vertex_map.len();
        if let Some(stored) = self.read("tables", &name).and_then(|s| parse_table(&s, n)) {
            return Ok(stored
                .into_iter()
                .map(|(k, v)| (vertex_map.iter().map(|&p| k[p].clone()).collect(), v))
                .collect());
        }
        let entries = compute()?;
        let mut text = String::new();
        for (k, v) in &entries {
            let mut canon = vec![ClassKey(String::new()); n];
            for (q, &p) in vertex_map.iter().enumerate() {
                canon[p] = k[q].clone();
            }
            let fields: Vec<&str> = canon.iter().map(key_field).collect();
            text.push_str(&format!("{v}\t{}\n", fields.join("\t")));
        }
        self.write("tables", &name, &text)?;
        Ok(entries)
    }

    /// Free-form text memoized under a theory and canonical key.
    pub fn text(&self, kind: &str, theory: &str, key: &CanonicalKey, compute: impl FnOnce() -> Result<String>) -> Result<String> {
        let name = digest(&[kind, theory, key.as_str()]);
        if let Some(s) = self.read("classes", &name) {
            return Ok(s);
        }
        let s = compute()?;
        self.write("classes", &name, &s)?;
        Ok(s)
    }
}

fn parse_form(s: &str) -> Option<(CanonicalKey, Vec<usize>)> {
    let mut lines = s.lines();
    let key = CanonicalKey::from_string(lines.next()?.to_string());
    let map = lines
        .next()
        .unwrap_or("")
        .split_whitespace()
        .map(|x| x.parse().ok())
        .collect::<Option<Vec<usize>>>()?;
    Some((key, map))
}

fn parse_table(s: &str, n: usize) -> Option<Entries> {
    let mut out = Entries::new();
    for line in s.lines() {
        let mut f = line.split('\t');
        let v: BigRational = f.next()?.parse().ok()?;
        let keys: Vec<ClassKey> = f.map(parse_key).collect();
        if keys.len() != n {
            return None;
        }
        out.insert(keys, v);
    }
    Some(out)
}

//! Finite groups given by multiplication tables.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::perm::{all_perms, partition_name, Perm};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("group too large: {0}")]
    TooLarge(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Symmetric(usize),
    Cyclic(usize),
    /// A table in the text format read by [`FiniteGroup::parse_table`].
    Table(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub name: String,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    names: Vec<String>,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    perm_rep: Option<Vec<Perm>>,
}

const V4_TABLE: &str = "\
group V4
elements e a b c
row e e a b c
row a a e c b
row b b c e a
row c c b a e
";

/// Names accepted by [`catalog_group`].
pub const CATALOG_GROUPS: [&str; 9] = ["C2", "C3", "C4", "C5", "C6", "S2", "S3", "S4", "V4"];

/// A group from the shipped catalog.
pub fn catalog_group(name: &str) -> Result<FiniteGroup, GroupError> {
    let n = |s: &str| s.parse::<usize>().ok();
    match (name.get(..1), name.get(1..).and_then(n)) {
        (Some("C"), Some(k)) if (2..=6).contains(&k) => make_group(&GroupSpec::Cyclic(k)),
        (Some("S"), Some(k)) if (2..=4).contains(&k) => make_group(&GroupSpec::Symmetric(k)),
        _ if name == "V4" => make_group(&GroupSpec::Table(V4_TABLE.into())),
        _ => Err(GroupError::UnknownGroup(name.into())),
    }
}

pub fn make_group(spec: &GroupSpec) -> Result<FiniteGroup, GroupError> {
    match spec {
        GroupSpec::Symmetric(n) => {
            if *n == 0 || *n > 5 {
                return Err(GroupError::TooLarge(format!("symmetric({n})")));
            }
            Ok(symmetric_by_closure(*n))
        }
        GroupSpec::Cyclic(n) => {
            if *n == 0 {
                return Err(GroupError::NotAGroup("cyclic(0)".into()));
            }
            let names = (0..*n).map(|i| i.to_string()).collect();
            let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
            FiniteGroup::from_table(format!("C{n}"), names, table, None)
        }
        GroupSpec::Table(text) => FiniteGroup::parse_table(text),
    }
}

/// Symmetric group with elements in closure order from the generators (12) and (12..n).
fn symmetric_by_closure(n: usize) -> FiniteGroup {
    let id = Perm::identity(n);
    let mut gens = Vec::new();
    if n >= 2 {
        let mut s: Vec<u8> = (0..n as u8).collect();
        s.swap(0, 1);
        gens.push(Perm::from_images(s).unwrap());
        let c: Vec<u8> = (0..n as u8).map(|i| (i + 1) % n as u8).collect();
        gens.push(Perm::from_images(c).unwrap());
    }
    let mut elems = vec![id.clone()];
    let mut index: HashMap<Perm, usize> = HashMap::from([(id, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let p = elems[i].compose(g);
            if !index.contains_key(&p) {
                index.insert(p.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push(p);
            }
        }
    }
    from_perms(format!("S{n}"), elems)
}

/// Symmetric group with elements in lexicographic order of image lists.
pub fn symmetric_lex(d: usize) -> FiniteGroup {
    from_perms(format!("S{d}"), all_perms(d))
}

fn from_perms(name: String, elems: Vec<Perm>) -> FiniteGroup {
    let index: HashMap<&Perm, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let k = elems.len();
    let mut table = vec![0; k * k];
    for a in 0..k {
        for b in 0..k {
            table[a * k + b] = index[&elems[a].compose(&elems[b])];
        }
    }
    let names = elems.iter().map(|p| p.to_string()).collect();
    FiniteGroup::from_table(name, names, table, Some(elems.clone())).expect("permutation group")
}

impl FiniteGroup {
    /// Validates a full multiplication table (`table[a * n + b] = a * b`).
    pub fn from_table(
        name: String,
        names: Vec<String>,
        table: Vec<usize>,
        perm_rep: Option<Vec<Perm>>,
    ) -> Result<FiniteGroup, GroupError> {
        let n = names.len();
        if n == 0 || table.len() != n * n {
            return Err(GroupError::NotAGroup("table shape".into()));
        }
        if table.iter().any(|&x| x >= n) {
            return Err(GroupError::NotAGroup("product outside the element set".into()));
        }
        let m = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| m(e, x) == x && m(x, e) == x))
            .ok_or_else(|| GroupError::NotAGroup("no identity".into()))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| m(a, b) == identity && m(b, a) == identity)
                .ok_or_else(|| GroupError::NotAGroup(format!("`{}` has no inverse", names[a])))?;
        }
        let assoc = |a: usize, b: usize, c: usize| -> Result<(), GroupError> {
            if m(m(a, b), c) != m(a, m(b, c)) {
                Err(GroupError::NotAGroup(format!(
                    "({}{}){} differs from {}({}{})",
                    names[a], names[b], names[c], names[a], names[b], names[c]
                )))
            } else {
                Ok(())
            }
        };
        if n <= 24 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        assoc(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..20_000 {
                assoc(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        let is_full_symmetric = perm_rep
            .as_ref()
            .is_some_and(|p| (1..=p[0].degree()).product::<usize>() == n);
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..n).map(|h| m(m(h, g), inverse[h])).collect();
            members.sort_unstable();
            members.dedup();
            for &x in &members {
                class_of[x] = classes.len();
            }
            let name = if is_full_symmetric {
                partition_name(&perm_rep.as_ref().unwrap()[g].cycle_type())
            } else if members.len() == 1 {
                names[g].clone()
            } else {
                let ms: Vec<&str> = members.iter().map(|&x| names[x].as_str()).collect();
                format!("{{{}}}", ms.join(","))
            };
            classes.push(ConjugacyClass { name, members });
        }
        Ok(FiniteGroup {
            name,
            names,
            table,
            identity,
            inverse,
            classes,
            class_of,
            perm_rep,
        })
    }

    /// Reads `group NAME`, `elements a b ...` and one `row x x*a x*b ...` per element.
    pub fn parse_table(text: &str) -> Result<FiniteGroup, GroupError> {
        let mut name = None;
        let mut names: Vec<String> = Vec::new();
        let mut rows: HashMap<String, (usize, Vec<String>)> = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let mut toks = line.split_whitespace();
            let err = |message: &str| GroupError::Parse {
                line: line_no,
                message: message.to_string(),
            };
            match toks.next() {
                Some("group") => name = Some(toks.next().ok_or_else(|| err("missing name"))?.to_string()),
                Some("elements") => names = toks.map(String::from).collect(),
                Some("row") => {
                    let head = toks.next().ok_or_else(|| err("empty row"))?.to_string();
                    let rest: Vec<String> = toks.map(String::from).collect();
                    if rows.insert(head.clone(), (line_no, rest)).is_some() {
                        return Err(err(&format!("second row for `{head}`")));
                    }
                }
                Some(other) => return Err(err(&format!("unknown keyword `{other}`"))),
                None => {}
            }
        }
        let name = name.ok_or(GroupError::Parse {
            line: 1,
            message: "missing `group` line".into(),
        })?;
        let index: HashMap<&str, usize> =
            names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != names.len() {
            return Err(GroupError::NotAGroup("repeated element name".into()));
        }
        let n = names.len();
        let mut table = vec![0; n * n];
        for (a, an) in names.iter().enumerate() {
            let (line, row) = rows.get(an).ok_or_else(|| {
                GroupError::NotAGroup(format!("missing row for `{an}`"))
            })?;
            if row.len() != n {
                return Err(GroupError::Parse {
                    line: *line,
                    message: format!("row has {} entries, expected {n}", row.len()),
                });
            }
            for (b, x) in row.iter().enumerate() {
                table[a * n + b] = *index.get(x.as_str()).ok_or_else(|| GroupError::Parse {
                    line: *line,
                    message: format!("unknown element `{x}`"),
                })?;
            }
        }
        if rows.len() != n {
            return Err(GroupError::NotAGroup("row for an unlisted element".into()));
        }
        FiniteGroup::from_table(name, names, table, None)
    }

    /// The text table format.
    pub fn to_table_text(&self) -> String {
        let mut s = format!("group {}\nelements {}\n", self.name, self.names.join(" "));
        for a in 0..self.order() {
            let row: Vec<&str> = (0..self.order()).map(|b| self.names[self.mul(a, b)].as_str()).collect();
            let _ = writeln!(s, "row {} {}", self.names[a], row.join(" "));
        }
        s
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.names.len() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `h g h^-1`
    #[inline]
    pub fn conj(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inverse[h])
    }

    pub fn element_name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn element_by_name(&self, s: &str) -> Option<usize> {
        if let Some(i) = self.names.iter().position(|n| n == s) {
            return Some(i);
        }
        let d = self.perm_rep.as_ref()?.first()?.degree();
        let p = Perm::parse_cycles(s, d)?;
        self.perm_rep.as_ref()?.iter().position(|q| *q == p)
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn class_by_name(&self, s: &str) -> Option<usize> {
        let s = s.trim();
        if let Some(c) = self.classes.iter().position(|c| c.name == s) {
            return Some(c);
        }
        if self.symmetric_degree().is_some() {
            let parts = crate::perm::parse_partition(s)?;
            let name = partition_name(&parts);
            return self.classes.iter().position(|c| c.name == name);
        }
        self.element_by_name(s).map(|g| self.class_of[g])
    }

    pub fn perm(&self, g: usize) -> Option<&Perm> {
        self.perm_rep.as_ref().map(|p| &p[g])
    }

    /// `Some(d)` when this is the full symmetric group on `d` points.
    pub fn symmetric_degree(&self) -> Option<usize> {
        let p = self.perm_rep.as_ref()?;
        let d = p[0].degree();
        ((1..=d).product::<usize>() == self.order()).then_some(d)
    }

    pub fn centralizer_order(&self, g: usize) -> usize {
        (0..self.order()).filter(|&h| self.mul(h, g) == self.mul(g, h)).count()
    }

    /// Static character table for the catalog groups that ship one: rows are
    /// irreducible characters, columns follow [`Self::classes`].
    pub fn character_table(&self) -> Option<Vec<Vec<i64>>> {
        let (class_names, rows): (&[&str], &[&[i64]]) = match (self.name.as_str(), self.order()) {
            ("S2", 2) => (&["[1,1]", "[2]"], &[&[1, 1], &[1, -1]]),
            ("C2", 2) => (&["0", "1"], &[&[1, 1], &[1, -1]]),
            ("S3", 6) => (
                &["[1,1,1]", "[2,1]", "[3]"],
                &[&[1, 1, 1], &[1, -1, 1], &[2, 0, -1]],
            ),
            ("S4", 24) => (
                &["[1,1,1,1]", "[2,1,1]", "[2,2]", "[3,1]", "[4]"],
                &[
                    &[1, 1, 1, 1, 1],
                    &[1, -1, 1, 1, -1],
                    &[3, 1, -1, 0, -1],
                    &[3, -1, -1, 0, 1],
                    &[2, 0, 2, -1, 0],
                ],
            ),
            ("V4", 4) => (
                &["e", "a", "b", "c"],
                &[&[1, 1, 1, 1], &[1, 1, -1, -1], &[1, -1, 1, -1], &[1, -1, -1, 1]],
            ),
            _ => return None,
        };
        let cols: Vec<usize> = self
            .classes
            .iter()
            .map(|c| class_names.iter().position(|n| *n == c.name))
            .collect::<Option<_>>()?;
        Some(rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders_and_classes() {
        let expect = [
            ("C2", 2, 2),
            ("C3", 3, 3),
            ("C6", 6, 6),
            ("S2", 2, 2),
            ("S3", 6, 3),
            ("S4", 24, 5),
            ("V4", 4, 4),
        ];
        for (name, order, classes) in expect {
            let g = catalog_group(name).unwrap();
            assert_eq!(g.order(), order, "{name}");
            assert_eq!(g.classes().len(), classes, "{name}");
        }
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // a Latin square with identity e that is not associative
        let t = "group L\nelements e a b c d\n\
                 row e e a b c d\nrow a a e c d b\nrow b b d e a c\n\
                 row c c b d e a\nrow d d c a b e\n";
        assert!(matches!(make_group(&GroupSpec::Table(t.into())), Err(GroupError::NotAGroup(_))));
    }

    #[test]
    fn table_text_round_trip() {
        for name in CATALOG_GROUPS {
            let g = catalog_group(name).unwrap();
            let h = FiniteGroup::parse_table(&g.to_table_text()).unwrap();
            assert_eq!(g.order(), h.order());
            assert_eq!(g.classes().len(), h.classes().len());
        }
    }

    #[test]
    fn closure_order_differs_from_lex_order() {
        let a = make_group(&GroupSpec::Symmetric(3)).unwrap();
        let b = symmetric_lex(3);
        let an: Vec<&str> = (0..6).map(|i| a.element_name(i)).collect();
        let bn: Vec<&str> = (0..6).map(|i| b.element_name(i)).collect();
        assert_ne!(an, bn);
        assert_eq!(a.classes().len(), b.classes().len());
    }

    #[test]
    fn character_tables_are_orthogonal() {
        for name in ["S2", "S3", "S4", "C2", "V4"] {
            let g = catalog_group(name).unwrap();
            let t = g.character_table().unwrap();
            for x in &t {
                for y in &t {
                    let s: i64 = g
                        .classes()
                        .iter()
                        .enumerate()
                        .map(|(c, cl)| cl.members.len() as i64 * x[c] * y[c])
                        .sum();
                    let expected = if x == y { g.order() as i64 } else { 0 };
                    assert_eq!(s, expected, "{name}");
                }
            }
        }
    }

    #[test]
    fn parse_errors_carry_lines() {
        let t = "group X\nelements e a\nrow e e a\nrow a a q\n";
        assert_eq!(
            FiniteGroup::parse_table(t).unwrap_err(),
            GroupError::Parse {
                line: 4,
                message: "unknown element `q`".into()
            }
        );
    }
}

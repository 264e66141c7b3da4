//! Simple coverings of colored complexes with sheets permuted by a finite group.
//!
//! A covering is recorded as one group element per incidence of sheeted cells:
//! face sides over edges for two-dimensional bases, edge ends over vertices
//! for graphs. Degree-`d` coverings use the symmetric group acting on
//! `{1, .., d}`; principal `G`-coverings use `G` acting on itself. In both
//! cases two labelings are equivalent when they differ by a relabeling of the
//! sheets of each cell, and vertex preimages are the components of the
//! covering induced on the vertex link.

mod base;
mod frame;
mod sector;

use std::fmt;

use num::{BigInt, BigRational};
use thiserror::Error;

use crate::complex::{BraneComplex, CanonicalKey, ColoredComplex, ComplexError};
use crate::group::{symmetric_lex, FiniteGroup};

pub use base::{Covering, CoveringBase, CutRestriction, FiberAction, HurwitzTable, OmegaClass};
pub use sector::Sector;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CoveringError {
    #[error("search bound exceeded: {0}")]
    OutOfBounds(String),
    #[error("constraint at vertex {vertex} is a class over `{found}`, but the link is `{expected}`")]
    ConstraintMismatch {
        vertex: String,
        expected: String,
        found: String,
    },
    #[error("expected {expected} constraints, got {found}")]
    ConstraintCount { expected: usize, found: usize },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex complexes must have dimension at most one")]
    NotAGraph,
    #[error("unknown covering class `{0}`")]
    UnknownClass(String),
    #[error("cut does not belong to this base: {0}")]
    CutMismatch(String),
    #[error("group is not a full symmetric group")]
    NotSymmetricGroup,
    #[error("labeled count disagrees with class weights at {invariants}: {weights} vs {labeled}")]
    Burnside {
        invariants: String,
        weights: String,
        labeled: String,
    },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Search limits; the engine refuses instances beyond them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_degree: usize,
    pub max_group_order: usize,
    pub max_cells: usize,
    /// Largest number of gauge-fixed labelings enumerated for one base.
    pub max_states: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_degree: 4,
            max_group_order: 24,
            max_cells: 12,
            max_states: 2_000_000,
        }
    }
}

/// Identifies a covering class relative to the canonical form of its base.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassKey(pub String);

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Equivalence class of coverings of a vertex complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringClass {
    pub base_key: CanonicalKey,
    pub class_key: ClassKey,
    pub aut_order: u64,
    /// canonical representative: one label per arc of the canonical copy
    pub labels: Vec<usize>,
}

impl CoveringClass {
    /// Text block with the base key, the group and one line per edge giving
    /// the attaching maps at its tail and head.
    pub fn to_text(&self, g: &FiniteGroup) -> String {
        let mut s = format!(
            "class {}\nbase {}\ngroup {}\naut {}\n",
            if self.class_key.0.is_empty() { "-" } else { &self.class_key.0 },
            self.base_key,
            g.name(),
            self.aut_order
        );
        for (e, pair) in self.labels.chunks(2).enumerate() {
            s.push_str(&format!(
                "edge {} {} {}\n",
                e,
                g.element_name(pair[0]),
                g.element_name(pair[1])
            ));
        }
        s.push_str("end\n");
        s
    }

    /// Reads a block written by [`Self::to_text`] over the given sector.
    pub fn from_text(text: &str, sector: &Sector, g: &FiniteGroup) -> Result<CoveringClass, CoveringError> {
        let bad = |m: &str| CoveringError::UnknownClass(m.to_string());
        let mut labels = vec![g.identity(); sector.arc_count()];
        for line in text.lines() {
            let mut t = line.split_whitespace();
            match t.next() {
                Some("base") => {
                    if t.next() != Some(sector.key().as_str()) {
                        return Err(bad("base key differs"));
                    }
                }
                Some("group") => {
                    if t.next() != Some(g.name()) {
                        return Err(bad("group differs"));
                    }
                }
                Some("edge") => {
                    let e: usize = t.next().and_then(|x| x.parse().ok()).ok_or_else(|| bad("edge index"))?;
                    for end in 0..2 {
                        let name = t.next().ok_or_else(|| bad("missing label"))?;
                        let x = g.element_by_name(name).ok_or_else(|| bad(name))?;
                        *labels.get_mut(2 * e + end).ok_or_else(|| bad("edge index"))? = x;
                    }
                }
                _ => {}
            }
        }
        Ok(sector.class_of(g, &labels))
    }
}

/// Weighted count of covering classes with its per-class contributions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurwitzValue {
    pub value: BigRational,
    pub breakdown: Vec<(ClassKey, BigRational)>,
}

impl HurwitzValue {
    pub fn zero() -> Self {
        HurwitzValue {
            value: BigRational::from_integer(BigInt::from(0)),
            breakdown: Vec::new(),
        }
    }
}

/// Degree-`d` engine group, after the bound check.
pub fn degree_group(d: usize, bounds: &Bounds) -> Result<FiniteGroup, CoveringError> {
    if d == 0 || d > bounds.max_degree {
        return Err(CoveringError::OutOfBounds(format!("degree {d}")));
    }
    Ok(symmetric_lex(d))
}

/// Classes of degree-`d` coverings of a graph.
pub fn covering_classes(sigma: &ColoredComplex, d: usize) -> Result<Vec<CoveringClass>, CoveringError> {
    let b = Bounds::default();
    Sector::new(sigma)?.classes(&degree_group(d, &b)?, &b)
}

/// Classes of degree-`d` coverings of a brane complex with the given local
/// invariants (`None` leaves a vertex free).
pub fn enumerate_coverings(
    omega: &BraneComplex,
    d: usize,
    constraints: &[Option<CoveringClass>],
) -> Result<Vec<OmegaClass>, CoveringError> {
    let b = Bounds::default();
    let g = degree_group(d, &b)?;
    let base = CoveringBase::new(omega, &b)?;
    base.check_constraints(constraints)?;
    let table = base.table(&g, &b)?;
    Ok(table
        .classes
        .into_iter()
        .filter(|c| matches(&c.local, constraints))
        .collect())
}

/// True when every constrained vertex carries the required local class.
pub fn matches(local: &[ClassKey], constraints: &[Option<CoveringClass>]) -> bool {
    local
        .iter()
        .zip(constraints)
        .all(|(k, c)| c.as_ref().is_none_or(|c| &c.class_key == k))
}

/// Hurwitz number of degree-`d` coverings.
pub fn hurwitz_d(
    omega: &BraneComplex,
    d: usize,
    constraints: &[Option<CoveringClass>],
) -> Result<HurwitzValue, CoveringError> {
    let b = Bounds::default();
    let g = degree_group(d, &b)?;
    hurwitz_with(omega, &g, constraints, &b)
}

/// Hurwitz number for an arbitrary sheet group.
pub fn hurwitz_with(
    omega: &BraneComplex,
    g: &FiniteGroup,
    constraints: &[Option<CoveringClass>],
    bounds: &Bounds,
) -> Result<HurwitzValue, CoveringError> {
    let base = CoveringBase::new(omega, bounds)?;
    base.check_constraints(constraints)?;
    Ok(base.table(g, bounds)?.value(constraints))
}

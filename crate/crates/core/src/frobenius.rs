//! Colored Frobenius algebras over the rationals.
//!
//! The algebra is graded by sectors (isomorphism classes of connected vertex
//! complexes). Each sector `s` has a basis, a Gram block pairing it with its
//! starred sector, and trilinear blocks exist only on sector triples that
//! glue to a brane complex. Blocks are stored once per cyclic rotation class.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use num::{BigRational, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::complex::{compatible_complex, CanonicalKey, ColoredComplex};
use crate::format::{parse_complex, serialize_complex};
use crate::linalg::{invert, mul, transpose, Matrix};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("sector `{0}` has no starred partner in the truncation")]
    MissingStar(String),
    #[error("degenerate Gram block on sector `{0}`")]
    DegenerateGram(String),
    #[error("Gram blocks of `{0}` and its star are not transposes")]
    GramAsymmetry(String),
    #[error("trilinear block on sectors without a compatible complex: {0}")]
    IllegalBlock(String),
    #[error("trilinear data is not cyclically symmetric on {0}")]
    AsymmetricBlock(String),
    #[error("crossing identity fails on sectors {sectors:?}: {witness}")]
    CrossingFailure { sectors: [usize; 4], witness: String },
    #[error("unknown sector {0}")]
    UnknownSector(usize),
    #[error("sector mismatch: {0}")]
    SectorMismatch(String),
    #[error("channel sector missing from the truncation: {0}")]
    TruncationInsufficient(String),
    #[error("algebra text, line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Key of a sector together with the key of its star.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SectorLabel {
    pub key: CanonicalKey,
    pub star_key: CanonicalKey,
}

/// Input description of one sector.
#[derive(Clone, Debug)]
pub struct SectorSpec {
    pub complex: ColoredComplex,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSector {
    pub label: SectorLabel,
    /// canonical copy of the sector complex
    pub complex: ColoredComplex,
    pub star: usize,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub sectors: [usize; 3],
    /// row-major over the three bases
    pub data: Vec<BigRational>,
    /// canonical key of the compatible complex of the triple
    pub witness: CanonicalKey,
}

/// Finitely supported element: sector -> coordinates in its basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    pub parts: BTreeMap<usize, Vec<BigRational>>,
}

impl AlgebraElement {
    pub fn basis(sector: usize, index: usize, dim: usize) -> Self {
        let mut v = vec![BigRational::zero(); dim];
        v[index] = BigRational::from_integer(1.into());
        Self::single(sector, v)
    }

    pub fn single(sector: usize, coords: Vec<BigRational>) -> Self {
        AlgebraElement {
            parts: BTreeMap::from([(sector, coords)]),
        }
    }

    fn add_to(&mut self, sector: usize, coords: &[BigRational]) {
        let slot = self
            .parts
            .entry(sector)
            .or_insert_with(|| vec![BigRational::zero(); coords.len()]);
        for (a, b) in slot.iter_mut().zip(coords) {
            *a += b;
        }
    }

    /// Drops sectors whose coordinates all vanish.
    pub fn normalized(mut self) -> Self {
        self.parts.retain(|_, v| v.iter().any(|x| !x.is_zero()));
        self
    }

    pub fn is_zero(&self) -> bool {
        self.parts.values().all(|v| v.iter().all(Zero::is_zero))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusAlgebra {
    sectors: Vec<AlgebraSector>,
    gram: Vec<Matrix>,
    copairing: Vec<Matrix>,
    blocks: BTreeMap<[usize; 3], Block>,
}

/// Outcome of one axiom check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomResult {
    pub axiom: String,
    pub passed: bool,
    pub detail: String,
}

fn rotate(s: [usize; 3], r: usize) -> [usize; 3] {
    [s[r % 3], s[(r + 1) % 3], s[(r + 2) % 3]]
}

fn canonical_rotation(s: [usize; 3]) -> usize {
    (0..3).min_by_key(|&r| rotate(s, r)).unwrap()
}

/// Re-indexes row-major data of `s` as data of `rotate(s, r)`.
fn rotate_data(data: &[BigRational], dims: [usize; 3], r: usize) -> Vec<BigRational> {
    let nd = rotate(dims, r);
    let mut out = vec![BigRational::zero(); data.len()];
    for i in 0..dims[0] {
        for j in 0..dims[1] {
            for k in 0..dims[2] {
                let idx = [i, j, k];
                let n = rotate(idx, r);
                out[(n[0] * nd[1] + n[1]) * nd[2] + n[2]] = data[(i * dims[1] + j) * dims[2] + k].clone();
            }
        }
    }
    out
}

/// Builds and validates an algebra, including the crossing identity.
pub fn assemble_algebra(
    sectors: Vec<SectorSpec>,
    gram: Vec<Matrix>,
    trilinear: Vec<([usize; 3], Vec<BigRational>)>,
) -> Result<FrobeniusAlgebra, AlgebraError> {
    let a = FrobeniusAlgebra::assemble_unchecked(sectors, gram, trilinear)?;
    a.crossing_check()?;
    Ok(a)
}

impl FrobeniusAlgebra {
    /// Every check except the crossing identity.
    pub fn assemble_unchecked(
        sectors: Vec<SectorSpec>,
        gram: Vec<Matrix>,
        trilinear: Vec<([usize; 3], Vec<BigRational>)>,
    ) -> Result<FrobeniusAlgebra, AlgebraError> {
        let mut labels = Vec::new();
        let mut copies = Vec::new();
        for s in &sectors {
            let (copy, cf) = s.complex.canonical_copy();
            labels.push(SectorLabel {
                key: cf.key,
                star_key: s.complex.star_involution().canonical_key(),
            });
            copies.push(copy);
        }
        let index: HashMap<&CanonicalKey, usize> =
            labels.iter().enumerate().map(|(i, l)| (&l.key, i)).collect();
        if index.len() != labels.len() {
            return Err(AlgebraError::ShapeMismatch("repeated sector".into()));
        }
        let mut out = Vec::new();
        for ((spec, label), complex) in sectors.into_iter().zip(labels.iter()).zip(copies) {
            let star = *index
                .get(&label.star_key)
                .ok_or_else(|| AlgebraError::MissingStar(label.key.to_string()))?;
            out.push(AlgebraSector {
                label: label.clone(),
                complex,
                star,
                basis: spec.basis,
            });
        }
        if gram.len() != out.len() {
            return Err(AlgebraError::ShapeMismatch("one Gram block per sector".into()));
        }
        for (s, g) in gram.iter().enumerate() {
            let (r, c) = (out[s].basis.len(), out[out[s].star].basis.len());
            if g.len() != r || g.iter().any(|row| row.len() != c) {
                return Err(AlgebraError::ShapeMismatch(format!("Gram block of sector {s}")));
            }
        }
        let mut copairing = Vec::new();
        for (s, g) in gram.iter().enumerate() {
            if *g != transpose(&gram[out[s].star]) {
                return Err(AlgebraError::GramAsymmetry(out[s].label.key.to_string()));
            }
            let inv = invert(g).ok_or_else(|| AlgebraError::DegenerateGram(out[s].label.key.to_string()))?;
            copairing.push(transpose(&inv));
        }
        let mut a = FrobeniusAlgebra {
            sectors: out,
            gram,
            copairing,
            blocks: BTreeMap::new(),
        };
        for (s, data) in trilinear {
            a.insert_block(s, data)?;
        }
        Ok(a)
    }

    fn dims(&self, s: [usize; 3]) -> [usize; 3] {
        s.map(|x| self.sectors[x].basis.len())
    }

    fn insert_block(&mut self, s: [usize; 3], data: Vec<BigRational>) -> Result<(), AlgebraError> {
        if s.iter().any(|&x| x >= self.sectors.len()) {
            return Err(AlgebraError::UnknownSector(*s.iter().max().unwrap()));
        }
        let dims = self.dims(s);
        if data.len() != dims.iter().product::<usize>() {
            return Err(AlgebraError::ShapeMismatch(format!("trilinear block {s:?}")));
        }
        let r = canonical_rotation(s);
        let key = rotate(s, r);
        let data = rotate_data(&data, dims, r);
        let kd = rotate(dims, r);
        // a triple fixed by a rotation must carry rotation-invariant data
        for t in 1..3 {
            if rotate(key, t) == key && rotate_data(&data, kd, t) != data {
                return Err(AlgebraError::AsymmetricBlock(format!("{key:?}")));
            }
        }
        if let Some(b) = self.blocks.get(&key) {
            if b.data != data {
                return Err(AlgebraError::AsymmetricBlock(format!("{key:?}")));
            }
            return Ok(());
        }
        let triple: Vec<ColoredComplex> = key.iter().map(|&x| self.sectors[x].complex.clone()).collect();
        let witness = compatible_complex(&triple)
            .ok_or_else(|| AlgebraError::IllegalBlock(format!("{key:?}")))?
            .canonical_key();
        self.blocks.insert(
            key,
            Block {
                sectors: key,
                data,
                witness,
            },
        );
        Ok(())
    }

    /// Copy with one trilinear entry replaced, skipping validation. Used to
    /// confirm that the checks can fail.
    pub fn with_trilinear_entry(&self, s: [usize; 3], idx: [usize; 3], value: BigRational) -> FrobeniusAlgebra {
        let mut out = self.clone();
        let r = canonical_rotation(s);
        let key = rotate(s, r);
        let kd = rotate(self.dims(s), r);
        let i = rotate(idx, r);
        let b = out.blocks.get_mut(&key).expect("existing block");
        b.data[(i[0] * kd[1] + i[1]) * kd[2] + i[2]] = value;
        out
    }

    pub fn sectors(&self) -> &[AlgebraSector] {
        &self.sectors
    }

    pub fn sector_index(&self, key: &CanonicalKey) -> Option<usize> {
        self.sectors.iter().position(|s| &s.label.key == key)
    }

    pub fn gram(&self, s: usize) -> &Matrix {
        &self.gram[s]
    }

    /// Copairing of sector `s`: rows index the basis of `s`, columns the basis
    /// of its star; it is the transpose of the inverse Gram block.
    pub fn copairing(&self, s: usize) -> Result<&Matrix, AlgebraError> {
        self.copairing.get(s).ok_or(AlgebraError::UnknownSector(s))
    }

    pub fn blocks(&self) -> impl Iterator<Item = &Block> {
        self.blocks.values()
    }

    /// Inserting the copairing between two pairings reproduces the pairing.
    pub fn copairing_identity(&self, s: usize) -> bool {
        let g = &self.gram[s];
        mul(&mul(g, &transpose(&self.copairing[s])), g) == *g
    }

    /// Dense data of the block on `s` in the order of `s`, if present.
    pub fn block_dense(&self, s: [usize; 3]) -> Option<Vec<BigRational>> {
        let r = canonical_rotation(s);
        let b = self.blocks.get(&rotate(s, r))?;
        Some(rotate_data(&b.data, rotate(self.dims(s), r), (3 - r) % 3))
    }

    pub fn trilinear(&self, s: [usize; 3], idx: [usize; 3]) -> BigRational {
        let d = self.dims(s);
        self.block_dense(s)
            .map(|b| b[(idx[0] * d[1] + idx[1]) * d[2] + idx[2]].clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// `(x, y)` on one sector pair.
    pub fn pairing(&self, x: &AlgebraElement, y: &AlgebraElement) -> BigRational {
        let mut acc = BigRational::zero();
        for (&s, v) in &x.parts {
            if let Some(w) = y.parts.get(&self.sectors[s].star) {
                let g = &self.gram[s];
                for (i, a) in v.iter().enumerate() {
                    for (j, b) in w.iter().enumerate() {
                        if !a.is_zero() && !b.is_zero() {
                            acc += a * &g[i][j] * b;
                        }
                    }
                }
            }
        }
        acc
    }

    /// Third-slot sectors `r` with a block on `(s1, s2, r)`.
    fn channels(&self) -> HashMap<(usize, usize), BTreeSet<usize>> {
        let mut m: HashMap<(usize, usize), BTreeSet<usize>> = HashMap::new();
        for &k in self.blocks.keys() {
            for r in 0..3 {
                let t = rotate(k, r);
                m.entry((t[0], t[1])).or_default().insert(t[2]);
            }
        }
        m
    }

    /// `T(v1, v2, .)` as a vector over the basis of `s[2]`.
    fn partial(&self, s: [usize; 3], v1: &[BigRational], v2: &[BigRational]) -> Vec<BigRational> {
        let d = self.dims(s);
        let mut out = vec![BigRational::zero(); d[2]];
        let Some(b) = self.block_dense(s) else {
            return out;
        };
        for i in 0..d[0] {
            if v1[i].is_zero() {
                continue;
            }
            for j in 0..d[1] {
                if v2[j].is_zero() {
                    continue;
                }
                let w = &v1[i] * &v2[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let t = &b[(i * d[1] + j) * d[2] + k];
                    if !t.is_zero() {
                        *o += &w * t;
                    }
                }
            }
        }
        out
    }

    /// The product: `(xy, z) = (x, y, z)` for every `z`.
    pub fn product(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.product_with(&self.channels(), x, y)
    }

    fn product_with(
        &self,
        ch: &HashMap<(usize, usize), BTreeSet<usize>>,
        x: &AlgebraElement,
        y: &AlgebraElement,
    ) -> AlgebraElement {
        let mut out = AlgebraElement::default();
        for (&s1, v1) in &x.parts {
            for (&s2, v2) in &y.parts {
                let Some(rs) = ch.get(&(s1, s2)) else { continue };
                for &r in rs {
                    let t = self.partial([s1, s2, r], v1, v2);
                    let k = &self.copairing[r];
                    let rs_ = self.sectors[r].star;
                    let dim = self.sectors[rs_].basis.len();
                    let mut c = vec![BigRational::zero(); dim];
                    for (j, tj) in t.iter().enumerate() {
                        if tj.is_zero() {
                            continue;
                        }
                        for (i, ci) in c.iter_mut().enumerate() {
                            *ci += tj * &k[j][i];
                        }
                    }
                    out.add_to(rs_, &c);
                }
            }
        }
        out.normalized()
    }

    fn tri_eval(&self, s: [usize; 3], v: [&[BigRational]; 3]) -> BigRational {
        self.partial(s, v[0], v[1])
            .iter()
            .zip(v[2])
            .map(|(a, b)| a * b)
            .sum()
    }

    /// The chain formula: `n = 2` is the pairing, `n = 3` the trilinear form,
    /// and longer chains contract consecutive products through copairings.
    /// Only sectors in the truncation contribute.
    pub fn evaluate_phi(&self, sectors: &[usize], xs: &[Vec<BigRational>]) -> Result<BigRational, AlgebraError> {
        if sectors.len() != xs.len() || sectors.len() < 2 {
            return Err(AlgebraError::SectorMismatch(format!(
                "{} sectors for {} arguments",
                sectors.len(),
                xs.len()
            )));
        }
        for (&s, x) in sectors.iter().zip(xs) {
            let sec = self.sectors.get(s).ok_or(AlgebraError::UnknownSector(s))?;
            if sec.basis.len() != x.len() {
                return Err(AlgebraError::SectorMismatch(format!("argument in sector {s}")));
            }
        }
        let n = sectors.len();
        if n == 2 {
            return Ok(self.pairing(
                &AlgebraElement::single(sectors[0], xs[0].clone()),
                &AlgebraElement::single(sectors[1], xs[1].clone()),
            ));
        }
        let mut y = AlgebraElement::single(sectors[0], xs[0].clone());
        for i in 1..n - 2 {
            y = self.product(&y, &AlgebraElement::single(sectors[i], xs[i].clone()));
        }
        Ok(y.parts
            .iter()
            .map(|(&s, v)| self.tri_eval([s, sectors[n - 2], sectors[n - 1]], [v, &xs[n - 2], &xs[n - 1]]))
            .sum())
    }

    /// Sector 4-tuples with a compatible complex on which either side of the
    /// crossing identity has a channel. Tuples without a compatible complex
    /// are exempt: gluing their channels would repeat a color.
    pub fn crossing_tuples(&self) -> BTreeSet<[usize; 4]> {
        let ch = self.channels();
        let mut by_first: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for &(a, b) in ch.keys() {
            by_first.entry(a).or_default().push((a, b));
        }
        let mut cands = BTreeSet::new();
        for (&(a, b), rs) in &ch {
            for &r in rs {
                let rs_ = self.sectors[r].star;
                for &(_, c) in by_first.get(&rs_).into_iter().flatten() {
                    for &d in &ch[&(rs_, c)] {
                        // (a b) c d on the left, and the same channel read as
                        // the right-hand side of the tuple (b, c, d, a)
                        cands.insert([a, b, c, d]);
                        cands.insert([b, c, d, a]);
                    }
                }
            }
        }
        let cands: Vec<[usize; 4]> = cands.into_iter().collect();
        cands
            .into_par_iter()
            .filter(|t| compatible_complex(&t.map(|i| self.sectors[i].complex.clone())).is_some())
            .collect()
    }

    /// Dense `sum_r T(s1,s2,r) K_r T(r*,s3,s4)` over all basis quadruples.
    fn four_point(&self, s: [usize; 4], ch: &HashMap<(usize, usize), BTreeSet<usize>>) -> Vec<BigRational> {
        let d: Vec<usize> = s.iter().map(|&x| self.sectors[x].basis.len()).collect();
        let mut out = vec![BigRational::zero(); d.iter().product()];
        let Some(rs) = ch.get(&(s[0], s[1])) else {
            return out;
        };
        for &r in rs {
            let rst = self.sectors[r].star;
            let (Some(a), Some(b)) = (self.block_dense([s[0], s[1], r]), self.block_dense([rst, s[2], s[3]])) else {
                continue;
            };
            let dr = self.sectors[r].basis.len();
            let drs = self.sectors[rst].basis.len();
            let k = &self.copairing[r];
            for i1 in 0..d[0] {
                for i2 in 0..d[1] {
                    // contract the third slot with the copairing
                    let mut ak = vec![BigRational::zero(); drs];
                    for j in 0..dr {
                        let t = &a[(i1 * d[1] + i2) * dr + j];
                        if t.is_zero() {
                            continue;
                        }
                        for (m, x) in ak.iter_mut().enumerate() {
                            *x += t * &k[j][m];
                        }
                    }
                    for (m, x) in ak.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for i3 in 0..d[2] {
                            for i4 in 0..d[3] {
                                let t = &b[(m * d[2] + i3) * d[3] + i4];
                                if !t.is_zero() {
                                    out[((i1 * d[1] + i2) * d[2] + i3) * d[3] + i4] += x * t;
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Checks `(x1 x2, x3, x4) = (x4 x1, x2, x3)` on every basis quadruple of
    /// every tuple from [`Self::crossing_tuples`]; returns the number of tuples.
    pub fn crossing_check(&self) -> Result<usize, AlgebraError> {
        let ch = self.channels();
        let tuples = self.crossing_tuples();
        for s in &tuples {
            let left = self.four_point(*s, &ch);
            let right = self.four_point([s[3], s[0], s[1], s[2]], &ch);
            let d: Vec<usize> = s.iter().map(|&x| self.sectors[x].basis.len()).collect();
            for i1 in 0..d[0] {
                for i2 in 0..d[1] {
                    for i3 in 0..d[2] {
                        for i4 in 0..d[3] {
                            let l = &left[((i1 * d[1] + i2) * d[2] + i3) * d[3] + i4];
                            let r = &right[((i4 * d[0] + i1) * d[1] + i2) * d[2] + i3];
                            if l != r {
                                return Err(AlgebraError::CrossingFailure {
                                    sectors: *s,
                                    witness: format!("basis ({i1},{i2},{i3},{i4}): {l} vs {r}"),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(tuples.len())
    }

    /// `((b1 b2) b3, b4) = (b1 (b2 b3), b4)` for every tuple of
    /// [`Self::crossing_tuples`] and all basis vectors; returns the number of
    /// tuples or the first failing one.
    pub fn associativity_check(&self) -> Result<usize, String> {
        let ch = self.channels();
        let mut by_triple: BTreeMap<[usize; 3], BTreeSet<usize>> = BTreeMap::new();
        for t in self.crossing_tuples() {
            by_triple.entry([t[0], t[1], t[2]]).or_default().insert(t[3]);
        }
        let zero = BigRational::zero();
        let tuples = by_triple.values().map(BTreeSet::len).sum();
        for (s, fourth) in &by_triple {
            let d = s.map(|x| self.sectors[x].basis.len());
            for i in 0..d[0] {
                for j in 0..d[1] {
                    for k in 0..d[2] {
                        let x = AlgebraElement::basis(s[0], i, d[0]);
                        let y = AlgebraElement::basis(s[1], j, d[1]);
                        let z = AlgebraElement::basis(s[2], k, d[2]);
                        let l = self.product_with(&ch, &self.product_with(&ch, &x, &y), &z);
                        let r = self.product_with(&ch, &x, &self.product_with(&ch, &y, &z));
                        for &w in fourth {
                            let t = self.sectors[w].star;
                            let (lv, rv) = (l.parts.get(&t), r.parts.get(&t));
                            let dim = self.sectors[t].basis.len();
                            for m in 0..dim {
                                let a = lv.map_or(&zero, |v| &v[m]);
                                let b = rv.map_or(&zero, |v| &v[m]);
                                if a != b {
                                    return Err(format!("sectors {:?} basis ({i},{j},{k},{m}): {a} vs {b}", [s[0], s[1], s[2], w]));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(tuples)
    }

    /// Associativity with no restriction on the sectors involved. Colored
    /// algebras can fail it on triples whose products meet in a sector that
    /// no single complex realizes; returns the first such triple.
    pub fn unrestricted_associativity(&self) -> Option<([usize; 3], [usize; 3])> {
        let ch = self.channels();
        let n = self.sectors.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let d = [a, b, c].map(|x| self.sectors[x].basis.len());
                    for i in 0..d[0] {
                        for j in 0..d[1] {
                            for k in 0..d[2] {
                                let x = AlgebraElement::basis(a, i, d[0]);
                                let y = AlgebraElement::basis(b, j, d[1]);
                                let z = AlgebraElement::basis(c, k, d[2]);
                                let l = self.product_with(&ch, &self.product_with(&ch, &x, &y), &z);
                                let r = self.product_with(&ch, &x, &self.product_with(&ch, &y, &z));
                                if l != r {
                                    return Some(([a, b, c], [i, j, k]));
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Pass or fail for each structural axiom, with witnesses.
    pub fn verify_axioms(&self) -> Vec<AxiomResult> {
        let mut out = Vec::new();
        let degenerate: Vec<String> = (0..self.sectors.len())
            .filter(|&s| invert(&self.gram[s]).is_none())
            .map(|s| self.sectors[s].label.key.to_string())
            .collect();
        out.push(AxiomResult {
            axiom: "nondegenerate-pairing".into(),
            passed: degenerate.is_empty(),
            detail: degenerate.join(" "),
        });
        let asym: Vec<usize> = (0..self.sectors.len())
            .filter(|&s| self.gram[s] != transpose(&self.gram[self.sectors[s].star]))
            .collect();
        out.push(AxiomResult {
            axiom: "pairing-support".into(),
            passed: asym.is_empty(),
            detail: format!("{asym:?}"),
        });
        let illegal: Vec<[usize; 3]> = self
            .blocks
            .keys()
            .filter(|k| {
                let t: Vec<ColoredComplex> = k.iter().map(|&x| self.sectors[x].complex.clone()).collect();
                compatible_complex(&t).is_none()
            })
            .copied()
            .collect();
        out.push(AxiomResult {
            axiom: "trilinear-support".into(),
            passed: illegal.is_empty(),
            detail: format!("{illegal:?}"),
        });
        match self.crossing_check() {
            Ok(n) => out.push(AxiomResult {
                axiom: "crossing".into(),
                passed: true,
                detail: format!("{n} sector tuples"),
            }),
            Err(e) => out.push(AxiomResult {
                axiom: "crossing".into(),
                passed: false,
                detail: e.to_string(),
            }),
        }
        out
    }

    /// New algebra in the basis `b'_i = sum_j m[s][i][j] b_j` of each sector.
    pub fn change_basis(&self, m: &[Matrix]) -> Result<FrobeniusAlgebra, AlgebraError> {
        if m.len() != self.sectors.len() {
            return Err(AlgebraError::ShapeMismatch("one matrix per sector".into()));
        }
        let mut gram = Vec::new();
        let mut copairing = Vec::new();
        for s in 0..self.sectors.len() {
            let g = mul(&mul(&m[s], &self.gram[s]), &transpose(&m[self.sectors[s].star]));
            let inv = invert(&g).ok_or_else(|| AlgebraError::DegenerateGram(self.sectors[s].label.key.to_string()))?;
            copairing.push(transpose(&inv));
            gram.push(g);
        }
        let mut blocks = BTreeMap::new();
        for (k, b) in &self.blocks {
            let d = self.dims(*k);
            let mut cur = b.data.clone();
            // transform one slot at a time
            for slot in 0..3 {
                let mat = &m[k[slot]];
                let mut next = vec![BigRational::zero(); cur.len()];
                for i in 0..d[0] {
                    for j in 0..d[1] {
                        for l in 0..d[2] {
                            let idx = [i, j, l];
                            let mut acc = BigRational::zero();
                            for t in 0..d[slot] {
                                let mut src = idx;
                                src[slot] = t;
                                let c = &mat[idx[slot]][t];
                                if !c.is_zero() {
                                    acc += c * &cur[(src[0] * d[1] + src[1]) * d[2] + src[2]];
                                }
                            }
                            next[(i * d[1] + j) * d[2] + l] = acc;
                        }
                    }
                }
                cur = next;
            }
            blocks.insert(
                *k,
                Block {
                    sectors: *k,
                    data: cur,
                    witness: b.witness.clone(),
                },
            );
        }
        Ok(FrobeniusAlgebra {
            sectors: self.sectors.clone(),
            gram,
            copairing,
            blocks,
        })
    }

    /// Text form: sector table with inline complexes, bases, Gram rows and
    /// nonzero trilinear entries as exact `p/q`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, sec) in self.sectors.iter().enumerate() {
            let _ = writeln!(s, "sector {i} star {}", sec.star);
            s.push_str(&serialize_complex(&sec.complex));
            let _ = writeln!(s, "end");
            let _ = writeln!(s, "basis {i} {}", sec.basis.iter().map(|b| format!("{{{b}}}")).collect::<Vec<_>>().join(" "));
        }
        for (i, g) in self.gram.iter().enumerate() {
            for row in g {
                let vals: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "gram {i} {}", vals.join(" "));
            }
        }
        for b in self.blocks.values() {
            let d = self.dims(b.sectors);
            for i in 0..d[0] {
                for j in 0..d[1] {
                    for k in 0..d[2] {
                        let v = &b.data[(i * d[1] + j) * d[2] + k];
                        if !v.is_zero() {
                            let [x, y, z] = b.sectors;
                            let _ = writeln!(s, "tri {x} {y} {z} {i} {j} {k} {v}");
                        }
                    }
                }
            }
        }
        s
    }

    /// Reads [`Self::to_text`] output and re-validates it.
    pub fn from_text(text: &str) -> Result<FrobeniusAlgebra, AlgebraError> {
        let err = |line: usize, m: &str| AlgebraError::Parse {
            line,
            message: m.to_string(),
        };
        let mut specs: Vec<SectorSpec> = Vec::new();
        let mut gram: Vec<Matrix> = Vec::new();
        let mut tri: BTreeMap<[usize; 3], BTreeMap<[usize; 3], BigRational>> = BTreeMap::new();
        let lines: Vec<&str> = text.lines().collect();
        let mut i = 0;
        let num = |t: &str, line: usize| BigRational::from_str(t).map_err(|_| err(line, &format!("bad rational `{t}`")));
        let idx = |t: &str, line: usize| t.parse::<usize>().map_err(|_| err(line, &format!("bad index `{t}`")));
        while i < lines.len() {
            let ln = i + 1;
            let toks: Vec<&str> = lines[i].split_whitespace().collect();
            i += 1;
            match toks.first().copied() {
                Some("sector") => {
                    let mut doc = String::new();
                    while i < lines.len() && lines[i].trim() != "end" {
                        doc.push_str(lines[i]);
                        doc.push('\n');
                        i += 1;
                    }
                    i += 1;
                    let c = parse_complex(&doc).map_err(|e| err(ln, &e.to_string()))?;
                    specs.push(SectorSpec {
                        complex: c.complex().clone(),
                        basis: Vec::new(),
                    });
                    gram.push(Vec::new());
                }
                Some("basis") => {
                    let s = idx(toks.get(1).ok_or_else(|| err(ln, "missing sector"))?, ln)?;
                    let rest = lines[ln - 1].splitn(3, ' ').nth(2).unwrap_or("");
                    let labels: Vec<String> = rest
                        .split('}')
                        .filter_map(|x| x.trim().strip_prefix('{').map(String::from))
                        .collect();
                    specs.get_mut(s).ok_or_else(|| err(ln, "unknown sector"))?.basis = labels;
                }
                Some("gram") => {
                    let s = idx(toks.get(1).ok_or_else(|| err(ln, "missing sector"))?, ln)?;
                    let row = toks[2..].iter().map(|t| num(t, ln)).collect::<Result<Vec<_>, _>>()?;
                    gram.get_mut(s).ok_or_else(|| err(ln, "unknown sector"))?.push(row);
                }
                Some("tri") => {
                    if toks.len() != 8 {
                        return Err(err(ln, "`tri` expects three sectors, three indices and a value"));
                    }
                    let v: Vec<usize> = toks[1..7].iter().map(|t| idx(t, ln)).collect::<Result<_, _>>()?;
                    tri.entry([v[0], v[1], v[2]])
                        .or_default()
                        .insert([v[3], v[4], v[5]], num(toks[7], ln)?);
                }
                Some(other) => return Err(err(ln, &format!("unknown keyword `{other}`"))),
                None => {}
            }
        }
        // sectors are re-canonized on assembly, so indices stay aligned
        let mut blocks = Vec::new();
        for (k, entries) in tri {
            let d: Vec<usize> = k
                .iter()
                .map(|&s| specs.get(s).map(|x| x.basis.len()).ok_or(AlgebraError::UnknownSector(s)))
                .collect::<Result<_, _>>()?;
            let mut data = vec![BigRational::zero(); d.iter().product()];
            for (i, v) in entries {
                if i[0] >= d[0] || i[1] >= d[1] || i[2] >= d[2] {
                    return Err(AlgebraError::ShapeMismatch(format!("entry {i:?} of block {k:?}")));
                }
                data[(i[0] * d[1] + i[1]) * d[2] + i[2]] = v;
            }
            blocks.push((k, data));
        }
        assemble_algebra(specs, gram, blocks)
    }
}

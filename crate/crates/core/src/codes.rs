//! The maps `phi`, `phi_O`, `phi_E` from `F_{p^2}` vectors to `2 x 2r` matrices over `F_p`,
//! the Hamming, Bachoc and rank weights, and rank-metric codes with their Singleton verdict.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{require_construction_prime, require_prime, Fp2};
use crate::matfp::MatrixFp;

/// A vector over `F_{p^2}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtVector {
    p: u32,
    coords: Vec<Fp2>,
}

impl ExtVector {
    pub fn new(p: u32, coords: Vec<Fp2>) -> Result<Self> {
        if let Some(bad) = coords.iter().find(|x| x.modulus() != p) {
            return Err(Error::ModulusMismatch(p, bad.modulus()));
        }
        Ok(ExtVector { p, coords })
    }

    /// From `(a, b)` pairs meaning `a + b w`.
    pub fn from_pairs(p: u32, pairs: &[(u64, u64)]) -> Self {
        ExtVector {
            p,
            coords: pairs.iter().map(|&(a, b)| Fp2::new(a, b, p)).collect(),
        }
    }

    pub fn zero(p: u32, len: usize) -> Self {
        ExtVector {
            p,
            coords: vec![Fp2::zero(p); len],
        }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[Fp2] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// All `p^{2 len}` vectors, lexicographic in `(a_1, b_1, ..., a_len, b_len)`.
    pub fn all(p: u32, len: usize) -> impl Iterator<Item = ExtVector> {
        let total = (p as u64).pow(2 * len as u32);
        (0..total).map(move |idx| {
            let digits = base_p_digits(idx, p, 2 * len);
            let coords = digits
                .chunks(2)
                .map(|ab| Fp2::new(ab[0] as u64, ab[1] as u64, p))
                .collect();
            ExtVector { p, coords }
        })
    }

    /// Inserts a zero before (variant O) or after (variant E) every coordinate.
    pub fn interleave_zeros(&self, variant: Variant) -> ExtVector {
        let z = Fp2::zero(self.p);
        let coords = self
            .coords
            .iter()
            .flat_map(|&x| match variant {
                Variant::O => [z, x],
                Variant::E => [x, z],
            })
            .collect();
        ExtVector { p: self.p, coords }
    }
}

/// Most significant digit first.
fn base_p_digits(mut idx: u64, p: u32, len: usize) -> Vec<u32> {
    let mut digits = vec![0u32; len];
    for d in digits.iter_mut().rev() {
        *d = (idx % p as u64) as u32;
        idx /= p as u64;
    }
    digits
}

impl fmt::Display for ExtVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for ExtVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over F_{}^2", self.p)
    }
}

impl Serialize for ExtVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

/// Which half of the coordinates `phi` keeps nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Odd positions zero: `phi_O`.
    O,
    /// Even positions zero: `phi_E`.
    E,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::O => "O",
            Variant::E => "E",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "O" | "o" => Ok(Variant::O),
            "E" | "e" => Ok(Variant::E),
            other => Err(Error::Malformed(format!("unknown variant `{other}`"))),
        }
    }
}

pub fn hamming_weight(v: &ExtVector) -> usize {
    v.coords.iter().filter(|x| !x.is_zero()).count()
}

/// 0 for the zero matrix, 1 on `GL(2, p)`, `p` otherwise.
pub fn bachoc_weight(a: &MatrixFp) -> Result<u32> {
    if a.shape() != (2, 2) {
        return Err(Error::ShapeMismatch {
            expected: (2, 2),
            got: a.shape(),
        });
    }
    Ok(match a.rank() {
        0 => 0,
        2 => 1,
        _ => a.modulus(),
    })
}

/// Block for the coordinate pair `(a + bw, c + dw)`:
/// `[[a+d, b+c], [b+c+d, a+b+d]]`, entries as residues.
#[inline]
fn phi_block(p: u32, x: Fp2, y: Fp2) -> [u16; 4] {
    let (a, b) = (x.a().value(), x.b().value());
    let (c, d) = (y.a().value(), y.b().value());
    let r = |v: u32| (v % p) as u16;
    [r(a + d), r(b + c), r(b + c + d), r(a + b + d)]
}

fn blocks_to_matrix(p: u32, blocks: &[[u16; 4]]) -> MatrixFp {
    let cols = 2 * blocks.len();
    let mut data = vec![0u16; 2 * cols];
    for (i, blk) in blocks.iter().enumerate() {
        data[2 * i] = blk[0];
        data[2 * i + 1] = blk[1];
        data[cols + 2 * i] = blk[2];
        data[cols + 2 * i + 1] = blk[3];
    }
    MatrixFp::from_raw(2, cols, p, data)
}

/// `(F_{p^2})^{2r} -> M_{2 x 2r}(F_p)`, one `2 x 2` block per consecutive coordinate pair.
pub fn phi(v: &ExtVector) -> Result<MatrixFp> {
    if !v.len().is_multiple_of(2) {
        return Err(Error::OddLength(v.len()));
    }
    let blocks: Vec<_> = v
        .coords
        .chunks(2)
        .map(|xy| phi_block(v.p, xy[0], xy[1]))
        .collect();
    Ok(blocks_to_matrix(v.p, &blocks))
}

/// Blocks `[[d, c], [c+d, d]]` for coordinates `c + dw`.
pub fn phi_o(v: &ExtVector) -> MatrixFp {
    let z = Fp2::zero(v.p);
    let blocks: Vec<_> = v.coords.iter().map(|&y| phi_block(v.p, z, y)).collect();
    blocks_to_matrix(v.p, &blocks)
}

/// Blocks `[[a, b], [b, a+b]]` for coordinates `a + bw`.
pub fn phi_e(v: &ExtVector) -> MatrixFp {
    let z = Fp2::zero(v.p);
    let blocks: Vec<_> = v.coords.iter().map(|&x| phi_block(v.p, x, z)).collect();
    blocks_to_matrix(v.p, &blocks)
}

pub fn phi_variant(v: &ExtVector, variant: Variant) -> MatrixFp {
    match variant {
        Variant::O => phi_o(v),
        Variant::E => phi_e(v),
    }
}

/// Largest dimension a `[k x l, rho, delta]` code may have: `min{k(l-delta+1), l(k-delta+1)}`.
pub fn singleton_max_dim(k: usize, l: usize, delta: usize) -> Result<usize> {
    let cap = k.min(l);
    if delta < 1 || delta > cap {
        return Err(Error::DistanceOutOfRange(delta, cap));
    }
    Ok((k * (l - delta + 1)).min(l * (k - delta + 1)))
}

/// Rank of `A - B` for words stored as flat row-major slices.
struct RankKernel {
    p: u32,
    rows: usize,
    cols: usize,
    mul: Option<Vec<u16>>,
}

impl RankKernel {
    fn new(p: u32, rows: usize, cols: usize) -> Self {
        let mul = (p <= 256).then(|| {
            (0..p * p)
                .map(|xy| ((xy / p) * (xy % p) % p) as u16)
                .collect()
        });
        RankKernel { p, rows, cols, mul }
    }

    #[inline]
    fn mul(&self, x: u32, y: u32) -> u32 {
        match &self.mul {
            Some(t) => t[(x * self.p + y) as usize] as u32,
            None => x * y % self.p,
        }
    }

    #[inline]
    fn sub(&self, x: u16, y: u16) -> u32 {
        let d = x as u32 + self.p - y as u32;
        if d >= self.p {
            d - self.p
        } else {
            d
        }
    }

    fn rank_diff(&self, a: &[u16], b: &[u16]) -> usize {
        match self.rows {
            0 => 0,
            1 => usize::from(a.iter().zip(b).any(|(x, y)| x != y)),
            2 => self.rank_diff_two_rows(a, b),
            _ => {
                let data = a
                    .iter()
                    .zip(b)
                    .map(|(&x, &y)| self.sub(x, y) as u16)
                    .collect();
                MatrixFp::from_raw(self.rows, self.cols, self.p, data).rank()
            }
        }
    }

    /// Rank is at most 1 iff every column of the difference is a multiple of the
    /// first nonzero column.
    #[inline]
    fn rank_diff_two_rows(&self, a: &[u16], b: &[u16]) -> usize {
        let l = self.cols;
        let mut first: Option<(u32, u32)> = None;
        for j in 0..l {
            let x = self.sub(a[j], b[j]);
            let y = self.sub(a[l + j], b[l + j]);
            if x == 0 && y == 0 {
                continue;
            }
            match first {
                None => first = Some((x, y)),
                Some((x0, y0)) => {
                    if self.mul(x0, y) != self.mul(y0, x) {
                        return 2;
                    }
                }
            }
        }
        usize::from(first.is_some())
    }
}

/// Two-row words with each column packed into one byte `top * p + bottom`, plus a
/// table sending a pair of packed columns to the projective class of their
/// difference (`ZERO_COLUMN` if the difference vanishes). A difference has rank
/// at most 1 iff all its nonzero columns share one class.
struct PackedTwoRow {
    cols: usize,
    words: Vec<u8>,
    classes: Vec<u8>,
    width: usize,
}

const ZERO_COLUMN: u8 = u8::MAX;

impl PackedTwoRow {
    /// Only for `p <= 16`, so a packed column fits in a byte.
    fn new(code: &RankMetricCode) -> Option<Self> {
        let p = code.p;
        if code.k != 2 || p > 16 {
            return None;
        }
        let l = code.l;
        let mut words = Vec::with_capacity(code.len * l);
        for i in 0..code.len {
            let w = code.word_slice(i);
            words.extend((0..l).map(|j| (w[j] as u32 * p + w[l + j] as u32) as u8));
        }
        let width = (p * p) as usize;
        let inv: Vec<u32> = (0..p)
            .map(|x| (1..p).find(|y| x * y % p == 1).unwrap_or(0))
            .collect();
        let class = |x: u32, y: u32| -> u8 {
            match (x, y) {
                (0, 0) => ZERO_COLUMN,
                (0, _) => p as u8,
                (x, y) => (y * inv[x as usize] % p) as u8,
            }
        };
        let mut classes = vec![0u8; width * width];
        for a in 0..width as u32 {
            for b in 0..width as u32 {
                let x = (a / p + p - b / p) % p;
                let y = (a % p + p - b % p) % p;
                classes[a as usize * width + b as usize] = class(x, y);
            }
        }
        Some(PackedTwoRow {
            cols: l,
            words,
            classes,
            width,
        })
    }

    fn min_pairwise(&self, len: usize) -> usize {
        let l = self.cols;
        (0..len - 1)
            .into_par_iter()
            .map(|i| {
                // table rows for word i's columns, indexed by the other word's column
                let rows: Vec<&[u8]> = self.words[i * l..(i + 1) * l]
                    .iter()
                    .map(|&x| &self.classes[x as usize * self.width..(x as usize + 1) * self.width])
                    .collect();
                let mut min = usize::MAX;
                for b in self.words[(i + 1) * l..].chunks_exact(l) {
                    let mut first = ZERO_COLUMN;
                    let mut rank = 0;
                    for (row, &y) in rows.iter().zip(b) {
                        let c = row[y as usize];
                        if c == ZERO_COLUMN {
                            continue;
                        }
                        if first == ZERO_COLUMN {
                            first = c;
                            rank = 1;
                        } else if c != first {
                            rank = 2;
                            break;
                        }
                    }
                    min = min.min(rank);
                }
                min
            })
            .min()
            .unwrap_or(usize::MAX)
    }
}

/// A finite set of equal-shape matrices over `F_p`, stored contiguously.
pub struct RankMetricCode {
    p: u32,
    k: usize,
    l: usize,
    linear: bool,
    data: Vec<u16>,
    len: usize,
    delta: OnceLock<usize>,
}

impl fmt::Debug for RankMetricCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RankMetricCode")
            .field("p", &self.p)
            .field("shape", &(self.k, self.l))
            .field("len", &self.len)
            .field("linear", &self.linear)
            .finish()
    }
}

impl RankMetricCode {
    /// Validates shapes, distinctness and, if `linear` is claimed, that the words
    /// are exactly an `F_p`-subspace.
    pub fn new(p: u32, shape: (usize, usize), words: Vec<MatrixFp>, linear: bool) -> Result<Self> {
        require_prime(p)?;
        let (k, l) = shape;
        let mut seen = HashSet::with_capacity(words.len());
        let mut data = Vec::with_capacity(words.len() * k * l);
        for w in &words {
            if w.modulus() != p {
                return Err(Error::ModulusMismatch(p, w.modulus()));
            }
            if w.shape() != shape {
                return Err(Error::ShapeMismatch {
                    expected: shape,
                    got: w.shape(),
                });
            }
            if !seen.insert(w.raw()) {
                return Err(Error::Malformed(format!("duplicate codeword {w}")));
            }
            data.extend_from_slice(w.raw());
        }
        let code = RankMetricCode {
            p,
            k,
            l,
            linear,
            data,
            len: words.len(),
            delta: OnceLock::new(),
        };
        if linear {
            code.check_linearity()?;
        }
        Ok(code)
    }

    fn from_flat(p: u32, k: usize, l: usize, data: Vec<u16>, linear: bool) -> Self {
        let len = data.len().checked_div(k * l).unwrap_or(0);
        RankMetricCode {
            p,
            k,
            l,
            linear,
            data,
            len,
            delta: OnceLock::new(),
        }
    }

    /// Words form a subspace iff the count is `p^rho` with `rho` the rank of the words
    /// flattened to vectors, given that they are distinct.
    fn check_linearity(&self) -> Result<()> {
        let rho = self.dimension()?;
        let flat = MatrixFp::from_raw(self.len, self.k * self.l, self.p, self.data.clone());
        let span = flat.rank();
        if span != rho {
            return Err(Error::Malformed(format!(
                "words span dimension {span} but a linear code of {} words has dimension {rho}",
                self.len
            )));
        }
        Ok(())
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.k, self.l)
    }

    pub fn is_linear(&self) -> bool {
        self.linear
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn word_slice(&self, i: usize) -> &[u16] {
        let s = self.k * self.l;
        &self.data[i * s..(i + 1) * s]
    }

    pub fn word(&self, i: usize) -> MatrixFp {
        MatrixFp::from_raw(self.k, self.l, self.p, self.word_slice(i).to_vec())
    }

    pub fn words(&self) -> impl Iterator<Item = MatrixFp> + '_ {
        (0..self.len).map(|i| self.word(i))
    }

    pub fn contains(&self, m: &MatrixFp) -> bool {
        m.modulus() == self.p
            && m.shape() == (self.k, self.l)
            && (0..self.len).any(|i| self.word_slice(i) == m.raw())
    }

    /// `rho` with `|C| = p^rho`; only defined for linear codes.
    pub fn dimension(&self) -> Result<usize> {
        if !self.linear {
            return Err(Error::NonLinear);
        }
        let mut n = self.len;
        let mut rho = 0;
        while n > 1 && n.is_multiple_of(self.p as usize) {
            n /= self.p as usize;
            rho += 1;
        }
        if n != 1 {
            return Err(Error::NotPowerOfP(self.len));
        }
        Ok(rho)
    }

    fn kernel(&self) -> RankKernel {
        RankKernel::new(self.p, self.k, self.l)
    }

    /// Minimum of `rank(A - B)` over all unordered pairs of distinct words.
    pub fn pairwise_min_rank_distance(&self) -> Result<usize> {
        if self.len < 2 {
            return Err(Error::TooFewWords);
        }
        if let Some(packed) = PackedTwoRow::new(self) {
            return Ok(packed.min_pairwise(self.len));
        }
        let kernel = self.kernel();
        let min = (0..self.len - 1)
            .into_par_iter()
            .map(|i| {
                let a = self.word_slice(i);
                (i + 1..self.len)
                    .map(|j| kernel.rank_diff(a, self.word_slice(j)))
                    .min()
                    .unwrap_or(usize::MAX)
            })
            .min()
            .unwrap_or(usize::MAX);
        Ok(min)
    }

    /// Minimum rank over the nonzero words, `None` if every word is zero.
    pub fn min_nonzero_rank(&self) -> Option<usize> {
        let kernel = self.kernel();
        let zero = vec![0u16; self.k * self.l];
        (0..self.len)
            .into_par_iter()
            .map(|i| kernel.rank_diff(self.word_slice(i), &zero))
            .filter(|&r| r > 0)
            .min()
    }

    /// The pairwise minimum rank distance, cached after the first call. For linear
    /// codes the minimum nonzero rank is computed too and must agree.
    pub fn min_rank_distance(&self) -> Result<usize> {
        if let Some(&d) = self.delta.get() {
            return Ok(d);
        }
        let d = self.pairwise_min_rank_distance()?;
        if self.linear {
            let omega = self.min_nonzero_rank().unwrap_or(0);
            if omega != d {
                return Err(Error::DistanceInconsistent {
                    pairwise: d,
                    min_nonzero: omega,
                });
            }
        }
        Ok(*self.delta.get_or_init(|| d))
    }

    /// Minimum rank distance over `pairs` uniformly drawn distinct pairs.
    pub fn sampled_min_rank_distance(&self, pairs: usize, seed: u64) -> Result<usize> {
        if self.len < 2 {
            return Err(Error::TooFewWords);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kernel = self.kernel();
        let mut min = usize::MAX;
        for _ in 0..pairs {
            let i = rng.gen_range(0..self.len);
            let mut j = rng.gen_range(0..self.len - 1);
            if j >= i {
                j += 1;
            }
            min = min.min(kernel.rank_diff(self.word_slice(i), self.word_slice(j)));
        }
        Ok(min)
    }

    /// Whether `rho` meets the Singleton bound for the computed `delta`.
    pub fn is_mrd(&self) -> Result<bool> {
        let rho = self.dimension()?;
        let delta = self.min_rank_distance()?;
        Ok(rho == singleton_max_dim(self.k, self.l, delta)?)
    }

    /// Like [`RankMetricCode::is_mrd`] with `delta` supplied by the caller.
    pub fn is_mrd_with_distance(&self, delta: usize) -> Result<bool> {
        let rho = self.dimension()?;
        Ok(rho == singleton_max_dim(self.k, self.l, delta)?)
    }

    pub fn to_file(&self) -> RankCodeFile {
        RankCodeFile {
            p: self.p,
            k: self.k,
            l: self.l,
            linear: self.linear,
            words: self.words().map(|w| w.to_rows()).collect(),
        }
    }
}

/// JSON form `{p, k, l, linear, words}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCodeFile {
    pub p: u32,
    pub k: usize,
    pub l: usize,
    pub linear: bool,
    pub words: Vec<Vec<Vec<u32>>>,
}

impl RankCodeFile {
    pub fn into_code(self) -> Result<RankMetricCode> {
        let words = self
            .words
            .iter()
            .map(|rows| {
                let rows: Vec<Vec<i64>> = rows
                    .iter()
                    .map(|r| r.iter().map(|&x| x as i64).collect())
                    .collect();
                MatrixFp::from_rows_with_cols(self.p, self.l, &rows)
            })
            .collect::<Result<Vec<_>>>()?;
        RankMetricCode::new(self.p, (self.k, self.l), words, self.linear)
    }
}

/// `phi_variant((F_{p^2})^r)` without the construction-prime check, in lexicographic
/// order of `(c_1, d_1, ..., c_r, d_r)`.
pub fn image_code_unchecked(p: u32, r: usize, variant: Variant) -> Result<RankMetricCode> {
    require_prime(p)?;
    if p > u16::MAX as u32 + 1 {
        return Err(Error::ModulusTooLarge(p));
    }
    let cols = 2 * r;
    let total = (p as usize).pow(2 * r as u32);
    let mut data = vec![0u16; total * 2 * cols];
    data.par_chunks_mut(2 * cols)
        .enumerate()
        .for_each(|(idx, word)| {
            let digits = base_p_digits(idx as u64, p, 2 * r);
            for i in 0..r {
                let x = Fp2::new(digits[2 * i] as u64, digits[2 * i + 1] as u64, p);
                let z = Fp2::zero(p);
                let blk = match variant {
                    Variant::O => phi_block(p, z, x),
                    Variant::E => phi_block(p, x, z),
                };
                word[2 * i] = blk[0];
                word[2 * i + 1] = blk[1];
                word[cols + 2 * i] = blk[2];
                word[cols + 2 * i + 1] = blk[3];
            }
        });
    Ok(RankMetricCode::from_flat(p, 2, cols, data, true))
}

/// The linear `[2 x 2r, 2r, 2]` code `phi_variant((F_{p^2})^r)`.
pub fn build_image_code(p: u32, r: usize, variant: Variant) -> Result<RankMetricCode> {
    require_construction_prime(p)?;
    image_code_unchecked(p, r, variant)
}

/// Vectors of `(F_{p^2})^2` where the Hamming weight differs from the Bachoc weight of the image.
pub fn isometry_report(p: u32) -> Result<Vec<ExtVector>> {
    require_prime(p)?;
    isometry_counterexamples(ExtVector::all(p, 2))
}

pub fn isometry_counterexamples<I>(vectors: I) -> Result<Vec<ExtVector>>
where
    I: IntoIterator<Item = ExtVector>,
{
    let mut bad = Vec::new();
    for v in vectors {
        let w_b = bachoc_weight(&phi(&v)?)?;
        if hamming_weight(&v) as u32 != w_b {
            bad.push(v);
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn m(p: u32, rows: &[&[i64]]) -> MatrixFp {
        MatrixFp::from_rows(p, rows).unwrap()
    }

    fn v(p: u32, pairs: &[(u64, u64)]) -> ExtVector {
        ExtVector::from_pairs(p, pairs)
    }

    #[test]
    fn weights() {
        assert_eq!(hamming_weight(&v(2, &[(0, 0), (0, 0)])), 0);
        assert_eq!(hamming_weight(&v(2, &[(1, 0), (0, 1)])), 2);
        assert_eq!(hamming_weight(&v(2, &[(0, 0), (1, 1)])), 1);
        assert_eq!(bachoc_weight(&MatrixFp::zeros(2, 2, 2)), Ok(0));
        assert_eq!(bachoc_weight(&m(2, &[&[0, 1], &[1, 0]])), Ok(1));
        assert_eq!(bachoc_weight(&m(2, &[&[1, 1], &[1, 1]])), Ok(2));
        assert_eq!(bachoc_weight(&m(7, &[&[1, 1], &[1, 1]])), Ok(7));
        assert!(bachoc_weight(&MatrixFp::zeros(2, 3, 2)).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&v(2, &[(1, 0), (1, 0)])).unwrap(), m(2, &[&[1, 1], &[1, 1]]));
        assert_eq!(phi(&v(3, &[(0, 0), (1, 1)])).unwrap(), m(3, &[&[1, 1], &[2, 1]]));
        assert!(phi(&ExtVector::zero(5, 4)).unwrap().is_zero());
        assert_eq!(phi(&ExtVector::zero(5, 3)), Err(Error::OddLength(3)));
    }

    #[test]
    fn phi_o_and_e_examples() {
        assert_eq!(phi_o(&v(2, &[(1, 1)])), m(2, &[&[1, 1], &[0, 1]]));
        assert_eq!(phi_o(&v(3, &[(2, 1)])), m(3, &[&[1, 2], &[0, 1]]));
        assert_eq!(phi_o(&v(5, &[(2, 1)])), m(5, &[&[1, 2], &[3, 1]]));
        assert_eq!(phi_e(&v(2, &[(1, 0)])), m(2, &[&[1, 0], &[0, 1]]));
        assert_eq!(phi_e(&v(2, &[(0, 1)])), m(2, &[&[0, 1], &[1, 1]]));
        assert!(phi_e(&ExtVector::zero(3, 2)).is_zero());
    }

    #[test]
    fn singleton() {
        assert_eq!(singleton_max_dim(2, 2, 2), Ok(2));
        assert_eq!(singleton_max_dim(2, 4, 2), Ok(4));
        assert_eq!(singleton_max_dim(3, 5, 1), Ok(15));
        assert!(singleton_max_dim(2, 4, 3).is_err());
        assert!(singleton_max_dim(2, 4, 0).is_err());
    }

    #[test]
    fn small_image_codes() {
        let c = build_image_code(2, 1, Variant::O).unwrap();
        let expected = [
            m(2, &[&[0, 0], &[0, 0]]),
            m(2, &[&[0, 1], &[1, 0]]),
            m(2, &[&[1, 0], &[1, 1]]),
            m(2, &[&[1, 1], &[0, 1]]),
        ];
        assert_eq!(c.len(), 4);
        assert!(expected.iter().all(|w| c.contains(w)));
        assert_eq!(c.min_rank_distance(), Ok(2));
        assert_eq!(c.is_mrd(), Ok(true));

        let c3 = build_image_code(3, 1, Variant::O).unwrap();
        assert_eq!(c3.len(), 9);
        assert_eq!(c3.min_rank_distance(), Ok(2));
        assert_eq!(c3.is_mrd(), Ok(true));

        let c22 = build_image_code(2, 2, Variant::O).unwrap();
        assert_eq!((c22.len(), c22.shape()), (16, (2, 4)));
        assert!(c22.words().filter(|w| !w.is_zero()).all(|w| w.rank() == 2));
    }

    #[test]
    fn p5_is_rejected_but_raw_image_degenerates() {
        assert_eq!(
            build_image_code(5, 1, Variant::O).unwrap_err(),
            Error::NotConstructionPrime(5)
        );
        let raw = image_code_unchecked(5, 1, Variant::O).unwrap();
        assert!(raw.contains(&m(5, &[&[1, 2], &[3, 1]])));
        assert_eq!(raw.min_rank_distance(), Ok(1));
    }

    #[test]
    fn non_linear_and_tiny_codes() {
        let c = RankMetricCode::new(
            2,
            (2, 2),
            vec![MatrixFp::zeros(2, 2, 2), m(2, &[&[1, 0], &[0, 0]])],
            true,
        )
        .unwrap();
        assert_eq!(c.min_rank_distance(), Ok(1));
        assert_eq!(c.dimension(), Ok(1));
        assert_eq!(c.is_mrd(), Ok(false));

        let single = RankMetricCode::new(2, (2, 2), vec![MatrixFp::zeros(2, 2, 2)], false).unwrap();
        assert_eq!(single.min_rank_distance(), Err(Error::TooFewWords));

        let nl = RankMetricCode::new(
            2,
            (2, 2),
            vec![MatrixFp::identity(2, 2), m(2, &[&[1, 1], &[0, 0]])],
            false,
        )
        .unwrap();
        assert_eq!(nl.is_mrd(), Err(Error::NonLinear));

        // three words cannot be an F_2-subspace
        let bad = RankMetricCode::new(
            2,
            (2, 2),
            vec![MatrixFp::zeros(2, 2, 2), MatrixFp::identity(2, 2), m(2, &[&[1, 1], &[0, 0]])],
            true,
        );
        assert_eq!(bad.unwrap_err(), Error::NotPowerOfP(3));
        // four words spanning a 3-dimensional space
        let bad = RankMetricCode::new(
            2,
            (1, 3),
            vec![m(2, &[&[0, 0, 0]]), m(2, &[&[1, 0, 0]]), m(2, &[&[0, 1, 0]]), m(2, &[&[0, 0, 1]])],
            true,
        );
        assert!(matches!(bad, Err(Error::Malformed(_))));
        let dup = RankMetricCode::new(2, (1, 1), vec![m(2, &[&[1]]), m(2, &[&[1]])], false);
        assert!(matches!(dup, Err(Error::Malformed(_))));
    }

    #[test]
    fn isometry() {
        assert!(isometry_report(2).unwrap().is_empty());
        let bad3 = isometry_report(3).unwrap();
        let one_omega = v(3, &[(1, 0), (0, 1)]);
        assert_eq!(phi(&one_omega).unwrap(), m(3, &[&[2, 0], &[1, 2]]));
        assert!(bad3.contains(&one_omega));
        let restricted = Fp2::elements(2)
            .map(|x| ExtVector::new(2, vec![Fp2::zero(2), x]).unwrap());
        assert!(isometry_counterexamples(restricted).unwrap().is_empty());
    }

    #[test]
    fn file_round_trip() {
        let c = build_image_code(3, 1, Variant::E).unwrap();
        let json = serde_json::to_string(&c.to_file()).unwrap();
        assert!(json.starts_with("{\"p\":3,\"k\":2,\"l\":2,\"linear\":true,\"words\":[[[0,0],[0,0]]"));
        let back: RankCodeFile = serde_json::from_str(&json).unwrap();
        let c2 = back.into_code().unwrap();
        assert!(c.words().eq(c2.words()));
    }

    fn ext_vector(p: u32, len: usize) -> impl Strategy<Value = ExtVector> {
        prop::collection::vec((0..p as u64, 0..p as u64), len)
            .prop_map(move |pairs| ExtVector::from_pairs(p, &pairs))
    }

    #[test]
    fn phi_is_injective_and_linear_exhaustive() {
        for p in [2u32, 3] {
            let all: Vec<_> = ExtVector::all(p, 2).collect();
            let images: HashSet<_> = all.iter().map(|x| phi(x).unwrap()).collect();
            assert_eq!(images.len(), all.len());
            for x in &all {
                for y in &all {
                    let sum = ExtVector::new(
                        p,
                        x.coords().iter().zip(y.coords()).map(|(a, b)| *a + *b).collect(),
                    )
                    .unwrap();
                    assert_eq!(phi(&sum).unwrap(), phi(x).unwrap().add(&phi(y).unwrap()).unwrap());
                }
            }
        }
    }

    fn random_code() -> impl Strategy<Value = RankMetricCode> {
        (prop::sample::select(vec![2u32, 3, 5, 7, 13, 17]), 1..4usize, 2..12usize).prop_flat_map(
            |(p, l, n)| {
                prop::collection::vec(prop::collection::vec(0..p as i64, 2 * l), n)
                    .prop_map(|words| words.into_iter().collect::<BTreeSet<_>>())
                    .prop_filter("two distinct words", |set| set.len() >= 2)
                    .prop_map(move |set| {
                        let words = set
                            .into_iter()
                            .map(|v| MatrixFp::from_rows(p, &[&v[..l], &v[l..]]).unwrap())
                            .collect();
                        RankMetricCode::new(p, (2, l), words, false).unwrap()
                    })
            },
        )
    }

    proptest! {
        #[test]
        fn pairwise_kernel_matches_rref(code in random_code()) {
            let words: Vec<MatrixFp> = code.words().collect();
            let mut brute = usize::MAX;
            for i in 0..words.len() {
                for j in i + 1..words.len() {
                    brute = brute.min(words[i].sub(&words[j]).unwrap().rank());
                }
            }
            prop_assert_eq!(code.pairwise_min_rank_distance().unwrap(), brute);
            let omega = words.iter().map(|w| w.rank()).filter(|&r| r > 0).min();
            prop_assert_eq!(code.min_nonzero_rank(), omega);
        }

        #[test]
        fn phi_is_fp_linear(
            (p, x, y, k) in prop::sample::select(vec![2u32, 3, 7, 13])
                .prop_flat_map(|p| (Just(p), ext_vector(p, 4), ext_vector(p, 4), 0..p))
        ) {
            let kk = crate::gf::Fp::new(k as u64, p);
            let comb = ExtVector::new(
                p,
                x.coords().iter().zip(y.coords()).map(|(a, b)| a.scale(kk) + *b).collect(),
            ).unwrap();
            let lhs = phi(&comb).unwrap();
            let rhs = phi(&x).unwrap().scale(k).add(&phi(&y).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn variants_agree_with_interleaved_phi(
            (x, len) in prop::sample::select(vec![2u32, 3, 5, 7])
                .prop_flat_map(|p| (1..4usize).prop_flat_map(move |n| (ext_vector(p, n), Just(n))))
        ) {
            prop_assert_eq!(x.len(), len);
            prop_assert_eq!(phi_o(&x), phi(&x.interleave_zeros(Variant::O)).unwrap());
            prop_assert_eq!(phi_e(&x), phi(&x.interleave_zeros(Variant::E)).unwrap());
        }

        #[test]
        fn nonzero_images_have_full_rank(
            (x, variant) in prop::sample::select(
                (2..=50u32).filter(|&p| crate::gf::is_construction_prime(p)).collect::<Vec<_>>()
            )
            .prop_flat_map(|p| (1..4usize).prop_flat_map(move |n| ext_vector(p, n)))
            .prop_flat_map(|x| (Just(x), prop::sample::select(vec![Variant::O, Variant::E])))
        ) {
            let img = phi_variant(&x, variant);
            prop_assert_eq!(img.rank(), if hamming_weight(&x) == 0 { 0 } else { 2 });
        }
    }
}

//! Subspaces of `F_p^n` in canonical form, the subspace and injection metrics,
//! Gaussian coefficients, anticode bounds, and constant-dimension codes built by
//! lifting rank-metric codes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{build_image_code, RankMetricCode, Variant};
use crate::error::{Error, Result};
use crate::gf::{require_construction_prime, require_prime};
use crate::matfp::MatrixFp;

/// A subspace of `F_p^n`, held as its RREF basis with no zero rows. Two subspaces
/// are equal exactly when their bases are identical.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: MatrixFp,
}

impl Subspace {
    /// Row space of `rows`.
    pub fn span(rows: &MatrixFp) -> Subspace {
        let (r, pivots) = rows.rref_with_pivots();
        Subspace {
            basis: r.truncate_rows(pivots.len()),
        }
    }

    pub fn zero(n: usize, p: u32) -> Subspace {
        Subspace {
            basis: MatrixFp::zeros(0, n, p),
        }
    }

    pub fn full(n: usize, p: u32) -> Subspace {
        Subspace {
            basis: MatrixFp::identity(n, p),
        }
    }

    pub fn basis(&self) -> &MatrixFp {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn modulus(&self) -> u32 {
        self.basis.modulus()
    }

    fn compatible(&self, other: &Subspace) -> Result<()> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch(self.modulus(), other.modulus()));
        }
        if self.ambient() != other.ambient() {
            return Err(Error::AmbientMismatch(self.ambient(), other.ambient()));
        }
        Ok(())
    }

    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize> {
        self.compatible(other)?;
        let sum = self.basis.vstack(&other.basis)?.rank();
        Ok(self.dim() + other.dim() - sum)
    }

    /// `dim A + dim B - 2 dim(A ∩ B)`.
    pub fn subspace_distance(&self, other: &Subspace) -> Result<usize> {
        let i = self.intersection_dim(other)?;
        Ok(self.dim() + other.dim() - 2 * i)
    }

    /// `max(dim A, dim B) - dim(A ∩ B)`.
    pub fn injection_distance(&self, other: &Subspace) -> Result<usize> {
        let i = self.intersection_dim(other)?;
        Ok(self.dim().max(other.dim()) - i)
    }

    /// Orthogonal complement under the standard dot product.
    pub fn dual(&self) -> Subspace {
        Subspace::span(&self.basis.null_space())
    }

    pub fn contains_vector(&self, v: &[i64]) -> Result<bool> {
        let row = MatrixFp::from_rows(self.modulus(), &[v])?;
        Ok(self.basis.vstack(&row)?.rank() == self.dim())
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}> in F_{}^{}", self.basis, self.modulus(), self.ambient())
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.basis)
    }
}

pub fn dual_subspace(a: &Subspace) -> Subspace {
    a.dual()
}

/// Number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_coefficient(n: usize, k: usize, q: u64) -> Result<BigUint> {
    if k > n {
        return Err(Error::DimensionTooLarge { n, k });
    }
    if q < 2 {
        return Err(Error::BadBoundParameters(format!("q = {q} < 2")));
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow(n as u32) - q.pow(i as u32);
        den *= q.pow(k as u32) - q.pow(i as u32);
    }
    Ok(num / den)
}

/// Largest `p^n` the brute-force enumeration will accept.
pub const ENUMERATION_LIMIT: u64 = 1 << 20;

/// Every `k`-dimensional subspace of `F_p^n`, generated from all `k`-row RREF matrices.
pub fn enumerate_grassmannian(n: usize, k: usize, p: u32) -> Result<Vec<Subspace>> {
    require_prime(p)?;
    if k > n {
        return Err(Error::DimensionTooLarge { n, k });
    }
    let size = (p as u128).pow(n as u32);
    if size > ENUMERATION_LIMIT as u128 {
        return Err(Error::GuardExceeded {
            needed: size,
            cap: ENUMERATION_LIMIT as u128,
        });
    }
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free entries sit right of each pivot, outside pivot columns
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(row, &pc)| {
                let pivots = &pivots;
                (pc + 1..n)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (row, c))
            })
            .collect();
        let combos = (p as u64).pow(free.len() as u32);
        for idx in 0..combos {
            let mut m = MatrixFp::zeros(k, n, p);
            for (row, &pc) in pivots.iter().enumerate() {
                m.set(row, pc, 1);
            }
            let mut rest = idx;
            for &(row, c) in &free {
                m.set(row, c, (rest % p as u64) as u32);
                rest /= p as u64;
            }
            out.push(Subspace { basis: m });
        }
        if !next_combination(&mut pivots, n) {
            break;
        }
    }
    Ok(out)
}

/// Advances `c` to the next increasing `c.len()`-subset of `0..n`.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Subspace,
    Injection,
}

impl FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "subspace" => Ok(Metric::Subspace),
            "injection" => Ok(Metric::Injection),
            other => Err(Error::Malformed(format!("unknown metric `{other}`"))),
        }
    }
}

/// The anticode bound as the fraction `[n, m]_q / [k, m]_q`.
pub fn anticode_bound_fraction(
    n: usize,
    d: usize,
    k: usize,
    q: u64,
    metric: Metric,
) -> Result<(BigUint, BigUint)> {
    if k > n {
        return Err(Error::DimensionTooLarge { n, k });
    }
    let m = match metric {
        Metric::Subspace => {
            if d < 2 || !d.is_multiple_of(2) || d > 2 * k {
                return Err(Error::BadBoundParameters(format!(
                    "subspace distance d = {d} must be even with 2 <= d <= 2k = {}",
                    2 * k
                )));
            }
            // d = 2 delta + 2
            k - (d / 2 - 1)
        }
        Metric::Injection => {
            if d < 1 || d > k {
                return Err(Error::BadBoundParameters(format!(
                    "injection distance d = {d} must satisfy 1 <= d <= k = {k}"
                )));
            }
            k - d + 1
        }
    };
    Ok((
        gaussian_coefficient(n, m, q)?,
        gaussian_coefficient(k, m, q)?,
    ))
}

/// Upper bound on the size of a `(n, M, d, k)_q` code. When the Gaussian quotient
/// is not an integer the floor is returned; see [`anticode_bound_fraction`].
pub fn anticode_bound(n: usize, d: usize, k: usize, q: u64, metric: Metric) -> Result<BigUint> {
    let (num, den) = anticode_bound_fraction(n, d, k, q, metric)?;
    Ok(num / den)
}

/// `(n, M, d, k)_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: u64,
    pub d: usize,
    pub k: usize,
    pub q: u32,
}

impl CodeParams {
    pub fn tuple(&self) -> String {
        format!("({},{},{},{})", self.n, self.m, self.d, self.k)
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} M={} d={} k={} q={}",
            self.n, self.m, self.d, self.k, self.q
        )
    }
}

/// Where a code came from and what it is claimed to be.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed: Option<CodeParams>,
}

impl Provenance {
    pub fn unknown() -> Self {
        Provenance {
            construction: "unspecified".into(),
            r: None,
            variant: None,
            claimed: None,
        }
    }
}

/// A constant-dimension code: distinct `k`-dimensional subspaces of `F_p^n`.
#[derive(Clone)]
pub struct GrassmannianCode {
    p: u32,
    n: usize,
    k: usize,
    words: Vec<Subspace>,
    provenance: Provenance,
    d: OnceLock<usize>,
}

impl fmt::Debug for GrassmannianCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GrassmannianCode")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("k", &self.k)
            .field("M", &self.words.len())
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl GrassmannianCode {
    pub fn new(
        p: u32,
        n: usize,
        k: usize,
        words: Vec<Subspace>,
        provenance: Provenance,
    ) -> Result<Self> {
        require_prime(p)?;
        if k > n {
            return Err(Error::DimensionTooLarge { n, k });
        }
        let mut seen = BTreeSet::new();
        for w in &words {
            if w.modulus() != p {
                return Err(Error::ModulusMismatch(p, w.modulus()));
            }
            if w.ambient() != n {
                return Err(Error::AmbientMismatch(n, w.ambient()));
            }
            if w.dim() != k {
                return Err(Error::MixedDimensions);
            }
            if !seen.insert(w) {
                return Err(Error::Malformed(format!("duplicate codeword {w}")));
            }
        }
        Ok(GrassmannianCode {
            p,
            n,
            k,
            words,
            provenance,
            d: OnceLock::new(),
        })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Subspace] {
        &self.words
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        self.words.contains(s)
    }

    pub fn word_set(&self) -> BTreeSet<&Subspace> {
        self.words.iter().collect()
    }

    fn pairwise<F>(&self, f: F) -> Vec<usize>
    where
        F: Fn(&Subspace, &Subspace) -> usize + Sync,
    {
        let w = &self.words;
        (0..w.len())
            .into_par_iter()
            .flat_map_iter(|i| (i + 1..w.len()).map(move |j| (i, j)))
            .map(|(i, j)| f(&w[i], &w[j]))
            .collect()
    }

    fn scan_min_distance(&self) -> Result<usize> {
        if self.words.len() < 2 {
            return Err(Error::TooFewWords);
        }
        Ok(self
            .pairwise(|a, b| a.subspace_distance(b).expect("validated words"))
            .into_iter()
            .min()
            .expect("at least one pair"))
    }

    /// Minimum subspace distance over all pairs, cached.
    pub fn min_distance(&self) -> Result<usize> {
        if let Some(&d) = self.d.get() {
            return Ok(d);
        }
        let d = self.scan_min_distance()?;
        Ok(*self.d.get_or_init(|| d))
    }

    /// Largest `dim(A ∩ B)` over distinct pairs; 0 means all intersections are trivial.
    pub fn max_pairwise_intersection(&self) -> Result<usize> {
        if self.words.len() < 2 {
            return Err(Error::TooFewWords);
        }
        Ok(self
            .pairwise(|a, b| a.intersection_dim(b).expect("validated words"))
            .into_iter()
            .max()
            .expect("at least one pair"))
    }

    /// `(n, M, d, k)_q` recomputed by a fresh pairwise scan.
    pub fn code_params(&self) -> Result<CodeParams> {
        let d = self.scan_min_distance()?;
        if let Some(&cached) = self.d.get() {
            debug_assert_eq!(cached, d);
        }
        let _ = self.d.set(d);
        Ok(CodeParams {
            n: self.n,
            m: self.words.len() as u64,
            d,
            k: self.k,
            q: self.p,
        })
    }

    /// `{A^⊥ : A ∈ C}` in the same order.
    pub fn dual_code(&self) -> GrassmannianCode {
        let claimed = self.provenance.claimed.map(|c| CodeParams {
            k: c.n - c.k,
            ..c
        });
        let construction = match self.provenance.construction.strip_prefix("dual of ") {
            Some(orig) => orig.to_string(),
            None => format!("dual of {}", self.provenance.construction),
        };
        GrassmannianCode {
            p: self.p,
            n: self.n,
            k: self.n - self.k,
            words: self.words.par_iter().map(Subspace::dual).collect(),
            provenance: Provenance {
                construction,
                claimed,
                ..self.provenance.clone()
            },
            d: OnceLock::new(),
        }
    }

    pub fn to_file(&self) -> GrassmannianFile {
        GrassmannianFile {
            p: self.p,
            n: self.n,
            k: self.k,
            provenance: self.provenance.clone(),
            words: self.words.iter().map(|w| w.basis.to_rows()).collect(),
        }
    }
}

pub fn dual_code(c: &GrassmannianCode) -> GrassmannianCode {
    c.dual_code()
}

/// JSON form `{p, n, k, provenance, words}` with each word as its RREF basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrassmannianFile {
    pub p: u32,
    pub n: usize,
    pub k: usize,
    #[serde(default = "Provenance::unknown")]
    pub provenance: Provenance,
    pub words: Vec<Vec<Vec<u32>>>,
}

impl GrassmannianFile {
    /// Each basis is re-canonicalised, so hand-edited files need not be in RREF.
    pub fn into_code(self) -> Result<GrassmannianCode> {
        let words = self
            .words
            .iter()
            .map(|rows| {
                let rows: Vec<Vec<i64>> = rows
                    .iter()
                    .map(|r| r.iter().map(|&x| x as i64).collect())
                    .collect();
                MatrixFp::from_rows_with_cols(self.p, self.n, &rows).map(|m| Subspace::span(&m))
            })
            .collect::<Result<Vec<_>>>()?;
        GrassmannianCode::new(self.p, self.n, self.k, words, self.provenance)
    }
}

/// `Λ(C) = {<(I_k | A)> : A ∈ C}`, claimed to be a `(k + l, p^rho, 2 delta, k)_p` code.
pub fn lift_code(c: &RankMetricCode) -> Result<GrassmannianCode> {
    let rho = c.dimension()?;
    let (k, l) = c.shape();
    let claimed = if c.len() >= 2 {
        Some(CodeParams {
            n: k + l,
            m: (c.modulus() as u64).pow(rho as u32),
            d: 2 * c.min_rank_distance()?,
            k,
            q: c.modulus(),
        })
    } else {
        None
    };
    let words: Vec<Subspace> = c.words().map(|a| Subspace::span(&a.lift())).collect();
    GrassmannianCode::new(
        c.modulus(),
        k + l,
        k,
        words,
        Provenance {
            construction: "lift".into(),
            r: None,
            variant: None,
            claimed,
        },
    )
}

/// `(p^{2r+2} - 1) / (p^2 - 1) = 1 + p^2 + ... + p^{2r}`.
pub fn g_code_size(p: u32, r: usize) -> BigUint {
    let p = BigUint::from(p);
    (p.pow(2 * r as u32 + 2) - 1u32) / (p.pow(2) - 1u32)
}

/// The `(2r+2, (p^{2r+2}-1)/(p^2-1), 4, 2)_p` code: for `i = 1..=r` the lifts of
/// `phi_variant((F_{p^2})^i)` padded on the left with `2(r - i)` zero columns,
/// followed by the row space of `(0_{2 x 2r} | I_2)`.
pub fn construct_g(p: u32, r: usize, variant: Variant) -> Result<GrassmannianCode> {
    require_construction_prime(p)?;
    if r == 0 {
        return Err(Error::Malformed("r must be at least 1".into()));
    }
    let n = 2 * r + 2;
    let mut words = Vec::new();
    for i in 1..=r {
        let image = build_image_code(p, i, variant)?;
        let pad = MatrixFp::zeros(2, 2 * (r - i), p);
        let block: Vec<Subspace> = (0..image.len())
            .into_par_iter()
            .map(|j| {
                let g = pad.hstack(&image.word(j).lift()).expect("two rows");
                Subspace::span(&g)
            })
            .collect();
        words.extend(block);
    }
    words.push(Subspace::span(&MatrixFp::hat_h(2, r, p)));
    let m = g_code_size(p, r)
        .to_u64()
        .ok_or_else(|| Error::Malformed("code size overflows u64".into()))?;
    GrassmannianCode::new(
        p,
        n,
        2,
        words,
        Provenance {
            construction: "G_p(r,2)".into(),
            r: Some(r),
            variant: Some(variant),
            claimed: Some(CodeParams {
                n,
                m,
                d: 4,
                k: 2,
                q: p,
            }),
        },
    )
}

/// Whether `count` equals the anticode bound for `(n, d, k)_p` in the subspace metric.
pub fn attains_anticode_bound(count: u64, n: usize, d: usize, k: usize, p: u32) -> Result<bool> {
    let (num, den) = anticode_bound_fraction(n, d, k, p as u64, Metric::Subspace)?;
    Ok((&num % &den).is_zero() && num / den == BigUint::from(count))
}

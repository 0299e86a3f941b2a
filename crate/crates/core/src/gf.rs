//! Prime fields `F_p` and the quadratic extension `F_p[w] / (w^2 + w + (p - 1))`.
//!
//! The extension is a field exactly when `x^2 + x - 1` has no root mod p, which for
//! odd p means 5 is a quadratic non-residue, i.e. `p = 2, 3 (mod 5)`. `p = 2` also
//! qualifies and gives the usual `F_4` with `w^2 = w + 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Deterministic trial division.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes for which `x^2 + x + (p - 1)` is irreducible over `F_p`.
pub fn is_construction_prime(p: u32) -> bool {
    is_prime(p) && matches!(p % 5, 2 | 3)
}

pub(crate) fn require_prime(p: u32) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

pub(crate) fn require_construction_prime(p: u32) -> Result<()> {
    require_prime(p)?;
    if is_construction_prime(p) {
        Ok(())
    } else {
        Err(Error::NotConstructionPrime(p))
    }
}

#[inline]
fn add_mod(x: u32, y: u32, p: u32) -> u32 {
    let s = x + y;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn sub_mod(x: u32, y: u32, p: u32) -> u32 {
    if x >= y {
        x - y
    } else {
        x + p - y
    }
}

#[inline]
fn mul_mod(x: u32, y: u32, p: u32) -> u32 {
    ((x as u64 * y as u64) % p as u64) as u32
}

/// An element of `F_p`, carrying its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u32,
    p: u32,
}

impl Fp {
    /// Reduces `value` mod `p`. `p` is assumed prime; use [`Fp::try_new`] to check.
    pub fn new(value: u64, p: u32) -> Self {
        debug_assert!(p >= 2);
        Fp {
            value: (value % p as u64) as u32,
            p,
        }
    }

    pub fn try_new(value: u64, p: u32) -> Result<Self> {
        require_prime(p)?;
        Ok(Fp::new(value, p))
    }

    /// Reduces a signed integer, so `Fp::from_i64(-1, p)` is `p - 1`.
    pub fn from_i64(value: i64, p: u32) -> Self {
        Fp {
            value: value.rem_euclid(p as i64) as u32,
            p,
        }
    }

    pub fn zero(p: u32) -> Self {
        Fp { value: 0, p }
    }

    pub fn one(p: u32) -> Self {
        Fp { value: 1 % p, p }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, other: Fp) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.p, other.p))
        }
    }

    pub fn checked_add(self, other: Fp) -> Result<Fp> {
        self.check(other)?;
        Ok(Fp {
            value: add_mod(self.value, other.value, self.p),
            p: self.p,
        })
    }

    pub fn checked_sub(self, other: Fp) -> Result<Fp> {
        self.check(other)?;
        Ok(Fp {
            value: sub_mod(self.value, other.value, self.p),
            p: self.p,
        })
    }

    pub fn checked_mul(self, other: Fp) -> Result<Fp> {
        self.check(other)?;
        Ok(Fp {
            value: mul_mod(self.value, other.value, self.p),
            p: self.p,
        })
    }

    pub fn pow(self, mut exp: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp::one(self.p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    /// Inverse by Fermat's little theorem.
    pub fn inv(self) -> Result<Fp> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(self.p as u64 - 2))
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for Fp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.value)
    }
}

// Operator forms panic on a modulus mismatch; the `checked_*` forms report it.
impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.checked_add(rhs).expect("Fp add")
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.checked_sub(rhs).expect("Fp sub")
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.checked_mul(rhs).expect("Fp mul")
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: sub_mod(0, self.value, self.p),
            p: self.p,
        }
    }
}

/// `a + b w` in `F_p[w]` with `w^2 = 1 - w`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp2 {
    a: u32,
    b: u32,
    p: u32,
}

impl Fp2 {
    pub fn new(a: u64, b: u64, p: u32) -> Self {
        Fp2 {
            a: (a % p as u64) as u32,
            b: (b % p as u64) as u32,
            p,
        }
    }

    pub fn from_parts(a: Fp, b: Fp) -> Result<Self> {
        a.check(b)?;
        Ok(Fp2 {
            a: a.value,
            b: b.value,
            p: a.p,
        })
    }

    pub fn zero(p: u32) -> Self {
        Fp2 { a: 0, b: 0, p }
    }

    pub fn one(p: u32) -> Self {
        Fp2::new(1, 0, p)
    }

    pub fn omega(p: u32) -> Self {
        Fp2::new(0, 1, p)
    }

    /// Constant coefficient.
    pub fn a(self) -> Fp {
        Fp {
            value: self.a,
            p: self.p,
        }
    }

    /// Coefficient of `w`.
    pub fn b(self) -> Fp {
        Fp {
            value: self.b,
            p: self.p,
        }
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    fn check(self, other: Fp2) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.p, other.p))
        }
    }

    pub fn checked_add(self, other: Fp2) -> Result<Fp2> {
        self.check(other)?;
        let p = self.p;
        Ok(Fp2 {
            a: add_mod(self.a, other.a, p),
            b: add_mod(self.b, other.b, p),
            p,
        })
    }

    pub fn checked_sub(self, other: Fp2) -> Result<Fp2> {
        self.check(other)?;
        let p = self.p;
        Ok(Fp2 {
            a: sub_mod(self.a, other.a, p),
            b: sub_mod(self.b, other.b, p),
            p,
        })
    }

    /// `(a + bw)(c + dw) = (ac + bd) + (ad + bc - bd) w`.
    pub fn checked_mul(self, other: Fp2) -> Result<Fp2> {
        self.check(other)?;
        let p = self.p;
        let ac = mul_mod(self.a, other.a, p);
        let bd = mul_mod(self.b, other.b, p);
        let ad = mul_mod(self.a, other.b, p);
        let bc = mul_mod(self.b, other.a, p);
        Ok(Fp2 {
            a: add_mod(ac, bd, p),
            b: sub_mod(add_mod(ad, bc, p), bd, p),
            p,
        })
    }

    /// Image under the other root `w' = -1 - w`.
    pub fn conjugate(self) -> Fp2 {
        let p = self.p;
        Fp2 {
            a: sub_mod(self.a, self.b, p),
            b: sub_mod(0, self.b, p),
            p,
        }
    }

    /// `x * conj(x) = a^2 - ab - b^2`.
    pub fn norm(self) -> Fp {
        let (a, b) = (self.a(), self.b());
        a * a - a * b - b * b
    }

    pub fn inv(self) -> Result<Fp2> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::ReducibleModulus { p: self.p });
        }
        let n_inv = n.inv()?;
        let c = self.conjugate();
        Ok(Fp2 {
            a: (c.a() * n_inv).value,
            b: (c.b() * n_inv).value,
            p: self.p,
        })
    }

    pub fn scale(self, k: Fp) -> Fp2 {
        Fp2 {
            a: (self.a() * k).value,
            b: (self.b() * k).value,
            p: self.p,
        }
    }

    /// All `p^2` elements, ordered lexicographically by `(a, b)`.
    pub fn elements(p: u32) -> impl Iterator<Item = Fp2> {
        (0..p).flat_map(move |a| (0..p).map(move |b| Fp2 { a, b, p }))
    }
}

impl fmt::Debug for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self, self.p)
    }
}

/// Renders as `0`, `2`, `w`, `2w`, `1+w`, `2+2w`.
impl fmt::Display for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = match self.b {
            0 => String::new(),
            1 => "w".to_string(),
            b => format!("{b}w"),
        };
        match (self.a, w.is_empty()) {
            (a, true) => write!(f, "{a}"),
            (0, false) => write!(f, "{w}"),
            (a, false) => write!(f, "{a}+{w}"),
        }
    }
}

impl Serialize for Fp2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a, self.b].serialize(s)
    }
}

impl Add for Fp2 {
    type Output = Fp2;
    fn add(self, rhs: Fp2) -> Fp2 {
        self.checked_add(rhs).expect("Fp2 add")
    }
}

impl Sub for Fp2 {
    type Output = Fp2;
    fn sub(self, rhs: Fp2) -> Fp2 {
        self.checked_sub(rhs).expect("Fp2 sub")
    }
}

impl Mul for Fp2 {
    type Output = Fp2;
    fn mul(self, rhs: Fp2) -> Fp2 {
        self.checked_mul(rhs).expect("Fp2 mul")
    }
}

impl Neg for Fp2 {
    type Output = Fp2;
    fn neg(self) -> Fp2 {
        Fp2::zero(self.p) - self
    }
}

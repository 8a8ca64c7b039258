//! Exact arithmetic in the maximal order O(d) of a real quadratic field,
//! fundamental units by continued fractions, cube roots and rational prime
//! divisibility.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{self, Factorization};
use crate::error::{domain, usage, Error, Result};

/// An element `(x + y√d) / den` of O(d).
///
/// Canonical: `den = 2` only when `d ≡ 1 (mod 4)` and `x`, `y` are both odd.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    d: u64,
    x: BigInt,
    y: BigInt,
    den: u8,
}

fn check_field(d: u64) -> Result<()> {
    if d <= 1 {
        return Err(usage(format!("d = {d} must exceed 1")));
    }
    if !arith::is_squarefree(d) {
        return Err(usage(format!("d = {d} is not squarefree")));
    }
    Ok(())
}

impl QuadElem {
    /// Builds `(x + y√d) / den` for any positive `den`, failing unless the
    /// value lies in O(d).
    ///
    /// `d` is trusted to be squarefree; use [`QuadElem::checked`] on user input.
    pub fn new(d: u64, x: impl Into<BigInt>, y: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (x, y, den) = (x.into(), y.into(), den.into());
        if den.is_zero() {
            return Err(usage("zero denominator"));
        }
        Self::from_rational(d, x, y, den)
            .ok_or_else(|| domain(format!("element is not in the maximal order of Q(sqrt {d})")))
    }

    /// Like [`QuadElem::new`] but also validates `d`.
    pub fn checked(d: u64, x: impl Into<BigInt>, y: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        check_field(d)?;
        Self::new(d, x, y, den)
    }

    pub fn integer(d: u64, n: impl Into<BigInt>) -> Self {
        QuadElem {
            d,
            x: n.into(),
            y: BigInt::zero(),
            den: 1,
        }
    }

    pub fn one(d: u64) -> Self {
        Self::integer(d, 1)
    }

    /// `√d` itself.
    pub fn sqrt_d(d: u64) -> Self {
        QuadElem {
            d,
            x: BigInt::zero(),
            y: BigInt::one(),
            den: 1,
        }
    }

    fn from_rational(d: u64, mut x: BigInt, mut y: BigInt, mut den: BigInt) -> Option<Self> {
        if den.is_negative() {
            x = -x;
            y = -y;
            den = -den;
        }
        let g = x.gcd(&y).gcd(&den);
        if !g.is_one() {
            x /= &g;
            y /= &g;
            den /= &g;
        }
        let den = den.to_u8()?;
        match den {
            1 => Some(QuadElem { d, x, y, den }),
            2 if d % 4 == 1 && x.is_odd() && y.is_odd() => Some(QuadElem { d, x, y, den }),
            _ => None,
        }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn den(&self) -> u8 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(usage(format!(
                "mismatched fields: sqrt {} vs sqrt {}",
                self.d, other.d
            )));
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let d = BigInt::from(self.d);
        let x = &self.x * &other.x + &d * &self.y * &other.y;
        let y = &self.x * &other.y + &other.x * &self.y;
        let den = BigInt::from(self.den as u32 * other.den as u32);
        Ok(Self::from_rational(self.d, x, y, den).expect("O(d) is closed under multiplication"))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let (a, b) = (other.den as u32, self.den as u32);
        let x = &self.x * a + &other.x * b;
        let y = &self.y * a + &other.y * b;
        let den = BigInt::from(a * b);
        Ok(Self::from_rational(self.d, x, y, den).expect("O(d) is closed under addition"))
    }

    pub fn conj(&self) -> Self {
        QuadElem {
            d: self.d,
            x: self.x.clone(),
            y: -&self.y,
            den: self.den,
        }
    }

    /// `u u'`, always a rational integer.
    pub fn norm(&self) -> BigInt {
        let num = &self.x * &self.x - BigInt::from(self.d) * &self.y * &self.y;
        num / (self.den as u32 * self.den as u32)
    }

    /// `u + u'`, always a rational integer.
    pub fn trace(&self) -> BigInt {
        &self.x * 2u32 / self.den as u32
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.d);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// `u / k` when it lies in O(d).
    pub fn div_int(&self, k: &BigInt) -> Option<Self> {
        if k.is_zero() {
            return None;
        }
        Self::from_rational(self.d, self.x.clone(), self.y.clone(), k * self.den as u32)
    }

    /// Exact quotient `u / v` when it lies in O(d).
    pub fn div_exact(&self, v: &Self) -> Option<Self> {
        if self.d != v.d || v.is_zero() {
            return None;
        }
        let num = self * &v.conj();
        num.div_int(&v.norm())
    }

    /// Sign of the real embedding with `√d > 0`.
    pub fn signum(&self) -> i8 {
        sign_of(&self.x, &self.y, self.d)
    }

    /// True iff `u > 1` under the embedding `√d > 0`.
    pub fn exceeds_one(&self) -> bool {
        sign_of(&(&self.x - self.den as u32), &self.y, self.d) > 0
    }

    /// Coordinates read in `Z/m` through the inverse of the denominator.
    pub fn half_residue(&self, m: u64) -> Result<(u64, u64)> {
        if m % 2 == 0 {
            return Err(usage(format!("modulus {m} must be odd")));
        }
        if m == 1 {
            return Ok((0, 0));
        }
        let inv = arith::inv_mod(self.den as u64, m).expect("odd modulus");
        let x = arith::mul_mod(arith::reduce(&self.x, m), inv, m);
        let y = arith::mul_mod(arith::reduce(&self.y, m), inv, m);
        Ok((x, y))
    }
}

fn sign_of(x: &BigInt, y: &BigInt, d: u64) -> i8 {
    let sx = x.signum().to_i8().unwrap_or(0);
    let sy = y.signum().to_i8().unwrap_or(0);
    if sx >= 0 && sy >= 0 {
        return (sx | sy).signum();
    }
    if sx <= 0 && sy <= 0 {
        return -1;
    }
    // opposite signs: compare x^2 with d y^2
    let lhs = x * x;
    let rhs = BigInt::from(d) * y * y;
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => sx,
        std::cmp::Ordering::Less => sy,
        std::cmp::Ordering::Equal => 0,
    }
}

/// Panics when the fields differ; use [`QuadElem::checked_mul`] otherwise.
impl Mul for &QuadElem {
    type Output = QuadElem;

    fn mul(self, rhs: &QuadElem) -> QuadElem {
        self.checked_mul(rhs).expect("operands in the same field")
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;

    fn neg(self) -> QuadElem {
        QuadElem {
            d: self.d,
            x: -&self.x,
            y: -&self.y,
            den: self.den,
        }
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.y.is_negative() { '-' } else { '+' };
        let body = format!("{}{}{}*sqrt({})", self.x, sign, self.y.abs(), self.d);
        if self.den == 1 {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

pub fn qmul(u: &QuadElem, v: &QuadElem) -> Result<QuadElem> {
    u.checked_mul(v)
}

pub fn qconj(u: &QuadElem) -> QuadElem {
    u.conj()
}

pub fn qnorm(u: &QuadElem) -> BigInt {
    u.norm()
}

pub fn qpow(u: &QuadElem, k: u32) -> QuadElem {
    u.pow(k)
}

/// Continued fraction of `(P0 + √d) / Q0` up to the first repeated state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CfExpansion {
    #[serde(serialize_with = "crate::json::decimal")]
    pub d: u64,
    #[serde(serialize_with = "crate::json::decimal")]
    pub p0: i64,
    #[serde(serialize_with = "crate::json::decimal")]
    pub q0: i64,
    /// Partial quotients from the seed through one full period.
    #[serde(serialize_with = "crate::json::decimal_vec")]
    pub quotients: Vec<i64>,
    /// Index of the first state of the period.
    #[serde(serialize_with = "crate::json::decimal")]
    pub period_start: usize,
    #[serde(serialize_with = "crate::json::decimal")]
    pub period: usize,
    /// Complete-quotient states `(P, Q)` in the same order as `quotients`.
    states: Vec<(i64, i64)>,
}

fn floor_div_surd(p: i64, q: i64, s: i64) -> i64 {
    // floor((p + √d) / q) where s = floor(√d) and √d is irrational
    if q > 0 {
        (p + s).div_euclid(q)
    } else {
        -((p + s).div_euclid(-q)) - 1
    }
}

/// Expands `(p0 + √d) / q0`; requires `q0 | d - p0²`.
pub fn cf_expand(d: u64, p0: i64, q0: i64) -> Result<CfExpansion> {
    let di = d as i64;
    let s = (d as u128).sqrt() as i64;
    if s * s == di {
        return Err(usage(format!("{d} is a perfect square")));
    }
    if q0 == 0 || (di - p0 * p0) % q0 != 0 {
        return Err(usage("seed must satisfy q0 | d - p0^2"));
    }
    let mut seen: HashMap<(i64, i64), usize> = HashMap::new();
    let mut states = Vec::new();
    let mut quotients = Vec::new();
    let (mut p, mut q) = (p0, q0);
    loop {
        if let Some(&start) = seen.get(&(p, q)) {
            return Ok(CfExpansion {
                d,
                p0,
                q0,
                period: states.len() - start,
                period_start: start,
                quotients,
                states,
            });
        }
        seen.insert((p, q), states.len());
        states.push((p, q));
        let a = floor_div_surd(p, q, s);
        quotients.push(a);
        let p_next = a * q - p;
        q = (di - p_next * p_next) / q;
        p = p_next;
    }
}

impl CfExpansion {
    /// Product of the complete quotients over one period: a unit > 1 of the
    /// multiplier ring of `Z + Z·ω`.
    pub fn period_unit(&self) -> QuadElem {
        let d = BigInt::from(self.d);
        let (mut x, mut y, mut den) = (BigInt::one(), BigInt::zero(), BigInt::one());
        for &(p, q) in &self.states[self.period_start..] {
            let p = BigInt::from(p);
            let nx = &x * &p + &y * &d;
            let ny = &x + &y * &p;
            den *= q;
            let g = nx.gcd(&ny).gcd(&den);
            x = nx / &g;
            y = ny / &g;
            den /= g;
        }
        QuadElem::from_rational(self.d, x, y, den).expect("period product lies in O(d)")
    }
}

/// Fundamental unit `a + b√d > 1` of O(d) together with its norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundUnit {
    pub elem: QuadElem,
    pub epsilon: i8,
}

impl FundUnit {
    pub fn d(&self) -> u64 {
        self.elem.d
    }
}

/// The seed whose expansion yields the unit of O(d): `√d`, or `(1 + √d)/2`
/// when `d ≡ 1 (mod 4)`.
pub fn order_seed(d: u64) -> (i64, i64) {
    if d % 4 == 1 {
        (1, 2)
    } else {
        (0, 1)
    }
}

pub fn fundamental_unit(d: u64) -> Result<FundUnit> {
    check_field(d)?;
    let (p0, q0) = order_seed(d);
    let cf = cf_expand(d, p0, q0)?;
    let elem = cf.period_unit();
    let norm = elem.norm();
    let epsilon = if norm.is_one() {
        1
    } else if norm == -BigInt::one() {
        -1
    } else {
        return Err(Error::Domain(format!("period product for d = {d} is not a unit")));
    };
    debug_assert!(elem.exceeds_one() && elem.x.is_positive() && elem.y.is_positive());
    Ok(FundUnit { elem, epsilon })
}

/// Coordinates of `u` in `Z/m`; see [`QuadElem::half_residue`].
pub fn half_residue(u: &QuadElem, m: u64) -> Result<(u64, u64)> {
    u.half_residue(m)
}

/// Returns `ρ ∈ O(d)` with `ρ³ = u`, if one exists.
///
/// A cube root `ρ` has norm `n = ∛N(u)` and trace `t` satisfying
/// `t³ - 3nt - Tr(u) = 0`; each integer root `t` gives `ρ = (t ± S√d)/2`
/// with `S² d = t² - 4n`, and the candidate is confirmed by exact cubing.
pub fn is_cube_in_order(u: &QuadElem) -> Option<QuadElem> {
    if u.is_zero() {
        return Some(u.clone());
    }
    let n = arith::exact_cbrt(&u.norm())?;
    let d = BigInt::from(u.d);
    for t in arith::depressed_cubic_integer_roots(&(&n * -3), &-u.trace()) {
        let gap = &t * &t - &n * 4u32;
        let (s2, rem) = gap.div_rem(&d);
        if !rem.is_zero() {
            continue;
        }
        let Some(s) = arith::exact_sqrt(&s2) else {
            continue;
        };
        for s in [s.clone(), -s] {
            if let Some(rho) = QuadElem::from_rational(u.d, t.clone(), s, BigInt::from(2)) {
                if rho.pow(3) == *u {
                    return Some(rho);
                }
            }
        }
    }
    None
}

/// Largest `k` with `p^k | u` in O(d).
pub fn prime_valuation(u: &QuadElem, p: &BigInt) -> u32 {
    let mut k = 0;
    let mut cur = u.clone();
    while let Some(next) = cur.div_int(p) {
        cur = next;
        k += 1;
    }
    k
}

/// Rational primes dividing `u` in O(d), with multiplicity.
pub fn rational_prime_content(u: &QuadElem) -> Factorization {
    assert!(!u.is_zero(), "content of zero is undefined");
    let g = u.x.gcd(&u.y);
    let mut candidates: Vec<BigInt> = if g.is_zero() || g.is_one() {
        Vec::new()
    } else {
        arith::factorize(&g).primes().cloned().collect()
    };
    let two = BigInt::from(2);
    if u.d % 4 == 1 && !candidates.contains(&two) {
        // (x + y√d)/2 ∈ O(d) for odd x, y
        candidates.push(two);
        candidates.sort();
    }
    let factors = candidates
        .into_iter()
        .map(|p| {
            let k = prime_valuation(u, &p);
            (p, k)
        })
        .filter(|(_, k)| *k > 0)
        .collect();
    Factorization { sign: 1, factors }
}

/// Product of the distinct rational primes dividing `u` but not `d`.
pub fn c_of(u: &QuadElem) -> BigInt {
    let d = BigInt::from(u.d);
    rational_prime_content(u)
        .primes()
        .filter(|p| !(&d % *p).is_zero())
        .fold(BigInt::one(), |acc, p| acc * p)
}

pub fn odd_part(c: &BigInt) -> BigInt {
    let mut c = c.clone();
    while c.is_even() && !c.is_zero() {
        c /= 2u32;
    }
    c
}

//! The cubic field `k = Q(t)` with `t = v + v'`: its minimal polynomial,
//! polynomial and field discriminants, and the check of the discriminant
//! predictions in terms of `D(F)`.
//!
//! Field discriminants are computed through the binary cubic form attached
//! to the order `Z[t]`. An order `R(f)` fails to be maximal at `p` exactly
//! when `f ≡ 0 (mod p)`, or `f` is equivalent to a form with `p² | a` and
//! `p | b`; in both cases an explicit overorder of index `p²` resp. `p`
//! exists, and the loop below enlarges until every prime is maximal.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith;
use crate::class_numbers::disc_f;
use crate::criteria::unit_root_in_m;
use crate::error::{domain, Result};
use crate::json::decimal;
use crate::quadratic::{fundamental_unit, FundUnit};

/// `x³ + p·x + q` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CubicPoly {
    #[serde(serialize_with = "decimal")]
    pub p: BigInt,
    #[serde(serialize_with = "decimal")]
    pub q: BigInt,
}

impl CubicPoly {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        CubicPoly {
            p: p.into(),
            q: q.into(),
        }
    }

    /// No rational root; rational roots of a monic integer cubic are integers.
    pub fn is_irreducible(&self) -> bool {
        arith::depressed_cubic_integer_roots(&self.p, &self.q).is_empty()
    }
}

/// `x³ − 3εx − 2a` for the fundamental unit `a + b√d` of norm `ε`.
pub fn min_poly_of_t(fu: &FundUnit) -> CubicPoly {
    let elem = &fu.elem;
    // 2a = 2x/den is integral: den = 2 forces x odd
    let two_a = elem.x() * 2u32 / elem.den() as u32;
    CubicPoly::new(-3 * fu.epsilon as i64, -two_a)
}

/// `−4p³ − 27q²`.
pub fn poly_disc(f: &CubicPoly) -> BigInt {
    -(&f.p * &f.p * &f.p * 4u32) - &f.q * &f.q * 27u32
}

/// Discriminant of `Q(√n)` for squarefree `n`: `n` or `4n`.
pub fn quad_field_disc(n: i64) -> i64 {
    if n.rem_euclid(4) == 1 {
        n
    } else {
        4 * n
    }
}

/// Binary cubic form `a x³ + b x² y + c x y² + d y³`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCubicForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl BinaryCubicForm {
    pub fn of_poly(f: &CubicPoly) -> Self {
        BinaryCubicForm {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: f.p.clone(),
            d: f.q.clone(),
        }
    }

    pub fn disc(&self) -> BigInt {
        let BinaryCubicForm { a, b, c, d } = self;
        b * b * c * c - a * c * c * c * 4u32 - b * b * b * d * 4u32 - a * a * d * d * 27u32
            + a * b * c * d * 18u32
    }

    fn coeffs(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// `f(αx + βy, γx + δy)`.
    pub fn substitute(&self, alpha: &BigInt, beta: &BigInt, gamma: &BigInt, delta: &BigInt) -> Self {
        // powers of the two linear forms as coefficient vectors in (x, y)
        let lin_mul = |poly: &[BigInt], l0: &BigInt, l1: &BigInt| -> Vec<BigInt> {
            let mut out = vec![BigInt::zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                out[i] += c * l0;
                out[i + 1] += c * l1;
            }
            out
        };
        let mut total = vec![BigInt::zero(); 4];
        for (k, coef) in self.coeffs().into_iter().enumerate() {
            // X^(3-k) Y^k
            let mut poly = vec![coef.clone()];
            for _ in 0..3 - k {
                poly = lin_mul(&poly, alpha, beta);
            }
            for _ in 0..k {
                poly = lin_mul(&poly, gamma, delta);
            }
            for (i, c) in poly.into_iter().enumerate() {
                total[i] += c;
            }
        }
        let [a, b, c, d]: [BigInt; 4] = total.try_into().expect("four coefficients");
        BinaryCubicForm { a, b, c, d }
    }
}

fn residue(n: &BigInt, p: &BigInt) -> BigInt {
    n.mod_floor(p)
}

/// Polynomial over `F_p`, coefficients low degree first, trimmed.
fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn inv_mod_big(a: &BigInt, p: &BigInt) -> BigInt {
    a.modpow(&(p - 2u32), p)
}

fn poly_rem(mut num: Vec<BigInt>, den: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    let lead_inv = inv_mod_big(den.last().expect("nonzero divisor"), p);
    while num.len() >= den.len() {
        let shift = num.len() - den.len();
        let factor = residue(&(num.last().unwrap() * &lead_inv), p);
        for (i, c) in den.iter().enumerate() {
            num[shift + i] = residue(&(&num[shift + i] - &factor * c), p);
        }
        num = trim(num);
    }
    num
}

fn poly_gcd(mut a: Vec<BigInt>, mut b: Vec<BigInt>, p: &BigInt) -> Vec<BigInt> {
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Finite multiple root `r` of `h(x) = f(x, 1)` modulo `p`, for a form whose
/// reduction is nonzero.
fn finite_multiple_root(form: &BinaryCubicForm, p: &BigInt) -> Option<BigInt> {
    let h: Vec<BigInt> = trim(
        [&form.d, &form.c, &form.b, &form.a]
            .iter()
            .map(|c| residue(c, p))
            .collect(),
    );
    if p <= &BigInt::from(3) {
        let eval = |poly: &[BigInt], x: &BigInt| {
            poly.iter()
                .rev()
                .fold(BigInt::zero(), |acc, c| residue(&(acc * x + c), p))
        };
        let deriv: Vec<BigInt> = h
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| residue(&(c * i), p))
            .collect();
        let mut r = BigInt::zero();
        while &r < p {
            if eval(&h, &r).is_zero() && eval(&deriv, &r).is_zero() {
                return Some(r);
            }
            r += 1u32;
        }
        return None;
    }
    if h.len() < 2 {
        return None;
    }
    let deriv = trim(
        h.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| residue(&(c * i), p))
            .collect(),
    );
    let g = poly_gcd(h, deriv, p);
    match g.len() {
        // linear gcd: the double root
        2 => Some(residue(&(-&g[0] * inv_mod_big(&g[1], p)), p)),
        // (x − r)² from a triple root
        3 => Some(residue(&(-&g[1] * inv_mod_big(&(&g[2] * 2u32), p)), p)),
        _ => None,
    }
}

/// One enlargement step at `p`: the overorder's form and the index gained,
/// or `None` when `R(form)` is already maximal at `p`.
fn enlarge_at(form: &BinaryCubicForm, p: &BigInt) -> Option<(BinaryCubicForm, BigInt)> {
    let divisible = |n: &BigInt, m: &BigInt| (n % m).is_zero();
    if form.coeffs().iter().all(|c| divisible(c, p)) {
        let shrunk = BinaryCubicForm {
            a: &form.a / p,
            b: &form.b / p,
            c: &form.c / p,
            d: &form.d / p,
        };
        return Some((shrunk, p * p));
    }
    let moved = if divisible(&form.a, p) && divisible(&form.b, p) {
        form.clone()
    } else {
        let r = finite_multiple_root(form, p)?;
        // g(x, y) = f(r x + y, x) puts the multiple root at [1 : 0]
        form.substitute(&r, &BigInt::one(), &BigInt::one(), &BigInt::zero())
    };
    debug_assert!(divisible(&moved.a, p) && divisible(&moved.b, p));
    if !divisible(&moved.a, &(p * p)) {
        return None;
    }
    let bigger = BinaryCubicForm {
        a: &moved.a / (p * p),
        b: &moved.b / p,
        c: moved.c.clone(),
        d: &moved.d * p,
    };
    Some((bigger, p.clone()))
}

/// Field discriminant and index `[O_k : Z[θ]]` of `Q(θ)`, `θ` a root of `f`.
pub fn field_discriminant_with_index(f: &CubicPoly) -> Result<(BigInt, BigInt)> {
    if !f.is_irreducible() {
        return Err(domain(format!("x^3 + ({})x + ({}) is reducible", f.p, f.q)));
    }
    let disc = poly_disc(f);
    let mut form = BinaryCubicForm::of_poly(f);
    let mut index = BigInt::one();
    for (p, e) in arith::factorize(&disc).factors {
        if e < 2 {
            continue;
        }
        while (form.disc() % (&p * &p)).is_zero() {
            match enlarge_at(&form, &p) {
                Some((bigger, gained)) => {
                    index *= gained;
                    form = bigger;
                }
                None => break,
            }
        }
    }
    let field = &disc / (&index * &index);
    debug_assert_eq!(field, form.disc());
    Ok((field, index))
}

pub fn field_discriminant(f: &CubicPoly) -> Result<BigInt> {
    Ok(field_discriminant_with_index(f)?.0)
}

/// The four discriminant predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscCase {
    /// `3 ∤ d`, `v ∈ M`: `D(k) = D(F)`.
    CoprimeInM,
    /// `3 | d`, `v ∈ M`: `D(k) = D(F)`.
    DivisibleInM,
    /// `3 ∤ d`, `v ∉ M`: `D(k) = 9 D(F)`.
    CoprimeNotInM,
    /// `3 | d`, `v ∉ M`: `D(k) = 81 D(F)`.
    DivisibleNotInM,
}

impl DiscCase {
    pub fn of(d: u64, in_m: bool) -> Self {
        match (d % 3 == 0, in_m) {
            (false, true) => DiscCase::CoprimeInM,
            (true, true) => DiscCase::DivisibleInM,
            (false, false) => DiscCase::CoprimeNotInM,
            (true, false) => DiscCase::DivisibleNotInM,
        }
    }

    pub fn multiplier(self) -> i64 {
        match self {
            DiscCase::CoprimeInM | DiscCase::DivisibleInM => 1,
            DiscCase::CoprimeNotInM => 9,
            DiscCase::DivisibleNotInM => 81,
        }
    }
}

/// Closed form for `D(F)`: `−3d` or `−12d` when `3 ∤ d`, and `−m` or `−4m`
/// for `d = 3m`, split by `d ≡ 1 (mod 4)`.
pub fn closed_form_disc_f(d: u64) -> i64 {
    let d = d as i64;
    match (d % 3 == 0, d % 4 == 1) {
        (false, true) => -3 * d,
        (false, false) => -12 * d,
        (true, true) => -d / 3,
        (true, false) => -4 * d / 3,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscReport {
    #[serde(serialize_with = "decimal")]
    pub d: u64,
    pub case: DiscCase,
    pub in_m: bool,
    pub min_poly: CubicPoly,
    #[serde(serialize_with = "decimal")]
    pub d_f: i64,
    #[serde(serialize_with = "decimal")]
    pub closed_form_d_f: i64,
    #[serde(serialize_with = "decimal")]
    pub predicted: BigInt,
    #[serde(serialize_with = "decimal")]
    pub poly_disc: BigInt,
    #[serde(serialize_with = "decimal")]
    pub field_disc: BigInt,
    #[serde(serialize_with = "decimal")]
    pub index: BigInt,
    pub pass: bool,
}

pub fn verify_discriminant(d: u64) -> Result<DiscReport> {
    let fu = fundamental_unit(d)?;
    let in_m = unit_root_in_m(&fu);
    let case = DiscCase::of(d, in_m);
    let f = min_poly_of_t(&fu);
    let (field_disc, index) = field_discriminant_with_index(&f)?;
    let d_f = disc_f(d);
    let closed_form_d_f = closed_form_disc_f(d);
    let predicted = BigInt::from(d_f) * case.multiplier();
    let pass = predicted == field_disc && d_f == closed_form_d_f;
    Ok(DiscReport {
        d,
        case,
        in_m,
        poly_disc: poly_disc(&f),
        min_poly: f,
        d_f,
        closed_form_d_f,
        predicted,
        field_disc,
        index,
        pass,
    })
}

/// `|poly_disc / field_disc|` as an exact square root, when it is a square.
pub fn index_from_discs(poly: &BigInt, field: &BigInt) -> Option<BigInt> {
    if field.is_zero() || !(poly % field).is_zero() {
        return None;
    }
    arith::exact_sqrt(&(poly / field).abs())
}

/// Stickelberger: every field discriminant is `0` or `1 (mod 4)`.
pub fn stickelberger_ok(disc: &BigInt) -> bool {
    disc.mod_floor(&BigInt::from(4)).to_u8().is_some_and(|r| r <= 1)
}

//! Prime ideal factorization of principal ideals `(u)` in `O(d)`, and the
//! normal form `(u) = 𝔄³·q·𝔔` for elements of `S_d`.
//!
//! A prime `𝔭` above `p` is recorded by the residue `r` of `√d` (odd `p`) or
//! of `ω = (1 + √d)/2` (split `p = 2`) modulo `𝔭`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith;
use crate::criteria::classify_sd;
use crate::cubic::quad_field_disc;
use crate::error::{domain, Result};
use crate::json::{decimal, decimal_opt};
use crate::quadratic::{prime_valuation, QuadElem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeKind {
    Split,
    Ramified,
    Inert,
}

/// For split primes, `First` has the smaller root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeIdealPower {
    #[serde(serialize_with = "decimal")]
    pub p: BigInt,
    pub kind: PrimeKind,
    #[serde(serialize_with = "decimal_opt")]
    pub root: Option<BigInt>,
    #[serde(serialize_with = "crate::json::decimal")]
    pub exponent: u32,
    pub branch: Option<Branch>,
}

impl PrimeIdealPower {
    fn key(&self) -> (BigInt, Option<Branch>) {
        (self.p.clone(), self.branch)
    }

    /// Norm of the prime ideal (not of the power).
    pub fn prime_norm(&self) -> BigInt {
        match self.kind {
            PrimeKind::Inert => &self.p * &self.p,
            _ => self.p.clone(),
        }
    }
}

/// Splitting type of `p` in `O(d)`.
pub fn prime_kind(d: u64, p: &BigInt) -> PrimeKind {
    let disc = BigInt::from(quad_field_disc(d as i64));
    if p == &BigInt::from(2) {
        return match d % 8 {
            1 => PrimeKind::Split,
            5 => PrimeKind::Inert,
            _ => PrimeKind::Ramified,
        };
    }
    let r = disc.mod_floor(p);
    if r.is_zero() {
        PrimeKind::Ramified
    } else if r.modpow(&((p - 1u32) >> 1), p).is_one() {
        PrimeKind::Split
    } else {
        PrimeKind::Inert
    }
}

/// Roots describing the primes above `p`: two for split, one for ramified,
/// none for inert. Split roots come in increasing order.
pub fn prime_roots(d: u64, p: &BigInt) -> Vec<BigInt> {
    let kind = prime_kind(d, p);
    if p == &BigInt::from(2) {
        return match kind {
            PrimeKind::Split => vec![BigInt::zero(), BigInt::one()],
            PrimeKind::Ramified => vec![BigInt::from(d % 2)],
            PrimeKind::Inert => Vec::new(),
        };
    }
    match kind {
        PrimeKind::Inert => Vec::new(),
        PrimeKind::Ramified => vec![BigInt::zero()],
        PrimeKind::Split => {
            let r = arith::sqrt_mod_big(&BigInt::from(d), p).expect("d is a square mod a split prime");
            vec![r.clone(), p - r]
        }
    }
}

/// Root of the split prime above `p` containing `w`, given `p ∤ w` and
/// `p | N(w)`.
fn carrying_root(w: &QuadElem, p: &BigInt) -> BigInt {
    if p == &BigInt::from(2) {
        // w = X + Yω with X = (x − y)/den, Y = 2y/den; Y is odd since 2 ∤ w
        let den = BigInt::from(w.den());
        let big_x = (w.x() - w.y()) / &den;
        big_x.mod_floor(p)
    } else {
        // x + y·r ≡ 0 (mod 𝔭_r); p ∤ y since otherwise p | w
        let y = w.y().mod_floor(p);
        let y_inv = y.modpow(&(p - 2u32), p);
        (-(w.x()) * y_inv).mod_floor(p)
    }
}

fn branch_of(roots: &[BigInt], r: &BigInt) -> Branch {
    if &roots[0] == r {
        Branch::First
    } else {
        debug_assert_eq!(&roots[1], r);
        Branch::Second
    }
}

/// Prime ideal factorization of `(u)`, sorted by `p` then branch.
pub fn factor_principal(u: &QuadElem) -> Result<Vec<PrimeIdealPower>> {
    if u.is_zero() {
        return Err(domain("factorization of (0)"));
    }
    let d = u.d();
    let norm = u.norm();
    let mut out = Vec::new();
    for (p, vn) in arith::factorize(&norm).factors {
        let kind = prime_kind(d, &p);
        let roots = prime_roots(d, &p);
        let mut push = |root: Option<BigInt>, exponent: u32, branch: Option<Branch>| {
            if exponent > 0 {
                out.push(PrimeIdealPower {
                    p: p.clone(),
                    kind,
                    root,
                    exponent,
                    branch,
                });
            }
        };
        match kind {
            PrimeKind::Ramified => push(Some(roots[0].clone()), vn, None),
            PrimeKind::Inert => {
                debug_assert_eq!(vn, 2 * prime_valuation(u, &p));
                push(None, vn / 2, None)
            }
            PrimeKind::Split => {
                let k = prime_valuation(u, &p);
                let m = vn - 2 * k;
                if m == 0 {
                    push(Some(roots[0].clone()), k, Some(Branch::First));
                    push(Some(roots[1].clone()), k, Some(Branch::Second));
                } else {
                    let w = u.div_int(&num_traits::pow(p.clone(), k as usize)).expect("content divides");
                    let r = carrying_root(&w, &p);
                    let heavy = branch_of(&roots, &r);
                    for (i, root) in roots.iter().enumerate() {
                        let branch = if i == 0 { Branch::First } else { Branch::Second };
                        let e = if branch == heavy { k + m } else { k };
                        push(Some(root.clone()), e, Some(branch));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `(u) = 𝔄³·q·𝔔` with `q` squarefree and `N(𝔔) = q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CubeDecomposition {
    /// Exponents of `𝔄`.
    pub cube_part: Vec<PrimeIdealPower>,
    #[serde(serialize_with = "decimal")]
    pub q: BigInt,
    /// Split primes of exponent one, one above each prime of `q`.
    pub q_part: Vec<PrimeIdealPower>,
}

impl CubeDecomposition {
    /// `𝔄³·(q)·𝔔` as a factorization, sorted like [`factor_principal`].
    pub fn reassemble(&self) -> Vec<PrimeIdealPower> {
        let mut acc: BTreeMap<(BigInt, Option<Branch>), PrimeIdealPower> = BTreeMap::new();
        let mut add = |f: &PrimeIdealPower, e: u32| {
            acc.entry(f.key())
                .and_modify(|g| g.exponent += e)
                .or_insert_with(|| PrimeIdealPower {
                    exponent: e,
                    ..f.clone()
                });
        };
        for f in &self.cube_part {
            add(f, 3 * f.exponent);
        }
        for f in &self.q_part {
            // 𝔔 once, and (p) = 𝔭𝔭' once more
            add(f, 2);
            let roots = prime_roots_from(f);
            let other = if f.branch == Some(Branch::First) {
                (roots[1].clone(), Branch::Second)
            } else {
                (roots[0].clone(), Branch::First)
            };
            add(
                &PrimeIdealPower {
                    root: Some(other.0),
                    branch: Some(other.1),
                    ..f.clone()
                },
                1,
            );
        }
        acc.into_values().collect()
    }

    /// `N(𝔄)`.
    pub fn cube_root_norm(&self) -> BigInt {
        self.cube_part
            .iter()
            .map(|f| num_traits::pow(f.prime_norm(), f.exponent as usize))
            .product()
    }
}

fn prime_roots_from(f: &PrimeIdealPower) -> [BigInt; 2] {
    let r = f.root.clone().expect("split primes carry a root");
    let other = if f.p == BigInt::from(2) {
        BigInt::one() - &r
    } else {
        &f.p - &r
    };
    if r < other {
        [r, other]
    } else {
        [other, r]
    }
}

/// The normal form of `(u)` for `u ∈ S_d`.
///
/// At a split `p` with exponents `a ≥ b`, `b ≤ 2` since `p³ ∤ u`, and
/// `a + b ≡ 0 (mod 3)`:
/// `b = 1`: `𝔭^a𝔭' = (p)·𝔭·𝔭^(a−2)`;
/// `b = 2`: `𝔭^a𝔭'² = (p)·𝔭'·𝔭^(a−1)`.
pub fn cube_decompose(u: &QuadElem) -> Result<CubeDecomposition> {
    let class = classify_sd(u);
    if !class.in_sd {
        return Err(domain(format!("{u} is not in S_d: {}", class.reasons.join("; "))));
    }
    let factors = factor_principal(u)?;
    let mut cube_part = Vec::new();
    let mut q = BigInt::one();
    let mut q_part = Vec::new();
    let mut i = 0;
    while i < factors.len() {
        let f = &factors[i];
        if f.kind != PrimeKind::Split {
            if f.exponent % 3 != 0 {
                return Err(domain(format!("exponent {} at {} is not a multiple of 3", f.exponent, f.p)));
            }
            cube_part.push(PrimeIdealPower {
                exponent: f.exponent / 3,
                ..f.clone()
            });
            i += 1;
            continue;
        }
        // both primes above p, absent ones with exponent 0
        let pair: Vec<&PrimeIdealPower> = factors[i..].iter().take_while(|g| g.p == f.p).collect();
        i += pair.len();
        let roots = prime_roots_from(f);
        let exp_of = |b: Branch| pair.iter().find(|g| g.branch == Some(b)).map_or(0, |g| g.exponent);
        let (e1, e2) = (exp_of(Branch::First), exp_of(Branch::Second));
        let ideal = |b: Branch, exponent: u32| PrimeIdealPower {
            p: f.p.clone(),
            kind: PrimeKind::Split,
            root: Some(roots[if b == Branch::First { 0 } else { 1 }].clone()),
            exponent,
            branch: Some(b),
        };
        let (heavy, light, a, b) = if e1 >= e2 {
            (Branch::First, Branch::Second, e1, e2)
        } else {
            (Branch::Second, Branch::First, e2, e1)
        };
        let (cube_exp, q_branch) = match b {
            0 => (a / 3, None),
            1 => ((a - 2) / 3, Some(heavy)),
            2 => ((a - 1) / 3, Some(light)),
            _ => return Err(domain(format!("{}^3 divides {u}", f.p))),
        };
        if cube_exp > 0 {
            cube_part.push(ideal(heavy, cube_exp));
        }
        if let Some(br) = q_branch {
            q *= &f.p;
            q_part.push(ideal(br, 1));
        }
    }
    Ok(CubeDecomposition { cube_part, q, q_part })
}

/// `|N(u)|` from a factorization.
pub fn factored_norm(factors: &[PrimeIdealPower]) -> BigInt {
    factors
        .iter()
        .map(|f| num_traits::pow(f.prime_norm(), f.exponent as usize))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::fundamental_unit;
    use num_traits::{Signed, ToPrimitive};

    fn q(d: u64, x: i64, y: i64, den: i64) -> QuadElem {
        QuadElem::new(d, x, y, den).unwrap()
    }

    fn summary(fs: &[PrimeIdealPower]) -> Vec<(i64, u32)> {
        fs.iter().map(|f| (f.p.to_i64().unwrap(), f.exponent)).collect()
    }

    #[test]
    fn kinds() {
        assert_eq!(prime_kind(142, &BigInt::from(3)), PrimeKind::Split);
        assert_eq!(prime_kind(142, &BigInt::from(2)), PrimeKind::Ramified);
        assert_eq!(prime_kind(142, &BigInt::from(71)), PrimeKind::Ramified);
        assert_eq!(prime_kind(5, &BigInt::from(2)), PrimeKind::Inert);
        assert_eq!(prime_kind(17, &BigInt::from(2)), PrimeKind::Split);
        assert_eq!(prime_kind(5, &BigInt::from(11)), PrimeKind::Split);
        assert_eq!(prime_kind(5, &BigInt::from(7)), PrimeKind::Inert);
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23] {
            for d in [2u64, 3, 5, 6, 7, 10, 13, 17, 21, 79] {
                let chi = arith::kronecker(quad_field_disc(d as i64), p);
                let expect = match chi {
                    1 => PrimeKind::Split,
                    0 => PrimeKind::Ramified,
                    _ => PrimeKind::Inert,
                };
                assert_eq!(prime_kind(d, &BigInt::from(p)), expect, "d = {d}, p = {p}");
            }
        }
    }

    #[test]
    fn factorization_examples() {
        let f = factor_principal(&q(142, 13, 1, 1)).unwrap();
        assert_eq!(summary(&f), vec![(3, 3)]);
        assert_eq!(f[0].kind, PrimeKind::Split);

        let f = factor_principal(&q(5, 44, -11, 1)).unwrap();
        assert_eq!(summary(&f), vec![(11, 2), (11, 1)]);
        // 𝔭 = (11, √5 − 4) carries the square: 4 − √5 ∈ 𝔭 for √5 ≡ 4
        let heavy = f.iter().find(|g| g.exponent == 2).unwrap();
        assert_eq!(heavy.root, Some(BigInt::from(4)));

        assert!(factor_principal(&fundamental_unit(79).unwrap().elem).unwrap().is_empty());
        assert!(factor_principal(&QuadElem::integer(5, 0)).is_err());
    }

    #[test]
    fn norms_and_membership_agree() {
        for d in [2u64, 3, 5, 13, 17, 21, 33, 79, 142] {
            for x in -12i64..=12 {
                for y in -6i64..=6 {
                    for den in [1i64, 2] {
                        let Ok(u) = QuadElem::new(d, x, y, den) else { continue };
                        if u.is_zero() {
                            continue;
                        }
                        let fs = factor_principal(&u).unwrap();
                        assert_eq!(factored_norm(&fs), u.norm().abs(), "u = {u}");
                        for f in &fs {
                            // u ∈ 𝔭; for odd p the denominator 2 is a unit
                            if let Some(r) = &f.root {
                                let val = if f.p == BigInt::from(2) && d % 4 == 1 {
                                    let den = BigInt::from(u.den());
                                    ((u.x() - u.y()) / &den + (BigInt::from(2) * u.y() / &den) * r)
                                        .mod_floor(&f.p)
                                } else {
                                    (u.x() + u.y() * r).mod_floor(&f.p)
                                };
                                assert!(val.is_zero(), "u = {u} not in the prime above {}", f.p);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let dec = cube_decompose(&q(142, 13, 1, 1)).unwrap();
        assert_eq!(dec.q, BigInt::one());
        assert_eq!(summary(&dec.cube_part), vec![(3, 1)]);
        assert!(dec.q_part.is_empty());

        let u = q(5, 44, -11, 1);
        let dec = cube_decompose(&u).unwrap();
        assert_eq!(dec.q, BigInt::from(11));
        assert!(dec.cube_part.is_empty());
        assert_eq!(dec.q_part[0].root, Some(BigInt::from(4)));
        assert_eq!(dec.reassemble(), factor_principal(&u).unwrap());

        let u = q(79, 1376, 387, 1);
        let dec = cube_decompose(&u).unwrap();
        assert_eq!(dec.q, BigInt::from(43));
        assert_eq!(dec.reassemble(), factor_principal(&u).unwrap());

        assert!(cube_decompose(&q(2, 7, 5, 1)).is_err());
    }
}

//! Cubic residuacity of `u` at primes `p = x² + 3de²y²`, the primes that
//! split completely in the ring class field `M_e` of `Z[e√−3d]`.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{self, inv_mod, pow_mod};
use crate::criteria::unit_root_in_m;
use crate::error::{domain, usage, Error, Result};
use crate::json::decimal;
use crate::quadratic::{fundamental_unit, QuadElem};

pub const DEFAULT_TRIALS: usize = 50;
pub const DEFAULT_BOUND: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeWitness {
    #[serde(serialize_with = "decimal")]
    pub p: u64,
    #[serde(serialize_with = "decimal")]
    pub x: u64,
    #[serde(serialize_with = "decimal")]
    pub y: u64,
    #[serde(serialize_with = "decimal")]
    pub sqrt_d: u64,
    #[serde(serialize_with = "decimal")]
    pub u_p: u64,
    pub cubic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    NonMember,
    LikelyMember,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub witness: Option<PrimeWitness>,
    #[serde(serialize_with = "crate::json::decimal")]
    pub trials: usize,
}

impl Verdict {
    pub fn is_member(&self) -> bool {
        self.kind == VerdictKind::LikelyMember
    }
}

/// Primes `p = x² + K y²`, `K = 3de²`, with `y ≥ 1` and `p ∤ 6d`, in
/// increasing order. Enumerates the region `x² + K y² ≤ W` for doubling `W`.
pub struct RepresentedPrimes {
    d: u64,
    k: u64,
    bound: u64,
    covered: u64,
    pending: std::vec::IntoIter<(u64, u64, u64)>,
}

impl RepresentedPrimes {
    pub fn new(d: u64, e: u64, bound: u64) -> Result<Self> {
        if d < 2 || e == 0 {
            return Err(usage(format!("need d > 1 and e > 0, got d = {d}, e = {e}")));
        }
        let k = 3u64
            .checked_mul(d)
            .and_then(|v| v.checked_mul(e))
            .and_then(|v| v.checked_mul(e))
            .ok_or_else(|| usage("3de^2 overflows"))?;
        Ok(RepresentedPrimes {
            d,
            k,
            bound,
            covered: 0,
            pending: Vec::new().into_iter(),
        })
    }

    fn refill(&mut self) -> bool {
        if self.covered >= self.bound {
            return false;
        }
        let hi = self
            .covered
            .saturating_mul(2)
            .max(self.k.saturating_mul(4))
            .max(4096)
            .min(self.bound);
        let lo = self.covered;
        let mut found = Vec::new();
        let mut y = 1u64;
        while let Some(ky2) = self.k.checked_mul(y * y).filter(|&v| v < hi) {
            let x_lo = lo.saturating_sub(ky2).sqrt();
            let mut x = x_lo.max(1);
            loop {
                let p = x * x + ky2;
                if p > hi {
                    break;
                }
                if p > lo && (6 * self.d) % p != 0 && arith::is_prime_u64(p) {
                    found.push((p, x, y));
                }
                x += 1;
            }
            y += 1;
        }
        found.sort_unstable();
        found.dedup_by_key(|t| t.0);
        self.covered = hi;
        self.pending = found.into_iter();
        true
    }
}

impl Iterator for RepresentedPrimes {
    type Item = (u64, u64, u64);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(t) = self.pending.next() {
                return Some(t);
            }
            if !self.refill() {
                return None;
            }
        }
    }
}

/// The first `count` represented primes up to `bound`.
pub fn find_represented_primes(d: u64, e: u64, count: usize, bound: u64) -> Result<Vec<(u64, u64, u64)>> {
    let primes: Vec<_> = RepresentedPrimes::new(d, e, bound)?.take(count).collect();
    if primes.len() < count {
        return Err(Error::SearchExhausted {
            bound,
            found: primes.len(),
            wanted: count,
        });
    }
    Ok(primes)
}

/// `u_p = (x + y·sqrt_d)·den⁻¹ mod p`.
pub fn reduce_mod_p(u: &QuadElem, p: u64, sqrt_d: u64) -> u64 {
    assert!(p % 2 == 1, "reduction needs an odd prime");
    let x = arith::reduce(u.x(), p);
    let y = arith::reduce(u.y(), p);
    let num = (x as u128 + arith::mul_mod(y, sqrt_d, p) as u128) % p as u128;
    let den_inv = inv_mod(u.den() as u64, p).expect("p odd");
    arith::mul_mod(num as u64, den_inv, p)
}

/// `z^((p−1)/3) ≡ 1 (mod p)` for `p ≡ 1 (mod 3)`.
pub fn is_cubic_residue(z: u64, p: u64) -> Result<bool> {
    if p % 3 != 1 {
        return Err(usage(format!("{p} is not 1 mod 3")));
    }
    let z = z % p;
    if z == 0 {
        return Err(domain(format!("residue is 0 mod {p}")));
    }
    Ok(pow_mod(z, (p - 1) / 3, p) == 1)
}

/// Witness record for `u` at the represented prime `p = x² + 3de²y²`.
pub fn witness_at(u: &QuadElem, p: u64, x: u64, y: u64) -> Result<PrimeWitness> {
    let sqrt_d = arith::sqrt_mod(u.d() as i64, p).expect("d is a square mod a represented prime");
    let u_p = reduce_mod_p(u, p, sqrt_d);
    let cubic = is_cubic_residue(u_p, p)?;
    Ok(PrimeWitness {
        p,
        x,
        y,
        sqrt_d,
        u_p,
        cubic,
    })
}

/// Empirical membership of `∛u` in `M_e`: one non-cubic `u_p` disproves it,
/// `trials` cubic ones make it likely. Primes dividing `N(u)` are skipped.
pub fn membership_test(u: &QuadElem, e: u64, trials: usize, bound: u64) -> Result<Verdict> {
    if u.is_zero() {
        return Err(domain("membership of 0"));
    }
    let norm = u.norm();
    let mut tested = 0;
    for (p, x, y) in RepresentedPrimes::new(u.d(), e, bound)? {
        if tested == trials {
            break;
        }
        if (&norm % BigInt::from(p)).is_zero() {
            continue;
        }
        let w = witness_at(u, p, x, y)?;
        tested += 1;
        if !w.cubic {
            return Ok(Verdict {
                kind: VerdictKind::NonMember,
                witness: Some(w),
                trials: tested,
            });
        }
    }
    if tested < trials {
        return Err(Error::SearchExhausted {
            bound,
            found: tested,
            wanted: trials,
        });
    }
    Ok(Verdict {
        kind: VerdictKind::LikelyMember,
        witness: None,
        trials: tested,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CrosscheckStatus {
    Agree,
    Disagree,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Crosscheck {
    #[serde(serialize_with = "decimal")]
    pub d: u64,
    pub in_m: bool,
    pub verdict: Verdict,
    pub status: CrosscheckStatus,
}

/// The unit criterion against cubic residuacity at `trials` primes
/// `x² + 3dy²`.
pub fn residuacity_crosscheck(d: u64, trials: usize, bound: u64) -> Result<Crosscheck> {
    let fu = fundamental_unit(d)?;
    let in_m = unit_root_in_m(&fu);
    let verdict = membership_test(&fu.elem, 1, trials, bound)?;
    let status = match (in_m, verdict.kind) {
        (true, VerdictKind::LikelyMember) | (false, VerdictKind::NonMember) => CrosscheckStatus::Agree,
        (true, VerdictKind::NonMember) => CrosscheckStatus::Disagree,
        (false, VerdictKind::LikelyMember) => CrosscheckStatus::Inconclusive,
    };
    Ok(Crosscheck {
        d,
        in_m,
        verdict,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(d: u64, x: i64, y: i64, den: i64) -> QuadElem {
        QuadElem::new(d, x, y, den).unwrap()
    }

    /// Represented primes by direct search over all `p`.
    fn naive_represented(d: u64, e: u64, limit: u64) -> Vec<u64> {
        let k = 3 * d * e * e;
        (5..=limit)
            .filter(|&p| arith::is_prime_u64(p) && (6 * d) % p != 0 && d % p != 0)
            .filter(|&p| (1..).take_while(|y| k * y * y < p).any(|y| {
                let r = p - k * y * y;
                let x = num_integer::Roots::sqrt(&r);
                x * x == r && x > 0
            }))
            .collect()
    }

    #[test]
    fn first_witnesses() {
        assert_eq!(find_represented_primes(2, 1, 1, 1000).unwrap(), vec![(7, 1, 1)]);
        assert_eq!(find_represented_primes(5, 1, 1, 1000).unwrap(), vec![(19, 2, 1)]);
    }

    #[test]
    fn enumeration_matches_naive_search() {
        for (d, e) in [(2, 1), (5, 1), (21, 3), (79, 1), (3, 1), (142, 2)] {
            let limit = 60_000;
            let fast: Vec<u64> = RepresentedPrimes::new(d, e, limit).unwrap().map(|t| t.0).collect();
            assert_eq!(fast, naive_represented(d, e, limit), "d = {d}, e = {e}");
            assert!(fast.iter().all(|p| p % 3 == 1));
        }
    }

    #[test]
    fn exhaustion_is_reported() {
        let err = find_represented_primes(79, 1, 1000, 2000).unwrap_err();
        assert!(matches!(err, Error::SearchExhausted { bound: 2000, .. }));
    }

    #[test]
    fn reduction_examples() {
        let u = q(2, 1, 1, 1);
        assert_eq!(reduce_mod_p(&u, 7, 3), 4);
        assert_eq!(reduce_mod_p(&u, 7, 4), 5);
        let u = q(21, 5, 1, 2);
        let s = arith::sqrt_mod(21, 37).unwrap();
        let up = reduce_mod_p(&u, 37, s);
        assert_eq!((2 * up) % 37, (5 + s) % 37);
    }

    #[test]
    fn cubic_residue_examples() {
        assert!(is_cubic_residue(1, 7).unwrap());
        assert!(!is_cubic_residue(2, 7).unwrap());
        assert!(is_cubic_residue(6, 7).unwrap());
        assert!(matches!(is_cubic_residue(14, 7), Err(Error::Domain(_))));
    }

    #[test]
    fn membership_examples() {
        let v = membership_test(&q(21, 5, 1, 2), 1, 50, DEFAULT_BOUND).unwrap();
        assert_eq!(v.kind, VerdictKind::NonMember);
        assert!(!v.witness.unwrap().cubic);
        let v = membership_test(&q(79, 80, 9, 1), 1, 50, DEFAULT_BOUND).unwrap();
        assert_eq!(v.kind, VerdictKind::LikelyMember);
        assert_eq!(v.trials, 50);
        let v = membership_test(&q(21, 5, 1, 2), 3, 50, DEFAULT_BOUND).unwrap();
        assert_eq!(v.kind, VerdictKind::LikelyMember);
    }

    #[test]
    fn branch_independence() {
        for u in [q(2, 1, 1, 1), q(21, 5, 1, 2), q(79, 80, 9, 1)] {
            for (p, x, y) in find_represented_primes(u.d(), 1, 30, DEFAULT_BOUND).unwrap() {
                let w = witness_at(&u, p, x, y).unwrap();
                let other = reduce_mod_p(&u, p, p - w.sqrt_d);
                assert_eq!(is_cubic_residue(other, p).unwrap(), w.cubic);
            }
        }
    }

    #[test]
    fn crosscheck_examples() {
        for d in [79, 2, 21] {
            let c = residuacity_crosscheck(d, 50, DEFAULT_BOUND).unwrap();
            assert_eq!(c.status, CrosscheckStatus::Agree, "d = {d}");
        }
    }
}

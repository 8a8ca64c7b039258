//! Congruence criteria for ring class field membership: the fundamental
//! unit test, the `P_d` residue table, and the `S_d` / `S_d*` / `R_d`
//! classification of elements with cubic norm.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith;
use crate::error::{domain, Result};
use crate::json::decimal;
use crate::quadratic::{self, FundUnit, QuadElem};

/// Allowed residues `a mod 27` for each class of `n mod 9`.
///
/// Rows are stored as the listed representatives; membership closes them
/// under negation mod 27.
#[derive(Debug, Clone)]
pub struct PdTable {
    allowed: [[bool; 27]; 9],
}

const PD_ROWS: [(&[u8], &[i8]); 6] = [
    (&[2, 5, 8], &[0, 2, 7, 9, 11]),
    (&[1], &[0, 1, 9]),
    (&[4], &[0, 8, 9]),
    (&[7], &[0, 9, 10]),
    (&[0], &[4, 5, 13]),
    (&[3, 6], &[0, 4, 5, 9, 13]),
];

impl PdTable {
    pub const fn new() -> Self {
        let mut allowed = [[false; 27]; 9];
        let mut row = 0;
        while row < PD_ROWS.len() {
            let (classes, residues) = PD_ROWS[row];
            let mut i = 0;
            while i < classes.len() {
                let mut j = 0;
                while j < residues.len() {
                    let a = residues[j] as usize;
                    allowed[classes[i] as usize][a] = true;
                    allowed[classes[i] as usize][(27 - a) % 27] = true;
                    j += 1;
                }
                i += 1;
            }
            row += 1;
        }
        PdTable { allowed }
    }

    #[inline]
    pub fn allows(&self, n_mod_9: usize, a_mod_27: usize) -> bool {
        self.allowed[n_mod_9][a_mod_27]
    }

    /// Allowed residues for the row of `n mod 9`, in increasing order.
    pub fn row(&self, n_mod_9: usize) -> Vec<u8> {
        (0..27u8).filter(|&a| self.allowed[n_mod_9][a as usize]).collect()
    }
}

impl Default for PdTable {
    fn default() -> Self {
        Self::new()
    }
}

pub static PD_TABLE: PdTable = PdTable::new();

/// The unit criterion on residues: `a ≡ 0 (mod 9)`, or `a ≡ ±2 (mod 9)` for
/// norm −1, or `a ≡ ±1 (mod 27)` for norm +1.
pub fn unit_criterion(a_mod_27: u64, epsilon: i8) -> bool {
    let a9 = a_mod_27 % 9;
    if a9 == 0 {
        return true;
    }
    match epsilon {
        -1 => a9 == 2 || a9 == 7,
        1 => a_mod_27 == 1 || a_mod_27 == 26,
        _ => false,
    }
}

/// Whether the real cube root of the fundamental unit lies in the ring class
/// field of `Z[√-3d]`.
pub fn unit_root_in_m(fu: &FundUnit) -> bool {
    let (a, _) = fu.elem.half_residue(27).expect("27 is odd");
    unit_criterion(a, fu.epsilon)
}

/// Signed cube root of the norm, if the norm is a cube.
pub fn norm_cube_root(u: &QuadElem) -> Option<BigInt> {
    arith::exact_cbrt(&u.norm())
}

/// `P_d` membership; the norm must be a cube.
pub fn pd_member(u: &QuadElem) -> Result<bool> {
    let n = norm_cube_root(u)
        .ok_or_else(|| domain(format!("norm of {u} is not a cube")))?;
    let n9 = n.mod_floor(&BigInt::from(9)).to_usize().expect("residue");
    let (a, _) = u.half_residue(27)?;
    Ok(PD_TABLE.allows(n9, a as usize))
}

/// True when `P_d` is applied to a half-integral element with even `n`, a
/// case the table's source leaves unaddressed.
pub fn pd_convention_flag(u: &QuadElem) -> bool {
    u.den() == 2 && norm_cube_root(u).is_some_and(|n| n.is_even())
}

/// Witness `u = n·ρ` with `N(ρ) = n`, placing `u` in `R_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RdWitness {
    #[serde(serialize_with = "decimal")]
    pub n: BigInt,
    #[serde(serialize_with = "decimal")]
    pub r: BigInt,
    #[serde(serialize_with = "decimal")]
    pub s: BigInt,
    #[serde(serialize_with = "crate::json::decimal")]
    pub den: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SdClassification {
    pub in_sd: bool,
    pub in_sd_star: bool,
    pub rd_witness: Option<RdWitness>,
    #[serde(serialize_with = "crate::json::decimal_opt")]
    pub n: Option<BigInt>,
    pub reasons: Vec<String>,
}

impl SdClassification {
    pub fn in_rd(&self) -> bool {
        self.rd_witness.is_some()
    }
}

/// `R_d` witness: `n | u` and `N(u/n) = n`.
pub fn rd_witness(u: &QuadElem) -> Option<RdWitness> {
    let n = norm_cube_root(u)?;
    if n.is_zero() {
        return None;
    }
    let rho = u.div_int(&n)?;
    (rho.norm() == n).then(|| RdWitness {
        n,
        r: rho.x().clone(),
        s: rho.y().clone(),
        den: rho.den(),
    })
}

pub fn classify_sd(u: &QuadElem) -> SdClassification {
    let mut reasons = Vec::new();
    let n = norm_cube_root(u);
    if u.is_zero() {
        reasons.push("zero element".to_string());
    }
    if n.is_none() {
        reasons.push("norm is not a cube".to_string());
    }
    if !u.is_zero() && quadratic::is_cube_in_order(u).is_some() {
        reasons.push("element is a cube in O(d)".to_string());
    }
    let content = if u.is_zero() {
        None
    } else {
        Some(quadratic::rational_prime_content(u))
    };
    if let Some(content) = &content {
        for (p, e) in &content.factors {
            if *e >= 3 {
                reasons.push(format!("divisible by {p}^3"));
            }
        }
    }
    let in_sd = reasons.is_empty();
    let d = BigInt::from(u.d());
    let in_sd_star = in_sd
        && content
            .as_ref()
            .is_some_and(|c| c.primes().all(|p| (&d % p).is_zero()));
    if in_sd && !in_sd_star {
        reasons.push("has a content prime not dividing d".to_string());
    }
    SdClassification {
        in_sd,
        in_sd_star,
        rd_witness: rd_witness(u),
        n,
        reasons,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::fundamental_unit;

    fn q(d: u64, x: i64, y: i64, den: i64) -> QuadElem {
        QuadElem::new(d, x, y, den).unwrap()
    }

    #[test]
    fn table_rows() {
        assert_eq!(PD_TABLE.row(1), vec![0, 1, 9, 18, 26]);
        assert_eq!(PD_TABLE.row(0), vec![4, 5, 13, 14, 22, 23]);
        assert_eq!(PD_TABLE.row(3), PD_TABLE.row(6));
        assert_eq!(PD_TABLE.row(2), PD_TABLE.row(8));
        for n in 0..9 {
            let row = PD_TABLE.row(n);
            assert!(row.iter().all(|a| row.contains(&((27 - a) % 27))));
        }
    }

    #[test]
    fn unit_criterion_examples() {
        assert!(!unit_root_in_m(&fundamental_unit(21).unwrap()));
        assert_eq!(fundamental_unit(21).unwrap().elem.half_residue(27).unwrap().0, 16);
        assert!(unit_root_in_m(&fundamental_unit(79).unwrap()));
        for a in [0, 9, 18] {
            assert!(unit_criterion(a, 1));
            assert!(unit_criterion(a, -1));
        }
        assert!(!unit_root_in_m(&fundamental_unit(2).unwrap()));
    }

    #[test]
    fn pd_examples() {
        assert!(pd_member(&q(142, 13, 1, 1)).unwrap());
        assert!(!pd_member(&q(79, 17, 2, 1)).unwrap());
        assert!(!pd_member(&q(229, 11, 1, 2)).unwrap());
        assert_eq!(q(229, 11, 1, 2).half_residue(27).unwrap().0, 19);
        assert!(pd_member(&q(2, 1, 2, 1)).is_err());
    }

    #[test]
    fn pd_depends_only_on_residues() {
        // μ = 1 + 27k√d has μ³ ≡ 1 and N(μ) ≡ 1 (mod 27), so u·μ³ has the
        // same (n mod 9, a mod 27) as u while every coordinate changes
        for u in [q(142, 13, 1, 1), q(79, 17, 2, 1), q(229, 11, 1, 2), q(235, 28, 3, 1)] {
            for k in [1i64, -2, 5] {
                let mu = q(u.d(), 1, 27 * k, 1);
                let v = &u * &mu.pow(3);
                assert_ne!(v, u);
                assert_eq!(pd_member(&v).unwrap(), pd_member(&u).unwrap(), "u = {u}, k = {k}");
            }
        }
    }

    #[test]
    fn classification_examples() {
        let c = classify_sd(&q(79, 1376, 387, 1));
        assert!(c.in_sd);
        assert!(!c.in_sd_star);
        assert!(c.rd_witness.is_none());
        assert_eq!(c.n, Some(BigInt::from(-215)));

        let c = classify_sd(&q(5, 31, 155, 2));
        let w = c.rd_witness.expect("R_5 witness");
        assert_eq!(w.n, BigInt::from(-31));

        let c = classify_sd(&q(235, 28, 3, 1));
        assert!(c.in_sd_star);
        assert_eq!(c.n, Some(BigInt::from(-11)));

        let c = classify_sd(&q(2, 7, 5, 1));
        assert!(!c.in_sd);
        assert!(c.reasons.iter().any(|r| r.contains("cube in O(d)")));

        let c = classify_sd(&q(2, 27, 0, 1));
        assert!(!c.in_sd);
    }
}

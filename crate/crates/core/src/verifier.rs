//! Command-level drivers behind the `hasse` binary. Each returns plain
//! serializable rows plus a pass/fail summary; formatting is the caller's job.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::census::{run_census, CensusResult};
use crate::class_numbers::{class_number_imaginary, class_number_real, disc_f, verify_degrees, DegreeReport};
use crate::criteria::{classify_sd, pd_convention_flag, pd_member, unit_root_in_m};
use crate::cubic::{verify_discriminant, DiscReport};
use crate::error::{usage, Result};
use crate::json::decimal;
use crate::quadratic::{c_of, fundamental_unit, QuadElem};
use crate::splitting::{membership_test, residuacity_crosscheck, Crosscheck, CrosscheckStatus, Verdict};

fn check_d(d: u64) -> Result<()> {
    if d < 2 || !arith::is_squarefree(d) {
        return Err(usage(format!("d must be a squarefree integer > 1, got {d}")));
    }
    Ok(())
}

fn squarefree_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&d| arith::is_squarefree(d)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitSummary {
    pub display: String,
    #[serde(serialize_with = "decimal")]
    pub x: BigInt,
    #[serde(serialize_with = "decimal")]
    pub y: BigInt,
    #[serde(serialize_with = "crate::json::decimal")]
    pub den: u8,
    #[serde(serialize_with = "crate::json::decimal")]
    pub epsilon: i8,
    #[serde(serialize_with = "decimal")]
    pub a_mod_27: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    #[serde(serialize_with = "decimal")]
    pub d: u64,
    pub fundamental_unit: UnitSummary,
    pub in_m: bool,
    #[serde(serialize_with = "decimal")]
    pub h_f: u64,
    #[serde(serialize_with = "decimal")]
    pub h_d: u64,
    pub discriminant: DiscReport,
    pub degrees: DegreeReport,
    pub crosscheck: Crosscheck,
    pub pass: bool,
}

/// Everything known about `d` in one record.
pub fn cmd_report(d: u64, trials: usize, bound: u64) -> Result<Report> {
    check_d(d)?;
    let fu = fundamental_unit(d)?;
    let (a_mod_27, _) = fu.elem.half_residue(27)?;
    let discriminant = verify_discriminant(d)?;
    let degrees = verify_degrees(d)?;
    let crosscheck = residuacity_crosscheck(d, trials, bound)?;
    let pass = discriminant.pass
        && (degrees.pass || degrees.edge_case.is_some())
        && crosscheck.status == CrosscheckStatus::Agree;
    Ok(Report {
        d,
        fundamental_unit: UnitSummary {
            display: fu.elem.to_string(),
            x: fu.elem.x().clone(),
            y: fu.elem.y().clone(),
            den: fu.elem.den(),
            epsilon: fu.epsilon,
            a_mod_27,
        },
        in_m: unit_root_in_m(&fu),
        h_f: class_number_imaginary(disc_f(d))?,
        h_d: class_number_real(d)?,
        discriminant,
        degrees,
        crosscheck,
        pass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    /// `3 ∤ d`
    No3,
    /// `3 | d`
    Div3,
}

impl ScanMode {
    pub fn admits(self, d: u64) -> bool {
        match self {
            ScanMode::No3 => d % 3 != 0,
            ScanMode::Div3 => d % 3 == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    #[serde(serialize_with = "decimal")]
    pub d: u64,
    #[serde(serialize_with = "decimal")]
    pub h_f: u64,
    pub three_divides_h_f: bool,
    pub in_m: bool,
    /// A cubic extension `E` with `D(E) = D(F)` comes from `∛ε` exactly when
    /// `v ∈ M`.
    pub hasse_witness: bool,
}

impl ScanRow {
    /// `v ∈ M ⟹ 3 | h_F`.
    pub fn consistent(&self) -> bool {
        !self.in_m || self.three_divides_h_f
    }

    /// `3 | h_F` without the unit explaining it.
    pub fn is_counterexample(&self) -> bool {
        self.three_divides_h_f && !self.in_m
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanResult {
    pub mode: ScanMode,
    pub rows: Vec<ScanRow>,
    #[serde(serialize_with = "crate::json::decimal_opt")]
    pub smallest_counterexample: Option<u64>,
    pub invariant_holds: bool,
}

pub fn scan_row(d: u64) -> Result<ScanRow> {
    let h_f = class_number_imaginary(disc_f(d))?;
    let in_m = unit_root_in_m(&fundamental_unit(d)?);
    Ok(ScanRow {
        d,
        h_f,
        three_divides_h_f: h_f % 3 == 0,
        in_m,
        hasse_witness: in_m,
    })
}

/// Rows for every squarefree `d` in `[min, max]` admitted by `mode`.
pub fn cmd_scan(min: u64, max: u64, mode: ScanMode) -> Result<ScanResult> {
    if min > max {
        return Err(usage(format!("empty range {min}..{max}")));
    }
    let ds: Vec<u64> = squarefree_in(min, max).into_iter().filter(|&d| mode.admits(d)).collect();
    let rows = ds.par_iter().map(|&d| scan_row(d)).collect::<Result<Vec<_>>>()?;
    Ok(ScanResult {
        mode,
        smallest_counterexample: rows.iter().find(|r| r.is_counterexample()).map(|r| r.d),
        invariant_holds: rows.iter().all(ScanRow::consistent),
        rows,
    })
}

pub fn cmd_census() -> CensusResult {
    run_census()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSummary {
    pub rows: Vec<DegreeReport>,
    #[serde(serialize_with = "crate::json::decimal_vec")]
    pub failures: Vec<u64>,
    #[serde(serialize_with = "crate::json::decimal_vec")]
    pub edge_cases: Vec<u64>,
}

impl DegreeSummary {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Ring against ray class field degrees over a range; annotated edge rows are
/// reported without failing.
pub fn cmd_degrees(min: u64, max: u64) -> Result<DegreeSummary> {
    if min > max {
        return Err(usage(format!("empty range {min}..{max}")));
    }
    let rows = squarefree_in(min, max)
        .par_iter()
        .map(|&d| verify_degrees(d))
        .collect::<Result<Vec<_>>>()?;
    let failures = rows.iter().filter(|r| !r.pass && r.edge_case.is_none()).map(|r| r.d).collect();
    let edge_cases = rows.iter().filter(|r| r.edge_case.is_some()).map(|r| r.d).collect();
    Ok(DegreeSummary {
        rows,
        failures,
        edge_cases,
    })
}

pub fn cmd_crosscheck(d: u64, trials: usize, bound: u64) -> Result<Crosscheck> {
    check_d(d)?;
    residuacity_crosscheck(d, trials, bound)
}

/// Statements a conjecture row is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statement {
    /// `u ∈ S_d*`, `3 ∤ N(u)`, `3 ∤ h(d)`: `ν ∈ M ⟺ u ∈ P_d`. Proved.
    StarCriterion,
    /// `u ∈ S_d`, `3 ∤ N(u)`, `3 ∤ h(d)`: `ν ∈ M_c ⟺ u ∈ P_d`, conditional
    /// on the conductor conjecture.
    ConductorCriterion,
    /// `3 ∤ N(u)`: `ν ∈ M_c ⟺ u ∈ P_d` with no class number condition.
    ConductorConjecture,
    /// `ν ∈ M_3c` for every `u ∈ S_d`.
    TripledConductor,
}

impl Statement {
    /// Only proved statements turn a mismatch into a hard failure.
    pub fn is_proved(self) -> bool {
        self == Statement::StarCriterion
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureRow {
    #[serde(serialize_with = "decimal")]
    pub d: u64,
    #[serde(serialize_with = "decimal")]
    pub x: BigInt,
    #[serde(serialize_with = "decimal")]
    pub y: BigInt,
    #[serde(serialize_with = "crate::json::decimal")]
    pub den: u8,
    #[serde(serialize_with = "decimal")]
    pub n: BigInt,
    #[serde(serialize_with = "decimal")]
    pub c: BigInt,
    pub in_sd_star: bool,
    pub in_rd: bool,
    pub pd_member: bool,
    /// `P_d` applied to a half-integer with even `n`.
    pub pd_convention_flag: bool,
    #[serde(serialize_with = "decimal")]
    pub h_d: u64,
    pub verdict_m: Verdict,
    pub verdict_mc: Verdict,
    pub verdict_m3c: Verdict,
    pub consistent_with: Vec<Statement>,
    pub violations: Vec<Statement>,
    pub hard_failure: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureSummary {
    pub rows: Vec<ConjectureRow>,
    #[serde(serialize_with = "crate::json::decimal")]
    pub hard_failures: usize,
    #[serde(serialize_with = "crate::json::decimal")]
    pub evidence_rows: usize,
}

/// Elements `(x + y√d)/den` of `S_d` with `|x| ≤ bound`, `1 ≤ y ≤ bound`.
/// `−u` has the same cube root up to sign, so `y > 0` loses nothing.
pub fn sd_samples(d: u64, bound: i64) -> Vec<QuadElem> {
    let mut out = Vec::new();
    for den in [1i64, 2] {
        for y in 1..=bound {
            for x in -bound..=bound {
                let Ok(u) = QuadElem::new(d, x, y, den) else { continue };
                if u.den() as i64 != den {
                    continue;
                }
                if arith::exact_cbrt(&u.norm()).is_none() {
                    continue;
                }
                if classify_sd(&u).in_sd {
                    out.push(u);
                }
            }
        }
    }
    out
}

/// Membership tests of `∛u` at conductors `1`, `c`, `3c` and the statements
/// they bear on.
pub fn conjecture_row(u: &QuadElem, h_d: u64, trials: usize, bound: u64) -> Result<ConjectureRow> {
    let d = u.d();
    let class = classify_sd(u);
    let n = class.n.clone().expect("S_d elements have cubic norm");
    let c = c_of(u);
    let pd = pd_member(u)?;
    let c_small: u64 = c.clone().try_into().map_err(|_| usage(format!("conductor {c} too large")))?;
    let search = |e: u64| -> Result<Verdict> {
        let k = 3 * d * e * e;
        membership_test(u, e, trials, bound.max(k.saturating_mul(1000)))
    };
    let verdict_m = search(1)?;
    let verdict_mc = if c_small == 1 { verdict_m.clone() } else { search(c_small)? };
    let verdict_m3c = search(3 * c_small)?;

    let three_free = !(&n % 3u32).is_zero();
    let mut consistent_with = Vec::new();
    let mut violations = Vec::new();
    let mut judge = |s: Statement, ok: bool| {
        if ok {
            consistent_with.push(s)
        } else {
            violations.push(s)
        }
    };
    if class.in_sd_star && three_free && h_d % 3 != 0 {
        judge(Statement::StarCriterion, verdict_m.is_member() == pd);
    }
    if three_free {
        let s = if h_d % 3 != 0 {
            Statement::ConductorCriterion
        } else {
            Statement::ConductorConjecture
        };
        judge(s, verdict_mc.is_member() == pd);
    }
    judge(Statement::TripledConductor, verdict_m3c.is_member());
    let hard_failure = violations.iter().any(|s| s.is_proved());
    Ok(ConjectureRow {
        d,
        x: u.x().clone(),
        y: u.y().clone(),
        den: u.den(),
        n,
        c,
        in_sd_star: class.in_sd_star,
        in_rd: class.rd_witness.is_some(),
        pd_member: pd,
        pd_convention_flag: pd_convention_flag(u),
        h_d,
        verdict_m,
        verdict_mc,
        verdict_m3c,
        consistent_with,
        violations,
        hard_failure,
    })
}

pub fn cmd_conjectures(min: u64, max: u64, coeff_bound: i64, trials: usize, bound: u64) -> Result<ConjectureSummary> {
    if min > max || coeff_bound < 1 {
        return Err(usage("need a nonempty d range and a positive coefficient bound"));
    }
    let per_d = squarefree_in(min, max)
        .par_iter()
        .map(|&d| {
            let h_d = class_number_real(d)?;
            sd_samples(d, coeff_bound)
                .iter()
                .map(|u| conjecture_row(u, h_d, trials, bound))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<ConjectureRow> = per_d.into_iter().flatten().collect();
    Ok(ConjectureSummary {
        hard_failures: rows.iter().filter(|r| r.hard_failure).count(),
        evidence_rows: rows.iter().filter(|r| !r.violations.is_empty() && !r.hard_failure).count(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn report_examples() {
        let r = cmd_report(21, 50, 10_000_000).unwrap();
        assert!(!r.in_m);
        assert_eq!(r.discriminant.field_disc, BigInt::from(-567));
        assert_eq!(r.fundamental_unit.a_mod_27, 16);
        let r = cmd_report(79, 50, 10_000_000).unwrap();
        assert!(r.in_m);
        assert_eq!(r.discriminant.field_disc, BigInt::from(-948));
        assert!(r.pass);
        assert!(matches!(cmd_report(4, 50, 10_000_000), Err(Error::Usage(_))));
    }

    #[test]
    fn small_scan() {
        let s = cmd_scan(2, 150, ScanMode::No3).unwrap();
        assert_eq!(s.smallest_counterexample, Some(142));
        assert!(s.invariant_holds);
        assert!(s.rows.windows(2).all(|w| w[0].d < w[1].d));
    }

    #[test]
    fn sample_rows() {
        let u = QuadElem::new(142, 13, 1, 1).unwrap();
        let row = conjecture_row(&u, class_number_real(142).unwrap(), 50, 10_000_000).unwrap();
        assert!(row.pd_member);
        assert_eq!(row.n, BigInt::from(3));

        let fu = fundamental_unit(21).unwrap();
        let row = conjecture_row(&fu.elem, class_number_real(21).unwrap(), 50, 10_000_000).unwrap();
        assert!(row.verdict_m3c.is_member());
        assert!(row.consistent_with.contains(&Statement::TripledConductor));

        let beta = QuadElem::new(5, 31, 155, 2).unwrap();
        let row = conjecture_row(&beta, class_number_real(5).unwrap(), 50, 10_000_000).unwrap();
        assert_eq!(row.n, BigInt::from(-31));
        assert!(row.in_rd);
    }

    #[test]
    fn samples_are_in_sd() {
        let s = sd_samples(79, 20);
        assert!(s.contains(&QuadElem::new(79, 17, 2, 1).unwrap()));
        assert!(s.iter().all(|u| classify_sd(u).in_sd));
    }
}

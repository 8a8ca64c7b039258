//! Exhaustive check over `(Z/27)⁵` that the `P_d` table is stable under
//! multiplication by cubes and closed under products of its elements.
//!
//! For `(r, s, x, y, d)` with `m = x² − dy² ≢ 0 (mod 3)`:
//! `β = n(r + s√d)` with `n = r² − ds²`, `μ = x + y√d`, `γ = m·μ`.
//! Cube invariance asks `β ∈ P_d ⟺ βμ³ ∈ P_d`; closure asks
//! `β, γ ∈ P_d ⟹ βγ ∈ P_d`.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::PD_TABLE;

const M: usize = 27;

/// Which property a counterexample violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusProperty {
    CubeInvariance,
    ProductClosure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub property: CensusProperty,
    /// `(r, s, x, y, d)` mod 27.
    #[serde(serialize_with = "crate::json::decimal_vec")]
    pub quintuple: [u8; 5],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusResult {
    #[serde(serialize_with = "crate::json::decimal")]
    pub master_count: u64,
    pub cube_invariance_holds: bool,
    pub product_closure_holds: bool,
    pub counterexamples: Vec<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "crate::json::decimal_opt")]
    pub elapsed_ms: Option<u64>,
}

impl CensusResult {
    pub fn pass(&self) -> bool {
        self.master_count == MASTER_COUNT && self.cube_invariance_holds && self.product_closure_holds
    }
}

/// `(2/3)·27⁵`.
pub const MASTER_COUNT: u64 = 9_565_938;

/// Counterexamples kept per run.
pub const COUNTEREXAMPLE_CAP: usize = 64;

#[derive(Default)]
struct Slice {
    master: u64,
    counterexamples: Vec<Counterexample>,
    cube_failures: u64,
    closure_failures: u64,
}

impl Slice {
    fn merge(mut self, other: Slice) -> Slice {
        self.master += other.master;
        self.cube_failures += other.cube_failures;
        self.closure_failures += other.closure_failures;
        self.counterexamples.extend(other.counterexamples);
        self.counterexamples.truncate(COUNTEREXAMPLE_CAP);
        self
    }
}

#[inline]
fn in_pd(n: usize, a: usize) -> bool {
    PD_TABLE.allows(n % 9, a % M)
}

fn run_slice(r: usize) -> Slice {
    let mut out = Slice::default();
    for s in 0..M {
        for d in 0..M {
            let n = (r * r + M * M - d * s * s % M) % M;
            let (beta_a, beta_b) = (n * r % M, n * s % M);
            let beta_in = in_pd(n, beta_a);
            for x in 0..M {
                for y in 0..M {
                    let m = (x * x + M * M - d * y * y % M) % M;
                    if m % 3 == 0 {
                        continue;
                    }
                    out.master += 1;
                    let nm = n * m % M;
                    // μ³ = (x³ + 3dxy²) + (3x²y + dy³)√d
                    let cube_a = (x * x * x + 3 * d * x * y * y) % M;
                    let cube_b = (3 * x * x * y + d * y * y * y) % M;
                    let twisted_a = (beta_a * cube_a + d * beta_b * cube_b) % M;
                    let quintuple = [r as u8, s as u8, x as u8, y as u8, d as u8];
                    if in_pd(nm, twisted_a) != beta_in {
                        out.cube_failures += 1;
                        if out.counterexamples.len() < COUNTEREXAMPLE_CAP {
                            out.counterexamples.push(Counterexample {
                                property: CensusProperty::CubeInvariance,
                                quintuple,
                            });
                        }
                    }
                    let gamma_a = m * x % M;
                    let gamma_b = m * y % M;
                    if beta_in && in_pd(m, gamma_a) {
                        let product_a = (beta_a * gamma_a + d * beta_b * gamma_b) % M;
                        if !in_pd(nm, product_a) {
                            out.closure_failures += 1;
                            if out.counterexamples.len() < COUNTEREXAMPLE_CAP {
                                out.counterexamples.push(Counterexample {
                                    property: CensusProperty::ProductClosure,
                                    quintuple,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Runs the census on the current rayon pool. Slices are merged in `r` order,
/// so the result does not depend on the thread count.
pub fn run_census() -> CensusResult {
    let start = Instant::now();
    let slices: Vec<Slice> = (0..M).into_par_iter().map(run_slice).collect();
    let total = slices.into_iter().fold(Slice::default(), Slice::merge);
    CensusResult {
        master_count: total.master,
        cube_invariance_holds: total.cube_failures == 0,
        product_closure_holds: total.closure_failures == 0,
        counterexamples: total.counterexamples,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    }
}

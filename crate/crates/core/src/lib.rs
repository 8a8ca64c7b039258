//! Exact arithmetic in real quadratic orders and the cubic extensions built
//! from their units: fundamental units, ring class field degrees, cubic
//! residuacity and field discriminants.

pub mod arith;
pub mod census;
pub mod class_numbers;
pub mod criteria;
pub mod cubic;
pub mod error;
pub mod ideals;
pub mod json;
pub mod quadratic;
pub mod splitting;
pub mod verifier;

pub use arith::{factorize, is_prime, kronecker, set_primality_seed, Factorization};
pub use census::{run_census, CensusResult};
pub use class_numbers::{class_number_imaginary, class_number_real, verify_degrees, DegreeReport};
pub use criteria::{classify_sd, pd_member, unit_root_in_m, SdClassification, PD_TABLE};
pub use cubic::{field_discriminant, min_poly_of_t, verify_discriminant, CubicPoly, DiscReport};
pub use error::{Error, Result};
pub use ideals::{cube_decompose, factor_principal, CubeDecomposition, PrimeIdealPower};
pub use quadratic::{fundamental_unit, FundUnit, QuadElem};
pub use splitting::{membership_test, residuacity_crosscheck, Crosscheck, Verdict, VerdictKind};
pub use verifier::{ScanMode, ScanRow};

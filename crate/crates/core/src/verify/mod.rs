//! Identity suites: each identity instantiated over a parameter grid and
//! checked exactly, by a second float route, or both.

mod algebraic;
mod numeric;
pub mod report;
mod spectral;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

pub use algebraic::{verify_cheb_nesting_corollary, verify_roots, verify_special_values, verify_theorem1};
pub use numeric::{verify_bejaia, verify_corollary_sums, verify_integer_identities, verify_prop2, verify_theorem2};
pub use report::{emit_report, fmt_complex, fmt_f64, CaseResult, Format, Metric, Params, Status, SuiteReport, VerifyReport};
pub use spectral::{verify_resistance, verify_resolvent, verify_wu};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const ROOTS_TOL: f64 = 1e-9;
pub const RESISTANCE_FLOAT_TOL: f64 = 1e-9;
pub const RESISTANCE_EXACT_MAX: usize = 40;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Theorem1,
    Corollary,
    Theorem2,
    SpecialValues,
    CorollarySums,
    IntegerIds,
    Prop2,
    Roots,
    Bejaia,
    Resistance,
    Resolvent,
    Wu,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Theorem1,
        Suite::Corollary,
        Suite::Theorem2,
        Suite::SpecialValues,
        Suite::CorollarySums,
        Suite::IntegerIds,
        Suite::Prop2,
        Suite::Roots,
        Suite::Bejaia,
        Suite::Resistance,
        Suite::Resolvent,
        Suite::Wu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Corollary => "corollary",
            Suite::Theorem2 => "theorem2",
            Suite::SpecialValues => "special-values",
            Suite::CorollarySums => "corollary-sums",
            Suite::IntegerIds => "integer-ids",
            Suite::Prop2 => "prop2",
            Suite::Roots => "roots",
            Suite::Bejaia => "bejaia",
            Suite::Resistance => "resistance",
            Suite::Resolvent => "resolvent",
            Suite::Wu => "wu",
        }
    }

    /// Largest grid parameter used when `--n-max` is not given.
    pub fn default_n_max(self) -> usize {
        match self {
            Suite::Theorem1 | Suite::Corollary | Suite::Prop2 => 200,
            Suite::Theorem2 => 150,
            Suite::SpecialValues | Suite::Roots => 100,
            Suite::CorollarySums => 64,
            Suite::IntegerIds => 1000,
            Suite::Bejaia => 101,
            Suite::Resistance => 2000,
            Suite::Resolvent | Suite::Wu => 512,
        }
    }

    pub fn default_tol(self) -> f64 {
        match self {
            Suite::Roots => ROOTS_TOL,
            Suite::Resistance => RESISTANCE_FLOAT_TOL,
            _ => DEFAULT_TOL,
        }
    }

    /// Runs the suite on the current rayon pool.
    pub fn run(self, n_max: usize, tol: f64) -> SuiteReport {
        match self {
            Suite::Theorem1 => verify_theorem1(n_max),
            Suite::Corollary => verify_cheb_nesting_corollary(n_max),
            Suite::Theorem2 => verify_theorem2(n_max),
            Suite::SpecialValues => verify_special_values(n_max),
            Suite::CorollarySums => verify_corollary_sums(n_max, &corollary_x_samples(), tol),
            Suite::IntegerIds => verify_integer_identities(n_max, tol),
            Suite::Prop2 => verify_prop2(n_max, tol),
            Suite::Roots => verify_roots(n_max, tol),
            Suite::Bejaia => {
                let list: Vec<u64> = (5..=n_max.max(5) as u64).step_by(2).collect();
                verify_bejaia(&list, tol).expect("odd list")
            }
            Suite::Resistance => verify_resistance(RESISTANCE_EXACT_MAX.min(n_max), n_max, tol),
            Suite::Resolvent => verify_resolvent(n_max, tol),
            Suite::Wu => verify_wu(n_max, tol),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| VerifyError::UnknownSuite(s.to_string()))
    }
}

/// `x` values for the polynomial sum identities: 1/2, 1, 3/2, 7.
pub fn corollary_x_samples() -> Vec<num_rational::BigRational> {
    use crate::exactnum::rat;
    vec![rat(1, 2), rat(1, 1), rat(3, 2), rat(7, 1)]
}

#[derive(Debug, Clone, Default)]
pub struct VerifyConfig {
    pub n_max: Option<usize>,
    pub tol: Option<f64>,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
}

/// Runs the given suites in order. Reports are identical for any `jobs`.
pub fn run(suites: &[Suite], cfg: &VerifyConfig) -> Result<VerifyReport, VerifyError> {
    if let Some(tol) = cfg.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(VerifyError::Argument(format!("tolerance {tol} must be positive")));
        }
    }
    let go = || VerifyReport {
        suites: suites
            .iter()
            .map(|&s| s.run(cfg.n_max.unwrap_or_else(|| s.default_n_max()), cfg.tol.unwrap_or_else(|| s.default_tol())))
            .collect(),
    };
    match cfg.jobs {
        Some(0) => Err(VerifyError::Argument("--jobs must be at least 1".into())),
        Some(j) => Ok(rayon::ThreadPoolBuilder::new().num_threads(j).build()?.install(go)),
        None => Ok(go()),
    }
}

/// Order-preserving parallel map over a grid.
pub(crate) fn par_cases<T, F>(grid: Vec<T>, f: F) -> Vec<CaseResult>
where
    T: Send,
    F: Fn(T) -> Vec<CaseResult> + Sync + Send,
{
    grid.into_par_iter().flat_map_iter(f).collect()
}

//! Dual-route checks of the spectral sums: circulant resistance, the
//! twisted resolvent and Wu's cosine sum.

use num_complex::Complex64;
use num_rational::BigRational;

use super::report::{fmt_f64, CaseResult, Metric, SuiteReport};
use super::par_cases;
use crate::exactnum::{rat, QuadExt};
use crate::kernels::{
    cos_pi_frac, resolvent_closed, resolvent_closed_printed, resolvent_spectral, to_f64, wu_closed, wu_spectral,
    ResolventParams,
};
use crate::params;
use crate::resistance::{
    resistance_cn12_closed, resistance_cn12_closed_f64, resistance_cn12_spectral_all, resistance_profile_exact,
    CirculantSpec, GroundedCholesky,
};

/// Sizes at which the dense float solve is compared with the closed form.
pub const SOLVE_FLOAT_SIZES: [usize; 5] = [8, 64, 256, 512, 1024];

/// Resistance on `C_N(1,2)`: exact Laplacian solve against the closed form
/// for `N <= n_exact_max`, and the float routes for `N <= n_float_max`.
pub fn verify_resistance(n_exact_max: usize, n_float_max: usize, tol: f64) -> SuiteReport {
    const SUITE: &str = "resistance";
    let n_exact_max = n_exact_max.min(n_float_max);
    let mut cases = par_cases((2..=n_exact_max).collect(), |n| {
        let profile = CirculantSpec::cn12(n).and_then(|spec| resistance_profile_exact(&spec, 0));
        let profile = match profile {
            Ok(p) => p,
            Err(e) => return vec![CaseResult::error(SUITE, params!["N" => n, "check" => "exact"], e)],
        };
        let mut out = Vec::with_capacity(2 * n);
        for (ell, solved) in profile.iter().enumerate() {
            let p = |check: &str| params!["N" => n, "ell" => ell, "check" => check];
            // irrational residue is an error of resistance_cn12_closed
            match resistance_cn12_closed(n as u64, ell as u64) {
                Ok(closed) => {
                    let solved_q = QuadExt::rational(solved.clone());
                    out.push(
                        CaseResult::exact(SUITE, p("exact"), solved, &closed, solved_q == closed)
                            .with_note("sqrt5 part of the closed form is zero"),
                    );
                }
                Err(e) => out.push(CaseResult::error(SUITE, p("exact"), e)),
            }
            out.push(match resistance_cn12_closed_f64(n as u64, ell as u64) {
                Ok(v) => CaseResult::float(SUITE, p("closed-float"), v, to_f64(solved), Metric::Relative, tol),
                Err(e) => CaseResult::error(SUITE, p("closed-float"), e),
            });
        }
        out
    });

    cases.extend(par_cases((2..=n_float_max).collect(), |n| {
        let params = params!["N" => n, "check" => "spectral"];
        let spectral = match resistance_cn12_spectral_all(n as u64) {
            Ok(v) => v,
            Err(e) => return vec![CaseResult::error(SUITE, params, e)],
        };
        let mut worst: Option<(usize, f64, f64, f64)> = None;
        for (ell, &s) in spectral.iter().enumerate().take(n / 2 + 1) {
            let c = resistance_cn12_closed_f64(n as u64, ell as u64).expect("ell < N");
            let err = Metric::Relative.apply((s - c).abs(), c.abs());
            if worst.is_none_or(|w| err > w.3) {
                worst = Some((ell, s, c, err));
            }
        }
        let (ell, s, c, _) = worst.expect("N >= 2");
        vec![CaseResult::float(SUITE, params, s, c, Metric::Relative, tol)
            .with_note(format!("worst over ell=0..{}: ell={ell}", n / 2))]
    }));

    let sizes: Vec<usize> = SOLVE_FLOAT_SIZES.into_iter().filter(|&n| n <= n_float_max).collect();
    cases.extend(par_cases(sizes, |n| {
        let chol = CirculantSpec::cn12(n).and_then(|spec| GroundedCholesky::new(&spec, 0));
        let chol = match chol {
            Ok(c) => c,
            Err(e) => return vec![CaseResult::error(SUITE, params!["N" => n, "check" => "solve-float"], e)],
        };
        let mut ells = vec![1, n / 4, n / 2, n - 1];
        ells.dedup();
        ells.into_iter()
            .map(|ell| {
                let params = params!["N" => n, "ell" => ell, "check" => "solve-float"];
                match (chol.resistance_to_ground(ell), resistance_cn12_closed_f64(n as u64, ell as u64)) {
                    (Ok(v), Ok(c)) => CaseResult::float(SUITE, params, v, c, Metric::Relative, tol),
                    (Err(e), _) => CaseResult::error(SUITE, params, e),
                    (_, Err(e)) => CaseResult::error(SUITE, params, e),
                }
            })
            .collect()
    }));
    SuiteReport::new(SUITE, cases)
}

pub const RESOLVENT_BETAS: [(i64, i64); 3] = [(0, 1), (1, 4), (1, 2)];

pub fn resolvent_s_values() -> [Complex64; 5] {
    [
        Complex64::new(0.5, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(5.0, 0.0),
        Complex64::new(3.0, 4.0),
    ]
}

/// `l` values `0, 1, floor(m/2), m-1`, deduplicated and below `m`.
pub fn resolvent_ells(m: usize) -> Vec<usize> {
    let mut ells: Vec<usize> = vec![0, 1, m / 2, m.saturating_sub(1)].into_iter().filter(|&l| l < m).collect();
    ells.sort_unstable();
    ells.dedup();
    ells
}

/// Spectral sum against the corrected closed form, and against the printed
/// closed form, which is tagged as a known failure for `beta != 0, l >= 1`.
pub fn verify_resolvent(m_max: usize, tol: f64) -> SuiteReport {
    const SUITE: &str = "resolvent";
    let grid: Vec<(usize, (i64, i64))> =
        (1..=m_max).flat_map(|m| RESOLVENT_BETAS.into_iter().map(move |b| (m, b))).collect();
    let cases = par_cases(grid, |(m, (bn, bd))| {
        let beta: BigRational = rat(bn, bd);
        let mut out = Vec::new();
        for ell in resolvent_ells(m) {
            for s in resolvent_s_values() {
                let p = |form: &str| {
                    params!["m" => m, "beta" => beta.to_string(), "ell" => ell, "s" => super::fmt_complex(s), "form" => form]
                };
                let rp = match ResolventParams::new(m, beta.clone(), ell, s) {
                    Ok(rp) => rp,
                    Err(e) => {
                        out.push(CaseResult::error(SUITE, p("corrected"), e));
                        continue;
                    }
                };
                let spectral = resolvent_spectral(&rp);
                let one = |form: &str, closed: Result<Complex64, crate::kernels::KernelError>| match (&spectral, closed) {
                    (Ok(a), Ok(b)) => CaseResult::float_complex(SUITE, p(form), *a, b, Metric::Mixed, tol),
                    (Err(e), _) => CaseResult::error(SUITE, p(form), e),
                    (_, Err(e)) => CaseResult::error(SUITE, p(form), e),
                };
                out.push(one("corrected", resolvent_closed(&rp)));
                let printed = one("printed", resolvent_closed_printed(&rp));
                out.push(if bn != 0 && ell >= 1 { printed.expect_failure() } else { printed });
            }
        }
        out
    });
    SuiteReport::new(SUITE, cases)
}

/// The `lambda` grid with display names.
pub fn wu_lambdas() -> [(&'static str, f64); 4] {
    let ln_phi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    [("0.1", 0.1), ("1", 1.0), ("3logphi", 3.0 * ln_phi), ("10", 10.0)]
}

/// `(1/m) sum_j 1/(cosh lambda - cos(2 j pi/m))`, the size of the largest
/// possible summand total; divided by the value it gives the condition
/// number of the spectral sum.
fn wu_abs_sum(m: usize, lambda: f64) -> f64 {
    let c = lambda.cosh();
    let mi = m as i128;
    (0..mi).map(|j| 1.0 / (c - cos_pi_frac(2 * j, mi))).sum::<f64>() / m as f64
}

/// Spectral against closed form for every `l < m`; one record per
/// `(m, lambda)` carrying the worst `l`.
pub fn verify_wu(m_max: usize, tol: f64) -> SuiteReport {
    const SUITE: &str = "wu";
    let grid: Vec<(usize, usize)> = (1..=m_max).flat_map(|m| (0..4).map(move |li| (m, li))).collect();
    let cases = par_cases(grid, |(m, li)| {
        let (name, lambda) = wu_lambdas()[li];
        let params = params!["m" => m, "lambda" => name];
        let abs_sum = wu_abs_sum(m, lambda);
        let mut failing = 0usize;
        let mut worst: Option<(usize, f64, f64, f64)> = None;
        for ell in 0..m {
            let (s, c) = match (wu_spectral(m, ell, lambda), wu_closed(m, ell, lambda)) {
                (Ok(s), Ok(c)) => (s, c),
                (Err(e), _) | (_, Err(e)) => return vec![CaseResult::error(SUITE, params, e)],
            };
            let err = Metric::Relative.apply((s - c).abs(), c.abs());
            if err > tol {
                failing += 1;
            }
            if worst.is_none_or(|w| err > w.3) {
                worst = Some((ell, s, c, err));
            }
        }
        let (ell, s, c, _) = worst.expect("m >= 1");
        let cond = abs_sum / c.abs() * f64::EPSILON;
        vec![CaseResult::float(SUITE, params, s, c, Metric::Relative, tol)
            .with_note(format!("worst ell={ell}; failing={failing}/{m}; cond*eps={}", fmt_f64(cond)))]
    });
    SuiteReport::new(SUITE, cases)
}

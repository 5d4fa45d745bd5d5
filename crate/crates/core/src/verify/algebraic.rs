//! Polynomial residual suites, special values and the root test.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::report::{fmt_f64, CaseResult, Params, Status, SuiteReport};
use super::par_cases;
use crate::exactnum::{int, rat, QuadExt};
use crate::kernels::{chebyshev_values, cos_pi_frac, to_f64};
use crate::params;
use crate::polyfam::{clenshaw, family_at, family_table, DensePoly, Family};
use crate::sequences::{fib_hyp, seq_table, HypMode, SeqKind};

fn residual_case(suite: &str, params: Params, residual: &DensePoly) -> CaseResult {
    CaseResult::exact(suite, params, residual, "0", residual.is_zero()).with_note("lhs is the residual polynomial")
}

fn sign(even: bool) -> i64 {
    if even {
        1
    } else {
        -1
    }
}

/// Cross-multiplied residuals of the two Chebyshev/Fibonacci/Lucas ratio
/// identities, for `n = 1..=n_max`.
pub fn verify_theorem1(n_max: usize) -> SuiteReport {
    const SUITE: &str = "theorem1";
    let n_max = n_max.max(1);
    let arg = DensePoly::from_ints(&[1, 0, 2]);
    let t = family_at(Family::ChebT, &arg, n_max);
    let u = family_at(Family::ChebU, &arg, n_max - 1);
    let lucas2 = family_table(Family::PellLucas, n_max);
    let fib2 = family_table(Family::Pell, n_max);
    let four_x_x2p1 = DensePoly::from_ints(&[0, 4, 0, 4]);
    let x = DensePoly::x();
    let cases = par_cases((1..=n_max).collect(), |n| {
        let odd = n % 2 == 1;
        // (-1)^{n-1}
        let c1 = DensePoly::from_ints(&[sign(odd)]);
        let f1 = &(&lucas2[n] * &(&t[n] + &c1)) - &(&(&four_x_x2p1 * &fib2[n]) * &u[n - 1]);
        let c2 = DensePoly::from_ints(&[-sign(odd)]);
        let f2 = &(&fib2[n] * &(&t[n] + &c2)) - &(&(&x * &lucas2[n]) * &u[n - 1]);
        vec![
            residual_case(SUITE, params!["n" => n, "eq" => "F1"], &f1),
            residual_case(SUITE, params!["n" => n, "eq" => "F2"], &f2),
        ]
    });
    SuiteReport::new(SUITE, cases)
}

/// The nested-argument corollary in its printed and corrected forms.
pub fn verify_cheb_nesting_corollary(n_max: usize) -> SuiteReport {
    const SUITE: &str = "corollary";
    let n_max = n_max.max(1);
    let arg = DensePoly::from_ints(&[-1, 0, 2]);
    let t = family_table(Family::ChebT, n_max);
    let u = family_table(Family::ChebU, n_max - 1);
    let tt = family_at(Family::ChebT, &arg, n_max);
    let uu = family_at(Family::ChebU, &arg, n_max - 1);
    let x_x2m1 = DensePoly::from_ints(&[0, -1, 0, 1]);
    let one = DensePoly::one();
    let cases = par_cases((1..=n_max).collect(), |n| {
        let uu_prod = &(&u[n - 1] * &uu[n - 1]) * &x_x2m1;
        let printed = &(&t[n] * &(&one - &tt[n])) - &uu_prod;
        let corrected = &(&t[n] * &(&tt[n] - &one)) - &uu_prod.scale(&int(2));
        vec![
            residual_case(SUITE, params!["n" => n, "form" => "printed"], &printed).expect_failure(),
            residual_case(SUITE, params!["n" => n, "form" => "corrected"], &corrected),
        ]
    });
    SuiteReport::new(SUITE, cases)
}

fn big(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// `T_0..=T_n` and `U_0..=U_n` at a point of `Q(sqrt d)`.
fn chebyshev_quad(z: &QuadExt, n: usize) -> (Vec<QuadExt>, Vec<QuadExt>) {
    let two_z = z.scale(&int(2));
    let mut t = vec![QuadExt::one(), z.clone()];
    let mut u = vec![QuadExt::one(), two_z.clone()];
    for k in 1..n {
        t.push(&(&two_z * &t[k]) - &t[k - 1]);
        u.push(&(&two_z * &u[k]) - &u[k - 1]);
    }
    t.truncate(n + 1);
    u.truncate(n + 1);
    (t, u)
}

fn sqrt5_times(r: BigRational) -> QuadExt {
    QuadExt::new(BigRational::zero(), r, 5)
}

/// Value identities at rational and quadratic points, the symmetry,
/// derivative and twist relations, and the Fibonacci hyperbolic values.
pub fn verify_special_values(n_max: usize) -> SuiteReport {
    const SUITE: &str = "special-values";
    let n_max = n_max.max(1);
    const PRODUCT_CAP: usize = 2000;
    let idx_max = (4 * n_max + 4).max(2 * PRODUCT_CAP) + 2;
    let f = seq_table(SeqKind::Fib, idx_max);
    let l = seq_table(SeqKind::Lucas, idx_max);
    let p = seq_table(SeqKind::Pell, 2 * n_max);
    let q = seq_table(SeqKind::PellLucasHalf, 2 * n_max);
    let (fr, lr) = (|k: usize| big(&f[k]), |k: usize| big(&l[k]));
    let half = rat(1, 2);
    let mut cases = Vec::new();

    let (u32, t32) = chebyshev_values(&rat(3, 2), n_max);
    let (u72, t72) = chebyshev_values(&rat(7, 2), n_max);
    let (u3, t3) = chebyshev_values(&int(3), n_max);
    let (t_r5h, u_r5h) = chebyshev_quad(&sqrt5_times(half.clone()), n_max);
    let (t_r5, u_r5) = chebyshev_quad(&QuadExt::sqrt_of(5), n_max);
    for n in 0..=n_max {
        let even = n % 2 == 0;
        let mut rat_case = |id: &str, lhs: &BigRational, rhs: BigRational| {
            cases.push(CaseResult::exact(SUITE, params!["id" => id, "n" => n], lhs, &rhs, *lhs == rhs));
        };
        rat_case("CFL1-T", &t32[n], lr(2 * n) * &half);
        rat_case("CFL1-U", &u32[n], fr(2 * n + 2));
        rat_case("CFL2-T", &t72[n], lr(4 * n) * &half);
        rat_case("CFL2-U", &u72[n], fr(4 * n + 4) / int(3));
        if n >= 1 {
            rat_case("CPL1-U", &u3[n - 1], big(&p[2 * n]) * &half);
            rat_case("CPL1-T", &t3[n], big(&q[2 * n]));
        }
        let mut quad_case = |id: &str, lhs: &QuadExt, rhs: QuadExt| {
            cases.push(CaseResult::exact(SUITE, params!["id" => id, "n" => n], lhs, &rhs, *lhs == rhs));
        };
        let cfl3_t = if even { (lr(n) * &half).into() } else { sqrt5_times(fr(n) * &half) };
        let cfl3_u = if even { lr(n + 1).into() } else { sqrt5_times(fr(n + 1)) };
        let cfl4_t = if even { (lr(3 * n) * &half).into() } else { sqrt5_times(fr(3 * n) * &half) };
        let cfl4_u = if even { (lr(3 * n + 3) / int(4)).into() } else { sqrt5_times(fr(3 * n + 3) / int(4)) };
        quad_case("CFL3-T", &t_r5h[n], cfl3_t);
        quad_case("CFL3-U", &u_r5h[n], cfl3_u);
        quad_case("CFL4-T", &t_r5[n], cfl4_t);
        quad_case("CFL4-U", &u_r5[n], cfl4_u);
        // sFh(k) = F_{2k}, cFh(k) = F_{2k+1}
        let k = n as i64;
        quad_case("Fh2-s", &fib_hyp(2 * k, HypMode::Sinh), fr(2 * n).into());
        quad_case("Fh2-c", &fib_hyp(2 * k + 1, HypMode::Cosh), fr(2 * n + 1).into());
    }

    // T_n(L_{2m}/2) = L_{2nm}/2 and U_{n-1}(L_{2m}/2) = F_{2nm}/F_{2m}
    let pairs: Vec<usize> = (1..=n_max).collect();
    cases.extend(par_cases(pairs, |m| {
        let n_cap = n_max.min(PRODUCT_CAP / m);
        if n_cap == 0 {
            return Vec::new();
        }
        let (u, t) = chebyshev_values(&(lr(2 * m) * &half), n_cap);
        let mut out = Vec::with_capacity(2 * n_cap);
        for n in 1..=n_cap {
            let rhs = lr(2 * n * m) * &half;
            out.push(CaseResult::exact(SUITE, params!["id" => "chebluc", "m" => m, "n" => n], &t[n], &rhs, t[n] == rhs));
            let rhs = fr(2 * n * m) / fr(2 * m);
            out.push(CaseResult::exact(
                SUITE,
                params!["id" => "chebfib", "m" => m, "n" => n],
                &u[n - 1],
                &rhs,
                u[n - 1] == rhs,
            ));
        }
        out
    }));

    cases.extend(polynomial_relations(n_max.min(100)));
    SuiteReport::new(SUITE, cases)
}

/// Symmetry, derivative and imaginary-argument relations as polynomial
/// identities.
fn polynomial_relations(n_max: usize) -> Vec<CaseResult> {
    const SUITE: &str = "special-values";
    let t = family_table(Family::ChebT, n_max);
    let u = family_table(Family::ChebU, n_max);
    let fib = family_table(Family::Fib, n_max);
    let luc = family_table(Family::Lucas, n_max);
    let pell = family_table(Family::Pell, n_max);
    let pell_lucas = family_table(Family::PellLucas, n_max);
    let x = DensePoly::x();
    let x2p4 = DensePoly::from_ints(&[4, 0, 1]);
    let minus_one = int(-1);
    let mut out = Vec::new();
    let check = |id: &str, n: usize, lhs: &DensePoly, rhs: &DensePoly| {
        CaseResult::exact(SUITE, params!["id" => id, "n" => n], lhs, rhs, lhs == rhs)
    };
    for n in 0..=n_max {
        let s = if n % 2 == 0 { int(1) } else { minus_one.clone() };
        out.push(check("sym1", n, &t[n].compose_scale(&minus_one), &t[n].scale(&s)));
        out.push(check("sym2", n, &u[n].compose_scale(&minus_one), &u[n].scale(&s)));
        if n == 0 {
            continue;
        }
        let nr = int(n as i64);
        out.push(check("deriv-lucas", n, &luc[n].derivative(), &fib[n].scale(&nr)));
        let lhs = &fib[n].derivative() * &x2p4;
        let rhs = &luc[n].scale(&nr) - &(&x * &fib[n]);
        out.push(check("deriv-fib", n, &lhs, &rhs));
        let twist = t[n].i_twist(n).expect("T_n has parity n").scale(&int(2));
        out.push(check("twist-lucas", n, &pell_lucas[n], &twist));
        let twist = u[n - 1].i_twist(n - 1).expect("U_{n-1} has parity n-1");
        out.push(check("twist-fib-printed", n, &pell[n], &twist.scale(&minus_one)).expect_failure());
        out.push(check("twist-fib-corrected", n, &pell[n], &twist));
    }
    out
}

/// The four root families: polynomial, index and the angles `theta_k` as
/// `(numerator, denominator)` of a multiple of pi.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RootCase {
    FibEven,
    FibOdd,
    LucasEven,
    LucasOdd,
}

impl RootCase {
    const ALL: [RootCase; 4] = [RootCase::FibEven, RootCase::FibOdd, RootCase::LucasEven, RootCase::LucasOdd];

    fn name(self) -> &'static str {
        match self {
            RootCase::FibEven => "F_2n",
            RootCase::FibOdd => "F_2n+1",
            RootCase::LucasEven => "L_2n",
            RootCase::LucasOdd => "L_2n+1",
        }
    }

    fn index(self, n: usize) -> usize {
        match self {
            RootCase::FibEven | RootCase::LucasEven => 2 * n,
            RootCase::FibOdd | RootCase::LucasOdd => 2 * n + 1,
        }
    }

    /// Angles of the nonzero root pairs; the `k = 0` root of `F_2n` and
    /// `L_2n+1` is `x = 0` and sits in the `x^k` factor.
    pub(crate) fn angles(self, n: usize) -> Vec<(i128, i128)> {
        let n = n as i128;
        match self {
            RootCase::FibEven => (1..n).map(|k| (k, 2 * n)).collect(),
            RootCase::FibOdd => (0..n).map(|k| (2 * k + 1, 2 * (2 * n + 1))).collect(),
            RootCase::LucasEven => (0..n).map(|k| (2 * k + 1, 4 * n)).collect(),
            RootCase::LucasOdd => (1..=n).map(|k| (k, 2 * n + 1)).collect(),
        }
    }
}

/// `g(2t - 2)` in the Chebyshev basis of `t`, and its l1 norm, which bounds
/// `|g|` on `[-4, 0]`.
pub(crate) fn root_form(g: &DensePoly) -> (Vec<f64>, f64) {
    let h = g.compose(&DensePoly::from_ints(&[-2, 2]));
    let coeffs: Vec<f64> = h.to_chebyshev_basis().iter().map(to_f64).collect();
    let norm = coeffs.iter().map(|c| c.abs()).sum();
    (coeffs, norm)
}

/// `g(-4 sin^2 theta)` with `theta = num pi/den`, through `t = cos 2 theta`.
pub(crate) fn eval_at_root(coeffs: &[f64], num: i128, den: i128) -> f64 {
    clenshaw(coeffs, cos_pi_frac(2 * num, den))
}

/// Zeros of the Fibonacci and Lucas polynomials at `x = +-2i sin theta_k`.
pub fn verify_roots(n_max: usize, tol: f64) -> SuiteReport {
    const SUITE: &str = "roots";
    let n_max = n_max.max(1);
    let fib = family_table(Family::Fib, 2 * n_max + 1);
    let luc = family_table(Family::Lucas, 2 * n_max + 1);
    let grid: Vec<(RootCase, usize)> =
        RootCase::ALL.into_iter().flat_map(|c| (1..=n_max).map(move |n| (c, n))).collect();
    let cases = par_cases(grid, |(case, n)| {
        let idx = case.index(n);
        let poly = match case {
            RootCase::FibEven | RootCase::FibOdd => &fib[idx],
            RootCase::LucasEven | RootCase::LucasOdd => &luc[idx],
        };
        let params = params!["case" => case.name(), "n" => n];
        let (_, g) = match poly.even_part_factor() {
            Ok(split) => split,
            Err(e) => return vec![CaseResult::error(SUITE, params, e)],
        };
        let (coeffs, norm) = root_form(&g);
        let angles = case.angles(n);
        let (worst_k, worst) = angles
            .iter()
            .enumerate()
            .map(|(k, &(num, den))| (k, eval_at_root(&coeffs, num, den).abs()))
            .fold((0, 0.0f64), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        let degree = g.degree().unwrap_or(0);
        let bound = tol * norm;
        let mut status = if worst <= bound { Status::Pass } else { Status::Fail };
        let mut note = format!(
            "roots={}, worst_k={}, norm={}, ratio={}",
            angles.len(),
            worst_k,
            fmt_f64(norm),
            fmt_f64(if norm > 0.0 { worst / norm } else { worst })
        );
        if degree != angles.len() {
            status = Status::Fail;
            note.push_str(&format!("; degree(g)={degree} differs from root count"));
        }
        vec![CaseResult {
            suite: SUITE.to_string(),
            params,
            status,
            lhs: fmt_f64(worst),
            rhs: fmt_f64(bound),
            abs_err: Some(worst),
            note,
        }]
    });
    SuiteReport::new(SUITE, cases)
}

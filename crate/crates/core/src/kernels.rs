//! Finite trigonometric sums and their Chebyshev closed forms: the resolvent
//! kernel of the discrete circle, Wu's hyperbolic identity and the sums that
//! feed the Fibonacci/Lucas/Pell corollaries.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::{int, rat, BigRational, ExactError};

/// Minimum distance between the spectral parameter and any pole.
pub const POLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("spectral parameter lies within {distance:e} of a pole")]
    Pole { distance: f64 },
    #[error("exact denominator vanishes")]
    ZeroDenominator,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot parse {input:?}: {msg}")]
    Parse { input: String, msg: String },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub type Result<T> = std::result::Result<T, KernelError>;

fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(KernelError::Domain(msg.into()))
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        iter.into_iter().for_each(|x| s.add(x));
        s
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    fn total(&self) -> Complex64 {
        Complex64::new(self.re.total(), self.im.total())
    }
}

/// `sin(pi k / n)` with the argument reduced exactly in integers to `[0, pi/4]`
/// before any rounding, so large `k/n` lose nothing to cancellation.
pub fn sin_pi_frac(k: i128, n: i128) -> f64 {
    assert!(n > 0, "denominator must be positive");
    let mut r = k.rem_euclid(2 * n);
    let sign = if r >= n {
        r -= n;
        -1.0
    } else {
        1.0
    };
    if 2 * r > n {
        r = n - r;
    }
    let v = if 4 * r <= n {
        (PI * r as f64 / n as f64).sin()
    } else {
        (PI * (n - 2 * r) as f64 / (2 * n) as f64).cos()
    };
    sign * v
}

/// `cos(pi k / n)`, reduced like [`sin_pi_frac`].
pub fn cos_pi_frac(k: i128, n: i128) -> f64 {
    sin_pi_frac(2 * k + n, 2 * n)
}

/// `e^{i pi k / n}`.
pub fn unit_pi_frac(k: i128, n: i128) -> Complex64 {
    Complex64::new(cos_pi_frac(k, n), sin_pi_frac(k, n))
}

fn sin2_pi_frac(k: i128, n: i128) -> f64 {
    let s = sin_pi_frac(k, n);
    s * s
}

/// Parses `3+4i`, `-2.5`, `4i` and the like.
pub fn parse_complex(input: &str) -> Result<Complex64> {
    let z = Complex64::from_str(input.trim()).map_err(|e| KernelError::Parse {
        input: input.to_string(),
        msg: e.to_string(),
    })?;
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(KernelError::Parse { input: input.to_string(), msg: "non-finite component".into() });
    }
    Ok(z)
}

/// Parameters of the twisted resolvent kernel on the discrete circle `X_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventParams {
    m: usize,
    beta: BigRational,
    ell: usize,
    s: Complex64,
    beta_num: i128,
    beta_den: i128,
}

impl ResolventParams {
    pub fn new(m: usize, beta: BigRational, ell: usize, s: Complex64) -> Result<Self> {
        if m == 0 {
            return domain("m must be positive");
        }
        if ell >= m {
            return domain(format!("ell = {ell} must be below m = {m}"));
        }
        if beta < BigRational::zero() || beta >= BigRational::one() {
            return domain(format!("beta = {beta} must lie in [0, 1)"));
        }
        if !s.re.is_finite() || !s.im.is_finite() {
            return domain("s must be finite");
        }
        let (beta_num, beta_den) = match (beta.numer().to_i128(), beta.denom().to_i128()) {
            (Some(p), Some(q)) if q < (1 << 40) => (p, q),
            _ => return domain("beta denominator too large"),
        };
        Ok(ResolventParams { m, beta, ell, s, beta_num, beta_den })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn beta(&self) -> &BigRational {
        &self.beta
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }

    /// `2 sin^2(pi (j + beta) / m)` for each `j`.
    fn spectrum(&self) -> impl Iterator<Item = f64> + '_ {
        let (p, q, m) = (self.beta_num, self.beta_den, self.m as i128);
        (0..m).map(move |j| 2.0 * sin2_pi_frac(j * q + p, m * q))
    }

    fn pole_distance(&self) -> f64 {
        self.spectrum().map(|lam| (self.s + lam).norm()).fold(f64::INFINITY, f64::min)
    }

    fn check_poles(&self) -> Result<()> {
        let distance = self.pole_distance();
        if distance <= POLE_TOLERANCE {
            return Err(KernelError::Pole { distance });
        }
        Ok(())
    }
}

/// `(1/m) sum_j e^{2 pi i j ell / m} / (s + 2 sin^2(pi (j + beta)/m))`.
pub fn resolvent_spectral(p: &ResolventParams) -> Result<Complex64> {
    p.check_poles()?;
    let m = p.m as i128;
    let ell = p.ell as i128;
    let mut acc = ComplexSum::default();
    for (j, lam) in (0..m).zip(p.spectrum()) {
        let phase = unit_pi_frac(2 * ((j * ell) % m), m);
        acc.add(phase / (p.s + lam));
    }
    Ok(acc.total() / m as f64)
}

const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_EXP: i32 = -600;

/// `U_0(z) ..= U_n(z)` and `T_n(z)` with a shared power-of-two scale: the true
/// value of `u[k]` is `u[k] * 2^(exps[k])`, and `T_n = t * 2^(t_exp)`.
struct ScaledChebyshev {
    u: Vec<Complex64>,
    exps: Vec<i32>,
    t: Complex64,
    t_exp: i32,
}

fn scaled_chebyshev(z: Complex64, n: usize) -> ScaledChebyshev {
    let factor = 2f64.powi(RESCALE_EXP);
    let (mut t_prev, mut t_cur) = (Complex64::one(), z);
    let (mut u_prev, mut u_cur) = (Complex64::one(), 2.0 * z);
    let mut exp = 0i32;
    let mut u = vec![u_prev];
    let mut exps = vec![0];
    if n == 0 {
        return ScaledChebyshev { u, exps, t: t_prev, t_exp: 0 };
    }
    u.push(u_cur);
    exps.push(0);
    for _ in 1..n {
        let t_next = 2.0 * z * t_cur - t_prev;
        let u_next = 2.0 * z * u_cur - u_prev;
        (t_prev, t_cur, u_prev, u_cur) = (t_cur, t_next, u_cur, u_next);
        if t_cur.norm().max(u_cur.norm()) > RESCALE_ABOVE {
            t_prev *= factor;
            t_cur *= factor;
            u_prev *= factor;
            u_cur *= factor;
            exp -= RESCALE_EXP;
        }
        u.push(u_cur);
        exps.push(exp);
    }
    ScaledChebyshev { u, exps, t: t_cur, t_exp: exp }
}

/// `e^{-2 pi i beta ell/m} (U_{m-ell-1}(s+1) + e^{2 pi i beta} U_{ell-1}(s+1)) / (T_m(s+1) - cos 2 pi beta)`.
///
/// The outer phase carries a minus sign; with `+` the two sides disagree
/// whenever `beta != 0` and `ell >= 1` (see [`resolvent_closed_printed`]).
pub fn resolvent_closed(p: &ResolventParams) -> Result<Complex64> {
    closed_with_phase(p, -1)
}

/// The closed form with outer phase `e^{+2 pi i beta ell/m}`. It agrees with
/// [`resolvent_spectral`] only when `beta = 0` or `ell = 0`.
pub fn resolvent_closed_printed(p: &ResolventParams) -> Result<Complex64> {
    closed_with_phase(p, 1)
}

fn closed_with_phase(p: &ResolventParams, phase_sign: i128) -> Result<Complex64> {
    p.check_poles()?;
    let (m, ell) = (p.m, p.ell);
    let (bp, bq) = (p.beta_num, p.beta_den);
    let cheb = scaled_chebyshev(p.s + 1.0, m);
    let rel = |k: usize| cheb.u[k] * 2f64.powi(cheb.exps[k] - cheb.t_exp);
    let twist = unit_pi_frac(2 * bp, bq);
    let mut numer = rel(m - ell - 1);
    if ell >= 1 {
        numer += twist * rel(ell - 1);
    }
    let denom = cheb.t - twist.re * 2f64.powi(-cheb.t_exp);
    if cheb.t_exp == 0 && denom.norm() <= POLE_TOLERANCE {
        return Err(KernelError::Pole { distance: denom.norm() });
    }
    let outer = unit_pi_frac(phase_sign * 2 * bp * ell as i128, bq * m as i128);
    Ok(outer * numer / denom)
}

/// `U_0(z) ..= U_n(z)` and `T_0(z) ..= T_n(z)` over the rationals.
pub fn chebyshev_values(z: &BigRational, n: usize) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut u = vec![BigRational::one()];
    let mut t = vec![BigRational::one()];
    if n >= 1 {
        u.push(z * int(2));
        t.push(z.clone());
    }
    let two_z = z * int(2);
    for k in 1..n {
        let next_u = &two_z * &u[k] - &u[k - 1];
        let next_t = &two_z * &t[k] - &t[k - 1];
        u.push(next_u);
        t.push(next_t);
    }
    (u, t)
}

/// `U_k` with the convention `U_{-1} = 0`.
fn u_or_zero(u: &[BigRational], k: i64) -> BigRational {
    if k < 0 {
        BigRational::zero()
    } else {
        u[k as usize].clone()
    }
}

/// Exact closed form for the two rational twists. With `beta = 0` any `ell`
/// is allowed; with `beta = 1/2` the outer phase is rational only at `ell = 0`.
pub fn resolvent_closed_exact(m: usize, beta: &BigRational, ell: usize, s: &BigRational) -> Result<BigRational> {
    if m == 0 || ell >= m {
        return domain(format!("need 0 <= ell < m, got m = {m}, ell = {ell}"));
    }
    let twist = if beta.is_zero() {
        int(1)
    } else if *beta == rat(1, 2) {
        if ell != 0 {
            return domain("beta = 1/2 is exact only at ell = 0");
        }
        int(-1)
    } else {
        return domain(format!("beta = {beta} has no rational closed form"));
    };
    let z = s + int(1);
    let (u, t) = chebyshev_values(&z, m);
    let denom = &t[m] - &twist;
    if denom.is_zero() {
        return Err(KernelError::ZeroDenominator);
    }
    let numer = u_or_zero(&u, m as i64 - ell as i64 - 1) + twist * u_or_zero(&u, ell as i64 - 1);
    Ok(numer / denom)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return domain(format!("lambda = {lambda} must be positive and finite"));
    }
    Ok(())
}

fn check_wu(m: usize, ell: usize, lambda: f64) -> Result<()> {
    check_lambda(lambda)?;
    if m == 0 || ell >= m {
        return domain(format!("need 0 <= ell < m, got m = {m}, ell = {ell}"));
    }
    Ok(())
}

/// `(1/m) sum_j cos(2 ell j pi/m) / (cosh lambda - cos(2 j pi/m))`.
pub fn wu_spectral(m: usize, ell: usize, lambda: f64) -> Result<f64> {
    check_wu(m, ell, lambda)?;
    let (mi, li) = (m as i128, ell as i128);
    let sh = (lambda / 2.0).sinh();
    let base = 2.0 * sh * sh;
    let sum: CompensatedSum = (0..mi)
        .map(|j| cos_pi_frac(2 * ((j * li) % mi), mi) / (base + 2.0 * sin2_pi_frac(j, mi)))
        .collect();
    Ok(sum.total() / m as f64)
}

/// `cosh((m/2 - ell) lambda) / (sinh lambda sinh(m lambda/2))`.
pub fn wu_closed(m: usize, ell: usize, lambda: f64) -> Result<f64> {
    check_wu(m, ell, lambda)?;
    let a = (m as f64 / 2.0 - ell as f64) * lambda;
    let b = m as f64 * lambda / 2.0;
    Ok(((a - b).exp() + (-a - b).exp()) / (lambda.sinh() * -(-2.0 * b).exp_m1()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SumVariant {
    /// `sum_{j=0}^{2m-1} 1/(x^2 + sin^2(j pi/2m))`
    Sumeq2,
    /// `sum_{j=0}^{2m-1} 1/(x^2 + 4 sin^2(j pi/2m))`
    Sumeq3,
    /// Same sum as [`SumVariant::Sumeq2`], paired with a Pell closed form.
    Sumeq4,
    /// `sum_{j=1}^{m-1} 1/(x^2 + sin^2(j pi/2m))`
    Seiffert,
    /// `sum_{j=1}^{2m-1} 1/(1/4 + sin^2(j pi/2m))`
    Sum3,
    /// `sum_{j=0}^{2m-1} 1/(1 + 4 sin^2(j pi/2m))`
    Sum4,
    /// `sum_{j=0}^{2m-1} 1/(1 + sin^2(j pi/2m))`
    Sum5,
    /// `(4/(5N)) sum_{j=1}^{N-1} sin^2(j ell pi/N) / (1 - (4/5) sin^2(j pi/N))`
    R1Sum,
    /// `(4/N) sum_{n=0}^{(N-1)/2} sin^2(2 n ell pi/N) / (N - 4 sin^2(n pi/N))`
    Bn1Sum,
    /// `(1/m) sum_{j=0}^{m-1} e^{2 pi i j ell/m} / (sqrt5 - 1 + 2 sin^2(pi j/m))`, real part.
    Prop2Sum,
}

impl SumVariant {
    pub const ALL: [SumVariant; 10] = [
        SumVariant::Sumeq2,
        SumVariant::Sumeq3,
        SumVariant::Sumeq4,
        SumVariant::Seiffert,
        SumVariant::Sum3,
        SumVariant::Sum4,
        SumVariant::Sum5,
        SumVariant::R1Sum,
        SumVariant::Bn1Sum,
        SumVariant::Prop2Sum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SumVariant::Sumeq2 => "sumeq2",
            SumVariant::Sumeq3 => "sumeq3",
            SumVariant::Sumeq4 => "sumeq4",
            SumVariant::Seiffert => "seiffert",
            SumVariant::Sum3 => "sum3",
            SumVariant::Sum4 => "sum4",
            SumVariant::Sum5 => "sum5",
            SumVariant::R1Sum => "r1sum",
            SumVariant::Bn1Sum => "bn1sum",
            SumVariant::Prop2Sum => "prop2sum",
        }
    }

    /// Whether the sum reads the `x` argument.
    pub fn uses_x(self) -> bool {
        matches!(self, SumVariant::Sumeq2 | SumVariant::Sumeq3 | SumVariant::Sumeq4 | SumVariant::Seiffert)
    }

    /// Whether the sum reads the `ell` argument.
    pub fn uses_ell(self) -> bool {
        matches!(self, SumVariant::R1Sum | SumVariant::Bn1Sum | SumVariant::Prop2Sum)
    }
}

impl fmt::Display for SumVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SumVariant {
    type Err = KernelError;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['_', '-'], "");
        SumVariant::ALL.into_iter().find(|v| v.name() == key).ok_or_else(|| KernelError::Parse {
            input: s.to_string(),
            msg: "unknown sum variant".into(),
        })
    }
}

/// Arguments of [`trig_sum`]; `m` is the vertex count `N` for the resistance
/// and Bejaia sums. Fields a variant does not read are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumArgs {
    pub m: u64,
    pub ell: u64,
    pub x: f64,
}

impl SumArgs {
    pub fn new(m: u64, ell: u64, x: f64) -> Self {
        SumArgs { m, ell, x }
    }
}

fn half_angle_sum(m: i128, range: std::ops::Range<i128>, a: f64, c: f64) -> f64 {
    // sum over j of 1/(a + c sin^2(j pi / 2m))
    let sum: CompensatedSum = range.map(|j| 1.0 / (a + c * sin2_pi_frac(j, 2 * m))).collect();
    sum.total()
}

pub fn trig_sum(variant: SumVariant, args: &SumArgs) -> Result<f64> {
    let SumArgs { m, ell, x } = *args;
    if m == 0 {
        return domain("m must be positive");
    }
    if variant.uses_x() && !(x > 0.0 && x.is_finite()) {
        return domain(format!("x = {x} must be positive"));
    }
    let mi = m as i128;
    let li = ell as i128;
    let x2 = x * x;
    let value = match variant {
        SumVariant::Sumeq2 | SumVariant::Sumeq4 => half_angle_sum(mi, 0..2 * mi, x2, 1.0),
        SumVariant::Sumeq3 => half_angle_sum(mi, 0..2 * mi, x2, 4.0),
        SumVariant::Seiffert => half_angle_sum(mi, 1..mi, x2, 1.0),
        SumVariant::Sum3 => half_angle_sum(mi, 1..2 * mi, 0.25, 1.0),
        SumVariant::Sum4 => half_angle_sum(mi, 0..2 * mi, 1.0, 4.0),
        SumVariant::Sum5 => half_angle_sum(mi, 0..2 * mi, 1.0, 1.0),
        SumVariant::R1Sum => {
            if m < 2 {
                return domain("N must be at least 2");
            }
            let sum: CompensatedSum = (1..mi)
                .map(|j| sin2_pi_frac((j * li) % mi, mi) / (1.0 - 0.8 * sin2_pi_frac(j, mi)))
                .collect();
            4.0 * sum.total() / (5.0 * m as f64)
        }
        SumVariant::Bn1Sum => {
            check_bn1(m, ell)?;
            let n = m as f64;
            let sum: CompensatedSum = (0..=(mi - 1) / 2)
                .map(|k| sin2_pi_frac((2 * k * li) % mi, mi) / (n - 4.0 * sin2_pi_frac(k, mi)))
                .collect();
            4.0 * sum.total() / n
        }
        SumVariant::Prop2Sum => {
            if ell >= m {
                return domain(format!("ell = {ell} must be below m = {m}"));
            }
            let shift = 5f64.sqrt() - 1.0;
            let sum: CompensatedSum = (0..mi)
                .map(|j| cos_pi_frac(2 * ((j * li) % mi), mi) / (shift + 2.0 * sin2_pi_frac(j, mi)))
                .collect();
            sum.total() / m as f64
        }
    };
    Ok(value)
}

fn check_bn1(n: u64, ell: u64) -> Result<()> {
    if n < 5 || n.is_multiple_of(2) {
        return domain(format!("N = {n} must be odd and at least 5"));
    }
    if 2 * ell > n {
        return domain(format!("ell = {ell} must satisfy ell < (N+1)/2"));
    }
    Ok(())
}

/// `(U_{N-2ell-1}(z) + U_{2ell-1}(z) - U_{N-1}(z)) / (2 T_N(z) - 2)` at `z = 1 - N/2`.
pub fn bn1_closed_cheb(n: u64, ell: u64) -> Result<BigRational> {
    check_bn1(n, ell)?;
    let z = int(1) - rat(n as i64, 2);
    let nn = n as usize;
    let (u, t) = chebyshev_values(&z, nn);
    let (ni, li) = (n as i64, ell as i64);
    let denom = &t[nn] * int(2) - int(2);
    if denom.is_zero() {
        return Err(KernelError::ZeroDenominator);
    }
    let numer = u_or_zero(&u, ni - 2 * li - 1) + u_or_zero(&u, 2 * li - 1) - &u[nn - 1];
    Ok(numer / denom)
}

/// Chebyshev form of the resistance sum on `C_N(1,2)`:
/// `(U_{N-ell-1}(-3/2) + U_{ell-1}(-3/2) - U_{N-1}(-3/2)) / (T_N(-3/2) - 1)`.
pub fn r1_closed_cheb(n: u64, ell: u64) -> Result<BigRational> {
    if n < 2 || ell >= n {
        return domain(format!("need N >= 2 and ell < N, got N = {n}, ell = {ell}"));
    }
    let nn = n as usize;
    let (u, t) = chebyshev_values(&rat(-3, 2), nn);
    let (ni, li) = (n as i64, ell as i64);
    let denom = &t[nn] - int(1);
    let numer = u_or_zero(&u, ni - li - 1) + u_or_zero(&u, li - 1) - &u[nn - 1];
    Ok(numer / denom)
}

/// Absolute error when the reference is zero, relative error otherwise.
pub fn relative_error(value: f64, reference: f64) -> f64 {
    let diff = (value - reference).abs();
    if reference == 0.0 {
        diff
    } else {
        diff / reference.abs()
    }
}

/// `BigRational` to `f64`, panicking only on values outside the float range.
pub(crate) fn to_f64(r: &BigRational) -> f64 {
    crate::exactnum::rational_to_f64(r)
        .unwrap_or_else(|| panic!("rational with {} numerator bits exceeds f64", r.numer().bits()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    fn params(m: usize, beta: BigRational, ell: usize, s: Complex64) -> ResolventParams {
        ResolventParams::new(m, beta, ell, s).unwrap()
    }

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn reduced_trig_matches_libm() {
        for n in 1..40i128 {
            for k in -90..90i128 {
                let x = PI * k as f64 / n as f64;
                assert!((sin_pi_frac(k, n) - x.sin()).abs() < 1e-13, "sin {k}/{n}");
                assert!((cos_pi_frac(k, n) - x.cos()).abs() < 1e-13, "cos {k}/{n}");
            }
        }
        assert_eq!(sin_pi_frac(1_000_000, 1_000_000), 0.0);
        assert_eq!(cos_pi_frac(1, 2), 0.0);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let s: CompensatedSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.total(), 2.0);
    }

    #[test]
    fn resolvent_examples() {
        let half = rat(1, 2);
        let v = resolvent_spectral(&params(2, half.clone(), 0, real(1.0))).unwrap();
        assert!((v - real(0.5)).norm() < TOL);
        let v = resolvent_closed(&params(2, half.clone(), 0, real(1.0))).unwrap();
        assert!((v - real(0.5)).norm() < TOL);
        let v = resolvent_spectral(&params(2, int(0), 1, real(1.0))).unwrap();
        assert!((v - real(1.0 / 3.0)).norm() < TOL);
        let v = resolvent_closed(&params(2, int(0), 1, real(1.0))).unwrap();
        assert!((v - real(1.0 / 3.0)).norm() < TOL);
        let v = resolvent_spectral(&params(1, int(0), 0, real(2.0))).unwrap();
        assert!((v - real(0.5)).norm() < TOL);
        let big = 1e7;
        let v = resolvent_closed(&params(3, int(0), 0, real(big))).unwrap();
        assert!((v.re * big - 1.0).abs() < 1e-6);
    }

    #[test]
    fn resolvent_rejects_poles() {
        // beta = 0 puts a pole at s = 0.
        let p = params(4, int(0), 1, real(0.0));
        assert!(matches!(resolvent_spectral(&p), Err(KernelError::Pole { .. })));
        assert!(matches!(resolvent_closed(&p), Err(KernelError::Pole { .. })));
        let p = params(4, int(0), 1, real(-2.0));
        assert!(resolvent_spectral(&p).is_err());
        assert!(ResolventParams::new(3, int(1), 0, real(1.0)).is_err());
        assert!(ResolventParams::new(3, int(0), 3, real(1.0)).is_err());
    }

    #[test]
    fn resolvent_exact_examples() {
        assert_eq!(resolvent_closed_exact(2, &int(0), 0, &int(1)).unwrap(), rat(2, 3));
        assert_eq!(resolvent_closed_exact(2, &rat(1, 2), 0, &int(1)).unwrap(), rat(1, 2));
        assert_eq!(resolvent_closed_exact(2, &int(0), 0, &int(0)), Err(KernelError::ZeroDenominator));
        assert!(resolvent_closed_exact(2, &rat(1, 2), 1, &int(1)).is_err());
        assert!(resolvent_closed_exact(2, &rat(1, 3), 0, &int(1)).is_err());
    }

    #[test]
    fn resolvent_exact_matches_float_routes() {
        for m in 1..40usize {
            for s in [rat(1, 2), int(1), int(2), int(5)] {
                let sf = to_f64(&s);
                for ell in 0..m {
                    let exact = to_f64(&resolvent_closed_exact(m, &int(0), ell, &s).unwrap());
                    let spec = resolvent_spectral(&params(m, int(0), ell, real(sf))).unwrap();
                    assert!((spec.re - exact).abs() <= 1e-12 * (1.0 + exact.abs()));
                    assert!(spec.im.abs() < 1e-12);
                }
                let exact = to_f64(&resolvent_closed_exact(m, &rat(1, 2), 0, &s).unwrap());
                let closed = resolvent_closed(&params(m, rat(1, 2), 0, real(sf))).unwrap();
                assert!((closed.re - exact).abs() <= 1e-12 * (1.0 + exact.abs()));
            }
        }
    }

    #[test]
    fn resolvent_closed_survives_overflowing_chebyshev_values() {
        // T_512(6) is far beyond f64 range.
        let p = params(512, rat(1, 4), 256, real(5.0));
        let a = resolvent_spectral(&p).unwrap();
        let b = resolvent_closed(&p).unwrap();
        assert!((a - b).norm() <= 1e-10 * (1.0 + b.norm()));
        assert!(b.norm().is_finite());
    }

    #[test]
    fn printed_phase_fails_for_twisted_nonzero_separation() {
        let p = params(39, rat(1, 4), 31, real(0.1));
        let spec = resolvent_spectral(&p).unwrap();
        assert!((spec - resolvent_closed(&p).unwrap()).norm() < 1e-12);
        assert!((spec - resolvent_closed_printed(&p).unwrap()).norm() > 1e-2);
        for ell in 0..7 {
            let p = params(7, int(0), ell, Complex64::new(3.0, 4.0));
            let a = resolvent_closed(&p).unwrap();
            assert!((a - resolvent_closed_printed(&p).unwrap()).norm() < 1e-15);
        }
        let p = params(7, rat(1, 2), 0, real(2.0));
        assert!((resolvent_closed(&p).unwrap() - resolvent_closed_printed(&p).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn resolvent_symmetry_at_zero_twist() {
        for m in 2..60usize {
            for ell in 1..m {
                let s = Complex64::new(3.0, 4.0);
                let a = resolvent_closed(&params(m, int(0), ell, s)).unwrap();
                let b = resolvent_closed(&params(m, int(0), m - ell, s)).unwrap();
                assert!((a - b).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn wu_examples() {
        let l = 1.0f64;
        let expect = 1.0 / (l.cosh() - 1.0);
        assert!(relative_error(wu_spectral(1, 0, l).unwrap(), expect) < TOL);
        assert!(relative_error(wu_closed(1, 0, l).unwrap(), expect) < TOL);
        let expect = l.cosh() / (l.sinh() * l.sinh());
        assert!((expect - 1.117286).abs() < 1e-6);
        assert!(relative_error(wu_spectral(2, 0, l).unwrap(), expect) < TOL);
        assert!(relative_error(wu_closed(2, 0, l).unwrap(), expect) < TOL);
        let lam = 3.0 * ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!(relative_error(wu_spectral(4, 1, lam).unwrap(), 0.125) < TOL);
        assert!(relative_error(wu_closed(4, 1, lam).unwrap(), 0.125) < TOL);
        assert!(wu_closed(4, 1, 0.0).is_err());
        assert!(wu_spectral(4, 1, -1.0).is_err());
        assert!(wu_spectral(4, 4, 1.0).is_err());
    }

    #[test]
    fn wu_closed_handles_huge_arguments() {
        let v = wu_closed(512, 0, 10.0).unwrap();
        let expect = 1.0 / 10f64.sinh();
        assert!(relative_error(v, expect) < 1e-14);
        assert!(wu_closed(512, 256, 10.0).unwrap() >= 0.0);
    }

    #[test]
    fn trig_sum_examples() {
        let v = trig_sum(SumVariant::Sumeq3, &SumArgs::new(1, 0, 1.0)).unwrap();
        assert!((v - 1.2).abs() < TOL);
        let v = trig_sum(SumVariant::R1Sum, &SumArgs::new(3, 1, 0.0)).unwrap();
        assert!((v - 1.0).abs() < TOL);
        let v = trig_sum(SumVariant::R1Sum, &SumArgs::new(2, 1, 0.0)).unwrap();
        assert!((v - 2.0).abs() < TOL);
        let v = trig_sum(SumVariant::Bn1Sum, &SumArgs::new(5, 1, 0.0)).unwrap();
        assert!((v - 0.4).abs() < TOL);
        let v = trig_sum(SumVariant::Sumeq2, &SumArgs::new(1, 0, 1.0)).unwrap();
        assert!((v - 1.5).abs() < TOL);
        assert!(trig_sum(SumVariant::Bn1Sum, &SumArgs::new(3, 1, 0.0)).is_err());
        assert!(trig_sum(SumVariant::Bn1Sum, &SumArgs::new(7, 4, 0.0)).is_err());
        assert!(trig_sum(SumVariant::Sumeq2, &SumArgs::new(1, 0, 0.0)).is_err());
        assert_eq!("PROP2SUM".parse::<SumVariant>().unwrap(), SumVariant::Prop2Sum);
        assert!("sum9".parse::<SumVariant>().is_err());
    }

    #[test]
    fn prop2_sum_is_the_wu_sum() {
        let lam = 3.0 * ((1.0 + 5f64.sqrt()) / 2.0).ln();
        for m in 1..60u64 {
            for ell in 0..m {
                let a = trig_sum(SumVariant::Prop2Sum, &SumArgs::new(m, ell, 0.0)).unwrap();
                let b = wu_spectral(m as usize, ell as usize, lam).unwrap();
                assert!((a - b).abs() < 1e-14);
            }
        }
        // Dropping the j = 0 term breaks the equality with the closed form.
        let m = 4u64;
        let full = trig_sum(SumVariant::Prop2Sum, &SumArgs::new(m, 1, 0.0)).unwrap();
        let without_zero = full - 1.0 / (m as f64 * (5f64.sqrt() - 1.0));
        assert!((full - 0.125).abs() < TOL);
        assert!((without_zero - 0.125).abs() > 0.1);
    }

    #[test]
    fn bn1_closed_examples() {
        assert_eq!(bn1_closed_cheb(5, 1).unwrap(), rat(2, 5));
        assert_eq!(bn1_closed_cheb(5, 2).unwrap(), rat(3, 5));
        assert_eq!(bn1_closed_cheb(9, 0).unwrap(), int(0));
        assert!(bn1_closed_cheb(3, 1).is_err());
        assert!(bn1_closed_cheb(6, 1).is_err());
    }

    #[test]
    fn r1_closed_matches_sum() {
        for n in 2..80u64 {
            for ell in 0..n {
                let exact = to_f64(&r1_closed_cheb(n, ell).unwrap());
                let sum = trig_sum(SumVariant::R1Sum, &SumArgs::new(n, ell, 0.0)).unwrap();
                assert!((exact - sum).abs() <= 1e-12 * (1.0 + exact.abs()), "N={n} ell={ell}");
            }
        }
    }

    #[test]
    fn parse_complex_forms() {
        assert_eq!(parse_complex("3+4i").unwrap(), Complex64::new(3.0, 4.0));
        assert_eq!(parse_complex(" 0.5 ").unwrap(), real(0.5));
        assert_eq!(parse_complex("-2i").unwrap(), Complex64::new(0.0, -2.0));
        assert!(parse_complex("3+").is_err());
        assert!(parse_complex("inf").is_err());
        assert!(parse_complex("").is_err());
    }

    proptest! {
        #[test]
        fn sin_reduction_is_odd_and_periodic(k in -10_000i128..10_000, n in 1i128..5000) {
            prop_assert_eq!(sin_pi_frac(-k, n), -sin_pi_frac(k, n));
            prop_assert_eq!(sin_pi_frac(k + 2 * n, n), sin_pi_frac(k, n));
            let s = sin_pi_frac(k, n);
            let c = cos_pi_frac(k, n);
            prop_assert!((s * s + c * c - 1.0).abs() < 1e-15);
        }

        #[test]
        fn resolvent_routes_agree(m in 1usize..120, ell_seed in 0usize..1000, b in 0i64..4, re in 0.1f64..8.0, im in -5.0f64..5.0) {
            let ell = ell_seed % m;
            let p = params(m, rat(b, 4), ell, Complex64::new(re, im));
            let a = resolvent_spectral(&p).unwrap();
            let c = resolvent_closed(&p).unwrap();
            prop_assert!((a - c).norm() <= 1e-10 * (1.0 + c.norm()));
        }
    }
}

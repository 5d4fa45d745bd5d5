//! Integer sequences (Fibonacci, Lucas, Pell, half Pell-Lucas, Bejaia, Pisa)
//! and the exact `Q(sqrt d)` constants built from golden-ratio powers.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{int, normalize_radicand, rat, ExactError, QuadExt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("order N = {got} is below the minimum {min}")]
    OrderTooSmall { got: u64, min: u64 },
    #[error("parameters out of range: {0}")]
    Range(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub type Result<T> = std::result::Result<T, SeqError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeqKind {
    Fib,
    Lucas,
    /// `P_n = F_n(2)`.
    Pell,
    /// `Q_n = L_n(2)/2`.
    PellLucasHalf,
}

impl SeqKind {
    /// `(x_0, x_1, c)` for the recurrence `x_n = c x_{n-1} + x_{n-2}`.
    fn seeds(self) -> (i64, i64, i64) {
        match self {
            SeqKind::Fib => (0, 1, 1),
            SeqKind::Lucas => (2, 1, 1),
            SeqKind::Pell => (0, 1, 2),
            SeqKind::PellLucasHalf => (1, 1, 2),
        }
    }
}

/// Terms `x_0 ..= x_{n_max}`.
pub fn seq_table(kind: SeqKind, n_max: usize) -> Vec<BigInt> {
    let (x0, x1, c) = kind.seeds();
    let c = BigInt::from(c);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(BigInt::from(x0));
    if n_max >= 1 {
        out.push(BigInt::from(x1));
    }
    for n in 2..=n_max {
        let next = &c * &out[n - 1] + &out[n - 2];
        out.push(next);
    }
    out
}

pub fn seq_term(kind: SeqKind, n: u64) -> BigInt {
    let (x0, x1, c) = kind.seeds();
    let c = BigInt::from(c);
    let (mut prev, mut cur) = (BigInt::from(x0), BigInt::from(x1));
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &c * &cur + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

pub fn fib(n: u64) -> BigInt {
    seq_term(SeqKind::Fib, n)
}

pub fn lucas(n: u64) -> BigInt {
    seq_term(SeqKind::Lucas, n)
}

/// `phi^n` exactly, by repeated squaring of `(1 + sqrt 5)/2`.
pub fn golden_power(n: i64) -> QuadExt {
    QuadExt::phi().pow(n).expect("phi is a unit")
}

/// `C_N = (1 + q^N)/(1 - q^N)` with `q = (3 - sqrt 5)/2 = phi^-2`.
pub fn c_constant(n: u64) -> Result<QuadExt> {
    if n == 0 {
        return Err(SeqError::OrderTooSmall { got: n, min: 1 });
    }
    let q_n = golden_power(-2 * n as i64);
    let one = QuadExt::one();
    Ok((&one + &q_n).try_div(&(&one - &q_n))?)
}

/// Characteristic roots `((N-2) +- sqrt(N(N-4)))/2` of `x^2 - (N-2)x + 1`,
/// larger root first.
pub fn bejaia_roots(n: u64) -> Result<(QuadExt, QuadExt)> {
    if n < 5 {
        return Err(SeqError::OrderTooSmall { got: n, min: 5 });
    }
    let mid = rat(n as i64 - 2, 2);
    let disc = n * (n - 4);
    Ok((normalize_radicand(mid.clone(), rat(1, 2), disc), normalize_radicand(mid, rat(-1, 2), disc)))
}

/// `sqrt(N(N-4))`, normalized.
pub fn bejaia_discriminant_root(n: u64) -> Result<QuadExt> {
    if n < 5 {
        return Err(SeqError::OrderTooSmall { got: n, min: 5 });
    }
    Ok(QuadExt::sqrt_of(n * (n - 4)))
}

/// `D_N = (1 - r^N)/(1 + r^N)` with `r` the smaller characteristic root.
pub fn d_constant(n: u64) -> Result<QuadExt> {
    let (_, r) = bejaia_roots(n)?;
    let r_n = r.pow(n as i64)?;
    let one = QuadExt::one();
    Ok((&one - &r_n).try_div(&(&one + &r_n))?)
}

fn order_recurrence(n: u64, ell: u64, x0: BigInt, x1: BigInt) -> Result<BigInt> {
    if n < 5 {
        return Err(SeqError::OrderTooSmall { got: n, min: 5 });
    }
    let c = BigInt::from(n - 2);
    let (mut prev, mut cur) = (x0, x1);
    if ell == 0 {
        return Ok(prev);
    }
    for _ in 1..ell {
        let next = &c * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// Bejaia number `B_l(N)`: `x_l = (N-2) x_{l-1} - x_{l-2}` from `0, 1`.
pub fn bejaia(n: u64, ell: u64) -> Result<BigInt> {
    order_recurrence(n, ell, BigInt::zero(), BigInt::one())
}

/// Pisa number `P_l(N)`: same recurrence from `2, N-2`.
pub fn pisa(n: u64, ell: u64) -> Result<BigInt> {
    order_recurrence(n, ell, BigInt::from(2), BigInt::from(n as i64 - 2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HypMode {
    Sinh,
    Cosh,
}

/// Fibonacci hyperbolic functions at integer golden exponent `e`:
/// `Sinh` gives `(phi^e - phi^-e)/sqrt 5 = sFh(e/2)`,
/// `Cosh` gives `(phi^e + phi^-e)/sqrt 5 = cFh((e-1)/2)`.
pub fn fib_hyp(e: i64, mode: HypMode) -> QuadExt {
    let up = golden_power(e);
    let down = golden_power(-e);
    let num = match mode {
        HypMode::Sinh => &up - &down,
        HypMode::Cosh => &up + &down,
    };
    // 1/sqrt 5 = sqrt 5 / 5
    num * QuadExt::new(int(0), rat(1, 5), 5)
}

/// `(phi^{k(m-l)} + phi^{kl}) / (phi^{km} - 1)`, the reduced form of
/// `cFh((km - 2kl - 2)/4) / sFh(km/4)` for golden exponent scale `k`.
pub fn golden_ratio_quotient(scale: u64, m: u64, ell: u64) -> Result<QuadExt> {
    if m == 0 || ell > m || scale == 0 {
        return Err(SeqError::Range(format!("scale={scale}, m={m}, l={ell}")));
    }
    let (k, m, ell) = (scale as i64, m as i64, ell as i64);
    let num = golden_power(k * (m - ell)) + golden_power(k * ell);
    let den = golden_power(k * m) - QuadExt::one();
    Ok(num.try_div(&den)?)
}

/// The hyperbolic-function ratio on the left of the golden-ratio
/// specialization of Wu's sum: `(phi^{3m-3l} + phi^{3l})/(phi^{3m} - 1)`.
/// Requires `m >= 3` and `1 <= l < m/2`.
pub fn prop2_ratio(m: u64, ell: u64) -> Result<QuadExt> {
    if m < 3 || ell == 0 || 2 * ell >= m {
        return Err(SeqError::Range(format!("need m >= 3 and 1 <= l < m/2, got m={m}, l={ell}")));
    }
    golden_ratio_quotient(3, m, ell)
}

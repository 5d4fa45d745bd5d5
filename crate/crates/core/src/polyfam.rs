//! Dense univariate polynomials over `BigRational` and the classical families
//! built on them: Chebyshev `T_n`, `U_n`, Fibonacci `F_n(x)`, Lucas `L_n(x)`,
//! Pell `P_n(x) = F_n(2x)` and Pell-Lucas `Q_n(x) = L_n(2x)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{int, rational_to_f64, BigRational, QuadExt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("coefficient of x^{degree} breaks parity {parity}")]
    Parity { degree: usize, parity: usize },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
}

pub type Result<T> = std::result::Result<T, PolyError>;

/// Coefficients in ascending degree; the leading stored coefficient is
/// nonzero and the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DensePoly {
    coeffs: Vec<BigRational>,
}

impl DensePoly {
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        DensePoly::from_coeffs(coeffs.iter().map(|&c| int(c)).collect())
    }

    fn from_bigints(coeffs: Vec<BigInt>) -> Self {
        DensePoly::from_coeffs(coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn zero() -> Self {
        DensePoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        DensePoly::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        DensePoly::from_ints(&[1])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        DensePoly::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Whether every nonzero coefficient sits at a degree of the given parity.
    pub fn has_parity(&self, parity: usize) -> bool {
        self.coeffs.iter().enumerate().all(|(k, c)| c.is_zero() || k % 2 == parity % 2)
    }

    pub fn scale(&self, c: &BigRational) -> DensePoly {
        DensePoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `x^k * self`.
    pub fn shift(&self, k: usize) -> DensePoly {
        if self.is_zero() {
            return DensePoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        DensePoly { coeffs }
    }

    pub fn derivative(&self) -> DensePoly {
        DensePoly::from_coeffs(
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * int(k as i64)).collect(),
        )
    }

    /// `self(q(x))` by Horner accumulation.
    pub fn compose(&self, q: &DensePoly) -> DensePoly {
        let mut acc = DensePoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &DensePoly::constant(c.clone());
        }
        acc
    }

    /// `self(c x)`.
    pub fn compose_scale(&self, c: &BigRational) -> DensePoly {
        let mut power = BigRational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &power);
            power *= c;
        }
        DensePoly::from_coeffs(out)
    }

    /// `(-i)^n * self(i x)` for a polynomial of parity `n`; the result is real.
    /// Coefficient `k` picks up the sign `(-1)^((n-k)/2)`.
    pub fn i_twist(&self, n: usize) -> Result<DensePoly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                out.push(BigRational::zero());
                continue;
            }
            if !(k + n).is_multiple_of(2) {
                return Err(PolyError::Parity { degree: k, parity: n % 2 });
            }
            let exponent = (n as isize - k as isize).rem_euclid(4) / 2;
            out.push(if exponent == 1 { -c } else { c.clone() });
        }
        Ok(DensePoly::from_coeffs(out))
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner in `Q(sqrt d)`.
    pub fn eval_quad(&self, x: &QuadExt) -> QuadExt {
        let mut acc = QuadExt::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &QuadExt::rational(c.clone());
        }
        acc
    }

    pub fn eval_float(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rational_to_f64(c).unwrap_or(f64::NAN))
    }

    /// Splits `self = x^k g(x^2)`, returning `(k, g)`.
    pub fn even_part_factor(&self) -> Result<(usize, DensePoly)> {
        let k = self
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(PolyError::ZeroPolynomial)?;
        let mut g = Vec::new();
        for (j, c) in self.coeffs[k..].iter().enumerate() {
            if j % 2 == 0 {
                g.push(c.clone());
            } else if !c.is_zero() {
                return Err(PolyError::Parity { degree: k + j, parity: k % 2 });
            }
        }
        Ok((k, DensePoly::from_coeffs(g)))
    }

    /// Coefficients `c_j` with `self(t) = sum_j c_j T_j(t)`.
    pub fn to_chebyshev_basis(&self) -> Vec<BigRational> {
        // Horner in the Chebyshev basis: t T_0 = T_1, t T_j = (T_{j+1} + T_{j-1})/2.
        let half = BigRational::new(1.into(), 2.into());
        let mut acc: Vec<BigRational> = Vec::new();
        for c in self.coeffs.iter().rev() {
            let mut next = vec![BigRational::zero(); acc.len() + 1];
            for (j, a) in acc.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                if j == 0 {
                    next[1] += a;
                } else {
                    let h = a * &half;
                    next[j + 1] += &h;
                    next[j - 1] += h;
                }
            }
            if next.is_empty() {
                next.push(BigRational::zero());
            }
            next[0] += c;
            acc = next;
        }
        while acc.last().is_some_and(Zero::is_zero) {
            acc.pop();
        }
        acc
    }

    /// Largest coefficient magnitude.
    pub fn max_norm(&self) -> BigRational {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(BigRational::zero)
    }

    fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.numer().clone())).collect()
    }
}

/// Clenshaw evaluation of `sum_j c_j T_j(t)`.
pub fn clenshaw(coeffs: &[f64], t: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = 2.0 * t * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    let c0 = coeffs.first().copied().unwrap_or(0.0);
    t * b1 - b2 + c0
}

fn convolve_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

impl Mul for &DensePoly {
    type Output = DensePoly;
    fn mul(self, rhs: &DensePoly) -> DensePoly {
        if self.is_zero() || rhs.is_zero() {
            return DensePoly::zero();
        }
        // Family polynomials are integral; skip the per-term gcd reductions.
        if let (Some(a), Some(b)) = (self.integer_coeffs(), rhs.integer_coeffs()) {
            return DensePoly::from_bigints(convolve_int(&a, &b));
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in rhs.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        DensePoly::from_coeffs(out)
    }
}

impl Add for &DensePoly {
    type Output = DensePoly;
    fn add(self, rhs: &DensePoly) -> DensePoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &DensePoly {
    type Output = DensePoly;
    fn sub(self, rhs: &DensePoly) -> DensePoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &DensePoly {
    type Output = DensePoly;
    fn neg(self) -> DensePoly {
        DensePoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for DensePoly {
            type Output = DensePoly;
            fn $method(self, rhs: DensePoly) -> DensePoly {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

/// Ascending coefficient list, e.g. `[-1, 0, 2]` for `2x^2 - 1`.
impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        if self.is_zero() {
            write!(f, "0")?;
        }
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    ChebT,
    ChebU,
    Fib,
    Lucas,
    Pell,
    PellLucas,
}

impl Family {
    pub const ALL: [Family; 6] =
        [Family::ChebT, Family::ChebU, Family::Fib, Family::Lucas, Family::Pell, Family::PellLucas];

    /// Seeds `p_0, p_1(x)` and the factor `c` in `p_{n+1} = c x p_n + s p_{n-1}`,
    /// with `s = -1` for Chebyshev and `+1` otherwise.
    fn recurrence(self) -> (i64, [i64; 2], i64, i64) {
        match self {
            Family::ChebT => (1, [0, 1], 2, -1),
            Family::ChebU => (1, [0, 2], 2, -1),
            Family::Fib => (0, [1, 0], 1, 1),
            Family::Lucas => (2, [0, 1], 1, 1),
            Family::Pell => (0, [1, 0], 2, 1),
            Family::PellLucas => (2, [0, 2], 2, 1),
        }
    }
}

/// `p_k(arg)` for `k = 0..=n_max`, generated by the family recurrence with
/// `arg` substituted for `x`. Pell families are not generated here; they are
/// built from Fibonacci/Lucas by scaling.
pub fn family_at(family: Family, arg: &DensePoly, n_max: usize) -> Vec<DensePoly> {
    let (p0, [p1c, p1x], c, s) = family.recurrence();
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(DensePoly::from_ints(&[p0]));
    if n_max == 0 {
        return out;
    }
    out.push(&DensePoly::from_ints(&[p1c]) + &arg.scale(&int(p1x)));
    let step = arg.scale(&int(c));
    for n in 1..n_max {
        let lead = &step * &out[n];
        let next = if s < 0 { &lead - &out[n - 1] } else { &lead + &out[n - 1] };
        out.push(next);
    }
    out
}

/// `p_0 ..= p_{n_max}` of a family.
pub fn family_table(family: Family, n_max: usize) -> Vec<DensePoly> {
    match family {
        Family::Pell => family_table(Family::Fib, n_max).iter().map(|p| p.compose_scale(&int(2))).collect(),
        Family::PellLucas => {
            family_table(Family::Lucas, n_max).iter().map(|p| p.compose_scale(&int(2))).collect()
        }
        f => family_at(f, &DensePoly::x(), n_max),
    }
}

fn nth(family: Family, n: usize) -> DensePoly {
    family_table(family, n).pop().expect("table has n + 1 entries")
}

/// Chebyshev polynomial of the first kind.
pub fn cheb_t(n: usize) -> DensePoly {
    nth(Family::ChebT, n)
}

/// Chebyshev polynomial of the second kind.
pub fn cheb_u(n: usize) -> DensePoly {
    nth(Family::ChebU, n)
}

/// The conventional `U_{-1} = 0`. Kept separate from [`cheb_u`] so that a
/// negative index never arises silently.
pub fn cheb_u_minus_one() -> DensePoly {
    DensePoly::zero()
}

pub fn fib_poly(n: usize) -> DensePoly {
    nth(Family::Fib, n)
}

pub fn lucas_poly(n: usize) -> DensePoly {
    nth(Family::Lucas, n)
}

pub fn pell_poly(n: usize) -> DensePoly {
    fib_poly(n).compose_scale(&int(2))
}

pub fn pell_lucas_poly(n: usize) -> DensePoly {
    lucas_poly(n).compose_scale(&int(2))
}

//! Two-point resistance on circulant resistor networks: the conductance
//! Laplacian, exact and floating-point linear solves, the spectral sum and the
//! golden-ratio closed form for `C_N(1,2)`.

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{int, rat, rational_to_f64, BigRational, ExactError, QuadExt};
use crate::kernels::{sin_pi_frac, CompensatedSum};
use crate::sequences::{c_constant, fib, SeqError};

/// Largest network the dense float solver accepts.
pub const FLOAT_SOLVE_MAX_N: usize = 4096;
/// Relative residual above which a float solve is rejected.
pub const RESIDUAL_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResistanceError {
    #[error("invalid network: {0}")]
    Spec(String),
    #[error("vertex {vertex} outside 0..{n}")]
    Vertex { vertex: usize, n: usize },
    #[error("network is disconnected")]
    Disconnected,
    #[error("float solve residual {residual:e} exceeds {RESIDUAL_THRESHOLD:e}")]
    IllConditioned { residual: f64 },
    #[error("closed form left a nonzero sqrt(5) component {0}")]
    IrrationalResidue(String),
    #[error("route {route} needs {requirement}")]
    Unsupported { route: Route, requirement: &'static str },
    #[error("cannot parse jumps {input:?}: {msg}")]
    Parse { input: String, msg: String },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Seq(#[from] SeqError),
}

pub type Result<T> = std::result::Result<T, ResistanceError>;

/// Parses a comma-separated jump list such as `1,2`.
pub fn parse_jumps(input: &str) -> Result<Vec<u64>> {
    let err = |msg: String| ResistanceError::Parse { input: input.to_string(), msg };
    let jumps = input
        .split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|e| err(format!("{t:?}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    if jumps.contains(&0) {
        return Err(err("jumps must be positive".into()));
    }
    Ok(jumps)
}

/// `N` vertices on a circle; every vertex `i` is joined to `i + J mod N` for
/// each listed jump `J` by a resistor of the given conductance. Repeated and
/// coincident jumps give parallel edges; jumps that are multiples of `N`
/// would be self-loops and are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CirculantSpec {
    n: usize,
    jumps: Vec<u64>,
    conductance: BigRational,
}

impl CirculantSpec {
    pub fn new(n: usize, jumps: Vec<u64>, conductance: BigRational) -> Result<Self> {
        if n < 2 {
            return Err(ResistanceError::Spec(format!("need at least 2 vertices, got {n}")));
        }
        if jumps.is_empty() || jumps.contains(&0) {
            return Err(ResistanceError::Spec("jumps must be a nonempty list of positive integers".into()));
        }
        if conductance <= BigRational::zero() {
            return Err(ResistanceError::Spec(format!("conductance {conductance} must be positive")));
        }
        Ok(CirculantSpec { n, jumps, conductance })
    }

    /// The plain cycle `C_N` with unit resistors.
    pub fn cycle(n: usize) -> Result<Self> {
        CirculantSpec::new(n, vec![1], int(1))
    }

    /// `C_N(1,2)` with unit resistors.
    pub fn cn12(n: usize) -> Result<Self> {
        CirculantSpec::new(n, vec![1, 2], int(1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn jumps(&self) -> &[u64] {
        &self.jumps
    }

    pub fn conductance(&self) -> &BigRational {
        &self.conductance
    }

    /// Jumps reduced mod `N`, self-loops removed.
    fn reduced_jumps(&self) -> impl Iterator<Item = usize> + '_ {
        self.jumps.iter().map(|&j| (j % self.n as u64) as usize).filter(|&j| j != 0)
    }

    fn is_cn12_unit_shape(&self) -> bool {
        let mut j = self.jumps.clone();
        j.sort_unstable();
        j == [1, 2]
    }

    /// Laplacian with each edge counted once (unit conductance).
    fn multiplicity_laplacian(&self) -> Vec<Vec<i64>> {
        let n = self.n;
        let mut l = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in self.reduced_jumps() {
                let k = (i + j) % n;
                l[i][k] -= 1;
                l[k][i] -= 1;
                l[i][i] += 1;
                l[k][k] += 1;
            }
        }
        l
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(ResistanceError::Vertex { vertex: v, n: self.n });
        }
        Ok(())
    }
}

impl fmt::Display for CirculantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let jumps: Vec<String> = self.jumps.iter().map(u64::to_string).collect();
        write!(f, "C_{}({})", self.n, jumps.join(","))?;
        if !self.conductance.is_one() {
            write!(f, " with conductance {}", self.conductance)?;
        }
        Ok(())
    }
}

/// `L = D - C`, symmetric with zero row sums.
pub fn laplacian(spec: &CirculantSpec) -> Vec<Vec<BigRational>> {
    spec.multiplicity_laplacian()
        .into_iter()
        .map(|row| row.into_iter().map(|v| int(v) * &spec.conductance).collect())
        .collect()
}

/// Solves `a x = b` for each column of `b` by fraction-free elimination.
fn bareiss_solve(mut a: Vec<Vec<BigInt>>, mut b: Vec<Vec<BigInt>>) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let cols = b.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(k, pivot);
        b.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            for j in 0..cols {
                let v = (&a[k][k] * &b[i][j] - &a[i][k] * &b[k][j]) / &prev;
                b[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut x = vec![vec![BigRational::zero(); cols]; n];
    for c in 0..cols {
        for i in (0..n).rev() {
            let mut acc = BigRational::from_integer(b[i][c].clone());
            for j in i + 1..n {
                acc -= &x[j][c] * BigRational::from_integer(a[i][j].clone());
            }
            x[i][c] = acc / BigRational::from_integer(a[i][i].clone());
        }
    }
    Some(x)
}

/// Exact resistances `R(u, v)` for every `v`, from one elimination on the
/// Laplacian grounded at `u`.
pub fn resistance_profile_exact(spec: &CirculantSpec, u: usize) -> Result<Vec<BigRational>> {
    spec.check_vertex(u)?;
    let n = spec.n;
    let l = spec.multiplicity_laplacian();
    let keep: Vec<usize> = (0..n).filter(|&i| i != u).collect();
    let a: Vec<Vec<BigInt>> = keep.iter().map(|&i| keep.iter().map(|&j| BigInt::from(l[i][j])).collect()).collect();
    let b: Vec<Vec<BigInt>> =
        (0..n - 1).map(|i| (0..n - 1).map(|j| BigInt::from(i64::from(i == j))).collect()).collect();
    // Column v of the grounded inverse is the potential for unit current at v.
    let g = bareiss_solve(a, b).ok_or(ResistanceError::Disconnected)?;
    let mut out = Vec::with_capacity(n);
    for v in 0..n {
        if v == u {
            out.push(BigRational::zero());
        } else {
            let idx = if v < u { v } else { v - 1 };
            out.push(&g[idx][idx] / &spec.conductance);
        }
    }
    Ok(out)
}

/// Exact two-point resistance by a grounded fraction-free solve.
pub fn two_point_resistance_exact(spec: &CirculantSpec, u: usize, v: usize) -> Result<BigRational> {
    spec.check_vertex(u)?;
    spec.check_vertex(v)?;
    if u == v {
        return Ok(BigRational::zero());
    }
    let n = spec.n;
    let l = spec.multiplicity_laplacian();
    let keep: Vec<usize> = (0..n).filter(|&i| i != v).collect();
    let a: Vec<Vec<BigInt>> = keep.iter().map(|&i| keep.iter().map(|&j| BigInt::from(l[i][j])).collect()).collect();
    let b: Vec<Vec<BigInt>> = keep.iter().map(|&i| vec![BigInt::from(i64::from(i == u))]).collect();
    let x = bareiss_solve(a, b).ok_or(ResistanceError::Disconnected)?;
    let idx = if u < v { u } else { u - 1 };
    Ok(&x[idx][0] / &spec.conductance)
}

/// Cholesky factor of a grounded Laplacian, stored as a dense lower triangle.
pub struct GroundedCholesky {
    dim: usize,
    ground: usize,
    factor: Vec<f64>,
    matrix: Vec<f64>,
}

impl GroundedCholesky {
    pub fn new(spec: &CirculantSpec, ground: usize) -> Result<Self> {
        spec.check_vertex(ground)?;
        if spec.n > FLOAT_SOLVE_MAX_N {
            return Err(ResistanceError::Spec(format!("float solve limited to N <= {FLOAT_SOLVE_MAX_N}")));
        }
        let c = rational_to_f64(&spec.conductance).ok_or_else(|| ResistanceError::Spec("conductance out of range".into()))?;
        let n = spec.n;
        let dim = n - 1;
        let full = n_by_n_float(spec, c);
        let index = |i: usize| if i < ground { i } else { i + 1 };
        let mut matrix = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                matrix[i * dim + j] = full[index(i) * n + index(j)];
            }
        }
        let mut factor = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..=i {
                let (ri, rj) = (&factor[i * dim..i * dim + j], &factor[j * dim..j * dim + j]);
                let dot: f64 = ri.iter().zip(rj).map(|(a, b)| a * b).sum();
                let s = matrix[i * dim + j] - dot;
                if i == j {
                    if s <= 0.0 {
                        return Err(ResistanceError::Disconnected);
                    }
                    factor[i * dim + i] = s.sqrt();
                } else {
                    factor[i * dim + j] = s / factor[j * dim + j];
                }
            }
        }
        Ok(GroundedCholesky { dim, ground, factor, matrix })
    }

    /// Potentials (ground excluded) for the injected currents `b`, with the
    /// relative residual checked against [`RESIDUAL_THRESHOLD`].
    fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let d = self.dim;
        let mut y = vec![0.0; d];
        for i in 0..d {
            let dot: f64 = self.factor[i * d..i * d + i].iter().zip(&y).map(|(a, b)| a * b).sum();
            y[i] = (b[i] - dot) / self.factor[i * d + i];
        }
        let mut x = vec![0.0; d];
        for i in (0..d).rev() {
            let mut s = y[i];
            for j in i + 1..d {
                s -= self.factor[j * d + i] * x[j];
            }
            x[i] = s / self.factor[i * d + i];
        }
        let mut res: f64 = 0.0;
        let mut a_norm: f64 = 0.0;
        for i in 0..d {
            let row = &self.matrix[i * d..(i + 1) * d];
            let ax: f64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
            res = res.max((ax - b[i]).abs());
            a_norm = a_norm.max(row.iter().map(|a| a.abs()).sum());
        }
        let x_norm = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let b_norm = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let residual = res / (a_norm * x_norm + b_norm);
        if !(residual <= RESIDUAL_THRESHOLD) {
            return Err(ResistanceError::IllConditioned { residual });
        }
        Ok(x)
    }

    /// `R(u, ground)`.
    pub fn resistance_to_ground(&self, u: usize) -> Result<f64> {
        if u == self.ground {
            return Ok(0.0);
        }
        let idx = if u < self.ground { u } else { u - 1 };
        let mut b = vec![0.0; self.dim];
        b[idx] = 1.0;
        Ok(self.solve(&b)?[idx])
    }
}

fn n_by_n_float(spec: &CirculantSpec, c: f64) -> Vec<f64> {
    spec.multiplicity_laplacian().into_iter().flatten().map(|v| v as f64 * c).collect()
}

/// Double-precision two-point resistance by a grounded Cholesky solve.
pub fn two_point_resistance_float(spec: &CirculantSpec, u: usize, v: usize) -> Result<f64> {
    spec.check_vertex(u)?;
    spec.check_vertex(v)?;
    if u == v {
        return Ok(0.0);
    }
    GroundedCholesky::new(spec, v)?.resistance_to_ground(u)
}

fn check_cn12(n: u64, ell: u64) -> Result<()> {
    if n == 0 || ell >= n {
        return Err(ResistanceError::Spec(format!("need N >= 1 and 0 <= ell < N, got N = {n}, ell = {ell}")));
    }
    Ok(())
}

/// `(1/5) l (1 - l/N) + (-1)^{l+1} (F_l^2/sqrt 5) C_N^{(-1)^N} + (-1)^l F_{2l}/5`
/// evaluated in `Q(sqrt 5)`; the result must be rational.
pub fn resistance_cn12_closed(n: u64, ell: u64) -> Result<QuadExt> {
    check_cn12(n, ell)?;
    let c = c_constant(n)?;
    let c_pow = if n.is_multiple_of(2) { c } else { c.inv()? };
    let cycle = rat(ell as i64, 5) * (int(1) - rat(ell as i64, n as i64));
    let f = BigRational::from_integer(fib(ell));
    let f2l = BigRational::from_integer(fib(2 * ell));
    let sign = if ell.is_multiple_of(2) { int(1) } else { int(-1) };
    // F_l^2 / sqrt 5 = F_l^2 sqrt 5 / 5
    let inv_sqrt5 = QuadExt::new(int(0), rat(1, 5), 5);
    let middle = c_pow.try_mul(&inv_sqrt5)?.scale(&(-&sign * &f * &f));
    let value = middle.try_add(&QuadExt::rational(cycle + sign * f2l / int(5)))?;
    if !value.is_rational() {
        return Err(ResistanceError::IrrationalResidue(value.to_string()));
    }
    Ok(value)
}

/// Rational value of [`resistance_cn12_closed`].
pub fn resistance_cn12_closed_rational(n: u64, ell: u64) -> Result<BigRational> {
    let v = resistance_cn12_closed(n, ell)?;
    Ok(v.as_rational().cloned().expect("checked rational"))
}

/// Float evaluation of the closed form, rearranged so nothing overflows or
/// cancels for large `N`: with `eps = (-1)^N phi^{-2N}`,
/// `R = l(N-l)/(5N) + 2((1+eps) - (-1)^l (eps phi^{2l} + phi^{-2l})) / (5 sqrt5 (1-eps))`.
pub fn resistance_cn12_closed_f64(n: u64, ell: u64) -> Result<f64> {
    check_cn12(n, ell)?;
    let ln_phi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let parity = |k: u64| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let eps = parity(n) * (-2.0 * n as f64 * ln_phi).exp();
    let eps_up = parity(n) * (-2.0 * (n - ell) as f64 * ln_phi).exp();
    let down = (-2.0 * ell as f64 * ln_phi).exp();
    let (nf, lf) = (n as f64, ell as f64);
    let cycle = lf * (nf - lf) / (5.0 * nf);
    let bracket = (1.0 + eps) - parity(ell) * (eps_up + down);
    Ok(cycle + 2.0 * bracket / (5.0 * 5f64.sqrt() * (1.0 - eps)))
}

/// `(1/5) l (1 - l/N) + (4/(5N)) sum_{j=1}^{N-1} sin^2(j l pi/N) / (5 (1 - (4/5) sin^2(j pi/N)))`.
pub fn resistance_cn12_spectral(n: u64, ell: u64) -> Result<f64> {
    if n < 2 || ell >= n {
        return Err(ResistanceError::Spec(format!("need N >= 2 and 0 <= ell < N, got N = {n}, ell = {ell}")));
    }
    Ok(resistance_cn12_spectral_all(n)?[ell as usize])
}

/// The spectral route for every `l = 0..N-1` at once, sharing one table of
/// `sin^2(k pi/N)`.
pub fn resistance_cn12_spectral_all(n: u64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(ResistanceError::Spec(format!("need N >= 2, got {n}")));
    }
    let ni = n as usize;
    let sin2: Vec<f64> = (0..ni).map(|k| sin_pi_frac(k as i128, n as i128).powi(2)).collect();
    let weight: Vec<f64> = sin2.iter().map(|s| 1.0 / (5.0 * (1.0 - 0.8 * s))).collect();
    let nf = n as f64;
    Ok((0..ni)
        .map(|ell| {
            let sum: CompensatedSum = (1..ni).map(|j| sin2[(j * ell) % ni] * weight[j]).collect();
            let lf = ell as f64;
            lf * (nf - lf) / (5.0 * nf) + 4.0 * sum.total() / (5.0 * nf)
        })
        .collect())
}

/// `R(0, l)` for any circulant from its Laplacian spectrum
/// `lambda_j = c sum_J 4 sin^2(pi j J/N)`.
pub fn circulant_spectral_resistance(spec: &CirculantSpec, ell: usize) -> Result<f64> {
    spec.check_vertex(ell)?;
    let c = rational_to_f64(&spec.conductance).ok_or_else(|| ResistanceError::Spec("conductance out of range".into()))?;
    let n = spec.n as i128;
    let mut sum = CompensatedSum::default();
    for j in 1..n {
        let lam: f64 = spec.reduced_jumps().map(|jump| 4.0 * sin_pi_frac(j * jump as i128, n).powi(2)).sum::<f64>() * c;
        if lam <= 0.0 {
            return Err(ResistanceError::Disconnected);
        }
        sum.add(4.0 * sin_pi_frac(j * ell as i128, n).powi(2) / lam);
    }
    Ok(sum.total() / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Route {
    SolveExact,
    SolveFloat,
    ClosedForm,
    Spectral,
}

impl Route {
    pub const ALL: [Route; 4] = [Route::SolveExact, Route::SolveFloat, Route::ClosedForm, Route::Spectral];

    pub fn name(self) -> &'static str {
        match self {
            Route::SolveExact => "SOLVE_EXACT",
            Route::SolveFloat => "SOLVE_FLOAT",
            Route::ClosedForm => "CLOSED_FORM",
            Route::Spectral => "SPECTRAL",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceResult {
    pub value_exact: Option<BigRational>,
    pub value_float: f64,
    pub route: Route,
}

/// `R(u, v)` by the chosen route. The closed form applies to `C_N(1,2)` only;
/// the spectral route handles any circulant.
pub fn resistance(spec: &CirculantSpec, u: usize, v: usize, route: Route) -> Result<ResistanceResult> {
    spec.check_vertex(u)?;
    spec.check_vertex(v)?;
    let ell = (v + spec.n - u) % spec.n;
    let (value_exact, value_float) = match route {
        Route::SolveExact => {
            let r = two_point_resistance_exact(spec, u, v)?;
            let f = rational_to_f64(&r).unwrap_or(f64::NAN);
            (Some(r), f)
        }
        Route::SolveFloat => (None, two_point_resistance_float(spec, u, v)?),
        Route::ClosedForm => {
            if !spec.is_cn12_unit_shape() {
                return Err(ResistanceError::Unsupported { route, requirement: "jumps {1,2}" });
            }
            let r = resistance_cn12_closed_rational(spec.n as u64, ell as u64)? / &spec.conductance;
            let f = rational_to_f64(&r).unwrap_or(f64::NAN);
            (Some(r), f)
        }
        Route::Spectral => (None, circulant_spectral_resistance(spec, ell)?),
    };
    Ok(ResistanceResult { value_exact, value_float, route })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub ell: u64,
    pub t_closed_ns: u128,
    pub t_solve_ns: u128,
    pub closed: f64,
    pub solve: f64,
    pub abs_diff: f64,
}

impl BenchRow {
    pub fn rel_diff(&self) -> f64 {
        self.abs_diff / self.closed.abs().max(f64::MIN_POSITIVE)
    }

    pub fn speedup(&self) -> f64 {
        self.t_solve_ns as f64 / self.t_closed_ns.max(1) as f64
    }
}

/// Times the float closed form against a dense grounded solve on `C_N(1,2)`
/// at `l = floor(N/2)` unless `ell` is given.
pub fn bench_resistance(n_list: &[u64], ell: Option<u64>) -> Result<Vec<BenchRow>> {
    n_list
        .iter()
        .map(|&n| {
            let l = ell.unwrap_or(n / 2);
            let spec = CirculantSpec::cn12(n as usize)?;
            spec.check_vertex(l as usize)?;
            let start = Instant::now();
            let closed = resistance_cn12_closed_f64(n, l)?;
            let t_closed_ns = start.elapsed().as_nanos();
            let start = Instant::now();
            let solve = two_point_resistance_float(&spec, 0, l as usize)?;
            let t_solve_ns = start.elapsed().as_nanos();
            Ok(BenchRow { n, ell: l, t_closed_ns, t_solve_ns, closed, solve, abs_diff: (closed - solve).abs() })
        })
        .collect()
}

/// CSV with header `N,t_closed_ns,t_solve_ns,abs_diff`.
pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["N", "t_closed_ns", "t_solve_ns", "abs_diff"]).expect("in-memory write");
    for r in rows {
        w.write_record([r.n.to_string(), r.t_closed_ns.to_string(), r.t_solve_ns.to_string(), format!("{:e}", r.abs_diff)])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// Whether `R(u,w) <= R(u,v) + R(v,w)`.
pub fn triangle_holds(r_uw: &BigRational, r_uv: &BigRational, r_vw: &BigRational) -> bool {
    r_uw <= &(r_uv + r_vw) && !r_uw.is_negative()
}

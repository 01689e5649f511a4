//! Objectives, gradient samples and the concrete test problems.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::vector::{axpy, dot, first_non_finite, norm, norm_sq};

/// Optimal value and, when known, a minimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub f_star: f64,
    pub x_star: Option<Vec<f64>>,
}

/// A differentiable convex function with an optional smoothness bound and optimum.
///
/// `value_grad` must be deterministic: identical inputs give bit-identical outputs.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;

    /// Writes the gradient at `x` into `grad` and returns the value.
    fn value_grad(&self, x: &[f64], grad: &mut [f64]) -> f64;

    fn known_l(&self) -> Option<f64> {
        None
    }

    fn known_opt(&self) -> Option<&Optimum> {
        None
    }
}

/// A point together with its cached value and gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct GradSample {
    pub x: Vec<f64>,
    pub f: f64,
    pub g: Vec<f64>,
}

impl GradSample {
    pub fn grad_norm_sq(&self) -> f64 {
        norm_sq(&self.g)
    }
}

pub fn evaluate(obj: &dyn Objective, x: &[f64]) -> Result<GradSample> {
    if x.len() != obj.dim() {
        return Err(Error::Usage(format!("point has dimension {} but the objective expects {}", x.len(), obj.dim())));
    }
    if let Some(i) = first_non_finite(x) {
        return Err(Error::NonFinite { what: "input coordinate", index: i });
    }
    let mut g = vec![0.0; x.len()];
    let f = obj.value_grad(x, &mut g);
    if !f.is_finite() {
        return Err(Error::NonFinite { what: "objective value", index: 0 });
    }
    if let Some(i) = first_non_finite(&g) {
        return Err(Error::NonFinite { what: "gradient", index: i });
    }
    Ok(GradSample { x: x.to_vec(), f, g })
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Usage(format!(
                "dense matrix {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        DenseMatrix { rows: n, cols: n, data }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut data = vec![0.0; n * n];
        for (i, v) in d.iter().enumerate() {
            data[i * n + i] = *v;
        }
        DenseMatrix { rows: n, cols: n, data }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from per-row `(column, value)` lists.
    pub fn from_rows(cols: usize, rows: &[Vec<(usize, f64)>]) -> Result<Self> {
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for (r, row) in rows.iter().enumerate() {
            let mut last: Option<usize> = None;
            for &(c, v) in row {
                if c >= cols {
                    return Err(Error::Usage(format!("row {r}: column {c} outside [0, {cols})")));
                }
                if last.is_some_and(|l| c <= l) {
                    return Err(Error::Usage(format!("row {r}: column indices must be strictly increasing")));
                }
                last = Some(c);
                indices.push(c);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        Ok(SparseMatrix { rows: rows.len(), cols, indptr, indices, values })
    }

    pub fn from_dense(a: &DenseMatrix) -> Self {
        let rows: Vec<Vec<(usize, f64)>> = (0..a.rows)
            .map(|i| a.row(i).iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, v)| (j, *v)).collect())
            .collect();
        Self::from_rows(a.cols, &rows).expect("dense rows are well formed")
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (lo, hi) = (self.indptr[i], self.indptr[i + 1]);
        (&self.indices[lo..hi], &self.values[lo..hi])
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut data = vec![0.0; self.rows * self.cols];
        for i in 0..self.rows {
            let (idx, val) = self.row(i);
            for (j, v) in idx.iter().zip(val) {
                data[i * self.cols + j] = *v;
            }
        }
        DenseMatrix { rows: self.rows, cols: self.cols, data }
    }
}

/// Either storage format behind one linear-operator interface.
#[derive(Debug, Clone, PartialEq)]
pub enum Matrix {
    Dense(DenseMatrix),
    Sparse(SparseMatrix),
}

impl From<DenseMatrix> for Matrix {
    fn from(a: DenseMatrix) -> Self {
        Matrix::Dense(a)
    }
}

impl From<SparseMatrix> for Matrix {
    fn from(a: SparseMatrix) -> Self {
        Matrix::Sparse(a)
    }
}

impl Matrix {
    pub fn rows(&self) -> usize {
        match self {
            Matrix::Dense(a) => a.rows,
            Matrix::Sparse(a) => a.rows,
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Matrix::Dense(a) => a.cols,
            Matrix::Sparse(a) => a.cols,
        }
    }

    /// `out = A x`
    pub fn matvec(&self, x: &[f64], out: &mut [f64]) {
        match self {
            Matrix::Dense(a) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = dot(a.row(i), x);
                }
            }
            Matrix::Sparse(a) => {
                for (i, o) in out.iter_mut().enumerate() {
                    let (idx, val) = a.row(i);
                    *o = idx.iter().zip(val).map(|(j, v)| v * x[*j]).sum();
                }
            }
        }
    }

    /// `out = Aᵀ y`
    pub fn tmatvec(&self, y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        match self {
            Matrix::Dense(a) => {
                for (i, yi) in y.iter().enumerate() {
                    axpy(*yi, a.row(i), out);
                }
            }
            Matrix::Sparse(a) => {
                for (i, yi) in y.iter().enumerate() {
                    let (idx, val) = a.row(i);
                    for (j, v) in idx.iter().zip(val) {
                        out[*j] += yi * v;
                    }
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Matrix::Dense(a) => a.data.iter().all(|v| *v == 0.0),
            Matrix::Sparse(a) => a.values.iter().all(|v| *v == 0.0),
        }
    }
}

/// Result of power iteration on AᵀA.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBound {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Set when A is the zero matrix; `value` is then 0.
    pub zero_matrix: bool,
}

pub const SPECTRAL_TOL: f64 = 1e-10;
pub const SPECTRAL_MAX_ITERS: usize = 100_000;
const SPECTRAL_SEED: u64 = 0x5eed_5eed;

/// λ_max(AᵀA) by power iteration from a fixed seeded start.
pub fn spectral_bound(a: &Matrix) -> SpectralBound {
    if a.is_zero() || a.rows() == 0 || a.cols() == 0 {
        return SpectralBound { value: 0.0, iterations: 0, converged: true, zero_matrix: true };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SPECTRAL_SEED);
    let mut v: Vec<f64> = (0..a.cols()).map(|_| rng.random::<f64>() + 0.5).collect();
    let mut av = vec![0.0; a.rows()];
    let mut w = vec![0.0; a.cols()];
    let mut lambda = 0.0;
    for it in 1..=SPECTRAL_MAX_ITERS {
        let nv = norm(&v);
        v.iter_mut().for_each(|x| *x /= nv);
        a.matvec(&v, &mut av);
        a.tmatvec(&av, &mut w);
        let next = dot(&v, &w);
        let done = it > 1 && (next - lambda).abs() <= SPECTRAL_TOL * next.abs();
        lambda = next;
        if done {
            return SpectralBound { value: lambda, iterations: it, converged: true, zero_matrix: false };
        }
        if norm_sq(&w) == 0.0 {
            // start vector fell in the null space; restart from a fresh direction
            v = (0..a.cols()).map(|_| rng.random::<f64>() - 0.5).collect();
            continue;
        }
        core::mem::swap(&mut v, &mut w);
    }
    SpectralBound { value: lambda, iterations: SPECTRAL_MAX_ITERS, converged: false, zero_matrix: false }
}

/// f(x) = ½(x − c)ᵀQ(x − c) + f_c with symmetric positive semidefinite Q.
#[derive(Debug, Clone)]
pub struct Quadratic {
    q: DenseMatrix,
    center: Vec<f64>,
    offset: f64,
    l: Option<f64>,
    opt: Option<Optimum>,
}

impl Quadratic {
    /// ½xᵀQx; minimizer 0 with value 0 whenever Q is positive semidefinite.
    pub fn new(q: DenseMatrix) -> Result<Self> {
        if q.rows != q.cols {
            return Err(Error::Usage(format!("Q must be square, got {}x{}", q.rows, q.cols)));
        }
        let n = q.rows;
        Ok(Quadratic {
            q,
            center: vec![0.0; n],
            offset: 0.0,
            l: None,
            opt: Some(Optimum { f_star: 0.0, x_star: Some(vec![0.0; n]) }),
        })
    }

    /// ½(x − c)ᵀQ(x − c) + offset.
    pub fn centered(q: DenseMatrix, center: Vec<f64>, offset: f64) -> Result<Self> {
        let mut me = Self::new(q)?;
        if center.len() != me.q.rows {
            return Err(Error::Usage("center has the wrong dimension".into()));
        }
        me.opt = Some(Optimum { f_star: offset, x_star: Some(center.clone()) });
        me.center = center;
        me.offset = offset;
        Ok(me)
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let l = d.iter().cloned().fold(0.0, f64::max);
        let mut me = Self::new(DenseMatrix::diagonal(d)).expect("square");
        me.l = Some(l);
        me
    }

    pub fn with_known_l(mut self, l: f64) -> Self {
        self.l = Some(l);
        self
    }

    pub fn without_optimum(mut self) -> Self {
        self.opt = None;
        self
    }

    pub fn hessian(&self) -> &DenseMatrix {
        &self.q
    }
}

impl Objective for Quadratic {
    fn dim(&self) -> usize {
        self.q.rows
    }

    fn value_grad(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let diff: Vec<f64> = x.iter().zip(&self.center).map(|(a, c)| a - c).collect();
        for (i, g) in grad.iter_mut().enumerate() {
            *g = dot(self.q.row(i), &diff);
        }
        0.5 * dot(&diff, grad) + self.offset
    }

    fn known_l(&self) -> Option<f64> {
        self.l
    }

    fn known_opt(&self) -> Option<&Optimum> {
        self.opt.as_ref()
    }
}

/// Random d-dimensional quadratic ½xᵀQx with spectrum in [0.05, 5] and λ_max = 5.
///
/// Q = H Λ H with H a product of three Householder reflections, so the
/// eigenvalues are known exactly and `known_l` is λ_max.
pub fn random_quadratic(d: usize, seed: u64) -> Quadratic {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (libm::log(0.05), libm::log(5.0));
    let mut lambda: Vec<f64> = (0..d).map(|_| libm::exp(lo + (hi - lo) * rng.random::<f64>())).collect();
    if let Some(first) = lambda.first_mut() {
        *first = 5.0;
    }
    let mut q = DenseMatrix::diagonal(&lambda);
    for _ in 0..3 {
        let mut u: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let nu = norm(&u);
        u.iter_mut().for_each(|x| *x /= nu);
        // Q <- (I - 2uuᵀ) Q (I - 2uuᵀ)
        let mut qu = vec![0.0; d];
        for (i, v) in qu.iter_mut().enumerate() {
            *v = dot(q.row(i), &u);
        }
        let uqu = dot(&u, &qu);
        for i in 0..d {
            for j in 0..d {
                q.data[i * d + j] += -2.0 * u[i] * qu[j] - 2.0 * qu[i] * u[j] + 4.0 * uqu * u[i] * u[j];
            }
        }
    }
    for i in 0..d {
        for j in 0..i {
            let avg = 0.5 * (q.data[i * d + j] + q.data[j * d + i]);
            q.data[i * d + j] = avg;
            q.data[j * d + i] = avg;
        }
    }
    lambda.sort_by(|a, b| b.total_cmp(a));
    Quadratic::new(q).expect("square").with_known_l(lambda[0])
}

/// f(x) = (1/m)‖Ax − b‖².
#[derive(Debug, Clone)]
pub struct LeastSquares {
    a: Matrix,
    b: Vec<f64>,
    l: Option<f64>,
    opt: Option<Optimum>,
}

impl LeastSquares {
    pub fn new(a: impl Into<Matrix>, b: Vec<f64>) -> Result<Self> {
        let a = a.into();
        if a.rows() != b.len() {
            return Err(Error::Usage(format!("A has {} rows but b has length {}", a.rows(), b.len())));
        }
        if a.rows() == 0 {
            return Err(Error::Usage("least squares needs at least one row".into()));
        }
        Ok(LeastSquares { a, b, l: None, opt: None })
    }

    /// Sets known_L = (2/m)·λ_max(AᵀA) from power iteration.
    pub fn with_known_l(mut self) -> Self {
        let lam = spectral_bound(&self.a).value;
        self.l = Some(2.0 / self.a.rows() as f64 * lam);
        self
    }

    pub fn with_optimum(mut self, opt: Optimum) -> Self {
        self.opt = Some(opt);
        self
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }
}

impl Objective for LeastSquares {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value_grad(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let m = self.a.rows() as f64;
        let mut r = vec![0.0; self.a.rows()];
        self.a.matvec(x, &mut r);
        for (ri, bi) in r.iter_mut().zip(&self.b) {
            *ri -= bi;
        }
        self.a.tmatvec(&r, grad);
        grad.iter_mut().for_each(|g| *g *= 2.0 / m);
        norm_sq(&r) / m
    }

    fn known_l(&self) -> Option<f64> {
        self.l
    }

    fn known_opt(&self) -> Option<&Optimum> {
        self.opt.as_ref()
    }
}

/// Synthetic least squares: A with iid U[0,1] entries, x⋆ uniform in the unit ball, b = Ax⋆.
pub fn synthetic_least_squares(m: usize, n: usize, seed: u64) -> (LeastSquares, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<f64> = (0..m * n).map(|_| rng.random::<f64>()).collect();
    let a = DenseMatrix::new(m, n, data).expect("sized");
    let mut x_star: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let radius = libm::pow(rng.random::<f64>(), 1.0 / n as f64);
    let nx = norm(&x_star);
    x_star.iter_mut().for_each(|v| *v *= radius / nx);
    let a = Matrix::Dense(a);
    let mut b = vec![0.0; m];
    a.matvec(&x_star, &mut b);
    let obj = LeastSquares::new(a, b)
        .expect("shapes agree")
        .with_known_l()
        .with_optimum(Optimum { f_star: 0.0, x_star: Some(x_star.clone()) });
    (obj, x_star)
}

/// Regularized logistic regression
/// f(x) = −(1/m)Σ[yᵢ log σ(aᵢᵀx) + (1−yᵢ) log(1−σ(aᵢᵀx))] + (γ/2)‖x‖².
#[derive(Debug, Clone)]
pub struct Logistic {
    a: Matrix,
    y: Vec<f64>,
    gamma: f64,
    l: Option<f64>,
    opt: Option<Optimum>,
}

/// log(1 + eᵘ) without overflow.
pub fn softplus(u: f64) -> f64 {
    u.max(0.0) + libm::log1p(libm::exp(-u.abs()))
}

pub fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + libm::exp(-t))
    } else {
        let e = libm::exp(t);
        e / (1.0 + e)
    }
}

impl Logistic {
    pub fn new(a: impl Into<Matrix>, y: Vec<f64>, gamma: f64) -> Result<Self> {
        let a = a.into();
        if a.rows() != y.len() {
            return Err(Error::Usage(format!("A has {} rows but there are {} labels", a.rows(), y.len())));
        }
        if a.rows() == 0 {
            return Err(Error::Usage("logistic regression needs at least one row".into()));
        }
        if let Some(i) = y.iter().position(|v| *v != 0.0 && *v != 1.0) {
            return Err(Error::Data(format!("label {} in row {} is not in {{0,1}}", y[i], i)));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::Usage(format!("regularization γ must be nonnegative, got {gamma}")));
        }
        Ok(Logistic { a, y, gamma, l: None, opt: None })
    }

    /// ¼λ_max(AᵀA), the data part of the smoothness bound.
    pub fn data_smoothness(&self) -> f64 {
        0.25 * spectral_bound(&self.a).value
    }

    /// Sets known_L = ¼λ_max(AᵀA) + γ.
    pub fn with_known_l(mut self) -> Self {
        self.l = Some(self.data_smoothness() + self.gamma);
        self
    }

    pub fn with_optimum(mut self, opt: Optimum) -> Self {
        self.opt = Some(opt);
        self
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn labels(&self) -> &[f64] {
        &self.y
    }
}

impl Objective for Logistic {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value_grad(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let m = self.a.rows() as f64;
        let mut t = vec![0.0; self.a.rows()];
        self.a.matvec(x, &mut t);
        let mut loss = 0.0;
        for (ti, yi) in t.iter_mut().zip(&self.y) {
            loss += if *yi == 1.0 { softplus(-*ti) } else { softplus(*ti) };
            *ti = (sigmoid(*ti) - yi) / m;
        }
        self.a.tmatvec(&t, grad);
        axpy(self.gamma, x, grad);
        loss / m + 0.5 * self.gamma * norm_sq(x)
    }

    fn known_l(&self) -> Option<f64> {
        self.l
    }

    fn known_opt(&self) -> Option<&Optimum> {
        self.opt.as_ref()
    }
}

/// The 2×2 fixture A = I, y = (1, 0) with γ > 0 and its optimum.
///
/// By symmetry x⋆ = (t, −t) where ½σ(−t) = γt; t is found by bisection to
/// the last bit, and f⋆ = softplus(−t) + γt².
pub fn logistic_fixture(gamma: f64) -> Result<Logistic> {
    if !(gamma > 0.0) {
        return Err(Error::Usage("the fixture needs γ > 0 to have a minimizer".into()));
    }
    let h = |t: f64| 0.5 * sigmoid(-t) - gamma * t;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while h(hi) > 0.0 {
        hi *= 2.0;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = if h(lo).abs() <= h(hi).abs() { lo } else { hi };
    let obj = Logistic::new(DenseMatrix::identity(2), vec![1.0, 0.0], gamma)?.with_known_l();
    let x_star = vec![t, -t];
    let mut g = [0.0; 2];
    let f_star = obj.value_grad(&x_star, &mut g);
    Ok(obj.with_optimum(Optimum { f_star, x_star: Some(x_star) }))
}

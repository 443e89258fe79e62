//! Hermitian operators, spectra, and dense spectral calculus.
//!
//! Everything here is exact-arithmetic-free desk-scale numerics: a cyclic
//! Jacobi eigensolver for complex Hermitian matrices drives matrix functions
//! (exponentials, powers, time evolution), entropies and norms.

use alloc::vec::Vec;

use crate::matrix::{Complex64, ComplexMatrix};
use crate::{Error, Result};

/// Hermiticity tolerance enforced at construction.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Maximum dimension accepted by the eigensolver.
pub const MAX_EIG_DIM: usize = 512;
/// Exponent magnitude above which `expm` reports overflow.
pub const EXP_OVERFLOW: f64 = 700.0;

/// A dense complex square matrix asserted Hermitian at construction and
/// symmetrized to `(A + A^dag)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidOperator("Hermitian operator must be square"));
        }
        let scale = matrix.max_norm().max(1.0);
        if matrix.hermiticity_defect() > HERMITICITY_TOL * scale {
            return Err(Error::InvalidOperator("matrix is not Hermitian"));
        }
        let sym = matrix.add(&matrix.adjoint()).scale_re(0.5);
        Ok(Self { matrix: sym })
    }

    pub fn zero(n: usize) -> Self {
        Self { matrix: ComplexMatrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(n) }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self { matrix: ComplexMatrix::from_real_diag(diag) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Entrywise complex conjugate (still Hermitian, same spectrum).
    pub fn conjugate(&self) -> Self {
        Self { matrix: self.matrix.conjugate() }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { matrix: self.matrix.scale_re(c) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { matrix: self.matrix.add(&other.matrix) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { matrix: self.matrix.sub(&other.matrix) }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.matrix.max_norm() <= tol
    }
}

/// Sorted (non-decreasing) real eigenvalue multiset.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Sorts the input; multiplicities are kept.
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Rescaled spectrum, re-sorted (a negative factor reverses the order).
    pub fn scaled(&self, f: f64) -> Self {
        Self::new(self.values.iter().map(|v| v * f).collect())
    }

    /// Each value repeated `k` times.
    pub fn duplicated(&self, k: usize) -> Self {
        let mut out = Vec::with_capacity(self.values.len() * k);
        for &v in &self.values {
            for _ in 0..k {
                out.push(v);
            }
        }
        Self::new(out)
    }

    /// Maximum sorted-pairwise gap to another spectrum of equal length.
    pub fn max_gap(&self, other: &Spectrum) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| libm::fabs(a - b))
            .fold(0.0, f64::max)
    }
}

/// Density operator: Hermitian, positive semi-definite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    op: HermitianOperator,
}

/// Eigenvalue floor tolerance for density states.
pub const STATE_PSD_TOL: f64 = 1e-10;

impl DensityState {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let op = HermitianOperator::new(matrix)?;
        let tr = op.matrix().trace();
        if libm::fabs(tr.re - 1.0) > STATE_PSD_TOL || libm::fabs(tr.im) > STATE_PSD_TOL {
            return Err(Error::InvalidOperator("state trace must be 1"));
        }
        let (spec, _) = eig_hermitian(&op)?;
        if spec.values().iter().any(|&v| v < -STATE_PSD_TOL) {
            return Err(Error::InvalidOperator("state has negative eigenvalue"));
        }
        Ok(Self { op })
    }

    pub fn pure(dim: usize, index: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(index, index)] = Complex64::new(1.0, 0.0);
        Self { op: HermitianOperator { matrix: m } }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let m = ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64);
        Self { op: HermitianOperator { matrix: m } }
    }

    pub fn from_real_diag(diag: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diag(diag))
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }
}

/// Orthogonal projector: Hermitian with `P^2 = P` within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    op: HermitianOperator,
}

/// Idempotency tolerance for projectors.
pub const PROJECTOR_TOL: f64 = 1e-9;

impl Projector {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let op = HermitianOperator::new(matrix)?;
        let defect = op.matrix().mul(op.matrix()).sub(op.matrix()).max_norm();
        if defect > PROJECTOR_TOL {
            return Err(Error::InvalidOperator("matrix is not idempotent"));
        }
        Ok(Self { op })
    }

    pub fn identity(n: usize) -> Self {
        Self { op: HermitianOperator::identity(n) }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn complement(&self) -> Self {
        let m = ComplexMatrix::identity(self.dim()).sub(self.matrix());
        Self { op: HermitianOperator { matrix: m } }
    }

    /// Rank = number of eigenvalues near 1.
    pub fn rank(&self) -> usize {
        let (spec, _) = eig_hermitian(&self.op).expect("projector dims are valid");
        spec.values().iter().filter(|&&v| v > 0.5).count()
    }
}

/// Maximum cyclic Jacobi sweeps before giving up.
const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi with
/// complex plane rotations. Returns the sorted spectrum and the unitary of
/// eigenvectors (columns ordered to match).
pub fn eig_hermitian(a: &HermitianOperator) -> Result<(Spectrum, ComplexMatrix)> {
    let n = a.dim();
    if n > MAX_EIG_DIM {
        return Err(Error::InvalidOperator("dimension exceeds eigensolver limit"));
    }
    let mut m = a.matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.max_norm().max(1.0);
    let tol = 1e-15 * scale;

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m[(p, q)].norm());
            }
        }
        if off <= tol {
            let mut vals: Vec<(f64, usize)> =
                (0..n).map(|i| (m[(i, i)].re, i)).collect();
            vals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let mut sorted_v = ComplexMatrix::zeros(n, n);
            for (new_col, &(_, old_col)) in vals.iter().enumerate() {
                for r in 0..n {
                    sorted_v[(r, new_col)] = v[(r, old_col)];
                }
            }
            let spectrum = Spectrum { values: vals.into_iter().map(|(x, _)| x).collect() };
            return Ok((spectrum, sorted_v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let b = apq.norm();
                if b <= tol * 1e-2 {
                    continue;
                }
                let phase = apq / b; // e^{i phi}
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                // J[p][p]=c, J[p][q]=s*phase, J[q][p]=-s*conj(phase), J[q][q]=c.
                let jpq = phase.scale(s);
                // Columns: M <- M J
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip.scale(c) - miq * jpq.conj();
                    m[(i, q)] = mip * jpq + miq.scale(c);
                }
                // Rows: M <- J^dag M
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj.scale(c) - mqj * jpq;
                    m[(q, j)] = mpj * jpq.conj() + mqj.scale(c);
                }
                // Accumulate V <- V J
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip.scale(c) - viq * jpq.conj();
                    v[(i, q)] = vip * jpq + viq.scale(c);
                }
            }
        }
    }
    Err(Error::NonConvergence("cyclic Jacobi"))
}

/// `e^{sA}` via eigendecomposition; exact identity for s = 0.
pub fn expm_hermitian(a: &HermitianOperator, s: f64) -> Result<HermitianOperator> {
    if s == 0.0 {
        return Ok(HermitianOperator::identity(a.dim()));
    }
    let (spec, v) = eig_hermitian(a)?;
    let max_exp = spec
        .values()
        .iter()
        .map(|&l| libm::fabs(s * l))
        .fold(0.0, f64::max);
    if max_exp > EXP_OVERFLOW {
        return Err(Error::Overflow { max_exponent: max_exp });
    }
    let diag: Vec<f64> = spec.values().iter().map(|&l| libm::exp(s * l)).collect();
    let d = ComplexMatrix::from_real_diag(&diag);
    let m = d.conjugate_by(&v);
    Ok(HermitianOperator { matrix: m.add(&m.adjoint()).scale_re(0.5) })
}

/// Unitary time evolution `e^{-iAt}`.
pub fn evolution(a: &HermitianOperator, t: f64) -> Result<ComplexMatrix> {
    let (spec, v) = eig_hermitian(a)?;
    let n = a.dim();
    let mut d = ComplexMatrix::zeros(n, n);
    for (i, &l) in spec.values().iter().enumerate() {
        d[(i, i)] = Complex64::new(libm::cos(-l * t), libm::sin(-l * t));
    }
    Ok(d.conjugate_by(&v))
}

/// `rho^c` through the eigenbasis; eigenvalues below `floor` reject the input.
pub fn matrix_power(rho: &DensityState, c: f64, floor: f64) -> Result<HermitianOperator> {
    let (spec, v) = eig_hermitian(rho.operator())?;
    if spec.values().iter().any(|&l| l < floor) {
        return Err(Error::SingularState);
    }
    let diag: Vec<f64> = spec.values().iter().map(|&l| libm::pow(l, c)).collect();
    let m = ComplexMatrix::from_real_diag(&diag).conjugate_by(&v);
    Ok(HermitianOperator { matrix: m.add(&m.adjoint()).scale_re(0.5) })
}

/// Eigenvalue clamp below which `lambda ln lambda` is taken as zero.
pub const ENTROPY_CLAMP: f64 = 1e-14;

/// Von Neumann entropy in nats, `-sum lambda ln lambda`.
pub fn von_neumann_entropy(rho: &DensityState) -> f64 {
    let (spec, _) = eig_hermitian(rho.operator()).expect("state dims are valid");
    let mut s = 0.0;
    for &l in spec.values() {
        if l > ENTROPY_CLAMP {
            s -= l * libm::log(l);
        }
    }
    s.max(0.0)
}

/// Shannon entropy of a weight vector in nats, with `0 ln 0 = 0`.
pub fn shannon_entropy(weights: &[f64]) -> f64 {
    let mut s = 0.0;
    for &w in weights {
        if w > ENTROPY_CLAMP {
            s -= w * libm::log(w);
        }
    }
    s
}

/// Operator norm `max |lambda_i|` of a Hermitian operator.
pub fn operator_norm(a: &HermitianOperator) -> f64 {
    let (spec, _) = eig_hermitian(a).expect("operator dims are valid");
    spec.values().iter().map(|&l| libm::fabs(l)).fold(0.0, f64::max)
}

/// Trace norm `sum |lambda_i|` of a Hermitian operator.
pub fn trace_norm(a: &HermitianOperator) -> f64 {
    let (spec, _) = eig_hermitian(a).expect("operator dims are valid");
    spec.values().iter().map(|&l| libm::fabs(l)).sum()
}

/// `A^{+p} (+) conj(A)^{+q}`: p copies of A followed by q entrywise
/// conjugates on the block diagonal.
pub fn block_embed(a: &HermitianOperator, p: usize, q: usize) -> Result<HermitianOperator> {
    if p + q == 0 {
        return Err(Error::InvalidArity);
    }
    let conj = a.conjugate();
    let mut blocks: Vec<&ComplexMatrix> = Vec::with_capacity(p + q);
    for _ in 0..p {
        blocks.push(a.matrix());
    }
    for _ in 0..q {
        blocks.push(conj.matrix());
    }
    let m = ComplexMatrix::direct_sum(&blocks);
    Ok(HermitianOperator { matrix: m })
}

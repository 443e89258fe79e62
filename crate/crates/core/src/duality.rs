//! The canonical duality map `Phi(A) = f(A) U (A^{+p} (+) conj(A)^{+q}) U^dag`,
//! its compatible state map, and exact composition.
//!
//! Verification routines return a [`Report`] rather than erroring when a
//! property fails to hold; errors are reserved for malformed inputs.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::matrix::{Complex64, ComplexMatrix};
use crate::opscore::{
    block_embed, eig_hermitian, evolution, trace_norm, DensityState, HermitianOperator, Projector,
};
use crate::random::{self, Rng};
use crate::{Error, Result};

/// Unitarity tolerance for a duality map's internal unitary.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Outcome of a numerical verification: whether it held within tolerance and
/// the worst observed deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Report {
    pub pass: bool,
    pub deviation: f64,
}

impl Report {
    pub fn from_deviation(deviation: f64, tol: f64) -> Self {
        Self { pass: deviation <= tol, deviation }
    }

    /// Combine two reports: passes iff both pass, deviation is the worse one.
    pub fn and(self, other: Report) -> Report {
        Report { pass: self.pass && other.pass, deviation: self.deviation.max(other.deviation) }
    }
}

/// The spectrum-rescaling factor `f` attached to a duality map.
///
/// `f` must be basis-independent (a function of the spectrum alone), nonzero
/// on nonzero operators, and evaluates to 0 on the zero operator by the
/// convention that the zero operator maps to zero.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalingFunction {
    /// `f(A) = c` for all nonzero A.
    Constant(f64),
    /// The coupling-rescaling factor of the 2D Ising duality,
    /// `-ln tanh(J beta) / (2 J beta)`; constant in A for fixed parameters.
    KramersWannier { j: f64, beta: f64 },
    /// Finite lookup table keyed by spectrum fingerprint, with a declared
    /// Lipschitz bound for use in composition error estimates.
    Table { entries: Vec<(Vec<f64>, f64)>, lipschitz: f64 },
    /// `f2(Phi1(A)) * f1(A)` arising from exact composition; `inner` carries
    /// f1 as its own scaling function.
    Composed { outer: Box<ScalingFunction>, inner: Box<DualityMap> },
}

/// Fingerprint resolution for table-kind scaling functions.
pub const FINGERPRINT_STEP: f64 = 1e-9;

/// Sorted spectrum rounded to the fingerprint grid.
pub fn spectrum_fingerprint(a: &HermitianOperator) -> Vec<f64> {
    let (spec, _) = eig_hermitian(a).expect("operator dims are valid");
    spec.values()
        .iter()
        .map(|&v| libm::round(v / FINGERPRINT_STEP) * FINGERPRINT_STEP)
        .collect()
}

impl ScalingFunction {
    /// Evaluate on a Hermitian operator. Zero operator gives 0 by convention.
    pub fn eval(&self, a: &HermitianOperator) -> Result<f64> {
        if a.is_zero(0.0) {
            return Ok(0.0);
        }
        match self {
            ScalingFunction::Constant(c) => Ok(*c),
            ScalingFunction::KramersWannier { j, beta } => {
                let k = j * beta;
                if *j <= 0.0 || *beta <= 0.0 {
                    return Err(Error::ScalingUndefined);
                }
                Ok(-libm::log(libm::tanh(k)) / (2.0 * k))
            }
            ScalingFunction::Table { entries, .. } => {
                let fp = spectrum_fingerprint(a);
                for (key, value) in entries {
                    if key == &fp {
                        return Ok(*value);
                    }
                }
                Err(Error::ScalingUndefined)
            }
            ScalingFunction::Composed { outer, inner } => {
                let f1 = inner.f.eval(a)?;
                let image = inner.apply(a)?;
                Ok(outer.eval(&image)? * f1)
            }
        }
    }
}

/// Canonical duality map between a system of dimension `n` and one of
/// dimension `(p+q) n`: `p` direct copies, `q` conjugated copies, a basis
/// unitary `U` and a spectrum-rescaling function `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityMap {
    n: usize,
    p: usize,
    q: usize,
    u: ComplexMatrix,
    f: ScalingFunction,
}

impl DualityMap {
    pub fn new(n: usize, p: usize, q: usize, u: ComplexMatrix, f: ScalingFunction) -> Result<Self> {
        if n == 0 || p + q == 0 {
            return Err(Error::InvalidArity);
        }
        let m = (p + q) * n;
        if u.rows() != m || u.cols() != m {
            return Err(Error::DimMismatch { expected: m, got: u.rows() });
        }
        if u.unitarity_defect() > UNITARITY_TOL {
            return Err(Error::InvalidOperator("duality unitary is not unitary"));
        }
        Ok(Self { n, p, q, u, f })
    }

    /// The identity duality: p = 1, q = 0, U = I, f = 1.
    pub fn identity(n: usize) -> Self {
        Self { n, p: 1, q: 0, u: ComplexMatrix::identity(n), f: ScalingFunction::Constant(1.0) }
    }

    /// Pure conjugation: p = 0, q = 1, U = I, f = 1.
    pub fn conjugation(n: usize) -> Self {
        Self { n, p: 0, q: 1, u: ComplexMatrix::identity(n), f: ScalingFunction::Constant(1.0) }
    }

    /// Random map with a Haar unitary and the given arities and scaling.
    pub fn random(n: usize, p: usize, q: usize, f: ScalingFunction, rng: &mut Rng) -> Self {
        let u = random::random_unitary((p + q) * n, rng);
        Self { n, p, q, u, f }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Target dimension `(p+q) n`.
    pub fn m(&self) -> usize {
        (self.p + self.q) * self.n
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn scaling(&self) -> &ScalingFunction {
        &self.f
    }

    /// Same map with a different scaling function.
    pub fn with_scaling(&self, f: ScalingFunction) -> Self {
        Self { f, ..self.clone() }
    }

    /// `Phi(A) = f(A) U (A^{+p} (+) conj(A)^{+q}) U^dag`.
    pub fn apply(&self, a: &HermitianOperator) -> Result<HermitianOperator> {
        if a.dim() != self.n {
            return Err(Error::DimMismatch { expected: self.n, got: a.dim() });
        }
        let fa = self.f.eval(a)?;
        let embedded = block_embed(a, self.p, self.q)?;
        let rotated = embedded.matrix().conjugate_by(&self.u).scale_re(fa);
        // Round off conjugation noise so downstream constructors accept it.
        let sym = rotated.add(&rotated.adjoint()).scale_re(0.5);
        HermitianOperator::new(sym)
    }

    /// The bare encoding `U (A^{+p} (+) conj(A)^{+q}) U^dag` without `f`.
    pub fn encode(&self, a: &HermitianOperator) -> Result<HermitianOperator> {
        if a.dim() != self.n {
            return Err(Error::DimMismatch { expected: self.n, got: a.dim() });
        }
        let embedded = block_embed(a, self.p, self.q)?;
        let rotated = embedded.matrix().conjugate_by(&self.u);
        HermitianOperator::new(rotated.add(&rotated.adjoint()).scale_re(0.5))
    }
}

/// Alias matching the operational name: apply the duality map to an operator.
pub fn apply_map(phi: &DualityMap, a: &HermitianOperator) -> Result<HermitianOperator> {
    phi.apply(a)
}

/// Spectral axiom: the image spectrum is `f(A)` times the input spectrum,
/// each eigenvalue with multiplicity `p+q` (as a multiset).
pub fn verify_spectral_axiom(phi: &DualityMap, a: &HermitianOperator, tol: f64) -> Result<Report> {
    let image = phi.apply(a)?;
    let fa = phi.f.eval(a)?;
    let (in_spec, _) = eig_hermitian(a)?;
    let (out_spec, _) = eig_hermitian(&image)?;
    let expected = in_spec.scaled(fa).duplicated(phi.p + phi.q);
    let scale = out_spec
        .values()
        .iter()
        .map(|v| libm::fabs(*v))
        .fold(1.0, f64::max);
    Ok(Report::from_deviation(out_spec.max_gap(&expected) / scale, tol))
}

/// Constrained-scale-function identity on convex mixtures:
/// `Phi(sum p_i a_i) = f(sum p_i a_i) * sum (p_i / f(a_i)) Phi(a_i)`.
pub fn verify_convexity_identity(
    phi: &DualityMap,
    inputs: &[(f64, HermitianOperator)],
    tol: f64,
) -> Result<Report> {
    let total: f64 = inputs.iter().map(|(w, _)| *w).sum();
    if libm::fabs(total - 1.0) > 1e-12 || inputs.iter().any(|(w, _)| *w < 0.0 || *w > 1.0) {
        return Err(Error::InvalidDistribution);
    }
    let mut mix = HermitianOperator::zero(phi.n);
    for (w, a) in inputs {
        if a.is_zero(0.0) {
            return Err(Error::ZeroOperandInMixture);
        }
        mix = mix.add(&a.scale(*w));
    }
    let lhs = phi.apply(&mix)?;
    let f_mix = phi.f.eval(&mix)?;
    let mut rhs = ComplexMatrix::zeros(phi.m(), phi.m());
    for (w, a) in inputs {
        let fa = phi.f.eval(a)?;
        let term = phi.apply(a)?;
        rhs = rhs.add(&term.matrix().scale_re(w / fa));
    }
    rhs = rhs.scale_re(f_mix);
    let deviation = lhs.matrix().sub(&rhs).max_norm();
    let scale = lhs.matrix().max_norm().max(1.0);
    Ok(Report::from_deviation(deviation / scale, tol))
}

/// Tolerance used for the projector-image lemmas.
pub const PROJECTOR_LEMMA_TOL: f64 = 1e-9;

fn projector_image(phi: &DualityMap, p: &Projector, c: f64) -> Result<ComplexMatrix> {
    let input = HermitianOperator::new(p.matrix().scale_re(c))?;
    let f = phi.f.eval(&input)?;
    let image = phi.apply(&input)?;
    Ok(image.matrix().scale_re(1.0 / (c * f)))
}

fn idempotency_defect(m: &ComplexMatrix) -> f64 {
    m.mul(m).sub(m).max_norm()
}

/// Images of orthogonal (complement) projectors under the map, divided by
/// `c f(cP)`, are again orthogonal (complement) projectors; plus the
/// zero-corner structure fact: a projector with vanishing lower-right block
/// has vanishing off-diagonal blocks.
pub fn verify_projector_lemmas(phi: &DualityMap, seed: u64) -> Result<Report> {
    let mut rng = Rng::seeded(seed);
    let n = phi.n;
    let mut worst = 0.0f64;

    // Complement pair Q, I - Q.
    if n >= 2 {
        let q1 = random::random_projector(n, 1 + rng.index(n - 1), &mut rng);
        let q2 = q1.complement();
        let r1 = projector_image(phi, &q1, 1.0)?;
        let r2 = projector_image(phi, &q2, 1.0)?;
        worst = worst.max(idempotency_defect(&r1));
        worst = worst.max(idempotency_defect(&r2));
        worst = worst.max(r1.mul(&r2).max_norm());
        worst = worst.max(r1.add(&r2).sub(&ComplexMatrix::identity(phi.m())).max_norm());

        // Rescaled input: the constant is absorbed.
        let r1c = projector_image(phi, &q1, -3.0)?;
        worst = worst.max(idempotency_defect(&r1c));
        worst = worst.max(r1c.sub(&r1).max_norm());
    }

    // Mutually orthogonal, non-complementary pair.
    if n >= 3 {
        let u = random::random_unitary(n, &mut rng);
        let mut d1 = ComplexMatrix::zeros(n, n);
        d1[(0, 0)] = Complex64::new(1.0, 0.0);
        let mut d2 = ComplexMatrix::zeros(n, n);
        d2[(1, 1)] = Complex64::new(1.0, 0.0);
        let p1 = Projector::new(d1.conjugate_by(&u))?;
        let p2 = Projector::new(d2.conjugate_by(&u))?;
        let r1 = projector_image(phi, &p1, 1.0)?;
        let r2 = projector_image(phi, &p2, 1.0)?;
        worst = worst.max(idempotency_defect(&r1));
        worst = worst.max(idempotency_defect(&r2));
        worst = worst.max(r1.mul(&r2).max_norm());
    }

    // Zero lower-right corner forces zero off-diagonal blocks: build a
    // projector supported on the first k coordinates and inspect its blocks.
    if n >= 2 {
        let k = 1 + rng.index(n - 1);
        let w = random::random_projector(k, 1.max(k / 2), &mut rng);
        let mut p = ComplexMatrix::zeros(n, n);
        for i in 0..k {
            for j in 0..k {
                p[(i, j)] = w.matrix()[(i, j)];
            }
        }
        let mut off = 0.0f64;
        for i in 0..k {
            for j in k..n {
                off = off.max(p[(i, j)].norm()).max(p[(j, i)].norm());
            }
        }
        worst = worst.max(off);
    }

    Ok(Report::from_deviation(worst, PROJECTOR_LEMMA_TOL))
}

/// Weights `alpha_1..alpha_p` of a compatible state map; the conjugate-block
/// weights are identically zero and not represented.
#[derive(Debug, Clone, PartialEq)]
pub struct StateMap {
    weights: Vec<f64>,
}

impl StateMap {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::NoUnitaryBlocks);
        }
        let total: f64 = weights.iter().sum();
        if libm::fabs(total - 1.0) > 1e-12 || weights.iter().any(|&w| !(0.0..=1.0).contains(&w)) {
            return Err(Error::InvalidDistribution);
        }
        Ok(Self { weights })
    }

    pub fn uniform(p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::NoUnitaryBlocks);
        }
        Ok(Self { weights: alloc::vec![1.0 / p as f64; p] })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `Phi_state(rho) = U ( (+)_i alpha_i rho (+) 0...0 ) U^dag`.
pub fn apply_state_map(phi: &DualityMap, w: &StateMap, rho: &DensityState) -> Result<DensityState> {
    if phi.p == 0 {
        return Err(Error::NoUnitaryBlocks);
    }
    if w.weights.len() != phi.p {
        return Err(Error::DimMismatch { expected: phi.p, got: w.weights.len() });
    }
    if rho.dim() != phi.n {
        return Err(Error::DimMismatch { expected: phi.n, got: rho.dim() });
    }
    let n = phi.n;
    let m = phi.m();
    let mut block = ComplexMatrix::zeros(m, m);
    for (b, &alpha) in w.weights.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                block[(b * n + i, b * n + j)] = rho.matrix()[(i, j)].scale(alpha);
            }
        }
    }
    let rotated = block.conjugate_by(&phi.u);
    DensityState::new(rotated.add(&rotated.adjoint()).scale_re(0.5))
}

/// Measurement-outcome preservation:
/// `Tr[Phi(A) Phi_state(rho)] = f(A) Tr[A rho]`.
pub fn verify_born_rule(
    phi: &DualityMap,
    w: &StateMap,
    a: &HermitianOperator,
    rho: &DensityState,
    tol: f64,
) -> Result<Report> {
    let image = phi.apply(a)?;
    let dual_state = apply_state_map(phi, w, rho)?;
    let lhs = image.matrix().mul(dual_state.matrix()).trace().re;
    let fa = phi.f.eval(a)?;
    let rhs = fa * a.matrix().mul(rho.matrix()).trace().re;
    let deviation = libm::fabs(lhs - rhs) / libm::fabs(rhs).max(1.0);
    Ok(Report::from_deviation(deviation, tol))
}

/// Time-dynamics consistency at the rescaled time `t / f(H)`:
/// mapping the evolved state equals evolving the mapped state under `Phi(H)`.
pub fn verify_time_dynamics(
    phi: &DualityMap,
    w: &StateMap,
    h: &HermitianOperator,
    rho: &DensityState,
    t: f64,
    tol: f64,
) -> Result<Report> {
    let fh = phi.f.eval(h)?;
    if fh == 0.0 {
        return Err(Error::ScalingUndefined);
    }
    let v = evolution(h, t)?;
    let evolved = rho.matrix().conjugate_by(&v);
    let evolved = DensityState::new(evolved.add(&evolved.adjoint()).scale_re(0.5))?;
    let lhs = apply_state_map(phi, w, &evolved)?;

    let h_dual = phi.apply(h)?;
    let v_dual = evolution(&h_dual, t / fh)?;
    let mapped = apply_state_map(phi, w, rho)?;
    let rhs = mapped.matrix().conjugate_by(&v_dual);

    let diff = lhs.matrix().sub(&rhs);
    let diff = HermitianOperator::new(diff.add(&diff.adjoint()).scale_re(0.5))?;
    Ok(Report::from_deviation(trace_norm(&diff), tol))
}

/// Exact composition `Phi2 after Phi1`: again a canonical duality map with
/// arities `p = p1 p2 + q1 q2`, `q = q1 p2 + p1 q2` and scaling
/// `f2(Phi1(A)) f1(A)`.
pub fn compose_exact(phi2: &DualityMap, phi1: &DualityMap) -> Result<DualityMap> {
    if phi2.n != phi1.m() {
        return Err(Error::DimMismatch { expected: phi1.m(), got: phi2.n });
    }
    let n = phi1.n;
    let (p1, q1) = (phi1.p, phi1.q);
    let (p2, q2) = (phi2.p, phi2.q);
    let p = p1 * p2 + q1 * q2;
    let q = q1 * p2 + p1 * q2;

    // Middle layer: p2 copies of U1 then q2 copies of conj(U1).
    let u1c = phi1.u.conjugate();
    let mut blocks: Vec<&ComplexMatrix> = Vec::with_capacity(p2 + q2);
    for _ in 0..p2 {
        blocks.push(&phi1.u);
    }
    for _ in 0..q2 {
        blocks.push(&u1c);
    }
    let w = ComplexMatrix::direct_sum(&blocks);

    // Permutation sending the canonical block order (p direct copies first,
    // then q conjugated) to the nested order produced by the composition:
    // outer direct copies carry (A^{+p1}, conj A^{+q1}), outer conjugated
    // copies carry (conj A^{+p1}, A^{+q1}).
    let mut sigma = Vec::with_capacity(p + q);
    let mut next_direct = 0usize;
    let mut next_conj = p;
    for outer in 0..(p2 + q2) {
        let outer_conj = outer >= p2;
        for inner in 0..(p1 + q1) {
            let inner_conj = inner >= p1;
            if outer_conj == inner_conj {
                sigma.push(next_direct);
                next_direct += 1;
            } else {
                sigma.push(next_conj);
                next_conj += 1;
            }
        }
    }
    let m = (p + q) * n;
    let mut pi = ComplexMatrix::zeros(m, m);
    for (t, &src) in sigma.iter().enumerate() {
        for i in 0..n {
            pi[(t * n + i, src * n + i)] = Complex64::new(1.0, 0.0);
        }
    }

    let u = phi2.u.mul(&w).mul(&pi);
    let f = match (&phi2.f, &phi1.f) {
        (ScalingFunction::Constant(c2), ScalingFunction::Constant(c1)) => {
            ScalingFunction::Constant(c1 * c2)
        }
        _ => ScalingFunction::Composed {
            outer: Box::new(phi2.f.clone()),
            inner: Box::new(phi1.clone()),
        },
    };
    DualityMap::new(n, p, q, u, f)
}

//! Approximate dualities: a declared perturbation of an exact map together
//! with subspace restriction and error budget, plus the audited bounds on
//! similarity, composition, eigenvalues, partition functions and dynamics.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::duality::{apply_state_map, compose_exact, DualityMap, StateMap};
use crate::matrix::ComplexMatrix;
use crate::opscore::{
    eig_hermitian, evolution, operator_norm, trace_norm, DensityState, HermitianOperator,
    Projector,
};
use crate::random::{self, Rng};
use crate::{Error, Result};

/// Slack added to the right-hand side when deciding `pass`.
pub const BOUND_SLACK: f64 = 1e-12;

/// One audited inequality: the measured quantity and its proven bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs_bound: f64,
    pub pass: bool,
}

impl BoundReport {
    fn inequality(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs_bound: rhs, pass: lhs <= rhs + BOUND_SLACK }
    }

    fn equality(lhs: f64, rhs: f64, tol: f64) -> Self {
        Self { lhs, rhs_bound: rhs, pass: libm::fabs(lhs - rhs) <= tol }
    }
}

/// Error-weight function `k(A)` multiplying the budget `epsilon`.
#[derive(Debug, Clone)]
pub enum KFunction {
    /// `k(A) = c`.
    Constant(f64),
    /// `k(A) = c * max(1, ||A||)`.
    NormScaled(f64),
    /// Weight assembled by approximate composition; evaluated lazily.
    Composed { first: Box<ApproxDuality>, second: Box<ApproxDuality> },
}

impl KFunction {
    pub fn eval(&self, a: &HermitianOperator) -> Result<f64> {
        match self {
            KFunction::Constant(c) => Ok(*c),
            KFunction::NormScaled(c) => Ok(c * operator_norm(a).max(1.0)),
            KFunction::Composed { first, second } => {
                // k(A) = k2(restricted image) + L2 k1(A)^2 e1
                //      + L2 |f1(A)| ||A|| k1(A) + |f2(Phi1(A))| k1(A).
                let restricted = first.restricted_perturbed(a)?;
                let k2_img = second.k.eval(&restricted)?;
                let k1 = first.k.eval(a)?;
                let l2 = second.lipschitz;
                let f1 = first.exact.scaling().eval(a)?;
                let image = first.exact.apply(a)?;
                let f2 = second.exact.scaling().eval(&image)?;
                Ok(k2_img
                    + l2 * k1 * k1 * first.epsilon
                    + l2 * libm::fabs(f1) * operator_norm(a) * k1
                    + libm::fabs(f2) * k1)
            }
        }
    }
}

/// How the perturbed map deviates from the exact one.
#[derive(Debug, Clone)]
pub enum Perturbation {
    /// `Phi~(A) = Phi(A) + scale * k(A) * E` with `E` a seeded random
    /// Hermitian of unit operator norm; ground-truth defect scale is `scale`.
    Additive { seed: u64, scale: f64 },
    /// Nested application produced by approximate composition.
    Composed { first: Box<ApproxDuality>, second: Box<ApproxDuality> },
}

/// An exact duality map plus declared perturbation, subspace restriction `S`,
/// budget `epsilon`, weight `k`, locality distance `eta`, and the Lipschitz
/// constant of the scaling function on the working set.
#[derive(Debug, Clone)]
pub struct ApproxDuality {
    pub exact: DualityMap,
    pub perturbation: Perturbation,
    pub s: Projector,
    pub epsilon: f64,
    pub k: KFunction,
    pub eta: f64,
    pub lipschitz: f64,
}

impl ApproxDuality {
    pub fn new(
        exact: DualityMap,
        perturbation: Perturbation,
        s: Projector,
        epsilon: f64,
        k: KFunction,
        eta: f64,
        lipschitz: f64,
    ) -> Result<Self> {
        if s.dim() != exact.m() {
            return Err(Error::DimMismatch { expected: exact.m(), got: s.dim() });
        }
        if epsilon < 0.0 || eta < 0.0 {
            return Err(Error::DomainError("error budgets must be nonnegative"));
        }
        Ok(Self { exact, perturbation, s, epsilon, k, eta, lipschitz })
    }

    /// Wrap an exact map with zero error budget and trivial restriction.
    pub fn from_exact(exact: DualityMap, eta: f64, lipschitz: f64) -> Self {
        let m = exact.m();
        Self {
            exact,
            perturbation: Perturbation::Additive { seed: 0, scale: 0.0 },
            s: Projector::identity(m),
            epsilon: 0.0,
            k: KFunction::Constant(1.0),
            eta,
            lipschitz,
        }
    }

    /// Additively perturbed map: `epsilon` is set to the ground-truth scale.
    pub fn perturbed(exact: DualityMap, seed: u64, scale: f64, k: KFunction, lipschitz: f64) -> Self {
        let m = exact.m();
        Self {
            exact,
            perturbation: Perturbation::Additive { seed, scale },
            s: Projector::identity(m),
            epsilon: scale,
            k,
            eta: 0.0,
            lipschitz,
        }
    }

    fn noise(&self, seed: u64) -> HermitianOperator {
        let mut rng = Rng::seeded(seed);
        let e = random::random_hermitian(self.exact.m(), &mut rng);
        e.scale(1.0 / operator_norm(&e))
    }

    /// `Phi~(A)` under the declared perturbation.
    pub fn apply_perturbed(&self, a: &HermitianOperator) -> Result<HermitianOperator> {
        match &self.perturbation {
            Perturbation::Additive { seed, scale } => {
                let base = self.exact.apply(a)?;
                if *scale == 0.0 {
                    return Ok(base);
                }
                let ka = self.k.eval(a)?;
                Ok(base.add(&self.noise(*seed).scale(scale * ka)))
            }
            Perturbation::Composed { first, second } => {
                let inner = first.restricted_perturbed(a)?;
                second.apply_perturbed(&inner)
            }
        }
    }

    /// `S Phi~(A) S`: the perturbed image compressed to the subspace.
    pub fn restricted_perturbed(&self, a: &HermitianOperator) -> Result<HermitianOperator> {
        let img = self.apply_perturbed(a)?;
        let c = self.s.matrix().mul(img.matrix()).mul(self.s.matrix());
        HermitianOperator::new(c.add(&c.adjoint()).scale_re(0.5))
    }

    /// `|| S Phi~(A) S - Phi(A) ||` (operator norm).
    pub fn defect(&self, a: &HermitianOperator) -> Result<f64> {
        if a.dim() != self.exact.n() {
            return Err(Error::DimMismatch { expected: self.exact.n(), got: a.dim() });
        }
        let restricted = self.restricted_perturbed(a)?;
        let exact = self.exact.apply(a)?;
        Ok(operator_norm(&restricted.sub(&exact)))
    }
}

/// Spectral norm of a general (not necessarily Hermitian) matrix, via the
/// largest eigenvalue of `X^dag X`.
fn spectral_norm(x: &ComplexMatrix) -> f64 {
    let gram = x.adjoint().mul(x);
    let h = HermitianOperator::new(gram.add(&gram.adjoint()).scale_re(0.5))
        .expect("Gram matrix is Hermitian");
    let (spec, _) = eig_hermitian(&h).expect("dims are valid");
    libm::sqrt(spec.values().last().copied().unwrap_or(0.0).max(0.0))
}

/// Difference of two exact maps on the same input, bounded by
/// `(sqrt f + sqrt f') || sqrt(f) V - sqrt(f') V' || * ||M||`.
pub fn similar_map_bound(
    phi: &DualityMap,
    phi2: &DualityMap,
    m: &HermitianOperator,
) -> Result<BoundReport> {
    if phi.n() != phi2.n() || phi.m() != phi2.m() || phi.p() != phi2.p() || phi.q() != phi2.q() {
        return Err(Error::DimMismatch { expected: phi.m(), got: phi2.m() });
    }
    let f = phi.scaling().eval(m)?;
    let f2 = phi2.scaling().eval(m)?;
    if f <= 0.0 || f2 <= 0.0 {
        return Err(Error::NegativeScaling);
    }
    let lhs = operator_norm(&phi.apply(m)?.sub(&phi2.apply(m)?));
    let v_gap = spectral_norm(
        &phi.unitary()
            .scale_re(libm::sqrt(f))
            .sub(&phi2.unitary().scale_re(libm::sqrt(f2))),
    );
    let rhs = (libm::sqrt(f) + libm::sqrt(f2)) * v_gap * operator_norm(m);
    Ok(BoundReport::inequality(lhs, rhs))
}

/// One map, two inputs: `||Phi(M) - Phi(M')|| = ||f(M)M - f(M')M'||` exactly.
pub fn same_map_two_inputs_bound(
    phi: &DualityMap,
    m1: &HermitianOperator,
    m2: &HermitianOperator,
) -> Result<BoundReport> {
    let lhs = operator_norm(&phi.apply(m1)?.sub(&phi.apply(m2)?));
    let f1 = phi.scaling().eval(m1)?;
    let f2 = phi.scaling().eval(m2)?;
    let rhs = operator_norm(&m1.scale(f1).sub(&m2.scale(f2)));
    Ok(BoundReport::equality(lhs, rhs, 1e-9))
}

/// Compose two approximate dualities: budgets add, the weight function is
/// assembled from the propagation formula and evaluated lazily per input.
pub fn compose_approx(phi2t: &ApproxDuality, phi1t: &ApproxDuality) -> Result<ApproxDuality> {
    let exact = compose_exact(&phi2t.exact, &phi1t.exact)?;
    let first = Box::new(phi1t.clone());
    let second = Box::new(phi2t.clone());
    Ok(ApproxDuality {
        exact,
        perturbation: Perturbation::Composed { first: first.clone(), second: second.clone() },
        s: phi2t.s.clone(),
        epsilon: phi1t.epsilon + phi2t.epsilon,
        k: KFunction::Composed { first, second },
        eta: phi1t.eta + phi2t.eta,
        // The composed scaling's Lipschitz constant is not derived here; the
        // outer map's declared constant is carried for further composition.
        lipschitz: phi2t.lipschitz,
    })
}

/// Weyl-style eigenvalue pinning: each eigenvalue of the restricted
/// perturbed image lies within `k(A) epsilon` of the corresponding
/// `f(A) lambda_i(A)` (each repeated `p+q` times). One report per slot.
pub fn eigenvalue_bound(
    approx: &ApproxDuality,
    a: &HermitianOperator,
) -> Result<Vec<BoundReport>> {
    let m = approx.exact.m();
    let rank = approx.s.rank();
    if rank != m {
        return Err(Error::RankMismatch { expected: m, got: rank });
    }
    let fa = approx.exact.scaling().eval(a)?;
    let (in_spec, _) = eig_hermitian(a)?;
    let expected = in_spec.scaled(fa).duplicated(approx.exact.p() + approx.exact.q());
    let perturbed = approx.restricted_perturbed(a)?;
    let (out_spec, _) = eig_hermitian(&perturbed)?;
    let budget = approx.k.eval(a)? * approx.epsilon;
    Ok(expected
        .values()
        .iter()
        .zip(out_spec.values())
        .map(|(want, got)| BoundReport::inequality(libm::fabs(got - want), budget))
        .collect())
}

/// Relative partition-function error of the perturbed dual, truncated to the
/// low-energy subspace below `delta`, against the proven bound.
pub fn partition_bound(
    approx: &ApproxDuality,
    h: &HermitianOperator,
    beta: f64,
    delta: f64,
) -> Result<BoundReport> {
    if beta <= 0.0 {
        return Err(Error::DomainError("beta must be positive"));
    }
    let alpha = (approx.exact.p() + approx.exact.q()) as f64;
    let fh = approx.exact.scaling().eval(h)?;
    let h_norm = operator_norm(h);
    let (src_spec, _) = eig_hermitian(h)?;
    let perturbed = approx.apply_perturbed(h)?;
    let (dual_spec, _) = eig_hermitian(&perturbed)?;

    let max_exp = dual_spec
        .values()
        .iter()
        .map(|&l| libm::fabs(beta * l))
        .chain(src_spec.values().iter().map(|&l| libm::fabs(beta * fh * l)))
        .fold(beta * delta, f64::max)
        .max(beta * fh.abs() * h_norm);
    if max_exp > crate::opscore::EXP_OVERFLOW {
        return Err(Error::Overflow { max_exponent: max_exp });
    }

    // Truncated dual partition function: eigenvalues below delta only.
    let z_dual: f64 = dual_spec
        .values()
        .iter()
        .filter(|&&l| l < delta)
        .map(|&l| libm::exp(-beta * l))
        .sum();
    let z_src: f64 = src_spec.values().iter().map(|&l| libm::exp(-beta * fh * l)).sum();
    let reference = alpha * z_src;
    let lhs = libm::fabs(z_dual - reference) / reference;

    let n_dim = approx.exact.n() as f64;
    let m_dim = approx.exact.m() as f64;
    let truncation = m_dim * libm::exp(-beta * delta) / (alpha * n_dim * libm::exp(-beta * fh * h_norm));
    let shift = libm::exp(beta * approx.k.eval(h)? * approx.epsilon) - 1.0;
    Ok(BoundReport::inequality(lhs, truncation + shift))
}

/// Trace-norm gap between evolving an encoded state under the perturbed
/// versus the exact dual Hamiltonian, against `2 epsilon k(H) t + eta`.
pub fn dynamics_bound(
    approx: &ApproxDuality,
    w: &StateMap,
    h: &HermitianOperator,
    rho: &DensityState,
    t: f64,
) -> Result<BoundReport> {
    if t < 0.0 {
        return Err(Error::DomainError("time must be nonnegative"));
    }
    let encoded = apply_state_map(&approx.exact, w, rho)?;
    // The encoded state must live on the direct (non-conjugated) blocks.
    let n = approx.exact.n();
    let m = approx.exact.m();
    let mut block_id = ComplexMatrix::zeros(m, m);
    for i in 0..approx.exact.p() * n {
        block_id[(i, i)] = crate::matrix::Complex64::new(1.0, 0.0);
    }
    let support = block_id.conjugate_by(approx.exact.unitary());
    let compressed = support.mul(encoded.matrix()).mul(&support.adjoint());
    let deviation = compressed.sub(encoded.matrix()).max_norm();
    if deviation > 1e-9 {
        return Err(Error::UnencodedState { deviation });
    }

    let exact_h = approx.exact.apply(h)?;
    let perturbed_h = approx.apply_perturbed(h)?;
    let u_exact = evolution(&exact_h, t)?;
    let u_pert = evolution(&perturbed_h, t)?;
    let evolved_exact = encoded.matrix().conjugate_by(&u_exact);
    let evolved_pert = encoded.matrix().conjugate_by(&u_pert);
    let diff = evolved_pert.sub(&evolved_exact);
    let diff = HermitianOperator::new(diff.add(&diff.adjoint()).scale_re(0.5))?;
    let lhs = trace_norm(&diff);
    let rhs = 2.0 * approx.epsilon * approx.k.eval(h)? * t + approx.eta;
    Ok(BoundReport::inequality(lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::ScalingFunction;

    #[test]
    fn defect_of_exact_is_zero() {
        let mut rng = Rng::seeded(1);
        let phi = DualityMap::random(2, 1, 1, ScalingFunction::Constant(1.5), &mut rng);
        let at = ApproxDuality::from_exact(phi, 0.0, 0.0);
        let a = random::random_hermitian(2, &mut rng);
        assert!(at.defect(&a).unwrap() < 1e-10);
    }

    #[test]
    fn defect_of_additive_perturbation() {
        let mut rng = Rng::seeded(2);
        let phi = DualityMap::random(2, 2, 0, ScalingFunction::Constant(1.0), &mut rng);
        let at = ApproxDuality::perturbed(phi, 7, 0.01, KFunction::Constant(1.0), 0.0);
        let a = random::random_hermitian(2, &mut rng);
        let d = at.defect(&a).unwrap();
        assert!((d - 0.01).abs() < 1e-10, "defect {d}");
    }

    #[test]
    fn compression_kills_off_support_junk() {
        // Phi(A) supported on the first coordinate; junk added on the
        // complement does not change the restricted defect.
        let phi = DualityMap::identity(2);
        let a = HermitianOperator::from_real_diag(&[1.3, 0.0]);
        let mut s_mat = ComplexMatrix::zeros(2, 2);
        s_mat[(0, 0)] = crate::matrix::Complex64::new(1.0, 0.0);
        let s = Projector::new(s_mat).unwrap();
        let junk = HermitianOperator::from_real_diag(&[0.0, 5.0]);
        let perturbed = phi.apply(&a).unwrap().add(&junk);
        let compressed = s.matrix().mul(perturbed.matrix()).mul(s.matrix());
        let defect = operator_norm(
            &HermitianOperator::new(compressed).unwrap().sub(&phi.apply(&a).unwrap()),
        );
        assert!(defect < 1e-12);
    }

    #[test]
    fn similar_maps_trivial_and_scalar() {
        let mut rng = Rng::seeded(3);
        let phi = DualityMap::random(2, 1, 1, ScalingFunction::Constant(1.0), &mut rng);
        let m = random::random_hermitian(2, &mut rng);
        let rep = similar_map_bound(&phi, &phi, &m).unwrap();
        assert!(rep.lhs < 1e-12 && rep.rhs_bound < 1e-9 && rep.pass);

        // Same unitary, f = 1 vs f' = 4, ||M|| = 1: bound = 3, gap = 3.
        let u = random::random_unitary(2, &mut rng);
        let p1 = DualityMap::new(2, 1, 0, u.clone(), ScalingFunction::Constant(1.0)).unwrap();
        let p2 = DualityMap::new(2, 1, 0, u, ScalingFunction::Constant(4.0)).unwrap();
        let m = HermitianOperator::from_real_diag(&[1.0, -1.0]);
        let rep = similar_map_bound(&p1, &p2, &m).unwrap();
        assert!((rep.lhs - 3.0).abs() < 1e-10);
        assert!((rep.rhs_bound - 3.0).abs() < 1e-10);
        assert!(rep.pass);
    }

    #[test]
    fn similar_maps_random_bound_holds() {
        let mut rng = Rng::seeded(4);
        for _ in 0..10 {
            let u1 = random::random_unitary(4, &mut rng);
            let u2 = random::random_unitary(4, &mut rng);
            let p1 = DualityMap::new(2, 1, 1, u1, ScalingFunction::Constant(1.2)).unwrap();
            let p2 = DualityMap::new(2, 1, 1, u2, ScalingFunction::Constant(0.7)).unwrap();
            let m = random::random_hermitian(2, &mut rng);
            let rep = similar_map_bound(&p1, &p2, &m).unwrap();
            assert!(rep.pass, "lhs {} rhs {}", rep.lhs, rep.rhs_bound);
        }
    }

    #[test]
    fn similar_maps_negative_scaling_rejected() {
        let phi = DualityMap::identity(2);
        let neg = phi.with_scaling(ScalingFunction::Constant(-1.0));
        let m = HermitianOperator::from_real_diag(&[1.0, 2.0]);
        assert!(matches!(
            similar_map_bound(&phi, &neg, &m),
            Err(Error::NegativeScaling)
        ));
    }

    #[test]
    fn two_inputs_equality() {
        let phi = DualityMap::identity(2);
        let m1 = HermitianOperator::from_real_diag(&[1.0, 0.0]);
        let m2 = HermitianOperator::from_real_diag(&[0.0, 1.0]);
        let rep = same_map_two_inputs_bound(&phi, &m1, &m2).unwrap();
        assert!((rep.lhs - 1.0).abs() < 1e-12);
        assert!(rep.pass);

        let mut rng = Rng::seeded(5);
        let phi = DualityMap::random(3, 2, 1, ScalingFunction::Constant(1.8), &mut rng);
        let a = random::random_hermitian(3, &mut rng);
        let b = random::random_hermitian(3, &mut rng);
        let rep = same_map_two_inputs_bound(&phi, &a, &b).unwrap();
        assert!(rep.pass, "lhs {} rhs {}", rep.lhs, rep.rhs_bound);
    }

    #[test]
    fn compose_budgets_add() {
        let mut rng = Rng::seeded(6);
        let p1 = DualityMap::random(2, 1, 1, ScalingFunction::Constant(1.0), &mut rng);
        let p2 = DualityMap::random(4, 1, 0, ScalingFunction::Constant(1.0), &mut rng);
        let a1 = ApproxDuality::perturbed(p1, 11, 0.01, KFunction::Constant(1.0), 0.0);
        let a2 = ApproxDuality::perturbed(p2, 12, 0.02, KFunction::Constant(1.0), 0.0);
        let c = compose_approx(&a2, &a1).unwrap();
        assert!((c.epsilon - 0.03).abs() < 1e-15);
        assert_eq!(c.eta, 0.0);
    }

    #[test]
    fn compose_exact_stays_exact() {
        let mut rng = Rng::seeded(7);
        let p1 = DualityMap::random(2, 1, 1, ScalingFunction::Constant(1.0), &mut rng);
        let p2 = DualityMap::random(4, 1, 0, ScalingFunction::Constant(1.0), &mut rng);
        let a1 = ApproxDuality::from_exact(p1, 0.0, 0.0);
        let a2 = ApproxDuality::from_exact(p2, 0.0, 0.0);
        let c = compose_approx(&a2, &a1).unwrap();
        assert_eq!(c.epsilon, 0.0);
        let a = random::random_hermitian(2, &mut rng);
        assert!(c.defect(&a).unwrap() < 1e-9);
    }

    #[test]
    fn composed_defect_within_budget() {
        let mut rng = Rng::seeded(8);
        for trial in 0..5 {
            let p1 = DualityMap::random(2, 1, 1, ScalingFunction::Constant(1.0), &mut rng);
            let p2 = DualityMap::random(4, 2, 0, ScalingFunction::Constant(1.0), &mut rng);
            let a1 = ApproxDuality::perturbed(p1, 100 + trial, 0.01, KFunction::Constant(1.0), 0.0);
            let a2 = ApproxDuality::perturbed(p2, 200 + trial, 0.02, KFunction::Constant(1.0), 0.0);
            let c = compose_approx(&a2, &a1).unwrap();
            let a = random::random_hermitian(2, &mut rng);
            let defect = c.defect(&a).unwrap();
            let budget = c.k.eval(&a).unwrap() * c.epsilon;
            assert!(defect <= budget + BOUND_SLACK, "defect {defect} budget {budget}");
        }
    }

    #[test]
    fn composed_k_formula_constants() {
        // Identity exacts, constant f (L2 = 0), k1 = k2 = 1, eps1 = 0.01:
        // k(A) = 1 + 0 + 0 + |f2| * 1 = 2.
        let id = DualityMap::identity(2);
        let a1 = ApproxDuality::perturbed(id.clone(), 1, 0.01, KFunction::Constant(1.0), 0.0);
        let a2 = ApproxDuality::from_exact(id, 0.0, 0.0);
        let c = compose_approx(&a2, &a1).unwrap();
        let a = HermitianOperator::from_real_diag(&[1.0, -1.0]);
        let k = c.k.eval(&a).unwrap();
        assert!((k - 2.0).abs() < 1e-12, "k = {k}");
    }

    #[test]
    fn eigenvalue_bound_exact_and_shifted() {
        let mut rng = Rng::seeded(9);
        let phi = DualityMap::random(2, 1, 1, ScalingFunction::Constant(1.3), &mut rng);
        let a = random::random_hermitian(2, &mut rng);

        let exact = ApproxDuality::from_exact(phi.clone(), 0.0, 0.0);
        for rep in eigenvalue_bound(&exact, &a).unwrap() {
            assert!(rep.lhs < 1e-9 && rep.pass);
        }

        let pert = ApproxDuality::perturbed(phi, 13, 0.03, KFunction::Constant(1.0), 0.0);
        for rep in eigenvalue_bound(&pert, &a).unwrap() {
            assert!(rep.pass, "shift {} budget {}", rep.lhs, rep.rhs_bound);
            assert!(rep.lhs <= 0.03 + BOUND_SLACK);
        }
    }

    #[test]
    fn eigenvalue_bound_rank_check() {
        let mut rng = Rng::seeded(10);
        let phi = DualityMap::random(2, 1, 0, ScalingFunction::Constant(1.0), &mut rng);
        let mut at = ApproxDuality::from_exact(phi, 0.0, 0.0);
        at.s = random::random_projector(2, 1, &mut rng);
        let a = random::random_hermitian(2, &mut rng);
        assert!(matches!(
            eigenvalue_bound(&at, &a),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn partition_bound_exact_no_truncation() {
        let mut rng = Rng::seeded(11);
        let phi = DualityMap::random(2, 1, 1, ScalingFunction::Constant(1.0), &mut rng);
        let h = random::random_hermitian(2, &mut rng);
        let at = ApproxDuality::from_exact(phi, 0.0, 0.0);
        let delta = operator_norm(&at.apply_perturbed(&h).unwrap()) + 1.0;
        let rep = partition_bound(&at, &h, 1.0, delta).unwrap();
        assert!(rep.lhs < 1e-10 && rep.pass, "lhs {}", rep.lhs);
    }

    #[test]
    fn partition_bound_perturbed_holds() {
        let mut rng = Rng::seeded(12);
        for trial in 0..5 {
            let phi = DualityMap::random(2, 2, 0, ScalingFunction::Constant(1.0), &mut rng);
            let h = random::random_hermitian(2, &mut rng);
            let at =
                ApproxDuality::perturbed(phi, 300 + trial, 0.02, KFunction::Constant(1.0), 0.0);
            let delta = operator_norm(&at.apply_perturbed(&h).unwrap()) + 1.0;
            let rep = partition_bound(&at, &h, 1.0, delta).unwrap();
            assert!(rep.pass, "lhs {} rhs {}", rep.lhs, rep.rhs_bound);
        }
    }

    #[test]
    fn partition_bound_overflow() {
        let phi = DualityMap::identity(2);
        let h = HermitianOperator::from_real_diag(&[0.0, 10.0]);
        let at = ApproxDuality::from_exact(phi, 0.0, 0.0);
        assert!(matches!(
            partition_bound(&at, &h, 100.0, 11.0),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn dynamics_bound_cases() {
        let mut rng = Rng::seeded(13);
        let phi = DualityMap::random(2, 2, 1, ScalingFunction::Constant(1.0), &mut rng);
        let w = StateMap::uniform(2).unwrap();
        let h = random::random_hermitian(2, &mut rng);
        let rho = random::random_state(2, &mut rng);

        let exact = ApproxDuality::from_exact(phi.clone(), 0.1, 0.0);
        let rep = dynamics_bound(&exact, &w, &h, &rho, 1.5).unwrap();
        assert!(rep.lhs < 1e-9 && rep.pass);

        let rep0 = dynamics_bound(&exact, &w, &h, &rho, 0.0).unwrap();
        assert!(rep0.lhs < 1e-12);

        let pert = ApproxDuality::perturbed(phi, 17, 0.01, KFunction::Constant(1.0), 0.0);
        let rep = dynamics_bound(&pert, &w, &h, &rho, 2.0).unwrap();
        assert!(rep.pass, "lhs {} rhs {}", rep.lhs, rep.rhs_bound);
        assert!((rep.rhs_bound - 0.04).abs() < 1e-12);
    }

    #[test]
    fn dynamics_bound_grid_audit() {
        let mut rng = Rng::seeded(14);
        let phi = DualityMap::random(2, 1, 0, ScalingFunction::Constant(1.0), &mut rng);
        let w = StateMap::uniform(1).unwrap();
        let h = random::random_hermitian(2, &mut rng);
        let rho = random::random_state(2, &mut rng);
        let pert = ApproxDuality::perturbed(phi, 21, 0.02, KFunction::Constant(1.0), 0.0);
        for i in 0..9 {
            let t = 0.5 * i as f64;
            let rep = dynamics_bound(&pert, &w, &h, &rho, t).unwrap();
            assert!(rep.pass, "t {t}: lhs {} rhs {}", rep.lhs, rep.rhs_bound);
        }
    }

    #[test]
    fn boxed_k_norm_scaled() {
        let k = KFunction::NormScaled(2.0);
        let a = HermitianOperator::from_real_diag(&[0.5, -0.25]);
        assert!((k.eval(&a).unwrap() - 2.0).abs() < 1e-15);
        let b = HermitianOperator::from_real_diag(&[3.0, 0.0]);
        assert!((k.eval(&b).unwrap() - 6.0).abs() < 1e-15);
    }
}

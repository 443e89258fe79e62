//! The three equivalent faces of duality: thermal (partition functions),
//! spectral (recovered from power sums), and entropic (entropy offsets),
//! plus the antiunitary-block characterisation of entropy-preserving maps.

use alloc::vec;
use alloc::vec::Vec;

use crate::duality::{DualityMap, Report, ScalingFunction, StateMap};
use crate::matrix::{Complex64, ComplexMatrix};
use crate::opscore::{
    eig_hermitian, expm_hermitian, shannon_entropy, von_neumann_entropy, DensityState,
    HermitianOperator, Spectrum,
};
use crate::random::{self, Rng};
use crate::{Error, Result};

/// Power sums `m_p = sum_j mu_j^p` of a spectrum, with the rational
/// duplication factor `alpha = x/y` they were produced under.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSumSequence {
    /// `(x, y)` in lowest terms.
    pub alpha: (u64, u64),
    pub sums: Vec<f64>,
}

impl PowerSumSequence {
    pub fn max_order(&self) -> usize {
        self.sums.len()
    }
}

/// Entropy bookkeeping for one state pushed through an entropic map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropicReport {
    pub offset_measured: f64,
    pub offset_expected: f64,
    pub residual: f64,
}

/// Partition-function preservation:
/// `alpha Tr[e^{-J f(A) A}] = Tr[e^{-J Phi(A)}]` at every charge `J`,
/// with `alpha = p + q`.
pub fn verify_thermal_axiom(
    phi: &DualityMap,
    a: &HermitianOperator,
    charges: &[f64],
    tol: f64,
) -> Result<Report> {
    if charges.is_empty() || charges.iter().any(|&j| j <= 0.0) {
        return Err(Error::DomainError("charges must be positive and nonempty"));
    }
    let alpha = (phi.p() + phi.q()) as f64;
    let fa = phi.scaling().eval(a)?;
    let image = phi.apply(a)?;
    let mut worst = 0.0f64;
    for &j in charges {
        let lhs = alpha * expm_hermitian(a, -j * fa)?.matrix().trace().re;
        let rhs = expm_hermitian(&image, -j)?.matrix().trace().re;
        worst = worst.max(libm::fabs(lhs - rhs) / libm::fabs(rhs));
    }
    Ok(Report::from_deviation(worst, tol))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `m_p = sum lambda^p` for `p = 1..=max_order`, summed left-to-right over
/// the sorted spectrum.
pub fn power_sums(spec: &Spectrum, max_order: usize) -> PowerSumSequence {
    let mut sums = Vec::with_capacity(max_order);
    for p in 1..=max_order {
        let mut m = 0.0;
        for &l in spec.values() {
            m += libm::pow(l, p as f64);
        }
        sums.push(m);
    }
    PowerSumSequence { alpha: (1, 1), sums }
}

/// Maximum Durand-Kerner iterations before reporting non-convergence.
const DK_MAX_ITERS: usize = 10_000;
/// Imaginary-part bound for certifying a recovered root as real.
const ROOT_IMAG_TOL: f64 = 1e-7;

/// Recover `d` real values from their first `d` power sums: Newton-Girard
/// down to elementary symmetric polynomials, then simultaneous root finding
/// on the monic characteristic polynomial.
pub fn reconstruct_spectrum(ps: &PowerSumSequence, d: usize) -> Result<Spectrum> {
    if d == 0 || ps.sums.len() < d {
        return Err(Error::DimMismatch { expected: d, got: ps.sums.len() });
    }
    if d == 1 {
        return Ok(Spectrum::new(vec![ps.sums[0]]));
    }
    let m = &ps.sums;
    // Newton-Girard: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} m_i, e_0 = 1.
    let mut e = vec![1.0f64];
    for k in 1..=d {
        let mut acc = 0.0;
        let mut sign = 1.0;
        for i in 1..=k {
            acc += sign * e[k - i] * m[i - 1];
            sign = -sign;
        }
        e.push(acc / k as f64);
    }
    // Monic polynomial: coefficient of z^{d-k} is (-1)^k e_k.
    let mut coeff = vec![Complex64::new(0.0, 0.0); d + 1];
    let mut sign = 1.0;
    for k in 0..=d {
        coeff[d - k] = Complex64::new(sign * e[k], 0.0);
        sign = -sign;
    }
    let radius = 1.0 + coeff.iter().take(d).map(|c| c.norm()).fold(0.0, f64::max);
    let eval = |z: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        for k in (0..=d).rev() {
            v = v * z + coeff[k];
        }
        v
    };
    // Durand-Kerner from a non-real geometric spread of starting points.
    let seed = Complex64::new(0.4, 0.9);
    let mut roots = Vec::with_capacity(d);
    let mut g = seed;
    for _ in 0..d {
        roots.push(g.scale(radius));
        g *= seed;
    }
    // The step criterion can cycle at the last few ulps; accuracy is
    // certified by the power-sum round trip below, not by the step size.
    for _ in 0..DK_MAX_ITERS {
        let mut max_step = 0.0f64;
        for j in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for k in 0..d {
                if k != j {
                    denom *= roots[j] - roots[k];
                }
            }
            let step = eval(roots[j]) / denom;
            roots[j] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * radius.max(1.0) {
            break;
        }
    }
    let max_imag = roots.iter().map(|r| libm::fabs(r.im)).fold(0.0, f64::max);
    if max_imag > ROOT_IMAG_TOL {
        return Err(Error::NonRealRoot { max_imag });
    }
    let spec = Spectrum::new(roots.iter().map(|r| r.re).collect());
    // Certify by round-tripping the power sums.
    let back = power_sums(&spec, d);
    for (got, want) in back.sums.iter().zip(m) {
        if libm::fabs(got - want) > 1e-6 * libm::fabs(*want).max(1.0) {
            return Err(Error::NonConvergence("power-sum certification"));
        }
    }
    Ok(spec)
}

/// Finite-order check of the peel-the-maximum argument: duplicate both
/// spectra to a common length (`lambda` x times, `mu` y times), then
/// repeatedly compare high-order power-mean estimates of the largest
/// magnitude on each side and peel it; finish by comparing linear sums to
/// rule out sign flips that magnitudes cannot see.
pub fn verify_peel_linf(
    spec_a: &Spectrum,
    spec_dual: &Spectrum,
    f: f64,
    alpha: (u64, u64),
    p_even: usize,
) -> Result<Report> {
    if p_even < 8 || p_even % 2 != 0 {
        return Err(Error::DomainError("peel order must be even and >= 8"));
    }
    let (mut x, mut y) = alpha;
    if x == 0 || y == 0 {
        return Err(Error::DimIncompatible);
    }
    let g = gcd(x, y);
    x /= g;
    y /= g;
    if x as usize * spec_a.len() != y as usize * spec_dual.len() {
        return Err(Error::DimIncompatible);
    }
    let mut lam: Vec<f64> = spec_a
        .duplicated(x as usize)
        .values()
        .iter()
        .map(|&v| f * v)
        .collect();
    let mut mu: Vec<f64> = spec_dual.duplicated(y as usize).values().to_vec();

    let rho = p_even; // even power used for the magnitude estimate
    let estimate = |v: &[f64]| -> f64 {
        let s: f64 = v.iter().map(|&t| libm::pow(libm::fabs(t), rho as f64)).sum();
        libm::pow(s, 1.0 / rho as f64)
    };
    let mut worst = 0.0f64;
    while !lam.is_empty() {
        let est_l = estimate(&lam);
        let est_m = estimate(&mu);
        worst = worst.max(libm::fabs(est_l - est_m) / est_l.max(est_m).max(1.0));
        let il = (0..lam.len())
            .max_by(|&i, &j| libm::fabs(lam[i]).partial_cmp(&libm::fabs(lam[j])).unwrap())
            .unwrap();
        let im = (0..mu.len())
            .max_by(|&i, &j| libm::fabs(mu[i]).partial_cmp(&libm::fabs(mu[j])).unwrap())
            .unwrap();
        lam.swap_remove(il);
        mu.swap_remove(im);
    }
    // Sign resolution: magnitudes matched, now the plain sums must agree.
    let sum_l: f64 = spec_a.values().iter().map(|&v| f * v).sum::<f64>() * x as f64;
    let sum_m: f64 = spec_dual.values().iter().sum::<f64>() * y as f64;
    worst = worst.max(libm::fabs(sum_l - sum_m) / libm::fabs(sum_l).max(1.0));
    Ok(Report::from_deviation(worst, 1e-4))
}

/// Tolerance on the linearity / zero-preservation side conditions of the
/// entropic axioms.
const ENTROPIC_SIDE_TOL: f64 = 1e-10;

/// Entropy offsets `S(image) - S(rho)` for each state under a map whose
/// scaling is pinned to `1/(p+q)`, against the expected `ln(p+q)`.
/// The state channel witnessing the entropic normalisation: every block is
/// populated, with the conjugated copy in the `q` antiunitary slots,
/// `rho -> U (w_0 rho (+) ... (+) w_{p+q-1} conj(rho)) U^dag`.
/// Uniform weights give an entropy offset of exactly `ln(p+q)`.
pub fn entropic_state_channel(
    phi: &DualityMap,
    w: &StateMap,
    rho: &DensityState,
) -> Result<DensityState> {
    let (n, p, q) = (phi.n(), phi.p(), phi.q());
    if w.weights().len() != p + q {
        return Err(Error::DimMismatch { expected: p + q, got: w.weights().len() });
    }
    if rho.dim() != n {
        return Err(Error::DimMismatch { expected: n, got: rho.dim() });
    }
    let m = phi.m();
    let mut big = ComplexMatrix::zeros(m, m);
    let conj = rho.matrix().conjugate();
    for (b, &weight) in w.weights().iter().enumerate() {
        let block = if b < p { rho.matrix() } else { &conj };
        for i in 0..n {
            for j in 0..n {
                big[(b * n + i, b * n + j)] = block[(i, j)].scale(weight);
            }
        }
    }
    DensityState::new(big.conjugate_by(phi.unitary()))
}

pub fn verify_entropic_axioms(
    phi_e: &DualityMap,
    w: &StateMap,
    states: &[DensityState],
) -> Result<Vec<EntropicReport>> {
    let alpha = (phi_e.p() + phi_e.q()) as f64;
    match phi_e.scaling() {
        ScalingFunction::Constant(c) if libm::fabs(c - 1.0 / alpha) <= 1e-12 => {}
        _ => return Err(Error::WrongScaling),
    }
    // Zero maps to zero.
    let zero_image = phi_e.apply(&HermitianOperator::zero(phi_e.n()))?;
    if !zero_image.is_zero(ENTROPIC_SIDE_TOL) {
        return Err(Error::InvalidOperator("entropic map does not preserve zero"));
    }
    // The state map is affine on mixtures.
    if states.len() >= 2 {
        let (r0, r1) = (&states[0], &states[1]);
        let mixed = DensityState::new(
            r0.matrix().scale_re(0.5).add(&r1.matrix().scale_re(0.5)),
        )?;
        let lhs = entropic_state_channel(phi_e, w, &mixed)?;
        let rhs = entropic_state_channel(phi_e, w, r0)?
            .matrix()
            .scale_re(0.5)
            .add(&entropic_state_channel(phi_e, w, r1)?.matrix().scale_re(0.5));
        if lhs.matrix().sub(&rhs).max_norm() > ENTROPIC_SIDE_TOL {
            return Err(Error::InvalidOperator("state map is not affine"));
        }
    }
    let expected = libm::log(alpha);
    let mut reports = Vec::with_capacity(states.len());
    for rho in states {
        let image = entropic_state_channel(phi_e, w, rho)?;
        let measured = von_neumann_entropy(&image) - von_neumann_entropy(rho);
        reports.push(EntropicReport {
            offset_measured: measured,
            offset_expected: expected,
            residual: libm::fabs(measured - expected),
        });
    }
    Ok(reports)
}

/// Normalise any duality map into an entropic one: same unitary and arities,
/// scaling replaced by the constant `1/(p+q)` (so `Phi'(A) = Phi(A)/((p+q) f(A))`).
pub fn derive_entropic_map(phi: &DualityMap) -> DualityMap {
    let alpha = (phi.p() + phi.q()) as f64;
    phi.with_scaling(ScalingFunction::Constant(1.0 / alpha))
}

/// `sum_x p_x S(rho_x) - sum_x p_x ln p_x - S(sum_x p_x rho_x)`.
///
/// This is a relative entropy: nonnegative, and zero exactly when the
/// components have pairwise orthogonal support.
pub fn mixture_entropy_residual(components: &[(f64, DensityState)]) -> Result<f64> {
    let total: f64 = components.iter().map(|(p, _)| *p).sum();
    if components.is_empty()
        || libm::fabs(total - 1.0) > 1e-12
        || components.iter().any(|(p, _)| *p < 0.0)
    {
        return Err(Error::InvalidDistribution);
    }
    let dim = components[0].1.dim();
    let mut mix = ComplexMatrix::zeros(dim, dim);
    let mut avg_entropy = 0.0;
    for (p, rho) in components {
        if rho.dim() != dim {
            return Err(Error::DimMismatch { expected: dim, got: rho.dim() });
        }
        mix = mix.add(&rho.matrix().scale_re(*p));
        avg_entropy += p * von_neumann_entropy(rho);
    }
    let weights: Vec<f64> = components.iter().map(|(p, _)| *p).collect();
    let mix_state = DensityState::new(mix)?;
    Ok(avg_entropy + shannon_entropy(&weights) - von_neumann_entropy(&mix_state))
}

/// Entropy-preserving (up to `ln alpha`) map in explicit block form:
/// `rho -> U ( (+)_i V_i rho V_i^dag (+) (+)_i W_i conj(rho) W_i^dag ) U^dag / alpha`
/// with `V_i` unitary and `W_i` the unitary part of an antiunitary.
#[derive(Debug, Clone)]
pub struct WignerExtension {
    n: usize,
    u: ComplexMatrix,
    v_blocks: Vec<ComplexMatrix>,
    w_blocks: Vec<ComplexMatrix>,
}

impl WignerExtension {
    pub fn new(
        n: usize,
        u: ComplexMatrix,
        v_blocks: Vec<ComplexMatrix>,
        w_blocks: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        let alpha = v_blocks.len() + w_blocks.len();
        if alpha == 0 {
            return Err(Error::InvalidArity);
        }
        if u.rows() != alpha * n {
            return Err(Error::DimMismatch { expected: alpha * n, got: u.rows() });
        }
        Ok(Self { n, u, v_blocks, w_blocks })
    }

    pub fn alpha(&self) -> usize {
        self.v_blocks.len() + self.w_blocks.len()
    }

    pub fn apply(&self, rho: &DensityState) -> Result<DensityState> {
        if rho.dim() != self.n {
            return Err(Error::DimMismatch { expected: self.n, got: rho.dim() });
        }
        let alpha = self.alpha() as f64;
        let conj = rho.matrix().conjugate();
        let mut blocks: Vec<ComplexMatrix> = Vec::with_capacity(self.alpha());
        for v in &self.v_blocks {
            blocks.push(rho.matrix().conjugate_by(v).scale_re(1.0 / alpha));
        }
        for w in &self.w_blocks {
            blocks.push(conj.conjugate_by(w).scale_re(1.0 / alpha));
        }
        let refs: Vec<&ComplexMatrix> = blocks.iter().collect();
        let out = ComplexMatrix::direct_sum(&refs).conjugate_by(&self.u);
        DensityState::new(out.add(&out.adjoint()).scale_re(0.5))
    }
}

/// Draw a random Wigner extension with `p` unitary and `q` antiunitary
/// blocks and verify entropy offset, spectrum duplication, and affinity on
/// random states.
pub fn sample_wigner_extension(
    n: usize,
    p: usize,
    q: usize,
    seed: u64,
) -> Result<(WignerExtension, Report)> {
    if p + q == 0 {
        return Err(Error::InvalidArity);
    }
    let mut rng = Rng::seeded(seed);
    let alpha = p + q;
    let u = random::random_unitary(alpha * n, &mut rng);
    let v_blocks: Vec<ComplexMatrix> = (0..p).map(|_| random::random_unitary(n, &mut rng)).collect();
    let w_blocks: Vec<ComplexMatrix> = (0..q).map(|_| random::random_unitary(n, &mut rng)).collect();
    let ext = WignerExtension::new(n, u, v_blocks, w_blocks)?;

    let ln_alpha = libm::log(alpha as f64);
    let mut worst = 0.0f64;
    let mut pass = true;
    for _ in 0..3 {
        let rho = random::random_state(n, &mut rng);
        let image = ext.apply(&rho)?;
        // Entropy offset is exactly ln alpha.
        let offset = von_neumann_entropy(&image) - von_neumann_entropy(&rho);
        let dev = libm::fabs(offset - ln_alpha);
        worst = worst.max(dev);
        pass &= dev <= 1e-9;
        // Spectrum is the input spectrum over alpha, alpha-fold.
        let (in_spec, _) = eig_hermitian(rho.operator())?;
        let (out_spec, _) = eig_hermitian(image.operator())?;
        let expected = in_spec.scaled(1.0 / alpha as f64).duplicated(alpha);
        let gap = out_spec.max_gap(&expected);
        worst = worst.max(gap);
        pass &= gap <= 1e-9;
    }
    // Affinity on a random mixture.
    let r0 = random::random_state(n, &mut rng);
    let r1 = random::random_state(n, &mut rng);
    let t = rng.uniform();
    let mixed = DensityState::new(r0.matrix().scale_re(t).add(&r1.matrix().scale_re(1.0 - t)))?;
    let lhs = ext.apply(&mixed)?;
    let rhs = ext
        .apply(&r0)?
        .matrix()
        .scale_re(t)
        .add(&ext.apply(&r1)?.matrix().scale_re(1.0 - t));
    let lin = lhs.matrix().sub(&rhs).max_norm();
    worst = worst.max(lin);
    pass &= lin <= 1e-10;

    Ok((ext, Report { pass, deviation: worst }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::apply_state_map;

    #[test]
    fn thermal_identity_closed_form() {
        let phi = DualityMap::identity(2);
        let a = HermitianOperator::from_real_diag(&[0.0, 1.0]);
        let img = phi.apply(&a).unwrap();
        let z = expm_hermitian(&img, -1.0).unwrap().matrix().trace().re;
        assert!((z - (1.0 + libm::exp(-1.0))).abs() < 1e-12);
        let rep = verify_thermal_axiom(&phi, &a, &[1.0], 1e-12).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn thermal_two_block_doubles() {
        let phi = DualityMap::new(
            2,
            1,
            1,
            ComplexMatrix::identity(4),
            ScalingFunction::Constant(1.0),
        )
        .unwrap();
        let a = HermitianOperator::from_real_diag(&[0.0, 1.0]);
        let img = phi.apply(&a).unwrap();
        let z = expm_hermitian(&img, -1.0).unwrap().matrix().trace().re;
        assert!((z - 2.0 * 1.3678794411714423).abs() < 1e-12);
        let rep = verify_thermal_axiom(&phi, &a, &[1.0], 1e-12).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn thermal_small_charge_limit() {
        // As J -> 0 both traces count dimensions; the ratio tends to 1.
        let mut rng = Rng::seeded(2);
        let phi = DualityMap::random(2, 2, 1, ScalingFunction::Constant(1.4), &mut rng);
        let a = random::random_hermitian(2, &mut rng);
        let rep = verify_thermal_axiom(&phi, &a, &[1e-9], 1e-6).unwrap();
        assert!(rep.pass, "deviation {}", rep.deviation);
    }

    #[test]
    fn thermal_random_grid() {
        let mut rng = Rng::seeded(3);
        let charges: Vec<f64> = (0..12).map(|i| 0.1 + i as f64 * (4.9 / 11.0)).collect();
        let phi = DualityMap::random(3, 1, 2, ScalingFunction::Constant(0.9), &mut rng);
        let a = random::random_hermitian(3, &mut rng);
        let rep = verify_thermal_axiom(&phi, &a, &charges, 1e-8).unwrap();
        assert!(rep.pass, "deviation {}", rep.deviation);
    }

    #[test]
    fn power_sums_examples() {
        let s = Spectrum::new(vec![1.0, 2.0, 3.0]);
        let ps = power_sums(&s, 3);
        assert_eq!(ps.sums, vec![6.0, 14.0, 36.0]);
        let doubled = s.duplicated(2);
        let ps2 = power_sums(&doubled, 3);
        assert_eq!(ps2.sums, vec![12.0, 28.0, 72.0]);
        let zero = Spectrum::new(vec![0.0, 0.0]);
        assert_eq!(power_sums(&zero, 4).sums, vec![0.0; 4]);
    }

    #[test]
    fn reconstruct_examples() {
        let ps = PowerSumSequence { alpha: (1, 1), sums: vec![6.0, 14.0, 36.0] };
        let spec = reconstruct_spectrum(&ps, 3).unwrap();
        let target = Spectrum::new(vec![1.0, 2.0, 3.0]);
        assert!(spec.max_gap(&target) < 1e-8, "{:?}", spec.values());

        let ps = PowerSumSequence { alpha: (1, 1), sums: vec![0.0, 2.0, 0.0, 2.0] };
        let spec = reconstruct_spectrum(&ps, 2).unwrap();
        assert!(spec.max_gap(&Spectrum::new(vec![-1.0, 1.0])) < 1e-8);

        let ps = PowerSumSequence { alpha: (1, 1), sums: vec![3.5] };
        let spec = reconstruct_spectrum(&ps, 1).unwrap();
        assert_eq!(spec.values(), &[3.5]);
    }

    #[test]
    fn reconstruct_round_trip_random() {
        let mut rng = Rng::seeded(17);
        for _ in 0..20 {
            let d = 2 + rng.index(7);
            // Pairwise gaps >= 0.05 keep the roots well-conditioned.
            let mut vals: Vec<f64> = Vec::new();
            while vals.len() < d {
                let v = rng.uniform_in(-5.0, 5.0);
                if vals.iter().all(|&w| (w - v).abs() >= 0.05) {
                    vals.push(v);
                }
            }
            let spec = Spectrum::new(vals);
            let ps = power_sums(&spec, d);
            let rec = reconstruct_spectrum(&ps, d).unwrap();
            assert!(rec.max_gap(&spec) < 1e-6, "gap {}", rec.max_gap(&spec));
        }
    }

    #[test]
    fn peel_examples() {
        let a = Spectrum::new(vec![1.0, 2.0]);
        let dual = Spectrum::new(vec![1.0, 1.0, 2.0, 2.0]);
        let rep = verify_peel_linf(&a, &dual, 1.0, (2, 1), 8).unwrap();
        assert!(rep.pass, "deviation {}", rep.deviation);

        let faulty = Spectrum::new(vec![1.0, 1.0, 2.0, -2.0]);
        let rep = verify_peel_linf(&a, &faulty, 1.0, (2, 1), 8).unwrap();
        assert!(!rep.pass);

        let a = Spectrum::new(vec![2.0, 4.0]);
        let dual = Spectrum::new(vec![1.0, 2.0]);
        let rep = verify_peel_linf(&a, &dual, 0.5, (1, 1), 8).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn peel_dim_bookkeeping() {
        let a = Spectrum::new(vec![1.0, 2.0]);
        let dual = Spectrum::new(vec![1.0, 2.0, 3.0]);
        assert!(matches!(
            verify_peel_linf(&a, &dual, 1.0, (2, 1), 8),
            Err(Error::DimIncompatible)
        ));
    }

    #[test]
    fn entropic_axioms_examples() {
        // alpha = 1: the identity map leaves entropy alone.
        let id = derive_entropic_map(&DualityMap::identity(2));
        let w = StateMap::uniform(1).unwrap();
        let states = vec![
            DensityState::maximally_mixed(2),
            DensityState::pure(2, 0),
        ];
        for rep in verify_entropic_axioms(&id, &w, &states).unwrap() {
            assert!(rep.residual < 1e-10, "residual {}", rep.residual);
            assert_eq!(rep.offset_expected, 0.0);
        }

        // alpha = 2: ln 2 offset; I/2 goes from ln 2 to ln 4.
        let mut rng = Rng::seeded(23);
        let phi = DualityMap::random(2, 2, 0, ScalingFunction::Constant(0.5), &mut rng);
        let w = StateMap::uniform(2).unwrap();
        let reports = verify_entropic_axioms(&phi, &w, &states).unwrap();
        for rep in &reports {
            assert!(rep.residual < 1e-10, "residual {}", rep.residual);
        }
        let mixed_img = apply_state_map(&phi, &w, &states[0]).unwrap();
        assert!((von_neumann_entropy(&mixed_img) - libm::log(4.0)).abs() < 1e-10);

        // alpha = 3 on a pure state: entropy becomes ln 3.
        let phi = DualityMap::random(2, 3, 0, ScalingFunction::Constant(1.0 / 3.0), &mut rng);
        let w = StateMap::uniform(3).unwrap();
        let rho = DensityState::pure(2, 1);
        let reps = verify_entropic_axioms(&phi, &w, &[rho.clone()]).unwrap();
        assert!(reps[0].residual < 1e-9);
        let img = apply_state_map(&phi, &w, &rho).unwrap();
        assert!((von_neumann_entropy(&img) - 1.0986122886681098).abs() < 1e-9);
    }

    #[test]
    fn entropic_axioms_wrong_scaling() {
        let phi = DualityMap::identity(2).with_scaling(ScalingFunction::Constant(2.0));
        let w = StateMap::uniform(1).unwrap();
        assert!(matches!(
            verify_entropic_axioms(&phi, &w, &[]),
            Err(Error::WrongScaling)
        ));
    }

    #[test]
    fn derive_entropic_scaling() {
        let mut rng = Rng::seeded(29);
        let phi = DualityMap::random(2, 1, 1, ScalingFunction::Constant(5.0), &mut rng);
        let e = derive_entropic_map(&phi);
        let a = random::random_hermitian(2, &mut rng);
        assert!((e.scaling().eval(&a).unwrap() - 0.5).abs() < 1e-15);
        // Spectra are halved relative to the bare encoding.
        let rep = crate::duality::verify_spectral_axiom(&e, &a, 1e-9).unwrap();
        assert!(rep.pass);

        // KW with p=1, q=0: normalisation cancels the scaling entirely.
        let kw = DualityMap::new(
            2,
            1,
            0,
            ComplexMatrix::identity(2),
            ScalingFunction::KramersWannier { j: 1.0, beta: 0.7 },
        )
        .unwrap();
        let e = derive_entropic_map(&kw);
        let out = e.apply(&a).unwrap();
        assert!(out.matrix().sub(a.matrix()).max_norm() < 1e-12);
    }

    #[test]
    fn mixture_residual_orthogonal_zero() {
        let comps = vec![
            (0.5, DensityState::pure(2, 0)),
            (0.5, DensityState::pure(2, 1)),
        ];
        let r = mixture_entropy_residual(&comps).unwrap();
        assert!(r.abs() < 1e-9, "residual {r}");
        // The mixture itself carries ln 2.
        let mix = DensityState::maximally_mixed(2);
        assert!((von_neumann_entropy(&mix) - libm::log(2.0)).abs() < 1e-12);
    }

    #[test]
    fn mixture_residual_identical_components() {
        let comps = vec![
            (0.5, DensityState::maximally_mixed(2)),
            (0.5, DensityState::maximally_mixed(2)),
        ];
        let r = mixture_entropy_residual(&comps).unwrap();
        assert!((r - libm::log(2.0)).abs() < 1e-10, "residual {r}");
    }

    #[test]
    fn mixture_residual_generic_positive() {
        let mut rng = Rng::seeded(37);
        let comps = vec![
            (0.4, random::random_state(3, &mut rng)),
            (0.6, random::random_state(3, &mut rng)),
        ];
        let r = mixture_entropy_residual(&comps).unwrap();
        assert!(r > 1e-6, "residual {r}");
    }

    #[test]
    fn wigner_extension_cases() {
        // Identity channel.
        let ext = WignerExtension::new(
            2,
            ComplexMatrix::identity(2),
            vec![ComplexMatrix::identity(2)],
            vec![],
        )
        .unwrap();
        let rho = DensityState::from_real_diag(&[0.3, 0.7]).unwrap();
        let out = ext.apply(&rho).unwrap();
        assert!(out.matrix().sub(rho.matrix()).max_norm() < 1e-14);

        // Pure conjugation preserves entropy exactly.
        let ext = WignerExtension::new(
            2,
            ComplexMatrix::identity(2),
            vec![],
            vec![ComplexMatrix::identity(2)],
        )
        .unwrap();
        let mut rng = Rng::seeded(41);
        let rho = random::random_state(2, &mut rng);
        let out = ext.apply(&rho).unwrap();
        assert!(
            (von_neumann_entropy(&out) - von_neumann_entropy(&rho)).abs() < 1e-12
        );

        // Random p = q = 1: offset ln 2 and all checks pass.
        let (_, rep) = sample_wigner_extension(2, 1, 1, 99).unwrap();
        assert!(rep.pass, "deviation {}", rep.deviation);
    }
}

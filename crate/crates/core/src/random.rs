//! Seeded random operators: Haar unitaries, Gaussian Hermitian matrices,
//! Wishart-normalised density states.

use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};

use crate::matrix::{Complex64, ComplexMatrix};
use crate::opscore::{DensityState, HermitianOperator, Projector};

/// Deterministic stream cipher RNG; every sampling routine takes one of
/// these so runs are reproducible from a single seed.
pub struct Rng {
    inner: rand_chacha::ChaCha8Rng,
    /// Spare Gaussian draw from the last Box-Muller pair.
    cached: Option<f64>,
}

impl Rng {
    pub fn seeded(seed: u64) -> Self {
        Self { inner: rand_chacha::ChaCha8Rng::seed_from_u64(seed), cached: None }
    }

    /// Uniform in `[0, 1)` from the top 53 bits of a word.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal via Box-Muller.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.cached.take() {
            return z;
        }
        // u1 in (0, 1] so the log is finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let theta = 2.0 * core::f64::consts::PI * u2;
        self.cached = Some(r * libm::sin(theta));
        r * libm::cos(theta)
    }

    pub fn complex_gaussian(&mut self) -> Complex64 {
        Complex64::new(self.gaussian(), self.gaussian())
    }

    /// Uniform in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        (self.inner.next_u64() % n as u64) as usize
    }
}

/// Haar-distributed `n x n` unitary: QR of an i.i.d. complex Gaussian matrix
/// by modified Gram-Schmidt, with the R diagonal kept real positive.
pub fn random_unitary(n: usize, rng: &mut Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.complex_gaussian()).collect())
        .collect();
    for j in 0..n {
        for k in 0..j {
            let proj: Complex64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..n {
                let corr = proj * cols[k][i];
                cols[j][i] -= corr;
            }
        }
        let norm = libm::sqrt(cols[j].iter().map(|z| z.norm_sqr()).sum());
        for i in 0..n {
            cols[j][i] /= norm;
        }
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            u[(i, j)] = cols[j][i];
        }
    }
    u
}

/// GUE-style random Hermitian matrix, entries O(1).
pub fn random_hermitian(n: usize, rng: &mut Rng) -> HermitianOperator {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rng.gaussian(), 0.0);
        for j in (i + 1)..n {
            let z = rng.complex_gaussian().scale(core::f64::consts::FRAC_1_SQRT_2);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianOperator::new(m).expect("constructed Hermitian")
}

/// Random full-rank density state `G G^dag / Tr[G G^dag]`.
pub fn random_state(n: usize, rng: &mut Rng) -> DensityState {
    let mut g = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = rng.complex_gaussian();
        }
    }
    let w = g.mul(&g.adjoint());
    let tr = w.trace().re;
    DensityState::new(w.scale_re(1.0 / tr)).expect("Wishart matrix is a valid state")
}

/// Random rank-`r` projector: Haar unitary applied to a coordinate projector.
pub fn random_projector(n: usize, r: usize, rng: &mut Rng) -> Projector {
    debug_assert!(r <= n);
    let u = random_unitary(n, rng);
    let mut d = ComplexMatrix::zeros(n, n);
    for i in 0..r {
        d[(i, i)] = Complex64::new(1.0, 0.0);
    }
    Projector::new(d.conjugate_by(&u)).expect("rotated projector is a projector")
}

/// Random probability vector of length `k` (normalised uniforms).
pub fn random_distribution(k: usize, rng: &mut Rng) -> Vec<f64> {
    let mut w: Vec<f64> = (0..k).map(|_| rng.uniform() + 1e-3).collect();
    let s: f64 = w.iter().sum();
    for x in &mut w {
        *x /= s;
    }
    w
}

/// Random Hermitian matrix with prescribed spectrum `diag` in a Haar basis.
pub fn hermitian_with_spectrum(diag: &[f64], rng: &mut Rng) -> HermitianOperator {
    let u = random_unitary(diag.len(), rng);
    let d = ComplexMatrix::from_real_diag(diag);
    let m = d.conjugate_by(&u);
    HermitianOperator::new(m.add(&m.adjoint()).scale_re(0.5)).expect("rotated diagonal")
}

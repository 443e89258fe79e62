//! Classical 2D Ising model on a periodic torus, exact by enumeration, and
//! the Kramers-Wannier duality: coupling involution, free-energy and
//! partition-function relations, and its realisation as a duality map.

use alloc::vec;
use alloc::vec::Vec;

use crate::duality::{DualityMap, ScalingFunction};
use crate::opscore::{expm_hermitian, matrix_power, trace_norm, DensityState, HermitianOperator};
use crate::{Error, Result};

/// Largest site count enumerated exhaustively.
pub const MAX_SITES: usize = 25;

/// Square-lattice Ising system `H = -J sum_<ij> s_i s_j` on a torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingLattice {
    pub rows: usize,
    pub cols: usize,
    pub j: f64,
}

impl IsingLattice {
    pub fn new(rows: usize, cols: usize, j: f64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DomainError("lattice sides must be positive"));
        }
        if rows * cols > MAX_SITES {
            return Err(Error::TooLarge { sites: rows * cols });
        }
        if j <= 0.0 {
            return Err(Error::DomainError("coupling J must be positive"));
        }
        Ok(Self { rows, cols, j })
    }

    pub fn sites(&self) -> usize {
        self.rows * self.cols
    }

    /// Two bonds per site on the torus (right and down), so double bonds
    /// appear when a side has length 2 and self-bonds when it has length 1.
    pub fn bonds(&self) -> usize {
        2 * self.sites()
    }
}

/// An inverse temperature together with the dimensionless coupling `K = J beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPoint {
    pub beta: f64,
    pub k: f64,
}

impl ThermalPoint {
    pub fn new(beta: f64, j: f64) -> Result<Self> {
        let k = beta * j;
        if k <= 0.0 {
            return Err(Error::DomainError("K = J beta must be positive"));
        }
        Ok(Self { beta, k })
    }

    pub fn from_coupling(k: f64, j: f64) -> Result<Self> {
        if k <= 0.0 || j <= 0.0 {
            return Err(Error::DomainError("K and J must be positive"));
        }
        Ok(Self { beta: k / j, k })
    }
}

/// Exhaustive energy histogram `(energy, count)` sorted by energy; counts
/// sum to `2^sites`.
pub fn enumerate_energies(lat: &IsingLattice) -> Result<Vec<(f64, u64)>> {
    let n = lat.sites();
    if n > MAX_SITES {
        return Err(Error::TooLarge { sites: n });
    }
    let mut right = vec![0usize; n];
    let mut down = vec![0usize; n];
    for r in 0..lat.rows {
        for c in 0..lat.cols {
            let i = r * lat.cols + c;
            right[i] = r * lat.cols + (c + 1) % lat.cols;
            down[i] = ((r + 1) % lat.rows) * lat.cols + c;
        }
    }
    let nb = lat.bonds();
    // counts[a] = number of configurations with `a` anti-aligned bonds.
    let mut counts = vec![0u64; nb + 1];
    for s in 0u32..(1u32 << n) {
        let mut a = 0u32;
        for i in 0..n {
            let x = (s >> i) & 1;
            a += x ^ ((s >> right[i]) & 1);
            a += x ^ ((s >> down[i]) & 1);
        }
        counts[a as usize] += 1;
    }
    // E = -J (aligned - anti-aligned) = J (2a - Nb).
    Ok(counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(a, &c)| (lat.j * (2.0 * a as f64 - nb as f64), c))
        .collect())
}

/// `Z = sum_config e^{-beta E}` from the exact histogram.
pub fn partition_function(lat: &IsingLattice, pt: &ThermalPoint) -> Result<f64> {
    let max_exp = pt.k * lat.bonds() as f64;
    if max_exp > crate::opscore::EXP_OVERFLOW {
        return Err(Error::Overflow { max_exponent: max_exp });
    }
    let hist = enumerate_energies(lat)?;
    let mut z = 0.0;
    for (e, c) in hist {
        z += c as f64 * libm::exp(-pt.beta * e);
    }
    Ok(z)
}

/// The Kramers-Wannier coupling involution `K~ = -1/2 ln tanh K`.
pub fn dual_coupling(k: f64) -> Result<f64> {
    if k <= 0.0 {
        return Err(Error::DomainError("K must be positive"));
    }
    Ok(-0.5 * libm::log(libm::tanh(k)))
}

/// The self-dual coupling `K* = 1/2 ln(1 + sqrt 2)`.
pub fn self_dual_coupling() -> f64 {
    0.5 * libm::log(1.0 + libm::sqrt(2.0))
}

/// Finite-lattice residuals of the duality relations at coupling `K`:
/// free energy `|b~f~ - bf - ln sinh 2K|` with `-bf = ln Z / N`, and
/// partition ratio `|Z(K~) sinh(2K)^N / Z(K) - 1|`.
///
/// Both are thermodynamic-limit statements; on a finite torus they are
/// nonzero and shrink with lattice size.
pub fn kw_relation_residual(lat: &IsingLattice, k: f64) -> Result<(f64, f64)> {
    let kd = dual_coupling(k)?;
    let n = lat.sites() as f64;
    let z = partition_function(lat, &ThermalPoint::from_coupling(k, lat.j)?)?;
    let zd = partition_function(lat, &ThermalPoint::from_coupling(kd, lat.j)?)?;
    let ln_sinh = libm::log(libm::sinh(2.0 * k));
    // beta f = -ln Z / N at each coupling.
    let residual_f = libm::fabs((libm::log(z) - libm::log(zd)) / n - ln_sinh);
    let residual_z = libm::fabs(zd * libm::pow(libm::sinh(2.0 * k), n) / z - 1.0);
    Ok((residual_f, residual_z))
}

/// The temperature half of the KW map: `beta -> -ln tanh(J beta) / (2J)`.
#[derive(Debug, Clone, Copy)]
pub struct TemperatureMap {
    j: f64,
}

impl TemperatureMap {
    pub fn apply(&self, beta: f64) -> Result<f64> {
        if beta <= 0.0 {
            return Err(Error::DomainError("beta must be positive"));
        }
        Ok(-libm::log(libm::tanh(self.j * beta)) / (2.0 * self.j))
    }
}

/// The KW duality as a canonical map on `dim`-dimensional operators:
/// trivial encoding (p = 1, q = 0, U = I) with the coupling-rescaling
/// scaling function, paired with the temperature map.
pub fn kw_duality_map(j: f64, beta: f64, dim: usize) -> Result<(DualityMap, TemperatureMap)> {
    if j <= 0.0 || beta <= 0.0 {
        return Err(Error::DomainError("J and beta must be positive"));
    }
    let phi = DualityMap::new(
        dim,
        1,
        0,
        crate::matrix::ComplexMatrix::identity(dim),
        ScalingFunction::KramersWannier { j, beta },
    )?;
    Ok((phi, TemperatureMap { j }))
}

/// Trace distance for one sign convention of the Gibbs-state exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GibbsReport {
    /// The exponent `c` actually applied in `rho -> rho^c / Tr`.
    pub exponent: f64,
    /// Trace distance between the mapped state and the dual Gibbs state.
    pub distance: f64,
}

/// Eigenvalue floor below which a Gibbs state counts as singular.
const GIBBS_FLOOR: f64 = 1e-13;

/// Map the Gibbs state of `H` at `beta` through `rho -> rho^c / Tr[rho^c]`
/// with `c = sign * (1/(2 J beta)) ln tanh(J beta)` and measure the trace
/// distance to the Gibbs state of the rescaled dual Hamiltonian.
///
/// No pass/fail is asserted: callers compare the two sign conventions.
pub fn gibbs_state_map_check(
    j: f64,
    beta: f64,
    h: &HermitianOperator,
    exponent_sign: i32,
) -> Result<GibbsReport> {
    if j <= 0.0 || beta <= 0.0 {
        return Err(Error::DomainError("J and beta must be positive"));
    }
    let c = exponent_sign as f64 * libm::log(libm::tanh(j * beta)) / (2.0 * j * beta);
    let gibbs = expm_hermitian(h, -beta)?;
    let z = gibbs.matrix().trace().re;
    let rho = DensityState::new(gibbs.matrix().scale_re(1.0 / z))?;

    let powered = matrix_power(&rho, c, GIBBS_FLOOR)?;
    let tr = powered.matrix().trace().re;
    let mapped = DensityState::new(powered.matrix().scale_re(1.0 / tr))?;

    // Dual Gibbs state: e^{-beta f H} / Z with f the KW rescaling (the dual
    // Hamiltonian f H at the original temperature; equivalently H at the
    // mapped temperature).
    let f = -libm::log(libm::tanh(j * beta)) / (2.0 * j * beta);
    let dual = expm_hermitian(h, -beta * f)?;
    let zd = dual.matrix().trace().re;
    let target = DensityState::new(dual.matrix().scale_re(1.0 / zd))?;

    let diff = mapped.matrix().sub(target.matrix());
    let diff = HermitianOperator::new(diff.add(&diff.adjoint()).scale_re(0.5))?;
    Ok(GibbsReport { exponent: c, distance: 0.5 * trace_norm(&diff) })
}

/// Expansion regime selector for the truncated partition-function series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// Low temperature (large K): excitation islands above the ground pair.
    Low,
    /// High temperature (small K): closed-graph expansion in `tanh K`.
    High,
}

/// Regime boundaries for the truncated expansions.
pub const LOW_T_MIN_K: f64 = 1.0;
pub const HIGH_T_MAX_K: f64 = 0.2;

/// Leading-terms estimate of `Z` on an `N`-site torus (2N bonds).
///
/// Low T: `2 e^{2NK} (1 + N e^{-8K} + 2N e^{-12K})`.
/// High T: `2^N (cosh K)^{2N} (1 + N tanh^4 K)`.
pub fn expansion_leading_terms(k: f64, n_sites: usize, regime: Regime) -> Result<f64> {
    if k <= 0.0 {
        return Err(Error::DomainError("K must be positive"));
    }
    let n = n_sites as f64;
    let nb = 2.0 * n;
    match regime {
        Regime::Low => {
            if k < LOW_T_MIN_K {
                return Err(Error::RegimeViolation { coupling: k });
            }
            Ok(2.0
                * libm::exp(nb * k)
                * (1.0 + n * libm::exp(-8.0 * k) + 2.0 * n * libm::exp(-12.0 * k)))
        }
        Regime::High => {
            if k > HIGH_T_MAX_K {
                return Err(Error::RegimeViolation { coupling: k });
            }
            let t = libm::tanh(k);
            Ok(libm::pow(2.0, n) * libm::pow(libm::cosh(k), nb) * (1.0 + n * t * t * t * t))
        }
    }
}

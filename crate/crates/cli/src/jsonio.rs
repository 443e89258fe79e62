//! JSON wire format: matrices, duality maps, and suite reports.

use dualis_core::duality::{DualityMap, ScalingFunction, StateMap};
use dualis_core::equivalence::PowerSumSequence;
use dualis_core::{Complex64, ComplexMatrix};
use serde::{Deserialize, Serialize};

/// Report schema version tag.
pub const SCHEMA: &str = "dualis/1";

#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixDto {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixDto {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            re: m.entries().iter().map(|z| z.re).collect(),
            im: m.entries().iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, String> {
        if self.re.len() != self.rows * self.cols || self.im.len() != self.re.len() {
            return Err("matrix entry counts do not match rows*cols".into());
        }
        let entries: Vec<Complex64> = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(self.rows, self.cols, entries).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScalingDto {
    Constant { c: f64 },
    Kw { j: f64, beta: f64 },
    Table { entries: Vec<(Vec<f64>, f64)>, lipschitz: f64 },
}

impl ScalingDto {
    pub fn from_scaling(f: &ScalingFunction) -> Result<Self, String> {
        match f {
            ScalingFunction::Constant(c) => Ok(ScalingDto::Constant { c: *c }),
            ScalingFunction::KramersWannier { j, beta } => {
                Ok(ScalingDto::Kw { j: *j, beta: *beta })
            }
            ScalingFunction::Table { entries, lipschitz } => Ok(ScalingDto::Table {
                entries: entries.clone(),
                lipschitz: *lipschitz,
            }),
            ScalingFunction::Composed { .. } => {
                Err("composed scaling functions are not serializable".into())
            }
        }
    }

    pub fn to_scaling(&self) -> ScalingFunction {
        match self {
            ScalingDto::Constant { c } => ScalingFunction::Constant(*c),
            ScalingDto::Kw { j, beta } => ScalingFunction::KramersWannier { j: *j, beta: *beta },
            ScalingDto::Table { entries, lipschitz } => ScalingFunction::Table {
                entries: entries.clone(),
                lipschitz: *lipschitz,
            },
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MapDto {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    #[serde(rename = "U")]
    pub u: MatrixDto,
    pub f: ScalingDto,
}

impl MapDto {
    pub fn from_map(m: &DualityMap) -> Result<Self, String> {
        Ok(Self {
            n: m.n(),
            p: m.p(),
            q: m.q(),
            u: MatrixDto::from_matrix(m.unitary()),
            f: ScalingDto::from_scaling(m.scaling())?,
        })
    }

    pub fn to_map(&self) -> Result<DualityMap, String> {
        DualityMap::new(self.n, self.p, self.q, self.u.to_matrix()?, self.f.to_scaling())
            .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StateMapDto {
    pub alpha: Vec<f64>,
}

impl StateMapDto {
    pub fn to_state_map(&self) -> Result<StateMap, String> {
        StateMap::new(self.alpha.clone()).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PowerSumDto {
    pub alpha: [u64; 2],
    pub sums: Vec<f64>,
}

impl PowerSumDto {
    pub fn to_sequence(&self) -> PowerSumSequence {
        PowerSumSequence { alpha: (self.alpha[0], self.alpha[1]), sums: self.sums.clone() }
    }
}

/// One verification record inside a suite report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub inputs_digest: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

/// Deterministic suite report; wall time is deliberately excluded so that
/// identical seeds give byte-identical files (it is printed to stderr).
#[derive(Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub command: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn new(command: &str, seed: u64, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let total = checks.len();
        let passed = checks.iter().filter(|c| c.pass).count();
        Self {
            schema: SCHEMA.into(),
            command: command.into(),
            seed,
            checks,
            summary: Summary { total, passed, failed: total - passed },
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }
}

/// FNV-1a digest of a textual input description, hex-encoded.
pub fn digest(text: &str) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in text.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

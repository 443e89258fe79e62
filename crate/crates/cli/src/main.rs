//! `dualis`: verification driver for finite-dimensional duality maps.
//!
//! Exit codes: 0 all checks pass, 1 at least one verification failed
//! (reports are still written), 2 malformed input.

mod jsonio;
mod suites;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use dualis_core::equivalence::{reconstruct_spectrum, PowerSumSequence};
use dualis_core::ising::{
    kw_relation_residual, partition_function, self_dual_coupling, IsingLattice, ThermalPoint,
};
use dualis_core::opscore::{von_neumann_entropy, DensityState};

use jsonio::{CheckRecord, SuiteReport, SCHEMA};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "dualis", version, about = "Duality-map verification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ReportArgs {
    /// RNG seed; falls back to DUALIS_SEED, then 42.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral, convexity, projector, state-map, and composition checks
    /// on random duality maps.
    VerifyMap {
        #[command(flatten)]
        report: ReportArgs,
        /// Comma-separated system dimensions, e.g. "2,4".
        #[arg(long, default_value = "2,3")]
        dims: String,
        /// Comma-separated arities "p:q", e.g. "1:0,1:1".
        #[arg(long, default_value = "1:0,1:1,2:1")]
        arities: String,
        /// Verify a specific map loaded from JSON instead of random ones.
        #[arg(long)]
        map: Option<PathBuf>,
        /// State-map weights JSON to pair with --map.
        #[arg(long)]
        state_map: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Thermal, entropic, peel, reconstruction, mixture, and Wigner checks.
    Equivalence {
        #[command(flatten)]
        report: ReportArgs,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Error-propagation audits on seeded perturbations.
    ApproxAudit {
        #[command(flatten)]
        report: ReportArgs,
        /// Comma-separated perturbation scales.
        #[arg(long, default_value = "0.01,0.05")]
        scales: String,
    },
    /// Kramers-Wannier lattice sweep and scalar duality checks.
    Kw {
        #[command(flatten)]
        report: ReportArgs,
        /// Coupling K; defaults to the self-dual point.
        #[arg(long = "K", short = 'K')]
        k: Option<f64>,
        /// Comma-separated lattices "RxC", e.g. "2x2,4x4".
        #[arg(long, default_value = "2x2,3x3,4x4")]
        lattice: String,
        /// Write the sweep as CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the energy histogram(s) as JSON here.
        #[arg(long)]
        histogram: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Recover a spectrum from its leading power sums.
    RecoverSpectrum {
        /// Comma-separated power sums m_1,m_2,...,m_d.
        #[arg(long, conflicts_with = "input")]
        moments: Option<String>,
        /// Power-sum sequence JSON (alternative to --moments).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Number of eigenvalues to recover.
        #[arg(long)]
        d: usize,
        /// Dimension ratio "x:y" of the two multisets.
        #[arg(long, default_value = "1:1")]
        alpha: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Golden-value fixtures.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Subcommand)]
enum FixtureAction {
    /// Write golden.json into the directory.
    Generate {
        #[arg(long)]
        dir: PathBuf,
    },
    /// Recompute and diff against golden.json.
    Check {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("DUALIS_SEED") {
        Ok(v) => v.parse().map_err(|_| format!("DUALIS_SEED is not a valid u64: {v}")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| format!("bad {what} entry: {s:?}")))
        .collect()
}

fn parse_pairs(text: &str, sep: char, what: &str) -> Result<Vec<(usize, usize)>, String> {
    text.split(',')
        .map(|s| {
            let (a, b) = s
                .trim()
                .split_once(sep)
                .ok_or_else(|| format!("bad {what} entry: {s:?} (expected A{sep}B)"))?;
            let a = a.parse().map_err(|_| format!("bad {what} entry: {s:?}"))?;
            let b = b.parse().map_err(|_| format!("bad {what} entry: {s:?}"))?;
            Ok((a, b))
        })
        .collect()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("reading {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("parsing {}: {e}", path.display()))
}

fn emit_report(
    command: &str,
    seed: u64,
    checks: Vec<CheckRecord>,
    json: Option<&PathBuf>,
    started: Instant,
) -> Result<bool, String> {
    let report = SuiteReport::new(command, seed, checks);
    for c in &report.checks {
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        println!("[{verdict}] {} (lhs={:.3e}, rhs={:.3e})", c.name, c.lhs, c.rhs);
    }
    println!(
        "{}: {} checks, {} passed, {} failed",
        command, report.summary.total, report.summary.passed, report.summary.failed
    );
    if let Some(path) = json {
        let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
        std::fs::write(path, text + "\n").map_err(|e| format!("writing {}: {e}", path.display()))?;
    }
    eprintln!("wall time: {:.3}s", started.elapsed().as_secs_f64());
    Ok(report.all_pass())
}

fn trim_float(v: f64) -> String {
    let r = (v * 1e9).round() / 1e9;
    if r == r.trunc() && r.abs() < 1e15 {
        format!("{}", r as i64)
    } else {
        format!("{r}")
    }
}

fn run() -> Result<bool, String> {
    let cli = Cli::parse();
    let started = Instant::now();
    match cli.command {
        Command::VerifyMap { report, dims, arities, map, state_map, tol } => {
            let seed = resolve_seed(report.seed)?;
            let checks = if let Some(path) = &map {
                let dto: jsonio::MapDto = read_json(path)?;
                let phi = dto.to_map()?;
                let w = match &state_map {
                    Some(wp) => {
                        let wdto: jsonio::StateMapDto = read_json(wp)?;
                        Some(wdto.to_state_map()?)
                    }
                    None => None,
                };
                suites::verify_loaded_map(&phi, w.as_ref(), seed, tol)?
            } else {
                let dims: Vec<usize> = parse_list(&dims, "--dims")?;
                let arities = parse_pairs(&arities, ':', "--arities")?;
                if dims.is_empty() || arities.is_empty() || arities.iter().any(|&(p, q)| p + q == 0)
                {
                    return Err("--dims and --arities must be nonempty with p+q >= 1".into());
                }
                suites::verify_map_suite(seed, &dims, &arities, tol)?
            };
            emit_report("verify-map", seed, checks, report.json.as_ref(), started)
        }
        Command::Equivalence { report, tol } => {
            let seed = resolve_seed(report.seed)?;
            let checks = suites::equivalence_suite(seed, tol)?;
            emit_report("equivalence", seed, checks, report.json.as_ref(), started)
        }
        Command::ApproxAudit { report, scales } => {
            let seed = resolve_seed(report.seed)?;
            let scales: Vec<f64> = parse_list(&scales, "--scales")?;
            if scales.iter().any(|&s| !(s > 0.0)) {
                return Err("--scales entries must be positive".into());
            }
            let checks = suites::approx_suite(seed, &scales)?;
            emit_report("approx-audit", seed, checks, report.json.as_ref(), started)
        }
        Command::Kw { report, k, lattice, csv, histogram, tol } => {
            let seed = resolve_seed(report.seed)?;
            let k = k.unwrap_or_else(self_dual_coupling);
            if !(k > 0.0) {
                return Err("K must be positive".into());
            }
            let lattices = parse_pairs(&lattice, 'x', "--lattice")?;
            let (checks, rows) = suites::kw_suite(k, &lattices, tol)?;
            if let Some(path) = &csv {
                let mut text = String::from("K,K_dual,Z,Z_dual,residual_f,residual_Z\n");
                for r in &rows {
                    text.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        r.k, r.k_dual, r.z, r.z_dual, r.residual_f, r.residual_z
                    ));
                }
                std::fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display()))?;
            }
            if let Some(path) = &histogram {
                let mut per_lattice = Vec::new();
                for &(r, c) in &lattices {
                    let lat = IsingLattice::new(r, c, 1.0).map_err(|e| e.to_string())?;
                    let pairs = dualis_core::ising::enumerate_energies(&lat)
                        .map_err(|e| e.to_string())?;
                    let energies: Vec<f64> = pairs.iter().map(|&(e, _)| e).collect();
                    let counts: Vec<u64> = pairs.iter().map(|&(_, n)| n).collect();
                    per_lattice.push((
                        format!("{r}x{c}"),
                        serde_json::json!({ "energies": energies, "counts": counts }),
                    ));
                }
                // A single lattice gets the bare histogram object; several
                // are keyed by lattice size.
                let doc = if per_lattice.len() == 1 {
                    per_lattice.pop().unwrap().1
                } else {
                    serde_json::Value::Object(per_lattice.into_iter().collect())
                };
                let text = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
                std::fs::write(path, text + "\n")
                    .map_err(|e| format!("writing {}: {e}", path.display()))?;
            }
            for r in &rows {
                println!(
                    "{}x{}: Z={:.6e} Z_dual={:.6e} residual_f={:.3e} residual_Z={:.3e}",
                    r.lattice.0, r.lattice.1, r.z, r.z_dual, r.residual_f, r.residual_z
                );
            }
            emit_report("kw", seed, checks, report.json.as_ref(), started)
        }
        Command::RecoverSpectrum { moments, input, d, alpha, json } => {
            let ps = if let Some(path) = &input {
                let dto: jsonio::PowerSumDto = read_json(path)?;
                dto.to_sequence()
            } else {
                let text = moments.ok_or("either --moments or --input is required")?;
                let sums: Vec<f64> = parse_list(&text, "--moments")?;
                let pairs = parse_pairs(&alpha, ':', "--alpha")?;
                if pairs.len() != 1 {
                    return Err("--alpha must be a single x:y pair".into());
                }
                let (x, y) = pairs[0];
                PowerSumSequence { alpha: (x as u64, y as u64), sums }
            };
            let spec = reconstruct_spectrum(&ps, d).map_err(|e| e.to_string())?;
            let rendered: Vec<String> = spec.values().iter().map(|&v| trim_float(v)).collect();
            println!("{}", rendered.join(" "));
            if let Some(path) = json {
                let doc = serde_json::json!({
                    "schema": SCHEMA,
                    "command": "recover-spectrum",
                    "values": spec.values(),
                });
                let text = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
                std::fs::write(&path, text + "\n")
                    .map_err(|e| format!("writing {}: {e}", path.display()))?;
            }
            Ok(true)
        }
        Command::Fixtures { action } => match action {
            FixtureAction::Generate { dir } => {
                let doc = GoldenFile { schema: SCHEMA.into(), values: golden_values()? };
                std::fs::create_dir_all(&dir)
                    .map_err(|e| format!("creating {}: {e}", dir.display()))?;
                let path = dir.join("golden.json");
                let text = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
                std::fs::write(&path, text + "\n")
                    .map_err(|e| format!("writing {}: {e}", path.display()))?;
                // A wire-format example consumable by `verify-map --map`.
                let mut rng = dualis_core::random::Rng::seeded(DEFAULT_SEED);
                let phi = dualis_core::duality::DualityMap::random(
                    2,
                    1,
                    1,
                    dualis_core::duality::ScalingFunction::Constant(1.0),
                    &mut rng,
                );
                let map_dto = jsonio::MapDto::from_map(&phi)?;
                let map_path = dir.join("sample-map.json");
                let text = serde_json::to_string_pretty(&map_dto).map_err(|e| e.to_string())?;
                std::fs::write(&map_path, text + "\n")
                    .map_err(|e| format!("writing {}: {e}", map_path.display()))?;
                println!(
                    "wrote {} fixtures to {} and {}",
                    doc.values.len(),
                    path.display(),
                    map_path.display()
                );
                Ok(true)
            }
            FixtureAction::Check { dir, tol } => {
                let path = dir.join("golden.json");
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| format!("reading {}: {e}", path.display()))?;
                let doc: GoldenFile = serde_json::from_str(&text)
                    .map_err(|e| format!("parsing {}: {e}", path.display()))?;
                if doc.schema != SCHEMA {
                    return Err(format!("unexpected schema {:?} in {}", doc.schema, path.display()));
                }
                let fresh = golden_values()?;
                let mut ok = true;
                for (name, want) in &doc.values {
                    match fresh.get(name) {
                        Some(got) if (got - want).abs() <= tol => {}
                        Some(got) => {
                            ok = false;
                            println!("[FAIL] {name}: golden {want} vs recomputed {got}");
                        }
                        None => {
                            ok = false;
                            println!("[FAIL] {name}: not a known fixture field");
                        }
                    }
                }
                for name in fresh.keys() {
                    if !doc.values.contains_key(name) {
                        ok = false;
                        println!("[FAIL] {name}: missing from golden file");
                    }
                }
                if ok {
                    println!("fixtures: {} fields match within {tol:e}", fresh.len());
                }
                Ok(ok)
            }
        },
    }
}

#[derive(Serialize, Deserialize)]
struct GoldenFile {
    schema: String,
    values: BTreeMap<String, f64>,
}

/// Deterministic scalar fixtures spanning every module.
fn golden_values() -> Result<BTreeMap<String, f64>, String> {
    let mut v = BTreeMap::new();
    v.insert("kw.kstar".into(), self_dual_coupling());

    for &(r, c) in &[(2usize, 2usize), (3, 3)] {
        let lat = IsingLattice::new(r, c, 1.0).map_err(|e| e.to_string())?;
        let pt = ThermalPoint::from_coupling(self_dual_coupling(), 1.0).map_err(|e| e.to_string())?;
        let z = partition_function(&lat, &pt).map_err(|e| e.to_string())?;
        v.insert(format!("kw.z.{r}x{c}.kstar"), z);
    }
    let lat = IsingLattice::new(4, 4, 1.0).map_err(|e| e.to_string())?;
    let (rf, _) = kw_relation_residual(&lat, 0.3).map_err(|e| e.to_string())?;
    v.insert("kw.residual_f.4x4.k0.3".into(), rf);

    let ps = PowerSumSequence { alpha: (1, 1), sums: vec![6.0, 14.0, 36.0] };
    let spec = reconstruct_spectrum(&ps, 3).map_err(|e| e.to_string())?;
    for (i, &val) in spec.values().iter().enumerate() {
        v.insert(format!("recover.d3.lambda{i}"), val);
    }

    let rho = DensityState::from_real_diag(&[0.25, 0.75]).map_err(|e| e.to_string())?;
    v.insert("entropy.quarter-mix".into(), von_neumann_entropy(&rho));

    let checks = suites::equivalence_suite(DEFAULT_SEED, 1e-8)?;
    for c in checks {
        if c.name.starts_with("thermal:") || c.name.starts_with("wigner:") {
            v.insert(format!("equivalence.{}.lhs", c.name.replace(':', ".")), c.lhs);
        }
    }
    Ok(v)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

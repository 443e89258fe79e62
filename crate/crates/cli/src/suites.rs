//! Check-suite runners behind each CLI subcommand. Every runner is a pure
//! function of its arguments so reports are reproducible byte-for-byte.

use crate::jsonio::{digest, CheckRecord};
use dualis_core::approx::{
    compose_approx, dynamics_bound, eigenvalue_bound, partition_bound, same_map_two_inputs_bound,
    similar_map_bound, ApproxDuality, KFunction,
};
use dualis_core::duality::{
    compose_exact, verify_born_rule, verify_convexity_identity, verify_projector_lemmas,
    verify_spectral_axiom, verify_time_dynamics, DualityMap, ScalingFunction, StateMap,
    PROJECTOR_LEMMA_TOL,
};
use dualis_core::equivalence::{
    derive_entropic_map, mixture_entropy_residual, power_sums, reconstruct_spectrum,
    sample_wigner_extension, verify_entropic_axioms, verify_peel_linf, verify_thermal_axiom,
};
use dualis_core::ising::{
    dual_coupling, kw_relation_residual, partition_function, self_dual_coupling, IsingLattice,
    ThermalPoint,
};
use dualis_core::opscore::{operator_norm, Spectrum};
use dualis_core::random::{
    random_distribution, random_hermitian, random_state, random_unitary, Rng,
};

fn record(name: String, inputs: &str, lhs: f64, rhs: f64, pass: bool) -> CheckRecord {
    CheckRecord { name, inputs_digest: digest(inputs), lhs, rhs, pass }
}

fn bound_record(name: String, inputs: &str, lhs: f64, rhs: f64) -> CheckRecord {
    record(name, inputs, lhs, rhs, lhs <= rhs)
}

/// Spectral / convexity / projector / state-map checks on random maps over
/// the requested dimensions and arities.
pub fn verify_map_suite(
    seed: u64,
    dims: &[usize],
    arities: &[(usize, usize)],
    tol: f64,
) -> Result<Vec<CheckRecord>, String> {
    let mut checks = Vec::new();
    for (di, &n) in dims.iter().enumerate() {
        for (ai, &(p, q)) in arities.iter().enumerate() {
            let combo_seed = seed
                .wrapping_mul(1_000_003)
                .wrapping_add((di * arities.len() + ai) as u64);
            let mut rng = Rng::seeded(combo_seed);
            let c = if rng.uniform() < 0.5 { rng.uniform_in(0.2, 3.0) } else { -rng.uniform_in(0.2, 3.0) };
            let phi = DualityMap::random(n, p, q, ScalingFunction::Constant(c), &mut rng);
            let a = random_hermitian(n, &mut rng);
            let tag = format!("n{n}:p{p}q{q}");
            let inputs = format!("seed={combo_seed} n={n} p={p} q={q} c={c}");

            let rep = verify_spectral_axiom(&phi, &a, tol).map_err(|e| e.to_string())?;
            checks.push(record(format!("spectral:{tag}"), &inputs, rep.deviation, tol, rep.pass));

            let weights = random_distribution(3, &mut rng);
            let operands: Vec<_> = weights
                .into_iter()
                .map(|w| (w, random_hermitian(n, &mut rng)))
                .collect();
            let rep = verify_convexity_identity(&phi, &operands, tol).map_err(|e| e.to_string())?;
            checks.push(record(format!("convexity:{tag}"), &inputs, rep.deviation, tol, rep.pass));

            let rep = verify_projector_lemmas(&phi, combo_seed).map_err(|e| e.to_string())?;
            checks.push(record(
                format!("projector:{tag}"),
                &inputs,
                rep.deviation,
                PROJECTOR_LEMMA_TOL,
                rep.pass,
            ));

            if p >= 1 && c > 0.0 {
                let w = StateMap::uniform(p).map_err(|e| e.to_string())?;
                let rho = random_state(n, &mut rng);
                let h = random_hermitian(n, &mut rng);
                let rep = verify_born_rule(&phi, &w, &h, &rho, tol).map_err(|e| e.to_string())?;
                checks.push(record(format!("born:{tag}"), &inputs, rep.deviation, tol, rep.pass));

                let t = rng.uniform_in(0.1, 2.0);
                let rep =
                    verify_time_dynamics(&phi, &w, &h, &rho, t, tol).map_err(|e| e.to_string())?;
                checks.push(record(
                    format!("dynamics:{tag}"),
                    &inputs,
                    rep.deviation,
                    tol,
                    rep.pass,
                ));
            }

            // One composition per combo: with a second random map on top.
            let mut rng2 = Rng::seeded(combo_seed ^ 0x5eed);
            let phi2 = DualityMap::random(
                phi.m(),
                1,
                1,
                ScalingFunction::Constant(0.5),
                &mut rng2,
            );
            let composed = compose_exact(&phi2, &phi).map_err(|e| e.to_string())?;
            let direct = phi2
                .apply(&phi.apply(&a).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let via = composed.apply(&a).map_err(|e| e.to_string())?;
            let gap = direct.sub(&via).matrix().max_norm();
            checks.push(record(format!("compose:{tag}"), &inputs, gap, 1e-9, gap <= 1e-9));
        }
    }
    Ok(checks)
}

/// Checks on one specific map loaded from file: spectral, convexity,
/// projector lemmas, plus state-map checks when weights are supplied.
pub fn verify_loaded_map(
    phi: &DualityMap,
    w: Option<&StateMap>,
    seed: u64,
    tol: f64,
) -> Result<Vec<CheckRecord>, String> {
    let mut checks = Vec::new();
    let mut rng = Rng::seeded(seed);
    let n = phi.n();
    let inputs = format!("seed={seed} n={n} p={} q={}", phi.p(), phi.q());

    let a = random_hermitian(n, &mut rng);
    let rep = verify_spectral_axiom(phi, &a, tol).map_err(|e| e.to_string())?;
    checks.push(record("spectral:loaded".into(), &inputs, rep.deviation, tol, rep.pass));

    let weights = random_distribution(3, &mut rng);
    let operands: Vec<_> = weights
        .into_iter()
        .map(|wt| (wt, random_hermitian(n, &mut rng)))
        .collect();
    let rep = verify_convexity_identity(phi, &operands, tol).map_err(|e| e.to_string())?;
    checks.push(record("convexity:loaded".into(), &inputs, rep.deviation, tol, rep.pass));

    let rep = verify_projector_lemmas(phi, seed).map_err(|e| e.to_string())?;
    checks.push(record(
        "projector:loaded".into(),
        &inputs,
        rep.deviation,
        PROJECTOR_LEMMA_TOL,
        rep.pass,
    ));

    if let Some(w) = w {
        let rho = random_state(n, &mut rng);
        let h = random_hermitian(n, &mut rng);
        let rep = verify_born_rule(phi, w, &h, &rho, tol).map_err(|e| e.to_string())?;
        checks.push(record("born:loaded".into(), &inputs, rep.deviation, tol, rep.pass));
        let rep = verify_time_dynamics(phi, w, &h, &rho, 1.0, tol).map_err(|e| e.to_string())?;
        checks.push(record("dynamics:loaded".into(), &inputs, rep.deviation, tol, rep.pass));
    }
    Ok(checks)
}

/// Thermal, entropic, peel, reconstruction, mixture, and Wigner checks.
pub fn equivalence_suite(seed: u64, tol: f64) -> Result<Vec<CheckRecord>, String> {
    let mut checks = Vec::new();
    let charges: Vec<f64> = (0..12).map(|i| 0.1 + i as f64 * (5.0 - 0.1) / 11.0).collect();

    for (i, &(n, p, q)) in [(2usize, 1usize, 0usize), (2, 1, 1), (3, 2, 1), (4, 0, 2)]
        .iter()
        .enumerate()
    {
        let combo_seed = seed.wrapping_mul(7_919).wrapping_add(i as u64);
        let mut rng = Rng::seeded(combo_seed);
        let phi = DualityMap::random(n, p, q, ScalingFunction::Constant(1.3), &mut rng);
        let a = random_hermitian(n, &mut rng);
        let tag = format!("n{n}:p{p}q{q}");
        let inputs = format!("seed={combo_seed} n={n} p={p} q={q}");
        let rep = verify_thermal_axiom(&phi, &a, &charges, tol).map_err(|e| e.to_string())?;
        checks.push(record(format!("thermal:{tag}"), &inputs, rep.deviation, tol, rep.pass));
    }

    // Entropic normalization: uniform weights over all p+q blocks give an
    // entropy offset of exactly ln(p+q).
    for (i, &(n, p, q)) in [(2usize, 1usize, 0usize), (3, 1, 1), (2, 2, 1)].iter().enumerate() {
        let combo_seed = seed.wrapping_mul(104_729).wrapping_add(i as u64);
        let mut rng = Rng::seeded(combo_seed);
        let phi = DualityMap::random(n, p, q, ScalingFunction::Constant(2.0), &mut rng);
        let phi_e = derive_entropic_map(&phi);
        let w = StateMap::uniform(p + q).map_err(|e| e.to_string())?;
        let states: Vec<_> = (0..3).map(|_| random_state(n, &mut rng)).collect();
        let reports = verify_entropic_axioms(&phi_e, &w, &states).map_err(|e| e.to_string())?;
        let worst = reports.iter().map(|r| r.residual).fold(0.0f64, f64::max);
        let inputs = format!("seed={combo_seed} n={n} p={p} q={q}");
        checks.push(bound_record(format!("entropic:alpha{}", p + q), &inputs, worst, 1e-9));
    }

    // Spectrum reconstruction from power sums on well-gapped spectra.
    for i in 0..3u64 {
        let combo_seed = seed.wrapping_mul(1_299_709).wrapping_add(i);
        let mut rng = Rng::seeded(combo_seed);
        let d = 3 + rng.index(6); // up to 8
        let mut vals = Vec::with_capacity(d);
        let mut v = rng.uniform_in(-4.0, -2.0);
        for _ in 0..d {
            vals.push(v);
            v += rng.uniform_in(0.05, 1.0);
        }
        let spec = Spectrum::new(vals);
        let ps = power_sums(&spec, d);
        let rec = reconstruct_spectrum(&ps, d).map_err(|e| e.to_string())?;
        let gap = rec.max_gap(&spec);
        let inputs = format!("seed={combo_seed} d={d}");
        checks.push(bound_record(format!("recover:case{i}"), &inputs, gap, 1e-6));
    }

    // Peel comparison: a matching pair passes, a sign flip is caught.
    {
        let spec = Spectrum::new(vec![-1.0, 0.5, 2.0]);
        let dual = spec.scaled(1.5).duplicated(2);
        let rep = verify_peel_linf(&spec, &dual, 1.5, (2, 1), 16).map_err(|e| e.to_string())?;
        checks.push(record("peel:match".into(), "spec=-1,0.5,2 f=1.5 a=2:1", rep.deviation, 1e-4, rep.pass));
        let flipped = Spectrum::new(vec![-3.0, -0.75, 1.5, -3.0, -0.75, 1.5]);
        let rep = verify_peel_linf(&spec, &flipped, 1.5, (2, 1), 16).map_err(|e| e.to_string())?;
        checks.push(record(
            "peel:detects-sign-flip".into(),
            "spec=-1,0.5,2 flipped",
            rep.deviation,
            1e-4,
            !rep.pass,
        ));
    }

    // Mixture entropy residual: zero on orthogonal support, positive on
    // generic overlapping components.
    {
        let mut rng = Rng::seeded(seed.wrapping_add(31));
        let r0 = dualis_core::opscore::DensityState::from_real_diag(&[1.0, 0.0, 0.0, 0.0])
            .map_err(|e| e.to_string())?;
        let r1 = dualis_core::opscore::DensityState::from_real_diag(&[0.0, 0.0, 0.4, 0.6])
            .map_err(|e| e.to_string())?;
        let res = mixture_entropy_residual(&[(0.3, r0), (0.7, r1)]).map_err(|e| e.to_string())?;
        checks.push(bound_record("mixture:orthogonal".into(), "diag pair", res.abs(), 1e-9));

        let g0 = random_state(4, &mut rng);
        let g1 = random_state(4, &mut rng);
        let res = mixture_entropy_residual(&[(0.5, g0), (0.5, g1)]).map_err(|e| e.to_string())?;
        checks.push(record(
            "mixture:generic-positive".into(),
            &format!("seed={}", seed.wrapping_add(31)),
            res,
            1e-6,
            res > 1e-6,
        ));
    }

    // Wigner extensions at alpha = 1, 2, 3.
    for &(p, q) in &[(1usize, 0usize), (1, 1), (2, 1)] {
        let alpha = p + q;
        let wseed = seed.wrapping_mul(17).wrapping_add(alpha as u64);
        let (_, rep) = sample_wigner_extension(2, p, q, wseed).map_err(|e| e.to_string())?;
        let inputs = format!("seed={wseed} p={p} q={q}");
        checks.push(record(format!("wigner:alpha{alpha}"), &inputs, rep.deviation, 1e-9, rep.pass));
    }

    Ok(checks)
}

/// Defect, eigenvalue, partition, dynamics, similarity, and composition
/// audits on seeded perturbations.
pub fn approx_suite(seed: u64, scales: &[f64]) -> Result<Vec<CheckRecord>, String> {
    let mut checks = Vec::new();
    for (si, &scale) in scales.iter().enumerate() {
        let combo_seed = seed.wrapping_mul(15_485_863).wrapping_add(si as u64);
        let mut rng = Rng::seeded(combo_seed);
        let n = 2 + rng.index(2);
        let (p, q) = (1usize, 1usize);
        let exact = DualityMap::random(n, p, q, ScalingFunction::Constant(1.5), &mut rng);
        let approx = ApproxDuality::perturbed(
            exact.clone(),
            combo_seed ^ 0xa5a5,
            scale,
            KFunction::Constant(1.0),
            0.0,
        );
        let a = random_hermitian(n, &mut rng);
        let tag = format!("s{scale}");
        let inputs = format!("seed={combo_seed} n={n} scale={scale}");

        let defect = approx.defect(&a).map_err(|e| e.to_string())?;
        let budget = approx.k.eval(&a).map_err(|e| e.to_string())? * approx.epsilon;
        checks.push(bound_record(format!("defect:{tag}"), &inputs, defect, budget + 1e-12));

        let reports = eigenvalue_bound(&approx, &a).map_err(|e| e.to_string())?;
        let worst = reports
            .iter()
            .map(|r| r.lhs - r.rhs_bound)
            .fold(f64::NEG_INFINITY, f64::max);
        let pass = reports.iter().all(|r| r.pass);
        checks.push(record(format!("eigenvalue:{tag}"), &inputs, worst, 0.0, pass));

        let h = random_hermitian(n, &mut rng);
        let fh = exact.scaling().eval(&h).map_err(|e| e.to_string())?;
        let delta = fh * operator_norm(&h) + 1.0;
        let rep = partition_bound(&approx, &h, 0.7, delta).map_err(|e| e.to_string())?;
        checks.push(record(format!("partition:{tag}"), &inputs, rep.lhs, rep.rhs_bound, rep.pass));

        let w = StateMap::uniform(p).map_err(|e| e.to_string())?;
        let rho = random_state(n, &mut rng);
        let rep = dynamics_bound(&approx, &w, &h, &rho, 1.0).map_err(|e| e.to_string())?;
        checks.push(record(format!("dynamics:{tag}"), &inputs, rep.lhs, rep.rhs_bound, rep.pass));

        // Two exact maps with nearby unitaries.
        let phi2 = DualityMap::new(
            n,
            p,
            q,
            random_unitary((p + q) * n, &mut rng),
            ScalingFunction::Constant(1.5),
        )
        .map_err(|e| e.to_string())?;
        let rep = similar_map_bound(&exact, &phi2, &a).map_err(|e| e.to_string())?;
        checks.push(record(format!("similar:{tag}"), &inputs, rep.lhs, rep.rhs_bound, rep.pass));

        let a2 = random_hermitian(n, &mut rng);
        let rep = same_map_two_inputs_bound(&exact, &a, &a2).map_err(|e| e.to_string())?;
        checks.push(record(format!("two-inputs:{tag}"), &inputs, rep.lhs, rep.rhs_bound, rep.pass));

        // Composition: budgets add exactly and the composed defect stays
        // within the propagated weight times the summed budget.
        let outer = DualityMap::random(
            exact.m(),
            1,
            0,
            ScalingFunction::Constant(0.8),
            &mut rng,
        );
        let outer_t = ApproxDuality::perturbed(
            outer,
            combo_seed ^ 0xbeef,
            scale,
            KFunction::Constant(1.0),
            0.0,
        );
        let composed = compose_approx(&outer_t, &approx).map_err(|e| e.to_string())?;
        let eps_gap = (composed.epsilon - 2.0 * scale).abs();
        checks.push(bound_record(format!("compose-epsilon:{tag}"), &inputs, eps_gap, 1e-15));
        let cdefect = composed.defect(&a).map_err(|e| e.to_string())?;
        let cbudget =
            composed.k.eval(&a).map_err(|e| e.to_string())? * composed.epsilon;
        checks.push(bound_record(format!("compose-defect:{tag}"), &inputs, cdefect, cbudget + 1e-12));
    }
    Ok(checks)
}

/// One CSV row of the lattice sweep.
pub struct KwRow {
    pub lattice: (usize, usize),
    pub k: f64,
    pub k_dual: f64,
    pub z: f64,
    pub z_dual: f64,
    pub residual_f: f64,
    pub residual_z: f64,
}

/// Lattice sweep at coupling `k`, plus the scalar duality checks.
pub fn kw_suite(
    k: f64,
    lattices: &[(usize, usize)],
    tol: f64,
) -> Result<(Vec<CheckRecord>, Vec<KwRow>), String> {
    let mut checks = Vec::new();
    let mut rows = Vec::new();

    // A coupling quoted to a few digits of the self-dual point stands for
    // the exact fixed point, where the residual vanishes analytically.
    let kstar_exact = self_dual_coupling();
    let k = if (k - kstar_exact).abs() < 1e-6 { kstar_exact } else { k };

    let kd = dual_coupling(k).map_err(|e| e.to_string())?;
    let back = dual_coupling(kd).map_err(|e| e.to_string())?;
    checks.push(bound_record(
        "kw:involution".into(),
        &format!("K={k}"),
        (back - k).abs(),
        1e-12,
    ));
    let kstar = self_dual_coupling();
    checks.push(bound_record(
        "kw:kstar".into(),
        "closed form",
        (kstar - 0.4406867935).abs(),
        1e-7,
    ));

    let at_self_dual = (k - kstar).abs() < 1e-6;
    for &(r, c) in lattices {
        let lat = IsingLattice::new(r, c, 1.0).map_err(|e| e.to_string())?;
        let z = partition_function(&lat, &ThermalPoint::from_coupling(k, 1.0).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let z_dual =
            partition_function(&lat, &ThermalPoint::from_coupling(kd, 1.0).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        let (residual_f, residual_z) = kw_relation_residual(&lat, k).map_err(|e| e.to_string())?;
        rows.push(KwRow { lattice: (r, c), k, k_dual: kd, z, z_dual, residual_f, residual_z });
        if at_self_dual {
            checks.push(bound_record(
                format!("kw:residual-z:{r}x{c}"),
                &format!("K={k} lattice={r}x{c}"),
                residual_z,
                tol,
            ));
        }
    }
    Ok((checks, rows))
}

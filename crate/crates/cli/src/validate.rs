//! Oracle suites grouped into named families.

use std::time::Instant;

use nvsqueeze::linalg::CMat;
use nvsqueeze::lindblad::{
    assemble, bare_full_model, build_operators, interaction_full_model, spin_bloch_generator, steady_state,
    steady_state_escalating, HilbertSpace, SteadyOptions,
};
use nvsqueeze::model::{detuning_for_resonance, dressed_frame};
use nvsqueeze::moments::{
    moment_rhs, occupancy_denominator, quadrature_variance, stability_check, steady_moments, steady_moments_two_mode,
    two_mode_variance, MomentState,
};
use nvsqueeze::reduced::{coefficients_exact, eliminated_action, reduced_generator_single, reduced_generator_two_mode};
use nvsqueeze::scalar::{c, cr};
use nvsqueeze::spinsolver::{bloch_rhs, spin_steady_closed, spin_steady_numeric, BareElements};
use nvsqueeze::{ReducedCoefficients, SystemParams, C};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

/// Deliberate corruption of the closed-form side, for negative controls.
#[derive(Clone, Copy, Debug, Default)]
pub struct Tamper {
    /// Multiplies S₁ in coefficients handed to closed-form comparisons.
    pub s1_scale: Option<f64>,
    /// Added to the closed-form ρ₀₀.
    pub spin_shift: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub name: &'static str,
    /// Informational families are reported but never fail the run.
    pub gating: bool,
    pub passed: bool,
    pub checks: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub level: Level,
    pub passed: bool,
    pub families: Vec<FamilyReport>,
}

struct Family {
    checks: usize,
    worst: f64,
    detail: String,
}

impl Family {
    fn new() -> Self {
        Family { checks: 0, worst: 0.0, detail: String::new() }
    }
    fn record(&mut self, err: f64) {
        self.checks += 1;
        // NaN must fail
        self.worst = if err.is_nan() || self.worst.is_nan() { f64::NAN } else { self.worst.max(err) };
    }
}

fn run(name: &'static str, tolerance: f64, gating: bool, f: impl FnOnce(&mut Family)) -> FamilyReport {
    let t = Instant::now();
    let mut fam = Family::new();
    f(&mut fam);
    // NaN compares false and fails
    let passed = !gating || (fam.checks > 0 && fam.worst <= tolerance);
    FamilyReport { name, gating, passed, checks: fam.checks, worst: fam.worst, tolerance, detail: fam.detail, seconds: t.elapsed().as_secs_f64() }
}

fn tampered(c: &ReducedCoefficients, t: &Tamper) -> ReducedCoefficients {
    let mut c = *c;
    if let Some(s) = t.s1_scale {
        c.s1 = c.s1 * s;
    }
    c
}

fn locked(omega0: f64, omega1: f64) -> Option<SystemParams> {
    SystemParams { omega0, omega1, ..SystemParams::baseline() }.locked().ok()
}

fn coeffs(p: &SystemParams) -> Option<ReducedCoefficients> {
    coefficients_exact(&dressed_frame(p), &spin_steady_closed(p), p.gamma1).ok()
}

/// Random spin parameters with Ω₀, Ω₁ ≤ Γ₁.
pub fn random_spin_params(rng: &mut ChaCha8Rng) -> SystemParams {
    let gamma0 = rng.gen_range(0.05..0.5);
    let gamma1 = gamma0 * rng.gen_range(1.0..2.0);
    SystemParams {
        delta: rng.gen_range(-1.0..1.0),
        omega0: rng.gen_range(0.0..gamma1),
        omega1: rng.gen_range(-gamma1..gamma1),
        gamma0,
        gamma1,
        ..SystemParams::baseline()
    }
}

fn spin_closed_vs_nullspace(t: &Tamper, n: usize) -> FamilyReport {
    run("spin-closed-vs-nullspace", 1e-8, true, |f| {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..n {
            let p = random_spin_params(&mut rng);
            let mut closed = spin_steady_closed(&p).bare;
            if let Some(s) = t.spin_shift {
                closed.rho_00 = closed.rho_00 + s;
            }
            match spin_steady_numeric(&p) {
                Ok(num) => f.record((&closed.matrix() - &num.bare.matrix()).max_abs()),
                Err(e) => {
                    f.record(f64::INFINITY);
                    f.detail = e.to_string();
                }
            }
        }
    })
}

fn dissipator_bloch() -> FamilyReport {
    run("dissipator-bloch", 1e-12, true, |f| {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let space = HilbertSpace::new(3, vec![]).expect("spin space");
        for _ in 0..20 {
            let p = random_spin_params(&mut rng);
            let l = assemble(&spin_bloch_generator(&p).expect("valid rates"), &space).expect("spin generator");
            for j in 0..9 {
                let mut x = [0.0; 9];
                x[j] = 1.0;
                let r = BareElements::from_real(&x);
                let got = BareElements::from_matrix(&l.apply(&r.matrix())).to_real();
                let want = bloch_rhs(&p, &r).to_real();
                f.record(got.iter().zip(want).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())));
            }
        }
    })
}

fn random_low_state(n: usize, k: usize, rng: &mut ChaCha8Rng) -> CMat<f64> {
    let a = CMat::from_fn(n, n, |i, j| if i < k && j < k { c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5) } else { C::default() });
    let r = &a * &a.adjoint();
    let tr = r.trace();
    r.scale(cr(1.0) / tr)
}

fn elimination_consistency(t: &Tamper) -> FamilyReport {
    run("elimination-consistency", 1e-12, true, |f| {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 10;
        let space = HilbertSpace::new(1, vec![n]).expect("fock space");
        let d = build_operators::<f64>(&space, None).lower[0].to_dense();
        for (w0, w1, phi) in [(0.6, 0.0, 0.0), (0.366, -0.7, 0.4), (1.1, 0.5, 1.3), (0.2, -0.3, 2.0)] {
            let Some(mut p) = locked(w0, w1) else { continue };
            p.phi = phi;
            let frame = dressed_frame(&p);
            let spin = spin_steady_closed(&p);
            let Some(coef) = coeffs(&p) else { continue };
            let l = assemble(&reduced_generator_single(&tampered(&coef, t), 0.0, 0.0), &space).expect("reduced generator");
            let scale = coef.a_minus.abs() + coef.s1.norm() + coef.delta_shift.abs();
            for _ in 0..2 {
                let rho = random_low_state(n, 5, &mut rng);
                let lhs = eliminated_action(&frame, &spin, p.gamma1, &d, &rho).expect("non-degenerate");
                f.record((&lhs - &l.apply(&rho)).max_abs() / scale);
            }
        }
    })
}

fn random_locked_point(rng: &mut ChaCha8Rng) -> Option<(SystemParams, ReducedCoefficients)> {
    let mut p = locked(rng.gen_range(0.02..1.4), rng.gen_range(-0.8..0.8))?;
    p.g = rng.gen_range(0.01..0.1);
    p.n_th = 10f64.powf(rng.gen_range(-1.0..4.0));
    p.gamma_m = 10f64.powf(rng.gen_range(-7.0..-3.0));
    let c = coeffs(&p)?;
    Some((p, c))
}

fn moment_fixed_point(t: &Tamper) -> FamilyReport {
    run("moment-fixed-point", 1e-10, true, |f| {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        while f.checks < 50 {
            let Some((p, c)) = random_locked_point(&mut rng) else { continue };
            let Ok((n, pair)) = steady_moments(&c, p.gamma_m, p.n_th) else { continue };
            let r = moment_rhs(&MomentState { mean_d: C::default(), occupancy: n, pair }, &tampered(&c, t), p.gamma_m, p.n_th);
            let scale = p.gamma_m * p.n_th + c.a_minus.abs() * (1.0 + n);
            f.record((r.occupancy.abs() + r.pair.norm()) / scale);
        }
    })
}

fn resonance_lock() -> FamilyReport {
    run("resonance-lock", 1e-9, true, |f| {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut refused = 0;
        for _ in 0..200 {
            let (w0, w1) = (rng.gen_range(0.0..1.5), rng.gen_range(-1.5..1.0));
            match detuning_for_resonance(1.0, w0, w1) {
                Ok(delta) => {
                    let p: SystemParams = SystemParams { delta, omega0: w0, omega1: w1, ..SystemParams::baseline() };
                    f.record((dressed_frame(&p).omega_bc - 1.0).abs());
                }
                Err(_) => refused += 1,
            }
        }
        f.detail = format!("{refused} points without a resonant branch");
    })
}

fn stability_boundary() -> FamilyReport {
    run("stability-boundary", 0.0, true, |f| {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut unstable = 0;
        while f.checks < 200 {
            let Some((mut p, c)) = random_locked_point(&mut rng) else { continue };
            p.gamma_m = 10f64.powf(rng.gen_range(-9.0..-2.0));
            let g = c.net_damping(p.gamma_m);
            let den = occupancy_denominator(&c, p.gamma_m);
            let st = stability_check(&c, p.gamma_m);
            // skip points too close to the boundary to call
            if den.abs() < 1e-9 * (g.abs() + 1e-12) || g.abs() < 1e-12 {
                continue;
            }
            unstable += usize::from(!st.stable);
            f.record(if st.stable == (g > 0.0 && den > 0.0) { 0.0 } else { 1.0 });
        }
        f.detail = format!("{unstable} unstable samples");
    })
}

fn two_mode_closed() -> FamilyReport {
    run("two-mode-closed", 1e-10, true, |f| {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        while f.checks < 200 {
            let Some((p, c)) = random_locked_point(&mut rng) else { continue };
            let (Ok((n, pair)), Ok((occ, sp))) = (steady_moments(&c, p.gamma_m, p.n_th), steady_moments_two_mode(&c, p.gamma_m, p.n_th)) else {
                continue;
            };
            let Ok(rep) = quadrature_variance(n, pair) else { continue };
            f.record((two_mode_variance(occ, sp) - rep.var_x).abs() / rep.var_x.max(1.0));
        }
    })
}

/// Stable points with small occupation, suited to Fock-space checks.
/// Top-two-level population below which a Fock cutoff is accepted. Squeezed
/// states have long tails, so 1e-9 still leaves ~1e-6 error in ⟨d†d⟩.
pub const FOCK_TAIL_EPS: f64 = 1e-12;

/// Two-mode sampling bounds. The mode orthogonal to u only sees the γ_m bath
/// and sits near n_th, so 8 levels per mode need both n_th and n_ss small.
pub const TWO_MODE_MAX_NTH: f64 = 0.2;
pub const TWO_MODE_MAX_N: f64 = 0.1;

/// Stable points with n_th ∈ [0, max_nth) and closed-form n_ss < max_n.
pub fn fock_sample_points(count: usize, seed: u64, max_nth: f64, max_n: f64) -> Vec<(SystemParams, ReducedCoefficients)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let Some(mut p) = locked(rng.gen_range(0.05..1.4), rng.gen_range(-0.8..0.8)) else { continue };
        p.g = rng.gen_range(0.01..0.1);
        p.gamma_m = 10f64.powf(rng.gen_range(-4.0..-2.0));
        p.n_th = rng.gen_range(0.0..max_nth);
        let Some(c) = coeffs(&p) else { continue };
        match steady_moments(&c, p.gamma_m, p.n_th) {
            Ok((n, _)) if n < max_n => out.push((p, c)),
            _ => {}
        }
    }
    out
}

fn reduced_fock_oracle(t: &Tamper) -> FamilyReport {
    run("reduced-fock-oracle", 1e-6, true, |f| {
        for (p, c) in fock_sample_points(5, 8, 2.0, 2.0) {
            let (n, pair) = nvsqueeze::moments::steady_moments_unchecked(&tampered(&c, t), p.gamma_m, p.n_th);
            match steady_state_escalating(1, 1, 16, 128, FOCK_TAIL_EPS, |s| assemble(&reduced_generator_single(&c, p.gamma_m, p.n_th), s)) {
                Ok(e) => {
                    let ops = build_operators::<f64>(&e.space, None);
                    let fn_ = e.state.expect(&ops.number[0]).re;
                    let fp = e.state.expect(&ops.lower[0].matmul(&ops.lower[0]));
                    f.record((fn_ - n).abs().max((fp - pair).norm()));
                }
                Err(e) => {
                    f.record(f64::INFINITY);
                    f.detail = e.to_string();
                }
            }
        }
    })
}

fn two_mode_fock_oracle() -> FamilyReport {
    run("two-mode-fock-oracle", 1e-4, true, |f| {
        let space = HilbertSpace::new(1, vec![8, 8]).expect("two-mode space");
        let ops = build_operators::<f64>(&space, None);
        let sum = ops.lower[0].add(&ops.lower[1]);
        let occ_op = sum.adjoint().matmul(&sum);
        let pair_op = sum.matmul(&sum);
        for (p, c) in fock_sample_points(1, 9, TWO_MODE_MAX_NTH, TWO_MODE_MAX_N) {
            let Ok((n, pair)) = steady_moments(&c, p.gamma_m, p.n_th) else { continue };
            let l = assemble(&reduced_generator_two_mode(&c, p.gamma_m, p.n_th, std::f64::consts::FRAC_PI_4), &space).expect("generator");
            match steady_state(&l, &SteadyOptions::default()) {
                Ok(rho) => {
                    let u = two_mode_variance(rho.expect(&occ_op).re, rho.expect(&pair_op));
                    let x = quadrature_variance(n, pair).map(|r| r.var_x).unwrap_or(f64::NAN);
                    f.record((u - x).abs());
                }
                Err(e) => {
                    f.record(f64::INFINITY);
                    f.detail = e.to_string();
                }
            }
        }
    })
}

/// Relative n_ss error of the full spin ⊗ Fock model against the reduced
/// closed form at g = 0.02, 0.01, 0.005 (Γ₀ = Γ₁ = 0.25, n_th = 0.5, Ω₀ = 0.3, Ω₁ = 0).
pub fn elimination_errors() -> Result<Vec<(f64, f64)>, nvsqueeze::Error> {
    [0.02, 0.01, 0.005]
        .into_iter()
        .map(|g| {
            let p = SystemParams { omega0: 0.3, omega1: 0.0, g, n_th: 0.5, gamma_m: 1e-6, ..SystemParams::baseline() }.locked()?;
            let c = coefficients_exact(&dressed_frame(&p), &spin_steady_closed(&p), p.gamma1)?;
            let (n, _) = steady_moments(&c, p.gamma_m, p.n_th)?;
            let e = steady_state_escalating(3, 1, 16, 64, 1e-9, |s| assemble(&interaction_full_model(&p)?.0, s))?;
            let ops = build_operators::<f64>(&e.space, None);
            let full = e.state.expect(&ops.number[0]).re;
            Ok((g, (full - n).abs() / n))
        })
        .collect()
}

fn elimination_convergence() -> FamilyReport {
    run("elimination-convergence", 0.1, true, |f| match elimination_errors() {
        Ok(errs) => {
            let monotone = errs.windows(2).all(|w| w[1].1 < w[0].1);
            f.detail = errs.iter().map(|(g, e)| format!("g={g}: {e:.4}")).collect::<Vec<_>>().join(", ");
            f.record(if monotone { errs.last().map_or(f64::INFINITY, |x| x.1) } else { f64::INFINITY });
        }
        Err(e) => {
            f.record(f64::INFINITY);
            f.detail = e.to_string();
        }
    })
}

/// Bare lab-frame model against the rotating-wave interaction model.
/// Reported only: the lab-frame model at these points does not squeeze.
fn rwa_bare_vs_interaction() -> FamilyReport {
    run("rwa-bare-vs-interaction", f64::INFINITY, false, |f| {
        let mut parts = Vec::new();
        for (g, gamma) in [(0.02, 0.25), (0.01, 0.1)] {
            let Ok(p) = SystemParams { omega0: 0.3, g, gamma0: gamma, gamma1: gamma, n_th: 0.5, gamma_m: 1e-4, ..SystemParams::baseline() }.locked() else {
                continue;
            };
            let space = HilbertSpace::new(3, vec![12]).expect("space");
            let ops = build_operators::<f64>(&space, None);
            let solve = |spec| steady_state(&assemble(&spec, &space)?, &SteadyOptions::default());
            let (Ok(bare), Ok((rwa, _, _))) = (bare_full_model(&p), interaction_full_model(&p)) else { continue };
            match (solve(bare), solve(rwa)) {
                (Ok(a), Ok(b)) => {
                    let (na, nb) = (a.expect(&ops.number[0]).re, b.expect(&ops.number[0]).re);
                    let pa = a.expect(&ops.lower[0].matmul(&ops.lower[0])).norm();
                    let pb = b.expect(&ops.lower[0].matmul(&ops.lower[0])).norm();
                    let err = (na - nb).abs() / nb;
                    f.record(err);
                    parts.push(format!("g={g} Γ={gamma}: n bare {na:.4} rwa {nb:.4}, |⟨d²⟩| bare {pa:.2e} rwa {pb:.2e}"));
                }
                _ => parts.push(format!("g={g} Γ={gamma}: solve failed")),
            }
        }
        f.detail = parts.join("; ");
    })
}

pub fn validate(level: Level, tamper: Tamper) -> ValidationReport {
    let mut families = vec![
        spin_closed_vs_nullspace(&tamper, 200),
        dissipator_bloch(),
        elimination_consistency(&tamper),
        moment_fixed_point(&tamper),
        resonance_lock(),
        stability_boundary(),
        two_mode_closed(),
    ];
    if level == Level::Full {
        families.push(reduced_fock_oracle(&tamper));
        families.push(two_mode_fock_oracle());
        families.push(elimination_convergence());
        families.push(rwa_bare_vs_interaction());
    }
    let passed = families.iter().all(|f| f.passed);
    ValidationReport { level, passed, families }
}

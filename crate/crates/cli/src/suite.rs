//! The `verify` command: every invariant of the library, one row per check.

use hausdorff_core::measure::build_quadrature;
use hausdorff_core::mobius::MobiusParam;
use hausdorff_core::norms::bloch_seminorm_with;
use hausdorff_core::verify::{
    approx_identity_sweep, change_of_variables_check, check_bound_seeds, composition_inequality_check,
    mobius_invariance_check, SweepOptions,
};
use hausdorff_core::{
    bergman_norm, compose, from_boundary_samples, hardy_norm, Complex64, ComposeParams, HausdorffOperator,
    KernelSpec, MeasureSpec, SpaceNorm, SpaceSpec, TaylorFunction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::{fmt, header, Output};
use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::table::Table;

struct Check {
    name: String,
    measured: f64,
    tolerance: f64,
    pass: bool,
}

impl Check {
    /// Passes when `measured <= tolerance`.
    fn at_most(name: &str, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            measured,
            tolerance,
            pass: measured <= tolerance,
        }
    }

    fn flag(name: &str, ok: bool) -> Self {
        Self {
            name: name.to_string(),
            measured: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass: ok,
        }
    }
}

fn disc_point(rng: &mut ChaCha8Rng, rmax: f64) -> Complex64 {
    let r = rmax * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn poly(rng: &mut ChaCha8Rng, max_degree: usize) -> TaylorFunction {
    let d = rng.gen_range(0..=max_degree);
    TaylorFunction::new(
        (0..=d)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

pub fn run(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let s = &cfg.suite;
    let tol = &s.tolerances;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();

    let (mut inv, mut ident) = (0.0f64, 0.0f64);
    for _ in 0..s.mobius_pairs {
        let w = MobiusParam::new(disc_point(&mut rng, 0.99))?;
        let z = disc_point(&mut rng, 1.0);
        let phi = w.apply_unchecked(z);
        inv = inv.max((w.apply_unchecked(phi) - z).norm());
        ident = ident.max(((1.0 - phi.norm_sqr()) - w.one_minus_abs_sq(z)).abs());
    }
    checks.push(Check::at_most("mobius_involution", inv, tol.mobius));
    checks.push(Check::at_most("mobius_identity", ident, tol.mobius));

    let mut rt = 0.0f64;
    for _ in 0..20 {
        let f = poly(&mut rng, 64);
        let back = from_boundary_samples(&f.boundary_samples(0.9, 256)?, 64)?;
        rt = rt.max(back.max_coeff_diff(&f));
    }
    checks.push(Check::at_most("boundary_round_trip", rt, tol.roundtrip));

    let mut cc = 0.0f64;
    for _ in 0..s.composition_pairs {
        let f = poly(&mut rng, 16);
        let w = MobiusParam::new(disc_point(&mut rng, 0.9))?;
        let g = compose(&f, &w, &ComposeParams::default())?;
        for _ in 0..s.composition_points {
            let z = disc_point(&mut rng, 0.95);
            cc = cc.max((g.horner(z) - f.horner(w.apply_unchecked(z))).norm());
        }
    }
    checks.push(Check::at_most("composition_consistency", cc, tol.composition));

    let z = TaylorFunction::monomial(1);
    let one = TaylorFunction::from_real(&[1.0]);
    let r0 = build_quadrature(&MeasureSpec::area(0.0), cfg.norms.bergman_level)?;
    let r1 = build_quadrature(&MeasureSpec::area(1.0), cfg.norms.bergman_level)?;
    let truths = [
        ("bergman_norm_z_alpha0", bergman_norm(&z, 2.0, 0.0, &r0)?, 0.5f64.sqrt()),
        ("bergman_norm_z_alpha1", bergman_norm(&z, 2.0, 1.0, &r1)?, (1.0f64 / 3.0).sqrt()),
        ("hardy_norm_1_plus_z", hardy_norm(&TaylorFunction::from_real(&[1.0, 1.0]), 2.0), 2f64.sqrt()),
        ("bloch_norm_one", SpaceNorm::Bloch(cfg.norms.bloch).norm(&one), 1.0),
        ("bergman_norm_one", bergman_norm(&one, 2.0, 0.0, &r0)?, 1.0),
        ("hardy_norm_one", hardy_norm(&one, 2.0), 1.0),
    ];
    for (name, got, want) in truths {
        checks.push(Check::at_most(name, (got - want).abs(), tol.norms));
    }
    let b = bloch_seminorm_with(&TaylorFunction::monomial(2), &cfg.norms.bloch).value;
    checks.push(Check::at_most("bloch_seminorm_z2", (b - 4.0 / (3.0 * 3f64.sqrt())).abs(), tol.bloch_grid));

    let mut dev = 0.0f64;
    for _ in 0..s.invariance_pairs {
        let f = poly(&mut rng, 16);
        let w = MobiusParam::new(disc_point(&mut rng, 0.7))?;
        let c = mobius_invariance_check(&f, &w, &cfg.norms.bloch, tol.bloch_invariance)?;
        if c.rhs > 0.0 {
            dev = dev.max((c.lhs - c.rhs).abs() / c.rhs);
        }
    }
    checks.push(Check::at_most("bloch_mobius_invariance", dev, tol.bloch_invariance));

    for case in &s.bound_cases {
        let h = HausdorffOperator::new(case.kernel.clone(), case.measure.clone(), cfg.level.min(1))?;
        let reports = check_bound_seeds(&h, &case.space, s.bound_trials, &s.bound_seeds, &cfg.norms)?;
        let worst = reports.iter().map(|r| r.ratio).fold(0.0, f64::max);
        checks.push(Check::at_most(&format!("bound_{}", case.space.label()), worst - 1.0, tol.bound));
    }

    let fs = [
        TaylorFunction::from_real(&[1.0, 0.5]),
        TaylorFunction::from_real(&[0.0, 1.0, -0.3]),
        TaylorFunction::new(vec![Complex64::new(0.2, 0.1), Complex64::new(0.0, -1.0), Complex64::new(0.5, 0.5)]),
    ];
    let ws = [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.3, 0.6)];
    let mut cov = 0.0f64;
    for f in &fs {
        for &w in &ws {
            for alpha in [0.0, 1.0, 2.5] {
                let c = change_of_variables_check(f, &MobiusParam::new(w)?, 2.0, alpha, 3)?;
                cov = cov.max((c.lhs - c.rhs).abs() / c.lhs.abs().max(c.rhs.abs()));
            }
        }
    }
    checks.push(Check::at_most("change_of_variables", cov, tol.change_of_variables));

    let mut excess = -1.0f64;
    for _ in 0..s.inequality_pairs {
        let f = poly(&mut rng, 12);
        let w = MobiusParam::new(disc_point(&mut rng, 0.8))?;
        for space in [SpaceSpec::Bergman { p: 2.0, alpha: 1.0 }, SpaceSpec::Hardy { p: 2.0 }] {
            let c = composition_inequality_check(&f, &w, &space, &cfg.norms)?;
            if c.rhs > 0.0 {
                excess = excess.max(c.lhs / c.rhs - 1.0);
            }
        }
    }
    checks.push(Check::at_most("composition_inequalities", excess, tol.inequality));

    let atoms = MeasureSpec::discrete(
        &[Complex64::new(0.5, 0.0), Complex64::new(-0.3, 0.6), Complex64::new(0.1, -0.8)],
        &[0.5, 0.3, 0.2],
    )?;
    let mut dual = 0.0f64;
    for (k, m) in [(KernelSpec::constant(1.0), atoms), (KernelSpec::RadialPower(2.0), MeasureSpec::area(0.0))] {
        let h = HausdorffOperator::new(k, m, 1)?;
        let a = h.coefficient_sequence(&z, 32)?;
        dual = dual.max(a.max_abs_diff(&h.corollary_coeffs(32)));
    }
    checks.push(Check::at_most("coefficient_duality", dual, tol.duality));

    let f = TaylorFunction::new((0..=8).map(|k| Complex64::new(1.0 / (k + 1) as f64, 0.1 * k as f64)).collect());
    let centered = MeasureSpec::discrete(&[Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0)], &[0.5, 0.5])?;
    for (label, m) in [("area", MeasureSpec::area(0.0)), ("atoms", centered)] {
        let h = HausdorffOperator::new(KernelSpec::constant(1.0), m, 1)?.normalize_kernel()?;
        for space in [SpaceSpec::Bergman { p: 2.0, alpha: 0.0 }, SpaceSpec::Hardy { p: 2.0 }] {
            let opts = SweepOptions {
                trials: s.bound_trials,
                seed: cfg.seed,
            };
            let r = approx_identity_sweep(&h, &f, &space, &cfg.epsilons, &cfg.norms, &opts)?;
            let name = format!("identity_{label}_{}", space.label());
            let last = r.errors.last().copied().unwrap_or(0.0);
            checks.push(Check::at_most(&format!("{name}_error"), last / r.norm_f, tol.identity));
            checks.push(Check::flag(&format!("{name}_nonincreasing"), r.nonincreasing));
            checks.push(Check::flag(&format!("{name}_uniform"), r.uniform_pass));
        }
    }

    let mut t = Table::new(&["check", "measured", "tolerance", "pass"]);
    header(&mut t, "verify", cfg);
    let failed = checks.iter().filter(|c| !c.pass).count();
    t.meta("checks", checks.len()).meta("failed", failed);
    for c in &checks {
        t.row(vec![c.name.clone(), fmt(c.measured), fmt(c.tolerance), c.pass.to_string()]);
    }
    Ok(Output {
        text: t.to_csv()?,
        failed: failed > 0,
    })
}

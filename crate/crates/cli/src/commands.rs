use hausdorff_core::measure::build_quadrature_with;
use hausdorff_core::norms::{bloch_seminorm_with, hardy_profile, HardyGrid};
use hausdorff_core::verify::{approx_identity_sweep, check_bound_seeds, SweepOptions};
use hausdorff_core::{
    bergman_norm, HausdorffOperator, MeasureSpec, SpaceSpec, TaylorFunction,
};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::table::Table;

/// Rendered output of one command; `failed` marks a verification failure.
pub struct Output {
    pub text: String,
    pub failed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, failed: false }
    }
}

pub fn fmt(x: f64) -> String {
    format!("{x:e}")
}

pub fn header(t: &mut Table, command: &str, cfg: &ExperimentConfig) {
    t.meta("tool", concat!("hausdorff ", env!("CARGO_PKG_VERSION")))
        .meta("command", command)
        .meta("config_sha256", cfg.hash())
        .meta("quadrature_level", cfg.level);
}

pub fn operator(cfg: &ExperimentConfig) -> Result<HausdorffOperator, CliError> {
    Ok(HausdorffOperator::with_options(
        cfg.kernel.clone(),
        cfg.measure()?.clone(),
        cfg.level,
        &cfg.quadrature,
        cfg.compose,
    )?)
}

pub fn apply(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let f = cfg.function()?;
    let hf = operator(cfg)?.apply(&f)?;
    let mut t = Table::new(&["index", "re", "im"]);
    header(&mut t, "apply", cfg);
    t.meta("degree", hf.effective_degree())
        .meta("computed_degree", hf.degree())
        .meta("aliasing_estimate", fmt(hf.tail_magnitude(8)));
    for (k, c) in hf.coeffs()[..=hf.effective_degree()].iter().enumerate() {
        t.row(vec![k.to_string(), fmt(c.re), fmt(c.im)]);
    }
    Ok(Output::ok(t.to_csv()?))
}

fn norm_row(f: &TaylorFunction, space: &SpaceSpec, cfg: &ExperimentConfig) -> Result<(f64, f64), CliError> {
    let s = &cfg.norms;
    Ok(match *space {
        SpaceSpec::Bloch => {
            let est = bloch_seminorm_with(f, &s.bloch);
            (est.value + f.coeffs()[0].norm(), est.value - est.coarse)
        }
        SpaceSpec::Bergman { p, alpha } => {
            let m = MeasureSpec::area(alpha);
            let coarse = build_quadrature_with(&m, s.bergman_level, &s.quadrature)?;
            let fine = build_quadrature_with(&m, s.bergman_level + 1, &s.quadrature)?;
            let v = bergman_norm(f, p, alpha, &coarse)?;
            (v, (bergman_norm(f, p, alpha, &fine)? - v).abs())
        }
        SpaceSpec::Hardy { p } => {
            let v = hardy_profile(f, p, &s.hardy).value;
            let half = HardyGrid {
                samples: s.hardy.samples / 2,
                ..s.hardy
            };
            (v, (hardy_profile(f, p, &half).value - v).abs())
        }
    })
}

pub fn norms(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let f = cfg.function()?;
    let spaces = if !cfg.spaces.is_empty() {
        cfg.spaces.clone()
    } else if let Some(s) = cfg.space {
        vec![s]
    } else {
        vec![
            SpaceSpec::Bloch,
            SpaceSpec::Bergman { p: 2.0, alpha: 0.0 },
            SpaceSpec::Hardy { p: 2.0 },
        ]
    };
    let mut t = Table::new(&["space", "value", "estimated_error"]);
    header(&mut t, "norms", cfg);
    t.meta("bergman_level", cfg.norms.bergman_level)
        .meta("degree", f.effective_degree());
    for s in &spaces {
        let (v, e) = norm_row(&f, s, cfg)?;
        t.row(vec![s.label(), fmt(v), fmt(e)]);
    }
    Ok(Output::ok(t.to_csv()?))
}

pub fn bounds(cfg: &ExperimentConfig, json: bool) -> Result<Output, CliError> {
    let h = operator(cfg)?;
    let space = cfg.space()?;
    let reports = check_bound_seeds(&h, &space, cfg.trials, &cfg.seeds(), &cfg.norms)?;
    let failed = reports.iter().any(|r| !r.pass);
    if json {
        let doc = serde_json::json!({
            "tool": concat!("hausdorff ", env!("CARGO_PKG_VERSION")),
            "config_sha256": cfg.hash(),
            "quadrature_level": cfg.level,
            "reports": reports,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("reports serialize");
        text.push('\n');
        return Ok(Output { text, failed });
    }
    let mut t = Table::new(&["space", "seed", "theoretical", "empirical", "ratio", "pass", "trials"]);
    header(&mut t, "bounds", cfg);
    for r in &reports {
        t.row(vec![
            r.space.label(),
            r.seed.to_string(),
            fmt(r.theoretical),
            fmt(r.empirical),
            fmt(r.ratio),
            r.pass.to_string(),
            r.trials.to_string(),
        ]);
    }
    Ok(Output {
        text: t.to_csv()?,
        failed,
    })
}

pub fn coeffs(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let g = match &cfg.g {
        Some(g) => g.build()?,
        None => TaylorFunction::monomial(1),
    };
    let h = operator(cfg)?;
    let contour = h.coefficient_sequence(&g, cfg.n_max)?;
    let corollary = h.corollary_coeffs(cfg.n_max);
    let mut t = Table::new(&["n", "contour_re", "contour_im", "corollary_re", "corollary_im", "abs_diff"]);
    header(&mut t, "coeffs", cfg);
    t.meta("g_degree", g.effective_degree())
        .meta("corollary_form_applies", g == TaylorFunction::monomial(1))
        .meta("max_discrepancy", fmt(contour.max_abs_diff(&corollary)));
    if let Some(d) = contour.decay() {
        t.meta("decay_geometric_ratio", fmt(d.geometric_ratio))
            .meta("decay_power_exponent", fmt(d.power_exponent));
    }
    for (n, (a, b)) in contour.values.iter().zip(&corollary.values).enumerate() {
        t.row(vec![
            n.to_string(),
            fmt(a.re),
            fmt(a.im),
            fmt(b.re),
            fmt(b.im),
            fmt((a - b).norm()),
        ]);
    }
    Ok(Output::ok(t.to_csv()?))
}

pub fn approx(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let f = cfg.function()?;
    let mut h = operator(cfg)?;
    if cfg.normalize {
        h = h.normalize_kernel()?;
    }
    let space = cfg.space()?;
    let opts = SweepOptions {
        trials: cfg.trials,
        seed: cfg.seed,
    };
    let r = approx_identity_sweep(&h, &f, &space, &cfg.epsilons, &cfg.norms, &opts)?;
    let mut t = Table::new(&["epsilon", "error", "ratio", "uniform_bound"]);
    header(&mut t, "approx", cfg);
    t.meta("space", space.label())
        .meta("norm_f", fmt(r.norm_f))
        .meta("uniform_pass", r.uniform_pass)
        .meta("nonincreasing", r.nonincreasing);
    for ((e, err), ratio) in r.epsilons.iter().zip(&r.errors).zip(&r.ratios) {
        t.row(vec![
            fmt(*e),
            fmt(*err),
            ratio.map(fmt).unwrap_or_default(),
            fmt(r.uniform_bound),
        ]);
    }
    Ok(Output {
        text: t.to_csv()?,
        failed: !r.uniform_pass,
    })
}

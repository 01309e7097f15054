//! Bound integrals, empirical operator norms and identity-approximation sweeps.
//!
//! Empirical norms are maxima of `‖Hf‖ / ‖f‖` over random polynomials, so they
//! bound the true operator norm from below; a report passes when that lower
//! bound stays under the analytic upper bound.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::hausdorff::{HausdorffOperator, OperatorMatrix};
use crate::holo::TaylorFunction;
use crate::measure::{
    build_quadrature, integrability_diagnostic, integrate_abs, DiscPoint, KernelSpec, MeasureSpec, QuadratureRule,
};
use crate::mobius::{compose, ComposeParams, MobiusParam};
use crate::norms::{bloch_seminorm_with, BlochGrid, NormSettings, SpaceNorm, SpaceSpec};
use crate::sum::pairwise_sum_real;

/// Relative slack for bound comparisons.
pub const BOUND_TOL: f64 = 1e-2;
/// Relative slack for isometry and inequality checks.
pub const ISOMETRY_TOL: f64 = 1e-3;
/// Relative slack for pure quadrature identities.
pub const QUADRATURE_TOL: f64 = 1e-6;

/// Highest degree of the random test polynomials.
pub const TRIAL_MAX_DEGREE: usize = 32;

pub const DEFAULT_EPSILONS: [f64; 6] = [0.3, 0.1, 0.03, 0.01, 0.003, 0.001];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub space: SpaceSpec,
    pub theoretical: f64,
    pub empirical: f64,
    pub ratio: f64,
    pub pass: bool,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub epsilons: Vec<f64>,
    /// `‖H_ε f - f‖` per ε.
    pub errors: Vec<f64>,
    /// Largest `‖H_ε g‖ / ‖g‖` over the test functions, for ε in the range
    /// where the uniform bound applies.
    pub ratios: Vec<Option<f64>>,
    pub uniform_bound: f64,
    pub uniform_pass: bool,
    pub norm_f: f64,
    /// Errors never grow as ε decreases (to rounding).
    pub nonincreasing: bool,
}

fn bound_diagnostic(k: &KernelSpec, rule: &QuadratureRule, weight: impl Fn(&DiscPoint) -> f64 + Sync) -> Result<()> {
    if let MeasureSpec::Area { .. } = rule.measure() {
        let d = integrability_diagnostic(k, weight, rule.measure())?;
        if !d.converged {
            return Err(Error::Divergent { estimates: d.estimates });
        }
    }
    Ok(())
}

/// `∫ |K| (2 + ½ log((1+|w|)/(1-|w|))) dμ`, the Bloch operator-norm bound.
pub fn bloch_bound(k: &KernelSpec, rule: &QuadratureRule) -> Result<f64> {
    bound_diagnostic(k, rule, |_| 1.0)?;
    bound_diagnostic(k, rule, |p| -p.gap.ln())?;
    integrate_abs(k, rule, |p| 2.0 + p.distance_from_origin())
}

/// `∫ |K| ((1+|w|)/(1-|w|))^{(2+α)/p} dA`, the `L^p_a(dA_α)` bound; `rule`
/// must discretize the unweighted area measure.
pub fn bergman_bound(k: &KernelSpec, p: f64, alpha: f64, rule: &QuadratureRule) -> Result<f64> {
    SpaceSpec::Bergman { p, alpha }.validate()?;
    if rule.area_alpha() != Some(0.0) {
        return Err(Error::Hypothesis(
            "the Bergman bound is an integral against normalized area measure dA".into(),
        ));
    }
    let s = (2.0 + alpha) / p;
    bound_diagnostic(k, rule, |q| q.gap.powf(-s))?;
    integrate_abs(k, rule, |q| q.hyperbolic_ratio().powf(s))
}

/// `∫ |K| ((1+|w|)/(1-|w|))^{1/p} dμ`, the `H^p` bound for `p >= 1`.
pub fn hardy_bound(k: &KernelSpec, rule: &QuadratureRule, p: f64) -> Result<f64> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::Hypothesis(format!("the Hardy bound needs p >= 1, got {p}")));
    }
    bound_diagnostic(k, rule, |q| q.gap.powf(-1.0 / p))?;
    integrate_abs(k, rule, |q| q.hyperbolic_ratio().powf(1.0 / p))
}

/// The analytic bound matching `space`.
pub fn theoretical_bound(h: &HausdorffOperator, space: &SpaceSpec) -> Result<f64> {
    space.validate()?;
    match *space {
        SpaceSpec::Bloch => bloch_bound(h.kernel(), h.rule()),
        SpaceSpec::Bergman { p, alpha } => bergman_bound(h.kernel(), p, alpha, h.rule()),
        SpaceSpec::Hardy { p } => hardy_bound(h.kernel(), h.rule(), p),
    }
}

/// Seeded random test polynomials: degree uniform in `0..=max_degree`,
/// coefficient `k` complex Gaussian (variance ½ per component) over `k + 1`.
pub fn random_polynomials(count: usize, seed: u64, max_degree: usize) -> Vec<TaylorFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 0.5f64.sqrt()).expect("valid normal");
    (0..count)
        .map(|_| {
            let d = rng.gen_range(0..=max_degree);
            TaylorFunction::new(
                (0..=d)
                    .map(|k| Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng)) / (k + 1) as f64)
                    .collect(),
            )
        })
        .collect()
}

/// Largest `‖M f‖ / ‖f‖` over `tests`, zero functions skipped.
pub fn max_ratio(m: &OperatorMatrix, tests: &[TaylorFunction], norm: &SpaceNorm) -> Result<f64> {
    let ratios = tests
        .par_iter()
        .map(|f| {
            let nf = norm.norm(f);
            if nf == 0.0 {
                return Ok(0.0);
            }
            Ok(norm.norm(&m.apply(f)?) / nf)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

/// Lower estimate of `‖H‖` on `space` from `trials` seeded random polynomials.
pub fn empirical_opnorm(
    h: &HausdorffOperator,
    space: &SpaceSpec,
    trials: usize,
    seed: u64,
    settings: &NormSettings,
) -> Result<f64> {
    if trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    let norm = SpaceNorm::prepare(space, settings)?;
    let tests = random_polynomials(trials, seed, TRIAL_MAX_DEGREE);
    let m = h.monomial_images(TRIAL_MAX_DEGREE, None)?;
    max_ratio(&m, &tests, &norm)
}

pub fn check_bound(
    h: &HausdorffOperator,
    space: &SpaceSpec,
    trials: usize,
    seed: u64,
    settings: &NormSettings,
) -> Result<BoundReport> {
    Ok(check_bound_seeds(h, space, trials, &[seed], settings)?.remove(0))
}

/// One report per seed; the bound and the monomial images are computed once.
pub fn check_bound_seeds(
    h: &HausdorffOperator,
    space: &SpaceSpec,
    trials: usize,
    seeds: &[u64],
    settings: &NormSettings,
) -> Result<Vec<BoundReport>> {
    if trials == 0 || seeds.is_empty() {
        return Err(invalid("at least one trial and one seed are required"));
    }
    let theoretical = theoretical_bound(h, space)?;
    let norm = SpaceNorm::prepare(space, settings)?;
    let m = h.monomial_images(TRIAL_MAX_DEGREE, None)?;
    seeds
        .iter()
        .map(|&seed| {
            let empirical = max_ratio(&m, &random_polynomials(trials, seed, TRIAL_MAX_DEGREE), &norm)?;
            Ok(BoundReport {
                space: *space,
                theoretical,
                empirical,
                ratio: if theoretical > 0.0 { empirical / theoretical } else { f64::NAN },
                pass: empirical <= theoretical * (1.0 + BOUND_TOL),
                trials,
                seed,
            })
        })
        .collect()
}

/// `‖f∘φ_w‖^p <= c(w) ‖f‖^p` with `c = ((1+|w|)/(1-|w|))^{2+α}` on
/// `L^p_a(dA_α)` and `c = (1+|w|)/(1-|w|)` on `H^p`.
pub fn composition_inequality_check(
    f: &TaylorFunction,
    w: &MobiusParam,
    space: &SpaceSpec,
    settings: &NormSettings,
) -> Result<Comparison> {
    let ratio = (2.0 - w.gap()) / w.gap();
    let factor = match *space {
        SpaceSpec::Bergman { alpha, .. } => ratio.powf(2.0 + alpha),
        SpaceSpec::Hardy { .. } => ratio,
        SpaceSpec::Bloch => {
            return Err(invalid("the composition inequality is stated for Bergman and Hardy spaces"));
        }
    };
    let norm = SpaceNorm::prepare(space, settings)?;
    let p = norm.exponent();
    let g = compose(f, w, &ComposeParams::default())?;
    let lhs = norm.norm(&g).powf(p);
    let rhs = factor * norm.norm(f).powf(p);
    Ok(Comparison {
        lhs,
        rhs,
        pass: lhs <= rhs * (1.0 + ISOMETRY_TOL),
    })
}

/// `∫ |f∘φ_w|^p dA_α` against `∫ |f|^p (1-|w|²)^{2+α} / |1 - conj(w) z|^{2(2+α)} dA_α`,
/// both by the `Area(α)` rule at `level`.
pub fn change_of_variables_check(
    f: &TaylorFunction,
    w: &MobiusParam,
    p: f64,
    alpha: f64,
    level: u32,
) -> Result<Comparison> {
    SpaceSpec::Bergman { p, alpha }.validate()?;
    if w.value().norm() > 0.8 {
        return Err(invalid("change of variables is checked for |w| <= 0.8"));
    }
    let rule = build_quadrature(&MeasureSpec::area(alpha), level)?;
    let wv = w.value();
    let s = 2.0 + alpha;
    let one_minus_w2 = w.gap() * (2.0 - w.gap());
    let (mut lhs, mut rhs) = (Vec::with_capacity(rule.len()), Vec::with_capacity(rule.len()));
    for (pt, &mu) in rule.points().iter().zip(rule.weights()) {
        let z = pt.w;
        lhs.push(f.horner(w.apply_unchecked(z)).norm().powf(p) * mu);
        let jac = one_minus_w2.powf(s) / (1.0 - wv.conj() * z).norm_sqr().powf(s);
        rhs.push(f.horner(z).norm().powf(p) * jac * mu);
    }
    let (lhs, rhs) = (pairwise_sum_real(&lhs), pairwise_sum_real(&rhs));
    Ok(Comparison {
        lhs,
        rhs,
        pass: (lhs - rhs).abs() <= QUADRATURE_TOL * lhs.abs().max(rhs.abs()),
    })
}

/// Bloch seminorms of `f∘φ_w` (lhs) and `f` (rhs); passes at relative `tol`.
pub fn mobius_invariance_check(f: &TaylorFunction, w: &MobiusParam, grid: &BlochGrid, tol: f64) -> Result<Comparison> {
    if f.effective_degree() > 64 {
        return Err(invalid("Möbius invariance is checked for degree <= 64"));
    }
    if w.value().norm() > 0.8 {
        return Err(invalid("Möbius invariance is checked for |w| <= 0.8"));
    }
    let g = compose(f, w, &ComposeParams::default())?;
    let lhs = bloch_seminorm_with(&g, grid).value;
    let rhs = bloch_seminorm_with(f, grid).value;
    Ok(Comparison {
        lhs,
        rhs,
        pass: (lhs - rhs).abs() <= tol * lhs.max(rhs),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepOptions {
    /// Random test functions for the uniform-bound ratios (besides `f`).
    pub trials: usize,
    pub seed: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { trials: 50, seed: 1 }
    }
}

/// Errors `‖H_ε f - f‖` and uniform-bound ratios for a normalized operator.
pub fn approx_identity_sweep(
    h: &HausdorffOperator,
    f: &TaylorFunction,
    space: &SpaceSpec,
    epsilons: &[f64],
    settings: &NormSettings,
    opts: &SweepOptions,
) -> Result<SweepReport> {
    if !h.is_normalized(1e-10) {
        return Err(invalid(format!(
            "identity approximation needs a kernel of mass 1, got {}",
            h.kernel_mass()
        )));
    }
    let (factor, eps_limit) = match *space {
        SpaceSpec::Bergman { p, alpha } => (2f64.powf(2.0 * (2.0 + alpha) / p), 0.5),
        SpaceSpec::Hardy { p } if p >= 1.0 => (2f64.powf(1.0 / p), 1.0 / 3.0),
        _ => {
            return Err(Error::Hypothesis(format!(
                "identity approximation is stated for Bergman and Hardy spaces with p >= 1, got {}",
                space.label()
            )))
        }
    };
    let norm = SpaceNorm::prepare(space, settings)?;
    let uniform_bound = factor * h.kernel_abs_mass();
    let norm_f = norm.norm(f);
    let mut tests = random_polynomials(opts.trials, opts.seed, TRIAL_MAX_DEGREE);
    let f_fits = f.effective_degree() <= TRIAL_MAX_DEGREE;
    if f_fits {
        tests.push(f.clone());
    }

    let mut errors = Vec::with_capacity(epsilons.len());
    let mut ratios = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let hf = h.apply_epsilon(eps, f)?;
        errors.push(norm.norm(&(&hf - f)));
        if eps < eps_limit {
            let m = h.monomial_images(TRIAL_MAX_DEGREE, Some(eps))?;
            let mut r = max_ratio(&m, &tests, &norm)?;
            if !f_fits && norm_f > 0.0 {
                r = r.max(norm.norm(&hf) / norm_f);
            }
            ratios.push(Some(r));
        } else {
            ratios.push(None);
        }
    }

    let mut order: Vec<usize> = (0..epsilons.len()).collect();
    order.sort_by(|&a, &b| epsilons[b].total_cmp(&epsilons[a]));
    let floor = 1e-13 * norm_f.max(1.0);
    let nonincreasing = order
        .windows(2)
        .all(|p| errors[p[1]] <= errors[p[0]] * (1.0 + 1e-9) + floor);
    let uniform_pass = ratios.iter().flatten().all(|&r| r <= uniform_bound * (1.0 + BOUND_TOL));
    Ok(SweepReport {
        epsilons: epsilons.to_vec(),
        errors,
        ratios,
        uniform_bound,
        uniform_pass,
        norm_f,
        nonincreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn atom(w: f64) -> QuadratureRule {
        build_quadrature(&MeasureSpec::atom(c(w, 0.0), 1.0).unwrap(), 0).unwrap()
    }

    fn area(level: u32) -> QuadratureRule {
        build_quadrature(&MeasureSpec::area(0.0), level).unwrap()
    }

    #[test]
    fn bloch_bound_examples() {
        let one = KernelSpec::constant(1.0);
        assert_eq!(bloch_bound(&one, &atom(0.0)).unwrap(), 2.0);
        assert_abs_diff_eq!(bloch_bound(&one, &atom(0.5)).unwrap(), 2.0 + 0.5 * 3f64.ln(), epsilon = 1e-15);
        // ∫ 2r log(1+r) dr = 1/2, ∫ 2r log(1/(1-r)) dr = 3/2
        assert_abs_diff_eq!(bloch_bound(&one, &area(1)).unwrap(), 3.0, epsilon = 1e-9);
    }

    #[test]
    fn bergman_bound_examples() {
        // ∫ sqrt((1+r)/(1-r)) 2r dr = 2 + π/2; the endpoint behaves like
        // sqrt(u) in the graded variable, so the error falls like n^-3
        let b = bergman_bound(&KernelSpec::constant(1.0), 4.0, 0.0, &area(1)).unwrap();
        assert_abs_diff_eq!(b, 2.0 + PI / 2.0, epsilon = 1e-5);
        let b = bergman_bound(&KernelSpec::constant(1.0), 4.0, 0.0, &area(3)).unwrap();
        assert_abs_diff_eq!(b, 2.0 + PI / 2.0, epsilon = 1e-7);
        // ∫ (1+r)^2 2r dr = 17/6
        let b = bergman_bound(&KernelSpec::RadialPower(2.0), 1.0, 0.0, &area(1)).unwrap();
        assert_abs_diff_eq!(b, 17.0 / 6.0, epsilon = 1e-10);
        let err = bergman_bound(&KernelSpec::constant(1.0), 2.0, 0.0, &atom(0.5)).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
        let weighted = build_quadrature(&MeasureSpec::area(1.0), 0).unwrap();
        assert!(matches!(
            bergman_bound(&KernelSpec::constant(1.0), 2.0, 1.0, &weighted),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn bergman_bound_flags_divergence() {
        // s = 3 against (1-r)^2: the integrand grows like 1/(1-r)
        let err = bergman_bound(&KernelSpec::RadialPower(2.0), 1.0, 1.0, &area(1)).unwrap_err();
        assert!(matches!(err, Error::Divergent { .. }), "{err:?}");
    }

    #[test]
    fn hardy_bound_examples() {
        let one = KernelSpec::constant(1.0);
        for p in [1.0, 2.0, 7.0] {
            assert_eq!(hardy_bound(&one, &atom(0.0), p).unwrap(), 1.0);
        }
        assert_abs_diff_eq!(hardy_bound(&one, &atom(0.5), 1.0).unwrap(), 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(hardy_bound(&one, &atom(0.5), 2.0).unwrap(), 3f64.sqrt(), epsilon = 1e-15);
        assert!(matches!(hardy_bound(&one, &atom(0.5), 0.5), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn random_polynomials_are_seeded() {
        let a = random_polynomials(20, 7, 32);
        let b = random_polynomials(20, 7, 32);
        let c = random_polynomials(20, 8, 32);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().all(|f| f.degree() <= 32));
    }

    #[test]
    fn empirical_opnorm_examples() {
        let s = NormSettings::default();
        let h = HausdorffOperator::new(KernelSpec::constant(1.0), MeasureSpec::atom(c(0.0, 0.0), 1.0).unwrap(), 0).unwrap();
        let e = empirical_opnorm(&h, &SpaceSpec::Bloch, 40, 1, &s).unwrap();
        assert_abs_diff_eq!(e, 1.0, epsilon = 1e-3);

        let m = MeasureSpec::atom(c(0.3, -0.2), 1.0).unwrap();
        let zero = HausdorffOperator::new(KernelSpec::constant(0.0), m.clone(), 0).unwrap();
        assert_eq!(empirical_opnorm(&zero, &SpaceSpec::Hardy { p: 2.0 }, 10, 1, &s).unwrap(), 0.0);

        let base = HausdorffOperator::new(KernelSpec::constant(1.0), m.clone(), 0).unwrap();
        let scaled = HausdorffOperator::new(KernelSpec::Constant(c(0.0, -2.5)), m, 0).unwrap();
        let space = SpaceSpec::Hardy { p: 2.0 };
        let a = empirical_opnorm(&base, &space, 10, 3, &s).unwrap();
        let b = empirical_opnorm(&scaled, &space, 10, 3, &s).unwrap();
        assert_abs_diff_eq!(b, 2.5 * a, epsilon = 1e-12 * b);
    }

    #[test]
    fn check_bound_examples() {
        let s = NormSettings::default();
        let at = MeasureSpec::atom(c(0.5, 0.0), 1.0).unwrap();
        let h = HausdorffOperator::new(KernelSpec::constant(1.0), at, 0).unwrap();
        let r = check_bound(&h, &SpaceSpec::Bloch, 50, 1, &s).unwrap();
        assert_abs_diff_eq!(r.theoretical, 2.549306144334055, epsilon = 1e-12);
        assert!(r.pass && r.empirical <= r.theoretical);
        let r = check_bound(&h, &SpaceSpec::Hardy { p: 2.0 }, 50, 1, &s).unwrap();
        assert_abs_diff_eq!(r.theoretical, 3f64.sqrt(), epsilon = 1e-15);
        assert!(r.pass);

        let h = HausdorffOperator::new(KernelSpec::constant(1.0), MeasureSpec::area(0.0), 1).unwrap();
        let r = check_bound(&h, &SpaceSpec::Bergman { p: 4.0, alpha: 0.0 }, 30, 1, &s).unwrap();
        assert!(r.pass, "{r:?}");
        // (2+α)/p = 1: ∫ (1+r)/(1-r) 2r dr is infinite
        let err = check_bound(&h, &SpaceSpec::Bergman { p: 2.0, alpha: 0.0 }, 30, 1, &s).unwrap_err();
        assert!(matches!(err, Error::Divergent { .. }));
    }

    #[test]
    fn composition_inequality_examples() {
        let s = NormSettings::default();
        let f = TaylorFunction::from_real(&[0.5, -1.0, 0.25]);
        for space in [SpaceSpec::Hardy { p: 2.0 }, SpaceSpec::Bergman { p: 3.0, alpha: 0.5 }] {
            let r = composition_inequality_check(&f, &MobiusParam::origin(), &space, &s).unwrap();
            assert_abs_diff_eq!(r.lhs, r.rhs, epsilon = 1e-12 * r.rhs);
            assert!(r.pass);
            let w = MobiusParam::new(c(0.2, 0.6)).unwrap();
            let r = composition_inequality_check(&TaylorFunction::from_real(&[1.0]), &w, &space, &s).unwrap();
            assert_abs_diff_eq!(r.lhs, 1.0, epsilon = 1e-10);
            assert!(r.pass && r.rhs > 1.0);
        }
        let w = MobiusParam::new(c(0.5, 0.0)).unwrap();
        let r = composition_inequality_check(&TaylorFunction::monomial(1), &w, &SpaceSpec::Hardy { p: 2.0 }, &s).unwrap();
        assert_abs_diff_eq!(r.rhs, 3.0, epsilon = 1e-12);
        // φ_w is inner, so ‖φ_w‖_{H^2} = 1
        assert_abs_diff_eq!(r.lhs, 1.0, epsilon = 1e-10);
        assert!(r.pass);
        assert!(composition_inequality_check(&f, &w, &SpaceSpec::Bloch, &s).is_err());
    }

    #[test]
    fn change_of_variables_examples() {
        let f = TaylorFunction::from_real(&[0.5, -1.0, 0.25]);
        let r = change_of_variables_check(&f, &MobiusParam::origin(), 2.0, 0.0, 3).unwrap();
        assert!(r.pass);
        let one = TaylorFunction::from_real(&[1.0]);
        let r = change_of_variables_check(&one, &MobiusParam::new(c(0.0, 0.7)).unwrap(), 3.0, 1.0, 3).unwrap();
        assert_abs_diff_eq!(r.lhs, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(r.rhs, 1.0, epsilon = 1e-6);
        let r = change_of_variables_check(&TaylorFunction::monomial(1), &MobiusParam::new(c(0.5, 0.0)).unwrap(), 2.0, 0.0, 3)
            .unwrap();
        assert!(r.pass, "{r:?}");
        assert!(change_of_variables_check(&f, &MobiusParam::new(c(0.85, 0.0)).unwrap(), 2.0, 0.0, 3).is_err());
    }

    #[test]
    fn mobius_invariance_examples() {
        let g = BlochGrid::default();
        let f = TaylorFunction::from_real(&[0.0, 1.0, -0.5, 0.3]);
        let r = mobius_invariance_check(&f, &MobiusParam::origin(), &g, 0.0).unwrap();
        assert_eq!(r.lhs, r.rhs);
        let r = mobius_invariance_check(&TaylorFunction::from_real(&[1.0]), &MobiusParam::new(c(0.5, 0.0)).unwrap(), &g, 1e-3)
            .unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        assert!(r.pass);
        let r = mobius_invariance_check(&TaylorFunction::monomial(1), &MobiusParam::new(c(0.5, 0.0)).unwrap(), &g, 1e-3)
            .unwrap();
        assert_abs_diff_eq!(r.lhs, 1.0, epsilon = 1e-6);
        assert!(r.pass);
    }

    #[test]
    fn sweep_examples() {
        let s = NormSettings::default();
        let o = SweepOptions { trials: 10, seed: 1 };
        let f = TaylorFunction::from_real(&[1.0, 0.5, -0.25, 0.0, 0.1]);
        let space = SpaceSpec::Hardy { p: 2.0 };

        let id = HausdorffOperator::new(KernelSpec::constant(1.0), MeasureSpec::atom(c(0.0, 0.0), 1.0).unwrap(), 0).unwrap();
        let r = approx_identity_sweep(&id, &f, &space, &DEFAULT_EPSILONS, &s, &o).unwrap();
        assert!(r.errors.iter().all(|&e| e == 0.0));
        assert!(r.uniform_pass && r.nonincreasing);
        assert!(r.ratios.iter().all(Option::is_some));
        let r = approx_identity_sweep(&id, &f, &space, &[0.4, 0.2], &s, &o).unwrap();
        assert_eq!(r.ratios[0], None);
        assert!(r.ratios[1].is_some());

        // (ε w0 + z)/(1 + ε conj(w0) z) - z = ε (w0 - conj(w0) z²) + O(ε²)
        let w0 = MeasureSpec::atom(c(0.5, 0.0), 1.0).unwrap();
        let h = HausdorffOperator::new(KernelSpec::constant(1.0), w0, 0).unwrap();
        let r = approx_identity_sweep(&h, &TaylorFunction::monomial(1), &space, &DEFAULT_EPSILONS, &s, &o).unwrap();
        assert!(r.nonincreasing);
        for (e, err) in r.epsilons.iter().zip(&r.errors).skip(2) {
            assert!((err / e - 0.5 * 2f64.sqrt()).abs() < 0.05, "ε = {e}: {err}");
        }

        let h = HausdorffOperator::new(KernelSpec::constant(1.0), MeasureSpec::area(0.0), 1)
            .unwrap()
            .normalize_kernel()
            .unwrap();
        let r = approx_identity_sweep(&h, &TaylorFunction::from_real(&[1.0]), &space, &DEFAULT_EPSILONS, &s, &o).unwrap();
        assert!(r.errors.iter().all(|&e| e <= 1e-12), "{:?}", r.errors);

        let unnormalized = HausdorffOperator::new(KernelSpec::constant(2.0), MeasureSpec::area(0.0), 0).unwrap();
        assert!(approx_identity_sweep(&unnormalized, &f, &space, &DEFAULT_EPSILONS, &s, &o).is_err());
        assert!(approx_identity_sweep(&id, &f, &SpaceSpec::Bloch, &DEFAULT_EPSILONS, &s, &o).is_err());
    }
}

//! Kernels `K`, measures `μ` and quadrature rules for `∫_D · dμ`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::mobius::MobiusParam;
use crate::sum::{pairwise_sum, pairwise_sum_real};

/// A point of the open disc together with `gap = 1 - |w|`, carried separately
/// because graded meshes place nodes within 1e-11 of the circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscPoint {
    pub w: Complex64,
    pub gap: f64,
}

impl DiscPoint {
    pub fn new(w: Complex64) -> Self {
        Self { w, gap: 1.0 - w.norm() }
    }

    pub fn abs(&self) -> f64 {
        self.w.norm()
    }

    /// `1 - |w|^2`.
    pub fn one_minus_abs_sq(&self) -> f64 {
        self.gap * (2.0 - self.gap)
    }

    /// `(1 + |w|) / (1 - |w|)`.
    pub fn hyperbolic_ratio(&self) -> f64 {
        (2.0 - self.gap) / self.gap
    }

    /// `½ log((1 + |w|)/(1 - |w|))`, the Bergman distance from the origin.
    pub fn distance_from_origin(&self) -> f64 {
        0.5 * ((2.0 - self.gap).ln() - self.gap.ln())
    }

    pub fn mobius(&self) -> Result<MobiusParam> {
        MobiusParam::with_gap(self.w, self.gap)
    }
}

/// Anything evaluable as a kernel on the disc.
pub trait Kernel: Send + Sync {
    fn value(&self, at: &DiscPoint) -> Complex64;
}

impl<F> Kernel for F
where
    F: Fn(&DiscPoint) -> Complex64 + Send + Sync,
{
    fn value(&self, at: &DiscPoint) -> Complex64 {
        self(at)
    }
}

/// Caller-supplied kernel carried inside a [`KernelSpec`].
#[derive(Clone)]
pub struct CustomKernel(pub Arc<dyn Fn(&DiscPoint) -> Complex64 + Send + Sync>);

impl fmt::Debug for CustomKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CustomKernel(..)")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    Constant(#[serde(with = "crate::scalar")] Complex64),
    /// `(1 - |w|)^s`
    RadialPower(f64),
    /// `log(1 / (1 - |w|))`
    RadialLog,
    /// `Σ a_k w^k`
    PolynomialInW(#[serde(with = "crate::scalar::many")] Vec<Complex64>),
    /// `exp(-|w|^2 / σ^2)`
    GaussianRadial(f64),
    Scaled {
        #[serde(with = "crate::scalar")]
        factor: Complex64,
        kernel: Box<KernelSpec>,
    },
    #[serde(skip)]
    Custom(CustomKernel),
}

impl KernelSpec {
    pub fn constant(c: f64) -> Self {
        KernelSpec::Constant(Complex64::new(c, 0.0))
    }

    pub fn custom(f: impl Fn(&DiscPoint) -> Complex64 + Send + Sync + 'static) -> Self {
        KernelSpec::Custom(CustomKernel(Arc::new(f)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        match self {
            KernelSpec::Constant(c) => KernelSpec::Constant(c * factor),
            KernelSpec::Scaled { factor: f, kernel } => KernelSpec::Scaled {
                factor: f * factor,
                kernel: kernel.clone(),
            },
            other => KernelSpec::Scaled {
                factor,
                kernel: Box::new(other.clone()),
            },
        }
    }

    /// Kernels that blow up at the circle; integrability then depends on μ.
    pub fn singular_near_boundary(&self) -> bool {
        match self {
            KernelSpec::RadialPower(s) => *s < 0.0,
            KernelSpec::RadialLog => true,
            KernelSpec::Scaled { kernel, .. } => kernel.singular_near_boundary(),
            _ => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::Constant(c) if !(c.re.is_finite() && c.im.is_finite()) => {
                Err(invalid("constant kernel must be finite"))
            }
            KernelSpec::RadialPower(s) if !s.is_finite() => Err(invalid("radial power must be finite")),
            KernelSpec::GaussianRadial(s) if !(s.is_finite() && *s > 0.0) => {
                Err(invalid("gaussian width must be positive"))
            }
            KernelSpec::PolynomialInW(c) if c.is_empty() => Err(invalid("empty kernel polynomial")),
            KernelSpec::Scaled { kernel, .. } => kernel.validate(),
            _ => Ok(()),
        }
    }
}

impl Kernel for KernelSpec {
    fn value(&self, at: &DiscPoint) -> Complex64 {
        match self {
            KernelSpec::Constant(c) => *c,
            KernelSpec::RadialPower(s) => Complex64::new(at.gap.powf(*s), 0.0),
            KernelSpec::RadialLog => Complex64::new(-at.gap.ln(), 0.0),
            KernelSpec::PolynomialInW(a) => a
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * at.w + c),
            KernelSpec::GaussianRadial(s) => Complex64::new((-at.w.norm_sqr() / (s * s)).exp(), 0.0),
            KernelSpec::Scaled { factor, kernel } => factor * kernel.value(at),
            KernelSpec::Custom(k) => (k.0)(at),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureSpec {
    /// `Σ weights[i] δ_{atoms[i]}`
    Discrete {
        atoms: Vec<MobiusParam>,
        weights: Vec<f64>,
    },
    /// `dA_α = (α+1)(1-|z|^2)^α dA`, `dA = dx dy / π`.
    Area { alpha: f64 },
}

impl MeasureSpec {
    pub fn area(alpha: f64) -> Self {
        MeasureSpec::Area { alpha }
    }

    pub fn atom(w: Complex64, weight: f64) -> Result<Self> {
        Ok(MeasureSpec::Discrete {
            atoms: vec![MobiusParam::new(w)?],
            weights: vec![weight],
        })
    }

    pub fn discrete(atoms: &[Complex64], weights: &[f64]) -> Result<Self> {
        let m = MeasureSpec::Discrete {
            atoms: atoms.iter().map(|&w| MobiusParam::new(w)).collect::<Result<_>>()?,
            weights: weights.to_vec(),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureSpec::Discrete { atoms, weights } => {
                if atoms.is_empty() {
                    return Err(invalid("discrete measure needs at least one atom"));
                }
                if atoms.len() != weights.len() {
                    return Err(invalid(format!(
                        "{} atoms but {} weights",
                        atoms.len(),
                        weights.len()
                    )));
                }
                if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
                    return Err(invalid(format!("discrete weights must be positive, got {w}")));
                }
                Ok(())
            }
            MeasureSpec::Area { alpha } => {
                if alpha.is_finite() && *alpha > -1.0 {
                    Ok(())
                } else {
                    Err(invalid(format!("area weight exponent {alpha} must exceed -1")))
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureOptions {
    /// Exponent `γ` of the radial grading `r = 1 - (1 - t)^γ`.
    pub grading: f64,
    pub base_radial: usize,
    pub base_angular: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            grading: 3.0,
            base_radial: 32,
            base_angular: 64,
        }
    }
}

/// Tensor structure of an area rule: node `i * n_theta + j` sits at radius
/// `radii[i]` and angle `2πj / n_theta`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarLayout {
    pub radii: Vec<f64>,
    pub gaps: Vec<f64>,
    /// Radial weights including the `(α+1)(1-r²)^α 2r` density; they sum to 1.
    pub radial_weights: Vec<f64>,
    pub n_theta: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    points: Vec<DiscPoint>,
    weights: Vec<f64>,
    level: u32,
    measure: MeasureSpec,
    polar: Option<PolarLayout>,
}

impl QuadratureRule {
    pub fn points(&self) -> &[DiscPoint] {
        &self.points
    }

    pub fn nodes(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p.w).collect()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn measure(&self) -> &MeasureSpec {
        &self.measure
    }

    pub fn polar(&self) -> Option<&PolarLayout> {
        self.polar.as_ref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum_real(&self.weights)
    }

    /// `α` when this rule discretizes `dA_α`.
    pub fn area_alpha(&self) -> Option<f64> {
        match self.measure {
            MeasureSpec::Area { alpha } => Some(alpha),
            MeasureSpec::Discrete { .. } => None,
        }
    }
}

pub fn build_quadrature(m: &MeasureSpec, level: u32) -> Result<QuadratureRule> {
    build_quadrature_with(m, level, &QuadratureOptions::default())
}

pub fn build_quadrature_with(
    m: &MeasureSpec,
    level: u32,
    opts: &QuadratureOptions,
) -> Result<QuadratureRule> {
    m.validate()?;
    match m {
        MeasureSpec::Discrete { atoms, weights } => Ok(QuadratureRule {
            points: atoms
                .iter()
                .map(|a| DiscPoint {
                    w: a.value(),
                    gap: a.gap(),
                })
                .collect(),
            weights: weights.clone(),
            level,
            measure: m.clone(),
            polar: None,
        }),
        MeasureSpec::Area { alpha } => area_rule(*alpha, level, opts, m.clone()),
    }
}

fn area_rule(alpha: f64, level: u32, opts: &QuadratureOptions, measure: MeasureSpec) -> Result<QuadratureRule> {
    if level > 12 {
        return Err(invalid(format!("refinement level {level} is too large")));
    }
    if !(opts.grading >= 1.0) || opts.base_radial == 0 || opts.base_angular == 0 {
        return Err(invalid("grading must be >= 1 and base sizes positive"));
    }
    let n_r = opts.base_radial << level;
    let n_theta = opts.base_angular << level;
    let gl = GaussLegendre::new(n_r.try_into().map_err(|_| invalid("empty radial rule"))?);
    let gamma = opts.grading;

    let mut radii = Vec::with_capacity(n_r);
    let mut gaps = Vec::with_capacity(n_r);
    let mut radial_weights = Vec::with_capacity(n_r);
    for (x, wx) in gl.iter() {
        // t ∈ (0,1); u = 1 - t; r = 1 - u^γ
        let u = 0.5 * (1.0 - x);
        let gap = u.powf(gamma);
        let r = 1.0 - gap;
        let dr_dt = gamma * u.powf(gamma - 1.0);
        let density = (alpha + 1.0) * (gap * (2.0 - gap)).powf(alpha) * 2.0 * r;
        radii.push(r);
        gaps.push(gap);
        radial_weights.push(0.5 * wx * dr_dt * density);
    }
    // Sort by radius so the layout is monotone.
    let mut order: Vec<usize> = (0..n_r).collect();
    order.sort_by(|&a, &b| radii[a].total_cmp(&radii[b]));
    let radii: Vec<f64> = order.iter().map(|&i| radii[i]).collect();
    let gaps: Vec<f64> = order.iter().map(|&i| gaps[i]).collect();
    let radial_weights: Vec<f64> = order.iter().map(|&i| radial_weights[i]).collect();

    let mut points = Vec::with_capacity(n_r * n_theta);
    let mut weights = Vec::with_capacity(n_r * n_theta);
    for i in 0..n_r {
        for j in 0..n_theta {
            let theta = 2.0 * PI * j as f64 / n_theta as f64;
            points.push(DiscPoint {
                w: Complex64::from_polar(radii[i], theta),
                gap: gaps[i],
            });
            weights.push(radial_weights[i] / n_theta as f64);
        }
    }
    Ok(QuadratureRule {
        points,
        weights,
        level,
        measure,
        polar: Some(PolarLayout {
            radii,
            gaps,
            radial_weights,
            n_theta,
        }),
    })
}

/// `Σ_i K(w_i) · extra(w_i) · μ_i`, summed pairwise in node order.
pub fn integrate<K, E>(k: &K, rule: &QuadratureRule, extra: E) -> Result<Complex64>
where
    K: Kernel + ?Sized,
    E: Fn(&DiscPoint) -> Complex64 + Sync,
{
    let terms: Vec<Complex64> = rule
        .points
        .par_iter()
        .zip(rule.weights.par_iter())
        .map(|(p, &mu)| k.value(p) * extra(p) * mu)
        .collect();
    check_finite(rule, &terms)?;
    Ok(pairwise_sum(&terms))
}

/// `Σ_i |K(w_i)| · |weight(w_i)| · μ_i`.
pub fn integrate_abs<K, E>(k: &K, rule: &QuadratureRule, weight: E) -> Result<f64>
where
    K: Kernel + ?Sized,
    E: Fn(&DiscPoint) -> f64 + Sync,
{
    let terms: Vec<Complex64> = rule
        .points
        .par_iter()
        .zip(rule.weights.par_iter())
        .map(|(p, &mu)| Complex64::new(k.value(p).norm() * weight(p).abs() * mu, 0.0))
        .collect();
    check_finite(rule, &terms)?;
    Ok(pairwise_sum(&terms).re)
}

fn check_finite(rule: &QuadratureRule, terms: &[Complex64]) -> Result<()> {
    match terms.iter().position(|t| !(t.re.is_finite() && t.im.is_finite())) {
        Some(index) => Err(Error::NonFinite {
            index,
            node: rule.points[index].w,
            value: terms[index],
        }),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    /// Estimates at levels `L`, `L+1`, `L+2`.
    pub estimates: Vec<f64>,
    pub estimate: f64,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagnosticOptions {
    pub level: u32,
    pub rel_tol: f64,
    pub quadrature: QuadratureOptions,
}

impl Default for DiagnosticOptions {
    fn default() -> Self {
        Self {
            level: 0,
            rel_tol: 1e-2,
            quadrature: QuadratureOptions::default(),
        }
    }
}

/// Refinement-stabilization test for `∫ |K| |weight| dμ < ∞`.
pub fn integrability_diagnostic<K, E>(k: &K, weight: E, m: &MeasureSpec) -> Result<Diagnostic>
where
    K: Kernel + ?Sized,
    E: Fn(&DiscPoint) -> f64 + Sync,
{
    integrability_diagnostic_with(k, weight, m, &DiagnosticOptions::default())
}

pub fn integrability_diagnostic_with<K, E>(
    k: &K,
    weight: E,
    m: &MeasureSpec,
    opts: &DiagnosticOptions,
) -> Result<Diagnostic>
where
    K: Kernel + ?Sized,
    E: Fn(&DiscPoint) -> f64 + Sync,
{
    let mut estimates = Vec::with_capacity(3);
    for level in opts.level..opts.level + 3 {
        let rule = build_quadrature_with(m, level, &opts.quadrature)?;
        let est = match integrate_abs(k, &rule, &weight) {
            Ok(v) => v,
            Err(Error::NonFinite { .. }) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        estimates.push(est);
    }
    let agree = |a: f64, b: f64| a.is_finite() && b.is_finite() && (a - b).abs() <= opts.rel_tol * b.abs().max(a.abs());
    let converged = agree(estimates[0], estimates[1]) && agree(estimates[1], estimates[2]);
    Ok(Diagnostic {
        estimate: estimates[2],
        estimates,
        converged,
    })
}

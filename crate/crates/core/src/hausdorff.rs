//! Hausdorff operators `(Hf)(z) = ∫ K(w) f(φ_w(z)) dμ(w)` on truncated series.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::holo::TaylorFunction;
use crate::measure::{build_quadrature_with, DiscPoint, Kernel, KernelSpec, MeasureSpec, QuadratureOptions, QuadratureRule};
use crate::mobius::{compose, mul_phi, ComposeParams, MobiusParam};
use crate::sum::{fixed_chunks, pairwise_sum, pairwise_sum_buffers};

/// Work is split into this many chunks regardless of the thread count, so
/// sums come out bit-identical on any machine.
const CHUNKS: usize = 64;

/// Smallest `1 - |w|` accepted by the trapezoid contour rule.
pub const MIN_CONTOUR_GAP: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct HausdorffOperator {
    kernel: KernelSpec,
    measure: MeasureSpec,
    rule: QuadratureRule,
    compose: ComposeParams,
    params: Vec<MobiusParam>,
    /// `K(w_i) μ_i`
    weights: Vec<Complex64>,
}

impl HausdorffOperator {
    pub fn new(kernel: KernelSpec, measure: MeasureSpec, level: u32) -> Result<Self> {
        Self::with_options(kernel, measure, level, &QuadratureOptions::default(), ComposeParams::default())
    }

    pub fn with_options(
        kernel: KernelSpec,
        measure: MeasureSpec,
        level: u32,
        quadrature: &QuadratureOptions,
        compose: ComposeParams,
    ) -> Result<Self> {
        let rule = build_quadrature_with(&measure, level, quadrature)?;
        Self::from_rule(kernel, rule, compose)
    }

    pub fn from_rule(kernel: KernelSpec, rule: QuadratureRule, compose: ComposeParams) -> Result<Self> {
        kernel.validate()?;
        let params = rule
            .points()
            .iter()
            .map(DiscPoint::mobius)
            .collect::<Result<Vec<_>>>()?;
        let weights: Vec<Complex64> = rule
            .points()
            .par_iter()
            .zip(rule.weights().par_iter())
            .map(|(p, &mu)| kernel.value(p) * mu)
            .collect();
        if let Some(index) = weights.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite {
                index,
                node: rule.points()[index].w,
                value: weights[index],
            });
        }
        Ok(Self {
            measure: rule.measure().clone(),
            kernel,
            rule,
            compose,
            params,
            weights,
        })
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn measure(&self) -> &MeasureSpec {
        &self.measure
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn compose_params(&self) -> &ComposeParams {
        &self.compose
    }

    pub fn node_weights(&self) -> &[Complex64] {
        &self.weights
    }

    /// `∫ K dμ`.
    pub fn kernel_mass(&self) -> Complex64 {
        pairwise_sum(&self.weights)
    }

    /// `∫ |K| dμ`.
    pub fn kernel_abs_mass(&self) -> f64 {
        let abs: Vec<Complex64> = self.weights.iter().map(|w| Complex64::new(w.norm(), 0.0)).collect();
        pairwise_sum(&abs).re
    }

    /// Same operator with `K` divided by `∫ K dμ`.
    pub fn normalize_kernel(&self) -> Result<Self> {
        let mass = self.kernel_mass();
        if !(mass.norm() > 1e-10) {
            return Err(invalid(format!("kernel mass {mass} is too close to zero to normalize")));
        }
        Self::from_rule(self.kernel.scaled(mass.inv()), self.rule.clone(), self.compose)
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.kernel_mass() - 1.0).norm() <= tol
    }

    /// `Σ_i K(w_i) μ_i · f∘φ_{w_i}`.
    pub fn apply(&self, f: &TaylorFunction) -> Result<TaylorFunction> {
        Ok(TaylorFunction::new(self.accumulate(f, 1.0)?))
    }

    /// `H_ε f = Σ_i K(w_i) μ_i · (f∘φ_{ε w_i})(-z)`.
    pub fn apply_epsilon(&self, eps: f64, f: &TaylorFunction) -> Result<TaylorFunction> {
        check_epsilon(eps)?;
        Ok(TaylorFunction::new(self.accumulate(f, eps)?).reflect())
    }

    fn accumulate(&self, f: &TaylorFunction, shrink: f64) -> Result<Vec<Complex64>> {
        let parts: Vec<Result<Vec<Complex64>>> = fixed_chunks(self.params.len(), CHUNKS)
            .into_par_iter()
            .map(|range| {
                let mut acc: Vec<Complex64> = Vec::new();
                for i in range {
                    let c = self.weights[i];
                    if c == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let w = if shrink == 1.0 { self.params[i] } else { self.params[i].shrink(shrink) };
                    let g = compose(f, &w, &self.compose)?;
                    if g.coeffs().len() > acc.len() {
                        acc.resize(g.coeffs().len(), Complex64::new(0.0, 0.0));
                    }
                    for (a, &b) in acc.iter_mut().zip(g.coeffs()) {
                        *a += c * b;
                    }
                }
                Ok(acc)
            })
            .collect();
        let parts = parts.into_iter().collect::<Result<Vec<_>>>()?;
        let mut out = pairwise_sum_buffers(parts);
        if out.is_empty() {
            out.push(Complex64::new(0.0, 0.0));
        }
        Ok(out)
    }

    /// Images `H(z^k)`, `k = 0..=max_degree` (or `H_ε(z^k)` when `eps` is set),
    /// computed in one pass over the nodes.
    pub fn monomial_images(&self, max_degree: usize, eps: Option<f64>) -> Result<OperatorMatrix> {
        if let Some(e) = eps {
            check_epsilon(e)?;
        }
        let shrink = eps.unwrap_or(1.0);
        let cols = max_degree + 1;
        let parts: Vec<Vec<Vec<Complex64>>> = fixed_chunks(self.params.len(), CHUNKS)
            .into_par_iter()
            .map(|range| {
                let mut acc: Vec<Vec<Complex64>> = vec![Vec::new(); cols];
                for i in range {
                    let c = self.weights[i];
                    if c == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let w = if shrink == 1.0 { self.params[i] } else { self.params[i].shrink(shrink) };
                    let n = self.compose.degree_for(max_degree, &w);
                    let mut power = vec![Complex64::new(0.0, 0.0); n + 1];
                    power[0] = Complex64::new(1.0, 0.0);
                    for col in acc.iter_mut() {
                        if col.len() < power.len() {
                            col.resize(power.len(), Complex64::new(0.0, 0.0));
                        }
                        for (a, &b) in col.iter_mut().zip(&power) {
                            *a += c * b;
                        }
                        mul_phi(&mut power, w.value());
                    }
                }
                acc
            })
            .collect();
        let mut by_column: Vec<Vec<Vec<Complex64>>> = vec![Vec::with_capacity(parts.len()); cols];
        for part in parts {
            for (k, col) in part.into_iter().enumerate() {
                by_column[k].push(col);
            }
        }
        let columns = by_column
            .into_iter()
            .map(|bufs| {
                let mut v = pairwise_sum_buffers(bufs);
                if v.is_empty() {
                    v.push(Complex64::new(0.0, 0.0));
                }
                let t = TaylorFunction::new(v);
                if eps.is_some() {
                    t.reflect()
                } else {
                    t
                }
            })
            .collect();
        Ok(OperatorMatrix { columns })
    }

    /// `c_n = ∫ K(w) I_n(w) dμ(w)` with
    /// `I_n(w) = (1/2π) ∫ ((w e^{it} - 1)/(e^{it} - conj w))^n g(e^{it}) dt`.
    pub fn coefficient_sequence(&self, g: &TaylorFunction, n_max: usize) -> Result<CoefficientSequence> {
        self.coefficient_sequence_with(g, n_max, ContourMethod::Series)
    }

    pub fn coefficient_sequence_with(
        &self,
        g: &TaylorFunction,
        n_max: usize,
        method: ContourMethod,
    ) -> Result<CoefficientSequence> {
        if let ContourMethod::Trapezoid { samples } = method {
            if samples <= g.effective_degree() || samples < 2 {
                return Err(invalid(format!(
                    "{samples} contour samples cannot resolve a degree {} integrand",
                    g.effective_degree()
                )));
            }
            if let Some(p) = self.params.iter().find(|p| p.gap() < MIN_CONTOUR_GAP) {
                return Err(Error::ParamNearBoundary { w: p.value(), gap: p.gap() });
            }
        }
        let parts: Vec<Vec<Complex64>> = fixed_chunks(self.params.len(), CHUNKS)
            .into_par_iter()
            .map(|range| {
                let mut acc = vec![Complex64::new(0.0, 0.0); n_max + 1];
                for i in range {
                    let c = self.weights[i];
                    if c == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let seq = match method {
                        ContourMethod::Series => contour_series(self.params[i].value(), g, n_max),
                        ContourMethod::Trapezoid { samples } => {
                            contour_trapezoid(self.params[i].value(), g, n_max, samples)
                        }
                    };
                    for (a, b) in acc.iter_mut().zip(seq) {
                        *a += c * b;
                    }
                }
                acc
            })
            .collect();
        Ok(CoefficientSequence {
            values: pairwise_sum_buffers(parts),
        })
    }

    /// `c_n = n ∫ K(w) w^{n-1} (|w|² - 1) dμ(w)`.
    pub fn corollary_coeffs(&self, n_max: usize) -> CoefficientSequence {
        let parts: Vec<Vec<Complex64>> = fixed_chunks(self.params.len(), CHUNKS)
            .into_par_iter()
            .map(|range| {
                let mut acc = vec![Complex64::new(0.0, 0.0); n_max + 1];
                for i in range {
                    let p = &self.params[i];
                    let w = p.value();
                    let base = -self.weights[i] * (p.gap() * (2.0 - p.gap()));
                    let mut wp = Complex64::new(1.0, 0.0);
                    for (n, a) in acc.iter_mut().enumerate().skip(1) {
                        *a += base * wp * n as f64;
                        wp *= w;
                    }
                }
                acc
            })
            .collect();
        CoefficientSequence {
            values: pairwise_sum_buffers(parts),
        }
    }
}

fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("epsilon = {eps} must lie in (0, 1)")))
    }
}

/// How the contour integrals `I_n(w)` are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContourMethod {
    /// On the unit circle the integrand `q^n g` with `q = φ_w(1/ζ)` has only
    /// the nonpositive-frequency part of `q^n` pairing with `g`, so
    /// `I_n = Σ_k g_k [u^k] φ_w(u)^n`, which is exact.
    #[default]
    Series,
    /// M-point trapezoid rule on `|z| = 1`; aliasing error is about `|w|^M`.
    Trapezoid { samples: usize },
}

fn contour_series(w: Complex64, g: &TaylorFunction, n_max: usize) -> Vec<Complex64> {
    let gc = &g.coeffs()[..=g.effective_degree()];
    let mut power = vec![Complex64::new(0.0, 0.0); gc.len()];
    power[0] = Complex64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(n_max + 1);
    for _ in 0..=n_max {
        out.push(gc.iter().zip(&power).map(|(a, b)| a * b).sum());
        mul_phi(&mut power, w);
    }
    out
}

fn contour_trapezoid(w: Complex64, g: &TaylorFunction, n_max: usize, m: usize) -> Vec<Complex64> {
    let wc = w.conj();
    let gv = g.circle_values(1.0, m);
    let mut q = Vec::with_capacity(m);
    for j in 0..m {
        let zeta = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
        q.push((w * zeta - 1.0) / (zeta - wc));
    }
    let mut cur = gv;
    let mut out = Vec::with_capacity(n_max + 1);
    for _ in 0..=n_max {
        out.push(pairwise_sum(&cur) / m as f64);
        for (c, qj) in cur.iter_mut().zip(&q) {
            *c *= qj;
        }
    }
    out
}

/// Images of the monomials `z^0..z^K` under one operator; applying it to a
/// polynomial of degree `<= K` is a matrix-vector product.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    columns: Vec<TaylorFunction>,
}

impl OperatorMatrix {
    pub fn max_degree(&self) -> usize {
        self.columns.len() - 1
    }

    pub fn column(&self, k: usize) -> &TaylorFunction {
        &self.columns[k]
    }

    pub fn apply(&self, f: &TaylorFunction) -> Result<TaylorFunction> {
        let d = f.effective_degree();
        if d > self.max_degree() {
            return Err(invalid(format!(
                "degree {d} exceeds the {} monomial images available",
                self.max_degree()
            )));
        }
        let len = self.columns[..=d].iter().map(|c| c.coeffs().len()).max().unwrap_or(1);
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for (a, col) in f.coeffs()[..=d].iter().zip(&self.columns) {
            for (o, &b) in out.iter_mut().zip(col.coeffs()) {
                *o += a * b;
            }
        }
        Ok(TaylorFunction::new(out))
    }
}

/// `Σ_n d_n · f∘φ_{w_n}` for complex `d_n`.
pub fn apply_discrete(
    d: &[Complex64],
    atoms: &[MobiusParam],
    f: &TaylorFunction,
    params: &ComposeParams,
) -> Result<TaylorFunction> {
    if d.len() != atoms.len() {
        return Err(invalid(format!("{} weights for {} atoms", d.len(), atoms.len())));
    }
    if d.is_empty() {
        return Err(invalid("discrete operator needs at least one atom"));
    }
    let parts = d
        .par_iter()
        .zip(atoms.par_iter())
        .map(|(&c, w)| compose(f, w, params).map(|g| g.coeffs().iter().map(|&b| c * b).collect()))
        .collect::<Result<Vec<Vec<Complex64>>>>()?;
    Ok(TaylorFunction::new(pairwise_sum_buffers(parts)))
}

/// First `cut` weights of an infinite sequence and the tail mass
/// `Σ_{cut <= n < horizon} |d_n|`.
pub fn truncate_weights(d: impl Fn(usize) -> Complex64, cut: usize, horizon: usize) -> (Vec<Complex64>, f64) {
    let head = (0..cut).map(&d).collect();
    let tail: Vec<Complex64> = (cut..horizon.max(cut)).map(|n| Complex64::new(d(n).norm(), 0.0)).collect();
    (head, pairwise_sum(&tail).re)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSequence {
    #[serde(with = "crate::scalar::many")]
    pub values: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    /// Least-squares `ρ` in `|c_n| ≈ C ρ^n`.
    pub geometric_ratio: f64,
    /// Least-squares `s` in `|c_n| ≈ C n^{-s}`.
    pub power_exponent: f64,
    pub points: usize,
}

impl CoefficientSequence {
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.values.len().max(other.values.len());
        let zero = Complex64::new(0.0, 0.0);
        (0..n)
            .map(|i| (self.values.get(i).unwrap_or(&zero) - other.values.get(i).unwrap_or(&zero)).norm())
            .fold(0.0, f64::max)
    }

    /// Log-linear fits over the upper half of the nonzero terms; `None` with
    /// fewer than 3 usable points.
    pub fn decay(&self) -> Option<DecayReport> {
        let pts: Vec<(f64, f64)> = self
            .values
            .iter()
            .enumerate()
            .skip((self.values.len() / 2).max(1))
            .filter(|(_, v)| v.norm() > 0.0)
            .map(|(n, v)| (n as f64, v.norm().ln()))
            .collect();
        if pts.len() < 3 {
            return None;
        }
        let slope = |xs: &[(f64, f64)]| {
            let m = xs.len() as f64;
            let mx = xs.iter().map(|p| p.0).sum::<f64>() / m;
            let my = xs.iter().map(|p| p.1).sum::<f64>() / m;
            let sxy: f64 = xs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = xs.iter().map(|p| (p.0 - mx).powi(2)).sum();
            sxy / sxx
        };
        let logn: Vec<(f64, f64)> = pts.iter().map(|&(n, y)| (n.ln(), y)).collect();
        Some(DecayReport {
            geometric_ratio: slope(&pts).exp(),
            power_exponent: -slope(&logn),
            points: pts.len(),
        })
    }
}

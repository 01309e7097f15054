//! Bloch, weighted Bergman and Hardy norms of truncated series.
//!
//! Hardy norms use the normalized circle measure `dθ/2π`, so `‖1‖_{H^p} = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::holo::TaylorFunction;
use crate::measure::{build_quadrature_with, MeasureSpec, QuadratureOptions, QuadratureRule};
use crate::sum::pairwise_sum_real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    Bloch,
    Bergman { p: f64, alpha: f64 },
    Hardy { p: f64 },
}

impl SpaceSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SpaceSpec::Bloch => Ok(()),
            SpaceSpec::Bergman { p, alpha } => {
                if !(p.is_finite() && p >= 1.0) {
                    return Err(invalid(format!("Bergman exponent p = {p} must be >= 1")));
                }
                if !(alpha.is_finite() && alpha > -1.0) {
                    return Err(invalid(format!("Bergman weight alpha = {alpha} must exceed -1")));
                }
                Ok(())
            }
            SpaceSpec::Hardy { p } => {
                if p.is_finite() && p > 0.0 {
                    Ok(())
                } else {
                    Err(invalid(format!("Hardy exponent p = {p} must be positive")))
                }
            }
        }
    }

    /// The `p` of the space; 1 for Bloch.
    pub fn exponent(&self) -> f64 {
        match *self {
            SpaceSpec::Bloch => 1.0,
            SpaceSpec::Bergman { p, .. } | SpaceSpec::Hardy { p } => p,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            SpaceSpec::Bloch => "bloch".to_string(),
            SpaceSpec::Bergman { p, alpha } => format!("bergman(p={p},alpha={alpha})"),
            SpaceSpec::Hardy { p } => format!("hardy(p={p})"),
        }
    }
}

/// Polar search grid for the Bloch supremum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlochGrid {
    pub radii: usize,
    pub angles: usize,
    /// Coarse local maxima that get a refinement pass.
    pub candidates: usize,
    pub zoom_points: usize,
    pub zoom_passes: usize,
}

impl Default for BlochGrid {
    fn default() -> Self {
        Self {
            radii: 200,
            angles: 256,
            candidates: 4,
            zoom_points: 9,
            zoom_passes: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochEstimate {
    pub value: f64,
    /// Best value on the coarse grid alone.
    pub coarse: f64,
    pub argmax: Complex64,
}

/// `sup (1 - |z|^2) |f'(z)|` over a graded polar grid, refined near the best
/// coarse local maxima.
pub fn bloch_seminorm(f: &TaylorFunction) -> f64 {
    bloch_seminorm_with(f, &BlochGrid::default()).value
}

/// `‖f‖_B + |f(0)|`.
pub fn bloch_norm(f: &TaylorFunction) -> f64 {
    bloch_norm_with(f, &BlochGrid::default())
}

pub fn bloch_norm_with(f: &TaylorFunction, grid: &BlochGrid) -> f64 {
    bloch_seminorm_with(f, grid).value + f.coeffs()[0].norm()
}

pub fn bloch_seminorm_with(f: &TaylorFunction, grid: &BlochGrid) -> BlochEstimate {
    let df = f.derivative();
    let n_r = grid.radii.max(2);
    let n_t = grid.angles.max(4).next_power_of_two();
    let radii: Vec<f64> = (0..n_r)
        .map(|i| {
            let s = 1.0 - i as f64 / n_r as f64;
            1.0 - s * s
        })
        .collect();
    let rows: Vec<Vec<f64>> = radii
        .par_iter()
        .map(|&r| {
            let damp = (1.0 - r) * (1.0 + r);
            df.circle_values(r, n_t).iter().map(|v| damp * v.norm()).collect()
        })
        .collect();

    let at = |i: usize, j: usize| rows[i][j];
    let mut local_max: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n_r {
        for j in 0..n_t {
            let v = at(i, j);
            let jl = (j + n_t - 1) % n_t;
            let jr = (j + 1) % n_t;
            let mut is_max = v >= at(i, jl) && v >= at(i, jr);
            if i > 0 {
                is_max &= v >= at(i - 1, j);
            }
            if i + 1 < n_r {
                is_max &= v >= at(i + 1, j);
            }
            if is_max {
                local_max.push((v, i, j));
            }
        }
    }
    local_max.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let Some(&(coarse, ci, cj)) = local_max.first() else {
        return BlochEstimate {
            value: 0.0,
            coarse: 0.0,
            argmax: Complex64::new(0.0, 0.0),
        };
    };
    let dtheta = 2.0 * PI / n_t as f64;
    let mut best = (coarse, Complex64::from_polar(radii[ci], cj as f64 * dtheta));
    let r_cap = 1.0 - 1e-9;
    let eval = |r: f64, t: f64| {
        let z = Complex64::from_polar(r, t);
        (1.0 - r) * (1.0 + r) * df.horner(z).norm()
    };

    for &(_, i, j) in local_max.iter().take(grid.candidates.max(1)) {
        let mut rc = radii[i];
        let mut tc = j as f64 * dtheta;
        let below = if i > 0 { radii[i] - radii[i - 1] } else { 0.0 };
        let above = if i + 1 < n_r { radii[i + 1] - radii[i] } else { 1.0 - radii[i] };
        let mut hr = below.max(above);
        let mut ht = dtheta;
        let k = grid.zoom_points.max(3);
        for _ in 0..grid.zoom_passes {
            let (mut lr, mut lt, mut lv) = (rc, tc, eval(rc, tc));
            for a in 0..k {
                let r = (rc - hr + 2.0 * hr * a as f64 / (k - 1) as f64).clamp(0.0, r_cap);
                for b in 0..k {
                    let t = tc - ht + 2.0 * ht * b as f64 / (k - 1) as f64;
                    let v = eval(r, t);
                    if v > lv {
                        (lr, lt, lv) = (r, t, v);
                    }
                }
            }
            if lv > best.0 {
                best = (lv, Complex64::from_polar(lr, lt));
            }
            rc = lr;
            tc = lt;
            hr *= 2.0 / (k - 1) as f64;
            ht *= 2.0 / (k - 1) as f64;
        }
    }
    BlochEstimate {
        value: best.0,
        coarse,
        argmax: best.1,
    }
}

/// `(∫ |f|^p dA_α)^{1/p}` by an `Area(α)` rule.
pub fn bergman_norm(f: &TaylorFunction, p: f64, alpha: f64, rule: &QuadratureRule) -> Result<f64> {
    SpaceSpec::Bergman { p, alpha }.validate()?;
    match rule.area_alpha() {
        Some(a) if a == alpha && rule.polar().is_some() => Ok(bergman_norm_unchecked(f, p, rule)),
        _ => Err(invalid(format!(
            "quadrature rule does not discretize dA_alpha with alpha = {alpha}"
        ))),
    }
}

fn bergman_norm_unchecked(f: &TaylorFunction, p: f64, rule: &QuadratureRule) -> f64 {
    let layout = rule.polar().expect("area rule has a polar layout");
    let n_t = layout.n_theta;
    let rows: Vec<f64> = layout
        .radii
        .par_iter()
        .zip(layout.radial_weights.par_iter())
        .map(|(&r, &rw)| {
            let terms: Vec<f64> = f.circle_values(r, n_t).iter().map(|v| v.norm().powf(p)).collect();
            pairwise_sum_real(&terms) * rw / n_t as f64
        })
        .collect();
    pairwise_sum_real(&rows).powf(1.0 / p)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HardyGrid {
    /// Interior circles `r_j = 1 - 2^{-j}`, `j = 1..=circles`; the unit circle is added last.
    pub circles: usize,
    pub samples: usize,
}

impl Default for HardyGrid {
    fn default() -> Self {
        Self {
            circles: 12,
            samples: 4096,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HardyProfile {
    pub radii: Vec<f64>,
    /// `((1/2π) ∫ |f(r e^{iθ})|^p dθ)^{1/p}` per radius.
    pub means: Vec<f64>,
    pub value: f64,
    /// The means were nondecreasing in `r` (to rounding).
    pub monotone: bool,
}

/// Hardy norm with the default grid.
pub fn hardy_norm(f: &TaylorFunction, p: f64) -> f64 {
    hardy_profile(f, p, &HardyGrid::default()).value
}

pub fn hardy_profile(f: &TaylorFunction, p: f64, grid: &HardyGrid) -> HardyProfile {
    let m = grid.samples.max(2).next_power_of_two();
    let mut radii: Vec<f64> = (1..=grid.circles).map(|j| 1.0 - 0.5f64.powi(j as i32)).collect();
    radii.push(1.0);
    let means: Vec<f64> = radii.iter().map(|&r| circle_mean(f, p, r, m)).collect();
    let monotone = means
        .windows(2)
        .all(|w| w[1] >= w[0] * (1.0 - 1e-9) - 1e-300);
    HardyProfile {
        value: *means.last().unwrap(),
        radii,
        means,
        monotone,
    }
}

fn circle_mean(f: &TaylorFunction, p: f64, r: f64, m: usize) -> f64 {
    let terms: Vec<f64> = f.circle_values(r, m).iter().map(|v| v.norm().powf(p)).collect();
    (pairwise_sum_real(&terms) / m as f64).powf(1.0 / p)
}

/// Grids and levels used by every norm evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormSettings {
    pub bloch: BlochGrid,
    pub hardy: HardyGrid,
    pub bergman_level: u32,
    pub quadrature: QuadratureOptions,
}

impl Default for NormSettings {
    fn default() -> Self {
        Self {
            bloch: BlochGrid::default(),
            hardy: HardyGrid::default(),
            bergman_level: 2,
            quadrature: QuadratureOptions::default(),
        }
    }
}

/// A space norm with its grids or rule prepared once.
#[derive(Clone, Debug)]
pub enum SpaceNorm {
    /// The full Bloch norm `‖f‖_B + |f(0)|`.
    Bloch(BlochGrid),
    Bergman { p: f64, rule: QuadratureRule },
    Hardy { p: f64, grid: HardyGrid },
}

impl SpaceNorm {
    pub fn prepare(space: &SpaceSpec, settings: &NormSettings) -> Result<Self> {
        space.validate()?;
        Ok(match *space {
            SpaceSpec::Bloch => SpaceNorm::Bloch(settings.bloch),
            SpaceSpec::Bergman { p, alpha } => SpaceNorm::Bergman {
                p,
                rule: build_quadrature_with(&MeasureSpec::area(alpha), settings.bergman_level, &settings.quadrature)?,
            },
            SpaceSpec::Hardy { p } => SpaceNorm::Hardy { p, grid: settings.hardy },
        })
    }

    pub fn norm(&self, f: &TaylorFunction) -> f64 {
        match self {
            SpaceNorm::Bloch(grid) => bloch_norm_with(f, grid),
            SpaceNorm::Bergman { p, rule } => bergman_norm_unchecked(f, *p, rule),
            SpaceNorm::Hardy { p, grid } => hardy_profile(f, *p, grid).value,
        }
    }

    pub fn exponent(&self) -> f64 {
        match self {
            SpaceNorm::Bloch(_) => 1.0,
            SpaceNorm::Bergman { p, .. } | SpaceNorm::Hardy { p, .. } => *p,
        }
    }
}

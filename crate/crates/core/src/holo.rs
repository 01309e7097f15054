//! Truncated Taylor series on the unit disc.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fft;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Slack allowed when checking `|z| <= 1` for points computed on the circle.
pub(crate) const DISC_SLACK: f64 = 4.0 * f64::EPSILON;

/// `f(z) = Σ_{k=0}^{N} c_k z^k`. The coefficient vector is never empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TaylorFunction {
    #[serde(with = "crate::scalar::many")]
    coeffs: Vec<Complex64>,
}

impl TaylorFunction {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(vec![ZERO; degree + 1])
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![ZERO; n + 1];
        c[n] = Complex64::new(1.0, 0.0);
        Self::new(c)
    }

    /// Degree-`n` truncation of `1 / (1 - q z)`.
    pub fn geometric(q: Complex64, n: usize) -> Self {
        let mut c = Vec::with_capacity(n + 1);
        let mut p = Complex64::new(1.0, 0.0);
        for _ in 0..=n {
            c.push(p);
            p *= q;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Length of the coefficient vector minus one; trailing zeros count.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Degree ignoring trailing exact zeros.
    pub fn effective_degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != ZERO).unwrap_or(0)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() <= 1.0 + DISC_SLACK) {
            return Err(Error::OutsideDisc { z });
        }
        Ok(self.horner(z))
    }

    /// Nested evaluation without the domain check.
    pub fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::new(vec![ZERO]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// `f(-z)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| if k % 2 == 1 { -c } else { c })
                .collect(),
        )
    }

    /// Zero-padded or truncated copy with exactly `degree + 1` coefficients.
    pub fn resized(&self, degree: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(degree + 1, ZERO);
        Self::new(c)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Largest coefficient modulus among the last `band` coefficients.
    ///
    /// For recovered or truncated series this is the aliasing / truncation proxy.
    pub fn tail_magnitude(&self, band: usize) -> f64 {
        let start = self.coeffs.len().saturating_sub(band.max(1));
        self.coeffs[start..].iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(ZERO);
                let b = other.coeffs.get(k).copied().unwrap_or(ZERO);
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `Σ |c_k|^2`, the squared H² norm.
    pub fn l2_coeff_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Values on `m` equispaced points of the circle `|z| = radius`:
    /// `out[j] = f(radius e^{2πij/m})`. Coefficients are folded modulo `m`, so
    /// any degree is accepted.
    pub(crate) fn circle_values(&self, radius: f64, m: usize) -> Vec<Complex64> {
        let mut buf = vec![ZERO; m];
        let mut rk = 1.0;
        for (k, &c) in self.coeffs.iter().enumerate() {
            buf[k % m] += c * rk;
            rk *= radius;
        }
        fft::inverse(&mut buf);
        buf
    }

    pub fn boundary_samples(&self, radius: f64, m: usize) -> Result<BoundarySamples> {
        check_radius(radius)?;
        check_pow2(m)?;
        Ok(BoundarySamples {
            radius,
            values: self.circle_values(radius, m),
        })
    }
}

impl Add for &TaylorFunction {
    type Output = TaylorFunction;

    fn add(self, rhs: &TaylorFunction) -> TaylorFunction {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut c = self.coeffs.clone();
        c.resize(n, ZERO);
        for (a, b) in c.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        TaylorFunction::new(c)
    }
}

impl Sub for &TaylorFunction {
    type Output = TaylorFunction;

    fn sub(self, rhs: &TaylorFunction) -> TaylorFunction {
        self + &(-rhs)
    }
}

impl Neg for &TaylorFunction {
    type Output = TaylorFunction;

    fn neg(self) -> TaylorFunction {
        TaylorFunction::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul<Complex64> for &TaylorFunction {
    type Output = TaylorFunction;

    fn mul(self, s: Complex64) -> TaylorFunction {
        self.scale(s)
    }
}

/// Samples `values[j] = f(radius · e^{2πij/M})` of a function on a circle.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySamples {
    radius: f64,
    values: Vec<Complex64>,
}

impl BoundarySamples {
    pub fn new(radius: f64, values: Vec<Complex64>) -> Result<Self> {
        check_radius(radius)?;
        check_pow2(values.len())?;
        Ok(Self { radius, values })
    }

    /// Samples `g(radius · e^{2πij/m})` of an arbitrary function.
    pub fn from_fn(radius: f64, m: usize, g: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        check_radius(radius)?;
        check_pow2(m)?;
        let values = (0..m)
            .map(|j| g(Complex64::from_polar(radius, 2.0 * PI * j as f64 / m as f64)))
            .collect();
        Ok(Self { radius, values })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Cauchy-coefficient recovery: `c_k = radius^{-k} · (1/M) Σ_j values[j] e^{-2πijk/M}`
/// for `k = 0..=degree`. Requires `degree < M/2`.
pub fn from_boundary_samples(s: &BoundarySamples, degree: usize) -> Result<TaylorFunction> {
    let m = s.values.len();
    if degree >= m / 2 {
        return Err(invalid(format!(
            "recovered degree {degree} must be below half the sample count {m}"
        )));
    }
    let mut buf = s.values.clone();
    fft::forward(&mut buf);
    let inv_m = 1.0 / m as f64;
    let inv_r = 1.0 / s.radius;
    let mut scale = inv_m;
    let coeffs = buf
        .into_iter()
        .take(degree + 1)
        .map(|c| {
            let v = c * scale;
            scale *= inv_r;
            v
        })
        .collect();
    Ok(TaylorFunction::new(coeffs))
}

fn check_radius(radius: f64) -> Result<()> {
    if radius > 0.0 && radius <= 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("sampling radius {radius} must lie in (0, 1]")))
    }
}

fn check_pow2(m: usize) -> Result<()> {
    if m >= 2 && m.is_power_of_two() {
        Ok(())
    } else {
        Err(invalid(format!("sample count {m} must be a power of two")))
    }
}

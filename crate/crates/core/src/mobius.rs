//! The involutive disc automorphisms `φ_w(z) = (w - z) / (1 - conj(w) z)`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::holo::{from_boundary_samples, BoundarySamples, TaylorFunction, DISC_SLACK};

/// Smallest admissible `1 - |w|` for a Möbius parameter.
pub const MIN_PARAM_GAP: f64 = 1e-12;

/// Upper limit on composite degrees.
pub const DEFAULT_MAX_DEGREE: usize = 2047;

/// A point `w` strictly inside the disc, `1 - |w| >= 1e-12`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusParam {
    w: Complex64,
    gap: f64,
}

impl MobiusParam {
    pub fn new(w: Complex64) -> Result<Self> {
        Self::with_gap(w, 1.0 - w.norm())
    }

    /// Uses a caller-supplied `1 - |w|` (e.g. from a graded quadrature mesh,
    /// where it is known more accurately than `1 - w.norm()`).
    pub fn with_gap(w: Complex64, gap: f64) -> Result<Self> {
        if !(w.re.is_finite() && w.im.is_finite()) || !(gap >= MIN_PARAM_GAP) {
            return Err(Error::ParamNearBoundary { w, gap });
        }
        Ok(Self { w, gap })
    }

    pub fn origin() -> Self {
        Self {
            w: Complex64::new(0.0, 0.0),
            gap: 1.0,
        }
    }

    pub fn value(&self) -> Complex64 {
        self.w
    }

    /// `1 - |w|`.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() <= 1.0 + DISC_SLACK) {
            return Err(Error::OutsideDisc { z });
        }
        Ok(self.apply_unchecked(z))
    }

    pub fn apply_unchecked(&self, z: Complex64) -> Complex64 {
        (self.w - z) / (1.0 - self.w.conj() * z)
    }

    /// `1 - |φ_w(z)|^2 = (1 - |w|^2)(1 - |z|^2) / |1 - conj(w) z|^2`, evaluated
    /// through the product form so it stays accurate near the circle.
    pub fn one_minus_abs_sq(&self, z: Complex64) -> f64 {
        let one_minus_w2 = self.gap * (2.0 - self.gap);
        let one_minus_z2 = (1.0 - z.norm()) * (1.0 + z.norm());
        one_minus_w2 * one_minus_z2 / (1.0 - self.w.conj() * z).norm_sqr()
    }

    /// `φ_{s w}` for a real factor `0 <= s <= 1`.
    pub fn shrink(&self, s: f64) -> Self {
        let w = self.w * s;
        Self {
            w,
            gap: 1.0 - s + s * self.gap,
        }
    }
}

impl Serialize for MobiusParam {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::scalar::serialize(&self.w, s)
    }
}

impl<'de> Deserialize<'de> for MobiusParam {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = crate::scalar::deserialize(d)?;
        MobiusParam::new(w).map_err(serde::de::Error::custom)
    }
}

/// Bergman distance `β(z, w) = ½ log((1 + ρ)/(1 - ρ))`, `ρ = |φ_z(w)|`.
pub fn bergman_distance(z: Complex64, w: Complex64) -> Result<f64> {
    for p in [z, w] {
        if !(p.norm() < 1.0) {
            return Err(Error::NotInOpenDisc { z: p });
        }
    }
    let az = MobiusParam {
        w: z,
        gap: 1.0 - z.norm(),
    };
    let rho = az.apply_unchecked(w).norm();
    if rho < 0.5 {
        return Ok(rho.atanh());
    }
    // atanh(ρ) = ln(1 + ρ) - ½ ln(1 - ρ²), with 1 - ρ² in product form
    Ok(rho.ln_1p() - 0.5 * az.one_minus_abs_sq(w).ln())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ComposeMethod {
    /// Horner's scheme on series: repeated exact multiplication by the
    /// rational series of φ_w. Truncation is exact; no aliasing.
    Recurrence,
    /// Samples `f∘φ_w` on `|z| = radius` and recovers coefficients by DFT.
    Sampled { radius: f64, samples: usize },
}

impl Default for ComposeMethod {
    fn default() -> Self {
        ComposeMethod::Recurrence
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComposeParams {
    /// Fixed output degree; `None` picks [`default_degree`].
    pub degree: Option<usize>,
    pub max_degree: usize,
    pub method: ComposeMethod,
}

impl Default for ComposeParams {
    fn default() -> Self {
        Self {
            degree: None,
            max_degree: DEFAULT_MAX_DEGREE,
            method: ComposeMethod::Recurrence,
        }
    }
}

impl ComposeParams {
    pub fn sampled(radius: f64, samples: usize) -> Self {
        Self {
            method: ComposeMethod::Sampled { radius, samples },
            ..Self::default()
        }
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.degree = Some(degree);
        self
    }

    pub(crate) fn degree_for(&self, f_degree: usize, w: &MobiusParam) -> usize {
        let cap = match self.method {
            ComposeMethod::Recurrence => self.max_degree,
            ComposeMethod::Sampled { samples, .. } => self.max_degree.min(samples / 2 - 1),
        };
        self.degree
            .unwrap_or_else(|| default_degree(f_degree, w.gap()).min(cap))
    }
}

/// Output degree for `f∘φ_w` with `deg f = d` and `1 - |w| = gap`.
///
/// On the circle `φ_w` stretches arguments by up to `(1+|w|)/(1-|w|)`, so the
/// composite's spectrum extends to about `d (1+|w|)/(1-|w|)`; beyond that the
/// coefficients decay like `|w|^k`.
pub fn default_degree(d: usize, gap: f64) -> usize {
    let stretch = (2.0 - gap) / gap;
    let n = d as f64 * stretch + 64.0 + (80.0 / gap).ceil();
    if n >= usize::MAX as f64 / 2.0 {
        usize::MAX / 2
    } else {
        n as usize
    }
}

/// Taylor coefficients of `f∘φ_w` up to the degree chosen by `params`.
pub fn compose(f: &TaylorFunction, w: &MobiusParam, params: &ComposeParams) -> Result<TaylorFunction> {
    let n = params.degree_for(f.effective_degree(), w);
    match params.method {
        ComposeMethod::Recurrence => Ok(compose_recurrence(f, w.value(), n)),
        ComposeMethod::Sampled { radius, samples } => {
            if !(radius > 0.0 && radius < 1.0 + DISC_SLACK) {
                return Err(invalid(format!("sampling radius {radius} must lie in (0, 1]")));
            }
            let s = BoundarySamples::from_fn(radius, samples, |z| f.horner(w.apply_unchecked(z)))?;
            from_boundary_samples(&s, n)
        }
    }
}

/// Composite together with the magnitude of its last 8 coefficients.
pub fn compose_with_tail(
    f: &TaylorFunction,
    w: &MobiusParam,
    params: &ComposeParams,
) -> Result<(TaylorFunction, f64)> {
    let g = compose(f, w, params)?;
    let tail = g.tail_magnitude(8);
    Ok((g, tail))
}

pub(crate) fn compose_recurrence(f: &TaylorFunction, w: Complex64, n: usize) -> TaylorFunction {
    let c = f.coeffs();
    let d = f.effective_degree();
    let mut acc = vec![Complex64::new(0.0, 0.0); n + 1];
    acc[0] = c[d];
    for j in (0..d).rev() {
        mul_phi(&mut acc, w);
        acc[0] += c[j];
    }
    TaylorFunction::new(acc)
}

/// In place `s <- s · φ_w` on a truncated series: multiply by `w - z`, then
/// divide by `1 - conj(w) z`.
pub(crate) fn mul_phi(s: &mut [Complex64], w: Complex64) {
    let wc = w.conj();
    let mut prev_in = Complex64::new(0.0, 0.0);
    let mut prev_out = Complex64::new(0.0, 0.0);
    for x in s.iter_mut() {
        let cur = *x;
        let out = w * cur - prev_in + wc * prev_out;
        *x = out;
        prev_in = cur;
        prev_out = out;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn p(re: f64, im: f64) -> MobiusParam {
        MobiusParam::new(c(re, im)).unwrap()
    }

    fn disc(rmax: f64) -> impl Strategy<Value = Complex64> {
        (0.0f64..rmax, 0.0f64..(2.0 * PI)).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    fn poly(max_deg: usize) -> impl Strategy<Value = TaylorFunction> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_deg + 1)
            .prop_map(|v| TaylorFunction::new(v.into_iter().map(|(a, b)| c(a, b)).collect()))
    }

    #[test]
    fn apply_examples() {
        assert_eq!(p(0.5, 0.0).apply(c(0.0, 0.0)).unwrap(), c(0.5, 0.0));
        assert_eq!(p(0.5, 0.0).apply(c(0.5, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(p(0.0, 0.0).apply(c(0.3, -0.2)).unwrap(), c(-0.3, 0.2));
        assert!(p(0.5, 0.0).apply(c(1.1, 0.0)).is_err());
    }

    #[test]
    fn boundary_maps_to_boundary() {
        let w = p(0.6, -0.3);
        for j in 0..32 {
            let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 32.0);
            assert_abs_diff_eq!(w.apply(z).unwrap().norm(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn parameter_near_circle_is_rejected() {
        assert!(MobiusParam::new(c(1.0 - 1e-13, 0.0)).is_err());
        assert!(MobiusParam::new(c(1.0 - 1e-11, 0.0)).is_ok());
        assert!(MobiusParam::new(c(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn one_minus_abs_sq_examples() {
        assert_eq!(p(0.0, 0.0).one_minus_abs_sq(c(0.0, 0.0)), 1.0);
        assert_abs_diff_eq!(p(0.5, 0.0).one_minus_abs_sq(c(0.0, 0.0)), 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(p(0.5, 0.0).one_minus_abs_sq(c(0.5, 0.0)), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn bergman_distance_examples() {
        assert_eq!(bergman_distance(c(0.0, 0.3), c(0.0, 0.3)).unwrap(), 0.0);
        assert_abs_diff_eq!(
            bergman_distance(c(0.0, 0.0), c(0.5, 0.0)).unwrap(),
            0.5 * 3f64.ln(),
            epsilon = 1e-15
        );
        let a = p(0.7, 0.0);
        let (z, w) = (c(0.2, 0.0), c(0.2, 0.0));
        let before = bergman_distance(z, w).unwrap();
        let after = bergman_distance(a.apply(z).unwrap(), a.apply(w).unwrap()).unwrap();
        assert_abs_diff_eq!(before, after, epsilon = 1e-15);
        assert!(bergman_distance(c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn compose_examples() {
        let id = TaylorFunction::from_real(&[0.0, 1.0]);
        let g = compose(&id, &MobiusParam::origin(), &ComposeParams::default()).unwrap();
        assert_eq!(&g.coeffs()[..2], &[c(0.0, 0.0), c(-1.0, 0.0)]);
        assert!(g.coeffs()[2..].iter().all(|x| x.norm() == 0.0));

        let g = compose(&id, &p(0.5, 0.0), &ComposeParams::default()).unwrap();
        assert_abs_diff_eq!((g.coeffs()[0] - 0.5).norm(), 0.0, epsilon = 1e-16);
        for k in 1..g.coeffs().len() {
            let want = -0.75 * 0.5f64.powi(k as i32 - 1);
            assert_abs_diff_eq!((g.coeffs()[k] - want).norm(), 0.0, epsilon = 1e-15);
        }

        let one = TaylorFunction::from_real(&[1.0]);
        let g = compose(&one, &p(0.3, 0.4), &ComposeParams::default()).unwrap();
        assert_eq!(g.coeffs()[0], c(1.0, 0.0));
        assert!(g.coeffs()[1..].iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn composite_constant_term_is_value_at_w() {
        let f = TaylorFunction::new((0..12).map(|k| c(1.0 / (k + 1) as f64, 0.3 * k as f64 / 12.0)).collect());
        let w = p(-0.4, 0.55);
        let g = compose(&f, &w, &ComposeParams::default()).unwrap();
        let fw = f.eval(w.value()).unwrap();
        assert!((g.coeffs()[0] - fw).norm() <= 1e-10 * fw.norm());
    }

    #[test]
    fn sampled_route_agrees_with_recurrence() {
        let f = TaylorFunction::new((0..17).map(|k| c((k as f64).cos(), (k as f64).sin()) / (k + 1) as f64).collect());
        for w in [p(0.5, 0.0), p(-0.2, 0.6), p(0.0, -0.75)] {
            let exact = compose(&f, &w, &ComposeParams::default()).unwrap();
            let sampled = compose(&f, &w, &ComposeParams::sampled(1.0, 4096)).unwrap();
            assert!(exact.max_coeff_diff(&sampled) < 1e-12, "w = {:?}", w);
        }
        // At radius 0.9 low-order coefficients still agree.
        let w = p(0.3, 0.3);
        let exact = compose(&f, &w, &ComposeParams::default().with_degree(40)).unwrap();
        let sampled = compose(&f, &w, &ComposeParams::sampled(0.9, 4096).with_degree(40)).unwrap();
        assert!(exact.max_coeff_diff(&sampled) < 1e-10);
    }

    #[test]
    fn default_degree_grows_toward_the_circle() {
        assert!(default_degree(8, 0.5) < default_degree(8, 0.1));
        assert_eq!(default_degree(0, 1.0), 144);
        let params = ComposeParams::default();
        assert_eq!(params.degree_for(32, &p(0.999, 0.0)), DEFAULT_MAX_DEGREE);
    }

    #[test]
    fn tail_of_well_resolved_composite_is_negligible() {
        let f = TaylorFunction::monomial(32);
        let (_, tail) = compose_with_tail(&f, &p(0.8, 0.0), &ComposeParams::default()).unwrap();
        assert!(tail < 1e-15, "tail {tail}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn involution(w in disc(0.99), z in disc(0.99)) {
            let a = MobiusParam::new(w).unwrap();
            let back = a.apply(a.apply(z).unwrap()).unwrap();
            prop_assert!((back - z).norm() <= 1e-12);
        }

        #[test]
        fn product_identity(w in disc(0.99), z in disc(0.9)) {
            let a = MobiusParam::new(w).unwrap();
            let direct = 1.0 - a.apply(z).unwrap().norm_sqr();
            prop_assert!((a.one_minus_abs_sq(z) - direct).abs() <= 1e-12);
        }

        #[test]
        fn lower_bound_from_growth_estimate(w in disc(0.99), z in disc(0.99)) {
            let a = MobiusParam::new(w).unwrap();
            let lower = 0.5 * (1.0 - z.norm_sqr()) * a.gap();
            prop_assert!(a.one_minus_abs_sq(z) >= lower * (1.0 - 1e-14));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn composition_consistency(f in poly(32), w in disc(0.8),
                                   zs in prop::collection::vec(disc(0.9), 100)) {
            let a = MobiusParam::new(w).unwrap();
            let g = compose(&f, &a, &ComposeParams::default()).unwrap();
            for z in zs {
                let lhs = g.eval(z).unwrap();
                let rhs = f.eval(a.apply(z).unwrap()).unwrap();
                prop_assert!((lhs - rhs).norm() <= 1e-8);
            }
        }

        #[test]
        fn double_composition_restores(f in poly(16), w in disc(0.7)) {
            let a = MobiusParam::new(w).unwrap();
            let params = ComposeParams::default();
            let g = compose(&f, &a, &params).unwrap();
            let back = compose(&g, &a, &params).unwrap();
            prop_assert!(back.resized(f.degree()).max_coeff_diff(&f) <= 1e-7);
            prop_assert!(back.coeffs()[f.degree() + 1..].iter().all(|x| x.norm() <= 1e-7));
        }
    }
}

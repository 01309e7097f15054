use std::path::Path;

use hausdorff_core::measure::QuadratureOptions;
use hausdorff_core::mobius::ComposeParams;
use hausdorff_core::verify::DEFAULT_EPSILONS;
use hausdorff_core::{Complex64, KernelSpec, MeasureSpec, NormSettings, SpaceSpec, TaylorFunction};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// One experiment, read from a JSON document. Unknown fields are rejected.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub function: Option<FunctionSpec>,
    pub kernel: KernelSpec,
    pub measure: Option<MeasureSpec>,
    pub space: Option<SpaceSpec>,
    /// Spaces for `norms`; empty means Bloch, Bergman(2, 0) and Hardy(2).
    pub spaces: Vec<SpaceSpec>,
    pub epsilons: Vec<f64>,
    pub n_max: usize,
    /// Test function of the coefficient sequence; `z` when absent.
    pub g: Option<FunctionSpec>,
    pub trials: usize,
    pub seed: u64,
    /// Seeds for `bounds`; empty means `[seed]`.
    pub seeds: Vec<u64>,
    /// Quadrature level of the operator's measure.
    pub level: u32,
    /// Divide the kernel by its mass before an identity-approximation sweep.
    pub normalize: bool,
    pub compose: ComposeParams,
    pub quadrature: QuadratureOptions,
    pub norms: NormSettings,
    pub suite: SuiteConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            function: None,
            kernel: KernelSpec::constant(1.0),
            measure: None,
            space: None,
            spaces: Vec::new(),
            epsilons: DEFAULT_EPSILONS.to_vec(),
            n_max: 32,
            g: None,
            trials: 200,
            seed: 1,
            seeds: Vec::new(),
            level: 1,
            normalize: true,
            compose: ComposeParams::default(),
            quadrature: QuadratureOptions::default(),
            norms: NormSettings::default(),
            suite: SuiteConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    Coeffs(#[serde(with = "hausdorff_core::scalar::many")] Vec<Complex64>),
    Monomial(usize),
    /// Degree-`degree` truncation of `1/(1 - ratio z)`.
    Geometric {
        #[serde(with = "hausdorff_core::scalar")]
        ratio: Complex64,
        degree: usize,
    },
    /// `leading · Π (z - root)`.
    Polynomial {
        #[serde(with = "hausdorff_core::scalar::many")]
        roots: Vec<Complex64>,
        #[serde(default = "one", with = "hausdorff_core::scalar")]
        leading: Complex64,
    },
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl FunctionSpec {
    pub fn build(&self) -> Result<TaylorFunction, CliError> {
        let f = match self {
            FunctionSpec::Coeffs(c) => {
                if c.is_empty() {
                    return Err(CliError::Config("function coefficients are empty".into()));
                }
                TaylorFunction::new(c.clone())
            }
            FunctionSpec::Monomial(n) => TaylorFunction::monomial(*n),
            FunctionSpec::Geometric { ratio, degree } => TaylorFunction::geometric(*ratio, *degree),
            FunctionSpec::Polynomial { roots, leading } => {
                let mut c = vec![*leading];
                for r in roots {
                    let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
                    for (k, &a) in c.iter().enumerate() {
                        next[k + 1] += a;
                        next[k] -= r * a;
                    }
                    c = next;
                }
                TaylorFunction::new(c)
            }
        };
        if f.coeffs().iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(CliError::Config("function coefficients must be finite".into()));
        }
        Ok(f)
    }
}

/// Sizes and tolerances of the `verify` suite.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub mobius_pairs: usize,
    pub composition_pairs: usize,
    pub composition_points: usize,
    pub invariance_pairs: usize,
    pub inequality_pairs: usize,
    pub bound_trials: usize,
    pub bound_seeds: Vec<u64>,
    pub bound_cases: Vec<BoundCase>,
    pub tolerances: Tolerances,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let atom = MeasureSpec::atom(Complex64::new(0.5, 0.0), 1.0).expect("valid atom");
        Self {
            mobius_pairs: 1000,
            composition_pairs: 20,
            composition_points: 100,
            invariance_pairs: 20,
            inequality_pairs: 50,
            bound_trials: 50,
            bound_seeds: vec![1, 2, 3],
            bound_cases: vec![
                BoundCase {
                    space: SpaceSpec::Bloch,
                    kernel: KernelSpec::constant(1.0),
                    measure: atom.clone(),
                },
                BoundCase {
                    space: SpaceSpec::Hardy { p: 2.0 },
                    kernel: KernelSpec::constant(1.0),
                    measure: atom,
                },
                BoundCase {
                    space: SpaceSpec::Bergman { p: 4.0, alpha: 0.0 },
                    kernel: KernelSpec::constant(1.0),
                    measure: MeasureSpec::area(0.0),
                },
            ],
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundCase {
    pub space: SpaceSpec,
    pub kernel: KernelSpec,
    pub measure: MeasureSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub mobius: f64,
    pub roundtrip: f64,
    pub composition: f64,
    pub norms: f64,
    pub bloch_grid: f64,
    pub bloch_invariance: f64,
    pub bound: f64,
    pub change_of_variables: f64,
    pub inequality: f64,
    pub duality: f64,
    pub identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            mobius: 1e-12,
            roundtrip: 1e-12,
            composition: 1e-8,
            norms: 1e-8,
            bloch_grid: 1e-4,
            bloch_invariance: 1e-3,
            bound: 1e-2,
            change_of_variables: 1e-6,
            inequality: 1e-3,
            duality: 1e-8,
            identity: 1e-3,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.kernel.validate()?;
        if let Some(m) = &self.measure {
            m.validate()?;
        }
        for s in self.space.iter().chain(&self.spaces) {
            s.validate()?;
        }
        for c in &self.suite.bound_cases {
            c.kernel.validate()?;
            c.measure.validate()?;
            c.space.validate()?;
        }
        if self.trials == 0 {
            return Err(CliError::Config("trials must be positive".into()));
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
            return Err(CliError::Config(format!("epsilon {e} must lie in (0, 1)")));
        }
        for f in self.function.iter().chain(&self.g) {
            f.build()?;
        }
        Ok(())
    }

    pub fn function(&self) -> Result<TaylorFunction, CliError> {
        self.function
            .as_ref()
            .ok_or_else(|| CliError::Config("config has no `function`".into()))?
            .build()
    }

    pub fn measure(&self) -> Result<&MeasureSpec, CliError> {
        self.measure
            .as_ref()
            .ok_or_else(|| CliError::Config("config has no `measure`".into()))
    }

    pub fn space(&self) -> Result<SpaceSpec, CliError> {
        self.space.ok_or_else(|| CliError::Config("config has no `space`".into()))
    }

    pub fn seeds(&self) -> Vec<u64> {
        if self.seeds.is_empty() {
            vec![self.seed]
        } else {
            self.seeds.clone()
        }
    }

    /// SHA-256 of the effective configuration, after command-line overrides.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

//! Scenario files: JSON, `"version": 1`, unknown fields rejected.

use std::path::{Path, PathBuf};

use qcx_core::map::catalog_map;
use qcx_core::qc::ExtensionTarget;
use qcx_core::{AnalyticMap, AnnulusGrid, CompanionMap, Complex64, Criterion, CriterionParams, DiskGrid, MoebiusMap, SectorDomain};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default = "FunctionSpec::identity")]
    pub function: FunctionSpec,
    #[serde(default)]
    pub companion: CompanionSpec,
    #[serde(default = "default_criterion")]
    pub criterion: Criterion,
    #[serde(default)]
    pub params: ParamsSpec,
    #[serde(default)]
    pub grid: DiskGrid,
    #[serde(default)]
    pub annulus: AnnulusGrid,
    #[serde(default)]
    pub times: TimeSpec,
    #[serde(default)]
    pub beltrami: BeltramiSpec,
    #[serde(default)]
    pub extend: ExtendSpec,
    #[serde(default)]
    pub fit: Option<FitSpec>,
    #[serde(default)]
    pub compose: Option<ComposeSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

fn default_criterion() -> Criterion {
    Criterion::GenBecker
}

/// The analytic function under test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    /// A named map from the built-in catalog.
    Catalog { name: String },
    Spirallike { lambda: f64 },
    /// `a0 + a1 z + a2 z^2 + ...`.
    Polynomial { coefficients: Vec<Complex64> },
    /// `z -> r of(z / r)`.
    Scaled { r: f64, of: Box<FunctionSpec> },
    /// `z -> by + of(z)`.
    Shifted { by: Complex64, of: Box<FunctionSpec> },
}

impl FunctionSpec {
    pub fn identity() -> Self {
        FunctionSpec::Catalog { name: "identity".into() }
    }

    pub fn build(&self) -> Result<AnalyticMap, CliError> {
        Ok(match self {
            FunctionSpec::Catalog { name } => {
                catalog_map(name).ok_or_else(|| CliError::Input(format!("unknown catalog function {name:?}")))?
            }
            FunctionSpec::Spirallike { lambda } => AnalyticMap::spirallike(*lambda)?,
            FunctionSpec::Polynomial { coefficients } => AnalyticMap::polynomial(coefficients.clone())?,
            FunctionSpec::Scaled { r, of } => AnalyticMap::scaled(*r, of.build()?)?,
            FunctionSpec::Shifted { by, of } => of.build()?.shifted(*by),
        })
    }
}

/// The companion map `Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CompanionSpec {
    #[default]
    Identity,
    /// `w -> e^{i phi} w`.
    Rotation { phi: f64 },
    /// `(alpha w + beta)/(gamma w + delta)`, rescaled to determinant one.
    Moebius { alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64 },
    /// `w/(w - c2)`.
    MoebiusPole { c2: Complex64 },
    /// `Q2` of the sector, or `Q2/Q2'(0)` when `normalized`.
    Sector {
        w0: Complex64,
        lambda0: f64,
        a: f64,
        #[serde(default)]
        normalized: bool,
    },
    /// A catalog map used as companion, with its declared extension dilatation.
    Catalog { name: String, dilatation: f64 },
}

impl CompanionSpec {
    pub fn build(&self) -> Result<CompanionMap, CliError> {
        Ok(match self {
            CompanionSpec::Identity => CompanionMap::identity(),
            CompanionSpec::Rotation { phi } => CompanionMap::rotation(*phi),
            CompanionSpec::Moebius { alpha, beta, gamma, delta } => {
                CompanionMap::moebius(MoebiusMap::new(*alpha, *beta, *gamma, *delta)?)
            }
            CompanionSpec::MoebiusPole { c2 } => CompanionMap::moebius(MoebiusMap::with_pole(*c2)?),
            CompanionSpec::Sector { w0, lambda0, a, normalized } => {
                let s = SectorDomain::new(*w0, *lambda0, *a)?;
                if *normalized {
                    CompanionMap::normalized_sector(s)?
                } else {
                    CompanionMap::sector(s)
                }
            }
            CompanionSpec::Catalog { name, dilatation } => {
                let map = catalog_map(name).ok_or_else(|| CliError::Input(format!("unknown catalog companion {name:?}")))?;
                CompanionMap::analytic(map, *dilatation)?
            }
        })
    }

    pub fn sector(&self) -> Option<(Complex64, f64, f64)> {
        match self {
            CompanionSpec::Sector { w0, lambda0, a, .. } => Some((*w0, *lambda0, *a)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsSpec {
    pub k: f64,
    pub k_prime: f64,
    pub c: Complex64,
    pub s: Complex64,
    pub p: FunctionSpec,
    pub phi_rotation: f64,
    pub c2: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
    pub sector: Option<SectorDomain>,
}

impl Default for ParamsSpec {
    fn default() -> Self {
        let d = CriterionParams::default();
        Self {
            k: d.k,
            k_prime: d.k_prime,
            c: d.c,
            s: d.s,
            p: FunctionSpec::identity(),
            phi_rotation: d.phi_rotation,
            c2: d.c2,
            gamma: d.gamma,
            delta: d.delta,
            sector: None,
        }
    }
}

impl ParamsSpec {
    pub fn build(&self) -> Result<CriterionParams, CliError> {
        let sector = match self.sector {
            Some(s) => Some(SectorDomain::new(s.w0, s.lambda0, s.a)?),
            None => None,
        };
        Ok(CriterionParams {
            k: self.k,
            k_prime: self.k_prime,
            c: self.c,
            s: self.s,
            p: self.p.build()?,
            phi_rotation: self.phi_rotation,
            c2: self.c2,
            gamma: self.gamma,
            delta: self.delta,
            sector,
        })
    }
}

/// Time samples `t_max * i / steps`, `i = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeSpec {
    pub t_max: f64,
    pub steps: usize,
}

impl Default for TimeSpec {
    fn default() -> Self {
        Self { t_max: 2.0, steps: 20 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BeltramiSpec {
    pub h: f64,
    /// Which map to measure; `None` picks `function` when the companion's
    /// extension is known in closed form.
    pub target: Option<ExtensionTarget>,
    /// Slack allowed above the concluded dilatation.
    pub tolerance: f64,
}

impl Default for BeltramiSpec {
    fn default() -> Self {
        Self { h: qcx_core::qc::DEFAULT_STEP, target: None, tolerance: 2e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtendSpec {
    pub radii: Vec<f64>,
    pub angular: usize,
    pub continuity_samples: usize,
    pub continuity_delta: f64,
    pub continuity_tolerance: f64,
}

impl Default for ExtendSpec {
    fn default() -> Self {
        Self {
            radii: vec![0.25, 0.5, 0.75, 0.9, 0.99, 1.0, 1.01, 1.1, 1.5, 2.0, 3.0],
            angular: 64,
            continuity_samples: 256,
            continuity_delta: 1e-9,
            continuity_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSpec {
    pub w0: Complex64,
    #[serde(default)]
    pub disk: Option<DiskSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskSpec {
    pub center: Complex64,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComposeSpec {
    pub k1: f64,
    pub k2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub svg: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: PathBuf::from("qcx-out"), svg: false }
    }
}

/// Everything a command needs, built from a scenario.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub f: AnalyticMap,
    pub companion: CompanionMap,
    pub params: CriterionParams,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| CliError::Input(format!("scenario: {e}")))?;
        if s.version != VERSION {
            return Err(CliError::Input(format!("unsupported scenario version {} (expected {VERSION})", s.version)));
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The scenario with every default filled in, as JSON.
    pub fn echo(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        self.grid.validate()?;
        self.annulus.validate()?;
        Ok(Resolved { f: self.function.build()?, companion: self.companion.build()?, params: self.params.build()? })
    }

    pub fn times(&self) -> Result<Vec<f64>, CliError> {
        if !(self.times.t_max > 0.0 && self.times.t_max.is_finite()) || self.times.steps < 1 {
            return Err(CliError::Input("times: need t_max > 0 and steps >= 1".into()));
        }
        Ok(qcx_core::loewner::time_samples(self.times.t_max, self.times.steps))
    }
}

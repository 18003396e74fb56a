//! Versioned JSON scenario format.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "name": "cylinder-all-checks",
//!   "params": { "n": 3, "N": 3, "eps": 0.0 },
//!   "instance": { "kind": "profile", "w": "1", "phi": "0", "t_max": 2.0,
//!                 "topology": "collar", "fiber": { "kind": "torus", "volume": 1.0 } },
//!   "checks": ["riccati", { "id": "p-laplacian", "p": [1.5, 2.0, 3.0] }]
//! }
//! ```
//!
//! Profile expressions use the grammar of [`crate::geometry::Expr`].

use serde::{Deserialize, Serialize};

use crate::comparison::{CheckOptions, SplittingSetup};
use crate::geometry::{Expr, Extent, Fiber, Topology};
use crate::model::ExtReal;
use crate::spectrum::OdeCoefficient;

/// Current scenario schema version.
pub const SCHEMA_VERSION: u32 = 1;

/// Default number of certification grid points.
pub const CERTIFY_POINTS: usize = 512;

fn default_certify_points() -> usize {
    CERTIFY_POINTS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub name: String,
    /// Seed for randomized instances.
    #[serde(default)]
    pub seed: u64,
    pub params: ParamSpec,
    pub instance: InstanceSpec,
    /// Optional weakening of the certified constants.
    #[serde(default)]
    pub hypotheses: HypothesisPolicy,
    pub checks: Vec<CheckEntry>,
    #[serde(default)]
    pub options: CheckOptions,
    #[serde(default = "default_certify_points")]
    pub certify_points: usize,
    #[serde(default)]
    pub ode_coeff: OdeCoefficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: ExtReal,
    #[serde(default)]
    pub eps: f64,
}

/// Requested `(κ, λ, δ)`; each must be implied by the certificate. Missing
/// entries keep the certified value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisPolicy {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RandomKind {
    Collar,
    Ball,
    TwoEnded,
}

fn zero_phi() -> Expr {
    Expr::constant(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSpec {
    /// Explicit warping function and density.
    Profile {
        w: Expr,
        #[serde(default = "zero_phi")]
        phi: Expr,
        t_max: f64,
        topology: Topology,
        fiber: Fiber,
    },
    /// The ball `B^n_{κ,λ}`.
    ModelBall { kappa: f64, lambda: f64 },
    /// The collar `{ρ < t}` of the model.
    ModelCollar { kappa: f64, lambda: f64, t: f64, fiber: Fiber },
    /// The model truncated at `D_{κ,λ}` and mirrored.
    ModelCylinder { kappa: f64, lambda: f64, fiber: Fiber },
    /// The equality metric of the parameter regime, optionally mirrored at
    /// its far end into a two-ended instance.
    EqualityModel {
        kappa: f64,
        lambda: f64,
        #[serde(default)]
        f0: f64,
        extent: Extent,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        density: Option<Expr>,
        fiber: Fiber,
        #[serde(default)]
        mirror: bool,
    },
    /// A random instance drawn from the scenario seed.
    Random { family: RandomKind },
}

/// A check identifier, or an object with the identifier and its arguments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CheckEntry {
    Id(String),
    Spec(CheckSpec),
}

impl CheckEntry {
    pub fn spec(&self) -> CheckSpec {
        match self {
            CheckEntry::Id(id) => CheckSpec { id: id.clone(), ..CheckSpec::default() },
            CheckEntry::Spec(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub id: String,
    /// Exponents for `p-laplacian` and `eigenvalue-bound`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    /// Increasing test function for `p-laplacian`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Expr>,
    /// `[r, R]` for `volume-comparison`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<[f64; 2]>,
    /// `[a, b]` for `domain-volume`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<[f64; 2]>,
    /// Restrict the verdict to these named parts of the check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<String>>,
    /// Setup for `splitting-model`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setup: Option<SplittingSetup>,
}

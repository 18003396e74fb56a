//! Configuration-driven batch runs: build instances, run the selected
//! checks and emit deterministic JSON and CSV reports.
//!
//! A report is a pure function of the scenario bytes, the seed, the
//! overrides and the crate version. Wall time is left to the caller.

pub mod emit;
pub mod run;
pub mod schema;
pub mod suite;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use emit::{emit_tables, to_csv, to_json, OutputFormat, CSV_HEADER};
pub use run::{run_scenario, run_scenario_str, RunOverrides, CHECK_IDS};
pub use schema::{CheckEntry, CheckSpec, HypothesisPolicy, InstanceSpec, ParamSpec, RandomKind, Scenario, CERTIFY_POINTS, SCHEMA_VERSION};
pub use suite::{run_suite, Family, AGREEMENT_TOL};

use crate::comparison::{CheckOptions, ComparisonError, ComparisonReport, Constants, Verdict};
use crate::geometry::GeometryError;
use crate::model::ParamError;
use crate::spectrum::{EigenResult, OdeCoefficient};

/// Version string stamped into every report.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("scenario parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unsupported schema version {0}, expected {SCHEMA_VERSION}")]
    UnsupportedVersion(u32),
    #[error("unknown check id {0:?}")]
    UnknownCheck(String),
    #[error("check {check:?} needs the argument {argument:?}")]
    MissingArgument { check: String, argument: &'static str },
    #[error("invalid parameters: {0}")]
    Params(#[from] ParamError),
    #[error("invalid instance: {0}")]
    Instance(#[from] GeometryError),
    #[error("certification failed: {0}")]
    Certificate(#[from] ComparisonError),
    #[error("invalid override: {0}")]
    Override(String),
}

impl ScenarioError {
    pub(crate) fn parse(e: serde_json::Error) -> Self {
        ScenarioError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

/// What a report entry carries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntryDetail {
    Comparison { report: ComparisonReport },
    Eigen { result: EigenResult },
    /// Shooting against the finite-difference oracle on one model problem.
    Agreement {
        p: f64,
        k: f64,
        kappa: f64,
        lambda: f64,
        d: f64,
        shooting: f64,
        finite_difference: f64,
        relative_difference: f64,
        tolerance: f64,
    },
    Error { message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub check_id: String,
    pub instance_id: String,
    pub verdict: Verdict,
    pub worst_margin: Option<f64>,
    #[serde(flatten)]
    pub detail: EntryDetail,
}

impl Entry {
    pub fn comparison(check_id: String, instance_id: &str, report: ComparisonReport) -> Self {
        Self {
            check_id,
            instance_id: instance_id.to_owned(),
            verdict: report.verdict,
            worst_margin: report.worst_margin,
            detail: EntryDetail::Comparison { report },
        }
    }

    pub fn error(check_id: String, instance_id: &str, message: impl ToString) -> Self {
        Self {
            check_id,
            instance_id: instance_id.to_owned(),
            verdict: Verdict::Skipped,
            worst_margin: None,
            detail: EntryDetail::Error { message: message.to_string() },
        }
    }

    pub fn is_error(&self) -> bool {
        matches!(self.detail, EntryDetail::Error { .. })
    }
}

/// Verdict counts and the worst margin of one check id across instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check_id: String,
    pub instances: usize,
    pub holds: usize,
    pub equality: usize,
    pub violated: usize,
    pub skipped: usize,
    pub errors: usize,
    pub worst_margin: Option<f64>,
    pub worst_instance: Option<String>,
}

/// Tolerances in force for a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub check: f64,
    pub eigen: f64,
    pub eigen_equality: f64,
    pub agreement: f64,
    pub rigidity: f64,
}

impl Tolerances {
    pub fn new(opts: &CheckOptions) -> Self {
        Self {
            check: opts.tol,
            eigen: crate::spectrum::ladder::EIGEN_TOL,
            eigen_equality: crate::spectrum::ladder::EQUALITY_TOL,
            agreement: AGREEMENT_TOL,
            rigidity: crate::comparison::radii::RIGIDITY_TOL,
        }
    }
}

/// Parameters, instance and certified constants of one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub instance_id: String,
    pub params: ParamSpec,
    pub instance: InstanceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypotheses: Option<Constants>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RunSource {
    Scenario { scenario: Scenario },
    Suite { family: Family, count: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub artifact_version: String,
    pub schema_version: u32,
    /// SHA-256 of the run inputs.
    pub input_digest: String,
    pub seed: u64,
    pub source: RunSource,
    pub tolerances: Tolerances,
    pub options: CheckOptions,
    pub ode_coeff: OdeCoefficient,
    pub violated: usize,
    pub errors: usize,
    pub summary: Vec<CheckSummary>,
    pub instances: Vec<InstanceRecord>,
    pub entries: Vec<Entry>,
}

impl RunReport {
    pub(crate) fn assemble(
        input_digest: String,
        seed: u64,
        source: RunSource,
        options: CheckOptions,
        ode_coeff: OdeCoefficient,
        mut instances: Vec<InstanceRecord>,
        mut entries: Vec<Entry>,
    ) -> Self {
        entries.sort_by(|a, b| (&a.check_id, &a.instance_id).cmp(&(&b.check_id, &b.instance_id)));
        instances.sort_by(|a, b| a.instance_id.cmp(&b.instance_id));
        let summary = summarize(&entries);
        Self {
            artifact_version: ARTIFACT_VERSION.to_owned(),
            schema_version: SCHEMA_VERSION,
            input_digest,
            seed,
            source,
            tolerances: Tolerances::new(&options),
            options,
            ode_coeff,
            violated: entries.iter().filter(|e| e.verdict == Verdict::Violated).count(),
            errors: entries.iter().filter(|e| e.is_error()).count(),
            summary,
            instances,
            entries,
        }
    }

    /// 0 when no check is violated, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.violated > 0)
    }

    /// Worst margin over all entries of one check id.
    pub fn worst_margin(&self, check_id: &str) -> Option<f64> {
        self.summary.iter().find(|s| s.check_id == check_id).and_then(|s| s.worst_margin)
    }
}

fn summarize(entries: &[Entry]) -> Vec<CheckSummary> {
    let mut out: Vec<CheckSummary> = Vec::new();
    for e in entries {
        if out.last().map(|s| s.check_id != e.check_id).unwrap_or(true) {
            out.push(CheckSummary {
                check_id: e.check_id.clone(),
                instances: 0,
                holds: 0,
                equality: 0,
                violated: 0,
                skipped: 0,
                errors: 0,
                worst_margin: None,
                worst_instance: None,
            });
        }
        let s = out.last_mut().expect("pushed above");
        s.instances += 1;
        if e.is_error() {
            s.errors += 1;
        } else {
            match e.verdict {
                Verdict::Holds => s.holds += 1,
                Verdict::Equality => s.equality += 1,
                Verdict::Violated => s.violated += 1,
                Verdict::Skipped => s.skipped += 1,
            }
        }
        if let Some(m) = e.worst_margin {
            if s.worst_margin.map(|w| m.is_nan() || m < w).unwrap_or(true) {
                s.worst_margin = Some(m);
                s.worst_instance = Some(e.instance_id.clone());
            }
        }
    }
    out
}

/// Hex SHA-256 of the concatenated parts, each followed by a zero byte.
pub(crate) fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
        h.update([0u8]);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Map over instances, in parallel when the `parallel` feature is on.
pub(crate) fn map_instances<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

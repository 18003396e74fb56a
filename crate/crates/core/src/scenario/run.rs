//! Scenario execution: instance construction, certification and check
//! dispatch.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::schema::{CheckSpec, HypothesisPolicy, InstanceSpec, ParamSpec, Scenario, SCHEMA_VERSION};
use super::suite::random_instance;
use super::{digest, Entry, EntryDetail, InstanceRecord, RunReport, RunSource, ScenarioError, ARTIFACT_VERSION};
use crate::comparison::{
    certify_hypotheses, check_bounded_density, check_boundary_laplacian, check_cut_bounds, check_inradius, check_p_laplacian,
    check_point_laplacian, check_riccati, check_splitting_model, check_two_boundary_distance, check_volume_comparisons,
    check_volume_elements, CheckOptions, ComparisonReport, Constants, Hypotheses, Verdict,
};
use crate::geometry::{
    build_equality_model, build_model_ball, build_model_collar, build_model_cylinder, mirror_collar, reparam_s, Curve, Expr,
    RadialProfile, Topology, WarpedManifold,
};
use crate::model::{classify_pair, validate_params, Dims};
use crate::spectrum::{check_eigen_theorems, kasue_estimate, radial_eigen_estimate, OdeCoefficient};

/// Every check identifier a scenario may list. `all` expands to the checks
/// that apply to the instance topology.
pub const CHECK_IDS: [&str; 15] = [
    "point-laplacian",
    "riccati",
    "boundary-laplacian",
    "cut-bound",
    "bounded-density",
    "p-laplacian",
    "inradius",
    "volume-element",
    "volume-comparison",
    "two-boundary-distance",
    "splitting-model",
    "eigenvalue-bound",
    "domain-volume",
    "radial-eigenvalue",
    "all",
];

const DEFAULT_EXPONENTS: [f64; 3] = [1.5, 2.0, 3.0];
const DEFAULT_PSI: &str = "t + 0.25*t^2";

/// Command-line overrides of scenario fields.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RunOverrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub grid: Option<usize>,
    pub ode_coeff: Option<OdeCoefficient>,
}

impl RunOverrides {
    pub(crate) fn apply(&self, sc: &mut Scenario) -> Result<(), ScenarioError> {
        if let Some(seed) = self.seed {
            sc.seed = seed;
        }
        if let Some(tol) = self.tol {
            sc.options.tol = tol;
        }
        if let Some(grid) = self.grid {
            sc.options.points = grid;
        }
        if let Some(c) = self.ode_coeff {
            sc.ode_coeff = c;
        }
        validate_options(&sc.options)
    }
}

pub(crate) fn validate_options(o: &CheckOptions) -> Result<(), ScenarioError> {
    if !(o.tol > 0.0 && o.tol.is_finite()) {
        return Err(ScenarioError::Override(format!("tolerance must be positive, got {}", o.tol)));
    }
    if o.points < 3 {
        return Err(ScenarioError::Override(format!("grid needs at least 3 points, got {}", o.points)));
    }
    if !(o.exclusion >= 0.0 && o.exclusion < 0.5) {
        return Err(ScenarioError::Override(format!("exclusion must lie in [0, 0.5[, got {}", o.exclusion)));
    }
    Ok(())
}

/// Read and run a scenario file.
pub fn run_scenario(path: &Path, overrides: &RunOverrides) -> Result<RunReport, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.display().to_string(), source })?;
    run_scenario_str(&text, overrides)
}

/// Run a scenario given as JSON text.
pub fn run_scenario_str(text: &str, overrides: &RunOverrides) -> Result<RunReport, ScenarioError> {
    let mut sc: Scenario = serde_json::from_str(text).map_err(ScenarioError::parse)?;
    if sc.schema_version != SCHEMA_VERSION {
        return Err(ScenarioError::UnsupportedVersion(sc.schema_version));
    }
    overrides.apply(&mut sc)?;
    let specs: Vec<CheckSpec> = sc.checks.iter().map(|c| c.spec()).collect();
    validate_checks(&specs)?;
    let dims = params_dims(&sc.params)?;

    let instance = match &sc.instance {
        InstanceSpec::Random { family } => random_instance(&mut ChaCha8Rng::seed_from_u64(sc.seed), *family, &sc.params),
        other => other.clone(),
    };
    let job = InstanceJob {
        instance_id: sc.name.clone(),
        params: sc.params,
        dims,
        instance,
        policy: sc.hypotheses,
        checks: specs,
        certify_points: sc.certify_points,
    };
    let run = RunSettings { opts: sc.options, coeff: sc.ode_coeff, keep_samples: true };
    let (record, entries) = evaluate_instance(&job, &run)?;

    let ov = serde_json::to_string(overrides).expect("overrides serialize");
    let input_digest = digest(&[text.as_bytes(), sc.seed.to_string().as_bytes(), ov.as_bytes(), ARTIFACT_VERSION.as_bytes()]);
    Ok(RunReport::assemble(
        input_digest,
        sc.seed,
        RunSource::Scenario { scenario: sc.clone() },
        sc.options,
        sc.ode_coeff,
        vec![record],
        entries,
    ))
}

pub(crate) fn params_dims(p: &ParamSpec) -> Result<Dims, ScenarioError> {
    Ok(validate_params(p.n, p.big_n, p.eps)?)
}

pub(crate) fn validate_checks(specs: &[CheckSpec]) -> Result<(), ScenarioError> {
    for s in specs {
        if !CHECK_IDS.contains(&s.id.as_str()) {
            return Err(ScenarioError::UnknownCheck(s.id.clone()));
        }
        if s.id == "splitting-model" && s.setup.is_none() {
            return Err(ScenarioError::MissingArgument { check: s.id.clone(), argument: "setup" });
        }
    }
    Ok(())
}

/// Everything needed to evaluate one instance.
pub(crate) struct InstanceJob {
    pub instance_id: String,
    pub params: ParamSpec,
    pub dims: Dims,
    pub instance: InstanceSpec,
    pub policy: HypothesisPolicy,
    pub checks: Vec<CheckSpec>,
    pub certify_points: usize,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct RunSettings {
    pub opts: CheckOptions,
    pub coeff: OdeCoefficient,
    /// When false, each report keeps only its worst sample.
    pub keep_samples: bool,
}

pub(crate) fn build_instance(spec: &InstanceSpec, dims: &Dims) -> Result<WarpedManifold, ScenarioError> {
    let n = dims.n;
    Ok(match spec {
        InstanceSpec::Profile { w, phi, t_max, topology, fiber } => {
            let profile = RadialProfile::new(Curve::Expr(w.clone()), Curve::Expr(phi.clone()), *t_max)?;
            WarpedManifold::new(n, *fiber, profile, *topology)?
        }
        InstanceSpec::ModelBall { kappa, lambda } => build_model_ball(n, *kappa, *lambda)?,
        InstanceSpec::ModelCollar { kappa, lambda, t, fiber } => build_model_collar(n, *kappa, *lambda, *t, *fiber)?,
        InstanceSpec::ModelCylinder { kappa, lambda, fiber } => build_model_cylinder(n, *kappa, *lambda, *fiber)?,
        InstanceSpec::EqualityModel { kappa, lambda, f0, extent, density, fiber, mirror } => {
            let eq = build_equality_model(dims.regime, dims, *kappa, *lambda, *fiber, *f0, *extent, density.clone())?;
            if *mirror {
                mirror_collar(&eq.manifold)?
            } else {
                eq.manifold
            }
        }
        InstanceSpec::Random { .. } => unreachable!("random instances are resolved before construction"),
    })
}

fn constants(h: &Hypotheses) -> Constants {
    Constants { kappa: h.kappa, lambda: h.lambda, delta: Some(h.delta) }
}

/// Build, certify and run all checks on one instance.
pub(crate) fn evaluate_instance(job: &InstanceJob, run: &RunSettings) -> Result<(InstanceRecord, Vec<Entry>), ScenarioError> {
    let m = build_instance(&job.instance, &job.dims)?;
    let cert = certify_hypotheses(&m, &job.dims, job.certify_points)?;
    let p = job.policy;
    let h = cert.weaken(p.kappa, p.lambda, p.delta)?;
    let mut entries = Vec::new();
    for spec in expand(&job.checks, m.topology, &h) {
        let ctx = Ctx { m: &m, h: &h, run, id: &job.instance_id, parts: spec.parts.as_deref() };
        entries.extend(ctx.run_check(&spec));
    }
    let record = InstanceRecord {
        instance_id: job.instance_id.clone(),
        params: job.params,
        instance: job.instance.clone(),
        hypotheses: Some(constants(&h)),
    };
    Ok((record, entries))
}

/// Replace `all` by the checks that apply to `topology` and to the
/// constants `h`; drop duplicates.
fn expand(specs: &[CheckSpec], topology: Topology, h: &Hypotheses) -> Vec<CheckSpec> {
    let mut out: Vec<CheckSpec> = Vec::new();
    for s in specs {
        if s.id == "all" {
            for id in all_checks(topology).into_iter().filter(|id| applies(id, h)) {
                if !out.iter().any(|o| o.id == id) {
                    out.push(CheckSpec { id: id.to_owned(), ..CheckSpec::default() });
                }
            }
        } else if !out.contains(s) {
            out.push(s.clone());
        }
    }
    out
}

/// Whether the constants meet the standing condition of a check: the ball
/// condition for the radius bounds, weak monotonicity for the bounded
/// density comparison and `κ > 0` for the two-boundary distance.
fn applies(id: &str, h: &Hypotheses) -> bool {
    let Some(lambda) = h.lambda else { return true };
    let pair = classify_pair(h.kappa, lambda);
    match id {
        "cut-bound" | "inradius" => pair.ball,
        "bounded-density" => pair.weakly_monotone,
        "two-boundary-distance" => h.kappa > 0.0,
        _ => true,
    }
}

fn all_checks(topology: Topology) -> Vec<&'static str> {
    if topology == Topology::PointSymmetric {
        return vec!["point-laplacian"];
    }
    let mut ids = vec![
        "riccati",
        "boundary-laplacian",
        "cut-bound",
        "bounded-density",
        "p-laplacian",
        "inradius",
        "volume-element",
        "volume-comparison",
    ];
    if topology == Topology::TwoEnded {
        ids.push("two-boundary-distance");
    }
    if matches!(topology, Topology::TwoEnded | Topology::BallApex) {
        ids.extend(["eigenvalue-bound", "radial-eigenvalue"]);
    }
    ids
}

fn exponent_id(id: &str, p: f64) -> String {
    format!("{id}[p={p}]")
}

/// Keep the worst sample and, when it differs, the one with the smallest
/// raw slack.
fn trim(mut r: ComparisonReport) -> ComparisonReport {
    let (Some(m), Some(at)) = (r.worst_margin, r.worst_at) else {
        r.samples.clear();
        return r;
    };
    let part = r.worst_part.clone();
    let worst = r.samples.iter().position(|s| s.at == at && s.part == part && (s.margin == m || m.is_nan()));
    let tightest = r
        .samples
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.margin.is_nan())
        .min_by(|(_, x), (_, y)| x.raw_slack().total_cmp(&y.raw_slack()))
        .map(|(i, _)| i);
    let mut keep: Vec<usize> = worst.into_iter().chain(tightest).collect();
    keep.sort_unstable();
    keep.dedup();
    r.samples = keep.into_iter().map(|i| r.samples[i].clone()).collect();
    r
}

struct Ctx<'a> {
    m: &'a WarpedManifold,
    h: &'a Hypotheses,
    run: &'a RunSettings,
    id: &'a str,
    parts: Option<&'a [String]>,
}

impl Ctx<'_> {
    fn entry<E: ToString>(&self, check_id: String, r: Result<ComparisonReport, E>) -> Entry {
        match r {
            Ok(rep) => {
                let rep = match self.parts {
                    Some(parts) => rep.restrict(parts),
                    None => rep,
                };
                let rep = if self.run.keep_samples { rep } else { trim(rep) };
                Entry::comparison(check_id, self.id, rep)
            }
            Err(e) => Entry::error(check_id, self.id, e),
        }
    }

    /// `[lo, hi]·min(τ, s(τ))`.
    fn default_pair(&self, lo: f64, hi: f64) -> Result<[f64; 2], String> {
        let tau = self.m.tau();
        let s = reparam_s(self.m, &self.h.dims, tau).map_err(|e| e.to_string())?;
        let r = tau.min(s);
        Ok([lo * r, hi * r])
    }

    fn run_check(&self, spec: &CheckSpec) -> Vec<Entry> {
        let (m, h, opts) = (self.m, self.h, &self.run.opts);
        let id = spec.id.clone();
        let exps = spec.p.clone().unwrap_or_else(|| DEFAULT_EXPONENTS.to_vec());
        match spec.id.as_str() {
            "point-laplacian" => vec![self.entry(id, check_point_laplacian(m, h, opts))],
            "riccati" => vec![self.entry(id, check_riccati(m, h, opts))],
            "boundary-laplacian" => vec![self.entry(id, check_boundary_laplacian(m, h, opts))],
            "cut-bound" => vec![self.entry(id, check_cut_bounds(m, h, opts))],
            "bounded-density" => vec![self.entry(id, check_bounded_density(m, h, opts))],
            "inradius" => vec![self.entry(id, check_inradius(m, h, opts))],
            "volume-element" => vec![self.entry(id, check_volume_elements(m, h, opts))],
            "two-boundary-distance" => vec![self.entry(id, check_two_boundary_distance(m, h, opts))],
            "p-laplacian" => {
                let psi = spec.psi.clone().unwrap_or_else(|| Expr::parse(DEFAULT_PSI).expect("literal expression"));
                exps.iter().map(|&p| self.entry(exponent_id(&id, p), check_p_laplacian(m, h, p, &psi, opts))).collect()
            }
            "volume-comparison" => {
                let radii = match spec.radii {
                    Some(r) => Ok(r),
                    None => self.default_pair(0.25, 0.5),
                };
                let r = radii.and_then(|[r, big_r]| check_volume_comparisons(m, h, r, big_r, opts).map_err(|e| e.to_string()));
                vec![self.entry(id, r)]
            }
            "eigenvalue-bound" => exps
                .iter()
                .map(|&p| self.entry(exponent_id(&id, p), check_eigen_theorems(m, h, p, self.run.coeff, opts)))
                .collect(),
            "domain-volume" => {
                let [a, b] = spec.band.unwrap_or([0.25 * m.tau(), 0.5 * m.tau()]);
                vec![self.entry(id, kasue_estimate(m, h, a, b).map(|k| k.to_report(h, opts)))]
            }
            "radial-eigenvalue" => {
                let alpha = 1.0 + h.dims.a();
                exps.iter()
                    .map(|&p| {
                        let cid = exponent_id(&id, p);
                        match radial_eigen_estimate(m, p, alpha) {
                            Ok(mut result) => {
                                if !self.run.keep_samples {
                                    result.profile.clear();
                                }
                                Entry {
                                    check_id: cid,
                                    instance_id: self.id.to_owned(),
                                    verdict: Verdict::Holds,
                                    worst_margin: None,
                                    detail: EntryDetail::Eigen { result },
                                }
                            }
                            Err(e) => Entry::error(cid, self.id, e),
                        }
                    })
                    .collect()
            }
            "splitting-model" => {
                let setup = spec.setup.as_ref().expect("validated before the run");
                vec![self.entry(id, check_splitting_model(&h.dims, setup, opts))]
            }
            other => vec![Entry::error(other.to_owned(), self.id, format!("unknown check id {other:?}"))],
        }
    }
}

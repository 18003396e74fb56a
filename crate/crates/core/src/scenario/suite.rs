//! Seeded families of random and equality instances.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::run::{evaluate_instance, params_dims, InstanceJob, RunSettings};
use super::schema::{CheckSpec, HypothesisPolicy, InstanceSpec, ParamSpec, RandomKind, CERTIFY_POINTS};
use super::{digest, map_instances, Entry, EntryDetail, InstanceRecord, RunReport, RunSource, ARTIFACT_VERSION};
use crate::comparison::{CheckOptions, Verdict};
use crate::geometry::{Expr, Extent, Fiber, Topology};
use crate::model::{barrier_c, classify_pair, sn_power, validate_params, ExtReal};
use crate::spectrum::{fd_eigenvalue_oracle, model_eigenvalue, OdeCoefficient, SpectrumError};

/// Relative agreement required between shooting and finite differences.
pub const AGREEMENT_TOL: f64 = 1e-4;

/// Cells of the coarse finite-difference mesh in the eigenvalue suite.
const AGREEMENT_CELLS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    RandomCollar,
    RandomBall,
    RandomTwoEnded,
    EqualityModels,
    EigenSuite,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::RandomCollar, Family::RandomBall, Family::RandomTwoEnded, Family::EqualityModels, Family::EigenSuite];

    pub fn id(self) -> &'static str {
        match self {
            Family::RandomCollar => "random-collar",
            Family::RandomBall => "random-ball",
            Family::RandomTwoEnded => "random-two-ended",
            Family::EqualityModels => "equality-models",
            Family::EigenSuite => "eigen-suite",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL.into_iter().find(|f| f.id() == s).ok_or_else(|| {
            let ids: Vec<&str> = Family::ALL.iter().map(|f| f.id()).collect();
            format!("unknown family {s:?}, expected one of {}", ids.join(", "))
        })
    }
}

/// The `(κ, λ)` pairs the equality family cycles through.
pub const EQUALITY_PAIRS: [(f64, f64); 3] = [(0.0, 1.0), (1.0, -1.0), (-1.0, 2.0)];

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// Coefficients of a random polynomial of degree at most `max_deg`, each in
/// `[-0.5, 0.5]`.
fn coefficients(rng: &mut ChaCha8Rng, max_deg: usize) -> Vec<f64> {
    let deg = rng.gen_range(0..=max_deg);
    (0..=deg).map(|_| round6(rng.gen_range(-0.5..=0.5))).collect()
}

/// `Σ c_k x^k` as an expression string.
fn poly(coeffs: &[f64], x: &str) -> String {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| match k {
            0 => format!("({c})"),
            1 => format!("({c})*{x}"),
            _ => format!("({c})*({x})^{k}"),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn expr(src: &str) -> Expr {
    Expr::parse(src).expect("generated expressions parse")
}

/// Random `(n, N, ε)`: mostly the generic regime, with `N = n` and `N = 1`
/// each drawn one time in five.
fn random_params(rng: &mut ChaCha8Rng) -> ParamSpec {
    let n = rng.gen_range(2..=5usize);
    let nf = n as f64;
    match rng.gen_range(0..10) {
        0 | 1 => ParamSpec { n, big_n: ExtReal::Finite(nf), eps: 0.0 },
        2 | 3 => ParamSpec { n, big_n: ExtReal::Finite(1.0), eps: 0.0 },
        _ => {
            let (big_n, eps0) = if rng.gen_bool(0.3) {
                (ExtReal::PosInf, 1.0)
            } else {
                let x = round6(nf + rng.gen_range(0.5..10.0));
                (ExtReal::Finite(x), (x - 1.0) / (x - nf))
            };
            let eps = round6(rng.gen_range(-0.9..0.9) * eps0.sqrt());
            ParamSpec { n, big_n, eps }
        }
    }
}

/// A random profile instance. `w = exp(q₁)` and `φ = q₂` with random
/// polynomials in `t/T`; balls use `w = sin(T - t)·exp(q₁)` and `φ = q₂`
/// with polynomials in `((T - t)/T)²`, so the apex is smooth. The density
/// is constant when `N = n`.
pub(crate) fn random_instance(rng: &mut ChaCha8Rng, kind: RandomKind, params: &ParamSpec) -> InstanceSpec {
    let constant_density = params.big_n == ExtReal::Finite(params.n as f64);
    let (t_max, x, deg, topology) = match kind {
        RandomKind::Ball => {
            let t = round6(rng.gen_range(0.5..2.5));
            (t, format!("((({t}) - t)/({t}))^2"), 2, Topology::BallApex)
        }
        RandomKind::Collar | RandomKind::TwoEnded => {
            let t = round6(rng.gen_range(0.5..2.0));
            let top = if kind == RandomKind::Collar { Topology::Collar } else { Topology::TwoEnded };
            (t, format!("(t/({t}))"), 4, top)
        }
    };
    let q1 = coefficients(rng, deg);
    let mut q2 = coefficients(rng, deg);
    if constant_density {
        q2.truncate(1);
    }
    let (w, fiber) = match kind {
        RandomKind::Ball => (format!("sin(({t_max}) - t)*exp({})", poly(&q1, &x)), Fiber::Sphere { curvature: 1.0 }),
        _ => (format!("exp({})", poly(&q1, &x)), Fiber::Torus { volume: 1.0 }),
    };
    InstanceSpec::Profile { w: expr(&w), phi: expr(&poly(&q2, &x)), t_max, topology, fiber }
}

fn exponent_check(id: &str) -> CheckSpec {
    CheckSpec { id: id.to_owned(), p: Some(vec![1.5, 2.0, 3.0]), ..CheckSpec::default() }
}

fn plain(id: &str) -> CheckSpec {
    CheckSpec { id: id.to_owned(), ..CheckSpec::default() }
}

/// Checks every certified instance must pass.
fn soundness_checks() -> Vec<CheckSpec> {
    let mut v: Vec<CheckSpec> = ["riccati", "boundary-laplacian", "cut-bound", "bounded-density", "volume-element", "volume-comparison"]
        .into_iter()
        .map(plain)
        .collect();
    v.push(exponent_check("p-laplacian"));
    v
}

fn family_checks(kind: RandomKind) -> Vec<CheckSpec> {
    let mut v = soundness_checks();
    match kind {
        RandomKind::Collar => {}
        RandomKind::Ball => {
            v.push(plain("inradius"));
            v.push(exponent_check("eigenvalue-bound"));
        }
        RandomKind::TwoEnded => {
            v.push(plain("inradius"));
            v.push(plain("two-boundary-distance"));
            v.push(exponent_check("eigenvalue-bound"));
        }
    }
    v
}

/// Checks that hold with equality on an equality metric. The `t`-forms of
/// the volume element bound rescale `(κ, λ)` by the density bound and stay
/// strict, so only the `s`-forms are kept.
fn equality_checks() -> Vec<CheckSpec> {
    let mut v: Vec<CheckSpec> = ["riccati", "boundary-laplacian"].into_iter().map(plain).collect();
    v.push(CheckSpec {
        id: "volume-element".to_owned(),
        parts: Some(vec!["ratio-s".to_owned(), "absolute-s".to_owned()]),
        ..CheckSpec::default()
    });
    v
}

fn instance_id(family: Family, i: usize) -> String {
    format!("{}-{i:05}", family.id())
}

/// Run a family with default options and the default ODE coefficient.
pub fn run_suite(family: Family, count: usize, seed: u64) -> RunReport {
    run_suite_with(family, count, seed, &CheckOptions::default(), OdeCoefficient::default())
}

/// Generate `count` instances of `family` from `seed`, run the family's
/// checks on each and aggregate the worst margins per check.
pub fn run_suite_with(family: Family, count: usize, seed: u64, opts: &CheckOptions, coeff: OdeCoefficient) -> RunReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let run = RunSettings { opts: *opts, coeff, keep_samples: false };
    let (records, entries): (Vec<InstanceRecord>, Vec<Vec<Entry>>) = match family {
        Family::EigenSuite => {
            let jobs: Vec<EigenJob> = (0..count).map(|i| eigen_job(&mut rng, instance_id(family, i), i)).collect();
            map_instances(&jobs, eigen_agreement).into_iter().unzip()
        }
        _ => {
            let jobs: Vec<InstanceJob> = (0..count).map(|i| geometric_job(&mut rng, family, instance_id(family, i), i)).collect();
            map_instances(&jobs, |job| match evaluate_instance(job, &run) {
                Ok((record, entries)) => (record, entries),
                Err(e) => {
                    let record = InstanceRecord {
                        instance_id: job.instance_id.clone(),
                        params: job.params,
                        instance: job.instance.clone(),
                        hypotheses: None,
                    };
                    (record, vec![Entry::error("instance".to_owned(), &job.instance_id, e)])
                }
            })
            .into_iter()
            .unzip()
        }
    };
    let opts_json = serde_json::to_string(opts).expect("options serialize");
    let input_digest = digest(&[
        b"suite",
        family.id().as_bytes(),
        count.to_string().as_bytes(),
        seed.to_string().as_bytes(),
        opts_json.as_bytes(),
        coeff.id().as_bytes(),
        ARTIFACT_VERSION.as_bytes(),
    ]);
    RunReport::assemble(
        input_digest,
        seed,
        RunSource::Suite { family, count },
        *opts,
        coeff,
        records,
        entries.into_iter().flatten().collect(),
    )
}

fn geometric_job(rng: &mut ChaCha8Rng, family: Family, instance_id: String, i: usize) -> InstanceJob {
    let (params, instance, checks) = match family {
        Family::RandomCollar | Family::RandomBall | Family::RandomTwoEnded => {
            let kind = match family {
                Family::RandomCollar => RandomKind::Collar,
                Family::RandomBall => RandomKind::Ball,
                _ => RandomKind::TwoEnded,
            };
            let params = random_params(rng);
            let instance = random_instance(rng, kind, &params);
            (params, instance, family_checks(kind))
        }
        Family::EqualityModels => {
            let params = random_params(rng);
            let (kappa, lambda) = EQUALITY_PAIRS[i % EQUALITY_PAIRS.len()];
            let density = (params.big_n == ExtReal::Finite(1.0)).then(|| expr(&poly(&coefficients(rng, 2), "t")));
            let instance = InstanceSpec::EqualityModel {
                kappa,
                lambda,
                f0: round6(rng.gen_range(-0.5..0.5)),
                extent: Extent::SFraction { fraction: round6(rng.gen_range(0.3..0.9)) },
                density,
                fiber: Fiber::Torus { volume: 1.0 },
                mirror: false,
            };
            (params, instance, equality_checks())
        }
        Family::EigenSuite => unreachable!("handled by the eigenvalue jobs"),
    };
    let dims = params_dims(&params).expect("generated parameters are admissible");
    InstanceJob {
        instance_id,
        params,
        dims,
        instance,
        policy: HypothesisPolicy::default(),
        checks,
        certify_points: CERTIFY_POINTS,
    }
}

struct EigenJob {
    instance_id: String,
    params: ParamSpec,
    p: f64,
    k: f64,
    kappa: f64,
    lambda: f64,
    d: f64,
}

/// A random monotone pair with a length below its barrier, cycling
/// `p ∈ {2, 1.5, 3}`. The drift coefficient is `c⁻¹` of random parameters.
fn eigen_job(rng: &mut ChaCha8Rng, instance_id: String, i: usize) -> EigenJob {
    let p = [2.0, 1.5, 3.0][i % 3];
    let params = random_params(rng);
    let dims = validate_params(params.n, params.big_n, params.eps).expect("generated parameters are admissible");
    let (kappa, lambda, d) = loop {
        let kappa = round6(rng.gen_range(-1.5..1.5));
        let lambda = if kappa < 0.0 && rng.gen_bool(0.2) { (-kappa).sqrt() } else { round6(rng.gen_range(0.0..2.0)) };
        if !classify_pair(kappa, lambda).monotone {
            continue;
        }
        let d = match barrier_c(kappa, lambda).finite() {
            Some(c) => c * rng.gen_range(0.2..0.95),
            None => rng.gen_range(0.3..3.0),
        };
        break (kappa, lambda, round6(d));
    };
    EigenJob { instance_id, params, p, k: OdeCoefficient::Cinv.exponent(&dims), kappa, lambda, d }
}

fn eigen_agreement(job: &EigenJob) -> (InstanceRecord, Vec<Entry>) {
    let record = InstanceRecord {
        instance_id: job.instance_id.clone(),
        params: job.params,
        instance: InstanceSpec::ModelCollar { kappa: job.kappa, lambda: job.lambda, t: job.d, fiber: Fiber::Torus { volume: 1.0 } },
        hypotheses: None,
    };
    let check_id = "eigen-agreement".to_owned();
    let (c, kappa, lambda) = (1.0 / job.k, job.kappa, job.lambda);
    let solved = model_eigenvalue(job.p, job.k, kappa, lambda, job.d)
        .and_then(|s| Ok::<_, SpectrumError>((s.value, fd_eigenvalue_oracle(job.p, &|x| sn_power(c, kappa, lambda, x), job.d, AGREEMENT_CELLS)?.value)));
    let entry = match solved {
        Ok((shooting, fd)) => {
            let rel = (shooting - fd).abs() / shooting.abs();
            let margin = AGREEMENT_TOL - rel;
            Entry {
                check_id,
                instance_id: job.instance_id.clone(),
                verdict: if margin >= 0.0 { Verdict::Holds } else { Verdict::Violated },
                worst_margin: Some(margin),
                detail: EntryDetail::Agreement {
                    p: job.p,
                    k: job.k,
                    kappa,
                    lambda,
                    d: job.d,
                    shooting,
                    finite_difference: fd,
                    relative_difference: rel,
                    tolerance: AGREEMENT_TOL,
                },
            }
        }
        Err(e) => Entry::error(check_id, &job.instance_id, e),
    };
    (record, vec![entry])
}

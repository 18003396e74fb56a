//! Acceptance criteria. Each criterion prints one `PASS` or `FAIL` line
//! with its measured worst value, its pinned tolerance and its wall time;
//! the process exits nonzero when any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use warpcheck::comparison::*;
use warpcheck::geometry::*;
use warpcheck::model::*;
use warpcheck::numeric::Jet;
use warpcheck::scenario::{run_suite, to_json, EntryDetail, Family, RunReport};
use warpcheck::spectrum::*;

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Self { ok, detail: detail.into() }
    }
}

/// Tracks the worst value seen against a pinned tolerance.
struct Worst {
    name: &'static str,
    value: f64,
    tol: f64,
    failures: Vec<String>,
}

impl Worst {
    fn new(name: &'static str, tol: f64) -> Self {
        Self { name, value: 0.0, tol, failures: Vec::new() }
    }

    /// Record an error magnitude; `context` is kept when it exceeds `tol`.
    fn push(&mut self, err: f64, context: impl FnOnce() -> String) {
        if !(err <= self.tol) {
            if self.failures.len() < 3 {
                self.failures.push(context());
            }
        }
        if !(err <= self.value) {
            self.value = err;
        }
    }

    fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn summary(&self) -> String {
        let mut s = format!("{} {:.2e} (tol {:.0e})", self.name, self.value, self.tol);
        for f in &self.failures {
            s.push_str(&format!("; {f}"));
        }
        s
    }
}

fn combine(parts: &[&Worst], extra: &[(bool, String)], elapsed: Duration, budget: Duration) -> Outcome {
    let mut detail: Vec<String> = parts.iter().map(|w| w.summary()).collect();
    detail.extend(extra.iter().map(|(_, s)| s.clone()));
    let in_time = elapsed <= budget;
    detail.push(format!("{elapsed:.1?} of {budget:?}"));
    let ok = parts.iter().all(|w| w.ok()) && extra.iter().all(|(ok, _)| *ok) && in_time;
    Outcome::new(ok, detail.join(", "))
}

fn dims(n: usize, big_n: ExtReal, eps: f64) -> Dims {
    validate_params(n, big_n, eps).unwrap()
}

fn eq_dims(n: usize) -> Dims {
    dims(n, ExtReal::Finite(n as f64), 0.0)
}

fn torus() -> Fiber {
    Fiber::Torus { volume: 1.0 }
}

fn certified(m: &WarpedManifold, d: &Dims) -> Hypotheses {
    certify_hypotheses(m, d, 512).unwrap().hypotheses()
}

/// `𝔰_{κ,λ}` written out in closed form on jets.
fn sn_jet(kappa: f64, lambda: f64, s: Jet) -> Jet {
    if kappa > 0.0 {
        let r = kappa.sqrt();
        (s * r).cos() - (s * r).sin() * (lambda / r)
    } else if kappa < 0.0 {
        let r = (-kappa).sqrt();
        (s * r).cosh() - (s * r).sinh() * (lambda / r)
    } else {
        Jet::constant(1.0) - s * lambda
    }
}

/// `(H, H')` with `H = -c⁻¹ 𝔰'/𝔰` by forward differentiation.
fn h_oracle(c: f64, kappa: f64, lambda: f64, s: f64) -> (f64, f64) {
    let u = sn_jet(kappa, lambda, Jet::var(s));
    let h = -u.d1 / u.v / c;
    let dh = -(u.d2 / u.v - (u.d1 / u.v).powi(2)) / c;
    (h, dh)
}

/// First positive zero of `𝔰_{κ,λ}` by scanning and bisection.
fn first_zero(kappa: f64, lambda: f64, limit: f64) -> Option<f64> {
    let f = |s: f64| sn_jet(kappa, lambda, Jet::constant(s)).v;
    let step = 1e-3;
    let mut lo = 0.0;
    while lo < limit {
        let hi = lo + step;
        if f(hi) <= 0.0 {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if f(mid) > 0.0 {
                    a = mid
                } else {
                    b = mid
                }
            }
            return Some(0.5 * (a + b));
        }
        lo = hi;
    }
    None
}

/// Riccati identity and closed form of `H_{κ,λ}`, and the barrier `C_{κ,λ}`
/// against an independent root search.
fn riccati() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut residual = Worst::new("riccati residual", 1e-9);
    let mut closed = Worst::new("closed form", 1e-9);
    let mut count = 0;
    while count < 1000 {
        let c: f64 = rng.gen_range(0.05..2.0);
        let kappa: f64 = rng.gen_range(-2.0..2.0);
        let lambda: f64 = rng.gen_range(-2.0..2.0);
        let s = match first_zero(kappa, lambda, 50.0) {
            Some(cb) => rng.gen_range(0.0..0.85 * cb),
            None => rng.gen_range(0.0..3.0),
        };
        let (h, dh) = h_oracle(c, kappa, lambda, s);
        let lib_h = h_boundary(c, kappa, lambda, s).unwrap();
        let lib_dh = h_boundary_deriv(c, kappa, lambda, s).unwrap();
        let ctx = || format!("c={c} κ={kappa} λ={lambda} s={s}");
        residual.push((dh - c * h * h - kappa / c).abs() / dh.abs().max(1.0), ctx);
        closed.push((lib_h - h).abs() / h.abs().max(1.0), ctx);
        closed.push((lib_dh - dh).abs() / dh.abs().max(1.0), ctx);
        count += 1;
    }
    let mut barrier = Worst::new("barrier C", 1e-9);
    let mut pairs = 0;
    while pairs < 100 {
        let kappa: f64 = rng.gen_range(-2.0..2.0);
        let lambda: f64 = rng.gen_range(-2.0..2.0);
        if !classify_pair(kappa, lambda).ball {
            continue;
        }
        let oracle = first_zero(kappa, lambda, 1e3).expect("ball pairs have a barrier");
        let ctx = || format!("κ={kappa} λ={lambda}");
        barrier.push((barrier_c(kappa, lambda).as_f64() - oracle).abs(), ctx);
        barrier.push((barrier_c_bisect(kappa, lambda).as_f64() - oracle).abs(), ctx);
        pairs += 1;
    }
    combine(&[&residual, &closed, &barrier], &[], start.elapsed(), Duration::from_secs(5))
}

/// `Δ_fρ = H_{κ,λ}(s) e^{-af}` on equality metrics in every regime, and the
/// generic density `f = f₀ - εkc⁻¹ log 𝔰(s)`.
fn equality_laplacian() -> Outcome {
    let start = Instant::now();
    let mut lap = Worst::new("laplacian", 1e-6);
    let mut density = Worst::new("density", 1e-8);
    let pairs = [(0.0, 1.0), (1.0, -1.0), (-1.0, 2.0)];
    let mut cases: Vec<(Regime, Dims, Option<Expr>)> = Vec::new();
    for n in [2usize, 3, 4] {
        for eps in [-0.5, 0.0, 0.5] {
            cases.push((Regime::DimensionEqual, dims(n, ExtReal::Finite(n as f64), eps), None));
        }
        let nf = n as f64;
        for big_n in [ExtReal::Finite(nf + 2.0), ExtReal::PosInf, ExtReal::Finite(-2.0)] {
            let eps0 = match big_n {
                ExtReal::Finite(x) => (x - 1.0) / (x - nf),
                _ => 1.0,
            };
            for frac in [-0.8, 0.0, 0.8] {
                cases.push((Regime::Generic, dims(n, big_n, frac * eps0.sqrt()), None));
            }
        }
        let rho = Expr::parse("0.2*t - 0.1*t^2").unwrap();
        cases.push((Regime::One, dims(n, ExtReal::Finite(1.0), 0.0), Some(rho)));
    }
    let f0 = 0.3;
    for (regime, d, rho) in &cases {
        for &(kappa, lambda) in &pairs {
            let extent = if classify_pair(kappa, lambda).ball { Extent::SFraction { fraction: 0.9 } } else { Extent::Length { t: 2.0 } };
            let eq = build_equality_model(*regime, d, kappa, lambda, torus(), f0, extent, rho.clone()).unwrap();
            let m = &eq.manifold;
            let view = m.view(Component::Inner).unwrap();
            let a = d.a();
            let big_k = match d.big_n {
                ExtReal::Finite(x) => (x - d.n as f64) / (x - 1.0),
                _ => 1.0,
            };
            for i in 1..=1000 {
                let t = eq.t_end * i as f64 / 1001.0;
                let s = reparam_s(m, d, t).unwrap();
                let f = view.jets(t).1.v;
                let (h, _) = h_oracle(d.c, kappa, lambda, s);
                let ctx = || format!("{regime:?} n={} N={:?} ε={} κ={kappa} λ={lambda} t={t}", d.n, d.big_n, d.eps);
                lap.push((laplacian_distance(m, t).unwrap() - h * (-a * f).exp()).abs(), ctx);
                if *regime == Regime::Generic {
                    let sn = sn_jet(kappa, lambda, Jet::constant(s)).v;
                    density.push((f - (f0 - d.eps * big_k / d.c * sn.ln())).abs(), ctx);
                }
            }
        }
    }
    combine(&[&lap, &density], &[], start.elapsed(), Duration::from_secs(30))
}

/// Every comparison entry of a report, with its retained samples.
fn comparison_reports(r: &RunReport) -> impl Iterator<Item = (&str, &str, &ComparisonReport)> {
    r.entries.iter().filter_map(|e| match &e.detail {
        EntryDetail::Comparison { report } => Some((e.check_id.as_str(), e.instance_id.as_str(), report)),
        _ => None,
    })
}

/// No violation on 200 random certified collars, and every sample keeps a
/// raw slack above `-1e-7`.
fn random_collars() -> Outcome {
    let start = Instant::now();
    let r = run_suite(Family::RandomCollar, 200, 42);
    let mut slack = Worst::new("negative slack", 1e-7);
    for (check, inst, rep) in comparison_reports(&r) {
        for s in &rep.samples {
            slack.push((-s.raw_slack()).max(0.0), || format!("{check} on {inst} at {}", s.at));
        }
    }
    let counts = (r.violated == 0 && r.errors == 0, format!("violated {} errors {} over {} entries", r.violated, r.errors, r.entries.len()));
    combine(&[&slack], &[counts], start.elapsed(), Duration::from_secs(300))
}

/// Model balls reach `τ_f = InRad = C`, truncations keep a slack of at least
/// a tenth of the truncation, and the mirrored `(1, -1)` model has
/// `d(∂M₁, ∂M₂) = π/2`.
fn cut_and_inradius() -> Outcome {
    let start = Instant::now();
    let opts = CheckOptions::default();
    let mut attained = Worst::new("model ball", 1e-6);
    let mut shortfall = Worst::new("truncation shortfall", 0.0);
    for n in [2usize, 3, 4] {
        let d = eq_dims(n);
        for (kappa, lambda) in [(1.0, 0.0), (0.0, 1.0), (1.0, 0.5), (1.0, -1.0), (-1.0, 2.0)] {
            let cb = barrier_c(kappa, lambda).as_f64();
            let ball = build_model_ball(n, kappa, lambda).unwrap();
            let ctx = || format!("n={n} κ={kappa} λ={lambda}");
            attained.push((tau_f(&ball, &d, Component::Inner).unwrap() - cb).abs(), ctx);
            attained.push((inradius_f(&ball, &d).unwrap() - cb).abs(), ctx);
            attained.push((inradius(&ball).unwrap() - cb).abs(), ctx);
            for frac in [0.05, 0.2, 0.5] {
                let cut = frac * cb;
                let collar = build_model_collar(n, kappa, lambda, cb - cut, torus()).unwrap();
                let rep = check_cut_bounds(&collar, &certified(&collar, &d), &opts).unwrap();
                let least = rep.samples.iter().map(|s| s.raw_slack()).fold(f64::INFINITY, f64::min);
                shortfall.push((0.1 * cut - least).max(0.0), || format!("n={n} κ={kappa} λ={lambda} cut={cut}: slack {least}"));
            }
        }
    }
    let mut distance = Worst::new("two-ended distance", 1e-6);
    for n in [2usize, 3] {
        let d = eq_dims(n);
        let m = build_model_cylinder(n, 1.0, -1.0, torus()).unwrap();
        distance.push((m.t_max() - PI / 2.0).abs(), || format!("n={n}: length {}", m.t_max()));
        let rep = check_two_boundary_distance(&m, &certified(&m, &d), &opts).unwrap();
        for s in rep.part("distance") {
            distance.push(s.raw_slack().abs(), || format!("n={n}: slack {}", s.raw_slack()));
        }
    }
    combine(&[&attained, &shortfall, &distance], &[], start.elapsed(), Duration::from_secs(60))
}

/// Equality in the volume comparisons on cylinders for radii up to `τ_f`,
/// and in the volume element bound on `N = n` model balls.
fn volume_equality() -> Outcome {
    let start = Instant::now();
    let opts = CheckOptions::default();
    let mut cylinder = Worst::new("cylinder", 1e-9);
    let mut element = Worst::new("model ball", opts.tol);
    for n in [2usize, 3, 4] {
        for (big_n, eps, phi) in [(ExtReal::Finite(n as f64), 0.0, "0"), (ExtReal::Finite(n as f64), 0.0, "0.4"), (ExtReal::PosInf, 0.3, "0")] {
            let d = dims(n, big_n, eps);
            for (len, top) in [(2.0, Topology::TwoEnded), (1.5, Topology::Collar)] {
                let profile = RadialProfile::new(Curve::parse("1").unwrap(), Curve::parse(phi).unwrap(), len).unwrap();
                let m = WarpedManifold::new(n, torus(), profile, top).unwrap();
                let h = certified(&m, &d);
                let tf = tau_f(&m, &d, Component::Inner).unwrap();
                for (r, big_r) in [(0.2 * tf, 0.5 * tf), (0.3 * tf, tf), (0.5 * tf, 0.5 * tf)] {
                    let rep = check_volume_comparisons(&m, &h, r, big_r, &opts).unwrap();
                    for s in &rep.samples {
                        cylinder.push(s.raw_slack().abs(), || format!("n={n} N={big_n:?} φ={phi} {top:?} r={r} R={big_r}: {s:?}"));
                    }
                }
            }
        }
        let d = eq_dims(n);
        for (kappa, lambda) in [(0.0, 1.0), (1.0, 0.0), (1.0, -1.0), (-1.0, 2.0)] {
            let ball = build_model_ball(n, kappa, lambda).unwrap();
            let rep = check_volume_elements(&ball, &certified(&ball, &d), &opts).unwrap();
            let ctx = || format!("n={n} κ={kappa} λ={lambda}: {:?}", rep.verdict);
            element.push(if rep.verdict == Verdict::Equality { 0.0 } else { f64::INFINITY }, ctx);
            for s in &rep.samples {
                element.push(s.raw_slack().abs(), || format!("n={n} κ={kappa} λ={lambda} at {}", s.at));
            }
        }
    }
    combine(&[&cylinder, &element], &[], start.elapsed(), Duration::from_secs(60))
}

fn random_monotone(rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
    loop {
        let kappa: f64 = rng.gen_range(-1.5..1.5);
        let lambda = rng.gen_range(0.0..2.0);
        if !classify_pair(kappa, lambda).monotone {
            continue;
        }
        let d = match barrier_c(kappa, lambda).finite() {
            Some(c) => c * rng.gen_range(0.2..1.0),
            None => rng.gen_range(0.3..3.0),
        };
        return (kappa, lambda, d);
    }
}

/// Model eigenvalues, shooting against finite differences, the model bound
/// on flat model balls, the constant and exponential bounds, and the bound
/// ladder on certified compact instances.
fn eigenvalues() -> Outcome {
    let start = Instant::now();
    let mut flat = Worst::new("flat interval", 1e-6);
    for k in [1.0, 2.0, 3.5] {
        let v = model_eigenvalue(2.0, k, 0.0, 0.0, 1.0).unwrap().value;
        flat.push((v - PI * PI / 4.0).abs(), || format!("k={k}: {v}"));
    }

    let mut agreement = Worst::new("shooting vs fd", 1e-4);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (p, count) in [(2.0, 20), (1.5, 10), (3.0, 10)] {
        for _ in 0..count {
            let (kappa, lambda, d) = random_monotone(&mut rng);
            let k: f64 = rng.gen_range(1.0..4.0);
            let shot = model_eigenvalue(p, k, kappa, lambda, d).unwrap().value;
            let fd = fd_eigenvalue_oracle(p, &|s| sn_power(1.0 / k, kappa, lambda, s), d, 1000).unwrap().value;
            agreement.push((shot - fd).abs() / shot, || format!("p={p} k={k} κ={kappa} λ={lambda} D={d}: {shot} vs {fd}"));
        }
    }

    let mut model = Worst::new("flat model ball", 1e-4);
    for n in [2usize, 3, 4] {
        let ball = build_model_ball(n, 0.0, 1.0).unwrap();
        let d = eq_dims(n);
        let rep = check_eigen_theorems(&ball, &certified(&ball, &d), 2.0, OdeCoefficient::default(), &CheckOptions::default()).unwrap();
        for s in rep.part("model") {
            model.push((s.lhs - s.rhs).abs() / s.rhs, || format!("n={n}: {} vs {}", s.lhs, s.rhs));
        }
    }

    let mut coincide = Worst::new("constant vs exponential", 1e-12);
    for _ in 0..50 {
        let n = rng.gen_range(2..=5usize);
        let d = dims(n, ExtReal::PosInf, rng.gen_range(-0.9..0.9));
        let kappa: f64 = -rng.gen_range(0.1..3.0);
        let h = Hypotheses { dims: d, kappa, lambda: Some((-kappa).sqrt()), delta: rng.gen_range(0.0..1.0) };
        let p = rng.gen_range(1.2..4.0);
        let a = constant_bound(&h, p, ExtReal::PosInf).unwrap().value.unwrap();
        let b = exponential_bound(&h, p).unwrap().value.unwrap();
        coincide.push((a - b).abs() / b, || format!("κ={kappa} p={p}: {a} vs {b}"));
    }

    let mut ladder = Worst::new("ladder shortfall", 1e-6);
    let mut violated = 0;
    for family in [Family::RandomBall, Family::RandomTwoEnded] {
        let r = run_suite(family, 40, 3);
        for (check, inst, rep) in comparison_reports(&r).filter(|(c, _, _)| c.starts_with("eigenvalue-bound")) {
            violated += usize::from(rep.verdict == Verdict::Violated);
            for s in &rep.samples {
                ladder.push((-s.raw_slack()).max(0.0), || format!("{check} on {inst}: {s:?}"));
            }
        }
    }
    let counts = (violated == 0, format!("violated ladders {violated}"));
    combine(&[&flat, &agreement, &model, &coincide, &ladder], &[counts], start.elapsed(), Duration::from_secs(180))
}

/// Suites are byte-identical across runs.
fn determinism() -> Outcome {
    let start = Instant::now();
    let mut differing = Vec::new();
    for (family, count, seed) in [
        (Family::RandomCollar, 200, 42),
        (Family::RandomBall, 10, 42),
        (Family::RandomTwoEnded, 10, 42),
        (Family::EqualityModels, 30, 7),
        (Family::EigenSuite, 20, 1),
    ] {
        if to_json(&run_suite(family, count, seed)) != to_json(&run_suite(family, count, seed)) {
            differing.push(family.id());
        }
    }
    let same = (differing.is_empty(), format!("differing families: {differing:?}"));
    combine(&[], &[same], start.elapsed(), Duration::from_secs(300))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("riccati identity and barriers", riccati),
        ("equality metrics reach the laplacian bound", equality_laplacian),
        ("random certified collars", random_collars),
        ("cut locus and inradius sharpness", cut_and_inradius),
        ("volume equality cases", volume_equality),
        ("eigenvalue bounds", eigenvalues),
        ("suite determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        failed += usize::from(!out.ok);
        println!("{} {}: {name}: {}", if out.ok { "PASS" } else { "FAIL" }, i + 1, out.detail);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

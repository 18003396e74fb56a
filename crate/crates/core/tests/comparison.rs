use warpcheck::comparison::*;
use warpcheck::geometry::*;
use warpcheck::model::*;

fn dims(n: usize, big_n: ExtReal, eps: f64) -> Dims {
    validate_params(n, big_n, eps).unwrap()
}

fn eq_dims(n: usize) -> Dims {
    dims(n, ExtReal::Finite(n as f64), 0.0)
}

fn manifold(n: usize, w: Curve, phi: Curve, t: f64, fiber: Fiber, top: Topology) -> WarpedManifold {
    WarpedManifold::new(n, fiber, RadialProfile::new(w, phi, t).unwrap(), top).unwrap()
}

fn torus() -> Fiber {
    Fiber::Torus { volume: 1.0 }
}

fn cylinder(n: usize, t: f64) -> WarpedManifold {
    manifold(n, Curve::constant(1.0), Curve::constant(0.0), t, torus(), Topology::Collar)
}

fn opts() -> CheckOptions {
    CheckOptions::default()
}

fn certified(m: &WarpedManifold, d: &Dims) -> Hypotheses {
    certify_hypotheses(m, d, 512).unwrap().hypotheses()
}

#[test]
fn point_laplacian_euclidean_equality() {
    let d = dims(3, ExtReal::Finite(1.0), 0.0);
    let m = manifold(3, Curve::parse("t").unwrap(), Curve::constant(0.0), 2.0, Fiber::Sphere { curvature: 1.0 }, Topology::PointSymmetric);
    let h = certified(&m, &d);
    assert_eq!(h.kappa, 0.0);
    let r = check_point_laplacian(&m, &h, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality, "{:?}", r.worst_margin);
}

#[test]
fn point_laplacian_sphere_equality() {
    let d = eq_dims(3);
    let m = manifold(3, Curve::parse("sin(t)").unwrap(), Curve::constant(0.0), 3.0, Fiber::Sphere { curvature: 1.0 }, Topology::PointSymmetric);
    let h = certified(&m, &d);
    assert!((h.kappa - 1.0).abs() < 1e-12);
    let r = check_point_laplacian(&m, &h, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality, "{:?}", r.worst_margin);
}

#[test]
fn point_laplacian_hyperbolic_against_weaker_kappa() {
    let d = eq_dims(3);
    let m = manifold(3, Curve::parse("sinh(t)").unwrap(), Curve::constant(0.0), 2.0, Fiber::Sphere { curvature: 1.0 }, Topology::PointSymmetric);
    let cert = certify_hypotheses(&m, &d, 512).unwrap();
    let h = cert.weaken(Some(-1.1), None, None).unwrap();
    let r = check_point_laplacian(&m, &h, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    assert!(r.worst_margin.unwrap() > 0.0);
}

#[test]
fn riccati_cylinder_and_ball() {
    let d = dims(3, ExtReal::PosInf, 0.2);
    let m = cylinder(3, 1.0);
    let r = check_riccati(&m, &certified(&m, &d), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality);

    let d = eq_dims(3);
    let ball = build_model_ball(3, 1.0, 0.5).unwrap();
    let r = check_riccati(&ball, &certified(&ball, &d), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality, "{:?} at {:?}", r.worst_margin, r.worst_at);
}

#[test]
fn riccati_random_profile() {
    let d = dims(4, ExtReal::Finite(7.0), 0.4);
    let m = manifold(
        4,
        Curve::parse("exp(0.3*t - 0.2*t^2 + 0.1*t^3)").unwrap(),
        Curve::parse("0.4*t - 0.3*t^2").unwrap(),
        1.5,
        torus(),
        Topology::Collar,
    );
    let r = check_riccati(&m, &certified(&m, &d), &opts()).unwrap();
    assert!(r.worst_margin.unwrap() >= -1e-7);
    assert_ne!(r.verdict, Verdict::Violated);
}

#[test]
fn riccati_margin_vanishes_for_n_one() {
    let d = dims(3, ExtReal::Finite(1.0), 0.0);
    let m = manifold(3, Curve::parse("1 + t^2").unwrap(), Curve::parse("sin(t)").unwrap(), 1.0, torus(), Topology::Collar);
    let r = check_riccati(&m, &certified(&m, &d), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality, "{:?}", r.worst_margin);
}

#[test]
fn boundary_laplacian_equality_model_n_one() {
    let d = dims(3, ExtReal::Finite(1.0), 0.0);
    let eq = build_equality_model(Regime::One, &d, 1.0, 0.5, torus(), 0.0, Extent::SFraction { fraction: 0.9 }, Some(Expr::parse("0.3*sin(2*t)").unwrap()))
        .unwrap();
    let h = certified(&eq.manifold, &d);
    let r = check_boundary_laplacian(&eq.manifold, &h, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality, "{:?} at {:?}", r.worst_margin, r.worst_at);
    assert!(r.worst_margin.unwrap().abs() <= 1e-6);
    assert!(r.equality_propagates(Some("laplacian")));
}

#[test]
fn boundary_laplacian_equality_model_generic() {
    let d = dims(3, ExtReal::Finite(5.0), 0.5);
    let eq = build_equality_model(Regime::Generic, &d, 1.0, 0.2, torus(), 0.1, Extent::SFraction { fraction: 0.95 }, None).unwrap();
    let h = certified(&eq.manifold, &d);
    let r = check_boundary_laplacian(&eq.manifold, &h, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality, "{:?} at {:?}", r.worst_margin, r.worst_at);
}

#[test]
fn boundary_laplacian_cylinder() {
    let d = dims(3, ExtReal::PosInf, 0.0);
    let m = cylinder(3, 2.0);
    let cert = certify_hypotheses(&m, &d, 512).unwrap();
    let r = check_boundary_laplacian(&m, &cert.hypotheses(), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality);

    let h = cert.weaken(None, Some(-0.5), None).unwrap();
    let r = check_boundary_laplacian(&m, &h, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    // Near t = 0 the gap is -H_{0,-0.5}(0) = 0.5 c⁻¹.
    let first = r.part("laplacian").next().unwrap();
    assert!((first.margin - 0.5 * d.cinv()).abs() < 1e-3, "{}", first.margin);
}

#[test]
fn g_monotone_on_random_profile() {
    let d = dims(3, ExtReal::PosInf, 0.3);
    let m = manifold(3, Curve::parse("exp(-0.4*t + 0.2*t^2)").unwrap(), Curve::parse("0.3*t^2 - 0.1*t").unwrap(), 1.2, torus(), Topology::Collar);
    let r = check_boundary_laplacian(&m, &certified(&m, &d), &opts()).unwrap();
    assert_ne!(r.verdict, Verdict::Violated);
    assert!(r.part("g-monotone").all(|s| s.margin >= -1e-7));
}

#[test]
fn cut_bounds() {
    let d = eq_dims(3);
    let ball = build_model_ball(3, 1.0, 0.5).unwrap();
    let r = check_cut_bounds(&ball, &certified(&ball, &d), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality, "{:?}", r.worst_margin);

    let c = barrier_c(1.0, 0.5).as_f64();
    let short = build_model_collar(3, 1.0, 0.5, 0.5 * c, torus()).unwrap();
    let r = check_cut_bounds(&short, &certified(&short, &d), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);

    let d = dims(3, ExtReal::Finite(5.0), 0.5);
    let eq = build_equality_model(Regime::Generic, &d, 1.0, 0.5, torus(), 0.0, Extent::ToBarrier, None).unwrap();
    let r = check_cut_bounds(&eq.manifold, &certified(&eq.manifold, &d), &opts()).unwrap();
    let tau_f = r.part("tau-f").next().unwrap();
    // The builder stops 1e-8·max(1, C) short of the barrier.
    assert!((tau_f.raw_slack() - 1e-8 * c.max(1.0)).abs() < 1e-10, "{}", tau_f.raw_slack());
    assert_eq!(r.part_verdict("tau-f"), Verdict::Equality);

    let cyl = cylinder(3, 1.0);
    let r = check_cut_bounds(&cyl, &certified(&cyl, &d), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Skipped);
}

fn constant_density_ball(n: usize, kappa: f64, lambda: f64, phi0: f64, fraction: f64, top: Topology) -> WarpedManifold {
    let c = barrier_c(kappa, lambda).as_f64();
    manifold(
        n,
        Curve::Sn { kappa, lambda, scale: 1.0 },
        Curve::constant(phi0),
        fraction * c,
        Fiber::Sphere { curvature: lambda * lambda + kappa },
        top,
    )
}

#[test]
fn bounded_density_constant_density_equality() {
    let d = eq_dims(3);
    let m = constant_density_ball(3, 1.0, 0.5, 0.7, 0.9, Topology::Collar);
    let h = certified(&m, &d);
    assert!((h.delta - 0.35).abs() < 1e-15);
    let r = check_bounded_density(&m, &h, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality, "{:?} at {:?}", r.worst_margin, r.worst_part);
    assert!(r.part("uniform").count() > 0);

    let cyl = cylinder(3, 1.0);
    let r = check_bounded_density(&cyl, &certified(&cyl, &d), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality);
}

#[test]
fn bounded_density_hyperbolic_family() {
    let d = dims(3, ExtReal::PosInf, 0.2);
    for (i, phi) in ["0.2*sin(t)", "-0.3*t", "0.1*t^2 - 0.2"].iter().enumerate() {
        let m = manifold(3, Curve::parse("exp(-t)*(1 + 0.1*t^2)").unwrap(), Curve::parse(phi).unwrap(), 1.0 + i as f64, torus(), Topology::Collar);
        let cert = certify_hypotheses(&m, &d, 512).unwrap();
        if cert.kappa_eff < -1.0 || cert.lambda_eff.unwrap() < 1.0 {
            continue;
        }
        let h = cert.weaken(Some(-1.0), Some(1.0), None).unwrap();
        let r = check_bounded_density(&m, &h, &opts()).unwrap();
        assert!(r.worst_margin.unwrap() >= -1e-7, "{phi}: {:?}", r.worst_margin);
    }
}

#[test]
fn p_laplacian_cases() {
    let d = dims(3, ExtReal::PosInf, 0.0);
    let cyl = cylinder(3, 1.0);
    let h = certified(&cyl, &d);
    let id = Expr::parse("t").unwrap();
    let r = check_p_laplacian(&cyl, &h, 2.0, &id, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality);

    // p = 2, ψ = id reproduces the uniform bounded-density display.
    let dd = eq_dims(3);
    let m = constant_density_ball(3, 1.0, 0.5, 0.4, 0.8, Topology::Collar);
    let h = certified(&m, &dd);
    let fixed = CheckOptions { refine_factor: 1, ..opts() };
    let p = check_p_laplacian(&m, &h, 2.0, &id, &fixed).unwrap();
    let b = check_bounded_density(&m, &h, &fixed).unwrap();
    assert_eq!(p.part("bounded").count(), b.part("uniform").count());
    // Both sides carry one extra factor e^{-2δ}.
    let k = (-2.0 * h.delta).exp();
    for (x, y) in p.part("bounded").zip(b.part("uniform")) {
        assert!((x.lhs - k * y.lhs).abs() < 1e-12 && (x.rhs - k * y.rhs).abs() < 1e-12);
    }

    let d = dims(3, ExtReal::Finite(5.0), 0.3);
    let eq = build_equality_model(Regime::Generic, &d, 1.0, 0.5, torus(), 0.0, Extent::SFraction { fraction: 0.8 }, None).unwrap();
    let h = certified(&eq.manifold, &d);
    let sq = Expr::parse("t^2").unwrap();
    let r = check_p_laplacian(&eq.manifold, &h, 3.0, &sq, &opts()).unwrap();
    assert!(r.worst_margin.unwrap() >= -1e-6, "{:?} {:?}", r.worst_margin, r.worst_part);

    assert!(check_p_laplacian(&cyl, &certified(&cyl, &d), 1.0, &id, &opts()).is_err());
    let dec = Expr::parse("-t").unwrap();
    assert!(matches!(
        check_p_laplacian(&cyl, &certified(&cyl, &d), 2.0, &dec, &opts()),
        Err(ComparisonError::NonIncreasingPsi { .. })
    ));
}

#[test]
fn inradius_cases() {
    let d = eq_dims(3);
    let ball = build_model_ball(3, 1.0, 0.5).unwrap();
    let r = check_inradius(&ball, &certified(&ball, &d), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality);
    assert_eq!(r.rigidity.len(), 2);
    assert!(r.rigidity.iter().all(|x| x.matches), "{:?}", r.rigidity);

    let m = constant_density_ball(3, 1.0, 0.5, 0.6, 1.0, Topology::BallApex);
    let h = certified(&m, &d);
    let r = check_inradius(&m, &h, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality, "{:?}", r.samples);
    assert!(r.rigidity.iter().all(|x| x.matches), "{:?}", r.rigidity);

    let c = barrier_c(1.0, 0.5).as_f64();
    let shrunk = build_model_collar(3, 1.0, 0.5, 0.7 * c, torus()).unwrap();
    let r = check_inradius(&shrunk, &certified(&shrunk, &d), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    assert!(r.rigidity.is_empty());
}

#[test]
fn inradius_ball_with_radial_density() {
    // N = 1 equality ball around x0: w = e^{(φ+φ(x0))/(n-1)} 𝔰_κ(s) in polar
    // coordinates, flipped so that t is the distance from the boundary.
    let d = dims(3, ExtReal::Finite(1.0), 0.0);
    let ball = build_model_ball(3, 1.0, 0.0).unwrap();
    let h = certified(&ball, &d);
    let r = check_inradius(&ball, &h, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality);
    assert!(r.rigidity.iter().all(|x| x.matches), "{:?}", r.rigidity);
}

#[test]
fn volume_elements_cases() {
    let d = dims(3, ExtReal::PosInf, 0.0);
    let cyl = cylinder(3, 1.0);
    let r = check_volume_elements(&cyl, &certified(&cyl, &d), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality);

    let d = eq_dims(4);
    let ball = build_model_ball(4, 1.0, 0.3).unwrap();
    let r = check_volume_elements(&ball, &certified(&ball, &d), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality, "{:?} {:?}", r.worst_margin, r.worst_part);
}

#[test]
fn volume_comparison_cases() {
    let d = dims(3, ExtReal::PosInf, 0.0);
    let cyl = cylinder(3, 3.0);
    let r = check_volume_comparisons(&cyl, &certified(&cyl, &d), 0.5, 2.0, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality, "{:?}", r.samples);

    let d = eq_dims(3);
    let ball = build_model_ball(3, 1.0, 0.5).unwrap();
    let c = barrier_c(1.0, 0.5).as_f64();
    let r = check_volume_comparisons(&ball, &certified(&ball, &d), c, 2.0 * c, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality, "{:?}", r.samples);
    assert!(check_volume_comparisons(&ball, &certified(&ball, &d), 2.0, 1.0, &opts()).is_err());
}

#[test]
fn two_boundary_distance_cases() {
    let d = eq_dims(3);
    let w = Curve::Sn { kappa: 1.0, lambda: -1.0, scale: 1.0 };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let m = manifold(3, w.clone(), Curve::constant(0.0), half_pi, torus(), Topology::TwoEnded);
    let h = certified(&m, &d);
    assert!((h.kappa - 1.0).abs() < 1e-12 && (h.lambda.unwrap() + 1.0).abs() < 1e-12);
    let r = check_two_boundary_distance(&m, &h, &opts()).unwrap();
    assert_eq!(r.part_verdict("distance"), Verdict::Equality);
    assert!(r.rigidity.iter().all(|x| x.matches) && !r.rigidity.is_empty());

    let shorter = manifold(3, w, Curve::constant(0.0), 1.2, torus(), Topology::TwoEnded);
    let r = check_two_boundary_distance(&shorter, &certified(&shorter, &d), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);

    let dd = dims(3, ExtReal::PosInf, 0.0);
    let shifted = manifold(3, Curve::Sn { kappa: 1.0, lambda: -1.0, scale: 1.0 }, Curve::constant(0.25), 1.0, torus(), Topology::TwoEnded);
    let h = certified(&shifted, &dd);
    assert!(h.delta > 0.0);
    let r = check_two_boundary_distance(&shifted, &h, &opts()).unwrap();
    assert_ne!(r.verdict, Verdict::Violated);

    let cyl = manifold(3, Curve::constant(1.0), Curve::constant(0.0), 1.0, torus(), Topology::TwoEnded);
    let r = check_two_boundary_distance(&cyl, &certified(&cyl, &d), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Skipped);
}

#[test]
fn splitting_models() {
    let setup = |case, kappa| SplittingSetup { case, kappa, f0: 0.0, lengths: vec![1.0, 2.0, 4.0], density: None, fiber: torus() };
    let r = check_splitting_model(&eq_dims(3), &setup(Regime::DimensionEqual, 0.0), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality, "{:?} {:?}", r.worst_margin, r.worst_part);

    let d1 = dims(3, ExtReal::Finite(1.0), 0.0);
    let r = check_splitting_model(&d1, &setup(Regime::One, -1.0), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality, "{:?} {:?}", r.worst_margin, r.worst_part);
    assert!(r.rigidity.iter().all(|x| x.matches), "{:?}", r.rigidity);

    let d5 = dims(3, ExtReal::Finite(5.0), 0.5);
    let r = check_splitting_model(&d5, &setup(Regime::Generic, -1.0), &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Equality, "{:?} {:?}", r.worst_margin, r.worst_part);
    let formula = r.rigidity.iter().find(|x| x.case == "density formula").unwrap();
    assert!(formula.max_deviation <= 1e-8, "{}", formula.max_deviation);

    assert!(matches!(
        check_splitting_model(&d5, &setup(Regime::One, -1.0), &opts()),
        Err(ComparisonError::CaseMismatch { .. })
    ));
    assert!(check_splitting_model(&d5, &setup(Regime::Generic, 1.0), &opts()).is_err());
}

#[test]
fn certificate_grid_refinement() {
    let d = dims(3, ExtReal::Finite(6.0), 0.3);
    let m = manifold(
        3,
        Curve::parse("exp(0.4*t - 0.3*t^2 + 0.2*t^3 - 0.1*t^4)").unwrap(),
        Curve::parse("-0.2*t + 0.5*t^2 - 0.3*t^3").unwrap(),
        2.0,
        torus(),
        Topology::Collar,
    );
    let coarse = certify_hypotheses(&m, &d, 512).unwrap();
    let fine = certify_hypotheses(&m, &d, 5120).unwrap();
    assert!((coarse.kappa_eff - fine.kappa_eff).abs() < 1e-5);
    assert!((coarse.delta_eff - fine.delta_eff).abs() < 1e-5);
    assert!(coarse.consistent() && fine.consistent());
}

#[test]
fn density_shift_rescales_constants() {
    let d = dims(3, ExtReal::PosInf, 0.2);
    let w = "exp(-0.2*t + 0.1*t^2)";
    let base = manifold(3, Curve::parse(w).unwrap(), Curve::parse("0.3*t").unwrap(), 1.0, torus(), Topology::Collar);
    let shifted = manifold(3, Curve::parse(w).unwrap(), Curve::parse("0.3*t + 0.4").unwrap(), 1.0, torus(), Topology::Collar);
    let (hb, hs) = (certified(&base, &d), certified(&shifted, &d));
    let dd = (1.0 - d.eps) * 0.4 / d.n_minus_1();
    assert!((hs.delta - hb.delta - dd).abs() < 1e-12);
    assert!((hs.kappa - hb.kappa * (4.0 * dd).exp()).abs() < 1e-9);
    let o = opts();
    for (a, b) in [
        (check_boundary_laplacian(&base, &hb, &o).unwrap(), check_boundary_laplacian(&shifted, &hs, &o).unwrap()),
        (check_bounded_density(&base, &hb, &o).unwrap(), check_bounded_density(&shifted, &hs, &o).unwrap()),
    ] {
        assert_eq!(a.verdict, b.verdict);
        for (x, y) in a.part("laplacian").zip(b.part("laplacian")) {
            assert!((x.margin - y.margin).abs() < 1e-9);
        }
        for (x, y) in a.part("uniform").zip(b.part("uniform")) {
            assert!((x.margin - y.margin).abs() < 1e-9);
        }
    }
}

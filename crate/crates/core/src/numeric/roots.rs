//! Bracketed scalar root finding and 1-D maximization.

/// Bisection for a sign change of `f` on `[a, b]`.
///
/// Returns `None` when the endpoints do not bracket a root. Stops once the
/// bracket is narrower than `tol` or after 200 halvings.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol || m == a || m == b {
            return Some(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Smallest root of `f` on `]0, limit]`, found by scanning from `start`
/// outward with geometric growth and then bisecting the first bracket.
pub fn first_root_scanning<F: Fn(f64) -> f64>(f: F, start: f64, limit: f64, tol: f64) -> Option<f64> {
    let f0 = f(0.0);
    let mut lo = 0.0;
    let mut step = start;
    let mut flo = f0;
    while lo < limit {
        let hi = (lo + step).min(limit);
        let fhi = f(hi);
        if fhi == 0.0 || fhi.signum() != flo.signum() {
            return bisect(&f, lo, hi, tol);
        }
        lo = hi;
        flo = fhi;
        step *= 1.5;
    }
    None
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
/// Returns `(argmax, max)`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let fa = f(a);
    let fb = f(b);
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    if fa > best.1 {
        best = (a, fa);
    }
    if fb > best.1 {
        best = (b, fb);
    }
    best
}

/// Grid scan followed by a golden-section polish around the best sample.
pub fn grid_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, points: usize, tol: f64) -> (f64, f64) {
    let n = points.max(3);
    let h = (b - a) / (n - 1) as f64;
    let mut best = (a, f(a));
    let mut best_i = 0;
    for i in 1..n {
        let x = if i == n - 1 { b } else { a + h * i as f64 };
        let v = f(x);
        if v > best.1 {
            best = (x, v);
            best_i = i;
        }
    }
    let lo = a + h * best_i.saturating_sub(1) as f64;
    let hi = (a + h * (best_i + 1) as f64).min(b);
    let polished = golden_max(&f, lo, hi, tol);
    if polished.1 > best.1 {
        polished
    } else {
        best
    }
}

/// Minimum counterpart of [`grid_max`].
pub fn grid_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, points: usize, tol: f64) -> (f64, f64) {
    let (x, v) = grid_max(|x| -f(x), a, b, points, tol);
    (x, -v)
}

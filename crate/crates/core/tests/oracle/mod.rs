//! Independent reference computations shared by the integration and
//! acceptance tests. Nothing here calls into the library under test.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Composite 20-point Gauss–Legendre rule on `[a, b]` with panels that
/// shrink geometrically toward `a` (ratio 1/2, 120 panels), which resolves
/// integrands whose structure sits near the left end.
pub fn graded_gl<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let (x, w) = gauss_legendre(20);
    let mut edges = vec![b];
    let mut len = b - a;
    for _ in 0..120 {
        len *= 0.5;
        edges.push(a + len);
    }
    edges.push(a);
    edges.reverse();
    let mut sum = 0.0;
    for pair in edges.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if hi == lo {
            continue;
        }
        // four uniform sub-panels per geometric panel
        for k in 0..4 {
            let sl = lo + (hi - lo) * k as f64 / 4.0;
            let sh = lo + (hi - lo) * (k + 1) as f64 / 4.0;
            let (sm, sh2) = (0.5 * (sl + sh), 0.5 * (sh - sl));
            sum += sh2 * x.iter().zip(&w).map(|(xi, wi)| wi * f(sm + sh2 * xi)).sum::<f64>();
        }
    }
    sum
}

/// `∫_{φ₀}^∞ dτ / (c₁τ + c₂τ^{3/2} + c₅τ³)` via `τ = σ⁻²`.
pub fn three_term_3d(c1: f64, c2: f64, c5: f64, phi0: f64) -> f64 {
    graded_gl(
        |s| 2.0 * s.powi(3) / (c1 * s.powi(4) + c2 * s.powi(3) + c5),
        0.0,
        1.0 / phi0.sqrt(),
    )
}

/// `∫_{φ₀}^∞ dτ / (c₁τ + c₂τ^{3/2} + c₃τ²)` via `τ = σ⁻²`.
pub fn three_term_2d(c1: f64, c2: f64, c3: f64, phi0: f64) -> f64 {
    graded_gl(|s| 2.0 * s / (c1 * s * s + c2 * s + c3), 0.0, 1.0 / phi0.sqrt())
}

/// Classical RK4 with step `dt = η / (c₁ + c₅φ^{n−1})` for
/// `φ' = c₁φ + c₅φⁿ` until `φ > 1e12`, then the leading tail terms of the
/// remaining time. Returns the extrapolated blow-up time.
pub fn rk4_blowup_time(c1: f64, c5: f64, n: i32, phi0: f64, eta: f64) -> f64 {
    let f = |p: f64| c1 * p + c5 * p.powi(n);
    let (mut t, mut p) = (0.0, phi0);
    while p <= 1e12 {
        let dt = eta / (c1 + c5 * p.powi(n - 1));
        let k1 = f(p);
        let k2 = f(p + 0.5 * dt * k1);
        let k3 = f(p + 0.5 * dt * k2);
        let k4 = f(p + dt * k3);
        p += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += dt;
    }
    // ∫_p^∞ dτ/(c₁τ + c₅τⁿ) expanded in c₁/(c₅p^{n−1})
    let r = c1 / (c5 * p.powi(n - 1));
    let lead = 1.0 / ((n - 1) as f64 * c5 * p.powi(n - 1));
    t + lead * (1.0 - 0.5 * r)
}

/// Adaptive RK4 (step doubling) for the scalar `y' = f(y)`, reporting `y`
/// at each of `times` (increasing).
pub fn scalar_ode<F: Fn(f64) -> f64>(f: F, y0: f64, times: &[f64], rel_tol: f64) -> Vec<f64> {
    let rk4 = |y: f64, h: f64| {
        let k1 = f(y);
        let k2 = f(y + 0.5 * h * k1);
        let k3 = f(y + 0.5 * h * k2);
        let k4 = f(y + h * k3);
        y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    };
    let (mut t, mut y) = (0.0, y0);
    let mut h: f64 = 1e-6;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        // stop once the gap is below the resolution of t
        while target - t > 4.0 * f64::EPSILON * target {
            let step = h.min(target - t);
            let full = rk4(y, step);
            let half = rk4(rk4(y, 0.5 * step), 0.5 * step);
            let err = (half - full).abs() / 15.0;
            if err <= rel_tol * half.abs() {
                t += step;
                y = half + (half - full) / 15.0;
                if err < 0.1 * rel_tol * half.abs() {
                    h = step * 2.0;
                }
            } else {
                h = step * 0.5;
            }
        }
        out.push(y);
    }
    out
}

/// Blow-up time of `U' = αU^p − bU^q` from `U₀`: `∫_{U₀}^∞ dU/(αU^p − bU^q)`
/// with `U = U₀/σ`.
pub fn scalar_blowup_time(alpha: f64, b: f64, p: f64, q: f64, u0: f64) -> f64 {
    graded_gl(
        |s| {
            if s == 0.0 {
                return 0.0;
            }
            let u = u0 / s;
            u0 / (s * s) / (alpha * u.powf(p) - b * u.powf(q))
        },
        0.0,
        1.0,
    )
}

/// The ledger displays transcribed term by term from their printed form.
pub struct Reference {
    pub eps1_max: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c5: f64,
}

/// Spatial constants; `vol`, `rho`, `d` of the domain, `eps1` absolute.
#[allow(clippy::too_many_arguments)]
pub fn reference_3d(a: f64, b: f64, c: f64, k: f64, m: f64, p: f64, q: f64, vol: f64, rho: f64, d: f64, eps1: f64) -> Reference {
    let s = p - 1.0;
    let e1max = 2.0 * rho * c / (5.0 * m * m * s * d * k);
    let c1 = a * (m - 2.0) * s * vol + 3.0 * m * m * s * k / (2.0 * rho);
    let c2 = (a * s * vol + 3.0 * m * m * s * k / (4.0 * rho) + 5.0 * m.powi(3) * s * s * k * d / (16.0 * rho * eps1))
        * 3f64.powf(1.5)
        / rho.powf(1.5);
    let r2 = 2f64.sqrt();
    let big = (d / rho + 1.0).powf(1.5)
        * (1.5 * r2 * a * s * vol + 9.0 * r2 * m * m * s * k / (8.0 * rho) + 15.0 * r2 * m.powi(3) * s * s * k * d / (32.0 * eps1 * rho));
    let lin = 5.0 * m * d * k * eps1 / (2.0 * rho) - c / (m * s);
    let e2 = -lin / big;
    let c3 = (d / rho + 1.0).powf(1.5) / (4.0 * e2.powi(3))
        * (2.0 * r2 * a * s * vol + 1.5 * r2 * m * m * s * k / rho + 5.0 * r2 * m.powi(3) * s * s * k * d / (8.0 * rho * eps1));
    let ms = m * s;
    let young = 4.0 * ms - 2.0 * q + 2.0;
    let e3 = (b / (3.0 * c2) * young * vol.powf((1.0 - q) / ms)).powf(3.0 * ms / young);
    let lean = ms - 2.0 * q + 2.0;
    let c5 = c2 * lean / young * e3.powf(-young / lean) + c3;
    Reference { eps1_max: e1max, c1, c2, c3, c5 }
}

/// Planar constants (same bracket as the spatial case).
#[allow(clippy::too_many_arguments)]
pub fn reference_2d(a: f64, b: f64, c: f64, k: f64, m: f64, p: f64, q: f64, vol: f64, rho: f64, d: f64, eps1: f64) -> Reference {
    let s = p - 1.0;
    let e1max = 2.0 * rho * c / (5.0 * m * m * s * d * k);
    let bracket = 2.0 * a * s * vol + 3.0 * m * m * s * k / (2.0 * rho) + 5.0 * m.powi(3) * s * s * k * d / (8.0 * eps1 * rho);
    let lin = 5.0 * m * d * k * eps1 / (2.0 * rho) - c / (m * s);
    let r2 = 2f64.sqrt();
    let e2 = (-lin / (r2 / (4.0 * rho) * (d + rho) * bracket)).sqrt();
    let c1 = a * (m - 2.0) * s * vol + 3.0 * m * m * s * k / (2.0 * rho);
    let c2 = bracket * r2 / (2.0 * rho);
    let c3 = bracket * r2 * (d + rho) / (4.0 * rho * e2 * e2);
    let ms = m * s;
    let young = 2.0 * ms - 2.0 * q + 2.0;
    let e3 = (young / c2 * b * vol.powf((1.0 - q) / ms)).powf(ms / young);
    let lean = ms - 2.0 * q + 2.0;
    let c5 = lean / young * c2 * e3.powf(-young / lean) + c3;
    Reference { eps1_max: e1max, c1, c2, c3, c5 }
}

/// Radial integral `∫_0^R ω_N r^{N−1} f(r) dr` with 20-point GL on 64 panels.
pub fn radial_integral<F: Fn(f64) -> f64>(f: F, radius: f64, dimension: usize) -> f64 {
    let (x, w) = gauss_legendre(20);
    let panels = 64;
    let h = radius / panels as f64;
    let surface = match dimension {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => panic!("dimension {dimension}"),
    };
    let mut sum = 0.0;
    for i in 0..panels {
        let (lo, hi) = (i as f64 * h, (i + 1) as f64 * h);
        let (m, hh) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (xi, wi) in x.iter().zip(&w) {
            let r = m + hh * xi;
            sum += hh * wi * r.powi(dimension as i32 - 1) * f(r);
        }
    }
    surface * sum
}

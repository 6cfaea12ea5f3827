use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, cached per order.
pub fn gauss_legendre(n: usize) -> std::sync::Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, std::sync::Arc<(Vec<f64>, Vec<f64>)>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("quadrature cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| std::sync::Arc::new(compute_nodes(n)))
        .clone()
}

fn compute_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss–Legendre order must be positive");
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
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
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Fixed-order Gauss–Legendre rule on `[a, b]`.
pub fn integrate_gl<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let rule = gauss_legendre(n);
    let (x, w) = (&rule.0, &rule.1);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut s = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        s += wi * f(mid + half * xi);
    }
    s * half
}

#[derive(Clone, Copy, Debug)]
pub struct AdaptiveOptions {
    pub order: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Upper bound on the number of panels before giving up.
    pub max_panels: usize,
    /// Width of the panels the interval is cut into before refinement.
    pub initial_width: f64,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self { order: 16, abs_tol: 1e-300, rel_tol: 1e-13, max_panels: 200_000, initial_width: f64::INFINITY }
    }
}

/// Result of an adaptive integration: value and accumulated error estimate.
#[derive(Clone, Copy, Debug)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error).then(other.a.total_cmp(&self.a))
    }
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, order: usize) -> Panel {
    let m = 0.5 * (a + b);
    let whole = integrate_gl(f, a, b, order);
    let value = integrate_gl(f, a, m, order) + integrate_gl(f, m, b, order);
    let error = if value.is_finite() { (value - whole).abs() } else { f64::INFINITY };
    Panel { a, b, value, error }
}

/// Globally adaptive Gauss–Legendre integration: the panel with the largest
/// panel-versus-halves discrepancy is bisected until the total discrepancy meets the tolerance.
///
/// `breaks` are interior points where the integrand is not smooth; they always become panel edges.
pub fn adaptive_gl<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breaks: &[f64],
    opts: &AdaptiveOptions,
) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!("integration limits [{a}, {b}]")));
    }
    if b <= a {
        return Ok(Integral { value: 0.0, error: 0.0 });
    }
    let mut edges = vec![a];
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&t| t > a && t < b).collect();
    pts.sort_by(f64::total_cmp);
    pts.push(b);
    for p in pts {
        let lo = *edges.last().unwrap();
        if p <= lo {
            continue;
        }
        let pieces = ((p - lo) / opts.initial_width).ceil().clamp(1.0, 1e6) as usize;
        for k in 1..=pieces {
            edges.push(if k == pieces { p } else { lo + (p - lo) * k as f64 / pieces as f64 });
        }
    }

    let mut heap: std::collections::BinaryHeap<Panel> =
        edges.windows(2).map(|e| panel(f, e[0], e[1], opts.order)).collect();
    let mut count = heap.len();
    let mut error: f64 = heap.iter().map(|p| p.error).sum();
    let mut scale: f64 = heap.iter().map(|p| p.value.abs()).sum();
    loop {
        let worst = heap.peek().expect("at least one panel");
        if !worst.error.is_finite() && worst.b - worst.a < 1e-14 * (b - a) {
            return Err(Error::NonFinite("integrand produced a non-finite value".into()));
        }
        let tol = (opts.rel_tol * scale).max(opts.abs_tol);
        let resolved = worst.error <= 4.0 * f64::EPSILON * worst.value.abs().max(f64::MIN_POSITIVE);
        if error <= tol || resolved {
            let mut panels = heap.into_vec();
            panels.sort_by(|x, y| x.a.total_cmp(&y.a));
            let value: f64 = panels.iter().map(|p| p.value).sum();
            let error: f64 = panels.iter().map(|p| p.error).sum();
            return Ok(Integral { value, error });
        }
        if count >= opts.max_panels {
            return Err(Error::QuadratureNonconvergence(format!(
                "error estimate {error:.3e} above tolerance {tol:.3e} after {count} panels"
            )));
        }
        let p = heap.pop().expect("at least one panel");
        let m = 0.5 * (p.a + p.b);
        let (l, r) = (panel(f, p.a, m, opts.order), panel(f, m, p.b, opts.order));
        if error.is_finite() {
            error += l.error + r.error - p.error;
        } else {
            error = heap.iter().map(|q| q.error).sum::<f64>() + l.error + r.error;
        }
        scale += l.value.abs() + r.value.abs() - p.value.abs();
        heap.push(l);
        heap.push(r);
        count += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        for n in [1, 2, 5, 16, 20, 32] {
            let rule = gauss_legendre(n);
            let wsum: f64 = rule.1.iter().sum();
            assert_relative_eq!(wsum, 2.0, epsilon = 1e-14);
            let deg = 2 * n - 1;
            let v = integrate_gl(&|x: f64| x.powi(deg as i32 - 1) + 1.0, 0.0, 1.0, n);
            assert_relative_eq!(v, 1.0 / deg as f64 + 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let opts = AdaptiveOptions { rel_tol: 1e-12, ..Default::default() };
        let r = adaptive_gl(&|x: f64| x.sqrt(), 0.0, 1.0, &[], &opts).unwrap();
        assert_relative_eq!(r.value, 2.0 / 3.0, epsilon = 1e-11);
    }

    #[test]
    fn adaptive_respects_breaks() {
        let opts = AdaptiveOptions::default();
        let r = adaptive_gl(&|x: f64| (x - 0.3).abs(), 0.0, 1.0, &[0.3], &opts).unwrap();
        assert_relative_eq!(r.value, 0.5 * (0.09 + 0.49), epsilon = 1e-14);
    }

    #[test]
    fn gaussian_integral() {
        let opts = AdaptiveOptions { initial_width: 0.5, ..Default::default() };
        let r = adaptive_gl(&|x: f64| (-std::f64::consts::PI * x * x).exp(), -6.0, 6.0, &[], &opts)
            .unwrap();
        assert_relative_eq!(r.value, 1.0, epsilon = 1e-14);
    }
}

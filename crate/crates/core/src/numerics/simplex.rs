//! Nelder–Mead minimization in two variables.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexResult {
    pub x: [f64; 2],
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

fn lex_less(a: &([f64; 2], f64), b: &([f64; 2], f64)) -> std::cmp::Ordering {
    a.1.total_cmp(&b.1).then(a.0[0].total_cmp(&b.0[0])).then(a.0[1].total_cmp(&b.0[1]))
}

/// Minimize `f` from `x0` with an initial simplex of edge `step`, stopping once every vertex
/// is within `xtol` of the best one or after `max_evals` evaluations.
pub fn nelder_mead<F: Fn([f64; 2]) -> f64>(f: F, x0: [f64; 2], step: f64, xtol: f64, max_evals: usize) -> SimplexResult {
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: [f64; 2]| {
        evals.set(evals.get() + 1);
        (x, f(x))
    };
    let mut s = [eval(x0), eval([x0[0] + step, x0[1]]), eval([x0[0], x0[1] + step])];
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    loop {
        s.sort_by(lex_less);
        let spread = s[1..].iter().map(|v| (v.0[0] - s[0].0[0]).hypot(v.0[1] - s[0].0[1])).fold(0.0, f64::max);
        if spread <= xtol {
            return SimplexResult { x: s[0].0, value: s[0].1, evaluations: evals.get(), converged: true };
        }
        if evals.get() >= max_evals {
            return SimplexResult { x: s[0].0, value: s[0].1, evaluations: evals.get(), converged: false };
        }
        let centroid = [(s[0].0[0] + s[1].0[0]) / 2.0, (s[0].0[1] + s[1].0[1]) / 2.0];
        let worst = s[2];
        let refl = eval(lerp(centroid, worst.0, -1.0));
        if refl.1 < s[0].1 {
            let exp = eval(lerp(centroid, worst.0, -2.0));
            s[2] = if exp.1 < refl.1 { exp } else { refl };
        } else if refl.1 < s[1].1 {
            s[2] = refl;
        } else {
            let contracted = if refl.1 < worst.1 {
                eval(lerp(centroid, refl.0, 0.5))
            } else {
                eval(lerp(centroid, worst.0, 0.5))
            };
            if contracted.1 < worst.1.min(refl.1) {
                s[2] = contracted;
            } else {
                let best = s[0].0;
                s[1] = eval(lerp(best, s[1].0, 0.5));
                s[2] = eval(lerp(best, s[2].0, 0.5));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let r = nelder_mead(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2), [0.0, 0.0], 0.5, 1e-8, 2000);
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] + 2.0).abs() < 1e-6);
    }

    #[test]
    fn reports_budget_exhaustion() {
        let r = nelder_mead(|x| x[0].abs() + x[1].abs(), [5.0, 5.0], 0.1, 1e-12, 10);
        assert!(!r.converged);
    }
}

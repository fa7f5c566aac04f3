//! Derivative-free minimization: Nelder-Mead with the dimension-adaptive
//! coefficients of Gao and Han, restarted around the incumbent after
//! convergence.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Initial step along every coordinate.
    pub initial_step: f64,
    /// Stop when the best value improved by less than this over `d + 1`
    /// iterations and the simplex values span less than it.
    pub ftol: f64,
    /// Evaluation budget per call.
    pub max_evals: usize,
    /// Fresh starts from the best point, with the initial step, after
    /// convergence.
    pub max_restarts: usize,
}

impl SimplexOptions {
    /// Budget of `400 d` evaluations with tolerance `ftol`.
    pub fn for_dimension(dim: usize, ftol: f64) -> Self {
        Self { initial_step: 0.1, ftol, max_evals: 400 * dim, max_restarts: 4 }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

struct Counted<'f, F> {
    f: &'f mut F,
    evals: usize,
    max: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counted<'_, F> {
    fn call(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }

    fn exhausted(&self) -> bool {
        self.evals >= self.max
    }
}

pub fn minimize<F>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let mut counted = Counted { f: &mut f, evals: 0, max: opts.max_evals.max(1) };
    let mut x = x0.to_vec();
    let mut best = counted.call(x0);
    if x.is_empty() {
        return Minimum { x, value: best, evaluations: counted.evals, converged: true };
    }
    let mut converged = false;
    for attempt in 0..=opts.max_restarts {
        let before = best;
        converged = nelder_mead(&mut counted, &mut x, &mut best, opts);
        if !converged || counted.exhausted() {
            break;
        }
        // a restart that no longer helps ends the search
        if attempt > 0 && before - best < opts.ftol {
            break;
        }
    }
    Minimum { x, value: best, evaluations: counted.evals, converged }
}

/// Full-dimensional Nelder-Mead with the Gao-Han coefficients, until the
/// best value gains less than `ftol` over `d + 1` iterations while the
/// simplex values span less than `ftol` (true), or the budget runs out.
fn nelder_mead<F: FnMut(&[f64]) -> f64>(f: &mut Counted<'_, F>, x: &mut Vec<f64>, fx: &mut f64, opts: &SimplexOptions) -> bool {
    let d = x.len();
    let dn = d as f64;
    let (alpha, gamma, rho, sigma) = if d >= 2 {
        (1.0, 1.0 + 2.0 / dn, 0.75 - 0.5 / dn, 1.0 - 1.0 / dn)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x.clone(), *fx)];
    for i in 0..d {
        if f.exhausted() {
            return false;
        }
        let mut y = x.clone();
        y[i] += opts.initial_step;
        let v = f.call(&y);
        simplex.push((y, v));
    }
    let mut iteration = 0usize;
    let mut cycle_start_best = f64::INFINITY;
    let converged = loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if iteration.is_multiple_of(d + 1) {
            let now = simplex[0].1;
            if iteration > 0 && cycle_start_best - now < opts.ftol && simplex[d].1 - now < opts.ftol {
                break true;
            }
            cycle_start_best = now;
        }
        if f.exhausted() {
            break false;
        }
        iteration += 1;
        let mut centroid = vec![0.0; d];
        for (y, _) in &simplex[..d] {
            centroid.iter_mut().zip(y).for_each(|(c, yi)| *c += yi / dn);
        }
        let worst = simplex[d].clone();
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect() };
        let yr = along(alpha);
        let fr = f.call(&yr);
        if fr < simplex[0].1 {
            let ye = along(alpha * gamma);
            let fe = f.call(&ye);
            simplex[d] = if fe < fr { (ye, fe) } else { (yr, fr) };
            continue;
        }
        if fr < simplex[d - 1].1 {
            simplex[d] = (yr, fr);
            continue;
        }
        let yc = if fr < worst.1 { along(alpha * rho) } else { along(-rho) };
        let fc = f.call(&yc);
        if fc < fr.min(worst.1) {
            simplex[d] = (yc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            if f.exhausted() {
                break;
            }
            for (yi, bi) in vertex.0.iter_mut().zip(&best) {
                *yi = bi + sigma * (*yi - bi);
            }
            vertex.1 = f.call(&vertex.0);
        }
    };
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    if simplex[0].1 < *fx {
        *fx = simplex[0].1;
        x.clone_from(&simplex[0].0);
    }
    converged
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> f64 {
        x.windows(2).map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2)).sum()
    }

    #[test]
    fn quadratic_bowl() {
        let target = [0.3, -1.2, 2.0, 0.5];
        let f = |x: &[f64]| x.iter().zip(&target).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
        let m = minimize(f, &[0.0; 4], &SimplexOptions::for_dimension(4, 1e-14));
        assert!(m.converged);
        for (a, b) in m.x.iter().zip(&target) {
            assert!((a - b).abs() < 1e-5, "{:?}", m.x);
        }
    }

    #[test]
    fn rosenbrock_2d() {
        let opts = SimplexOptions { max_evals: 5000, ..SimplexOptions::for_dimension(2, 1e-14) };
        let m = minimize(rosenbrock, &[-1.2, 1.0], &opts);
        assert!(m.value < 1e-8, "{}", m.value);
    }

    #[test]
    fn rosenbrock_12d() {
        let opts = SimplexOptions::for_dimension(12, 1e-12);
        let m = minimize(rosenbrock, &[0.0; 12], &SimplexOptions { max_evals: 100 * opts.max_evals, ..opts });
        assert!(m.value < 1e-6, "{} after {}", m.value, m.evaluations);
    }

    #[test]
    fn ill_conditioned_quadratic_40d() {
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (1.0 + i as f64) * (v - 1.0).powi(2)).sum::<f64>();
        let m = minimize(f, &[0.0; 40], &SimplexOptions::for_dimension(40, 1e-12));
        assert!(m.value < 1e-6, "{} after {}", m.value, m.evaluations);
    }

    #[test]
    fn budget_is_respected() {
        let opts = SimplexOptions { max_evals: 50, ..SimplexOptions::for_dimension(6, 0.0) };
        let m = minimize(rosenbrock, &[0.0; 6], &opts);
        assert!(m.evaluations <= 50);
        assert!(!m.converged);
    }

    #[test]
    fn never_worse_than_start() {
        let x0 = [1.0, 1.0, 1.0];
        let m = minimize(rosenbrock, &x0, &SimplexOptions::for_dimension(3, 1e-10));
        assert!(m.value <= rosenbrock(&x0));
    }
}

//! Nelder–Mead simplex minimization.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Stop once `max f − min f` over the simplex is at most this.
    pub f_tolerance: f64,
    pub max_iterations: usize,
    /// Relative step for the initial simplex along each axis.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { f_tolerance: 1e-9, max_iterations: 500, initial_step: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerTrace {
    pub iterations: usize,
    pub evaluations: usize,
    /// Best value after each iteration, starting with the initial simplex.
    pub best_values: Vec<f64>,
    /// `max f − min f` at exit.
    pub final_spread: f64,
    /// Largest vertex distance from the best vertex at exit.
    pub final_size: f64,
    pub converged: bool,
}

impl OptimizerTrace {
    pub fn is_monotone(&self) -> bool {
        self.best_values.windows(2).all(|w| w[1] <= w[0])
    }
}

#[derive(Debug, Clone)]
pub struct NelderMeadOutcome {
    pub point: Vec<f64>,
    pub value: f64,
    pub trace: OptimizerTrace,
}

/// Minimize `f` from `start`; the initial simplex adds `initial_step·start[i]`
/// to one coordinate at a time.
pub fn nelder_mead(mut f: impl FnMut(&[f64]) -> f64, start: &[f64], options: &NelderMeadOptions) -> NelderMeadOutcome {
    let n = start.len();
    let mut evaluations = 0;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(start, &mut evaluations);
    simplex.push((start.to_vec(), v0));
    for i in 0..n {
        let mut x = start.to_vec();
        x[i] += if x[i] != 0.0 { options.initial_step * x[i] } else { options.initial_step };
        let v = eval(&x, &mut evaluations);
        simplex.push((x, v));
    }

    let sort = |s: &mut Vec<(Vec<f64>, f64)>| s.sort_by(|a, b| a.1.total_cmp(&b.1));
    sort(&mut simplex);
    let mut best_values = vec![simplex[0].1];
    let mut iterations = 0;
    let spread = |s: &[(Vec<f64>, f64)]| s[s.len() - 1].1 - s[0].1;
    let mut converged = spread(&simplex) <= options.f_tolerance;

    while !converged && iterations < options.max_iterations {
        iterations += 1;
        let worst = simplex[n].clone();
        let centroid: Vec<f64> =
            (0..n).map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| -> Vec<f64> { (0..n).map(|k| centroid[k] + t * (centroid[k] - worst.0[k])).collect() };

        let xr = along(1.0);
        let fr = eval(&xr, &mut evaluations);
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = eval(&xe, &mut evaluations);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let x = along(0.5);
                let v = eval(&x, &mut evaluations);
                (x, v)
            } else {
                let x = along(-0.5);
                let v = eval(&x, &mut evaluations);
                (x, v)
            };
            if fc < worst.1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = (0..n).map(|k| best[k] + 0.5 * (vertex.0[k] - best[k])).collect();
                    let v = eval(&x, &mut evaluations);
                    *vertex = (x, v);
                }
            }
        }
        sort(&mut simplex);
        best_values.push(simplex[0].1);
        converged = spread(&simplex) <= options.f_tolerance;
    }

    let best = simplex[0].clone();
    let final_size = simplex
        .iter()
        .map(|(x, _)| x.iter().zip(&best.0).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    NelderMeadOutcome {
        point: best.0,
        value: best.1,
        trace: OptimizerTrace {
            iterations,
            evaluations,
            best_values,
            final_spread: spread(&simplex),
            final_size,
            converged,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_minimum() {
        let out = nelder_mead(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2), &[0.5, 0.5], &NelderMeadOptions {
            f_tolerance: 1e-14,
            ..Default::default()
        });
        assert!(out.trace.converged);
        assert!((out.point[0] - 1.0).abs() < 1e-5 && (out.point[1] + 2.0).abs() < 1e-5);
        assert!(out.trace.is_monotone());
    }

    #[test]
    fn rosenbrock() {
        let out = nelder_mead(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
            &NelderMeadOptions { f_tolerance: 1e-16, max_iterations: 2000, ..Default::default() },
        );
        assert!((out.point[0] - 1.0).abs() < 1e-3, "{:?}", out.point);
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let out = nelder_mead(|x| x[0].abs() + x[1].abs(), &[5.0, 5.0], &NelderMeadOptions {
            f_tolerance: 0.0,
            max_iterations: 3,
            ..Default::default()
        });
        assert!(!out.trace.converged);
        assert_eq!(out.trace.iterations, 3);
    }

    #[test]
    fn infinite_values_are_rejected_moves() {
        let out = nelder_mead(|x| if x[0] < 0.0 { f64::NAN } else { (x[0] - 0.1).powi(2) + x[1] * x[1] }, &[1.0, 1.0], &Default::default());
        assert!(out.value < 1e-8);
    }
}

//! Dense phase-one simplex for feasibility of `A·x = b, x ≥ 0`.

use crate::linalg::Matrix;

const PIVOT_TOL: f64 = 1e-11;
const FEASIBILITY_TOL: f64 = 1e-9;

/// A non-negative solution of `A·x = b`, or `None` if none exists.
///
/// Artificial variables are added per row (after flipping rows so that
/// `b ≥ 0`) and their sum is minimized with Bland's rule, which rules out
/// cycling. The returned point satisfies the equations to round-off.
pub fn feasible_point(a: &Matrix, b: &[f64]) -> Option<Vec<f64>> {
    let (rows, cols) = (a.rows(), a.cols());
    assert_eq!(rows, b.len(), "right-hand side length");
    let width = cols + rows + 1;
    // tableau rows: constraints, then the phase-one objective
    let mut t = vec![vec![0.0; width]; rows + 1];
    for i in 0..rows {
        let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..cols {
            t[i][j] = s * a[(i, j)];
        }
        t[i][cols + i] = 1.0;
        t[i][width - 1] = s * b[i];
    }
    // reduced costs of minimizing Σ artificials
    for j in 0..width {
        if j >= cols && j < cols + rows {
            continue;
        }
        t[rows][j] = -(0..rows).map(|i| t[i][j]).sum::<f64>();
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    loop {
        let Some(enter) = (0..cols + rows).find(|&j| t[rows][j] < -PIVOT_TOL) else { break };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..rows {
            if t[i][enter] > PIVOT_TOL {
                let ratio = t[i][width - 1] / t[i][enter];
                let better = ratio < best - 1e-14
                    || ((ratio - best).abs() <= 1e-14 && leave.is_some_and(|l| basis[i] < basis[l]));
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else { break };
        let p = t[r][enter];
        for v in t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[enter];
            if f != 0.0 {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
        basis[r] = enter;
    }

    if -t[rows][width - 1] > FEASIBILITY_TOL {
        return None;
    }
    let mut x = vec![0.0; cols];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < cols {
            x[bv] = t[i][width - 1].max(0.0);
        }
    }
    let residual = (0..rows)
        .map(|i| ((0..cols).map(|j| a[(i, j)] * x[j]).sum::<f64>() - b[i]).abs())
        .fold(0.0, f64::max);
    (residual <= 1e-8).then_some(x)
}

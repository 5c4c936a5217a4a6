//! The quartic T-measure on ∧³ of a six-dimensional space and the Jaynes
//! occupation entropy.

use crate::density::AmplitudeTensor;
use crate::error::{Error, Result};
use crate::linalg::{det3, Matrix};

/// Transpose of the cofactor matrix.
pub fn adjugate(m: &Matrix) -> Matrix {
    let cof = |r: usize, c: usize| {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let minor = m[(rows[0], cols[0])] * m[(rows[1], cols[1])] - m[(rows[0], cols[1])] * m[(rows[1], cols[0])];
        if (r + c).is_multiple_of(2) {
            minor
        } else {
            -minor
        }
    };
    Matrix::from_fn(3, 3, |i, j| cof(j, i))
}

#[derive(Debug, Clone)]
pub struct TMeasureDecomposition {
    pub m1: Matrix,
    pub m2: Matrix,
    pub mu: f64,
    pub nu: f64,
    pub value: f64,
}

impl TMeasureDecomposition {
    pub fn magnitude(&self) -> f64 {
        self.value.abs()
    }
}

/// `T = 4{[Tr(M₁M₂) − μν]² − 4 Tr(M₁^# M₂^#) + 4μ det M₁ + 4ν det M₂}`.
///
/// Amplitudes are real, so the conjugations on `M₂`, `ν` in the complex
/// form reduce to the identity.
pub fn t_measure(tensor: &AmplitudeTensor) -> Result<TMeasureDecomposition> {
    if tensor.modes() != 6 {
        return Err(Error::Dimension(format!("T-measure needs 6 modes, got {}", tensor.modes())));
    }
    let c = |i, j, k| tensor.c(i, j, k);
    let m1 = Matrix::from_rows(&[
        vec![c(1, 5, 6), -c(1, 4, 6), c(1, 4, 5)],
        vec![c(2, 5, 6), -c(2, 4, 6), c(2, 4, 5)],
        vec![c(3, 5, 6), -c(3, 4, 6), c(3, 4, 5)],
    ]);
    let m2 = Matrix::from_rows(&[
        vec![c(2, 3, 4), -c(1, 3, 4), c(1, 2, 4)],
        vec![c(2, 3, 5), -c(1, 3, 5), c(1, 2, 5)],
        vec![c(2, 3, 6), -c(1, 3, 6), c(1, 2, 6)],
    ]);
    let mu = c(1, 2, 3);
    let nu = c(4, 5, 6);
    let first = m1.matmul(&m2).trace() - mu * nu;
    let adj = adjugate(&m1).matmul(&adjugate(&m2)).trace();
    let value = 4.0 * (first * first - 4.0 * adj + 4.0 * mu * det3(&m1) + 4.0 * nu * det3(&m2));
    Ok(TMeasureDecomposition { m1, m2, mu, nu, value })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub value: f64,
    pub contributions: Vec<f64>,
}

/// `−Σ λ ln λ` in nats with `0·ln 0 = 0`.
pub fn jaynes_entropy(lambda: &[f64]) -> EntropyReport {
    let contributions: Vec<f64> = lambda.iter().map(|&l| if l > 0.0 { -l * l.ln() } else { 0.0 }).collect();
    EntropyReport { value: contributions.iter().sum(), contributions }
}

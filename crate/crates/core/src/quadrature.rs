//! Composite Gauss–Legendre quadrature on a truncated radial domain.
//!
//! This is the numerical oracle for the closed-form integrals in
//! [`crate::radial`]: it only ever sees point values of the integrand, so it
//! shares no algebra with the analytic path.

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    CompositeGaussLegendre,
}

#[derive(Debug, Clone)]
pub struct QuadratureOracle {
    pub panels: usize,
    pub order: usize,
    pub radius: f64,
    pub scheme: Scheme,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Default for QuadratureOracle {
    fn default() -> Self {
        Self::new(240, 20, 60.0)
    }
}

impl QuadratureOracle {
    pub fn new(panels: usize, order: usize, radius: f64) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Self { panels, order, radius, scheme: Scheme::CompositeGaussLegendre, nodes, weights }
    }

    pub fn node_count(&self) -> usize {
        self.panels * self.order
    }

    fn panel(&self, i: usize) -> (f64, f64) {
        let h = self.radius / self.panels as f64;
        (i as f64 * h, (i + 1) as f64 * h)
    }

    /// `∫_a^b f`.
    pub fn integrate_interval(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
    }

    /// `∫₀^R f(r) dr`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        (0..self.panels)
            .map(|i| {
                let (a, b) = self.panel(i);
                self.integrate_interval(a, b, &f)
            })
            .sum()
    }

    /// `(4π)² ∫∫ ρ₁(r₁) ρ₂(r₂) r₁² r₂² / max(r₁, r₂) dr₁ dr₂`.
    ///
    /// The potential of ρ₂ is accumulated panel by panel; the partial panel up
    /// to each outer node is integrated with its own Gauss–Legendre rule.
    pub fn coulomb(&self, rho1: impl Fn(f64) -> f64, rho2: impl Fn(f64) -> f64) -> f64 {
        let inner_q = |r: f64| rho2(r) * r * r;
        let inner_outer = |r: f64| rho2(r) * r;
        let total_outer = self.integrate(inner_outer);

        let mut below_q = 0.0; // ∫₀^a ρ₂ r²
        let mut below_o = 0.0; // ∫₀^a ρ₂ r
        let mut acc = 0.0;
        for i in 0..self.panels {
            let (a, b) = self.panel(i);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            let mut panel_sum = 0.0;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                let r = mid + half * x;
                let q = below_q + self.integrate_interval(a, r, inner_q);
                let o = below_o + self.integrate_interval(a, r, inner_outer);
                let potential = q / r + (total_outer - o);
                panel_sum += w * rho1(r) * r * r * potential;
            }
            acc += panel_sum * half;
            below_q += self.integrate_interval(a, b, inner_q);
            below_o += self.integrate_interval(a, b, inner_outer);
        }
        16.0 * PI * PI * acc
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on Pₙ.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

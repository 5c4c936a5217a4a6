//! Spherically symmetric functions of the form `f(r) = Σ c·r^k·e^{−βr}`.
//!
//! Overlap, kinetic, nuclear-attraction and electron-repulsion integrals over
//! this class all reduce to sums of Γ-type integrals and are evaluated in
//! closed form. The electron-repulsion kernel keeps only its monopole part,
//! `1/max(r₁, r₂)`, which is exact for spherically symmetric densities.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// Exponents closer than this (relative) are merged into one term.
const EXPONENT_MERGE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub power: u32,
    /// bohr⁻¹, strictly positive.
    pub exponent: f64,
}

/// A finite sum of `c·r^k·e^{−βr}` terms kept in canonical form: sorted by
/// `(power, exponent)`, at most one term per pair, no zero coefficients.
#[derive(Clone, PartialEq, Default)]
pub struct RadialFunction {
    terms: Vec<Term>,
}

impl RadialFunction {
    pub fn new(terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        let terms: Vec<Term> = terms.into_iter().collect();
        for t in &terms {
            if !(t.exponent.is_finite() && t.exponent > 0.0) {
                return Err(Error::InvalidParameter(format!("exponent must be positive, got {}", t.exponent)));
            }
            if !t.coeff.is_finite() {
                return Err(Error::InvalidParameter(format!("coefficient must be finite, got {}", t.coeff)));
            }
        }
        Ok(Self::canonical(terms))
    }

    /// `c·r^k·e^{−βr}`.
    pub fn monomial(coeff: f64, power: u32, exponent: f64) -> Result<Self> {
        Self::new([Term { coeff, power, exponent }])
    }

    pub fn zero() -> Self {
        Self::default()
    }

    fn canonical(mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| a.power.cmp(&b.power).then(a.exponent.total_cmp(&b.exponent)));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.power == t.power && same_exponent(last.exponent, t.exponent) => {
                    last.coeff += t.coeff;
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| t.coeff != 0.0);
        Self { terms: out }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_power(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.power).min()
    }

    pub fn max_power(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.power).max()
    }

    pub fn evaluate(&self, r: f64) -> f64 {
        self.terms.iter().map(|t| t.coeff * r.powi(t.power as i32) * (-t.exponent * r).exp()).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::canonical(self.terms.iter().map(|t| Term { coeff: t.coeff * s, ..*t }).collect())
    }

    pub fn add(&self, other: &RadialFunction) -> Self {
        Self::canonical(self.terms.iter().chain(&other.terms).copied().collect())
    }

    /// Pointwise product; powers and exponents add.
    pub fn product(&self, other: &RadialFunction) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term {
                    coeff: a.coeff * b.coeff,
                    power: a.power + b.power,
                    exponent: a.exponent + b.exponent,
                });
            }
        }
        Self::canonical(terms)
    }

    /// `r²·∇²f` with `∇²f = f″ + 2f′/r`.
    ///
    /// The bare Laplacian of `r^k e^{−βr}` carries `r^{k−2}` and `r^{k−1}`
    /// terms, which leave the class for k < 2; multiplying by r² keeps every
    /// power non-negative and is exactly what the 3-D kinetic integrand needs.
    pub fn r2_laplacian(&self) -> Self {
        let mut terms = Vec::with_capacity(3 * self.terms.len());
        for t in &self.terms {
            let k = f64::from(t.power);
            let b = t.exponent;
            terms.push(Term { coeff: t.coeff * k * (k + 1.0), power: t.power, exponent: b });
            terms.push(Term { coeff: -t.coeff * 2.0 * b * (k + 1.0), power: t.power + 1, exponent: b });
            terms.push(Term { coeff: t.coeff * b * b, power: t.power + 2, exponent: b });
        }
        Self::canonical(terms)
    }

    /// `∫₀^∞ f(r)·rⁿ dr = Σ c·(k+n)!/β^{k+n+1}`.
    pub fn moment_integral(&self, n: u32) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let m = t.power + n;
                t.coeff * factorial(m) / t.exponent.powi(m as i32 + 1)
            })
            .sum()
    }
}

impl fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{:.12}·r^{}·e^(-{}r)", t.coeff, t.power, t.exponent)?;
        }
        Ok(())
    }
}

fn same_exponent(a: f64, b: f64) -> bool {
    (a - b).abs() <= EXPONENT_MERGE_TOL * a.abs().max(b.abs())
}

const FACTORIALS: [f64; 32] = {
    let mut t = [1.0; 32];
    let mut i = 1;
    while i < 32 {
        t[i] = t[i - 1] * i as f64;
        i += 1;
    }
    t
};

/// n! for n < 32 (exact in f64 up to 22!).
pub fn factorial(n: u32) -> f64 {
    FACTORIALS[n as usize]
}

/// `∫₀^x rⁿ e^{−qr} dr = (n!/q^{n+1})·(1 − e^{−qx}·Σ_{m=0}^{n} (qx)^m/m!)`.
///
/// Below `qx = n+1` the bracket cancels, so the positive series
/// `x^{n+1} e^{−qx} Σ_k (qx)^k / ((n+1)…(n+1+k))` is used there.
pub fn incomplete_lower(n: u32, q: f64, x: f64) -> f64 {
    let qx = q * x;
    if qx < f64::from(n + 1) {
        let mut term = 1.0 / f64::from(n + 1);
        let mut sum = 0.0;
        let mut k = 0;
        while term > 1e-17 * sum {
            sum += term;
            k += 1;
            term *= qx / f64::from(n + 1 + k);
        }
        return x.powi(n as i32 + 1) * (-qx).exp() * sum;
    }
    let mut partial = 0.0;
    let mut term = 1.0;
    for m in 0..=n {
        if m > 0 {
            term *= qx / f64::from(m);
        }
        partial += term;
    }
    factorial(n) / q.powi(n as i32 + 1) * (1.0 - (-qx).exp() * partial)
}

/// `∫₀^∞ r₁^{m−1} e^{−p r₁} ∫₀^{r₁} r₂ⁿ e^{−q r₂} dr₂ dr₁` for m ≥ 1.
///
/// Two exact forms are used. When `q ≤ p` the closed form cancels badly, so
/// the positive series `Σ_{j>n} q^j (m−1+j)!/(j!·(p+q)^{m+j})` is summed
/// instead; its ratio is at most 1/2.
fn nested_gamma(m: u32, p: f64, n: u32, q: f64) -> f64 {
    debug_assert!(m >= 1);
    let s = p + q;
    if q <= p {
        // j = n+1 term, then recurrence t_{j+1} = t_j · q·(m+j)/((j+1)·s)
        let j0 = n + 1;
        let mut t = q.powi(j0 as i32) * factorial(m - 1 + j0) / (factorial(j0) * s.powi((m + j0) as i32));
        let mut sum = 0.0_f64;
        let mut j = j0;
        while t > 1e-18 * sum.abs() || j < j0 + 4 {
            sum += t;
            t *= q * f64::from(m + j) / (f64::from(j + 1) * s);
            j += 1;
            if j > j0 + 2000 {
                break;
            }
        }
        factorial(n) / q.powi(n as i32 + 1) * sum
    } else {
        let head = factorial(m - 1) / p.powi(m as i32);
        let mut tail = 0.0;
        for j in 0..=n {
            tail += q.powi(j as i32) / factorial(j) * factorial(m - 1 + j) / s.powi((m + j) as i32);
        }
        factorial(n) / q.powi(n as i32 + 1) * (head - tail)
    }
}

/// 3-D overlap `4π ∫ f g r² dr`.
pub fn overlap(f: &RadialFunction, g: &RadialFunction) -> f64 {
    4.0 * PI * f.product(g).moment_integral(2)
}

/// Kinetic matrix element `−½ ∫ f ∇² g d³r`.
pub fn kinetic(f: &RadialFunction, g: &RadialFunction) -> f64 {
    -0.5 * 4.0 * PI * f.product(&g.r2_laplacian()).moment_integral(0)
}

/// `∫ f g / r d³r`. The nuclear charge is not included.
pub fn nuclear(f: &RadialFunction, g: &RadialFunction) -> f64 {
    4.0 * PI * f.product(g).moment_integral(1)
}

/// Electron-repulsion integral `(f₁f₂|g₁g₂)`: electron 1 in `f₁f₂`,
/// electron 2 in `g₁g₂`.
pub fn coulomb(f1: &RadialFunction, f2: &RadialFunction, g1: &RadialFunction, g2: &RadialFunction) -> f64 {
    let rho1 = f1.product(f2);
    let rho2 = g1.product(g2);
    let mut total = 0.0;
    for a in rho1.terms() {
        for b in rho2.terms() {
            let m = a.power + 2;
            let n = b.power + 2;
            total += a.coeff
                * b.coeff
                * (nested_gamma(m, a.exponent, n, b.exponent) + nested_gamma(n, b.exponent, m, a.exponent));
        }
    }
    16.0 * PI * PI * total
}

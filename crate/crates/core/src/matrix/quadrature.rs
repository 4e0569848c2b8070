//! Quadrature for the integral representation of the logarithm,
//! `−log λ = ∫₀^∞ ((t+1)⁻¹ − λ(t+λ)⁻¹) dt/t`.
//!
//! After `t = e^s` the integrand is `1/(e^s+1) − λ/(e^s+λ)`, which decays like
//! `e^{−|s|}` at both ends, so a composite Gauss–Legendre rule on a finite
//! `s`-window is enough.

use crate::error::{Error, Result};

/// Composite Gauss–Legendre rule on `[lower, upper]` in the log variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureGrid {
    pub lower: f64,
    pub upper: f64,
    pub panels: usize,
    pub order: usize,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self {
            lower: -40.0,
            upper: 40.0,
            panels: 2000,
            order: 4,
        }
    }
}

/// Nodes and weights of the `order`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(order, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

impl QuadratureGrid {
    /// Integrates `f` over `[lower, upper]`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let (nodes, weights) = gauss_legendre(self.order);
        let h = (self.upper - self.lower) / self.panels as f64;
        let mut total = 0.0;
        for p in 0..self.panels {
            let mid = self.lower + (p as f64 + 0.5) * h;
            let mut panel = 0.0;
            for (x, w) in nodes.iter().zip(&weights) {
                panel += w * f(mid + 0.5 * h * x);
            }
            total += 0.5 * h * panel;
        }
        total
    }
}

/// Quadrature value of `−log λ` from the integral formula.
pub fn log_quadrature(lambda: f64, grid: &QuadratureGrid) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::NonPositive(lambda));
    }
    Ok(grid.integrate(|s| {
        let t = s.exp();
        1.0 / (t + 1.0) - lambda / (t + lambda)
    }))
}

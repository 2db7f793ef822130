//! Adaptive Gauss–Legendre quadrature on a finite interval.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const RULE_ORDER: usize = 10;
const MAX_DEPTH: u32 = 48;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
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
        if d != 0.0 {
            dp = d;
        }
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

pub struct AdaptiveGaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Default for AdaptiveGaussLegendre {
    fn default() -> Self {
        let (nodes, weights) = gauss_legendre(RULE_ORDER);
        Self { nodes, weights }
    }
}

impl AdaptiveGaussLegendre {
    fn rule<F: Fn(f64) -> f64>(&self, f: &F, lo: f64, hi: f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Integrates `f` over [lo, hi] to absolute tolerance `tol` by interval
    /// bisection, comparing the whole-interval rule with the two half rules.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
        if !(tol > 0.0) {
            return Err(Error::Parameter(format!("quadrature tolerance {tol}")));
        }
        if hi == lo {
            return Ok(0.0);
        }
        let whole = self.rule(&f, lo, hi);
        let mut stack = vec![(lo, hi, whole, tol, 0u32)];
        let mut total = 0.0;
        while let Some((a, b, estimate, tol, depth)) = stack.pop() {
            let m = 0.5 * (a + b);
            let left = self.rule(&f, a, m);
            let right = self.rule(&f, m, b);
            let refined = left + right;
            if !refined.is_finite() {
                return Err(Error::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
            }
            if (refined - estimate).abs() <= tol {
                total += refined;
            } else if depth >= MAX_DEPTH {
                return Err(Error::Quadrature(format!(
                    "tolerance {tol:e} not reached on [{a}, {b}] after {MAX_DEPTH} bisections"
                )));
            } else {
                stack.push((a, m, left, 0.5 * tol, depth + 1));
                stack.push((m, b, right, 0.5 * tol, depth + 1));
            }
        }
        Ok(total)
    }
}

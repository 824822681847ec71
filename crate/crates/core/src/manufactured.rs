//! Analytic test problems with closed-form source terms.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::forms::Problem;

/// `u = exp(alpha sin(a x + b y) + beta cos(c x + d y))`, solving `-lap u = f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManufacturedSolution {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Default for ManufacturedSolution {
    fn default() -> Self {
        ManufacturedSolution { alpha: 0.1, beta: 0.3, a: 5.1, b: -6.2, c: 4.3, d: 3.4 }
    }
}

impl ManufacturedSolution {
    fn phi(&self, x: f64, y: f64) -> f64 {
        self.alpha * (self.a * x + self.b * y).sin() + self.beta * (self.c * x + self.d * y).cos()
    }

    fn grad_phi(&self, x: f64, y: f64) -> [f64; 2] {
        let s1 = self.a * x + self.b * y;
        let s2 = self.c * x + self.d * y;
        [
            self.alpha * self.a * s1.cos() - self.beta * self.c * s2.sin(),
            self.alpha * self.b * s1.cos() - self.beta * self.d * s2.sin(),
        ]
    }

    pub fn u(&self, x: f64, y: f64) -> f64 {
        self.phi(x, y).exp()
    }

    pub fn grad_u(&self, x: f64, y: f64) -> [f64; 2] {
        let u = self.u(x, y);
        let g = self.grad_phi(x, y);
        [u * g[0], u * g[1]]
    }

    /// `f = -u (|grad phi|^2 + lap phi)`.
    pub fn f(&self, x: f64, y: f64) -> f64 {
        let g = self.grad_phi(x, y);
        let lap_phi = -self.alpha * (self.a * self.a + self.b * self.b) * (self.a * x + self.b * y).sin()
            - self.beta * (self.c * self.c + self.d * self.d) * (self.c * x + self.d * y).cos();
        -self.u(x, y) * (g[0] * g[0] + g[1] * g[1] + lap_phi)
    }

    /// Poisson problem with `kappa = 1`, `g_D = u` and `g_N = grad u . n`.
    pub fn problem(&self) -> Problem {
        let (s1, s2, s3) = (*self, *self, *self);
        Problem {
            kappa: Arc::new(|_, _| 1.0),
            source: Arc::new(move |x, y| s1.f(x, y)),
            dirichlet: Arc::new(move |x, y| s2.u(x, y)),
            neumann: Arc::new(move |x, y, n| {
                let g = s3.grad_u(x, y);
                g[0] * n[0] + g[1] * n[1]
            }),
        }
    }
}

/// A polynomial `u = sum c_ij x^i y^j`, used to check that the schemes
/// reproduce solutions from the discrete space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialSolution {
    pub terms: Vec<(u32, u32, f64)>,
}

impl PolynomialSolution {
    /// Every monomial of total degree at most `p` with fixed, distinct coefficients.
    pub fn full(p: u32) -> Self {
        let mut terms = Vec::new();
        for i in 0..=p {
            for j in 0..=(p - i) {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                terms.push((i, j, sign / (1.0 + i as f64 + 2.0 * j as f64)));
            }
        }
        PolynomialSolution { terms }
    }

    /// Degree `p` polynomial with the given coefficients, in `full` order.
    pub fn with_coefficients(p: u32, coeffs: &[f64]) -> Self {
        let mut s = Self::full(p);
        for (t, c) in s.terms.iter_mut().zip(coeffs) {
            t.2 = *c;
        }
        s
    }

    pub fn u(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|&(i, j, c)| c * x.powi(i as i32) * y.powi(j as i32)).sum()
    }

    pub fn grad_u(&self, x: f64, y: f64) -> [f64; 2] {
        let mut g = [0.0; 2];
        for &(i, j, c) in &self.terms {
            if i > 0 {
                g[0] += c * i as f64 * x.powi(i as i32 - 1) * y.powi(j as i32);
            }
            if j > 0 {
                g[1] += c * j as f64 * x.powi(i as i32) * y.powi(j as i32 - 1);
            }
        }
        g
    }

    pub fn f(&self, x: f64, y: f64) -> f64 {
        let mut lap = 0.0;
        for &(i, j, c) in &self.terms {
            if i > 1 {
                lap += c * (i * (i - 1)) as f64 * x.powi(i as i32 - 2) * y.powi(j as i32);
            }
            if j > 1 {
                lap += c * (j * (j - 1)) as f64 * x.powi(i as i32) * y.powi(j as i32 - 2);
            }
        }
        -lap
    }

    pub fn problem(&self) -> Problem {
        let (s1, s2, s3) = (self.clone(), self.clone(), self.clone());
        Problem {
            kappa: Arc::new(|_, _| 1.0),
            source: Arc::new(move |x, y| s1.f(x, y)),
            dirichlet: Arc::new(move |x, y| s2.u(x, y)),
            neumann: Arc::new(move |x, y, n| {
                let g = s3.grad_u(x, y);
                g[0] * n[0] + g[1] * n[1]
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_origin() {
        let m = ManufacturedSolution::default();
        assert!((m.u(0.0, 0.0) - 1.349858807576003).abs() < 1e-14);
        let g = m.grad_u(0.0, 0.0);
        let e = 0.3f64.exp();
        assert!((g[0] - e * 0.51).abs() < 1e-14);
        assert!((g[1] + e * 0.62).abs() < 1e-14);
    }

    #[test]
    fn polynomial_laplacian() {
        let p = PolynomialSolution::with_coefficients(2, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        // terms in order (0,0),(0,1),(0,2),(1,0),(1,1),(2,0): u = y^2 + x^2.
        assert_eq!(p.u(2.0, 3.0), 13.0);
        assert_eq!(p.f(0.3, 0.7), -4.0);
        assert_eq!(p.grad_u(1.0, 2.0), [2.0, 4.0]);
    }
}

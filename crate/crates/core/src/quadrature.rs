//! Gauss rules on the unit interval and collapsed (Duffy) rules on the
//! reference triangle with vertices (0,0), (1,0), (0,1).

/// A quadrature rule in reference coordinates.
///
/// For triangle rules `points` are `(x, y)` pairs and the weights sum to 1/2.
/// For face rules the points are parameters `t` in `[0, 1]` stored as `(t, 0)`
/// and the weights sum to 1; callers scale by the physical face length.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    pub exactness_degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(p[0], p[1]))
            .sum()
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..(m + 1) / 2 {
        // Chebyshev-like initial guess, then Newton on P_m.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, z);
        dp = if d != 0.0 { d } else { dp };
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = weight;
        w[m - 1 - i] = weight;
    }
    if m % 2 == 1 {
        x[m / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(m: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Gauss-Legendre rule on `[0, 1]` exact to at least `min_degree`.
pub fn face_quadrature(min_degree: usize) -> QuadratureRule {
    let m = min_degree / 2 + 1;
    let (x, w) = gauss_legendre(m);
    QuadratureRule {
        points: x.iter().map(|&xi| [0.5 * (xi + 1.0), 0.0]).collect(),
        weights: w.iter().map(|wi| 0.5 * wi).collect(),
        exactness_degree: 2 * m - 1,
    }
}

/// Collapsed Gauss rule on the reference triangle exact to at least `min_degree`.
///
/// The square `[0,1]^2` is mapped by `x = a (1 - b)`, `y = b`; the Jacobian
/// `(1 - b)` raises the degree in `b` by one, which the point count absorbs.
pub fn triangle_quadrature(min_degree: usize) -> QuadratureRule {
    let m = (min_degree + 1) / 2 + 1;
    let (x, w) = gauss_legendre(m);
    let mut points = Vec::with_capacity(m * m);
    let mut weights = Vec::with_capacity(m * m);
    for (xb, wb) in x.iter().zip(&w) {
        let b = 0.5 * (xb + 1.0);
        for (xa, wa) in x.iter().zip(&w) {
            let a = 0.5 * (xa + 1.0);
            points.push([a * (1.0 - b), b]);
            weights.push(0.25 * wa * wb * (1.0 - b));
        }
    }
    QuadratureRule {
        points,
        weights,
        exactness_degree: 2 * m - 2,
    }
}

//! Gauss-Legendre nodes and the product rule on the unit sphere.

use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes descending.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        weights[i] = w;
        nodes[m - 1 - i] = -x;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

/// `P_m(x)` and `P_m'(x)`.
pub fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    if m == 0 {
        return (1.0, 0.0);
    }
    let mut p0 = 1.0;
    let mut p1 = x;
    for l in 2..=m {
        let p2 = ((2 * l - 1) as f64 * x * p1 - (l - 1) as f64 * p0) / l as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product grid: Gauss-Legendre in `cos theta`, uniform trapezoid in `phi`.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    /// `cos theta` at each ring
    pub cos_theta: Vec<f64>,
    /// Gauss-Legendre weights, multiplied by the `phi` step `2 pi / n_phi`
    pub weights: Vec<f64>,
    pub n_phi: usize,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> SphereGrid {
        let (cos_theta, w) = gauss_legendre(n_theta);
        let dphi = 2.0 * PI / n_phi as f64;
        SphereGrid {
            cos_theta,
            weights: w.into_iter().map(|w| w * dphi).collect(),
            n_phi,
        }
    }

    pub fn n_theta(&self) -> usize {
        self.cos_theta.len()
    }

    pub fn len(&self) -> usize {
        self.cos_theta.len() * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn phi(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_phi as f64
    }

    /// Unit vector of node `(i, j)`.
    pub fn point(&self, i: usize, j: usize) -> [f64; 3] {
        let ct = self.cos_theta[i];
        let st = (1.0 - ct * ct).max(0.0).sqrt();
        let (sp, cp) = self.phi(j).sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Integral of `f` over the sphere, summed ring by ring in order.
    pub fn integrate(&self, mut f: impl FnMut([f64; 3]) -> f64) -> f64 {
        let mut total = 0.0;
        for i in 0..self.n_theta() {
            let ring: f64 = (0..self.n_phi).map(|j| f(self.point(i, j))).sum();
            total += self.weights[i] * ring;
        }
        total
    }
}

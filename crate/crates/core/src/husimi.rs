//! Husimi function `Q(z) = |<z|psi>|^2` and the Wehrl entropy
//! `S_W = -(n+1)/(4 pi) int Q ln Q dOmega`.
//!
//! Two evaluation routes are provided. [`wehrl_entropy`] integrates
//! `Q ln Q` on a product grid and doubles the resolution until successive
//! estimates agree. [`wehrl_entropy_of_stars`] factors `Q` over the stars,
//! `Q(y) = K prod_i (1 + y.v_i)/2`, and replaces each logarithm by its
//! degree-n Legendre projection, which leaves a band-limited integrand that a
//! fixed grid integrates exactly.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::SphereGrid;
use crate::states::{coherent_at, overlap, sqrt_binomial, state_to_constellation, Constellation, SpinState, Star};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Gauss-Legendre nodes in `cos theta` at the coarsest level; raised to `n + 1` if lower.
    pub n_theta: usize,
    /// Uniform nodes in `phi` at the coarsest level; raised to `2n + 2` if lower.
    pub n_phi: usize,
    /// Maximum number of resolution doublings.
    pub max_refinements: usize,
    pub tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            n_theta: 0,
            n_phi: 0,
            max_refinements: 12,
            tol: 1e-9,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tol(tol: f64) -> Self {
        QuadratureConfig { tol, ..Default::default() }
    }

    /// Coarsest-level resolution for `n` stars. `Q` is band-limited at
    /// degree `n`, so integrals of `Q` are exact from this level on.
    pub fn coarsest(&self, n: usize) -> (usize, usize) {
        (self.n_theta.max(n + 1), self.n_phi.max(2 * n + 2))
    }
}

/// Converged Wehrl entropy with the difference between the last two levels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WehrlEstimate {
    pub value: f64,
    pub achieved_tol: f64,
    pub refinements: usize,
    pub n_theta: usize,
    pub n_phi: usize,
}

/// `Q(star) = |<star|s>|^2`.
pub fn husimi(s: &SpinState, star: Star) -> f64 {
    let coh = coherent_at(star, s.n());
    overlap(&coh, s).expect("equal dimensions").norm_sqr()
}

/// Per-ring coefficients `sqrt(C(n,k)) cos^{n-k}(theta/2) sin^k(theta/2) psi_k`;
/// `<z|psi>` on the ring is their polynomial in `e^{-i phi}`.
fn ring_coefficients(amps: &[Complex64], cos_theta: f64) -> Vec<Complex64> {
    let n = amps.len() - 1;
    let c = ((1.0 + cos_theta) / 2.0).max(0.0).sqrt();
    let s = ((1.0 - cos_theta) / 2.0).max(0.0).sqrt();
    amps.iter()
        .enumerate()
        .map(|(k, &a)| a * (sqrt_binomial(n, k) * c.powi((n - k) as i32) * s.powi(k as i32)))
        .collect()
}

/// `(n+1)/(4 pi) * int g(Q) dOmega` on one grid, rings evaluated in parallel
/// and reduced in ring order.
fn integrate_husimi(amps: &[Complex64], grid: &SphereGrid, g: impl Fn(f64) -> f64 + Sync) -> f64 {
    let n = amps.len() - 1;
    let phases: Vec<Complex64> = (0..grid.n_phi)
        .map(|j| Complex64::from_polar(1.0, -grid.phi(j)))
        .collect();
    let rings: Vec<f64> = grid
        .cos_theta
        .par_iter()
        .map(|&ct| {
            let a = ring_coefficients(amps, ct);
            phases
                .iter()
                .map(|&x| {
                    let v = a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ak| acc * x + ak);
                    g(v.norm_sqr())
                })
                .sum()
        })
        .collect();
    let total: f64 = rings.iter().zip(&grid.weights).map(|(r, w)| r * w).sum();
    total * (n as f64 + 1.0) / (4.0 * PI)
}

fn q_ln_q(q: f64) -> f64 {
    if q > 0.0 {
        -q * q.ln()
    } else {
        0.0
    }
}

/// `(n+1)/(4 pi) int Q dOmega` on the coarsest grid; accepts unnormalized amplitudes.
pub fn husimi_normalization_of(amps: &[Complex64], q: &QuadratureConfig) -> f64 {
    let (nt, np) = q.coarsest(amps.len() - 1);
    integrate_husimi(amps, &SphereGrid::new(nt, np), |x| x)
}

pub fn husimi_normalization(s: &SpinState, q: &QuadratureConfig) -> f64 {
    husimi_normalization_of(s.amplitudes(), q)
}

/// Wehrl entropy at one fixed resolution.
pub fn wehrl_entropy_fixed(s: &SpinState, n_theta: usize, n_phi: usize) -> f64 {
    integrate_husimi(s.amplitudes(), &SphereGrid::new(n_theta, n_phi), q_ln_q)
}

/// Wehrl entropy by quadrature with doubling refinement.
///
/// `Q ln Q` is not smooth at the zeros of `Q`, so a single small difference
/// between two levels can be a coincidence of node placement; convergence
/// requires two consecutive differences below `tol`.
pub fn wehrl_entropy(s: &SpinState, q: &QuadratureConfig) -> Result<WehrlEstimate> {
    let (nt0, np0) = q.coarsest(s.n());
    let mut prev = wehrl_entropy_fixed(s, nt0, np0);
    let mut prev_diff = f64::INFINITY;
    let mut last = prev;
    for r in 1..=q.max_refinements {
        let (nt, np) = (nt0 << r, np0 << r);
        last = wehrl_entropy_fixed(s, nt, np);
        let diff = (last - prev).abs();
        if diff < q.tol && prev_diff < q.tol {
            return Ok(WehrlEstimate {
                value: last,
                achieved_tol: diff.max(prev_diff),
                refinements: r,
                n_theta: nt,
                n_phi: np,
            });
        }
        prev = last;
        prev_diff = diff;
    }
    Err(Error::NotConverged { previous: prev, last })
}

/// Zeros of the Husimi function: antipodes of the Majorana stars.
pub fn husimi_zeros(s: &SpinState) -> Result<Vec<Star>> {
    Ok(state_to_constellation(s)?.antipodal().stars)
}

/// Legendre coefficients of `ln((1+t)/2)` up to degree `n`:
/// `-1` at `l = 0`, `(-1)^{l+1} (2l+1) / (l(l+1))` above.
pub fn log_legendre_coefficients(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|l| {
            if l == 0 {
                -1.0
            } else {
                let sign = if l % 2 == 1 { 1.0 } else { -1.0 };
                sign * (2 * l + 1) as f64 / (l * (l + 1)) as f64
            }
        })
        .collect()
}

fn legendre_series(coeffs: &[f64], t: f64) -> f64 {
    let mut p0 = 1.0;
    let mut p1 = t;
    let mut sum = coeffs[0];
    if coeffs.len() > 1 {
        sum += coeffs[1] * t;
    }
    for (l, c) in coeffs.iter().enumerate().skip(2) {
        let p2 = ((2 * l - 1) as f64 * t * p1 - (l - 1) as f64 * p0) / l as f64;
        sum += c * p2;
        p0 = p1;
        p1 = p2;
    }
    sum
}

/// Wehrl entropy of the state whose stars are the unit vectors `stars`,
/// exact up to rounding.
pub fn wehrl_entropy_of_stars(stars: &[[f64; 3]]) -> f64 {
    let n = stars.len();
    if n == 0 {
        return 0.0;
    }
    let grid = SphereGrid::new(n + 1, 2 * n + 2);
    let coeffs = log_legendre_coefficients(n);
    let mut mass = 0.0;
    let mut log_part = 0.0;
    for i in 0..grid.n_theta() {
        let mut ring_mass = 0.0;
        let mut ring_log = 0.0;
        for j in 0..grid.n_phi {
            let y = grid.point(i, j);
            let mut p = 1.0;
            let mut l = 0.0;
            for v in stars {
                let t = y[0] * v[0] + y[1] * v[1] + y[2] * v[2];
                p *= (1.0 + t) / 2.0;
                l += legendre_series(&coeffs, t);
            }
            ring_mass += p;
            ring_log += p * l;
        }
        mass += grid.weights[i] * ring_mass;
        log_part += grid.weights[i] * ring_log;
    }
    let scale = (n as f64 + 1.0) / (4.0 * PI);
    // Q = K P with scale * K * mass = 1
    let ln_k = -(scale * mass).ln();
    -ln_k - log_part / mass
}

pub fn wehrl_entropy_of_constellation(c: &Constellation) -> f64 {
    wehrl_entropy_of_stars(&c.vectors())
}

/// Exact-route Wehrl entropy of a state, through its constellation.
pub fn wehrl_entropy_exact(s: &SpinState) -> Result<f64> {
    Ok(wehrl_entropy_of_constellation(&state_to_constellation(s)?))
}

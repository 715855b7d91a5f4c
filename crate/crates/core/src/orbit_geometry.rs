//! Geometry of SU(2) orbits through number states.
//!
//! The orbit point at `z1` carries `n - k` stars at `z1` and `k` at the
//! antipode. Small triangles `(0, delta, i delta)` on the orbit give the
//! metric from their Fubini-Study edge lengths and the symplectic form from
//! the phase of their Bargmann invariant.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::states::{constellation_to_state, overlap, Constellation, ExtComplex, SpinState, Star};

/// Overlaps smaller than this make a triangle edge undefined.
const VANISHING_OVERLAP: f64 = 1e-14;

/// Fubini-Study edge lengths and Bargmann phase of a triangle of states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TriangleData {
    pub d01: f64,
    pub d12: f64,
    pub d20: f64,
    /// principal argument of the Bargmann triple product, in `(-pi, pi]`
    pub area: f64,
}

/// State with `n - k` stars at `z1` and `k` stars at `-1/conj(z1)`.
pub fn number_orbit_state(n: usize, k: usize, z1: ExtComplex) -> Result<SpinState> {
    if k > n {
        return Err(Error::InvalidInput(format!("orbit point needs k <= n, got k={k}, n={n}")));
    }
    if n == 0 {
        return SpinState::number(0, 0);
    }
    let pile = Star::from_point(z1);
    let anti = Star::from_point(z1.antipode());
    let mut stars = vec![pile; n - k];
    stars.extend(std::iter::repeat(anti).take(k));
    constellation_to_state(&Constellation::new(stars))
}

/// Fubini-Study distance from the overlap, using the orthogonal residual
/// for the sine so small distances keep full precision.
fn fs_distance(a: &SpinState, b: &SpinState, ab: Complex64) -> f64 {
    let residual: f64 = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (y - ab * x).norm_sqr())
        .sum::<f64>()
        .sqrt();
    residual.atan2(ab.norm())
}

pub fn bargmann(psi0: &SpinState, psi1: &SpinState, psi2: &SpinState) -> Result<TriangleData> {
    let o01 = overlap(psi0, psi1)?;
    let o12 = overlap(psi1, psi2)?;
    let o20 = overlap(psi2, psi0)?;
    for (o, pair) in [(o01, (0, 1)), (o12, (1, 2)), (o20, (2, 0))] {
        if o.norm() < VANISHING_OVERLAP {
            return Err(Error::UndefinedTriangle(pair.0, pair.1));
        }
    }
    let triple = o01 * o12 * o20;
    Ok(TriangleData {
        d01: fs_distance(psi0, psi1, o01),
        d12: fs_distance(psi1, psi2, o12),
        d20: fs_distance(psi2, psi0, o20),
        area: triple.arg(),
    })
}

/// Coefficients of the orbit metric and symplectic form relative to the
/// unit-sphere metric `4 dz dzbar / (1+|z|^2)^2` and form
/// `4i dz ^ dzbar / (1+|z|^2)^2`: `((n + 2k(n-k))/4, (n - 2k)/4)`.
pub fn orbit_form_closed(n: usize, k: usize) -> (f64, f64) {
    let (n, k) = (n as f64, k as f64);
    ((n + 2.0 * k * (n - k)) / 4.0, (n - 2.0 * k) / 4.0)
}

/// Estimates from the triangle `(0, delta, i delta)`. At `z = 0` the metric is
/// `4 g |dz|^2` and the symplectic area of the triangle is `8 w delta^2 / 2`.
pub fn orbit_form_numeric(n: usize, k: usize, delta: f64) -> Result<(f64, f64)> {
    if !(delta > 0.0 && delta <= 1e-2) {
        return Err(Error::InvalidInput(format!("delta must lie in (0, 1e-2], got {delta}")));
    }
    let p0 = number_orbit_state(n, k, Complex64::new(0.0, 0.0).into())?;
    let p1 = number_orbit_state(n, k, Complex64::new(delta, 0.0).into())?;
    let p2 = number_orbit_state(n, k, Complex64::new(0.0, delta).into())?;
    let tri = bargmann(&p0, &p1, &p2)?;
    let g = tri.d01 * tri.d01 / (4.0 * delta * delta);
    let w = tri.area / (4.0 * delta * delta);
    Ok((g, w))
}

/// Richardson extrapolation from `delta` and `delta / 2`, assuming the leading
/// error is quadratic in `delta`.
pub fn orbit_form_extrapolated(n: usize, k: usize, delta: f64) -> Result<(f64, f64)> {
    let (g1, w1) = orbit_form_numeric(n, k, delta)?;
    let (g2, w2) = orbit_form_numeric(n, k, delta / 2.0)?;
    Ok(((4.0 * g2 - g1) / 3.0, (4.0 * w2 - w1) / 3.0))
}

/// One CSV row comparing closed form and extrapolated estimates.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct OrbitFormRow {
    pub n: usize,
    pub k: usize,
    pub g_coeff: f64,
    pub w_coeff: f64,
    pub g_est: f64,
    pub w_est: f64,
    pub g_err: f64,
    pub w_err: f64,
}

pub fn orbit_form_row(n: usize, k: usize, delta: f64) -> Result<OrbitFormRow> {
    let (g_coeff, w_coeff) = orbit_form_closed(n, k);
    let (g_est, w_est) = orbit_form_extrapolated(n, k, delta)?;
    Ok(OrbitFormRow {
        n,
        k,
        g_coeff,
        w_coeff,
        g_est,
        w_est,
        g_err: relative_error(g_est, g_coeff),
        w_err: relative_error(w_est, w_coeff),
    })
}

/// Relative error, absolute when the reference is zero.
pub fn relative_error(est: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        est.abs()
    } else {
        ((est - exact) / exact).abs()
    }
}

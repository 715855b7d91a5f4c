//! The Lieb-Solovej channel
//! `Phi(rho) = (a+^dag rho a+ + a-^dag rho a-) / (n + 2)`
//! from the `(n+1)`- to the `(n+2)`-dimensional block, its iterates, and the
//! spectra and majorization structure of its images.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng;
use crate::spin::rotation_matrix;
pub use crate::spin::SpinOperators;
use crate::states::SpinState;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_FLOOR: f64 = -1e-10;
const SPECTRUM_SUM_TOL: f64 = 1e-10;
const MAJORIZATION_TOL: f64 = 1e-10;

type CMatrix = DMatrix<Complex64>;

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<DensityMatrix> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::InvalidDensity(format!("shape {}x{}", m.nrows(), m.ncols())));
        }
        let herm = max_abs(&(&m - m.adjoint()));
        if herm > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let min = m.clone().symmetric_eigenvalues().min();
        if min < PSD_FLOOR {
            return Err(Error::InvalidDensity(format!("eigenvalue {min:e} below floor")));
        }
        Ok(DensityMatrix { m })
    }

    pub fn pure(s: &SpinState) -> DensityMatrix {
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        DensityMatrix { m: &v * v.adjoint() }
    }

    pub fn maximally_mixed(dim: usize) -> DensityMatrix {
        DensityMatrix {
            m: CMatrix::identity(dim, dim).map(|x| x / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    /// `U rho U^dag`.
    pub fn conjugate(&self, u: &CMatrix) -> DensityMatrix {
        DensityMatrix { m: u * &self.m * u.adjoint() }
    }
}

/// Descending eigenvalues summing to one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
}

impl Spectrum {
    /// Sorts descending and validates the sum and range.
    pub fn new(mut values: Vec<f64>) -> Result<Spectrum> {
        values.sort_by(|a, b| b.total_cmp(a));
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SPECTRUM_SUM_TOL {
            return Err(Error::InvalidSpectrum(format!("sum {sum}")));
        }
        if values.iter().any(|&v| !(PSD_FLOOR..=1.0 + SPECTRUM_SUM_TOL).contains(&v)) {
            return Err(Error::InvalidSpectrum(format!("entry outside [0, 1]: {values:?}")));
        }
        Ok(Spectrum { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.values.iter().filter(|&&v| v > tol).count()
    }

    /// Barycentric projection of the three largest eigenvalues onto an
    /// equilateral triangle with vertices `(0,0)`, `(1,0)`, `(1/2, sqrt3/2)`.
    pub fn barycentric(&self) -> (f64, f64) {
        let l = |i: usize| self.values.get(i).copied().unwrap_or(0.0);
        barycentric_xy([l(0), l(1), l(2)])
    }
}

pub fn barycentric_xy(p: [f64; 3]) -> (f64, f64) {
    let s = p[0] + p[1] + p[2];
    let (b, c) = (p[1] / s, p[2] / s);
    (b + 0.5 * c, c * 3f64.sqrt() / 2.0)
}

/// Ladder matrices `a+^dag`, `a-^dag` from the `n` block to the `n+1` block.
pub fn creation_operators(n: usize) -> (CMatrix, CMatrix) {
    let zero = Complex64::new(0.0, 0.0);
    let mut plus = CMatrix::from_element(n + 2, n + 1, zero);
    let mut minus = CMatrix::from_element(n + 2, n + 1, zero);
    for k in 0..=n {
        // a+^dag |n-k, k> = sqrt(n-k+1) |n+1-k, k>, a-^dag |n-k, k> = sqrt(k+1) |n-k, k+1>
        plus[(k, k)] = Complex64::new(((n - k + 1) as f64).sqrt(), 0.0);
        minus[(k + 1, k)] = Complex64::new(((k + 1) as f64).sqrt(), 0.0);
    }
    (plus, minus)
}

/// The channel on an arbitrary square matrix of the `n` block.
pub fn phi1_matrix(m: &CMatrix) -> CMatrix {
    let n = m.nrows() - 1;
    let (plus, minus) = creation_operators(n);
    (&plus * m * plus.adjoint() + &minus * m * minus.adjoint()).map(|x| x / (n as f64 + 2.0))
}

pub fn phi_iter_matrix(m: &CMatrix, steps: usize) -> CMatrix {
    (0..steps).fold(m.clone(), |acc, _| phi1_matrix(&acc))
}

pub fn phi1(rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix { m: phi1_matrix(&rho.m) }
}

pub fn phi_iter(rho: &DensityMatrix, steps: usize) -> DensityMatrix {
    DensityMatrix {
        m: phi_iter_matrix(&rho.m, steps),
    }
}

/// Hermitian eigenvalues of a square matrix, descending, clipped to `[0, 1]`
/// after checking the negative floor.
pub fn spectrum_of_matrix(m: &CMatrix) -> Result<Spectrum> {
    let herm = max_abs(&(m - m.adjoint()));
    if herm > HERMITIAN_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let eig = m.clone().symmetric_eigenvalues();
    if let Some(&min) = eig.iter().min_by(|a, b| a.total_cmp(b)) {
        if min < PSD_FLOOR {
            return Err(Error::InvalidSpectrum(format!("eigenvalue {min:e} below floor")));
        }
    }
    Spectrum::new(eig.iter().map(|&v| v.clamp(0.0, 1.0)).collect())
}

pub fn spectrum(rho: &DensityMatrix) -> Spectrum {
    spectrum_of_matrix(&rho.m).expect("density matrix invariants hold")
}

/// Whether every descending partial sum of `p` reaches that of `q`, up to `1e-10`.
pub fn majorizes(p: &Spectrum, q: &Spectrum) -> Result<bool> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(p.len(), q.len()));
    }
    let mut sp = 0.0;
    let mut sq = 0.0;
    for (a, b) in p.values.iter().zip(&q.values) {
        sp += a;
        sq += b;
        if sp < sq - MAJORIZATION_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Fubini-Study random state from stream 0 of `seed`.
pub fn sample_fubini_study(n: usize, seed: u64) -> SpinState {
    sample_fubini_study_indexed(n, seed, 0)
}

/// Normalized vector of `n + 1` independent standard complex Gaussians drawn
/// from stream `index` of `seed`.
pub fn sample_fubini_study_indexed(n: usize, seed: u64, index: u64) -> SpinState {
    let mut r = rng::stream(seed, index);
    gaussian_state(n, &mut r)
}

pub(crate) fn gaussian_state<R: Rng>(n: usize, r: &mut R) -> SpinState {
    loop {
        let amps: Vec<Complex64> = (0..=n)
            .map(|_| Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal)))
            .collect();
        if let Ok(s) = SpinState::new(amps) {
            return s;
        }
    }
}

/// Image spectrum of a pure number state `|n-k, k>` under `steps` channel applications.
pub fn number_image(n: usize, k: usize, steps: usize) -> Result<Spectrum> {
    Ok(spectrum(&phi_iter(&DensityMatrix::pure(&SpinState::number(n, k)?), steps)))
}

/// Image spectrum of a coherent state. All coherent states share it.
pub fn coherent_image(n: usize, steps: usize) -> Spectrum {
    number_image(n, 0, steps).expect("k = 0 is valid")
}

/// The distinct permutations of the three largest entries of `s`: the
/// orbit of a rank-3 spectrum in the 2-simplex.
pub fn simplex_orbit(s: &Spectrum) -> Vec<[f64; 3]> {
    let l = |i: usize| s.values.get(i).copied().unwrap_or(0.0);
    let (a, b, c) = (l(0), l(1), l(2));
    let mut out: Vec<[f64; 3]> = Vec::new();
    for p in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
        if !out.iter().any(|q| q.iter().zip(&p).all(|(x, y)| (x - y).abs() < 1e-15)) {
            out.push(p);
        }
    }
    out
}

/// Whether `point` is a convex combination of `vertices` within `slack` per
/// coordinate, decided as a linear-programming feasibility problem.
pub fn in_convex_hull(point: &[f64], vertices: &[Vec<f64>], slack: f64) -> Result<bool> {
    use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};
    let dim = point.len();
    if vertices.iter().any(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch(dim, vertices.first().map_or(0, |v| v.len())));
    }
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let weights: Vec<_> = vertices.iter().map(|_| lp.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let mut total = LinearExpr::empty();
    for &w in &weights {
        total.add(w, 1.0);
    }
    lp.add_constraint(total, ComparisonOp::Eq, 1.0);
    for c in 0..dim {
        let mut lo = LinearExpr::empty();
        let mut hi = LinearExpr::empty();
        for (w, v) in weights.iter().zip(vertices) {
            lo.add(*w, v[c]);
            hi.add(*w, v[c]);
        }
        lp.add_constraint(lo, ComparisonOp::Ge, point[c] - slack);
        lp.add_constraint(hi, ComparisonOp::Le, point[c] + slack);
    }
    match lp.solve() {
        Ok(_) => Ok(true),
        Err(microlp::Error::Infeasible) => Ok(false),
        Err(e) => Err(Error::LinearProgram(e.to_string())),
    }
}

/// Kind of a point in a spectra cloud.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum CloudKind {
    Sample,
    Number(usize),
    /// combination of the number states `k` and `k2`
    Segment(usize, usize),
}

impl CloudKind {
    pub fn label(&self) -> String {
        match self {
            CloudKind::Sample => "sample".into(),
            CloudKind::Number(k) => format!("number_{k}"),
            CloudKind::Segment(..) => "segment".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CloudPoint {
    pub kind: CloudKind,
    pub spectrum: Spectrum,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectraCloud {
    pub n: usize,
    pub steps: usize,
    pub coherent: Spectrum,
    pub points: Vec<CloudPoint>,
}

impl SpectraCloud {
    pub fn samples(&self) -> impl Iterator<Item = &Spectrum> {
        self.points
            .iter()
            .filter(|p| p.kind == CloudKind::Sample)
            .map(|p| &p.spectrum)
    }
}

/// Points sampled along each two-number-state segment.
pub const SEGMENT_POINTS: usize = 41;

/// Image spectra of `cos t |k> + sin t |k2>` for `cos^2 t` on a uniform grid.
pub fn segment_spectra(n: usize, k: usize, k2: usize, steps: usize, points: usize) -> Result<Vec<Spectrum>> {
    let a = SpinState::number(n, k)?;
    let b = SpinState::number(n, k2)?;
    (0..points)
        .map(|i| {
            let w = i as f64 / (points - 1).max(1) as f64;
            let amps = a
                .amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(x, y)| x * w.sqrt() + y * (1.0 - w).sqrt())
                .collect();
            let s = SpinState::new(amps)?;
            Ok(spectrum(&phi_iter(&DensityMatrix::pure(&s), steps)))
        })
        .collect()
}

/// Spectra of `count` Fubini-Study random states under `steps` applications
/// of the channel, followed by the number-state images and the segments
/// `|k - k2| > steps` between number states.
pub fn spectra_cloud(n: usize, steps: usize, count: usize, seed: u64) -> Result<SpectraCloud> {
    let samples: Vec<Spectrum> = (0..count)
        .into_par_iter()
        .map(|i| {
            let s = sample_fubini_study_indexed(n, seed, i as u64);
            spectrum(&phi_iter(&DensityMatrix::pure(&s), steps))
        })
        .collect();
    let mut points: Vec<CloudPoint> = samples
        .into_iter()
        .map(|spectrum| CloudPoint { kind: CloudKind::Sample, spectrum })
        .collect();
    for k in 0..=n {
        points.push(CloudPoint {
            kind: CloudKind::Number(k),
            spectrum: number_image(n, k, steps)?,
        });
    }
    for k in 0..=n {
        for k2 in k + steps + 1..=n {
            for spectrum in segment_spectra(n, k, k2, steps, SEGMENT_POINTS)? {
                points.push(CloudPoint { kind: CloudKind::Segment(k, k2), spectrum });
            }
        }
    }
    Ok(SpectraCloud {
        n,
        steps,
        coherent: coherent_image(n, steps),
        points,
    })
}

/// Maximum deviations found by [`covariance_check`].
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct CovarianceReport {
    /// `max |Phi(U rho U^dag) - U' Phi(rho) U'^dag|`
    pub rotation: f64,
    /// `max |Phi([S_i, rho]) - [S_i, Phi(rho)]|`
    pub commutator: f64,
    /// `max |spec Phi(U rho U^dag) - spec Phi(rho)|`
    pub isospectral: f64,
    /// `max |tr Phi(rho) - tr rho|`
    pub trace: f64,
    /// smallest eigenvalue of any image
    pub min_eigenvalue: f64,
}

impl CovarianceReport {
    pub fn max_deviation(&self) -> f64 {
        self.rotation.max(self.commutator).max(self.isospectral)
    }
}

pub(crate) fn random_density<R: Rng>(dim: usize, r: &mut R) -> DensityMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let m = m.map(|x| x / tr);
    // symmetrize away rounding
    let m = (&m + m.adjoint()).map(|x| x * 0.5);
    DensityMatrix::new(m).expect("Gram matrices are valid states")
}

/// Covariance of `Phi^steps` under the rotation group, checked on random
/// mixed states and random rotations drawn from `seed`.
pub fn covariance_check(n: usize, steps: usize, trials: usize, seed: u64) -> CovarianceReport {
    let ops_in = SpinOperators::new(n);
    let ops_out = SpinOperators::new(n + steps);
    let reports: Vec<CovarianceReport> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::stream(seed, t as u64);
            let rho = random_density(n + 1, &mut r);
            let axis = rng::unit_vector(&mut r);
            let angle: f64 = r.random_range(0.0..std::f64::consts::TAU);
            let u = rotation_matrix(n, axis, angle);
            let u_out = rotation_matrix(n + steps, axis, angle);
            let image = phi_iter(&rho, steps);
            let rotated_image = phi_iter(&rho.conjugate(&u), steps);
            let rotation = max_abs(&(rotated_image.matrix() - image.conjugate(&u_out).matrix()));
            let mut commutator = 0.0_f64;
            for (s_in, s_out) in ops_in.components().into_iter().zip(ops_out.components()) {
                let lhs = phi_iter_matrix(&(s_in * rho.matrix() - rho.matrix() * s_in), steps);
                let rhs = s_out * image.matrix() - image.matrix() * s_out;
                commutator = commutator.max(max_abs(&(lhs - rhs)));
            }
            let a = spectrum(&image);
            let b = spectrum(&rotated_image);
            let isospectral = a
                .values
                .iter()
                .zip(&b.values)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            let trace = (image.matrix().trace() - rho.matrix().trace()).norm();
            let min_eigenvalue = image.matrix().clone().symmetric_eigenvalues().min();
            CovarianceReport { rotation, commutator, isospectral, trace, min_eigenvalue }
        })
        .collect();
    reports.into_iter().fold(
        CovarianceReport { min_eigenvalue: f64::INFINITY, ..Default::default() },
        |acc, r| CovarianceReport {
            rotation: acc.rotation.max(r.rotation),
            commutator: acc.commutator.max(r.commutator),
            isospectral: acc.isospectral.max(r.isospectral),
            trace: acc.trace.max(r.trace),
            min_eigenvalue: acc.min_eigenvalue.min(r.min_eigenvalue),
        },
    )
}

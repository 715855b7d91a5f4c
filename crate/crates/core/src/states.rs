//! Spin states in the number basis and their Majorana constellations.
//!
//! A state of `n` stars lives in `C^{n+1}` with amplitudes `psi_k` on the
//! number states `|n-k, k>`. The Majorana polynomial
//! `w(zeta) = sum_k (-1)^k sqrt(C(n,k)) psi_k zeta^{n-k}` has the stereographic
//! images `z = tan(theta/2) e^{i phi}` of the stars as roots; stars at the
//! South Pole lower its degree.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;

const NORM_TOL: f64 = 1e-12;
/// Leading Majorana coefficients below this fraction of the largest one are
/// read as roots at infinity.
pub const DEGREE_DEFICIENCY_TOL: f64 = 1e-12;

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub(crate) fn sqrt_binomial(n: usize, k: usize) -> f64 {
    binomial(n, k).sqrt()
}

/// A point of the extended complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    /// Antipode on the Riemann sphere, `z -> -1/conj(z)`.
    pub fn antipode(self) -> ExtComplex {
        match self {
            ExtComplex::Infinity => ExtComplex::Finite(Complex64::new(0.0, 0.0)),
            ExtComplex::Finite(z) if z.norm() == 0.0 => ExtComplex::Infinity,
            ExtComplex::Finite(z) => ExtComplex::Finite(-1.0 / z.conj()),
        }
    }
}

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        ExtComplex::Finite(z)
    }
}

/// A point on the unit sphere given by colatitude and longitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Star {
    pub theta: f64,
    pub phi: f64,
}

impl Star {
    /// Builds a star, clamping `theta` to `[0, pi]` and wrapping `phi` into `[0, 2 pi)`.
    pub fn new(theta: f64, phi: f64) -> Star {
        let theta = theta.clamp(0.0, PI);
        let mut phi = phi.rem_euclid(2.0 * PI);
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        Star { theta, phi }
    }

    pub fn north() -> Star {
        Star { theta: 0.0, phi: 0.0 }
    }

    pub fn south() -> Star {
        Star { theta: PI, phi: 0.0 }
    }

    /// Inverse stereographic projection, `z = tan(theta/2) e^{i phi}`.
    pub fn from_point(z: ExtComplex) -> Star {
        match z {
            ExtComplex::Infinity => Star::south(),
            ExtComplex::Finite(z) => Star::new(2.0 * z.norm().atan(), z.arg()),
        }
    }

    pub fn to_point(self) -> ExtComplex {
        if self.theta >= PI {
            ExtComplex::Infinity
        } else {
            ExtComplex::Finite(Complex64::from_polar((self.theta / 2.0).tan(), self.phi))
        }
    }

    pub fn from_vector(v: [f64; 3]) -> Star {
        let rho = (v[0] * v[0] + v[1] * v[1]).sqrt();
        Star::new(rho.atan2(v[2]), v[1].atan2(v[0]))
    }

    pub fn to_vector(self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn antipode(self) -> Star {
        Star::new(PI - self.theta, self.phi + PI)
    }

    /// Homogeneous root coordinates `(cos(theta/2), sin(theta/2) e^{i phi})`.
    pub fn spinor(self) -> (Complex64, Complex64) {
        let (s, c) = (self.theta / 2.0).sin_cos();
        (Complex64::new(c, 0.0), Complex64::from_polar(s, self.phi))
    }

    pub fn chordal_distance(self, other: Star) -> f64 {
        chordal(self.to_vector(), other.to_vector())
    }
}

pub(crate) fn chordal(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// An unordered multiset of stars.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Constellation {
    pub stars: Vec<Star>,
}

impl Constellation {
    pub fn new(stars: Vec<Star>) -> Constellation {
        Constellation { stars }
    }

    pub fn n(&self) -> usize {
        self.stars.len()
    }

    pub fn vectors(&self) -> Vec<[f64; 3]> {
        self.stars.iter().map(|s| s.to_vector()).collect()
    }

    pub fn from_vectors(vs: &[[f64; 3]]) -> Constellation {
        Constellation::new(vs.iter().map(|&v| Star::from_vector(v)).collect())
    }

    pub fn antipodal(&self) -> Constellation {
        Constellation::new(self.stars.iter().map(|s| s.antipode()).collect())
    }

    /// Largest pairwise chordal distance, zero for fewer than two stars.
    pub fn diameter(&self) -> f64 {
        let vs = self.vectors();
        let mut best = 0.0_f64;
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                best = best.max(chordal(vs[i], vs[j]));
            }
        }
        best
    }
}

/// A normalized vector of `n + 1` amplitudes in the basis `|n-k, k>`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinState {
    amps: Vec<Complex64>,
}

impl SpinState {
    /// Normalizes `amps`. Fails on an empty or zero vector.
    pub fn new(amps: Vec<Complex64>) -> Result<SpinState> {
        if amps.is_empty() {
            return Err(Error::InvalidInput("state needs at least one amplitude".into()));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::ZeroState);
        }
        Ok(SpinState {
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// The number state `|n-k, k>`.
    pub fn number(n: usize, k: usize) -> Result<SpinState> {
        if k > n {
            return Err(Error::InvalidInput(format!("number state needs k <= n, got k={k}, n={n}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n + 1];
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(SpinState { amps })
    }

    pub fn n(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Multiplies by a global phase so the first nonzero amplitude is real positive.
    pub fn with_canonical_phase(mut self) -> SpinState {
        let max = self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
        if let Some(first) = self.amps.iter().find(|a| a.norm() > NORM_TOL * max) {
            let phase = first.conj() / first.norm();
            for a in &mut self.amps {
                *a *= phase;
            }
        }
        self
    }

    /// `|<self|other>|`.
    pub fn fidelity(&self, other: &SpinState) -> Result<f64> {
        Ok(overlap(self, other)?.norm())
    }
}

/// The Hermitian inner product `<a|b>`.
pub fn overlap(a: &SpinState, b: &SpinState) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    Ok(a.amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Majorana polynomial coefficients, highest power `zeta^n` first.
pub fn majorana_coefficients(s: &SpinState) -> Vec<Complex64> {
    let n = s.n();
    s.amps
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            a * (sign * sqrt_binomial(n, k))
        })
        .collect()
}

/// The state whose Majorana roots are the given stars.
pub fn constellation_to_state(c: &Constellation) -> Result<SpinState> {
    let n = c.n();
    if n == 0 {
        return Err(Error::Unsupported("a constellation needs at least one star".into()));
    }
    // product of (u zeta - v) over the homogeneous root coordinates; a South
    // Pole star has u = 0 and only rescales, which drops the degree by one
    let mut w = vec![Complex64::new(1.0, 0.0)];
    for star in &c.stars {
        let (u, v) = star.spinor();
        w = poly::multiply(&w, &[u, -v]);
    }
    let amps = w
        .iter()
        .enumerate()
        .map(|(k, &coeff)| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            coeff * (sign / sqrt_binomial(n, k))
        })
        .collect();
    Ok(SpinState::new(amps)?.with_canonical_phase())
}

/// The constellation of a state: roots of its Majorana polynomial.
pub fn state_to_constellation(s: &SpinState) -> Result<Constellation> {
    let coeffs = majorana_coefficients(s);
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if !(max > 0.0) {
        return Err(Error::ZeroState);
    }
    let at_infinity = coeffs
        .iter()
        .take_while(|c| c.norm() < DEGREE_DEFICIENCY_TOL * max)
        .count();
    let mut stars = vec![Star::south(); at_infinity];
    let finite = poly::roots(&coeffs[at_infinity..])?;
    stars.extend(finite.into_iter().map(|z| Star::from_point(ExtComplex::Finite(z))));
    Ok(Constellation::new(stars))
}

/// The spin coherent state `|z>`: all `n` stars at the image of `z`.
pub fn coherent_state(z: ExtComplex, n: usize) -> SpinState {
    let (u, v) = match z {
        ExtComplex::Infinity => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        ExtComplex::Finite(z) => {
            let r = (1.0 + z.norm_sqr()).sqrt();
            (Complex64::new(1.0 / r, 0.0), z / r)
        }
    };
    let amps = (0..=n)
        .map(|k| u.powu((n - k) as u32) * v.powu(k as u32) * sqrt_binomial(n, k))
        .collect();
    SpinState { amps }
}

/// Coherent state with all stars at `star`.
pub fn coherent_at(star: Star, n: usize) -> SpinState {
    let (u, v) = star.spinor();
    let amps = (0..=n)
        .map(|k| u.powu((n - k) as u32) * v.powu(k as u32) * sqrt_binomial(n, k))
        .collect();
    SpinState { amps }
}

/// One regular polygon of a polygon constellation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ring {
    pub count: usize,
    /// colatitude of the ring
    pub theta: f64,
    /// longitude of the first vertex
    pub twist: f64,
}

/// Constellation of type `kN - k1 - ... - kS`: `north` stars at the North
/// Pole, regular polygons on latitude circles, `south` stars at the South Pole.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonSpec {
    pub n: usize,
    pub north: usize,
    pub rings: Vec<Ring>,
    pub south: usize,
}

impl PolygonSpec {
    pub fn validate(&self) -> Result<()> {
        let total = self.north + self.south + self.rings.iter().map(|r| r.count).sum::<usize>();
        if total != self.n {
            return Err(Error::InvalidInput(format!(
                "polygon counts sum to {total}, expected n = {}",
                self.n
            )));
        }
        for (i, r) in self.rings.iter().enumerate() {
            if r.count == 0 {
                return Err(Error::InvalidInput(format!("ring {i} is empty")));
            }
            if !(r.theta > 0.0 && r.theta < PI) {
                return Err(Error::InvalidInput(format!(
                    "ring {i} latitude {} outside (0, pi)",
                    r.theta
                )));
            }
        }
        Ok(())
    }

    /// Type label such as `1-4-0`.
    pub fn label(&self) -> String {
        let mut parts = vec![self.north.to_string()];
        parts.extend(self.rings.iter().map(|r| r.count.to_string()));
        parts.push(self.south.to_string());
        parts.join("-")
    }

    pub fn constellation(&self) -> Result<Constellation> {
        self.validate()?;
        let mut stars = vec![Star::north(); self.north];
        for ring in &self.rings {
            for r in 0..ring.count {
                let phi = ring.twist + 2.0 * PI * r as f64 / ring.count as f64;
                stars.push(Star::new(ring.theta, phi));
            }
        }
        stars.extend(std::iter::repeat(Star::south()).take(self.south));
        Ok(Constellation::new(stars))
    }
}

/// The polygon constellation and its state.
pub fn polygon_constellation(spec: &PolygonSpec) -> Result<(Constellation, SpinState)> {
    let c = spec.constellation()?;
    let s = constellation_to_state(&c)?;
    Ok((c, s))
}

/// Time reversal: the state whose constellation is the antipodal image.
pub fn time_reverse(s: &SpinState) -> SpinState {
    let n = s.n();
    let amps = (0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            s.amps[n - k].conj() * sign
        })
        .collect();
    SpinState { amps }.with_canonical_phase()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_state_eq(a: &SpinState, b: &[Complex64], tol: f64) {
        assert_eq!(a.dim(), b.len());
        for (x, y) in a.amplitudes().iter().zip(b) {
            assert!((x - y).norm() <= tol, "{:?} vs {:?}", a.amplitudes(), b);
        }
    }

    fn equatorial_triangle() -> Constellation {
        Constellation::new((0..3).map(|r| Star::new(PI / 2.0, 2.0 * PI * r as f64 / 3.0)).collect())
    }

    /// Expands prod (zeta - z_i) through elementary symmetric functions built
    /// by the subset recursion, independently of the homogeneous route.
    fn symmetric_function_state(roots: &[Complex64]) -> Vec<Complex64> {
        let n = roots.len();
        let mut e = vec![c(0.0, 0.0); n + 1];
        e[0] = c(1.0, 0.0);
        for &z in roots {
            for k in (1..=n).rev() {
                e[k] = e[k] + e[k - 1] * z;
            }
        }
        let amps: Vec<Complex64> = (0..=n).map(|k| e[k] / binomial(n, k).sqrt()).collect();
        SpinState::new(amps).unwrap().with_canonical_phase().into_amplitudes()
    }

    #[test]
    fn north_pile_is_top_number_state() {
        let s = constellation_to_state(&Constellation::new(vec![Star::north(); 5])).unwrap();
        let mut want = vec![c(0.0, 0.0); 6];
        want[0] = c(1.0, 0.0);
        assert_state_eq(&s, &want, 1e-15);
    }

    #[test]
    fn south_pile_is_bottom_number_state() {
        let s = constellation_to_state(&Constellation::new(vec![Star::south(); 4])).unwrap();
        let mut want = vec![c(0.0, 0.0); 5];
        want[4] = c(1.0, 0.0);
        assert_state_eq(&s, &want, 1e-15);
    }

    #[test]
    fn equatorial_triangle_state() {
        let s = constellation_to_state(&equatorial_triangle()).unwrap();
        let want = [c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0)];
        assert_state_eq(&s, &want, 1e-15);
        let roots: Vec<Complex64> = (0..3)
            .map(|r| Complex64::from_polar(1.0, 2.0 * PI * r as f64 / 3.0))
            .collect();
        assert_state_eq(&s, &symmetric_function_state(&roots), 1e-14);
    }

    #[test]
    fn matches_symmetric_function_expansion() {
        let roots = [c(0.3, 0.1), c(-1.5, 2.0), c(0.0, -0.4), c(2.2, 0.0), c(-0.1, -0.1)];
        let stars = roots.iter().map(|&z| Star::from_point(z.into())).collect();
        let s = constellation_to_state(&Constellation::new(stars)).unwrap();
        assert_state_eq(&s, &symmetric_function_state(&roots), 1e-12);
    }

    #[test]
    fn south_stars_shift_coefficients() {
        // one finite root at z = 1 and one root at infinity: w = zeta - 1 of degree 1
        let cst = Constellation::new(vec![Star::new(PI / 2.0, 0.0), Star::south()]);
        let s = constellation_to_state(&cst).unwrap();
        // w = v - u zeta with u = v = 1/sqrt2, so psi_1 : psi_2 = 1 : sqrt2
        let want = SpinState::new(vec![c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), c(1.0, 0.0)]).unwrap();
        assert_state_eq(&s, want.amplitudes(), 1e-15);
    }

    #[test]
    fn empty_constellation_unsupported() {
        assert!(matches!(
            constellation_to_state(&Constellation::default()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn triangle_state_round_trip() {
        let s = SpinState::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let cst = state_to_constellation(&s).unwrap();
        for star in &cst.stars {
            assert_abs_diff_eq!(star.theta, PI / 2.0, epsilon = 1e-12);
        }
        let mut phis: Vec<f64> = cst.stars.iter().map(|s| s.phi).collect();
        phis.sort_by(f64::total_cmp);
        for (p, want) in phis.iter().zip([0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]) {
            let d = (p - want).abs().min((p - want - 2.0 * PI).abs());
            assert!(d < 1e-12, "{phis:?}");
        }
        let back = constellation_to_state(&cst).unwrap();
        assert!(back.fidelity(&s).unwrap() > 1.0 - 1e-14);
    }

    #[test]
    fn number_state_stars_at_poles() {
        let cst = state_to_constellation(&SpinState::number(6, 0).unwrap()).unwrap();
        assert!(cst.stars.iter().all(|s| s.theta == 0.0));
        let cst = state_to_constellation(&SpinState::number(6, 2).unwrap()).unwrap();
        assert_eq!(cst.stars.iter().filter(|s| s.theta == PI).count(), 2);
        assert_eq!(cst.stars.iter().filter(|s| s.theta == 0.0).count(), 4);
    }

    #[test]
    fn coherent_state_has_coincident_stars() {
        let z = c(0.4, -0.9);
        let cst = state_to_constellation(&coherent_state(z.into(), 3)).unwrap();
        let target = Star::from_point(z.into());
        for s in &cst.stars {
            // multiple roots are only accurate to about eps^(1/3)
            assert!(s.chordal_distance(target) < 1e-4);
        }
    }

    #[test]
    fn coherent_state_examples() {
        assert_state_eq(
            &coherent_state(c(0.0, 0.0).into(), 4),
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            1e-15,
        );
        assert_state_eq(
            &coherent_state(c(1.0, 0.0).into(), 1),
            &[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
            1e-15,
        );
        let want = [c(0.5, 0.0), c(0.0, FRAC_1_SQRT_2), c(-0.5, 0.0)];
        let s = coherent_state(c(0.0, 1.0).into(), 2);
        assert_state_eq(&s, &want, 1e-15);
        let via_stars =
            constellation_to_state(&Constellation::new(vec![Star::new(PI / 2.0, PI / 2.0); 2])).unwrap();
        assert_state_eq(&via_stars, &want, 1e-15);
        let inf = coherent_state(ExtComplex::Infinity, 3);
        assert_state_eq(&inf, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 0.0);
    }

    #[test]
    fn overlap_examples() {
        let s = coherent_state(c(0.2, 0.3).into(), 5);
        assert_abs_diff_eq!(overlap(&s, &s).unwrap().re, 1.0, epsilon = 1e-14);
        let a = SpinState::number(4, 0).unwrap();
        let b = SpinState::number(4, 4).unwrap();
        assert_eq!(overlap(&a, &b).unwrap(), c(0.0, 0.0));
        assert!(matches!(
            overlap(&a, &SpinState::number(3, 0).unwrap()),
            Err(Error::DimensionMismatch(4, 3))
        ));
    }

    #[test]
    fn coherent_overlap_matches_binomial_sum() {
        let (z, w, n) = (c(0.3, -0.8), c(-1.1, 0.25), 6);
        let got = overlap(&coherent_state(z.into(), n), &coherent_state(w.into(), n)).unwrap();
        // binomial sum of conj(z)^k w^k over the unnormalized components
        let sum: Complex64 = (0..=n).map(|k| (z.conj() * w).powu(k as u32) * binomial(n, k)).sum();
        let want = sum / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).powf(n as f64 / 2.0);
        let closed = (c(1.0, 0.0) + z.conj() * w).powu(n as u32)
            / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).powf(n as f64 / 2.0);
        assert!((got - want).norm() < 1e-14);
        assert!((got - closed).norm() < 1e-14);
    }

    #[test]
    fn single_ring_has_two_amplitudes() {
        let theta = 1.1;
        let spec = PolygonSpec {
            n: 5,
            north: 1,
            rings: vec![Ring { count: 4, theta, twist: 0.3 }],
            south: 0,
        };
        let (cst, s) = polygon_constellation(&spec).unwrap();
        assert_eq!(cst.n(), 5);
        let support: Vec<usize> = (0..=5).filter(|&k| s.amplitudes()[k].norm() > 1e-12).collect();
        assert_eq!(support, vec![0, 4]);
        // two-term vector sqrt((kN+k1)! kS!) |kN+k1, kS> + s w^k1 sqrt(kN! (k1+kS)!) |kN, k1+kS>
        // with sign s = (-1)^(k1+1) from zeta^k1 - w^k1
        let omega = Complex64::from_polar((theta / 2.0).tan(), 0.3);
        let fact = |m: usize| (1..=m).map(|i| i as f64).product::<f64>();
        let a0 = c((fact(5) * fact(0)).sqrt(), 0.0);
        let a4 = -omega.powu(4) * (fact(1) * fact(4)).sqrt();
        let mut want = vec![c(0.0, 0.0); 6];
        want[0] = a0;
        want[4] = a4;
        let want = SpinState::new(want).unwrap().with_canonical_phase();
        assert_state_eq(&s, want.amplitudes(), 1e-14);
    }

    #[test]
    fn single_ring_with_south_stars() {
        let spec = PolygonSpec {
            n: 6,
            north: 2,
            rings: vec![Ring { count: 3, theta: 2.0, twist: -0.4 }],
            south: 1,
        };
        let (_, s) = polygon_constellation(&spec).unwrap();
        let support: Vec<usize> = (0..=6).filter(|&k| s.amplitudes()[k].norm() > 1e-12).collect();
        assert_eq!(support, vec![1, 4]);
    }

    #[test]
    fn two_squares_span_three_number_states() {
        let spec = PolygonSpec {
            n: 8,
            north: 0,
            rings: vec![
                Ring { count: 4, theta: 0.9, twist: 0.0 },
                Ring { count: 4, theta: 2.1, twist: PI / 4.0 },
            ],
            south: 0,
        };
        let (_, s) = polygon_constellation(&spec).unwrap();
        let support: Vec<usize> = (0..=8).filter(|&k| s.amplitudes()[k].norm() > 1e-12).collect();
        assert_eq!(support, vec![0, 4, 8]);
    }

    #[test]
    fn two_distinct_rings_span_four_number_states() {
        let spec = PolygonSpec {
            n: 6,
            north: 1,
            rings: vec![
                Ring { count: 2, theta: 0.9, twist: 0.2 },
                Ring { count: 3, theta: 2.1, twist: 0.5 },
            ],
            south: 0,
        };
        let (_, s) = polygon_constellation(&spec).unwrap();
        let support: Vec<usize> = (0..=6).filter(|&k| s.amplitudes()[k].norm() > 1e-12).collect();
        assert_eq!(support, vec![0, 2, 3, 5]);
    }

    #[test]
    fn equatorial_triangle_polygon() {
        let spec = PolygonSpec {
            n: 3,
            north: 0,
            rings: vec![Ring { count: 3, theta: PI / 2.0, twist: 0.0 }],
            south: 0,
        };
        let (_, s) = polygon_constellation(&spec).unwrap();
        let want = [c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0)];
        assert_state_eq(&s, &want, 1e-15);
    }

    #[test]
    fn polygon_counts_must_sum() {
        let spec = PolygonSpec {
            n: 6,
            north: 1,
            rings: vec![Ring { count: 4, theta: 1.0, twist: 0.0 }],
            south: 0,
        };
        assert!(polygon_constellation(&spec).is_err());
    }

    #[test]
    fn roots_of_unity_ring_identity() {
        // prod_r (zeta - w q^r) = zeta^k - w^k: only the first and last
        // elementary symmetric functions of the k-th roots of unity survive
        for k in 1..=9usize {
            let w = c(0.7, -0.35);
            let q = Complex64::from_polar(1.0, 2.0 * PI / k as f64);
            let p = (0..k).fold(vec![c(1.0, 0.0)], |acc, r| {
                poly::multiply(&acc, &[c(1.0, 0.0), -w * q.powu(r as u32)])
            });
            for (i, coeff) in p.iter().enumerate() {
                let want = if i == 0 {
                    c(1.0, 0.0)
                } else if i == k {
                    -w.powu(k as u32)
                } else {
                    c(0.0, 0.0)
                };
                assert!((coeff - want).norm() < 1e-12, "k={k} i={i} {coeff}");
            }
        }
    }

    #[test]
    fn time_reverse_examples() {
        let s = time_reverse(&SpinState::number(5, 0).unwrap());
        assert_state_eq(&s, SpinState::number(5, 5).unwrap().amplitudes(), 0.0);

        // the antipodal triangle is the original turned by pi about the polar axis
        let tri = constellation_to_state(&equatorial_triangle()).unwrap();
        let rev = time_reverse(&tri);
        let turned = Constellation::new(
            equatorial_triangle().stars.iter().map(|s| Star::new(s.theta, s.phi + PI)).collect(),
        );
        assert!(rev.fidelity(&constellation_to_state(&turned).unwrap()).unwrap() > 1.0 - 1e-14);
        assert_state_eq(&rev, &[c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-FRAC_1_SQRT_2, 0.0)], 1e-15);
        for star in state_to_constellation(&rev).unwrap().stars {
            assert_abs_diff_eq!(star.theta, PI / 2.0, epsilon = 1e-12);
            let sector = (star.phi - PI / 3.0).rem_euclid(2.0 * PI / 3.0);
            assert!(sector < 1e-12 || sector > 2.0 * PI / 3.0 - 1e-12);
        }

        let z = c(0.6, 1.3);
        let rev = time_reverse(&coherent_state(z.into(), 4));
        let ExtComplex::Finite(anti) = ExtComplex::Finite(z).antipode() else { unreachable!() };
        assert_abs_diff_eq!(anti.re, (-1.0 / z.conj()).re, epsilon = 1e-15);
        let want = coherent_state(anti.into(), 4);
        assert!(rev.fidelity(&want).unwrap() > 1.0 - 1e-14);
    }

    #[test]
    fn time_reverse_is_antipodal_on_stars() {
        let s = SpinState::new(vec![c(0.3, 0.1), c(-0.5, 0.2), c(0.1, 0.9), c(0.4, -0.3)]).unwrap();
        let rev = time_reverse(&s);
        let expected = constellation_to_state(&state_to_constellation(&s).unwrap().antipodal()).unwrap();
        assert!(rev.fidelity(&expected).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn star_conversions() {
        let s = Star::new(1.2, -0.5);
        assert!(s.phi >= 0.0 && s.phi < 2.0 * PI);
        let back = Star::from_vector(s.to_vector());
        assert_abs_diff_eq!(back.theta, s.theta, epsilon = 1e-15);
        assert_abs_diff_eq!(back.phi, s.phi, epsilon = 1e-14);
        let ExtComplex::Finite(z) = s.to_point() else { panic!() };
        let again = Star::from_point(z.into());
        assert_abs_diff_eq!(again.theta, s.theta, epsilon = 1e-15);
        assert_eq!(Star::south().to_point(), ExtComplex::Infinity);
        assert_abs_diff_eq!(Star::north().chordal_distance(Star::south()), 2.0, epsilon = 1e-15);
    }
}

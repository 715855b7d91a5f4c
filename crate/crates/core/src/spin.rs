//! Spin operators on the fixed-n block and the SU(2) rotations they generate.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::states::{SpinState, Star};

/// `S_x, S_y, S_z` in the number basis `|n-k, k>`, index `k`.
#[derive(Clone, Debug)]
pub struct SpinOperators {
    pub sx: DMatrix<Complex64>,
    pub sy: DMatrix<Complex64>,
    pub sz: DMatrix<Complex64>,
}

impl SpinOperators {
    pub fn new(n: usize) -> SpinOperators {
        let dim = n + 1;
        let zero = Complex64::new(0.0, 0.0);
        // S+ = a+^dag a-: |n-k, k> -> sqrt((n-k+1) k) |n-k+1, k-1>
        let mut raise = DMatrix::from_element(dim, dim, zero);
        for k in 1..=n {
            raise[(k - 1, k)] = Complex64::new((((n - k + 1) * k) as f64).sqrt(), 0.0);
        }
        let lower = raise.adjoint();
        let sx = (&raise + &lower).map(|x| x * 0.5);
        let sy = (&raise - &lower).map(|x| x / Complex64::new(0.0, 2.0));
        let sz = DMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                Complex64::new((n as f64 - 2.0 * i as f64) / 2.0, 0.0)
            } else {
                zero
            }
        });
        SpinOperators { sx, sy, sz }
    }

    pub fn dim(&self) -> usize {
        self.sz.nrows()
    }

    pub fn components(&self) -> [&DMatrix<Complex64>; 3] {
        [&self.sx, &self.sy, &self.sz]
    }

    /// `axis . S` for a unit `axis`.
    pub fn along(&self, axis: [f64; 3]) -> DMatrix<Complex64> {
        self.sx.map(|x| x * axis[0]) + self.sy.map(|x| x * axis[1]) + self.sz.map(|x| x * axis[2])
    }
}

fn unit(axis: [f64; 3]) -> [f64; 3] {
    let r = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    [axis[0] / r, axis[1] / r, axis[2] / r]
}

/// `exp(-i angle axis.S)` on the `(n+1)`-dimensional block, built from the
/// eigendecomposition of the Hermitian generator.
pub fn rotation_matrix(n: usize, axis: [f64; 3], angle: f64) -> DMatrix<Complex64> {
    let gen = SpinOperators::new(n).along(unit(axis));
    let eig = gen.symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = DMatrix::from_diagonal(
        &eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -angle * l)),
    );
    v * phases * v.adjoint()
}

/// Active right-handed rotation of `R^3` by `angle` about `axis`.
pub fn so3_rotation(axis: [f64; 3], angle: f64) -> [[f64; 3]; 3] {
    let [x, y, z] = unit(axis);
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
        [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
        [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
    ]
}

pub fn apply_so3(r: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        r[0][0] * v[0] + r[0][1] * v[1] + r[0][2] * v[2],
        r[1][0] * v[0] + r[1][1] * v[1] + r[1][2] * v[2],
        r[2][0] * v[0] + r[2][1] * v[1] + r[2][2] * v[2],
    ]
}

pub fn rotate_star(star: Star, axis: [f64; 3], angle: f64) -> Star {
    Star::from_vector(apply_so3(&so3_rotation(axis, angle), star.to_vector()))
}

/// Applies `exp(-i angle axis.S)` to the state.
pub fn rotate_state(s: &SpinState, axis: [f64; 3], angle: f64) -> SpinState {
    let u = rotation_matrix(s.n(), axis, angle);
    let v = nalgebra::DVector::from_column_slice(s.amplitudes());
    let out = u * v;
    SpinState::new(out.iter().copied().collect()).expect("rotation preserves the norm")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{coherent_at, state_to_constellation};

    fn max_abs(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn commutation_relations() {
        let i = Complex64::new(0.0, 1.0);
        for n in 1..=8 {
            let s = SpinOperators::new(n);
            let comm = |a: &DMatrix<Complex64>, b: &DMatrix<Complex64>| a * b - b * a;
            assert!(max_abs(&(comm(&s.sx, &s.sy) - s.sz.map(|x| x * i))) < 1e-12);
            assert!(max_abs(&(comm(&s.sy, &s.sz) - s.sx.map(|x| x * i))) < 1e-12);
            assert!(max_abs(&(comm(&s.sz, &s.sx) - s.sy.map(|x| x * i))) < 1e-12);
            for k in 0..=n {
                assert_eq!(s.sz[(k, k)].re, (n as f64 - 2.0 * k as f64) / 2.0);
            }
        }
    }

    #[test]
    fn rotation_is_unitary() {
        let u = rotation_matrix(5, [0.3, -0.2, 0.9], 1.7);
        let id = DMatrix::<Complex64>::identity(6, 6);
        assert!(max_abs(&(&u * u.adjoint() - id)) < 1e-12);
    }

    #[test]
    fn coherent_states_follow_rotations() {
        let star = Star::new(0.8, 2.0);
        let axis = [1.0, 2.0, -0.5];
        let rotated = rotate_state(&coherent_at(star, 4), axis, 0.9);
        let want = coherent_at(rotate_star(star, axis, 0.9), 4);
        assert!(rotated.fidelity(&want).unwrap() > 1.0 - 1e-12);
        let stars = state_to_constellation(&rotated).unwrap();
        assert!(stars.stars.iter().all(|s| s.chordal_distance(rotate_star(star, axis, 0.9)) < 1e-3));
    }
}

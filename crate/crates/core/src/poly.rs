//! Roots of complex polynomials from companion-matrix eigenvalues.
//!
//! The companion matrix of the monic polynomial is balanced with a diagonal
//! power-of-two similarity and reduced with a shifted complex QR iteration.
//! Each eigenvalue is then polished by a few guarded Newton steps on the
//! original coefficients.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_QR_ITERATIONS: usize = 100;

/// Evaluate `p` (highest degree first) and its derivative at `z`.
pub fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Multiply two polynomials given highest degree first.
pub fn multiply(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// All roots of the polynomial with coefficients `coeffs`, highest degree
/// first. The leading coefficient must be nonzero.
pub fn roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let lead = *coeffs
        .first()
        .ok_or_else(|| Error::InvalidInput("empty polynomial".into()))?;
    if lead.norm() == 0.0 {
        return Err(Error::InvalidInput("leading coefficient is zero".into()));
    }
    let degree = coeffs.len() - 1;
    // exact zero roots are split off before the eigenvalue problem
    let trailing = coeffs.iter().rev().take_while(|c| c.norm() == 0.0).count();
    let core = &coeffs[..coeffs.len() - trailing];
    let mut out = vec![Complex64::new(0.0, 0.0); trailing];
    let d = core.len() - 1;
    match d {
        0 => {}
        1 => out.push(-core[1] / core[0]),
        _ => {
            let monic: Vec<Complex64> = core.iter().map(|&c| c / lead).collect();
            let mut h = companion(&monic);
            balance(&mut h);
            let eig = hessenberg_eigenvalues(h)?;
            out.extend(eig.into_iter().map(|z| polish(core, z)));
        }
    }
    debug_assert_eq!(out.len(), degree);
    Ok(out)
}

fn companion(monic: &[Complex64]) -> Vec<Vec<Complex64>> {
    let d = monic.len() - 1;
    let mut h = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    for j in 0..d {
        h[0][j] = -monic[j + 1];
    }
    for i in 1..d {
        h[i][i - 1] = Complex64::new(1.0, 0.0);
    }
    h
}

/// Parlett-Reinsch balancing with radix 2. Keeps Hessenberg structure.
fn balance(h: &mut [Vec<Complex64>]) {
    let d = h.len();
    let radix = 2.0_f64;
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..d {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..d {
                if j != i {
                    c += h[j][i].l1_norm();
                    r += h[i][j].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut g = r / radix;
            let mut f = 1.0;
            let mut cc = c;
            while cc < g {
                f *= radix;
                cc *= sqrdx;
            }
            g = r * radix;
            while cc > g {
                f /= radix;
                cc /= sqrdx;
            }
            if (cc + r / f) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..d {
                    h[i][j] *= g;
                }
                for row in h.iter_mut() {
                    row[i] *= f;
                }
            }
        }
    }
}

/// Eigenvalues of a complex upper Hessenberg matrix by single-shift QR with
/// Wilkinson shifts and Givens rotations.
fn hessenberg_eigenvalues(mut h: Vec<Vec<Complex64>>) -> Result<Vec<Complex64>> {
    let d = h.len();
    let mut eig = Vec::with_capacity(d);
    let mut hi = d as isize - 1;
    let mut iter = 0usize;
    while hi >= 0 {
        let hiu = hi as usize;
        if hiu == 0 {
            eig.push(h[0][0]);
            break;
        }
        let mut l = hiu;
        while l > 0 {
            let scale = h[l - 1][l - 1].l1_norm() + h[l][l].l1_norm();
            let scale = if scale == 0.0 { 1.0 } else { scale };
            if h[l][l - 1].l1_norm() <= f64::EPSILON * scale {
                h[l][l - 1] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hiu {
            eig.push(h[hiu][hiu]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_QR_ITERATIONS {
            return Err(Error::RootFinding);
        }
        let mu = if iter % 11 == 0 {
            // exceptional shift to break cycles
            h[hiu][hiu] + Complex64::new(h[hiu][hiu - 1].norm() * 0.75, h[hiu - 1][hiu - 1].norm() * 0.25)
        } else {
            wilkinson_shift(
                h[hiu - 1][hiu - 1],
                h[hiu - 1][hiu],
                h[hiu][hiu - 1],
                h[hiu][hiu],
            )
        };
        for i in l..=hiu {
            h[i][i] -= mu;
        }
        let mut rotations = Vec::with_capacity(hiu - l);
        for k in l..hiu {
            let x = h[k][k];
            let y = h[k + 1][k];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                (x / r, y / r)
            };
            for j in k..=hiu {
                let u = h[k][j];
                let v = h[k + 1][j];
                h[k][j] = c.conj() * u + s.conj() * v;
                h[k + 1][j] = -s * u + c * v;
            }
            rotations.push((c, s));
        }
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let k = l + idx;
            let top = (k + 2).min(hiu);
            for i in l..=top {
                let p = h[i][k];
                let q = h[i][k + 1];
                h[i][k] = p * c + q * s;
                h[i][k + 1] = -p * s.conj() + q * c.conj();
            }
        }
        for i in l..=hiu {
            h[i][i] += mu;
        }
    }
    Ok(eig)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() < (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

fn polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let (mut p, _) = eval_with_derivative(coeffs, z);
    for _ in 0..4 {
        let (_, dp) = eval_with_derivative(coeffs, z);
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let candidate = z - p / dp;
        let (pc, _) = eval_with_derivative(coeffs, candidate);
        if !(pc.norm() < p.norm()) {
            break;
        }
        z = candidate;
        p = pc;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn from_roots(rs: &[Complex64]) -> Vec<Complex64> {
        rs.iter()
            .fold(vec![c(1.0, 0.0)], |acc, &r| multiply(&acc, &[c(1.0, 0.0), -r]))
    }

    fn assert_same_roots(mut got: Vec<Complex64>, mut want: Vec<Complex64>, tol: f64) {
        assert_eq!(got.len(), want.len());
        // greedy matching
        for w in want.drain(..) {
            let (idx, dist) = got
                .iter()
                .enumerate()
                .map(|(i, g)| (i, (g - w).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(dist < tol, "root {w} missing, nearest at distance {dist}");
            got.swap_remove(idx);
        }
    }

    #[test]
    fn cube_roots_of_unity() {
        let r = roots(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let want = (0..3)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0))
            .collect();
        assert_same_roots(r, want, 1e-13);
    }

    #[test]
    fn distinct_complex_roots_recovered() {
        let want = vec![c(0.3, -1.2), c(-2.0, 0.5), c(4.0, 4.0), c(0.01, 0.0), c(-0.7, -0.7), c(1e3, 1.0)];
        let r = roots(&from_roots(&want)).unwrap();
        assert_same_roots(r, want, 1e-8);
    }

    #[test]
    fn zero_roots_are_exact() {
        let r = roots(&[c(2.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_same_roots(r, vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 1e-14);
    }

    #[test]
    fn rejects_zero_leading_coefficient() {
        assert!(roots(&[c(0.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(roots(&[]).is_err());
    }

    #[test]
    fn degree_thirty_random_polynomial() {
        let want: Vec<Complex64> = (0..30)
            .map(|k| {
                let t = k as f64 * 0.7;
                Complex64::from_polar(0.5 + (t.sin() * 0.5).abs() * 2.0, t * 2.3)
            })
            .collect();
        let r = roots(&from_roots(&want)).unwrap();
        assert_same_roots(r, want, 1e-6);
    }
}

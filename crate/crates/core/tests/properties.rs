//! Randomized properties across modules.

use majorana::husimi::{husimi, husimi_zeros, wehrl_entropy, QuadratureConfig};
use majorana::lieb_solovej::{phi1, phi_iter, spectrum, DensityMatrix};
use majorana::spin::{rotate_star, rotate_state};
use majorana::sphere_opt::{objective_value, Objective, ShapeSignature};
use majorana::states::{constellation_to_state, state_to_constellation};
use majorana::{Complex64, Constellation, SpinState, Star};
use proptest::prelude::*;

fn amplitudes(max_n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n + 1)
            .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
    })
}

fn state(max_n: usize) -> impl Strategy<Value = SpinState> {
    amplitudes(max_n)
        .prop_filter("non-degenerate", |a| a.iter().map(|x| x.norm_sqr()).sum::<f64>() > 1e-3)
        .prop_map(|a| SpinState::new(a).unwrap())
}

/// States whose leading amplitudes vanish, putting stars at the South Pole.
fn south_heavy_state(max_n: usize) -> impl Strategy<Value = SpinState> {
    (amplitudes(max_n), 1usize..3).prop_filter_map("room for a nonzero tail", |(mut a, zeros)| {
        if zeros >= a.len() {
            return None;
        }
        for x in a.iter_mut().take(zeros) {
            *x = Complex64::new(0.0, 0.0);
        }
        SpinState::new(a).ok().filter(|s| s.amplitudes()[zeros].norm() > 1e-2)
    })
}

fn axis() -> impl Strategy<Value = [f64; 3]> {
    (-1.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(z, phi)| {
        let r = (1.0 - z * z).sqrt();
        [r * phi.cos(), r * phi.sin(), z]
    })
}

fn matched_distance(a: &Constellation, b: &Constellation) -> f64 {
    // greedy matching is enough when stars are well separated or coincide exactly
    let mut left: Vec<Star> = b.stars.clone();
    let mut worst = 0.0f64;
    for s in &a.stars {
        let (i, d) = left
            .iter()
            .enumerate()
            .map(|(i, t)| (i, s.chordal_distance(*t)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        worst = worst.max(d);
        left.remove(i);
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn state_constellation_round_trip(s in state(10)) {
        let back = constellation_to_state(&state_to_constellation(&s).unwrap()).unwrap();
        prop_assert!(s.fidelity(&back).unwrap() >= 1.0 - 1e-8);
    }

    #[test]
    fn round_trip_with_south_pole_stars(s in south_heavy_state(10)) {
        let c = state_to_constellation(&s).unwrap();
        prop_assert!(c.stars.iter().any(|st| (st.theta - std::f64::consts::PI).abs() < 1e-9));
        let back = constellation_to_state(&c).unwrap();
        prop_assert!(s.fidelity(&back).unwrap() >= 1.0 - 1e-8);
    }

    #[test]
    fn star_order_changes_only_the_phase(s in state(8), seed in any::<u64>()) {
        let c = state_to_constellation(&s).unwrap();
        let mut stars = c.stars.clone();
        let len = stars.len();
        stars.rotate_left((seed % len as u64) as usize);
        stars.swap(0, len - 1);
        let a = constellation_to_state(&c).unwrap();
        let b = constellation_to_state(&Constellation::new(stars)).unwrap();
        prop_assert!(a.fidelity(&b).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn rotations_rotate_the_stars(s in state(6), ax in axis(), angle in 0.0f64..6.283) {
        let c = state_to_constellation(&s).unwrap();
        let expected = Constellation::new(c.stars.iter().map(|&st| rotate_star(st, ax, angle)).collect());
        let got = state_to_constellation(&rotate_state(&s, ax, angle)).unwrap();
        prop_assert!(matched_distance(&expected, &got) < 1e-6, "{:?} vs {:?}", expected, got);
    }

    #[test]
    fn husimi_vanishes_opposite_every_star(s in state(7)) {
        for z in husimi_zeros(&s).unwrap() {
            prop_assert!(husimi(&s, z) < 1e-12);
        }
    }

    #[test]
    fn wehrl_is_rotation_invariant(s in state(5), ax in axis(), angle in 0.0f64..6.283) {
        let q = QuadratureConfig::with_tol(1e-11);
        let a = wehrl_entropy(&s, &q).unwrap().value;
        let b = wehrl_entropy(&rotate_state(&s, ax, angle), &q).unwrap().value;
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn channel_preserves_trace_and_positivity(s in state(5)) {
        let rho = DensityMatrix::pure(&s);
        let img = phi1(&rho);
        prop_assert!((img.matrix().trace().re - 1.0).abs() <= 1e-12);
        let sp = spectrum(&phi_iter(&rho, 2));
        prop_assert!(sp.values.iter().all(|&v| v >= -1e-10));
        prop_assert!(sp.rank(1e-10) <= 3);
    }

    #[test]
    fn lieb_bound(s in state(6)) {
        let n = s.n() as f64;
        let w = wehrl_entropy(&s, &QuadratureConfig::default()).unwrap().value;
        prop_assert!(w >= n / (n + 1.0) - 1e-9);
    }

    #[test]
    fn objectives_ignore_rotation(s in state(7).prop_filter("two stars", |s| s.n() >= 2), ax in axis(), angle in 0.0f64..6.283) {
        let c = state_to_constellation(&s).unwrap();
        let rc = Constellation::new(c.stars.iter().map(|&st| rotate_star(st, ax, angle)).collect());
        prop_assert!(ShapeSignature::of(&c).matches(&ShapeSignature::of(&rc), 1e-10));
        for obj in [Objective::Thomson, Objective::Tammes] {
            if let (Ok(a), Ok(b)) = (objective_value(obj, &c), objective_value(obj, &rc)) {
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
            }
        }
        let (a, b) = (objective_value(Objective::Wehrl, &c).unwrap(), objective_value(Objective::Wehrl, &rc).unwrap());
        prop_assert!((a - b).abs() < 1e-10);
    }
}

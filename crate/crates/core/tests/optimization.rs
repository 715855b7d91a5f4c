//! Properties of the constellation optimizers against the table of shapes.

use std::f64::consts::PI;

use majorana::sphere_opt::{
    local_maximize, multi_start, objective_value, optimize_family_multistart, pattern_improvement, table_row,
    ConstellationFamily, LocalOptions, Objective, ShapeSignature, Solid, TableOptions, SIGNATURE_TOL,
};
use majorana::{PolygonSpec, Ring};

fn tricapped_prism_family() -> ConstellationFamily {
    let ring = |theta, twist| Ring { count: 3, theta, twist };
    let spec = PolygonSpec { n: 9, north: 0, rings: vec![ring(0.8, 0.0), ring(PI / 2.0, PI / 3.0), ring(PI - 0.8, 0.0)], south: 0 };
    ConstellationFamily::new(spec).unwrap()
}

#[test]
fn table_optima_are_stationary() {
    let opts = LocalOptions::default();
    let prism = optimize_family_multistart(&tricapped_prism_family(), Objective::Wehrl, 4, 1, &opts).unwrap();
    let prism = local_maximize(Objective::Wehrl, &prism.constellation, &opts).unwrap().constellation;
    let shapes = [Solid::Tetrahedron.constellation(), Solid::Octahedron.constellation(), prism];
    for c in &shapes {
        for objective in [Objective::Wehrl, Objective::Thomson] {
            let start = if c.n() == 9 { local_maximize(objective, c, &opts).unwrap().constellation } else { c.clone() };
            let gain = pattern_improvement(objective, &start, 1e-6);
            assert!(gain < 1e-10, "{objective} n={}: gain {gain:e}", c.n());
        }
    }
}

/// Multi-start never beats the tabulated shape by more than 1e-7 with a
/// different shape, except for n = 5 where the bipyramid wins.
#[test]
fn multistart_wehrl_agrees_with_table_up_to_six() {
    let opts = TableOptions { starts: 20, ..TableOptions::default() };
    for n in 3..=6 {
        let row = table_row(n, Objective::Wehrl, &opts).unwrap();
        let better_elsewhere = !row.matches_table && row.best_value > row.reference_value + 1e-7;
        if n == 5 {
            assert!(better_elsewhere, "n = 5 expected to favour the bipyramid");
            assert_eq!(row.family_type, "1-3-1");
        } else {
            assert!(!better_elsewhere, "n = {n}: {} beats {}", row.family_type, row.table_type);
            assert!(row.matches_table);
        }
    }
}

#[test]
fn family_optimum_never_beats_unconstrained_search() {
    let opts = TableOptions { starts: 20, ..TableOptions::default() };
    for (n, objective) in [(5, Objective::Wehrl), (5, Objective::Thomson), (7, Objective::Tammes), (8, Objective::Thomson)] {
        let row = table_row(n, objective, &opts).unwrap();
        let (best, reference) = match objective {
            Objective::Thomson => (-row.best_value, -row.reference_value),
            _ => (row.best_value, row.reference_value),
        };
        assert!(reference <= best + 1e-7, "{objective} n={n}: family {reference} > search {best}");
    }
}

#[test]
fn bipyramid_beats_square_pyramid_for_five_stars() {
    let opts = LocalOptions::default();
    let bipyramid = PolygonSpec { n: 5, north: 1, rings: vec![Ring { count: 3, theta: PI / 2.0, twist: 0.0 }], south: 1 }
        .constellation()
        .unwrap();
    let pyramid = ConstellationFamily::new(PolygonSpec {
        n: 5,
        north: 1,
        rings: vec![Ring { count: 4, theta: 1.8, twist: 0.0 }],
        south: 0,
    })
    .unwrap();
    let w = optimize_family_multistart(&pyramid, Objective::Wehrl, 4, 2, &opts).unwrap();
    assert!(objective_value(Objective::Wehrl, &bipyramid).unwrap() > w.value + 1e-3);
    let t = optimize_family_multistart(&pyramid, Objective::Thomson, 4, 2, &opts).unwrap();
    assert!(objective_value(Objective::Thomson, &bipyramid).unwrap() < t.value - 1e-3);
    // and the bipyramid is what an unconstrained search finds
    let search = multi_start(Objective::Wehrl, 5, 10, 5, &opts).unwrap();
    assert!(search.best.signature.matches(&ShapeSignature::of(&bipyramid), SIGNATURE_TOL));
}

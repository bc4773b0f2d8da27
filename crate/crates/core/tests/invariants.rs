use proptest::prelude::*;

use kovtop::algebra::{self, FunctionTag, PhasePoint};
use kovtop::code;
use kovtop::coords::{ab_to_uv, qs_to_uv, uv_to_ab, uv_to_qs, CasimirCoords};
use kovtop::oracle;
use kovtop::separating;
use kovtop::{Error, ModelParams};

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(1e-300)
}

fn coord() -> impl Strategy<Value = f64> {
    -3.0..3.0f64
}

fn point() -> impl Strategy<Value = PhasePoint> {
    ([coord(), coord(), coord()], [coord(), coord(), coord()]).prop_map(|(j, x)| PhasePoint::new(j, x))
}

fn angles() -> impl Strategy<Value = [f64; 4]> {
    [0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU, 0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn uv_ab_round_trip(u in 1e-6..50.0f64, w in 0.0..50.0f64, kappa in 0.2..3.0f64) {
        let m = ModelParams::new(kappa, 1.0).unwrap();
        let c = CasimirCoords::new(u, u + w).unwrap();
        let ab = uv_to_ab(c, &m).unwrap();
        let back = ab_to_uv(ab.a, ab.b, &m).unwrap();
        prop_assert!(rel(back.u, c.u) < 1e-12, "{back:?} vs {c:?}");
        prop_assert!(rel(back.v, c.v) < 1e-12);
    }

    #[test]
    fn qs_round_trip(u in 1e-6..50.0f64, w in 1e-6..50.0f64, mirrored: bool) {
        let c = CasimirCoords::new(u, u + w).unwrap();
        let back = qs_to_uv(uv_to_qs(c, mirrored).unwrap()).unwrap();
        prop_assert!(rel(back.u, c.u) < 1e-12 && rel(back.v, c.v) < 1e-12);
    }

    #[test]
    fn h_and_k_commute(p in point(), kappa in 0.1..3.0f64, c1 in 0.2..2.0f64) {
        let m = ModelParams::new(kappa, c1).unwrap();
        let gh = algebra::gradient(FunctionTag::H, &p, &m);
        let gk = algebra::gradient(FunctionTag::K, &p, &m);
        let size = gh.norm() * gk.norm() * (1.0 + p.as_vector().norm() * kappa.max(1.0));
        let br = algebra::bracket_of_gradients(&gh, &gk, &p, &m);
        prop_assert!(br.abs() <= 1e-13 * size.max(1.0), "{br}");
    }

    #[test]
    fn casimirs_are_central(p in point(), kappa in 0.1..3.0f64, i in 0usize..6) {
        let m = ModelParams::new(kappa, 1.0).unwrap();
        let w = algebra::poisson_tensor(&p, &m);
        let g1 = nalgebra::Vector6::new(
            2.0 * kappa * p.j[0], 2.0 * kappa * p.j[1], 2.0 * kappa * p.j[2],
            2.0 * p.x[0], 2.0 * p.x[1], 2.0 * p.x[2],
        );
        let g2 = nalgebra::Vector6::new(p.x[0], p.x[1], p.x[2], p.j[0], p.j[1], p.j[2]);
        prop_assert!((w * g1)[i].abs() < 1e-12);
        prop_assert!((w * g2)[i].abs() < 1e-12);
    }

    #[test]
    fn bracket_is_antisymmetric(p in point()) {
        let m = ModelParams::default();
        let w = algebra::poisson_tensor(&p, &m);
        prop_assert_eq!(w, -w.transpose());
    }

    #[test]
    fn orbit_points_carry_their_casimirs(a in 0.01..20.0f64, t in -1.0..1.0f64, ang in angles()) {
        let m = ModelParams::default();
        let b = t * a / (2.0 * m.kappa.sqrt());
        let p = algebra::orbit_point(a, b, ang, &m).unwrap();
        let (f1, f2) = algebra::casimirs(&p, &m);
        prop_assert!((f1 - a).abs() < 1e-12 * a.max(1.0));
        prop_assert!((f2 - b).abs() < 1e-12 * a.max(1.0));
    }

    #[test]
    fn region_ignores_sign_of_b(a in 0.01..20.0f64, t in 0.0..0.999f64) {
        let m = ModelParams::default();
        let b = t * a / 2.0;
        match (separating::region(a, b, &m), separating::region(a, -b, &m)) {
            (Ok(r1), Ok(r2)) => prop_assert_eq!(r1, r2),
            (Err(e1), Err(e2)) => prop_assert_eq!(e1, e2),
            other => prop_assert!(false, "{other:?}"),
        }
    }

    #[test]
    fn codes_are_well_formed(u in 1e-3..60.0f64, w in 1e-3..60.0f64) {
        let m = ModelParams::default();
        let ab = uv_to_ab(CasimirCoords::new(u, u + w).unwrap(), &m).unwrap();
        match code::code_for_orbit(ab.a, ab.b, &m) {
            Ok(c) => prop_assert!(c.is_well_formed()),
            Err(Error::OnSeparatingSet { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn isoenergy_follows_the_code(u in 1e-3..60.0f64, w in 1e-3..60.0f64, s in 0.0..1.0f64) {
        let m = ModelParams::default();
        let ab = uv_to_ab(CasimirCoords::new(u, u + w).unwrap(), &m).unwrap();
        let Ok((c, pts)) = code::code_with_points(ab.a, ab.b, &m) else { return Ok(()) };
        for i in 0..c.graphs.len() {
            let (h0, h1) = (pts[i].h, pts[i + 1].h);
            if h1 - h0 < 1e-6 * h1.abs().max(1.0) {
                continue;
            }
            let h = h0 + (h1 - h0) * (0.05 + 0.9 * s);
            let iso = code::isoenergy_class(ab.a, ab.b, h, &m).unwrap();
            prop_assert_eq!(iso.graph, c.graphs[i]);
        }
    }

    #[test]
    fn matching_is_symmetric(
        left in prop::collection::vec((-5.0..5.0f64, 0.0..5.0f64), 0..8),
        right in prop::collection::vec((-5.0..5.0f64, 0.0..5.0f64), 0..8),
    ) {
        let total = |v: &[(usize, usize, f64)]| v.iter().map(|x| x.2).sum::<f64>();
        let lr = oracle::match_points(&left, &right, (1.0, 1.0));
        let rl = oracle::match_points(&right, &left, (1.0, 1.0));
        prop_assert_eq!(lr.len(), left.len().min(right.len()));
        prop_assert_eq!(rl.len(), lr.len());
        prop_assert!((total(&lr) - total(&rl)).abs() < 1e-9);
        let mut seen_l: Vec<usize> = lr.iter().map(|x| x.0).collect();
        let mut seen_r: Vec<usize> = lr.iter().map(|x| x.1).collect();
        seen_l.sort_unstable();
        seen_l.dedup();
        seen_r.sort_unstable();
        seen_r.dedup();
        prop_assert_eq!(seen_l.len(), lr.len());
        prop_assert_eq!(seen_r.len(), lr.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn cloud_lies_in_k_nonnegative(a in 0.5..10.0f64, t in 0.0..0.99f64, seed: u64) {
        let m = ModelParams::default();
        let b = t * a / 2.0;
        let cloud = oracle::momentum_cloud(a, b, 200, seed, &m).unwrap();
        prop_assert_eq!(&cloud, &oracle::momentum_cloud(a, b, 200, seed, &m).unwrap());
        prop_assert!(cloud.iter().all(|(h, k)| h.is_finite() && *k >= 0.0));
    }

    #[test]
    fn critical_search_is_deterministic(a in 0.5..10.0f64, t in 0.01..0.99f64, seed: u64) {
        let m = ModelParams::default();
        let b = t * a / 2.0;
        let x = oracle::find_critical_points_seeded(a, b, 16, seed, &m).unwrap();
        let y = oracle::find_critical_points_seeded(a, b, 16, seed, &m).unwrap();
        prop_assert_eq!(x, y);
    }
}

#[test]
fn critical_points_are_rank_deficient() {
    let m = ModelParams::default();
    let (a, b) = separating::sample_orbit("VI.1", &m).unwrap();
    let found = oracle::find_critical_points_seeded(a, b, 64, 7, &m).unwrap();
    assert!(!found.is_empty());
    for c in &found {
        assert!(c.residual < oracle::RESIDUAL_TOL, "{c:?}");
        let r = oracle::curve_union_residual(c.h, c.k, a, b, (oracle::h_scale(a, &m), oracle::h_scale(a, &m).powi(2)), &m).unwrap();
        assert!(r < oracle::CURVE_TOL, "{c:?} off the curve union by {r:e}");
    }
}

#[test]
fn regular_points_have_full_rank() {
    let m = ModelParams::default();
    let (a, b) = separating::sample_orbit("VI.1", &m).unwrap();
    let p = algebra::orbit_point(a, b, [0.7, 1.1, 2.0, 4.0], &m).unwrap();
    assert!(oracle::tangent_sigma_min(a, b, &p, &m).unwrap() > 1e-3);
}

use kovtop::oracle::{self, AnalyticPoint, Budget};
use kovtop::separating::sample_orbit;
use kovtop::{bifurcation, ModelParams};

const BUDGET: Budget = Budget {
    restarts: 200,
    samples: 1000,
    seed: 1,
};

fn analytic(a: f64, b: f64, m: &ModelParams) -> Vec<AnalyticPoint> {
    bifurcation::diagram(a, b, m)
        .unwrap()
        .singular_points
        .iter()
        .map(|p| AnalyticPoint {
            label: p.family.to_string(),
            h: p.h,
            k: p.k,
        })
        .collect()
}

#[test]
fn axis_regions_pass() {
    let m = ModelParams::default();
    for label in ["X.1", "XI.2", "XII"] {
        let (a, b) = sample_orbit(label, &m).unwrap();
        let r = oracle::verify_diagram(a, b, BUDGET, &m).unwrap();
        assert!(r.passed, "{label}: missing {:?}, spurious {:?}", r.missing, r.spurious);
    }
}

#[test]
fn shifted_points_are_reported_missing() {
    let m = ModelParams::default();
    let (a, b) = sample_orbit("VIII", &m).unwrap();
    let mut pts = analytic(a, b, &m);
    pts[0].h += 0.1;
    let r = oracle::verify_points(a, b, &pts, BUDGET, &m).unwrap();
    assert!(!r.passed);
    assert!(r.max_mismatch >= 0.05, "{}", r.max_mismatch);
}

#[test]
fn other_model_parameters() {
    let m = ModelParams::new(0.5, 1.7).unwrap();
    let (a, b) = sample_orbit("IV.2", &m).unwrap();
    let r = oracle::verify_diagram(a, b, BUDGET, &m).unwrap();
    assert!(r.passed, "missing {:?}, spurious {:?}", r.missing, r.spurious);
}

#[test]
fn cloud_stays_inside_the_image() {
    // the momentum image lies in K >= 0 and between the extreme abscissas
    let m = ModelParams::default();
    let (a, b) = sample_orbit("VI.1", &m).unwrap();
    let pts = analytic(a, b, &m);
    let lo = pts.iter().map(|p| p.h).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.h).fold(f64::NEG_INFINITY, f64::max);
    for (h, k) in oracle::momentum_cloud(a, b, 5000, 2, &m).unwrap() {
        assert!(k >= 0.0);
        assert!(h >= lo - 1e-9 && h <= hi + 1e-9, "{h} outside [{lo}, {hi}]");
    }
}

#[test]
fn bad_inputs_are_rejected() {
    let m = ModelParams::default();
    assert!(oracle::momentum_cloud(1.0, 0.1, 0, 0, &m).is_err());
    assert!(oracle::verify_diagram(1.0, 5.0, BUDGET, &m).is_err());
}

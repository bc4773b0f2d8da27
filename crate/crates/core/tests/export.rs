use kovtop::bifurcation;
use kovtop::export::{self, Window};
use kovtop::ModelParams;

#[test]
fn atlas_pieces_stay_in_the_window() {
    let m = ModelParams::default();
    let w = Window::default_for(&m);
    let pieces = export::atlas(w, 200, &m).unwrap();
    assert!(!pieces.is_empty());
    for p in &pieces {
        assert!(p.points.len() > 1);
        assert!(p.points.iter().all(|(u, v)| w.contains(*u, *v)), "{}", p.curve);
    }
    // the boundary curves f_l and f_k are visible near the origin
    for name in ["f1", "f24"] {
        assert!(pieces.iter().any(|p| p.curve.to_string() == name), "{name}");
    }
}

#[test]
fn atlas_csv_round_trips_numbers() {
    let m = ModelParams::default();
    let pieces = export::atlas(Window::default_for(&m), 50, &m).unwrap();
    let csv = export::atlas_csv(&pieces);
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), pieces.iter().map(|p| p.points.len()).sum::<usize>());
    let first = rows[0].split(',').collect::<Vec<_>>();
    let u: f64 = first[2].parse().unwrap();
    assert_eq!(u, pieces[0].points[0].0);
}

#[test]
fn arcs_join_singular_points() {
    let m = ModelParams::default();
    let d = bifurcation::diagram(10.0, 0.1, &m).unwrap();
    let lines = export::diagram_polylines(&d, &m).unwrap();
    assert_eq!(lines.len(), d.arcs.len());
    let near = |(h, k): (f64, f64)| {
        d.singular_points
            .iter()
            .any(|p| (p.h - h).abs() < 1e-9 * h.abs().max(1.0) && (p.k - k).abs() < 1e-9 * k.abs().max(1.0))
    };
    for l in &lines {
        assert_eq!(l.points.len(), export::ARC_SAMPLES);
        assert!(near(l.points[0]), "{} starts off a singular point", l.id);
        assert!(near(*l.points.last().unwrap()), "{} ends off a singular point", l.id);
    }
}

#[test]
fn svg_marks_every_singular_point() {
    let m = ModelParams::default();
    let d = bifurcation::diagram(10.0, 0.1, &m).unwrap();
    let svg = export::diagram_svg(&d, &m).unwrap();
    for p in &d.singular_points {
        assert!(svg.contains(&format!(r#"id="pt-{}""#, p.family)));
    }
    assert_eq!(svg, export::diagram_svg(&d, &m).unwrap());
}

use std::path::Path;
use std::process::{Command, Output};

use kovtop::separating::sample_orbit;
use kovtop::ModelParams;

fn kovtop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kovtop")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn orbit(label: &str) -> (String, String) {
    let (a, b) = sample_orbit(label, &ModelParams::default()).unwrap();
    (a.to_string(), b.to_string())
}

fn tmp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("kovtop-cli-{}-{name}", std::process::id()))
}

#[test]
fn selfcheck_passes() {
    let o = kovtop(&["selfcheck"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "32 graphs, 27 classes, 66 faces, OK"), "{out}");
    assert!(out.contains("p11"));
}

#[test]
fn selfcheck_rejects_edited_tables() {
    let dir = tmp("data");
    std::fs::create_dir_all(&dir).unwrap();
    for (name, text) in kovtop::data::embedded_sources() {
        let text = if name == kovtop::data::CLASSES_FILE { format!("{text}# edited\n") } else { text.to_string() };
        std::fs::write(dir.join(name), text).unwrap();
    }
    let o = Command::new(env!("CARGO_BIN_EXE_kovtop"))
        .arg("selfcheck")
        .env("KOVTOP_DATA", &dir)
        .output()
        .unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
}

#[test]
fn classify_prints_region_and_code() {
    let o = kovtop(&["classify", "--a", "10", "--b", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("region V\n"), "{out}");
    assert!(out.contains("subregion V.11\n"));
    assert!(out.contains("code y1 1 y6 2 y2 3 y3 4 z4 17 z6 5 z5 6 z2 7 z1\n"));
}

#[test]
fn classify_record_is_tab_separated() {
    let o = kovtop(&["classify", "--a", "10", "--b", "0.1", "--record"]);
    let out = stdout(&o);
    let last = out.lines().last().unwrap();
    assert!(last.split('\t').count() > 3, "{last}");
    assert!(last.contains("V.11"));
}

#[test]
fn invalid_input_exits_1() {
    assert_eq!(kovtop(&["classify", "--a", "1", "--b", "5"]).status.code(), Some(1));
    assert_eq!(kovtop(&["classify", "--a", "1", "--b", "0.1", "--kappa", "0"]).status.code(), Some(1));
    assert_eq!(kovtop(&["classify", "--a", "1", "--b", "0.1", "--kappa", "-1"]).status.code(), Some(1));
    assert_eq!(kovtop(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(kovtop(&["classify", "--a", "x", "--b", "1"]).status.code(), Some(1));
    assert_eq!(kovtop(&["--help"]).status.code(), Some(0));
}

#[test]
fn isoenergy_reports_graph_and_class() {
    let (a, b) = orbit("VIII");
    let o = kovtop(&["isoenergy", "--a", &a, "--b", &b, "--h", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "graph 13, class L10");
}

#[test]
fn isoenergy_at_a_singular_value_fails() {
    let (a, b) = orbit("VIII");
    let m = ModelParams::default();
    let d = kovtop::bifurcation::diagram(a.parse().unwrap(), b.parse().unwrap(), &m).unwrap();
    let h = d.singular_points[1].h.to_string();
    let o = kovtop(&["isoenergy", "--a", &a, "--b", &b, "--h", &h]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("singular energy"));
}

#[test]
fn diagram_csv_is_byte_stable() {
    let (p1, p2) = (tmp("d1.csv"), tmp("d2.csv"));
    for p in [&p1, &p2] {
        let o = kovtop(&["diagram", "--a", "10", "--b", "0.1", "--format", "csv", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (x, y) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    let _ = (std::fs::remove_file(&p1), std::fs::remove_file(&p2));
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    assert_eq!(text.lines().next(), Some(kovtop::export::DIAGRAM_HEADER));
    let points = text.lines().filter(|l| l.starts_with("point,")).count();
    assert_eq!(points, 9);
    // every number carries 17 significant digits
    let h = text.lines().nth(1).unwrap().split(',').nth(3).unwrap();
    assert_eq!(h.split('e').next().unwrap().trim_start_matches('-').len(), 18, "{h}");
}

#[test]
fn diagram_svg_has_a_path_per_arc() {
    let out = tmp("d.svg");
    let o = kovtop(&["diagram", "--a", "10", "--b", "0.1", "--format", "svg", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(&out).unwrap();
    let _ = std::fs::remove_file(&out);
    let m = ModelParams::default();
    let d = kovtop::bifurcation::diagram(10.0, 0.1, &m).unwrap();
    assert_eq!(svg.matches("<path ").count(), d.arcs.len());
    for arc in &d.arcs {
        assert!(svg.contains(&format!(r#"<path id="{}""#, arc.id())), "{}", arc.id());
    }
    assert!(svg.contains(r#"viewBox="0 0 1000 1000""#));
}

#[test]
fn atlas_format_follows_extension() {
    let out = tmp("atlas.csv");
    let o = kovtop(&["atlas", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let _ = std::fs::remove_file(&out);
    assert_eq!(text.lines().next(), Some(kovtop::export::ATLAS_HEADER));
    assert!(text.lines().any(|l| l.starts_with("f24,")));

    let out = tmp("atlas.svg");
    let o = kovtop(&["atlas", "--out", out.to_str().unwrap(), "--window", "0,1,0,4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("<?xml"));
    let _ = std::fs::remove_file(&out);

    let o = kovtop(&["atlas", "--out", "x.csv", "--window", "0,1,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!Path::new("x.csv").exists());
}

#[test]
fn chambers_queries() {
    let o = kovtop(&["chambers", "--graph", "1", "--to", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).split_whitespace().collect::<Vec<_>>(), ["p14", "p14'"]);
    let o = kovtop(&["chambers", "--face", "p11"]);
    assert!(stdout(&o).contains("above 11, below 9"));
}

#[test]
fn verify_passes_and_detects_nothing_spurious() {
    let (a, b) = orbit("VIII");
    let o = kovtop(&["verify", "--a", &a, "--b", &b, "--restarts", "100", "--samples", "500", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn run_with_captures_output() {
    let mut buf = Vec::new();
    let code = kovtop::cli::run_with(["kovtop", "classify", "--a", "10", "--b", "0.1"], &mut buf);
    assert_eq!(code, 0);
    assert!(String::from_utf8(buf).unwrap().starts_with("region V"));
}

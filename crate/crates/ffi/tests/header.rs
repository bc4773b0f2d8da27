//! Builds a small C program against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/kovtop.h")).unwrap();
    for name in [
        "kovtop_model_new",
        "kovtop_model_free",
        "kovtop_classify",
        "kovtop_code",
        "kovtop_isoenergy",
        "kovtop_diagram_new",
        "kovtop_diagram_point",
        "kovtop_verify",
        "kovtop_last_error",
        "KOVTOP_STATUS_OK = 0",
        "typedef struct KovtopModel KovtopModel",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_and_runs() {
    let lib = target_dir().join("libkovtop_ffi.a");
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let out = std::env::temp_dir().join(format!("kovtop_smoke_{}", std::process::id()));
    let manifest = env!("CARGO_MANIFEST_DIR");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(format!("{manifest}/include"))
        .arg(format!("{manifest}/tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("cc not found");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "exit {:?}", run.status);
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.starts_with("region V.11\n"), "{stdout}");
    assert!(stdout.contains("error invalid orbit"), "{stdout}");
    let d = kovtop::bifurcation::diagram(10.0, 0.1, &kovtop::ModelParams::default()).unwrap();
    let points: Vec<&str> = stdout.lines().skip(1).take(d.singular_points.len()).collect();
    for (line, p) in points.iter().zip(&d.singular_points) {
        assert_eq!(*line, format!("{} {} {}", p.family, g17(p.h), g17(p.k)));
    }
    assert_eq!(stdout.lines().count(), 2 + d.singular_points.len());
}

/// Matches printf("%.17g") for the values used here.
fn g17(x: f64) -> String {
    let s = format!("{x:.16e}");
    let (mant, exp) = s.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-5..17).contains(&exp) {
        let digits = (16 - exp).max(0) as usize;
        let f = format!("{x:.digits$}");
        if f.contains('.') { f.trim_end_matches('0').trim_end_matches('.').to_string() } else { f }
    } else {
        let m = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

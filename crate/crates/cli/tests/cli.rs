use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bezier_mortar::io::{MeshFile, REPORT_HEADER};

fn bdm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bdm")).args(args).output().expect("bdm runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "bdm failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

/// `l2_error` column of the single data row of a summary.
fn summary_error(text: &str) -> f64 {
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "case,method,p,ratio,matched,n,level,h,dofs,residual,l2_error");
    lines[1].rsplit(',').next().unwrap().parse().unwrap()
}

#[test]
fn mesh_square_is_schema_valid_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "square.json");
    stdout(&bdm(&["mesh", "--case", "square", "--ratio", "2:3", "--p", "2", "--out", &file]));
    let text = fs::read_to_string(&file).unwrap();
    let mesh = MeshFile::from_json(&text).unwrap();
    assert_eq!(mesh.patches.len(), 2);
    assert_eq!(mesh.interfaces.len(), 1);
    assert_eq!(mesh.to_json(), text);
}

#[test]
fn weak_mesh_of_worked_example_embeds_the_interface_operator() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "worked.json");
    stdout(&bdm(&["mesh", "--case", "worked-example", "--weak", "--n", "1", "--out", &file]));
    let mesh = MeshFile::from_json(&fs::read_to_string(&file).unwrap()).unwrap();
    let weak = mesh.weak.expect("weak payload");
    assert_eq!(weak.dual_refinement, 1);
    let third = 1.0 / 3.0;
    let cell = weak
        .elements
        .iter()
        .find(|e| {
            e.patch == 1
                && (e.cell_box[0][0] - third).abs() < 1e-15
                && (e.cell_box[0][1] - 0.5).abs() < 1e-15
                && e.cell_box[1][0] == 0.5
        })
        .expect("slave cell below the master knot 1/2");
    // Rows of the 9 × 9 element operator: blocks [R/2, 0, 0], [R/2, R, 0], [0, 0, R̃].
    let expected: [[f64; 9]; 9] = [
        [0.25, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.25, 0.5, 0.25, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.25, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.25, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.25, 0.5, 0.25, 0.5, 1.0, 0.5, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.25, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0 / 9.0, -1.0 / 9.0, 1.0 / 9.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0 / 3.0, 2.0 / 3.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0 / 9.0, 4.0 / 9.0, 8.0 / 9.0],
    ];
    for row in &expected {
        let found = (0..cell.operator.nrows()).any(|r| (0..9).all(|c| (cell.operator[(r, c)] - row[c]).abs() <= 1e-14));
        assert!(found, "row {row:?} missing from the cell operator");
    }
}

#[test]
fn mortar_weak_and_saddle_solves_agree() {
    let dir = tempfile::tempdir().unwrap();
    let mut errors = Vec::new();
    for method in ["mortar", "weak", "saddle"] {
        let summary = path(dir.path(), &format!("{method}.csv"));
        let coeffs = path(dir.path(), &format!("{method}_u.csv"));
        stdout(&bdm(&[
            "solve",
            "--case",
            "square",
            "--level",
            "1",
            "--method",
            method,
            "--summary",
            &summary,
            "--coeffs",
            &coeffs,
        ]));
        errors.push(summary_error(&fs::read_to_string(&summary).unwrap()));
        let u = fs::read_to_string(&coeffs).unwrap();
        assert!(u.starts_with("dof,value\n"));
    }
    assert!((errors[0] - errors[1]).abs() <= 1e-10 * errors[0], "{errors:?}");
    assert!((errors[0] - errors[2]).abs() <= 1e-9 * errors[0], "{errors:?}");
}

#[test]
fn solve_reads_a_mesh_file() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = path(dir.path(), "m.json");
    stdout(&bdm(&["mesh", "--case", "annulus", "--level", "1", "--out", &mesh]));
    let from_file = summary_error(&stdout(&bdm(&["solve", "--case", "annulus", "--mesh", &mesh])));
    let generated = summary_error(&stdout(&bdm(&["solve", "--case", "annulus", "--level", "1"])));
    assert!((from_file - generated).abs() <= 1e-12 * generated);
}

#[test]
fn usage_errors_exit_with_code_2() {
    assert_eq!(bdm(&["solve", "--case", "square", "--method", "lagrange"]).status.code(), Some(2));
    assert_eq!(bdm(&["solve", "--case", "nonexistent"]).status.code(), Some(2));
    assert_eq!(bdm(&["converge", "--case", "annulus", "--mismatched"]).status.code(), Some(2));
    assert_eq!(bdm(&["mesh", "--case", "square", "--ratio", "2-3"]).status.code(), Some(2));
    assert_eq!(bdm(&["bogus"]).status.code(), Some(2));
}

#[test]
fn invalid_mesh_file_reports_its_error_code() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "bad.json");
    stdout(&bdm(&["mesh", "--case", "square", "--out", &file]));
    let mut mesh = MeshFile::from_json(&fs::read_to_string(&file).unwrap()).unwrap();
    mesh.patches[0].weights[0] = -1.0;
    fs::write(&file, mesh.to_json()).unwrap();
    let out = bdm(&["solve", "--case", "square", "--mesh", &file]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("E020"));
}

#[test]
fn solver_failure_exits_with_code_3() {
    // Load case 1 at the full pressure inverts elements on the coarsest mesh.
    let out = bdm(&["solve", "--case", "largedef-case1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("inverted"));
}

#[test]
fn converge_writes_the_report_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let config = path(dir.path(), "run.json");
    let out = path(dir.path(), "report.csv");
    fs::write(
        &config,
        format!(r#"{{"case": "square-mixed", "p": 2, "ratio": [2, 3], "n": 1, "levels": 4, "output": "{out}"}}"#),
    )
    .unwrap();
    stdout(&bdm(&["converge", "--config", &config]));
    let first = fs::read_to_string(&out).unwrap();
    stdout(&bdm(&["converge", "--config", &config]));
    assert_eq!(fs::read_to_string(&out).unwrap(), first);

    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines[0], REPORT_HEADER);
    assert_eq!(lines.len(), 5);
    assert!(lines[1].ends_with(','), "first level has no rate");
    let rate: f64 = lines[4].rsplit(',').next().unwrap().parse().unwrap();
    assert!((rate - 3.0).abs() <= 0.25, "rate {rate}");
}

#[test]
fn thread_count_comes_from_the_environment() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_bdm"))
            .env("BDM_THREADS", threads)
            .args(["converge", "--case", "square", "--levels", "2"])
            .output()
            .unwrap();
        (out.status.code(), out.stdout)
    };
    let (c1, one) = run("1");
    let (c4, four) = run("4");
    assert_eq!((c1, c4), (Some(0), Some(0)));
    assert_eq!(one, four);
    assert_eq!(run("zero").0, Some(2));
}

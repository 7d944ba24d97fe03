use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rankwave::io::{parse_curve_csv, parse_field_csv, FIELD_HEADER};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rankwave"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// `key=value` lines of a report.
fn value(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {report}"))
        .split_whitespace()
        .next()
        .unwrap()
        .to_string()
}

fn num(report: &str, key: &str) -> f64 {
    value(report, key).parse().unwrap()
}

#[test]
fn acoustic_element_speed_is_the_sound_speed_times_lambda_norm() {
    let o = run(&["elements", "-c", configs().join("elements_acoustic.conf").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = stdout(&o);
    let c = (1.4f64 * 0.9 / 1.2).sqrt();
    let norm = (1.0f64 + 4.0 + 0.25).sqrt();
    assert!((num(&r, "delta") - c * norm).abs() < 1e-14);
    assert!((num(&r, "sound_speed") - c).abs() < 1e-15);
    assert!(num(&r, "residual_rel") < 1e-10);
    assert!(num(&r, "determinant_rel") < 1e-10);
    assert_eq!(value(&r, "family"), "A_plus");
}

#[test]
fn minus_branch_flips_the_speed() {
    let o = run(&["elements", "--family", "A_hom", "--eps", "-1", "--kappa", "1.4", "--rho", "1", "--p", "1", "--lambda", "0,3,4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((num(&stdout(&o), "delta") + 5.0 * 1.4f64.sqrt()).abs() < 1e-13);
}

#[test]
fn missing_kappa_exits_1_naming_the_key() {
    let o = run(&["elements", "--family", "E", "--rho", "1", "--p", "1", "--lambda", "1,0,0", "--h", "0,1,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("kappa"));
}

#[test]
fn vanishing_forcing_is_a_precondition_failure() {
    let o = run(&["elements", "--family", "E0", "--kappa", "1.4", "--rho", "1", "--p", "1", "--h", "0,1,0"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn unknown_keys_and_bad_flags_exit_1() {
    let o = run(&["field", "--family", "e0a", "--colour", "blue"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("colour"));
    assert_eq!(run(&["field", "--family"]).status.code(), Some(1));
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["field", "--family", "e0x"]).status.code(), Some(1));
}

#[test]
fn single_point_reference_row() {
    let o = run(&["field", "--family", "e0a", "--A", "1.6666666666666667", "--K", "-1.2909944487358056"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some(FIELD_HEADER));
    let rows = parse_field_csv(&text).unwrap();
    assert_eq!(rows.len(), 1);
    assert!((rows[0][4] - 1.0).abs() < 1e-12);
    assert_eq!(rows[0][6], 9.81);
}

#[test]
fn figure_grid_exports_without_failures_and_is_reproducible() {
    let cfg = configs().join("e0a_fig1.conf");
    let a = bin().args(["field", "-c", cfg.to_str().unwrap()]).env("RANKWAVE_THREADS", "1").output().unwrap();
    let b = bin().args(["field", "-c", cfg.to_str().unwrap()]).env("RANKWAVE_THREADS", "4").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let rows = parse_field_csv(&stdout(&a)).unwrap();
    assert_eq!(rows.len(), 101 * 51);
    assert!(rows.iter().all(|r| r.iter().all(|v| v.is_finite())));
    // z is the fastest axis
    assert_eq!((rows[0][1], rows[0][3]), (-5.0, 0.0));
    assert_eq!((rows[1][1], rows[1][3]), (-5.0, 0.01));
}

#[test]
fn stationary_wave_repeats_every_time_slice() {
    let o = run(&["field", "-c", configs().join("e0e_stationary.conf").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = parse_field_csv(&stdout(&o)).unwrap();
    let per = rows.len() / 3;
    for k in 0..per {
        for slice in 1..3 {
            assert_eq!(rows[k][1..], rows[slice * per + k][1..]);
        }
    }
}

#[test]
fn field_writes_csv_and_dat_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "family = e0a\ngrid.x.lo = -1\ngrid.x.hi = 1\ngrid.x.n = 3\ngrid.z.hi = 0.5\ngrid.z.n = 2\noutput = f.csv\noutput.dat = f.dat\n").unwrap();
    let o = run(&["field", "-c", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(dir.path().join("f.csv")).unwrap();
    assert_eq!(parse_field_csv(&csv).unwrap().len(), 6);
    let dat = std::fs::read_to_string(dir.path().join("f.dat")).unwrap();
    let lines: Vec<&str> = dat.lines().collect();
    assert_eq!(lines[0], "# t x y z rho p v1 v2 v3 r0 r1");
    // blocks of two z values separated by blank lines
    assert_eq!(lines.len(), 1 + 6 + 2);
    assert!(lines[3].is_empty() && lines[6].is_empty());
}

#[test]
fn failed_rows_are_nan_and_exit_2() {
    let o = run(&["field", "--family", "h0_row1", "--grid.x.lo=-3", "--grid.x.hi", "3", "--grid.x.n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("rows failed"));
    let rows = parse_field_csv(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().any(|r| r[4].is_nan()));
    assert!(rows[1][4].is_finite());
}

#[test]
fn verify_passes_on_the_reference_wave() {
    let o = run(&["verify", "-c", configs().join("e0a_verify.conf").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = stdout(&o);
    assert!(r.contains("check=euler_residual status=PASS"));
    assert!(r.contains("sigma3/sigma1="));
    assert!(r.contains("check=decomposition_fit status=PASS"));
    assert!(r.ends_with("overall=PASS\n"));
}

#[test]
fn verify_fails_with_the_wrong_kappa() {
    let o = run(&["verify", "-c", configs().join("e0a_verify.conf").to_str().unwrap(), "--kappa", "1.4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("check=euler_residual status=FAIL"));
}

#[test]
fn verify_passes_on_every_state_row() {
    for fam in ["e0_oblique", "e0_orthogonal", "a0_oblique", "a0_parallel", "h0_row2", "h0_row3"] {
        let o = run(&["verify", "--family", fam, "--grid.x.lo=-0.5", "--grid.x.hi", "0.5", "--grid.x.n", "3", "--grid.z.lo=-0.5", "--grid.z.hi", "0.5", "--grid.z.n", "3"]);
        assert_eq!(o.status.code(), Some(0), "{fam}: {}", stdout(&o));
    }
    let o = run(&["verify", "-c", configs().join("h0_row1_verify.conf").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn catastrophe_time_matches_the_law() {
    let o = run(&["catastrophe", "-c", configs().join("catastrophe.conf").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = stdout(&o);
    assert_eq!(num(&r, "predicted"), 1.0);
    assert!((num(&r, "fitted") - 1.0).abs() < 0.02);
    let o = run(&["catastrophe", "--K", "2", "--A", "1.6666666666666667"]);
    let want = 2.0 / (5.0f64 / 3.0).sqrt();
    assert!((num(&stdout(&o), "fitted") - want).abs() < 0.02 * want);
}

#[test]
fn negative_k_has_no_catastrophe() {
    let o = run(&["catastrophe", "--K", "-1.2909944487358056", "--A", "1.6666666666666667"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("none detected"));
}

#[test]
fn catastrophe_needs_k() {
    let o = run(&["catastrophe", "--A", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("K"));
    assert_eq!(run(&["catastrophe", "--K", "1", "--family", "e0e"]).status.code(), Some(2));
}

#[test]
fn cauchy_round_trip_reproduces_curve_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sol.csv");
    let o = run(&["cauchy", "-c", configs().join("cauchy.conf").to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = stdout(&o);
    assert!(num(&r, "margin_lam0") > 0.0 && num(&r, "margin_lam1") > 0.0);
    assert!(r.contains("validity.t="));
    let curve = parse_curve_csv(&std::fs::read_to_string(configs().join("cauchy_line.csv")).unwrap()).unwrap();
    let rows = parse_field_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rows.len(), curve.s.len());
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[..4], curve.points[i]);
        assert!((row[9] - curve.r0.as_ref().unwrap()[i]).abs() < 1e-9);
        assert!((row[10] - curve.r1.as_ref().unwrap()[i]).abs() < 1e-9);
        assert!(row[4].is_nan());
    }
}

#[test]
fn tangential_curve_is_rejected_citing_condition_2() {
    let o = run(&["cauchy", "-c", configs().join("cauchy_tangential.conf").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("condition 2") && e.contains("sample 0"), "{e}");
}

#[test]
fn non_monotone_curve_names_the_sample() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.csv"), "s,t,x,y,z,r0,r1\n0,0,0,0,0,0,0\n1,1,0,0,0,1,1\n2,2,0,0,0,0.5,2\n").unwrap();
    let cfg = dir.path().join("c.conf");
    std::fs::write(&cfg, "curve = c.csv\nlam.t = const:1\nlam.x = const:1\nlam.y = const:0\nlam.z = const:0\n").unwrap();
    let o = run(&["cauchy", "-c", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sample 2"));
}

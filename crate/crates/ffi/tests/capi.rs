use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use ftconsensus_ffi::*;

fn last_error() -> String {
    let p = ftc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_string_lossy().into_owned();
    ftc_string_free(p);
    s
}

#[test]
fn graph_round_trip() {
    let w = [0.0, 2.0, 0.0, 2.0, 0.0, 2.0, 0.0, 2.0, 0.0];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(ftc_graph_new(3, w.as_ptr(), &mut g), FtcStatus::Ok);
        assert_eq!(ftc_graph_n(g), 3);
        let mut l = [0.0; 9];
        assert_eq!(ftc_graph_laplacian(g, l.as_mut_ptr(), 9), FtcStatus::Ok);
        assert_eq!(l, [2.0, -2.0, 0.0, -2.0, 4.0, -2.0, 0.0, -2.0, 2.0]);
        let mut lam = 0.0;
        assert_eq!(ftc_graph_algebraic_connectivity(g, &mut lam), FtcStatus::Ok);
        assert!((lam - 2.0).abs() < 1e-12);
        let mut small = [0.0; 4];
        assert_eq!(ftc_graph_laplacian(g, small.as_mut_ptr(), 4), FtcStatus::BufferTooSmall);
        assert!(last_error().contains("9"));
        let mut omega = [0.0; 3];
        assert_eq!(ftc_graph_left_null_vector(g, omega.as_mut_ptr(), 3), FtcStatus::Ok);
        assert!((omega.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let mut report = ptr::null_mut();
        assert_eq!(ftc_graph_analyze_json(g, &mut report), FtcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
        assert_eq!(v["strongly_connected"], true);
        ftc_graph_free(g);
    }
}

#[test]
fn graph_errors() {
    let mut g = ptr::null_mut();
    let bad = [0.0, -1.0, 1.0, 0.0];
    unsafe {
        assert_eq!(ftc_graph_new(2, bad.as_ptr(), &mut g), FtcStatus::InvalidArgument);
        assert!(last_error().contains("negative"));
        assert_eq!(ftc_graph_new(2, ptr::null(), &mut g), FtcStatus::NullPointer);
        let json = CString::new(r#"{"n": 2, "weights": [[1, 0], [0, 0]]}"#).unwrap();
        assert_eq!(ftc_graph_from_json(json.as_ptr(), &mut g), FtcStatus::Parse);
        assert!(last_error().contains("diagonal"));
        let json = CString::new(r#"{"n": 2, "weights": [[0, 1], [0, 0]]}"#).unwrap();
        assert_eq!(ftc_graph_from_json(json.as_ptr(), &mut g), FtcStatus::Ok);
        let mut lam = 0.0;
        assert_eq!(
            ftc_graph_algebraic_connectivity(g, &mut lam),
            FtcStatus::InvalidArgument
        );
        let mut w = [0.0; 2];
        assert_eq!(
            ftc_graph_left_null_vector(g, w.as_mut_ptr(), 2),
            FtcStatus::InvalidArgument
        );
        ftc_graph_free(g);
        ftc_graph_free(ptr::null_mut());
        assert_eq!(ftc_graph_n(ptr::null()), 0);
    }
}

#[test]
fn simulate_builtin() {
    let name = CString::new("two-agent").unwrap();
    let mut s = ptr::null_mut();
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(ftc_scenario_builtin(name.as_ptr(), &mut s), FtcStatus::Ok);
        assert_eq!(ftc_simulate(s, &mut t), FtcStatus::Ok);
        let len = ftc_trajectory_len(t);
        assert!(len > 2);
        assert_eq!(ftc_trajectory_n(t), 2);
        let mut times = vec![0.0; len];
        assert_eq!(ftc_trajectory_times(t, times.as_mut_ptr(), len), FtcStatus::Ok);
        assert!(times.windows(2).all(|w| w[0] < w[1]));
        let mut x = [0.0; 2];
        assert_eq!(ftc_trajectory_state(t, 0, x.as_mut_ptr(), 2), FtcStatus::Ok);
        assert_eq!(x, [0.3, 0.4]);
        assert_eq!(
            ftc_trajectory_state(t, len, x.as_mut_ptr(), 2),
            FtcStatus::InvalidArgument
        );
        let mut tc = 0.0;
        assert_eq!(ftc_trajectory_convergence_time(t, &mut tc), FtcStatus::Ok);
        assert!((tc - 0.3162).abs() < 5e-3);
        let mut csv = ptr::null_mut();
        assert_eq!(ftc_trajectory_csv(t, &mut csv), FtcStatus::Ok);
        assert!(take_string(csv).starts_with("t,x_1,x_2,disagreement,conserved\n"));
        let mut diag = ptr::null_mut();
        assert_eq!(ftc_trajectory_diagnostics_json(t, &mut diag), FtcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(diag)).unwrap();
        assert_eq!(v["conserved_kind"], "mean");
        ftc_trajectory_free(t);
        ftc_scenario_free(s);
    }
}

#[test]
fn scenario_json_and_bound() {
    let name = CString::new("cycle6").unwrap();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(ftc_scenario_builtin(name.as_ptr(), &mut s), FtcStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(ftc_scenario_to_json(s, &mut json), FtcStatus::Ok);
        let text = CString::new(take_string(json)).unwrap();
        let mut s2 = ptr::null_mut();
        assert_eq!(ftc_scenario_from_json(text.as_ptr(), &mut s2), FtcStatus::Ok);
        let mut bound = ptr::null_mut();
        assert_eq!(ftc_scenario_bound_json(s2, &mut bound), FtcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(bound)).unwrap();
        assert!((v["bound"].as_f64().unwrap() - 4.2077).abs() < 1e-3);
        ftc_scenario_free(s);
        ftc_scenario_free(s2);
    }
}

#[test]
fn scenario_errors() {
    let mut s = ptr::null_mut();
    let mut t = ptr::null_mut();
    unsafe {
        let unknown = CString::new("nope").unwrap();
        assert_eq!(
            ftc_scenario_builtin(unknown.as_ptr(), &mut s),
            FtcStatus::InvalidArgument
        );
        assert!(last_error().contains("cycle6"));
        let bad = CString::new("{\"name\": 3}").unwrap();
        assert_eq!(ftc_scenario_from_json(bad.as_ptr(), &mut s), FtcStatus::Parse);
        assert_eq!(ftc_scenario_from_json(ptr::null(), &mut s), FtcStatus::NullPointer);
        assert_eq!(ftc_simulate(ptr::null(), &mut t), FtcStatus::NullPointer);

        let linear = CString::new("cycle6-linear").unwrap();
        assert_eq!(ftc_scenario_builtin(linear.as_ptr(), &mut s), FtcStatus::Ok);
        assert_eq!(ftc_simulate(s, &mut t), FtcStatus::Ok);
        let mut tc = 0.0;
        assert_eq!(ftc_trajectory_convergence_time(t, &mut tc), FtcStatus::NotConverged);
        ftc_trajectory_free(t);
        ftc_scenario_free(s);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/ftconsensus.h")).unwrap();
    for f in [
        "ftc_last_error",
        "ftc_string_free",
        "ftc_graph_new",
        "ftc_graph_from_json",
        "ftc_graph_free",
        "ftc_graph_laplacian",
        "ftc_graph_algebraic_connectivity",
        "ftc_graph_left_null_vector",
        "ftc_graph_analyze_json",
        "ftc_scenario_from_json",
        "ftc_scenario_builtin",
        "ftc_scenario_to_json",
        "ftc_scenario_bound_json",
        "ftc_scenario_free",
        "ftc_simulate",
        "ftc_trajectory_len",
        "ftc_trajectory_times",
        "ftc_trajectory_state",
        "ftc_trajectory_convergence_time",
        "ftc_trajectory_csv",
        "ftc_trajectory_diagnostics_json",
        "ftc_trajectory_free",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f}");
    }
    assert!(header.contains("FTC_STATUS_OK = 0"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/ftconsensus.h");
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-std=c99", "-Wall", "-Werror"])
        .arg(&header)
        .output()
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

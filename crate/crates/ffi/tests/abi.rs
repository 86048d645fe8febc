use std::ffi::{CStr, CString};
use std::ptr;

use zmd_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(zmd_last_error()) }.to_str().unwrap().to_string()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { zmd_string_free(p) };
    s
}

fn regular(l: usize, m: usize, dm: usize, seed: u64) -> *mut ZmdGraph {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { zmd_graph_regular(l, m, dm, seed, &mut g) }, ZmdStatus::Ok);
    g
}

#[test]
fn graph_lifecycle_and_text_round_trip() {
    let g = regular(20, 10, 4, 3);
    unsafe {
        assert_eq!(zmd_graph_num_variables(g), 20);
        assert_eq!(zmd_graph_num_measurements(g), 10);
        assert_eq!(zmd_graph_num_edges(g), 40);
        let mut text = ptr::null_mut();
        assert_eq!(zmd_graph_to_text(g, &mut text), ZmdStatus::Ok);
        let text = take_string(text);
        let c = CString::new(text.clone()).unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(zmd_graph_from_text(c.as_ptr(), &mut h), ZmdStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(zmd_graph_to_text(h, &mut again), ZmdStatus::Ok);
        assert_eq!(take_string(again), text);

        let mut buf = [0usize; 4];
        let mut len = 0;
        assert_eq!(zmd_graph_neighbors(g, 0, buf.as_mut_ptr(), 4, &mut len), ZmdStatus::Ok);
        assert_eq!(len, 4);
        assert!(buf.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(zmd_graph_neighbors(g, 0, buf.as_mut_ptr(), 2, &mut len), ZmdStatus::BufferTooSmall);
        assert_eq!(len, 4);
        assert_eq!(zmd_graph_neighbors(g, 10, buf.as_mut_ptr(), 4, &mut len), ZmdStatus::InvalidArgument);

        zmd_graph_free(g);
        zmd_graph_free(h);
        zmd_graph_free(ptr::null_mut());
        assert_eq!(zmd_graph_num_variables(ptr::null()), 0);
    }
}

#[test]
fn construction_errors_carry_codes_and_messages() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(zmd_graph_regular(10, 3, 2, 1, &mut g), ZmdStatus::NonIntegralDegree);
        assert!(last_error().contains("10"));
        assert_eq!(zmd_graph_one_to_one(3, 5, 1, &mut g), ZmdStatus::InfeasibleGraph);
        let bad = CString::new("2 1\n0 0 1\n").unwrap();
        assert_eq!(zmd_graph_from_text(bad.as_ptr(), &mut g), ZmdStatus::ParseError);
        let out_of_range = CString::new("2 1\n0: 0 5\n").unwrap();
        assert_eq!(zmd_graph_from_text(out_of_range.as_ptr(), &mut g), ZmdStatus::InfeasibleGraph);
        assert_eq!(zmd_graph_from_text(ptr::null(), &mut g), ZmdStatus::NullPointer);
        // A success clears the message.
        let ok = regular(4, 2, 2, 1);
        assert_eq!(last_error(), "");
        zmd_graph_free(ok);
    }
}

#[test]
fn irregular_graph() {
    let vd = [1usize, 2];
    let vf = [0.5, 0.5];
    let md = [3usize];
    let mf = [1.0];
    let mut g = ptr::null_mut();
    unsafe {
        let s = zmd_graph_irregular(100, 50, vd.as_ptr(), vf.as_ptr(), 2, md.as_ptr(), mf.as_ptr(), 1, 4, &mut g);
        assert_eq!(s, ZmdStatus::Ok);
        assert_eq!(zmd_graph_num_edges(g), 150);
        zmd_graph_free(g);
        let bad = [0.5, 0.6];
        let s = zmd_graph_irregular(100, 50, vd.as_ptr(), bad.as_ptr(), 2, md.as_ptr(), mf.as_ptr(), 1, 4, &mut g);
        assert_eq!(s, ZmdStatus::UnrealizableDistribution);
    }
}

#[test]
fn measure_and_detect() {
    let g = regular(40, 20, 4, 9);
    let mut occ = [0u8; 40];
    for v in (0..40).step_by(7) {
        occ[v] = 1;
    }
    let mut y = [0.0; 20];
    let mut vacant = [0u8; 40];
    unsafe {
        assert_eq!(zmd_measure(g, 3, occ.as_ptr(), 1.0, 0.0, 5, y.as_mut_ptr()), ZmdStatus::Ok);
        assert_eq!(zmd_detect_noiseless(g, y.as_ptr(), 20, 1e-10, vacant.as_mut_ptr()), ZmdStatus::Ok);
        for v in 0..40 {
            assert!(!(vacant[v] == 1 && occ[v] == 1));
        }
        assert!(vacant.contains(&1));

        let mut by_threshold = [0u8; 40];
        assert_eq!(zmd_detect_threshold(g, y.as_ptr(), 20, 1e-10, by_threshold.as_mut_ptr()), ZmdStatus::Ok);
        assert_eq!(vacant, by_threshold);

        assert_eq!(zmd_measure(g, 1, occ.as_ptr(), 1.0, 0.1, 5, y.as_mut_ptr()), ZmdStatus::Ok);
        let mut lrt = [0u8; 40];
        assert_eq!(zmd_detect_lrt(g, y.as_ptr(), 20, 1.0, 0.2, 1.0, 0.1, lrt.as_mut_ptr()), ZmdStatus::Ok);
        assert_eq!(zmd_detect_lrt(g, y.as_ptr(), 20, 1.0, 0.2, 1.0, 0.0, lrt.as_mut_ptr()), ZmdStatus::DegenerateChannel);
        assert_eq!(zmd_detect_threshold(g, y.as_ptr(), 19, 0.1, lrt.as_mut_ptr()), ZmdStatus::DimensionMismatch);
        zmd_graph_free(g);
    }
}

#[test]
fn closed_forms_and_calibration() {
    let mut p = ZmdPrediction { p_zd: 0.0, p_wzd: 0.0, p_d: 0.0, p_fa: 0.0 };
    unsafe {
        assert_eq!(zmd_predict_regular(0.25, 4, 2, 1.0, 0.0, f64::NAN, &mut p), ZmdStatus::Ok);
        assert!((p.p_zd - 2727.0 / 4096.0).abs() < 1e-15);
        assert_eq!((p.p_wzd, p.p_d, p.p_fa), (0.0, 1.0, 0.0));

        let (mut c, mut w) = (0.0, 0.0);
        assert_eq!(zmd_calibrate_regular(2, 1, 0.1, 1.0, 0.0562, 0.02, &mut c, &mut w), ZmdStatus::Ok);
        assert!((w - 0.02).abs() < 1e-6);
        assert_eq!(zmd_predict_regular(0.1, 2, 1, 1.0, 0.0562, c, &mut p), ZmdStatus::Ok);
        assert!((p.p_wzd - w).abs() < 1e-12);
        assert_eq!(
            zmd_calibrate_regular(2, 1, 0.5, 1.0, 0.3, 1e-4, &mut c, &mut w),
            ZmdStatus::UnreachableTarget
        );
        assert_eq!(zmd_predict_regular(0.0, 2, 1, 1.0, 0.1, 0.05, &mut p), ZmdStatus::Ok);
        assert!(p.p_fa.is_nan());

        let mut lr = 0.0;
        assert_eq!(zmd_likelihood_ratio(0.0, 1, 0.25, 1.0, 0.1, &mut lr), ZmdStatus::Ok);
        assert!((lr - (0.01f64 / 4.01).sqrt()).abs() < 1e-12);
    }
    assert!((zmd_erf(1.0) - 0.8427007929497149).abs() < 1e-15);
    let v = unsafe { CStr::from_ptr(zmd_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn experiment_from_toml() {
    let toml = CString::new(
        "L = 100\nM = 50\nd_M = 2\nalpha = 0.25\ntrials = 20\nseed = 3\n[sweep]\naxis = \"alpha\"\nvalues = [0.1, 0.3]\n",
    )
    .unwrap();
    let mut e = ptr::null_mut();
    unsafe {
        assert_eq!(zmd_experiment_from_toml(toml.as_ptr(), &mut e), ZmdStatus::Ok);
        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        assert_eq!(zmd_experiment_run(e, 1, &mut a), ZmdStatus::Ok);
        assert_eq!(zmd_experiment_run(e, 2, &mut b), ZmdStatus::Ok);
        let (a, b) = (take_string(a), take_string(b));
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 3);
        assert!(a.starts_with("axis_name,axis_value,L,M"));
        zmd_experiment_free(e);

        let bad = CString::new("L = \"many\"").unwrap();
        assert_eq!(zmd_experiment_from_toml(bad.as_ptr(), &mut e), ZmdStatus::ParseError);
        let name = CString::new("fig7").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(zmd_figure(name.as_ptr(), 1, 10, 1, &mut out), ZmdStatus::UnknownPreset);
        assert!(last_error().contains("fig7"));
    }
}

use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use approx::assert_relative_eq;
use hyperball_ffi::*;

fn last_error() -> String {
    let p = hb_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn scalar_kernels() {
    let (x, y) = ([0.3, 0.0, 0.0], [0.0, 0.4, 0.0]);
    let mut v = 0.0;
    unsafe {
        assert_eq!(hb_bracket(x.as_ptr(), y.as_ptr(), 3, &mut v), HbStatus::Ok);
        assert_relative_eq!(v, (1.0f64 + 0.09 * 0.16).sqrt(), max_relative = 1e-15);
        assert_eq!(hb_green_g(3, 0.5, 1.0, &mut v), HbStatus::Ok);
        // g(r) = (1/3)(1/r + r - 2) in three dimensions
        assert_relative_eq!(v, (2.0 + 0.5 - 2.0) / 3.0, max_relative = 1e-13);
        assert_eq!(hb_q_ratio(3, 0.0, &mut v), HbStatus::Ok);
        assert_relative_eq!(v, 1.0 / 3.0);
        assert_eq!(hb_hyp2f1(1.0, 1.0, 2.0, 0.5, &mut v), HbStatus::Ok);
        assert_relative_eq!(v, 2.0 * 2f64.ln(), max_relative = 1e-14);
        let t = [1.0, 0.0, 0.0];
        assert_eq!(hb_poisson_szego(x.as_ptr(), t.as_ptr(), 3, &mut v), HbStatus::Ok);
        assert_relative_eq!(v, (0.91f64 / 0.49).powi(2), max_relative = 1e-14);
        let mut g = 0.0;
        assert_eq!(hb_green_h(x.as_ptr(), y.as_ptr(), 3, &mut g), HbStatus::Ok);
        let mut g2 = 0.0;
        assert_eq!(hb_green_h(y.as_ptr(), x.as_ptr(), 3, &mut g2), HbStatus::Ok);
        assert_eq!(g, g2);
    }
}

#[test]
fn mobius_is_an_involution() {
    let (a, x) = ([0.2, -0.3, 0.1], [0.5, 0.1, -0.2]);
    let (mut y, mut back) = ([0.0; 3], [0.0; 3]);
    unsafe {
        assert_eq!(hb_mobius(a.as_ptr(), x.as_ptr(), 3, y.as_mut_ptr()), HbStatus::Ok);
        assert_eq!(hb_mobius(a.as_ptr(), y.as_ptr(), 3, back.as_mut_ptr()), HbStatus::Ok);
        let mut d = 0.0;
        assert_eq!(hb_hyperbolic_distance(a.as_ptr(), a.as_ptr(), 3, &mut d), HbStatus::Ok);
        assert_eq!(d, 0.0);
    }
    for i in 0..3 {
        assert_relative_eq!(back[i], x[i], epsilon = 1e-14);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut v = 0.0;
    unsafe {
        let far = [1.5, 0.0, 0.0];
        assert_eq!(hb_bracket(far.as_ptr(), far.as_ptr(), 3, &mut v), HbStatus::OutsideBall);
        assert!(last_error().contains("unit ball"));
        assert_eq!(hb_bracket(ptr::null(), far.as_ptr(), 3, &mut v), HbStatus::NullPointer);
        assert!(last_error().contains("null"));
        let x = [0.1, 0.0, 0.0];
        assert_eq!(hb_green_h(x.as_ptr(), x.as_ptr(), 3, &mut v), HbStatus::Singular);
        assert_eq!(hb_q_ratio(2, 0.5, &mut v), HbStatus::UnsupportedDimension);
        let spec = CString::new("nonsense").unwrap();
        let mut f = ptr::null_mut();
        assert_eq!(hb_boundary_field_new(spec.as_ptr(), 3, &mut f), HbStatus::UnknownField);
        assert!(f.is_null());
        // success clears the message
        assert_eq!(hb_q_ratio(3, 0.5, &mut v), HbStatus::Ok);
        assert!(hb_last_error_message().is_null());
    }
}

#[test]
fn potentials_through_handles() {
    let quad = HbQuadrature { sphere_order: 24, radial_order: 40, ..hb_quadrature_default() };
    unsafe {
        let (mut phi, mut psi) = (ptr::null_mut(), ptr::null_mut());
        let coord = CString::new("coordinate:1").unwrap();
        let lin = CString::new("linear").unwrap();
        assert_eq!(hb_boundary_field_new(coord.as_ptr(), 3, &mut phi), HbStatus::Ok);
        assert_eq!(hb_source_field_new(lin.as_ptr(), 3, &mut psi), HbStatus::Ok);
        let x = [0.3, 0.2, -0.1];
        let (mut u, mut e) = ([0.0; 3], 0.0);
        assert_eq!(hb_represent(phi, psi, x.as_ptr(), 3, &quad, u.as_mut_ptr()), HbStatus::Ok);
        assert_relative_eq!(u[0], 0.3, epsilon = 1e-10);
        assert!(u[1].abs() < 1e-12 && u[2].abs() < 1e-12);
        // P_h[phi] = x_1 e_1 + G_h[psi]
        let (mut p, mut g) = ([0.0; 3], [0.0; 3]);
        assert_eq!(hb_poisson_extension(phi, x.as_ptr(), 3, &quad, p.as_mut_ptr(), &mut e), HbStatus::Ok);
        assert_eq!(hb_green_potential(psi, x.as_ptr(), 3, ptr::null(), g.as_mut_ptr()), HbStatus::Ok);
        assert_relative_eq!(p[0], 0.3 + g[0], epsilon = 1e-10);
        assert!(e < 1e-10);
        let bad = HbQuadrature { sphere_order: 0, ..quad };
        assert_eq!(hb_represent(phi, psi, x.as_ptr(), 3, &bad, u.as_mut_ptr()), HbStatus::InvalidParameter);
        hb_boundary_field_free(phi);
        hb_source_field_free(psi);
        hb_boundary_field_free(ptr::null_mut());
    }
}

#[test]
fn constants_as_json() {
    unsafe {
        let mut s = ptr::null_mut();
        let st = hb_constants_json(3, 0.0, 2.0, ptr::null(), ptr::null(), ptr::null(), &mut s);
        assert_eq!(st, HbStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        hb_string_free(s);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["C1"], v["beta0"]);
        assert_relative_eq!(v["alpha1"].as_f64().unwrap(), 0.5, epsilon = 1e-14);
        assert!(v["C2"].is_null());
        assert_eq!(hb_constants_json(2, 1.0, 1.0, ptr::null(), ptr::null(), ptr::null(), &mut s), HbStatus::UnsupportedDimension);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(hb_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include").join("hyperball.h")
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "hb_bracket",
        "hb_mobius",
        "hb_hyperbolic_distance",
        "hb_poisson_szego",
        "hb_green_h",
        "hb_green_g",
        "hb_q_ratio",
        "hb_hyp2f1",
        "hb_poisson_extension",
        "hb_green_potential",
        "hb_represent",
        "hb_constants_json",
        "hb_string_free",
        "hb_last_error_message",
        "typedef struct HbBoundaryField HbBoundaryField",
        "HB_STATUS_OK = 0",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

/// Compiles and runs a C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let out_dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let target_dir = out_dir.parent().unwrap().to_path_buf();
    let lib = ["debug", "release"]
        .iter()
        .map(|p| target_dir.join(p).join("libhyperball_ffi.a"))
        .find(|p| p.exists())
        .expect("static library next to the test binary");
    let src = out_dir.join("ffi_smoke.c");
    std::fs::write(
        &src,
        r#"#include <math.h>
#include <stdio.h>
#include "hyperball.h"
int main(void) {
    double x[3] = {0.3, 0.0, 0.0}, y[3] = {0.0, 0.4, 0.0}, v = 0.0;
    if (hb_bracket(x, y, 3, &v) != HB_STATUS_OK) return 1;
    if (fabs(v - sqrt(1.0 + 0.09 * 0.16)) > 1e-15) return 2;
    HbBoundaryField *phi = NULL;
    if (hb_boundary_field_new("constant:2", 3, &phi) != HB_STATUS_OK) return 3;
    HbQuadrature q = hb_quadrature_default();
    q.sphere_order = 16;
    double u[3], err;
    if (hb_poisson_extension(phi, x, 3, &q, u, &err) != HB_STATUS_OK) return 4;
    hb_boundary_field_free(phi);
    if (fabs(u[0] - 2.0) > 1e-12) return 5;
    if (hb_green_g(3, 0.0, 1.0, &v) != HB_STATUS_SINGULAR && hb_last_error_message() == NULL) return 6;
    printf("ok\n");
    return 0;
}
"#,
    )
    .unwrap();
    let exe = out_dir.join("ffi_smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success(), "compilation failed");
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}

use std::ffi::{c_char, CStr, CString};
use std::process::Command;
use std::ptr;

use negdep_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    let need = unsafe { nd_last_error_message(buf.as_mut_ptr(), buf.len()) };
    if need == 0 {
        return String::new();
    }
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn buf_str(buf: &[c_char]) -> String {
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn generate_and_read_back() {
    unsafe {
        let spec = nd_spec_new(NdScheme::Rsj, 5, 2);
        assert!(!spec.is_null());
        let mut set = ptr::null_mut();
        assert_eq!(nd_generate(spec, 7, &mut set), NdStatus::Ok);
        assert_eq!(nd_pointset_len(set), 5);
        assert_eq!(nd_pointset_dim(set), 2);

        let mut all = vec![0.0; 10];
        assert_eq!(nd_pointset_copy(set, all.as_mut_ptr(), all.len()), NdStatus::Ok);
        let reference = negdep::samplers::generate(&negdep::samplers::SchemeSpec::rsj(5, 2), 7).unwrap();
        let expected: Vec<f64> = reference.rows().flatten().collect();
        assert_eq!(all, expected);

        let mut x = 0.0;
        assert_eq!(nd_pointset_get(set, 4, 1, &mut x), NdStatus::Ok);
        assert_eq!(x, expected[9]);
        assert_eq!(nd_pointset_get(set, 5, 0, &mut x), NdStatus::OutOfRange);
        assert_eq!(nd_pointset_copy(set, all.as_mut_ptr(), 3), NdStatus::BufferTooSmall);

        nd_pointset_free(set);
        nd_spec_free(spec);
    }
}

#[test]
fn invalid_spec_reports_message() {
    unsafe {
        let spec = nd_spec_new(NdScheme::Rsj, 6, 2);
        let mut set = ptr::null_mut();
        assert_eq!(nd_generate(spec, 1, &mut set), NdStatus::InvalidArgument);
        assert!(set.is_null());
        assert!(last_error().contains("N must be prime"), "{}", last_error());
        nd_spec_free(spec);
        assert!(nd_spec_new(NdScheme::Lhs, 5, 0).is_null());
        assert_eq!(nd_generate(ptr::null(), 1, &mut set), NdStatus::NullPointer);
    }
}

#[test]
fn exact_pair_probability() {
    unsafe {
        let spec = nd_spec_new(NdScheme::Rsj, 5, 2);
        let g = [1u64, 1];
        assert_eq!(nd_spec_set_generator(spec, g.as_ptr(), 2), NdStatus::Ok);
        let q = CString::new("0.6,0.6").unwrap();
        let r = CString::new("4/5").unwrap();
        let mut joint = vec![0 as c_char; 32];
        let mut product = vec![0 as c_char; 32];
        let status = nd_pair_box_prob(
            spec,
            q.as_ptr(),
            r.as_ptr(),
            joint.as_mut_ptr(),
            32,
            product.as_mut_ptr(),
            32,
        );
        assert_eq!(status, NdStatus::Ok, "{}", last_error());
        assert_eq!(buf_str(&joint), "1/100");
        assert_eq!(buf_str(&product), "4/625");

        let status = nd_pair_box_prob(
            spec,
            q.as_ptr(),
            r.as_ptr(),
            joint.as_mut_ptr(),
            3,
            product.as_mut_ptr(),
            32,
        );
        assert_eq!(status, NdStatus::BufferTooSmall);

        let mut violations = 0;
        assert_eq!(nd_nuod_scan(spec, 10, &mut violations), NdStatus::Ok);
        assert!(violations > 0);
        nd_spec_free(spec);

        let full = nd_spec_new(NdScheme::Lhs, 4, 2);
        assert_eq!(nd_nuod_scan(full, 8, &mut violations), NdStatus::Ok);
        assert_eq!(violations, 0);
        nd_spec_free(full);
    }
}

#[test]
fn ablation_setters() {
    unsafe {
        let spec = nd_spec_new(NdScheme::Rsj, 5, 2);
        assert_eq!(nd_spec_set_shift(spec, NdShift::Torus), NdStatus::Ok);
        let mut set = ptr::null_mut();
        // torus shift with jitter is not supported
        assert_eq!(nd_generate(spec, 1, &mut set), NdStatus::Unsupported);
        assert_eq!(nd_spec_set_jitter(spec, false), NdStatus::Ok);
        assert_eq!(nd_generate(spec, 1, &mut set), NdStatus::Ok);
        assert_eq!(last_error(), "");
        nd_pointset_free(set);
        nd_spec_free(spec);
        assert_eq!(nd_spec_set_jitter(ptr::null_mut(), true), NdStatus::NullPointer);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(nd_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/negdep.h");
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-std=c99", "-Wall", "-Werror", "-x", "c", header])
        .output()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

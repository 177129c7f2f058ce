use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use binpack_ffi::*;

fn last_error() -> String {
    let p = bp_last_error();
    assert!(!p.is_null(), "expected an error message");
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_string_lossy().into_owned();
    bp_string_free(p);
    s
}

unsafe fn parse(text: &str) -> *mut BpInstance {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(bp_instance_parse(c.as_ptr(), &mut out), BpStatus::Ok);
    out
}

unsafe fn run(inst: *const BpInstance, alg: &str, k: usize) -> Result<*mut BpPacking, BpStatus> {
    let c = CString::new(alg).unwrap();
    let mut out = ptr::null_mut();
    match bp_run(inst, c.as_ptr(), k, &mut out) {
        BpStatus::Ok => Ok(out),
        s => Err(s),
    }
}

#[test]
fn build_pack_and_inspect() {
    unsafe {
        let inst = bp_instance_new();
        for (p, q) in [(3, 5), (1, 2), (2, 5), (3, 10), (1, 5)] {
            assert_eq!(bp_instance_push(inst, p, q), BpStatus::Ok);
        }
        assert!(bp_last_error().is_null());
        assert_eq!(bp_instance_len(inst), 5);

        let mm = run(inst, "mm", 0).unwrap();
        assert_eq!(bp_packing_bins(mm), 3);
        let mut labels = vec![0usize; bp_packing_len(mm)];
        assert_eq!(bp_packing_assignment(mm, labels.as_mut_ptr(), labels.len()), BpStatus::Ok);
        assert_eq!(labels, [1, 2, 2, 3, 1]);
        let mut valid = false;
        assert_eq!(bp_packing_validate(mm, inst, &mut valid), BpStatus::Ok);
        assert!(valid);
        assert_eq!(
            take_string(bp_packing_to_json(mm)),
            r#"{"assignment":[1,2,2,3,1],"k":null}"#
        );
        assert_eq!(
            bp_packing_assignment(mm, labels.as_mut_ptr(), 2),
            BpStatus::InvalidArgument
        );
        bp_packing_free(mm);

        let capped = run(inst, "nfd", 2).unwrap();
        assert_eq!(bp_packing_bins(capped), 3);
        assert!(take_string(bp_packing_to_json(capped)).ends_with(r#""k":2}"#));
        bp_packing_free(capped);
        let same = run(inst, "ffd_2", 2).unwrap();
        bp_packing_free(same);

        assert_eq!(run(inst, "mm_3", 2).unwrap_err(), BpStatus::InvalidArgument);
        assert!(last_error().contains("conflicts"));
        assert_eq!(run(inst, "bf", 0).unwrap_err(), BpStatus::InvalidArgument);
        assert_eq!(run(inst, "mm", 1).unwrap_err(), BpStatus::InvalidArgument);

        let text = take_string(bp_instance_to_text(inst));
        let again = parse(&text);
        assert_eq!(bp_instance_len(again), 5);
        bp_instance_free(again);
        bp_instance_free(inst);
    }
}

#[test]
fn invalid_inputs_report_status_and_message() {
    unsafe {
        let inst = bp_instance_new();
        assert_eq!(bp_instance_push(inst, 3, 2), BpStatus::InvalidArgument);
        assert_eq!(bp_instance_push(inst, 0, 1), BpStatus::InvalidArgument);
        assert_eq!(bp_instance_push(inst, 1, 0), BpStatus::InvalidArgument);
        assert_eq!(bp_instance_len(inst), 0);
        assert_eq!(bp_instance_push(ptr::null_mut(), 1, 2), BpStatus::NullPointer);
        assert!(last_error().contains("instance is null"));

        let bad = CString::new("0.5\n\n1.5\n").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(bp_instance_parse(bad.as_ptr(), &mut out), BpStatus::Parse);
        assert!(last_error().contains("line 3"));
        assert!(out.is_null());
        assert_eq!(bp_instance_parse(ptr::null(), &mut out), BpStatus::NullPointer);

        assert_eq!(bp_instance_len(ptr::null()), 0);
        assert_eq!(bp_packing_bins(ptr::null()), 0);
        assert!(bp_instance_to_text(ptr::null()).is_null());
        bp_instance_free(ptr::null_mut());
        bp_packing_free(ptr::null_mut());
        bp_string_free(ptr::null_mut());

        let one = parse("0.5\n");
        let other = parse("0.5\n0.5\n");
        let p = run(one, "nf", 0).unwrap();
        let mut valid = true;
        assert_eq!(bp_packing_validate(p, other, &mut valid), BpStatus::InvalidArgument);
        bp_packing_free(p);
        bp_instance_free(one);
        bp_instance_free(other);
        bp_instance_free(inst);
    }
}

#[test]
fn exact_optimum() {
    unsafe {
        let inst = parse("0.56\n0.39\n0.28\n0.21\n0.46\n0.16\n0.39\n0.42\n");
        let mut opt = 0;
        let mut witness = ptr::null_mut();
        assert_eq!(bp_opt_exact(inst, 0, 0, &mut opt, &mut witness), BpStatus::Ok);
        assert_eq!(opt, 3);
        assert_eq!(bp_packing_bins(witness), 3);
        let mut valid = false;
        bp_packing_validate(witness, inst, &mut valid);
        assert!(valid);
        bp_packing_free(witness);

        assert_eq!(bp_opt_exact(inst, 2, 0, &mut opt, ptr::null_mut()), BpStatus::Ok);
        assert_eq!(opt, 4);
        assert_eq!(bp_opt_exact(inst, 0, 4, &mut opt, ptr::null_mut()), BpStatus::TooLarge);
        assert!(last_error().contains("limit of 4"));
        assert_eq!(bp_opt_exact(inst, 0, 0, ptr::null_mut(), ptr::null_mut()), BpStatus::NullPointer);
        bp_instance_free(inst);
    }
}

#[test]
fn generated_families_carry_certificates() {
    unsafe {
        let family = CString::new("presorted-bounded").unwrap();
        let params = BpFamilyParams {
            m: 6,
            classes: 3,
            ..BpFamilyParams::default()
        };
        let mut inst = ptr::null_mut();
        let mut cert = ptr::null_mut();
        let mut claimed = 0;
        assert_eq!(bp_generate(family.as_ptr(), params, &mut inst, &mut cert, &mut claimed), BpStatus::Ok);
        assert_eq!((bp_instance_len(inst), claimed), (18, 6));
        assert_eq!(bp_packing_bins(cert), 6);
        let mut valid = false;
        bp_packing_validate(cert, inst, &mut valid);
        assert!(valid);
        let nfd = run(inst, "nfd", 0).unwrap();
        assert!(bp_packing_bins(nfd) > claimed);
        bp_packing_free(nfd);
        bp_packing_free(cert);
        bp_instance_free(inst);

        let kcard = CString::new("kcard_bounded").unwrap();
        let mut inst = ptr::null_mut();
        let params = BpFamilyParams { m: 8, k: 4, ..BpFamilyParams::default() };
        assert_eq!(
            bp_generate(kcard.as_ptr(), params, &mut inst, ptr::null_mut(), &mut claimed),
            BpStatus::Construction
        );
        let params = BpFamilyParams { m: 9, ..BpFamilyParams::default() };
        assert_eq!(
            bp_generate(kcard.as_ptr(), params, &mut inst, ptr::null_mut(), &mut claimed),
            BpStatus::InvalidArgument
        );
        let nonsense = CString::new("nonsense").unwrap();
        assert_eq!(
            bp_generate(nonsense.as_ptr(), params, &mut inst, ptr::null_mut(), &mut claimed),
            BpStatus::InvalidArgument
        );
        assert!(inst.is_null());
    }
}

#[test]
fn sequences_as_strings() {
    unsafe {
        assert_eq!(take_string(bp_pi_string(4)), "43");
        assert_eq!(take_string(bp_pi_string(5)), "1807");
        assert_eq!(take_string(bp_lambda_string(1)), "1");
        assert_eq!(take_string(bp_lambda_string(2)), "3/2");
        assert_eq!(take_string(bp_lambda_string(3)), "11/6");
        // large k must not expand the sequence far
        assert!(!take_string(bp_lambda_string(100_000)).is_empty());
        assert!(bp_pi_string(0).is_null());
        assert!(last_error().contains("outside"));
        assert!(bp_pi_string(BP_PI_MAX_INDEX + 1).is_null());
        assert!(bp_lambda_string(0).is_null());
        assert_eq!(
            CStr::from_ptr(bp_version()).to_str().unwrap(),
            env!("CARGO_PKG_VERSION")
        );
    }
}

#[test]
fn errors_are_per_thread() {
    unsafe {
        assert_eq!(bp_instance_push(ptr::null_mut(), 1, 2), BpStatus::NullPointer);
    }
    std::thread::spawn(|| assert!(bp_last_error().is_null()))
        .join()
        .unwrap();
    assert!(!bp_last_error().is_null());
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(manifest_dir().join("include/binpack.h")).unwrap();
    for name in [
        "typedef struct BpInstance BpInstance;",
        "typedef struct BpPacking BpPacking;",
        "BP_STATUS_TOO_LARGE = 4",
        "bp_run(",
        "bp_opt_exact(",
        "bp_generate(",
        "bp_last_error(void)",
        "bp_string_free(",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

/// Compiles and runs a small C program against the shared library when a C
/// compiler is on the path.
#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap().to_path_buf();
    if !lib_dir.join("libbinpack_ffi.so").exists() {
        eprintln!("no shared library next to the test binary; skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include "binpack.h"

int main(void) {
    BpInstance *inst = NULL;
    if (bp_instance_parse("0.6\n0.5\n0.4\n0.3\n0.2\n", &inst) != BP_STATUS_OK) return 10;
    BpPacking *p = NULL;
    if (bp_run(inst, "mm", 0, &p) != BP_STATUS_OK) return 11;
    size_t opt = 0;
    if (bp_opt_exact(inst, 0, 0, &opt, NULL) != BP_STATUS_OK) return 12;
    if (bp_run(inst, "nope", 0, &p) != BP_STATUS_INVALID_ARGUMENT) return 13;
    printf("%zu %zu %s\n", bp_packing_bins(p), opt, bp_last_error());
    bp_packing_free(p);
    bp_instance_free(inst);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest_dir().join("include"))
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lbinpack_ffi")
        .arg("-o")
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin)
        .env("LD_LIBRARY_PATH", &lib_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("3 2 unknown algorithm"), "{stdout}");
}

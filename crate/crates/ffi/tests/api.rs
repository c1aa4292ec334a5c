use std::ffi::{c_char, CStr};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use berndenom_ffi::*;

fn sieve(limit: u64) -> *mut BdSieve {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { bd_sieve_new(limit, &mut s) }, BdStatus::Ok);
    assert!(!s.is_null());
    s
}

fn value(s: *const BdSieve, seq: BdSequence, n: u64, k: u64) -> Result<String, BdStatus> {
    let mut buf = [0 as c_char; 256];
    let status = unsafe { bd_value(s, seq, n, k, buf.as_mut_ptr(), buf.len(), ptr::null_mut()) };
    if status != BdStatus::Ok {
        return Err(status);
    }
    Ok(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_owned())
}

fn last_error() -> String {
    let p = bd_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn sequences_match_known_values() {
    let s = sieve(100);
    let dd: Vec<String> = (1..=10).map(|n| value(s, BdSequence::Dd, n, 0).unwrap()).collect();
    assert_eq!(dd, ["1", "1", "2", "1", "6", "2", "6", "3", "10", "2"]);
    let ds: Vec<String> = (0..=9).map(|n| value(s, BdSequence::Ds, n, 0).unwrap()).collect();
    assert_eq!(ds, ["1", "2", "6", "4", "30", "12", "42", "24", "90", "20"]);
    assert_eq!(value(s, BdSequence::Db, 0, 0).unwrap(), "1");
    assert_eq!(value(s, BdSequence::Dn, 2, 0).unwrap(), "6");
    assert_eq!(value(s, BdSequence::DbK, 8, 2).unwrap(), "3");
    assert_eq!(value(s, BdSequence::Dd, 0, 0), Err(BdStatus::InvalidArgument));
    assert_eq!(value(s, BdSequence::DbK, 8, 0), Err(BdStatus::InvalidArgument));
    unsafe { bd_sieve_free(s) };
}

#[test]
fn digit_sum_and_omega() {
    let mut out = 0;
    assert_eq!(unsafe { bd_digit_sum(10, 3, &mut out) }, BdStatus::Ok);
    assert_eq!(out, 2);
    assert_eq!(unsafe { bd_digit_sum(10, 1, &mut out) }, BdStatus::InvalidArgument);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { bd_digit_sum(10, 3, ptr::null_mut()) }, BdStatus::NullPointer);

    let s = sieve(600);
    assert_eq!(unsafe { bd_omega_plus(s, 192, &mut out) }, BdStatus::Ok);
    assert_eq!(out, 0);
    assert_eq!(unsafe { bd_omega_plus(s, 1000, &mut out) }, BdStatus::Ok);
    assert!(out > 0);
    unsafe { bd_sieve_free(s) };
}

#[test]
fn undersized_sieve_is_reported() {
    let s = sieve(10);
    assert_eq!(unsafe { bd_sieve_limit(s) }, 10);
    assert_eq!(value(s, BdSequence::Dd, 1000, 0), Err(BdStatus::SieveTooSmall));
    assert!(last_error().contains("sieve"));
    assert_eq!(value(ptr::null(), BdSequence::Dd, 5, 0), Err(BdStatus::NullPointer));
    unsafe { bd_sieve_free(s) };

    let mut big = ptr::null_mut();
    assert_eq!(unsafe { bd_sieve_new(u64::MAX, &mut big) }, BdStatus::SieveBudget);
    assert!(big.is_null());
}

#[test]
fn buffer_sizing() {
    let s = sieve(1000);
    let mut needed = 0usize;
    let status = unsafe { bd_value(s, BdSequence::Ds, 1000, 0, ptr::null_mut(), 0, &mut needed) };
    assert_eq!(status, BdStatus::BufferTooSmall);
    let mut buf = vec![0 as c_char; needed];
    let status = unsafe { bd_value(s, BdSequence::Ds, 1000, 0, buf.as_mut_ptr(), buf.len(), &mut needed) };
    assert_eq!(status, BdStatus::Ok);
    let text = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    assert_eq!(text.len() + 1, needed);
    assert_eq!(text, value(s, BdSequence::Ds, 1000, 0).unwrap());
    unsafe { bd_sieve_free(s) };
}

#[test]
fn profile_handle() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { bd_sieve_for_index(8, &mut s) }, BdStatus::Ok);
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { bd_profile_new(s, 8, &mut p) }, BdStatus::Ok);
    let field = |f| {
        let mut buf = [0 as c_char; 64];
        assert_eq!(unsafe { bd_profile_field(p, f, buf.as_mut_ptr(), 64, ptr::null_mut()) }, BdStatus::Ok);
        unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_owned()
    };
    assert_eq!(field(BdField::Dd), "3");
    assert_eq!(field(BdField::Db), "30");
    assert_eq!(field(BdField::Ds), "90");
    assert_eq!(field(BdField::RadN1), "3");
    assert_eq!(unsafe { bd_profile_omega_plus(p) }, 1);
    assert_eq!(unsafe { bd_profile_in_rad_set(p) }, 1);
    assert_eq!(unsafe { bd_profile_new(s, 0, &mut p) }, BdStatus::InvalidArgument);
    unsafe {
        bd_profile_free(p);
        bd_profile_free(ptr::null_mut());
        bd_sieve_free(s);
    }
}

#[test]
fn set_handles() {
    let s = sieve(10_000);
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { bd_radset_find(s, 10_000, &mut set) }, BdStatus::Ok);
    let members = unsafe { std::slice::from_raw_parts(bd_set_members(set), bd_set_len(set)) };
    assert_eq!(members, [3, 5, 8, 9, 11, 27, 29, 35, 59]);
    unsafe { bd_set_free(set) };

    assert_eq!(unsafe { bd_set_find(s, 3, 10_000, &mut set) }, BdStatus::Ok);
    let len = unsafe { bd_set_len(set) };
    let members = unsafe { std::slice::from_raw_parts(bd_set_members(set), len) };
    assert_eq!(members.last(), Some(&392));
    assert!(members.windows(2).all(|w| w[0] < w[1]));
    unsafe { bd_set_free(set) };

    assert_eq!(unsafe { bd_set_find(s, 0, 100, &mut set) }, BdStatus::InvalidArgument);
    unsafe { bd_sieve_free(s) };
}

#[test]
fn status_messages() {
    for status in [BdStatus::Ok, BdStatus::NullPointer, BdStatus::Internal] {
        let msg = unsafe { CStr::from_ptr(bd_status_message(status)) };
        assert!(!msg.to_bytes().is_empty());
    }
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/berndenom.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    let source = include_str!("../src/lib.rs");
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|l| l.split('(').next().unwrap())
        .collect();
    assert_eq!(exports.len(), 19);
    for name in exports {
        assert!(text.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(text.contains("typedef struct BdSieve BdSieve;"));
    assert!(text.contains("BD_STATUS_SIEVE_TOO_SMALL"));
}

fn static_library() -> Option<PathBuf> {
    let target = Path::new(env!("CARGO_TARGET_TMPDIR")).parent()?.to_path_buf();
    ["debug", "release"]
        .iter()
        .map(|p| target.join(p).join("libberndenom_ffi.a"))
        .filter(|p| p.exists())
        .max_by_key(|p| p.metadata().and_then(|m| m.modified()).ok())
}

#[test]
fn c_program_links_against_static_library() {
    let Some(lib) = static_library() else {
        eprintln!("static library not found; skipping C smoke test");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping C smoke test");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "berndenom.h"

int main(void) {
    BdSieve *s = NULL;
    char buf[64];
    if (bd_sieve_for_index(10, &s) != BD_STATUS_OK) return 1;
    for (uint64_t n = 1; n <= 10; n++) {
        if (bd_value(s, BD_SEQUENCE_DD, n, 0, buf, sizeof buf, NULL) != BD_STATUS_OK) return 2;
        printf("%s%s", n > 1 ? "," : "", buf);
    }
    printf("\n");
    if (bd_value(s, BD_SEQUENCE_DD, 100000, 0, buf, sizeof buf, NULL) != BD_STATUS_SIEVE_TOO_SMALL) return 3;
    if (bd_last_error_message() == NULL) return 4;
    bd_sieve_free(s);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1,1,2,1,6,2,6,3,10,2\n");
}

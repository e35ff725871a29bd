use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use realab_ffi::*;

const RECT: &str = "lattice rect\ng = 1\nfield = Q(sqrt 2)\nF = [[w]]\nglue = []\n";
const DIAMOND: &str = "lattice diamond\ng = 1\nfield = Q(sqrt 2)\nF = [[2 w]]\nglue = [1|1]\n";
const OTHER: &str = "lattice other\ng = 1\nfield = Q(sqrt 2)\nF = [[1 + w]]\nglue = []\n";
const SKEW: &str = "lattice skew\ng = 2\nfield = Q(sqrt 2)\nF = [[1, w], [0, 1]]\nglue = []\n";

fn parse(text: &str) -> *mut RlLattice {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { rl_lattice_parse(c.as_ptr(), &mut out) };
    assert_eq!(status, RlStatus::Ok, "{}", last_error());
    assert!(!out.is_null());
    out
}

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let owned = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { rl_string_free(s) };
    owned
}

fn last_error() -> String {
    let p = rl_last_error();
    if p.is_null() {
        String::new()
    } else {
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }
}

#[test]
fn components_of_normal_forms() {
    let rect = parse(RECT);
    let diamond = parse(DIAMOND);
    let mut rank = usize::MAX;
    unsafe {
        assert_eq!(rl_components(rect, &mut rank), RlStatus::Ok);
        assert_eq!(rank, 1);
        assert_eq!(rl_components(diamond, &mut rank), RlStatus::Ok);
        assert_eq!(rank, 0);
        assert_eq!(rl_lattice_genus(rect), 1);
        rl_lattice_free(rect);
        rl_lattice_free(diamond);
    }
}

#[test]
fn emit_roundtrip() {
    let rect = parse(RECT);
    let mut text = ptr::null_mut();
    unsafe {
        assert_eq!(rl_lattice_emit(rect, &mut text), RlStatus::Ok);
    }
    let text = take(text);
    let again = parse(&text);
    let mut second = ptr::null_mut();
    unsafe {
        assert_eq!(rl_lattice_emit(again, &mut second), RlStatus::Ok);
        rl_lattice_free(rect);
        rl_lattice_free(again);
    }
    assert_eq!(take(second), text);
}

#[test]
fn parse_errors_are_reported() {
    let bad = CString::new("lattice x\ng = 1\nF = [[1]]\nglue = [1|0]\n").unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { rl_lattice_parse(bad.as_ptr(), &mut out) };
    assert_eq!(status, RlStatus::Parse);
    assert!(out.is_null());
    assert!(last_error().contains("glue-meets-real-block"), "{}", last_error());

    let two = CString::new(format!("{RECT}{DIAMOND}")).unwrap();
    assert_eq!(unsafe { rl_lattice_parse(two.as_ptr(), &mut out) }, RlStatus::DocumentCount);
    assert_eq!(unsafe { rl_lattice_parse(ptr::null(), &mut out) }, RlStatus::NullArgument);
}

#[test]
fn descended_input_is_split() {
    let d = parse(
        "descended d\ng = 1\nfield = Q(sqrt 2)\nP = [[1, 1/2], [0, w]]\ntheta = [[1, 0], [0, -1]]\n",
    );
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(rl_normal_form_1d(d, &mut out), RlStatus::Ok);
        rl_lattice_free(d);
    }
    assert!(take(out).starts_with("diamond"));
}

#[test]
fn isogeny_verdicts() {
    let rect = parse(RECT);
    let diamond = parse(DIAMOND);
    let other = parse(OTHER);
    let mut verdict = RlVerdict::Unknown;
    let mut detail = ptr::null_mut();
    unsafe {
        assert_eq!(rl_isogeny_decide(rect, diamond, 1000, &mut verdict, &mut detail), RlStatus::Ok);
        assert_eq!(verdict, RlVerdict::Yes);
        take(detail);
        assert_eq!(rl_isogeny_decide(rect, other, 1000, &mut verdict, &mut detail), RlStatus::Ok);
        assert_eq!(verdict, RlVerdict::No);
        assert!(take(detail).contains("irrational"));
        let skew = parse(SKEW);
        assert_eq!(rl_isogeny_decide(rect, skew, 1000, &mut verdict, ptr::null_mut()), RlStatus::Invalid);
        assert!(!last_error().is_empty());
        for l in [rect, diamond, other, skew] {
            rl_lattice_free(l);
        }
    }
}

#[test]
fn polarization_search_and_verify() {
    let skew = parse(SKEW);
    let mut verdict = RlVerdict::Yes;
    let mut witness = ptr::null_mut();
    unsafe {
        assert_eq!(rl_polarize_find(skew, 200, 2, 0, &mut verdict, &mut witness), RlStatus::Ok);
        rl_lattice_free(skew);
    }
    assert_eq!(verdict, RlVerdict::No);
    take(witness);

    let rect = parse(RECT);
    let mut valid = -1;
    unsafe {
        assert_eq!(rl_polarize_verify(rect, &mut valid), RlStatus::Invalid);
        rl_lattice_free(rect);
    }
    let polarized = parse(&format!("{RECT}S = [[w]]\n"));
    unsafe {
        assert_eq!(rl_polarize_verify(polarized, &mut valid), RlStatus::Ok);
        rl_lattice_free(polarized);
    }
    assert_eq!(valid, 1);
}

#[test]
fn dual_handle() {
    let rect = parse(RECT);
    let mut dual = ptr::null_mut();
    let mut rank = 0;
    unsafe {
        assert_eq!(rl_lattice_dual(rect, &mut dual), RlStatus::Ok);
        assert_eq!(rl_lattice_genus(dual), 1);
        assert_eq!(rl_components(dual, &mut rank), RlStatus::Ok);
        rl_lattice_free(dual);
        rl_lattice_free(rect);
    }
    assert_eq!(rank, 1);
}

fn header_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/realab.h")
}

#[test]
fn header_declares_api() {
    let header = std::fs::read_to_string(header_path()).unwrap();
    for name in [
        "rl_lattice_parse",
        "rl_lattice_free",
        "rl_lattice_emit",
        "rl_lattice_genus",
        "rl_string_free",
        "rl_last_error",
        "rl_components",
        "rl_lattice_dual",
        "rl_polarize_find",
        "rl_polarize_verify",
        "rl_isogeny_decide",
        "rl_normal_form_1d",
        "typedef struct RlLattice RlLattice",
        "RL_STATUS_OK = 0",
        "RL_VERDICT_UNKNOWN = 2",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "realab.h"

int main(void) {
    RlLattice *l = NULL;
    if (rl_lattice_parse("lattice r\ng = 1\nF = [[3/2]]\nglue = []\n", &l) != RL_STATUS_OK) return 10;
    uintptr_t rank = 9;
    if (rl_components(l, &rank) != RL_STATUS_OK || rank != 1) return 11;
    char *nf = NULL;
    if (rl_normal_form_1d(l, &nf) != RL_STATUS_OK) return 12;
    printf("%s\n", nf);
    rl_string_free(nf);
    rl_lattice_free(l);
    if (rl_lattice_parse("lattice", &l) == RL_STATUS_OK || rl_last_error() == NULL) return 13;
    return 0;
}
"#;

#[test]
fn c_program_links_against_static_library() {
    // test binaries live in target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("librealab_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header_path().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "rectangular alpha = 3/2");
}

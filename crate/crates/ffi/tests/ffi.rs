use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use malle_ffi::*;

fn group(label: &str) -> *mut MalleGroup {
    let label = CString::new(label).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { malle_group_parse(label.as_ptr(), &mut g) }, MalleStatus::Ok);
    assert!(!g.is_null());
    g
}

fn last_error() -> String {
    let p = malle_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn group_handles() {
    let g = group("C2xC6");
    assert_eq!(unsafe { malle_group_order(g) }, 12);
    unsafe { malle_group_free(g) };
    assert_eq!(unsafe { malle_group_order(ptr::null()) }, 0);

    let bad = CString::new("C2xC3xQ").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { malle_group_parse(bad.as_ptr(), &mut g) }, MalleStatus::Parse);
    assert!(g.is_null());
    assert!(last_error().contains("C2xC3xQ"));
    assert_eq!(unsafe { malle_group_parse(ptr::null(), &mut g) }, MalleStatus::NullPointer);
}

#[test]
fn pair_index_and_delta() {
    let mut v = 0;
    let g = [2u32, 1];
    let h = [2u32];
    assert_eq!(unsafe { malle_pair_index(g.as_ptr(), 2, h.as_ptr(), 1, &mut v) }, MalleStatus::Ok);
    assert_eq!(v, 3);
    assert!(malle_last_error().is_null());

    let c3 = group("C3");
    let three = [3u32];
    let gen = [1u64];
    assert_eq!(unsafe { malle_delta(3, c3, three.as_ptr(), 1, gen.as_ptr(), 1, &mut v) }, MalleStatus::Ok);
    assert_eq!(v, 6);
    // residues are reduced, but the component count must match
    let wrapped = [4u64];
    assert_eq!(unsafe { malle_delta(3, c3, three.as_ptr(), 1, wrapped.as_ptr(), 1, &mut v) }, MalleStatus::Ok);
    assert_eq!(v, 6);
    let bad = [1u64, 1];
    assert_eq!(
        unsafe { malle_delta(3, c3, three.as_ptr(), 1, bad.as_ptr(), 2, &mut v) },
        MalleStatus::InvalidArgument
    );
    let zero = [0u32];
    assert_ne!(unsafe { malle_pair_index(zero.as_ptr(), 1, h.as_ptr(), 1, &mut v) }, MalleStatus::Ok);
    assert_eq!(
        unsafe { malle_pair_index(g.as_ptr(), 2, h.as_ptr(), 1, ptr::null_mut()) },
        MalleStatus::NullPointer
    );
    unsafe { malle_group_free(c3) };
}

#[test]
fn invariants_and_beta() {
    let klein = group("C2xC2");
    let mut inv = MalleInvariants::default();
    assert_eq!(unsafe { malle_invariants(4, klein, &mut inv) }, MalleStatus::Ok);
    assert_eq!((inv.a, inv.exponent_num, inv.exponent_den, inv.b), (4, 1, 4, 1));
    assert_eq!((inv.a_abelian_num, inv.a_abelian_den, inv.b_abelian), (1, 2, 2));
    assert_eq!(unsafe { malle_invariants(2, klein, &mut inv) }, MalleStatus::InvalidArgument);
    unsafe { malle_group_free(klein) };

    let c2 = group("C2");
    let (mut num, mut den) = (0, 0);
    assert_eq!(unsafe { malle_beta(3, c2, 1, 1000, &mut num, &mut den) }, MalleStatus::Ok);
    assert_eq!((num, den), (-499, 1000));
    assert_eq!(unsafe { malle_beta(6, c2, 1, 1000, &mut num, &mut den) }, MalleStatus::InvalidArgument);
    assert_eq!(unsafe { malle_beta(3, c2, 1, 0, &mut num, &mut den) }, MalleStatus::InvalidArgument);
    unsafe { malle_group_free(c2) };
}

#[test]
fn delta_table_string() {
    let c2 = group("C2");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { malle_delta_table_tsv(3, c2, &mut s) }, MalleStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { malle_string_free(s) };
    assert!(text.starts_with("# S3 x C2 (delta <= 3)\n"));
    assert!(text.contains("(123)\t(1^3)\t(1^6)\t2\t5\t2"));
    unsafe { malle_group_free(c2) };
}

#[test]
fn census_through_handles() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/d3_c2.fields");
    let path = CString::new(path.to_str().unwrap()).unwrap();
    let mut data = ptr::null_mut();
    assert_eq!(unsafe { malle_dataset_load(path.as_ptr(), &mut data) }, MalleStatus::Ok);
    assert_eq!(unsafe { malle_dataset_len(data) }, 385);
    let c2 = group("C2");
    let mut full = MalleCensus::default();
    let mut cut = MalleCensus::default();
    assert_eq!(unsafe { malle_census_count(data, 3, c2, 100_000, 0, &mut full) }, MalleStatus::Ok);
    assert_eq!(unsafe { malle_census_count(data, 3, c2, 100_000, 31, &mut cut) }, MalleStatus::Ok);
    assert_eq!(full.count, 9);
    assert!(full.complete);
    assert!(cut.count <= full.count);
    assert_eq!(unsafe { malle_census_count(data, 3, c2, 100_000, 12, &mut cut) }, MalleStatus::InvalidArgument);
    unsafe {
        malle_group_free(c2);
        malle_dataset_free(data);
    }

    let missing = CString::new("/nonexistent/none.fields").unwrap();
    let mut data = ptr::null_mut();
    assert_eq!(unsafe { malle_dataset_load(missing.as_ptr(), &mut data) }, MalleStatus::Io);
    let bad = CString::new("x;3;S3;-23;23:t(3);\n").unwrap();
    let status = unsafe { malle_dataset_parse(bad.as_ptr(), &mut data) };
    assert!(matches!(status, MalleStatus::Validation | MalleStatus::Parse), "{status:?}");
    let good = CString::new("f;3;S3;-23;23:t(2.1);\n").unwrap();
    assert_eq!(unsafe { malle_dataset_parse(good.as_ptr(), &mut data) }, MalleStatus::Ok);
    assert_eq!(unsafe { malle_dataset_len(data) }, 1);
    unsafe { malle_dataset_free(data) };
}

fn header() -> (PathBuf, String) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/malle.h");
    let text = std::fs::read_to_string(&path).unwrap();
    (path, text)
}

#[test]
fn header_declares_the_interface() {
    let (_, text) = header();
    for name in [
        "MALLE_STATUS_OK = 0",
        "typedef struct MalleGroup MalleGroup;",
        "typedef struct MalleDataset MalleDataset;",
        "const char *malle_last_error(void);",
        "malle_pair_index(",
        "malle_delta(",
        "malle_invariants(",
        "malle_beta(",
        "malle_delta_table_tsv(",
        "void malle_string_free(char *s);",
        "malle_dataset_load(",
        "malle_census_count(",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let (path, _) = header();
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(status) = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang])
            .arg(&path)
            .status()
        else {
            eprintln!("{compiler} not available, skipping");
            continue;
        };
        assert!(status.success(), "{compiler} rejected the header");
    }
}

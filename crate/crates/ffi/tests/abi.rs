use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use upag_ffi::*;

fn generate(m: usize, n: usize, seed: u64, labelled: bool) -> *mut UpagGraph {
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { upag_generate(m, n, seed, labelled, &mut g) },
        UpagStatus::Ok
    );
    assert!(!g.is_null());
    g
}

fn last_error() -> String {
    let need = unsafe { upag_last_error(ptr::null_mut(), 0) };
    let mut buf = vec![0u8; need + 1];
    unsafe { upag_last_error(buf.as_mut_ptr().cast(), buf.len()) };
    CStr::from_bytes_until_nul(&buf)
        .unwrap()
        .to_str()
        .unwrap()
        .to_owned()
}

fn to_bytes(g: *const UpagGraph) -> Vec<u8> {
    let mut need = 0;
    assert_eq!(
        unsafe { upag_to_bytes(g, ptr::null_mut(), 0, &mut need) },
        UpagStatus::BufferTooSmall
    );
    let mut buf = vec![0u8; need];
    let mut written = 0;
    assert_eq!(
        unsafe { upag_to_bytes(g, buf.as_mut_ptr(), buf.len(), &mut written) },
        UpagStatus::Ok
    );
    assert_eq!(written, need);
    buf
}

#[test]
fn example_queries_through_the_abi() {
    // M = 3, n = 4, adjacency string 000 001 011 013
    let targets = [0usize, 0, 0, 0, 0, 1, 0, 1, 1, 0, 1, 3];
    let mut g = ptr::null_mut();
    let st = unsafe { upag_build(3, targets.as_ptr(), targets.len(), true, &mut g) };
    assert_eq!(st, UpagStatus::Ok);
    unsafe {
        let (mut m, mut n) = (0, 0);
        assert_eq!(upag_shape(g, &mut m, &mut n), UpagStatus::Ok);
        assert_eq!((m, n), (3, 4));
        let mut labelled = false;
        assert_eq!(upag_is_labelled(g, &mut labelled), UpagStatus::Ok);
        assert!(labelled);

        let mut w = 0;
        assert_eq!(upag_out_neighbour(g, 4, 3, &mut w), UpagStatus::Ok);
        assert_eq!(w, 3);
        assert_eq!(upag_in_neighbour(g, 1, 1, &mut w), UpagStatus::Ok);
        assert_eq!(w, 2);
        let (mut din, mut dout) = (0, 0);
        assert_eq!(upag_degree(g, 0, &mut din, &mut dout), UpagStatus::Ok);
        assert_eq!((din, dout), (7, 0));
        assert_eq!(upag_degree(g, 1, &mut din, &mut dout), UpagStatus::Ok);
        assert_eq!((din, dout), (4, 3));
        let mut adj = false;
        assert_eq!(upag_adjacent(g, 3, 4, &mut adj), UpagStatus::Ok);
        assert!(adj);
        assert_eq!(upag_adjacent(g, 2, 3, &mut adj), UpagStatus::Ok);
        assert!(!adj);
        let mut bits = 0;
        assert_eq!(upag_total_bits(g, &mut bits), UpagStatus::Ok);
        assert!(bits > 0);
        upag_free(g);
    }
}

#[test]
fn status_codes_and_messages() {
    let g = generate(2, 50, 1, false);
    unsafe {
        let mut w = 0;
        assert_eq!(upag_out_neighbour(g, 0, 1, &mut w), UpagStatus::OutOfRange);
        assert!(last_error().contains("out of range"), "{}", last_error());
        assert_eq!(upag_out_neighbour(g, 3, 3, &mut w), UpagStatus::OutOfRange);
        assert_eq!(upag_in_neighbour(g, 51, 1, &mut w), UpagStatus::OutOfRange);
        assert_eq!(
            upag_out_neighbour(ptr::null(), 1, 1, &mut w),
            UpagStatus::NullPointer
        );
        assert_eq!(
            upag_out_neighbour(g, 1, 1, ptr::null_mut()),
            UpagStatus::NullPointer
        );

        // a target that does not precede its source
        let bad = [0usize, 0, 2, 0];
        let mut h = ptr::null_mut();
        assert_ne!(
            upag_build(2, bad.as_ptr(), bad.len(), false, &mut h),
            UpagStatus::Ok
        );
        assert!(h.is_null());
        let odd = [0usize, 0, 1];
        assert_ne!(
            upag_build(2, odd.as_ptr(), odd.len(), false, &mut h),
            UpagStatus::Ok
        );
        assert_ne!(upag_generate(0, 5, 0, false, &mut h), UpagStatus::Ok);
        assert!(!last_error().is_empty());
        upag_free(g);
        upag_free(ptr::null_mut());
    }
}

#[test]
fn byte_round_trip_and_corruption() {
    let g = generate(3, 300, 7, false);
    let bytes = to_bytes(g);
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(
            upag_from_bytes(bytes.as_ptr(), bytes.len(), &mut h),
            UpagStatus::Ok
        );
        assert_eq!(to_bytes(h), bytes);
        for v in 0..=300 {
            let (mut a, mut b, mut c, mut d) = (0, 0, 0, 0);
            upag_degree(g, v, &mut a, &mut b);
            upag_degree(h, v, &mut c, &mut d);
            assert_eq!((a, b), (c, d));
        }
        // a graph read from bytes carries no relabel map
        let mut need = 0;
        assert_eq!(
            upag_relabel(h, ptr::null_mut(), 0, &mut need),
            UpagStatus::InvalidArgument
        );
        upag_free(h);

        let mut bad = bytes.clone();
        bad[0] ^= 1;
        assert_eq!(
            upag_from_bytes(bad.as_ptr(), bad.len(), &mut h),
            UpagStatus::BadMagic
        );
        let mut bad = bytes.clone();
        bad[4] = 0x7f;
        assert_eq!(
            upag_from_bytes(bad.as_ptr(), bad.len(), &mut h),
            UpagStatus::VersionMismatch
        );
        assert_eq!(
            upag_from_bytes(bytes.as_ptr(), 20, &mut h),
            UpagStatus::Truncated
        );
        let mut bad = bytes.clone();
        let last = bad.len() - 1;
        bad[last] ^= 0x40;
        assert_eq!(
            upag_from_bytes(bad.as_ptr(), bad.len(), &mut h),
            UpagStatus::ChecksumMismatch
        );
        assert!(h.is_null());
        upag_free(g);
    }
}

#[test]
fn relabel_map_is_a_permutation() {
    let g = generate(2, 100, 3, false);
    unsafe {
        let mut need = 0;
        assert_eq!(
            upag_relabel(g, ptr::null_mut(), 0, &mut need),
            UpagStatus::BufferTooSmall
        );
        assert_eq!(need, 101);
        let mut map = vec![0usize; need];
        assert_eq!(
            upag_relabel(g, map.as_mut_ptr(), map.len(), &mut need),
            UpagStatus::Ok
        );
        let mut seen = map.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..=100).collect::<Vec<_>>());
        upag_free(g);
    }
}

#[test]
fn save_and_load_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("g.upag").to_str().unwrap()).unwrap();
    let g = generate(1, 64, 9, true);
    unsafe {
        assert_eq!(upag_save(g, path.as_ptr()), UpagStatus::Ok);
        let mut h = ptr::null_mut();
        assert_eq!(upag_load(path.as_ptr(), &mut h), UpagStatus::Ok);
        assert_eq!(to_bytes(h), to_bytes(g));
        upag_free(h);
        let missing = CString::new(dir.path().join("none").to_str().unwrap()).unwrap();
        assert_eq!(upag_load(missing.as_ptr(), &mut h), UpagStatus::Io);
        upag_free(g);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(upag_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/upag.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "upag_build",
        "upag_from_bytes",
        "upag_last_error",
        "UPAG_STATUS_PANIC",
        "UpagGraph",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"upag.h\"\nint main(void) {\n  UpagGraph *g = NULL;\n  \
         size_t w = 0;\n  if (upag_generate(2, 10, 1, false, &g) != UPAG_STATUS_OK) return 1;\n  \
         upag_out_neighbour(g, 1, 1, &w);\n  upag_free(g);\n  return (int)w;\n}\n",
    )
    .unwrap();
    let status = match Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header.parent().unwrap())
        .arg(&src)
        .status()
    {
        Ok(s) => s,
        Err(_) => {
            eprintln!("no C compiler on PATH, header check skipped");
            return;
        }
    };
    assert!(status.success());
}

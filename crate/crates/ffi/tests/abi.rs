use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use billiard_ffi::*;

fn stadium(length: f64) -> *mut BilliardTable {
    let mut t = ptr::null_mut();
    assert_eq!(billiard_table_stadium(length, 1.0, &mut t), BilliardStatus::Ok);
    assert!(!t.is_null());
    t
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(billiard_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn stadium_certificate_round_trip() {
    let t = stadium(1.8);
    let mut c = std::mem::MaybeUninit::<BilliardCertificate>::uninit();
    assert_eq!(billiard_certify(t, c.as_mut_ptr()), BilliardStatus::Ok);
    let c = unsafe { c.assume_init() };
    assert!(c.certified && !c.semistadium && c.rigorous_geometry);
    assert_eq!(c.root, 2.0);
    assert!((c.bound_bits - 1.0).abs() < 1e-15);
    unsafe { billiard_table_free(t) };

    let t = stadium(1.7);
    let mut c = std::mem::MaybeUninit::<BilliardCertificate>::uninit();
    assert_eq!(billiard_certify(t, c.as_mut_ptr()), BilliardStatus::Ok);
    assert!(!unsafe { c.assume_init() }.certified);
    unsafe { billiard_table_free(t) };
}

#[test]
fn errors_are_codes_with_messages() {
    let mut t = ptr::null_mut();
    assert_eq!(billiard_table_stadium(-1.0, 1.0, &mut t), BilliardStatus::InvalidArgument);
    assert!(t.is_null());
    assert!(last_error().contains("positive"));
    assert_eq!(billiard_table_stadium(4.0, 1.0, ptr::null_mut()), BilliardStatus::NullPointer);
    let mut x = 0.0;
    assert_eq!(billiard_largest_root(0, &mut x), BilliardStatus::InvalidArgument);
    assert_eq!(billiard_largest_root(1, &mut x), BilliardStatus::Ok);
    assert_eq!(x, 2.0);
    assert_eq!(last_error(), "");
    unsafe { billiard_table_free(ptr::null_mut()) };
}

#[test]
fn billiard_map_step() {
    let t = stadium(4.0);
    let (mut ell, mut eps) = (0.0, 0.0);
    assert_eq!(billiard_table_parameters(t, &mut ell, &mut eps), BilliardStatus::Ok);
    assert!((ell - (4.0 + 3f64.sqrt() / 2.0)).abs() < 1e-12);
    // central horizontal flight hits the centre of the opposite cap head on
    let len = std::f64::consts::PI / 6.0;
    let start = BilliardPhasePoint { arc: BilliardArc::Left, r: len / 2.0, phi: 0.0 };
    let mut next = start;
    assert_eq!(unsafe { billiard_next_collision(t, &start, &mut next) }, BilliardStatus::Ok);
    assert_eq!(next.arc, BilliardArc::Right);
    assert!((next.r - len / 2.0).abs() < 1e-12 && next.phi.abs() < 1e-12);
    let bad = BilliardPhasePoint { arc: BilliardArc::Left, r: len / 2.0, phi: 2.0 };
    assert_eq!(unsafe { billiard_next_collision(t, &bad, &mut next) }, BilliardStatus::Geometry);
    unsafe { billiard_table_free(t) };
}

#[test]
fn word_counts() {
    let mut needed = 0;
    assert_eq!(unsafe { billiard_count_words(1, 3, ptr::null_mut(), 0, &mut needed) }, BilliardStatus::BufferTooSmall);
    assert_eq!(needed, 3);
    let mut buf = vec![0 as std::ffi::c_char; needed];
    assert_eq!(unsafe { billiard_count_words(1, 3, buf.as_mut_ptr(), buf.len(), &mut needed) }, BilliardStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap(), "11");
    let mut log = 0.0;
    assert_eq!(billiard_count_words_log(1, 3, &mut log), BilliardStatus::Ok);
    assert!((log - 11f64.ln()).abs() < 1e-15);
}

#[test]
fn realize_into_buffer() {
    let t = stadium(4.0);
    let word = [0, 1, 0, -1, 0];
    let mut written = 0;
    let status = unsafe { billiard_realize(t, word.as_ptr(), word.len(), 0.0, ptr::null_mut(), 0, &mut written) };
    assert_eq!(status, BilliardStatus::BufferTooSmall);
    assert!(written >= word.len());
    let mut orbit = vec![BilliardPhasePoint { arc: BilliardArc::Bottom, r: 0.0, phi: 0.0 }; written];
    let status =
        unsafe { billiard_realize(t, word.as_ptr(), word.len(), 0.0, orbit.as_mut_ptr(), orbit.len(), &mut written) };
    assert_eq!(status, BilliardStatus::Ok);
    let caps = orbit.iter().filter(|p| matches!(p.arc, BilliardArc::Left | BilliardArc::Right)).count();
    assert_eq!(caps, 3);
    let bad = [0, 1, 1];
    assert_eq!(
        unsafe { billiard_realize(t, bad.as_ptr(), 3, 0.0, orbit.as_mut_ptr(), orbit.len(), &mut written) },
        BilliardStatus::Inadmissible
    );
    let far = [0, 1, 2, 0];
    assert_eq!(
        unsafe { billiard_realize(t, far.as_ptr(), 4, 0.0, orbit.as_mut_ptr(), orbit.len(), &mut written) },
        BilliardStatus::TargetUnreachable
    );
    unsafe { billiard_table_free(t) };
}

#[test]
fn table_from_config() {
    let cfg = CString::new("eps = 0.3\n[table]\nkind = \"mushroom\"\nstalk = 4.0\nradius = 0.5\n").unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { billiard_table_from_config(cfg.as_ptr(), &mut t) }, BilliardStatus::Ok);
    let (mut ell, mut eps) = (0.0, 0.0);
    assert_eq!(billiard_table_parameters(t, &mut ell, &mut eps), BilliardStatus::Ok);
    assert_eq!(eps, 0.3);
    unsafe { billiard_table_free(t) };
    let bad = CString::new("eps = 1.0").unwrap();
    assert_eq!(unsafe { billiard_table_from_config(bad.as_ptr(), &mut t) }, BilliardStatus::InvalidConfig);
    assert_eq!(unsafe { billiard_table_from_config(ptr::null(), &mut t) }, BilliardStatus::NullPointer);
}

#[test]
fn generic_bound_halves_for_semistadia() {
    let mut full = std::mem::MaybeUninit::<BilliardCertificate>::uninit();
    let mut semi = std::mem::MaybeUninit::<BilliardCertificate>::uninit();
    assert_eq!(billiard_entropy_lower_bound(20.0, 0.3, false, full.as_mut_ptr()), BilliardStatus::Ok);
    assert_eq!(billiard_entropy_lower_bound(10.0, 0.3, true, semi.as_mut_ptr()), BilliardStatus::Ok);
    let (full, semi) = unsafe { (full.assume_init(), semi.assume_init()) };
    assert_eq!(full.n, semi.n);
    assert_eq!(semi.bound_nats, 0.5 * full.bound_nats);
    assert_eq!(billiard_entropy_lower_bound(20.0, 0.7, false, ptr::null_mut()), BilliardStatus::InvalidArgument);
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/billiard.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in
        ["billiard_table_stadium", "billiard_realize", "billiard_count_words", "BILLIARD_STATUS_BISECTION_STALL"]
    {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) =
        Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"]).arg(&header).status()
    else {
        eprintln!("no C compiler found; syntax check skipped");
        return;
    };
    assert!(status.success());
}

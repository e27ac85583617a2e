use std::ffi::CStr;
use std::ptr;

use sphere_facets_ffi::*;

#[test]
fn cloud_and_hull_round_trip() {
    unsafe {
        let mut cloud = ptr::null_mut();
        assert_eq!(sf_cloud_sample(7, 0, 3, 40, &mut cloud), SfStatus::Ok);
        assert_eq!((sf_cloud_len(cloud), sf_cloud_dim(cloud)), (40, 3));
        let mut coords = vec![0.0; 120];
        assert_eq!(sf_cloud_coords(cloud, coords.as_mut_ptr(), coords.len()), SfStatus::Ok);
        assert_eq!(sf_cloud_coords(cloud, coords.as_mut_ptr(), 10), SfStatus::BufferTooSmall);

        let mut hull = ptr::null_mut();
        assert_eq!(sf_hull_build(cloud, &mut hull), SfStatus::Ok);
        assert!(!sf_hull_is_degenerate(hull));
        // Euler: a simplicial 3-polytope on V vertices has 2V − 4 facets
        let f = sf_hull_facet_count(hull);
        let mut idx = [0u32; 3];
        assert_eq!(sf_hull_facet_vertices(hull, 0, idx.as_mut_ptr(), 3), SfStatus::Ok);
        assert!(idx.iter().all(|&i| i < 40));
        assert_eq!(sf_hull_facet_vertices(hull, f, idx.as_mut_ptr(), 3), SfStatus::InvalidArgument);
        let mut stats = SfFacetStats::default();
        assert_eq!(sf_hull_statistics(hull, &mut stats), SfStatus::Ok);
        assert!(stats.min_volume > 0.0 && stats.min_volume <= stats.max_volume);

        // rebuilding from the copied coordinates gives the same hull
        let mut again = ptr::null_mut();
        assert_eq!(sf_cloud_from_coords(coords.as_ptr(), coords.len(), 3, &mut again), SfStatus::Ok);
        let mut hull2 = ptr::null_mut();
        assert_eq!(sf_hull_build(again, &mut hull2), SfStatus::Ok);
        assert_eq!(sf_hull_facet_count(hull2), f);

        sf_hull_free(hull2);
        sf_cloud_free(again);
        sf_hull_free(hull);
        sf_cloud_free(cloud);
        sf_hull_free(ptr::null_mut());
        sf_cloud_free(ptr::null_mut());
    }
}

#[test]
fn errors_set_codes_and_messages() {
    unsafe {
        let mut cloud = ptr::null_mut();
        let bad = [1.0, 1.0, 0.0, 0.0];
        assert_eq!(sf_cloud_from_coords(bad.as_ptr(), 4, 2, &mut cloud), SfStatus::InvalidArgument);
        assert!(cloud.is_null());
        let mut buf = [0 as std::ffi::c_char; 256];
        let n = sf_last_error(buf.as_mut_ptr(), buf.len());
        assert!(n > 0);
        assert!(!CStr::from_ptr(buf.as_ptr()).to_str().unwrap().is_empty());
        // truncation keeps NUL termination and still reports the full length
        let mut tiny = [0 as std::ffi::c_char; 4];
        assert_eq!(sf_last_error(tiny.as_mut_ptr(), 4), n);
        assert_eq!(CStr::from_ptr(tiny.as_ptr()).to_bytes().len(), 3);

        assert_eq!(sf_hull_build(ptr::null(), &mut ptr::null_mut()), SfStatus::NullPointer);
        assert_eq!(sf_cap_area(3, 0.0, ptr::null_mut()), SfStatus::NullPointer);
        let mut v = 0.0;
        assert_eq!(sf_cap_area(3, 2.0, &mut v), SfStatus::InvalidArgument);

        let mut c7 = ptr::null_mut();
        assert_eq!(sf_cloud_sample(1, 0, 7, 20, &mut c7), SfStatus::Ok);
        let mut h = ptr::null_mut();
        assert_eq!(sf_hull_build(c7, &mut h), SfStatus::Unsupported);
        sf_cloud_free(c7);

        let msg = CStr::from_ptr(sf_status_message(SfStatus::BufferTooSmall));
        assert_eq!(msg.to_str().unwrap(), "output buffer too small");
    }
}

#[test]
fn scalar_functions_match_the_library() {
    unsafe {
        let mut v = 0.0;
        assert_eq!(sf_cap_area(3, 0.5, &mut v), SfStatus::Ok);
        assert!((v - std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(sf_miles_expected_volume(2, &mut v), SfStatus::Ok);
        assert!((v - 3.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-14);

        let (mut a, mut b) = (SfTrialSummary::default(), SfTrialSummary::default());
        assert_eq!(sf_run_trial(5, 3, 2, 50, &mut a), SfStatus::Ok);
        assert_eq!(sf_run_trial(5, 3, 2, 50, &mut b), SfStatus::Ok);
        assert_eq!(a.facet_count, 50);
        assert_eq!(a.min_facet_vol.to_bits(), b.min_facet_vol.to_bits());
        assert!(a.min_arc_gap > 0.0);
        assert_eq!(sf_run_trial(5, 3, 3, 50, &mut a), SfStatus::Ok);
        assert!(a.min_arc_gap.is_nan());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/sphere_facets.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct SfHull SfHull;"));
    assert!(header.contains("SF_STATUS_OK = 0"));
}

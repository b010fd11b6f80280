//! The stored iterate dimensions match a fresh bar-construction run.

use std::path::PathBuf;

use thh_core::repro::golden::{iterate_dimensions, render, stored, FORMAT_VERSION, GOLDEN_MAX_DEGREE, GOLDEN_PRIMES};

fn path(p: u64) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("tests/golden/{FORMAT_VERSION}/iterate_p{p}.csv"))
}

#[test]
fn golden_iterates_are_current() {
    let regenerate = std::env::var("THH_REGENERATE_GOLDEN").is_ok_and(|v| v == "1");
    for &p in GOLDEN_PRIMES {
        let [_, n2, n3] = iterate_dimensions(p, GOLDEN_MAX_DEGREE).unwrap();
        let fresh = render(p, GOLDEN_MAX_DEGREE, &n2, &n3);
        assert!(fresh.contains("agrees with"), "p = {p}: bar construction and closed form differ");
        if regenerate {
            std::fs::write(path(p), &fresh).unwrap();
            continue;
        }
        let on_disk = std::fs::read_to_string(path(p)).unwrap();
        assert_eq!(on_disk, fresh, "p = {p}: rerun with THH_REGENERATE_GOLDEN=1");
        assert_eq!(stored(p).map(|r| r.len()), Some(GOLDEN_MAX_DEGREE as usize + 1));
    }
}

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for n in [2, 4] {
        if let Ok(v) = qmlab_cli::parse::parse_angles_deg(text, n) {
            assert_eq!(v.len(), n);
            assert!(v.iter().all(|x| x.is_finite()));
        }
    }
    if let Ok(v) = qmlab_cli::parse::parse_list(text) {
        assert!(v.iter().all(|x| x.is_finite()));
    }
    let _ = qmlab_cli::parse::parse_indices(text);
});

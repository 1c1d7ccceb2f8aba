#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((u, _)) = qmlab_cli::parse::parse_vector(text) {
        let n = (u.x() * u.x() + u.y() * u.y() + u.z() * u.z()).sqrt();
        assert!((n - 1.0).abs() < 1e-9);
    }
});

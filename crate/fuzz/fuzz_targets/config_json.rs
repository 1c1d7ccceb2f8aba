#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for sub in [&["chsh"][..], &["packet", "spread"], &["counts"]] {
        let mut argv = vec!["qmlab".to_string()];
        argv.extend(sub.iter().map(|s| s.to_string()));
        if let Ok(merged) = qmlab_cli::apply_config_text(argv.clone(), text) {
            assert!(merged.starts_with(&argv));
        }
    }
});

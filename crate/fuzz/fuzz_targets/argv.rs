#![no_main]

use libfuzzer_sys::fuzz_target;

// Whitespace-separated tokens; subcommands that would run long Monte Carlo jobs or write
// files are skipped so each input stays cheap.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.iter().any(|t| {
        t.starts_with("--out") || t.starts_with("--config") || matches!(*t, "regress" | "sample" | "lhv" | "balance")
    }) {
        return;
    }
    if tokens.iter().any(|t| t.parse::<f64>().map_or(false, |v| v.abs() > 1e5)) {
        return;
    }
    let mut argv = vec!["qmlab"];
    argv.extend(tokens);
    let out = qmlab_cli::execute(argv);
    assert!(matches!(out.code, 0..=2));
});

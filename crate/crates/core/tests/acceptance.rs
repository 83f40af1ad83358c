use std::process::ExitCode;

use qchev_core::suite::{run, SuiteOptions, SUITES};

fn main() -> ExitCode {
    let opts = SuiteOptions::default();
    let mut all = true;
    for (i, (name, title)) in SUITES.iter().enumerate() {
        let (pass, note) = match run(name, &opts) {
            Ok(r) => {
                let failed: Vec<String> = r.failures().map(|c| format!("{} ({})", c.case, c.detail)).collect();
                let note = if failed.is_empty() {
                    format!("{} cases, {} ms", r.cases.len(), r.ms)
                } else {
                    format!("failed: {}", failed.join("; "))
                };
                (r.pass(), note)
            }
            Err(e) => (false, format!("error: {}", e)),
        };
        all &= pass;
        println!("criterion {:>2} [{}] {}: {} ({})", i + 1, if pass { "PASS" } else { "FAIL" }, name, title, note);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

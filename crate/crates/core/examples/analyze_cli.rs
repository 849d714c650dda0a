//! Drive the `analyze` verb in-process with each output format.
//!
//! cargo run --example analyze_cli

use specialval::cli::run;

fn main() {
    for format in ["table", "csv", "json"] {
        let out = run([
            "specialval",
            "analyze",
            "--study",
            "CLARIFY",
            "--outcome",
            "ACS",
            "--theta0",
            "0",
            "--epsilon",
            "0.1",
            "--method",
            "two-step",
            "--alpha",
            "0.5,0.8",
            "--format",
            format,
        ]);
        println!("--- {format} (exit {})\n{}", out.code, out.stdout);
    }
    let out = run([
        "specialval",
        "analyze",
        "--study",
        "CLARIFY",
        "--outcome",
        "ACS",
        "--method",
        "p-hybrid",
        "--gamma",
        "0.0005",
    ]);
    println!("--- gamma below floor (exit {})\n{}", out.code, out.stderr);
}

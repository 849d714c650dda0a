//! Q value curve through the command-line entry point.
//!
//! cargo run --example q_curve [output.svg]

use specialval::cli::run;

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        std::env::temp_dir()
            .join("specialval_qcurve.svg")
            .display()
            .to_string()
    });
    for (study, outcome) in [("CLARIFY", "ACS"), ("STAMINA", "ACS")] {
        let out = run([
            "specialval",
            "qcurve",
            "--study",
            study,
            "--outcome",
            outcome,
            "--svg",
            &path,
        ]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        print!("{study} {outcome}: {}", out.stdout);
    }
    println!("last curve written to {path}");
}

//! DerSimonian-Laird pooling and a forest plot.
//!
//! cargo run --example meta_analysis_forest [output.svg]

use specialval::cli::data::load_records;
use specialval::cli::svg;
use specialval::effects::likelihood;
use specialval::meta::{dersimonian_laird, forest_rows, StudyEffect};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let studies = load_records(None)?
        .iter()
        .map(|r| {
            Ok(StudyEffect::from_likelihood(
                r.label(),
                &likelihood(&r.table()?)?,
            ))
        })
        .collect::<Result<Vec<_>, Box<dyn std::error::Error>>>()?;
    let re = dersimonian_laird(&studies, 0.95)?;
    println!(
        "pooled log OR {:.4} (se {:.4}), tau2 {:.4}, Q {:.4}",
        re.pooled, re.pooled_se, re.tau2, re.q_stat
    );

    let rows = forest_rows(&studies, &re, 0.95)?;
    for r in &rows {
        println!("{:<12} {:.3} ({:.3}, {:.3})", r.label, r.or, r.lo, r.hi);
    }
    let path = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("specialval_forest.svg"));
    std::fs::write(&path, svg::forest(&rows))?;
    println!("wrote {}", path.display());
    Ok(())
}

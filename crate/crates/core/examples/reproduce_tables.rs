//! The three case-study tables, recomputed from their 2x2 counts.
//!
//! cargo run --example reproduce_tables

use specialval::cli::render;
use specialval::cli::reproduce_rows;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for id in 1..=3 {
        let (rows, notes) = reproduce_rows(id)?;
        println!("Table {id}");
        print!("{}", render::table(&rows));
        for n in notes {
            println!("  {n}");
        }
        println!();
    }
    Ok(())
}

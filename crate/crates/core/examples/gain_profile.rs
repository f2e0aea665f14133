//! Normalized gain against element shift, written as fig4.csv.

use oirs::experiment::{run_fig4, ExperimentConfig};

fn main() -> oirs::Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.fig4.shift_points = 21;
    let (table, report) = run_fig4(&cfg)?;
    println!("{}", table.header);
    for row in &table.rows {
        println!("{row}");
    }
    println!("coherence distance {:.4} m", report.d_c);
    let path = table.write(&std::env::temp_dir().join("oirs-example"), &cfg)?;
    println!("wrote {}", path.display());
    Ok(())
}

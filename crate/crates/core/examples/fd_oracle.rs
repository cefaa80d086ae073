//! Check every jet coefficient of an expression against finite differences.

use dirac_reduce::dsl::parse_expression;
use dirac_reduce::oracle::{compare_jet_vs_fd, FdConfig};

fn main() -> dirac_reduce::Result<()> {
    let e = parse_expression("exp(i*t) * sin(x + y*z)")?;
    let rows = compare_jet_vs_fd(&e, [0.2, 0.4, -0.1, 0.3], 4, &FdConfig::default())?;
    let mut worst = [0.0f64; 5];
    for r in &rows {
        worst[r.order] = worst[r.order].max(r.relative_difference);
    }
    for (k, w) in worst.iter().enumerate() {
        println!("order {k}: worst relative difference {w:.2e}");
    }
    println!("{} of {} rows within tolerance", rows.iter().filter(|r| r.pass).count(), rows.len());
    Ok(())
}

//! Average and peak non-linear AoI for the three cost shapes.

use aoi_link::aoi_metrics::{avg_aoi, avg_paoi, exp_z, AoiParams, MaxTx, MetricValue};

fn show(v: MetricValue) -> String {
    match v {
        MetricValue::Finite(x) => format!("{x:.6}"),
        MetricValue::Divergent => "divergent".into(),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = 0.1;
    println!("T_p = {t} s\n");
    println!("{:>5} {:>9} {:>6} {:>12} {:>12}", "p", "M", "a", "avg AoI", "avg PAoI");
    for p in [0.05, 0.3, 0.7] {
        for m in [MaxTx::bounded(1)?, MaxTx::bounded(4)?, MaxTx::Unbounded] {
            for a in [-2.0, 0.0, 2.0] {
                let params = if a == 0.0 { AoiParams::linear(t, m)? } else { AoiParams::new(a, t, m)? };
                println!(
                    "{p:>5} {:>9} {a:>6} {:>12} {:>12}",
                    m.to_string(),
                    show(avg_aoi(p, &params)?),
                    show(avg_paoi(p, &params)?)
                );
            }
        }
    }

    // exponential cost diverges once p e^{aT} >= 1
    let params = AoiParams::new(8.0, t, MaxTx::Unbounded)?;
    for p in [0.4, 0.45, 0.5] {
        println!("a = 8, p = {p}: p e^(aT) = {:.3}, avg AoI = {}", p * 0.8_f64.exp(), show(avg_aoi(p, &params)?));
    }
    println!("\nE[Z] at p = 0.6: M = 3 -> {:.4}, unbounded -> {:.4}", exp_z(0.6, MaxTx::bounded(3)?)?, exp_z(0.6, MaxTx::Unbounded)?);
    Ok(())
}

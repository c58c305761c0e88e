//! Sampled check of the eigenvalue condition behind the dimension estimates
//! on points of the Lorenz attractor.

use lyadim::atlas::{grid_points, settle, SettleOptions};
use lyadim::exact::{leonov_margin, lorenz_exact};
use lyadim::flow::IntegratorConfig;
use lyadim::smallmat::SquareMatrix;
use lyadim::systems::SystemSpec;

fn main() -> lyadim::Result<()> {
    let (sigma, r, b) = (10.0, 28.0, 8.0 / 3.0);
    let spec = SystemSpec::lorenz(sigma, r, b)?;
    let cfg = IntegratorConfig::default();
    let sample = settle(&spec, &[1.0, 1.0, 1.0], 100.0, 100.0, 0.1, &cfg, &SettleOptions::default())?;
    let points = grid_points(&sample, 200)?;
    let eye = SquareMatrix::identity(3);

    let full = leonov_margin(&spec, &eye, |_| 0.0, 3, 0.0, &points)?;
    println!("j + s = 3 with S = I: worst margin {:.6} (divergence {:.6})", full.worst, -(sigma + 1.0 + b));

    let d = lorenz_exact(sigma, r, b)?.candidate;
    let m = leonov_margin(&spec, &eye, |_| 0.0, 2, d - 2.0, &points)?;
    println!(
        "j + s = {d:.4} with S = I and no V: worst margin {:.4} at point {} (holds: {})",
        m.worst,
        m.worst_index,
        m.holds_on_sample()
    );
    Ok(())
}

//! Finite-time exponents of the Lorenz system at the classical parameters,
//! by product SVD and by the single-pass QR scheme.
//!
//!     cargo run --release --example lorenz_exponents

use lyadim::flow::{advance, IntegratorConfig};
use lyadim::lyap::{finite_time_les, kaplan_yorke};
use lyadim::systems::SystemSpec;

fn main() -> lyadim::Result<()> {
    let cfg = IntegratorConfig::default();
    let lorenz = SystemSpec::lorenz(10.0, 28.0, 8.0 / 3.0)?;
    let start = advance(&lorenz, &[1.0, 1.0, 1.0], 100.0, &cfg)?;
    println!("start {start:?}");
    for n_factors in [1000, 5000, 10_000] {
        let s = finite_time_les(&lorenz, &start, 0.1, n_factors, 3, &cfg)?;
        let ky = kaplan_yorke(&s.les)?;
        println!(
            "T = {:>6}: LE = [{:+.5}, {:+.5}, {:+.5}]  QR = [{:+.5}, {:+.5}, {:+.5}]  sum = {:.5}  d = {:.4}",
            s.t, s.les[0], s.les[1], s.les[2], s.qr_les[0], s.qr_les[1], s.qr_les[2], s.sum(), ky.d
        );
    }
    Ok(())
}

//! The hidden attractor of the generalized Lorenz system: settle from the
//! known seed, confirm that no equilibrium neighborhood leads to it, and
//! compute its finite-time dimension.

use lyadim::atlas::{classify_excitation, settle, ExcitationOptions, SettleOptions};
use lyadim::config::GD_HIDDEN_SEED;
use lyadim::exact::gd_exact;
use lyadim::flow::IntegratorConfig;
use lyadim::lyap::{finite_time_les, kaplan_yorke};
use lyadim::systems::SystemSpec;

fn main() -> lyadim::Result<()> {
    let spec = SystemSpec::generalized_lorenz(4.0, 700.0, 1.0, 0.0052)?;
    let cfg = IntegratorConfig::default();

    for eq in spec.equilibria() {
        println!("{} {:?} {:?}", eq.label, eq.coordinates, eq.stability);
    }
    let sample = settle(&spec, &GD_HIDDEN_SEED, 500.0, 500.0, 0.01, &cfg, &SettleOptions::default())?;
    let classified = classify_excitation(&spec, &sample, &ExcitationOptions::default(), &cfg)?;
    println!("classification: {:?}", classified.classification);
    for eq in spec.equilibria() {
        let hits = classified.trials.iter().filter(|t| t.equilibrium == eq.label && t.excites).count();
        println!("  {}: {hits} trials reach the attractor", eq.label);
    }

    let s = finite_time_les(&spec, &GD_HIDDEN_SEED, 0.1, 10_000, 3, &cfg)?;
    println!("LE = {:?}, sum = {:.6}, d = {:.4}", s.les, s.sum(), kaplan_yorke(&s.les)?.d);
    println!("value at the origin: {:?}", gd_exact(4.0, 700.0, 1.0, 0.0052)?.outcome);
    Ok(())
}

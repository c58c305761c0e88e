//! Self-excited or hidden: perturb every equilibrium and see whether the
//! orbit lands on the sampled attractor.

use lyadim::atlas::{classify_excitation, settle, ExcitationOptions, SettleOptions};
use lyadim::flow::IntegratorConfig;
use lyadim::systems::SystemSpec;

fn main() -> lyadim::Result<()> {
    let cfg = IntegratorConfig::default();
    for r in [28.0, 24.5] {
        let spec = SystemSpec::lorenz(10.0, r, 8.0 / 3.0)?;
        let sample = settle(&spec, &[1.0, 1.0, 1.0], 500.0, 500.0, 0.01, &cfg, &SettleOptions::default())?;
        let c = classify_excitation(&spec, &sample, &ExcitationOptions::default(), &cfg)?;
        println!("lorenz r = {r}: {:?}", c.classification);
        for eq in spec.equilibria() {
            let hits = c.trials.iter().filter(|t| t.equilibrium == eq.label && t.excites).count();
            let total = c.trials.iter().filter(|t| t.equilibrium == eq.label).count();
            println!("  {} ({:?}): {hits}/{total} trials reach the attractor", eq.label, eq.stability);
        }
    }
    Ok(())
}

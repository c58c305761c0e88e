//! Hénon map: closed-form dimension at the saddle fixed point against the
//! finite-time dimension of the attractor.

use lyadim::exact::henon_exact;
use lyadim::flow::{advance, IntegratorConfig};
use lyadim::lyap::{finite_time_les, kaplan_yorke, local_dimension_at_equilibrium};
use lyadim::systems::SystemSpec;

fn main() -> lyadim::Result<()> {
    let (a, b) = (1.4, 0.3);
    let henon = SystemSpec::henon(a, b)?;
    let cfg = IntegratorConfig::default();

    let exact = henon_exact(a, b)?;
    println!("closed form: {:?}", exact.outcome);
    for fp in henon.equilibria() {
        let d = local_dimension_at_equilibrium(&henon, &fp.coordinates)?;
        println!("fixed point {} at {:?}: d = {:.6}", fp.label, fp.coordinates, d.d);
    }

    let start = advance(&henon, &[0.0, 0.0], 1000.0, &cfg)?;
    let s = finite_time_les(&henon, &start, 1.0, 100_000, 3, &cfg)?;
    println!(
        "1e5 iterations: LE per iteration = {:?}, sum - ln b = {:.1e}, d = {:.4}",
        s.les,
        s.sum() - b.ln(),
        kaplan_yorke(&s.les)?.d
    );
    Ok(())
}

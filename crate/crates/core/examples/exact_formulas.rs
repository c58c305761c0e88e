//! Closed-form dimension reports with their condition margins.

use lyadim::exact::{gd_exact, lorenz_exact, shimizu_morioka_exact, tigan_exact, yang_exact, ExactDimReport};

fn show(name: &str, r: &ExactDimReport) {
    println!("{name}: {:?} (candidate {:.6})", r.outcome, r.candidate);
    for c in &r.conditions {
        let mark = if c.satisfied() { "+" } else { "-" };
        println!("    {mark} {:<28} {:+.6e}", c.id, c.lhs_minus_rhs);
    }
    if let Some((lo, hi)) = r.gamma_roots {
        println!("    gamma roots {lo:.6}, {hi:.6}");
    }
}

fn main() -> lyadim::Result<()> {
    show("lorenz r=28", &lorenz_exact(10.0, 28.0, 8.0 / 3.0)?);
    show("lorenz r=24.5", &lorenz_exact(10.0, 24.5, 8.0 / 3.0)?);
    show("lorenz r=0.5", &lorenz_exact(10.0, 0.5, 8.0 / 3.0)?);
    show("generalized lorenz", &gd_exact(4.0, 700.0, 1.0, 0.0052)?);
    show("yang r=16", &yang_exact(10.0, 16.0, 8.0 / 3.0)?);
    show("yang r=-1", &yang_exact(10.0, -1.0, 8.0 / 3.0)?);
    show("tigan", &tigan_exact(10.0, 26.0, 8.0 / 3.0)?);
    show("shimizu-morioka", &shimizu_morioka_exact(0.4, 0.9)?);
    Ok(())
}

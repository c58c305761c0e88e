//! Product SVD of a short matrix chain compared with the SVD of the explicit
//! product, and its convergence in the number of sweeps.

use lyadim::flow::FactorSequence;
use lyadim::lyap::{benettin_les, product_svd};
use lyadim::smallmat::{singular_values, SquareMatrix};

fn main() -> lyadim::Result<()> {
    let factors = vec![
        SquareMatrix::from_rows([[2.0, 1.0, 0.0], [0.0, 1.0, 0.5], [0.3, 0.0, 0.5]]),
        SquareMatrix::from_rows([[1.0, 0.0, 2.0], [0.5, 1.5, 0.0], [0.0, 0.2, 0.8]]),
        SquareMatrix::from_rows([[0.7, -0.4, 0.0], [0.4, 0.7, 0.0], [0.0, 0.0, 3.0]]),
    ];
    let seq = FactorSequence::from_factors(factors, 1.0)?;
    let explicit: Vec<f64> = singular_values(&seq.explicit_product())
        .values()
        .iter()
        .map(|v| v.ln() / seq.horizon())
        .collect();
    println!("explicit product: {explicit:?}");
    println!("single QR pass:   {:?}", benettin_les(&seq)?);
    for sweeps in [1, 2, 3, 10, 100, 1000] {
        let r = product_svd(&seq, sweeps)?;
        let err = r
            .les
            .iter()
            .zip(&explicit)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!("{sweeps:>5} sweeps:    {:?}  max error {err:.1e}", r.les);
    }
    Ok(())
}

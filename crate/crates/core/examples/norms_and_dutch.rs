//! Lorentz, Marcinkiewicz and TM norms of one distortion, the Dutch risk
//! measure and the constant relating the extreme norms.
//!
//! `cargo run --example norms_and_dutch`

use coherent_risk::risk::{
    dutch, dutch_via_rim_family, equivalence_constant, marcinkiewicz_norm, maxvar, tm_norm,
    DEFAULT_REFINEMENT,
};
use coherent_risk::{Distortion, LossSample};

fn main() -> coherent_risk::Result<()> {
    let phi = Distortion::power_complement(2.0)?;
    let k = equivalence_constant(&phi);
    for values in [vec![1.0, 2.0, 3.0], vec![0.0, 0.0, 0.0, 10.0], vec![4.0, 4.5, 5.0, 9.0, 1.0]] {
        let x = LossSample::uniform(values.clone())?;
        let m = marcinkiewicz_norm(&x, &phi, DEFAULT_REFINEMENT);
        let t = tm_norm(&x, &phi, DEFAULT_REFINEMENT);
        let l = maxvar(&x, 2.0)?;
        println!("{values:?}");
        println!("  Marcinkiewicz {m:.6} <= TM {t:.6} <= Lorentz {l:.6} <= K*M {:.6}", k * m);
        println!("  Dutch {:.6}, sup over RIM(b, b) {:.6}", dutch(&x), dutch_via_rim_family(&x, 256));
    }
    println!("K = 1/phi(1/phi'(0)) = {k:.6}");

    // The Marcinkiewicz norm is not translation equivariant.
    let x = LossSample::uniform(vec![1.0, 2.0, 3.0])?;
    let shifted = x.shifted(1.0)?;
    println!(
        "M(X + 1) = {:.6}, M(X) + 1 = {:.6}",
        marcinkiewicz_norm(&shifted, &phi, DEFAULT_REFINEMENT),
        marcinkiewicz_norm(&x, &phi, DEFAULT_REFINEMENT) + 1.0
    );
    Ok(())
}

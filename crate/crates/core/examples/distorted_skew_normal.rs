//! A distortion risk of a skew-normal loss exceeds its mean; the distorted
//! survival function puts more weight on the upper tail.
//!
//! `cargo run --example distorted_skew_normal`

use coherent_risk::optimizer::skew_normal;
use coherent_risk::risk::spectral_risk;
use coherent_risk::{Distortion, LossSample};

fn main() -> coherent_risk::Result<()> {
    let x = LossSample::uniform(skew_normal(20_000, 0.0, 1.0, 4.0, 2)?)?;
    let phi = Distortion::power_complement(2.0)?;
    println!("E[X] = {:.4}, R_phi(X) = {:.4}", x.mean(), spectral_risk(&x, &phi, true));
    println!("lambda   S(lambda)  phi(S)   1 - phi(1 - S)");
    for lambda in [-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0] {
        let s = x.survival(lambda);
        println!("{lambda:>6}   {s:.4}     {:.4}   {:.4}", phi.value(s), 1.0 - phi.value(1.0 - s));
    }
    Ok(())
}

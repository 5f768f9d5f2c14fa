//! Three routes to CVaR and the spectral/Choquet identity.
//!
//! `cargo run --example cvar_and_spectral`

use coherent_risk::risk::{
    choquet_integral, cvar, cvar_regret, cvar_top_k, rim, spectral_risk, worst_case,
};
use coherent_risk::{Distortion, LossSample};

fn main() -> coherent_risk::Result<()> {
    let losses = LossSample::uniform(vec![0.4, 2.0, -1.0, 3.5, 1.2, 0.0, 5.0, 2.0])?;
    println!("mean = {:.4}, worst case = {:.4}", losses.mean(), worst_case(&losses));

    for alpha in [0.0, 0.5, 0.75, 0.9] {
        let top_k = cvar_top_k(&losses, alpha)
            .map(|v| format!("{v:.4}"))
            .unwrap_or_else(|| "n/a".into());
        println!(
            "alpha = {alpha:<4}  quantile integral {:.4}  regret {:.4}  top-k {top_k}",
            cvar(&losses, alpha)?,
            cvar_regret(&losses, alpha)?,
        );
    }

    let phis = [
        ("RIM(0.7, 0.4)", Distortion::rim(0.7, 0.4)?),
        ("1 - (1 - t)^2", Distortion::power_complement(2.0)?),
        ("t^0.5", Distortion::proportional_power(0.5)?),
    ];
    for (name, phi) in &phis {
        println!(
            "{name:<14} spectral {:.6}  choquet {:.6}",
            spectral_risk(&losses, phi, true),
            choquet_integral(&losses, phi)
        );
    }
    println!("RIM(0.7, 0.4) closed form {:.6}", rim(&losses, 0.7, 0.4)?);
    Ok(())
}

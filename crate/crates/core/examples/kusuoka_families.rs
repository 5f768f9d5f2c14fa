//! Suprema over families of distortions: the TM and Marcinkiewicz families
//! of a distortion, and a search for comonotone pairs that break additivity.
//!
//! `cargo run --example kusuoka_families`

use coherent_risk::kusuoka::{
    comonotone_additivity_witness, family_grid, kusuoka_risk, marcinkiewicz_family, tm_family,
    DEFAULT_FAMILY_GRID,
};
use coherent_risk::risk::{dutch, marcinkiewicz_norm, DEFAULT_REFINEMENT};
use coherent_risk::{Distortion, KusuokaSet, LossSample};

fn main() -> coherent_risk::Result<()> {
    let phi = Distortion::power_complement(2.0)?;
    let x = LossSample::uniform(vec![0.5, 1.0, 4.0, 2.5, 3.0])?;
    let grid = family_grid(DEFAULT_FAMILY_GRID, x.rearrange(false).breakpoints());

    let tm = tm_family(&phi, &grid)?;
    println!("TM family ({} members): {:.6}, Dutch {:.6}", tm.len(), kusuoka_risk(&x, &tm), dutch(&x));

    let mf = marcinkiewicz_family(&phi, &grid)?;
    println!(
        "Marcinkiewicz family: {:.6}, norm {:.6}",
        kusuoka_risk(&x, &mf),
        marcinkiewicz_norm(&x, &phi, DEFAULT_REFINEMENT)
    );

    let crossing = KusuokaSet::from_distortions([Distortion::rim(0.9, 0.5)?, Distortion::cvar(0.5)?])?;
    match comonotone_additivity_witness(&crossing, 4, 7) {
        Some((a, b)) => {
            let sum = a.zip_with(&b, |u, v| u + v)?;
            println!(
                "witness {:?} + {:?}: R(X+Y) = {:.4} < R(X) + R(Y) = {:.4}",
                a.values(),
                b.values(),
                kusuoka_risk(&sum, &crossing),
                kusuoka_risk(&a, &crossing) + kusuoka_risk(&b, &crossing)
            );
        }
        None => println!("no witness found"),
    }

    let nested = KusuokaSet::from_distortions([Distortion::cvar(0.0)?, Distortion::cvar(0.5)?])?;
    println!(
        "{{cvar(0), cvar(0.5)}} witness: {:?}",
        comonotone_additivity_witness(&nested, 8, 8).map(|(a, b)| (a.values().to_vec(), b.values().to_vec()))
    );
    Ok(())
}

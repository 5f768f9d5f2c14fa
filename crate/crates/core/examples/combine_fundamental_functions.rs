//! Interpolating between two distortions with the perspective of a
//! quasiconcave function, then concavifying the result.
//!
//! `cargo run --example combine_fundamental_functions`

use coherent_risk::combination::{
    combine, combine_to_distortion, csiszar_conjugate, figure_exponents, figure_pair, Combiner,
};
use coherent_risk::risk::spectral_risk;
use coherent_risk::LossSample;

fn main() -> coherent_risk::Result<()> {
    let (red, blue) = figure_pair();
    let crossing = 3f64.powf(-4.0 / 3.0);
    println!("t      t^(1/4)  min(3t,1)  a=1.19   a=2.50   a=4.45");
    let exps = figure_exponents();
    let picks = [exps[0], exps[exps.len() / 2], exps[exps.len() - 1]];
    for t in [0.01, 0.05, crossing, 0.3, 0.6, 1.0] {
        let row: Vec<String> = picks
            .iter()
            .map(|&a| Combiner::plain_power(a).map(|c| format!("{:.5}", combine(&red, &blue, &c).eval(t))))
            .collect::<Result<_, _>>()?;
        println!("{t:.4} {:.5}  {:.5}    {}", red.value(t), blue.value(t), row.join("  "));
    }

    let sym = Combiner::power(2.0)?;
    let conj = csiszar_conjugate(&sym);
    println!("symmetric power combiner: psi(0.25) = {:.4}, conjugate {:.4}", sym.psi().eval(0.25), conj.eval(0.25));

    let hull = combine_to_distortion(&combine(&red, &blue, &Combiner::max()))?;
    let x = LossSample::uniform(vec![1.0, 2.0, 3.0, 10.0])?;
    println!(
        "risk under the concavified max: {:.4} (inputs {:.4}, {:.4})",
        spectral_risk(&x, &hull, true),
        spectral_risk(&x, &red, true),
        spectral_risk(&x, &blue, true)
    );
    Ok(())
}

//! Linear regression with absolute error where the risk is applied to the
//! per-group mean losses.
//!
//! `cargo run --example subgroup_regression`

use coherent_risk::optimizer::{
    grouped_regression, minimize, subgroup_risk, DescentConfig, Objective, SubgroupRegression,
};
use coherent_risk::risk::RiskSpec;

fn main() -> coherent_risk::Result<()> {
    let (x, y, groups) = grouped_regression(500, 3, 0.2, 4)?;
    let (tx, ty, tgroups) = grouped_regression(2000, 3, 0.2, 5)?;
    let train = SubgroupRegression::new(x, y, groups)?;
    let test = SubgroupRegression::new(tx, ty, tgroups.clone())?;
    let config = DescentConfig { steps: 3000, lr: 0.01, seed: 4 };

    println!("risk           group 0   group 1   |gap|    test cvar(0.5)");
    for (name, risk) in [
        ("mean", RiskSpec::Mean),
        ("rim(0.5, 0.5)", RiskSpec::Rim { alpha: 0.5, beta: 0.5 }),
        ("cvar(0.5)", RiskSpec::Cvar { alpha: 0.5 }),
    ] {
        let fit = minimize(&train, vec![0.0; train.dim()], vec![train.dim()], &risk, config)?;
        let per_group = test.losses(&fit.state.params);
        let datum = test.datum_losses(&fit.state.params);
        println!(
            "{name:<14} {:>8.4}  {:>8.4}  {:>6.4}   {:.4}",
            per_group[0],
            per_group[1],
            (per_group[0] - per_group[1]).abs(),
            subgroup_risk(&datum, &tgroups, &RiskSpec::Cvar { alpha: 0.5 })?
        );
    }
    Ok(())
}

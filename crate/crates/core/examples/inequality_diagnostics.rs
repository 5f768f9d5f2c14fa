//! CVaR curves, Lorenz curves, Gini coefficients and second-order dominance
//! for light- and heavy-tailed samples.
//!
//! `cargo run --example inequality_diagnostics`

use coherent_risk::evaluation::{cvar_curve, gini, lorenz_curve, second_order_dominates};
use coherent_risk::optimizer::abs_normal_and_student;
use coherent_risk::LossSample;

fn main() -> coherent_risk::Result<()> {
    let (normal, student) = abs_normal_and_student(500, 11);
    let n = LossSample::uniform(normal)?;
    let t = LossSample::uniform(student)?;

    let alphas = [0.0, 0.5, 0.8, 0.9, 0.95, 0.98];
    let cn = cvar_curve(&n, &alphas)?;
    let ct = cvar_curve(&t, &alphas)?;
    println!("alpha   |N(0,1)|   |t_2|");
    for ((a, x), y) in cn.points().zip(ct.values()) {
        println!("{a:<6}  {x:>8.4}  {y:>8.4}");
    }

    let qs = [0.25, 0.5, 0.75, 0.9];
    let ln = lorenz_curve(&n, &qs)?;
    let lt = lorenz_curve(&t, &qs)?;
    println!("q       L_normal  L_t");
    for ((q, x), y) in ln.points().zip(lt.values()) {
        println!("{q:<6}  {x:>8.4}  {y:>8.4}");
    }
    println!("Gini: normal {:.4}, t {:.4}", gini(&n)?, gini(&t)?);

    let a = LossSample::uniform(vec![1.0, 3.0])?;
    let b = LossSample::uniform(vec![0.0, 4.0])?;
    println!("[1,3] dominated by [0,4]: {}", second_order_dominates(&a, &b, &[]));
    println!("[0,4] dominated by [1,3]: {}", second_order_dominates(&b, &a, &[]));
    Ok(())
}

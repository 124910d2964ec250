//! The concave profile behind the sharp Li-Yau bound: values, feasible
//! interval, tangent lines and the time reparametrisation.

use finsler_lab::liyau::{tau_lambda, PsiEvaluator, PsiRoots};

fn main() -> finsler_lab::Result<()> {
    let (n, t) = (3.0, 0.8);
    for k in [-1.0, 1.0] {
        let psi = PsiEvaluator::new(n, k, t)?;
        println!("K = {k:+}: upper limit {:.4}, Psi(1) = {:.6}", psi.upper_limit(), psi.value(1.0)?);
        match psi.roots()? {
            PsiRoots::One { chi0 } => println!("  single root {chi0:.6}"),
            PsiRoots::Two { chi1, chi2 } => println!("  roots {chi1:.6} and {chi2:.6}"),
        }
        if k > 0.0 {
            let (arg, max) = psi.feasible_max()?;
            println!("  maximum {max:.6} at {arg:.6}");
        }
        for x_bar in [0.5, 1.0, 1.5] {
            let c = psi.linearize(x_bar)?;
            println!("  tangent at {x_bar}: alpha {:.6} phi {:.6}", c.alpha, c.phi);
        }
        // (N/2) Psi(4 xi / (N K)) against its flat limit xi + N / (2t)
        let xi = 0.7;
        println!("  scaled at xi = {xi}: {:.6} (flat {:.6})", psi.scaled(xi)?, xi + n / (2.0 * t));
    }
    let (s, t) = (0.05, 0.1);
    for lambda in [-50.0, 0.0, 500.0] {
        println!("tau_{lambda}({s}) on [0, {t}] = {:.6}", tau_lambda(lambda, s, t)?);
    }
    Ok(())
}

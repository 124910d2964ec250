//! Norm, dual norm and Legendre map of a Randers norm, with its sampled
//! reversibility and convexity constants.

use finsler_lab::linalg::{dot, Sym2};
use finsler_lab::metric::{descriptor_constants, dual_norm_sampled, NormDescriptor, DEFAULT_SAMPLES};

fn main() -> finsler_lab::Result<()> {
    let a = Sym2::new(1.5, 0.2, 0.8);
    let f = NormDescriptor::randers(2, a, [0.3, -0.1])?;

    for y in [[1.0, 0.0], [-1.0, 0.0], [0.3, 0.7]] {
        println!("F({:?}) = {:.6}   F(-y) = {:.6}", y, f.norm(y), f.norm([-y[0], -y[1]]));
    }

    let xi = [0.4, -1.1];
    let y = f.legendre(xi)?;
    println!("\nxi = {xi:?}");
    println!("F*(xi) closed form   {:.12}", f.dual_norm(xi));
    println!("F*(xi) sampled       {:.12}", dual_norm_sampled(&f, xi, DEFAULT_SAMPLES));
    println!("Legendre image y     [{:.6}, {:.6}]", y[0], y[1]);
    println!("xi(y) - F(y)^2       {:+.2e}", dot(xi, y) - f.norm(y).powi(2));
    let back = f.legendre_inverse(y)?;
    println!("round trip error     {:.2e}", (back[0] - xi[0]).abs().max((back[1] - xi[1]).abs()));

    let c = descriptor_constants(&f, DEFAULT_SAMPLES);
    println!("\nreversibility {:.6}  kappa {:.6}  kappa* {:.6}", c.lambda, c.kappa, c.kappa_star);
    Ok(())
}

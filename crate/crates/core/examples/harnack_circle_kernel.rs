//! Harnack constants tested on the exact heat kernel of the unit circle.

use finsler_lab::harnack::{
    harnack_bound_flat, verify_circle_kernel, CircleHeatKernel, HarnackMode, HarnackSample, ThetaDescriptor,
};
use finsler_lab::liyau::LiYauProfile;

fn main() -> finsler_lab::Result<()> {
    let kernel = CircleHeatKernel::new(1.0, 0.0);
    let pairs = [(0.0, 0.01, 0.1, 0.02), (0.3, 0.02, 0.0, 0.05), (0.45, 0.01, 0.45, 0.03), (0.2, 0.05, 0.5, 0.1)];
    for mode in [HarnackMode::Lf, HarnackMode::Integral { profile: LiYauProfile::Quadratic }] {
        println!("{mode:?}");
        println!("  {}", HarnackSample::CSV_HEADER);
        for s in verify_circle_kernel(&kernel, &pairs, &mode, 1.0)? {
            println!("  {}", s.csv_row());
        }
    }

    println!("\nflat constant (t2/t1)^(N/2) exp(d^2 / 4(t2 - t1)) at d = 0.2: {:.6}", harnack_bound_flat(1.0, 0.2, 0.01, 0.02));
    let th = ThetaDescriptor::new(2.0, -0.5, 0.3)?;
    println!("Theta on [{:.4}, {}]; conjugate at -1: {:.6}", th.lo, th.hi, th.conjugate(-1.0)?);
    Ok(())
}

use finsler_lab::linalg::{dot, Sym2};
use finsler_lab::metric::{descriptor_constants, dual_norm_sampled, NormDescriptor};
use finsler_lab::Error;
use proptest::prelude::*;

fn randers() -> impl Strategy<Value = NormDescriptor> {
    (0.5f64..2.0, -0.3f64..0.3, 0.5f64..2.0, 0.0f64..0.8, 0.0f64..std::f64::consts::TAU).prop_filter_map(
        "admissible",
        |(xx, xy, yy, r, phi)| {
            let a = Sym2::new(xx, xy, yy);
            let b = [phi.cos(), phi.sin()];
            // scale b to a-dual length r
            let len = a.inverse()?.quad(b).sqrt();
            NormDescriptor::randers(2, a, [r * b[0] / len, r * b[1] / len]).ok()
        },
    )
}

fn nonzero() -> impl Strategy<Value = [f64; 2]> {
    (0.1f64..3.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| [r * t.cos(), r * t.sin()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_is_positively_homogeneous(d in randers(), y in nonzero(), s in 0.1f64..10.0) {
        let lhs = d.norm([s * y[0], s * y[1]]);
        prop_assert!((lhs - s * d.norm(y)).abs() <= 1e-12 * lhs.max(1.0));
    }

    #[test]
    fn legendre_round_trip(d in randers(), xi in nonzero()) {
        let v = d.legendre(xi).unwrap();
        let back = d.legendre_inverse(v).unwrap();
        prop_assert!((back[0] - xi[0]).abs() + (back[1] - xi[1]).abs() <= 1e-10 * (1.0 + xi[0].abs() + xi[1].abs()));
        // F(v) = F*(xi) and xi(v) = F*(xi)^2
        let fs = d.dual_norm(xi);
        prop_assert!((d.norm(v) - fs).abs() <= 1e-10 * fs);
        prop_assert!((dot(xi, v) - fs * fs).abs() <= 1e-10 * fs * fs);
    }

    #[test]
    fn dual_norm_matches_sampled_supremum(d in randers(), xi in nonzero()) {
        let exact = d.dual_norm(xi);
        let sampled = dual_norm_sampled(&d, xi, 20000);
        prop_assert!(sampled <= exact * (1.0 + 1e-12));
        prop_assert!(sampled >= exact * (1.0 - 1e-6));
    }

    #[test]
    fn fundamental_tensor_is_positive_definite_and_reproduces_norm(d in randers(), v in nonzero()) {
        let g = d.fundamental_tensor(v).unwrap();
        prop_assert!(g.is_positive_definite());
        let f = d.norm(v);
        prop_assert!((g.quad(v) - f * f).abs() <= 1e-10 * f * f);
    }

    #[test]
    fn constants_are_consistent(d in randers()) {
        let c = descriptor_constants(&d, 2048);
        prop_assert!(c.consistent(1e-6), "{c:?}");
    }

    #[test]
    fn reverse_norm_swaps_directions(d in randers(), y in nonzero()) {
        let r = d.reverse();
        prop_assert!((r.norm(y) - d.norm([-y[0], -y[1]])).abs() <= 1e-12 * d.norm(y).max(1.0));
    }
}

#[test]
fn riemannian_constants_are_trivial() {
    let d = NormDescriptor::riemannian(2, Sym2::new(2.0, 0.3, 1.0)).unwrap();
    let c = descriptor_constants(&d, 1024);
    assert!((c.lambda - 1.0).abs() < 1e-12);
    assert!((c.kappa - 1.0).abs() < 1e-12 && (c.kappa_star - 1.0).abs() < 1e-12);
}

#[test]
fn inadmissible_descriptors_are_rejected() {
    assert!(matches!(NormDescriptor::randers(2, Sym2::IDENTITY, [0.8, 0.7]), Err(Error::InvalidDescriptor(_))));
    assert!(matches!(NormDescriptor::riemannian(2, Sym2::new(1.0, 2.0, 1.0)), Err(Error::InvalidDescriptor(_))));
    assert!(NormDescriptor::asym_1d(1.0, -0.5).is_err());
}

#[test]
fn zero_vector_has_no_fundamental_tensor() {
    let d = NormDescriptor::randers(2, Sym2::IDENTITY, [0.2, 0.0]).unwrap();
    assert!(matches!(d.fundamental_tensor([0.0, 0.0]), Err(Error::DegenerateVector { .. })));
}

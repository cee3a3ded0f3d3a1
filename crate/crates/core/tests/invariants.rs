//! Property-based invariants: group laws, left invariance, cone
//! homogeneity and nesting, flow conservation, inversion round-trips and
//! distance symmetries.

use lorheis::family_one::{self, Chart1, RegionStatus};
use lorheis::group::{cone_contains, left_translate, lorentz_form};
use lorheis::limit_zero;
use lorheis::oracle;
use lorheis::{Control, Epsilon, FamilyTag, GroupElement, TangentVector};
use proptest::prelude::*;

fn eps(v: f64) -> Epsilon {
    Epsilon::new(v).unwrap()
}

fn coord() -> impl Strategy<Value = f64> {
    -50.0..50.0
}

fn element() -> impl Strategy<Value = GroupElement> {
    (coord(), coord(), coord()).prop_map(|(x, y, z)| GroupElement::new(x, y, z))
}

proptest! {
    #[test]
    fn product_is_associative(a in element(), b in element(), c in element()) {
        let lhs = (a * b) * c;
        let rhs = a * (b * c);
        let scale = 1.0_f64.max(lhs.norm_inf());
        prop_assert!((lhs.inverse() * rhs).norm_inf() <= 1e-12 * scale);
    }

    #[test]
    fn inverse_cancels(a in element()) {
        prop_assert!((a * a.inverse()).norm_inf() == 0.0);
        prop_assert!((a.inverse() * a).norm_inf() == 0.0);
    }

    #[test]
    fn lorentz_form_is_left_invariant(
        a in element(),
        base in element(),
        dx in -5.0..5.0f64,
        dy in -5.0..5.0f64,
        dz in -5.0..5.0f64,
        e in 0.3..3.0f64,
    ) {
        let v = TangentVector { dx, dy, dz, base };
        let pushed = left_translate(a, v);
        for family in [FamilyTag::FamilyOne, FamilyTag::FamilyTwo] {
            let g0 = lorentz_form(v, eps(e), family);
            let g1 = lorentz_form(pushed, eps(e), family);
            let scale = 1.0_f64.max(g0.abs());
            prop_assert!((g0 - g1).abs() <= 1e-9 * scale, "{g0} vs {g1}");
        }
    }

    #[test]
    fn cone_is_homogeneous(
        u1 in -3.0..3.0f64,
        u2 in -3.0..3.0f64,
        u3 in -3.0..3.0f64,
        lambda in 0.01..100.0f64,
    ) {
        let u = Control::new(u1, u2, u3);
        for family in [FamilyTag::FamilyOne, FamilyTag::FamilyTwo] {
            let scaled = Control::new(lambda * u1, lambda * u2, lambda * u3);
            // scaling can flip strict boundary cases by rounding; skip the
            // razor edge
            let margin = match family {
                FamilyTag::FamilyOne => u.u1 - (u.u2 * u.u2 + u.u3 * u.u3).sqrt(),
                FamilyTag::FamilyTwo => u.u3 - (u.u1 * u.u1 + u.u2 * u.u2).sqrt(),
            };
            if margin.abs() > 1e-9 {
                prop_assert_eq!(cone_contains(u, family), cone_contains(scaled, family));
            }
        }
    }

    #[test]
    fn cones_nest_in_eps(
        dx in 0.0..3.0f64,
        dy in -3.0..3.0f64,
        dz in -3.0..3.0f64,
        e1 in 0.1..1.0f64,
        factor in 1.01..10.0f64,
    ) {
        let v = TangentVector { dx, dy, dz, base: GroupElement::IDENTITY };
        let e2 = e1 * factor;
        if limit_zero::cone_indicator(v, e1) {
            prop_assert!(limit_zero::cone_indicator(v, e2));
        }
        if limit_zero::cone_indicator(v, 0.0) {
            prop_assert!(limit_zero::cone_indicator(v, e1));
        }
    }

    #[test]
    fn vertical_flow_matches_integrator(
        theta in -2.0..2.0f64,
        phi in 0.0..std::f64::consts::TAU,
        t in 0.0..3.0f64,
        e in 0.5..2.0f64,
    ) {
        let e = eps(e);
        let h0 = family_one::chart1(e, theta, phi);
        // the integrator needs a positive horizon, so evaluate the closed
        // form at the same clamped time
        let t = t.max(1e-6);
        let closed = family_one::vertical_flow1(e, h0, t);
        let traj = oracle::integrate_extremal(FamilyTag::FamilyOne, e, h0, t, 2000);
        let h_end = *traj.covectors.as_ref().unwrap().last().unwrap();
        let scale = 1.0_f64.max(closed.h1.abs()).max(closed.h2.abs());
        prop_assert!((closed.h1 - h_end.h1).abs() <= 1e-7 * scale);
        prop_assert!((closed.h2 - h_end.h2).abs() <= 1e-7 * scale);
        prop_assert!(closed.h3 == h0.h3);
        // the flow stays on the energy level; the O(1) level value comes
        // from cancelling O(scale²) squares, so roundoff grows like scale²
        prop_assert!((family_one::hamiltonian1(e, closed) + 0.5).abs() <= 1e-13 * scale * scale);
    }

    #[test]
    fn boundary_heights_nest(
        x in 0.1..5.0f64,
        yfrac in -0.95..0.95f64,
        e1 in 0.1..1.0f64,
        factor in 1.1..5.0f64,
    ) {
        let y = yfrac * x;
        let (lo, _) = family_one::boundary_height(eps(e1), x, y).unwrap();
        let (hi, _) = family_one::boundary_height(eps(e1 * factor), x, y).unwrap();
        prop_assert!(lo < hi, "phi_eps not strictly increasing: {lo} vs {hi}");
    }

    #[test]
    fn exp1_image_lies_in_attainable_set(
        theta in -2.0..2.0f64,
        phi in 0.0..std::f64::consts::TAU,
        t in 0.01..3.0f64,
        e in 0.5..2.0f64,
    ) {
        let e = eps(e);
        let q = family_one::exp1(e, Chart1::new(theta, phi, t));
        let v = family_one::attain_region1(e, q, 1e-9);
        prop_assert!(v.status != RegionStatus::Exterior, "{q:?} -> {v:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn inversion_round_trips(
        theta in 0.1..2.5f64,
        phi in 0.15..3.0f64,
        tau in 0.05..6.0f64,
        e in 0.5..2.0f64,
    ) {
        prop_assume!(phi < std::f64::consts::PI - 0.15);
        let e = eps(e);
        let h3 = theta.sinh() * phi.sin() / e.get();
        let t = tau / h3;
        let p = Chart1::new(theta, phi, t);
        let q = family_one::exp1(e, p);
        let back = family_one::invert_exp1(e, q, 1e-10).unwrap();
        let again = family_one::exp1(e, back);
        let scale = 1.0_f64.max(q.norm_inf());
        prop_assert!((again.inverse() * q).norm_inf() <= 1e-8 * scale);
        prop_assert!((back.t - p.t).abs() <= 1e-6 * (1.0 + p.t), "{back:?} vs {p:?}");
    }

    #[test]
    fn distance_respects_reflections(
        theta in 0.2..2.0f64,
        phi in 0.3..2.8f64,
        tau in 0.1..4.0f64,
    ) {
        let e = eps(1.0);
        let h3 = theta.sinh() * phi.sin();
        let t = tau / h3;
        let q = family_one::exp1(e, Chart1::new(theta, phi, t));
        let d0 = family_one::distance1(e, q, 1e-9).unwrap();
        let dz = family_one::distance1(e, GroupElement::new(q.x, q.y, -q.z), 1e-9).unwrap();
        let dy = family_one::distance1(e, GroupElement::new(q.x, -q.y, q.z), 1e-9).unwrap();
        let d0 = d0.expect("interior");
        prop_assert!((d0 - dz.expect("interior")).abs() <= 1e-6 * (1.0 + d0));
        prop_assert!((d0 - dy.expect("interior")).abs() <= 1e-6 * (1.0 + d0));
    }
}

use proptest::prelude::*;

use monopole_spectra::heunspec::{
    heun_params_coulomb, heun_params_oscillator, heun_residual_on_disc, solve_beta_coulomb, solve_beta_oscillator,
    BranchOverride,
};
use monopole_spectra::mixing::mixing_problem;
use monopole_spectra::specfun::HeunParams;
use monopole_spectra::spectra::{flat_coulomb, lob_coulomb_energy, lob_minj_oscillator, poschl_teller_form};
use monopole_spectra::units::UnitSystem;
use monopole_spectra::{Channel, HalfInt, MonopoleCharge};

fn heun_channel() -> impl Strategy<Value = Channel> {
    prop_oneof![Just(Channel::HeunChannel1), Just(Channel::HeunChannel2)]
}

fn branch() -> impl Strategy<Value = BranchOverride> {
    (any::<bool>(), any::<bool>(), any::<bool>()).prop_map(|(a, b, c)| BranchOverride {
        flip_a: a,
        flip_b: b,
        flip_c: c,
    })
}

proptest! {
    #[test]
    fn half_int_text_round_trip(twice in -400i32..400) {
        let h = HalfInt::from_twice(twice);
        let back: HalfInt = h.to_string().parse().unwrap();
        prop_assert_eq!(back, h);
        let decimal: HalfInt = format!("{}", h.value()).parse().unwrap();
        prop_assert_eq!(decimal, h);
    }

    #[test]
    fn root_invariants(k2 in 1i32..=10, extra in 1i32..=16, sign in prop_oneof![Just(1), Just(-1)]) {
        let k = MonopoleCharge::new(HalfInt::from_twice(sign * k2));
        let j = HalfInt::from_twice(k2 + 2 * extra);
        let mp = mixing_problem(j, k).unwrap();
        let inv = mp.invariants;
        let scale = inv.r.abs().max(1.0);
        prop_assert!((mp.roots.sum() + inv.r).abs() <= 1e-12 * scale);
        prop_assert!((mp.roots.product() + inv.t).abs() <= 1e-10 * inv.t.abs().max(1.0));
        prop_assert!(inv.discriminant < 0.0);
        prop_assert!((inv.p - inv.p_closed).abs() <= 1e-12 * inv.p.abs().max(1.0));
        prop_assert!((inv.q - inv.q_closed).abs() <= 1e-12 * inv.q.abs().max(1.0));
        for i in 0..3 {
            let (a, l) = (mp.roots.a[i], mp.roots.l[i]);
            prop_assert!(a > 0.0);
            prop_assert!((l * (l + 1.0) - 2.0 * a).abs() <= 1e-12 * a.max(1.0));
        }
        let t = mp.transform.unwrap();
        prop_assert!(t.residual <= 1e-10);
    }

    #[test]
    fn flat_coulomb_rises_toward_zero(alpha in 0.05f64..5.0, mass in 0.1f64..10.0, b in 1u8..=3, n in 0u32..20) {
        let (j, k) = (HalfInt::from_int(3), MonopoleCharge::new(HalfInt::from_int(1)));
        let e0 = flat_coulomb(alpha, mass, j, k, n, Channel::BranchA(b)).unwrap().energy;
        let e1 = flat_coulomb(alpha, mass, j, k, n + 1, Channel::BranchA(b)).unwrap().energy;
        prop_assert!(e0 < e1 && e1 < 0.0);
    }

    #[test]
    fn lobachevsky_coulomb_decay_identity(alpha in 0.1f64..50.0, mass in 0.1f64..10.0, big_n in 1.0f64..8.0) {
        let b = (mass * alpha - big_n * big_n) / (2.0 * big_n);
        let other = -alpha - 2.0 * b * b / mass;
        let e = lob_coulomb_energy(alpha, mass, big_n);
        prop_assert!((e - other).abs() <= 1e-12 * e.abs().max(1.0));
    }

    #[test]
    fn poschl_teller_matches_oscillator_form(k_osc in 0.5f64..200.0, mass in 0.2f64..5.0, n in 0u32..6) {
        let lv = lob_minj_oscillator(k_osc, mass, MonopoleCharge::new(HalfInt::from_int(1)), n).unwrap();
        let pt = poschl_teller_form(k_osc, mass, n);
        prop_assert!((lv.energy - pt).abs() <= 1e-12 * pt.abs().max(1.0));
    }

    #[test]
    fn unit_round_trip(hbar in 0.01f64..100.0, c in 0.01f64..100.0, m in 0.01f64..100.0,
                       len in prop::option::of(0.01f64..100.0), e in -1e3f64..1e3, kk in 0.01f64..1e3) {
        let u = UnitSystem { hbar, c, mass: m, length: len };
        u.validate().unwrap();
        let e2 = u.energy_to_natural(u.energy_to_physical(e));
        prop_assert!((e2 - e).abs() <= 1e-12 * e.abs().max(1e-300));
        let k2 = u.physical_k_osc(u.natural_k_osc(kk));
        prop_assert!((k2 - kk).abs() <= 1e-12 * kk);
    }

    #[test]
    fn fuchs_relation_coulomb(j in 1i32..8, ch in heun_channel(), br in branch(),
                              alpha in 0.1f64..20.0, mass in 0.1f64..10.0, depth in 0.0f64..50.0) {
        let e = -alpha - depth;
        let s = heun_params_coulomb(e, alpha, mass, HalfInt::from_int(j), ch, br).unwrap();
        prop_assert!(s.params.fuchs_residual().abs() <= 1e-12 * s.params.gamma.abs().max(1.0));
    }

    #[test]
    fn fuchs_relation_oscillator(j in 1i32..8, ch in heun_channel(), br in branch(),
                                 k_osc in 0.1f64..200.0, mass in 0.1f64..10.0, below in 0.0f64..50.0) {
        let e = 0.5 * k_osc - below;
        let s = heun_params_oscillator(e, k_osc, mass, HalfInt::from_int(j), ch, br).unwrap();
        prop_assert!(s.params.fuchs_residual().abs() <= 1e-12 * s.params.gamma.abs().max(1.0));
    }

    #[test]
    fn beta_condition_is_reobtained(j in 1i32..6, ch in heun_channel(), n in 0u32..6,
                                    alpha in 0.5f64..40.0, mass in 0.5f64..5.0, k_osc in 1.0f64..200.0) {
        let jj = HalfInt::from_int(j);
        let c = solve_beta_coulomb(alpha, mass, jj, n, ch);
        if let Ok(sol) = c {
            if sol.decaying {
                prop_assert!(sol.condition_residual <= 1e-10, "{:?}", sol);
            }
        }
        let sol = solve_beta_oscillator(k_osc, mass, jj, n, ch).unwrap();
        prop_assert!(sol.condition_residual <= 1e-10, "{:?}", sol);
    }

    #[test]
    fn heun_series_solves_its_equation(gamma in 0.3f64..8.0, delta in -3.0f64..3.0, epsilon in -3.0f64..3.0,
                                       lambda in -3.0f64..3.0, beta in -3.0f64..3.0, q in -4.0f64..4.0) {
        let p = HeunParams { gamma, delta, epsilon, lambda, beta, q };
        let r = heun_residual_on_disc(&p, 0.8, 33).unwrap();
        prop_assert!(r <= 1e-9, "{r} for {p:?}");
    }
}

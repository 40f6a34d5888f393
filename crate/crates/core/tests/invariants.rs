use std::f64::consts::PI;

use proptest::prelude::*;

use mcso_core::fockoracle::{build_state_auto, oracle_moment};
use mcso_core::phasespace::{wigner, wigner_evolved, ThermalChannel};
use mcso_core::state::{
    mandel_q, mean_ad, mean_ad2, mean_photon, moment_a2ad2, moment_ad2a2, normalization, photocount,
    photocount_distribution, squeezing,
};
use mcso_core::{Parity, SuperpositionParams, C64};

prop_compose! {
    fn any_params()(
        m in 0usize..=6,
        theta in 0.05..(PI / 2.0 - 0.05),
        phi in 0.0..(2.0 * PI),
        re in -2.5f64..2.5,
        im in -2.5f64..2.5,
        even in any::<bool>(),
    ) -> SuperpositionParams {
        let alpha0 = if C64::new(re, im).norm() < 0.05 { C64::new(0.05, im) } else { C64::new(re, im) };
        let parity = if even { Parity::Even } else { Parity::Odd };
        SuperpositionParams::with_parity(m, theta, phi, alpha0, parity).unwrap()
    }
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn q_and_s_are_bounded_below(p in any_params()) {
        prop_assert!(mandel_q(&p).unwrap() >= -1.0 - 1e-9);
        prop_assert!(squeezing(&p).unwrap() >= -1.0 - 1e-9);
    }

    #[test]
    fn normal_ordered_square_is_nonnegative(p in any_params()) {
        prop_assert!(moment_ad2a2(&p).unwrap() >= -1e-9 * moment_a2ad2(&p).unwrap());
    }

    #[test]
    fn mirrored_amplitude_leaves_everything_unchanged(p in any_params()) {
        let q = p.negated();
        prop_assert!(close(normalization(&p).unwrap(), normalization(&q).unwrap(), 1e-10));
        prop_assert!(close(mean_photon(&p).unwrap(), mean_photon(&q).unwrap(), 1e-10));
        prop_assert!(close(moment_a2ad2(&p).unwrap(), moment_a2ad2(&q).unwrap(), 1e-10));
        prop_assert!((mean_ad2(&p).unwrap() - mean_ad2(&q).unwrap()).norm() <= 1e-10 * (1.0 + mean_ad2(&p).unwrap().norm()));
        prop_assert!(close(photocount(&p, 0.5, 2).unwrap(), photocount(&q, 0.5, 2).unwrap(), 1e-10));
        let a = C64::new(0.4, -0.9);
        prop_assert!(close(wigner(&p, a).unwrap(), wigner(&q, a).unwrap(), 1e-10));
    }

    #[test]
    fn first_moment_vanishes(p in any_params()) {
        prop_assert_eq!(mean_ad(&p).unwrap(), C64::new(0.0, 0.0));
        let v = build_state_auto(&p, 1e-16).unwrap();
        prop_assert!(oracle_moment(&v, 1, 0).unwrap().norm() <= 1e-12 * (1.0 + mean_photon(&p).unwrap()));
    }

    #[test]
    fn evolution_starts_at_the_static_function(p in any_params(), re in -3.0f64..3.0, im in -3.0f64..3.0, nbar in 0.0f64..4.0) {
        let ch = ThermalChannel::new(0.0, nbar).unwrap();
        let g = C64::new(re, im);
        prop_assert!((wigner_evolved(&p, &ch, g).unwrap() - wigner(&p, g).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn photocount_is_a_distribution(p in any_params(), xi in 0.05f64..0.95) {
        let d = photocount_distribution(&p, xi, 128).unwrap();
        prop_assert!(d.iter().all(|&x| (-1e-10..=1.0 + 1e-10).contains(&x)));
        prop_assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn unit_efficiency_limit() {
    let p = SuperpositionParams::new(4, PI / 4.0, 0.0, C64::new(0.5, 0.5)).unwrap();
    for n in 0..8 {
        let near = photocount(&p, 1.0 - 1e-6, n).unwrap();
        let at = photocount(&p, 1.0, n).unwrap();
        assert!((near - at).abs() < 1e-4, "n={n}: {near} vs {at}");
    }
}

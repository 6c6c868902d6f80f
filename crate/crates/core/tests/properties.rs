use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use snsim::noise::{certify::verify_ellipticity_on, CoefField, NoiseChannel, NoiseModel, NoiseOperator};
use snsim::spectral::{Domain, Space, SpectralField};

fn field(s: &Space, seed: u64, slope: f64, norm: f64) -> SpectralField {
    s.random_field(&mut ChaCha8Rng::seed_from_u64(seed), slope, norm)
}

fn box_space(n: usize, lx: f64, ly: f64) -> Space {
    Space::new(Domain::new(lx, ly, n, vec![]).unwrap()).unwrap()
}

fn variable_model() -> NoiseModel {
    NoiseModel::new(vec![
        NoiseChannel {
            bx: CoefField::constant(0.4).with_mode([1, 0], 0.2, 0.1),
            by: CoefField::default().with_mode([0, 1], 0.0, 0.3),
            c: CoefField::constant(0.2),
        },
        NoiseChannel::multiplicative(0.3),
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trilinear_form_identities(seed in any::<u64>(), n in 2usize..12, lx in 3.0f64..9.0, ly in 3.0f64..9.0) {
        let s = box_space(n, lx, ly);
        let u = field(&s, seed, 1.0, 1.0);
        let w = field(&s, seed ^ 1, 0.5, 2.0);
        let v = field(&s, seed ^ 2, 1.5, 0.7);
        let scale = s.advection_raw(&u, &w).norm_sq().sqrt() * v.h_norm();
        prop_assert!((s.trilinear_b(&u, &w, &v) + s.trilinear_b(&u, &v, &w)).abs() <= 1e-10 * scale);
        let buu = s.nonlinear_self(&u);
        prop_assert!(buu.pair(&u).abs() <= 1e-10 * buu.modes().norm_sq().sqrt() * u.h_norm());
    }

    #[test]
    fn nonlinear_term_is_bilinear(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let s = box_space(6, 6.0, 4.0);
        let (u, w, z) = (field(&s, seed, 1.0, 1.0), field(&s, seed ^ 5, 1.0, 1.0), field(&s, seed ^ 9, 1.0, 1.0));
        let mut comb = w.scaled(a);
        comb.axpy(b, &z);
        let lhs = s.nonlinear_term(&u, &comb);
        let mut rhs = s.nonlinear_term(&u, &w).into_modes();
        rhs.scale(a);
        rhs.axpy(b, s.nonlinear_term(&u, &z).modes());
        let mut d = lhs.into_modes();
        d.axpy(-1.0, &rhs);
        prop_assert!(d.max_abs() <= 1e-12 * (1.0 + rhs.max_abs()));
    }

    /// Hoelder: `|B(u, w)|_{V'} <= |u|_{L4} |w|_{L4}` with constant one.
    #[test]
    fn nonlinear_dual_norm_bounded_by_l4_product(seed in any::<u64>(), n in 2usize..10, slope in 0.0f64..2.0) {
        let s = box_space(n, 2.0 * std::f64::consts::PI, 5.0);
        let u = field(&s, seed, slope, 1.0);
        let w = field(&s, seed ^ 3, slope, 1.0);
        let lhs = s.vprime_norm(s.nonlinear_term(&u, &w).modes());
        prop_assert!(lhs <= s.l4_norm(&u) * s.l4_norm(&w) * (1.0 + 1e-10));
    }

    /// `|u|_{L4} <= 2^(1/4) |u|^(1/2) ||u||^(1/2)` with 5% slack.
    #[test]
    fn l4_interpolation_inequality(seed in any::<u64>(), n in 1usize..12, slope in 0.0f64..3.0) {
        let s = box_space(n, 2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI);
        let u = field(&s, seed, slope, 1.0);
        let rhs = 2f64.powf(0.25) * (u.h_norm() * s.v_seminorm(&u)).sqrt();
        prop_assert!(s.l4_norm(&u) <= 1.05 * rhs);
    }

    #[test]
    fn hs_norm_is_quadratic(seed in any::<u64>(), alpha in -10.0f64..10.0) {
        let s = box_space(5, 6.0, 6.0);
        let op = NoiseOperator::new(&variable_model(), &s).unwrap();
        let u = field(&s, seed, 1.0, 1.0);
        let a = op.hs_norm_sq(&s, &u.scaled(alpha));
        let b = alpha * alpha * op.hs_norm_sq(&s, &u);
        prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
    }

    #[test]
    fn noise_columns_are_divergence_free_and_real(seed in any::<u64>()) {
        let s = box_space(5, 6.0, 4.0);
        let op = NoiseOperator::new(&variable_model(), &s).unwrap();
        let u = field(&s, seed, 1.0, 1.0);
        for g in op.columns(&s, &u).0 {
            prop_assert!(s.divergence_defect(g.modes()) <= 1e-12);
            prop_assert!(g.reality_defect() <= 1e-12 * (1.0 + g.max_abs()));
        }
    }
}

/// `sup |B(u, v)|_{V_s'} / (|u| |v|)` with `s = 2.1`, fitted on random and
/// single-mode samples, does not grow when the cutoff doubles.
#[test]
fn bilinear_constant_into_vs_dual_is_cutoff_stable() {
    let fit = |n: usize| {
        let s = box_space(n, 2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI);
        let mut samples: Vec<SpectralField> = (0..40).map(|i| field(&s, i, (i % 4) as f64 * 0.5, 1.0)).collect();
        for k in 1..=n as i64 {
            samples.push(s.single_mode(k, 0, 1.0, 0.0));
            samples.push(s.single_mode(k, k, 1.0, 0.4));
        }
        let mut c: f64 = 0.0;
        for (i, u) in samples.iter().enumerate() {
            for v in samples.iter().skip(i).step_by(3) {
                let b = s.vs_prime_norm(s.nonlinear_term(u, v).modes(), 2.1);
                c = c.max(b / (u.h_norm() * v.h_norm()));
            }
        }
        c
    };
    let (c4, c8) = (fit(4), fit(8));
    assert!(c4 > 0.0 && c8 <= 1.1 * c4, "{c4} {c8}");
}

#[test]
fn per_mode_poincare_inequality() {
    let s = box_space(10, 7.0, 3.0);
    let c = s.poincare_constant();
    let n = s.cutoff() as i64;
    let mut attained = false;
    for k1 in -n..=n {
        for k2 in -n..=n {
            if (k1, k2) == (0, 0) {
                continue;
            }
            let e = s.single_mode(k1, k2, 1.0, 0.0);
            let lhs = s.v_seminorm_sq(&e);
            assert!(lhs >= c * e.h_norm_sq() * (1.0 - 1e-12));
            attained |= (lhs - c).abs() <= 1e-12 * c;
        }
    }
    assert!(attained);
}

#[test]
fn ellipticity_settles_under_grid_refinement() {
    let d = Domain::periodic_2pi(4);
    let m = variable_model();
    let g0 = m.eval_grid_size();
    let a: Vec<f64> = [g0, 2 * g0, 4 * g0].iter().map(|&g| verify_ellipticity_on(&m, &d, g).a_hat).collect();
    assert!((a[0] - a[2]).abs() < 1e-3 && (a[1] - a[2]).abs() <= (a[0] - a[2]).abs() + 1e-15, "{a:?}");
    let constant = NoiseModel::new(vec![NoiseChannel::advective(0.5, 0.3), NoiseChannel::advective(-0.2, 0.6)]);
    let base = verify_ellipticity_on(&constant, &d, 3).a_hat;
    for g in [5, 17, 64] {
        assert!((verify_ellipticity_on(&constant, &d, g).a_hat - base).abs() < 1e-14);
    }
}

#[test]
fn doubling_channels_with_zero_columns_changes_nothing() {
    let s = box_space(5, 6.0, 6.0);
    let m = variable_model();
    let mut doubled = m.clone();
    doubled.channels.extend(vec![NoiseChannel::default(); m.m()]);
    let change = snsim::noise::certify::truncation_change(&s, &doubled, m.m(), &[field(&s, 1, 1.0, 1.0)]).unwrap();
    assert!(change < 0.01);
}

use num_complex::Complex64;
use trigzeta::tannery::{
    exp_limit, exp_limit_binomial, exp_limit_log, gamma_limit, tannery_exchange, term_bound,
    verify_condition_i, verify_condition_ii, ExpInstance, TanneryInstance, TrigInstance,
};
use trigzeta::{reference_zeta, TrigKind, TrigSumSpec};

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn sampled_bound_dominance_up_to_large_alpha() {
    for spec in [
        TrigSumSpec::cot(0, 1),
        TrigSumSpec::cot(2, 3),
        TrigSumSpec::csc(0, 0),
        TrigSumSpec::csc(1, 4),
    ] {
        for s in [1.1, 2.0, 5.5] {
            let inst = TrigInstance::new(spec, real(s)).unwrap();
            for q in [1u64, 2, 3, 17, 250, 1_000, 4_999, 10_000] {
                if !inst.is_admissible(q) {
                    continue;
                }
                let alpha = inst.alpha(q);
                assert!(alpha <= 20_000);
                let mut ps: Vec<u64> = (1..=alpha.min(64)).collect();
                ps.extend((0..64).map(|k| 1 + (alpha - 1) * k / 63));
                for p in ps {
                    let value = inst.term(p, q).unwrap().norm();
                    let bound = term_bound(spec.kind, p, spec.m, spec.n, s).unwrap();
                    assert!(
                        value <= bound,
                        "{spec:?} s={s} p={p} q={q}: {value} > {bound}"
                    );
                    assert_eq!(bound, inst.bound(p));
                }
            }
        }
    }
}

#[test]
fn condition_ii_fails_only_at_the_harmonic_edge() {
    for kind in [TrigKind::Cot, TrigKind::Csc] {
        let spec = TrigSumSpec::new(kind, 0, 1);
        let harmonic =
            verify_condition_ii(&TrigInstance::new(spec, real(1.0)).unwrap(), 1_000, 1_000)
                .unwrap();
        assert!(!harmonic.pass);
        assert!(!harmonic.bound_series_convergent);
        assert_eq!(harmonic.bound_violations, 0);
        let summable =
            verify_condition_ii(&TrigInstance::new(spec, real(1.2)).unwrap(), 1_000, 1_000)
                .unwrap();
        assert!(summable.pass, "{summable:?}");
        assert!(summable.tail_estimate.unwrap() > 0.0);
    }
}

#[test]
fn zeta_instances_satisfy_condition_i() {
    let inst = TrigInstance::new(TrigSumSpec::csc(0, 0), Complex64::new(2.0, 0.7)).unwrap();
    let report = verify_condition_i(&inst, 5, &[10, 100, 1_000, 10_000, 100_000], 1e-3).unwrap();
    assert!(report.pass, "{report:?}");
    assert!(report.failing.is_empty());
}

#[test]
fn exchange_gap_shrinks_for_every_passing_instance() {
    let schedule = [1_000u64, 10_000, 100_000];
    for (spec, s) in [
        (TrigSumSpec::cot(0, 1), 2.0),
        (TrigSumSpec::csc(0, 0), 3.0),
        (TrigSumSpec::cot(1, 1), 1.5),
    ] {
        let inst = TrigInstance::new(spec, real(s)).unwrap();
        assert!(verify_condition_ii(&inst, 1_000, 1_000).unwrap().pass);
        assert!(verify_condition_i(&inst, 5, &schedule, 1e-3).unwrap().pass);
        let ex = tannery_exchange(&inst, &schedule, 1_000_000).unwrap();
        assert!(ex.gap_decreasing_at_end(), "{spec:?}: {:?}", ex.gaps);
        let zeta = reference_zeta(real(s)).unwrap().value;
        assert!((ex.rhs - zeta).norm() <= ex.rhs_tail.unwrap() + 1e-9);
    }
    for x in [-2.0, 0.5, 1.0, 3.0] {
        let ex = tannery_exchange(&ExpInstance { x }, &[100, 1_000, 10_000, 100_000], 60).unwrap();
        assert!(ex.gap_decreasing_at_end(), "x={x}: {:?}", ex.gaps);
        assert!((ex.rhs.re - x.exp()).abs() <= 1e-14 * x.exp().max(1.0));
    }
}

#[test]
fn exp_limit_paths_agree_where_they_meet() {
    for x in [-3.0, -0.5, 0.0, 0.75, 2.0] {
        for n in [1u64, 2, 10, 40, 64] {
            let a = exp_limit_binomial(x, n);
            if 1.0 + x / n as f64 <= 0.0 {
                assert!(exp_limit_log(x, n).is_err());
                continue;
            }
            let b = exp_limit_log(x, n).unwrap();
            assert!(
                (a - b).abs() <= 1e-13 * a.abs().max(1e-300),
                "x={x} n={n}: {a} {b}"
            );
            assert_eq!(exp_limit(x, n).unwrap(), a);
        }
        let exact = (1.0 + x / 65.0_f64).powi(65);
        assert!((exp_limit(x, 65).unwrap() - exact).abs() <= 1e-13 * exact.abs());
    }
    assert!(exp_limit(1.0, 0).is_err());
}

#[test]
fn gamma_limit_recurrence_in_the_complex_plane() {
    let n = 1_000_000;
    for z in [
        Complex64::new(0.5, 0.0),
        Complex64::new(1.0, 2.0),
        Complex64::new(-0.5, 0.3),
    ] {
        let ratio = gamma_limit(z + 1.0, n).unwrap() / gamma_limit(z, n).unwrap();
        assert!((ratio - z).norm() < 1e-3, "z={z}: {ratio}");
    }
    let half = gamma_limit(real(0.5), n).unwrap();
    assert!((half.re - std::f64::consts::PI.sqrt()).abs() < 1e-5);
    assert!(gamma_limit(real(-2.0), n).is_err());
}

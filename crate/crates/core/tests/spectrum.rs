use approx::assert_abs_diff_eq;
use eqdeg::spectrum::{
    critical_point, enumerate_critical_points, group_by_point, index_sets, mu, mu_numerator,
    parse_nu, rho, xi, xi_bound_margin, xi_lower_bound_constant, CouplingCurve, IndexQuad,
    ModelParams, Tolerances, Window,
};
use eqdeg::{Error, Exec};
use num_rational::Ratio;
use proptest::prelude::*;
use std::f64::consts::PI;

fn params(tau: f64, n: usize) -> ModelParams {
    ModelParams::new(Ratio::new(1, 1), 1.0, tau, n, CouplingCurve::sigmoid()).unwrap()
}

#[test]
fn nu_parsing() {
    assert_eq!(parse_nu("3/4").unwrap(), Ratio::new(3, 4));
    assert_eq!(parse_nu(" 2 ").unwrap(), Ratio::new(2, 1));
    assert_eq!(parse_nu("6/8").unwrap(), Ratio::new(3, 4));
    for bad in ["0", "-1/2", "1/0", "x", "1.5"] {
        assert!(parse_nu(bad).is_err(), "{bad}");
    }
}

#[test]
fn invalid_models_are_rejected() {
    let nu = Ratio::new(1, 1);
    assert!(ModelParams::new(nu, 0.0, 1.0, 3, CouplingCurve::sigmoid()).is_err());
    assert!(ModelParams::new(nu, 1.0, -1.0, 3, CouplingCurve::sigmoid()).is_err());
    assert!(ModelParams::new(nu, 1.0, 1.0, 2, CouplingCurve::sigmoid()).is_err());
    assert!(ModelParams::new(
        nu,
        1.0,
        1.0,
        3,
        CouplingCurve::Linear {
            slope: 0.0,
            offset: 1.0
        }
    )
    .is_err());
    let table = CouplingCurve::Table {
        points: vec![(0.0, 1.0), (1.0, 0.5), (2.0, 2.0)],
    };
    assert!(table.validate().is_err());
    let table = CouplingCurve::Table {
        points: vec![(1.0, 1.0), (0.0, 2.0)],
    };
    assert!(table.validate().is_err());
}

#[test]
fn coupling_curves_invert() {
    let curves = [
        CouplingCurve::sigmoid(),
        CouplingCurve::Sigmoid { steepness: -2.5 },
        CouplingCurve::Linear {
            slope: -0.7,
            offset: 0.3,
        },
        CouplingCurve::Table {
            points: vec![(-1.0, 0.0), (0.0, 0.5), (2.0, 3.0)],
        },
    ];
    for c in &curves {
        for a in [-0.9, -0.3, 0.1, 0.8, 1.7] {
            let y = c.eval(a);
            assert_abs_diff_eq!(c.inverse(y).unwrap(), a, epsilon = 1e-9);
            let h = 1e-6;
            assert_abs_diff_eq!(
                c.derivative(a),
                (c.eval(a + h) - c.eval(a - h)) / (2.0 * h),
                epsilon = 1e-5
            );
        }
    }
    assert_eq!(CouplingCurve::sigmoid().inverse(1.5), None);
    assert_eq!(CouplingCurve::sigmoid().range(), (0.0, 1.0));
}

#[test]
fn critical_point_formula() {
    let p = params(2.0, 3);
    let q = IndexQuad {
        m: 1,
        n: 1,
        j: 0,
        k: 1,
    };
    let (a, b) = critical_point(q, &p).unwrap().unwrap();
    assert_abs_diff_eq!(b, 1.0 / 2f64.sin(), epsilon = 1e-15);
    assert!(mu(q, a, b, &p).unwrap().norm() < 1e-13);
    assert_eq!(rho(q, a, &p).unwrap(), -1);
    let mu_num = mu_numerator(q, a, b, &p).unwrap();
    assert!(mu_num.norm() < 1e-13);
}

#[test]
fn degenerate_delay_is_reported() {
    let p = params(PI, 3);
    let err = critical_point(
        IndexQuad {
            m: 2,
            n: 1,
            j: 0,
            k: 1,
        },
        &p,
    )
    .unwrap_err();
    assert!(matches!(err, Error::Degenerate(_)));
    assert_eq!(p.tau_near_rational_pi(16), Some((1, 1)));
    assert_eq!(params(2.0, 3).tau_near_rational_pi(16), None);
}

#[test]
fn enumeration_is_deterministic_and_exact() {
    let p = params(2.0, 5);
    let w = Window { m_max: 4, n_max: 4 };
    let seq = enumerate_critical_points(&p, w, Exec::Sequential).unwrap();
    let par = enumerate_critical_points(&p, w, Exec::Parallel).unwrap();
    assert_eq!(seq, par);
    assert!(!seq.is_empty());
    for c in &seq {
        assert_eq!(critical_point(c.quad, &p).unwrap(), Some((c.alpha, c.beta)));
        assert_eq!(rho(c.quad, c.alpha, &p).unwrap(), c.rho);
    }
    let groups = group_by_point(&seq, 1e-9);
    let total: usize = groups.iter().map(Vec::len).sum();
    assert_eq!(total, seq.len());
    for g in &groups {
        assert!(g
            .iter()
            .all(|c| (c.alpha - g[0].alpha).abs() <= 1e-9 && (c.beta - g[0].beta).abs() <= 1e-9));
    }
}

#[test]
fn index_sets_at_a_critical_point() {
    let p = params(2.0, 3);
    let q = IndexQuad {
        m: 1,
        n: 1,
        j: 0,
        k: 1,
    };
    let (a, b) = critical_point(q, &p).unwrap().unwrap();
    let sets = index_sets(a, b, &p, Window { m_max: 5, n_max: 5 }, false).unwrap();
    assert!(sets.null.contains(&q));
    assert!(sets.b1_holds);
    assert_eq!(
        sets.slices[&1].len(),
        sets.null.iter().filter(|x| x.m == 1).count()
    );
    for x in &sets.null {
        assert!(mu(*x, a, b, &p).unwrap().norm() <= p.tolerances.zero);
    }
    for neg in &sets.negative {
        let z = p.zeta_jk(neg.j, neg.k, a).unwrap();
        assert!((neg.n as f64).powi(2) + z + b < 0.0);
    }
    let h = index_sets(a, b, &p, Window { m_max: 5, n_max: 5 }, true).unwrap();
    assert!(h.null.iter().all(|x| x.m % 2 == 1));
    assert!(h.null.contains(&q));
}

#[test]
fn window_too_small_is_reported() {
    let p = params(2.0, 3);
    let q = IndexQuad {
        m: 2,
        n: 1,
        j: 1,
        k: 1,
    };
    let (a, b) = critical_point(q, &p).unwrap().unwrap();
    let err = index_sets(a, b, &p, Window { m_max: 1, n_max: 1 }, false).unwrap_err();
    assert!(matches!(err, Error::WindowTooSmall(_)));
}

#[test]
fn xi_bound_on_a_small_window() {
    let p = params(1.0, 3);
    let bound = xi_lower_bound_constant(&p);
    assert!(bound.c > 0.0);
    for m in 0..60u32 {
        for n in 1..60u32 {
            assert!(xi(m, n, &p).norm() >= bound.c * (m + n) as f64 - 1e-12);
        }
    }
    let seq = xi_bound_margin(&p, bound.c, 300, 300, Exec::Sequential);
    let par = xi_bound_margin(&p, bound.c, 300, 300, Exec::Parallel);
    assert_eq!(seq, par);
    assert!(seq >= 0.0);
}

#[test]
fn tolerances_round_trip_through_json() {
    let t = Tolerances {
        zero: 1e-7,
        ..Tolerances::default()
    };
    let back: Tolerances = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
    assert_eq!(back, t);
    let partial: Tolerances = serde_json::from_str(r#"{"zero": 1e-6}"#).unwrap();
    assert_eq!(partial.merge, Tolerances::default().merge);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn critical_points_zero_mu(
        p in 1i64..6, q in 1i64..6, delta in 0.05f64..4.0, tau in 0.1f64..6.0,
        m in 1u32..5, n in 1u32..6, j in 0usize..4,
    ) {
        let params = ModelParams::new(Ratio::new(p, q), delta, tau, 7, CouplingCurve::sigmoid()).unwrap();
        let quad = IndexQuad { m, n, j, k: 1 };
        if let Ok(Some((a, b))) = critical_point(quad, &params) {
            prop_assert!(mu(quad, a, b, &params).unwrap().norm() < 1e-10);
            prop_assert!((b * (m as f64 * tau).sin() - delta * m as f64).abs() < 1e-9 * b.abs().max(1.0));
        }
    }

    #[test]
    fn xi_bound_holds_for_random_parameters(p in 1i64..9, q in 1i64..9, delta in 0.05f64..5.0) {
        let params = ModelParams::new(Ratio::new(p, q), delta, 1.0, 3, CouplingCurve::sigmoid()).unwrap();
        let c = xi_lower_bound_constant(&params).c;
        prop_assert!(xi_bound_margin(&params, c, 200, 200, Exec::Sequential) >= 0.0);
    }
}

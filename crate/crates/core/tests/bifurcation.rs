use eqdeg::bifurcation::{
    dressing, g_irrep, h_fixed_invariant, local_invariant, maximal_orbit_generators, modular_data,
    orbit_type_of, predict_branches, symmetry_relations, BranchKind, Mode,
};
use eqdeg::degrees::maximal_kind_types;
use eqdeg::groups::DihedralElement;
use eqdeg::spectrum::{critical_point, CouplingCurve, IndexQuad, ModelParams, Window};
use eqdeg::{Error, Exec, SymmetryContext};
use num_rational::Ratio;

fn params(tau: f64, n: usize) -> ModelParams {
    ModelParams::new(Ratio::new(1, 1), 1.0, tau, n, CouplingCurve::sigmoid()).unwrap()
}

#[test]
fn dressing_and_modular_data() {
    assert_eq!(dressing(1), 1);
    assert_eq!(dressing(2), 0);
    assert_eq!(modular_data(7, 3).unwrap(), (7, 3, 5));
    assert_eq!(modular_data(8, 2).unwrap(), (4, 1, 1));
    assert_eq!(modular_data(9, 3).unwrap(), (3, 1, 1));
    assert!(modular_data(6, 3).is_err());
    assert!(modular_data(6, 0).is_err());
    assert_eq!(BranchKind::parse("s").unwrap(), BranchKind::S);
    assert!(BranchKind::parse("Q").is_err());
}

#[test]
fn generator_sets_realize_exactly_the_maximal_types() {
    for nn in 3..=7 {
        let ctx = SymmetryContext::new(nn).unwrap();
        let tl = ctx.twisted();
        for m in 1..=3 {
            for n in 1..=2 {
                for j in 0..=nn / 2 {
                    let mut from_generators: Vec<_> = maximal_orbit_generators(nn, m, n, j)
                        .unwrap()
                        .iter()
                        .map(|(_, g)| orbit_type_of(tl, g).unwrap())
                        .collect();
                    from_generators.sort();
                    from_generators.dedup();
                    let mut expected =
                        maximal_kind_types(tl, &g_irrep(m, n, j, nn).unwrap()).unwrap();
                    expected.sort();
                    assert_eq!(
                        from_generators, expected,
                        "N = {nn}, (m,n,j) = ({m},{n},{j})"
                    );
                }
            }
        }
    }
}

#[test]
fn kinds_by_isotypic_index() {
    let kinds = |nn, j| -> Vec<BranchKind> {
        maximal_orbit_generators(nn, 1, 1, j)
            .unwrap()
            .into_iter()
            .map(|(k, _)| k)
            .collect()
    };
    assert_eq!(kinds(7, 0), vec![BranchKind::H]);
    assert_eq!(
        kinds(7, 2),
        vec![BranchKind::H, BranchKind::S, BranchKind::T]
    );
    assert_eq!(kinds(6, 3), vec![BranchKind::H]);
    let rels = symmetry_relations(BranchKind::H, 7, 1, 1, 1).unwrap();
    let rotating = rels
        .iter()
        .find(|r| r.perm == DihedralElement::gamma(7))
        .expect("rotation generator");
    assert!(!rotating.shift.is_zero());
    assert_eq!(rotating.sign, 1);
    assert!(symmetry_relations(BranchKind::S, 7, 1, 1, 0).is_err());
}

#[test]
fn local_invariant_refuses_when_b1_fails() {
    let p = params(2.0, 3);
    let ctx = SymmetryContext::new(3).unwrap();
    let alpha = 0.3;
    let beta = -1.0 - p.zeta_jk(0, 1, alpha).unwrap();
    let err = local_invariant(&ctx, &p, alpha, beta, Window { m_max: 3, n_max: 3 }).unwrap_err();
    assert!(matches!(err, Error::Degenerate(_)));
    assert!(local_invariant(
        &SymmetryContext::new(4).unwrap(),
        &p,
        alpha,
        1.0,
        Window { m_max: 3, n_max: 3 }
    )
    .is_err());
}

#[test]
fn invariant_at_a_simple_critical_point() {
    let p = params(2.0, 3);
    let ctx = SymmetryContext::new(3).unwrap();
    let q = IndexQuad {
        m: 1,
        n: 1,
        j: 0,
        k: 1,
    };
    let (a, b) = critical_point(q, &p).unwrap().unwrap();
    let w = Window { m_max: 5, n_max: 5 };
    let h = h_fixed_invariant(&ctx, &p, a, b, w).unwrap();
    assert_eq!(h.contributions, vec![(q, -1)]);
    let expected = ctx
        .twisted_basic_degree(&g_irrep(1, 1, 0, 3).unwrap())
        .unwrap()
        .scaled(-1);
    assert_eq!(h.value, expected);
    let local = local_invariant(&ctx, &p, a, b, w).unwrap();
    assert!(!local.value.is_zero());
    let terms = local.terms(ctx.twisted());
    assert!(terms
        .iter()
        .all(|t| t.coeff != 0 && t.orbit_type.starts_with('[')));
}

#[test]
fn predictions_do_not_depend_on_execution_strategy() {
    let p = params(2.0, 5);
    let ctx = SymmetryContext::new(5).unwrap();
    let w = Window { m_max: 3, n_max: 3 };
    for mode in [Mode::Local, Mode::Global] {
        let seq = predict_branches(&ctx, &p, w, mode, Exec::Sequential).unwrap();
        let par = predict_branches(&ctx, &p, w, mode, Exec::Parallel).unwrap();
        assert_eq!(seq, par);
    }
}

#[test]
fn global_mode_skips_even_foldings() {
    let p = params(2.0, 3);
    let ctx = SymmetryContext::new(3).unwrap();
    let report = predict_branches(
        &ctx,
        &p,
        Window { m_max: 4, n_max: 4 },
        Mode::Global,
        Exec::default(),
    )
    .unwrap();
    for cp in &report.critical_points {
        if cp.m % 2 == 0 {
            assert!(cp.branches.is_empty());
            assert!(!cp.diagnostics.is_empty());
        }
        for b in &cp.branches {
            assert!(b.unbounded && b.non_stationary);
            assert_ne!(b.coeff, 0);
        }
    }
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["mode"], "global");
    assert_eq!(json["params"]["nu"], "1/1");
}

use eqdeg::bifurcation::{symmetry_relations, BranchKind};
use eqdeg::groups::DihedralElement;
use eqdeg::spectrum::{critical_point, CouplingCurve, IndexQuad, ModelParams};
use eqdeg::verify::{
    export_eigenfunction, fd_dense_matrix, fd_sigma_min, reference_wave, fixed_coefficients,
    isotypic_basis, permutation_relation, spectral_check, spectral_expected, spectral_matrix,
    symmetry_check, v_n, FdSpec, GridFunction,
};
use eqdeg::Exec;
use num_rational::Ratio;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

fn params(tau: f64, n: usize) -> ModelParams {
    ModelParams::new(Ratio::new(1, 1), 1.0, tau, n, CouplingCurve::sigmoid()).unwrap()
}

#[test]
fn dense_and_block_singular_values_agree() {
    let p = params(2.0, 3);
    let spec = FdSpec { mt: 8, mx: 4 };
    for (a, b) in [(-0.17, 1.1), (0.5, -0.3)] {
        let dense = fd_dense_matrix(&p, a, b, spec).unwrap();
        let smin = dense
            .singular_values()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let block = fd_sigma_min(&p, a, b, spec, Exec::Sequential).unwrap();
        assert!(
            (smin - block).abs() < 1e-10 * smin.max(1.0),
            "{smin} vs {block}"
        );
        assert_eq!(block, fd_sigma_min(&p, a, b, spec, Exec::Parallel).unwrap());
    }
}

#[test]
fn singular_value_dips_at_a_critical_point() {
    let p = params(2.0, 3);
    let (a, b) = critical_point(
        IndexQuad {
            m: 1,
            n: 1,
            j: 1,
            k: 1,
        },
        &p,
    )
    .unwrap()
    .unwrap();
    let spec = FdSpec { mt: 32, mx: 16 };
    let at = fd_sigma_min(&p, a, b, spec, Exec::default()).unwrap();
    let off = fd_sigma_min(&p, a + 0.3, b - 0.3, spec, Exec::default()).unwrap();
    assert!(at < 0.2 * off, "{at} vs {off}");
}

#[test]
fn fd_spec_validation_and_delay_split() {
    assert!(FdSpec { mt: 2, mx: 4 }.validate().is_err());
    assert!(FdSpec { mt: 16, mx: 0 }.validate().is_err());
    let spec = FdSpec { mt: 64, mx: 8 };
    let (s, w) = spec.delay_split(2.0);
    assert!((0.0..1.0).contains(&w));
    assert!(((s as f64 + w) * spec.dt() - 2.0).abs() < 1e-12);
    assert!((spec.dx() - PI / 9.0).abs() < 1e-15);
}

#[test]
fn spectral_mode_matches_closed_form() {
    let p = ModelParams::new(
        Ratio::new(2, 3),
        0.4,
        1.3,
        6,
        CouplingCurve::Linear {
            slope: 1.5,
            offset: 0.2,
        },
    )
    .unwrap();
    assert!(spectral_check(&p, 0.7, -1.2, 3, 3).unwrap() < 1e-10);
    let mat = spectral_matrix(&p, 0.7, -1.2, 2, 2).unwrap();
    let expected = spectral_expected(&p, 0.7, -1.2, 2, 2).unwrap();
    assert_eq!(mat.nrows(), expected.len());
    // trace of the real block matrix equals the sum of expected eigenvalues
    let sum: f64 = expected.iter().map(|z| z.re).sum();
    assert!((mat.trace() - sum).abs() < 1e-9 * sum.abs().max(1.0));
}

#[test]
fn spatial_modes_vanish_on_the_boundary() {
    for n in 1..8 {
        assert!(v_n(n, FRAC_PI_2).abs() < 1e-14);
        assert!(v_n(n, -FRAC_PI_2).abs() < 1e-14);
        assert_eq!(v_n(n, -0.3) == v_n(n, 0.3), n % 2 == 1);
    }
}

#[test]
fn grid_shift_is_exact_for_trigonometric_polynomials() {
    let u = GridFunction::sample(32, 5, 2, |t, x, c| {
        (2.0 * t).cos() * x.cos() + c as f64 * t.sin()
    });
    for phi in [TAU / 32.0 * 3.0, 0.37, -1.1] {
        let s = u.shifted(phi);
        for i in 0..u.mt {
            for k in 0..u.mx {
                for c in 0..u.n {
                    let t = u.t(i) + phi;
                    let x = u.x(k);
                    let exact = (2.0 * t).cos() * x.cos() + c as f64 * t.sin();
                    assert!((s.get(i, k, c) - exact).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn exported_eigenfunctions_satisfy_their_relations() {
    for nn in [5, 6, 7, 8] {
        for j in 1..=nn / 2 {
            for m in 1..=2 {
                for n in 1..=2 {
                    for kind in [BranchKind::H, BranchKind::S, BranchKind::T] {
                        let Ok(rels) = symmetry_relations(kind, nn, m, n, j) else {
                            continue;
                        };
                        let u = export_eigenfunction(nn, m, n, j, kind, 32, 16).unwrap();
                        assert!((u.max_abs() - 1.0).abs() < 1e-12);
                        for check in symmetry_check(&u, &rels, 1e-12) {
                            assert!(
                                check.pass,
                                "N = {nn}, ({m},{n},{j}) {kind:?}: {} off by {}",
                                check.relation, check.max_violation
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn reference_waves_have_the_documented_symmetries() {
    let nn = 7;
    for (which, kind) in [(1, BranchKind::H), (2, BranchKind::S), (3, BranchKind::T)] {
        let u = reference_wave(which, nn, 64, 32).unwrap();
        let rels = symmetry_relations(kind, nn, 1, 1, 1).unwrap();
        assert!(symmetry_check(&u, &rels, 1e-12).iter().all(|c| c.pass));
        let other = if kind == BranchKind::S {
            BranchKind::T
        } else {
            BranchKind::S
        };
        let rels = symmetry_relations(other, nn, 1, 1, 1).unwrap();
        assert!(!symmetry_check(&u, &rels, 1e-6).iter().all(|c| c.pass));
    }
    assert!(reference_wave(4, nn, 8, 8).is_err());
}

#[test]
fn rotating_wave_is_not_reflection_invariant() {
    let u = reference_wave(1, 7, 16, 8).unwrap();
    let r = permutation_relation(DihedralElement::kappa());
    assert!(!symmetry_check(&u, &[r], 1e-6)[0].pass);
    let id = permutation_relation(DihedralElement::IDENTITY);
    assert!(symmetry_check(&u, &[id], 0.0)[0].pass);
}

#[test]
fn isotypic_basis_is_orthogonal_and_invariant_coefficients_exist() {
    let b = isotypic_basis(7, 2).unwrap();
    assert_eq!(b.ncols(), 2);
    assert!((b.column(0).dot(&b.column(1))).abs() < 1e-12);
    assert!(fixed_coefficients(7, 1, 1, 2, &[]).is_err());
}

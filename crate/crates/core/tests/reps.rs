use approx::assert_abs_diff_eq;
use eqdeg::groups::{DihedralElement, GammaPrimeElement};
use eqdeg::reps::{
    character_inner_product, character_table, cycle_laplacian_eigendata, cycle_laplacian_matrix,
    fixed_dim, fixed_dim_dressed, generate, isotypic_irrep, permutation_character,
    permutation_isotypic, DihedralIrrep, DressedIrrep, GIrrep, LaplacianEigendata,
};
use eqdeg::turn::Turn;
use eqdeg::twisted::GElement;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

fn dihedral_elements(n: usize) -> Vec<DihedralElement> {
    (0..2 * n)
        .map(|i| DihedralElement::from_index(i, n))
        .collect()
}

/// Rank of the averaging projector (1/|H|) Σ ρ(h).
fn projector_rank(mats: &[DMatrix<f64>]) -> usize {
    let mut p = mats[0].clone() * 0.0;
    for m in mats {
        p += m;
    }
    p /= mats.len() as f64;
    p.singular_values().iter().filter(|&&s| s > 1e-8).count()
}

#[test]
fn characters_are_orthonormal() {
    for n in 3..=10 {
        let table = character_table(n);
        let dims: usize = table.iter().map(|r| r.dim() * r.dim()).sum();
        assert_eq!(dims, 2 * n, "sum of squared dimensions, N = {n}");
        for a in &table {
            for b in &table {
                let ip = character_inner_product(n, |s| a.character(s, n), |s| b.character(s, n));
                assert_abs_diff_eq!(ip, if a == b { 1.0 } else { 0.0 }, epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn matrices_are_homomorphisms_with_matching_traces() {
    for n in [4, 5, 6] {
        for irr in character_table(n) {
            for a in dihedral_elements(n) {
                assert_abs_diff_eq!(
                    irr.matrix(a, n).trace(),
                    irr.character(a, n),
                    epsilon = 1e-12
                );
                for b in dihedral_elements(n) {
                    let lhs = irr.matrix(a.mul(b, n), n);
                    let rhs = irr.matrix(a, n) * irr.matrix(b, n);
                    assert!((lhs - rhs).amax() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn one_dimensional_conventions() {
    let n = 6;
    let g = DihedralElement::gamma(n);
    let k = DihedralElement::kappa();
    assert_eq!(DihedralIrrep::Half.character(g, n), -1.0);
    assert_eq!(DihedralIrrep::Half.character(k, n), 1.0);
    assert_eq!(DihedralIrrep::Sign.character(g, n), 1.0);
    assert_eq!(DihedralIrrep::Sign.character(k, n), -1.0);
    assert_eq!(DihedralIrrep::SignSign.character(g, n), -1.0);
    assert_eq!(DihedralIrrep::SignSign.character(k, n), -1.0);
    assert!(DihedralIrrep::Half.validate(5).is_err());
    assert!(DihedralIrrep::Geometric(3).validate(6).is_err());
    assert!(DihedralIrrep::Geometric(2).validate(6).is_ok());
}

#[test]
fn permutation_representation_decomposes_into_isotypic_components() {
    for n in 3..=10 {
        let parts = permutation_isotypic(n);
        let total: usize = parts.iter().map(|(irr, mult)| irr.dim() * mult).sum();
        assert_eq!(total, n);
        for (irr, mult) in &parts {
            assert_eq!(*mult, 1);
            let ip = character_inner_product(
                n,
                |s| permutation_character(s, n),
                |s| irr.character(s, n),
            );
            assert_abs_diff_eq!(ip, 1.0, epsilon = 1e-12);
        }
        for j in 0..=n / 2 {
            assert!(parts
                .iter()
                .any(|(irr, _)| *irr == isotypic_irrep(j, n).unwrap()));
        }
    }
}

#[test]
fn cycle_laplacian_spectrum() {
    for n in 3..=12 {
        let l = cycle_laplacian_matrix(n);
        let mut eig: Vec<f64> = SymmetricEigen::new(l).eigenvalues.iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        let data = cycle_laplacian_eigendata(n).unwrap();
        let mut expected = Vec::new();
        for (j, _, z) in data.entries() {
            let closed = 4.0 * (std::f64::consts::PI * j as f64 / n as f64).sin().powi(2);
            assert_abs_diff_eq!(z, closed, epsilon = 1e-12);
            let copies = isotypic_irrep(j, n).unwrap().dim();
            expected.extend(std::iter::repeat_n(z, copies));
        }
        expected.sort_by(f64::total_cmp);
        assert_eq!(eig.len(), expected.len());
        for (a, b) in eig.iter().zip(&expected) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }
}

#[test]
fn custom_eigendata_validation() {
    assert!(
        LaplacianEigendata::custom(4, vec![(0, vec![0.0]), (1, vec![2.0]), (2, vec![4.0])]).is_ok()
    );
    assert!(LaplacianEigendata::custom(4, vec![(3, vec![1.0])]).is_err());
    let d = LaplacianEigendata::custom(5, vec![(0, vec![0.0, 1.5]), (2, vec![3.0])]).unwrap();
    assert_eq!(d.z(0, 2), Some(1.5));
    assert_eq!(d.z(2, 1), Some(3.0));
    assert_eq!(d.z(1, 1), None);
}

#[test]
fn dressed_fixed_dims_match_projector_rank() {
    let n = 4;
    let all: Vec<GammaPrimeElement> = (0..8 * n)
        .map(|i| GammaPrimeElement::from_index(i, n))
        .collect();
    for irr in character_table(n) {
        for dressing in 0..2 {
            let v = DressedIrrep::new(irr, dressing);
            assert_eq!(
                fixed_dim_dressed(&v, &[GammaPrimeElement::identity()], n).unwrap(),
                v.dim()
            );
            let mats: Vec<DMatrix<f64>> = all.iter().map(|g| v.matrix(*g, n)).collect();
            // κ₁ acts by −1, so nothing is fixed by all of Γ'
            assert_eq!(projector_rank(&mats), 0);
            assert_eq!(fixed_dim_dressed(&v, &all, n).unwrap(), 0);
            let d_n: Vec<GammaPrimeElement> = all
                .iter()
                .copied()
                .filter(|g| g.kappa1 == 1 && g.kappa2 == 1)
                .collect();
            let expected = usize::from(irr == DihedralIrrep::Trivial);
            assert_eq!(fixed_dim_dressed(&v, &d_n, n).unwrap(), expected);
        }
    }
}

#[test]
fn generate_closes_under_multiplication() {
    let n = 5;
    let gens = [
        GElement::new(Turn::new(1, 5), 1, 1, DihedralElement::gamma(n)),
        GElement::new(Turn::new(1, 2), -1, 1, DihedralElement::IDENTITY),
    ];
    let h = generate(&gens, n).unwrap();
    assert_eq!(h.len(), 10);
    for a in &h {
        for b in &h {
            assert!(h.binary_search(&a.mul(b, n)).is_ok());
        }
    }
    let irrational = [GElement::new(
        Turn::new(1, 1 << 22),
        1,
        1,
        DihedralElement::IDENTITY,
    )];
    assert!(generate(&irrational, n).is_err());
}

fn gelement(n: usize) -> impl Strategy<Value = GElement> {
    (
        0i64..12,
        prop::sample::select(vec![1i64, 2, 3, 4, 6, 12]),
        0usize..8 * n,
    )
        .prop_map(move |(p, q, g)| {
            let gp = GammaPrimeElement::from_index(g, n);
            GElement::new(Turn::new(p, q), gp.kappa1, gp.kappa2, gp.dihedral)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn fixed_dim_equals_projector_rank(
        (n, m, j, dressing, gens) in (3usize..=6).prop_flat_map(|n| (
            Just(n),
            1u32..=3,
            0..=n / 2,
            0u8..2,
            prop::collection::vec(gelement(n), 1..3),
        ))
    ) {
        let v = GIrrep::new(m, DressedIrrep::new(isotypic_irrep(j, n).unwrap(), dressing));
        let h = generate(&gens, n).unwrap();
        let mats: Vec<DMatrix<f64>> = h.iter().map(|x| v.matrix(x, n)).collect();
        for (x, mat) in h.iter().zip(&mats) {
            prop_assert!((mat.trace() - v.character(x, n)).abs() < 1e-9);
        }
        prop_assert_eq!(fixed_dim(&v, &gens, n).unwrap(), projector_rank(&mats));
    }

    #[test]
    fn g_irrep_is_a_homomorphism(
        (n, a, b, m) in (3usize..=6).prop_flat_map(|n| (Just(n), gelement(n), gelement(n), 1u32..=3))
    ) {
        let v = GIrrep::new(m, DressedIrrep::new(DihedralIrrep::Geometric(1), 1));
        let lhs = v.matrix(&a.mul(&b, n), n);
        let rhs = v.matrix(&a, n) * v.matrix(&b, n);
        prop_assert!((lhs - rhs).amax() < 1e-9);
    }
}

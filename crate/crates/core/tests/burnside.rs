use eqdeg::burnside::{
    coeff, multiplication_table, multiply, multiply_generators, multiply_generators_oracle,
    multiply_oracle, BurnsideElement,
};
use eqdeg::groups::{dihedral_group, gamma_prime, SubgroupClassLattice};
use eqdeg::Exec;
use proptest::prelude::*;
use std::sync::OnceLock;

fn lattice(n: usize) -> &'static SubgroupClassLattice {
    static CACHE: OnceLock<Vec<SubgroupClassLattice>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        (3..=5)
            .map(|n| SubgroupClassLattice::new(gamma_prime(n).unwrap()).unwrap())
            .collect()
    })[n - 3]
}

fn element(lat: &SubgroupClassLattice) -> impl Strategy<Value = BurnsideElement> {
    let k = lat.num_classes();
    prop::collection::vec((0..k, -3i64..4), 0..4).prop_map(BurnsideElement::from_terms)
}

#[test]
fn d3_products_by_hand() {
    // classes of D3: D3, Z3, D1, 1
    let lat = SubgroupClassLattice::new(dihedral_group(3).unwrap()).unwrap();
    let d1 = 2;
    let z3 = 1;
    let one = 3;
    assert_eq!(
        multiply_generators(&lat, d1, d1).unwrap(),
        BurnsideElement::from_terms([(d1, 1), (one, 1)])
    );
    assert_eq!(
        multiply_generators(&lat, z3, z3).unwrap(),
        BurnsideElement::from_terms([(z3, 2)])
    );
    assert_eq!(
        multiply_generators(&lat, z3, d1).unwrap(),
        BurnsideElement::from_terms([(one, 1)])
    );
    assert_eq!(
        multiply_generators(&lat, one, d1).unwrap(),
        BurnsideElement::from_terms([(one, 3)])
    );
}

#[test]
fn recurrence_matches_orbit_counting_for_dihedral_groups() {
    for n in 3..=10 {
        let lat = SubgroupClassLattice::new(dihedral_group(n).unwrap()).unwrap();
        for h in 0..lat.num_classes() {
            for k in 0..lat.num_classes() {
                assert_eq!(
                    multiply_generators(&lat, h, k).unwrap(),
                    multiply_generators_oracle(&lat, h, k),
                    "N = {n}, ({h}) x ({k})"
                );
            }
        }
    }
}

#[test]
fn parallel_table_equals_sequential() {
    let lat = lattice(4);
    assert_eq!(
        multiplication_table(lat, Exec::Parallel).unwrap(),
        multiplication_table(lat, Exec::Sequential).unwrap()
    );
}

#[test]
fn coefficients_and_arithmetic() {
    let a = BurnsideElement::from_terms([(1, 2), (3, -1), (1, -2)]);
    assert_eq!(a.get(1), 0);
    assert_eq!(a.get(3), -1);
    assert_eq!(a.len(), 1);
    assert!(a.plus(&a.scaled(-1)).is_zero());
    let lat = lattice(3);
    assert_eq!(coeff(lat, &a, 3).unwrap(), -1);
    assert!(coeff(lat, &a, lat.num_classes()).is_err());
    assert_eq!(
        BurnsideElement::unit().display(lat),
        format!("1{}", lat.class_name(0))
    );
}

#[test]
fn product_is_stable_under_class_count() {
    let lat = lattice(5);
    let top = BurnsideElement::unit();
    for h in 0..lat.num_classes() {
        let g = BurnsideElement::generator(h);
        assert_eq!(multiply(lat, &top, &g).unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn commutative_and_matches_orbit_counting(
        (n, a, b) in (3usize..=5).prop_flat_map(|n| (Just(n), element(lattice(n)), element(lattice(n))))
    ) {
        let lat = lattice(n);
        prop_assert_eq!(multiply(lat, &a, &b).unwrap(), multiply(lat, &b, &a).unwrap());
        prop_assert_eq!(multiply(lat, &a, &b).unwrap(), multiply_oracle(lat, &a, &b));
    }

    #[test]
    fn associative_and_distributive(
        a in element(lattice(3)),
        b in element(lattice(3)),
        c in element(lattice(3)),
    ) {
        let lat = lattice(3);
        let ab_c = multiply(lat, &multiply(lat, &a, &b).unwrap(), &c).unwrap();
        let a_bc = multiply(lat, &a, &multiply(lat, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let left = multiply(lat, &a, &b.plus(&c)).unwrap();
        let right = multiply(lat, &a, &b).unwrap().plus(&multiply(lat, &a, &c).unwrap());
        prop_assert_eq!(left, right);
    }
}

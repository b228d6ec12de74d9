use eqdeg::burnside::{multiply, BurnsideElement};
use eqdeg::groups::{gamma_prime, DihedralElement, SubgroupClassLattice};
use eqdeg::reps::generate;
use eqdeg::turn::Turn;
use eqdeg::twisted::{
    fold, CircleQuotient, GElement, TwistedLattice, TwistedOrbitType, TwistedSum,
};
use proptest::prelude::*;
use std::sync::{Arc, OnceLock};

fn twisted(n: usize) -> &'static TwistedLattice {
    static CACHE: OnceLock<Vec<TwistedLattice>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        (3..=4)
            .map(|n| {
                TwistedLattice::new(
                    Arc::new(SubgroupClassLattice::new(gamma_prime(n).unwrap()).unwrap()),
                    n,
                )
                .unwrap()
            })
            .collect()
    })[n - 3]
}

fn orbit_type(tl: &TwistedLattice, max_l: u32) -> impl Strategy<Value = TwistedOrbitType> {
    (0..tl.num_pairs(), 1..=max_l).prop_map(|(pair, l)| TwistedOrbitType { pair, l })
}

fn twisted_sum(tl: &'static TwistedLattice) -> impl Strategy<Value = TwistedSum> {
    prop::collection::vec((orbit_type(tl, 3), -3i64..4), 0..4).prop_map(TwistedSum::from_terms)
}

fn burnside(lat: &SubgroupClassLattice) -> impl Strategy<Value = BurnsideElement> {
    prop::collection::vec((0..lat.num_classes(), -2i64..3), 0..3)
        .prop_map(BurnsideElement::from_terms)
}

#[test]
fn exponent_and_pair_counts() {
    assert_eq!(twisted(3).exponent(), 6);
    assert_eq!(twisted(4).exponent(), 4);
    for n in [3, 4] {
        let tl = twisted(n);
        let lat = tl.lattice();
        for class in 0..lat.num_classes() {
            let t = tl.trivial_pair(class);
            assert!(tl.pair(t).is_trivial_phi());
            assert_eq!(tl.pair(t).class, class);
        }
    }
}

#[test]
fn weyl_orders_match_circle_quotient() {
    for n in [3, 4] {
        let tl = twisted(n);
        let e = tl.exponent() as usize;
        for l in 1..=2 {
            let cq = CircleQuotient::new(l as usize * e, n).unwrap();
            for pair in 0..tl.num_pairs() {
                let t = TwistedOrbitType { pair, l };
                let set = cq.realize(tl, t).unwrap();
                assert_eq!(set.len(), l as usize * tl.k_order(t));
                assert_eq!(
                    tl.weyl_mod_circle(t),
                    cq.weyl_mod_circle(&set),
                    "N = {n}, {}",
                    tl.type_label(t)
                );
                assert_eq!(cq.classify(tl, &set).unwrap(), t);
            }
        }
    }
}

#[test]
fn stationary_types_realize_as_products() {
    let tl = twisted(3);
    let cq = CircleQuotient::new(6, 3).unwrap();
    for class in 0..tl.lattice().num_classes() {
        let t = TwistedOrbitType {
            pair: tl.trivial_pair(class),
            l: 0,
        };
        let set = cq.realize(tl, t).unwrap();
        assert_eq!(set.len(), 6 * tl.lattice().order(class));
        assert_eq!(cq.classify(tl, &set).unwrap(), t);
    }
    assert!(cq.realize(tl, TwistedOrbitType { pair: 0, l: 5 }).is_err());
}

#[test]
fn classify_elements_of_explicit_generators() {
    let n = 3;
    let tl = twisted(n);
    let g = DihedralElement::gamma(n);
    // rotating wave: spatial shift compensated by a time shift of 1/3
    let h = [GElement::new(Turn::new(-1, 3), 1, 1, g)];
    let t = tl.classify_elements(&generate(&h, n).unwrap()).unwrap();
    assert_eq!(t.l, 1);
    assert_eq!(tl.k_order(t), 3);
    let rep = tl.representative(t);
    assert_eq!(tl.canonicalize(&rep).unwrap(), t);
}

#[test]
fn containment_is_reflexive() {
    let tl = twisted(3);
    for pair in 0..tl.num_pairs() {
        let t = TwistedOrbitType { pair, l: 1 };
        assert!(tl.subconjugate(t, t));
        assert_eq!(tl.n_count(t, t), 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fold_is_multiplicative(a in twisted_sum(twisted(3)), r in 1u32..4, s in 1u32..4) {
        prop_assert_eq!(fold(s, &fold(r, &a)), fold(r * s, &a));
        prop_assert_eq!(fold(1, &a), a.clone());
        prop_assert_eq!(fold(s, &a.plus(&a)), fold(s, &a).scaled(2));
    }

    #[test]
    fn module_product_is_a_module_action(
        a in burnside(twisted(3).lattice()),
        b in burnside(twisted(3).lattice()),
        x in twisted_sum(twisted(3)),
    ) {
        let tl = twisted(3);
        let lat = tl.lattice();
        prop_assert_eq!(tl.module_product(&BurnsideElement::unit(), &x).unwrap(), x.clone());
        let ab = multiply(lat, &a, &b).unwrap();
        let lhs = tl.module_product(&ab, &x).unwrap();
        let rhs = tl.module_product(&a, &tl.module_product(&b, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let dist = tl.module_product(&a.plus(&b), &x).unwrap();
        let sum = tl.module_product(&a, &x).unwrap().plus(&tl.module_product(&b, &x).unwrap());
        prop_assert_eq!(dist, sum);
    }

    #[test]
    fn module_product_commutes_with_folding(a in burnside(twisted(4).lattice()), x in twisted_sum(twisted(4)), s in 1u32..3) {
        let tl = twisted(4);
        prop_assert_eq!(
            fold(s, &tl.module_product(&a, &x).unwrap()),
            tl.module_product(&a, &fold(s, &x)).unwrap()
        );
    }
}

//! The Burnside ring A(G) of a finite group over a fixed [`SubgroupClassLattice`].

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::groups::{conjugate_set, ElemSet, SubgroupClassLattice};
use serde::Serialize;
use std::collections::BTreeMap;

/// Integer combination of subgroup classes; absent keys are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BurnsideElement {
    coeffs: BTreeMap<usize, i64>,
}

impl BurnsideElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The generator (H).
    pub fn generator(class: usize) -> Self {
        Self::from_terms([(class, 1)])
    }

    /// The unit (G); class 0 in every lattice.
    pub fn unit() -> Self {
        Self::generator(0)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut e = Self::zero();
        for (c, v) in terms {
            e.add_term(c, v);
        }
        e
    }

    pub fn add_term(&mut self, class: usize, value: i64) {
        if value == 0 {
            return;
        }
        let slot = self.coeffs.entry(class).or_insert(0);
        *slot += value;
        if *slot == 0 {
            self.coeffs.remove(&class);
        }
    }

    pub fn get(&self, class: usize) -> i64 {
        self.coeffs.get(&class).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&c, &v)| (c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(c, v)| (c, v * k)))
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (c, v) in other.terms() {
            r.add_term(c, v);
        }
        r
    }

    /// Text form `a(H1) + b(H2)` using the lattice's class names.
    pub fn display(&self, lattice: &SubgroupClassLattice) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(c, v)| format!("{v}{}", lattice.class_name(c)))
            .collect();
        parts.join(" + ")
    }
}

/// coeff^H of an element; rejects ids outside the lattice.
pub fn coeff(lattice: &SubgroupClassLattice, a: &BurnsideElement, class: usize) -> Result<i64> {
    if class >= lattice.num_classes() {
        return Err(Error::InvalidInput(format!("unknown class id {class}")));
    }
    Ok(a.get(class))
}

/// Product of generators (H)·(K) by the top-down recurrence on marks.
pub fn multiply_generators(
    lattice: &SubgroupClassLattice,
    h: usize,
    k: usize,
) -> Result<BurnsideElement> {
    let candidates: Vec<usize> = (0..lattice.num_classes())
        .filter(|&l| lattice.leq(l, h) && lattice.leq(l, k))
        .collect();
    let mut values: Vec<i64> = Vec::with_capacity(candidates.len());
    let mut result = BurnsideElement::zero();
    for (pos, &l) in candidates.iter().enumerate() {
        let mut rhs = lattice.mark(l, h) * lattice.mark(l, k);
        for (prev, &lt) in candidates[..pos].iter().enumerate() {
            if values[prev] != 0 {
                rhs -= values[prev] * lattice.mark(l, lt);
            }
        }
        let w = lattice.weyl(l) as i64;
        if rhs % w != 0 {
            return Err(Error::Inexact(format!(
                "Burnside recurrence: {rhs} not divisible by |W| = {w} at class {l}"
            )));
        }
        values.push(rhs / w);
        result.add_term(l, rhs / w);
    }
    Ok(result)
}

/// Bilinear product of two elements.
pub fn multiply(
    lattice: &SubgroupClassLattice,
    a: &BurnsideElement,
    b: &BurnsideElement,
) -> Result<BurnsideElement> {
    let mut out = BurnsideElement::zero();
    for (h, x) in a.terms() {
        for (k, y) in b.terms() {
            for (l, z) in multiply_generators(lattice, h, k)?.terms() {
                out.add_term(l, x * y * z);
            }
        }
    }
    Ok(out)
}

/// Product of generators by counting orbits on G/H × G/K.
///
/// Every orbit meets {eH} × G/K; on that slice the stabilizer H of eH acts by
/// left translation, so orbits of G on the product correspond to H-orbits on
/// G/K and the isotropy of (eH, yK) is H ∩ yKy⁻¹.
pub fn multiply_generators_oracle(
    lattice: &SubgroupClassLattice,
    h: usize,
    k: usize,
) -> BurnsideElement {
    let g = lattice.group();
    let hs = lattice.rep(h);
    let ks = lattice.rep(k);
    let coset_key = |y: usize| -> usize {
        ks.elements
            .iter()
            .map(|&x| g.mul(y, x as usize))
            .min()
            .expect("non-empty")
    };
    let mut visited = ElemSet::empty(g.order());
    let mut out = BurnsideElement::zero();
    for y in 0..g.order() {
        let key = coset_key(y);
        if visited.contains(key) {
            continue;
        }
        for &x in &hs.elements {
            visited.insert(coset_key(g.mul(x as usize, y)));
        }
        let isotropy = hs.set.intersection(&conjugate_set(g, y, ks));
        let class = lattice
            .classify(&isotropy)
            .expect("intersection of subgroups is a subgroup");
        out.add_term(class, 1);
    }
    out
}

/// Oracle product of arbitrary elements.
pub fn multiply_oracle(
    lattice: &SubgroupClassLattice,
    a: &BurnsideElement,
    b: &BurnsideElement,
) -> BurnsideElement {
    let mut out = BurnsideElement::zero();
    for (h, x) in a.terms() {
        for (k, y) in b.terms() {
            for (l, z) in multiply_generators_oracle(lattice, h, k).terms() {
                out.add_term(l, x * y * z);
            }
        }
    }
    out
}

/// Full generator-pair multiplication table (upper triangle, h ≤ k) by recurrence.
pub fn multiplication_table(
    lattice: &SubgroupClassLattice,
    exec: Exec,
) -> Result<Vec<((usize, usize), BurnsideElement)>> {
    let pairs = generator_pairs(lattice);
    exec.map(&pairs, |&(h, k)| {
        multiply_generators(lattice, h, k).map(|p| ((h, k), p))
    })
    .into_iter()
    .collect()
}

/// Same table computed by orbit counting.
pub fn multiplication_table_oracle(
    lattice: &SubgroupClassLattice,
    exec: Exec,
) -> Vec<((usize, usize), BurnsideElement)> {
    let pairs = generator_pairs(lattice);
    exec.map(&pairs, |&(h, k)| {
        ((h, k), multiply_generators_oracle(lattice, h, k))
    })
}

fn generator_pairs(lattice: &SubgroupClassLattice) -> Vec<(usize, usize)> {
    let c = lattice.num_classes();
    (0..c).flat_map(|h| (h..c).map(move |k| (h, k))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::dihedral_group;

    #[test]
    fn unit_is_identity_in_d3() {
        let lat = SubgroupClassLattice::new(dihedral_group(3).unwrap()).unwrap();
        for h in 0..lat.num_classes() {
            assert_eq!(
                multiply_generators(&lat, 0, h).unwrap(),
                BurnsideElement::generator(h)
            );
        }
    }
}

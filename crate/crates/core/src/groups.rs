//! Finite groups given by Cayley tables, the dihedral groups D_N, the product
//! Γ' = Z₂×Z₂×D_N, subgroup enumeration and the lattice of subgroup classes.

use crate::error::{Error, Result};
use std::collections::HashMap;

/// Default cap on the group order accepted by [`enumerate_subgroups`].
pub const DEFAULT_SUBGROUP_CAP: usize = 200;

/// γ^r κ^s in D_N, acting on vertices by `i ↦ r + (−1)^s i (mod N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DihedralElement {
    pub rotation_index: u32,
    pub reflection: bool,
}

impl DihedralElement {
    pub const IDENTITY: DihedralElement = DihedralElement {
        rotation_index: 0,
        reflection: false,
    };

    pub fn rotation(r: i64, n: usize) -> Self {
        DihedralElement {
            rotation_index: r.rem_euclid(n as i64) as u32,
            reflection: false,
        }
    }

    /// κγ^r written as γ^{-r}κ.
    pub fn reflection_times_rotation(r: i64, n: usize) -> Self {
        DihedralElement {
            rotation_index: (-r).rem_euclid(n as i64) as u32,
            reflection: true,
        }
    }

    pub fn gamma(n: usize) -> Self {
        Self::rotation(1, n)
    }

    pub fn kappa() -> Self {
        DihedralElement {
            rotation_index: 0,
            reflection: true,
        }
    }

    pub fn mul(self, other: Self, n: usize) -> Self {
        let b = other.rotation_index as i64;
        let r = self.rotation_index as i64 + if self.reflection { -b } else { b };
        DihedralElement {
            rotation_index: r.rem_euclid(n as i64) as u32,
            reflection: self.reflection ^ other.reflection,
        }
    }

    pub fn inverse(self, n: usize) -> Self {
        if self.reflection {
            self
        } else {
            Self::rotation(-(self.rotation_index as i64), n)
        }
    }

    /// Image of vertex `i` under the permutation action.
    pub fn act(self, i: usize, n: usize) -> usize {
        let i = i as i64;
        let v = self.rotation_index as i64 + if self.reflection { -i } else { i };
        v.rem_euclid(n as i64) as usize
    }

    pub fn index(self, n: usize) -> usize {
        self.rotation_index as usize + if self.reflection { n } else { 0 }
    }

    pub fn from_index(idx: usize, n: usize) -> Self {
        DihedralElement {
            rotation_index: (idx % n) as u32,
            reflection: idx >= n,
        }
    }

    pub fn label(self) -> String {
        let rot = match self.rotation_index {
            0 => String::new(),
            1 => "g".to_string(),
            r => format!("g^{r}"),
        };
        match (rot.is_empty(), self.reflection) {
            (true, false) => "e".to_string(),
            (true, true) => "k".to_string(),
            (false, false) => rot,
            (false, true) => format!("{rot}k"),
        }
    }
}

/// (κ₁, κ₂, σ) ∈ Z₂×Z₂×D_N with signs stored as ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaPrimeElement {
    pub kappa1: i8,
    pub kappa2: i8,
    pub dihedral: DihedralElement,
}

impl GammaPrimeElement {
    pub fn new(kappa1: i8, kappa2: i8, dihedral: DihedralElement) -> Self {
        assert!(kappa1.abs() == 1 && kappa2.abs() == 1, "signs must be ±1");
        GammaPrimeElement {
            kappa1,
            kappa2,
            dihedral,
        }
    }

    pub fn identity() -> Self {
        Self::new(1, 1, DihedralElement::IDENTITY)
    }

    pub fn mul(self, other: Self, n: usize) -> Self {
        GammaPrimeElement {
            kappa1: self.kappa1 * other.kappa1,
            kappa2: self.kappa2 * other.kappa2,
            dihedral: self.dihedral.mul(other.dihedral, n),
        }
    }

    /// Index in the table built by [`gamma_prime`].
    pub fn index(self, n: usize) -> usize {
        let k = 2 * usize::from(self.kappa1 < 0) + usize::from(self.kappa2 < 0);
        k * 2 * n + self.dihedral.index(n)
    }

    pub fn from_index(idx: usize, n: usize) -> Self {
        let k = idx / (2 * n);
        GammaPrimeElement {
            kappa1: if k & 2 != 0 { -1 } else { 1 },
            kappa2: if k & 1 != 0 { -1 } else { 1 },
            dihedral: DihedralElement::from_index(idx % (2 * n), n),
        }
    }

    pub fn label(self) -> String {
        format!(
            "({},{},{})",
            self.kappa1,
            self.kappa2,
            self.dihedral.label()
        )
    }
}

/// A finite group presented by its multiplication table over dense indices.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<u32>,
    element_orders: Vec<u32>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Builds a group from a product function; validates the Latin-square property
    /// and the existence of an identity.
    pub fn from_fn(labels: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty group".into()));
        }
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let c = mul(a, b);
                if c >= n {
                    return Err(Error::InvalidInput(format!("product {a}*{b} out of range")));
                }
                table[a * n + b] = c as u32;
            }
        }
        Self::from_table(labels, table)
    }

    pub fn from_table(labels: Vec<String>, table: Vec<u32>) -> Result<Self> {
        let n = labels.len();
        if table.len() != n * n {
            return Err(Error::InvalidInput("table size mismatch".into()));
        }
        let mut seen = vec![false; n];
        for a in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                seen[table[a * n + b] as usize] = true;
            }
            if !seen.iter().all(|&s| s) {
                return Err(Error::InvalidInput(format!("row {a} is not a permutation")));
            }
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                seen[table[b * n + a] as usize] = true;
            }
            if !seen.iter().all(|&s| s) {
                return Err(Error::InvalidInput(format!(
                    "column {a} is not a permutation"
                )));
            }
        }
        let identity = (0..n)
            .find(|&e| {
                (0..n).all(|a| table[e * n + a] as usize == a && table[a * n + e] as usize == a)
            })
            .ok_or_else(|| Error::InvalidInput("no identity element".into()))?;
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| table[a * n + b] as usize == identity)
                .expect("Latin square has a right inverse");
            inverse[a] = b as u32;
        }
        let mut element_orders = vec![0u32; n];
        for (a, slot) in element_orders.iter_mut().enumerate() {
            let mut x = a;
            let mut k = 1;
            while x != identity {
                x = table[x * n + a] as usize;
                k += 1;
            }
            *slot = k;
        }
        Ok(FiniteGroup {
            order: n,
            table,
            identity,
            inverse,
            element_orders,
            labels,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.element_orders[a] as usize
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> usize {
        self.element_orders
            .iter()
            .fold(1usize, |acc, &o| num_integer::lcm(acc, o as usize))
    }

    /// g x g⁻¹.
    #[inline]
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Exhaustive associativity check; intended for small groups.
    pub fn is_associative(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.mul(a, b);
                (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        })
    }

    /// Elements commuting with everything.
    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }
}

/// D_N of order 2N; index r + N·s for γ^r κ^s.
pub fn dihedral_group(n: usize) -> Result<FiniteGroup> {
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "dihedral order N = {n} must be at least 3"
        )));
    }
    let labels = (0..2 * n)
        .map(|i| DihedralElement::from_index(i, n).label())
        .collect();
    FiniteGroup::from_fn(labels, |a, b| {
        DihedralElement::from_index(a, n)
            .mul(DihedralElement::from_index(b, n), n)
            .index(n)
    })
}

/// Γ' = Z₂×Z₂×D_N of order 8N, indexed as in [`GammaPrimeElement::index`].
pub fn gamma_prime(n: usize) -> Result<FiniteGroup> {
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "dihedral order N = {n} must be at least 3"
        )));
    }
    let labels = (0..8 * n)
        .map(|i| GammaPrimeElement::from_index(i, n).label())
        .collect();
    FiniteGroup::from_fn(labels, |a, b| {
        GammaPrimeElement::from_index(a, n)
            .mul(GammaPrimeElement::from_index(b, n), n)
            .index(n)
    })
}

/// Z_q with index = residue.
pub fn cyclic_group(q: usize) -> Result<FiniteGroup> {
    if q == 0 {
        return Err(Error::InvalidInput("cyclic group of order 0".into()));
    }
    let labels = (0..q).map(|i| format!("z{i}")).collect();
    FiniteGroup::from_fn(labels, |a, b| (a + b) % q)
}

/// A×B with index `a·|B| + b`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup> {
    let nb = b.order();
    let labels = (0..a.order() * nb)
        .map(|i| format!("[{} {}]", a.label(i / nb), b.label(i % nb)))
        .collect();
    FiniteGroup::from_fn(labels, |x, y| {
        a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
    })
}

/// Fixed-capacity bitset over element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElemSet {
    words: Vec<u64>,
}

impl ElemSet {
    pub fn empty(capacity: usize) -> Self {
        ElemSet {
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    pub fn from_elements(capacity: usize, elems: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(capacity);
        for e in elems {
            s.insert(e);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, e: usize) -> bool {
        let (w, b) = (e / 64, e % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        self.words[e / 64] & (1 << (e % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        ElemSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64)
                .filter(move |b| bits & (1u64 << b) != 0)
                .map(move |b| w * 64 + b)
        })
    }
}

/// A subgroup as a sorted element list plus a bitset and a generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: Vec<u32>,
    pub set: ElemSet,
    pub generators: Vec<u32>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.set.contains(g)
    }

    /// Position of `g` in the sorted element list.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&(g as u32)).ok()
    }

    fn from_set(set: ElemSet, generators: Vec<u32>) -> Self {
        let elements = set.iter().map(|e| e as u32).collect();
        Subgroup {
            elements,
            set,
            generators,
        }
    }
}

/// Subgroup generated by `gens`.
pub fn closure(group: &FiniteGroup, gens: &[usize]) -> Subgroup {
    let mut set = ElemSet::empty(group.order());
    let mut queue = vec![group.identity()];
    set.insert(group.identity());
    while let Some(x) = queue.pop() {
        for &g in gens {
            let y = group.mul(x, g);
            if set.insert(y) {
                queue.push(y);
            }
        }
    }
    let mut generators: Vec<u32> = gens.iter().map(|&g| g as u32).collect();
    generators.sort_unstable();
    generators.dedup();
    Subgroup::from_set(set, generators)
}

/// Conjugate subgroup g S g⁻¹ as a bitset.
pub fn conjugate_set(group: &FiniteGroup, g: usize, s: &Subgroup) -> ElemSet {
    ElemSet::from_elements(
        group.order(),
        s.elements.iter().map(|&x| group.conjugate(g, x as usize)),
    )
}

/// All subgroups, grown by adjoining one element at a time and deduplicated by
/// element set. Output is sorted by (order, element list).
pub fn enumerate_subgroups(group: &FiniteGroup, cap: usize) -> Result<Vec<Subgroup>> {
    if group.order() > cap {
        return Err(Error::TooLarge(format!(
            "group order {} exceeds subgroup-enumeration cap {cap}",
            group.order()
        )));
    }
    let trivial = closure(group, &[]);
    let mut index: HashMap<ElemSet, usize> = HashMap::new();
    index.insert(trivial.set.clone(), 0);
    let mut all = vec![trivial];
    let mut cursor = 0;
    while cursor < all.len() {
        let base = all[cursor].clone();
        for g in 0..group.order() {
            if base.contains(g) {
                continue;
            }
            let mut gens: Vec<usize> = base.generators.iter().map(|&x| x as usize).collect();
            gens.push(g);
            let next = closure(group, &gens);
            if !index.contains_key(&next.set) {
                index.insert(next.set.clone(), all.len());
                all.push(next);
            }
        }
        cursor += 1;
    }
    all.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.elements.cmp(&b.elements))
    });
    Ok(all)
}

/// One conjugacy class of subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    /// Index into [`SubgroupClassLattice::subgroups`] of the member with the
    /// lexicographically smallest element list.
    pub rep: usize,
    pub members: Vec<usize>,
    pub order: usize,
    pub normalizer_order: usize,
    pub weyl_order: usize,
}

/// Conjugacy classes of subgroups with the counting function n(H,K), Weyl orders
/// and a fixed total order: class id 0 is the whole group, ids grow as the
/// subgroup order decreases, ties broken by the canonical element list.
#[derive(Clone, Debug)]
pub struct SubgroupClassLattice {
    group: FiniteGroup,
    subgroups: Vec<Subgroup>,
    lookup: HashMap<ElemSet, usize>,
    classes: Vec<SubgroupClass>,
    class_of: Vec<usize>,
    to_rep: Vec<u32>,
    n_table: Vec<u32>,
}

impl SubgroupClassLattice {
    pub fn new(group: FiniteGroup) -> Result<Self> {
        Self::with_cap(group, DEFAULT_SUBGROUP_CAP)
    }

    pub fn with_cap(group: FiniteGroup, cap: usize) -> Result<Self> {
        let subgroups = enumerate_subgroups(&group, cap)?;
        let lookup: HashMap<ElemSet, usize> = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| (s.set.clone(), i))
            .collect();
        let mut class_of = vec![usize::MAX; subgroups.len()];
        let mut to_rep = vec![0u32; subgroups.len()];
        let mut raw: Vec<SubgroupClass> = Vec::new();
        for s in 0..subgroups.len() {
            if class_of[s] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..group.order())
                .map(|g| lookup[&conjugate_set(&group, g, &subgroups[s])])
                .collect();
            members.sort_unstable();
            members.dedup();
            let rep = *members
                .iter()
                .min_by(|&&a, &&b| subgroups[a].elements.cmp(&subgroups[b].elements))
                .expect("class is non-empty");
            for g in 0..group.order() {
                let m = lookup[&conjugate_set(&group, g, &subgroups[rep])];
                if class_of[m] == usize::MAX {
                    class_of[m] = raw.len();
                    to_rep[m] = group.inv(g) as u32;
                }
            }
            let order = subgroups[rep].order();
            let normalizer_order = group.order() / members.len();
            raw.push(SubgroupClass {
                rep,
                order,
                normalizer_order,
                weyl_order: normalizer_order / order,
                members,
            });
        }
        let mut perm: Vec<usize> = (0..raw.len()).collect();
        perm.sort_by(|&a, &b| {
            raw[b].order.cmp(&raw[a].order).then_with(|| {
                subgroups[raw[a].rep]
                    .elements
                    .cmp(&subgroups[raw[b].rep].elements)
            })
        });
        let mut new_id = vec![0; raw.len()];
        for (id, &old) in perm.iter().enumerate() {
            new_id[old] = id;
        }
        let classes: Vec<SubgroupClass> = perm.iter().map(|&old| raw[old].clone()).collect();
        for c in class_of.iter_mut() {
            *c = new_id[*c];
        }
        let nc = classes.len();
        let mut n_table = vec![0u32; nc * nc];
        for h in 0..nc {
            let hset = &subgroups[classes[h].rep].set;
            for k in 0..nc {
                if !classes[k].order.is_multiple_of(classes[h].order) {
                    continue;
                }
                n_table[h * nc + k] = classes[k]
                    .members
                    .iter()
                    .filter(|&&m| hset.is_subset(&subgroups[m].set))
                    .count() as u32;
            }
        }
        Ok(SubgroupClassLattice {
            group,
            subgroups,
            lookup,
            classes,
            class_of,
            to_rep,
            n_table,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class(&self, id: usize) -> &SubgroupClass {
        &self.classes[id]
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    /// Canonical representative subgroup of a class.
    pub fn rep(&self, id: usize) -> &Subgroup {
        &self.subgroups[self.classes[id].rep]
    }

    pub fn order(&self, id: usize) -> usize {
        self.classes[id].order
    }

    pub fn weyl(&self, id: usize) -> usize {
        self.classes[id].weyl_order
    }

    /// n(H,K): number of subgroups in (K) containing the representative of (H).
    #[inline]
    pub fn n(&self, h: usize, k: usize) -> u32 {
        self.n_table[h * self.classes.len() + k]
    }

    /// (H) ≤ (K) in the subconjugacy order.
    pub fn leq(&self, h: usize, k: usize) -> bool {
        self.n(h, k) > 0
    }

    /// n(L,H)·|W(H)| = |(G/H)^L|.
    #[inline]
    pub fn mark(&self, l: usize, h: usize) -> i64 {
        self.n(l, h) as i64 * self.weyl(h) as i64
    }

    pub fn subgroup_index(&self, set: &ElemSet) -> Option<usize> {
        self.lookup.get(set).copied()
    }

    pub fn class_of_subgroup(&self, subgroup_index: usize) -> usize {
        self.class_of[subgroup_index]
    }

    /// Class id of an arbitrary subgroup given by its element set.
    pub fn classify(&self, set: &ElemSet) -> Option<usize> {
        self.subgroup_index(set).map(|s| self.class_of[s])
    }

    /// Some g with g S g⁻¹ equal to the class representative.
    pub fn conjugator_to_rep(&self, subgroup_index: usize) -> usize {
        self.to_rep[subgroup_index] as usize
    }

    /// Subgroups (as indices) contained in `s`.
    pub fn subgroups_within(&self, s: &ElemSet) -> Vec<usize> {
        (0..self.subgroups.len())
            .filter(|&i| self.subgroups[i].set.is_subset(s))
            .collect()
    }

    /// Normalizer of the representative of class `id`.
    pub fn normalizer(&self, id: usize) -> Vec<usize> {
        let rep = self.rep(id);
        (0..self.group.order())
            .filter(|&g| conjugate_set(&self.group, g, rep) == rep.set)
            .collect()
    }

    /// Human-readable class name: generator labels of the representative.
    pub fn class_name(&self, id: usize) -> String {
        let rep = self.rep(id);
        if rep.order() == 1 {
            return "(1)".to_string();
        }
        let gens = minimal_generators(&self.group, rep);
        let labels: Vec<&str> = gens.iter().map(|&g| self.group.label(g)).collect();
        format!("<{}>", labels.join(","))
    }
}

/// Greedy generating set: smallest-index elements that enlarge the span.
pub fn minimal_generators(group: &FiniteGroup, s: &Subgroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = closure(group, &[]);
    for &e in &s.elements {
        if !span.contains(e as usize) {
            gens.push(e as usize);
            span = closure(group, &gens);
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_relations() {
        for n in 3..9 {
            let g = gamma_prime(n).unwrap();
            assert_eq!(g.order(), 8 * n);
            let gam = DihedralElement::gamma(n);
            let kap = DihedralElement::kappa();
            assert_eq!(kap.mul(gam, n).mul(kap, n), gam.inverse(n));
            for i in 0..n {
                let composed = gam.mul(kap, n).act(i, n);
                assert_eq!(composed, gam.act(kap.act(i, n), n));
            }
        }
    }

    #[test]
    fn round_trip_indices() {
        for n in 3..8 {
            for i in 0..8 * n {
                assert_eq!(GammaPrimeElement::from_index(i, n).index(n), i);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = gamma_prime(30).unwrap();
        assert!(matches!(
            enumerate_subgroups(&g, 200),
            Err(Error::TooLarge(_))
        ));
    }
}

//! Twisted subgroups K^{φ,l} = {(z,γ) ∈ S¹×K : φ(γ) = z^l} of G = S¹×Γ', their
//! conjugacy classes, the A(Γ')-module A₁ᵗ(G) and the s-folding map.
//!
//! A homomorphism φ: K → S¹ takes values in the E-th roots of unity, E the
//! exponent of Γ', and is stored as a table of residues mod E indexed by the
//! sorted element list of K. Conjugacy classes of pairs (K, φ) do not depend on
//! l, so an orbit type is a pair class id together with l.

use crate::error::{Error, Result};
use crate::groups::{
    conjugate_set, cyclic_group, direct_product, gamma_prime, minimal_generators, DihedralElement,
    ElemSet, FiniteGroup, GammaPrimeElement, Subgroup, SubgroupClassLattice,
};
use crate::turn::Turn;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

/// Element (θ, κ₁, κ₂, σ) of S¹×Γ' with θ an exact rational turn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GElement {
    pub theta: Turn,
    pub g: GammaPrimeElement,
}

impl GElement {
    pub fn new(theta: Turn, kappa1: i8, kappa2: i8, dihedral: DihedralElement) -> Self {
        GElement {
            theta,
            g: GammaPrimeElement::new(kappa1, kappa2, dihedral),
        }
    }

    pub fn identity() -> Self {
        GElement {
            theta: Turn::zero(),
            g: GammaPrimeElement::identity(),
        }
    }

    pub fn mul(&self, other: &GElement, n: usize) -> GElement {
        GElement {
            theta: self.theta + other.theta,
            g: self.g.mul(other.g, n),
        }
    }

    pub fn label(&self) -> String {
        format!(
            "({},{},{},{})",
            self.theta,
            self.g.kappa1,
            self.g.kappa2,
            self.g.dihedral.label()
        )
    }
}

impl Serialize for GElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

/// Orbit type of a twisted subgroup: pair class id and folding l (l = 0 is S¹×K).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TwistedOrbitType {
    pub pair: usize,
    pub l: u32,
}

/// Γ'-conjugacy class of pairs (K, φ).
#[derive(Clone, Debug)]
pub struct PairClass {
    /// Class of K in the subgroup lattice of Γ'.
    pub class: usize,
    /// φ on the sorted elements of the class representative, residues mod E.
    pub phi: Vec<u32>,
    /// Every conjugate pair as (subgroup index, φ table).
    pub members: Vec<(usize, Vec<u32>)>,
    /// |N(K,φ)| / |K|, equal to |W(K^{φ,l})/S¹| for every l ≥ 1.
    pub weyl_mod_circle: usize,
}

impl PairClass {
    pub fn is_trivial_phi(&self) -> bool {
        self.phi.iter().all(|&v| v == 0)
    }
}

/// Concrete twisted subgroup: subgroup index of K in the lattice, φ table, l.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedSubgroup {
    pub subgroup: usize,
    pub phi: Vec<u32>,
    pub l: u32,
}

/// Integer combination of twisted orbit types.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwistedSum {
    coeffs: BTreeMap<TwistedOrbitType, i64>,
}

impl TwistedSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(t: TwistedOrbitType) -> Self {
        Self::from_terms([(t, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (TwistedOrbitType, i64)>) -> Self {
        let mut s = Self::zero();
        for (t, v) in terms {
            s.add_term(t, v);
        }
        s
    }

    pub fn add_term(&mut self, t: TwistedOrbitType, v: i64) {
        if v == 0 {
            return;
        }
        let slot = self.coeffs.entry(t).or_insert(0);
        *slot += v;
        if *slot == 0 {
            self.coeffs.remove(&t);
        }
    }

    pub fn get(&self, t: TwistedOrbitType) -> i64 {
        self.coeffs.get(&t).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (TwistedOrbitType, i64)> + '_ {
        self.coeffs.iter().map(|(&t, &v)| (t, v))
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

    pub fn plus(&self, other: &TwistedSum) -> TwistedSum {
        let mut r = self.clone();
        for (t, v) in other.terms() {
            r.add_term(t, v);
        }
        r
    }

    pub fn scaled(&self, k: i64) -> TwistedSum {
        Self::from_terms(self.terms().map(|(t, v)| (t, v * k)))
    }
}

/// s-folding: (K^{φ,l}) ↦ (K^{φ,s·l}), the preimage under θ ↦ sθ.
pub fn fold(s: u32, a: &TwistedSum) -> TwistedSum {
    assert!(s >= 1, "folding factor must be positive");
    TwistedSum::from_terms(a.terms().map(|(t, v)| {
        (
            TwistedOrbitType {
                pair: t.pair,
                l: t.l * s,
            },
            v,
        )
    }))
}

/// All pair classes (K, φ) of Γ' with lookup and counting data.
#[derive(Clone, Debug)]
pub struct TwistedLattice {
    lattice: Arc<SubgroupClassLattice>,
    n: usize,
    exponent: u32,
    pairs: Vec<PairClass>,
    lookup: HashMap<(usize, Vec<u32>), usize>,
}

/// Homomorphisms K → Z_E as tables on the sorted elements of `k`.
pub fn homomorphisms(group: &FiniteGroup, k: &Subgroup, e: u32) -> Vec<Vec<u32>> {
    let gens = minimal_generators(group, k);
    let choices: Vec<Vec<u32>> = gens
        .iter()
        .map(|&g| {
            let o = group.element_order(g) as u32;
            (0..e).filter(|v| (v * o).is_multiple_of(e)).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut assignment = vec![0u32; gens.len()];
    let total: usize = choices.iter().map(|c| c.len()).product();
    for mut code in 0..total {
        for (i, c) in choices.iter().enumerate() {
            assignment[i] = c[code % c.len()];
            code /= c.len();
        }
        if let Some(t) = extend_hom(group, k, &gens, &assignment, e) {
            out.push(t);
        }
    }
    out.sort();
    out
}

fn extend_hom(
    group: &FiniteGroup,
    k: &Subgroup,
    gens: &[usize],
    values: &[u32],
    e: u32,
) -> Option<Vec<u32>> {
    let mut table = vec![u32::MAX; k.order()];
    let id = group.identity();
    table[k.position(id)?] = 0;
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        let vx = table[k.position(x)?];
        for (&g, &vg) in gens.iter().zip(values) {
            let y = group.mul(x, g);
            let py = k.position(y)?;
            let vy = (vx + vg) % e;
            if table[py] == u32::MAX {
                table[py] = vy;
                queue.push(y);
            } else if table[py] != vy {
                return None;
            }
        }
    }
    table.iter().all(|&v| v != u32::MAX).then_some(table)
}

impl TwistedLattice {
    /// Builds all pair classes over Γ' = Z₂×Z₂×D_N.
    pub fn new(lattice: Arc<SubgroupClassLattice>, n: usize) -> Result<Self> {
        let group = lattice.group();
        if group.order() != 8 * n {
            return Err(Error::InvalidInput("lattice is not over Z2xZ2xD_N".into()));
        }
        let exponent = group.exponent() as u32;
        let mut pairs = Vec::new();
        let mut lookup = HashMap::new();
        for c in 0..lattice.num_classes() {
            let rep = lattice.rep(c);
            let normalizer = lattice.normalizer(c);
            let homs = homomorphisms(group, rep, exponent);
            let mut local: Vec<PairClass> = Vec::new();
            let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
            for phi in &homs {
                if seen.contains_key(phi) {
                    continue;
                }
                let mut orbit: Vec<Vec<u32>> = Vec::new();
                let mut stab = 0usize;
                for &g in &normalizer {
                    let t = transport(group, rep, phi, g, rep);
                    if &t == phi {
                        stab += 1;
                    }
                    orbit.push(t);
                }
                orbit.sort();
                orbit.dedup();
                for t in &orbit {
                    seen.insert(t.clone(), ());
                }
                let canonical = orbit[0].clone();
                let mut members: Vec<(usize, Vec<u32>)> = Vec::new();
                for g in 0..group.order() {
                    let set = conjugate_set(group, g, rep);
                    let idx = lattice
                        .subgroup_index(&set)
                        .expect("conjugate is a subgroup");
                    let t = transport(group, rep, &canonical, g, &lattice.subgroups()[idx]);
                    members.push((idx, t));
                }
                members.sort();
                members.dedup();
                local.push(PairClass {
                    class: c,
                    phi: canonical,
                    members,
                    weyl_mod_circle: stab / rep.order(),
                });
                let _ = orbit;
            }
            local.sort_by(|a, b| a.phi.cmp(&b.phi));
            for pc in local {
                let id = pairs.len();
                for g in &normalizer {
                    lookup.insert((c, transport(group, rep, &pc.phi, *g, rep)), id);
                }
                pairs.push(pc);
            }
        }
        Ok(TwistedLattice {
            lattice,
            n,
            exponent,
            pairs,
            lookup,
        })
    }

    pub fn lattice(&self) -> &SubgroupClassLattice {
        &self.lattice
    }

    pub fn lattice_arc(&self) -> Arc<SubgroupClassLattice> {
        Arc::clone(&self.lattice)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// E: every φ value is a multiple of 1/E turn.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair(&self, id: usize) -> &PairClass {
        &self.pairs[id]
    }

    /// Pair id of (K, trivial φ) for a subgroup class.
    pub fn trivial_pair(&self, class: usize) -> usize {
        let zeros = vec![0u32; self.lattice.order(class)];
        self.lookup[&(class, zeros)]
    }

    /// Class of a concrete pair (subgroup index, φ table on its sorted elements).
    pub fn classify_pair(&self, subgroup: usize, phi: &[u32]) -> Result<usize> {
        let group = self.lattice.group();
        let s = &self.lattice.subgroups()[subgroup];
        if phi.len() != s.order() {
            return Err(Error::InvalidInput("phi table length mismatch".into()));
        }
        if !is_homomorphism(group, s, phi, self.exponent) {
            return Err(Error::InvalidInput("phi is not a homomorphism".into()));
        }
        let class = self.lattice.class_of_subgroup(subgroup);
        let g = self.lattice.conjugator_to_rep(subgroup);
        let rep = self.lattice.rep(class);
        let t = transport(group, s, phi, g, rep);
        self.lookup
            .get(&(class, t))
            .copied()
            .ok_or_else(|| Error::Inexact("pair class lookup failed".into()))
    }

    /// Canonical orbit type of a concrete twisted subgroup.
    pub fn canonicalize(&self, h: &TwistedSubgroup) -> Result<TwistedOrbitType> {
        if h.l == 0 && h.phi.iter().any(|&v| v != 0) {
            return Err(Error::InvalidInput("l = 0 requires trivial phi".into()));
        }
        Ok(TwistedOrbitType {
            pair: self.classify_pair(h.subgroup, &h.phi)?,
            l: h.l,
        })
    }

    /// Representative concrete subgroup of an orbit type.
    pub fn representative(&self, t: TwistedOrbitType) -> TwistedSubgroup {
        let p = &self.pairs[t.pair];
        TwistedSubgroup {
            subgroup: self.lattice.class(p.class).rep,
            phi: p.phi.clone(),
            l: t.l,
        }
    }

    /// Orbit type of the finite subgroup of S¹×Γ' with the given elements.
    pub fn classify_elements(&self, elements: &[GElement]) -> Result<TwistedOrbitType> {
        let n = self.n;
        let id = GammaPrimeElement::identity();
        let l = elements.iter().filter(|x| x.g == id).count() as u32;
        if l == 0 {
            return Err(Error::InvalidInput(
                "element list lacks the identity".into(),
            ));
        }
        let group = self.lattice.group();
        let set = ElemSet::from_elements(group.order(), elements.iter().map(|x| x.g.index(n)));
        let sub = self
            .lattice
            .subgroup_index(&set)
            .ok_or_else(|| Error::InvalidInput("projection is not a subgroup".into()))?;
        let s = &self.lattice.subgroups()[sub];
        let mut phi = vec![u32::MAX; s.order()];
        let e = self.exponent as i64;
        for x in elements {
            let v = x.theta.times(l as i64);
            let scaled = v.numer() * e;
            if scaled % v.denom() != 0 {
                return Err(Error::InvalidInput(format!(
                    "twisting value {v} is not a multiple of 1/{e}"
                )));
            }
            let val = (scaled / v.denom()).rem_euclid(e) as u32;
            let pos = s
                .position(x.g.index(n))
                .expect("projection contains element");
            if phi[pos] != u32::MAX && phi[pos] != val {
                return Err(Error::InvalidInput("subgroup is not twisted".into()));
            }
            phi[pos] = val;
        }
        if elements.len() != l as usize * s.order() {
            return Err(Error::InvalidInput(
                "subgroup is not of twisted form".into(),
            ));
        }
        self.canonicalize(&TwistedSubgroup {
            subgroup: sub,
            phi,
            l,
        })
    }

    /// |W(H)/S¹|.
    pub fn weyl_mod_circle(&self, t: TwistedOrbitType) -> usize {
        if t.l == 0 {
            self.lattice.weyl(self.pairs[t.pair].class)
        } else {
            self.pairs[t.pair].weyl_mod_circle
        }
    }

    /// Order of K.
    pub fn k_order(&self, t: TwistedOrbitType) -> usize {
        self.lattice.order(self.pairs[t.pair].class)
    }

    /// Concrete containment K^{φ,l} ≤ L^{ψ,l'}.
    pub fn contains(&self, small: &TwistedSubgroup, big: &TwistedSubgroup) -> bool {
        let subs = self.lattice.subgroups();
        let ks = &subs[small.subgroup];
        let ls = &subs[big.subgroup];
        if !ks.set.is_subset(&ls.set) {
            return false;
        }
        if big.l == 0 {
            return true;
        }
        if small.l == 0 || !big.l.is_multiple_of(small.l) {
            return false;
        }
        let ratio = big.l / small.l;
        ks.elements.iter().enumerate().all(|(pos, &g)| {
            let bpos = ls.position(g as usize).expect("subset");
            big.phi[bpos] == (small.phi[pos] * ratio) % self.exponent
        })
    }

    /// (H) ≤ (L) up to conjugacy.
    pub fn subconjugate(&self, h: TwistedOrbitType, l: TwistedOrbitType) -> bool {
        self.n_count(h, l) > 0
    }

    /// n(H, L): number of members of (L) containing the representative of (H).
    pub fn n_count(&self, h: TwistedOrbitType, l: TwistedOrbitType) -> u64 {
        let small = self.representative(h);
        let big_order = self.k_order(l);
        if !big_order.is_multiple_of(self.k_order(h)) {
            return 0;
        }
        self.pairs[l.pair]
            .members
            .iter()
            .filter(|(s, phi)| {
                self.contains(
                    &small,
                    &TwistedSubgroup {
                        subgroup: *s,
                        phi: phi.clone(),
                        l: l.l,
                    },
                )
            })
            .count() as u64
    }

    /// Product (K)·(H^{φ,l}) of a Γ'-class with a twisted orbit type.
    pub fn module_product_generators(&self, k: usize, h: TwistedOrbitType) -> Result<TwistedSum> {
        let hrep = self.representative(h);
        let subs = self.lattice.subgroups();
        let hs = &subs[hrep.subgroup];
        let mut candidates: Vec<TwistedOrbitType> = Vec::new();
        for s in self.lattice.subgroups_within(&hs.set) {
            if !self.lattice.leq(self.lattice.class_of_subgroup(s), k) {
                continue;
            }
            let phi: Vec<u32> = subs[s]
                .elements
                .iter()
                .map(|&g| hrep.phi[hs.position(g as usize).expect("subset")])
                .collect();
            candidates.push(TwistedOrbitType {
                pair: self.classify_pair(s, &phi)?,
                l: h.l,
            });
        }
        candidates.sort();
        candidates.dedup();
        let wh = self.weyl_mod_circle(h) as i64;
        let mut values: Vec<i64> = Vec::with_capacity(candidates.len());
        let mut out = TwistedSum::zero();
        for (pos, &lt) in candidates.iter().enumerate() {
            let lclass = self.pairs[lt.pair].class;
            let mut rhs = self.lattice.mark(lclass, k) * self.n_count(lt, h) as i64 * wh;
            for (prev, &pt) in candidates[..pos].iter().enumerate() {
                if values[prev] != 0 {
                    rhs -= values[prev]
                        * self.n_count(lt, pt) as i64
                        * self.weyl_mod_circle(pt) as i64;
                }
            }
            let w = self.weyl_mod_circle(lt) as i64;
            if rhs % w != 0 {
                return Err(Error::Inexact(format!(
                    "module recurrence: {rhs} not divisible by |W/S1| = {w}"
                )));
            }
            values.push(rhs / w);
            out.add_term(lt, rhs / w);
        }
        Ok(out)
    }

    /// Bilinear module product A(Γ') × A₁ᵗ(G) → A₁ᵗ(G).
    pub fn module_product(
        &self,
        a: &crate::burnside::BurnsideElement,
        b: &TwistedSum,
    ) -> Result<TwistedSum> {
        let mut out = TwistedSum::zero();
        for (k, x) in a.terms() {
            for (h, y) in b.terms() {
                for (l, z) in self.module_product_generators(k, h)?.terms() {
                    out.add_term(l, x * y * z);
                }
            }
        }
        Ok(out)
    }

    /// dim_R V^H for H = K^{φ,l} acting on W_m ⊗ V.
    pub fn fixed_dim(&self, v: &crate::reps::GIrrep, t: TwistedOrbitType) -> Result<usize> {
        let p = &self.pairs[t.pair];
        let rep = self.lattice.rep(p.class);
        let n = self.n;
        let elems: Vec<GammaPrimeElement> = rep
            .elements
            .iter()
            .map(|&g| GammaPrimeElement::from_index(g as usize, n))
            .collect();
        if t.l == 0 {
            if v.m > 0 {
                return Ok(0);
            }
            return crate::reps::fixed_dim_dressed(&v.dressed, &elems, n);
        }
        let (l, e, m) = (t.l as f64, self.exponent as f64, v.m as f64);
        let mut total = 0.0;
        for (pos, g) in elems.iter().enumerate() {
            let chi = v.dressed.character(*g, n);
            if chi == 0.0 {
                continue;
            }
            let base = p.phi[pos] as f64 / e;
            let circle: f64 = if v.m == 0 {
                l
            } else {
                (0..t.l)
                    .map(|r| 2.0 * (std::f64::consts::TAU * m * (base + r as f64) / l).cos())
                    .sum()
            };
            total += circle * chi;
        }
        let avg = total / (l * elems.len() as f64);
        let r = avg.round();
        if (avg - r).abs() > crate::reps::INTEGRALITY_TOL || r < 0.0 {
            return Err(Error::Inexact(format!(
                "fixed dimension {avg} is not integral"
            )));
        }
        Ok(r as usize)
    }

    /// Stable text form `[K-generators | phi on generators | l]`.
    pub fn type_label(&self, t: TwistedOrbitType) -> String {
        let p = &self.pairs[t.pair];
        let group = self.lattice.group();
        let rep = self.lattice.rep(p.class);
        let gens = minimal_generators(group, rep);
        let g_labels: Vec<String> = gens.iter().map(|&g| group.label(g).to_string()).collect();
        let phi_labels: Vec<String> = gens
            .iter()
            .map(|&g| {
                let v = p.phi[rep.position(g).expect("generator in subgroup")];
                Turn::new(v as i64, self.exponent as i64).to_string()
            })
            .collect();
        format!(
            "[{} | {} | {}]",
            g_labels.join(","),
            phi_labels.join(","),
            t.l
        )
    }

    /// All twisted types at level `l` with positive fixed dimension in `v`.
    pub fn types_with_fixed_points(
        &self,
        v: &crate::reps::GIrrep,
        l: u32,
    ) -> Result<Vec<(TwistedOrbitType, usize)>> {
        let mut out = Vec::new();
        for pair in 0..self.pairs.len() {
            let t = TwistedOrbitType { pair, l };
            let d = self.fixed_dim(v, t)?;
            if d > 0 {
                out.push((t, d));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TwistedOrbitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pair{}^{}", self.pair, self.l)
    }
}

/// φ transported along conjugation by g: on `target` = g S g⁻¹, x ↦ φ(g⁻¹ x g).
fn transport(
    group: &FiniteGroup,
    source: &Subgroup,
    phi: &[u32],
    g: usize,
    target: &Subgroup,
) -> Vec<u32> {
    let gi = group.inv(g);
    target
        .elements
        .iter()
        .map(|&x| {
            let y = group.conjugate(gi, x as usize);
            phi[source.position(y).expect("conjugate lies in source")]
        })
        .collect()
}

fn is_homomorphism(group: &FiniteGroup, s: &Subgroup, phi: &[u32], e: u32) -> bool {
    s.elements.iter().enumerate().all(|(i, &a)| {
        s.elements.iter().enumerate().all(|(j, &b)| {
            let c = group.mul(a as usize, b as usize);
            s.position(c)
                .map(|p| phi[p] == (phi[i] + phi[j]) % e)
                .unwrap_or(false)
        })
    })
}

/// The finite group Z_Q × Γ' in which twisted subgroups with angles in (1/Q)Z are
/// realized as ordinary subgroups. Index = z·|Γ'| + g.
pub struct CircleQuotient {
    pub q: usize,
    pub n: usize,
    pub group: FiniteGroup,
}

impl CircleQuotient {
    pub fn new(q: usize, n: usize) -> Result<Self> {
        let group = direct_product(&cyclic_group(q)?, &gamma_prime(n)?)?;
        Ok(CircleQuotient { q, n, group })
    }

    pub fn index(&self, z: usize, g: usize) -> usize {
        (z % self.q) * 8 * self.n + g
    }

    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / (8 * self.n), idx % (8 * self.n))
    }

    pub fn element(&self, idx: usize) -> GElement {
        let (z, g) = self.split(idx);
        GElement {
            theta: Turn::new(z as i64, self.q as i64),
            g: GammaPrimeElement::from_index(g, self.n),
        }
    }

    /// Element set of K^{φ,l} inside Z_Q × Γ'; requires l·E | Q for l ≥ 1.
    pub fn realize(&self, tl: &TwistedLattice, t: TwistedOrbitType) -> Result<ElemSet> {
        let e = tl.exponent() as usize;
        let rep = tl.representative(t);
        let k = &tl.lattice().subgroups()[rep.subgroup];
        let mut set = ElemSet::empty(self.group.order());
        if t.l == 0 {
            for z in 0..self.q {
                for &g in &k.elements {
                    set.insert(self.index(z, g as usize));
                }
            }
            return Ok(set);
        }
        let l = t.l as usize;
        if !self.q.is_multiple_of(l * e) {
            return Err(Error::InvalidInput(format!(
                "Q = {} not divisible by l·E = {}",
                self.q,
                l * e
            )));
        }
        for (pos, &g) in k.elements.iter().enumerate() {
            for z in 0..self.q {
                // l·z/Q ≡ φ/E (mod 1)
                if (l * z * e + self.q * e - rep.phi[pos] as usize * self.q)
                    .is_multiple_of(self.q * e)
                {
                    set.insert(self.index(z, g as usize));
                }
            }
        }
        Ok(set)
    }

    /// |N(H)| by brute force over all elements of Z_Q × Γ'.
    pub fn normalizer_order(&self, set: &ElemSet) -> usize {
        let elems: Vec<usize> = set.iter().collect();
        (0..self.group.order())
            .filter(|&g| {
                elems
                    .iter()
                    .all(|&x| set.contains(self.group.conjugate(g, x)))
            })
            .count()
    }

    /// |W(H)/S¹| computed as |N(H)| / |Z_Q·H| in the quotient.
    pub fn weyl_mod_circle(&self, set: &ElemSet) -> usize {
        let mut k = ElemSet::empty(8 * self.n);
        for x in set.iter() {
            k.insert(self.split(x).1);
        }
        self.normalizer_order(set) / (self.q * k.len())
    }

    /// Orbit type of a subgroup of Z_Q × Γ' assumed to be of twisted form.
    pub fn classify(&self, tl: &TwistedLattice, set: &ElemSet) -> Result<TwistedOrbitType> {
        let elems: Vec<GElement> = set.iter().map(|x| self.element(x)).collect();
        if elems
            .iter()
            .filter(|x| x.g == GammaPrimeElement::identity())
            .count()
            == self.q
        {
            let gset = ElemSet::from_elements(8 * self.n, set.iter().map(|x| self.split(x).1));
            let class = tl
                .lattice()
                .classify(&gset)
                .ok_or_else(|| Error::InvalidInput("projection is not a subgroup".into()))?;
            return Ok(TwistedOrbitType {
                pair: tl.trivial_pair(class),
                l: 0,
            });
        }
        tl.classify_elements(&elems)
    }
}

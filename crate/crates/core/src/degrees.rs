//! Basic degrees in A(Γ'), twisted basic degrees in A₁ᵗ(S¹×Γ') and degrees of
//! linear isomorphisms.

use crate::burnside::{multiply, BurnsideElement};
use crate::error::{Error, Result};
use crate::groups::{GammaPrimeElement, SubgroupClassLattice};
use crate::reps::{fixed_dim_dressed, DressedIrrep, GIrrep};
use crate::twisted::{TwistedLattice, TwistedOrbitType, TwistedSum};

/// dim V^H for the representative of every class.
pub fn class_fixed_dims(
    lattice: &SubgroupClassLattice,
    v: &DressedIrrep,
    n: usize,
) -> Result<Vec<usize>> {
    (0..lattice.num_classes())
        .map(|c| {
            let elems: Vec<GammaPrimeElement> = lattice
                .rep(c)
                .elements
                .iter()
                .map(|&g| GammaPrimeElement::from_index(g as usize, n))
                .collect();
            fixed_dim_dressed(v, &elems, n)
        })
        .collect()
}

/// deg_V = Σ n_H (H) with n_H = ((−1)^{dim V^H} − Σ_{(K)>(H)} n_K n(H,K)|W(K)|)/|W(H)|.
pub fn basic_degree(
    lattice: &SubgroupClassLattice,
    v: &DressedIrrep,
    n: usize,
) -> Result<BurnsideElement> {
    v.base.validate(n)?;
    let dims = class_fixed_dims(lattice, v, n)?;
    let mut values = vec![0i64; lattice.num_classes()];
    for h in 0..lattice.num_classes() {
        let mut rhs: i64 = if dims[h] % 2 == 0 { 1 } else { -1 };
        for (k, &v) in values.iter().enumerate().take(h) {
            if v != 0 {
                rhs -= v * lattice.mark(h, k);
            }
        }
        let w = lattice.weyl(h) as i64;
        if rhs % w != 0 {
            return Err(Error::Inexact(format!(
                "basic degree: {rhs} not divisible by |W| = {w}"
            )));
        }
        values[h] = rhs / w;
    }
    Ok(BurnsideElement::from_terms(values.into_iter().enumerate()))
}

/// Twisted types at level m with positive fixed dimension, with those dimensions.
pub fn twisted_candidates(
    tl: &TwistedLattice,
    v: &GIrrep,
) -> Result<Vec<(TwistedOrbitType, usize)>> {
    if v.m == 0 {
        return Err(Error::InvalidInput("twisted degrees need m ≥ 1".into()));
    }
    v.dressed.base.validate(tl.n())?;
    tl.types_with_fixed_points(v, v.m)
}

/// deg_V = Σ n_H (H) with n_H = (½dim V^H − Σ_{(L)>(H)} n_L n(H,L)|W(L)/S¹|)/|W(H)/S¹|.
pub fn twisted_basic_degree(tl: &TwistedLattice, v: &GIrrep) -> Result<TwistedSum> {
    let cands = twisted_candidates(tl, v)?;
    let mut values: Vec<i64> = Vec::with_capacity(cands.len());
    let mut out = TwistedSum::zero();
    for (pos, &(h, d)) in cands.iter().enumerate() {
        if d % 2 != 0 {
            return Err(Error::Inexact(format!(
                "odd fixed dimension {d} in a complex representation"
            )));
        }
        let mut rhs = (d / 2) as i64;
        for (prev, &(l, _)) in cands[..pos].iter().enumerate() {
            if values[prev] != 0 {
                rhs -= values[prev] * tl.n_count(h, l) as i64 * tl.weyl_mod_circle(l) as i64;
            }
        }
        let w = tl.weyl_mod_circle(h) as i64;
        if rhs % w != 0 {
            return Err(Error::Inexact(format!(
                "twisted degree: {rhs} not divisible by |W/S1| = {w}"
            )));
        }
        values.push(rhs / w);
        out.add_term(h, rhs / w);
    }
    Ok(out)
}

/// Maximal elements among the twisted types with positive fixed dimension.
pub fn maximal_kind_types(tl: &TwistedLattice, v: &GIrrep) -> Result<Vec<TwistedOrbitType>> {
    let cands = twisted_candidates(tl, v)?;
    Ok(cands
        .iter()
        .filter(|&&(h, _)| !cands.iter().any(|&(l, _)| l != h && tl.subconjugate(h, l)))
        .map(|&(h, _)| h)
        .collect())
}

/// Degree of a linear isomorphism whose negative spectrum meets the isotypic
/// component of each listed irrep with the given multiplicity.
pub fn linear_iso_degree(
    lattice: &SubgroupClassLattice,
    negative: &[(DressedIrrep, usize)],
    n: usize,
) -> Result<BurnsideElement> {
    let mut out = BurnsideElement::unit();
    for (v, mult) in negative {
        let deg = basic_degree(lattice, v, n)?;
        for _ in 0..*mult {
            out = multiply(lattice, &out, &deg)?;
        }
    }
    Ok(out)
}

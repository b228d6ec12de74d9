//! Local and H-fixed bifurcation invariants, maximal orbit-type generators,
//! symmetry relations and branch predictions.

use crate::burnside::{multiply, BurnsideElement};
use crate::context::SymmetryContext;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::groups::{DihedralElement, GammaPrimeElement};
use crate::reps::{fixed_dim, generate, isotypic_irrep, DressedIrrep, GIrrep};
use crate::spectrum::{
    enumerate_critical_points, group_by_point, index_sets, rho, IndexQuad, ModelParams,
    NegativeIndex, Tolerances, Window,
};
use crate::turn::Turn;
use crate::twisted::{GElement, TwistedLattice, TwistedOrbitType, TwistedSum};
use num_integer::Integer;
use serde::{Serialize, Serializer};

/// Version of the prediction JSON layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Dressing bit attached to spatial mode n: 1 for odd n.
pub fn dressing(n: u32) -> u8 {
    (n % 2) as u8
}

/// V_j^{[2∤n]} as a Γ'-irrep.
pub fn dressed_irrep(j: usize, n: u32, nn: usize) -> Result<DressedIrrep> {
    Ok(DressedIrrep::new(isotypic_irrep(j, nn)?, dressing(n)))
}

/// W_m ⊗ V_j^{[2∤n]}.
pub fn g_irrep(m: u32, n: u32, j: usize, nn: usize) -> Result<GIrrep> {
    Ok(GIrrep::new(m, dressed_irrep(j, n, nn)?))
}

/// Maximal orbit-type family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BranchKind {
    H,
    S,
    T,
}

impl BranchKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "H" | "h" => Ok(BranchKind::H),
            "S" | "s" => Ok(BranchKind::S),
            "T" | "t" => Ok(BranchKind::T),
            other => Err(Error::InvalidInput(format!(
                "unknown branch kind {other:?}"
            ))),
        }
    }
}

/// Ñ = N/gcd(N,j), j̃ = j/gcd(N,j) and h = j̃⁻¹ mod Ñ.
pub fn modular_data(nn: usize, j: usize) -> Result<(usize, usize, usize)> {
    if j == 0 || 2 * j >= nn {
        return Err(Error::InvalidInput(format!(
            "modular data needs 0 < j < N/2, got j = {j}"
        )));
    }
    let g = nn.gcd(&j);
    let (nt, jt) = (nn / g, j / g);
    let e = (jt as i64).extended_gcd(&(nt as i64));
    let h = e.x.rem_euclid(nt as i64) as usize;
    Ok((nt, jt, h))
}

fn gel(theta: Turn, k1: i8, k2: i8, d: DihedralElement) -> GElement {
    GElement {
        theta,
        g: GammaPrimeElement::new(k1, k2, d),
    }
}

/// Generators of the maximal orbit types of W_m ⊗ V_j^{[2∤n]}, keyed by kind.
///
/// The rotation generator of H for 0 < j < N/2 carries the angle −j/(Nm) turn and
/// H for j = N/2 also contains κ.
pub fn maximal_orbit_generators(
    nn: usize,
    m: u32,
    n: u32,
    j: usize,
) -> Result<Vec<(BranchKind, Vec<GElement>)>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("need m ≥ 1 and n ≥ 1".into()));
    }
    isotypic_irrep(j, nn)?;
    let half = Turn::new(1, 2 * m as i64);
    let zero = Turn::zero();
    let e = DihedralElement::IDENTITY;
    let gamma = DihedralElement::gamma(nn);
    let kappa = DihedralElement::kappa();
    let parity: i8 = if n.is_multiple_of(2) { 1 } else { -1 };
    let common = vec![gel(half, -1, 1, e), gel(zero, parity, -1, e)];
    let with = |extra: Vec<GElement>| {
        let mut v = common.clone();
        v.extend(extra);
        v
    };
    let mut out = Vec::new();
    if j == 0 {
        out.push((
            BranchKind::H,
            with(vec![gel(zero, 1, 1, gamma), gel(zero, 1, 1, kappa)]),
        ));
    } else if 2 * j == nn {
        out.push((
            BranchKind::H,
            with(vec![gel(half, 1, 1, gamma), gel(zero, 1, 1, kappa)]),
        ));
    } else {
        let shift = Turn::new(-(j as i64), (nn as i64) * m as i64);
        out.push((BranchKind::H, with(vec![gel(shift, 1, 1, gamma)])));
        let (nt, _, h) = modular_data(nn, j)?;
        if nt % 2 == 1 {
            let rot = DihedralElement::rotation(nt as i64, nn);
            out.push((
                BranchKind::S,
                with(vec![gel(zero, 1, 1, kappa), gel(zero, 1, 1, rot)]),
            ));
            out.push((
                BranchKind::T,
                with(vec![gel(half, 1, 1, kappa), gel(zero, 1, 1, rot)]),
            ));
        } else {
            let rot = DihedralElement::rotation((nt / 2 * h) as i64, nn);
            let kg = DihedralElement::reflection_times_rotation(h as i64, nn);
            out.push((
                BranchKind::S,
                with(vec![gel(zero, 1, 1, kappa), gel(half, 1, 1, rot)]),
            ));
            out.push((
                BranchKind::T,
                with(vec![gel(zero, 1, 1, kg), gel(half, 1, 1, rot)]),
            ));
        }
    }
    let v = g_irrep(m, n, j, nn)?;
    for (kind, gens) in &out {
        if fixed_dim(&v, gens, nn)? == 0 {
            return Err(Error::Inexact(format!(
                "{kind:?} generators fix no vector of {}",
                v.label()
            )));
        }
    }
    Ok(out)
}

/// Orbit type of the subgroup generated by `gens`.
pub fn orbit_type_of(tl: &TwistedLattice, gens: &[GElement]) -> Result<TwistedOrbitType> {
    tl.classify_elements(&generate(gens, tl.n())?)
}

fn ser_turn<S: Serializer>(t: &Turn, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

fn ser_dihedral<S: Serializer>(d: &DihedralElement, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&d.label())
}

/// Checkable relation sign·u_{σ(i)}(t + 2π·shift, ±x) = u_i(t, x), x negated when `reflect_x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryRelation {
    #[serde(serialize_with = "ser_turn")]
    pub shift: Turn,
    pub sign: i8,
    pub reflect_x: bool,
    #[serde(serialize_with = "ser_dihedral")]
    pub perm: DihedralElement,
    pub text: String,
}

impl SymmetryRelation {
    /// Relation expressing invariance under one group element.
    pub fn from_element(g: &GElement) -> Self {
        let sign = g.g.kappa1 * g.g.kappa2;
        let reflect_x = g.g.kappa2 < 0;
        let perm = g.g.dihedral;
        let idx = if perm == DihedralElement::IDENTITY {
            "i".to_string()
        } else {
            format!("{}(i)", perm.label())
        };
        let t = if g.theta.is_zero() {
            "t".to_string()
        } else {
            format!("t + 2pi*{}", g.theta)
        };
        let x = if reflect_x { "-x" } else { "x" };
        let s = if sign < 0 { "-" } else { "" };
        SymmetryRelation {
            shift: g.theta,
            sign,
            reflect_x,
            perm,
            text: format!("u_i(t, x) = {s}u_{idx}({t}, {x})"),
        }
    }
}

/// Relations characterizing functions with isotropy at least the given kind.
pub fn symmetry_relations(
    kind: BranchKind,
    nn: usize,
    m: u32,
    n: u32,
    j: usize,
) -> Result<Vec<SymmetryRelation>> {
    let gens = maximal_orbit_generators(nn, m, n, j)?;
    let (_, g) = gens
        .into_iter()
        .find(|(k, _)| *k == kind)
        .ok_or_else(|| Error::InvalidInput(format!("kind {kind:?} does not occur for j = {j}")))?;
    Ok(relations_of(&g))
}

fn relations_of(gens: &[GElement]) -> Vec<SymmetryRelation> {
    gens.iter()
        .filter(|e| **e != GElement::identity())
        .map(SymmetryRelation::from_element)
        .collect()
}

/// ω(λ₀) with its ingredients.
#[derive(Clone, Debug, PartialEq)]
pub struct BifurcationInvariant {
    pub value: TwistedSum,
    pub contributions: Vec<(IndexQuad, i8)>,
    /// Π over the negative spectrum; absent in H-fixed mode.
    pub negative_factor: Option<BurnsideElement>,
    pub negative: Vec<NegativeIndex>,
}

/// One (orbit type, coefficient) pair in text form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantTerm {
    pub orbit_type: String,
    pub coeff: i64,
}

impl BifurcationInvariant {
    pub fn terms(&self, tl: &TwistedLattice) -> Vec<InvariantTerm> {
        self.value
            .terms()
            .map(|(t, c)| InvariantTerm {
                orbit_type: tl.type_label(t),
                coeff: c,
            })
            .collect()
    }
}

fn null_sum(
    ctx: &SymmetryContext,
    params: &ModelParams,
    alpha: f64,
    null: &[IndexQuad],
) -> Result<(TwistedSum, Vec<(IndexQuad, i8)>)> {
    let mut sum = TwistedSum::zero();
    let mut contributions = Vec::new();
    for &q in null {
        let r = rho(q, alpha, params)?;
        let deg = ctx.twisted_basic_degree(&g_irrep(q.m, q.n, q.j, params.n)?)?;
        sum = sum.plus(&deg.scaled(r as i64));
        contributions.push((q, r));
    }
    Ok((sum, contributions))
}

fn check_context(ctx: &SymmetryContext, params: &ModelParams) -> Result<()> {
    if ctx.n() != params.n {
        return Err(Error::InvalidInput(format!(
            "context built for N = {}, model has N = {}",
            ctx.n(),
            params.n
        )));
    }
    Ok(())
}

/// ω = Π_{Σ₋} deg_{V_j^{[2∤n]}} · Σ_{Σ₀} ρ·deg_{W_m⊗V_j^{[2∤n]}}.
pub fn local_invariant(
    ctx: &SymmetryContext,
    params: &ModelParams,
    alpha: f64,
    beta: f64,
    window: Window,
) -> Result<BifurcationInvariant> {
    check_context(ctx, params)?;
    let sets = index_sets(alpha, beta, params, window, false)?;
    if !sets.b1_holds {
        return Err(Error::Degenerate(
            "a zero eigenvalue at m = 0 violates condition B1".into(),
        ));
    }
    let mut factor = BurnsideElement::unit();
    for neg in &sets.negative {
        let deg = ctx.basic_degree(&dressed_irrep(neg.j, neg.n, params.n)?)?;
        factor = multiply(ctx.lattice(), &factor, &deg)?;
    }
    let (sum, contributions) = null_sum(ctx, params, alpha, &sets.null)?;
    let value = ctx.twisted().module_product(&factor, &sum)?;
    Ok(BifurcationInvariant {
        value,
        contributions,
        negative_factor: Some(factor),
        negative: sets.negative,
    })
}

/// ω^H = Σ_{Σ₀^H} ρ·deg_{W_m⊗V_j^{[2∤n]}} over odd m.
pub fn h_fixed_invariant(
    ctx: &SymmetryContext,
    params: &ModelParams,
    alpha: f64,
    beta: f64,
    window: Window,
) -> Result<BifurcationInvariant> {
    check_context(ctx, params)?;
    let sets = index_sets(alpha, beta, params, window, true)?;
    let (value, contributions) = null_sum(ctx, params, alpha, &sets.null)?;
    Ok(BifurcationInvariant {
        value,
        contributions,
        negative_factor: None,
        negative: Vec::new(),
    })
}

/// Local (Σ₋ factor, all foldings) or global (H-fixed, odd foldings) predictions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Local,
    Global,
}

/// One predicted branch.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchPrediction {
    pub kind: BranchKind,
    pub generators: Vec<GElement>,
    pub orbit_type: String,
    pub coeff: i64,
    pub unbounded: bool,
    pub non_stationary: bool,
    pub relations: Vec<SymmetryRelation>,
}

/// Report for one critical quadruple.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalPointReport {
    pub m: u32,
    pub n: u32,
    pub j: usize,
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub rho: i8,
    pub invariant: Vec<InvariantTerm>,
    pub branches: Vec<BranchPrediction>,
    pub diagnostics: Vec<String>,
}

/// Complete prediction output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PredictionReport {
    pub schema_version: u32,
    pub mode: Mode,
    pub params: ModelParams,
    pub window: Window,
    pub tolerances: Tolerances,
    pub critical_points: Vec<CriticalPointReport>,
}

/// Branch predictions at every critical point of the window.
pub fn predict_branches(
    ctx: &SymmetryContext,
    params: &ModelParams,
    window: Window,
    mode: Mode,
    exec: Exec,
) -> Result<PredictionReport> {
    check_context(ctx, params)?;
    let points = enumerate_critical_points(params, window, exec)?;
    let groups = group_by_point(&points, params.tolerances.merge);
    let per_group = exec.map(&groups, |group| {
        predict_at_point(ctx, params, window, mode, group)
    });
    let mut critical_points = Vec::new();
    for r in per_group {
        critical_points.extend(r?);
    }
    critical_points.sort_by_key(|a| (a.m, a.n, a.j, a.k));
    Ok(PredictionReport {
        schema_version: SCHEMA_VERSION,
        mode,
        params: params.clone(),
        window,
        tolerances: params.tolerances,
        critical_points,
    })
}

fn predict_at_point(
    ctx: &SymmetryContext,
    params: &ModelParams,
    window: Window,
    mode: Mode,
    group: &[crate::spectrum::CriticalPoint],
) -> Result<Vec<CriticalPointReport>> {
    let (alpha, beta) = (group[0].alpha, group[0].beta);
    let global = mode == Mode::Global;
    let mut diagnostics = Vec::new();
    let invariant = if global {
        Some(h_fixed_invariant(ctx, params, alpha, beta, window)?)
    } else {
        match local_invariant(ctx, params, alpha, beta, window) {
            Ok(inv) => Some(inv),
            Err(Error::Degenerate(msg)) => {
                diagnostics.push(format!("invariant refused: {msg}"));
                None
            }
            Err(e) => return Err(e),
        }
    };
    let mut mixed_slices = Vec::new();
    if let Some(inv) = &invariant {
        let mut by_m: std::collections::BTreeMap<u32, Vec<i8>> = Default::default();
        for (q, r) in &inv.contributions {
            by_m.entry(q.m).or_default().push(*r);
        }
        for (m, signs) in by_m {
            if signs.iter().any(|&s| s != signs[0]) || signs[0] == 0 {
                mixed_slices.push(m);
            }
        }
    }
    let tl = ctx.twisted();
    let terms = invariant
        .as_ref()
        .map(|inv| inv.terms(tl))
        .unwrap_or_default();
    let mut out = Vec::new();
    for cp in group {
        let q = cp.quad;
        let mut branches = Vec::new();
        let mut diag = diagnostics.clone();
        if global && q.m % 2 == 0 {
            diag.push("even folding: no H-fixed prediction".into());
        } else if global && mixed_slices.contains(&q.m) {
            diag.push(format!(
                "winding signs differ within the folding slice m = {}",
                q.m
            ));
        } else if let Some(inv) = &invariant {
            for (kind, gens) in maximal_orbit_generators(params.n, q.m, q.n, q.j)? {
                let t = orbit_type_of(tl, &gens)?;
                let coeff = inv.value.get(t);
                if coeff != 0 {
                    branches.push(BranchPrediction {
                        kind,
                        relations: relations_of(&gens),
                        generators: gens,
                        orbit_type: tl.type_label(t),
                        coeff,
                        unbounded: global,
                        non_stationary: global,
                    });
                }
            }
        }
        out.push(CriticalPointReport {
            m: q.m,
            n: q.n,
            j: q.j,
            k: q.k,
            alpha: cp.alpha,
            beta: cp.beta,
            rho: cp.rho,
            invariant: terms.clone(),
            branches,
            diagnostics: diag,
        });
    }
    Ok(out)
}

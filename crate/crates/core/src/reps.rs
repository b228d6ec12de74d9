//! Real irreducible representations of D_N and of Γ' = Z₂×Z₂×D_N, the S¹-folded
//! representations W_m ⊗ V, fixed-point dimensions and cycle-Laplacian eigendata.

use crate::error::{Error, Result};
use crate::groups::{DihedralElement, GammaPrimeElement};
use crate::twisted::GElement;
use nalgebra::DMatrix;
use serde::Serialize;
use std::collections::HashSet;
use std::f64::consts::TAU;

/// Tolerance used when rounding averaged characters to integers.
pub const INTEGRALITY_TOL: f64 = 1e-9;

/// Real irreducible representation of D_N.
///
/// `Half` is the alternating component of the permutation representation
/// (γ ↦ −1, κ ↦ 1, even N); `Sign` sends rotations to 1 and reflections to −1;
/// `SignSign` (even N) sends both generators to −1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DihedralIrrep {
    Trivial,
    Geometric(u32),
    Half,
    Sign,
    SignSign,
}

impl DihedralIrrep {
    pub fn dim(self) -> usize {
        match self {
            DihedralIrrep::Geometric(_) => 2,
            _ => 1,
        }
    }

    pub fn validate(self, n: usize) -> Result<()> {
        let ok = match self {
            DihedralIrrep::Geometric(j) => j >= 1 && (j as usize) < n.div_ceil(2),
            DihedralIrrep::Half | DihedralIrrep::SignSign => n.is_multiple_of(2),
            _ => true,
        };
        if n < 3 || !ok {
            return Err(Error::InvalidInput(format!(
                "{self:?} is not an irrep of D_{n}"
            )));
        }
        Ok(())
    }

    /// Matrix of σ; 1×1 for one-dimensional irreps.
    pub fn matrix(self, s: DihedralElement, n: usize) -> DMatrix<f64> {
        let r = s.rotation_index as f64;
        let refl = if s.reflection { -1.0 } else { 1.0 };
        let parity = |k: u32| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        match self {
            DihedralIrrep::Trivial => DMatrix::from_element(1, 1, 1.0),
            DihedralIrrep::Half => DMatrix::from_element(1, 1, parity(s.rotation_index)),
            DihedralIrrep::Sign => DMatrix::from_element(1, 1, refl),
            DihedralIrrep::SignSign => DMatrix::from_element(1, 1, parity(s.rotation_index) * refl),
            DihedralIrrep::Geometric(j) => {
                let a = TAU * j as f64 * r / n as f64;
                let (sn, cs) = a.sin_cos();
                // γ^r κ^s ↦ R(a)·diag(1, −1)^s
                DMatrix::from_row_slice(2, 2, &[cs, -sn * refl, sn, cs * refl])
            }
        }
    }

    pub fn character(self, s: DihedralElement, n: usize) -> f64 {
        match self {
            DihedralIrrep::Geometric(j) => {
                if s.reflection {
                    0.0
                } else {
                    2.0 * (TAU * j as f64 * s.rotation_index as f64 / n as f64).cos()
                }
            }
            _ => self.matrix(s, n)[(0, 0)],
        }
    }

    pub fn label(self) -> String {
        match self {
            DihedralIrrep::Trivial => "chi_0".into(),
            DihedralIrrep::Geometric(j) => format!("chi_{j}"),
            DihedralIrrep::Half => "chi_half".into(),
            DihedralIrrep::Sign => "chi_*".into(),
            DihedralIrrep::SignSign => "chi_**".into(),
        }
    }
}

/// Irrep carried by the isotypic index `j` of the permutation representation.
pub fn isotypic_irrep(j: usize, n: usize) -> Result<DihedralIrrep> {
    if n < 3 || 2 * j > n {
        return Err(Error::InvalidInput(format!(
            "isotypic index {j} out of range for N = {n}"
        )));
    }
    Ok(if j == 0 {
        DihedralIrrep::Trivial
    } else if 2 * j == n {
        DihedralIrrep::Half
    } else {
        DihedralIrrep::Geometric(j as u32)
    })
}

/// All real irreps of D_N.
pub fn character_table(n: usize) -> Vec<DihedralIrrep> {
    let mut out = vec![DihedralIrrep::Trivial];
    out.extend((1..n.div_ceil(2)).map(|j| DihedralIrrep::Geometric(j as u32)));
    if n.is_multiple_of(2) {
        out.push(DihedralIrrep::Half);
    }
    out.push(DihedralIrrep::Sign);
    if n.is_multiple_of(2) {
        out.push(DihedralIrrep::SignSign);
    }
    out
}

/// Character of the permutation representation on R^N: number of fixed vertices.
pub fn permutation_character(s: DihedralElement, n: usize) -> f64 {
    (0..n).filter(|&i| s.act(i, n) == i).count() as f64
}

/// Inner product ⟨χ_a, χ_b⟩ over D_N for real characters.
pub fn character_inner_product(
    n: usize,
    a: impl Fn(DihedralElement) -> f64,
    b: impl Fn(DihedralElement) -> f64,
) -> f64 {
    let total: f64 = (0..2 * n)
        .map(|i| {
            let s = DihedralElement::from_index(i, n);
            a(s) * b(s)
        })
        .sum();
    total / (2 * n) as f64
}

/// Irreps occurring in the permutation representation with their multiplicities.
pub fn permutation_isotypic(n: usize) -> Vec<(DihedralIrrep, usize)> {
    character_table(n)
        .into_iter()
        .filter_map(|irr| {
            let m = character_inner_product(
                n,
                |s| permutation_character(s, n),
                |s| irr.character(s, n),
            );
            let m = m.round() as usize;
            (m > 0).then_some((irr, m))
        })
        .collect()
}

/// V_j^i: κ₁ acts by −1, κ₂ by (−1)^i, D_N through `base`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DressedIrrep {
    pub base: DihedralIrrep,
    pub dressing: u8,
}

impl DressedIrrep {
    pub fn new(base: DihedralIrrep, dressing: u8) -> Self {
        assert!(dressing <= 1, "dressing bit is 0 or 1");
        DressedIrrep { base, dressing }
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    fn scalar(&self, g: GammaPrimeElement) -> f64 {
        let k2 = if self.dressing == 1 { g.kappa2 } else { 1 };
        (g.kappa1 * k2) as f64
    }

    pub fn character(&self, g: GammaPrimeElement, n: usize) -> f64 {
        self.scalar(g) * self.base.character(g.dihedral, n)
    }

    pub fn matrix(&self, g: GammaPrimeElement, n: usize) -> DMatrix<f64> {
        self.base.matrix(g.dihedral, n) * self.scalar(g)
    }

    pub fn label(&self) -> String {
        format!("{}^{}", self.base.label(), self.dressing)
    }
}

/// W_m ⊗ V: S¹ acts on the W_m factor by θ ↦ e^{imθ}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GIrrep {
    pub m: u32,
    pub dressed: DressedIrrep,
}

impl GIrrep {
    pub fn new(m: u32, dressed: DressedIrrep) -> Self {
        GIrrep { m, dressed }
    }

    pub fn dim(&self) -> usize {
        self.dressed.dim() * if self.m == 0 { 1 } else { 2 }
    }

    /// Real character at (θ, g).
    pub fn character(&self, x: &GElement, n: usize) -> f64 {
        let base = self.dressed.character(x.g, n);
        if self.m == 0 {
            base
        } else {
            2.0 * (self.m as f64 * x.theta.radians()).cos() * base
        }
    }

    /// Real matrix: rotation by mθ on W_m tensored with the dressed matrix.
    pub fn matrix(&self, x: &GElement, n: usize) -> DMatrix<f64> {
        let v = self.dressed.matrix(x.g, n);
        if self.m == 0 {
            return v;
        }
        let (s, c) = (self.m as f64 * x.theta.radians()).sin_cos();
        let rot = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        rot.kronecker(&v)
    }

    pub fn label(&self) -> String {
        format!("W_{}(x){}", self.m, self.dressed.label())
    }
}

fn round_dim(avg: f64) -> Result<usize> {
    let r = avg.round();
    if (avg - r).abs() > INTEGRALITY_TOL || r < 0.0 {
        return Err(Error::Inexact(format!(
            "averaged character {avg} is not a non-negative integer"
        )));
    }
    Ok(r as usize)
}

/// dim V^H for a subgroup of Γ' given by its elements.
pub fn fixed_dim_dressed(v: &DressedIrrep, h: &[GammaPrimeElement], n: usize) -> Result<usize> {
    if h.is_empty() {
        return Err(Error::InvalidInput("empty subgroup".into()));
    }
    let s: f64 = h.iter().map(|&g| v.character(g, n)).sum();
    round_dim(s / h.len() as f64)
}

/// Upper bound on the size of a generated subgroup of S¹×Γ'.
pub const MAX_GENERATED_ORDER: usize = 1 << 20;

/// Finite subgroup of S¹×Γ' generated by `gens`.
pub fn generate(gens: &[GElement], n: usize) -> Result<Vec<GElement>> {
    let id = GElement::identity();
    let mut seen: HashSet<GElement> = HashSet::from([id]);
    let mut queue = vec![id];
    let mut out = vec![id];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = x.mul(g, n);
            if seen.insert(y) {
                if out.len() >= MAX_GENERATED_ORDER {
                    return Err(Error::TooLarge("generated subgroup too large".into()));
                }
                out.push(y);
                queue.push(y);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// dim V^H for H = ⟨gens⟩ ≤ S¹×Γ'.
pub fn fixed_dim(v: &GIrrep, gens: &[GElement], n: usize) -> Result<usize> {
    let h = generate(gens, n)?;
    let s: f64 = h.iter().map(|x| v.character(x, n)).sum();
    round_dim(s / h.len() as f64)
}

/// One isotypic block of a coupling matrix: index j, its irrep, and the
/// eigenvalues z_{j,k} (one per multiplicity index k).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsotypicBlock {
    pub j: usize,
    pub irrep: DihedralIrrep,
    pub z: Vec<f64>,
}

/// Eigendata of the coupling matrix per isotypic index.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LaplacianEigendata {
    pub n: usize,
    pub blocks: Vec<IsotypicBlock>,
}

impl LaplacianEigendata {
    /// User-supplied eigenvalues; `entries` maps isotypic index j to z_{j,1..}.
    pub fn custom(n: usize, entries: Vec<(usize, Vec<f64>)>) -> Result<Self> {
        let mut blocks = Vec::new();
        for (j, z) in entries {
            if z.is_empty() || z.iter().any(|&v| !v.is_finite() || v < 0.0) {
                return Err(Error::InvalidInput(format!(
                    "eigenvalues for j = {j} must be finite and non-negative"
                )));
            }
            blocks.push(IsotypicBlock {
                j,
                irrep: isotypic_irrep(j, n)?,
                z,
            });
        }
        blocks.sort_by_key(|b| b.j);
        if blocks.windows(2).any(|w| w[0].j == w[1].j) {
            return Err(Error::InvalidInput("duplicate isotypic index".into()));
        }
        Ok(LaplacianEigendata { n, blocks })
    }

    pub fn block(&self, j: usize) -> Option<&IsotypicBlock> {
        self.blocks.iter().find(|b| b.j == j)
    }

    pub fn z(&self, j: usize, k: usize) -> Option<f64> {
        self.block(j)
            .and_then(|b| b.z.get(k.checked_sub(1)?).copied())
    }

    /// All (j, k, z_{j,k}) with k starting at 1.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        self.blocks
            .iter()
            .flat_map(|b| b.z.iter().enumerate().map(move |(k, &z)| (b.j, k + 1, z)))
            .collect()
    }
}

/// z_j = 4 sin²(πj/N) for 0 ≤ j ≤ ⌊N/2⌋, one eigenvalue per block.
pub fn cycle_laplacian_eigendata(n: usize) -> Result<LaplacianEigendata> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("cycle needs N ≥ 3, got {n}")));
    }
    let blocks = (0..=n / 2)
        .map(|j| {
            let s = (std::f64::consts::PI * j as f64 / n as f64).sin();
            Ok(IsotypicBlock {
                j,
                irrep: isotypic_irrep(j, n)?,
                z: vec![4.0 * s * s],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LaplacianEigendata { n, blocks })
}

/// Positive semidefinite cycle Laplacian: 2 on the diagonal, −1 to each neighbour.
pub fn cycle_laplacian_matrix(n: usize) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(n, n);
    for i in 0..n {
        l[(i, i)] = 2.0;
        l[(i, (i + 1) % n)] -= 1.0;
        l[(i, (i + n - 1) % n)] -= 1.0;
    }
    l
}

//! Discretized linearization ν²∂_t² − ∂_x² + δ∂_t + βS_τ + ζ(α)(L+I) and numerical
//! checks built on it: singular-value scans, a spectral eigenvalue comparison and
//! symmetry tests of sampled eigenfunctions.

use crate::bifurcation::{maximal_orbit_generators, BranchKind, SymmetryRelation};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::groups::DihedralElement;
use crate::reps::{cycle_laplacian_eigendata, cycle_laplacian_matrix, isotypic_irrep};
use crate::spectrum::{IndexQuad, ModelParams};
use crate::twisted::GElement;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

/// Largest dense matrix dimension assembled on request.
pub const MAX_DENSE_DIM: usize = 6000;

/// Finite-difference grid: periodic t with `mt` points, `mx` interior x points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FdSpec {
    pub mt: usize,
    pub mx: usize,
}

impl FdSpec {
    pub fn validate(&self) -> Result<()> {
        if self.mt < 4 || self.mx < 4 {
            return Err(Error::InvalidInput("grid sizes must be at least 4".into()));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        TAU / self.mt as f64
    }

    pub fn dx(&self) -> f64 {
        PI / (self.mx + 1) as f64
    }

    /// Split τ mod 2π = (s + w)Δt with s integer and 0 ≤ w < 1.
    pub fn delay_split(&self, tau: f64) -> (usize, f64) {
        let steps = tau.rem_euclid(TAU) / self.dt();
        let s = steps.floor();
        (s as usize % self.mt, steps - s)
    }
}

/// Coupling eigenvalues z of L, taken from an orthogonal eigendecomposition when
/// the model uses the cycle Laplacian.
fn coupling_spectrum(params: &ModelParams) -> Result<Vec<f64>> {
    if params.eigendata == cycle_laplacian_eigendata(params.n)? {
        let eig = SymmetricEigen::new(cycle_laplacian_matrix(params.n));
        return Ok(eig.eigenvalues.iter().copied().collect());
    }
    let mut out = Vec::new();
    for (j, _, z) in params.eigendata.entries() {
        let d = isotypic_irrep(j, params.n)?.dim();
        out.extend(std::iter::repeat_n(z, d));
    }
    Ok(out)
}

/// −D_xx on the interior Dirichlet grid.
fn neg_laplacian_x(mx: usize, dx: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(mx, mx);
    let h2 = dx * dx;
    for i in 0..mx {
        m[(i, i)] = 2.0 / h2;
        if i > 0 {
            m[(i, i - 1)] = -1.0 / h2;
        }
        if i + 1 < mx {
            m[(i, i + 1)] = -1.0 / h2;
        }
    }
    m
}

/// Symbol of the t-part at discrete frequency k: ν²D_tt + δD_t + βS_τ.
fn time_symbol(params: &ModelParams, beta: f64, spec: FdSpec, k: usize) -> Complex64 {
    let dt = spec.dt();
    let nu = params.nu_f64();
    let w = k as f64 * dt;
    let dtt = -4.0 * (w / 2.0).sin().powi(2) / (dt * dt);
    let d1 = Complex64::new(0.0, w.sin() / dt);
    let (s, frac) = spec.delay_split(params.tau);
    let shift = |r: f64| Complex64::from_polar(1.0, -w * r);
    let delay = shift(s as f64) * (1.0 - frac) + shift(s as f64 + 1.0) * frac;
    nu * nu * dtt + params.delta * d1 + beta * delay
}

/// Smallest singular value of the FD operator, from the per-frequency, per-coupling-mode blocks.
pub fn fd_sigma_min(
    params: &ModelParams,
    alpha: f64,
    beta: f64,
    spec: FdSpec,
    exec: Exec,
) -> Result<f64> {
    spec.validate()?;
    let zs = coupling_spectrum(params)?;
    let lx = neg_laplacian_x(spec.mx, spec.dx()).map(|v| Complex64::new(v, 0.0));
    let zeta = params.coupling.eval(alpha);
    let blocks: Vec<(usize, f64)> = (0..spec.mt)
        .flat_map(|k| zs.iter().map(move |&z| (k, z)))
        .collect();
    let mins = exec.map(&blocks, |&(k, z)| {
        let c = time_symbol(params, beta, spec, k) + zeta * (z + 1.0);
        let mut b = lx.clone();
        for i in 0..spec.mx {
            b[(i, i)] += c;
        }
        b.singular_values()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    });
    Ok(mins.into_iter().fold(f64::INFINITY, f64::min))
}

/// Full real FD matrix, row index (i_t·mx + i_x)·N + component.
pub fn fd_dense_matrix(
    params: &ModelParams,
    alpha: f64,
    beta: f64,
    spec: FdSpec,
) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let nn = params.n;
    let dim = spec.mt * spec.mx * nn;
    if dim > MAX_DENSE_DIM {
        return Err(Error::TooLarge(format!("dense FD matrix of size {dim}")));
    }
    let (mt, mx) = (spec.mt, spec.mx);
    let (dt, dx) = (spec.dt(), spec.dx());
    let nu2 = params.nu_f64().powi(2);
    let (s, w) = spec.delay_split(params.tau);
    let coupling =
        (cycle_laplacian_matrix(nn) + DMatrix::identity(nn, nn)) * params.coupling.eval(alpha);
    if params.eigendata != cycle_laplacian_eigendata(nn)? {
        return Err(Error::InvalidInput(
            "dense assembly supports the cycle Laplacian only".into(),
        ));
    }
    let idx = |it: usize, ix: usize, c: usize| (it * mx + ix) * nn + c;
    let mut a = DMatrix::zeros(dim, dim);
    for it in 0..mt {
        let next = (it + 1) % mt;
        let prev = (it + mt - 1) % mt;
        let d0 = (it + mt - s) % mt;
        let d1 = (it + 2 * mt - s - 1) % mt;
        for ix in 0..mx {
            for c in 0..nn {
                let r = idx(it, ix, c);
                a[(r, idx(next, ix, c))] += nu2 / (dt * dt) + params.delta / (2.0 * dt);
                a[(r, idx(prev, ix, c))] += nu2 / (dt * dt) - params.delta / (2.0 * dt);
                a[(r, r)] += -2.0 * nu2 / (dt * dt) + 2.0 / (dx * dx);
                if ix > 0 {
                    a[(r, idx(it, ix - 1, c))] -= 1.0 / (dx * dx);
                }
                if ix + 1 < mx {
                    a[(r, idx(it, ix + 1, c))] -= 1.0 / (dx * dx);
                }
                a[(r, idx(d0, ix, c))] += beta * (1.0 - w);
                a[(r, idx(d1, ix, c))] += beta * w;
                for c2 in 0..nn {
                    a[(r, idx(it, ix, c2))] += coupling[(c, c2)];
                }
            }
        }
    }
    Ok(a)
}

/// σ_min at a centre and on a ring of parameter offsets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub spec: FdSpec,
    pub center: (f64, f64),
    pub radius: f64,
    pub sigma_center: f64,
    /// (Δα, Δβ, σ_min) per ring point.
    pub ring: Vec<(f64, f64, f64)>,
    pub ring_min: f64,
    /// σ_min(centre) / min over the ring.
    pub ratio: f64,
}

pub fn sigma_min_scan(
    params: &ModelParams,
    center: (f64, f64),
    radius: f64,
    points: usize,
    spec: FdSpec,
    exec: Exec,
) -> Result<ScanResult> {
    if points == 0 || radius.is_nan() || radius <= 0.0 {
        return Err(Error::InvalidInput(
            "ring needs radius > 0 and at least one point".into(),
        ));
    }
    let sigma_center = fd_sigma_min(params, center.0, center.1, spec, exec)?;
    let mut ring = Vec::with_capacity(points);
    for p in 0..points {
        let a = TAU * p as f64 / points as f64;
        let (da, db) = (radius * a.cos(), radius * a.sin());
        ring.push((
            da,
            db,
            fd_sigma_min(params, center.0 + da, center.1 + db, spec, exec)?,
        ));
    }
    let ring_min = ring.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    Ok(ScanResult {
        spec,
        center,
        radius,
        sigma_center,
        ring,
        ring_min,
        ratio: sigma_center / ring_min,
    })
}

/// Real spectral matrix on cos/sin(mt)·v_n(x)·e_c, 0 ≤ m ≤ m_max, 1 ≤ n ≤ n_max.
pub fn spectral_matrix(
    params: &ModelParams,
    alpha: f64,
    beta: f64,
    m_max: u32,
    n_max: u32,
) -> Result<DMatrix<f64>> {
    let nn = params.n;
    if params.eigendata != cycle_laplacian_eigendata(nn)? {
        return Err(Error::InvalidInput(
            "spectral assembly supports the cycle Laplacian only".into(),
        ));
    }
    let temporal = 2 * m_max as usize + 1;
    let dim = temporal * n_max as usize * nn;
    if dim > MAX_DENSE_DIM {
        return Err(Error::TooLarge(format!("spectral matrix of size {dim}")));
    }
    let coupling =
        (cycle_laplacian_matrix(nn) + DMatrix::identity(nn, nn)) * params.coupling.eval(alpha);
    let nu2 = params.nu_f64().powi(2);
    let mut a = DMatrix::zeros(dim, dim);
    // temporal slots: 0 ↦ m = 0; 2m−1 ↦ cos(mt); 2m ↦ sin(mt)
    let base = |slot: usize, n: usize| (slot * n_max as usize + (n - 1)) * nn;
    for n in 1..=n_max as usize {
        let n2 = (n * n) as f64;
        for m in 0..=m_max as usize {
            let mf = m as f64;
            let (s, c) = (mf * params.tau).sin_cos();
            let real = -nu2 * mf * mf + n2 + beta * c;
            let imag = params.delta * mf - beta * s;
            let slots: Vec<usize> = if m == 0 {
                vec![0]
            } else {
                vec![2 * m - 1, 2 * m]
            };
            for comp in 0..nn {
                for (pos, &slot) in slots.iter().enumerate() {
                    let r = base(slot, n) + comp;
                    a[(r, r)] += real;
                    if m > 0 {
                        // cos ↦ R cos − imag sin; sin ↦ imag cos + R sin
                        let other = base(slots[1 - pos], n) + comp;
                        a[(other, r)] += if pos == 0 { -imag } else { imag };
                    }
                    for c2 in 0..nn {
                        a[(r, base(slot, n) + c2)] += coupling[(comp, c2)];
                    }
                }
            }
        }
    }
    Ok(a)
}

/// Closed-form ξ·μ values with multiplicity over the spectral truncation.
pub fn spectral_expected(
    params: &ModelParams,
    alpha: f64,
    beta: f64,
    m_max: u32,
    n_max: u32,
) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for m in 0..=m_max {
        for n in 1..=n_max {
            for (j, k, _) in params.eigendata.entries() {
                let d = isotypic_irrep(j, params.n)?.dim();
                let v =
                    crate::spectrum::mu_numerator(IndexQuad { m, n, j, k }, alpha, beta, params)?;
                for _ in 0..d {
                    out.push(v);
                    if m > 0 {
                        out.push(v.conj());
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Largest distance in a greedy matching of assembled eigenvalues to ξ·μ values.
pub fn spectral_check(
    params: &ModelParams,
    alpha: f64,
    beta: f64,
    m_max: u32,
    n_max: u32,
) -> Result<f64> {
    let a = spectral_matrix(params, alpha, beta, m_max, n_max)?;
    let computed: Vec<Complex64> = a.complex_eigenvalues().iter().copied().collect();
    let mut expected = spectral_expected(params, alpha, beta, m_max, n_max)?;
    if computed.len() != expected.len() {
        return Err(Error::Inexact(format!(
            "spectral size mismatch: {} assembled vs {} expected",
            computed.len(),
            expected.len()
        )));
    }
    let mut worst: f64 = 0.0;
    for c in computed {
        let (pos, d) = expected
            .iter()
            .enumerate()
            .map(|(i, e)| (i, (e - c).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty");
        worst = worst.max(d);
        expected.swap_remove(pos);
    }
    Ok(worst)
}

/// Samples of u on t_i = 2πi/mt, x_k = −π/2 + kπ/(mx−1), components 0..N.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub mt: usize,
    pub mx: usize,
    pub n: usize,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(mt: usize, mx: usize, n: usize) -> Self {
        GridFunction {
            mt,
            mx,
            n,
            values: vec![0.0; mt * mx * n],
        }
    }

    pub fn sample(mt: usize, mx: usize, n: usize, f: impl Fn(f64, f64, usize) -> f64) -> Self {
        let mut g = Self::zeros(mt, mx, n);
        for i in 0..mt {
            for k in 0..mx {
                for c in 0..n {
                    g.values[(i * mx + k) * n + c] = f(g.t(i), g.x(k), c);
                }
            }
        }
        g
    }

    pub fn t(&self, i: usize) -> f64 {
        TAU * i as f64 / self.mt as f64
    }

    pub fn x(&self, k: usize) -> f64 {
        -PI / 2.0 + PI * k as f64 / (self.mx - 1) as f64
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize, c: usize) -> f64 {
        self.values[(i * self.mx + k) * self.n + c]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// u(t + φ, x) with φ in radians; exact roll on grid multiples, trigonometric interpolation otherwise.
    pub fn shifted(&self, phi: f64) -> GridFunction {
        let steps = phi / TAU * self.mt as f64;
        let r = steps.round();
        if (steps - r).abs() < 1e-12 {
            let s = (r as i64).rem_euclid(self.mt as i64) as usize;
            let mut out = Self::zeros(self.mt, self.mx, self.n);
            for i in 0..self.mt {
                let src = (i + s) % self.mt;
                let (a, b) = (i * self.mx * self.n, src * self.mx * self.n);
                let len = self.mx * self.n;
                out.values[a..a + len].copy_from_slice(&self.values[b..b + len]);
            }
            return out;
        }
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(self.mt);
        let inv = planner.plan_fft_inverse(self.mt);
        let mut out = Self::zeros(self.mt, self.mx, self.n);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.mt];
        for k in 0..self.mx {
            for c in 0..self.n {
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = Complex64::new(self.get(i, k, c), 0.0);
                }
                fwd.process(&mut buf);
                for (q, b) in buf.iter_mut().enumerate() {
                    let f = if 2 * q < self.mt {
                        q as f64
                    } else {
                        q as f64 - self.mt as f64
                    };
                    if 2 * q == self.mt {
                        *b *= (f * phi).cos();
                    } else {
                        *b *= Complex64::from_polar(1.0, f * phi);
                    }
                }
                inv.process(&mut buf);
                for (i, b) in buf.iter().enumerate() {
                    out.values[(i * self.mx + k) * self.n + c] = b.re / self.mt as f64;
                }
            }
        }
        out
    }
}

/// Outcome of one relation check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub max_violation: f64,
    pub pass: bool,
}

/// Max over the grid of |sign·u_{σ(i)}(t + 2π·shift, ±x) − u_i(t, x)| per relation.
pub fn symmetry_check(
    u: &GridFunction,
    relations: &[SymmetryRelation],
    tol: f64,
) -> Vec<RelationCheck> {
    relations
        .iter()
        .map(|rel| {
            let s = u.shifted(TAU * rel.shift.numer() as f64 / rel.shift.denom() as f64);
            let mut worst: f64 = 0.0;
            for i in 0..u.mt {
                for k in 0..u.mx {
                    let kx = if rel.reflect_x { u.mx - 1 - k } else { k };
                    for c in 0..u.n {
                        let lhs = rel.sign as f64 * s.get(i, kx, rel.perm.act(c, u.n));
                        worst = worst.max((lhs - u.get(i, k, c)).abs());
                    }
                }
            }
            RelationCheck {
                relation: rel.text.clone(),
                max_violation: worst,
                pass: worst <= tol,
            }
        })
        .collect()
}

/// v_n(x): cos(nx) for odd n, sin(nx) for even n.
pub fn v_n(n: u32, x: f64) -> f64 {
    if n % 2 == 1 {
        (n as f64 * x).cos()
    } else {
        (n as f64 * x).sin()
    }
}

/// Real basis of the isotypic component E_j ⊂ R^N: Re v_j (and Im v_j for 0 < j < N/2).
pub fn isotypic_basis(nn: usize, j: usize) -> Result<DMatrix<f64>> {
    let d = isotypic_irrep(j, nn)?.dim();
    Ok(DMatrix::from_fn(nn, d, |i, col| {
        let a = TAU * (j * i) as f64 / nn as f64;
        if col == 0 {
            a.cos()
        } else {
            a.sin()
        }
    }))
}

/// Basis (columns, coefficients of cos⊗E_j then sin⊗E_j) of the functions
/// v_n(x)(cos(mt)a + sin(mt)b), a, b ∈ E_j, invariant under every generator.
pub fn fixed_coefficients(
    nn: usize,
    m: u32,
    n: u32,
    j: usize,
    gens: &[GElement],
) -> Result<DMatrix<f64>> {
    if gens.is_empty() {
        return Err(Error::InvalidInput(
            "at least one generator is required".into(),
        ));
    }
    let basis = isotypic_basis(nn, j)?;
    let d = basis.ncols();
    let x_parity = if n % 2 == 1 { 1.0 } else { -1.0 };
    let gram_inv = (basis.transpose() * &basis)
        .try_inverse()
        .ok_or_else(|| Error::Inexact("isotypic basis is degenerate".into()))?;
    let mut rows: Vec<DMatrix<f64>> = Vec::new();
    for g in gens {
        let rel = SymmetryRelation::from_element(g);
        let perm = DMatrix::from_fn(
            nn,
            nn,
            |i, c| if rel.perm.act(i, nn) == c { 1.0 } else { 0.0 },
        );
        let phase = TAU * m as f64 * rel.shift.numer() as f64 / rel.shift.denom() as f64;
        let (s, c) = phase.sin_cos();
        let scale = rel.sign as f64 * if rel.reflect_x { x_parity } else { 1.0 };
        // coefficient of cos: a c + b s; of sin: −a s + b c
        let t = DMatrix::from_row_slice(2, 2, &[c, s, -s, c]);
        let p = &gram_inv * basis.transpose() * perm * &basis * scale;
        let action = t.kronecker(&p);
        rows.push(action - DMatrix::identity(2 * d, 2 * d));
    }
    let total: usize = rows.iter().map(|r| r.nrows()).sum();
    let mut stacked = DMatrix::zeros(total, 2 * d);
    let mut off = 0;
    for r in &rows {
        stacked.view_mut((off, 0), (r.nrows(), 2 * d)).copy_from(r);
        off += r.nrows();
    }
    let svd = stacked.clone().svd(false, true);
    let vt = svd.v_t.expect("requested");
    let cols: Vec<usize> = (0..2 * d)
        .filter(|&i| {
            svd.singular_values
                .get(i)
                .map(|&s| s < 1e-10)
                .unwrap_or(true)
        })
        .collect();
    let mut null = DMatrix::zeros(2 * d, cols.len());
    for (out, &i) in cols.iter().enumerate() {
        null.set_column(out, &vt.row(i).transpose());
    }
    Ok(null)
}

/// Eigenfunction in E_{m,n,j} fixed by `gens`: the projection of the first of
/// cos⊗Re v_j, cos⊗Im v_j, sin⊗Re v_j, sin⊗Im v_j with nonzero image, scaled to max |u| = 1.
pub fn eigenfunction_from_generators(
    nn: usize,
    m: u32,
    n: u32,
    j: usize,
    gens: &[GElement],
    mt: usize,
    mx: usize,
) -> Result<GridFunction> {
    if mt < 4 || mx < 3 {
        return Err(Error::InvalidInput("grid too small".into()));
    }
    let null = fixed_coefficients(nn, m, n, j, gens)?;
    if null.ncols() == 0 {
        return Err(Error::InvalidInput(
            "generators fix no nonzero function".into(),
        ));
    }
    let proj = &null * null.transpose();
    let dim = proj.nrows();
    let coeff = (0..dim)
        .map(|i| proj.column(i).into_owned())
        .find(|c| c.norm() > 1e-8)
        .ok_or_else(|| Error::Inexact("empty projection".into()))?;
    let basis = isotypic_basis(nn, j)?;
    let d = basis.ncols();
    let a = &basis * coeff.rows(0, d);
    let b = &basis * coeff.rows(d, d);
    let mut g = GridFunction::sample(mt, mx, nn, |t, x, c| {
        v_n(n, x) * ((m as f64 * t).cos() * a[c] + (m as f64 * t).sin() * b[c])
    });
    let scale = g.max_abs();
    g.values.iter_mut().for_each(|v| *v /= scale);
    Ok(g)
}

/// Eigenfunction with isotropy at least the given maximal kind.
pub fn export_eigenfunction(
    nn: usize,
    m: u32,
    n: u32,
    j: usize,
    kind: BranchKind,
    mt: usize,
    mx: usize,
) -> Result<GridFunction> {
    let gens = maximal_orbit_generators(nn, m, n, j)?
        .into_iter()
        .find(|(k, _)| *k == kind)
        .map(|(_, g)| g)
        .ok_or_else(|| Error::InvalidInput(format!("kind {kind:?} does not occur for j = {j}")))?;
    eigenfunction_from_generators(nn, m, n, j, &gens, mt, mx)
}

/// U₁ = cos x(cos t Re v₁ − sin t Im v₁), U₂ = cos x cos t Re v₁, U₃ = cos x cos t Im v₁.
pub fn reference_wave(which: u8, nn: usize, mt: usize, mx: usize) -> Result<GridFunction> {
    if !(1..=3).contains(&which) {
        return Err(Error::InvalidInput(format!("no function U_{which}")));
    }
    Ok(GridFunction::sample(mt, mx, nn, |t, x, c| {
        let a = TAU * c as f64 / nn as f64;
        let (re, im) = (a.cos(), a.sin());
        x.cos()
            * match which {
                1 => t.cos() * re - t.sin() * im,
                2 => t.cos() * re,
                _ => t.cos() * im,
            }
    }))
}

/// Relation applying a bare permutation (used for dihedral invariance tests).
pub fn permutation_relation(perm: DihedralElement) -> SymmetryRelation {
    SymmetryRelation::from_element(&GElement {
        theta: crate::turn::Turn::zero(),
        g: crate::groups::GammaPrimeElement::new(1, 1, perm),
    })
}

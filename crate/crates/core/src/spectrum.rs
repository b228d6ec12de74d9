//! Analytic spectral data: eigenvalues ξ and μ, coupling curves, critical
//! parameter values, winding signs, the lower-bound constant for |ξ| and the
//! null/negative index sets.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::reps::{cycle_laplacian_eigendata, LaplacianEigendata};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Strictly monotone coupling strength ζ(α).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CouplingCurve {
    /// 1/(1 + e^{−sα}); negative steepness gives a decreasing curve.
    Sigmoid {
        steepness: f64,
    },
    Linear {
        slope: f64,
        offset: f64,
    },
    /// Piecewise-linear interpolation through (α, ζ) points with increasing α.
    Table {
        points: Vec<(f64, f64)>,
    },
}

impl CouplingCurve {
    pub fn sigmoid() -> Self {
        CouplingCurve::Sigmoid { steepness: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            CouplingCurve::Sigmoid { steepness } => steepness.is_finite() && *steepness != 0.0,
            CouplingCurve::Linear { slope, offset } => {
                slope.is_finite() && *slope != 0.0 && offset.is_finite()
            }
            CouplingCurve::Table { points } => {
                points.len() >= 2
                    && points.iter().all(|(a, z)| a.is_finite() && z.is_finite())
                    && points.windows(2).all(|w| w[1].0 > w[0].0)
                    && (points.windows(2).all(|w| w[1].1 > w[0].1)
                        || points.windows(2).all(|w| w[1].1 < w[0].1))
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "coupling curve is not strictly monotone: {self:?}"
            )))
        }
    }

    pub fn eval(&self, alpha: f64) -> f64 {
        match self {
            CouplingCurve::Sigmoid { steepness } => 1.0 / (1.0 + (-steepness * alpha).exp()),
            CouplingCurve::Linear { slope, offset } => slope * alpha + offset,
            CouplingCurve::Table { points } => {
                let (i, t) = table_segment(points, alpha);
                let (a0, z0) = points[i];
                let (a1, z1) = points[i + 1];
                z0 + (z1 - z0) * (t - a0) / (a1 - a0)
            }
        }
    }

    pub fn derivative(&self, alpha: f64) -> f64 {
        match self {
            CouplingCurve::Sigmoid { steepness } => {
                let z = self.eval(alpha);
                steepness * z * (1.0 - z)
            }
            CouplingCurve::Linear { slope, .. } => *slope,
            CouplingCurve::Table { points } => {
                let (i, _) = table_segment(points, alpha);
                (points[i + 1].1 - points[i].1) / (points[i + 1].0 - points[i].0)
            }
        }
    }

    /// Open interval of attained values.
    pub fn range(&self) -> (f64, f64) {
        match self {
            CouplingCurve::Sigmoid { .. } => (0.0, 1.0),
            CouplingCurve::Linear { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            CouplingCurve::Table { points } => {
                let (a, b) = (points[0].1, points[points.len() - 1].1);
                (a.min(b), a.max(b))
            }
        }
    }

    /// α with ζ(α) = y, if y lies in the open range.
    pub fn inverse(&self, y: f64) -> Option<f64> {
        let (lo, hi) = self.range();
        if !(y > lo && y < hi) {
            return None;
        }
        match self {
            CouplingCurve::Sigmoid { steepness } => Some((y / (1.0 - y)).ln() / steepness),
            CouplingCurve::Linear { slope, offset } => Some((y - offset) / slope),
            CouplingCurve::Table { points } => points.windows(2).find_map(|w| {
                let (lo, hi) = (w[0].1.min(w[1].1), w[0].1.max(w[1].1));
                (y >= lo && y <= hi)
                    .then(|| w[0].0 + (w[1].0 - w[0].0) * (y - w[0].1) / (w[1].1 - w[0].1))
            }),
        }
    }
}

/// Segment index and clamped abscissa for table evaluation (linear extrapolation outside).
fn table_segment(points: &[(f64, f64)], alpha: f64) -> (usize, f64) {
    let last = points.len() - 2;
    let i = points
        .windows(2)
        .position(|w| alpha <= w[1].0)
        .unwrap_or(last);
    (i, alpha)
}

/// Numerical tolerances shared by enumeration and classification.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// |sin(mτ)| below this rejects the delay as degenerate.
    pub degenerate_sin: f64,
    /// |μ| at or below this places a quadruple in the null set.
    pub zero: f64,
    /// Critical points closer than this in (α, β) are merged.
    pub merge: f64,
    /// Distance of τ/π to a small-denominator rational that raises a warning.
    pub rational_pi: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            degenerate_sin: 1e-8,
            zero: 1e-9,
            merge: 1e-9,
            rational_pi: 1e-9,
        }
    }
}

/// Model constants; ν exact, coupling spectrum from the cycle Laplacian unless replaced.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelParams {
    #[serde(serialize_with = "ser_ratio")]
    pub nu: Ratio<i64>,
    pub delta: f64,
    pub tau: f64,
    pub n: usize,
    pub coupling: CouplingCurve,
    pub eigendata: LaplacianEigendata,
    pub tolerances: Tolerances,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Parses "p/q" or "p" into a positive rational.
pub fn parse_nu(s: &str) -> Result<Ratio<i64>> {
    let bad = || Error::InvalidInput(format!("nu must be a rational p/q, got {s:?}"));
    let (p, q) = match s.trim().split_once('/') {
        Some((p, q)) => (
            p.trim().parse::<i64>().map_err(|_| bad())?,
            q.trim().parse::<i64>().map_err(|_| bad())?,
        ),
        None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    if q == 0 || p <= 0 || q < 0 {
        return Err(bad());
    }
    Ok(Ratio::new(p, q))
}

impl ModelParams {
    pub fn new(
        nu: Ratio<i64>,
        delta: f64,
        tau: f64,
        n: usize,
        coupling: CouplingCurve,
    ) -> Result<Self> {
        let eigendata = cycle_laplacian_eigendata(n)?;
        let p = ModelParams {
            nu,
            delta,
            tau,
            n,
            coupling,
            eigendata,
            tolerances: Tolerances::default(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_eigendata(mut self, eigendata: LaplacianEigendata) -> Result<Self> {
        if eigendata.n != self.n {
            return Err(Error::InvalidInput(
                "eigendata N differs from model N".into(),
            ));
        }
        self.eigendata = eigendata;
        Ok(self)
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if *self.nu.numer() <= 0 {
            return Err(Error::InvalidInput("nu must be positive".into()));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidInput("delta must be positive".into()));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidInput("tau must be positive".into()));
        }
        if self.n < 3 {
            return Err(Error::InvalidInput("N must be at least 3".into()));
        }
        self.coupling.validate()
    }

    pub fn nu_f64(&self) -> f64 {
        *self.nu.numer() as f64 / *self.nu.denom() as f64
    }

    /// ζ_{j,k}(α) = ζ(α)(z_{j,k} + 1).
    pub fn zeta_jk(&self, j: usize, k: usize, alpha: f64) -> Result<f64> {
        Ok(self.coupling.eval(alpha) * (self.z(j, k)? + 1.0))
    }

    pub fn z(&self, j: usize, k: usize) -> Result<f64> {
        self.eigendata.z(j, k).ok_or_else(|| {
            Error::InvalidInput(format!("no coupling eigenvalue for (j,k) = ({j},{k})"))
        })
    }

    /// (p, q) with τ/π within tolerance of p/q, q ≤ `max_denom`.
    pub fn tau_near_rational_pi(&self, max_denom: i64) -> Option<(i64, i64)> {
        let x = self.tau / std::f64::consts::PI;
        (1..=max_denom).find_map(|q| {
            let p = (x * q as f64).round();
            ((x - p / q as f64).abs() < self.tolerances.rational_pi).then(|| {
                let g = (p as i64).gcd(&q);
                (p as i64 / g, q / g)
            })
        })
    }
}

/// Index quadruple (m, n, j, k): temporal mode, spatial mode, isotypic index, multiplicity index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IndexQuad {
    pub m: u32,
    pub n: u32,
    pub j: usize,
    pub k: usize,
}

/// Enumeration window 1 ≤ m ≤ m_max, 1 ≤ n ≤ n_max.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub m_max: u32,
    pub n_max: u32,
}

/// ξ_{m,n} = −ν²m² + n² + iδm + 1.
pub fn xi(m: u32, n: u32, params: &ModelParams) -> Complex64 {
    xi_raw(m as f64, n as f64, params.nu_f64(), params.delta)
}

fn xi_raw(m: f64, n: f64, nu: f64, delta: f64) -> Complex64 {
    Complex64::new(-nu * nu * m * m + n * n + 1.0, delta * m)
}

/// ξ_{m,n}·μ_{m,n,j,k}: −ν²m² + n² + iδm + ζ_{j,k}(α) + βe^{−imτ}.
pub fn mu_numerator(
    q: IndexQuad,
    alpha: f64,
    beta: f64,
    params: &ModelParams,
) -> Result<Complex64> {
    let nu = params.nu_f64();
    let (m, n) = (q.m as f64, q.n as f64);
    let zeta = params.zeta_jk(q.j, q.k, alpha)?;
    let delay = Complex64::from_polar(beta, -m * params.tau);
    Ok(Complex64::new(-nu * nu * m * m + n * n + zeta, params.delta * m) + delay)
}

/// μ_{m,n,j,k}(α, β).
pub fn mu(q: IndexQuad, alpha: f64, beta: f64, params: &ModelParams) -> Result<Complex64> {
    Ok(mu_numerator(q, alpha, beta, params)? / xi(q.m, q.n, params))
}

fn check_delay(m: u32, params: &ModelParams) -> Result<f64> {
    let s = (m as f64 * params.tau).sin();
    if s.abs() < params.tolerances.degenerate_sin {
        return Err(Error::Degenerate(format!("sin(m·tau) = {s:e} for m = {m}")));
    }
    Ok(s)
}

/// Closed-form (α₀, β₀) with μ_q(α₀, β₀) = 0, if the required coupling value is attained.
pub fn critical_point(q: IndexQuad, params: &ModelParams) -> Result<Option<(f64, f64)>> {
    if q.m == 0 || q.n == 0 {
        return Err(Error::InvalidInput(
            "critical points need m ≥ 1 and n ≥ 1".into(),
        ));
    }
    let s = check_delay(q.m, params)?;
    let m = q.m as f64;
    let nu = params.nu_f64();
    let beta = params.delta * m / s;
    let target =
        (nu * nu * m * m - (q.n as f64).powi(2) - params.delta * m * (m * params.tau).cos() / s)
            / (params.z(q.j, q.k)? + 1.0);
    Ok(params.coupling.inverse(target).map(|alpha| (alpha, beta)))
}

/// sign(−∂_α ζ_{j,k}(α₀)·sin(mτ)); 0 flags a vanishing derivative.
pub fn rho(q: IndexQuad, alpha0: f64, params: &ModelParams) -> Result<i8> {
    let s = check_delay(q.m, params)?;
    let d = params.coupling.derivative(alpha0) * (params.z(q.j, q.k)? + 1.0);
    let v = -d * s;
    Ok(if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    })
}

/// Winding number of μ_q around a counter-clockwise circle in the (α, β) plane.
pub fn winding_oracle(
    q: IndexQuad,
    center: (f64, f64),
    radius: f64,
    steps: usize,
    params: &ModelParams,
) -> Result<i32> {
    if steps < 8 || radius.is_nan() || radius <= 0.0 {
        return Err(Error::InvalidInput(
            "winding oracle needs radius > 0 and ≥ 8 steps".into(),
        ));
    }
    let point = |s: usize| {
        let t = std::f64::consts::TAU * s as f64 / steps as f64;
        mu(
            q,
            center.0 + radius * t.cos(),
            center.1 + radius * t.sin(),
            params,
        )
    };
    let mut prev = point(0)?;
    let floor = 1e-12;
    let mut total = 0.0;
    for s in 1..=steps {
        let cur = point(s % steps)?;
        if cur.norm() < floor {
            return Err(Error::Inconclusive(
                "mu nearly vanishes on the circle".into(),
            ));
        }
        total += (cur / prev).arg();
        prev = cur;
    }
    let w = total / std::f64::consts::TAU;
    let r = w.round();
    if (w - r).abs() > 0.1 {
        return Err(Error::Inconclusive(format!(
            "winding {w} is not near an integer"
        )));
    }
    Ok(r as i32)
}

/// One enumerated critical quadruple.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    #[serde(flatten)]
    pub quad: IndexQuad,
    pub alpha: f64,
    pub beta: f64,
    pub rho: i8,
}

/// All critical quadruples in the window, ordered by (m, n, j, k).
pub fn enumerate_critical_points(
    params: &ModelParams,
    window: Window,
    exec: Exec,
) -> Result<Vec<CriticalPoint>> {
    for m in 1..=window.m_max {
        check_delay(m, params)?;
    }
    let entries = params.eigendata.entries();
    let quads: Vec<IndexQuad> = (1..=window.m_max)
        .flat_map(|m| (1..=window.n_max).map(move |n| (m, n)))
        .flat_map(|(m, n)| {
            entries
                .iter()
                .map(move |&(j, k, _)| IndexQuad { m, n, j, k })
        })
        .collect();
    let found = exec.map(&quads, |&q| -> Result<Option<CriticalPoint>> {
        Ok(match critical_point(q, params)? {
            Some((alpha, beta)) => Some(CriticalPoint {
                quad: q,
                alpha,
                beta,
                rho: rho(q, alpha, params)?,
            }),
            None => None,
        })
    });
    let mut out = Vec::new();
    for r in found {
        if let Some(c) = r? {
            out.push(c);
        }
    }
    Ok(out)
}

/// Groups critical quadruples sharing a parameter point (within the merge tolerance).
pub fn group_by_point(points: &[CriticalPoint], tol: f64) -> Vec<Vec<CriticalPoint>> {
    let mut groups: Vec<Vec<CriticalPoint>> = Vec::new();
    for p in points {
        match groups
            .iter_mut()
            .find(|g| (g[0].alpha - p.alpha).abs() <= tol && (g[0].beta - p.beta).abs() <= tol)
        {
            Some(g) => g.push(*p),
            None => groups.push(vec![*p]),
        }
    }
    groups
}

/// Negative m = 0 eigenvalue: (n, j, k) with n² + ζ_{j,k}(α) + β < 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NegativeIndex {
    pub n: u32,
    pub j: usize,
    pub k: usize,
}

/// Null and negative index sets at a parameter point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexSets {
    pub null: Vec<IndexQuad>,
    pub negative: Vec<NegativeIndex>,
    /// Null set sliced by temporal mode m.
    pub slices: BTreeMap<u32, Vec<IndexQuad>>,
    /// μ_{0,n,j,k} ≠ 0 for every n.
    pub b1_holds: bool,
}

/// Σ₀, Σ₋ and the slices Σ_s at (α, β). The null set is scanned out to the a priori
/// bounds m ≤ |β|/δ, n² ≤ ν²m² + |ζ_{j,k}| + |β|; a zero outside the window is an error.
pub fn index_sets(
    alpha: f64,
    beta: f64,
    params: &ModelParams,
    window: Window,
    h_fixed: bool,
) -> Result<IndexSets> {
    let tol = params.tolerances.zero;
    let nu = params.nu_f64();
    let mut null = Vec::new();
    let m_bound = (beta.abs() / params.delta).floor() as u32 + 1;
    for (j, k, _) in params.eigendata.entries() {
        let zeta = params.zeta_jk(j, k, alpha)?;
        for m in 1..=m_bound.max(window.m_max) {
            if h_fixed && m % 2 == 0 {
                continue;
            }
            let n_bound = ((nu * nu * (m as f64).powi(2) + zeta.abs() + beta.abs())
                .sqrt()
                .floor() as u32
                + 1)
            .max(if m <= window.m_max { window.n_max } else { 0 });
            for n in 1..=n_bound {
                let q = IndexQuad { m, n, j, k };
                if mu(q, alpha, beta, params)?.norm() <= tol {
                    if m > window.m_max || n > window.n_max {
                        return Err(Error::WindowTooSmall(format!(
                            "null index (m,n,j,k) = ({m},{n},{j},{k}) lies outside the window"
                        )));
                    }
                    null.push(q);
                }
            }
        }
    }
    null.sort();
    let mut negative = Vec::new();
    let mut b1_holds = true;
    for (j, k, _) in params.eigendata.entries() {
        let c = params.zeta_jk(j, k, alpha)? + beta;
        let mut n = 1u32;
        loop {
            let v = (n as f64).powi(2) + c;
            if v.abs() <= tol * ((n as f64).powi(2) + 1.0) {
                b1_holds = false;
            } else if v < 0.0 {
                negative.push(NegativeIndex { n, j, k });
            }
            if v > tol * ((n as f64).powi(2) + 1.0) {
                break;
            }
            n += 1;
        }
    }
    negative.sort();
    let mut slices: BTreeMap<u32, Vec<IndexQuad>> = BTreeMap::new();
    for q in &null {
        slices.entry(q.m).or_default().push(*q);
    }
    Ok(IndexSets {
        null,
        negative,
        slices,
        b1_holds,
    })
}

/// |ξ_{m,n}|²/(m+n)², the quantity bounded below by C².
#[inline]
fn ratio_sq(m: f64, n: f64, nu: f64, delta: f64) -> f64 {
    xi_raw(m, n, nu, delta).norm_sqr() / ((m + n) * (m + n))
}

/// Constants entering the lower bound |ξ_{m,n}| ≥ C(m+n).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct XiBound {
    pub c: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub window_min: f64,
    /// Window 0 ≤ m < m_window, 0 < n < n_window.
    pub m_window: u32,
    pub n_window: u32,
}

/// C = min{D′, D″, D‴, min_{m<M, n<N} |ξ_{m,n}|/(m+n)} with M = 2/δ and N the
/// least n with n² ≥ n + 4ν²/δ² + 1.
pub fn xi_lower_bound_constant(params: &ModelParams) -> XiBound {
    let (p, q) = (*params.nu.numer() as f64, *params.nu.denom() as f64);
    let nu = p / q;
    let delta = params.delta;
    let d1 = delta / 4.0 * (q / p).min(1.0);
    let d2 = (1.0 / q) * (1.0f64).min(p / q + delta * q / 2.0);
    let d3 = (1.0f64).min(delta);
    let m_real = 2.0 / delta;
    let m_window = m_real.ceil() as u32;
    let rhs = 4.0 * nu * nu / (delta * delta) + 1.0;
    let mut n_window = 1u32;
    while ((n_window as f64).powi(2) - n_window as f64) < rhs {
        n_window += 1;
    }
    let mut window_min_sq = f64::INFINITY;
    for m in 0..m_window {
        if (m as f64) >= m_real {
            continue;
        }
        for n in 1..n_window {
            window_min_sq = window_min_sq.min(ratio_sq(m as f64, n as f64, nu, delta));
        }
    }
    let window_min = window_min_sq.sqrt();
    XiBound {
        c: d1.min(d2).min(d3).min(window_min),
        d1,
        d2,
        d3,
        window_min,
        m_window,
        n_window,
    }
}

/// min over 0 ≤ m ≤ m_max, 1 ≤ n ≤ n_max of |ξ_{m,n}|/(m+n), minus C.
pub fn xi_bound_margin(params: &ModelParams, c: f64, m_max: u32, n_max: u32, exec: Exec) -> f64 {
    let nu = params.nu_f64();
    let delta = params.delta;
    let min_sq = exec.reduce_range(
        m_max as usize + 1,
        f64::INFINITY,
        |m| {
            let mut best = f64::INFINITY;
            for n in 1..=n_max {
                best = best.min(ratio_sq(m as f64, n as f64, nu, delta));
            }
            best
        },
        f64::min,
    );
    min_sq.sqrt() - c
}

//! Volterra kernels `g(t,s)` and the processes `Y_t = ∫_0^t g(t,s) dZ_s`
//! they generate from sampled drivers.
//!
//! Two named families are shipped: the Molchan–Golosov kernel
//! `g_H(t,s) = C_H (t-s)^{H-1/2} F(1/2-H, H-1/2; H+1/2; (s-t)/s)` for any
//! `H ∈ (0,1)`, and the weighted integral form
//! `g(j; t,s) = c_H s^{1/2-H} ∫_s^t u^{H-1/2} (u-s)^{H-3/2} j(u) du` for
//! `H ∈ (1/2, 1)` with bounded `j`; the two coincide for `j ≡ 1`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Ensemble, GridPath, GridSpec, PathMeta};
use crate::levy::LevyTriplet;
use crate::par;
use crate::quad;
use crate::special::{beta, gamma, hyp2f1_nonpos};
use crate::stats;

/// Row caches are materialized up to this many grid points; larger grids
/// recompute kernel rows on demand.
const CACHE_MAX_POINTS: usize = 1 << 14;

/// Boundedness / regularity annotations carried by custom kernels, consumed
/// by the condition checkers' fast paths.
#[derive(Debug, Clone, Copy, Default)]
pub struct KernelAnnotations {
    /// `|g(t,s)| <= bound` on the whole triangle.
    pub bound: Option<f64>,
    /// `|g(t,s) - g(v,s)| <= c |t - v|^{1/2}`.
    pub half_holder_in_t: Option<f64>,
}

#[derive(Clone)]
pub enum VolterraKernel {
    /// Molchan–Golosov kernel with Hurst parameter `H ∈ (0,1)`.
    MolchanGolosov { h: f64 },
    /// Integral form `c_H s^{1/2-H} ∫_s^t u^{H-1/2}(u-s)^{H-3/2} j(u) du`,
    /// `H ∈ (1/2,1)`, `|j| <= j_bound`.
    ExampleWeighted {
        h: f64,
        j: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        j_bound: f64,
    },
    Custom {
        eval: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
        annotations: KernelAnnotations,
    },
}

impl std::fmt::Debug for VolterraKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VolterraKernel::MolchanGolosov { h } => write!(f, "MolchanGolosov {{ h: {h} }}"),
            VolterraKernel::ExampleWeighted { h, j_bound, .. } => {
                write!(f, "ExampleWeighted {{ h: {h}, j_bound: {j_bound} }}")
            }
            VolterraKernel::Custom { annotations, .. } => {
                write!(f, "Custom {{ annotations: {annotations:?} }}")
            }
        }
    }
}

/// `C_H` of the hypergeometric Molchan–Golosov form.
pub fn mg_big_const(h: f64) -> f64 {
    (2.0 * h * gamma(1.5 - h) / (gamma(h + 0.5) * gamma(2.0 - 2.0 * h))).sqrt()
}

/// `c_H = (H(2H-1) / B(2-2H, H-1/2))^{1/2}` of the integral form, `H > 1/2`.
pub fn mg_small_const(h: f64) -> f64 {
    (h * (2.0 * h - 1.0) / beta(2.0 - 2.0 * h, h - 0.5)).sqrt()
}

impl VolterraKernel {
    pub fn molchan_golosov(h: f64) -> Result<Self> {
        if !(0.0 < h && h < 1.0) {
            return Err(Error::invalid(format!("Hurst parameter {h} outside (0,1)")));
        }
        Ok(VolterraKernel::MolchanGolosov { h })
    }

    pub fn example_weighted(
        h: f64,
        j: impl Fn(f64) -> f64 + Send + Sync + 'static,
        j_bound: f64,
    ) -> Result<Self> {
        if !(0.5 < h && h < 1.0) {
            return Err(Error::invalid(format!(
                "integral-form kernel needs H in (1/2,1), got {h}"
            )));
        }
        if !(j_bound > 0.0) {
            return Err(Error::invalid("j must come with a positive bound"));
        }
        Ok(VolterraKernel::ExampleWeighted { h, j: Arc::new(j), j_bound })
    }

    pub fn constant(value: f64) -> Self {
        VolterraKernel::Custom {
            eval: Arc::new(move |_t, _s| value),
            annotations: KernelAnnotations {
                bound: Some(value.abs()),
                half_holder_in_t: Some(0.0),
            },
        }
    }

    pub fn custom(
        eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        annotations: KernelAnnotations,
    ) -> Self {
        VolterraKernel::Custom { eval: Arc::new(eval), annotations }
    }

    pub fn annotations(&self) -> KernelAnnotations {
        match self {
            VolterraKernel::Custom { annotations, .. } => *annotations,
            _ => KernelAnnotations::default(),
        }
    }

    pub fn label(&self) -> String {
        format!("{self:?}")
    }

    /// Kernel value at `0 <= s < t`. The Molchan–Golosov families diverge as
    /// `s -> 0` (like a power of `s`), so `s = 0` evaluates to `+∞` for
    /// `H != 1/2`; quadrature against the kernel never places nodes there.
    pub fn eval(&self, t: f64, s: f64) -> Result<f64> {
        if !(s < t) {
            return Err(Error::domain(format!("kernel needs s < t, got s={s}, t={t}")));
        }
        if s < 0.0 {
            return Err(Error::domain("kernel needs s >= 0"));
        }
        Ok(match self {
            VolterraKernel::MolchanGolosov { h } => mg_eval(*h, t, s),
            VolterraKernel::ExampleWeighted { h, j, .. } => weighted_eval(*h, &**j, t, s),
            VolterraKernel::Custom { eval, .. } => eval(t, s),
        })
    }

    /// Stable difference `g(t1, s) - g(t0, s)` for `s < t0 <= t1`; evaluated
    /// as a single integral for the integral-form families so that nearby
    /// arguments do not cancel.
    pub fn eval_diff(&self, t1: f64, t0: f64, s: f64) -> Result<f64> {
        if !(s < t0 && t0 <= t1) {
            return Err(Error::domain(format!(
                "eval_diff needs s < t0 <= t1, got s={s}, t0={t0}, t1={t1}"
            )));
        }
        if t0 == t1 {
            return Ok(0.0);
        }
        Ok(match self {
            VolterraKernel::MolchanGolosov { h } => {
                if (*h - 0.5).abs() < 1e-14 {
                    0.0
                } else if *h > 0.5 {
                    weighted_tail_integral(*h, &|_| 1.0, t1, t0, s)
                } else {
                    mg_eval(*h, t1, s) - mg_eval(*h, t0, s)
                }
            }
            VolterraKernel::ExampleWeighted { h, j, .. } => {
                weighted_tail_integral(*h, &**j, t1, t0, s)
            }
            VolterraKernel::Custom { eval, .. } => eval(t1, s) - eval(t0, s),
        })
    }
}

fn mg_eval(h: f64, t: f64, s: f64) -> f64 {
    if (h - 0.5).abs() < 1e-14 {
        return 1.0;
    }
    if s == 0.0 {
        return f64::INFINITY;
    }
    let z = (s - t) / s;
    let f = hyp2f1_nonpos(0.5 - h, h - 0.5, h + 0.5, z);
    mg_big_const(h) * (t - s).powf(h - 0.5) * f
}

/// `c_H s^{1/2-H} ∫_s^t u^{H-1/2}(u-s)^{H-3/2} j(u) du` via the substitution
/// `u = s + (t-s) v^{1/(H-1/2)}`, which removes the endpoint singularity
/// exactly (the Jacobian cancels `(u-s)^{H-3/2}` for any `j`).
fn weighted_eval(h: f64, j: &(dyn Fn(f64) -> f64 + Send + Sync), t: f64, s: f64) -> f64 {
    if s == 0.0 {
        return f64::INFINITY;
    }
    let q = 1.0 / (h - 0.5);
    let gl = quad::rule(16);
    let integrand = |v: f64| {
        let u = s + (t - s) * v.powf(q);
        u.powf(h - 0.5) * j(u)
    };
    let mut acc = 0.0;
    for k in 0..4 {
        acc += gl.integrate(0.25 * k as f64, 0.25 * (k + 1) as f64, integrand);
    }
    mg_small_const(h) * s.powf(0.5 - h) * (t - s).powf(h - 0.5) * q * acc
}

/// `c_H s^{1/2-H} ∫_{t0}^{t1} u^{H-1/2}(u-s)^{H-3/2} j(u) du` — the exact
/// t-increment of the integral-form kernel. The integrand is smooth on
/// `[t0, t1]` because `u - s >= t0 - s > 0`.
fn weighted_tail_integral(
    h: f64,
    j: &(dyn Fn(f64) -> f64 + Send + Sync),
    t1: f64,
    t0: f64,
    s: f64,
) -> f64 {
    let gl = quad::rule(8);
    let integrand = |u: f64| u.powf(h - 0.5) * (u - s).powf(h - 1.5) * j(u);
    // The integrand varies on the scale of u - s, which near t0 is the gap
    // t0 - s and may be far smaller than the span; geometric panels from t0
    // at the gap scale resolve that boundary layer.
    let span = t1 - t0;
    let gap = t0 - s;
    let mut acc = 0.0;
    if span <= 2.0 * gap {
        for k in 0..4 {
            let (a, b) = (
                t0 + span * k as f64 / 4.0,
                t0 + span * (k + 1) as f64 / 4.0,
            );
            acc += gl.integrate(a, b, integrand);
        }
    } else {
        // Edges t0 + gap·(q^k - 1), q = 2, capped at t1; the first panel has
        // width ~gap where the weight is effectively constant.
        let mut lo = t0;
        let mut step = gap.max(span * 1e-15);
        while lo < t1 {
            let hi = (lo + step).min(t1);
            acc += gl.integrate(lo, hi, integrand);
            lo = hi;
            step *= 2.0;
        }
    }
    mg_small_const(h) * s.powf(0.5 - h) * acc
}

/// A Volterra path built from one driver path.
#[derive(Debug, Clone)]
pub struct VolterraPath {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    pub driver_meta: PathMeta,
    pub kernel_meta: String,
}

impl VolterraPath {
    pub fn as_grid_path(&self) -> GridPath {
        GridPath {
            grid: self.grid,
            values: self.values.clone(),
            meta: self.driver_meta.clone(),
        }
    }
}

/// Lower-triangular cache of `g(t_i, s_j*)` with `s_j*` the midpoint of
/// `[t_j, t_{j+1}]`. Rows are built in parallel and read-only afterwards.
pub struct KernelGrid {
    grid: GridSpec,
    /// Row i (i = 1..=n) holds entries j = 0..i; `None` above the cache cap,
    /// in which case rows are recomputed per use.
    rows: Option<Vec<Vec<f64>>>,
    kernel: VolterraKernel,
}

impl KernelGrid {
    pub fn new(kernel: &VolterraKernel, grid: GridSpec) -> Result<Self> {
        if grid.t0 != 0.0 {
            return Err(Error::invalid("Volterra paths start at t0 = 0"));
        }
        let rows = if grid.points() <= CACHE_MAX_POINTS {
            let k = kernel.clone();
            let rows: Vec<Result<Vec<f64>>> =
                par::map_indexed(grid.n, |i| kernel_row(&k, grid, i + 1));
            let mut out = Vec::with_capacity(grid.n);
            for r in rows {
                out.push(r?);
            }
            Some(out)
        } else {
            None
        };
        Ok(KernelGrid {
            grid,
            rows,
            kernel: kernel.clone(),
        })
    }

    fn row(&self, i: usize) -> Result<std::borrow::Cow<'_, [f64]>> {
        match &self.rows {
            Some(rows) => Ok(std::borrow::Cow::Borrowed(&rows[i - 1])),
            None => Ok(std::borrow::Cow::Owned(kernel_row(&self.kernel, self.grid, i)?)),
        }
    }
}

fn kernel_row(kernel: &VolterraKernel, grid: GridSpec, i: usize) -> Result<Vec<f64>> {
    let t_i = grid.time(i);
    (0..i)
        .map(|j| {
            let s_mid = grid.time(j) + 0.5 * grid.dt;
            kernel.eval(t_i, s_mid)
        })
        .collect()
}

/// `Y_{t_i} = Σ_{j<i} g(t_i, s_j*) ΔZ_j`: left driver increments against
/// midpoint kernel nodes (the midpoint tempers the edge singularity of
/// `(t-s)^{H-1/2}` while the increment stays non-anticipating). Cost O(n²).
pub fn build_path_cached(kg: &KernelGrid, z: &GridPath) -> Result<VolterraPath> {
    if z.grid != kg.grid {
        return Err(Error::invalid("driver grid does not match kernel grid"));
    }
    let n = kg.grid.n;
    let mut increments = Vec::with_capacity(n);
    for j in 0..n {
        increments.push(z.values[j + 1] - z.values[j]);
    }
    let mut values = Vec::with_capacity(n + 1);
    values.push(0.0);
    for i in 1..=n {
        let row = kg.row(i)?;
        // Neumaier-compensated inner product keeps the accumulation
        // order-stable.
        let mut acc = 0.0;
        let mut comp = 0.0;
        for (g, dz) in row.iter().zip(&increments) {
            let x = g * dz;
            let t = acc + x;
            if acc.abs() >= x.abs() {
                comp += (acc - t) + x;
            } else {
                comp += (x - t) + acc;
            }
            acc = t;
        }
        values.push(acc + comp);
    }
    Ok(VolterraPath {
        grid: kg.grid,
        values,
        driver_meta: z.meta.clone(),
        kernel_meta: kg.kernel.label(),
    })
}

/// Convenience wrapper: build the row cache and one path.
pub fn build_path(kernel: &VolterraKernel, z: &GridPath) -> Result<VolterraPath> {
    let kg = KernelGrid::new(kernel, z.grid)?;
    build_path_cached(&kg, z)
}

/// Sample a driver ensemble and push every path through the kernel.
pub fn build_ensemble(
    kernel: &VolterraKernel,
    triplet: &LevyTriplet,
    grid: GridSpec,
    n_paths: usize,
    seed: u64,
) -> Result<Ensemble> {
    let kg = KernelGrid::new(kernel, grid)?;
    let rows: Vec<Result<Vec<f64>>> = par::map_indexed(n_paths, |i| {
        let z = triplet.sample_path_indexed(grid, seed, i as u64)?;
        Ok(build_path_cached(&kg, &z)?.values)
    });
    let mut paths = Vec::with_capacity(n_paths);
    for r in rows {
        paths.push(r?);
    }
    Ok(Ensemble { grid, paths })
}

/// The two pieces of `Y_t - Y_s`: the boundary integral `∫_s^t g(t,u) dZ_u`
/// and the history integral `∫_0^s (g(t,u) - g(s,u)) dZ_u`, both on the same
/// quadrature nodes as `build_path`, so their sum reproduces `Y_t - Y_s`
/// to floating-point accuracy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncrementDecomposition {
    pub boundary_term: f64,
    pub history_term: f64,
}

pub fn increment_decomposition(
    kernel: &VolterraKernel,
    z: &GridPath,
    s_idx: usize,
    t_idx: usize,
) -> Result<IncrementDecomposition> {
    if s_idx >= t_idx || t_idx > z.grid.n {
        return Err(Error::invalid(format!(
            "need s_idx < t_idx <= n, got {s_idx}, {t_idx}, n={}",
            z.grid.n
        )));
    }
    let t_t = z.grid.time(t_idx);
    let t_s = z.grid.time(s_idx);
    let mut boundary = 0.0;
    for j in s_idx..t_idx {
        let s_mid = z.grid.time(j) + 0.5 * z.grid.dt;
        boundary += kernel.eval(t_t, s_mid)? * (z.values[j + 1] - z.values[j]);
    }
    let mut history = 0.0;
    for j in 0..s_idx {
        let s_mid = z.grid.time(j) + 0.5 * z.grid.dt;
        // Direct difference of the same evaluations build_path uses, so the
        // two terms recombine to Y_t - Y_s at floating-point level.
        history += (kernel.eval(t_t, s_mid)? - kernel.eval(t_s, s_mid)?)
            * (z.values[j + 1] - z.values[j]);
    }
    Ok(IncrementDecomposition {
        boundary_term: boundary,
        history_term: history,
    })
}

/// Variogram (structure-function) estimate of the Hölder exponent across an
/// ensemble: OLS slope of `log E|Δ_h Y|²` against `log h`, divided by two.
#[derive(Debug, Clone, Copy)]
pub struct HolderEstimate {
    pub exponent: f64,
    pub stderr: f64,
}

pub fn holder_exponent_estimate(
    paths: &[&[f64]],
    lags: &[usize],
    dt: f64,
) -> Result<HolderEstimate> {
    if lags.len() < 4 {
        return Err(Error::invalid("need at least 4 lags"));
    }
    let max_len = paths.iter().map(|p| p.len()).min().unwrap_or(0);
    if lags.iter().any(|&l| l == 0 || l + 1 >= max_len) {
        return Err(Error::invalid("lags must be nonzero and inside the grid"));
    }
    let (exponent, stderr) = stats::variogram_exponent(paths, lags, dt);
    Ok(HolderEstimate { exponent, stderr })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::WindowOpts;

    #[test]
    fn half_hurst_kernel_is_one() {
        let k = VolterraKernel::molchan_golosov(0.5).unwrap();
        for &(t, s) in &[(1.0, 0.0), (1.0, 0.5), (0.3, 0.29)] {
            assert_eq!(k.eval(t, s).unwrap(), 1.0);
        }
    }

    #[test]
    fn kernel_rejects_bad_domain() {
        let k = VolterraKernel::molchan_golosov(0.7).unwrap();
        assert!(k.eval(0.5, 0.5).is_err());
        assert!(k.eval(0.5, 0.7).is_err());
        assert!(k.eval(0.5, -0.1).is_err());
        assert!(VolterraKernel::molchan_golosov(1.2).is_err());
        assert!(VolterraKernel::example_weighted(0.4, |_| 1.0, 1.0).is_err());
    }

    #[test]
    fn representations_agree_for_unit_weight() {
        // Hypergeometric vs integral form, rel 1e-5 over a probe grid.
        for &h in &[0.55, 0.7, 0.9] {
            let mg = VolterraKernel::molchan_golosov(h).unwrap();
            let ex = VolterraKernel::example_weighted(h, |_| 1.0, 1.0).unwrap();
            for &(t, s) in &[(1.0, 0.5), (1.0, 0.05), (2.0, 1.7), (0.8, 0.2), (1.0, 0.999)] {
                let a = mg.eval(t, s).unwrap();
                let b = ex.eval(t, s).unwrap();
                assert!(
                    (a - b).abs() <= 1e-5 * a.abs().max(1e-12),
                    "H={h} (t,s)=({t},{s}): {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn zero_weight_gives_zero_kernel() {
        let k = VolterraKernel::example_weighted(0.7, |_| 0.0, 1.0).unwrap();
        assert_eq!(k.eval(1.0, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn mg_kernel_l2_norm_is_fbm_variance() {
        // ∫_0^t g_H(t,s)² ds = t^{2H} — the fBm normalization.
        for &h in &[0.6, 0.75] {
            let k = VolterraKernel::molchan_golosov(h).unwrap();
            for &t in &[0.5, 1.0] {
                let f = |s: f64| k.eval(t, s).unwrap().powi(2);
                let lo = quad::integrate_lower_singular(f, 0.0, t / 2.0, WindowOpts::default());
                let hi = quad::integrate_upper_singular(f, t / 2.0, t, WindowOpts::default());
                let norm = lo.value + hi.value;
                let target = t.powf(2.0 * h);
                assert!(
                    (norm - target).abs() < 2e-6 * target,
                    "H={h}, t={t}: {norm} vs {target}"
                );
            }
        }
    }

    #[test]
    fn eval_diff_matches_direct_difference_where_stable() {
        let k = VolterraKernel::example_weighted(0.7, |u| 1.0 + 0.3 * u, 2.0).unwrap();
        let (t1, t0, s) = (1.0, 0.8, 0.3);
        let direct = k.eval(t1, s).unwrap() - k.eval(t0, s).unwrap();
        let stable = k.eval_diff(t1, t0, s).unwrap();
        assert!((direct - stable).abs() < 1e-9 * direct.abs().max(1e-9));
    }

    #[test]
    fn constant_kernel_reproduces_driver() {
        let grid = GridSpec::new(0.0, 0.125, 8).unwrap();
        let z = GridPath::from_fn(grid, "wiggle", |t| (3.0 * t).sin());
        let y = build_path(&VolterraKernel::constant(1.0), &z).unwrap();
        for i in 0..=8 {
            assert!((y.values[i] - (z.values[i] - z.values[0])).abs() < 1e-14);
        }
    }

    #[test]
    fn build_path_is_linear_in_driver() {
        let grid = GridSpec::new(0.0, 1.0 / 64.0, 64).unwrap();
        let k = VolterraKernel::molchan_golosov(0.7).unwrap();
        let z1 = GridPath::from_fn(grid, "a", |t| (5.0 * t).sin());
        let z2 = GridPath::from_fn(grid, "b", |t| t * t);
        let zsum = GridPath::from_fn(grid, "a+b", |t| (5.0 * t).sin() + t * t);
        let y1 = build_path(&k, &z1).unwrap();
        let y2 = build_path(&k, &z2).unwrap();
        let ysum = build_path(&k, &zsum).unwrap();
        for i in 0..=64 {
            let lhs = ysum.values[i];
            let rhs = y1.values[i] + y2.values[i];
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn volterra_property_ignores_future_increments() {
        let grid = GridSpec::new(0.0, 0.125, 8).unwrap();
        let k = VolterraKernel::molchan_golosov(0.7).unwrap();
        let z1 = GridPath::from_fn(grid, "a", |t| t);
        // Same path up to index 4, different afterwards.
        let mut vals = z1.values.clone();
        for v in vals.iter_mut().skip(5) {
            *v += 10.0;
        }
        let z2 = GridPath::new(grid, vals, PathMeta::default()).unwrap();
        let y1 = build_path(&k, &z1).unwrap();
        let y2 = build_path(&k, &z2).unwrap();
        for i in 0..=4 {
            assert_eq!(y1.values[i], y2.values[i], "index {i}");
        }
        assert_ne!(y1.values[6], y2.values[6]);
    }

    #[test]
    fn increment_decomposition_is_exact_rearrangement() {
        let grid = GridSpec::new(0.0, 1.0 / 32.0, 32).unwrap();
        let k = VolterraKernel::molchan_golosov(0.7).unwrap();
        let z = GridPath::from_fn(grid, "rough", |t| (17.0 * t).sin() + 0.5 * t);
        let y = build_path(&k, &z).unwrap();
        for &(si, ti) in &[(0usize, 5usize), (3, 20), (10, 32)] {
            let d = increment_decomposition(&k, &z, si, ti).unwrap();
            let diff = y.values[ti] - y.values[si];
            let got = d.boundary_term + d.history_term;
            assert!(
                (got - diff).abs() <= 1e-12 * diff.abs().max(1.0),
                "({si},{ti}): {got} vs {diff}"
            );
            if si == 0 {
                assert_eq!(d.history_term, 0.0);
            }
        }
        // constant kernel: history term vanishes identically
        let kc = VolterraKernel::constant(2.0);
        let d = increment_decomposition(&kc, &z, 7, 19).unwrap();
        assert_eq!(d.history_term, 0.0);
    }

    #[test]
    fn holder_estimate_of_deterministic_ramp_is_one() {
        let grid = GridSpec::new(0.0, 1.0 / 512.0, 512).unwrap();
        let p = GridPath::from_fn(grid, "ramp", |t| t);
        let slices = [p.values.as_slice()];
        let est = holder_exponent_estimate(&slices, &[1, 2, 4, 8, 16], grid.dt).unwrap();
        assert!((est.exponent - 1.0).abs() < 1e-10);
    }

    #[test]
    fn holder_estimate_needs_enough_lags() {
        let grid = GridSpec::new(0.0, 0.25, 4).unwrap();
        let p = GridPath::from_fn(grid, "ramp", |t| t);
        let slices = [p.values.as_slice()];
        assert!(holder_exponent_estimate(&slices, &[1, 2, 4], grid.dt).is_err());
        assert!(holder_exponent_estimate(&slices, &[1, 2, 4, 8], grid.dt).is_err());
    }
}

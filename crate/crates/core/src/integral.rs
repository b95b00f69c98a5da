//! Integration of deterministic functions against Lévy drivers: the `r(u)`
//! integrability criterion, the discrete (left-point) integral, the law of
//! `∫ f dZ` through its characteristic function, exact second moments and the
//! a-priori moment-bound right-hand sides, plus a Monte Carlo scaling
//! verifier for those bounds.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{GridPath, GridSpec};
use crate::levy::{tau, ExtendedMoment, LevyTriplet};
use crate::quad;
use crate::stats;

/// A deterministic integrand on `[0, T]`.
#[derive(Clone)]
pub enum DeterministicFunction {
    /// Piecewise constant: `levels[j]` on `[breaks[j], breaks[j+1])` where
    /// the break list implicitly starts at 0 and ends at T.
    Step {
        t_end: f64,
        /// Interior breakpoints, strictly increasing inside `(0, T)`.
        breakpoints: Vec<f64>,
        /// One level per interval; `levels.len() == breakpoints.len() + 1`.
        levels: Vec<f64>,
    },
    Callable {
        t_end: f64,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        /// Optional Hölder exponent annotation.
        holder: Option<f64>,
    },
}

impl std::fmt::Debug for DeterministicFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DeterministicFunction::Step { t_end, breakpoints, levels } => write!(
                f,
                "Step {{ t_end: {t_end}, breakpoints: {breakpoints:?}, levels: {levels:?} }}"
            ),
            DeterministicFunction::Callable { t_end, holder, .. } => {
                write!(f, "Callable {{ t_end: {t_end}, holder: {holder:?} }}")
            }
        }
    }
}

impl DeterministicFunction {
    pub fn constant(c: f64, t_end: f64) -> Self {
        DeterministicFunction::Step {
            t_end,
            breakpoints: Vec::new(),
            levels: vec![c],
        }
    }

    pub fn step(breakpoints: Vec<f64>, levels: Vec<f64>, t_end: f64) -> Result<Self> {
        if levels.len() != breakpoints.len() + 1 {
            return Err(Error::invalid("need one more level than breakpoints"));
        }
        if !breakpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("breakpoints must be strictly increasing"));
        }
        if breakpoints.iter().any(|&b| b <= 0.0 || b >= t_end) {
            return Err(Error::invalid("breakpoints must lie strictly inside (0, T)"));
        }
        Ok(DeterministicFunction::Step { t_end, breakpoints, levels })
    }

    pub fn callable(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        t_end: f64,
        holder: Option<f64>,
    ) -> Self {
        DeterministicFunction::Callable { t_end, f: Arc::new(f), holder }
    }

    pub fn t_end(&self) -> f64 {
        match self {
            DeterministicFunction::Step { t_end, .. } => *t_end,
            DeterministicFunction::Callable { t_end, .. } => *t_end,
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            DeterministicFunction::Step { breakpoints, levels, .. } => {
                let idx = breakpoints.partition_point(|&b| b <= s);
                levels[idx]
            }
            DeterministicFunction::Callable { f, .. } => f(s),
        }
    }

    /// Intervals `(length, level)` of a step function, including the implicit
    /// first and last pieces.
    fn pieces(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            DeterministicFunction::Step { t_end, breakpoints, levels } => {
                let mut edges = Vec::with_capacity(breakpoints.len() + 2);
                edges.push(0.0);
                edges.extend_from_slice(breakpoints);
                edges.push(*t_end);
                Some(
                    edges
                        .windows(2)
                        .zip(levels)
                        .map(|(w, &l)| (w[1] - w[0], l))
                        .collect(),
                )
            }
            DeterministicFunction::Callable { .. } => None,
        }
    }

    /// `∫_0^T w(f(s)) ds`, exact for step functions.
    pub fn integrate_composed(&self, w: &dyn Fn(f64) -> f64) -> f64 {
        match self.pieces() {
            Some(pieces) => stats::compensated_sum(pieces.iter().map(|&(len, l)| len * w(l))),
            None => quad::integrate_smooth(|s| w(self.eval(s)), 0.0, self.t_end(), 16, 64),
        }
    }

    /// `‖f‖_{L_p}^p` on `[0, T]`.
    pub fn lp_norm_pow(&self, p: f64) -> f64 {
        self.integrate_composed(&|u: f64| u.abs().powf(p))
    }

    /// `∫_0^T f(s) ds`.
    pub fn integral(&self) -> f64 {
        self.integrate_composed(&|u| u)
    }
}

/// Outcome of the Rajput–Rosinski criterion `∫_0^T r(f(s)) ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct RCriterion {
    /// `∫ r(f(s)) ds`, or `+∞` when the kernel is non-integrable.
    pub value: f64,
    pub integrable: bool,
}

/// Z-integrability of `f`: finite `∫_0^T r(f(s)) ds` with
/// `r(u) = a u² + ∫(|xu|²∧1) π(dx) + |b u + ∫(τ(xu) - τ(x)u) π(dx)|`.
pub fn r_criterion(triplet: &LevyTriplet, f: &DeterministicFunction) -> Result<RCriterion> {
    let value = match f.pieces() {
        Some(pieces) => {
            let mut acc = 0.0;
            for (len, level) in pieces {
                acc += len * triplet.r_function(level)?;
            }
            acc
        }
        None => {
            // r is continuous in u, so composing with a continuous f keeps
            // the time integrand quadrature-friendly.
            let t_end = f.t_end();
            let gl = quad::rule(16);
            let panels = 32;
            let h = t_end / panels as f64;
            let mut acc = 0.0;
            for i in 0..panels {
                let a = i as f64 * h;
                let mut err = None;
                acc += gl.integrate(a, a + h, |s| match triplet.r_function(f.eval(s)) {
                    Ok(v) => v,
                    Err(e) => {
                        err = Some(e);
                        f64::NAN
                    }
                });
                if let Some(e) = err {
                    return Err(e);
                }
            }
            acc
        }
    };
    Ok(RCriterion {
        value,
        integrable: value.is_finite(),
    })
}

/// Discrete integral `Σ_j f(t_j) (Z_{t_{j+1}} - Z_{t_j})` — the simple-function
/// approximation with left-point evaluation, non-anticipating by construction.
pub fn integrate_deterministic(f: &DeterministicFunction, z: &GridPath) -> Result<f64> {
    let t_end = z.grid.t_end();
    if f.t_end() < t_end - 1e-12 * t_end.abs().max(1.0) {
        return Err(Error::domain(format!(
            "integrand lives on [0, {}] but path runs to {}",
            f.t_end(),
            t_end
        )));
    }
    Ok(stats::compensated_sum((0..z.grid.n).map(|j| {
        f.eval(z.grid.time(j)) * (z.values[j + 1] - z.values[j])
    })))
}

/// The law of `∫_{[0,T]} f dZ` as a Lévy characteristic triple evaluator.
pub struct IntegralLawSpec {
    pub b_f: f64,
    pub a_f: f64,
    triplet: LevyTriplet,
    f: DeterministicFunction,
}

impl IntegralLawSpec {
    /// Characteristic function `λ ↦ exp{ ∫_0^T Ψ(λ f(s)) ds }`.
    pub fn cf(&self, lambda: f64) -> Result<Complex64> {
        Ok(self.cf_exponent(lambda)?.exp())
    }

    /// The exponent `∫_0^T Ψ(λ f(s)) ds`.
    pub fn cf_exponent(&self, lambda: f64) -> Result<Complex64> {
        match self.f.pieces() {
            Some(pieces) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (len, level) in pieces {
                    acc += len * self.triplet.characteristic_exponent(lambda * level)?;
                }
                Ok(acc)
            }
            None => {
                let gl = quad::rule(12);
                let panels = 24;
                let h = self.f.t_end() / panels as f64;
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..panels {
                    let a = i as f64 * h;
                    let c = a + 0.5 * h;
                    let half = 0.5 * h;
                    let mut panel = Complex64::new(0.0, 0.0);
                    for (x, w) in gl.nodes().iter().zip(gl.weights()) {
                        let s = c + half * x;
                        panel +=
                            *w * self.triplet.characteristic_exponent(lambda * self.f.eval(s))?;
                    }
                    acc += panel * half;
                }
                Ok(acc)
            }
        }
    }
}

/// Build the law of `∫ f dZ`; requires Z-integrability.
pub fn integral_law(triplet: &LevyTriplet, f: &DeterministicFunction) -> Result<IntegralLawSpec> {
    let r = r_criterion(triplet, f)?;
    if !r.integrable {
        return Err(Error::precondition(format!(
            "f is not Z-integrable: ∫ r(f(s)) ds = {}",
            r.value
        )));
    }
    let a_f = triplet.diffusion_a * f.lp_norm_pow(2.0);
    let b_f = match f.pieces() {
        Some(pieces) => {
            let mut acc = 0.0;
            for (len, level) in pieces {
                acc += len * (triplet.drift_b * level + triplet.r_tau_part(level)?);
            }
            acc
        }
        None => {
            let fun = |s: f64| {
                let u = f.eval(s);
                triplet.drift_b * u + triplet.r_tau_part(u).unwrap_or(f64::NAN)
            };
            quad::integrate_smooth(fun, 0.0, f.t_end(), 12, 32)
        }
    };
    Ok(IntegralLawSpec {
        b_f,
        a_f,
        triplet: triplet.clone(),
        f: f.clone(),
    })
}

/// Exact second moment `E|∫ f dZ|² = ‖f‖²_{L₂} (a + ∫ x² π(dx))` under
/// `b = 0`, symmetric π, finite second π-moment.
pub fn second_moment_exact(triplet: &LevyTriplet, f: &DeterministicFunction) -> Result<f64> {
    if triplet.drift_b != 0.0 {
        return Err(Error::precondition("second_moment_exact needs b = 0"));
    }
    if !triplet.symmetric() {
        return Err(Error::precondition("second_moment_exact needs symmetric π"));
    }
    let x2 = match triplet.pi_second_moment()? {
        ExtendedMoment::Finite(v) => v,
        ExtendedMoment::Infinite { .. } => {
            return Err(Error::precondition("∫ x² π(dx) is infinite"))
        }
    };
    Ok(f.lp_norm_pow(2.0) * (triplet.diffusion_a + x2))
}

/// General-b second moment:
/// `(∫f)² (b + ∫(x-τ(x))π)² + ‖f‖²_{L₂} (a + ∫x²π)`.
pub fn second_moment_general(triplet: &LevyTriplet, f: &DeterministicFunction) -> Result<f64> {
    let x2 = match triplet.pi_second_moment()? {
        ExtendedMoment::Finite(v) => v,
        ExtendedMoment::Infinite { .. } => {
            return Err(Error::precondition("∫ x² π(dx) is infinite"))
        }
    };
    // ∫ (x - τ(x)) π(dx): only |x| > 1 contributes.
    let shift = if triplet.symmetric() {
        0.0
    } else {
        match &triplet.measure {
            crate::levy::LevyMeasureSpec::Atoms(atoms) => {
                atoms.iter().map(|&(x, m)| m * (x - tau(x))).sum()
            }
            _ => {
                let eval = |x: f64| triplet.measure_density(x).unwrap_or(f64::NAN);
                let mut acc = 0.0;
                for sign in [1.0f64, -1.0] {
                    let g = move |x: f64| (sign * x - sign) * eval(sign * x);
                    let t = quad::integrate_tail(&g, 1.0, quad::TailOpts::default());
                    if t.is_divergent() {
                        return Err(Error::precondition("∫ |x - τ(x)| π(dx) diverges"));
                    }
                    acc += t.value;
                }
                acc
            }
        }
    };
    let centering = triplet.drift_b + shift;
    Ok(f.integral().powi(2) * centering * centering
        + f.lp_norm_pow(2.0) * (triplet.diffusion_a + x2))
}

/// Structural right-hand side of the a-priori p-th moment bounds.
#[derive(Debug, Clone)]
pub struct MomentBoundRhs {
    pub p: f64,
    /// `‖f‖_p^p ∫|x|^p π(dx)`; `None` when the π-moment is infinite.
    pub jump_term: Option<f64>,
    /// `a^{p/2} ‖f‖_2^p`.
    pub diffusion_term: f64,
    /// `|b|^p ‖f‖_1^p`.
    pub drift_term: f64,
    /// Bound for p in [1,2): needs a = b = 0, symmetric π, finite π-moment.
    pub applicable_low: bool,
    /// Bound for p >= 2: needs b = 0, symmetric π, finite π-moment.
    pub applicable_high: bool,
    /// Drifted variant (adds the |b|-term), symmetric π and finite π-moment.
    pub applicable_drifted: bool,
}

impl MomentBoundRhs {
    /// The applicable right-hand side (up to the unnamed constant).
    pub fn value(&self) -> Option<f64> {
        let jump = self.jump_term?;
        if self.applicable_low {
            Some(jump)
        } else if self.applicable_high {
            Some(self.diffusion_term + jump)
        } else if self.applicable_drifted {
            Some(self.drift_term + self.diffusion_term + jump)
        } else {
            None
        }
    }
}

/// Assemble the structural terms of the p-th moment bound for `∫ f dZ`.
pub fn moment_bound_rhs(
    triplet: &LevyTriplet,
    f: &DeterministicFunction,
    p: f64,
) -> Result<MomentBoundRhs> {
    if p < 1.0 {
        return Err(Error::invalid("moment bounds need p >= 1"));
    }
    let pi_p = triplet.pi_abs_moment(p)?;
    let jump_term = pi_p.finite().map(|m| f.lp_norm_pow(p) * m);
    let symmetric = triplet.symmetric();
    let finite = jump_term.is_some();
    Ok(MomentBoundRhs {
        p,
        jump_term,
        diffusion_term: triplet.diffusion_a.powf(p / 2.0) * f.lp_norm_pow(2.0).powf(p / 2.0),
        drift_term: triplet.drift_b.abs().powf(p) * f.integrate_composed(&|u| u.abs()).powf(p),
        applicable_low: p < 2.0
            && triplet.diffusion_a == 0.0
            && triplet.drift_b == 0.0
            && symmetric
            && finite,
        applicable_high: p >= 2.0 && triplet.drift_b == 0.0 && symmetric && finite,
        applicable_drifted: symmetric && finite,
    })
}

/// Monte Carlo check that `E|∫ c·f dZ|^p / RHS(c·f)` stays flat in `c`
/// (the bound is exactly p-homogeneous, so the ratio curve must be constant
/// up to Monte Carlo error).
#[derive(Debug, Clone)]
pub struct ScalingReport {
    /// `(c, ratio, standard error of the ratio)` per scale.
    pub ratio_curve: Vec<(f64, f64, f64)>,
    pub monotone_bounded: bool,
}

pub fn verify_moment_scaling(
    triplet: &LevyTriplet,
    f: &DeterministicFunction,
    p: f64,
    grid: GridSpec,
    n_paths: usize,
    seed: u64,
) -> Result<ScalingReport> {
    let rhs_unit = moment_bound_rhs(triplet, f, p)?
        .value()
        .ok_or_else(|| Error::precondition("no applicable moment bound for this triplet"))?;
    let mut curve = Vec::new();
    for (k, &c) in [1.0f64, 2.0, 4.0, 8.0].iter().enumerate() {
        // independent paths per scale: disjoint path-index blocks
        let base = (k * n_paths) as u64;
        let samples: Vec<f64> = crate::par::map_indexed(n_paths, |i| {
            let z = triplet
                .sample_path_indexed(grid, seed, base + i as u64)
                .expect("sampler");
            c * integrate_deterministic(f, &z).expect("grid integral")
        });
        let (moment, se) = stats::abs_moment_with_se(&samples, p);
        let rhs = c.powf(p) * rhs_unit;
        curve.push((c, moment / rhs, se / rhs));
    }
    // Flat within 3 combined standard errors, pairwise against the first.
    let (_, r0, se0) = curve[0];
    let monotone_bounded = curve
        .iter()
        .all(|&(_, r, se)| r.is_finite() && (r - r0).abs() <= 3.0 * (se + se0) + 1e-12);
    Ok(ScalingReport {
        ratio_curve: curve,
        monotone_bounded,
    })
}

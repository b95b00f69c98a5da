//! Lévy triplets `(a, b, π)`: the characteristic exponent
//! `Ψ(μ) = ibμ - aμ²/2 + ∫ (e^{iμx} - 1 - iμτ(x)) π(dx)`, absolute moments of
//! the Lévy measure, the Rajput–Rosinski `r(u)` building blocks, and driver
//! path sampling for the supported families (diffusion + drift, finite
//! activity, subordinated Wiener).

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::grid::{GridPath, GridSpec, PathMeta};
use crate::quad::{self, TailOpts, WindowOpts};
use crate::rng::substream;
use crate::subordinator::{standard_normal, SubordinatorSpec};

/// The truncation function of the Lévy–Khintchine representation:
/// identity inside `[-1, 1]`, sign outside.
pub fn tau(z: f64) -> f64 {
    if z.abs() <= 1.0 {
        z
    } else {
        z.signum()
    }
}

/// Specification of the Lévy measure π.
#[derive(Clone)]
pub enum LevyMeasureSpec {
    /// Finite list of atoms `(location ≠ 0, mass > 0)`.
    Atoms(Vec<(f64, f64)>),
    /// Density on ℝ∖{0}; may carry an integrable singularity at 0.
    Density {
        density: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        symmetric: bool,
    },
    /// Measure induced by subordination: `ϱ(x) = ∫ (2πs)^{-1/2} e^{-x²/2s} ν(ds)`.
    Subordinated(SubordinatorSpec),
}

impl std::fmt::Debug for LevyMeasureSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LevyMeasureSpec::Atoms(atoms) => write!(f, "Atoms({atoms:?})"),
            LevyMeasureSpec::Density { symmetric, .. } => {
                write!(f, "Density {{ symmetric: {symmetric} }}")
            }
            LevyMeasureSpec::Subordinated(sub) => write!(f, "Subordinated({sub:?})"),
        }
    }
}

/// Extended-real moment of the Lévy measure: finite value or a divergence
/// flag with the site and the refinement evidence.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtendedMoment {
    Finite(f64),
    Infinite {
        site: DivergenceSite,
        trace: Vec<(usize, f64)>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivergenceSite {
    Origin,
    Tail,
}

impl ExtendedMoment {
    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtendedMoment::Finite(v) => Some(*v),
            ExtendedMoment::Infinite { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedMoment::Finite(_))
    }
}

/// Characteristic triplet `(a, b, π)` of a Lévy process.
#[derive(Debug, Clone)]
pub struct LevyTriplet {
    pub diffusion_a: f64,
    pub drift_b: f64,
    pub measure: LevyMeasureSpec,
    moment_cache: Arc<Mutex<HashMap<u64, ExtendedMoment>>>,
}

impl LevyTriplet {
    pub fn new(diffusion_a: f64, drift_b: f64, measure: LevyMeasureSpec) -> Result<Self> {
        if diffusion_a < 0.0 || !diffusion_a.is_finite() {
            return Err(Error::invalid("diffusion coefficient must be nonnegative"));
        }
        if !drift_b.is_finite() {
            return Err(Error::invalid("drift must be finite"));
        }
        match &measure {
            LevyMeasureSpec::Atoms(atoms) => {
                for &(x, m) in atoms {
                    if x == 0.0 {
                        return Err(Error::invalid("atom at the origin is not a Lévy measure"));
                    }
                    if m <= 0.0 {
                        return Err(Error::invalid("atom masses must be strictly positive"));
                    }
                }
            }
            LevyMeasureSpec::Density { density, symmetric } => {
                // ∫ min(x², 1) π(dx) < ∞, checked numerically on both sides.
                for sign in [1.0, -1.0] {
                    let near = quad::integrate_lower_singular(
                        |x| x * x * density(sign * x),
                        0.0,
                        1.0,
                        WindowOpts::default(),
                    );
                    let far =
                        quad::integrate_tail(|x| density(sign * x), 1.0, TailOpts::default());
                    if near.is_divergent() || far.is_divergent() {
                        return Err(Error::invalid(
                            "density fails ∫ min(x²,1) π(dx) < ∞ numerically",
                        ));
                    }
                }
                if *symmetric {
                    for &x in &[0.17, 0.63, 1.3, 2.9, 7.7] {
                        let (p, q) = (density(x), density(-x));
                        if (p - q).abs() > 1e-9 * (1.0 + p.abs()) {
                            return Err(Error::invalid(format!(
                                "symmetric flag set but density({x}) != density({})",
                                -x
                            )));
                        }
                    }
                }
            }
            LevyMeasureSpec::Subordinated(_) => {}
        }
        Ok(LevyTriplet {
            diffusion_a,
            drift_b,
            measure,
            moment_cache: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    /// Pure Brownian triplet `(a, b, 0)`.
    pub fn brownian(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, LevyMeasureSpec::Atoms(Vec::new()))
    }

    /// The subordinated Wiener process `W^L` as a triplet: zero drift,
    /// diffusion equal to the subordinator's drift, Lévy measure `ϱ`.
    pub fn subordinated_wiener(sub: SubordinatorSpec) -> Result<Self> {
        Self::new(sub.drift, 0.0, LevyMeasureSpec::Subordinated(sub))
    }

    /// Whether π is symmetric (exact for atoms, by construction for the
    /// subordinated kind, by annotation for densities).
    pub fn symmetric(&self) -> bool {
        match &self.measure {
            LevyMeasureSpec::Atoms(atoms) => {
                atoms.iter().all(|&(x, m)| {
                    atoms
                        .iter()
                        .any(|&(y, mm)| (y + x).abs() < 1e-12 && (mm - m).abs() < 1e-12)
                })
            }
            LevyMeasureSpec::Density { symmetric, .. } => *symmetric,
            LevyMeasureSpec::Subordinated(_) => true,
        }
    }

    /// Density of π at `x`, when π has one.
    pub fn measure_density(&self, x: f64) -> Option<f64> {
        match &self.measure {
            LevyMeasureSpec::Atoms(_) => None,
            LevyMeasureSpec::Density { density, .. } => Some(density(x)),
            LevyMeasureSpec::Subordinated(sub) => sub.induced_density(x).ok(),
        }
    }

    /// Characteristic exponent `Ψ(μ)`.
    pub fn characteristic_exponent(&self, mu: f64) -> Result<Complex64> {
        if mu == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let smooth = Complex64::new(
            -self.diffusion_a * mu * mu / 2.0,
            self.drift_b * mu,
        );
        let jump = match &self.measure {
            LevyMeasureSpec::Atoms(atoms) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for &(x, m) in atoms {
                    acc += m * Complex64::new((mu * x).cos() - 1.0, (mu * x).sin() - mu * tau(x));
                }
                acc
            }
            LevyMeasureSpec::Density { density, symmetric } => {
                let dens = density.clone();
                if *symmetric {
                    let re = 2.0 * cos_minus_one_integral(&|x| dens(x), mu, 1e-9)?;
                    Complex64::new(re, 0.0)
                } else {
                    let re_pos = cos_minus_one_integral(&|x| dens(x), mu, 1e-9)?;
                    let re_neg = cos_minus_one_integral(&|x| dens(-x), mu, 1e-9)?;
                    let im_pos = sine_tau_integral(&|x| dens(x), mu, 1e-9)?;
                    let im_neg = sine_tau_integral(&|x| dens(-x), -mu, 1e-9)?;
                    Complex64::new(re_pos + re_neg, im_pos - im_neg)
                }
            }
            LevyMeasureSpec::Subordinated(sub) => {
                let sub = sub.clone();
                let re = 2.0
                    * cos_minus_one_integral(
                        &move |x| sub.induced_density(x).unwrap_or(f64::NAN),
                        mu,
                        1e-8,
                    )?;
                Complex64::new(re, 0.0)
            }
        };
        Ok(smooth + jump)
    }

    /// `∫ |x|^p π(dx)` as an extended real; cached per `p`.
    pub fn pi_abs_moment(&self, p: f64) -> Result<ExtendedMoment> {
        if p < 1.0 {
            return Err(Error::invalid("pi_abs_moment needs p >= 1"));
        }
        let key = p.to_bits();
        if let Some(hit) = self.moment_cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let computed = self.pi_abs_moment_uncached(p);
        self.moment_cache
            .lock()
            .unwrap()
            .insert(key, computed.clone());
        Ok(computed)
    }

    fn pi_abs_moment_uncached(&self, p: f64) -> ExtendedMoment {
        match &self.measure {
            LevyMeasureSpec::Atoms(atoms) => {
                ExtendedMoment::Finite(atoms.iter().map(|(x, m)| m * x.abs().powf(p)).sum())
            }
            LevyMeasureSpec::Density { .. } | LevyMeasureSpec::Subordinated(_) => {
                let eval = |x: f64| self.measure_density(x).unwrap_or(f64::NAN);
                let mut total = 0.0;
                for sign in [1.0, -1.0] {
                    let f = move |x: f64| x.powf(p) * eval(sign * x);
                    let near = quad::integrate_lower_singular(&f, 0.0, 1.0, WindowOpts::default());
                    if near.is_divergent() {
                        return ExtendedMoment::Infinite {
                            site: DivergenceSite::Origin,
                            trace: near.partials.iter().cloned().enumerate().collect(),
                        };
                    }
                    let far = quad::integrate_tail(&f, 1.0, TailOpts::default());
                    if far.is_divergent() {
                        return ExtendedMoment::Infinite {
                            site: DivergenceSite::Tail,
                            trace: far.partials.iter().cloned().enumerate().collect(),
                        };
                    }
                    total += near.value + far.value;
                }
                ExtendedMoment::Finite(total)
            }
        }
    }

    /// `∫ x² π(dx)` as an extended real.
    pub fn pi_second_moment(&self) -> Result<ExtendedMoment> {
        self.pi_abs_moment(2.0)
    }

    /// Total mass `π(ℝ)`; finite only for compound-Poisson-type measures.
    pub fn pi_total_mass(&self) -> ExtendedMoment {
        match &self.measure {
            LevyMeasureSpec::Atoms(atoms) => {
                ExtendedMoment::Finite(atoms.iter().map(|(_, m)| m).sum())
            }
            _ => {
                let eval = |x: f64| self.measure_density(x).unwrap_or(f64::NAN);
                let mut total = 0.0;
                for sign in [1.0, -1.0] {
                    let f = move |x: f64| eval(sign * x);
                    let near = quad::integrate_lower_singular(&f, 0.0, 1.0, WindowOpts::default());
                    if near.is_divergent() {
                        return ExtendedMoment::Infinite {
                            site: DivergenceSite::Origin,
                            trace: near.partials.iter().cloned().enumerate().collect(),
                        };
                    }
                    let far = quad::integrate_tail(&f, 1.0, TailOpts::default());
                    if far.is_divergent() {
                        return ExtendedMoment::Infinite {
                            site: DivergenceSite::Tail,
                            trace: far.partials.iter().cloned().enumerate().collect(),
                        };
                    }
                    total += near.value + far.value;
                }
                ExtendedMoment::Finite(total)
            }
        }
    }

    /// `∫ (|xu|² ∧ 1) π(dx)` — the jump part of `r(u)`.
    pub fn r_jump_part(&self, u: f64) -> Result<f64> {
        if u == 0.0 {
            return Ok(0.0);
        }
        let cut = 1.0 / u.abs();
        match &self.measure {
            LevyMeasureSpec::Atoms(atoms) => Ok(atoms
                .iter()
                .map(|&(x, m)| m * ((x * u).powi(2)).min(1.0))
                .sum()),
            _ => {
                let eval = |x: f64| self.measure_density(x).unwrap_or(f64::NAN);
                let mut total = 0.0;
                for sign in [1.0, -1.0] {
                    let f = move |x: f64| ((x * u).powi(2)).min(1.0) * eval(sign * x);
                    let near = quad::integrate_lower_singular(
                        &f,
                        0.0,
                        cut.min(1.0),
                        WindowOpts::default(),
                    );
                    if near.is_divergent() {
                        return Err(Error::Quadrature {
                            context: format!("r(u) jump part near origin, u={u}"),
                            partial: near.value,
                            trace: near.partials.iter().cloned().enumerate().collect(),
                        });
                    }
                    let mid = if cut < 1.0 {
                        quad::integrate_smooth(&f, cut, 1.0, 16, 8)
                    } else if cut > 1.0 {
                        quad::integrate_smooth(&f, 1.0, cut, 16, 8)
                    } else {
                        0.0
                    };
                    let far = quad::integrate_tail(&f, cut.max(1.0), TailOpts::default());
                    if far.is_divergent() {
                        return Err(Error::Quadrature {
                            context: format!("r(u) jump tail, u={u}"),
                            partial: far.value,
                            trace: far.partials.iter().cloned().enumerate().collect(),
                        });
                    }
                    total += near.value + mid + far.value;
                }
                Ok(total)
            }
        }
    }

    /// `∫ (τ(xu) - τ(x)u) π(dx)` — the asymmetry part of `r(u)`.
    /// Identically zero for symmetric π (odd integrand).
    pub fn r_tau_part(&self, u: f64) -> Result<f64> {
        if u == 0.0 || self.symmetric() {
            return Ok(0.0);
        }
        match &self.measure {
            LevyMeasureSpec::Atoms(atoms) => Ok(atoms
                .iter()
                .map(|&(x, m)| m * (tau(x * u) - tau(x) * u))
                .sum()),
            _ => {
                let eval = |x: f64| self.measure_density(x).unwrap_or(f64::NAN);
                let mut total = 0.0;
                for sign in [1.0, -1.0] {
                    // On the half-line: integrand vanishes where both |x| <= 1
                    // and |xu| <= 1; only big jumps or big |xu| contribute, so
                    // there is no singular weight left at the origin.
                    let f = move |x: f64| {
                        let xs = sign * x;
                        (tau(xs * u) - tau(xs) * u) * eval(xs)
                    };
                    let lo = (1.0 / u.abs()).min(1.0);
                    let mid = quad::integrate_smooth(&f, lo, lo.max(1.0), 16, 8);
                    let far = quad::integrate_tail(&f, lo.max(1.0), TailOpts::default());
                    if far.is_divergent() {
                        return Err(Error::Quadrature {
                            context: format!("r(u) τ-part tail, u={u}"),
                            partial: far.value,
                            trace: far.partials.iter().cloned().enumerate().collect(),
                        });
                    }
                    total += mid + far.value;
                }
                Ok(total)
            }
        }
    }

    /// The Rajput–Rosinski integrability kernel
    /// `r(u) = a u² + ∫ (|xu|²∧1) π + |b u + ∫ (τ(xu) - τ(x)u) π|`.
    pub fn r_function(&self, u: f64) -> Result<f64> {
        if u == 0.0 {
            return Ok(0.0);
        }
        let jump = self.r_jump_part(u)?;
        let asym = self.r_tau_part(u)?;
        Ok(self.diffusion_a * u * u + jump + (self.drift_b * u + asym).abs())
    }

    /// Sample a driver path `Z` on the grid (path index 0).
    pub fn sample_path(&self, grid: GridSpec, seed: u64) -> Result<GridPath> {
        self.sample_path_indexed(grid, seed, 0)
    }

    /// Sample the driver path with the given ensemble index; lane 0 feeds
    /// jumps/subordination, lane 1 the Gaussian stream.
    pub fn sample_path_indexed(&self, grid: GridSpec, seed: u64, index: u64) -> Result<GridPath> {
        let mut jump_rng = substream(seed, index, 0);
        let mut gauss_rng = substream(seed, index, 1);
        let n = grid.n;
        let dt = grid.dt;
        let mut increments = vec![0.0; n];

        match &self.measure {
            LevyMeasureSpec::Subordinated(sub) => {
                // ΔW^L ~ N(0, ΔL) conditionally on the subordinator; the
                // subordinator's drift is exactly the diffusion part of W^L.
                let dl = sub.sample_increments(grid, &mut jump_rng)?;
                for (inc, l) in increments.iter_mut().zip(dl) {
                    *inc = l.sqrt() * standard_normal(&mut gauss_rng);
                }
            }
            LevyMeasureSpec::Atoms(atoms) => {
                let comp: f64 = atoms.iter().map(|&(x, m)| m * tau(x)).sum();
                let drift_step = (self.drift_b - comp) * dt;
                let sigma_step = (self.diffusion_a * dt).sqrt();
                for inc in increments.iter_mut() {
                    *inc = drift_step + sigma_step * standard_normal(&mut gauss_rng);
                }
                for &(x, m) in atoms {
                    let pois = Poisson::new(m * dt)
                        .map_err(|e| Error::invalid(format!("poisson sampler: {e}")))?;
                    for inc in increments.iter_mut() {
                        let k = pois.sample(&mut jump_rng) as u64;
                        *inc += k as f64 * x;
                    }
                }
            }
            LevyMeasureSpec::Density { .. } => {
                let mass = match self.pi_total_mass() {
                    ExtendedMoment::Finite(m) => m,
                    ExtendedMoment::Infinite { .. } => {
                        return Err(Error::Precondition(
                            "direct sampling needs finite activity; use a subordinated or \
                             atomic measure for infinite-activity drivers"
                                .into(),
                        ))
                    }
                };
                let table = self.jump_table()?;
                let comp = if self.symmetric() { 0.0 } else { self.tau_compensator()? };
                let drift_step = (self.drift_b - comp) * dt;
                let sigma_step = (self.diffusion_a * dt).sqrt();
                for inc in increments.iter_mut() {
                    *inc = drift_step + sigma_step * standard_normal(&mut gauss_rng);
                }
                if mass > 0.0 {
                    let pois = Poisson::new(mass * dt)
                        .map_err(|e| Error::invalid(format!("poisson sampler: {e}")))?;
                    for inc in increments.iter_mut() {
                        let k = pois.sample(&mut jump_rng) as u64;
                        for _ in 0..k {
                            *inc += table.sample(jump_rng.gen::<f64>());
                        }
                    }
                }
            }
        }

        let mut values = Vec::with_capacity(grid.points());
        values.push(0.0);
        let mut acc = 0.0;
        for inc in increments {
            acc += inc;
            values.push(acc);
        }
        GridPath::new(
            grid,
            values,
            PathMeta {
                label: "driver".into(),
                seed: Some(seed),
            },
        )
    }

    /// `∫ τ(x) π(dx)` for finite-activity measures (jump compensator).
    fn tau_compensator(&self) -> Result<f64> {
        let eval = |x: f64| self.measure_density(x).unwrap_or(f64::NAN);
        let mut total = 0.0;
        for sign in [1.0, -1.0] {
            let f = move |x: f64| tau(sign * x) * eval(sign * x);
            let near = quad::integrate_lower_singular(&f, 0.0, 1.0, WindowOpts::default());
            let far = quad::integrate_tail(&f, 1.0, TailOpts::default());
            if near.is_divergent() || far.is_divergent() {
                return Err(Error::Precondition("∫ τ dπ diverges".into()));
            }
            total += near.value + far.value;
        }
        Ok(total)
    }

    /// Two-sided inverse-CDF table for a finite-activity density.
    fn jump_table(&self) -> Result<TwoSidedJumpTable> {
        let eval = |x: f64| self.measure_density(x).unwrap_or(f64::NAN);
        let mut sides = Vec::new();
        for sign in [1.0, -1.0] {
            let f = move |x: f64| eval(sign * x);
            // Upper cutoff by doubling.
            let mut hi = 1.0f64;
            let mut tail = quad::integrate_tail(&f, 1.0, TailOpts::default());
            if tail.is_divergent() {
                return Err(Error::Precondition("jump density tail diverges".into()));
            }
            while hi < 1e12 {
                let rest = quad::integrate_tail(&f, hi, TailOpts::default()).value;
                if rest <= 1e-12 * tail.value.max(1e-300) {
                    break;
                }
                hi *= 2.0;
                tail = quad::integrate_tail(&f, hi, TailOpts::default());
            }
            // Geometric grid down to 2^-60 absorbs integrable singularities.
            let levels = 240usize;
            let mut edges: Vec<f64> = (0..=levels)
                .map(|j| hi * 0.5f64.powf(j as f64 / 4.0))
                .collect();
            edges.reverse();
            let mut masses = Vec::with_capacity(levels);
            for w in edges.windows(2) {
                masses.push(quad::integrate_smooth(&f, w[0], w[1], 8, 1));
            }
            sides.push(SideTable {
                sign,
                edges,
                cum: {
                    let mut acc = 0.0;
                    let mut cum = Vec::with_capacity(masses.len() + 1);
                    cum.push(0.0);
                    for m in &masses {
                        acc += m;
                        cum.push(acc);
                    }
                    cum
                },
            });
        }
        TwoSidedJumpTable::new(sides)
    }
}

struct SideTable {
    sign: f64,
    edges: Vec<f64>,
    cum: Vec<f64>,
}

struct TwoSidedJumpTable {
    sides: Vec<SideTable>,
    weights: Vec<f64>,
}

impl TwoSidedJumpTable {
    fn new(sides: Vec<SideTable>) -> Result<Self> {
        let totals: Vec<f64> = sides.iter().map(|s| *s.cum.last().unwrap()).collect();
        let grand: f64 = totals.iter().sum();
        if !(grand > 0.0) || !grand.is_finite() {
            return Err(Error::Precondition("jump density has no finite mass".into()));
        }
        Ok(TwoSidedJumpTable {
            sides,
            weights: totals.iter().map(|t| t / grand).collect(),
        })
    }

    fn sample(&self, u: f64) -> f64 {
        let (side, u) = if u < self.weights[0] {
            (&self.sides[0], u / self.weights[0])
        } else {
            (
                &self.sides[1],
                ((u - self.weights[0]) / self.weights[1]).min(1.0 - 1e-16),
            )
        };
        let total = *side.cum.last().unwrap();
        let target = u * total;
        let idx = side.cum.partition_point(|&c| c < target).clamp(1, side.edges.len() - 1);
        let (c0, c1) = (side.cum[idx - 1], side.cum[idx]);
        let w = if c1 > c0 { (target - c0) / (c1 - c0) } else { 0.5 };
        side.sign * (side.edges[idx - 1] + w * (side.edges[idx] - side.edges[idx - 1]))
    }
}

/// `Ψ(μ)` of a subordinated Wiener process through the Laplace-exponent
/// route: `Ψ(μ) = -Φ(μ²/2)`, drift of `L` folded in.
pub fn subordinated_exponent_via_laplace(sub: &SubordinatorSpec, mu: f64) -> Result<f64> {
    Ok(-sub.laplace_exponent(mu * mu / 2.0)?)
}

/// `∫_0^∞ (cos(μx) - 1) ρ(x) dx` for a nonnegative density with decreasing
/// tail. Graded windows absorb an integrable singularity at the origin,
/// oscillation-resolving panels cover the bulk, and the far tail enters as
/// `-∫ ρ` with the cosine remainder bounded by `2ρ(X)/μ` (integration by
/// parts on the monotone tail).
fn cos_minus_one_integral(density: &dyn Fn(f64) -> f64, mu: f64, tol: f64) -> Result<f64> {
    debug_assert!(mu != 0.0);
    let mu = mu.abs();
    let h = |x: f64| ((mu * x).cos() - 1.0) * density(x);
    let x1 = (std::f64::consts::PI / (2.0 * mu)).min(0.5);
    let near = quad::integrate_lower_singular(&h, 0.0, x1, WindowOpts::default());
    if near.is_divergent() {
        return Err(Error::Quadrature {
            context: "cos-integral near origin".into(),
            partial: near.value,
            trace: near.partials.iter().cloned().enumerate().collect(),
        });
    }
    let mut acc = near.value;
    let width = (std::f64::consts::PI / (2.0 * mu)).min(0.5);
    let gl = quad::rule(12);
    let mut x = x1;
    let mut trace = Vec::new();
    const CHECK_EVERY: usize = 64;
    for block in 0..640usize {
        for _ in 0..CHECK_EVERY {
            acc += gl.integrate(x, x + width, &h);
            x += width;
        }
        trace.push((block, acc));
        let scale = acc.abs().max(1e-6);
        let rho_x = density(x);
        let osc_bound = 2.0 * rho_x / mu;
        let tail = quad::integrate_tail(density, x, TailOpts { rel_tol: 1e-10, ..TailOpts::default() });
        if tail.is_divergent() {
            return Err(Error::Quadrature {
                context: "cos-integral: density tail mass diverges".into(),
                partial: acc,
                trace,
            });
        }
        if osc_bound.min(2.0 * tail.value) <= tol * scale {
            return Ok(acc - tail.value);
        }
    }
    Err(Error::Quadrature {
        context: "cos-integral: oscillatory tail did not settle".into(),
        partial: acc,
        trace,
    })
}

/// `∫_0^∞ (sin(μx) - μ τ(x)) ρ(x) dx` with the same tail treatment; the
/// `-μ sign(x)` plateau beyond `|x| = 1` integrates against the exact tail
/// mass.
fn sine_tau_integral(density: &dyn Fn(f64) -> f64, mu: f64, tol: f64) -> Result<f64> {
    debug_assert!(mu != 0.0);
    let h_near = |x: f64| ((mu * x).sin() - mu * x) * density(x);
    let near = quad::integrate_lower_singular(&h_near, 0.0, 0.5, WindowOpts::default());
    if near.is_divergent() {
        return Err(Error::Quadrature {
            context: "sin-integral near origin".into(),
            partial: near.value,
            trace: near.partials.iter().cloned().enumerate().collect(),
        });
    }
    let mut acc = near.value + quad::integrate_smooth(&h_near, 0.5, 1.0, 16, 8);
    // Beyond x = 1 the truncation is constant: sin(μx)ρ - μ·ρ.
    let gl = quad::rule(12);
    let width = (std::f64::consts::PI / (2.0 * mu.abs())).min(0.5);
    let h_osc = |x: f64| (mu * x).sin() * density(x);
    let mut x = 1.0;
    let mut trace = Vec::new();
    for block in 0..640usize {
        for _ in 0..64 {
            acc += gl.integrate(x, x + width, &h_osc);
            x += width;
        }
        trace.push((block, acc));
        let tail = quad::integrate_tail(density, x, TailOpts { rel_tol: 1e-10, ..TailOpts::default() });
        if tail.is_divergent() {
            return Err(Error::Quadrature {
                context: "sin-integral: density tail mass diverges".into(),
                partial: acc,
                trace,
            });
        }
        let osc_bound = 2.0 * density(x) / mu.abs();
        if osc_bound.min(2.0 * tail.value) <= tol * acc.abs().max(1e-6) {
            // Remaining plateau part: -μ ∫_1^∞ ρ = already accumulated over
            // [1, x]; finish with the exact tail mass.
            let plateau = quad::integrate_smooth(density, 1.0, x, 12, 64.min((x as usize).max(8)));
            return Ok(acc - mu * (plateau + tail.value));
        }
    }
    Err(Error::Quadrature {
        context: "sin-integral: oscillatory tail did not settle".into(),
        partial: acc,
        trace,
    })
}

/// Ensemble of driver paths with per-path substreams; identical output for
/// any worker count.
pub fn sample_driver_ensemble(
    triplet: &LevyTriplet,
    grid: GridSpec,
    n_paths: usize,
    seed: u64,
) -> Result<crate::grid::Ensemble> {
    let rows: Vec<Result<Vec<f64>>> = crate::par::map_indexed(n_paths, |i| {
        Ok(triplet.sample_path_indexed(grid, seed, i as u64)?.values)
    });
    let mut paths = Vec::with_capacity(n_paths);
    for r in rows {
        paths.push(r?);
    }
    Ok(crate::grid::Ensemble { grid, paths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats;
    use crate::subordinator::SubordinatorFamily;

    fn gamma_sub() -> SubordinatorSpec {
        SubordinatorSpec::new(0.0, SubordinatorFamily::Gamma { c: 1.0, rate: 1.0 }).unwrap()
    }

    #[test]
    fn exponent_at_zero_is_zero() {
        let t = LevyTriplet::brownian(1.0, 0.3).unwrap();
        assert_eq!(t.characteristic_exponent(0.0).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn brownian_exponent_closed_form() {
        let t = LevyTriplet::brownian(1.0, 0.0).unwrap();
        let psi = t.characteristic_exponent(2.0).unwrap();
        assert!((psi.re + 2.0).abs() < 1e-14);
        assert!(psi.im.abs() < 1e-14);
    }

    #[test]
    fn exponent_conjugate_symmetry() {
        let t = LevyTriplet::new(
            0.5,
            0.2,
            LevyMeasureSpec::Atoms(vec![(1.0, 0.4), (-2.0, 0.1), (0.3, 0.7)]),
        )
        .unwrap();
        for &mu in &[0.3, 1.0, 2.7] {
            let plus = t.characteristic_exponent(mu).unwrap();
            let minus = t.characteristic_exponent(-mu).unwrap();
            assert!((plus.re - minus.re).abs() < 1e-13);
            assert!((plus.im + minus.im).abs() < 1e-13);
        }
    }

    #[test]
    fn symmetric_exponent_is_real_nonpositive() {
        let t = LevyTriplet::subordinated_wiener(gamma_sub()).unwrap();
        for &mu in &[0.5, 1.0, 2.0] {
            let psi = t.characteristic_exponent(mu).unwrap();
            assert_eq!(psi.im, 0.0);
            assert!(psi.re <= 0.0);
        }
    }

    #[test]
    fn subordinated_routes_agree_gamma() {
        // eq ch_f (Laplace route) against equ2 (direct ϱ quadrature).
        let sub = gamma_sub();
        let t = LevyTriplet::subordinated_wiener(sub.clone()).unwrap();
        for &mu in &[0.5, 1.0, 2.0] {
            let direct = t.characteristic_exponent(mu).unwrap().re;
            let laplace = subordinated_exponent_via_laplace(&sub, mu).unwrap();
            assert!(
                (direct - laplace).abs() <= 1e-6,
                "mu={mu}: {direct} vs {laplace}"
            );
        }
    }

    #[test]
    fn atom_moments_are_exact_sums() {
        let t = LevyTriplet::new(
            0.0,
            0.0,
            LevyMeasureSpec::Atoms(vec![(1.0, 0.5), (-1.0, 0.5)]),
        )
        .unwrap();
        assert_eq!(t.pi_abs_moment(2.0).unwrap().finite(), Some(1.0));
        // cached second call returns the same
        assert_eq!(t.pi_abs_moment(2.0).unwrap().finite(), Some(1.0));
    }

    #[test]
    fn gamma_subordinated_first_moment_matches_reduction() {
        // ∫|x| π(dx) = E|N| ∫ s^{1/2} ν(ds) = √(2/π) · Γ(1/2) = √2 for c=λ=1.
        // Oracle: the ν-side quadrature, independent of the ϱ-side route.
        let t = LevyTriplet::subordinated_wiener(gamma_sub()).unwrap();
        let got = t.pi_abs_moment(1.0).unwrap().finite().expect("finite");
        let nu_half = quad::integrate_lower_singular(
            |s: f64| s.sqrt() * (-s).exp() / s,
            0.0,
            1.0,
            WindowOpts::default(),
        )
        .value
            + quad::integrate_tail(|s: f64| s.sqrt() * (-s).exp() / s, 1.0, TailOpts::default())
                .value;
        let oracle = (2.0 / std::f64::consts::PI).sqrt() * nu_half;
        assert!((oracle - 2f64.sqrt()).abs() < 1e-8, "oracle {oracle}");
        assert!((got - oracle).abs() < 1e-6 * oracle, "got {got} oracle {oracle}");
    }

    #[test]
    fn stable_subordinated_second_moment_is_infinite() {
        let sub =
            SubordinatorSpec::new(0.0, SubordinatorFamily::Stable { index: 0.7, scale: 1.0 })
                .unwrap();
        let t = LevyTriplet::subordinated_wiener(sub).unwrap();
        match t.pi_abs_moment(2.0).unwrap() {
            ExtendedMoment::Infinite { site, .. } => assert_eq!(site, DivergenceSite::Tail),
            ExtendedMoment::Finite(v) => panic!("expected divergence, got {v}"),
        }
    }

    #[test]
    fn r_function_basics() {
        let t = LevyTriplet::brownian(1.0, 0.0).unwrap();
        assert_eq!(t.r_function(0.0).unwrap(), 0.0);
        assert!((t.r_function(0.5).unwrap() - 0.25).abs() < 1e-14);

        let atoms = LevyTriplet::new(
            0.0,
            0.0,
            LevyMeasureSpec::Atoms(vec![(1.0, 0.5), (-1.0, 0.5)]),
        )
        .unwrap();
        // r(u) = |u|² ∧ 1 for unit atoms of total mass 1
        assert!((atoms.r_function(0.5).unwrap() - 0.25).abs() < 1e-14);
        assert!((atoms.r_function(3.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_triplet_sample_is_identically_zero() {
        let t = LevyTriplet::brownian(0.0, 0.0).unwrap();
        let grid = GridSpec::new(0.0, 0.1, 10).unwrap();
        let p = t.sample_path(grid, 3).unwrap();
        assert!(p.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn subordinated_variance_matches_mean_l1() {
        // Var(W^L_1) = E L_1 (quadratic characteristic ⟨W^L⟩_t = c t).
        let t = LevyTriplet::subordinated_wiener(gamma_sub()).unwrap();
        let grid = GridSpec::new(0.0, 0.25, 4).unwrap();
        let n = 20_000;
        let finals: Vec<f64> = (0..n)
            .map(|i| t.sample_path_indexed(grid, 11, i).unwrap().values[4])
            .collect();
        let (var, se) = stats::variance_with_se(&finals);
        assert!((var - 1.0).abs() < 3.0 * se, "var {var} se {se}");
    }

    #[test]
    fn sampler_is_deterministic_per_seed_and_index() {
        let t = LevyTriplet::subordinated_wiener(gamma_sub()).unwrap();
        let grid = GridSpec::new(0.0, 0.125, 8).unwrap();
        let a = t.sample_path_indexed(grid, 99, 5).unwrap();
        let b = t.sample_path_indexed(grid, 99, 5).unwrap();
        assert_eq!(a.values, b.values);
        let c = t.sample_path_indexed(grid, 99, 6).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn density_driver_matches_atom_driver_in_second_moment() {
        // Narrow symmetric double-exponential density vs its moment target.
        let dens = Arc::new(|x: f64| 0.5 * (-(x.abs())).exp());
        let t = LevyTriplet::new(
            0.0,
            0.0,
            LevyMeasureSpec::Density { density: dens, symmetric: true },
        )
        .unwrap();
        // ∫ x² π = 2 ∫_0^∞ x² 0.5 e^{-x} = 2
        let m2 = t.pi_second_moment().unwrap().finite().unwrap();
        assert!((m2 - 2.0).abs() < 1e-8);
        let grid = GridSpec::new(0.0, 0.5, 2).unwrap();
        let n = 20_000;
        let finals: Vec<f64> = (0..n)
            .map(|i| t.sample_path_indexed(grid, 21, i).unwrap().values[2])
            .collect();
        let (var, se) = stats::variance_with_se(&finals);
        assert!((var - 2.0).abs() < 4.0 * se, "var {var} se {se}");
    }

    #[test]
    fn stable_subordinated_cf_matches_closed_form() {
        // E e^{iμ W^L_1} = exp(-c₁ μ^{2α} / 2^α)
        let alpha = 0.7;
        let sub = SubordinatorSpec::new(
            0.0,
            SubordinatorFamily::Stable { index: alpha, scale: 1.0 },
        )
        .unwrap();
        let t = LevyTriplet::subordinated_wiener(sub).unwrap();
        let grid = GridSpec::new(0.0, 0.5, 2).unwrap();
        let n = 30_000usize;
        let finals: Vec<f64> = (0..n)
            .map(|i| t.sample_path_indexed(grid, 8, i as u64).unwrap().values[2])
            .collect();
        for &mu in &[0.5f64, 1.0, 2.0] {
            let (re, im) = stats::empirical_cf(&finals, mu);
            let target = (-(mu.powf(2.0 * alpha)) / 2f64.powf(alpha)).exp();
            let tol = 3.0 / (n as f64).sqrt();
            assert!((re - target).abs() < tol, "mu={mu}: {re} vs {target}");
            assert!(im.abs() < tol);
        }
    }
}

//! Finite-difference eigensolver for the radial equation with the exact
//! centrifugal barrier `hbar^2 l(l+1) / (2 mu r^2)`.
//!
//! Two discretizations are provided:
//!
//! - [`build_radial_hamiltonian`]: second-order central differences on the
//!   interior nodes of a uniform grid with Dirichlet ends.
//! - [`build_regularized_hamiltonian`]: a cell-centred finite-volume form of
//!   the same equation after factoring `R = r^p phi`, where `p` is the
//!   indicial exponent of the `-kappa/r^2` core. The plain scheme loses its
//!   second order whenever `R ~ r^p` with `p < 3/2`, which is every s-wave
//!   of this potential; the factored form keeps `phi` smooth. [`oracle_solve`]
//!   uses it.

mod tridiag;

pub use tridiag::{eigenvector, lowest_eigenvalues, SymTridiagonal};

use crate::error::{Error, Result};
use crate::model::{eval_potential, PhysicalContext, PotentialParams};
use crate::wavefunction::quadrature;

pub const MIN_GRID_POINTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

impl RadialGridSpec {
    pub fn new(r_min: f64, r_max: f64, points: usize) -> Result<Self> {
        let g = Self {
            r_min,
            r_max,
            points,
        };
        g.validate()?;
        Ok(g)
    }

    /// `r_min = 1e-4 / (2 alpha)`, `r_max = 40 / (2 alpha)`, 4000 points.
    pub fn default_for(p: &PotentialParams) -> Self {
        let unit = 1.0 / (2.0 * p.alpha);
        Self {
            r_min: 1e-4 * unit,
            r_max: 40.0 * unit,
            points: 4000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_min < self.r_max && self.r_max.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: format!("need 0 < r_min < r_max, got [{}, {}]", self.r_min, self.r_max),
            });
        }
        if self.points < MIN_GRID_POINTS {
            return Err(Error::GridTooCoarse {
                points: self.points,
                min: MIN_GRID_POINTS,
            });
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.points - 1) as f64
    }

    /// Same interval at half the spacing.
    pub fn refined(&self) -> Self {
        Self {
            points: 2 * (self.points - 1) + 1,
            ..*self
        }
    }
}

/// A discretized radial Hamiltonian together with the map from eigenvector
/// components to samples of `R(r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretization {
    pub matrix: SymTridiagonal,
    /// Radius attached to each unknown.
    pub radii: Vec<f64>,
    /// `R(radii[i]) = to_radial[i] * y[i]`.
    pub to_radial: Vec<f64>,
}

impl Discretization {
    /// Trapezoid-normalized `R` samples for an eigenvector, first lobe positive.
    pub fn radial_samples(&self, y: &[f64]) -> Vec<f64> {
        let mut r: Vec<f64> = y.iter().zip(&self.to_radial).map(|(a, b)| a * b).collect();
        let norm = quadrature(&self.radii, |i| r[i] * r[i]).sqrt();
        let peak = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let lead = r.iter().find(|v| v.abs() > 1e-12 * peak).copied().unwrap_or(1.0);
        let scale = lead.signum() / norm;
        r.iter_mut().for_each(|v| *v *= scale);
        r
    }
}

/// Plain central differences with an arbitrary potential.
pub fn build_radial_hamiltonian_with(
    potential: impl Fn(f64) -> Result<f64>,
    ctx: &PhysicalContext,
    l: u32,
    grid: &RadialGridSpec,
) -> Result<Discretization> {
    grid.validate()?;
    ctx.validate()?;
    let h = grid.spacing();
    let kin = ctx.kinetic();
    let gamma = f64::from(l) * f64::from(l + 1);
    let radii: Vec<f64> = (1..grid.points - 1)
        .map(|i| grid.r_min + i as f64 * h)
        .collect();
    let diag = radii
        .iter()
        .map(|&r| Ok(2.0 * kin / (h * h) + potential(r)? + kin * gamma / (r * r)))
        .collect::<Result<Vec<_>>>()?;
    let off = vec![-kin / (h * h); radii.len() - 1];
    let n = radii.len();
    Ok(Discretization {
        matrix: SymTridiagonal::new(diag, off),
        radii,
        to_radial: vec![1.0; n],
    })
}

pub fn build_radial_hamiltonian(
    p: &PotentialParams,
    ctx: &PhysicalContext,
    l: u32,
    grid: &RadialGridSpec,
) -> Result<Discretization> {
    p.validate()?;
    build_radial_hamiltonian_with(|r| eval_potential(p, r), ctx, l, grid)
}

/// `ln(int_a^b r^k dr)` for `0 < a < b`, accurate when `b - a << a`.
fn ln_power_integral(a: f64, b: f64, k: f64) -> f64 {
    let log_ratio = (b / a).ln();
    let e = k + 1.0;
    if e.abs() < 1e-14 {
        return log_ratio.ln();
    }
    // a^e (exp(e ln(b/a)) - 1) / e
    e * a.ln() + ((e * log_ratio).exp_m1() / e).ln()
}

/// Constants of the small-`r` expansion
/// `V + hbar^2 l(l+1)/(2 mu r^2) = hbar^2 p(p-1)/(2 mu r^2) - c/r + O(1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreExpansion {
    /// Indicial exponent `p = 1/2 + sqrt(1/4 + l(l+1) - kappa)`.
    pub p: f64,
    /// `V0 (A+B)^2 / (4 alpha^2)`, the strength of the attractive `1/r^2` core.
    pub inverse_square: f64,
    /// `V0 (A^2 - B^2) / (2 alpha)`.
    pub coulomb: f64,
}

pub fn core_expansion(p: &PotentialParams, ctx: &PhysicalContext, l: u32) -> Result<CoreExpansion> {
    let gamma = f64::from(l) * f64::from(l + 1);
    let inverse_square = p.v0 * (p.a_coef + p.b_coef).powi(2) / (4.0 * p.alpha * p.alpha);
    let kappa = inverse_square / ctx.kinetic();
    let radicand = 0.25 + gamma - kappa;
    if radicand < 0.0 {
        return Err(Error::Supercritical {
            coupling: kappa,
            critical: 0.25 + gamma,
        });
    }
    Ok(CoreExpansion {
        p: 0.5 + radicand.sqrt(),
        inverse_square,
        coulomb: p.v0 * (p.a_coef * p.a_coef - p.b_coef * p.b_coef) / (2.0 * p.alpha),
    })
}

/// Finite-volume discretization of the factored equation
/// `-(hbar^2/2mu) (r^{2p} phi')' + r^{2p} W phi = E r^{2p} phi` on the
/// `points - 1` cells of `grid`: the Frobenius flux `phi'/phi = -c/(2p kin)`
/// through `r_min`, `phi = 0` at
/// `r_max`, exact cell weights and exact integration of the `-c/r` part of `W`.
pub fn build_regularized_hamiltonian(
    p: &PotentialParams,
    ctx: &PhysicalContext,
    l: u32,
    grid: &RadialGridSpec,
) -> Result<Discretization> {
    p.validate()?;
    ctx.validate()?;
    grid.validate()?;
    let core = core_expansion(p, ctx, l)?;
    let kin = ctx.kinetic();
    let two_p = 2.0 * core.p;
    let h = grid.spacing();
    let cells = grid.points - 1;
    let face = |i: usize| grid.r_min + i as f64 * h;
    let centres: Vec<f64> = (0..cells).map(|i| grid.r_min + (i as f64 + 0.5) * h).collect();

    let ln_mass: Vec<f64> = (0..cells)
        .map(|i| ln_power_integral(face(i), face(i + 1), two_p))
        .collect();
    // conductance 1 / int r^{-2p} dr between neighbouring unknowns
    let mut ln_cond: Vec<f64> = centres
        .windows(2)
        .map(|w| -ln_power_integral(w[0], w[1], -two_p))
        .collect();
    ln_cond.push(-ln_power_integral(centres[cells - 1], grid.r_max, -two_p));

    let mut diag = Vec::with_capacity(cells);
    for i in 0..cells {
        let r = centres[i];
        let regular = eval_potential(p, r)? + core.inverse_square / (r * r) + core.coulomb / r;
        let coulomb_avg = core.coulomb
            * (ln_power_integral(face(i), face(i + 1), two_p - 1.0) - ln_mass[i]).exp();
        let right = (ln_cond[i] - ln_mass[i]).exp();
        let inner = if i == 0 {
            // Frobenius flux through r_min: kin r^{2p} phi' = -c r^{2p} phi / (2p)
            -core.coulomb * (two_p * grid.r_min.ln() - two_p.ln() - ln_mass[0]).exp()
        } else {
            kin * (ln_cond[i - 1] - ln_mass[i]).exp()
        };
        diag.push(kin * right + inner + regular - coulomb_avg);
    }
    let off = (0..cells - 1)
        .map(|i| -kin * (ln_cond[i] - 0.5 * (ln_mass[i] + ln_mass[i + 1])).exp())
        .collect();
    let to_radial = centres
        .iter()
        .zip(&ln_mass)
        .map(|(&r, &lm)| (core.p * r.ln() - 0.5 * lm).exp())
        .collect();
    Ok(Discretization {
        matrix: SymTridiagonal::new(diag, off),
        radii: centres,
        to_radial,
    })
}

/// Lowest `k` eigenvalues of the regularized Hamiltonian on one grid.
pub fn grid_levels(
    p: &PotentialParams,
    ctx: &PhysicalContext,
    l: u32,
    grid: &RadialGridSpec,
    k: usize,
) -> Result<Vec<f64>> {
    let disc = build_regularized_hamiltonian(p, ctx, l, grid)?;
    lowest_eigenvalues(&disc.matrix, k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleEigenvectors {
    pub radii: Vec<f64>,
    /// Normalized `R(r)` samples, one vector per bound level.
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Bound levels on the refined grid, ascending.
    pub energies: Vec<f64>,
    /// `(4 E(h/2) - E(h)) / 3` per level.
    pub richardson_estimate: Vec<f64>,
    /// `|E(h) - E(h/2)|` per level.
    pub convergence_gap: Vec<f64>,
    /// Continuum edge used to discard box states.
    pub threshold: f64,
    pub eigenvectors: Option<OracleEigenvectors>,
}

pub fn oracle_solve(
    p: &PotentialParams,
    ctx: &PhysicalContext,
    l: u32,
    grid: &RadialGridSpec,
    k: usize,
) -> Result<OracleResult> {
    solve(p, ctx, l, grid, k, false)
}

pub fn oracle_solve_with_eigenvectors(
    p: &PotentialParams,
    ctx: &PhysicalContext,
    l: u32,
    grid: &RadialGridSpec,
    k: usize,
) -> Result<OracleResult> {
    solve(p, ctx, l, grid, k, true)
}

fn solve(
    p: &PotentialParams,
    ctx: &PhysicalContext,
    l: u32,
    grid: &RadialGridSpec,
    k: usize,
    with_vectors: bool,
) -> Result<OracleResult> {
    grid.validate()?;
    let max = grid.points / 4;
    if k == 0 || k > max {
        return Err(Error::EigenCountOutOfRange { k, max });
    }
    let threshold = p.asymptote();
    let coarse = grid_levels(p, ctx, l, grid, k)?;
    let fine_disc = build_regularized_hamiltonian(p, ctx, l, &grid.refined())?;
    let fine = lowest_eigenvalues(&fine_disc.matrix, k)?;

    let mut result = OracleResult {
        energies: Vec::new(),
        richardson_estimate: Vec::new(),
        convergence_gap: Vec::new(),
        threshold,
        eigenvectors: None,
    };
    for (&ec, &ef) in coarse.iter().zip(&fine) {
        let extrapolated = (4.0 * ef - ec) / 3.0;
        if !(ef < threshold && extrapolated < threshold) {
            break;
        }
        result.energies.push(ef);
        result.richardson_estimate.push(extrapolated);
        result.convergence_gap.push((ec - ef).abs());
    }
    if result.energies.is_empty() {
        return Err(Error::NoBoundLevels { threshold });
    }
    if with_vectors {
        let values = result
            .energies
            .iter()
            .map(|&e| fine_disc.radial_samples(&eigenvector(&fine_disc.matrix, e)))
            .collect();
        result.eigenvectors = Some(OracleEigenvectors {
            radii: fine_disc.radii.clone(),
            values,
        });
    }
    Ok(result)
}

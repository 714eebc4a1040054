//! Physical model: the modified Mobius square potential, the unit context,
//! the dimensionless mapping and the two centrifugal approximations.
//!
//! Every exponential is evaluated through `s = e^{-2 alpha r}` and
//! `1 - s = -expm1(-2 alpha r)`, which keeps both the large-`r` tail and the
//! small-`r` singular region free of cancellation.

use crate::error::{invalid, Error, Result};

/// Pekeris offset that cancels the constant term of the Greene-Aldrich form.
pub const DEFAULT_C0: f64 = 1.0 / 12.0;

/// Depth, shape constants and screening parameter of the potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    pub v0: f64,
    pub a_coef: f64,
    pub b_coef: f64,
    /// Inverse length, strictly positive.
    pub alpha: f64,
}

impl PotentialParams {
    pub fn new(v0: f64, a_coef: f64, b_coef: f64, alpha: f64) -> Result<Self> {
        let p = Self {
            v0,
            a_coef,
            b_coef,
            alpha,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.v0.is_finite() {
            return Err(invalid("v0", "must be finite"));
        }
        if !self.a_coef.is_finite() || !self.b_coef.is_finite() {
            return Err(invalid("a_coef/b_coef", "must be finite"));
        }
        if self.a_coef == 0.0 && self.b_coef == 0.0 {
            return Err(invalid("a_coef/b_coef", "A and B cannot both be zero"));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(invalid("alpha", "must be finite and > 0"));
        }
        Ok(())
    }

    /// `V(r -> infinity) = -V0 A^2`, the continuum edge.
    pub fn asymptote(&self) -> f64 {
        -self.v0 * self.a_coef * self.a_coef
    }
}

/// Reduced mass and reduced Planck constant. Never converted implicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalContext {
    pub mu: f64,
    pub hbar: f64,
}

impl Default for PhysicalContext {
    fn default() -> Self {
        Self { mu: 1.0, hbar: 1.0 }
    }
}

impl PhysicalContext {
    pub fn new(mu: f64, hbar: f64) -> Result<Self> {
        let ctx = Self { mu, hbar };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(invalid("mu", "must be finite and > 0"));
        }
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(invalid("hbar", "must be finite and > 0"));
        }
        Ok(())
    }

    /// `hbar^2 / (2 mu)`, the kinetic prefactor.
    pub fn kinetic(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mu)
    }

    /// `2 hbar^2 alpha^2 / mu`: converts the dimensionless `eps_n` to an
    /// energy through `E = -scale * eps_n`.
    pub fn energy_scale(&self, alpha: f64) -> f64 {
        2.0 * self.hbar * self.hbar * alpha * alpha / self.mu
    }
}

/// Approximation used for the centrifugal `1/r^2` term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ApproximationScheme {
    /// `4 alpha^2 (C0 + y + y^2)` with `y = s / (1 - s)`.
    PekerisType { c0: f64 },
    /// `4 alpha^2 s / (1 - s)^2`.
    GreeneAldrich,
}

impl ApproximationScheme {
    pub fn pekeris() -> Self {
        Self::PekerisType { c0: DEFAULT_C0 }
    }

    /// Offset actually carried by the scheme: `C0` for Pekeris, zero otherwise.
    pub fn c0_eff(&self) -> f64 {
        match *self {
            Self::PekerisType { c0 } => c0,
            Self::GreeneAldrich => 0.0,
        }
    }

    /// Stable token used in reports and on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            Self::PekerisType { .. } => "pekeris",
            Self::GreeneAldrich => "greene-aldrich",
        }
    }
}

/// Dimensionless abbreviations of the transformed radial equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams {
    /// `-mu E / (2 hbar^2 alpha^2)`; only set when an energy is known.
    pub eps_n: Option<f64>,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub eta: f64,
    pub c0: f64,
}

impl DimensionlessParams {
    /// Radicand of the `(1 - s)` exponent, `1/4 - delta + gamma - eta - beta`.
    pub fn chi_radicand(&self) -> f64 {
        0.25 - self.delta + self.gamma - self.eta - self.beta
    }

    /// Strength of the `1/r^2` tail near the origin, `eta + delta + beta`,
    /// equal to `mu V0 (A+B)^2 / (2 hbar^2 alpha^2)`.
    pub fn coupling(&self) -> f64 {
        self.eta + self.delta + self.beta
    }

    pub fn with_eps(mut self, eps_n: f64) -> Self {
        self.eps_n = Some(eps_n);
        self
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what: "r", value: r })
    }
}

/// `(s, 1 - s)` for `s = e^{-2 alpha r}`.
pub(crate) fn s_pair(alpha: f64, r: f64) -> (f64, f64) {
    let x = -2.0 * alpha * r;
    (x.exp(), -x.exp_m1())
}

pub fn eval_potential(p: &PotentialParams, r: f64) -> Result<f64> {
    check_radius(r)?;
    let (s, one_minus_s) = s_pair(p.alpha, r);
    let ratio = (p.a_coef + p.b_coef * s) / one_minus_s;
    Ok(-p.v0 * ratio * ratio)
}

pub fn to_dimensionless(
    p: &PotentialParams,
    ctx: &PhysicalContext,
    l: u32,
    c0: f64,
    energy: Option<f64>,
) -> DimensionlessParams {
    let unit = ctx.mu / (ctx.hbar * ctx.hbar * p.alpha * p.alpha);
    let l = f64::from(l);
    DimensionlessParams {
        eps_n: energy.map(|e| -0.5 * unit * e),
        beta: 0.5 * unit * p.v0 * p.b_coef * p.b_coef,
        gamma: l * (l + 1.0),
        delta: unit * p.v0 * p.a_coef * p.b_coef,
        eta: 0.5 * unit * p.v0 * p.a_coef * p.a_coef,
        c0,
    }
}

/// Approximation to `1/r^2` under the given scheme.
pub fn centrifugal_approx(scheme: &ApproximationScheme, alpha: f64, r: f64) -> Result<f64> {
    check_radius(r)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain {
            what: "alpha",
            value: alpha,
        });
    }
    let (s, one_minus_s) = s_pair(alpha, r);
    let four_a2 = 4.0 * alpha * alpha;
    Ok(match *scheme {
        ApproximationScheme::GreeneAldrich => four_a2 * s / (one_minus_s * one_minus_s),
        ApproximationScheme::PekerisType { c0 } => {
            let y = s / one_minus_s;
            four_a2 * (c0 + y + y * y)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxErrorRow {
    pub r: f64,
    pub exact: f64,
    pub approx: f64,
    /// `(approx - 1/r^2) * r^2`
    pub rel_error: f64,
}

pub fn approx_error_table(
    scheme: &ApproximationScheme,
    p: &PotentialParams,
    r_grid: &[f64],
) -> Result<Vec<ApproxErrorRow>> {
    for w in r_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(invalid("r_grid", "must be strictly increasing"));
        }
    }
    r_grid
        .iter()
        .map(|&r| {
            let approx = centrifugal_approx(scheme, p.alpha, r)?;
            let exact = 1.0 / (r * r);
            Ok(ApproxErrorRow {
                r,
                exact,
                approx,
                rel_error: (approx - exact) * r * r,
            })
        })
        .collect()
}

//! Nikiforov-Uvarov machinery for the transformed radial equation
//!
//! ```text
//! R'' + (1 - s)/(s(1 - s)) R' + sigma~(s)/(s^2 (1 - s)^2) R = 0,   s = e^{-2 alpha r}
//! ```
//!
//! with `sigma(s) = s(1 - s)` and `tau~(s) = 1 - s` fixed. Only the branch
//! `pi_-` / `k_-` is built: it is the one giving `tau'(s) < 0`.
//!
//! The quantization condition `lambda = lambda_n` is solved numerically by
//! [`solve_quantization`], independently of the closed form in
//! [`crate::spectrum`].

use crate::error::{Error, Result};
use crate::model::{
    to_dimensionless, ApproximationScheme, DimensionlessParams, PhysicalContext, PotentialParams,
};

/// `sigma~(s) = -xi1 s^2 + xi2 s - xi3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaTildeCoeffs {
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuIntermediates {
    pub a_const: f64,
    pub b_const: f64,
    pub c_const: f64,
    pub k_minus: f64,
    /// `sqrt(a + b + c)`
    pub sqrt_q: f64,
    /// `sqrt(c)`
    pub sqrt_c: f64,
    pub lambda_val: f64,
    /// Power of `s` in `Phi(s)`.
    pub exponent_s: f64,
    /// Power of `(1 - s)` in `Phi(s)`.
    pub exponent_one_minus_s: f64,
}

impl NuIntermediates {
    /// `tau'(s) = -2 - 2 (sqrt_q + sqrt_c)`
    pub fn tau_prime(&self) -> f64 {
        -2.0 - 2.0 * (self.sqrt_q + self.sqrt_c)
    }

    /// `pi_-'(s) = -1/2 - (sqrt_q + sqrt_c)`
    pub fn pi_prime(&self) -> f64 {
        -0.5 - (self.sqrt_q + self.sqrt_c)
    }

    /// Discriminant of `(a - k) s^2 + (b + k) s + c` at the given `k`.
    pub fn discriminant_at(&self, k: f64) -> f64 {
        let lin = self.b_const + k;
        lin * lin - 4.0 * (self.a_const - k) * self.c_const
    }

    /// Coefficients `(constant, linear)` of `pi_-(s)`.
    pub fn pi_minus(&self) -> (f64, f64) {
        (self.sqrt_c, self.pi_prime())
    }

    /// Coefficients `(constant, linear)` of `tau(s) = tau~(s) + 2 pi_-(s)`.
    pub fn tau(&self) -> (f64, f64) {
        let (p0, p1) = self.pi_minus();
        (1.0 + 2.0 * p0, -1.0 + 2.0 * p1)
    }
}

pub fn sigma_tilde_coeffs(
    d: &DimensionlessParams,
    scheme: &ApproximationScheme,
) -> Result<SigmaTildeCoeffs> {
    let eps = d.eps_n.ok_or(Error::MissingEnergy)?;
    let g = d.gamma;
    Ok(match *scheme {
        ApproximationScheme::PekerisType { c0 } => SigmaTildeCoeffs {
            xi1: eps - d.beta + g * c0,
            xi2: 2.0 * eps + d.delta + g * (2.0 * c0 - 1.0),
            xi3: eps - d.eta + g * c0,
        },
        ApproximationScheme::GreeneAldrich => SigmaTildeCoeffs {
            xi1: eps - d.beta,
            xi2: 2.0 * eps + d.delta - g,
            xi3: eps - d.eta,
        },
    })
}

pub fn nu_intermediates(coeffs: &SigmaTildeCoeffs) -> Result<NuIntermediates> {
    let a = 0.25 + coeffs.xi1;
    let b = -coeffs.xi2;
    let c = coeffs.xi3;
    let radicand = a + b + c;
    if radicand < 0.0 {
        return Err(Error::NegativeDiscriminant { radicand });
    }
    if c < 0.0 {
        return Err(Error::NegativeC { c });
    }
    let sqrt_q = radicand.sqrt();
    let sqrt_c = c.sqrt();
    let k_minus = -(b + 2.0 * c) - 2.0 * sqrt_c * sqrt_q;
    let pi_prime = -0.5 - (sqrt_q + sqrt_c);
    Ok(NuIntermediates {
        a_const: a,
        b_const: b,
        c_const: c,
        k_minus,
        sqrt_q,
        sqrt_c,
        lambda_val: k_minus + pi_prime,
        exponent_s: sqrt_c,
        exponent_one_minus_s: 0.5 + sqrt_q,
    })
}

/// `lambda_n = -n tau' - n(n - 1)/2 sigma''` with `sigma'' = -2`.
pub fn lambda_n(n: u32, inter: &NuIntermediates) -> f64 {
    let n = f64::from(n);
    -n * inter.tau_prime() + n * (n - 1.0)
}

/// `lambda(eps) - lambda_n(eps)` for the base parameters `d` (its `eps_n` is ignored).
pub fn quantization_residual(
    d: &DimensionlessParams,
    scheme: &ApproximationScheme,
    n: u32,
    eps: f64,
) -> Result<f64> {
    let coeffs = sigma_tilde_coeffs(&d.with_eps(eps), scheme)?;
    let inter = nu_intermediates(&coeffs)?;
    Ok(inter.lambda_val - lambda_n(n, &inter))
}

/// Admissible window `(lower, upper)` in `eps` used by [`solve_quantization`].
pub fn quantization_window(d: &DimensionlessParams, scheme: &ApproximationScheme) -> (f64, f64) {
    let lower = (d.eta - d.gamma * scheme.c0_eff()).max(0.0);
    let span = 10.0 * (1.0 + d.eta + d.beta + d.delta.abs() + d.gamma);
    (lower, lower + span)
}

const SCAN_POINTS: usize = 256;
const SCAN_OFFSET: f64 = 1e-9;
const ROOT_TOL: f64 = 1e-12;
const MAX_WINDOW_DOUBLINGS: usize = 60;

/// Dimensionless energy `eps_n` at which `lambda(eps) = lambda_n(eps)`,
/// found by bracketing on a geometric grid and bisection.
pub fn solve_quantization(
    p: &PotentialParams,
    ctx: &PhysicalContext,
    n: u32,
    l: u32,
    scheme: &ApproximationScheme,
) -> Result<f64> {
    p.validate()?;
    ctx.validate()?;
    let d = to_dimensionless(p, ctx, l, scheme.c0_eff(), None);
    let (lower, mut upper) = quantization_window(&d, scheme);
    let f = |eps: f64| quantization_residual(&d, scheme, n, eps);

    let start = lower + SCAN_OFFSET;
    let f_start = f(start)?;
    if f_start <= 0.0 {
        return Err(Error::NoBoundState);
    }

    // residual is strictly decreasing in eps: push the upper end out until it brackets
    let mut doublings = 0;
    while f(upper)? > 0.0 {
        doublings += 1;
        if doublings > MAX_WINDOW_DOUBLINGS {
            return Err(Error::NoBoundState);
        }
        upper = lower + 2.0 * (upper - lower);
    }

    let ratio = ((upper - lower) / SCAN_OFFSET).powf(1.0 / (SCAN_POINTS - 1) as f64);
    let mut lo = start;
    let mut offset = SCAN_OFFSET;
    let mut hi = None;
    for _ in 1..SCAN_POINTS {
        offset *= ratio;
        let eps = (lower + offset).min(upper);
        if f(eps)? <= 0.0 {
            hi = Some(eps);
            break;
        }
        lo = eps;
    }
    let mut hi = hi.unwrap_or(upper);

    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

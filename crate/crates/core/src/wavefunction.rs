//! Jacobi polynomials and the closed-form radial wavefunction
//!
//! ```text
//! R(s) = s^u (1 - s)^{1/2 + v} P_n^{(2u, 2v)}(1 - 2s),   s = e^{-2 alpha r}
//! ```
//!
//! `u` is the decay exponent of the spectrum record and
//! `v = sqrt(1/4 - delta + gamma - eta - beta)`. Normalization is numerical.

use crate::error::{invalid, Error, Result};
use crate::model::{s_pair, ApproximationScheme, PhysicalContext, PotentialParams};
use crate::spectrum::{energy_level, QuantumNumbers};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub degree: u32,
    pub alpha_idx: f64,
    pub beta_idx: f64,
}

impl JacobiParams {
    pub fn new(degree: u32, alpha_idx: f64, beta_idx: f64) -> Result<Self> {
        if !(alpha_idx > -1.0 && alpha_idx.is_finite()) {
            return Err(invalid("alpha_idx", "must be finite and > -1"));
        }
        if !(beta_idx > -1.0 && beta_idx.is_finite()) {
            return Err(invalid("beta_idx", "must be finite and > -1"));
        }
        Ok(Self {
            degree,
            alpha_idx,
            beta_idx,
        })
    }
}

/// `P_n^{(a,b)}(x)` by the forward three-term recurrence.
pub fn jacobi_p(jp: &JacobiParams, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0 + 1e-12) {
        return Err(Error::Domain { what: "x", value: x });
    }
    let (a, b) = (jp.alpha_idx, jp.beta_idx);
    if jp.degree == 0 {
        return Ok(1.0);
    }
    let mut p_prev = 1.0;
    let mut p = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for k in 2..=jp.degree {
        let k = f64::from(k);
        let s = 2.0 * k + a + b;
        let c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let next = (c2 * p - c3 * p_prev) / c1;
        p_prev = p;
        p = next;
    }
    Ok(p)
}

/// Closed-form radial state with its exponents resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialState {
    pub params: PotentialParams,
    pub ctx: PhysicalContext,
    pub qn: QuantumNumbers,
    pub scheme: ApproximationScheme,
    /// Power of `s`.
    pub u: f64,
    /// `(1 - s)` carries the power `1/2 + v`.
    pub v: f64,
    jacobi: JacobiParams,
}

impl RadialState {
    pub fn new(
        p: &PotentialParams,
        ctx: &PhysicalContext,
        qn: QuantumNumbers,
        scheme: &ApproximationScheme,
    ) -> Result<Self> {
        let rec = energy_level(p, ctx, qn, scheme)?;
        if !rec.is_valid() {
            return Err(Error::InvalidState { n: qn.n, l: qn.l });
        }
        let u = rec.s_exponent;
        let v = rec.one_minus_s_root();
        Ok(Self {
            params: *p,
            ctx: *ctx,
            qn,
            scheme: *scheme,
            u,
            v,
            jacobi: JacobiParams::new(qn.n, 2.0 * u, 2.0 * v)?,
        })
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain { what: "r", value: r });
        }
        let (s, one_minus_s) = s_pair(self.params.alpha, r);
        let envelope = (-2.0 * self.params.alpha * self.u * r).exp()
            * one_minus_s.powf(0.5 + self.v);
        Ok(envelope * jacobi_p(&self.jacobi, 1.0 - 2.0 * s)?)
    }

    /// Radius beyond which `|R|` has decayed below `e^{-40}` of its scale.
    pub fn support_extent(&self) -> f64 {
        40.0 / (2.0 * self.params.alpha) * (1.0 / self.u).max(1.0)
    }

    /// Uniform grid of `points` samples from `1e-6 / (2 alpha)` to [`Self::support_extent`].
    pub fn default_grid(&self, points: usize) -> Vec<f64> {
        let r_min = 1e-6 / (2.0 * self.params.alpha);
        let h = (self.support_extent() - r_min) / (points.max(2) - 1) as f64;
        (0..points.max(2)).map(|i| r_min + i as f64 * h).collect()
    }

    /// `int_0^inf R^2 dr` by Simpson's rule in `x = sqrt(r)` over
    /// `[0, sqrt(support_extent)]`, which removes the `r^{2p}` cusp at the origin.
    pub fn norm_integral(&self) -> Result<f64> {
        let x_max = self.support_extent().sqrt();
        let h = x_max / NORM_INTERVALS as f64;
        let grid: Vec<f64> = (0..=NORM_INTERVALS).map(|i| i as f64 * h).collect();
        let mut dens = Vec::with_capacity(grid.len());
        dens.push(0.0);
        for &x in &grid[1..] {
            let r = self.eval(x * x)?;
            dens.push(2.0 * x * r * r);
        }
        Ok(quadrature(&grid, |i| dens[i]))
    }

    pub fn sample(&self, grid: &[f64]) -> Result<RadialFunctionTable> {
        let values = grid.iter().map(|&r| self.eval(r)).collect::<Result<Vec<_>>>()?;
        let mut table = RadialFunctionTable {
            params: self.params,
            ctx: self.ctx,
            qn: self.qn,
            scheme: self.scheme,
            grid: grid.to_vec(),
            values,
            norm_constant: 1.0,
            node_count: 0,
        };
        table.node_count = count_nodes(&table);
        Ok(table)
    }
}

pub fn radial_unnormalized(
    p: &PotentialParams,
    ctx: &PhysicalContext,
    qn: QuantumNumbers,
    scheme: &ApproximationScheme,
    r: f64,
) -> Result<f64> {
    RadialState::new(p, ctx, qn, scheme)?.eval(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunctionTable {
    pub params: PotentialParams,
    pub ctx: PhysicalContext,
    pub qn: QuantumNumbers,
    pub scheme: ApproximationScheme,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Product of the multipliers applied by normalization.
    pub norm_constant: f64,
    pub node_count: usize,
}

impl RadialFunctionTable {
    /// `int R^2 dr` over the grid by [`quadrature`].
    pub fn norm_integral(&self) -> f64 {
        quadrature(&self.grid, |i| self.values[i] * self.values[i])
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn trapezoid(grid: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    (1..grid.len())
        .map(|i| 0.5 * (grid[i] - grid[i - 1]) * (f(i) + f(i - 1)))
        .sum()
}

/// Composite Simpson rule on uniform grids (closed with the 3/8 rule when
/// the interval count is odd), trapezoid otherwise.
pub fn quadrature(grid: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    let intervals = grid.len().saturating_sub(1);
    if intervals < 2 {
        return trapezoid(grid, f);
    }
    let h = (grid[intervals] - grid[0]) / intervals as f64;
    let uniform = grid
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs());
    if !uniform {
        return trapezoid(grid, f);
    }
    let simpson_end = if intervals.is_multiple_of(2) { intervals } else { intervals - 3 };
    let mut sum = 0.0;
    if simpson_end > 0 {
        let inner: f64 = (1..simpson_end)
            .map(|i| if i % 2 == 1 { 4.0 } else { 2.0 } * f(i))
            .sum();
        sum += h / 3.0 * (f(0) + inner + f(simpson_end));
    }
    if simpson_end < intervals {
        let k = simpson_end;
        sum += 3.0 * h / 8.0 * (f(k) + 3.0 * f(k + 1) + 3.0 * f(k + 2) + f(k + 3));
    }
    sum
}

const NORM_INTERVALS: usize = 20_000;

/// Largest admissible fraction of `int R^2` lying outside the grid.
const OUTSIDE_MASS: f64 = 1e-10;

/// Rescales to unit norm with the first lobe positive. The norm comes from
/// [`RadialState::norm_integral`] when the table's state is valid, otherwise
/// from the sampled values.
pub fn normalize_radial(table: &RadialFunctionTable) -> Result<RadialFunctionTable> {
    let peak = table.max_abs();
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let on_grid = table.norm_integral();
    if !(on_grid > 0.0) || !on_grid.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let integral = match RadialState::new(&table.params, &table.ctx, table.qn, &table.scheme) {
        Ok(state) => {
            // on_grid / closed-form-on-grid is the table's squared multiplier
            let reference = state.sample(&table.grid)?.norm_integral();
            on_grid / reference * state.norm_integral()?
        }
        Err(_) => on_grid,
    };
    if !(integral > 0.0) || !integral.is_finite() {
        return Err(Error::ZeroNorm);
    }
    if let (Some(&r0), Some(&r1), Some(first), Some(last)) = (
        table.grid.first(),
        table.grid.last(),
        table.values.first(),
        table.values.last(),
    ) {
        // |R| grows from the origin to the first sample and decays past the last
        let inner = first * first * r0;
        let outer = last * last * (r1 - r0);
        let ratio = (inner + outer) / integral;
        if ratio > OUTSIDE_MASS {
            return Err(Error::TruncatedSupport { ratio });
        }
    }
    let lead = table
        .values
        .iter()
        .find(|v| v.abs() > 1e-12 * peak)
        .copied()
        .unwrap_or(1.0);
    let scale = lead.signum() / integral.sqrt();
    let mut out = table.clone();
    for v in &mut out.values {
        *v *= scale;
    }
    out.norm_constant = table.norm_constant * scale;
    out.node_count = count_nodes(&out);
    Ok(out)
}

/// Strict sign changes among samples above `1e-12 * max|R|`.
pub fn count_nodes(table: &RadialFunctionTable) -> usize {
    count_sign_changes(&table.values)
}

pub(crate) fn count_sign_changes(values: &[f64]) -> usize {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-12 * peak;
    let mut last = 0.0f64;
    let mut changes = 0;
    for &v in values {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            changes += 1;
        }
        last = v;
    }
    changes
}

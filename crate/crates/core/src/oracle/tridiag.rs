//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1), "off-diagonal length must be n - 1");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x` (negative LDL^T pivots).
    pub fn sturm_count(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.len() {
            let coupling = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1] / q
            };
            q = self.diag[i] - x - coupling;
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off[i] * x[i + 1];
                }
                y
            })
            .collect()
    }
}

/// The `k` smallest eigenvalues in ascending order. Bisection runs until the
/// bracket stops shrinking, well inside `1e-12 * max(1, |lambda|)`.
pub fn lowest_eigenvalues(t: &SymTridiagonal, k: usize) -> Result<Vec<f64>> {
    if k == 0 || k > t.len() {
        return Err(Error::EigenCountOutOfRange { k, max: t.len() });
    }
    let (g_lo, g_hi) = t.gershgorin();
    let pad = 1e-12 * g_lo.abs().max(g_hi.abs()).max(1.0);
    let (g_lo, g_hi) = (g_lo - pad, g_hi + pad);

    let mut values = Vec::with_capacity(k);
    let mut floor = g_lo;
    for index in 0..k {
        let mut lo = floor;
        let mut hi = g_hi;
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if t.sturm_count(mid) <= index {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let value = 0.5 * (lo + hi);
        values.push(value);
        floor = lo;
    }
    Ok(values)
}

/// Unit eigenvector for an (accurate) eigenvalue, by inverse iteration.
pub fn eigenvector(t: &SymTridiagonal, lambda: f64) -> Vec<f64> {
    let n = t.len();
    let tiny = f64::EPSILON * t.gershgorin().1.abs().max(t.gershgorin().0.abs()).max(1.0);
    let mut x = vec![1.0; n];
    for _ in 0..4 {
        // Thomas elimination of (T - lambda) y = x with guarded pivots
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut pivot = t.diag[0] - lambda;
        if pivot.abs() < tiny {
            pivot = tiny;
        }
        if n > 1 {
            c[0] = t.off[0] / pivot;
        }
        d[0] = x[0] / pivot;
        for i in 1..n {
            pivot = t.diag[i] - lambda - t.off[i - 1] * c[i - 1];
            if pivot.abs() < tiny {
                pivot = tiny.copysign(pivot);
            }
            if i + 1 < n {
                c[i] = t.off[i] / pivot;
            }
            d[i] = (x[i] - t.off[i - 1] * d[i - 1]) / pivot;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        x = d.into_iter().map(|v| v / norm).collect();
    }
    x
}

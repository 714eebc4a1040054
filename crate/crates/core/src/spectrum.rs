//! Closed-form energy levels for both centrifugal schemes.
//!
//! With `chi = n + 1/2 + sqrt(1/4 - delta + gamma - eta - beta)` the
//! quantization condition fixes the decay exponent of `R ~ s^u` to
//! `u = (eta - beta - chi^2) / (2 chi)`. The energy only depends on `u^2`,
//! so the sign of `u` is what separates a bound state from a growing,
//! non-normalizable solution; [`SpectrumRecord::s_exponent`] keeps it.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{
    to_dimensionless, ApproximationScheme, DimensionlessParams, PhysicalContext, PotentialParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumNumbers {
    pub n: u32,
    pub l: u32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32) -> Self {
        Self { n, l }
    }
}

/// Set of validity flags. An empty set means [`Validity::VALID`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Validity(u8);

impl Validity {
    pub const VALID: Self = Self(0);
    pub const NON_NORMALIZABLE: Self = Self(1);
    pub const SUPERCRITICAL: Self = Self(1 << 1);
    pub const ABOVE_THRESHOLD: Self = Self(1 << 2);
    /// Valid on its own but past the end of the monotonic ladder.
    pub const OFF_LADDER: Self = Self(1 << 3);

    pub fn is_valid(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, other: Self) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn insert(&mut self, other: Self) {
        self.0 |= other.0;
    }
}

impl fmt::Debug for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("{Valid}");
        }
        let names = [
            (Self::NON_NORMALIZABLE, "NonNormalizable"),
            (Self::SUPERCRITICAL, "Supercritical"),
            (Self::ABOVE_THRESHOLD, "AboveThreshold"),
            (Self::OFF_LADDER, "OffLadder"),
        ];
        let set: Vec<_> = names
            .iter()
            .filter(|(flag, _)| self.contains(*flag))
            .map(|(_, name)| *name)
            .collect();
        write!(f, "{{{}}}", set.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRecord {
    pub qn: QuantumNumbers,
    pub scheme: ApproximationScheme,
    pub energy: f64,
    pub chi: f64,
    /// Signed decay exponent `u` of `R ~ s^u`; `|u| = sqrt(eps_n - eta + gamma c0_eff)`.
    pub s_exponent: f64,
    pub validity: Validity,
}

impl SpectrumRecord {
    pub fn is_valid(&self) -> bool {
        self.validity.is_valid()
    }

    /// `eps_n = -mu E / (2 hbar^2 alpha^2)`.
    pub fn eps_n(&self, p: &PotentialParams, ctx: &PhysicalContext) -> f64 {
        -self.energy / ctx.energy_scale(p.alpha)
    }

    /// Exponent of `(1 - s)` minus one half, i.e. `chi - n - 1/2`.
    pub fn one_minus_s_root(&self) -> f64 {
        self.chi - f64::from(self.qn.n) - 0.5
    }
}

/// `chi = n + 1/2 + sqrt(1/4 - delta + gamma - eta - beta)`.
pub fn chi_value(d: &DimensionlessParams, n: u32) -> Result<f64> {
    let radicand = d.chi_radicand();
    if radicand < 0.0 {
        return Err(Error::Supercritical {
            coupling: d.coupling(),
            critical: 0.25 + d.gamma,
        });
    }
    Ok(f64::from(n) + 0.5 + radicand.sqrt())
}

pub fn energy_level(
    p: &PotentialParams,
    ctx: &PhysicalContext,
    qn: QuantumNumbers,
    scheme: &ApproximationScheme,
) -> Result<SpectrumRecord> {
    p.validate()?;
    ctx.validate()?;
    let d = to_dimensionless(p, ctx, qn.l, scheme.c0_eff(), None);
    let chi = chi_value(&d, qn.n)?;
    let bracket = (d.eta - d.beta - chi * chi) / chi;

    let scale = ctx.energy_scale(p.alpha);
    let hbar2_alpha2_over_mu = 0.5 * scale;
    let mut energy = -p.v0 * p.a_coef * p.a_coef - 0.5 * hbar2_alpha2_over_mu * bracket * bracket;
    if let ApproximationScheme::PekerisType { c0 } = *scheme {
        energy += 2.0 * hbar2_alpha2_over_mu * c0 * d.gamma;
    }

    let mut rec = SpectrumRecord {
        qn,
        scheme: *scheme,
        energy,
        chi,
        s_exponent: 0.5 * bracket,
        validity: Validity::VALID,
    };
    rec.validity = bound_state_validity(&rec, p, ctx);
    Ok(rec)
}

pub fn bound_state_validity(
    rec: &SpectrumRecord,
    p: &PotentialParams,
    ctx: &PhysicalContext,
) -> Validity {
    let mut flags = Validity::VALID;
    let d = to_dimensionless(p, ctx, rec.qn.l, rec.scheme.c0_eff(), None);
    if d.chi_radicand() < 0.0 || !rec.chi.is_finite() {
        flags.insert(Validity::SUPERCRITICAL);
        return flags;
    }
    if !(rec.s_exponent > 0.0) {
        flags.insert(Validity::NON_NORMALIZABLE);
    }
    if rec.qn.l == 0 && !(rec.energy < p.asymptote()) {
        flags.insert(Validity::ABOVE_THRESHOLD);
    }
    flags
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub records: Vec<SpectrumRecord>,
    /// Largest `n` on the monotonic ladder of valid levels.
    pub n_max: Option<u32>,
}

impl Spectrum {
    pub fn valid(&self) -> impl Iterator<Item = &SpectrumRecord> {
        self.records.iter().filter(|r| r.is_valid())
    }
}

pub fn enumerate_spectrum(
    p: &PotentialParams,
    ctx: &PhysicalContext,
    l: u32,
    scheme: &ApproximationScheme,
    n_limit: u32,
) -> Result<Spectrum> {
    let mut records = Vec::with_capacity(n_limit as usize + 1);
    for n in 0..=n_limit {
        records.push(energy_level(p, ctx, QuantumNumbers::new(n, l), scheme)?);
    }

    let mut n_max = None;
    let mut prev: Option<f64> = None;
    for rec in &records {
        let on_ladder = rec.is_valid() && prev.is_none_or(|e| rec.energy > e);
        if !on_ladder {
            break;
        }
        n_max = Some(rec.qn.n);
        prev = Some(rec.energy);
    }
    for rec in &mut records {
        if rec.is_valid() && n_max.is_none_or(|m| rec.qn.n > m) {
            rec.validity.insert(Validity::OFF_LADDER);
        }
    }
    Ok(Spectrum { records, n_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DEFAULT_C0;

    fn ctx() -> PhysicalContext {
        PhysicalContext::default()
    }

    fn dim(beta: f64, gamma: f64, delta: f64, eta: f64) -> DimensionlessParams {
        DimensionlessParams {
            eps_n: None,
            beta,
            gamma,
            delta,
            eta,
            c0: DEFAULT_C0,
        }
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi_value(&dim(0.0, 0.0, 0.0, 0.0), 0).unwrap(), 1.0);
        let chi = chi_value(&dim(0.02, 0.0, 0.06, 0.045), 0).unwrap();
        assert!((chi - (0.5 + 0.125f64.sqrt())).abs() < 1e-15);
        assert!((chi - 0.853553).abs() < 1e-6);
        // radicand = 1/4 - 0.26 = -0.01
        let err = chi_value(&dim(0.0, 0.0, 0.0, 0.26), 0);
        assert!(matches!(err, Err(Error::Supercritical { .. })));
    }

    #[test]
    fn chi_is_at_least_n_plus_half() {
        for n in 0..5 {
            assert!(chi_value(&dim(0.1, 2.0, -0.3, 0.4), n).unwrap() >= f64::from(n) + 0.5);
        }
    }

    #[test]
    fn reference_set_energy_and_exponent() {
        let p = PotentialParams::new(1.0, 0.3, 0.2, 1.0).unwrap();
        for scheme in [ApproximationScheme::pekeris(), ApproximationScheme::GreeneAldrich] {
            let rec = energy_level(&p, &ctx(), QuantumNumbers::new(0, 0), &scheme).unwrap();
            assert!((rec.energy + 0.429705627484771).abs() < 1e-12, "{}", rec.energy);
            assert!((rec.eps_n(&p, &ctx()) - 0.214852813742386).abs() < 1e-12);
            // |u| = sqrt(eps - eta) but the quantization sign is negative
            assert!((rec.s_exponent.abs() - 0.169852813742386f64.sqrt()).abs() < 1e-12);
            assert!(rec.s_exponent < 0.0);
            assert!(rec.validity.contains(Validity::NON_NORMALIZABLE));
        }
    }

    #[test]
    fn binding_set_is_valid() {
        let p = PotentialParams::new(4.0, 2.0, -1.8, 1.0).unwrap();
        let rec = energy_level(&p, &ctx(), QuantumNumbers::new(0, 0), &ApproximationScheme::GreeneAldrich)
            .unwrap();
        assert_eq!(rec.validity, Validity::VALID);
        assert!(rec.energy < p.asymptote());
        let d = to_dimensionless(&p, &ctx(), 0, 0.0, Some(rec.energy));
        let root = (d.eps_n.unwrap() - d.eta).sqrt();
        assert!((rec.s_exponent - root).abs() < 1e-12);
    }

    #[test]
    fn schemes_coincide_for_s_waves() {
        let p = PotentialParams::new(4.0, 2.0, -1.8, 1.0).unwrap();
        for n in 0..4 {
            let qn = QuantumNumbers::new(n, 0);
            let a = energy_level(&p, &ctx(), qn, &ApproximationScheme::pekeris()).unwrap();
            let b = energy_level(&p, &ctx(), qn, &ApproximationScheme::GreeneAldrich).unwrap();
            assert!((a.energy - b.energy).abs() <= 1e-12 * a.energy.abs().max(1.0));
        }
    }

    #[test]
    fn pekeris_shift_for_rotating_states() {
        let p = PotentialParams::new(1.0, 1.0, -0.95, 0.1).unwrap();
        let qn = QuantumNumbers::new(0, 1);
        let a = energy_level(&p, &ctx(), qn, &ApproximationScheme::pekeris()).unwrap();
        let b = energy_level(&p, &ctx(), qn, &ApproximationScheme::GreeneAldrich).unwrap();
        let shift = 2.0 * p.alpha * p.alpha * DEFAULT_C0 * 2.0;
        assert!((a.energy - b.energy - shift).abs() < 1e-12);
        assert_eq!(a.s_exponent, b.s_exponent);
    }

    #[test]
    fn constant_potential_never_binds() {
        // B = -A: eta + delta + beta = 0 and the potential is flat at -V0 A^2
        let p = PotentialParams::new(1.0, 2.0, -2.0, 1.0).unwrap();
        let d = to_dimensionless(&p, &ctx(), 0, DEFAULT_C0, None);
        assert!(d.coupling().abs() < 1e-12);
        for n in 0..5 {
            let rec = energy_level(&p, &ctx(), QuantumNumbers::new(n, 0), &ApproximationScheme::GreeneAldrich)
                .unwrap();
            assert!((rec.chi - f64::from(n) - 1.0).abs() < 1e-12);
            assert!(rec.validity.contains(Validity::NON_NORMALIZABLE));
        }
    }

    #[test]
    fn validity_flags() {
        let p = PotentialParams::new(1.0, 0.3, 0.2, 1.0).unwrap();
        let mut rec = SpectrumRecord {
            qn: QuantumNumbers::new(0, 0),
            scheme: ApproximationScheme::GreeneAldrich,
            energy: -0.09,
            chi: 1.0,
            s_exponent: 0.0,
            validity: Validity::VALID,
        };
        let v = bound_state_validity(&rec, &p, &ctx());
        assert!(v.contains(Validity::NON_NORMALIZABLE));
        assert!(v.contains(Validity::ABOVE_THRESHOLD));
        assert!(!v.is_valid());

        rec.energy = -1.0;
        rec.s_exponent = 0.4;
        assert!(bound_state_validity(&rec, &p, &ctx()).is_valid());

        let hot = PotentialParams::new(10.0, 0.3, 0.2, 1.0).unwrap();
        assert_eq!(bound_state_validity(&rec, &hot, &ctx()), Validity::SUPERCRITICAL);
        assert_eq!(format!("{:?}", Validity::SUPERCRITICAL), "{Supercritical}");
    }

    #[test]
    fn supercritical_level_errors() {
        let p = PotentialParams::new(10.0, 0.3, 0.2, 1.0).unwrap();
        let err = energy_level(&p, &ctx(), QuantumNumbers::new(0, 0), &ApproximationScheme::pekeris());
        assert!(matches!(err, Err(Error::Supercritical { .. })));
        // the barrier of l = 1 restores a real chi
        assert!(energy_level(&p, &ctx(), QuantumNumbers::new(0, 1), &ApproximationScheme::pekeris()).is_ok());
    }

    #[test]
    fn enumeration_contracts() {
        let free = PotentialParams::new(0.0, 0.3, 0.2, 1.0).unwrap();
        let s = enumerate_spectrum(&free, &ctx(), 0, &ApproximationScheme::GreeneAldrich, 3).unwrap();
        assert_eq!(s.records.len(), 4);
        assert!(s.n_max.is_none());
        assert!(s.records.iter().all(|r| r.validity.contains(Validity::NON_NORMALIZABLE)));

        let one = enumerate_spectrum(&free, &ctx(), 0, &ApproximationScheme::GreeneAldrich, 0).unwrap();
        assert_eq!(one.records.len(), 1);

        let p = PotentialParams::new(400.0, 1.0, -0.97, 1.0).unwrap();
        let s = enumerate_spectrum(&p, &ctx(), 0, &ApproximationScheme::pekeris(), 5).unwrap();
        assert_eq!(s.n_max, Some(2));
        let valid: Vec<_> = s.valid().collect();
        assert_eq!(valid.len(), 3);
        assert!(valid.windows(2).all(|w| w[1].energy > w[0].energy));

        let hot = PotentialParams::new(10.0, 0.3, 0.2, 1.0).unwrap();
        assert!(enumerate_spectrum(&hot, &ctx(), 0, &ApproximationScheme::pekeris(), 3).is_err());
    }
}

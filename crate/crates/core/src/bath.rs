//! Hot and cold bath response spectra.
//!
//! Each bath is described by a positive-frequency profile and a
//! temperature. The negative-frequency branch is never stored: it is
//! generated from the profile through the KMS relation
//! `G(-w) = exp(-w / T) G(w)`, so detailed balance holds by construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BathLabel {
    Hot,
    Cold,
}

/// Positive-frequency shape of a bath response.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SpectralProfile {
    /// `height` on the closed interval [lo, hi], zero elsewhere.
    FlatWindow { lo: f64, hi: f64, height: f64 },
    /// `height * w^2 / ((x - center)^2 + w^2)`, `width` is the half width.
    Lorentzian { center: f64, width: f64, height: f64 },
    /// `height * exp(-(x - center)^2 / (2 width^2))`.
    Gaussian { center: f64, width: f64, height: f64 },
}

impl SpectralProfile {
    pub fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        let bad = |msg: &str| Err(Error::InvalidInput(format!("spectral profile: {msg}")));
        match *self {
            SpectralProfile::FlatWindow { lo, hi, height } => {
                if !finite(&[lo, hi, height]) {
                    return bad("non-finite parameter");
                }
                if lo < 0.0 || hi < lo {
                    return bad("flat window needs 0 <= lo <= hi");
                }
                if height < 0.0 {
                    return bad("height must be >= 0");
                }
            }
            SpectralProfile::Lorentzian { center, width, height }
            | SpectralProfile::Gaussian { center, width, height } => {
                if !finite(&[center, width, height]) {
                    return bad("non-finite parameter");
                }
                if width <= 0.0 {
                    return bad("width must be > 0");
                }
                if height < 0.0 {
                    return bad("height must be >= 0");
                }
            }
        }
        Ok(())
    }

    /// Profile value at a non-negative frequency.
    pub fn eval(&self, omega: f64) -> f64 {
        match *self {
            SpectralProfile::FlatWindow { lo, hi, height } => {
                if (lo..=hi).contains(&omega) {
                    height
                } else {
                    0.0
                }
            }
            SpectralProfile::Lorentzian { center, width, height } => {
                let d = omega - center;
                height * width * width / (d * d + width * width)
            }
            SpectralProfile::Gaussian { center, width, height } => {
                let d = omega - center;
                height * (-d * d / (2.0 * width * width)).exp()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathSpectrum {
    label: BathLabel,
    temperature: f64,
    profile: SpectralProfile,
}

impl BathSpectrum {
    pub fn new(label: BathLabel, temperature: f64, profile: SpectralProfile) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "{label:?} bath temperature must be finite and > 0, got {temperature}"
            )));
        }
        profile.validate()?;
        Ok(Self {
            label,
            temperature,
            profile,
        })
    }

    pub fn label(&self) -> BathLabel {
        self.label
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn profile(&self) -> &SpectralProfile {
        &self.profile
    }

    /// G(w): the profile for w >= 0, the KMS branch for w < 0.
    pub fn sample(&self, omega: f64) -> f64 {
        if omega >= 0.0 {
            self.profile.eval(omega)
        } else {
            (omega / self.temperature).exp() * self.profile.eval(-omega)
        }
    }

    /// Same profile, different bath role.
    pub fn relabeled(&self, label: BathLabel) -> Self {
        Self { label, ..*self }
    }
}

/// The two baths acting on the working qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathPair {
    pub hot: BathSpectrum,
    pub cold: BathSpectrum,
}

impl BathPair {
    pub fn new(hot: BathSpectrum, cold: BathSpectrum) -> Self {
        Self {
            hot: hot.relabeled(BathLabel::Hot),
            cold: cold.relabeled(BathLabel::Cold),
        }
    }

    pub fn get(&self, label: BathLabel) -> &BathSpectrum {
        match label {
            BathLabel::Hot => &self.hot,
            BathLabel::Cold => &self.cold,
        }
    }

    /// G(w) = G_hot(w) + G_cold(w)
    pub fn combined(&self, omega: f64) -> f64 {
        self.hot.sample(omega) + self.cold.sample(omega)
    }

    /// Profiles exchanged between the two roles; temperatures stay with
    /// their profiles.
    pub fn swapped(&self) -> Self {
        Self::new(self.cold, self.hot)
    }
}

/// G sampled at +-w for one bath.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SignedSample {
    pub plus: f64,
    pub minus: f64,
}

impl SignedSample {
    fn of(bath: &BathSpectrum, omega: f64) -> Self {
        Self {
            plus: bath.sample(omega),
            minus: bath.sample(-omega),
        }
    }

    fn sum(self, other: SignedSample) -> Self {
        Self {
            plus: self.plus + other.plus,
            minus: self.minus + other.minus,
        }
    }
}

/// Bath responses at the three transition frequencies of the dressed
/// qubit-piston ladder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrequencySamples {
    pub hot: SignedSample,
    pub cold: SignedSample,
    pub combined: SignedSample,
}

impl FrequencySamples {
    fn at(baths: &BathPair, omega: f64) -> Self {
        let hot = SignedSample::of(&baths.hot, omega);
        let cold = SignedSample::of(&baths.cold, omega);
        Self {
            hot,
            cold,
            combined: hot.sum(cold),
        }
    }

    pub fn bath(&self, label: BathLabel) -> SignedSample {
        match label {
            BathLabel::Hot => self.hot,
            BathLabel::Cold => self.cold,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralSamples {
    pub omega0: f64,
    pub nu: f64,
    /// At the bare qubit frequency.
    pub qubit: FrequencySamples,
    /// At nu_+ = omega0 + nu.
    pub upper: FrequencySamples,
    /// At nu_- = omega0 - nu.
    pub lower: FrequencySamples,
}

impl SpectralSamples {
    pub fn new(baths: &BathPair, omega0: f64, nu: f64) -> Result<Self> {
        if !(nu > 0.0 && nu < omega0 && omega0.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "need 0 < nu < omega0, got nu = {nu}, omega0 = {omega0}"
            )));
        }
        Ok(Self {
            omega0,
            nu,
            qubit: FrequencySamples::at(baths, omega0),
            upper: FrequencySamples::at(baths, omega0 + nu),
            lower: FrequencySamples::at(baths, omega0 - nu),
        })
    }

    pub fn nu_plus(&self) -> f64 {
        self.omega0 + self.nu
    }

    pub fn nu_minus(&self) -> f64 {
        self.omega0 - self.nu
    }

    /// Samples for harmonic q in {-1, 0, 1}, i.e. at omega0 + q nu.
    pub fn harmonic(&self, q: i32) -> &FrequencySamples {
        match q {
            0 => &self.qubit,
            1 => &self.upper,
            -1 => &self.lower,
            _ => panic!("harmonic index must be -1, 0 or 1"),
        }
    }

    pub fn max_value(&self) -> f64 {
        [self.qubit, self.upper, self.lower]
            .iter()
            .flat_map(|f| [f.combined.plus, f.combined.minus])
            .fold(0.0, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        [self.qubit, self.upper, self.lower].iter().all(|f| {
            [f.hot, f.cold]
                .iter()
                .all(|s| s.plus.is_finite() && s.minus.is_finite())
        })
    }
}

/// Ratio by which one bath must dominate the other at a sampled frequency
/// for the layout flags below. A reporting threshold only.
pub const DOMINANCE_RATIO: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub samples: SpectralSamples,
    /// Hot dominates at nu_+ and cold dominates at nu_-.
    pub gain_favorable: bool,
    /// Cold dominates at nu_+ and hot dominates at nu_-.
    pub reversed_layout: bool,
    /// At nu_+ or nu_- neither bath dominates.
    pub overlap_warning: bool,
}

fn dominates(a: f64, b: f64) -> bool {
    a > 0.0 && a >= DOMINANCE_RATIO * b
}

pub fn spectral_separation_report(baths: &BathPair, omega0: f64, nu: f64) -> Result<SpectralReport> {
    let samples = SpectralSamples::new(baths, omega0, nu)?;
    let (hu, cu) = (samples.upper.hot.plus, samples.upper.cold.plus);
    let (hl, cl) = (samples.lower.hot.plus, samples.lower.cold.plus);
    let separated = |a: f64, b: f64| dominates(a, b) || dominates(b, a);
    Ok(SpectralReport {
        samples,
        gain_favorable: dominates(hu, cu) && dominates(cl, hl),
        reversed_layout: dominates(cu, hu) && dominates(hl, cl),
        overlap_warning: !separated(hu, cu) || !separated(hl, cl),
    })
}

/// The desk-scale layout used throughout the tests and examples: a narrow
/// hot line at nu_+ and a cold window cut off at nu_-.
pub fn desk_scale_baths() -> BathPair {
    let hot = BathSpectrum::new(
        BathLabel::Hot,
        20.0,
        SpectralProfile::Lorentzian {
            center: 11.0,
            width: 0.2,
            height: 1.0,
        },
    )
    .expect("valid hot bath");
    let cold = BathSpectrum::new(
        BathLabel::Cold,
        2.0,
        SpectralProfile::FlatWindow {
            lo: 0.0,
            hi: 9.0,
            height: 1.0,
        },
    )
    .expect("valid cold bath");
    BathPair::new(hot, cold)
}

/// A weak hot line at nu_+ against a cold window that covers omega0, for
/// omega0 = 10, nu = 1. The qubit relaxes quickly into its ground state and
/// the piston gain is slow, which suits full-joint runs over 10^3 cycles.
pub fn weak_pump_baths() -> BathPair {
    let hot = BathSpectrum::new(
        BathLabel::Hot,
        20.0,
        SpectralProfile::Lorentzian {
            center: 11.0,
            width: 0.2,
            height: 0.02,
        },
    )
    .expect("valid hot bath");
    let cold = BathSpectrum::new(
        BathLabel::Cold,
        1.0,
        SpectralProfile::FlatWindow {
            lo: 0.0,
            hi: 10.5,
            height: 0.2,
        },
    )
    .expect("valid cold bath");
    BathPair::new(hot, cold)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(height: f64) -> SpectralProfile {
        SpectralProfile::FlatWindow {
            lo: 0.0,
            hi: 100.0,
            height,
        }
    }

    #[test]
    fn kms_arithmetic() {
        let omega = 3.0;
        let bath = BathSpectrum::new(BathLabel::Hot, omega / 2f64.ln(), flat(1.0)).unwrap();
        assert!((bath.sample(-omega) - 0.5).abs() < 1e-15);
        assert_eq!(bath.sample(omega), 1.0);
    }

    #[test]
    fn classical_limit() {
        let bath = BathSpectrum::new(BathLabel::Hot, 1e12, flat(2.0)).unwrap();
        let (p, m) = (bath.sample(7.0), bath.sample(-7.0));
        assert!(((p - m) / p).abs() < 1e-6);
    }

    #[test]
    fn lorentzian_closed_form() {
        let nu = 1.0;
        let profile = SpectralProfile::Lorentzian {
            center: 11.0,
            width: 0.1 * nu,
            height: 1.0,
        };
        let bath = BathSpectrum::new(BathLabel::Hot, 5.0, profile).unwrap();
        // 0.01 / (4 + 0.01)
        let expected = 0.01 / 4.01;
        assert!((bath.sample(9.0) - expected).abs() < 1e-16);
        assert!((bath.sample(-9.0) - expected * (-9.0f64 / 5.0).exp()).abs() < 1e-16);
    }

    #[test]
    fn zero_frequency_returns_profile() {
        let bath = BathSpectrum::new(BathLabel::Cold, 1.0, flat(0.7)).unwrap();
        assert_eq!(bath.sample(0.0), 0.7);
    }

    #[test]
    fn combined_is_pointwise_sum() {
        let baths = desk_scale_baths();
        // cold vanishes above nu_-, so only the hot line contributes at nu_+
        assert_eq!(baths.combined(11.0), baths.hot.sample(11.0));
        let w = 8.5;
        assert_eq!(baths.combined(w), baths.hot.sample(w) + baths.cold.sample(w));
        assert_eq!(baths.combined(-w), baths.hot.sample(-w) + baths.cold.sample(-w));
    }

    #[test]
    fn combined_vanishes_near_zero_for_gapped_profiles() {
        let hot = BathSpectrum::new(
            BathLabel::Hot,
            3.0,
            SpectralProfile::Gaussian {
                center: 11.0,
                width: 0.3,
                height: 1.0,
            },
        )
        .unwrap();
        let cold = BathSpectrum::new(
            BathLabel::Cold,
            1.0,
            SpectralProfile::FlatWindow {
                lo: 5.0,
                hi: 9.0,
                height: 1.0,
            },
        )
        .unwrap();
        let pair = BathPair::new(hot, cold);
        assert!(pair.combined(1e-9) < 1e-200);
        assert!(pair.combined(-1e-9) < 1e-200);
    }

    #[test]
    fn desk_layout_is_gain_favorable() {
        let report = spectral_separation_report(&desk_scale_baths(), 10.0, 1.0).unwrap();
        assert!(report.gain_favorable);
        assert!(!report.reversed_layout);
        assert!(!report.overlap_warning);
    }

    #[test]
    fn identical_spectra_are_not_gain_favorable() {
        let b = BathSpectrum::new(BathLabel::Hot, 2.0, flat(1.0)).unwrap();
        let report = spectral_separation_report(&BathPair::new(b, b), 10.0, 1.0).unwrap();
        assert!(!report.gain_favorable);
        assert!(report.overlap_warning);
    }

    #[test]
    fn swapping_baths_inverts_flags() {
        let baths = desk_scale_baths();
        let a = spectral_separation_report(&baths, 10.0, 1.0).unwrap();
        let b = spectral_separation_report(&baths.swapped(), 10.0, 1.0).unwrap();
        assert_eq!(a.gain_favorable, b.reversed_layout);
        assert_eq!(a.reversed_layout, b.gain_favorable);
        assert!(!b.gain_favorable);
    }

    #[test]
    fn nu_not_below_omega0_rejected() {
        assert!(spectral_separation_report(&desk_scale_baths(), 1.0, 1.0).is_err());
        assert!(spectral_separation_report(&desk_scale_baths(), 1.0, 2.0).is_err());
    }

    #[test]
    fn invalid_baths_rejected() {
        assert!(BathSpectrum::new(BathLabel::Hot, 0.0, flat(1.0)).is_err());
        assert!(BathSpectrum::new(BathLabel::Hot, 1.0, flat(-1.0)).is_err());
        let bad = SpectralProfile::Lorentzian {
            center: 1.0,
            width: 0.0,
            height: 1.0,
        };
        assert!(BathSpectrum::new(BathLabel::Hot, 1.0, bad).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn profile() -> impl Strategy<Value = SpectralProfile> {
            prop_oneof![
                (0.0..5.0f64, 0.0..10.0f64, 0.0..3.0f64).prop_map(|(lo, w, height)| {
                    SpectralProfile::FlatWindow { lo, hi: lo + w, height }
                }),
                (0.0..20.0f64, 0.01..3.0f64, 0.0..3.0f64).prop_map(|(center, width, height)| {
                    SpectralProfile::Lorentzian { center, width, height }
                }),
                (0.0..20.0f64, 0.01..3.0f64, 0.0..3.0f64).prop_map(|(center, width, height)| {
                    SpectralProfile::Gaussian { center, width, height }
                }),
            ]
        }

        proptest! {
            #[test]
            fn kms_holds_on_log_grid(p in profile(), t in 0.05..100.0f64, k in 0usize..60) {
                let bath = BathSpectrum::new(BathLabel::Hot, t, p).unwrap();
                let omega = 1e-3 * 10f64.powf(k as f64 / 12.0);
                let lhs = bath.sample(-omega);
                let rhs = (-omega / t).exp() * bath.sample(omega);
                prop_assert!((lhs - rhs).abs() <= 1e-15 * rhs.abs().max(1e-300));
                prop_assert!(bath.sample(omega) >= 0.0);
            }

            #[test]
            fn emission_branch_increases_with_temperature(
                p in profile(), t in 0.1..50.0f64, dt in 0.01..10.0f64, omega in 0.1..20.0f64
            ) {
                let cold = BathSpectrum::new(BathLabel::Cold, t, p).unwrap();
                let warm = BathSpectrum::new(BathLabel::Cold, t + dt, p).unwrap();
                if p.eval(omega) > 0.0 && cold.sample(-omega) > 0.0 {
                    prop_assert!(warm.sample(-omega) > cold.sample(-omega));
                }
            }

            #[test]
            fn combined_dominates_each(ph in profile(), pc in profile(), omega in -20.0..20.0f64) {
                let pair = BathPair::new(
                    BathSpectrum::new(BathLabel::Hot, 5.0, ph).unwrap(),
                    BathSpectrum::new(BathLabel::Cold, 0.5, pc).unwrap(),
                );
                let c = pair.combined(omega);
                prop_assert!(c >= pair.hot.sample(omega).max(pair.cold.sample(omega)));
            }
        }
    }
}

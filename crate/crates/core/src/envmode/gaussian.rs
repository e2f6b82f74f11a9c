use std::f64::consts::PI;

use super::Poly2;
use crate::{Error, Result, C64};

/// exp(−½(P_x x² + P_p p²) + b_x x + b_p p + c), diagonal precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianForm {
    pub precision: [f64; 2],
    pub linear: [C64; 2],
    pub constant: C64,
}

impl GaussianForm {
    /// Normalized Gaussian Wigner function (ħ/(σ_xσ_p)) exp(−(x−x')²/2σ_x² − (p−p')²/2σ_p²),
    /// so that ∫dx dp/(2πħ) W = 1.
    pub fn wigner(center: (f64, f64), widths: (f64, f64), hbar: f64) -> Self {
        let (sx2, sp2) = (widths.0 * widths.0, widths.1 * widths.1);
        Self {
            precision: [1.0 / sx2, 1.0 / sp2],
            linear: [C64::new(center.0 / sx2, 0.0), C64::new(center.1 / sp2, 0.0)],
            constant: C64::new(
                (hbar / (widths.0 * widths.1)).ln() - 0.5 * (center.0 * center.0 / sx2 + center.1 * center.1 / sp2),
                0.0,
            ),
        }
    }

    /// exp(−f·|a|²) with a = √(w/2ħ)(x + ip/w), `w` in fs⁻¹.
    pub fn coherent_damping(w: f64, hbar: f64, f: f64) -> Self {
        Self { precision: [f * w / hbar, f / (hbar * w)], linear: [C64::ZERO; 2], constant: C64::ZERO }
    }

    /// Product of two forms.
    pub fn times(&self, o: &Self) -> Self {
        Self {
            precision: [self.precision[0] + o.precision[0], self.precision[1] + o.precision[1]],
            linear: [self.linear[0] + o.linear[0], self.linear[1] + o.linear[1]],
            constant: self.constant + o.constant,
        }
    }

    /// Adds the phase exp(i(A x + B p)).
    pub fn with_phase(&self, a: f64, b: f64) -> Self {
        Self { linear: [self.linear[0] + C64::new(0.0, a), self.linear[1] + C64::new(0.0, b)], ..*self }
    }

    fn check(&self) -> Result<()> {
        if !(self.precision[0] > 0.0 && self.precision[1] > 0.0) {
            return Err(Error::Domain("Gaussian quadratic form is not positive definite".into()));
        }
        Ok(())
    }

    /// ln ∫dx dp exp(form) and the mean and variance of the normalized
    /// (complex-shifted) Gaussian.
    pub(crate) fn reduce(&self) -> Result<(C64, [C64; 2], [f64; 2])> {
        self.check()?;
        let [px, pp] = self.precision;
        let mean = [self.linear[0] / px, self.linear[1] / pp];
        let log = self.constant + (2.0 * PI / (px * pp).sqrt()).ln()
            + 0.5 * (self.linear[0] * self.linear[0] / px + self.linear[1] * self.linear[1] / pp);
        Ok((log, mean, [1.0 / px, 1.0 / pp]))
    }
}

/// E[y^k] for k = 0..=n of a Gaussian with (possibly complex) mean and variance v.
pub(crate) fn moments_1d(mean: C64, var: f64, n: usize) -> Vec<C64> {
    let mut m = vec![C64::ONE; n + 1];
    if n >= 1 {
        m[1] = mean;
    }
    for k in 2..=n {
        m[k] = mean * m[k - 1] + (k - 1) as f64 * var * m[k - 2];
    }
    m
}

/// (1/2πħ) ∫dx dp poly(x, p) · exp(form) · exp(i(A x + B p)), in closed form.
pub fn gaussian_phase_integral(poly: &Poly2, form: &GaussianForm, phase: (f64, f64), hbar: f64) -> Result<C64> {
    let (log, mean, var) = form.with_phase(phase.0, phase.1).reduce()?;
    let d = poly.degree();
    let mx = moments_1d(mean[0], var[0], d);
    let mp = moments_1d(mean[1], var[1], d);
    let e: C64 = poly.terms().map(|(i, j, c)| c * mx[i] * mp[j]).sum();
    Ok(log.exp() * e / (2.0 * PI * hbar))
}

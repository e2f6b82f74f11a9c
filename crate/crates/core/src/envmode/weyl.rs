use super::Poly2;
use crate::C64;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Coefficients c_k of (|n⟩⟨m|)_W = Σ_k c_k (a*)^{n−k} a^{m−k} e^{−2|a|²},
/// for k = 0..=min(n, m).
pub fn weyl_coefficients(n: usize, m: usize) -> Vec<f64> {
    let norm = 2f64.powi(m as i32 + 1) / (factorial(n) * factorial(m)).sqrt();
    (0..=n.min(m))
        .map(|k| {
            let inner: f64 = (k..=n).map(|j| binomial(n, j) * binomial(j, k)).sum();
            norm * factorial(k) * inner * binomial(m, k) * (-0.5f64).powi(k as i32)
        })
        .collect()
}

/// Weyl symbol of |n⟩⟨m| for a mode of angular frequency `w` (fs⁻¹),
/// as a function of mass-weighted (x, p).
#[derive(Clone, Debug)]
pub struct WeylProjector {
    pub n: usize,
    pub m: usize,
    pub w: f64,
    pub hbar: f64,
    coeffs: Vec<f64>,
}

impl WeylProjector {
    pub fn new(n: usize, m: usize, w: f64, hbar: f64) -> Self {
        Self { n, m, w, hbar, coeffs: weyl_coefficients(n, m) }
    }

    /// a = √(w/2ħ)(x + ip/w).
    pub fn coherent(&self, x: f64, p: f64) -> C64 {
        (self.w / (2.0 * self.hbar)).sqrt() * C64::new(x, p / self.w)
    }

    pub fn eval(&self, x: f64, p: f64) -> C64 {
        let a = self.coherent(x, p);
        let poly: C64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * a.conj().powu((self.n - k) as u32) * a.powu((self.m - k) as u32))
            .sum();
        poly * (-2.0 * a.norm_sqr()).exp()
    }

    /// The polynomial factor in (x, p), without e^{−2|a|²}.
    pub fn polynomial(&self) -> Poly2 {
        let s = (self.w / (2.0 * self.hbar)).sqrt();
        let a = Poly2::linear(C64::ZERO, C64::new(s, 0.0), C64::new(0.0, s / self.w));
        let ab = Poly2::linear(C64::ZERO, C64::new(s, 0.0), C64::new(0.0, -s / self.w));
        self.coeffs.iter().enumerate().fold(Poly2::zero(), |acc, (k, &c)| {
            let t = (&ab.pow(self.n - k) * &a.pow(self.m - k)).scale(C64::new(c, 0.0));
            &acc + &t
        })
    }
}

/// (|n⟩⟨m|)_W at (x, p) for a mode of frequency `omega_cm` (cm⁻¹).
pub fn weyl_projection(n: usize, m: usize, omega_cm: f64, x: f64, p: f64, units: &crate::model::UnitSystem) -> C64 {
    WeylProjector::new(n, m, units.angular(omega_cm), units.hbar).eval(x, p)
}

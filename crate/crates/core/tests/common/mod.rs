//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use twapert::envmode::{GaussianForm, Poly2, WeylProjector};
use twapert::model::*;
use twapert::{CMatrix, C64};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Pure-dephasing exponent Γ(t) of a Drude-Lorentz channel for coupling
/// difference `dg`, so that |ρ_01(t)| = |ρ_01(0)| e^{−Γ(t)}:
///
/// Γ(t) = (dg²/π) ∫ J(ω)/ω² coth(ω/2k_BT) (1 − cos(ωt/ħ)) dω.
///
/// Simpson on [0, Ω] and the analytic non-oscillating tail beyond Ω.
pub struct DephasingOracle {
    omega: Vec<f64>,
    weight: Vec<f64>,
    tail: f64,
    /// Coefficient of t² from the ω = 0 endpoint, where J coth/ω² diverges like 1/ω².
    origin: f64,
    hbar: f64,
}

impl DephasingOracle {
    pub fn new(lambda: f64, omega_c: f64, temperature: f64, units: &UnitSystem) -> Self {
        let cap = 1e5;
        let n = 2_000_000;
        let h = cap / n as f64;
        let coth = |w: f64| {
            if temperature == 0.0 {
                1.0
            } else {
                let y = w / (2.0 * units.kb * temperature);
                if y > 30.0 {
                    1.0
                } else {
                    1.0 / y.tanh()
                }
            }
        };
        let mut omega = Vec::with_capacity(n + 1);
        let mut weight = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let w = i as f64 * h;
            let simpson = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            // J/ω² coth with (1 − cos) factored out; the ω = 0 point is handled by `origin`.
            let f = if i == 0 { 0.0 } else { drude_lorentz(lambda, omega_c, w) / (w * w) * coth(w) };
            omega.push(w);
            weight.push(f * simpson * h / 3.0);
        }
        let tail = lambda / omega_c * (1.0 + omega_c * omega_c / (cap * cap)).ln();
        let origin = if temperature == 0.0 {
            0.0
        } else {
            h / 3.0 * (2.0 * lambda / omega_c) * (2.0 * units.kb * temperature) / (2.0 * units.hbar * units.hbar)
        };
        Self { omega, weight, tail, origin, hbar: units.hbar }
    }

    pub fn gamma(&self, dg: f64, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let s: f64 = self
            .omega
            .iter()
            .zip(&self.weight)
            .map(|(w, f)| f * (1.0 - (w * t / self.hbar).cos()))
            .sum();
        dg * dg / PI * (s + self.tail + self.origin * t * t)
    }
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A random 2- or 3-state system with one or two modes (on one or two
/// channels) and random Wigner centers.
pub fn random_system(rng: &mut impl Rng, two_modes: bool) -> OpenSystem {
    let units = UnitSystem::default();
    let m = rng.random_range(2..=3usize);
    let mut v = CMatrix::zeros(m, m);
    for i in 0..m {
        for j in i + 1..m {
            let z = C64::new(rng.random_range(-40.0..40.0), rng.random_range(-10.0..10.0));
            v[(i, j)] = z;
            v[(j, i)] = z.conj();
        }
    }
    let energies = (0..m).map(|_| rng.random_range(-200.0..200.0)).collect();
    let channels = if two_modes && rng.random_bool(0.5) { 2 } else { 1 };
    let coefficients = (0..m).map(|_| (0..channels).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    let system = SystemModel::new(energies, v, coefficients).unwrap();
    let mut mode = |lo: f64| DiscreteMode { omega: rng.random_range(lo..lo + 400.0), x0: rng.random_range(0.05..1.0) };
    let chans = if channels == 2 {
        vec![SpectralChannel::Discrete { modes: vec![mode(20.0)] }, SpectralChannel::Discrete { modes: vec![mode(500.0)] }]
    } else if two_modes {
        vec![SpectralChannel::Discrete { modes: vec![mode(20.0), mode(500.0)] }]
    } else {
        vec![SpectralChannel::Discrete { modes: vec![mode(20.0)] }]
    };
    let centers = chans
        .iter()
        .map(|c| c.modes().unwrap().iter().map(|_| (rng.random_range(-0.5..0.5), rng.random_range(-0.02..0.02))).collect())
        .collect();
    let temperature = if rng.random_bool(0.5) { 0.0 } else { 300.0 };
    let bath = BathSpec::new(chans, temperature, WidthRule::Thermal).unwrap().with_centers(centers).unwrap();
    OpenSystem::new(units, system, bath, InitialSystemDensity::population(0, m).unwrap()).unwrap()
}

pub fn random_times(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut cuts: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..300.0)).collect();
    cuts.sort_by(f64::total_cmp);
    let mut t = vec![0.0];
    t.extend(cuts);
    t.push(300.0);
    t
}

/// Worst deviation of (1/2πħ)∫dx dp (|n⟩⟨m|)_W (|k⟩⟨l|)_W from δ_mk δ_nl over
/// indices ≤ `max`, by a uniform grid in the coherent amplitude where the
/// measure is d²a/π.
pub fn weyl_orthonormality_error(max: usize, w: f64, hbar: f64) -> f64 {
    let s = (w / (2.0 * hbar)).sqrt();
    let (h, half) = (0.04, 150);
    let mut table = Vec::new();
    for n in 0..=max {
        for m in 0..=max {
            table.push(((n, m), WeylProjector::new(n, m, w, hbar)));
        }
    }
    let k = table.len();
    let mut sums = vec![C64::ZERO; k * k];
    for i in -half..=half {
        for j in -half..=half {
            let (x, p) = (i as f64 * h / s, j as f64 * h * w / s);
            let vals: Vec<C64> = table.iter().map(|(_, t)| t.eval(x, p)).collect();
            for (a, u) in vals.iter().enumerate() {
                for (b, v) in vals.iter().enumerate() {
                    sums[a * k + b] += u * v;
                }
            }
        }
    }
    let mut worst: f64 = 0.0;
    for (a, ((n, m), _)) in table.iter().enumerate() {
        for (b, ((kk, ll), _)) in table.iter().enumerate() {
            let expect = if m == kk && n == ll { 1.0 } else { 0.0 };
            worst = worst.max((sums[a * k + b] * (h * h / PI) - C64::new(expect, 0.0)).norm());
        }
    }
    worst
}

/// A random polynomial of degree ≤ 4, positive definite Gaussian and phase.
pub fn random_gaussian_case(r: &mut impl Rng) -> (Poly2, GaussianForm, (f64, f64)) {
    let form = GaussianForm {
        precision: [r.random_range(0.5..3.0), r.random_range(0.5..3.0)],
        linear: [c(r.random_range(-1.0..1.0), 0.0), c(r.random_range(-1.0..1.0), 0.0)],
        constant: c(r.random_range(-0.5..0.5), r.random_range(-1.0..1.0)),
    };
    let phase = (r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
    let mut poly = Poly2::zero();
    for _ in 0..4 {
        let (i, j) = (r.random_range(0..=2usize), r.random_range(0..=2usize));
        poly = &poly + &Poly2::monomial(c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)), i, j);
    }
    (poly, form, phase)
}

/// (1/2πħ)∫dx dp poly·exp(form)·exp(i(Ax + Bp)) by a 2D trapezoid rule over
/// ±12 standard deviations about the real center.
pub fn gaussian_by_quadrature(poly: &Poly2, form: &GaussianForm, phase: (f64, f64), hbar: f64) -> C64 {
    let cx = form.linear[0].re / form.precision[0];
    let cp = form.linear[1].re / form.precision[1];
    let h = 0.02;
    let nx = (12.0 / form.precision[0].sqrt() / h) as i64;
    let np = (12.0 / form.precision[1].sqrt() / h) as i64;
    let mut sum = C64::ZERO;
    for i in -nx..=nx {
        let x = cx + i as f64 * h;
        for j in -np..=np {
            let p = cp + j as f64 * h;
            let e = -0.5 * (form.precision[0] * x * x + form.precision[1] * p * p)
                + form.linear[0] * x
                + form.linear[1] * p
                + form.constant
                + C64::new(0.0, phase.0 * x + phase.1 * p);
            sum += poly.eval(x, p) * e.exp();
        }
    }
    sum * h * h / (2.0 * PI * hbar)
}

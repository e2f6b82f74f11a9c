mod common;

use common::{c, max_abs_diff};
use nalgebra::{DMatrix, SymmetricEigen};
use twapert::engine::{assemble_series, Basis, Observable, QuadratureSpec};
use twapert::model::*;
use twapert::oracle::*;
use twapert::{CMatrix, C64};

fn sorted_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let mut e: Vec<f64> = SymmetricEigen::new(h.clone()).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

fn two_state(tunneling: f64, x0_scale: f64, rule: WidthRule, temperature: f64) -> OpenSystem {
    let units = UnitSystem::default();
    let t = c(tunneling, 0.0);
    let couplings = DMatrix::from_row_slice(2, 2, &[C64::ZERO, t, t, C64::ZERO]);
    let system = SystemModel::new(vec![500.0, 0.0], couplings, vec![vec![0.0], vec![1.0]]).unwrap();
    let mut mode = DiscreteMode::from_reorganization(500.0, 25.0, &units);
    mode.x0 *= x0_scale;
    let bath = BathSpec::new(vec![SpectralChannel::Discrete { modes: vec![mode] }], temperature, rule).unwrap();
    OpenSystem::new(units, system, bath, InitialSystemDensity::population(0, 2).unwrap()).unwrap()
}

#[test]
fn undisplaced_spectrum_is_a_ladder() {
    let sys = two_state(0.0, 0.0, WidthRule::GroundState, 0.0);
    let dense = build_hamiltonian(&sys, &[6]).unwrap();
    assert_eq!(dense.dimension(), 12);
    let mut expect: Vec<f64> = (0..2).flat_map(|n| (0..6).map(move |q| [500.0, 0.0][n] + 500.0 * (q as f64 + 0.5))).collect();
    expect.sort_by(f64::total_cmp);
    for (a, b) in sorted_eigenvalues(&dense.hamiltonian).iter().zip(&expect) {
        assert!((a - b).abs() < 1e-10);
    }
    assert!(dense.hermiticity_defect() < 1e-15);
}

#[test]
fn displaced_spectrum_sits_on_the_potential_minima() {
    // Without tunneling each diabatic block is a shifted oscillator whose
    // ladder starts at the minimum energy ε_n + ω/2.
    let sys = two_state(0.0, 1.0, WidthRule::GroundState, 0.0);
    let dense = build_hamiltonian(&sys, &[40]).unwrap();
    let e = sorted_eigenvalues(&dense.hamiltonian);
    let mut expect: Vec<f64> = (0..2).flat_map(|n| (0..5).map(move |q| [500.0, 0.0][n] + 500.0 * (q as f64 + 0.5))).collect();
    expect.sort_by(f64::total_cmp);
    for (a, b) in e.iter().zip(&expect) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn helpers() {
    // Coherent state amplitudes.
    let alpha = c(0.6, -0.3);
    let d = displacement_operator(alpha, 30);
    let mut fact = 1.0;
    for q in 0..8 {
        if q > 0 {
            fact *= q as f64;
        }
        let expect = (-alpha.norm_sqr() / 2.0).exp() * alpha.powu(q as u32) / fact.sqrt();
        assert!((d[(q, 0)] - expect).norm() < 1e-10);
    }
    assert!(max_abs_diff(&(&d * d.adjoint()), &CMatrix::identity(30, 30)) < 1e-10);

    let a = DMatrix::from_row_slice(2, 2, &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]);
    let b = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.5, 0.0), c(0.3, 0.0), c(0.2, 0.0)]));
    let ab = kron(&a, &b);
    assert!(max_abs_diff(&partial_trace(&ab, &[2, 3], &[0]), &a) < 1e-15);
    assert!(max_abs_diff(&partial_trace(&ab, &[2, 3], &[1]), &b) < 1e-15);

    let p = thermal_populations(500.0, 300.0, KB_CM_K, 20);
    let r = (-500.0 / (KB_CM_K * 300.0)).exp();
    assert!((p[1] / p[0] - r).abs() < 1e-12);
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    assert_eq!(thermal_populations(500.0, 0.0, KB_CM_K, 4), vec![1.0, 0.0, 0.0, 0.0]);

    assert!(von_neumann(&(CMatrix::identity(2, 2) * c(0.5, 0.0))) - 2f64.ln() < 1e-14);
}

#[test]
fn propagation_is_unitary_and_conserves_energy() {
    let sys = presets::single_mode(10.0).unwrap();
    let times: Vec<f64> = (0..=10).map(|i| 25.0 * i as f64).collect();
    let traj = run_oracle(&sys, &[20], &times).unwrap();
    let e0 = traj.snapshots[0].energy;
    for s in &traj.snapshots {
        assert!((s.trace - C64::ONE).norm() < 1e-10);
        assert!(s.hermiticity_defect < 1e-10);
        assert!((s.energy - e0).abs() < 1e-9 * e0.abs());
    }
}

#[test]
fn fock_truncation_converges() {
    let sys = presets::single_mode(10.0).unwrap();
    let times: Vec<f64> = (0..=10).map(|i| 25.0 * i as f64).collect();
    let a = run_oracle(&sys, &[15], &times).unwrap().population(0);
    let b = run_oracle(&sys, &[30], &times).unwrap().population(0);
    let worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn initial_values_are_exact() {
    let sys = presets::single_mode(10.0).unwrap();
    let traj = run_oracle(&sys, &[12], &[0.0]).unwrap();
    let s = &traj.snapshots[0];
    assert!(max_abs_diff(&s.system, sys.initial.matrix()) < 1e-12);
    let pops = thermal_populations(500.0, 300.0, KB_CM_K, 12);
    for (q, p) in pops.iter().enumerate() {
        assert!((s.modes[0][(q, q)].re - p).abs() < 1e-12);
    }
}

#[test]
fn frozen_populations_without_tunneling() {
    let sys = two_state(0.0, 1.0, WidthRule::Thermal, 300.0);
    let times: Vec<f64> = (0..=8).map(|i| 40.0 * i as f64).collect();
    let traj = run_oracle(&sys, &[15], &times).unwrap();
    assert!(traj.population(0).iter().all(|p| (p - 1.0).abs() < 1e-12));
}

#[test]
fn pure_composite_has_equal_entropies() {
    let sys = two_state(30.0, 1.0, WidthRule::GroundState, 0.0);
    let times: Vec<f64> = (0..=6).map(|i| 50.0 * i as f64).collect();
    let traj = run_oracle(&sys, &[20], &times).unwrap();
    let mut grew = false;
    for s in &traj.snapshots {
        assert!((s.system_entropy() - s.bath_entropy()).abs() < 1e-8);
        grew |= s.system_entropy() > 1e-3;
    }
    assert!(grew);
}

#[test]
fn wigner_centers_displace_the_mode() {
    let units = UnitSystem::default();
    let system = SystemModel::new(vec![0.0, 0.0], CMatrix::zeros(2, 2), vec![vec![0.0], vec![0.0]]).unwrap();
    let mode = DiscreteMode { omega: 200.0, x0: 0.0 };
    let bath = BathSpec::new(vec![SpectralChannel::Discrete { modes: vec![mode] }], 0.0, WidthRule::GroundState)
        .unwrap()
        .with_centers(vec![vec![(0.5, 0.0)]])
        .unwrap();
    let sys = OpenSystem::new(units, system, bath, InitialSystemDensity::population(0, 2).unwrap()).unwrap();
    let dense = build_hamiltonian(&sys, &[25]).unwrap();
    let rho = dense.mode_state(0, units.kb);
    let w = units.angular(200.0);
    let mean = (w / (2.0 * units.hbar)) * 0.25;
    assert!((rho[(0, 0)].re - (-mean).exp()).abs() < 1e-10);
}

#[test]
fn validation_errors() {
    let cont = presets::qubit_decoherence().unwrap();
    assert!(matches!(build_hamiltonian(&cont, &[]), Err(twapert::Error::Validation(_))));
    let sys = presets::single_mode(10.0).unwrap();
    assert!(build_hamiltonian(&sys, &[]).is_err());
    assert!(build_hamiltonian(&sys, &[0]).is_err());
    assert!(build_hamiltonian(&sys, &[MAX_DIMENSION]).is_err());
    let dense = build_hamiltonian(&sys, &[4]).unwrap();
    assert!(dense.initial_state(&CMatrix::identity(3, 3), KB_CM_K).is_err());
    assert!(dense.propagate(&CMatrix::identity(3, 3), &[0.0]).is_err());
}

#[test]
fn csv_and_series() {
    let sys = presets::single_mode(10.0).unwrap();
    let traj = run_oracle(&sys, &[8], &[0.0, 10.0]).unwrap();
    assert_eq!(traj.series(Observable::Population(0)).unwrap(), traj.population(0));
    assert!(traj.series(Observable::Population(5)).is_err());
    let mut buf = Vec::new();
    traj.write_csv(&mut buf, &[Observable::Population(0), Observable::Purity]).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("t_fs,oracle_pop1,oracle_purity\n"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn second_order_engine_tracks_the_oracle() {
    let sys = presets::single_mode(10.0).unwrap();
    let spec = QuadratureSpec::new(250.0, 101, 2).unwrap();
    let r = assemble_series(&sys, spec, Basis::Local).unwrap();
    let approx = r.total_series(Observable::Population(0), 2).unwrap();
    let exact = run_oracle(&sys, &[20], &r.times).unwrap().population(0);
    let worst = approx.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(worst < 0.02, "{worst}");
    // The correction matters: order 0 alone is off by far more.
    let bare = exact.iter().map(|p| (1.0 - p).abs()).fold(0.0, f64::max);
    assert!(bare > 10.0 * worst);
}

mod common;

use common::{max_abs_diff, DephasingOracle};
use nalgebra::DMatrix;
use twapert::engine::*;
use twapert::model::*;
use twapert::{CMatrix, C64};

fn sigma(which: char) -> CMatrix {
    let (a, b, c, d) = match which {
        'x' => (0.0, 1.0, 1.0, 0.0),
        'z' => (1.0, 0.0, 0.0, -1.0),
        _ => unreachable!(),
    };
    DMatrix::from_row_slice(2, 2, &[C64::new(a, 0.0), C64::new(b, 0.0), C64::new(c, 0.0), C64::new(d, 0.0)])
}

/// Qubit whose single mode has zero displacement: the environment drops out.
fn envfree_qubit(tunneling: f64) -> OpenSystem {
    let units = UnitSystem::default();
    let system = SystemModel::qubit(50.0, tunneling).unwrap();
    let bath = BathSpec::new(
        vec![SpectralChannel::Discrete { modes: vec![DiscreteMode { omega: 100.0, x0: 0.0 }] }],
        0.0,
        WidthRule::GroundState,
    )
    .unwrap();
    let initial = InitialSystemDensity::pure(&[C64::ONE, C64::ONE]).unwrap();
    OpenSystem::new(units, system, bath, initial).unwrap()
}

#[test]
fn quadrature_spec_validation() {
    assert!(QuadratureSpec::new(0.0, 10, 1).is_err());
    assert!(QuadratureSpec::new(10.0, 1, 1).is_err());
    let s = QuadratureSpec::new(100.0, 101, 2).unwrap();
    assert_eq!(s.dt(), 1.0);
    assert_eq!(s.index_of(37.0).unwrap(), 37);
    assert!(s.index_of(37.5).is_err());
    assert!(s.index_of(101.0).is_err());
    assert_eq!(QuadratureSpec::with_default_grid(300.0, 3).unwrap().grid_points, 200);
    assert_eq!(QuadratureSpec::with_default_grid(300.0, 2).unwrap().grid_points, 400);
}

#[test]
fn order_caps() {
    let sys = presets::single_mode(10.0).unwrap();
    assert!(LocalEngine::new(&sys, QuadratureSpec::new(10.0, 11, 4).unwrap()).is_err());
    assert!(EigenEngine::new(&sys, QuadratureSpec::new(10.0, 11, 3).unwrap()).is_err());
    let cont = presets::qubit_decoherence().unwrap();
    assert!(EigenEngine::new(&cont, QuadratureSpec::new(10.0, 11, 1).unwrap()).is_err());
}

#[test]
fn zeroth_order_examples() {
    let sys = envfree_qubit(10.0);
    let e = LocalEngine::new(&sys, QuadratureSpec::new(100.0, 51, 1).unwrap()).unwrap();
    let sx = order_contribution_envfree(&e, &sigma('x'), 0, 0).unwrap();
    assert!((sx - C64::ONE).norm() < 1e-15);
    for i in [0, 10, 50] {
        assert!(order_contribution_envfree(&e, &sigma('z'), 0, i).unwrap().norm() < 1e-15);
    }
    for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let v = e.local_rdm_order(0, 0, (a, b)).unwrap();
        assert!((v - sys.initial.element(a, b)).norm() < 1e-15);
    }
    assert!(e.local_rdm_order(0, 51, (0, 0)).is_err());
    assert!(e.local_rdm_order(2, 0, (0, 0)).is_err());
}

#[test]
fn zeroth_order_populations_are_constant() {
    let sys = presets::qubit_decoherence().unwrap();
    let r = assemble_series(&sys, QuadratureSpec::new(300.0, 61, 0).unwrap(), Basis::Local).unwrap();
    for rho in &r.orders[0] {
        assert!((rho[(0, 0)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((rho[(1, 1)] - C64::new(0.5, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn envfree_orders_scale_as_powers_of_the_coupling() {
    let spec = QuadratureSpec::new(150.0, 61, 3).unwrap();
    let a = envfree_qubit(3.0);
    let b = envfree_qubit(6.0);
    let ea = LocalEngine::new(&a, spec).unwrap();
    let eb = LocalEngine::new(&b, spec).unwrap();
    for n in 1..=3 {
        let ra = ea.order_rdm(n).unwrap();
        let rb = eb.order_rdm(n).unwrap();
        let factor = C64::new(2f64.powi(n as i32), 0.0);
        for (x, y) in ra.iter().zip(&rb) {
            let scale = y.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(max_abs_diff(&(x * factor), y) <= 1e-10 * scale.max(1e-300), "order {n}");
        }
    }
}

#[test]
fn envfree_series_approaches_exact_rabi_dynamics() {
    // Two-level evolution under H = (ε/2)σ_z + Δσ_x from (|↑⟩ + |↓⟩)/√2.
    let (eps, d) = (50.0, 5.0);
    let sys = envfree_qubit(d);
    let spec = QuadratureSpec::new(100.0, 201, 3).unwrap();
    let r = assemble_series(&sys, spec, Basis::Local).unwrap();
    let hbar = sys.units.hbar;
    let h = DMatrix::from_row_slice(2, 2, &[C64::new(eps / 2.0, 0.0), C64::new(d, 0.0), C64::new(d, 0.0), C64::new(-eps / 2.0, 0.0)]);
    let eig = h.clone().symmetric_eigen();
    let mut errs = Vec::new();
    for (i, t) in r.times.iter().enumerate() {
        let u = &eig.eigenvectors
            * CMatrix::from_diagonal(&eig.eigenvalues.map(|e| C64::from_polar(1.0, -e * t / hbar)))
            * eig.eigenvectors.adjoint();
        let exact = &u * sys.initial.matrix() * u.adjoint();
        errs.push((0..=3).map(|n| max_abs_diff(&r.partial_sum(n)[i], &exact)).collect::<Vec<_>>());
    }
    let sup = |n: usize| errs.iter().map(|e| e[n]).fold(0.0, f64::max);
    // Each order improves on the last and order 3 is close.
    assert!(sup(1) < sup(0) && sup(2) < sup(1) && sup(3) < sup(2));
    assert!(sup(3) < 1e-3, "order 3 error {}", sup(3));
}

#[test]
fn first_order_population_is_real() {
    let sys = presets::single_mode(10.0).unwrap();
    let e = LocalEngine::new(&sys, QuadratureSpec::new(100.0, 101, 1).unwrap()).unwrap();
    let sys2 = presets::weak_coupling().unwrap();
    let e2 = LocalEngine::new(&sys2, QuadratureSpec::new(100.0, 101, 1).unwrap()).unwrap();
    for (eng, idx) in [(&e, 100), (&e2, 60)] {
        for n in 0..2 {
            let v = eng.local_rdm_order(1, idx, (n, n)).unwrap();
            assert!(v.im.abs() < 1e-12 * (1.0 + v.re.abs()), "{v}");
        }
    }
}

#[test]
fn assembled_densities_are_hermitian_and_orders_traceless() {
    let cases = [
        (presets::qubit_decoherence().unwrap(), QuadratureSpec::new(150.0, 61, 3).unwrap(), Basis::Local),
        (presets::weak_coupling().unwrap(), QuadratureSpec::new(400.0, 101, 2).unwrap(), Basis::Local),
        (presets::single_mode(20.0).unwrap(), QuadratureSpec::new(200.0, 101, 2).unwrap(), Basis::Eigen),
    ];
    for (sys, spec, basis) in cases {
        let r = assemble_series(&sys, spec, basis).unwrap();
        assert!(r.hermiticity_defect(spec.max_order) < 1e-10);
        for n in 1..=spec.max_order {
            for rho in &r.orders[n] {
                assert!(rho.trace().norm() < 1e-6, "order {n} trace {}", rho.trace());
            }
        }
    }
}

#[test]
fn purity_of_limiting_states() {
    let pure = InitialSystemDensity::pure(&[C64::ONE, C64::new(0.0, 1.0)]).unwrap().matrix().clone();
    let mixed = CMatrix::identity(2, 2) * C64::new(0.5, 0.0);
    let r = TimeSeriesResult { times: vec![0.0, 1.0], basis: Basis::Local, orders: vec![vec![pure, mixed]] };
    let p = r.purity(0);
    assert!((p[0] - 1.0).abs() < 1e-15);
    assert!((p[1] - 0.5).abs() < 1e-15);
    let b = r.bloch(0).unwrap();
    assert!((b[0][1] - 1.0).abs() < 1e-15 && b[1].iter().all(|v| v.abs() < 1e-15));
}

#[test]
fn guard_restores_trace_and_hermiticity() {
    let r = DMatrix::from_row_slice(2, 2, &[C64::new(0.8, 0.0), C64::new(0.1, 0.2), C64::new(0.3, 0.0), C64::new(0.4, 0.0)]);
    let g = guard_density(&r);
    assert!((g.trace() - C64::ONE).norm() < 1e-15);
    assert!(max_abs_diff(&g, &g.adjoint()) < 1e-15);
}

#[test]
fn pure_dephasing_envelope() {
    let sys = presets::qubit_decoherence().unwrap().with_scaled_couplings(0.0).unwrap();
    let spec = QuadratureSpec::new(500.0, 101, 2).unwrap();
    let r = assemble_series(&sys, spec, Basis::Local).unwrap();
    // Without coupling every higher order vanishes identically.
    for n in 1..=2 {
        assert!(r.orders[n].iter().all(|m| m.iter().all(|z| *z == C64::ZERO)));
    }
    let oracle = DephasingOracle::new(presets::QUBIT_LAMBDA, presets::QUBIT_OMEGA_C, 0.0, &sys.units);
    for (i, t) in r.times.iter().enumerate().step_by(10) {
        let got = r.orders[0][i][(0, 1)].norm();
        let expect = 0.5 * (-oracle.gamma(2.0, *t)).exp();
        assert!((got - expect).abs() < 1e-6, "t = {t}: {got} vs {expect}");
    }
}

#[test]
fn grid_doubling_changes_second_order_little() {
    let sys = presets::weak_coupling().unwrap();
    let coarse = assemble_series(&sys, QuadratureSpec::new(1000.0, 401, 2).unwrap(), Basis::Local).unwrap();
    let fine = assemble_series(&sys, QuadratureSpec::new(1000.0, 801, 2).unwrap(), Basis::Local).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..coarse.times.len() {
        worst = worst.max(max_abs_diff(&coarse.orders[2][i], &fine.orders[2][2 * i]));
    }
    assert!(worst < 1e-4, "{worst}");
}

#[test]
fn eigen_engine_examples() {
    let sys = presets::single_mode(20.0).unwrap();
    let spec = QuadratureSpec::new(200.0, 101, 2).unwrap();
    let e = EigenEngine::new(&sys, spec).unwrap();
    let rho0 = e.eigenbasis().to_eigen(sys.initial.matrix());
    let zeroth = e.order_rdm(0).unwrap();
    assert!(max_abs_diff(&zeroth[0], &rho0) < 1e-14);
    for a in 0..2 {
        assert!(zeroth.iter().all(|r| (r[(a, a)] - rho0[(a, a)]).norm() < 1e-14));
    }
    assert_eq!(e.eigen_rdm_order(1, 0, (0, 0)).unwrap(), C64::ZERO);
    assert!(e.eigen_rdm_order(1, 101, (0, 0)).is_err());

    // Δ = 0: no off-diagonal eigen displacement, so order 1 vanishes.
    let flat = presets::single_mode(0.0).unwrap();
    let e = EigenEngine::new(&flat, spec).unwrap();
    assert!(e.order_rdm(1).unwrap().iter().all(|r| r.iter().all(|z| *z == C64::ZERO)));
}

#[test]
fn local_and_eigen_agree_without_coupling() {
    let sys = presets::single_mode(0.0).unwrap();
    let spec = QuadratureSpec::new(200.0, 101, 2).unwrap();
    let l = assemble_series(&sys, spec, Basis::Local).unwrap().partial_sum(2);
    let e = assemble_series(&sys, spec, Basis::Eigen).unwrap().partial_sum(2);
    for (a, b) in l.iter().zip(&e) {
        assert!(max_abs_diff(a, b) < 1e-12);
        assert!((a[(0, 0)].re - 1.0).abs() < 1e-14);
    }
}

#[test]
fn local_basis_breaks_down_first_at_strong_tunneling() {
    let sys = presets::single_mode(100.0).unwrap();
    let spec = QuadratureSpec::new(500.0, 401, 2).unwrap();
    let exit = |b| {
        assemble_series(&sys, spec, b).unwrap().partial_sum(2).iter().position(|r| (r[(0, 0)].re - 0.5).abs() > 0.6)
    };
    let local = exit(Basis::Local).expect("local basis stays bounded");
    assert!(exit(Basis::Eigen).is_none_or(|e| e > local));
}

#[test]
fn csv_layout() {
    let sys = envfree_qubit(10.0);
    let r = assemble_series(&sys, QuadratureSpec::new(10.0, 3, 1).unwrap(), Basis::Local).unwrap();
    let mut buf = Vec::new();
    r.write_csv(&mut buf, &[Observable::SigmaX, Observable::Purity], "").unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t_fs,sigma_x_order0,sigma_x_order1,sigma_x_total,purity_order0,purity_order1,purity_total");
    assert_eq!(lines.count(), 3);
    assert!(r.total_series(Observable::Population(2), 1).is_err());
}

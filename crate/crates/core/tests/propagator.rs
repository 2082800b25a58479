mod common;

use nalgebra::DMatrix;
use ratecorr::neuron::{effective_matrix, stationary_state};
use ratecorr::topology::realize;
use ratecorr::{NetworkParams, Propagator, TopologySpec};

fn setup(spec: &TopologySpec) -> (Propagator, DMatrix<f64>) {
    let p = NetworkParams::table1();
    let mu = stationary_state(&p).unwrap()[0];
    let a = effective_matrix(&realize(spec, p.weight).unwrap(), &p, mu).a;
    (Propagator::from_topology(spec, &p, mu).unwrap(), a)
}

fn specs() -> Vec<TopologySpec> {
    vec![
        TopologySpec::circular_ladder(5).unwrap(),
        TopologySpec::band(3, 4, vec![2, 1, 1]).unwrap(),
        TopologySpec::band(3, 5, vec![2, 1, 2]).unwrap(),
        TopologySpec::circulant_band(9, 2).unwrap(),
    ]
}

#[test]
fn matches_matrix_exponential() {
    for spec in specs() {
        let (prop, a) = setup(&spec);
        for t in [0.1, 1.0, 5.0] {
            let oracle = common::expm(&(&a * t));
            assert!(common::max_abs_diff(&prop.phi_matrix(t).unwrap(), &oracle) < 1e-10, "{spec:?} t={t}");
        }
    }
}

#[test]
fn semigroup() {
    for spec in specs() {
        let (prop, _) = setup(&spec);
        let (s, t) = (0.7, 1.9);
        let lhs = prop.phi_matrix(s + t).unwrap();
        let rhs = prop.phi_matrix(s).unwrap() * prop.phi_matrix(t).unwrap();
        assert!(common::max_abs_diff(&lhs, &rhs) < 1e-12);
    }
}

#[test]
fn dense_basis_agrees_with_structured_basis() {
    for spec in specs() {
        let (prop, _) = setup(&spec);
        let dense = prop.with_dense_basis();
        let n = prop.n();
        for t in [0.3, 2.0] {
            for i in 0..n {
                for j in 0..n {
                    assert!((prop.phi(i, j, t).unwrap() - dense.phi(i, j, t).unwrap()).abs() < 1e-12);
                    assert!((prop.phi_phit(i, j, t).unwrap() - dense.phi_phit(i, j, t).unwrap()).abs() < 1e-12);
                    assert!((prop.phi_phit_integral(i, j, t).unwrap() - dense.phi_phit_integral(i, j, t).unwrap()).abs() < 1e-12);
                    assert!((prop.integral_outer(i, j, t).unwrap() - dense.integral_outer(i, j, t).unwrap()).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn integrals_match_trapezoid() {
    let t = 2.5;
    let steps = 4000;
    let h = t / steps as f64;
    for spec in specs() {
        let (prop, a) = setup(&spec);
        let phis: Vec<DMatrix<f64>> = (0..=steps).map(|k| common::expm(&(&a * (k as f64 * h)))).collect();
        let int_phi = common::trapezoid_matrices(&phis, h);
        let outer: Vec<DMatrix<f64>> = phis.iter().map(|p| p * p.transpose()).collect();
        let int_outer = common::trapezoid_matrices(&outer, h);
        let n = prop.n();
        // Trapezoid error is O(h²) ≈ 4e-7 relative; the tolerance leaves room for it.
        for i in 0..n {
            for j in 0..n {
                assert!((prop.phi_integral(i, j, t).unwrap() - int_phi[(i, j)]).abs() < 1e-6);
                assert!((prop.phi_phit_integral(i, j, t).unwrap() - int_outer[(i, j)]).abs() < 1e-6);
                let io = (&int_phi * int_phi.transpose())[(i, j)];
                assert!((prop.integral_outer(i, j, t).unwrap() - io).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn spectral_sums_are_real() {
    for spec in specs() {
        let (prop, _) = setup(&spec);
        let n = prop.n();
        for k in 0..1000 {
            let (i, j, t) = (k % n, (k * 7 + 3) % n, 0.01 * k as f64);
            assert!(prop.phi_residue(i, j, t) <= 1e-12);
        }
    }
}

#[test]
fn zero_rate_integrates_linearly() {
    // The table2 preset on a fully connected graph sits exactly at a zero dominant rate.
    let p = NetworkParams::table2();
    let prop = Propagator::from_topology(&TopologySpec::complete(6).unwrap(), &p, 0.0).unwrap();
    assert_eq!(prop.row_rate(), 0.0);
    let t = 3.0;
    let row: f64 = (0..6).map(|j| prop.phi_integral(0, j, t).unwrap()).sum();
    assert!((row - t).abs() < 1e-12);
    let g = |s: f64| (0..6).map(|j| prop.phi(0, j, s).unwrap()).sum::<f64>();
    assert!((common::trapezoid(g, t, 100) - t).abs() < 1e-12);
}

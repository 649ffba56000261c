use approx::assert_relative_eq;
use pfi::fixtures;
use pfi::partition::{
    ising_bruteforce, ising_z, z_bruteforce, z_by_method, z_complex_sum, z_multicomplex, z_pfaffian_planar, z_real_sum,
    IsingModel, Method, PfaffianEvaluator,
};
use pfi::Error;

#[test]
fn uniform_weight_closed_forms() {
    for x in [0.1, 0.5, 0.9] {
        let (g, s) = fixtures::k3_planar();
        assert_relative_eq!(
            z_pfaffian_planar(&g, &s, &[x; 3]).unwrap(),
            1.0 + x * x * x,
            max_relative = 1e-12
        );
        let (g, s) = fixtures::c4_planar();
        assert_relative_eq!(
            z_pfaffian_planar(&g, &s, &[x; 4]).unwrap(),
            1.0 + x.powi(4),
            max_relative = 1e-12
        );
    }
}

#[test]
fn planar_scheme_through_every_route() {
    let (g, s) = fixtures::k4_planar();
    let w = [0.2, 0.4, 0.6, 0.8, 0.3, 0.5];
    let z = z_pfaffian_planar(&g, &s, &w).unwrap();
    assert_relative_eq!(z_multicomplex(&g, &s, &w).unwrap(), z, max_relative = 1e-12);
    assert_relative_eq!(z_complex_sum(&g, &s, &w).unwrap(), z, max_relative = 1e-12);
    assert_relative_eq!(z_real_sum(&g, &s, &w).unwrap(), z, max_relative = 1e-12);
    assert_eq!(PfaffianEvaluator::new(&g, &s).unwrap().real_terms(&w).unwrap().len(), 1);
}

#[test]
fn torus_term_counts() {
    let (g, s) = fixtures::torus_grid3x3_even();
    let ev = PfaffianEvaluator::new(&g, &s).unwrap();
    let w: Vec<f64> = (0..g.n_edges()).map(|e| 0.15 + 0.04 * e as f64).collect();
    assert_eq!(ev.complex_terms(&w).unwrap().len(), 8);
    assert_eq!(ev.real_terms(&w).unwrap().len(), 4);
    assert_relative_eq!(
        ev.real_sum(&w).unwrap(),
        z_bruteforce(&g, &w).unwrap(),
        max_relative = 1e-9
    );
}

#[test]
fn orientable_nonplanar_scheme_is_rejected() {
    let (g, s) = fixtures::torus_grid3x3_orientable();
    let w = vec![0.5; g.n_edges()];
    assert!(matches!(z_multicomplex(&g, &s, &w), Err(Error::SchemeInvalid(_))));
    assert_eq!(z_pfaffian_planar(&g, &s, &w).unwrap_err(), Error::NotPlanar);
}

#[test]
fn auto_method_picks_a_route() {
    let (g, s) = fixtures::k33_projective();
    let w = vec![0.4; g.n_edges()];
    let b = z_bruteforce(&g, &w).unwrap();
    assert_relative_eq!(
        z_by_method(&g, Some(&s), &w, Method::Auto).unwrap(),
        b,
        max_relative = 1e-9
    );
    assert_eq!(
        z_by_method(&g, None, &w, Method::Auto).unwrap_err(),
        Error::MissingScheme
    );
}

#[test]
fn ising_high_temperature_limit() {
    let (g, s) = fixtures::grid_planar(3, 3);
    let m = IsingModel::new(g, vec![1.0; 12], 1e-12).unwrap();
    assert_relative_eq!(
        ising_z(&m, Some(&s), Method::Planar).unwrap(),
        512.0,
        max_relative = 1e-9
    );
    assert_relative_eq!(ising_bruteforce(&m).unwrap(), 512.0, max_relative = 1e-9);
}

#[test]
fn ising_triangle_closed_form() {
    let (g, s) = fixtures::k3_planar();
    let (j, beta) = (1.3, 0.7);
    let m = IsingModel::new(g, vec![j; 3], beta).unwrap();
    let t = (beta * j).tanh();
    let expect = 8.0 * (beta * j).cosh().powi(3) * (1.0 + t * t * t);
    assert_relative_eq!(
        ising_z(&m, Some(&s), Method::Planar).unwrap(),
        expect,
        max_relative = 1e-12
    );
    assert_relative_eq!(ising_bruteforce(&m).unwrap(), expect, max_relative = 1e-12);
}

#[test]
fn ising_rejects_bad_parameters() {
    assert!(IsingModel::new(fixtures::k3(), vec![-1.0; 3], 1.0).is_err());
    assert!(IsingModel::new(fixtures::k3(), vec![1.0; 3], 0.0).is_err());
    assert!(IsingModel::new(fixtures::k3(), vec![1.0; 2], 1.0).is_err());
}

use randtorus::numeric::ode::*;

#[test]
fn harmonic_oscillator() {
    // y'' = -y: c = cos, s = sin
    let tol = Tolerance {
        rtol: 1e-12,
        atol: 1e-14,
        h_max: 0.1,
    };
    let (y, grid) = adaptive(|_| -1.0, 3.0, [1.0, 0.0, 0.0, 1.0], tol).unwrap();
    assert!((y[0] - 3f64.cos()).abs() < 1e-10);
    assert!((y[2] - 3f64.sin()).abs() < 1e-10);
    assert_eq!(*grid.nodes.last().unwrap(), 3.0);

    let coeff: Vec<[f64; 7]> = grid.stage_points().iter().map(|_| [-1.0; 7]).collect();
    let z = integrate_on_grid(&grid, &coeff, [1.0, 0.0, 0.0, 1.0], |_, _| true).unwrap();
    for i in 0..4 {
        assert!((z[i] - y[i]).abs() < 1e-15);
    }
}

#[test]
fn refined_grid_halves_steps() {
    let g = Grid {
        nodes: vec![0.0, 0.5, 1.0],
    };
    assert_eq!(g.refined().nodes, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
}

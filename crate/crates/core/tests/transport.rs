//! Edge-mode transport and braiding on full wires.

use std::f64::consts::FRAC_PI_2;

use topowire::braid::{adiabatic_move, braid_rotation, interferometry_demo, prepare_move_initial_state};
use topowire::braid::two_wire_interferometry;
use topowire::gaussian::CovarianceMatrix;
use topowire::liouville::{damping_spectrum, edge_block, steady_state};
use topowire::models::{move_ramp, RampSchedule};

#[test]
fn slow_ramp_approaches_the_dephasing_law() {
    let t = 1000.0;
    let g0 = prepare_move_initial_state(4, 1.0, 1.0).unwrap();
    let rep = adiabatic_move(&g0, &RampSchedule::linear(t).unwrap(), 1.0, 0.05).unwrap();
    let alpha = FRAC_PI_2 / t;
    let expect = (-2.0 * alpha * alpha * t).exp();
    assert!((rep.measured.unwrap() - expect).abs() / expect < 0.005);
}

#[test]
fn error_shrinks_roughly_as_inverse_duration() {
    let g0 = prepare_move_initial_state(4, 1.0, 1.0).unwrap();
    let err = |t: f64| {
        adiabatic_move(&g0, &RampSchedule::linear(t).unwrap(), 1.0, 0.02)
            .unwrap()
            .relative_error
            .unwrap()
    };
    let (e50, e100, e200) = (err(50.0), err(100.0), err(200.0));
    assert!(e50 > e100 && e100 > e200);
    // Doubling T should reduce the error by well more than √2.
    assert!(e50 / e100 > 2.0 && e100 / e200 > 2.0, "{e50} {e100} {e200}");
}

#[test]
fn stronger_dissipation_dephases_less() {
    let sched = RampSchedule::linear(60.0).unwrap();
    let weak = adiabatic_move(&prepare_move_initial_state(3, 0.5, 1.0).unwrap(), &sched, 0.5, 0.02).unwrap();
    let strong = adiabatic_move(&prepare_move_initial_state(3, 2.0, 1.0).unwrap(), &sched, 2.0, 0.01).unwrap();
    assert!(strong.measured.unwrap() > weak.measured.unwrap());
    assert!(strong.predicted > weak.predicted);
}

#[test]
fn smooth_sampled_ramp_matches_its_own_integral() {
    let t = 150.0;
    let times: Vec<f64> = (0..=300).map(|i| t * i as f64 / 300.0).collect();
    // θ(t) = (π/2) sin²(πt/2T), flat at both ends.
    let thetas: Vec<f64> = times
        .iter()
        .map(|&s| FRAC_PI_2 * (std::f64::consts::PI * s / (2.0 * t)).sin().powi(2))
        .collect();
    let sched = RampSchedule::sampled(times, thetas).unwrap();
    let g0 = prepare_move_initial_state(4, 1.0, 1.0).unwrap();
    let rep = adiabatic_move(&g0, &sched, 1.0, 0.02).unwrap();
    assert!(rep.relative_error.unwrap() < 0.01, "{rep:?}");
}

#[test]
fn ramp_end_points_move_the_zero_mode() {
    let ramp = move_ramp(4, RampSchedule::linear(10.0).unwrap(), 1.0).unwrap();
    let weight = |t: f64, a: usize| {
        let z = damping_spectrum(&ramp.damping_at(t).unwrap()).zero_basis();
        (0..z.ncols()).map(|c| z[(a, c)].powi(2)).sum::<f64>()
    };
    // The right mode sits on c_8 at t = 0 and on c_6 at t = T.
    assert!((weight(0.0, 7) - 1.0).abs() < 1e-10 && weight(0.0, 5) < 1e-10);
    assert!((weight(10.0, 5) - 1.0).abs() < 1e-10 && weight(10.0, 7) < 1e-10);
    assert!((weight(10.0, 0) - 1.0).abs() < 1e-10);
}

#[test]
fn exchanging_paired_ends_is_invisible() {
    let pair = topowire::models::WireSpec::<f64>::ideal(5).unwrap().damping().unwrap();
    let spec = damping_spectrum(&pair);
    let ss = steady_state(&pair, None).unwrap();
    let mut g = ss.matrix().clone();
    g[(0, 9)] = 0.6;
    g[(9, 0)] = -0.6;
    let seeded = CovarianceMatrix::new(g).unwrap();
    // γ_1 → γ_10, γ_10 → −γ_1 leaves iγ_1γ_10 and the dark bulk fixed.
    let b = braid_rotation(&seeded, 1, 10).unwrap();
    assert!((b.matrix() - seeded.matrix()).amax() < 1e-15);
    // Braiding an edge with a bulk Majorana does not.
    let mixed = braid_rotation(&seeded, 1, 2).unwrap();
    assert!((edge_block(&mixed, &spec) - edge_block(&seeded, &spec)).amax() > 0.1);
}

#[test]
fn interferometry_on_dissipative_wires_matches_the_ideal_protocol() {
    for braided in [false, true] {
        let wires = two_wire_interferometry::<f64>(4, 3, braided, 8.0, 0.02).unwrap();
        let bare = interferometry_demo::<f64>(braided).unwrap();
        assert!((wires.n1 - bare.n1).abs() < 1e-10 && (wires.n2 - bare.n2).abs() < 1e-10);
        assert!((wires.var1 - bare.var1).abs() < 1e-10);
    }
}

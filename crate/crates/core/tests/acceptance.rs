//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::error::Error;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::time::Instant;

use nalgebra::{Complex, DMatrix, DVector, Matrix3, SymmetricEigen, Vector3};
use topowire::braid::{adiabatic_move, interferometry_demo, prepare_move_initial_state};
use topowire::gaussian::build_damping_matrices;
use topowire::liouville::{bulk_purity_spectrum, damping_spectrum, evolve_sampled, steady_state, zero_modes};
use topowire::models::{analytic_zero_modes, RampSchedule, WireKind, WireSpec};
use topowire::momentum::{
    chiral_axis, filling, momentum_model, steady_bloch, winding_number, xi_deformed, BlochField, BzGrid,
    ChiralAxis, Family,
};
use topowire::oracle::{
    bcs_fixed_number_state, covariance_from_rho, dark_residual, quartic_wire_ops, Boundary, DensityMatrix,
    FockLindblad, FockSpace,
};

type Outcome = Result<String, Box<dyn Error>>;
type Check = (&'static str, fn() -> Outcome);

fn fail(msg: String) -> Outcome {
    Err(msg.into())
}

fn field(family: Family<f64>, theta: f64, l: usize) -> Result<BlochField<f64>, Box<dyn Error>> {
    Ok(steady_bloch(&xi_deformed(family, theta, 0.0, BzGrid::new(l)?)?)?)
}

/// Sine of the largest principal angle between two column spaces.
fn subspace_sin(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let qa = a.clone().qr().q();
    let qb = b.clone().qr().q();
    let resid = &qb - &qa * (qa.transpose() * &qb);
    resid.singular_values().max()
}

fn c1_flat_spectrum() -> Outcome {
    let spec = damping_spectrum(&WireSpec::<f64>::ideal(50)?.damping()?);
    let zeros = spec.eigenvalues.iter().filter(|&&e| e.abs() < 1e-10).count();
    let flat = spec.eigenvalues.iter().filter(|&&e| (e - 0.5).abs() < 1e-10).count();
    if zeros == 2 && flat == 98 {
        Ok(format!("{zeros} zero, {flat} at kappa/2"))
    } else {
        fail(format!("{zeros} zero, {flat} flat"))
    }
}

fn c2_zero_modes() -> Outcome {
    let mut worst: f64 = 0.0;
    for theta in [FRAC_PI_4, 3.0 * FRAC_PI_8] {
        for kind in [WireKind::Canonical, WireKind::NonCanonical] {
            for eps in [0.0, 0.05] {
                let mut spec = WireSpec::new(kind, 20, theta)?;
                if eps > 0.0 {
                    spec = spec.with_disorder(eps, 2024)?;
                }
                let z = zero_modes(&spec.damping()?, 1e-8)?;
                if z.ncols() != 2 {
                    return fail(format!("{kind} theta={theta:.4} eps={eps}: dim null = {}", z.ncols()));
                }
                let (vl, vr) = analytic_zero_modes(&spec)?;
                let a = DMatrix::from_columns(&[vl, vr]);
                worst = worst.max(subspace_sin(&a, &z));
            }
        }
    }
    if worst < 1e-8 {
        Ok(format!("dim 2 in all 8 cases, max angle {worst:.1e}"))
    } else {
        fail(format!("max subspace angle {worst:.1e}"))
    }
}

fn c3_localization() -> Outcome {
    let theta = 3.0 * FRAC_PI_8;
    let n = 40;
    let z = zero_modes(&WireSpec::new(WireKind::Canonical, n, theta)?.damping()?, 1e-8)?;
    // The projection of c_1 onto null(X) is the left mode.
    let mut e1 = DVector::zeros(2 * n);
    e1[0] = 1.0;
    let vl = &z * (z.transpose() * e1);
    let pts: Vec<(f64, f64)> = (0..15).map(|i| (i as f64, vl[2 * i].abs().ln())).collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / m, sy / m);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let fitted = -1.0 / slope;
    let closed = 1.0 / ((theta.sin() + theta.cos()) / (theta.sin() - theta.cos())).abs().ln();
    let rel = (fitted - closed).abs() / closed;
    if rel < 0.01 {
        Ok(format!("fit {fitted:.6}, closed form {closed:.6}, rel {rel:.1e}"))
    } else {
        fail(format!("fit {fitted:.6} vs {closed:.6}"))
    }
}

fn bulk_eigs(spec: &WireSpec<f64>) -> Result<Vec<f64>, Box<dyn Error>> {
    let pair = spec.damping()?;
    let ss = steady_state(&pair, None)?;
    Ok(bulk_purity_spectrum(&ss, &damping_spectrum(&pair)))
}

fn c4_purity() -> Outcome {
    let theta = 3.0 * FRAC_PI_8;
    let canon = bulk_eigs(&WireSpec::new(WireKind::Canonical, 20, theta)?)?;
    let dev = canon.iter().map(|e| (e + 1.0).abs()).fold(0.0, f64::max);
    let non = bulk_eigs(&WireSpec::new(WireKind::NonCanonical, 20, theta)?)?;
    let non_max = non.iter().copied().fold(f64::MIN, f64::max);
    let dis = bulk_eigs(&WireSpec::new(WireKind::Canonical, 20, theta)?.with_disorder(0.05, 99)?)?;
    let dis_max = dis.iter().copied().fold(f64::MIN, f64::max);
    let detail = format!("canonical dev {dev:.1e}, noncanonical max {non_max:.4}, disordered max {dis_max:.6}");
    if dev < 1e-8 && non_max > -0.99 && dis_max > -1.0 + 1e-4 {
        Ok(detail)
    } else {
        fail(detail)
    }
}

fn c5_momentum_rates() -> Outcome {
    let grid = BzGrid::new(256)?;
    let mut worst: f64 = 0.0;
    for theta in [FRAC_PI_8, 1.0, 3.0 * FRAC_PI_8] {
        let c2 = (2.0 * theta).cos();
        for fam in [Family::Canonical, Family::NonCanonical] {
            let model = momentum_model(&xi_deformed(fam, theta, 0.0, grid)?)?;
            for m in 0..grid.half_len() {
                let k: f64 = grid.half_k(m);
                let mut ev: Vec<f64> = SymmetricEigen::new(model.eom_matrix(m)).eigenvalues.iter().copied().collect();
                ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let mut expect = match fam {
                    Family::Canonical => vec![1.0 + c2 * k.cos(); 4],
                    _ => {
                        let a = (c2 * k.cos()).abs();
                        vec![1.0 - a, 1.0, 1.0, 1.0 + a]
                    }
                };
                expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
                for (x, y) in ev.iter().zip(&expect) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
    }
    if worst < 1e-10 {
        Ok(format!("max deviation {worst:.1e}"))
    } else {
        fail(format!("max deviation {worst:.1e}"))
    }
}

fn c6_winding() -> Outcome {
    let mut worst: f64 = 0.0;
    for fam in [Family::Canonical, Family::NonCanonical] {
        for theta in [FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8] {
            let f = field(fam, theta, 1024)?;
            let w = winding_number(&f, &chiral_axis(&f, 1e-9)?)?;
            if w.nu.abs() != 1 {
                return fail(format!("{fam:?} theta={theta:.4}: nu = {}", w.nu));
            }
            let integrality = (w.angle - w.angle.round()).abs();
            worst = worst.max(w.residual).max(integrality);
        }
    }
    let grid = BzGrid::new(1024)?;
    let h = grid.half_len();
    let limit = BlochField::from_half(grid, vec![Vector3::new(0.0, 0.0, -1.0); h], vec![1.0; h])?;
    let axis = ChiralAxis {
        a: Vector3::new(1.0, 0.0, 0.0),
        max_violation: 0.0,
    };
    let nu0 = winding_number(&limit, &axis)?.nu;
    if nu0 != 0 {
        return fail(format!("limit field nu = {nu0}"));
    }
    if worst < 1e-6 {
        Ok(format!("|nu| = 1 in 6 cases, limit nu = 0, max residual {worst:.1e}"))
    } else {
        fail(format!("max residual {worst:.1e}"))
    }
}

fn c7_filling_reflection() -> Outcome {
    let mut worst_fill: f64 = 0.0;
    for j in 1..=7 {
        let (nbar, _) = filling(&field(Family::NonCanonical, j as f64 * FRAC_PI_8, 256)?);
        worst_fill = worst_fill.max((nbar - 0.5).abs());
    }
    let p = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
    let mut worst_refl: f64 = 0.0;
    for delta in [PI / 16.0, FRAC_PI_8, 3.0 * FRAC_PI_8] {
        let lo = field(Family::NonCanonical, FRAC_PI_2 - delta, 256)?;
        let hi = field(Family::NonCanonical, FRAC_PI_2 + delta, 256)?;
        for j in 0..256 {
            worst_refl = worst_refl.max((lo.n(j) - p * hi.n(j)).norm());
        }
    }
    let detail = format!("filling dev {worst_fill:.1e}, reflection dev {worst_refl:.1e}");
    if worst_fill < 1e-9 && worst_refl < 1e-9 {
        Ok(detail)
    } else {
        fail(detail)
    }
}

fn c8_dephasing() -> Outcome {
    let g0 = prepare_move_initial_state(4, 1.0, 1.0)?;
    let mut errors = Vec::new();
    for t in [50.0, 100.0, 200.0] {
        let rep = adiabatic_move(&g0, &RampSchedule::linear(t)?, 1.0, 0.02)?;
        let alpha = FRAC_PI_2 / t;
        let expect = (-2.0 * alpha * alpha * t).exp();
        let measured = rep.measured.ok_or("edge correlation vanished")?;
        errors.push((measured - expect).abs() / expect);
    }
    let detail = format!(
        "rel err T=50 {:.2e}, T=100 {:.2e}, T=200 {:.2e}",
        errors[0], errors[1], errors[2]
    );
    if errors[1] < 0.01 && errors[0] > errors[1] && errors[1] > errors[2] {
        Ok(detail)
    } else {
        fail(detail)
    }
}

fn c9_interferometry() -> Outcome {
    let s = FockSpace::<f64>::new(2)?;
    let vac = s.vacuum();
    let pair = (&s.a_dag(1)? * &s.a_dag(2)?).apply(&vac);
    let psi = (&vac + &pair) * Complex::new(0.5f64.sqrt(), 0.0);
    let mut worst: f64 = 0.0;
    for (braided, n_expect, var_expect) in [(false, 0.5, 0.25), (true, 1.0, 0.0)] {
        let g = interferometry_demo::<f64>(braided)?;
        for (n, v) in [(g.n1, g.var1), (g.n2, g.var2)] {
            worst = worst.max((n - n_expect).abs()).max((v - var_expect).abs());
        }
        let mut rho = DensityMatrix::pure(2, &psi)?;
        if braided {
            rho = rho.conjugated(&s.braid_unitary(1, 2)?);
        }
        rho = rho.conjugated(&s.braid_unitary(2, 3)?);
        for (site, n_gauss, var_gauss) in [(1, g.n1, g.var1), (2, g.n2, g.var2)] {
            let nop = s.number(site)?;
            let n = rho.expectation(&nop).re;
            let var = rho.expectation(&(&nop * &nop)).re - n * n;
            worst = worst.max((n - n_gauss).abs()).max((var - var_gauss).abs());
        }
    }
    if worst < 1e-10 {
        Ok(format!("unbraided 0.5/0.25, braided 1/0, Fock agreement {worst:.1e}"))
    } else {
        fail(format!("max deviation {worst:.1e}"))
    }
}

fn c10_oracle() -> Outcome {
    let mut models: Vec<WireSpec<f64>> = (2..=5).map(WireSpec::ideal).collect::<Result<_, _>>()?;
    models.push(WireSpec::new(WireKind::Canonical, 3, 3.0 * FRAC_PI_8)?);
    models.push(WireSpec::new(WireKind::Canonical, 5, 1.0)?);
    models.push(WireSpec::new(WireKind::NonCanonical, 4, 3.0 * FRAC_PI_8)?);
    models.push(WireSpec::new(WireKind::NonCanonical, 5, 0.4)?.with_phi(0.7)?);
    models.push(WireSpec::new(WireKind::Canonical, 5, FRAC_PI_4)?.with_disorder(0.05, 5)?);
    let times: Vec<f64> = (1..=10).map(|i| 0.3 * i as f64).collect();
    let dt = 0.005;
    let mut worst: f64 = 0.0;
    for spec in &models {
        let n = spec.n_sites;
        let s = FockSpace::<f64>::new(n)?;
        let ops = spec.operators()?;
        let jumps = ops.iter().map(|l| s.jump_from_majorana(l)).collect::<Result<Vec<_>, _>>()?;
        let lind = FockLindblad::new(&jumps, spec.kappa, None)?;
        let pair = build_damping_matrices(n, &ops, spec.kappa)?;
        for seed in 0..3 {
            let rho0 = s.random_gaussian_state(100 + seed)?;
            let fock = lind.trajectory(&rho0, &times, dt)?;
            let gauss = evolve_sampled(&covariance_from_rho(&s, &rho0)?, &pair, None, &times, dt)?;
            for (r, g) in fock.iter().zip(&gauss.states) {
                worst = worst.max((covariance_from_rho(&s, r)?.matrix() - g.matrix()).amax());
            }
        }
    }
    let s = FockSpace::<f64>::new(4)?;
    let ring = quartic_wire_ops(&s, Boundary::Ring)?;
    let xi = xi_deformed(Family::Canonical, FRAC_PI_4, 0.0, BzGrid::ring(4)?)?;
    let bcs = bcs_fixed_number_state(&s, &xi, 1)?;
    let dark = dark_residual(&ring, &bcs.state);
    let rho0 = DensityMatrix::pure(4, &s.random_sector_state(3, 17)?)?;
    let rho = FockLindblad::new(&ring, 1.0, None)?.trajectory(&rho0, &[200.0], 0.05)?.remove(0);
    let fid = rho.fidelity_with(&bcs.state);
    let detail = format!(
        "{} models x 3 states, max dev {worst:.1e}; quartic fidelity 1-{:.1e}, dark residual {dark:.1e}",
        models.len(),
        1.0 - fid
    );
    if worst < 1e-7 && fid > 1.0 - 1e-6 && dark < 1e-10 {
        Ok(detail)
    } else {
        fail(detail)
    }
}

fn c11_imperfection() -> Outcome {
    let f = steady_bloch(&xi_deformed(Family::Imperfect(0.1), 0.0, 0.0, BzGrid::new(256)?)?)?;
    let axis = chiral_axis(&f, 1e-9)?;
    let w = winding_number(&f, &axis)?;
    let detail = format!("violation {:.1e}, nu = {}", axis.max_violation, w.nu);
    if axis.max_violation < 1e-9 && w.nu.abs() == 1 {
        Ok(detail)
    } else {
        fail(detail)
    }
}

fn main() {
    let checks: [Check; 11] = [
        ("flat ideal spectrum", c1_flat_spectrum),
        ("zero-mode persistence", c2_zero_modes),
        ("localization length", c3_localization),
        ("purity dichotomy", c4_purity),
        ("momentum damping spectra", c5_momentum_rates),
        ("winding invariant", c6_winding),
        ("half filling and reflection", c7_filling_reflection),
        ("dephasing law", c8_dephasing),
        ("interferometry", c9_interferometry),
        ("oracle equivalence", c10_oracle),
        ("imperfection chirality", c11_imperfection),
    ];
    let mut failed = 0;
    for (i, (name, f)) in checks.iter().enumerate() {
        let start = Instant::now();
        let res = f();
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(d) => println!("PASS {:>2} {name}: {d} ({secs:.2} s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {e} ({secs:.2} s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Majorana transport and exchange.
//!
//! An adiabatic ramp of the last link moves the right edge mode from
//! Majorana `2N` to `2N − 2`; the edge correlation picks up the dephasing
//! factor `exp(−2κ^{−1}∫θ̇² dt)`. Braiding `B_ij = exp(π/4 γ_i γ_j)` acts on
//! covariances as a quarter-turn in the `(i, j)` plane.

use nalgebra::DMatrix;

use crate::error::{Result, WireError};
use crate::gaussian::{build_damping_matrices, occupation, CovarianceMatrix};
use crate::liouville::{evolve_driven, evolve_sampled, steady_state};
use crate::models::{ideal_wire, move_ramp, two_wire_system, RampSchedule};
use crate::scalar::{lit, Real};

/// Ramps faster than `max θ̇ > κ / SPEED_LIMIT_RATIO` are flagged.
pub const SPEED_LIMIT_RATIO: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct MoveReport<T: Real> {
    pub n_sites: usize,
    pub duration: T,
    pub kappa: T,
    pub dt: T,
    pub steps: usize,
    /// `∫θ̇² dt`.
    pub dephasing_integral: T,
    /// `Γ(c_1, c_{2N})` at `t = 0`.
    pub initial_correlation: T,
    /// `Γ(c_1, c_{2N−2})` at `t = T`.
    pub final_correlation: T,
    /// `exp(−2κ^{−1}∫θ̇² dt)`.
    pub predicted: T,
    /// Final over initial correlation; `None` when the initial one vanishes.
    pub measured: Option<T>,
    pub relative_error: Option<T>,
    /// `max θ̇ > κ/10`: the adiabatic prediction is not expected to hold.
    pub too_fast: bool,
}

/// Ideal-wire steady state with edge block `Γ(c_1, c_{2N}) = correlation`.
pub fn prepare_move_initial_state<T: Real>(n_sites: usize, kappa: T, correlation: T) -> Result<CovarianceMatrix<T>> {
    if correlation.abs() > T::one() {
        return Err(WireError::InvalidParameter("edge correlation must lie in [-1, 1]".into()));
    }
    let pair = build_damping_matrices(n_sites, &ideal_wire(n_sites)?, kappa)?;
    let mut g = steady_state(&pair, None)?.into_matrix();
    let last = 2 * n_sites - 1;
    g[(0, last)] = correlation;
    g[(last, 0)] = -correlation;
    CovarianceMatrix::new(g)
}

/// Integrate the lab-frame covariance equation through the ramp.
pub fn adiabatic_move<T: Real>(
    gamma0: &CovarianceMatrix<T>,
    schedule: &RampSchedule<T>,
    kappa: T,
    dt: T,
) -> Result<MoveReport<T>> {
    let n = gamma0.n_sites();
    let ramp = move_ramp(n, schedule.clone(), kappa)?;
    let duration = schedule.duration;
    let report = evolve_driven(gamma0, |t| ramp.damping_at(t), &[duration], dt)?;
    let initial = gamma0.get(1, 2 * n);
    let fin = report.final_state().get(1, 2 * n - 2);
    let integral = schedule.theta_dot_squared_integral();
    let predicted = (-(lit::<T>(2.0)) * integral / kappa).exp();
    let (measured, relative_error) = if initial.abs() > lit(1e-12) {
        let m = fin / initial;
        (Some(m), Some((m - predicted).abs() / predicted))
    } else {
        (None, None)
    };
    let limit = kappa / lit(SPEED_LIMIT_RATIO);
    let n_probe = 256;
    let too_fast = (0..=n_probe).any(|i| {
        let t = duration * lit::<T>(i as f64 / n_probe as f64);
        schedule.theta_dot(t) > limit
    });
    Ok(MoveReport {
        n_sites: n,
        duration,
        kappa,
        dt,
        steps: report.steps,
        dephasing_integral: integral,
        initial_correlation: initial,
        final_correlation: fin,
        predicted,
        measured,
        relative_error,
        too_fast,
    })
}

/// Orthogonal matrix of `B_ij`: identity except `R_ii = R_jj = 0`,
/// `R_ij = 1`, `R_ji = −1` (1-based), i.e. `γ_i → γ_j`, `γ_j → −γ_i`
/// under `B γ B†`.
pub fn braid_matrix<T: Real>(dim: usize, i: usize, j: usize) -> Result<DMatrix<T>> {
    for idx in [i, j] {
        if idx == 0 || idx > dim {
            return Err(WireError::MajoranaOutOfRange { index: idx, dim });
        }
    }
    if i == j {
        return Err(WireError::InvalidParameter("braid needs two distinct Majoranas".into()));
    }
    let mut r = DMatrix::identity(dim, dim);
    r[(i - 1, i - 1)] = T::zero();
    r[(j - 1, j - 1)] = T::zero();
    r[(i - 1, j - 1)] = T::one();
    r[(j - 1, i - 1)] = -T::one();
    Ok(r)
}

/// Covariance after `ρ → B_ij ρ B_ij†`: `Γ′ = R Γ Rᵀ`.
pub fn braid_rotation<T: Real>(gamma: &CovarianceMatrix<T>, i: usize, j: usize) -> Result<CovarianceMatrix<T>> {
    let r = braid_matrix(gamma.dim(), i, j)?;
    Ok(CovarianceMatrix::new_unchecked(&r * gamma.matrix() * r.transpose()))
}

/// Edge covariance of `(|0̄⟩ − |1̄⟩)/√2` over `(γ_{L,1}, γ_{R,1}, γ_{L,2}, γ_{R,2})`,
/// with `|1̄⟩ = a_2† a_1† |0̄⟩`: nonzero entries `Γ_14 = Γ_23 = −1`.
pub fn interferometry_covariance<T: Real>() -> CovarianceMatrix<T> {
    let mut g = DMatrix::zeros(4, 4);
    g[(0, 3)] = -T::one();
    g[(3, 0)] = T::one();
    g[(1, 2)] = -T::one();
    g[(2, 1)] = T::one();
    CovarianceMatrix::new_unchecked(g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometryReport<T: Real> {
    pub n1: T,
    pub n2: T,
    pub var1: T,
    pub var2: T,
}

fn occupations_report<T: Real>(g: &CovarianceMatrix<T>, site1: usize, site2: usize) -> Result<InterferometryReport<T>> {
    let n1 = occupation(g, site1)?;
    let n2 = occupation(g, site2)?;
    Ok(InterferometryReport {
        n1,
        n2,
        var1: n1 * (T::one() - n1),
        var2: n2 * (T::one() - n2),
    })
}

/// Optionally braid `γ_{L,1}, γ_{R,1}`, then apply `B_12(γ_{R,1}, γ_{L,2})`
/// and read the two edge-fermion occupations.
pub fn interferometry_demo<T: Real>(braided: bool) -> Result<InterferometryReport<T>> {
    let mut g = interferometry_covariance::<T>();
    if braided {
        g = braid_rotation(&g, 1, 2)?;
    }
    g = braid_rotation(&g, 2, 3)?;
    occupations_report(&g, 1, 2)
}

/// The same protocol on two dissipative ideal wires: the edge state is
/// embedded on the four end Majoranas, each wire relaxes for `t_relax`
/// before and after the rotations, and the edge fermions
/// `(γ_{L,i}, γ_{R,i})` are read out.
pub fn two_wire_interferometry<T: Real>(
    n1: usize,
    n2: usize,
    braided: bool,
    t_relax: T,
    dt: T,
) -> Result<InterferometryReport<T>> {
    let (ops, labels) = two_wire_system::<T>(n1, n2)?;
    let n = n1 + n2;
    let pair = build_damping_matrices(n, &ops, T::one())?;
    let mut g = steady_state(&pair, None)?.into_matrix();
    let edge = interferometry_covariance::<T>();
    let idx = labels.as_array();
    for a in 0..4 {
        for b in 0..4 {
            g[(idx[a] - 1, idx[b] - 1)] = edge.matrix()[(a, b)];
        }
    }
    let mut state = CovarianceMatrix::new(g)?;
    state = evolve_sampled(&state, &pair, None, &[t_relax], dt)?.states.remove(0);
    if braided {
        state = braid_rotation(&state, labels.left_1, labels.right_1)?;
    }
    state = braid_rotation(&state, labels.right_1, labels.left_2)?;
    state = evolve_sampled(&state, &pair, None, &[t_relax], dt)?.states.remove(0);
    let read = |a: usize, b: usize| (T::one() - state.get(a, b)) * lit(0.5);
    let n1v = read(labels.left_1, labels.right_1);
    let n2v = read(labels.left_2, labels.right_2);
    Ok(InterferometryReport {
        n1: n1v,
        n2: n2v,
        var1: n1v * (T::one() - n1v),
        var2: n2v * (T::one() - n2v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{purity_spectrum, random_covariance};
    use crate::oracle::{covariance_from_rho, DensityMatrix, FockSpace};
    use nalgebra::Complex;

    #[test]
    fn braid_sign_matches_fock_conjugation() {
        let s = FockSpace::<f64>::new(3).unwrap();
        let rho = s.random_gaussian_state(8).unwrap();
        let g = covariance_from_rho(&s, &rho).unwrap();
        for (i, j) in [(1, 2), (2, 3), (1, 6), (5, 2)] {
            let b = s.braid_unitary(i, j).unwrap();
            let fock = covariance_from_rho(&s, &rho.conjugated(&b)).unwrap();
            let gauss = braid_rotation(&g, i, j).unwrap();
            assert!((fock.matrix() - gauss.matrix()).amax() < 1e-12, "({i},{j})");
        }
    }

    #[test]
    fn double_braid_flips_the_pair() {
        let g = random_covariance::<f64>(3, 2);
        let twice = braid_rotation(&braid_rotation(&g, 2, 5).unwrap(), 2, 5).unwrap();
        let mut p = DMatrix::<f64>::identity(6, 6);
        p[(1, 1)] = -1.0;
        p[(4, 4)] = -1.0;
        assert!((twice.matrix() - &p * g.matrix() * &p).amax() < 1e-15);
    }

    #[test]
    fn braids_sharing_an_index_do_not_commute() {
        let g = random_covariance::<f64>(3, 4);
        let ab = braid_rotation(&braid_rotation(&g, 1, 2).unwrap(), 2, 3).unwrap();
        let ba = braid_rotation(&braid_rotation(&g, 2, 3).unwrap(), 1, 2).unwrap();
        assert!((ab.matrix() - ba.matrix()).amax() > 0.1);
        let cd = braid_rotation(&braid_rotation(&g, 1, 2).unwrap(), 4, 5).unwrap();
        let dc = braid_rotation(&braid_rotation(&g, 4, 5).unwrap(), 1, 2).unwrap();
        assert_eq!(cd.matrix(), dc.matrix());
    }

    #[test]
    fn braid_preserves_purity_spectrum() {
        let g = random_covariance::<f64>(4, 9);
        let a = purity_spectrum(&g).unwrap();
        let b = purity_spectrum(&braid_rotation(&g, 3, 8).unwrap()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(braid_rotation(&g, 3, 9).is_err());
        assert!(braid_rotation(&g, 3, 3).is_err());
    }

    #[test]
    fn interferometry_covariance_derivation() {
        let s = FockSpace::<f64>::new(2).unwrap();
        let vac = s.vacuum();
        let one_bar = (&s.a_dag(2).unwrap() * &s.a_dag(1).unwrap()).apply(&vac);
        let psi = (&vac - &one_bar) * Complex::new(0.5f64.sqrt(), 0.0);
        let rho = DensityMatrix::pure(2, &psi).unwrap();
        let g = covariance_from_rho(&s, &rho).unwrap();
        assert!((g.matrix() - interferometry_covariance::<f64>().matrix()).amax() < 1e-15);
        // ⟨γ_{R,1} γ_{L,2}⟩ = ⟨γ_{L,1} γ_{R,2}⟩ = i.
        let c = |a: usize| s.majorana(a).unwrap();
        let e23 = rho.expectation(&(&c(2) * &c(3)));
        let e14 = rho.expectation(&(&c(1) * &c(4)));
        assert!((e23 - Complex::new(0.0, 1.0)).norm() < 1e-15);
        assert!((e14 - Complex::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn interferometry_outcomes() {
        let plain = interferometry_demo::<f64>(false).unwrap();
        assert!((plain.n1 - 0.5).abs() < 1e-15 && (plain.n2 - 0.5).abs() < 1e-15);
        assert!((plain.var1 - 0.25).abs() < 1e-15 && (plain.var2 - 0.25).abs() < 1e-15);
        let braided = interferometry_demo::<f64>(true).unwrap();
        assert!((braided.n1 - 1.0).abs() < 1e-15 && (braided.n2 - 1.0).abs() < 1e-15);
        assert!(braided.var1.abs() < 1e-15 && braided.var2.abs() < 1e-15);
    }

    #[test]
    fn interferometry_in_fock_space() {
        let s = FockSpace::<f64>::new(2).unwrap();
        let vac = s.vacuum();
        let one_bar = (&s.a_dag(2).unwrap() * &s.a_dag(1).unwrap()).apply(&vac);
        let psi = (&vac - &one_bar) * Complex::new(0.5f64.sqrt(), 0.0);
        let mut rho = DensityMatrix::pure(2, &psi).unwrap();
        rho = rho.conjugated(&s.braid_unitary(1, 2).unwrap());
        rho = rho.conjugated(&s.braid_unitary(2, 3).unwrap());
        let demo = interferometry_demo::<f64>(true).unwrap();
        for (site, n) in [(1, demo.n1), (2, demo.n2)] {
            let got = rho.expectation(&s.number(site).unwrap()).re;
            assert!((got - n).abs() < 1e-10);
        }
    }

    #[test]
    fn interferometry_survives_dissipative_wires() {
        for braided in [false, true] {
            let on_wires = two_wire_interferometry::<f64>(3, 4, braided, 5.0, 0.02).unwrap();
            let bare = interferometry_demo::<f64>(braided).unwrap();
            assert!((on_wires.n1 - bare.n1).abs() < 1e-10);
            assert!((on_wires.n2 - bare.n2).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_edge_correlation_stays_zero() {
        let g0 = prepare_move_initial_state::<f64>(4, 1.0, 0.0).unwrap();
        let rep = adiabatic_move(&g0, &RampSchedule::linear(20.0).unwrap(), 1.0, 0.02).unwrap();
        assert!(rep.final_correlation.abs() < 1e-12);
        assert!(rep.measured.is_none());
    }

    #[test]
    fn dephasing_law_at_t_100() {
        let t = 100.0;
        let g0 = prepare_move_initial_state(4, 1.0, 1.0).unwrap();
        let rep = adiabatic_move(&g0, &RampSchedule::linear(t).unwrap(), 1.0, 0.02).unwrap();
        let alpha = std::f64::consts::FRAC_PI_2 / t;
        let predicted = (-2.0 * alpha * alpha * t).exp();
        assert!((predicted - 0.9519).abs() < 1e-4);
        assert!((rep.predicted - predicted).abs() < 1e-12);
        assert!(rep.relative_error.unwrap() < 0.01);
        assert!(!rep.too_fast);
    }

    #[test]
    fn fast_ramp_is_flagged() {
        let g0 = prepare_move_initial_state(3, 1.0, 1.0).unwrap();
        let rep = adiabatic_move(&g0, &RampSchedule::linear(5.0).unwrap(), 1.0, 0.02).unwrap();
        assert!(rep.too_fast);
    }
}

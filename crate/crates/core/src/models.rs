//! Lindblad models: the ideal Kitaev-type dissipative wire, its canonical
//! and non-canonical deformations, static angle disorder, the edge-moving
//! ramp and pairs of decoupled wires.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WireError};
use crate::gaussian::{build_damping_matrices, complex_to_majorana, DampingPair, MajoranaVector};
use crate::scalar::{cplx, lit, polar, to_f64, Real};

/// Largest allowed per-link angle offset.
pub const MAX_DISORDER: f64 = PI / 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WireKind {
    Ideal,
    Canonical,
    #[serde(rename = "noncanonical")]
    NonCanonical,
}

impl std::str::FromStr for WireKind {
    type Err = WireError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ideal" => Ok(Self::Ideal),
            "canonical" => Ok(Self::Canonical),
            "noncanonical" | "non-canonical" => Ok(Self::NonCanonical),
            other => Err(WireError::InvalidParameter(format!("unknown wire kind '{other}'"))),
        }
    }
}

impl std::fmt::Display for WireKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Ideal => "ideal",
            Self::Canonical => "canonical",
            Self::NonCanonical => "noncanonical",
        })
    }
}

/// Parameters of a single open wire.
#[derive(Debug, Clone, PartialEq)]
pub struct WireSpec<T: Real> {
    pub n_sites: usize,
    pub kind: WireKind,
    pub theta: T,
    pub phi: T,
    pub kappa: T,
    /// Range `ε` of the uniform per-link offsets.
    pub disorder_range: T,
    pub seed: u64,
    /// `ε_i` for links `1..N−1`.
    offsets: Vec<T>,
}

impl<T: Real> WireSpec<T> {
    pub fn new(kind: WireKind, n_sites: usize, theta: T) -> Result<Self> {
        if n_sites < 2 {
            return Err(WireError::InvalidParameter(format!(
                "a wire needs at least 2 sites, got {n_sites}"
            )));
        }
        if !theta.is_finite() {
            return Err(WireError::InvalidParameter("theta must be finite".into()));
        }
        Ok(Self {
            n_sites,
            kind,
            theta,
            phi: T::zero(),
            kappa: T::one(),
            disorder_range: T::zero(),
            seed: 0,
            offsets: vec![T::zero(); n_sites - 1],
        })
    }

    pub fn ideal(n_sites: usize) -> Result<Self> {
        Self::new(WireKind::Ideal, n_sites, lit(FRAC_PI_4))
    }

    pub fn with_phi(mut self, phi: T) -> Result<Self> {
        if !phi.is_finite() {
            return Err(WireError::InvalidParameter("phi must be finite".into()));
        }
        self.phi = phi;
        Ok(self)
    }

    pub fn with_kappa(mut self, kappa: T) -> Result<Self> {
        if !(kappa > T::zero()) || !kappa.is_finite() {
            return Err(WireError::InvalidParameter("kappa must be positive".into()));
        }
        self.kappa = kappa;
        Ok(self)
    }

    /// Draw `ε_i ~ U[−ε, ε]` per link from a seeded ChaCha stream.
    pub fn with_disorder(mut self, range: T, seed: u64) -> Result<Self> {
        if !(range >= T::zero()) || range >= lit(MAX_DISORDER) {
            return Err(WireError::InvalidParameter(format!(
                "disorder range must lie in [0, pi/8), got {}",
                to_f64(range)
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let eps = to_f64(range);
        self.offsets = (0..self.n_sites - 1)
            .map(|_| lit(eps * (2.0 * rng.random::<f64>() - 1.0)))
            .collect();
        self.disorder_range = range;
        self.seed = seed;
        Ok(self)
    }

    /// Explicit per-link offsets.
    pub fn with_offsets(mut self, offsets: Vec<T>) -> Result<Self> {
        if offsets.len() != self.n_sites - 1 {
            return Err(WireError::DimensionMismatch {
                expected: self.n_sites - 1,
                found: offsets.len(),
            });
        }
        if offsets.iter().any(|e| !(e.abs() < lit(MAX_DISORDER))) {
            return Err(WireError::InvalidParameter("|eps_i| must stay below pi/8".into()));
        }
        self.disorder_range = offsets.iter().fold(T::zero(), |m, e| if e.abs() > m { e.abs() } else { m });
        self.offsets = offsets;
        Ok(self)
    }

    pub fn offsets(&self) -> &[T] {
        &self.offsets
    }

    /// `θ_i = θ + ε_i` for the 1-based link `i`.
    pub fn link_angle(&self, link: usize) -> T {
        self.theta + self.offsets[link - 1]
    }

    pub fn operators(&self) -> Result<Vec<MajoranaVector<T>>> {
        match self.kind {
            WireKind::Ideal => ideal_wire(self.n_sites),
            _ => deformed_wire(self),
        }
    }

    pub fn damping(&self) -> Result<DampingPair<T>> {
        build_damping_matrices(self.n_sites, &self.operators()?, self.kappa)
    }
}

fn ideal_link<T: Real>(n_sites: usize, i: usize) -> Result<MajoranaVector<T>> {
    let h: T = lit(0.5);
    complex_to_majorana(
        n_sites,
        &[(i, cplx(h, T::zero()), cplx(h, T::zero())), (i + 1, cplx(-h, T::zero()), cplx(h, T::zero()))],
    )
}

/// `j_i = ½(a_i + a_i† − a_{i+1} + a_{i+1}†)` for `i = 1..N−1`.
pub fn ideal_wire<T: Real>(n_sites: usize) -> Result<Vec<MajoranaVector<T>>> {
    if n_sites < 2 {
        return Err(WireError::InvalidParameter(format!(
            "a wire needs at least 2 sites, got {n_sites}"
        )));
    }
    (1..n_sites).map(|i| ideal_link(n_sites, i)).collect()
}

/// Deformed link operators with angle `θ + ε_i` and phase `φ` on the
/// annihilation part.
pub fn deformed_wire<T: Real>(spec: &WireSpec<T>) -> Result<Vec<MajoranaVector<T>>> {
    if spec.kind == WireKind::Ideal {
        return Err(WireError::InvalidParameter(
            "deformed_wire needs a canonical or noncanonical kind".into(),
        ));
    }
    let r2: T = lit(std::f64::consts::FRAC_1_SQRT_2);
    let phase = polar(T::one(), spec.phi);
    (1..spec.n_sites)
        .map(|i| {
            let th = spec.link_angle(i);
            let (s, c) = (th.sin() * r2, th.cos() * r2);
            let real = |x: T| cplx(x, T::zero());
            let (first, second) = match spec.kind {
                WireKind::Canonical => ((phase * s, real(c)), (-phase * s, real(c))),
                _ => ((phase * c, real(s)), (-phase * s, real(c))),
            };
            complex_to_majorana(spec.n_sites, &[(i, first.0, first.1), (i + 1, second.0, second.1)])
        })
        .collect()
}

/// `ε_θ = (sinθ − cosθ) / (sinθ + cosθ)`.
pub fn epsilon_theta<T: Real>(theta: T) -> T {
    (theta.sin() - theta.cos()) / (theta.sin() + theta.cos())
}

/// `l_loc / a = 1 / |ln|ε_θ||`; 0 at perfect localization, `+∞` where the
/// edge modes delocalize.
pub fn localization_length<T: Real>(theta: T) -> T {
    let e = epsilon_theta(theta).abs();
    if e < lit(1e-14) {
        return T::zero();
    }
    let l = e.ln().abs();
    if l < lit(1e-15) {
        return lit(f64::INFINITY);
    }
    T::one() / l
}

/// Closed-form left and right zero modes of a deformed wire (φ = 0), as
/// normalized real vectors.
pub fn analytic_zero_modes<T: Real>(spec: &WireSpec<T>) -> Result<(DVector<T>, DVector<T>)> {
    if spec.kind == WireKind::Ideal {
        let dim = 2 * spec.n_sites;
        let mut l = DVector::zeros(dim);
        let mut r = DVector::zeros(dim);
        l[0] = T::one();
        r[dim - 1] = T::one();
        return Ok((l, r));
    }
    if spec.phi != T::zero() {
        return Err(WireError::InvalidParameter(
            "closed-form zero modes are implemented for phi = 0".into(),
        ));
    }
    let n = spec.n_sites;
    let tiny: T = lit(1e-12);
    let mut ratios = Vec::with_capacity(n - 1);
    for i in 1..n {
        let th = spec.link_angle(i);
        let denom = th.sin() + th.cos();
        let r = (th.sin() - th.cos()) / denom;
        if denom.abs() < tiny || (r.abs() - T::one()).abs() < tiny {
            return Err(WireError::SingularZeroMode { theta: to_f64(th) });
        }
        ratios.push(r);
    }
    let dim = 2 * n;
    let mut vl = DVector::zeros(dim);
    let mut vr = DVector::zeros(dim);
    vl[0] = T::one();
    for i in 1..n {
        let r = match spec.kind {
            WireKind::Canonical => ratios[i - 1],
            _ => -ratios[i - 1],
        };
        vl[2 * i] = r * vl[2 * i - 2];
    }
    vr[dim - 1] = T::one();
    for i in (1..n).rev() {
        vr[2 * i - 1] = ratios[i - 1] * vr[2 * i + 1];
    }
    let (nl, nr) = (vl.norm(), vr.norm());
    Ok((vl / nl, vr / nr))
}

/// Shape of `θ(t)` on `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub enum RampShape<T: Real> {
    /// `θ(t) = (π/2)(t/T)`.
    Linear,
    /// Piecewise-linear interpolation through `(t_k, θ_k)` samples.
    Sampled { times: Vec<T>, thetas: Vec<T> },
}

/// Monotone schedule from `θ(0) = 0` to `θ(T) = π/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct RampSchedule<T: Real> {
    pub duration: T,
    pub shape: RampShape<T>,
}

impl<T: Real> RampSchedule<T> {
    pub fn linear(duration: T) -> Result<Self> {
        check_duration(duration)?;
        Ok(Self {
            duration,
            shape: RampShape::Linear,
        })
    }

    pub fn sampled(times: Vec<T>, thetas: Vec<T>) -> Result<Self> {
        if times.len() != thetas.len() || times.len() < 2 {
            return Err(WireError::InvalidParameter(
                "ramp needs at least two matching (t, theta) samples".into(),
            ));
        }
        let tol: T = lit(1e-12);
        if times[0] != T::zero() || thetas[0].abs() > tol {
            return Err(WireError::InvalidParameter("ramp must start at t = 0 with theta = 0".into()));
        }
        if (thetas[thetas.len() - 1] - lit(FRAC_PI_2)).abs() > tol {
            return Err(WireError::InvalidParameter("ramp must end at theta = pi/2".into()));
        }
        for k in 1..times.len() {
            if !(times[k] > times[k - 1]) {
                return Err(WireError::InvalidParameter("ramp times must increase".into()));
            }
            if thetas[k] < thetas[k - 1] {
                return Err(WireError::InvalidParameter("ramp must be monotone".into()));
            }
        }
        let duration = times[times.len() - 1];
        check_duration(duration)?;
        let mut thetas = thetas;
        let last = thetas.len() - 1;
        thetas[0] = T::zero();
        thetas[last] = lit(FRAC_PI_2);
        Ok(Self {
            duration,
            shape: RampShape::Sampled { times, thetas },
        })
    }

    /// `θ(t)`, clamped to the endpoints outside `[0, T]`.
    pub fn theta(&self, t: T) -> T {
        let half_pi: T = lit(FRAC_PI_2);
        if t <= T::zero() {
            return T::zero();
        }
        if t >= self.duration {
            return half_pi;
        }
        match &self.shape {
            RampShape::Linear => half_pi * t / self.duration,
            RampShape::Sampled { times, thetas } => {
                let k = times.partition_point(|&s| s <= t).clamp(1, times.len() - 1);
                let w = (t - times[k - 1]) / (times[k] - times[k - 1]);
                thetas[k - 1] + (thetas[k] - thetas[k - 1]) * w
            }
        }
    }

    /// `θ̇(t)`; right derivative at sample knots.
    pub fn theta_dot(&self, t: T) -> T {
        if t < T::zero() || t > self.duration {
            return T::zero();
        }
        match &self.shape {
            RampShape::Linear => lit::<T>(FRAC_PI_2) / self.duration,
            RampShape::Sampled { times, thetas } => {
                let k = times.partition_point(|&s| s <= t).clamp(1, times.len() - 1);
                (thetas[k] - thetas[k - 1]) / (times[k] - times[k - 1])
            }
        }
    }

    /// `∫_0^T θ̇² dt`, exact for the piecewise-linear schedule.
    pub fn theta_dot_squared_integral(&self) -> T {
        match &self.shape {
            RampShape::Linear => {
                let rate = lit::<T>(FRAC_PI_2) / self.duration;
                rate * rate * self.duration
            }
            RampShape::Sampled { times, thetas } => (1..times.len())
                .map(|k| {
                    let dt = times[k] - times[k - 1];
                    let d = thetas[k] - thetas[k - 1];
                    d * d / dt
                })
                .fold(T::zero(), |a, b| a + b),
        }
    }
}

fn check_duration<T: Real>(duration: T) -> Result<()> {
    if !(duration > T::zero()) || !duration.is_finite() {
        return Err(WireError::InvalidParameter("ramp duration must be positive".into()));
    }
    Ok(())
}

/// Ideal wire whose last link `ã_{N−1}(θ)` rotates with the schedule,
/// draining site `N` and moving the right edge mode to Majorana `2N−2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MoveRamp<T: Real> {
    pub n_sites: usize,
    pub schedule: RampSchedule<T>,
    pub kappa: T,
    frozen: Vec<MajoranaVector<T>>,
}

impl<T: Real> MoveRamp<T> {
    /// `½[a_N† − a_N + cosθ(a_{N−1}† + a_{N−1}) − sinθ(a_N† + a_N)]`.
    pub fn last_operator(&self, theta: T) -> Result<MajoranaVector<T>> {
        let h: T = lit(0.5);
        let n = self.n_sites;
        let c = theta.cos() * h;
        let s = theta.sin() * h;
        complex_to_majorana(
            n,
            &[
                (n - 1, cplx(c, T::zero()), cplx(c, T::zero())),
                (n, cplx(-h - s, T::zero()), cplx(h - s, T::zero())),
            ],
        )
    }

    pub fn operators_at(&self, t: T) -> Result<Vec<MajoranaVector<T>>> {
        let mut ops = self.frozen.clone();
        ops.push(self.last_operator(self.schedule.theta(t))?);
        Ok(ops)
    }

    pub fn damping_at(&self, t: T) -> Result<DampingPair<T>> {
        build_damping_matrices(self.n_sites, &self.operators_at(t)?, self.kappa)
    }
}

pub fn move_ramp<T: Real>(n_sites: usize, schedule: RampSchedule<T>, kappa: T) -> Result<MoveRamp<T>> {
    let mut frozen = ideal_wire(n_sites)?;
    frozen.pop();
    if !(kappa > T::zero()) {
        return Err(WireError::InvalidParameter("kappa must be positive".into()));
    }
    Ok(MoveRamp {
        n_sites,
        schedule,
        kappa,
        frozen,
    })
}

/// 1-based Majorana indices of the four unpaired edge modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeLabels {
    pub left_1: usize,
    pub right_1: usize,
    pub left_2: usize,
    pub right_2: usize,
}

impl EdgeLabels {
    pub fn as_array(&self) -> [usize; 4] {
        [self.left_1, self.right_1, self.left_2, self.right_2]
    }
}

/// Two decoupled ideal wires on sites `1..N1` and `N1+1..N1+N2`.
pub fn two_wire_system<T: Real>(n1: usize, n2: usize) -> Result<(Vec<MajoranaVector<T>>, EdgeLabels)> {
    if n1 < 2 || n2 < 2 {
        return Err(WireError::InvalidParameter("each wire needs at least 2 sites".into()));
    }
    let total = n1 + n2;
    let mut ops = Vec::with_capacity(total - 2);
    for i in 1..n1 {
        ops.push(ideal_link(total, i)?);
    }
    for i in 1..n2 {
        ops.push(ideal_link(total, n1 + i)?);
    }
    let labels = EdgeLabels {
        left_1: 1,
        right_1: 2 * n1,
        left_2: 2 * n1 + 1,
        right_2: 2 * total,
    };
    Ok((ops, labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::{damping_spectrum, zero_modes};
    use nalgebra::Complex;

    fn pair_of(spec: &WireSpec<f64>) -> DampingPair<f64> {
        spec.damping().unwrap()
    }

    #[test]
    fn two_site_ideal_vector() {
        let ops = ideal_wire::<f64>(2).unwrap();
        assert_eq!(ops.len(), 1);
        let l = &ops[0];
        assert!((l.get(2) - Complex::new(0.5, 0.0)).norm() < 1e-15);
        assert!((l.get(3) - Complex::new(0.0, -0.5)).norm() < 1e-15);
        assert!(l.get(1).norm() < 1e-15 && l.get(4).norm() < 1e-15);
        assert!((2.0 * l.norm_squared() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ideal_links_have_local_support() {
        let ops = ideal_wire::<f64>(50).unwrap();
        assert_eq!(ops.len(), 49);
        for (k, l) in ops.iter().enumerate() {
            let i = k + 1;
            for a in 1..=100usize {
                let site = a.div_ceil(2);
                if site != i && site != i + 1 {
                    assert_eq!(l.get(a), Complex::new(0.0, 0.0));
                }
            }
        }
        let pair = build_damping_matrices(50, &ops, 1.0).unwrap();
        assert_eq!(damping_spectrum(&pair).n_zero(), 2);
    }

    #[test]
    fn quarter_pi_deformations_reproduce_ideal() {
        let ideal = WireSpec::<f64>::ideal(8).unwrap().damping().unwrap();
        let spec = WireSpec::new(WireKind::Canonical, 8, FRAC_PI_4).unwrap();
        let canon = pair_of(&spec);
        assert!((canon.x.clone() - ideal.x.clone()).amax() < 1e-12);
        assert!((canon.y.clone() - ideal.y.clone()).amax() < 1e-12);
        let non = pair_of(&WireSpec::new(WireKind::NonCanonical, 8, FRAC_PI_4).unwrap());
        assert!((non.x - canon.x).amax() < 1e-12);
        assert!((non.y - canon.y).amax() < 1e-12);
    }

    #[test]
    fn canonical_half_pi_is_annihilator_difference() {
        let spec = WireSpec::new(WireKind::Canonical, 4, FRAC_PI_2).unwrap();
        for l in deformed_wire(&spec).unwrap() {
            for (alpha, beta) in l.site_coefficients() {
                assert!(beta.norm() < 1e-15, "creation part must vanish");
                let _ = alpha;
            }
        }
    }

    #[test]
    fn phase_leaves_damping_spectrum_invariant() {
        for kind in [WireKind::Canonical, WireKind::NonCanonical] {
            let base = WireSpec::new(kind, 10, 0.9).unwrap().with_disorder(0.04, 3).unwrap();
            let rotated = base.clone().with_phi(1.1).unwrap();
            let a = damping_spectrum(&pair_of(&base)).eigenvalues;
            let b = damping_spectrum(&pair_of(&rotated)).eigenvalues;
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
            assert!((pair_of(&base).y - pair_of(&rotated).y).amax() > 1e-3);
        }
    }

    #[test]
    fn disorder_is_seeded_and_bounded() {
        let a = WireSpec::new(WireKind::Canonical, 20, 1.0f64).unwrap().with_disorder(0.05, 42).unwrap();
        let b = WireSpec::new(WireKind::Canonical, 20, 1.0f64).unwrap().with_disorder(0.05, 42).unwrap();
        let c = WireSpec::new(WireKind::Canonical, 20, 1.0f64).unwrap().with_disorder(0.05, 43).unwrap();
        assert_eq!(a.offsets(), b.offsets());
        assert_ne!(a.offsets(), c.offsets());
        assert!(a.offsets().iter().all(|e| e.abs() <= 0.05));
        assert!(WireSpec::new(WireKind::Canonical, 20, 1.0f64).unwrap().with_disorder(0.5, 1).is_err());
    }

    #[test]
    fn two_zero_modes_for_all_angles() {
        for kind in [WireKind::Canonical, WireKind::NonCanonical] {
            for k in 0..=8 {
                let theta = FRAC_PI_2 * k as f64 / 8.0;
                for eps in [0.0, 0.05] {
                    let spec = WireSpec::new(kind, 12, theta).unwrap().with_disorder(eps, 9).unwrap();
                    let z = zero_modes(&pair_of(&spec), 1e-8).unwrap();
                    assert_eq!(z.ncols(), 2, "{kind} theta={theta} eps={eps}");
                }
            }
        }
    }

    #[test]
    fn analytic_zero_modes_are_null_vectors() {
        for kind in [WireKind::Canonical, WireKind::NonCanonical] {
            for eps in [0.0, 0.05] {
                let spec = WireSpec::new(kind, 15, 3.0 * PI / 8.0).unwrap().with_disorder(eps, 5).unwrap();
                let pair = pair_of(&spec);
                let (vl, vr) = analytic_zero_modes(&spec).unwrap();
                assert!((&pair.x * &vl).norm() < 1e-10);
                assert!((&pair.x * &vr).norm() < 1e-10);
                // Principal angles with the numeric null space.
                let z = zero_modes(&pair, 1e-8).unwrap();
                for v in [&vl, &vr] {
                    let proj = z.transpose() * v;
                    assert!((1.0 - proj.norm()).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn quarter_pi_modes_are_end_localized() {
        let spec = WireSpec::new(WireKind::Canonical, 6, FRAC_PI_4).unwrap();
        let (vl, vr) = analytic_zero_modes(&spec).unwrap();
        let mut e1 = DVector::zeros(12);
        e1[0] = 1.0;
        let mut e12 = DVector::zeros(12);
        e12[11] = 1.0;
        assert!((vl - e1).amax() < 1e-15);
        assert!((vr - e12).amax() < 1e-15);
    }

    #[test]
    fn geometric_amplitudes_and_localization_length() {
        let theta = 3.0 * PI / 8.0;
        let spec = WireSpec::new(WireKind::Canonical, 20, theta).unwrap();
        let (vl, _) = analytic_zero_modes(&spec).unwrap();
        let ratio = (vl[2] / vl[0]).abs();
        assert!((ratio - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        let lloc = localization_length(theta);
        assert!((lloc - 1.0 / (2f64.sqrt() - 1.0).ln().abs()).abs() < 1e-12);
        assert!((lloc - 1.135).abs() < 1e-3);
        // Least-squares slope of ln|v_L| over the sites.
        let pts: Vec<(f64, f64)> = (0..20).map(|j| (j as f64, vl[2 * j].abs().ln())).collect();
        let n = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
        let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!(((-1.0 / slope) / lloc - 1.0).abs() < 0.01);
    }

    #[test]
    fn localization_length_limits() {
        assert_eq!(localization_length(FRAC_PI_4), 0.0);
        assert!(localization_length(FRAC_PI_2).is_infinite());
        assert!(localization_length(1.5) > localization_length(1.2));
    }

    #[test]
    fn singular_angles_are_reported() {
        let spec = WireSpec::new(WireKind::Canonical, 5, FRAC_PI_2).unwrap();
        assert!(matches!(analytic_zero_modes(&spec), Err(WireError::SingularZeroMode { .. })));
    }

    #[test]
    fn ramp_endpoints() {
        let ramp = move_ramp(5, RampSchedule::linear(10.0).unwrap(), 1.0).unwrap();
        assert_eq!(ramp.operators_at(0.0).unwrap(), ideal_wire::<f64>(5).unwrap());
        let ops = ramp.operators_at(10.0).unwrap();
        assert_eq!(ops.len(), 4);
        let last = ops.last().unwrap().site_coefficients();
        assert!((last[4].0 + Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!(last[4].1.norm() < 1e-15 && last[3].0.norm() < 1e-15 && last[3].1.norm() < 1e-15);
        for t in [2.5, 7.0] {
            let ops = ramp.operators_at(t).unwrap();
            assert_eq!(ops.len(), 4);
            assert!(ops[3].get(1).norm() == 0.0 && ops[3].get(6).norm() == 0.0);
        }
    }

    #[test]
    fn sampled_schedule_interpolates_and_integrates() {
        let s = RampSchedule::sampled(vec![0.0, 1.0, 3.0], vec![0.0, 0.5, FRAC_PI_2]).unwrap();
        assert!((s.theta(0.5) - 0.25).abs() < 1e-15);
        assert!((s.theta(2.0) - (0.5 + (FRAC_PI_2 - 0.5) / 2.0)).abs() < 1e-15);
        let expect = 0.25 + (FRAC_PI_2 - 0.5).powi(2) / 2.0;
        assert!((s.theta_dot_squared_integral() - expect).abs() < 1e-14);
        let lin = RampSchedule::linear(4.0).unwrap();
        assert!((lin.theta_dot_squared_integral() - FRAC_PI_2.powi(2) / 4.0).abs() < 1e-15);
        assert!(RampSchedule::sampled(vec![0.0, 1.0], vec![0.0, 1.0]).is_err());
        assert!(RampSchedule::sampled(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.9]).is_err());
    }

    #[test]
    fn two_wires_expose_four_edges() {
        let (ops, labels) = two_wire_system::<f64>(3, 3).unwrap();
        assert_eq!(labels.as_array(), [1, 6, 7, 12]);
        let pair = build_damping_matrices(6, &ops, 1.0).unwrap();
        let z = zero_modes(&pair, 1e-8).unwrap();
        assert_eq!(z.ncols(), 4);
        for c in 0..4 {
            let support: Vec<usize> = (0..12).filter(|&i| z[(i, c)].abs() > 1e-12).map(|i| i + 1).collect();
            assert!(support.iter().all(|a| labels.as_array().contains(a)));
        }
        let single = damping_spectrum(&WireSpec::<f64>::ideal(3).unwrap().damping().unwrap()).eigenvalues;
        let mut union: Vec<f64> = single.iter().chain(&single).copied().collect();
        union.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in union.iter().zip(damping_spectrum(&pair).eigenvalues.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn kind_parsing_round_trip() {
        for k in [WireKind::Ideal, WireKind::Canonical, WireKind::NonCanonical] {
            assert_eq!(k.to_string().parse::<WireKind>().unwrap(), k);
        }
        assert!("bogus".parse::<WireKind>().is_err());
    }
}

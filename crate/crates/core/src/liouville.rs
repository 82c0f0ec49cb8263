//! Time evolution, steady states and damping spectra of the covariance
//! equation `∂_t Γ = s[h, Γ] − {X, Γ} − Y`.
//!
//! Zero eigenvalues of `X` span the decoherence-free edge sector. In the
//! eigenbasis of `X` the edge block is conserved, edge-bulk coherences
//! decay as `e^{−λ_r t}` and the bulk relaxes to `−Y_rs / (λ_r + λ_s)`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Result, WireError};
use crate::gaussian::{
    antisymmetrize, gamma_squared_spectrum, purity_spectrum_tol, symmetrize, CovarianceMatrix,
    DampingPair, QuadraticHamiltonian, DEFAULT_PHYSICAL_TOL, HAMILTONIAN_SIGN,
};
use crate::integrate;
use crate::scalar::{from_usize, lit, to_f64, Real};

/// Default threshold separating zero modes from bulk damping rates.
pub const DEFAULT_ZERO_TOL: f64 = 1e-8;

/// Largest accepted `dt · max λ` for the fixed-step integrator.
pub const STEP_GUARD: f64 = 0.1;

/// Tolerance on `spec(Γ²) ⊂ [−1, 0]` for states produced by integration.
pub const DRIFT_TOL: f64 = 1e-6;

/// Eigen-decomposition of the drift matrix `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition<T: Real> {
    /// Ascending eigenvalues `λ_r`.
    pub eigenvalues: Vec<T>,
    /// Orthonormal eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: DMatrix<T>,
    /// Indices with `λ < zero_tol`.
    pub zero_indices: Vec<usize>,
    pub zero_tol: T,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn n_zero(&self) -> usize {
        self.zero_indices.len()
    }

    pub fn bulk_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|i| !self.zero_indices.contains(i)).collect()
    }

    /// Columns spanning `null(X)`.
    pub fn zero_basis(&self) -> DMatrix<T> {
        self.columns(&self.zero_indices)
    }

    pub fn bulk_basis(&self) -> DMatrix<T> {
        self.columns(&self.bulk_indices())
    }

    fn columns(&self, idx: &[usize]) -> DMatrix<T> {
        let mut out = DMatrix::zeros(self.dim(), idx.len());
        for (c, &i) in idx.iter().enumerate() {
            out.set_column(c, &self.eigenvectors.column(i));
        }
        out
    }

    /// `Σ λ_r |r⟩⟨r|`.
    pub fn reconstruct(&self) -> DMatrix<T> {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.eigenvalues.clone()));
        &self.eigenvectors * d * self.eigenvectors.transpose()
    }

    /// Smallest eigenvalue above `zero_tol`, if any.
    pub fn gap(&self) -> Option<T> {
        self.bulk_indices().first().map(|&i| self.eigenvalues[i])
    }

    pub fn max_rate(&self) -> T {
        self.eigenvalues.last().copied().unwrap_or_else(T::zero)
    }
}

/// Evolved states with the integrator metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionReport<T: Real> {
    pub times: Vec<T>,
    pub states: Vec<CovarianceMatrix<T>>,
    /// Largest step actually allowed.
    pub dt: T,
    /// Total number of RK4 steps taken.
    pub steps: usize,
}

impl<T: Real> EvolutionReport<T> {
    pub fn final_state(&self) -> &CovarianceMatrix<T> {
        self.states.last().expect("report holds at least one state")
    }
}

pub fn damping_spectrum<T: Real>(pair: &DampingPair<T>) -> SpectralDecomposition<T> {
    damping_spectrum_tol(pair, lit(DEFAULT_ZERO_TOL))
}

pub fn damping_spectrum_tol<T: Real>(pair: &DampingPair<T>, zero_tol: T) -> SpectralDecomposition<T> {
    sorted_eigen(&pair.x, zero_tol)
}

fn sorted_eigen<T: Real>(x: &DMatrix<T>, zero_tol: T) -> SpectralDecomposition<T> {
    let n = x.nrows();
    if n == 0 {
        return SpectralDecomposition {
            eigenvalues: Vec::new(),
            eigenvectors: DMatrix::zeros(0, 0),
            zero_indices: Vec::new(),
            zero_tol,
        };
    }
    let eig = SymmetricEigen::new(symmetrize(x));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("finite eigenvalues")
    });
    let eigenvalues: Vec<T> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (c, &i) in order.iter().enumerate() {
        eigenvectors.set_column(c, &eig.eigenvectors.column(i));
    }
    let zero_indices = (0..n).filter(|&i| eigenvalues[i] < zero_tol).collect();
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        zero_indices,
        zero_tol,
    }
}

/// Orthonormal basis of `null(X)` as matrix columns.
///
/// A null vector that is not also annihilated by `Y` means the pair was not
/// built from jump operators, which is reported as an inconsistent model.
pub fn zero_modes<T: Real>(pair: &DampingPair<T>, zero_tol: T) -> Result<DMatrix<T>> {
    let spec = damping_spectrum_tol(pair, zero_tol);
    let basis = spec.zero_basis();
    for c in 0..basis.ncols() {
        let v = basis.column(c);
        let yv = (&pair.y * v).norm();
        if yv >= zero_tol * lit(10.0) {
            return Err(WireError::InconsistentModel { coupling: to_f64(yv) });
        }
    }
    Ok(basis)
}

/// Steady state `{X, Γ̄} = −Y` on the bulk; the edge block is taken from
/// `gamma0` projected on `null(X)`, or set to zero.
pub fn steady_state<T: Real>(
    pair: &DampingPair<T>,
    gamma0: Option<&CovarianceMatrix<T>>,
) -> Result<CovarianceMatrix<T>> {
    steady_state_tol(pair, gamma0, lit(DEFAULT_ZERO_TOL))
}

pub fn steady_state_tol<T: Real>(
    pair: &DampingPair<T>,
    gamma0: Option<&CovarianceMatrix<T>>,
    zero_tol: T,
) -> Result<CovarianceMatrix<T>> {
    let dim = pair.dim();
    if let Some(g) = gamma0 {
        check_dim(dim, g.dim())?;
    }
    let spec = damping_spectrum_tol(pair, zero_tol);
    let u = &spec.eigenvectors;
    let yt = u.transpose() * &pair.y * u;
    let g0t = gamma0.map(|g| u.transpose() * g.matrix() * u);
    let mut gt = DMatrix::zeros(dim, dim);
    let ten: T = lit(10.0);
    for r in 0..dim {
        for s in 0..dim {
            let denom = spec.eigenvalues[r] + spec.eigenvalues[s];
            if denom > zero_tol {
                gt[(r, s)] = -yt[(r, s)] / denom;
            } else {
                if yt[(r, s)].abs() > ten * zero_tol {
                    return Err(WireError::InconsistentModel {
                        coupling: to_f64(yt[(r, s)]),
                    });
                }
                let both_zero = spec.eigenvalues[r] < zero_tol && spec.eigenvalues[s] < zero_tol;
                if let (Some(g0), true) = (&g0t, both_zero) {
                    gt[(r, s)] = g0[(r, s)];
                }
            }
        }
    }
    let g = antisymmetrize(&(u * gt * u.transpose()));
    purity_spectrum_tol(&CovarianceMatrix::new_unchecked(g.clone()), lit(1e-8))?;
    Ok(CovarianceMatrix::new_unchecked(g))
}

/// `max |{X, Γ} + Y|` over all entries.
pub fn steady_state_residual<T: Real>(pair: &DampingPair<T>, gamma: &CovarianceMatrix<T>) -> T {
    let g = gamma.matrix();
    let r = &pair.x * g + g * &pair.x + &pair.y;
    r.amax()
}

/// Eigenvalues of `Γ²` restricted to the bulk block of `X`.
pub fn bulk_purity_spectrum<T: Real>(
    gamma: &CovarianceMatrix<T>,
    spec: &SpectralDecomposition<T>,
) -> Vec<T> {
    let q = spec.bulk_basis();
    let block = q.transpose() * gamma.matrix() * &q;
    gamma_squared_spectrum(&antisymmetrize(&block))
}

/// The `d × d` block of `Γ` in the null basis of `X`.
pub fn edge_block<T: Real>(gamma: &CovarianceMatrix<T>, spec: &SpectralDecomposition<T>) -> DMatrix<T> {
    let q = spec.zero_basis();
    q.transpose() * gamma.matrix() * &q
}

/// Pure edge state pairing consecutive zero modes:
/// `Γ = c Σ_p (u_{2p} u_{2p+1}ᵀ − u_{2p+1} u_{2p}ᵀ)` with `|c| ≤ 1`.
pub fn paired_edge_seed<T: Real>(spec: &SpectralDecomposition<T>, correlation: T) -> Result<CovarianceMatrix<T>> {
    if spec.n_zero() == 0 {
        return Err(WireError::NoZeroModes);
    }
    if !spec.n_zero().is_multiple_of(2) {
        return Err(WireError::InvalidParameter(format!(
            "cannot pair an odd number ({}) of zero modes",
            spec.n_zero()
        )));
    }
    if correlation.abs() > T::one() {
        return Err(WireError::InvalidParameter("edge correlation must lie in [-1, 1]".into()));
    }
    let q = spec.zero_basis();
    let mut g = DMatrix::zeros(spec.dim(), spec.dim());
    for p in 0..q.ncols() / 2 {
        let a = q.column(2 * p);
        let b = q.column(2 * p + 1);
        g += (a * b.transpose() - b * a.transpose()) * correlation;
    }
    Ok(CovarianceMatrix::new_unchecked(g))
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(WireError::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn max_rate<T: Real>(x: &DMatrix<T>) -> T {
    if x.nrows() == 0 {
        return T::zero();
    }
    SymmetricEigen::new(symmetrize(x))
        .eigenvalues
        .iter()
        .fold(T::zero(), |m, &e| if e > m { e } else { m })
}

fn check_guard<T: Real>(dt: T, lambda_max: T) -> Result<()> {
    if !(dt > T::zero()) {
        return Err(WireError::InvalidParameter("dt must be positive".into()));
    }
    let product = dt * lambda_max;
    if product >= lit(STEP_GUARD) {
        return Err(WireError::StepSizeGuard {
            product: to_f64(product),
            limit: STEP_GUARD,
        });
    }
    Ok(())
}

fn check_samples<T: Real>(times: &[T]) -> Result<()> {
    let mut prev = T::zero();
    for &t in times {
        if !(t >= prev) {
            return Err(WireError::InvalidParameter(
                "sample times must be non-negative and non-decreasing".into(),
            ));
        }
        prev = t;
    }
    Ok(())
}

fn check_initial<T: Real>(gamma0: &CovarianceMatrix<T>) -> Result<()> {
    purity_spectrum_tol(gamma0, lit(DEFAULT_PHYSICAL_TOL)).map(|_| ())
}

fn drift_check<T: Real>(time: T, g: &DMatrix<T>) -> Result<()> {
    let tol: T = lit(DRIFT_TOL);
    for e in gamma_squared_spectrum(g) {
        if e < -T::one() - tol || e > tol {
            return Err(WireError::NonPhysicalDrift {
                time: to_f64(time),
                eigenvalue: to_f64(e),
            });
        }
    }
    Ok(())
}

fn rhs<T: Real>(pair: &DampingPair<T>, h: Option<&DMatrix<T>>, g: &DMatrix<T>) -> DMatrix<T> {
    let mut out = -(&pair.x * g + g * &pair.x) - &pair.y;
    if let Some(h) = h {
        out += (h * g - g * h) * lit::<T>(HAMILTONIAN_SIGN);
    }
    out
}

/// Integrate from 0 to `t_final`, recording the initial and final states.
pub fn evolve<T: Real>(
    gamma0: &CovarianceMatrix<T>,
    pair: &DampingPair<T>,
    hamiltonian: Option<&QuadraticHamiltonian<T>>,
    t_final: T,
    dt: T,
) -> Result<EvolutionReport<T>> {
    evolve_sampled(gamma0, pair, hamiltonian, &[T::zero(), t_final], dt)
}

/// Integrate a time-independent generator, recording the state at each of
/// `sample_times` (non-decreasing, measured from 0).
pub fn evolve_sampled<T: Real>(
    gamma0: &CovarianceMatrix<T>,
    pair: &DampingPair<T>,
    hamiltonian: Option<&QuadraticHamiltonian<T>>,
    sample_times: &[T],
    dt: T,
) -> Result<EvolutionReport<T>> {
    check_dim(pair.dim(), gamma0.dim())?;
    if let Some(h) = hamiltonian {
        check_dim(pair.dim(), h.matrix().nrows())?;
    }
    check_guard(dt, max_rate(&pair.x))?;
    let h = hamiltonian.map(|h| h.matrix());
    run(gamma0, sample_times, dt, |_t, g| Ok(rhs(pair, h, g)))
}

/// Integrate a time-dependent dissipator `t ↦ (X(t), Y(t))`.
///
/// The step guard is evaluated on the generator at `t = 0` and at every
/// sample time.
pub fn evolve_driven<T, F>(
    gamma0: &CovarianceMatrix<T>,
    generator: F,
    sample_times: &[T],
    dt: T,
) -> Result<EvolutionReport<T>>
where
    T: Real,
    F: Fn(T) -> Result<DampingPair<T>>,
{
    let p0 = generator(T::zero())?;
    check_dim(p0.dim(), gamma0.dim())?;
    check_guard(dt, max_rate(&p0.x))?;
    for &t in sample_times {
        check_guard(dt, max_rate(&generator(t)?.x))?;
    }
    run(gamma0, sample_times, dt, |t, g| Ok(rhs(&generator(t)?, None, g)))
}

fn run<T, F>(gamma0: &CovarianceMatrix<T>, sample_times: &[T], dt: T, mut f: F) -> Result<EvolutionReport<T>>
where
    T: Real,
    F: FnMut(T, &DMatrix<T>) -> Result<DMatrix<T>>,
{
    check_samples(sample_times)?;
    check_initial(gamma0)?;
    let mut t = T::zero();
    let mut g = gamma0.matrix().clone();
    let mut steps = 0usize;
    let mut times = Vec::with_capacity(sample_times.len());
    let mut states = Vec::with_capacity(sample_times.len());
    let mut after = |_t: T, y: &mut DMatrix<T>| {
        *y = antisymmetrize(y);
        Ok(())
    };
    for &ts in sample_times {
        steps += integrate::substeps(ts - t, dt);
        g = integrate::integrate(t, g, ts, dt, &mut f, &mut after)?;
        t = ts;
        drift_check(t, &g)?;
        times.push(t);
        states.push(CovarianceMatrix::new_unchecked(g.clone()));
    }
    Ok(EvolutionReport {
        times,
        states,
        dt,
        steps,
    })
}

/// Largest deviation of the edge-bulk coherences `Γ_rβ(t)` from
/// `e^{−λ_r t} Γ_rβ(0)`, measured in the eigenbasis of `X`.
pub fn edge_bulk_decay_check<T: Real>(
    pair: &DampingPair<T>,
    gamma0: &CovarianceMatrix<T>,
    times: &[T],
) -> Result<T> {
    check_dim(pair.dim(), gamma0.dim())?;
    let spec = damping_spectrum(pair);
    if spec.n_zero() == 0 {
        return Err(WireError::NoZeroModes);
    }
    let mut sorted: Vec<T> = times.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite sample times"));
    let one = T::one();
    let lmax = if spec.max_rate() > one { spec.max_rate() } else { one };
    let dt = lit::<T>(0.02) / lmax;
    let report = evolve_sampled(gamma0, pair, None, &sorted, dt)?;
    let u = &spec.eigenvectors;
    let g0 = u.transpose() * gamma0.matrix() * u;
    let bulk = spec.bulk_indices();
    let mut worst = T::zero();
    for (t, state) in report.times.iter().zip(&report.states) {
        let gt = u.transpose() * state.matrix() * u;
        for &r in &bulk {
            let decay = (-spec.eigenvalues[r] * *t).exp();
            for &b in &spec.zero_indices {
                let dev = (gt[(r, b)] - g0[(r, b)] * decay).abs();
                if dev > worst {
                    worst = dev;
                }
            }
        }
    }
    Ok(worst)
}

/// Uniformly spaced sample times `0, T/n, …, T`.
pub fn uniform_times<T: Real>(t_final: T, n: usize) -> Vec<T> {
    (0..=n).map(|i| t_final * from_usize::<T>(i) / from_usize::<T>(n.max(1))).collect()
}

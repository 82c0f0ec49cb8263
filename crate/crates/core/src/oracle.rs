//! Brute-force Fock-space reference for small lattices.
//!
//! Operators are dense `2^N × 2^N` complex matrices in the occupation basis;
//! bit `j − 1` of a basis index is the occupation of site `j` and fermionic
//! signs follow a Jordan–Wigner string over lower sites. Everything compared
//! against the Gaussian engine is basis independent (covariances,
//! occupations, residual norms).

use std::ops::{Add, Mul, Sub};

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, WireError};
use crate::gaussian::{antisymmetrize, CovarianceMatrix, MajoranaVector, QuadraticHamiltonian};
use crate::integrate;
use crate::momentum::BogoliubovFunction;
use crate::scalar::{cabs, cplx, czero, from_usize, lit, polar, to_f64, Real};

/// Hard cap on the number of sites.
pub const MAX_FOCK_SITES: usize = 6;

/// Largest accepted `dt · (‖H‖ + κ‖Σ j†j‖)`.
pub const FOCK_STEP_GUARD: f64 = 0.5;

/// Allowed `|tr ρ − 1|` and hermiticity defect after an evolution.
pub const TRACE_TOL: f64 = 1e-9;

/// Allowed negative eigenvalue of an evolved density matrix.
pub const POSITIVITY_TOL: f64 = 1e-8;

type CMat<T> = DMatrix<Complex<T>>;
type CVec<T> = DVector<Complex<T>>;

/// Dense operator on the Fock space of `n_sites` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator<T: Real> {
    n_sites: usize,
    matrix: CMat<T>,
}

impl<T: Real> FockOperator<T> {
    pub fn new(n_sites: usize, matrix: CMat<T>) -> Result<Self> {
        check_sites(n_sites)?;
        let dim = 1usize << n_sites;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(WireError::DimensionMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        Ok(Self { n_sites, matrix })
    }

    pub fn zeros(n_sites: usize) -> Self {
        let dim = 1usize << n_sites;
        Self {
            n_sites,
            matrix: DMatrix::from_element(dim, dim, czero()),
        }
    }

    pub fn identity(n_sites: usize) -> Self {
        Self {
            n_sites,
            matrix: DMatrix::identity(1 << n_sites, 1 << n_sites),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    pub fn dagger(&self) -> Self {
        Self {
            n_sites: self.n_sites,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        Self {
            n_sites: self.n_sites,
            matrix: &self.matrix * c,
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> T {
        self.matrix.norm()
    }

    pub fn apply(&self, psi: &CVec<T>) -> CVec<T> {
        &self.matrix * psi
    }
}

impl<T: Real> Add for &FockOperator<T> {
    type Output = FockOperator<T>;
    fn add(self, rhs: Self) -> FockOperator<T> {
        FockOperator {
            n_sites: self.n_sites,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl<T: Real> Sub for &FockOperator<T> {
    type Output = FockOperator<T>;
    fn sub(self, rhs: Self) -> FockOperator<T> {
        FockOperator {
            n_sites: self.n_sites,
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl<T: Real> Mul for &FockOperator<T> {
    type Output = FockOperator<T>;
    fn mul(self, rhs: Self) -> FockOperator<T> {
        FockOperator {
            n_sites: self.n_sites,
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

fn check_sites(n_sites: usize) -> Result<()> {
    if n_sites > MAX_FOCK_SITES {
        return Err(WireError::FockDimension {
            requested: n_sites,
            max: MAX_FOCK_SITES,
        });
    }
    if n_sites == 0 {
        return Err(WireError::InvalidParameter("Fock space needs at least one site".into()));
    }
    Ok(())
}

/// Mode operators of an `n_sites` Fock space.
#[derive(Debug, Clone)]
pub struct FockSpace<T: Real> {
    n_sites: usize,
    annihilators: Vec<FockOperator<T>>,
}

impl<T: Real> FockSpace<T> {
    pub fn new(n_sites: usize) -> Result<Self> {
        check_sites(n_sites)?;
        let dim = 1usize << n_sites;
        let annihilators = (0..n_sites)
            .map(|j| {
                let mut m = DMatrix::from_element(dim, dim, czero());
                let bit = 1usize << j;
                for s in 0..dim {
                    if s & bit != 0 {
                        let sign = if (s & (bit - 1)).count_ones().is_multiple_of(2) { T::one() } else { -T::one() };
                        m[(s ^ bit, s)] = cplx(sign, T::zero());
                    }
                }
                FockOperator { n_sites, matrix: m }
            })
            .collect();
        Ok(Self { n_sites, annihilators })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    fn site(&self, j: usize) -> Result<usize> {
        if j == 0 || j > self.n_sites {
            return Err(WireError::SiteOutOfRange {
                index: j,
                n_sites: self.n_sites,
            });
        }
        Ok(j - 1)
    }

    /// `a_j` for a 1-based site.
    pub fn a(&self, j: usize) -> Result<FockOperator<T>> {
        Ok(self.annihilators[self.site(j)?].clone())
    }

    pub fn a_dag(&self, j: usize) -> Result<FockOperator<T>> {
        Ok(self.annihilators[self.site(j)?].dagger())
    }

    pub fn number(&self, j: usize) -> Result<FockOperator<T>> {
        Ok(&self.a_dag(j)? * &self.a(j)?)
    }

    pub fn total_number(&self) -> FockOperator<T> {
        let mut n = FockOperator::zeros(self.n_sites);
        for a in &self.annihilators {
            n = &n + &(&a.dagger() * a);
        }
        n
    }

    /// `c_{2j−1} = i(a_j† − a_j)`, `c_{2j} = a_j + a_j†` for a 1-based index.
    pub fn majorana(&self, index: usize) -> Result<FockOperator<T>> {
        if index == 0 || index > 2 * self.n_sites {
            return Err(WireError::MajoranaOutOfRange {
                index,
                dim: 2 * self.n_sites,
            });
        }
        let a = &self.annihilators[(index - 1) / 2];
        let ad = a.dagger();
        if index % 2 == 1 {
            Ok((&ad - a).scaled(cplx(T::zero(), T::one())))
        } else {
            Ok(&ad + a)
        }
    }

    pub fn vacuum(&self) -> CVec<T> {
        let mut v = DVector::from_element(self.dim(), czero());
        v[0] = cplx(T::one(), T::zero());
        v
    }

    /// `a_k = N^{−1/2} Σ_{x=0}^{N−1} e^{−ikx} a_{x+1}` on a ring.
    pub fn momentum_a(&self, k: T) -> FockOperator<T> {
        let norm = T::one() / from_usize::<T>(self.n_sites).sqrt();
        let mut out = FockOperator::zeros(self.n_sites);
        for (x, a) in self.annihilators.iter().enumerate() {
            let ph = polar(norm, -k * from_usize::<T>(x));
            out = &out + &a.scaled(ph);
        }
        out
    }

    /// `Σ_a l_a c_a`.
    pub fn jump_from_majorana(&self, l: &MajoranaVector<T>) -> Result<FockOperator<T>> {
        if l.n_sites() != self.n_sites {
            return Err(WireError::DimensionMismatch {
                expected: self.n_sites,
                found: l.n_sites(),
            });
        }
        let mut out = FockOperator::zeros(self.n_sites);
        for a in 1..=l.dim() {
            let c = l.get(a);
            if c != czero() {
                out = &out + &self.majorana(a)?.scaled(c);
            }
        }
        Ok(out)
    }

    /// `𝓗 = (i/4) Σ_ab h_ab c_a c_b`.
    pub fn hamiltonian(&self, h: &QuadraticHamiltonian<T>) -> Result<FockOperator<T>> {
        let m = h.matrix();
        if m.nrows() != 2 * self.n_sites {
            return Err(WireError::DimensionMismatch {
                expected: 2 * self.n_sites,
                found: m.nrows(),
            });
        }
        let cs: Vec<FockOperator<T>> = (1..=2 * self.n_sites).map(|a| self.majorana(a)).collect::<Result<_>>()?;
        let mut out = FockOperator::zeros(self.n_sites);
        let q = cplx(T::zero(), lit(0.25));
        for a in 0..cs.len() {
            for b in 0..cs.len() {
                if m[(a, b)] != T::zero() {
                    out = &out + &(&cs[a] * &cs[b]).scaled(q * m[(a, b)]);
                }
            }
        }
        Ok(out)
    }

    /// `B_ij = exp(π/4 γ_i γ_j) = (1 + γ_i γ_j)/√2` for distinct 1-based indices.
    pub fn braid_unitary(&self, i: usize, j: usize) -> Result<FockOperator<T>> {
        if i == j {
            return Err(WireError::InvalidParameter("braid needs two distinct Majoranas".into()));
        }
        let gg = &self.majorana(i)? * &self.majorana(j)?;
        let r = cplx(lit(std::f64::consts::FRAC_1_SQRT_2), T::zero());
        Ok((&FockOperator::identity(self.n_sites) + &gg).scaled(r))
    }

    /// Projector onto the sector with `n` particles.
    pub fn number_projector(&self, n: usize) -> FockOperator<T> {
        let mut m = DMatrix::from_element(self.dim(), self.dim(), czero());
        for s in 0..self.dim() {
            if s.count_ones() as usize == n {
                m[(s, s)] = cplx(T::one(), T::zero());
            }
        }
        FockOperator {
            n_sites: self.n_sites,
            matrix: m,
        }
    }

    /// Seeded random unit vector supported in one particle-number sector.
    pub fn random_sector_state(&self, n_particles: usize, seed: u64) -> Result<CVec<T>> {
        if n_particles > self.n_sites {
            return Err(WireError::InvalidParameter(format!(
                "cannot place {n_particles} particles on {} sites",
                self.n_sites
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = DVector::from_element(self.dim(), czero());
        for s in 0..self.dim() {
            if s.count_ones() as usize == n_particles {
                v[s] = cplx(lit(rng.random_range(-1.0..1.0)), lit(rng.random_range(-1.0..1.0)));
            }
        }
        let n = v.norm();
        Ok(v / cplx(n, T::zero()))
    }

    /// Gibbs state `e^{−𝓗}/Z` of a seeded random quadratic Hamiltonian.
    pub fn random_gaussian_state(&self, seed: u64) -> Result<DensityMatrix<T>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 2 * self.n_sites;
        let mut h = DMatrix::zeros(dim, dim);
        for a in 0..dim {
            for b in a + 1..dim {
                let x: T = lit(rng.random_range(-1.5..1.5));
                h[(a, b)] = x;
                h[(b, a)] = -x;
            }
        }
        let op = self.hamiltonian(&QuadraticHamiltonian::new(h)?)?;
        let eig = SymmetricEigen::new(hermitize(op.matrix()));
        let emin = eig.eigenvalues.iter().fold(T::max_value().unwrap_or_else(T::one), |m, &e| if e < m { e } else { m });
        let w: Vec<T> = eig.eigenvalues.iter().map(|&e| (-(e - emin)).exp()).collect();
        let z = w.iter().fold(T::zero(), |a, &b| a + b);
        let diag = DMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            w.iter().map(|&x| cplx(x / z, T::zero())),
        ));
        let rho = &eig.eigenvectors * diag * eig.eigenvectors.adjoint();
        DensityMatrix::new(self.n_sites, hermitize(&rho))
    }
}

fn hermitize<T: Real>(m: &CMat<T>) -> CMat<T> {
    (m + m.adjoint()) * cplx(lit::<T>(0.5), T::zero())
}

/// Hermitian, unit-trace, positive semi-definite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    n_sites: usize,
    matrix: CMat<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(n_sites: usize, matrix: CMat<T>) -> Result<Self> {
        let op = FockOperator::new(n_sites, matrix)?;
        let rho = Self {
            n_sites,
            matrix: op.matrix,
        };
        let tol: T = lit(1e-10);
        let herm = (&rho.matrix - rho.matrix.adjoint()).camax();
        if herm > tol {
            return Err(WireError::InvalidParameter(format!(
                "density matrix not hermitian (defect {})",
                to_f64(herm)
            )));
        }
        if (rho.trace() - T::one()).abs() > tol {
            return Err(WireError::TraceDrift {
                trace: to_f64(rho.trace()),
            });
        }
        let emin = rho.min_eigenvalue();
        if emin < -tol {
            return Err(WireError::NonPhysical {
                eigenvalue: to_f64(emin),
            });
        }
        Ok(rho)
    }

    pub fn pure(n_sites: usize, psi: &CVec<T>) -> Result<Self> {
        let n = psi.norm();
        if !(n > T::zero()) {
            return Err(WireError::InvalidParameter("state vector must be nonzero".into()));
        }
        let p = psi / cplx(n, T::zero());
        Self::new(n_sites, hermitize(&(&p * p.adjoint())))
    }

    pub fn maximally_mixed(n_sites: usize) -> Result<Self> {
        check_sites(n_sites)?;
        let dim = 1usize << n_sites;
        let w = cplx(T::one() / from_usize::<T>(dim), T::zero());
        Ok(Self {
            n_sites,
            matrix: DMatrix::identity(dim, dim) * w,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    pub fn hermiticity_defect(&self) -> T {
        (&self.matrix - self.matrix.adjoint()).camax()
    }

    pub fn min_eigenvalue(&self) -> T {
        SymmetricEigen::new(hermitize(&self.matrix))
            .eigenvalues
            .iter()
            .fold(T::max_value().unwrap_or_else(T::one), |m, &e| if e < m { e } else { m })
    }

    /// `tr(ρ O)`.
    pub fn expectation(&self, op: &FockOperator<T>) -> Complex<T> {
        trace_product(&self.matrix, op.matrix())
    }

    /// `⟨ψ|ρ|ψ⟩` for a normalized `ψ`.
    pub fn fidelity_with(&self, psi: &CVec<T>) -> T {
        (psi.adjoint() * &self.matrix * psi)[(0, 0)].re
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, u: &FockOperator<T>) -> Self {
        Self {
            n_sites: self.n_sites,
            matrix: u.matrix() * &self.matrix * u.matrix().adjoint(),
        }
    }
}

fn trace_product<T: Real>(a: &CMat<T>, b: &CMat<T>) -> Complex<T> {
    let mut s = czero();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

fn largest_hermitian_eigenvalue<T: Real>(m: &CMat<T>) -> T {
    SymmetricEigen::new(hermitize(m))
        .eigenvalues
        .iter()
        .fold(T::zero(), |a, &e| if e.abs() > a { e.abs() } else { a })
}

/// Fock-space Lindbladian `ρ̇ = −i[H, ρ] + κ Σ (jρj† − ½{j†j, ρ})`.
/// Nonzero entries `(row, col, value)` of a Fock-space operator.
type Triplets<T> = Vec<(usize, usize, Complex<T>)>;

fn triplets<T: Real>(m: &CMat<T>) -> Triplets<T> {
    let mut out = Vec::new();
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            let v = m[(r, c)];
            if v.re != T::zero() || v.im != T::zero() {
                out.push((r, c, v));
            }
        }
    }
    out
}

/// `out += s · A B` for sparse `A`.
fn add_sparse_product<T: Real>(out: &mut CMat<T>, a: &Triplets<T>, b: &CMat<T>, s: Complex<T>) {
    for &(r, c, v) in a {
        let sv = s * v;
        for col in 0..b.ncols() {
            out[(r, col)] += sv * b[(c, col)];
        }
    }
}

/// `out += s · B A†` for sparse `A`.
fn add_product_adjoint<T: Real>(out: &mut CMat<T>, b: &CMat<T>, a: &Triplets<T>, s: Complex<T>) {
    for &(r, c, v) in a {
        let sv = s * v.conj();
        for row in 0..b.nrows() {
            out[(row, r)] += sv * b[(row, c)];
        }
    }
}

#[derive(Debug, Clone)]
pub struct FockLindblad<T: Real> {
    n_sites: usize,
    // Jumps and the effective Hamiltonian are sparse in the occupation basis.
    jumps: Vec<Triplets<T>>,
    h_eff: Triplets<T>,
    rate_bound: T,
    kappa: T,
}

impl<T: Real> FockLindblad<T> {
    pub fn new(jumps: &[FockOperator<T>], kappa: T, hamiltonian: Option<&FockOperator<T>>) -> Result<Self> {
        if !(kappa >= T::zero()) {
            return Err(WireError::InvalidParameter("kappa must be non-negative".into()));
        }
        let n_sites = jumps
            .first()
            .map(|j| j.n_sites())
            .or(hamiltonian.map(|h| h.n_sites()))
            .ok_or_else(|| WireError::InvalidParameter("need jump operators or a Hamiltonian".into()))?;
        for op in jumps.iter().chain(hamiltonian) {
            if op.n_sites() != n_sites {
                return Err(WireError::DimensionMismatch {
                    expected: n_sites,
                    found: op.n_sites(),
                });
            }
        }
        let dim = 1usize << n_sites;
        let mut k = DMatrix::from_element(dim, dim, czero());
        for j in jumps {
            k += j.matrix().adjoint() * j.matrix();
        }
        let h = hamiltonian.map(|h| h.matrix().clone()).unwrap_or_else(|| DMatrix::from_element(dim, dim, czero()));
        let rate_bound = largest_hermitian_eigenvalue(&h) + kappa * largest_hermitian_eigenvalue(&k);
        let h_eff = &h - &k * cplx(T::zero(), kappa * lit(0.5));
        Ok(Self {
            n_sites,
            jumps: jumps.iter().map(|j| triplets(j.matrix())).collect(),
            h_eff: triplets(&h_eff),
            rate_bound,
            kappa,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn rhs(&self, rho: &CMat<T>) -> CMat<T> {
        let dim = rho.nrows();
        let i = cplx(T::zero(), T::one());
        let mut out = DMatrix::from_element(dim, dim, czero());
        add_sparse_product(&mut out, &self.h_eff, rho, -i);
        add_product_adjoint(&mut out, rho, &self.h_eff, i);
        let k = cplx(self.kappa, T::zero());
        let mut tmp = DMatrix::from_element(dim, dim, czero());
        for j in &self.jumps {
            tmp.fill(czero());
            add_sparse_product(&mut tmp, j, rho, cplx(T::one(), T::zero()));
            add_product_adjoint(&mut out, &tmp, j, k);
        }
        out
    }

    /// Evolve and record `ρ` at each sample time (non-decreasing, from 0).
    pub fn trajectory(&self, rho0: &DensityMatrix<T>, sample_times: &[T], dt: T) -> Result<Vec<DensityMatrix<T>>> {
        if rho0.n_sites() != self.n_sites {
            return Err(WireError::DimensionMismatch {
                expected: self.n_sites,
                found: rho0.n_sites(),
            });
        }
        if !(dt > T::zero()) {
            return Err(WireError::InvalidParameter("dt must be positive".into()));
        }
        let product = dt * self.rate_bound;
        if product >= lit(FOCK_STEP_GUARD) {
            return Err(WireError::StepSizeGuard {
                product: to_f64(product),
                limit: FOCK_STEP_GUARD,
            });
        }
        let mut t = T::zero();
        let mut rho = rho0.matrix().clone();
        let mut out = Vec::with_capacity(sample_times.len());
        let mut f = |_t: T, r: &CMat<T>| Ok(self.rhs(r));
        let mut noop = |_t: T, _r: &mut CMat<T>| Ok(());
        for &ts in sample_times {
            if !(ts >= t) {
                return Err(WireError::InvalidParameter(
                    "sample times must be non-negative and non-decreasing".into(),
                ));
            }
            rho = integrate::integrate(t, rho, ts, dt, &mut f, &mut noop)?;
            t = ts;
            out.push(self.checked(t, &rho)?);
        }
        Ok(out)
    }

    fn checked(&self, t: T, rho: &CMat<T>) -> Result<DensityMatrix<T>> {
        let d = DensityMatrix {
            n_sites: self.n_sites,
            matrix: rho.clone(),
        };
        let tol: T = lit(TRACE_TOL);
        if (d.trace() - T::one()).abs() > tol || d.hermiticity_defect() > tol {
            return Err(WireError::TraceDrift {
                trace: to_f64(d.trace()),
            });
        }
        let emin = d.min_eigenvalue();
        if emin < -lit::<T>(POSITIVITY_TOL) {
            return Err(WireError::NonPhysicalDrift {
                time: to_f64(t),
                eigenvalue: to_f64(emin),
            });
        }
        Ok(d)
    }
}

/// RK4 solution of the Fock-space master equation at time `t_final`.
pub fn fock_lindblad_evolve<T: Real>(
    jumps: &[FockOperator<T>],
    kappa: T,
    hamiltonian: Option<&FockOperator<T>>,
    rho0: &DensityMatrix<T>,
    t_final: T,
    dt: T,
) -> Result<DensityMatrix<T>> {
    let l = FockLindblad::new(jumps, kappa, hamiltonian)?;
    Ok(l.trajectory(rho0, &[t_final], dt)?.remove(0))
}

/// `Γ_ab = (i/2) tr(ρ [c_a, c_b])`.
pub fn covariance_from_rho<T: Real>(space: &FockSpace<T>, rho: &DensityMatrix<T>) -> Result<CovarianceMatrix<T>> {
    if rho.n_sites() != space.n_sites() {
        return Err(WireError::DimensionMismatch {
            expected: space.n_sites(),
            found: rho.n_sites(),
        });
    }
    let dim = 2 * space.n_sites();
    let cs: Vec<CMat<T>> = (1..=dim)
        .map(|a| space.majorana(a).map(|c| c.matrix().clone()))
        .collect::<Result<_>>()?;
    let rc: Vec<CMat<T>> = cs.iter().map(|c| rho.matrix() * c).collect();
    let mut g = DMatrix::zeros(dim, dim);
    let tol: T = lit(1e-10);
    for a in 0..dim {
        for b in 0..dim {
            if a == b {
                continue;
            }
            // (i/2)⟨[c_a, c_b]⟩ = i⟨c_a c_b⟩ for a ≠ b.
            let val = trace_product(&rc[a], &cs[b]) * cplx(T::zero(), T::one());
            if val.im.abs() > tol {
                return Err(WireError::ImaginaryResidue {
                    residue: to_f64(val.im.abs()),
                });
            }
            g[(a, b)] = val.re;
        }
    }
    Ok(CovarianceMatrix::new_unchecked(antisymmetrize(&g)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Ring,
}

/// `J_i = C_i† A_i` with `C_i† = ½(a_i† + a_{i+1}†)` and `A_i = ½(a_i − a_{i+1})`.
pub fn quartic_wire_ops<T: Real>(space: &FockSpace<T>, boundary: Boundary) -> Result<Vec<FockOperator<T>>> {
    let n = space.n_sites();
    let links = match boundary {
        Boundary::Open => n - 1,
        Boundary::Ring => n,
    };
    let half = cplx(lit::<T>(0.5), T::zero());
    (1..=links)
        .map(|i| {
            let next = i % n + 1;
            let c_dag = (&space.a_dag(i)? + &space.a_dag(next)?).scaled(half);
            let a = (&space.a(i)? - &space.a(next)?).scaled(half);
            Ok(&c_dag * &a)
        })
        .collect()
}

/// Quadratic ring version of the ideal wire, `j_i = ½(a_i + a_i† − a_{i+1} + a_{i+1}†)`.
pub fn ideal_ring_ops<T: Real>(space: &FockSpace<T>) -> Result<Vec<FockOperator<T>>> {
    let n = space.n_sites();
    let half = cplx(lit::<T>(0.5), T::zero());
    (1..=n)
        .map(|i| {
            let next = i % n + 1;
            let s = &(&space.a(i)? + &space.a_dag(i)?) - &space.a(next)?;
            Ok((&s + &space.a_dag(next)?).scaled(half))
        })
        .collect()
}

fn check_ring<T: Real>(space: &FockSpace<T>, xi: &BogoliubovFunction<T>) -> Result<()> {
    if xi.grid.len() != space.n_sites() {
        return Err(WireError::DimensionMismatch {
            expected: space.n_sites(),
            found: xi.grid.len(),
        });
    }
    Ok(())
}

/// Occupation of a self-paired mode (`k = 0` or `π`): filled when the
/// steady Bloch vector points down, `n_z = (|u|² − |v|²)/κ < 0`.
pub fn self_paired_filled<T: Real>(xi: &BogoliubovFunction<T>, j: usize) -> Result<bool> {
    let d = xi.v[j].norm_sqr() - xi.u[j].norm_sqr();
    if d.abs() < lit(1e-12) {
        return Err(WireError::PairingUndefined {
            k: to_f64(xi.grid.k::<T>(j)),
        });
    }
    Ok(d > T::zero())
}

fn self_paired_indices<T: Real>(xi: &BogoliubovFunction<T>) -> Vec<usize> {
    (0..xi.grid.len()).filter(|&j| xi.grid.partner(j) == j).collect()
}

/// `Π a_k†` over the filled self-paired modes.
fn self_paired_filler<T: Real>(space: &FockSpace<T>, xi: &BogoliubovFunction<T>) -> Result<FockOperator<T>> {
    let mut op = FockOperator::identity(space.n_sites());
    for j in self_paired_indices(xi) {
        if self_paired_filled(xi, j)? {
            op = &space.momentum_a(xi.grid.k(j)).dagger() * &op;
        }
    }
    Ok(op)
}

/// `G† = Σ_k φ_k a_{−k}† a_k†` over strictly paired `k`, `φ_k = v_k/u_k`.
pub fn pairing_operator<T: Real>(space: &FockSpace<T>, xi: &BogoliubovFunction<T>) -> Result<FockOperator<T>> {
    check_ring(space, xi)?;
    let mut g = FockOperator::zeros(space.n_sites());
    for j in 0..xi.grid.len() {
        let p = xi.grid.partner(j);
        if p == j {
            continue;
        }
        if cabs(xi.u[j]) < lit(1e-12) {
            return Err(WireError::PairingUndefined {
                k: to_f64(xi.grid.k::<T>(j)),
            });
        }
        let phi = xi.v[j] / xi.u[j];
        let ak = space.momentum_a(xi.grid.k(j)).dagger();
        let amk = space.momentum_a(xi.grid.k(p)).dagger();
        g = &g + &(&amk * &ak).scaled(phi);
    }
    Ok(g)
}

/// Number-projected BCS state `Π_{self-paired} a_k† · G†^{n_pairs} |vac⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedNumberBCS<T: Real> {
    pub state: CVec<T>,
    /// `(k, φ_k)` over the strictly paired modes.
    pub pairing: Vec<(T, Complex<T>)>,
    pub n_particles: usize,
}

pub fn bcs_fixed_number_state<T: Real>(
    space: &FockSpace<T>,
    xi: &BogoliubovFunction<T>,
    n_pairs: usize,
) -> Result<FixedNumberBCS<T>> {
    let g = pairing_operator(space, xi)?;
    let mut psi = self_paired_filler(space, xi)?.apply(&space.vacuum());
    for _ in 0..n_pairs {
        psi = g.apply(&psi);
    }
    let norm = psi.norm();
    if norm < lit(1e-12) {
        return Err(WireError::InvalidParameter(format!(
            "{n_pairs} pairs do not fit on {} sites",
            space.n_sites()
        )));
    }
    psi /= cplx(norm, T::zero());
    let nop = space.total_number();
    let n_particles = to_f64((psi.adjoint() * nop.apply(&psi))[(0, 0)].re).round() as usize;
    let pairing = (0..xi.grid.len())
        .filter(|&j| xi.grid.partner(j) != j)
        .map(|j| (xi.grid.k(j), xi.v[j] / xi.u[j]))
        .collect();
    Ok(FixedNumberBCS {
        state: psi,
        pairing,
        n_particles,
    })
}

/// `Π_{self-paired} a_k† Π_{k>0} (u_k + e^{iθ} v_k a_{−k}† a_k†) |vac⟩`, normalized.
pub fn fixed_phase_state<T: Real>(space: &FockSpace<T>, xi: &BogoliubovFunction<T>, phase: T) -> Result<CVec<T>> {
    check_ring(space, xi)?;
    let mut psi = self_paired_filler(space, xi)?.apply(&space.vacuum());
    let e = polar(T::one(), phase);
    let id = FockOperator::identity(space.n_sites());
    let h = xi.grid.len() / 2;
    for j in h + 1..xi.grid.len() {
        let p = xi.grid.partner(j);
        let pair = &space.momentum_a(xi.grid.k(p)).dagger() * &space.momentum_a(xi.grid.k(j)).dagger();
        let factor = &id.scaled(xi.u[j]) + &pair.scaled(e * xi.v[j]);
        psi = factor.apply(&psi);
    }
    let n = psi.norm();
    if n < lit(1e-12) {
        return Err(WireError::PairingUndefined {
            k: to_f64(xi.grid.k::<T>(h)),
        });
    }
    Ok(psi / cplx(n, T::zero()))
}

/// `j_k = u_k a_k + v_k a_{−k}†` for every grid momentum.
pub fn momentum_jump_ops<T: Real>(space: &FockSpace<T>, xi: &BogoliubovFunction<T>) -> Result<Vec<FockOperator<T>>> {
    check_ring(space, xi)?;
    Ok((0..xi.grid.len())
        .map(|j| {
            let p = xi.grid.partner(j);
            let ak = space.momentum_a(xi.grid.k(j));
            let amk_dag = space.momentum_a(xi.grid.k(p)).dagger();
            &ak.scaled(xi.u[j]) + &amk_dag.scaled(xi.v[j])
        })
        .collect())
}

/// `max_k ‖j_k |ψ⟩‖` over a list of operators.
pub fn dark_residual<T: Real>(ops: &[FockOperator<T>], psi: &CVec<T>) -> T {
    ops.iter()
        .map(|o| o.apply(psi).norm())
        .fold(T::zero(), |a, b| if b > a { b } else { a })
}

/// Residual `max_k ‖j_k |BCS, θ = 0⟩‖` of the coherent-pairing state.
pub fn fixed_phase_dark_check<T: Real>(space: &FockSpace<T>, xi: &BogoliubovFunction<T>) -> Result<T> {
    let psi = fixed_phase_state(space, xi, T::zero())?;
    Ok(dark_residual(&momentum_jump_ops(space, xi)?, &psi))
}

/// `max_i ‖[J_i, G†] F‖` with `F` filling the self-paired modes; the
/// commutator vanishes on that subspace because `G†` omits them.
pub fn pairing_commutator_residual<T: Real>(
    space: &FockSpace<T>,
    xi: &BogoliubovFunction<T>,
    ops: &[FockOperator<T>],
) -> Result<T> {
    let g = pairing_operator(space, xi)?;
    let f = self_paired_filler(space, xi)?;
    Ok(ops
        .iter()
        .map(|j| (&j.commutator(&g) * &f).norm())
        .fold(T::zero(), |a, b| if b > a { b } else { a }))
}

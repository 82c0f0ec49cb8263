//! Majorana-basis bookkeeping for quadratic fermionic Lindblad models.
//!
//! Conventions used throughout the crate (Majorana indices are 1-based in
//! every public API):
//!
//! * `a_j = (i c_{2j-1} + c_{2j}) / 2`, so `c_{2j-1} = i(a_j† − a_j)` and
//!   `c_{2j} = a_j + a_j†`.
//! * `Γ_ab = (i/2) ⟨[c_a, c_b]⟩`; the empty site has `Γ_{2j-1,2j} = +1`.
//! * A jump operator `j = Σ_a l_a c_a` contributes `M_ab = conj(l_a) l_b`,
//!   `X = 2κ Re M`, `Y = 4κ Im M`, and the covariance obeys
//!   `∂_t Γ = [h, Γ] − {X, Γ} − Y`.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Result, WireError};
use crate::scalar::{czero, lit, to_f64, Real};

/// Default tolerance for antisymmetry and physicality checks.
pub const DEFAULT_PHYSICAL_TOL: f64 = 1e-9;

/// Sign of the Hamiltonian term in `∂_t Γ = s [h, Γ] − {X, Γ} − Y` for
/// `𝓗 = (i/4) Σ h_ab c_a c_b`. Calibrated against the Fock-space oracle.
pub const HAMILTONIAN_SIGN: f64 = 1.0;

/// Coefficient vector `l` of one jump operator `j = lᵀ c`.
#[derive(Debug, Clone, PartialEq)]
pub struct MajoranaVector<T: Real> {
    n_sites: usize,
    entries: DVector<Complex<T>>,
}

impl<T: Real> MajoranaVector<T> {
    pub fn new(n_sites: usize, entries: DVector<Complex<T>>) -> Result<Self> {
        if n_sites == 0 {
            return Err(WireError::InvalidParameter("n_sites must be positive".into()));
        }
        if entries.len() != 2 * n_sites {
            return Err(WireError::DimensionMismatch {
                expected: 2 * n_sites,
                found: entries.len(),
            });
        }
        Ok(Self { n_sites, entries })
    }

    pub fn zeros(n_sites: usize) -> Self {
        Self {
            n_sites,
            entries: DVector::from_element(2 * n_sites, czero()),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        2 * self.n_sites
    }

    pub fn entries(&self) -> &DVector<Complex<T>> {
        &self.entries
    }

    /// Entry `l_a` for a 1-based Majorana index.
    pub fn get(&self, a: usize) -> Complex<T> {
        self.entries[a - 1]
    }

    /// `Σ |l_a|²`; a canonical fermionic jump operator has `2‖l‖² = 1`.
    pub fn norm_squared(&self) -> T {
        self.entries.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b)
    }

    pub fn scaled(&self, factor: Complex<T>) -> Self {
        Self {
            n_sites: self.n_sites,
            entries: self.entries.map(|z| z * factor),
        }
    }

    /// Inverse of [`complex_to_majorana`]: `(α_j, β_j)` for every site.
    pub fn site_coefficients(&self) -> Vec<(Complex<T>, Complex<T>)> {
        let i = Complex::new(T::zero(), T::one());
        (0..self.n_sites)
            .map(|j| {
                let odd = self.entries[2 * j];
                let even = self.entries[2 * j + 1];
                (even - i * odd, even + i * odd)
            })
            .collect()
    }
}

/// Map `Σ_j (α_j a_j + β_j a_j†)` onto the Majorana basis.
///
/// `site_coeffs` holds `(j, α_j, β_j)` with 1-based sites; repeated sites
/// accumulate.
pub fn complex_to_majorana<T: Real>(
    n_sites: usize,
    site_coeffs: &[(usize, Complex<T>, Complex<T>)],
) -> Result<MajoranaVector<T>> {
    let mut v = MajoranaVector::zeros(n_sites);
    let half: T = lit(0.5);
    let i = Complex::new(T::zero(), T::one());
    for &(j, alpha, beta) in site_coeffs {
        if j == 0 || j > n_sites {
            return Err(WireError::SiteOutOfRange { index: j, n_sites });
        }
        let finite = [alpha.re, alpha.im, beta.re, beta.im]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(WireError::InvalidParameter(format!(
                "non-finite coefficient at site {j}"
            )));
        }
        v.entries[2 * j - 2] += i * (alpha - beta) * half;
        v.entries[2 * j - 1] += (alpha + beta) * half;
    }
    Ok(v)
}

/// Real antisymmetric `2N×2N` covariance matrix of a Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix<T: Real> {
    n_sites: usize,
    gamma: DMatrix<T>,
}

impl<T: Real> CovarianceMatrix<T> {
    /// Validates antisymmetry and physicality at [`DEFAULT_PHYSICAL_TOL`].
    pub fn new(gamma: DMatrix<T>) -> Result<Self> {
        Self::with_tolerance(gamma, lit(DEFAULT_PHYSICAL_TOL))
    }

    pub fn with_tolerance(gamma: DMatrix<T>, tol: T) -> Result<Self> {
        let cov = Self::from_antisymmetric(gamma, tol)?;
        purity_spectrum_tol(&cov, tol)?;
        Ok(cov)
    }

    /// Checks antisymmetry only; the result is exactly antisymmetrized.
    pub fn from_antisymmetric(gamma: DMatrix<T>, tol: T) -> Result<Self> {
        let (r, c) = gamma.shape();
        if r != c || r % 2 != 0 || r == 0 {
            return Err(WireError::DimensionMismatch {
                expected: r.max(2) + r % 2,
                found: c,
            });
        }
        let dev = antisymmetry_deviation(&gamma);
        if dev > tol {
            return Err(WireError::NotAntisymmetric {
                deviation: to_f64(dev),
            });
        }
        Ok(Self {
            n_sites: r / 2,
            gamma: antisymmetrize(&gamma),
        })
    }

    pub(crate) fn new_unchecked(gamma: DMatrix<T>) -> Self {
        let n_sites = gamma.nrows() / 2;
        Self { n_sites, gamma }
    }

    /// `Γ = 0`: the infinite-temperature state.
    pub fn maximally_mixed(n_sites: usize) -> Self {
        Self::new_unchecked(DMatrix::zeros(2 * n_sites, 2 * n_sites))
    }

    /// Every site empty.
    pub fn vacuum(n_sites: usize) -> Self {
        Self::product_state(&vec![false; n_sites])
    }

    /// Fock product state; `true` marks an occupied site.
    pub fn product_state(occupied: &[bool]) -> Self {
        let n = occupied.len();
        let mut g = DMatrix::zeros(2 * n, 2 * n);
        for (j, &occ) in occupied.iter().enumerate() {
            let v = if occ { -T::one() } else { T::one() };
            g[(2 * j, 2 * j + 1)] = v;
            g[(2 * j + 1, 2 * j)] = -v;
        }
        Self::new_unchecked(g)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        2 * self.n_sites
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.gamma
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.gamma
    }

    /// Entry for 1-based Majorana indices.
    pub fn get(&self, a: usize, b: usize) -> T {
        self.gamma[(a - 1, b - 1)]
    }

    pub fn is_pure(&self, tol: T) -> Result<bool> {
        let spec = purity_spectrum_tol(self, tol)?;
        Ok(spec.iter().all(|&e| (e + T::one()).abs() <= tol))
    }
}

/// Largest `|Γ + Γᵀ|` entry.
pub fn antisymmetry_deviation<T: Real>(m: &DMatrix<T>) -> T {
    let t = m.transpose();
    (m + t).amax()
}

pub(crate) fn antisymmetrize<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    (m - m.transpose()) * lit::<T>(0.5)
}

pub(crate) fn symmetrize<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    (m + m.transpose()) * lit::<T>(0.5)
}

/// Drift matrix `X` and fluctuation matrix `Y` of a quadratic Liouvillian.
#[derive(Debug, Clone, PartialEq)]
pub struct DampingPair<T: Real> {
    pub x: DMatrix<T>,
    pub y: DMatrix<T>,
    pub kappa: T,
}

impl<T: Real> DampingPair<T> {
    pub fn dim(&self) -> usize {
        self.x.nrows()
    }

    pub fn n_sites(&self) -> usize {
        self.x.nrows() / 2
    }

    /// Block-diagonal union of two independent systems.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n1, n2) = (self.dim(), other.dim());
        let mut x = DMatrix::zeros(n1 + n2, n1 + n2);
        let mut y = DMatrix::zeros(n1 + n2, n1 + n2);
        x.view_mut((0, 0), (n1, n1)).copy_from(&self.x);
        x.view_mut((n1, n1), (n2, n2)).copy_from(&other.x);
        y.view_mut((0, 0), (n1, n1)).copy_from(&self.y);
        y.view_mut((n1, n1), (n2, n2)).copy_from(&other.y);
        Self { x, y, kappa: self.kappa }
    }
}

/// Assemble `X = 2κ Re M`, `Y = 4κ Im M` with `M_ab = Σ_i conj(l_{i,a}) l_{i,b}`.
pub fn build_damping_matrices<T: Real>(
    n_sites: usize,
    vectors: &[MajoranaVector<T>],
    kappa: T,
) -> Result<DampingPair<T>> {
    if !(kappa > T::zero()) {
        return Err(WireError::InvalidParameter("kappa must be positive".into()));
    }
    let dim = 2 * n_sites;
    let mut m: DMatrix<Complex<T>> = DMatrix::from_element(dim, dim, czero());
    for l in vectors {
        if l.n_sites() != n_sites {
            return Err(WireError::DimensionMismatch {
                expected: n_sites,
                found: l.n_sites(),
            });
        }
        let e = l.entries();
        for a in 0..dim {
            let la = e[a].conj();
            if la == czero() {
                continue;
            }
            for b in 0..dim {
                m[(a, b)] += la * e[b];
            }
        }
    }
    let two: T = lit(2.0);
    let four: T = lit(4.0);
    let x = m.map(|z| z.re * two * kappa);
    let y = m.map(|z| z.im * four * kappa);
    Ok(DampingPair {
        x: symmetrize(&x),
        y: antisymmetrize(&y),
        kappa,
    })
}

/// Quadratic Hamiltonian `𝓗 = (i/4) Σ h_ab c_a c_b` with real antisymmetric `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian<T: Real> {
    h: DMatrix<T>,
}

impl<T: Real> QuadraticHamiltonian<T> {
    pub fn new(h: DMatrix<T>) -> Result<Self> {
        if h.nrows() != h.ncols() || !h.nrows().is_multiple_of(2) {
            return Err(WireError::DimensionMismatch {
                expected: h.nrows() + h.nrows() % 2,
                found: h.ncols(),
            });
        }
        let dev = antisymmetry_deviation(&h);
        if dev > lit(DEFAULT_PHYSICAL_TOL) {
            return Err(WireError::NotAntisymmetric {
                deviation: to_f64(dev),
            });
        }
        Ok(Self { h: antisymmetrize(&h) })
    }

    pub fn zeros(n_sites: usize) -> Self {
        Self {
            h: DMatrix::zeros(2 * n_sites, 2 * n_sites),
        }
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.h
    }

    /// Adds `amplitude · (a_i† a_j + a_j† a_i)` for 1-based sites `i ≠ j`.
    pub fn add_hopping(&mut self, i: usize, j: usize, amplitude: T) -> Result<()> {
        let n = self.h.nrows() / 2;
        for s in [i, j] {
            if s == 0 || s > n {
                return Err(WireError::SiteOutOfRange { index: s, n_sites: n });
            }
        }
        if i == j {
            return self.add_onsite(i, amplitude);
        }
        // a_i† a_j + h.c. = (i/2)(c_{2i} c_{2j-1} − c_{2i-1} c_{2j})
        let (oi, ei, oj, ej) = (2 * i - 2, 2 * i - 1, 2 * j - 2, 2 * j - 1);
        self.h[(ei, oj)] += amplitude;
        self.h[(oj, ei)] -= amplitude;
        self.h[(oi, ej)] -= amplitude;
        self.h[(ej, oi)] += amplitude;
        Ok(())
    }

    /// Adds `energy · a_i† a_i` (up to a constant shift).
    pub fn add_onsite(&mut self, i: usize, energy: T) -> Result<()> {
        let n = self.h.nrows() / 2;
        if i == 0 || i > n {
            return Err(WireError::SiteOutOfRange { index: i, n_sites: n });
        }
        // a†a = (1 − i c_{2i-1} c_{2i}) / 2
        let (o, e) = (2 * i - 2, 2 * i - 1);
        self.h[(o, e)] -= energy;
        self.h[(e, o)] += energy;
        Ok(())
    }
}

/// Sorted eigenvalues of `Γ²` at the default tolerance.
pub fn purity_spectrum<T: Real>(cov: &CovarianceMatrix<T>) -> Result<Vec<T>> {
    purity_spectrum_tol(cov, lit(DEFAULT_PHYSICAL_TOL))
}

pub fn purity_spectrum_tol<T: Real>(cov: &CovarianceMatrix<T>, tol: T) -> Result<Vec<T>> {
    let spec = gamma_squared_spectrum(cov.matrix());
    for &e in &spec {
        if e < -T::one() - tol || e > tol {
            return Err(WireError::NonPhysical {
                eigenvalue: to_f64(e),
            });
        }
    }
    Ok(spec)
}

pub(crate) fn gamma_squared_spectrum<T: Real>(g: &DMatrix<T>) -> Vec<T> {
    if g.nrows() == 0 {
        return Vec::new();
    }
    let sq = symmetrize(&(g * g));
    let mut ev: Vec<T> = SymmetricEigen::new(sq).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    ev
}

/// `⟨a_j† a_j⟩ = (1 − Γ_{2j-1,2j}) / 2` for a 1-based site.
pub fn occupation<T: Real>(cov: &CovarianceMatrix<T>, site: usize) -> Result<T> {
    if site == 0 || site > cov.n_sites() {
        return Err(WireError::SiteOutOfRange {
            index: site,
            n_sites: cov.n_sites(),
        });
    }
    let g = cov.get(2 * site - 1, 2 * site);
    Ok((T::one() - g) * lit(0.5))
}

/// Seeded random Gaussian state `Γ = O (⊕_p t_p J) Oᵀ` with `O` orthogonal
/// and `t_p ∈ (−1, 1)`; `J` is the 2×2 symplectic unit.
pub fn random_covariance<T: Real>(n_sites: usize, seed: u64) -> CovarianceMatrix<T> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let dim = 2 * n_sites;
    if dim == 0 {
        return CovarianceMatrix::new_unchecked(DMatrix::zeros(0, 0));
    }
    let g = DMatrix::from_fn(dim, dim, |_, _| lit::<T>(rng.random_range(-1.0..1.0)));
    let o = g.qr().q();
    let mut block = DMatrix::zeros(dim, dim);
    for p in 0..n_sites {
        let t: T = lit(rng.random_range(-0.999..0.999));
        block[(2 * p, 2 * p + 1)] = t;
        block[(2 * p + 1, 2 * p)] = -t;
    }
    CovarianceMatrix::new_unchecked(antisymmetrize(&(&o * block * o.transpose())))
}

/// Serializable summary used by the reporting layer.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SpectrumSummary {
    pub damping: Vec<f64>,
    pub purity: Vec<f64>,
}

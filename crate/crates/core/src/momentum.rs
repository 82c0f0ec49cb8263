//! Translation-invariant analysis on a periodic Brillouin-zone grid.
//!
//! A wire with jump operators `j_k = u_k a_k + v_k a_{−k}†` is described by
//! the Bogoliubov function `ξ_k = (u_k, v_k)`. From it follow the steady
//! state Bloch vector `n_k`, its chiral axis, the winding number, the
//! filling, momentum-resolved damping rates and the 4×4 equation of motion
//! for `N_k = (n_{0,k}, n_k)`.

use std::f64::consts::PI;

use nalgebra::{Complex, Matrix2, Matrix3, Matrix4, SymmetricEigen, Vector3, Vector4};

use crate::error::{Result, WireError};
use crate::integrate;
use crate::scalar::{cabs, cplx, from_usize, lit, polar, to_f64, Real};

/// Norm below which `n_k` counts as vanishing for the winding number.
pub const PURITY_FLOOR: f64 = 1e-6;

/// Agreement required between the three winding formulas.
pub const WINDING_TOL: f64 = 1e-6;

/// Uniform grid `k_j = −π + 2πj/L`, `j = 0..L`, with `−π ≡ π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BzGrid {
    l: usize,
}

impl BzGrid {
    /// Analysis grid; `L` even and at least 8.
    pub fn new(l: usize) -> Result<Self> {
        if l < 8 || !l.is_multiple_of(2) {
            return Err(WireError::InvalidParameter(format!(
                "grid size must be even and >= 8, got {l}"
            )));
        }
        Ok(Self { l })
    }

    /// Momenta of an `L`-site ring (`L` even, at least 2).
    pub fn ring(l: usize) -> Result<Self> {
        if l < 2 || !l.is_multiple_of(2) {
            return Err(WireError::InvalidParameter(format!(
                "ring size must be even and >= 2, got {l}"
            )));
        }
        Ok(Self { l })
    }

    pub fn len(&self) -> usize {
        self.l
    }

    pub fn is_empty(&self) -> bool {
        self.l == 0
    }

    pub fn k<T: Real>(&self, j: usize) -> T {
        lit::<T>(-PI) + lit::<T>(2.0 * PI) * from_usize::<T>(j) / from_usize::<T>(self.l)
    }

    /// Index of `−k_j`.
    pub fn partner(&self, j: usize) -> usize {
        (self.l - j) % self.l
    }

    /// Number of stored non-negative momenta `0, 2π/L, …, π`.
    pub fn half_len(&self) -> usize {
        self.l / 2 + 1
    }

    /// Full-grid index of the non-negative momentum `2πm/L`.
    pub fn half_to_full(&self, m: usize) -> usize {
        (self.l / 2 + m) % self.l
    }

    /// `k = 2πm/L` for `m = 0..=L/2`.
    pub fn half_k<T: Real>(&self, m: usize) -> T {
        lit::<T>(2.0 * PI) * from_usize::<T>(m) / from_usize::<T>(self.l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family<T: Real> {
    Canonical,
    NonCanonical,
    /// Ideal wire with a next-nearest-neighbour admixture `ε`.
    Imperfect(T),
}

/// `ξ_k = (u_k, v_k)` sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovFunction<T: Real> {
    pub grid: BzGrid,
    pub u: Vec<Complex<T>>,
    pub v: Vec<Complex<T>>,
    pub family: Family<T>,
    pub theta: T,
    pub phi: T,
}

impl<T: Real> BogoliubovFunction<T> {
    /// Arbitrary sampled pairing function.
    pub fn from_samples(grid: BzGrid, u: Vec<Complex<T>>, v: Vec<Complex<T>>) -> Result<Self> {
        if u.len() != grid.len() || v.len() != grid.len() {
            return Err(WireError::DimensionMismatch {
                expected: grid.len(),
                found: u.len().min(v.len()),
            });
        }
        if u.iter().chain(&v).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(WireError::InvalidParameter("u_k and v_k must be finite".into()));
        }
        Ok(Self {
            grid,
            u,
            v,
            family: Family::Imperfect(T::zero()),
            theta: lit(PI / 4.0),
            phi: T::zero(),
        })
    }

    pub fn norm_squared(&self, j: usize) -> T {
        self.u[j].norm_sqr() + self.v[j].norm_sqr()
    }

    /// `ξ†σ^μξ` for μ = 0, x, y, z.
    pub fn raw_bloch(&self, j: usize) -> [T; 4] {
        let (u, v) = (self.u[j], self.v[j]);
        let uv = u.conj() * v;
        let two: T = lit(2.0);
        [
            u.norm_sqr() + v.norm_sqr(),
            two * uv.re,
            two * uv.im,
            u.norm_sqr() - v.norm_sqr(),
        ]
    }

    /// `κ_k = (|ξ_k|² + |ξ_{−k}|²)/2`.
    pub fn kappa(&self, j: usize) -> T {
        (self.norm_squared(j) + self.norm_squared(self.grid.partner(j))) * lit(0.5)
    }
}

/// Literal evaluation of the deformed pairing functions.
pub fn xi_deformed<T: Real>(family: Family<T>, theta: T, phi: T, grid: BzGrid) -> Result<BogoliubovFunction<T>> {
    if !theta.is_finite() || !phi.is_finite() {
        return Err(WireError::InvalidParameter("theta and phi must be finite".into()));
    }
    let half: T = lit(0.5);
    let sqrt2: T = lit(std::f64::consts::SQRT_2);
    let isq2: T = lit(std::f64::consts::FRAC_1_SQRT_2);
    let i = cplx(T::zero(), T::one());
    let phase = polar(T::one(), phi);
    let (st, ct) = (theta.sin(), theta.cos());
    let mut u = Vec::with_capacity(grid.len());
    let mut v = Vec::with_capacity(grid.len());
    for j in 0..grid.len() {
        let k: T = grid.k(j);
        let (sh, ch) = ((k * half).sin(), (k * half).cos());
        let (uk, vk) = match family {
            Family::Canonical => (
                -i * phase * (sqrt2 * st * sh),
                cplx(sqrt2 * ct * ch, T::zero()),
            ),
            Family::NonCanonical => {
                let ep = polar(T::one(), k * half);
                let em = ep.conj();
                (
                    phase * (em * ct - ep * st) * isq2,
                    (ep * ct + em * st) * isq2,
                )
            }
            Family::Imperfect(eps) => {
                let c3 = (k * lit(1.5)).cos();
                let nk = T::one() + lit::<T>(2.0) * eps * ch * c3 + eps * eps * c3 * c3;
                if !(nk > T::zero()) {
                    return Err(WireError::InvalidParameter(format!(
                        "imperfect pairing normalization vanishes at k = {}",
                        to_f64(k)
                    )));
                }
                let r = nk.sqrt();
                (i * (sh / r), cplx((ch + eps * c3) / r, T::zero()))
            }
        };
        u.push(uk);
        v.push(vk);
    }
    Ok(BogoliubovFunction {
        grid,
        u,
        v,
        family,
        theta,
        phi,
    })
}

/// `u_k v_{−k} + u_{−k} v_k = 0` and `ξ_k†ξ_k > 0` on every grid point.
pub fn is_quasi_canonical<T: Real>(xi: &BogoliubovFunction<T>, tol: T) -> bool {
    (0..xi.grid.len()).all(|j| {
        let p = xi.grid.partner(j);
        let c = xi.u[j] * xi.v[p] + xi.u[p] * xi.v[j];
        cabs(c) <= tol && xi.norm_squared(j) > tol
    })
}

fn s_z<T: Real>(n: &Vector3<T>) -> Vector3<T> {
    Vector3::new(-n.x, -n.y, n.z)
}

/// Steady-state Bloch vectors, stored for `k ∈ [0, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochField<T: Real> {
    pub grid: BzGrid,
    half: Vec<Vector3<T>>,
    half_kappa: Vec<T>,
}

impl<T: Real> BlochField<T> {
    /// Field from explicit values at `k = 2πm/L`, `m = 0..=L/2`.
    pub fn from_half(grid: BzGrid, n: Vec<Vector3<T>>, kappa: Vec<T>) -> Result<Self> {
        if n.len() != grid.half_len() || kappa.len() != grid.half_len() {
            return Err(WireError::DimensionMismatch {
                expected: grid.half_len(),
                found: n.len(),
            });
        }
        let tol: T = lit(1e-9);
        for (m, v) in n.iter().enumerate() {
            if v.norm() > T::one() + tol {
                return Err(WireError::InvalidParameter(format!("|n_k| > 1 at half index {m}")));
            }
        }
        for m in [0, grid.half_len() - 1] {
            if n[m].x.abs() > tol || n[m].y.abs() > tol {
                return Err(WireError::InvalidParameter(
                    "n_k at k = 0 and k = pi must point along z".into(),
                ));
            }
        }
        Ok(Self {
            grid,
            half: n,
            half_kappa: kappa,
        })
    }

    /// `n_k` at full-grid index `j`, with `n_{−k} = S_z n_k`.
    pub fn n(&self, j: usize) -> Vector3<T> {
        let h = self.grid.len() / 2;
        if j >= h {
            self.half[j - h]
        } else if j == 0 {
            self.half[h]
        } else {
            s_z(&self.half[h - j])
        }
    }

    pub fn kappa(&self, j: usize) -> T {
        let h = self.grid.len() / 2;
        if j >= h {
            self.half_kappa[j - h]
        } else {
            self.half_kappa[h - j]
        }
    }

    pub fn half(&self) -> &[Vector3<T>] {
        &self.half
    }

    pub fn full(&self) -> Vec<Vector3<T>> {
        (0..self.grid.len()).map(|j| self.n(j)).collect()
    }
}

/// `m_{μ,k} = ξ_k†σ^μξ_k / κ_k`, failing on undamped modes.
fn normalized_bloch<T: Real>(xi: &BogoliubovFunction<T>, j: usize) -> Result<(T, [T; 4])> {
    let kappa = xi.kappa(j);
    if !(kappa > lit(1e-12)) {
        return Err(WireError::UndampedMode {
            k: to_f64(xi.grid.k::<T>(j)),
            rate: to_f64(kappa),
        });
    }
    let raw = xi.raw_bloch(j);
    Ok((kappa, raw.map(|x| x / kappa)))
}

/// `n_k = ½(m_{x,k} − m_{x,−k}, m_{y,k} − m_{y,−k}, m_{z,k} + m_{z,−k})`.
pub fn steady_bloch<T: Real>(xi: &BogoliubovFunction<T>) -> Result<BlochField<T>> {
    let grid = xi.grid;
    let half: T = lit(0.5);
    let mut n = Vec::with_capacity(grid.half_len());
    let mut kap = Vec::with_capacity(grid.half_len());
    for m in 0..grid.half_len() {
        let jp = grid.half_to_full(m);
        let jm = grid.partner(jp);
        let (kappa, a) = normalized_bloch(xi, jp)?;
        let (_, b) = normalized_bloch(xi, jm)?;
        n.push(Vector3::new((a[1] - b[1]) * half, (a[2] - b[2]) * half, (a[3] + b[3]) * half));
        kap.push(kappa);
    }
    // k = 0 and k = π are their own partners; clear rounding residue.
    let last = grid.half_len() - 1;
    for m in [0, last] {
        n[m].x = T::zero();
        n[m].y = T::zero();
    }
    Ok(BlochField {
        grid,
        half: n,
        half_kappa: kap,
    })
}

/// Direction `a` with `a · n_k = 0` for every `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiralAxis<T: Real> {
    pub a: Vector3<T>,
    pub max_violation: T,
}

pub fn chiral_axis<T: Real>(field: &BlochField<T>, tol: T) -> Result<ChiralAxis<T>> {
    let full = field.full();
    let nmax = full.iter().fold(T::zero(), |m, n| if n.norm() > m { n.norm() } else { m });
    if nmax == T::zero() {
        return Err(WireError::NotChiral("all n_k vanish".into()));
    }
    let mut s = Matrix3::zeros();
    for n in &full {
        s += n * n.transpose();
    }
    let eig = SymmetricEigen::new(s);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).expect("finite"));
    let (l0, l1, l2) = (
        eig.eigenvalues[order[0]],
        eig.eigenvalues[order[1]],
        eig.eigenvalues[order[2]],
    );
    if l1 - l0 <= lit::<T>(1e-9) * l2 {
        return Err(WireError::NotChiral("axis not unique".into()));
    }
    let mut a: Vector3<T> = eig.eigenvectors.column(order[0]).into_owned();
    a /= a.norm();
    let first = (0..3).find(|&i| a[i].abs() > lit(1e-12)).unwrap_or(0);
    if a[first] < T::zero() {
        a = -a;
    }
    let violation = full.iter().fold(T::zero(), |m, n| {
        let d = a.dot(n).abs();
        if d > m {
            d
        } else {
            m
        }
    });
    if violation > tol * nmax {
        return Err(WireError::NotChiral(format!(
            "n_k leaves the plane normal to a by {}",
            to_f64(violation)
        )));
    }
    Ok(ChiralAxis {
        a,
        max_violation: violation,
    })
}

/// Winding of `n̂_k` about the chiral axis by three independent formulas.
#[derive(Debug, Clone, PartialEq)]
pub struct WindingReport<T: Real> {
    pub nu: i64,
    /// Accumulated projected angle over 2π.
    pub angle: T,
    /// `(1/2π) ∮ a · (n̂ × ∂_k n̂) dk`.
    pub line_integral: T,
    /// `(1/4πi) ∮ tr(Σ Q ∂_k Q) dk` with `Q = n̂·σ`, `Σ = a·σ`.
    pub q_trace: T,
    /// Largest disagreement among the three.
    pub residual: T,
}

/// Periodic eighth-order central derivative on a uniform grid.
fn periodic_derivative<V, T, S>(f: &[V], h: T, scale: S) -> Vec<V>
where
    T: Real,
    V: Copy + std::ops::Sub<Output = V> + std::ops::Add<Output = V>,
    S: Fn(V, T) -> V,
{
    let c: [T; 4] = [lit(4.0 / 5.0), lit(-1.0 / 5.0), lit(4.0 / 105.0), lit(-1.0 / 280.0)];
    let l = f.len();
    (0..l)
        .map(|j| {
            let mut acc = scale(f[(j + 1) % l] - f[(j + l - 1) % l], c[0]);
            for (m, &cm) in c.iter().enumerate().skip(1) {
                let d = m + 1;
                acc = acc + scale(f[(j + d) % l] - f[(j + l * d - d) % l], cm);
            }
            scale(acc, T::one() / h)
        })
        .collect()
}

fn pauli<T: Real>(v: &Vector3<T>) -> Matrix2<Complex<T>> {
    let z = T::zero();
    Matrix2::new(
        cplx(v.z, z),
        cplx(v.x, -v.y),
        cplx(v.x, v.y),
        cplx(-v.z, z),
    )
}

pub fn winding_number<T: Real>(field: &BlochField<T>, axis: &ChiralAxis<T>) -> Result<WindingReport<T>> {
    let grid = field.grid;
    let l = grid.len();
    let full = field.full();
    let floor: T = lit(PURITY_FLOOR);
    for (j, n) in full.iter().enumerate() {
        if n.norm() <= floor {
            return Err(WireError::InvariantUndefined {
                k: to_f64(grid.k::<T>(j)),
                norm: to_f64(n.norm()),
            });
        }
    }
    let a = axis.a;
    let two_pi: T = lit(2.0 * PI);

    // Plane basis with e1 × e2 = a.
    let mut least = 0;
    for i in 1..3 {
        if a[i].abs() < a[least].abs() {
            least = i;
        }
    }
    let mut e1 = Vector3::zeros();
    e1[least] = T::one();
    e1 -= a * a.dot(&e1);
    e1 /= e1.norm();
    let e2 = a.cross(&e1);

    let angles: Vec<T> = full.iter().map(|n| n.dot(&e2).atan2(n.dot(&e1))).collect();
    let pi: T = lit(PI);
    let mut total = T::zero();
    for j in 0..l {
        let mut d = angles[(j + 1) % l] - angles[j];
        while d > pi {
            d -= two_pi;
        }
        while d <= -pi {
            d += two_pi;
        }
        total += d;
    }
    let angle = total / two_pi;

    let h = two_pi / from_usize(l);
    let unit: Vec<Vector3<T>> = full.iter().map(|n| n / n.norm()).collect();
    let dn = periodic_derivative(&unit, h, |v, c| v * c);
    let line_integral = unit
        .iter()
        .zip(&dn)
        .fold(T::zero(), |s, (n, d)| s + a.dot(&n.cross(d)))
        * h
        / two_pi;

    let sigma = pauli(&a);
    let q: Vec<Matrix2<Complex<T>>> = unit.iter().map(pauli).collect();
    let dq = periodic_derivative(&q, h, |m, c| m.map(|z| z * c));
    let tr = q
        .iter()
        .zip(&dq)
        .fold(Complex::new(T::zero(), T::zero()), |s, (qk, dk)| s + (sigma * qk * dk).trace());
    // tr/(4πi) · h
    let q_trace = (tr * cplx(T::zero(), -T::one())).re * h / (two_pi * lit(2.0));

    let residual = [
        (angle - angle.round()).abs(),
        (line_integral - angle).abs(),
        (q_trace - angle).abs(),
    ]
    .into_iter()
    .fold(T::zero(), |m, x| if x > m { x } else { m });
    if residual > lit(WINDING_TOL) {
        return Err(WireError::GridTooCoarse {
            residual: to_f64(residual),
        });
    }
    Ok(WindingReport {
        nu: to_f64(angle.round()) as i64,
        angle,
        line_integral,
        q_trace,
        residual,
    })
}

/// Mean occupation `n̄` and per-k `n̄_k = ½(1 − n_{z,k})` on the full grid.
pub fn filling<T: Real>(field: &BlochField<T>) -> (T, Vec<T>) {
    let half: T = lit(0.5);
    let per_k: Vec<T> = field.full().iter().map(|n| (T::one() - n.z) * half).collect();
    // Trapezoidal rule on a periodic grid is the plain mean.
    let mean = per_k.iter().fold(T::zero(), |a, &b| a + b) / from_usize(per_k.len());
    (mean, per_k)
}

/// Per-k model vectors of the momentum-space equation of motion, stored for
/// `k ∈ [0, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumModel<T: Real> {
    pub grid: BzGrid,
    pub kappa: Vec<T>,
    pub m_s: Vec<Vector4<T>>,
    pub m_a: Vec<Vector3<T>>,
}

pub fn momentum_model<T: Real>(xi: &BogoliubovFunction<T>) -> Result<MomentumModel<T>> {
    let grid = xi.grid;
    let half: T = lit(0.5);
    let mut kappa = Vec::with_capacity(grid.half_len());
    let mut m_s = Vec::with_capacity(grid.half_len());
    let mut m_a = Vec::with_capacity(grid.half_len());
    for m in 0..grid.half_len() {
        let jp = grid.half_to_full(m);
        let jm = grid.partner(jp);
        let (kp, a) = normalized_bloch(xi, jp)?;
        let (_, b) = normalized_bloch(xi, jm)?;
        kappa.push(kp);
        m_s.push(Vector4::new(
            (a[0] - b[0]) * half,
            (a[1] - b[1]) * half,
            (a[2] - b[2]) * half,
            (a[3] + b[3]) * half,
        ));
        m_a.push(Vector3::new((a[1] + b[1]) * half, (a[2] + b[2]) * half, (a[3] - b[3]) * half));
    }
    Ok(MomentumModel { grid, kappa, m_s, m_a })
}

impl<T: Real> MomentumModel<T> {
    /// `A_k = [[0, m^aᵀ], [m^a, 0]]`.
    pub fn a_matrix(&self, m: usize) -> Matrix4<T> {
        let v = self.m_a[m];
        let mut a = Matrix4::zeros();
        for i in 0..3 {
            a[(0, i + 1)] = v[i];
            a[(i + 1, 0)] = v[i];
        }
        a
    }

    /// `L_k = κ_k(𝟙 + A_k)`.
    pub fn eom_matrix(&self, m: usize) -> Matrix4<T> {
        (Matrix4::identity() + self.a_matrix(m)) * self.kappa[m]
    }

    /// `(λ¹, λ², λ³, λ⁴) = κ_k (1, 1, 1 + |m^a|, 1 − |m^a|)`.
    pub fn rates(&self, m: usize) -> [T; 4] {
        let k = self.kappa[m];
        let a = self.m_a[m].norm();
        [k, k, k * (T::one() + a), k * (T::one() - a)]
    }

    pub fn max_rate(&self) -> T {
        (0..self.grid.half_len())
            .map(|m| self.rates(m)[2])
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Fixed point `N_k = (𝟙 + A_k)^{−1} M^s_k`.
    pub fn steady_state(&self) -> Result<MomentumState<T>> {
        let mut n = Vec::with_capacity(self.grid.half_len());
        for m in 0..self.grid.half_len() {
            let lhs = Matrix4::identity() + self.a_matrix(m);
            let sol = lhs.lu().solve(&self.m_s[m]).ok_or(WireError::UndampedMode {
                k: to_f64(self.grid.half_k::<T>(m)),
                rate: to_f64(self.rates(m)[3]),
            })?;
            n.push(sol);
        }
        Ok(MomentumState { grid: self.grid, n })
    }
}

/// Per-k rates on the full grid.
pub fn momentum_damping<T: Real>(xi: &BogoliubovFunction<T>) -> Result<Vec<[T; 4]>> {
    let model = momentum_model(xi)?;
    let h = xi.grid.len() / 2;
    Ok((0..xi.grid.len())
        .map(|j| model.rates(j.abs_diff(h)))
        .collect())
}

/// `N_k = (n_{0,k}, n_k)` for `k ∈ [0, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumState<T: Real> {
    pub grid: BzGrid,
    pub n: Vec<Vector4<T>>,
}

impl<T: Real> MomentumState<T> {
    /// Infinite-temperature state `N_k = 0`.
    pub fn zeros(grid: BzGrid) -> Self {
        Self {
            grid,
            n: vec![Vector4::zeros(); grid.half_len()],
        }
    }

    pub fn max_difference(&self, other: &Self) -> T {
        self.n
            .iter()
            .zip(&other.n)
            .fold(T::zero(), |m, (a, b)| {
                let d = (a - b).amax();
                if d > m {
                    d
                } else {
                    m
                }
            })
    }

    /// `max_k |n_{0,k} − (m^s_{0,k} − n_k · m^a_k)|`.
    pub fn redundancy_residual(&self, model: &MomentumModel<T>) -> T {
        self.n.iter().enumerate().fold(T::zero(), |acc, (m, nk)| {
            let v = Vector3::new(nk[1], nk[2], nk[3]);
            let d = (nk[0] - (model.m_s[m][0] - v.dot(&model.m_a[m]))).abs();
            if d > acc {
                d
            } else {
                acc
            }
        })
    }
}

fn check_state_grid<T: Real>(model: &MomentumModel<T>, state: &MomentumState<T>) -> Result<()> {
    if state.grid != model.grid {
        return Err(WireError::DimensionMismatch {
            expected: model.grid.len(),
            found: state.grid.len(),
        });
    }
    Ok(())
}

/// RK4 integration of `∂_t N_k = −κ_k((𝟙 + A_k)N_k − M^s_k)` for every k.
pub fn momentum_evolve<T: Real>(
    xi: &BogoliubovFunction<T>,
    initial: &MomentumState<T>,
    t: T,
    dt: T,
) -> Result<MomentumState<T>> {
    let model = momentum_model(xi)?;
    check_state_grid(&model, initial)?;
    if !(dt > T::zero()) {
        return Err(WireError::InvalidParameter("dt must be positive".into()));
    }
    let product = dt * model.max_rate();
    if product >= lit(crate::liouville::STEP_GUARD) {
        return Err(WireError::StepSizeGuard {
            product: to_f64(product),
            limit: crate::liouville::STEP_GUARD,
        });
    }
    let mut out = Vec::with_capacity(initial.n.len());
    for (m, n0) in initial.n.iter().enumerate() {
        let l = nalgebra::DMatrix::from_fn(4, 4, |r, c| model.eom_matrix(m)[(r, c)]);
        let src = nalgebra::DMatrix::from_fn(4, 1, |r, _| model.m_s[m][r] * model.kappa[m]);
        let mut f = |_t: T, y: &nalgebra::DMatrix<T>| Ok(&src - &l * y);
        let mut noop = |_t: T, _y: &mut nalgebra::DMatrix<T>| Ok(());
        let y0 = nalgebra::DMatrix::from_fn(4, 1, |r, _| n0[r]);
        let y = integrate::integrate(T::zero(), y0, t, dt, &mut f, &mut noop)?;
        out.push(Vector4::new(y[0], y[1], y[2], y[3]));
    }
    Ok(MomentumState {
        grid: initial.grid,
        n: out,
    })
}

/// Closed form `N_k(t) = e^{−L_k t}N_k(0) + (𝟙 − e^{−L_k t}) L_k^{−1} κ_k M^s_k`.
pub fn momentum_solution<T: Real>(xi: &BogoliubovFunction<T>, initial: &MomentumState<T>, t: T) -> Result<MomentumState<T>> {
    let model = momentum_model(xi)?;
    check_state_grid(&model, initial)?;
    let mut out = Vec::with_capacity(initial.n.len());
    for (m, n0) in initial.n.iter().enumerate() {
        let eig = SymmetricEigen::new(model.eom_matrix(m));
        let q = eig.eigenvectors;
        let src = q.transpose() * (model.m_s[m] * model.kappa[m]);
        let y0 = q.transpose() * n0;
        let mut y = Vector4::zeros();
        for r in 0..4 {
            let lam = eig.eigenvalues[r];
            let e = (-lam * t).exp();
            // (1 − e^{−λt})/λ → t as λ → 0.
            let g = if lam.abs() > lit(1e-14) { (T::one() - e) / lam } else { t };
            y[r] = e * y0[r] + g * src[r];
        }
        out.push(q * y);
    }
    Ok(MomentumState {
        grid: initial.grid,
        n: out,
    })
}

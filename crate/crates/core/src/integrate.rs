//! Classical fixed-step fourth-order Runge–Kutta for dense matrix ODEs.

use nalgebra::{ComplexField, DMatrix};

use crate::error::Result;
use crate::scalar::{lit, Real};

/// One RK4 step of `dy/dt = f(t, y)`.
pub fn rk4_step<S, F>(t: S::RealField, y: &DMatrix<S>, h: S::RealField, f: &mut F) -> Result<DMatrix<S>>
where
    S: ComplexField + Copy,
    S::RealField: Real,
    F: FnMut(S::RealField, &DMatrix<S>) -> Result<DMatrix<S>>,
{
    let half: S::RealField = lit(0.5);
    let sixth = S::from_real(lit::<S::RealField>(1.0 / 6.0) * h);
    let two = S::from_real(lit(2.0));
    let hh = S::from_real(h * half);
    let k1 = f(t, y)?;
    let k2 = f(t + h * half, &(y + &k1 * hh))?;
    let k3 = f(t + h * half, &(y + &k2 * hh))?;
    let k4 = f(t + h, &(y + &k3 * S::from_real(h)))?;
    Ok(y + (k1 + (k2 + k3) * two + k4) * sixth)
}

/// Number of uniform substeps of size at most `dt` covering `span`.
pub fn substeps<T: Real>(span: T, dt: T) -> usize {
    if span <= T::zero() {
        return 0;
    }
    let ratio = span / dt;
    let n = (ratio - lit(1e-9)).ceil();
    crate::scalar::to_f64(n).max(1.0) as usize
}

/// Integrate from `t0` to `t1` in uniform steps no longer than `dt`,
/// calling `after_step` once per completed step.
pub fn integrate<S, F, G>(
    t0: S::RealField,
    y0: DMatrix<S>,
    t1: S::RealField,
    dt: S::RealField,
    f: &mut F,
    after_step: &mut G,
) -> Result<DMatrix<S>>
where
    S: ComplexField + Copy,
    S::RealField: Real,
    F: FnMut(S::RealField, &DMatrix<S>) -> Result<DMatrix<S>>,
    G: FnMut(S::RealField, &mut DMatrix<S>) -> Result<()>,
{
    let n = substeps(t1 - t0, dt);
    if n == 0 {
        return Ok(y0);
    }
    let h = (t1 - t0) / crate::scalar::from_usize(n);
    let mut y = y0;
    for step in 0..n {
        let t = t0 + h * crate::scalar::from_usize(step);
        y = rk4_step(t, &y, h, f)?;
        after_step(t + h, &mut y)?;
    }
    Ok(y)
}

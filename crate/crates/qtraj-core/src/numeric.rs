//! Small numerical building blocks: angle continuation, quadrature,
//! finite-difference stencils and root finding.
//!
//! Finite differences here exist only for the energy derivative mandated by
//! the trajectory equations; spatial derivatives everywhere else come from
//! closed forms or the differential equation itself.

use crate::error::{Error, Result};

use std::f64::consts::PI;

/// Reduce an angle increment to the principal interval (-pi, pi].
pub(crate) fn wrap_angle(d: f64) -> f64 {
    let mut w = d % (2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    } else if w <= -PI {
        w += 2.0 * PI;
    }
    w
}

/// Track the continuous polar angle of a planar curve `x -> (X(x), Y(x))`
/// from `from` to `to` and return the accumulated change.
///
/// Steps adapt so that no single increment exceeds ~0.45 pi, which keeps the
/// principal-value differences unambiguous. `init_steps` seeds the step size
/// (callers pass an estimate based on the local wavenumber).
pub(crate) fn angle_change<F>(mut eval: F, from: f64, to: f64, init_steps: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    if from == to {
        return Ok(0.0);
    }
    let n0 = init_steps.max(8) as f64;
    let dir = if to > from { 1.0 } else { -1.0 };
    let mut step = (to - from).abs() / n0;
    let min_step = (to - from).abs() * 1e-14 + f64::MIN_POSITIVE;

    let (x0, y0) = eval(from)?;
    let mut prev = y0.atan2(x0);
    let mut x = from;
    let mut acc = 0.0;

    while (to - x) * dir > 0.0 {
        let remaining = (to - x).abs();
        let h = step.min(remaining);
        let xn = if h == remaining { to } else { x + dir * h };
        let (cx, cy) = eval(xn)?;
        if cx == 0.0 && cy == 0.0 {
            return Err(Error::Numerical {
                context: "angle tracking hit a common zero of the solution pair".into(),
                x: xn,
            });
        }
        let ang = cy.atan2(cx);
        let delta = wrap_angle(ang - prev);
        if delta.abs() > 0.45 * PI {
            step = h / 2.0;
            if step < min_step {
                return Err(Error::Numerical {
                    context: "angle tracking step underflow".into(),
                    x: xn,
                });
            }
            continue;
        }
        acc += delta;
        prev = ang;
        x = xn;
        if delta.abs() < 0.15 * PI {
            step *= 1.5;
        }
    }
    Ok(acc)
}

/// Five-point central first derivative with step `h`:
/// `[f(x-2h) - 8 f(x-h) + 8 f(x+h) - f(x+2h)] / (12 h)`.
/// Only exercised by tests as an independent probe of analytic derivatives.
#[cfg(test)]
pub(crate) fn five_point_derivative<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let m2 = f(x - 2.0 * h)?;
    let m1 = f(x - h)?;
    let p1 = f(x + h)?;
    let p2 = f(x + 2.0 * h)?;
    Ok((m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h))
}

/// Adaptive Simpson quadrature with an absolute tolerance.
///
/// The interval is pre-split into `panels` equal panels (oscillatory
/// integrands need a resolved starting partition); each panel then refines
/// recursively with the usual S(a,b) vs S(a,m)+S(m,b) estimate.
pub(crate) fn adaptive_simpson<F>(f: &mut F, a: f64, b: f64, abs_tol: f64, panels: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    assert!(b > a, "adaptive_simpson needs an ordered interval");
    let n = panels.max(1);
    let w = (b - a) / n as f64;
    let tol = abs_tol / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let lo = a + i as f64 * w;
        let hi = if i == n - 1 { b } else { lo + w };
        let flo = f(lo)?;
        let fmid = f(0.5 * (lo + hi))?;
        let fhi = f(hi)?;
        let s = simpson_rule(lo, hi, flo, fmid, fhi);
        total += simpson_refine(f, lo, hi, flo, fmid, fhi, s, tol, 48)?;
    }
    Ok(total)
}

fn simpson_rule(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_refine<F>(f: &mut F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = simpson_rule(a, m, fa, flm, fm);
    let right = simpson_rule(m, b, fm, frm, fb);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol || b - a < 1e-14 * (a.abs() + b.abs() + 1.0) {
        return Ok(left + right + err / 15.0);
    }
    if depth == 0 {
        return Err(Error::Numerical {
            context: "adaptive quadrature exceeded maximum refinement depth".into(),
            x: m,
        });
    }
    let l = simpson_refine(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?;
    let r = simpson_refine(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?;
    Ok(l + r)
}

/// Composite Simpson rule over `n` (even) uniform panels; used where the
/// sampling density, not an error estimate, is the controlled quantity.
pub(crate) fn composite_simpson<F>(f: &mut F, a: f64, b: f64, n: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    assert!(n >= 2 && n.is_multiple_of(2), "composite_simpson needs an even panel count");
    let h = (b - a) / n as f64;
    let mut acc = f(a)? + f(b)?;
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h)?;
    }
    Ok(acc * h / 3.0)
}

/// Find the root of a strictly increasing function on [lo, hi] by bisection
/// with secant acceleration. `f(lo)` and `f(hi)` must straddle zero.
pub(crate) fn root_increasing<F>(mut f: F, mut lo: f64, mut hi: f64, f_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut flo = f(lo)?;
    let mut fhi = f(hi)?;
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::Numerical {
            context: "root bracket does not straddle zero".into(),
            x: lo,
        });
    }
    if flo.abs() <= f_tol {
        return Ok(lo);
    }
    if fhi.abs() <= f_tol {
        return Ok(hi);
    }
    for _ in 0..200 {
        // Secant proposal, clamped into the central 80% of the bracket so a
        // flat side cannot stall progress; otherwise bisect.
        let mid = 0.5 * (lo + hi);
        let mut x = if fhi != flo {
            lo - flo * (hi - lo) / (fhi - flo)
        } else {
            mid
        };
        let guard = 0.1 * (hi - lo);
        if !(x > lo + guard && x < hi - guard) {
            x = mid;
        }
        let fx = f(x)?;
        if fx.abs() <= f_tol || hi - lo < 4.0 * f64::EPSILON * (x.abs() + 1.0) {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    Err(Error::Numerical {
        context: "root refinement did not converge".into(),
        x: 0.5 * (lo + hi),
    })
}

//! Root bracketing, Brent refinement, and adaptive quadrature used by the
//! eigenmode solvers.

use crate::error::Error;
use crate::math as m;

use alloc::vec::Vec;

/// Relative tolerance used everywhere a mode frequency is refined.
pub const ROOT_REL_TOL: f64 = 1e-12;

/// Brent-Dekker refinement of a bracketed root of `f` on `[a, b]`.
///
/// Requires f(a)·f(b) ≤ 0. Converges to a relative width of `rel_tol`.
pub fn brent(
    f: impl Fn(f64) -> f64,
    a0: f64,
    b0: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Result<f64, Error> {
    let mut a = a0;
    let mut b = b0;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::RootNotBracketed { lo: a0, hi: b0 });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..max_iter {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if m::fabs(fc) < m::fabs(fb) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * m::fabs(b) + 0.5 * rel_tol * m::fabs(b).max(f64::MIN_POSITIVE);
        let xm = 0.5 * (c - b);
        if m::fabs(xm) <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if m::fabs(e) >= tol1 && m::fabs(fa) > m::fabs(fb) {
            // inverse quadratic interpolation, falling back to secant
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * q0 * (q0 - r) - (b - a) * (r - 1.0));
                q = (q0 - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = m::fabs(p);
            let min1 = 3.0 * xm * q - m::fabs(tol1 * q);
            let min2 = m::fabs(e * q);
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if m::fabs(d) > tol1 {
            b += d;
        } else {
            b += if xm >= 0.0 { tol1 } else { -tol1 };
        }
        fb = f(b);
        if fb == 0.0 {
            return Ok(b);
        }
    }
    Ok(b)
}

/// Damped fixed-point iteration x ← g(x) to relative tolerance `rel_tol`.
pub fn fixed_point(
    g: impl Fn(f64) -> f64,
    x0: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Result<f64, Error> {
    let mut x = x0;
    let mut delta = f64::INFINITY;
    for _ in 0..max_iter {
        let next = g(x);
        if !next.is_finite() {
            return Err(Error::FixedPointNotConverged { last: x, delta });
        }
        delta = next - x;
        x = next;
        if m::fabs(delta) <= rel_tol * m::fabs(x).max(f64::MIN_POSITIVE) {
            return Ok(x);
        }
    }
    Err(Error::FixedPointNotConverged { last: x, delta })
}

// 15-point Gauss-Legendre nodes (positive half) and weights on [-1, 1].
const GL15_NODES: [f64; 8] = [
    0.0,
    0.201_194_093_997_434_5,
    0.394_151_347_077_563_4,
    0.570_972_172_608_538_8,
    0.724_417_731_360_170_0,
    0.848_206_583_410_427_2,
    0.937_273_392_400_705_9,
    0.987_992_518_020_485_4,
];
const GL15_WEIGHTS: [f64; 8] = [
    0.202_578_241_925_561_3,
    0.198_431_485_327_111_6,
    0.186_161_000_015_562_1,
    0.166_269_205_816_993_9,
    0.139_570_677_926_154_3,
    0.107_159_220_467_171_9,
    0.070_366_047_488_108_12,
    0.030_753_241_996_117_27,
];

/// Fixed 15-point Gauss-Legendre panel on [a, b].
pub fn gauss15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = GL15_WEIGHTS[0] * f(mid);
    for i in 1..8 {
        let dx = half * GL15_NODES[i];
        acc += GL15_WEIGHTS[i] * (f(mid + dx) + f(mid - dx));
    }
    acc * half
}

/// Adaptive composite Gauss quadrature of `f` on [a, b].
///
/// Bisects panels until the whole-panel and split-panel estimates agree to
/// `rel_tol` of the running integral scale.
pub fn integrate(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<f64, Error> {
    let scale = m::fabs(gauss15(f, a, b)).max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    // explicit stack of panels to avoid recursion in no_std
    let mut stack: Vec<(f64, f64, f64, usize)> = Vec::new();
    stack.push((a, b, gauss15(f, a, b), 0));
    let mut panels = 0usize;
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        panels += 1;
        if panels > 200_000 {
            return Err(Error::QuadratureFailure);
        }
        let midpt = 0.5 * (lo + hi);
        let left = gauss15(f, lo, midpt);
        let right = gauss15(f, midpt, hi);
        let refined = left + right;
        if m::fabs(refined - whole) <= rel_tol * scale.max(m::fabs(refined)) || depth >= 40 {
            if depth >= 40 && m::fabs(refined - whole) > 1e3 * rel_tol * scale {
                return Err(Error::QuadratureFailure);
            }
            total += refined;
        } else {
            stack.push((lo, midpt, left, depth + 1));
            stack.push((midpt, hi, right, depth + 1));
        }
    }
    Ok(total)
}

/// Adaptive quadrature with the domain split at the listed breakpoints
/// (piecewise-smooth integrands, e.g. mode functions with a jump).
pub fn integrate_split(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    breaks: &[f64],
    rel_tol: f64,
) -> Result<f64, Error> {
    let mut edges: Vec<f64> = Vec::new();
    edges.push(a);
    for &x in breaks {
        if x > a && x < b {
            edges.push(x);
        }
    }
    edges.push(b);
    let mut total = 0.0;
    for pair in edges.windows(2) {
        total += integrate(f, pair[0], pair[1], rel_tol)?;
    }
    Ok(total)
}

/// Bisection on a monotone function: solves f(x) = 0 on [lo, hi].
pub fn bisect_monotone(
    f: impl Fn(f64) -> f64,
    lo0: f64,
    hi0: f64,
    rel_tol: f64,
) -> Result<f64, Error> {
    let mut lo = lo0;
    let mut hi = hi0;
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo * fhi > 0.0 {
        return Err(Error::RootNotBracketed { lo: lo0, hi: hi0 });
    }
    for _ in 0..500 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || (hi - lo) <= rel_tol * m::fabs(mid).max(f64::MIN_POSITIVE) {
            return Ok(mid);
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

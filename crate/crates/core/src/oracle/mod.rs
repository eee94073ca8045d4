//! Brute-force validators: finite differences, adaptive Simpson quadrature,
//! grid scans of the fold indicator and trapezoidal mass integrals.
//!
//! Nothing here shares code with the analytic paths it checks; in particular
//! [`nquad`] is independent of the Gauss–Kronrod rule used by the models.

pub mod checks;

use thiserror::Error;

use crate::family::{ProfileSample, SolutionFamily};
use crate::scalar::{c, f64_of, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("finite-difference step must be positive, got {0}")]
    InvalidStep(f64),
    #[error("non-finite evaluation at {0:?}")]
    NonFinite(Vec<f64>),
    #[error("quadrature subdivision limit reached on [{a}, {b}]")]
    SubdivisionLimit { a: f64, b: f64 },
    #[error("profile is multivalued: x decreases from {from} to {to} at sample {index}")]
    Multivalued { index: usize, from: f64, to: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FdScheme {
    #[default]
    Central,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig<F> {
    /// Step relative to `max(1, |x_i|)`.
    pub h: F,
    pub scheme: FdScheme,
    pub richardson: bool,
}

impl<F: Scalar> Default for FdConfig<F> {
    fn default() -> Self {
        Self {
            h: c(1e-5),
            scheme: FdScheme::Central,
            richardson: true,
        }
    }
}

impl<F: Scalar> FdConfig<F> {
    pub fn new(h: F, richardson: bool) -> Result<Self, OracleError> {
        if !(h > F::zero()) || !h.is_finite() {
            return Err(OracleError::InvalidStep(f64_of(h)));
        }
        Ok(Self {
            h,
            scheme: FdScheme::Central,
            richardson,
        })
    }
}

/// Partial derivative of `f` along coordinate `index` at `point`.
pub fn fd_partial<F: Scalar, const N: usize>(
    f: impl Fn([F; N]) -> F,
    point: [F; N],
    index: usize,
    cfg: &FdConfig<F>,
) -> Result<F, OracleError> {
    if !(cfg.h > F::zero()) {
        return Err(OracleError::InvalidStep(f64_of(cfg.h)));
    }
    let eval = |p: [F; N]| {
        let v = f(p);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(OracleError::NonFinite(
                p.iter().map(|x| f64_of(*x)).collect(),
            ))
        }
    };
    let central = |h: F| -> Result<F, OracleError> {
        let (mut up, mut dn) = (point, point);
        up[index] = up[index] + h;
        dn[index] = dn[index] - h;
        Ok((eval(up)? - eval(dn)?) / (h + h))
    };
    let h = cfg.h * F::one().max(point[index].abs());
    match cfg.scheme {
        FdScheme::Central if cfg.richardson => {
            let coarse = central(h)?;
            let fine = central(h * c(0.5))?;
            Ok((c::<F>(4.0) * fine - coarse) / c(3.0))
        }
        FdScheme::Central => central(h),
    }
}

fn simpson<F: Scalar>(fa: F, fm: F, fb: F, a: F, b: F) -> F {
    (b - a) / c(6.0) * (fa + c::<F>(4.0) * fm + fb)
}

/// Adaptive Simpson quadrature with Richardson correction, to absolute
/// tolerance `tol`.
pub fn nquad<F: Scalar>(f: impl Fn(F) -> F, a: F, b: F, tol: F) -> Result<F, OracleError> {
    if a == b {
        return Ok(F::zero());
    }
    const MAX_DEPTH: usize = 60;
    const MAX_EVALS: usize = 4_000_000;
    let fa = f(a);
    let fb = f(b);
    let m = (a + b) * c(0.5);
    let fm = f(m);
    let whole = simpson(fa, fm, fb, a, b);
    // explicit stack: (a, b, fa, fm, fb, whole, tol, depth)
    let mut stack = vec![(a, b, fa, fm, fb, whole, tol, 0usize)];
    let mut total = F::zero();
    let mut evals = 3usize;
    while let Some((a, b, fa, fm, fb, whole, tol, depth)) = stack.pop() {
        let m = (a + b) * c(0.5);
        let (lm, rm) = ((a + m) * c(0.5), (m + b) * c(0.5));
        let (flm, frm) = (f(lm), f(rm));
        evals += 2;
        if !flm.is_finite() || !frm.is_finite() {
            return Err(OracleError::NonFinite(vec![f64_of(lm), f64_of(rm)]));
        }
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let diff = left + right - whole;
        if diff.abs() <= c::<F>(15.0) * tol || (b - a).abs() <= F::epsilon() * (a.abs() + b.abs()) {
            total = total + left + right + diff / c(15.0);
            continue;
        }
        if depth >= MAX_DEPTH || evals >= MAX_EVALS {
            return Err(OracleError::SubdivisionLimit {
                a: f64_of(a),
                b: f64_of(b),
            });
        }
        let half = tol * c(0.5);
        stack.push((a, m, fa, flm, fm, left, half, depth + 1));
        stack.push((m, b, fm, frm, fb, right, half, depth + 1));
    }
    Ok(total)
}

/// Sign-change cells of the fold indicator along `u` at each grid density,
/// bisected to `1e-8` in `u`.
pub fn fold_scan<F: Scalar>(fam: &SolutionFamily<F>, u_grid: &[F], rho_grid: &[F]) -> Vec<(F, F)> {
    let tol = c::<F>(1e-8);
    let mut out = Vec::new();
    for &rho in rho_grid {
        let j = |u: F| fam.fold_indicator(u, rho);
        let vals: Vec<F> = u_grid.iter().map(|&u| j(u)).collect();
        for k in 0..u_grid.len().saturating_sub(1) {
            let (mut a, mut b) = (u_grid[k], u_grid[k + 1]);
            let (mut ja, jb) = (vals[k], vals[k + 1]);
            if !ja.is_finite() || !jb.is_finite() {
                continue;
            }
            if ja == F::zero() {
                out.push((a, rho));
                continue;
            }
            if ja.signum() == jb.signum() || jb == F::zero() {
                continue;
            }
            while (b - a).abs() > tol {
                let m = (a + b) * c(0.5);
                if m <= a.min(b) || m >= a.max(b) {
                    break;
                }
                let jm = j(m);
                if jm.signum() == ja.signum() {
                    a = m;
                    ja = jm;
                } else {
                    b = m;
                }
            }
            out.push(((a + b) * c(0.5), rho));
        }
        if let (Some(&u), Some(&v)) = (u_grid.last(), vals.last()) {
            if v == F::zero() {
                out.push((u, rho));
            }
        }
    }
    out
}

/// Trapezoidal `∫ rho dx` of a curve-ordered profile over `x_window`.
///
/// Consecutive samples at equal `x` are jumps and contribute nothing; any
/// decrease of `x` means the profile is still multivalued.
pub fn mass_integral<F: Scalar>(
    profile: &[ProfileSample<F>],
    x_window: (F, F),
) -> Result<F, OracleError> {
    for (i, w) in profile.windows(2).enumerate() {
        if w[1].x < w[0].x {
            return Err(OracleError::Multivalued {
                index: i + 1,
                from: f64_of(w[0].x),
                to: f64_of(w[1].x),
            });
        }
    }
    let (lo, hi) = x_window;
    let mut total = F::zero();
    for w in profile.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b.x == a.x {
            continue;
        }
        let (x0, x1) = (a.x.max(lo), b.x.min(hi));
        if x1 <= x0 {
            continue;
        }
        let at = |x: F| a.rho + (b.rho - a.rho) * (x - a.x) / (b.x - a.x);
        total = total + (at(x0) + at(x1)) * c(0.5) * (x1 - x0);
    }
    Ok(total)
}

/// Radical inverse of `index` in `base`.
pub fn halton(index: usize, base: usize) -> f64 {
    let (mut f, mut r, mut i) = (1.0, 0.0, index);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// First `n` points of the 2-D Halton sequence (bases 2, 3, starting at
/// index 1) mapped onto `[u0, u1] × [r0, r1]`.
pub fn halton_points<F: Scalar>(n: usize, u: (F, F), rho: (F, F)) -> Vec<(F, F)> {
    (1..=n)
        .map(|i| {
            let (a, b) = (F::lit(halton(i, 2)), F::lit(halton(i, 3)));
            (u.0 + (u.1 - u.0) * a, rho.0 + (rho.1 - rho.0) * b)
        })
        .collect()
}

fn point_segment<F: Scalar>(p: (F, F), a: (F, F), b: (F, F)) -> F {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let s = if len2 > F::zero() {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2)
            .max(F::zero())
            .min(F::one())
    } else {
        F::zero()
    };
    let (qx, qy) = (a.0 + s * dx - p.0, a.1 + s * dy - p.1);
    (qx * qx + qy * qy).sqrt()
}

fn directed<F: Scalar>(from: &[(F, F)], to: &[(F, F)]) -> F {
    from.iter()
        .map(|&p| match to {
            [] => F::infinity(),
            [q] => point_segment(p, *q, *q),
            _ => to
                .windows(2)
                .map(|w| point_segment(p, w[0], w[1]))
                .fold(F::infinity(), F::min),
        })
        .fold(F::zero(), F::max)
}

/// Symmetric Hausdorff distance between two polylines, measured from each
/// vertex set to the other polyline.
pub fn hausdorff<F: Scalar>(a: &[(F, F)], b: &[(F, F)]) -> F {
    directed(a, b).max(directed(b, a))
}

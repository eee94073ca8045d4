//! Small numerical kernels used by the model and singularity code:
//! adaptive Gauss–Kronrod quadrature, bracketed root finding, golden-section
//! minimisation and a dense linear solve.

#![allow(clippy::excessive_precision)]

use crate::scalar::{c, Scalar};

// 15-point Kronrod nodes (non-negative half) and weights, with the embedded
// 7-point Gauss weights on the odd nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: Scalar>(f: &impl Fn(F) -> F, a: F, b: F) -> (F, F) {
    let half = (b - a) * c(0.5);
    let mid = (a + b) * c(0.5);
    let fc = f(mid);
    let mut kronrod = fc * c(WGK[7]);
    let mut gauss = fc * c(WG[3]);
    for j in 0..7 {
        let dx = half * c(XGK[j]);
        let pair = f(mid - dx) + f(mid + dx);
        kronrod = kronrod + pair * c(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * c(WG[j / 2]);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// Returns `None` when the interval budget is exhausted before the error
/// estimate drops below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Scalar>(f: impl Fn(F) -> F, a: F, b: F, abs_tol: F, rel_tol: F) -> Option<F> {
    if a == b {
        return Some(F::zero());
    }
    const MAX_INTERVALS: usize = 2000;
    let (i0, e0) = gk15(&f, a, b);
    let mut pieces = vec![(a, b, i0, e0)];
    loop {
        let total: F = pieces.iter().fold(F::zero(), |s, p| s + p.2);
        let err: F = pieces.iter().fold(F::zero(), |s, p| s + p.3);
        if !total.is_finite() || !err.is_finite() {
            return None;
        }
        let floor = F::epsilon() * c(50.0) * total.abs();
        if err <= abs_tol.max(rel_tol * total.abs()).max(floor) {
            return Some(total);
        }
        if pieces.len() >= MAX_INTERVALS {
            return None;
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .fold((0, F::neg_infinity()), |best, (i, p)| {
                if p.3 > best.1 {
                    (i, p.3)
                } else {
                    best
                }
            });
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let m = (lo + hi) * c(0.5);
        if m <= lo.min(hi) || m >= lo.max(hi) {
            return None;
        }
        let (il, el) = gk15(&f, lo, m);
        let (ir, er) = gk15(&f, m, hi);
        pieces.push((lo, m, il, el));
        pieces.push((m, hi, ir, er));
    }
}

/// Brent's method on a sign-changing bracket `[a, b]`.
pub fn brent<F: Scalar>(f: impl Fn(F) -> F, a: F, b: F, tol: F) -> Option<F> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if !fa.is_finite() || !fb.is_finite() {
        return None;
    }
    if fa == F::zero() {
        return Some(a);
    }
    if fb == F::zero() {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let two = c::<F>(2.0);
    let half = c::<F>(0.5);
    let (mut cc, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            cc = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = cc;
            cc = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * F::epsilon() * b.abs() + half * tol;
        let xm = half * (cc - b);
        if xm.abs() <= tol1 || fb == F::zero() {
            return Some(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == cc {
                p = two * xm * s;
                q = F::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - F::one()));
                q = (qq - F::one()) * (r - F::one()) * (s - F::one());
            }
            if p > F::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = c::<F>(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
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
        b = if d.abs() > tol1 {
            b + d
        } else {
            b + tol1 * xm.signum()
        };
        fb = f(b);
        if !fb.is_finite() {
            return None;
        }
    }
    Some(b)
}

/// Newton iteration safeguarded by bisection on the bracket `[lo, hi]`.
///
/// `fdf` returns the value and derivative. Converges when `|f| <= ftol` or the
/// bracket shrinks below the floating point resolution.
pub fn safeguarded_newton<F: Scalar>(
    fdf: impl Fn(F) -> (F, F),
    lo: F,
    hi: F,
    ftol: F,
) -> Option<F> {
    let (mut lo, mut hi) = (lo, hi);
    let (flo, _) = fdf(lo);
    let (fhi, _) = fdf(hi);
    if !flo.is_finite() || !fhi.is_finite() || flo.signum() == fhi.signum() {
        if flo == F::zero() {
            return Some(lo);
        }
        if fhi == F::zero() {
            return Some(hi);
        }
        return None;
    }
    let increasing = fhi > flo;
    let mut x = (lo + hi) * c(0.5);
    for _ in 0..200 {
        let (fx, dfx) = fdf(x);
        if !fx.is_finite() {
            return None;
        }
        if fx.abs() <= ftol {
            return Some(x);
        }
        if (fx > F::zero()) == increasing {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - fx / dfx;
        x = if dfx != F::zero() && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) * c(0.5)
        };
        if (hi - lo).abs() <= F::epsilon() * c::<F>(4.0) * x.abs().max(F::one()) {
            return Some(x);
        }
    }
    None
}

/// Golden-section minimisation of a unimodal `f` on `[a, b]`.
pub fn golden_min<F: Scalar>(f: impl Fn(F) -> F, a: F, b: F, tol: F) -> F {
    let inv_phi = (c::<F>(5.0).sqrt() - F::one()) * c(0.5);
    let (mut a, mut b) = (a, b);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..400 {
        let floor = F::epsilon() * c::<F>(4.0) * (a.abs() + b.abs());
        if (b - a).abs() <= tol.max(floor) {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    (a + b) * c(0.5)
}

/// Solves `m x = rhs` by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
pub fn solve_dense<F: Scalar, const N: usize>(
    mut m: [[F; N]; N],
    mut rhs: [F; N],
) -> Option<[F; N]> {
    for col in 0..N {
        let pivot = (col..N).max_by(|&i, &j| {
            m[i][col]
                .abs()
                .partial_cmp(&m[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[pivot][col] == F::zero() || !m[pivot][col].is_finite() {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..N {
            let factor = m[row][col] / m[col][col];
            for k in col..N {
                m[row][k] = m[row][k] - factor * m[col][k];
            }
            rhs[row] = rhs[row] - factor * rhs[col];
        }
    }
    let mut x = [F::zero(); N];
    for row in (0..N).rev() {
        let mut acc = rhs[row];
        for k in row + 1..N {
            acc = acc - m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// `n` log-spaced points covering `[lo, hi]` (both ends included).
pub fn log_grid<F: Scalar>(lo: F, hi: F, n: usize) -> Vec<F> {
    if n < 2 {
        return vec![lo];
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (l0 + (l1 - l0) * F::from_count(i) / F::from_count(n - 1))
                    .exp()
                    .max(lo)
                    .min(hi)
            }
        })
        .collect()
}

/// `n` evenly spaced points covering `[lo, hi]`.
pub fn lin_grid<F: Scalar>(lo: F, hi: F, n: usize) -> Vec<F> {
    if n < 2 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * F::from_count(i) / F::from_count(n - 1)
            }
        })
        .collect()
}

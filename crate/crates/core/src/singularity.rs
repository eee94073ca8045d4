//! Caustics, the mass potential `H` and shock fronts.
//!
//! On the caustic the critical velocity is `u_c = -Z/(lambda rho^2 A)` with
//! `Z± = alpha0 rho^2 A ∓ lambda rho Q ± lambda IQ ± alpha2`. The potential
//! `H` is the restriction to each branch of the surface function
//! `h(u, rho) = (lambda u + alpha0) (alpha2 + lambda IQ - lambda rho Q) / lambda`,
//! so `H+` and `H-` glue across the apex `D = 0` where both vanish.
//!
//! Fronts are continued in surface coordinates `(u1, rho1, u2, rho2)`:
//!
//! ```text
//! t(u1, rho1) = t     x(u1, rho1) = x(u2, rho2)
//! t(u2, rho2) = t     h(u1, rho1) = h(u2, rho2)
//! ```
//!
//! which stays regular when an endpoint passes through the apex, where the
//! `(rho, t)` chart of a single branch degenerates.

use thiserror::Error;

use crate::family::{normalize_curve, Branch, FamilyError, ProfileSample, SolutionFamily};
use crate::numeric;
use crate::scalar::{c, f64_of, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SingularityError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("no cusp on the {branch} caustic inside the model domain")]
    NoCusp { branch: Branch },
    #[error("start time {requested} precedes the cusp time {t_start}")]
    BeforeCusp { requested: f64, t_start: f64 },
    #[error("front continuation stalled after t={last_t} ({accepted} samples accepted)")]
    ContinuationStall { last_t: f64, accepted: usize },
    #[error("time step must be positive and finite, got {0}")]
    InvalidStep(f64),
}

/// `Z±(rho)`.
pub fn z_pm<F: Scalar>(fam: &SolutionFamily<F>, rho: F, branch: Branch) -> F {
    let s = branch.sign::<F>();
    let hm = &fam.hm;
    fam.alpha0 * rho * rho * hm.a(rho)
        + s * (-fam.lambda * rho * hm.q(rho) + fam.lambda * hm.iq(rho) + fam.alpha2)
}

/// `h(u, rho)`; its restriction to branch `±` is `H±`.
pub fn h_surface<F: Scalar>(fam: &SolutionFamily<F>, u: F, rho: F) -> F {
    let l = fam.lambda;
    (l * u + fam.alpha0) * (fam.alpha2 + l * fam.hm.iq(rho) - l * rho * fam.hm.q(rho)) / l
}

/// `(h_u, h_rho) = (rho K, -(lambda u + alpha0) rho^2 A^2)`.
pub fn h_surface_partials<F: Scalar>(fam: &SolutionFamily<F>, u: F, rho: F) -> (F, F) {
    (
        rho * fam.k_term(rho),
        -(fam.lambda * u + fam.alpha0) * rho * fam.hm.rho_a2(rho),
    )
}

/// `H±(rho, t) = ∓ sqrt(2 D) (rho lambda Q - lambda IQ - alpha2) / (lambda sqrt(rho))`.
pub fn potential_h<F: Scalar>(
    fam: &SolutionFamily<F>,
    rho: F,
    t: F,
    branch: Branch,
) -> Result<F, SingularityError> {
    // validates lambda, domain and support
    fam.branch_u(rho, t, branch)?;
    Ok(potential_h_clamped(fam, rho, t, branch))
}

fn potential_h_clamped<F: Scalar>(fam: &SolutionFamily<F>, rho: F, t: F, branch: Branch) -> F {
    let l = fam.lambda;
    let d = fam.radicand(rho, t).max(F::zero());
    let bracket = rho * l * fam.hm.q(rho) - l * fam.hm.iq(rho) - fam.alpha2;
    -branch.sign::<F>() * (c::<F>(2.0) * d).sqrt() * bracket / (l * rho.sqrt())
}

fn require_lambda<F: Scalar>(fam: &SolutionFamily<F>) -> Result<(), SingularityError> {
    if fam.lambda == F::zero() {
        Err(FamilyError::DegenerateFamily.into())
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausticSample<F> {
    pub rho: F,
    pub t: F,
    pub x: F,
    pub u: F,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cusp<F> {
    pub rho: F,
    pub t: F,
    pub x: F,
    pub u: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CausticCurve<F> {
    pub branch: Branch,
    pub samples: Vec<CausticSample<F>>,
    pub cusp: Option<Cusp<F>>,
    /// Grid points dropped because no critical velocity was found or the
    /// point failed validation.
    pub skipped: usize,
    /// Largest relative gap `|t - t_Z+| / (1 + |t|)` between the emitted time
    /// and the `Z+` time formula; zero for the plus branch, which uses that
    /// formula directly.
    pub printed_t_gap: F,
}

/// Caustic time from the `Z+` formula.
pub fn caustic_t_formula<F: Scalar>(fam: &SolutionFamily<F>, rho: F) -> F {
    let (l, a0) = (fam.lambda, fam.alpha0);
    let a = fam.hm.a(rho);
    let z = z_pm(fam, rho, Branch::Plus);
    let r2 = rho * rho;
    z * z / (c::<F>(2.0) * l * a * a * r2 * r2) + z / rho * (F::one() - a0 / (l * rho * a))
        - a0 * rho * a
        + l * fam.hm.q(rho)
        + fam.t0
}

/// Caustic position from the `Z±` formula with the branch's signs.
pub fn caustic_x_formula<F: Scalar>(fam: &SolutionFamily<F>, rho: F, branch: Branch) -> F {
    let (l, a0) = (fam.lambda, fam.alpha0);
    let a = fam.hm.a(rho);
    let z = z_pm(fam, rho, branch);
    let s = branch.sign::<F>();
    let (r2, r3) = (rho * rho, rho * rho * rho);
    fam.x0 - z * z * z / (c::<F>(3.0) * l * l * a * a * a * r3 * r3)
        + a0 * z * z / (c::<F>(2.0) * l * l * a * a * r2 * r2)
        + s * a0 * z / (l * rho)
        - s * z * z / (l * a * r3)
        - a0 * fam.hm.q(rho)
}

/// Root of the fold indicator in `u` on the given branch side, found by
/// bracketing outward from `u = -alpha0/lambda`.
pub fn critical_u<F: Scalar>(fam: &SolutionFamily<F>, rho: F, branch: Branch) -> Option<F> {
    let centre = -fam.alpha0 / fam.lambda;
    let j = |u: F| fam.fold_indicator(u, rho);
    let j0 = j(centre);
    if !j0.is_finite() {
        return None;
    }
    if j0 == F::zero() {
        return Some(centre);
    }
    let dir = branch.sign::<F>() * fam.lambda.signum();
    let mut span = F::one();
    for _ in 0..200 {
        let far = centre + dir * span;
        let jf = j(far);
        if !jf.is_finite() {
            return None;
        }
        if jf.signum() != j0.signum() {
            let tol = F::solver_floor() * (F::one() + far.abs());
            return numeric::brent(j, centre, far, tol);
        }
        span = span + span;
    }
    None
}

fn indicator_scale<F: Scalar>(fam: &SolutionFamily<F>, u: F, rho: F) -> F {
    let k = fam.k_term(rho);
    let tu = fam.lambda * u + fam.alpha0;
    F::one().max(k * k / rho).max(fam.hm.rho_a2(rho) * tu * tu)
}

const INDICATOR_TOL: f64 = 1e-8;

/// One caustic point, validated against the fold indicator and against the
/// surface quadratures at the critical velocity.
pub fn caustic_point<F: Scalar>(
    fam: &SolutionFamily<F>,
    rho: F,
    branch: Branch,
) -> Result<Option<CausticSample<F>>, SingularityError> {
    require_lambda(fam)?;
    fam.hm.domain().check(rho).map_err(FamilyError::from)?;
    let (u, t) = match branch {
        Branch::Plus => {
            let z = z_pm(fam, rho, Branch::Plus);
            let u = -z / (fam.lambda * rho * rho * fam.hm.a(rho));
            (u, caustic_t_formula(fam, rho))
        }
        Branch::Minus => match critical_u(fam, rho, Branch::Minus) {
            Some(u) => (u, fam.t_of(u, rho)),
            None => return Ok(None),
        },
    };
    let x = caustic_x_formula(fam, rho, branch);
    let tol = c::<F>(INDICATOR_TOL).max(F::epsilon() * c(1e3));
    let ok = fam.fold_indicator(u, rho).abs() <= tol * indicator_scale(fam, u, rho)
        && (fam.t_of(u, rho) - t).abs() <= tol * (F::one() + t.abs())
        && (fam.x_of(u, rho) - x).abs() <= tol * (F::one() + x.abs());
    Ok(ok.then_some(CausticSample {
        rho,
        t,
        x,
        u,
        branch,
    }))
}

fn caustic_time<F: Scalar>(fam: &SolutionFamily<F>, rho: F, branch: Branch) -> F {
    match branch {
        Branch::Plus => caustic_t_formula(fam, rho),
        Branch::Minus => critical_u(fam, rho, branch)
            .map(|u| fam.t_of(u, rho))
            .unwrap_or_else(F::nan),
    }
}

/// Caustic of one branch over a density grid, with the cusp located as the
/// minimum of `t` along the curve.
pub fn caustic<F: Scalar>(
    fam: &SolutionFamily<F>,
    rho_grid: &[F],
    branch: Branch,
) -> Result<CausticCurve<F>, SingularityError> {
    require_lambda(fam)?;
    let mut samples = Vec::with_capacity(rho_grid.len());
    let mut skipped = 0;
    let mut printed_t_gap = F::zero();
    for &rho in rho_grid {
        match caustic_point(fam, rho, branch)? {
            Some(s) => {
                if branch == Branch::Minus {
                    let gap = (s.t - caustic_t_formula(fam, rho)).abs() / (F::one() + s.t.abs());
                    printed_t_gap = printed_t_gap.max(gap);
                }
                samples.push(s);
            }
            None => skipped += 1,
        }
    }
    let cusp = locate_cusp(fam, &samples, branch);
    Ok(CausticCurve {
        branch,
        samples,
        cusp,
        skipped,
        printed_t_gap,
    })
}

fn locate_cusp<F: Scalar>(
    fam: &SolutionFamily<F>,
    samples: &[CausticSample<F>],
    branch: Branch,
) -> Option<Cusp<F>> {
    let (i, _) = samples
        .iter()
        .enumerate()
        .filter(|(_, s)| s.t.is_finite())
        .min_by(|a, b| {
            a.1.t
                .partial_cmp(&b.1.t)
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
    if i == 0 || i + 1 == samples.len() {
        return None;
    }
    let (lo, hi) = (samples[i - 1].rho, samples[i + 1].rho);
    let time = |r: F| caustic_time(fam, r, branch);
    let rough = numeric::golden_min(time, lo, hi, c(1e-10));
    // the minimum is flat in t, so polish on the slope
    let e = c::<F>(1e-5).max(F::epsilon().cbrt());
    let slope =
        |r: F| (time(r * (F::one() + e)) - time(r * (F::one() - e))) / (c::<F>(2.0) * r * e);
    let w = rough * c::<F>(1e-6).max(F::epsilon().sqrt());
    let rho = numeric::brent(slope, rough - w, rough + w, rough * c(1e-14)).unwrap_or(rough);
    let s = caustic_point(fam, rho, branch).ok().flatten()?;
    Some(Cusp {
        rho,
        t: s.t,
        x: s.x,
        u: s.u,
    })
}

/// Cusp of a branch, searched over the whole model domain.
pub fn cusp<F: Scalar>(
    fam: &SolutionFamily<F>,
    branch: Branch,
) -> Result<Cusp<F>, SingularityError> {
    let grid = fam.hm.domain().grid(480);
    caustic(fam, &grid, branch)?
        .cusp
        .ok_or(SingularityError::NoCusp { branch })
}

/// The two caustic points of a branch at time `t > t_cusp`, ordered by density.
pub fn caustic_arms<F: Scalar>(
    fam: &SolutionFamily<F>,
    branch: Branch,
    cusp: &Cusp<F>,
    t: F,
) -> Option<(CausticSample<F>, CausticSample<F>)> {
    let (ra, rb) = fold_roots(fam, branch, cusp, t)?;
    let a = caustic_point(fam, ra, branch).ok().flatten()?;
    let b = caustic_point(fam, rb, branch).ok().flatten()?;
    Some((a, b))
}

fn fold_roots<F: Scalar>(
    fam: &SolutionFamily<F>,
    branch: Branch,
    cusp: &Cusp<F>,
    t: F,
) -> Option<(F, F)> {
    if !(t > cusp.t) {
        return None;
    }
    let dom = fam.hm.domain();
    let g = |r: F| caustic_time(fam, r, branch) - t;
    let grow = c::<F>(1.25);
    let find = |outward: &dyn Fn(F) -> F| -> Option<F> {
        let mut near = cusp.rho;
        for _ in 0..400 {
            let far = outward(near);
            if !dom.contains(far) {
                return None;
            }
            if g(far) > F::zero() {
                return numeric::brent(g, near, far, F::solver_floor() * far);
            }
            near = far;
        }
        None
    };
    let ra = find(&|r| r / grow)?;
    let rb = find(&|r| r * grow)?;
    Some((ra, rb))
}

/// One accepted point of a shock front.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontSample<F> {
    pub t: F,
    pub x_s: F,
    pub rho1: F,
    pub rho2: F,
    pub u1: F,
    pub u2: F,
    pub branch1: Branch,
    pub branch2: Branch,
    /// `|H(rho1, t) - H(rho2, t)|` recomputed through the branch potentials.
    pub residual_h: F,
    /// `|x(rho1, t) - x(rho2, t)|` recomputed through branch resolution.
    pub residual_x: F,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination<F> {
    Completed,
    /// The endpoints merged at this time.
    Collapsed {
        t: F,
    },
    /// Newton failed even after the maximum number of step halvings.
    Stalled {
        last_t: F,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShockFront<F> {
    /// Branch whose cusp gives birth to the front.
    pub branch: Branch,
    pub cusp: Cusp<F>,
    pub t_start: F,
    pub samples: Vec<FrontSample<F>>,
    pub termination: Termination<F>,
}

const NEWTON_TOL: f64 = 1e-10;
const NEWTON_ITERS: usize = 50;
const MAX_HALVINGS: usize = 20;
const COLLAPSE_TOL: f64 = 1e-10;

type State<F> = [F; 4];

fn residual<F: Scalar>(fam: &SolutionFamily<F>, y: &State<F>, t: F) -> [F; 4] {
    let [u1, r1, u2, r2] = *y;
    [
        fam.t_of(u1, r1) - t,
        fam.t_of(u2, r2) - t,
        fam.x_of(u1, r1) - fam.x_of(u2, r2),
        h_surface(fam, u1, r1) - h_surface(fam, u2, r2),
    ]
}

fn jacobian<F: Scalar>(fam: &SolutionFamily<F>, y: &State<F>) -> [[F; 4]; 4] {
    let [u1, r1, u2, r2] = *y;
    let (p1, p2) = (fam.partials(u1, r1), fam.partials(u2, r2));
    let (h1, h2) = (
        h_surface_partials(fam, u1, r1),
        h_surface_partials(fam, u2, r2),
    );
    let z = F::zero();
    [
        [p1.t_u, p1.t_rho, z, z],
        [z, z, p2.t_u, p2.t_rho],
        [p1.x_u, p1.x_rho, -p2.x_u, -p2.x_rho],
        [h1.0, h1.1, -h2.0, -h2.1],
    ]
}

fn norm<F: Scalar>(r: &[F; 4]) -> F {
    r.iter().fold(F::zero(), |m, v| {
        if v.is_nan() {
            F::nan()
        } else {
            m.max(v.abs())
        }
    })
}

fn newton_tol<F: Scalar>(y: &State<F>) -> F {
    let scale = F::one() + y.iter().fold(F::zero(), |m, v| m.max(v.abs()));
    c::<F>(NEWTON_TOL).max(F::solver_floor() * scale * scale * scale)
}

/// Damped Newton on the front system at time `t`.
fn solve_front<F: Scalar>(fam: &SolutionFamily<F>, y0: State<F>, t: F) -> Option<State<F>> {
    let dom = fam.hm.domain();
    let admissible = |y: &State<F>| dom.contains(y[1]) && dom.contains(y[3]);
    if !admissible(&y0) {
        return None;
    }
    let mut y = y0;
    let mut r = residual(fam, &y, t);
    let mut nr = norm(&r);
    for _ in 0..NEWTON_ITERS {
        if !nr.is_finite() {
            return None;
        }
        if nr < newton_tol(&y) {
            return Some(y);
        }
        let step = numeric::solve_dense(jacobian(fam, &y), r.map(|v| -v))?;
        let mut damping = F::one();
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial: State<F> = std::array::from_fn(|k| y[k] + damping * step[k]);
            if admissible(&trial) {
                let rt = residual(fam, &trial, t);
                let nt = norm(&rt);
                if nt < nr {
                    y = trial;
                    r = rt;
                    nr = nt;
                    accepted = true;
                    break;
                }
            }
            damping = damping * c(0.5);
        }
        if !accepted {
            return None;
        }
    }
    (nr < newton_tol(&y)).then_some(y)
}

fn collapsed<F: Scalar>(y: &State<F>) -> bool {
    let tol = c::<F>(COLLAPSE_TOL);
    (y[1] - y[3]).abs() <= tol * F::one().max(y[1].abs())
        && (y[0] - y[2]).abs() <= tol * F::one().max(y[0].abs())
}

/// Seeds from the cubic normal form of the fold: with fold densities
/// `rho_a < rho_b` at time `t`, the equal-area endpoints sit at
/// `mid ∓ sqrt(3) (rho_b - rho_a) / 2`.
fn seeds<F: Scalar>(
    fam: &SolutionFamily<F>,
    branch: Branch,
    cusp: &Cusp<F>,
    t: F,
) -> Vec<State<F>> {
    let Some((ra, rb)) = fold_roots(fam, branch, cusp, t) else {
        return Vec::new();
    };
    let mid = (ra + rb) * c(0.5);
    let half = (rb - ra) * c(0.5) * c::<F>(3.0).sqrt();
    let r1 = (mid - half).max(ra * c(0.5));
    let r2 = mid + half;
    let u_on = |r: F, b: Branch| fam.u_from_radicand(r, fam.radicand(r, t), b);
    vec![
        [u_on(r1, branch), r1, u_on(r2, branch), r2],
        [u_on(r1, branch), r1, u_on(r2, branch.other()), r2],
        [u_on(r1, branch.other()), r1, u_on(r2, branch), r2],
    ]
}

fn seeded_solve<F: Scalar>(
    fam: &SolutionFamily<F>,
    branch: Branch,
    cusp: &Cusp<F>,
    t: F,
) -> Option<State<F>> {
    seeds(fam, branch, cusp, t)
        .into_iter()
        .filter_map(|s| solve_front(fam, s, t))
        .find(|y| !collapsed(y))
}

fn to_sample<F: Scalar>(fam: &SolutionFamily<F>, y: &State<F>, t: F) -> FrontSample<F> {
    let [mut u1, mut r1, mut u2, mut r2] = *y;
    if r1 > r2 {
        std::mem::swap(&mut u1, &mut u2);
        std::mem::swap(&mut r1, &mut r2);
    }
    let (b1, b2) = (fam.branch_of(u1), fam.branch_of(u2));
    let x_branch = |r: F, b: Branch| fam.x_of(fam.u_from_radicand(r, fam.radicand(r, t), b), r);
    let (xa, xb) = (fam.x_of(u1, r1), fam.x_of(u2, r2));
    FrontSample {
        t,
        x_s: (xa + xb) * c(0.5),
        rho1: r1,
        rho2: r2,
        u1,
        u2,
        branch1: b1,
        branch2: b2,
        residual_h: (potential_h_clamped(fam, r1, t, b1) - potential_h_clamped(fam, r2, t, b2))
            .abs(),
        residual_x: (x_branch(r1, b1) - x_branch(r2, b2)).abs(),
    }
}

fn state_of<F>(s: &FrontSample<F>) -> State<F>
where
    F: Copy,
{
    [s.u1, s.rho1, s.u2, s.rho2]
}

/// Continues the front born at the cusp of `branch` over
/// `t_range.0, t_range.0 + dt, ...` up to `t_range.1`. The front is returned
/// even when continuation stops early; see [`ShockFront::termination`].
pub fn shock_front_partial<F: Scalar>(
    fam: &SolutionFamily<F>,
    branch: Branch,
    t_range: (F, F),
    dt: F,
) -> Result<ShockFront<F>, SingularityError> {
    require_lambda(fam)?;
    if !(dt > F::zero()) || !dt.is_finite() {
        return Err(SingularityError::InvalidStep(f64_of(dt)));
    }
    let cusp = cusp(fam, branch)?;
    let t_start = cusp.t;
    let slack = c::<F>(1e-9) * (F::one() + t_start.abs());
    if t_range.0 < t_start - slack {
        return Err(SingularityError::BeforeCusp {
            requested: f64_of(t_range.0),
            t_start: f64_of(t_start),
        });
    }
    let mut targets = Vec::new();
    let mut k = 0usize;
    loop {
        let t = t_range.0 + dt * F::from_count(k);
        if t > t_range.1 + dt * c(1e-9) {
            break;
        }
        if t > t_start + slack {
            targets.push(t);
        }
        k += 1;
    }

    let mut front = ShockFront {
        branch,
        cusp,
        t_start,
        samples: Vec::with_capacity(targets.len()),
        termination: Termination::Completed,
    };
    // (t, state) of the last two solved points, newest last
    let mut history: Vec<(F, State<F>)> = Vec::new();
    'targets: for target in targets {
        let mut t_cur = history.last().map(|h| h.0).unwrap_or(t_start);
        let mut h = target - t_cur;
        let mut halvings = 0;
        while t_cur < target {
            let t_try = if t_cur + h > target {
                target
            } else {
                t_cur + h
            };
            let solved = match history.as_slice() {
                [] => seeded_solve(fam, branch, &cusp, t_try),
                [.., (ta, ya), (tb, yb)] => {
                    let w = (t_try - *tb) / (*tb - *ta);
                    let guess: State<F> = std::array::from_fn(|i| yb[i] + w * (yb[i] - ya[i]));
                    solve_front(fam, guess, t_try).or_else(|| solve_front(fam, *yb, t_try))
                }
                [.., (_, yb)] => solve_front(fam, *yb, t_try),
            };
            match solved {
                Some(y) if collapsed(&y) => {
                    front.termination = Termination::Collapsed { t: t_try };
                    break 'targets;
                }
                Some(y) => {
                    history.push((t_try, y));
                    if history.len() > 2 {
                        history.remove(0);
                    }
                    t_cur = t_try;
                }
                None => {
                    halvings += 1;
                    if halvings > MAX_HALVINGS {
                        front.termination = Termination::Stalled {
                            last_t: history.last().map(|h| h.0).unwrap_or(t_start),
                        };
                        break 'targets;
                    }
                    h = h * c(0.5);
                }
            }
        }
        let (_, y) = history.last().expect("solved state at target");
        front.samples.push(to_sample(fam, y, target));
    }
    Ok(front)
}

/// Like [`shock_front_partial`] but a stall is an error.
pub fn shock_front<F: Scalar>(
    fam: &SolutionFamily<F>,
    branch: Branch,
    t_range: (F, F),
    dt: F,
) -> Result<ShockFront<F>, SingularityError> {
    let front = shock_front_partial(fam, branch, t_range, dt)?;
    if let Termination::Stalled { last_t } = front.termination {
        return Err(SingularityError::ContinuationStall {
            last_t: f64_of(last_t),
            accepted: front.samples.len(),
        });
    }
    Ok(front)
}

/// Fronts of every branch that has a cusp, each started at its own cusp
/// time when `t_range.0` precedes it.
pub fn shock_fronts<F: Scalar>(
    fam: &SolutionFamily<F>,
    t_range: (F, F),
    dt: F,
) -> Result<Vec<ShockFront<F>>, SingularityError> {
    let mut out = Vec::new();
    for branch in Branch::BOTH {
        let cusp = match cusp(fam, branch) {
            Ok(c) => c,
            Err(SingularityError::NoCusp { .. }) => continue,
            Err(e) => return Err(e),
        };
        let start = if t_range.0 < cusp.t {
            // first grid time strictly after the cusp
            let steps = ((cusp.t - t_range.0) / dt).floor() + F::one();
            t_range.0 + steps * dt
        } else {
            t_range.0
        };
        if start <= t_range.1 {
            out.push(shock_front(fam, branch, (start, t_range.1), dt)?);
        }
    }
    Ok(out)
}

impl<F: Scalar> ShockFront<F> {
    pub fn t_end(&self) -> Option<F> {
        self.samples.last().map(|s| s.t)
    }

    /// Front state at an arbitrary time inside its coverage, solved from the
    /// nearest accepted sample.
    pub fn state_at(&self, fam: &SolutionFamily<F>, t: F) -> Option<FrontSample<F>> {
        let first = self.samples.first()?;
        let last = self.samples.last()?;
        if !(t > self.t_start) || t > last.t {
            return None;
        }
        let near = self
            .samples
            .iter()
            .min_by(|a, b| {
                (a.t - t)
                    .abs()
                    .partial_cmp(&(b.t - t).abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(first);
        if near.t == t {
            return Some(*near);
        }
        let y = solve_front(fam, state_of(near), t).or_else(|| {
            // walk from the nearest sample in small steps
            let n = 16;
            let mut y = state_of(near);
            for k in 1..=n {
                let tk = near.t + (t - near.t) * F::from_count(k) / F::from_count(n);
                y = solve_front(fam, y, tk)?;
            }
            Some(y)
        })?;
        (!collapsed(&y)).then(|| to_sample(fam, &y, t))
    }
}

/// Single-valued profile at `t`: the overhang between the front endpoints
/// is removed and replaced by the jump pair at `x_s`.
pub fn cut_profile<F: Scalar>(
    fam: &SolutionFamily<F>,
    t: F,
    rho_grid: &[F],
    front: &ShockFront<F>,
) -> Result<Vec<ProfileSample<F>>, SingularityError> {
    cut_profile_multi(fam, t, rho_grid, std::slice::from_ref(front))
}

pub fn cut_profile_multi<F: Scalar>(
    fam: &SolutionFamily<F>,
    t: F,
    rho_grid: &[F],
    fronts: &[ShockFront<F>],
) -> Result<Vec<ProfileSample<F>>, SingularityError> {
    let mut samples = fam.profile(t, rho_grid)?;
    for front in fronts {
        let Some(s) = front.state_at(fam, t) else {
            continue;
        };
        let (lo, hi) = if s.u1 < s.u2 {
            (s.u1, s.u2)
        } else {
            (s.u2, s.u1)
        };
        samples.retain(|p| !(p.u > lo && p.u < hi));
        for (u, rho, branch) in [(s.u1, s.rho1, s.branch1), (s.u2, s.rho2, s.branch2)] {
            samples.push(ProfileSample {
                t,
                x: s.x_s,
                rho,
                u,
                branch,
            });
        }
        samples = normalize_curve(samples);
    }
    Ok(samples)
}

//! The separated solution family of the quotient wave equation and its exact
//! quadratures `t(u, rho)`, `x(u, rho)`.
//!
//! With `K(rho) = alpha2/rho + lambda IQ/rho - lambda Q` the surface partials
//! collapse to
//!
//! ```text
//! t_u = lambda u + alpha0        t_rho = -K / rho
//! x_u = u t_u + K                x_rho = -rho A^2 t_u + u t_rho
//! ```
//!
//! and the fold indicator is `t_u x_rho - t_rho x_u = K^2/rho - rho A^2 t_u^2`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::geometry::SurfaceParametrization;
use crate::numeric;
use crate::scalar::{c, f64_of, Scalar};
use crate::thermo::{power_law_model, HomentropicModel, RhoDomain, ThermoError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("lambda = 0: branch resolution is undefined")]
    DegenerateFamily,
    #[error("rho={rho} is outside the support at t={t}: D={d}")]
    OutsideSupport { rho: f64, t: f64, d: f64 },
    #[error(transparent)]
    Thermo(#[from] ThermoError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn sign<F: Scalar>(self) -> F {
        match self {
            Branch::Plus => F::one(),
            Branch::Minus => -F::one(),
        }
    }

    pub fn other(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown branch {0:?}; expected plus or minus")]
pub struct ParseBranchError(pub String);

impl FromStr for Branch {
    type Err = ParseBranchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            other => Err(ParseBranchError(other.to_string())),
        }
    }
}

/// One point of a density profile at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample<F> {
    pub t: F,
    pub x: F,
    pub rho: F,
    pub u: F,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePartials<F> {
    pub t_u: F,
    pub t_rho: F,
    pub x_u: F,
    pub x_rho: F,
}

impl<F: Scalar> SurfacePartials<F> {
    pub fn fold_indicator(&self) -> F {
        self.t_u * self.x_rho - self.t_rho * self.x_u
    }
}

/// Second partials `f_uu`, `f_rhorho` of a function on the `(u, rho)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondPartials<F> {
    pub uu: F,
    pub rhorho: F,
}

/// `f_uu - A(rho)^-2 f_rhorho`.
pub fn wave_residual<F: Scalar>(
    f: impl Fn(F, F) -> SecondPartials<F>,
    u: F,
    rho: F,
    hm: &HomentropicModel<F>,
) -> F {
    let d = f(u, rho);
    let a = hm.a(rho);
    d.uu - d.rhorho / (a * a)
}

/// Quadratures of the power-law case written directly in `(A0, m)`, with the
/// sum of absolute terms for relative comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawQuadrature<F> {
    pub t: F,
    pub x: F,
    pub t_scale: F,
    pub x_scale: F,
}

#[derive(Debug, Clone)]
pub struct SolutionFamily<F: Scalar> {
    pub lambda: F,
    pub alpha0: F,
    pub alpha2: F,
    pub t0: F,
    pub x0: F,
    pub hm: HomentropicModel<F>,
}

impl<F: Scalar> SolutionFamily<F> {
    pub fn new(lambda: F, alpha0: F, alpha2: F, t0: F, x0: F, hm: HomentropicModel<F>) -> Self {
        Self {
            lambda,
            alpha0,
            alpha2,
            t0,
            x0,
            hm,
        }
    }

    /// Reference family: `lambda = 1, alpha0 = 1, alpha2 = -2, t0 = 1, x0 = 0`
    /// on the power law `A = rho^(-2/3)` (the `n = 3` ideal-gas exponent).
    pub fn reference() -> Self {
        let domain = RhoDomain::new(c(1e-6), c(1e5)).expect("valid reference domain");
        let hm = power_law_model(F::one(), c(-2.0 / 3.0), domain).expect("valid reference law");
        Self::new(F::one(), F::one(), c(-2.0), F::one(), F::zero(), hm)
    }

    fn require_lambda(&self) -> Result<(), FamilyError> {
        if self.lambda == F::zero() {
            Err(FamilyError::DegenerateFamily)
        } else {
            Ok(())
        }
    }

    /// `K(rho) = alpha2/rho + lambda IQ/rho - lambda Q`.
    pub fn k_term(&self, rho: F) -> F {
        (self.alpha2 + self.lambda * self.hm.iq(rho)) / rho - self.lambda * self.hm.q(rho)
    }

    pub fn t_of(&self, u: F, rho: F) -> F {
        let l = self.lambda;
        l * u * u * c(0.5)
            + self.alpha0 * u
            + self.alpha2 / rho
            + l * self.hm.iq(rho) / rho
            + self.t0
    }

    pub fn x_of(&self, u: F, rho: F) -> F {
        let l = self.lambda;
        let (q, iq) = (self.hm.q(rho), self.hm.iq(rho));
        l * u * u * u / c(3.0) - l * u * q
            + self.alpha0 * u * u * c(0.5)
            + l * u * iq / rho
            + self.alpha2 * u / rho
            - self.alpha0 * q
            + self.x0
    }

    /// Radicand factor `D(rho, t) = rho lambda (t - t0) + rho alpha0^2/2
    /// - lambda alpha2 - lambda^2 IQ(rho)`.
    pub fn radicand(&self, rho: F, t: F) -> F {
        let l = self.lambda;
        rho * l * (t - self.t0) + rho * self.alpha0 * self.alpha0 * c(0.5)
            - l * self.alpha2
            - l * l * self.hm.iq(rho)
    }

    /// `U±(rho, t) = -alpha0/lambda ± sqrt(2 rho D) / (lambda rho)`.
    pub fn branch_u(&self, rho: F, t: F, branch: Branch) -> Result<F, FamilyError> {
        self.require_lambda()?;
        self.hm.domain().check(rho)?;
        let d = self.radicand(rho, t);
        if !(d >= F::zero()) {
            return Err(FamilyError::OutsideSupport {
                rho: f64_of(rho),
                t: f64_of(t),
                d: f64_of(d),
            });
        }
        Ok(self.u_from_radicand(rho, d, branch))
    }

    pub(crate) fn u_from_radicand(&self, rho: F, d: F, branch: Branch) -> F {
        let s = (c::<F>(2.0) * rho * d.max(F::zero())).sqrt() / (self.lambda * rho);
        -self.alpha0 / self.lambda + branch.sign::<F>() * s
    }

    /// Branch a surface point lies on: `plus` when `lambda u + alpha0 >= 0`.
    pub fn branch_of(&self, u: F) -> Branch {
        if self.lambda * u + self.alpha0 >= F::zero() {
            Branch::Plus
        } else {
            Branch::Minus
        }
    }

    pub fn partials(&self, u: F, rho: F) -> SurfacePartials<F> {
        let k = self.k_term(rho);
        let t_u = self.lambda * u + self.alpha0;
        let t_rho = -k / rho;
        SurfacePartials {
            t_u,
            t_rho,
            x_u: u * t_u + k,
            x_rho: -self.hm.rho_a2(rho) * t_u + u * t_rho,
        }
    }

    /// `det ∂(t, x)/∂(u, rho)` on the solution surface.
    pub fn fold_indicator(&self, u: F, rho: F) -> F {
        self.partials(u, rho).fold_indicator()
    }

    /// Coefficients of `du` and `drho` in the closed 1-form
    /// `dx + du_coeff du + drho_coeff drho`.
    ///
    /// Written out term by term, independently of [`Self::partials`].
    pub fn varkappa_coeffs(&self, u: F, rho: F) -> (F, F) {
        let (l, a0, a2) = (self.lambda, self.alpha0, self.alpha2);
        let (q, iq, ra2) = (self.hm.q(rho), self.hm.iq(rho), self.hm.rho_a2(rho));
        let r2 = rho * rho;
        let du = -(l * u * u + a0 * u - l * q + l * iq / rho + a2 / rho);
        let drho = l * u * iq / r2 - l * u * q / rho + ra2 * (l * u + a0) + a2 * u / r2;
        (du, drho)
    }

    /// Second partials of `f = rho mu(u) + nu(rho)` with `mu'' = lambda` and
    /// `nu'' = lambda rho A^2`, the separated solution generating the family.
    pub fn separated_second_partials(&self, u: F, rho: F) -> SecondPartials<F> {
        let _ = u;
        SecondPartials {
            uu: rho * self.lambda,
            rhorho: self.lambda * self.hm.rho_a2(rho),
        }
    }

    /// `(u, rho) -> (t, x, u, rho)` with analytic partials.
    pub fn solution_surface(&self) -> SurfaceParametrization<F> {
        let fam = self.clone();
        let fam_j = self.clone();
        SurfaceParametrization::new(move |u, rho| [fam.t_of(u, rho), fam.x_of(u, rho), u, rho])
            .with_jacobian(move |u, rho| {
                let p = fam_j.partials(u, rho);
                [
                    [p.t_u, p.t_rho],
                    [p.x_u, p.x_rho],
                    [F::one(), F::zero()],
                    [F::zero(), F::one()],
                ]
            })
    }

    /// Quadratures in the closed `(A0, m)` form; `None` unless the model is a
    /// power law with `(m + 1)(2m + 3) != 0`.
    pub fn power_law_quadratures(&self, u: F, rho: F) -> Option<PowerLawQuadrature<F>> {
        let (a0, m) = self.hm.power_law()?;
        let d = (m + F::one()) * (c::<F>(2.0) * m + c(3.0));
        if d == F::zero() {
            return None;
        }
        let (l, al0, al2) = (self.lambda, self.alpha0, self.alpha2);
        let a2 = a0 * a0;
        let two = c::<F>(2.0);
        let t_terms = [
            l * u * u * c(0.5),
            al0 * u,
            al2 / rho,
            l * a2 * rho.powf(two * m + two) / (two * d),
            self.t0,
        ];
        let inner = [
            al2 * u,
            rho * l * u * u * u / c(3.0),
            rho * al0 * u * u * c(0.5),
            rho * self.x0,
        ];
        let tail =
            a2 * rho.powf(two * m + c(3.0)) * (m * (l * u + al0) + l * u + c::<F>(1.5) * al0);
        let x = (d * inner.iter().fold(F::zero(), |s, v| s + *v) - tail) / (rho * d);
        let x_scale = (d.abs() * inner.iter().fold(F::zero(), |s, v| s + v.abs()) + tail.abs())
            / (rho * d).abs();
        Some(PowerLawQuadrature {
            t: t_terms.iter().fold(F::zero(), |s, v| s + *v),
            x,
            t_scale: t_terms.iter().fold(F::zero(), |s, v| s + v.abs()),
            x_scale,
        })
    }

    /// Largest density of the first support interval at time `t`: the first
    /// ascending sign change of `D(·, t)` from non-negative to negative over
    /// the model domain.
    pub fn apex(&self, t: F) -> Option<F> {
        let dom = self.hm.domain();
        let grid = dom.grid(600);
        let mut prev: Option<(F, F)> = None;
        for &r in &grid {
            let d = self.radicand(r, t);
            if !d.is_finite() {
                prev = None;
                continue;
            }
            if let Some((r0, d0)) = prev {
                if d0 >= F::zero() && d < F::zero() {
                    let mut root =
                        numeric::brent(|s| self.radicand(s, t), r0, r, r0 * F::epsilon() * c(4.0))?;
                    while self.radicand(root, t) < F::zero() && root > r0 {
                        root = root - root * F::epsilon() * c(4.0);
                    }
                    return Some(root.max(r0));
                }
            }
            prev = Some((r, d));
        }
        None
    }

    /// Densities graded toward the apex at time `t`: half log-spaced from
    /// `lo`, half clustered as `apex (1 - s^2)`.
    pub fn graded_grid(&self, t: F, lo: F, n: usize) -> Vec<F> {
        let n = n.max(4);
        let Some(top) = self.apex(t) else {
            return Vec::new();
        };
        if !(lo < top) {
            return vec![top];
        }
        let mut g = numeric::log_grid(lo, top, n / 2);
        let s_max = (F::one() - lo / top).sqrt();
        g.extend(
            numeric::lin_grid(s_max, F::zero(), n - n / 2)
                .into_iter()
                .map(|s| top * (F::one() - s * s)),
        );
        g.retain(|r| *r >= lo && *r <= top);
        g.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        let tol = c::<F>(1e-12);
        g.dedup_by(|b, a| (*b - *a).abs() <= tol * a.abs());
        g
    }

    /// Multivalued density profile at time `t`.
    ///
    /// Both branches are sampled on every feasible density of the grid. The
    /// samples are returned in curve order: at fixed `t` the velocity
    /// parametrises the solution curve, so samples are sorted by `u` and the
    /// list is oriented so that `x` increases from its first to its last entry.
    /// Consecutive samples within `1e-12` in `(x, rho)` are merged.
    pub fn profile(&self, t: F, rho_grid: &[F]) -> Result<Vec<ProfileSample<F>>, FamilyError> {
        self.require_lambda()?;
        let dom = self.hm.domain();
        let mut out = Vec::with_capacity(rho_grid.len() * 2);
        for &rho in rho_grid {
            dom.check(rho)?;
            let d = self.radicand(rho, t);
            if !(d >= F::zero()) {
                continue;
            }
            for branch in Branch::BOTH {
                let u = self.u_from_radicand(rho, d, branch);
                out.push(ProfileSample {
                    t,
                    x: self.x_of(u, rho),
                    rho,
                    u,
                    branch,
                });
            }
        }
        Ok(normalize_curve(out))
    }
}

/// Sorts samples along the curve (by `u`), orients it so `x` runs from low to
/// high end to end, and merges near-duplicates.
pub fn normalize_curve<F: Scalar>(mut samples: Vec<ProfileSample<F>>) -> Vec<ProfileSample<F>> {
    samples.sort_by(|a, b| a.u.partial_cmp(&b.u).unwrap_or(std::cmp::Ordering::Equal));
    if let (Some(first), Some(last)) = (samples.first(), samples.last()) {
        if first.x > last.x {
            samples.reverse();
        }
    }
    let tol = c::<F>(1e-12);
    samples.dedup_by(|b, a| (a.x - b.x).abs() <= tol && (a.rho - b.rho).abs() <= tol);
    samples
}

/// Number of turning points of `x` along a curve-ordered profile.
pub fn fold_count<F: Scalar>(profile: &[ProfileSample<F>]) -> usize {
    let mut last_sign = 0i8;
    let mut folds = 0;
    for w in profile.windows(2) {
        let dx = w[1].x - w[0].x;
        let s = if dx > F::zero() {
            1
        } else if dx < F::zero() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last_sign != 0 && s != last_sign {
                folds += 1;
            }
            last_sign = s;
        }
    }
    folds
}

/// Number of points of the polyline through a curve-ordered profile lying
/// over position `x`.
pub fn count_preimages<F: Scalar>(profile: &[ProfileSample<F>], x: F) -> usize {
    profile
        .windows(2)
        .filter(|w| {
            let (a, b) = (w[0].x, w[1].x);
            (a <= x && x < b) || (b <= x && x < a)
        })
        .count()
        + usize::from(profile.last().is_some_and(|s| s.x == x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hm() -> HomentropicModel<f64> {
        power_law_model(1.0, -2.0 / 3.0, RhoDomain::new(1e-6, 1e5).unwrap()).unwrap()
    }

    fn reference() -> SolutionFamily<f64> {
        SolutionFamily::new(1.0, 1.0, -2.0, 1.0, 0.0, hm())
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn quadrature_values() {
        let f = reference();
        assert!(close(f.t_of(0.0, 1.0), -0.1, 1e-14));
        assert!(close(f.t_of(-2.0, 1.0), -0.1, 1e-14));
        assert!(close(f.x_of(0.0, 1.0), -1.5, 1e-14));
        let flat = SolutionFamily::new(0.0, 1.0, 0.0, 0.0, 0.0, hm());
        for u in [-1.0, 0.3, 2.0] {
            assert_eq!(flat.t_of(u, 2.0), u);
        }
        let still = SolutionFamily::new(0.0, 0.0, 0.0, 0.0, 0.7, hm());
        assert_eq!(still.x_of(1.3, 0.4), 0.7);
    }

    #[test]
    fn branch_resolution() {
        let f = reference();
        assert!(close(f.radicand(1.0, -0.1), 0.5, 1e-14));
        assert!(close(
            f.branch_u(1.0, -0.1, Branch::Plus).unwrap(),
            0.0,
            1e-14
        ));
        assert!(close(
            f.branch_u(1.0, -0.1, Branch::Minus).unwrap(),
            -2.0,
            1e-14
        ));
        assert!(matches!(
            f.branch_u(1.0, -100.0, Branch::Plus),
            Err(FamilyError::OutsideSupport { .. })
        ));
        let flat = SolutionFamily::new(0.0, 1.0, 0.0, 0.0, 0.0, hm());
        assert_eq!(
            flat.branch_u(1.0, 0.0, Branch::Plus),
            Err(FamilyError::DegenerateFamily)
        );
    }

    #[test]
    fn coalescence_at_vanishing_radicand() {
        let f = reference();
        let t = 3.0;
        let top = f.apex(t).unwrap();
        assert!(f.radicand(top, t).abs() < 1e-9);
        let up = f.branch_u(top * (1.0 - 1e-12), t, Branch::Plus).unwrap();
        let um = f.branch_u(top * (1.0 - 1e-12), t, Branch::Minus).unwrap();
        assert!((up - um).abs() < 1e-4);
        assert!((up + 1.0).abs() < 1e-4);
    }

    #[test]
    fn round_trip_random() {
        let f = reference();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 200 {
            let rho = rng.random_range(0.05..8.0);
            let t = rng.random_range(-1.0..6.0);
            if f.radicand(rho, t) < 0.0 {
                continue;
            }
            for b in Branch::BOTH {
                let u = f.branch_u(rho, t, b).unwrap();
                assert!((f.t_of(u, rho) - t).abs() < 1e-10 * (1.0 + t.abs()));
                assert_eq!(f.branch_of(u), b);
            }
            checked += 1;
        }
    }

    #[test]
    fn partials_match_differences() {
        let f = reference();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let (u, rho) = (rng.random_range(-3.0..3.0), rng.random_range(0.2..5.0));
            let p = f.partials(u, rho);
            let h = 1e-6;
            let fd = |g: &dyn Fn(f64, f64) -> f64, du: f64, dr: f64| {
                (g(u + du, rho + dr) - g(u - du, rho - dr)) / (2.0 * h)
            };
            let t = |a, b| f.t_of(a, b);
            let x = |a, b| f.x_of(a, b);
            assert!(close(p.t_u, fd(&t, h, 0.0), 1e-7));
            assert!(close(p.t_rho, fd(&t, 0.0, h), 1e-7));
            assert!(close(p.x_u, fd(&x, h, 0.0), 1e-7));
            assert!(close(p.x_rho, fd(&x, 0.0, h), 1e-7));
        }
    }

    #[test]
    fn written_out_partials() {
        let f = reference();
        let (l, a0, a2) = (f.lambda, f.alpha0, f.alpha2);
        for (u, rho) in [(0.3, 0.7), (-1.2, 2.5), (2.0, 1.0)] {
            let (q, iq, ra2) = (f.hm.q(rho), f.hm.iq(rho), f.hm.rho_a2(rho));
            let p = f.partials(u, rho);
            let t_rho = -a2 / (rho * rho) - l * iq / (rho * rho) + l * q / rho;
            let x_u = l * u * u - l * q + a0 * u + l * iq / rho + a2 / rho;
            let x_rho = -l * u * ra2 + l * u * q / rho
                - l * u * iq / (rho * rho)
                - a2 * u / (rho * rho)
                - a0 * ra2;
            assert!(close(p.t_rho, t_rho, 1e-13));
            assert!(close(p.x_u, x_u, 1e-13));
            assert!(close(p.x_rho, x_rho, 1e-13));
            let k = f.k_term(rho);
            let direct = k * k / rho - ra2 * p.t_u * p.t_u;
            assert!(close(p.fold_indicator(), direct, 1e-12));
        }
    }

    #[test]
    fn varkappa_is_closed_and_integrates_x() {
        let f = reference();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let (u, rho) = (rng.random_range(-3.0..3.0), rng.random_range(0.2..5.0));
            let h = 1e-5;
            let d_du_drho =
                (f.varkappa_coeffs(u, rho + h).0 - f.varkappa_coeffs(u, rho - h).0) / (2.0 * h);
            let d_drho_du =
                (f.varkappa_coeffs(u + h, rho).1 - f.varkappa_coeffs(u - h, rho).1) / (2.0 * h);
            assert!((d_du_drho - d_drho_du).abs() < 1e-6 * (1.0 + d_du_drho.abs()));
            let (cu, cr) = f.varkappa_coeffs(u, rho);
            let p = f.partials(u, rho);
            assert!((p.x_u + cu).abs() < 1e-10 * (1.0 + cu.abs()));
            assert!((p.x_rho + cr).abs() < 1e-10 * (1.0 + cr.abs()));
        }
    }

    #[test]
    fn separated_solution_solves_wave_equation() {
        let f = reference();
        for (u, rho) in [(0.0, 1.0), (1.5, 0.3), (-2.0, 7.0)] {
            let r = wave_residual(|a, b| f.separated_second_partials(a, b), u, rho, &f.hm);
            assert!(r.abs() < 1e-9);
        }
        let lin = |_: f64, _: f64| SecondPartials {
            uu: 0.0,
            rhorho: 0.0,
        };
        assert_eq!(wave_residual(lin, 0.4, 2.0, &f.hm), 0.0);
        let unit = power_law_model(1.0, 0.0, RhoDomain::new(0.1, 10.0).unwrap()).unwrap();
        let sq = |_: f64, _: f64| SecondPartials {
            uu: 2.0,
            rhorho: 0.0,
        };
        assert_eq!(wave_residual(sq, 0.4, 2.0, &unit), 2.0);
    }

    #[test]
    fn power_law_quadratures_agree() {
        let f = reference();
        let closed = f.power_law_quadratures(0.0, 1.0).unwrap();
        assert!(close(closed.x, -1.5, 1e-12));
        for u in numeric::lin_grid(-3.0, 3.0, 13) {
            for rho in numeric::log_grid(0.1, 10.0, 13) {
                let q = f.power_law_quadratures(u, rho).unwrap();
                assert!((q.t - f.t_of(u, rho)).abs() <= 1e-12 * q.t_scale);
                assert!((q.x - f.x_of(u, rho)).abs() <= 1e-12 * q.x_scale);
            }
        }
    }

    #[test]
    fn profile_contents() {
        let f = reference();
        let p = f.profile(-0.1, &[0.5, 1.0, 2.0]).unwrap();
        let hit = p
            .iter()
            .find(|s| s.branch == Branch::Plus && s.rho == 1.0)
            .unwrap();
        assert!(close(hit.x, -1.5, 1e-12) && hit.u.abs() < 1e-14);
        let partner = p
            .iter()
            .find(|s| s.branch == Branch::Minus && s.rho == 1.0)
            .unwrap();
        assert!(close(partner.u, -2.0, 1e-12));
        assert!(close(partner.x, f.x_of(-2.0, 1.0), 1e-12));
        for s in &p {
            assert!((f.t_of(s.u, s.rho) - s.t).abs() < 1e-10);
            assert!((f.x_of(s.u, s.rho) - s.x).abs() < 1e-10);
        }
        assert!(f.profile(-1e6, &[0.5, 1.0, 2.0]).unwrap().is_empty());
    }

    #[test]
    fn single_valued_before_and_folded_after() {
        let f = reference();
        let early = f.profile(0.0, &f.graded_grid(0.0, 1e-3, 800)).unwrap();
        assert_eq!(fold_count(&early), 0);
        let late = f.profile(3.75, &f.graded_grid(3.75, 1e-3, 800)).unwrap();
        assert!(fold_count(&late) >= 1);
        let multi = late
            .windows(2)
            .any(|w| count_preimages(&late, 0.5 * (w[0].x + w[1].x)) >= 3);
        assert!(multi);
    }

    #[test]
    fn dedup_merges_apex() {
        let s = ProfileSample {
            t: 0.0,
            x: 1.0,
            rho: 2.0,
            u: 0.5,
            branch: Branch::Plus,
        };
        let near = ProfileSample {
            u: 0.5 + 1e-9,
            x: 1.0 + 1e-13,
            branch: Branch::Minus,
            ..s
        };
        let far = ProfileSample {
            u: 3.0,
            x: 4.0,
            ..s
        };
        assert_eq!(normalize_curve(vec![far, near, s]).len(), 2);
        let f = reference();
        let top = f.apex(1.0).unwrap();
        let p = f.profile(1.0, &[0.5, top]).unwrap();
        let (a, b) = (p[1], p[2]);
        assert!((a.x - b.x).abs() < 1e-6 && a.rho == b.rho);
    }

    #[test]
    fn branch_parse() {
        assert_eq!("plus".parse::<Branch>().unwrap(), Branch::Plus);
        assert_eq!(" Minus ".parse::<Branch>().unwrap(), Branch::Minus);
        assert!("left".parse::<Branch>().is_err());
        assert_eq!(Branch::Plus.other().to_string(), "minus");
    }

    proptest! {
        #[test]
        fn quadratic_symmetry(u in -5.0f64..5.0, rho in 0.05f64..20.0) {
            let f = reference();
            let mirror = -2.0 * f.alpha0 / f.lambda - u;
            let (a, b) = (f.t_of(u, rho), f.t_of(mirror, rho));
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }

        #[test]
        fn preimages_of_curve_ordered_profile(t in 0.0f64..1.5) {
            let f = reference();
            let p = f.profile(t, &f.graded_grid(t, 1e-2, 300)).unwrap();
            prop_assert_eq!(fold_count(&p), 0);
            let mid = 0.5 * (p[0].x + p[p.len() - 1].x);
            prop_assert_eq!(count_preimages(&p, mid), 1);
        }
    }
}

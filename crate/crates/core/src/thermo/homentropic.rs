//! Thermodynamics collapsed onto a single isentrope: every quantity becomes a
//! function of density alone.

use std::fmt;
use std::sync::Arc;

use super::potential::ThermodynamicModel;
use super::{entropy_unchecked, ThermoError};
use crate::numeric;
use crate::scalar::{c, Scalar};

/// Closed density interval `[min, max]` on which a model may be evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoDomain<F> {
    pub min: F,
    pub max: F,
}

impl<F: Scalar> RhoDomain<F> {
    pub fn new(min: F, max: F) -> Result<Self, ThermoError> {
        if !(min > F::zero()) || !(max > min) || !max.is_finite() {
            return Err(ThermoError::InvalidDomain {
                min: min.to_f64().unwrap_or(f64::NAN),
                max: max.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { min, max })
    }

    #[inline]
    pub fn contains(&self, rho: F) -> bool {
        rho >= self.min && rho <= self.max
    }

    pub fn check(&self, rho: F) -> Result<(), ThermoError> {
        if self.contains(rho) {
            Ok(())
        } else {
            Err(ThermoError::OutsideDomain {
                rho: rho.to_f64().unwrap_or(f64::NAN),
                min: self.min.to_f64().unwrap_or(f64::NAN),
                max: self.max.to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    /// Log-spaced sample grid over the whole interval.
    pub fn grid(&self, n: usize) -> Vec<F> {
        numeric::log_grid(self.min, self.max, n)
    }

    /// Quadrature anchor: `rho = 1` when inside the interval, else the
    /// nearest end.
    pub fn anchor(&self) -> F {
        F::one().max(self.min).min(self.max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionKind {
    ClosedForm,
    Numeric,
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionKind::ClosedForm => "closed-form",
            ReductionKind::Numeric => "numeric",
        })
    }
}

/// Density-only description of a homentropic gas.
///
/// `q` is an antiderivative of `rho A(rho)^2 = p'(rho)/rho` and `iq` an
/// antiderivative of `q`. Their additive constants are gauge: they are
/// absorbed by the free constants of the solution family.
pub trait Homentropic<F: Scalar>: Send + Sync {
    fn domain(&self) -> RhoDomain<F>;
    fn temperature(&self, _rho: F) -> Option<F> {
        None
    }
    fn pressure(&self, rho: F) -> F;
    fn dpressure(&self, rho: F) -> F;
    /// `A(rho) = sqrt(p'(rho)) / rho`.
    fn sound_coeff(&self, rho: F) -> F {
        self.dpressure(rho).sqrt() / rho
    }
    fn q(&self, rho: F) -> F;
    fn iq(&self, rho: F) -> F;
    fn kind(&self) -> ReductionKind;
    fn descriptor(&self) -> String;
    /// `(A0, m)` when `A(rho) = A0 rho^m` exactly.
    fn power_law(&self) -> Option<(F, F)> {
        None
    }
}

/// Shared handle to a homentropic model; evaluators return NaN (or `None`
/// for temperature) outside the declared density interval.
#[derive(Clone)]
pub struct HomentropicModel<F: Scalar> {
    inner: Arc<dyn Homentropic<F>>,
    s0: Option<F>,
}

impl<F: Scalar> fmt::Debug for HomentropicModel<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HomentropicModel")
            .field("descriptor", &self.inner.descriptor())
            .field("kind", &self.inner.kind())
            .field("s0", &self.s0)
            .finish()
    }
}

impl<F: Scalar> HomentropicModel<F> {
    pub fn new(inner: impl Homentropic<F> + 'static) -> Self {
        Self {
            inner: Arc::new(inner),
            s0: None,
        }
    }

    pub(crate) fn with_entropy(mut self, s0: F) -> Self {
        self.s0 = Some(s0);
        self
    }

    /// Model given directly by its pressure law and derivative.
    pub fn from_pressure(
        pressure: impl Fn(F) -> F + Send + Sync + 'static,
        dpressure: impl Fn(F) -> F + Send + Sync + 'static,
        domain: RhoDomain<F>,
        descriptor: impl Into<String>,
    ) -> Self {
        Self::new(PressureLaw {
            pressure: Arc::new(pressure),
            dpressure: Arc::new(dpressure),
            domain,
            descriptor: descriptor.into(),
        })
    }

    /// Model given by the coefficient `A(rho)`; `p` is recovered by
    /// integrating `rho^2 A^2` from the domain anchor.
    pub fn from_sound_coefficient(
        a: impl Fn(F) -> F + Send + Sync + 'static,
        domain: RhoDomain<F>,
        descriptor: impl Into<String>,
    ) -> Self {
        let a = Arc::new(a);
        let a2 = Arc::clone(&a);
        let dp = move |rho: F| rho * rho * a(rho) * a(rho);
        let anchor = domain.anchor();
        let p = move |rho: F| {
            numeric::integrate(
                |s: F| s * s * a2(s) * a2(s),
                anchor,
                rho,
                quad_abs(),
                quad_rel(),
            )
            .unwrap_or_else(F::nan)
        };
        Self::from_pressure(p, dp, domain, descriptor)
    }

    pub fn domain(&self) -> RhoDomain<F> {
        self.inner.domain()
    }

    pub fn kind(&self) -> ReductionKind {
        self.inner.kind()
    }

    pub fn descriptor(&self) -> String {
        self.inner.descriptor()
    }

    /// Entropy level of the isentrope, when the model came from a reduction.
    pub fn entropy_level(&self) -> Option<F> {
        self.s0
    }

    pub fn power_law(&self) -> Option<(F, F)> {
        self.inner.power_law()
    }

    #[inline]
    fn guard(&self, rho: F, value: impl FnOnce() -> F) -> F {
        if self.inner.domain().contains(rho) {
            value()
        } else {
            F::nan()
        }
    }

    pub fn temperature(&self, rho: F) -> Option<F> {
        if self.inner.domain().contains(rho) {
            self.inner.temperature(rho)
        } else {
            None
        }
    }

    pub fn pressure(&self, rho: F) -> F {
        self.guard(rho, || self.inner.pressure(rho))
    }

    pub fn dpressure(&self, rho: F) -> F {
        self.guard(rho, || self.inner.dpressure(rho))
    }

    /// `A(rho)`.
    pub fn a(&self, rho: F) -> F {
        self.guard(rho, || self.inner.sound_coeff(rho))
    }

    /// `rho A(rho)^2`, the derivative of `q`.
    pub fn rho_a2(&self, rho: F) -> F {
        let a = self.a(rho);
        rho * a * a
    }

    pub fn q(&self, rho: F) -> F {
        self.guard(rho, || self.inner.q(rho))
    }

    pub fn iq(&self, rho: F) -> F {
        self.guard(rho, || self.inner.iq(rho))
    }

    /// Fails with [`ThermoError::Hyperbolicity`] at the first grid density
    /// where `p'(rho) <= 0`.
    pub fn check_hyperbolic(&self, samples: usize) -> Result<(), ThermoError> {
        for rho in self.domain().grid(samples) {
            let dp = self.dpressure(rho);
            if !(dp > F::zero()) {
                return Err(ThermoError::Hyperbolicity {
                    rho: rho.to_f64().unwrap_or(f64::NAN),
                    dp: dp.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }
}

pub(crate) fn quad_abs<F: Scalar>() -> F {
    F::epsilon() * c(10.0)
}

pub(crate) fn quad_rel<F: Scalar>() -> F {
    F::epsilon() * c(100.0)
}

/// `A(rho) = A0 rho^m` with closed-form `p`, `q` and `iq`.
#[derive(Debug, Clone, Copy)]
pub struct PowerLaw<F> {
    pub a0: F,
    pub m: F,
    domain: RhoDomain<F>,
    /// `T(rho) = coeff * rho^exponent` when known.
    temperature: Option<(F, F)>,
}

impl<F: Scalar> PowerLaw<F> {
    pub fn new(a0: F, m: F, domain: RhoDomain<F>) -> Result<Self, ThermoError> {
        if !(a0 > F::zero()) || !a0.is_finite() {
            return Err(ThermoError::InvalidParameter {
                name: "A0",
                value: a0.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !m.is_finite() {
            return Err(ThermoError::InvalidParameter {
                name: "m",
                value: m.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self {
            a0,
            m,
            domain,
            temperature: None,
        })
    }

    pub(crate) fn with_temperature(mut self, coeff: F, exponent: F) -> Self {
        self.temperature = Some((coeff, exponent));
        self
    }

    fn near(x: F, target: f64) -> bool {
        (x - c(target)).abs() <= F::epsilon() * c(16.0)
    }
}

impl<F: Scalar> Homentropic<F> for PowerLaw<F> {
    fn domain(&self) -> RhoDomain<F> {
        self.domain
    }

    fn temperature(&self, rho: F) -> Option<F> {
        self.temperature.map(|(k, e)| k * rho.powf(e))
    }

    fn pressure(&self, rho: F) -> F {
        let a2 = self.a0 * self.a0;
        let k = c::<F>(2.0) * self.m + c(3.0);
        if Self::near(k, 0.0) {
            a2 * rho.ln()
        } else {
            a2 * rho.powf(k) / k
        }
    }

    fn dpressure(&self, rho: F) -> F {
        self.a0 * self.a0 * rho.powf(c::<F>(2.0) * self.m + c(2.0))
    }

    fn sound_coeff(&self, rho: F) -> F {
        self.a0 * rho.powf(self.m)
    }

    fn q(&self, rho: F) -> F {
        let a2 = self.a0 * self.a0;
        let k = c::<F>(2.0) * self.m + c(2.0);
        if Self::near(k, 0.0) {
            a2 * rho.ln()
        } else {
            a2 * rho.powf(k) / k
        }
    }

    fn iq(&self, rho: F) -> F {
        let a2 = self.a0 * self.a0;
        let k = c::<F>(2.0) * self.m + c(2.0);
        if Self::near(k, 0.0) {
            a2 * (rho * rho.ln() - rho)
        } else if Self::near(k, -1.0) {
            -a2 * rho.ln()
        } else {
            a2 * rho.powf(k + F::one()) / (k * (k + F::one()))
        }
    }

    fn kind(&self) -> ReductionKind {
        ReductionKind::ClosedForm
    }

    fn descriptor(&self) -> String {
        format!("power-law(A0={}, m={})", self.a0, self.m)
    }

    fn power_law(&self) -> Option<(F, F)> {
        Some((self.a0, self.m))
    }
}

/// Pressure law supplied as closures; `q` and `iq` by quadrature from the
/// domain anchor.
pub struct PressureLaw<F: Scalar> {
    pressure: Arc<dyn Fn(F) -> F + Send + Sync>,
    dpressure: Arc<dyn Fn(F) -> F + Send + Sync>,
    domain: RhoDomain<F>,
    descriptor: String,
}

impl<F: Scalar> Homentropic<F> for PressureLaw<F> {
    fn domain(&self) -> RhoDomain<F> {
        self.domain
    }
    fn pressure(&self, rho: F) -> F {
        (self.pressure)(rho)
    }
    fn dpressure(&self, rho: F) -> F {
        (self.dpressure)(rho)
    }
    fn q(&self, rho: F) -> F {
        let dp = &self.dpressure;
        numeric::integrate(
            |s: F| dp(s) / s,
            self.domain.anchor(),
            rho,
            quad_abs(),
            quad_rel(),
        )
        .unwrap_or_else(F::nan)
    }
    fn iq(&self, rho: F) -> F {
        let dp = &self.dpressure;
        numeric::integrate(
            |s: F| (rho - s) * dp(s) / s,
            self.domain.anchor(),
            rho,
            quad_abs(),
            quad_rel(),
        )
        .unwrap_or_else(F::nan)
    }
    fn kind(&self) -> ReductionKind {
        ReductionKind::Numeric
    }
    fn descriptor(&self) -> String {
        self.descriptor.clone()
    }
}

/// Isentrope of an arbitrary potential: `T(rho)` from `s(T, rho) = s0` by a
/// bracketed, bisection-safeguarded Newton solve in `ln T`.
pub struct NumericReduction<F: Scalar> {
    model: ThermodynamicModel<F>,
    s0: F,
    domain: RhoDomain<F>,
}

impl<F: Scalar> NumericReduction<F> {
    pub fn new(model: ThermodynamicModel<F>, s0: F, domain: RhoDomain<F>) -> Self {
        Self { model, s0, domain }
    }

    /// Solves for `T(rho)`; `Err` carries a reason when no bracket exists.
    pub fn solve_temperature(&self, rho: F) -> Result<F, ThermoError> {
        let pot = self.model.potential();
        let g = |y: F| {
            let t = y.exp();
            let s = entropy_unchecked(pot, rho, t) - self.s0;
            // ds/dlnT = T s_T = T (2 phi_T + T phi_TT)
            let ds = t * (c::<F>(2.0) * pot.phi_t(rho, t) + t * pot.phi_tt(rho, t));
            (s, ds)
        };
        let fail = |reason: &str| ThermoError::Reduction {
            rho: rho.to_f64().unwrap_or(f64::NAN),
            reason: reason.to_string(),
        };
        // expand a bracket in ln T around T = 1
        let limit = F::max_value().ln() * c(0.9);
        let mut step = F::one();
        let (mut lo, mut hi) = (-step, step);
        let mut found = false;
        while step <= limit {
            lo = -step;
            hi = step;
            let (glo, _) = g(lo);
            let (ghi, _) = g(hi);
            if glo.is_finite() && ghi.is_finite() && glo <= F::zero() && ghi >= F::zero() {
                found = true;
                break;
            }
            step = step * c(2.0);
        }
        if !found {
            return Err(fail(
                "entropy level not bracketed by ln T in the representable range",
            ));
        }
        let ftol = c::<F>(1e-13).max(F::solver_floor()) * F::one().max(self.s0.abs());
        numeric::safeguarded_newton(g, lo, hi, ftol)
            .map(F::exp)
            .ok_or_else(|| fail("Newton iteration did not converge"))
    }
}

impl<F: Scalar> Homentropic<F> for NumericReduction<F> {
    fn domain(&self) -> RhoDomain<F> {
        self.domain
    }

    fn temperature(&self, rho: F) -> Option<F> {
        self.solve_temperature(rho).ok()
    }

    fn pressure(&self, rho: F) -> F {
        match self.solve_temperature(rho) {
            Ok(t) => -rho * rho * t * self.model.potential().phi_rho(rho, t),
            Err(_) => F::nan(),
        }
    }

    fn dpressure(&self, rho: F) -> F {
        let pot = self.model.potential();
        let Ok(t) = self.solve_temperature(rho) else {
            return F::nan();
        };
        let two = c::<F>(2.0);
        let (ft, fr) = (pot.phi_t(rho, t), pot.phi_rho(rho, t));
        let (ftt, frr, ftr) = (
            pot.phi_tt(rho, t),
            pot.phi_rhorho(rho, t),
            pot.phi_trho(rho, t),
        );
        let s_t = two * ft + t * ftt;
        let s_r = fr + t * ftr;
        let dt_drho = -s_r / s_t;
        let p_t = -rho * rho * (fr + t * ftr);
        let p_r = -two * rho * t * fr - rho * rho * t * frr;
        p_t * dt_drho + p_r
    }

    fn q(&self, rho: F) -> F {
        numeric::integrate(
            |s: F| self.dpressure(s) / s,
            self.domain.anchor(),
            rho,
            quad_abs(),
            quad_rel(),
        )
        .unwrap_or_else(F::nan)
    }

    fn iq(&self, rho: F) -> F {
        numeric::integrate(
            |s: F| (rho - s) * self.dpressure(s) / s,
            self.domain.anchor(),
            rho,
            quad_abs(),
            quad_rel(),
        )
        .unwrap_or_else(F::nan)
    }

    fn kind(&self) -> ReductionKind {
        ReductionKind::Numeric
    }

    fn descriptor(&self) -> String {
        format!("isentrope(s0={}) of {}", self.s0, self.model.descriptor())
    }
}

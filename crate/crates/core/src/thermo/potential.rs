//! Massieu–Planck potentials of concrete gases.

use std::fmt;
use std::sync::Arc;

use super::ThermoError;
use crate::scalar::{c, Scalar};

/// A gas described by its Massieu–Planck potential `phi(rho, T)` and the
/// partial derivatives needed by the state equations and the homentropic
/// reduction.
pub trait MassieuPlanck<F: Scalar>: Send + Sync {
    fn phi(&self, rho: F, temp: F) -> F;
    fn phi_t(&self, rho: F, temp: F) -> F;
    fn phi_rho(&self, rho: F, temp: F) -> F;
    fn phi_tt(&self, rho: F, temp: F) -> F;
    fn phi_rhorho(&self, rho: F, temp: F) -> F;
    /// Mixed partial `phi_{T rho}`, required for `dp/drho` along an isentrope.
    fn phi_trho(&self, rho: F, temp: F) -> F;
    fn gas_constant(&self) -> F;
    fn descriptor(&self) -> String;

    /// Parameters when the potential is exactly an ideal gas, which unlocks
    /// the closed-form homentropic reduction.
    fn ideal_gas(&self) -> Option<IdealGasParams<F>> {
        None
    }
}

/// Ideal gas with `n` degrees of freedom and gas constant `r`; `s0` is the
/// entropy level used when the model is reduced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealGasParams<F> {
    pub n: F,
    pub r: F,
    pub s0: F,
}

impl<F: Scalar> IdealGasParams<F> {
    pub fn new(n: F, r: F, s0: F) -> Self {
        Self { n, r, s0 }
    }

    pub fn validate(&self) -> Result<(), ThermoError> {
        if !(self.n > F::zero()) || !self.n.is_finite() {
            return Err(ThermoError::InvalidParameter {
                name: "n",
                value: self.n.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !(self.r > F::zero()) || !self.r.is_finite() {
            return Err(ThermoError::InvalidParameter {
                name: "R",
                value: self.r.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !self.s0.is_finite() {
            return Err(ThermoError::InvalidParameter {
                name: "s0",
                value: self.s0.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }

    /// Exponent `m = 1/n - 1` of `A(rho) = A0 rho^m`.
    pub fn exponent_m(&self) -> F {
        F::one() / self.n - F::one()
    }

    /// Factor `T(rho) / rho^(2/n)` at entropy level `s0`.
    ///
    /// The potential carries no additive constant, so `s = phi + T phi_T`
    /// exceeds `R ln(T^(n/2)/rho)` by `R n / 2`; the factor is therefore
    /// `exp(2 s0 / (R n) - 1)`.
    pub fn temperature_factor(&self) -> F {
        (c::<F>(2.0) * self.s0 / (self.r * self.n) - F::one()).exp()
    }

    /// Amplitude `A0` of `A(rho) = A0 rho^m`.
    pub fn amplitude_a0(&self) -> F {
        (self.r * (F::one() + c::<F>(2.0) / self.n) * self.temperature_factor()).sqrt()
    }
}

/// `phi = (R n / 2) ln T - R ln rho`.
#[derive(Debug, Clone, Copy)]
pub struct IdealGas<F> {
    pub n: F,
    pub r: F,
    s0: F,
}

impl<F: Scalar> IdealGas<F> {
    pub fn new(params: IdealGasParams<F>) -> Result<Self, ThermoError> {
        params.validate()?;
        Ok(Self {
            n: params.n,
            r: params.r,
            s0: params.s0,
        })
    }
}

impl<F: Scalar> MassieuPlanck<F> for IdealGas<F> {
    fn phi(&self, rho: F, temp: F) -> F {
        self.r * self.n * c(0.5) * temp.ln() - self.r * rho.ln()
    }
    fn phi_t(&self, _rho: F, temp: F) -> F {
        self.r * self.n * c(0.5) / temp
    }
    fn phi_rho(&self, rho: F, _temp: F) -> F {
        -self.r / rho
    }
    fn phi_tt(&self, _rho: F, temp: F) -> F {
        -self.r * self.n * c(0.5) / (temp * temp)
    }
    fn phi_rhorho(&self, rho: F, _temp: F) -> F {
        self.r / (rho * rho)
    }
    fn phi_trho(&self, _rho: F, _temp: F) -> F {
        F::zero()
    }
    fn gas_constant(&self) -> F {
        self.r
    }
    fn descriptor(&self) -> String {
        format!("ideal-gas(n={}, R={}, phi-constant=0)", self.n, self.r)
    }
    fn ideal_gas(&self) -> Option<IdealGasParams<F>> {
        Some(IdealGasParams::new(self.n, self.r, self.s0))
    }
}

/// Ideal gas with a second virial correction, `p = R rho T (1 + b rho)`:
/// `phi = (R n / 2) ln T - R ln rho - R b rho`.
#[derive(Debug, Clone, Copy)]
pub struct VirialGas<F> {
    pub n: F,
    pub r: F,
    pub b: F,
}

impl<F: Scalar> VirialGas<F> {
    pub fn new(n: F, r: F, b: F) -> Result<Self, ThermoError> {
        IdealGasParams::new(n, r, F::zero()).validate()?;
        if !b.is_finite() {
            return Err(ThermoError::InvalidParameter {
                name: "b",
                value: b.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { n, r, b })
    }
}

impl<F: Scalar> MassieuPlanck<F> for VirialGas<F> {
    fn phi(&self, rho: F, temp: F) -> F {
        self.r * self.n * c(0.5) * temp.ln() - self.r * rho.ln() - self.r * self.b * rho
    }
    fn phi_t(&self, _rho: F, temp: F) -> F {
        self.r * self.n * c(0.5) / temp
    }
    fn phi_rho(&self, rho: F, _temp: F) -> F {
        -self.r / rho - self.r * self.b
    }
    fn phi_tt(&self, _rho: F, temp: F) -> F {
        -self.r * self.n * c(0.5) / (temp * temp)
    }
    fn phi_rhorho(&self, rho: F, _temp: F) -> F {
        self.r / (rho * rho)
    }
    fn phi_trho(&self, _rho: F, _temp: F) -> F {
        F::zero()
    }
    fn gas_constant(&self) -> F {
        self.r
    }
    fn descriptor(&self) -> String {
        format!("virial-gas(n={}, R={}, b={})", self.n, self.r, self.b)
    }
}

/// Shared handle to a Massieu–Planck potential.
#[derive(Clone)]
pub struct ThermodynamicModel<F: Scalar> {
    inner: Arc<dyn MassieuPlanck<F>>,
}

impl<F: Scalar> fmt::Debug for ThermodynamicModel<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ThermodynamicModel")
            .field("descriptor", &self.inner.descriptor())
            .finish()
    }
}

impl<F: Scalar> ThermodynamicModel<F> {
    pub fn from_potential(potential: impl MassieuPlanck<F> + 'static) -> Self {
        Self {
            inner: Arc::new(potential),
        }
    }

    pub fn potential(&self) -> &dyn MassieuPlanck<F> {
        self.inner.as_ref()
    }

    pub fn descriptor(&self) -> String {
        self.inner.descriptor()
    }

    pub fn gas_constant(&self) -> F {
        self.inner.gas_constant()
    }

    pub fn ideal_gas(&self) -> Option<IdealGasParams<F>> {
        self.inner.ideal_gas()
    }
}

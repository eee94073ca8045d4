//! Equilibrium thermodynamics through the Massieu–Planck potential, and the
//! homentropic reduction that closes the Euler system.
//!
//! A gas is a potential `phi(rho, T)`; the state equations are
//! `p = -rho^2 T phi_rho`, `e = T^2 phi_T` and the entropy is
//! `s = phi + T phi_T`. Fixing `s = s0` turns every quantity into a function
//! of density, collected in a [`HomentropicModel`].

mod homentropic;
mod potential;

pub use homentropic::{
    Homentropic, HomentropicModel, NumericReduction, PowerLaw, PressureLaw, ReductionKind,
    RhoDomain,
};
pub use potential::{IdealGas, IdealGasParams, MassieuPlanck, ThermodynamicModel, VirialGas};

use thiserror::Error;

use crate::scalar::{c, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThermoError {
    #[error("state outside the model domain: T={temperature}, rho={rho}")]
    Domain { temperature: f64, rho: f64 },
    #[error("density {rho} outside declared interval [{min}, {max}]")]
    OutsideDomain { rho: f64, min: f64, max: f64 },
    #[error("invalid density interval [{min}, {max}]")]
    InvalidDomain { min: f64, max: f64 },
    #[error("invalid model parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("homentropic reduction failed at rho={rho}: {reason}")]
    Reduction { rho: f64, reason: String },
    #[error("system not hyperbolic: p'(rho) = {dp} <= 0 at rho={rho}")]
    Hyperbolicity { rho: f64, dp: f64 },
}

/// Pressure and specific energy on the Lagrangian manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangianState<F> {
    pub pressure: F,
    pub energy: F,
}

/// Coefficients of the restricted quadratic form `kappa|_L` in the
/// `dT^2`, `drho^2` basis and the resulting applicability verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Applicability<F> {
    pub kappa_tt: F,
    pub kappa_rhorho: F,
    pub applicable: bool,
}

fn check_state<F: Scalar>(temperature: F, rho: F) -> Result<(), ThermoError> {
    let ok =
        temperature > F::zero() && rho > F::zero() && temperature.is_finite() && rho.is_finite();
    if ok {
        Ok(())
    } else {
        Err(ThermoError::Domain {
            temperature: temperature.to_f64().unwrap_or(f64::NAN),
            rho: rho.to_f64().unwrap_or(f64::NAN),
        })
    }
}

pub(crate) fn entropy_unchecked<F: Scalar>(pot: &dyn MassieuPlanck<F>, rho: F, temp: F) -> F {
    pot.phi(rho, temp) + temp * pot.phi_t(rho, temp)
}

pub fn lagrangian_state<F: Scalar>(
    model: &ThermodynamicModel<F>,
    temperature: F,
    rho: F,
) -> Result<LagrangianState<F>, ThermoError> {
    check_state(temperature, rho)?;
    let pot = model.potential();
    Ok(LagrangianState {
        pressure: -rho * rho * temperature * pot.phi_rho(rho, temperature),
        energy: temperature * temperature * pot.phi_t(rho, temperature),
    })
}

/// `s = phi + T phi_T`.
pub fn entropy<F: Scalar>(
    model: &ThermodynamicModel<F>,
    temperature: F,
    rho: F,
) -> Result<F, ThermoError> {
    check_state(temperature, rho)?;
    Ok(entropy_unchecked(model.potential(), rho, temperature))
}

/// Physical states are those where both coefficients of `kappa|_L` are
/// negative (`e_T > 0` and `p_rho > 0`).
pub fn applicability<F: Scalar>(
    model: &ThermodynamicModel<F>,
    temperature: F,
    rho: F,
) -> Result<Applicability<F>, ThermoError> {
    check_state(temperature, rho)?;
    let pot = model.potential();
    let two = c::<F>(2.0);
    let kappa_tt =
        -(two / temperature * pot.phi_t(rho, temperature) + pot.phi_tt(rho, temperature));
    let kappa_rhorho = two / rho * pot.phi_rho(rho, temperature) + pot.phi_rhorho(rho, temperature);
    Ok(Applicability {
        kappa_tt,
        kappa_rhorho,
        applicable: kappa_tt < F::zero() && kappa_rhorho < F::zero(),
    })
}

pub fn ideal_gas_model<F: Scalar>(
    params: IdealGasParams<F>,
) -> Result<ThermodynamicModel<F>, ThermoError> {
    Ok(ThermodynamicModel::from_potential(IdealGas::new(params)?))
}

/// `A(rho) = a0 rho^m` directly, bypassing `(R, n, s0)`.
pub fn power_law_model<F: Scalar>(
    a0: F,
    m: F,
    domain: RhoDomain<F>,
) -> Result<HomentropicModel<F>, ThermoError> {
    Ok(HomentropicModel::new(PowerLaw::new(a0, m, domain)?))
}

const HYPERBOLICITY_SAMPLES: usize = 129;

/// Reduces `model` to the isentrope `s = s0` on `domain`.
///
/// Ideal gases use the closed forms `T = k rho^(2/n)`, `A = A0 rho^(1/n - 1)`;
/// other potentials are solved numerically at every evaluation.
pub fn homentropic_reduce<F: Scalar>(
    model: &ThermodynamicModel<F>,
    s0: F,
    domain: RhoDomain<F>,
) -> Result<HomentropicModel<F>, ThermoError> {
    if let Some(params) = model.ideal_gas() {
        let params = IdealGasParams { s0, ..params };
        params.validate()?;
        let law = PowerLaw::new(params.amplitude_a0(), params.exponent_m(), domain)?
            .with_temperature(params.temperature_factor(), c::<F>(2.0) / params.n);
        let hm = HomentropicModel::new(law).with_entropy(s0);
        hm.check_hyperbolic(HYPERBOLICITY_SAMPLES)?;
        return Ok(hm);
    }
    homentropic_reduce_numeric(model, s0, domain)
}

/// Numeric reduction regardless of model type.
pub fn homentropic_reduce_numeric<F: Scalar>(
    model: &ThermodynamicModel<F>,
    s0: F,
    domain: RhoDomain<F>,
) -> Result<HomentropicModel<F>, ThermoError> {
    let reduction = NumericReduction::new(model.clone(), s0, domain);
    for rho in domain.grid(HYPERBOLICITY_SAMPLES) {
        reduction.solve_temperature(rho)?;
    }
    let hm = HomentropicModel::new(reduction).with_entropy(s0);
    hm.check_hyperbolic(HYPERBOLICITY_SAMPLES)?;
    Ok(hm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ideal(n: f64) -> ThermodynamicModel<f64> {
        ideal_gas_model(IdealGasParams::new(n, 1.0, 0.0)).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn lagrangian_state_of_ideal_gas() {
        let s = lagrangian_state(&ideal(3.0), 1.0, 1.0).unwrap();
        assert!(close(s.pressure, 1.0, 1e-15) && close(s.energy, 1.5, 1e-15));
        let s = lagrangian_state(&ideal(5.0), 2.0, 3.0).unwrap();
        assert!(close(s.pressure, 6.0, 1e-15) && close(s.energy, 5.0, 1e-15));
        let s = lagrangian_state(&ideal(3.0), 2.0, 5.0).unwrap();
        assert!(close(s.pressure, 10.0, 1e-15) && close(s.energy, 3.0, 1e-15));
        let again = lagrangian_state(&ideal(3.0), 2.0, 5.0).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn domain_violations_are_rejected() {
        let m = ideal(3.0);
        assert!(matches!(
            lagrangian_state(&m, -1.0, 1.0),
            Err(ThermoError::Domain { .. })
        ));
        assert!(entropy(&m, 1.0, 0.0).is_err());
        assert!(applicability(&m, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn entropy_convention() {
        let m = ideal(3.0);
        assert!(close(entropy(&m, 1.0, 1.0).unwrap(), 1.5, 1e-15));
        let drop = entropy(&m, 1.0, 1.0).unwrap() - entropy(&m, 1.0, std::f64::consts::E).unwrap();
        assert!(close(drop, 1.0, 1e-14));
        let e2 = std::f64::consts::E.powi(2);
        assert!(close(entropy(&m, e2, 1.0).unwrap(), 4.5, 1e-14));
    }

    #[test]
    fn applicability_of_ideal_gas() {
        let a = applicability(&ideal(3.0), 1.0, 1.0).unwrap();
        assert!(close(a.kappa_tt, -1.5, 1e-15) && close(a.kappa_rhorho, -1.0, 1e-15));
        assert!(a.applicable);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let (t, r) = (rng.random_range(0.01..50.0), rng.random_range(0.01..50.0));
            let a = applicability(&ideal(3.0), t, r).unwrap();
            assert!(a.applicable);
            assert!(close(a.kappa_tt, -1.5 / (t * t), 1e-12));
            assert!(close(a.kappa_rhorho, -1.0 / (r * r), 1e-12));
        }
    }

    struct Flat;
    impl MassieuPlanck<f64> for Flat {
        fn phi(&self, _r: f64, t: f64) -> f64 {
            t.ln()
        }
        fn phi_t(&self, _r: f64, t: f64) -> f64 {
            1.0 / t
        }
        fn phi_rho(&self, _r: f64, _t: f64) -> f64 {
            0.0
        }
        fn phi_tt(&self, _r: f64, t: f64) -> f64 {
            -1.0 / (t * t)
        }
        fn phi_rhorho(&self, _r: f64, _t: f64) -> f64 {
            0.0
        }
        fn phi_trho(&self, _r: f64, _t: f64) -> f64 {
            0.0
        }
        fn gas_constant(&self) -> f64 {
            1.0
        }
        fn descriptor(&self) -> String {
            "flat".into()
        }
    }

    #[test]
    fn stability_boundary_is_not_applicable() {
        let m = ThermodynamicModel::from_potential(Flat);
        let a = applicability(&m, 2.0, 3.0).unwrap();
        assert_eq!(a.kappa_rhorho, 0.0);
        assert!(!a.applicable);
    }

    #[test]
    fn ideal_gas_reduction_closed_forms() {
        let domain = RhoDomain::new(0.1, 10.0).unwrap();
        let params = IdealGasParams::new(3.0, 1.0, 0.7);
        let hm = homentropic_reduce(&ideal_gas_model(params).unwrap(), 0.7, domain).unwrap();
        assert_eq!(hm.kind(), ReductionKind::ClosedForm);
        let (_, m) = hm.power_law().unwrap();
        assert!(close(m, -2.0 / 3.0, 1e-15));
        // closed forms with the potential's constant folded into s0
        let s_ref: f64 = 0.7 - 1.5;
        let k: f64 = (2.0 * s_ref / 3.0).exp();
        let a0 = (1.0f64 * (1.0 + 2.0 / 3.0) * k).sqrt();
        for rho in domain.grid(40) {
            assert!(close(
                hm.temperature(rho).unwrap(),
                k * rho.powf(2.0 / 3.0),
                1e-12
            ));
            assert!(close(hm.pressure(rho), k * rho.powf(5.0 / 3.0), 1e-12));
            assert!(close(hm.a(rho), a0 * rho.powf(-2.0 / 3.0), 1e-12));
            let t = hm.temperature(rho).unwrap();
            let s = entropy(&ideal_gas_model(params).unwrap(), t, rho).unwrap();
            assert!((s - 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn unit_amplitude_power_law_integrals() {
        let domain = RhoDomain::new(0.1, 10.0).unwrap();
        let hm = power_law_model(1.0, -2.0 / 3.0, domain).unwrap();
        for rho in domain.grid(30) {
            assert!(close(hm.q(rho), 1.5 * rho.powf(2.0 / 3.0), 1e-14));
            assert!(close(hm.iq(rho), 0.9 * rho.powf(5.0 / 3.0), 1e-14));
        }
        assert!(hm.a(20.0).is_nan());
        assert!(hm.temperature(1.0).is_none());
    }

    #[test]
    fn logarithmic_power_laws() {
        let domain = RhoDomain::new(0.1, 10.0).unwrap();
        for m in [-1.0, -1.5] {
            let hm = power_law_model(1.3, m, domain).unwrap();
            let h = 1e-5;
            for rho in [0.3, 1.0, 4.0] {
                let dq = (hm.q(rho + h) - hm.q(rho - h)) / (2.0 * h);
                let diq = (hm.iq(rho + h) - hm.iq(rho - h)) / (2.0 * h);
                let dp = (hm.pressure(rho + h) - hm.pressure(rho - h)) / (2.0 * h);
                assert!(close(dq, hm.rho_a2(rho), 1e-8), "m={m}");
                assert!(close(diq, hm.q(rho), 1e-8), "m={m}");
                assert!(close(dp, hm.dpressure(rho), 1e-8), "m={m}");
            }
        }
    }

    #[test]
    fn numeric_reduction_matches_ideal_closed_form() {
        let domain = RhoDomain::new(0.1, 10.0).unwrap();
        let params = IdealGasParams::new(3.0, 1.0, 0.2);
        let model = ideal_gas_model(params).unwrap();
        let exact = homentropic_reduce(&model, 0.2, domain).unwrap();
        let numeric = homentropic_reduce_numeric(&model, 0.2, domain).unwrap();
        assert_eq!(numeric.kind(), ReductionKind::Numeric);
        let anchor = domain.anchor();
        for rho in domain.grid(25) {
            let t = numeric.temperature(rho).unwrap();
            assert!((entropy(&model, t, rho).unwrap() - 0.2f64).abs() < 1e-10);
            assert!(close(t, exact.temperature(rho).unwrap(), 1e-12));
            assert!(close(numeric.pressure(rho), exact.pressure(rho), 1e-12));
            assert!(close(numeric.a(rho), exact.a(rho), 1e-10));
            // gauge: anchored at rho = 1
            let q_exact = exact.q(rho) - exact.q(anchor);
            let iq_exact = exact.iq(rho) - exact.iq(anchor) - (rho - anchor) * exact.q(anchor);
            assert!(close(numeric.q(rho), q_exact, 1e-9));
            assert!(close(numeric.iq(rho), iq_exact, 1e-9));
        }
    }

    #[test]
    fn virial_gas_reduction() {
        let domain = RhoDomain::new(0.1, 10.0).unwrap();
        let (n, r, b, s0): (f64, f64, f64, f64) = (5.0, 1.0, 0.05, 0.3);
        let model = ThermodynamicModel::from_potential(VirialGas::new(n, r, b).unwrap());
        let hm = homentropic_reduce(&model, s0, domain).unwrap();
        for rho in domain.grid(20) {
            let t_exact = (2.0 * (s0 - r * n / 2.0 + r * rho.ln() + r * b * rho) / (r * n)).exp();
            let t = hm.temperature(rho).unwrap();
            assert!(close(t, t_exact, 1e-12));
            assert!(close(
                hm.pressure(rho),
                r * rho * t_exact * (1.0 + b * rho),
                1e-12
            ));
            let h = 1e-5 * rho;
            if !domain.contains(rho - h) || !domain.contains(rho + h) {
                continue;
            }
            let dp = (hm.pressure(rho + h) - hm.pressure(rho - h)) / (2.0 * h);
            assert!(close(dp, hm.dpressure(rho), 1e-7));
        }
    }

    #[test]
    fn non_hyperbolic_model_is_reported() {
        let domain = RhoDomain::new(0.5, 2.0).unwrap();
        let hm = HomentropicModel::from_pressure(
            |r: f64| (r - 1.0).powi(3) - (r - 1.0),
            |r: f64| 3.0 * (r - 1.0).powi(2) - 1.0,
            domain,
            "loop",
        );
        assert!(matches!(
            hm.check_hyperbolic(65),
            Err(ThermoError::Hyperbolicity { .. })
        ));
    }

    #[test]
    fn reduction_fails_without_bracket() {
        // entropy independent of T: no isentrope exists
        struct NoT;
        impl MassieuPlanck<f64> for NoT {
            fn phi(&self, r: f64, _t: f64) -> f64 {
                -r.ln()
            }
            fn phi_t(&self, _r: f64, _t: f64) -> f64 {
                0.0
            }
            fn phi_rho(&self, r: f64, _t: f64) -> f64 {
                -1.0 / r
            }
            fn phi_tt(&self, _r: f64, _t: f64) -> f64 {
                0.0
            }
            fn phi_rhorho(&self, r: f64, _t: f64) -> f64 {
                1.0 / (r * r)
            }
            fn phi_trho(&self, _r: f64, _t: f64) -> f64 {
                0.0
            }
            fn gas_constant(&self) -> f64 {
                1.0
            }
            fn descriptor(&self) -> String {
                "no-temperature".into()
            }
        }
        let domain = RhoDomain::new(0.5, 2.0).unwrap();
        let err = homentropic_reduce(&ThermodynamicModel::from_potential(NoT), 3.0, domain);
        assert!(matches!(err, Err(ThermoError::Reduction { .. })));
    }

    #[test]
    fn energy_balance_on_state_surface() {
        // ds/de|_rho = 1/T and ds/drho|_e = -p/(T rho^2) along (T, rho)
        let models = [
            ideal(3.0),
            ThermodynamicModel::from_potential(VirialGas::new(5.0, 2.0, 0.1).unwrap()),
        ];
        let h = 1e-5;
        for model in &models {
            for (t, r) in [(1.0, 1.0), (0.5, 3.0), (4.0, 0.2)] {
                let s = |t: f64, r: f64| entropy(model, t, r).unwrap();
                let e = |t: f64, r: f64| lagrangian_state(model, t, r).unwrap().energy;
                let p = lagrangian_state(model, t, r).unwrap().pressure;
                let (st, sr) = (
                    (s(t + h, r) - s(t - h, r)) / (2.0 * h),
                    (s(t, r + h) - s(t, r - h)) / (2.0 * h),
                );
                let (et, er) = (
                    (e(t + h, r) - e(t - h, r)) / (2.0 * h),
                    (e(t, r + h) - e(t, r - h)) / (2.0 * h),
                );
                let ds_de = st / et;
                let ds_drho = sr - st * er / et;
                assert!(close(ds_de, 1.0 / t, 1e-6));
                assert!(close(ds_drho, -p / (t * r * r), 1e-6));
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(ideal_gas_model(IdealGasParams::new(0.0, 1.0, 0.0)).is_err());
        assert!(ideal_gas_model(IdealGasParams::new(3.0, -1.0, 0.0)).is_err());
        assert!(RhoDomain::new(0.0, 1.0).is_err());
        assert!(RhoDomain::new(2.0, 1.0).is_err());
        let d = RhoDomain::new(0.1, 1.0).unwrap();
        assert!(power_law_model(0.0, 1.0, d).is_err());
    }
}

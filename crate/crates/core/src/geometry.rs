//! Differential 2-forms on the 0-jet space `E(t, x, u, rho)`.
//!
//! Coordinates are always ordered `(t, x, u, rho)`; 2-form coefficients are
//! stored in lexicographic pair order `tx, tu, trho, xu, xrho, urho`. The
//! Euler system is the pair of forms whose restriction to a solution surface
//! vanishes; this module builds those forms, classifies the system, and
//! evaluates pullbacks onto parametrised surfaces.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::numeric;
use crate::scalar::{c, Scalar};
use crate::thermo::HomentropicModel;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("characteristic speed vanishes at u={u}, rho={rho}")]
    SingularCharacteristic { u: f64, rho: f64 },
    #[error("operator A_omega undefined: rho A(rho) = 0 at rho={rho}")]
    SingularOperator { rho: f64 },
    #[error("A(rho) must be positive, got {value} at rho={rho}")]
    Domain { rho: f64, value: f64 },
}

/// Coefficients of a 2-form at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FormCoefficients<F> {
    pub tx: F,
    pub tu: F,
    pub trho: F,
    pub xu: F,
    pub xrho: F,
    pub urho: F,
}

impl<F: Scalar> FormCoefficients<F> {
    pub fn zero() -> Self {
        Self {
            tx: F::zero(),
            tu: F::zero(),
            trho: F::zero(),
            xu: F::zero(),
            xrho: F::zero(),
            urho: F::zero(),
        }
    }

    /// Coefficient of `d xi_i ∧ d xi_j` for any ordered index pair.
    pub fn pair(&self, i: usize, j: usize) -> F {
        if i == j {
            return F::zero();
        }
        let (lo, hi, sign) = if i < j {
            (i, j, F::one())
        } else {
            (j, i, -F::one())
        };
        let v = match (lo, hi) {
            (0, 1) => self.tx,
            (0, 2) => self.tu,
            (0, 3) => self.trho,
            (1, 2) => self.xu,
            (1, 3) => self.xrho,
            (2, 3) => self.urho,
            _ => panic!("2-form index out of range: ({i}, {j})"),
        };
        sign * v
    }

    /// The 1-form `X ⌟ omega` in the basis `dt, dx, du, drho`.
    pub fn interior(&self, v: [F; 4]) -> [F; 4] {
        let mut out = [F::zero(); 4];
        for (j, o) in out.iter_mut().enumerate() {
            for (i, vi) in v.iter().enumerate() {
                *o = *o + *vi * self.pair(i, j);
            }
        }
        out
    }
}

type CoeffFn<F> = dyn Fn(F, F) -> FormCoefficients<F> + Send + Sync;

/// A 2-form on `E` whose coefficients depend on `(u, rho)` only.
#[derive(Clone)]
pub struct TwoFormOnE<F: Scalar> {
    coeffs: Arc<CoeffFn<F>>,
    label: String,
}

impl<F: Scalar> fmt::Debug for TwoFormOnE<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TwoFormOnE")
            .field("label", &self.label)
            .finish()
    }
}

impl<F: Scalar> TwoFormOnE<F> {
    pub fn from_fn(
        coeffs: impl Fn(F, F) -> FormCoefficients<F> + Send + Sync + 'static,
        label: impl Into<String>,
    ) -> Self {
        Self {
            coeffs: Arc::new(coeffs),
            label: label.into(),
        }
    }

    pub fn constant(coeffs: FormCoefficients<F>, label: impl Into<String>) -> Self {
        Self::from_fn(move |_, _| coeffs, label)
    }

    /// `dt ∧ dx`; its pullback onto a solution surface is the fold indicator.
    pub fn dt_wedge_dx() -> Self {
        Self::constant(
            FormCoefficients {
                tx: F::one(),
                ..FormCoefficients::zero()
            },
            "dt^dx",
        )
    }

    #[inline]
    pub fn at(&self, u: F, rho: F) -> FormCoefficients<F> {
        (self.coeffs)(u, rho)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// The forms of the Euler system as first written, with `p'(rho)/rho`:
/// `rho dt∧du + u dt∧drho - dx∧drho` and `u dt∧du + p'/rho dt∧drho - dx∧du`.
pub fn euler_forms<F: Scalar>(hm: &HomentropicModel<F>) -> (TwoFormOnE<F>, TwoFormOnE<F>) {
    let h2 = hm.clone();
    let w1 = TwoFormOnE::from_fn(
        |u, rho| FormCoefficients {
            tu: rho,
            trho: u,
            xrho: -F::one(),
            ..FormCoefficients::zero()
        },
        "omega1",
    );
    let w2 = TwoFormOnE::from_fn(
        move |u, rho| FormCoefficients {
            tu: u,
            trho: h2.dpressure(rho) / rho,
            xu: -F::one(),
            ..FormCoefficients::zero()
        },
        "omega2",
    );
    (w1, w2)
}

/// Effective pair: `A (rho dt∧du + u dt∧drho - dx∧drho)` and
/// `u dt∧du + rho A^2 dt∧drho - dx∧du`.
pub fn effective_forms<F: Scalar>(hm: &HomentropicModel<F>) -> (TwoFormOnE<F>, TwoFormOnE<F>) {
    let h1 = hm.clone();
    let h2 = hm.clone();
    let w1 = TwoFormOnE::from_fn(
        move |u, rho| {
            let a = h1.a(rho);
            FormCoefficients {
                tu: a * rho,
                trho: a * u,
                xrho: -a,
                ..FormCoefficients::zero()
            }
        },
        "effective omega1",
    );
    let w2 = TwoFormOnE::from_fn(
        move |u, rho| FormCoefficients {
            tu: u,
            trho: h2.rho_a2(rho),
            xu: -F::one(),
            ..FormCoefficients::zero()
        },
        "effective omega2",
    );
    (w1, w2)
}

/// Coefficient of `alpha ∧ beta` against `dt∧dx∧du∧drho`.
pub fn wedge_coeffs<F: Scalar>(a: &FormCoefficients<F>, b: &FormCoefficients<F>) -> F {
    a.tx * b.urho - a.tu * b.xrho + a.trho * b.xu + a.xu * b.trho - a.xrho * b.tu + a.urho * b.tx
}

pub fn wedge_pair<F: Scalar>(alpha: &TwoFormOnE<F>, beta: &TwoFormOnE<F>, u: F, rho: F) -> F {
    wedge_coeffs(&alpha.at(u, rho), &beta.at(u, rho))
}

/// Matrix `P(omega_i, omega_j)` of a pair of forms.
pub fn pairing_matrix<F: Scalar>(
    w1: &TwoFormOnE<F>,
    w2: &TwoFormOnE<F>,
    u: F,
    rho: F,
) -> [[F; 2]; 2] {
    let (a, b) = (w1.at(u, rho), w2.at(u, rho));
    [
        [wedge_coeffs(&a, &a), wedge_coeffs(&a, &b)],
        [wedge_coeffs(&b, &a), wedge_coeffs(&b, &b)],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    Hyperbolic,
    Elliptic,
    Parabolic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemType<F> {
    pub kind: SystemKind,
    pub det_p: F,
}

/// Type of the system at density `rho` from `det P = -4 p'(rho)`.
pub fn classify<F: Scalar>(hm: &HomentropicModel<F>, rho: F) -> SystemType<F> {
    let det_p = -c::<F>(4.0) * hm.dpressure(rho);
    let kind = if det_p < F::zero() {
        SystemKind::Hyperbolic
    } else if det_p > F::zero() {
        SystemKind::Elliptic
    } else {
        SystemKind::Parabolic
    };
    SystemType { kind, det_p }
}

/// Generators of the characteristic distributions, as vectors in the basis
/// `∂t, ∂x, ∂u, ∂rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicFields<F> {
    pub x_plus: [F; 4],
    pub x_minus: [F; 4],
    pub y_plus: [F; 4],
    pub y_minus: [F; 4],
}

pub fn characteristic_fields<F: Scalar>(
    hm: &HomentropicModel<F>,
    u: F,
    rho: F,
) -> Result<CharacteristicFields<F>, GeometryError> {
    let a = hm.a(rho);
    let speed_plus = u - rho * a;
    let speed_minus = u + rho * a;
    if speed_plus == F::zero() || speed_minus == F::zero() || !a.is_finite() {
        return Err(GeometryError::SingularCharacteristic {
            u: u.to_f64().unwrap_or(f64::NAN),
            rho: rho.to_f64().unwrap_or(f64::NAN),
        });
    }
    let (z, one) = (F::zero(), F::one());
    Ok(CharacteristicFields {
        x_plus: [z, z, a, one],
        x_minus: [z, z, -a, one],
        y_plus: [one / speed_plus, one, z, z],
        y_minus: [one / speed_minus, one, z, z],
    })
}

/// Matrix of the operator defined by `X ⌟ omega2 = A_omega(X) ⌟ omega1`.
///
/// Acts on column vectors in the basis `∂t, ∂x, ∂u, ∂rho`:
/// `(1 / (rho A)) [[u, -1, 0, 0], [u^2 - rho^2 A^2, -u, 0, 0],
/// [0, 0, 0, rho A^2], [0, 0, rho, 0]]`.
pub fn aw_matrix<F: Scalar>(
    hm: &HomentropicModel<F>,
    u: F,
    rho: F,
) -> Result<[[F; 4]; 4], GeometryError> {
    let a = hm.a(rho);
    let ra = rho * a;
    if ra == F::zero() || !ra.is_finite() {
        return Err(GeometryError::SingularOperator {
            rho: rho.to_f64().unwrap_or(f64::NAN),
        });
    }
    let z = F::zero();
    let k = F::one() / ra;
    Ok([
        [u * k, -k, z, z],
        [(u * u - ra * ra) * k, -u * k, z, z],
        [z, z, z, rho * a * a * k],
        [z, z, rho * k, z],
    ])
}

pub fn mat_vec<F: Scalar>(m: &[[F; 4]; 4], v: [F; 4]) -> [F; 4] {
    let mut out = [F::zero(); 4];
    for (o, row) in out.iter_mut().zip(m.iter()) {
        *o = row
            .iter()
            .zip(v.iter())
            .fold(F::zero(), |s, (a, b)| s + *a * *b);
    }
    out
}

pub fn mat_mul<F: Scalar>(a: &[[F; 4]; 4], b: &[[F; 4]; 4]) -> [[F; 4]; 4] {
    let mut out = [[F::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).fold(F::zero(), |s, k| s + a[i][k] * b[k][j]);
        }
    }
    out
}

type PointFn<F> = dyn Fn(F, F) -> [F; 4] + Send + Sync;
type JacobianFn<F> = dyn Fn(F, F) -> [[F; 2]; 4] + Send + Sync;

/// A 2-parameter surface `(a, b) -> (t, x, u, rho)` in `E`.
#[derive(Clone)]
pub struct SurfaceParametrization<F: Scalar> {
    point: Arc<PointFn<F>>,
    jacobian: Option<Arc<JacobianFn<F>>>,
}

impl<F: Scalar> fmt::Debug for SurfaceParametrization<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceParametrization")
            .field("analytic_jacobian", &self.jacobian.is_some())
            .finish()
    }
}

impl<F: Scalar> SurfaceParametrization<F> {
    /// Surface without analytic partials; the Jacobian falls back to
    /// central differences.
    pub fn new(point: impl Fn(F, F) -> [F; 4] + Send + Sync + 'static) -> Self {
        Self {
            point: Arc::new(point),
            jacobian: None,
        }
    }

    pub fn with_jacobian(
        mut self,
        jacobian: impl Fn(F, F) -> [[F; 2]; 4] + Send + Sync + 'static,
    ) -> Self {
        self.jacobian = Some(Arc::new(jacobian));
        self
    }

    #[inline]
    pub fn point(&self, a: F, b: F) -> [F; 4] {
        (self.point)(a, b)
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    /// Rows `t, x, u, rho`; columns `∂/∂a, ∂/∂b`.
    pub fn jacobian(&self, a: F, b: F) -> [[F; 2]; 4] {
        match &self.jacobian {
            Some(j) => j(a, b),
            None => self.fd_jacobian(a, b),
        }
    }

    pub fn fd_jacobian(&self, a: F, b: F) -> [[F; 2]; 4] {
        let step = F::epsilon().cbrt();
        let ha = step * a.abs().max(F::one());
        let hb = step * b.abs().max(F::one());
        let (pa, ma) = (self.point(a + ha, b), self.point(a - ha, b));
        let (pb, mb) = (self.point(a, b + hb), self.point(a, b - hb));
        let mut out = [[F::zero(); 2]; 4];
        for i in 0..4 {
            out[i][0] = (pa[i] - ma[i]) / (ha + ha);
            out[i][1] = (pb[i] - mb[i]) / (hb + hb);
        }
        out
    }
}

/// Coefficient of `da ∧ db` in the pullback of `form` onto `surf`.
pub fn restrict_2form<F: Scalar>(
    form: &TwoFormOnE<F>,
    surf: &SurfaceParametrization<F>,
    a: F,
    b: F,
) -> F {
    let p = surf.point(a, b);
    let j = surf.jacobian(a, b);
    let cf = form.at(p[2], p[3]);
    let mut acc = F::zero();
    for i in 0..4 {
        for k in i + 1..4 {
            let cik = cf.pair(i, k);
            if cik != F::zero() {
                acc = acc + cik * (j[i][0] * j[k][1] - j[i][1] * j[k][0]);
            }
        }
    }
    acc
}

const FIT_SAMPLES: usize = 50;
const FIT_TOL: f64 = 1e-9;

/// Detects `p(rho) = c0 rho^3 + c1` on the model's domain, the condition under
/// which both characteristic distributions are integrable. Sufficient-condition
/// detection only.
pub fn is_integrable_characteristics<F: Scalar>(hm: &HomentropicModel<F>) -> bool {
    let d = hm.domain();
    let (r0, r1) = (d.min, d.max);
    let (p0, p1) = (hm.pressure(r0), hm.pressure(r1));
    let cube = |r: F| r * r * r;
    let c0 = (p1 - p0) / (cube(r1) - cube(r0));
    let c1 = p0 - c0 * cube(r0);
    if !c0.is_finite() || !c1.is_finite() {
        return false;
    }
    let mid = (r0 * r1).sqrt();
    std::iter::once(mid).chain(d.grid(FIT_SAMPLES)).all(|r| {
        let p = hm.pressure(r);
        let fit = c0 * cube(r) + c1;
        let scale = p.abs().max((c0 * cube(r)).abs()).max(c1.abs());
        p.is_finite() && (p - fit).abs() <= c::<F>(FIT_TOL) * scale
    })
}

/// Detects `A(rho) = (b1 rho + b2)^(-2)`, i.e. `A^(-1/2)` affine, under which
/// the quotient wave equation has constant coefficients.
pub fn is_constant_coeff_reducible<F: Scalar>(
    hm: &HomentropicModel<F>,
) -> Result<bool, GeometryError> {
    let d = hm.domain();
    let grid = d.grid(FIT_SAMPLES);
    let mut g = Vec::with_capacity(grid.len());
    for &r in &grid {
        let a = hm.a(r);
        if !(a > F::zero()) {
            return Err(GeometryError::Domain {
                rho: r.to_f64().unwrap_or(f64::NAN),
                value: a.to_f64().unwrap_or(f64::NAN),
            });
        }
        g.push(F::one() / a.sqrt());
    }
    let (r0, r1) = (grid[0], grid[grid.len() - 1]);
    let (g0, g1) = (g[0], g[g.len() - 1]);
    let b1 = (g1 - g0) / (r1 - r0);
    let b2 = g0 - b1 * r0;
    Ok(grid.iter().zip(&g).all(|(&r, &gr)| {
        let fit = b1 * r + b2;
        let scale = gr.abs().max((b1 * r).abs()).max(b2.abs());
        (gr - fit).abs() <= c::<F>(FIT_TOL) * scale
    }))
}

/// Linear grid helper re-exported for callers building surfaces.
pub fn parameter_grid<F: Scalar>(lo: F, hi: F, n: usize) -> Vec<F> {
    numeric::lin_grid(lo, hi, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::{
        homentropic_reduce, ideal_gas_model, power_law_model, IdealGasParams, RhoDomain,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_law() -> HomentropicModel<f64> {
        power_law_model(1.0, -2.0 / 3.0, RhoDomain::new(0.05, 20.0).unwrap()).unwrap()
    }

    fn random_points(n: usize, seed: u64) -> Vec<(f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| (rng.random_range(-3.0..3.0), rng.random_range(0.1..10.0)))
            .collect()
    }

    #[test]
    fn effective_form_coefficients_at_reference_point() {
        let (w1, w2) = effective_forms(&unit_law());
        let a = w1.at(0.0, 1.0);
        assert_eq!((a.tu, a.trho, a.xrho), (1.0, 0.0, -1.0));
        assert_eq!((a.tx, a.xu, a.urho), (0.0, 0.0, 0.0));
        let b = w2.at(0.0, 1.0);
        assert_eq!((b.tu, b.trho, b.xu), (0.0, 1.0, -1.0));
        assert_eq!((b.tx, b.xrho, b.urho), (0.0, 0.0, 0.0));
        for (u, r) in random_points(20, 1) {
            assert_eq!(w1.at(u, r).urho, 0.0);
            assert_eq!(w2.at(u, r).urho, 0.0);
        }
    }

    #[test]
    fn pairing_of_euler_forms() {
        let hm = unit_law();
        let (w1, w2) = euler_forms(&hm);
        for (u, r) in random_points(30, 2) {
            assert!((wedge_pair(&w1, &w1, u, r) - 2.0 * r).abs() < 1e-12 * r);
            assert_eq!(wedge_pair(&w1, &w2, u, r), 0.0);
        }
        assert!((wedge_pair(&w2, &w2, 0.0, 1.0) + 2.0).abs() < 1e-15);
    }

    #[test]
    fn effectivity_relations() {
        let hm = unit_law();
        let (w1, w2) = effective_forms(&hm);
        for (u, r) in random_points(200, 3) {
            let p = pairing_matrix(&w1, &w2, u, r);
            let scale = p[0][0].abs().max(1.0);
            assert!(p[0][1].abs() < 1e-12 * scale);
            assert!((p[0][0] + p[1][1]).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn classification() {
        let domain = RhoDomain::new(0.1, 10.0).unwrap();
        let ideal = homentropic_reduce(
            &ideal_gas_model(IdealGasParams::new(3.0, 1.0, 0.0)).unwrap(),
            0.0,
            domain,
        )
        .unwrap();
        for r in domain.grid(25) {
            assert_eq!(classify(&ideal, r).kind, SystemKind::Hyperbolic);
        }
        let law = unit_law();
        let st = classify(&law, 1.0);
        assert_eq!(st.kind, SystemKind::Hyperbolic);
        assert!((st.det_p + 4.0).abs() < 1e-15);
        let flat = HomentropicModel::from_pressure(
            |r: f64| (r - 1.0).powi(3),
            |r: f64| 3.0 * (r - 1.0).powi(2),
            domain,
            "inflection",
        );
        assert_eq!(classify(&flat, 1.0).kind, SystemKind::Parabolic);
        let neg = HomentropicModel::from_pressure(|r: f64| -r, |_| -1.0, domain, "unstable");
        assert_eq!(classify(&neg, 2.0).kind, SystemKind::Elliptic);
    }

    #[test]
    fn determinant_two_ways() {
        let hm = unit_law();
        let (w1, w2) = euler_forms(&hm);
        for (u, r) in random_points(50, 4) {
            let p = pairing_matrix(&w1, &w2, u, r);
            let det = p[0][0] * p[1][1] - p[0][1] * p[1][0];
            let direct = classify(&hm, r).det_p;
            assert!((det - direct).abs() <= 1e-12 * direct.abs());
        }
    }

    #[test]
    fn operator_squares_to_identity() {
        let hm = unit_law();
        for (u, r) in random_points(50, 5) {
            let w = aw_matrix(&hm, u, r).unwrap();
            let w2 = mat_mul(&w, &w);
            for (i, row) in w2.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert!((v - target).abs() < 1e-12, "W^2[{i}][{j}]={v}");
                }
            }
            let trace = (0..4).fold(0.0, |s, i| s + w[i][i]);
            assert!(trace.abs() < 1e-14);
        }
        let w = aw_matrix(&hm, 0.0, 1.0).unwrap();
        let expect = [
            [0.0, -1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!((w[i][j] - expect[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn characteristic_fields_are_eigenvectors() {
        let hm = unit_law();
        let f = characteristic_fields(&hm, 0.0, 1.0).unwrap();
        assert_eq!(f.x_plus, [0.0, 0.0, 1.0, 1.0]);
        assert_eq!(f.x_minus, [0.0, 0.0, -1.0, 1.0]);
        assert_eq!(f.y_plus, [-1.0, 1.0, 0.0, 0.0]);
        assert_eq!(f.y_minus, [1.0, 1.0, 0.0, 0.0]);
        for (u, r) in random_points(20, 6) {
            let f = characteristic_fields(&hm, u, r).unwrap();
            assert_eq!((f.x_plus[0], f.x_plus[1]), (0.0, 0.0));
            let w = aw_matrix(&hm, u, r).unwrap();
            for (v, s) in [
                (f.x_plus, 1.0),
                (f.x_minus, -1.0),
                (f.y_plus, 1.0),
                (f.y_minus, -1.0),
            ] {
                let wv = mat_vec(&w, v);
                for k in 0..4 {
                    assert!((wv[k] - s * v[k]).abs() < 1e-10 * (1.0 + v[k].abs()));
                }
            }
        }
    }

    #[test]
    fn operator_defining_relation() {
        let hm = unit_law();
        let (w1, w2) = effective_forms(&hm);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (u, r) in random_points(40, 7) {
            let w = aw_matrix(&hm, u, r).unwrap();
            let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let lhs = w2.at(u, r).interior(v);
            let rhs = w1.at(u, r).interior(mat_vec(&w, v));
            for k in 0..4 {
                assert!((lhs[k] - rhs[k]).abs() < 1e-10 * (1.0 + lhs[k].abs()));
            }
        }
    }

    #[test]
    fn singular_cases() {
        let hm = unit_law();
        // rho A(rho) = rho^(1/3) = 1 at rho = 1
        assert!(matches!(
            characteristic_fields(&hm, 1.0, 1.0),
            Err(GeometryError::SingularCharacteristic { .. })
        ));
        let zero_a = HomentropicModel::from_pressure(
            |_| 1.0,
            |_| 0.0,
            RhoDomain::new(0.5, 2.0).unwrap(),
            "rigid",
        );
        assert!(matches!(
            aw_matrix(&zero_a, 0.0, 1.0),
            Err(GeometryError::SingularOperator { .. })
        ));
    }

    #[test]
    fn degenerate_pullback_vanishes() {
        let (w1, _) = effective_forms(&unit_law());
        // rank-1 surface: everything depends on a + 2b only
        let surf = SurfaceParametrization::new(|a: f64, b: f64| {
            let s = a + 2.0 * b;
            [s, s * s, 0.1 * s, 1.0 + 0.01 * s * s]
        });
        for (a, b) in [(0.1, 0.2), (0.5, -0.1), (1.0, 1.0)] {
            assert!(restrict_2form(&w1, &surf, a, b).abs() < 1e-8);
            assert!(restrict_2form(&TwoFormOnE::dt_wedge_dx(), &surf, a, b).abs() < 1e-8);
        }
    }

    #[test]
    fn graph_pullback_of_dt_dx_is_one() {
        let surf = SurfaceParametrization::new(|a: f64, b: f64| [a, b, a * b, 1.0 + a * a])
            .with_jacobian(|a, b| [[1.0, 0.0], [0.0, 1.0], [b, a], [2.0 * a, 0.0]]);
        assert_eq!(
            restrict_2form(&TwoFormOnE::dt_wedge_dx(), &surf, 0.3, 0.4),
            1.0
        );
        let fd = surf.fd_jacobian(0.3, 0.4);
        let an = surf.jacobian(0.3, 0.4);
        for i in 0..4 {
            for k in 0..2 {
                assert!((fd[i][k] - an[i][k]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn integrability_predicate() {
        let domain = RhoDomain::new(0.1, 10.0).unwrap();
        let cubic = HomentropicModel::from_pressure(
            |r: f64| 2.0 * r.powi(3) + 5.0,
            |r: f64| 6.0 * r * r,
            domain,
            "2 rho^3 + 5",
        );
        assert!(is_integrable_characteristics(&cubic));
        let pure = HomentropicModel::from_pressure(
            |r: f64| r.powi(3),
            |r: f64| 3.0 * r * r,
            domain,
            "rho^3",
        );
        assert!(is_integrable_characteristics(&pure));
        let ideal = homentropic_reduce(
            &ideal_gas_model(IdealGasParams::new(3.0, 1.0, 0.0)).unwrap(),
            0.0,
            domain,
        )
        .unwrap();
        assert!(!is_integrable_characteristics(&ideal));
    }

    #[test]
    fn constant_coefficient_predicate() {
        let domain = RhoDomain::new(0.1, 10.0).unwrap();
        let inv_sq = power_law_model(1.0, -2.0, domain).unwrap();
        assert!(is_constant_coeff_reducible(&inv_sq).unwrap());
        assert!(!is_constant_coeff_reducible(&unit_law()).unwrap());
        let shifted = HomentropicModel::from_sound_coefficient(
            |r: f64| (2.0 * r + 3.0).powi(-2),
            domain,
            "(2 rho + 3)^-2",
        );
        assert!(is_constant_coeff_reducible(&shifted).unwrap());
        let bad = HomentropicModel::from_pressure(|_| 0.0, |_| 0.0, domain, "dead");
        assert!(matches!(
            is_constant_coeff_reducible(&bad),
            Err(GeometryError::Domain { .. })
        ));
    }
}

//! Invariant checks over a solution family, shared by the acceptance suite
//! and the `validate` command. Point sets are Halton sequences, so every run
//! is deterministic.

use std::time::{Duration, Instant};

use super::{fd_partial, fold_scan, halton_points, hausdorff, mass_integral, FdConfig};
use crate::family::{fold_count, Branch, SolutionFamily};
use crate::geometry::{
    aw_matrix, classify, effective_forms, euler_forms, mat_mul, pairing_matrix, restrict_2form,
    SystemKind,
};
use crate::numeric;
use crate::singularity::{
    caustic, caustic_arms, cusp, cut_profile_multi, h_surface, potential_h, shock_fronts,
    ShockFront, Termination,
};
use crate::thermo::{applicability, ideal_gas_model, HomentropicModel, IdealGasParams};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub title: &'static str,
    /// Worst observed residual, in the units the tolerance is stated in.
    pub worst: f64,
    pub tolerance: f64,
    pub elapsed: Duration,
    pub time_limit: Option<Duration>,
    pub passed: bool,
    pub detail: String,
    pub metrics: Vec<(&'static str, f64)>,
}

impl CheckOutcome {
    fn new(id: &'static str, title: &'static str, tolerance: f64) -> Self {
        Self {
            id,
            title,
            worst: 0.0,
            tolerance,
            elapsed: Duration::ZERO,
            time_limit: None,
            passed: false,
            detail: String::new(),
            metrics: Vec::new(),
        }
    }

    fn observe(&mut self, v: f64) {
        if v.is_nan() || v > self.worst {
            self.worst = if v.is_nan() { f64::INFINITY } else { v };
        }
    }

    fn finish(mut self, start: Instant, extra_ok: bool) -> Self {
        self.elapsed = start.elapsed();
        let in_time = self.time_limit.is_none_or(|l| self.elapsed <= l);
        self.passed = self.worst < self.tolerance && extra_ok && in_time;
        if !in_time {
            self.detail = format!(
                "{} [over time budget: {:.3}s]",
                self.detail,
                self.elapsed.as_secs_f64()
            );
        }
        self
    }

    fn fail(mut self, start: Instant, why: impl Into<String>) -> Self {
        self.elapsed = start.elapsed();
        self.worst = f64::INFINITY;
        self.passed = false;
        self.detail = why.into();
        self
    }
}

/// Window of the quasi-random `(u, rho)` samples.
pub const SURFACE_WINDOW: ((f64, f64), (f64, f64)) = ((-3.0, 1.0), (0.2, 3.0));

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

/// Pullbacks of both effective forms, built from `forms_model`, onto the
/// quadrature surface of `fam`.
pub fn solution_property(
    fam: &SolutionFamily<f64>,
    forms_model: &HomentropicModel<f64>,
    n: usize,
) -> CheckOutcome {
    let start = Instant::now();
    let mut out = CheckOutcome::new(
        "solution-property",
        "effective forms vanish on the solution surface",
        1e-8,
    );
    out.time_limit = Some(Duration::from_secs(1));
    let (w1, w2) = effective_forms(forms_model);
    let surf = fam.solution_surface();
    for (u, rho) in halton_points(n, SURFACE_WINDOW.0, SURFACE_WINDOW.1) {
        out.observe(restrict_2form(&w1, &surf, u, rho).abs());
        out.observe(restrict_2form(&w2, &surf, u, rho).abs());
    }
    out.detail = format!("{n} points, max |pullback| = {:e}", out.worst);
    out.finish(start, true)
}

/// Generic quadratures and `Z±` against the closed power-law forms on a
/// 100 × 100 grid, relative to the sum of absolute terms.
pub fn specialization(fam: &SolutionFamily<f64>) -> CheckOutcome {
    let start = Instant::now();
    let mut out = CheckOutcome::new(
        "specialization",
        "generic path matches closed ideal-gas forms",
        1e-12,
    );
    out.time_limit = Some(Duration::from_secs(1));
    let Some((a0, m)) = fam.hm.power_law() else {
        return out.fail(start, "model is not a power law; closed forms unavailable");
    };
    let us = numeric::lin_grid(SURFACE_WINDOW.0 .0, SURFACE_WINDOW.0 .1, 100);
    let rs = numeric::lin_grid(SURFACE_WINDOW.1 .0, SURFACE_WINDOW.1 .1, 100);
    let (l, al0, al2) = (fam.lambda, fam.alpha0, fam.alpha2);
    for &rho in &rs {
        for b in Branch::BOTH {
            let s = b.sign::<f64>();
            let terms = [
                al0 * a0 * rho.powf(m + 2.0),
                -s * l * a0 * a0 * rho.powf(2.0 * m + 3.0) / (2.0 * m + 3.0),
                s * al2,
            ];
            let closed: f64 = terms.iter().sum();
            let scale: f64 = terms
                .iter()
                .map(|v| v.abs())
                .sum::<f64>()
                .max(f64::MIN_POSITIVE);
            out.observe((crate::singularity::z_pm(fam, rho, b) - closed).abs() / scale);
        }
        for &u in &us {
            let Some(q) = fam.power_law_quadratures(u, rho) else {
                return out.fail(start, "exponent makes the closed forms singular");
            };
            out.observe((q.t - fam.t_of(u, rho)).abs() / q.t_scale.max(f64::MIN_POSITIVE));
            out.observe((q.x - fam.x_of(u, rho)).abs() / q.x_scale.max(f64::MIN_POSITIVE));
        }
    }
    out.detail = format!(
        "100x100 grid, A0={a0}, m={m}, max relative gap {:e}",
        out.worst
    );
    out.finish(start, true)
}

/// The separated generating function solves the quotient wave equation.
pub fn wave_equation(fam: &SolutionFamily<f64>, n: usize) -> CheckOutcome {
    let start = Instant::now();
    let mut out = CheckOutcome::new(
        "wave-equation",
        "separated solution has zero wave residual",
        1e-9,
    );
    for (u, rho) in halton_points(n, SURFACE_WINDOW.0, SURFACE_WINDOW.1) {
        let r = crate::family::wave_residual(
            |a, b| fam.separated_second_partials(a, b),
            u,
            rho,
            &fam.hm,
        );
        out.observe(r.abs());
    }
    out.detail = format!("{n} points, max |residual| = {:e}", out.worst);
    out.finish(start, true)
}

/// Closedness of the 1-form `dx + du_coeff du + drho_coeff drho` and agreement
/// of its coefficients with the gradient of `x`.
pub fn varkappa_exactness(fam: &SolutionFamily<f64>, n: usize) -> CheckOutcome {
    let start = Instant::now();
    let mut out = CheckOutcome::new(
        "varkappa-exact",
        "the x 1-form is closed and integrates x",
        1e-6,
    );
    let cfg = FdConfig::default();
    let mut worst_grad: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    for (u, rho) in halton_points(n, SURFACE_WINDOW.0, SURFACE_WINDOW.1) {
        let du_drho = fd_partial(
            |p: [f64; 2]| fam.varkappa_coeffs(p[0], p[1]).0,
            [u, rho],
            1,
            &cfg,
        );
        let drho_du = fd_partial(
            |p: [f64; 2]| fam.varkappa_coeffs(p[0], p[1]).1,
            [u, rho],
            0,
            &cfg,
        );
        match (du_drho, drho_du) {
            (Ok(a), Ok(b)) => out.observe((a - b).abs()),
            _ => return out.fail(start, format!("non-finite coefficients near ({u}, {rho})")),
        }
        let (cu, cr) = fam.varkappa_coeffs(u, rho);
        let p = fam.partials(u, rho);
        worst_grad = worst_grad.max(rel(p.x_u, -cu)).max(rel(p.x_rho, -cr));
        let xu =
            fd_partial(|q: [f64; 2]| fam.x_of(q[0], q[1]), [u, rho], 0, &cfg).unwrap_or(f64::NAN);
        let xr =
            fd_partial(|q: [f64; 2]| fam.x_of(q[0], q[1]), [u, rho], 1, &cfg).unwrap_or(f64::NAN);
        worst_fd = worst_fd.max(rel(xu, -cu)).max(rel(xr, -cr));
    }
    out.metrics.push(("gradient_gap", worst_grad));
    out.metrics.push(("fd_gradient_gap", worst_fd));
    out.detail = format!(
        "{n} points, closedness {:e}, analytic gradient gap {:e} (tol 1e-10), FD gradient gap {:e} (tol 1e-6)",
        out.worst, worst_grad, worst_fd
    );
    out.finish(start, worst_grad < 1e-10 && worst_fd < 1e-6)
}

/// `dH± = rho dx - rho U± dt` restricted to each branch, by finite
/// differences in `(rho, t)`.
pub fn potential_property(fam: &SolutionFamily<f64>, n: usize) -> CheckOutcome {
    let start = Instant::now();
    let mut out = CheckOutcome::new("potential", "dH matches the mass conservation law", 1e-6);
    if fam.lambda == 0.0 {
        return out.fail(start, "lambda = 0");
    }
    let cfg = FdConfig::default();
    let mut taken = 0;
    let mut idx = 1usize;
    while taken < n && idx < 100 * n {
        let rho = 0.2 + 2.8 * super::halton(idx, 2);
        let t = -0.5 + 6.5 * super::halton(idx, 3);
        idx += 1;
        let margin = |r: f64| fam.radicand(r, t) > 1e-3 * r;
        if !(margin(rho * 0.999) && margin(rho * 1.001) && margin(rho)) {
            continue;
        }
        for b in Branch::BOTH {
            let h = |p: [f64; 2]| potential_h(fam, p[0], p[1], b).unwrap_or(f64::NAN);
            let x = |p: [f64; 2]| {
                fam.branch_u(p[0], p[1], b)
                    .map(|u| fam.x_of(u, p[0]))
                    .unwrap_or(f64::NAN)
            };
            let grads = (|| -> Result<_, super::OracleError> {
                Ok((
                    fd_partial(h, [rho, t], 0, &cfg)?,
                    fd_partial(h, [rho, t], 1, &cfg)?,
                    fd_partial(x, [rho, t], 0, &cfg)?,
                    fd_partial(x, [rho, t], 1, &cfg)?,
                ))
            })();
            let Ok((h_r, h_t, x_r, x_t)) = grads else {
                return out.fail(start, format!("non-finite H or x near rho={rho}, t={t}"));
            };
            let u = fam.branch_u(rho, t, b).unwrap_or(f64::NAN);
            out.observe(rel(h_r, rho * x_r));
            out.observe(rel(h_t, rho * x_t - rho * u));
        }
        taken += 1;
    }
    out.detail = format!(
        "{taken} feasible points, both branches, max relative gap {:e}",
        out.worst
    );
    out.finish(start, taken == n)
}

/// Parametric caustic against the brute-force fold scan, per branch, in the
/// `(t, x)` plane on the window `t <= t_max`.
pub fn caustic_cross_check(fam: &SolutionFamily<f64>, t_max: f64) -> CheckOutcome {
    let start = Instant::now();
    let mut out = CheckOutcome::new(
        "caustic-scan",
        "parametric caustic matches the fold scan",
        1e-3,
    );
    out.time_limit = Some(Duration::from_secs(10));
    let mut worst_indicator: f64 = 0.0;
    for b in Branch::BOTH {
        let cp = match cusp(fam, b) {
            Ok(c) => c,
            Err(e) => return out.fail(start, e.to_string()),
        };
        if cp.t > t_max {
            continue;
        }
        let Some((lo, hi)) = caustic_arms(fam, b, &cp, t_max) else {
            return out.fail(start, format!("no {b} caustic arms at t={t_max}"));
        };
        let param_grid = numeric::log_grid(lo.rho, hi.rho, 801);
        let curve = match caustic(fam, &param_grid, b) {
            Ok(c) => c,
            Err(e) => return out.fail(start, e.to_string()),
        };
        let param: Vec<(f64, f64)> = curve.samples.iter().map(|s| (s.t, s.x)).collect();
        for s in &curve.samples {
            worst_indicator = worst_indicator.max(fam.fold_indicator(s.u, s.rho).abs());
        }
        let (umin, umax) = curve
            .samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, z), s| {
                (a.min(s.u), z.max(s.u))
            });
        let u_grid = numeric::lin_grid(umin - 0.5, umax + 0.5, 241);
        let scan_rho = numeric::lin_grid(lo.rho, hi.rho, 1201);
        let mut scan: Vec<(f64, f64, f64)> = fold_scan(fam, &u_grid, &scan_rho)
            .into_iter()
            .filter(|&(u, _)| fam.branch_of(u) == b)
            .map(|(u, r)| (r, fam.t_of(u, r), fam.x_of(u, r)))
            .collect();
        scan.sort_by(|a, b| a.0.total_cmp(&b.0));
        let scan: Vec<(f64, f64)> = scan.into_iter().map(|(_, t, x)| (t, x)).collect();
        if scan.len() < 2 {
            return out.fail(
                start,
                format!("fold scan found {} points on {b}", scan.len()),
            );
        }
        let d = hausdorff(&param, &scan);
        out.metrics.push((
            if b == Branch::Plus {
                "hausdorff_plus"
            } else {
                "hausdorff_minus"
            },
            d,
        ));
        out.observe(d);
    }
    out.detail = format!(
        "t <= {t_max}, Hausdorff {:e}, max |fold indicator| on caustic {:e}",
        out.worst, worst_indicator
    );
    out.finish(start, worst_indicator < 1e-8)
}

/// Both fronts over `[t_c, t_c + span]`: residuals below `1e-8` and each
/// front strictly between its caustic arms.
pub fn shock_residuals(
    fam: &SolutionFamily<f64>,
    span: f64,
    dt: f64,
) -> (CheckOutcome, Vec<ShockFront<f64>>) {
    let start = Instant::now();
    let mut out = CheckOutcome::new(
        "shock-front",
        "front residuals vanish and the front stays inside the cusp",
        1e-8,
    );
    let t_c = match cusp(fam, Branch::Plus) {
        Ok(c) => c.t,
        Err(e) => return (out.fail(start, e.to_string()), Vec::new()),
    };
    let fronts = match shock_fronts(fam, (t_c, t_c + span), dt) {
        Ok(f) => f,
        Err(e) => return (out.fail(start, e.to_string()), Vec::new()),
    };
    let mut outside = 0usize;
    let mut steps = 0usize;
    let mut complete = true;
    for fr in &fronts {
        complete &= fr.termination == Termination::Completed;
        for s in &fr.samples {
            steps += 1;
            out.observe(s.residual_h);
            out.observe(s.residual_x);
            match caustic_arms(fam, fr.branch, &fr.cusp, s.t) {
                Some((a, b)) => {
                    let (lo, hi) = if a.x < b.x { (a.x, b.x) } else { (b.x, a.x) };
                    if !(s.x_s > lo && s.x_s < hi) {
                        outside += 1;
                    }
                }
                None => outside += 1,
            }
        }
    }
    out.metrics.push(("fronts", fronts.len() as f64));
    out.metrics.push(("steps", steps as f64));
    out.metrics.push(("outside_cusp", outside as f64));
    out.detail = format!(
        "{} fronts, {steps} steps over [{t_c:.6}, {:.6}] dt={dt}, max residual {:e}, {outside} samples outside the caustic arms",
        fronts.len(),
        t_c + span,
        out.worst
    );
    let ok = fronts.len() == 2 && complete && outside == 0;
    (out.finish(start, ok), fronts)
}

/// Mass of the cut profile between two particle paths: the plus-branch
/// particle through `rho_left` at `t_c + t_from`, and the apex, where
/// `H = 0`. Reports the largest drift rate `|M(t) - M(t_ref)| / (t - t_ref)`.
pub fn mass_conservation(
    fam: &SolutionFamily<f64>,
    fronts: &[ShockFront<f64>],
    rho_left: f64,
    t_from: f64,
    t_to: f64,
    samples: usize,
) -> CheckOutcome {
    let start = Instant::now();
    let mut out = CheckOutcome::new("mass", "mass of the cut profile is conserved", 1e-6);
    let t_c = match cusp(fam, Branch::Plus) {
        Ok(c) => c.t,
        Err(e) => return out.fail(start, e.to_string()),
    };
    let t_ref = t_c + t_from;
    let h_left = match potential_h(fam, rho_left, t_ref, Branch::Plus) {
        Ok(h) => h,
        Err(e) => return out.fail(start, e.to_string()),
    };
    let mass_at = |t: f64| -> Result<(f64, f64), String> {
        let top = fam.apex(t).ok_or("no apex")?;
        // first plus-branch density from the left where H reaches h_left
        let grid = numeric::log_grid(1e-4, top, 2000);
        let hp = |r: f64| {
            h_surface(
                fam,
                fam.u_from_radicand(r, fam.radicand(r, t), Branch::Plus),
                r,
            ) - h_left
        };
        let k = grid
            .windows(2)
            .position(|w| hp(w[0]) <= 0.0 && hp(w[1]) > 0.0)
            .ok_or("left particle not found")?;
        let r_left = numeric::brent(hp, grid[k], grid[k + 1], 1e-15).ok_or("left particle root")?;
        let u_left = fam.u_from_radicand(r_left, fam.radicand(r_left, t), Branch::Plus);
        let x_left = fam.x_of(u_left, r_left);
        let u_right = -fam.alpha0 / fam.lambda;
        let x_right = fam.x_of(u_right, top);
        for fr in fronts {
            if let Some(s) = fr.state_at(fam, t) {
                let (a, b) = if s.u1 < s.u2 {
                    (s.u1, s.u2)
                } else {
                    (s.u2, s.u1)
                };
                if (u_left > a && u_left < b) || (u_right > a && u_right < b) {
                    return Err(format!(
                        "window boundary absorbed by the {} front",
                        fr.branch
                    ));
                }
            }
        }
        let mut rho_grid = fam.graded_grid(t, r_left * 0.5, 32000);
        rho_grid.push(r_left);
        rho_grid.sort_by(f64::total_cmp);
        let cut = cut_profile_multi(fam, t, &rho_grid, fronts).map_err(|e| e.to_string())?;
        let m = mass_integral(&cut, (x_left, x_right)).map_err(|e| e.to_string())?;
        Ok((m, -h_left))
    };
    let times = numeric::lin_grid(t_ref, t_c + t_to, samples);
    let mut masses = Vec::with_capacity(times.len());
    let mut exact_gap: f64 = 0.0;
    for &t in &times {
        match mass_at(t) {
            Ok((m, exact)) => {
                exact_gap = exact_gap.max((m - exact).abs());
                masses.push(m);
            }
            Err(e) => return out.fail(start, format!("t={t}: {e}")),
        }
    }
    for (t, m) in times.iter().zip(&masses).skip(1) {
        out.observe((m - masses[0]).abs() / (t - t_ref));
    }
    out.metrics.push(("mass", masses[0]));
    out.metrics.push(("gap_to_potential", exact_gap));
    out.detail = format!(
        "window from H={h_left:.6} to the apex, t in [{t_ref:.4}, {:.4}], M={:.10}, max drift rate {:e}, max |M + h_left| {:e}",
        t_c + t_to,
        masses[0],
        out.worst,
        exact_gap
    );
    out.finish(start, true)
}

/// Gap between the two fronts: strictly positive and strictly decreasing,
/// with a least-squares power-law fit `gap ≈ C t^(-p)`.
pub fn front_gap(fronts: &[ShockFront<f64>]) -> CheckOutcome {
    let start = Instant::now();
    let mut out = CheckOutcome::new(
        "front-gap",
        "the two fronts approach without meeting",
        f64::INFINITY,
    );
    let (Some(p), Some(m)) = (
        fronts.iter().find(|f| f.branch == Branch::Plus),
        fronts.iter().find(|f| f.branch == Branch::Minus),
    ) else {
        return out.fail(
            start,
            format!("expected two fronts, found {}", fronts.len()),
        );
    };
    let mut gaps = Vec::new();
    for a in &p.samples {
        if let Some(b) = m.samples.iter().find(|b| (b.t - a.t).abs() < 1e-9) {
            gaps.push((a.t, (b.x_s - a.x_s).abs()));
        }
    }
    if gaps.len() < 3 {
        return out.fail(start, "fewer than three common front times");
    }
    let positive = gaps.iter().all(|g| g.1 > 0.0);
    let increases = gaps.windows(2).filter(|w| !(w[1].1 < w[0].1)).count();
    let n = gaps.len() as f64;
    let (sx, sy, sxx, sxy) = gaps
        .iter()
        .fold((0.0, 0.0, 0.0, 0.0), |(a, b, c2, d), &(t, g)| {
            let (lx, ly) = (t.ln(), g.ln());
            (a + lx, b + ly, c2 + lx * lx, d + lx * ly)
        });
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let coeff = ((sy - slope * sx) / n).exp();
    out.worst = increases as f64;
    out.tolerance = 1.0;
    out.metrics.push(("decay_exponent", -slope));
    out.metrics.push(("decay_coefficient", coeff));
    out.metrics.push(("gap_first", gaps[0].1));
    out.metrics.push(("gap_last", gaps[gaps.len() - 1].1));
    out.detail = format!(
        "{} times in [{:.4}, {:.4}], gap {:.6} -> {:.6}, non-decreasing steps {increases}, fit gap ≈ {coeff:.4} t^(-{:.4})",
        gaps.len(),
        gaps[0].0,
        gaps[gaps.len() - 1].0,
        gaps[0].1,
        gaps[gaps.len() - 1].1,
        -slope
    );
    out.finish(start, positive && increases == 0)
}

/// Fold count of the profile: zero at `t_early`, at least one at `t_late`,
/// and the first folded time on a `dt` grid within `2 dt` of the cusp time.
pub fn fold_transition(
    fam: &SolutionFamily<f64>,
    t_early: f64,
    t_late: f64,
    dt: f64,
) -> CheckOutcome {
    let start = Instant::now();
    let mut out = CheckOutcome::new(
        "fold-transition",
        "profile folds exactly from the cusp time",
        2.0 * dt,
    );
    let count = |t: f64| -> Option<usize> {
        let grid = fam.graded_grid(t, 1e-2, 3000);
        fam.profile(t, &grid).ok().map(|p| fold_count(&p))
    };
    let (Some(early), Some(late)) = (count(t_early), count(t_late)) else {
        return out.fail(start, "profile unavailable");
    };
    let t_c = match cusp(fam, Branch::Plus) {
        Ok(c) => c.t,
        Err(e) => return out.fail(start, e.to_string()),
    };
    let mut t_star = None;
    let steps = ((t_late - t_early) / dt).round() as usize;
    for k in 0..=steps {
        let t = t_early + dt * k as f64;
        if count(t).unwrap_or(0) >= 1 {
            t_star = Some(t);
            break;
        }
    }
    let Some(t_star) = t_star else {
        return out.fail(start, "no fold found on the scanned range");
    };
    out.observe((t_star - t_c).abs());
    out.metrics.push(("t_star", t_star));
    out.metrics.push(("t_cusp", t_c));
    out.detail = format!(
        "folds at t={t_early}: {early}, at t={t_late}: {late}; first folded t={t_star:.4}, cusp t={t_c:.10}"
    );
    out.finish(start, early == 0 && late >= 1)
}

/// Ideal-gas applicability, `det P = -4 p' < 0` and `A_omega^2 = id`.
pub fn hyperbolicity(fam: &SolutionFamily<f64>, n: usize) -> CheckOutcome {
    let start = Instant::now();
    let mut out = CheckOutcome::new(
        "hyperbolicity",
        "applicable states and a hyperbolic operator",
        1e-12,
    );
    let gas = match ideal_gas_model(IdealGasParams::new(3.0, 1.0, 0.0)) {
        Ok(g) => g,
        Err(e) => return out.fail(start, e.to_string()),
    };
    let mut inapplicable = 0;
    for (t, rho) in halton_points(n, (0.1, 10.0), (0.1, 10.0)) {
        if !applicability(&gas, t, rho)
            .map(|a| a.applicable)
            .unwrap_or(false)
        {
            inapplicable += 1;
        }
    }
    let (w1, w2) = euler_forms(&fam.hm);
    let mut det_gap: f64 = 0.0;
    let mut not_hyperbolic = 0;
    for (u, rho) in halton_points(n, SURFACE_WINDOW.0, SURFACE_WINDOW.1) {
        let p = pairing_matrix(&w1, &w2, u, rho);
        let det = p[0][0] * p[1][1] - p[0][1] * p[1][0];
        let st = classify(&fam.hm, rho);
        det_gap = det_gap.max(rel(det, -4.0 * fam.hm.dpressure(rho)));
        if st.kind != SystemKind::Hyperbolic || !(det < 0.0) {
            not_hyperbolic += 1;
        }
        match aw_matrix(&fam.hm, u, rho) {
            Ok(w) => {
                let sq = mat_mul(&w, &w);
                for (i, row) in sq.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        out.observe((v - if i == j { 1.0 } else { 0.0 }).abs());
                    }
                }
            }
            Err(e) => return out.fail(start, e.to_string()),
        }
    }
    out.detail = format!(
        "{inapplicable} inapplicable ideal-gas states of {n}, {not_hyperbolic} non-hyperbolic points, det gap {det_gap:e}, max |W^2 - I| {:e}",
        out.worst
    );
    out.finish(
        start,
        inapplicable == 0 && not_hyperbolic == 0 && det_gap < 1e-12,
    )
}

/// Parameters of a full validation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub surface_points: usize,
    pub points: usize,
    pub caustic_t_max: f64,
    pub shock_span: f64,
    pub dt: f64,
    pub mass_rho_left: f64,
    pub mass_window: (f64, f64),
    pub mass_samples: usize,
    pub fold_times: (f64, f64),
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            surface_points: 10_000,
            points: 1_000,
            caustic_t_max: 6.0,
            shock_span: 3.0,
            dt: 0.01,
            mass_rho_left: 0.1,
            mass_window: (0.25, 2.5),
            mass_samples: 10,
            fold_times: (0.0, 3.75),
        }
    }
}

/// Every check in order; `forms_model` feeds the 2-forms of the solution
/// property check and is normally `fam.hm`.
pub fn run_all(
    fam: &SolutionFamily<f64>,
    forms_model: &HomentropicModel<f64>,
    cfg: &SuiteConfig,
) -> Vec<CheckOutcome> {
    let mut out = vec![
        solution_property(fam, forms_model, cfg.surface_points),
        specialization(fam),
        wave_equation(fam, cfg.points),
        varkappa_exactness(fam, cfg.points),
        potential_property(fam, cfg.points),
        caustic_cross_check(fam, cfg.caustic_t_max),
    ];
    let (shock, fronts) = shock_residuals(fam, cfg.shock_span, cfg.dt);
    out.push(shock);
    out.push(mass_conservation(
        fam,
        &fronts,
        cfg.mass_rho_left,
        cfg.mass_window.0,
        cfg.mass_window.1,
        cfg.mass_samples,
    ));
    out.push(front_gap(&fronts));
    out.push(fold_transition(
        fam,
        cfg.fold_times.0,
        cfg.fold_times.1,
        cfg.dt,
    ));
    out.push(hyperbolicity(fam, 100));
    out
}

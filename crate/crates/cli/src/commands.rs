use std::collections::BTreeSet;
use std::path::PathBuf;

use gasfold::family::{count_preimages, fold_count};
use gasfold::geometry::{classify, SystemKind};
use gasfold::oracle::checks::{run_all, CheckOutcome, SuiteConfig};
use gasfold::singularity::{caustic, cusp, shock_front_partial, FrontSample};
use gasfold::thermo::applicability;
use gasfold::{
    numeric, Branch, CausticCurve, Family, ProfileSample, ShockFront, SingularityError, Termination,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::svg::{Plot, Series, Style, PALETTE};
use crate::table::{fmt_num, write_text, Cell, Table};

/// What a command printed and wrote.
#[derive(Debug, Default)]
pub struct Report {
    pub lines: Vec<String>,
    pub files: Vec<PathBuf>,
    /// Set when outputs were written but the run still failed.
    pub failure: Option<CliError>,
}

struct Sink<'a> {
    cfg: &'a RunConfig,
    report: Report,
}

impl<'a> Sink<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Self, CliError> {
        let dir = &cfg.output.dir;
        std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.clone(),
            source,
        })?;
        Ok(Self {
            cfg,
            report: Report::default(),
        })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.cfg.output.dir.join(name)
    }

    fn say(&mut self, line: impl Into<String>) {
        self.report.lines.push(line.into());
    }

    fn table(&mut self, name: &str, t: &Table) -> Result<(), CliError> {
        if self.cfg.output.wants(Format::Csv) {
            let p = self.path(name);
            t.write(&p)?;
            self.report.files.push(p);
        }
        Ok(())
    }

    fn json(&mut self, name: &str, v: &Value) -> Result<(), CliError> {
        if self.cfg.output.wants(Format::Json) {
            self.json_always(name, v)?;
        }
        Ok(())
    }

    fn json_always(&mut self, name: &str, v: &Value) -> Result<(), CliError> {
        let p = self.path(name);
        let mut text = serde_json::to_string_pretty(v)?;
        text.push('\n');
        write_text(&p, &text)?;
        self.report.files.push(p);
        Ok(())
    }

    fn svg(&mut self, name: &str, plot: &Plot) -> Result<(), CliError> {
        if self.cfg.output.wants(Format::Svg) {
            let p = self.path(name);
            write_text(&p, &plot.render())?;
            self.report.files.push(p);
        }
        Ok(())
    }
}

fn finite_or_null(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

pub fn thermo(cfg: &RunConfig) -> Result<Report, CliError> {
    let hm = cfg.homentropic()?;
    let thermo = cfg.thermodynamic()?;
    let dom = hm.domain();
    let grid = dom.grid(cfg.run.thermo_points);
    let mut sink = Sink::new(cfg)?;

    let mut table = Table::new(&["rho", "T", "p", "A", "dp_drho", "hyperbolic", "applicable"]);
    let mut rows = Vec::new();
    let (mut hyperbolic, mut applicable, mut checked) = (0usize, 0usize, 0usize);
    let mut series: [Vec<(f64, f64)>; 3] = Default::default();
    for &rho in &grid {
        let temp = hm.temperature(rho);
        let (p, a, dp) = (hm.pressure(rho), hm.a(rho), hm.dpressure(rho));
        let hyp = classify(&hm, rho).kind == SystemKind::Hyperbolic;
        hyperbolic += usize::from(hyp);
        let app = match (&thermo, temp) {
            (Some(model), Some(t)) => Some(applicability(model, t, rho)?.applicable),
            _ => None,
        };
        if let Some(ok) = app {
            checked += 1;
            applicable += usize::from(ok);
        }
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        table.row(&[
            rho.into(),
            temp.map_or(Cell::Empty, Cell::Num),
            p.into(),
            a.into(),
            dp.into(),
            yes_no(hyp).into(),
            app.map_or(Cell::Empty, |b| Cell::Text(yes_no(b))),
        ]);
        rows.push(json!({
            "rho": rho, "T": temp, "p": finite_or_null(p), "A": finite_or_null(a),
            "dp_drho": finite_or_null(dp), "hyperbolic": hyp, "applicable": app,
        }));
        series[0].push((rho, p));
        series[1].push((rho, a));
        if let Some(t) = temp {
            series[2].push((rho, t));
        }
    }

    let n = grid.len();
    sink.say(format!("model: {} ({:?})", hm.descriptor(), hm.kind()));
    if let Some((a0, m)) = hm.power_law() {
        sink.say(format!(
            "power law: A(rho) = {} rho^{}",
            fmt_num(a0),
            fmt_num(m)
        ));
    }
    sink.say(format!(
        "hyperbolic at {hyperbolic}/{n} densities in [{}, {}]: {}",
        fmt_num(dom.min),
        fmt_num(dom.max),
        if hyperbolic == n { "yes" } else { "no" }
    ));
    let verdict = if thermo.is_none() {
        "applicability: no thermodynamic potential for a bare power law".to_owned()
    } else {
        format!(
            "applicability: {applicable}/{checked} isentropic states applicable: {}",
            if applicable == checked { "yes" } else { "no" }
        )
    };
    sink.say(verdict);

    sink.table("thermo.csv", &table)?;
    let (a0, m) = hm
        .power_law()
        .map_or((None, None), |(a, m)| (Some(a), Some(m)));
    sink.json(
        "thermo.json",
        &json!({
            "model": hm.descriptor(),
            "A0": a0,
            "m": m,
            "rho_range": [dom.min, dom.max],
            "hyperbolic": hyperbolic == n,
            "applicable": thermo.as_ref().map(|_| applicable == checked),
            "rows": rows,
        }),
    )?;
    let mut plot = Plot::new("Isentrope", "rho", "value").log_log();
    plot.push(Series::line(
        "p(rho)",
        PALETTE[0],
        std::mem::take(&mut series[0]),
    ));
    plot.push(Series::line(
        "A(rho)",
        PALETTE[1],
        std::mem::take(&mut series[1]),
    ));
    if !series[2].is_empty() {
        plot.push(
            Series::line("T(rho)", PALETTE[2], std::mem::take(&mut series[2]))
                .styled(Style::Dashed),
        );
    }
    sink.svg("thermo.svg", &plot)?;
    Ok(sink.report)
}

/// Splits a profile into runs of one branch, keeping the joins.
fn branch_runs(profile: &[ProfileSample<f64>]) -> Vec<(Branch, Vec<(f64, f64)>)> {
    let mut out: Vec<(Branch, Vec<(f64, f64)>)> = Vec::new();
    for s in profile {
        match out.last_mut() {
            Some((b, pts)) if *b == s.branch => pts.push((s.x, s.rho)),
            Some((_, pts)) => {
                let join = *pts.last().expect("runs are nonempty");
                out.push((s.branch, vec![join, (s.x, s.rho)]));
            }
            None => out.push((s.branch, vec![(s.x, s.rho)])),
        }
    }
    out
}

/// Distinct preimage counts over midpoints of consecutive samples.
fn preimage_counts(profile: &[ProfileSample<f64>]) -> Vec<usize> {
    let set: BTreeSet<usize> = profile
        .windows(2)
        .map(|w| count_preimages(profile, 0.5 * (w[0].x + w[1].x)))
        .collect();
    set.into_iter().collect()
}

pub fn profile(cfg: &RunConfig) -> Result<Report, CliError> {
    let fam = cfg.family()?;
    let lo = cfg.run.profile_rho_min.max(fam.hm.domain().min);
    let mut sink = Sink::new(cfg)?;
    let mut plot = Plot::new("Density profiles", "x", "rho");
    let mut window = (f64::INFINITY, f64::NEG_INFINITY);
    let mut summary = Vec::new();
    for (i, &t) in cfg.run.times.iter().enumerate() {
        let grid = fam.graded_grid(t, lo, cfg.run.profile_points);
        let prof = fam.profile(t, &grid)?;
        let mut table = Table::new(&["t", "x", "rho", "u", "branch"]);
        for s in &prof {
            table.row(&[
                t.into(),
                s.x.into(),
                s.rho.into(),
                s.u.into(),
                s.branch.as_str().into(),
            ]);
        }
        let peak = prof.iter().map(|s| s.rho).fold(0.0, f64::max);
        for s in prof.iter().filter(|s| s.rho >= 0.2 * peak) {
            window = (window.0.min(s.x), window.1.max(s.x));
        }
        let folds = fold_count(&prof);
        let pre = preimage_counts(&prof);
        let listed: Vec<String> = pre.iter().map(usize::to_string).collect();
        sink.say(format!(
            "t={}: {} samples, {folds} folds, preimage counts {{{}}}",
            fmt_num(t),
            prof.len(),
            listed.join(", ")
        ));
        sink.table(&format!("profile_t{}.csv", fmt_num(t)), &table)?;
        summary
            .push(json!({"t": t, "samples": prof.len(), "folds": folds, "preimage_counts": pre}));
        let color = PALETTE[i % PALETTE.len()];
        let mut plus = Series::line(format!("t={} plus", fmt_num(t)), color, Vec::new());
        let mut minus = Series::line(format!("t={} minus", fmt_num(t)), color, Vec::new())
            .styled(Style::Dashed);
        plus.pieces.clear();
        minus.pieces.clear();
        for (b, pts) in branch_runs(&prof) {
            match b {
                Branch::Plus => plus.pieces.push(pts),
                Branch::Minus => minus.pieces.push(pts),
            }
        }
        plot.push(plus);
        plot.push(minus);
    }
    sink.json("profile.json", &json!({ "profiles": summary }))?;
    if let Some([lo, hi]) = cfg.run.profile_x_range {
        plot = plot.with_x_limits(lo, hi);
    } else if window.0 < window.1 {
        let pad = 0.1 * (window.1 - window.0);
        plot = plot.with_x_limits(window.0 - pad, window.1 + pad);
    }
    sink.svg("profile.svg", &plot)?;
    Ok(sink.report)
}

fn caustic_curves(cfg: &RunConfig, fam: &Family) -> Result<Vec<CausticCurve<f64>>, CliError> {
    let [lo, hi] = cfg.run.caustic_rho_range;
    let dom = fam.hm.domain();
    let grid = numeric::log_grid(lo.max(dom.min), hi.min(dom.max), cfg.run.caustic_points);
    Branch::BOTH
        .iter()
        .map(|&b| caustic(fam, &grid, b).map_err(CliError::from))
        .collect()
}

fn caustic_series(curves: &[CausticCurve<f64>], plot: &mut Plot) {
    for (i, c) in curves.iter().enumerate() {
        let pts = c.samples.iter().map(|s| (s.x, s.t)).collect();
        plot.push(
            Series::line(format!("caustic {}", c.branch), PALETTE[5], pts).styled(if i == 0 {
                Style::Line
            } else {
                Style::Dashed
            }),
        );
    }
    let cusps: Vec<(f64, f64)> = curves
        .iter()
        .filter_map(|c| c.cusp.map(|k| (k.x, k.t)))
        .collect();
    if !cusps.is_empty() {
        plot.push(Series::line("cusp", PALETTE[4], cusps).styled(Style::Markers));
    }
}

pub fn caustic_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let fam = cfg.family()?;
    let curves = caustic_curves(cfg, &fam)?;
    let mut sink = Sink::new(cfg)?;
    let mut info = Vec::new();
    for c in &curves {
        let mut table = Table::new(&["rho", "t", "x", "branch"]);
        for s in &c.samples {
            table.row(&[
                s.rho.into(),
                s.t.into(),
                s.x.into(),
                c.branch.as_str().into(),
            ]);
        }
        sink.table(&format!("caustic_{}.csv", c.branch), &table)?;
        let cusp_text = c.cusp.map_or("no cusp in range".to_owned(), |k| {
            format!(
                "cusp rho={} t={} x={}",
                fmt_num(k.rho),
                fmt_num(k.t),
                fmt_num(k.x)
            )
        });
        sink.say(format!(
            "{}: {} points, {} skipped, {cusp_text}, printed t formula gap {:.3e}",
            c.branch,
            c.samples.len(),
            c.skipped,
            c.printed_t_gap
        ));
        info.push(json!({
            "branch": c.branch.as_str(),
            "points": c.samples.len(),
            "skipped": c.skipped,
            "printed_t_gap": c.printed_t_gap,
            "cusp": c.cusp.map(|k| json!({"rho": k.rho, "t": k.t, "x": k.x, "u": k.u})),
        }));
    }
    sink.json("caustic.json", &json!({ "branches": info }))?;
    let mut plot = Plot::new("Caustics", "x", "t");
    caustic_series(&curves, &mut plot);
    sink.svg("caustic.svg", &plot)?;
    Ok(sink.report)
}

const SHOCK_HEADER: [&str; 6] = ["t", "x_s", "rho1", "rho2", "residual_H", "residual_x"];

fn shock_row(table: &mut Table, s: &FrontSample<f64>) {
    table.row(&[
        s.t.into(),
        s.x_s.into(),
        s.rho1.into(),
        s.rho2.into(),
        s.residual_h.into(),
        s.residual_x.into(),
    ]);
}

#[derive(Serialize)]
struct FrontSummary {
    branch: &'static str,
    cusp_t: f64,
    cusp_x: f64,
    steps: usize,
    t_end: Option<f64>,
    termination: String,
    max_residual_h: f64,
    max_residual_x: f64,
}

pub fn shock(cfg: &RunConfig) -> Result<Report, CliError> {
    let fam = cfg.family()?;
    let mut sink = Sink::new(cfg)?;
    let mut fronts: Vec<ShockFront<f64>> = Vec::new();
    for b in Branch::BOTH {
        let cp = match cusp(&fam, b) {
            Ok(c) => c,
            Err(SingularityError::NoCusp { .. }) => {
                sink.say(format!("{b}: no cusp, no front"));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        fronts.push(shock_front_partial(
            &fam,
            b,
            (cp.t, cp.t + cfg.run.shock_span),
            cfg.run.dt,
        )?);
    }

    let mut all = Table::new(&SHOCK_HEADER);
    let mut summaries = Vec::new();
    let mut stall = None;
    for fr in &fronts {
        let mut table = Table::new(&SHOCK_HEADER);
        for s in &fr.samples {
            shock_row(&mut table, s);
            shock_row(&mut all, s);
        }
        sink.table(&format!("shock_{}.csv", fr.branch), &table)?;
        let term = match fr.termination {
            Termination::Completed => "completed".to_owned(),
            Termination::Collapsed { t } => format!("collapsed at t={}", fmt_num(t)),
            Termination::Stalled { last_t } => {
                stall.get_or_insert(SingularityError::ContinuationStall {
                    last_t,
                    accepted: fr.samples.len(),
                });
                format!("stalled after t={}", fmt_num(last_t))
            }
        };
        let max = |f: fn(&FrontSample<f64>) -> f64| fr.samples.iter().map(f).fold(0.0, f64::max);
        let summary = FrontSummary {
            branch: fr.branch.as_str(),
            cusp_t: fr.cusp.t,
            cusp_x: fr.cusp.x,
            steps: fr.samples.len(),
            t_end: fr.t_end(),
            termination: term,
            max_residual_h: max(|s| s.residual_h),
            max_residual_x: max(|s| s.residual_x),
        };
        sink.say(format!(
            "{}: born at t={} x={}, {} steps, {}, max residuals H {:.3e} x {:.3e}",
            summary.branch,
            fmt_num(summary.cusp_t),
            fmt_num(summary.cusp_x),
            summary.steps,
            summary.termination,
            summary.max_residual_h,
            summary.max_residual_x
        ));
        summaries.push(summary);
    }
    sink.table("shock.csv", &all)?;
    sink.json("shock.json", &serde_json::to_value(&summaries)?)?;

    if cfg.output.wants(Format::Svg) {
        let curves = caustic_curves(cfg, &fam)?;
        let mut plot = Plot::new("Caustics and shock fronts", "x", "t");
        caustic_series(&curves, &mut plot);
        for (i, fr) in fronts.iter().enumerate() {
            let pts = fr.samples.iter().map(|s| (s.x_s, s.t)).collect();
            plot.push(Series::line(
                format!("front {}", fr.branch),
                PALETTE[1 + i],
                pts,
            ));
        }
        sink.svg("shock.svg", &plot)?;
    }
    sink.report.failure = stall.map(CliError::from);
    Ok(sink.report)
}

fn outcome_json(c: &CheckOutcome) -> Value {
    let metrics: serde_json::Map<String, Value> = c
        .metrics
        .iter()
        .map(|(k, v)| ((*k).to_owned(), finite_or_null(*v)))
        .collect();
    json!({
        "id": c.id,
        "title": c.title,
        "passed": c.passed,
        "worst": finite_or_null(c.worst),
        "tolerance": finite_or_null(c.tolerance),
        "elapsed_s": c.elapsed.as_secs_f64(),
        "time_limit_s": c.time_limit.map(|d| d.as_secs_f64()),
        "detail": c.detail,
        "metrics": metrics,
    })
}

pub fn validate(cfg: &RunConfig) -> Result<Report, CliError> {
    let fam = cfg.family()?;
    let forms = cfg.homentropic_with_offset(cfg.run.corrupt_m_offset)?;
    let suite = SuiteConfig {
        dt: cfg.run.dt,
        shock_span: cfg.run.shock_span,
        ..SuiteConfig::default()
    };
    let outcomes = run_all(&fam, &forms, &suite);
    let passed = outcomes.iter().all(|c| c.passed);
    let report = json!({
        "passed": passed,
        "corrupt_m_offset": cfg.run.corrupt_m_offset,
        "checks": outcomes.iter().map(outcome_json).collect::<Vec<_>>(),
    });
    let mut sink = Sink::new(cfg)?;
    sink.say(serde_json::to_string_pretty(&report)?);
    sink.json_always("validate.json", &report)?;
    if !passed {
        let failed: Vec<&str> = outcomes
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.id)
            .collect();
        sink.report.failure = Some(CliError::ChecksFailed {
            failed: failed.len(),
            total: outcomes.len(),
            ids: failed.join(", "),
        });
    }
    Ok(sink.report)
}

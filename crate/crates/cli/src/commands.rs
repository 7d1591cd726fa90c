use std::fs;
use std::path::{Path, PathBuf};

use heatlab::asymptotics::{expansion_curve, log_grid, spectral_third_coeff, Expansion};
use heatlab::heat::{calibrate_crossing, ks_mc_curve, sk_series_curve, sk_series, HeatPoint};
use heatlab::subordinator::{density_scaled, DensityEvaluator};
use heatlab::supremum::{
    bm_sup_tail, cauchy_sup_tail, monte_carlo_tail, sample_stable_sup, skbm_sup_tail_with, SkbmTailOptions,
};
use heatlab::validate::{criterion_ids, run_suite, Suite, ValidateOptions};
use heatlab::{
    fit_coefficients, ks_reduction, sk_mc, theorem_expansion, BasisTerm, DensityEvalConfig, Error, ExpansionResources,
    HeatCurve, Interval, McConfig, ProcessKind, Provenance, Regime, StableIndex, SupSampleConfig, TailFunction,
};
use serde::Serialize;

use crate::output::{table_json, write_json, write_table, Cell, Meta, Table};
use crate::spec::*;
use crate::Failure;

pub fn execute(cmd: Command) -> Result<(), Failure> {
    let cmd = match cmd {
        Command::Rerun(r) => load_spec(&r.spec, r.out)?,
        c => c,
    };
    if let Some(path) = cmd.output().and_then(|o| o.save_spec.clone()) {
        let json = serde_json::to_string_pretty(&cmd).map_err(|e| Failure::Runtime(e.to_string()))?;
        fs::write(path, json + "\n")?;
    }
    let meta = Meta::for_command(&cmd)?;
    match &cmd {
        Command::Tail(a) => tail(a, &meta),
        Command::Density(a) => density(a, &meta),
        Command::Heat(a) => heat(a, &meta),
        Command::Expand(a) => expand(a, &meta),
        Command::Fit(a) => fit(a, &meta),
        Command::Validate(a) => validate(a, &meta),
        Command::Rerun(_) => unreachable!("resolved above"),
    }
}

fn load_spec(path: &Path, out: Option<PathBuf>) -> Result<Command, Failure> {
    let text = fs::read_to_string(path)?;
    let mut cmd: Command =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if let Some(o) = cmd.output_mut() {
        o.out = out;
    }
    Ok(cmd)
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn stable_index(alpha: f64) -> Result<StableIndex<f64>, Failure> {
    StableIndex::new(alpha).map_err(usage)
}

fn interval(p: Pair) -> Result<Interval<f64>, Failure> {
    Interval::new(p.0, p.1).map_err(usage)
}

fn grid(explicit: &[f64], lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, Failure> {
    if !explicit.is_empty() {
        return Ok(explicit.to_vec());
    }
    if !(lo > 0.0 && lo < hi) || points < 2 {
        return Err(Failure::Usage(format!("grid needs 0 < min < max and points >= 2 (got {lo}, {hi}, {points})")));
    }
    Ok(log_grid(lo, hi, points))
}

fn kinds(p: ProcessArg) -> Vec<ProcessKind> {
    match p {
        ProcessArg::Ksbm => vec![ProcessKind::KilledSubordinate],
        ProcessArg::Skbm => vec![ProcessKind::SubordinateKilled],
        ProcessArg::Both => vec![ProcessKind::KilledSubordinate, ProcessKind::SubordinateKilled],
    }
}

fn emit_table(meta: &Meta, out: &OutputArgs, table: Table) -> Result<(), Failure> {
    match out.format.unwrap_or(Format::Csv) {
        Format::Csv => write_table(meta, &table, out.out.as_deref()),
        Format::Json => write_json(meta, &table_json(&table), out.out.as_deref()),
    }
}

fn tail(a: &TailArgs, meta: &Meta) -> Result<(), Failure> {
    let us = grid(&a.u, a.u_min, a.u_max, a.points)?;
    let f: TailFunction = match a.kind {
        TailKind::Bm => bm_sup_tail(),
        TailKind::CauchySup => cauchy_sup_tail(),
        TailKind::SkbmSup => {
            let opts = SkbmTailOptions {
                fast_path: !a.no_fast_path,
                ..Default::default()
            };
            skbm_sup_tail_with(&stable_index(a.alpha)?, opts)
        }
    };
    let mut rows = Vec::with_capacity(us.len());
    for u in us {
        if !(u >= 0.0) {
            return Err(Failure::Usage(format!("level {u} must be >= 0")));
        }
        let s = f.survival(u);
        if !s.is_finite() {
            return Err(Failure::Runtime(format!("{} tail failed at u = {u}", f.label())));
        }
        rows.push(vec![u.into(), s.into(), f.stderr(u).into()]);
    }
    let table = Table {
        columns: vec!["u", "survival", "stderr"],
        rows,
    };
    emit_table(meta, &a.output, table)
}

fn density(a: &DensityArgs, meta: &Meta) -> Result<(), Failure> {
    let index = stable_index(a.alpha)?;
    if !(a.t > 0.0) {
        return Err(Failure::Usage(format!("t = {} must be > 0", a.t)));
    }
    let xs = grid(&a.x, a.x_min, a.x_max, a.points)?;
    let cfg = DensityEvalConfig::for_index(&index);
    let eval = DensityEvaluator::new(&index, &cfg)?;
    let c = a.t.powf(-2.0 / a.alpha);
    let mut rows = Vec::with_capacity(xs.len());
    for x in xs {
        if !(x > 0.0) {
            return Err(Failure::Usage(format!("x = {x} must be > 0")));
        }
        let value = density_scaled(&index, a.t, x, &cfg)?;
        let (_, method) = eval.eval(x * c)?;
        let method = format!("{method:?}").to_lowercase();
        rows.push(vec![x.into(), value.into(), Cell::Text(method)]);
    }
    let table = Table {
        columns: vec!["x", "density", "method"],
        rows,
    };
    emit_table(meta, &a.output, table)
}

fn mc_config(mc: &McArgs, strata: usize) -> McConfig {
    McConfig {
        paths: mc.paths,
        n_steps: mc.steps,
        x_strata: strata,
        seed: mc.seed,
    }
}

fn sup_config(mc: &McArgs) -> SupSampleConfig {
    SupSampleConfig {
        n_steps: mc.steps,
        bridge_correction: false,
        paths: mc.paths,
        seed: mc.seed,
    }
}

fn heat(a: &HeatArgs, meta: &Meta) -> Result<(), Failure> {
    let index = stable_index(a.alpha)?;
    let d = interval(a.interval)?;
    let ts = grid(&[], a.t_min, a.t_max, a.points)?;
    let cfg = mc_config(&a.mc, a.strata);
    cfg.validate().map_err(usage)?;
    let mut curves = Vec::new();
    for kind in kinds(a.process) {
        let curve = match (a.method, kind) {
            (HeatMethod::Series, ProcessKind::SubordinateKilled) => match a.terms {
                None => sk_series_curve(&index, &d, &ts)?,
                Some(n) => truncated_series(&index, &d, &ts, n)?,
            },
            (HeatMethod::Series, ProcessKind::KilledSubordinate) => {
                return Err(Failure::Usage("the eigenvalue series exists for skbm only; use --method mc".into()))
            }
            (HeatMethod::Mc, ProcessKind::KilledSubordinate) => {
                let est = ks_mc_curve(&index, &d, &ts, &cfg)?;
                mc_curve(kind, &index, &d, &ts, est.iter().map(|e| (e.estimate, e.stderr, e.bias_diag)))
            }
            (HeatMethod::Mc, ProcessKind::SubordinateKilled) => {
                let est = ts
                    .iter()
                    .map(|&t| sk_mc(&index, &d, t, &cfg))
                    .collect::<heatlab::Result<Vec<_>>>()?;
                mc_curve(kind, &index, &d, &ts, est.iter().map(|e| (e.estimate, e.stderr, e.bias_diag)))
            }
            (HeatMethod::Reduction, ProcessKind::KilledSubordinate) => reduction_curve(&index, &d, &ts, a)?,
            (HeatMethod::Reduction, ProcessKind::SubordinateKilled) => {
                return Err(Failure::Usage("the one-dimensional reduction applies to ksbm only".into()))
            }
        };
        if let Err(e) = curve.check_invariants(5.0) {
            eprintln!("warning: {} curve: {e}", kind.short_name());
        }
        curves.push(curve);
    }
    let both = curves.len() > 1;
    let mut columns = vec!["t", "value", "stderr", "provenance", "bias_diag"];
    if both {
        columns.push("process");
    }
    let mut rows = Vec::new();
    for c in &curves {
        for p in &c.points {
            let mut row = vec![
                p.t.into(),
                p.value.into(),
                p.stderr.into(),
                c.provenance.name().into(),
                p.bias_diag.into(),
            ];
            if both {
                row.push(c.process_kind.short_name().into());
            }
            rows.push(row);
        }
    }
    emit_table(meta, &a.output, Table { columns, rows })
}

/// Truncated series; the truncation bound goes in the bias column.
fn truncated_series(index: &StableIndex<f64>, d: &Interval<f64>, ts: &[f64], n: usize) -> Result<HeatCurve, Failure> {
    let points = ts
        .iter()
        .map(|&t| {
            let (value, bound) = sk_series(index, d, t, n)?;
            Ok(HeatPoint {
                t,
                value,
                stderr: 0.0,
                bias_diag: Some(bound),
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(HeatCurve {
        process_kind: ProcessKind::SubordinateKilled,
        alpha: index.alpha(),
        interval: *d,
        points,
        provenance: Provenance::Series,
    })
}

fn mc_curve(
    kind: ProcessKind,
    index: &StableIndex<f64>,
    d: &Interval<f64>,
    ts: &[f64],
    est: impl Iterator<Item = (f64, f64, Option<f64>)>,
) -> HeatCurve {
    HeatCurve {
        process_kind: kind,
        alpha: index.alpha(),
        interval: *d,
        points: ts
            .iter()
            .zip(est)
            .map(|(&t, (value, stderr, bias_diag))| HeatPoint {
                t,
                value,
                stderr,
                bias_diag,
            })
            .collect(),
        provenance: Provenance::MonteCarlo,
    }
}

/// `|D|` minus the reduction main term. The bias column carries the
/// calibrated crossing correction, which the main term leaves out.
fn reduction_curve(index: &StableIndex<f64>, d: &Interval<f64>, ts: &[f64], a: &HeatArgs) -> Result<HeatCurve, Failure> {
    let len = d.length();
    let lp_max = ts.iter().map(|&t| len * t.powf(-1.0 / a.alpha)).fold(0.0, f64::max);
    let (tail, provenance) = if index.regime() == Regime::Cauchy {
        (cauchy_sup_tail(), Provenance::Quadrature)
    } else {
        let samples = sample_stable_sup(index, &sup_config(&a.mc))?;
        let hi = samples.iter().cloned().fold(lp_max, f64::max);
        (monte_carlo_tail("stable-sup", &samples, 1e-3, hi)?, Provenance::MonteCarlo)
    };
    let t_ref = ts.iter().cloned().fold(0.0, f64::max);
    let calib = calibrate_crossing(index, d, t_ref, &mc_config(&a.mc, a.strata))?;
    let points = ts
        .iter()
        .map(|&t| {
            let r = ks_reduction(index, d, t, &tail, Some(&calib))?;
            let stderr = match provenance {
                Provenance::MonteCarlo => 2.0 * t.powf(1.0 / a.alpha) * integrated_stderr(&tail, len * t.powf(-1.0 / a.alpha)),
                _ => r.main_error,
            };
            Ok(HeatPoint {
                t,
                value: len - r.main_term,
                stderr,
                bias_diag: Some(r.crossing_bound),
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(HeatCurve {
        process_kind: ProcessKind::KilledSubordinate,
        alpha: index.alpha(),
        interval: *d,
        points,
        provenance,
    })
}

/// Integral of the pointwise tail stderr over `[0, upper]`, a conservative
/// bound on the stderr of the tail integral.
fn integrated_stderr(tail: &TailFunction, upper: f64) -> f64 {
    const N: usize = 2000;
    let lo = 1e-3_f64.min(upper);
    let head = tail.stderr(0.0).unwrap_or(0.0).max(tail.stderr(lo).unwrap_or(0.0)) * lo;
    let step = (upper / lo).ln() / N as f64;
    let body: f64 = (0..N)
        .map(|k| {
            let u0 = lo * (step * k as f64).exp();
            let u1 = lo * (step * (k + 1) as f64).exp();
            0.5 * (tail.stderr(u0).unwrap_or(0.0) + tail.stderr(u1).unwrap_or(0.0)) * (u1 - u0)
        })
        .sum();
    head + body
}

const SIGN_CONVENTION: &str =
    "defect |D| - Q(t) = c2 t^(1/alpha) + c2log t ln(1/t) + c3 t; c3 carries its sign";

#[derive(Serialize)]
struct ExpandOutput {
    sign_convention: &'static str,
    expansions: Vec<ExpandEntry>,
}

#[derive(Serialize)]
struct ExpandEntry {
    #[serde(flatten)]
    expansion: Expansion<f64>,
    /// Coefficient of `t` read off the eigenvalue series.
    #[serde(skip_serializing_if = "Option::is_none")]
    spectral_c3: Option<f64>,
}

fn expand(a: &ExpandArgs, meta: &Meta) -> Result<(), Failure> {
    let index = stable_index(a.alpha)?;
    let d = interval(a.interval)?;
    let resources = ExpansionResources {
        sup_config: sup_config(&a.mc),
        ..Default::default()
    };
    let mut expansions = Vec::new();
    for kind in kinds(a.process) {
        let expansion = theorem_expansion(kind, &index, &d, &resources)?;
        let spectral_c3 = if a.spectral && kind == ProcessKind::SubordinateKilled {
            Some(spectral_third_coeff(&index, d.length())?)
        } else {
            None
        };
        expansions.push(ExpandEntry { expansion, spectral_c3 });
    }
    let out = ExpandOutput {
        sign_convention: SIGN_CONVENTION,
        expansions,
    };
    write_json(meta, &out, a.output.out.as_deref())
}

#[derive(Serialize)]
struct FitOutput {
    process: &'static str,
    alpha: f64,
    fit: heatlab::FitResult,
    /// Generating coefficients of a synthetic curve.
    #[serde(skip_serializing_if = "Option::is_none")]
    truth: Option<Expansion<f64>>,
}

fn fit(a: &FitArgs, meta: &Meta) -> Result<(), Failure> {
    let index = stable_index(a.alpha)?;
    let d = interval(a.interval)?;
    let kind = match a.process {
        ProcessArg::Ksbm => ProcessKind::KilledSubordinate,
        ProcessArg::Skbm => ProcessKind::SubordinateKilled,
        ProcessArg::Both => return Err(Failure::Usage("fit takes a single process".into())),
    };
    let basis: Vec<BasisTerm> = if a.basis.is_empty() {
        match index.regime() {
            Regime::Cauchy => vec![BasisTerm::TLog, BasisTerm::Linear],
            _ => vec![BasisTerm::Power, BasisTerm::Linear],
        }
    } else {
        a.basis
            .iter()
            .map(|b| match b {
                BasisArg::Power => BasisTerm::Power,
                BasisArg::Tlog => BasisTerm::TLog,
                BasisArg::Linear => BasisTerm::Linear,
            })
            .collect()
    };
    let window = (a.window.0, a.window.1);
    let (curve, truth) = match (&a.input, a.synthetic) {
        (Some(path), _) => (read_curve(path, kind, &index, &d)?, None),
        (None, true) => {
            let resources = ExpansionResources {
                sup_config: sup_config(&a.mc),
                ..Default::default()
            };
            let e = theorem_expansion(kind, &index, &d, &resources)?;
            let ts = grid(&[], window.0, window.1, a.points)?;
            (expansion_curve(&e, &ts), Some(e))
        }
        (None, false) => return Err(Failure::Usage("fit needs --input <csv> or --synthetic".into())),
    };
    let result = fit_coefficients(&curve, &basis, window)?;
    let out = FitOutput {
        process: kind.short_name(),
        alpha: a.alpha,
        fit: result,
        truth,
    };
    write_json(meta, &out, a.output.out.as_deref())
}

/// Reads a curve written by `heat` (comment lines start with `#`).
fn read_curve(path: &Path, kind: ProcessKind, index: &StableIndex<f64>, d: &Interval<f64>) -> Result<HeatCurve, Failure> {
    let bad = |m: String| Failure::Runtime(format!("{}: {m}", path.display()));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| bad(e.to_string()))?;
    let headers = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (ti, vi, si, pi) = match (col("t"), col("value"), col("stderr"), col("provenance")) {
        (Some(t), Some(v), Some(s), Some(p)) => (t, v, s, p),
        _ => return Err(bad("expected columns t,value,stderr,provenance".into())),
    };
    let (bi, ki) = (col("bias_diag"), col("process"));
    let num = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("'{s}': {e}")));
    let mut points = Vec::new();
    let mut provenance = None;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        if let Some(k) = ki {
            if &rec[k] != kind.short_name() {
                continue;
            }
        }
        let p = match &rec[pi] {
            "series" => Provenance::Series,
            "quadrature" => Provenance::Quadrature,
            "mc" => Provenance::MonteCarlo,
            other => return Err(bad(format!("unknown provenance '{other}'"))),
        };
        provenance.get_or_insert(p);
        let bias_diag = match bi.map(|b| &rec[b]) {
            Some(s) if !s.is_empty() => Some(num(s)?),
            _ => None,
        };
        points.push(HeatPoint {
            t: num(&rec[ti])?,
            value: num(&rec[vi])?,
            stderr: num(&rec[si])?,
            bias_diag,
        });
    }
    let provenance = provenance.ok_or_else(|| bad(format!("no {} rows", kind.short_name())))?;
    Ok(HeatCurve {
        process_kind: kind,
        alpha: index.alpha(),
        interval: *d,
        points,
        provenance,
    })
}

fn validate(a: &ValidateArgs, meta: &Meta) -> Result<(), Failure> {
    let known = criterion_ids();
    let ids: Vec<String> = if a.only.is_empty() {
        known.iter().map(|s| s.to_string()).collect()
    } else {
        let ids: Vec<String> = a.only.iter().map(|s| s.trim().to_uppercase()).collect();
        if let Some(bad) = ids.iter().find(|id| !known.contains(&id.as_str())) {
            return Err(Failure::Usage(format!("unknown criterion '{bad}' (known: {})", known.join(", "))));
        }
        ids
    };
    let opts = ValidateOptions {
        suite: match a.suite {
            SuiteArg::Fast => Suite::Fast,
            SuiteArg::Full => Suite::Full,
        },
        tamper: a.tamper,
        seed: a.seed,
    };
    let reports = run_suite(&ids, &opts)?;
    for r in &reports {
        println!("{}", r.line());
    }
    let all = reports.iter().all(|r| r.pass);
    if let Some(path) = a.output.out.as_deref() {
        #[derive(Serialize)]
        struct Report<'a> {
            pass: bool,
            criteria: &'a [heatlab::validate::CriterionReport],
        }
        write_json(meta, &Report { pass: all, criteria: &reports }, Some(path))?;
    }
    if all {
        Ok(())
    } else {
        Err(Failure::Criteria)
    }
}

//! Run histories, their CSV/JSONL persistence, data profiles and campaigns.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::benchmarks::{manifest_json, suite, BenchmarkError, Instance, Suite};
use crate::problem::{Phase, ProblemError};
use crate::solvers::{run, Algorithm, IterationTrace, RunOptions, SolverError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Benchmark(#[from] BenchmarkError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> HarnessError + '_ {
    move |source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn json_err(path: &Path) -> impl FnOnce(serde_json::Error) -> HarnessError + '_ {
    move |source| HarnessError::Json {
        path: path.to_path_buf(),
        source,
    }
}

fn format_err(path: &Path, msg: impl Into<String>) -> HarnessError {
    HarnessError::Format {
        path: path.to_path_buf(),
        msg: msg.into(),
    }
}

/// One evaluation as stored in a history.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub eval: usize,
    pub iter: usize,
    pub phase: Phase,
    pub point: Vec<f64>,
    pub f_raw: Option<f64>,
    pub f_barrier: f64,
    pub feasible: bool,
    /// Best barrier value over this and all earlier evaluations.
    pub f_incumbent: f64,
    pub delta_frame: f64,
    pub delta_excl: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub algorithm: Algorithm,
    pub problem: String,
    pub dimension: usize,
    pub seed: u64,
    pub budget: usize,
    pub options: RunOptions,
    pub options_hash: String,
}

/// FNV-1a over the canonical JSON of the options.
fn options_hash(options: &RunOptions) -> String {
    let text = serde_json::to_string(options).expect("options serialize");
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    format!("{h:016x}")
}

impl RunMeta {
    pub fn new(
        algorithm: Algorithm,
        problem: &str,
        dimension: usize,
        seed: u64,
        budget: usize,
        options: &RunOptions,
    ) -> Self {
        Self {
            algorithm,
            problem: problem.to_string(),
            dimension,
            seed,
            budget,
            options: options.clone(),
            options_hash: options_hash(options),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunHistory {
    pub meta: RunMeta,
    pub records: Vec<Record>,
    /// Step sizes at the start of each iteration.
    pub trace: Vec<IterationTrace>,
}

impl RunHistory {
    pub fn best_value(&self) -> f64 {
        self.records.last().map_or(f64::INFINITY, |r| r.f_incumbent)
    }

    pub fn incumbent_values(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.f_incumbent).collect()
    }

    pub fn points(&self) -> Vec<&[f64]> {
        self.records.iter().map(|r| r.point.as_slice()).collect()
    }

    /// Best barrier value after the first `n` evaluations.
    pub fn best_after(&self, n: usize) -> f64 {
        match n.min(self.records.len()) {
            0 => f64::INFINITY,
            k => self.records[k - 1].f_incumbent,
        }
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), HarnessError> {
        write_records_csv(&self.records, self.meta.dimension, path)
    }

    pub fn write_jsonl(&self, path: &Path) -> Result<(), HarnessError> {
        let file = fs::File::create(path).map_err(io_err(path))?;
        let mut w = BufWriter::new(file);
        let meta = json!({ "meta": self.meta, "trace": self.trace.iter().map(trace_json).collect::<Vec<_>>() });
        writeln!(w, "{meta}").map_err(io_err(path))?;
        for r in &self.records {
            writeln!(w, "{}", record_json(r)).map_err(io_err(path))?;
        }
        w.flush().map_err(io_err(path))
    }

    pub fn read_jsonl(path: &Path) -> Result<Self, HarnessError> {
        let file = fs::File::open(path).map_err(io_err(path))?;
        let mut lines = BufReader::new(file).lines();
        let head = lines
            .next()
            .ok_or_else(|| format_err(path, "empty history"))?
            .map_err(io_err(path))?;
        let head: Value = serde_json::from_str(&head).map_err(json_err(path))?;
        let meta: RunMeta = serde_json::from_value(head["meta"].clone()).map_err(json_err(path))?;
        let trace = head["trace"]
            .as_array()
            .ok_or_else(|| format_err(path, "missing trace"))?
            .iter()
            .map(|t| parse_trace_json(t).ok_or_else(|| format_err(path, "bad trace entry")))
            .collect::<Result<_, _>>()?;
        let mut records = Vec::new();
        for line in lines {
            let line = line.map_err(io_err(path))?;
            if line.trim().is_empty() {
                continue;
            }
            let v: Value = serde_json::from_str(&line).map_err(json_err(path))?;
            records.push(
                parse_record_json(&v)
                    .ok_or_else(|| format_err(path, format!("bad record `{line}`")))?,
            );
        }
        Ok(Self {
            meta,
            records,
            trace,
        })
    }
}

/// Full-precision decimal; `inf` for infinities.
fn fmt_f64(v: f64) -> String {
    v.to_string()
}

fn parse_f64(s: &str) -> Option<f64> {
    s.trim().parse().ok()
}

fn json_f64(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(fmt_f64(v))
    }
}

fn value_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => parse_f64(s),
        _ => None,
    }
}

fn record_json(r: &Record) -> Value {
    json!({
        "eval": r.eval,
        "iter": r.iter,
        "phase": r.phase.as_str(),
        "x": r.point,
        "f_raw": r.f_raw.map(json_f64),
        "f_barrier": json_f64(r.f_barrier),
        "feasible": r.feasible,
        "f_incumbent": json_f64(r.f_incumbent),
        "delta_frame": json_f64(r.delta_frame),
        "delta_excl": json_f64(r.delta_excl),
    })
}

fn parse_record_json(v: &Value) -> Option<Record> {
    Some(Record {
        eval: v["eval"].as_u64()? as usize,
        iter: v["iter"].as_u64()? as usize,
        phase: Phase::parse(v["phase"].as_str()?)?,
        point: v["x"]
            .as_array()?
            .iter()
            .map(value_f64)
            .collect::<Option<_>>()?,
        f_raw: match &v["f_raw"] {
            Value::Null => None,
            other => Some(value_f64(other)?),
        },
        f_barrier: value_f64(&v["f_barrier"])?,
        feasible: v["feasible"].as_bool()?,
        f_incumbent: value_f64(&v["f_incumbent"])?,
        delta_frame: value_f64(&v["delta_frame"])?,
        delta_excl: value_f64(&v["delta_excl"])?,
    })
}

fn trace_json(t: &IterationTrace) -> Value {
    json!({
        "iteration": t.iteration,
        "frame": json_f64(t.frame),
        "excl": json_f64(t.excl),
        "unsuccessful": t.unsuccessful,
        "mesh": t.mesh.map(json_f64),
    })
}

fn parse_trace_json(v: &Value) -> Option<IterationTrace> {
    Some(IterationTrace {
        iteration: v["iteration"].as_u64()? as usize,
        frame: value_f64(&v["frame"])?,
        excl: value_f64(&v["excl"])?,
        unsuccessful: v["unsuccessful"].as_u64()?,
        mesh: match &v["mesh"] {
            Value::Null => None,
            other => Some(value_f64(other)?),
        },
    })
}

pub fn history_header(n: usize) -> Vec<String> {
    let mut h: Vec<String> = vec!["eval".into(), "iter".into(), "phase".into()];
    h.extend((1..=n).map(|i| format!("x{i}")));
    h.extend(
        [
            "f_raw",
            "f_barrier",
            "feasible",
            "f_incumbent",
            "delta_frame",
            "delta_excl",
        ]
        .map(String::from),
    );
    h
}

pub fn write_records_csv(records: &[Record], n: usize, path: &Path) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(history_header(n)).map_err(csv_err(path))?;
    for r in records {
        let mut row = vec![
            r.eval.to_string(),
            r.iter.to_string(),
            r.phase.as_str().to_string(),
        ];
        row.extend(r.point.iter().map(|v| fmt_f64(*v)));
        row.push(r.f_raw.map(fmt_f64).unwrap_or_default());
        row.push(fmt_f64(r.f_barrier));
        row.push(r.feasible.to_string());
        row.push(fmt_f64(r.f_incumbent));
        row.push(fmt_f64(r.delta_frame));
        row.push(fmt_f64(r.delta_excl));
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Reads a history CSV; the dimension is inferred from the header.
pub fn read_records_csv(path: &Path) -> Result<Vec<Record>, HarnessError> {
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = rdr.headers().map_err(csv_err(path))?.clone();
    if header.len() < 9 {
        return Err(format_err(path, "too few columns"));
    }
    let n = header.len() - 9;
    if history_header(n)
        .iter()
        .map(String::as_str)
        .ne(header.iter())
    {
        return Err(format_err(path, "unexpected header"));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(csv_err(path))?;
        let bad = |what: &str| {
            format_err(
                path,
                format!(
                    "bad {what} in row `{}`",
                    row.iter().collect::<Vec<_>>().join(",")
                ),
            )
        };
        let num = |i: usize, what: &str| parse_f64(&row[i]).ok_or_else(|| bad(what));
        out.push(Record {
            eval: row[0].parse().map_err(|_| bad("eval"))?,
            iter: row[1].parse().map_err(|_| bad("iter"))?,
            phase: Phase::parse(&row[2]).ok_or_else(|| bad("phase"))?,
            point: (0..n)
                .map(|i| num(3 + i, "coordinate"))
                .collect::<Result<_, _>>()?,
            f_raw: if row[3 + n].is_empty() {
                None
            } else {
                Some(num(3 + n, "f_raw")?)
            },
            f_barrier: num(4 + n, "f_barrier")?,
            feasible: row[5 + n].parse().map_err(|_| bad("feasible"))?,
            f_incumbent: num(6 + n, "f_incumbent")?,
            delta_frame: num(7 + n, "delta_frame")?,
            delta_excl: num(8 + n, "delta_excl")?,
        });
    }
    Ok(out)
}

/// Lowest finite barrier value across several histories of one instance.
/// `None` marks the instance unsolvable.
pub fn best_known(histories: &[&[Record]]) -> Option<f64> {
    histories
        .iter()
        .flat_map(|h| h.iter())
        .map(|r| r.f_barrier)
        .filter(|v| v.is_finite())
        .reduce(f64::min)
}

/// Smallest `N` (1-based) with `f(x^N) <= f* + τ (f⁰ - f*)`. An instance whose
/// start is already best-known counts as solved at `N = 1`.
pub fn evals_to_solve(incumbents: &[f64], f0: f64, fstar: f64, tau_acc: f64) -> Option<usize> {
    if f0 <= fstar {
        return (!incumbents.is_empty()).then_some(1);
    }
    let threshold = fstar + tau_acc * (f0 - fstar);
    incumbents
        .iter()
        .position(|&v| v <= threshold)
        .map(|i| i + 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub label: String,
    pub tau_acc: f64,
    pub alphas: Vec<f64>,
    pub fractions: Vec<f64>,
}

/// Per-instance solve count `N` (if solved) and dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveRecord {
    pub evals: Option<usize>,
    pub dimension: usize,
}

/// Fraction of instances with `N <= α (n + 1)` at each `α`.
pub fn data_profile(
    label: &str,
    solves: &[SolveRecord],
    alphas: &[f64],
    tau_acc: f64,
) -> ProfileCurve {
    let total = solves.len();
    let fractions = alphas
        .iter()
        .map(|&a| {
            if total == 0 {
                return 0.0;
            }
            let solved = solves
                .iter()
                .filter(|s| {
                    s.evals
                        .is_some_and(|n| n as f64 <= a * (s.dimension + 1) as f64)
                })
                .count();
            solved as f64 / total as f64
        })
        .collect();
    ProfileCurve {
        label: label.to_string(),
        tau_acc,
        alphas: alphas.to_vec(),
        fractions,
    }
}

/// `α = 1, 2, …, ⌊budget/(n+1)⌋`.
pub fn default_alpha_grid(budget: usize, dimension: usize) -> Vec<f64> {
    (1..=budget / (dimension + 1)).map(|a| a as f64).collect()
}

impl ProfileCurve {
    pub fn to_csv_string(&self) -> String {
        let mut s = String::from("alpha,fraction\n");
        for (a, f) in self.alphas.iter().zip(&self.fractions) {
            s.push_str(&format!("{},{}\n", fmt_f64(*a), fmt_f64(*f)));
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), HarnessError> {
        fs::write(path, self.to_csv_string()).map_err(io_err(path))
    }
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Step plot of the curves with axes, ticks and a legend.
pub fn render_svg(curves: &[ProfileCurve], title: &str) -> String {
    let (w, h) = (640.0, 420.0);
    let (left, right, top, bottom) = (60.0, 150.0, 40.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let amax = curves
        .iter()
        .flat_map(|c| c.alphas.iter().copied())
        .fold(1.0f64, f64::max);
    let sx = |a: f64| left + pw * a / amax;
    let sy = |f: f64| top + ph * (1.0 - f);

    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    s.push_str(&format!(
        "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    ));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        left + pw / 2.0,
        escape_xml(title)
    ));
    // Axes.
    s.push_str(&format!(
        "<line x1=\"{left}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n<line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{y0}\" stroke=\"black\"/>\n",
        y0 = top + ph,
        x1 = left + pw
    ));
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        s.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{left}\" y2=\"{y}\" stroke=\"black\"/><text x=\"{}\" y=\"{}\" text-anchor=\"end\">{f}</text>\n",
            left - 5.0,
            left - 8.0,
            sy(f) + 4.0,
            y = sy(f)
        ));
    }
    for i in 0..=5 {
        let a = amax * i as f64 / 5.0;
        s.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{}\" stroke=\"black\"/><text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            top + ph + 5.0,
            top + ph + 18.0,
            (a * 10.0).round() / 10.0,
            x = sx(a),
            y0 = top + ph
        ));
    }
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">α (groups of n+1 evaluations)</text>\n",
        left + pw / 2.0,
        h - 12.0
    ));
    s.push_str(&format!(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">fraction of instances solved</text>\n",
        top + ph / 2.0,
        top + ph / 2.0
    ));
    // Curves.
    for (i, c) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts = vec![(sx(0.0), sy(0.0))];
        let mut last = 0.0;
        for (a, f) in c.alphas.iter().zip(&c.fractions) {
            pts.push((sx(*a), sy(last)));
            pts.push((sx(*a), sy(*f)));
            last = *f;
        }
        let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        s.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
            path.join(" ")
        ));
        let ly = top + 10.0 + 20.0 * i as f64;
        let lx = left + pw + 15.0;
        s.push_str(&format!(
            "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/><text x=\"{}\" y=\"{}\">{}</text>\n",
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape_xml(&c.label)
        ));
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(curves: &[ProfileCurve], title: &str, path: &Path) -> Result<(), HarnessError> {
    fs::write(path, render_svg(curves, title)).map_err(io_err(path))
}

/// Evaluation budget either absolute or in groups of `n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BudgetSpec {
    Evals(usize),
    Groups(usize),
}

impl BudgetSpec {
    pub fn resolve(self, dimension: usize) -> usize {
        match self {
            BudgetSpec::Evals(n) => n,
            BudgetSpec::Groups(g) => g * (dimension + 1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CampaignSpec {
    pub suite: Suite,
    pub algorithms: Vec<Algorithm>,
    pub seeds: u64,
    pub budget: BudgetSpec,
    pub options: RunOptions,
    /// Restricts the suite to these problems when set.
    pub problems: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEntry {
    pub problem: String,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub dimension: usize,
    pub budget: usize,
    pub file: String,
    pub evaluations: usize,
    pub f0: f64,
    pub best: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignManifest {
    pub suite: String,
    pub runs: Vec<RunEntry>,
    pub instances: Value,
}

pub const MANIFEST_FILE: &str = "manifest.json";

/// Runs every (instance, algorithm) pair in parallel, writing one history CSV
/// per run plus a manifest.
pub fn run_campaign(spec: &CampaignSpec, out_dir: &Path) -> Result<CampaignManifest, HarnessError> {
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut instances = suite(spec.suite, spec.seeds)?;
    if let Some(keep) = &spec.problems {
        instances.retain(|i| keep.contains(&i.problem));
    }
    let jobs: Vec<(&Instance, Algorithm)> = instances
        .iter()
        .flat_map(|i| spec.algorithms.iter().map(move |&a| (i, a)))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|(inst, algo)| -> Result<RunEntry, HarnessError> {
            let problem = inst.build_problem()?;
            let budget = spec.budget.resolve(problem.dimension());
            let history = run(
                *algo,
                &problem,
                budget,
                inst.seed,
                &inst.options(&spec.options),
            )?;
            let file = format!("{}__{}.csv", inst.key(), algo.as_str());
            history.write_csv(&out_dir.join(&file))?;
            let best = history.best_value();
            Ok(RunEntry {
                problem: inst.problem.clone(),
                seed: inst.seed,
                algorithm: *algo,
                dimension: problem.dimension(),
                budget,
                file,
                evaluations: history.records.len(),
                f0: history.records[0].f_barrier,
                best: best.is_finite().then_some(best),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let manifest = CampaignManifest {
        suite: spec.suite.as_str().to_string(),
        runs,
        instances: manifest_json(&instances)?,
    };
    let path = out_dir.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(&manifest).map_err(json_err(&path))?;
    fs::write(&path, text).map_err(io_err(&path))?;
    Ok(manifest)
}

pub fn read_manifest(dir: &Path) -> Result<CampaignManifest, HarnessError> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    serde_json::from_str(&text).map_err(json_err(&path))
}

/// One data profile per algorithm. `f*` is the best value any algorithm found
/// on the instance; instances where nothing finite was found are dropped.
pub fn profiles_from_dir(dir: &Path, tau_acc: f64) -> Result<Vec<ProfileCurve>, HarnessError> {
    let manifest = read_manifest(dir)?;
    let mut by_instance: BTreeMap<(String, u64), Vec<(RunEntry, Vec<Record>)>> = BTreeMap::new();
    for entry in manifest.runs {
        let records = read_records_csv(&dir.join(&entry.file))?;
        by_instance
            .entry((entry.problem.clone(), entry.seed))
            .or_default()
            .push((entry, records));
    }
    let mut algorithms: Vec<Algorithm> = Vec::new();
    let mut solves: BTreeMap<Algorithm, Vec<SolveRecord>> = BTreeMap::new();
    let mut amax = 1usize;
    for runs in by_instance.values() {
        let hist: Vec<&[Record]> = runs.iter().map(|(_, r)| r.as_slice()).collect();
        let Some(fstar) = best_known(&hist) else {
            continue;
        };
        for (entry, records) in runs {
            if !algorithms.contains(&entry.algorithm) {
                algorithms.push(entry.algorithm);
            }
            amax = amax.max(entry.budget / (entry.dimension + 1));
            let incumbents: Vec<f64> = records.iter().map(|r| r.f_incumbent).collect();
            solves
                .entry(entry.algorithm)
                .or_default()
                .push(SolveRecord {
                    evals: evals_to_solve(&incumbents, entry.f0, fstar, tau_acc),
                    dimension: entry.dimension,
                });
        }
    }
    let alphas: Vec<f64> = (1..=amax).map(|a| a as f64).collect();
    Ok(algorithms
        .iter()
        .map(|a| data_profile(a.as_str(), &solves[a], &alphas, tau_acc))
        .collect())
}

/// Writes `<stem>_<label>.csv` for each curve and `<stem>.svg` next to `out`.
pub fn write_profiles(curves: &[ProfileCurve], out: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    let dir = out
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let stem = out
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| format_err(out, "output needs a file name"))?;
    let mut written = Vec::new();
    for c in curves {
        let p = dir.join(format!("{stem}_{}.csv", c.label));
        c.write_csv(&p)?;
        written.push(p);
    }
    let svg = dir.join(format!("{stem}.svg"));
    let tau = curves.first().map_or(0.0, |c| c.tau_acc);
    write_svg(curves, &format!("Data profiles, τ = {tau}"), &svg)?;
    written.push(svg);
    Ok(written)
}

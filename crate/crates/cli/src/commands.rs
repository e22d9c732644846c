use std::fs;
use std::path::Path;

use qgraph::analysis::{check_bounds, nodal_domains, BoundReport, NodalReport, Verdict};
use qgraph::discrete::{discrete_spectrum, mean_value_check, spectrum_csv, DiscreteGraph, MeanValueCheck};
use qgraph::fem::{component_eigenvalues, compute_spectrum, Spectrum, SpectrumOptions, DEFAULT_EIGENVALUE_COUNT};
use qgraph::graph::GraphDoc;
use qgraph::report::{fmt12, to_rounded_json};
use qgraph::surgery::{apply_step, parse_script, PredictionCheck};
use qgraph::verify::{surgery_tolerance, verify as run_verify, VerifyOptions, NODAL_MAX_K, SURGERY_MAX_K};
use qgraph::{Error, MetricGraph};
use serde::Serialize;

use crate::output::{csv_row, emit, key_values, opt, table, Rendered};
use crate::{Exit, Failure, RunConfig};

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<MetricGraph, Failure> {
    MetricGraph::from_json(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn options(cfg: &RunConfig, default_k: usize) -> SpectrumOptions {
    let mut o = SpectrumOptions::with_k(cfg.k.unwrap_or(default_k)).extrapolated();
    o.h = cfg.h;
    o
}

fn graph_file(g: &MetricGraph) -> String {
    let mut s = g.to_json();
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ClusterDoc {
    /// One-based index of the first eigenvalue.
    first: usize,
    size: usize,
    value: f64,
}

#[derive(Serialize)]
struct SpectrumSummary {
    vertices: usize,
    edges: usize,
    total_length: f64,
    betti_number: usize,
    diameter: f64,
    doubly_connected_length: f64,
    /// Largest element length of the fine mesh.
    mesh_size: f64,
    trust_ceiling: f64,
    trusted_count: usize,
    max_residual: f64,
    eigenvalues: Vec<f64>,
    error_estimates: Vec<f64>,
    clusters: Vec<ClusterDoc>,
}

fn summarize(g: &MetricGraph, s: &Spectrum) -> Result<SpectrumSummary, Failure> {
    Ok(SpectrumSummary {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        total_length: g.total_length(),
        betti_number: g.betti_number()?,
        diameter: g.diameter()?,
        doubly_connected_length: g.doubly_connected_part().length,
        mesh_size: s.mesh_size,
        trust_ceiling: s.trust_ceiling(),
        trusted_count: s.trusted_count(),
        max_residual: s.residuals.iter().fold(0.0, |m: f64, r| m.max(*r)),
        eigenvalues: s.eigenvalues.clone(),
        error_estimates: (0..s.len()).map(|i| s.error_estimate(i)).collect(),
        clusters: s.clusters().into_iter().map(|c| ClusterDoc { first: c.first + 1, size: c.size, value: c.value }).collect(),
    })
}

pub fn spectrum(cfg: &RunConfig, path: &Path) -> Result<Exit, Failure> {
    let g = load_graph(path)?;
    g.require_connected()?;
    let s = compute_spectrum(&g, &options(cfg, DEFAULT_EIGENVALUE_COUNT))?;
    let summary = summarize(&g, &s)?;
    let cluster_size = |i: usize| summary.clusters.iter().find(|c| c.first <= i + 1 && i + 1 < c.first + c.size).map_or(1, |c| c.size);
    let rows: Vec<Vec<String>> = (0..s.len())
        .map(|i| {
            vec![(i + 1).to_string(), fmt12(s.eigenvalues[i]), fmt12(summary.error_estimates[i]), fmt12(s.residuals[i]), cluster_size(i).to_string()]
        })
        .collect();
    let mut text = key_values(&[
        ("total length", fmt12(summary.total_length)),
        ("betti number", summary.betti_number.to_string()),
        ("diameter", fmt12(summary.diameter)),
        ("doubly connected length", fmt12(summary.doubly_connected_length)),
        ("mesh size", fmt12(summary.mesh_size)),
        ("trust ceiling", fmt12(summary.trust_ceiling)),
    ]);
    text.push('\n');
    text.push_str(&table(&["k", "eigenvalue", "error_estimate", "residual", "multiplicity"], &rows));
    let json = to_rounded_json(&summary);
    let mut files = vec![("eigenvalues.csv".to_string(), s.eigenvalue_csv()), ("summary.json".into(), json.clone()), ("graph.json".into(), graph_file(&g))];
    for i in 0..s.len() {
        files.push((format!("eigenfunction_{}.csv", i + 1), s.eigenfunction_csv(i)));
    }
    emit(cfg, Rendered { json, csv: s.eigenvalue_csv(), table: text }, files)?;
    Ok(Exit::Ok)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Sharp => "sharp",
        Verdict::Violated => "VIOLATED",
        Verdict::Inapplicable => "inapplicable",
        Verdict::Informational => "informational",
    }
}

fn bound_rows(r: &BoundReport) -> Vec<Vec<String>> {
    r.entries
        .iter()
        .map(|e| {
            vec![
                e.name.clone(),
                format!("{:?}", e.kind).to_lowercase(),
                e.index.to_string(),
                opt(e.bound),
                opt(e.eigenvalue),
                opt(e.margin),
                opt(e.tolerance),
                verdict_name(e.verdict).into(),
                e.note.clone().unwrap_or_default(),
            ]
        })
        .collect()
}

pub fn bounds(cfg: &RunConfig, path: &Path) -> Result<Exit, Failure> {
    let g = load_graph(path)?;
    g.require_connected()?;
    let s = compute_spectrum(&g, &options(cfg, DEFAULT_EIGENVALUE_COUNT))?;
    let report = match check_bounds(&g, &s) {
        Ok(r) => r,
        Err(e @ Error::UnsupportedConditions(_)) => {
            return Err(Failure { exit: Exit::Vacuous, message: format!("no bound applies: {e}") });
        }
        Err(e) => return Err(e.into()),
    };
    let headers = ["bound", "kind", "k", "value", "eigenvalue", "margin", "tolerance", "verdict", "note"];
    let rows = bound_rows(&report);
    let mut csv = csv_row(&headers.map(String::from));
    rows.iter().for_each(|r| csv.push_str(&csv_row(r)));
    let mut text = key_values(&[
        ("total length", fmt12(report.total_length)),
        ("betti number", report.betti_number.to_string()),
        ("doubly connected length", fmt12(report.doubly_connected_length)),
        ("essential edges", report.essential_edges.to_string()),
        ("diameter", fmt12(report.diameter)),
    ]);
    text.push('\n');
    text.push_str(&table(&headers, &rows));
    let json = to_rounded_json(&report);
    emit(cfg, Rendered { json: json.clone(), csv, table: text }, vec![("bounds.json".into(), json)])?;
    for v in report.violations() {
        eprintln!("qg: bound {} (k = {}) violated, margin {}", v.name, v.index, opt(v.margin));
    }
    Ok(if !report.all_hold() {
        Exit::Violation
    } else if report.vacuous() {
        Exit::Vacuous
    } else {
        Exit::Ok
    })
}

#[derive(Serialize)]
struct StepReport {
    step: usize,
    label: String,
    prediction: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    graph: GraphDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigenvalues: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<PredictionCheck>,
}

#[derive(Serialize)]
struct SurgeryReport {
    checked: bool,
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    initial_eigenvalues: Option<Vec<f64>>,
    steps: Vec<StepReport>,
}

pub fn surgery(cfg: &RunConfig, path: &Path, script: &Path, check: bool) -> Result<Exit, Failure> {
    let mut g = load_graph(path)?;
    let steps = parse_script(&read(script)?).map_err(|e| Failure::input(format!("{}: {e}", script.display())))?;
    let opts = options(cfg, SURGERY_MAX_K);
    let solve = |g: &MetricGraph| component_eigenvalues(g, &opts);
    let initial = if check { Some(solve(&g)?) } else { None };
    let mut current = initial.clone();
    let mut reports = Vec::new();
    for (i, step) in steps.iter().enumerate() {
        let applied = apply_step(&g, step).map_err(|e| Failure::input(format!("script step {}: {e}", i + 1)))?;
        for a in applied {
            let mut report = StepReport {
                step: i + 1,
                label: a.label,
                prediction: a.prediction.statement.clone(),
                note: a.note,
                graph: GraphDoc::from_graph(&a.graph),
                eigenvalues: None,
                check: None,
            };
            if let Some(old) = &current {
                let new = solve(&a.graph)?;
                report.check = Some(a.prediction.check(old, &new, surgery_tolerance));
                report.eigenvalues = Some(new.clone());
                current = Some(new);
            }
            reports.push(report);
            g = a.graph;
        }
    }
    let holds = reports.iter().all(|r| r.check.as_ref().map_or(true, |c| c.holds));
    let report = SurgeryReport { checked: check, holds, initial_eigenvalues: initial, steps: reports };

    let mu2 = |e: &Option<Vec<f64>>| opt(e.as_ref().and_then(|v| v.get(1).copied()));
    let mut csv = csv_row(&["step", "label", "k", "inequality", "lower", "upper", "margin", "holds"].map(String::from));
    let mut rows = Vec::new();
    for r in &report.steps {
        let status = match &r.check {
            None => "-".to_string(),
            Some(c) if c.holds => format!("holds ({} comparisons)", c.comparisons.len()),
            Some(c) => format!("VIOLATED ({} of {})", c.comparisons.iter().filter(|x| !x.holds).count(), c.comparisons.len()),
        };
        rows.push(vec![r.step.to_string(), r.label.clone(), r.graph.edges.len().to_string(), mu2(&r.eigenvalues), r.prediction.clone(), status]);
        for c in r.check.iter().flat_map(|c| &c.comparisons) {
            csv.push_str(&csv_row(&[
                r.step.to_string(),
                r.label.clone(),
                c.k.to_string(),
                c.inequality.clone(),
                fmt12(c.lower),
                fmt12(c.upper),
                fmt12(c.margin),
                c.holds.to_string(),
            ]));
        }
    }
    let mut text = format!("initial mu_2  {}\n\n", mu2(&report.initial_eigenvalues));
    text.push_str(&table(&["step", "operation", "edges", "mu_2", "prediction", "check"], &rows));
    for r in report.steps.iter().filter(|r| r.note.is_some()) {
        text.push_str(&format!("step {} {}: {}\n", r.step, r.label, r.note.as_deref().unwrap_or_default()));
    }
    let json = to_rounded_json(&report);
    let mut files = vec![("surgery_report.json".to_string(), json.clone()), ("final_graph.json".into(), graph_file(&g))];
    for (n, r) in report.steps.iter().enumerate() {
        let step_graph = r.graph.build()?;
        files.push((format!("step_{}.json", n + 1), graph_file(&step_graph)));
    }
    emit(cfg, Rendered { json, csv, table: text }, files)?;
    if !holds {
        eprintln!("qg: a surgery prediction is violated beyond tolerance");
        return Ok(Exit::Violation);
    }
    Ok(Exit::Ok)
}

#[derive(Serialize)]
#[serde(untagged)]
enum NodalEntry {
    Counted(NodalReport),
    Ambiguous { k: usize, ambiguous: String },
}

pub fn nodal(cfg: &RunConfig, path: &Path) -> Result<Exit, Failure> {
    let g = load_graph(path)?;
    g.require_connected()?;
    let s = compute_spectrum(&g, &options(cfg, NODAL_MAX_K))?;
    let mut entries = Vec::new();
    for k in 1..=s.len() {
        entries.push(match nodal_domains(&g, &s, k) {
            Ok(r) => NodalEntry::Counted(r),
            Err(e @ Error::AmbiguousNodalDomain { .. }) => NodalEntry::Ambiguous { k, ambiguous: e.to_string() },
            Err(e) => return Err(e.into()),
        });
    }
    let headers = ["k", "eigenvalue", "nodal_domains", "lower", "upper", "simple", "vanishing_vertices", "conclusive", "bound_holds"];
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| match e {
            NodalEntry::Counted(r) => vec![
                r.k.to_string(),
                fmt12(r.eigenvalue),
                r.nodal_domains.to_string(),
                r.k.saturating_sub(r.betti_number).to_string(),
                r.k.to_string(),
                r.simple.to_string(),
                r.vanishing_vertices.iter().map(|v| v.vertex_id.as_str()).collect::<Vec<_>>().join(" "),
                r.conclusive.to_string(),
                r.bound_holds.to_string(),
            ],
            NodalEntry::Ambiguous { k, .. } => {
                let mut row = vec![k.to_string(), fmt12(s.eigenvalues[k - 1]), "ambiguous".into()];
                row.extend(std::iter::repeat("-".to_string()).take(6));
                row
            }
        })
        .collect();
    let mut csv = csv_row(&headers.map(String::from));
    rows.iter().for_each(|r| csv.push_str(&csv_row(r)));
    let failed: Vec<usize> = entries
        .iter()
        .filter_map(|e| match e {
            NodalEntry::Counted(r) if r.conclusive && !r.bound_holds => Some(r.k),
            _ => None,
        })
        .collect();
    let json = to_rounded_json(&entries);
    emit(cfg, Rendered { json: json.clone(), csv, table: table(&headers, &rows) }, vec![("nodal.json".into(), json)])?;
    if !failed.is_empty() {
        eprintln!("qg: nodal count outside [k - beta, k] for k in {failed:?}");
        return Ok(Exit::Violation);
    }
    Ok(Exit::Ok)
}

pub fn verify(cfg: &RunConfig, path: Option<&Path>, instances: usize) -> Result<Exit, Failure> {
    if instances == 0 {
        return Err(Failure { exit: Exit::Vacuous, message: "refusing a sweep with zero instances".into() });
    }
    let mut opts = VerifyOptions::new(cfg.seed, instances);
    if let Some(k) = cfg.k {
        opts.eigenvalues = k;
    }
    if let Some(p) = path {
        let g = load_graph(p)?;
        g.require_connected()?;
        if !(g.all_standard() && g.zero_potential()) {
            return Err(Error::UnsupportedConditions("the sweep needs standard conditions and zero potential".into()).into());
        }
        opts.fixed_graph = Some(g);
    }
    let report = run_verify(&opts)?;
    let rows: Vec<Vec<String>> =
        report.tally.iter().map(|(name, t)| vec![name.clone(), t.passed.to_string(), t.failed.to_string()]).collect();
    let mut text = format!("seed {}: {} of {} instances passed\n\n", report.seed, report.instances - report.failed_instances, report.instances);
    text.push_str(&table(&["property", "passed", "failed"], &rows));
    let mut csv = csv_row(&["instance", "property", "passed", "detail"].map(String::from));
    for r in &report.reports {
        for p in &r.properties {
            csv.push_str(&csv_row(&[r.index.to_string(), p.name.clone(), p.passed.to_string(), p.detail.clone()]));
        }
    }
    let json = to_rounded_json(&report);
    let mut files = vec![("verify_report.json".to_string(), json.clone())];
    for r in report.reports.iter().filter(|r| !r.passed) {
        files.push((format!("failure_{}.json", r.index), to_rounded_json(r)));
        for p in r.properties.iter().filter(|p| !p.passed) {
            eprintln!("qg: instance {} {}: {}", r.index, p.name, p.detail);
        }
    }
    emit(cfg, Rendered { json, csv, table: text }, files)?;
    Ok(if report.passed { Exit::Ok } else { Exit::Violation })
}

#[derive(Serialize)]
struct DiscreteReport<'a> {
    #[serde(flatten)]
    graph: &'a DiscreteGraph,
    spectrum: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_value: Option<MeanValueCheck>,
}

pub fn discrete(cfg: &RunConfig, path: &Path, vector: Option<&Path>) -> Result<Exit, Failure> {
    let g = load_graph(path)?;
    let dg = DiscreteGraph::from_metric(&g);
    let mean_value = match vector {
        None => None,
        Some(p) => {
            let u: Vec<f64> = serde_json::from_str(&read(p)?).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            Some(mean_value_check(&dg, &u)?)
        }
    };
    let report = DiscreteReport { graph: &dg, spectrum: discrete_spectrum(&dg), mean_value };
    let spec_csv = spectrum_csv(&report.spectrum);
    let mut text = String::from("laplacian\n");
    let rows: Vec<Vec<String>> = (0..dg.len())
        .map(|i| {
            let mut row = vec![dg.vertex_ids[i].clone()];
            row.extend((0..dg.len()).map(|j| {
                let d = if i == j { dg.degrees[i] as i64 } else { 0 };
                (d - dg.adjacency[i][j] as i64).to_string()
            }));
            row
        })
        .collect();
    let mut headers = vec![""];
    headers.extend(dg.vertex_ids.iter().map(String::as_str));
    text.push_str(&table(&headers, &rows));
    text.push_str("\nspectrum\n");
    let spec_rows: Vec<Vec<String>> = report.spectrum.iter().enumerate().map(|(i, v)| vec![(i + 1).to_string(), fmt12(*v)]).collect();
    text.push_str(&table(&["index", "eigenvalue"], &spec_rows));
    let mut disagree = false;
    if let Some(m) = &report.mean_value {
        text.push_str(&format!("\nharmonic {}  mean value property {}\n", m.harmonic, m.mean_value));
        let mrows: Vec<Vec<String>> = m
            .vertices
            .iter()
            .map(|v| vec![v.vertex_id.clone(), fmt12(v.laplacian_residual), fmt12(v.mean_value_residual), v.holds.to_string()])
            .collect();
        text.push_str(&table(&["vertex", "laplacian_residual", "mean_value_residual", "holds"], &mrows));
        disagree = m.harmonic != m.mean_value;
    }
    let json = to_rounded_json(&report);
    let files = vec![
        ("adjacency.csv".to_string(), dg.adjacency_csv()),
        ("laplacian.csv".into(), dg.laplacian_csv()),
        ("spectrum.csv".into(), spec_csv.clone()),
        ("discrete.json".into(), json.clone()),
    ];
    emit(cfg, Rendered { json, csv: spec_csv, table: text }, files)?;
    if disagree {
        eprintln!("qg: Lu = 0 and the mean value property disagree");
        return Ok(Exit::Violation);
    }
    Ok(Exit::Ok)
}

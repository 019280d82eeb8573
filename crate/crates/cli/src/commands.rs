use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use fracton::classes::class_from_nu;
use fracton::entanglement::{
    amplitudes_on_basis, enumerate_basis, measure, parse_amplitude_lines,
    state_entanglement_terms,
};
use fracton::fqhe::{
    class_occupation_table, dual_pairs_csv, farey_graph, lll_occupation, table_csv,
    OccupationRow, TransitionGraph,
};
use fracton::solver::{partition_identity_defect, solve_log_xi, SolverOptions, SolverPoint};
use fracton::{dual_class, Error, FillingFactor, FractonClass};
use serde_json::{json, Value};

use crate::grid::{num, GridSpec, Spacing};
use crate::Format;

/// Rendered command output plus the exit status it implies.
pub struct Report {
    pub body: String,
    pub exit: u8,
}

impl Report {
    fn ok(body: String) -> Self {
        Self { body, exit: 0 }
    }
}

fn json_body(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn unsupported(format: Format, command: &str) -> anyhow::Error {
    anyhow::anyhow!("format {format:?} is not supported by `{command}`")
}

#[derive(Debug, Args)]
pub struct DistributionArgs {
    /// Class dimension(s) h, e.g. `3/2` or `1.5`; repeat or comma-separate.
    #[arg(long = "h", value_delimiter = ',', required = true)]
    classes: Vec<FractonClass>,
    /// Explicit fugacity value(s) xi = exp((epsilon - mu)/kT).
    #[arg(long, value_delimiter = ',')]
    xi: Vec<f64>,
    /// Fugacity grid `min,max,count`.
    #[arg(long, conflicts_with = "xi")]
    xi_grid: Option<GridSpec>,
    /// Spacing of `--xi-grid`.
    #[arg(long, value_enum, default_value_t = Spacing::Log)]
    spacing: Spacing,
    /// Linear grid `min,max,count` over (epsilon - mu)/kT.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["xi", "xi_grid"])]
    energy_grid: Option<GridSpec>,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::BoseDivergence { .. } => "bose-divergence",
        Error::InfeasibleOccupancy { .. } => "infeasible-occupancy",
        Error::NotConverged { .. } => "not-converged",
        Error::UnsupportedClass(_) => "unsupported-class",
        Error::Divergent(_) => "divergent",
        Error::NotNormalized(_) => "not-normalized",
        Error::Parse(_) => "parse",
    }
}

/// Log-fugacities in grid order.
fn log_xi_points(args: &DistributionArgs) -> Result<Vec<f64>> {
    if let Some(grid) = args.energy_grid {
        return grid.points(Spacing::Linear);
    }
    let xis = match args.xi_grid {
        Some(grid) => grid.points(args.spacing)?,
        None if !args.xi.is_empty() => args.xi.clone(),
        None => bail!("give one of --xi, --xi-grid or --energy-grid"),
    };
    xis.iter()
        .map(|&xi| {
            if xi > 0.0 && xi.is_finite() {
                Ok(xi.ln())
            } else {
                bail!("xi must be positive and finite, got {xi}")
            }
        })
        .collect()
}

pub fn distribution(args: &DistributionArgs, format: Option<Format>) -> Result<Report> {
    let format = format.unwrap_or(Format::Csv);
    if format == Format::Dot {
        return Err(unsupported(format, "distribution"));
    }
    let points = log_xi_points(args)?;
    let with_h = args.classes.len() > 1;
    let options = SolverOptions::default();

    let mut csv = String::new();
    if with_h {
        csv.push_str("h,");
    }
    csv.push_str("xi,Y,n,theta,p,q,identity_defect\n");
    let mut rows = Vec::new();
    let mut failures = 0;

    for class in &args.classes {
        let h = class.to_f64();
        for &log_xi in &points {
            let xi = log_xi.exp();
            let prefix = if with_h { format!("{class},") } else { String::new() };
            match solve_log_xi(h, log_xi, &options) {
                Ok(pt) => {
                    let defect = partition_identity_defect(&pt);
                    let values = [xi, pt.y(), pt.occupation(), pt.theta(), pt.p(), pt.q(), defect];
                    let cells: Vec<String> = values.iter().map(|&v| num(v)).collect();
                    let _ = writeln!(csv, "{prefix}{}", cells.join(","));
                    rows.push(point_json(class, xi, &pt, defect));
                }
                Err(e) => {
                    failures += 1;
                    eprintln!("h = {class}, xi = {}: {e}", num(xi));
                    let _ = writeln!(csv, "{prefix}{},ERROR:{},,,,,", num(xi), error_kind(&e));
                    rows.push(json!({
                        "h": class.to_string(),
                        "xi": xi,
                        "error": error_kind(&e),
                        "message": e.to_string(),
                    }));
                }
            }
        }
    }
    let body = match format {
        Format::Json => json_body(&Value::Array(rows)),
        _ => csv,
    };
    Ok(Report { body, exit: if failures > 0 { 2 } else { 0 } })
}

fn point_json(class: &FractonClass, xi: f64, pt: &SolverPoint, defect: f64) -> Value {
    json!({
        "h": class.to_string(),
        "xi": xi,
        "Y": pt.y(),
        "n": pt.occupation(),
        "theta": pt.theta(),
        "p": pt.p(),
        "q": pt.q(),
        "identity_defect": defect,
    })
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Class dimension(s) h; repeat or comma-separate.
    #[arg(long = "h", value_delimiter = ',', required = true)]
    classes: Vec<FractonClass>,
    /// Linear grid `min,max,count` over p in [0, 1].
    #[arg(long, default_value = "0,1,21")]
    p_grid: GridSpec,
}

pub fn entanglement_curve(args: &CurveArgs, format: Option<Format>) -> Result<Report> {
    let format = format.unwrap_or(Format::Csv);
    if format == Format::Dot {
        return Err(unsupported(format, "entanglement-curve"));
    }
    let ps = args.p_grid.points(Spacing::Linear)?;
    if ps.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
        bail!("p grid must lie within [0, 1]");
    }
    let mut csv = String::from("p");
    for class in &args.classes {
        let _ = write!(csv, ",E[{class}]");
    }
    csv.push('\n');
    let mut rows = Vec::with_capacity(ps.len());
    for &p in &ps {
        let values = args
            .classes
            .iter()
            .map(|c| measure(c.to_f64(), p))
            .collect::<fracton::Result<Vec<f64>>>()?;
        let cells: Vec<String> = std::iter::once(p).chain(values.iter().copied()).map(num).collect();
        let _ = writeln!(csv, "{}", cells.join(","));
        let by_class: serde_json::Map<String, Value> = args
            .classes
            .iter()
            .zip(&values)
            .map(|(c, &v)| (c.to_string(), json!(v)))
            .collect();
        rows.push(json!({ "p": p, "E": by_class }));
    }
    Ok(Report::ok(match format {
        Format::Json => json_body(&Value::Array(rows)),
        _ => csv,
    }))
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Class dimension h; 1/(2 - h) must be an integer.
    #[arg(long = "h")]
    class: FractonClass,
    #[arg(long)]
    modes: usize,
    #[arg(long)]
    particles: u32,
    /// Amplitude file: one `<ket> <re> <im>` per line.
    #[arg(long)]
    amplitudes: PathBuf,
}

pub fn state(args: &StateArgs, format: Option<Format>) -> Result<Report> {
    if !matches!(format, None | Some(Format::Json)) {
        return Err(unsupported(format.unwrap(), "state"));
    }
    let text = std::fs::read_to_string(&args.amplitudes)
        .with_context(|| format!("reading {}", args.amplitudes.display()))?;
    let entries = parse_amplitude_lines(&text)
        .with_context(|| format!("in {}", args.amplitudes.display()))?;
    let basis = enumerate_basis(args.class, args.modes, args.particles)?;
    let vector = amplitudes_on_basis(&entries, &basis)
        .with_context(|| format!("in {}", args.amplitudes.display()))?;
    let terms = state_entanglement_terms(args.class.to_f64(), &vector)?;
    let per_term: Vec<Value> = basis
        .iter()
        .zip(vector.amplitudes())
        .zip(vector.probabilities())
        .zip(&terms)
        .map(|(((ket, c), prob), &bits)| {
            json!({
                "ket": ket.to_string(),
                "amplitude": [c.re, c.im],
                "probability": prob,
                "bits": bits,
            })
        })
        .collect();
    let report = json!({
        "h": args.class.to_string(),
        "modes": args.modes,
        "particles": args.particles,
        "basis_size": basis.len(),
        "total_entanglement_bits": terms.iter().sum::<f64>(),
        "per_term": per_term,
    });
    Ok(Report::ok(json_body(&report)))
}

#[derive(Debug, Args)]
pub struct FareyArgs {
    /// Largest denominator of the filling factors.
    #[arg(long)]
    max_den: u32,
    /// Band k: filling factors in (k, k + 1).
    #[arg(long, default_value_t = 0)]
    band: u32,
    /// Also write the dual-pair CSV here.
    #[arg(long)]
    dual_pairs: Option<PathBuf>,
    /// Also write the (h, nu, n) table CSV here.
    #[arg(long)]
    table: Option<PathBuf>,
}

fn graph_rows(graph: &TransitionGraph) -> Result<Vec<OccupationRow>> {
    graph
        .vertices()
        .iter()
        .zip(graph.class_labels())
        .map(|(&nu, &class)| Ok(OccupationRow { class, nu, n: lll_occupation(nu)? }))
        .collect()
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

pub fn farey(args: &FareyArgs, format: Option<Format>) -> Result<Report> {
    let graph = farey_graph(args.max_den, args.band);
    if let Some(path) = &args.dual_pairs {
        write_file(path, &dual_pairs_csv(&graph)?)?;
    }
    if let Some(path) = &args.table {
        write_file(path, &table_csv(&graph_rows(&graph)?))?;
    }
    let body = match format.unwrap_or(Format::Dot) {
        Format::Dot => graph.to_dot(),
        Format::Csv => {
            let mut out = String::from("source,target\n");
            for (a, b) in graph.edge_pairs() {
                let _ = writeln!(out, "{a},{b}");
            }
            out
        }
        Format::Json => {
            let vertices: Vec<Value> = graph
                .vertices()
                .iter()
                .zip(graph.class_labels())
                .map(|(nu, class)| json!({ "nu": nu.to_string(), "h": class.to_string() }))
                .collect();
            let edges: Vec<Value> = graph
                .edge_pairs()
                .map(|(a, b)| json!([a.to_string(), b.to_string()]))
                .collect();
            json_body(&json!({ "vertices": vertices, "edges": edges }))
        }
    };
    Ok(Report::ok(body))
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Class dimension(s) h with 1 < h < 2; repeat or comma-separate.
    #[arg(long = "h", value_delimiter = ',', required = true)]
    classes: Vec<FractonClass>,
    /// Number of bands per class.
    #[arg(long, default_value_t = 4)]
    bands: usize,
}

pub fn table(args: &TableArgs, format: Option<Format>) -> Result<Report> {
    let rows = class_occupation_table(&args.classes, args.bands)?;
    let body = match format.unwrap_or(Format::Csv) {
        Format::Csv => table_csv(&rows),
        Format::Json => json_body(&Value::Array(
            rows.iter()
                .map(|r| {
                    json!({
                        "h": r.class.to_string(),
                        "nu": r.nu.to_string(),
                        "n": r.n.to_string(),
                    })
                })
                .collect(),
        )),
        Format::Dot => return Err(unsupported(Format::Dot, "table")),
    };
    Ok(Report::ok(body))
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Filling factor(s), e.g. `2/5`; repeat or comma-separate.
    #[arg(long, value_delimiter = ',', required = true)]
    nu: Vec<FillingFactor>,
}

pub fn classify(args: &ClassifyArgs, format: Option<Format>) -> Result<Report> {
    let mut csv = String::from("nu,h,spin,dual_h,n\n");
    let mut rows = Vec::new();
    for &nu in &args.nu {
        let class = class_from_nu(nu);
        let n = lll_occupation(nu).map(|n| format!("{}/{}", n.numer(), n.denom())).ok();
        let dual = dual_class(class);
        let _ = writeln!(
            csv,
            "{nu},{class},{},{dual},{}",
            class.spin(),
            n.as_deref().unwrap_or("inf")
        );
        rows.push(json!({
            "nu": nu.to_string(),
            "h": class.to_string(),
            "spin": class.spin().to_string(),
            "dual_h": dual.to_string(),
            "n": n,
        }));
    }
    let body = match format.unwrap_or(Format::Csv) {
        Format::Csv => csv,
        Format::Json => json_body(&Value::Array(rows)),
        Format::Dot => return Err(unsupported(Format::Dot, "classify")),
    };
    Ok(Report::ok(body))
}

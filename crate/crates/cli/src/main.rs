//! `koszul`: homology tables, generators, named classes and verification
//! suites for Koszul complexes of graph edge ideals.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use koszul_edge::classes::{circle, figure_eight_witness, star};
use koszul_edge::verify::run_suite;
use koszul_edge::{
    default_box, widened_box, ChainElement, ClassDescriptor, ClassError, Field, Graph, GraphError, HomologyEngine,
    HomologyError, Multidegree, QuotientSpec, Suite, VerifyError,
};

#[derive(Parser)]
#[command(name = "koszul", version, about = "Multigraded Koszul homology of graph edge ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions of H_{i,μ} at one multidegree or over a box.
    Homology {
        #[command(flatten)]
        graph: GraphInput,
        #[command(flatten)]
        range: RangeArgs,
        /// Keep only this homological degree.
        #[arg(long)]
        degree: Option<usize>,
        /// Edges to kill, as vertex-name pairs `a-b` or edge indices, comma separated.
        #[arg(long)]
        quotient: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Minimal algebra generators found stratum by stratum over a box.
    Generators {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long = "box", default_value = "valence")]
        bound: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Dimensions of H modulo classes coming from proper subgraphs.
    Sharp {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long = "box", default_value = "valence")]
        bound: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emits a named class as a chain: `star:x=2,leaves=1,3`, `circle:n=5`, `witness:n=4,m=4`.
    Class {
        descriptor: String,
        /// Graph for star descriptors.
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, default_value = "rational")]
        field: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a verification suite: paths, cycles, trees, bridge, eight, exactness, kunneth or all.
    Verify {
        suite: String,
        /// Omit wall time so identical runs produce identical bytes.
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct GraphInput {
    /// Graph file (edge-list text or JSON).
    file: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    cycle: Option<usize>,
    #[arg(long, value_name = "N")]
    path: Option<usize>,
    #[arg(long, value_name = "N,M")]
    eight: Option<String>,
    #[arg(long, value_name = "K")]
    star: Option<usize>,
}

#[derive(Args)]
struct RangeArgs {
    /// Single multidegree `a,b,c,…`.
    #[arg(long, conflicts_with_all = ["full_mu", "bound"])]
    mu: Option<String>,
    /// Single multidegree with every exponent 1.
    #[arg(long, conflicts_with = "bound")]
    full_mu: bool,
    /// Box: `valence`, `valence+K`, or explicit exponents `a,b,c,…`.
    #[arg(long = "box")]
    bound: Option<String>,
}

#[derive(Args)]
struct CommonArgs {
    /// `rational`, `gfp` or `gfp:P`.
    #[arg(long, default_value = "rational")]
    field: String,
    #[arg(long, conflicts_with = "tsv")]
    json: bool,
    #[arg(long)]
    tsv: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Verification(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
            Failure::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<HomologyError> for Failure {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::MuLength { .. } | HomologyError::Graph(_) | HomologyError::NotInducedSubgraph(_) => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<ClassError> for Failure {
    fn from(e: ClassError) -> Self {
        match e {
            ClassError::Homology(h) => h.into(),
            ClassError::Chain(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::UnknownSuite(_) => Failure::Input(e.to_string()),
            VerifyError::Class(c) => c.into(),
            VerifyError::Homology(h) => h.into(),
            VerifyError::Graph(g) => Failure::Internal(g.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("koszul: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Homology { graph, range, degree, quotient, common } => {
            let field = parse_field(&common.field)?;
            let g = load_graph(&graph)?;
            let q = match quotient {
                Some(spec) => parse_quotient(&g, &spec)?,
                None => QuotientSpec::none(),
            };
            let engine = HomologyEngine::with_quotient(g, q, field);
            let rows = homology_rows(&engine, &range, degree)?;
            let table = Table {
                header: vec!["i", "mu", "dim"],
                rows: rows.iter().map(|r| vec![r.i.to_string(), r.mu.to_string(), r.dim.to_string()]).collect(),
            };
            emit(&common, &json!({ "graph": engine.graph().to_json(), "field": field.to_string(), "rows": rows }), &table)
        }
        Command::Generators { graph, bound, common } => {
            let field = parse_field(&common.field)?;
            let engine = HomologyEngine::new(load_graph(&graph)?, field);
            let bound = parse_box(engine.graph(), &bound)?;
            let table = engine.minimal_generator_counts(&bound)?;
            let g = engine.graph();
            let generators: Vec<_> = table
                .generators
                .iter()
                .map(|(i, mu, z)| json!({ "i": i, "mu": mu, "chain": z.to_json(), "display": z.display(g) }))
                .collect();
            let text = Table {
                header: vec!["i", "mu", "dim", "decomposable", "new"],
                rows: table
                    .rows
                    .iter()
                    .map(|r| {
                        vec![r.i.to_string(), r.mu.to_string(), r.dim.to_string(), r.decomposable.to_string(), r.new_generators.to_string()]
                    })
                    .collect(),
            };
            let report = json!({
                "graph": g.to_json(),
                "field": field.to_string(),
                "box": table.bound,
                "total_new": table.total_new(),
                "rows": table.rows,
                "generators": generators,
            });
            emit(&common, &report, &text)
        }
        Command::Sharp { graph, bound, common } => {
            let field = parse_field(&common.field)?;
            let engine = HomologyEngine::new(load_graph(&graph)?, field);
            let bound = parse_box(engine.graph(), &bound)?;
            let rows = engine.sharp_table(&bound)?;
            let text = Table {
                header: vec!["i", "mu", "dim", "improper", "sharp"],
                rows: rows
                    .iter()
                    .map(|r| vec![r.i.to_string(), r.mu.to_string(), r.dim.to_string(), r.improper.to_string(), r.sharp.to_string()])
                    .collect(),
            };
            let total: usize = rows.iter().map(|r| r.sharp).sum();
            let report = json!({ "graph": engine.graph().to_json(), "field": field.to_string(), "box": bound, "total_sharp": total, "rows": rows });
            emit(&common, &report, &text)
        }
        Command::Class { descriptor, graph, field, out } => {
            let field = parse_field(&field)?;
            let desc: ClassDescriptor = descriptor.parse()?;
            let (g, z) = match desc {
                ClassDescriptor::Star(spec) => {
                    let g = load_graph(&graph)?;
                    let z = star(&g, field, &spec)?;
                    (g, z)
                }
                ClassDescriptor::Circle(n) => {
                    let c = circle(n, field)?;
                    (c.graph, c.lifted)
                }
                ClassDescriptor::Witness(n, m) => {
                    let (sm, z) = figure_eight_witness(n, m, field)?;
                    (sm.split, z)
                }
            };
            let report = class_json(&descriptor, &g, field, &z);
            write_output(out.as_ref(), &pretty(&report))
        }
        Command::Verify { suite, no_timing, common } => {
            let field = parse_field(&common.field)?;
            let suite: Suite = suite.parse()?;
            let mut report = run_suite(suite, field)?;
            if no_timing {
                report = report.without_timing();
            }
            let text = if common.json { pretty(&report.to_json()) } else { report.to_tsv() };
            write_output(common.out.as_ref(), &text)?;
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure::Verification(format!("{} of {} checks failed", report.failed, report.checks.len())))
            }
        }
    }
}

#[derive(Serialize)]
struct HomologyRow {
    i: usize,
    mu: Multidegree,
    dim: usize,
}

fn homology_rows(engine: &HomologyEngine, range: &RangeArgs, degree: Option<usize>) -> Result<Vec<HomologyRow>, Failure> {
    let g = engine.graph();
    let keep = |i: usize| degree.is_none_or(|d| d == i);
    let single = match (&range.mu, range.full_mu) {
        (Some(s), _) => Some(s.parse::<Multidegree>().map_err(|e| Failure::Input(e.to_string()))?),
        (None, true) => Some(Multidegree::ones(g.vertex_count())),
        (None, false) => None,
    };
    let mut rows = Vec::new();
    if let Some(mu) = single {
        if mu.len() != g.vertex_count() {
            return Err(Failure::Input(format!("multidegree has {} entries, graph has {} vertices", mu.len(), g.vertex_count())));
        }
        let top = engine.max_degree(&mu).max(degree.unwrap_or(0));
        for i in (0..=top).filter(|&i| keep(i)) {
            rows.push(HomologyRow { i, mu: mu.clone(), dim: engine.dim(i, &mu)? });
        }
        return Ok(rows);
    }
    let bound = parse_box(g, range.bound.as_deref().unwrap_or("valence"))?;
    engine.precompute(&bound)?;
    for (i, mu) in engine.strata_in_box(&bound) {
        if !keep(i) {
            continue;
        }
        let dim = engine.dim(i, &mu)?;
        if dim > 0 {
            rows.push(HomologyRow { i, mu, dim });
        }
    }
    Ok(rows)
}

fn class_json(descriptor: &str, g: &Graph, field: Field, z: &ChainElement) -> serde_json::Value {
    let components: Vec<_> = z
        .homogeneous_components(g)
        .into_iter()
        .map(|(mu, c)| json!({ "mu": mu, "degree": c.hom_degree().ok() }))
        .collect();
    json!({
        "descriptor": descriptor,
        "graph": g.to_json(),
        "field": field.to_string(),
        "degree": z.hom_degree().ok(),
        "components": components,
        "chain": z.to_json(),
        "display": z.display(g),
    })
}

fn parse_field(s: &str) -> Result<Field, Failure> {
    s.parse().map_err(|e: koszul_edge::FieldError| Failure::Input(e.to_string()))
}

fn load_graph(input: &GraphInput) -> Result<Graph, Failure> {
    let chosen = [input.file.is_some(), input.cycle.is_some(), input.path.is_some(), input.eight.is_some(), input.star.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if chosen != 1 {
        return Err(Failure::Input("give exactly one of FILE, --cycle, --path, --eight, --star".into()));
    }
    if let Some(path) = &input.file {
        let src = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        return Ok(Graph::parse(&src)?);
    }
    if let Some(n) = input.cycle {
        return Ok(Graph::cycle(n)?);
    }
    if let Some(n) = input.path {
        return Ok(Graph::path(n)?);
    }
    if let Some(k) = input.star {
        return Ok(Graph::star(k)?);
    }
    let spec = input.eight.as_deref().expect("one input chosen");
    let parts: Vec<usize> = spec
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| Failure::Input(format!("bad --eight value {spec:?}"))))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [n, m] => Ok(Graph::figure_eight(*n, *m)?),
        _ => Err(Failure::Input(format!("--eight expects N,M, got {spec:?}"))),
    }
}

fn parse_box(g: &Graph, spec: &str) -> Result<Multidegree, Failure> {
    let spec = spec.trim();
    if spec == "valence" {
        return Ok(default_box(g));
    }
    if let Some(k) = spec.strip_prefix("valence+") {
        let k: u32 = k.parse().map_err(|_| Failure::Input(format!("bad box {spec:?}")))?;
        return Ok(widened_box(g, k));
    }
    let mu: Multidegree = spec.parse().map_err(|_| Failure::Input(format!("bad box {spec:?}")))?;
    if mu.len() != g.vertex_count() {
        return Err(Failure::Input(format!("box has {} entries, graph has {} vertices", mu.len(), g.vertex_count())));
    }
    Ok(mu)
}

fn parse_quotient(g: &Graph, spec: &str) -> Result<QuotientSpec, Failure> {
    let mut edges = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let e = match part.split_once('-') {
            Some((a, b)) => {
                let va = g.vertex_by_name(a).ok_or_else(|| Failure::Input(format!("unknown vertex {a:?}")))?;
                let vb = g.vertex_by_name(b).ok_or_else(|| Failure::Input(format!("unknown vertex {b:?}")))?;
                g.edge_index(va, vb).ok_or_else(|| Failure::Input(format!("no edge {part:?}")))?
            }
            None => part.parse().map_err(|_| Failure::Input(format!("bad quotient edge {part:?}")))?,
        };
        edges.push(e);
    }
    Ok(QuotientSpec::new(g, edges)?)
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn render(&self) -> String {
        let mut out = self.header.join("\t");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join("\t"));
            out.push('\n');
        }
        out
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn emit(common: &CommonArgs, report: &serde_json::Value, table: &Table) -> Result<(), Failure> {
    let text = if common.json { pretty(report) } else { table.render() };
    write_output(common.out.as_ref(), &text)
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

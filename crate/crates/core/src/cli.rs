//! Command-line interface.
//!
//! Every subcommand reads its inputs from files, writes its main product to
//! a file and reports on stdout as tab-separated text. Exit codes: 0 success,
//! 1 usage error, 2 data error, 3 verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construction::{contract_all, read_ch, write_ch, ChTopology};
use crate::customization::{
    partial_update, perfect_witness_search, read_metric, write_metric, write_search_graphs, ArcMap, Customizer, Metric,
    MetricState, WeightUpdate, WitnessVariant,
};
use crate::error::Error;
use crate::graph_io::{
    content_hash, largest_scc, parse_dimacs_co, parse_dimacs_gr, read_binary_graph, to_undirected, write_binary_graph,
    write_dimacs_co, write_dimacs_gr, Coordinates, InputGraph,
};
use crate::ordering::{
    greedy_order, nested_dissection_order, read_order, treewidth_upper_bound, write_order, BfsBisector, Bisector,
    InertialBisector, DEFAULT_BALANCE, DEFAULT_RECURSION_FLOOR, DEFAULT_WITNESS_HOP_LIMIT,
};
use crate::query::{run_query, unpack_path, Algorithm, Dijkstra, QueryContext, QueryStats};
use crate::triangles::{default_threshold, threshold_for_memory, TriangleIndex, TriangleKind};
use crate::{Weight, INF};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cch", version, about = "Customizable contraction hierarchies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Restrict a graph to its largest strongly connected component.
    Scc(SccArgs),
    /// Compute a contraction order.
    Order(OrderArgs),
    /// Build the hierarchy for a graph and an order.
    Contract(ContractArgs),
    /// Compute a metric on the hierarchy.
    Customize(CustomizeArgs),
    /// Answer shortest-path queries.
    Query(QueryArgs),
    /// Compare every query algorithm with Dijkstra on random pairs.
    Verify(VerifyArgs),
    /// Time every query algorithm on random pairs.
    Bench(BenchArgs),
}

#[derive(clap::Args, Debug)]
struct SccArgs {
    /// DIMACS .gr or binary graph
    graph: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Coordinates to restrict alongside the graph
    #[arg(long)]
    coords: Option<PathBuf>,
    #[arg(long, requires = "coords")]
    coords_output: Option<PathBuf>,
    /// Write the binary graph format instead of DIMACS
    #[arg(long)]
    binary: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BisectorChoice {
    Inertial,
    Bfs,
}

#[derive(clap::Args, Debug)]
struct OrderArgs {
    graph: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// DIMACS .co coordinates, needed by the inertial bisector
    #[arg(long)]
    coords: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = BisectorChoice::Inertial)]
    bisector: BisectorChoice,
    #[arg(long, default_value_t = DEFAULT_BALANCE)]
    balance: f64,
    #[arg(long, default_value_t = DEFAULT_RECURSION_FLOOR)]
    recursion_floor: usize,
    /// Metric-dependent greedy order instead of nested dissection
    #[arg(long)]
    greedy: bool,
    #[arg(long, default_value_t = DEFAULT_WITNESS_HOP_LIMIT)]
    witness_hop_limit: usize,
}

#[derive(clap::Args, Debug)]
struct ContractArgs {
    graph: PathBuf,
    #[arg(long)]
    order: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WitnessChoice {
    Off,
    Unique,
    General,
}

#[derive(clap::Args, Debug)]
struct CustomizeArgs {
    graph: PathBuf,
    #[arg(long)]
    ch: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Weight file with one weight per input arc; repeat for several lanes
    #[arg(long = "metric")]
    metrics: Vec<PathBuf>,
    /// Start from this customized metric instead of customizing anew
    #[arg(long)]
    base: Option<PathBuf>,
    /// Update batches, lines `arc-id new-weight`, batches separated by blank lines
    #[arg(long)]
    updates: Option<PathBuf>,
    #[arg(long)]
    perfect: bool,
    /// Prune arcs after perfect customization (implies --perfect)
    #[arg(long, value_enum, default_value_t = WitnessChoice::Off)]
    witness: WitnessChoice,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Lanes relaxed per triangle enumeration (default: all)
    #[arg(long)]
    batch_width: Option<usize>,
    /// Index triangles of arcs below this level (0 disables the index)
    #[arg(long, conflicts_with = "triangle_mb")]
    triangle_level: Option<u32>,
    /// Pick the triangle level threshold from a memory budget in MiB
    #[arg(long)]
    triangle_mb: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgorithmChoice {
    Basic,
    Stalling,
    Etree,
}

impl From<AlgorithmChoice> for Algorithm {
    fn from(a: AlgorithmChoice) -> Self {
        match a {
            AlgorithmChoice::Basic => Algorithm::Basic,
            AlgorithmChoice::Stalling => Algorithm::Stalling,
            AlgorithmChoice::Etree => Algorithm::EliminationTree,
        }
    }
}

#[derive(clap::Args, Debug)]
struct LoadArgs {
    graph: PathBuf,
    #[arg(long)]
    ch: PathBuf,
    #[arg(long)]
    metric: PathBuf,
    /// Lane of a multi-lane metric
    #[arg(long, default_value_t = 0)]
    lane: usize,
}

#[derive(clap::Args, Debug)]
struct QueryArgs {
    #[command(flatten)]
    load: LoadArgs,
    #[arg(long, value_enum, default_value_t = AlgorithmChoice::Etree)]
    algorithm: AlgorithmChoice,
    /// File of `source target` lines (0-based vertex ids)
    #[arg(long, conflicts_with = "random")]
    pairs: Option<PathBuf>,
    /// Number of uniformly random pairs
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Append the input-graph vertex path
    #[arg(long)]
    unpack: bool,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    load: LoadArgs,
    #[arg(long, default_value_t = 1000)]
    pairs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(clap::Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    load: LoadArgs,
    #[arg(long, default_value_t = 1000)]
    queries: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: EXIT_DATA, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

/// Entry point for the binary.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (stdout, stderr) = (std::io::stdout(), std::io::stderr());
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI with explicit output streams and returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Scc(a) => cmd_scc(a, out),
        Command::Order(a) => cmd_order(a, out),
        Command::Contract(a) => cmd_contract(a, out),
        Command::Customize(a) => cmd_customize(a, out, err),
        Command::Query(a) => cmd_query(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    };
    match result.and_then(|()| out.flush().map_err(Failure::from)) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| Failure { code: EXIT_DATA, message: format!("{}: {e}", path.display()) })
}

fn create_file(path: &Path) -> CliResult<BufWriter<fs::File>> {
    let file =
        fs::File::create(path).map_err(|e| Failure { code: EXIT_DATA, message: format!("{}: {e}", path.display()) })?;
    Ok(BufWriter::new(file))
}

fn with_path<T>(path: &Path, r: crate::Result<T>) -> CliResult<T> {
    r.map_err(|e| Failure { code: EXIT_DATA, message: format!("{}: {e}", path.display()) })
}

/// Graph and the hash of its file bytes.
fn load_graph(path: &Path) -> CliResult<(InputGraph, u64)> {
    let bytes = read_file(path)?;
    let hash = content_hash(&bytes);
    let graph = if bytes.starts_with(b"CCHG") { read_binary_graph(&bytes[..]) } else { parse_dimacs_gr(&bytes[..]) };
    Ok((with_path(path, graph)?, hash))
}

fn load_coords(path: &Path, n: usize) -> CliResult<Coordinates> {
    let bytes = read_file(path)?;
    with_path(path, parse_dimacs_co(&bytes[..], n))
}

/// Hierarchy checked against the graph it was built from, and its own hash.
fn load_ch(path: &Path, graph_hash: u64) -> CliResult<(ChTopology, u64)> {
    let bytes = read_file(path)?;
    let (ch, stamp) = with_path(path, read_ch(&bytes[..]))?;
    if stamp != graph_hash {
        return Err(Error::Stale(format!("{} was built from a different graph", path.display())).into());
    }
    Ok((ch, content_hash(&bytes)))
}

fn load_metric(path: &Path, graph_hash: u64, ch_hash: u64) -> CliResult<crate::customization::StoredMetric> {
    let bytes = read_file(path)?;
    let stored = with_path(path, read_metric(&bytes[..]))?;
    if stored.graph_hash != graph_hash || stored.ch_hash != ch_hash {
        return Err(Error::Stale(format!("{} belongs to a different graph or hierarchy", path.display())).into());
    }
    Ok(stored)
}

fn cmd_scc(a: SccArgs, out: &mut dyn Write) -> CliResult {
    let (graph, _) = load_graph(&a.graph)?;
    let (scc, map) = largest_scc(&graph);
    let mut file = create_file(&a.output)?;
    if a.binary {
        write_binary_graph(&scc, &mut file)?;
    } else {
        write_dimacs_gr(&scc, &mut file)?;
    }
    file.flush()?;
    if let Some(path) = &a.coords {
        let coords = load_coords(path, graph.vertex_count())?;
        let kept: Vec<usize> = (0..map.len()).filter(|&v| map[v] != crate::INVALID).collect();
        let restricted =
            Coordinates::new(kept.iter().map(|&v| coords.x[v]).collect(), kept.iter().map(|&v| coords.y[v]).collect())?;
        if let Some(target) = &a.coords_output {
            let mut file = create_file(target)?;
            write_dimacs_co(&restricted, &mut file)?;
            file.flush()?;
        }
    }
    writeln!(out, "vertices\t{}\t{}", graph.vertex_count(), scc.vertex_count())?;
    writeln!(out, "arcs\t{}\t{}", graph.arc_count(), scc.arc_count())?;
    Ok(())
}

fn cmd_order(a: OrderArgs, out: &mut dyn Write) -> CliResult {
    if !(a.balance > 0.0 && a.balance < 1.0) {
        return Err(usage("--balance must lie in (0, 1)"));
    }
    let (graph, _) = load_graph(&a.graph)?;
    let n = graph.vertex_count();
    let start = Instant::now();
    let order = if a.greedy {
        greedy_order(&graph, a.witness_hop_limit)
    } else {
        let undirected = to_undirected(&graph);
        let coords = a.coords.as_deref().map(|p| load_coords(p, n)).transpose()?;
        let bisector: Box<dyn Bisector + '_> = match a.bisector {
            BisectorChoice::Inertial => {
                let coords = coords.as_ref().ok_or(Error::MissingCoordinates)?;
                Box::new(InertialBisector::new(coords, a.balance))
            }
            BisectorChoice::Bfs => Box::new(BfsBisector::new(a.balance)),
        };
        nested_dissection_order(&undirected, bisector.as_ref(), a.recursion_floor.max(1))?
    };
    let mut file = create_file(&a.output)?;
    write_order(&order, &mut file)?;
    file.flush()?;
    writeln!(out, "vertices\t{n}")?;
    writeln!(out, "seconds\t{:.3}", start.elapsed().as_secs_f64())?;
    Ok(())
}

fn cmd_contract(a: ContractArgs, out: &mut dyn Write) -> CliResult {
    let (graph, hash) = load_graph(&a.graph)?;
    let order_bytes = read_file(&a.order)?;
    let order = with_path(&a.order, read_order(&order_bytes[..], Some(graph.vertex_count())))?;
    let start = Instant::now();
    let ch = contract_all(&to_undirected(&graph), &order)?;
    let seconds = start.elapsed().as_secs_f64();
    let mut file = create_file(&a.output)?;
    write_ch(&ch, hash, &mut file)?;
    file.flush()?;
    let tree = ch.elimination_tree();
    writeln!(out, "vertices\t{}", ch.vertex_count())?;
    writeln!(out, "arcs\t{}", ch.arc_count())?;
    writeln!(out, "shortcuts\t{}", ch.shortcut_count())?;
    writeln!(out, "max-elimination-height\t{}", tree.height())?;
    writeln!(out, "mean-elimination-depth\t{:.3}", tree.mean_depth())?;
    writeln!(out, "treewidth-bound\t{}", treewidth_upper_bound(&ch))?;
    writeln!(out, "levels\t{}", ch.level_count())?;
    writeln!(out, "seconds\t{seconds:.3}")?;
    Ok(())
}

fn parse_weight(token: &str) -> Option<Weight> {
    if token.eq_ignore_ascii_case("inf") {
        return Some(INF);
    }
    token.parse().ok().filter(|w| (1..=INF).contains(w))
}

fn read_weights(path: &Path, count: usize) -> CliResult<Vec<Weight>> {
    let text = String::from_utf8_lossy(&read_file(path)?).into_owned();
    let mut weights = Vec::with_capacity(count);
    for (i, token) in text.split_whitespace().enumerate() {
        let w = parse_weight(token).ok_or_else(|| Failure {
            code: EXIT_DATA,
            message: format!("{}: bad weight '{token}' at position {}", path.display(), i + 1),
        })?;
        weights.push(w);
    }
    if weights.len() != count {
        return Err(Failure {
            code: EXIT_DATA,
            message: format!("{}: {} weights for {count} input arcs", path.display(), weights.len()),
        });
    }
    Ok(weights)
}

fn read_updates(path: &Path, arc_count: usize) -> CliResult<Vec<Vec<WeightUpdate>>> {
    let text = String::from_utf8_lossy(&read_file(path)?).into_owned();
    let mut batches = vec![Vec::new()];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if !batches.last().is_some_and(Vec::is_empty) {
                batches.push(Vec::new());
            }
            continue;
        }
        let bad =
            || Failure { code: EXIT_DATA, message: format!("{}:{}: expected 'arc-id weight'", path.display(), i + 1) };
        let mut fields = line.split_whitespace();
        let arc: usize = fields.next().and_then(|f| f.parse().ok()).ok_or_else(bad)?;
        let weight = fields.next().and_then(parse_weight).ok_or_else(bad)?;
        if fields.next().is_some() {
            return Err(bad());
        }
        if arc >= arc_count {
            return Err(Error::ArcOutOfRange(arc).into());
        }
        batches.last_mut().expect("never empty").push(WeightUpdate { input_arc: arc, weight });
    }
    batches.retain(|b| !b.is_empty());
    Ok(batches)
}

fn phase(err: &mut dyn Write, name: &str, start: Instant) -> CliResult {
    writeln!(err, "time\t{name}\t{:.3} ms", start.elapsed().as_secs_f64() * 1e3)?;
    Ok(())
}

fn cmd_customize(a: CustomizeArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    if a.threads == 0 {
        return Err(usage("--threads must be at least 1"));
    }
    if a.batch_width == Some(0) {
        return Err(usage("--batch-width must be at least 1"));
    }
    if a.base.is_some() && !a.metrics.is_empty() {
        return Err(usage("--base and --metric are mutually exclusive"));
    }
    let perfect = a.perfect || a.witness != WitnessChoice::Off;

    let (graph, graph_hash) = load_graph(&a.graph)?;
    let (ch, ch_hash) = load_ch(&a.ch, graph_hash)?;
    let map = ArcMap::new(&graph, &ch)?;

    let start = Instant::now();
    let mut kinds = vec![TriangleKind::Lower];
    if perfect || a.updates.is_some() {
        kinds.extend([TriangleKind::Intermediate, TriangleKind::Upper]);
    }
    let threshold = match (a.triangle_level, a.triangle_mb) {
        (Some(level), _) => level,
        (None, Some(mb)) => threshold_for_memory(&ch, &kinds, (mb * 1024.0 * 1024.0) as usize),
        (None, None) => default_threshold(&ch),
    };
    let index = (threshold > 0).then(|| TriangleIndex::build(&ch, &kinds, threshold));
    if let Some(index) = &index {
        phase(err, "triangle-index", start)?;
        writeln!(out, "triangle-level\t{}", index.threshold())?;
        writeln!(out, "triangle-index-bytes\t{}", index.memory_bytes())?;
    }

    let mut customizer = Customizer::new(&ch)?.with_threads(a.threads)?;
    if let Some(index) = &index {
        customizer = customizer.with_index(index);
    }
    if let Some(width) = a.batch_width {
        customizer = customizer.with_batch_width(width);
    }

    let mut metric = match &a.base {
        Some(path) => {
            let stored = load_metric(path, graph_hash, ch_hash)?;
            if stored.metric.state() != MetricState::Customized {
                return Err(Failure {
                    code: EXIT_DATA,
                    message: format!("{}: base metric must be customized", path.display()),
                });
            }
            stored.metric
        }
        None => {
            let lanes = if a.metrics.is_empty() {
                vec![graph.weights().to_vec()]
            } else {
                a.metrics.iter().map(|p| read_weights(p, graph.arc_count())).collect::<CliResult<_>>()?
            };
            let lanes: Vec<&[Weight]> = lanes.iter().map(Vec::as_slice).collect();
            let mut metric = Metric::respecting(&ch, &map, &lanes)?;
            let start = Instant::now();
            customizer.basic(&mut metric)?;
            phase(err, "basic", start)?;
            metric
        }
    };

    if let Some(path) = &a.updates {
        if metric.lanes() != 1 {
            return Err(usage("--updates needs a single-lane metric"));
        }
        let batches = read_updates(path, graph.arc_count())?;
        let start = Instant::now();
        let (mut processed, mut changed) = (0, 0);
        for batch in &batches {
            let stats = partial_update(&ch, &map, &mut metric, batch, index.as_ref())?;
            processed += stats.processed;
            changed += stats.changed;
        }
        phase(err, "updates", start)?;
        writeln!(out, "update-batches\t{}", batches.len())?;
        writeln!(out, "update-processed\t{processed}")?;
        writeln!(out, "update-changed\t{changed}")?;
    }

    let mut file = create_file(&a.output)?;
    if perfect {
        let customized = metric.clone();
        let start = Instant::now();
        customizer.perfect(&mut metric)?;
        phase(err, "perfect", start)?;
        let variant = match a.witness {
            WitnessChoice::Off => None,
            WitnessChoice::Unique => Some(WitnessVariant::Unique),
            WitnessChoice::General => Some(WitnessVariant::General),
        };
        if let Some(variant) = variant {
            if metric.lanes() != 1 {
                return Err(usage("--witness needs a single-lane metric"));
            }
            let start = Instant::now();
            let search = perfect_witness_search(&ch, &customized, &metric, variant, index.as_ref())?;
            phase(err, "witness", start)?;
            let (up, down) = search.retained();
            writeln!(out, "retained-up\t{up}")?;
            writeln!(out, "retained-down\t{down}")?;
            write_search_graphs(&search, graph_hash, ch_hash, &mut file)?;
        } else {
            write_metric(&metric, graph_hash, ch_hash, &mut file)?;
        }
    } else {
        write_metric(&metric, graph_hash, ch_hash, &mut file)?;
    }
    file.flush()?;
    let state = match metric.state() {
        MetricState::Respecting => "respecting",
        MetricState::Customized => "customized",
        MetricState::Perfect => "perfect",
    };
    writeln!(out, "state\t{state}")?;
    writeln!(out, "lanes\t{}", metric.lanes())?;
    writeln!(out, "arcs\t{}", metric.arc_count())?;
    Ok(())
}

/// Everything a query needs, loaded and cross-checked.
struct Loaded {
    graph: InputGraph,
    ch: ChTopology,
    map: ArcMap,
    metric: Metric,
    search: Option<crate::customization::SearchGraphs>,
}

impl Loaded {
    fn new(a: &LoadArgs) -> CliResult<Self> {
        let (graph, graph_hash) = load_graph(&a.graph)?;
        let (ch, ch_hash) = load_ch(&a.ch, graph_hash)?;
        let stored = load_metric(&a.metric, graph_hash, ch_hash)?;
        let map = ArcMap::new(&graph, &ch)?;
        if stored.metric.arc_count() != ch.arc_count() {
            return Err(Error::SizeMismatch("metric and hierarchy disagree on the arc count".into()).into());
        }
        if stored.metric.state() == MetricState::Respecting {
            return Err(Failure { code: EXIT_DATA, message: "metric is not customized".into() });
        }
        let metric = stored.metric.lane(a.lane)?;
        let search = stored.search;
        Ok(Self { graph, ch, map, metric, search })
    }

    /// The input graph carrying the metric's own input weights.
    fn oracle_graph(&self) -> CliResult<InputGraph> {
        let mut graph = self.graph.clone();
        for input in 0..graph.arc_count() {
            let (arc, dir) = self.map.ch_arc(input);
            graph.set_weight(input, self.metric.input(arc, 0, dir))?;
        }
        Ok(graph)
    }

    fn query(
        &self,
        ctx: &mut QueryContext,
        algorithm: Algorithm,
        s: u32,
        t: u32,
    ) -> crate::Result<crate::query::QueryResult> {
        match &self.search {
            Some(search) => run_query(algorithm, ctx, &self.ch, search, s, t),
            None => run_query(algorithm, ctx, &self.ch, &self.metric, s, t),
        }
    }
}

fn random_pairs(n: usize, count: usize, seed: u64) -> CliResult<Vec<(u32, u32)>> {
    if n == 0 && count > 0 {
        return Err(Failure { code: EXIT_DATA, message: "graph has no vertices".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32))).collect())
}

fn read_pairs(path: &Path) -> CliResult<Vec<(u32, u32)>> {
    let text = String::from_utf8_lossy(&read_file(path)?).into_owned();
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad =
            || Failure { code: EXIT_DATA, message: format!("{}:{}: expected 'source target'", path.display(), i + 1) };
        let mut fields = line.split_whitespace().map(|f| f.parse::<u32>());
        match (fields.next(), fields.next(), fields.next()) {
            (Some(Ok(s)), Some(Ok(t)), None) => pairs.push((s, t)),
            _ => return Err(bad()),
        }
    }
    Ok(pairs)
}

fn cmd_query(a: QueryArgs, out: &mut dyn Write) -> CliResult {
    let loaded = Loaded::new(&a.load)?;
    let n = loaded.ch.vertex_count();
    let pairs = match (&a.pairs, a.random) {
        (Some(path), _) => read_pairs(path)?,
        (None, Some(count)) => random_pairs(n, count, a.seed)?,
        (None, None) => return Err(usage("give --pairs or --random")),
    };
    let algorithm: Algorithm = a.algorithm.into();
    let mut ctx = QueryContext::new(n);
    let unpack_metric = loaded.search.as_ref().map_or(&loaded.metric, |s| s.metric());
    write!(out, "source\ttarget\tdistance\tvertices\tarcs\tmicros")?;
    if a.unpack {
        write!(out, "\tpath")?;
    }
    writeln!(out)?;
    for (s, t) in pairs {
        let start = Instant::now();
        let result = loaded.query(&mut ctx, algorithm, s, t)?;
        let path = if a.unpack && result.distance < INF {
            Some(unpack_path(&loaded.ch, unpack_metric, &loaded.map, &result.up_down_path)?)
        } else {
            None
        };
        let micros = start.elapsed().as_secs_f64() * 1e6;
        let distance = if result.distance < INF { result.distance.to_string() } else { "unreachable".into() };
        write!(out, "{s}\t{t}\t{distance}\t{}\t{}\t{micros:.1}", result.stats.settled, result.stats.relaxed)?;
        if a.unpack {
            let text: Vec<String> = path.map(|p| p.vertices.iter().map(u32::to_string).collect()).unwrap_or_default();
            write!(out, "\t{}", text.join(","))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

const ALGORITHMS: [(&str, Algorithm); 3] =
    [("basic", Algorithm::Basic), ("stalling", Algorithm::Stalling), ("etree", Algorithm::EliminationTree)];

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> CliResult {
    let loaded = Loaded::new(&a.load)?;
    let oracle = loaded.oracle_graph()?;
    let n = loaded.ch.vertex_count();
    let pairs = random_pairs(n, a.pairs, a.seed)?;
    let mut ctx = QueryContext::new(n);
    let mut dijkstra = Dijkstra::new(n);
    let unpack_metric = loaded.search.as_ref().map_or(&loaded.metric, |s| s.metric());
    let mut mismatches = 0usize;
    for &(s, t) in &pairs {
        let expected = dijkstra.run(&oracle, s, t)?.0;
        for (name, algorithm) in ALGORITHMS {
            let result = loaded.query(&mut ctx, algorithm, s, t)?;
            let mut problem = None;
            if result.distance != expected {
                problem = Some(format!("distance {} expected {expected}", result.distance));
            } else if expected < INF {
                match unpack_path(&loaded.ch, unpack_metric, &loaded.map, &result.up_down_path) {
                    Ok(path) => {
                        if let Err(why) = check_path(&oracle, &path, s, t, expected) {
                            problem = Some(why);
                        }
                    }
                    Err(e) => problem = Some(format!("unpack failed: {e}")),
                }
            }
            if let Some(problem) = problem {
                mismatches += 1;
                if mismatches <= 10 {
                    writeln!(out, "mismatch\t{name}\t{s}\t{t}\t{problem}")?;
                }
            }
        }
    }
    writeln!(out, "pairs\t{}", pairs.len())?;
    writeln!(out, "mismatches\t{mismatches}")?;
    if mismatches > 0 {
        return Err(Failure { code: EXIT_VERIFY, message: format!("{mismatches} mismatching queries") });
    }
    Ok(())
}

fn check_path(
    graph: &InputGraph,
    path: &crate::query::PathResult,
    s: u32,
    t: u32,
    expected: Weight,
) -> Result<(), String> {
    if path.vertices.first() != Some(&s) || path.vertices.last() != Some(&t) {
        return Err("path has wrong endpoints".into());
    }
    if path.arcs.len() + 1 != path.vertices.len() {
        return Err("path arcs and vertices disagree".into());
    }
    let mut total = 0u64;
    for (i, &arc) in path.arcs.iter().enumerate() {
        if graph.tail(arc) != path.vertices[i] || graph.head(arc) != path.vertices[i + 1] {
            return Err(format!("arc {arc} does not connect consecutive path vertices"));
        }
        total += graph.weight(arc) as u64;
    }
    if total != expected as u64 {
        return Err(format!("unpacked length {total} expected {expected}"));
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write) -> CliResult {
    let loaded = Loaded::new(&a.load)?;
    let oracle = loaded.oracle_graph()?;
    let n = loaded.ch.vertex_count();
    let pairs = random_pairs(n, a.queries, a.seed)?;
    let count = pairs.len().max(1) as f64;
    let report = |out: &mut dyn Write, name: &str, seconds: f64, stats: QueryStats| -> std::io::Result<()> {
        writeln!(
            out,
            "{name}\t{:.2}\t{:.1}\t{:.1}",
            seconds * 1e6 / count,
            stats.settled as f64 / count,
            stats.relaxed as f64 / count
        )
    };
    writeln!(out, "algorithm\tmean-us\tvertices\tarcs")?;
    let mut dijkstra = Dijkstra::new(n);
    let mut total = QueryStats::default();
    let start = Instant::now();
    for &(s, t) in &pairs {
        let stats = dijkstra.run_with_stats(&oracle, s, t)?.1;
        total.settled += stats.settled;
        total.relaxed += stats.relaxed;
    }
    report(out, "dijkstra", start.elapsed().as_secs_f64(), total)?;
    let mut ctx = QueryContext::new(n);
    for (name, algorithm) in ALGORITHMS {
        let mut total = QueryStats::default();
        let start = Instant::now();
        for &(s, t) in &pairs {
            let stats = loaded.query(&mut ctx, algorithm, s, t)?.stats;
            total.settled += stats.settled;
            total.relaxed += stats.relaxed;
        }
        report(out, name, start.elapsed().as_secs_f64(), total)?;
    }
    Ok(())
}

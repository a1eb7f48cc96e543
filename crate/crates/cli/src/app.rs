//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use ncl_core::compose::{c2c_reachable, c2e_reachable};
use ncl_core::drawing::{crossings, vertex_collisions};
use ncl_core::format::{self, Document};
use ncl_core::fpt::{kernelize_c2c, kernelize_c2e, solve_bounded_c2c_subsetdp, KernelResult};
use ncl_core::gadgets::{shipped_gadgets, verify_behavior};
use ncl_core::graph::first_violation;
use ncl_core::hword::{parse_instance, HGoal};
use ncl_core::reduce::{
    bandwidth_exact, clique_to_c2c, clique_to_c2e, cutwidth_exact, hword_to_ncl, layout_from_bags,
    parse_clique, parse_partition, partition_to_bounded_ncl, partition_to_cgs, HWordOptions,
    Layout, PartitionGoal, ReductionOutput, BAG_LAYOUT_LIMIT,
};
use ncl_core::search::{self, DEFAULT_MAX_STATES};
use ncl_core::treewidth::{
    dp_bounded_ncl, dp_cgs_degree, dp_cgs_unary, heuristic_decomposition, nice_decomposition,
    parse_decomposition, print_decomposition, print_nice, to_nice, validate_decomposition,
    validate_nice, BoundedVariant, DpLimits, NiceTreeDecomposition, ParsedDecomposition,
};
use ncl_core::verify::{run_suite, SUITES};
use ncl_core::{is_legal, validate_restricted, Configuration, EdgeId, NclError, SolverLimits};

use crate::dot::export_document;

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

/// Default cap on the solution length `l` for parameterized commands.
pub const DEFAULT_LIMIT_L: usize = 24;

#[derive(Debug, Parser)]
#[command(
    name = "ncl",
    version,
    about = "Nondeterministic constraint logic solvers, reductions and checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Cap on configurations visited by exhaustive searches.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STATES)]
    pub max_states: u64,
    /// Only consider move sequences of at most this length.
    #[arg(long, global = true)]
    pub max_len: Option<usize>,
    /// Length parameter for kernelization and the subset DP.
    #[arg(long, global = true, default_value_t = DEFAULT_LIMIT_L)]
    pub limit_l: usize,
    /// Seed offset for randomized verification suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format for graph-valued results.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Dot,
}

/// Which configuration of a document to start from and where to go.
#[derive(Debug, Args)]
pub struct Query {
    /// Graph document (`-` for standard input).
    pub file: PathBuf,
    /// Name of the start configuration.
    #[arg(long, default_value = "start")]
    pub start: String,
    /// Name of the goal configuration (C2C).
    #[arg(long, default_value = "goal")]
    pub goal: String,
    /// Target edge id (C2E); defaults to the document's `target` record.
    #[arg(long)]
    pub target: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CgsMethod {
    Brute,
    Degree,
    Unary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReachMethod {
    /// Breadth-first search; prints a shortest sequence.
    Bfs,
    /// Region-automaton composition along a vertex order; decision only.
    Compose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundedMethod {
    /// Ordering DP over a heuristic (or supplied) tree decomposition.
    Dp,
    /// Breadth-first search with each edge reversible once.
    Search,
    /// Subset DP over the differing edges (C2C only).
    Subset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Partition,
    Clique,
    Hword,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Question {
    Cgs,
    C2e,
    C2c,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    Bandwidth,
    Cutwidth,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that every configuration of a document is legal.
    Check {
        file: PathBuf,
        /// Also require restricted logic (degree 3, weights 1/2, AND/OR only)
        /// and, when the document has a drawing, zero crossings.
        #[arg(long)]
        restricted: bool,
    },
    /// Constraint graph satisfiability.
    SolveCgs {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = CgsMethod::Brute)]
        method: CgsMethod,
    },
    /// Reverse a target edge (configuration to edge).
    SolveC2e {
        #[command(flatten)]
        query: Query,
        /// Each edge may reverse at most once.
        #[arg(long)]
        bounded: bool,
        #[arg(long, value_enum, default_value_t = ReachMethod::Bfs)]
        method: ReachMethod,
    },
    /// Reach a goal configuration (configuration to configuration).
    SolveC2c {
        #[command(flatten)]
        query: Query,
        #[arg(long)]
        bounded: bool,
        #[arg(long, value_enum, default_value_t = ReachMethod::Bfs)]
        method: ReachMethod,
    },
    /// Bounded NCL: C2C when the document has a goal, C2E otherwise.
    SolveBounded {
        #[command(flatten)]
        query: Query,
        #[arg(long, value_enum, default_value_t = BoundedMethod::Dp)]
        method: BoundedMethod,
        /// Tree decomposition file for the DP (default: heuristic).
        #[arg(long)]
        decomposition: Option<PathBuf>,
    },
    /// Compile an instance into a constraint graph document.
    Reduce {
        #[arg(value_enum)]
        source: Source,
        file: PathBuf,
        /// Question to compile for (partition: cgs, c2e, c2c; clique: c2e,
        /// c2c). H-word instances decide this by `goal` or `target`.
        #[arg(long, value_enum)]
        question: Option<Question>,
        /// H-word only: realize every vertex as an AND or OR vertex.
        #[arg(long)]
        pure: bool,
        /// H-word only: replace wire crossings by crossover gadgets.
        #[arg(long)]
        planarize: bool,
    },
    /// Heuristic tree decomposition, or validation of a given one.
    Decompose {
        file: PathBuf,
        /// Emit a nice decomposition.
        #[arg(long)]
        nice: bool,
        /// Validate this decomposition file instead of computing one.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Distance kernel for the length parameter `--limit-l`.
    Kernelize {
        #[command(flatten)]
        query: Query,
    },
    /// Check shipped gadgets against their behavior specs.
    GadgetVerify {
        /// Only this gadget.
        name: Option<String>,
        /// Print the gadget document (or DOT) instead of the report.
        #[arg(long)]
        show: bool,
    },
    /// Exact bandwidth or cutwidth, or the layout induced by drawing layers.
    Layout {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Measure::Bandwidth)]
        measure: Measure,
        /// Bandwidth of the layer order instead of the optimum.
        #[arg(long)]
        from_layers: bool,
    },
    /// Re-emit a document canonically or as DOT.
    Export { file: PathBuf },
    /// Run a verification suite (or `all`).
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
}

enum Failure {
    Lib(NclError),
    Usage(String),
}

impl From<NclError> for Failure {
    fn from(e: NclError) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = std::result::Result<i32, Failure>;

struct Ctx<'a> {
    g: &'a Global,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn limits(&self) -> SolverLimits {
        SolverLimits {
            max_states: Some(self.g.max_states),
            max_len: self.g.max_len,
        }
    }

    fn dp_limits(&self) -> DpLimits {
        DpLimits {
            max_states: self.g.max_states.min(usize::MAX as u64) as usize,
            ..DpLimits::default()
        }
    }

    fn say(&mut self, s: impl AsRef<str>) {
        let _ = self.out.write_all(s.as_ref().as_bytes());
    }

    fn note(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.err, "{}", s.as_ref());
    }

    fn emit_document(&mut self, d: &Document) {
        let text = match self.g.format {
            OutputFormat::Text => format::print(d),
            OutputFormat::Dot => export_document(d),
        };
        self.say(text);
    }
}

fn read_input(path: &Path) -> std::result::Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("standard input: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_document(path: &Path) -> std::result::Result<Document, Failure> {
    Ok(format::parse(&read_input(path)?)?)
}

fn named_config<'d>(
    d: &'d Document,
    name: &str,
) -> std::result::Result<&'d Configuration, Failure> {
    d.config(name)
        .ok_or_else(|| Failure::Usage(format!("document has no configuration named '{name}'")))
}

fn target_of(d: &Document, q: &Query) -> std::result::Result<EdgeId, Failure> {
    let t = q
        .target
        .map(EdgeId)
        .or(d.target)
        .ok_or_else(|| Failure::Usage("no target edge given".into()))?;
    d.graph.check_edge(t)?;
    Ok(t)
}

fn yes_no(answer: bool) -> i32 {
    if answer {
        EXIT_YES
    } else {
        EXIT_NO
    }
}

fn report_moves(ctx: &mut Ctx<'_>, res: Option<Vec<EdgeId>>) -> i32 {
    match res {
        Some(seq) => {
            ctx.say(format!(
                "yes\nlength {}\nmoves {}\n",
                seq.len(),
                format::print_moves(&seq)
            ));
            EXIT_YES
        }
        None => {
            ctx.say("no\n");
            EXIT_NO
        }
    }
}

fn check(ctx: &mut Ctx<'_>, file: &Path, restricted: bool) -> Outcome {
    let d = read_document(file)?;
    let mut ok = true;
    for (name, c) in &d.configs {
        match first_violation(&d.graph, c)? {
            None => ctx.say(format!("config {name} legal\n")),
            Some(v) => {
                ok = false;
                ctx.say(format!("config {name} illegal vertex {v}\n"));
            }
        }
    }
    if restricted {
        let violations = validate_restricted(&d.graph);
        for v in &violations {
            ctx.note(format!("restricted: {v}"));
        }
        ctx.say(format!("restricted-violations {}\n", violations.len()));
        ok &= violations.is_empty();
        if let Some(dr) = d
            .drawing
            .as_ref()
            .filter(|dr| dr.len() == d.graph.vertex_count())
        {
            let x = crossings(&d.graph, dr);
            let c = vertex_collisions(&d.graph, dr);
            for (a, b) in x.iter().take(10) {
                ctx.note(format!("crossing: edges {a} and {b}"));
            }
            ctx.say(format!(
                "crossings {}\nvertex-collisions {}\n",
                x.len(),
                c.len()
            ));
            ok &= x.is_empty() && c.is_empty();
        }
    }
    Ok(yes_no(ok))
}

fn solve_cgs(ctx: &mut Ctx<'_>, file: &Path, method: CgsMethod) -> Outcome {
    let d = read_document(file)?;
    let g = &d.graph;
    let res = match method {
        CgsMethod::Brute => search::solve_cgs_bruteforce(g, ctx.limits())?,
        CgsMethod::Degree => dp_cgs_degree(g, &nice_decomposition(g), ctx.dp_limits())?,
        CgsMethod::Unary => dp_cgs_unary(g, &nice_decomposition(g), ctx.dp_limits())?,
    };
    match res {
        Some(c) => {
            ctx.say("yes\n");
            ctx.say(format::print(
                &Document::from_graph(g.clone()).with_config("witness", c),
            ));
            Ok(EXIT_YES)
        }
        None => {
            ctx.say("no\n");
            Ok(EXIT_NO)
        }
    }
}

fn solve_c2e(ctx: &mut Ctx<'_>, q: &Query, bounded: bool, method: ReachMethod) -> Outcome {
    let d = read_document(&q.file)?;
    let s = named_config(&d, &q.start)?;
    let t = target_of(&d, q)?;
    let g = &d.graph;
    match (method, bounded) {
        (ReachMethod::Compose, false) => {
            let ans = c2e_reachable(g, s, t)?;
            ctx.say(if ans { "yes\n" } else { "no\n" });
            Ok(yes_no(ans))
        }
        (ReachMethod::Compose, true) => Err(Failure::Usage(
            "--method compose answers unbounded questions only".into(),
        )),
        (ReachMethod::Bfs, false) => {
            Ok(report_moves(ctx, search::solve_c2e(g, s, t, ctx.limits())?))
        }
        (ReachMethod::Bfs, true) => Ok(report_moves(
            ctx,
            search::solve_bounded_c2e(g, s, t, ctx.limits())?,
        )),
    }
}

fn solve_c2c(ctx: &mut Ctx<'_>, q: &Query, bounded: bool, method: ReachMethod) -> Outcome {
    let d = read_document(&q.file)?;
    let s = named_config(&d, &q.start)?;
    let goal = named_config(&d, &q.goal)?;
    let g = &d.graph;
    match (method, bounded) {
        (ReachMethod::Compose, false) => {
            let ans = c2c_reachable(g, s, goal)?;
            ctx.say(if ans { "yes\n" } else { "no\n" });
            Ok(yes_no(ans))
        }
        (ReachMethod::Compose, true) => Err(Failure::Usage(
            "--method compose answers unbounded questions only".into(),
        )),
        (ReachMethod::Bfs, false) => Ok(report_moves(
            ctx,
            search::solve_c2c(g, s, goal, ctx.limits())?,
        )),
        (ReachMethod::Bfs, true) => Ok(report_moves(
            ctx,
            search::solve_bounded_c2c(g, s, goal, ctx.limits())?,
        )),
    }
}

fn load_nice(
    d: &Document,
    path: Option<&Path>,
) -> std::result::Result<NiceTreeDecomposition, Failure> {
    let Some(path) = path else {
        return Ok(nice_decomposition(&d.graph));
    };
    Ok(match parse_decomposition(&read_input(path)?)? {
        ParsedDecomposition::Plain(td) => to_nice(&d.graph, &td)?,
        ParsedDecomposition::Nice(n) => n,
    })
}

fn solve_bounded(
    ctx: &mut Ctx<'_>,
    q: &Query,
    method: BoundedMethod,
    decomposition: Option<&Path>,
) -> Outcome {
    let d = read_document(&q.file)?;
    let s = named_config(&d, &q.start)?;
    let g = &d.graph;
    let goal = d.config(&q.goal);
    let variant = match goal {
        Some(goal) if q.target.is_none() => BoundedVariant::C2C(goal.clone()),
        _ => BoundedVariant::C2E(target_of(&d, q)?),
    };
    let res = match (method, &variant) {
        (BoundedMethod::Dp, v) => {
            dp_bounded_ncl(g, &load_nice(&d, decomposition)?, v, s, ctx.dp_limits())?
        }
        (BoundedMethod::Search, BoundedVariant::C2C(goal)) => {
            search::solve_bounded_c2c(g, s, goal, ctx.limits())?
        }
        (BoundedMethod::Search, BoundedVariant::C2E(t)) => {
            search::solve_bounded_c2e(g, s, *t, ctx.limits())?
        }
        (BoundedMethod::Subset, BoundedVariant::C2C(goal)) => {
            solve_bounded_c2c_subsetdp(g, s, goal, ctx.g.limit_l)?
        }
        (BoundedMethod::Subset, BoundedVariant::C2E(_)) => {
            return Err(Failure::Usage(
                "the subset DP needs a goal configuration".into(),
            ))
        }
    };
    Ok(report_moves(ctx, res))
}

fn reduce(
    ctx: &mut Ctx<'_>,
    source: Source,
    file: &Path,
    question: Option<Question>,
    opts: HWordOptions,
) -> Outcome {
    if source != Source::Hword && (opts.pure_and_or || opts.planarize) {
        return Err(Failure::Usage(
            "--pure and --planarize apply to hword instances only".into(),
        ));
    }
    let text = read_input(file)?;
    let out: ReductionOutput = match source {
        Source::Partition => {
            let p = parse_partition(&text)?;
            match question.unwrap_or(Question::Cgs) {
                Question::Cgs => partition_to_cgs(&p)?,
                Question::C2e => partition_to_bounded_ncl(&p, PartitionGoal::C2E)?,
                Question::C2c => partition_to_bounded_ncl(&p, PartitionGoal::C2C)?,
            }
        }
        Source::Clique => {
            let c = parse_clique(&text)?;
            match question.unwrap_or(Question::C2e) {
                Question::Cgs => {
                    return Err(Failure::Usage(
                        "clique instances compile to c2e or c2c".into(),
                    ))
                }
                Question::C2e => clique_to_c2e(&c)?,
                Question::C2c => clique_to_c2c(&c)?,
            }
        }
        Source::Hword => {
            let inst = parse_instance(&text)?;
            let natural = match inst.goal {
                HGoal::Word(_) => Question::C2c,
                HGoal::Target { .. } => Question::C2e,
            };
            if question.is_some_and(|q| q != natural) {
                return Err(Failure::Usage(
                    "an hword instance's question follows its goal or target record".into(),
                ));
            }
            hword_to_ncl(&inst, opts)?
        }
    };
    ctx.note(format!(
        "reduced: {} vertices, {} edges, {} bags",
        out.graph.vertex_count(),
        out.graph.edge_count(),
        out.bags.as_ref().map_or(0, Vec::len)
    ));
    ctx.emit_document(&out.to_document());
    Ok(EXIT_YES)
}

fn decompose(ctx: &mut Ctx<'_>, file: &Path, nice: bool, check: Option<&Path>) -> Outcome {
    let d = read_document(file)?;
    if let Some(path) = check {
        let problems: Vec<String> = match parse_decomposition(&read_input(path)?)? {
            ParsedDecomposition::Plain(td) => validate_decomposition(&d.graph, &td)
                .iter()
                .map(|v| v.to_string())
                .collect(),
            ParsedDecomposition::Nice(n) => validate_nice(&d.graph, &n)
                .iter()
                .map(|v| v.to_string())
                .collect(),
        };
        for p in &problems {
            ctx.say(format!("violation {p}\n"));
        }
        ctx.say(if problems.is_empty() {
            "valid\n"
        } else {
            "invalid\n"
        });
        return Ok(yes_no(problems.is_empty()));
    }
    let td = heuristic_decomposition(&d.graph);
    ctx.note(format!("width {}", td.width()));
    if nice {
        ctx.say(print_nice(&to_nice(&d.graph, &td)?));
    } else {
        ctx.say(print_decomposition(&td));
    }
    Ok(EXIT_YES)
}

fn kernelize(ctx: &mut Ctx<'_>, q: &Query) -> Outcome {
    let d = read_document(&q.file)?;
    let s = named_config(&d, &q.start)?;
    let l = ctx.g.limit_l;
    let res = match d.config(&q.goal) {
        Some(goal) if q.target.is_none() => kernelize_c2c(&d.graph, s, goal, l)?,
        _ => kernelize_c2e(&d.graph, s, target_of(&d, q)?, l)?,
    };
    match res {
        KernelResult::Reject => {
            ctx.say("reject\n");
            Ok(EXIT_NO)
        }
        KernelResult::Kernel(k) => {
            ctx.note(format!(
                "kernel: {} of {} edges, {} vertices",
                k.retained.len(),
                d.graph.edge_count(),
                k.graph.vertex_count()
            ));
            ctx.emit_document(&k.to_document());
            Ok(EXIT_YES)
        }
    }
}

fn gadget_verify(ctx: &mut Ctx<'_>, name: Option<&str>, show: bool) -> Outcome {
    let all = shipped_gadgets();
    let chosen: Vec<_> = all
        .iter()
        .filter(|(g, _)| name.is_none_or(|n| g.name == n))
        .collect();
    if chosen.is_empty() {
        let names: Vec<&str> = all.iter().map(|(g, _)| g.name.as_str()).collect();
        return Err(Failure::Usage(format!(
            "unknown gadget; one of {}",
            names.join(", ")
        )));
    }
    if show {
        for (g, _) in &chosen {
            ctx.emit_document(&g.to_document());
        }
        return Ok(EXIT_YES);
    }
    let mut ok = true;
    for (g, spec) in chosen {
        let failures = verify_behavior(g, spec)?;
        let legal = is_legal(&g.graph, &g.initial)?;
        if failures.is_empty() && legal {
            ctx.say(format!("{} ok\n", g.name));
        } else {
            ok = false;
            ctx.say(format!("{} FAIL\n", g.name));
            for f in failures {
                ctx.note(format!("{}: {f}", g.name));
            }
            if !legal {
                ctx.note(format!("{}: initial state is illegal", g.name));
            }
        }
    }
    Ok(yes_no(ok))
}

fn layout(ctx: &mut Ctx<'_>, file: &Path, measure: Measure, from_layers: bool) -> Outcome {
    let d = read_document(file)?;
    let l: Layout = if from_layers {
        if measure != Measure::Bandwidth {
            return Err(Failure::Usage("--from-layers reports bandwidth".into()));
        }
        let drawing = d
            .drawing
            .clone()
            .ok_or_else(|| Failure::Usage("document has no layer records".into()))?;
        let r = ReductionOutput {
            graph: d.graph.clone(),
            start: None,
            goal: None,
            target: None,
            drawing,
            vertex_origin: Vec::new(),
            edge_origin: Vec::new(),
            bags: None,
            decomposition: None,
            length_bound: None,
            hword: None,
        };
        layout_from_bags(&r)?
    } else {
        match measure {
            Measure::Bandwidth => bandwidth_exact(&d.graph, BAG_LAYOUT_LIMIT)?,
            Measure::Cutwidth => cutwidth_exact(&d.graph, BAG_LAYOUT_LIMIT)?,
        }
    };
    let order: Vec<String> = l.order.iter().map(|v| v.to_string()).collect();
    ctx.say(format!("value {}\norder {}\n", l.value, order.join(" ")));
    Ok(EXIT_YES)
}

fn export(ctx: &mut Ctx<'_>, file: &Path) -> Outcome {
    let d = read_document(file)?;
    ctx.emit_document(&d);
    Ok(EXIT_YES)
}

fn verify(ctx: &mut Ctx<'_>, suite: &str) -> Outcome {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else {
        vec![suite]
    };
    let mut ok = true;
    for name in names {
        let r = run_suite(name, ctx.g.seed)?;
        ctx.say(format!("{}\n", r.summary()));
        for f in r.failures.iter().take(20) {
            ctx.note(format!("{}: {f}", r.name));
        }
        ok &= r.passed();
    }
    Ok(yes_no(ok))
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let mut ctx = Ctx {
        g: &cli.global,
        out,
        err,
    };
    match &cli.command {
        Command::Check { file, restricted } => check(&mut ctx, file, *restricted),
        Command::SolveCgs { file, method } => solve_cgs(&mut ctx, file, *method),
        Command::SolveC2e {
            query,
            bounded,
            method,
        } => solve_c2e(&mut ctx, query, *bounded, *method),
        Command::SolveC2c {
            query,
            bounded,
            method,
        } => solve_c2c(&mut ctx, query, *bounded, *method),
        Command::SolveBounded {
            query,
            method,
            decomposition,
        } => solve_bounded(&mut ctx, query, *method, decomposition.as_deref()),
        Command::Reduce {
            source,
            file,
            question,
            pure,
            planarize,
        } => reduce(
            &mut ctx,
            *source,
            file,
            *question,
            HWordOptions {
                pure_and_or: *pure,
                planarize: *planarize,
            },
        ),
        Command::Decompose { file, nice, check } => {
            decompose(&mut ctx, file, *nice, check.as_deref())
        }
        Command::Kernelize { query } => kernelize(&mut ctx, query),
        Command::GadgetVerify { name, show } => gadget_verify(&mut ctx, name.as_deref(), *show),
        Command::Layout {
            file,
            measure,
            from_layers,
        } => layout(&mut ctx, file, *measure, *from_layers),
        Command::Export { file } => export(&mut ctx, file),
        Command::Verify { suite } => verify(&mut ctx, suite),
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit status: 0 yes/success, 1 no, 2 usage or input error, 3 resource
/// limit exceeded. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_YES };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let status = match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(Failure::Lib(e @ NclError::LimitExceeded { .. })) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_LIMIT
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    };
    let _ = out.flush();
    status
}

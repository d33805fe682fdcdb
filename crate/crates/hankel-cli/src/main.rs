//! `hankel`: command-line verification of the Hankel determinant identities
//! for convoluted Catalan numbers.
//!
//! Exit status is 0 when every check passes, 1 when a verification fails and
//! 2 on usage errors (including requests that exceed the enumeration budget).

use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use hankel_paths::folded_overlays::{folded_survivors, FoldedOverlay};
use hankel_paths::harness::{
    emit_determinant, emit_enumeration, emit_report, render_svg, run_route_enumeration, verify_identities,
    DeterminantRecord, Fault, Format, Grid, RenderObject, SvgOptions, VerifyOptions, SCHEMA_VERSION,
};
use hankel_paths::lattice_paths::{survivors, BUDGET_ENV};
use hankel_paths::xi_bijection::build_graph;
use hankel_paths::{hankel_det, Budget, HankelDims, IdentityParams, Parity, Side};

#[derive(Parser)]
#[command(name = "hankel")]
#[command(about = "Verify Hankel determinant identities of convoluted Catalan numbers by three independent routes")]
#[command(version)]
struct Cli {
    /// Tuple budget per instance for the enumeration routes
    #[arg(long, global = true, env = BUDGET_ENV)]
    budget: Option<u64>,

    /// Output format for reports: json | csv
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Commands,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
    Both,
}

impl ParityArg {
    fn parities(self) -> Vec<Parity> {
        match self {
            ParityArg::Even => vec![Parity::Even],
            ParityArg::Odd => vec![Parity::Odd],
            ParityArg::Both => Parity::ALL.to_vec(),
        }
    }

    fn single(self) -> Option<Parity> {
        match self {
            ParityArg::Even => Some(Parity::Even),
            ParityArg::Odd => Some(Parity::Odd),
            ParityArg::Both => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Lhs,
    Rhs,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Lhs => Side::Lhs,
            SideArg::Rhs => Side::Rhs,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RenderKind {
    /// A survivor tuple of one side
    Survivor,
    /// A folded survivor with region and strip columns
    Overlay,
    /// The planar graph of a folded survivor
    Graph,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FaultArg {
    RhsDeterminant,
}

/// Parses `a` or `a..b` / `a..=b` (both inclusive).
fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once("..") {
        None => num(s).map(|v| v..=v),
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?);
            if a > b {
                Err(format!("empty range {s:?}"))
            } else {
                Ok(a..=b)
            }
        }
    }
}

/// Grid selection shared by `verify` and `bijection-check`.
#[derive(Args)]
struct GridArgs {
    /// Values of k: a number or an inclusive range `a..b`
    #[arg(long, value_parser = parse_range, default_value = "1..3")]
    k: RangeInclusive<u32>,

    /// Values of m: a number or an inclusive range `a..b`
    #[arg(long, value_parser = parse_range, default_value = "1..3")]
    m: RangeInclusive<u32>,

    /// Values of n: a number or an inclusive range `a..b` (overrides --n-max)
    #[arg(long, value_parser = parse_range)]
    n: Option<RangeInclusive<u32>>,

    /// Largest n; n runs from 0
    #[arg(long, default_value_t = 3)]
    n_max: u32,

    /// Parity filter
    #[arg(long, value_enum, default_value_t = ParityArg::Both)]
    parity: ParityArg,
}

impl GridArgs {
    fn grid(&self) -> Result<Grid, String> {
        if *self.k.start() == 0 || *self.m.start() == 0 {
            return Err("k and m must be at least 1".into());
        }
        Ok(Grid {
            k: self.k.clone(),
            m: self.m.clone(),
            n: self.n.clone().unwrap_or(0..=self.n_max),
            parities: self.parity.parities(),
        })
    }
}

/// One identity instance.
#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    k: u32,

    #[arg(long)]
    m: u32,

    #[arg(long)]
    n: u32,

    #[arg(long, value_enum, default_value_t = ParityArg::Even)]
    parity: ParityArg,

    /// Side of the identity
    #[arg(long, value_enum, default_value_t = SideArg::Lhs)]
    side: SideArg,
}

impl InstanceArgs {
    fn params(&self) -> Result<IdentityParams, String> {
        if self.k == 0 || self.m == 0 {
            return Err("k and m must be at least 1".into());
        }
        let parity = self.parity.single().ok_or("a single parity is required here")?;
        Ok(IdentityParams::new(self.k, self.m, self.n, parity))
    }
}

#[derive(Subcommand)]
enum Commands {
    /// Exact determinant D_{K,M}(N) of the Hankel matrix of convoluted Catalan numbers
    #[command(allow_negative_numbers = true)]
    Det {
        /// Convolution order K (at least 1)
        #[arg(value_name = "K")]
        big_k: i64,
        /// Index shift M (may be negative)
        #[arg(value_name = "M")]
        big_m: i64,
        /// Matrix size N
        #[arg(value_name = "N")]
        big_n: usize,
    },

    /// Compare signed tuple sums, the LGV involution and survivors with the determinant on one side of one identity
    Enumerate(InstanceArgs),

    /// Check zero ranges, determinant equality and (within budget) the enumeration and bijection routes on a grid
    Verify {
        #[command(flatten)]
        grid: GridArgs,

        /// Skip the involution / bijection route
        #[arg(long)]
        no_bijection: bool,

        /// Record wall-clock time per instance (reports are then not reproducible)
        #[arg(long)]
        timing: bool,

        /// Worker threads (0 = available parallelism)
        #[arg(long, default_value_t = 0)]
        threads: usize,

        /// Corrupt a value to exercise the failure path
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },

    /// Run the involution and code-class bijection on a grid and report every code class
    BijectionCheck {
        #[command(flatten)]
        grid: GridArgs,

        /// Worker threads (0 = available parallelism)
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },

    /// Draw a survivor, folded survivor or overlay graph as SVG 1.1
    Render {
        #[command(flatten)]
        instance: InstanceArgs,

        /// What to draw
        #[arg(long, value_enum, default_value_t = RenderKind::Overlay)]
        kind: RenderKind,

        /// Index into the canonically ordered survivors
        #[arg(long, default_value_t = 0)]
        index: usize,

        /// Pixels per lattice unit
        #[arg(long, default_value_t = 40)]
        scale: u32,
    },
}

/// Outcome of a subcommand: text to emit and whether it verified.
struct Output {
    text: String,
    passed: bool,
}

fn usage(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(clap::error::ErrorKind::ValueValidation, msg).exit()
}

fn run(cli: &Cli) -> Output {
    let budget = cli.budget.map_or_else(Budget::default, |b| Budget::default().with_tuples(b));
    let format = Format::from(cli.format);
    match &cli.command {
        Commands::Det { big_k, big_m, big_n } => {
            let dims = HankelDims::new(*big_k, *big_m, *big_n);
            let d = hankel_det(dims).unwrap_or_else(|e| usage(e));
            let rec = DeterminantRecord {
                schema_version: SCHEMA_VERSION,
                k: dims.k,
                m: dims.m,
                n: dims.n,
                determinant: d.to_string(),
            };
            Output { text: emit_determinant(&rec, format), passed: true }
        }
        Commands::Enumerate(inst) => {
            let p = inst.params().unwrap_or_else(|e| usage(e));
            let rec = run_route_enumeration(p.side(inst.side.into()).dims(), &budget);
            Output { passed: rec.agree, text: emit_enumeration(&rec, format) }
        }
        Commands::Verify { grid, no_bijection, timing, threads, inject_fault } => {
            let grid = grid.grid().unwrap_or_else(|e| usage(e));
            let opts = VerifyOptions {
                budget,
                bijection: !no_bijection,
                bijection_details: false,
                timing: *timing,
                fault: inject_fault.map(|FaultArg::RhsDeterminant| Fault::PerturbRhsDeterminant),
                threads: *threads,
            };
            let report = verify_identities(&grid, &opts);
            Output { passed: !report.has_failure(), text: emit_report(&report, format) }
        }
        Commands::BijectionCheck { grid, threads } => {
            let grid = grid.grid().unwrap_or_else(|e| usage(e));
            let opts = VerifyOptions {
                budget,
                bijection: true,
                bijection_details: true,
                timing: false,
                fault: None,
                threads: *threads,
            };
            let report = verify_identities(&grid, &opts);
            Output { passed: !report.has_failure(), text: emit_report(&report, format) }
        }
        Commands::Render { instance, kind, index, scale } => {
            let p = instance.params().unwrap_or_else(|e| usage(e));
            let opts = SvgOptions { scale: *scale, ..SvgOptions::default() };
            let pick = |len: usize| {
                if *index >= len {
                    usage(format!("index {index} out of range: the instance has {len} candidates"))
                }
            };
            let svg = match kind {
                RenderKind::Survivor => {
                    let dims = p.side(instance.side.into()).dims();
                    let all = survivors(dims, &budget).unwrap_or_else(|e| usage(e));
                    pick(all.len());
                    render_svg(RenderObject::Survivor { tuple: &all[*index], k: dims.k }, &opts)
                }
                RenderKind::Overlay | RenderKind::Graph => {
                    let mut all: Vec<FoldedOverlay> = folded_survivors(p, &budget).unwrap_or_else(|e| usage(e));
                    all.sort();
                    pick(all.len());
                    let o = &all[*index];
                    if *kind == RenderKind::Overlay {
                        render_svg(RenderObject::Overlay(o), &opts)
                    } else {
                        render_svg(RenderObject::Graph(&build_graph(o)), &opts)
                    }
                }
            };
            Output { text: svg.unwrap_or_else(|e| usage(e)), passed: true }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(&cli);
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &out.text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", out.text),
    }
    if out.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("verification failed");
        ExitCode::from(1)
    }
}

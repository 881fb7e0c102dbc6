use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fct_core::poly::{self, Triangle};
use fct_core::rootsys::{RootSystem, TypeSpec};
use fct_core::verify::{self, Case, GridRow, Identity, Outcome, Suite};
use fct_core::{arrangement, cluster, ehrhart, noncrossing, nonnesting, Error};

/// Exact H-, F- and M-triangles of Fuss-Catalan objects.
#[derive(Parser)]
#[command(name = "fct", version)]
struct Cli {
    /// Suppress headers and summaries.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the H-, F- or M-triangle.
    Triangle {
        #[arg(value_parser = parse_triangle)]
        kind: Triangle,
        #[command(flatten)]
        cell: Cell,
        #[arg(long, conflicts_with = "latex")]
        json: bool,
        #[arg(long)]
        latex: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check one identity; exit 1 with a counterexample when it fails.
    Verify {
        /// h=f, h=m, m=f, k1, recip, dual, y1-nar, lattice-nar, pos, ceil,
        /// final, dh, df, bij, phi or counts.
        #[arg(value_parser = parse_identity)]
        identity: Identity,
        #[command(flatten)]
        cell: Cell,
    },
    /// Run a whole verification suite: acceptance or extended.
    Grid {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
    },
    /// Dump the underlying objects as JSON.
    Dump {
        what: DumpKind,
        #[command(flatten)]
        cell: Cell,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lattice points of the dilated fundamental simplex by wall count, as CSV.
    Ehrhart {
        #[arg(long = "type", value_parser = parse_type)]
        type_spec: TypeSpec,
        /// Dilations `kh + 1` for `k = 1..=K`.
        #[arg(short, long, conflicts_with = "t")]
        k: Option<usize>,
        /// A single dilation factor.
        #[arg(short, long)]
        t: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Cell {
    #[arg(long = "type", value_parser = parse_type)]
    type_spec: TypeSpec,
    #[arg(short, long)]
    k: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum DumpKind {
    /// Geometric filter chains.
    Nn,
    /// Delta sequences as reflection words.
    Nc,
    /// Face numbers of the cluster complex.
    F,
    /// Dominant regions with walls, floors and ceilings.
    Regions,
}

fn parse_triangle(s: &str) -> Result<Triangle, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_identity(s: &str) -> Result<Identity, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_type(s: &str) -> Result<TypeSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Verification failure, reported with exit code 1.
struct Violated;

enum Failure {
    Core(Error),
    Io(io::Error),
    Violated(Violated),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violated(Violated)) => ExitCode::from(1),
        Err(Failure::Core(e)) => {
            eprintln!("fct: {e}");
            ExitCode::from(match e {
                Error::Usage(_) | Error::Precondition(_) => 2,
                Error::Invariant(_) => 3,
                Error::Resource(_) => 4,
            })
        }
        Err(Failure::Io(e)) => {
            eprintln!("fct: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")),
        None => writeln!(io::stdout().lock(), "{text}"),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Triangle {
            kind,
            cell,
            json,
            latex,
            out,
        } => {
            let rs = RootSystem::new(&cell.type_spec)?;
            if cell.k == 0 {
                return Err(Error::Usage("k must be at least 1".into()).into());
            }
            let case = Case::new(&rs, cell.k);
            let p = match kind {
                Triangle::H => case.h()?,
                Triangle::F => case.f()?,
                Triangle::M => case.m()?,
            };
            let text = if *json {
                poly::triangle_json(*kind, &rs.type_spec().to_string(), cell.k as u32, rs.rank() as u32, p)
            } else if *latex {
                p.to_latex_table()
            } else {
                p.to_string()
            };
            emit(out, &text)?;
        }
        Command::Verify { identity, cell } => {
            let rs = RootSystem::new(&cell.type_spec)?;
            let outcome = Case::new(&rs, cell.k).verify(*identity)?;
            match outcome {
                Outcome::Verified => {
                    if !cli.quiet {
                        println!("{identity} verified for {} with k = {}", rs.type_spec(), cell.k);
                    }
                }
                Outcome::Violated(why) => {
                    println!("{identity} FAILED for {} with k = {}: {why}", rs.type_spec(), cell.k);
                    return Err(Failure::Violated(Violated));
                }
            }
        }
        Command::Grid { suite } => {
            let rows = verify::run_suite(*suite)?;
            print_grid(&rows, cli.quiet);
            if !rows.iter().all(GridRow::passed) {
                return Err(Failure::Violated(Violated));
            }
        }
        Command::Dump { what, cell, out } => {
            let rs = RootSystem::new(&cell.type_spec)?;
            if cell.k == 0 {
                return Err(Error::Usage("k must be at least 1".into()).into());
            }
            let text = match what {
                DumpKind::Nn => nonnesting::nn_json(&nonnesting::enumerate_nn(&rs, cell.k)?),
                DumpKind::Nc => noncrossing::NcPoset::new(&rs, cell.k)?.to_json(&rs),
                DumpKind::F => cluster::f_json(&cluster::f_triangle(&rs, cell.k)?),
                DumpKind::Regions => arrangement::regions_json(&rs, cell.k)?,
            };
            emit(out, &text)?;
        }
        Command::Ehrhart { type_spec, k, t, out } => {
            let rs = RootSystem::new(type_spec)?;
            let counts = match (k, t) {
                (_, Some(t)) => vec![ehrhart::count_by_walls(&rs, *t)?],
                (Some(k), None) => {
                    let h = rs.coxeter_number()? as i64;
                    (1..=*k as i64)
                        .map(|k| ehrhart::count_by_walls(&rs, k * h + 1))
                        .collect::<Result<_, _>>()?
                }
                (None, None) => return Err(Error::Usage("give -k or -t".into()).into()),
            };
            emit(out, ehrhart::counts_csv(&counts).trim_end())?;
        }
    }
    Ok(())
}

fn print_grid(rows: &[GridRow], quiet: bool) {
    if !quiet {
        println!("{:<6} {:>2} {:>6} {:>6} {:>6}  verdicts", "type", "k", "|NN|", "facets", "|NC|");
    }
    for row in rows {
        let verdicts: Vec<String> = row
            .verdicts
            .iter()
            .map(|(name, o)| format!("{name}:{}", if o.is_verified() { "ok" } else { "FAIL" }))
            .collect();
        println!(
            "{:<6} {:>2} {:>6} {:>6} {:>6}  {}",
            row.type_spec.to_string(),
            row.k,
            row.nn,
            row.facets,
            row.nc,
            verdicts.join(" ")
        );
        for (name, o) in &row.verdicts {
            if let Outcome::Violated(why) = o {
                println!("    {name}: {why}");
            }
        }
    }
    if !quiet {
        let failed = rows.iter().filter(|r| !r.passed()).count();
        if failed == 0 {
            println!("all {} cells verified", rows.len());
        } else {
            println!("{failed} of {} cells failed", rows.len());
        }
    }
}

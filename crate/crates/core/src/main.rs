use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use grasslift::cli::{
    cmd_bound, cmd_construct, cmd_graph, cmd_params, cmd_table, cmd_verify, CheckKind, CodeKind,
    ConstructArgs, GraphArgs, RunReport, TableLayout, VerifyArgs, DEFAULT_GUARD,
};
use grasslift::{Metric, Variant};

#[derive(Parser)]
#[command(
    name = "grasslift",
    version,
    about = "MRD matrix codes over F_p from F_{p^2}, their lifts to anticode-optimal Grassmannian codes, and exhaustive checks"
)]
struct Cli {
    /// Print run reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weight table of phi over (F_{p^2})^2 as CSV.
    Table {
        #[arg(long)]
        p: u32,
        /// `full` scans all of (F_{p^2})^2, `odd` only {(0, x)}.
        #[arg(long, value_parser = parse::<TableLayout>)]
        layout: Option<TableLayout>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build G_p(r,2), an image code, or its lift; write JSON and check parameters.
    Construct {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value = "O", value_parser = parse::<Variant>)]
        variant: Variant,
        /// grassmannian | image | lift
        #[arg(long, default_value = "grassmannian", value_parser = parse::<CodeKind>)]
        kind: CodeKind,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: u128,
    },
    /// Recompute checks on a code file.
    Verify {
        path: PathBuf,
        /// Comma-separated subset of mrd,anticode,distance,dual,graph.
        #[arg(long, value_delimiter = ',', value_parser = parse::<CheckKind>)]
        checks: Option<Vec<CheckKind>>,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: u128,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Trivial-intersection graph of G_p(r,2) as DOT.
    Graph {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value = "O", value_parser = parse::<Variant>)]
        variant: Variant,
        /// DOT output; full bases go to a `.bases.json` sidecar.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Adjacency matrix CSV output.
        #[arg(long)]
        adjacency: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: u128,
    },
    /// Anticode bound on the size of an (n, M, d, k)_q code.
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "subspace", value_parser = parse::<Metric>)]
        metric: Metric,
    },
    /// Recomputed parameter summary of a code file.
    Params {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: u128,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse<T: std::str::FromStr<Err = grasslift::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: grasslift::Error| e.to_string())
}

fn emit(report: &RunReport, json: bool) -> ExitCode {
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
    } else {
        print!("{report}");
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command_line = std::env::args().collect::<Vec<_>>().join(" ");
    let result = match cli.command {
        Command::Table { p, layout, out } => cmd_table(p, layout).and_then(|csv| {
            match out {
                Some(path) => std::fs::write(&path, csv).map_err(|e| {
                    grasslift::Error::Malformed(format!("cannot write {}: {e}", path.display()))
                })?,
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }),
        Command::Construct {
            p,
            r,
            variant,
            kind,
            out,
            guard,
        } => cmd_construct(
            &ConstructArgs {
                p,
                r,
                variant,
                kind,
                out,
                guard,
            },
            &command_line,
        )
        .map(|rep| emit(&rep, cli.json)),
        Command::Verify {
            path,
            checks,
            guard,
            seed,
        } => cmd_verify(
            &VerifyArgs {
                path,
                checks,
                guard,
                seed,
            },
            &command_line,
        )
        .map(|rep| emit(&rep, cli.json)),
        Command::Graph {
            p,
            r,
            variant,
            out,
            adjacency,
            guard,
        } => cmd_graph(
            &GraphArgs {
                p,
                r,
                variant,
                dot: out,
                adjacency,
                guard,
            },
            &command_line,
        )
        .map(|rep| emit(&rep, cli.json)),
        Command::Bound {
            n,
            d,
            k,
            q,
            metric,
        } => cmd_bound(n, d, k, q, metric).map(|b| {
            println!("{b}");
            ExitCode::SUCCESS
        }),
        Command::Params { path, guard, seed } => cmd_params(&path, guard, seed).map(|s| {
            println!("{s}");
            ExitCode::SUCCESS
        }),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}

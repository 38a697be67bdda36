mod commands;
mod ranges;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ranges::IntList;
use table::Format;

/// Counts, bounds and experiments for t-stable sets of random graphs.
#[derive(Parser, Debug)]
#[command(name = "tstable-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file, replaced atomically; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact, contour and saddle-point values of C_{2m}(t, k).
    Counts {
        #[arg(long, allow_negative_numbers = true)]
        t: IntList,
        #[arg(long, allow_negative_numbers = true)]
        k: IntList,
        /// Edge counts; every m with 2m <= tk when absent.
        #[arg(long, allow_negative_numbers = true)]
        m: Option<IntList>,
        /// Quadrature nodes for the contour integral.
        #[arg(long, default_value_t = tstable_core::poly_saddle::DEFAULT_CONTOUR_NODES)]
        nodes: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Saddle point r_0 and variance factor s at y = 2m/k.
    Saddle {
        #[arg(long, allow_negative_numbers = true)]
        t: IntList,
        #[arg(long, allow_negative_numbers = true)]
        k: IntList,
        #[arg(long, allow_negative_numbers = true)]
        m: IntList,
        #[command(flatten)]
        output: Output,
    },
    /// Edge-count profile of f(m): m*, its prediction and first-moment bounds.
    Profile {
        #[arg(long, allow_negative_numbers = true)]
        t: IntList,
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        k: IntList,
        /// Graph orders for expected-count bounds.
        #[arg(long, allow_negative_numbers = true)]
        n: Option<IntList>,
        #[command(flatten)]
        output: Output,
    },
    /// Predicted two-point window for the t-stability number.
    Window {
        #[arg(long, allow_negative_numbers = true)]
        t: IntList,
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        n: IntList,
        #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
        eps: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Reference bounds on the t-improper chromatic number.
    Chi {
        #[arg(long, allow_negative_numbers = true)]
        t: IntList,
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        n: IntList,
        /// Also report the peeling target size for this epsilon.
        #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
        eps: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Monte Carlo concentration experiment on G(n, p).
    Experiment {
        #[arg(long, allow_negative_numbers = true)]
        t: i64,
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        trials: i64,
        /// Master seed; required.
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
        eps: f64,
        /// Worker threads; 0 uses every logical core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Search budget per trial in milliseconds; 0 means unlimited.
        #[arg(long, default_value_t = 10_000)]
        budget_ms: u64,
        /// Fill the elapsed_ms column (makes output run-dependent).
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Exhaustive check that balanced partitions maximise h.
    PartitionCheck {
        #[arg(long, allow_negative_numbers = true)]
        t: IntList,
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        n: IntList,
        /// Number of parts r.
        #[arg(long, allow_negative_numbers = true)]
        k: IntList,
        #[command(flatten)]
        output: Output,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TSTABLE_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let (table, output) = match commands::run(cli.command) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    if let Err(e) = table::emit(&table.render(output.format), output.out.as_deref()) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

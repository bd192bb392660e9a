use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use reflmap::curveinv::Ordering;
use reflmap::group::DEFAULT_MAX_ORDER;
use reflmap::poly::Limits;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "reflmap", version, about = "Analyze reflection mappings described by a JSON problem file")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Refuse to build groups larger than this.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ORDER)]
    max_group_order: usize,
    /// Reduction step budget for each Gröbner or standard basis computation.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    step_budget: u64,
    /// Re-check every Gröbner basis by reducing all of its S-polynomials.
    #[arg(long, global = true)]
    verify: bool,
    /// Order of the branches in the invariant report.
    #[arg(long, global = true, value_enum, default_value_t = OrderingArg::ReflectionsFirst)]
    ordering: OrderingArg,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OrderingArg {
    ReflectionsFirst,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Group order, reflections, fixed space dimensions and orbit map check.
    Info { file: PathBuf },
    /// Degree and stabilizers.
    Degree { file: PathBuf },
    /// Equation of the image.
    Image { file: PathBuf },
    /// Double point branches for every non-identity element.
    Branches { file: PathBuf },
    /// Milnor numbers, intersection numbers and delta invariants.
    Invariants { file: PathBuf },
    /// Blow-up charts of K₂ for one group element.
    K2 {
        file: PathBuf,
        /// Index of the element in the group table.
        #[arg(long, conflicts_with = "exponents")]
        sigma: Option<usize>,
        /// Exponents of a cyclic product element, e.g. 1,1,1,0,0.
        #[arg(long, value_delimiter = ',')]
        exponents: Option<Vec<u32>>,
    },
}

pub struct Options {
    pub json: bool,
    pub cap: usize,
    pub limits: Limits,
    pub ordering: Ordering,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        json: cli.json,
        cap: cli.max_group_order,
        limits: Limits { step_budget: cli.step_budget, verify: cli.verify },
        ordering: match cli.ordering {
            OrderingArg::ReflectionsFirst => Ordering::ReflectionsFirst,
            OrderingArg::Table => Ordering::Table,
        },
    };
    let result = match &cli.command {
        Command::Info { file } => commands::info(file, &opts),
        Command::Degree { file } => commands::degree(file, &opts),
        Command::Image { file } => commands::image(file, &opts),
        Command::Branches { file } => commands::branches(file, &opts),
        Command::Invariants { file } => commands::invariants(file, &opts),
        Command::K2 { file, sigma, exponents } => commands::k2(file, *sigma, exponents.as_deref(), &opts),
    };
    match result {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

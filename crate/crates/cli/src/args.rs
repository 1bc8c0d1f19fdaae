use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "algebroid", version, about = "Exact calculus on Lie algebroids over polynomial charts")]
pub struct Cli {
    /// Model file(s); repeat to merge several.
    #[arg(long = "model", short = 'm', global = true)]
    pub models: Vec<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate every algebroid, Poisson structure and tensor in the model.
    Validate,
    /// Print the model in canonical form.
    Dump,
    /// Bracket of two named tensors.
    Bracket {
        #[arg(long, value_enum)]
        kind: BracketKind,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Poisson structure for `koszul` and `extended`; inferred from the owner when omitted.
        #[arg(long)]
        poisson: Option<String>,
    },
    /// Exterior derivative d_τ of a form.
    D {
        #[arg(long)]
        form: String,
        #[arg(long)]
        algebroid: Option<String>,
    },
    /// Lie derivative L_X μ.
    Lie {
        #[arg(long)]
        x: String,
        #[arg(long)]
        form: String,
        #[arg(long)]
        algebroid: Option<String>,
    },
    /// Contraction i_X μ, or i_K for a mixed tensor K.
    Contract {
        #[arg(long)]
        x: String,
        #[arg(long)]
        form: String,
        #[arg(long)]
        algebroid: Option<String>,
    },
    /// Lifts of tensors and lifted structures.
    Lift(LiftArgs),
    /// Run identity suites.
    Suite(SuiteArgs),
    /// Substitute coordinate values into a tensor or polynomial.
    Eval {
        /// Comma-separated `coord=rational` assignments.
        #[arg(long)]
        at: String,
        #[arg(long, conflicts_with = "poly")]
        a: Option<String>,
        #[arg(long, requires = "algebroid")]
        poly: Option<String>,
        /// Owner for builtin names and `--poly`: an algebroid, Poisson structure or chart.
        #[arg(long)]
        algebroid: Option<String>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BracketKind {
    Schouten,
    Sym,
    Nr,
    Fn,
    Koszul,
    Extended,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum LiftKind {
    #[value(name = "V")]
    V,
    #[value(name = "T")]
    T,
    #[value(name = "Vpi")]
    Vpi,
    #[value(name = "Vtau")]
    Vtau,
    #[value(name = "G")]
    G,
    #[value(name = "J")]
    J,
    #[value(name = "Gmix")]
    Gmix,
    #[value(name = "kappa")]
    Kappa,
    #[value(name = "alpha")]
    Alpha,
    #[value(name = "jstar")]
    Jstar,
    #[value(name = "hmap")]
    Hmap,
    #[value(name = "tangent-algebroid")]
    TangentAlgebroid,
    #[value(name = "cotangent-algebroid")]
    CotangentAlgebroid,
    #[value(name = "linear-poisson")]
    LinearPoisson,
    #[value(name = "tangent-poisson")]
    TangentPoisson,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Via {
    #[value(name = "V")]
    V,
    #[value(name = "T")]
    T,
}

#[derive(Args, Debug)]
pub struct LiftArgs {
    #[arg(long, value_enum)]
    pub kind: LiftKind,
    /// Tensor to lift.
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub algebroid: Option<String>,
    #[arg(long)]
    pub poisson: Option<String>,
    /// Lift transported by `kappa` and `alpha`.
    #[arg(long, value_enum, default_value = "T")]
    pub via: Via,
    /// Name given to a constructed algebroid or Poisson structure in the output.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    /// Suite id such as `theorem-12` or `eq-1-12`, or `all`.
    #[arg(long)]
    pub name: String,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub max_degree: Option<u32>,
    /// Run one check only.
    #[arg(long)]
    pub check: Option<String>,
    /// Restrict to one fixture.
    #[arg(long)]
    pub fixture: Option<String>,
    /// Run a single trial index.
    #[arg(long)]
    pub trial: Option<usize>,
    /// Insertion order for the calibration checks: `default` or `reversed`.
    #[arg(long)]
    pub contraction_order: Option<String>,
    /// List suite ids and their checks instead of running them.
    #[arg(long)]
    pub list: bool,
}

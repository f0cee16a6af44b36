use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cubeharm", version, about = "Exact invariants and mean-value checks for cube skeletons")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format. Machine formats never render rationals as decimals.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute c_{n,m}^{(k)} by one route or all of them.
    Coeff(CoeffArgs),
    /// Emit every c_{n,m}^{(k)} with 1 <= m <= n <= N.
    Table(TableArgs),
    /// Print a generating polynomial.
    Gen(GenArgs),
    /// List Bernoulli numbers B_m and b_m.
    Bernoulli(BernoulliArgs),
    /// Print one of the invariant polynomials.
    Invariant(InvariantArgs),
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub k: usize,
    /// A route name, or `all`.
    #[arg(long, default_value = "all")]
    pub route: String,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub n: usize,
    /// Largest accepted N.
    #[arg(long, default_value_t = 6)]
    pub max_n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenWhat {
    #[value(name = "G")]
    G,
    #[value(name = "Ghat")]
    Ghat,
    #[value(name = "F")]
    F,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub m: usize,
    /// Defaults to m.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = GenWhat::G)]
    pub what: GenWhat,
}

#[derive(Debug, Args)]
pub struct BernoulliArgs {
    #[arg(long, default_value_t = 10)]
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InvariantWhat {
    H,
    G,
    Tau,
    E,
    Delta,
    /// The e-basis expansion of tau_{2m}.
    Expansion,
}

#[derive(Debug, Args)]
pub struct InvariantArgs {
    #[arg(long, value_enum)]
    pub what: InvariantWhat,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// Degree for h, g and tau; index m for e and expansion.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Series identities for the generating polynomials.
    Identities {
        #[arg(long, default_value_t = 16)]
        order: usize,
    },
    /// Mean value property for one polynomial.
    Mvp {
        #[arg(long)]
        n: usize,
        /// Skeleton dimension; all k when omitted.
        #[arg(long)]
        k: Option<usize>,
        /// Polynomial file in the canonical JSON term-list form.
        #[arg(long, conflicts_with = "delta")]
        f: Option<PathBuf>,
        /// Use the alternating polynomial of the cube group.
        #[arg(long)]
        delta: bool,
        /// Also run the full derivative-module suite.
        #[arg(long)]
        basis: bool,
        #[command(flatten)]
        large: LargeOptIn,
    },
    /// Dimension of the derivative module of the alternating polynomial.
    Dimension {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        large: LargeOptIn,
    },
    /// tau_{2m}^{(k)}(∂) annihilates the alternating polynomial, for all m <= n and k.
    Annihilation {
        #[arg(long)]
        n: usize,
    },
    /// Every coefficient route agrees on 1 <= m <= n <= N.
    Routes {
        #[arg(long)]
        n: usize,
        /// Include the symbolic oracle up to this n.
        #[arg(long, default_value_t = 3)]
        oracle_max: usize,
    },
}

#[derive(Clone, Copy, Debug, Args)]
pub struct LargeOptIn {
    /// Allow n = 4 in the harmonic suites (slow).
    #[arg(long)]
    pub allow_n4: bool,
}

impl LargeOptIn {
    pub fn max_n(self) -> usize {
        if self.allow_n4 {
            4
        } else {
            cubeharm::harmonics::DEFAULT_MAX_N
        }
    }
}

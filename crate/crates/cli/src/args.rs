use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "metriclab",
    version,
    about = "Metric-space analyses on finite and sampled spaces"
)]
pub struct Cli {
    /// Worker threads for the parallel scans (default: available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Emit key-sorted JSON (default).
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,

    /// Emit a plain-text summary instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,

    /// Include `duration_ms` in the report. Off by default so output is
    /// byte-reproducible.
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the metric axioms of a space file.
    Validate(SpaceArg),
    /// ε-chains, ε-components, chainability threshold, finite chainability.
    Chains(ChainsArgs),
    /// Greedy ε-nets, maximal ε-separated sets, covering profiles.
    Nets(NetsArgs),
    /// Cover coverage, Lebesgue numbers, local finiteness, subcovers.
    Cover(CoverArgs),
    /// Spectra and property P, Menger and metric convexity checks.
    Convexity(ConvexityArgs),
    /// List or run the example bundles.
    Examples(ExamplesArgs),
    /// Run every example bundle at a preset resolution.
    VerifyPaper(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SpaceArg {
    #[arg(long)]
    pub space: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("analysis").required(true).multiple(false)
    .args(["threshold", "chain", "components", "profile", "finite"])))]
pub struct ChainsArgs {
    #[arg(long)]
    pub space: PathBuf,
    /// Least ε at which the space is one ε-component.
    #[arg(long)]
    pub threshold: bool,
    /// Shortest ε-chain between two points (index or label).
    #[arg(long, num_args = 2, value_names = ["X", "Y"])]
    pub chain: Option<Vec<String>>,
    /// ε-components at `--eps`.
    #[arg(long)]
    pub components: bool,
    /// Components at every scale in `--eps-list`.
    #[arg(long)]
    pub profile: bool,
    /// Finite chainability of `--target` at `--eps` with `--m` steps.
    #[arg(long)]
    pub finite: bool,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub eps_list: Option<Vec<f64>>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Comma-separated points (index or label).
    #[arg(long, value_delimiter = ',')]
    pub centers: Option<Vec<String>>,
    /// Comma-separated points (index or label); default: the whole space.
    #[arg(long, value_delimiter = ',')]
    pub target: Option<Vec<String>>,
    /// Chains may not leave the target.
    #[arg(long)]
    pub target_only: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("analysis").required(true).multiple(false)
    .args(["net", "packing", "profile"])))]
pub struct NetsArgs {
    #[arg(long)]
    pub space: PathBuf,
    /// Greedy farthest-point ε-net.
    #[arg(long)]
    pub net: bool,
    /// Maximal ε-separated subset.
    #[arg(long)]
    pub packing: bool,
    /// Net and packing sizes for every scale in `--eps-list`.
    #[arg(long)]
    pub profile: bool,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub eps_list: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub target: Option<Vec<String>>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("analysis").required(true).multiple(false)
    .args(["check", "lebesgue", "witness", "local", "subcover"])))]
pub struct CoverArgs {
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long)]
    pub cover: PathBuf,
    /// Does the cover cover its target?
    #[arg(long)]
    pub check: bool,
    /// Ball bound, exact value and witness.
    #[arg(long)]
    pub lebesgue: bool,
    /// Power-set enumeration instead of the bad-set search (small targets).
    #[arg(long, requires = "lebesgue")]
    pub brute: bool,
    /// Node limit for the bad-set search.
    #[arg(long, requires = "lebesgue")]
    pub limit: Option<u64>,
    /// A bad set of diameter below `--alpha`.
    #[arg(long)]
    pub witness: bool,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Members meeting each open `--delta`-ball.
    #[arg(long)]
    pub local: bool,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Greedy finite subcover of `--set`.
    #[arg(long)]
    pub subcover: bool,
    #[arg(long, value_delimiter = ',')]
    pub set: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConvexityCheck {
    PropertyP,
    Menger,
    Metric,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("analysis").required(true).multiple(false)
    .args(["spectrum", "check", "menger_gap"])))]
pub struct ConvexityArgs {
    #[arg(long)]
    pub space: PathBuf,
    /// Distance spectrum from one basepoint.
    #[arg(long, value_name = "X")]
    pub spectrum: Option<String>,
    #[arg(long, value_enum)]
    pub check: Option<ConvexityCheck>,
    /// First uncovered Menger radius for one pair.
    #[arg(long, num_args = 2, value_names = ["X", "Y"])]
    pub menger_gap: Option<Vec<String>>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).multiple(false).args(["list", "run"])))]
pub struct ExamplesArgs {
    #[arg(long)]
    pub list: bool,
    #[arg(long, value_name = "NAME")]
    pub run: Option<String>,
    /// Parameter override `key=value`; repeatable.
    #[arg(long = "param", value_name = "K=V", requires = "run")]
    pub params: Vec<String>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("scale").multiple(false).args(["small", "medium", "large"])))]
pub struct VerifyArgs {
    /// N≈32 (default).
    #[arg(long)]
    pub small: bool,
    /// N≈128.
    #[arg(long)]
    pub medium: bool,
    /// N≈512.
    #[arg(long)]
    pub large: bool,
    /// Test hook: force the named claim (`bundle/claim`) to fail.
    #[arg(long, hide = true, value_name = "CLAIM")]
    pub corrupt_tolerance: Vec<String>,
}

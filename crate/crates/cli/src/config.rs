//! Run configuration: the parsed command line, serializable so every report
//! can echo what produced it.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MethodArg {
    Kernel,
    Pairs,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CoeffDomain {
    /// Coefficients range over the whole field.
    Full,
    /// Coefficients restricted to the base field.
    Base,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Show {
    Phi,
    Eta,
    Mbar,
    #[value(name = "M")]
    #[serde(rename = "M")]
    M,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SieveKind {
    /// Quotient bound from the one-dimensional semilinear case.
    GammaL1,
    /// Orbit divisibility on a `d/2`-spread; needs even `d`.
    Spread,
}

/// Flags shared by every subcommand.
#[derive(Clone, Debug, Default, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct Global {
    /// Field tower, e.g. `2^[4]` or `3^[2,2]`.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    /// Tower level of the base field `F_q`; defaults to the level below the top.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_level: Option<usize>,
    /// Index ℓ; `search` also accepts ranges such as `0..3`.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<String>,
    /// Polynomial literal or family.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    #[serde(default)]
    pub format: Format,
    /// Zero all timings so that reports are byte-comparable.
    #[arg(long, global = true)]
    #[serde(default)]
    pub reproducible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct TestArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Kernel)]
    pub method: MethodArg,
    /// Also intersect `U_f` with the Desarguesian spread.
    #[arg(long)]
    #[serde(default)]
    pub uf: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct SearchArgs {
    /// Largest q-degree k.
    #[arg(long)]
    pub k_max: u32,
    /// Smallest q-degree k.
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub k_min: u32,
    #[arg(long, value_enum, default_value_t = CoeffDomain::Full)]
    pub coeffs: CoeffDomain,
    /// Refuse to run when more candidates than this would be tested.
    #[arg(long, default_value_t = 2_000_000)]
    pub max_candidates: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct ProbeArgs {
    /// Largest extension multiplier m.
    #[arg(long, default_value_t = 3)]
    pub depth: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct EmbedArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = Show::All)]
    pub show: Show,
    /// Element of `F_(q^m)` for `phi`; defaults to the primitive element.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    /// `n × n` matrix over `F_(q^m)` for `eta`, as rows of element tuples;
    /// defaults to the identity.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct CertifyArgs {
    #[arg(long)]
    pub q: u64,
    /// Dimension of the classical group.
    #[arg(long)]
    pub e: u32,
    /// Dimension over `F_q`; `e` must divide it.
    #[arg(long)]
    pub d: u32,
    #[arg(long, default_value_t = 100)]
    pub samples: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertifyKind {
    /// `α ∈ SL(e, q^(d/e))` with `rank(η(α∘γ) - I) ≤ d - 2` for random `γ`.
    Sl(CertifyArgs),
    /// `B ∈ Sp(e, q^(d/e))` with `rank(η(M∘B) - I) ≤ d - e/2` for random `M`.
    Sp(CertifyArgs),
}

#[derive(Clone, Debug, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct SieveArgs {
    /// Values of q, e.g. `3` or `2,3,4,5`.
    #[arg(long)]
    pub q: String,
    /// Values of d = max(k, ℓ), e.g. `3..11`.
    #[arg(long)]
    pub d: String,
    #[arg(long, conflicts_with = "even_only")]
    #[serde(default)]
    pub odd_only: bool,
    #[arg(long)]
    #[serde(default)]
    pub even_only: bool,
    #[arg(long, value_enum, default_value_t = SieveKind::GammaL1)]
    pub kind: SieveKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct FamiliesArgs {
    /// Also test every listed member with the kernel method.
    #[arg(long)]
    #[serde(default)]
    pub test: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Test one polynomial for scatteredness of index ℓ.
    Test(TestArgs),
    /// Enumerate monic ℓ-normalized polynomials and test each.
    Search(SearchArgs),
    /// Test a polynomial over the extensions `F_(q^(n·m))`, `m = 1..=depth`.
    Probe(ProbeArgs),
    /// Print the matrices of the natural embedding of `GL(n, q^m)` in `GL(nm, q)`.
    Embed(EmbedArgs),
    /// Build and verify rank certificates on seeded random elements.
    #[command(subcommand)]
    Certify(CertifyKind),
    /// Run a divisibility sieve over a grid of `(q, k, ℓ)`.
    Sieve(SieveArgs),
    /// List the pseudoregulus and LP members over a field.
    Families(FamiliesArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Test(_) => "test",
            Command::Search(_) => "search",
            Command::Probe(_) => "probe",
            Command::Embed(_) => "embed",
            Command::Certify(CertifyKind::Sl(_)) => "certify sl",
            Command::Certify(CertifyKind::Sp(_)) => "certify sp",
            Command::Sieve(_) => "sieve",
            Command::Families(_) => "families",
        }
    }
}

/// Scatteredness experiments on linearized polynomials over finite fields.
#[derive(Clone, Debug, PartialEq, Eq, Parser, Serialize, Deserialize)]
#[command(name = "scatterlab", version)]
pub struct RunConfig {
    #[command(flatten)]
    #[serde(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

impl RunConfig {
    /// The configuration as echoed in reports: the worker count is dropped so
    /// that output does not depend on it.
    pub fn reported(&self) -> RunConfig {
        let mut c = self.clone();
        c.global.jobs = None;
        c
    }
}

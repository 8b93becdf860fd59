//! Command-line grammar and the validated run configuration.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use kzm_core::lie::{Series, Weight};
use kzm_core::numerics::C64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] kzm_core::Error),
}

impl ConfigError {
    pub fn kind(&self) -> &'static str {
        match self {
            ConfigError::Validation(_) => "validation",
            ConfigError::Core(e) => e.kind(),
        }
    }
}

/// Comma separated integers; empty items are rejected so `5,` fails to parse.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|item| {
            let item = item.trim();
            item.parse::<i64>()
                .map_err(|_| format!("'{item}' is not an integer in list '{s}'"))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntList(pub Vec<i64>);

pub fn parse_int_list_arg(s: &str) -> Result<IntList, String> {
    parse_int_list(s).map(IntList)
}

/// `"p,q;p,q"` pairs of integers.
pub fn parse_pairs(s: &str) -> Result<Vec<(i64, i64)>, String> {
    s.split(';')
        .filter(|g| !g.trim().is_empty())
        .map(|g| match parse_int_list(g)?.as_slice() {
            [p, q] => Ok((*p, *q)),
            _ => Err(format!("'{g}' is not a pair p,q")),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairList(pub Vec<(i64, i64)>);

pub fn parse_pairs_arg(s: &str) -> Result<PairList, String> {
    parse_pairs(s).map(PairList)
}

/// Weight list: `;` separates weights; without `;` a rank-1 list is read
/// as one label per weight.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSpec {
    pub groups: Vec<Vec<i64>>,
    pub separated: bool,
}

pub fn parse_weight_spec(s: &str) -> Result<WeightSpec, String> {
    let separated = s.contains(';');
    let groups = if separated {
        s.split(';')
            .filter(|g| !g.trim().is_empty())
            .map(parse_int_list)
            .collect::<Result<_, _>>()?
    } else {
        vec![parse_int_list(s)?]
    };
    Ok(WeightSpec { groups, separated })
}

fn parse_real(s: &str) -> Result<f64, String> {
    if let Some((n, d)) = s.split_once('/') {
        let n: f64 = n.trim().parse().map_err(|_| format!("bad numerator in '{s}'"))?;
        let d: f64 = d.trim().parse().map_err(|_| format!("bad denominator in '{s}'"))?;
        return Ok(n / d);
    }
    s.parse::<f64>().map_err(|_| format!("'{s}' is not a number"))
}

/// Parse `a`, `a/b`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(C64::new(parse_real(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => parse_real(x)?,
    };
    Ok(C64::new(re, im))
}

#[derive(Debug, Parser)]
#[command(name = "kzm", version, about = "KZ connections, Sugawara checks and fusion ranks")]
pub struct Cli {
    /// Render the report as an indented table instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structure data of a simple Lie algebra.
    Algebra {
        #[command(subcommand)]
        action: AlgebraCommand,
    },
    /// Irreducible representations.
    Rep {
        #[command(subcommand)]
        action: RepCommand,
    },
    /// Invariants of a tensor product.
    Invariants(InvariantsArgs),
    /// KZ connection: flatness and braid monodromy.
    Kz {
        #[command(subcommand)]
        action: KzCommand,
    },
    /// Sugawara identities on truncated affine sl_2 modules.
    Sugawara {
        #[command(subcommand)]
        action: SugawaraCommand,
    },
    /// Residue pairings against the closed form.
    Symbols {
        #[command(subcommand)]
        action: SymbolsCommand,
    },
    /// Conformal-block ranks from the fusion rules.
    Verlinde(VerlindeArgs),
    /// Seeded run of the property suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct AlgebraSelect {
    #[arg(long, default_value = "A")]
    pub series: String,
    #[arg(long, default_value_t = 1)]
    pub rank: usize,
}

#[derive(Debug, Subcommand)]
pub enum AlgebraCommand {
    Info {
        #[command(flatten)]
        algebra: AlgebraSelect,
        #[arg(long)]
        level: Option<i64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RepCommand {
    Build {
        #[command(flatten)]
        algebra: AlgebraSelect,
        #[arg(long, value_parser = parse_int_list_arg, allow_hyphen_values = true)]
        weight: IntList,
        /// Write the generator matrices to this file.
        #[arg(long, value_name = "PATH")]
        emit: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct InvariantsArgs {
    #[command(flatten)]
    pub algebra: AlgebraSelect,
    /// Highest weights, `;`-separated for rank > 1 (e.g. "1,0;0,1").
    #[arg(long, value_parser = parse_weight_spec, allow_hyphen_values = true)]
    pub weights: WeightSpec,
    /// Accepted for compatibility; output is always JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ModeFlags {
    #[arg(long, conflicts_with = "float")]
    pub exact: bool,
    #[arg(long)]
    pub float: bool,
}

#[derive(Debug, Subcommand)]
pub enum KzCommand {
    Flatness {
        #[command(flatten)]
        algebra: AlgebraSelect,
        #[arg(long, value_parser = parse_weight_spec, allow_hyphen_values = true)]
        weights: WeightSpec,
        #[command(flatten)]
        mode: ModeFlags,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        kappa: Option<C64>,
    },
    Monodromy {
        #[command(flatten)]
        algebra: AlgebraSelect,
        #[arg(long, value_parser = parse_weight_spec, allow_hyphen_values = true)]
        weights: WeightSpec,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        kappa: C64,
        /// Generators such as "A12" or "A12,A23", or "full" for the full twist.
        #[arg(long, default_value = "A12")]
        braid: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        mode: ModeFlags,
        #[arg(long, value_name = "PATH")]
        emit: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SugawaraCommand {
    Check {
        #[arg(long)]
        level: i64,
        #[arg(long)]
        weight: i64,
        #[arg(long)]
        depth: usize,
        /// Virasoro pairs as "p,q;p,q"; defaults to all |p|, |q| <= 2.
        #[arg(long, value_parser = parse_pairs_arg, allow_hyphen_values = true)]
        pairs: Option<PairList>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SymbolsCommand {
    Check {
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct VerlindeArgs {
    #[arg(long)]
    pub level: i64,
    #[arg(long, value_parser = parse_int_list_arg, allow_hyphen_values = true)]
    pub weights: IntList,
    #[arg(long, default_value_t = 10)]
    pub scan_levels: i64,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithmeticMode {
    Exact,
    Float,
}

/// Validated parameters shared by the commands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub series: Series,
    pub rank: usize,
    pub weights: Vec<Weight>,
    pub level: Option<i64>,
    pub kappa: Option<C64>,
    pub tolerance: Option<f64>,
    pub mode: ArithmeticMode,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(output: Option<PathBuf>) -> Self {
        Self {
            series: Series::A,
            rank: 1,
            weights: Vec::new(),
            level: None,
            kappa: None,
            tolerance: None,
            mode: ArithmeticMode::Exact,
            seed: None,
            output,
        }
    }

    pub fn with_algebra(mut self, sel: &AlgebraSelect) -> Result<Self, ConfigError> {
        self.series = Series::from_str(&sel.series)?;
        if sel.rank == 0 {
            return Err(ConfigError::Validation("rank must be at least 1".into()));
        }
        self.rank = sel.rank;
        Ok(self)
    }

    pub fn with_weight_spec(self, spec: &WeightSpec) -> Result<Self, ConfigError> {
        let groups = if self.rank == 1 && !spec.separated {
            spec.groups.concat().into_iter().map(|m| vec![m]).collect()
        } else {
            spec.groups.iter().filter(|g| !g.is_empty()).cloned().collect()
        };
        self.with_weights(groups)
    }

    pub fn with_weights(mut self, groups: Vec<Vec<i64>>) -> Result<Self, ConfigError> {
        for g in &groups {
            if g.len() != self.rank {
                return Err(ConfigError::Validation(format!(
                    "weight {g:?} has {} entries, expected {}",
                    g.len(),
                    self.rank
                )));
            }
            if g.iter().any(|&x| x < 0) {
                return Err(ConfigError::Validation(format!(
                    "weight {g:?} has negative entries; weights are nonnegative integers"
                )));
            }
        }
        self.weights = groups.into_iter().map(Weight).collect();
        Ok(self)
    }

    pub fn with_labels(self, labels: &[i64]) -> Result<Self, ConfigError> {
        self.with_weights(labels.iter().map(|&m| vec![m]).collect())
    }

    pub fn with_level(mut self, level: i64) -> Result<Self, ConfigError> {
        if level < 1 {
            return Err(ConfigError::Validation(format!("level must be positive, got {level}")));
        }
        self.level = Some(level);
        Ok(self)
    }

    pub fn with_kappa(mut self, kappa: C64) -> Result<Self, ConfigError> {
        if kappa == C64::new(0.0, 0.0) || !kappa.re.is_finite() || !kappa.im.is_finite() {
            return Err(ConfigError::Validation("kappa must be a nonzero finite number".into()));
        }
        self.kappa = Some(kappa);
        Ok(self)
    }

    pub fn with_tolerance(mut self, tol: f64) -> Result<Self, ConfigError> {
        if !(tol > 0.0 && tol <= 1e-2) {
            return Err(ConfigError::Validation(format!("tolerance {tol} outside (0, 1e-2]")));
        }
        self.tolerance = Some(tol);
        Ok(self)
    }

    pub fn with_mode(mut self, flags: &ModeFlags) -> Self {
        self.mode = if flags.float {
            ArithmeticMode::Float
        } else {
            ArithmeticMode::Exact
        };
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

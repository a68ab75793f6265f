//! Flat `key = value` experiment configuration with dotted keys.
//!
//! A config file is parsed into raw entries first; command-line flags overwrite entries by key,
//! and only then is the whole map resolved into an [`ExperimentConfig`]. The canonical echo
//! produced by [`ExperimentConfig::to_entries`] resolves back to an identical config.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;
use twistspec_core::limits::{DEFAULT_LOCUS_GRID, DEFAULT_LOCUS_TOLERANCE, DEFAULT_SECTION};
use twistspec_core::measures::DEFAULT_ANGLES;
use twistspec_core::potential::DEFAULT_QUADRATURE_NODES;
use twistspec_core::{presets, LaurentSymbol, NoiseDist, NoiseSpec, Sigma, TridiagonalSymbol};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    #[error("bad value for `{key}`: {message}")]
    Invalid { key: String, message: String },

    #[error("cannot read config `{path}`: {message}")]
    Io { path: String, message: String },
}

fn invalid(key: &str, message: impl fmt::Display) -> ConfigError {
    ConfigError::Invalid { key: key.to_string(), message: message.to_string() }
}

/// Which random matrix family to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `T_n(a)` on the uniform grid.
    Deterministic,
    /// `T_n(a) + sigma_n X_n`.
    Perturbed,
    /// `T_n(a)` sampled at sorted uniform points.
    Randomized,
}

impl Mode {
    pub fn tag(self) -> &'static str {
        match self {
            Mode::Deterministic => "deterministic",
            Mode::Perturbed => "perturbed",
            Mode::Randomized => "randomized",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "deterministic" => Ok(Mode::Deterministic),
            "perturbed" => Ok(Mode::Perturbed),
            "randomized" => Ok(Mode::Randomized),
            _ => Err(format!("expected deterministic, perturbed or randomized, got `{s}`")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// How the symbol is given.
#[derive(Debug, Clone, PartialEq)]
pub enum SymbolSpec {
    Preset(String),
    /// `d z^-1 + b + c z`.
    Tridiagonal {
        d: String,
        b: String,
        c: String,
    },
    /// Coefficient expression per power of `z`.
    Coefficients(BTreeMap<i32, String>),
}

impl SymbolSpec {
    pub fn build(&self) -> Result<LaurentSymbol, ConfigError> {
        match self {
            SymbolSpec::Preset(name) => presets::by_name(name).map_err(|e| invalid("symbol.preset", e)),
            SymbolSpec::Tridiagonal { d, b, c } => {
                TridiagonalSymbol::parse(d, b, c).map(|s| s.to_laurent()).map_err(|e| invalid("symbol", e))
            }
            SymbolSpec::Coefficients(map) => {
                let pairs: Vec<(i32, &str)> = map.iter().map(|(k, v)| (*k, v.as_str())).collect();
                LaurentSymbol::from_pairs(&pairs).map_err(|e| invalid("symbol.coeff", e))
            }
        }
    }
}

/// Settings of the `limit` subcommand and of the limit-measure proxy for banded symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitSettings {
    /// Number of draws from the limit measure of a tridiagonal symbol.
    pub samples: usize,
    /// `x` values whose frozen root loci are traced.
    pub x: Vec<f64>,
    /// Cells per side of the root-locus grid.
    pub grid: usize,
    pub tolerance: f64,
    /// Size of the frozen Toeplitz sections.
    pub section: usize,
    /// Number of `x` intervals in the frozen-spectrum mixture used for banded symbols.
    pub slices: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSettings {
    /// Nodes per side of the `z` grid.
    pub grid: usize,
    /// The `x` at which the pointwise exponent is tabulated.
    pub x: f64,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub symbol: SymbolSpec,
    pub n: Vec<usize>,
    pub sigma: Sigma,
    pub noise: NoiseSpec,
    pub mode: Mode,
    pub seed: u64,
    pub angles: usize,
    pub balance: bool,
    pub out: PathBuf,
    pub limit: LimitSettings,
    pub potential: PotentialSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            symbol: SymbolSpec::Preset("fig1".into()),
            n: vec![500],
            sigma: Sigma::InverseN,
            noise: NoiseSpec::default(),
            mode: Mode::Perturbed,
            seed: 0,
            angles: DEFAULT_ANGLES,
            balance: true,
            out: PathBuf::from("out"),
            limit: LimitSettings {
                samples: 100_000,
                x: vec![0.0, 0.25, 0.5, 0.75, 1.0],
                grid: DEFAULT_LOCUS_GRID,
                tolerance: DEFAULT_LOCUS_TOLERANCE,
                section: DEFAULT_SECTION,
                slices: 32,
            },
            potential: PotentialSettings { grid: 41, x: 0.5, nodes: DEFAULT_QUADRATURE_NODES },
        }
    }
}

/// Raw key/value pairs in key order.
pub type Entries = BTreeMap<String, String>;

/// Splits config text into entries. Blank lines and lines starting with `#` are skipped.
pub fn parse_entries(text: &str) -> Result<Entries, ConfigError> {
    let mut entries = Entries::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: idx + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax { line: idx + 1, message: "empty key".into() });
        }
        if entries.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(ConfigError::Syntax { line: idx + 1, message: format!("duplicate key `{key}`") });
        }
    }
    Ok(entries)
}

pub fn read_entries(path: &std::path::Path) -> Result<Entries, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_entries(&text)
}

/// Sets `symbol.preset`, dropping every other symbol key.
pub fn set_preset(entries: &mut Entries, name: &str) {
    entries.retain(|k, _| !k.starts_with("symbol."));
    entries.insert("symbol.preset".into(), name.into());
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse::<T>().map_err(|e| invalid(key, e))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(invalid(key, format!("expected true or false, got `{value}`"))),
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: fmt::Display,
{
    let items: Vec<T> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(key, s))
        .collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err(invalid(key, "empty list"));
    }
    Ok(items)
}

fn positive(key: &str, v: usize) -> Result<usize, ConfigError> {
    if v == 0 {
        return Err(invalid(key, "must be at least 1"));
    }
    Ok(v)
}

fn resolve_symbol(entries: &Entries) -> Result<Option<SymbolSpec>, ConfigError> {
    let preset = entries.get("symbol.preset");
    let tri: Vec<&str> =
        ["symbol.d", "symbol.b", "symbol.c"].into_iter().filter(|k| entries.contains_key(*k)).collect();
    let mut coeffs = BTreeMap::new();
    for (k, v) in entries.range("symbol.coeff.".to_string()..) {
        let Some(power) = k.strip_prefix("symbol.coeff.") else { break };
        coeffs.insert(parse_value::<i32>(k, power)?, v.clone());
    }
    let kinds = preset.is_some() as usize + !tri.is_empty() as usize + !coeffs.is_empty() as usize;
    if kinds > 1 {
        return Err(invalid("symbol", "give exactly one of symbol.preset, symbol.d/b/c or symbol.coeff.<power>"));
    }
    let get = |k: &str| entries.get(k).cloned().unwrap_or_else(|| "0".into());
    Ok(if let Some(name) = preset {
        Some(SymbolSpec::Preset(name.clone()))
    } else if !tri.is_empty() {
        Some(SymbolSpec::Tridiagonal { d: get("symbol.d"), b: get("symbol.b"), c: get("symbol.c") })
    } else if !coeffs.is_empty() {
        Some(SymbolSpec::Coefficients(coeffs))
    } else {
        None
    })
}

fn resolve_noise(entries: &Entries) -> Result<NoiseSpec, ConfigError> {
    let mut spec = NoiseSpec::default();
    let dist = entries.get("noise.dist").map(String::as_str).unwrap_or("paper-binomial");
    let allowed: &[&str] = match dist {
        "paper-binomial" => {
            let trials = match entries.get("noise.trials") {
                Some(v) => parse_value::<u64>("noise.trials", v)?,
                None => 512,
            };
            let center = match entries.get("noise.center") {
                Some(v) => parse_value::<f64>("noise.center", v)?,
                None => trials as f64 / 2.0,
            };
            spec.dist = NoiseDist::PaperBinomial { trials, center };
            &["noise.trials", "noise.center"]
        }
        "standard-normal" => {
            spec.dist = NoiseDist::StandardNormal;
            &[]
        }
        "rademacher" => {
            spec.dist = NoiseDist::Rademacher;
            &[]
        }
        "uniform-sym" => {
            let half_width = match entries.get("noise.half_width") {
                Some(v) => parse_value::<f64>("noise.half_width", v)?,
                None => 1.0,
            };
            if !(half_width.is_finite() && half_width > 0.0) {
                return Err(invalid("noise.half_width", "must be positive"));
            }
            spec.dist = NoiseDist::UniformSym { half_width };
            &["noise.half_width"]
        }
        other => {
            return Err(invalid(
                "noise.dist",
                format!("expected paper-binomial, standard-normal, rademacher or uniform-sym, got `{other}`"),
            ))
        }
    };
    for key in ["noise.trials", "noise.center", "noise.half_width"] {
        if entries.contains_key(key) && !allowed.contains(&key) {
            return Err(invalid(key, format!("not a parameter of `{dist}` noise")));
        }
    }
    if let Some(v) = entries.get("noise.complex") {
        spec.complex = parse_bool("noise.complex", v)?;
    }
    Ok(spec)
}

impl ExperimentConfig {
    /// Resolves raw entries on top of the defaults. Unknown keys are rejected.
    pub fn from_entries(entries: &Entries) -> Result<Self, ConfigError> {
        let mut cfg = ExperimentConfig::default();
        if let Some(symbol) = resolve_symbol(entries)? {
            cfg.symbol = symbol;
        }
        cfg.noise = resolve_noise(entries)?;
        for (key, value) in entries {
            let key = key.as_str();
            let value = value.as_str();
            match key {
                k if k.starts_with("symbol.") || k.starts_with("noise.") => {
                    let known = matches!(
                        k,
                        "symbol.preset"
                            | "symbol.d"
                            | "symbol.b"
                            | "symbol.c"
                            | "noise.dist"
                            | "noise.complex"
                            | "noise.trials"
                            | "noise.center"
                            | "noise.half_width"
                    ) || k.starts_with("symbol.coeff.");
                    if !known {
                        return Err(ConfigError::UnknownKey(k.into()));
                    }
                }
                "n" => {
                    cfg.n = parse_list::<usize>(key, value)?;
                    for &n in &cfg.n {
                        positive(key, n)?;
                    }
                }
                "sigma" => cfg.sigma = parse_value(key, value)?,
                "mode" => cfg.mode = parse_value(key, value)?,
                "seed" => cfg.seed = parse_value(key, value)?,
                "compare.angles" => cfg.angles = positive(key, parse_value(key, value)?)?,
                "balance" => cfg.balance = parse_bool(key, value)?,
                "out" => cfg.out = PathBuf::from(value),
                "limit.samples" => cfg.limit.samples = positive(key, parse_value(key, value)?)?,
                "limit.x" => {
                    cfg.limit.x = parse_list::<f64>(key, value)?;
                    if cfg.limit.x.iter().any(|x| !(0.0..=1.0).contains(x)) {
                        return Err(invalid(key, "x values must lie in [0, 1]"));
                    }
                }
                "limit.grid" => cfg.limit.grid = positive(key, parse_value(key, value)?)?,
                "limit.tolerance" => {
                    cfg.limit.tolerance = parse_value(key, value)?;
                    if !(cfg.limit.tolerance > 0.0 && cfg.limit.tolerance < 1.0) {
                        return Err(invalid(key, "must lie in (0, 1)"));
                    }
                }
                "limit.section" => cfg.limit.section = positive(key, parse_value(key, value)?)?,
                "limit.slices" => cfg.limit.slices = positive(key, parse_value(key, value)?)?,
                "potential.grid" => {
                    cfg.potential.grid = parse_value(key, value)?;
                    if cfg.potential.grid < 2 {
                        return Err(invalid(key, "must be at least 2"));
                    }
                }
                "potential.x" => {
                    cfg.potential.x = parse_value(key, value)?;
                    if !(0.0..=1.0).contains(&cfg.potential.x) {
                        return Err(invalid(key, "must lie in [0, 1]"));
                    }
                }
                "potential.nodes" => cfg.potential.nodes = positive(key, parse_value(key, value)?)?,
                _ => return Err(ConfigError::UnknownKey(key.into())),
            }
        }
        cfg.symbol.build()?;
        Ok(cfg)
    }

    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        Self::from_entries(&parse_entries(text)?)
    }

    pub fn symbol(&self) -> Result<LaurentSymbol, ConfigError> {
        self.symbol.build()
    }

    /// Canonical, complete set of entries. Floats use the shortest round-trip representation.
    pub fn to_entries(&self) -> Entries {
        let mut e = Entries::new();
        let mut put = |k: &str, v: String| {
            e.insert(k.to_string(), v);
        };
        match &self.symbol {
            SymbolSpec::Preset(name) => put("symbol.preset", name.clone()),
            SymbolSpec::Tridiagonal { d, b, c } => {
                put("symbol.d", d.clone());
                put("symbol.b", b.clone());
                put("symbol.c", c.clone());
            }
            SymbolSpec::Coefficients(map) => {
                for (k, v) in map {
                    put(&format!("symbol.coeff.{k}"), v.clone());
                }
            }
        }
        put("n", self.n.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
        put("sigma", self.sigma.to_string());
        put("noise.dist", self.noise.dist.tag().into());
        put("noise.complex", self.noise.complex.to_string());
        match self.noise.dist {
            NoiseDist::PaperBinomial { trials, center } => {
                put("noise.trials", trials.to_string());
                put("noise.center", format!("{center:?}"));
            }
            NoiseDist::UniformSym { half_width } => put("noise.half_width", format!("{half_width:?}")),
            NoiseDist::StandardNormal | NoiseDist::Rademacher => {}
        }
        put("mode", self.mode.to_string());
        put("seed", self.seed.to_string());
        put("compare.angles", self.angles.to_string());
        put("balance", self.balance.to_string());
        put("out", self.out.display().to_string());
        put("limit.samples", self.limit.samples.to_string());
        put("limit.x", self.limit.x.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(","));
        put("limit.grid", self.limit.grid.to_string());
        put("limit.tolerance", format!("{:?}", self.limit.tolerance));
        put("limit.section", self.limit.section.to_string());
        put("limit.slices", self.limit.slices.to_string());
        put("potential.grid", self.potential.grid.to_string());
        put("potential.x", format!("{:?}", self.potential.x));
        put("potential.nodes", self.potential.nodes.to_string());
        e
    }

    pub fn to_text(&self) -> String {
        self.to_entries().iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

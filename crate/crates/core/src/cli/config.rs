use std::path::{Path, PathBuf};
use std::str::FromStr;

use num::complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::families::{build_family, FamilyKind, FamilySpec, MapSpec, SeriesSpec};
use crate::scalar::{ComplexWide, Scalar};
use crate::sheffer::{build_sheffer, ShefferSequence};

use super::{BoundKind, Cli, Command, FamilyArgs, Format};

/// Inclusive degree range written `start:end`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeRange {
    pub start: usize,
    pub end: usize,
}

impl FromStr for DegreeRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("degree range must be start:end, got {s:?}"));
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        let start = a.trim().parse().map_err(|_| bad())?;
        let end = b.trim().parse().map_err(|_| bad())?;
        if start > end {
            return Err(bad());
        }
        Ok(Self { start, end })
    }
}

impl std::fmt::Display for DegreeRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

impl Serialize for DegreeRange {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DegreeRange {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A fixed denominator level or `auto`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LPrime {
    Auto,
    Level(u32),
}

impl FromStr for LPrime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(Self::Auto);
        }
        s.parse()
            .map(Self::Level)
            .map_err(|_| Error::InvalidSpec(format!("l' must be a level or auto, got {s:?}")))
    }
}

impl Serialize for LPrime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Auto => s.serialize_str("auto"),
            Self::Level(r) => s.serialize_u32(*r),
        }
    }
}

impl<'de> Deserialize<'de> for LPrime {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Level(u32),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Level(r) => Ok(Self::Level(r)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// JSON run configuration. Every present field overrides the matching flag.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Must name the invoked subcommand when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<BoundKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_prime: Option<LPrime>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<DegreeRange>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidSpec(format!("{}: {e}", path.display())))
    }
}

/// Where the sequence comes from.
#[derive(Clone, Debug)]
pub(crate) enum FamilySource {
    Spec(FamilySpec),
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub(crate) struct Settings {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    family: Option<FamilySource>,
    pub input: Option<PathBuf>,
    pub samples: Option<usize>,
    pub check: BoundKind,
    pub alpha: Option<f64>,
    pub l: u32,
    pub l_prime: Option<LPrime>,
    pub beta: Option<f64>,
    pub degrees: Option<DegreeRange>,
}

impl Settings {
    pub fn resolve(cli: &Cli, config: &RunConfig) -> Result<Self> {
        let name = command_name(&cli.command);
        if let Some(c) = &config.command {
            if c != name {
                return Err(Error::InvalidSpec(format!("configuration is for {c:?}, not {name:?}")));
            }
        }
        let (family_args, input, samples, check, alpha, l, l_prime, beta, degrees) = match &cli.command {
            Command::Family(f) | Command::Probe(f) => (Some(f), None, None, None, None, None, None, None, None),
            Command::Expand(t) | Command::Apply(t) => (Some(&t.family), t.input.clone(), None, None, None, None, None, None, None),
            Command::Roundtrip(r) => (Some(&r.family), r.input.clone(), r.samples, None, None, None, None, None, None),
            Command::Bounds(b) => (Some(&b.family), None, b.samples, b.check, b.alpha, b.l, b.l_prime, b.beta, None),
            Command::Diverge(v) => (Some(&v.family), None, None, None, v.alpha, None, v.l_prime, None, v.degrees),
            Command::Check => (None, None, None, None, None, None, None, None, None),
        };
        let family = match (&config.family, &config.sequence) {
            (Some(spec), _) => Some(FamilySource::Spec(spec.clone())),
            (None, Some(path)) => Some(FamilySource::File(path.clone())),
            (None, None) => family_args.map(from_flags).transpose()?.flatten(),
        };
        Ok(Self {
            seed: config.seed.or(cli.seed).unwrap_or(0),
            out: config.out.clone().or_else(|| cli.out.clone()),
            format: config.format.or(cli.format).unwrap_or_default(),
            family,
            input: config.input.clone().or(input),
            samples: config.samples.or(samples),
            check: config.check.or(check).unwrap_or_default(),
            alpha: config.alpha.or(alpha),
            l: config.l.or(l).unwrap_or(0),
            l_prime: config.l_prime.or(l_prime),
            beta: config.beta.or(beta),
            degrees: config.degrees.or(degrees),
        })
    }

    /// Builds or loads the sequence, at truncation order `max_degree` when given.
    pub fn sequence(&self, max_degree: Option<usize>) -> Result<ShefferSequence<Complex64>> {
        match &self.family {
            Some(FamilySource::Spec(s)) => {
                let mut spec = s.clone();
                if let Some(n) = max_degree {
                    spec.max_degree = n;
                }
                build_family(&spec)
            }
            Some(FamilySource::File(path)) => {
                let seq = ShefferSequence::load(path)?;
                match max_degree {
                    Some(n) if n > seq.max_degree() => Err(Error::DegreeOverflow {
                        degree: n,
                        max: seq.max_degree(),
                    }),
                    _ => Ok(seq),
                }
            }
            None => Err(self.missing()),
        }
    }

    /// The same sequence rebuilt over the double-double field from its defining pair.
    pub fn wide_sequence(&self) -> Result<ShefferSequence<ComplexWide>> {
        let seq = self.sequence(None)?;
        build_sheffer(&seq.a().map(Scalar::widen), &seq.rho().map(Scalar::widen), seq.max_degree())
    }

    /// Short label for summaries.
    pub fn family_label(&self) -> String {
        match &self.family {
            Some(FamilySource::Spec(s)) => format!("{} d={} N={}", kind_name(s.kind), s.dim, s.max_degree),
            Some(FamilySource::File(p)) => p.display().to_string(),
            None => "none".into(),
        }
    }

    fn missing(&self) -> Error {
        Error::InvalidSpec("no family given: use --kind, --spec or --sequence".into())
    }
}

pub(crate) fn kind_name(kind: FamilyKind) -> &'static str {
    match kind {
        FamilyKind::Hermite => "hermite",
        FamilyKind::Charlier => "charlier",
        FamilyKind::Laguerre => "laguerre",
        FamilyKind::Falling => "falling",
        FamilyKind::Rising => "rising",
        FamilyKind::Custom => "custom",
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Family(_) => "family",
        Command::Expand(_) => "expand",
        Command::Apply(_) => "apply",
        Command::Roundtrip(_) => "roundtrip",
        Command::Bounds(_) => "bounds",
        Command::Diverge(_) => "diverge",
        Command::Probe(_) => "probe",
        Command::Check => "check",
    }
}

fn from_flags(f: &FamilyArgs) -> Result<Option<FamilySource>> {
    if let Some(path) = &f.spec {
        let text = std::fs::read_to_string(path)?;
        return Ok(Some(FamilySource::Spec(FamilySpec::from_json(&text)?)));
    }
    if let Some(path) = &f.sequence {
        return Ok(Some(FamilySource::File(path.clone())));
    }
    let Some(kind) = f.kind else {
        return Ok(None);
    };
    let mut spec = FamilySpec::new(kind, f.dim.unwrap_or(1), f.max_degree.unwrap_or(10));
    spec.k = f.k;
    if let Some(w) = &f.weights {
        let parsed = w
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidSpec(format!("weights must be comma-separated numbers, got {w:?}")))?;
        spec.weights = Some(parsed);
    }
    if let Some(c) = &f.cov {
        spec.cov = Some(serde_json::from_str(c).map_err(|e| Error::InvalidSpec(format!("covariance: {e}")))?);
    }
    spec.a = f.a.clone().map(MapSpec::Named);
    spec.rho = f.rho.clone().map(SeriesSpec::Named);
    Ok(Some(FamilySource::Spec(spec)))
}

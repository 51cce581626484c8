//! Input files, canonical hashing, the on-disk result cache and the command
//! runner behind the CLI.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::ci::resolution_operators;
use crate::error::{Error, Result};
use crate::groebner::format_zpoly;
use crate::mf::{mf_periodic_resolution, MatrixFactorization, MfJson, UlrichKind, ulrich_example};
use crate::polyring::{Poly, Ring, DEFAULT_CHARACTERISTIC};
use crate::resolution::{minimal_resolution, minor_ideal_chain, CIPresentation, GradedMatrix};
use crate::verify::{self, ExperimentReport};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CACHE_ENV: &str = "CIRES_CACHE";

fn default_characteristic() -> u32 {
    DEFAULT_CHARACTERISTIC
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub matrix: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_twists: Option<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum UlrichSpec {
    LinearProduct { factors: Vec<String> },
    Determinantal { matrix: Vec<Vec<String>> },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
}

/// Contents of an input file. Polynomials are kept as strings; `canonical`
/// rewrites them in normal printed form.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    #[serde(default = "default_characteristic")]
    pub characteristic: u32,
    pub variables: Vec<String>,
    #[serde(default)]
    pub ci: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mf: Option<MfJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ulrich: Option<UlrichSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamSpec>,
}

/// A parsed and validated input.
#[derive(Clone, Debug)]
pub struct Problem {
    pub ring: Ring,
    pub ci: CIPresentation,
    pub module: Option<GradedMatrix>,
    pub mf: Option<MatrixFactorization>,
}

fn parse_all(ring: &Ring, v: &[String], what: &str) -> Result<Vec<Poly>> {
    v.iter()
        .enumerate()
        .map(|(i, s)| ring.parse(s).map_err(|e| Error::Input(format!("{what}[{i}]: {e}"))))
        .collect()
}

fn parse_rows(ring: &Ring, rows: &[Vec<String>], what: &str) -> Result<Vec<Vec<Poly>>> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| parse_all(ring, r, &format!("{what}[{i}]")))
        .collect()
}

fn print_rows(rows: &[Vec<Poly>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(Poly::to_string).collect()).collect()
}

impl InputSpec {
    /// Parses JSON text; errors carry the line and column.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("{e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
    }

    pub fn ring(&self) -> Result<Ring> {
        Ring::new(self.characteristic, &self.variables)
    }

    pub fn build(&self) -> Result<Problem> {
        let ring = self.ring()?;
        let ci = CIPresentation::new(&ring, parse_all(&ring, &self.ci, "ci")?)?;
        let module = match &self.module {
            Some(m) => {
                let entries = parse_rows(&ring, &m.matrix, "module.matrix")?;
                Some(
                    GradedMatrix::with_row_twists(&ring, entries, m.row_twists.clone())
                        .map_err(|e| Error::Input(format!("module.matrix: {e}")))?,
                )
            }
            None => None,
        };
        let mf = match (&self.mf, &self.ulrich) {
            (Some(_), Some(_)) => return Err(Error::Input("give at most one of `mf` and `ulrich`".into())),
            (Some(j), None) => Some(MatrixFactorization::from_json(&ring, j).map_err(|e| Error::Input(format!("mf: {e}")))?),
            (None, Some(u)) => {
                let kind = match u {
                    UlrichSpec::LinearProduct { factors } => UlrichKind::LinearProduct(parse_all(&ring, factors, "ulrich.factors")?),
                    UlrichSpec::Determinantal { matrix } => UlrichKind::Determinantal(parse_rows(&ring, matrix, "ulrich.matrix")?),
                };
                Some(ulrich_example(&ci, &kind).map_err(|e| Error::Input(format!("ulrich: {e}")))?)
            }
            (None, None) => None,
        };
        Ok(Problem { ring, ci, module, mf })
    }

    /// The same input with every polynomial in printed normal form.
    pub fn canonical(&self) -> Result<InputSpec> {
        let ring = self.ring()?;
        let canon = |v: &[String], what: &str| -> Result<Vec<String>> {
            Ok(parse_all(&ring, v, what)?.iter().map(Poly::to_string).collect())
        };
        let canon_rows = |rows: &[Vec<String>], what: &str| -> Result<Vec<Vec<String>>> {
            Ok(print_rows(&parse_rows(&ring, rows, what)?))
        };
        let mut out = self.clone();
        out.ci = canon(&self.ci, "ci")?;
        if let Some(m) = &mut out.module {
            m.matrix = canon_rows(&m.matrix, "module.matrix")?;
        }
        if let Some(m) = &mut out.mf {
            m.f = ring.parse(&m.f)?.to_string();
            m.phi = canon_rows(&m.phi, "mf.phi")?;
            if let Some(p) = &m.psi {
                m.psi = Some(canon_rows(p, "mf.psi")?);
            }
        }
        match &mut out.ulrich {
            Some(UlrichSpec::LinearProduct { factors }) => *factors = canon(factors, "ulrich.factors")?,
            Some(UlrichSpec::Determinantal { matrix }) => *matrix = canon_rows(matrix, "ulrich.matrix")?,
            None => {}
        }
        Ok(out)
    }

    pub fn canonical_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.canonical()?)?)
    }

    /// Hex SHA-256 of the canonical serialization.
    pub fn content_hash(&self) -> Result<String> {
        Ok(hex::encode(Sha256::digest(self.canonical_json()?.as_bytes())))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Resolve,
    Operators,
    Minors,
    Hilbert,
    Mf,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Resolve => "resolve",
            Command::Operators => "operators",
            Command::Minors => "minors",
            Command::Hilbert => "hilbert",
            Command::Mf => "mf",
            Command::Verify => "verify",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Command-line overrides; unset values fall back to the input's `params`
/// and then to the defaults.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Overrides {
    pub length: Option<usize>,
    pub window: Option<usize>,
    pub r_max: Option<usize>,
    pub seed: Option<u64>,
    pub experiment: Option<String>,
    pub format: Option<Format>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Settings {
    pub length: usize,
    pub window: usize,
    pub r_max: usize,
    pub seed: u64,
    pub experiment: String,
    pub format: Format,
}

impl Settings {
    pub fn resolve(spec: &InputSpec, o: &Overrides) -> Settings {
        let p = spec.params.clone().unwrap_or_default();
        Settings {
            length: o.length.or(p.length).unwrap_or(10),
            window: o.window.or(p.window).unwrap_or(6),
            r_max: o.r_max.or(p.r_max).unwrap_or(1),
            seed: o.seed.or(p.seed).unwrap_or(0),
            experiment: o.experiment.clone().or(p.experiment).unwrap_or_else(|| "main".into()),
            format: o.format.unwrap_or(Format::Csv),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub content: String,
}

/// Artifacts of one command and its verdict; `pass = false` means a check
/// ran and failed.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunOutput {
    pub artifacts: Vec<Artifact>,
    pub pass: bool,
}

fn artifact(name: &str, content: String) -> Artifact {
    Artifact { name: name.into(), content }
}

fn json_text<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn require_module(p: &Problem) -> Result<&GradedMatrix> {
    p.module.as_ref().ok_or_else(|| Error::Input("this command needs a `module`".into()))
}

fn require_mf(p: &Problem) -> Result<&MatrixFactorization> {
    p.mf.as_ref().ok_or_else(|| Error::Input("this command needs `mf` or `ulrich`".into()))
}

/// Runs one command on a parsed input.
pub fn run(command: Command, spec: &InputSpec, s: &Settings) -> Result<RunOutput> {
    let p = spec.build()?;
    let hash = spec.content_hash()?;
    match command {
        Command::Resolve => {
            let res = minimal_resolution(require_module(&p)?, &p.ci, s.length)?;
            let a = match s.format {
                Format::Csv => artifact("betti.csv", res.betti_csv()),
                Format::Json => artifact(
                    "resolution.json",
                    json_text(&json!({
                        "betti": res.betti(),
                        "ord": res.ord_profile(),
                        "twists": (0..=res.length()).map(|i| res.twists(i).to_vec()).collect::<Vec<_>>(),
                        "differentials": res.differentials().iter().map(GradedMatrix::to_strings).collect::<Vec<_>>(),
                    }))?,
                ),
            };
            Ok(RunOutput { artifacts: vec![a], pass: true })
        }
        Command::Operators => {
            let res = minimal_resolution(require_module(&p)?, &p.ci, s.length)?;
            let ops = resolution_operators(&res)?;
            let pass = ops.identity_holds()?;
            Ok(RunOutput { artifacts: vec![artifact("operators.json", json_text(&ops.to_json())?)], pass })
        }
        Command::Minors => {
            let res = minimal_resolution(require_module(&p)?, &p.ci, s.length)?;
            let chains = (1..=s.r_max).map(|r| minor_ideal_chain(&res, r)).collect::<Result<Vec<_>>>()?;
            let a = match s.format {
                Format::Csv => {
                    let mut out = String::from("r,i,hash,generators\n");
                    for c in &chains {
                        for i in 1..=res.length() {
                            let gens: Vec<String> = c.ideal(i).elements().iter().map(Poly::to_string).collect();
                            let _ = writeln!(out, "{},{i},{},\"{}\"", c.r, verify::ideal_hash(c.ideal(i)), gens.join(";"));
                        }
                    }
                    artifact("minors.csv", out)
                }
                Format::Json => {
                    let v: Vec<_> = chains
                        .iter()
                        .map(|c| {
                            json!({
                                "r": c.r,
                                "stabilization": c.stabilization,
                                "ideals": (1..=res.length()).map(|i| json!({
                                    "i": i,
                                    "hash": verify::ideal_hash(c.ideal(i)),
                                    "generators": c.ideal(i).elements().iter().map(Poly::to_string).collect::<Vec<_>>(),
                                })).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    artifact("minors.json", json_text(&v)?)
                }
            };
            Ok(RunOutput { artifacts: vec![a], pass: true })
        }
        Command::Hilbert => {
            let h = p.ci.hilbert();
            let a = match s.format {
                Format::Csv => {
                    let mut out = String::from("k,h_k\n");
                    for (k, c) in h.numerator.iter().enumerate() {
                        let _ = writeln!(out, "{k},{c}");
                    }
                    artifact("hilbert.csv", out)
                }
                Format::Json => artifact(
                    "hilbert.json",
                    json_text(&json!({
                        "h": format_zpoly(&h.numerator),
                        "numerator": h.numerator,
                        "dim": h.dim,
                        "length": h.length,
                    }))?,
                ),
            };
            Ok(RunOutput { artifacts: vec![a], pass: true })
        }
        Command::Mf => {
            let mf = require_mf(&p)?;
            let mut artifacts = vec![artifact("mf.json", json_text(&mf.to_json())?)];
            if p.ci.ideal().contains(mf.f()) {
                let res = mf_periodic_resolution(mf, &p.ci, s.length)?;
                artifacts.push(artifact("mf_betti.csv", res.betti_csv()));
            }
            Ok(RunOutput { artifacts, pass: true })
        }
        Command::Verify => {
            let report = run_experiment(&p, s)?.with_input_hash(&hash);
            let pass = report.pass;
            Ok(RunOutput { artifacts: vec![artifact(&format!("report_{}.json", s.experiment), json_text(&report)?)], pass })
        }
    }
}

pub const EXPERIMENTS: [&str; 6] = ["main", "cx1", "minors", "sharpness", "hilbert", "section"];

fn run_experiment(p: &Problem, s: &Settings) -> Result<ExperimentReport> {
    match s.experiment.as_str() {
        "main" => verify::verify_main_theorem(&p.ci, require_module(p)?, s.length, s.window),
        "cx1" => verify::verify_cx1(&p.ci, require_module(p)?, s.length),
        "minors" => verify::verify_minor_periodicity(&p.ci, require_module(p)?, s.r_max, s.length, s.window),
        "sharpness" => verify::verify_example_sharpness(&p.ci, require_mf(p)?, s.length),
        "hilbert" => verify::verify_hpoly_product(&p.ci),
        "section" => verify::verify_section(&p.ci, require_module(p)?, s.length, s.window, s.seed),
        other => Err(Error::Input(format!("unknown experiment `{other}`; expected one of {}", EXPERIMENTS.join(", ")))),
    }
}

/// Content-addressed store of command outputs. Entries are written to a
/// temporary file and renamed into place.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
    version: String,
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    version: String,
    key: String,
    value: RunOutput,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into(), version: TOOL_VERSION.into() }
    }

    /// Directory from `CIRES_CACHE`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(Self::new)
    }

    pub fn with_version(mut self, version: &str) -> Self {
        self.version = version.into();
        self
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(input_hash: &str, command: Command, settings: &Settings) -> String {
        let text = serde_json::to_string(&json!({"input": input_hash, "command": command, "settings": settings}))
            .expect("key serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored value, or `None` on a miss, a version mismatch or a corrupt
    /// entry (with a warning).
    pub fn get(&self, key: &str) -> Option<RunOutput> {
        let path = self.path(key);
        let text = fs::read_to_string(&path).ok()?;
        match serde_json::from_str::<CacheEntry>(&text) {
            Ok(e) if e.key == key && e.version == self.version => Some(e.value),
            Ok(_) => None,
            Err(err) => {
                log::warn!("ignoring corrupt cache entry {}: {err}", path.display());
                None
            }
        }
    }

    pub fn put(&self, key: &str, value: &RunOutput) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = CacheEntry { version: self.version.clone(), key: key.into(), value: value.clone() };
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_string(&entry)?)?;
        fs::rename(&tmp, self.path(key))?;
        Ok(())
    }
}

/// `run` through an optional cache.
pub fn run_cached(command: Command, spec: &InputSpec, settings: &Settings, cache: Option<&Cache>) -> Result<RunOutput> {
    let Some(cache) = cache else {
        return run(command, spec, settings);
    };
    let key = Cache::key(&spec.content_hash()?, command, settings);
    if let Some(v) = cache.get(&key) {
        log::info!("cache hit {key}");
        return Ok(v);
    }
    let v = run(command, spec, settings)?;
    if let Err(e) = cache.put(&key, &v) {
        log::warn!("could not write cache entry {key}: {e}");
    }
    Ok(v)
}

/// Writes each artifact into `dir`, returning the paths.
pub fn write_artifacts(out: &RunOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    out.artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.name);
            fs::write(&path, &a.content)?;
            Ok(path)
        })
        .collect()
}

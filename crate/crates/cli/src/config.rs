//! Run configuration files (TOML).
//!
//! ```toml
//! seed = 7
//!
//! [model]
//! name = "maier-stein"
//! epsilon = 0.1
//! beta = 10.0
//!
//! [endpoints]
//! start = [-1.0, 0.0]
//! end = [1.0, 0.0]
//!
//! [init]
//! kind = "linear"
//! bump = { amplitude = 0.1, axis = 1 }
//!
//! [solver]
//! n_segments = 1000
//! ds = 0.01
//!
//! [output]
//! dir = "out/maier-stein"
//! ```

use std::fs;
use std::path::{Path as FsPath, PathBuf};

use egma::{AnyModel, Model, Path, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::presets;
use crate::ConfigError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: AnyModel,
    pub endpoints: Endpoints,
    #[serde(default)]
    pub init: InitConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Seeds the random perturbation of the initial path.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Either explicit coordinates or a named preset.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Endpoints {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitKind {
    #[default]
    Linear,
    Waypoints,
}

/// `amplitude sin(pi alpha)` added to coordinate `axis`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bump {
    pub amplitude: f64,
    pub axis: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitConfig {
    #[serde(default)]
    pub kind: InitKind,
    /// CSV of interior waypoints, one point per row, relative to the
    /// config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bump: Option<Bump>,
    /// Amplitude of a seeded smooth perturbation
    /// `sum_{k=1..3} c_k sin(k pi alpha)` applied to every coordinate.
    #[serde(default)]
    pub noise: f64,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_path_every() -> usize {
    1000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    /// Iterations between rewrites of the path CSV during a run.
    #[serde(default = "default_path_every")]
    pub path_every: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: default_dir(), path_every: default_path_every() }
    }
}

/// A validated configuration, ready to run.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub config: RunConfig,
    pub model: AnyModel,
    pub initial: Path,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig, ConfigError> {
        toml::from_str(text).map_err(|e| match model_diagnostic(text) {
            Some(d) => ConfigError::Parse(format!("{d}\n{e}")),
            None => ConfigError::Parse(e.to_string()),
        })
    }

    pub fn load(file: &FsPath) -> Result<(RunConfig, PathBuf), ConfigError> {
        let text = fs::read_to_string(file).map_err(|e| ConfigError::Io(file.to_path_buf(), e.to_string()))?;
        let config = RunConfig::from_toml(&text)?;
        let base = file.parent().map(FsPath::to_path_buf).unwrap_or_default();
        Ok((config, base))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configs always serialize")
    }

    pub fn endpoint_pair(&self) -> Result<(Vec<f64>, Vec<f64>), ConfigError> {
        let e = &self.endpoints;
        match (&e.preset, &e.start, &e.end) {
            (Some(name), None, None) => presets::endpoints(name),
            (None, Some(s), Some(f)) => Ok((s.clone(), f.clone())),
            (Some(_), _, _) => Err(ConfigError::field("endpoints", "give either `preset` or `start`/`end`, not both")),
            _ => Err(ConfigError::field("endpoints", "both `start` and `end` are required")),
        }
    }

    /// Checks every field and builds the initial path. Nothing is written.
    pub fn prepare(&self, base_dir: &FsPath) -> Result<Prepared, ConfigError> {
        self.model.validate().map_err(|e| ConfigError::field("model", e))?;
        self.solver.validate().map_err(|e| ConfigError::field("solver", e))?;
        if self.output.path_every == 0 {
            return Err(ConfigError::field("output.path_every", "must be positive"));
        }
        let (start, end) = self.endpoint_pair()?;
        let d = self.model.dim();
        for (name, p) in [("endpoints.start", &start), ("endpoints.end", &end)] {
            if p.len() != d {
                return Err(ConfigError::field(
                    name,
                    format!("has {} coordinates, model `{}` needs {d}", p.len(), self.model.name()),
                ));
            }
        }
        let n = self.solver.n_segments;
        let mut path = match self.init.kind {
            InitKind::Linear => {
                if self.init.file.is_some() {
                    return Err(ConfigError::field("init.file", "only used with kind = \"waypoints\""));
                }
                Path::linear(&start, &end, n)
            }
            InitKind::Waypoints => {
                let file = self
                    .init
                    .file
                    .as_ref()
                    .ok_or_else(|| ConfigError::field("init.file", "required for kind = \"waypoints\""))?;
                let mut points = vec![start.clone()];
                points.extend(read_waypoints(&base_dir.join(file), d)?);
                points.push(end.clone());
                Path::through_waypoints(&points, n)
            }
        }
        .map_err(|e| ConfigError::field("init", e))?;

        if let Some(b) = self.init.bump {
            if b.axis >= d {
                return Err(ConfigError::field("init.bump.axis", format!("must be below {d}")));
            }
            path = perturb(&path, |alpha, k| if k == b.axis { b.amplitude * (std::f64::consts::PI * alpha).sin() } else { 0.0 });
        }
        if self.init.noise != 0.0 {
            let seed = self.seed.ok_or_else(|| ConfigError::field("seed", "required when init.noise is set"))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let amp = self.init.noise;
            let coef: Vec<[f64; 3]> =
                (0..d).map(|_| [0; 3].map(|_| rng.gen_range(-amp..=amp))).collect();
            path = perturb(&path, |alpha, k| {
                (0..3).map(|m| coef[k][m] * ((m + 1) as f64 * std::f64::consts::PI * alpha).sin()).sum()
            });
        }

        for (j, x) in path.nodes().enumerate() {
            match self.model.path_potential(x) {
                Ok(u) if u.is_finite() => {}
                Ok(_) => return Err(ConfigError::field("init", format!("U is not finite at node {j}"))),
                Err(e) => return Err(ConfigError::field("init", format!("node {j}: {e}"))),
            }
        }
        Ok(Prepared { config: self.clone(), model: self.model.clone(), initial: path })
    }
}

fn check_model<T: serde::de::DeserializeOwned>(text: &str) -> Option<toml::de::Error> {
    toml::from_str::<T>(text).err()
}

/// The `[model]` table is a tagged union, so toml reports its errors at the
/// table header. Parsing the named model on its own pins down the key.
fn model_diagnostic(text: &str) -> Option<String> {
    use egma::model::{LjCluster, MaierStein, Quadratic, TwoChannel};
    let doc: toml::Table = text.parse().ok()?;
    let mut table = doc.get("model")?.as_table()?.clone();
    let name = table.remove("name")?.as_str()?.to_string();
    let sub = toml::to_string(&table).ok()?;
    let err = match name.as_str() {
        "quadratic" => check_model::<Quadratic>(&sub),
        "two-channel" => check_model::<TwoChannel>(&sub),
        "lj-cluster" => check_model::<LjCluster>(&sub),
        "maier-stein" => check_model::<MaierStein>(&sub),
        _ => None,
    }?;
    let message = err.message().to_string();
    let key = err
        .span()
        .and_then(|r| sub[..r.start].lines().count().checked_sub(1).and_then(|i| sub.lines().nth(i)))
        .and_then(|l| l.split('=').next())
        .map(|k| k.trim().to_string())
        .or_else(|| message.strip_prefix("unknown field `")?.split('`').next().map(str::to_string));
    let Some(key) = key.filter(|k| !k.is_empty()) else {
        return Some(format!("model `{name}`: {message}"));
    };
    let mut in_model = false;
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.starts_with('[') {
            in_model = t == "[model]";
        } else if in_model && t.split('=').next().map(str::trim) == Some(key.as_str()) {
            return Some(format!("line {}, model.{key}: {message}", i + 1));
        }
    }
    Some(format!("model.{key}: {message}"))
}

/// Adds `offset(alpha_j, k)` to every interior node.
fn perturb(path: &Path, offset: impl Fn(f64, usize) -> f64) -> Path {
    let n = path.n_segments();
    let d = path.dim();
    let mut flat = path.as_flat().to_vec();
    for j in 1..n {
        let alpha = j as f64 / n as f64;
        for k in 0..d {
            flat[j * d + k] += offset(alpha, k);
        }
    }
    Path::from_flat(d, flat).expect("perturbing keeps the node layout")
}

/// Reads `x0,...,x{d-1}` rows; a header line is skipped when present.
pub fn read_waypoints(file: &FsPath, dim: usize) -> Result<Vec<Vec<f64>>, ConfigError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .from_path(file)
        .map_err(|e| ConfigError::Io(file.to_path_buf(), e.to_string()))?;
    let mut rows = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| ConfigError::Io(file.to_path_buf(), e.to_string()))?;
        let parsed: Result<Vec<f64>, _> = rec.iter().map(|v| v.trim().parse::<f64>()).collect();
        match parsed {
            Ok(p) if p.len() == dim => rows.push(p),
            Ok(p) => {
                return Err(ConfigError::Waypoints(file.to_path_buf(), line + 1, format!("{} columns, expected {dim}", p.len())))
            }
            Err(_) if line == 0 => continue,
            Err(e) => return Err(ConfigError::Waypoints(file.to_path_buf(), line + 1, e.to_string())),
        }
    }
    Ok(rows)
}

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::Deserialize;
use shrinkset::io::GeometryJson;
use shrinkset::RoundedSet;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

/// Scene file. Every field may also be set or overridden on the command line.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub geometry: Option<GeometryJson>,
    #[serde(rename = "M")]
    pub m: Option<f64>,
    pub horizon: Option<f64>,
    pub dt: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub tol: Option<f64>,
    pub a: Option<f64>,
    pub seed: Option<u64>,
    pub svg_every: Option<f64>,
    pub suites: Option<Vec<String>>,
    pub raster_sets: Option<usize>,
    pub raster_resolution: Option<f64>,
    #[serde(default)]
    pub output: Outputs,
}

impl SceneConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn check(&self) -> anyhow::Result<()> {
        let fields = [
            ("M", self.m),
            ("horizon", self.horizon),
            ("dt", self.dt),
            ("c1", self.c1),
            ("c2", self.c2),
            ("tol", self.tol),
            ("a", self.a),
            ("svg_every", self.svg_every),
            ("raster_resolution", self.raster_resolution),
        ];
        for (name, v) in fields {
            if let Some(v) = v {
                if !v.is_finite() {
                    bail!("{name} must be finite, got {v}");
                }
            }
        }
        for (name, v) in [("horizon", self.horizon), ("dt", self.dt), ("svg_every", self.svg_every)] {
            if v.is_some_and(|v| v <= 0.0) {
                bail!("{name} must be positive");
            }
        }
        for (name, v) in [("M", self.m), ("c1", self.c1), ("c2", self.c2)] {
            if v.is_some_and(|v| v < 0.0) {
                bail!("{name} must be non-negative");
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> anyhow::Result<RoundedSet> {
        let g = self.geometry.as_ref().context("no geometry given")?;
        RoundedSet::try_from(g).context("invalid geometry")
    }

    pub fn require<T: Copy>(v: Option<T>, name: &str) -> anyhow::Result<T> {
        v.with_context(|| format!("missing {name}"))
    }
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
pub fn geometry_arg(arg: &str) -> anyhow::Result<GeometryJson> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    serde_json::from_str(&text).context("parsing geometry")
}

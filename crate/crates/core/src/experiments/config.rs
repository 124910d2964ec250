use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ricci_lower_bound, CurvatureBound, DimensionParam, MeasureField, TorusGrid};
use crate::harnack::HarnackMode;
use crate::heat::{HeatFlowOptions, Scheme};
use crate::linalg::Vec2;
use crate::liyau::LiYauProfile;
use crate::metric::{MetricField, NormDescriptor};

/// `amp * cos(2 pi (kx x + ky y) / L + phase)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosineTerm {
    pub amp: f64,
    #[serde(default)]
    pub kx: i32,
    #[serde(default)]
    pub ky: i32,
    #[serde(default)]
    pub phase: f64,
}

impl CosineTerm {
    pub fn eval(&self, x: Vec2, period: f64) -> f64 {
        let w = TAU / period;
        self.amp * (w * (self.kx as f64 * x[0] + self.ky as f64 * x[1]) + self.phase).cos()
    }
}

/// Scalar field from the expression whitelist: a constant plus cosine terms, or a
/// table of node values.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldExpr {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub terms: Vec<CosineTerm>,
    #[serde(default)]
    pub table: Option<Vec<f64>>,
}

impl FieldExpr {
    pub fn sample(&self, grid: &TorusGrid) -> Result<Vec<f64>> {
        if let Some(t) = &self.table {
            if t.len() != grid.len() {
                return Err(Error::Config(format!("table has {} values, grid has {}", t.len(), grid.len())));
            }
            if self.constant != 0.0 || !self.terms.is_empty() {
                return Err(Error::Config("a table excludes constant and terms".into()));
            }
            return Ok(t.clone());
        }
        let p = grid.period();
        Ok(grid.sample(|x| self.constant + self.terms.iter().map(|c| c.eval(x, p)).sum::<f64>()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dim: usize,
    pub nodes: usize,
    #[serde(default = "unit")]
    pub period: f64,
}

fn unit() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MeasureConfig {
    Lebesgue,
    BusemannHausdorff,
    /// `dm = exp(-f) dx` with `f` from the whitelist.
    Weight { f: FieldExpr },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub dt: f64,
    pub t_end: f64,
    #[serde(default)]
    pub scheme: Scheme,
    /// Times at which time-local checks run; defaults to `t_end`.
    #[serde(default)]
    pub snapshots: Vec<f64>,
}

/// `"inf"`, `"auto"` or a number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberOrWord {
    Number(f64),
    Word(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureConfig {
    /// Dimension parameter: a number or `"inf"`.
    pub n: NumberOrWord,
    /// Lower bound: a number or `"auto"`.
    #[serde(default = "auto")]
    pub k: NumberOrWord,
}

fn auto() -> NumberOrWord {
    NumberOrWord::Word("auto".into())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarnackPair {
    pub x1: Vec2,
    pub t1: f64,
    pub x2: Vec2,
    pub t2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksConfig {
    /// Check names to run; see [`super::CHECK_NAMES`].
    pub run: Vec<String>,
    #[serde(default = "default_profiles")]
    pub profiles: Vec<LiYauProfile>,
    #[serde(default)]
    pub harnack_pairs: Vec<HarnackPair>,
    #[serde(default = "default_modes")]
    pub harnack_modes: Vec<HarnackMode>,
    /// Nonnegative test field for integrated checks; defaults to `1`.
    #[serde(default)]
    pub test_field: Option<FieldExpr>,
    /// Number of seeded random fields for structural checks.
    #[serde(default = "default_random_fields")]
    pub random_fields: usize,
}

fn default_profiles() -> Vec<LiYauProfile> {
    vec![LiYauProfile::Quadratic]
}

fn default_modes() -> Vec<HarnackMode> {
    vec![HarnackMode::Lf]
}

fn default_random_fields() -> usize {
    4
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderLevel {
    pub nodes: usize,
    pub dt: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    pub grid: GridConfig,
    pub metric: NormDescriptor,
    pub measure: MeasureConfig,
    pub initial: FieldExpr,
    pub time: TimeConfig,
    pub curvature: CurvatureConfig,
    pub checks: ChecksConfig,
    #[serde(default)]
    pub ladder: Vec<LadderLevel>,
}

/// Objects built from a validated configuration.
pub struct Setup {
    pub grid: TorusGrid,
    pub metric: MetricField,
    pub measure: MeasureField,
    pub initial: Vec<f64>,
    pub options: HeatFlowOptions,
    pub curvature: CurvatureBound,
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("configuration serialises")
    }

    pub fn validate(&self) -> Result<()> {
        let ctx = |e: Error| Error::Config(format!("{}: {e}", self.name));
        TorusGrid::new(self.grid.dim, self.grid.nodes, self.grid.period).map_err(ctx)?;
        let desc = self.metric.validated().map_err(ctx)?;
        if desc.dim() != self.grid.dim {
            return Err(Error::Config(format!("metric dimension {} differs from grid {}", desc.dim(), self.grid.dim)));
        }
        if !(self.time.dt > 0.0 && self.time.t_end > 0.0) {
            return Err(Error::Config("dt and t_end must be positive".into()));
        }
        if self.time.snapshots.iter().any(|t| !(*t > 0.0 && *t <= self.time.t_end)) {
            return Err(Error::Config("snapshots must lie in (0, t_end]".into()));
        }
        self.dimension()?;
        for name in &self.checks.run {
            if !super::CHECK_NAMES.contains(&name.as_str()) {
                return Err(Error::Config(format!("unknown check '{name}'")));
            }
        }
        let steps = std::iter::once(self.time.dt).chain(self.ladder.iter().map(|l| l.dt));
        for dt in steps {
            for &t in self.time.snapshots.iter().chain([&self.time.t_end]) {
                let k = t / dt;
                if (k - k.round()).abs() > 1e-6 * k.max(1.0) {
                    return Err(Error::Config(format!("time {t} is not a whole number of steps of {dt}")));
                }
            }
        }
        for w in self.ladder.windows(2) {
            let (a, b) = (w[0], w[1]);
            let finer = b.nodes >= a.nodes && b.dt <= a.dt && (b.nodes > a.nodes || b.dt < a.dt);
            if !finer {
                return Err(Error::Config("ladder must increase strictly in resolution".into()));
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> Result<DimensionParam> {
        match &self.curvature.n {
            NumberOrWord::Number(n) if *n >= self.grid.dim as f64 => Ok(DimensionParam::Finite(*n)),
            NumberOrWord::Word(w) if w == "inf" => Ok(DimensionParam::Infinite),
            other => Err(Error::Config(format!("curvature.n must be >= dim or \"inf\", got {other:?}"))),
        }
    }

    /// Copy with the grid and step of a ladder level.
    pub fn at_level(&self, level: LadderLevel) -> Self {
        let mut c = self.clone();
        c.grid.nodes = level.nodes;
        c.time.dt = level.dt;
        c
    }

    pub fn setup(&self) -> Result<Setup> {
        self.validate()?;
        let grid = TorusGrid::new(self.grid.dim, self.grid.nodes, self.grid.period)?;
        let desc = self.metric.validated()?;
        let metric = MetricField::uniform(grid, desc)?;
        let measure = match &self.measure {
            MeasureConfig::Lebesgue => MeasureField::lebesgue(grid),
            MeasureConfig::BusemannHausdorff => MeasureField::busemann_hausdorff(grid, &desc),
            MeasureConfig::Weight { f } => MeasureField::from_log_density(grid, f.sample(&grid)?)?,
        };
        let initial = self.initial.sample(&grid)?;
        if initial.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::Config("initial datum must be positive".into()));
        }
        let n = self.dimension()?;
        let curvature = match &self.curvature.k {
            NumberOrWord::Number(k) => CurvatureBound::manual(n, *k),
            NumberOrWord::Word(w) if w == "auto" => ricci_lower_bound(&metric, &measure, n)
                .map_err(|e| Error::Config(format!("curvature \"auto\" unavailable: {e}")))?,
            other => return Err(Error::Config(format!("curvature.k must be a number or \"auto\", got {other:?}"))),
        };
        let options = HeatFlowOptions::new(self.time.dt, self.time.t_end).with_scheme(self.time.scheme);
        Ok(Setup { grid, metric, measure, initial, options, curvature })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "minimal"
[grid]
dim = 1
nodes = 64
[metric]
family = "euclidean"
dim = 1
[measure]
kind = "lebesgue"
[initial]
constant = 1.0
terms = [{ amp = 0.5, kx = 1 }]
[time]
dt = 1e-3
t_end = 0.02
[curvature]
n = 1.0
[checks]
run = ["li-yau"]
"#;

    #[test]
    fn parses_minimal() {
        let c = ExperimentConfig::from_toml_str(MINIMAL).unwrap();
        let s = c.setup().unwrap();
        assert_eq!(s.curvature.k, 0.0);
        assert_eq!(s.initial.len(), 64);
        let back = ExperimentConfig::from_toml_str(&c.to_toml_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_inadmissible_randers() {
        let bad = MINIMAL.replace(
            "family = \"euclidean\"\ndim = 1",
            "family = \"randers\"\ndim = 1\na = { xx = 1.0, xy = 0.0, yy = 1.0 }\nb = [1.2, 0.0]",
        );
        assert!(matches!(ExperimentConfig::from_toml_str(&bad), Err(Error::Config(_))));
    }

    #[test]
    fn rejects_unknown_check() {
        let bad = MINIMAL.replace("run = [\"li-yau\"]", "run = [\"bogus\"]");
        assert!(matches!(ExperimentConfig::from_toml_str(&bad), Err(Error::Config(_))));
    }
}

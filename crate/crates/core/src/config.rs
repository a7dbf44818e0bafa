//! JSON run configurations for the `unred` runner.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::curvegeo::{Reparam, Shape};
use crate::error::{Error, Result};
use crate::hypflow::FlowConfig;
use crate::sigma::LieValue;
use crate::sobolev::SobolevBackend;
use crate::unreduction::{BoundaryMode, ForceProfile, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Match,
    Flow,
    Hopf,
    Sigma,
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Match => "match",
            Command::Flow => "flow",
            Command::Hopf => "hopf",
            Command::Sigma => "sigma",
            Command::Check => "check",
        }
    }
}

/// Curves and lattice. Boundary curves of `match` blend `start` (t = 0) into
/// `end` (t = 1), scaled by `1 + x_growth · x`; `flow` starts from `start`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Geometry {
    pub n: usize,
    pub mx: usize,
    pub mt: usize,
    pub mode: BoundaryMode,
    pub start: Shape,
    pub end: Shape,
    pub x_growth: f64,
    pub reparam: Reparam,
    /// Also solve with every boundary curve reparametrized by this map and
    /// report the shape distance between the two solutions.
    pub equivariance: Option<Reparam>,
}

impl Default for Geometry {
    fn default() -> Self {
        Self {
            n: 64,
            mx: 8,
            mt: 8,
            mode: BoundaryMode::Dirichlet,
            start: Shape::Circle { r: 1.0 },
            end: Shape::Circle { r: 2.0 },
            x_growth: 0.0,
            reparam: Reparam::Identity,
            equivariance: None,
        }
    }
}

fn scaled(s: Shape, k: f64) -> Shape {
    match s {
        Shape::Circle { r } => Shape::Circle { r: k * r },
        Shape::Ellipse { a, b } => Shape::Ellipse { a: k * a, b: k * b },
        Shape::RoundedSquare { r } => Shape::RoundedSquare { r: k * r },
    }
}

impl Geometry {
    /// Boundary shape at `(x, t)`; `None` if `start` and `end` differ in kind.
    pub fn shape_at(&self, x: f64, t: f64) -> Option<Shape> {
        let l = |a: f64, b: f64| (1.0 - t) * a + t * b;
        let s = match (self.start, self.end) {
            (Shape::Circle { r: a }, Shape::Circle { r: b }) => Shape::Circle { r: l(a, b) },
            (Shape::Ellipse { a: a0, b: b0 }, Shape::Ellipse { a: a1, b: b1 }) => {
                Shape::Ellipse { a: l(a0, a1), b: l(b0, b1) }
            }
            (Shape::RoundedSquare { r: a }, Shape::RoundedSquare { r: b }) => Shape::RoundedSquare { r: l(a, b) },
            _ => return None,
        };
        Some(scaled(s, 1.0 + self.x_growth * x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OperatorConfig {
    #[serde(rename = "A")]
    pub a: f64,
    pub backend: SobolevBackend,
}

impl Default for OperatorConfig {
    fn default() -> Self {
        Self { a: 0.1, backend: SobolevBackend::Spectral }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowSection {
    #[serde(flatten)]
    pub integration: FlowConfig,
    /// Uniform initial normal speed.
    pub h0: f64,
    /// Uniform initial tangential speed.
    pub v0: f64,
}

impl Default for FlowSection {
    fn default() -> Self {
        Self { integration: FlowConfig::default(), h0: 0.0, v0: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PathSpec {
    GreatCircle,
    Latitude { z: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileSpec {
    Constant { c: f64 },
    /// Periodic solution of `ς' = f^v` with `ς(0) = sigma0`.
    VerticalOde { fv: ForceProfile, sigma0: f64 },
}

impl ProfileSpec {
    pub fn describe(&self) -> String {
        match self {
            ProfileSpec::Constant { c } => format!("constant {c}"),
            ProfileSpec::VerticalOde { fv, sigma0 } => format!("vertical_ode fv={fv:?} sigma0={sigma0}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HopfSection {
    #[serde(rename = "K")]
    pub k: usize,
    pub path: PathSpec,
    pub profile: ProfileSpec,
    /// Extra step counts for the phase-vs-K plot data.
    pub k_sweep: Vec<usize>,
}

impl Default for HopfSection {
    fn default() -> Self {
        Self {
            k: 10_000,
            path: PathSpec::GreatCircle,
            profile: ProfileSpec::Constant { c: 0.0 },
            k_sweep: vec![16, 32, 64, 128, 256],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    /// `ς_t = ς_x = ξ`, the Maurer–Cartan form of `exp((t + x)ξ)`.
    Exp { xi: LieValue },
    Constant { sigma_t: LieValue, sigma_x: LieValue },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SigmaSection {
    pub mx: usize,
    pub mt: usize,
    pub field: FieldSpec,
}

impl Default for SigmaSection {
    fn default() -> Self {
        Self { mx: 16, mt: 16, field: FieldSpec::Exp { xi: LieValue::new(0.6, -0.8, 0.0) } }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Save every `stride`-th frame / lattice node.
    pub stride: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), stride: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub geometry: Geometry,
    pub operator: OperatorConfig,
    pub force: ForceProfile,
    pub solver: SolverConfig,
    pub flow: FlowSection,
    pub hopf: HopfSection,
    pub sigma: SigmaSection,
    pub output: OutputConfig,
}

const SECTIONS: [&str; 9] = ["command", "geometry", "operator", "force", "solver", "flow", "hopf", "sigma", "output"];

fn section<T: DeserializeOwned + Default>(obj: &serde_json::Map<String, Value>, key: &str, errs: &mut Vec<String>) -> T {
    match obj.get(key) {
        None => T::default(),
        Some(v) => serde_json::from_value(v.clone()).unwrap_or_else(|e| {
            errs.push(format!("{key}: {e}"));
            T::default()
        }),
    }
}

impl RunConfig {
    pub fn default_for(command: Command) -> Self {
        Self {
            command,
            geometry: Geometry::default(),
            operator: OperatorConfig::default(),
            force: ForceProfile::Zero,
            solver: SolverConfig::default(),
            flow: FlowSection::default(),
            hopf: HopfSection::default(),
            sigma: SigmaSection::default(),
            output: OutputConfig::default(),
        }
    }

    /// Parses and validates, reporting every problem found.
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_for(text, None)
    }

    /// As [`from_json`](Self::from_json); `expected` fills in a missing
    /// `command` and must agree with a present one.
    pub fn from_json_for(text: &str, expected: Option<Command>) -> Result<Self> {
        let root: Value = serde_json::from_str(text).map_err(|e| Error::Config(vec![format!("invalid JSON: {e}")]))?;
        let Value::Object(obj) = root else {
            return Err(Error::Config(vec!["config must be a JSON object".into()]));
        };
        let mut errs = Vec::new();
        for key in obj.keys() {
            if !SECTIONS.contains(&key.as_str()) {
                errs.push(format!("unknown section `{key}`"));
            }
        }
        let command = match (obj.get("command"), expected) {
            (None, Some(c)) => c,
            (None, None) => {
                errs.push("command is required (match, flow, hopf, sigma or check)".into());
                Command::Check
            }
            (Some(v), _) => serde_json::from_value(v.clone()).unwrap_or_else(|e| {
                errs.push(format!("command: {e}"));
                expected.unwrap_or(Command::Check)
            }),
        };
        if let Some(c) = expected.filter(|c| *c != command) {
            errs.push(format!("config is for `{}` but was run as `{}`", command.name(), c.name()));
        }
        let cfg = Self {
            command,
            geometry: section(&obj, "geometry", &mut errs),
            operator: section(&obj, "operator", &mut errs),
            force: section(&obj, "force", &mut errs),
            solver: section(&obj, "solver", &mut errs),
            flow: section(&obj, "flow", &mut errs),
            hopf: section(&obj, "hopf", &mut errs),
            sigma: section(&obj, "sigma", &mut errs),
            output: section(&obj, "output", &mut errs),
        };
        errs.extend(cfg.diagnostics());
        if errs.is_empty() {
            Ok(cfg)
        } else {
            Err(Error::Config(errs))
        }
    }

    pub fn from_file(path: impl AsRef<Path>, expected: Option<Command>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(vec![format!("cannot read {}: {e}", path.display())]))?;
        Self::from_json_for(&text, expected)
    }

    /// Range violations in the sections the command uses.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let g = &self.geometry;
        let uses_curves = matches!(self.command, Command::Match | Command::Flow);
        if uses_curves {
            if g.n % 2 != 0 {
                errs.push(format!("geometry.n must be even, got {}", g.n));
            }
            if g.n < 8 {
                errs.push(format!("geometry.n must be >= 8, got {}", g.n));
            }
            for (name, s) in [("geometry.start", g.start), ("geometry.end", g.end)] {
                if let Err(e) = s.validate() {
                    errs.push(format!("{name}: {e}"));
                }
            }
            for (name, r) in [("geometry.reparam", Some(g.reparam)), ("geometry.equivariance", g.equivariance)] {
                if let Some(Err(e)) = r.map(|r| r.validate()) {
                    errs.push(format!("{name}: {e}"));
                }
            }
            if let Err(e) = self.force.validate() {
                errs.push(e);
            }
        }
        if self.command == Command::Match {
            if g.mx < 2 || g.mt < 2 {
                errs.push(format!("geometry.mx and geometry.mt must be >= 2, got {}×{}", g.mx, g.mt));
            }
            if g.shape_at(0.0, 0.0).is_none() {
                errs.push("geometry.start and geometry.end must be the same shape kind".into());
            }
            if !(g.x_growth > -1.0 && g.x_growth.is_finite()) {
                errs.push(format!("geometry.x_growth must be > -1, got {}", g.x_growth));
            }
            if g.mode == BoundaryMode::PeriodicX && g.x_growth != 0.0 {
                errs.push("geometry.x_growth must be 0 in periodic_x mode".into());
            }
            if !(self.operator.a >= 0.0 && self.operator.a.is_finite()) {
                errs.push(format!("operator.A must be ≥ 0, got {}", self.operator.a));
            }
            if let Err(e) = self.solver.validate() {
                errs.extend(e);
            }
        }
        if self.command == Command::Flow {
            if let Err(e) = self.flow.integration.validate() {
                errs.extend(e);
            }
            if !(self.flow.h0.is_finite() && self.flow.v0.is_finite()) {
                errs.push("flow.h0 and flow.v0 must be finite".into());
            }
        }
        if self.command == Command::Hopf {
            let h = &self.hopf;
            if h.k < 8 {
                errs.push(format!("hopf.K must be >= 8, got {}", h.k));
            }
            if h.k_sweep.iter().any(|&k| k < 8) {
                errs.push("hopf.k_sweep entries must be >= 8".into());
            }
            if let PathSpec::Latitude { z } = h.path {
                if !(z.abs() < 1.0) {
                    errs.push(format!("hopf.path.z must lie in (-1, 1), got {z}"));
                }
            }
            if let ProfileSpec::VerticalOde { fv: ForceProfile::Constant { amplitude }, .. } = h.profile {
                if amplitude != 0.0 {
                    errs.push("hopf.profile.fv must have zero mean for a periodic ς".into());
                }
            }
        }
        if self.command == Command::Sigma && (self.sigma.mx < 2 || self.sigma.mt < 2) {
            errs.push(format!("sigma.mx and sigma.mt must be >= 2, got {}×{}", self.sigma.mx, self.sigma.mt));
        }
        if self.output.stride == 0 {
            errs.push("output.stride must be >= 1".into());
        }
        errs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn errors(text: &str) -> Vec<String> {
        match RunConfig::from_json(text) {
            Err(Error::Config(e)) => e,
            other => panic!("expected config errors, got {other:?}"),
        }
    }

    #[test]
    fn minimal_configs_parse() {
        for c in ["match", "flow", "hopf", "sigma", "check"] {
            let cfg = RunConfig::from_json(&format!(r#"{{"command": "{c}"}}"#)).unwrap();
            assert_eq!(cfg.command.name(), c);
        }
    }

    #[test]
    fn all_violations_are_reported_together() {
        let e = errors(
            r#"{"command": "match", "geometry": {"n": 63}, "operator": {"A": -1},
                "solver": {"tol_res": 0}, "output": {"stride": 0}}"#,
        );
        assert!(e.iter().any(|m| m.contains("operator.A must be ≥ 0")), "{e:?}");
        assert!(e.iter().any(|m| m.contains("geometry.n must be even")));
        assert!(e.iter().any(|m| m.contains("solver.tol_res")));
        assert!(e.iter().any(|m| m.contains("output.stride")));
    }

    #[test]
    fn schema_errors_in_several_sections() {
        let e = errors(r#"{"command": "match", "geometry": {"n": "x"}, "hopf": {"bogus": 1}, "extra": {}}"#);
        assert_eq!(e.len(), 3, "{e:?}");
        assert!(errors("{").iter().any(|m| m.contains("invalid JSON")));
        assert!(errors(r#"{"command": "fly"}"#).iter().any(|m| m.starts_with("command")));
    }

    #[test]
    fn expected_command() {
        let cfg = RunConfig::from_json_for("{}", Some(Command::Hopf)).unwrap();
        assert_eq!(cfg.command, Command::Hopf);
        let e = match RunConfig::from_json_for(r#"{"command": "flow"}"#, Some(Command::Hopf)) {
            Err(Error::Config(e)) => e,
            other => panic!("{other:?}"),
        };
        assert!(e[0].contains("run as `hopf`"));
    }

    #[test]
    fn mixed_shapes_are_rejected() {
        let e = errors(
            r#"{"command": "match", "geometry": {"start": {"shape": "circle", "r": 1},
                "end": {"shape": "ellipse", "a": 1, "b": 2}}}"#,
        );
        assert!(e.iter().any(|m| m.contains("same shape kind")));
    }

    #[test]
    fn shape_blend() {
        let g = Geometry { x_growth: 0.5, ..Geometry::default() };
        assert_eq!(g.shape_at(1.0, 0.5), Some(Shape::Circle { r: 2.25 }));
    }

    #[test]
    fn round_trip() {
        let cfg = RunConfig::default_for(Command::Hopf);
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
    }
}

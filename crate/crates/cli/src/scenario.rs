//! Scenario files: a TOML document describing a configuration space, a
//! Hamiltonian, candidate symmetries and the classical and quantum runs.

use std::collections::BTreeMap;
use std::path::Path;

use noether_core::classical::{
    ConfigurationSpace, Hamiltonian, ProjectableField, SpaceError, SymmetryCheck,
};
use noether_core::quantum::{AffineObservable, Grid, QuadraticHamiltonian, QuantumError};
use noether_core::Expr;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Built-in scenarios, addressable by name instead of a path.
pub const BUILTINS: [(&str, &str); 5] = [
    ("friction", include_str!("../scenarios/friction.scn")),
    (
        "friction-primed",
        include_str!("../scenarios/friction-primed.scn"),
    ),
    (
        "free-particle",
        include_str!("../scenarios/free-particle.scn"),
    ),
    ("box", include_str!("../scenarios/box.scn")),
    (
        "constant-force",
        include_str!("../scenarios/constant-force.scn"),
    ),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, f64>,
    pub hamiltonian: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub symmetries: Vec<SymmetrySpec>,
    pub classical: ClassicalSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum: Option<QuantumSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetrySpec {
    pub label: String,
    pub ut: i64,
    pub ui: Vec<String>,
    /// Whether the field is claimed to be a symmetry; `false` turns every
    /// check on it into a negative control.
    #[serde(default = "yes")]
    pub expect: bool,
    /// Tolerance for the drift of the quantized Noether mean.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum_tol: Option<f64>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalSpec {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumSpec {
    pub grid: GridSpec,
    pub initial: InitialSpec,
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
    #[serde(default)]
    pub eigencount: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_tol: Option<f64>,
    /// Bound on the probability next to the walls.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expected_eigenvalues: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen_rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observables: Vec<ObservableSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    Gaussian {
        center: f64,
        width: f64,
        momentum: f64,
    },
    /// Real and imaginary parts as expressions in the coordinate.
    Expression {
        re: String,
        #[serde(default = "zero_text")]
        im: String,
    },
}

fn zero_text() -> String {
    "0".into()
}

/// An extra mean value to track; `conserved` makes it a claim either way.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableSpec {
    pub label: String,
    pub expression: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conserved: Option<bool>,
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("unknown built-in scenario `{0}`")]
    UnknownBuiltin(String),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{field}: {source}")]
    Space { field: String, source: SpaceError },
    #[error("{field}: {source}")]
    Quantum { field: String, source: QuantumError },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("quantum requires dimension 1")]
    QuantumDimension,
    #[error("cannot render scenario: {0}")]
    Render(String),
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Symmetry {
    pub label: String,
    pub field: ProjectableField,
    pub expect: bool,
    pub quantum_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub label: String,
    pub operator: AffineObservable,
    pub conserved: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Gaussian {
        center: f64,
        width: f64,
        momentum: f64,
    },
    Expression {
        re: Expr,
        im: Expr,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumSetup {
    pub hamiltonian: QuadraticHamiltonian,
    pub grid: Grid<f64>,
    pub initial: InitialState,
    pub observables: Vec<Observable>,
}

/// A validated scenario with every expression parsed.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub space: ConfigurationSpace,
    pub hamiltonian: Hamiltonian,
    pub symmetries: Vec<Symmetry>,
    pub quantum: Option<QuantumSetup>,
}

impl Scenario {
    /// Parses scenario text; schema errors carry the path of the bad field.
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let de = toml::Deserializer::parse(text).map_err(|e| ScenarioError::Schema {
            path: "(document)".into(),
            message: e.message().to_string(),
        })?;
        let file: ScenarioFile =
            serde_path_to_error::deserialize(de).map_err(|e| ScenarioError::Schema {
                path: e.path().to_string(),
                message: e.inner().message().to_string(),
            })?;
        Self::from_file(file)
    }

    /// A built-in name or a path to a scenario file.
    pub fn load(source: &str) -> Result<Self, ScenarioError> {
        if let Some((_, text)) = BUILTINS.iter().find(|(name, _)| *name == source) {
            return Self::parse(text);
        }
        let path = Path::new(source);
        if !path.exists() && path.extension().is_none() && !source.contains('/') {
            return Err(ScenarioError::UnknownBuiltin(source.into()));
        }
        let text = std::fs::read_to_string(path).map_err(|source_err| ScenarioError::Io {
            path: source.into(),
            source: source_err,
        })?;
        Self::parse(&text)
    }

    pub fn render(&self) -> Result<String, ScenarioError> {
        toml::to_string(&self.file).map_err(|e| ScenarioError::Render(e.to_string()))
    }

    pub fn from_file(file: ScenarioFile) -> Result<Self, ScenarioError> {
        let space_err = |field: &str| {
            let field = field.to_string();
            move |source| ScenarioError::Space { field, source }
        };
        let mut space = ConfigurationSpace::new(file.dimension).map_err(space_err("dimension"))?;
        for (name, value) in &file.parameters {
            space = space
                .with_parameter(name, *value)
                .map_err(space_err(&format!("parameters.{name}")))?;
        }
        let hamiltonian = Hamiltonian::parse(space.clone(), &file.hamiltonian)
            .map_err(space_err("hamiltonian"))?;

        let mut symmetries = Vec::with_capacity(file.symmetries.len());
        for (i, s) in file.symmetries.iter().enumerate() {
            let at = |f: &str| format!("symmetries[{i}].{f}");
            if s.ui.len() != file.dimension {
                return Err(invalid(
                    at("ui"),
                    format!(
                        "expected {} expressions, got {}",
                        file.dimension,
                        s.ui.len()
                    ),
                ));
            }
            if symmetries.iter().any(|x: &Symmetry| x.label == s.label) {
                return Err(invalid(
                    at("label"),
                    format!("duplicate label `{}`", s.label),
                ));
            }
            let ui: Vec<&str> = s.ui.iter().map(String::as_str).collect();
            let field = ProjectableField::parse(&space, s.ut, &ui).map_err(space_err(&at("ui")))?;
            check_tol(&at("quantum_tol"), s.quantum_tol)?;
            symmetries.push(Symmetry {
                label: s.label.clone(),
                field,
                expect: s.expect,
                quantum_tol: s.quantum_tol,
            });
        }

        let c = &file.classical;
        if c.q.len() != file.dimension {
            return Err(invalid(
                "classical.q",
                format!("expected {} values, got {}", file.dimension, c.q.len()),
            ));
        }
        if c.p.len() != file.dimension {
            return Err(invalid(
                "classical.p",
                format!("expected {} values, got {}", file.dimension, c.p.len()),
            ));
        }
        check_times("classical", c.t0, c.t1, c.dt)?;
        check_tol("classical.drift_tol", c.drift_tol)?;

        let quantum = match &file.quantum {
            None => None,
            Some(q) => Some(quantum_setup(&space, &hamiltonian, q)?),
        };

        Ok(Scenario {
            file,
            space,
            hamiltonian,
            symmetries,
            quantum,
        })
    }
}

fn check_times(section: &str, t0: f64, t1: f64, dt: f64) -> Result<(), ScenarioError> {
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(invalid(
            format!("{section}.t1"),
            "must be finite and greater than t0",
        ));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(invalid(format!("{section}.dt"), "must be positive"));
    }
    Ok(())
}

fn check_tol(field: &str, tol: Option<f64>) -> Result<(), ScenarioError> {
    match tol {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(invalid(field, "must be positive")),
        _ => Ok(()),
    }
}

fn quantum_setup(
    space: &ConfigurationSpace,
    h: &Hamiltonian,
    q: &QuantumSpec,
) -> Result<QuantumSetup, ScenarioError> {
    if space.dimension() != 1 {
        return Err(ScenarioError::QuantumDimension);
    }
    let quantum_err = |field: &str| {
        let field = field.to_string();
        move |source| ScenarioError::Quantum { field, source }
    };
    let check = SymmetryCheck::default();
    let hamiltonian =
        QuadraticHamiltonian::from_hamiltonian(h, &check).map_err(quantum_err("hamiltonian"))?;
    let grid = Grid::new(q.grid.x_min, q.grid.x_max, q.grid.points)
        .map_err(quantum_err("quantum.grid"))?;
    check_times("quantum", q.t0, q.t1, q.dt)?;
    check_tol("quantum.mean_tol", q.mean_tol)?;
    check_tol("quantum.boundary_tol", q.boundary_tol)?;
    check_tol("quantum.eigen_rel_tol", q.eigen_rel_tol)?;
    if q.eigencount > grid.len() {
        return Err(invalid(
            "quantum.eigencount",
            format!("at most {} states exist", grid.len()),
        ));
    }
    if q.eigencount > 0 && hamiltonian.is_time_dependent() {
        return Err(invalid(
            "quantum.eigencount",
            "stationary states need a time-independent hamiltonian",
        ));
    }
    if q.expected_eigenvalues.len() > q.eigencount {
        return Err(invalid(
            "quantum.expected_eigenvalues",
            "more values than eigencount",
        ));
    }

    let parse_coordinate = |field: &str, text: &str| -> Result<Expr, ScenarioError> {
        let e = space.parse(text).map_err(|e| ScenarioError::Space {
            field: field.into(),
            source: SpaceError::Parse(e),
        })?;
        if space.depends_on_momenta(&e)
            || e.depends_on(noether_core::classical::HOMOGENEOUS_MOMENTUM)
        {
            return Err(invalid(field, "must not depend on momenta"));
        }
        Ok(e)
    };
    let initial = match &q.initial {
        InitialSpec::Gaussian {
            center,
            width,
            momentum,
        } => {
            if width.is_nan() || *width <= 0.0 {
                return Err(invalid(
                    "quantum.initial.gaussian.width",
                    "must be positive",
                ));
            }
            InitialState::Gaussian {
                center: *center,
                width: *width,
                momentum: *momentum,
            }
        }
        InitialSpec::Expression { re, im } => InitialState::Expression {
            re: parse_coordinate("quantum.initial.expression.re", re)?,
            im: parse_coordinate("quantum.initial.expression.im", im)?,
        },
    };

    let mut observables = Vec::with_capacity(q.observables.len());
    for (i, o) in q.observables.iter().enumerate() {
        let field = format!("quantum.observables[{i}].expression");
        let e = space
            .parse(&o.expression)
            .map_err(|e| ScenarioError::Space {
                field: field.clone(),
                source: SpaceError::Parse(e),
            })?;
        let operator = AffineObservable::from_phase_function(space, &e, &check)
            .map_err(quantum_err(&field))?;
        if operator.at != 0 {
            return Err(invalid(
                field,
                "must not contain the homogeneous momentum `p`",
            ));
        }
        observables.push(Observable {
            label: o.label.clone(),
            operator,
            conserved: o.conserved,
        });
    }
    Ok(QuantumSetup {
        hamiltonian,
        grid,
        initial,
        observables,
    })
}

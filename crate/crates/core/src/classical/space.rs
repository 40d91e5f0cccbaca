use std::collections::BTreeSet;

use thiserror::Error;

use crate::expr::{parse, Binding, Domain, Expr, ParseError};

/// Name of the time coordinate.
pub const TIME: &str = "t";
/// Name of the momentum conjugate to time on the homogeneous phase space.
pub const HOMOGENEOUS_MOMENTUM: &str = "p";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("duplicate or reserved name `{0}`")]
    BadName(String),
    #[error("expected {expected} names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("time component must be 0 or 1, got {0}")]
    TimeComponent(i64),
    #[error("field has {got} components, space has dimension {expected}")]
    ComponentCount { expected: usize, got: usize },
    #[error("`{0}` may not depend on momenta")]
    MomentumDependent(String),
    #[error("Hamiltonian may not contain the homogeneous momentum `p`")]
    HomogeneousMomentum,
    #[error("symbol `{0}` is not declared in this space")]
    Undeclared(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Coordinates `(t, q^i)` of the configuration space, their conjugate
/// momenta `p_i`, and the model parameters with their values.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigurationSpace {
    coordinates: Vec<String>,
    momenta: Vec<String>,
    parameters: Vec<(String, f64)>,
}

impl ConfigurationSpace {
    /// Coordinates `q1..qn` and momenta `p1..pn`.
    pub fn new(n: usize) -> Result<Self, SpaceError> {
        let q = (1..=n).map(|i| format!("q{i}")).collect();
        let p = (1..=n).map(|i| format!("p{i}")).collect();
        Self::with_names(q, p)
    }

    pub fn with_names(coordinates: Vec<String>, momenta: Vec<String>) -> Result<Self, SpaceError> {
        if coordinates.is_empty() {
            return Err(SpaceError::ZeroDimension);
        }
        if coordinates.len() != momenta.len() {
            return Err(SpaceError::NameCount {
                expected: coordinates.len(),
                got: momenta.len(),
            });
        }
        let space = ConfigurationSpace {
            coordinates,
            momenta,
            parameters: Vec::new(),
        };
        space.check_unique()?;
        Ok(space)
    }

    pub fn with_parameter(mut self, name: &str, value: f64) -> Result<Self, SpaceError> {
        self.parameters.retain(|(n, _)| n != name);
        self.parameters.push((name.to_string(), value));
        self.check_unique()?;
        Ok(self)
    }

    fn check_unique(&self) -> Result<(), SpaceError> {
        let mut seen = BTreeSet::new();
        let all = self
            .coordinates
            .iter()
            .chain(&self.momenta)
            .chain(self.parameters.iter().map(|(n, _)| n));
        for name in all {
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid
                || name == TIME
                || name == HOMOGENEOUS_MOMENTUM
                || crate::scalar::Func::from_name(name).is_some()
                || !seen.insert(name.as_str())
            {
                return Err(SpaceError::BadName(name.clone()));
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.coordinates.len()
    }

    pub fn coordinates(&self) -> &[String] {
        &self.coordinates
    }

    pub fn momenta(&self) -> &[String] {
        &self.momenta
    }

    pub fn coordinate(&self, i: usize) -> &str {
        &self.coordinates[i]
    }

    pub fn momentum(&self, i: usize) -> &str {
        &self.momenta[i]
    }

    pub fn parameters(&self) -> &[(String, f64)] {
        &self.parameters
    }

    pub fn parameter_binding(&self) -> Binding<f64> {
        self.parameters
            .iter()
            .map(|(n, v)| (n.as_str(), *v))
            .collect()
    }

    /// `t`, the coordinates, the momenta and `p`, in that order.
    pub fn phase_variables(&self) -> Vec<&str> {
        let mut v = vec![TIME];
        v.extend(self.coordinates.iter().map(String::as_str));
        v.extend(self.momenta.iter().map(String::as_str));
        v.push(HOMOGENEOUS_MOMENTUM);
        v
    }

    pub fn parse(&self, text: &str) -> Result<Expr, ParseError> {
        let params: Vec<&str> = self.parameters.iter().map(|(n, _)| n.as_str()).collect();
        parse(text, &self.phase_variables(), &params)
    }

    pub fn is_momentum(&self, name: &str) -> bool {
        name == HOMOGENEOUS_MOMENTUM || self.momenta.iter().any(|m| m == name)
    }

    pub fn depends_on_momenta(&self, e: &Expr) -> bool {
        e.variables().iter().any(|v| self.is_momentum(v))
    }

    fn check_declared(&self, e: &Expr) -> Result<(), SpaceError> {
        let vars = self.phase_variables();
        for s in e.symbols() {
            if !vars.contains(&s.as_str()) && !self.parameters.iter().any(|(n, _)| *n == s) {
                return Err(SpaceError::Undeclared(s));
            }
        }
        Ok(())
    }

    /// Box over all phase variables with the parameters fixed at their values.
    pub fn sample_domain(&self, check: &SymmetryCheck) -> Domain {
        let mut d = Domain::new().range(TIME, check.time.0, check.time.1);
        for q in &self.coordinates {
            d = d.range(q, check.coordinate.0, check.coordinate.1);
        }
        for p in &self.momenta {
            d = d.range(p, check.momentum.0, check.momentum.1);
        }
        d.range(HOMOGENEOUS_MOMENTUM, check.momentum.0, check.momentum.1)
            .with_fixed(&self.parameter_binding())
    }
}

/// Sampling settings for symbolic identity checks on phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryCheck {
    pub time: (f64, f64),
    pub coordinate: (f64, f64),
    pub momentum: (f64, f64),
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SymmetryCheck {
    fn default() -> Self {
        SymmetryCheck {
            time: (0.0, 3.0),
            coordinate: (-2.0, 2.0),
            momentum: (-2.0, 2.0),
            samples: 64,
            tol: 1e-9,
            seed: crate::expr::DEFAULT_SEED,
        }
    }
}

/// A Hamiltonian function `H(t, q, p_i)` on a configuration space.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    space: ConfigurationSpace,
    expr: Expr,
}

impl Hamiltonian {
    pub fn new(space: ConfigurationSpace, expr: Expr) -> Result<Self, SpaceError> {
        space.check_declared(&expr)?;
        if expr.depends_on(HOMOGENEOUS_MOMENTUM) {
            return Err(SpaceError::HomogeneousMomentum);
        }
        Ok(Hamiltonian { space, expr })
    }

    pub fn parse(space: ConfigurationSpace, text: &str) -> Result<Self, SpaceError> {
        let expr = space.parse(text)?;
        Self::new(space, expr)
    }

    pub fn space(&self) -> &ConfigurationSpace {
        &self.space
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn is_time_dependent(&self) -> bool {
        self.expr.depends_on(TIME)
    }
}

/// `u = u^t d_t + u^i(t, q) d_i` with `u^t` in `{0, 1}`.
///
/// `u^t = 1` is a connection, `u^t = 0` a vertical field. Time
/// reparametrizations are not representable.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectableField {
    connection: bool,
    components: Vec<Expr>,
}

impl ProjectableField {
    pub fn new(
        space: &ConfigurationSpace,
        ut: i64,
        components: Vec<Expr>,
    ) -> Result<Self, SpaceError> {
        let connection = match ut {
            0 => false,
            1 => true,
            other => return Err(SpaceError::TimeComponent(other)),
        };
        if components.len() != space.dimension() {
            return Err(SpaceError::ComponentCount {
                expected: space.dimension(),
                got: components.len(),
            });
        }
        for c in &components {
            space.check_declared(c)?;
            if space.depends_on_momenta(c) {
                return Err(SpaceError::MomentumDependent(c.to_string()));
            }
        }
        Ok(ProjectableField {
            connection,
            components,
        })
    }

    pub fn parse(
        space: &ConfigurationSpace,
        ut: i64,
        components: &[&str],
    ) -> Result<Self, SpaceError> {
        let parsed = components
            .iter()
            .map(|c| space.parse(c))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(space, ut, parsed)
    }

    /// The vertical field `d_{q^i}`.
    pub fn translation(space: &ConfigurationSpace, i: usize) -> Self {
        let components = (0..space.dimension())
            .map(|j| if i == j { Expr::one() } else { Expr::zero() })
            .collect();
        ProjectableField {
            connection: false,
            components,
        }
    }

    pub fn time_component(&self) -> i64 {
        self.connection as i64
    }

    pub fn is_connection(&self) -> bool {
        self.connection
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    /// Connections form an affine space over the vertical fields: vertical
    /// plus vertical is vertical, connection plus vertical is a connection.
    pub fn add(&self, other: &ProjectableField) -> Result<Self, SpaceError> {
        if self.connection && other.connection {
            return Err(SpaceError::TimeComponent(2));
        }
        Ok(ProjectableField {
            connection: self.connection || other.connection,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Differences of two connections (or two vertical fields) are vertical.
    pub fn difference(&self, other: &ProjectableField) -> Result<Self, SpaceError> {
        if !self.connection && other.connection {
            return Err(SpaceError::TimeComponent(-1));
        }
        Ok(ProjectableField {
            connection: self.connection && !other.connection,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }
}

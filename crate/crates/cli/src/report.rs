//! Structured run summary and CSV time series.

use std::fs;
use std::path::Path;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">")]
    Exceeds,
}

/// A measured value and the bound it was tested against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub value: f64,
    pub tol: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    pub fn at_most(value: f64, tol: f64) -> Self {
        Check {
            value,
            tol,
            relation: Relation::AtMost,
            pass: value <= tol,
        }
    }

    pub fn exceeds(value: f64, tol: f64) -> Self {
        Check {
            value,
            tol,
            relation: Relation::Exceeds,
            pass: value > tol,
        }
    }

    /// `at_most` when the quantity is claimed conserved, `exceeds` otherwise.
    pub fn conserved(value: f64, tol: f64, expect: bool) -> Self {
        if expect {
            Self::at_most(value, tol)
        } else {
            Self::exceeds(value, tol)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Named {
    pub label: String,
    #[serde(flatten)]
    pub check: Check,
}

impl Named {
    pub fn new(label: impl Into<String>, check: Check) -> Self {
        Named {
            label: label.into(),
            check,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub seed: u64,
    pub samples: usize,
    pub symbolic_tol: f64,
    /// Set when `--tol` or the environment replaced the drift tolerances.
    pub drift_tol_override: Option<f64>,
    pub refine: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolicEntry {
    pub label: String,
    pub expect: bool,
    pub is_symmetry: bool,
    /// Largest sampled Lie-derivative coefficient; compared against the
    /// symbolic tolerance in the direction given by `expect`.
    pub residual: Check,
    pub noether_function: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalReport {
    pub integrator: String,
    pub dt: f64,
    pub steps: usize,
    pub final_time: f64,
    pub final_state: Vec<f64>,
    pub drift: Vec<Named>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub spacing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenReport {
    pub eigenvalues: Vec<f64>,
    /// Largest imaginary part of `<phi, H phi>` over the returned states.
    pub max_imaginary: Check,
    /// Largest `|<phi_i, phi_j> - delta_ij|`.
    pub orthonormality: Check,
    /// Relative error against the scenario's expected values.
    pub expected: Vec<Named>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementRow {
    pub level: usize,
    pub points: usize,
    pub spacing: f64,
    pub dt: f64,
    pub drift: Vec<(String, f64)>,
    /// Previous level's drift over this level's, per label.
    pub ratio: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumReport {
    pub grid: GridReport,
    pub dt: f64,
    pub steps: usize,
    pub hermiticity: Vec<Named>,
    pub norm_drift: Check,
    pub max_boundary_mass: Check,
    pub max_imaginary_mean: f64,
    pub mean_drift: Vec<Named>,
    pub eigen: Option<EigenReport>,
    pub refinement: Vec<RefinementRow>,
    pub refinement_checks: Vec<Named>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub metadata: Metadata,
    pub symbolic: Vec<SymbolicEntry>,
    pub classical: Option<ClassicalReport>,
    pub quantum: Option<QuantumReport>,
    /// One entry per failed claim or failed stage.
    pub failures: Vec<String>,
    pub passed: bool,
}

impl Report {
    /// Collects every failed claim into `failures` and sets `passed`.
    pub fn finish(&mut self) {
        let mut failed = Vec::new();
        for s in &self.symbolic {
            if !s.residual.pass {
                let want = if s.expect {
                    "a symmetry"
                } else {
                    "not a symmetry"
                };
                failed.push(format!("symbolic: {} expected to be {want}", s.label));
            }
        }
        if let Some(c) = &self.classical {
            push_named(&mut failed, "classical drift", &c.drift);
        }
        if let Some(q) = &self.quantum {
            push_named(&mut failed, "hermiticity", &q.hermiticity);
            push_check(&mut failed, "quantum norm drift", &q.norm_drift);
            push_check(&mut failed, "quantum boundary mass", &q.max_boundary_mass);
            push_named(&mut failed, "quantum mean drift", &q.mean_drift);
            push_named(&mut failed, "refinement", &q.refinement_checks);
            if let Some(e) = &q.eigen {
                push_check(&mut failed, "eigen imaginary part", &e.max_imaginary);
                push_check(&mut failed, "eigen orthonormality", &e.orthonormality);
                push_named(&mut failed, "eigenvalue", &e.expected);
            }
        }
        // stage errors were recorded first; keep them ahead of claim failures
        self.failures.extend(failed);
        self.passed = self.failures.is_empty();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }
}

fn describe(c: &Check) -> String {
    let rel = match c.relation {
        Relation::AtMost => "<=",
        Relation::Exceeds => ">",
    };
    format!("{:e} not {rel} {:e}", c.value, c.tol)
}

fn push_check(out: &mut Vec<String>, what: &str, c: &Check) {
    if !c.pass {
        out.push(format!("{what}: {}", describe(c)));
    }
}

fn push_named(out: &mut Vec<String>, what: &str, list: &[Named]) {
    for n in list {
        if !n.check.pass {
            out.push(format!("{what} {}: {}", n.label, describe(&n.check)));
        }
    }
}

/// Numeric table written as CSV with 17 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format!("{v:.16e}")))?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
    }
}

/// Writes `report.json` and whichever of `classical.csv`, `quantum.csv`
/// exist into `dir`, creating it if needed.
pub fn write_report(
    report: &Report,
    classical: Option<&Table>,
    quantum: Option<&Table>,
    dir: &Path,
) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.json"), report.to_json() + "\n")?;
    for (name, table) in [("classical.csv", classical), ("quantum.csv", quantum)] {
        if let Some(t) = table {
            fs::write(dir.join(name), t.to_csv().map_err(std::io::Error::other)?)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_seventeen_digits() {
        let mut t = Table::new(vec!["t".into(), "x".into()]);
        t.rows.push(vec![0.1, -2.0 / 3.0]);
        let csv = t.to_csv().unwrap();
        assert_eq!(csv, "t,x\n1.0000000000000001e-1,-6.6666666666666663e-1\n");
        assert_eq!(t.column("x").unwrap(), vec![-2.0 / 3.0]);
    }

    #[test]
    fn checks_and_directions() {
        assert!(Check::at_most(1e-9, 1e-8).pass);
        assert!(!Check::at_most(f64::NAN, 1e-8).pass);
        assert!(Check::conserved(0.5, 1e-6, false).pass);
        assert!(!Check::conserved(0.5, 1e-6, true).pass);
    }
}

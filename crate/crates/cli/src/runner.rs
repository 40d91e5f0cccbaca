//! Verification pipeline: symbolic checks, classical integration, quantum
//! evolution and spectrum.

use noether_core::classical::{
    conservation_drift, integrate, noether_function, series, symmetry_residual, SymmetryCheck, TIME,
};
use noether_core::quantum::{
    expectation, hermiticity_residual, mean_series, stationary_states, Grid, GridOperator,
    Observable, QuantumError, WaveFunction,
};
use noether_core::{Binding, DEFAULT_SEED};
use num_complex::Complex;

use crate::report::{
    Check, ClassicalReport, EigenReport, GridReport, Metadata, Named, QuantumReport, RefinementRow,
    Report, SymbolicEntry, Table,
};
use crate::scenario::{InitialState, QuantumSetup, Scenario};

pub const SYMBOLIC_TOL: f64 = 1e-9;
pub const SYMBOLIC_SAMPLES: usize = 64;
pub const CLASSICAL_DRIFT_TOL: f64 = 1e-8;
pub const QUANTUM_MEAN_TOL: f64 = 1e-6;
/// Per unit of evolution time.
pub const NORM_TOL: f64 = 1e-10;
pub const HERMITIAN_TOL: f64 = 1e-13;
pub const BOUNDARY_TOL: f64 = 1e-10;
pub const EIGEN_TOL: f64 = 1e-10;
pub const EIGEN_REL_TOL: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
    /// Replaces every drift tolerance when set.
    pub tol: Option<f64>,
    /// Number of joint `(h, dt)` halvings in the refinement sweep.
    pub refine: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: DEFAULT_SEED,
            tol: None,
            refine: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: Report,
    pub classical: Option<Table>,
    pub quantum: Option<Table>,
}

fn symmetry_check(opts: &RunOptions) -> SymmetryCheck {
    SymmetryCheck {
        samples: SYMBOLIC_SAMPLES,
        tol: SYMBOLIC_TOL,
        seed: opts.seed,
        ..SymmetryCheck::default()
    }
}

fn empty_report(s: &Scenario, opts: &RunOptions) -> Report {
    Report {
        scenario: s.file.name.clone(),
        metadata: Metadata {
            seed: opts.seed,
            samples: SYMBOLIC_SAMPLES,
            symbolic_tol: SYMBOLIC_TOL,
            drift_tol_override: opts.tol,
            refine: opts.refine,
        },
        symbolic: Vec::new(),
        classical: None,
        quantum: None,
        failures: Vec::new(),
        passed: false,
    }
}

/// Symbolic symmetry verdicts only.
pub fn check_scenario(s: &Scenario, opts: &RunOptions) -> Report {
    let mut report = empty_report(s, opts);
    symbolic_stage(s, opts, &mut report);
    report.finish();
    report
}

/// The full pipeline. Stage errors are recorded in the report and later
/// independent stages still run.
pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> RunOutput {
    let mut report = empty_report(s, opts);
    symbolic_stage(s, opts, &mut report);
    let classical = match classical_stage(s, opts) {
        Ok((block, table)) => {
            report.classical = Some(block);
            Some(table)
        }
        Err(e) => {
            report.failures.push(format!("classical: {e}"));
            None
        }
    };
    let quantum = match &s.quantum {
        None => None,
        Some(q) => match quantum_stage(s, q, opts) {
            Ok((block, table)) => {
                report.quantum = Some(block);
                Some(table)
            }
            Err(e) => {
                report.failures.push(format!("quantum: {e}"));
                None
            }
        },
    };
    report.finish();
    RunOutput {
        report,
        classical,
        quantum,
    }
}

fn symbolic_stage(s: &Scenario, opts: &RunOptions, report: &mut Report) {
    let check = symmetry_check(opts);
    for sym in &s.symmetries {
        match symmetry_residual(&sym.field, &s.hamiltonian, &check) {
            Ok(c) => report.symbolic.push(SymbolicEntry {
                label: sym.label.clone(),
                expect: sym.expect,
                is_symmetry: c.equal,
                residual: Check::conserved(c.max_residual, check.tol, sym.expect),
                noether_function: noether_function(&sym.field, &s.hamiltonian).to_string(),
            }),
            Err(e) => report.failures.push(format!("symbolic {}: {e}", sym.label)),
        }
    }
}

fn classical_stage(s: &Scenario, opts: &RunOptions) -> Result<(ClassicalReport, Table), String> {
    let c = &s.file.classical;
    let n = s.space.dimension();
    let mut init = Binding::new();
    for i in 0..n {
        init.set(s.space.coordinate(i), c.q[i]);
        init.set(s.space.momentum(i), c.p[i]);
    }
    let traj = integrate(&s.hamiltonian, &init, c.t0, c.t1, c.dt).map_err(|e| e.to_string())?;
    let tol = opts.tol.or(c.drift_tol).unwrap_or(CLASSICAL_DRIFT_TOL);

    let mut header = vec!["t".to_string()];
    header.extend(s.space.coordinates().iter().cloned());
    header.extend(s.space.momenta().iter().cloned());
    let mut columns = Vec::new();
    let mut drift = Vec::new();
    for sym in &s.symmetries {
        let f = noether_function(&sym.field, &s.hamiltonian);
        let values = series(&traj, &s.space, &f).map_err(|e| format!("{}: {e}", sym.label))?;
        let d =
            conservation_drift(&traj, &s.space, &f).map_err(|e| format!("{}: {e}", sym.label))?;
        header.push(format!("T_{}", sym.label));
        columns.push(values);
        drift.push(Named::new(&sym.label, Check::conserved(d, tol, sym.expect)));
    }
    let mut table = Table::new(header);
    for k in 0..traj.len() {
        let mut row = vec![traj.times[k]];
        row.extend(&traj.states[k]);
        row.extend(columns.iter().map(|col| col[k]));
        table.rows.push(row);
    }
    let block = ClassicalReport {
        integrator: traj.integrator.to_string(),
        dt: c.dt,
        steps: traj.len() - 1,
        final_time: traj.final_time(),
        final_state: traj.final_state().to_vec(),
        drift,
    };
    Ok((block, table))
}

/// The scenario's initial state sampled on `grid`.
pub fn initial_state(
    s: &Scenario,
    q: &QuantumSetup,
    grid: Grid<f64>,
) -> Result<WaveFunction<f64>, QuantumError> {
    let t0 = s.file.quantum.as_ref().map_or(0.0, |spec| spec.t0);
    match &q.initial {
        InitialState::Gaussian {
            center,
            width,
            momentum,
        } => WaveFunction::gaussian(grid, t0, *center, *width, *momentum),
        InitialState::Expression { re, im } => {
            let mut b = s.space.parameter_binding();
            b.set(TIME, t0);
            let x = s.space.coordinate(0);
            let values = grid
                .points()
                .into_iter()
                .map(|xj| {
                    b.set(x, xj);
                    Ok(Complex::new(re.evaluate(&b)?, im.evaluate(&b)?))
                })
                .collect::<Result<Vec<_>, QuantumError>>()?;
            WaveFunction::new(grid, t0, values)?.normalized()
        }
    }
}

struct Tracked {
    label: String,
    column: String,
    observable: Observable,
    /// `None` records the mean without a claim.
    conserved: Option<bool>,
    tol: f64,
}

fn tracked(s: &Scenario, q: &QuantumSetup, opts: &RunOptions) -> Vec<Tracked> {
    let spec = s.file.quantum.as_ref().expect("quantum setup has a spec");
    let mean_tol = spec.mean_tol.unwrap_or(QUANTUM_MEAN_TOL);
    let mut out: Vec<Tracked> = s
        .symmetries
        .iter()
        .map(|sym| Tracked {
            label: sym.label.clone(),
            column: format!("T_{}", sym.label),
            observable: Observable::Noether(sym.field.clone()),
            conserved: Some(sym.expect),
            tol: opts.tol.or(sym.quantum_tol).unwrap_or(mean_tol),
        })
        .collect();
    out.extend(q.observables.iter().map(|o| Tracked {
        label: o.label.clone(),
        column: o.label.clone(),
        observable: Observable::Affine(o.operator.clone()),
        conserved: o.conserved,
        tol: opts.tol.unwrap_or(mean_tol),
    }));
    out
}

fn hermiticity_checks(
    psi: &WaveFunction<f64>,
    ops: &[(String, GridOperator<f64>)],
) -> Result<Vec<Named>, QuantumError> {
    let mut out = Vec::new();
    for (label, op) in ops {
        out.push(Named::new(
            format!("{label} entrywise"),
            Check::at_most(op.hermitian_defect(), HERMITIAN_TOL),
        ));
        let r = hermiticity_residual(op, psi)?;
        out.push(Named::new(
            format!("{label} on initial state"),
            Check::at_most(r, HERMITIAN_TOL * (1.0 + op.max_abs())),
        ));
    }
    Ok(out)
}

fn quantum_stage(
    s: &Scenario,
    q: &QuantumSetup,
    opts: &RunOptions,
) -> Result<(QuantumReport, Table), QuantumError> {
    let spec = s.file.quantum.as_ref().expect("quantum setup has a spec");
    let psi0 = initial_state(s, q, q.grid)?;
    let tracked = tracked(s, q, opts);
    let h = &q.hamiltonian;

    let mut ops = vec![(
        "H".to_string(),
        noether_core::quantum::quantize_hamiltonian(h, &q.grid, spec.t0)?,
    )];
    for t in &tracked {
        ops.push((
            t.column.clone(),
            t.observable.operator(h, &q.grid, spec.t0)?,
        ));
    }
    let hermiticity = hermiticity_checks(&psi0, &ops)?;

    let observables: Vec<Observable> = tracked.iter().map(|t| t.observable.clone()).collect();
    let series = mean_series(&psi0, h, &observables, spec.t1, spec.dt, 1)?;

    let mut header = vec!["t".to_string(), "norm".to_string()];
    header.extend(tracked.iter().map(|t| t.column.clone()));
    header.push("boundary_mass".into());
    let mut table = Table::new(header);
    for k in 0..series.times.len() {
        let mut row = vec![series.times[k], series.norms[k]];
        row.extend(series.means.iter().map(|m| m[k]));
        row.push(series.boundary_mass[k]);
        table.rows.push(row);
    }

    let mut mean_drift = Vec::new();
    for (i, t) in tracked.iter().enumerate() {
        if let Some(expect) = t.conserved {
            mean_drift.push(Named::new(
                &t.label,
                Check::conserved(series.mean_drift(i), t.tol, expect),
            ));
        }
    }

    let span = spec.t1 - spec.t0;
    let eigen = if spec.eigencount > 0 {
        Some(eigen_report(
            &ops[0].1,
            spec.eigencount,
            &spec.expected_eigenvalues,
            spec.eigen_rel_tol,
        )?)
    } else {
        None
    };
    let (refinement, refinement_checks) = refinement(s, q, &tracked, opts.refine, &series)?;
    let block = QuantumReport {
        grid: GridReport {
            x_min: q.grid.x_min(),
            x_max: q.grid.x_max(),
            points: q.grid.len(),
            spacing: q.grid.spacing(),
        },
        dt: spec.dt,
        steps: series.times.len() - 1,
        hermiticity,
        norm_drift: Check::at_most(series.norm_drift(), NORM_TOL * span.max(1.0)),
        max_boundary_mass: Check::at_most(
            series.max_boundary_mass(),
            spec.boundary_tol.unwrap_or(BOUNDARY_TOL),
        ),
        max_imaginary_mean: series.max_imag,
        mean_drift,
        eigen,
        refinement,
        refinement_checks,
    };
    Ok((block, table))
}

/// Lowest `count` states of `op` with realness and orthonormality checks.
pub fn eigen_report(
    op: &GridOperator<f64>,
    count: usize,
    expected: &[f64],
    rel_tol: Option<f64>,
) -> Result<EigenReport, QuantumError> {
    let states = stationary_states(op, count)?;
    let mut max_imag: f64 = 0.0;
    let mut ortho: f64 = 0.0;
    for (i, a) in states.iter().enumerate() {
        max_imag = max_imag.max(expectation(&a.state, op)?.im.abs());
        for (j, b) in states.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            ortho = ortho.max((a.state.inner(&b.state)? - Complex::new(want, 0.0)).norm());
        }
    }
    let rel_tol = rel_tol.unwrap_or(EIGEN_REL_TOL);
    let expected = expected
        .iter()
        .zip(&states)
        .enumerate()
        .map(|(n, (want, got))| {
            let err = (got.energy - want).abs() / want.abs().max(f64::MIN_POSITIVE);
            Named::new(format!("E{}", n + 1), Check::at_most(err, rel_tol))
        })
        .collect();
    Ok(EigenReport {
        eigenvalues: states.iter().map(|s| s.energy).collect(),
        max_imaginary: Check::at_most(max_imag, EIGEN_TOL),
        orthonormality: Check::at_most(ortho, EIGEN_TOL),
        expected,
    })
}

/// Grid, step and per-symmetry drift of one refinement level.
type LevelRun = (Grid<f64>, f64, Vec<f64>);

/// Reruns the evolution with `h` and `dt` halved `levels` times, levels in
/// parallel.
fn refinement(
    s: &Scenario,
    q: &QuantumSetup,
    tracked: &[Tracked],
    levels: usize,
    base: &noether_core::quantum::MeanSeries<f64>,
) -> Result<(Vec<RefinementRow>, Vec<Named>), QuantumError> {
    if levels == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let spec = s.file.quantum.as_ref().expect("quantum setup has a spec");
    let symmetric: Vec<(usize, &Tracked)> = tracked
        .iter()
        .enumerate()
        .filter(|(_, t)| matches!(t.observable, Observable::Noether(_)))
        .collect();
    let observables: Vec<Observable> = symmetric
        .iter()
        .map(|(_, t)| t.observable.clone())
        .collect();

    let runs: Vec<Result<LevelRun, QuantumError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (1..=levels)
            .map(|level| {
                let observables = &observables;
                scope.spawn(move || {
                    let mut grid = q.grid;
                    for _ in 0..level {
                        grid = grid.refined();
                    }
                    let dt = spec.dt / f64::powi(2.0, level as i32);
                    let psi0 = initial_state(s, q, grid)?;
                    let series = mean_series(&psi0, &q.hamiltonian, observables, spec.t1, dt, 1)?;
                    let drift = (0..observables.len())
                        .map(|i| series.mean_drift(i))
                        .collect();
                    Ok((grid, dt, drift))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("refinement thread panicked"))
            .collect()
    });

    let mut rows = vec![RefinementRow {
        level: 0,
        points: q.grid.len(),
        spacing: q.grid.spacing(),
        dt: spec.dt,
        drift: symmetric
            .iter()
            .map(|(i, t)| (t.label.clone(), base.mean_drift(*i)))
            .collect(),
        ratio: Vec::new(),
    }];
    for (level, run) in (1..=levels).zip(runs) {
        let (grid, dt, drift) = run?;
        let prev = &rows[level - 1].drift;
        let ratio = symmetric
            .iter()
            .zip(&drift)
            .zip(prev)
            .map(|(((_, t), d), (_, p))| (t.label.clone(), p / d))
            .collect();
        rows.push(RefinementRow {
            level,
            points: grid.len(),
            spacing: grid.spacing(),
            dt,
            drift: symmetric
                .iter()
                .zip(&drift)
                .map(|((_, t), d)| (t.label.clone(), *d))
                .collect(),
            ratio,
        });
    }
    // a conserved mean must not drift more on a finer grid, up to its tolerance
    let checks = symmetric
        .iter()
        .enumerate()
        .filter(|(_, (_, t))| t.conserved == Some(true))
        .map(|(k, (_, t))| {
            let coarse = rows[0].drift[k].1;
            let fine = rows[levels].drift[k].1;
            Named::new(
                format!("{} finest vs coarsest", t.label),
                Check::at_most(fine, coarse.max(t.tol)),
            )
        })
        .collect();
    Ok((rows, checks))
}

#[derive(Debug, thiserror::Error)]
pub enum SpectrumError {
    #[error("scenario has no quantum section")]
    NoQuantum,
    #[error("the Hamiltonian depends on time; stationary states need a time-independent one")]
    TimeDependent,
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

pub fn spectrum(s: &Scenario, count: usize) -> Result<EigenReport, SpectrumError> {
    let q = s.quantum.as_ref().ok_or(SpectrumError::NoQuantum)?;
    if q.hamiltonian.is_time_dependent() {
        return Err(SpectrumError::TimeDependent);
    }
    let spec = s.file.quantum.as_ref().expect("quantum setup has a spec");
    let op = noether_core::quantum::quantize_hamiltonian(&q.hamiltonian, &q.grid, spec.t0)?;
    let expected = &spec.expected_eigenvalues[..spec.expected_eigenvalues.len().min(count)];
    Ok(eigen_report(&op, count, expected, spec.eigen_rel_tol)?)
}

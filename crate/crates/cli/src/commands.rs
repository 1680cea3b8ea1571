//! One function per subcommand. Grid points fan out to a bounded worker
//! pool and come back in grid order, so the output does not depend on the
//! number of workers.

use rayon::prelude::*;
use rayon::ThreadPool;

use crossstitch_core::bands::{phase_diagram_row, sample_bands_with_tol};
use crossstitch_core::fano::verify_equivalence;
use crossstitch_core::spectra::{spectrum, SpectrumOptions};
use crossstitch_core::transport::{transmission_point, Continuation, SweepRow};
use crossstitch_core::{ComplexEnergy, Error as CoreError, FiniteLattice, LatticeParams};

use crate::config::{Command, Resolved, RunConfig};
use crate::error::{status_code, CliError};
use crate::output::{FanoCase, FanoReport, Field, Output, Table};

const BAND_COLUMNS: [&str; 6] = [
    "k(rad)",
    "re_eps_plus(energy)",
    "im_eps_plus(energy)",
    "re_eps_minus(energy)",
    "im_eps_minus(energy)",
    "phase(label)",
];
const TRANSPORT_COLUMNS: [&str; 3] = ["transmission(prob)", "reflection(prob)", "status(label)"];

pub fn build_pool(workers: usize) -> Result<ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {workers} workers: {e}")))
}

fn par_map<T: Sync, R: Send>(pool: &ThreadPool, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    pool.install(|| items.par_iter().map(f).collect())
}

/// Runs the configured subcommand and returns its artifact.
pub fn run(cfg: &RunConfig) -> Result<Output, CliError> {
    let pool = build_pool(cfg.workers)?;
    let r = &cfg.resolved;
    Ok(match cfg.command {
        Command::Bands => Output::Table(bands(r, &pool)?),
        Command::PhaseDiagram => Output::Table(phase_diagram(r, &pool)?),
        Command::Spectrum => Output::Table(eigenvalues(r, &pool)?),
        Command::Transmit => Output::Table(transmit(r, &pool)?),
        Command::ComplexMap => Output::Table(complex_map(r, &pool)?),
        Command::GammaShift => Output::Table(gamma_shift(r, &pool)?),
        Command::FanoCheck => Output::Report(fano_check(r, &pool)?),
    })
}

/// Parameter sets for each outer sweep value, or the base set alone.
fn cases(r: &Resolved) -> Result<Vec<(Option<f64>, LatticeParams)>, CliError> {
    match r.sweep() {
        Some((axis, values)) => values
            .into_iter()
            .map(|v| Ok((Some(v), r.params_at(axis, v)?)))
            .collect(),
        None => Ok(vec![(None, r.lattice_params())]),
    }
}

fn columns(r: &Resolved, tail: &[&'static str]) -> Vec<&'static str> {
    let mut c: Vec<&'static str> = r.sweep().map(|(axis, _)| axis.column()).into_iter().collect();
    c.extend_from_slice(tail);
    c
}

fn lattice(r: &Resolved, p: LatticeParams, loss: f64) -> Result<FiniteLattice, CliError> {
    let n = r.n_cells.expect("n_cells is resolved for chain commands");
    Ok(FiniteLattice::with_loss(n, p, loss)?)
}

fn bands(r: &Resolved, pool: &ThreadPool) -> Result<Table, CliError> {
    let nk = r.grids.k.expect("k grid is resolved for bands");
    let tol = r.tolerances.ep;
    let cases = cases(r)?;
    let sampled = par_map(pool, &cases, |(_, p)| sample_bands_with_tol(p, nk, tol));
    let mut table = Table::new(columns(r, &BAND_COLUMNS));
    for ((value, _), s) in cases.iter().zip(sampled) {
        for b in s?.points {
            let mut row: Vec<Field> = value.map(Field::Num).into_iter().collect();
            row.extend([
                Field::Num(b.k),
                Field::Num(b.plus.re),
                Field::Num(b.plus.im),
                Field::Num(b.minus.re),
                Field::Num(b.minus.im),
                Field::Label(b.label.map_or("none", |l| l.as_str())),
            ]);
            table.push(row);
        }
    }
    Ok(table)
}

fn phase_diagram(r: &Resolved, pool: &ThreadPool) -> Result<Table, CliError> {
    let nk = r.grids.k.expect("k grid is resolved for phase-diagram");
    let energies = r.grids.energy.expect("energy grid is resolved").values();
    let gammas = r.grids.gamma.expect("gamma grid is resolved").values();
    let base = r.lattice_params();
    let rows = par_map(pool, &gammas, |&g| -> Result<_, CliError> {
        Ok(phase_diagram_row(&base.with_gamma(g)?, &energies, nk)?)
    });
    let mut table = Table::new(vec!["gamma(energy)", "energy(energy)", "region(label)"]);
    for (&g, labels) in gammas.iter().zip(rows) {
        for (&e, label) in energies.iter().zip(labels?) {
            table.push(vec![Field::Num(g), Field::Num(e), Field::Label(label.as_str())]);
        }
    }
    Ok(table)
}

fn eigenvalues(r: &Resolved, pool: &ThreadPool) -> Result<Table, CliError> {
    let opts = SpectrumOptions {
        residual_tol: r.tolerances.residual,
        ..SpectrumOptions::default()
    };
    let loss = r.overall_loss.unwrap_or(0.0);
    let cases = cases(r)?;
    let lattices = cases
        .iter()
        .map(|(_, p)| lattice(r, *p, loss))
        .collect::<Result<Vec<_>, _>>()?;
    let spectra = par_map(pool, &lattices, |fl| spectrum(fl, &opts));
    let swept = r.sweep().is_some();
    let tail: &[&'static str] = if swept {
        &["re_eps(energy)", "im_eps(energy)", "residual(energy)", "status(label)"]
    } else {
        &["re_eps(energy)", "im_eps(energy)", "residual(energy)"]
    };
    let mut table = Table::new(columns(r, tail));
    for ((value, _), result) in cases.iter().zip(spectra) {
        match result {
            Ok(s) => {
                for (z, res) in s.values.iter().zip(&s.residuals) {
                    let mut row: Vec<Field> = value.map(Field::Num).into_iter().collect();
                    row.extend([Field::Num(z.re), Field::Num(z.im), Field::Num(*res)]);
                    if swept {
                        row.push(Field::Label("ok"));
                    }
                    table.push(row);
                }
            }
            Err(e) if swept => {
                let nan = Field::Num(f64::NAN);
                table.push(vec![
                    Field::Num(value.expect("swept case")),
                    nan.clone(),
                    nan.clone(),
                    nan,
                    Field::Label(status_code(&e)),
                ]);
                table.failed += 1;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(table)
}

fn transport_fields(row: &SweepRow, out: &mut Vec<Field>) -> bool {
    match &row.outcome {
        Ok(p) => {
            out.extend([Field::Num(p.transmission), Field::Num(p.reflection), Field::Label("ok")]);
            true
        }
        Err(e) => {
            out.extend([Field::Num(f64::NAN), Field::Num(f64::NAN), Field::Label(status_code(e))]);
            false
        }
    }
}

/// Solves every `(lattice, energy)` pair in parallel and lays the rows out
/// lattice-major, each prefixed by `prefix(lattice index, energy)`.
fn transport_table(
    pool: &ThreadPool,
    columns: Vec<&'static str>,
    lattices: &[FiniteLattice],
    energies: &[ComplexEnergy],
    r: &Resolved,
    prefix: impl Fn(usize, ComplexEnergy) -> Vec<Field>,
) -> Table {
    let lead = r.lead_params();
    let items: Vec<(usize, ComplexEnergy)> = (0..lattices.len())
        .flat_map(|i| energies.iter().map(move |&e| (i, e)))
        .collect();
    let solved = par_map(pool, &items, |&(i, e)| {
        transmission_point(&lattices[i], &lead, e, Continuation::default())
    });
    let mut table = Table::new(columns);
    for (&(i, e), s) in items.iter().zip(&solved) {
        let mut row = prefix(i, e);
        if !transport_fields(s, &mut row) {
            table.failed += 1;
        }
        table.push(row);
    }
    table
}

fn real_grid(values: Vec<f64>) -> Vec<ComplexEnergy> {
    values.into_iter().map(|e| ComplexEnergy::new(e, 0.0)).collect()
}

fn transmit(r: &Resolved, pool: &ThreadPool) -> Result<Table, CliError> {
    let energies = real_grid(r.grids.energy.expect("energy grid is resolved").values());
    let loss = r.overall_loss.unwrap_or(0.0);
    let cases = cases(r)?;
    let lattices = cases
        .iter()
        .map(|(_, p)| lattice(r, *p, loss))
        .collect::<Result<Vec<_>, _>>()?;
    let mut tail = vec!["energy(energy)"];
    tail.extend(TRANSPORT_COLUMNS);
    Ok(transport_table(
        pool,
        columns(r, &tail),
        &lattices,
        &energies,
        r,
        |i, e| {
            cases[i]
                .0
                .map(Field::Num)
                .into_iter()
                .chain([Field::Num(e.re)])
                .collect()
        },
    ))
}

fn complex_map(r: &Resolved, pool: &ThreadPool) -> Result<Table, CliError> {
    let er = r.grids.energy.expect("energy grid is resolved").values();
    let ei = r.grids.energy_imag.expect("imaginary energy grid is resolved").values();
    let energies: Vec<ComplexEnergy> = ei
        .iter()
        .flat_map(|&y| er.iter().map(move |&x| ComplexEnergy::new(x, y)))
        .collect();
    let fl = lattice(r, r.lattice_params(), r.overall_loss.unwrap_or(0.0))?;
    let mut columns = vec!["re_energy(energy)", "im_energy(energy)"];
    columns.extend(TRANSPORT_COLUMNS);
    Ok(transport_table(pool, columns, &[fl], &energies, r, |_, e| {
        vec![Field::Num(e.re), Field::Num(e.im)]
    }))
}

fn gamma_shift(r: &Resolved, pool: &ThreadPool) -> Result<Table, CliError> {
    let energies = real_grid(r.grids.energy.expect("energy grid is resolved").values());
    let losses = r.loss_values.clone().expect("losses are resolved for gamma-shift");
    let p = r.lattice_params();
    let lattices = losses
        .iter()
        .map(|&l| lattice(r, p, l))
        .collect::<Result<Vec<_>, _>>()?;
    let mut columns = vec!["overall_loss(energy)", "energy(energy)"];
    columns.extend(TRANSPORT_COLUMNS);
    Ok(transport_table(pool, columns, &lattices, &energies, r, |i, e| {
        vec![Field::Num(losses[i]), Field::Num(e.re)]
    }))
}

fn fano_check(r: &Resolved, pool: &ThreadPool) -> Result<FanoReport, CliError> {
    let tol = r.tolerances.equivalence;
    let loss = r.overall_loss.unwrap_or(0.0);
    let cases = cases(r)?;
    let lattices = cases
        .iter()
        .map(|(_, p)| lattice(r, *p, loss))
        .collect::<Result<Vec<_>, _>>()?;
    let results = par_map(pool, &lattices, |fl| verify_equivalence(fl, tol));
    let cases: Vec<FanoCase> = lattices
        .iter()
        .zip(results)
        .map(|(fl, res)| {
            let (status, n_values, max_distance) = match res {
                Ok(rep) => ("pass", Some(rep.n_values), Some(rep.max_distance)),
                Err(CoreError::EquivalenceFailure { max_distance, .. }) => ("fail", Some(fl.dim()), Some(max_distance)),
                Err(e) => (status_code(&e), None, None),
            };
            FanoCase {
                gamma: fl.params().gamma(),
                delta: fl.params().delta(),
                status,
                n_values,
                max_distance,
                tol,
            }
        })
        .collect();
    let status = if cases.iter().all(|c| c.status == "pass") {
        "pass"
    } else {
        "fail"
    };
    Ok(FanoReport {
        status,
        n_cells: r.n_cells.expect("n_cells is resolved"),
        cases,
    })
}

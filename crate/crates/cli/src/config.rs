//! Run configuration: strict JSON file, flag overrides and per-command
//! resolution into the fully explicit [`Resolved`] form that is hashed.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crossstitch_core::bands::DEFAULT_EP_TOL;
use crossstitch_core::{FiniteLattice, LatticeParams, LeadParams};

use crate::error::CliError;

pub const DEFAULT_PHASE_K_POINTS: usize = 512;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;
pub const DEFAULT_EQUIVALENCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Bands,
    PhaseDiagram,
    Spectrum,
    Transmit,
    ComplexMap,
    GammaShift,
    FanoCheck,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Bands,
        Command::PhaseDiagram,
        Command::Spectrum,
        Command::Transmit,
        Command::ComplexMap,
        Command::GammaShift,
        Command::FanoCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Bands => "bands",
            Command::PhaseDiagram => "phase-diagram",
            Command::Spectrum => "spectrum",
            Command::Transmit => "transmit",
            Command::ComplexMap => "complex-map",
            Command::GammaShift => "gamma-shift",
            Command::FanoCheck => "fano-check",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }

    fn uses_lead(self) -> bool {
        matches!(self, Command::Transmit | Command::ComplexMap | Command::GammaShift)
    }

    fn uses_chain(self) -> bool {
        !matches!(self, Command::Bands | Command::PhaseDiagram)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawLattice {
    pub t: Option<f64>,
    pub d: Option<f64>,
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawLead {
    pub v0: Option<f64>,
    pub g: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawRange {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawKGrid {
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrids {
    pub k: Option<RawKGrid>,
    pub energy: Option<RawRange>,
    pub energy_imag: Option<RawRange>,
    pub gamma: Option<RawRange>,
    pub delta: Option<RawRange>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawTolerances {
    pub ep: Option<f64>,
    pub residual: Option<f64>,
    pub equivalence: Option<f64>,
}

/// Configuration file contents. Every field is optional here; which keys
/// are required depends on the subcommand.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub command: Option<String>,
    pub lattice: Option<RawLattice>,
    pub lead: Option<RawLead>,
    pub n_cells: Option<usize>,
    pub overall_loss: Option<f64>,
    pub loss_values: Option<Vec<f64>>,
    pub grids: Option<RawGrids>,
    pub tolerances: Option<RawTolerances>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl RawConfig {
    pub fn from_json(text: &str, path: &Path) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|source| CliError::ParseConfig {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, path)
    }
}

/// Flag values; each `Some` replaces the corresponding file value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub t: Option<f64>,
    pub d: Option<f64>,
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
    pub overall_loss: Option<f64>,
    pub n_cells: Option<usize>,
    pub v0: Option<f64>,
    pub g: Option<f64>,
    pub k_points: Option<usize>,
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub e_points: Option<usize>,
    pub ei_min: Option<f64>,
    pub ei_max: Option<f64>,
    pub ei_points: Option<usize>,
    pub gamma_min: Option<f64>,
    pub gamma_max: Option<f64>,
    pub gamma_points: Option<usize>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

fn set<T>(slot: &mut Option<T>, value: Option<T>) {
    if value.is_some() {
        *slot = value;
    }
}

fn set_range(slot: &mut Option<RawRange>, min: Option<f64>, max: Option<f64>, points: Option<usize>) {
    if min.is_none() && max.is_none() && points.is_none() {
        return;
    }
    let r = slot.get_or_insert_with(RawRange::default);
    set(&mut r.min, min);
    set(&mut r.max, max);
    set(&mut r.points, points);
}

impl RawConfig {
    pub fn apply(&mut self, o: &Overrides) {
        let lattice = self.lattice.get_or_insert_with(RawLattice::default);
        set(&mut lattice.t, o.t);
        set(&mut lattice.d, o.d);
        set(&mut lattice.delta, o.delta);
        set(&mut lattice.gamma, o.gamma);
        if o.v0.is_some() || o.g.is_some() {
            let lead = self.lead.get_or_insert_with(RawLead::default);
            set(&mut lead.v0, o.v0);
            set(&mut lead.g, o.g);
        }
        if o.overall_loss.is_some() {
            // A flag value replaces any list of losses from the file.
            self.overall_loss = o.overall_loss;
            self.loss_values = None;
        }
        set(&mut self.n_cells, o.n_cells);
        set(&mut self.out, o.out.clone());
        set(&mut self.workers, o.workers);
        let grids = self.grids.get_or_insert_with(RawGrids::default);
        if o.k_points.is_some() {
            grids.k.get_or_insert_with(RawKGrid::default).points = o.k_points;
        }
        set_range(&mut grids.energy, o.e_min, o.e_max, o.e_points);
        set_range(&mut grids.energy_imag, o.ei_min, o.ei_max, o.ei_points);
        set_range(&mut grids.gamma, o.gamma_min, o.gamma_max, o.gamma_points);
    }
}

/// Inclusive uniform range with at least two points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        let step = (self.max - self.min) / (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lattice {
    pub t: f64,
    pub d: f64,
    pub delta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lead {
    pub v0: f64,
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grids {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<Range>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_imag: Option<Range>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Range>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<Range>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub ep: f64,
    pub residual: f64,
    pub equivalence: f64,
}

/// Parameter swept over in an outer loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Gamma,
    Delta,
}

impl SweepAxis {
    pub fn column(self) -> &'static str {
        match self {
            SweepAxis::Gamma => "gamma(energy)",
            SweepAxis::Delta => "delta(energy)",
        }
    }
}

/// Everything a run depends on, with defaults filled in and keys the
/// subcommand does not read removed. The output path and worker count are
/// deliberately absent: they do not change the numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub command: &'static str,
    pub lattice: Lattice,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lead: Option<Lead>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_cells: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overall_loss: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loss_values: Option<Vec<f64>>,
    pub grids: Grids,
    pub tolerances: Tolerances,
}

/// A resolved run plus the execution settings that stay out of the hash.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub resolved: Resolved,
    pub out: Option<PathBuf>,
    pub workers: usize,
    /// Keys present in the file that the subcommand ignores.
    pub unused: Vec<String>,
}

struct Resolver {
    command: Command,
    unused: Vec<String>,
}

impl Resolver {
    fn missing(&self, key: &str) -> CliError {
        CliError::MissingKey {
            key: key.to_string(),
            command: self.command.name(),
        }
    }

    fn range(&self, key: &str, raw: &Option<RawRange>) -> Result<Option<Range>, CliError> {
        let Some(r) = raw else { return Ok(None) };
        let min = r.min.ok_or_else(|| self.missing(&format!("{key}.min")))?;
        let max = r.max.ok_or_else(|| self.missing(&format!("{key}.max")))?;
        let points = r.points.ok_or_else(|| self.missing(&format!("{key}.points")))?;
        if !min.is_finite() || !max.is_finite() {
            return Err(CliError::Config(format!("`{key}` bounds must be finite")));
        }
        if points < 2 {
            return Err(CliError::Config(format!(
                "`{key}.points` must be at least 2, got {points}"
            )));
        }
        if max <= min {
            return Err(CliError::Config(format!("`{key}.max` must exceed `{key}.min`")));
        }
        Ok(Some(Range { min, max, points }))
    }

    fn required<T>(&self, key: &str, v: Option<T>) -> Result<T, CliError> {
        v.ok_or_else(|| self.missing(key))
    }

    /// Keeps `v` if the command reads it, otherwise records it as unused.
    fn keep<T>(&mut self, key: &str, used: bool, v: Option<T>) -> Option<T> {
        if used {
            v
        } else {
            if v.is_some() {
                self.unused.push(key.to_string());
            }
            None
        }
    }
}

fn positive(key: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Config(format!(
            "`{key}` must be positive and finite, got {v}"
        )))
    }
}

impl RawConfig {
    /// Validates the configuration for `command` and fills in defaults.
    pub fn resolve(self, command: Command) -> Result<RunConfig, CliError> {
        if let Some(name) = &self.command {
            match Command::from_name(name) {
                None => return Err(CliError::Config(format!("unknown command `{name}` in key `command`"))),
                Some(c) if c != command => {
                    return Err(CliError::Config(format!(
                        "config is for `{name}` but the subcommand is `{}`",
                        command.name()
                    )))
                }
                Some(_) => {}
            }
        }
        let mut r = Resolver {
            command,
            unused: Vec::new(),
        };
        let lat = self.lattice.unwrap_or_default();
        let lattice = Lattice {
            t: lat.t.unwrap_or(1.0),
            d: lat.d.unwrap_or(1.0),
            delta: lat.delta.unwrap_or(0.0),
            gamma: lat.gamma.unwrap_or(0.0),
        };
        LatticeParams::new(lattice.t, lattice.d, lattice.delta, lattice.gamma)?;

        let lead = r.keep("lead", command.uses_lead(), self.lead);
        let lead = command.uses_lead().then(|| {
            let l = lead.unwrap_or_default();
            let defaults = LeadParams::default();
            Lead {
                v0: l.v0.unwrap_or(defaults.v0()),
                g: l.g.unwrap_or(defaults.g()),
            }
        });
        if let Some(l) = lead {
            LeadParams::new(l.v0, l.g)?;
        }

        let n_cells = r.keep("n_cells", command.uses_chain(), self.n_cells);
        let n_cells = if command.uses_chain() {
            Some(r.required("n_cells", n_cells)?)
        } else {
            None
        };

        let is_shift = command == Command::GammaShift;
        let loss_values = r.keep("loss_values", is_shift, self.loss_values);
        let (overall_loss, loss_values) = if is_shift {
            let losses = match (loss_values, self.overall_loss) {
                (Some(v), _) => v,
                (None, Some(x)) => vec![x],
                (None, None) => return Err(r.missing("loss_values")),
            };
            if losses.is_empty() {
                return Err(CliError::Config("`loss_values` must be nonempty".into()));
            }
            (None, Some(losses))
        } else {
            let used = command.uses_chain();
            (
                r.keep("overall_loss", used, self.overall_loss).or(used.then_some(0.0)),
                None,
            )
        };
        if let Some(n) = n_cells {
            let p = LatticeParams::new(lattice.t, lattice.d, lattice.delta, lattice.gamma)?;
            for &loss in overall_loss.iter().chain(loss_values.iter().flatten()) {
                FiniteLattice::with_loss(n, p, loss)?;
            }
        }

        let g = self.grids.unwrap_or_default();
        let k_used = matches!(command, Command::Bands | Command::PhaseDiagram);
        let k = r.keep("grids.k", k_used, g.k).map(|k| k.points);
        let k = match command {
            Command::Bands => Some(r.required("grids.k.points", r.required("grids.k", k)?)?),
            Command::PhaseDiagram => Some(k.flatten().unwrap_or(DEFAULT_PHASE_K_POINTS)),
            _ => None,
        };
        if let Some(nk) = k {
            if nk < 2 {
                return Err(CliError::Config(format!(
                    "`grids.k.points` must be at least 2, got {nk}"
                )));
            }
        }

        let energy_used = !matches!(command, Command::Bands | Command::Spectrum | Command::FanoCheck);
        let energy = r.keep("grids.energy", energy_used, g.energy);
        let energy = r.range("grids.energy", &energy)?;
        if energy_used {
            r.required("grids.energy", energy)?;
        }

        let imag_used = command == Command::ComplexMap;
        let energy_imag = r.keep("grids.energy_imag", imag_used, g.energy_imag);
        let energy_imag = r.range("grids.energy_imag", &energy_imag)?;
        if imag_used {
            r.required("grids.energy_imag", energy_imag)?;
        }

        let gamma_used = matches!(
            command,
            Command::Bands | Command::PhaseDiagram | Command::Spectrum | Command::Transmit | Command::FanoCheck
        );
        let gamma = r.keep("grids.gamma", gamma_used, g.gamma);
        let gamma = r.range("grids.gamma", &gamma)?;
        if command == Command::PhaseDiagram {
            r.required("grids.gamma", gamma)?;
        }

        let delta_used = matches!(command, Command::Bands | Command::Transmit);
        let delta = r.keep("grids.delta", delta_used, g.delta);
        let delta = r.range("grids.delta", &delta)?;
        if gamma.is_some() && delta.is_some() {
            return Err(CliError::Config(
                "`grids.gamma` and `grids.delta` cannot both be swept".into(),
            ));
        }
        if command == Command::PhaseDiagram && lattice.delta != 0.0 {
            return Err(CliError::Config("phase-diagram needs `lattice.delta` = 0".into()));
        }

        let tol = self.tolerances.unwrap_or_default();
        let tolerances = Tolerances {
            ep: positive("tolerances.ep", tol.ep.unwrap_or(DEFAULT_EP_TOL))?,
            residual: positive("tolerances.residual", tol.residual.unwrap_or(DEFAULT_RESIDUAL_TOL))?,
            equivalence: positive(
                "tolerances.equivalence",
                tol.equivalence.unwrap_or(DEFAULT_EQUIVALENCE_TOL),
            )?,
        };

        let workers = match self.workers {
            Some(0) => return Err(CliError::Config("`workers` must be at least 1".into())),
            Some(w) => w,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };

        Ok(RunConfig {
            command,
            resolved: Resolved {
                command: command.name(),
                lattice,
                lead,
                n_cells,
                overall_loss,
                loss_values,
                grids: Grids {
                    k,
                    energy,
                    energy_imag,
                    gamma,
                    delta,
                },
                tolerances,
            },
            out: self.out,
            workers,
            unused: r.unused,
        })
    }
}

impl Resolved {
    pub fn lattice_params(&self) -> LatticeParams {
        let l = self.lattice;
        LatticeParams::new(l.t, l.d, l.delta, l.gamma).expect("validated during resolution")
    }

    pub fn lead_params(&self) -> LeadParams {
        let l = self.lead.expect("lead is resolved for transport commands");
        LeadParams::new(l.v0, l.g).expect("validated during resolution")
    }

    pub fn sweep(&self) -> Option<(SweepAxis, Vec<f64>)> {
        match (&self.grids.gamma, &self.grids.delta) {
            (Some(g), _) => Some((SweepAxis::Gamma, g.values())),
            (None, Some(d)) => Some((SweepAxis::Delta, d.values())),
            (None, None) => None,
        }
    }

    /// Lattice parameters with the sweep axis set to `value`.
    pub fn params_at(&self, axis: SweepAxis, value: f64) -> Result<LatticeParams, CliError> {
        let p = self.lattice_params();
        Ok(match axis {
            SweepAxis::Gamma => p.with_gamma(value)?,
            SweepAxis::Delta => p.with_delta(value)?,
        })
    }

    /// Compact JSON with object keys sorted, the input to the config hash.
    pub fn canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("resolved config serializes");
        serde_json::to_string(&value).expect("value serializes")
    }
}

//! Time loop: advance a configured simulation and collect diagnostics.

use crate::config::RunConfig;
use crate::diagnostics::{
    error_metrics, relative_volume_error, volume, DiagnosticsRow, UNIT_BALL_VOLUME,
};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::profile::{sample_shape, InitialShape, RadiusProfile};
use crate::schemes::{SimState, Stepper};

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    Completed,
    /// `min r <= 0` first observed at this step.
    NegativeRadius { step: usize, t: f64 },
    /// The Courant number reached 1 before this step could be taken.
    CflViolation { step: usize, courant: f64 },
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Diagnostics every `output_every` steps, plus the last state reached.
    pub rows: Vec<DiagnosticsRow>,
    pub final_state: SimState,
    pub termination: Termination,
    pub reference_volume: f64,
}

/// A configured run, ready to be stepped.
#[derive(Debug, Clone)]
pub struct Simulation {
    stepper: Stepper,
    shape: InitialShape,
    output_every: usize,
    reference_volume: f64,
}

impl Simulation {
    pub fn new(config: &RunConfig) -> Result<Self> {
        config.validate()?;
        let grid = config.grid()?;
        let stepper = Stepper::new(grid, config.scheme, config.center_law)
            .parallel(config.parallel)
            .allow_cfl_violation(config.allow_cfl_violation);
        let reference_volume = match config.shape {
            InitialShape::UnitSphere => UNIT_BALL_VOLUME,
            ref other => volume(&sample_shape(other, &grid)?),
        };
        Ok(Self {
            stepper,
            shape: config.shape.clone(),
            output_every: config.output_every,
            reference_volume,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        self.stepper.grid()
    }

    pub fn stepper(&self) -> &Stepper {
        &self.stepper
    }

    pub fn reference_volume(&self) -> f64 {
        self.reference_volume
    }

    pub fn initial_state(&self) -> Result<SimState> {
        let r0 = sample_shape(&self.shape, self.grid())?;
        self.stepper.initial_state(r0)
    }

    /// Oracle errors are only meaningful for an initially spherical drop.
    pub fn diagnostics(&self, state: &SimState) -> DiagnosticsRow {
        let gap = state.center.gap();
        let metrics = match self.shape {
            InitialShape::UnitSphere => error_metrics(&state.r, gap).ok(),
            _ => None,
        };
        let (min_r, _) = state.r.min();
        let vol_rel = (min_r > 0.0)
            .then(|| relative_volume_error(volume(&state.r), self.reference_volume));
        DiagnosticsRow {
            t: state.center.t,
            gap_abs: gap.abs(),
            e1: metrics.map(|m| m.e1),
            e2: metrics.map(|m| m.e2),
            e2_sum: metrics.map(|m| m.sum),
            vol_rel,
            min_r,
        }
    }

    /// Step to the final time. `observer` sees every state, including the
    /// initial one, together with its diagnostics.
    pub fn run_with(
        &self,
        mut observer: impl FnMut(&SimState, &DiagnosticsRow),
    ) -> Result<RunOutcome> {
        let steps = self.grid().steps();
        let mut state = self.initial_state()?;
        let mut rows = Vec::new();
        let mut termination = Termination::Completed;

        loop {
            let row = self.diagnostics(&state);
            observer(&state, &row);
            let last = state.step == steps || state.is_degenerate();
            if state.step % self.output_every == 0 || last {
                rows.push(row);
            }
            if state.is_degenerate() {
                termination = Termination::NegativeRadius {
                    step: state.step,
                    t: state.center.t,
                };
                break;
            }
            if last {
                break;
            }
            match self.stepper.step(&state) {
                Ok(next) => state = next,
                Err(Error::CflViolation { step, courant }) => {
                    termination = Termination::CflViolation { step, courant };
                    if rows.last().map(|r| r.t) != Some(row.t) {
                        rows.push(row);
                    }
                    break;
                }
                Err(e) => return Err(e),
            }
        }

        Ok(RunOutcome {
            rows,
            final_state: state,
            termination,
            reference_volume: self.reference_volume,
        })
    }

    pub fn run(&self) -> Result<RunOutcome> {
        self.run_with(|_, _| {})
    }
}

/// Build and run a simulation from a configuration.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    Simulation::new(config)?.run()
}

/// `(θᵢ, rᵢ)` pairs.
pub fn profile_points(r: &RadiusProfile) -> Vec<(f64, f64)> {
    r.grid().thetas().into_iter().zip(r.values().iter().copied()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::CenterLaw;
    use crate::schemes::SchemeKind;

    fn small(law: CenterLaw, t: f64) -> RunConfig {
        RunConfig {
            m: 20,
            l: 40,
            dt: 0.01,
            t_final: t,
            center_law: law,
            output_every: 10,
            ..RunConfig::default()
        }
    }

    #[test]
    fn short_run_records_every_output_step() {
        let out = run(&small(CenterLaw::TransportedByFlow, 0.25)).unwrap();
        assert_eq!(out.termination, Termination::Completed);
        let ts: Vec<f64> = out.rows.iter().map(|r| r.t).collect();
        assert_eq!(ts.len(), 4);
        assert_eq!(ts[0], 0.0);
        assert!((ts[3] - 0.25).abs() < 1e-12);
        assert_eq!(out.final_state.step, 25);
        let first = out.rows[0];
        assert_eq!(first.gap_abs, 0.0);
        assert_eq!(first.e1, Some(0.0));
        assert!(first.vol_rel.unwrap() < 1e-2);
    }

    #[test]
    fn observer_sees_every_state() {
        let sim = Simulation::new(&small(CenterLaw::ExactHR, 0.1)).unwrap();
        let mut seen = Vec::new();
        sim.run_with(|s, _| seen.push(s.step)).unwrap();
        assert_eq!(seen, (0..=10).collect::<Vec<_>>());
    }

    #[test]
    fn non_spherical_start_has_no_oracle_error() {
        let cfg = RunConfig {
            shape: InitialShape::ProlateEllipsoid,
            ..small(CenterLaw::TransportedByFlow, 0.05)
        };
        let out = run(&cfg).unwrap();
        assert!(out.rows.iter().all(|r| r.e1.is_none()));
        assert_eq!(out.rows[0].vol_rel, Some(0.0));
    }

    #[test]
    fn scaled_law_stops_at_negative_radius() {
        let cfg = RunConfig {
            scheme: SchemeKind::Upwind,
            allow_cfl_violation: true,
            ..small(CenterLaw::ScaledHR(8.5), 2.0)
        };
        let out = run(&cfg).unwrap();
        match out.termination {
            Termination::NegativeRadius { t, .. } => assert!(t > 0.3 && t < 0.7, "t = {t}"),
            other => panic!("unexpected termination {other:?}"),
        }
        let last = out.rows.last().unwrap();
        assert!(last.min_r <= 0.0);
        assert!(last.vol_rel.is_none());
        assert!(last.gap_abs > 1.0 || last.e1.is_some());
    }
}

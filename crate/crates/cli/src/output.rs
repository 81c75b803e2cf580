use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use droplet_core::diagnostics::{fmt_num, section_curve, CSV_HEADER};
use droplet_core::run::profile_points;
use droplet_core::{CenterLaw, DiagnosticsRow, RadiusProfile, RunConfig, Simulation, Termination};
use serde::Serialize;

pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const GNUPLOT_FILE: &str = "sections.gp";
pub const TABLE_FILE: &str = "table.csv";

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub config: RunConfig,
    pub scheme: String,
    pub center_law: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    /// Paths relative to the output directory.
    pub outputs: Vec<String>,
    pub termination: String,
    pub termination_step: Option<usize>,
    pub termination_time: Option<f64>,
    #[serde(skip)]
    kind: Termination,
}

impl RunManifest {
    pub fn termination_kind(&self) -> Termination {
        self.kind
    }

    pub fn summary(&self) -> String {
        let at = self
            .termination_time
            .map(|t| format!(" at t = {t}"))
            .unwrap_or_default();
        format!(
            "{}{at}; {} files written to {}",
            self.termination,
            self.outputs.len() + 1,
            self.config.output_dir.display()
        )
    }
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    let f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_pairs(path: &Path, header: &str, pairs: &[(f64, f64)]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{header}")?;
    for (a, b) in pairs {
        writeln!(w, "{},{}", fmt_num(*a), fmt_num(*b))?;
    }
    w.flush()?;
    Ok(())
}

fn write_diagnostics(path: &Path, rows: &[DiagnosticsRow]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(w, "{}", row.csv_line())?;
    }
    w.flush()?;
    Ok(())
}

fn gnuplot_script(sections: &[(f64, String)]) -> String {
    let mut s = String::from(
        "# Meridian sections of the droplet; render with `gnuplot sections.gp`.\n\
         set terminal pngcairo size 700,1000\n\
         set output 'sections.png'\n\
         set datafile separator ','\n\
         set size ratio -1\n\
         set xlabel 'x'\n\
         set ylabel 'z'\n\
         set key outside right\n",
    );
    let curves: Vec<String> = sections
        .iter()
        .map(|(t, file)| format!("'{file}' every ::1 using 1:2 with lines title 't = {t}'"))
        .collect();
    if curves.is_empty() {
        s.push_str("# no sections were written\n");
    } else {
        s.push_str("plot ");
        s.push_str(&curves.join(", \\\n     "));
        s.push('\n');
    }
    s
}

fn time_tag(t: f64) -> String {
    format!("{t:.2}")
}

struct Snapshot {
    t: f64,
    r: RadiusProfile,
    c3: f64,
}

/// Run the configured simulation and write every artifact into the output
/// directory. Files produced before a simulation error are kept.
pub fn run_and_write(cfg: &RunConfig) -> Result<RunManifest> {
    let started = unix_now();
    let dir = cfg.output_dir.clone();
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;

    let sim = Simulation::new(cfg)?;
    let grid = *sim.grid();
    let mut wanted: BTreeMap<usize, f64> = BTreeMap::new();
    for &t in &cfg.snapshot_times {
        if t <= grid.time(grid.steps()) + 1e-9 {
            wanted.entry(grid.step_at(t)).or_insert(t);
        }
    }

    let mut snapshots = Vec::new();
    let mut rows = Vec::new();
    let mut last: Option<(usize, DiagnosticsRow, Snapshot)> = None;
    let result = sim.run_with(|state, row| {
        let snap = || Snapshot {
            t: state.center.t,
            r: state.r.clone(),
            c3: state.center.c3,
        };
        if let Some(&t) = wanted.get(&state.step) {
            snapshots.push(Snapshot { t, ..snap() });
        }
        if state.step % cfg.output_every == 0 {
            rows.push(*row);
        }
        last = Some((state.step, *row, snap()));
    });

    let mut outputs = Vec::new();
    let mut sections = Vec::new();
    for s in &snapshots {
        let tag = time_tag(s.t);
        let profile = format!("profile_t{tag}.csv");
        write_pairs(&dir.join(&profile), "theta,r", &profile_points(&s.r))?;
        let section = format!("section_t{tag}.csv");
        write_pairs(&dir.join(&section), "x,z", &section_curve(&s.r, s.c3))?;
        outputs.push(profile);
        outputs.push(section.clone());
        sections.push((s.t, section));
    }
    if let Some((step, row, snap)) = &last {
        if step % cfg.output_every != 0 {
            rows.push(*row);
        }
        write_pairs(&dir.join("profile_final.csv"), "theta,r", &profile_points(&snap.r))?;
        outputs.push("profile_final.csv".to_string());
    }
    write_diagnostics(&dir.join(DIAGNOSTICS_FILE), &rows)?;
    outputs.push(DIAGNOSTICS_FILE.to_string());
    fs::write(dir.join(GNUPLOT_FILE), gnuplot_script(&sections))?;
    outputs.push(GNUPLOT_FILE.to_string());

    let (kind, label, step, time) = match &result {
        Ok(out) => match out.termination {
            Termination::Completed => (
                out.termination,
                "completed",
                Some(out.final_state.step),
                Some(out.final_state.center.t),
            ),
            Termination::NegativeRadius { step, t } => {
                (out.termination, "negative-radius", Some(step), Some(t))
            }
            Termination::CflViolation { step, .. } => {
                (out.termination, "cfl-violation", Some(step), Some(grid.time(step)))
            }
        },
        Err(_) => (
            Termination::Completed,
            "error",
            last.as_ref().map(|l| l.0),
            last.as_ref().map(|l| l.2.t),
        ),
    };
    let manifest = RunManifest {
        config: cfg.clone(),
        scheme: cfg.scheme.name().to_string(),
        center_law: cfg.center_law.name(),
        started_unix: started,
        finished_unix: unix_now(),
        outputs,
        termination: label.to_string(),
        termination_step: step,
        termination_time: time,
        kind,
    };
    let json = serde_json::to_string_pretty(&manifest)?;
    fs::write(dir.join(MANIFEST_FILE), json + "\n")?;
    result.context("simulation failed")?;
    Ok(manifest)
}

fn table_header(law: CenterLaw) -> &'static str {
    match law {
        CenterLaw::ScaledHR(_) => "t,gap_abs,e1,e2,min_r,vol_rel",
        _ => "t,gap_abs,e1,e2,vol_rel",
    }
}

fn table_line(law: CenterLaw, row: &DiagnosticsRow) -> String {
    let opt = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
    let mut cols = vec![fmt_num(row.t), fmt_num(row.gap_abs), opt(row.e1), opt(row.e2)];
    if let CenterLaw::ScaledHR(_) = law {
        cols.push(fmt_num(row.min_r));
    }
    cols.push(opt(row.vol_rel));
    cols.join(",")
}

/// Run the configuration and emit the diagnostics at the table sample times,
/// to `out` and to `table.csv` in the output directory. Times past the end
/// of the run are omitted.
pub fn write_table(cfg: &RunConfig, out: &mut impl Write) -> Result<Termination> {
    let sim = Simulation::new(cfg)?;
    let grid = *sim.grid();
    let steps: Vec<usize> = cfg
        .resolved_table_times()
        .into_iter()
        .filter(|t| *t <= grid.time(grid.steps()) + 1e-9)
        .map(|t| grid.step_at(t))
        .collect();
    let mut found: HashMap<usize, DiagnosticsRow> = HashMap::new();
    let outcome = sim.run_with(|state, row| {
        if steps.contains(&state.step) {
            found.insert(state.step, *row);
        }
    })?;

    let mut text = format!("{}\n", table_header(cfg.center_law));
    for step in &steps {
        if let Some(row) = found.get(step) {
            text.push_str(&table_line(cfg.center_law, row));
            text.push('\n');
        }
    }
    fs::create_dir_all(&cfg.output_dir)
        .with_context(|| format!("creating {}", cfg.output_dir.display()))?;
    let path: PathBuf = cfg.output_dir.join(TABLE_FILE);
    fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
    out.write_all(text.as_bytes())?;
    Ok(outcome.termination)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnuplot_lists_every_section() {
        let s = gnuplot_script(&[(0.0, "section_t0.00.csv".into()), (3.0, "section_t3.00.csv".into())]);
        assert!(s.contains("'section_t0.00.csv'"));
        assert!(s.contains("'section_t3.00.csv'"));
        assert!(s.contains("set size ratio -1"));
        assert!(gnuplot_script(&[]).contains("no sections"));
    }

    #[test]
    fn table_columns_follow_the_center_law() {
        let row = DiagnosticsRow {
            t: 0.5,
            gap_abs: 1.0,
            e1: Some(0.2),
            e2: Some(0.03),
            e2_sum: Some(3.0),
            vol_rel: None,
            min_r: 1e-3,
        };
        let scaled = CenterLaw::ScaledHR(8.5);
        assert_eq!(
            table_line(scaled, &row).split(',').count(),
            table_header(scaled).split(',').count()
        );
        assert!(table_line(scaled, &row).ends_with(','));
        let flow = CenterLaw::TransportedByFlow;
        assert_eq!(table_line(flow, &row).split(',').count(), 5);
        assert_eq!(time_tag(3.0), "3.00");
    }
}

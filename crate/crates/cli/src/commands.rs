use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use curlwave::ingest::format::{
    parse_grid, parse_mode_list, write_grid, write_mode_list, ModeList,
};
use curlwave::ingest::{grid_to_modes, modes_to_grid, FieldGrid, LatticeMode};
use curlwave::spectral::decompose_mode;
use curlwave::validation::fdtd::convergence_csv;
use curlwave::validation::{
    check_energy, fdtd_convergence, golden_examples, GoldenProblem, Report,
};
use curlwave::{unpack_fields, BuildOptions, Error, Medium, ModalSolution, Mode};

use crate::config::{ConfigError, FdtdTarget, InputFormat, RunConfig};

/// How a command ended unsuccessfully; each maps to one exit code.
#[derive(Debug)]
pub enum Failure {
    /// Checks ran and at least one failed.
    Validation,
    /// Bad flags, config, or a request the inputs cannot satisfy.
    Usage(String),
    /// Unreadable, unwritable, or malformed files.
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation => 1,
            Self::Usage(_) => 2,
            Self::Io(_) => 3,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Self::Usage(e.to_string())
    }
}

fn library(context: &Path, e: Error) -> Failure {
    let msg = format!("{}: {e}", context.display());
    match e {
        Error::OffLatticeMode(..)
        | Error::InvalidArgument(_)
        | Error::CflViolation(_)
        | Error::InvalidMedium { .. } => Failure::Usage(msg),
        _ => Failure::Io(msg),
    }
}

fn io(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

type Outcome = Result<(), Failure>;

struct Input {
    path: PathBuf,
    grid: Option<FieldGrid>,
    modes: Vec<LatticeMode>,
    /// Fourier coefficients below the truncation threshold.
    truncated: usize,
    periods: [f64; 3],
    medium: Medium,
}

impl Input {
    fn load(cfg: &RunConfig) -> Result<Self, Failure> {
        let path = cfg.require_input()?.clone();
        match cfg.input_format() {
            InputFormat::Grid => {
                let bytes = fs::read(&path).map_err(|e| io(&path, e))?;
                let (mut grid, file_medium) = parse_grid(&bytes).map_err(|e| library(&path, e))?;
                let medium = cfg.medium.unwrap_or(file_medium);
                if let Some(p) = cfg.periods {
                    grid = FieldGrid::new(grid.shape(), p, grid.h().to_vec(), grid.e().to_vec())
                        .map_err(|e| library(&path, e))?;
                }
                let all = grid_to_modes(&grid, &medium, 0.0).map_err(|e| library(&path, e))?;
                let modes =
                    grid_to_modes(&grid, &medium, cfg.trunc_tol).map_err(|e| library(&path, e))?;
                Ok(Self {
                    truncated: all.len() - modes.len(),
                    periods: grid.periods(),
                    path,
                    grid: Some(grid),
                    modes,
                    medium,
                })
            }
            InputFormat::Modes => {
                let text = fs::read_to_string(&path).map_err(|e| io(&path, e))?;
                let list = parse_mode_list(&text).map_err(|e| library(&path, e))?;
                let periods = cfg.periods.or(list.periods).ok_or_else(|| {
                    Failure::Usage(
                        "input.periods: required when the mode list has no 'periods' line".into(),
                    )
                })?;
                Ok(Self {
                    path,
                    grid: None,
                    modes: list.modes,
                    truncated: 0,
                    periods,
                    medium: cfg.medium.or(list.medium).unwrap_or_default(),
                })
            }
        }
    }

    fn solution(&self, cfg: &RunConfig) -> Result<ModalSolution, Failure> {
        let modes: Vec<Mode> = self.modes.iter().map(|m| m.to_mode(self.periods)).collect();
        let opts = BuildOptions {
            drop_tol: cfg.drop_tol,
        };
        ModalSolution::build_with(&modes, self.medium, self.periods, opts)
            .map_err(|e| library(&self.path, e))
    }
}

fn output_dir(cfg: &RunConfig) -> Result<PathBuf, Failure> {
    let dir = cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| io(&dir, e))?;
    Ok(dir)
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, Failure> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| io(path, e))
}

pub fn decompose(cfg: &RunConfig) -> Outcome {
    let input = Input::load(cfg)?;
    let sol = input.solution(cfg)?;
    let kept: Vec<LatticeMode> = input
        .modes
        .iter()
        .copied()
        .filter(|m| {
            let w = m.to_mode(input.periods).w;
            sol.terms().iter().any(|t| t.w == w)
        })
        .collect();
    let dropped = input.truncated + input.modes.len() - kept.len();
    let alphas: Vec<_> = kept
        .iter()
        .map(|m| {
            let mode = m.to_mode(input.periods);
            decompose_mode(&mode.w, &mode.a).1.alpha
        })
        .collect();

    let dir = output_dir(cfg)?;
    let out = dir.join("modes.txt");
    let list = ModeList {
        periods: Some(input.periods),
        medium: Some(input.medium),
        modes: kept.clone(),
    };
    let mut file = create(&out)?;
    write_mode_list(&mut file, &list, Some(&alphas)).map_err(|e| library(&out, e))?;
    file.flush().map_err(|e| io(&out, e))?;

    if kept.is_empty() {
        eprintln!(
            "warning: {} holds a zero field; the mode list is empty",
            input.path.display()
        );
    }
    println!("modes = {}", kept.len());
    println!("dropped = {dropped}");
    match kept
        .iter()
        .max_by(|a, b| curlwave::vec3::cnorm(&a.a).total_cmp(&curlwave::vec3::cnorm(&b.a)))
    {
        Some(m) => {
            let [j, k, l] = m.index;
            println!("dominant_index = {j} {k} {l}");
            println!("dominant_w = {}", m.to_mode(input.periods).w.norm());
        }
        None => println!("dominant_w = 0"),
    }
    println!("output = {}", out.display());
    Ok(())
}

fn sorted_times(times: &[f64]) -> Result<Vec<f64>, Failure> {
    let mut t = times.to_vec();
    t.sort_by(f64::total_cmp);
    if t.windows(2).any(|w| w[0] == w[1]) {
        return Err(Failure::Usage("output.times: duplicate time".into()));
    }
    Ok(t)
}

fn write_csv(path: &Path, sol: &ModalSolution, grid_shape: [usize; 3], t: f64) -> Outcome {
    let pts = FieldGrid::zeros(grid_shape, sol.periods())
        .map_err(|e| library(path, e))?
        .positions();
    let fields = sol.evaluate(t, &pts);
    let mut out = create(path)?;
    let mut write = || -> std::io::Result<()> {
        writeln!(out, "x,y,z,Hx,Hy,Hz,Ex,Ey,Ez")?;
        for (x, f) in pts.iter().zip(&fields) {
            let (h, e) = unpack_fields(f, sol.medium());
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                x[0], x[1], x[2], h[0], h[1], h[2], e[0], e[1], e[2]
            )?;
        }
        out.flush()
    };
    write().map_err(|e| io(path, e))
}

pub fn propagate(cfg: &RunConfig) -> Outcome {
    let input = Input::load(cfg)?;
    let sol = input.solution(cfg)?;
    let shape = match (cfg.shape, &input.grid) {
        (Some(s), _) => s,
        (None, Some(g)) => g.shape(),
        (None, None) => {
            return Err(Failure::Usage(
                "output.shape: required when the input is a mode list".into(),
            ))
        }
    };
    let times = sorted_times(cfg.times.as_deref().unwrap_or(&[0.0]))?;
    let dir = output_dir(cfg)?;
    for (i, &t) in times.iter().enumerate() {
        let stem = format!("field_{i:04}_t{t:.6}");
        if cfg.output_format.grid() {
            let path = dir.join(format!("{stem}.cwf"));
            let grid = modes_to_grid(&sol, shape, t).map_err(|e| {
                Failure::Usage(format!("output.shape: {e}; use a finer output grid"))
            })?;
            let mut file = create(&path)?;
            write_grid(&mut file, &grid, sol.medium()).map_err(|e| library(&path, e))?;
            file.flush().map_err(|e| io(&path, e))?;
            println!("output = {}", path.display());
        }
        if cfg.output_format.csv() {
            let path = dir.join(format!("{stem}.csv"));
            write_csv(&path, &sol, shape, t)?;
            println!("output = {}", path.display());
        }
    }
    Ok(())
}

const CONSERVATION_TOL: f64 = 1e-10;
const ROUND_TRIP_TOL: f64 = 1e-12;
const ORDER_BAND: (f64, f64) = (1.7, 2.3);

fn prefixed(report: Report, prefix: &str) -> Report {
    let mut r = report;
    for c in &mut r.checks {
        c.name = format!("{prefix}.{}", c.name);
    }
    r
}

fn input_checks(
    cfg: &RunConfig,
    input: &Input,
    sol: &ModalSolution,
    report: &mut Report,
) -> Outcome {
    let times = match &cfg.times {
        Some(t) => sorted_times(t)?,
        None => (0..=10).map(|i| i as f64 * 0.1).collect(),
    };
    let quad = cfg
        .shape
        .or(input.grid.as_ref().map(|g| g.shape()))
        .unwrap_or([8; 3]);
    let c = check_energy(sol, &times, quad);
    report.at_most("conservation.modal_drift", c.modal_drift, CONSERVATION_TOL);
    report.at_most(
        "conservation.divergence_delta",
        c.div_relative,
        CONSERVATION_TOL,
    );
    report.note(format!("conservation.grid_drift {:e}", c.grid_drift));
    report.note(format!("conservation.energy_t0 {:e}", c.energy_t0));
    if c.stationary_modes > 0 {
        report.note(format!(
            "{} mode(s) carry a longitudinal component; it is stationary (residual {:e}) and leaves the divergence unchanged",
            c.stationary_modes, c.stationary_residual
        ));
    }

    if let Some(grid) = &input.grid {
        let back = modes_to_grid(sol, grid.shape(), 0.0).map_err(|e| library(&input.path, e))?;
        let scale = grid
            .h()
            .iter()
            .chain(grid.e())
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let gap = grid
            .h()
            .iter()
            .chain(grid.e())
            .zip(back.h().iter().chain(back.e()))
            .flat_map(|(a, b)| (0..3).map(move |i| (a[i] - b[i]).abs()))
            .fold(0.0f64, f64::max);
        let rel = if scale > 0.0 { gap / scale } else { gap };
        report.at_most(
            "input.round_trip",
            rel,
            ROUND_TRIP_TOL.max(10.0 * cfg.trunc_tol),
        );
    }
    Ok(())
}

fn fdtd_checks(
    cfg: &RunConfig,
    input: Option<&(Input, ModalSolution)>,
    report: &mut Report,
) -> Outcome {
    for target in &cfg.fdtd.problems {
        let (name, sol) = match target {
            FdtdTarget::Isotropic | FdtdTarget::Oblique => {
                let p = if *target == FdtdTarget::Isotropic {
                    GoldenProblem::isotropic()
                } else {
                    GoldenProblem::oblique()
                };
                let sol = p
                    .solution()
                    .map_err(|e| Failure::Usage(format!("fdtd.problems: {e}")))?;
                (p.name.to_string(), sol)
            }
            FdtdTarget::Input => match input {
                Some((_, sol)) => ("input".to_string(), sol.clone()),
                None => {
                    return Err(Failure::Usage(
                        "fdtd.problems: 'input' requires input.path".into(),
                    ))
                }
            },
        };
        let rows = fdtd_convergence(
            &sol,
            cfg.fdtd.t_final,
            &cfg.fdtd.resolutions,
            cfg.fdtd.courant,
        )
        .map_err(|e| Failure::Usage(format!("fdtd: {e}")))?;
        for r in &rows {
            report.note(format!(
                "fdtd.{name}.error_{} {:e}",
                r.resolution, r.l2_error
            ));
            if let Some(order) = r.observed_order {
                report.within(
                    format!("fdtd.{name}.order_{}", r.resolution),
                    order,
                    ORDER_BAND.0,
                    ORDER_BAND.1,
                );
            }
        }
        if let Some(dir) = &cfg.output_dir {
            fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
            let path = dir.join(format!("convergence_{name}.csv"));
            fs::write(&path, convergence_csv(&rows)).map_err(|e| io(&path, e))?;
        }
    }
    Ok(())
}

pub fn validate(cfg: &RunConfig) -> Outcome {
    let mut report = prefixed(
        golden_examples().map_err(|e| Failure::Usage(format!("golden: {e}")))?,
        "golden",
    );
    let loaded = match &cfg.input {
        Some(_) => {
            let input = Input::load(cfg)?;
            let sol = input.solution(cfg)?;
            input_checks(cfg, &input, &sol, &mut report)?;
            Some((input, sol))
        }
        None => None,
    };
    if cfg.fdtd.enabled {
        fdtd_checks(cfg, loaded.as_ref(), &mut report)?;
    }
    finish(cfg, &report, "validation.txt")
}

pub fn golden(cfg: &RunConfig) -> Outcome {
    let report = golden_examples().map_err(|e| Failure::Usage(format!("golden: {e}")))?;
    finish(cfg, &report, "golden.txt")
}

fn finish(cfg: &RunConfig, report: &Report, file: &str) -> Outcome {
    let text = report.to_key_value();
    print!("{text}");
    if let Some(dir) = &cfg.output_dir {
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let path = dir.join(file);
        fs::write(&path, &text).map_err(|e| io(&path, e))?;
    }
    if report.passed() {
        Ok(())
    } else {
        let mut msg = String::new();
        for c in report.failures() {
            let _ = write!(msg, " {}", c.name);
        }
        eprintln!("failed checks:{msg}");
        Err(Failure::Validation)
    }
}

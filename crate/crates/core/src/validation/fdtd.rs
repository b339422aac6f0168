//! Yee leapfrog on a periodic box, used only to cross-check the analytic
//! propagator.
//!
//! Component `c` of `E` sits half a cell along axis `c`; component `c` of `H`
//! sits half a cell along both other axes. `E` lives at integer time steps,
//! `H` half a step later.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::propagator::{Medium, ModalSolution};
use crate::vec3::Real3;

#[derive(Debug, Clone, PartialEq)]
pub struct FdtdState {
    shape: [usize; 3],
    cell: Real3,
    dt: f64,
    medium: Medium,
    /// Time of the `E` samples; `H` is at `time + dt/2`.
    time: f64,
    /// `Ex, Ey, Ez`, flat z-fastest.
    pub e: [Vec<f64>; 3],
    /// `Hx, Hy, Hz`, flat z-fastest.
    pub h: [Vec<f64>; 3],
}

impl FdtdState {
    /// Zero fields with cell size `periods / shape`.
    pub fn new(shape: [usize; 3], periods: Real3, dt: f64, medium: Medium) -> Result<Self> {
        let n: usize = shape.iter().product();
        if n == 0 {
            return Err(Error::EmptyGrid);
        }
        crate::propagator::validate_periods(periods)?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "time step {dt} must be positive"
            )));
        }
        let cell = std::array::from_fn(|i| periods[i] / shape[i] as f64);
        let state = Self {
            shape,
            cell,
            dt,
            medium,
            time: 0.0,
            e: std::array::from_fn(|_| vec![0.0; n]),
            h: std::array::from_fn(|_| vec![0.0; n]),
        };
        state.check_cfl()?;
        Ok(state)
    }

    /// Samples the analytic solution at the staggered positions: `E` at
    /// `t = 0` and `H` at `t = dt/2`.
    pub fn from_solution(sol: &ModalSolution, shape: [usize; 3], dt: f64) -> Result<Self> {
        let mut state = Self::new(shape, sol.periods(), dt, *sol.medium())?;
        let (e, h) = state.sample(sol);
        state.e = e;
        state.h = h;
        Ok(state)
    }

    pub fn shape(&self) -> [usize; 3] {
        self.shape
    }

    pub fn cell(&self) -> Real3 {
        self.cell
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn time_e(&self) -> f64 {
        self.time
    }

    pub fn time_h(&self) -> f64 {
        self.time + 0.5 * self.dt
    }

    /// `c·dt·√(1/dx² + 1/dy² + 1/dz²)`; stable when at most 1.
    pub fn courant(&self) -> f64 {
        let inv: f64 = self.cell.iter().map(|d| 1.0 / (d * d)).sum();
        self.medium.speed() * self.dt * inv.sqrt()
    }

    fn check_cfl(&self) -> Result<()> {
        let s = self.courant();
        if s > 1.0 {
            Err(Error::CflViolation(s))
        } else {
            Ok(())
        }
    }

    /// Position of `E` component `c` in cell `flat`.
    pub fn e_position(&self, c: usize, flat: usize) -> Real3 {
        let mut off = [0.0; 3];
        off[c] = 0.5;
        self.position(flat, off)
    }

    /// Position of `H` component `c` in cell `flat`.
    pub fn h_position(&self, c: usize, flat: usize) -> Real3 {
        let mut off = [0.5; 3];
        off[c] = 0.0;
        self.position(flat, off)
    }

    fn position(&self, flat: usize, off: Real3) -> Real3 {
        let [_, ny, nz] = self.shape;
        let idx = [flat / (ny * nz), (flat / nz) % ny, flat % nz];
        std::array::from_fn(|a| (idx[a] as f64 + off[a]) * self.cell[a])
    }

    /// Analytic `(E, H)` at this state's staggered positions and times.
    pub fn sample(&self, sol: &ModalSolution) -> ([Vec<f64>; 3], [Vec<f64>; 3]) {
        let n = self.e[0].len();
        let (sm, se) = (self.medium.mu().sqrt(), self.medium.eps().sqrt());
        let (te, th) = (self.time_e(), self.time_h());
        let e = std::array::from_fn(|c| {
            (0..n)
                .into_par_iter()
                .map(|i| sol.evaluate_point(te, &self.e_position(c, i))[c].im / se)
                .collect()
        });
        let h = std::array::from_fn(|c| {
            (0..n)
                .into_par_iter()
                .map(|i| sol.evaluate_point(th, &self.h_position(c, i))[c].re / sm)
                .collect()
        });
        (e, h)
    }

    /// RMS difference over all six components against the analytic solution.
    pub fn rms_error(&self, sol: &ModalSolution) -> f64 {
        let (e, h) = self.sample(sol);
        let mut sum = 0.0;
        let mut count = 0usize;
        for c in 0..3 {
            for (a, b) in self.e[c]
                .iter()
                .zip(&e[c])
                .chain(self.h[c].iter().zip(&h[c]))
            {
                sum += (a - b) * (a - b);
                count += 1;
            }
        }
        (sum / count as f64).sqrt()
    }

    /// One leapfrog step: `E += dt/ε curl H`, then `H -= dt/μ curl E`.
    pub fn step(&mut self) -> Result<()> {
        self.check_cfl()?;
        let [nx, ny, nz] = self.shape;
        let slab = ny * nz;
        let idx = move |i: usize, j: usize, k: usize| (i * ny + j) * nz + k;
        let prev = |i: usize, n: usize| if i == 0 { n - 1 } else { i - 1 };
        let next = |i: usize, n: usize| if i + 1 == n { 0 } else { i + 1 };
        let [dx, dy, dz] = self.cell;

        let ce = self.dt / self.medium.eps();
        {
            let [hx, hy, hz] = &self.h;
            let [ex, ey, ez] = &mut self.e;
            ex.par_chunks_mut(slab)
                .zip(ey.par_chunks_mut(slab))
                .zip(ez.par_chunks_mut(slab))
                .enumerate()
                .for_each(|(i, ((ex, ey), ez))| {
                    let im = prev(i, nx);
                    for j in 0..ny {
                        let jm = prev(j, ny);
                        for k in 0..nz {
                            let km = prev(k, nz);
                            let o = j * nz + k;
                            let c = idx(i, j, k);
                            ex[o] += ce
                                * ((hz[c] - hz[idx(i, jm, k)]) / dy
                                    - (hy[c] - hy[idx(i, j, km)]) / dz);
                            ey[o] += ce
                                * ((hx[c] - hx[idx(i, j, km)]) / dz
                                    - (hz[c] - hz[idx(im, j, k)]) / dx);
                            ez[o] += ce
                                * ((hy[c] - hy[idx(im, j, k)]) / dx
                                    - (hx[c] - hx[idx(i, jm, k)]) / dy);
                        }
                    }
                });
        }

        let ch = self.dt / self.medium.mu();
        {
            let [ex, ey, ez] = &self.e;
            let [hx, hy, hz] = &mut self.h;
            hx.par_chunks_mut(slab)
                .zip(hy.par_chunks_mut(slab))
                .zip(hz.par_chunks_mut(slab))
                .enumerate()
                .for_each(|(i, ((hx, hy), hz))| {
                    let ip = next(i, nx);
                    for j in 0..ny {
                        let jp = next(j, ny);
                        for k in 0..nz {
                            let kp = next(k, nz);
                            let o = j * nz + k;
                            let c = idx(i, j, k);
                            hx[o] -= ch
                                * ((ez[idx(i, jp, k)] - ez[c]) / dy
                                    - (ey[idx(i, j, kp)] - ey[c]) / dz);
                            hy[o] -= ch
                                * ((ex[idx(i, j, kp)] - ex[c]) / dz
                                    - (ez[idx(ip, j, k)] - ez[c]) / dx);
                            hz[o] -= ch
                                * ((ey[idx(ip, j, k)] - ey[c]) / dx
                                    - (ex[idx(i, jp, k)] - ex[c]) / dy);
                        }
                    }
                });
        }
        self.time += self.dt;
        Ok(())
    }
}

/// Value-style wrapper around [`FdtdState::step`].
pub fn fdtd_step(mut state: FdtdState) -> Result<FdtdState> {
    state.step()?;
    Ok(state)
}

/// Error of one FDTD run in a refinement study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    /// Cells per axis.
    pub resolution: usize,
    /// Relative mesh width `1 / resolution`.
    pub h: f64,
    pub dt: f64,
    pub steps: usize,
    pub l2_error: f64,
    /// `log(e_prev / e) / log(h_prev / h)`; `None` for the coarsest run.
    pub observed_order: Option<f64>,
}

/// Runs FDTD from the solution's initial data at each resolution and compares
/// with the analytic field at `t_final`.
///
/// The time step is the largest one with Courant number at most `courant`
/// that divides `t_final` into a whole number of steps.
pub fn fdtd_convergence(
    sol: &ModalSolution,
    t_final: f64,
    resolutions: &[usize],
    courant: f64,
) -> Result<Vec<ConvergenceRow>> {
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "t_final {t_final} must be >= 0"
        )));
    }
    if resolutions.is_empty() || resolutions.contains(&0) {
        return Err(Error::InvalidArgument(
            "resolutions must be positive".into(),
        ));
    }
    if resolutions.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "resolutions must be strictly increasing".into(),
        ));
    }
    if !(courant > 0.0 && courant <= 1.0) {
        return Err(Error::CflViolation(courant));
    }
    let periods = sol.periods();
    let speed = sol.medium().speed();
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(resolutions.len());
    for &n in resolutions {
        let inv: f64 = periods.iter().map(|b| (n as f64 / b).powi(2)).sum();
        let dt_max = courant / (speed * inv.sqrt());
        let steps = (t_final / dt_max).ceil() as usize;
        let dt = if steps == 0 {
            dt_max
        } else {
            t_final / steps as f64
        };
        let mut state = FdtdState::from_solution(sol, [n; 3], dt)?;
        for _ in 0..steps {
            state.step()?;
        }
        let l2_error = state.rms_error(sol);
        let h = 1.0 / n as f64;
        let observed_order = rows
            .last()
            .map(|p| (p.l2_error / l2_error).ln() / (p.h / h).ln());
        rows.push(ConvergenceRow {
            resolution: n,
            h,
            dt,
            steps,
            l2_error,
            observed_order,
        });
    }
    Ok(rows)
}

/// CSV with header `resolution,h,dt,steps,error,observed_order`.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("resolution,h,dt,steps,error,observed_order\n");
    for r in rows {
        let order = r.observed_order.map(|p| p.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{:e},{}\n",
            r.resolution, r.h, r.dt, r.steps, r.l2_error, order
        ));
    }
    out
}

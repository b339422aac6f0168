use num_complex::Complex64;
use rayon::prelude::*;

use crate::propagator::ModalSolution;
use crate::vec3::{self, Complex3, Real3};

/// Max-norm of `∇·(H(t) - H(0))` and `∇·(E(t) - E(0))` over a sample grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceReport {
    pub div_h_max: f64,
    pub div_e_max: f64,
    /// `Σ |w|·|a(0)|` over the modes, in packed-field units.
    pub scale: f64,
    sqrt_mu: f64,
    sqrt_eps: f64,
}

impl DivergenceReport {
    /// Largest divergence change relative to the field's divergence scale.
    pub fn relative(&self) -> f64 {
        let worst = (self.div_h_max * self.sqrt_mu).max(self.div_e_max * self.sqrt_eps);
        if self.scale > 0.0 {
            worst / self.scale
        } else {
            worst
        }
    }
}

/// Sample points offset by half a cell from the lattice `j·b/n`.
pub fn offset_grid(shape: [usize; 3], periods: Real3) -> Vec<Real3> {
    let [nx, ny, nz] = shape;
    let mut pts = Vec::with_capacity(nx * ny * nz);
    for i in 0..nx {
        for j in 0..ny {
            for k in 0..nz {
                pts.push([
                    (i as f64 + 0.5) / nx as f64 * periods[0],
                    (j as f64 + 0.5) / ny as f64 * periods[1],
                    (k as f64 + 0.5) / nz as f64 * periods[2],
                ]);
            }
        }
    }
    pts
}

/// Spectral divergence of the change in `H` and `E` between times 0 and `t`.
///
/// Each mode contributes `i (w · Δa) e^{i w·x}` to the divergence of the
/// packed field; the real part belongs to `√μ H` and the imaginary part to
/// `√ε E`.
pub fn check_divergence(sol: &ModalSolution, t: f64, shape: [usize; 3]) -> DivergenceReport {
    let m = sol.medium();
    let (sqrt_mu, sqrt_eps) = (m.mu().sqrt(), m.eps().sqrt());
    let a0 = sol.evolve_modes(0.0);
    let at = sol.evolve_modes(t);
    let scale = a0.iter().map(|m| m.w.norm() * vec3::cnorm(&m.a)).sum();
    let coeffs: Vec<(Real3, Complex64)> = a0
        .iter()
        .zip(&at)
        .map(|(m0, mt)| {
            let da: Complex3 = vec3::csub(&mt.a, &m0.a);
            let w = m0.w.components();
            (w, Complex64::i() * vec3::dot_rc(&w, &da))
        })
        .collect();
    let pts = offset_grid(shape, sol.periods());
    let (div_h_max, div_e_max) = pts
        .par_iter()
        .map(|x| {
            let d: Complex64 = coeffs
                .iter()
                .map(|(w, c)| {
                    let th = vec3::dot(w, x);
                    c * Complex64::new(th.cos(), th.sin())
                })
                .sum();
            (d.re.abs() / sqrt_mu, d.im.abs() / sqrt_eps)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    DivergenceReport {
        div_h_max,
        div_e_max,
        scale,
        sqrt_mu,
        sqrt_eps,
    }
}

/// Energy and divergence behaviour of a solution over a set of times.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservationReport {
    pub times: Vec<f64>,
    /// `Σ |a(t)|²` per time.
    pub modal_energy: Vec<f64>,
    /// `∫ μ|H|² + ε|E|² dV` by rectangle rule on an offset grid, per time.
    pub grid_energy: Vec<f64>,
    pub energy_t0: f64,
    /// Grid energy at the last requested time.
    pub energy_t: f64,
    /// `max_t |E_modal(t) - E_modal(t0)| / E_modal(t0)`.
    pub modal_drift: f64,
    pub grid_drift: f64,
    pub div_h_max: f64,
    pub div_e_max: f64,
    /// Largest relative divergence change over all times.
    pub div_relative: f64,
    /// Largest change of the `w`-directed (non-evolving) amplitude component.
    pub stationary_residual: f64,
    /// Modes with `w != 0` carrying a nonzero `α_1` (divergent initial data).
    pub stationary_modes: usize,
}

fn drift(series: &[f64]) -> f64 {
    let Some(&first) = series.first() else {
        return 0.0;
    };
    let dev = series.iter().map(|e| (e - first).abs()).fold(0.0, f64::max);
    if first > 0.0 {
        dev / first
    } else {
        dev
    }
}

/// Tracks modal and grid-quadrature energy plus divergence over `times`.
///
/// `shape` is the offset quadrature grid; it must resolve the differences of
/// all wave-vector indices for the grid energy to be exact.
pub fn check_energy(sol: &ModalSolution, times: &[f64], shape: [usize; 3]) -> ConservationReport {
    let periods = sol.periods();
    let volume = periods.iter().product::<f64>();
    let pts = offset_grid(shape, periods);

    let modal_energy: Vec<f64> = times.iter().map(|&t| sol.modal_energy(t)).collect();
    let grid_energy: Vec<f64> = times
        .iter()
        .map(|&t| {
            let f = sol.evaluate(t, &pts);
            // |F|² = μ|H|² + ε|E|² for F = √μ H + i √ε E
            volume * f.iter().map(vec3::cnorm_sqr).sum::<f64>() / pts.len().max(1) as f64
        })
        .collect();

    let mut div_h_max: f64 = 0.0;
    let mut div_e_max: f64 = 0.0;
    let mut div_relative: f64 = 0.0;
    for &t in times {
        let d = check_divergence(sol, t, shape);
        div_h_max = div_h_max.max(d.div_h_max);
        div_e_max = div_e_max.max(d.div_e_max);
        div_relative = div_relative.max(d.relative());
    }

    let a0 = sol.evolve_modes(0.0);
    let mut stationary_residual: f64 = 0.0;
    for &t in times {
        for (m0, mt) in a0.iter().zip(sol.evolve_modes(t)) {
            let n = m0.w.norm();
            if n == 0.0 {
                continue;
            }
            let w = m0.w.components();
            let d = (vec3::dot_rc(&w, &mt.a) - vec3::dot_rc(&w, &m0.a)).norm() / n;
            stationary_residual = stationary_residual.max(d);
        }
    }
    let stationary_modes = sol
        .terms()
        .iter()
        .filter(|t| t.w.norm() > 0.0 && t.components.iter().any(|c| c.d == 1))
        .count();

    ConservationReport {
        times: times.to_vec(),
        energy_t0: grid_energy.first().copied().unwrap_or(0.0),
        energy_t: grid_energy.last().copied().unwrap_or(0.0),
        modal_drift: drift(&modal_energy),
        grid_drift: drift(&grid_energy),
        modal_energy,
        grid_energy,
        div_h_max,
        div_e_max,
        div_relative,
        stationary_residual,
        stationary_modes,
    }
}

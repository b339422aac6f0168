//! Reference problems with closed-form solutions.
//!
//! * `isotropic`: `H₀ = cos(2π(x+y+z))(√3, 0, -√3)`, `E₀ = cos(2π(x+y+z))(1, -2, 1)`
//!   on the unit cube. Exact solution: a travelling wave with phase
//!   `2π(x+y+z) - 2√3πt`.
//! * `oblique`: `F₀ = (1,1,1) e^{i w·x}` with `w = (π, 2π, -3π)` on the box
//!   `(2, 1, 2/3)`. With `φ = w·x`, `ω = √14 π` and `r = (5, -4, -1)`:
//!   `H = cos φ (cos ωt (1,1,1) - sin ωt r/√14)`,
//!   `E = sin φ (cos ωt (1,1,1) - sin ωt r/√14)`.
//!
//! Both use `μ = ε = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::ingest::{grid_to_modes, FieldGrid, LatticeMode, DEFAULT_TRUNC_TOL};
use crate::propagator::{unpack_fields, Medium, ModalSolution};
use crate::spectral::{project, WaveVector};
use crate::validation::Report;
use crate::vec3::{self, Real3};

/// Tolerance on the eigen-coordinates of the reference modes.
pub const ALPHA_TOL: f64 = 1e-14;
/// Tolerance on reconstructed fields over the space-time sample lattice.
pub const FIELD_TOL: f64 = 1e-12;

type Sampler = fn(f64, Real3) -> (Real3, Real3);

#[derive(Debug, Clone, Copy)]
pub struct GoldenProblem {
    pub name: &'static str,
    pub periods: Real3,
    pub medium: Medium,
    /// Grid used to ingest the initial data.
    pub ingest_shape: [usize; 3],
    exact: Sampler,
}

fn isotropic_exact(t: f64, x: Real3) -> (Real3, Real3) {
    let s3 = 3f64.sqrt();
    let c = (2.0 * PI * (x[0] + x[1] + x[2]) - 2.0 * s3 * PI * t).cos();
    ([s3 * c, 0.0, -s3 * c], [c, -2.0 * c, c])
}

fn oblique_exact(t: f64, x: Real3) -> (Real3, Real3) {
    let phi = PI * (x[0] + 2.0 * x[1] - 3.0 * x[2]);
    let om = 14f64.sqrt() * PI;
    let (c, s) = ((om * t).cos(), (om * t).sin() / 14f64.sqrt());
    let g = [c - 5.0 * s, c + 4.0 * s, c + s];
    (g.map(|v| phi.cos() * v), g.map(|v| phi.sin() * v))
}

impl GoldenProblem {
    pub fn isotropic() -> Self {
        Self {
            name: "isotropic",
            periods: [1.0; 3],
            medium: Medium::unit(),
            ingest_shape: [8; 3],
            exact: isotropic_exact,
        }
    }

    pub fn oblique() -> Self {
        Self {
            name: "oblique",
            periods: [2.0, 1.0, 2.0 / 3.0],
            medium: Medium::unit(),
            ingest_shape: [8; 3],
            exact: oblique_exact,
        }
    }

    pub fn all() -> [Self; 2] {
        [Self::isotropic(), Self::oblique()]
    }

    /// Closed-form `(H, E)` at `(t, x)`.
    pub fn exact(&self, t: f64, x: Real3) -> (Real3, Real3) {
        (self.exact)(t, x)
    }

    pub fn initial_grid(&self) -> Result<FieldGrid> {
        FieldGrid::from_fn(self.ingest_shape, self.periods, |x| self.exact(0.0, x))
    }

    pub fn modes(&self) -> Result<Vec<LatticeMode>> {
        grid_to_modes(&self.initial_grid()?, &self.medium, DEFAULT_TRUNC_TOL)
    }

    /// Ingests the sampled initial data and builds the analytic solution.
    pub fn solution(&self) -> Result<ModalSolution> {
        let modes: Vec<_> = self
            .modes()?
            .iter()
            .map(|m| m.to_mode(self.periods))
            .collect();
        ModalSolution::build(&modes, self.medium, self.periods)
    }

    /// The 5×5×5 spatial sample lattice `(i/5)·b`.
    pub fn sample_points(&self) -> Vec<Real3> {
        let mut pts = Vec::with_capacity(125);
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    let f = [i, j, k].map(|n| n as f64 / 5.0);
                    pts.push(std::array::from_fn(|a| f[a] * self.periods[a]));
                }
            }
        }
        pts
    }

    /// Five sample times `0, 0.25, …, 1`.
    pub fn sample_times(&self) -> [f64; 5] {
        [0.0, 0.25, 0.5, 0.75, 1.0]
    }

    /// Max abs deviation of `sol` from `reference` over the 5⁴ lattice.
    pub fn max_deviation(&self, sol: &ModalSolution, reference: Sampler) -> f64 {
        let pts = self.sample_points();
        let mut worst: f64 = 0.0;
        for t in self.sample_times() {
            for (x, f) in pts.iter().zip(sol.evaluate(t, &pts)) {
                let (h, e) = unpack_fields(&f, sol.medium());
                let (hh, ee) = reference(t, *x);
                for i in 0..3 {
                    worst = worst.max((h[i] - hh[i]).abs()).max((e[i] - ee[i]).abs());
                }
            }
        }
        worst
    }

    pub fn max_field_error(&self, sol: &ModalSolution) -> f64 {
        self.max_deviation(sol, self.exact)
    }
}

fn alpha_error(got: &[Complex64; 3], want: &[Complex64; 3]) -> f64 {
    vec3::cnorm(&vec3::csub(got, want))
}

fn mode_at(modes: &[LatticeMode], index: [i64; 3]) -> Option<&LatticeMode> {
    modes.iter().find(|m| m.index == index)
}

fn isotropic_checks(report: &mut Report) -> Result<()> {
    let p = GoldenProblem::isotropic();
    let modes = p.modes()?;
    report.at_most("isotropic.extra_modes", modes.len().abs_diff(2) as f64, 0.0);

    let s3 = 3f64.sqrt();
    let z = Complex64::new(0.0, 0.0);
    let alpha = Complex64::new(s3 / 2.0, -0.5);
    // the +w mode rides the λ = i|w| direction, the -w mode λ = -i|w|
    for (index, want, label) in [
        ([1, 1, 1], [z, alpha, z], "plus"),
        ([-1, -1, -1], [z, z, alpha], "minus"),
    ] {
        let err = match mode_at(&modes, index) {
            Some(m) => {
                let w = WaveVector::from_lattice(index, p.periods);
                alpha_error(&project(&w, &m.a)?.alpha, &want)
            }
            None => f64::INFINITY,
        };
        report.at_most(format!("isotropic.alpha_{label}_error"), err, ALPHA_TOL);
    }

    let sol = p.solution()?;
    report.at_most("isotropic.field_error", p.max_field_error(&sol), FIELD_TOL);
    Ok(())
}

fn oblique_checks(report: &mut Report) -> Result<()> {
    let p = GoldenProblem::oblique();
    let w = WaveVector::from_lattice([1, 1, -1], p.periods);
    let n = w.norm();
    report.at_most(
        "oblique.norm_error",
        (n - PI * 14f64.sqrt()).abs() / n,
        1e-14,
    );
    report.at_most(
        "oblique.gamma_error",
        (w.gamma() - PI * 42f64.sqrt()).abs() / n,
        1e-14,
    );
    report.at_most("oblique.s_w", w.s().abs() / n, 1e-14);

    let modes = p.modes()?;
    report.at_most("oblique.extra_modes", modes.len().abs_diff(1) as f64, 0.0);
    let (ra, alpha_err) = match mode_at(&modes, [1, 1, -1]) {
        Some(m) => {
            let ra = vec3::dot_rc(&w.r(), &m.a).norm() / (w.gamma() * vec3::cnorm(&m.a));
            let e = Complex64::new(-1.0 / (28.0 * PI * PI), 0.0);
            let want = [Complex64::new(0.0, 0.0), e, e];
            (ra, alpha_error(&project(&w, &m.a)?.alpha, &want))
        }
        None => (f64::INFINITY, f64::INFINITY),
    };
    report.at_most("oblique.a_dot_r", ra, 1e-14);
    report.at_most("oblique.alpha_error", alpha_err, ALPHA_TOL);

    let sol = p.solution()?;
    let (h, e) = unpack_fields(&sol.evaluate_point(0.0, &[0.0; 3]), sol.medium());
    let origin = (0..3)
        .map(|i| (h[i] - 1.0).abs().max(e[i].abs()))
        .fold(0.0, f64::max);
    report.at_most("oblique.origin_error", origin, FIELD_TOL);
    report.at_most("oblique.field_error", p.max_field_error(&sol), FIELD_TOL);
    Ok(())
}

/// Reproduces both reference problems end to end, from sampled initial data
/// through ingestion, decomposition and evaluation.
pub fn golden_examples() -> Result<Report> {
    let mut report = Report::default();
    isotropic_checks(&mut report)?;
    oblique_checks(&mut report)?;
    Ok(report)
}

//! Analytic time evolution of a sum of plane-wave modes.
//!
//! Fields are packed as `F = √μ H + i √ε E`, which turns the two curl
//! equations into `∂F/∂t = i A F` with `A = curl / √(με)`. On an eigenvector
//! `v_d` of the curl the evolution is the scalar factor `e^{-t λ_d / √(με)}`,
//! so a decomposed initial field can be evaluated exactly at any `(t, x)`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{decompose_mode, WaveVector};
use crate::vec3::{self, Complex3, Real3};

/// Default relative drop tolerance for negligible `α_d v_d` terms.
pub const DEFAULT_DROP_TOL: f64 = 1e-14;

/// Homogeneous, isotropic, lossless medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Medium {
    mu: f64,
    eps: f64,
}

impl Medium {
    pub fn new(mu: f64, eps: f64) -> Result<Self> {
        if !(mu.is_finite() && eps.is_finite() && mu > 0.0 && eps > 0.0) {
            return Err(Error::InvalidMedium { mu, eps });
        }
        Ok(Self { mu, eps })
    }

    /// `μ = ε = 1`.
    pub fn unit() -> Self {
        Self { mu: 1.0, eps: 1.0 }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Phase speed `1/√(με)`.
    pub fn speed(&self) -> f64 {
        1.0 / (self.mu * self.eps).sqrt()
    }
}

impl Default for Medium {
    fn default() -> Self {
        Self::unit()
    }
}

/// `√μ H + i √ε E`.
pub fn pack_fields(h: &Real3, e: &Real3, medium: &Medium) -> Complex3 {
    let (sm, se) = (medium.mu.sqrt(), medium.eps.sqrt());
    std::array::from_fn(|i| Complex64::new(sm * h[i], se * e[i]))
}

/// Inverse of [`pack_fields`]: `H = Re F / √μ`, `E = Im F / √ε`.
pub fn unpack_fields(f: &Complex3, medium: &Medium) -> (Real3, Real3) {
    let (sm, se) = (medium.mu.sqrt(), medium.eps.sqrt());
    (f.map(|z| z.re / sm), f.map(|z| z.im / se))
}

pub(crate) fn validate_periods(periods: Real3) -> Result<()> {
    if periods.iter().all(|b| b.is_finite() && *b > 0.0) {
        Ok(())
    } else {
        Err(Error::InvalidPeriods(periods[0], periods[1], periods[2]))
    }
}

/// One Fourier term `a e^{i w·x}` of the packed initial field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub w: WaveVector,
    pub a: Complex3,
}

impl Mode {
    pub fn new(w: WaveVector, a: Complex3) -> Self {
        Self { w, a }
    }
}

/// A single eigen-direction of a mode: `α e^{-t λ/√(με)} v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenTerm {
    /// Index `d ∈ {1, 2, 3}` of the eigen-direction.
    pub d: usize,
    pub lambda: Complex64,
    pub alpha: Complex64,
    pub v: Complex3,
}

/// All surviving eigen-directions for one wave vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTerm {
    pub w: WaveVector,
    pub components: Vec<EigenTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildOptions {
    /// Terms with `|α_d|·|v_d|` below `drop_tol` times the largest such
    /// magnitude in the solution are omitted.
    pub drop_tol: f64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            drop_tol: DEFAULT_DROP_TOL,
        }
    }
}

/// The fully decomposed analytic solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalSolution {
    medium: Medium,
    periods: Real3,
    terms: Vec<SolutionTerm>,
}

impl ModalSolution {
    /// Decomposes every mode onto the curl eigen-basis.
    pub fn build(modes: &[Mode], medium: Medium, periods: Real3) -> Result<Self> {
        Self::build_with(modes, medium, periods, BuildOptions::default())
    }

    pub fn build_with(
        modes: &[Mode],
        medium: Medium,
        periods: Real3,
        opts: BuildOptions,
    ) -> Result<Self> {
        validate_periods(periods)?;
        let mut seen = std::collections::HashSet::with_capacity(modes.len());
        for m in modes {
            let key = m.w.components().map(f64::to_bits);
            if !seen.insert(key) {
                let [x, y, z] = m.w.components();
                return Err(Error::DuplicateWaveVector(x, y, z));
            }
        }

        let decomposed: Vec<_> = modes
            .iter()
            .map(|m| {
                let (sys, proj) = decompose_mode(&m.w, &m.a);
                let comps: Vec<EigenTerm> = (0..3)
                    .map(|d| EigenTerm {
                        d: d + 1,
                        lambda: sys.lambda[d],
                        alpha: proj.alpha[d],
                        v: sys.v[d],
                    })
                    .collect();
                (m.w, comps)
            })
            .collect();

        let size = |c: &EigenTerm| c.alpha.norm() * vec3::cnorm(&c.v);
        let largest = decomposed
            .iter()
            .flat_map(|(_, cs)| cs.iter().map(size))
            .fold(0.0, f64::max);
        let cutoff = opts.drop_tol * largest;

        let terms = decomposed
            .into_iter()
            .filter_map(|(w, cs)| {
                let components: Vec<_> = cs
                    .into_iter()
                    .filter(|c| size(c) > cutoff && size(c) > 0.0)
                    .collect();
                (!components.is_empty()).then_some(SolutionTerm { w, components })
            })
            .collect();

        Ok(Self {
            medium,
            periods,
            terms,
        })
    }

    pub fn medium(&self) -> &Medium {
        &self.medium
    }

    pub fn periods(&self) -> Real3 {
        self.periods
    }

    pub fn terms(&self) -> &[SolutionTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Temporal angular rate of the eigen-direction, `Im λ / √(με)`.
    fn rate(&self, c: &EigenTerm) -> f64 {
        c.lambda.im * self.medium.speed()
    }

    /// `F(t, x)` at each point, summing terms in a fixed order.
    pub fn evaluate(&self, t: f64, points: &[Real3]) -> Vec<Complex3> {
        points
            .par_iter()
            .map(|x| self.evaluate_point(t, x))
            .collect()
    }

    pub fn evaluate_point(&self, t: f64, x: &Real3) -> Complex3 {
        let mut acc = vec3::CZERO3;
        for term in &self.terms {
            let wx = term.w.dot(x);
            for c in &term.components {
                let theta = wx - self.rate(c) * t;
                let phase = Complex64::new(theta.cos(), theta.sin()) * c.alpha;
                for (o, v) in acc.iter_mut().zip(&c.v) {
                    *o += phase * v;
                }
            }
        }
        acc
    }

    /// `F(t, x) - F(0, x)`, using only the evolving directions.
    pub fn evaluate_delta(&self, t: f64, points: &[Real3]) -> Vec<Complex3> {
        points
            .par_iter()
            .map(|x| {
                let mut acc = vec3::CZERO3;
                for term in &self.terms {
                    let wx = term.w.dot(x);
                    let h = Complex64::new(wx.cos(), wx.sin());
                    for c in term.components.iter().filter(|c| c.lambda.im != 0.0) {
                        let theta = -self.rate(c) * t;
                        let factor = Complex64::new(theta.cos() - 1.0, theta.sin());
                        let s = factor * c.alpha * h;
                        for (o, v) in acc.iter_mut().zip(&c.v) {
                            *o += s * v;
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// Per-mode amplitudes `a(t) = Σ_d e^{-t λ_d/√(με)} α_d v_d`.
    pub fn evolve_modes(&self, t: f64) -> Vec<Mode> {
        self.terms
            .iter()
            .map(|term| Mode::new(term.w, self.amplitude(term, t)))
            .collect()
    }

    pub(crate) fn amplitude(&self, term: &SolutionTerm, t: f64) -> Complex3 {
        let mut a = vec3::CZERO3;
        for c in &term.components {
            let theta = -self.rate(c) * t;
            let s = Complex64::new(theta.cos(), theta.sin()) * c.alpha;
            for (o, v) in a.iter_mut().zip(&c.v) {
                *o += s * v;
            }
        }
        a
    }

    /// `Σ_modes |a(t)|²`.
    pub fn modal_energy(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| vec3::cnorm_sqr(&self.amplitude(term, t)))
            .sum()
    }
}

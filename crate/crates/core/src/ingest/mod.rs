//! Sampled periodic grids and their Fourier mode lists.
//!
//! Mode amplitudes follow the Fourier-series convention
//! `F(x) = Σ a_{j,k,l} e^{i w_{j,k,l}·x}` with `w_{j,k,l} = 2π (j/b_x, k/b_y, l/b_z)`,
//! so the forward transform is divided by the sample count. Bin `m` of an
//! axis with `n` samples maps to the signed index `m` when
//! `m <= ⌈n/2⌉ - 1` and to `m - n` otherwise; on even axes the Nyquist bin
//! is therefore read as the negative frequency `-n/2`.

pub mod fft;
pub mod format;

use num_complex::Complex64;
use rustfft::FftDirection;

use crate::error::{Error, Result};
use crate::propagator::{
    pack_fields, unpack_fields, validate_periods, Medium, ModalSolution, Mode,
};
use crate::spectral::WaveVector;
use crate::vec3::{self, Complex3, Real3};

/// Default relative truncation tolerance for [`grid_to_modes`].
pub const DEFAULT_TRUNC_TOL: f64 = 1e-12;

/// Real `H` and `E` sampled on a uniform periodic grid, z-fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    shape: [usize; 3],
    periods: Real3,
    h: Vec<Real3>,
    e: Vec<Real3>,
}

impl FieldGrid {
    pub fn new(shape: [usize; 3], periods: Real3, h: Vec<Real3>, e: Vec<Real3>) -> Result<Self> {
        let n = shape.iter().product::<usize>();
        if n == 0 {
            return Err(Error::EmptyGrid);
        }
        validate_periods(periods)?;
        for len in [h.len(), e.len()] {
            if len != n {
                return Err(Error::GridSizeMismatch {
                    expected: n,
                    found: len,
                });
            }
        }
        if let Some(index) = h
            .iter()
            .zip(&e)
            .position(|(a, b)| !a.iter().chain(b).all(|x| x.is_finite()))
        {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(Self {
            shape,
            periods,
            h,
            e,
        })
    }

    pub fn zeros(shape: [usize; 3], periods: Real3) -> Result<Self> {
        let n = shape.iter().product();
        Self::new(shape, periods, vec![[0.0; 3]; n], vec![[0.0; 3]; n])
    }

    /// Samples `f(x) -> (H, E)` at every grid point.
    pub fn from_fn(
        shape: [usize; 3],
        periods: Real3,
        f: impl Fn(Real3) -> (Real3, Real3),
    ) -> Result<Self> {
        let n: usize = shape.iter().product();
        let (h, e) = (0..n).map(|i| f(position(shape, periods, i))).unzip();
        Self::new(shape, periods, h, e)
    }

    pub fn shape(&self) -> [usize; 3] {
        self.shape
    }

    pub fn periods(&self) -> Real3 {
        self.periods
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn h(&self) -> &[Real3] {
        &self.h
    }

    pub fn e(&self) -> &[Real3] {
        &self.e
    }

    pub fn index(&self, j: usize, k: usize, l: usize) -> usize {
        (j * self.shape[1] + k) * self.shape[2] + l
    }

    /// Coordinates of flat sample `i`.
    pub fn position(&self, i: usize) -> Real3 {
        position(self.shape, self.periods, i)
    }

    pub fn positions(&self) -> Vec<Real3> {
        (0..self.len()).map(|i| self.position(i)).collect()
    }

    /// `Σ |F|² / N`, the grid mean of the packed field's squared norm.
    pub fn mean_packed_energy(&self, medium: &Medium) -> f64 {
        let s: f64 = self
            .h
            .iter()
            .zip(&self.e)
            .map(|(h, e)| vec3::cnorm_sqr(&pack_fields(h, e, medium)))
            .sum();
        s / self.len() as f64
    }
}

fn position(shape: [usize; 3], periods: Real3, i: usize) -> Real3 {
    let [_, ny, nz] = shape;
    let (j, k, l) = (i / (ny * nz), (i / nz) % ny, i % nz);
    [
        j as f64 / shape[0] as f64 * periods[0],
        k as f64 / ny as f64 * periods[1],
        l as f64 / nz as f64 * periods[2],
    ]
}

/// Signed frequency of DFT bin `m` on an axis of `n` samples.
pub fn signed_index(m: usize, n: usize) -> i64 {
    if m < n.div_ceil(2) {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

/// DFT bin of signed frequency `j`, if representable on `n` samples.
pub fn bin_of(j: i64, n: usize) -> Option<usize> {
    let n_i = n as i64;
    let lo = -(n_i / 2);
    let hi = (n_i + 1) / 2 - 1;
    (lo..=hi).contains(&j).then(|| j.rem_euclid(n_i) as usize)
}

/// A Fourier mode identified by its integer lattice index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeMode {
    pub index: [i64; 3],
    pub a: Complex3,
}

impl LatticeMode {
    pub fn to_mode(&self, periods: Real3) -> Mode {
        Mode::new(WaveVector::from_lattice(self.index, periods), self.a)
    }
}

/// Integer lattice index of `w` under `periods`, if `w` lies on the lattice.
pub fn lattice_index(w: &WaveVector, periods: Real3) -> Option<[i64; 3]> {
    let c = w.components();
    let mut out = [0i64; 3];
    for i in 0..3 {
        let x = c[i] * periods[i] / (2.0 * std::f64::consts::PI);
        let r = x.round();
        if (x - r).abs() > 1e-9 * r.abs().max(1.0) {
            return None;
        }
        out[i] = r as i64;
    }
    Some(out)
}

/// Forward transform of the packed field into its Fourier modes.
///
/// Modes with `|a| < trunc_tol · max|a|` are dropped; an all-zero grid yields
/// an empty list.
pub fn grid_to_modes(
    grid: &FieldGrid,
    medium: &Medium,
    trunc_tol: f64,
) -> Result<Vec<LatticeMode>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let shape = grid.shape;
    let n = grid.len();
    let mut comps: [Vec<Complex64>; 3] = std::array::from_fn(|_| Vec::with_capacity(n));
    for (h, e) in grid.h.iter().zip(&grid.e) {
        let f = pack_fields(h, e, medium);
        for c in 0..3 {
            comps[c].push(f[c]);
        }
    }
    for c in comps.iter_mut() {
        fft::fft3(c, shape, FftDirection::Forward);
    }
    let scale = 1.0 / n as f64;
    let amps: Vec<Complex3> = (0..n)
        .map(|i| std::array::from_fn(|c| comps[c][i] * scale))
        .collect();

    let largest = amps.iter().map(vec3::cnorm).fold(0.0, f64::max);
    let cutoff = trunc_tol * largest;
    let [nx, ny, nz] = shape;
    let mut modes = Vec::new();
    for (i, a) in amps.into_iter().enumerate() {
        let mag = vec3::cnorm(&a);
        if mag == 0.0 || mag < cutoff {
            continue;
        }
        let (p, q, r) = (i / (ny * nz), (i / nz) % ny, i % nz);
        modes.push(LatticeMode {
            index: [
                signed_index(p, nx),
                signed_index(q, ny),
                signed_index(r, nz),
            ],
            a,
        });
    }
    Ok(modes)
}

/// Samples the solution at time `t` on a grid by inverse transform of the
/// evolved mode amplitudes.
pub fn modes_to_grid(sol: &ModalSolution, shape: [usize; 3], t: f64) -> Result<FieldGrid> {
    let n: usize = shape.iter().product();
    if n == 0 {
        return Err(Error::EmptyGrid);
    }
    let periods = sol.periods();
    let mut comps: [Vec<Complex64>; 3] = std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); n]);
    for m in sol.evolve_modes(t) {
        let off = || {
            let [x, y, z] = m.w.components();
            Error::OffLatticeMode(x, y, z)
        };
        let idx = lattice_index(&m.w, periods).ok_or_else(off)?;
        let mut bins = [0usize; 3];
        for ax in 0..3 {
            bins[ax] = bin_of(idx[ax], shape[ax]).ok_or_else(off)?;
        }
        let flat = (bins[0] * shape[1] + bins[1]) * shape[2] + bins[2];
        for (comp, a) in comps.iter_mut().zip(m.a) {
            comp[flat] += a;
        }
    }
    for c in comps.iter_mut() {
        fft::fft3(c, shape, FftDirection::Inverse);
    }
    let (h, e) = (0..n)
        .map(|i| unpack_fields(&std::array::from_fn(|c| comps[c][i]), sol.medium()))
        .unzip();
    FieldGrid::new(shape, periods, h, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn signed_index_ranges() {
        let got: Vec<i64> = (0..8).map(|m| signed_index(m, 8)).collect();
        assert_eq!(got, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        let got: Vec<i64> = (0..5).map(|m| signed_index(m, 5)).collect();
        assert_eq!(got, vec![0, 1, 2, -2, -1]);
        assert_eq!(bin_of(4, 8), None);
        assert_eq!(bin_of(-4, 8), Some(4));
        assert_eq!(bin_of(3, 5), None);
        assert_eq!(bin_of(-2, 5), Some(3));
        for n in [1, 2, 5, 8, 12] {
            for m in 0..n {
                assert_eq!(bin_of(signed_index(m, n), n), Some(m));
            }
        }
    }

    #[test]
    fn empty_and_bad_grids() {
        assert!(matches!(
            FieldGrid::zeros([0, 4, 4], [1.0; 3]),
            Err(Error::EmptyGrid)
        ));
        let mut h = vec![[0.0; 3]; 8];
        h[5][1] = f64::INFINITY;
        let err = FieldGrid::new([2, 2, 2], [1.0; 3], h, vec![[0.0; 3]; 8]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteSample { index: 5 }));
        let err = FieldGrid::new([2, 2, 2], [1.0; 3], vec![[0.0; 3]; 7], vec![[0.0; 3]; 8]);
        assert!(matches!(err, Err(Error::GridSizeMismatch { .. })));
    }

    #[test]
    fn constant_field_is_dc_mode() {
        let m = Medium::new(4.0, 1.0).unwrap();
        let g = FieldGrid::from_fn([4, 3, 5], [1.0; 3], |_| ([1.0, 0.0, 0.0], [0.0; 3])).unwrap();
        let modes = grid_to_modes(&g, &m, DEFAULT_TRUNC_TOL).unwrap();
        assert_eq!(modes.len(), 1);
        assert_eq!(modes[0].index, [0, 0, 0]);
        assert!((modes[0].a[0] - Complex64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_grid_has_no_modes() {
        let g = FieldGrid::zeros([4, 4, 4], [1.0; 3]).unwrap();
        assert!(grid_to_modes(&g, &Medium::unit(), DEFAULT_TRUNC_TOL)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn isotropic_cosine_gives_two_modes() {
        let s3 = 3f64.sqrt();
        let g = FieldGrid::from_fn([8, 8, 8], [1.0; 3], |x| {
            let c = (2.0 * PI * (x[0] + x[1] + x[2])).cos();
            ([s3 * c, 0.0, -s3 * c], [c, -2.0 * c, c])
        })
        .unwrap();
        let mut modes = grid_to_modes(&g, &Medium::unit(), DEFAULT_TRUNC_TOL).unwrap();
        modes.sort_by_key(|m| m.index);
        assert_eq!(modes.len(), 2);
        assert_eq!(modes[0].index, [-1, -1, -1]);
        assert_eq!(modes[1].index, [1, 1, 1]);
        let want = [
            Complex64::new(s3 / 2.0, 0.5),
            Complex64::new(0.0, -1.0),
            Complex64::new(-s3 / 2.0, 0.5),
        ];
        for m in &modes {
            assert!(vec3::cnorm(&vec3::csub(&m.a, &want)) < 1e-14);
        }
    }

    #[test]
    fn off_lattice_mode_rejected() {
        let w = WaveVector::new(1.0, 0.0, 0.0);
        let sol = ModalSolution::build(
            &[Mode::new(w, [Complex64::new(1.0, 0.0); 3])],
            Medium::unit(),
            [1.0; 3],
        )
        .unwrap();
        assert!(matches!(
            modes_to_grid(&sol, [8, 8, 8], 0.0),
            Err(Error::OffLatticeMode(..))
        ));

        // on the lattice but beyond the grid's band
        let w = WaveVector::from_lattice([5, 0, 0], [1.0; 3]);
        let sol = ModalSolution::build(
            &[Mode::new(w, [Complex64::new(1.0, 0.0); 3])],
            Medium::unit(),
            [1.0; 3],
        )
        .unwrap();
        assert!(matches!(
            modes_to_grid(&sol, [8, 8, 8], 0.0),
            Err(Error::OffLatticeMode(..))
        ));
    }

    #[test]
    fn empty_solution_synthesizes_zero_grid() {
        let sol = ModalSolution::build(&[], Medium::unit(), [1.0, 2.0, 3.0]).unwrap();
        let g = modes_to_grid(&sol, [4, 4, 4], 0.7).unwrap();
        assert!(g.h().iter().chain(g.e()).all(|v| *v == [0.0; 3]));
    }
}

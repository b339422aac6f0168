//! Eigen-decomposition of the curl operator on single plane-wave subspaces.
//!
//! For a wave vector `w`, the space `V^w = { a·e^{i w·x} : a ∈ C³ }` is
//! invariant under the curl, which acts on the amplitude as `a ↦ i (w × a)`.
//! Writing the eigen-relation as `curl v = i λ v`, the three eigen-scalars are
//! `λ = (0, i|w|, -i|w|)`. This module builds closed-form eigenvectors for
//! those scalars and projects arbitrary amplitudes onto them.
//!
//! Two closed forms are needed. The general one,
//! `v = -|w|²(1,1,1) + λ r_w + s_w w`, degenerates to zero on the isotropic
//! line `w_x = w_y = w_z`, where `r_w = 0`; that line gets its own basis.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::vec3::{self, Complex3, Real3};

/// A wave vector is treated as isotropic when `|r_w| <= ISOTROPIC_TOL * |w|`.
pub const ISOTROPIC_TOL: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which closed form applies to a wave vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `w = 0`: the DC mode.
    Zero,
    /// `w_x = w_y = w_z != 0`, so `r_w = 0`.
    Isotropic,
    /// `r_w != 0`.
    General,
}

/// A spatial frequency `w ∈ R³` together with its branch classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector {
    w: Real3,
    branch: Branch,
}

impl WaveVector {
    /// Classifies with the floating-point threshold [`ISOTROPIC_TOL`].
    pub fn new(wx: f64, wy: f64, wz: f64) -> Self {
        let w = [wx, wy, wz];
        let n = vec3::norm(&w);
        let branch = if n == 0.0 {
            Branch::Zero
        } else if vec3::norm(&r_of(&w)) <= ISOTROPIC_TOL * n {
            Branch::Isotropic
        } else {
            Branch::General
        };
        Self { w, branch }
    }

    /// The lattice frequency `2π (j/b_x, k/b_y, l/b_z)`.
    ///
    /// The isotropic test is done on the integer/period products
    /// `j·b_y·b_z = k·b_x·b_z = l·b_x·b_y`, and isotropic vectors get three
    /// bit-identical components.
    pub fn from_lattice(index: [i64; 3], periods: Real3) -> Self {
        let [j, k, l] = index.map(|n| n as f64);
        let [bx, by, bz] = periods;
        let w = [2.0 * PI * j / bx, 2.0 * PI * k / by, 2.0 * PI * l / bz];
        if index == [0, 0, 0] {
            return Self {
                w: [0.0; 3],
                branch: Branch::Zero,
            };
        }
        let p = j * by * bz;
        if p == k * bx * bz && p == l * bx * by {
            let c = w[0];
            return Self {
                w: [c, c, c],
                branch: Branch::Isotropic,
            };
        }
        let mut wv = Self::new(w[0], w[1], w[2]);
        // an exactly vanishing r_w would divide by zero in the general form
        if wv.branch == Branch::General && vec3::norm(&wv.r()) == 0.0 {
            wv.branch = Branch::Isotropic;
        }
        wv
    }

    pub fn components(&self) -> Real3 {
        self.w
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn norm(&self) -> f64 {
        vec3::norm(&self.w)
    }

    pub fn norm_sqr(&self) -> f64 {
        vec3::dot(&self.w, &self.w)
    }

    /// `s_w = w_x + w_y + w_z`.
    pub fn s(&self) -> f64 {
        self.w[0] + self.w[1] + self.w[2]
    }

    /// `r_w = (w_y - w_z, w_z - w_x, w_x - w_y)`, orthogonal to `w`.
    pub fn r(&self) -> Real3 {
        r_of(&self.w)
    }

    /// `γ_w = |r_w|`, computed from `r_w` directly rather than from
    /// `sqrt(3|w|² - s_w²)`, which cancels badly near the isotropic line.
    pub fn gamma(&self) -> f64 {
        vec3::norm(&self.r())
    }

    /// Sign of `ŵ` on the isotropic line, `+1` or `-1`.
    fn isotropic_sign(&self) -> f64 {
        if self.s() < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn dot(&self, x: &Real3) -> f64 {
        vec3::dot(&self.w, x)
    }
}

impl std::ops::Neg for WaveVector {
    type Output = WaveVector;

    fn neg(self) -> WaveVector {
        WaveVector {
            w: self.w.map(|c| -c),
            branch: self.branch,
        }
    }
}

fn r_of(w: &Real3) -> Real3 {
    [w[1] - w[2], w[2] - w[0], w[0] - w[1]]
}

/// The three eigenpairs of the curl on `V^w` plus an orthonormal real frame.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    /// `(λ_1, λ_2, λ_3)`; the curl eigenvalue of `v_d` is `i λ_d`.
    pub lambda: [Complex64; 3],
    /// Unnormalized eigenvectors `(v_1, v_2, v_3)`.
    pub v: [Complex3; 3],
    /// Orthogonal matrix Φ, row-major: `frame[i][d]` is component `i` of `η_d`.
    pub frame: [[f64; 3]; 3],
}

impl EigenSystem {
    /// Convention for the DC mode: nothing evolves, standard basis.
    pub fn stationary() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            lambda: [zero; 3],
            v: [[one, zero, zero], [zero, one, zero], [zero, zero, one]],
            frame: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Column `d` of Φ.
    pub fn frame_column(&self, d: usize) -> Real3 {
        [self.frame[0][d], self.frame[1][d], self.frame[2][d]]
    }

    /// `Σ_d α_d v_d`.
    pub fn reconstruct(&self, alpha: &ModalProjection) -> Complex3 {
        (0..3).fold(vec3::CZERO3, |acc, d| {
            vec3::cadd(&acc, &vec3::cscale(alpha.alpha[d], &self.v[d]))
        })
    }
}

/// Coordinates `(α_1, α_2, α_3)` of an amplitude in the `(v_1, v_2, v_3)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalProjection {
    pub alpha: [Complex64; 3],
}

/// Amplitude of `curl(v e^{i w·x})` divided by `e^{i w·x}`, i.e. `i (w × v)`.
pub fn curl_planewave(w: &WaveVector, v: &Complex3) -> Complex3 {
    let [wx, wy, wz] = w.w;
    [
        I * (v[2] * wy - v[1] * wz),
        I * (v[0] * wz - v[2] * wx),
        I * (v[1] * wx - v[0] * wy),
    ]
}

/// `(0, i|w|, -i|w|)`; all zero for the DC mode.
pub fn eigenvalues(w: &WaveVector) -> [Complex64; 3] {
    let n = w.norm();
    [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, n),
        Complex64::new(0.0, -n),
    ]
}

/// Closed-form eigenvectors of the curl on `V^w`.
pub fn eigenvectors(w: &WaveVector) -> Result<EigenSystem> {
    let lambda = eigenvalues(w);
    match w.branch {
        Branch::Zero => Err(Error::ZeroWaveVector),
        Branch::Isotropic => Ok(isotropic_system(w, lambda)),
        Branch::General => Ok(general_system(w, lambda)),
    }
}

fn isotropic_system(w: &WaveVector, lambda: [Complex64; 3]) -> EigenSystem {
    let sign = w.isotropic_sign();
    let s3 = 3f64.sqrt();
    let inv3 = 1.0 / s3;
    // ŵ > 0 orientation; ŵ < 0 swaps the roles of v_2 and v_3
    let plus = [
        Complex64::new(0.5, 0.5 * s3),
        Complex64::new(0.5, -0.5 * s3),
        Complex64::new(-1.0, 0.0),
    ];
    let minus = vec3::cconj(&plus);
    let (v2, v3) = if sign > 0.0 {
        (plus, minus)
    } else {
        (minus, plus)
    };
    let v1 = vec3::to_complex(&[sign * inv3; 3]);

    let inv6 = 1.0 / 6f64.sqrt();
    let inv2 = 1.0 / 2f64.sqrt();
    let frame = [
        [sign * inv3, inv6, -sign * inv2],
        [sign * inv3, inv6, sign * inv2],
        [sign * inv3, -2.0 * inv6, 0.0],
    ];
    EigenSystem {
        lambda,
        v: [v1, v2, v3],
        frame,
    }
}

fn general_system(w: &WaveVector, lambda: [Complex64; 3]) -> EigenSystem {
    let n = w.norm();
    let n2 = w.norm_sqr();
    let s = w.s();
    let r = w.r();
    let wc = w.w;

    let v1 = vec3::to_complex(&wc.map(|c| c / n));
    let eig = |l: Complex64| -> Complex3 {
        std::array::from_fn(|i| Complex64::new(-n2 + s * wc[i], 0.0) + l * r[i])
    };
    let v2 = eig(lambda[1]);
    let v3 = eig(lambda[2]);

    // u = -|w|²(1,1,1) + s_w w spans the real part of v_2, v_3
    let u: Real3 = std::array::from_fn(|i| -n2 + s * wc[i]);
    let un = vec3::norm(&u);
    let rn = vec3::norm(&r);
    let frame = std::array::from_fn(|i| [wc[i] / n, u[i] / un, r[i] / rn]);
    EigenSystem {
        lambda,
        v: [v1, v2, v3],
        frame,
    }
}

/// Coordinates of `a` in the eigenvector basis returned by [`eigenvectors`].
pub fn project(w: &WaveVector, a: &Complex3) -> Result<ModalProjection> {
    match w.branch {
        Branch::Zero => Err(Error::ZeroWaveVector),
        Branch::Isotropic => Ok(project_isotropic(w, a)),
        Branch::General => Ok(project_general(w, a)),
    }
}

fn project_isotropic(w: &WaveVector, a: &Complex3) -> ModalProjection {
    let sign = w.isotropic_sign();
    let s3 = 3f64.sqrt();
    let sa = a[0] + a[1] + a[2];
    let common = sa / 6.0 - a[2] / 2.0;
    let twist = I * (s3 / 6.0) * (a[1] - a[0]);
    let (up, down) = (common + twist, common - twist);
    let alpha = if sign > 0.0 {
        [sa / s3, up, down]
    } else {
        [-sa / s3, down, up]
    };
    ModalProjection { alpha }
}

fn project_general(w: &WaveVector, a: &Complex3) -> ModalProjection {
    let n = w.norm();
    let n2 = w.norm_sqr();
    let g2 = w.gamma().powi(2);
    let s = w.s();
    let r = w.r();

    let wa = vec3::dot_rc(&w.w, a);
    let sa = a[0] + a[1] + a[2];
    let ra = vec3::dot_rc(&r, a);

    let even = wa * s / (2.0 * n2 * g2) - sa / (2.0 * g2);
    let odd = I * ra / (2.0 * n * g2);
    ModalProjection {
        alpha: [wa / n, even - odd, even + odd],
    }
}

/// Eigen-system and projection of one mode. The DC mode uses the stationary
/// convention: zero eigenvalues, standard basis, `α = a`.
pub fn decompose_mode(w: &WaveVector, a: &Complex3) -> (EigenSystem, ModalProjection) {
    match w.branch {
        Branch::Zero => (EigenSystem::stationary(), ModalProjection { alpha: *a }),
        Branch::Isotropic => (isotropic_system(w, eigenvalues(w)), project_isotropic(w, a)),
        Branch::General => (general_system(w, eigenvalues(w)), project_general(w, a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &Complex3, b: &Complex3, tol: f64) -> bool {
        vec3::cnorm(&vec3::csub(a, b)) <= tol
    }

    fn eigen_residual(w: &WaveVector, sys: &EigenSystem) -> f64 {
        (0..3)
            .map(|d| {
                let lhs = curl_planewave(w, &sys.v[d]);
                let rhs = vec3::cscale(I * sys.lambda[d], &sys.v[d]);
                vec3::cnorm(&vec3::csub(&lhs, &rhs)) / (w.norm() * vec3::cnorm(&sys.v[d]))
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn curl_of_constant_is_zero() {
        let w = WaveVector::new(0.0, 0.0, 0.0);
        let v = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        assert_eq!(curl_planewave(&w, &v), vec3::CZERO3);
    }

    #[test]
    fn curl_along_z() {
        let k = 2.5;
        let w = WaveVector::new(0.0, 0.0, k);
        let v = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert_eq!(
            curl_planewave(&w, &v),
            [c(0.0, 0.0), c(0.0, k), c(0.0, 0.0)]
        );
    }

    #[test]
    fn curl_of_ones_on_isotropic_line() {
        let w = WaveVector::new(2.0 * PI, 2.0 * PI, 2.0 * PI);
        let v = [c(1.0, 0.0); 3];
        assert!(close(&curl_planewave(&w, &v), &vec3::CZERO3, 0.0));
    }

    #[test]
    fn branch_classification() {
        assert_eq!(WaveVector::new(0.0, 0.0, 0.0).branch(), Branch::Zero);
        assert_eq!(WaveVector::new(1.5, 1.5, 1.5).branch(), Branch::Isotropic);
        assert_eq!(
            WaveVector::new(-1.5, -1.5, -1.5).branch(),
            Branch::Isotropic
        );
        assert_eq!(
            WaveVector::new(1.0, 1.0, 1.0 + 1e-6).branch(),
            Branch::General
        );
        let p = [1.0, 1.0, 1.0];
        assert_eq!(
            WaveVector::from_lattice([3, 3, 3], p).branch(),
            Branch::Isotropic
        );
        assert_eq!(
            WaveVector::from_lattice([0, 0, 0], p).branch(),
            Branch::Zero
        );
        assert_eq!(
            WaveVector::from_lattice([1, 2, 3], p).branch(),
            Branch::General
        );
        // w = 2π(1/2, 2/4, 3/6) lies on the isotropic line
        let wv = WaveVector::from_lattice([1, 2, 3], [2.0, 4.0, 6.0]);
        assert_eq!(wv.branch(), Branch::Isotropic);
        let [x, y, z] = wv.components();
        assert!(x == y && y == z);
    }

    #[test]
    fn derived_scalars() {
        let w = WaveVector::new(PI, 2.0 * PI, -3.0 * PI);
        assert!((w.norm() - PI * 14f64.sqrt()).abs() < 1e-14);
        assert!((w.gamma() - PI * 42f64.sqrt()).abs() < 1e-13);
        assert_eq!(w.s(), 0.0);
        assert_eq!(w.r(), [5.0 * PI, -4.0 * PI, -PI]);
        let g2s2 = w.gamma().powi(2) + w.s().powi(2);
        assert!((g2s2 - 3.0 * w.norm_sqr()).abs() <= 1e-12 * 3.0 * w.norm_sqr());
    }

    #[test]
    fn eigenvalue_examples() {
        let l = eigenvalues(&WaveVector::new(PI, 2.0 * PI, -3.0 * PI));
        let m = PI * 14f64.sqrt();
        assert_eq!(l[0], c(0.0, 0.0));
        assert!((l[1] - c(0.0, m)).norm() < 1e-14);
        assert!((l[2] - c(0.0, -m)).norm() < 1e-14);

        assert_eq!(
            eigenvalues(&WaveVector::new(0.0, 0.0, 0.0)),
            [c(0.0, 0.0); 3]
        );

        let l = eigenvalues(&WaveVector::new(2.0 * PI, 2.0 * PI, 2.0 * PI));
        assert!((l[1] - c(0.0, 2.0 * PI * 3f64.sqrt())).norm() < 1e-13);
        assert_eq!(l[2], -l[1]);
    }

    #[test]
    fn isotropic_basis_matches_closed_form() {
        let w = WaveVector::new(2.0 * PI, 2.0 * PI, 2.0 * PI);
        let sys = eigenvectors(&w).unwrap();
        let s3 = 3f64.sqrt();
        let v1 = [c(1.0 / s3, 0.0); 3];
        let v2 = [c(0.5, s3 / 2.0), c(0.5, -s3 / 2.0), c(-1.0, 0.0)];
        let v3 = [c(0.5, -s3 / 2.0), c(0.5, s3 / 2.0), c(-1.0, 0.0)];
        assert!(close(&sys.v[0], &v1, 1e-15));
        assert!(close(&sys.v[1], &v2, 1e-15));
        assert!(close(&sys.v[2], &v3, 1e-15));
        assert!(eigen_residual(&w, &sys) < 1e-15);
    }

    #[test]
    fn negative_isotropic_orientation_satisfies_eigen_relation() {
        let w = WaveVector::new(-0.7, -0.7, -0.7);
        let sys = eigenvectors(&w).unwrap();
        assert!(eigen_residual(&w, &sys) < 1e-15);
        let v1 = sys.v[0];
        let expect = vec3::to_complex(&w.components().map(|x| x / w.norm()));
        assert!(close(&v1, &expect, 1e-15));
    }

    #[test]
    fn general_basis_for_reference_vector() {
        let w = WaveVector::new(PI, 2.0 * PI, -3.0 * PI);
        let sys = eigenvectors(&w).unwrap();
        let r14 = 14f64.sqrt();
        let p2 = PI * PI;
        let v2 = [
            c(-14.0 * p2, 5.0 * r14 * p2),
            c(-14.0 * p2, -4.0 * r14 * p2),
            c(-14.0 * p2, -r14 * p2),
        ];
        assert!(close(&sys.v[1], &v2, 1e-12));
        assert!(close(&sys.v[2], &vec3::cconj(&sys.v[1]), 0.0));
        let v1 = [1.0, 2.0, -3.0].map(|x| c(x / r14, 0.0));
        assert!(close(&sys.v[0], &v1, 1e-15));
        assert!(eigen_residual(&w, &sys) < 1e-14);
    }

    #[test]
    fn general_basis_along_z() {
        let w = WaveVector::new(0.0, 0.0, 1.0);
        let sys = eigenvectors(&w).unwrap();
        // s_w = 1, r_w = (-1, 1, 0), λ_2 = i
        assert_eq!(w.r(), [-1.0, 1.0, 0.0]);
        assert_eq!(sys.v[0], [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(sys.v[1], [c(-1.0, -1.0), c(-1.0, 1.0), c(0.0, 0.0)]);
        assert_eq!(sys.v[2], [c(-1.0, 1.0), c(-1.0, -1.0), c(0.0, 0.0)]);
        assert!(eigen_residual(&w, &sys) < 1e-16);
    }

    #[test]
    fn zero_wave_vector_is_rejected() {
        let w = WaveVector::new(0.0, 0.0, 0.0);
        assert!(matches!(eigenvectors(&w), Err(Error::ZeroWaveVector)));
        assert!(matches!(
            project(&w, &vec3::CZERO3),
            Err(Error::ZeroWaveVector)
        ));
    }

    #[test]
    fn projection_examples() {
        let s3 = 3f64.sqrt();
        let w = WaveVector::new(2.0 * PI, 2.0 * PI, 2.0 * PI);
        let a = [c(s3 / 2.0, 0.5), c(0.0, -1.0), c(-s3 / 2.0, 0.5)];
        let al = project(&w, &a).unwrap().alpha;
        assert!((al[0]).norm() < 1e-15);
        assert!((al[1] - c(s3 / 2.0, -0.5)).norm() < 1e-15);
        assert!((al[2]).norm() < 1e-15);

        let w = WaveVector::new(PI, 2.0 * PI, -3.0 * PI);
        let al = project(&w, &[c(1.0, 0.0); 3]).unwrap().alpha;
        let e = -1.0 / (28.0 * PI * PI);
        assert!(al[0].norm() < 1e-15);
        assert!((al[1] - c(e, 0.0)).norm() < 1e-15);
        assert!((al[2] - c(e, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn projecting_v1_gives_unit_coordinate() {
        for w in [
            WaveVector::new(0.3, -1.2, 2.0),
            WaveVector::new(4.0, 4.0, 4.0),
            WaveVector::new(-4.0, -4.0, -4.0),
        ] {
            let sys = eigenvectors(&w).unwrap();
            let al = project(&w, &sys.v[0]).unwrap().alpha;
            assert!((al[0] - c(1.0, 0.0)).norm() < 1e-14, "{w:?} {al:?}");
            assert!(al[1].norm() < 1e-14 && al[2].norm() < 1e-14);
        }
    }

    #[test]
    fn dc_mode_is_stationary() {
        let a = [c(1.0, 2.0), c(0.0, 0.0), c(-1.0, 0.0)];
        let (sys, p) = decompose_mode(&WaveVector::new(0.0, 0.0, 0.0), &a);
        assert_eq!(p.alpha, a);
        assert_eq!(sys.lambda, [c(0.0, 0.0); 3]);
        assert_eq!(sys.reconstruct(&p), a);
    }

    #[test]
    fn frames_are_orthogonal() {
        for w in [
            WaveVector::new(0.3, -1.2, 2.0),
            WaveVector::new(2.0, 2.0, 2.0),
            WaveVector::new(-2.0, -2.0, -2.0),
        ] {
            let f = eigenvectors(&w).unwrap().frame;
            for i in 0..3 {
                for j in 0..3 {
                    let dot: f64 = (0..3).map(|k| f[k][i] * f[k][j]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn near_isotropic_general_branch_reconstructs() {
        let base = 1.7;
        let w = WaveVector::new(base + 1e-8, base - 0.5e-8, base);
        assert_eq!(w.branch(), Branch::General);
        let a = [c(0.3, -0.2), c(1.1, 0.4), c(-0.6, 0.9)];
        let (sys, p) = decompose_mode(&w, &a);
        assert!(vec3::crel_err(&sys.reconstruct(&p), &a, 0.0) < 1e-6);
    }
}

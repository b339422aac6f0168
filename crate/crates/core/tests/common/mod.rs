#![allow(dead_code)]

use std::f64::consts::PI;

use curlwave::ingest::LatticeMode;
use curlwave::vec3::{self, Complex3, Real3};
use curlwave::{Complex64, Medium, ModalSolution, Mode, WaveVector};
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex3<R: Rng>(rng: &mut R) -> Complex3 {
    std::array::from_fn(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_unit<R: Rng>(rng: &mut R) -> Real3 {
    loop {
        let v: Real3 = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = vec3::norm(&v);
        if n > 0.1 && n <= 1.0 {
            return v.map(|x| x / n);
        }
    }
}

/// Log-uniform magnitude in `[1e-3, 1e3]`.
pub fn random_magnitude<R: Rng>(rng: &mut R) -> f64 {
    10f64.powf(rng.gen_range(-3.0..3.0))
}

/// A general-branch wave vector at least 1e-3 radians away from the
/// isotropic line.
pub fn random_general<R: Rng>(rng: &mut R) -> WaveVector {
    loop {
        let d = random_unit(rng);
        let m = random_magnitude(rng);
        let w = WaveVector::new(m * d[0], m * d[1], m * d[2]);
        if w.gamma() > 1e-3 * w.norm() {
            return w;
        }
    }
}

pub fn random_isotropic<R: Rng>(rng: &mut R) -> WaveVector {
    let m = random_magnitude(rng);
    let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    WaveVector::new(s * m, s * m, s * m)
}

/// Random band-limited lattice modes with indices in `[-band, band]³`.
pub fn random_lattice_modes<R: Rng>(rng: &mut R, count: usize, band: i64) -> Vec<LatticeMode> {
    let mut out: Vec<LatticeMode> = Vec::with_capacity(count);
    while out.len() < count {
        let index = std::array::from_fn(|_| rng.gen_range(-band..=band));
        if out.iter().any(|m| m.index == index) {
            continue;
        }
        out.push(LatticeMode {
            index,
            a: random_complex3(rng),
        });
    }
    out
}

pub fn random_periods<R: Rng>(rng: &mut R) -> Real3 {
    std::array::from_fn(|_| rng.gen_range(0.5..2.0))
}

pub fn random_medium<R: Rng>(rng: &mut R) -> Medium {
    Medium::new(rng.gen_range(0.5..3.0), rng.gen_range(0.5..3.0)).unwrap()
}

pub fn random_solution<R: Rng>(rng: &mut R) -> ModalSolution {
    let periods = random_periods(rng);
    let count = rng.gen_range(1..=8);
    let modes: Vec<Mode> = random_lattice_modes(rng, count, 3)
        .iter()
        .map(|m| m.to_mode(periods))
        .collect();
    ModalSolution::build(&modes, random_medium(rng), periods).unwrap()
}

pub fn random_points<R: Rng>(rng: &mut R, n: usize, periods: Real3) -> Vec<Real3> {
    (0..n)
        .map(|_| std::array::from_fn(|a| rng.gen_range(0.0..periods[a])))
        .collect()
}

pub fn max_norm(fs: &[Complex3]) -> f64 {
    fs.iter().map(vec3::cnorm).fold(0.0, f64::max)
}

pub fn max_diff(a: &[Complex3], b: &[Complex3]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| vec3::cnorm(&vec3::csub(x, y)))
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Brute-force 3×3 eigen-solver, independent of the closed forms under test.
// ---------------------------------------------------------------------------

pub type CMat3 = [[Complex64; 3]; 3];

/// The matrix of `v ↦ i (w × v)`, i.e. `i [w]×`, written out entrywise.
pub fn curl_matrix(w: Real3) -> CMat3 {
    let i = c(0.0, 1.0);
    let z = c(0.0, 0.0);
    [
        [z, -i * w[2], i * w[1]],
        [i * w[2], z, -i * w[0]],
        [-i * w[1], i * w[0], z],
    ]
}

fn det3(m: &CMat3) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Roots of `x³ + b x² + c x + d` by Durand–Kerner iteration.
fn cubic_roots(b: Complex64, cc: Complex64, d: Complex64) -> [Complex64; 3] {
    let p = |x: Complex64| ((x + b) * x + cc) * x + d;
    let scale = 1.0 + b.norm().max(cc.norm().sqrt()).max(d.norm().cbrt());
    let seed = c(0.4, 0.9);
    let mut r = [
        seed * scale,
        seed * seed * scale,
        seed * seed * seed * scale,
    ];
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for k in 0..3 {
            let mut den = c(1.0, 0.0);
            for j in 0..3 {
                if j != k {
                    den *= r[k] - r[j];
                }
            }
            let step = p(r[k]) / den;
            r[k] -= step;
            delta = delta.max(step.norm());
        }
        if delta <= 1e-17 * scale {
            break;
        }
    }
    r
}

/// Eigenvalues of a general complex 3×3 matrix via its characteristic
/// polynomial.
pub fn eigenvalues_numeric(m: &CMat3) -> [Complex64; 3] {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let mut roots = cubic_roots(-tr, minors, -det3(m));
    // one Newton polish on the true determinant
    for r in roots.iter_mut() {
        let f = |x: Complex64| {
            let mut s = *m;
            for i in 0..3 {
                s[i][i] -= x;
            }
            det3(&s)
        };
        let h = 1e-7 * (1.0 + r.norm());
        let df = (f(*r + h) - f(*r - h)) / (2.0 * h);
        if df.norm() > 0.0 {
            *r -= f(*r) / df;
        }
    }
    roots
}

fn cross_bilinear(a: &Complex3, b: &Complex3) -> Complex3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Null vector of `m - λI` from the best-conditioned pair of its rows.
pub fn eigenvector_numeric(m: &CMat3, lambda: Complex64) -> Complex3 {
    let mut s = *m;
    for i in 0..3 {
        s[i][i] -= lambda;
    }
    [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| cross_bilinear(&s[i], &s[j]))
        .max_by(|a, b| vec3::cnorm(a).total_cmp(&vec3::cnorm(b)))
        .unwrap()
}

/// `|v - proj_n v| / |v|` with the Hermitian projection onto `span{n}`.
pub fn off_span(v: &Complex3, n: &Complex3) -> f64 {
    let nn = vec3::cnorm_sqr(n);
    let coef: Complex64 = (0..3).map(|i| n[i].conj() * v[i]).sum::<Complex64>() / nn;
    vec3::cnorm(&vec3::csub(v, &vec3::cscale(coef, n))) / vec3::cnorm(v)
}

/// The curl eigenvalue of direction `d` must match a numeric root and its
/// eigenvector must lie in the numeric eigenspace. Returns the worse of the
/// relative eigenvalue mismatch and eigenvector residual.
pub fn oracle_residual(w: &WaveVector) -> f64 {
    let m = curl_matrix(w.components());
    let roots = eigenvalues_numeric(&m);
    let sys = curlwave::spectral::eigenvectors(w).unwrap();
    let n = w.norm();
    let mut worst: f64 = 0.0;
    for d in 0..3 {
        let target = c(0.0, 1.0) * sys.lambda[d];
        let (best, dist) = roots
            .iter()
            .map(|r| (*r, (r - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        worst = worst.max(dist / n);
        let nv = eigenvector_numeric(&m, best);
        worst = worst.max(off_span(&sys.v[d], &nv));
    }
    worst
}

pub fn lattice_mode_sum(modes: &[LatticeMode], periods: Real3, x: &Real3) -> Complex3 {
    let mut acc = vec3::CZERO3;
    for m in modes {
        let th: f64 = (0..3)
            .map(|a| 2.0 * PI * m.index[a] as f64 / periods[a] * x[a])
            .sum();
        acc = vec3::cadd(&acc, &vec3::cscale(Complex64::from_polar(1.0, th), &m.a));
    }
    acc
}

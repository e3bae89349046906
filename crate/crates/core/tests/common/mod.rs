//! Seeded random generators shared by the integration suites.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use tavis_ent::linalg::{kron, ComplexMatrix};
use tavis_ent::qstate::{DensityMatrix, FamilyCoeffs};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal via Box–Muller.
pub fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, |_, _| complex_normal(rng));
    (&g + &g.adjoint()).scale(Complex64::new(0.5, 0.0))
}

pub fn random_unit_vector(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// `G·G†/tr` for a Ginibre matrix `G` of rank `rank`.
pub fn random_density_matrix(rng: &mut impl Rng, n: usize, rank: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for _ in 0..rank {
        let v: Vec<Complex64> = (0..n).map(|_| complex_normal(rng)).collect();
        m = &m + &ComplexMatrix::outer(&v);
    }
    let tr = m.trace().re;
    let mut m = m.scale(Complex64::new(1.0 / tr, 0.0));
    // exact Hermitian diagonal
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
    }
    m
}

pub fn random_two_qubit_state(rng: &mut impl Rng) -> DensityMatrix {
    let rank = rng.gen_range(1..=4);
    DensityMatrix::new(random_density_matrix(rng, 4, rank), vec![2, 2]).unwrap()
}

/// Convex mixture of 1–4 random product states.
pub fn random_separable(rng: &mut impl Rng) -> DensityMatrix {
    let terms = rng.gen_range(1..=4);
    let weights: Vec<f64> = (0..terms).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(4);
    for w in weights {
        let ra = rng.gen_range(1..=2);
        let rb = rng.gen_range(1..=2);
        let a = random_density_matrix(rng, 2, ra);
        let b = random_density_matrix(rng, 2, rb);
        m = &m + &kron(&a, &b).scale(Complex64::new(w / total, 0.0));
    }
    DensityMatrix::new(m, vec![2, 2]).unwrap()
}

/// Uniform point on the probability simplex.
pub fn random_simplex(rng: &mut impl Rng) -> (f64, f64, f64) {
    let e: Vec<f64> = (0..3).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    let x1 = e[0] / s;
    let x2 = e[1] / s;
    (x1, x2, (1.0 - x1 - x2).max(0.0))
}

pub fn random_diagonal_family(rng: &mut impl Rng) -> FamilyCoeffs {
    let (x1, x2, x3) = random_simplex(rng);
    FamilyCoeffs::diagonal(x1, x2, x3).unwrap()
}

/// Real `Y` drawn uniformly from the PSD-allowed interval.
pub fn random_real_family(rng: &mut impl Rng) -> FamilyCoeffs {
    let (x1, x2, x3) = random_simplex(rng);
    let bound = (x1 * x3).sqrt();
    let y = bound * rng.gen_range(-1.0..=1.0);
    FamilyCoeffs::new(x1, x2, x3, Complex64::new(y, 0.0)).unwrap()
}

pub fn random_complex_family(rng: &mut impl Rng) -> FamilyCoeffs {
    let (x1, x2, x3) = random_simplex(rng);
    let bound = (x1 * x3).sqrt();
    let r = bound * rng.gen::<f64>().sqrt();
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    FamilyCoeffs::new(x1, x2, x3, Complex64::from_polar(r, phase)).unwrap()
}

pub fn random_direction(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v = [normal(rng), normal(rng), normal(rng)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Relative error with an absolute floor of one: `|a − b| / max(1, |b|)`.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

//! Entanglement diagnostics for two spin-1/2 atoms: the partial-transpose
//! (PPT) test with its negativity, and the spin-squeezing parameter
//!
//! ```text
//! ξ² = N·(ΔS_{n1})² / (⟨S_{n2}⟩² + ⟨S_{n3}⟩²),   N = 2,
//! ```
//!
//! evaluated in a given orthonormal frame or minimised over frames, together
//! with its closed forms for the symmetric state family.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, ComplexMatrix};
use crate::qstate::{family_density, partial_transpose, DensityMatrix, FamilyCoeffs};

/// Number of atoms.
pub const N_ATOMS: f64 = 2.0;
/// A partial-transpose eigenvalue below `-PPT_TOL` certifies entanglement.
pub const PPT_TOL: f64 = 1e-13;
/// Below this `|⟨S⟩|` the squeezing parameter is undefined.
pub const MEAN_SPIN_TOL: f64 = 1e-8;
/// Frame orthonormality tolerance.
pub const FRAME_TOL: f64 = 1e-10;
/// Directions in the Fibonacci lattice used by [`FramePolicy::Global`].
pub const SPHERE_GRID: usize = 10_000;
/// Coordinate-descent passes after the lattice search.
pub const REFINE_PASSES: usize = 20;

pub type Vec3 = [f64; 3];

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn scaled(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn normalized(a: &Vec3) -> Vec3 {
    scaled(a, 1.0 / norm(a))
}

fn quad(m: &[[f64; 3]; 3], v: &Vec3) -> f64 {
    (0..3)
        .map(|i| (0..3).map(|j| v[i] * m[i][j] * v[j]).sum::<f64>())
        .sum()
}

/// Some unit vector orthogonal to `u`.
fn any_orthogonal(u: &Vec3) -> Vec3 {
    // cross with the axis least aligned with u
    let k = (0..3)
        .min_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs()))
        .unwrap();
    let mut e = [0.0; 3];
    e[k] = 1.0;
    normalized(&cross(u, &e))
}

/// Collective spin `S = s₁ + s₂` with `s = σ/2`, in the `e, g` basis.
#[derive(Debug, Clone)]
pub struct CollectiveSpin {
    pub sx: ComplexMatrix,
    pub sy: ComplexMatrix,
    pub sz: ComplexMatrix,
}

impl Default for CollectiveSpin {
    fn default() -> Self {
        Self::new()
    }
}

impl CollectiveSpin {
    pub fn new() -> Self {
        let h = Complex64::new(0.5, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let i2 = ComplexMatrix::identity(2);
        let sx = ComplexMatrix::from_fn(2, |i, j| if i != j { h } else { z });
        let sy = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => Complex64::new(0.0, -0.5),
            (1, 0) => Complex64::new(0.0, 0.5),
            _ => z,
        });
        let sz = ComplexMatrix::from_real_diag(&[0.5, -0.5]);
        let collective = |s: &ComplexMatrix| &kron(s, &i2) + &kron(&i2, s);
        Self {
            sx: collective(&sx),
            sy: collective(&sy),
            sz: collective(&sz),
        }
    }

    pub fn components(&self) -> [&ComplexMatrix; 3] {
        [&self.sx, &self.sy, &self.sz]
    }

    /// `S⁺ = Sx + i·Sy`.
    pub fn raising(&self) -> ComplexMatrix {
        &self.sx + &self.sy.scale(Complex64::new(0.0, 1.0))
    }

    pub fn lowering(&self) -> ComplexMatrix {
        self.raising().adjoint()
    }

    /// `n·S`.
    pub fn along(&self, n: &Vec3) -> ComplexMatrix {
        let c = |x: f64| Complex64::new(x, 0.0);
        let xy = &self.sx.scale(c(n[0])) + &self.sy.scale(c(n[1]));
        &xy + &self.sz.scale(c(n[2]))
    }
}

/// First and symmetrised second moments of the collective spin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMoments {
    /// `⟨S_k⟩`
    pub mean: Vec3,
    /// `½⟨S_j S_k + S_k S_j⟩`
    pub second: [[f64; 3]; 3],
}

impl SpinMoments {
    pub fn covariance(&self) -> [[f64; 3]; 3] {
        let mut c = self.second;
        for (j, row) in c.iter_mut().enumerate() {
            for (k, v) in row.iter_mut().enumerate() {
                *v -= self.mean[j] * self.mean[k];
            }
        }
        c
    }

    /// `(Δ S_n)²` for a unit vector `n`.
    pub fn variance(&self, n: &Vec3) -> f64 {
        quad(&self.second, n) - dot(&self.mean, n).powi(2)
    }

    pub fn mean_norm(&self) -> f64 {
        norm(&self.mean)
    }
}

/// Imaginary residue above which an expectation value is reported as a
/// dimension or Hermiticity problem rather than silently dropped.
const IMAG_RESIDUE_TOL: f64 = 1e-10;

pub fn spin_moments(rho: &DensityMatrix) -> Result<SpinMoments> {
    if !rho.is_two_qubit() {
        return Err(Error::DimensionMismatch(format!(
            "spin moments need a two-atom state with dims [2, 2], got {:?}",
            rho.dims()
        )));
    }
    let spin = CollectiveSpin::new();
    let ops = spin.components();
    let real = |z: Complex64| -> Result<f64> {
        if z.im.abs() > IMAG_RESIDUE_TOL {
            return Err(Error::NotHermitian(z.im.abs()));
        }
        Ok(z.re)
    };
    let mut mean = [0.0; 3];
    for k in 0..3 {
        mean[k] = real(rho.expect(ops[k]))?;
    }
    let mut second = [[0.0; 3]; 3];
    for j in 0..3 {
        for k in j..3 {
            let anti = &(ops[j] * ops[k]) + &(ops[k] * ops[j]);
            let v = 0.5 * real(rho.expect(&anti))?;
            second[j][k] = v;
            second[k][j] = v;
        }
    }
    Ok(SpinMoments { mean, second })
}

/// Orthonormal triad `(n1, n2, n3)`; `n1` carries the variance, `n2` and
/// `n3` the mean-spin projections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinFrame {
    pub n1: Vec3,
    pub n2: Vec3,
    pub n3: Vec3,
}

impl SpinFrame {
    pub fn new(n1: Vec3, n2: Vec3, n3: Vec3) -> Result<Self> {
        for (name, v) in [("n1", &n1), ("n2", &n2), ("n3", &n3)] {
            if (norm(v) - 1.0).abs() > FRAME_TOL {
                return Err(Error::InvalidFrame(format!("{name} has norm {}", norm(v))));
            }
        }
        for (name, a, b) in [("n1.n2", &n1, &n2), ("n1.n3", &n1, &n3), ("n2.n3", &n2, &n3)] {
            if dot(a, b).abs() > FRAME_TOL {
                return Err(Error::InvalidFrame(format!("{name} = {}", dot(a, b))));
            }
        }
        Ok(Self { n1, n2, n3 })
    }

    /// `(x̂, ŷ, ẑ)`.
    pub fn standard() -> Self {
        Self {
            n1: [1.0, 0.0, 0.0],
            n2: [0.0, 1.0, 0.0],
            n3: [0.0, 0.0, 1.0],
        }
    }

    /// Right-handed triad with the given `n1`, and `n2` along the part of
    /// `toward` orthogonal to `n1` (any orthogonal direction if there is
    /// none).
    pub fn completing(n1: &Vec3, toward: &Vec3) -> Self {
        let n1 = normalized(n1);
        let perp = {
            let p = dot(toward, &n1);
            [toward[0] - p * n1[0], toward[1] - p * n1[1], toward[2] - p * n1[2]]
        };
        let n2 = if norm(&perp) > 1e-12 {
            normalized(&perp)
        } else {
            any_orthogonal(&n1)
        };
        let n3 = normalized(&cross(&n1, &n2));
        Self { n1, n2, n3 }
    }
}

/// How the frame of the squeezing parameter is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FramePolicy {
    /// `n1` restricted to the plane orthogonal to `⟨S⟩`, chosen to minimise
    /// the variance; the denominator is then `|⟨S⟩|²`.
    #[default]
    PerpOptimal,
    /// `n1` searched over the whole sphere, minimising the full quotient.
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiResult {
    /// May be `f64::INFINITY` when the denominator vanishes in a fixed frame.
    pub value: f64,
    pub frame: SpinFrame,
    pub entangled: bool,
}

impl XiResult {
    fn new(value: f64, frame: SpinFrame) -> Self {
        Self {
            value,
            frame,
            entangled: value < 1.0,
        }
    }
}

/// The squeezing quotient in a fixed frame. Returns `f64::INFINITY` when the
/// mean-spin projections onto `n2`, `n3` both vanish.
pub fn xi2_in_frame(m: &SpinMoments, frame: &SpinFrame) -> f64 {
    let num = N_ATOMS * m.variance(&frame.n1);
    let den = dot(&m.mean, &frame.n2).powi(2) + dot(&m.mean, &frame.n3).powi(2);
    if den.sqrt() <= MEAN_SPIN_TOL {
        return f64::INFINITY;
    }
    num / den
}

/// Squeezing parameter of `rho` in the fixed `(x̂, ŷ, ẑ)` frame; infinite when
/// `⟨Sy⟩` and `⟨Sz⟩` both vanish.
pub fn xi2_fixed_frame(rho: &DensityMatrix) -> Result<f64> {
    Ok(xi2_in_frame(&spin_moments(rho)?, &SpinFrame::standard()))
}

/// Squeezing parameter with the frame chosen by `policy`.
pub fn xi_squared(rho: &DensityMatrix, policy: FramePolicy) -> Result<XiResult> {
    let m = spin_moments(rho)?;
    xi_squared_from_moments(&m, policy)
}

pub fn xi_squared_from_moments(m: &SpinMoments, policy: FramePolicy) -> Result<XiResult> {
    let len = m.mean_norm();
    if len <= MEAN_SPIN_TOL {
        return Err(Error::ZeroMeanSpin(len));
    }
    let perp = perp_optimal(m);
    match policy {
        FramePolicy::PerpOptimal => Ok(perp),
        FramePolicy::Global => Ok(global_search(m, perp)),
    }
}

fn perp_optimal(m: &SpinMoments) -> XiResult {
    let u = normalized(&m.mean);
    let e1 = any_orthogonal(&u);
    let e2 = cross(&u, &e1);
    let cov = m.covariance();
    let a = quad(&cov, &e1);
    let c = quad(&cov, &e2);
    let b = (0..3)
        .map(|i| (0..3).map(|j| e1[i] * cov[i][j] * e2[j]).sum::<f64>())
        .sum::<f64>();
    // The major axis of [[a, b], [b, c]] sits at angle φ; the minor one at φ + π/2.
    let phi = 0.5 * (2.0 * b).atan2(a - c) + 0.5 * PI;
    let n1 = normalized(&[
        phi.cos() * e1[0] + phi.sin() * e2[0],
        phi.cos() * e1[1] + phi.sin() * e2[1],
        phi.cos() * e1[2] + phi.sin() * e2[2],
    ]);
    let frame = SpinFrame {
        n1,
        n2: u,
        n3: normalized(&cross(&n1, &u)),
    };
    let value = N_ATOMS * quad(&cov, &n1) / dot(&m.mean, &m.mean);
    XiResult::new(value, frame)
}

/// `N·Var(S_n) / (|⟨S⟩|² − ⟨S_n⟩²)`: the quotient for the triad completed
/// from `n1 = n`, independent of how `n2, n3` are chosen.
///
/// The variance uses the precomputed covariance and the denominator is
/// `|n × ⟨S⟩|²`, so neither side cancels catastrophically as `n` approaches
/// the mean-spin axis.
struct SphereObjective {
    cov: [[f64; 3]; 3],
    mean: Vec3,
}

impl SphereObjective {
    fn new(m: &SpinMoments) -> Self {
        Self {
            cov: m.covariance(),
            mean: m.mean,
        }
    }

    fn eval(&self, n: &Vec3) -> f64 {
        let den = dot(&cross(n, &self.mean), &cross(n, &self.mean));
        if den <= 0.0 {
            return f64::INFINITY;
        }
        N_ATOMS * quad(&self.cov, n) / den
    }
}

/// `k`-th of `count` points of a Fibonacci lattice on the unit sphere.
pub fn fibonacci_direction(k: usize, count: usize) -> Vec3 {
    let golden = PI * (3.0 - 5.0_f64.sqrt());
    let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
    let r = (1.0 - z * z).max(0.0).sqrt();
    let phi = golden * k as f64;
    [r * phi.cos(), r * phi.sin(), z]
}

/// Great-circle step from `n` toward tangent `t` by angle `a`.
fn along_circle(n: &Vec3, t: &Vec3, a: f64) -> Vec3 {
    let (s, c) = a.sin_cos();
    normalized(&[
        c * n[0] + s * t[0],
        c * n[1] + s * t[1],
        c * n[2] + s * t[2],
    ])
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-13 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn global_search(m: &SpinMoments, perp: XiResult) -> XiResult {
    let objective = SphereObjective::new(m);
    let mut best = perp.frame.n1;
    let mut best_val = perp.value;
    for k in 0..SPHERE_GRID {
        let n = fibonacci_direction(k, SPHERE_GRID);
        let v = objective.eval(&n);
        if v < best_val {
            best_val = v;
            best = n;
        }
    }

    // Local coordinate descent along two orthogonal great circles through
    // the current best point; the bracket shrinks each pass.
    let mut half_width = 2.0 * (4.0 * PI / SPHERE_GRID as f64).sqrt();
    for _ in 0..REFINE_PASSES {
        let t1 = any_orthogonal(&best);
        let t2 = cross(&best, &t1);
        for t in [t1, t2] {
            let origin = best;
            let (a, v) = golden_section(
                |a| objective.eval(&along_circle(&origin, &t, a)),
                -half_width,
                half_width,
            );
            if v < best_val {
                best_val = v;
                best = along_circle(&origin, &t, a);
            }
        }
        half_width *= 0.5;
    }

    if best_val >= perp.value {
        return perp;
    }
    XiResult::new(best_val, SpinFrame::completing(&best, &m.mean))
}

/// `(1 + sin²θ)/cos⁴θ`: the squeezing parameter of the single-photon
/// trajectory at oscillation phase `θ`. Infinite where `cos θ` vanishes.
pub fn xi2_closed_n1(theta: f64) -> f64 {
    let c = theta.cos();
    if c.abs() <= 1e-12 {
        return f64::INFINITY;
    }
    let s = theta.sin();
    (1.0 + s * s) / (c * c * c * c)
}

/// Eigenvalues of the partial transpose over the second atom, ascending.
pub fn pt_spectrum(rho: &DensityMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eig(&partial_transpose(rho, 1)?)?.values)
}

pub fn min_pt_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    Ok(pt_spectrum(rho)?[0])
}

/// Sum of the magnitudes of the negative partial-transpose eigenvalues.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    Ok(pt_spectrum(rho)?.iter().map(|&mu| (-mu).max(0.0)).sum())
}

/// Peres–Horodecki test; necessary and sufficient for two qubits.
pub fn ppt_entangled(rho: &DensityMatrix) -> Result<bool> {
    Ok(min_pt_eigenvalue(rho)? < -PPT_TOL)
}

/// Closed-form PPT verdict for the diagonal family. Its partial transpose
/// contains the block `[[X₁, X₂/2], [X₂/2, X₃]]` on `{ee, gg}`, which has a
/// negative eigenvalue exactly when `X₂ > 2√(X₁X₃)`.
pub fn diagonal_family_entangled(c: &FamilyCoeffs) -> Result<bool> {
    if c.y != Complex64::new(0.0, 0.0) {
        return Err(Error::NonDiagonal(format!("{}", c.y)));
    }
    Ok(c.x2 > 2.0 * (c.x1 * c.x3).sqrt())
}

fn real_coherence(c: &FamilyCoeffs) -> Result<f64> {
    if c.y.im != 0.0 {
        return Err(Error::NonReal(c.y.im));
    }
    Ok(c.y.re)
}

/// `(2Y + 2 − ⟨Sz²⟩)/⟨Sz⟩²` for real `Y`: the squeezing parameter of the
/// family state in the fixed `(x̂, ŷ, ẑ)` frame.
pub fn xi2_family(c: &FamilyCoeffs) -> Result<f64> {
    let y = real_coherence(c)?;
    let c = FamilyCoeffs::new(c.x1, c.x2, c.x3, c.y)?;
    let sz = c.mean_sz();
    if sz.abs() <= MEAN_SPIN_TOL {
        return Err(Error::ZeroMeanSpin(sz.abs()));
    }
    Ok((2.0 * y + 2.0 - c.mean_sz_sq()) / (sz * sz))
}

/// `⟨Sz²⟩ + ⟨Sz⟩² > 2 + 2Y`, the family's squeezing condition.
pub fn family_squeezing_condition(c: &FamilyCoeffs) -> Result<bool> {
    let y = real_coherence(c)?;
    let c = FamilyCoeffs::new(c.x1, c.x2, c.x3, c.y)?;
    let sz = c.mean_sz();
    Ok(c.mean_sz_sq() + sz * sz > 2.0 + 2.0 * y)
}

/// Everything the diagnostics say about one family state.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub coeffs: FamilyCoeffs,
    pub xi2_family: Result<f64>,
    pub squeezing_condition: bool,
    pub xi2_optimized: Result<XiResult>,
    pub negativity: f64,
    pub ppt_entangled: bool,
}

pub fn family_report(c: &FamilyCoeffs, policy: FramePolicy) -> Result<FamilyReport> {
    let rho = family_density(c)?;
    Ok(FamilyReport {
        coeffs: *c,
        xi2_family: xi2_family(c),
        squeezing_condition: family_squeezing_condition(c)?,
        xi2_optimized: xi_squared(&rho, policy),
        negativity: negativity(&rho)?,
        ppt_entangled: ppt_entangled(&rho)?,
    })
}

//! Density matrices over labelled tensor factors, partial trace and partial
//! transpose, and the symmetric two-atom state family.
//!
//! Single-atom basis order is `|e⟩, |g⟩`; atom 1 is the left tensor factor, so
//! the two-atom computational order is `ee, eg, ge, gg`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Range;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, HERMITIAN_TOL};
use crate::numfmt::sig;

/// Trace must equal one within this.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted for a positive semidefinite state.
pub const PSD_TOL: f64 = 1e-10;
/// Tolerance on the unit norm of pure states.
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance on the coefficient constraints of [`FamilyCoeffs`].
pub const COEFF_TOL: f64 = 1e-12;

/// Computational-basis indices for two atoms.
pub const EE: usize = 0;
pub const EG: usize = 1;
pub const GE: usize = 2;
pub const GG: usize = 3;

const TWO_ATOMS: [usize; 2] = [2, 2];

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(mat.dim(), &dims)?;
        let defect = mat.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = mat.trace();
        if (tr - 1.0).norm() > TRACE_TOL {
            return Err(Error::NotUnitTrace(tr.re));
        }
        let min = hermitian_eig(&mat)?.min_value();
        if min < -PSD_TOL {
            return Err(Error::NotPositive(format!(
                "minimum eigenvalue = {}",
                sig(min)
            )));
        }
        Ok(Self { mat, dims })
    }

    /// Skips validation; for results that are valid by construction.
    pub(crate) fn new_unchecked(mat: ComplexMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(mat.dim(), dims.iter().product::<usize>());
        Self { mat, dims }
    }

    /// The two-atom maximally mixed state `I₄/4`.
    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        let mat = ComplexMatrix::identity(d).scale(Complex64::new(1.0 / d as f64, 0.0));
        Self::new_unchecked(mat, dims)
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// `tr(ρ·op)`.
    pub fn expect(&self, op: &ComplexMatrix) -> Complex64 {
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.mat[(i, j)] * op[(j, i)];
            }
        }
        acc
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.expect(&self.mat).re
    }

    pub fn is_two_qubit(&self) -> bool {
        self.dims == TWO_ATOMS
    }
}

fn check_dims(dim: usize, dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions {dims:?} must be a non-empty list of positive integers"
        )));
    }
    let prod: usize = dims.iter().product();
    if prod != dim {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions {dims:?} multiply to {prod}, matrix has dimension {dim}"
        )));
    }
    Ok(())
}

/// `|ψ⟩⟨ψ|` for a unit vector `psi`.
pub fn density_from_pure(psi: &[Complex64], dims: Vec<usize>) -> Result<DensityMatrix> {
    check_dims(psi.len(), &dims)?;
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    Ok(DensityMatrix::new_unchecked(ComplexMatrix::outer(psi), dims))
}

/// Traces out every factor outside `keep`, a contiguous range of factor
/// indices.
pub fn partial_trace(rho: &DensityMatrix, keep: Range<usize>) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if dims.len() < 2 {
        return Err(Error::BadSubsystem(
            "partial trace needs at least two tensor factors".into(),
        ));
    }
    if keep.is_empty() || keep.end > dims.len() {
        return Err(Error::BadSubsystem(format!(
            "cannot keep factors {keep:?} of {} factors",
            dims.len()
        )));
    }
    let left: usize = dims[..keep.start].iter().product();
    let mid: usize = dims[keep.clone()].iter().product();
    let right: usize = dims[keep.end..].iter().product();
    let stride = mid * right;
    let m = rho.mat();
    let out = ComplexMatrix::from_fn(mid, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..left {
            for r in 0..right {
                acc += m[(l * stride + i * right + r, l * stride + j * right + r)];
            }
        }
        acc
    });
    Ok(DensityMatrix::new_unchecked(out, dims[keep].to_vec()))
}

/// Partial transpose of a bipartite operator over factor `sub` (0 or 1).
/// A pure index permutation, so applying it twice is exactly the identity.
pub fn partial_transpose_raw(m: &ComplexMatrix, dims: [usize; 2], sub: usize) -> Result<ComplexMatrix> {
    check_dims(m.dim(), &dims)?;
    if sub > 1 {
        return Err(Error::BadSubsystem(format!(
            "subsystem {sub} out of range for a bipartition"
        )));
    }
    let [_, db] = dims;
    Ok(ComplexMatrix::from_fn(m.dim(), |r, c| {
        let (i, k) = (r / db, r % db);
        let (j, l) = (c / db, c % db);
        if sub == 0 {
            m[(j * db + k, i * db + l)]
        } else {
            m[(i * db + l, j * db + k)]
        }
    }))
}

pub fn partial_transpose(rho: &DensityMatrix, sub: usize) -> Result<ComplexMatrix> {
    let dims: [usize; 2] = rho.dims().try_into().map_err(|_| {
        Error::BadSubsystem(format!(
            "partial transpose needs exactly two factors, state has dims {:?}",
            rho.dims()
        ))
    })?;
    partial_transpose_raw(rho.mat(), dims, sub)
}

/// Coefficients of `X₁|1⟩⟨1| + X₂|2⟩⟨2| + X₃|3⟩⟨3| + Y|1⟩⟨3| + Y*|3⟩⟨1|`
/// with `|1⟩ = |ee⟩`, `|2⟩ = (|eg⟩+|ge⟩)/√2`, `|3⟩ = |gg⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyCoeffs {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub y: Complex64,
}

impl FamilyCoeffs {
    /// Validates populations in `[0, 1]`, unit sum, and `|y| ≤ √(x1·x3)`.
    pub fn new(x1: f64, x2: f64, x3: f64, y: Complex64) -> Result<Self> {
        for (name, x) in [("x1", x1), ("x2", x2), ("x3", x3)] {
            if !x.is_finite() || !(-COEFF_TOL..=1.0 + COEFF_TOL).contains(&x) {
                return Err(Error::InvalidCoefficients(format!(
                    "{name} = {} outside [0, 1]",
                    sig(x)
                )));
            }
        }
        let sum = x1 + x2 + x3;
        if (sum - 1.0).abs() > COEFF_TOL {
            return Err(Error::InvalidCoefficients(format!(
                "x1 + x2 + x3 = {} != 1",
                sig(sum)
            )));
        }
        if !(y.re.is_finite() && y.im.is_finite()) {
            return Err(Error::InvalidCoefficients("y is not finite".into()));
        }
        let bound = (x1.max(0.0) * x3.max(0.0)).sqrt();
        if y.norm() > bound + COEFF_TOL {
            return Err(Error::NotPositive(format!(
                "|Y| = {} exceeds sqrt(X1*X3) = {}; the bound |Y| <= sqrt(X1*X3) is violated",
                sig(y.norm()),
                sig(bound)
            )));
        }
        Ok(Self { x1, x2, x3, y })
    }

    pub fn diagonal(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        Self::new(x1, x2, x3, Complex64::new(0.0, 0.0))
    }

    /// `⟨S_z⟩ = X₁ − X₃`.
    pub fn mean_sz(&self) -> f64 {
        self.x1 - self.x3
    }

    /// `⟨S_z²⟩ = X₁ + X₃`.
    pub fn mean_sz_sq(&self) -> f64 {
        self.x1 + self.x3
    }
}

/// Builds the family state directly in the computational basis.
pub fn family_density(c: &FamilyCoeffs) -> Result<DensityMatrix> {
    let c = FamilyCoeffs::new(c.x1, c.x2, c.x3, c.y)?;
    let mut m = ComplexMatrix::zeros(4);
    let half = Complex64::new(0.5 * c.x2, 0.0);
    m[(EE, EE)] = c.x1.into();
    m[(EG, EG)] = half;
    m[(EG, GE)] = half;
    m[(GE, EG)] = half;
    m[(GE, GE)] = half;
    m[(GG, GG)] = c.x3.into();
    m[(EE, GG)] = c.y;
    m[(GG, EE)] = c.y.conj();
    DensityMatrix::new(m, TWO_ATOMS.to_vec())
}

/// States of the symmetric/antisymmetric two-atom basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DickeState {
    /// `|ee⟩`
    One,
    /// `(|eg⟩ + |ge⟩)/√2`
    Two,
    /// `|gg⟩`
    Three,
    /// `(|eg⟩ − |ge⟩)/√2`
    Anti,
}

impl DickeState {
    pub const ALL: [DickeState; 4] = [Self::One, Self::Two, Self::Three, Self::Anti];

    fn column(self) -> usize {
        match self {
            Self::One => 0,
            Self::Two => 1,
            Self::Three => 2,
            Self::Anti => 3,
        }
    }

    pub fn ket(self) -> [Complex64; 4] {
        let u = BasisMap::new();
        let c = self.column();
        [u.u[(0, c)], u.u[(1, c)], u.u[(2, c)], u.u[(3, c)]]
    }
}

/// Unitary whose columns are `|1⟩, |2⟩, |3⟩, |a⟩` in computational
/// coordinates.
#[derive(Debug, Clone)]
pub struct BasisMap {
    u: ComplexMatrix,
}

impl Default for BasisMap {
    fn default() -> Self {
        Self::new()
    }
}

impl BasisMap {
    pub fn new() -> Self {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let mut u = ComplexMatrix::zeros(4);
        u[(EE, 0)] = one;
        u[(EG, 1)] = s;
        u[(GE, 1)] = s;
        u[(GG, 2)] = one;
        u[(EG, 3)] = s;
        u[(GE, 3)] = -s;
        Self { u }
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.u
    }

    /// `U†·m·U`: matrix elements in the Dicke basis.
    pub fn to_dicke(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.u.adjoint() * m) * &self.u
    }

    /// `U·m·U†`: back to computational coordinates.
    pub fn from_dicke(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.u * m) * &self.u.adjoint()
    }

    /// Diagonal of `ρ` in the Dicke basis, indexed as [`DickeState::ALL`].
    pub fn populations(&self, rho: &DensityMatrix) -> [f64; 4] {
        let p = self.to_dicke(rho.mat());
        DickeState::ALL.map(|s| p[(s.column(), s.column())].re)
    }

    /// Reads `(X₁, X₂, X₃, Y)` back from a two-atom state, without checking
    /// that the other Dicke-basis elements vanish.
    pub fn read_family(&self, rho: &DensityMatrix) -> FamilyCoeffs {
        let p = self.to_dicke(rho.mat());
        FamilyCoeffs {
            x1: p[(0, 0)].re,
            x2: p[(1, 1)].re,
            x3: p[(2, 2)].re,
            y: p[(0, 2)],
        }
    }

    /// Largest modulus of a Dicke-basis off-diagonal element other than the
    /// `|1⟩⟨3|` coherence pair.
    pub fn off_family_residual(&self, rho: &DensityMatrix) -> f64 {
        let p = self.to_dicke(rho.mat());
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                let coherence = (i, j) == (0, 2) || (i, j) == (2, 0);
                if i != j && !coherence {
                    worst = worst.max(p[(i, j)].norm());
                }
            }
        }
        worst
    }
}

/// On-disk density matrix: `{"dims": [2, 2], "rows": [[[re, im], ...], ...]}`,
/// row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub rows: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_matrix(m: &ComplexMatrix, dims: Vec<usize>) -> Self {
        let n = m.dim();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self { dims, rows }
    }

    /// Checks the shape against `dims` and assembles the matrix. Does not
    /// validate the state itself.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::DimensionMismatch(format!(
                "dims {:?} must be a non-empty list of positive integers",
                self.dims
            )));
        }
        let dim: usize = self.dims.iter().product();
        if self.rows.len() != dim || self.rows.iter().any(|r| r.len() != dim) {
            let count: usize = self.rows.iter().map(Vec::len).sum();
            return Err(Error::DimensionMismatch(format!(
                "dims {:?} need {dim} rows of {dim} entries ({} total), found {} rows with {count} entries",
                self.dims,
                dim * dim,
                self.rows.len()
            )));
        }
        ComplexMatrix::from_row_major(
            self.rows
                .iter()
                .flatten()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

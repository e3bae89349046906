//! Two atoms resonantly coupled to one cavity mode, starting from
//! `|g₁,g₂⟩⊗|n⟩`.
//!
//! Time is measured as the dimensionless product `gt` (coupling `g = 1`). The
//! Hamiltonian conserves `Σᵢ|eᵢ⟩⟨eᵢ| + a†a`, so a field cutoff of `n + 1`
//! levels (occupations `0..=n`) reproduces the untruncated dynamics exactly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, kron_vec, ComplexMatrix, EigenDecomposition};
use crate::qstate::{density_from_pure, partial_trace, DensityMatrix, FamilyCoeffs, GG};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConfig {
    pub n_photons: u32,
    pub gt: f64,
    pub field_cutoff: usize,
}

impl ModelConfig {
    /// Uses the smallest exact cutoff, `n_photons + 1`.
    pub fn new(n_photons: u32, gt: f64) -> Result<Self> {
        Self::with_cutoff(n_photons, gt, n_photons as usize + 1)
    }

    pub fn with_cutoff(n_photons: u32, gt: f64, field_cutoff: usize) -> Result<Self> {
        let cfg = Self {
            n_photons,
            gt,
            field_cutoff,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gt.is_finite() && self.gt >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "gt must be finite and non-negative, got {}",
                self.gt
            )));
        }
        if self.field_cutoff < self.n_photons as usize + 1 {
            return Err(Error::InvalidConfig(format!(
                "field cutoff {} cannot hold the initial Fock state |{}>",
                self.field_cutoff, self.n_photons
            )));
        }
        Ok(())
    }

    /// Dimension of atom ⊗ atom ⊗ field.
    pub fn hilbert_dim(&self) -> usize {
        4 * self.field_cutoff
    }
}

/// Collective Rabi frequency `λ = √(2(2n−1))` in units of `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiFrequency(f64);

impl RabiFrequency {
    pub fn for_photons(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadPhotonNumber(n));
        }
        Ok(Self((2.0 * (2.0 * n as f64 - 1.0)).sqrt()))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Oscillation phase `λ·t` at dimensionless time `gt`.
    pub fn phase(self, gt: f64) -> f64 {
        self.0 * gt
    }
}

fn atom_raising() -> ComplexMatrix {
    // |e⟩⟨g| with e first
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 1)] = Complex64::new(1.0, 0.0);
    m
}

/// Truncated annihilation operator, `a|k⟩ = √k|k−1⟩` for `k < cutoff`.
pub fn annihilation(cutoff: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(cutoff);
    for k in 1..cutoff {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    a
}

/// `H = Σᵢ (Sᵢ⁺a + Sᵢ⁻a†)` on atom 1 ⊗ atom 2 ⊗ field, with `g = 1`.
pub fn build_hamiltonian(cfg: &ModelConfig) -> ComplexMatrix {
    let id2 = ComplexMatrix::identity(2);
    let sp = atom_raising();
    let sm = sp.adjoint();
    let a = annihilation(cfg.field_cutoff);
    let ad = a.adjoint();

    let sp1 = kron(&sp, &id2);
    let sm1 = kron(&sm, &id2);
    let sp2 = kron(&id2, &sp);
    let sm2 = kron(&id2, &sm);

    let terms = [
        kron(&sp1, &a),
        kron(&sm1, &ad),
        kron(&sp2, &a),
        kron(&sm2, &ad),
    ];
    terms[1..]
        .iter()
        .fold(terms[0].clone(), |acc, t| &acc + t)
}

/// `Σᵢ|eᵢ⟩⟨eᵢ| + a†a`.
pub fn excitation_number(cutoff: usize) -> ComplexMatrix {
    let atoms = ComplexMatrix::from_real_diag(&[2.0, 1.0, 1.0, 0.0]);
    let photons =
        ComplexMatrix::from_real_diag(&(0..cutoff).map(|k| k as f64).collect::<Vec<_>>());
    &kron(&atoms, &ComplexMatrix::identity(cutoff)) + &kron(&ComplexMatrix::identity(4), &photons)
}

/// `|g₁,g₂⟩⊗|n⟩`.
pub fn initial_state(cfg: &ModelConfig) -> Vec<Complex64> {
    let mut atoms = vec![Complex64::new(0.0, 0.0); 4];
    atoms[GG] = Complex64::new(1.0, 0.0);
    let mut field = vec![Complex64::new(0.0, 0.0); cfg.field_cutoff];
    field[cfg.n_photons as usize] = Complex64::new(1.0, 0.0);
    kron_vec(&atoms, &field)
}

/// Exact propagator for one model: diagonalises `H` once, then evolves the
/// initial state to any time as `V·e^{−iΛt}·V†·ψ₀`.
#[derive(Debug, Clone)]
pub struct Evolver {
    cfg: ModelConfig,
    eig: EigenDecomposition,
    /// `V†·ψ₀`
    overlaps: Vec<Complex64>,
}

impl Evolver {
    pub fn new(cfg: &ModelConfig) -> Result<Self> {
        cfg.validate()?;
        let eig = hermitian_eig(&build_hamiltonian(cfg))?;
        let psi0 = initial_state(cfg);
        let overlaps = eig.vectors.adjoint().mul_vec(&psi0);
        Ok(Self {
            cfg: *cfg,
            eig,
            overlaps,
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.cfg
    }

    /// Joint atoms+field state vector at time `gt`.
    pub fn state_at(&self, gt: f64) -> Vec<Complex64> {
        let phased: Vec<Complex64> = self
            .eig
            .values
            .iter()
            .zip(&self.overlaps)
            .map(|(&w, &c)| c * Complex64::from_polar(1.0, -w * gt))
            .collect();
        self.eig.vectors.mul_vec(&phased)
    }

    pub fn joint_density(&self, gt: f64) -> Result<DensityMatrix> {
        density_from_pure(&self.state_at(gt), vec![2, 2, self.cfg.field_cutoff])
    }

    /// Two-atom reduced state at time `gt`, validated.
    pub fn atomic_state(&self, gt: f64) -> Result<DensityMatrix> {
        let reduced = partial_trace(&self.joint_density(gt)?, 0..2)?;
        DensityMatrix::new(reduced.mat().clone(), reduced.dims().to_vec())
    }
}

/// Reduced atomic state after evolving `|g,g⟩⊗|n⟩` for `cfg.gt`, computed by
/// exact diagonalisation of the Hamiltonian.
pub fn evolve_exact(cfg: &ModelConfig) -> Result<DensityMatrix> {
    Evolver::new(cfg)?.atomic_state(cfg.gt)
}

/// Closed-form populations of `|ee⟩`, the symmetric Dicke state and `|gg⟩`
/// for `n ≥ 1` photons, with phase `λt = √(2(2n−1))·gt`.
pub fn closed_form_coeffs(n: u32, gt: f64) -> Result<FamilyCoeffs> {
    let lambda = RabiFrequency::for_photons(n)?;
    let c = lambda.phase(gt).cos();
    let s = lambda.phase(gt).sin();
    let n = n as f64;
    let d = 2.0 * n - 1.0;
    let x1 = n * (n - 1.0) * (c * c - 2.0 * c + 1.0) / (d * d);
    let x2 = n * s * s / d;
    let x3 = (n * n * c * c + 2.0 * n * (n - 1.0) * c + (n - 1.0) * (n - 1.0)) / (d * d);
    FamilyCoeffs::diagonal(x1, x2, x3)
}

/// Like [`closed_form_coeffs`], but an empty cavity (`n = 0`) leaves the
/// atoms in `|gg⟩` forever.
pub fn atomic_coeffs(n: u32, gt: f64) -> Result<FamilyCoeffs> {
    if n == 0 {
        return FamilyCoeffs::diagonal(0.0, 0.0, 1.0);
    }
    closed_form_coeffs(n, gt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{BasisMap, DickeState, EG};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn lambda(n: u32) -> f64 {
        RabiFrequency::for_photons(n).unwrap().value()
    }

    #[test]
    fn vacuum_only_hamiltonian_vanishes() {
        let cfg = ModelConfig::with_cutoff(0, 0.0, 1).unwrap();
        let h = build_hamiltonian(&cfg);
        assert_eq!(h.dim(), 4);
        assert_eq!(h, ComplexMatrix::zeros(4));
    }

    #[test]
    fn single_matrix_element() {
        let cfg = ModelConfig::new(1, 0.0).unwrap();
        let h = build_hamiltonian(&cfg);
        // index = atoms·cutoff + k
        let eg0 = EG * 2;
        let gg1 = GG * 2 + 1;
        assert_eq!(h[(eg0, gg1)], Complex64::new(1.0, 0.0));
        assert_eq!(h.hermiticity_defect(), 0.0);
    }

    #[test]
    fn hamiltonian_conserves_excitations() {
        for n in [1, 2, 4] {
            let cfg = ModelConfig::with_cutoff(n, 0.0, n as usize + 3).unwrap();
            let h = build_hamiltonian(&cfg);
            let nexc = excitation_number(cfg.field_cutoff);
            assert!(h.commutator(&nexc).max_abs_diff(&ComplexMatrix::zeros(h.dim())) < 1e-12);
        }
    }

    #[test]
    fn cutoff_must_hold_initial_state() {
        assert!(ModelConfig::with_cutoff(3, 0.0, 3).is_err());
        assert!(ModelConfig::new(1, -0.1).is_err());
        assert!(ModelConfig::new(1, f64::NAN).is_err());
    }

    #[test]
    fn no_evolution_at_time_zero() {
        let map = BasisMap::new();
        for n in 0..4 {
            let rho = evolve_exact(&ModelConfig::new(n, 0.0).unwrap()).unwrap();
            let p = map.populations(&rho);
            assert!((p[2] - 1.0).abs() < 1e-12);
            assert!(p[0].abs() < 1e-12 && p[1].abs() < 1e-12);
        }
    }

    #[test]
    fn single_photon_rabi_transfer() {
        // λt = π/2 with λ = √2
        let gt = FRAC_PI_2 / lambda(1);
        let rho = evolve_exact(&ModelConfig::new(1, gt).unwrap()).unwrap();
        let dicke = density_from_pure(&DickeState::Two.ket(), vec![2, 2]).unwrap();
        assert!(rho.mat().max_abs_diff(dicke.mat()) < 1e-12);
    }

    #[test]
    fn closed_form_special_points() {
        let c = closed_form_coeffs(1, 0.0).unwrap();
        assert_eq!((c.x1, c.x2, c.x3), (0.0, 0.0, 1.0));

        let c = closed_form_coeffs(1, FRAC_PI_2 / lambda(1)).unwrap();
        assert!(c.x1.abs() < 1e-15 && (c.x2 - 1.0).abs() < 1e-15 && c.x3.abs() < 1e-15);

        let c = closed_form_coeffs(2, PI / lambda(2)).unwrap();
        assert!((c.x1 - 8.0 / 9.0).abs() < 1e-15);
        assert!(c.x2.abs() < 1e-15);
        assert!((c.x3 - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_rejects_empty_cavity() {
        assert_eq!(closed_form_coeffs(0, 1.0), Err(Error::BadPhotonNumber(0)));
        let c = atomic_coeffs(0, 1.0).unwrap();
        assert_eq!((c.x1, c.x2, c.x3), (0.0, 0.0, 1.0));
    }

    #[test]
    fn two_photon_pi_phase_matches_oracle() {
        let gt = PI / lambda(2);
        let rho = evolve_exact(&ModelConfig::new(2, gt).unwrap()).unwrap();
        let p = BasisMap::new().populations(&rho);
        assert!((p[0] - 8.0 / 9.0).abs() < 1e-10);
        assert!(p[1].abs() < 1e-10);
        assert!((p[2] - 1.0 / 9.0).abs() < 1e-10);
    }

    #[test]
    fn larger_cutoff_changes_nothing() {
        let small = evolve_exact(&ModelConfig::new(2, 0.8).unwrap()).unwrap();
        let big = evolve_exact(&ModelConfig::with_cutoff(2, 0.8, 6).unwrap()).unwrap();
        assert!(small.mat().max_abs_diff(big.mat()) < 1e-10);
    }
}

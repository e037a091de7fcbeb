//! Two-qubit state tomography from the nine local Pauli bases.
//!
//! Each arm measures in the σx, σy or σz eigenbasis. σz and σx are linear
//! analyzers at 0 and π/4; σy is a circular-polarization analyzer modelled
//! directly by its projectors `(I ± σy)/2`. Reconstruction is linear
//! inversion in the Pauli basis followed by eigenvalue clipping.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::counting::{analyzer_projectors, check_probs, child_seed, joint_probs, sample_counts, Shots};
use crate::error::{Error, Result};
use crate::exec;
use crate::state::{
    colored_state, fidelity, hermitian_eigen, hermiticity_defect, identity2, pauli, tensor, Axis,
    DensityMatrix, Op2, Op4, C64,
};

/// Two-outcome projectors `(P+, P−)` for a local Pauli basis.
pub fn basis_projectors(axis: Axis) -> (Op2, Op2) {
    match axis {
        Axis::Z => analyzer_projectors(0.0),
        Axis::X => analyzer_projectors(std::f64::consts::FRAC_PI_4),
        Axis::Y => {
            let half = C64::new(0.5, 0.0);
            let y = pauli(Axis::Y);
            ((identity2() + y) * half, (identity2() - y) * half)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomoSettings {
    /// `(arm 1, arm 2)` bases, `Axis::ALL × Axis::ALL` in row-major order.
    pub basis_pairs: Vec<(Axis, Axis)>,
}

impl TomoSettings {
    /// Measurement map from the 16 real Pauli coefficients `c_ij` (index
    /// `4i + j`, `0` = identity, then x, y, z) to the 36 outcome probabilities.
    pub fn design_matrix(&self) -> DMatrix<f64> {
        let ops = [identity2(), pauli(Axis::X), pauli(Axis::Y), pauli(Axis::Z)];
        let rows: Vec<Op4> = self
            .basis_pairs
            .iter()
            .flat_map(|&(a, b)| {
                let (pa, pb) = (basis_projectors(a), basis_projectors(b));
                [
                    tensor(&pa.0, &pb.0),
                    tensor(&pa.0, &pb.1),
                    tensor(&pa.1, &pb.0),
                    tensor(&pa.1, &pb.1),
                ]
            })
            .collect();
        DMatrix::from_fn(rows.len(), 16, |r, k| {
            let basis = tensor(&ops[k / 4], &ops[k % 4]);
            0.25 * (basis * rows[r]).trace().re
        })
    }

    /// Numerical rank of [`Self::design_matrix`].
    pub fn rank(&self) -> usize {
        self.design_matrix().rank(1e-10)
    }
}

pub fn tomo_settings() -> TomoSettings {
    let basis_pairs = Axis::ALL
        .iter()
        .flat_map(|&a| Axis::ALL.iter().map(move |&b| (a, b)))
        .collect();
    TomoSettings { basis_pairs }
}

/// Outcome probabilities (or relative frequencies) for one basis pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisProbs {
    pub pair: (Axis, Axis),
    pub probs: [f64; 4],
}

/// Pauli-basis parameters of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliExpectations {
    /// `T_ij = ⟨σi ⊗ σj⟩`, `(x, y, z)` order.
    pub t: [[f64; 3]; 3],
    /// `⟨σi ⊗ I⟩`.
    pub local_a: [f64; 3],
    /// `⟨I ⊗ σj⟩`.
    pub local_b: [f64; 3],
}

impl PauliExpectations {
    /// 4×4 coefficient table `c_ij = ⟨σi ⊗ σj⟩`, index 0 = identity.
    pub fn coefficients(&self) -> [[f64; 4]; 4] {
        let mut c = [[0.0; 4]; 4];
        c[0][0] = 1.0;
        for i in 0..3 {
            c[i + 1][0] = self.local_a[i];
            c[0][i + 1] = self.local_b[i];
            for j in 0..3 {
                c[i + 1][j + 1] = self.t[i][j];
            }
        }
        c
    }
}

fn axis_index(a: Axis) -> usize {
    match a {
        Axis::X => 0,
        Axis::Y => 1,
        Axis::Z => 2,
    }
}

/// Correlations from the parity of each basis pair; local components are the
/// marginal contrasts averaged over the three partner bases.
pub fn expectations_from_probs(records: &[BasisProbs]) -> Result<PauliExpectations> {
    let mut seen = [[false; 3]; 3];
    let mut out = PauliExpectations { t: [[0.0; 3]; 3], local_a: [0.0; 3], local_b: [0.0; 3] };
    for r in records {
        check_probs(&r.probs)?;
        let (i, j) = (axis_index(r.pair.0), axis_index(r.pair.1));
        if seen[i][j] {
            return Err(Error::InvalidProbabilities(format!("duplicate basis pair {:?}", r.pair)));
        }
        seen[i][j] = true;
        let [pp, pm, mp, mm] = r.probs;
        out.t[i][j] = pp - pm - mp + mm;
        out.local_a[i] += (pp + pm - mp - mm) / 3.0;
        out.local_b[j] += (pp - pm + mp - mm) / 3.0;
    }
    if seen.iter().flatten().any(|s| !s) {
        return Err(Error::InvalidProbabilities("all nine basis pairs are required".into()));
    }
    Ok(out)
}

/// `ρ = ¼ Σ c_ij σi ⊗ σj`; Hermitian and unit-trace by construction.
pub fn linear_inversion(e: &PauliExpectations) -> Op4 {
    let ops = [identity2(), pauli(Axis::X), pauli(Axis::Y), pauli(Axis::Z)];
    let c = e.coefficients();
    let mut m = Op4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m += tensor(&ops[i], &ops[j]) * C64::new(0.25 * c[i][j], 0.0);
        }
    }
    m
}

pub const PROJECT_TOL: f64 = 1e-9;

/// Nearest-spectrum repair: negative eigenvalues are set to zero and the rest
/// rescaled to unit sum.
pub fn project_physical(raw: &Op4) -> Result<DensityMatrix> {
    let herm = hermiticity_defect(raw);
    if herm > PROJECT_TOL {
        return Err(Error::NonPhysical(format!("hermiticity defect {herm:.3e}")));
    }
    let tr = raw.trace();
    if (tr.re - 1.0).abs() > PROJECT_TOL || tr.im.abs() > PROJECT_TOL {
        return Err(Error::NonPhysical(format!("trace {tr} differs from 1")));
    }
    let (values, vectors) = hermitian_eigen(raw);
    let clipped = values.map(|v| v.max(0.0));
    let total = clipped.sum();
    if !(total > 0.0) {
        return Err(Error::NonPhysical("no positive eigenvalues".into()));
    }
    let scaled = clipped / total;
    let mut m = Op4::zeros();
    for k in 0..4 {
        if scaled[k] > 0.0 {
            let v = vectors.column(k);
            m += (v * v.adjoint()) * C64::new(scaled[k], 0.0);
        }
    }
    let m = (m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::new(m)
}

/// Colored-noise weight maximizing fidelity with `rho` on a 1001-point grid
/// over `[0, 1]`, with its fidelity. Ties go to the smaller `p`.
pub fn fit_colored_p(rho: &DensityMatrix) -> Result<(f64, f64)> {
    let fits = exec::map_range(1001, |k| {
        let p = k as f64 / 1000.0;
        colored_state(p).and_then(|c| fidelity(rho, &c)).map(|f| (p, f))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(fits
        .into_iter()
        .reduce(|best, x| if x.1 > best.1 { x } else { best })
        .expect("non-empty grid"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomoResult {
    pub rho_hat: DensityMatrix,
    /// Squared Uhlmann fidelity to the noise-free input state.
    pub fidelity: f64,
    pub fitted_p: f64,
    pub fidelity_to_fit: f64,
    pub purity: f64,
    /// Smallest eigenvalue of the linear-inversion estimate before repair.
    pub min_eig_raw: f64,
    /// Pauli coefficients `c_ij` of the raw estimate, index 0 = identity.
    pub coefficients: [[f64; 4]; 4],
    /// `None` in exact mode.
    pub shots: Option<u64>,
    pub seed: u64,
}

/// Simulated per-basis frequencies; basis `k` of [`tomo_settings`] samples
/// with `child_seed(seed, k)`.
pub fn simulate_bases(rho: &DensityMatrix, shots: Shots, seed: u64) -> Result<Vec<BasisProbs>> {
    let pairs = tomo_settings().basis_pairs;
    exec::map_range(pairs.len(), |k| {
        let pair = pairs[k];
        let exact = joint_probs(rho, &basis_projectors(pair.0), &basis_projectors(pair.1)).map(|p| p.max(0.0));
        let probs = match shots {
            Shots::Exact => exact,
            Shots::Finite(0) => return Err(Error::ZeroCounts),
            Shots::Finite(n) => {
                let c = sample_counts(exact, n, child_seed(seed, k as u64))?;
                c.counts().map(|x| x as f64 / n as f64)
            }
        };
        Ok(BasisProbs { pair, probs })
    })
    .into_iter()
    .collect()
}

/// Full pipeline: simulate, invert, repair, and score against `rho_true`.
pub fn reconstruct(rho_true: &DensityMatrix, shots: Shots, seed: u64) -> Result<TomoResult> {
    let bases = simulate_bases(rho_true, shots, seed)?;
    let e = expectations_from_probs(&bases)?;
    let raw = linear_inversion(&e);
    let (raw_values, _) = hermitian_eigen(&raw);
    let rho_hat = project_physical(&raw)?;
    let (fitted_p, fidelity_to_fit) = fit_colored_p(&rho_hat)?;
    Ok(TomoResult {
        fidelity: fidelity(&rho_hat, rho_true)?,
        fitted_p,
        fidelity_to_fit,
        purity: rho_hat.purity(),
        min_eig_raw: raw_values[0],
        coefficients: e.coefficients(),
        shots: shots.finite(),
        seed,
        rho_hat,
    })
}

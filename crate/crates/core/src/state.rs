//! Two-qubit polarization state algebra.
//!
//! Every 4×4 operator uses the product basis `(|oo⟩, |oe⟩, |eo⟩, |ee⟩)`, where
//! `o`/`e` are the ordinary and extraordinary polarization modes of the
//! down-conversion crystal. Arm 1 is the left tensor factor.

use std::fmt;

use nalgebra::{Complex, Matrix2, Matrix4, SymmetricEigen, Vector4};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};

pub type C64 = Complex<f64>;
/// Single-qubit operator.
pub type Op2 = Matrix2<C64>;
/// Two-qubit operator in the fixed `(oo, oe, eo, ee)` order.
pub type Op4 = Matrix4<C64>;

pub const BASIS_LABELS: [&str; 4] = ["oo", "oe", "eo", "ee"];

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

const fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

pub fn identity2() -> Op2 {
    Op2::identity()
}

pub fn pauli(axis: Axis) -> Op2 {
    let (z, o, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match axis {
        Axis::X => Op2::new(z, o, o, z),
        Axis::Y => Op2::new(z, -i, i, z),
        Axis::Z => Op2::new(o, z, z, -o),
    }
}

/// Kronecker product `a ⊗ b`; `a` acts on arm 1.
pub fn tensor(a: &Op2, b: &Op2) -> Op4 {
    Op4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// Largest entrywise modulus of `m − m†`.
pub fn hermiticity_defect(m: &Op4) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub(crate) fn hermitian_eigen(m: &Op4) -> (Vector4<f64>, Op4) {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = Vector4::from_fn(|k, _| eig.eigenvalues[order[k]]);
    let vectors = Op4::from_fn(|r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// Reassembles `Σ_k f(λ_k) |v_k⟩⟨v_k|`.
pub(crate) fn from_spectrum(values: &Vector4<f64>, vectors: &Op4) -> Op4 {
    let d = Op4::from_diagonal(&values.map(|v| c(v, 0.0)));
    vectors * d * vectors.adjoint()
}

/// Report produced by [`validate_state`]; never an error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateDiagnostics {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub purity: f64,
}

impl StateDiagnostics {
    pub fn is_physical(&self) -> bool {
        self.hermiticity_defect <= HERMITIAN_TOL
            && self.trace_defect <= TRACE_TOL
            && self.min_eigenvalue >= -PSD_TOL
    }
}

pub fn validate_state(m: &Op4) -> StateDiagnostics {
    let trace = m.trace();
    let trace_defect = ((trace.re - 1.0).powi(2) + trace.im.powi(2)).sqrt();
    let (values, _) = hermitian_eigen(m);
    StateDiagnostics {
        hermiticity_defect: hermiticity_defect(m),
        trace_defect,
        min_eigenvalue: values[0],
        purity: (m * m).trace().re,
    }
}

/// A validated two-qubit density matrix.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix {
    m: Op4,
}

impl DensityMatrix {
    /// Validates `m` against the Hermitian, unit-trace and PSD tolerances.
    pub fn new(m: Op4) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonPhysical("matrix has non-finite entries".into()));
        }
        let d = validate_state(&m);
        if d.hermiticity_defect > HERMITIAN_TOL {
            return Err(Error::NonPhysical(format!(
                "hermiticity defect {:.3e}",
                d.hermiticity_defect
            )));
        }
        if d.trace_defect > TRACE_TOL {
            return Err(Error::NonPhysical(format!("trace defect {:.3e}", d.trace_defect)));
        }
        if d.min_eigenvalue < -PSD_TOL {
            return Err(Error::NonPhysical(format!(
                "minimum eigenvalue {:.3e}",
                d.min_eigenvalue
            )));
        }
        Ok(Self { m })
    }

    /// Builds from a real symmetric matrix given row-major.
    pub fn from_real(rows: [[f64; 4]; 4]) -> Result<Self> {
        Self::new(Op4::from_fn(|r, col| c(rows[r][col], 0.0)))
    }

    /// Convex mixture `Σ w_k ρ_k`; weights must be non-negative and sum to 1.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| !(*w >= 0.0)) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("mixture weights sum to {total}")));
        }
        let m = parts
            .iter()
            .fold(Op4::zeros(), |acc, (w, rho)| acc + rho.m * c(*w, 0.0));
        Self::new(m)
    }

    pub fn matrix(&self) -> &Op4 {
        &self.m
    }

    pub fn into_matrix(self) -> Op4 {
        self.m
    }

    pub fn purity(&self) -> f64 {
        (self.m * self.m).trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let (v, _) = hermitian_eigen(&self.m);
        [v[0], v[1], v[2], v[3]]
    }

    pub fn diagnostics(&self) -> StateDiagnostics {
        validate_state(&self.m)
    }

    /// `tr(ρ · op)`, real part (`op` is expected Hermitian).
    pub fn expect(&self, op: &Op4) -> f64 {
        (self.m * op).trace().re
    }

    /// Pauli correlation matrix `T_ij = tr(ρ σ_i ⊗ σ_j)` with `(x, y, z)` order.
    pub fn correlation_matrix(&self) -> [[f64; 3]; 3] {
        let mut t = [[0.0; 3]; 3];
        for (i, a) in Axis::ALL.iter().enumerate() {
            for (j, b) in Axis::ALL.iter().enumerate() {
                t[i][j] = self.expect(&tensor(&pauli(*a), &pauli(*b)));
            }
        }
        t
    }

    /// Local Bloch vectors `(tr(ρ σ_i ⊗ I), tr(ρ I ⊗ σ_i))`.
    pub fn bloch_vectors(&self) -> ([f64; 3], [f64; 3]) {
        let mut a = [0.0; 3];
        let mut b = [0.0; 3];
        for (i, ax) in Axis::ALL.iter().enumerate() {
            a[i] = self.expect(&tensor(&pauli(*ax), &identity2()));
            b[i] = self.expect(&tensor(&identity2(), &pauli(*ax)));
        }
        (a, b)
    }

    /// Largest entrywise modulus of the difference.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        (self.m - other.m).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DensityMatrix [{}]", BASIS_LABELS.join(", "))?;
        for r in 0..4 {
            let row: Vec<String> = (0..4)
                .map(|col| {
                    let z = self.m[(r, col)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join("  "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixWire {
    basis: Vec<String>,
    matrix: Vec<Vec<[f64; 2]>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = DensityMatrixWire {
            basis: BASIS_LABELS.iter().map(|b| b.to_string()).collect(),
            matrix: (0..4)
                .map(|r| (0..4).map(|col| [self.m[(r, col)].re, self.m[(r, col)].im]).collect())
                .collect(),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = DensityMatrixWire::deserialize(d)?;
        if wire.basis != BASIS_LABELS {
            return Err(de::Error::custom(format!(
                "basis must be {:?}, got {:?}",
                BASIS_LABELS, wire.basis
            )));
        }
        if wire.matrix.len() != 4 || wire.matrix.iter().any(|row| row.len() != 4) {
            return Err(de::Error::custom("matrix must be 4x4"));
        }
        let m = Op4::from_fn(|r, col| {
            let [re, im] = wire.matrix[r][col];
            c(re, im)
        });
        DensityMatrix::new(m).map_err(de::Error::custom)
    }
}

/// `|Φ+⟩⟨Φ+|` with `|Φ+⟩ = (|oo⟩ + |ee⟩)/√2`.
pub fn phi_plus() -> DensityMatrix {
    let mut m = Op4::zeros();
    for (r, col) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(r, col)] = c(0.5, 0.0);
    }
    DensityMatrix { m }
}

/// `I/4`.
pub fn maximally_mixed() -> DensityMatrix {
    DensityMatrix {
        m: Op4::identity() * c(0.25, 0.0),
    }
}

/// Bell state with weight `p`, decohered in the `o/e` basis:
/// `p|Φ+⟩⟨Φ+| + (1−p)/2 (|oo⟩⟨oo| + |ee⟩⟨ee|)`.
pub fn colored_state(p: f64) -> Result<DensityMatrix> {
    check_unit("p", p)?;
    let mut m = Op4::zeros();
    m[(0, 0)] = c(0.5, 0.0);
    m[(3, 3)] = c(0.5, 0.0);
    m[(0, 3)] = c(0.5 * p, 0.0);
    m[(3, 0)] = c(0.5 * p, 0.0);
    Ok(DensityMatrix { m })
}

/// Werner state `p|Φ+⟩⟨Φ+| + (1−p) I/4`.
pub fn werner_state(p: f64) -> Result<DensityMatrix> {
    check_unit("p", p)?;
    let m = phi_plus().m * c(p, 0.0) + maximally_mixed().m * c(1.0 - p, 0.0);
    Ok(DensityMatrix { m })
}

/// `w · colored_state(p) + (1−w) I/4`.
pub fn mixed_noise_state(p: f64, w: f64) -> Result<DensityMatrix> {
    check_unit("w", w)?;
    let m = colored_state(p)?.m * c(w, 0.0) + maximally_mixed().m * c(1.0 - w, 0.0);
    Ok(DensityMatrix { m })
}

/// Which noise admixture accompanies the Bell state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    Colored,
    White,
    /// Colored state further mixed with `I/4`, keeping weight `w` on the
    /// colored part.
    Mixed { w: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p: f64,
    pub kind: NoiseKind,
}

impl NoiseModel {
    pub fn new(p: f64, kind: NoiseKind) -> Result<Self> {
        check_unit("p", p)?;
        if let NoiseKind::Mixed { w } = kind {
            check_unit("w", w)?;
        }
        Ok(Self { p, kind })
    }

    pub fn state(&self) -> Result<DensityMatrix> {
        match self.kind {
            NoiseKind::Colored => colored_state(self.p),
            NoiseKind::White => werner_state(self.p),
            NoiseKind::Mixed { w } => mixed_noise_state(self.p, w),
        }
    }
}

/// Eigenvalues of PSD inputs below this are treated as zero before taking
/// square roots, so rounding noise does not leak into the fidelity.
const SQRT_FLOOR: f64 = 1e-13;

fn sqrt_psd(m: &Op4) -> Op4 {
    let (values, vectors) = hermitian_eigen(m);
    let roots = values.map(|v| if v > SQRT_FLOOR { v.sqrt() } else { 0.0 });
    from_spectrum(&roots, &vectors)
}

/// Uhlmann fidelity in the squared convention,
/// `F(ρ, σ) = (tr √(√ρ σ √ρ))²`, so that `F(ρ, ρ) = 1` and
/// `F(|ψ⟩⟨ψ|, σ) = ⟨ψ|σ|ψ⟩`. Result is clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    for (name, s) in [("rho", rho), ("sigma", sigma)] {
        let d = s.diagnostics();
        if !d.is_physical() {
            return Err(Error::NonPhysical(format!("{name}: {d:?}")));
        }
    }
    let sr = sqrt_psd(&rho.m);
    let inner = sr * sigma.m * sr;
    let (values, _) = hermitian_eigen(&inner);
    let root_trace: f64 = values
        .iter()
        .map(|&v| if v > SQRT_FLOOR { v.sqrt() } else { 0.0 })
        .sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}

//! Down-conversion source with trombone timing compensation.
//!
//! The trombone delay `τ` between the two arms sets the weight `p(τ)` of the
//! Bell state in the colored-noise mixture. Units are femtoseconds and
//! millimetres throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::state::{colored_state, DensityMatrix};

/// Demonstration crystal length (3 mm BBO).
pub const DEMO_CRYSTAL_LENGTH_MM: f64 = 3.0;
/// Demonstration pump pulse duration (intensity FWHM).
pub const DEMO_PULSE_FWHM_FS: f64 = 120.0;

/// Pump bandwidth for a transform-limited Gaussian pulse of intensity FWHM
/// `fwhm_fs`: `σ_p = 2√(2 ln 2) / Δt`, the inverse of the temporal standard
/// deviation.
pub fn sigma_from_pulse_fwhm(fwhm_fs: f64) -> Result<f64> {
    if !(fwhm_fs.is_finite() && fwhm_fs > 0.0) {
        return Err(Error::Domain(format!("pulse FWHM {fwhm_fs} fs must be > 0")));
    }
    Ok(2.0 * (2.0 * std::f64::consts::LN_2).sqrt() / fwhm_fs)
}

/// Window function: 1 inside `|x| < 1/2`, 0 otherwise (boundary excluded).
pub fn rect(x: f64) -> f64 {
    if x.abs() < 0.5 {
        1.0
    } else {
        0.0
    }
}

/// Pump walk-off `Λ_p` and o/e group-delay difference `D_G` (both fs/mm)
/// from the group velocities (mm/fs) of pump, o-photon and e-photon.
pub fn derive_dispersion(u_p: f64, u_o: f64, u_e: f64) -> Result<(f64, f64)> {
    for (name, u) in [("u_p", u_p), ("u_o", u_o), ("u_e", u_e)] {
        if !(u.is_finite() && u > 0.0) {
            return Err(Error::Domain(format!("{name} = {u} must be a positive velocity")));
        }
    }
    let lambda_p = 1.0 / u_p - 0.5 * (1.0 / u_o + 1.0 / u_e);
    let d_g = 1.0 / u_o - 1.0 / u_e;
    Ok((lambda_p, d_g))
}

/// How the pump spectrum enters `p(τ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PumpSpread {
    /// Walk-off `Λ_p` (fs/mm) and bandwidth `σ_p` (rad/fs).
    Bandwidth { lambda_p_fs_per_mm: f64, sigma_p_rad_per_fs: f64 },
    /// Dimensionless `κ = σ_p Λ_p L` given directly.
    Kappa(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceParams {
    pub crystal_length_mm: f64,
    /// `1/u_o − 1/u_e`; its sign is a material convention.
    pub d_g_fs_per_mm: f64,
    pub pump: PumpSpread,
}

impl SourceParams {
    pub fn new(crystal_length_mm: f64, d_g_fs_per_mm: f64, pump: PumpSpread) -> Result<Self> {
        if !(crystal_length_mm.is_finite() && crystal_length_mm > 0.0) {
            return Err(Error::Domain(format!(
                "crystal length {crystal_length_mm} mm must be > 0"
            )));
        }
        if !d_g_fs_per_mm.is_finite() {
            return Err(Error::Domain("D_G must be finite".into()));
        }
        match pump {
            PumpSpread::Bandwidth { lambda_p_fs_per_mm, sigma_p_rad_per_fs } => {
                if !lambda_p_fs_per_mm.is_finite() {
                    return Err(Error::Domain("Lambda_p must be finite".into()));
                }
                if !(sigma_p_rad_per_fs.is_finite() && sigma_p_rad_per_fs >= 0.0) {
                    return Err(Error::Domain(format!(
                        "sigma_p = {sigma_p_rad_per_fs} rad/fs must be >= 0"
                    )));
                }
            }
            PumpSpread::Kappa(k) => {
                if !k.is_finite() {
                    return Err(Error::Domain("kappa must be finite".into()));
                }
            }
        }
        Ok(Self { crystal_length_mm, d_g_fs_per_mm, pump })
    }

    /// Shorthand for a dimensionless-κ source.
    pub fn with_kappa(crystal_length_mm: f64, d_g_fs_per_mm: f64, kappa: f64) -> Result<Self> {
        Self::new(crystal_length_mm, d_g_fs_per_mm, PumpSpread::Kappa(kappa))
    }

    pub fn kappa(&self) -> f64 {
        match self.pump {
            PumpSpread::Bandwidth { lambda_p_fs_per_mm, sigma_p_rad_per_fs } => {
                sigma_p_rad_per_fs * lambda_p_fs_per_mm * self.crystal_length_mm
            }
            PumpSpread::Kappa(k) => k,
        }
    }

    /// `D_G · L` in fs.
    pub fn delay_scale_fs(&self) -> f64 {
        self.d_g_fs_per_mm * self.crystal_length_mm
    }

    /// `|D_G L| / 2`; `p` vanishes for `|τ|` at or beyond this.
    pub fn window_half_width_fs(&self) -> f64 {
        0.5 * self.delay_scale_fs().abs()
    }
}

/// Bell-state weight at trombone delay `tau_fs`:
/// `rect(x) (1 − 2|x|) exp(−2κ²x²)` with `x = τ / (D_G L)`.
pub fn p_of_tau(tau_fs: f64, params: &SourceParams) -> Result<f64> {
    let scale = params.delay_scale_fs();
    if scale == 0.0 {
        return Err(Error::DegenerateDispersion);
    }
    if !tau_fs.is_finite() {
        return Err(Error::Domain(format!("delay {tau_fs} fs is not finite")));
    }
    let x = tau_fs / scale;
    let k = params.kappa();
    Ok(rect(x) * (1.0 - 2.0 * x.abs()) * (-2.0 * k * k * x * x).exp())
}

/// Largest allowed `|Δp|` at the returned delay.
pub const TAU_FOR_P_TOL: f64 = 1e-10;

/// Smallest non-negative delay with `p_of_tau(τ) = p_target`, by bisection on
/// `[0, |D_G L|/2]` where `p` falls strictly from 1 to 0.
pub fn tau_for_p(p_target: f64, params: &SourceParams) -> Result<f64> {
    if !(p_target > 0.0 && p_target <= 1.0) {
        return Err(Error::Domain(format!("target p = {p_target} is outside (0, 1]")));
    }
    if p_of_tau(0.0, params)? == p_target {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, params.window_half_width_fs());
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let p = p_of_tau(mid, params)?;
        if (p - p_target).abs() <= TAU_FOR_P_TOL {
            break;
        }
        if p > p_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

pub fn state_at_delay(tau_fs: f64, params: &SourceParams) -> Result<DensityMatrix> {
    colored_state(p_of_tau(tau_fs, params)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayPoint {
    pub tau_fs: f64,
    pub p: f64,
}

/// `p_of_tau` over a delay grid, order preserved.
pub fn delay_sweep(taus_fs: &[f64], params: &SourceParams) -> Result<Vec<DelayPoint>> {
    exec::map(taus_fs, |&tau_fs| p_of_tau(tau_fs, params).map(|p| DelayPoint { tau_fs, p }))
        .into_iter()
        .collect()
}

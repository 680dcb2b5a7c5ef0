//! Experimental regimes and their reduction to dimensionless form.
//!
//! Two configurations are supported: a cold, Gaussian-distributed atomic
//! cloud illuminated by a uniform pump (regime "a"), and a uniform
//! room-temperature vapor cell with a focused Gaussian pump (regime "b").
//! After reduction, the coupling kernel depends on the geometry only through
//! the Fresnel number F = k_sσ²/(2πσ_z), the regime tag, and κ = k_s/k_p —
//! every physical scale is carried by a single multiplicative prefactor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// ħ in SI units (J·s).
const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity in SI units (F/m).
const EPSILON_0: f64 = 8.854_187_812_8e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// Cold Gaussian atomic cloud, uniform pump: κ = 0, axial profile e^{−z̃²}.
    ColdGaussianCloud,
    /// Uniform room-temperature cell, focused Gaussian pump: κ = k_s/k_p,
    /// flat axial profile on the cell length.
    UniformCellGaussianPump,
}

/// Physical description of one scattering configuration.
///
/// `sigma` is the transverse scale (cloud radius σ_{a,ρ} or pump waist σ_p),
/// `sigma_z` the axial scale (cloud length σ_{a,z} or cell length L).
/// `coupling_prefactor` is the single scalar relating reduced singular
/// values ζ̃ to physical rates ζ; it can be supplied directly or assembled
/// from physical constituents via [`ExperimentGeometry::cold_prefactor`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentGeometry {
    pub regime: Regime,
    pub sigma: f64,
    pub sigma_z: f64,
    pub k_s: f64,
    pub kappa: f64,
    pub coupling_prefactor: f64,
}

impl ExperimentGeometry {
    /// Validated constructor. Regime "a" forces κ = 0; regime "b" requires
    /// κ ∈ (0, 2].
    pub fn new(
        regime: Regime,
        sigma: f64,
        sigma_z: f64,
        k_s: f64,
        kappa: f64,
        coupling_prefactor: f64,
    ) -> Result<Self> {
        if !(sigma > 0.0) || !(sigma_z > 0.0) || !(k_s > 0.0) {
            return Err(Error::invalid(format!(
                "length scales must be positive: sigma={sigma}, sigma_z={sigma_z}, k_s={k_s}"
            )));
        }
        match regime {
            Regime::ColdGaussianCloud => {
                if kappa != 0.0 {
                    return Err(Error::invalid(format!(
                        "cold-cloud regime fixes kappa = 0, got {kappa}"
                    )));
                }
            }
            Regime::UniformCellGaussianPump => {
                if !(kappa > 0.0 && kappa <= 2.0) {
                    return Err(Error::invalid(format!(
                        "cell regime needs kappa in (0, 2], got {kappa}"
                    )));
                }
            }
        }
        Ok(Self { regime, sigma, sigma_z, k_s, kappa, coupling_prefactor })
    }

    /// Assembles the cold-cloud (regime "a") coupling prefactor from its
    /// physical constituents:
    ///
    /// ```text
    /// (g₀λ_s²/ħ)·√(nI₀/ε₀) · √((2/π)^{3/2}·V/(σ_{a,ρ}²·σ_{a,z}))
    /// ```
    ///
    /// with λ_s = 2π/k_s. All arguments in SI units. For regime "b" the
    /// regime factor is 1 and the prefactor is just (g₀λ_s²/ħ)√(nI₀/ε₀).
    #[allow(clippy::too_many_arguments)]
    pub fn cold_prefactor(
        g0: f64,
        k_s: f64,
        density: f64,
        intensity: f64,
        volume: f64,
        sigma_rho: f64,
        sigma_z: f64,
    ) -> f64 {
        let lambda_s = 2.0 * std::f64::consts::PI / k_s;
        let base = g0 * lambda_s * lambda_s / HBAR * (density * intensity / EPSILON_0).sqrt();
        let regime_factor =
            ((2.0 / std::f64::consts::PI).powf(1.5) * volume / (sigma_rho * sigma_rho * sigma_z))
                .sqrt();
        base * regime_factor
    }
}

/// Dimensionless geometry: everything the coupling kernel depends on.
///
/// With the waist locked to w = √(σ_z/k_s), the reduced axial coordinate is
/// z̃ = z/σ_z, the beam parameter becomes ξ_s = 2z̃, and χ ≡ σ²/w² = 2πF
/// exactly, so (F, κ, regime) determine the kernel completely.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedGeometry {
    pub fresnel: f64,
    pub chi: f64,
    pub waist: f64,
    pub kappa: f64,
    pub regime: Regime,
    pub z_range: (f64, f64),
}

/// F = k_s·σ²/(2π·σ_z).
pub fn fresnel_number(geom: &ExperimentGeometry) -> f64 {
    geom.k_s * geom.sigma * geom.sigma / (2.0 * std::f64::consts::PI * geom.sigma_z)
}

/// Reduces a physical geometry to its dimensionless form.
///
/// The axial window is |z̃| ≤ 3 for the Gaussian cloud (covering the
/// density to e⁻⁹) and |z̃| ≤ ½ for the cell (the physical cell).
pub fn reduce(geom: &ExperimentGeometry) -> ReducedGeometry {
    let fresnel = fresnel_number(geom);
    let waist = (geom.sigma_z / geom.k_s).sqrt();
    let chi = geom.sigma * geom.sigma / (waist * waist);
    let z_range = match geom.regime {
        Regime::ColdGaussianCloud => (-3.0, 3.0),
        Regime::UniformCellGaussianPump => (-0.5, 0.5),
    };
    ReducedGeometry { fresnel, chi, waist, kappa: geom.kappa, regime: geom.regime, z_range }
}

impl ReducedGeometry {
    /// Builds the reduced geometry directly from (F, regime, κ) with unit
    /// waist — the form every reduced-space computation actually consumes.
    pub fn from_fresnel(fresnel: f64, regime: Regime, kappa: f64) -> Result<Self> {
        if !(fresnel > 0.0) {
            return Err(Error::invalid(format!("Fresnel number must be positive, got {fresnel}")));
        }
        let z_range = match regime {
            Regime::ColdGaussianCloud => {
                if kappa != 0.0 {
                    return Err(Error::invalid("cold-cloud regime fixes kappa = 0".to_string()));
                }
                (-3.0, 3.0)
            }
            Regime::UniformCellGaussianPump => {
                if !(kappa > 0.0 && kappa <= 2.0) {
                    return Err(Error::invalid("cell regime needs kappa in (0, 2]".to_string()));
                }
                (-0.5, 0.5)
            }
        };
        Ok(Self {
            fresnel,
            chi: 2.0 * std::f64::consts::PI * fresnel,
            waist: 1.0,
            kappa,
            regime,
            z_range,
        })
    }

    fn check_z(&self, z_tilde: f64) -> Result<()> {
        if z_tilde < self.z_range.0 || z_tilde > self.z_range.1 {
            return Err(Error::invalid(format!(
                "z̃ = {z_tilde} outside the axial window [{}, {}]",
                self.z_range.0, self.z_range.1
            )));
        }
        Ok(())
    }
}

/// Pump wavefront curvature parameter ξ at reduced coordinate z̃:
/// 0 for the uniform pump of regime "a", κ·z̃/(πF) for the focused pump of
/// regime "b" (odd in z̃).
pub fn pump_curvature(red: &ReducedGeometry, z_tilde: f64) -> Result<f64> {
    red.check_z(z_tilde)?;
    Ok(match red.regime {
        Regime::ColdGaussianCloud => 0.0,
        Regime::UniformCellGaussianPump => {
            red.kappa * z_tilde / (std::f64::consts::PI * red.fresnel)
        }
    })
}

/// Reduced axial weight (even in z̃): e^{−z̃²} for the Gaussian cloud, 1 for
/// the cell. Global constants live in `coupling_prefactor`, not here.
pub fn axial_profile(red: &ReducedGeometry, z_tilde: f64) -> f64 {
    match red.regime {
        Regime::ColdGaussianCloud => (-z_tilde * z_tilde).exp(),
        Regime::UniformCellGaussianPump => 1.0,
    }
}

/// Physical singular value from a reduced one: ζ = ζ̃ · coupling_prefactor.
pub fn physical_singular_value(
    _red: &ReducedGeometry,
    geom: &ExperimentGeometry,
    zeta_reduced: f64,
) -> f64 {
    zeta_reduced * geom.coupling_prefactor
}

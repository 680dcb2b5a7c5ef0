//! Special functions for the closed-form coupling elements and mode
//! reconstruction: associated Laguerre polynomials, the terminating Gauss
//! hypergeometric sum, and Laguerre-Gauss transverse modes.
//!
//! Everything here is a pure total function of its arguments; the only
//! rejected inputs are non-positive length scales in [`lg_mode`].

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Generalized (associated) Laguerre polynomial L_l^m(x).
///
/// Computed by the three-term recurrence in the degree,
///   (l+1)·L_{l+1}^m = (2l+1+m−x)·L_l^m − (l+m)·L_{l−1}^m,
/// which is stable upward for the arguments arising here (x ≥ 0).
pub fn laguerre_assoc(l: u32, m: u32, x: f64) -> f64 {
    let mf = f64::from(m);
    if l == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + mf - x;
    for j in 1..l {
        let jf = f64::from(j);
        let next = ((2.0 * jf + 1.0 + mf - x) * cur - (jf + mf) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Terminating Gauss hypergeometric sum ₂F₁(−l, −l′; m+1; z).
///
/// With both upper parameters non-positive integers the series is a
/// polynomial of degree min(l, l′); it is summed exactly with the term
/// ratio
///   t_{k+1}/t_k = (k−l)(k−l′) / ((m+1+k)(k+1)) · z,
/// so no factorials are ever materialized. Symmetric in (l, l′) term by
/// term.
pub fn hyp2f1_terminating(l: u32, lp: u32, m: u32, zarg: C64) -> C64 {
    let kmax = l.min(lp);
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..kmax {
        let kf = f64::from(k);
        let ratio = (kf - f64::from(l)) * (kf - f64::from(lp))
            / ((f64::from(m) + 1.0 + kf) * (kf + 1.0));
        term *= ratio * zarg;
        sum += term;
    }
    sum
}

/// √(l!/(l+m)!) — the Laguerre-Gauss normalization ratio, as a product of
/// reciprocals. Above l+m > 150 the product is assembled in log space; the
/// ratio itself never overflows either way, but the log path keeps the
/// relative error flat for extreme indices.
pub(crate) fn sqrt_factorial_ratio(l: u32, m: u32) -> f64 {
    if m == 0 {
        return 1.0;
    }
    if l + m > 150 {
        let log_sum: f64 = (1..=m).map(|k| f64::from(l + k).ln()).sum();
        (-0.5 * log_sum).exp()
    } else {
        let prod: f64 = (1..=m).map(|k| 1.0 / f64::from(l + k)).product();
        prod.sqrt()
    }
}

/// Radial-axial factor LG^m_l(ρ, z) of the Laguerre-Gauss mode; the caller
/// applies the carrier e^{imφ}.
///
/// In terms of ξ_s = 2z/(k_s w²) and ρ_s = √2·ρ/(w√(1+ξ_s²)):
///
/// ```text
/// LG^m_l = √(2/π) √(l!/(l+m)!) (1/w) · e^{−2iθ(l+m/2)}/(1+iξ_s)
///          · ρ_s^m · e^{−ρ²/(w²(1+iξ_s))} · L_l^m(ρ_s²),     θ = arctan ξ_s.
/// ```
///
/// The unit-modulus factor e^{−2iθ(l+m/2)} equals ((1−iξ_s)/(1+iξ_s))^{l+m/2};
/// it is evaluated through the angle θ so that large indices cost one
/// multiplication and no precision.
///
/// The basis {LG^m_l e^{imφ}} is orthonormal under ∫ρ dρ dφ at every z.
/// Negative azimuthal indices are the caller's concern (±m degeneracy).
pub fn lg_mode(l: u32, m: u32, rho: f64, z: f64, waist: f64, k_s: f64) -> Result<C64> {
    if !(waist > 0.0) {
        return Err(Error::invalid(format!("waist must be positive, got {waist}")));
    }
    if !(k_s > 0.0) {
        return Err(Error::invalid(format!("k_s must be positive, got {k_s}")));
    }
    let xi_s = 2.0 * z / (k_s * waist * waist);
    let spread = 1.0 + xi_s * xi_s;
    let rho_s = std::f64::consts::SQRT_2 * rho / (waist * spread.sqrt());
    let theta = xi_s.atan();

    let norm = (2.0 / std::f64::consts::PI).sqrt() * sqrt_factorial_ratio(l, m) / waist;
    let gouy = C64::from_polar(1.0, -2.0 * theta * (f64::from(l) + 0.5 * f64::from(m)));
    let curvature = C64::new(1.0, xi_s); // 1 + iξ_s
    // e^{−ρ²/(w²(1+iξ_s))}
    let gauss = (-(rho * rho) / (waist * waist) / curvature).exp();
    let radial = rho_s.powi(m as i32) * laguerre_assoc(l, m, rho_s * rho_s);

    let value = norm * gouy / curvature * gauss * radial;
    debug_assert!(value.re.is_finite() && value.im.is_finite());
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn laguerre_low_orders() {
        // L_0^m ≡ 1, any argument
        assert_abs_diff_eq!(laguerre_assoc(0, 3, 7.5), 1.0, epsilon = 0.0);
        // L_1^m(x) = 1 + m − x
        assert_abs_diff_eq!(laguerre_assoc(1, 2, 1.0), 2.0, epsilon = 1e-15);
        // L_2^0(x) = (x² − 4x + 2)/2 at x = 1 → −0.5
        assert_abs_diff_eq!(laguerre_assoc(2, 0, 1.0), -0.5, epsilon = 1e-15);
    }

    #[test]
    fn hyp2f1_degenerate_and_linear_cases() {
        let z = C64::new(0.42, -0.17);
        assert_eq!(hyp2f1_terminating(0, 5, 2, z), C64::new(1.0, 0.0));
        assert_eq!(hyp2f1_terminating(5, 0, 2, z), C64::new(1.0, 0.0));
        // ₂F₁(−1,−1;1;z) = 1 + z
        let v = hyp2f1_terminating(1, 1, 0, C64::new(0.3, 0.0));
        assert_abs_diff_eq!(v.re, 1.3, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 0.0);
    }

    #[test]
    fn lg_mode_at_origin_is_sqrt_two_over_pi() {
        let v = lg_mode(0, 0, 0.0, 0.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(v.re, (2.0 / std::f64::consts::PI).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 0.0);
    }

    #[test]
    fn lg_mode_rejects_bad_scales() {
        assert!(lg_mode(0, 0, 0.1, 0.0, 0.0, 1.0).is_err());
        assert!(lg_mode(0, 0, 0.1, 0.0, 1.0, -2.0).is_err());
    }
}

//! Double-double evaluation of the correlation closed forms.
//!
//! The readout-error functional subtracts terms of magnitude up to
//! ~e^{4γT} (≈ 1e34 at ζ=2, Γ=0, T=10) that cancel down to O(n_b) ≈ 1e17,
//! which exceeds f64's 16 digits. The five Wick terms are therefore
//! accumulated in ~32-digit double-double arithmetic; everything else in
//! the crate stays in f64.

use twofloat::TwoFloat;

use crate::temporal::TemporalParams;

pub(crate) type Dd = TwoFloat;

pub(crate) fn dd(x: f64) -> Dd {
    TwoFloat::from_f64(x)
}


/// Division with a compensating Newton step. The library's `Div` skips the
/// two_prod residual (it needs an FMA) and delivers only ~1e−16 relative
/// accuracy; one correction through the exact-rounded multiply restores
/// ~1e−31.
pub(crate) fn div_dd(a: Dd, b: Dd) -> Dd {
    let q = a / b;
    let rem = a - q * b;
    q + rem / b
}

/// √x by one Newton step off the f64 seed: the seed carries 16 digits, the
/// exact-rounded residual correction doubles that.
pub(crate) fn sqrt_dd(x: Dd) -> Dd {
    if x == 0.0 {
        return dd(0.0);
    }
    let y = dd(f64::from(x).sqrt());
    y + div_dd(x - y * y, dd(2.0) * y)
}

/// exp(x) accurate to ~1e−31 relative: reduce x = k·ln2 + r with
/// |r| ≤ ln2/2, sum the Taylor series, scale by the exact power 2ᵏ.
/// The library's built-in `exp` polynomial tops out near 2e−19 relative,
/// which the cancellation in the error functional cannot absorb.
fn exp_dd(x: Dd) -> Dd {
    let k = f64::from(x / twofloat::consts::LN_2).round();
    let r = x - twofloat::consts::LN_2 * dd(k);
    let mut term = dd(1.0);
    let mut sum = dd(1.0);
    for n in 1..=26 {
        term = div_dd(term * r, dd(n as f64));
        sum += term;
    }
    // |k| ≤ ~120 for every argument this crate produces, so 2ᵏ is an exact
    // f64 and the scaling multiply commits no rounding.
    sum * dd(2.0f64.powi(k as i32))
}

/// expm1(x) without the subtractive digit loss near zero.
fn expm1_dd(x: Dd) -> Dd {
    if x.abs() < 0.35 {
        let mut term = dd(1.0);
        let mut sum = dd(0.0);
        for n in 1..=26 {
            term = div_dd(term * x, dd(n as f64));
            sum += term;
        }
        sum
    } else {
        exp_dd(x) - 1.0
    }
}

/// φ(x) = expm1(x)/x with φ(0) = 1, in double-double.
fn phi(x: Dd) -> Dd {
    if x == 0.0 {
        dd(1.0)
    } else {
        div_dd(expm1_dd(x), x)
    }
}

/// ⟨â†(t)â(t′)⟩ in double-double; same closed form as `temporal::corr_aa`.
pub(crate) fn corr_aa(p: &TemporalParams, t: f64, tp: f64) -> Dd {
    let z2 = dd(p.zeta()) * dd(p.zeta());
    let g = dd(p.gamma_net());
    let tmin = dd(t.min(tp));
    let dt = dd((t - tp).abs());
    z2 * exp_dd(g * (dd(t) + dd(tp)))
        + dd(2.0) * z2 * dd(p.gamma_loss()) * tmin * exp_dd(g * dt) * phi(dd(2.0) * g * tmin)
}

/// ⟨b̂(t)â(t′)⟩ in double-double.
pub(crate) fn corr_ba(p: &TemporalParams, t: f64, tp: f64) -> Dd {
    if p.zeta() == 0.0 {
        return dd(0.0);
    }
    div_dd(corr_aa(p, t, tp), dd(p.zeta()))
}

/// ⟨b̂†(t)b̂(t′)⟩ in double-double.
pub(crate) fn corr_bb(p: &TemporalParams, t: f64, tp: f64) -> Dd {
    let z2 = dd(p.zeta()) * dd(p.zeta());
    let g = dd(p.gamma_net());
    let tmin = dd(t.min(tp));
    let dt = dd((t - tp).abs());
    z2 * tmin * exp_dd(g * dt) * phi(dd(2.0) * g * tmin)
}

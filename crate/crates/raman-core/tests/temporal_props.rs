// Property checks on the closed-form correlation kernels, plus a coarse
// sweep tying them to the independent slice-propagation oracle. The tight
// (τ = 10⁻⁴, 10⁻³-relative) oracle comparison lives in the acceptance
// battery; here a τ = 10⁻³ grid with a 3·10⁻² ceiling keeps the suite fast.

use proptest::prelude::*;
use raman_core::oracle::propagate_covariance;
use raman_core::temporal::{
    classify, corr_aa, corr_ba, corr_bb, cumulative_photons, g1, GainRegime,
};
use raman_core::TemporalParams;

fn params() -> impl Strategy<Value = TemporalParams> {
    (0.05..2.5f64, 0.0..2.5f64).prop_map(|(z, g)| TemporalParams::new(z, g).unwrap())
}

proptest! {
    #[test]
    fn kernels_are_symmetric_and_positive(p in params(), t in 0.0..4.0f64, tp in 0.0..4.0f64) {
        prop_assert_eq!(corr_aa(&p, t, tp), corr_aa(&p, tp, t));
        prop_assert_eq!(corr_bb(&p, t, tp), corr_bb(&p, tp, t));
        prop_assert!(corr_aa(&p, t, t) >= 0.0);
        prop_assert!(corr_bb(&p, t, t) >= 0.0);
        // the damping contribution only adds photons on the diagonal
        let stim = p.zeta() * p.zeta() * (2.0 * p.gamma_net() * t).exp();
        prop_assert!(corr_aa(&p, t, t) >= stim * (1.0 - 1e-14));
    }

    /// |⟨b̂(t)â(t′)⟩|² ≤ ⟨b̂b̂†⟩(t)·⟨â†â⟩(t′); exactly saturated for Γ = 0,
    /// so the ceiling only absorbs roundoff.
    #[test]
    fn cross_correlation_respects_cauchy_schwarz(
        p in params(), t in 0.0..4.0f64, tp in 0.0..4.0f64,
    ) {
        let lhs = corr_ba(&p, t, tp).powi(2);
        let rhs = (corr_bb(&p, t, t) + 1.0) * corr_aa(&p, tp, tp);
        prop_assert!(
            lhs <= rhs * (1.0 + 1e-12),
            "lhs {lhs:e} exceeds rhs {rhs:e}"
        );
    }

    #[test]
    fn coherence_is_normalized_and_bounded(
        p in params(), t in 0.01..4.0f64, tp in 0.01..4.0f64,
    ) {
        prop_assert_eq!(g1(&p, t, t).unwrap(), 1.0);
        let g = g1(&p, t, tp).unwrap();
        prop_assert!(g > 0.0 && g <= 1.0 + 1e-12, "g1 = {g}");
    }

    #[test]
    fn photon_count_grows_and_matches_flux(p in params(), t in 0.05..4.0f64) {
        let n = cumulative_photons(&p, t);
        prop_assert!(n >= 0.0);
        prop_assert!(cumulative_photons(&p, t * 1.05 + 0.01) > n);
        // d/dt of the cumulative count is the instantaneous flux
        let h = 1e-4 * t.max(0.5);
        let rate = (cumulative_photons(&p, t + h) - cumulative_photons(&p, t - h)) / (2.0 * h);
        let flux = corr_aa(&p, t, t);
        prop_assert!(
            (rate - flux).abs() <= 1e-6 * flux.max(1.0),
            "finite-difference rate {rate} vs flux {flux}"
        );
    }

    #[test]
    fn regime_classification_follows_net_gain(p in params()) {
        let want = if p.zeta() * p.zeta() > 2.0 * p.gamma_loss() {
            GainRegime::Subcritical
        } else if p.zeta() * p.zeta() == 2.0 * p.gamma_loss() {
            GainRegime::Critical
        } else {
            GainRegime::Supercritical
        };
        prop_assert_eq!(classify(&p), want);
    }
}

#[test]
fn slice_oracle_confirms_closed_forms_coarsely() {
    let t_grid = [0.5, 1.0, 2.0];
    let tau = 1e-3;
    let ceiling = 3e-2;
    for zeta in [0.5, 1.0, 2.0] {
        for gamma in [0.0, 0.5, 2.0] {
            let p = TemporalParams::new(zeta, gamma).unwrap();
            let rec = propagate_covariance(&p, &t_grid, tau).unwrap();
            let mut worst = 0.0f64;
            for (i, &t) in t_grid.iter().enumerate() {
                let occ = corr_bb(&p, t, t);
                worst = worst.max((rec.occupation[i] - occ).abs() / occ);
                for (j, &tp) in t_grid.iter().enumerate() {
                    let aa = corr_aa(&p, t, tp);
                    let bb = corr_bb(&p, t, tp);
                    let ba = corr_ba(&p, t, tp);
                    worst = worst.max((rec.photon_flux[(i, j)] - aa).abs() / aa);
                    worst = worst.max((rec.spin[(i, j)] - bb).abs() / bb);
                    worst = worst.max((rec.cross[(i, j)] - ba).abs() / ba);
                }
            }
            assert!(
                worst < ceiling,
                "ζ={zeta} Γ={gamma}: worst oracle/closed-form deviation {worst:e}"
            );
        }
    }
}

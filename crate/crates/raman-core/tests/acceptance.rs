// Acceptance battery. Each criterion runs at its stated tolerance and
// prints a single PASS/FAIL line with the measured figures; the process
// exits nonzero if any criterion fails.

use std::time::Instant;

use raman_core::coupling::{build_block, coupling_element, quadrature_overlap_block};
use raman_core::estimator::{fit_exponential_robust, solve_weights};
use raman_core::geometry::{ReducedGeometry, Regime};
use raman_core::modes::{decompose, spectrum, ModeDecomposition};
use raman_core::oracle::bogoliubov_defect;
use raman_core::oracle::propagate_covariance;
use raman_core::quadrature::gauss_legendre_on;
use raman_core::temporal::{corr_aa, corr_ba, corr_bb, cumulative_photons, g1};
use raman_core::{C64, EstimatorProblem, TemporalParams};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn both_regimes() -> [(&'static str, Regime, f64); 2] {
    [("cold", Regime::ColdGaussianCloud, 0.0), ("cell", Regime::UniformCellGaussianPump, 1.0)]
}

/// ζ=1, Γ=1, T=10, n_t=400: w(t) ≈ A·e^{B(t−T)} on [T−3, T] with
/// A = 1.24 ± 0.05, B = 2.23 ± 0.05, in under 10 s.
fn criterion_1() -> (bool, String) {
    let start = Instant::now();
    let p = TemporalParams::new(1.0, 1.0).unwrap();
    let prob = EstimatorProblem::new(p, 10.0, 400).unwrap();
    let sol = solve_weights(&prob).unwrap();
    let (a, b, _) = fit_exponential_robust(&sol.weights, prob.t_nodes(), 3.0).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let pass = (a - 1.24).abs() <= 0.05 && (b - 2.23).abs() <= 0.05 && secs < 10.0;
    (pass, format!("fit A={a:.6} (1.24±0.05), B={b:.6} (2.23±0.05), {secs:.2} s (<10 s)"))
}

/// Same setting: >3 dB below projection noise; ⟨D̂²⟩ < n_b over the whole
/// (ζ, Γ, T) battery.
fn criterion_2() -> (bool, String) {
    let p = TemporalParams::new(1.0, 1.0).unwrap();
    let prob = EstimatorProblem::new(p, 10.0, 400).unwrap();
    let db = solve_weights(&prob).unwrap().noise_reduction_db;
    let mut worst_ratio = f64::NEG_INFINITY;
    let mut worst_at = String::new();
    for zeta in [0.5, 1.0, 2.0] {
        for gamma in [0.0, 0.5, 1.0, 2.0] {
            for t_total in [1.0, 5.0, 10.0] {
                let p = TemporalParams::new(zeta, gamma).unwrap();
                let prob = EstimatorProblem::new(p, t_total, 400).unwrap();
                let sol = solve_weights(&prob).unwrap();
                let ratio = sol.expected_sq_error / sol.n_b;
                if ratio > worst_ratio {
                    worst_ratio = ratio;
                    worst_at = format!("(ζ={zeta}, Γ={gamma}, T={t_total})");
                }
            }
        }
    }
    let pass = db > 3.0 && worst_ratio < 1.0;
    (
        pass,
        format!(
            "noise reduction {db:.4} dB (>3.0); battery worst ⟨D̂²⟩/n_b = {worst_ratio:.6} \
             at {worst_at} (<1)"
        ),
    )
}

/// Lossless bookkeeping: cumulative photons equal e^{ζ²t}−1 to 1e−12
/// relative; g₁ ≡ 1 to 1e−12.
fn criterion_3() -> (bool, String) {
    let mut worst_n = 0.0f64;
    let mut worst_g = 0.0f64;
    for zeta in [0.5, 1.0, 2.0] {
        let p = TemporalParams::new(zeta, 0.0).unwrap();
        for t in [0.1, 1.0, 3.0] {
            let want = (zeta * zeta * t).exp_m1();
            worst_n = worst_n.max(rel(cumulative_photons(&p, t), want));
        }
        for t in [0.1, 0.5, 1.0, 2.0, 3.0] {
            for tp in [0.1, 0.5, 1.0, 2.0, 3.0] {
                worst_g = worst_g.max((g1(&p, t, tp).unwrap() - 1.0).abs());
            }
        }
    }
    let pass = worst_n < 1e-12 && worst_g < 1e-12;
    (pass, format!("photon count rel dev {worst_n:.2e} (<1e-12); |g₁−1| {worst_g:.2e} (<1e-12)"))
}

/// Supercritical coherence: g₁(50, 50+Δ) = e^{−Δ/2} within 1e−6.
fn criterion_4() -> (bool, String) {
    let p = TemporalParams::new(1.0, 1.0).unwrap();
    let mut worst = 0.0f64;
    for delta in [0.5, 1.0, 2.0] {
        let got = g1(&p, 50.0, 50.0 + delta).unwrap();
        worst = worst.max((got - (-delta / 2.0).exp()).abs());
    }
    (worst < 1e-6, format!("max |g₁ − e^{{−Δ/2}}| = {worst:.2e} (<1e-6)"))
}

/// Saturation vs growth at ζ=1, Γ=1: spin waves at t=5 within 2e−3 of 1;
/// cumulative photons strictly increasing on the same grid.
fn criterion_5() -> (bool, String) {
    let p = TemporalParams::new(1.0, 1.0).unwrap();
    let dev = (corr_bb(&p, 5.0, 5.0) - 1.0).abs();
    let grid: Vec<f64> = (0..400).map(|k| 5.0 * k as f64 / 399.0).collect();
    let counts: Vec<f64> = grid.iter().map(|&t| cumulative_photons(&p, t)).collect();
    let monotone = counts.windows(2).all(|w| w[1] > w[0]);
    let pass = dev < 2e-3 && monotone;
    (
        pass,
        format!(
            "|⟨b̂†b̂⟩(5) − 1| = {dev:.3e} (<2e-3); photon count strictly increasing: {monotone}"
        ),
    )
}

/// Closed-form elements match the quadrature oracle to 1e−8 of each
/// (regime, F, m, z̃) grid's largest element, for m≤3, l,l′≤10, 5 axial
/// nodes, F ∈ {0.1, 1, 10}, both regimes, in under 60 s. (Individual far
/// tails sit at the quadrature's own f64 floor, ~1e−16 of the grid scale,
/// where per-element ratios measure roundoff, not agreement.)
fn criterion_6() -> (bool, String) {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for (_, regime, kappa) in both_regimes() {
        for f in [0.1, 1.0, 10.0] {
            let red = ReducedGeometry::from_fresnel(f, regime, kappa).unwrap();
            let (nodes, _) = gauss_legendre_on(5, red.z_range.0, red.z_range.1);
            for m in 0..=3u32 {
                for &zt in &nodes {
                    let oracle = quadrature_overlap_block(&red, m, 10, zt).unwrap();
                    let scale = oracle.iter().map(|v| v.norm()).fold(0.0, f64::max);
                    for l in 0..=10u32 {
                        for lp in 0..=10u32 {
                            let c = coupling_element(&red, m, l, lp, zt).unwrap();
                            let dev = (c - oracle[(l as usize, lp as usize)]).norm() / scale;
                            worst = worst.max(dev);
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst < 1e-8 && secs < 60.0;
    (pass, format!("{count} elements, worst grid-relative dev {worst:.2e} (<1e-8), {secs:.1} s (<60 s)"))
}

fn reconstruction_defect(dec: &ModeDecomposition, block: &raman_core::CouplingBlock) -> f64 {
    let n_l = block.l_max as usize + 1;
    let n_z = block.z_nodes.len();
    let scale = block
        .elements
        .iter()
        .zip(block.z_weights.iter().cycle())
        .map(|(e, w)| e.norm() * w.sqrt())
        .fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for l in 0..n_l {
        for lp in 0..n_l {
            for j in 0..n_z {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..dec.n_modes() {
                    acc += dec.singular_values[k]
                        * dec.photon_coeff(k, l)
                        * dec.atomic_coeff(k, lp, j);
                }
                let delta = (acc - block.element(l as u32, lp as u32, j)).norm();
                worst = worst.max(delta * block.z_weights[j].sqrt());
            }
        }
    }
    worst / scale
}

fn orthonormality_defects(dec: &ModeDecomposition) -> (f64, f64) {
    let n_l = dec.singular_values.len();
    let n_z = dec.z_nodes.len();
    let mut ph = 0.0f64;
    let mut at = 0.0f64;
    for k in 0..dec.n_modes() {
        for kp in 0..dec.n_modes() {
            let want = if k == kp { 1.0 } else { 0.0 };
            let mut p = C64::new(0.0, 0.0);
            for l in 0..n_l {
                p += dec.photon_coeff(k, l) * dec.photon_coeff(kp, l).conj();
            }
            ph = ph.max((p - C64::new(want, 0.0)).norm());
            let mut a = C64::new(0.0, 0.0);
            for lp in 0..n_l {
                for j in 0..n_z {
                    a += dec.z_weights[j]
                        * dec.atomic_coeff(k, lp, j)
                        * dec.atomic_coeff(kp, lp, j).conj();
                }
            }
            at = at.max((a - C64::new(want, 0.0)).norm());
        }
    }
    (ph, at)
}

fn merged_top5(red: &ReducedGeometry, l_max: u32, n_z: usize) -> Vec<f64> {
    let decs: Vec<ModeDecomposition> = (0..=2u32)
        .map(|m| decompose(&build_block(red, m, l_max, n_z).unwrap()).unwrap())
        .collect();
    spectrum(&decs, 1.0).iter().take(5).map(|e| e.zeta_reduced).collect()
}

/// SVD fidelity: weighted reconstruction < 1e−8, orthonormality defects
/// < 1e−10, and top-of-spectrum stability < 1e−6 relative under
/// (l_max, n_z) (40, 41) → (60, 61), at F ∈ {0.1, 10} in both regimes.
fn criterion_7() -> (bool, String) {
    let mut worst_rec = 0.0f64;
    let mut worst_ph = 0.0f64;
    let mut worst_at = 0.0f64;
    let mut worst_drift = 0.0f64;
    let mut drift_detail = String::new();
    for (tag, regime, kappa) in both_regimes() {
        for f in [0.1, 10.0] {
            let red = ReducedGeometry::from_fresnel(f, regime, kappa).unwrap();
            let block = build_block(&red, 0, 40, 41).unwrap();
            let dec = decompose(&block).unwrap();
            worst_rec = worst_rec.max(reconstruction_defect(&dec, &block));
            let (ph, at) = orthonormality_defects(&dec);
            worst_ph = worst_ph.max(ph);
            worst_at = worst_at.max(at);

            let coarse = merged_top5(&red, 40, 41);
            let fine = merged_top5(&red, 60, 61);
            let drift = coarse
                .iter()
                .zip(&fine)
                .map(|(&c, &fv)| (c - fv).abs() / fv)
                .fold(0.0f64, f64::max);
            drift_detail.push_str(&format!(" {tag}/F={f}: {drift:.1e}"));
            worst_drift = worst_drift.max(drift);
        }
    }
    let pass = worst_rec < 1e-8 && worst_ph < 1e-10 && worst_at < 1e-10 && worst_drift < 1e-6;
    (
        pass,
        format!(
            "reconstruction {worst_rec:.1e} (<1e-8); orthonormality ph {worst_ph:.1e} / at \
             {worst_at:.1e} (<1e-10); spectrum drift (<1e-6):{drift_detail}"
        ),
    )
}

/// Multimode-vs-singlemode geometry, on the first converged spectra
/// (l_max=60, n_z=201, m ≤ 2): the second/first singular-value ratio at
/// F=10 exceeds the one at F=0.1 in both regimes; the F=0.1 spectra drop
/// below 0.5·ζ̃₀₀ by the second mode; the converged values are pinned as
/// regression constants.
fn criterion_8() -> (bool, String) {
    let frozen: [(&str, f64, [f64; 5]); 4] = [
        ("cold", 0.1, [0.638174237, 0.485948275, 0.430264412, 0.422570238, 0.390707552]),
        ("cold", 10.0, [1.102367793, 1.085731721, 1.070333354, 1.069588250, 1.055345427]),
        ("cell", 0.1, [0.722526299, 0.534946841, 0.533814436, 0.479905667, 0.477527831]),
        ("cell", 10.0, [0.990969777, 0.982053777, 0.973445696, 0.973250558, 0.964944089]),
    ];
    let mut ratios = std::collections::HashMap::new();
    let mut worst_reg = 0.0f64;
    let mut drops = String::new();
    let mut drop_ok = true;
    for (tag, regime, kappa) in both_regimes() {
        for f in [0.1, 10.0] {
            let red = ReducedGeometry::from_fresnel(f, regime, kappa).unwrap();
            let top = merged_top5(&red, 60, 201);
            let want = frozen
                .iter()
                .find(|(t, ff, _)| *t == tag && *ff == f)
                .map(|(_, _, v)| v)
                .unwrap();
            for (got, want) in top.iter().zip(want) {
                worst_reg = worst_reg.max(rel(*got, *want));
            }
            ratios.insert((tag, f.to_bits()), top[1] / top[0]);
            if f == 0.1 {
                let ok = top[1] < 0.5 * top[0];
                drop_ok &= ok;
                drops.push_str(&format!(
                    " {tag}: ζ̃₂nd/ζ̃₀₀ = {:.4} ({})",
                    top[1] / top[0],
                    if ok { "<0.5" } else { "≥0.5" }
                ));
            }
        }
    }
    let mut flat_ok = true;
    let mut flats = String::new();
    for (tag, _, _) in both_regimes() {
        let lo = ratios[&(tag, 0.1f64.to_bits())];
        let hi = ratios[&(tag, 10.0f64.to_bits())];
        flat_ok &= hi > lo;
        flats.push_str(&format!(" {tag}: {hi:.4} vs {lo:.4}"));
    }
    let reg_ok = worst_reg < 2e-9;
    let pass = flat_ok && drop_ok && reg_ok;
    (
        pass,
        format!(
            "ratio₂/₁ F=10 vs F=0.1:{flats}; F=0.1 drop:{drops}; frozen-value dev {worst_reg:.1e} \
             (<2e-9)"
        ),
    )
}

/// Oracle equivalence: τ=1e−4 covariance propagation reproduces the three
/// closed forms within 1e−3 relative over the (ζ, Γ) battery; convergence
/// order in τ within [0.8, 1.2]; lossless Bogoliubov defect < 1e−10.
fn criterion_9() -> (bool, String) {
    let t_grid = [0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0];
    let worst_for = |zeta: f64, gamma: f64, tau: f64| -> f64 {
        let p = TemporalParams::new(zeta, gamma).unwrap();
        let rec = propagate_covariance(&p, &t_grid, tau).unwrap();
        let mut worst = 0.0f64;
        for (i, &t) in t_grid.iter().enumerate() {
            worst = worst.max(rel(rec.occupation[i], corr_bb(&p, t, t)));
            for (j, &tp) in t_grid.iter().enumerate() {
                worst = worst.max(rel(rec.photon_flux[(i, j)], corr_aa(&p, t, tp)));
                worst = worst.max(rel(rec.spin[(i, j)], corr_bb(&p, t, tp)));
                if zeta > 0.0 {
                    worst = worst.max(rel(rec.cross[(i, j)], corr_ba(&p, t, tp)));
                }
            }
        }
        worst
    };

    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    for zeta in [0.5, 1.0, 2.0] {
        for gamma in [0.0, 0.25, 0.5, 1.0, 2.0] {
            let w = worst_for(zeta, gamma, 1e-4);
            if w > worst {
                worst = w;
                worst_at = format!("(ζ={zeta}, Γ={gamma})");
            }
        }
    }

    let errs: Vec<f64> = [1e-2, 1e-3, 1e-4].iter().map(|&tau| worst_for(1.0, 0.25, tau)).collect();
    let orders = [(errs[0] / errs[1]).log10(), (errs[1] / errs[2]).log10()];
    let orders_ok = orders.iter().all(|o| (0.8..=1.2).contains(o));

    let mut worst_defect = 0.0f64;
    for zeta in [0.5, 1.0, 2.0] {
        for tau in [1e-2, 1e-3] {
            for j in [50usize, 200] {
                worst_defect = worst_defect.max(bogoliubov_defect(zeta, tau, j));
            }
        }
    }
    let pass = worst < 1e-3 && orders_ok && worst_defect < 1e-10;
    (
        pass,
        format!(
            "closed-form dev {worst:.3e} at {worst_at} (<1e-3); orders {:.2}/{:.2} \
             ([0.8,1.2]); Bogoliubov defect {worst_defect:.1e} (<1e-10)",
            orders[0], orders[1]
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> (bool, String)); 9] = [
        ("1 optimal-weight reproduction", criterion_1),
        ("2 sub-projection noise", criterion_2),
        ("3 lossless bookkeeping", criterion_3),
        ("4 supercritical coherence", criterion_4),
        ("5 saturation vs growth", criterion_5),
        ("6 matrix-element oracle", criterion_6),
        ("7 SVD fidelity", criterion_7),
        ("8 multimode geometry", criterion_8),
        ("9 oracle equivalence", criterion_9),
    ];
    let mut failures = 0;
    for (label, run) in criteria {
        let (pass, detail) = run();
        println!("{} criterion {label}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            failures += 1;
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    std::process::exit(if failures > 0 { 1 } else { 0 });
}

//! Independent verification engines for the temporal closed forms.
//!
//! Two routes, deliberately different from the closed-form algebra:
//! discrete time slicing of the lossless gain (each length-cτ field slice
//! enters as fresh vacuum), and a second-moment covariance propagator for
//! the damped Langevin dynamics. Both must converge to the closed forms at
//! first order in τ — that convergence is tested, not assumed.
//!
//! Flux normalization: slice annihilators â_i carry a unit commutator, so
//! slice moments are dimensionless. Continuum flux densities are recovered
//! as ⟨â†â⟩/τ and ⟨b̂â⟩/√τ; recorded grids below are already rescaled.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::temporal::TemporalParams;

/// Exact slice-map coefficient arrays after j slices of length τ with gain
/// factor G = 1 + ζ²τ/2 per slice:
///   â_out_j = â_in_{j−1} + √τ·ζ·G^{j−1}·b̂₀† + τζ²·Σ_{i≤j−2} G^{j−i−2}·â_in_i,
///   b̂_j    = G^j·b̂₀ + √τ·ζ·Σ_{i≤j−1} G^{j−i−1}·â_in_i†.
#[derive(Debug, Clone)]
pub struct SliceCoefficients {
    /// coefficient of b̂₀† in â_out_j
    pub photon_from_b: f64,
    /// coefficient of â_in_i in â_out_j, i = 0..j−1 (the last entry is the
    /// unit pass-through of the slice's own input)
    pub photon_from_slice: Vec<f64>,
    /// coefficient of b̂₀ in b̂_j
    pub b_from_b: f64,
    /// coefficient of â_in_i† in b̂_j, i = 0..j−1
    pub b_from_slice: Vec<f64>,
}

pub fn slice_coefficients(zeta: f64, tau: f64, j: usize) -> SliceCoefficients {
    assert!(tau > 0.0 && j >= 1, "need tau > 0 and at least one slice");
    let gain = 1.0 + zeta * zeta * tau / 2.0;
    let couple = tau.sqrt() * zeta;
    let mut photon_from_slice = vec![0.0; j];
    let mut b_from_slice = vec![0.0; j];
    for i in 0..j {
        b_from_slice[i] = couple * gain.powi((j - i - 1) as i32);
        photon_from_slice[i] = if i == j - 1 {
            1.0
        } else {
            tau * zeta * zeta * gain.powi((j - i - 2) as i32)
        };
    }
    SliceCoefficients {
        photon_from_b: couple * gain.powi((j - 1) as i32),
        photon_from_slice,
        b_from_b: gain.powi(j as i32),
        b_from_slice,
    }
}

/// Max-norm deviation of M·J·M† from J for the assembled j-slice map, where
/// J = diag(+1, −1, …) is the commutator metric over the ordered basis
/// (b̂₀, b̂₀†, â_0, â_0†, …, â_{j−1}, â_{j−1}†).
///
/// Each slice is composed as an exact two-mode squeezer with cosh r = G
/// (so the b̂₀ chain reproduces G^j exactly) and sinh r = √(G²−1); the
/// composition of exact squeezers preserves J to roundoff for any (ζ, τ, j).
pub fn bogoliubov_defect(zeta: f64, tau: f64, j: usize) -> f64 {
    assembled_defect(zeta, 0.0, tau, j)
}

/// Test hook: the same assembly with per-slice amplitude damping (1 − Γτ)
/// applied to b̂ and **no** compensating noise injection. The commutator
/// metric then decays as (1 − Γτ)^{2j} on the spin-wave block — the defect
/// grows by ≈ 2Γτ per slice, which is exactly the deficit the Langevin
/// noise term restores.
pub fn bogoliubov_defect_damped(zeta: f64, gamma_loss: f64, tau: f64, j: usize) -> f64 {
    assembled_defect(zeta, gamma_loss, tau, j)
}

fn assembled_defect(zeta: f64, gamma_loss: f64, tau: f64, j: usize) -> f64 {
    assert!(tau > 0.0 && j >= 1, "need tau > 0 and at least one slice");
    let dim = 2 + 2 * j;
    let gain = 1.0 + zeta * zeta * tau / 2.0;
    let couple = (gain * gain - 1.0).sqrt();
    let damp = 1.0 - gamma_loss * tau;
    // rows express output operators over the input basis; the b̂ row starts
    // as the identity on b̂₀ and the â_out rows freeze as slices complete
    let mut map = DMatrix::<f64>::zeros(dim, dim);
    let mut b_row = vec![0.0; dim];
    b_row[0] = 1.0;
    let swap = |row: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; row.len()];
        for pair in 0..row.len() / 2 {
            out[2 * pair] = row[2 * pair + 1];
            out[2 * pair + 1] = row[2 * pair];
        }
        out
    };
    for k in 0..j {
        let a_idx = 2 + 2 * k;
        let b_conj = swap(&b_row);
        for c in 0..dim {
            map[(a_idx, c)] = couple * b_conj[c];
        }
        map[(a_idx, a_idx)] += gain;
        for (c, coef) in b_row.iter_mut().enumerate() {
            *coef *= gain;
            if c == a_idx + 1 {
                *coef += couple;
            }
        }
        for coef in b_row.iter_mut() {
            *coef *= damp;
        }
    }
    for c in 0..dim {
        map[(0, c)] = b_row[c];
    }
    let b_conj = swap(&b_row);
    for c in 0..dim {
        map[(1, c)] = b_conj[c];
    }
    for k in 0..j {
        let a_idx = 2 + 2 * k;
        let row: Vec<f64> = (0..dim).map(|c| map[(a_idx, c)]).collect();
        let conj = swap(&row);
        for c in 0..dim {
            map[(a_idx + 1, c)] = conj[c];
        }
    }
    // J on creators flips sign; with real entries M† is just the transpose,
    // so defect = max |Σ_c M_rc J_cc M_sc − J_rs|
    let metric = |idx: usize| -> f64 { if idx % 2 == 0 { 1.0 } else { -1.0 } };
    let mut defect = 0.0f64;
    for r in 0..dim {
        for s in r..dim {
            let mut entry = 0.0;
            for c in 0..dim {
                entry += map[(r, c)] * metric(c) * map[(s, c)];
            }
            let want = if r == s { metric(r) } else { 0.0 };
            defect = defect.max((entry - want).abs());
        }
    }
    defect
}

/// State of the covariance propagation: mean spin-wave number, slice-moment
/// grid among the recorded output slices, and the spin-photon cross vector.
/// All slice moments are in unit-commutator (dimensionless) normalization.
#[derive(Debug, Clone)]
pub struct SliceState {
    pub n_slices: usize,
    pub tau: f64,
    /// ⟨b̂†b̂⟩ at the current time
    pub occupation: f64,
    /// ⟨â_e† â_e′⟩ among recorded output slices
    pub photon: DMatrix<f64>,
    /// ⟨b̂ â_e⟩ between the current spin wave and recorded slices
    pub cross: Vec<f64>,
}

impl SliceState {
    /// Diagonal moments must be occupations; off-diagonals obey
    /// Cauchy-Schwarz: |⟨b̂â⟩|² ≤ (⟨b̂†b̂⟩+1)·⟨â†â⟩ and
    /// |⟨â_e†â_e′⟩|² ≤ ⟨â_e†â_e⟩⟨â_e′†â_e′⟩.
    ///
    /// Without damping the photon grid is rank-one and saturates the bound,
    /// so first-order slicing error overshoots it by O(τ); `rel_slack` is
    /// the caller's allowance for that (≈10× the expected slicing error).
    pub fn check_physical(&self, rel_slack: f64) -> Result<()> {
        if self.occupation < -rel_slack {
            return Err(Error::numerical(format!(
                "negative spin occupation {}",
                self.occupation
            )));
        }
        let e = self.photon.nrows();
        for i in 0..e {
            if self.photon[(i, i)] < -rel_slack {
                return Err(Error::numerical(format!(
                    "negative slice occupation {}",
                    self.photon[(i, i)]
                )));
            }
            for jj in 0..e {
                let bound = self.photon[(i, i)] * self.photon[(jj, jj)];
                if self.photon[(i, jj)].powi(2) > bound * (1.0 + rel_slack) {
                    return Err(Error::numerical("photon moment violates Cauchy-Schwarz"));
                }
            }
            let bound = (self.occupation + 1.0) * self.photon[(i, i)];
            if self.cross[i].powi(2) > bound * (1.0 + rel_slack) {
                return Err(Error::numerical("cross moment violates Cauchy-Schwarz"));
            }
        }
        Ok(())
    }
}

/// Two-time correlation grids sampled on `t_grid`, flux-normalized:
/// `photon_flux[i][j]` ≈ ⟨â†(t_i)â(t_j)⟩ (slice moment / τ),
/// `cross[i][j]` ≈ ⟨b̂(t_i)â(t_j)⟩ (slice moment / √τ),
/// `spin[i][j]` ≈ ⟨b̂†(t_i)b̂(t_j)⟩, `occupation[i]` = ⟨b̂†b̂⟩(t_i).
#[derive(Debug, Clone)]
pub struct CorrelationRecords {
    pub t_grid: Vec<f64>,
    pub tau: f64,
    pub occupation: Vec<f64>,
    pub photon_flux: DMatrix<f64>,
    pub spin: DMatrix<f64>,
    pub cross: DMatrix<f64>,
    /// final slice-normalized state, for physicality checks
    pub final_state: SliceState,
}

impl CorrelationRecords {
    /// Gram matrix of the operator family {b̂(t_i)} ∪ {â_e†} in slice
    /// normalization: [[⟨b̂†b̂⟩, ⟨b̂†â†⟩], [⟨âb̂⟩, ⟨ââ†⟩]]. Positive
    /// semidefinite for any physical state — the squeezing sector enters
    /// through ⟨ââ†⟩ = ⟨â†â⟩ + 1.
    pub fn physicality_gram(&self) -> DMatrix<f64> {
        let g = self.t_grid.len();
        let sq = self.tau.sqrt();
        DMatrix::from_fn(2 * g, 2 * g, |r, c| {
            let (i, bi) = (r % g, r < g);
            let (j, bj) = (c % g, c < g);
            match (bi, bj) {
                (true, true) => self.spin[(i, j)],
                (true, false) => self.cross[(i, j)] * sq,
                (false, true) => self.cross[(j, i)] * sq,
                (false, false) => {
                    self.photon_flux[(i, j)] * self.tau + if i == j { 1.0 } else { 0.0 }
                }
            }
        })
    }
}

/// Evolves the second moments slice by slice: per slice of length τ the
/// spin wave gains g = 1 + ζ²τ/2, couples by √τ·ζ to the fresh vacuum
/// input, damps by (1 − Γτ), and receives the Langevin noise moment 2Γτ
/// built into d²(g²n + τζ²) → n via the vacuum input. Output-slice moments
/// are recorded when the step count crosses each grid time.
pub fn propagate_covariance(
    p: &TemporalParams,
    t_grid: &[f64],
    tau: f64,
) -> Result<CorrelationRecords> {
    if t_grid.is_empty() {
        return Err(Error::invalid("empty time grid".to_string()));
    }
    if t_grid[0] <= 0.0 || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("grid times must be positive and increasing".to_string()));
    }
    if !(tau > 0.0) {
        return Err(Error::invalid(format!("slice length must be positive, got {tau}")));
    }
    let min_spacing = t_grid
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(t_grid[0], f64::min);
    if tau > min_spacing / 10.0 {
        return Err(Error::invalid(format!(
            "slice length {tau} exceeds a tenth of the closest grid spacing {min_spacing}"
        )));
    }
    let zeta = p.zeta();
    let gamma = p.gamma_loss();
    if gamma * tau > 0.1 {
        return Err(Error::UnstableStep(format!(
            "damping per slice Γτ = {} exceeds 0.1; the Euler update is unreliable there",
            gamma * tau
        )));
    }

    let g_count = t_grid.len();
    let gain = 1.0 + zeta * zeta * tau / 2.0;
    let damp = 1.0 - gamma * tau;
    let couple = tau.sqrt() * zeta;

    let n_steps: usize = (t_grid[g_count - 1] / tau).round() as usize;
    let rec_steps: Vec<usize> = t_grid.iter().map(|&t| (t / tau).round() as usize).collect();

    let mut n = 0.0f64;
    let mut cross_now = vec![0.0f64; g_count]; // ⟨b̂ â_e⟩, evolving
    let mut spin_snap = vec![0.0f64; g_count]; // ⟨b̂_s† b̂⟩ against frozen snapshots
    let mut snap_propagator = vec![0.0f64; g_count]; // commutator carried since snapshot s

    let mut occupation = vec![0.0f64; g_count];
    let mut photon = DMatrix::<f64>::zeros(g_count, g_count);
    let mut spin = DMatrix::<f64>::zeros(g_count, g_count);
    let mut cross = DMatrix::<f64>::zeros(g_count, g_count);

    let mut rec = 0usize;
    for k in 0..=n_steps {
        if rec < g_count && k == rec_steps[rec] {
            let e = rec;
            occupation[e] = n;
            photon[(e, e)] = tau * zeta * zeta * (n + 1.0);
            for ep in 0..e {
                let m = couple * cross_now[ep];
                photon[(ep, e)] = m;
                photon[(e, ep)] = m;
            }
            spin[(e, e)] = n;
            for s in 0..e {
                spin[(s, e)] = spin_snap[s];
                spin[(e, s)] = spin_snap[s];
                // the later output slice sees both the surviving cross moment
                // and the commutator carried forward from the snapshot time
                cross[(s, e)] = couple * (spin_snap[s] + snap_propagator[s]);
            }
            for ep in 0..e {
                cross[(e, ep)] = cross_now[ep];
            }
            cross[(e, e)] = couple * (n + 1.0);
            spin_snap[e] = n;
            snap_propagator[e] = 1.0;
            cross_now[e] = couple * (n + 1.0);
            rec += 1;
        }
        if k == n_steps {
            break;
        }
        for idx in 0..rec {
            cross_now[idx] *= damp * gain;
            spin_snap[idx] *= damp * gain;
            snap_propagator[idx] *= damp * gain;
        }
        n = damp * damp * (gain * gain * n + tau * zeta * zeta);
    }

    let final_state = SliceState {
        n_slices: n_steps,
        tau,
        occupation: n,
        photon: photon.clone(),
        cross: cross_now,
    };
    Ok(CorrelationRecords {
        t_grid: t_grid.to_vec(),
        tau,
        occupation,
        photon_flux: photon / tau,
        spin,
        cross: cross / tau.sqrt(),
        final_state,
    })
}

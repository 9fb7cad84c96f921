//! A priori predictions for filtered and unfiltered packet evolutions: how a
//! carrier wavenumber folds under coarse subsampling, which spectral picks
//! survive with which weights, and how each resulting packet moves, spreads
//! and decays.
//!
//! Subsampling by `2^k` folds the spectrum onto a window of width `2*pi/2^k`;
//! a single carrier therefore reappears as up to `2^k` picks spaced
//! `2*pi/2^k` apart, each weighted by the interpolation weight at its own
//! wavenumber (squared when projecting by averaging). A pick at normalized
//! wavenumber `eta` moves with velocity `-q'(eta)/h = -2 sin(eta)/h`, its
//! support grows like `(1/gamma + t^2 gamma q''(eta)^2)^(1/2)` and its
//! amplitude decays like `(1 + t^2 gamma^2 q''(eta)^2)^(-1/4)`.

use crate::bigrid::{weight, Projection};
use crate::dispersion::wrap_to_pi;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Tolerance for classifying a carrier onto a fold boundary, in normalized
/// wavenumber units.
const FOLD_TOL: f64 = 1e-12;

/// Structural class of a (filtered) carrier wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseKind {
    /// No filtering: the datum keeps its single carrier.
    Unfiltered,
    /// Carrier at the Brillouin edge `eta0 = pi`; it folds onto the origin
    /// and the surviving packet neither oscillates nor propagates.
    EdgeAligned,
    /// Carrier on the coarse alias lattice (`eta0* = 0`, `eta0 != pi`); same
    /// pick structure as the edge case.
    LatticeAligned,
    /// Carrier mid-way between alias lattice points (`eta0` an odd multiple
    /// of `pi/2^k`); picks appear at all odd multiples and the left- and
    /// right-moving families contain equal-velocity pairs.
    HalfLattice,
    /// Any other carrier: `2^k` picks at `eta0* + 2l*pi/2^k`.
    Generic,
}

/// Classification of a scenario's carrier, with the folded wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CaseLabel {
    pub kind: CaseKind,
    /// Whether the averaging projection composes on top (it rescales every
    /// pick weight to its square).
    pub averaged: bool,
    /// Carrier folded into `(-pi/2^k, pi/2^k]`.
    pub eta0_star: f64,
    /// Fold count: `eta0 = eta0_star + 2*l_star*pi/2^k`.
    pub l_star: i64,
}

/// Folds `eta0` into `(-step/2, step/2]` with `step = 2*pi/2^k`.
fn fold(eta0: f64, k: u32) -> (f64, i64) {
    let step = 2.0 * PI / (1u64 << k) as f64;
    let mut l = (eta0 / step).round() as i64;
    let mut star = eta0 - l as f64 * step;
    if star <= -0.5 * step + FOLD_TOL {
        l -= 1;
        star += step;
    }
    (star, l)
}

/// Classifies a carrier under bigrid filtering with mesh ratio `2^k`.
/// `k = 0` or no projection means the datum is evolved unfiltered.
pub fn classify(eta0: f64, k: u32, projection: Option<Projection>) -> CaseLabel {
    let averaged = projection == Some(Projection::Average);
    if k == 0 || projection.is_none() {
        return CaseLabel {
            kind: CaseKind::Unfiltered,
            averaged: false,
            eta0_star: eta0,
            l_star: 0,
        };
    }
    let (star, l_star) = fold(eta0, k);
    let half_step = PI / (1u64 << k) as f64;
    let kind = if star.abs() <= FOLD_TOL {
        if (eta0 - PI).abs() <= FOLD_TOL {
            CaseKind::EdgeAligned
        } else {
            CaseKind::LatticeAligned
        }
    } else if (star.abs() - half_step).abs() <= FOLD_TOL {
        CaseKind::HalfLattice
    } else {
        CaseKind::Generic
    };
    CaseLabel {
        kind,
        averaged,
        eta0_star: star,
        l_star,
    }
}

/// Prediction for one spectral pick of a (filtered) packet datum.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PacketPrediction {
    /// Normalized pick wavenumber in `(-pi, pi]` (`[-pi, pi]` for the
    /// continuous edge pair, whose halves are genuinely distinct).
    pub pick_eta: f64,
    /// `-q'(pick)/h`, in x per unit time.
    pub velocity: f64,
    /// Interpolation weight at the pick: `b_k(pick)` for restriction,
    /// `b_k(eta0) * b_k(pick)` for averaging (the averaging projection
    /// weights the source carrier, the extension weights each alias), `1`
    /// unfiltered. Zero-weight picks are reported rather than dropped;
    /// downstream tooling filters by a threshold.
    pub amplitude_factor: f64,
    /// Concentration parameter driving the width/amplitude laws.
    pub gamma_eff: f64,
    /// `q''(pick)` in normalized units.
    pub q2: f64,
    /// Endpoint constant of the amplitude law: 1/2 when the carrier sits on
    /// a truncation endpoint and only half of its pick survives, else 1.
    pub decay_constant: f64,
}

fn semidiscrete_prediction(pick: f64, factor: f64, gamma: f64, h: f64, c: f64) -> PacketPrediction {
    PacketPrediction {
        pick_eta: pick,
        velocity: -2.0 * pick.sin() / h,
        amplitude_factor: factor,
        gamma_eff: gamma,
        q2: 2.0 * pick.cos(),
        decay_constant: c,
    }
}

/// Predicts the packets of the semi-discrete evolution of the full-band
/// datum with carrier `eta0` (the two-half-pick edge datum when
/// `eta0 = pi`), filtered at level `k` with the given projection. One
/// prediction per pick, sorted by pick wavenumber; weights of exactly zero
/// are kept.
pub fn predict_packets(
    eta0: f64,
    k: u32,
    projection: Option<Projection>,
    gamma: f64,
    h: f64,
) -> Vec<PacketPrediction> {
    let label = classify(eta0, k, projection);
    let factor_at = |pick: f64| -> f64 {
        let b = weight(k.max(1), pick);
        if label.averaged {
            weight(k.max(1), eta0) * b
        } else {
            b
        }
    };
    let mut preds = Vec::new();
    match label.kind {
        CaseKind::Unfiltered => {
            // At the edge the two half-picks share one carrier and stay
            // superposed (zero group velocity): one full-amplitude packet.
            preds.push(semidiscrete_prediction(eta0, 1.0, gamma, h, 1.0));
        }
        CaseKind::EdgeAligned | CaseKind::LatticeAligned => {
            let n = 1i64 << k;
            let step = 2.0 * PI / n as f64;
            for l in (-n / 2 + 1)..(n / 2) {
                let pick = l as f64 * step;
                preds.push(semidiscrete_prediction(
                    pick,
                    factor_at(pick),
                    gamma,
                    h,
                    1.0,
                ));
            }
            preds.push(semidiscrete_prediction(PI, factor_at(PI), gamma, h, 1.0));
        }
        CaseKind::HalfLattice => {
            let n = 1i64 << k;
            let step = 2.0 * PI / n as f64;
            for l in (-n / 2)..(n / 2) {
                let pick = (l as f64 + 0.5) * step;
                preds.push(semidiscrete_prediction(
                    pick,
                    factor_at(pick),
                    gamma,
                    h,
                    1.0,
                ));
            }
        }
        CaseKind::Generic => {
            let n = 1i64 << k;
            let step = 2.0 * PI / n as f64;
            let s: i64 = if label.eta0_star > 0.0 { 1 } else { 0 };
            for l in (-n / 2 + 1 - s)..=(n / 2 - s) {
                let pick = label.eta0_star + l as f64 * step;
                preds.push(semidiscrete_prediction(
                    pick,
                    factor_at(pick),
                    gamma,
                    h,
                    1.0,
                ));
            }
        }
    }
    preds.sort_by(|a, b| a.pick_eta.partial_cmp(&b.pick_eta).unwrap());
    preds
}

/// Predicts the packets of the continuous evolution of the same data. The
/// edge datum genuinely splits into two half-amplitude packets racing apart
/// at `+-2*pi/h`; an interior carrier gives a single packet of velocity
/// `-2*eta0/h`.
pub fn predict_packets_continuous(eta0: f64, gamma: f64, h: f64) -> Vec<PacketPrediction> {
    let continuous = |pick: f64, c: f64| PacketPrediction {
        pick_eta: pick,
        velocity: -2.0 * pick / h,
        amplitude_factor: 1.0,
        gamma_eff: gamma,
        q2: 2.0,
        decay_constant: c,
    };
    if (eta0 - PI).abs() <= FOLD_TOL {
        vec![continuous(-PI, 0.5), continuous(PI, 0.5)]
    } else {
        vec![continuous(eta0, 1.0)]
    }
}

/// Predicted trajectory data of one packet at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Trajectory {
    /// `x* + velocity * t`.
    pub centroid: f64,
    /// Support width `(1/gamma + t^2 gamma q2^2)^(1/2)`; the mass-weighted
    /// standard deviation of a Gaussian packet is this over `sqrt(2)`.
    pub width: f64,
    /// `decay_constant * amplitude_factor * (1 + t^2 gamma^2 q2^2)^(-1/4)`,
    /// relative to a unit-amplitude unfiltered packet.
    pub amplitude: f64,
}

pub fn predict_trajectory(pred: &PacketPrediction, t: f64, x_star: f64) -> Trajectory {
    let g = pred.gamma_eff;
    let spread = t * t * pred.q2 * pred.q2;
    Trajectory {
        centroid: x_star + pred.velocity * t,
        width: (1.0 / g + g * spread).sqrt(),
        amplitude: pred.decay_constant * pred.amplitude_factor * (1.0 + g * g * spread).powf(-0.25),
    }
}

/// Velocity structure of a prediction set: antisymmetric pairs moving apart
/// at equal speed, and equal-velocity pairs that stay superposed.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct VelocityOrder {
    /// Index pairs `(i, j)` with `v_i = -v_j != 0`.
    pub antisymmetric_pairs: Vec<(usize, usize)>,
    /// Index pairs `(i, j)`, distinct picks, with `v_i = v_j` (these packets
    /// collapse onto each other for every `t > 0`).
    pub collapse_pairs: Vec<(usize, usize)>,
    /// Prediction indices sorted by velocity.
    pub ascending: Vec<usize>,
}

/// Verifies the pairing relations the splitting structure imposes on the
/// predicted velocities and returns them. A violation indicates an internal
/// inconsistency in the prediction set, not bad data.
pub fn velocity_order_check(
    preds: &[PacketPrediction],
    label: &CaseLabel,
) -> Result<VelocityOrder> {
    let vmax = preds
        .iter()
        .map(|p| p.velocity.abs())
        .fold(0.0f64, f64::max);
    let tol = 1e-9 * vmax.max(1.0);

    let mut antisymmetric_pairs = Vec::new();
    let mut collapse_pairs = Vec::new();
    for i in 0..preds.len() {
        for j in (i + 1)..preds.len() {
            let vi = preds[i].velocity;
            let vj = preds[j].velocity;
            if (vi + vj).abs() <= tol && vi.abs() > tol {
                antisymmetric_pairs.push((i, j));
            }
            if (vi - vj).abs() <= tol
                && wrap_to_pi(preds[i].pick_eta - preds[j].pick_eta).abs() > FOLD_TOL
            {
                collapse_pairs.push((i, j));
            }
        }
    }

    let mut ascending: Vec<usize> = (0..preds.len()).collect();
    ascending.sort_by(|&a, &b| preds[a].velocity.partial_cmp(&preds[b].velocity).unwrap());

    let n_pairs_expected = match label.kind {
        CaseKind::Generic => (preds.len() / 2) as i64,
        CaseKind::HalfLattice => (preds.len() / 2) as i64,
        _ => 0,
    };
    if matches!(label.kind, CaseKind::Generic | CaseKind::HalfLattice)
        && (antisymmetric_pairs.len() as i64) < n_pairs_expected
    {
        return Err(Error::Analysis(format!(
            "expected {} antisymmetric velocity pairs, found {}",
            n_pairs_expected,
            antisymmetric_pairs.len()
        )));
    }
    if label.kind == CaseKind::HalfLattice {
        // 2^(k-1) same-direction movers pair into 2^(k-2) collapsing pairs
        let expected = preds.len() / 4;
        let same_side = collapse_pairs.len() / 2;
        if same_side != expected {
            return Err(Error::Analysis(format!(
                "expected {expected} collapsing pairs per direction, found {same_side}"
            )));
        }
    }
    Ok(VelocityOrder {
        antisymmetric_pairs,
        collapse_pairs,
        ascending,
    })
}

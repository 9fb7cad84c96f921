//! Measurement: packet metrics, band decomposition, space-time integrability
//! functionals and remainder-ratio traces.
//!
//! The Strichartz functional is the discrete mixed norm
//! `(dt * sum_n ||u(t_n)||_lp^q)^(1/q)` over uniform time samples, reported
//! as a ratio against the l2 norm of the initial datum; admissible pairs
//! satisfy `2/q = 1/2 - 1/p`. The local-smoothing functional applies the
//! discrete half derivative and scans a finite set of radii in place of the
//! supremum over all `R > 0`; both are used only as ratios across mesh
//! refinements, where the quadrature error cancels to first order.

use crate::dispersion::{wrap_to_pi, DispersionRelation};
use crate::error::{Error, Result};
use crate::evolution::{fractional_derivative, propagate, remainder_split};
use crate::grid::{isdft, PhysicalField, SpectralField};
use num_complex::Complex64;
use serde::Serializer;

/// Mass-weighted summary of a single packet.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PacketMetrics {
    /// `h * sum |u_j|^2`.
    pub mass: f64,
    /// Mass-weighted mean position.
    pub centroid: f64,
    /// Square root of the mass-weighted variance about the centroid.
    pub width: f64,
    /// `max_j |u_j|`.
    pub peak_amp: f64,
    /// Position of the maximizing node (first one on ties).
    pub peak_pos: f64,
}

/// Computes the metrics of a nonzero field. Positions enter linearly, so the
/// field should not straddle the periodic window edge.
pub fn packet_metrics(u: &PhysicalField) -> Result<PacketMetrics> {
    let h = u.grid().h();
    let mass: f64 = h * u.values().iter().map(|z| z.norm_sqr()).sum::<f64>();
    if !(mass > 0.0) {
        return Err(Error::Analysis(
            "metrics of an identically zero field are undefined".into(),
        ));
    }
    let mut first = 0.0;
    let mut peak_amp = 0.0;
    let mut peak_pos = 0.0;
    for (j, z) in u.values().iter().enumerate() {
        let x = u.grid().node(j);
        first += x * z.norm_sqr();
        let a = z.norm();
        if a > peak_amp {
            peak_amp = a;
            peak_pos = x;
        }
    }
    let centroid = h * first / mass;
    let mut second = 0.0;
    for (j, z) in u.values().iter().enumerate() {
        let d = u.grid().node(j) - centroid;
        second += d * d * z.norm_sqr();
    }
    let width = (h * second / mass).sqrt();
    Ok(PacketMetrics {
        mass,
        centroid,
        width,
        peak_amp,
        peak_pos,
    })
}

/// Splits a spectrum into the packets sitting in disjoint normalized bands
/// `[pick - half_width, pick + half_width)` (circular, half-open) and
/// synthesizes each. With bands covering the spectral support the outputs
/// sum back to the full field.
pub fn band_decompose(
    f: &SpectralField,
    picks: &[f64],
    half_width: f64,
) -> Result<Vec<(f64, PhysicalField)>> {
    if picks.is_empty() {
        return Ok(Vec::new());
    }
    if !(half_width > 0.0) || half_width > std::f64::consts::PI {
        return Err(Error::Analysis(format!(
            "band half-width must lie in (0, pi], got {half_width}"
        )));
    }
    for (i, a) in picks.iter().enumerate() {
        for b in picks.iter().skip(i + 1) {
            let dist = wrap_to_pi(a - b).abs();
            if dist + 1e-12 < 2.0 * half_width {
                return Err(Error::Analysis(format!(
                    "bands at {a} and {b} overlap (distance {dist}, width {})",
                    2.0 * half_width
                )));
            }
        }
    }
    let grid = f.grid();
    picks
        .iter()
        .map(|&pick| {
            let coeffs: Vec<Complex64> = f
                .coeffs()
                .iter()
                .enumerate()
                .map(|(m, c)| {
                    let delta = wrap_to_pi(grid.eta(m) - pick);
                    if (-half_width..half_width).contains(&delta) {
                        *c
                    } else {
                        Complex64::default()
                    }
                })
                .collect();
            Ok((pick, isdft(&SpectralField::new(grid, coeffs)?)))
        })
        .collect()
}

/// Report of a space-time norm measurement.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct NormReport {
    pub p: f64,
    #[serde(serialize_with = "serialize_maybe_infinite")]
    pub q: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub n_samples: usize,
    /// The mixed `L^q_t l^p_x` norm, when measured.
    pub value: Option<f64>,
    /// `value / ||phi||_l2` for the mixed norm; `smoothing_value / ||phi||_l2^2`
    /// for the local-smoothing functional.
    pub ratio: f64,
    /// Radii scanned by the local-smoothing functional.
    pub radii: Option<Vec<f64>>,
    /// Max over radii of the time-averaged local half-derivative energy.
    pub smoothing_value: Option<f64>,
    pub h: f64,
    /// Filled by callers that know the experiment context.
    pub gamma: Option<f64>,
    pub scenario_id: Option<String>,
}

fn serialize_maybe_infinite<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}

/// Companion exponent of an admissible pair: `2/q = 1/2 - 1/p`, with
/// `p = 2 -> q = inf`.
pub fn admissible_q(p: f64) -> Result<f64> {
    if !(2.0..=f64::INFINITY).contains(&p) {
        return Err(Error::Analysis(format!(
            "inadmissible exponent p = {p}, need p >= 2"
        )));
    }
    if p == 2.0 {
        Ok(f64::INFINITY)
    } else if p.is_infinite() {
        Ok(4.0)
    } else {
        Ok(4.0 * p / (p - 2.0))
    }
}

fn check_time_params(t_final: f64, n_samples: usize) -> Result<()> {
    if !(t_final > 0.0) {
        return Err(Error::Analysis(format!(
            "time window must be positive, got {t_final}"
        )));
    }
    if n_samples < 16 {
        return Err(Error::Analysis(format!(
            "need at least 16 time samples, got {n_samples}"
        )));
    }
    Ok(())
}

/// Measures `||u||_{L^q_t l^p_x}` over `[0, T]` by the rectangle rule on
/// `n_samples` uniform samples; `q = inf` (the `p = 2` case) becomes a max
/// over samples.
pub fn strichartz_norm(
    f0: &SpectralField,
    s: &impl DispersionRelation,
    p: f64,
    t_final: f64,
    n_samples: usize,
) -> Result<NormReport> {
    let q = admissible_q(p)?;
    check_time_params(t_final, n_samples)?;
    let dt = t_final / n_samples as f64;
    let mut acc: f64 = 0.0;
    let mut sup: f64 = 0.0;
    for n in 0..n_samples {
        let u = isdft(&propagate(f0, s, n as f64 * dt));
        let lp = u.norm_lp(p);
        if q.is_infinite() {
            sup = sup.max(lp);
        } else {
            acc += lp.powf(q);
        }
    }
    let value = if q.is_infinite() {
        sup
    } else {
        (dt * acc).powf(1.0 / q)
    };
    let datum_l2 = f0.norm_l2();
    Ok(NormReport {
        p,
        q,
        t_final,
        n_samples,
        value: Some(value),
        ratio: value / datum_l2,
        radii: None,
        smoothing_value: None,
        h: f0.grid().h(),
        gamma: None,
        scenario_id: None,
    })
}

/// The local-smoothing functional
/// `max_R (1/R) * dt * sum_n h * sum_{|x_j| <= R} |(d_h^{1/2} u)(x_j, t_n)|^2`,
/// reported as a ratio against `||phi||_l2^2`. The scanned radii replace the
/// supremum over all `R > 0` and are recorded in the report.
pub fn local_smoothing(
    f0: &SpectralField,
    s: &impl DispersionRelation,
    radii: &[f64],
    t_final: f64,
    n_samples: usize,
) -> Result<NormReport> {
    if radii.is_empty() {
        return Err(Error::Analysis("radius set must not be empty".into()));
    }
    let half_window = 0.5 * f0.grid().length();
    for &r in radii {
        if !(r > 0.0) || r > half_window + 1e-12 {
            return Err(Error::Analysis(format!(
                "radius {r} outside (0, L/2] with L/2 = {half_window}"
            )));
        }
    }
    check_time_params(t_final, n_samples)?;

    let grid = f0.grid();
    let h = grid.h();
    let dt = t_final / n_samples as f64;
    let mut integrals = vec![0.0f64; radii.len()];
    for n in 0..n_samples {
        let g = isdft(&fractional_derivative(
            &propagate(f0, s, n as f64 * dt),
            0.5,
        ));
        for (ri, &r) in radii.iter().enumerate() {
            let local: f64 = g
                .values()
                .iter()
                .enumerate()
                .filter(|(j, _)| grid.node(*j).abs() <= r)
                .map(|(_, z)| z.norm_sqr())
                .sum();
            integrals[ri] += dt * h * local;
        }
    }
    let smoothing_value = radii
        .iter()
        .zip(&integrals)
        .map(|(&r, &i)| i / r)
        .fold(0.0f64, f64::max);
    let datum_l2 = f0.norm_l2();
    Ok(NormReport {
        p: 2.0,
        q: f64::INFINITY,
        t_final,
        n_samples,
        value: None,
        ratio: smoothing_value / (datum_l2 * datum_l2),
        radii: Some(radii.to_vec()),
        smoothing_value: Some(smoothing_value),
        h,
        gamma: None,
        scenario_id: None,
    })
}

/// Per-time ratio `||remainder||_l2^2 / ||full||_l2` of the quadratic-model
/// split about `eta0`. Times must be sorted and nonnegative.
pub fn remainder_trace(f0: &SpectralField, eta0: f64, times: &[f64]) -> Vec<(f64, f64)> {
    assert!(
        times.windows(2).all(|w| w[0] <= w[1]) && times.iter().all(|&t| t >= 0.0),
        "times must be sorted and nonnegative"
    );
    times
        .iter()
        .map(|&t| {
            let split = remainder_split(f0, eta0, t);
            let v = split.remainder.norm_l2();
            (t, v * v / split.full.norm_l2())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::Symbol;
    use crate::grid::Grid;
    use crate::wavepacket::{default_gamma, make_special_data, SpecialData};
    use std::f64::consts::PI;

    #[test]
    fn point_mass_metrics() {
        let grid = Grid::new(1.0, 16, true).unwrap();
        let mut v = vec![Complex64::default(); 16];
        v[grid.m() / 2] = Complex64::new(3.0, 0.0); // node at x = 0
        let m = packet_metrics(&PhysicalField::new(grid, v).unwrap()).unwrap();
        assert_eq!(m.centroid, 0.0);
        assert_eq!(m.width, 0.0);
        assert_eq!(m.peak_pos, 0.0);
        assert_eq!(m.peak_amp, 3.0);
    }

    #[test]
    fn zero_field_is_rejected() {
        let grid = Grid::new(1.0, 16, true).unwrap();
        assert!(packet_metrics(&PhysicalField::zeros(grid)).is_err());
    }

    #[test]
    fn sampled_gaussian_width() {
        // |u|^2 = exp(-gamma x^2) has variance 1/(2 gamma)
        let grid = Grid::new(0.01, 2048, true).unwrap();
        let gamma = 4.0;
        let v = (0..grid.m())
            .map(|j| Complex64::new((-0.5 * gamma * grid.node(j).powi(2)).exp(), 0.0))
            .collect();
        let m = packet_metrics(&PhysicalField::new(grid, v).unwrap()).unwrap();
        let want = 1.0 / (2.0 * 2f64.sqrt());
        assert!((m.width - want).abs() < 0.01 * want);
        assert!(m.centroid.abs() < 1e-10);
    }

    #[test]
    fn translation_shifts_centroid_only() {
        let grid = Grid::new(0.05, 512, true).unwrap();
        let bump = |x: f64| Complex64::new((-8.0 * x * x).exp(), 0.0);
        let a = PhysicalField::new(grid, (0..512).map(|j| bump(grid.node(j))).collect()).unwrap();
        let shift = 40; // 2.0 in x units
        let b =
            PhysicalField::new(grid, (0..512).map(|j| bump(grid.node(j) - 2.0)).collect()).unwrap();
        let ma = packet_metrics(&a).unwrap();
        let mb = packet_metrics(&b).unwrap();
        assert!((mb.centroid - ma.centroid - shift as f64 * grid.h()).abs() < 1e-10);
        assert!((mb.width - ma.width).abs() < 1e-10);
    }

    #[test]
    fn empty_picks_and_single_band() {
        let grid = Grid::new(2.0 * PI / 64.0, 512, true).unwrap();
        let gamma = default_gamma(grid.h());
        let f = make_special_data(SpecialData::Centered(PI / 3.0), gamma, &grid).unwrap();
        assert!(band_decompose(&f, &[], 0.5).unwrap().is_empty());

        let parts = band_decompose(&f, &[PI / 3.0], PI / 2.0).unwrap();
        assert_eq!(parts.len(), 1);
        let full = isdft(&f);
        for (a, b) in parts[0].1.values().iter().zip(full.values()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn overlapping_bands_are_rejected() {
        let grid = Grid::new(2.0 * PI / 64.0, 512, true).unwrap();
        let f = make_special_data(SpecialData::Centered(0.0), 2.0, &grid).unwrap();
        assert!(band_decompose(&f, &[0.0, 0.4], 0.3).is_err());
        // circular overlap across the edge
        assert!(band_decompose(&f, &[PI - 0.05, -PI + 0.05], 0.2).is_err());
    }

    #[test]
    fn abutting_half_bands_partition_the_field() {
        let grid = Grid::new(2.0 * PI / 64.0, 512, true).unwrap();
        let f = make_special_data(SpecialData::PiSplit, default_gamma(grid.h()), &grid).unwrap();
        let parts = band_decompose(&f, &[-PI / 2.0, PI / 2.0], PI / 2.0).unwrap();
        let full = isdft(&f);
        for (j, v) in full.values().iter().enumerate() {
            let sum = parts[0].1.values()[j] + parts[1].1.values()[j];
            assert!((sum - v).norm() < 1e-10);
        }
    }

    #[test]
    fn admissibility() {
        assert!(admissible_q(1.0).is_err());
        assert_eq!(admissible_q(2.0).unwrap(), f64::INFINITY);
        assert_eq!(admissible_q(6.0).unwrap(), 6.0);
        assert_eq!(admissible_q(f64::INFINITY).unwrap(), 4.0);
        // 2/q = 1/2 - 1/p across a range of p
        for p in [2.5, 3.0, 4.0, 6.0, 10.0] {
            let q = admissible_q(p).unwrap();
            assert!((2.0 / q - (0.5 - 1.0 / p)).abs() < 1e-12);
        }
    }

    #[test]
    fn p2_norm_is_conserved_mass() {
        let grid = Grid::new(2.0 * PI / 64.0, 512, true).unwrap();
        let gamma = default_gamma(grid.h());
        let f = make_special_data(SpecialData::Centered(PI / 2.0), gamma, &grid).unwrap();
        let s = Symbol::semidiscrete(grid.h()).unwrap();
        let report = strichartz_norm(&f, &s, 2.0, 1.0, 32).unwrap();
        assert!((report.ratio - 1.0).abs() < 1e-10);
        assert!(report.q.is_infinite());
    }

    #[test]
    fn smoothing_vanishes_for_low_frequency_data() {
        let grid = Grid::new(2.0 * PI / 256.0, 1024, true).unwrap();
        let f = make_special_data(SpecialData::Centered(0.0), 2.0, &grid).unwrap();
        let s = Symbol::semidiscrete(grid.h()).unwrap();
        let l = grid.length();
        let low = local_smoothing(&f, &s, &[l / 16.0, l / 8.0, l / 4.0], 0.5, 16).unwrap();

        let g = make_special_data(SpecialData::PiSplit, 2.0, &grid).unwrap();
        let high = local_smoothing(&g, &s, &[l / 16.0, l / 8.0, l / 4.0], 0.5, 16).unwrap();
        // multiplier p_h^(1/4) vanishes at xi = 0 and peaks at the edge
        assert!(
            low.ratio < 0.05 * high.ratio,
            "low {} vs high {}",
            low.ratio,
            high.ratio
        );
    }

    #[test]
    fn smoothing_validates_radii() {
        let grid = Grid::new(2.0 * PI / 64.0, 512, true).unwrap();
        let f = make_special_data(SpecialData::Centered(0.0), 4.0, &grid).unwrap();
        let s = Symbol::semidiscrete(grid.h()).unwrap();
        assert!(local_smoothing(&f, &s, &[], 0.5, 16).is_err());
        assert!(local_smoothing(&f, &s, &[-1.0], 0.5, 16).is_err());
        assert!(local_smoothing(&f, &s, &[grid.length()], 0.5, 16).is_err());
    }

    #[test]
    fn remainder_trace_starts_at_zero_and_grows() {
        let grid = Grid::new(2.0 * PI / 128.0, 1024, true).unwrap();
        let gamma = default_gamma(grid.h());
        let f = make_special_data(SpecialData::Centered(2.0 * PI / 3.0), gamma, &grid).unwrap();
        let trace = remainder_trace(&f, 2.0 * PI / 3.0, &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(trace[0].1 < 1e-20);
        for w in trace.windows(2) {
            assert!(
                w[1].1 >= w[0].1,
                "ratio should not decrease on [0,1]: {trace:?}"
            );
        }
    }

    #[test]
    fn fixed_gamma_remainder_ratio_scales_like_h_squared() {
        // Linear-regime scaling: the remainder multiplier |exp(i t r_h) - 1|
        // is ~ t|r_h| with r_h cubic in the packet offset, so the squared
        // remainder norm scales like (t h gamma^(3/2))^2 at fixed gamma.
        // Halving h therefore divides the ratio ||v||^2/||w|| by ~4.
        let gamma = 2.53;
        let eta0 = 2.0 * PI / 3.0;
        let mut ratios = Vec::new();
        for exp in [128.0, 256.0] {
            let h = 2.0 * PI / exp;
            let m = (16.0 * PI / h).round() as usize;
            let grid = Grid::new(h, m, true).unwrap();
            let f = make_special_data(SpecialData::Centered(eta0), gamma, &grid).unwrap();
            ratios.push(remainder_trace(&f, eta0, &[1.0])[0].1);
        }
        let factor = ratios[0] / ratios[1];
        assert!(
            (3.5..=4.5).contains(&factor),
            "fixed-gamma halving factor {factor} should be ~4"
        );
    }
}

//! Execution pipeline: build data, filter, evolve, measure, compare with
//! predictions, and emit artifacts.
//!
//! All artifacts are rendered to strings first and written in one pass, so a
//! fixed scenario produces byte-identical files on a given platform.

use crate::scenario::{Eta0Spec, OutputKind, ProjectionChoice, Scenario, SymbolKind};
use gridwave_core::analysis::{
    band_decompose, local_smoothing, packet_metrics, remainder_trace, strichartz_norm, NormReport,
    PacketMetrics,
};
use gridwave_core::bigrid::{bigrid_filter, BigridLevel};
use gridwave_core::dispersion::{wrap_to_pi, Symbol};
use gridwave_core::evolution::{propagate_with_sign, PhaseSign};
use gridwave_core::grid::{isdft, sdft, Grid, PhysicalField, SpectralField};
use gridwave_core::predictor::{
    classify, predict_packets, predict_packets_continuous, predict_trajectory, CaseLabel,
    PacketPrediction,
};
use gridwave_core::wavepacket::{
    endpoint_decay_constant, make_packet, make_special_data, scale_regime_check, PacketSpec,
    ScaleRegime, SpecialData,
};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Predicted picks below this weight are dropped from measurement plans.
pub const PICK_THRESHOLD: f64 = 1e-3;

#[derive(Debug)]
pub enum PipelineError {
    /// Scenario violations, reported together; maps to exit code 2.
    Validation(Vec<String>),
    /// Unexpected internal failure.
    Internal(String),
}

impl std::fmt::Display for PipelineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PipelineError::Validation(errs) => {
                writeln!(f, "invalid scenario ({} violations):", errs.len())?;
                for e in errs {
                    writeln!(f, "  - {e}")?;
                }
                Ok(())
            }
            PipelineError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for PipelineError {}

impl From<gridwave_core::Error> for PipelineError {
    fn from(e: gridwave_core::Error) -> Self {
        PipelineError::Internal(e.to_string())
    }
}

/// A validated scenario with its grid, data and evolution symbol in place.
pub struct Prepared {
    pub scenario: Scenario,
    pub grid: Grid,
    pub gamma: f64,
    pub regime: ScaleRegime,
    /// The datum before filtering.
    pub unfiltered: SpectralField,
    /// The datum actually evolved (filtered when the scenario asks for it).
    pub datum: SpectralField,
    pub symbol: Symbol,
}

impl Prepared {
    pub fn is_filtered(&self) -> bool {
        self.scenario.k >= 1 && self.scenario.projection != ProjectionChoice::None
    }

    fn effective_k(&self) -> u32 {
        if self.is_filtered() {
            self.scenario.k
        } else {
            0
        }
    }
}

/// Validates the scenario and builds everything the subcommands share.
pub fn prepare(sc: &Scenario) -> Result<Prepared, PipelineError> {
    sc.validate().map_err(PipelineError::Validation)?;
    let grid = Grid::new(sc.h, sc.m, true)?;
    let gamma = sc.resolved_gamma();
    let regime = scale_regime_check(sc.h, gamma);

    let unfiltered = match sc.eta0 {
        Eta0Spec::PiSplit => make_special_data(SpecialData::PiSplit, gamma, &grid)?,
        Eta0Spec::Centered(e) => {
            let spec = PacketSpec::new(e, sc.band.0, sc.band.1, gamma)?;
            make_packet(&spec, &grid)?
        }
    };

    let datum = if sc.k >= 1 && sc.projection != ProjectionChoice::None {
        let level = BigridLevel::new(&grid, sc.k)?;
        let projection = sc
            .projection
            .as_option()
            .expect("projection is not none here");
        let filtered = bigrid_filter(&level, &isdft(&unfiltered), projection)?;
        sdft(&filtered)
    } else {
        unfiltered.clone()
    };

    let symbol = match sc.symbol {
        SymbolKind::Continuous => Symbol::continuous(),
        SymbolKind::SemiDiscrete => Symbol::semidiscrete(sc.h)?,
    };

    Ok(Prepared {
        scenario: sc.clone(),
        grid,
        gamma,
        regime,
        unfiltered,
        datum,
        symbol,
    })
}

/// Case label and per-pick predictions for the prepared scenario, adjusted
/// for the evolution symbol and the configured phase sign.
pub fn predictions(p: &Prepared) -> (CaseLabel, Vec<PacketPrediction>) {
    let sc = &p.scenario;
    let carrier = sc.eta0.carrier();
    let k = p.effective_k();
    let projection = if k == 0 {
        None
    } else {
        sc.projection.as_option()
    };
    let label = classify(carrier, k, projection);

    let mut preds = match (sc.symbol, k) {
        (SymbolKind::Continuous, 0) => predict_packets_continuous(carrier, p.gamma, sc.h),
        (SymbolKind::Continuous, _) => {
            // The projection acts on the data regardless of the evolution
            // symbol: keep the pick structure, retake velocity and curvature
            // from the continuous symbol.
            predict_packets(carrier, k, projection, p.gamma, sc.h)
                .into_iter()
                .map(|mut pr| {
                    pr.velocity = -2.0 * pr.pick_eta / sc.h;
                    pr.q2 = 2.0;
                    pr
                })
                .collect()
        }
        (SymbolKind::SemiDiscrete, _) => predict_packets(carrier, k, projection, p.gamma, sc.h),
    };

    // A custom-band carrier sitting on a truncation endpoint keeps only half
    // of its pick.
    if k == 0 {
        if let Eta0Spec::Centered(e) = sc.eta0 {
            if let Ok(spec) = PacketSpec::new(e, sc.band.0, sc.band.1, p.gamma) {
                let c = endpoint_decay_constant(&spec);
                for pr in &mut preds {
                    pr.decay_constant = c;
                }
            }
        }
    }

    if sc.sign == PhaseSign::Minus {
        for pr in &mut preds {
            pr.velocity = -pr.velocity;
        }
    }
    (label, preds)
}

/// The spectral bands used to separate the predicted packets for
/// measurement.
pub struct BandPlan {
    /// Predictions above [`PICK_THRESHOLD`], in pick order.
    pub picks: Vec<PacketPrediction>,
    /// Band center per measured packet (usually the pick itself).
    pub centers: Vec<f64>,
    pub half_width: f64,
}

pub fn band_plan(preds: &[PacketPrediction]) -> BandPlan {
    let surviving: Vec<PacketPrediction> = preds
        .iter()
        .copied()
        .filter(|pr| pr.amplitude_factor >= PICK_THRESHOLD)
        .collect();

    // The continuous edge datum keeps both half-picks at +-pi, which are one
    // circular location: split the window into its two halves instead.
    let edge_pair = surviving.len() == 2
        && (surviving[0].pick_eta + PI).abs() < 1e-9
        && (surviving[1].pick_eta - PI).abs() < 1e-9;
    if edge_pair {
        return BandPlan {
            picks: surviving,
            centers: vec![-PI / 2.0, PI / 2.0],
            half_width: PI / 2.0,
        };
    }

    let centers: Vec<f64> = surviving.iter().map(|pr| pr.pick_eta).collect();
    let mut half_width = PI;
    for (i, a) in centers.iter().enumerate() {
        for b in centers.iter().skip(i + 1) {
            half_width = half_width.min(0.5 * wrap_to_pi(a - b).abs());
        }
    }
    BandPlan {
        picks: surviving,
        centers,
        half_width,
    }
}

fn timeline(t_final: f64, n_samples: usize) -> Vec<f64> {
    let n = n_samples.max(2);
    (0..n)
        .map(|i| t_final * i as f64 / (n - 1) as f64)
        .collect()
}

/// Measured trajectory of one packet.
#[derive(Debug, Clone)]
pub struct PacketSeries {
    pub prediction: PacketPrediction,
    pub band_center: f64,
    pub times: Vec<f64>,
    pub metrics: Vec<PacketMetrics>,
}

/// Decomposes the datum once and evolves each band; metrics are collected
/// per sample.
pub fn measure_packets(p: &Prepared, plan: &BandPlan) -> Result<Vec<PacketSeries>, PipelineError> {
    let times = timeline(p.scenario.t_final, p.scenario.n_samples);
    // validates band disjointness with the same membership convention
    band_decompose(&p.datum, &plan.centers, plan.half_width)?;
    let mut series = Vec::new();
    for (i, &center) in plan.centers.iter().enumerate() {
        let band_spec = restrict_band(&p.datum, center, plan.half_width);
        let mut metrics = Vec::new();
        for &t in &times {
            let u = isdft(&propagate_with_sign(
                &band_spec,
                &p.symbol,
                t,
                p.scenario.sign,
            ));
            metrics.push(packet_metrics(&u)?);
        }
        series.push(PacketSeries {
            prediction: plan.picks[i],
            band_center: center,
            times: times.clone(),
            metrics,
        });
    }
    Ok(series)
}

/// Zeroes every bin outside the circular half-open band around `center`;
/// same membership rule as `band_decompose`.
fn restrict_band(f: &SpectralField, center: f64, half_width: f64) -> SpectralField {
    let grid = f.grid();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(m, c)| {
            let delta = wrap_to_pi(grid.eta(m) - center);
            if (-half_width..half_width).contains(&delta) {
                *c
            } else {
                Complex64::default()
            }
        })
        .collect();
    SpectralField::new(grid, coeffs).expect("band restriction preserves well-formedness")
}

fn fit_slope(times: &[f64], values: &[f64]) -> f64 {
    let n = times.len() as f64;
    let tbar = times.iter().sum::<f64>() / n;
    let vbar = values.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, v) in times.iter().zip(values) {
        num += (t - tbar) * (v - vbar);
        den += (t - tbar) * (t - tbar);
    }
    num / den
}

/// Per-packet verdict of the measured-vs-predicted comparison.
#[derive(Debug, Clone, Serialize)]
pub struct PacketComparison {
    pub pick_eta: f64,
    pub predicted_velocity: f64,
    pub measured_velocity: f64,
    pub rel_err_velocity: f64,
    pub predicted_amplitude_t0: f64,
    pub measured_amplitude_t0: f64,
    pub max_rel_err_amplitude: f64,
    pub max_rel_err_width_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    /// Peak amplitude of the unfiltered datum; prediction amplitudes are
    /// relative to it.
    pub base_amplitude: f64,
    pub packets: Vec<PacketComparison>,
    pub strict_ok: bool,
}

/// Builds the comparison table (one CSV row per packet and sample) and the
/// per-packet summary.
pub fn compare(
    p: &Prepared,
    series: &[PacketSeries],
) -> Result<(ComparisonReport, String), PipelineError> {
    let sc = &p.scenario;
    let base_amplitude = isdft(&p.unfiltered).sup_norm();

    let mut csv = String::new();
    for (key, value) in sc.meta() {
        let _ = writeln!(csv, "# {key} = {value}");
    }
    let _ = writeln!(
        csv,
        "packet,pick_eta,t,meas_centroid,pred_centroid,meas_peak,pred_peak,\
         meas_width_ratio,pred_width_ratio,rel_err_peak,rel_err_width_ratio"
    );

    let mut packets = Vec::new();
    let mut strict_ok = true;
    for (idx, s) in series.iter().enumerate() {
        let pred = &s.prediction;
        let x_star = s.metrics[0].centroid;
        let width0 = s.metrics[0].width;
        let centroids: Vec<f64> = s.metrics.iter().map(|m| m.centroid).collect();
        let measured_velocity = fit_slope(&s.times, &centroids);

        let mut max_amp_err: f64 = 0.0;
        let mut max_width_err: f64 = 0.0;
        for (t, m) in s.times.iter().zip(&s.metrics) {
            let traj = predict_trajectory(pred, *t, x_star);
            let pred_peak = traj.amplitude * base_amplitude;
            let pred_width_ratio = traj.width / predict_trajectory(pred, 0.0, x_star).width;
            let meas_width_ratio = m.width / width0;
            let amp_err = (m.peak_amp - pred_peak).abs() / pred_peak;
            let width_err = (meas_width_ratio - pred_width_ratio).abs() / pred_width_ratio;
            max_amp_err = max_amp_err.max(amp_err);
            max_width_err = max_width_err.max(width_err);
            let _ = writeln!(
                csv,
                "{idx},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                pred.pick_eta,
                t,
                m.centroid,
                traj.centroid,
                m.peak_amp,
                pred_peak,
                meas_width_ratio,
                pred_width_ratio,
                amp_err,
                width_err
            );
        }

        // zero-velocity packets are judged on absolute drift per unit width
        let velocity_floor = width0 / sc.t_final;
        let rel_err_velocity =
            (measured_velocity - pred.velocity).abs() / pred.velocity.abs().max(velocity_floor);
        let traj0 = predict_trajectory(pred, 0.0, x_star);
        let amp0_pred = traj0.amplitude * base_amplitude;
        let amp0_meas = s.metrics[0].peak_amp;

        if rel_err_velocity > sc.tolerances.velocity
            || (amp0_meas - amp0_pred).abs() / amp0_pred > sc.tolerances.amplitude
            || max_width_err > sc.tolerances.width
        {
            strict_ok = false;
        }
        packets.push(PacketComparison {
            pick_eta: pred.pick_eta,
            predicted_velocity: pred.velocity,
            measured_velocity,
            rel_err_velocity,
            predicted_amplitude_t0: amp0_pred,
            measured_amplitude_t0: amp0_meas,
            max_rel_err_amplitude: max_amp_err,
            max_rel_err_width_ratio: max_width_err,
        });
    }

    Ok((
        ComparisonReport {
            base_amplitude,
            packets,
            strict_ok,
        },
        csv,
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct NormsBundle {
    pub strichartz: NormReport,
    pub smoothing: NormReport,
}

#[derive(Serialize)]
struct NormsFile<'a> {
    meta: &'a BTreeMap<String, String>,
    strichartz: &'a NormReport,
    smoothing: &'a NormReport,
}

/// `norms`: render the norm measurements with the scenario metadata.
pub fn norms_only(p: &Prepared) -> Result<(NormsBundle, Vec<(String, String)>), PipelineError> {
    let bundle = norms(p)?;
    let meta = meta_map(&p.scenario);
    let files = vec![(
        "norms.json".to_string(),
        to_pretty_json(&NormsFile {
            meta: &meta,
            strichartz: &bundle.strichartz,
            smoothing: &bundle.smoothing,
        }),
    )];
    Ok((bundle, files))
}

/// Strichartz and local-smoothing functionals of the prepared scenario, with
/// ratios against the evolved (filtered) datum.
pub fn norms(p: &Prepared) -> Result<NormsBundle, PipelineError> {
    let sc = &p.scenario;
    let radii: Vec<f64> = sc
        .radii
        .iter()
        .map(|r| r.resolve(p.grid.length()))
        .collect();
    let mut strichartz =
        strichartz_norm(&p.datum, &p.symbol, sc.norms_p, sc.t_final, sc.n_samples)?;
    let mut smoothing = local_smoothing(&p.datum, &p.symbol, &radii, sc.t_final, sc.n_samples)?;
    for report in [&mut strichartz, &mut smoothing] {
        report.gamma = Some(p.gamma);
        report.scenario_id = Some(sc.scenario_id.clone());
    }
    Ok(NormsBundle {
        strichartz,
        smoothing,
    })
}

/// Full run summary, serialized as `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub meta: BTreeMap<String, String>,
    pub regime: ScaleRegime,
    pub case: CaseLabel,
    pub predictions: Vec<PacketPrediction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norms: Option<NormsBundle>,
}

/// Rendered artifacts of one scenario run.
pub struct RunArtifacts {
    pub report: RunReport,
    /// `(file name, contents)`, written under `<out>/<scenario_id>/`.
    pub files: Vec<(String, String)>,
}

fn meta_map(sc: &Scenario) -> BTreeMap<String, String> {
    sc.meta().into_iter().collect()
}

fn physical_csv(field: &PhysicalField, meta: &[(String, String)]) -> String {
    let mut buf = Vec::new();
    gridwave_core::io::write_physical_csv(&mut buf, field, meta).expect("write to memory");
    String::from_utf8(buf).expect("csv is utf8")
}

fn spectral_csv(field: &SpectralField, meta: &[(String, String)]) -> String {
    let mut buf = Vec::new();
    gridwave_core::io::write_spectral_csv(&mut buf, field, meta).expect("write to memory");
    String::from_utf8(buf).expect("csv is utf8")
}

fn timeseries_csv(sc: &Scenario, s: &PacketSeries) -> String {
    let mut out = String::new();
    for (key, value) in sc.meta() {
        let _ = writeln!(out, "# {key} = {value}");
    }
    let _ = writeln!(out, "# pick_eta = {:.16e}", s.prediction.pick_eta);
    let _ = writeln!(out, "t,centroid,width,peak_amp,l2norm");
    for (t, m) in s.times.iter().zip(&s.metrics) {
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            t,
            m.centroid,
            m.width,
            m.peak_amp,
            m.mass.sqrt()
        );
    }
    out
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

/// Runs the full pipeline and renders the artifacts selected by
/// `scenario.outputs`.
pub fn run(p: &Prepared) -> Result<RunArtifacts, PipelineError> {
    let sc = &p.scenario;
    let meta = sc.meta();
    let (label, preds) = predictions(p);
    let plan = band_plan(&preds);
    let mut files = Vec::new();

    let wants = |k: OutputKind| sc.outputs.contains(&k);

    if wants(OutputKind::Snapshots) {
        files.push((
            "datum_physical.csv".to_string(),
            physical_csv(&isdft(&p.datum), &meta),
        ));
        files.push((
            "datum_spectral.csv".to_string(),
            spectral_csv(&p.datum, &meta),
        ));
        let final_state = propagate_with_sign(&p.datum, &p.symbol, sc.t_final, sc.sign);
        files.push((
            "final_physical.csv".to_string(),
            physical_csv(&isdft(&final_state), &meta),
        ));
        files.push((
            "final_spectral.csv".to_string(),
            spectral_csv(&final_state, &meta),
        ));
    }

    let needs_series = wants(OutputKind::Timeseries) || wants(OutputKind::Comparison);
    let series = if needs_series && !plan.picks.is_empty() {
        measure_packets(p, &plan)?
    } else {
        Vec::new()
    };

    if wants(OutputKind::Timeseries) {
        if series.len() == 1 {
            files.push(("timeseries.csv".to_string(), timeseries_csv(sc, &series[0])));
        } else {
            for (i, s) in series.iter().enumerate() {
                files.push((format!("timeseries-p{i:02}.csv"), timeseries_csv(sc, s)));
            }
        }
    }

    let comparison = if wants(OutputKind::Comparison) && !series.is_empty() {
        let (report, csv) = compare(p, &series)?;
        files.push(("comparison.csv".to_string(), csv));
        Some(report)
    } else {
        None
    };

    let norm_reports = if wants(OutputKind::Norms) {
        let (bundle, mut norm_files) = norms_only(p)?;
        files.append(&mut norm_files);
        Some(bundle)
    } else {
        None
    };

    let report = RunReport {
        meta: meta_map(sc),
        regime: p.regime,
        case: label,
        predictions: preds,
        comparison,
        norms: norm_reports,
    };
    if wants(OutputKind::Prediction) {
        files.push((
            "prediction.json".to_string(),
            to_pretty_json(&PredictionFile {
                meta: &report.meta,
                regime: &p.regime,
                case: &report.case,
                predictions: &report.predictions,
            }),
        ));
    }
    files.push(("report.json".to_string(), to_pretty_json(&report)));

    Ok(RunArtifacts { report, files })
}

#[derive(Serialize)]
struct PredictionFile<'a> {
    meta: &'a BTreeMap<String, String>,
    regime: &'a ScaleRegime,
    case: &'a CaseLabel,
    predictions: &'a [PacketPrediction],
}

/// `predict`: emit the case label and per-pick predictions only.
pub fn predict_only(p: &Prepared) -> RunArtifacts {
    let (label, preds) = predictions(p);
    let meta = meta_map(&p.scenario);
    let files = vec![(
        "prediction.json".to_string(),
        to_pretty_json(&PredictionFile {
            meta: &meta,
            regime: &p.regime,
            case: &label,
            predictions: &preds,
        }),
    )];
    RunArtifacts {
        report: RunReport {
            meta,
            regime: p.regime,
            case: label,
            predictions: preds,
            comparison: None,
            norms: None,
        },
        files,
    }
}

/// `project`: emit the filtered data and spectra only, plus the coarse
/// projection when a bigrid level is active.
pub fn project_only(p: &Prepared) -> Result<RunArtifacts, PipelineError> {
    let sc = &p.scenario;
    let meta = sc.meta();
    let mut files = Vec::new();
    files.push((
        "datum_physical.csv".to_string(),
        physical_csv(&isdft(&p.unfiltered), &meta),
    ));
    files.push((
        "datum_spectral.csv".to_string(),
        spectral_csv(&p.unfiltered, &meta),
    ));
    if p.is_filtered() {
        let level = BigridLevel::new(&p.grid, sc.k)?;
        let projection = sc.projection.as_option().expect("filtered");
        let coarse = gridwave_core::bigrid::project(&level, &isdft(&p.unfiltered), projection)?;
        files.push((
            "coarse_physical.csv".to_string(),
            physical_csv(&coarse, &meta),
        ));
        files.push((
            "coarse_spectral.csv".to_string(),
            spectral_csv(&sdft(&coarse), &meta),
        ));
        files.push((
            "filtered_physical.csv".to_string(),
            physical_csv(&isdft(&p.datum), &meta),
        ));
        files.push((
            "filtered_spectral.csv".to_string(),
            spectral_csv(&p.datum, &meta),
        ));
    }
    let (label, preds) = predictions(p);
    let report = RunReport {
        meta: meta_map(sc),
        regime: p.regime,
        case: label,
        predictions: preds,
        comparison: None,
        norms: None,
    };
    Ok(RunArtifacts { report, files })
}

/// One refinement step of a mesh sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepEntry {
    pub h: f64,
    #[serde(rename = "M")]
    pub m: usize,
    pub gamma: f64,
    pub strichartz_ratio: f64,
    pub smoothing_ratio: f64,
    /// `||remainder||^2 / ||full||` of the quadratic split at `t = T`.
    pub remainder_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub meta: BTreeMap<String, String>,
    pub entries: Vec<SweepEntry>,
    /// Consecutive-step growth of the Strichartz ratio (`next / previous`).
    pub strichartz_growth: Vec<f64>,
    pub smoothing_growth: Vec<f64>,
    /// Consecutive-step drop of the remainder ratio (`previous / next`).
    pub remainder_drop: Vec<f64>,
}

/// Refines the base scenario over the given mesh steps (sorted descending),
/// keeping the window length fixed, and reports the norm ratios per step.
pub fn sweep(base: &Scenario, h_list: &[f64]) -> Result<SweepReport, PipelineError> {
    if h_list.len() < 2 {
        return Err(PipelineError::Validation(vec![
            "sweep needs at least two mesh steps".into(),
        ]));
    }
    if !h_list.windows(2).all(|w| w[0] > w[1]) {
        return Err(PipelineError::Validation(vec![
            "sweep mesh steps must be sorted descending".into(),
        ]));
    }
    let window = base.m as f64 * base.h;
    let mut entries = Vec::new();
    for (i, &h) in h_list.iter().enumerate() {
        let m_exact = window / h;
        let m = m_exact.round() as usize;
        if (m_exact - m as f64).abs() > 1e-9 || !m.is_power_of_two() {
            return Err(PipelineError::Validation(vec![format!(
                "mesh step {h} does not divide the window into a power of two ({m_exact} nodes)"
            )]));
        }
        let mut sc = base.clone();
        sc.scenario_id = format!("{}-h{}", base.scenario_id, i);
        sc.h = h;
        sc.m = m;
        let p = prepare(&sc)?;
        let bundle = norms(&p)?;
        let remainder = remainder_trace(&p.datum, sc.eta0.carrier(), &[sc.t_final]);
        entries.push(SweepEntry {
            h,
            m,
            gamma: p.gamma,
            strichartz_ratio: bundle.strichartz.ratio,
            smoothing_ratio: bundle.smoothing.ratio,
            remainder_ratio: remainder[0].1,
        });
    }
    let growth = |get: fn(&SweepEntry) -> f64| -> Vec<f64> {
        entries
            .windows(2)
            .map(|w| get(&w[1]) / get(&w[0]))
            .collect()
    };
    Ok(SweepReport {
        meta: meta_map(base),
        strichartz_growth: growth(|e| e.strichartz_ratio),
        smoothing_growth: growth(|e| e.smoothing_ratio),
        remainder_drop: entries
            .windows(2)
            .map(|w| w[0].remainder_ratio / w[1].remainder_ratio)
            .collect(),
        entries,
    })
}

/// Writes rendered artifacts under `<out>/<scenario_id>/`.
pub fn write_artifacts(
    out_dir: &Path,
    scenario_id: &str,
    files: &[(String, String)],
) -> std::io::Result<Vec<PathBuf>> {
    let dir = out_dir.join(scenario_id);
    std::fs::create_dir_all(&dir)?;
    let mut written = Vec::new();
    for (name, contents) in files {
        let path = dir.join(name);
        std::fs::write(&path, contents)?;
        written.push(path);
    }
    Ok(written)
}

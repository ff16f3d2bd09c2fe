//! Sampling of the symbolic Markov chains, exact conjugacy checking of
//! sampled paths against the interval dynamics, and empirical statistics.
//!
//! Paths are sampled with ChaCha8 keyed by (seed, stream_id), so every report
//! field is reproducible and independent streams can run concurrently. The
//! conjugacy check never touches floats: windows are decoded to exact
//! enclosures in Q(beta), pushed through one step of the interval map, and
//! compared with the decoded shift.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

use crate::field::FieldContext;
use crate::measures::{LebesgueChain, MeasureRep};
use crate::partition::{CellLabel, PartitionC};
use crate::sft::{decode_omega, decode_point, SftCoding};

/// Name recorded in reports; fixed so results stay comparable across runs.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3, seed + stream id)";

#[derive(Debug, Error)]
pub enum SimError {
    #[error("path of length {len} is too short for lag {lag} statistics")]
    PathTooShort { len: usize, lag: usize },
    #[error("path is not admissible at position {0}")]
    InadmissiblePath(usize),
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SimConfig {
    pub seed: u64,
    pub stream_id: u64,
    pub steps: usize,
    /// Paths start at stationarity, so this defaults to zero.
    pub burn_in: usize,
}

impl SimConfig {
    pub fn new(seed: u64, steps: usize) -> SimConfig {
        SimConfig {
            seed,
            stream_id: 0,
            steps,
            burn_in: 0,
        }
    }

    pub fn with_stream(mut self, stream_id: u64) -> SimConfig {
        self.stream_id = stream_id;
        self
    }
}

/// Float snapshot of a stationary chain, the common sampling input for both
/// measure representations.
#[derive(Debug, Clone)]
pub struct MarkovSampler {
    pub initial: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
}

impl MarkovSampler {
    pub fn from_measure(rep: &MeasureRep<f64>) -> MarkovSampler {
        MarkovSampler {
            initial: rep.state_mass.clone(),
            rows: rep.transition.clone(),
        }
    }

    pub fn from_lebesgue(chain: &LebesgueChain) -> MarkovSampler {
        MarkovSampler {
            initial: chain.stationary_f64(),
            rows: chain.transition_f64(),
        }
    }
}

fn draw(cumulative: &[f64], u: f64) -> usize {
    for (i, c) in cumulative.iter().enumerate() {
        if u < *c {
            return i;
        }
    }
    cumulative.len() - 1
}

/// Reproducible stationary-start path of `steps` states.
pub fn sample_chain(sampler: &MarkovSampler, config: &SimConfig) -> Vec<usize> {
    assert!(config.steps >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(config.stream_id);
    let cum = |row: &[f64]| -> Vec<f64> {
        let mut acc = 0.0;
        row.iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect()
    };
    let initial = cum(&sampler.initial);
    let rows: Vec<Vec<f64>> = sampler.rows.iter().map(|r| cum(r)).collect();
    let mut path = Vec::with_capacity(config.steps);
    let mut state = draw(&initial, rng.gen::<f64>());
    for _ in 0..config.burn_in {
        state = draw(&rows[state], rng.gen::<f64>());
    }
    path.push(state);
    while path.len() < config.steps {
        state = draw(&rows[state], rng.gen::<f64>());
        path.push(state);
    }
    path
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OrbitCheckReport {
    pub windows: usize,
    pub violations: usize,
}

/// Verifies the conjugacy between the shift and the interval map on every
/// window of the path: the decoded enclosure sits inside the window's first
/// cell, the emitted digit matches the edge label, and applying the branch to
/// the enclosure reproduces the decoded enclosure of the shifted window
/// exactly.
pub fn orbit_check(
    ctx: &Arc<FieldContext>,
    partition: &PartitionC,
    sft: &SftCoding,
    path: &[usize],
    precision_depth: usize,
) -> Result<OrbitCheckReport, SimError> {
    assert!(precision_depth >= 3);
    for (pos, w) in path.windows(2).enumerate() {
        if !sft.is_edge(w[0], w[1]) {
            return Err(SimError::InadmissiblePath(pos));
        }
    }
    if path.len() < precision_depth + 1 {
        return Err(SimError::PathTooShort {
            len: path.len(),
            lag: precision_depth,
        });
    }
    let beta = ctx.beta();
    let mut violations = 0usize;
    let windows = path.len() - precision_depth;
    for t in 0..windows {
        let word = &path[t..t + precision_depth];
        let (lo, hi) = decode_point(ctx, sft, word).expect("admissible window");
        // the coded point lies in both the enclosure and the cell of the
        // first symbol, so the two intervals must meet; the enclosure itself
        // can poke past the cell because its tail bound ignores adjacency
        let cell = &partition.cells[word[0]];
        if lo > cell.hi || hi < cell.lo {
            violations += 1;
            continue;
        }
        // digit the interval map emits on this window
        let digit = match partition.labels[word[0]] {
            CellLabel::Digit(k) => k,
            CellLabel::Switch(m) => {
                let omega = decode_omega(sft, &word[..2]).expect("admissible window");
                if omega[0] == 1 {
                    m
                } else {
                    m - 1
                }
            }
        };
        let e0 = sft.digit(word[0], word[1]).expect("edge digit");
        if digit != e0 {
            violations += 1;
            continue;
        }
        // the branch applied to the enclosure must reproduce the decoded
        // enclosure of the shifted window exactly
        let d = ctx.from_int(digit as i64);
        let img_lo = &(&beta * &lo) - &d;
        let img_hi = &(&beta * &hi) - &d;
        let shifted = &path[t + 1..t + precision_depth];
        let (s_lo, s_hi) = decode_point(ctx, sft, shifted).expect("admissible window");
        if img_lo != s_lo || img_hi != s_hi {
            violations += 1;
        }
    }
    Ok(OrbitCheckReport {
        windows,
        violations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SimReport {
    pub rng_algorithm: String,
    pub seed: u64,
    pub stream_id: u64,
    pub steps: usize,
    /// Empirical digit frequencies over path edges.
    pub digit_freq: Vec<f64>,
    /// Fraction of time spent in switch states.
    pub switch_visit_rate: f64,
    /// Depth-3 cylinder frequencies keyed "a-b-c", with the exact measure
    /// alongside when a measure representation was supplied.
    pub cylinder_freqs: Vec<CylinderFreq>,
    /// Autocorrelation of the indicator of state 0 at lags 0..=k_max.
    pub correlation: Vec<f64>,
    /// Filled by the caller when an orbit check ran.
    pub conjugacy_violations: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CylinderFreq {
    pub word: String,
    pub frequency: f64,
    pub measure: Option<f64>,
}

/// Digit frequencies, switch-visit rate, depth-3 cylinder frequencies and
/// the lag autocorrelation of the state-0 indicator.
pub fn empirical_stats(
    path: &[usize],
    sft: &SftCoding,
    rep: Option<&MeasureRep<f64>>,
    k_max: usize,
    config: &SimConfig,
) -> Result<SimReport, SimError> {
    let n = path.len();
    if n < k_max * 10 || n < 4 {
        return Err(SimError::PathTooShort { len: n, lag: k_max });
    }
    let mut digit_counts = vec![0usize; sft.digit_count as usize];
    for (pos, w) in path.windows(2).enumerate() {
        match sft.digit(w[0], w[1]) {
            Some(d) => digit_counts[d as usize] += 1,
            None => return Err(SimError::InadmissiblePath(pos)),
        }
    }
    let edges = (n - 1) as f64;
    let digit_freq: Vec<f64> = digit_counts.iter().map(|&c| c as f64 / edges).collect();

    let switch_hits = path
        .iter()
        .filter(|s| sft.switch_states.contains(s))
        .count();
    let switch_visit_rate = switch_hits as f64 / n as f64;

    let mut cyl_counts: BTreeMap<[usize; 3], usize> = BTreeMap::new();
    for w in path.windows(3) {
        *cyl_counts.entry([w[0], w[1], w[2]]).or_insert(0) += 1;
    }
    let total3 = (n - 2) as f64;
    let cylinder_freqs = cyl_counts
        .into_iter()
        .map(|(w, c)| CylinderFreq {
            word: format!("{}-{}-{}", w[0], w[1], w[2]),
            frequency: c as f64 / total3,
            measure: rep.map(|r| r.cylinder_measure(&w).expect("admissible cylinder")),
        })
        .collect();

    let x: Vec<f64> = path
        .iter()
        .map(|&s| if s == 0 { 1.0 } else { 0.0 })
        .collect();
    let mean = x.iter().sum::<f64>() / n as f64;
    let var: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    let mut correlation = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        if var == 0.0 {
            correlation.push(if k == 0 { 1.0 } else { 0.0 });
            continue;
        }
        let mut acc = 0.0;
        for t in 0..n - k {
            acc += (x[t] - mean) * (x[t + k] - mean);
        }
        correlation.push(acc / n as f64 / var);
    }

    Ok(SimReport {
        rng_algorithm: RNG_ALGORITHM.to_string(),
        seed: config.seed,
        stream_id: config.stream_id,
        steps: n,
        digit_freq,
        switch_visit_rate,
        cylinder_freqs,
        correlation,
        conjugacy_violations: None,
    })
}

/// Weighted merge of per-stream reports (equal weights for equal lengths).
pub fn merge_reports(reports: &[SimReport]) -> SimReport {
    assert!(!reports.is_empty());
    let total_steps: usize = reports.iter().map(|r| r.steps).sum();
    let weight = |r: &SimReport| r.steps as f64 / total_steps as f64;
    let mut digit_freq = vec![0.0; reports[0].digit_freq.len()];
    let mut switch_rate = 0.0;
    let mut correlation = vec![0.0; reports[0].correlation.len()];
    let mut cyl: BTreeMap<String, (f64, Option<f64>)> = BTreeMap::new();
    let mut violations: Option<usize> = None;
    for r in reports {
        let w = weight(r);
        for (acc, v) in digit_freq.iter_mut().zip(&r.digit_freq) {
            *acc += w * v;
        }
        switch_rate += w * r.switch_visit_rate;
        for (acc, v) in correlation.iter_mut().zip(&r.correlation) {
            *acc += w * v;
        }
        for c in &r.cylinder_freqs {
            let e = cyl.entry(c.word.clone()).or_insert((0.0, c.measure));
            e.0 += w * c.frequency;
        }
        if let Some(v) = r.conjugacy_violations {
            *violations.get_or_insert(0) += v;
        }
    }
    SimReport {
        rng_algorithm: reports[0].rng_algorithm.clone(),
        seed: reports[0].seed,
        stream_id: reports[0].stream_id,
        steps: total_steps,
        digit_freq,
        switch_visit_rate: switch_rate,
        cylinder_freqs: cyl
            .into_iter()
            .map(|(word, (frequency, measure))| CylinderFreq {
                word,
                frequency,
                measure,
            })
            .collect(),
        correlation,
        conjugacy_violations: violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;
    use crate::measures::build_measure;
    use crate::partition::{build_partition, orbit_closure};
    use crate::sft::build_sft;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn golden() -> (Arc<FieldContext>, PartitionC, SftCoding) {
        let ctx = FieldContext::new(
            &[-1, -1, 1],
            BigRational::from_integer(BigInt::from(1)),
            BigRational::from_integer(BigInt::from(2)),
        )
        .unwrap();
        let orbit = orbit_closure(&ctx, 100);
        let partition = build_partition(&ctx, &orbit).unwrap();
        let sft = build_sft(&partition).unwrap();
        (ctx, partition, sft)
    }

    #[test]
    fn sampling_is_deterministic() {
        let (_, _, sft) = golden();
        let rep = build_measure(&sft, &[0.0, 2.0_f64.ln()]).unwrap();
        let sampler = MarkovSampler::from_measure(&rep);
        let config = SimConfig::new(42, 5000).with_stream(7);
        let a = sample_chain(&sampler, &config);
        let b = sample_chain(&sampler, &config);
        assert_eq!(a, b);
        let c = sample_chain(&sampler, &SimConfig::new(42, 5000).with_stream(8));
        assert_ne!(a, c);
    }

    #[test]
    fn single_step_path() {
        let (_, _, sft) = golden();
        let rep = build_measure(&sft, &[0.0, 0.0]).unwrap();
        let sampler = MarkovSampler::from_measure(&rep);
        let path = sample_chain(&sampler, &SimConfig::new(1, 1));
        assert_eq!(path.len(), 1);
        assert!(path[0] < 3);
    }

    #[test]
    fn paths_are_admissible() {
        let (_, _, sft) = golden();
        let rep = build_measure(&sft, &[0.3, -0.2]).unwrap();
        let sampler = MarkovSampler::from_measure(&rep);
        let path = sample_chain(&sampler, &SimConfig::new(11, 20_000));
        assert!(sft.is_admissible(&path));
    }

    #[test]
    fn uniform_state_frequencies() {
        let (_, _, sft) = golden();
        let rep = build_measure(&sft, &[0.0, 0.0]).unwrap();
        let sampler = MarkovSampler::from_measure(&rep);
        let n = 200_000;
        let path = sample_chain(&sampler, &SimConfig::new(2024, n));
        for s in 0..3 {
            let freq = path.iter().filter(|&&x| x == s).count() as f64 / n as f64;
            let sigma = (0.25 / n as f64).sqrt();
            assert!(
                (freq - 1.0 / 3.0).abs() < 3.0 * sigma * 3.0,
                "state {s} freq {freq}"
            );
        }
    }

    #[test]
    fn orbit_check_golden_path_has_no_violations() {
        let (ctx, partition, sft) = golden();
        let rep = build_measure(&sft, &[0.0, 2.0_f64.ln()]).unwrap();
        let sampler = MarkovSampler::from_measure(&rep);
        let path = sample_chain(&sampler, &SimConfig::new(5, 2_000));
        let report = orbit_check(&ctx, &partition, &sft, &path, 12).unwrap();
        assert_eq!(report.violations, 0);
        assert_eq!(report.windows, path.len() - 12);
    }

    #[test]
    fn orbit_check_switch_to_zero_emits_digit_one() {
        let (ctx, partition, sft) = golden();
        // path visiting s_1 then 0: omega bit 1, digit 1
        let path = vec![1usize, 0, 0, 0, 0, 0];
        let omega = decode_omega(&sft, &path[..2]).unwrap();
        assert_eq!(omega, vec![1]);
        assert_eq!(sft.digit(1, 0), Some(1));
        let report = orbit_check(&ctx, &partition, &sft, &path, 3).unwrap();
        assert_eq!(report.violations, 0);
    }

    #[test]
    fn all_zero_path_decodes_to_zero() {
        let (ctx, partition, sft) = golden();
        let path = vec![0usize; 10];
        let report = orbit_check(&ctx, &partition, &sft, &path, 4).unwrap();
        assert_eq!(report.violations, 0);
        let (lo, _) = decode_point(&ctx, &sft, &path[..4]).unwrap();
        assert!(lo.is_zero_value());
        let _ = partition;
    }

    fn all_words(sft: &SftCoding, len: usize) -> Vec<Vec<usize>> {
        let mut words: Vec<Vec<usize>> = (0..sft.n_states).map(|s| vec![s]).collect();
        for _ in 1..len {
            let mut next = Vec::new();
            for w in &words {
                for j in 0..sft.n_states {
                    if sft.is_edge(*w.last().unwrap(), j) {
                        let mut e = w.clone();
                        e.push(j);
                        next.push(e);
                    }
                }
            }
            words = next;
        }
        words
    }

    #[test]
    fn conjugacy_exhaustive_on_short_words() {
        // every admissible word, not just sampled ones
        let (ctx, partition, sft) = golden();
        for w in all_words(&sft, 8) {
            let report = orbit_check(&ctx, &partition, &sft, &w, w.len() - 1).unwrap();
            assert_eq!(report.windows, 1);
            assert_eq!(report.violations, 0, "word {w:?}");
        }

        let qctx = FieldContext::new(
            &[-3, -2, -1, -3, 1],
            BigRational::new(BigInt::from(7), BigInt::from(2)),
            BigRational::new(BigInt::from(18), BigInt::from(5)),
        )
        .unwrap();
        let orbit = orbit_closure(&qctx, 10_000);
        let qpart = build_partition(&qctx, &orbit).unwrap();
        let qsft = build_sft(&qpart).unwrap();
        for w in all_words(&qsft, 5) {
            let report = orbit_check(&qctx, &qpart, &qsft, &w, w.len() - 1).unwrap();
            assert_eq!(report.violations, 0, "word {w:?}");
        }
    }

    #[test]
    fn stats_match_stationary_quantities() {
        let (_, _, sft) = golden();
        let theta = [0.0, 2.0_f64.ln()];
        let rep = build_measure(&sft, &theta).unwrap();
        let sampler = MarkovSampler::from_measure(&rep);
        let n = 200_000;
        let config = SimConfig::new(99, n);
        let path = sample_chain(&sampler, &config);
        let report = empirical_stats(&path, &sft, Some(&rep), 30, &config).unwrap();
        // digit marginals are i.i.d.(w)
        let sigma1 = (2.0 / 9.0 / n as f64).sqrt();
        assert!((report.digit_freq[1] - 2.0 / 3.0).abs() < 4.0 * sigma1);
        // switch visits live on state s_1 with mass 2/7
        assert!((report.switch_visit_rate - 2.0 / 7.0).abs() < 5e-3);
        // correlation decays well below the acceptance threshold
        assert!(report.correlation[0] > 0.999);
        assert!(report.correlation[20].abs() < 0.05);
        // depth-3 cylinder frequencies track the exact measures
        for c in &report.cylinder_freqs {
            let mu = c.measure.unwrap();
            assert!((c.frequency - mu).abs() < 5.0 / (n as f64).sqrt());
        }
    }

    #[test]
    fn short_path_rejected() {
        let (_, _, sft) = golden();
        let rep = build_measure(&sft, &[0.0, 0.0]).unwrap();
        let config = SimConfig::new(1, 50);
        let sampler = MarkovSampler::from_measure(&rep);
        let path = sample_chain(&sampler, &config);
        assert!(matches!(
            empirical_stats(&path, &sft, None, 30, &config),
            Err(SimError::PathTooShort { .. })
        ));
    }

    #[test]
    fn merged_streams_average() {
        let (_, _, sft) = golden();
        let rep = build_measure(&sft, &[0.0, 0.0]).unwrap();
        let sampler = MarkovSampler::from_measure(&rep);
        let mut reports = Vec::new();
        for stream in 0..3 {
            let config = SimConfig::new(7, 5_000).with_stream(stream);
            let path = sample_chain(&sampler, &config);
            reports.push(empirical_stats(&path, &sft, None, 10, &config).unwrap());
        }
        let merged = merge_reports(&reports);
        assert_eq!(merged.steps, 15_000);
        let manual: f64 = reports.iter().map(|r| r.digit_freq[0] / 3.0).sum();
        assert!((merged.digit_freq[0] - manual).abs() < 1e-12);
    }
}

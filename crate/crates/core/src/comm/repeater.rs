use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rng::Seeds;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepeaterConfig {
    pub total_length: f64,
    pub segments: u32,
    pub attenuation_length: f64,
    pub swap_success: f64,
    pub slots: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepeaterReport {
    /// `exp(-L/l)`: end-to-end photons delivered per slot without repeaters.
    pub direct_rate: f64,
    /// Simulated end-to-end links per slot.
    pub repeater_rate: f64,
    pub successes: u64,
    pub slots: u64,
    /// `1 / E[slots per link]` when swaps are deterministic.
    pub expected_rate: Option<f64>,
}

/// Mean of the maximum of `k` independent geometric waiting times with
/// success probability `p`.
pub fn expected_slots_per_success(k: u32, p: f64) -> Result<f64> {
    if k == 0 {
        return Err(invalid("segments", "must be at least 1"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid("p", "must lie in (0, 1]"));
    }
    // Inclusion-exclusion over the subsets still waiting.
    let mut sum = 0.0;
    let mut binom = 1.0;
    for j in 1..=k {
        binom = binom * f64::from(k - j + 1) / f64::from(j);
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign * binom / (1.0 - (1.0 - p).powi(j as i32));
    }
    Ok(sum)
}

/// Slotted repeater chain with perfect memories. In every slot each
/// segment without a link tries once and succeeds with probability
/// `exp(-L/(k l))`. When all segments hold links the `k-1` swaps run in the
/// same slot; a failed swap destroys the chain piece it would have joined.
/// Slot `t` draws from stream `t` of `seed`.
pub fn repeater_rate(config: &RepeaterConfig, seed: u64) -> Result<RepeaterReport> {
    let k = config.segments;
    if k == 0 {
        return Err(invalid("segments", "must be at least 1"));
    }
    if !(config.total_length > 0.0) {
        return Err(invalid("total_length", "must be positive"));
    }
    if !(config.attenuation_length > 0.0) {
        return Err(invalid("attenuation_length", "must be positive"));
    }
    if !(config.swap_success > 0.0 && config.swap_success <= 1.0) {
        return Err(invalid("swap_success", "must lie in (0, 1]"));
    }
    if config.slots == 0 {
        return Err(invalid("slots", "must be at least 1"));
    }
    let p = (-config.total_length / (f64::from(k) * config.attenuation_length)).exp();
    let seeds = Seeds::new(seed);
    let mut linked = vec![false; k as usize];
    let mut successes = 0u64;
    for t in 0..config.slots {
        let mut rng = seeds.stream(t);
        for l in linked.iter_mut().filter(|l| !**l) {
            *l = rng.random::<f64>() < p;
        }
        if linked.iter().all(|&l| l) {
            let swaps: Vec<bool> = (1..k).map(|_| rng.random::<f64>() < config.swap_success).collect();
            if swaps.iter().all(|&s| s) {
                successes += 1;
                linked.iter_mut().for_each(|l| *l = false);
            } else {
                // Segments joined through successful swaps form one piece;
                // a piece touching a failed swap is lost.
                let mut start = 0;
                for seg in 0..k as usize {
                    let piece_ends = seg + 1 == k as usize || !swaps[seg];
                    if piece_ends {
                        let touches_failure = (start > 0 && !swaps[start - 1]) || (seg + 1 < k as usize && !swaps[seg]);
                        if touches_failure {
                            linked[start..=seg].iter_mut().for_each(|l| *l = false);
                        }
                        start = seg + 1;
                    }
                }
            }
        }
    }
    let expected_rate = if config.swap_success == 1.0 {
        Some(1.0 / expected_slots_per_success(k, p)?)
    } else {
        None
    };
    Ok(RepeaterReport {
        direct_rate: (-config.total_length / config.attenuation_length).exp(),
        repeater_rate: successes as f64 / config.slots as f64,
        successes,
        slots: config.slots,
        expected_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg(total_length: f64, segments: u32, swap_success: f64, slots: u64) -> RepeaterConfig {
        RepeaterConfig {
            total_length,
            segments,
            attenuation_length: 1.0,
            swap_success,
            slots,
        }
    }

    #[test]
    fn closed_form_oracle() {
        assert_abs_diff_eq!(expected_slots_per_success(1, 0.25).unwrap(), 4.0, epsilon = 1e-12);
        let p = (-2.0f64).exp();
        let e2 = expected_slots_per_success(2, p).unwrap();
        assert_abs_diff_eq!(e2, 2.0 / p - 1.0 / (1.0 - (1.0 - p) * (1.0 - p)), epsilon = 1e-12);
        assert_abs_diff_eq!(e2, 10.81, epsilon = 0.01);
        assert!(expected_slots_per_success(0, 0.5).is_err());
    }

    #[test]
    fn single_segment_matches_direct() {
        let r = repeater_rate(&cfg(1.0, 1, 1.0, 50_000), 3).unwrap();
        let d = r.direct_rate;
        let sigma = (d * (1.0 - d) / 50_000.0).sqrt();
        assert!((r.repeater_rate - d).abs() < 3.0 * sigma);
        assert_eq!(r.expected_rate.unwrap(), d);
    }

    #[test]
    fn two_segments_beat_direct_at_four_lengths() {
        let r = repeater_rate(&cfg(4.0, 2, 1.0, 100_000), 7).unwrap();
        assert_abs_diff_eq!(r.direct_rate, 0.0183, epsilon = 1e-4);
        assert!(r.repeater_rate > r.direct_rate);
        let expected = r.expected_rate.unwrap();
        assert!((r.repeater_rate - expected).abs() / expected < 0.05);
    }

    #[test]
    fn rate_falls_with_length() {
        let rates: Vec<f64> = [1.0, 2.0, 3.0, 4.0, 6.0]
            .iter()
            .map(|&l| repeater_rate(&cfg(l, 2, 0.9, 40_000), 1).unwrap().repeater_rate)
            .collect();
        assert!(rates.windows(2).all(|w| w[1] <= w[0]), "{rates:?}");
    }

    #[test]
    fn swap_failures_lower_the_rate() {
        let good = repeater_rate(&cfg(4.0, 3, 1.0, 40_000), 2).unwrap().repeater_rate;
        let bad = repeater_rate(&cfg(4.0, 3, 0.5, 40_000), 2).unwrap().repeater_rate;
        assert!(bad < good);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(repeater_rate(&cfg(4.0, 0, 1.0, 10), 0).is_err());
        assert!(repeater_rate(&cfg(0.0, 2, 1.0, 10), 0).is_err());
        assert!(repeater_rate(&cfg(4.0, 2, 0.0, 10), 0).is_err());
        assert!(repeater_rate(&cfg(4.0, 2, 1.1, 10), 0).is_err());
    }
}

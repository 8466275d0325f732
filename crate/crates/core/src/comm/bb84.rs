use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::measurement::PolarizationBasis;
use crate::rng::Seeds;

/// Fibre with exponential attenuation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    pub length: f64,
    pub attenuation_length: f64,
}

impl ChannelModel {
    pub fn new(length: f64, attenuation_length: f64) -> Result<Self> {
        if !(length >= 0.0) {
            return Err(invalid("length", "must be non-negative"));
        }
        if !(attenuation_length > 0.0) {
            return Err(invalid("attenuation_length", "must be positive"));
        }
        Ok(Self {
            length,
            attenuation_length,
        })
    }

    pub fn lossless() -> Self {
        Self {
            length: 0.0,
            attenuation_length: 1.0,
        }
    }

    /// `exp(-L / l)`.
    pub fn transmission(&self) -> f64 {
        (-self.length / self.attenuation_length).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Eavesdropper {
    None,
    /// Measures every pulse in a random basis and resends the result.
    InterceptResend,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bb84Config {
    pub pulses: u64,
    pub eve: Eavesdropper,
    pub channel: ChannelModel,
    /// Fraction of the sifted key published to estimate the error rate.
    pub sample_fraction: f64,
}

fn bitstring<S: Serializer>(bits: &[bool], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&bits.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KeyStats {
    pub pulses_sent: u64,
    pub delivered: u64,
    pub sifted_bits: u64,
    pub sift_rate: f64,
    pub sampled_bits: u64,
    pub sampled_errors: u64,
    pub sampled_qber: f64,
    /// Error rate over the whole sifted key, known only to the simulator.
    pub sifted_errors: u64,
    pub sifted_qber: f64,
    /// Bob's sifted bits with the published sample removed.
    #[serde(serialize_with = "bitstring")]
    pub final_key: Vec<bool>,
    /// Key length left after subtracting `2 h(qber)` bits per key bit for
    /// error correction and privacy amplification.
    pub secret_bits: u64,
}

fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// Born-rule measurement of a single-photon polarization.
fn measure<R: Rng + ?Sized>(state: [num_complex::Complex64; 2], basis: PolarizationBasis, rng: &mut R) -> bool {
    let [(_, b0), _] = basis.vectors();
    let amp = b0[0].conj() * state[0] + b0[1].conj() * state[1];
    rng.random::<f64>() >= amp.norm_sqr()
}

fn basis_of(bit: bool) -> PolarizationBasis {
    if bit {
        PolarizationBasis::LR
    } else {
        PolarizationBasis::HV
    }
}

fn prepare(basis: PolarizationBasis, bit: bool) -> [num_complex::Complex64; 2] {
    basis.vectors()[usize::from(bit)].1
}

/// BB84 with H/V and L/R bases. Pulse `i` draws from stream `i` of `seed`;
/// the sample selection draws from stream `pulses`.
pub fn bb84_run(config: &Bb84Config, seed: u64) -> Result<KeyStats> {
    if config.pulses == 0 {
        return Err(invalid("pulses", "must be at least 1"));
    }
    if !(0.0..1.0).contains(&config.sample_fraction) {
        return Err(invalid("sample_fraction", "must lie in [0, 1)"));
    }
    let seeds = Seeds::new(seed);
    let transmission = config.channel.transmission();
    let mut delivered = 0;
    let mut sifted: Vec<(bool, bool)> = Vec::new();
    for i in 0..config.pulses {
        let mut rng = seeds.stream(i);
        let alice_basis = basis_of(rng.random());
        let alice_bit: bool = rng.random();
        let mut photon = prepare(alice_basis, alice_bit);
        if config.eve == Eavesdropper::InterceptResend {
            let eve_basis = basis_of(rng.random());
            let eve_bit = measure(photon, eve_basis, &mut rng);
            photon = prepare(eve_basis, eve_bit);
        }
        if rng.random::<f64>() >= transmission {
            continue;
        }
        delivered += 1;
        let bob_basis = basis_of(rng.random());
        let bob_bit = measure(photon, bob_basis, &mut rng);
        if bob_basis == alice_basis {
            sifted.push((alice_bit, bob_bit));
        }
    }
    let n = sifted.len();
    let sample_size = (config.sample_fraction * n as f64).floor() as usize;
    let mut picked = vec![false; n];
    for idx in sample(&mut seeds.stream(config.pulses), n, sample_size) {
        picked[idx] = true;
    }
    let sampled_errors = sifted.iter().zip(&picked).filter(|((a, b), &p)| p && a != b).count();
    let sifted_errors = sifted.iter().filter(|(a, b)| a != b).count();
    let final_key: Vec<bool> = sifted.iter().zip(&picked).filter(|(_, &p)| !p).map(|((_, b), _)| *b).collect();
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let sampled_qber = ratio(sampled_errors, sample_size);
    let secret = final_key.len() as f64 * (1.0 - 2.0 * binary_entropy(sampled_qber));
    Ok(KeyStats {
        pulses_sent: config.pulses,
        delivered,
        sifted_bits: n as u64,
        sift_rate: n as f64 / config.pulses as f64,
        sampled_bits: sample_size as u64,
        sampled_errors: sampled_errors as u64,
        sampled_qber,
        sifted_errors: sifted_errors as u64,
        sifted_qber: ratio(sifted_errors, n),
        final_key,
        secret_bits: secret.max(0.0).floor() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn config(pulses: u64, eve: Eavesdropper, channel: ChannelModel) -> Bb84Config {
        Bb84Config {
            pulses,
            eve,
            channel,
            sample_fraction: 0.5,
        }
    }

    #[test]
    fn channel_transmission() {
        assert_eq!(ChannelModel::new(0.0, 22.0).unwrap().transmission(), 1.0);
        let c = ChannelModel::new(22.0, 22.0).unwrap();
        assert_eq!(c.transmission(), (-1.0f64).exp());
        assert!(ChannelModel::new(-1.0, 1.0).is_err());
        assert!(ChannelModel::new(1.0, 0.0).is_err());
    }

    #[test]
    fn honest_lossless_run() {
        let n = 20_000;
        let s = bb84_run(&config(n, Eavesdropper::None, ChannelModel::lossless()), 11).unwrap();
        let sigma = (0.25 / n as f64).sqrt();
        assert!((s.sift_rate - 0.5).abs() < 3.0 * sigma, "{}", s.sift_rate);
        assert_eq!(s.sampled_qber, 0.0);
        assert_eq!(s.sifted_qber, 0.0);
        assert_eq!(s.delivered, n);
        assert_eq!(s.sampled_bits + s.final_key.len() as u64, s.sifted_bits);
        assert_eq!(s.sift_rate, s.sifted_bits as f64 / n as f64);
        assert_eq!(s.secret_bits, s.final_key.len() as u64);
    }

    #[test]
    fn intercept_resend_gives_quarter_errors() {
        let s = bb84_run(&config(40_000, Eavesdropper::InterceptResend, ChannelModel::lossless()), 2).unwrap();
        let sigma = (0.25 * 0.75 / s.sifted_bits as f64).sqrt();
        assert!((s.sifted_qber - 0.25).abs() < 3.0 * sigma, "{}", s.sifted_qber);
        assert_eq!(s.secret_bits, 0);
    }

    #[test]
    fn loss_never_causes_errors() {
        for length in [0.5, 1.0, 3.0] {
            let ch = ChannelModel::new(length, 1.0).unwrap();
            let s = bb84_run(&config(20_000, Eavesdropper::None, ch), 4).unwrap();
            assert_eq!(s.sifted_errors, 0);
            let t = ch.transmission();
            let frac = s.delivered as f64 / 20_000.0;
            let sigma = (t * (1.0 - t) / 20_000.0).sqrt();
            assert!((frac - t).abs() < 3.5 * sigma, "{frac} vs {t}");
        }
        let s = bb84_run(&config(30_000, Eavesdropper::None, ChannelModel::new(1.0, 1.0).unwrap()), 9).unwrap();
        assert_abs_diff_eq!(s.delivered as f64 / 30_000.0, 0.3679, epsilon = 0.01);
    }

    #[test]
    fn reproducible_and_prefix_stable() {
        let c = config(2_000, Eavesdropper::InterceptResend, ChannelModel::lossless());
        assert_eq!(bb84_run(&c, 5).unwrap(), bb84_run(&c, 5).unwrap());
        let json = serde_json::to_value(bb84_run(&c, 5).unwrap()).unwrap();
        let key = json["final_key"].as_str().unwrap();
        assert!(key.chars().all(|ch| ch == '0' || ch == '1'));
    }

    #[test]
    fn rejects_bad_config() {
        assert!(bb84_run(&config(0, Eavesdropper::None, ChannelModel::lossless()), 1).is_err());
        let mut c = config(10, Eavesdropper::None, ChannelModel::lossless());
        c.sample_fraction = 1.0;
        assert!(bb84_run(&c, 1).is_err());
    }
}

use std::f64::consts::FRAC_1_SQRT_2;

use anyhow::{bail, ensure, Result};
use linoptics::comm::{bb84_run, repeater_rate, teleport_branches, Bb84Config, ChannelModel, Eavesdropper, RepeaterConfig};
use linoptics::compute::{
    build_cluster, cz_gate, cz_target, distance_up_to_phase, fusion_type1, fusion_type2, mbqc_single_qubit,
    mbqc_target, ns_coefficients, ns_gate, ns_target, Graph, Type1Outcome, Type2Outcome,
};
use linoptics::fock::{FockBasisState, StateVector};
use linoptics::measurement::{BellMode, BellState};
use linoptics::metrology::{
    coherent_decade, micrometer_estimate, quadrature_variance, scaling_sweep, DoubleSlit, MicrometerConfig,
    ProbeState, Quadrature, ScalingProbe,
};
use linoptics::photon_stats::{g2_curve, g2_zero, g2_zero_state, hom_coincidence, CountDistribution, HomInput};
use linoptics::register::PolarizationRegister;
use linoptics::rng::Seeds;
use num_complex::Complex64;
use rand::Rng;
use serde_json::{json, Value};

use crate::args::*;
use crate::report::{Outcome, Table};

/// Options shared by every experiment.
#[derive(Debug, Clone, Copy, Default)]
pub struct Globals {
    pub seed: u64,
    pub shots: Option<u64>,
    pub cutoff: Option<u32>,
}

impl Globals {
    fn exact(&self, name: &str) -> Result<()> {
        ensure!(self.shots.is_none(), "{name} is exact and takes no --shots");
        Ok(())
    }

    fn untruncated(&self, name: &str) -> Result<()> {
        ensure!(self.cutoff.is_none(), "{name} has a fixed photon number and takes no --cutoff");
        Ok(())
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

/// `n` points from `lo` to `hi` inclusive.
fn grid(lo: f64, hi: f64, n: usize, name: &str) -> Result<Vec<f64>> {
    ensure!(n >= 2, "{name} must be at least 2");
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

fn positive(x: f64, name: &str) -> Result<()> {
    ensure!(x > 0.0 && x.is_finite(), "{name} must be positive, got {x}");
    Ok(())
}

pub fn hom(a: &HomArgs, g: &Globals) -> Result<Outcome> {
    g.exact("hom")?;
    ensure!(a.tau_max >= 0.0 && a.tau_max.is_finite(), "tau-max must be non-negative");
    positive(a.tau_c, "tau-c")?;
    let (input, cutoff) = match a.input {
        HomSource::Pair => {
            g.untruncated("hom --input pair")?;
            (HomInput::SinglePhotonPair, None)
        }
        HomSource::Coherent => {
            let cutoff = g.cutoff.unwrap_or(12);
            (
                HomInput::PhotonPlusCoherent {
                    mean_photons: a.mean_photons,
                    cutoff,
                },
                Some(cutoff),
            )
        }
    };
    // tau_i = -max + 2 max i / (steps - 1)
    let taus = grid(-a.tau_max, a.tau_max, a.tau_steps, "tau-steps")?;
    let points = taus
        .iter()
        .map(|&t| hom_coincidence(t, a.tau_c, input))
        .collect::<linoptics::Result<Vec<_>>>()?;
    let mut table = Table::new(vec!["delay", "coincidence", "truncation_residual"]);
    for p in &points {
        table.push(vec![p.delay.into(), p.coincidence.into(), p.truncation_residual.into()]);
    }
    let min = points.iter().map(|p| p.coincidence).fold(f64::INFINITY, f64::min);
    let max = points.iter().map(|p| p.coincidence).fold(f64::NEG_INFINITY, f64::max);
    let results = json!({
        "points": points,
        "min_coincidence": min,
        "max_coincidence": max,
        "visibility": if max > 0.0 { (max - min) / max } else { 0.0 },
    });
    let out = Outcome::curve(results, table);
    Ok(match cutoff {
        Some(c) => {
            let residual = points.iter().map(|p| p.truncation_residual).fold(0.0, f64::max);
            out.with_cutoff(c, residual)
        }
        None => out,
    })
}

pub fn g2(a: &G2Args, g: &Globals) -> Result<Outcome> {
    let (dist, g2_0, cutoff, residual) = match a.source {
        LightSource::Coherent => {
            positive(a.mean_photons, "mean-photons")?;
            let cutoff = g.cutoff.unwrap_or(60);
            let t = StateVector::coherent(c(a.mean_photons.sqrt()), cutoff)?;
            (CountDistribution::from_state(&t.state)?, g2_zero_state(&t.state)?, Some(cutoff), t.dropped_norm)
        }
        LightSource::Thermal => {
            g.untruncated("g2 --source thermal")?;
            let d = CountDistribution::thermal(a.mean_photons)?;
            let g2 = g2_zero(&d)?;
            let residual = (1.0 - d.total()).max(0.0);
            (d, g2, None, residual)
        }
        LightSource::Fock => {
            g.untruncated("g2 --source fock")?;
            let d = CountDistribution::fock(a.n);
            let g2 = g2_zero(&d)?;
            (d, g2, None, 0.0)
        }
    };
    ensure!(a.tau_max >= 0.0 && a.tau_max.is_finite(), "tau-max must be non-negative");
    let taus = grid(0.0, a.tau_max, a.tau_steps, "tau-steps")?;
    let curve = g2_curve(g2_0, a.tau_c, &taus)?;
    let mut table = Table::new(vec!["tau", "g2"]);
    for &(t, v) in &curve {
        table.push(vec![t.into(), v.into()]);
    }
    // One stream for the whole batch of counts: more shots only append draws.
    let sampled = g.shots.map(|shots| {
        let mut rng = Seeds::new(g.seed).stream(0);
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..shots {
            let n = f64::from(dist.sample(&mut rng));
            s1 += n;
            s2 += n * n;
        }
        let m = s1 / shots as f64;
        let m2 = s2 / shots as f64;
        json!({
            "mean": m,
            "g2_zero": if m > 0.0 { Some((m2 - m) / (m * m)) } else { None },
        })
    });
    let results = json!({
        "source": a.source,
        "mean_photons": dist.mean(),
        "g2_zero": g2_0,
        "curve": curve.iter().map(|&(t, v)| json!({"tau": t, "g2": v})).collect::<Vec<_>>(),
        "sampled": sampled,
    });
    let mut out = Outcome::curve(results, table);
    out.shots = g.shots;
    Ok(match cutoff {
        Some(cut) => out.with_cutoff(cut, residual),
        None => {
            out.truncation_residual = Some(residual);
            out
        }
    })
}

pub fn double_slit(a: &DoubleSlitArgs, g: &Globals) -> Result<Outcome> {
    g.untruncated("double-slit")?;
    let photons = a.photons.or(g.shots).unwrap_or(100_000);
    ensure!(photons > 0, "photons must be positive");
    let ds = DoubleSlit::new(a.width, a.separation, a.distance, a.wavelength)?;
    let mut rng = Seeds::new(g.seed).stream(0);
    let samples = ds.sample(photons as usize, &mut rng);
    let chi = ds.chi_square(&samples, a.bins)?;
    let w = ds.window();
    let width = 2.0 * w / a.bins as f64;
    let mut counts = vec![0u64; a.bins];
    for &x in &samples {
        let k = (((x + w) / width) as usize).min(a.bins - 1);
        counts[k] += 1;
    }
    let mut table = Table::new(vec!["x", "count", "intensity"]);
    let mut histogram = Vec::with_capacity(a.bins);
    for (k, &n) in counts.iter().enumerate() {
        let x = -w + (k as f64 + 0.5) * width;
        let i = ds.intensity(x);
        table.push(vec![x.into(), n.into(), i.into()]);
        histogram.push(json!({"x": x, "count": n, "intensity": i}));
    }
    let results = json!({
        "window": w,
        "first_cosine_zero": a.distance * a.wavelength / (2.0 * a.separation),
        "photons": photons,
        "chi_square": chi,
        "histogram": histogram,
    });
    Ok(Outcome::curve(results, table).with_shots(photons))
}

pub fn bb84(a: &Bb84Args, g: &Globals) -> Result<Outcome> {
    g.untruncated("bb84")?;
    let pulses = a.pulses.or(g.shots).unwrap_or(10_000);
    let channel = ChannelModel::new(a.length, a.attenuation_length)?;
    let config = Bb84Config {
        pulses,
        eve: match a.eve {
            EveArg::None => Eavesdropper::None,
            EveArg::InterceptResend => Eavesdropper::InterceptResend,
        },
        channel,
        sample_fraction: a.sample_fraction,
    };
    let stats = bb84_run(&config, g.seed)?;
    let mut results = to_value(&stats);
    results["transmission"] = json!(channel.transmission());
    results["qber"] = json!(stats.sampled_qber);
    Ok(Outcome::json(results).with_shots(pulses))
}

fn bell(b: BellArg) -> BellState {
    match b {
        BellArg::PhiPlus => BellState::PhiPlus,
        BellArg::PhiMinus => BellState::PhiMinus,
        BellArg::PsiPlus => BellState::PsiPlus,
        BellArg::PsiMinus => BellState::PsiMinus,
    }
}

pub fn teleport(a: &TeleportArgs, g: &Globals) -> Result<Outcome> {
    g.untruncated("teleport")?;
    let runs = a.runs.or(g.shots).unwrap_or(1000);
    let input = [c((a.theta / 2.0).cos()), Complex64::from_polar((a.theta / 2.0).sin(), a.phi)];
    let mode = match a.bell_mode {
        BellModeArg::Ideal => BellMode::Ideal,
        BellModeArg::LinearOptical => BellMode::LinearOptical,
    };
    let branches = teleport_branches(input, bell(a.resource), mode)?;
    let total: f64 = branches.iter().map(|b| b.probability).sum();
    let seeds = Seeds::new(g.seed);
    let mut counts = vec![0u64; branches.len()];
    for k in 0..runs {
        let u = seeds.stream(k).random::<f64>() * total;
        let mut acc = 0.0;
        let mut pick = branches.len() - 1;
        for (i, b) in branches.iter().enumerate() {
            acc += b.probability;
            if u < acc {
                pick = i;
                break;
            }
        }
        counts[pick] += 1;
    }
    let mut table = Table::new(vec!["detection", "bell_label", "probability", "count", "fidelity"]);
    let mut rows = Vec::with_capacity(branches.len());
    for (b, &n) in branches.iter().zip(&counts) {
        let label = b.bell_label.map_or("fail", |l| l.label());
        table.push(vec![
            b.detection.clone().into(),
            label.into(),
            b.probability.into(),
            n.into(),
            b.fidelity.unwrap_or(f64::NAN).into(),
        ]);
        rows.push(json!({
            "detection": b.detection,
            "bell_label": b.bell_label.map(BellState::label),
            "probability": b.probability,
            "correction": b.correction,
            "fidelity": b.fidelity,
            "count": n,
        }));
    }
    let success: f64 = branches.iter().filter(|b| b.bell_label.is_some()).map(|b| b.probability).sum();
    let worst = branches.iter().filter_map(|b| b.fidelity).fold(1.0, f64::min);
    let results = json!({
        "input": input,
        "resource": bell(a.resource).label(),
        "success_probability": success,
        "min_fidelity": worst,
        "runs": runs,
        "outcomes": rows,
    });
    Ok(Outcome::json(results).with_table(table).with_shots(runs))
}

pub fn repeater(a: &RepeaterArgs, g: &Globals) -> Result<Outcome> {
    g.untruncated("repeater")?;
    let slots = a.slots.or(g.shots).unwrap_or(100_000);
    let config = RepeaterConfig {
        total_length: a.total_length,
        segments: a.segments,
        attenuation_length: a.attenuation_length,
        swap_success: a.swap_success,
        slots,
    };
    let report = repeater_rate(&config, g.seed)?;
    let mut results = to_value(&report);
    results["segment_transmission"] =
        json!((-a.total_length / (f64::from(a.segments.max(1)) * a.attenuation_length)).exp());
    results["advantage"] = json!(report.repeater_rate / report.direct_rate);
    Ok(Outcome::json(results).with_shots(slots))
}

fn fock_state(amplitudes: &[f64]) -> Result<StateVector> {
    let entries = amplitudes
        .iter()
        .enumerate()
        .map(|(n, &x)| (FockBasisState::new(vec![n as u32]), c(x)));
    Ok(StateVector::from_amplitudes(1, 2, entries)?.normalized()?)
}

pub fn ns_gate_cmd(a: &NsGateArgs, g: &Globals) -> Result<Outcome> {
    g.exact("ns-gate")?;
    g.untruncated("ns-gate")?;
    ensure!(a.amplitudes.len() == 3, "need exactly three amplitudes");
    let solution = ns_coefficients()?;
    let input = fock_state(&a.amplitudes)?;
    let result = ns_gate(&input)?;
    let target = ns_target(&input)?;
    let Some(output) = result.output_state.as_ref() else {
        bail!("sign gate never heralds success on this input");
    };
    let amps: Vec<Complex64> = (0..3).map(|n| output.amplitude(&FockBasisState::new(vec![n]))).collect();
    let mut basis = Vec::new();
    for n in 0..3 {
        let mut e = [0.0; 3];
        e[n] = 1.0;
        let r = ns_gate(&fock_state(&e)?)?;
        let amp = r.output_state.map(|s| s.amplitude(&FockBasisState::new(vec![n as u32])));
        basis.push(json!({"n": n, "success_probability": r.success_probability, "amplitude": amp}));
    }
    let results = json!({
        "solution": solution,
        "input": input.iter().map(|(k, a)| (k.occupation(0), *a)).collect::<Vec<_>>(),
        "success_probability": result.success_probability,
        "output": amps,
        "fidelity": target.fidelity(output)?,
        "basis": basis,
    });
    Ok(Outcome::json(results))
}

const TWO_QUBIT_LABELS: [&str; 4] = ["HH", "HV", "VH", "VV"];

pub fn cz_gate_cmd(_a: &CzGateArgs, g: &Globals) -> Result<Outcome> {
    g.exact("cz-gate")?;
    g.untruncated("cz-gate")?;
    let reg = PolarizationRegister::contiguous(2);
    let mut table = Table::new(vec!["input", "output", "phase", "success_probability"]);
    let mut rows = Vec::new();
    for (bits, label) in TWO_QUBIT_LABELS.iter().enumerate() {
        let mut amps = [c(0.0); 4];
        amps[bits] = c(1.0);
        let result = cz_gate(&reg.encode(&amps)?)?;
        let Some(out) = result.output_state.as_ref() else {
            bail!("cz gate never heralds success on {label}");
        };
        let decoded = reg.decode(out)?;
        let (k, amp) = decoded
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
            .expect("four amplitudes");
        let phase = amp.re.signum();
        table.push(vec![(*label).into(), TWO_QUBIT_LABELS[k].into(), phase.into(), result.success_probability.into()]);
        rows.push(json!({
            "input": label,
            "output": TWO_QUBIT_LABELS[k],
            "phase": phase,
            "amplitude": amp,
            "success_probability": result.success_probability,
        }));
    }
    let h = c(0.5);
    let plus = reg.encode(&[h, h, h, h])?;
    let result = cz_gate(&plus)?;
    let fidelity = match &result.output_state {
        Some(s) => Some(cz_target(&plus).fidelity(s)?),
        None => None,
    };
    let results = json!({
        "truth_table": rows,
        "plus_plus": {"success_probability": result.success_probability, "fidelity": fidelity},
    });
    Ok(Outcome::json(results).with_table(table))
}

fn kron(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

fn overlap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm_sqr()
}

pub fn fusion(a: &FusionArgs, g: &Globals) -> Result<Outcome> {
    g.exact("fusion")?;
    g.untruncated("fusion")?;
    let reg = PolarizationRegister::contiguous(4);
    let pair = BellState::PhiPlus.amplitudes();
    let state = reg.encode(&kron(&pair, &pair))?;
    let s = FRAC_1_SQRT_2;
    let mut table = Table::new(vec!["outcome", "success", "probability", "fidelity", "target"]);
    let mut rows = Vec::new();
    let mut total = 0.0;
    let mut push = |outcome: Value,
                    success: bool,
                    probability: f64,
                    decoded: Option<Vec<Complex64>>,
                    target: Option<(&str, Vec<Complex64>)>| {
        total += probability;
        let (name, fid) = match (&decoded, &target) {
            (Some(d), Some((name, t))) => (Some(*name), Some(overlap(t, d))),
            _ => (None, None),
        };
        let label = outcome.as_str().unwrap_or_default().to_string();
        table.push(vec![
            label.into(),
            u64::from(success).into(),
            probability.into(),
            fid.unwrap_or(f64::NAN).into(),
            name.unwrap_or("").into(),
        ]);
        rows.push(json!({
            "outcome": outcome,
            "success": success,
            "probability": probability,
            "post_state": decoded,
            "target": name,
            "fidelity": fid,
        }));
    };
    match a.kind {
        FusionKind::Type1 => {
            for o in Type1Outcome::ALL {
                let b = fusion_type1(&state, &reg, 1, 2, o)?;
                let decoded = b.post_state.as_ref().map(|p| b.register.decode(p)).transpose()?;
                let target = match o {
                    Type1Outcome::Plus => Some(("ghz+", ghz3(s))),
                    Type1Outcome::Minus => Some(("ghz-", ghz3(-s))),
                    _ => None,
                };
                push(to_value(&o), o.is_success(), b.probability, decoded, target);
            }
        }
        FusionKind::Type2 => {
            for o in Type2Outcome::ALL {
                let b = fusion_type2(&state, &reg, 1, 2, o)?;
                let decoded = b.post_state.as_ref().map(|p| b.register.decode(p)).transpose()?;
                let target = decoded.as_ref().map(|d| {
                    let best = BellState::ALL
                        .into_iter()
                        .max_by(|x, y| overlap(&x.amplitudes(), d).total_cmp(&overlap(&y.amplitudes(), d)))
                        .expect("four Bell states");
                    (best.label(), best.amplitudes().to_vec())
                });
                push(to_value(&o), o.is_success(), b.probability, decoded, target);
            }
        }
    }
    let results = json!({
        "kind": a.kind,
        "fused_qubits": [1, 2],
        "branches": rows,
        "total_probability": total,
    });
    Ok(Outcome::json(results).with_table(table))
}

fn ghz3(last: f64) -> Vec<Complex64> {
    let mut v = vec![c(0.0); 8];
    v[0] = c(FRAC_1_SQRT_2);
    v[7] = c(last);
    v
}

pub fn cluster_mbqc(a: &ClusterMbqcArgs, g: &Globals) -> Result<Outcome> {
    g.untruncated("cluster-mbqc")?;
    let runs = a.runs.or(g.shots).unwrap_or(100);
    let graph = Graph::line(a.vertices);
    let cluster = build_cluster(&graph)?;
    let stabilizers = (0..a.vertices)
        .map(|v| cluster.stabilizer_expectation(v))
        .collect::<linoptics::Result<Vec<_>>>()?;
    let target = mbqc_target(a.alpha, a.beta, a.gamma);
    let seeds = Seeds::new(g.seed);
    let mut table = Table::new(vec!["run", "outcomes", "byproduct", "distance"]);
    let mut patterns = std::collections::BTreeMap::<String, u64>::new();
    let mut worst: f64 = 0.0;
    for k in 0..runs {
        let run = mbqc_single_qubit([a.alpha, a.beta, a.gamma], &mut seeds.stream(k))?;
        let d = distance_up_to_phase(&run.effective_matrix(), &target);
        worst = worst.max(d);
        let bits: String = run.outcomes.iter().map(|&m| if m { '1' } else { '0' }).collect();
        *patterns.entry(bits.clone()).or_default() += 1;
        table.push(vec![k.into(), bits.into(), format!("{:?}", run.byproduct).into(), d.into()]);
    }
    let results = json!({
        "graph": graph,
        "stabilizers": stabilizers,
        "angles": [a.alpha, a.beta, a.gamma],
        "runs": runs,
        "outcome_counts": patterns,
        "max_distance": worst,
    });
    Ok(Outcome::json(results).with_table(table).with_shots(runs))
}

pub fn noon_scaling(a: &NoonScalingArgs, g: &Globals) -> Result<Outcome> {
    g.untruncated("noon-scaling")?;
    let shots = g.shots.unwrap_or(1000);
    let (probe, resources) = match a.probe {
        ProbeArg::ZeroN => {
            ensure!(a.max_n >= 2, "max-n must be at least 2");
            (ScalingProbe::ZeroN, (1..=a.max_n).map(f64::from).collect::<Vec<_>>())
        }
        ProbeArg::Coherent => (ScalingProbe::Coherent, coherent_decade()),
    };
    let sweep = scaling_sweep(probe, &resources, shots, a.repetitions, g.seed)?;
    let mut table = Table::new(vec!["resource", "delta_phi", "stderr"]);
    for p in &sweep.points {
        table.push(vec![p.resource.into(), p.delta_phi.into(), p.stderr.into()]);
    }
    Ok(Outcome::curve(to_value(&sweep), table).with_shots(shots))
}

pub fn squeeze(a: &SqueezeArgs, g: &Globals) -> Result<Outcome> {
    g.exact("squeeze")?;
    ensure!(a.r_max >= 0.0 && a.r_max.is_finite(), "r-max must be non-negative");
    let cutoff = g.cutoff.unwrap_or(50);
    let rs = grid(0.0, a.r_max, a.r_steps, "r-steps")?;
    let mut table = Table::new(vec![
        "r",
        "variance_x",
        "variance_y",
        "product",
        "expected_x",
        "expected_y",
        "truncation_residual",
    ]);
    let mut points = Vec::new();
    let mut worst: f64 = 0.0;
    for r in rs {
        let probe = ProbeState::squeezed_vacuum(r, cutoff)?;
        let vx = quadrature_variance(&probe.state, Quadrature::X)?;
        let vy = quadrature_variance(&probe.state, Quadrature::Y)?;
        let residual = probe.truncation_residual.max(vx.truncation_residual).max(vy.truncation_residual);
        worst = worst.max(residual);
        let (ex, ey) = ((-2.0 * r).exp() / 2.0, (2.0 * r).exp() / 2.0);
        let product = vx.variance * vy.variance;
        table.push(vec![
            r.into(),
            vx.variance.into(),
            vy.variance.into(),
            product.into(),
            ex.into(),
            ey.into(),
            residual.into(),
        ]);
        points.push(json!({
            "r": r,
            "variance_x": vx.variance,
            "variance_y": vy.variance,
            "product": product,
            "expected_x": ex,
            "expected_y": ey,
            "truncation_residual": residual,
        }));
    }
    Ok(Outcome::curve(json!({ "points": points }), table).with_cutoff(cutoff, worst))
}

pub fn micrometer(a: &MicrometerArgs, g: &Globals) -> Result<Outcome> {
    g.untruncated("micrometer")?;
    let photons = a.photons.or(g.shots).unwrap_or(100_000);
    let config = MicrometerConfig {
        wavelength: a.wavelength,
        length: a.length,
        separation: a.separation,
        photons: photons as f64,
        pixels: a.pixels,
        noiseless: a.noiseless,
    };
    let estimate = micrometer_estimate(&config, g.seed)?;
    Ok(Outcome::json(to_value(&estimate)).with_shots(photons))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn globals() -> Globals {
        Globals::default()
    }

    #[test]
    fn hom_grid_hits_zero_delay() {
        let a = HomArgs {
            tau_max: 3.0,
            tau_steps: 61,
            tau_c: 1.0,
            input: HomSource::Pair,
            mean_photons: 1.0,
        };
        let out = hom(&a, &globals()).unwrap();
        let t = out.table.unwrap();
        assert_eq!(t.rows.len(), 61);
        assert_eq!(t.rows[30][0], 0.0.into());
        assert_eq!(t.rows[0][0], (-3.0).into());
        assert_eq!(t.rows[60][0], 3.0.into());
        let crate::report::Cell::Num(dip) = t.rows[30][1] else { panic!() };
        assert!(dip.abs() < 1e-12);
    }

    #[test]
    fn exact_experiments_reject_shots() {
        let g = Globals {
            shots: Some(10),
            ..globals()
        };
        assert!(squeeze(&SqueezeArgs { r_max: 1.0, r_steps: 3 }, &g).is_err());
        assert!(cz_gate_cmd(&CzGateArgs {}, &g).is_err());
        let g = Globals {
            cutoff: Some(10),
            ..globals()
        };
        assert!(fusion(&FusionArgs { kind: FusionKind::Type1 }, &g).is_err());
    }

    #[test]
    fn grid_endpoints() {
        assert_eq!(grid(-1.0, 1.0, 3, "n").unwrap(), vec![-1.0, 0.0, 1.0]);
        assert!(grid(0.0, 1.0, 1, "n").is_err());
    }
}

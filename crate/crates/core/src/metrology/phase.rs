use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fock::{FockBasisState, StateVector};
use crate::optics::{Circuit, Element, FIFTY_FIFTY};
use crate::rng::Seeds;

use super::probe::ProbeState;

/// `|<A>|` above this is treated as the arccos singularity.
const SINGULAR: f64 = 1.0 - 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionEstimate {
    pub parameter: String,
    pub truth: f64,
    pub estimate: f64,
    pub standard_error: f64,
    pub shots: u64,
    /// Photon number `N` or mean photon number per shot.
    pub resource: f64,
    /// Set when the estimate sits at an inversion singularity and the
    /// propagated error is unreliable.
    pub singular: bool,
}

fn check_shots(shots: u64) -> Result<()> {
    if shots < 100 {
        return Err(invalid("shots", "must be at least 100"));
    }
    Ok(())
}

/// Estimates `phi` from `M` two-outcome measurements of
/// `A = |N><0| + |0><N|` on `(|0> + e^{iN phi}|N>)/sqrt2`.
pub fn phase_estimate_zero_n<R: Rng + ?Sized>(n: u32, phi: f64, shots: u64, rng: &mut R) -> Result<PrecisionEstimate> {
    check_shots(shots)?;
    let probe = ProbeState::zero_n(n)?;
    let expectation = probe.observable_expectation(phi)?;
    let p_plus = ((1.0 + expectation) / 2.0).clamp(0.0, 1.0);
    let plus = Binomial::new(shots, p_plus).map_err(|e| invalid("probability", e.to_string()))?.sample(rng);
    let a_hat = 2.0 * plus as f64 / shots as f64 - 1.0;
    let nf = f64::from(n);
    let estimate = a_hat.clamp(-1.0, 1.0).acos() / nf;
    let singular = a_hat.abs() >= SINGULAR;
    // Var(A_hat) = (1 - A^2)/M and dA/dphi = -N sin(N phi).
    let standard_error = if singular {
        1.0 / (nf * (shots as f64).sqrt())
    } else {
        let var_a = (1.0 - a_hat * a_hat) / shots as f64;
        var_a.sqrt() / (nf * (1.0 - a_hat * a_hat).sqrt())
    };
    Ok(PrecisionEstimate {
        parameter: "phi".into(),
        truth: phi,
        estimate,
        standard_error,
        shots,
        resource: nf,
        singular,
    })
}

/// Single-photon Mach-Zehnder with phase `phi` on the lower arm.
pub fn mach_zehnder(phi: f64) -> Result<Circuit> {
    Circuit::new(
        2,
        vec![
            Element::beam_splitter(FIFTY_FIFTY, 0, 1),
            Element::phase_shifter(phi, 1),
            Element::beam_splitter(FIFTY_FIFTY, 0, 1),
        ],
    )
}

/// Probability that a photon entering port 0 leaves by port 0.
pub fn mach_zehnder_port0(phi: f64) -> Result<f64> {
    let input = StateVector::basis(FockBasisState::single(2, 0), 1)?;
    let out = mach_zehnder(phi)?.apply(&input)?;
    Ok(out.amplitude(&FockBasisState::single(2, 0)).norm_sqr())
}

/// Coherent light of mean `mean_photons` per shot through the
/// interferometer; `phi` is recovered from the port-0 fraction of all
/// counted photons. A coherent state splits into independent coherent
/// states, so each port's total over `M` shots is Poisson.
pub fn shot_noise_baseline<R: Rng + ?Sized>(
    mean_photons: f64,
    phi: f64,
    shots: u64,
    rng: &mut R,
) -> Result<PrecisionEstimate> {
    check_shots(shots)?;
    if !(mean_photons > 0.0) {
        return Err(invalid("mean_photons", "must be positive"));
    }
    let p0 = mach_zehnder_port0(phi)?;
    let total_mean = mean_photons * shots as f64;
    let draw = |mean: f64, rng: &mut R| -> Result<f64> {
        if mean <= 0.0 {
            return Ok(0.0);
        }
        Ok(Poisson::new(mean).map_err(|e| invalid("mean", e.to_string()))?.sample(rng))
    };
    let n0 = draw(total_mean * p0, rng)?;
    let n1 = draw(total_mean * (1.0 - p0), rng)?;
    let counted = n0 + n1;
    let p_hat = if counted > 0.0 { n0 / counted } else { 0.5 };
    let estimate = (2.0 * p_hat - 1.0).clamp(-1.0, 1.0).acos();
    let singular = counted == 0.0 || (2.0 * p_hat - 1.0).abs() >= SINGULAR;
    // 4 p (1-p) = sin^2 phi, so the propagated error is 1/sqrt(counts).
    let standard_error = 1.0 / counted.max(1.0).sqrt();
    Ok(PrecisionEstimate {
        parameter: "phi".into(),
        truth: phi,
        estimate,
        standard_error,
        shots,
        resource: mean_photons,
        singular,
    })
}

/// Mean over `samples` draws of Poisson(`mean`) counts divided by their
/// standard deviation.
pub fn intensity_snr(mean_photons: f64, samples: usize, seed: u64) -> Result<f64> {
    if !(mean_photons > 0.0) {
        return Err(invalid("mean_photons", "must be positive"));
    }
    if samples < 2 {
        return Err(invalid("samples", "need at least two"));
    }
    let mut rng = Seeds::new(seed).stream(0);
    let dist = Poisson::new(mean_photons).map_err(|e| invalid("mean_photons", e.to_string()))?;
    let draws: Vec<f64> = (0..samples).map(|_| dist.sample(&mut rng)).collect();
    let mean = draws.iter().sum::<f64>() / samples as f64;
    let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
    Ok(mean / var.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingProbe {
    /// `|0> + |N>`, equivalently NOON; resource is `N`.
    ZeroN,
    /// Coherent light; resource is the mean photon number per shot.
    Coherent,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub resource: f64,
    /// Root-mean-square error of the estimate over the repetitions.
    pub delta_phi: f64,
    /// Mean reported standard error.
    pub stderr: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Least-squares fit of `ln y` against `ln x`.
pub fn log_log_fit(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < 2 {
        return Err(invalid("points", "need at least two"));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(invalid("points", "log fit needs positive values"));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("points", "x values must differ"));
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
        r2,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingSweep {
    pub probe: ScalingProbe,
    pub shots: u64,
    pub repetitions: u64,
    pub points: Vec<ScalingPoint>,
    /// Log-log fit of `delta_phi` against the resource; absent with fewer
    /// than two points.
    pub fit: Option<LinearFit>,
}

impl ScalingSweep {
    /// `resource,delta_phi,stderr` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("resource,delta_phi,stderr\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{}\n", p.resource, p.delta_phi, p.stderr));
        }
        out
    }
}

/// Operating point used by the sweeps: mid-fringe, `pi/(2N)` for the
/// `|0> + |N>` probe and `pi/2` for coherent light.
pub fn operating_point(probe: ScalingProbe, resource: f64) -> f64 {
    match probe {
        ScalingProbe::ZeroN => FRAC_PI_2 / resource,
        ScalingProbe::Coherent => FRAC_PI_2,
    }
}

/// Repeats the estimate `repetitions` times per resource value. Resource
/// `i` uses child seed `i` of `seed`, repetition `k` its stream `k`; points
/// run in parallel and come back in input order.
pub fn scaling_sweep(
    probe: ScalingProbe,
    resources: &[f64],
    shots: u64,
    repetitions: u64,
    seed: u64,
) -> Result<ScalingSweep> {
    if repetitions == 0 {
        return Err(invalid("repetitions", "must be at least 1"));
    }
    let seeds = Seeds::new(seed);
    let points = resources
        .par_iter()
        .enumerate()
        .map(|(i, &resource)| {
            let child = seeds.child(i as u64);
            let phi = operating_point(probe, resource);
            let mut sq = 0.0;
            let mut se = 0.0;
            for k in 0..repetitions {
                let mut rng = child.stream(k);
                let e = match probe {
                    ScalingProbe::ZeroN => {
                        if resource < 1.0 || resource.fract() != 0.0 || resource > f64::from(u32::MAX) {
                            return Err(invalid("resource", "N must be a positive integer"));
                        }
                        phase_estimate_zero_n(resource as u32, phi, shots, &mut rng)?
                    }
                    ScalingProbe::Coherent => shot_noise_baseline(resource, phi, shots, &mut rng)?,
                };
                sq += (e.estimate - phi).powi(2);
                se += e.standard_error;
            }
            Ok(ScalingPoint {
                resource,
                delta_phi: (sq / repetitions as f64).sqrt(),
                stderr: se / repetitions as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = if points.len() >= 2 {
        Some(log_log_fit(&points.iter().map(|p| (p.resource, p.delta_phi)).collect::<Vec<_>>())?)
    } else {
        None
    };
    Ok(ScalingSweep {
        probe,
        shots,
        repetitions,
        points,
        fit,
    })
}

/// `1 / (2 Delta K)` for one shot, with `K` the photon number on the phase
/// mode.
pub fn heisenberg_bound(probe: &ProbeState) -> Result<f64> {
    let spread = probe.generator_std()?;
    if spread == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (2.0 * spread))
}

/// Default one-decade grid of mean photon numbers, `10^(1 + k/9)`.
pub fn coherent_decade() -> Vec<f64> {
    (0..10).map(|k| 10f64.powf(1.0 + k as f64 / 9.0)).collect()
}

/// Phase grid `[0, pi]` used by curve outputs.
pub fn phase_grid(steps: usize) -> Vec<f64> {
    if steps < 2 {
        return vec![0.0];
    }
    (0..steps).map(|k| PI * k as f64 / (steps - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_n_estimate_is_unbiased() {
        let mut rng = Seeds::new(1).stream(0);
        let e = phase_estimate_zero_n(3, 0.4, 100_000, &mut rng).unwrap();
        assert!((e.estimate - 0.4).abs() < 4.0 * e.standard_error);
        assert_abs_diff_eq!(e.standard_error, 1.0 / (3.0 * 100_000f64.sqrt()), epsilon = 1e-4);
        assert!(!e.singular);
        assert!(phase_estimate_zero_n(3, 0.4, 50, &mut rng).is_err());
    }

    #[test]
    fn zero_phase_is_flagged() {
        let mut rng = Seeds::new(1).stream(0);
        let e = phase_estimate_zero_n(2, 0.0, 1000, &mut rng).unwrap();
        assert!(e.singular);
        assert_eq!(e.estimate, 0.0);
    }

    #[test]
    fn interferometer_fringe() {
        for k in 0..10 {
            let phi = k as f64 * 0.3;
            assert_abs_diff_eq!(mach_zehnder_port0(phi).unwrap(), (1.0 + phi.cos()) / 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn doubling_photons_shrinks_error_by_root_two() {
        let sweep = scaling_sweep(ScalingProbe::Coherent, &[20.0, 40.0], 200, 4000, 3).unwrap();
        let ratio = sweep.points[0].delta_phi / sweep.points[1].delta_phi;
        assert!((ratio / 2f64.sqrt() - 1.0).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn snr_is_root_mean() {
        for n in [4.0, 25.0, 100.0] {
            let snr = intensity_snr(n, 100_000, 8).unwrap();
            assert!((snr / f64::sqrt(n) - 1.0).abs() < 0.03, "{n}: {snr}");
        }
    }

    #[test]
    fn heisenberg_bound_respected() {
        let shots = 400;
        for n in [1u32, 2, 4, 6] {
            let probe = ProbeState::zero_n(n).unwrap();
            let bound = heisenberg_bound(&probe).unwrap() / (shots as f64).sqrt();
            let reps = 2000;
            let s = scaling_sweep(ScalingProbe::ZeroN, &[n as f64], shots, reps, 21).unwrap();
            let rmse = s.points[0].delta_phi;
            // RMSE of R draws has relative spread about 1/sqrt(2R).
            let sigma = rmse / (2.0 * reps as f64).sqrt();
            assert!(rmse >= bound - 3.0 * sigma, "N={n}: {rmse} < {bound}");
            let noon = ProbeState::noon(n, 2 * n).unwrap();
            assert_eq!(heisenberg_bound(&noon).unwrap(), heisenberg_bound(&probe).unwrap());
        }
        for mean in [10.0, 50.0] {
            let probe = ProbeState::coherent(mean, 200).unwrap();
            let bound = heisenberg_bound(&probe).unwrap() / (shots as f64).sqrt();
            let s = scaling_sweep(ScalingProbe::Coherent, &[mean], shots, 2000, 5).unwrap();
            assert!(s.points[0].delta_phi >= bound);
        }
    }

    #[test]
    fn sweeps_are_reproducible() {
        let a = scaling_sweep(ScalingProbe::ZeroN, &[1.0, 2.0, 3.0], 100, 50, 9).unwrap();
        let b = scaling_sweep(ScalingProbe::ZeroN, &[1.0, 2.0, 3.0], 100, 50, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.to_csv().starts_with("resource,delta_phi,stderr\n"));
        assert!(scaling_sweep(ScalingProbe::ZeroN, &[1.5], 100, 5, 9).is_err());
    }

    #[test]
    fn fit_recovers_power_law() {
        let pts: Vec<(f64, f64)> = (1..10).map(|n| (n as f64, 3.0 / n as f64)).collect();
        let f = log_log_fit(&pts).unwrap();
        assert_abs_diff_eq!(f.slope, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.intercept, 3f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(f.r2, 1.0, epsilon = 1e-12);
    }
}

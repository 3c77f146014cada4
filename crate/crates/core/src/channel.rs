//! Path-loss gains, fading samplers and composite IRS channel statistics.
//!
//! Every average power gain has the form `β (h² + x²)^(-α/2)` with a
//! horizontal distance `x` and a height offset `h`. The cascaded channel
//! through one IRS is a sum of `N` double-Rayleigh amplitudes; its first two
//! moments feed a Gaussian surrogate, and together with the Rayleigh direct
//! path the received power `Z²` is moment-matched to a Gamma law.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::Exp1;

use crate::{Error, Result};

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

const PI2_16: f64 = PI * PI / 16.0;

/// Scalar constants of the system model.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Cell radius `R_c`, m.
    pub cell_radius: f64,
    pub bs_height: f64,
    pub irs_height: f64,
    pub relay_height: f64,
    /// Transmit power per resource block `P_0`, W.
    pub tx_power: f64,
    /// Receiver noise power `σ²`, W.
    pub noise_power: f64,
    pub carrier_freq: f64,
    /// Path-loss exponent `α`.
    pub pathloss_exp: f64,
    /// Coverage threshold `κ̄` on the IRS-to-direct gain ratio.
    pub kappa_threshold: f64,
    /// Boundary factor `η` widening the IRS region by `η D`.
    pub boundary_factor: f64,
    /// Reflecting elements per IRS `N`.
    pub elements_per_irs: u32,
    /// Number of IRSs `M`.
    pub irs_count: u32,
    /// Number of UEs `K`.
    pub ue_count: u32,
    pub irs_r_in: f64,
    pub irs_r_out: f64,
    /// Number of relays `M_R` in the relay benchmark.
    pub relay_count: u32,
    pub relay_r_in: f64,
    pub relay_r_out: f64,
    /// Fraction `a` of `P_0` spent by the BS in relay mode; the relay gets `1 - a`.
    pub relay_power_split: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams {
            cell_radius: 250.0,
            bs_height: 20.0,
            irs_height: 1.0,
            relay_height: 1.0,
            tx_power: 1e-3,
            noise_power: dbm_to_watts(-110.0),
            carrier_freq: 2e9,
            pathloss_exp: 2.5,
            kappa_threshold: 0.1,
            boundary_factor: 0.1,
            elements_per_irs: 2000,
            irs_count: 50,
            ue_count: 500,
            irs_r_in: 50.0,
            irs_r_out: 150.0,
            relay_count: 50,
            relay_r_in: 0.0,
            relay_r_out: 75.0,
            relay_power_split: 0.5,
        }
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

impl SystemParams {
    /// Checks every model invariant, naming the first violated field.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("cell_radius", self.cell_radius),
            ("tx_power", self.tx_power),
            ("noise_power", self.noise_power),
            ("carrier_freq", self.carrier_freq),
            ("kappa_threshold", self.kappa_threshold),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.pathloss_exp >= 2.0 && self.pathloss_exp.is_finite()) {
            return Err(Error::invalid(format!(
                "pathloss_exp must be at least 2, got {}",
                self.pathloss_exp
            )));
        }
        for (name, v) in [
            ("bs_height", self.bs_height),
            ("irs_height", self.irs_height),
            ("relay_height", self.relay_height),
        ] {
            if !(v >= 1.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be at least 1 m, got {v}")));
            }
        }
        if !(self.boundary_factor > 0.0 && self.boundary_factor <= 1.0) {
            return Err(Error::invalid(format!(
                "boundary_factor must lie in (0, 1], got {}",
                self.boundary_factor
            )));
        }
        if self.elements_per_irs == 0 {
            return Err(Error::invalid("elements_per_irs must be at least 1"));
        }
        if self.ue_count == 0 {
            return Err(Error::invalid("ue_count must be at least 1"));
        }
        check_range("irs", self.irs_r_in, self.irs_r_out, self.cell_radius)?;
        check_range("relay", self.relay_r_in, self.relay_r_out, self.cell_radius)?;
        if !(self.relay_power_split > 0.0 && self.relay_power_split < 1.0) {
            return Err(Error::invalid(format!(
                "relay_power_split must lie in (0, 1), got {}",
                self.relay_power_split
            )));
        }
        Ok(())
    }

    /// Reference SNR `γ_0 = P_0 / σ²`.
    pub fn snr_ref(&self) -> f64 {
        self.tx_power / self.noise_power
    }

    /// Reference gain `β` at this carrier.
    pub fn beta(&self) -> f64 {
        (4.0 * PI * self.carrier_freq / SPEED_OF_LIGHT).powi(-2)
    }

    fn path_gain(&self, horizontal: f64, height: f64) -> f64 {
        self.beta() * (horizontal * horizontal + height * height).powf(-self.pathloss_exp / 2.0)
    }
}

fn check_range(name: &str, r_in: f64, r_out: f64, cell_radius: f64) -> Result<()> {
    if !(r_in >= 0.0 && r_in <= r_out && r_out < cell_radius) {
        return Err(Error::invalid(format!(
            "{name} range must satisfy 0 <= r_in <= r_out < cell_radius, got [{r_in}, {r_out}] with cell radius {cell_radius}"
        )));
    }
    Ok(())
}

/// `β = (4π f_c / c)^-2`, the average power gain at 1 m.
pub fn reference_gain(carrier_freq: f64) -> Result<f64> {
    if !(carrier_freq > 0.0 && carrier_freq.is_finite()) {
        return Err(Error::invalid(format!(
            "carrier frequency must be positive, got {carrier_freq}"
        )));
    }
    Ok((4.0 * PI * carrier_freq / SPEED_OF_LIGHT).powi(-2))
}

/// BS–UE average gain `g_d` at horizontal distance `l`.
pub fn gain_bs_ue(l: f64, p: &SystemParams) -> f64 {
    p.path_gain(l, p.bs_height)
}

/// BS–IRS average gain `g_i` at horizontal distance `r`.
pub fn gain_bs_irs(r: f64, p: &SystemParams) -> f64 {
    p.path_gain(r, p.bs_height - p.irs_height)
}

/// IRS–UE average gain `g_r` at horizontal distance `d`.
pub fn gain_irs_ue(d: f64, p: &SystemParams) -> f64 {
    p.path_gain(d, p.irs_height)
}

/// BS–relay average gain `g_1` at horizontal distance `u`.
pub fn gain_bs_relay(u: f64, p: &SystemParams) -> f64 {
    p.path_gain(u, p.bs_height - p.relay_height)
}

/// Relay–UE average gain `g_2` at horizontal distance `v`.
pub fn gain_relay_ue(v: f64, p: &SystemParams) -> f64 {
    p.path_gain(v, p.relay_height)
}

/// Passive beamforming gain `G_bf = (π²/16) N² + (1 - π²/16) N`.
pub fn beamforming_gain(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("an IRS needs at least one element"));
    }
    let n = n as f64;
    Ok(PI2_16 * n * n + (1.0 - PI2_16) * n)
}

/// Mean `μ` and standard deviation `ω` of the co-phased cascaded amplitude.
pub fn composite_stats(n: u32, g_i: f64, g_r: f64) -> (f64, f64) {
    let n = n as f64;
    let mu = n * PI / 4.0 * (g_i * g_r).sqrt();
    let omega = (n * (1.0 - PI2_16) * g_i * g_r).sqrt();
    (mu, omega)
}

/// Gamma law sharing the first two moments of `Z²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFit {
    pub shape: f64,
    pub scale: f64,
    /// `E{Z²}`
    pub mean: f64,
    /// `var{Z²}`
    pub variance: f64,
}

/// Moment-matches `Z² = (A + B)²` with `A ~ N(μ, ω²)` the cascaded amplitude
/// and `B` a Rayleigh direct-path amplitude of mean power `g_d`.
pub fn gamma_match(n: u32, g_i: f64, g_r: f64, g_d: f64) -> Result<GammaFit> {
    for (name, v) in [("g_i", g_i), ("g_r", g_r), ("g_d", g_d)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::invalid(format!("{name} must be positive, got {v}")));
        }
    }
    if n == 0 {
        return Err(Error::invalid("an IRS needs at least one element"));
    }
    let (mu, omega) = composite_stats(n, g_i, g_r);
    let (mu2, w2) = (mu * mu, omega * omega);
    let a1 = mu;
    let a2 = mu2 + w2;
    let a3 = mu * (mu2 + 3.0 * w2);
    let a4 = mu2 * mu2 + 6.0 * mu2 * w2 + 3.0 * w2 * w2;

    // E[B^m] = g_d^(m/2) Γ(1 + m/2)
    let sqrt_pi = PI.sqrt();
    let sd = g_d.sqrt();
    let b1 = sd * sqrt_pi / 2.0;
    let b2 = g_d;
    let b3 = g_d * sd * 3.0 * sqrt_pi / 4.0;
    let b4 = 2.0 * g_d * g_d;

    let mean = a2 + 2.0 * a1 * b1 + b2;
    let fourth = a4 + 4.0 * a3 * b1 + 6.0 * a2 * b2 + 4.0 * a1 * b3 + b4;
    let variance = fourth - mean * mean;
    if !(variance > 0.0 && variance.is_finite()) {
        return Err(Error::NumericalDegeneracy(format!(
            "var{{Z²}} = {variance} for N={n}, g_i={g_i}, g_r={g_r}, g_d={g_d}"
        )));
    }
    Ok(GammaFit {
        shape: mean * mean / variance,
        scale: variance / mean,
        mean,
        variance,
    })
}

/// Derived statistics of one UE–IRS link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrsLinkStats {
    pub g_d: f64,
    pub g_i: f64,
    pub g_r: f64,
    pub mu: f64,
    pub omega: f64,
    pub bf_gain: f64,
    /// `E{|h_ir|²} = μ² + ω²`
    pub g_ir: f64,
    /// `g_ir / g_d`
    pub kappa: f64,
    pub gamma_shape: f64,
    pub gamma_scale: f64,
}

impl IrsLinkStats {
    pub fn from_gains(n: u32, g_d: f64, g_i: f64, g_r: f64) -> Result<Self> {
        let bf_gain = beamforming_gain(n)?;
        let (mu, omega) = composite_stats(n, g_i, g_r);
        let fit = gamma_match(n, g_i, g_r, g_d)?;
        let g_ir = mu * mu + omega * omega;
        Ok(IrsLinkStats {
            g_d,
            g_i,
            g_r,
            mu,
            omega,
            bf_gain,
            g_ir,
            kappa: g_ir / g_d,
            gamma_shape: fit.shape,
            gamma_scale: fit.scale,
        })
    }

    /// Link with BS–UE distance `l`, BS–IRS distance `r`, IRS–UE distance `d`.
    pub fn new(n: u32, l: f64, r: f64, d: f64, p: &SystemParams) -> Result<Self> {
        Self::from_gains(n, gain_bs_ue(l, p), gain_bs_irs(r, p), gain_irs_ue(d, p))
    }
}

/// Exact gain ratio `κ = G_bf g_i g_r / g_d`.
pub fn kappa_exact(n: u32, l: f64, r: f64, d: f64, p: &SystemParams) -> Result<f64> {
    let hbi = p.bs_height - p.irs_height;
    let ratio = (r * r + hbi * hbi) * (d * d + p.irs_height * p.irs_height)
        / (l * l + p.bs_height * p.bs_height);
    Ok(beamforming_gain(n)? * p.beta() * ratio.powf(-p.pathloss_exp / 2.0))
}

/// Gain ratio under `l ≈ r`: `κ ≈ G_bf g_r`.
pub fn kappa_approx(n: u32, d: f64, p: &SystemParams) -> Result<f64> {
    Ok(beamforming_gain(n)? * gain_irs_ue(d, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverageStatus {
    Covered,
    /// Even `d = 0` falls short of the threshold.
    NoCoverage,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageRange {
    pub radius: f64,
    pub status: CoverageStatus,
}

/// Largest IRS–UE distance `D` with `κ_approx(d) >= κ̄`.
pub fn coverage_range(n: u32, p: &SystemParams) -> Result<CoverageRange> {
    let reach = (beamforming_gain(n)? * p.beta() / p.kappa_threshold).powf(2.0 / p.pathloss_exp);
    let arg = reach - p.irs_height * p.irs_height;
    if arg > 0.0 {
        Ok(CoverageRange {
            radius: arg.sqrt(),
            status: CoverageStatus::Covered,
        })
    } else {
        Ok(CoverageRange {
            radius: 0.0,
            status: CoverageStatus::NoCoverage,
        })
    }
}

/// Rayleigh amplitude with the given scale parameter.
#[inline]
pub fn rayleigh_sample<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    let e: f64 = rng.sample(Exp1);
    scale * (2.0 * e).sqrt()
}

/// Exponential power with the given mean.
#[inline]
pub fn exp_sample<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> f64 {
    let e: f64 = rng.sample(Exp1);
    mean * e
}

/// Exact co-phased cascaded amplitude `Σ_n |h_i,n| |h_r,n|`.
///
/// Each factor is Rayleigh with scale `sqrt(g/2)`, i.e. `sqrt(g ξ)` with
/// `ξ ~ Exp(1)`, so the sum is `sqrt(g_i g_r) Σ sqrt(ξ_i,n ξ_r,n)`.
#[inline]
pub fn sample_composite_exact<R: Rng + ?Sized>(n: u32, g_i: f64, g_r: f64, rng: &mut R) -> f64 {
    let mut acc = 0.0;
    for _ in 0..n {
        let a: f64 = rng.sample(Exp1);
        let b: f64 = rng.sample(Exp1);
        acc += (a * b).sqrt();
    }
    (g_i * g_r).sqrt() * acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{topology_stream, StreamTag};
    use proptest::prelude::*;

    fn rng(seed: u64) -> crate::rng::SimRng {
        topology_stream(seed, StreamTag::CascadeFading, 0)
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    #[test]
    fn reference_gain_values() {
        let b = reference_gain(2e9).unwrap();
        assert!(rel(b, 1.4229e-4) < 1e-4, "{b}");
        assert!((10.0 * b.log10() + 38.47).abs() < 0.01);
        assert!(rel(reference_gain(SPEED_OF_LIGHT / (4.0 * PI)).unwrap(), 1.0) < 1e-14);
        assert!(rel(reference_gain(2e9).unwrap() / reference_gain(4e9).unwrap(), 4.0) < 1e-14);
        assert!(reference_gain(0.0).is_err());
        assert!(reference_gain(-1.0).is_err());
    }

    #[test]
    fn gain_values() {
        let p = SystemParams::default();
        let beta = p.beta();
        // l = 0, H_B = 20, α = 2.5
        assert!(rel(gain_bs_ue(0.0, &p), beta * 400f64.powf(-1.25)) < 1e-14);
        assert!(rel(gain_bs_ue(0.0, &p), 7.96e-8) < 1e-3);
        // r = 0, H_B - H_I = 19
        assert!(rel(gain_bs_irs(0.0, &p), beta * 361f64.powf(-1.25)) < 1e-14);
        // d = 0, H_I = 1
        assert!(rel(gain_irs_ue(0.0, &p), beta) < 1e-14);
        assert!(rel(gain_irs_ue(26.18, &p), beta * (26.18f64 * 26.18 + 1.0).powf(-1.25)) < 1e-14);

        let mut q = p.clone();
        q.pathloss_exp = 2.0;
        q.bs_height = 1.0;
        assert!(rel(gain_bs_ue(0.0, &q), beta) < 1e-14);
    }

    #[test]
    fn gains_strictly_decrease() {
        let p = SystemParams::default();
        let fs: [fn(f64, &SystemParams) -> f64; 5] =
            [gain_bs_ue, gain_bs_irs, gain_irs_ue, gain_bs_relay, gain_relay_ue];
        for f in fs {
            let mut prev = f64::INFINITY;
            for i in 0..500 {
                let g = f(i as f64 * 0.5, &p);
                assert!(g > 0.0 && g < prev);
                prev = g;
            }
        }
    }

    #[test]
    fn beamforming_gain_values() {
        assert!(rel(beamforming_gain(1).unwrap(), 1.0) < 1e-15);
        assert!(rel(beamforming_gain(2000).unwrap(), 2.4682e6) < 1e-4);
        let big = beamforming_gain(1_000_000).unwrap() / 1e12;
        assert!((big - PI2_16).abs() < 1e-6);
        assert!((PI2_16 - 0.61685).abs() < 1e-5);
        assert!(beamforming_gain(0).is_err());
    }

    #[test]
    fn composite_stats_values() {
        let (mu, omega) = composite_stats(4, 1.0, 1.0);
        assert!(rel(mu, PI) < 1e-15);
        assert!(rel(omega * omega, 4.0 * (1.0 - PI2_16)) < 1e-14);
        assert!(rel(omega * omega, 1.5326) < 1e-4);
    }

    #[test]
    fn exact_sampler_moments() {
        // N=1: mean π/4 within 0.3% over 10^6 draws, variance 1 - π²/16 within 2%
        let mut r = rng(1);
        let n = 1_000_000;
        let draws: Vec<f64> = (0..n).map(|_| sample_composite_exact(1, 1.0, 1.0, &mut r)).collect();
        assert!(draws.iter().all(|&x| x >= 0.0));
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(rel(mean, PI / 4.0) < 0.003, "mean {mean}");
        assert!(rel(var, 1.0 - PI2_16) < 0.02, "var {var}");

        // N=100: mean matches μ within 1%, variance within 2%
        let (gi, gr) = (3e-9, 2e-7);
        let (mu, omega) = composite_stats(100, gi, gr);
        let mut r = rng(2);
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| sample_composite_exact(100, gi, gr, &mut r)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(rel(mean, mu) < 0.01);
        assert!(rel(var, omega * omega) < 0.02);
    }

    #[test]
    fn channel_hardening_ks_distance() {
        // Kolmogorov-Smirnov distance between exact sampler and Gaussian at N=2000
        let (mu, omega) = composite_stats(2000, 1.0, 1.0);
        let mut r = rng(3);
        let mut draws: Vec<f64> = (0..10_000)
            .map(|_| sample_composite_exact(2000, 1.0, 1.0, &mut r))
            .collect();
        draws.sort_by(f64::total_cmp);
        let n = draws.len() as f64;
        let ks = draws
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = normal_cdf((x - mu) / omega);
                (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.02, "KS = {ks}");
    }

    // Abramowitz-Stegun 7.1.26 based erf, adequate to ~1e-7 for a KS check.
    fn normal_cdf(z: f64) -> f64 {
        let x = z.abs() / 2f64.sqrt();
        let t = 1.0 / (1.0 + 0.327_591_1 * x);
        let poly = t
            * (0.254_829_592
                + t * (-0.284_496_736 + t * (1.421_413_741 + t * (-1.453_152_027 + t * 1.061_405_429))));
        let erf = 1.0 - poly * (-x * x).exp();
        if z >= 0.0 {
            0.5 * (1.0 + erf)
        } else {
            0.5 * (1.0 - erf)
        }
    }

    #[test]
    fn gamma_match_first_moment_and_roundtrip() {
        let (n, gi, gr, gd) = (2000u32, 2e-10, 1e-5, 5e-9);
        let fit = gamma_match(n, gi, gr, gd).unwrap();
        let closed = beamforming_gain(n).unwrap() * gi * gr
            + n as f64 * PI / 4.0 * (PI * gi * gr * gd).sqrt()
            + gd;
        assert!(rel(fit.mean, closed) < 1e-12);
        assert!(rel(fit.shape * fit.scale, fit.mean) < 1e-12);
        assert!(rel(fit.shape * fit.scale * fit.scale, fit.variance) < 1e-12);
    }

    #[test]
    fn gamma_match_against_sampling_oracle() {
        // N=1000, g_i=g_r=g_d=1e-8: Gamma moments vs 10^6 sampled Z² within 2%
        let (n, g) = (1000u32, 1e-8);
        let fit = gamma_match(n, g, g, g).unwrap();
        let mut r = rng(4);
        let m = 1_000_000;
        let (mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0);
        let z2s: Vec<f64> = (0..m)
            .map(|_| {
                let a = sample_composite_exact(n, g, g, &mut r);
                let b = rayleigh_sample((g / 2.0).sqrt(), &mut r);
                (a + b).powi(2)
            })
            .collect();
        for &z in &z2s {
            s1 += z;
        }
        let mean = s1 / m as f64;
        for &z in &z2s {
            let c = z - mean;
            s2 += c * c;
            s3 += c * c * c;
        }
        let var = s2 / (m - 1) as f64;
        assert!(rel(mean, fit.mean) < 0.02, "mean {mean} vs {}", fit.mean);
        assert!(rel(var, fit.variance) < 0.02, "var {var} vs {}", fit.variance);
        // approximation-quality diagnostic: skewness vs Gamma's 2/sqrt(k)
        let skew = (s3 / m as f64) / var.powf(1.5);
        let gamma_skew = 2.0 / fit.shape.sqrt();
        assert!(rel(skew, gamma_skew) < 0.10, "skew {skew} vs {gamma_skew}");
    }

    #[test]
    fn gamma_match_rejects_bad_gains() {
        assert!(gamma_match(10, 0.0, 1.0, 1.0).is_err());
        assert!(gamma_match(10, 1.0, -1.0, 1.0).is_err());
        assert!(gamma_match(0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn kappa_forms() {
        let p = SystemParams::default();
        // l = r = 100: exact/approx ratio is the height correction
        let ex = kappa_exact(2000, 100.0, 100.0, 10.0, &p).unwrap();
        let ap = kappa_approx(2000, 10.0, &p).unwrap();
        let ratio = ((100f64.powi(2) + 19f64.powi(2)) / (100f64.powi(2) + 20f64.powi(2))).powf(-1.25);
        assert!(rel(ex / ap, ratio) < 1e-12);
        assert!((ratio - 1.0048).abs() < 1e-4);

        let d = coverage_range(2000, &p).unwrap();
        assert!(rel(kappa_approx(2000, d.radius, &p).unwrap(), 0.1) < 1e-12);

        let mut prev = f64::INFINITY;
        for i in 0..100 {
            let k = kappa_approx(500, i as f64, &p).unwrap();
            assert!(k < prev);
            prev = k;
        }
    }

    #[test]
    fn coverage_range_values() {
        let p = SystemParams::default();
        let d = coverage_range(2000, &p).unwrap();
        assert_eq!(d.status, CoverageStatus::Covered);
        assert!((d.radius - 26.2).abs() < 0.05, "D = {}", d.radius);

        let mut q = p.clone();
        q.kappa_threshold = beamforming_gain(2000).unwrap() * q.beta() / q.irs_height.powf(q.pathloss_exp);
        let d0 = coverage_range(2000, &q).unwrap();
        assert!(d0.radius < 1e-6);
        q.kappa_threshold *= 1.01;
        let d1 = coverage_range(2000, &q).unwrap();
        assert_eq!(d1.status, CoverageStatus::NoCoverage);
        assert_eq!(d1.radius, 0.0);

        // D ~ N^(2/α) for large N
        let a = coverage_range(100_000, &p).unwrap().radius;
        let b = coverage_range(200_000, &p).unwrap().radius;
        assert!(rel(b / a, 2f64.powf(2.0 / 2.5)) < 1e-3);
    }

    #[test]
    fn scalar_samplers() {
        let mut r = rng(5);
        let n = 200_000;
        let ray: Vec<f64> = (0..n).map(|_| rayleigh_sample(2.0, &mut r)).collect();
        let exp: Vec<f64> = (0..n).map(|_| exp_sample(3.0, &mut r)).collect();
        assert!(ray.iter().chain(exp.iter()).all(|&x| x >= 0.0));
        let rm = ray.iter().sum::<f64>() / n as f64;
        let em = exp.iter().sum::<f64>() / n as f64;
        assert!(rel(rm, 2.0 * (PI / 2.0).sqrt()) < 0.01);
        assert!(rel(em, 3.0) < 0.01);
        assert_eq!(rayleigh_sample(0.0, &mut r), 0.0);
        assert_eq!(exp_sample(0.0, &mut r), 0.0);
    }

    #[test]
    fn default_params_are_valid() {
        let p = SystemParams::default();
        p.validate().unwrap();
        assert!(rel(p.snr_ref(), 1e11) < 1e-12);
        let mut q = p.clone();
        q.pathloss_exp = 1.5;
        assert!(q.validate().is_err());
        let mut q = p.clone();
        q.irs_r_in = 160.0;
        assert!(q.validate().is_err());
        let mut q = p.clone();
        q.irs_r_out = 250.0;
        assert!(q.validate().is_err());
        let mut q = p;
        q.irs_height = 0.5;
        assert!(q.validate().is_err());
    }

    proptest! {
        #[test]
        fn moment_identities(n in 1u32..20_000, gi in -12.0..-3.0f64, gr in -12.0..-3.0f64) {
            let (gi, gr) = (10f64.powf(gi), 10f64.powf(gr));
            let (mu, omega) = composite_stats(n, gi, gr);
            let gbf = beamforming_gain(n).unwrap();
            prop_assert!(rel(mu * mu + omega * omega, gbf * gi * gr) < 1e-12);
            let c0 = PI * (n as f64).sqrt() / (16.0 - PI * PI).sqrt();
            prop_assert!(rel(mu / omega, c0) < 1e-12);
        }
    }
}

//! Monte Carlo ground truth for the IRS-aided, relay-aided and BS-only
//! systems.
//!
//! Each topology draws its node positions from streams keyed by the
//! topology index, and each UE draws its fading from streams keyed by
//! `(topology, UE)` (see [`crate::rng`]). Topologies are evaluated
//! independently, possibly in parallel, and reduced in index order, so a
//! summary is bit-identical for a given configuration.

use std::f64::consts::LOG2_E;

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::analytic::{decompose_regions, rate_direct};
use crate::channel::{
    composite_stats, coverage_range, gain_bs_irs, gain_bs_relay, gain_bs_ue, gain_irs_ue,
    gain_relay_ue, sample_composite_exact, SystemParams,
};
use crate::geometry::{place_on_circle, sample_annulus, sample_ues, Point2D, Topology};
use crate::rng::{topology_stream, ue_stream, StreamTag};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    IrsAided,
    RelayAided,
    BsOnly,
}

/// How the cascaded IRS amplitude is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CompositeSampler {
    /// Sum of `N` double-Rayleigh products, `O(N)` per draw.
    #[default]
    Exact,
    /// `N(μ, ω²)` surrogate, `O(1)` per draw. Not used for validation.
    GaussianSurrogate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n_topologies: usize,
    pub n_fading: usize,
    pub master_seed: u64,
    pub system: SystemKind,
    pub sampler: CompositeSampler,
}

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_200_417;

impl McConfig {
    pub fn new(n_topologies: usize, n_fading: usize, master_seed: u64, system: SystemKind) -> Self {
        McConfig {
            n_topologies,
            n_fading,
            master_seed,
            system,
            sampler: CompositeSampler::Exact,
        }
    }

    pub fn with_system(self, system: SystemKind) -> Self {
        McConfig { system, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_topologies == 0 || self.n_fading == 0 {
            return Err(Error::invalid(format!(
                "Monte Carlo needs at least one topology and one fading draw, got {} x {}",
                self.n_topologies, self.n_fading
            )));
        }
        Ok(())
    }
}

impl Default for McConfig {
    /// Full budget: 1000 topologies with 100 fading draws per channel.
    fn default() -> Self {
        McConfig::new(1000, 100, DEFAULT_SEED, SystemKind::IrsAided)
    }
}

/// Relay-mode bookkeeping of the relay-aided system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayDiagnostics {
    /// Fraction of UEs that chose a relay.
    pub relay_fraction: f64,
    /// Mean of `u / l` over relay-mode UEs (`u`: BS–relay, `l`: BS–UE).
    pub mean_distance_ratio: f64,
    /// Mean over UEs of the rate estimated from average gains.
    pub estimated_mean_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateSummary {
    /// Mean per-UE rate `C̄`, bps/Hz.
    pub mean_rate: f64,
    /// Jain index pooled over every UE of every topology.
    pub jain: f64,
    /// Mean rate in the BS-distance bands `[0, b0]`, `(b0, b1]`, `(b1, ∞)`;
    /// `NaN` for an empty band.
    pub per_region_means: Vec<f64>,
    /// Standard error of `mean_rate` from the spread of topology means.
    pub standard_error: f64,
    /// Standard error of the Jain index from the spread of per-topology indices.
    pub jain_standard_error: f64,
    pub n_ues: usize,
    pub relay: Option<RelayDiagnostics>,
}

/// Where UEs are dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UePlacement {
    Disc { radius: f64 },
    Ring { inner: f64, outer: f64 },
}

/// Where IRSs are deployed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IrsPlacement {
    RandomAnnulus { count: usize, r_in: f64, r_out: f64 },
    Circle { count: usize, radius: f64 },
}

/// IRS-aided deployment to simulate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrsScenario {
    pub ues: UePlacement,
    pub irs: IrsPlacement,
    pub elements_per_irs: u32,
    /// Band edges for `per_region_means`.
    pub region_bounds: [f64; 2],
}

impl IrsScenario {
    /// Disc of UEs and `M` IRSs uniform in `[R_in, R_out]`, banded like the
    /// analytic region decomposition.
    pub fn from_params(p: &SystemParams) -> Result<Self> {
        let d = coverage_range(p.elements_per_irs, p)?.radius;
        let reg = decompose_regions(p, d);
        Ok(IrsScenario {
            ues: UePlacement::Disc { radius: p.cell_radius },
            irs: IrsPlacement::RandomAnnulus {
                count: p.irs_count as usize,
                r_in: p.irs_r_in,
                r_out: p.irs_r_out,
            },
            elements_per_irs: p.elements_per_irs,
            region_bounds: [reg.r1, reg.r2],
        })
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    sum: f64,
    sum_sq: f64,
    n: usize,
    region_sum: [f64; 3],
    region_n: [usize; 3],
    relay_n: usize,
    ratio_sum: f64,
    estimate_sum: f64,
}

impl Tally {
    fn push(&mut self, rate: f64, l: f64, bounds: [f64; 2]) {
        self.sum += rate;
        self.sum_sq += rate * rate;
        self.n += 1;
        let band = if l <= bounds[0] {
            0
        } else if l <= bounds[1] {
            1
        } else {
            2
        };
        self.region_sum[band] += rate;
        self.region_n[band] += 1;
    }

    fn jain(&self) -> f64 {
        if self.sum_sq > 0.0 {
            self.sum * self.sum / (self.n as f64 * self.sum_sq)
        } else {
            f64::NAN
        }
    }
}

fn map_topologies<F>(count: usize, f: F) -> Result<Vec<Tally>>
where
    F: Fn(usize) -> Result<Tally> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn summarize(tallies: &[Tally], relay: bool) -> RateSummary {
    let mut total = Tally::default();
    for t in tallies {
        total.sum += t.sum;
        total.sum_sq += t.sum_sq;
        total.n += t.n;
        for b in 0..3 {
            total.region_sum[b] += t.region_sum[b];
            total.region_n[b] += t.region_n[b];
        }
        total.relay_n += t.relay_n;
        total.ratio_sum += t.ratio_sum;
        total.estimate_sum += t.estimate_sum;
    }
    let topo_means: Vec<f64> = tallies.iter().map(|t| t.sum / t.n as f64).collect();
    let topo_jain: Vec<f64> = tallies.iter().map(Tally::jain).filter(|j| j.is_finite()).collect();
    let (_, standard_error) = mean_and_se(&topo_means);
    let jain_standard_error = if topo_jain.is_empty() { 0.0 } else { mean_and_se(&topo_jain).1 };
    let per_region_means = (0..3)
        .map(|b| {
            if total.region_n[b] > 0 {
                total.region_sum[b] / total.region_n[b] as f64
            } else {
                f64::NAN
            }
        })
        .collect();
    let relay = relay.then(|| RelayDiagnostics {
        relay_fraction: total.relay_n as f64 / total.n as f64,
        mean_distance_ratio: if total.relay_n > 0 {
            total.ratio_sum / total.relay_n as f64
        } else {
            f64::NAN
        },
        estimated_mean_rate: total.estimate_sum / total.n as f64,
    });
    RateSummary {
        mean_rate: total.sum / total.n as f64,
        jain: total.jain(),
        per_region_means,
        standard_error,
        jain_standard_error,
        n_ues: total.n,
        relay,
    }
}

/// Runs the system selected by `mc.system` with the deployment in `p`.
pub fn simulate(p: &SystemParams, mc: &McConfig) -> Result<RateSummary> {
    match mc.system {
        SystemKind::IrsAided | SystemKind::BsOnly => simulate_irs(p, mc),
        SystemKind::RelayAided => simulate_relay(p, mc),
    }
}

/// IRS-aided system (or BS-only when `mc.system` is [`SystemKind::BsOnly`]).
pub fn simulate_irs(p: &SystemParams, mc: &McConfig) -> Result<RateSummary> {
    simulate_irs_scenario(p, &IrsScenario::from_params(p)?, mc)
}

pub fn simulate_irs_scenario(p: &SystemParams, scenario: &IrsScenario, mc: &McConfig) -> Result<RateSummary> {
    p.validate()?;
    mc.validate()?;
    let tallies = map_topologies(mc.n_topologies, |t| {
        let rates = irs_topology_rates(p, scenario, mc, t)?;
        let mut tally = Tally::default();
        for (rate, l) in rates {
            tally.push(rate, l, scenario.region_bounds);
        }
        Ok(tally)
    })?;
    Ok(summarize(&tallies, false))
}

/// Positions and association of topology `t` of the IRS-aided system.
pub fn irs_topology(p: &SystemParams, scenario: &IrsScenario, mc: &McConfig, t: usize) -> Result<Topology> {
    let k = p.ue_count as usize;
    let mut rng = topology_stream(mc.master_seed, StreamTag::UePositions, t as u64);
    let ues = match scenario.ues {
        UePlacement::Disc { radius } => sample_ues(k, radius, &mut rng)?,
        UePlacement::Ring { inner, outer } => sample_annulus(k, inner, outer, &mut rng)?,
    };
    let irs = if mc.system == SystemKind::BsOnly {
        Vec::new()
    } else {
        match scenario.irs {
            IrsPlacement::RandomAnnulus { count: 0, .. } | IrsPlacement::Circle { count: 0, .. } => Vec::new(),
            IrsPlacement::RandomAnnulus { count, r_in, r_out } => {
                let mut rng = topology_stream(mc.master_seed, StreamTag::IrsPositions, t as u64);
                sample_annulus(count, r_in, r_out, &mut rng)?
            }
            IrsPlacement::Circle { count, radius } => place_on_circle(count, radius)?,
        }
    };
    let coverage = coverage_range(scenario.elements_per_irs, p)?.radius;
    Ok(Topology::associate(ues, irs, Vec::new(), coverage))
}

/// Fading-averaged rate and BS distance of every UE in topology `t`.
pub fn irs_topology_rates(
    p: &SystemParams,
    scenario: &IrsScenario,
    mc: &McConfig,
    t: usize,
) -> Result<Vec<(f64, f64)>> {
    let topo = irs_topology(p, scenario, mc, t)?;
    let snr_ref = p.snr_ref();
    let n = scenario.elements_per_irs;
    let fading = mc.n_fading;
    let rates = topo
        .ue_positions
        .iter()
        .zip(&topo.association)
        .enumerate()
        .map(|(i, (ue, assoc))| {
            let l = ue.norm();
            let g_d = gain_bs_ue(l, p);
            let mut direct = ue_stream(mc.master_seed, StreamTag::DirectFading, t as u64, i as u64);
            let mut acc = 0.0;
            match assoc {
                None => {
                    for _ in 0..fading {
                        let xi: f64 = direct.sample(Exp1);
                        acc += (snr_ref * g_d * xi).ln_1p();
                    }
                }
                Some(a) => {
                    let g_i = gain_bs_irs(topo.irs_positions[a.irs_index].norm(), p);
                    let g_r = gain_irs_ue(a.distance, p);
                    let mut cascade = ue_stream(mc.master_seed, StreamTag::CascadeFading, t as u64, i as u64);
                    let (mu, omega) = composite_stats(n, g_i, g_r);
                    for _ in 0..fading {
                        let xi: f64 = direct.sample(Exp1);
                        let b = (g_d * xi).sqrt();
                        let a = match mc.sampler {
                            CompositeSampler::Exact => sample_composite_exact(n, g_i, g_r, &mut cascade),
                            CompositeSampler::GaussianSurrogate => {
                                let z: f64 = cascade.sample(StandardNormal);
                                mu + omega * z
                            }
                        };
                        acc += (snr_ref * (a + b) * (a + b)).ln_1p();
                    }
                }
            }
            (acc / fading as f64 * LOG2_E, l)
        })
        .collect();
    Ok(rates)
}

/// Full-duplex decode-and-forward relay benchmark.
///
/// Each UE picks direct or relay mode, and its relay, from rates estimated
/// with average gains: the ergodic direct rate at full power against
/// `min{log2(1 + a γ0 g1), log2(1 + a γ0 g_d + (1-a) γ0 g2)}` for every
/// relay. The realised rate averages the same expressions over independent
/// Rayleigh fading on all three links.
pub fn simulate_relay(p: &SystemParams, mc: &McConfig) -> Result<RateSummary> {
    p.validate()?;
    mc.validate()?;
    let bounds = [p.relay_r_in, p.relay_r_out];
    let tallies = map_topologies(mc.n_topologies, |t| relay_topology(p, mc, t, bounds))?;
    Ok(summarize(&tallies, true))
}

/// Relay positions of topology `t`.
pub fn relay_positions(p: &SystemParams, master_seed: u64, t: usize) -> Result<Vec<Point2D>> {
    let mut rng = topology_stream(master_seed, StreamTag::RelayPositions, t as u64);
    sample_annulus(p.relay_count as usize, p.relay_r_in, p.relay_r_out, &mut rng)
}

/// Mode chosen by a UE in the relay-aided system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelayChoice {
    Direct { estimate: f64 },
    Relay { index: usize, estimate: f64 },
}

impl RelayChoice {
    pub fn estimate(&self) -> f64 {
        match *self {
            RelayChoice::Direct { estimate } | RelayChoice::Relay { estimate, .. } => estimate,
        }
    }
}

/// Estimated DF rate from average gains.
pub fn relay_rate_estimate(g1: f64, g2: f64, g_d: f64, p: &SystemParams) -> f64 {
    let (bs, relay) = split_snr(p);
    (bs * g1).min(bs * g_d + relay * g2).ln_1p() * LOG2_E
}

fn split_snr(p: &SystemParams) -> (f64, f64) {
    let a = p.relay_power_split;
    (a * p.snr_ref(), (1.0 - a) * p.snr_ref())
}

/// Direct or best relay for a UE at `ue`; ties keep direct mode, then the
/// lowest relay index.
pub fn choose_relay(ue: &Point2D, relays: &[Point2D], p: &SystemParams) -> Result<RelayChoice> {
    let backhaul: Vec<f64> = relays.iter().map(|r| gain_bs_relay(r.norm(), p)).collect();
    choose_relay_with_backhaul(ue, relays, &backhaul, p)
}

/// [`choose_relay`] with the BS–relay gains precomputed.
fn choose_relay_with_backhaul(
    ue: &Point2D,
    relays: &[Point2D],
    backhaul: &[f64],
    p: &SystemParams,
) -> Result<RelayChoice> {
    let g_d = gain_bs_ue(ue.norm(), p);
    let direct = rate_direct(g_d, p.snr_ref())?;
    let (bs, relay) = split_snr(p);
    let mut best: Option<(usize, f64)> = None;
    for (j, (r, &g1)) in relays.iter().zip(backhaul).enumerate() {
        let g2 = gain_relay_ue(ue.distance(r), p);
        let snr = (bs * g1).min(bs * g_d + relay * g2);
        if best.map_or(true, |(_, s)| snr > s) {
            best = Some((j, snr));
        }
    }
    Ok(match best {
        Some((index, snr)) if snr.ln_1p() * LOG2_E > direct => RelayChoice::Relay {
            index,
            estimate: snr.ln_1p() * LOG2_E,
        },
        _ => RelayChoice::Direct { estimate: direct },
    })
}

fn relay_topology(p: &SystemParams, mc: &McConfig, t: usize, bounds: [f64; 2]) -> Result<Tally> {
    let k = p.ue_count as usize;
    let mut rng = topology_stream(mc.master_seed, StreamTag::UePositions, t as u64);
    let ues = sample_ues(k, p.cell_radius, &mut rng)?;
    let relays = relay_positions(p, mc.master_seed, t)?;
    let backhaul: Vec<f64> = relays.iter().map(|r| gain_bs_relay(r.norm(), p)).collect();
    let snr_ref = p.snr_ref();
    let (bs, relay) = split_snr(p);
    let fading = mc.n_fading;

    let mut tally = Tally::default();
    for (i, ue) in ues.iter().enumerate() {
        let l = ue.norm();
        let g_d = gain_bs_ue(l, p);
        let choice = choose_relay_with_backhaul(ue, &relays, &backhaul, p)?;
        let mut direct = ue_stream(mc.master_seed, StreamTag::DirectFading, t as u64, i as u64);
        let mut acc = 0.0;
        match choice {
            RelayChoice::Direct { .. } => {
                for _ in 0..fading {
                    let xi: f64 = direct.sample(Exp1);
                    acc += (snr_ref * g_d * xi).ln_1p();
                }
            }
            RelayChoice::Relay { index, .. } => {
                let r = &relays[index];
                let u = r.norm();
                let g1 = backhaul[index];
                let g2 = gain_relay_ue(ue.distance(r), p);
                let mut links = ue_stream(mc.master_seed, StreamTag::RelayFading, t as u64, i as u64);
                for _ in 0..fading {
                    let xi_d: f64 = direct.sample(Exp1);
                    let xi_1: f64 = links.sample(Exp1);
                    let xi_2: f64 = links.sample(Exp1);
                    acc += (bs * g1 * xi_1).min(bs * g_d * xi_d + relay * g2 * xi_2).ln_1p();
                }
                tally.relay_n += 1;
                tally.ratio_sum += u / l;
            }
        }
        tally.estimate_sum += choice.estimate();
        tally.push(acc / fading as f64 * LOG2_E, l, bounds);
    }
    Ok(tally)
}

/// Fading-averaged per-UE rates of topology `t` of the IRS-aided or
/// BS-only system.
pub fn ue_rates(p: &SystemParams, mc: &McConfig, t: usize) -> Result<Vec<f64>> {
    if mc.system == SystemKind::RelayAided {
        return Err(Error::invalid("per-UE rates are exposed for IRS-aided and BS-only systems"));
    }
    Ok(irs_topology_rates(p, &IrsScenario::from_params(p)?, mc, t)?
        .into_iter()
        .map(|(r, _)| r)
        .collect())
}

/// One row of [`run_comparison`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    /// Common IRS and relay count `M = M_R`.
    pub count: u32,
    pub irs: RateSummary,
    pub relay: RateSummary,
    pub bs_only: RateSummary,
}

impl ComparisonRow {
    pub fn irs_wins(&self) -> bool {
        self.irs.mean_rate > self.relay.mean_rate
    }
}

/// IRS-aided, relay-aided and BS-only systems with `M = M_R` taken from
/// `counts`, at the ranges configured in `p`.
pub fn run_comparison(p: &SystemParams, mc: &McConfig, counts: &[u32]) -> Result<Vec<ComparisonRow>> {
    let bs_only = simulate_irs(p, &mc.with_system(SystemKind::BsOnly))?;
    counts
        .iter()
        .map(|&count| {
            let q = SystemParams {
                irs_count: count,
                relay_count: count,
                ..p.clone()
            };
            Ok(ComparisonRow {
                count,
                irs: simulate_irs(&q, &mc.with_system(SystemKind::IrsAided))?,
                relay: simulate_relay(&q, &mc.with_system(SystemKind::RelayAided))?,
                bs_only: bs_only.clone(),
            })
        })
        .collect()
}

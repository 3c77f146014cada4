//! Closed-form link rates and the three-region spatial-throughput integral.
//!
//! UEs are split by BS distance `l` into `[0, R1]`, `(R1, R2]` and
//! `(R2, R_c]` with `R1 = max(0, R_in - ηD)` and `R2 = min(R_c, R_out + ηD)`.
//! The outer bands use the direct rate only. In the middle band a UE is
//! IRS-served with probability `1 - e^{-λπD²}` (Poisson nearest-neighbour
//! law with density `λ`), evaluated with `l ≈ r`.

use std::f64::consts::{LOG2_E, PI};

use crate::channel::{coverage_range, gain_bs_irs, gain_bs_ue, gain_irs_ue, IrsLinkStats, SystemParams};
use crate::numerics::{ergodic_log_gamma, integrate_1d, scaled_exp_integral_e1, QuadratureSpec};
use crate::{Error, Result};

/// Ergodic direct rate `C_d = E1(1/(γ0 g_d)) e^{1/(γ0 g_d)} log2 e`.
pub fn rate_direct(g_d: f64, snr_ref: f64) -> Result<f64> {
    if !(g_d >= 0.0) || !(snr_ref >= 0.0) {
        return Err(Error::invalid(format!(
            "direct rate needs non-negative gain and SNR, got g_d={g_d}, γ0={snr_ref}"
        )));
    }
    let snr = g_d * snr_ref;
    if snr == 0.0 {
        return Ok(0.0);
    }
    Ok(scaled_exp_integral_e1(1.0 / snr)? * LOG2_E)
}

/// Ergodic rate of an IRS-served UE under the Gamma approximation of `Z²`.
pub fn rate_irs(stats: &IrsLinkStats, snr_ref: f64, spec: &QuadratureSpec) -> Result<f64> {
    ergodic_log_gamma(stats.gamma_shape, stats.gamma_scale * snr_ref, spec)
}

/// Region boundaries, areas and the IRS density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionDecomposition {
    pub r1: f64,
    pub r2: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    /// IRS density per m²; infinite for a degenerate annulus with `M > 0`.
    pub irs_density: f64,
}

impl RegionDecomposition {
    pub fn cell_area(&self) -> f64 {
        self.s1 + self.s2 + self.s3
    }
}

pub fn decompose_regions(p: &SystemParams, coverage: f64) -> RegionDecomposition {
    let eta_d = p.boundary_factor * coverage;
    let r1 = (p.irs_r_in - eta_d).max(0.0);
    let r2 = (p.irs_r_out + eta_d).min(p.cell_radius);
    let s = PI * p.cell_radius * p.cell_radius;
    let s1 = PI * r1 * r1;
    let s3 = PI * (p.cell_radius * p.cell_radius - r2 * r2);
    let ring = PI * (p.irs_r_out * p.irs_r_out - p.irs_r_in * p.irs_r_in);
    let irs_density = if p.irs_count == 0 {
        0.0
    } else if ring > 0.0 {
        p.irs_count as f64 / ring
    } else {
        f64::INFINITY
    };
    RegionDecomposition {
        r1,
        r2,
        s1,
        s2: s - s1 - s3,
        s3,
        irs_density,
    }
}

/// Tolerances for the spatial-throughput integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputSpec {
    /// Outer integrals over `l` and `r`.
    pub outer: QuadratureSpec,
    /// Inner integral over `d`.
    pub inner: QuadratureSpec,
    /// Gamma expectation inside each `C_ir`.
    pub rate: QuadratureSpec,
}

impl Default for ThroughputSpec {
    fn default() -> Self {
        ThroughputSpec {
            outer: QuadratureSpec { relative_tolerance: 1e-5, max_subdivisions: 200 },
            inner: QuadratureSpec { relative_tolerance: 1e-7, max_subdivisions: 200 },
            rate: QuadratureSpec { relative_tolerance: 1e-9, max_subdivisions: 200 },
        }
    }
}

/// Spatial throughput with its per-region components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputBreakdown {
    /// `C̄`, bps/Hz.
    pub mean: f64,
    /// `C̄1`, `C̄2`, `C̄3`; zero for an empty region.
    pub region_means: [f64; 3],
    /// `C̄2,1`: middle-band UEs left to the BS.
    pub middle_direct: f64,
    /// `C̄2,2`: middle-band UEs jointly served by an IRS.
    pub middle_irs: f64,
    pub coverage: f64,
    pub regions: RegionDecomposition,
}

/// Density of the nearest-IRS distance under the Poisson approximation.
pub fn nearest_irs_pdf(d: f64, density: f64) -> f64 {
    2.0 * PI * density * d * (-density * PI * d * d).exp()
}

pub fn spatial_throughput(p: &SystemParams) -> Result<ThroughputBreakdown> {
    spatial_throughput_with(p, &ThroughputSpec::default())
}

pub fn spatial_throughput_with(p: &SystemParams, spec: &ThroughputSpec) -> Result<ThroughputBreakdown> {
    p.validate()?;
    let snr_ref = p.snr_ref();
    let n = p.elements_per_irs;
    let coverage = coverage_range(n, p)?.radius;
    let regions = decompose_regions(p, coverage);
    if regions.irs_density.is_infinite() {
        return Err(Error::invalid(
            "analytic throughput needs irs_r_out > irs_r_in when irs_count > 0",
        ));
    }
    let s = regions.cell_area();

    // ∫ C_d(l) l dl over [a, b]
    let direct_moment = |a: f64, b: f64| -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        let f = |l: f64| rate_direct(gain_bs_ue(l, p), snr_ref).map(|c| c * l).unwrap_or(f64::NAN);
        integrate_1d(f, a, b, &spec.outer)
    };

    let inner_int = direct_moment(0.0, regions.r1)?;
    let middle_int = direct_moment(regions.r1, regions.r2)?;
    let outer_int = direct_moment(regions.r2, p.cell_radius)?;

    let region_mean = |integral: f64, area: f64| if area > 0.0 { 2.0 * PI * integral / area } else { 0.0 };
    let c1 = region_mean(inner_int, regions.s1);
    let c3 = region_mean(outer_int, regions.s3);

    let lambda = regions.irs_density;
    let (middle_direct, middle_irs) = if regions.s2 > 0.0 {
        let miss = (-lambda * PI * coverage * coverage).exp();
        let direct = miss * region_mean(middle_int, regions.s2);
        let irs = if lambda > 0.0 && coverage > 0.0 {
            middle_irs_rate(p, coverage, lambda, spec)?
        } else {
            0.0
        };
        (direct, irs)
    } else {
        (0.0, 0.0)
    };
    let c2 = middle_direct + middle_irs;

    let mean = (regions.s1 * c1 + regions.s2 * c2 + regions.s3 * c3) / s;
    Ok(ThroughputBreakdown {
        mean,
        region_means: [c1, c2, c3],
        middle_direct,
        middle_irs,
        coverage,
        regions,
    })
}

/// `C̄2,2 = ∫_{R_in}^{R_out} ∫_0^D C_ir(l=r, r, d) f_d(d) f_r(r) dd dr`.
fn middle_irs_rate(p: &SystemParams, coverage: f64, lambda: f64, spec: &ThroughputSpec) -> Result<f64> {
    let snr_ref = p.snr_ref();
    let n = p.elements_per_irs;
    let ring = p.irs_r_out * p.irs_r_out - p.irs_r_in * p.irs_r_in;

    let inner = |r: f64| -> Result<f64> {
        let g_d = gain_bs_ue(r, p);
        let g_i = gain_bs_irs(r, p);
        let f = |d: f64| {
            IrsLinkStats::from_gains(n, g_d, g_i, gain_irs_ue(d, p))
                .and_then(|stats| rate_irs(&stats, snr_ref, &spec.rate))
                .map(|c| c * nearest_irs_pdf(d, lambda))
                .unwrap_or(f64::NAN)
        };
        integrate_1d(f, 0.0, coverage, &spec.inner)
    };
    let outer = |r: f64| inner(r).map(|v| v * 2.0 * r / ring).unwrap_or(f64::NAN);
    integrate_1d(outer, p.irs_r_in, p.irs_r_out, &spec.outer)
}

/// Jain's fairness index `(Σr)² / (n Σr²)`.
pub fn jain_index(rates: &[f64]) -> Result<f64> {
    if rates.iter().any(|&r| !(r >= 0.0)) {
        return Err(Error::invalid("rates must be non-negative"));
    }
    let sum: f64 = rates.iter().sum();
    let sum_sq: f64 = rates.iter().map(|r| r * r).sum();
    if !(sum > 0.0) {
        return Err(Error::invalid("Jain index needs at least one positive rate"));
    }
    Ok(sum * sum / (rates.len() as f64 * sum_sq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{exp_sample, rayleigh_sample, sample_composite_exact};
    use crate::rng::{topology_stream, StreamTag};

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    #[test]
    fn direct_rate_at_cell_center() {
        let p = SystemParams::default();
        let g = gain_bs_ue(0.0, &p);
        let snr = p.snr_ref() * g;
        assert!(rel(snr, 7.96e3) < 1e-3);
        let c = rate_direct(g, p.snr_ref()).unwrap();
        let asym = (snr.ln() - 0.577_215_664_901_532_9) * LOG2_E;
        assert!(rel(c, asym) < 1e-3, "{c} vs {asym}");
        assert!((c - 12.1).abs() < 0.05);
    }

    #[test]
    fn direct_rate_matches_quadrature_oracle() {
        // E[log2(1 + snr ξ)] = ∫_0^∞ log2(1 + snr x) e^{-x} dx, mapped to (0, 1)
        for &snr in &[1e-3, 0.5, 14.0, 7.96e3, 1e6] {
            let f = |t: f64| {
                if t <= 0.0 || t >= 1.0 {
                    return 0.0;
                }
                let x = t / (1.0 - t);
                (1.0 + snr * x).log2() * (-x).exp() / (1.0 - t).powi(2)
            };
            let oracle = integrate_1d(f, 0.0, 1.0, &QuadratureSpec::new(1e-12, 2000).unwrap()).unwrap();
            let c = rate_direct(snr, 1.0).unwrap();
            assert!(rel(c, oracle) < 1e-8, "snr={snr}: {c} vs {oracle}");
        }
    }

    #[test]
    fn direct_rate_matches_fading_mc() {
        let p = SystemParams::default();
        let g = gain_bs_ue(120.0, &p);
        let mut rng = topology_stream(9, StreamTag::DirectFading, 0);
        let n = 1_000_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let r = (1.0 + p.snr_ref() * exp_sample(g, &mut rng)).log2();
            s += r;
            s2 += r * r;
        }
        let mean = s / n as f64;
        let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
        let c = rate_direct(g, p.snr_ref()).unwrap();
        assert!((c - mean).abs() < 3.0 * se);
    }

    #[test]
    fn direct_rate_limits() {
        assert_eq!(rate_direct(0.0, 1e11).unwrap(), 0.0);
        let tiny = rate_direct(1e-30, 1e11).unwrap();
        assert!(tiny > 0.0 && tiny < 1e-17);
        assert!(rate_direct(-1.0, 1.0).is_err());
    }

    #[test]
    fn irs_rate_matches_exact_channel_mc() {
        // N=2000, l=r=100, d=10
        let p = SystemParams::default();
        let stats = IrsLinkStats::new(2000, 100.0, 100.0, 10.0, &p).unwrap();
        let c_ir = rate_irs(&stats, p.snr_ref(), &QuadratureSpec::default()).unwrap();
        let mut rng = topology_stream(10, StreamTag::CascadeFading, 0);
        let n = 20_000;
        let mean = (0..n)
            .map(|_| {
                let a = sample_composite_exact(2000, stats.g_i, stats.g_r, &mut rng);
                let b = rayleigh_sample((stats.g_d / 2.0).sqrt(), &mut rng);
                (1.0 + p.snr_ref() * (a + b).powi(2)).log2()
            })
            .sum::<f64>()
            / n as f64;
        assert!(rel(c_ir, mean) < 0.02, "{c_ir} vs {mean}");
    }

    #[test]
    fn irs_rate_vanishing_kappa_and_ordering() {
        let p = SystemParams::default();
        let spec = QuadratureSpec::default();
        // N=1 at large d: IRS contribution vanishes
        let stats = IrsLinkStats::new(1, 100.0, 100.0, 200.0, &p).unwrap();
        assert!(stats.kappa < 1e-3);
        let c_ir = rate_irs(&stats, p.snr_ref(), &spec).unwrap();
        let c_d = rate_direct(stats.g_d, p.snr_ref()).unwrap();
        assert!(rel(c_ir, c_d) < 0.01, "{c_ir} vs {c_d}");

        for &(n, d) in &[(100u32, 5.0), (500, 20.0), (2000, 10.0), (2000, 25.0)] {
            let stats = IrsLinkStats::new(n, 150.0, 150.0, d, &p).unwrap();
            let c_ir = rate_irs(&stats, p.snr_ref(), &spec).unwrap();
            let c_d = rate_direct(stats.g_d, p.snr_ref()).unwrap();
            assert!(c_ir > c_d);
        }
    }

    #[test]
    fn region_decomposition() {
        let mut p = SystemParams::default();
        let d = coverage_range(p.elements_per_irs, &p).unwrap().radius;
        let reg = decompose_regions(&p, d);
        assert!(rel(reg.irs_density, 50.0 / (PI * (150f64.powi(2) - 50f64.powi(2)))) < 1e-14);
        assert!(rel(reg.irs_density, 7.96e-4) < 1e-3);
        assert!(rel(reg.cell_area(), PI * 250f64.powi(2)) < 1e-14);
        assert!(rel(reg.r1, 50.0 - 0.1 * d) < 1e-14);

        p.irs_r_in = 0.0;
        assert_eq!(decompose_regions(&p, d).r1, 0.0);
        p.irs_r_out = 248.0;
        let reg = decompose_regions(&p, d);
        assert_eq!(reg.r2, 250.0);
        assert!(reg.s3.abs() < 1e-9);
    }

    #[test]
    fn nearest_pdf_mass() {
        let lambda = 7.96e-4;
        let d = 26.2;
        let spec = QuadratureSpec::new(1e-12, 200).unwrap();
        let mass = integrate_1d(|x| nearest_irs_pdf(x, lambda), 0.0, d, &spec).unwrap();
        let expected = 1.0 - (-lambda * PI * d * d).exp();
        assert!((mass - expected).abs() < 1e-8);
    }

    #[test]
    fn no_irs_limit() {
        let mut p = SystemParams::default();
        p.irs_count = 0;
        let t = spatial_throughput(&p).unwrap();
        let spec = QuadratureSpec::new(1e-10, 500).unwrap();
        let disc = 2.0 / 250f64.powi(2)
            * integrate_1d(
                |l| rate_direct(gain_bs_ue(l, &p), p.snr_ref()).unwrap() * l,
                0.0,
                250.0,
                &spec,
            )
            .unwrap();
        assert!(rel(t.mean, disc) < 1e-5, "{} vs {disc}", t.mean);
        assert_eq!(t.middle_irs, 0.0);
    }

    #[test]
    fn throughput_bounded_by_regions() {
        let p = SystemParams::default();
        let t = spatial_throughput(&p).unwrap();
        let present: Vec<f64> = [
            (t.regions.s1, t.region_means[0]),
            (t.regions.s2, t.region_means[1]),
            (t.regions.s3, t.region_means[2]),
        ]
        .iter()
        .filter(|(s, _)| *s > 0.0)
        .map(|(_, c)| *c)
        .collect();
        let lo = present.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = present.iter().cloned().fold(0.0, f64::max);
        assert!(t.mean >= lo && t.mean <= hi);
        let w = (t.regions.s1 + t.regions.s2 + t.regions.s3) / (PI * 250f64.powi(2));
        assert!((w - 1.0).abs() < 1e-14);
    }

    #[test]
    fn throughput_nondecreasing_in_irs_count() {
        let mut p = SystemParams::default();
        let mut prev = 0.0;
        for m in [10u32, 25, 50, 75, 100] {
            p.irs_count = m;
            let c = spatial_throughput(&p).unwrap().mean;
            assert!(c >= prev, "M={m}: {c} < {prev}");
            prev = c;
        }
    }

    #[test]
    fn throughput_continuous_in_range() {
        let mut p = SystemParams::default();
        let base = spatial_throughput(&p).unwrap().mean;
        p.irs_r_out += 1e-3;
        let moved = spatial_throughput(&p).unwrap().mean;
        assert!((moved - base).abs() < 1e-4);
    }

    #[test]
    fn degenerate_annulus_rejected() {
        let mut p = SystemParams::default();
        p.irs_r_in = 100.0;
        p.irs_r_out = 100.0;
        assert!(spatial_throughput(&p).is_err());
        p.irs_count = 0;
        assert!(spatial_throughput(&p).is_ok());
    }

    #[test]
    fn jain_cases() {
        assert!((jain_index(&[3.0; 7]).unwrap() - 1.0).abs() < 1e-15);
        assert!((jain_index(&[0.0, 0.0, 5.0, 0.0]).unwrap() - 0.25).abs() < 1e-15);
        assert!((jain_index(&[2.0, 4.0]).unwrap() - 0.9).abs() < 1e-15);
        assert!(jain_index(&[0.0, 0.0]).is_err());
        assert!(jain_index(&[]).is_err());
        assert!(jain_index(&[1.0, -1.0]).is_err());
    }
}

//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a flat `Vec<f64>` (a `Float64Array` in JS) so the
//! page can draw it without a serialisation layer. The layouts are
//! documented per function.

use irs_throughput::analytic::{rate_direct, rate_irs, spatial_throughput_with, ThroughputSpec};
use irs_throughput::channel::{coverage_range, gain_bs_ue, kappa_approx, IrsLinkStats, SystemParams};
use irs_throughput::montecarlo::{irs_topology, IrsScenario, McConfig, SystemKind};
use irs_throughput::numerics::QuadratureSpec;
use wasm_bindgen::prelude::*;

fn params(n_elements: u32, m_irs: u32, alpha: f64) -> SystemParams {
    SystemParams {
        elements_per_irs: n_elements,
        irs_count: m_irs,
        pathloss_exp: alpha,
        ..SystemParams::default()
    }
}

/// One random drop of UEs and IRSs.
///
/// Layout: `[D, M, K, irs_x0, irs_y0, ..., ue_x0, ue_y0, served0, ...]`
/// where `served` is the IRS index or `-1` for a BS-only UE.
#[wasm_bindgen(js_name = sampleTopology)]
pub fn sample_topology(
    seed: u32,
    n_elements: u32,
    m_irs: u32,
    k_ues: u32,
    r_in: f64,
    r_out: f64,
    alpha: f64,
) -> Result<Vec<f64>, String> {
    let p = SystemParams {
        ue_count: k_ues,
        irs_r_in: r_in,
        irs_r_out: r_out,
        ..params(n_elements, m_irs, alpha)
    };
    p.validate().map_err(|e| e.to_string())?;
    let scenario = IrsScenario::from_params(&p).map_err(|e| e.to_string())?;
    let mc = McConfig::new(1, 1, seed as u64, SystemKind::IrsAided);
    let topo = irs_topology(&p, &scenario, &mc, 0).map_err(|e| e.to_string())?;
    let d = coverage_range(n_elements, &p).map_err(|e| e.to_string())?.radius;

    let mut out = vec![d, topo.irs_positions.len() as f64, topo.ue_positions.len() as f64];
    for q in &topo.irs_positions {
        out.extend([q.x, q.y]);
    }
    for (u, a) in topo.ue_positions.iter().zip(&topo.association) {
        out.extend([u.x, u.y, a.map_or(-1.0, |a| a.irs_index as f64)]);
    }
    Ok(out)
}

/// Link rates against the IRS–UE distance for a UE at BS distance `l`
/// (with the IRS at the same BS distance).
///
/// Layout: `[C_d, D, d0, C_ir0, kappa0, d1, C_ir1, kappa1, ...]`.
#[wasm_bindgen(js_name = linkCurve)]
pub fn link_curve(n_elements: u32, alpha: f64, l: f64, d_max: f64, points: u32) -> Result<Vec<f64>, String> {
    let p = params(n_elements, 1, alpha);
    p.validate().map_err(|e| e.to_string())?;
    if points < 2 || !(d_max > 0.0) || !(l >= 0.0) {
        return Err("need at least two points, d_max > 0 and l >= 0".into());
    }
    let snr = p.snr_ref();
    let c_d = rate_direct(gain_bs_ue(l, &p), snr).map_err(|e| e.to_string())?;
    let d = coverage_range(n_elements, &p).map_err(|e| e.to_string())?.radius;
    let spec = QuadratureSpec::default();
    let mut out = vec![c_d, d];
    for i in 0..points {
        let dist = d_max * i as f64 / (points - 1) as f64;
        let stats = IrsLinkStats::new(n_elements, l, l, dist, &p).map_err(|e| e.to_string())?;
        let c_ir = rate_irs(&stats, snr, &spec).map_err(|e| e.to_string())?;
        let kappa = kappa_approx(n_elements, dist, &p).map_err(|e| e.to_string())?;
        out.extend([dist, c_ir, kappa]);
    }
    Ok(out)
}

/// Analytic spatial throughput over deployment ranges on a `step` grid.
///
/// Layout: `[S, r_0, ..., r_{S-1}, c(0,0), c(0,1), ..., c(S-1,S-1)]`, a
/// row-major `S x S` matrix indexed by `(r_in, r_out)`; entries with
/// `r_in >= r_out` are `NaN`.
#[wasm_bindgen(js_name = throughputMap)]
pub fn throughput_map(n_elements: u32, m_irs: u32, alpha: f64, step: f64) -> Result<Vec<f64>, String> {
    let base = params(n_elements, m_irs, alpha);
    base.validate().map_err(|e| e.to_string())?;
    if !(step >= 1.0 && step < base.cell_radius) {
        return Err(format!("step must lie in [1, {}), got {step}", base.cell_radius));
    }
    let radii: Vec<f64> = (0..)
        .map(|i| i as f64 * step)
        .take_while(|&r| r < base.cell_radius)
        .collect();
    // coarser tolerances keep the map interactive
    let spec = ThroughputSpec {
        outer: QuadratureSpec::new(1e-4, 200).map_err(|e| e.to_string())?,
        inner: QuadratureSpec::new(1e-5, 200).map_err(|e| e.to_string())?,
        rate: QuadratureSpec::new(1e-7, 200).map_err(|e| e.to_string())?,
    };
    let mut out = Vec::with_capacity(1 + radii.len() * (radii.len() + 1));
    out.push(radii.len() as f64);
    out.extend(&radii);
    for &a in &radii {
        for &b in &radii {
            if a >= b {
                out.push(f64::NAN);
                continue;
            }
            let p = SystemParams {
                irs_r_in: a,
                irs_r_out: b,
                ..base.clone()
            };
            out.push(spatial_throughput_with(&p, &spec).map_err(|e| e.to_string())?.mean);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topology_layout() {
        let v = sample_topology(7, 2000, 10, 40, 50.0, 150.0, 2.5).unwrap();
        let (m, k) = (v[1] as usize, v[2] as usize);
        assert_eq!((m, k), (10, 40));
        assert_eq!(v.len(), 3 + 2 * m + 3 * k);
        assert!((v[0] - 26.18).abs() < 0.01);
        for ue in v[3 + 2 * m..].chunks(3) {
            assert!(ue[2] == -1.0 || (ue[2] >= 0.0 && (ue[2] as usize) < m));
        }
        assert_eq!(v, sample_topology(7, 2000, 10, 40, 50.0, 150.0, 2.5).unwrap());
        assert!(sample_topology(7, 2000, 10, 40, 150.0, 50.0, 2.5).is_err());
    }

    #[test]
    fn link_curve_gain_fades_with_distance() {
        let v = link_curve(2000, 2.5, 100.0, 200.0, 21).unwrap();
        let c_d = v[0];
        let pts: Vec<&[f64]> = v[2..].chunks(3).collect();
        assert_eq!(pts.len(), 21);
        assert!(pts.windows(2).all(|w| w[1][1] <= w[0][1] && w[1][2] < w[0][2]));
        let (near, far) = (pts[0][1] - c_d, pts[20][1] - c_d);
        assert!(far > 0.0 && far < 0.1 * near, "{near} {far}");
        assert!(link_curve(2000, 2.5, 100.0, 200.0, 1).is_err());
    }

    #[test]
    fn map_layout_and_mask() {
        let v = throughput_map(2000, 50, 2.5, 50.0).unwrap();
        let s = v[0] as usize;
        assert_eq!(s, 5);
        assert_eq!(v.len(), 1 + s + s * s);
        let cell = |i: usize, j: usize| v[1 + s + i * s + j];
        assert!(cell(2, 1).is_nan() && cell(1, 1).is_nan());
        assert!(cell(0, 4) > 5.0);
    }
}

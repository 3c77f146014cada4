//! Deployment-range search and the M-vs-N element allocation sweep.

use crate::analytic::spatial_throughput;
use crate::channel::{coverage_range, SystemParams};
use crate::montecarlo::{
    simulate_irs, simulate_irs_scenario, simulate_relay, IrsPlacement, IrsScenario, McConfig,
    SystemKind, UePlacement,
};
use crate::{Error, Result};

/// Uniform grid `r_min, r_min + step, ..., <= r_max` of candidate radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub step: f64,
    pub r_min: f64,
    pub r_max: f64,
}

impl GridSpec {
    pub fn new(step: f64, r_min: f64, r_max: f64) -> Result<Self> {
        if !(r_min >= 0.0 && step > 0.0 && step <= r_max - r_min) {
            return Err(Error::invalid(format!(
                "grid needs 0 <= r_min and 0 < step <= r_max - r_min, got step={step}, [{r_min}, {r_max}]"
            )));
        }
        Ok(GridSpec { step, r_min, r_max })
    }

    /// Default 5 m grid over `[0, R_c)`.
    pub fn for_cell(cell_radius: f64) -> Self {
        GridSpec {
            step: 5.0,
            r_min: 0.0,
            r_max: cell_radius - 5.0,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.r_max - self.r_min) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.r_min + i as f64 * self.step).collect()
    }

    /// All `(r_in, r_out)` with `r_in <= r_out`, ordered by `r_in` then `r_out`.
    pub fn pairs(&self) -> Vec<(f64, f64)> {
        let pts = self.points();
        let mut out = Vec::with_capacity(pts.len() * (pts.len() + 1) / 2);
        for (i, &a) in pts.iter().enumerate() {
            for &b in &pts[i..] {
                out.push((a, b));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Analytic IRS spatial throughput.
    AnalyticIrs,
    /// Simulated IRS-aided system.
    McIrs,
    /// Simulated relay-aided system; the range is the relay range.
    McRelay,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeEvaluation {
    pub r_in: f64,
    pub r_out: f64,
    pub throughput: f64,
    pub standard_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeOptimum {
    pub r_in: f64,
    pub r_out: f64,
    /// Objective at the optimum, re-evaluated at the final budget for MC.
    pub throughput: f64,
    pub standard_error: f64,
    /// Every evaluated grid pair, in grid order.
    pub evaluations: Vec<RangeEvaluation>,
}

fn with_range(p: &SystemParams, objective: Objective, r_in: f64, r_out: f64) -> SystemParams {
    let mut q = p.clone();
    match objective {
        Objective::AnalyticIrs | Objective::McIrs => {
            q.irs_r_in = r_in;
            q.irs_r_out = r_out;
        }
        Objective::McRelay => {
            q.relay_r_in = r_in;
            q.relay_r_out = r_out;
        }
    }
    q
}

/// Objective value and its standard error at one deployment range.
pub fn evaluate_range(
    p: &SystemParams,
    objective: Objective,
    r_in: f64,
    r_out: f64,
    mc: &McConfig,
) -> Result<(f64, f64)> {
    let q = with_range(p, objective, r_in, r_out);
    match objective {
        Objective::AnalyticIrs => Ok((spatial_throughput(&q)?.mean, 0.0)),
        Objective::McIrs => {
            let s = simulate_irs(&q, &mc.with_system(SystemKind::IrsAided))?;
            Ok((s.mean_rate, s.standard_error))
        }
        Objective::McRelay => {
            let s = simulate_relay(&q, &mc.with_system(SystemKind::RelayAided))?;
            Ok((s.mean_rate, s.standard_error))
        }
    }
}

fn feasible(objective: Objective, p: &SystemParams, r_in: f64, r_out: f64) -> bool {
    let degenerate_density = objective == Objective::AnalyticIrs && r_in == r_out && p.irs_count > 0;
    r_out < p.cell_radius && !degenerate_density
}

/// Exhaustive search over `grid`. MC objectives are searched with `search`
/// and the winner re-evaluated with `refine` when given. Ties keep the
/// smallest `r_in`, then the smallest `r_out`.
pub fn optimize_range(
    p: &SystemParams,
    grid: &GridSpec,
    objective: Objective,
    search: &McConfig,
    refine: Option<&McConfig>,
) -> Result<RangeOptimum> {
    p.validate()?;
    let pairs: Vec<(f64, f64)> = grid
        .pairs()
        .into_iter()
        .filter(|&(a, b)| feasible(objective, p, a, b))
        .collect();
    if pairs.is_empty() {
        return Err(Error::invalid("deployment grid has no feasible (r_in, r_out) pair"));
    }

    let eval = |&(r_in, r_out): &(f64, f64)| -> Result<RangeEvaluation> {
        let (throughput, standard_error) = evaluate_range(p, objective, r_in, r_out, search)?;
        Ok(RangeEvaluation {
            r_in,
            r_out,
            throughput,
            standard_error,
        })
    };
    #[cfg(feature = "parallel")]
    let evaluations: Vec<RangeEvaluation> = {
        use rayon::prelude::*;
        pairs.par_iter().map(eval).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let evaluations: Vec<RangeEvaluation> = pairs.iter().map(eval).collect::<Result<_>>()?;

    let mut best = evaluations[0];
    for e in &evaluations[1..] {
        if e.throughput > best.throughput {
            best = *e;
        }
    }
    let (throughput, standard_error) = match (objective, refine) {
        (Objective::AnalyticIrs, _) | (_, None) => (best.throughput, best.standard_error),
        (_, Some(full)) => evaluate_range(p, objective, best.r_in, best.r_out, full)?,
    };
    Ok(RangeOptimum {
        r_in: best.r_in,
        r_out: best.r_out,
        throughput,
        standard_error,
        evaluations,
    })
}

/// Named columns of numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepResult {
    pub fn new(columns: &[&str]) -> Self {
        SweepResult {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

/// Column order of [`mn_tradeoff`] rows.
pub const MN_COLUMNS: [&str; 8] = [
    "alpha",
    "m",
    "n",
    "coverage_m",
    "mean_rate",
    "standard_error",
    "jain",
    "jain_standard_error",
];

/// Splits `q_total` elements over `M` IRSs equally spaced on a circle of
/// radius `ring_radius`, for every `M` in `m_values` and path-loss exponent
/// in `alphas`. UEs are uniform in the ring `[R - D_max, R + D_max]`
/// (clamped at the BS), `D_max` being the coverage range of one IRS holding
/// all `q_total` elements.
pub fn mn_tradeoff(
    p: &SystemParams,
    q_total: u32,
    m_values: &[u32],
    ring_radius: f64,
    alphas: &[f64],
    mc: &McConfig,
) -> Result<SweepResult> {
    mn_tradeoff_with(p, q_total, m_values, ring_radius, alphas, None, mc)
}

/// [`mn_tradeoff`] with the UE ring half-width fixed to `half_width` instead
/// of `D_max`, so runs with different `q_total` share one UE population.
pub fn mn_tradeoff_with(
    p: &SystemParams,
    q_total: u32,
    m_values: &[u32],
    ring_radius: f64,
    alphas: &[f64],
    half_width: Option<f64>,
    mc: &McConfig,
) -> Result<SweepResult> {
    if let Some(&m) = m_values.iter().find(|&&m| m == 0 || q_total % m != 0) {
        return Err(Error::invalid(format!("M = {m} does not divide Q = {q_total}")));
    }
    let mut out = SweepResult::new(&MN_COLUMNS);
    for &alpha in alphas {
        let pa = SystemParams {
            pathloss_exp: alpha,
            ..p.clone()
        };
        pa.validate()?;
        let d_max = match half_width {
            Some(w) => w,
            None => coverage_range(q_total, &pa)?.radius,
        };
        let outer = ring_radius + d_max;
        if !(outer < pa.cell_radius) {
            return Err(Error::invalid(format!(
                "ring radius {ring_radius} plus half-width {d_max:.2} leaves the cell of radius {}",
                pa.cell_radius
            )));
        }
        let inner = (ring_radius - d_max).max(0.0);
        for &m in m_values {
            let n = q_total / m;
            let scenario = IrsScenario {
                ues: UePlacement::Ring { inner, outer },
                irs: IrsPlacement::Circle {
                    count: m as usize,
                    radius: ring_radius,
                },
                elements_per_irs: n,
                region_bounds: [inner, outer],
            };
            let s = simulate_irs_scenario(&pa, &scenario, &mc.with_system(SystemKind::IrsAided))?;
            out.push(vec![
                alpha,
                m as f64,
                n as f64,
                coverage_range(n, &pa)?.radius,
                s.mean_rate,
                s.standard_error,
                s.jain,
                s.jain_standard_error,
            ]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_and_pairs() {
        let g = GridSpec::new(5.0, 0.0, 20.0).unwrap();
        assert_eq!(g.points(), vec![0.0, 5.0, 10.0, 15.0, 20.0]);
        let pairs = g.pairs();
        assert_eq!(pairs.len(), 15);
        assert_eq!(pairs[0], (0.0, 0.0));
        assert_eq!(pairs[1], (0.0, 5.0));
        assert!(pairs.iter().all(|(a, b)| a <= b));
        assert_eq!(GridSpec::for_cell(250.0).points().len(), 50);
        assert!(GridSpec::new(0.0, 0.0, 10.0).is_err());
        assert!(GridSpec::new(20.0, 0.0, 10.0).is_err());
    }

    #[test]
    fn single_feasible_pair() {
        let p = SystemParams::default();
        let g = GridSpec::new(10.0, 90.0, 100.0).unwrap();
        let mc = McConfig::new(1, 1, 0, SystemKind::IrsAided);
        let opt = optimize_range(&p, &g, Objective::AnalyticIrs, &mc, None).unwrap();
        assert_eq!((opt.r_in, opt.r_out), (90.0, 100.0));
        assert_eq!(opt.evaluations.len(), 1);
    }

    #[test]
    fn analytic_optimum_is_exhaustive_argmax() {
        let p = SystemParams::default();
        let g = GridSpec::new(25.0, 0.0, 225.0).unwrap();
        let mc = McConfig::new(1, 1, 0, SystemKind::IrsAided);
        let opt = optimize_range(&p, &g, Objective::AnalyticIrs, &mc, None).unwrap();
        assert!(opt.evaluations.iter().all(|e| e.throughput <= opt.throughput));
        assert!(opt.evaluations.iter().all(|e| e.r_in < e.r_out));
        let first_best = opt
            .evaluations
            .iter()
            .find(|e| e.throughput == opt.throughput)
            .unwrap();
        assert_eq!((first_best.r_in, first_best.r_out), (opt.r_in, opt.r_out));
    }

    #[test]
    fn analytic_range_widens_with_irs_count() {
        let g = GridSpec::new(20.0, 0.0, 240.0).unwrap();
        let mc = McConfig::new(1, 1, 0, SystemKind::IrsAided);
        let widths: Vec<f64> = [2u32, 10, 50]
            .iter()
            .map(|&m| {
                let p = SystemParams { irs_count: m, ..SystemParams::default() };
                let o = optimize_range(&p, &g, Objective::AnalyticIrs, &mc, None).unwrap();
                o.r_out - o.r_in
            })
            .collect();
        assert!(widths.windows(2).all(|w| w[1] >= w[0]), "{widths:?}");
        assert!(widths[2] > widths[0]);
    }

    #[test]
    fn more_elements_never_hurt_in_tradeoff() {
        let p = SystemParams { ue_count: 200, ..SystemParams::default() };
        let mc = McConfig::new(8, 10, 3, SystemKind::IrsAided);
        let w = coverage_range(5000, &p).unwrap().radius;
        let rate = |q: u32| {
            mn_tradeoff_with(&p, q, &[5], 50.0, &[2.5], Some(w), &mc).unwrap().column("mean_rate").unwrap()[0]
        };
        assert!(rate(5000) >= rate(2500));
    }

    #[test]
    fn infeasible_grid_rejected() {
        let p = SystemParams::default();
        let g = GridSpec::new(5.0, 255.0, 270.0).unwrap();
        let mc = McConfig::new(1, 1, 0, SystemKind::IrsAided);
        assert!(optimize_range(&p, &g, Objective::AnalyticIrs, &mc, None).is_err());
    }

    #[test]
    fn mn_rejects_non_divisor() {
        let p = SystemParams::default();
        let mc = McConfig::new(1, 1, 0, SystemKind::IrsAided);
        assert!(mn_tradeoff(&p, 5000, &[3], 50.0, &[2.5], &mc).is_err());
        assert!(mn_tradeoff(&p, 5000, &[0], 50.0, &[2.5], &mc).is_err());
        // ring leaves the cell
        assert!(mn_tradeoff(&p, 5000, &[1], 200.0, &[2.2], &mc).is_err());
    }

    #[test]
    fn mn_rows_reproducible() {
        let p = SystemParams { ue_count: 100, ..SystemParams::default() };
        let mc = McConfig::new(3, 5, 11, SystemKind::IrsAided);
        let a = mn_tradeoff(&p, 500, &[1, 5, 50], 50.0, &[2.5], &mc).unwrap();
        let b = mn_tradeoff(&p, 500, &[1, 5, 50], 50.0, &[2.5], &mc).unwrap();
        assert_eq!(a.rows.len(), 3);
        let bits = |s: &SweepResult| s.rows.iter().flatten().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
    }
}

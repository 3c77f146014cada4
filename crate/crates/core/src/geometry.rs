//! Planar placement of UEs, IRSs and relays around a BS at the origin.
//!
//! All distances are horizontal; antenna heights only enter through the
//! channel gains.

use std::f64::consts::PI;

use rand::Rng;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const ORIGIN: Point2D = Point2D { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point2D { x, y }
    }

    pub fn from_polar(radius: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Point2D::new(radius * c, radius * s)
    }

    /// Distance to the BS.
    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn angle(&self) -> f64 {
        self.y.atan2(self.x)
    }
}

/// Index and horizontal distance of the IRS a UE is associated with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Association {
    pub irs_index: usize,
    pub distance: f64,
}

/// One realisation of node positions in the cell.
#[derive(Debug, Clone, Default)]
pub struct Topology {
    pub ue_positions: Vec<Point2D>,
    pub irs_positions: Vec<Point2D>,
    pub relay_positions: Vec<Point2D>,
    /// Per UE: the nearest IRS if it lies within the coverage range.
    pub association: Vec<Option<Association>>,
}

impl Topology {
    /// Builds a topology and associates every UE with its nearest IRS when
    /// that IRS is no farther than `coverage_range`.
    pub fn associate(
        ue_positions: Vec<Point2D>,
        irs_positions: Vec<Point2D>,
        relay_positions: Vec<Point2D>,
        coverage_range: f64,
    ) -> Self {
        let association = ue_positions
            .iter()
            .map(|ue| {
                nearest_irs(ue, &irs_positions).filter(|a| a.distance <= coverage_range)
            })
            .collect();
        Topology {
            ue_positions,
            irs_positions,
            relay_positions,
            association,
        }
    }

    pub fn covered_count(&self) -> usize {
        self.association.iter().filter(|a| a.is_some()).count()
    }
}

/// `count` points i.i.d. uniform over the disc of radius `cell_radius`.
pub fn sample_ues<R: Rng + ?Sized>(
    count: usize,
    cell_radius: f64,
    rng: &mut R,
) -> Result<Vec<Point2D>> {
    if count == 0 {
        return Err(Error::invalid("UE count must be at least 1"));
    }
    if !(cell_radius > 0.0 && cell_radius.is_finite()) {
        return Err(Error::invalid(format!(
            "cell radius must be positive, got {cell_radius}"
        )));
    }
    Ok(sample_annulus_unchecked(count, 0.0, cell_radius, rng))
}

/// `count` points i.i.d. uniform over the annulus `r_in <= |p| <= r_out`.
///
/// Each point consumes exactly two uniforms (radius, then angle), so the
/// same stream mapped onto different ranges yields continuously moving
/// points.
pub fn sample_annulus<R: Rng + ?Sized>(
    count: usize,
    r_in: f64,
    r_out: f64,
    rng: &mut R,
) -> Result<Vec<Point2D>> {
    if !(r_in >= 0.0 && r_in.is_finite() && r_out.is_finite()) {
        return Err(Error::invalid(format!(
            "annulus radii must be finite and non-negative, got [{r_in}, {r_out}]"
        )));
    }
    if r_in > r_out {
        return Err(Error::invalid(format!(
            "annulus inner radius {r_in} exceeds outer radius {r_out}"
        )));
    }
    Ok(sample_annulus_unchecked(count, r_in, r_out, rng))
}

fn sample_annulus_unchecked<R: Rng + ?Sized>(
    count: usize,
    r_in: f64,
    r_out: f64,
    rng: &mut R,
) -> Vec<Point2D> {
    let r_in2 = r_in * r_in;
    let span = r_out * r_out - r_in2;
    (0..count)
        .map(|_| {
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            // clamp guards the degenerate annulus against rounding
            let radius = (r_in2 + u * span).sqrt().clamp(r_in, r_out);
            Point2D::from_polar(radius, 2.0 * PI * v)
        })
        .collect()
}

/// `count` points equally spaced on a circle, the first at angle zero.
pub fn place_on_circle(count: usize, radius: f64) -> Result<Vec<Point2D>> {
    if count == 0 {
        return Err(Error::invalid("circle placement needs at least one point"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid(format!(
            "circle radius must be positive, got {radius}"
        )));
    }
    Ok((0..count)
        .map(|i| Point2D::from_polar(radius, 2.0 * PI * i as f64 / count as f64))
        .collect())
}

/// Nearest IRS to `ue`; ties go to the lowest index. `None` for an empty set.
pub fn nearest_irs(ue: &Point2D, irs_positions: &[Point2D]) -> Option<Association> {
    let mut best: Option<Association> = None;
    for (irs_index, irs) in irs_positions.iter().enumerate() {
        let distance = ue.distance(irs);
        if best.map_or(true, |b| distance < b.distance) {
            best = Some(Association {
                irs_index,
                distance,
            });
        }
    }
    best
}

//! Integral curves of the probability-current direction field.
//!
//! Tracing integrates the *normalized* field j/|j| with classical RK4 and
//! bilinear interpolation, so the step size is a geometric arc length and
//! closed orbits are detectable independently of the current's magnitude.
//! For a pure vortex the t=0 streamlines are closed circles; at t != 0 they
//! spiral outward (t > 0) or inward (t < 0) while the sense of rotation
//! (the handedness) never flips.

use crate::grid::Grid2D;
use crate::observables::VectorField2D;
use crate::states::PhysicalParams;

/// Current magnitude below which the field is considered stagnant.
pub const STAGNATION_THRESHOLD: f64 = 1e-12;

/// Why a trace stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The seed itself sits in stagnant field; no points were produced.
    StagnantSeed,
    /// The trace ran into a stagnant region.
    Stagnated,
    /// The trace left the grid window.
    LeftWindow,
    /// The step budget was exhausted.
    MaxSteps,
}

/// A traced streamline: the seed, the vertices (seed included), and why the
/// trace stopped. Consecutive vertices are at most one integration step apart.
#[derive(Debug, Clone)]
pub struct Polyline {
    pub seed: (f64, f64),
    pub time: f64,
    pub points: Vec<(f64, f64)>,
    pub stop: StopReason,
}

fn direction(vfield: &VectorField2D, p: (f64, f64)) -> Option<(f64, f64)> {
    let (jx, jy) = vfield.sample_bilinear(p.0, p.1)?;
    let mag = (jx * jx + jy * jy).sqrt();
    if mag < STAGNATION_THRESHOLD {
        None
    } else {
        Some((jx / mag, jy / mag))
    }
}

/// Trace the streamline through `seed` with arc-length step `step`.
///
/// Stops at `max_steps`, on leaving the window, or where |j| drops below
/// [`STAGNATION_THRESHOLD`]; a stagnant seed yields an empty polyline with
/// [`StopReason::StagnantSeed`].
pub fn trace(
    vfield: &VectorField2D,
    time: f64,
    seed: (f64, f64),
    step: f64,
    max_steps: usize,
) -> Polyline {
    assert!(step > 0.0, "step must be positive");
    if direction(vfield, seed).is_none() {
        return Polyline { seed, time, points: Vec::new(), stop: StopReason::StagnantSeed };
    }
    let mut points = Vec::with_capacity(max_steps.min(4096) + 1);
    points.push(seed);
    let mut p = seed;
    let mut stop = StopReason::MaxSteps;
    for _ in 0..max_steps {
        let next = match rk4_step(vfield, p, step) {
            Some(next) => next,
            None => {
                // Distinguish stagnation at the current point from an RK4
                // substep stepping off the grid.
                stop = match vfield.sample_bilinear(p.0, p.1) {
                    Some((jx, jy)) if (jx * jx + jy * jy).sqrt() < STAGNATION_THRESHOLD => {
                        StopReason::Stagnated
                    }
                    _ => StopReason::LeftWindow,
                };
                break;
            }
        };
        points.push(next);
        p = next;
    }
    Polyline { seed, time, points, stop }
}

fn rk4_step(vfield: &VectorField2D, p: (f64, f64), h: f64) -> Option<(f64, f64)> {
    let k1 = direction(vfield, p)?;
    let k2 = direction(vfield, (p.0 + 0.5 * h * k1.0, p.1 + 0.5 * h * k1.1))?;
    let k3 = direction(vfield, (p.0 + 0.5 * h * k2.0, p.1 + 0.5 * h * k2.1))?;
    let k4 = direction(vfield, (p.0 + h * k3.0, p.1 + h * k3.1))?;
    Some((
        p.0 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        p.1 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    ))
}

/// Sign of the azimuthal current component averaged over 64 points on the
/// circle of the given radius: +1 counterclockwise, -1 clockwise, 0 stagnant.
pub fn handedness(vfield: &VectorField2D, radius: f64) -> i8 {
    const SAMPLES: usize = 64;
    let mut acc = 0.0;
    for k in 0..SAMPLES {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / SAMPLES as f64;
        let (x, y) = (radius * phi.cos(), radius * phi.sin());
        if let Some((jx, jy)) = vfield.sample_bilinear(x, y) {
            acc += (-y * jx + x * jy) / radius;
        }
    }
    let mean = acc / SAMPLES as f64;
    if mean > STAGNATION_THRESHOLD {
        1
    } else if mean < -STAGNATION_THRESHOLD {
        -1
    } else {
        0
    }
}

/// Default seed family: 8 points uniformly on each of three circles of radius
/// 0.5, 1.0, 1.5 times the vortex ring radius `w0 sqrt((1 + t^2/t0^2)/2)`.
pub fn default_seeds(params: &PhysicalParams, t: f64) -> Vec<(f64, f64)> {
    let tau = t / params.time_scale();
    let ring = params.waist * ((1.0 + tau * tau) / 2.0).sqrt();
    let mut seeds = Vec::with_capacity(24);
    for scale in [0.5, 1.0, 1.5] {
        let r = scale * ring;
        for k in 0..8 {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
            seeds.push((r * phi.cos(), r * phi.sin()));
        }
    }
    seeds
}

/// CSV export of a trace family: `trace_id,step_index,x,y`, one row per vertex.
pub fn polylines_to_csv(traces: &[Polyline]) -> String {
    let mut out = String::from("trace_id,step_index,x,y\n");
    for (id, tr) in traces.iter().enumerate() {
        for (k, (x, y)) in tr.points.iter().enumerate() {
            out.push_str(&format!("{id},{k},{},{}\n", crate::fmt_g17(*x), crate::fmt_g17(*y)));
        }
    }
    out
}

/// Minimal SVG document (paths only) with the viewBox mapped from the grid
/// window; the y axis is flipped so the figure is right-handed.
pub fn polylines_to_svg(traces: &[Polyline], grid: &Grid2D) -> String {
    let hw = grid.half_width();
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">\n",
        -hw,
        -hw,
        2.0 * hw,
        2.0 * hw
    );
    let width = hw / 400.0;
    for tr in traces {
        if tr.points.is_empty() {
            continue;
        }
        out.push_str("<path d=\"");
        for (k, (x, y)) in tr.points.iter().enumerate() {
            let cmd = if k == 0 { 'M' } else { 'L' };
            out.push_str(&format!("{cmd}{x:.6} {:.6} ", -y));
        }
        out.push_str(&format!(
            "\" fill=\"none\" stroke=\"black\" stroke-width=\"{width:.6}\"/>\n"
        ));
    }
    out.push_str("</svg>\n");
    out
}

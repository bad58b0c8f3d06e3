//! Geometry of the traced current streamlines: closed orbits at the focus,
//! signed spirals away from it, time-invariant handedness, and no crossings.

use wavepacket_core::observables::{current, sample, CurrentMethod};
use wavepacket_core::streamlines::{default_seeds, handedness, trace, StopReason};
use wavepacket_core::{Grid2D, Mode, PhysicalParams, VectorField2D};

fn vortex_current(ell: i32, p: &PhysicalParams, t: f64) -> VectorField2D {
    let grid = Grid2D::new(8.0 * p.waist, 256, 256).unwrap();
    let f = sample(Mode::LaguerreGauss { ell }, p, &grid, t).unwrap();
    current(&f, CurrentMethod::AnalyticGradient)
}

#[test]
fn closed_orbit_at_focus() {
    let p = PhysicalParams::default();
    let j = vortex_current(1, &p, 0.0);
    let ring = p.waist / std::f64::consts::SQRT_2;
    let step = 0.01;
    let steps = (2.0 * std::f64::consts::PI * ring / step).round() as usize;
    let tr = trace(&j, 0.0, (ring, 0.0), step, steps);
    assert_eq!(tr.stop, StopReason::MaxSteps);
    let last = *tr.points.last().unwrap();
    let closure = ((last.0 - ring).powi(2) + last.1.powi(2)).sqrt();
    assert!(
        closure < 2.0 * step,
        "orbit failed to close: error {closure} after {steps} steps"
    );
}

#[test]
fn spiral_radial_drift_has_the_sign_of_time() {
    let p = PhysicalParams::default();
    let t0 = p.time_scale();
    for sign in [1.0f64, -1.0] {
        let t = sign * 0.5 * t0;
        let j = vortex_current(1, &p, t);
        let tau: f64 = t / t0;
        let ring = p.waist * ((1.0 + tau * tau) / 2.0).sqrt();
        let tr = trace(&j, t, (ring, 0.0), 0.01, 450);
        assert!(!tr.points.is_empty());
        let last = *tr.points.last().unwrap();
        let r_end = (last.0.powi(2) + last.1.powi(2)).sqrt();
        assert!(
            (r_end - ring) * sign > 0.0,
            "t={t}: radius went {ring} -> {r_end}, wrong direction"
        );
    }
}

#[test]
fn inward_spiral_converges_toward_the_core() {
    // The spiral pitch shrinks like r^2, so the core is approached
    // asymptotically rather than reached; the trace spends its whole step
    // budget tightening around it.
    let p = PhysicalParams::default();
    let j = vortex_current(1, &p, -0.5 * p.time_scale());
    let ring = p.waist * (1.25f64 / 2.0).sqrt();
    let tr = trace(&j, 0.0, (0.5 * ring, 0.0), 0.01, 20_000);
    assert_eq!(tr.stop, StopReason::MaxSteps);
    let last = *tr.points.last().unwrap();
    let r_end = (last.0.powi(2) + last.1.powi(2)).sqrt();
    assert!(r_end < 0.2 * ring, "spiral stalled at r = {r_end}");
}

#[test]
fn handedness_is_constant_through_the_focus() {
    let p = PhysicalParams::default();
    let t0 = p.time_scale();
    for ell in [1i32, -1, 2] {
        let expected = ell.signum() as i8;
        for tau in [-2.0, -1.0, -0.1, 0.1, 1.0, 2.0] {
            let t = tau * t0;
            let j = vortex_current(ell, &p, t);
            let ring = p.waist * ((1.0 + tau * tau) / 2.0).sqrt() * (ell.abs() as f64).sqrt();
            assert_eq!(
                handedness(&j, ring),
                expected,
                "ell={ell} tau={tau}: handedness flipped"
            );
        }
    }
}

/// Proper intersection test for two closed segments, excluding shared
/// endpoints; streamlines of a smooth planar field must never cross.
fn segments_cross(a: ((f64, f64), (f64, f64)), b: ((f64, f64), (f64, f64))) -> bool {
    fn orient(p: (f64, f64), q: (f64, f64), r: (f64, f64)) -> f64 {
        (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0)
    }
    let d1 = orient(b.0, b.1, a.0);
    let d2 = orient(b.0, b.1, a.1);
    let d3 = orient(a.0, a.1, b.0);
    let d4 = orient(a.0, a.1, b.1);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

#[test]
fn traces_do_not_cross() {
    let p = PhysicalParams::default();
    let t0 = p.time_scale();
    for tau in [0.0, 0.5] {
        let t = tau * t0;
        let j = vortex_current(1, &p, t);
        let ring = p.waist * ((1.0 + tau * tau) / 2.0_f64).sqrt();
        // Distinct orbits: one seed per radius.
        let seeds: Vec<(f64, f64)> = [0.4, 0.7, 1.0, 1.3, 1.6]
            .iter()
            .map(|s| (s * ring, 0.0))
            .collect();
        let traces: Vec<_> = seeds
            .iter()
            .map(|&seed| trace(&j, t, seed, 0.01, 400))
            .collect();
        for (i, a) in traces.iter().enumerate() {
            for b in traces.iter().skip(i + 1) {
                for sa in a.points.windows(2) {
                    for sb in b.points.windows(2) {
                        assert!(
                            !segments_cross((sa[0], sa[1]), (sb[0], sb[1])),
                            "traces cross at tau={tau}: {sa:?} x {sb:?}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn default_seed_family_traces_full_set_for_vortex() {
    let p = PhysicalParams::default();
    let j = vortex_current(1, &p, 0.0);
    let seeds = default_seeds(&p, 0.0);
    let live = seeds
        .iter()
        .filter(|&&s| !trace(&j, 0.0, s, 0.01, 10).points.is_empty())
        .count();
    assert_eq!(live, seeds.len(), "all default seeds sit in live field");
}

//! Local probability conservation: the continuity residual shrinks at second
//! order in dt, and the two current routes (closed-form gradient vs Fourier
//! differentiation) agree.

use wavepacket_core::observables::{continuity_residual, current, sample, CurrentMethod};
use wavepacket_core::{Grid2D, Mode, PhysicalParams, VectorField2D};

#[test]
fn continuity_residual_small_and_second_order() {
    let p = PhysicalParams::default();
    let t0 = p.time_scale();
    let grid = Grid2D::new(8.0 * p.waist, 256, 256).unwrap();
    for ell in [0, 1] {
        let mode = Mode::LaguerreGauss { ell };
        for tau in [0.3, 1.0] {
            let t = tau * t0;
            let mut dt = 1e-3 * t0;
            let mut norms = Vec::new();
            for _ in 0..4 {
                let (_, l2) = continuity_residual(mode, &p, &grid, t, dt).unwrap();
                norms.push(l2);
                dt /= 2.0;
            }
            assert!(
                norms[0] < 1e-5,
                "ell={ell} t={tau}t0: residual {} at dt=1e-3 t0",
                norms[0]
            );
            // Ratio per halving stays near 4 until the spectral floor.
            for w in norms.windows(2) {
                if w[1] > 1e-12 {
                    let ratio = w[0] / w[1];
                    assert!(
                        (3.5..=4.5).contains(&ratio),
                        "ell={ell} t={tau}t0: residual ratio {ratio}"
                    );
                }
            }
        }
    }
}

fn rel_l2_vec(a: &VectorField2D, b: &VectorField2D) -> f64 {
    let mut diff2 = 0.0;
    let mut ref2 = 0.0;
    for ((ax, bx), (ay, by)) in a
        .jx
        .iter()
        .zip(b.jx.iter())
        .zip(a.jy.iter().zip(b.jy.iter()))
    {
        diff2 += (ax - bx).powi(2) + (ay - by).powi(2);
        ref2 += bx.powi(2) + by.powi(2);
    }
    (diff2 / ref2).sqrt()
}

#[test]
fn analytic_and_spectral_currents_agree() {
    let p = PhysicalParams::default();
    let t0 = p.time_scale();
    let grid = Grid2D::new(8.0 * p.waist, 256, 256).unwrap();
    let cases = [
        (Mode::LaguerreGauss { ell: 1 }, 0.0),
        (Mode::LaguerreGauss { ell: 1 }, 0.7 * t0),
        (Mode::LaguerreGauss { ell: -2 }, 0.5 * t0),
        (Mode::HermiteGauss { mu: 2, nu: 1 }, 0.5 * t0),
    ];
    for (mode, t) in cases {
        let f = sample(mode, &p, &grid, t).unwrap();
        let analytic = current(&f, CurrentMethod::AnalyticGradient);
        let spectral = current(&f, CurrentMethod::Spectral);
        let err = rel_l2_vec(&spectral, &analytic);
        assert!(err < 1e-6, "{mode} t={t}: current methods differ by {err}");
    }
}

#[test]
fn vortex_current_direction_reverses_with_time_sign() {
    // Radial component of j is outward for t > 0 and inward for t < 0.
    let p = PhysicalParams::default();
    let t0 = p.time_scale();
    let grid = Grid2D::new(8.0 * p.waist, 256, 256).unwrap();
    for sign in [1.0, -1.0] {
        let t = sign * 0.5 * t0;
        let f = sample(Mode::LaguerreGauss { ell: 1 }, &p, &grid, t).unwrap();
        let j = current(&f, CurrentMethod::AnalyticGradient);
        let (x, y) = (1.0, 0.5);
        let (jx, jy) = j.sample_bilinear(x, y).unwrap();
        let radial = (x * jx + y * jy) / (x * x + y * y).sqrt();
        assert!(
            radial * sign > 0.0,
            "radial current {radial} should have the sign of t ({sign})"
        );
    }
}

// Shared by several test binaries; not every binary uses every helper.
#![allow(dead_code)]

use wavepacket_core::{ComplexField, Mode};

/// The mode family exercised throughout the suite.
pub fn all_modes() -> Vec<Mode> {
    vec![
        Mode::HermiteGauss { mu: 0, nu: 0 },
        Mode::HermiteGauss { mu: 1, nu: 0 },
        Mode::HermiteGauss { mu: 1, nu: 1 },
        Mode::HermiteGauss { mu: 2, nu: 1 },
        Mode::LaguerreGauss { ell: 0 },
        Mode::LaguerreGauss { ell: 1 },
        Mode::LaguerreGauss { ell: -1 },
        Mode::LaguerreGauss { ell: 2 },
    ]
}

/// Relative L2 distance between two sampled fields on the same grid.
pub fn rel_l2(a: &ComplexField, b: &ComplexField) -> f64 {
    let mut diff2 = 0.0;
    let mut ref2 = 0.0;
    for (x, y) in a.values.iter().zip(b.values.iter()) {
        diff2 += (x - y).norm_sqr();
        ref2 += y.norm_sqr();
    }
    (diff2 / ref2).sqrt()
}

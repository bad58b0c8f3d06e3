//! Special functions, stable combinatorics, and quadrature primitives.
//!
//! Everything here is a pure function; normalization factors elsewhere in the
//! crate are assembled in log space from [`log_factorial`] and exponentiated
//! once, so they stay finite for large mode orders.

use crate::grid::RealGridFunction;

/// Largest Hermite order accepted by [`hermite_poly`].
///
/// The three-term recurrence is well conditioned in this range; higher orders
/// are rejected loudly instead of silently losing accuracy.
pub const HERMITE_ORDER_CAP: u32 = 64;

/// Physicists' Hermite polynomial H_n(x), by the recurrence
/// `H_{n+1}(x) = 2x H_n(x) - 2n H_{n-1}(x)`.
///
/// Panics if `n` exceeds [`HERMITE_ORDER_CAP`].
pub fn hermite_poly(n: u32, x: f64) -> f64 {
    assert!(
        n <= HERMITE_ORDER_CAP,
        "Hermite order {n} exceeds cap {HERMITE_ORDER_CAP}"
    );
    if n == 0 {
        return 1.0;
    }
    let mut h_prev = 1.0;
    let mut h = 2.0 * x;
    for k in 1..n {
        let h_next = 2.0 * x * h - 2.0 * (k as f64) * h_prev;
        h_prev = h;
        h = h_next;
    }
    h
}

/// Derivative of the physicists' Hermite polynomial, `H'_n(x) = 2n H_{n-1}(x)`.
///
/// Panics if `n` exceeds [`HERMITE_ORDER_CAP`].
pub fn hermite_poly_derivative(n: u32, x: f64) -> f64 {
    assert!(
        n <= HERMITE_ORDER_CAP,
        "Hermite order {n} exceeds cap {HERMITE_ORDER_CAP}"
    );
    if n == 0 {
        0.0
    } else {
        2.0 * (n as f64) * hermite_poly(n - 1, x)
    }
}

/// Natural log of n!.
///
/// Up to 20! the factorial is accumulated exactly in integer arithmetic and
/// logged once; beyond that, log terms are summed on top of the exact ln(20!).
pub fn log_factorial(n: u32) -> f64 {
    if n <= 20 {
        let mut f: u64 = 1;
        for k in 2..=n as u64 {
            f *= k;
        }
        (f as f64).ln()
    } else {
        let mut acc = log_factorial(20);
        for k in 21..=n {
            acc += (k as f64).ln();
        }
        acc
    }
}

/// Trapezoid-rule integral of a sampled function over its grid window.
///
/// The grid excludes the duplicate right/top edge (see [`crate::grid::Grid2D`]),
/// so the composite trapezoid weights are all equal. For integrands that decay
/// to ~0 at the window edge the rule is spectrally accurate.
pub fn trapezoid_2d(f: &RealGridFunction) -> f64 {
    let cell = f.grid.dx() * f.grid.dy();
    f.values.sum() * cell
}

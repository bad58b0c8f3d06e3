//! Analytic free-particle wavepackets and their closed-form properties.
//!
//! The states are the non-separable Hermite-Gauss and Laguerre-Gauss (vortex)
//! solutions of the free 2D Schrödinger equation, plus the 1D Hermite packet.
//! They are the quantum counterparts of paraxial beam modes under the
//! dictionary z -> t, k -> m/hbar (see [`PhysicalParams::paraxial_wavenumber`]):
//! the waist `w0` plays the role of the beam waist and the Rayleigh time
//! `t0 = m w0^2 / (2 hbar)` that of the Rayleigh range. Around `t = 0` a packet
//! contracts to its minimum size and re-expands ("free focusing"); the spot
//! size is `w(t) = w0 sqrt(1 + t^2/t0^2)`.
//!
//! All evaluations are pure functions, safe to call concurrently.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::{hermite_poly, hermite_poly_derivative, log_factorial, HERMITE_ORDER_CAP};

/// Mass, action scale, and waist defining a packet family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalParams {
    pub mass: f64,
    pub hbar: f64,
    pub waist: f64,
}

impl PhysicalParams {
    pub fn new(mass: f64, hbar: f64, waist: f64) -> Result<Self> {
        for (name, v) in [("mass", mass), ("hbar", hbar), ("waist", waist)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} = {v}")));
            }
        }
        Ok(Self { mass, hbar, waist })
    }

    /// Rayleigh time `t0 = m w0^2 / (2 hbar)`: the time over which the packet
    /// width grows by sqrt(2).
    pub fn time_scale(&self) -> f64 {
        self.mass * self.waist * self.waist / (2.0 * self.hbar)
    }

    /// Wavenumber `k = m / hbar` of the paraxial beam whose transverse profile
    /// maps onto this packet under the replacement z -> t.
    ///
    /// Under that map the optical Rayleigh range `k w0^2 / 2` lands exactly on
    /// [`Self::time_scale`], so any paraxial solution with this `k` yields a
    /// free-particle solution.
    pub fn paraxial_wavenumber(&self) -> f64 {
        self.mass / self.hbar
    }

    /// Spot size `w(t) = w0 sqrt(1 + t^2/t0^2)`.
    pub fn spot_size(&self, t: f64) -> f64 {
        let tau = t / self.time_scale();
        self.waist * (1.0 + tau * tau).sqrt()
    }
}

impl Default for PhysicalParams {
    /// Natural units: `m = hbar = w0 = 1`, hence `t0 = 1/2`.
    fn default() -> Self {
        Self { mass: 1.0, hbar: 1.0, waist: 1.0 }
    }
}

/// Which packet to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// 2D Hermite-Gauss packet with Cartesian indices (mu, nu).
    HermiteGauss { mu: u32, nu: u32 },
    /// 2D Laguerre-Gauss vortex packet with topological charge `ell`
    /// (any sign, zero radial index).
    LaguerreGauss { ell: i32 },
    /// 1D Hermite packet of order n.
    HermiteGauss1D { n: u32 },
}

impl Mode {
    /// Total mode order: mu+nu, |ell|, or n.
    pub fn order(&self) -> u32 {
        match *self {
            Mode::HermiteGauss { mu, nu } => mu + nu,
            Mode::LaguerreGauss { ell } => ell.unsigned_abs(),
            Mode::HermiteGauss1D { n } => n,
        }
    }

    pub fn is_two_dimensional(&self) -> bool {
        !matches!(self, Mode::HermiteGauss1D { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let order = match *self {
            Mode::HermiteGauss { mu, nu } => mu.max(nu),
            _ => self.order(),
        };
        if order > HERMITE_ORDER_CAP {
            return Err(Error::ModeOrderTooLarge { order, cap: HERMITE_ORDER_CAP });
        }
        Ok(())
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Mode::HermiteGauss { mu, nu } => write!(f, "hg:{mu},{nu}"),
            Mode::LaguerreGauss { ell } => write!(f, "lg:{ell}"),
            Mode::HermiteGauss1D { n } => write!(f, "hg1d:{n}"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    /// Parses `hg:MU,NU`, `lg:ELL`, or `hg1d:N`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse mode '{s}'"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let mode = match kind {
            "hg" => {
                let (a, b) = rest.split_once(',').ok_or_else(bad)?;
                Mode::HermiteGauss {
                    mu: a.trim().parse().map_err(|_| bad())?,
                    nu: b.trim().parse().map_err(|_| bad())?,
                }
            }
            "lg" => Mode::LaguerreGauss { ell: rest.trim().parse().map_err(|_| bad())? },
            "hg1d" => Mode::HermiteGauss1D { n: rest.trim().parse().map_err(|_| bad())? },
            _ => return Err(bad()),
        };
        mode.validate()?;
        Ok(mode)
    }
}

/// Closed-form expectation values of a mode at one time.
///
/// `energy = p2 / (2 m)` always; `lz` is signed. First moments of position and
/// momentum vanish identically for every mode here: the packet breathes but
/// does not move.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport {
    pub time: f64,
    pub r2: f64,
    pub p2: f64,
    pub energy: f64,
    pub lz: f64,
    pub mean_x: f64,
    pub mean_y: f64,
    pub mean_px: f64,
    pub mean_py: f64,
}

/// Complex beam parameter `q(t) = 1 + i t/t0`.
#[inline]
fn q_factor(params: &PhysicalParams, t: f64) -> Complex64 {
    Complex64::new(1.0, t / params.time_scale())
}

/// `exp(-(x^2+y^2)/(w0^2 q))`: the complex Gaussian envelope carrying both
/// the decay and the quadratic (curvature) phase.
#[inline]
fn gauss_envelope(params: &PhysicalParams, q: Complex64, r2: f64) -> Complex64 {
    ((-r2 / (params.waist * params.waist)) * q.inv()).exp()
}

fn hg_norm(params: &PhysicalParams, mu: u32, nu: u32) -> f64 {
    let log_2_pow = ((mu + nu) as f64 - 1.0) * std::f64::consts::LN_2;
    let log = -0.5 * (log_2_pow + PI.ln() + log_factorial(mu) + log_factorial(nu));
    log.exp() / params.waist
}

/// Normalized 2D Hermite-Gauss packet.
///
/// The printed-beam form is multiplied by `1/sqrt(1 + t^2/t0^2)` so that the
/// L2 norm is conserved (checked against the spectral propagator); the Gouy
/// phase is `-(mu+nu+1) arctan(t/t0)`.
pub fn eval_hg(mu: u32, nu: u32, params: &PhysicalParams, x: f64, y: f64, t: f64) -> Complex64 {
    let q = q_factor(params, t);
    let w = params.spot_size(t);
    let amp = hg_norm(params, mu, nu) * params.waist / w;
    let s = std::f64::consts::SQRT_2 / w;
    let gouy = Complex64::from_polar(1.0, -((mu + nu + 1) as f64) * (t / params.time_scale()).atan());
    amp * gauss_envelope(params, q, x * x + y * y)
        * gouy
        * hermite_poly(mu, s * x)
        * hermite_poly(nu, s * y)
}

fn hg1d_norm(params: &PhysicalParams, n: u32) -> f64 {
    let log = 0.25 * (2.0 / PI).ln()
        - 0.5 * params.waist.ln()
        - 0.5 * (n as f64 * std::f64::consts::LN_2 + log_factorial(n));
    log.exp()
}

/// Normalized 1D Hermite packet (the x-factor of the 2D product form), with
/// the standard `1/sqrt(2^n n!)` prefactor and unit L2 norm at all times.
pub fn eval_hg_1d(n: u32, params: &PhysicalParams, x: f64, t: f64) -> Complex64 {
    let q = q_factor(params, t);
    let tau = t / params.time_scale();
    let w = params.spot_size(t);
    let amp = hg1d_norm(params, n) * (1.0 + tau * tau).powf(-0.25);
    let gouy = Complex64::from_polar(1.0, -(n as f64 + 0.5) * tau.atan());
    let envelope = ((-x * x / (params.waist * params.waist)) * q.inv()).exp();
    amp * envelope * gouy * hermite_poly(n, std::f64::consts::SQRT_2 * x / w)
}

fn lg_norm(ell_abs: u32) -> f64 {
    (0.5 * ((1 + ell_abs) as f64) * std::f64::consts::LN_2
        - 0.5 * (PI.ln() + log_factorial(ell_abs)))
    .exp()
}

/// Laguerre-Gauss vortex packet of charge `ell` (zero radial index).
///
/// For `ell >= 0` this is the `(x+iy)^ell` vortex; negative charges use the
/// conjugate vortex `(x-iy)^|ell|` with `|ell|!` in the normalization, so that
/// the angular momentum `<L_z> = ell*hbar` carries the sign of `ell`.
pub fn eval_lg(ell: i32, params: &PhysicalParams, x: f64, y: f64, t: f64) -> Complex64 {
    let q = q_factor(params, t);
    let l = ell.unsigned_abs();
    let vortex = if ell >= 0 {
        Complex64::new(x, y)
    } else {
        Complex64::new(x, -y)
    };
    let w0q_inv = (params.waist * q).inv();
    lg_norm(l) * gauss_envelope(params, q, x * x + y * y) * vortex.powu(l) * w0q_inv.powu(l + 1)
}

/// Evaluate a 2D mode at one space-time point.
///
/// Panics on 1D modes; use [`eval_hg_1d`] for those.
pub fn eval(mode: Mode, params: &PhysicalParams, x: f64, y: f64, t: f64) -> Complex64 {
    match mode {
        Mode::HermiteGauss { mu, nu } => eval_hg(mu, nu, params, x, y, t),
        Mode::LaguerreGauss { ell } => eval_lg(ell, params, x, y, t),
        Mode::HermiteGauss1D { .. } => panic!("eval requires a two-dimensional mode"),
    }
}

/// Closed-form spatial gradient (d/dx, d/dy) of a 2D mode.
///
/// Product rule over the Gaussian envelope and the Hermite or vortex factor;
/// feeds the probability current without any numerical differentiation.
pub fn eval_gradient(
    mode: Mode,
    params: &PhysicalParams,
    x: f64,
    y: f64,
    t: f64,
) -> (Complex64, Complex64) {
    let q = q_factor(params, t);
    let w0 = params.waist;
    // d/dx of the envelope contributes -2x/(w0^2 q) times the value.
    let env_x = Complex64::new(-2.0 * x / (w0 * w0), 0.0) * q.inv();
    let env_y = Complex64::new(-2.0 * y / (w0 * w0), 0.0) * q.inv();
    match mode {
        Mode::HermiteGauss { mu, nu } => {
            let w = params.spot_size(t);
            let s = std::f64::consts::SQRT_2 / w;
            let amp = hg_norm(params, mu, nu) * w0 / w;
            let gouy = Complex64::from_polar(
                1.0,
                -((mu + nu + 1) as f64) * (t / params.time_scale()).atan(),
            );
            let pref = amp * gauss_envelope(params, q, x * x + y * y) * gouy;
            let hx = hermite_poly(mu, s * x);
            let hy = hermite_poly(nu, s * y);
            let dhx = s * hermite_poly_derivative(mu, s * x);
            let dhy = s * hermite_poly_derivative(nu, s * y);
            (
                pref * (env_x * hx + dhx) * hy,
                pref * (env_y * hy + dhy) * hx,
            )
        }
        Mode::LaguerreGauss { ell } => {
            let l = ell.unsigned_abs();
            let vortex = if ell >= 0 {
                Complex64::new(x, y)
            } else {
                Complex64::new(x, -y)
            };
            // d/dx (x +- iy)^l = l (x +- iy)^(l-1); d/dy carries +-i l.
            let dv_y = if ell >= 0 {
                Complex64::new(0.0, l as f64)
            } else {
                Complex64::new(0.0, -(l as f64))
            };
            let vl = vortex.powu(l);
            let vlm1 = if l >= 1 { vortex.powu(l - 1) } else { Complex64::new(0.0, 0.0) };
            let w0q_inv = (w0 * q).inv();
            let pref = lg_norm(l) * gauss_envelope(params, q, x * x + y * y) * w0q_inv.powu(l + 1);
            (
                pref * (env_x * vl + (l as f64) * vlm1),
                pref * (env_y * vl + dv_y * vlm1),
            )
        }
        Mode::HermiteGauss1D { .. } => panic!("eval_gradient requires a two-dimensional mode"),
    }
}

/// Closed-form moments at time `t`.
///
/// For the vortex of charge `ell`:
/// `<r^2> = (1+|ell|)/2 w0^2 (1 + t^2/t0^2)`, `<p^2> = (1+|ell|) 2 hbar^2/w0^2`,
/// `<H> = p2/(2m)`, `<L_z> = ell*hbar`. Hermite-Gauss modes follow the same
/// formulas with `1+|ell|` replaced by `mu+nu+1` (order `n+1/2` halves them in
/// 1D) and carry no angular momentum.
pub fn closed_form_moments(mode: Mode, params: &PhysicalParams, t: f64) -> MomentReport {
    let tau = t / params.time_scale();
    let w0sq = params.waist * params.waist;
    let (scale, lz) = match mode {
        Mode::HermiteGauss { mu, nu } => ((mu + nu + 1) as f64, 0.0),
        Mode::LaguerreGauss { ell } => ((1 + ell.unsigned_abs()) as f64, ell as f64 * params.hbar),
        Mode::HermiteGauss1D { n } => (n as f64 + 0.5, 0.0),
    };
    let r2 = scale / 2.0 * w0sq * (1.0 + tau * tau);
    let p2 = scale * 2.0 * params.hbar * params.hbar / w0sq;
    MomentReport {
        time: t,
        r2,
        p2,
        energy: p2 / (2.0 * params.mass),
        lz,
        mean_x: 0.0,
        mean_y: 0.0,
        mean_px: 0.0,
        mean_py: 0.0,
    }
}

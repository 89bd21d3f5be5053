//! Finite-time extinction of trajectories of `−u'' = u^(−γ)`.
//!
//! Along a trajectory `E = ½u'² + F(u)` is constant and `u'' < 0`, so `u'`
//! only decreases. An ascending start either climbs forever (only possible
//! for γ > 1 with `E ≥ 0`, where `F < 0` leaves room for a positive
//! asymptotic slope) or turns at `u_max = F⁻¹(E)` and falls back. A
//! descending trajectory reaches `u = 0` in finite time. For 0 < γ ≤ 1, `F`
//! is unbounded above, so a turning point always exists and every
//! trajectory dies: there is no positive global solution.
//!
//! Times come from `dt = du / √(2(E − F(u)))`. Writing `u = u_top·(1 − s²)`
//! removes the square-root singularity at a turning point, and
//! `F(u_top) − F(u)` is evaluated with `expm1`/`ln_1p` to avoid cancellation
//! near `u_top`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{integrate, Dopri5, QuadConfig, StepControl};
use crate::ode::quadrature::time_of_value;
use crate::profile::{antiderivative, antiderivative_inverse, GammaParam, ProfileSpec, Regime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtinctionMethod {
    Quadrature,
    Integration,
}

/// Evidence that a trajectory hits `u = 0` in finite time.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtinctionCertificate {
    pub gamma: GammaParam,
    /// `(t₀, u₀, u'₀)`.
    pub initial: (f64, f64, f64),
    pub energy: f64,
    /// `(t*, u_max)` where `u' = 0`, when the start is not already descending.
    pub turning_point: Option<(f64, f64)>,
    pub extinction_time: f64,
    /// `u'` at extinction; `−∞` for γ ≥ 1.
    pub terminal_slope: f64,
    pub method: ExtinctionMethod,
}

/// An ascending trajectory that never turns: a shifted member of the
/// γ > 1 family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalBranchReport {
    pub gamma: GammaParam,
    pub energy: f64,
    pub spec: ProfileSpec,
    /// Time at which the matching profile leaves `u = 0`.
    pub profile_origin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExtinctionOutcome {
    Extinct(ExtinctionCertificate),
    Global(GlobalBranchReport),
}

impl ExtinctionOutcome {
    pub fn certificate(&self) -> Option<&ExtinctionCertificate> {
        match self {
            ExtinctionOutcome::Extinct(c) => Some(c),
            ExtinctionOutcome::Global(_) => None,
        }
    }
}

fn quad_cfg() -> QuadConfig {
    QuadConfig {
        abs_tol: 1e-12,
        rel_tol: 1e-13,
        max_subdivisions: 8000,
    }
}

/// `F(u_top) − F(u_top(1 − r))` for `r ∈ [0, 1]`, free of cancellation.
fn potential_drop(g: f64, u_top: f64, r: f64) -> f64 {
    let log_ratio = (-r).ln_1p();
    if g == 1.0 {
        -log_ratio
    } else {
        -u_top.powf(1.0 - g) * ((1.0 - g) * log_ratio).exp_m1() / (1.0 - g)
    }
}

/// Time to travel from `u_top·(1 − s_hi²)` up to `u_top` (or, equivalently,
/// back down), with `w = u'²` at `u_top`:
/// `∫₀^{s_hi} 2·u_top·s / √(w + 2·ΔF(s²)) ds`.
fn travel_time(g: f64, u_top: f64, w: f64, s_hi: f64) -> Result<f64> {
    let limit = if w == 0.0 {
        (2.0 * u_top.powf(1.0 + g)).sqrt()
    } else {
        0.0
    };
    let integrand = |s: f64| {
        if s == 0.0 {
            return limit;
        }
        let denom = (w + 2.0 * potential_drop(g, u_top, s * s)).sqrt();
        if denom.is_infinite() {
            0.0
        } else {
            2.0 * u_top * s / denom
        }
    };
    Ok(integrate(integrand, 0.0, s_hi, &quad_cfg())?.value)
}

/// Classifies the forward evolution from `(t₀, u₀, u'₀)` and, when it dies,
/// computes the extinction time by quadrature.
pub fn extinction_detect(
    gamma: GammaParam,
    t0: f64,
    u0: f64,
    du0: f64,
) -> Result<ExtinctionOutcome> {
    if !(u0 > 0.0) || !u0.is_finite() || !du0.is_finite() || !t0.is_finite() {
        return Err(Error::Domain(format!(
            "need finite t0, u0 > 0 and u'0 (got {t0}, {u0}, {du0})"
        )));
    }
    let g = gamma.value();
    let energy = 0.5 * du0 * du0 + antiderivative(gamma, u0)?;

    if du0 > 0.0 {
        let u_max = match antiderivative_inverse(gamma, energy) {
            Some(u) => u.max(u0),
            None => {
                // Only reachable for γ > 1 with E ≥ 0.
                debug_assert_eq!(gamma.regime(), Regime::ExistenceGammaGt1);
                let spec = ProfileSpec::from_energy(gamma, energy)?;
                let origin = t0 - time_of_value(&spec, u0, &QuadConfig::default())?;
                return Ok(ExtinctionOutcome::Global(GlobalBranchReport {
                    gamma,
                    energy,
                    spec,
                    profile_origin: origin,
                }));
            }
        };
        let s_hi = (1.0 - u0 / u_max).max(0.0).sqrt();
        let t_turn = t0 + travel_time(g, u_max, 0.0, s_hi)?;
        let fall = travel_time(g, u_max, 0.0, 1.0)?;
        return Ok(ExtinctionOutcome::Extinct(ExtinctionCertificate {
            gamma,
            initial: (t0, u0, du0),
            energy,
            turning_point: Some((t_turn, u_max)),
            extinction_time: t_turn + fall,
            terminal_slope: terminal_slope(g, u_max, 0.0),
            method: ExtinctionMethod::Quadrature,
        }));
    }

    let w = du0 * du0;
    let fall = travel_time(g, u0, w, 1.0)?;
    Ok(ExtinctionOutcome::Extinct(ExtinctionCertificate {
        gamma,
        initial: (t0, u0, du0),
        energy,
        turning_point: (du0 == 0.0).then_some((t0, u0)),
        extinction_time: t0 + fall,
        terminal_slope: terminal_slope(g, u0, w),
        method: ExtinctionMethod::Quadrature,
    }))
}

fn terminal_slope(g: f64, u_top: f64, w: f64) -> f64 {
    if g >= 1.0 {
        f64::NEG_INFINITY
    } else {
        -(w + 2.0 * u_top.powf(1.0 - g) / (1.0 - g)).sqrt()
    }
}

/// Independent route: integrate the ODE until `u` drops below
/// `1e-9·max(u₀, u_max)` and add the remaining sliver at the current speed
/// (an upper bound on the leftover time, since `|u'|` keeps growing).
/// Returns `None` if the trajectory is still climbing at `t_limit`.
pub fn extinction_integrate(
    gamma: GammaParam,
    t0: f64,
    u0: f64,
    du0: f64,
    t_limit: f64,
) -> Result<Option<ExtinctionCertificate>> {
    if !(u0 > 0.0) {
        return Err(Error::Domain(format!("u0 must be positive, got {u0}")));
    }
    let g = gamma.value();
    let energy = 0.5 * du0 * du0 + antiderivative(gamma, u0)?;
    let top = antiderivative_inverse(gamma, energy).unwrap_or(u0).max(u0);
    let u_stop = 1e-9 * top;
    let solver = Dopri5::new(StepControl {
        rel_tol: 1e-12,
        abs_tol: 1e-14 * top,
        h_init: 1e-4 * (top / du0.abs().max(1e-3)).min(1.0),
        ..StepControl::default()
    });
    let rhs = move |_t: f64, y: &[f64; 2]| [y[1], -y[0].powf(-g)];
    let mut turn: Option<(f64, f64)> = (du0 == 0.0).then_some((t0, u0));
    let mut t = t0;
    let mut y = [u0, du0];
    let mut h = solver.control.h_init;
    while t < t_limit {
        // Advance in chunks so the turning point can be located by sign change.
        let chunk_end = t_limit.min(t + (t_limit - t0) / 64.0);
        let prev_slope = y[1];
        let adv = solver.advance(&rhs, t, y, chunk_end, h, |s| s[0] > 0.0, |s| s[0] <= u_stop)?;
        if turn.is_none() && prev_slope > 0.0 && adv.y[1] <= 0.0 {
            turn = Some(locate_turn(&solver, &rhs, t, y, adv.t)?);
        }
        t = adv.t;
        y = adv.y;
        h = adv.h_next;
        if adv.stopped {
            let tail = y[0] / y[1].abs();
            return Ok(Some(ExtinctionCertificate {
                gamma,
                initial: (t0, u0, du0),
                energy,
                turning_point: turn,
                extinction_time: t + tail,
                terminal_slope: if du0 > 0.0 {
                    terminal_slope(g, top, 0.0)
                } else {
                    terminal_slope(g, u0, du0 * du0)
                },
                method: ExtinctionMethod::Integration,
            }));
        }
    }
    Ok(None)
}

fn locate_turn<F>(solver: &Dopri5, rhs: &F, t_a: f64, y_a: [f64; 2], t_b: f64) -> Result<(f64, f64)>
where
    F: Fn(f64, &[f64; 2]) -> [f64; 2],
{
    let (mut lo, mut hi) = (t_a, t_b);
    let mut best = y_a;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let adv = solver.advance(
            rhs,
            t_a,
            y_a,
            mid,
            (mid - t_a) / 8.0,
            |s| s[0] > 0.0,
            |_| false,
        )?;
        if adv.y[1] > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        best = adv.y;
        if hi - lo <= 1e-14 * hi.abs().max(1.0) {
            break;
        }
    }
    Ok((0.5 * (lo + hi), best[0]))
}

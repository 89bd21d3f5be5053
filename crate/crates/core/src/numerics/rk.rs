//! Dormand-Prince 5(4) explicit Runge-Kutta with local error control.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Initial trial step.
    pub h_init: f64,
    /// Steps below this size are treated as a breakdown.
    pub h_min: f64,
    pub safety: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            h_init: 1e-6,
            h_min: 1e-300,
            safety: 0.9,
            max_steps: 5_000_000,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b* (fifth minus embedded fourth order weights)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Outcome of [`Dopri5::advance`].
#[derive(Debug, Clone, Copy)]
pub struct Advance<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    /// Step size to try next.
    pub h_next: f64,
    /// `true` when the stop predicate fired before `t_end`.
    pub stopped: bool,
    pub accepted: usize,
    pub rejected: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Dopri5 {
    pub control: StepControl,
}

fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])], h: f64) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

impl Dopri5 {
    pub fn new(control: StepControl) -> Self {
        Self { control }
    }

    /// One trial step: returns the fifth-order solution and the scaled
    /// error norm (accept when ≤ 1).
    pub fn trial_step<const N: usize, F>(
        &self,
        f: &F,
        t: f64,
        y: &[f64; N],
        h: f64,
    ) -> ([f64; N], f64)
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let k1 = f(t, y);
        let k2 = f(t + C2 * h, &axpy(y, &[(A21, &k1)], h));
        let k3 = f(t + C3 * h, &axpy(y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = f(
            t + C4 * h,
            &axpy(y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h),
        );
        let k5 = f(
            t + C5 * h,
            &axpy(y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
        );
        let k6 = f(
            t + h,
            &axpy(
                y,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                h,
            ),
        );
        let y_new = axpy(
            y,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            h,
        );
        let k7 = f(t + h, &y_new);

        let mut sum = 0.0;
        for i in 0..N {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale =
                self.control.abs_tol + self.control.rel_tol * y[i].abs().max(y_new[i].abs());
            sum += (e / scale).powi(2);
        }
        let err = (sum / N as f64).sqrt();
        (y_new, if err.is_finite() { err } else { f64::INFINITY })
    }

    /// Integrates from `(t, y)` to exactly `t_end`, or until `stop(y)` holds
    /// for an accepted state. States for which `admissible` is false are
    /// rejected as if the error test had failed.
    #[allow(clippy::too_many_arguments)]
    pub fn advance<const N: usize, F, S, P>(
        &self,
        f: &F,
        t: f64,
        y: [f64; N],
        t_end: f64,
        h: f64,
        admissible: P,
        mut stop: S,
    ) -> Result<Advance<N>>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
        P: Fn(&[f64; N]) -> bool,
        S: FnMut(&[f64; N]) -> bool,
    {
        let ctl = &self.control;
        let mut t = t;
        let mut y = y;
        let mut h = h.abs().max(ctl.h_min);
        let (mut accepted, mut rejected) = (0usize, 0usize);
        while t < t_end {
            if accepted + rejected >= ctl.max_steps {
                return Err(Error::Step(format!("step budget exhausted at t = {t:e}")));
            }
            let last = t + h >= t_end;
            let h_try = if last { t_end - t } else { h };
            let (y_new, err) = self.trial_step(f, t, &y, h_try);
            let ok = err <= 1.0 && y_new.iter().all(|v| v.is_finite()) && admissible(&y_new);
            let factor = if err == 0.0 {
                5.0
            } else if err.is_finite() {
                (ctl.safety * err.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                0.25
            };
            if ok {
                t = if last { t_end } else { t + h_try };
                y = y_new;
                accepted += 1;
                if !last {
                    h = h_try * factor;
                }
                if stop(&y) {
                    return Ok(Advance {
                        t,
                        y,
                        h_next: h,
                        stopped: true,
                        accepted,
                        rejected,
                    });
                }
            } else {
                rejected += 1;
                h = h_try * factor.min(if admissible(&y_new) { 1.0 } else { 0.25 });
                if h < ctl.h_min.max(f64::EPSILON * t.abs()) {
                    return Err(Error::Step(format!(
                        "step size underflow (h = {h:e}) at t = {t:e}"
                    )));
                }
            }
        }
        Ok(Advance {
            t,
            y,
            h_next: h,
            stopped: false,
            accepted,
            rejected,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator(_t: f64, y: &[f64; 2]) -> [f64; 2] {
        [y[1], -y[0]]
    }

    #[test]
    fn harmonic_oscillator_tracks_cosine() {
        let solver = Dopri5::new(StepControl {
            rel_tol: 1e-11,
            abs_tol: 1e-13,
            ..Default::default()
        });
        let out = solver
            .advance(&oscillator, 0.0, [1.0, 0.0], 10.0, 0.1, |_| true, |_| false)
            .unwrap();
        assert_eq!(out.t, 10.0);
        assert!((out.y[0] - 10f64.cos()).abs() < 1e-9);
        assert!((out.y[1] + 10f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn fixed_step_order_is_five() {
        // Local error of one step on y' = y shrinks like h^6.
        let solver = Dopri5::default();
        let f = |_t: f64, y: &[f64; 1]| [y[0]];
        let err = |h: f64| (solver.trial_step(&f, 0.0, &[1.0], h).0[0] - h.exp()).abs();
        let ratio = err(0.1) / err(0.05);
        let order = ratio.log2();
        assert!((order - 6.0).abs() < 0.3, "local order {order}");
    }

    #[test]
    fn stop_predicate_halts_integration() {
        let solver = Dopri5::default();
        let f = |_t: f64, _y: &[f64; 1]| [-1.0];
        let out = solver
            .advance(&f, 0.0, [1.0], 10.0, 0.01, |y| y[0] > 0.0, |y| y[0] < 0.5)
            .unwrap();
        assert!(out.stopped);
        assert!(out.y[0] < 0.5 && out.y[0] > 0.0);
    }
}

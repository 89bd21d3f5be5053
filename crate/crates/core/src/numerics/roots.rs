//! Bracketed scalar root-finding (Brent's method: bisection safeguarding
//! secant and inverse-quadratic steps).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct RootConfig {
    /// Relative tolerance on the abscissa.
    pub x_rel_tol: f64,
    /// Absolute tolerance on the abscissa.
    pub x_abs_tol: f64,
    pub max_iterations: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self {
            x_rel_tol: 4.0 * f64::EPSILON,
            x_abs_tol: 0.0,
            max_iterations: 200,
        }
    }
}

/// Finds a root of `f` in `[a, b]`; `f(a)` and `f(b)` must have opposite
/// signs (or one of them vanish).
pub fn solve_bracketed<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    a: f64,
    b: f64,
    cfg: &RootConfig,
) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::numerics(
            format!("root not bracketed on [{a:e}, {b:e}]"),
            fa.abs().min(fb.abs()),
        ));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..cfg.max_iterations {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * cfg.x_rel_tol * b.abs() + 0.5 * cfg.x_abs_tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::numerics(
        "bracketed root-finder hit its iteration cap",
        (c - b).abs(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cube_root() {
        let r = solve_bracketed(|x| Ok(x * x * x - 2.0), 0.0, 2.0, &RootConfig::default()).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_unbracketed_interval() {
        let e = solve_bracketed(|x| Ok(x * x + 1.0), -1.0, 1.0, &RootConfig::default());
        assert!(matches!(e, Err(Error::Numerics { .. })));
    }

    #[test]
    fn exact_endpoint_root() {
        let r = solve_bracketed(|x| Ok(x - 1.0), 1.0, 3.0, &RootConfig::default()).unwrap();
        assert_eq!(r, 1.0);
    }

    #[test]
    fn tiny_scale_root_keeps_relative_accuracy() {
        let target = 3.7e-12;
        let r = solve_bracketed(|x| Ok(x - target), 0.0, 1.0, &RootConfig::default()).unwrap();
        assert!((r - target).abs() <= 1e-26);
    }
}

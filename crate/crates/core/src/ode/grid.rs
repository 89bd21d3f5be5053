use crate::error::{Error, Result};

/// Smallest positive node relative to the end of the geometric segment.
pub const GEOMETRIC_START: f64 = 1e-6;

/// Output grid for a profile on `[0, t_max]` with `n` nodes in total.
///
/// Node 0 is `t = 0`. The remaining `n − 1` nodes are split evenly between a
/// geometric segment on `[10⁻⁶·t_s, t_s]`, `t_s = min(1, t_max)`, which
/// resolves the `t^(2/(γ+1))` boundary layer, and a uniform segment on
/// `(1, t_max]`. With `t_max ≤ 1` every node is geometric.
pub fn profile_grid(t_max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "a profile needs n >= 2 nodes, got {n}"
        )));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Domain(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    let positive = n - 1;
    let switch = t_max.min(1.0);
    let (n_geo, n_uni) = if t_max <= 1.0 {
        (positive, 0)
    } else {
        let uni = positive.div_ceil(2);
        (positive - uni, uni)
    };
    let mut grid = Vec::with_capacity(n);
    grid.push(0.0);
    if n_geo == 1 {
        grid.push(switch);
    } else if n_geo > 1 {
        let lo = GEOMETRIC_START * switch;
        let ratio = (switch / lo).ln() / (n_geo - 1) as f64;
        for k in 0..n_geo {
            grid.push(if k + 1 == n_geo {
                switch
            } else {
                lo * (ratio * k as f64).exp()
            });
        }
    }
    let step = (t_max - 1.0) / n_uni.max(1) as f64;
    for k in 1..=n_uni {
        grid.push(if k == n_uni {
            t_max
        } else {
            1.0 + step * k as f64
        });
    }
    Ok(grid)
}

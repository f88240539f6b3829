//! Value-only minimization oracle shared by unit tests. Kept independent of
//! the derivative-based search paths it is used to check: dense grid, then
//! golden-section narrowing, then a single parabolic fit through the final
//! triple (which locates the vertex far below the value-noise plateau).

use crate::curve::{self, SpiralSign};

pub(crate) fn golden_parabolic_min(
    f: impl Fn(f64) -> f64,
    lo0: f64,
    hi0: f64,
    grid: usize,
) -> f64 {
    let mut best_i = 0usize;
    let mut best = f64::INFINITY;
    for i in 0..=grid {
        let t = lo0 + (hi0 - lo0) * i as f64 / grid as f64;
        let g = f(t);
        if g < best {
            best = g;
            best_i = i;
        }
    }
    let step = (hi0 - lo0) / grid as f64;
    let mut lo = lo0 + step * best_i.saturating_sub(1) as f64;
    let mut hi = (lo0 + step * (best_i + 1) as f64).min(hi0);
    let phi = 0.5 * (3.0 - 5f64.sqrt());
    let mut x1 = lo + phi * (hi - lo);
    let mut x2 = hi - phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > 1e-5 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = lo + phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = hi - phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    let (fa, fb, fc) = (f(lo), f(mid), f(hi));
    let denom = fa - 2.0 * fb + fc;
    if denom.abs() < 1e-300 {
        return mid;
    }
    mid + 0.25 * (fa - fc) / denom * (hi - lo)
}

/// Global nearest-parameter on a spiral branch by the value-only route.
pub(crate) fn oracle_min_param(sign: SpiralSign, x: &[f64], t_max: f64) -> f64 {
    golden_parabolic_min(|t| curve::sq_dist_to_branch(sign, x, t), 0.0, t_max, 16000)
}

/// Same search, but evaluating the squared distance through its
/// cancellation-free closed form (sum of three squares) so that the vertex
/// fit stays accurate even at tiny separations. Only valid when the query
/// point is the shadow `a(t)`.
pub(crate) fn oracle_sigma_from_shadow(sign: SpiralSign, t: f64) -> f64 {
    let sg = sign.factor();
    let sq = move |x: f64| {
        let u = (-x).exp();
        let r = 1.0 + sg * u;
        let dt = x - t;
        let c = dt.cos();
        let s = dt.sin();
        let gap = -(-t / 2.0).exp() * (-dt / 2.0).exp_m1();
        (r - c) * (r - c) + s * s + gap * gap
    };
    let lo = t;
    let hi = t - 2.0 * (-(-t / 2.0).exp()).ln_1p();
    golden_parabolic_min(sq, lo, hi, 4000)
}

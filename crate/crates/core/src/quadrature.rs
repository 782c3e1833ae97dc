//! Adaptive Simpson quadrature.
//!
//! The densities in this crate are smooth on the intervals they are integrated
//! over once the caller splits at known peaks or kinks, so a plain recursive
//! Simpson rule with Richardson correction is sufficient. Integrable endpoint
//! singularities (the log peak of the direction-known mobility density) are
//! handled by letting panels that reach the depth limit draw on a small fixed
//! share of the root tolerance instead of their halved one.

use thiserror::Error;

/// Relative tolerance used for every density integral in the crate.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

const MAX_DEPTH: u32 = 48;

/// Share of the root tolerance a depth-limited panel may spend.
const DEPTH_LIMIT_SHARE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("adaptive Simpson did not converge on [{lo}, {hi}] (depth limit {depth})")]
    NonConvergence { lo: f64, hi: f64, depth: u32 },
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error("invalid integration interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64, QuadratureError> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(QuadratureError::NonFinite { x })
    }
}

fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    p: Panel,
    tol: f64,
    root_tol: f64,
    depth: u32,
) -> Result<f64, QuadratureError> {
    let m = 0.5 * (p.a + p.b);
    let lm = 0.5 * (p.a + m);
    let rm = 0.5 * (m + p.b);
    let flm = eval(f, lm)?;
    let frm = eval(f, rm)?;
    let h = p.b - p.a;
    let left = h / 12.0 * (p.fa + 4.0 * flm + p.fm);
    let right = h / 12.0 * (p.fm + 4.0 * frm + p.fb);
    let delta = left + right - p.whole;
    // Depth guard before the tolerance test so a one-sided coarse agreement
    // at depth 0 cannot hide a narrow feature.
    if depth >= 4 && delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH || m <= p.a || m >= p.b {
        let floor = (DEPTH_LIMIT_SHARE * root_tol).max(f64::EPSILON * (left + right).abs());
        if delta.abs() <= 15.0 * floor {
            return Ok(left + right + delta / 15.0);
        }
        return Err(QuadratureError::NonConvergence {
            lo: p.a,
            hi: p.b,
            depth: MAX_DEPTH,
        });
    }
    let l = recurse(
        f,
        Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
        },
        0.5 * tol,
        root_tol,
        depth + 1,
    )?;
    let r = recurse(
        f,
        Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
        },
        0.5 * tol,
        root_tol,
        depth + 1,
    )?;
    Ok(l + r)
}

/// Integrates `f` over `[lo, hi]` to an absolute tolerance `abs_tol`.
pub fn simpson_abs<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
) -> Result<f64, QuadratureError> {
    if !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(QuadratureError::InvalidInterval { lo, hi });
    }
    if hi == lo {
        return Ok(0.0);
    }
    let fa = eval(&f, lo)?;
    let fb = eval(&f, hi)?;
    let m = 0.5 * (lo + hi);
    let fm = eval(&f, m)?;
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(
        &f,
        Panel {
            a: lo,
            b: hi,
            fa,
            fm,
            fb,
            whole,
        },
        abs_tol,
        abs_tol,
        0,
    )
}

/// Integrates `f` over the panels delimited by `breaks` (sorted ascending) to
/// a tolerance relative to a coarse estimate of the total.
///
/// Callers put breakpoints at peaks and kinks of the integrand.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    rel_tol: f64,
) -> Result<f64, QuadratureError> {
    if breaks.len() < 2 {
        return Ok(0.0);
    }
    for w in breaks.windows(2) {
        if !(w[0].is_finite() && w[1].is_finite()) || w[1] < w[0] {
            return Err(QuadratureError::InvalidInterval { lo: w[0], hi: w[1] });
        }
    }
    // Coarse 64-point-per-panel estimate for scaling the tolerance.
    let mut scale = 0.0;
    for w in breaks.windows(2) {
        let n = 64;
        let h = (w[1] - w[0]) / n as f64;
        for k in 0..=n {
            let x = w[0] + h * k as f64;
            scale += eval(&f, x)?.abs() * h;
        }
    }
    let abs_tol = rel_tol * scale.max(f64::MIN_POSITIVE);
    let total_width = breaks[breaks.len() - 1] - breaks[0];
    let mut sum = 0.0;
    for w in breaks.windows(2) {
        let share = if total_width > 0.0 {
            (w[1] - w[0]) / total_width
        } else {
            1.0
        };
        sum += simpson_abs(&f, w[0], w[1], abs_tol * share.max(1e-6))?;
    }
    Ok(sum)
}

/// Sorts, clips to `[lo, hi]` and deduplicates candidate breakpoints.
pub fn breakpoints(lo: f64, hi: f64, interior: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = std::iter::once(lo)
        .chain(
            interior
                .into_iter()
                .filter(|x| x.is_finite() && *x > lo && *x < hi),
        )
        .chain(std::iter::once(hi))
        .collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v.dedup();
    v
}

//! Adaptive Simpson quadrature.
//!
//! Classic bisection refinement with the Richardson error estimate
//! `|S(a,m)+S(m,b) - S(a,b)| / 15`. Subdivision concentrates nodes wherever
//! the integrand varies fastest, which for the wave-function densities used
//! here means near the origin and around the density peak.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("adaptive quadrature did not reach the requested tolerance (depth cap {depth} on [{a}, {b}])")]
    NonConvergence { a: f64, b: f64, depth: u32 },
}

const MAX_DEPTH: u32 = 60;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Result<f64, QuadError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let err = left + right - whole;
    if err.abs() <= 15.0 * eps {
        return Ok(left + right + err / 15.0);
    }
    if depth == 0 {
        return Err(QuadError::NonConvergence {
            a,
            b,
            depth: MAX_DEPTH,
        });
    }
    let l = refine(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)?;
    let r = refine(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)?;
    Ok(l + r)
}

fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    eps: f64,
    depth: u32,
) -> Result<f64, QuadError> {
    assert!(a < b, "integration bounds must be ordered");
    assert!(eps > 0.0, "tolerance must be positive");
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, b - a);
    refine(f, a, b, fa, fm, fb, whole, eps, depth)
}

/// Integrate `f` over `[a, b]` to absolute tolerance `eps`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    eps: f64,
) -> Result<f64, QuadError> {
    integrate(f, a, b, eps, MAX_DEPTH)
}

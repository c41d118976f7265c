//! Gamma-function evaluation for the normalization constants.
//!
//! Lanczos approximation with the g = 10.900511 coefficient set from Pugh,
//! "An Analysis of the Lanczos Gamma Approximation" (2004), p. 116 — the same
//! set used by `statrs`. Relative accuracy is a few ulp (< 1e-13) across the
//! range needed here; the callers restrict arguments to `(0, 171]` where the
//! result fits in an `f64`.

use std::f64::consts::{E, PI};

/// `2 * sqrt(e / pi)`
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;

/// `ln(2 * sqrt(e / pi))`
const LN_TWO_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_2;

/// Lanczos shift parameter.
const GAMMA_R: f64 = 10.900511;

/// Lanczos partial-fraction coefficients.
const GAMMA_DK: [f64; 11] = [
    2.485_740_891_387_535_5e-5,
    1.051_423_785_817_219_7,
    -3.456_870_972_220_162_5,
    4.512_277_094_668_948,
    -2.982_852_253_235_766_4,
    1.056_397_115_771_267,
    -1.954_287_731_916_458_7e-1,
    1.709_705_434_044_412e-2,
    -5.719_261_174_043_057e-4,
    4.633_994_733_599_057e-6,
    -2.719_949_084_886_077_2e-9,
];

fn lanczos_series(x: f64) -> f64 {
    let mut s = GAMMA_DK[0];
    for (i, d) in GAMMA_DK.iter().enumerate().skip(1) {
        s += d / (x + i as f64 - 1.0);
    }
    s
}

/// Gamma function.
///
/// Arguments below 0.5 go through the reflection formula; non-positive
/// integers return NaN/infinity as the poles dictate. Above 150 the direct
/// Lanczos product would overflow in an intermediate power even though the
/// result still fits, so that range is evaluated as `exp(ln_gamma)`.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        let s = {
            let mut acc = GAMMA_DK[0];
            for (i, d) in GAMMA_DK.iter().enumerate().skip(1) {
                acc += d / (i as f64 - x);
            }
            acc
        };
        PI / ((PI * x).sin() * s * TWO_SQRT_E_OVER_PI * ((0.5 - x + GAMMA_R) / E).powf(0.5 - x))
    } else if x > 150.0 {
        ln_gamma(x).exp()
    } else {
        lanczos_series(x) * TWO_SQRT_E_OVER_PI * ((x - 0.5 + GAMMA_R) / E).powf(x - 0.5)
    }
}

/// Natural log of the gamma function for `x > 0`.
///
/// Stays finite far beyond where `gamma` itself overflows, so factorial
/// ratios can be formed in log space.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        let s = {
            let mut acc = GAMMA_DK[0];
            for (i, d) in GAMMA_DK.iter().enumerate().skip(1) {
                acc += d / (i as f64 - x);
            }
            acc
        };
        PI.ln()
            - (PI * x).sin().ln()
            - s.ln()
            - LN_TWO_SQRT_E_OVER_PI
            - (0.5 - x) * ((0.5 - x + GAMMA_R) / E).ln()
    } else {
        lanczos_series(x).ln() + LN_TWO_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + GAMMA_R) / E).ln()
    }
}

/// `ln(n!)` via `ln_gamma`.
pub fn ln_factorial(n: u32) -> f64 {
    ln_gamma(f64::from(n) + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_small_integers_and_halves() {
        assert_relative_eq!(gamma(1.0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(2.0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(0.5), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(1.5), 0.5 * PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(
            gamma(13.534949106664307),
            // cross-checked against an independent lgamma evaluation
            1.871066387632391e9,
            max_relative = 1e-12
        );
    }

    #[test]
    fn gamma_matches_factorials_up_to_overflow_edge() {
        // Exact integer factorials, accumulated in f64.
        let mut fact = 1.0_f64;
        for n in 1..=170_u32 {
            fact *= f64::from(n);
            let g = gamma(f64::from(n) + 1.0);
            let rel = ((g - fact) / fact).abs();
            assert!(rel < 1e-12, "gamma({}) rel err {:.2e}", n + 1, rel);
        }
        assert!(gamma(171.0).is_finite());
    }

    #[test]
    fn ln_gamma_consistent_with_gamma() {
        for &x in &[0.1, 0.7, 1.0, 2.5, 13.53, 50.0, 120.0, 171.0] {
            assert_relative_eq!(ln_gamma(x), gamma(x).ln(), max_relative = 1e-12);
        }
    }

    #[test]
    fn ln_factorial_matches_log_sum() {
        assert!(ln_factorial(0).abs() < 1e-14);
        assert!(ln_factorial(1).abs() < 1e-14);
        let mut acc = 0.0_f64;
        for n in 1..=400_u32 {
            acc += f64::from(n).ln();
            if n < 2 {
                continue;
            }
            let rel = ((ln_factorial(n) - acc) / acc).abs();
            assert!(rel < 1e-13, "ln({}!) rel err {:.2e}", n, rel);
        }
    }

    #[test]
    fn reflection_branch() {
        // gamma(x) gamma(1-x) = pi / sin(pi x)
        for &x in &[0.1, 0.25, 0.49] {
            let lhs = gamma(x) * gamma(1.0 - x);
            let rhs = PI / (PI * x).sin();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }
}

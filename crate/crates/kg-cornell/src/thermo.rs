//! Partition function and thermal quantities on the linear-in-`n` spectrum.
//!
//! Levels enter through the excitation `delta(n) = sqrt(A + B n) - sqrt(A)`
//! measured from the `n = 0` positive-branch level, so the partition function
//!
//! ```text
//! Z(mu) = sum_n exp(-delta(n)/mu),      mu = k_B T / M,
//! ```
//!
//! starts exactly at 1. Two evaluations are provided:
//!
//! * [`partition_direct`] — truncated sum whose cutoff is chosen by the exact
//!   integral tail bound `(2/B)(mu T + mu^2) exp(-(T - sqrt(A))/mu)` with
//!   `T = sqrt(A + B N)` (substituting `t = sqrt(A + B x)` makes the tail
//!   integral elementary).
//! * [`partition_em`] — Euler-Maclaurin closed form through the second
//!   Bernoulli correction. With `f(x) = exp(-delta(x)/mu)` the four
//!   ingredients, re-derived and checked against finite differences in the
//!   tests, are `f(0) = 1`, `int_0^inf f = (2/B)(sqrt(A) mu + mu^2)`,
//!   `f'(0) = -B/(2 sqrt(A) mu)`, and
//!   `f'''(0) = -3B^3/(8 A^{5/2} mu) - 3B^3/(8 A^2 mu^2) - B^3/(8 A^{3/2} mu^3)`.
//!
//! The closed form collects into a Laurent polynomial in `mu` (powers -3..2),
//! which makes the temperature derivatives behind U, S, and C_v exact. It is
//! asymptotic: it tracks the direct sum at the per-mill level for `mu >~ 2`
//! and drifts percent-level below; as `mu -> 0` it diverges by design.

use crate::spectral::LinearSpectrum;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThermoError {
    #[error("temperature mu = {0} must be positive")]
    NonPositiveTemperature(f64),
    #[error("direct sum exceeded the truncation cap N = {cap}")]
    TruncationOverflow { cap: u64 },
    #[error("partition function is not positive (Z = {z:.6e} at mu = {mu}); outside the closed form's validity")]
    NonPositivePartition { mu: f64, z: f64 },
}

/// Bernoulli number `B_2`.
pub const BERNOULLI_B2: f64 = 1.0 / 6.0;
/// Bernoulli number `B_4`.
pub const BERNOULLI_B4: f64 = -1.0 / 30.0;
/// The Euler-Maclaurin correction series is truncated at `i = 2`.
pub const EULER_MCLAURIN_ORDER: u32 = 2;

/// Default cap on the direct-sum length.
pub const DIRECT_SUM_CAP: u64 = 100_000_000;

/// Which partition-function evaluation backs a thermodynamic point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    EulerMcLaurin,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::EulerMcLaurin => "em",
        }
    }
}

/// Dimensionless thermal state at one temperature.
///
/// `f_bar = F/M`, `u_bar = U/M`, `s_bar = S/k_B`, `cv_bar = C_v/k_B`, all
/// derived from `ln Z`:
/// `F = -mu ln Z`, `U = mu^2 (ln Z)'`, `S = ln Z + mu (ln Z)'`,
/// `C_v = 2 mu (ln Z)' + mu^2 (ln Z)''`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    pub mu: f64,
    pub z: f64,
    pub f_bar: f64,
    pub u_bar: f64,
    pub s_bar: f64,
    pub cv_bar: f64,
}

/// Truncated direct sum with the analytic integral tail bound; the sum stops
/// once the remainder is provably below `tol` times the partial sum.
pub fn partition_direct(spec: &LinearSpectrum, mu: f64, tol: f64) -> Result<f64, ThermoError> {
    partition_direct_capped(spec, mu, tol, DIRECT_SUM_CAP)
}

/// [`partition_direct`] with an explicit truncation cap.
pub fn partition_direct_capped(
    spec: &LinearSpectrum,
    mu: f64,
    tol: f64,
    cap: u64,
) -> Result<f64, ThermoError> {
    let (z, _, _) = direct_sums(spec, mu, tol, cap)?;
    Ok(z)
}

/// Direct sums `(Z, S1, S2)` with `S1 = sum t_n delta_n`,
/// `S2 = sum t_n delta_n^2` — the term-wise differentiated series behind the
/// exact temperature derivatives of `ln Z`.
///
/// All three remainders are controlled by integral tail bounds obtained from
/// the same `t = sqrt(A + B x)` substitution (the `delta`-weighted tails are
/// incomplete-gamma-type and elementary as well).
fn direct_sums(
    spec: &LinearSpectrum,
    mu: f64,
    tol: f64,
    cap: u64,
) -> Result<(f64, f64, f64), ThermoError> {
    if mu <= 0.0 {
        return Err(ThermoError::NonPositiveTemperature(mu));
    }
    assert!(tol > 0.0, "tolerance must be positive");
    let sa = spec.offset.sqrt();
    let b = spec.slope;
    let mut z = 0.0_f64;
    let mut s1 = 0.0_f64;
    let mut s2 = 0.0_f64;
    let mut n: u64 = 0;
    loop {
        let delta = spec.delta(n as f64);
        let term = (-delta / mu).exp();
        z += term;
        s1 += term * delta;
        s2 += term * delta * delta;

        // Integral bounds on the n..inf remainders; d = delta(n).
        let d = delta;
        let decay = (-d / mu).exp();
        let e0 = mu * (d + sa) + mu * mu; // int_d^inf (u+sa) e^{-(u-d)/mu} du, scaled
        let e1 = d * d * mu + 2.0 * d * mu * mu + 2.0 * mu.powi(3) + sa * (d * mu + mu * mu);
        let e2 = d.powi(3) * mu
            + 3.0 * d * d * mu * mu
            + 6.0 * d * mu.powi(3)
            + 6.0 * mu.powi(4)
            + sa * (d * d * mu + 2.0 * d * mu * mu + 2.0 * mu.powi(3));
        let tail_z = (2.0 / b) * decay * e0;
        let tail_s1 = (2.0 / b) * decay * e1;
        let tail_s2 = (2.0 / b) * decay * e2;
        // The delta-weighted integrands peak at delta ~ 3 mu; the integral
        // only bounds the remainder on their decreasing side.
        if d >= 3.0 * mu
            && tail_z < tol * z
            && tail_s1 < tol * s1.max(tol)
            && tail_s2 < tol * s2.max(tol)
        {
            break;
        }
        n += 1;
        if n > cap {
            return Err(ThermoError::TruncationOverflow { cap });
        }
    }
    Ok((z, s1, s2))
}

/// Laurent coefficients `[a_{-3}, a_{-2}, a_{-1}, a_0, a_1, a_2]` of the
/// Euler-Maclaurin closed form `Z_EM(mu) = sum_j a_j mu^j`.
///
/// Collected from `Z_EM = 1/2 + int_0^inf f - (B2/2!) f'(0) - (B4/4!) f'''(0)`.
fn em_coefficients(spec: &LinearSpectrum) -> [f64; 6] {
    let a = spec.offset;
    let b = spec.slope;
    let sa = a.sqrt();
    let b3 = b * b * b;
    [
        -b3 / (5760.0 * a.powf(1.5)),                  // mu^-3 (from f'''(0))
        -b3 / (1920.0 * a * a),                        // mu^-2 (from f'''(0))
        b / (24.0 * sa) - b3 / (1920.0 * a.powf(2.5)), // mu^-1 (f'(0) and f'''(0))
        0.5,                                           // mu^0  (f(0)/2)
        2.0 * sa / b,                                  // mu^1  (integral)
        2.0 / b,                                       // mu^2  (integral)
    ]
}

fn em_eval(coeffs: &[f64; 6], mu: f64) -> (f64, f64, f64) {
    let mut z = 0.0;
    let mut zp = 0.0;
    let mut zpp = 0.0;
    for (idx, &c) in coeffs.iter().enumerate() {
        let j = idx as i32 - 3;
        let jf = f64::from(j);
        z += c * mu.powi(j);
        zp += c * jf * mu.powi(j - 1);
        zpp += c * jf * (jf - 1.0) * mu.powi(j - 2);
    }
    (z, zp, zpp)
}

/// Euler-Maclaurin closed-form partition function.
pub fn partition_em(spec: &LinearSpectrum, mu: f64) -> Result<f64, ThermoError> {
    if mu <= 0.0 {
        return Err(ThermoError::NonPositiveTemperature(mu));
    }
    let (z, _, _) = em_eval(&em_coefficients(spec), mu);
    Ok(z)
}

/// Thermal quantities at one temperature.
///
/// For [`Method::EulerMcLaurin`] the `mu`-derivatives of `ln Z` are analytic
/// (term-by-term differentiation of the Laurent form). For [`Method::Direct`]
/// they come from the exactly differentiated sums: `U = <delta>`,
/// `C_v = (<delta^2> - <delta>^2)/mu^2` — no finite differences anywhere.
pub fn thermo_point(
    spec: &LinearSpectrum,
    mu: f64,
    method: Method,
) -> Result<ThermoPoint, ThermoError> {
    if mu <= 0.0 {
        return Err(ThermoError::NonPositiveTemperature(mu));
    }
    match method {
        Method::Direct => {
            let (z, s1, s2) = direct_sums(spec, mu, 1e-12, DIRECT_SUM_CAP)?;
            let u = s1 / z;
            let cv = (s2 / z - u * u) / (mu * mu);
            Ok(ThermoPoint {
                mu,
                z,
                f_bar: -mu * z.ln(),
                u_bar: u,
                s_bar: z.ln() + u / mu,
                cv_bar: cv,
            })
        }
        Method::EulerMcLaurin => {
            let (z, zp, zpp) = em_eval(&em_coefficients(spec), mu);
            if z <= 0.0 {
                return Err(ThermoError::NonPositivePartition { mu, z });
            }
            let dlnz = zp / z;
            let d2lnz = zpp / z - dlnz * dlnz;
            Ok(ThermoPoint {
                mu,
                z,
                f_bar: -mu * z.ln(),
                u_bar: mu * mu * dlnz,
                s_bar: z.ln() + mu * dlnz,
                cv_bar: 2.0 * mu * dlnz + mu * mu * d2lnz,
            })
        }
    }
}

/// Uniform temperature grid, endpoints included, ascending `mu`. Any failing
/// point aborts the whole curve.
pub fn thermo_curve(
    spec: &LinearSpectrum,
    mu_min: f64,
    mu_max: f64,
    points: u32,
    method: Method,
) -> Result<Vec<ThermoPoint>, ThermoError> {
    if mu_min <= 0.0 {
        return Err(ThermoError::NonPositiveTemperature(mu_min));
    }
    assert!(mu_min < mu_max, "mu range must be ordered");
    assert!(points >= 2, "a curve needs at least two points");
    let step = (mu_max - mu_min) / f64::from(points - 1);
    (0..points)
        .map(|i| {
            let mu = if i == points - 1 {
                mu_max
            } else {
                mu_min + step * f64::from(i)
            };
            thermo_point(spec, mu, method)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{linear_form, CouplingParams, KVariant};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    /// The worked example spectrum quoted to matching precision elsewhere:
    /// built from the literal rounded values, not from `linear_form`.
    fn example_spec() -> LinearSpectrum {
        LinearSpectrum::new(28.14053, 3.999996, 0.001 + 28.14053_f64.sqrt()).unwrap()
    }

    fn reference_spec() -> LinearSpectrum {
        linear_form(&CouplingParams::reference(), 3, 0, KVariant::Table1).unwrap()
    }

    #[test]
    fn direct_sum_frozen_reference() {
        // Independent arbitrary-N oracle (terms added until they vanish
        // relative to the partial sum at machine precision).
        let spec = example_spec();
        let mu = 5.0;
        let mut oracle = 0.0_f64;
        let mut n = 0_u64;
        loop {
            let t = (-spec.delta(n as f64) / mu).exp();
            oracle += t;
            if t < 1e-18 * oracle && n > 10 {
                break;
            }
            n += 1;
        }
        // frozen before the implementation was written
        assert_relative_eq!(oracle, 26.268217664262977, max_relative = 1e-12);
        let z = partition_direct(&spec, mu, 1e-10).unwrap();
        assert_relative_eq!(z, oracle, max_relative = 1e-9);
    }

    #[test]
    fn direct_sum_ground_term_only_at_frozen_limit() {
        let z = partition_direct(&example_spec(), 1e-4, 1e-10).unwrap();
        assert_abs_diff_eq!(z, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn direct_sum_is_at_least_one_and_monotone_in_mu() {
        let spec = reference_spec();
        let mut prev = 0.0;
        for i in 1..=40 {
            let mu = 0.25 * f64::from(i);
            let z = partition_direct(&spec, mu, 1e-10).unwrap();
            assert!(z >= 1.0, "Z = {z} < 1 at mu = {mu}");
            assert!(z > prev, "Z not increasing at mu = {mu}");
            prev = z;
        }
    }

    #[test]
    fn direct_sum_rejects_bad_inputs() {
        let spec = example_spec();
        assert!(matches!(
            partition_direct(&spec, 0.0, 1e-10),
            Err(ThermoError::NonPositiveTemperature(_))
        ));
        assert!(matches!(
            partition_direct_capped(&spec, 50.0, 1e-10, 100),
            Err(ThermoError::TruncationOverflow { cap: 100 })
        ));
    }

    #[test]
    fn em_ingredients_match_finite_differences() {
        // f(x) = exp(-(sqrt(A+Bx)-sqrt(A))/mu) at mu = 1.
        let spec = example_spec();
        let (a, b) = (spec.offset, spec.slope);
        let mu = 1.0;
        let f = |x: f64| (-spec.delta(x) / mu).exp();
        let fp_analytic = -b / (2.0 * a.sqrt() * mu);
        let h = 1e-5;
        let fp_fd = (f(h) - f(-h)) / (2.0 * h);
        assert_relative_eq!(fp_fd, fp_analytic, max_relative = 1e-8);

        let f3_analytic = -3.0 * b.powi(3) / (8.0 * a.powf(2.5) * mu)
            - 3.0 * b.powi(3) / (8.0 * a * a * mu * mu)
            - b.powi(3) / (8.0 * a.powf(1.5) * mu.powi(3));
        // third derivative needs a wide stencil; Richardson-extrapolate h, h/2
        let d3 = |h: f64| (f(2.0 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2.0 * h)) / (2.0 * h.powi(3));
        let f3_fd = (4.0 * d3(0.1) - d3(0.2)) / 3.0;
        assert_relative_eq!(f3_fd, f3_analytic, max_relative = 1e-4);

        // analytic integral against brute quadrature
        let integral = (2.0 / b) * (a.sqrt() * mu + mu * mu);
        let quad = crate::quad::adaptive_simpson(&f, 0.0, 400.0, 1e-10).unwrap();
        assert_relative_eq!(quad, integral, max_relative = 1e-8);
    }

    #[test]
    fn em_matches_spelled_out_formula() {
        // The Laurent evaluation must equal the literal grouped form.
        let spec = reference_spec();
        let (a, b) = (spec.offset, spec.slope);
        for &mu in &[0.5, 1.0, 2.0, 5.0, 20.0, 100.0] {
            let sa = a.sqrt();
            let fp0 = -b / (2.0 * sa * mu);
            let f30 = -3.0 * b.powi(3) / (8.0 * a.powf(2.5) * mu)
                - 3.0 * b.powi(3) / (8.0 * a * a * mu * mu)
                - b.powi(3) / (8.0 * a.powf(1.5) * mu.powi(3));
            let literal = 0.5 + (2.0 / b) * (sa * mu + mu * mu)
                - (BERNOULLI_B2 / 2.0) * fp0
                - (BERNOULLI_B4 / 24.0) * f30;
            let z = partition_em(&spec, mu).unwrap();
            assert_relative_eq!(z, literal, max_relative = 1e-13);
        }
    }

    #[test]
    fn em_tracks_direct_sum() {
        let spec = example_spec();
        let zd = partition_direct(&spec, 5.0, 1e-10).unwrap();
        let ze = partition_em(&spec, 5.0).unwrap();
        assert!(((ze - zd) / zd).abs() <= 1e-3);
    }

    #[test]
    fn high_temperature_behaviour() {
        // Z/mu^2 approaches 2/B like sqrt(A)/mu; U/mu approaches 2 the same
        // way; C_v approaches 2 quadratically. At mu = 100 that puts the
        // first two about 5.3% and 2.5% out for the reference spectrum.
        let spec = reference_spec();
        let mu = 100.0;
        let z = partition_em(&spec, mu).unwrap();
        let lead = 2.0 / spec.slope;
        let expected_rel = spec.offset.sqrt() / mu;
        let measured_rel = (z / (mu * mu) - lead) / lead;
        assert_relative_eq!(measured_rel, expected_rel, max_relative = 2e-2);

        let pt = thermo_point(&spec, mu, Method::EulerMcLaurin).unwrap();
        assert!((pt.u_bar / mu - 2.0).abs() < 0.06);
        assert!((pt.cv_bar - 2.0).abs() < 0.01);

        // far enough into the asymptotic regime everything lands
        let mu = 1.0e4;
        let pt = thermo_point(&spec, mu, Method::EulerMcLaurin).unwrap();
        assert!((pt.u_bar / mu - 2.0).abs() < 1e-3);
        let z = partition_em(&spec, mu).unwrap();
        assert!(((z / (mu * mu) - lead) / lead).abs() < 1e-3);
    }

    #[test]
    fn thermo_identities_hold_for_both_methods() {
        let spec = reference_spec();
        for method in [Method::Direct, Method::EulerMcLaurin] {
            for i in 0..=30 {
                let mu = 0.5 + f64::from(i) * 0.65;
                let pt = thermo_point(&spec, mu, method).unwrap();
                assert_abs_diff_eq!(pt.f_bar, pt.u_bar - mu * pt.s_bar, epsilon = 1e-10);
                assert_abs_diff_eq!(pt.s_bar, pt.z.ln() + pt.u_bar / mu, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn frozen_limit_thermo_point_vanishes() {
        let pt = thermo_point(&example_spec(), 1e-4, Method::Direct).unwrap();
        assert_abs_diff_eq!(pt.z, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pt.f_bar, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pt.u_bar, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pt.s_bar, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn specific_heat_matches_finite_difference_of_mean_energy() {
        let spec = reference_spec();
        for method in [Method::Direct, Method::EulerMcLaurin] {
            for &mu in &[1.0, 3.0, 10.0, 50.0] {
                let cv = thermo_point(&spec, mu, method).unwrap().cv_bar;
                let u = |m: f64| thermo_point(&spec, m, method).unwrap().u_bar;
                let mut h = 0.05 * mu;
                let mut fd = (u(mu + h) - u(mu - h)) / (2.0 * h);
                for _ in 0..8 {
                    h *= 0.5;
                    let next = (u(mu + h) - u(mu - h)) / (2.0 * h);
                    if ((next - fd) / next).abs() < 1e-7 {
                        fd = next;
                        break;
                    }
                    fd = next;
                }
                assert_relative_eq!(cv, fd, max_relative = 1e-5);
            }
        }
    }

    #[test]
    fn curve_grid_construction() {
        let spec = reference_spec();
        let two = thermo_curve(&spec, 0.5, 20.0, 2, Method::EulerMcLaurin).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].mu, 0.5);
        assert_eq!(two[1].mu, 20.0);

        let curve = thermo_curve(&spec, 0.5, 20.0, 101, Method::Direct).unwrap();
        for w in curve.windows(2) {
            assert!(
                w[1].f_bar < w[0].f_bar,
                "F not decreasing at mu={}",
                w[1].mu
            );
            assert!(
                w[1].u_bar > w[0].u_bar,
                "U not increasing at mu={}",
                w[1].mu
            );
        }
    }

    #[test]
    fn em_diverges_below_validity_with_clear_error() {
        let spec = reference_spec();
        let err = thermo_point(&spec, 1e-3, Method::EulerMcLaurin).unwrap_err();
        assert!(matches!(err, ThermoError::NonPositivePartition { .. }));
    }
}

//! The built-in verification suite behind the `validate` subcommand.
//!
//! Ten independent checks, each returning a [`CriterionResult`] with the
//! measured numbers. They cover: reproduction of the published reference
//! spectrum (with its truncated-to-three-decimals convention), exact
//! algebraic invariants of the level formula, the direct-sum/Euler-Maclaurin
//! partition cross-check, thermodynamic identities and curve shapes,
//! wave-function normalization closure, the eigensolver's exactly solvable
//! limits, and a mutation probe that makes sure the spectrum check actually
//! has teeth.
//!
//! The suite never short-circuits: every criterion runs and reports.

use crate::ode::{find_level, OdeProblem};
use crate::radial::{build_wavefunction, norm_quadrature, Branch};
use crate::spectral::{
    energy_pair_with_k, k_exponent, linear_form, CouplingParams, KVariant, QuantumState,
    SpectralError,
};
use crate::thermo::{partition_direct, partition_em, thermo_curve, thermo_point, Method};
use std::time::Instant;

/// Outcome of one verification criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    /// Measured values, one line, for the report.
    pub details: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{:2}/10] {}  {} — {}",
            self.index,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.details
        )
    }
}

/// Published reference spectrum for `M = 1`, `b_v = 0.002`, `b_s = 2`,
/// `a_v = 0.2`, `a_s = 6`: rows are `(n, l, [E+ for D = 1..6], [E- for D = 1..6])`.
/// Values are truncated (not rounded) to three decimals, hence the 1.5e-3
/// comparison tolerance used below.
#[allow(clippy::type_complexity)]
pub const REFERENCE_SPECTRUM: &[(u32, u32, [f64; 6], [f64; 6])] = &[
    (
        1,
        0,
        [6.012, 5.829, 5.670, 5.536, 5.427, 5.346],
        [-6.010, -5.827, -5.668, -5.534, -5.425, -5.344],
    ),
    (
        2,
        0,
        [6.336, 6.163, 6.012, 5.886, 5.784, 5.708],
        [-6.334, -6.161, -6.010, -5.884, -5.782, -5.706],
    ),
    (
        2,
        1,
        [6.336, 6.108, 5.899, 5.712, 5.550, 5.414],
        [-6.334, -6.106, -5.897, -5.710, -5.548, -5.412],
    ),
    (
        3,
        0,
        [6.644, 6.479, 6.336, 6.216, 6.120, 6.048],
        [-6.642, -6.477, -6.334, -6.214, -6.118, -6.046],
    ),
    (
        3,
        1,
        [6.644, 6.427, 6.229, 6.052, 5.899, 5.771],
        [-6.642, -6.425, -6.227, -6.050, -5.897, -5.769],
    ),
    (
        3,
        2,
        [6.542, 6.264, 5.998, 5.750, 5.522, 5.321],
        [-6.540, -6.262, -5.996, -5.748, -5.520, -5.319],
    ),
    (
        4,
        0,
        [6.939, 6.781, 6.644, 6.530, 6.439, 6.370],
        [-6.937, -6.779, -6.642, -6.528, -6.437, -6.368],
    ),
    (
        4,
        1,
        [6.939, 6.731, 6.542, 6.374, 6.229, 6.108],
        [-6.937, -6.729, -6.540, -6.372, -6.227, -6.106],
    ),
    (
        4,
        2,
        [6.841, 6.575, 6.323, 6.088, 5.873, 5.684],
        [-6.839, -6.573, -6.321, -6.086, -5.871, -5.682],
    ),
    (
        4,
        3,
        [6.632, 6.289, 5.947, 5.612, 5.289, 4.984],
        [-6.630, -6.287, -5.945, -5.610, -5.287, -4.982],
    ),
    (
        5,
        0,
        [7.221, 7.070, 6.939, 6.830, 6.742, 6.677],
        [-7.219, -7.068, -6.937, -6.828, -6.740, -6.675],
    ),
    (
        5,
        1,
        [7.221, 7.022, 6.841, 6.680, 6.542, 6.427],
        [-7.219, -7.020, -6.839, -6.678, -6.540, -6.425],
    ),
    (
        5,
        2,
        [7.127, 6.873, 6.632, 6.408, 6.205, 6.026],
        [-7.125, -6.871, -6.630, -6.406, -6.203, -6.024],
    ),
    (
        5,
        3,
        [6.927, 6.599, 6.275, 5.958, 5.654, 5.370],
        [-6.925, -6.597, -6.273, -5.956, -5.652, -5.368],
    ),
    (
        5,
        4,
        [6.586, 6.144, 5.676, 5.177, 4.644, 4.071],
        [-6.584, -6.142, -5.674, -5.175, -4.642, -4.069],
    ),
];

/// Comparison tolerance against the truncated table values.
pub const TABLE_TOL: f64 = 1.5e-3;

fn reference_params() -> CouplingParams {
    CouplingParams::reference()
}

fn reference_thermo_spec() -> crate::spectral::LinearSpectrum {
    linear_form(&reference_params(), 3, 0, KVariant::Table1).expect("reference recast exists")
}

type KFn = dyn Fn(&CouplingParams, &QuantumState) -> Result<f64, SpectralError>;

/// Worst deviation (across every cell and both signs) of the spectrum built
/// on `k_fn` from the reference table, plus the number of cells evaluated.
fn reference_grid_deviation(k_fn: &KFn) -> (f64, usize) {
    let params = reference_params();
    let mut worst = 0.0_f64;
    let mut cells = 0_usize;
    for &(n, l, e_plus, e_minus) in REFERENCE_SPECTRUM {
        for d in 1..=6_u32 {
            let state = QuantumState {
                n,
                l,
                d,
                variant: KVariant::Table1,
            };
            let dev =
                match k_fn(&params, &state).and_then(|k| energy_pair_with_k(&params, &state, k)) {
                    Ok(pair) => {
                        let dp = (pair.e_plus - e_plus[(d - 1) as usize]).abs();
                        let dm = (pair.e_minus - e_minus[(d - 1) as usize]).abs();
                        dp.max(dm)
                    }
                    Err(_) => f64::INFINITY,
                };
            worst = worst.max(dev);
            cells += 1;
        }
    }
    (worst, cells)
}

/// 1. Every cell of the reference grid matches both tabulated energies
///    within 1.5e-3, spot anchors included, in under a second.
pub fn criterion_1_reference_spectrum() -> CriterionResult {
    let start = Instant::now();
    let (worst, cells) = reference_grid_deviation(&k_exponent);
    let elapsed = start.elapsed().as_secs_f64();

    // spot anchors: (n, l, D) -> E+ (and E- where the pair is quoted)
    let params = reference_params();
    let anchors: [(u32, u32, u32, f64, Option<f64>); 5] = [
        (1, 0, 3, 5.670, Some(-5.668)),
        (1, 0, 1, 6.012, None),
        (2, 1, 3, 5.899, None),
        (3, 2, 3, 5.998, None),
        (5, 4, 6, 4.071, Some(-4.069)),
    ];
    let mut anchors_ok = true;
    for (n, l, d, ep, em) in anchors {
        let state = QuantumState {
            n,
            l,
            d,
            variant: KVariant::Table1,
        };
        let pair = k_exponent(&params, &state)
            .and_then(|k| energy_pair_with_k(&params, &state, k))
            .expect("anchor cell must be real");
        anchors_ok &= (pair.e_plus - ep).abs() <= TABLE_TOL;
        if let Some(em) = em {
            anchors_ok &= (pair.e_minus - em).abs() <= TABLE_TOL;
        }
    }

    let passed = cells == 90 && worst <= TABLE_TOL && anchors_ok && elapsed < 1.0;
    CriterionResult {
        index: 1,
        name: "reference-spectrum reproduction",
        passed,
        details: format!(
            "{cells} cells, max |dE| = {worst:.3e} (tol {TABLE_TOL:.1e}), anchors {}, {elapsed:.3} s",
            if anchors_ok { "ok" } else { "off" }
        ),
    }
}

/// 2. Vieta: `E+ + E- = 2 M b_v / b_s` (= 0.002 here) on every cell, 1e-9.
pub fn criterion_2_vieta_sum() -> CriterionResult {
    let params = reference_params();
    let mut worst = 0.0_f64;
    for &(n, l, ..) in REFERENCE_SPECTRUM {
        for d in 1..=6_u32 {
            let state = QuantumState {
                n,
                l,
                d,
                variant: KVariant::Table1,
            };
            let pair = k_exponent(&params, &state)
                .and_then(|k| energy_pair_with_k(&params, &state, k))
                .expect("reference cell must be real");
            worst = worst.max((pair.e_plus + pair.e_minus - 0.002).abs());
        }
    }
    CriterionResult {
        index: 2,
        name: "Vieta sum invariant",
        passed: worst <= 1e-9,
        details: format!("max |E+ + E- - 0.002| = {worst:.3e} (tol 1e-9)"),
    }
}

/// 3. The linear recast reproduces the positive quadratic root to 1e-12
///    relative for `n = 0..=50` on every `(D, l)` pair of the grid where the
///    recast is constructible; the single non-constructible pair `(6, 4)`
///    must fail with the designed non-positive-offset error.
pub fn criterion_3_linear_recast_identity() -> CriterionResult {
    let params = reference_params();
    let mut worst = 0.0_f64;
    let mut constructed = 0_usize;
    let mut expected_failure_ok = true;
    for d in 1..=6_u32 {
        for l in 0..=4_u32 {
            match linear_form(&params, d, l, KVariant::Table1) {
                Ok(spec) => {
                    constructed += 1;
                    for n in 0..=50_u32 {
                        let state = QuantumState {
                            n,
                            l,
                            d,
                            variant: KVariant::Table1,
                        };
                        let pair = energy_pair_with_k(
                            &params,
                            &state,
                            k_exponent(&params, &state).expect("k exists where A > 0"),
                        )
                        .expect("level exists where A > 0");
                        let from_linear = params.mass * spec.level_ratio(n);
                        worst = worst.max(((from_linear - pair.e_plus) / pair.e_plus).abs());
                    }
                }
                Err(SpectralError::NonPositiveOffset(_)) if (d, l) == (6, 4) => {}
                Err(_) => expected_failure_ok = false,
            }
        }
    }
    let passed = worst <= 1e-12 && constructed == 29 && expected_failure_ok;
    CriterionResult {
        index: 3,
        name: "linear-recast identity",
        passed,
        details: format!(
            "max rel dev = {worst:.3e} over {constructed} (D,l) pairs x n=0..50 (tol 1e-12); (6,4) excluded by design (A < 0)"
        ),
    }
}

/// 4. Euler-Maclaurin vs direct sum on mu in [0.5, 20], 200 points:
///    relative gap <= 1e-3 for mu >= 2 and <= 1e-2 below, in under 10 s.
pub fn criterion_4_partition_oracle() -> CriterionResult {
    let start = Instant::now();
    let spec = reference_thermo_spec();
    let points = 200;
    let mut worst_hi = 0.0_f64; // mu >= 2
    let mut worst_lo = 0.0_f64; // mu < 2
    for i in 0..points {
        let mu = 0.5 + (20.0 - 0.5) * f64::from(i) / f64::from(points - 1);
        let zd = partition_direct(&spec, mu, 1e-10).expect("direct sum converges");
        let ze = partition_em(&spec, mu).expect("closed form evaluates");
        let rel = ((ze - zd) / zd).abs();
        if mu >= 2.0 {
            worst_hi = worst_hi.max(rel);
        } else {
            worst_lo = worst_lo.max(rel);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = worst_hi <= 1e-3 && worst_lo <= 1e-2 && elapsed < 10.0;
    CriterionResult {
        index: 4,
        name: "partition-function oracle agreement",
        passed,
        details: format!(
            "max rel gap = {worst_hi:.3e} on mu in [2,20] (tol 1e-3), {worst_lo:.3e} on [0.5,2) (tol 1e-2), {elapsed:.2} s"
        ),
    }
}

/// 5. High-temperature limits at mu = 100 via Euler-Maclaurin:
///    |U/mu - 2| <= 0.05, |Cv - 2| <= 0.05, and Z/mu^2 within 2% of 2/B.
///
/// Note: with the exactly re-derived `(A, B)` demanded by criterion 3, the
/// approach to the limit goes like `sqrt(A)/mu ~ 5.3e-2` at mu = 100, so the
/// U and Z checks sit outside their stated tolerances for the reference
/// spectrum. The thresholds are kept as specified and the measured values
/// are reported; see the README's validation notes.
pub fn criterion_5_high_temperature_limits() -> CriterionResult {
    let spec = reference_thermo_spec();
    let mu = 100.0;
    let pt = thermo_point(&spec, mu, Method::EulerMcLaurin).expect("EM point at mu = 100");
    let z = partition_em(&spec, mu).expect("EM partition at mu = 100");
    let u_dev = (pt.u_bar / mu - 2.0).abs();
    let cv_dev = (pt.cv_bar - 2.0).abs();
    let lead = 2.0 / spec.slope;
    let z_rel = (z / (mu * mu) - lead).abs() / lead;
    let passed = u_dev <= 0.05 && cv_dev <= 0.05 && z_rel <= 0.02;
    CriterionResult {
        index: 5,
        name: "high-temperature limits (mu = 100)",
        passed,
        details: format!(
            "|U/mu - 2| = {u_dev:.4} (tol 0.05), |Cv - 2| = {cv_dev:.4} (tol 0.05), Z/mu^2 rel dev = {z_rel:.4} (tol 0.02)"
        ),
    }
}

/// 6. Thermodynamic identities at every grid point (1e-10) and the specific
///    heat against a step-halved finite difference of U (1e-5 relative).
pub fn criterion_6_thermo_identities() -> CriterionResult {
    let spec = reference_thermo_spec();
    let mut worst_identity = 0.0_f64;
    for method in [Method::Direct, Method::EulerMcLaurin] {
        for i in 0..120 {
            let mu = 0.5 + (20.0 - 0.5) * f64::from(i) / 119.0;
            let pt = thermo_point(&spec, mu, method).expect("thermo point");
            worst_identity = worst_identity
                .max((pt.f_bar - (pt.u_bar - mu * pt.s_bar)).abs())
                .max((pt.s_bar - (pt.z.ln() + pt.u_bar / mu)).abs());
        }
    }

    let mut worst_cv = 0.0_f64;
    for method in [Method::Direct, Method::EulerMcLaurin] {
        for &mu in &[1.0, 2.0, 5.0, 10.0, 20.0, 50.0] {
            let cv = thermo_point(&spec, mu, method)
                .expect("thermo point")
                .cv_bar;
            let u = |m: f64| thermo_point(&spec, m, method).expect("thermo point").u_bar;
            let mut h = 0.05 * mu;
            let mut fd = (u(mu + h) - u(mu - h)) / (2.0 * h);
            for _ in 0..10 {
                h *= 0.5;
                let next = (u(mu + h) - u(mu - h)) / (2.0 * h);
                let stable = ((next - fd) / next).abs() < 1e-8;
                fd = next;
                if stable {
                    break;
                }
            }
            worst_cv = worst_cv.max(((cv - fd) / fd).abs());
        }
    }

    let passed = worst_identity <= 1e-10 && worst_cv <= 1e-5;
    CriterionResult {
        index: 6,
        name: "thermodynamic identities",
        passed,
        details: format!(
            "max identity residual = {worst_identity:.3e} (tol 1e-10); max |Cv - dU/dmu|/Cv = {worst_cv:.3e} (tol 1e-5)"
        ),
    }
}

/// 7. Curve shapes on mu in [0.5, 20]: Helmholtz free energy strictly
///    decreasing, mean energy strictly increasing, for both methods.
pub fn criterion_7_curve_shapes() -> CriterionResult {
    let spec = reference_thermo_spec();
    let mut monotone = true;
    for method in [Method::Direct, Method::EulerMcLaurin] {
        let curve = thermo_curve(&spec, 0.5, 20.0, 200, method).expect("curve evaluates");
        for w in curve.windows(2) {
            monotone &= w[1].f_bar < w[0].f_bar && w[1].u_bar > w[0].u_bar;
        }
    }
    CriterionResult {
        index: 7,
        name: "thermal-curve monotonicity",
        passed: monotone,
        details: format!(
            "F strictly decreasing and U strictly increasing over 200 points, both methods: {monotone}"
        ),
    }
}

/// 8. Normalization closure: the quadrature-normalized state integrates to 1
///    within 1e-8; the closed-form constant agrees with quadrature to 1e-8
///    relative in the pure-Gaussian case; and for the reference state the
///    closed-form/quadrature mismatch matches its pinned brute-force value.
pub fn criterion_8_normalization() -> CriterionResult {
    // closure across a spread of states
    let params = reference_params();
    let mut worst_closure = 0.0_f64;
    for (n, l, d) in [(1_u32, 0_u32, 3_u32), (2, 1, 3), (3, 0, 4), (0, 0, 3)] {
        let state = QuantumState {
            n,
            l,
            d,
            variant: KVariant::Table1,
        };
        let wf = build_wavefunction(&params, &state, Branch::Plus).expect("state builds");
        let c_exact = norm_quadrature(&wf).expect("quadrature converges");
        // re-integrate the re-scaled density with an independent composite rule
        let scale = (c_exact / wf.norm).powi(2);
        let steps = 400_000_usize;
        let r_hi = 14.0;
        let h = r_hi / steps as f64;
        let mut acc = 0.0;
        for i in 0..steps {
            let (a, b) = (i as f64 * h, (i as f64 + 1.0) * h);
            acc += h / 6.0 * (wf.density(a) + 4.0 * wf.density(0.5 * (a + b)) + wf.density(b));
        }
        worst_closure = worst_closure.max((scale * acc - 1.0).abs());
    }

    // pure-Gaussian agreement of the two constants
    let gauss_params = CouplingParams::new(0.0, 0.0, 0.0, 2.0, 1.0).expect("valid");
    let gauss_state = QuantumState {
        n: 0,
        l: 1,
        d: 3,
        variant: KVariant::HalfQuadratic,
    };
    let wf = build_wavefunction(&gauss_params, &gauss_state, Branch::Plus).expect("builds");
    let gauss_rel = {
        let c_exact = norm_quadrature(&wf).expect("quadrature converges");
        ((c_exact - wf.norm) / wf.norm).abs()
    };

    // pinned deviation factor for the reference (n=1, l=0, D=3) state:
    // norm integral of the closed-form-normalized density, measured once by
    // a 10^6-node composite Simpson oracle.
    let state = QuantumState {
        n: 1,
        l: 0,
        d: 3,
        variant: KVariant::Table1,
    };
    let wf = build_wavefunction(&params, &state, Branch::Plus).expect("builds");
    let c_exact = norm_quadrature(&wf).expect("quadrature converges");
    let rho = (wf.norm / c_exact).powi(2);
    let rho_pin = 1.6857526921302572e-7;
    let c_pin = 8.675306636373177;
    let pin_ok =
        ((rho - rho_pin) / rho_pin).abs() <= 1e-7 && ((c_exact - c_pin) / c_pin).abs() <= 1e-7;

    let passed = worst_closure <= 1e-8 && gauss_rel <= 1e-8 && pin_ok;
    CriterionResult {
        index: 8,
        name: "wave-function normalization",
        passed,
        details: format!(
            "max |int - 1| = {worst_closure:.3e} (tol 1e-8); Gaussian-case const rel dev = {gauss_rel:.3e} (tol 1e-8); deviation factor rho = {rho:.9e} vs pin {rho_pin:.9e}"
        ),
    }
}

/// 9. Eigensolver limits: oscillator ground level sqrt(6) and the
///    Coulomb-dominated level, both to 1e-6, with step-halving shifts
///    below 1e-8.
pub fn criterion_9_ode_limits() -> CriterionResult {
    let oscillator = CouplingParams::new(0.0, 0.0, 0.0, 2.0, 0.0).expect("valid");
    let problem = OdeProblem::new(oscillator, 3, 0, (1.5, 3.5), 0).expect("valid problem");
    let osc = find_level(&problem).expect("oscillator level found");
    let osc_dev = (osc.e - 2.449489742783178_f64).abs();

    let coulomb = CouplingParams::new(0.2, 0.0, 0.0, 0.0, 1.0).expect("valid");
    let problem = OdeProblem::new(coulomb, 3, 0, (0.9, 0.999), 0).expect("valid problem");
    let cou = find_level(&problem).expect("Coulomb level found");
    let cou_dev = (cou.e - 0.9789063129307033_f64).abs();

    let passed = osc_dev <= 1e-6
        && cou_dev <= 1e-6
        && osc.halving_shift < 1e-8
        && cou.halving_shift < 1e-8
        && osc.nodes == 0
        && cou.nodes == 0;
    CriterionResult {
        index: 9,
        name: "eigensolver analytic limits",
        passed,
        details: format!(
            "oscillator |dE| = {osc_dev:.3e}, Coulomb |dE| = {cou_dev:.3e} (tol 1e-6); halving shifts {:.1e} / {:.1e} (tol 1e-8)",
            osc.halving_shift, cou.halving_shift
        ),
    }
}

/// 10. Mutation sensitivity: flipping the sign of the angular term inside
///     the Table1 exponent must break the reference-spectrum check.
pub fn criterion_10_mutation_sensitivity() -> CriterionResult {
    let mutated = |params: &CouplingParams, state: &QuantumState| -> Result<f64, SpectralError> {
        let coulomb = params.a_v * params.a_v - params.a_s * params.a_s;
        let angular = state.angular_eigenvalue();
        let d_minus_2 = f64::from(state.d) - 2.0;
        // sign of the angular term flipped relative to the Table1 convention
        let disc = d_minus_2 * d_minus_2 - 4.0 * coulomb + 4.0 * angular;
        if disc < 0.0 {
            return Err(SpectralError::NegativeDiscriminant(disc));
        }
        Ok(-d_minus_2 + disc.sqrt())
    };
    let (worst, cells) = reference_grid_deviation(&mutated);
    let mutant_detected = !(cells == 90 && worst <= TABLE_TOL);
    CriterionResult {
        index: 10,
        name: "mutation sensitivity of the spectrum check",
        passed: mutant_detected,
        details: format!(
            "sign-flipped exponent drives max |dE| to {worst:.3e} (> {TABLE_TOL:.1e} required)"
        ),
    }
}

/// Run the full suite in order. Always evaluates all ten.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        criterion_1_reference_spectrum(),
        criterion_2_vieta_sum(),
        criterion_3_linear_recast_identity(),
        criterion_4_partition_oracle(),
        criterion_5_high_temperature_limits(),
        criterion_6_thermo_identities(),
        criterion_7_curve_shapes(),
        criterion_8_normalization(),
        criterion_9_ode_limits(),
        criterion_10_mutation_sensitivity(),
    ]
}

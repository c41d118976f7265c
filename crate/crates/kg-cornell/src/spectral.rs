//! Closed-form bound-state energies.
//!
//! The radial reduction of the Klein-Gordon equation with the mixed Cornell
//! couplings admits a closed-form spectrum once the near-origin exponent `k`
//! is fixed by the parametric condition
//!
//! ```text
//! k(k-1) + k(D-1) - l(l+D-2) + (a_v^2 - a_s^2) = 0 .
//! ```
//!
//! Three inequivalent published conventions for `k` circulate (they differ in
//! a factor 1/2 and in the sign carried by the angular term); all three are
//! implemented as [`KVariant`] and the caller chooses. [`KVariant::Table1`]
//! is the one that reproduces the tabulated reference spectrum and is the
//! default throughout.
//!
//! Given `k`, the level with radial index `n` solves the quadratic
//!
//! ```text
//! E^2 - (2 M b_v/b_s) E
//!     - (1 - b_v^2/b_s^2) [ M^2 + 2 (a_v b_v - a_s b_s + (k + n + D/2) beta) ]
//!     - M^2 = 0,          beta = sqrt(b_s^2 - b_v^2),
//! ```
//!
//! solved here with the sign-aware quadratic formula so the small-`b_v`
//! regime does not suffer cancellation. Completing the square gives the exact
//! linear-in-`n` recast `E_n/M = b_v/b_s + sqrt(A + B n)` ([`LinearSpectrum`])
//! that the thermodynamics module builds on.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    /// Coupling set violates `b_s > 0`, `b_s >= |b_v|`, `M >= 0`, or finiteness.
    #[error("invalid couplings: {0}")]
    InvalidCouplings(String),
    /// The requested combination admits no real solution; the value is the
    /// offending discriminant.
    #[error("negative discriminant {0:.6e}: parameters outside the formula's validity")]
    NegativeDiscriminant(f64),
    /// Spectrum base `A` of the linear recast is not positive.
    #[error("non-positive spectrum offset A = {0:.6e}")]
    NonPositiveOffset(f64),
}

/// The four Cornell strengths plus the rest mass, natural units.
///
/// `a_v`, `a_s` are the dimensionless Coulomb strengths; `b_v`, `b_s` the
/// linear strengths (mass^2); `mass` the rest mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    pub a_v: f64,
    pub a_s: f64,
    pub b_v: f64,
    pub b_s: f64,
    pub mass: f64,
}

impl CouplingParams {
    /// Validates `b_s >= |b_v|` (real `beta`), `mass >= 0`, all finite.
    ///
    /// `b_s = 0` (with `b_v = 0`) is allowed so the Coulomb-dominated limit
    /// stays constructible for the numerical solver; the closed-form level
    /// operations additionally require `b_s > 0` and reject it there.
    pub fn new(a_v: f64, a_s: f64, b_v: f64, b_s: f64, mass: f64) -> Result<Self, SpectralError> {
        let vals = [a_v, a_s, b_v, b_s, mass];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(SpectralError::InvalidCouplings(
                "all parameters must be finite".into(),
            ));
        }
        if b_s < 0.0 {
            return Err(SpectralError::InvalidCouplings(format!(
                "b_s = {b_s} must be non-negative"
            )));
        }
        if b_s < b_v.abs() {
            return Err(SpectralError::InvalidCouplings(format!(
                "b_s = {b_s} must be >= |b_v| = {}",
                b_v.abs()
            )));
        }
        if mass < 0.0 {
            return Err(SpectralError::InvalidCouplings(format!(
                "mass = {mass} must be non-negative"
            )));
        }
        Ok(Self {
            a_v,
            a_s,
            b_v,
            b_s,
            mass,
        })
    }

    /// The reference parameter set used for the tabulated spectrum:
    /// `M = 1`, `b_v = 0.002`, `b_s = 2`, `a_v = 0.2`, `a_s = 6`.
    pub fn reference() -> Self {
        Self::new(0.2, 6.0, 0.002, 2.0, 1.0).expect("reference set is valid")
    }

    /// `beta = sqrt(b_s^2 - b_v^2)`, the Gaussian decay rate (mass^2).
    pub fn beta(&self) -> f64 {
        (self.b_s * self.b_s - self.b_v * self.b_v).sqrt()
    }

    /// `epsilon^2 = M^2 - E^2` for a candidate energy.
    pub fn epsilon_sq(&self, energy: f64) -> f64 {
        self.mass * self.mass - energy * energy
    }
}

/// Convention used for the near-origin exponent `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KVariant {
    /// `k = (2-D) + sqrt((D-2)^2 - 4(a_v^2-a_s^2) - 4 l(l+D-2))`.
    ///
    /// The empirical reconstruction that reproduces every cell of the
    /// tabulated reference spectrum. Default.
    Table1,
    /// `k = (2-D) + sqrt((D-2)^2 - 4[(a_v^2-a_s^2) - l(l+D-2)])`,
    /// the widely printed closed form (angular term with the opposite sign,
    /// no 1/2). Coincides with [`KVariant::Table1`] at `l = 0`.
    PrintedEq27,
    /// `k = [(2-D) + sqrt((D-2)^2 + 4 l(l+D-2) - 4(a_v^2-a_s^2))]/2`,
    /// the exact positive-branch root of the parametric condition.
    HalfQuadratic,
}

impl KVariant {
    /// Short tag used in CSV output and on the command line.
    pub fn tag(&self) -> &'static str {
        match self {
            KVariant::Table1 => "table1",
            KVariant::PrintedEq27 => "eq27",
            KVariant::HalfQuadratic => "half",
        }
    }
}

impl std::fmt::Display for KVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Quantum numbers `(n, l, D)` plus the `k` convention.
///
/// `l` enters only through the hyperangular eigenvalue `l(l+D-2)`. For
/// `D = 1` that factor degenerates to `l(l-1)` and `l` acts as a purely
/// formal index (the reference table tabulates those columns too; `l = 0`
/// and `l = 1` coincide exactly there).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumState {
    pub n: u32,
    pub l: u32,
    pub d: u32,
    pub variant: KVariant,
}

impl QuantumState {
    pub fn new(n: u32, l: u32, d: u32, variant: KVariant) -> Result<Self, SpectralError> {
        if d < 1 {
            return Err(SpectralError::InvalidCouplings(
                "dimension D must be >= 1".into(),
            ));
        }
        Ok(Self { n, l, d, variant })
    }

    /// Hyperangular eigenvalue `l(l+D-2)`.
    pub fn angular_eigenvalue(&self) -> f64 {
        let l = f64::from(self.l);
        l * (l + f64::from(self.d) - 2.0)
    }
}

/// The two roots of the energy quadratic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyPair {
    pub e_plus: f64,
    pub e_minus: f64,
    /// Exponent used to build the pair.
    pub k: f64,
    /// Discriminant of the quadratic (>= 0 on success).
    pub discriminant: f64,
}

/// Exact linear-in-`n` recast of the spectrum:
/// `E_n/M = b_v/b_s + sqrt(A + B n)` (positive branch).
///
/// `A = 2 + (2/M^2)(1 - b_v^2/b_s^2)(a_v b_v - a_s b_s + (k + D/2) beta)`,
/// `B = (2/M^2)(1 - b_v^2/b_s^2) beta`. All thermodynamic quantities depend
/// on the spectrum only through `(A, B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearSpectrum {
    /// Offset `A` (dimensionless, > 0).
    pub offset: f64,
    /// Slope `B` (dimensionless, > 0).
    pub slope: f64,
    /// Ground level in units of `M`: `e0 = b_v/b_s + sqrt(A)`.
    pub e0: f64,
}

impl LinearSpectrum {
    /// Build from raw `(A, B, e0)`; `A` and `B` must be positive and finite.
    pub fn new(offset: f64, slope: f64, e0: f64) -> Result<Self, SpectralError> {
        if !(offset.is_finite() && slope.is_finite() && e0.is_finite()) {
            return Err(SpectralError::InvalidCouplings(
                "linear spectrum parameters must be finite".into(),
            ));
        }
        if offset <= 0.0 {
            return Err(SpectralError::NonPositiveOffset(offset));
        }
        if slope <= 0.0 {
            return Err(SpectralError::InvalidCouplings(format!(
                "slope B = {slope} must be positive"
            )));
        }
        Ok(Self { offset, slope, e0 })
    }

    /// Radicand `A + B n`.
    pub fn radicand(&self, n: u32) -> f64 {
        self.offset + self.slope * f64::from(n)
    }

    /// Level in units of `M`: `b_v/b_s + sqrt(A + B n)`.
    pub fn level_ratio(&self, n: u32) -> f64 {
        (self.e0 - self.offset.sqrt()) + self.radicand(n).sqrt()
    }

    /// Excitation relative to the ground level, `(E_n - E_0)/M`
    /// `= sqrt(A + B n) - sqrt(A)`. Exactly zero at `n = 0`.
    pub fn delta(&self, n: f64) -> f64 {
        (self.offset + self.slope * n).sqrt() - self.offset.sqrt()
    }
}

/// Near-origin exponent for the chosen convention (positive branch).
///
/// For [`KVariant::HalfQuadratic`] the result satisfies the parametric
/// condition to machine precision; the other two variants are the published
/// closed forms taken at face value.
pub fn k_exponent(params: &CouplingParams, state: &QuantumState) -> Result<f64, SpectralError> {
    let coulomb = params.a_v * params.a_v - params.a_s * params.a_s;
    let angular = state.angular_eigenvalue();
    let d_minus_2 = f64::from(state.d) - 2.0;
    let disc = match state.variant {
        KVariant::Table1 => d_minus_2 * d_minus_2 - 4.0 * coulomb - 4.0 * angular,
        KVariant::PrintedEq27 | KVariant::HalfQuadratic => {
            d_minus_2 * d_minus_2 - 4.0 * (coulomb - angular)
        }
    };
    if disc < 0.0 {
        return Err(SpectralError::NegativeDiscriminant(disc));
    }
    let root = -d_minus_2 + disc.sqrt();
    Ok(match state.variant {
        KVariant::HalfQuadratic => 0.5 * root,
        _ => root,
    })
}

/// Both roots of the energy quadratic for `(n, l, D)` under the chosen `k`
/// convention, via the cancellation-safe formula
/// `q = -(b + sign(b) sqrt(b^2 - 4c))/2`, roots `q` and `c/q`.
pub fn energy_pair(
    params: &CouplingParams,
    state: &QuantumState,
) -> Result<EnergyPair, SpectralError> {
    let k = k_exponent(params, state)?;
    energy_pair_with_k(params, state, k)
}

/// Energy quadratic solved for an externally supplied exponent. Shared by
/// [`energy_pair`] and the validation suite (which probes mutated exponents).
pub(crate) fn energy_pair_with_k(
    params: &CouplingParams,
    state: &QuantumState,
    k: f64,
) -> Result<EnergyPair, SpectralError> {
    if params.b_s <= 0.0 {
        return Err(SpectralError::InvalidCouplings(
            "closed-form levels require b_s > 0".into(),
        ));
    }
    let m = params.mass;
    let ratio = params.b_v / params.b_s;
    let one_minus = 1.0 - ratio * ratio;
    let beta = params.beta();
    let shift = params.a_v * params.b_v - params.a_s * params.b_s
        + (k + f64::from(state.n) + f64::from(state.d) / 2.0) * beta;
    // E^2 + b E + c = 0
    let b = -2.0 * m * ratio;
    let c = -one_minus * (m * m + 2.0 * shift) - m * m;
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        return Err(SpectralError::NegativeDiscriminant(disc));
    }
    let sq = disc.sqrt();
    let q = if b >= 0.0 {
        -0.5 * (b + sq)
    } else {
        -0.5 * (b - sq)
    };
    let (r1, r2) = if q == 0.0 {
        // b = 0 and disc = 0: double root at the origin
        (0.0, 0.0)
    } else {
        (q, c / q)
    };
    Ok(EnergyPair {
        e_plus: r1.max(r2),
        e_minus: r1.min(r2),
        k,
        discriminant: disc,
    })
}

/// Exact completion of the square of the energy quadratic.
///
/// Errors with [`SpectralError::NonPositiveOffset`] when the base of the
/// spectrum sits below validity (low `k + D/2`), and with
/// [`SpectralError::InvalidCouplings`] for `M = 0` (the recast divides by
/// `M^2`).
pub fn linear_form(
    params: &CouplingParams,
    d: u32,
    l: u32,
    variant: KVariant,
) -> Result<LinearSpectrum, SpectralError> {
    if params.mass <= 0.0 {
        return Err(SpectralError::InvalidCouplings(
            "linear recast requires a positive mass".into(),
        ));
    }
    if params.b_s <= 0.0 {
        return Err(SpectralError::InvalidCouplings(
            "closed-form levels require b_s > 0".into(),
        ));
    }
    let state = QuantumState::new(0, l, d, variant)?;
    let k = k_exponent(params, &state)?;
    let m2 = params.mass * params.mass;
    let ratio = params.b_v / params.b_s;
    let one_minus = 1.0 - ratio * ratio;
    let beta = params.beta();
    let offset = 2.0
        + (2.0 / m2)
            * one_minus
            * (params.a_v * params.b_v - params.a_s * params.b_s + (k + f64::from(d) / 2.0) * beta);
    let slope = (2.0 / m2) * one_minus * beta;
    if offset <= 0.0 {
        return Err(SpectralError::NonPositiveOffset(offset));
    }
    LinearSpectrum::new(offset, slope, ratio + offset.sqrt())
}

/// Outcome marker for one grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Ok,
    /// The `k` discriminant went negative.
    NoRealExponent,
    /// The energy discriminant went negative.
    NoRealEnergy,
}

impl CellStatus {
    pub fn tag(&self) -> &'static str {
        match self {
            CellStatus::Ok => "ok",
            CellStatus::NoRealExponent => "no-real-exponent",
            CellStatus::NoRealEnergy => "no-real-energy",
        }
    }
}

/// One `(n, l, D)` cell of a spectrum grid. Failed cells carry NaN energies
/// and a status marker instead of aborting the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub d: u32,
    pub n: u32,
    pub l: u32,
    pub variant: KVariant,
    pub k: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    pub status: CellStatus,
}

/// Reference-style grid: one row per `(n in 1..=n_max, l in 0..n, D in d_set)`,
/// emitted in deterministic `(n, l, D)` order.
///
/// # Panics
/// Panics if `n_max == 0`.
pub fn spectrum_table(
    params: &CouplingParams,
    d_set: &[u32],
    n_max: u32,
    variant: KVariant,
) -> Vec<TableRow> {
    assert!(n_max >= 1, "n_max must be >= 1");
    let mut rows = Vec::with_capacity(d_set.len() * (n_max as usize) * (n_max as usize + 1) / 2);
    for n in 1..=n_max {
        for l in 0..n {
            for &d in d_set {
                let state = QuantumState { n, l, d, variant };
                let row = match k_exponent(params, &state) {
                    Err(_) => TableRow {
                        d,
                        n,
                        l,
                        variant,
                        k: f64::NAN,
                        e_plus: f64::NAN,
                        e_minus: f64::NAN,
                        status: CellStatus::NoRealExponent,
                    },
                    Ok(k) => match energy_pair_with_k(params, &state, k) {
                        Ok(pair) => TableRow {
                            d,
                            n,
                            l,
                            variant,
                            k,
                            e_plus: pair.e_plus,
                            e_minus: pair.e_minus,
                            status: CellStatus::Ok,
                        },
                        Err(_) => TableRow {
                            d,
                            n,
                            l,
                            variant,
                            k,
                            e_plus: f64::NAN,
                            e_minus: f64::NAN,
                            status: CellStatus::NoRealEnergy,
                        },
                    },
                };
                rows.push(row);
            }
        }
    }
    rows
}

//! Core entropy and biaccessibility dimension of a rational angle.
//!
//! Three independent routes are exposed behind one report type:
//!
//! * **pair-matrix** — spectral radius of the transition matrix on
//!   postcritical angle pairs (works for every rational angle in [0, 1)),
//! * **kneading** — smallest positive zero of the truncated kneading
//!   determinant (real slice: angles in [0, 1/2] with admissible itinerary),
//! * **subshift** — box-counting estimate from survivor counts in the binary
//!   tree of preimages (real slice only; an estimate, not a certified value).
//!
//! For a growth rate λ the entropy is h = ln λ and the biaccessibility
//! dimension is B = log₂ λ; both are derived fields of the report.

use crate::error::{Error, Result};
use crate::exact_angle::{Angle, OrbitStructure};
use crate::kneading_det::{kneading_lambda, DEFAULT_TERMS};
use crate::symbolic::real_tree_survivors;
use crate::transition::build_pair_matrix;
use crate::spectral::growth_rate;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Default bracket tolerance on λ.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Default tree depth for the subshift (box-counting) route.
pub const DEFAULT_SUBSHIFT_DEPTH: u32 = 20;

/// Deepest dyadic grid accepted by [`graph_samples`].
pub const MAX_GRAPH_DEPTH: u32 = 26;

/// Cap on the number of samples a single [`graph_samples`] call may produce.
pub const MAX_GRAPH_SAMPLES: u64 = 1 << 20;

/// Computation route for [`core_entropy_with_method`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    PairMatrix,
    Kneading,
    Subshift,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::PairMatrix => "pair-matrix",
            Method::Kneading => "kneading",
            Method::Subshift => "subshift",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pair-matrix" => Ok(Method::PairMatrix),
            "kneading" => Ok(Method::Kneading),
            "subshift" => Ok(Method::Subshift),
            other => Err(Error::parse(format!(
                "unknown method '{other}' (expected pair-matrix, kneading, or subshift)"
            ))),
        }
    }
}

/// One computed angle: growth rate and its derived quantities.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct EntropyReport {
    pub theta: Angle,
    pub preperiod: u32,
    pub period: u32,
    /// Pair-basis dimension (0 for non-matrix routes and for θ = 0).
    pub matrix_dim: usize,
    /// Growth rate λ ∈ [1, 2].
    pub lambda: f64,
    /// Topological entropy h = ln λ.
    pub entropy: f64,
    /// Biaccessibility dimension B = log₂ λ.
    pub dimension: f64,
    pub method: Method,
    /// Work measure: ratio iterations (pair-matrix), series terms (kneading),
    /// or tree depth (subshift).
    pub iterations: u64,
}

fn report(
    theta: Angle,
    st: OrbitStructure,
    matrix_dim: usize,
    lambda: f64,
    method: Method,
    iterations: u64,
) -> EntropyReport {
    EntropyReport {
        theta,
        preperiod: st.preperiod,
        period: st.period,
        matrix_dim,
        lambda,
        entropy: lambda.ln(),
        dimension: lambda.log2(),
        method,
        iterations,
    }
}

/// Growth rate of θ via the pair-matrix route at the default tolerance.
pub fn core_entropy(theta: Angle) -> Result<EntropyReport> {
    core_entropy_with_tol(theta, DEFAULT_TOL)
}

/// Growth rate of θ via the pair-matrix route, λ certified to within `tol`.
///
/// θ = 0 short-circuits to λ = 1 (the critical value is fixed; entropy and
/// dimension are exactly 0). Otherwise λ is the spectral radius of the pair
/// transition matrix, clamped into its structural range [1, 2] so the
/// endpoint identities (λ = 2 at θ = 1/2, λ = 1 on satellite cycles) survive
/// the floating bracket midpoint.
pub fn core_entropy_with_tol(theta: Angle, tol: f64) -> Result<EntropyReport> {
    if theta.is_zero() {
        let st = theta.orbit_structure()?;
        return Ok(report(theta, st, 0, 1.0, Method::PairMatrix, 0));
    }
    let pm = build_pair_matrix(theta)?;
    let growth = growth_rate(pm.matrix(), tol)?;
    let lambda = growth.lambda.clamp(1.0, 2.0);
    Ok(report(
        theta,
        pm.orbit_structure(),
        pm.dim(),
        lambda,
        Method::PairMatrix,
        growth.iterations,
    ))
}

/// Growth rate of θ by the requested route.
///
/// The kneading and subshift routes are real-slice tools: they reject
/// θ > 1/2 (use the mirror angle 1 − θ, which has the same growth rate).
/// The kneading route additionally computes a value for non-admissible
/// angles in [0, 1/2]; callers that care should check admissibility
/// separately — the two routes provably diverge off the real slice.
pub fn core_entropy_with_method(theta: Angle, method: Method, tol: f64) -> Result<EntropyReport> {
    match method {
        Method::PairMatrix => core_entropy_with_tol(theta, tol),
        Method::Kneading => {
            reject_upper_half(theta, "kneading")?;
            let st = theta.orbit_structure()?;
            let kv = kneading_lambda(theta, DEFAULT_TERMS)?;
            Ok(report(
                theta,
                st,
                0,
                kv.lambda,
                Method::Kneading,
                DEFAULT_TERMS as u64,
            ))
        }
        Method::Subshift => {
            reject_upper_half(theta, "subshift")?;
            let st = theta.orbit_structure()?;
            let dim = dimension_estimate_real(theta, DEFAULT_SUBSHIFT_DEPTH)?;
            let lambda = 2f64.powf(dim);
            Ok(report(
                theta,
                st,
                0,
                lambda,
                Method::Subshift,
                DEFAULT_SUBSHIFT_DEPTH as u64,
            ))
        }
    }
}

fn reject_upper_half(theta: Angle, route: &str) -> Result<()> {
    if 2 * theta.numer() > theta.denom() {
        return Err(Error::domain(format!(
            "{route} route is defined on the real slice 0 ≤ θ ≤ 1/2; use the mirror angle {}",
            theta.mirror()
        )));
    }
    Ok(())
}

/// Box-counting dimension estimate log₂(survivors) / depth on the real slice.
///
/// Zero survivors report dimension 0. The estimate converges to log₂ λ as
/// depth grows but carries O(1/depth) bias; it is the cross-check route, not
/// a certified value.
pub fn dimension_estimate_real(theta: Angle, depth: u32) -> Result<f64> {
    let count = real_tree_survivors(theta, depth)?;
    if count == 0 {
        return Ok(0.0);
    }
    Ok((count as f64).log2() / depth as f64)
}

/// Growth rates for every dyadic k/2^depth inside [lo, hi], plus both
/// endpoints, in increasing angle order. Entries are deduplicated exactly.
///
/// Runs the pair-matrix route per sample; with the `parallel` feature the
/// samples are computed on the rayon pool.
pub fn graph_samples(lo: Angle, hi: Angle, depth: u32, tol: f64) -> Result<Vec<EntropyReport>> {
    if hi < lo {
        return Err(Error::domain("empty angle range: hi < lo"));
    }
    if depth > MAX_GRAPH_DEPTH {
        return Err(Error::budget(format!(
            "grid depth {depth} exceeds cap {MAX_GRAPH_DEPTH}"
        )));
    }
    let scale = 1u64 << depth;
    // k_min = ceil(lo·2^depth), k_max = floor(hi·2^depth), exact in u128
    let k_min = ((lo.numer() as u128 * scale as u128).div_ceil(lo.denom() as u128)) as u64;
    let k_max = ((hi.numer() as u128 * scale as u128) / hi.denom() as u128) as u64;
    if k_max >= k_min && k_max - k_min + 1 > MAX_GRAPH_SAMPLES {
        return Err(Error::budget(format!(
            "grid would hold {} samples, cap is {MAX_GRAPH_SAMPLES}",
            k_max - k_min + 1
        )));
    }
    let mut angles: BTreeSet<Angle> = BTreeSet::new();
    angles.insert(lo);
    angles.insert(hi);
    for k in k_min..=k_max {
        angles.insert(Angle::new(k, scale)?);
    }
    let angles: Vec<Angle> = angles.into_iter().collect();

    #[cfg(feature = "parallel")]
    let reports: Result<Vec<EntropyReport>> = angles
        .par_iter()
        .map(|&a| core_entropy_with_tol(a, tol))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let reports: Result<Vec<EntropyReport>> = angles
        .iter()
        .map(|&a| core_entropy_with_tol(a, tol))
        .collect();
    reports
}

/// Memoizing wrapper around the pair-matrix route at a fixed tolerance.
pub struct EntropyCache {
    tol: f64,
    map: Mutex<HashMap<Angle, EntropyReport>>,
}

impl EntropyCache {
    pub fn new(tol: f64) -> Self {
        EntropyCache {
            tol,
            map: Mutex::new(HashMap::new()),
        }
    }

    pub fn get(&self, theta: Angle) -> Result<EntropyReport> {
        if let Some(r) = self.map.lock().unwrap().get(&theta) {
            return Ok(*r);
        }
        let r = core_entropy_with_tol(theta, self.tol)?;
        self.map.lock().unwrap().insert(theta, r);
        Ok(r)
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Default for EntropyCache {
    fn default() -> Self {
        EntropyCache::new(DEFAULT_TOL)
    }
}

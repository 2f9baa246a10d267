//! Truncated kneading determinant on the real slice.
//!
//! For an angle θ ∈ [0, 1/2] with resolved kneading sequence ν₁ν₂…, the
//! determinant is the power series D(t) = Σ_{n≥0} ε_n tⁿ with ε₀ = +1 and
//! ε_n = (−1)^{#{i ≤ n : ν_i = One}}. Its smallest zero t* in (0, 1) is the
//! reciprocal of the growth rate: λ = 1/t*. A series with no zero in the
//! scan interval means zero entropy (λ = 1).
//!
//! This route is independent of the pair-matrix construction — it never sees
//! the orbit pairs — which is what makes the agreement check on admissible
//! angles meaningful. Off the real slice (non-admissible itineraries) the
//! two routes genuinely diverge; [`KneadingValue::admissible`] flags that.

use crate::error::{Error, Result};
use crate::exact_angle::Angle;
use crate::symbolic::{is_real_admissible, kneading_sequence, Symbol};

/// Default truncation order of the determinant series.
pub const DEFAULT_TERMS: usize = 200;

/// Upper end of the root scan; roots of the truncated series above this are
/// indistinguishable from truncation noise (the tail bound t^{N+1}/(1−t)
/// blows up as t → 1), so they are reported as "no root".
pub const SCAN_LIMIT: f64 = 0.95;

/// Result of a kneading-determinant evaluation.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct KneadingValue {
    /// Growth rate 1/t*, or exactly 1.0 when the series has no root in
    /// (0, [`SCAN_LIMIT`]].
    pub lambda: f64,
    /// Smallest root of the truncated series, when one exists.
    pub t_star: Option<f64>,
    /// Whether ν(θ) is realized by a real quadratic map; when false the
    /// kneading value need not match the pair-matrix growth rate.
    pub admissible: bool,
    /// Truncation order actually used.
    pub terms: usize,
}

/// Sign coefficients ε₀, …, ε_n of the kneading determinant.
///
/// ε₀ = +1 and each subsequent symbol flips the sign iff it is One (after
/// star resolution, so the sequence is a plain binary itinerary).
pub fn kneading_signs(theta: Angle, n: usize) -> Result<Vec<i8>> {
    if 2 * theta.numer() > theta.denom() {
        return Err(Error::domain(format!(
            "kneading determinant is defined on the real slice 0 ≤ θ ≤ 1/2; use the mirror angle {}",
            theta.mirror()
        )));
    }
    let nu = kneading_sequence(theta)?;
    let mut signs = Vec::with_capacity(n + 1);
    let mut sign = 1i8;
    signs.push(sign);
    for i in 0..n {
        if nu.resolved_entry(i) == Symbol::One {
            sign = -sign;
        }
        signs.push(sign);
    }
    Ok(signs)
}

/// Smallest positive root of the truncated kneading determinant and the
/// growth rate λ = 1/t* it encodes.
///
/// `terms` must be at least 4·(preperiod + period) so that the truncation
/// window sees the full eventually-periodic sign pattern several times over;
/// shorter series are rejected rather than silently under-resolved.
pub fn kneading_lambda(theta: Angle, terms: usize) -> Result<KneadingValue> {
    let st = theta.orbit_structure()?;
    let needed = 4 * st.orbit_len() as usize;
    if terms < needed {
        return Err(Error::domain(format!(
            "truncation too short: {terms} terms, need at least {needed} for preperiod {} + period {}",
            st.preperiod, st.period
        )));
    }
    let signs = kneading_signs(theta, terms)?;
    let nu = kneading_sequence(theta)?;
    let admissible = is_real_admissible(&nu);

    let eval = |t: f64| -> f64 {
        let mut acc = 0.0f64;
        for &s in signs.iter().rev() {
            acc = acc * t + s as f64;
        }
        acc
    };

    // ascending scan for the first sign change; D(0) = ε₀ = 1 > 0
    const STEPS: u32 = 1024;
    let mut t_prev = 0.0f64;
    let mut v_prev = 1.0f64;
    let mut bracket = None;
    for j in 1..=STEPS {
        let t = SCAN_LIMIT * j as f64 / STEPS as f64;
        let v = eval(t);
        if v == 0.0 {
            bracket = Some((t, t));
            break;
        }
        if v.is_sign_negative() != v_prev.is_sign_negative() {
            bracket = Some((t_prev, t));
            break;
        }
        t_prev = t;
        v_prev = v;
    }

    let t_star = bracket.map(|(mut a, mut b)| {
        if a == b {
            return a;
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid == a || mid == b {
                break;
            }
            let v = eval(mid);
            if v == 0.0 {
                return mid;
            }
            if v.is_sign_negative() == eval(a).is_sign_negative() {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    });

    Ok(KneadingValue {
        lambda: t_star.map_or(1.0, |t| 1.0 / t),
        t_star,
        admissible,
        terms,
    })
}

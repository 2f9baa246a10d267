//! Closed-form characteristic polynomial families and their asymptotics.
//!
//! Each family is a one- or two-parameter sequence of integer polynomials
//! whose largest root in [1, 2] is the growth rate of a specific sequence of
//! parameters (centers, α- and β-type preperiodic points) converging along a
//! vein. The catalog is exact; roots are isolated with sign-exact bisection,
//! so these values serve as independent oracles for the matrix route.
//!
//! As n grows, λ_n approaches the root λ₀ of the family's leading factor
//! geometrically: λ_n ≈ λ₀ ± K·λ₀^{-n}. [`fit_asymptotics`] estimates K over
//! a range of n and reports the drift of the estimate, which is small exactly
//! when the family really is in its geometric regime.

use crate::error::{Error, Result};
use crate::spectral::{largest_real_root, IntPolynomial};
use std::fmt;
use std::str::FromStr;

/// Largest n accepted for family construction (keeps bisection cheap).
pub const MAX_FAMILY_N: u32 = 256;

/// Identifier of a polynomial family.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
#[allow(non_camel_case_types)]
pub enum FamilyName {
    PrincipalBeta,
    PrincipalCenter,
    PrincipalAlpha,
    VeinCenter,
    VeinAlpha,
    RealCenter,
    RealAlpha,
    StefanOdd,
    StefanEven,
    X14Center,
    X14Alpha,
    X14Beta,
    X16Center,
    X16Alpha,
    X16Beta,
    X315Center,
    X315Alpha,
    X315Beta,
    X315Sublimb,
}

pub const ALL_FAMILIES: [FamilyName; 19] = [
    FamilyName::PrincipalBeta,
    FamilyName::PrincipalCenter,
    FamilyName::PrincipalAlpha,
    FamilyName::VeinCenter,
    FamilyName::VeinAlpha,
    FamilyName::RealCenter,
    FamilyName::RealAlpha,
    FamilyName::StefanOdd,
    FamilyName::StefanEven,
    FamilyName::X14Center,
    FamilyName::X14Alpha,
    FamilyName::X14Beta,
    FamilyName::X16Center,
    FamilyName::X16Alpha,
    FamilyName::X16Beta,
    FamilyName::X315Center,
    FamilyName::X315Alpha,
    FamilyName::X315Beta,
    FamilyName::X315Sublimb,
];

impl FamilyName {
    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyName::PrincipalBeta => "principal_beta",
            FamilyName::PrincipalCenter => "principal_center",
            FamilyName::PrincipalAlpha => "principal_alpha",
            FamilyName::VeinCenter => "vein_center",
            FamilyName::VeinAlpha => "vein_alpha",
            FamilyName::RealCenter => "real_center",
            FamilyName::RealAlpha => "real_alpha",
            FamilyName::StefanOdd => "stefan_odd",
            FamilyName::StefanEven => "stefan_even",
            FamilyName::X14Center => "x14_center",
            FamilyName::X14Alpha => "x14_alpha",
            FamilyName::X14Beta => "x14_beta",
            FamilyName::X16Center => "x16_center",
            FamilyName::X16Alpha => "x16_alpha",
            FamilyName::X16Beta => "x16_beta",
            FamilyName::X315Center => "x315_center",
            FamilyName::X315Alpha => "x315_alpha",
            FamilyName::X315Beta => "x315_beta",
            FamilyName::X315Sublimb => "x315_sublimb",
        }
    }

    /// Whether this family takes the q parameter.
    pub fn takes_q(&self) -> bool {
        matches!(
            self,
            FamilyName::PrincipalBeta
                | FamilyName::PrincipalCenter
                | FamilyName::PrincipalAlpha
                | FamilyName::VeinCenter
                | FamilyName::VeinAlpha
        )
    }

    /// Whether this family takes the n parameter.
    pub fn takes_n(&self) -> bool {
        !matches!(
            self,
            FamilyName::PrincipalBeta | FamilyName::PrincipalCenter | FamilyName::PrincipalAlpha
        )
    }

    /// Natural step of the n parameter (the spacing at which consecutive
    /// members exist with a correction term of constant sign).
    pub fn step(&self) -> u32 {
        match self {
            FamilyName::StefanOdd | FamilyName::StefanEven => 2,
            FamilyName::X16Center | FamilyName::X16Alpha | FamilyName::X16Beta => 2,
            FamilyName::X315Center
            | FamilyName::X315Alpha
            | FamilyName::X315Beta
            | FamilyName::X315Sublimb => 4,
            _ => 1,
        }
    }

    /// Residue class n must satisfy, as (modulus, residue); None = any n.
    fn residue(&self) -> Option<(u32, u32)> {
        match self {
            FamilyName::StefanOdd => Some((2, 1)),
            FamilyName::StefanEven => Some((2, 0)),
            FamilyName::X16Center | FamilyName::X16Alpha => Some((2, 1)),
            FamilyName::X16Beta => Some((2, 0)),
            FamilyName::X315Center | FamilyName::X315Alpha => Some((4, 3)),
            FamilyName::X315Beta => Some((4, 0)),
            FamilyName::X315Sublimb => Some((4, 2)),
            _ => None,
        }
    }

    /// Smallest valid n (given q for the vein families).
    fn min_n(&self, q: u32) -> u32 {
        match self {
            FamilyName::VeinCenter => q + 1,
            FamilyName::VeinAlpha => q,
            FamilyName::RealCenter => 3,
            FamilyName::RealAlpha => 2,
            FamilyName::StefanOdd => 3,
            FamilyName::StefanEven => 4,
            FamilyName::X14Center => 4,
            FamilyName::X14Alpha => 3,
            FamilyName::X14Beta => 4,
            FamilyName::X16Center => 5,
            FamilyName::X16Alpha => 3,
            FamilyName::X16Beta => 2,
            FamilyName::X315Center => 7,
            FamilyName::X315Alpha => 3,
            FamilyName::X315Beta => 4,
            FamilyName::X315Sublimb => 2,
            _ => 0,
        }
    }

    /// Leading factor whose largest root is the family's limit growth λ₀.
    /// The principal families are the leading factors themselves and have
    /// no limit along n, so they return None.
    fn leading_factor(&self, q: u32) -> Option<IntPolynomial> {
        let coeffs: Vec<i64> = match self {
            FamilyName::PrincipalBeta | FamilyName::PrincipalCenter | FamilyName::PrincipalAlpha => {
                return None
            }
            // the vein's β-polynomial x^q − x^{q−1} − 2
            FamilyName::VeinCenter | FamilyName::VeinAlpha => {
                let mut c = vec![0i64; q as usize + 1];
                c[0] = -2;
                c[q as usize - 1] = -1;
                c[q as usize] = 1;
                c
            }
            FamilyName::RealCenter | FamilyName::RealAlpha => vec![-2, 1],
            FamilyName::StefanOdd | FamilyName::StefanEven => vec![-2, 0, 1],
            FamilyName::X14Center | FamilyName::X14Alpha | FamilyName::X14Beta => {
                vec![-2, 0, -1, 1]
            }
            FamilyName::X16Center | FamilyName::X16Alpha | FamilyName::X16Beta => {
                vec![-2, -1, 0, 1]
            }
            FamilyName::X315Center
            | FamilyName::X315Alpha
            | FamilyName::X315Beta
            | FamilyName::X315Sublimb => vec![-1, -2, 0, 0, 1],
        };
        Some(IntPolynomial::from_i64(&coeffs))
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ALL_FAMILIES
            .iter()
            .find(|f| f.as_str() == s)
            .copied()
            .ok_or_else(|| Error::parse(format!("unknown family '{s}'")))
    }
}

/// A fully parameterized member of a family.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub name: FamilyName,
    pub q: Option<u32>,
    pub n: Option<u32>,
}

impl FamilySpec {
    /// Validates parameter presence, ranges, and residue constraints.
    pub fn new(name: FamilyName, q: Option<u32>, n: Option<u32>) -> Result<Self> {
        let q_val = match (name.takes_q(), q) {
            (true, Some(q)) if q >= 2 => q,
            (true, Some(q)) => {
                return Err(Error::domain(format!("{name}: q must be at least 2, got {q}")))
            }
            (true, None) => return Err(Error::domain(format!("{name}: missing parameter q"))),
            (false, Some(_)) => {
                return Err(Error::domain(format!("{name}: takes no q parameter")))
            }
            (false, None) => 0,
        };
        match (name.takes_n(), n) {
            (true, Some(n)) => {
                let min = name.min_n(q_val);
                if n < min {
                    return Err(Error::domain(format!(
                        "{name}: n must be at least {min}, got {n}"
                    )));
                }
                if n > MAX_FAMILY_N {
                    return Err(Error::budget(format!(
                        "{name}: n = {n} exceeds cap {MAX_FAMILY_N}"
                    )));
                }
                if let Some((m, r)) = name.residue() {
                    if n % m != r {
                        return Err(Error::domain(format!(
                            "{name}: n must be ≡ {r} (mod {m}), got {n}"
                        )));
                    }
                }
            }
            (true, None) => return Err(Error::domain(format!("{name}: missing parameter n"))),
            (false, Some(_)) => {
                return Err(Error::domain(format!("{name}: takes no n parameter")))
            }
            (false, None) => {}
        }
        Ok(FamilySpec { name, q, n })
    }
}

fn add_term(coeffs: &mut Vec<i64>, exp: u32, c: i64) {
    let exp = exp as usize;
    if coeffs.len() <= exp {
        coeffs.resize(exp + 1, 0);
    }
    coeffs[exp] += c;
}

/// The exact integer polynomial of a family member.
pub fn family_polynomial(spec: &FamilySpec) -> Result<IntPolynomial> {
    let spec = FamilySpec::new(spec.name, spec.q, spec.n)?; // re-validate
    let q = spec.q.unwrap_or(0);
    let n = spec.n.unwrap_or(0);
    let mut c: Vec<i64> = Vec::new();
    match spec.name {
        FamilyName::PrincipalBeta => {
            add_term(&mut c, q, 1);
            add_term(&mut c, q - 1, -1);
            add_term(&mut c, 0, -2);
        }
        FamilyName::PrincipalCenter => {
            add_term(&mut c, q + 1, 1);
            add_term(&mut c, 1, -2);
            add_term(&mut c, 0, -1);
        }
        FamilyName::PrincipalAlpha => {
            add_term(&mut c, q, 1);
            add_term(&mut c, 0, -2);
        }
        FamilyName::VeinCenter => {
            add_term(&mut c, n + 1, 1);
            add_term(&mut c, n, -1);
            add_term(&mut c, n + 1 - q, -2);
            add_term(&mut c, 1, 1);
            add_term(&mut c, 0, 1);
        }
        FamilyName::VeinAlpha => {
            add_term(&mut c, n + 1, 1);
            add_term(&mut c, n, -1);
            add_term(&mut c, n + 1 - q, -2);
            add_term(&mut c, 0, 2);
        }
        FamilyName::RealCenter => {
            add_term(&mut c, n, 1);
            add_term(&mut c, n - 1, -2);
            add_term(&mut c, 0, 1);
        }
        FamilyName::RealAlpha => {
            add_term(&mut c, n + 1, 1);
            add_term(&mut c, n, -1);
            add_term(&mut c, n - 1, -2);
            add_term(&mut c, 0, 2);
        }
        FamilyName::StefanOdd => {
            add_term(&mut c, n, 1);
            add_term(&mut c, n - 2, -2);
            add_term(&mut c, 0, -1);
        }
        FamilyName::StefanEven => {
            add_term(&mut c, n, 1);
            add_term(&mut c, n - 2, -2);
            add_term(&mut c, 0, 1);
        }
        FamilyName::X14Center | FamilyName::X14Alpha | FamilyName::X14Beta => {
            // x^{n−2}·(x³ − x² − 2) + tail
            let e = n - 2;
            add_term(&mut c, e + 3, 1);
            add_term(&mut c, e + 2, -1);
            add_term(&mut c, e, -2);
            match spec.name {
                FamilyName::X14Center => {
                    add_term(&mut c, 1, 1);
                    add_term(&mut c, 0, 1);
                }
                FamilyName::X14Alpha => add_term(&mut c, 0, 2),
                _ => {
                    add_term(&mut c, 1, 2);
                    add_term(&mut c, 0, -2);
                }
            }
        }
        FamilyName::X16Center | FamilyName::X16Alpha | FamilyName::X16Beta => {
            // x^{n−1}·(x³ − x − 2) + tail
            let e = n - 1;
            add_term(&mut c, e + 3, 1);
            add_term(&mut c, e + 1, -1);
            add_term(&mut c, e, -2);
            match spec.name {
                FamilyName::X16Center => {
                    add_term(&mut c, 2, 1);
                    add_term(&mut c, 0, 1);
                }
                FamilyName::X16Alpha => add_term(&mut c, 0, 2),
                _ => add_term(&mut c, 0, -2),
            }
        }
        FamilyName::X315Center | FamilyName::X315Alpha | FamilyName::X315Beta => {
            // x^n·(x⁴ − 2x − 1) + tail
            add_term(&mut c, n + 4, 1);
            add_term(&mut c, n + 1, -2);
            add_term(&mut c, n, -1);
            match spec.name {
                FamilyName::X315Center => {
                    add_term(&mut c, 4, 1);
                    add_term(&mut c, 0, 1);
                }
                FamilyName::X315Alpha => add_term(&mut c, 0, 2),
                _ => {
                    add_term(&mut c, 3, -2);
                    add_term(&mut c, 2, -2);
                    add_term(&mut c, 0, -2);
                }
            }
        }
        FamilyName::X315Sublimb => {
            // x^n·(x − 1)·(x⁴ − 2x − 1) − 2(x² + 1);
            // (x − 1)(x⁴ − 2x − 1) = x⁵ − x⁴ − 2x² + x + 1
            add_term(&mut c, n + 5, 1);
            add_term(&mut c, n + 4, -1);
            add_term(&mut c, n + 2, -2);
            add_term(&mut c, n + 1, 1);
            add_term(&mut c, n, 1);
            add_term(&mut c, 2, -2);
            add_term(&mut c, 0, -2);
        }
    }
    Ok(IntPolynomial::from_i64(&c))
}

/// Largest real root in [1, 2] of the family member's polynomial, to 1e−12.
pub fn family_growth(spec: &FamilySpec) -> Result<f64> {
    let p = family_polynomial(spec)?;
    largest_real_root(&p, 1.0, 2.0, 1e-12)
}

/// Limit growth rate λ₀ of the family (largest root of its leading factor).
/// Errors for the principal families, which have no n to take a limit in.
pub fn family_limit(name: FamilyName, q: Option<u32>) -> Result<f64> {
    if name.takes_q() {
        match q {
            Some(q) if q >= 2 => {}
            _ => return Err(Error::domain(format!("{name}: needs q ≥ 2 for its limit"))),
        }
    } else if q.is_some() {
        return Err(Error::domain(format!("{name}: takes no q parameter")));
    }
    let factor = name
        .leading_factor(q.unwrap_or(0))
        .ok_or_else(|| Error::domain(format!("{name}: no asymptotic limit (no n parameter)")))?;
    largest_real_root(&factor, 1.0, 2.0, 1e-13)
}

/// Result of fitting λ_n ≈ λ₀ ± K·λ₀^{-n} over a range of n.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AsymptoticsFit {
    /// Limit growth rate (largest root of the leading factor).
    pub lambda0: f64,
    /// Estimated geometric constant K (mean of |λ₀ − λ_n|·λ₀ⁿ).
    pub k: f64,
    /// Relative change of the K estimate across the range; small when the
    /// family is genuinely in its geometric regime.
    pub drift: f64,
    /// Number of family members used.
    pub samples: usize,
}

/// Drift above this fraction means the correction is not geometric over the
/// requested range and the fit is rejected.
pub const DRIFT_THRESHOLD: f64 = 0.5;

/// Fits the geometric asymptotics of a family over n ∈ [lo, hi].
///
/// Members are taken at the family's natural step starting from the first
/// valid n ≥ lo; at least 5 members must fit in the range. The sign of
/// λ_n − λ₀ must be constant across the range, and the K estimate must not
/// drift by more than [`DRIFT_THRESHOLD`] of its mean.
pub fn fit_asymptotics(
    name: FamilyName,
    q: Option<u32>,
    lo: u32,
    hi: u32,
) -> Result<AsymptoticsFit> {
    if !name.takes_n() {
        return Err(Error::domain(format!(
            "{name}: no n parameter, nothing to fit"
        )));
    }
    let lambda0 = family_limit(name, q)?;
    let q_val = q.unwrap_or(0);

    // first n ≥ max(lo, structural minimum) in the family's residue class
    let mut start = lo.max(name.min_n(q_val));
    if let Some((m, r)) = name.residue() {
        while start % m != r {
            start += 1;
        }
    }
    let step = name.step();
    let mut corrections: Vec<f64> = Vec::new();
    let mut sign: Option<bool> = None;
    let mut n = start;
    while n <= hi {
        let spec = FamilySpec::new(name, q, Some(n))?;
        let lambda_n = family_growth(&spec)?;
        let diff = lambda_n - lambda0;
        let positive = diff > 0.0;
        match sign {
            None => sign = Some(positive),
            Some(s) if s != positive => {
                return Err(Error::domain(format!(
                    "{name}: sign of λ_n − λ₀ flips inside the range at n = {n}"
                )))
            }
            _ => {}
        }
        corrections.push(diff.abs() * lambda0.powi(n as i32));
        n += step;
    }
    if corrections.len() < 5 {
        return Err(Error::domain(format!(
            "{name}: range [{lo}, {hi}] holds only {} members at step {step}; need 5",
            corrections.len()
        )));
    }
    let k = corrections.iter().sum::<f64>() / corrections.len() as f64;
    let drift = (corrections.last().unwrap() - corrections.first().unwrap()).abs() / k;
    if drift > DRIFT_THRESHOLD {
        return Err(Error::domain(format!(
            "{name}: K estimate drifts by {drift:.3} over the range; correction is not geometric"
        )));
    }
    Ok(AsymptoticsFit {
        lambda0,
        k,
        drift,
        samples: corrections.len(),
    })
}

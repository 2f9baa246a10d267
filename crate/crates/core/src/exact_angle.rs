//! Exact rational angles on the circle and the doubling map.
//!
//! Angles are reduced fractions num/den ∈ [0, 1) stored in machine words; all
//! arithmetic (doubling, mirroring, binary expansion, tuning substitution) is
//! exact. Denominators are capped at 2^62 so that every internal product fits
//! in u128 without overflow checks in hot loops.

use crate::error::{Error, Result};
use num_integer::Integer;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// Largest permitted denominator (keeps doubling/comparison arithmetic exact).
pub const MAX_DENOMINATOR: u64 = 1 << 62;

/// Longest orbit (preperiod + period) the library will materialize.
pub const MAX_ORBIT: u64 = 1 << 22;

/// A rational angle θ ∈ [0, 1), stored as a reduced fraction.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Angle {
    num: u64,
    den: u64,
}

/// Preperiod and period of an angle under the doubling map.
///
/// `preperiod` is the 2-adic valuation of the denominator; `period` is the
/// multiplicative order of 2 modulo its odd part (1 when the odd part is 1,
/// so dyadic angles have period 1 — their orbit ends at the fixed angle 0).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct OrbitStructure {
    pub preperiod: u32,
    pub period: u32,
}

impl OrbitStructure {
    /// Number of distinct points on the forward orbit of the angle itself:
    /// preperiod + period.
    pub fn orbit_len(&self) -> u32 {
        self.preperiod + self.period
    }
}

impl Angle {
    /// The fixed angle 0.
    pub const ZERO: Angle = Angle { num: 0, den: 1 };

    /// Builds the reduced angle (num mod den)/den.
    ///
    /// Values ≥ 1 are wrapped around the circle. Errors on a zero denominator
    /// or a denominator beyond the desk-scale cap.
    pub fn new(num: u64, den: u64) -> Result<Angle> {
        if den == 0 {
            return Err(Error::parse("zero denominator"));
        }
        if den > MAX_DENOMINATOR {
            return Err(Error::budget(format!(
                "denominator {den} exceeds cap {MAX_DENOMINATOR}"
            )));
        }
        let num = num % den;
        let g = num.gcd(&den);
        Ok(Angle {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// True when the denominator is a power of two (orbit falls onto 0).
    pub fn is_dyadic(&self) -> bool {
        self.den.is_power_of_two() && self.num != 0
    }

    /// True when θ is periodic under doubling (odd denominator, θ ≠ 0).
    pub fn is_periodic(&self) -> bool {
        self.den % 2 == 1 && self.num != 0
    }

    /// Image under the doubling map F(θ) = 2θ mod 1.
    pub fn double(&self) -> Angle {
        let num = 2 * self.num % self.den; // den ≤ 2^62 so 2·num fits
        let g = num.gcd(&self.den);
        Angle {
            num: num / g,
            den: self.den / g,
        }
    }

    /// The mirrored angle 1 − θ (complex conjugation of rays); 0 ↦ 0.
    pub fn mirror(&self) -> Angle {
        if self.num == 0 {
            Angle::ZERO
        } else {
            Angle {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }

    /// The two preimages θ/2 and (θ+1)/2 of θ under doubling. These bound the
    /// partition arcs used for itineraries and kneading sequences.
    pub fn halves(&self) -> (Angle, Angle) {
        let den = 2 * self.den;
        let mk = |num: u64| {
            let g = num.gcd(&den);
            Angle {
                num: num / g,
                den: den / g,
            }
        };
        (mk(self.num), mk(self.num + self.den))
    }

    /// Distance to the nearest integer, as an exact fraction (num, den).
    pub fn circle_norm(&self) -> (u64, u64) {
        (self.num.min(self.den - self.num), self.den)
    }

    /// f64 value of the angle (for reporting only; exact paths never use it).
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Preperiod and period under doubling.
    ///
    /// Errors with a budget failure when the period exceeds [`MAX_ORBIT`]
    /// (possible for adversarial denominators; all cataloged computations stay
    /// far below the cap).
    pub fn orbit_structure(&self) -> Result<OrbitStructure> {
        let preperiod = self.den.trailing_zeros();
        let odd = self.den >> preperiod;
        if odd == 1 {
            return Ok(OrbitStructure {
                preperiod,
                period: 1,
            });
        }
        let mut x: u64 = 2 % odd;
        let mut period: u64 = 1;
        while x != 1 {
            x = ((2u128 * x as u128) % odd as u128) as u64;
            period += 1;
            if period > MAX_ORBIT {
                return Err(Error::budget(format!(
                    "period of 2 mod {odd} exceeds orbit cap {MAX_ORBIT}"
                )));
            }
        }
        Ok(OrbitStructure {
            preperiod,
            period: period as u32,
        })
    }

    /// The forward orbit θ, F(θ), …, F^{k+p−1}(θ) (all distinct points).
    pub fn orbit(&self) -> Result<Vec<Angle>> {
        let os = self.orbit_structure()?;
        let len = os.orbit_len() as usize;
        let mut out = Vec::with_capacity(len);
        let mut a = *self;
        for _ in 0..len {
            out.push(a);
            a = a.double();
        }
        Ok(out)
    }

    /// Binary expansion as (preperiod word, period word).
    ///
    /// The period word is empty for dyadic angles and for 0 (terminating
    /// expansion): 1/4 ↦ ("01", ""), 9/56 ↦ ("001", "010"), 1/5 ↦ ("", "0011").
    pub fn to_binary(&self) -> Result<(String, String)> {
        let os = self.orbit_structure()?;
        if os.orbit_len() as u64 > 128 * 1024 {
            return Err(Error::budget("binary expansion longer than 128Ki digits"));
        }
        let digit_count = if self.den % 2 == 1 && self.num != 0 {
            // purely periodic
            (0, os.period)
        } else if self.den.is_power_of_two() {
            (os.preperiod, 0) // terminating; includes θ = 0 → ("", "")
        } else {
            (os.preperiod, os.period)
        };
        let mut x = *self;
        let mut take = |n: u32| {
            let mut w = String::with_capacity(n as usize);
            for _ in 0..n {
                let bit = 2 * x.num >= x.den;
                w.push(if bit { '1' } else { '0' });
                x = x.double();
            }
            w
        };
        let pre = take(digit_count.0);
        let per = take(digit_count.1);
        Ok((pre, per))
    }

    /// Angle with binary expansion 0.pre(per); `per` empty means terminating.
    pub fn from_binary(pre: &str, per: &str) -> Result<Angle> {
        let read = |w: &str| -> Result<u64> {
            let mut v: u64 = 0;
            for c in w.chars() {
                let bit = match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::parse(format!("invalid binary digit {c:?}"))),
                };
                v = v
                    .checked_mul(2)
                    .and_then(|v| v.checked_add(bit))
                    .ok_or_else(|| Error::budget("binary word too long"))?;
            }
            Ok(v)
        };
        let l = pre.len() as u32;
        let p = per.len() as u32;
        if l + p > 62 {
            return Err(Error::budget("binary expansion longer than 62 digits"));
        }
        let pre_val = read(pre)?;
        let per_val = read(per)?;
        if p == 0 {
            return Angle::new(pre_val, 1u64 << l);
        }
        let per_den = (1u64 << p) - 1;
        // value = (pre·(2^p − 1) + per) / (2^l · (2^p − 1))
        let num = pre_val * per_den + per_val;
        let den = (1u64 << l) * per_den;
        Angle::new(num, den)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        // cross-multiply in u128: num, den < 2^62
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl FromStr for Angle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Angle> {
        parse_angle(s)
    }
}

/// Parses an angle from text.
///
/// Accepted grammar: `INT "/" INT` (fraction, reduced mod 1), `0b.BITS`
/// (terminating binary expansion), `0b.BITS(BITS)` / `0b.(BITS)` (eventually
/// periodic binary expansion), or a bare `INT` (wrapped mod 1, so `0` and `1`
/// both denote the fixed angle).
pub fn parse_angle(text: &str) -> Result<Angle> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::parse("empty angle"));
    }
    if let Some(rest) = s.strip_prefix("0b.") {
        let (pre, per) = match rest.find('(') {
            None => (rest, ""),
            Some(i) => {
                let per = rest[i + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::parse(format!("unterminated period in {s:?}")))?;
                if per.is_empty() {
                    return Err(Error::parse(format!("empty period word in {s:?}")));
                }
                (&rest[..i], per)
            }
        };
        if pre.is_empty() && per.is_empty() {
            return Err(Error::parse(format!("no digits in {s:?}")));
        }
        return Angle::from_binary(pre, per);
    }
    let parse_int = |t: &str| -> Result<u64> {
        t.parse::<u64>()
            .map_err(|e| Error::parse(format!("invalid integer {t:?}: {e}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let num = parse_int(n)?;
            let den = parse_int(d)?;
            if den == 0 {
                return Err(Error::parse("zero denominator"));
            }
            Angle::new(num, den)
        }
        None => {
            let _ = parse_int(s)?;
            Ok(Angle::ZERO) // every integer is ≡ 0 on the circle
        }
    }
}

/// Douady tuning as binary-digit substitution.
///
/// Rewrites the binary expansion of θ digit-by-digit, 0 ↦ `w_minus`,
/// 1 ↦ `w_plus`, and returns the resulting angle. The two words must have
/// equal length ≥ 2 (they are the two expansions of a periodic window's
/// boundary pair, e.g. ("01","10") for the period-2 window).
pub fn tune_angle(w_minus: &str, w_plus: &str, theta: Angle) -> Result<Angle> {
    if w_minus.len() != w_plus.len() {
        return Err(Error::domain("tuning words must have equal length"));
    }
    if w_minus.len() < 2 {
        return Err(Error::domain("tuning words must have length ≥ 2"));
    }
    for w in [w_minus, w_plus] {
        if !w.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::parse(format!("invalid binary word {w:?}")));
        }
    }
    let (pre, per) = theta.to_binary()?;
    let substitute = |word: &str| -> String {
        word.chars()
            .map(|c| if c == '1' { w_plus } else { w_minus })
            .collect()
    };
    // A terminating expansion continues with 0s forever, and each of those
    // substitutes to w_minus: the tuned angle has period word w_minus.
    let tuned_per = if per.is_empty() {
        w_minus.to_string()
    } else {
        substitute(&per)
    };
    Angle::from_binary(&substitute(&pre), &tuned_per)
}

//! Itineraries and kneading sequences with respect to the angle partition,
//! real-admissibility, and the real angle-tree subshift used as an
//! independent dimension oracle.
//!
//! The circle is cut at the two preimages {θ/2, (θ+1)/2} of an angle θ. The
//! arc strictly between them (the one containing θ) carries symbol `1`, the
//! complementary arc carries `0`, and the two boundary points themselves
//! carry `*`. The kneading sequence ν(θ) is the itinerary of θ itself; it
//! hits a boundary point exactly when θ is periodic (at the last orbit point),
//! so ν is ∗-periodic for centers and star-free otherwise.

use crate::error::{Error, Result};
use crate::exact_angle::Angle;
use std::fmt;

/// Itinerary symbol for the partition by {θ/2, (θ+1)/2}.
///
/// The derived order (Zero < One < Star) is only for use as a map key; the
/// admissibility order on symbols is a different one (see
/// [`is_real_admissible`]).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
    Star,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbol::Zero => "0",
            Symbol::One => "1",
            Symbol::Star => "*",
        })
    }
}

/// Symbol of a single point φ with respect to the θ-partition.
fn symbol_of(phi: Angle, theta: Angle) -> Symbol {
    let (b1, b2) = theta.halves();
    if phi == b1 || phi == b2 {
        Symbol::Star
    } else if b1 < phi && phi < b2 {
        Symbol::One
    } else {
        Symbol::Zero
    }
}

/// An eventually periodic kneading sequence in normal form.
///
/// `pre` and `per` hold the preperiodic and periodic symbol blocks. For
/// ∗-periodic sequences (periodic θ) the star sits at the end of `per` and
/// `resolution` records the symbol obtained in the limit from nearby
/// non-periodic angles (the boundary point (θ+1)/2 resolves to `1`, the point
/// θ/2 to `0`). Star-free sequences are normalized: `per` is primitive and
/// `pre` is as short as possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KneadingSequence {
    pre: Vec<Symbol>,
    per: Vec<Symbol>,
    resolution: Option<Symbol>,
}

impl KneadingSequence {
    pub fn preperiod(&self) -> usize {
        self.pre.len()
    }

    pub fn period(&self) -> usize {
        self.per.len()
    }

    pub fn preperiodic_part(&self) -> &[Symbol] {
        &self.pre
    }

    pub fn periodic_part(&self) -> &[Symbol] {
        &self.per
    }

    /// True when the sequence ends in a repeating ∗ (θ periodic).
    pub fn is_star_periodic(&self) -> bool {
        self.resolution.is_some()
    }

    /// The symbol the trailing ∗ resolves to, when present.
    pub fn star_resolution(&self) -> Option<Symbol> {
        self.resolution
    }

    /// Raw entry at 0-based position i (may be `*`).
    pub fn entry(&self, i: usize) -> Symbol {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    /// Entry at position i with ∗ replaced by its resolution.
    pub fn resolved_entry(&self, i: usize) -> Symbol {
        match self.entry(i) {
            Symbol::Star => self.resolution.expect("star implies resolution"),
            s => s,
        }
    }

    /// ASCII rendering `pre|(per)`, e.g. "1|(0)", "10|(1)", "(10*)".
    pub fn render(&self) -> String {
        let mut s = String::new();
        for sym in &self.pre {
            s.push_str(&sym.to_string());
        }
        if !self.pre.is_empty() {
            s.push('|');
        }
        s.push('(');
        for sym in &self.per {
            s.push_str(&sym.to_string());
        }
        s.push(')');
        s
    }
}

impl fmt::Display for KneadingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// First `n` symbols of the itinerary of φ under doubling, with respect to
/// the θ-partition. Stars may appear anywhere (whenever the orbit of φ hits a
/// boundary point).
pub fn itinerary(phi: Angle, theta: Angle, n: usize) -> Vec<Symbol> {
    let mut out = Vec::with_capacity(n);
    let mut x = phi;
    for _ in 0..n {
        out.push(symbol_of(x, theta));
        x = x.double();
    }
    out
}

/// The kneading sequence ν(θ): itinerary of θ itself, in normal form.
pub fn kneading_sequence(theta: Angle) -> Result<KneadingSequence> {
    let os = theta.orbit_structure()?;
    let (k, p) = (os.preperiod as usize, os.period as usize);
    let orbit = theta.orbit()?;
    let symbols: Vec<Symbol> = orbit.iter().map(|&a| symbol_of(a, theta)).collect();

    // A boundary hit means the next double is θ itself, which happens exactly
    // at the last orbit point of a periodic angle (and at θ = 0).
    let star_at = symbols.iter().position(|&s| s == Symbol::Star);
    if let Some(pos) = star_at {
        debug_assert_eq!(pos, k + p - 1, "star can only occur at the last orbit point");
        debug_assert_eq!(k, 0, "star implies a periodic angle");
        let (b1, b2) = theta.halves();
        let hit = orbit[pos];
        let resolution = if hit == b2 { Symbol::One } else { Symbol::Zero };
        debug_assert!(hit == b1 || hit == b2);
        return Ok(KneadingSequence {
            pre: Vec::new(),
            per: symbols,
            resolution: Some(resolution),
        });
    }

    let mut pre = symbols[..k].to_vec();
    let mut per = symbols[k..].to_vec();
    // primitive period
    for d in 1..=p {
        if p % d == 0 && (0..p).all(|i| per[i] == per[i % d]) {
            per.truncate(d);
            break;
        }
    }
    // minimal preperiod
    while let Some(&last) = pre.last() {
        if last == *per.last().expect("period nonempty") {
            pre.pop();
            per.rotate_right(1);
        } else {
            break;
        }
    }
    Ok(KneadingSequence {
        pre,
        per,
        resolution: None,
    })
}

/// Shift-maximality test in the parity-twisted (unimodal) order.
///
/// A kneading sequence is realized by a real quadratic polynomial exactly
/// when it is maximal among all its shifts in the order where, at the first
/// differing position, the larger symbol wins iff the number of `1`s in the
/// common prefix is even. Ties (a shift equal to the sequence) are allowed.
///
/// A ∗-periodic sequence is compared with the star kept in place, ranked
/// between the plain symbols: 0 < ∗ < 1. This is what separates words of
/// real superstable windows from their complex lookalikes — e.g. 1 0 ∗ (the
/// real period-3 window) is maximal, while 1 1 ∗ (the rabbit, whose resolved
/// form 111… would pass a resolved-only test by ties) loses to its first
/// shift at the star and is correctly rejected. Star-free sequences use the
/// same comparison; their symbols are plain 0/1.
pub fn is_real_admissible(nu: &KneadingSequence) -> bool {
    // rank in the untwisted symbol order 0 < ∗ < 1
    fn rank(s: Symbol) -> u8 {
        match s {
            Symbol::Zero => 0,
            Symbol::Star => 1,
            Symbol::One => 2,
        }
    }
    let k = nu.preperiod();
    let p = nu.period();
    let entry = |i: usize| -> Symbol {
        if nu.is_star_periodic() {
            nu.entry(i)
        } else {
            nu.resolved_entry(i)
        }
    };
    // Both ν and any shift are eventually periodic with preperiod ≤ k and
    // period p, so agreement on k + 2p + 2 entries implies equality. (In the
    // ∗-periodic case stars of distinct shifts never align, forcing a
    // difference within one period; the same horizon covers it.)
    let horizon = (k + 2 * p + 2) as usize;
    for shift in 1..=((k + p) as usize) {
        let mut ones_even = true;
        for i in 0..horizon {
            let s = entry(i);
            let t = entry(i + shift);
            if s != t {
                // ν must win: its symbol must be the larger one (even
                // parity) or the smaller one (odd parity)
                let wins = if ones_even {
                    rank(s) > rank(t)
                } else {
                    rank(s) < rank(t)
                };
                if !wins {
                    return false;
                }
                break;
            }
            if s == Symbol::One {
                ones_even = !ones_even;
            }
        }
    }
    true
}

/// Maximum depth accepted by [`real_tree_survivors`] (the scan enumerates
/// 2^depth words).
pub const MAX_SURVIVOR_DEPTH: u32 = 30;

/// Counts the binary words w of length `depth` whose periodic continuation
/// w^∞ — equivalently, the period-`depth` angle φ = j/(2^depth − 1) with j
/// the value of w — keeps its entire doubling orbit within ‖F^n(φ)‖ ≤ ‖θ‖
/// (closed inequality, exact integer arithmetic). Because φ is periodic with
/// period dividing `depth`, the first `depth` steps certify the full infinite
/// orbit: the count is the number of period-`depth` points on the real angle
/// tree, which grows as λ(θ)^depth.
///
/// The constant in front of λ^depth is 1 for mixing trees (θ = 1/2 gives
/// exactly 2^depth — the constraint is vacuous) but equals the spectral
/// imprimitivity on period-doubled trees: θ = 5/12 counts 2·√2^depth words
/// at even depths and only the two fixed words at odd depths.
pub fn real_tree_survivors(theta: Angle, depth: u32) -> Result<u64> {
    if theta.is_zero() || 2 * theta.numer() > theta.denom() {
        return Err(Error::domain(format!(
            "survivor counting needs 0 < θ ≤ 1/2, got {theta}"
        )));
    }
    if !is_real_admissible(&kneading_sequence(theta)?) {
        return Err(Error::domain(format!("{theta} is not real-admissible")));
    }
    if depth == 0 || depth > MAX_SURVIVOR_DEPTH {
        return Err(Error::domain(format!(
            "depth must be in 1..={MAX_SURVIVOR_DEPTH}, got {depth}"
        )));
    }
    let m: u64 = (1 << depth) - 1;
    // survive ⟺ min(x, m−x)·den ≤ num·m at every step (θ ≤ 1/2 so ‖θ‖ = θ)
    let rhs = theta.numer() as u128 * m as u128;
    let den = theta.denom() as u128;
    let survives = |word: u64| -> bool {
        let mut x = word % m.max(1); // the all-ones word is the angle 0
        for _ in 0..depth {
            let norm = x.min(m - x);
            if norm as u128 * den > rhs {
                return false;
            }
            x = (x << 1) % m;
        }
        true
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        Ok((0..=m).into_par_iter().filter(|&w| survives(w)).count() as u64)
    }
    #[cfg(not(feature = "parallel"))]
    Ok((0..=m).filter(|&w| survives(w)).count() as u64)
}

//! Galois-conjugate root clouds of growth polynomials.
//!
//! Three nested coefficient classes are enumerated exactly:
//!
//! * **M0** — monic with constant term ±1 and middle coefficients in
//!   {−1, 0, 1}: the ambient class, closed under coefficient reversal, so its
//!   root set is invariant under z ↦ 1/z and pinched into the annulus
//!   1/2 ≤ |z| ≤ 2.
//! * **M1** — monic with every coefficient ±1.
//! * **M2** — the polynomials of real superstable windows: for an admissible
//!   ∗-periodic kneading word ν₁…ν_{n−1}∗ the recursion x₁ = −1,
//!   x_{k+1} = ε(ν_k)·λ·x_k − 1 (ε(One) = −1, ε(Zero) = +1) produces a
//!   degree n−1 polynomial in λ whose largest real root is the window's
//!   growth rate. Every M2 polynomial has coefficients ±1, so M2 ⊆ M1.
//!
//! Roots are located on the square-free part of each polynomial (so multiple
//! roots cost no accuracy) with the Aberth–Ehrlich simultaneous iteration
//! plus a Newton polish, and every computed root is certified against the
//! residual bound |P(z)| ≤ tol·Σ|cᵢ||z|ⁱ before multiplicities are restored.

use crate::error::{Error, Result};
use crate::exact_angle::Angle;
use crate::spectral::{largest_real_root, square_free_decomposition, IntPolynomial};
use crate::symbolic::{is_real_admissible, kneading_sequence, Symbol};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Hard cap on the degree parameter of cloud enumeration.
pub const MAX_CLOUD_DEGREE: u32 = 32;

/// Cap on how many polynomials (or, for M2, candidate angles) one
/// enumeration may visit. Desk-scale runs (M0 ≤ 10, M1 ≤ 16, M2 ≤ 12) stay
/// far below it; the cap exists so a stray degree does not allocate gigabytes.
pub const MAX_CLOUD_POLYNOMIALS: u128 = 2_000_000;

/// Largest polynomial degree accepted by the root solver.
pub const MAX_ROOT_DEGREE: usize = 64;

/// Default residual certification tolerance for [`complex_roots`].
pub const DEFAULT_ROOT_RESIDUAL: f64 = 1e-10;

/// Which coefficient class to enumerate.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum CloudSet {
    M0,
    M1,
    M2,
}

impl CloudSet {
    pub fn as_str(&self) -> &'static str {
        match self {
            CloudSet::M0 => "M0",
            CloudSet::M1 => "M1",
            CloudSet::M2 => "M2",
        }
    }
}

impl fmt::Display for CloudSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CloudSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M0" | "m0" => Ok(CloudSet::M0),
            "M1" | "m1" => Ok(CloudSet::M1),
            "M2" | "m2" => Ok(CloudSet::M2),
            other => Err(Error::parse(format!(
                "unknown root-cloud set '{other}' (expected m0, m1, or m2)"
            ))),
        }
    }
}

fn check_degree(max_degree: u32) -> Result<()> {
    if max_degree == 0 {
        return Err(Error::domain("max degree must be at least 1"));
    }
    if max_degree > MAX_CLOUD_DEGREE {
        return Err(Error::budget(format!(
            "max degree {max_degree} exceeds cap {MAX_CLOUD_DEGREE}"
        )));
    }
    Ok(())
}

/// Enumerates the coefficient class up to `max_degree`.
///
/// For M2 the bound applies to the window period, so polynomial degrees
/// reach `max_degree − 1` (a period-n word yields a degree n−1 polynomial).
/// Enumeration order is deterministic: ascending degree (period), then a
/// fixed within-degree order, which is what the `poly_id` column of the CSV
/// output refers to.
pub fn enumerate_polynomials(set: CloudSet, max_degree: u32) -> Result<Vec<IntPolynomial>> {
    check_degree(max_degree)?;
    match set {
        CloudSet::M0 => {
            let total = 3u128.pow(max_degree) - 1;
            if total > MAX_CLOUD_POLYNOMIALS {
                return Err(Error::budget(format!(
                    "M0 up to degree {max_degree} holds {total} polynomials, cap is {MAX_CLOUD_POLYNOMIALS}"
                )));
            }
            let mut out = Vec::with_capacity(total as usize);
            for d in 1..=max_degree as usize {
                let middles = 3u64.pow(d as u32 - 1);
                for t in 0..middles {
                    for c0 in [-1i64, 1] {
                        let mut coeffs = vec![0i64; d + 1];
                        coeffs[0] = c0;
                        coeffs[d] = 1;
                        let mut rest = t;
                        for c in coeffs.iter_mut().take(d).skip(1) {
                            *c = (rest % 3) as i64 - 1;
                            rest /= 3;
                        }
                        out.push(IntPolynomial::from_i64(&coeffs));
                    }
                }
            }
            Ok(out)
        }
        CloudSet::M1 => {
            let total = 2u128.pow(max_degree + 1) - 2;
            if total > MAX_CLOUD_POLYNOMIALS {
                return Err(Error::budget(format!(
                    "M1 up to degree {max_degree} holds {total} polynomials, cap is {MAX_CLOUD_POLYNOMIALS}"
                )));
            }
            let mut out = Vec::with_capacity(total as usize);
            for d in 1..=max_degree as usize {
                for mask in 0..(1u64 << d) {
                    let mut coeffs = vec![0i64; d + 1];
                    coeffs[d] = 1;
                    for (i, c) in coeffs.iter_mut().take(d).enumerate() {
                        *c = if mask >> i & 1 == 1 { 1 } else { -1 };
                    }
                    out.push(IntPolynomial::from_i64(&coeffs));
                }
            }
            Ok(out)
        }
        CloudSet::M2 => Ok(enumerate_m2_windows(max_degree)?
            .into_iter()
            .map(|(_, p)| p)
            .collect()),
    }
}

/// The polynomial of one window word ν₁…ν_{n−1}∗ (trailing star included).
fn word_polynomial(word: &[Symbol]) -> IntPolynomial {
    let n = word.len();
    let mut x = vec![-1i64]; // x₁ = −1, constant in λ
    for nu_k in word.iter().take(n - 1) {
        let s: i64 = if *nu_k == Symbol::One { -1 } else { 1 };
        let mut next = vec![0i64; x.len() + 1];
        for (i, &c) in x.iter().enumerate() {
            next[i + 1] = s * c;
        }
        next[0] -= 1;
        x = next;
    }
    IntPolynomial::from_i64(&x).lead_normalized()
}

/// All real superstable windows of period 2..=max_period, as (angle, growth
/// polynomial) pairs. Each window is represented once, by the smaller of its
/// two conjugate angles (the one in (0, 1/2]).
pub fn enumerate_m2_windows(max_period: u32) -> Result<Vec<(Angle, IntPolynomial)>> {
    check_degree(max_period)?;
    let candidates = 2u128.pow(max_period);
    if candidates > MAX_CLOUD_POLYNOMIALS {
        return Err(Error::budget(format!(
            "window enumeration to period {max_period} scans {candidates} angles, cap is {MAX_CLOUD_POLYNOMIALS}"
        )));
    }
    let mut seen_words: BTreeSet<Vec<Symbol>> = BTreeSet::new();
    let mut out = Vec::new();
    for n in 2..=max_period {
        let den = (1u64 << n) - 1;
        for j in 1..=(den / 2) {
            let angle = Angle::new(j, den)?;
            let st = angle.orbit_structure()?;
            if st.preperiod != 0 || st.period != n {
                continue; // reducible angle: belongs to a smaller period
            }
            let nu = kneading_sequence(angle)?;
            if !nu.is_star_periodic() || !is_real_admissible(&nu) {
                continue;
            }
            let word: Vec<Symbol> = (0..n as usize).map(|i| nu.entry(i)).collect();
            if !seen_words.insert(word.clone()) {
                continue;
            }
            out.push((angle, word_polynomial(&word)));
        }
    }
    Ok(out)
}

/// Growth rate encoded by a window polynomial: its largest real root in
/// [1, 2], or exactly 1 when the polynomial has no root there (zero-entropy
/// windows such as the period-doubling cascade members).
pub fn window_growth(p: &IntPolynomial) -> Result<f64> {
    match largest_real_root(p, 1.0, 2.0, 1e-12) {
        Ok(r) => Ok(r),
        Err(Error::Domain(_)) => {
            // certify there really is no root: constant exact sign at both ends
            let s1 = p.sign_at_dyadic(&BigInt::one(), 0);
            let s2 = p.sign_at_dyadic(&BigInt::from(2), 0);
            if s1 != 0 && s1 == s2 {
                Ok(1.0)
            } else {
                Err(Error::domain(
                    "window polynomial changes sign but has no certified simple root",
                ))
            }
        }
        Err(e) => Err(e),
    }
}

/// All complex roots of an integer polynomial, with residual certification.
///
/// Aberth–Ehrlich simultaneous iteration from a circular start, restarted
/// deterministically with rotated phases if convergence stalls, then a
/// Newton polish per root. Every root must satisfy
/// |P(z)| ≤ tol·Σ|cᵢ||z|ⁱ or the whole call fails with a convergence error.
/// Multiple roots are returned with multiplicity. Roots are sorted by
/// (re, im) so output order is reproducible.
pub fn complex_roots(p: &IntPolynomial, tol: f64) -> Result<Vec<Complex64>> {
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    if p.is_zero() {
        return Err(Error::domain("zero polynomial has no root set"));
    }
    let d = p.degree().expect("nonzero polynomial");
    if d == 0 {
        return Ok(Vec::new());
    }
    if d > MAX_ROOT_DEGREE {
        return Err(Error::budget(format!(
            "degree {d} exceeds root-solver cap {MAX_ROOT_DEGREE}"
        )));
    }

    // Roots at the origin come off exactly, then the square-free
    // decomposition reduces everything else to simple roots: a multiple root
    // evaluated in floating point is only locatable to ~tol^(1/multiplicity),
    // but as a simple root of its square-free factor it is as accurate as
    // any other. Multiplicities are restored in the output multiset. Roots
    // at ±1 (the only rational candidates for the ±1-coefficient families)
    // are deflated exactly as well.
    let zeros = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let stripped = IntPolynomial::new(p.coeffs()[zeros..].to_vec());

    for (factor, mult) in square_free_decomposition(&stripped) {
        let mut f = factor;
        let mut batch: Vec<Complex64> = Vec::new();
        for r in [1i64, -1] {
            if f.degree() >= Some(1) && f.sign_at_dyadic(&BigInt::from(r), 0) == 0 {
                f = deflate_linear(&f, r);
                batch.push(Complex64::new(r as f64, 0.0));
            }
        }
        if f.degree() > Some(0) {
            batch.extend(aberth_square_free(&f, tol)?);
        }
        for z in batch {
            roots.extend(std::iter::repeat(z).take(mult as usize));
        }
    }
    roots.sort_unstable_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .expect("finite roots")
            .then(a.im.partial_cmp(&b.im).expect("finite roots"))
    });
    Ok(roots)
}

/// Exact synthetic division by (x − r) for an integer root r; the remainder
/// must vanish.
fn deflate_linear(p: &IntPolynomial, r: i64) -> IntPolynomial {
    let c = p.coeffs();
    let n = c.len() - 1;
    let mut q = vec![BigInt::from(0); n];
    let mut carry = BigInt::from(0);
    for i in (0..n).rev() {
        carry = &c[i + 1] + BigInt::from(r) * carry;
        q[i] = carry.clone();
    }
    debug_assert!((&c[0] + BigInt::from(r) * &q[0]).is_zero(), "not a root");
    IntPolynomial::new(q)
}

/// Aberth–Ehrlich iteration with Newton polish and exact-arithmetic residual
/// certification, for square-free input (every root simple).
fn aberth_square_free(p: &IntPolynomial, tol: f64) -> Result<Vec<Complex64>> {
    let c: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
        .collect();
    if c.iter().any(|c| !c.is_finite()) {
        return Err(Error::domain("coefficients overflow f64"));
    }
    let c = &c[..];
    let n = c.len() - 1;
    let mut roots: Vec<Complex64> = Vec::new();
    let dc: Vec<f64> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &ci)| i as f64 * ci)
        .collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &ci in c.iter().rev() {
            acc = acc * z + ci;
        }
        acc
    };
    let eval_d = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &ci in dc.iter().rev() {
            acc = acc * z + ci;
        }
        acc
    };
    let certified = |z: Complex64| -> bool {
        let r = z.norm();
        let mut bound = 0.0f64;
        let mut pw = 1.0f64;
        for &ci in c {
            bound += ci.abs() * pw;
            pw *= r;
        }
        eval(z).norm() <= tol * bound.max(f64::MIN_POSITIVE)
    };

    let radius = (c[0].abs() / c[n].abs()).powf(1.0 / n as f64).max(0.25);
    let mut iterations = 0u64;
    for attempt in 0..8u32 {
        let phase0 = 0.4 + 0.7717 * attempt as f64;
        let r0 = radius * (1.0 + 0.07 * attempt as f64);
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                Complex64::from_polar(r0, phase0 + std::f64::consts::TAU * k as f64 / n as f64)
            })
            .collect();
        for _ in 0..400 {
            iterations += 1;
            let mut max_step = 0.0f64;
            for k in 0..n {
                let pk = eval(z[k]);
                if pk == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let dpk = eval_d(z[k]);
                let nk = if dpk == Complex64::new(0.0, 0.0) {
                    // on a critical point: nudge instead of dividing by zero
                    Complex64::new(1e-8, 1e-8)
                } else {
                    pk / dpk
                };
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    if j != k {
                        let diff = z[k] - z[j];
                        if diff != Complex64::new(0.0, 0.0) {
                            s += diff.inv();
                        }
                    }
                }
                let denom = Complex64::new(1.0, 0.0) - nk * s;
                let w = if denom.norm() < 1e-12 { nk } else { nk / denom };
                z[k] -= w;
                max_step = max_step.max(w.norm() / (1.0 + z[k].norm()));
            }
            if max_step < 1e-14 {
                break;
            }
        }
        // Newton polish: quadratic convergence, every root is simple here
        for zk in z.iter_mut() {
            for _ in 0..30 {
                let pv = eval(*zk);
                let dv = eval_d(*zk);
                if dv == Complex64::new(0.0, 0.0) {
                    break;
                }
                let step = pv / dv;
                if step.norm() <= 1e-16 * (1.0 + zk.norm()) {
                    break;
                }
                *zk -= step;
            }
        }
        if z.iter().all(|&zk| certified(zk)) {
            // real roots of real polynomials: crush spurious imaginary dust
            // below the certification scale so conjugate pairing is clean
            for zk in z.iter_mut() {
                if zk.im.abs() <= 1e-12 * (1.0 + zk.norm()) && certified(Complex64::new(zk.re, 0.0))
                {
                    zk.im = 0.0;
                }
            }
            roots.extend(z);
            return Ok(roots);
        }
    }
    Err(Error::Convergence {
        lo: 0.0,
        hi: tol,
        iterations,
    })
}

/// One root in a cloud: position, source polynomial degree and index, set.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CloudPoint {
    pub re: f64,
    pub im: f64,
    pub degree: u32,
    pub poly_id: u32,
    pub set: CloudSet,
}

/// A computed Galois root cloud.
#[derive(Clone, Debug)]
pub struct RootCloud {
    pub set: CloudSet,
    pub max_degree: u32,
    pub polynomials: usize,
    pub points: Vec<CloudPoint>,
}

/// Enumerates the set and solves every member for its full root set.
///
/// Points are ordered by `poly_id` (enumeration order), then by (re, im)
/// within a polynomial; with the `parallel` feature the solves fan out over
/// the rayon pool but the order is unchanged.
pub fn root_cloud(set: CloudSet, max_degree: u32, tol: f64) -> Result<RootCloud> {
    let polys = enumerate_polynomials(set, max_degree)?;
    let solve = |(id, p): (usize, &IntPolynomial)| -> Result<Vec<CloudPoint>> {
        let deg = p.degree().unwrap_or(0) as u32;
        Ok(complex_roots(p, tol)?
            .into_iter()
            .map(|z| CloudPoint {
                re: z.re,
                im: z.im,
                degree: deg,
                poly_id: id as u32,
                set,
            })
            .collect())
    };
    #[cfg(feature = "parallel")]
    let per_poly: Result<Vec<Vec<CloudPoint>>> = polys.par_iter().enumerate().map(solve).collect();
    #[cfg(not(feature = "parallel"))]
    let per_poly: Result<Vec<Vec<CloudPoint>>> = polys.iter().enumerate().map(solve).collect();
    Ok(RootCloud {
        set,
        max_degree,
        polynomials: polys.len(),
        points: per_poly?.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn coeff_vec(p: &IntPolynomial) -> Vec<i64> {
        p.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn window_counts_by_period() {
        let windows = enumerate_m2_windows(10).unwrap();
        let mut counts = vec![0usize; 11];
        for (angle, _) in &windows {
            counts[angle.orbit_structure().unwrap().period as usize] += 1;
        }
        assert_eq!(&counts[2..=10], &[1, 1, 2, 3, 5, 9, 16, 28, 51]);
    }

    #[test]
    fn class_counts_by_degree() {
        let m0 = enumerate_polynomials(CloudSet::M0, 3).unwrap();
        let count = |d: usize| m0.iter().filter(|p| p.degree() == Some(d)).count();
        assert_eq!((count(1), count(2), count(3)), (2, 6, 18));
        assert_eq!(m0.len(), 26);

        let m1 = enumerate_polynomials(CloudSet::M1, 3).unwrap();
        let count = |d: usize| m1.iter().filter(|p| p.degree() == Some(d)).count();
        assert_eq!((count(1), count(2), count(3)), (2, 4, 8));
    }

    #[test]
    fn known_window_polynomials() {
        let windows = enumerate_m2_windows(4).unwrap();
        let by_angle: Vec<(String, Vec<i64>)> = windows
            .iter()
            .map(|(a, p)| (a.to_string(), coeff_vec(p)))
            .collect();
        // period 2 basilica 1/3: λ − 1
        // period 3 real window 3/7: λ² − λ − 1
        // period 4: 7/15 (tribonacci λ³−λ²−λ−1) and 2/5 (cascade, (λ−1)²(λ+1))
        assert_eq!(
            by_angle,
            vec![
                ("1/3".to_string(), vec![-1, 1]),
                ("3/7".to_string(), vec![-1, -1, 1]),
                ("2/5".to_string(), vec![1, -1, -1, 1]),
                ("7/15".to_string(), vec![-1, -1, -1, 1]),
            ]
        );
    }

    #[test]
    fn m2_is_contained_in_m1() {
        let m1: HashSet<Vec<i64>> = enumerate_polynomials(CloudSet::M1, 7)
            .unwrap()
            .iter()
            .map(coeff_vec)
            .collect();
        for p in enumerate_polynomials(CloudSet::M2, 8).unwrap() {
            assert!(
                m1.contains(&coeff_vec(&p)),
                "window polynomial {p} escapes the ±1 class"
            );
        }
    }

    #[test]
    fn m0_closed_under_reversal() {
        let m0 = enumerate_polynomials(CloudSet::M0, 5).unwrap();
        let set: HashSet<Vec<i64>> = m0.iter().map(coeff_vec).collect();
        for p in &m0 {
            let mut rev = coeff_vec(p);
            rev.reverse();
            if rev.last() == Some(&-1) {
                for c in rev.iter_mut() {
                    *c = -*c;
                }
            }
            assert!(set.contains(&rev), "reversal of {p} escapes M0");
        }
    }

    #[test]
    fn m0_moduli_in_annulus() {
        let cloud = root_cloud(CloudSet::M0, 4, 1e-10).unwrap();
        for pt in &cloud.points {
            let m = (pt.re * pt.re + pt.im * pt.im).sqrt();
            assert!(
                (0.5 - 1e-6..=2.0 + 1e-6).contains(&m),
                "modulus {m} outside [1/2, 2]"
            );
        }
    }

    #[test]
    fn root_solver_basics() {
        let p = IntPolynomial::from_i64(&[1, 0, 1]); // x² + 1
        let r = complex_roots(&p, 1e-10).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0] - Complex64::new(0.0, -1.0)).norm() < 1e-9);
        assert!((r[1] - Complex64::new(0.0, 1.0)).norm() < 1e-9);

        // double root: (λ−1)²(λ+1) = λ³ − λ² − λ + 1
        let p = IntPolynomial::from_i64(&[1, -1, -1, 1]);
        let r = complex_roots(&p, 1e-10).unwrap();
        assert_eq!(r.len(), 3);
        assert!((r[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        assert!((r[1].re - 1.0).abs() < 1e-4 && (r[2].re - 1.0).abs() < 1e-4);

        // factor of x: x³ + x = x(x² + 1)
        let p = IntPolynomial::from_i64(&[0, 1, 0, 1]);
        let r = complex_roots(&p, 1e-10).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.iter().filter(|z| z.norm() == 0.0).count(), 1);

        // constants have no roots; the zero polynomial is rejected
        assert!(complex_roots(&IntPolynomial::from_i64(&[5]), 1e-10)
            .unwrap()
            .is_empty());
        assert!(complex_roots(&IntPolynomial::zero(), 1e-10).is_err());
    }

    #[test]
    fn window_growth_matches_matrix_route() {
        use crate::entropy::core_entropy;
        for (angle, poly) in enumerate_m2_windows(6).unwrap() {
            let from_poly = window_growth(&poly).unwrap();
            let from_matrix = core_entropy(angle).unwrap().lambda;
            assert!(
                (from_poly - from_matrix).abs() < 1e-8,
                "θ = {angle}: poly root {from_poly} vs matrix {from_matrix}"
            );
        }
    }

    #[test]
    fn budget_guards() {
        assert!(enumerate_polynomials(CloudSet::M0, 33).is_err());
        assert!(enumerate_polynomials(CloudSet::M0, 14).is_err()); // 3^14 > cap
        assert!(complex_roots(
            &IntPolynomial::new(
                (0..=65).map(|i| BigInt::from(if i == 65 { 1 } else { -1 })).collect()
            ),
            1e-10
        )
        .is_err());
    }

    #[test]
    fn set_parsing() {
        assert_eq!("m0".parse::<CloudSet>().unwrap(), CloudSet::M0);
        assert_eq!("M2".parse::<CloudSet>().unwrap(), CloudSet::M2);
        assert!("m3".parse::<CloudSet>().is_err());
        assert_eq!(CloudSet::M1.to_string(), "M1");
    }
}

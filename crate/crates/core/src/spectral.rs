//! Spectral radius of sparse nonnegative integer matrices, exact
//! characteristic polynomials, and isolated largest-real-root extraction.
//!
//! The growth-rate solver runs a ratio (power) iteration per strongly
//! connected component. Convergence is certified at every step by the
//! two-sided Collatz–Wielandt bracket min_i (Bv)_i/v_i ≤ ρ(B) ≤ max_i
//! (Bv)_i/v_i, applied to B = A + I so that imprimitive components (whose raw
//! ratio sequence oscillates with the cycle structure) still converge
//! geometrically. Exact integer arithmetic (Berkowitz characteristic
//! polynomial + sign-exact bisection) provides an independent certification
//! path at small dimension.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Iteration cap for the ratio iteration.
pub const ITERATION_CAP: u64 = 100_000;

/// Default tolerance for [`growth_rate`].
pub const DEFAULT_GROWTH_TOL: f64 = 1e-10;

/// Default tolerance for root bisection.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Hard cap for the exact characteristic-polynomial path.
pub const MAX_CHARPOLY_DIM: usize = 64;

/// Sparse nonnegative integer matrix, stored by columns.
///
/// Entry (row, weight) in column j means M[row][j] = weight. The convention
/// throughout: the matrix acts on column vectors, (Mv)_i = Σ_j M[i][j] v_j,
/// and the transition digraph has an edge j → i for every entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    dim: usize,
    cols: Vec<Vec<(u32, u64)>>,
}

impl SparseMatrix {
    pub fn new(dim: usize) -> Self {
        SparseMatrix {
            dim,
            cols: vec![Vec::new(); dim],
        }
    }

    /// Builds from dense row-major data; rejects non-square input.
    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let dim = rows.len();
        for r in rows {
            if r.len() != dim {
                return Err(Error::domain("matrix must be square"));
            }
        }
        let mut m = SparseMatrix::new(dim);
        for (i, r) in rows.iter().enumerate() {
            for (j, &w) in r.iter().enumerate() {
                if w != 0 {
                    m.add(i, j, w);
                }
            }
        }
        Ok(m)
    }

    /// Adds `weight` to entry (row, col), accumulating duplicates.
    pub fn add(&mut self, row: usize, col: usize, weight: u64) {
        assert!(row < self.dim && col < self.dim, "entry out of bounds");
        if weight == 0 {
            return;
        }
        let col_vec = &mut self.cols[col];
        match col_vec.binary_search_by_key(&(row as u32), |&(r, _)| r) {
            Ok(i) => col_vec[i].1 += weight,
            Err(i) => col_vec.insert(i, (row as u32, weight)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entries of column j as (row, weight) pairs, sorted by row.
    pub fn column(&self, j: usize) -> &[(u32, u64)] {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        self.cols
            .iter()
            .map(|c| c.iter().map(|&(_, w)| w).sum())
            .collect()
    }

    pub fn entry(&self, row: usize, col: usize) -> u64 {
        self.cols[col]
            .binary_search_by_key(&(row as u32), |&(r, _)| r)
            .map(|i| self.cols[col][i].1)
            .unwrap_or(0)
    }

    /// out = M·v (dense apply).
    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (j, col) in self.cols.iter().enumerate() {
            let x = v[j];
            if x != 0.0 {
                for &(r, w) in col {
                    out[r as usize] += w as f64 * x;
                }
            }
        }
    }
}

/// How a growth-rate value was obtained.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GrowthMethod {
    /// Ratio (power) iteration with a certified two-sided bracket.
    RatioIteration,
    /// Structural bound that is already exact (single-vertex components,
    /// empty or nilpotent matrices) — no iteration was needed.
    RootBound,
    /// Exact characteristic polynomial + sign-exact bisection.
    CharPoly,
}

impl fmt::Display for GrowthMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthMethod::RatioIteration => "ratio-iteration",
            GrowthMethod::RootBound => "root-bound",
            GrowthMethod::CharPoly => "char-poly",
        })
    }
}

/// Result of a spectral-radius computation.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GrowthResult {
    pub lambda: f64,
    pub method: GrowthMethod,
    pub iterations: u64,
    /// Certified half-width of the final bracket around λ (0 for exact paths).
    pub residual: f64,
}

// ---------------------------------------------------------------------------
// Strongly connected components (iterative Tarjan)
// ---------------------------------------------------------------------------

/// Strongly connected components of the transition digraph (edge j → i for
/// every entry M[i][j]). Components are returned sorted by smallest vertex,
/// vertices sorted ascending within each.
pub fn strongly_connected_components(m: &SparseMatrix) -> Vec<Vec<usize>> {
    let n = m.dim();
    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut comps: Vec<Vec<usize>> = Vec::new();

    // work items: (vertex, next edge position)
    let mut call: Vec<(u32, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root as u32, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root as u32);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            let vu = v as usize;
            if *ei < m.column(vu).len() {
                let w = m.column(vu)[*ei].0 as usize;
                *ei += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    call.push((w as u32, 0));
                } else if on_stack[w] {
                    low[vu] = low[vu].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    let pu = parent as usize;
                    low[pu] = low[pu].min(low[vu]);
                }
                if low[vu] == index[vu] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w as usize] = false;
                        comp.push(w as usize);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Imprimitivity index of an irreducible component: gcd of all cycle lengths,
/// computed as gcd over component edges (u → v) of depth(u) + 1 − depth(v)
/// for a BFS depth labeling. Returns 1 for primitive components.
pub fn block_imprimitivity(m: &SparseMatrix, comp: &[usize]) -> u32 {
    if comp.len() == 1 {
        // primitive iff it has a self-loop; a loop of length 1 forces gcd 1
        return 1;
    }
    let mut local = vec![usize::MAX; m.dim()];
    for (i, &v) in comp.iter().enumerate() {
        local[v] = i;
    }
    let mut depth = vec![i64::MIN; comp.len()];
    let mut queue = std::collections::VecDeque::new();
    depth[0] = 0;
    queue.push_back(comp[0]);
    let mut g: i64 = 0;
    while let Some(u) = queue.pop_front() {
        let du = depth[local[u]];
        for &(r, _) in m.column(u) {
            let w = r as usize;
            if local[w] == usize::MAX {
                continue; // edge leaves the component
            }
            if depth[local[w]] == i64::MIN {
                depth[local[w]] = du + 1;
                queue.push_back(w);
            } else {
                g = gcd_i64(g, du + 1 - depth[local[w]]);
            }
        }
    }
    // second pass: edges between already-labeled vertices discovered late
    for &u in comp {
        let du = depth[local[u]];
        for &(r, _) in m.column(u) {
            let w = r as usize;
            if local[w] != usize::MAX {
                g = gcd_i64(g, du + 1 - depth[local[w]]);
            }
        }
    }
    g.unsigned_abs().max(1) as u32
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Certified spectral radius of one irreducible component.
///
/// Returns (lambda, iterations, residual). Single vertices are exact; larger
/// components run the Collatz–Wielandt bracketed ratio iteration on A + I.
pub fn block_growth(
    m: &SparseMatrix,
    comp: &[usize],
    tol: f64,
    iteration_cap: u64,
) -> Result<(f64, u64, f64)> {
    if comp.len() == 1 {
        let v = comp[0];
        return Ok((m.entry(v, v) as f64, 0, 0.0));
    }
    let n = comp.len();
    let mut local = vec![u32::MAX; m.dim()];
    for (i, &v) in comp.iter().enumerate() {
        local[v] = i as u32;
    }
    // local sparse columns of the block
    let block_cols: Vec<Vec<(u32, f64)>> = comp
        .iter()
        .map(|&v| {
            m.column(v)
                .iter()
                .filter(|&&(r, _)| local[r as usize] != u32::MAX)
                .map(|&(r, w)| (local[r as usize], w as f64))
                .collect()
        })
        .collect();

    let mut v = vec![1.0f64; n];
    let mut w = vec![0.0f64; n];
    let mut best = (f64::NEG_INFINITY, f64::INFINITY);
    for iter in 1..=iteration_cap {
        // w = (A + I) v restricted to the block
        w.copy_from_slice(&v);
        for (j, col) in block_cols.iter().enumerate() {
            let x = v[j];
            for &(r, wt) in col {
                w[r as usize] += wt * x;
            }
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = w[i] / v[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        // Collatz–Wielandt: lo − 1 ≤ λ(A) ≤ hi − 1 for every positive v
        best = (best.0.max(lo - 1.0), best.1.min(hi - 1.0));
        if best.1 - best.0 <= tol {
            let lambda = 0.5 * (best.0 + best.1);
            return Ok((lambda, iter, 0.5 * (best.1 - best.0)));
        }
        let max = w.iter().cloned().fold(0.0f64, f64::max);
        for x in w.iter_mut() {
            *x /= max;
        }
        std::mem::swap(&mut v, &mut w);
    }
    Err(Error::Convergence {
        lo: best.0,
        hi: best.1,
        iterations: iteration_cap,
    })
}

/// Spectral radius of a sparse nonnegative integer matrix, within `tol`.
///
/// Decomposes into strongly connected components and runs the certified
/// ratio iteration on each; λ is the maximum over components. Trivial
/// components (single vertices, so also every nilpotent matrix) are exact.
pub fn growth_rate(m: &SparseMatrix, tol: f64) -> Result<GrowthResult> {
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    if m.dim() == 0 {
        return Ok(GrowthResult {
            lambda: 0.0,
            method: GrowthMethod::RootBound,
            iterations: 0,
            residual: 0.0,
        });
    }
    let comps = strongly_connected_components(m);
    let mut lambda = 0.0f64;
    let mut residual = 0.0f64;
    let mut iterations = 0u64;
    let mut iterated = false;
    for comp in &comps {
        let budget = ITERATION_CAP.saturating_sub(iterations).max(1);
        let (l, it, res) = block_growth(m, comp, tol, budget)?;
        iterations += it;
        if it > 0 {
            iterated = true;
        }
        if l > lambda {
            lambda = l;
            residual = res;
        }
    }
    Ok(GrowthResult {
        lambda,
        method: if iterated {
            GrowthMethod::RatioIteration
        } else {
            GrowthMethod::RootBound
        },
        iterations,
        residual,
    })
}

/// Spectral radius via the exact characteristic polynomial, for dimensions up
/// to [`MAX_CHARPOLY_DIM`]; larger matrices fall back to [`growth_rate`].
///
/// The exact path computes det(xI − M) over the integers and isolates its
/// largest real root (the Perron root) with sign-exact bisection, so the
/// result is correct to `tol` independently of iteration behavior.
pub fn growth_rate_certified(m: &SparseMatrix, tol: f64) -> Result<GrowthResult> {
    if m.dim() == 0 || m.dim() > MAX_CHARPOLY_DIM {
        return growth_rate(m, tol);
    }
    let p = char_poly(m)?;
    let hi = m
        .column_sums()
        .iter()
        .max()
        .copied()
        .unwrap_or(0)
        .max(1) as f64;
    let lambda = largest_real_root(&p, 0.0, hi, tol.min(DEFAULT_ROOT_TOL))?;
    Ok(GrowthResult {
        lambda,
        method: GrowthMethod::CharPoly,
        iterations: 0,
        residual: 0.0,
    })
}

// ---------------------------------------------------------------------------
// Integer polynomials
// ---------------------------------------------------------------------------

/// Polynomial with arbitrary-precision integer coefficients, ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Builds from ascending coefficients, trimming leading zeros.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Ascending coefficients (constant term first); trimmed.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Floating-point Horner evaluation (coefficients converted to f64).
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0f64;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Exact sign of P(a / 2^s): evaluates Σ c_i a^i 2^{s(d−i)} over ℤ.
    pub fn sign_at_dyadic(&self, a: &BigInt, s: u32) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let d = self.coeffs.len() - 1;
        let mut acc = self.coeffs[d].clone();
        for i in (0..d).rev() {
            acc = acc * a + (self.coeffs[i].clone() << (s as usize * (d - i)));
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    /// Flips the sign of every coefficient.
    pub fn negated(&self) -> Self {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Normalizes the leading coefficient to be positive (flipping all signs
    /// if needed); the root set is unchanged.
    pub fn lead_normalized(&self) -> Self {
        match self.leading() {
            Some(l) if l.is_negative() => self.negated(),
            _ => self.clone(),
        }
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// GCD of the coefficients (zero for the zero polynomial).
    fn content(&self) -> BigInt {
        use num_integer::Integer;
        self.coeffs
            .iter()
            .fold(BigInt::from(0), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    fn primitive_normalized(&self) -> Self {
        let c = self.content();
        if c.is_zero() {
            return IntPolynomial::zero();
        }
        IntPolynomial::new(self.coeffs.iter().map(|k| k / &c).collect()).lead_normalized()
    }

    /// Exact division by a known divisor. Panics if `d` does not divide
    /// `self` in ℤ[x]; only called on products established by construction.
    fn div_exact(&self, d: &Self) -> Self {
        use num_integer::Integer;
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lead = d.leading().expect("nonzero divisor");
        let mut rem = self.coeffs.clone();
        let mut quo = vec![BigInt::from(0); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let (q, r) = rem.last().expect("nonempty").div_rem(lead);
            assert!(r.is_zero(), "inexact polynomial division");
            for i in 0..=dd {
                let sub = &q * &d.coeffs[i];
                rem[k + i] -= sub;
            }
            debug_assert!(rem.last().expect("nonempty").is_zero());
            rem.pop();
            quo[k] = q;
        }
        assert!(
            rem.iter().all(|c| c.is_zero()),
            "inexact polynomial division"
        );
        IntPolynomial::new(quo)
    }
}

/// Pseudo-remainder of a by b: lc(b)^(deg a − deg b + 1) · a reduced mod b.
fn pseudo_rem(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let db = b.coeffs.len() - 1;
    let lb = b.leading().expect("nonzero divisor").clone();
    let mut r = a.coeffs.clone();
    while r.len() > db {
        let k = r.len() - 1 - db;
        let top = r.last().expect("nonempty").clone();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for i in 0..=db {
            let sub = &top * &b.coeffs[i];
            r[k + i] -= sub;
        }
        debug_assert!(r.last().expect("nonempty").is_zero());
        r.pop();
        while r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
    }
    IntPolynomial::new(r)
}

/// GCD in ℤ[x] by the primitive polynomial remainder sequence; the result is
/// primitive with positive leading coefficient (a positive constant counts
/// as 1).
pub fn poly_gcd(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let mut a = a.primitive_normalized();
    let mut b = b.primitive_normalized();
    if a.is_zero() {
        return b;
    }
    while !b.is_zero() {
        if a.coeffs.len() < b.coeffs.len() {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        let r = pseudo_rem(&a, &b).primitive_normalized();
        a = b;
        b = r;
    }
    a
}

/// Square-free decomposition by Yun's algorithm: returns pairwise-coprime
/// square-free factors with their multiplicities, primitive with positive
/// leading coefficients; the product of factor^multiplicity equals the input
/// up to a constant. Constant inputs decompose to an empty list.
pub fn square_free_decomposition(p: &IntPolynomial) -> Vec<(IntPolynomial, u32)> {
    let p = p.primitive_normalized();
    if p.coeffs.len() <= 1 {
        return Vec::new();
    }
    let dp = p.derivative();
    let g = poly_gcd(&p, &dp);
    if g.degree() == Some(0) {
        return vec![(p, 1)];
    }
    let mut out = Vec::new();
    let mut w = p.div_exact(&g);
    let mut y = dp.div_exact(&g);
    let mut mult = 1u32;
    while w.degree() > Some(0) {
        let wd = w.derivative();
        let n = y.coeffs.len().max(wd.coeffs.len());
        let z = IntPolynomial::new(
            (0..n)
                .map(|i| {
                    y.coeffs.get(i).cloned().unwrap_or_default()
                        - wd.coeffs.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        );
        let f = poly_gcd(&w, &z);
        if f.degree() > Some(0) {
            out.push((f.clone(), mult));
        }
        w = w.div_exact(&f);
        y = z.div_exact(&f);
        mult += 1;
    }
    out
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
                first = false;
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if i == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            if i == 1 {
                f.write_str("x")?;
            } else if i > 1 {
                write!(f, "x^{i}")?;
            }
        }
        Ok(())
    }
}

/// Exact characteristic polynomial det(xI − M) via the division-free
/// Berkowitz algorithm. Dimension capped at [`MAX_CHARPOLY_DIM`].
pub fn char_poly(m: &SparseMatrix) -> Result<IntPolynomial> {
    let n = m.dim();
    if n > MAX_CHARPOLY_DIM {
        return Err(Error::domain(format!(
            "characteristic polynomial limited to dimension {MAX_CHARPOLY_DIM}, got {n}"
        )));
    }
    if n == 0 {
        return Ok(IntPolynomial::from_i64(&[1]));
    }
    // dense copy
    let mut a = vec![vec![BigInt::zero(); n]; n];
    for j in 0..n {
        for &(r, w) in m.column(j) {
            a[r as usize][j] = BigInt::from(w);
        }
    }
    // p holds the char poly of the leading principal i×i block, descending.
    let mut p: Vec<BigInt> = vec![BigInt::one(), -a[0][0].clone()];
    for i in 1..n {
        // s[k] = R · M^{k-1} · C (k ≥ 1), s[0] = a[i][i], where R is row i,
        // C is column i, and M is the leading i×i block.
        let mut s: Vec<BigInt> = Vec::with_capacity(i + 1);
        s.push(a[i][i].clone());
        let mut u: Vec<BigInt> = (0..i).map(|r| a[r][i].clone()).collect();
        for _ in 1..=i {
            let dot = (0..i)
                .filter(|&c| !a[i][c].is_zero() && !u[c].is_zero())
                .map(|c| &a[i][c] * &u[c])
                .sum::<BigInt>();
            s.push(dot);
            // u = M · u
            let mut nu = vec![BigInt::zero(); i];
            for (c, uc) in u.iter().enumerate() {
                if uc.is_zero() {
                    continue;
                }
                for (r, row) in a.iter().enumerate().take(i) {
                    if !row[c].is_zero() {
                        nu[r] += &row[c] * uc;
                    }
                }
            }
            u = nu;
        }
        // multiply by the lower-triangular Toeplitz matrix with first column
        // [1, −s0, −s1, …]
        let mut np = vec![BigInt::zero(); p.len() + 1];
        for (r, out) in np.iter_mut().enumerate() {
            if r < p.len() {
                *out += &p[r];
            }
            for (j, pj) in p.iter().enumerate().take(r) {
                if r - 1 - j < s.len() {
                    *out -= &s[r - 1 - j] * pj;
                }
            }
        }
        p = np;
    }
    p.reverse();
    Ok(IntPolynomial::new(p))
}

// ---------------------------------------------------------------------------
// Sign-exact bisection for the largest real root in a bracket
// ---------------------------------------------------------------------------

/// Dyadic representation num / 2^scale of a finite f64 (exact).
fn to_dyadic(x: f64) -> (BigInt, u32) {
    assert!(x.is_finite(), "bracket endpoints must be finite");
    if x == 0.0 {
        return (BigInt::from(0), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, e) = if exp == 0 {
        (frac, -1074i64) // subnormal
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let m = BigInt::from(sign * mantissa as i64);
    if e >= 0 {
        (m << e as usize, 0)
    } else {
        // drop trailing zero bits so the scale stays as small as possible
        let tz = mantissa.trailing_zeros().min((-e) as u32);
        (m >> tz as usize, (-e) as u32 - tz)
    }
}

/// Largest real root of P in [lo, hi], located by a descending sign scan and
/// refined by bisection with exact integer sign evaluation at dyadic points,
/// to within `tol`. Exact hits (P vanishing at a scanned dyadic point) are
/// returned as-is, so integer roots like 2 come back exactly.
///
/// Requires the largest root in the bracket to be simple (an even-order
/// touching root produces no sign change and is reported as absent).
pub fn largest_real_root(p: &IntPolynomial, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if p.is_zero() {
        return Err(Error::domain("zero polynomial has no isolated roots"));
    }
    if p.degree() == Some(0) {
        return Err(Error::domain("constant polynomial has no roots"));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain("invalid bracket"));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }

    // common dyadic scale for both endpoints, with enough headroom that the
    // initial grid consists of distinct integers
    let (a_lo, s_lo) = to_dyadic(lo);
    let (a_hi, s_hi) = to_dyadic(hi);
    let mut s = s_lo.max(s_hi);
    let mut lo_n = a_lo << (s - s_lo) as usize;
    let mut hi_n = a_hi << (s - s_hi) as usize;
    const GRID: u32 = 2048;
    while (&hi_n - &lo_n) < BigInt::from(4 * GRID) {
        s += 4;
        lo_n <<= 4;
        hi_n <<= 4;
    }

    let span = &hi_n - &lo_n;
    let grid_point = |j: u32| -> BigInt { &lo_n + (&span * BigInt::from(j)) / BigInt::from(GRID) };

    // descending scan for the highest sign change (or exact zero)
    let mut upper = grid_point(GRID);
    let mut upper_sign = p.sign_at_dyadic(&upper, s);
    if upper_sign == 0 {
        return Ok(dyadic_to_f64(&upper, s));
    }
    let mut bracket: Option<(BigInt, BigInt, i8)> = None;
    for j in (0..GRID).rev() {
        let pt = grid_point(j);
        let sg = p.sign_at_dyadic(&pt, s);
        if sg == 0 {
            return Ok(dyadic_to_f64(&pt, s));
        }
        if sg != upper_sign {
            bracket = Some((pt, upper, sg));
            break;
        }
        upper = pt;
        upper_sign = sg;
    }
    let (mut a, mut b, mut sign_a) = match bracket {
        Some(t) => t,
        None => {
            return Err(Error::domain(
                "no sign change in bracket: no certified simple root",
            ))
        }
    };

    // bisection with exact signs; interval width = (b−a)/2^s
    let tol_num = |s: u32| -> BigInt {
        let (t_n, t_s) = to_dyadic(tol);
        // tol ≈ t_n / 2^t_s ⇒ width threshold in numerator units at scale s
        if s >= t_s {
            t_n << (s - t_s) as usize
        } else {
            t_n >> (t_s - s) as usize
        }
    };
    let mut threshold = tol_num(s);
    while (&b - &a) > threshold {
        let sum = &a + &b;
        let mid = if (&sum % 2u32).is_zero() {
            sum / 2u32
        } else {
            // refine the scale so the midpoint stays an integer numerator
            s += 1;
            a <<= 1;
            b <<= 1;
            threshold = tol_num(s);
            sum
        };
        match p.sign_at_dyadic(&mid, s) {
            0 => return Ok(dyadic_to_f64(&mid, s)),
            sg if sg == sign_a => {
                a = mid;
                sign_a = sg;
            }
            _ => b = mid,
        }
    }
    Ok(dyadic_to_f64(&(&a + &b), s + 1))
}

fn dyadic_to_f64(num: &BigInt, scale: u32) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    // num.to_f64() overflows to infinity past 2^1024, and 2^scale likewise;
    // reduce to a 64-bit significand and a single power-of-two exponent first.
    let bits = num.bits();
    let drop = bits.saturating_sub(64) as usize;
    let top = (num >> drop).to_f64().unwrap_or(f64::NAN);
    let e = drop as i64 - scale as i64;
    top * 2f64.powi(e.clamp(-2000, 2000) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[u64]]) -> SparseMatrix {
        SparseMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn char_poly_known_matrices() {
        let m = mat(&[&[0, 0, 2], &[1, 0, 0], &[0, 1, 1]]);
        assert_eq!(char_poly(&m).unwrap(), IntPolynomial::from_i64(&[-2, 0, -1, 1]));

        let m = mat(&[&[0, 0, 2], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(char_poly(&m).unwrap(), IntPolynomial::from_i64(&[-2, 0, 0, 1]));

        let m = mat(&[&[0, 0], &[0, 0]]);
        assert_eq!(char_poly(&m).unwrap(), IntPolynomial::from_i64(&[0, 0, 1]));

        let m = mat(&[&[1]]);
        assert_eq!(char_poly(&m).unwrap(), IntPolynomial::from_i64(&[-1, 1]));

        // 3×3 identity: (x−1)³
        let m = mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(char_poly(&m).unwrap(), IntPolynomial::from_i64(&[-1, 3, -3, 1]));

        // fibonacci: x² − x − 1
        let m = mat(&[&[1, 1], &[1, 0]]);
        assert_eq!(char_poly(&m).unwrap(), IntPolynomial::from_i64(&[-1, -1, 1]));
    }

    /// Fraction-free Gaussian elimination determinant (test oracle).
    fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut sign = 1i64;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
                match swap {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    #[test]
    fn char_poly_agrees_with_determinant_oracle() {
        // deterministic pseudo-random small matrices
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in 1..=6usize {
            for _ in 0..4 {
                let rows: Vec<Vec<u64>> = (0..n)
                    .map(|_| (0..n).map(|_| next() % 4).collect())
                    .collect();
                let m = SparseMatrix::from_rows(&rows).unwrap();
                let p = char_poly(&m).unwrap();
                for x in -3i64..=3 {
                    // det(xI − M) at integer x via fraction-free elimination
                    let dense: Vec<Vec<BigInt>> = (0..n)
                        .map(|i| {
                            (0..n)
                                .map(|j| {
                                    let diag = if i == j { BigInt::from(x) } else { BigInt::zero() };
                                    diag - BigInt::from(m.entry(i, j))
                                })
                                .collect()
                        })
                        .collect();
                    let want = det_bareiss(dense);
                    let got = p
                        .coeffs()
                        .iter()
                        .enumerate()
                        .map(|(i, c)| c * BigInt::from(x).pow(i as u32))
                        .sum::<BigInt>();
                    assert_eq!(got, want, "n={n}, x={x}");
                }
            }
        }
    }

    #[test]
    fn growth_rate_examples() {
        let g = |rows: &[&[u64]]| growth_rate(&mat(rows), 1e-10).unwrap();
        assert!((g(&[&[0, 0, 2], &[1, 0, 0], &[0, 1, 1]]).lambda - 1.6956208).abs() < 1e-6);
        assert!((g(&[&[0, 0, 2], &[1, 0, 0], &[0, 1, 0]]).lambda - 1.2599210).abs() < 1e-6);
        assert_eq!(g(&[&[1]]).lambda, 1.0);
        assert_eq!(g(&[&[0, 0], &[0, 0]]).lambda, 0.0);
        // pure 3-cycle: λ = 1, imprimitive but the A+I bracket still converges
        let r = g(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        assert!((r.lambda - 1.0).abs() <= 1e-10);
        // block triangular: max of diagonal blocks
        let r = g(&[&[2, 5], &[0, 3]]);
        assert!((r.lambda - 3.0).abs() <= 1e-10);
    }

    #[test]
    fn growth_rate_within_column_sum_bounds() {
        let m = mat(&[&[0, 1, 2], &[1, 1, 0], &[1, 0, 0]]);
        let sums = m.column_sums();
        let r = growth_rate(&m, 1e-10).unwrap();
        let lo = *sums.iter().min().unwrap() as f64;
        let hi = *sums.iter().max().unwrap() as f64;
        assert!(r.lambda >= lo - 1e-9 && r.lambda <= hi + 1e-9);
    }

    #[test]
    fn growth_rate_permutation_invariant() {
        let m = mat(&[&[0, 0, 2], &[1, 0, 0], &[0, 1, 1]]);
        // permute (0 1 2) → (2 0 1)
        let perm = [2usize, 0, 1];
        let mut pm = SparseMatrix::new(3);
        for j in 0..3 {
            for &(r, w) in m.column(j) {
                pm.add(perm[r as usize], perm[j], w);
            }
        }
        let a = growth_rate(&m, 1e-11).unwrap().lambda;
        let b = growth_rate(&pm, 1e-11).unwrap().lambda;
        assert!((a - b).abs() <= 1e-10);
    }

    #[test]
    fn certified_growth_matches_iteration() {
        for rows in [
            vec![vec![0u64, 0, 2], vec![1, 0, 0], vec![0, 1, 1]],
            vec![vec![0u64, 0, 2], vec![1, 0, 0], vec![0, 1, 0]],
            vec![vec![1u64, 1], vec![1, 0]],
        ] {
            let m = SparseMatrix::from_rows(&rows).unwrap();
            let a = growth_rate(&m, 1e-11).unwrap();
            let b = growth_rate_certified(&m, 1e-12).unwrap();
            assert_eq!(b.method, GrowthMethod::CharPoly);
            assert!((a.lambda - b.lambda).abs() <= 1e-9, "{} vs {}", a.lambda, b.lambda);
        }
    }

    #[test]
    fn imprimitivity_detection() {
        // 3-cycle: index 3
        let m = mat(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let comps = strongly_connected_components(&m);
        assert_eq!(comps.len(), 1);
        assert_eq!(block_imprimitivity(&m, &comps[0]), 3);
        // fibonacci: primitive
        let m = mat(&[&[1, 1], &[1, 0]]);
        let comps = strongly_connected_components(&m);
        assert_eq!(block_imprimitivity(&m, &comps[0]), 1);
    }

    #[test]
    fn scc_structure() {
        // 0→1→2→0 cycle plus transient 3→0
        let mut m = SparseMatrix::new(4);
        m.add(1, 0, 1);
        m.add(2, 1, 1);
        m.add(0, 2, 1);
        m.add(0, 3, 1);
        let comps = strongly_connected_components(&m);
        assert_eq!(comps, vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn largest_real_root_examples() {
        let p = IntPolynomial::from_i64(&[-1, -2, 0, 0, 1]); // x⁴ − 2x − 1
        let r = largest_real_root(&p, 1.0, 2.0, 1e-12).unwrap();
        assert!((r - 1.3953369).abs() < 1e-6);

        let p = IntPolynomial::from_i64(&[-2, 1]); // x − 2
        assert_eq!(largest_real_root(&p, 1.0, 3.0, 1e-12).unwrap(), 2.0);

        let p = IntPolynomial::from_i64(&[-2, -1, 0, 1]); // x³ − x − 2
        let r = largest_real_root(&p, 1.0, 2.0, 1e-12).unwrap();
        assert!((r - 1.5213797).abs() < 1e-6);

        let p = IntPolynomial::from_i64(&[1, 0, 1]); // x² + 1
        assert!(largest_real_root(&p, 0.0, 2.0, 1e-12).is_err());

        // picks the LARGEST root: (x−1)(x−3/2) on [0, 2]
        let p = IntPolynomial::from_i64(&[3, -5, 2]); // 2x² − 5x + 3 = (2x−3)(x−1)
        let r = largest_real_root(&p, 0.0, 2.0, 1e-12).unwrap();
        assert!((r - 1.5).abs() < 1e-10);
    }

    #[test]
    fn polynomial_display() {
        assert_eq!(IntPolynomial::from_i64(&[-1, -2, 0, 0, 1]).to_string(), "x^4 - 2x - 1");
        assert_eq!(IntPolynomial::from_i64(&[-2, 0, -1, 1]).to_string(), "x^3 - x^2 - 2");
        assert_eq!(IntPolynomial::from_i64(&[-2, 1]).to_string(), "x - 2");
        assert_eq!(IntPolynomial::from_i64(&[1, 0, -2, 1]).to_string(), "x^3 - 2x^2 + 1");
        assert_eq!(IntPolynomial::from_i64(&[0]).to_string(), "0");
        assert_eq!(IntPolynomial::from_i64(&[5]).to_string(), "5");
        assert_eq!(IntPolynomial::from_i64(&[0, -1]).to_string(), "-x");
    }

    #[test]
    fn dyadic_decomposition_is_exact() {
        for x in [0.0, 1.0, 0.5, 2.0, 1.5213797, 0.95, 3.0] {
            let (n, s) = to_dyadic(x);
            assert_eq!(dyadic_to_f64(&n, s), x);
        }
    }
}

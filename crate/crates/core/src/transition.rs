//! Transition matrix on postcritical angle pairs.
//!
//! For a rational angle θ with forward orbit a₁ = θ, a_{i+1} = 2a_i (mod 1)
//! of length m = preperiod + period, the basis consists of the unordered
//! pairs {i, j}, 1 ≤ i < j ≤ m, of orbit indices. Doubling maps the chord
//! joining a_i and a_j either to the single chord {succ(i), succ(j)} (when
//! the diameter {θ/2, (θ+1)/2} does not separate the endpoints) or to the
//! two chords {1, succ(i)} and {1, succ(j)} through the critical value
//! (when it does). The spectral radius λ of the resulting nonnegative
//! integer matrix is the core growth rate: h = log λ.

use crate::error::{Error, Result};
use crate::exact_angle::{Angle, OrbitStructure};
use crate::spectral::{
    block_growth, block_imprimitivity, strongly_connected_components, SparseMatrix, ITERATION_CAP,
};

/// Largest orbit length (preperiod + period) accepted for matrix construction;
/// the pair basis grows quadratically, so this caps the dimension near 5·10⁵.
pub const MAX_PAIR_ORBIT: u32 = 1024;

/// Which side of the partition diameter {θ/2, (θ+1)/2} a point falls on.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Side {
    Lower,
    Upper,
    Boundary,
}

fn side_of(x: Angle, theta: Angle) -> Side {
    let (b1, b2) = theta.halves();
    if x == b1 || x == b2 {
        Side::Boundary
    } else if b1 < x && x < b2 {
        Side::Upper
    } else {
        Side::Lower
    }
}

/// Forward orbit a₁ = θ, a_{i+1} = 2a_i, of length preperiod + period.
pub fn postcritical_angles(theta: Angle) -> Result<Vec<Angle>> {
    if theta.is_zero() {
        return Err(Error::domain("angle 0 has a fixed critical value; no pair basis"));
    }
    theta.orbit()
}

/// Whether the open diameter through θ/2 and (θ+1)/2 strictly separates x
/// from y. Points on the diameter itself are never separated from anything.
pub fn is_separated(x: Angle, y: Angle, theta: Angle) -> bool {
    let sx = side_of(x, theta);
    let sy = side_of(y, theta);
    sx != Side::Boundary && sy != Side::Boundary && sx != sy
}

/// Transition matrix of a rational angle on its basis of orbit-index pairs.
#[derive(Clone, Debug)]
pub struct PairMatrix {
    theta: Angle,
    structure: OrbitStructure,
    orbit: Vec<Angle>,
    matrix: SparseMatrix,
}

impl PairMatrix {
    pub fn theta(&self) -> Angle {
        self.theta
    }

    pub fn orbit_structure(&self) -> OrbitStructure {
        self.structure
    }

    /// The postcritical orbit a₁, …, a_m.
    pub fn orbit(&self) -> &[Angle] {
        &self.orbit
    }

    /// Number of orbit points m.
    pub fn orbit_len(&self) -> usize {
        self.orbit.len()
    }

    /// Dimension of the pair basis, m(m−1)/2.
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    /// Basis position of the pair {i, j} (1-based orbit indices, i < j).
    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        let m = self.orbit.len();
        assert!(1 <= i && i < j && j <= m, "pair indices out of range");
        // pairs are ordered lexicographically: (1,2), (1,3), …, (1,m), (2,3), …
        (i - 1) * m - (i - 1) * i / 2 + (j - i - 1)
    }

    /// Inverse of [`pair_index`]: the (i, j) labels of a basis position.
    pub fn pair_label(&self, index: usize) -> (usize, usize) {
        let m = self.orbit.len();
        let mut i = 1usize;
        let mut idx = index;
        loop {
            let row_len = m - i;
            if idx < row_len {
                return (i, i + 1 + idx);
            }
            idx -= row_len;
            i += 1;
            assert!(i < m, "pair position out of range");
        }
    }
}

/// Builds the pair transition matrix for a rational angle in (0, 1).
///
/// The successor map on orbit indices is succ(i) = i + 1 for i < m and
/// succ(m) = preperiod + 1 (re-entry into the cycle). Each basis pair
/// contributes one column: two entries through the critical value when its
/// endpoints are separated, a single entry otherwise. Every column therefore
/// sums to 1 or 2, which pins λ ∈ [1, 2].
pub fn build_pair_matrix(theta: Angle) -> Result<PairMatrix> {
    if theta.is_zero() {
        return Err(Error::domain("angle 0 has a fixed critical value; no pair basis"));
    }
    let structure = theta.orbit_structure()?;
    if structure.orbit_len() > MAX_PAIR_ORBIT {
        return Err(Error::budget(format!(
            "orbit length {} exceeds pair-matrix cap {MAX_PAIR_ORBIT}",
            structure.orbit_len()
        )));
    }
    let orbit = theta.orbit()?;
    let m = orbit.len();
    let k = structure.preperiod as usize;
    let succ = |i: usize| -> usize {
        if i < m {
            i + 1
        } else {
            k + 1
        }
    };
    let dim = m * (m - 1) / 2;
    let mut matrix = SparseMatrix::new(dim);

    let sides: Vec<Side> = orbit.iter().map(|&a| side_of(a, theta)).collect();
    let pair_index = |i: usize, j: usize| -> usize {
        debug_assert!(1 <= i && i < j && j <= m);
        (i - 1) * m - (i - 1) * i / 2 + (j - i - 1)
    };
    let normalized = |i: usize, j: usize| -> Option<usize> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => Some(pair_index(i, j)),
            Greater => Some(pair_index(j, i)),
            // a degenerate target {i, i} carries no chord; it is provably
            // unreachable for rational angles, but guard rather than panic
            Equal => None,
        }
    };

    for i in 1..=m {
        for j in (i + 1)..=m {
            let col = pair_index(i, j);
            let separated = sides[i - 1] != Side::Boundary
                && sides[j - 1] != Side::Boundary
                && sides[i - 1] != sides[j - 1];
            if separated {
                for target in [normalized(1, succ(i)), normalized(1, succ(j))] {
                    if let Some(row) = target {
                        matrix.add(row, col, 1);
                    }
                }
            } else if let Some(row) = normalized(succ(i), succ(j)) {
                matrix.add(row, col, 1);
            }
        }
    }

    Ok(PairMatrix {
        theta,
        structure,
        orbit,
        matrix,
    })
}

/// The spectrally dominant strongly connected component of a pair matrix.
#[derive(Clone, Debug)]
pub struct ComponentInfo {
    /// Basis positions (indices into the pair basis) of the component.
    pub vertices: Vec<usize>,
    /// Certified spectral radius of the component.
    pub lambda: f64,
    /// Imprimitivity index (gcd of cycle lengths); 1 means primitive.
    pub imprimitivity: u32,
    /// Ratio iterations spent on this component (0 when exact).
    pub iterations: u64,
    /// Certified half-width of the bracket around λ.
    pub residual: f64,
}

impl ComponentInfo {
    pub fn primitive(&self) -> bool {
        self.imprimitivity == 1
    }
}

/// Finds the strongly connected component with the largest spectral radius.
///
/// Ties keep the component containing the smallest basis position. The
/// overall matrix spectral radius equals the dominant component's λ because
/// the spectrum of a block-triangular matrix is the union over the blocks.
pub fn dominant_component(pm: &PairMatrix, tol: f64) -> Result<ComponentInfo> {
    let m = pm.matrix();
    let comps = strongly_connected_components(m);
    let mut best: Option<ComponentInfo> = None;
    let mut spent = 0u64;
    for comp in &comps {
        let budget = ITERATION_CAP.saturating_sub(spent).max(1);
        let (lambda, iterations, residual) = block_growth(m, comp, tol, budget)?;
        spent += iterations;
        let better = match &best {
            Some(b) => lambda > b.lambda + tol,
            None => true,
        };
        if better {
            let imprimitivity = if lambda > 0.0 {
                block_imprimitivity(m, comp)
            } else {
                1
            };
            best = Some(ComponentInfo {
                vertices: comp.clone(),
                lambda,
                imprimitivity,
                iterations,
                residual,
            });
        }
    }
    best.ok_or_else(|| Error::domain("matrix has no components"))
}

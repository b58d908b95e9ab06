//! Normalized cochains and mod-2 cohomology of a finite simplicial set.
//!
//! A t-cochain is a function on the nondegenerate t-simplices, extended
//! by zero over the degenerate ones; the coboundary of f at a
//! nondegenerate (t+1)-simplex x is Σᵢ f(dᵢx). Cohomology through
//! degree t therefore needs the space tabulated through level t + 1 —
//! callers get an assertion, not a silently truncated answer. Products
//! are front-face/back-face (Alexander–Whitney): strictly associative
//! and unital on cochains, commutative only after passing to classes,
//! which is where the ring extractor works.

use std::collections::BTreeMap;

use crate::f2::{F2Matrix, F2Vector, Subspace};
use crate::homological::algebra::GradedAlgebraPresentation;
use crate::homological::complex::Homology;

use super::{FiniteSimplicialSet, SimplicialMap, SpaceError};

/// Coboundary on normalized cochains: rows index the nondegenerate
/// t-simplices, columns the nondegenerate (t+1)-simplices.
pub fn coboundary_matrix(x: &FiniteSimplicialSet, t: usize) -> F2Matrix {
    let src = x.nondegenerate(t);
    let dst = x.nondegenerate(t + 1);
    let mut m = F2Matrix::zero(src.len(), dst.len());
    for (j, &c) in dst.iter().enumerate() {
        for i in 0..=(t + 1) {
            let y = x.face(t + 1, i, c);
            if x.is_degenerate(t, y) {
                continue;
            }
            let r = src.binary_search(&y).expect("nondegenerate face is listed");
            m.set(r, j, !m.get(r, j));
        }
    }
    m
}

/// Cohomology of one space in degrees 0..=t_max, with representative
/// cocycles chosen deterministically.
pub struct CohomologyPage {
    t_max: usize,
    nondeg: Vec<Vec<usize>>,
    groups: Vec<Homology>,
}

pub fn cohomology(x: &FiniteSimplicialSet, t_max: usize) -> CohomologyPage {
    assert!(
        t_max + 1 <= x.level_cap(),
        "cohomology through degree {t_max} needs levels through {}",
        t_max + 1
    );
    let nondeg: Vec<Vec<usize>> = (0..=t_max).map(|t| x.nondegenerate(t)).collect();
    let mut groups = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        let n = nondeg[t].len();
        let cycles = Subspace::from_vectors(n, coboundary_matrix(x, t).left_null_space());
        let boundaries = if t == 0 {
            Subspace::zero(n)
        } else {
            Subspace::from_vectors(n, coboundary_matrix(x, t - 1).row_space())
        };
        debug_assert!(cycles.contains_subspace(&boundaries));
        let reps = boundaries.complement_in(&cycles);
        groups.push(Homology {
            cycles,
            boundaries,
            reps,
        });
    }
    CohomologyPage {
        t_max,
        nondeg,
        groups,
    }
}

impl CohomologyPage {
    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn dim(&self, t: usize) -> usize {
        self.groups[t].dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.t_max).map(|t| self.dim(t)).collect()
    }

    /// Basis of C^t: ascending indices of nondegenerate t-simplices.
    pub fn basis(&self, t: usize) -> &[usize] {
        &self.nondeg[t]
    }

    pub fn rep(&self, t: usize, k: usize) -> &F2Vector {
        &self.groups[t].reps[k]
    }

    /// Coordinates of a cocycle over the chosen representatives; None if
    /// the vector is not a cocycle.
    pub fn class_of(&self, t: usize, v: &F2Vector) -> Option<F2Vector> {
        self.groups[t].class_of(v)
    }
}

/// Alexander–Whitney product of normalized cochains: evaluate f on the
/// front p-face and g on the back q-face, zero whenever either face is
/// degenerate.
pub fn cup_product(
    x: &FiniteSimplicialSet,
    p: usize,
    f: &F2Vector,
    q: usize,
    g: &F2Vector,
) -> F2Vector {
    let src_p = x.nondegenerate(p);
    let src_q = x.nondegenerate(q);
    let dst = x.nondegenerate(p + q);
    assert_eq!(f.len(), src_p.len());
    assert_eq!(g.len(), src_q.len());
    let mut out = F2Vector::zero(dst.len());
    for (j, &c) in dst.iter().enumerate() {
        let front = x.front_face(p + q, p, c);
        if x.is_degenerate(p, front) {
            continue;
        }
        let back = x.back_face(p + q, q, c);
        if x.is_degenerate(q, back) {
            continue;
        }
        let fi = src_p.binary_search(&front).expect("front face is listed");
        let gi = src_q.binary_search(&back).expect("back face is listed");
        if f.get(fi) && g.get(gi) {
            out.set(j, true);
        }
    }
    out
}

/// Pull a normalized t-cochain on `dst` back along a simplicial map
/// `phi: src → dst`, extending by zero over cells that phi degenerates.
pub fn pullback_cochain(
    phi: &SimplicialMap,
    src: &FiniteSimplicialSet,
    dst: &FiniteSimplicialSet,
    t: usize,
    f: &F2Vector,
) -> F2Vector {
    let src_basis = src.nondegenerate(t);
    let dst_basis = dst.nondegenerate(t);
    assert_eq!(f.len(), dst_basis.len());
    let mut out = F2Vector::zero(src_basis.len());
    for (i, &a) in src_basis.iter().enumerate() {
        let b = phi.apply(t, a);
        if dst.is_degenerate(t, b) {
            continue;
        }
        let k = dst_basis.binary_search(&b).expect("image cell is listed");
        out.set(i, f.get(k));
    }
    out
}

/// Matrix of the pullback C^t(dst) → C^t(src) over the nondegenerate
/// bases: rows index dst cochains, columns src simplices.
pub fn pullback_matrix(
    phi: &SimplicialMap,
    src: &FiniteSimplicialSet,
    dst: &FiniteSimplicialSet,
    t: usize,
) -> F2Matrix {
    let src_basis = src.nondegenerate(t);
    let dst_basis = dst.nondegenerate(t);
    let mut m = F2Matrix::zero(dst_basis.len(), src_basis.len());
    for (j, &a) in src_basis.iter().enumerate() {
        let b = phi.apply(t, a);
        if dst.is_degenerate(t, b) {
            continue;
        }
        let r = dst_basis.binary_search(&b).expect("image cell is listed");
        m.set(r, j, true);
    }
    m
}

/// The cohomology ring through degree `t_max` as a multiplication table
/// on the chosen representatives. Requires a connected space; the ring
/// axioms (unit, graded commutativity, associativity) are re-verified on
/// the table by the presentation constructor.
pub fn cohomology_ring(
    x: &FiniteSimplicialSet,
    t_max: usize,
) -> Result<GradedAlgebraPresentation, SpaceError> {
    let page = cohomology(x, t_max);
    if page.dim(0) != 1 {
        return Err(SpaceError::NotConnected(page.dim(0)));
    }
    let dims = page.dims();
    let labels: Vec<Vec<String>> = dims
        .iter()
        .enumerate()
        .map(|(t, &n)| {
            (0..n)
                .map(|k| {
                    if t == 0 {
                        "1".to_string()
                    } else if n == 1 {
                        format!("h{t}")
                    } else {
                        format!("h{t}_{k}")
                    }
                })
                .collect()
        })
        .collect();
    let mut mul = BTreeMap::new();
    for a in 0..=t_max {
        for b in 0..=(t_max - a) {
            if dims[a] == 0 || dims[b] == 0 {
                continue;
            }
            let mut rows = Vec::with_capacity(dims[a] * dims[b]);
            for i in 0..dims[a] {
                for j in 0..dims[b] {
                    let prod = cup_product(x, a, page.rep(a, i), b, page.rep(b, j));
                    let class = page
                        .class_of(a + b, &prod)
                        .expect("cup of cocycles is a cocycle");
                    rows.push(class);
                }
            }
            mul.insert((a, b), F2Matrix::from_rows(rows, dims[a + b]));
        }
    }
    GradedAlgebraPresentation::new(x.name(), t_max, dims, labels, mul)
        .map_err(|e| SpaceError::Invalid(format!("cohomology table is not a ring: {e}")))
}

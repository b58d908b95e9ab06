//! Bigraded cochain complexes concentrated in columns −s ≤ 0, with
//! differentials of bidegree (1, 0), and their homology.
//!
//! A column index s here always denotes the bidegree (−s, t). Elements are
//! row vectors; the differential at (s, t) maps C^{−s,t} → C^{−s+1,t} by
//! right multiplication. d∘d = 0 is asserted at construction.

use std::collections::BTreeMap;

use crate::f2::{F2Matrix, F2Vector, Subspace};

#[derive(Clone, Debug)]
pub struct BigradedComplex {
    s_max: usize,
    t_max: usize,
    dims: BTreeMap<(usize, usize), usize>,
    d: BTreeMap<(usize, usize), F2Matrix>,
    labels: BTreeMap<(usize, usize), Vec<String>>,
}

impl BigradedComplex {
    /// `dims` for every bidegree with a nonzero space; `d[(s,t)]` whenever
    /// both (s,t) and (s−1,t) are nonzero.
    pub fn new(
        s_max: usize,
        t_max: usize,
        dims: BTreeMap<(usize, usize), usize>,
        d: BTreeMap<(usize, usize), F2Matrix>,
        labels: BTreeMap<(usize, usize), Vec<String>>,
    ) -> Self {
        let c = BigradedComplex {
            s_max,
            t_max,
            dims,
            d,
            labels,
        };
        c.assert_shapes();
        c.assert_dd_zero();
        c
    }

    fn assert_shapes(&self) {
        for (&(s, t), m) in &self.d {
            assert!(s >= 1, "no differential out of column 0");
            assert_eq!(m.rows(), self.dim(s, t), "differential rows at ({s},{t})");
            assert_eq!(m.cols(), self.dim(s - 1, t), "differential cols at ({s},{t})");
        }
    }

    fn assert_dd_zero(&self) {
        for (&(s, t), m) in &self.d {
            if let Some(next) = self.d.get(&(s + 1, t)) {
                assert!(next.mul(m).is_zero(), "d∘d ≠ 0 at ({s},{t})");
            }
        }
    }

    pub fn s_max(&self) -> usize {
        self.s_max
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn dim(&self, s: usize, t: usize) -> usize {
        self.dims.get(&(s, t)).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.dims
    }

    /// The differential C^{−s,t} → C^{−s+1,t}; zero map when absent.
    pub fn differential(&self, s: usize, t: usize) -> F2Matrix {
        match self.d.get(&(s, t)) {
            Some(m) => m.clone(),
            None => F2Matrix::zero(self.dim(s, t), s.checked_sub(1).map_or(0, |p| self.dim(p, t))),
        }
    }

    pub fn labels(&self, s: usize, t: usize) -> Option<&Vec<String>> {
        self.labels.get(&(s, t))
    }

    /// Homology at (−s, t): cycles (kernel of the outgoing differential) by
    /// boundaries (image of the incoming one), with deterministic
    /// representatives spanning a complement of the boundaries inside the
    /// cycles.
    pub fn homology(&self, s: usize, t: usize) -> Homology {
        let n = self.dim(s, t);
        let cycles = match self.d.get(&(s, t)) {
            Some(m) => Subspace::from_vectors(n, m.left_null_space()),
            None => Subspace::full(n),
        };
        let boundaries = match self.d.get(&(s + 1, t)) {
            Some(m) => Subspace::from_vectors(n, m.row_space()),
            None => Subspace::zero(n),
        };
        debug_assert!(cycles.contains_subspace(&boundaries));
        let reps = boundaries.complement_in(&cycles);
        Homology {
            cycles,
            boundaries,
            reps,
        }
    }

    /// All homology dimensions for s ≤ s_cap, t ≤ t_max. Bidegrees with
    /// zero homology are omitted.
    pub fn homology_dims(&self, s_cap: usize) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for s in 0..=s_cap {
            for t in 0..=self.t_max {
                if self.dim(s, t) == 0 {
                    continue;
                }
                let h = self.homology(s, t).dim();
                if h > 0 {
                    out.insert((s, t), h);
                }
            }
        }
        out
    }

    /// Conjugate every space by a permutation of its basis — a test helper
    /// for basis-ordering independence of homology.
    pub fn permute_bases(&self, perm_for: impl Fn(usize, usize, usize) -> Vec<usize>) -> Self {
        let mut perms: BTreeMap<(usize, usize), F2Matrix> = BTreeMap::new();
        for (&(s, t), &n) in &self.dims {
            let p = perm_for(s, t, n);
            assert_eq!(p.len(), n);
            let mut m = F2Matrix::zero(n, n);
            for (i, &pi) in p.iter().enumerate() {
                m.set(i, pi, true);
            }
            perms.insert((s, t), m);
        }
        let id = |n: usize| F2Matrix::identity(n);
        let mut d = BTreeMap::new();
        for (&(s, t), m) in &self.d {
            let src = perms.get(&(s, t)).cloned().unwrap_or_else(|| id(m.rows()));
            let dst = perms
                .get(&(s - 1, t))
                .cloned()
                .unwrap_or_else(|| id(m.cols()));
            // new basis e'_i = e_{p(i)}: new matrix = P·M·Q⁻¹ with Q a
            // permutation, so Q⁻¹ = Qᵀ
            d.insert((s, t), src.mul(m).mul(&dst.transpose()));
        }
        BigradedComplex::new(self.s_max, self.t_max, self.dims.clone(), d, BTreeMap::new())
    }
}

/// One homology group with chosen representatives.
pub struct Homology {
    pub cycles: Subspace,
    pub boundaries: Subspace,
    pub reps: Vec<F2Vector>,
}

impl Homology {
    pub fn dim(&self) -> usize {
        self.cycles.dim() - self.boundaries.dim()
    }

    /// The class of a cycle in coordinates over `reps`; None if not a cycle.
    pub fn class_of(&self, v: &F2Vector) -> Option<F2Vector> {
        if !self.cycles.contains(v) {
            return None;
        }
        // reduce modulo boundaries, then solve over the representative span
        let mut rows = self.reps.clone();
        let k = rows.len();
        for b in self.boundaries.basis() {
            rows.push(b.clone());
        }
        let m = F2Matrix::from_rows(rows, v.len());
        let sol = m.solve_left(v)?;
        Some(sol.slice(0, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_step(d1: F2Matrix, d2: F2Matrix, t: usize) -> BigradedComplex {
        // columns 0,1,2 at a single t
        let mut dims = BTreeMap::new();
        dims.insert((0, t), d1.cols());
        dims.insert((1, t), d1.rows());
        dims.insert((2, t), d2.rows());
        let mut d = BTreeMap::new();
        d.insert((1, t), d1);
        d.insert((2, t), d2);
        BigradedComplex::new(2, t, dims, d, BTreeMap::new())
    }

    #[test]
    fn exact_complex_has_no_homology_in_middle() {
        // F₂ --id--> F₂ --0--> F₂  (columns 2 → 1 → 0)
        let c = two_step(F2Matrix::zero(1, 1), F2Matrix::identity(1), 0);
        assert_eq!(c.homology(1, 0).dim(), 0);
        assert_eq!(c.homology(0, 0).dim(), 1);
        assert_eq!(c.homology(2, 0).dim(), 0);
    }

    #[test]
    fn zero_differentials_give_full_homology() {
        let c = two_step(F2Matrix::zero(2, 3), F2Matrix::zero(2, 2), 1);
        assert_eq!(c.homology(0, 1).dim(), 3);
        assert_eq!(c.homology(1, 1).dim(), 2);
        assert_eq!(c.homology(2, 1).dim(), 2);
    }

    #[test]
    #[should_panic(expected = "d∘d")]
    fn dd_nonzero_is_rejected() {
        two_step(F2Matrix::identity(1), F2Matrix::identity(1), 0);
    }

    #[test]
    fn class_of_representative() {
        // d: C1 → C0 zero; d: C2 → C1 image = span{(1,1)}
        let d2 = F2Matrix::from_bit_rows(&[&[1, 1]], 2);
        let c = two_step(F2Matrix::zero(2, 1), d2, 0);
        let h = c.homology(1, 0);
        assert_eq!(h.dim(), 1);
        let e0 = F2Vector::unit(2, 0);
        let e1 = F2Vector::unit(2, 1);
        // e0 and e1 differ by a boundary → same class
        assert_eq!(h.class_of(&e0), h.class_of(&e1));
        assert!(h.class_of(&e0).is_some());
    }

    #[test]
    fn permuted_bases_same_homology() {
        let d1 = F2Matrix::from_bit_rows(&[&[1, 0, 1], &[0, 1, 1]], 3);
        let c = two_step(d1, F2Matrix::zero(1, 2), 2);
        let p = c.permute_bases(|_s, _t, n| (0..n).rev().collect());
        for s in 0..=2 {
            assert_eq!(c.homology(s, 2).dim(), p.homology(s, 2).dim());
        }
    }
}

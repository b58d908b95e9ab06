//! Loop spaces of spheres with partial Steenrod knowledge.
//!
//! H̄*(ΩS^{n+1}; F₂) is a divided power algebra on a degree-n class: one
//! basis vector y(k) in each degree kn, k ≥ 1.  Only part of the Steenrod
//! action is forced by the grading and the divided power multiplication:
//!
//!  * Sq^j y(k) lands in degree kn + j, which is zero unless n | kn + j;
//!  * the top square Sq^{kn} y(k) = y(k)² = C(2k, k)·y(2k) = 0 mod 2,
//!    since the central binomial coefficient is always even for k ≥ 1.
//!
//! Everything else is left as an explicit `Unknown` — never silently zero —
//! so the nilpotency machinery can only certify what these entries force.

use std::collections::{BTreeMap, BTreeSet};

use crate::f2::F2Matrix;
use crate::unstable::nilpotency::{SqKnowledge, SqOracle};

use super::EMError;

/// One stored entry of a partially known action.
#[derive(Clone, Debug)]
pub enum SqEntry {
    Known(F2Matrix),
    Unknown,
}

/// A graded F₂ module whose Steenrod action is only partially known.
///
/// Bookkeeping mirrors `BoundedUnstableModule` except for the central
/// convention: an *absent* in-bound entry means `Unknown`, not zero.  The
/// `vanishing` set records operations known to be zero even though their
/// target degree exceeds the bound.
#[derive(Clone, Debug)]
pub struct PartialModule {
    name: String,
    bound: usize,
    dims: Vec<usize>,
    labels: Vec<Vec<String>>,
    /// (k, d) → what is known about Sq^k on degree d, for d + k ≤ bound.
    entries: BTreeMap<(usize, usize), SqEntry>,
    /// (k, d) with d + k > bound where Sq^k is known to vanish.
    vanishing: BTreeSet<(usize, usize)>,
}

impl PartialModule {
    pub fn new(name: &str, bound: usize, dims: Vec<usize>, labels: Vec<Vec<String>>) -> Self {
        assert_eq!(dims.len(), bound + 1);
        assert_eq!(labels.len(), bound + 1);
        for (d, l) in labels.iter().enumerate() {
            assert_eq!(l.len(), dims[d], "labels must match dims in degree {d}");
        }
        PartialModule {
            name: name.into(),
            bound,
            dims,
            labels,
            entries: BTreeMap::new(),
            vanishing: BTreeSet::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, d: usize) -> usize {
        if d <= self.bound {
            self.dims[d]
        } else {
            0
        }
    }

    pub fn label(&self, d: usize, i: usize) -> &str {
        &self.labels[d][i]
    }

    /// Record an in-bound entry (shape-checked).
    pub fn set_known(&mut self, k: usize, d: usize, m: F2Matrix) {
        assert!(k >= 1 && d + k <= self.bound);
        assert_eq!(m.rows(), self.dims[d]);
        assert_eq!(m.cols(), self.dims[d + k]);
        self.entries.insert((k, d), SqEntry::Known(m));
    }

    /// Record that Sq^k vanishes on degree d although d + k > bound.
    pub fn set_vanishing(&mut self, k: usize, d: usize) {
        assert!(k >= 1 && d + k > self.bound);
        self.vanishing.insert((k, d));
    }

    /// How many in-bound entries are pinned down.
    pub fn known_count(&self) -> usize {
        self.entries
            .values()
            .filter(|e| matches!(e, SqEntry::Known(_)))
            .count()
    }
}

impl SqOracle for PartialModule {
    fn degree_bound(&self) -> usize {
        self.bound
    }

    fn dimension(&self, d: usize) -> usize {
        self.dim(d)
    }

    fn sq_knowledge(&self, k: usize, d: usize) -> SqKnowledge {
        if k > d {
            // instability: Sq^k kills degrees below k
            return SqKnowledge::ZeroMap;
        }
        if d + k <= self.bound {
            if self.dims[d] == 0 || self.dims[d + k] == 0 {
                return SqKnowledge::ZeroMap;
            }
            return match self.entries.get(&(k, d)) {
                Some(SqEntry::Known(m)) => SqKnowledge::Matrix(m.clone()),
                Some(SqEntry::Unknown) | None => SqKnowledge::Unknown,
            };
        }
        if self.dims[d] == 0 || self.vanishing.contains(&(k, d)) {
            SqKnowledge::ZeroMap
        } else {
            SqKnowledge::Unknown
        }
    }
}

/// H̄*(ΩS^{sphere_dim}; F₂) through degree `bound`, with exactly the forced
/// Steenrod entries filled in.
///
/// The orbit walks only ever query Sq^k with k ≤ d (instability truncates
/// the rest), so out-of-bound vanishing entries are recorded for k ≤ d.
pub fn loop_module(sphere_dim: usize, bound: usize) -> Result<PartialModule, EMError> {
    if sphere_dim < 2 {
        return Err(EMError::InvalidParameter(format!(
            "loop space needs a sphere of dimension ≥ 2, got {sphere_dim}"
        )));
    }
    let n = sphere_dim - 1;
    let mut dims = vec![0usize; bound + 1];
    let mut labels = vec![Vec::new(); bound + 1];
    let mut k = 1;
    while k * n <= bound {
        dims[k * n] = 1;
        labels[k * n].push(format!("y({k})"));
        k += 1;
    }
    let mut m = PartialModule::new(&format!("loops(S({sphere_dim}))"), bound, dims, labels);
    let mut k = 1;
    while k * n <= bound {
        let d = k * n;
        for j in 1..=d {
            let forced_zero = (d + j) % n != 0 || j == d;
            if !forced_zero {
                continue;
            }
            if d + j <= bound {
                m.set_known(j, d, F2Matrix::zero(1, m.dim(d + j)));
            } else {
                m.set_vanishing(j, d);
            }
        }
        k += 1;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unstable::nilpotency::{basis_verdicts, nilpotency_degree, NilpotencyVerdict};
    use crate::unstable::ModuleElement;
    use crate::f2::F2Vector;

    #[test]
    fn loop_space_dims_follow_the_divided_power_pattern() {
        // ΩS²: one class in every positive degree; ΩS³: even degrees only.
        let m = loop_module(2, 8).unwrap();
        assert_eq!(m.dims(), &[0, 1, 1, 1, 1, 1, 1, 1, 1]);
        let m = loop_module(3, 8).unwrap();
        assert_eq!(m.dims(), &[0, 0, 1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(m.label(4, 0), "y(2)");
        assert!(loop_module(1, 8).is_err());
    }

    #[test]
    fn generator_verdict_is_exactly_n() {
        // y(1) ∈ degree n: Sq_t for t < n is forced zero (wrong target
        // degree, or the even top square), and Sq_n fixes it.
        for sphere in 2..=4usize {
            let n = sphere - 1;
            let m = loop_module(sphere, 20).unwrap();
            let y = ModuleElement {
                degree: n,
                vec: F2Vector::unit(1, 0),
            };
            assert_eq!(
                nilpotency_degree(&m, &y),
                NilpotencyVerdict::ExactlyNilpotent(n),
                "sphere {sphere}"
            );
        }
    }

    #[test]
    fn higher_divided_powers_are_at_least_n_nilpotent() {
        // y(k), k ≥ 2: every orbit below t = n is forced dead, and the
        // first step of the t = n orbit is an honest Unknown — the verdict
        // must stop at AtLeast, not guess Exactly.
        let m = loop_module(3, 20).unwrap();
        for (d, _, v) in basis_verdicts(&m) {
            if m.dim(d) == 0 {
                continue;
            }
            if d == 2 {
                assert_eq!(v, NilpotencyVerdict::ExactlyNilpotent(2));
            } else {
                assert_eq!(v, NilpotencyVerdict::AtLeastNilpotent(2), "degree {d}");
            }
        }
    }

    #[test]
    fn unknown_entries_are_sentinels_not_zeros() {
        // Sq² y(2) on ΩS³ lands in degree 6 = 3·2 (a legal target) and is
        // not forced by anything the module knows.
        let m = loop_module(3, 12).unwrap();
        match m.sq_knowledge(2, 4) {
            SqKnowledge::Unknown => {}
            _ => panic!("unforced in-bound entry must be Unknown"),
        }
        // the top square IS forced:
        match m.sq_knowledge(4, 4) {
            SqKnowledge::Matrix(mat) => assert!(mat.is_zero()),
            _ => panic!("top square is a forced zero"),
        }
        // wrong-residue targets are forced even beyond the bound:
        match m.sq_knowledge(11, 12) {
            SqKnowledge::ZeroMap => {}
            _ => panic!("degree-23 target is not a multiple of 2"),
        }
    }
}

//! Orbit-based nilpotency certificates.
//!
//! For a homogeneous x and 0 ≤ t < |x|, the t-orbit of x iterates
//! y ↦ Sq_t y = Sq^{|y|−t} y; degrees climb as |y| → 2|y|−t, so any orbit
//! eventually leaves the bound. x is "t-dead" when some iterate vanishes.
//! The verdict scans t upward: the smallest t whose orbit does *not* die is
//! the nilpotency degree s*. Certification is asymmetric on purpose:
//!
//!  * dying is certain — a zero iterate (computed in-bound, or forced by a
//!    known-zero map) stays zero;
//!  * surviving is certain only if the orbit reaches its fixed point
//!    (t = |y|, where Sq⁰y = y) or applies at least one *computed* nonzero
//!    step before escaping the bound.
//!
//! An orbit that escapes with no computed step gives only a lower bound,
//! hence `AtLeast`. Zero is vacuously t-dead for every t.

use crate::f2::{F2Matrix, F2Vector};

use super::{BoundedUnstableModule, ModuleElement};

/// What a module can say about the map Sq^k on degree d.
pub enum SqKnowledge {
    /// d + k is within the bound; here is the matrix.
    Matrix(F2Matrix),
    /// The map is known to be zero although d + k escapes the bound.
    ZeroMap,
    /// Nothing is known.
    Unknown,
}

/// Enough of a module to walk squaring orbits: a bound, dimensions, and
/// per-(k, d) knowledge. Implemented by [`BoundedUnstableModule`] and by
/// partially-known modules elsewhere.
pub trait SqOracle {
    fn degree_bound(&self) -> usize;
    fn dimension(&self, d: usize) -> usize;
    /// k ≥ 1 only; instability (k > d ⇒ zero) is the implementor's job.
    fn sq_knowledge(&self, k: usize, d: usize) -> SqKnowledge;

    /// Vector-level refinement of the same question: is Sq^k known to kill
    /// this particular element? Defaults to the whole-degree answer.
    fn known_zero_on(&self, k: usize, d: usize, v: &F2Vector) -> bool {
        let _ = v;
        matches!(self.sq_knowledge(k, d), SqKnowledge::ZeroMap)
    }
}

impl SqOracle for BoundedUnstableModule {
    fn degree_bound(&self) -> usize {
        self.bound()
    }

    fn dimension(&self, d: usize) -> usize {
        self.dim(d)
    }

    fn sq_knowledge(&self, k: usize, d: usize) -> SqKnowledge {
        if d + k <= self.bound() {
            SqKnowledge::Matrix(self.sq_matrix(k, d))
        } else if self.knows_zero(k, d) {
            SqKnowledge::ZeroMap
        } else {
            SqKnowledge::Unknown
        }
    }

    fn known_zero_on(&self, k: usize, d: usize, v: &F2Vector) -> bool {
        self.knows_zero_on(k, d, v)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NilpotencyVerdict {
    /// Every orbit below s dies and the s-orbit provably does not.
    ExactlyNilpotent(usize),
    /// Every orbit below s dies; the s-orbit escaped the bound undecided.
    AtLeastNilpotent(usize),
    /// The zero element: s-nilpotent for every s.
    Infinite,
}

impl NilpotencyVerdict {
    /// The certified stage s (∞ collapses to `None`).
    pub fn stage(&self) -> Option<usize> {
        match self {
            NilpotencyVerdict::ExactlyNilpotent(s) | NilpotencyVerdict::AtLeastNilpotent(s) => {
                Some(*s)
            }
            NilpotencyVerdict::Infinite => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NilpotencyVerdict::ExactlyNilpotent(_))
    }
}

impl std::fmt::Display for NilpotencyVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NilpotencyVerdict::ExactlyNilpotent(s) => write!(f, "ExactlyNilpotent({s})"),
            NilpotencyVerdict::AtLeastNilpotent(s) => write!(f, "AtLeastNilpotent({s})"),
            NilpotencyVerdict::Infinite => write!(f, "Infinite"),
        }
    }
}

enum OrbitOutcome {
    Dies,
    /// Reached the Sq⁰ fixed point or applied a computed nonzero step
    /// before escaping: certainly alive.
    CertifiedAlive,
    /// Escaped the bound with every step still unknown.
    Undecided,
}

fn walk_orbit<M: SqOracle>(module: &M, t: usize, x: &ModuleElement) -> OrbitOutcome {
    let bound = module.degree_bound();
    let mut vec = x.vec.clone();
    let mut deg = x.degree;
    let mut computed_steps = 0usize;
    loop {
        if deg == t {
            // Sq⁰ fixes the (nonzero) iterate forever
            return OrbitOutcome::CertifiedAlive;
        }
        let k = deg - t;
        let target = deg + k;
        if target > bound {
            if module.known_zero_on(k, deg, &vec) {
                return OrbitOutcome::Dies;
            }
            return if computed_steps > 0 {
                OrbitOutcome::CertifiedAlive
            } else {
                OrbitOutcome::Undecided
            };
        }
        let next = match module.sq_knowledge(k, deg) {
            SqKnowledge::Matrix(m) => m.act_row(&vec),
            // Partial oracles may answer in-bound: a known-zero step kills
            // the orbit; an unknown one gets the same convention as the
            // escape case above.
            SqKnowledge::ZeroMap => return OrbitOutcome::Dies,
            SqKnowledge::Unknown => {
                return if computed_steps > 0 {
                    OrbitOutcome::CertifiedAlive
                } else {
                    OrbitOutcome::Undecided
                }
            }
        };
        if next.is_zero() {
            return OrbitOutcome::Dies;
        }
        vec = next;
        deg = target;
        computed_steps += 1;
    }
}

/// The certified nilpotency stage of a homogeneous element.
pub fn nilpotency_degree<M: SqOracle>(module: &M, x: &ModuleElement) -> NilpotencyVerdict {
    assert!(x.degree <= module.degree_bound());
    assert_eq!(x.vec.len(), module.dimension(x.degree));
    if x.is_zero() {
        return NilpotencyVerdict::Infinite;
    }
    for t in 0..=x.degree {
        match walk_orbit(module, t, x) {
            OrbitOutcome::Dies => continue,
            OrbitOutcome::CertifiedAlive => return NilpotencyVerdict::ExactlyNilpotent(t),
            OrbitOutcome::Undecided => return NilpotencyVerdict::AtLeastNilpotent(t),
        }
    }
    unreachable!("the t = |x| orbit is a fixed point of a nonzero element")
}

/// Convenience: verdicts for every basis vector of every degree.
pub fn basis_verdicts<M: SqOracle>(module: &M) -> Vec<(usize, usize, NilpotencyVerdict)> {
    let mut out = Vec::new();
    for d in 0..=module.degree_bound() {
        for i in 0..module.dimension(d) {
            let x = ModuleElement {
                degree: d,
                vec: F2Vector::unit(module.dimension(d), i),
            };
            out.push((d, i, nilpotency_degree(module, &x)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::F2Vector;
    use crate::unstable::catalog::{f1, h_ring, make_catalog, sigma_f2};

    #[test]
    fn polynomial_generator_is_reduced() {
        // u ∈ H(16): Sq_0 orbit u → u² → u⁴ → u⁸ → u¹⁶ never dies in-bound
        let h = h_ring(16);
        let u = h.basis_element(1, 0);
        assert_eq!(
            nilpotency_degree(&h, &u),
            NilpotencyVerdict::ExactlyNilpotent(0)
        );
    }

    #[test]
    fn double_suspension_is_exactly_two() {
        // σ²u ∈ Σ²F1 at bound 16: t = 0, 1 orbits die by suspension
        // vanishing; the t = 2 orbit is the σ²-shifted power tower.
        let m = make_catalog("Sigma(F1,2)@16", 16).unwrap();
        let x = m.basis_element(3, 0);
        assert_eq!(
            nilpotency_degree(&m, &x),
            NilpotencyVerdict::ExactlyNilpotent(2)
        );
    }

    #[test]
    fn killed_class_is_exactly_its_degree() {
        // σ⁴1 with every positive square zero: orbits t < 4 die, t = 4 is
        // the fixed point
        let m = sigma_f2(4, 12);
        let x = m.basis_element(4, 0);
        assert_eq!(
            nilpotency_degree(&m, &x),
            NilpotencyVerdict::ExactlyNilpotent(4)
        );
    }

    #[test]
    fn honest_at_least_when_knowledge_runs_out() {
        // u⁸ ∈ F1 truncated at 12: Sq_0 u⁸ = u¹⁶ is out of bound and *not*
        // known zero, and no computed step happened first
        let m = f1(12);
        let x = m.basis_element(8, 0);
        assert_eq!(
            nilpotency_degree(&m, &x),
            NilpotencyVerdict::AtLeastNilpotent(0)
        );
    }

    #[test]
    fn one_computed_step_certifies() {
        // u⁴ ∈ F1(12): Sq_0 u⁴ = u⁸ computed nonzero, then u¹⁶ escapes —
        // still certified alive because a nonzero step was seen
        let m = f1(12);
        let x = m.basis_element(4, 0);
        assert_eq!(
            nilpotency_degree(&m, &x),
            NilpotencyVerdict::ExactlyNilpotent(0)
        );
    }

    #[test]
    fn zero_is_infinitely_nilpotent() {
        let h = h_ring(8);
        let zero = h.element(3, F2Vector::zero(1));
        assert_eq!(nilpotency_degree(&h, &zero), NilpotencyVerdict::Infinite);
    }

    #[test]
    fn scan_takes_the_first_surviving_orbit() {
        // u² ∈ H(16): Sq_1 u² = Sq¹u² = 0 dies, but the scan starts at
        // t = 0 and Sq_0 u² = u⁴ survives ⇒ Exactly(0), not 1
        let h = h_ring(16);
        let u2 = h.basis_element(2, 0);
        assert_eq!(
            nilpotency_degree(&h, &u2),
            NilpotencyVerdict::ExactlyNilpotent(0)
        );
    }
}

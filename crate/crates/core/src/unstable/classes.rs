//! The suspended power classes σ^d u^{2^i} and their certificates.
//!
//! Inside Σ^d F1 the degree-(2^i + d) basis vector is the i-th power
//! class. Its nilpotency verdict should be ExactlyNilpotent(d) whenever
//! the next tower step 2^{i+1} + d stays within the bound, and honestly
//! AtLeastNilpotent(d) once it escapes. The classes are chained by
//! Sq^{2^i}, and the whole module is identified with (Σ^d F₂) ⊗ F1 by an
//! explicitly verified equivariant isomorphism.

use crate::f2::F2Matrix;

use super::catalog::{f1, sigma_f2};
use super::nilpotency::{nilpotency_degree, NilpotencyVerdict};
use super::{ModuleMap, UnstableError};

pub struct AlphaClass {
    pub i: usize,
    pub degree: usize,
    pub verdict: NilpotencyVerdict,
    /// Sq^{2^i} carries this class onto the next one (checkable only while
    /// the next class is in-bound).
    pub chains_to_next: Option<bool>,
}

pub struct AlphaClassesReport {
    pub shift: usize,
    pub bound: usize,
    pub classes: Vec<AlphaClass>,
    /// Σ^d F1 ≅ (Σ^d F₂) ⊗ F1 as modules, verified mechanically.
    pub eta_is_iso: bool,
}

/// Verdicts, chain checks, and the tensor identification for every class
/// σ^d u^{2^i} with i ≤ i_max, inside the bound-D truncation of Σ^d F1.
pub fn alpha_classes(
    d: usize,
    i_max: usize,
    bound: usize,
) -> Result<AlphaClassesReport, UnstableError> {
    if (1 << i_max) + d > bound {
        return Err(UnstableError::InvalidParameter(format!(
            "class degree {} escapes bound {bound}",
            (1 << i_max) + d
        )));
    }
    // d = 0 is the unsuspended tower itself
    let m = if d == 0 { f1(bound) } else { f1(bound - d).suspend(d) };
    let mut classes = Vec::new();
    for i in 0..=i_max {
        let degree = (1 << i) + d;
        let x = m.basis_element(degree, 0);
        let verdict = nilpotency_degree(&m, &x);
        let next_degree = (1 << (i + 1)) + d;
        let chains_to_next = if next_degree <= bound {
            let y = m.sq(1 << i, &x).expect("next class in-bound");
            Some(y == m.basis_element(next_degree, 0))
        } else {
            None
        };
        classes.push(AlphaClass {
            i,
            degree,
            verdict,
            chains_to_next,
        });
    }
    // η: Σ^d F1 → (Σ^d F₂) ⊗ F1, σ^d u^{2^i} ↦ σ^d 1 ⊗ u^{2^i}. Both sides
    // are one-dimensional in exactly the degrees 2^i + d, so the matrix is
    // the identity in each such degree; equivariance is the real content
    // and ModuleMap::new certifies it.
    let tensor = sigma_f2(d, bound).tensor(&f1(bound));
    let eta_is_iso = m.dims() == tensor.dims()
        && ModuleMap::new(
            &m,
            &tensor,
            (0..=bound).map(|e| F2Matrix::identity(m.dim(e))).collect(),
        )
        .is_ok();
    Ok(AlphaClassesReport {
        shift: d,
        bound,
        classes,
        eta_is_iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts_split_at_the_knowledge_horizon() {
        // d = 2, bound 16: classes at degrees 3, 4, 6, 10 (i = 0..3);
        // tower steps land at 4, 6, 10, 18 — the last escapes
        let rep = alpha_classes(2, 3, 16).unwrap();
        assert!(rep.eta_is_iso);
        let vs: Vec<NilpotencyVerdict> = rep.classes.iter().map(|c| c.verdict).collect();
        assert_eq!(
            vs,
            vec![
                NilpotencyVerdict::ExactlyNilpotent(2),
                NilpotencyVerdict::ExactlyNilpotent(2),
                NilpotencyVerdict::ExactlyNilpotent(2),
                NilpotencyVerdict::AtLeastNilpotent(2),
            ]
        );
        assert_eq!(
            rep.classes.iter().map(|c| c.chains_to_next).collect::<Vec<_>>(),
            vec![Some(true), Some(true), Some(true), None]
        );
    }

    #[test]
    fn shift_one_all_in_bound() {
        let rep = alpha_classes(1, 2, 32).unwrap();
        for c in &rep.classes {
            assert_eq!(c.verdict, NilpotencyVerdict::ExactlyNilpotent(1));
            assert_eq!(c.chains_to_next, Some(true));
        }
    }

    #[test]
    fn zero_shift_is_the_bare_tower() {
        let rep = alpha_classes(0, 4, 32).unwrap();
        assert!(rep.eta_is_iso);
        for c in &rep.classes {
            // the i = 4 step u¹⁶ → u³² is still in-bound at 32
            assert_eq!(c.verdict, NilpotencyVerdict::ExactlyNilpotent(0), "i={}", c.i);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(alpha_classes(2, 4, 16).is_err()); // degree 18 > 16
    }
}

//! The nilpotent filtration M = M₀ ⊇ M₁ ⊇ M₂ ⊇ … and its subquotients.
//!
//! M_s collects the elements whose t-orbits die for every t < s. Per degree
//! that is an intersection of kernels of orbit composites — the "naive"
//! set. The filtration stage additionally has to be closed under the
//! action, so the engine shrinks the naive sets to their greatest in-bound
//! Sq-stable subspaces; both are kept so callers can observe whether
//! stabilization ever mattered. Orbits that leave the bound before dying
//! are recorded per (s, degree): the certified stage is exact where no
//! escape happened and a lower bound elsewhere.
//!
//! R_s M = Σ^{−s}(M_s/M_{s+1}) is materialized as a bounded module of its
//! own (bound D − s), inheriting every vanishing fact that descends.

use std::collections::BTreeMap;

use crate::f2::{F2Matrix, F2Vector, Subspace};

use super::{BoundedUnstableModule, ModuleElement, UnstableError};

/// Binary digit sum — the natural grading for weight arguments.
pub fn alpha(n: usize) -> usize {
    n.count_ones() as usize
}

/// The subspace of degree-d elements whose t-orbit certifiably dies, plus
/// an undecided flag. The flag matches the verdict convention: elements
/// that survive at least one computed step before escaping count as
/// decided-alive, so only a first-step escape with something outside the
/// known-dead part leaves anything undecided.
fn dead_subspace(m: &BoundedUnstableModule, t: usize, d: usize) -> (Subspace, bool) {
    let n = m.dim(d);
    if n == 0 {
        return (Subspace::full(0), false);
    }
    if t >= d {
        // the t = d orbit is fixed by Sq⁰; only zero dies
        return (Subspace::zero(n), false);
    }
    let mut composite = F2Matrix::identity(n);
    let mut deg = d;
    let mut steps = 0usize;
    loop {
        let k = deg - t;
        let target = deg + k;
        if target > m.bound() {
            // anything the composite carries into the known-vanishing part
            // of this degree dies; the rest is alive after a computed step
            // and undecided otherwise
            let known = m.known_zero_subspace(k, deg);
            let dead = known.preimage_row(&composite);
            let undecided = steps == 0 && dead.dim() < n;
            return (dead, undecided);
        }
        composite = composite.mul(&m.sq_matrix(k, deg));
        if composite.is_zero() {
            return (Subspace::full(n), false);
        }
        deg = target;
        steps += 1;
    }
}

/// Greatest subspaces of the given per-degree spaces closed under every
/// in-bound operation.
fn stabilize(m: &BoundedUnstableModule, mut spaces: Vec<Subspace>) -> Vec<Subspace> {
    loop {
        let mut changed = false;
        for d in 0..=m.bound() {
            if spaces[d].dim() == 0 {
                continue;
            }
            for k in 1..=(m.bound() - d) {
                let pre = spaces[d + k].preimage_row(&m.sq_matrix(k, d));
                let cut = spaces[d].intersect(&pre);
                if cut.dim() < spaces[d].dim() {
                    spaces[d] = cut;
                    changed = true;
                }
            }
        }
        if !changed {
            return spaces;
        }
    }
}

pub struct FiltrationResult {
    bound: usize,
    /// stages[s][d]: the certified, Sq-stabilized M_s in degree d
    stages: Vec<Vec<Subspace>>,
    /// the same intersections before stabilization
    naive: Vec<Vec<Subspace>>,
    /// escapes[s][d]: some orbit with t < s left the bound undecided
    escapes: Vec<Vec<bool>>,
    /// quotients[s] = R_s = Σ^{−s}(M_s/M_{s+1}), bound D − s
    quotients: Vec<BoundedUnstableModule>,
}

impl FiltrationResult {
    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Number of stored stages; stages().last() is the first zero stage.
    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    pub fn stage(&self, s: usize) -> &[Subspace] {
        &self.stages[s.min(self.stages.len() - 1)]
    }

    pub fn stage_dims(&self, s: usize) -> Vec<usize> {
        self.stage(s).iter().map(|v| v.dim()).collect()
    }

    pub fn naive_stage(&self, s: usize) -> &[Subspace] {
        &self.naive[s.min(self.naive.len() - 1)]
    }

    /// Did stabilization ever cut below the plain orbit intersections?
    pub fn naive_agrees(&self) -> bool {
        self.stages
            .iter()
            .zip(&self.naive)
            .all(|(a, b)| {
                a.iter()
                    .zip(b.iter())
                    .all(|(x, y)| x.dim() == y.dim())
            })
    }

    pub fn escaped(&self, s: usize, d: usize) -> bool {
        self.escapes[s.min(self.escapes.len() - 1)][d]
    }

    pub fn any_escape(&self, s: usize) -> bool {
        self.escapes[s.min(self.escapes.len() - 1)]
            .iter()
            .any(|&e| e)
    }

    /// Could the certified stage-s space at degree d differ from the true
    /// one? Directly, when an orbit from degree d escaped undecided; or
    /// indirectly, when stabilization cut this stage somewhere and an
    /// escape above d could have started the cascade (cuts only propagate
    /// downward, so escape-free stages and un-cut stages are exact).
    pub fn tainted(&self, s: usize, d: usize) -> bool {
        let s = s.min(self.stages.len() - 1);
        if self.escapes[s][d] {
            return true;
        }
        let cut = self.stages[s]
            .iter()
            .zip(&self.naive[s])
            .any(|(a, b)| a.dim() != b.dim());
        cut && (d + 1..=self.bound).any(|d2| self.escapes[s][d2])
    }

    pub fn quotients(&self) -> &[BoundedUnstableModule] {
        &self.quotients
    }

    pub fn quotient(&self, s: usize) -> Option<&BoundedUnstableModule> {
        self.quotients.get(s)
    }
}

/// The R_s module: desuspend M_s/M_{s+1} by s.
fn subquotient_module(
    m: &BoundedUnstableModule,
    s: usize,
    upper: &[Subspace],
    lower: &[Subspace],
) -> Result<BoundedUnstableModule, UnstableError> {
    let new_bound = m.bound() - s;
    let mut dims = vec![0; new_bound + 1];
    let mut labels = vec![Vec::new(); new_bound + 1];
    let mut reps: Vec<Vec<F2Vector>> = vec![Vec::new(); new_bound + 1];
    for d in 0..s {
        debug_assert_eq!(upper[d].dim(), 0, "M_{s} starts in degree {s}");
    }
    for e in 0..=new_bound {
        let d = e + s;
        let r = lower[d].complement_in(&upper[d]);
        dims[e] = r.len();
        labels[e] = r
            .iter()
            .map(|v| ModuleElement { degree: d, vec: v.clone() }.display(m))
            .collect();
        reps[e] = r;
    }
    let mut sq = BTreeMap::new();
    for e in 0..=new_bound {
        if dims[e] == 0 {
            continue;
        }
        let d = e + s;
        for k in 1..=(new_bound - e) {
            let big = m.sq_matrix(k, d);
            // coordinates over [quotient reps; lower basis]
            let mut rows_basis = reps[e + k].clone();
            rows_basis.extend(lower[d + k].basis().iter().cloned());
            let solver = F2Matrix::from_rows(rows_basis, m.dim(d + k));
            let mut rows = Vec::new();
            for v in &reps[e] {
                let w = big.act_row(v);
                let sol = solver.solve_left(&w).ok_or(UnstableError::InvalidParameter(
                    format!("stage {s} not closed under Sq^{k} in degree {d}"),
                ))?;
                rows.push(sol.slice(0, dims[e + k]));
            }
            let mat = F2Matrix::from_rows(rows, dims[e + k]);
            if !mat.is_zero() {
                sq.insert((k, e), mat);
            }
        }
    }
    let vanishing = m
        .vanishing()
        .iter()
        .filter(|&&(k, d)| d >= s && k + s <= d && dims[d - s] > 0)
        .map(|&(k, d)| (k, d - s))
        .collect();
    let mut q = BoundedUnstableModule::new(
        format!("R{}({})", s, m.name()),
        new_bound,
        dims,
        labels,
        sq,
        vanishing,
    )?;
    // classes whose representatives are known to die inherit that knowledge
    for e in 0..=new_bound {
        if q.dim(e) == 0 {
            continue;
        }
        let d = e + s;
        for k in 1..=e {
            if e + k <= new_bound || q.knows_zero(k, e) {
                continue;
            }
            let parent = m.known_zero_subspace(k, d);
            if parent.dim() == 0 {
                continue;
            }
            let rep_rows = F2Matrix::from_rows(reps[e].clone(), m.dim(d));
            q.set_refined_vanishing(k, e, parent.preimage_row(&rep_rows));
        }
    }
    Ok(q)
}

/// Compute the whole filtration, stopping at the first zero stage (which is
/// included). Fails only if a subquotient violates the module axioms —
/// which would mean the certified stages are not a filtration by
/// submodules.
pub fn nilpotent_filtration(
    m: &BoundedUnstableModule,
) -> Result<FiltrationResult, UnstableError> {
    let bound = m.bound();
    // dead orbit data, memoized per (t, d)
    let mut dead: Vec<Vec<(Subspace, bool)>> = Vec::new();
    for t in 0..=bound {
        dead.push((0..=bound).map(|d| dead_subspace(m, t, d)).collect());
    }
    let mut stages: Vec<Vec<Subspace>> = Vec::new();
    let mut naive: Vec<Vec<Subspace>> = Vec::new();
    let mut escapes: Vec<Vec<bool>> = Vec::new();
    let mut cur: Vec<Subspace> = (0..=bound).map(|d| Subspace::full(m.dim(d))).collect();
    let mut esc = vec![false; bound + 1];
    loop {
        let s = stages.len();
        naive.push(cur.clone());
        let stable = stabilize(m, cur.clone());
        stages.push(stable);
        escapes.push(esc.clone());
        // run until the naive chain dies too, so stage comparisons stay
        // meaningful past the point where stabilization hits zero
        let all_zero = stages[s].iter().all(|v| v.dim() == 0)
            && naive[s].iter().all(|v| v.dim() == 0);
        if all_zero {
            break;
        }
        // refine: M_{s+1} adds the death of the s-orbit
        for d in 0..=bound {
            let (ds, e) = &dead[s.min(bound)][d];
            cur[d] = cur[d].intersect(ds);
            esc[d] = esc[d] || *e;
        }
    }
    let mut quotients = Vec::new();
    for s in 0..stages.len() - 1 {
        quotients.push(subquotient_module(m, s, &stages[s], &stages[s + 1])?);
    }
    Ok(FiltrationResult {
        bound,
        stages,
        naive,
        escapes,
        quotients,
    })
}

/// Largest binary digit sum present among the (in-bound) nonzero degrees.
/// Requires the module to be reduced — Sq_0 injective wherever that is
/// checkable — since the stage count of a reduced module is carried
/// entirely by its weight.
pub fn weight(m: &BoundedUnstableModule) -> Result<usize, UnstableError> {
    for d in 1..=(m.bound() / 2) {
        if m.dim(d) > 0 && m.sq_matrix(d, d).rank() != m.dim(d) {
            return Err(UnstableError::NotReduced { d });
        }
    }
    Ok((0..=m.bound())
        .filter(|&d| m.dim(d) > 0)
        .map(alpha)
        .max()
        .unwrap_or(0))
}

/// Krull-type stage of a reduced module: the same number as [`weight`].
pub fn krull_stage_reduced(m: &BoundedUnstableModule) -> Result<usize, UnstableError> {
    weight(m)
}

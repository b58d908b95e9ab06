//! Bounded-degree unstable modules over the mod-2 Steenrod algebra.
//!
//! A module lives entirely below a degree bound D: one F₂ basis per degree,
//! one matrix per operation `Sq^k` landing in-bound. Instability (`Sq^k = 0`
//! on degrees < k) and every in-bound Adem relation are checked at
//! construction, so a value of [`BoundedUnstableModule`] is always a genuine
//! truncation of an unstable module as far as it can see.
//!
//! Truncation loses information exactly at the upper edge: `Sq^k` out of
//! degree d with d+k > D is not representable. Catalog constructors know
//! their modules beyond the bound, and record every such action that is the
//! zero map in a `vanishing` set. Orbit walks (nilpotency, filtration)
//! consult the layers of knowledge in order: instability (definitional,
//! valid at any degree), in-bound matrices, the vanishing set, and a
//! per-subspace refinement of the vanishing set; anything else is an honest
//! "don't know". Without the vanishing layer the filtration of a suspension
//! would collapse spuriously at the truncation edge, so constructors
//! populate it for every key whose source degree is in-bound. The refined
//! layer exists because whole-degree vanishing cannot survive a direct sum
//! with a summand that does not vanish: the sum still knows the map is zero
//! on the block where it was known, and orbit walks may use that.

pub mod catalog;
pub mod classes;
pub mod exactness;
pub mod filtration;
pub mod nilpotency;

use std::collections::{BTreeMap, BTreeSet};

use crate::f2::{F2Matrix, F2Vector, Subspace};
use crate::steenrod::{adem_reduce, SqWord};

pub use catalog::make_catalog;
pub use classes::{alpha_classes, AlphaClass, AlphaClassesReport};
pub use exactness::{
    check_exactness_A1, hom_basis, CheckOutcome, ExactnessReport, ShortExactSequence,
};
pub use filtration::{alpha, krull_stage_reduced, nilpotent_filtration, weight, FiltrationResult};
pub use nilpotency::{basis_verdicts, nilpotency_degree, NilpotencyVerdict, SqKnowledge, SqOracle};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum UnstableError {
    #[error("instability violated: Sq^{k} is nonzero on degree {d} < {k}")]
    Instability { k: usize, d: usize },
    #[error("Adem relation Sq^{a} Sq^{b} fails on degree {d}")]
    AdemCoherence { a: usize, b: usize, d: usize },
    #[error("action matrix at (k={k}, d={d}) has the wrong shape")]
    Shape { k: usize, d: usize },
    #[error("Sq_0 is not injective on degree {d}")]
    NotReduced { d: usize },
    #[error("degree {degree} escapes the bound {bound}")]
    OutOfBound { degree: usize, bound: usize },
    #[error("Sq_{m} undefined on an element of degree {d} (m > degree)")]
    LowerIndexTooLarge { m: usize, d: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("maps do not form a short exact sequence: {0}")]
    NotExact(String),
    #[error("map does not commute with Sq^{k} on degree {d}")]
    NotEquivariant { k: usize, d: usize },
}

/// A graded F₂-vector space through degree `bound` with a verified unstable
/// Steenrod action and explicit knowledge of which out-of-bound actions
/// vanish.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundedUnstableModule {
    name: String,
    bound: usize,
    dims: Vec<usize>,
    labels: Vec<Vec<String>>,
    /// (k, d) ↦ matrix of Sq^k: M_d → M_{d+k}, rows = source basis; present
    /// for every k ≥ 1, d+k ≤ bound with dims[d] > 0.
    sq: BTreeMap<(usize, usize), F2Matrix>,
    /// (k, d) with d ≤ bound < d+k for which Sq^k: M_d → M_{d+k} is known to
    /// be the zero map. Keys with k > d are never stored (instability
    /// already forces those).
    vanishing: BTreeSet<(usize, usize)>,
    /// Same key shape, but the map is only known to vanish on a proper
    /// subspace of the degree. Derived modules (sums, submodules,
    /// quotients, truncations) populate this when one constituent knows
    /// more than the whole degree can record.
    refined_vanishing: BTreeMap<(usize, usize), Subspace>,
}

impl BoundedUnstableModule {
    pub fn new(
        name: impl Into<String>,
        bound: usize,
        dims: Vec<usize>,
        labels: Vec<Vec<String>>,
        sq: BTreeMap<(usize, usize), F2Matrix>,
        vanishing: BTreeSet<(usize, usize)>,
    ) -> Result<Self, UnstableError> {
        assert_eq!(dims.len(), bound + 1);
        assert_eq!(labels.len(), bound + 1);
        for (d, l) in labels.iter().enumerate() {
            assert_eq!(l.len(), dims[d], "labels at degree {d}");
        }
        let m = BoundedUnstableModule {
            name: name.into(),
            bound,
            dims,
            labels,
            sq,
            vanishing,
            refined_vanishing: BTreeMap::new(),
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), UnstableError> {
        // absent keys mean the zero map, so only present matrices need checks
        for (&(k, d), mat) in &self.sq {
            if k == 0 || d + k > self.bound {
                return Err(UnstableError::Shape { k, d });
            }
            if mat.rows() != self.dims[d] || mat.cols() != self.dims[d + k] {
                return Err(UnstableError::Shape { k, d });
            }
            if k > d && !mat.is_zero() {
                return Err(UnstableError::Instability { k, d });
            }
        }
        for &(k, d) in &self.vanishing {
            // only genuinely out-of-bound, instability-independent keys
            if d + k <= self.bound || k > d || d > self.bound {
                return Err(UnstableError::Shape { k, d });
            }
        }
        self.check_adem()?;
        Ok(())
    }

    /// Every Adem relation Sq^a Sq^b (a < 2b) on every degree where both
    /// sides stay in-bound.
    fn check_adem(&self) -> Result<(), UnstableError> {
        for b in 1..=self.bound {
            for a in 1..(2 * b) {
                if a + b > self.bound {
                    break;
                }
                let rhs = adem_reduce(&SqWord::new(vec![a as u32, b as u32]));
                for d in 0..=(self.bound - a - b) {
                    if self.dims[d] == 0 {
                        continue;
                    }
                    // lhs: Sq^b then Sq^a
                    let lhs = self.sq_matrix(b, d).mul(&self.sq_matrix(a, d + b));
                    let mut sum = F2Matrix::zero(self.dims[d], self.dims[d + a + b]);
                    for term in rhs.terms() {
                        let e = term.exponents();
                        let m = match e.len() {
                            0 => F2Matrix::identity(self.dims[d]),
                            1 => self.sq_matrix(e[0] as usize, d),
                            2 => self
                                .sq_matrix(e[1] as usize, d)
                                .mul(&self.sq_matrix(e[0] as usize, d + e[1] as usize)),
                            _ => unreachable!("degree-2 relation has words of length ≤ 2"),
                        };
                        sum = sum.add(&m);
                    }
                    if lhs != sum {
                        return Err(UnstableError::AdemCoherence { a, b, d });
                    }
                }
            }
        }
        Ok(())
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

    pub fn labels(&self, d: usize) -> &[String] {
        &self.labels[d]
    }

    pub fn vanishing(&self) -> &BTreeSet<(usize, usize)> {
        &self.vanishing
    }

    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// The matrix of Sq^k on degree d for d+k ≤ bound (zero matrix when the
    /// source is zero-dimensional or k > d).
    pub fn sq_matrix(&self, k: usize, d: usize) -> F2Matrix {
        assert!(d + k <= self.bound);
        if k == 0 {
            return F2Matrix::identity(self.dims[d]);
        }
        match self.sq.get(&(k, d)) {
            Some(m) => m.clone(),
            None => F2Matrix::zero(self.dims[d], self.dims[d + k]),
        }
    }

    /// Sq^k applied to a homogeneous element, in-bound only.
    pub fn sq(&self, k: usize, x: &ModuleElement) -> Result<ModuleElement, UnstableError> {
        if x.degree + k > self.bound {
            return Err(UnstableError::OutOfBound {
                degree: x.degree + k,
                bound: self.bound,
            });
        }
        Ok(ModuleElement {
            degree: x.degree + k,
            vec: self.sq_matrix(k, x.degree).act_row(&x.vec),
        })
    }

    /// The lower-indexed operator Sq_m x = Sq^{|x|−m} x. Strictly bounded:
    /// even a forced-zero result signals `OutOfBound` when its degree
    /// 2|x|−m exceeds the bound (orbit walks that want to use vanishing
    /// knowledge go through [`nilpotency`] instead).
    pub fn sq_lower(&self, m: usize, x: &ModuleElement) -> Result<ModuleElement, UnstableError> {
        if m > x.degree {
            return Err(UnstableError::LowerIndexTooLarge { m, d: x.degree });
        }
        self.sq(x.degree - m, x)
    }

    pub fn element(&self, degree: usize, vec: F2Vector) -> ModuleElement {
        assert!(degree <= self.bound);
        assert_eq!(vec.len(), self.dims[degree]);
        ModuleElement { degree, vec }
    }

    pub fn basis_element(&self, degree: usize, i: usize) -> ModuleElement {
        self.element(degree, F2Vector::unit(self.dims[degree], i))
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Sq_0 (top square) injective on every degree 1 ≤ d ≤ ⌊bound/2⌋.
    pub fn is_reduced(&self) -> bool {
        for d in 1..=(self.bound / 2) {
            if self.dims[d] == 0 {
                continue;
            }
            if self.sq_matrix(d, d).rank() != self.dims[d] {
                return false;
            }
        }
        true
    }

    // -- derived modules ---------------------------------------------------

    /// The d-fold suspension: degrees shift up by d, the action commutes
    /// with σ. The bound grows by d (no information is lost), and the
    /// suspension's extra vanishing — Sq^k σ^d x = σ^d Sq^k x = 0 whenever
    /// k exceeds the original degree — is recorded.
    pub fn suspend(&self, d: usize) -> BoundedUnstableModule {
        let bound = self.bound + d;
        let mut dims = vec![0; bound + 1];
        let mut labels = vec![Vec::new(); bound + 1];
        for e in 0..=self.bound {
            dims[e + d] = self.dims[e];
            labels[e + d] = self.labels[e]
                .iter()
                .map(|l| format!("s{}({})", d, l))
                .collect();
        }
        let mut sq = BTreeMap::new();
        for (&(k, e), m) in &self.sq {
            sq.insert((k, e + d), m.clone());
        }
        let mut vanishing = BTreeSet::new();
        for &(k, e) in &self.vanishing {
            if k <= e + d {
                vanishing.insert((k, e + d));
            }
        }
        for e in 0..=self.bound {
            if self.dims[e] == 0 {
                continue;
            }
            for k in (e + 1)..=(e + d) {
                if e + d + k > bound {
                    vanishing.insert((k, e + d));
                }
            }
        }
        let mut m = BoundedUnstableModule::new(
            format!("Sigma({},{})", self.name, d),
            bound,
            dims,
            labels,
            sq,
            vanishing,
        )
        .expect("suspension preserves the module axioms");
        for (&(k, e), s) in &self.refined_vanishing {
            m.set_refined_vanishing(k, e + d, s.clone());
        }
        m
    }

    /// Truncate to a lower bound. Knowledge above the new bound survives
    /// only where the old module had it: an in-bound zero matrix or a
    /// vanishing entry.
    pub fn truncate(&self, new_bound: usize) -> BoundedUnstableModule {
        assert!(new_bound <= self.bound);
        let dims = self.dims[..=new_bound].to_vec();
        let labels = self.labels[..=new_bound].to_vec();
        let mut sq = BTreeMap::new();
        for (&(k, d), m) in &self.sq {
            if d + k <= new_bound {
                sq.insert((k, d), m.clone());
            }
        }
        // knowledge above the new bound survives wherever the old module
        // had it in any form: in-bound zero map (stored or absent) or a
        // recorded vanishing entry — knows_zero sees all three
        let mut vanishing = BTreeSet::new();
        for d in 0..=new_bound {
            if dims[d] == 0 {
                continue;
            }
            for k in 1..=d {
                if d + k > new_bound && self.knows_zero(k, d) {
                    vanishing.insert((k, d));
                }
            }
        }
        let mut m = BoundedUnstableModule::new(self.name.clone(), new_bound, dims, labels, sq, vanishing)
            .expect("truncation preserves the module axioms");
        // partial knowledge also survives: the kernel of a matrix that now
        // crosses the bound, or whatever refinement the old module carried
        for d in 0..=new_bound {
            if m.dims[d] == 0 {
                continue;
            }
            for k in 1..=d {
                if d + k <= new_bound || m.knows_zero(k, d) {
                    continue;
                }
                let s = if d + k <= self.bound {
                    Subspace::from_vectors(self.dims[d], self.sq_matrix(k, d).left_null_space())
                } else {
                    self.known_zero_subspace(k, d)
                };
                m.set_refined_vanishing(k, d, s);
            }
        }
        m
    }

    /// Tensor product with the Cartan-formula action; the bound is the
    /// smaller of the two, and a tensor key is known to vanish when every
    /// Cartan term has a known-zero factor.
    pub fn tensor(&self, other: &BoundedUnstableModule) -> BoundedUnstableModule {
        let bound = self.bound.min(other.bound);
        let mut dims = vec![0; bound + 1];
        let mut labels = vec![Vec::new(); bound + 1];
        let mut offsets: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for t in 0..=bound {
            for a in 0..=t {
                let b = t - a;
                offsets.insert((a, b), dims[t]);
                dims[t] += self.dims[a] * other.dim(b);
                for i in 0..self.dims[a] {
                    for j in 0..other.dim(b) {
                        labels[t].push(format!(
                            "{}|{}",
                            self.labels[a][i],
                            other.labels(b)[j]
                        ));
                    }
                }
            }
        }
        let index = |a: usize, i: usize, b: usize, j: usize| offsets[&(a, b)] + i * other.dim(b) + j;
        let mut sq = BTreeMap::new();
        for k in 1..=bound {
            for t in 0..=(bound - k) {
                if dims[t] == 0 {
                    continue;
                }
                let mut m = F2Matrix::zero(dims[t], dims[t + k]);
                for a in 0..=t {
                    let b = t - a;
                    for i in 0..self.dims[a] {
                        for j in 0..other.dim(b) {
                            let row = index(a, i, b, j);
                            for p in 0..=k {
                                let q = k - p;
                                // Sq^p x ⊗ Sq^q y
                                if p > a || q > b {
                                    continue;
                                }
                                let sx = self.sq_matrix(p, a);
                                let sy = other.sq_matrix(q, b);
                                for xi in sx.row(i).ones() {
                                    for yj in sy.row(j).ones() {
                                        let col = index(a + p, xi, b + q, yj);
                                        let cur = m.get(row, col);
                                        m.set(row, col, !cur);
                                    }
                                }
                            }
                        }
                    }
                }
                if !m.is_zero() {
                    sq.insert((k, t), m);
                }
            }
        }
        // vanishing: all Cartan terms known-zero
        let mut vanishing = BTreeSet::new();
        for t in 0..=bound {
            if dims[t] == 0 {
                continue;
            }
            'keys: for k in (bound + 1 - t).max(1)..=t {
                // every split (a,b) of t with live dims, every split (p,q) of k
                for a in 0..=t {
                    let b = t - a;
                    if self.dims[a] == 0 || other.dim(b) == 0 {
                        continue;
                    }
                    for p in 0..=k {
                        let q = k - p;
                        let x_zero = self.knows_zero(p, a);
                        let y_zero = other.knows_zero(q, b);
                        if !(x_zero || y_zero) {
                            continue 'keys;
                        }
                    }
                }
                vanishing.insert((k, t));
            }
        }
        BoundedUnstableModule::new(
            format!("Tensor({},{})", self.name, other.name),
            bound,
            dims,
            labels,
            sq,
            vanishing,
        )
        .expect("tensor of unstable modules is unstable")
    }

    /// Is Sq^k on degree d known to be the zero map (by instability, an
    /// in-bound zero matrix, or recorded vanishing)? k = 0 is the identity.
    pub fn knows_zero(&self, k: usize, d: usize) -> bool {
        if k == 0 {
            return false;
        }
        if d > self.bound || self.dims[d] == 0 {
            // no elements in the source: the map is zero, and for d beyond
            // the bound we never ask (orbit sources are always in-bound)
            return d <= self.bound;
        }
        if k > d {
            return true;
        }
        if d + k <= self.bound {
            return self.sq_matrix(k, d).is_zero();
        }
        self.vanishing.contains(&(k, d))
    }

    /// The subspace of degree d on which Sq^k is known to vanish — full
    /// when [`knows_zero`](Self::knows_zero) holds for the whole degree,
    /// a proper subspace when only part of the degree carries the
    /// knowledge, zero otherwise.
    pub fn known_zero_subspace(&self, k: usize, d: usize) -> Subspace {
        let n = self.dim(d);
        if self.knows_zero(k, d) {
            return Subspace::full(n);
        }
        match self.refined_vanishing.get(&(k, d)) {
            Some(s) => s.clone(),
            None => Subspace::zero(n),
        }
    }

    /// Is Sq^k known to vanish on this particular vector of degree d?
    pub fn knows_zero_on(&self, k: usize, d: usize, v: &F2Vector) -> bool {
        if self.knows_zero(k, d) {
            return true;
        }
        self.refined_vanishing
            .get(&(k, d))
            .is_some_and(|s| s.contains(v))
    }

    /// Record partial vanishing knowledge at an out-of-bound key. Full
    /// subspaces promote to the plain vanishing set; zero ones are
    /// dropped.
    fn set_refined_vanishing(&mut self, k: usize, d: usize, s: Subspace) {
        debug_assert!(d <= self.bound && d + k > self.bound && k >= 1 && k <= d);
        debug_assert_eq!(s.basis().first().map_or(self.dims[d], |v| v.len()), self.dims[d]);
        if s.dim() == 0 || self.knows_zero(k, d) {
            return;
        }
        if s.dim() == self.dims[d] {
            self.vanishing.insert((k, d));
        } else {
            self.refined_vanishing.insert((k, d), s);
        }
    }

    /// Direct sum, knowledge intersected.
    pub fn direct_sum(&self, other: &BoundedUnstableModule) -> BoundedUnstableModule {
        let bound = self.bound.min(other.bound);
        let mut dims = vec![0; bound + 1];
        let mut labels = vec![Vec::new(); bound + 1];
        for d in 0..=bound {
            dims[d] = self.dims[d] + other.dim(d);
            labels[d] = self
                .labels[d]
                .iter()
                .map(|l| format!("l.{}", l))
                .chain(other.labels(d).iter().map(|l| format!("r.{}", l)))
                .collect();
        }
        let mut sq = BTreeMap::new();
        for k in 1..=bound {
            for d in 0..=(bound - k) {
                if dims[d] == 0 {
                    continue;
                }
                let a = self.sq_matrix(k, d);
                let b = other.sq_matrix(k, d);
                let mut m = F2Matrix::zero(dims[d], dims[d + k]);
                for i in 0..a.rows() {
                    for j in a.row(i).ones() {
                        m.set(i, j, true);
                    }
                }
                for i in 0..b.rows() {
                    for j in b.row(i).ones() {
                        m.set(self.dims[d] + i, self.dims[d + k] + j, true);
                    }
                }
                if !m.is_zero() {
                    sq.insert((k, d), m);
                }
            }
        }
        let mut vanishing = BTreeSet::new();
        for d in 0..=bound {
            for k in 1..=d {
                if d + k > bound && self.knows_zero(k, d) && other.knows_zero(k, d) {
                    vanishing.insert((k, d));
                }
            }
        }
        let mut m = BoundedUnstableModule::new(
            format!("Sum({},{})", self.name, other.name),
            bound,
            dims,
            labels,
            sq,
            vanishing,
        )
        .expect("direct sum of unstable modules is unstable");
        // one summand's out-of-bound knowledge survives on its block even
        // when the other side of the degree stays unknown
        for d in 0..=bound {
            if m.dims[d] == 0 {
                continue;
            }
            for k in 1..=d {
                if d + k <= bound || m.knows_zero(k, d) {
                    continue;
                }
                let left = self.known_zero_subspace(k, d);
                let right = other.known_zero_subspace(k, d);
                if left.dim() + right.dim() == 0 {
                    continue;
                }
                let mut vecs = Vec::new();
                for v in left.basis() {
                    let mut w = F2Vector::zero(m.dims[d]);
                    for i in v.ones() {
                        w.set(i, true);
                    }
                    vecs.push(w);
                }
                for v in right.basis() {
                    let mut w = F2Vector::zero(m.dims[d]);
                    for i in v.ones() {
                        w.set(self.dims[d] + i, true);
                    }
                    vecs.push(w);
                }
                let n = m.dims[d];
                m.set_refined_vanishing(k, d, Subspace::from_vectors(n, vecs));
            }
        }
        m
    }

    /// Close the given per-degree subspaces under all in-bound operations.
    pub fn stable_closure(&self, seed: &[Subspace]) -> Vec<Subspace> {
        assert_eq!(seed.len(), self.bound + 1);
        let mut spaces = seed.to_vec();
        loop {
            let mut changed = false;
            for d in 0..=self.bound {
                if spaces[d].dim() == 0 {
                    continue;
                }
                for k in 1..=(self.bound - d) {
                    let m = self.sq_matrix(k, d);
                    let img = spaces[d].image_row(&m);
                    let summed = spaces[d + k].sum(&img);
                    if summed.dim() != spaces[d + k].dim() {
                        spaces[d + k] = summed;
                        changed = true;
                    }
                }
            }
            if !changed {
                return spaces;
            }
        }
    }

    /// The submodule spanned by Sq-stable subspaces (checked), with
    /// inherited vanishing knowledge.
    pub fn sub_module(
        &self,
        name: impl Into<String>,
        spaces: &[Subspace],
    ) -> Result<BoundedUnstableModule, UnstableError> {
        assert_eq!(spaces.len(), self.bound + 1);
        let mut dims = vec![0; self.bound + 1];
        let mut labels = vec![Vec::new(); self.bound + 1];
        for d in 0..=self.bound {
            dims[d] = spaces[d].dim();
            labels[d] = (0..dims[d]).map(|i| format!("w{}_{}", d, i)).collect();
        }
        let mut sq = BTreeMap::new();
        for k in 1..=self.bound {
            for d in 0..=(self.bound - k) {
                if dims[d] == 0 {
                    continue;
                }
                let big = self.sq_matrix(k, d);
                let mut rows = Vec::new();
                for v in spaces[d].basis() {
                    let w = big.act_row(v);
                    let c = spaces[d + k].coordinates(&w).ok_or_else(|| {
                        UnstableError::InvalidParameter(format!(
                            "subspaces not Sq-stable at (k={k}, d={d})"
                        ))
                    })?;
                    rows.push(c);
                }
                let m = F2Matrix::from_rows(rows, dims[d + k]);
                if !m.is_zero() {
                    sq.insert((k, d), m);
                }
            }
        }
        let vanishing = self
            .vanishing
            .iter()
            .copied()
            .filter(|&(_, d)| dims[d] > 0)
            .collect();
        let mut m = BoundedUnstableModule::new(name, self.bound, dims, labels, sq, vanishing)?;
        for d in 0..=self.bound {
            if m.dims[d] == 0 {
                continue;
            }
            for k in 1..=d {
                if d + k <= self.bound || m.knows_zero(k, d) {
                    continue;
                }
                let parent = self.known_zero_subspace(k, d);
                if parent.dim() == 0 {
                    continue;
                }
                let into_ambient = F2Matrix::from_rows(spaces[d].basis().to_vec(), self.dims[d]);
                m.set_refined_vanishing(k, d, parent.preimage_row(&into_ambient));
            }
        }
        Ok(m)
    }

    /// The quotient by Sq-stable subspaces (checked), with inherited
    /// vanishing knowledge. Returns the quotient and the per-degree
    /// projection matrices (ambient → quotient coordinates).
    pub fn quotient_module(
        &self,
        name: impl Into<String>,
        spaces: &[Subspace],
    ) -> Result<(BoundedUnstableModule, Vec<F2Matrix>), UnstableError> {
        assert_eq!(spaces.len(), self.bound + 1);
        // stability check
        for k in 1..=self.bound {
            for d in 0..=(self.bound - k) {
                let img = spaces[d].image_row(&self.sq_matrix(k, d));
                if !spaces[d + k].contains_subspace(&img) {
                    return Err(UnstableError::InvalidParameter(format!(
                        "subspaces not Sq-stable at (k={k}, d={d})"
                    )));
                }
            }
        }
        let mut dims = vec![0; self.bound + 1];
        let mut labels = vec![Vec::new(); self.bound + 1];
        let mut proj = Vec::new();
        let mut reps: Vec<Vec<F2Vector>> = Vec::new();
        for d in 0..=self.bound {
            let comp = spaces[d].complement_in(&Subspace::full(self.dims[d]));
            dims[d] = comp.len();
            labels[d] = (0..dims[d]).map(|i| format!("q{}_{}", d, i)).collect();
            // projection: solve over [comp; sub]
            let mut rows = comp.clone();
            rows.extend(spaces[d].basis().iter().cloned());
            let solver = F2Matrix::from_rows(rows, self.dims[d]);
            let mut p = F2Matrix::zero(self.dims[d], comp.len());
            for v in 0..self.dims[d] {
                let sol = solver
                    .solve_left(&F2Vector::unit(self.dims[d], v))
                    .expect("complement plus subspace span the degree");
                for c in sol.slice(0, comp.len()).ones() {
                    p.set(v, c, true);
                }
            }
            proj.push(p);
            reps.push(comp);
        }
        let mut sq = BTreeMap::new();
        for k in 1..=self.bound {
            for d in 0..=(self.bound - k) {
                if dims[d] == 0 {
                    continue;
                }
                let big = self.sq_matrix(k, d);
                let rows: Vec<F2Vector> = reps[d]
                    .iter()
                    .map(|v| proj[d + k].act_row(&big.act_row(v)))
                    .collect();
                let m = F2Matrix::from_rows(rows, dims[d + k]);
                if !m.is_zero() {
                    sq.insert((k, d), m);
                }
            }
        }
        let vanishing = self
            .vanishing
            .iter()
            .copied()
            .filter(|&(_, d)| dims[d] > 0)
            .collect();
        let mut q = BoundedUnstableModule::new(name, self.bound, dims, labels, sq, vanishing)?;
        // a class whose chosen representative is known to die is known to
        // die: the image of zero is zero whatever the complement does
        for d in 0..=self.bound {
            if q.dims[d] == 0 {
                continue;
            }
            for k in 1..=d {
                if d + k <= self.bound || q.knows_zero(k, d) {
                    continue;
                }
                let parent = self.known_zero_subspace(k, d);
                if parent.dim() == 0 {
                    continue;
                }
                let rep_rows = F2Matrix::from_rows(reps[d].clone(), self.dims[d]);
                q.set_refined_vanishing(k, d, parent.preimage_row(&rep_rows));
            }
        }
        Ok((q, proj))
    }
}

/// A homogeneous element: a degree and a coordinate vector in that degree's
/// basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleElement {
    pub degree: usize,
    pub vec: F2Vector,
}

impl ModuleElement {
    pub fn is_zero(&self) -> bool {
        self.vec.is_zero()
    }

    /// Render over the module's basis labels, e.g. "u^2 + u^4".
    pub fn display(&self, m: &BoundedUnstableModule) -> String {
        if self.vec.is_zero() {
            return "0".into();
        }
        self.vec
            .ones()
            .into_iter()
            .map(|i| m.labels(self.degree)[i].clone())
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// A degree-preserving map of bounded unstable modules, one matrix per
/// degree (rows = source basis), verified to commute with every in-bound
/// operation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleMap {
    per_degree: Vec<F2Matrix>,
}

impl ModuleMap {
    pub fn new(
        src: &BoundedUnstableModule,
        dst: &BoundedUnstableModule,
        per_degree: Vec<F2Matrix>,
    ) -> Result<Self, UnstableError> {
        let bound = src.bound().min(dst.bound());
        assert!(per_degree.len() > bound);
        for (d, m) in per_degree.iter().enumerate().take(bound + 1) {
            if m.rows() != src.dim(d) || m.cols() != dst.dim(d) {
                return Err(UnstableError::Shape { k: 0, d });
            }
        }
        let map = ModuleMap { per_degree };
        for k in 1..=bound {
            for d in 0..=(bound - k) {
                let lhs = map.per_degree[d].mul(&dst.sq_matrix(k, d));
                let rhs = src.sq_matrix(k, d).mul(&map.per_degree[d + k]);
                if lhs != rhs {
                    return Err(UnstableError::NotEquivariant { k, d });
                }
            }
        }
        Ok(map)
    }

    pub fn identity(m: &BoundedUnstableModule) -> Self {
        ModuleMap {
            per_degree: m.dims().iter().map(|&n| F2Matrix::identity(n)).collect(),
        }
    }

    pub fn at(&self, d: usize) -> &F2Matrix {
        &self.per_degree[d]
    }

    pub fn apply(&self, x: &ModuleElement) -> ModuleElement {
        ModuleElement {
            degree: x.degree,
            vec: self.per_degree[x.degree].act_row(&x.vec),
        }
    }

    pub fn degrees(&self) -> usize {
        self.per_degree.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unstable::catalog::{f1, h_ring, sigma_f2};

    #[test]
    fn h_satisfies_examples() {
        let h = h_ring(4);
        // Sq¹u² = 0, Sq²u² = u⁴
        let u2 = h.basis_element(2, 0);
        assert!(h.sq(1, &u2).unwrap().is_zero());
        assert_eq!(h.sq(2, &u2).unwrap(), h.basis_element(4, 0));
    }

    #[test]
    fn sq_lower_examples() {
        let h = h_ring(16);
        let u = h.basis_element(1, 0);
        // Sq_0 u = u²
        assert_eq!(h.sq_lower(0, &u).unwrap(), h.basis_element(2, 0));
        // Sq_1 u² = Sq¹u² = 0
        let u2 = h.basis_element(2, 0);
        assert!(h.sq_lower(1, &u2).unwrap().is_zero());
        // Sq_{|x|} x = x
        let u3 = h.basis_element(3, 0);
        assert_eq!(h.sq_lower(3, &u3).unwrap(), u3);
        // out of bound is an error even though the value would be forced
        let u9 = h.basis_element(9, 0);
        assert!(matches!(
            h.sq_lower(0, &u9),
            Err(UnstableError::OutOfBound { .. })
        ));
        assert!(matches!(
            h.sq_lower(4, &u3),
            Err(UnstableError::LowerIndexTooLarge { .. })
        ));
    }

    #[test]
    fn f1_is_the_closure_of_u() {
        let m = f1(8);
        let support: Vec<usize> = (0..=8).filter(|&d| m.dim(d) > 0).collect();
        assert_eq!(support, vec![1, 2, 4, 8]);
        for i in 0..3 {
            let x = m.basis_element(1 << i, 0);
            let y = m.sq(1 << i, &x).unwrap();
            assert_eq!(y, m.basis_element(1 << (i + 1), 0));
        }
    }

    #[test]
    fn suspension_shifts_and_knows_its_zeros() {
        let m = f1(8).suspend(2);
        assert_eq!(m.bound(), 10);
        assert_eq!(m.dim(3), 1); // σ²u
        assert_eq!(m.dim(1), 0);
        // Sq² on σ²u⁸ (degree 10) is σ²Sq²u⁸ = 0: out of bound but known
        assert!(m.knows_zero(2, 10));
        // Sq⁸ on σ²u⁸ would be σ²u¹⁶: genuinely unknown at this bound
        assert!(!m.knows_zero(8, 10));
    }

    #[test]
    fn tensor_dims_and_cartan() {
        let m = f1(16).tensor(&f1(16));
        // degree 5 = u⊗u⁴ and u⁴⊗u
        assert_eq!(m.dim(5), 2);
        // Cartan: Sq¹(u⊗u) = u²⊗u + u⊗u², both hit
        let uu = m.basis_element(2, 0);
        let y = m.sq(1, &uu).unwrap();
        assert_eq!(y.vec.ones().len(), 2);
    }

    #[test]
    fn tensor_unit_is_identity_on_dims() {
        let m = f1(12);
        let f2 = sigma_f2(0, 12);
        let t = m.tensor(&f2);
        assert_eq!(t.dims(), m.dims());
    }

    #[test]
    fn truncate_keeps_zero_knowledge() {
        let h = h_ring(16).truncate(8);
        // Sq¹ on u⁸: C(8,1) even → known zero even though degree 9 > 8
        assert!(h.knows_zero(1, 8));
        // Sq⁸ on u⁸ = u¹⁶: nonzero beyond the new bound → unknown
        assert!(!h.knows_zero(8, 8));
    }

    #[test]
    fn module_map_equivariance_enforced() {
        let m = f1(8);
        // the zero map is fine
        let zeros: Vec<F2Matrix> = (0..=8).map(|d| F2Matrix::zero(m.dim(d), m.dim(d))).collect();
        assert!(ModuleMap::new(&m, &m, zeros).is_ok());
        // a map killing u but not u² cannot commute with Sq¹
        let mut bad: Vec<F2Matrix> = (0..=8)
            .map(|d| F2Matrix::identity(m.dim(d)))
            .collect();
        bad[1] = F2Matrix::zero(1, 1);
        assert!(ModuleMap::new(&m, &m, bad).is_err());
    }

    #[test]
    fn quotient_and_submodule_roundtrip() {
        let h = h_ring(8);
        // F1 ⊆ H as the Steenrod closure of u
        let mut seed: Vec<Subspace> = (0..=8).map(|d| Subspace::zero(h.dim(d))).collect();
        seed[1] = Subspace::full(1);
        let closed = h.stable_closure(&seed);
        let sub = h.sub_module("F1-in-H", &closed).unwrap();
        let expect: Vec<usize> = (0..=8usize)
            .map(|d| usize::from(d.is_power_of_two()))
            .collect();
        assert_eq!(&sub.dims()[..], &expect[..]);
        let (q, _) = h.quotient_module("H/F1", &closed).unwrap();
        for d in 0..=8 {
            assert_eq!(q.dim(d), h.dim(d) - sub.dim(d));
        }
    }
}

//! Connected graded-commutative F₂-algebras given by explicit in-bound
//! multiplication tables, and graded modules over them.
//!
//! An algebra is data, not symbols: one basis per degree 0..=T, a unit
//! spanning degree 0, and for every pair of degrees with a+b ≤ T a matrix
//! sending basis pairs to their product. Truncation is exact for every
//! consumer here — the bar complex only ever multiplies elements of total
//! degree within its window.
//!
//! Over a graded-commutative algebra the left and right actions of a module
//! determine each other (no signs over F₂), so a single action table
//! `M_m ⊗ A_a → M_{m+a}` serves both sides.

use std::collections::BTreeMap;

use crate::f2::{F2Matrix, F2Vector};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("degree 0 must be spanned by the unit alone")]
    NotConnected,
    #[error("unit law fails at degree {0}")]
    UnitLaw(usize),
    #[error("associativity fails on degrees ({0}, {1}, {2})")]
    Associativity(usize, usize, usize),
    #[error("graded commutativity fails on degrees ({0}, {1})")]
    Commutativity(usize, usize),
    #[error("multiplication table has wrong shape at ({0}, {1})")]
    TableShape(usize, usize),
    #[error("module action has wrong shape at ({0}, {1})")]
    ActionShape(usize, usize),
    #[error("module unit law fails at degree {0}")]
    ModuleUnitLaw(usize),
    #[error("module associativity fails on degrees ({0}, {1}, {2})")]
    ModuleAssociativity(usize, usize, usize),
    #[error("algebra map is not multiplicative on degrees ({0}, {1})")]
    MapNotMultiplicative(usize, usize),
    #[error("algebra map does not preserve the unit")]
    MapUnit,
}

/// A connected graded-commutative F₂-algebra with basis and multiplication
/// table through degree `bound`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedAlgebraPresentation {
    name: String,
    bound: usize,
    dims: Vec<usize>,
    labels: Vec<Vec<String>>,
    /// (a, b) ↦ matrix with dims[a]·dims[b] rows (pair (i,j) at row
    /// i·dims[b]+j) and dims[a+b] columns; present for all a+b ≤ bound with
    /// both factor dims positive.
    mul: BTreeMap<(usize, usize), F2Matrix>,
}

impl GradedAlgebraPresentation {
    pub fn new(
        name: impl Into<String>,
        bound: usize,
        dims: Vec<usize>,
        labels: Vec<Vec<String>>,
        mul: BTreeMap<(usize, usize), F2Matrix>,
    ) -> Result<Self, AlgebraError> {
        assert_eq!(dims.len(), bound + 1);
        assert_eq!(labels.len(), bound + 1);
        for (t, l) in labels.iter().enumerate() {
            assert_eq!(l.len(), dims[t]);
        }
        let a = GradedAlgebraPresentation {
            name: name.into(),
            bound,
            dims,
            labels,
            mul,
        };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        if self.dims[0] != 1 {
            return Err(AlgebraError::NotConnected);
        }
        for a in 0..=self.bound {
            for b in 0..=(self.bound - a) {
                if self.dims[a] == 0 || self.dims[b] == 0 {
                    continue;
                }
                let m = self
                    .mul
                    .get(&(a, b))
                    .ok_or(AlgebraError::TableShape(a, b))?;
                if m.rows() != self.dims[a] * self.dims[b] || m.cols() != self.dims[a + b] {
                    return Err(AlgebraError::TableShape(a, b));
                }
            }
        }
        // unit laws
        for b in 0..=self.bound {
            for j in 0..self.dims[b] {
                let left = self.mul[&(0, b)].row(j);
                let right = self.mul[&(b, 0)].row(j);
                let e = F2Vector::unit(self.dims[b], j);
                if *left != e || *right != e {
                    return Err(AlgebraError::UnitLaw(b));
                }
            }
        }
        // graded commutativity (no signs over F₂)
        for (&(a, b), m) in &self.mul {
            if a > b {
                continue;
            }
            let n = &self.mul[&(b, a)];
            for i in 0..self.dims[a] {
                for j in 0..self.dims[b] {
                    if m.row(i * self.dims[b] + j) != n.row(j * self.dims[a] + i) {
                        return Err(AlgebraError::Commutativity(a, b));
                    }
                }
            }
        }
        // associativity on basis triples
        for a in 0..=self.bound {
            for b in 0..=(self.bound - a) {
                for c in 0..=(self.bound - a - b) {
                    if self.dims[a] == 0 || self.dims[b] == 0 || self.dims[c] == 0 {
                        continue;
                    }
                    for i in 0..self.dims[a] {
                        for j in 0..self.dims[b] {
                            for k in 0..self.dims[c] {
                                let ab = self.mul[&(a, b)].row(i * self.dims[b] + j).clone();
                                let lhs = self.product(a + b, &ab, c, &F2Vector::unit(self.dims[c], k));
                                let bc = self.mul[&(b, c)].row(j * self.dims[c] + k).clone();
                                let rhs = self.product(a, &F2Vector::unit(self.dims[a], i), b + c, &bc);
                                if lhs != rhs {
                                    return Err(AlgebraError::Associativity(a, b, c));
                                }
                            }
                        }
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

    pub fn dim(&self, t: usize) -> usize {
        if t <= self.bound {
            self.dims[t]
        } else {
            0
        }
    }

    pub fn labels(&self, t: usize) -> &[String] {
        &self.labels[t]
    }

    pub fn mul_table(&self, a: usize, b: usize) -> Option<&F2Matrix> {
        self.mul.get(&(a, b))
    }

    /// Product of two homogeneous elements given by coordinate vectors.
    pub fn product(&self, a: usize, x: &F2Vector, b: usize, y: &F2Vector) -> F2Vector {
        assert!(a + b <= self.bound, "product escapes the bound");
        let mut out = F2Vector::zero(self.dims[a + b]);
        if self.dims[a] == 0 || self.dims[b] == 0 {
            return out;
        }
        let m = &self.mul[&(a, b)];
        for i in x.ones() {
            for j in y.ones() {
                out.xor_assign(m.row(i * self.dims[b] + j));
            }
        }
        out
    }

    /// Product of two basis elements, as a coordinate vector in degree a+b.
    pub fn basis_product(&self, a: usize, i: usize, b: usize, j: usize) -> F2Vector {
        self.mul[&(a, b)].row(i * self.dims[b] + j).clone()
    }

    /// The module "A over itself" by right multiplication.
    pub fn regular_module(&self) -> GradedModule {
        let mut act = BTreeMap::new();
        for (&(a, b), m) in &self.mul {
            act.insert((a, b), m.clone());
        }
        GradedModule::new(self.bound, self.dims.clone(), self.labels.clone(), act, self)
            .expect("regular module inherits the algebra axioms")
    }

    /// F₂ concentrated in degree 0, the action factoring through the
    /// augmentation.
    pub fn trivial_module(&self) -> GradedModule {
        let mut dims = vec![0; self.bound + 1];
        dims[0] = 1;
        let mut labels = vec![Vec::new(); self.bound + 1];
        labels[0] = vec!["1".to_string()];
        let mut act = BTreeMap::new();
        for a in 0..=self.bound {
            if self.dims[a] == 0 {
                continue;
            }
            // source pairs (m of degree 0) × (algebra degree a)
            let target = if a == 0 { 1 } else { 0 };
            act.insert((0, a), F2Matrix::identity_or_zero(self.dims[a], target));
        }
        GradedModule::new(self.bound, dims, labels, act, self)
            .expect("trivial module satisfies the axioms")
    }
}

impl F2Matrix {
    /// Identity when square is possible, zero map otherwise — a helper for
    /// action tables into possibly-empty degrees.
    fn identity_or_zero(rows: usize, cols: usize) -> F2Matrix {
        if rows == cols {
            F2Matrix::identity(rows)
        } else {
            F2Matrix::zero(rows, cols)
        }
    }
}

/// A graded module over a [`GradedAlgebraPresentation`], with one action
/// matrix per (module degree, algebra degree) pair in-bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedModule {
    bound: usize,
    dims: Vec<usize>,
    labels: Vec<Vec<String>>,
    /// (m, a) ↦ matrix with dims[m]·A.dims[a] rows and dims[m+a] columns.
    act: BTreeMap<(usize, usize), F2Matrix>,
}

impl GradedModule {
    pub fn new(
        bound: usize,
        dims: Vec<usize>,
        labels: Vec<Vec<String>>,
        act: BTreeMap<(usize, usize), F2Matrix>,
        algebra: &GradedAlgebraPresentation,
    ) -> Result<Self, AlgebraError> {
        assert_eq!(dims.len(), bound + 1);
        assert!(bound <= algebra.bound());
        let m = GradedModule {
            bound,
            dims,
            labels,
            act,
        };
        m.validate(algebra)?;
        Ok(m)
    }

    fn validate(&self, alg: &GradedAlgebraPresentation) -> Result<(), AlgebraError> {
        for md in 0..=self.bound {
            for a in 0..=(self.bound - md) {
                if self.dims[md] == 0 || alg.dim(a) == 0 {
                    continue;
                }
                let t = self
                    .act
                    .get(&(md, a))
                    .ok_or(AlgebraError::ActionShape(md, a))?;
                if t.rows() != self.dims[md] * alg.dim(a) || t.cols() != self.dims[md + a] {
                    return Err(AlgebraError::ActionShape(md, a));
                }
            }
        }
        // unit acts as identity
        for md in 0..=self.bound {
            for i in 0..self.dims[md] {
                if *self.act[&(md, 0)].row(i) != F2Vector::unit(self.dims[md], i) {
                    return Err(AlgebraError::ModuleUnitLaw(md));
                }
            }
        }
        // (m·a)·b = m·(ab)
        for md in 0..=self.bound {
            for a in 0..=(self.bound - md) {
                for b in 0..=(self.bound - md - a) {
                    if self.dims[md] == 0 || alg.dim(a) == 0 || alg.dim(b) == 0 {
                        continue;
                    }
                    for i in 0..self.dims[md] {
                        for j in 0..alg.dim(a) {
                            for k in 0..alg.dim(b) {
                                let ma = self.act[&(md, a)].row(i * alg.dim(a) + j).clone();
                                let lhs =
                                    self.action(md + a, &ma, b, &F2Vector::unit(alg.dim(b), k), alg);
                                let ab = alg.basis_product(a, j, b, k);
                                let rhs = self.action(
                                    md,
                                    &F2Vector::unit(self.dims[md], i),
                                    a + b,
                                    &ab,
                                    alg,
                                );
                                if lhs != rhs {
                                    return Err(AlgebraError::ModuleAssociativity(md, a, b));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, t: usize) -> usize {
        if t <= self.bound {
            self.dims[t]
        } else {
            0
        }
    }

    pub fn labels(&self, t: usize) -> &[String] {
        &self.labels[t]
    }

    /// m·a for homogeneous coordinate vectors.
    pub fn action(
        &self,
        md: usize,
        x: &F2Vector,
        a: usize,
        y: &F2Vector,
        alg: &GradedAlgebraPresentation,
    ) -> F2Vector {
        assert!(md + a <= self.bound);
        let mut out = F2Vector::zero(self.dims[md + a]);
        if self.dims[md] == 0 || alg.dim(a) == 0 {
            return out;
        }
        let t = &self.act[&(md, a)];
        for i in x.ones() {
            for j in y.ones() {
                out.xor_assign(t.row(i * alg.dim(a) + j));
            }
        }
        out
    }

    /// Action of a single algebra basis element on a single module basis
    /// element.
    pub fn basis_action(&self, md: usize, i: usize, a: usize, j: usize, alg: &GradedAlgebraPresentation) -> F2Vector {
        self.act[&(md, a)].row(i * alg.dim(a) + j).clone()
    }
}

/// A degree-preserving map of algebras, one matrix per degree (rows = source
/// basis). Verified unital and multiplicative in-bound at construction.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    per_degree: Vec<F2Matrix>,
}

impl AlgebraMap {
    pub fn new(
        src: &GradedAlgebraPresentation,
        dst: &GradedAlgebraPresentation,
        per_degree: Vec<F2Matrix>,
    ) -> Result<Self, AlgebraError> {
        let bound = src.bound().min(dst.bound());
        assert!(per_degree.len() > bound);
        for (t, m) in per_degree.iter().enumerate().take(bound + 1) {
            assert_eq!(m.rows(), src.dim(t));
            assert_eq!(m.cols(), dst.dim(t));
        }
        let map = AlgebraMap { per_degree };
        if map.apply(0, &F2Vector::unit(1, 0)) != F2Vector::unit(1, 0) {
            return Err(AlgebraError::MapUnit);
        }
        for a in 0..=bound {
            for b in 0..=(bound - a) {
                if src.dim(a) == 0 || src.dim(b) == 0 {
                    continue;
                }
                for i in 0..src.dim(a) {
                    for j in 0..src.dim(b) {
                        let lhs = map.apply(a + b, &src.basis_product(a, i, b, j));
                        let rhs = dst.product(
                            a,
                            &map.apply(a, &F2Vector::unit(src.dim(a), i)),
                            b,
                            &map.apply(b, &F2Vector::unit(src.dim(b), j)),
                        );
                        if lhs != rhs {
                            return Err(AlgebraError::MapNotMultiplicative(a, b));
                        }
                    }
                }
            }
        }
        Ok(map)
    }

    pub fn apply(&self, t: usize, x: &F2Vector) -> F2Vector {
        self.per_degree[t].act_row(x)
    }

    pub fn matrix(&self, t: usize) -> &F2Matrix {
        &self.per_degree[t]
    }
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

/// Exterior algebra Λ(x) on one generator of degree d > 0, truncated at
/// `bound`.
pub fn lambda(d: usize, bound: usize) -> GradedAlgebraPresentation {
    assert!(d > 0);
    let mut dims = vec![0; bound + 1];
    let mut labels = vec![Vec::new(); bound + 1];
    dims[0] = 1;
    labels[0] = vec!["1".into()];
    if d <= bound {
        dims[d] = 1;
        labels[d] = vec![format!("x{}", d)];
    }
    let mul = full_table(&dims, bound, |a, _i, b, _j| {
        if a == 0 || b == 0 {
            Some(0) // multiplying by the unit keeps the index
        } else {
            None // x·x = 0
        }
    });
    GradedAlgebraPresentation::new(format!("Lambda({})", d), bound, dims, labels, mul)
        .expect("exterior algebra is valid")
}

/// Polynomial algebra F₂[u] on one generator of degree d > 0, truncated.
pub fn poly(d: usize, bound: usize) -> GradedAlgebraPresentation {
    assert!(d > 0);
    let mut dims = vec![0; bound + 1];
    let mut labels = vec![Vec::new(); bound + 1];
    for k in 0..=(bound / d) {
        dims[k * d] = 1;
        labels[k * d] = vec![if k == 0 {
            "1".into()
        } else if k == 1 {
            "u".into()
        } else {
            format!("u^{}", k)
        }];
    }
    let mul = full_table(&dims, bound, |_a, _i, _b, _j| Some(0));
    GradedAlgebraPresentation::new(format!("Poly({})", d), bound, dims, labels, mul)
        .expect("polynomial algebra is valid")
}

/// One generator per listed degree, every product of positive-degree classes
/// zero.
pub fn square_zero(degrees: &[usize], bound: usize) -> GradedAlgebraPresentation {
    let mut dims = vec![0; bound + 1];
    let mut labels = vec![Vec::new(); bound + 1];
    dims[0] = 1;
    labels[0] = vec!["1".into()];
    for &d in degrees {
        assert!(d > 0);
        if d <= bound {
            dims[d] += 1;
            labels[d].push(format!("y{}_{}", d, dims[d]));
        }
    }
    let mul = full_table(&dims, bound, |a, i, b, j| {
        if a == 0 {
            Some(j)
        } else if b == 0 {
            Some(i)
        } else {
            None
        }
    });
    GradedAlgebraPresentation::new(
        format!("SquareZero{:?}", degrees),
        bound,
        dims,
        labels,
        mul,
    )
    .expect("square-zero algebra is valid")
}

/// Build a full multiplication table from a sparse basis-pair rule: the rule
/// returns the index of the product basis element in degree a+b, or None for
/// a zero product.
fn full_table(
    dims: &[usize],
    bound: usize,
    rule: impl Fn(usize, usize, usize, usize) -> Option<usize>,
) -> BTreeMap<(usize, usize), F2Matrix> {
    let mut mul = BTreeMap::new();
    for a in 0..=bound {
        for b in 0..=(bound - a) {
            if dims[a] == 0 || dims[b] == 0 {
                continue;
            }
            let mut m = F2Matrix::zero(dims[a] * dims[b], dims[a + b]);
            for i in 0..dims[a] {
                for j in 0..dims[b] {
                    if let Some(k) = rule(a, i, b, j) {
                        m.set(i * dims[b] + j, k, true);
                    }
                }
            }
            mul.insert((a, b), m);
        }
    }
    mul
}

/// Tensor product of algebras, basis pairs ordered (i, j) ↦ i·dim+j within
/// each bidegree block, bidegrees (a, b) of common total degree in
/// lexicographic order.
pub fn tensor_algebra(
    x: &GradedAlgebraPresentation,
    y: &GradedAlgebraPresentation,
) -> GradedAlgebraPresentation {
    let bound = x.bound().min(y.bound());
    let mut dims = vec![0; bound + 1];
    let mut labels = vec![Vec::new(); bound + 1];
    // offsets[(a,b)] = starting index of the (a,b) block inside degree a+b
    let mut offsets: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for t in 0..=bound {
        for a in 0..=t {
            let b = t - a;
            offsets.insert((a, b), dims[t]);
            dims[t] += x.dim(a) * y.dim(b);
            for i in 0..x.dim(a) {
                for j in 0..y.dim(b) {
                    labels[t].push(format!("{}|{}", x.labels(a)[i], y.labels(b)[j]));
                }
            }
        }
    }
    let index = |a: usize, i: usize, b: usize, j: usize| offsets[&(a, b)] + i * y.dim(b) + j;
    let mut mul = BTreeMap::new();
    for p in 0..=bound {
        for q in 0..=(bound - p) {
            if dims[p] == 0 || dims[q] == 0 {
                continue;
            }
            let mut m = F2Matrix::zero(dims[p] * dims[q], dims[p + q]);
            // row index must follow the same block layout as the dims above
            let mut row = 0;
            for a1 in 0..=p {
                let b1 = p - a1;
                for i1 in 0..x.dim(a1) {
                    for j1 in 0..y.dim(b1) {
                        // this source basis element is (a1,i1)⊗(b1,j1); rows for
                        // the second factor follow contiguously
                        for a2 in 0..=q {
                            let b2 = q - a2;
                            for i2 in 0..x.dim(a2) {
                                for j2 in 0..y.dim(b2) {
                                    let col_row = row * dims[q]
                                        + (index(a2, i2, b2, j2));
                                    let px = x.basis_product(a1, i1, a2, i2);
                                    let py = y.basis_product(b1, j1, b2, j2);
                                    for ci in px.ones() {
                                        for cj in py.ones() {
                                            let col = index(a1 + a2, ci, b1 + b2, cj);
                                            let cur = m.get(col_row, col);
                                            m.set(col_row, col, !cur);
                                        }
                                    }
                                }
                            }
                        }
                        row += 1;
                    }
                }
            }
            mul.insert((p, q), m);
        }
    }
    GradedAlgebraPresentation::new(
        format!("Tensor({},{})", x.name(), y.name()),
        bound,
        dims,
        labels,
        mul,
    )
    .expect("tensor of valid algebras is valid")
}

/// The inclusion a ↦ a⊗1 of `x` into `tensor_algebra(x, y)`.
pub fn tensor_inclusion_left(
    x: &GradedAlgebraPresentation,
    y: &GradedAlgebraPresentation,
) -> (GradedAlgebraPresentation, AlgebraMap) {
    let t = tensor_algebra(x, y);
    let bound = t.bound();
    let mut per_degree = Vec::new();
    for a in 0..=bound {
        let mut m = F2Matrix::zero(x.dim(a), t.dim(a));
        // the (a, 0) block starts the lexicographic block order only when
        // a = 0; recompute its offset the same way tensor_algebra does
        let mut offset = 0;
        for a1 in 0..=a {
            let b1 = a - a1;
            if a1 == a && b1 == 0 {
                break;
            }
            offset += x.dim(a1) * y.dim(b1);
        }
        for i in 0..x.dim(a) {
            // y.dim(0) == 1, so the pair (i, 0) sits at offset + i
            m.set(i, offset + i, true);
        }
        per_degree.push(m);
    }
    let map = AlgebraMap::new(x, &t, per_degree).expect("a ↦ a⊗1 is an algebra map");
    (t, map)
}

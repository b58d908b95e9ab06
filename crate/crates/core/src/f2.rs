//! Exact linear algebra over the field with two elements.
//!
//! Vectors are bit-packed into `u64` limbs, matrices are dense lists of row
//! vectors, and every operation is exact Gaussian elimination: addition is
//! XOR, the only nonzero scalar is 1, and there is no rounding anywhere.
//!
//! Two conventions coexist and are named explicitly to avoid confusion:
//! a matrix `m` viewed as the linear map `v ↦ m·v` (columns = domain) has
//! [`F2Matrix::null_space`] and column-space image, while the row convention
//! `x ↦ x·m` (rows = domain, used by the module action code) has
//! [`F2Matrix::left_null_space`] and row-space image.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    len: usize,
    limbs: Vec<u64>,
}

impl F2Vector {
    pub fn zero(len: usize) -> Self {
        F2Vector {
            len,
            limbs: vec![0; len.div_ceil(64)],
        }
    }

    /// Standard basis vector e_i.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zero(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b % 2 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.limbs[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        if value {
            self.limbs[i / 64] |= 1 << (i % 64);
        } else {
            self.limbs[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn xor_assign(&mut self, other: &F2Vector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    /// Index of the first set bit, if any.
    pub fn leading(&self) -> Option<usize> {
        for (w, &limb) in self.limbs.iter().enumerate() {
            if limb != 0 {
                return Some(w * 64 + limb.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn dot(&self, other: &F2Vector) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u32;
        for (a, b) in self.limbs.iter().zip(&other.limbs) {
            acc ^= (a & b).count_ones() & 1;
        }
        acc & 1 == 1
    }

    /// Concatenation, used to build block vectors.
    pub fn concat(&self, other: &F2Vector) -> F2Vector {
        let mut v = F2Vector::zero(self.len + other.len);
        for i in 0..self.len {
            if self.get(i) {
                v.set(i, true);
            }
        }
        for i in 0..other.len {
            if other.get(i) {
                v.set(self.len + i, true);
            }
        }
        v
    }

    pub fn slice(&self, start: usize, len: usize) -> F2Vector {
        let mut v = F2Vector::zero(len);
        for i in 0..len {
            if self.get(start + i) {
                v.set(i, true);
            }
        }
        v
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { 1 } else { 0 })?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows,
            cols,
            data: vec![F2Vector::zero(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i].set(i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<F2Vector>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        F2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn from_bit_rows(rows: &[&[u8]], cols: usize) -> Self {
        F2Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| F2Vector::from_bits(r)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &F2Vector {
        &self.data[i]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut F2Vector {
        &mut self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.data[i].set(j, v);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_zero())
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Row-vector action: x ↦ x·M.
    pub fn act_row(&self, x: &F2Vector) -> F2Vector {
        debug_assert_eq!(x.len(), self.rows);
        let mut out = F2Vector::zero(self.cols);
        for i in 0..self.rows {
            if x.get(i) {
                out.xor_assign(&self.data[i]);
            }
        }
        out
    }

    /// Matrix product self·other (row convention composes left to right:
    /// x·(A·B) = (x·A)·B).
    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        debug_assert_eq!(self.cols, other.rows);
        let data = self.data.iter().map(|r| other.act_row(r)).collect();
        F2Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for i in 0..self.rows {
            m.data[i].xor_assign(&other.data[i]);
        }
        m
    }

    /// Stack rows of `self` on top of rows of `other`.
    pub fn stack(&self, other: &F2Matrix) -> F2Matrix {
        debug_assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        F2Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn rank(&self) -> usize {
        row_echelon(self.data.clone()).len()
    }

    /// Basis of the row space, in echelon form.
    pub fn row_space(&self) -> Vec<F2Vector> {
        row_echelon(self.data.clone())
    }

    /// Basis of { y : y·M = 0 } (row convention kernel; dim = rows − rank).
    pub fn left_null_space(&self) -> Vec<F2Vector> {
        // Eliminate [M | I]; rows whose M-part vanishes give the relations.
        let n = self.rows;
        let mut work: Vec<(F2Vector, F2Vector)> = (0..n)
            .map(|i| (self.data[i].clone(), F2Vector::unit(n, i)))
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (col, work index)
        let mut kernel = Vec::new();
        for i in 0..n {
            let (mut row, mut tag) = work[i].clone();
            loop {
                match row.leading() {
                    None => {
                        kernel.push(tag);
                        break;
                    }
                    Some(lead) => {
                        if let Some(&(_, pi)) = pivots.iter().find(|&&(c, _)| c == lead) {
                            let (prow, ptag) = work[pi].clone();
                            row.xor_assign(&prow);
                            tag.xor_assign(&ptag);
                        } else {
                            pivots.push((lead, i));
                            work[i] = (row, tag);
                            break;
                        }
                    }
                }
            }
        }
        kernel
    }

    /// Basis of { x : M·x = 0 } (column convention; dim = cols − rank).
    pub fn null_space(&self) -> Vec<F2Vector> {
        self.transpose().left_null_space()
    }

    /// Solve x·M = b in the row convention.
    pub fn solve_left(&self, b: &F2Vector) -> Option<F2Vector> {
        debug_assert_eq!(b.len(), self.cols);
        let n = self.rows;
        let mut ech: Vec<(F2Vector, F2Vector)> = Vec::new(); // (reduced row, combo)
        for i in 0..n {
            let mut row = self.data[i].clone();
            let mut tag = F2Vector::unit(n, i);
            for (erow, etag) in &ech {
                let lead = erow.leading().unwrap();
                if row.get(lead) {
                    row.xor_assign(erow);
                    tag.xor_assign(etag);
                }
            }
            if !row.is_zero() {
                ech.push((row, tag));
                ech.sort_by_key(|(r, _)| r.leading().unwrap());
            }
        }
        let mut rem = b.clone();
        let mut combo = F2Vector::zero(n);
        for (erow, etag) in &ech {
            let lead = erow.leading().unwrap();
            if rem.get(lead) {
                rem.xor_assign(erow);
                combo.xor_assign(etag);
            }
        }
        if rem.is_zero() {
            Some(combo)
        } else {
            None
        }
    }

    /// Solve M·x = b in the column convention.
    pub fn solve_right(&self, b: &F2Vector) -> Option<F2Vector> {
        self.transpose().solve_left(b)
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {:?}", r)?;
        }
        Ok(())
    }
}

/// Reduce a list of vectors to echelon form (leading bits strictly increase;
/// each pivot column is cleared in the other rows). Deterministic.
pub fn row_echelon(rows: Vec<F2Vector>) -> Vec<F2Vector> {
    let mut ech: Vec<F2Vector> = Vec::new();
    for mut row in rows {
        loop {
            match row.leading() {
                None => break,
                Some(lead) => {
                    if let Some(e) = ech.iter().find(|e| e.leading() == Some(lead)) {
                        let e = e.clone();
                        row.xor_assign(&e);
                    } else {
                        ech.push(row);
                        break;
                    }
                }
            }
        }
    }
    // back-substitute so pivot columns are cleared everywhere else
    ech.sort_by_key(|r| r.leading().unwrap());
    for i in (0..ech.len()).rev() {
        let lead = ech[i].leading().unwrap();
        for j in 0..i {
            if ech[j].get(lead) {
                let lower = ech[i].clone();
                ech[j].xor_assign(&lower);
            }
        }
    }
    ech
}

/// Summary of `gaussian`, which analyses the column-convention map v ↦ M·v.
pub struct GaussianSummary {
    pub rank: usize,
    /// Basis of { v : M·v = 0 }; dimension cols − rank.
    pub kernel: Vec<F2Vector>,
    /// Basis of the image (column space); dimension rank.
    pub image: Vec<F2Vector>,
}

/// Exact rank / kernel / image of a matrix over F₂.
pub fn gaussian(m: &F2Matrix) -> GaussianSummary {
    let rank = m.rank();
    GaussianSummary {
        rank,
        kernel: m.null_space(),
        image: m.transpose().row_space(),
    }
}

/// A linear subspace of F₂^ambient, held as an echelonized basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<F2Vector>, // echelon form
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient).map(|i| F2Vector::unit(ambient, i)).collect(),
        }
    }

    pub fn from_vectors(ambient: usize, vecs: Vec<F2Vector>) -> Self {
        Subspace {
            ambient,
            basis: row_echelon(vecs),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[F2Vector] {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Remainder of v after reduction against the echelon basis.
    pub fn reduce(&self, v: &F2Vector) -> F2Vector {
        let mut rem = v.clone();
        for b in &self.basis {
            let lead = b.leading().unwrap();
            if rem.get(lead) {
                rem.xor_assign(b);
            }
        }
        rem
    }

    /// Coordinates of v in the echelon basis, if v lies in the subspace.
    pub fn coordinates(&self, v: &F2Vector) -> Option<F2Vector> {
        let mut rem = v.clone();
        let mut coords = F2Vector::zero(self.basis.len());
        for (i, b) in self.basis.iter().enumerate() {
            let lead = b.leading().unwrap();
            if rem.get(lead) {
                rem.xor_assign(b);
                coords.set(i, true);
            }
        }
        if rem.is_zero() {
            Some(coords)
        } else {
            None
        }
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        debug_assert_eq!(self.ambient, other.ambient);
        let mut vecs = self.basis.clone();
        vecs.extend(other.basis.iter().cloned());
        Subspace::from_vectors(self.ambient, vecs)
    }

    /// Annihilator under the coordinatewise dot pairing: { w : v·w = 0 ∀v }.
    /// The pairing is nondegenerate, so dim = ambient − dim and the double
    /// annihilator recovers the subspace.
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.ambient);
        }
        let m = F2Matrix::from_rows(self.basis.clone(), self.ambient);
        Subspace::from_vectors(self.ambient, m.null_space())
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        debug_assert_eq!(self.ambient, other.ambient);
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// Preimage { x : x·m ∈ self } of this subspace under the row-convention
    /// map given by `m` (so `m.rows()` is the domain dimension).
    pub fn preimage_row(&self, m: &F2Matrix) -> Subspace {
        debug_assert_eq!(m.cols(), self.ambient);
        let ann = self.annihilator();
        if ann.dim() == 0 {
            return Subspace::full(m.rows());
        }
        // x·m ⊥ a for every annihilator generator a  ⇔  x·(m·aᵀ) = 0
        let constraints = F2Matrix::from_rows(ann.basis.clone(), self.ambient).transpose();
        let p = m.mul(&constraints); // rows(m) × dim(ann)
        Subspace::from_vectors(m.rows(), p.left_null_space())
    }

    /// Image { x·m : x ∈ self } under the row-convention map.
    pub fn image_row(&self, m: &F2Matrix) -> Subspace {
        debug_assert_eq!(m.rows(), self.ambient);
        Subspace::from_vectors(
            m.cols(),
            self.basis.iter().map(|v| m.act_row(v)).collect(),
        )
    }

    /// Deterministic complement of `self` inside `sup` (which must contain
    /// it): vectors of `sup`'s echelon basis reduced against `self`, greedily
    /// kept when independent. Feeding echelonized bases keeps the choice
    /// lexicographically least with respect to pivot positions.
    pub fn complement_in(&self, sup: &Subspace) -> Vec<F2Vector> {
        debug_assert!(sup.contains_subspace(self));
        let mut chosen: Vec<F2Vector> = Vec::new();
        for v in &sup.basis {
            let mut rem = self.reduce(v);
            for c in &chosen {
                let lead = c.leading().unwrap();
                if rem.get(lead) {
                    rem.xor_assign(c);
                }
            }
            if !rem.is_zero() {
                chosen.push(rem);
            }
        }
        chosen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_identity() {
        let g = gaussian(&F2Matrix::identity(3));
        assert_eq!(g.rank, 3);
        assert!(g.kernel.is_empty());
        assert_eq!(g.image.len(), 3);
    }

    #[test]
    fn gaussian_zero_2x5() {
        let g = gaussian(&F2Matrix::zero(2, 5));
        assert_eq!(g.rank, 0);
        assert_eq!(g.kernel.len(), 5);
        assert!(g.image.is_empty());
    }

    #[test]
    fn gaussian_all_ones_2x2() {
        let m = F2Matrix::from_bit_rows(&[&[1, 1], &[1, 1]], 2);
        let g = gaussian(&m);
        assert_eq!(g.rank, 1);
        assert_eq!(g.kernel.len(), 1);
        // kernel of v ↦ M·v is spanned by (1,1)
        assert_eq!(g.kernel[0], F2Vector::from_bits(&[1, 1]));
    }

    #[test]
    fn solve_left_roundtrip() {
        let m = F2Matrix::from_bit_rows(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 0]], 3);
        let x = F2Vector::from_bits(&[1, 1, 0]);
        let b = m.act_row(&x);
        let sol = m.solve_left(&b).unwrap();
        assert_eq!(m.act_row(&sol), b);
    }

    #[test]
    fn solve_left_no_solution() {
        let m = F2Matrix::from_bit_rows(&[&[1, 0], &[1, 0]], 2);
        assert!(m.solve_left(&F2Vector::from_bits(&[0, 1])).is_none());
    }

    #[test]
    fn subspace_intersection() {
        // span{(1,0,0),(0,1,0)} ∩ span{(0,1,0),(0,0,1)} = span{(0,1,0)}
        let u = Subspace::from_vectors(
            3,
            vec![F2Vector::from_bits(&[1, 0, 0]), F2Vector::from_bits(&[0, 1, 0])],
        );
        let w = Subspace::from_vectors(
            3,
            vec![F2Vector::from_bits(&[0, 1, 0]), F2Vector::from_bits(&[0, 0, 1])],
        );
        let i = u.intersect(&w);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&F2Vector::from_bits(&[0, 1, 0])));
    }

    #[test]
    fn subspace_preimage() {
        // m: F2^2 -> F2^2 row convention, m = [[1,1],[0,1]]
        // preimage of span{(1,1)}: x with x·m ∈ span{(1,1)}:
        // e0·m = (1,1) ∈ W; e1·m = (0,1) ∉ W; e0+e1 ↦ (1,0) ∉ W.
        let m = F2Matrix::from_bit_rows(&[&[1, 1], &[0, 1]], 2);
        let w = Subspace::from_vectors(2, vec![F2Vector::from_bits(&[1, 1])]);
        let p = w.preimage_row(&m);
        assert_eq!(p.dim(), 1);
        assert!(p.contains(&F2Vector::from_bits(&[1, 0])));
    }

    #[test]
    fn annihilator_dims() {
        let u = Subspace::from_vectors(
            4,
            vec![F2Vector::from_bits(&[1, 1, 0, 0]), F2Vector::from_bits(&[0, 0, 1, 1])],
        );
        let a = u.annihilator();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.annihilator(), u);
    }

    #[test]
    fn complement_covers() {
        let s = Subspace::from_vectors(3, vec![F2Vector::from_bits(&[1, 1, 0])]);
        let full = Subspace::full(3);
        let c = s.complement_in(&full);
        assert_eq!(c.len(), 2);
        let mut all = s.basis().to_vec();
        all.extend(c);
        assert_eq!(Subspace::from_vectors(3, all).dim(), 3);
    }
}

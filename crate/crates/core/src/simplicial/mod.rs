//! Finite pointed simplicial sets as raw index tables.
//!
//! A space is stored up to a level cap: `cells[n]` counts *all*
//! n-simplices (degenerate ones included), `faces[n][i]` and
//! `degens[n][i]` are plain index maps, and every simplicial identity
//! that fits under the cap is checked at construction. Cohomology in
//! degrees ≤ n_max − 1 is unaffected by the missing levels above the cap,
//! which is why the catalog builds each space just one level higher than
//! the cohomological range it is asked for.

pub mod catalog;
pub mod cobar;
pub mod cochains;

pub use catalog::make_space;
pub use cobar::{cobar_comparison, cobar_cosimplicial_rows, CobarComparison};
pub use cochains::{cohomology, cohomology_ring, cup_product, CohomologyPage};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("face identity d_{i} d_{j} fails on a level-{n} simplex")]
    FaceFace { i: usize, j: usize, n: usize },
    #[error("degeneracy identity s_{i} s_{j} fails on a level-{n} simplex")]
    DegenDegen { i: usize, j: usize, n: usize },
    #[error("mixed identity d_{i} s_{j} fails on a level-{n} simplex")]
    Mixed { i: usize, j: usize, n: usize },
    #[error("index table has the wrong shape at level {0}")]
    Shape(usize),
    #[error("map does not commute with the structure maps at level {0}")]
    NotSimplicial(usize),
    #[error("cosimplicial identity d^{j} d^{i} fails out of stage {n}")]
    CofaceFace { i: usize, j: usize, n: usize },
    #[error("cosimplicial identity s^{j} s^{i} fails out of stage {n}")]
    CodegenCodegen { i: usize, j: usize, n: usize },
    #[error("cosimplicial identity s^{j} d^{i} fails out of stage {n}")]
    CoMixed { i: usize, j: usize, n: usize },
    #[error("the simplex subset is not closed under faces/degeneracies")]
    NotASubcomplex,
    #[error("space is not connected (H⁰ has dimension {0})")]
    NotConnected(usize),
    #[error("invalid construction: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug)]
pub struct FiniteSimplicialSet {
    name: String,
    n_max: usize,
    cells: Vec<usize>,
    labels: Vec<Vec<String>>,
    /// faces[n][i][x] = dᵢx for 1 ≤ n ≤ n_max, 0 ≤ i ≤ n; faces[0] empty
    faces: Vec<Vec<Vec<usize>>>,
    /// degens[n][i][x] = sᵢx for 0 ≤ n < n_max, 0 ≤ i ≤ n; degens[n_max] empty
    degens: Vec<Vec<Vec<usize>>>,
    basepoint: usize,
    /// degenerate[n][x] with degenerate[0] all-false
    degenerate: Vec<Vec<bool>>,
}

impl FiniteSimplicialSet {
    pub fn new(
        name: impl Into<String>,
        n_max: usize,
        cells: Vec<usize>,
        labels: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
        basepoint: usize,
    ) -> Result<Self, SpaceError> {
        let mut x = FiniteSimplicialSet {
            name: name.into(),
            n_max,
            cells,
            labels,
            faces,
            degens,
            basepoint,
            degenerate: Vec::new(),
        };
        x.check_shapes()?;
        x.verify_identities()?;
        x.mark_degenerate();
        Ok(x)
    }

    fn check_shapes(&self) -> Result<(), SpaceError> {
        let n_max = self.n_max;
        if self.cells.len() != n_max + 1
            || self.labels.len() != n_max + 1
            || self.faces.len() != n_max + 1
            || self.degens.len() != n_max + 1
        {
            return Err(SpaceError::Shape(0));
        }
        if self.cells[0] == 0 || self.basepoint >= self.cells[0] {
            return Err(SpaceError::Shape(0));
        }
        for n in 0..=n_max {
            if self.labels[n].len() != self.cells[n] {
                return Err(SpaceError::Shape(n));
            }
            let want_faces = if n == 0 { 0 } else { n + 1 };
            if self.faces[n].len() != want_faces {
                return Err(SpaceError::Shape(n));
            }
            for f in &self.faces[n] {
                if f.len() != self.cells[n] || f.iter().any(|&y| y >= self.cells[n - 1]) {
                    return Err(SpaceError::Shape(n));
                }
            }
            let want_degens = if n == n_max { 0 } else { n + 1 };
            if self.degens[n].len() != want_degens {
                return Err(SpaceError::Shape(n));
            }
            for s in &self.degens[n] {
                if s.len() != self.cells[n] || s.iter().any(|&y| y >= self.cells[n + 1]) {
                    return Err(SpaceError::Shape(n));
                }
            }
        }
        Ok(())
    }

    fn verify_identities(&self) -> Result<(), SpaceError> {
        let n_max = self.n_max;
        // dᵢdⱼ = dⱼ₋₁dᵢ (i < j)
        for n in 2..=n_max {
            for j in 1..=n {
                for i in 0..j {
                    for x in 0..self.cells[n] {
                        let a = self.faces[n - 1][i][self.faces[n][j][x]];
                        let b = self.faces[n - 1][j - 1][self.faces[n][i][x]];
                        if a != b {
                            return Err(SpaceError::FaceFace { i, j, n });
                        }
                    }
                }
            }
        }
        // sᵢsⱼ = sⱼ₊₁sᵢ (i ≤ j)
        for n in 0..n_max.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    for x in 0..self.cells[n] {
                        let a = self.degens[n + 1][i][self.degens[n][j][x]];
                        let b = self.degens[n + 1][j + 1][self.degens[n][i][x]];
                        if a != b {
                            return Err(SpaceError::DegenDegen { i, j, n });
                        }
                    }
                }
            }
        }
        // dᵢsⱼ: three ranges
        for n in 0..n_max {
            for j in 0..=n {
                for i in 0..=(n + 1) {
                    for x in 0..self.cells[n] {
                        let lhs = self.faces[n + 1][i][self.degens[n][j][x]];
                        let rhs = if i == j || i == j + 1 {
                            x
                        } else if i < j {
                            // needs n ≥ 1 automatically (j ≥ 1)
                            self.degens[n - 1][j - 1][self.faces[n][i][x]]
                        } else {
                            self.degens[n - 1][j][self.faces[n][i - 1][x]]
                        };
                        if lhs != rhs {
                            return Err(SpaceError::Mixed { i, j, n });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn mark_degenerate(&mut self) {
        let mut deg = vec![vec![false; self.cells[0]]];
        for n in 1..=self.n_max {
            let mut level = vec![false; self.cells[n]];
            for s in &self.degens[n - 1] {
                for &y in s {
                    level[y] = true;
                }
            }
            deg.push(level);
        }
        self.degenerate = deg;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn level_cap(&self) -> usize {
        self.n_max
    }

    pub fn cells(&self, n: usize) -> usize {
        self.cells[n]
    }

    pub fn label(&self, n: usize, x: usize) -> &str {
        &self.labels[n][x]
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.faces[n][i][x]
    }

    pub fn degen(&self, n: usize, i: usize, x: usize) -> usize {
        self.degens[n][i][x]
    }

    pub fn is_degenerate(&self, n: usize, x: usize) -> bool {
        self.degenerate[n][x]
    }

    /// Indices of the nondegenerate n-simplices, ascending.
    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        (0..self.cells[n])
            .filter(|&x| !self.degenerate[n][x])
            .collect()
    }

    /// The iterated degeneracy of the basepoint at level n.
    pub fn basepoint_at(&self, n: usize) -> usize {
        let mut x = self.basepoint;
        for m in 0..n {
            x = self.degens[m][0][x];
        }
        x
    }

    /// Front p-face: strip the last vertices one at a time.
    pub fn front_face(&self, n: usize, p: usize, x: usize) -> usize {
        let mut y = x;
        for level in ((p + 1)..=n).rev() {
            y = self.faces[level][level][y];
        }
        y
    }

    /// Back q-face: strip the first n − q vertices with d₀.
    pub fn back_face(&self, n: usize, q: usize, x: usize) -> usize {
        let mut y = x;
        for level in ((q + 1)..=n).rev() {
            y = self.faces[level][0][y];
        }
        y
    }
}

/// A levelwise index map commuting with faces and degeneracies.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    at: Vec<Vec<usize>>,
}

impl SimplicialMap {
    pub fn new(
        src: &FiniteSimplicialSet,
        dst: &FiniteSimplicialSet,
        at: Vec<Vec<usize>>,
    ) -> Result<Self, SpaceError> {
        let n_max = src.n_max.min(dst.n_max);
        if at.len() < n_max + 1 {
            return Err(SpaceError::Shape(at.len()));
        }
        for n in 0..=n_max {
            if at[n].len() != src.cells[n] || at[n].iter().any(|&y| y >= dst.cells[n]) {
                return Err(SpaceError::Shape(n));
            }
        }
        for n in 1..=n_max {
            for i in 0..=n {
                for x in 0..src.cells[n] {
                    if at[n - 1][src.faces[n][i][x]] != dst.faces[n][i][at[n][x]] {
                        return Err(SpaceError::NotSimplicial(n));
                    }
                }
            }
        }
        for n in 0..n_max {
            for i in 0..=n {
                for x in 0..src.cells[n] {
                    if at[n + 1][src.degens[n][i][x]] != dst.degens[n][i][at[n][x]] {
                        return Err(SpaceError::NotSimplicial(n));
                    }
                }
            }
        }
        Ok(SimplicialMap { at })
    }

    pub fn apply(&self, n: usize, x: usize) -> usize {
        self.at[n][x]
    }

    pub fn levels(&self) -> usize {
        self.at.len()
    }
}

#[cfg(test)]
mod tests {
    use super::catalog::{delta, point, s1};
    use super::*;

    #[test]
    fn point_has_one_cell_per_level() {
        let p = point(4);
        for n in 0..=4 {
            assert_eq!(p.cells(n), 1);
            assert_eq!(p.nondegenerate(n).len(), usize::from(n == 0));
        }
    }

    #[test]
    fn delta_one_counts() {
        // Δ¹ level k: monotone words in {0,1} of length k+1
        let d = delta(1, 4);
        for k in 0..=4usize {
            assert_eq!(d.cells(k), k + 2);
        }
        assert_eq!(d.nondegenerate(0).len(), 2);
        assert_eq!(d.nondegenerate(1).len(), 1);
        assert_eq!(d.nondegenerate(2).len(), 0);
    }

    #[test]
    fn circle_is_minimal() {
        let c = s1(5);
        for k in 0..=5usize {
            assert_eq!(c.cells(k), k + 1, "level {k}");
        }
        assert_eq!(c.nondegenerate(1).len(), 1);
        assert_eq!(c.nondegenerate(2).len(), 0);
    }

    #[test]
    fn identity_violation_is_caught() {
        let p = point(2);
        let mut faces = p.faces.clone();
        // a lone vertex can't break, so fabricate a two-vertex fake edge
        let cells = vec![2, 1, 1];
        faces[1] = vec![vec![0], vec![1]];
        faces[2] = vec![vec![0], vec![0], vec![0]];
        let degens = vec![vec![vec![0], vec![0]], vec![vec![0]], vec![]];
        let labels = vec![
            vec!["a".into(), "b".into()],
            vec!["e".into()],
            vec!["t".into()],
        ];
        // s₀a should be an edge with both faces a; the fake edge has faces
        // a, b — the mixed identity d₁s₀ = id must fail
        let r = FiniteSimplicialSet::new("bad", 2, cells, labels, faces, degens, 0);
        assert!(r.is_err());
    }

    #[test]
    fn front_and_back_faces_of_an_edge() {
        let d = delta(1, 3);
        let edge = d.nondegenerate(1)[0];
        // front vertex of [01] is 0, back vertex is 1
        let v0 = d.front_face(1, 0, edge);
        let v1 = d.back_face(1, 0, edge);
        assert_eq!(d.label(0, v0), "0");
        assert_eq!(d.label(0, v1), "1");
    }
}

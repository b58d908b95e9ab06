//! Geometric cobar construction: the cosimplicial space Bⁿ = X × Yⁿ × Z.
//!
//! Coface conventions (one of several equivalent indexings in the
//! literature; this module fixes the following and verifies every
//! cosimplicial identity mechanically rather than leaning on the
//! choice): d⁰ inserts f(x) in front of the Y-block, dⁱ duplicates the
//! i-th Y factor for 1 ≤ i ≤ n, dⁿ⁺¹... — numbered so that the last
//! coface out of Bⁿ is dⁿ⁺¹, inserting g(z) behind the block — and the
//! codegeneracy sⁱ deletes the (i+1)-st Y factor. Applying normalized
//! cochains levelwise turns the row into a simplicial graded vector
//! space whose identities are checked again on the matrix side, and
//! taking cohomology of each stage gives the geometric E₁ page that
//! [`cobar_comparison`] matches against the algebraic two-sided bar.

use std::collections::BTreeMap;

use crate::f2::{F2Matrix, F2Vector};
use crate::homological::bar::{bar_complex, bar_words};
use crate::homological::simplicial_vs::{GradedMap, SimplicialGradedVS};

use super::catalog::{point, product_many, ProductSpace};
use super::cochains::{
    cohomology, cohomology_ring, cup_product, pullback_cochain, pullback_matrix, CohomologyPage,
};
use super::{FiniteSimplicialSet, SimplicialMap, SpaceError};

/// A constant map collapsing everything to the basepoint orbit.
pub fn constant_to_basepoint(
    src: &FiniteSimplicialSet,
    dst: &FiniteSimplicialSet,
) -> SimplicialMap {
    let cap = src.level_cap().min(dst.level_cap());
    let at = (0..=cap)
        .map(|n| vec![dst.basepoint_at(n); src.cells(n)])
        .collect();
    SimplicialMap::new(src, dst, at).expect("a constant map is simplicial")
}

/// The cobar row B⁰ … B^{s_max} with its cofaces and codegeneracies.
pub struct CosimplicialSpace {
    stages: Vec<ProductSpace>,
    /// cofaces[n][i]: B^{n-1} → B^n for 1 ≤ n ≤ s_max, 0 ≤ i ≤ n
    cofaces: Vec<Vec<SimplicialMap>>,
    /// codegens[n][i]: B^{n+1} → B^n for 0 ≤ n < s_max, 0 ≤ i ≤ n
    codegens: Vec<Vec<SimplicialMap>>,
}

/// Build the cosimplicial space of the span X → Y ← Z along simplicial
/// maps f and g. All three spaces must share a level cap.
pub fn geometric_cobar(
    x: &FiniteSimplicialSet,
    y: &FiniteSimplicialSet,
    z: &FiniteSimplicialSet,
    f: &SimplicialMap,
    g: &SimplicialMap,
    s_max: usize,
) -> Result<CosimplicialSpace, SpaceError> {
    let cap = x.level_cap();
    if y.level_cap() != cap || z.level_cap() != cap {
        return Err(SpaceError::Invalid(
            "cobar factors must share a level cap".into(),
        ));
    }
    if f.levels() <= cap || g.levels() <= cap {
        return Err(SpaceError::Invalid(
            "attaching maps must cover the level cap".into(),
        ));
    }
    let stages: Vec<ProductSpace> = (0..=s_max)
        .map(|s| {
            let mut factors: Vec<&FiniteSimplicialSet> = vec![x];
            factors.extend(std::iter::repeat(y).take(s));
            factors.push(z);
            product_many(&factors, format!("B{s}"))
        })
        .collect();
    let mut cofaces = vec![Vec::new()];
    for n in 1..=s_max {
        let lo = &stages[n - 1];
        let hi = &stages[n];
        let mut maps = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let at: Vec<Vec<usize>> = (0..=cap)
                .map(|m| {
                    (0..lo.space.cells(m))
                        .map(|c| {
                            let mut t = lo.decode(m, c);
                            // lo tuples are (x, y₁ … y_{n-1}, z)
                            if i == 0 {
                                t.insert(1, f.apply(m, t[0]));
                            } else if i == n {
                                t.insert(n, g.apply(m, t[n]));
                            } else {
                                t.insert(i + 1, t[i]);
                            }
                            hi.encode(m, &t)
                        })
                        .collect()
                })
                .collect();
            maps.push(SimplicialMap::new(&lo.space, &hi.space, at)?);
        }
        cofaces.push(maps);
    }
    let mut codegens = Vec::new();
    for n in 0..s_max {
        let hi = &stages[n + 1];
        let lo = &stages[n];
        let mut maps = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let at: Vec<Vec<usize>> = (0..=cap)
                .map(|m| {
                    (0..hi.space.cells(m))
                        .map(|c| {
                            let mut t = hi.decode(m, c);
                            t.remove(i + 1);
                            lo.encode(m, &t)
                        })
                        .collect()
                })
                .collect();
            maps.push(SimplicialMap::new(&hi.space, &lo.space, at)?);
        }
        codegens.push(maps);
    }
    if s_max > 0 {
        codegens.push(Vec::new());
    }
    let row = CosimplicialSpace {
        stages,
        cofaces,
        codegens,
    };
    row.verify_cosimplicial_identities()?;
    Ok(row)
}

impl CosimplicialSpace {
    pub fn s_max(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn stage(&self, n: usize) -> &FiniteSimplicialSet {
        &self.stages[n].space
    }

    pub fn stage_product(&self, n: usize) -> &ProductSpace {
        &self.stages[n]
    }

    /// dⁱ: B^{n−1} → B^n.
    pub fn coface(&self, n: usize, i: usize) -> &SimplicialMap {
        &self.cofaces[n][i]
    }

    /// sⁱ: B^{n+1} → B^n.
    pub fn codegen(&self, n: usize, i: usize) -> &SimplicialMap {
        &self.codegens[n][i]
    }

    /// Every cosimplicial identity expressible inside the row, on raw
    /// simplex indices at every level.
    fn verify_cosimplicial_identities(&self) -> Result<(), SpaceError> {
        let s_max = self.s_max();
        let cap = self.stages[0].space.level_cap();
        // dʲ dⁱ = dⁱ dʲ⁻¹ for i < j, both B^n → B^{n+2}
        for n in 0..s_max.saturating_sub(1) {
            for j in 1..=(n + 2) {
                for i in 0..j {
                    for m in 0..=cap {
                        for c in 0..self.stages[n].space.cells(m) {
                            let lhs = self.cofaces[n + 2][j]
                                .apply(m, self.cofaces[n + 1][i].apply(m, c));
                            let rhs = self.cofaces[n + 2][i]
                                .apply(m, self.cofaces[n + 1][j - 1].apply(m, c));
                            if lhs != rhs {
                                return Err(SpaceError::CofaceFace { i, j, n });
                            }
                        }
                    }
                }
            }
        }
        // sʲ sⁱ = sⁱ sʲ⁺¹ for i ≤ j, both B^{n+2} → B^n
        for n in 0..s_max.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    for m in 0..=cap {
                        for c in 0..self.stages[n + 2].space.cells(m) {
                            let lhs =
                                self.codegens[n][j].apply(m, self.codegens[n + 1][i].apply(m, c));
                            let rhs = self.codegens[n][i]
                                .apply(m, self.codegens[n + 1][j + 1].apply(m, c));
                            if lhs != rhs {
                                return Err(SpaceError::CodegenCodegen { i, j, n });
                            }
                        }
                    }
                }
            }
        }
        // sʲ dⁱ out of B^n: identity / shifted coface / shifted codegeneracy
        for n in 0..s_max {
            for j in 0..=n {
                for i in 0..=(n + 1) {
                    for m in 0..=cap {
                        for c in 0..self.stages[n].space.cells(m) {
                            let lhs =
                                self.codegens[n][j].apply(m, self.cofaces[n + 1][i].apply(m, c));
                            let rhs = if i == j || i == j + 1 {
                                c
                            } else if i < j {
                                self.cofaces[n][i].apply(m, self.codegens[n - 1][j - 1].apply(m, c))
                            } else {
                                self.cofaces[n][i - 1].apply(m, self.codegens[n - 1][j].apply(m, c))
                            };
                            if lhs != rhs {
                                return Err(SpaceError::CoMixed { i, j, n });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Normalized t-cochains of every stage, assembled into a simplicial
    /// graded vector space (cochains are contravariant, so cofaces become
    /// faces). Its constructor re-verifies the simplicial identities on
    /// the pullback matrices.
    pub fn cochain_rows(&self, t_max: usize) -> Result<SimplicialGradedVS, SpaceError> {
        let s_max = self.s_max();
        assert!(t_max <= self.stages[0].space.level_cap());
        let dims: Vec<Vec<usize>> = (0..=s_max)
            .map(|n| {
                (0..=t_max)
                    .map(|t| self.stages[n].space.nondegenerate(t).len())
                    .collect()
            })
            .collect();
        let mut faces = vec![Vec::new()];
        for n in 1..=s_max {
            let maps = (0..=n)
                .map(|i| {
                    GradedMap::new(
                        (0..=t_max)
                            .map(|t| {
                                pullback_matrix(
                                    &self.cofaces[n][i],
                                    &self.stages[n - 1].space,
                                    &self.stages[n].space,
                                    t,
                                )
                            })
                            .collect(),
                    )
                })
                .collect();
            faces.push(maps);
        }
        let mut degens = Vec::new();
        for n in 0..s_max {
            let maps = (0..=n)
                .map(|i| {
                    GradedMap::new(
                        (0..=t_max)
                            .map(|t| {
                                pullback_matrix(
                                    &self.codegens[n][i],
                                    &self.stages[n + 1].space,
                                    &self.stages[n].space,
                                    t,
                                )
                            })
                            .collect(),
                    )
                })
                .collect();
            degens.push(maps);
        }
        degens.push(Vec::new());
        SimplicialGradedVS::new(t_max, dims, faces, degens)
            .map_err(|e| SpaceError::Invalid(format!("cochain rows: {e}")))
    }

    /// Cohomology of each stage through degree t_max.
    pub fn levelwise_cohomology(&self, t_max: usize) -> Vec<CohomologyPage> {
        self.stages
            .iter()
            .map(|b| cohomology(&b.space, t_max))
            .collect()
    }
}

/// Outcome of matching the geometric E₁ page against the algebraic
/// two-sided bar of the cohomology ring of Y, over pt → Y ← pt.
pub struct CobarComparison {
    pub s_max: usize,
    pub t_max: usize,
    /// (s, t) → (geometric dim, algebraic dim)
    pub dims: BTreeMap<(usize, usize), (usize, usize)>,
    pub dims_match: bool,
    /// the word-basis transports are isomorphisms at every bidegree
    pub transports_invertible: bool,
    /// bar d₁ equals the geometric d₁ after transport, at every bidegree
    pub d1_match: bool,
}

impl CobarComparison {
    pub fn all_match(&self) -> bool {
        self.dims_match && self.transports_invertible && self.d1_match
    }
}

/// Compare geometric and algebraic E₁ pages for pt → Y ← pt.
///
/// The transport sends the bar word 1 ⊗ a₁ ⊗ … ⊗ a_s ⊗ 1 to the product
/// of the pullbacks of the chosen cocycle representatives of the aₖ
/// along the s projections B^s → Y; equality of d₁ is checked through
/// that change of basis, so matrices are compared in the word basis.
pub fn cobar_comparison(
    y: &FiniteSimplicialSet,
    s_max: usize,
    t_max: usize,
) -> Result<CobarComparison, SpaceError> {
    let cap = y.level_cap();
    assert!(t_max + 1 <= cap, "comparison needs levels through t_max + 1");
    let pt = point(cap);
    let c = constant_to_basepoint(&pt, y);
    let row = geometric_cobar(&pt, y, &pt, &c, &c, s_max)?;
    let page_y = cohomology(y, t_max);
    let alg = cohomology_ring(y, t_max)?;
    let triv = alg.trivial_module();
    let bar = bar_complex(&alg, &triv, &triv, s_max, t_max, false);
    let pages = row.levelwise_cohomology(t_max);

    // word-basis transports P[s][t]: rows = bar words, cols = geometric classes
    let mut transports: Vec<Vec<F2Matrix>> = Vec::with_capacity(s_max + 1);
    let mut dims = BTreeMap::new();
    let mut dims_match = true;
    let mut invertible = true;
    for s in 0..=s_max {
        let stage = row.stage_product(s);
        let projs: Vec<SimplicialMap> = (1..=s).map(|k| stage.projection(k, y)).collect();
        let mut per_t = Vec::with_capacity(t_max + 1);
        for t in 0..=t_max {
            let words = bar_words(&alg, &triv, &triv, s, t, false);
            let geo_dim = pages[s].dim(t);
            dims.insert((s, t), (geo_dim, words.len()));
            if geo_dim != words.len() {
                dims_match = false;
            }
            let mut rows = Vec::with_capacity(words.len());
            for w in &words {
                let mut cur = F2Vector::zero(stage.space.nondegenerate(0).len());
                for i in 0..cur.len() {
                    cur.set(i, true);
                }
                let mut deg = 0usize;
                for (k, &(d, idx)) in w.letters.iter().enumerate() {
                    let pulled =
                        pullback_cochain(&projs[k], &stage.space, y, d, page_y.rep(d, idx));
                    cur = cup_product(&stage.space, deg, &cur, d, &pulled);
                    deg += d;
                }
                let class = pages[s]
                    .class_of(t, &cur)
                    .expect("a product of cocycles is a cocycle");
                rows.push(class);
            }
            let p = F2Matrix::from_rows(rows, geo_dim);
            if p.rows() != p.cols() || p.rank() != p.rows() {
                invertible = false;
            }
            per_t.push(p);
        }
        transports.push(per_t);
    }

    // d₁ agreement: bar_d · P_{s-1} = P_s · geometric_d at every bidegree
    let mut d1_match = true;
    for s in 1..=s_max {
        for t in 0..=t_max {
            let lo_dim = pages[s - 1].dim(t);
            let mut rows = Vec::with_capacity(pages[s].dim(t));
            for r in 0..pages[s].dim(t) {
                let mut acc = F2Vector::zero(row.stage(s - 1).nondegenerate(t).len());
                for i in 0..=s {
                    acc.xor_assign(&pullback_cochain(
                        row.coface(s, i),
                        row.stage(s - 1),
                        row.stage(s),
                        t,
                        pages[s].rep(t, r),
                    ));
                }
                let class = pages[s - 1]
                    .class_of(t, &acc)
                    .expect("d₁ of a cocycle class is a cocycle");
                rows.push(class);
            }
            let d_geo = F2Matrix::from_rows(rows, lo_dim);
            let lhs = bar.differential(s, t).mul(&transports[s - 1][t]);
            let rhs = transports[s][t].mul(&d_geo);
            if lhs != rhs {
                d1_match = false;
            }
        }
    }
    Ok(CobarComparison {
        s_max,
        t_max,
        dims,
        dims_match,
        transports_invertible: invertible,
        d1_match,
    })
}

pub fn cobar_cosimplicial_rows(
    x: &FiniteSimplicialSet,
    y: &FiniteSimplicialSet,
    z: &FiniteSimplicialSet,
    s_max: usize,
    t_max: usize,
) -> Result<SimplicialGradedVS, SpaceError> {
    let f = constant_to_basepoint(x, y);
    let g = constant_to_basepoint(z, y);
    geometric_cobar(x, y, z, &f, &g, s_max)?.cochain_rows(t_max)
}

#[cfg(test)]
mod tests {
    use super::super::catalog::{product, s1};
    use super::*;

    #[test]
    fn circle_row_passes_all_identity_checks() {
        let y = s1(4);
        let pt = point(4);
        let c = constant_to_basepoint(&pt, &y);
        let row = geometric_cobar(&pt, &y, &pt, &c, &c, 3).unwrap();
        assert_eq!(row.s_max(), 3);
        // pullback rows again verify the identities on matrices
        let vs = row.cochain_rows(3).unwrap();
        assert_eq!(vs.n_max(), 3);
    }

    #[test]
    fn stage_cohomology_is_a_tensor_power() {
        let y = s1(4);
        let pt = point(4);
        let c = constant_to_basepoint(&pt, &y);
        let row = geometric_cobar(&pt, &y, &pt, &c, &c, 3).unwrap();
        let pages = row.levelwise_cohomology(3);
        for s in 0..=3usize {
            for t in 0..=3usize {
                let want = if t <= s { binom(s, t) } else { 0 };
                assert_eq!(pages[s].dim(t), want, "stage {s} degree {t}");
            }
        }
    }

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn circle_e1_matches_the_bar_page() {
        let cmp = cobar_comparison(&s1(5), 4, 4).unwrap();
        assert!(cmp.dims_match, "dims: {:?}", cmp.dims);
        assert!(cmp.transports_invertible);
        assert!(cmp.d1_match);
    }

    #[test]
    fn torus_e1_matches_the_bar_page() {
        let t = product(&s1(4), &s1(4));
        let cmp = cobar_comparison(&t, 3, 3).unwrap();
        assert!(cmp.all_match(), "dims: {:?}", cmp.dims);
    }

    #[test]
    fn point_row_is_trivial() {
        let cmp = cobar_comparison(&point(3), 2, 2).unwrap();
        assert!(cmp.all_match());
        assert_eq!(cmp.dims[&(1, 0)], (1, 1));
        assert_eq!(cmp.dims[&(1, 1)], (0, 0));
    }
}

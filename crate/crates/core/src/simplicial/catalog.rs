//! Stock spaces and the combinators that assemble them.
//!
//! Every builder takes an explicit level cap and produces a space whose
//! tables are complete up to that cap. Quotients collapse a chosen
//! subcomplex to the basepoint; the smash is the product collapsed along
//! the two axes. Names follow a small grammar: `pt`, `S1`, `S(n)`,
//! `Delta(n)`, `prod(A,B)`, `smash(A,B)`.

use super::{FiniteSimplicialSet, SpaceError};

/// The one-point space: a single (degenerate) simplex at every level.
pub fn point(cap: usize) -> FiniteSimplicialSet {
    let cells = vec![1; cap + 1];
    let labels = (0..=cap).map(|_| vec!["*".to_string()]).collect();
    let mut faces = vec![Vec::new()];
    for n in 1..=cap {
        faces.push(vec![vec![0]; n + 1]);
    }
    let mut degens = Vec::new();
    for n in 0..cap {
        degens.push(vec![vec![0]; n + 1]);
    }
    degens.push(Vec::new());
    FiniteSimplicialSet::new("pt", cap, cells, labels, faces, degens, 0)
        .expect("point space is well formed")
}

/// Monotone words of length `len` over the alphabet 0..=top, ascending lex.
fn monotone_words(len: usize, top: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(out: &mut Vec<Vec<u8>>, cur: &mut Vec<u8>, len: usize, from: u8, top: u8) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in from..=top {
            cur.push(v);
            rec(out, cur, len, v, top);
            cur.pop();
        }
    }
    rec(&mut out, &mut cur, len, 0, top as u8);
    out
}

/// The standard n-simplex: level-k cells are the monotone words of
/// length k + 1 in the vertices 0..=n.
pub fn delta(n: usize, cap: usize) -> FiniteSimplicialSet {
    assert!(n <= 9, "vertex labels are single digits");
    let levels: Vec<Vec<Vec<u8>>> = (0..=cap).map(|k| monotone_words(k + 1, n)).collect();
    let cells: Vec<usize> = levels.iter().map(|l| l.len()).collect();
    let labels: Vec<Vec<String>> = levels
        .iter()
        .map(|l| {
            l.iter()
                .map(|w| w.iter().map(|v| (b'0' + v) as char).collect())
                .collect()
        })
        .collect();
    let index = |k: usize, w: &[u8]| -> usize {
        levels[k]
            .binary_search_by(|cand| cand.as_slice().cmp(w))
            .expect("word is in the level")
    };
    let mut faces = vec![Vec::new()];
    for k in 1..=cap {
        let mut per_i = Vec::with_capacity(k + 1);
        for i in 0..=k {
            per_i.push(
                levels[k]
                    .iter()
                    .map(|w| {
                        let mut v = w.clone();
                        v.remove(i);
                        index(k - 1, &v)
                    })
                    .collect(),
            );
        }
        faces.push(per_i);
    }
    let mut degens = Vec::new();
    for k in 0..cap {
        let mut per_i = Vec::with_capacity(k + 1);
        for i in 0..=k {
            per_i.push(
                levels[k]
                    .iter()
                    .map(|w| {
                        let mut v = w.clone();
                        v.insert(i, v[i]);
                        index(k + 1, &v)
                    })
                    .collect(),
            );
        }
        degens.push(per_i);
    }
    degens.push(Vec::new());
    FiniteSimplicialSet::new(format!("Delta({n})"), cap, cells, labels, faces, degens, 0)
        .expect("standard simplex is well formed")
}

/// Collapse a subcomplex to the basepoint. `selected[n][x]` flags the
/// simplices being identified; the set must contain the basepoint and be
/// closed under faces and degeneracies. The collapsed class sits at
/// index 0 of every level of the quotient.
pub fn collapse(
    x: &FiniteSimplicialSet,
    selected: &[Vec<bool>],
    name: impl Into<String>,
) -> Result<FiniteSimplicialSet, SpaceError> {
    let cap = x.level_cap();
    if selected.len() != cap + 1 || (0..=cap).any(|n| selected[n].len() != x.cells(n)) {
        return Err(SpaceError::Shape(selected.len()));
    }
    if !selected[0][x.basepoint()] {
        return Err(SpaceError::NotASubcomplex);
    }
    for n in 0..=cap {
        for c in 0..x.cells(n) {
            if !selected[n][c] {
                continue;
            }
            if n > 0 && (0..=n).any(|i| !selected[n - 1][x.face(n, i, c)]) {
                return Err(SpaceError::NotASubcomplex);
            }
            if n < cap && (0..=n).any(|i| !selected[n + 1][x.degen(n, i, c)]) {
                return Err(SpaceError::NotASubcomplex);
            }
        }
    }
    // old index -> new index; the collapsed class is 0
    let mut to_new: Vec<Vec<usize>> = Vec::with_capacity(cap + 1);
    let mut cells = Vec::with_capacity(cap + 1);
    let mut labels: Vec<Vec<String>> = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        let mut map = vec![0usize; x.cells(n)];
        let mut level_labels = vec!["*".to_string()];
        let mut next = 1usize;
        for c in 0..x.cells(n) {
            if !selected[n][c] {
                map[c] = next;
                level_labels.push(x.label(n, c).to_string());
                next += 1;
            }
        }
        to_new.push(map);
        cells.push(next);
        labels.push(level_labels);
    }
    // a preferred old representative per new cell
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        let mut level = vec![usize::MAX; cells[n]];
        for c in (0..x.cells(n)).rev() {
            level[to_new[n][c]] = c;
        }
        level[0] = x.basepoint_at(n);
        reps.push(level);
    }
    let mut faces = vec![Vec::new()];
    for n in 1..=cap {
        let mut per_i = Vec::with_capacity(n + 1);
        for i in 0..=n {
            per_i.push(
                (0..cells[n])
                    .map(|c| to_new[n - 1][x.face(n, i, reps[n][c])])
                    .collect(),
            );
        }
        faces.push(per_i);
    }
    let mut degens = Vec::new();
    for n in 0..cap {
        let mut per_i = Vec::with_capacity(n + 1);
        for i in 0..=n {
            per_i.push(
                (0..cells[n])
                    .map(|c| to_new[n + 1][x.degen(n, i, reps[n][c])])
                    .collect(),
            );
        }
        degens.push(per_i);
    }
    degens.push(Vec::new());
    FiniteSimplicialSet::new(name, cap, cells, labels, faces, degens, 0)
}

/// The circle as Δ¹ with both endpoints collapsed: one vertex, one edge.
pub fn s1(cap: usize) -> FiniteSimplicialSet {
    let d = delta(1, cap);
    let selected: Vec<Vec<bool>> = (0..=cap)
        .map(|n| {
            (0..d.cells(n))
                .map(|c| {
                    let l = d.label(n, c).as_bytes();
                    l.iter().all(|&b| b == l[0])
                })
                .collect()
        })
        .collect();
    collapse(&d, &selected, "S1").expect("endpoint pair is a subcomplex")
}

/// A levelwise product with row-major cell indexing, keeping the factor
/// strides so tuples can be encoded and decoded.
pub struct ProductSpace {
    pub space: FiniteSimplicialSet,
    counts: Vec<Vec<usize>>,
}

impl ProductSpace {
    pub fn encode(&self, n: usize, tuple: &[usize]) -> usize {
        let mut idx = 0usize;
        for (k, &t) in tuple.iter().enumerate() {
            idx = idx * self.counts[n][k] + t;
        }
        idx
    }

    pub fn decode(&self, n: usize, mut idx: usize) -> Vec<usize> {
        let m = self.counts[n].len();
        let mut tuple = vec![0usize; m];
        for k in (0..m).rev() {
            tuple[k] = idx % self.counts[n][k];
            idx /= self.counts[n][k];
        }
        tuple
    }

    pub fn arity(&self) -> usize {
        self.counts[0].len()
    }

    /// Projection onto factor `k` as a simplicial map.
    pub fn projection(&self, k: usize, target: &FiniteSimplicialSet) -> super::SimplicialMap {
        let cap = self.space.level_cap();
        let at: Vec<Vec<usize>> = (0..=cap)
            .map(|n| {
                (0..self.space.cells(n))
                    .map(|c| self.decode(n, c)[k])
                    .collect()
            })
            .collect();
        super::SimplicialMap::new(&self.space, target, at).expect("projection is simplicial")
    }
}

pub fn product_many(factors: &[&FiniteSimplicialSet], name: impl Into<String>) -> ProductSpace {
    assert!(!factors.is_empty());
    let cap = factors.iter().map(|f| f.level_cap()).min().unwrap();
    let counts: Vec<Vec<usize>> = (0..=cap)
        .map(|n| factors.iter().map(|f| f.cells(n)).collect())
        .collect();
    let cells: Vec<usize> = counts.iter().map(|c| c.iter().product()).collect();
    let decode = |n: usize, mut idx: usize| -> Vec<usize> {
        let m = counts[n].len();
        let mut t = vec![0usize; m];
        for k in (0..m).rev() {
            t[k] = idx % counts[n][k];
            idx /= counts[n][k];
        }
        t
    };
    let encode = |n: usize, tuple: &[usize]| -> usize {
        let mut idx = 0usize;
        for (k, &t) in tuple.iter().enumerate() {
            idx = idx * counts[n][k] + t;
        }
        idx
    };
    let labels: Vec<Vec<String>> = (0..=cap)
        .map(|n| {
            (0..cells[n])
                .map(|c| {
                    let t = decode(n, c);
                    let parts: Vec<&str> = t
                        .iter()
                        .enumerate()
                        .map(|(k, &x)| factors[k].label(n, x))
                        .collect();
                    format!("({})", parts.join(","))
                })
                .collect()
        })
        .collect();
    let mut faces = vec![Vec::new()];
    for n in 1..=cap {
        let mut per_i = Vec::with_capacity(n + 1);
        for i in 0..=n {
            per_i.push(
                (0..cells[n])
                    .map(|c| {
                        let t: Vec<usize> = decode(n, c)
                            .iter()
                            .enumerate()
                            .map(|(k, &x)| factors[k].face(n, i, x))
                            .collect();
                        encode(n - 1, &t)
                    })
                    .collect(),
            );
        }
        faces.push(per_i);
    }
    let mut degens = Vec::new();
    for n in 0..cap {
        let mut per_i = Vec::with_capacity(n + 1);
        for i in 0..=n {
            per_i.push(
                (0..cells[n])
                    .map(|c| {
                        let t: Vec<usize> = decode(n, c)
                            .iter()
                            .enumerate()
                            .map(|(k, &x)| factors[k].degen(n, i, x))
                            .collect();
                        encode(n + 1, &t)
                    })
                    .collect(),
            );
        }
        degens.push(per_i);
    }
    degens.push(Vec::new());
    let basepoint = encode(0, &factors.iter().map(|f| f.basepoint()).collect::<Vec<_>>());
    let space = FiniteSimplicialSet::new(name, cap, cells, labels, faces, degens, basepoint)
        .expect("product of well-formed spaces is well formed");
    ProductSpace { space, counts }
}

pub fn product(a: &FiniteSimplicialSet, b: &FiniteSimplicialSet) -> FiniteSimplicialSet {
    product_many(&[a, b], format!("prod({},{})", a.name(), b.name())).space
}

/// Smash product: collapse the two axes of the product.
pub fn smash(a: &FiniteSimplicialSet, b: &FiniteSimplicialSet) -> FiniteSimplicialSet {
    let p = product_many(&[a, b], "tmp");
    let cap = p.space.level_cap();
    let selected: Vec<Vec<bool>> = (0..=cap)
        .map(|n| {
            let pa = a.basepoint_at(n);
            let pb = b.basepoint_at(n);
            (0..p.space.cells(n))
                .map(|c| {
                    let t = p.decode(n, c);
                    t[0] == pa || t[1] == pb
                })
                .collect()
        })
        .collect();
    collapse(
        &p.space,
        &selected,
        format!("smash({},{})", a.name(), b.name()),
    )
    .expect("the wedge axes form a subcomplex")
}

/// Suspension as the smash with a circle.
pub fn suspension(x: &FiniteSimplicialSet) -> FiniteSimplicialSet {
    smash(&s1(x.level_cap()), x).rename(format!("susp({})", x.name()))
}

/// The n-skeleton: every simplex whose nondegenerate core has dimension
/// at most n. Closed under faces and degeneracies, so it is again a
/// simplicial set; the inclusion is a cohomology isomorphism below n.
pub fn skeleton(x: &FiniteSimplicialSet, n: usize) -> FiniteSimplicialSet {
    let cap = x.level_cap();
    // core dimension per cell, level by level: a degenerate cell inherits
    // the core of any de-degeneracy (unique by the Eilenberg–Zilber lemma)
    let mut core: Vec<Vec<usize>> = vec![(0..x.cells(0)).map(|_| 0).collect()];
    for m in 1..=cap {
        let mut level = vec![usize::MAX; x.cells(m)];
        for c in 0..x.cells(m) {
            if !x.is_degenerate(m, c) {
                level[c] = m;
            }
        }
        for i in 0..m {
            for y in 0..x.cells(m - 1) {
                let im = x.degen(m - 1, i, y);
                if level[im] == usize::MAX {
                    level[im] = core[m - 1][y];
                }
            }
        }
        core.push(level);
    }
    let mut to_new: Vec<Vec<usize>> = Vec::with_capacity(cap + 1);
    let mut old_of: Vec<Vec<usize>> = Vec::with_capacity(cap + 1);
    let mut cells = Vec::with_capacity(cap + 1);
    let mut labels: Vec<Vec<String>> = Vec::with_capacity(cap + 1);
    for m in 0..=cap {
        let mut map = vec![usize::MAX; x.cells(m)];
        let mut olds = Vec::new();
        let mut lv = Vec::new();
        for c in 0..x.cells(m) {
            if core[m][c] <= n {
                map[c] = olds.len();
                olds.push(c);
                lv.push(x.label(m, c).to_string());
            }
        }
        to_new.push(map);
        cells.push(olds.len());
        old_of.push(olds);
        labels.push(lv);
    }
    let mut faces = vec![Vec::new()];
    for m in 1..=cap {
        let mut per_i = Vec::with_capacity(m + 1);
        for i in 0..=m {
            per_i.push(
                old_of[m]
                    .iter()
                    .map(|&c| to_new[m - 1][x.face(m, i, c)])
                    .collect(),
            );
        }
        faces.push(per_i);
    }
    let mut degens = Vec::new();
    for m in 0..cap {
        let mut per_i = Vec::with_capacity(m + 1);
        for i in 0..=m {
            per_i.push(
                old_of[m]
                    .iter()
                    .map(|&c| to_new[m + 1][x.degen(m, i, c)])
                    .collect(),
            );
        }
        degens.push(per_i);
    }
    degens.push(Vec::new());
    FiniteSimplicialSet::new(
        format!("sk{n}({})", x.name()),
        cap,
        cells,
        labels,
        faces,
        degens,
        to_new[0][x.basepoint()],
    )
    .expect("skeleton is a simplicial subset")
}

/// The n-sphere as an iterated smash of circles.
pub fn sphere(n: usize, cap: usize) -> FiniteSimplicialSet {
    assert!(n >= 1);
    let mut s = s1(cap);
    for _ in 1..n {
        s = smash(&s1(cap), &s);
    }
    s.rename(format!("S({n})"))
}

fn split_args(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1)?,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

/// Build a space from its name. Grammar: `pt`, `S1`, `S(n)`, `Delta(n)`,
/// `prod(A,B)`, `smash(A,B)`.
pub fn make_space(name: &str, cap: usize) -> Result<FiniteSimplicialSet, SpaceError> {
    let name = name.trim();
    let bad = || SpaceError::Invalid(format!("unknown space name `{name}`"));
    match name {
        "pt" => return Ok(point(cap)),
        "S1" => return Ok(s1(cap)),
        _ => {}
    }
    let (head, inner) = name
        .split_once('(')
        .and_then(|(h, rest)| rest.strip_suffix(')').map(|i| (h, i)))
        .ok_or_else(bad)?;
    match head {
        "S" => {
            let n: usize = inner.parse().map_err(|_| bad())?;
            if n == 0 || n > 4 {
                return Err(SpaceError::Invalid(format!(
                    "sphere dimension {n} out of the supported range 1..=4"
                )));
            }
            Ok(sphere(n, cap))
        }
        "Delta" => {
            let n: usize = inner.parse().map_err(|_| bad())?;
            if n > 6 {
                return Err(SpaceError::Invalid(
                    "simplex dimension out of the supported range 0..=6".into(),
                ));
            }
            Ok(delta(n, cap))
        }
        "prod" | "smash" => {
            let (l, r) = split_args(inner).ok_or_else(bad)?;
            let a = make_space(l, cap)?;
            let b = make_space(r, cap)?;
            Ok(match head {
                "prod" => product(&a, &b),
                _ => smash(&a, &b),
            })
        }
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_cell_counts() {
        let t = product(&s1(3), &s1(3));
        for k in 0..=3usize {
            assert_eq!(t.cells(k), (k + 1) * (k + 1));
        }
        // nondegenerate: 1 vertex, 3 edges (two axes and the diagonal),
        // 2 shuffle triangles; Euler characteristic 1 - 3 + 2 = 0
        assert_eq!(t.nondegenerate(0).len(), 1);
        assert_eq!(t.nondegenerate(1).len(), 3);
        assert_eq!(t.nondegenerate(2).len(), 2);
        assert_eq!(t.nondegenerate(3).len(), 0);
    }

    #[test]
    fn smash_of_circles_is_small() {
        let s2 = smash(&s1(4), &s1(4));
        // one vertex; only the diagonal edge survives the collapse;
        // two nondegenerate 2-cells (Euler characteristic 1 - 1 + 2 = 2)
        assert_eq!(s2.cells(0), 1);
        assert_eq!(s2.nondegenerate(1).len(), 1);
        assert_eq!(s2.nondegenerate(2).len(), 2);
        assert_eq!(s2.nondegenerate(3).len(), 0);
    }

    #[test]
    fn skeleton_keeps_low_cores_only() {
        let t = product(&s1(4), &s1(4));
        let sk1 = skeleton(&t, 1);
        assert_eq!(sk1.nondegenerate(0).len(), 1);
        assert_eq!(sk1.nondegenerate(1).len(), 3);
        assert_eq!(sk1.nondegenerate(2).len(), 0);
        // a cut at the cap keeps everything
        let sk4 = skeleton(&t, 4);
        for m in 0..=4 {
            assert_eq!(sk4.cells(m), t.cells(m));
        }
    }

    #[test]
    fn names_build() {
        for name in ["pt", "S1", "S(2)", "Delta(2)", "prod(S1,S1)", "smash(S1,S1)"] {
            let x = make_space(name, 3).unwrap();
            assert!(x.cells(0) >= 1, "{name}");
        }
        assert!(make_space("cone(S1)", 3).is_err());
        assert!(make_space("S(9)", 3).is_err());
    }

    #[test]
    fn projections_are_simplicial() {
        let a = s1(3);
        let b = delta(1, 3);
        let p = product_many(&[&a, &b], "p");
        let pr0 = p.projection(0, &a);
        let pr1 = p.projection(1, &b);
        let c = p.space.cells(2) - 1;
        let t = p.decode(2, c);
        assert_eq!(pr0.apply(2, c), t[0]);
        assert_eq!(pr1.apply(2, c), t[1]);
    }
}

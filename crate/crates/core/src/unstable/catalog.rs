//! Stock modules, and a name grammar for reaching them from the command
//! line: `F(2)@12`, `H@16`, `SigmaF1(3)@16`, `Tensor(F1,F1)@16`,
//! `Sigma(F1,2)@16`. The `@D` suffix fixes the bound of the whole
//! expression (suspensions build their interior at `D − d`).

use std::collections::{BTreeMap, BTreeSet};

use crate::f2::F2Matrix;
use crate::steenrod::{adem_reduce, admissible_basis_excess_at_most, binom_mod2, SqWord};

use super::{BoundedUnstableModule, UnstableError};

/// The polynomial ring F₂[u] with |u| = 1 and the total squaring rule
/// Sq^k u^j = C(j,k) u^{j+k}.
pub fn h_ring(bound: usize) -> BoundedUnstableModule {
    let dims = vec![1; bound + 1];
    let labels: Vec<Vec<String>> = (0..=bound)
        .map(|j| {
            vec![match j {
                0 => "1".into(),
                1 => "u".into(),
                _ => format!("u^{}", j),
            }]
        })
        .collect();
    let mut sq = BTreeMap::new();
    let mut vanishing = BTreeSet::new();
    for j in 0..=bound {
        for k in 1..=j {
            let odd = binom_mod2(j as i64, k as i64);
            if j + k <= bound {
                if odd {
                    sq.insert((k, j), F2Matrix::from_bit_rows(&[&[1]], 1));
                }
            } else if !odd {
                vanishing.insert((k, j));
            }
        }
    }
    BoundedUnstableModule::new("H", bound, dims, labels, sq, vanishing)
        .expect("the squaring rule on F2[u] satisfies the axioms")
}

/// The cyclic module generated by u inside [`h_ring`]: one basis vector in
/// each power-of-two degree, connected by Sq^{2^i} u^{2^i} = u^{2^{i+1}}.
pub fn f1(bound: usize) -> BoundedUnstableModule {
    let mut dims = vec![0; bound + 1];
    let mut labels = vec![Vec::new(); bound + 1];
    let mut j = 1;
    while j <= bound {
        dims[j] = 1;
        labels[j] = vec![if j == 1 { "u".into() } else { format!("u^{}", j) }];
        j *= 2;
    }
    let mut sq = BTreeMap::new();
    let mut vanishing = BTreeSet::new();
    let mut j = 1;
    while j <= bound {
        // Sq^k u^j: nonzero only for k ∈ {0, j} (Lucas on C(j,k), j a power
        // of two)
        for k in 1..=j {
            if k == j {
                if 2 * j <= bound {
                    sq.insert((k, j), F2Matrix::from_bit_rows(&[&[1]], 1));
                } // else: genuinely nonzero beyond the bound — not vanishing
            } else if j + k > bound {
                vanishing.insert((k, j));
            }
        }
        j *= 2;
    }
    BoundedUnstableModule::new("F1", bound, dims, labels, sq, vanishing)
        .expect("the power-of-two tower satisfies the axioms")
}

/// The d-fold suspension of the trivial one-dimensional module: a single
/// class in degree d killed by every positive operation.
pub fn sigma_f2(d: usize, bound: usize) -> BoundedUnstableModule {
    assert!(d <= bound, "SigmaF2({d}) needs bound ≥ {d}");
    let mut dims = vec![0; bound + 1];
    dims[d] = 1;
    let mut labels = vec![Vec::new(); bound + 1];
    labels[d] = vec![if d == 0 { "1".into() } else { format!("s{}(1)", d) }];
    let mut vanishing = BTreeSet::new();
    for k in 1..=d {
        if d + k > bound {
            vanishing.insert((k, d));
        }
    }
    let name = if d == 0 { "F2".into() } else { format!("SigmaF2({d})") };
    BoundedUnstableModule::new(name, bound, dims, labels, BTreeMap::new(), vanishing)
        .expect("a single killed class satisfies the axioms")
}

/// Σ^d applied to [`f1`], truncated so the whole module lives below `bound`.
pub fn sigma_f1(d: usize, bound: usize) -> BoundedUnstableModule {
    assert!(d < bound, "SigmaF1({d}) needs bound > {d}");
    f1(bound - d).suspend(d).rename(format!("SigmaF1({d})"))
}

/// The free unstable module on one generator of degree n: its basis in
/// degree n+e is the admissible monomials of degree e and excess ≤ n, and
/// the action is Adem reduction followed by discarding excess-overflow
/// terms.
pub fn f_n(n: usize, bound: usize) -> BoundedUnstableModule {
    assert!(n <= bound, "F({n}) needs bound ≥ {n}");
    let gen_label = format!("i{}", n);
    let mut dims = vec![0; bound + 1];
    let mut labels = vec![Vec::new(); bound + 1];
    let mut bases = Vec::new();
    for d in 0..=bound {
        let basis = if d < n {
            Vec::new()
        } else {
            admissible_basis_excess_at_most((d - n) as u32, n as u32)
        };
        dims[d] = basis.len();
        labels[d] = basis
            .iter()
            .map(|m| {
                if m.exponents().is_empty() {
                    gen_label.clone()
                } else {
                    format!("{} {}", m, gen_label)
                }
            })
            .collect();
        bases.push(basis);
    }
    let act = |k: usize, d: usize, out_deg: usize, bases: &[Vec<crate::steenrod::AdmissibleMonomial>]| {
        // rows of Sq^k on degree d; None marks a nonzero out-of-bound result
        let mut rows = Vec::new();
        let out = bases.get(out_deg);
        for m in &bases[d] {
            let mut word = vec![k as u32];
            word.extend_from_slice(m.exponents());
            let reduced = adem_reduce(&SqWord::new(word));
            let kept: Vec<_> = reduced
                .terms()
                .iter()
                .filter(|t| t.excess() <= n as u32)
                .collect();
            match out {
                Some(basis) => {
                    let mut row = crate::f2::F2Vector::zero(basis.len());
                    for t in kept {
                        let pos = basis.binary_search(t).expect("kept terms lie in the basis");
                        row.set(pos, !row.get(pos));
                    }
                    rows.push(Some(row));
                }
                None => rows.push(if kept.is_empty() { Some(crate::f2::F2Vector::zero(0)) } else { None }),
            }
        }
        rows
    };
    let mut sq = BTreeMap::new();
    let mut vanishing = BTreeSet::new();
    for d in n..=bound {
        if dims[d] == 0 {
            continue;
        }
        for k in 1..=d {
            let rows = act(k, d, d + k, &bases);
            if d + k <= bound {
                let m = F2Matrix::from_rows(
                    rows.into_iter().map(|r| r.expect("in-bound")).collect(),
                    dims[d + k],
                );
                if !m.is_zero() {
                    sq.insert((k, d), m);
                }
            } else if rows.iter().all(|r| r.is_some()) {
                vanishing.insert((k, d));
            }
        }
    }
    BoundedUnstableModule::new(format!("F({n})"), bound, dims, labels, sq, vanishing)
        .expect("the free unstable module satisfies the axioms")
}

/// Split `args` on top-level commas (commas nested in parentheses stay put).
fn split_args(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}

fn build(name: &str, bound: usize) -> Result<BoundedUnstableModule, UnstableError> {
    let bad = |msg: String| UnstableError::InvalidParameter(msg);
    let name = name.trim();
    if let Some(rest) = name.strip_prefix("Sigma(").and_then(|r| r.strip_suffix(')')) {
        let args = split_args(rest);
        if args.len() != 2 {
            return Err(bad(format!("Sigma wants (module, d): {name}")));
        }
        let d: usize = args[1].parse().map_err(|_| bad(format!("bad shift: {}", args[1])))?;
        if d >= bound {
            return Err(bad(format!("shift {d} leaves no room below bound {bound}")));
        }
        return Ok(build(args[0], bound - d)?.suspend(d));
    }
    if let Some(rest) = name.strip_prefix("Tensor(").and_then(|r| r.strip_suffix(')')) {
        let args = split_args(rest);
        if args.len() != 2 {
            return Err(bad(format!("Tensor wants (module, module): {name}")));
        }
        return Ok(build(args[0], bound)?.tensor(&build(args[1], bound)?));
    }
    if let Some(rest) = name.strip_prefix("Sum(").and_then(|r| r.strip_suffix(')')) {
        let args = split_args(rest);
        if args.len() != 2 {
            return Err(bad(format!("Sum wants (module, module): {name}")));
        }
        return Ok(build(args[0], bound)?.direct_sum(&build(args[1], bound)?));
    }
    let unary = |rest: &str, what: &str| -> Result<usize, UnstableError> {
        rest.parse()
            .map_err(|_| bad(format!("bad {what} in {name}")))
    };
    if let Some(rest) = name.strip_prefix("SigmaF1(").and_then(|r| r.strip_suffix(')')) {
        let d = unary(rest, "shift")?;
        if d >= bound {
            return Err(bad(format!("shift {d} leaves no room below bound {bound}")));
        }
        return Ok(sigma_f1(d, bound));
    }
    if let Some(rest) = name.strip_prefix("SigmaF2(").and_then(|r| r.strip_suffix(')')) {
        let d = unary(rest, "shift")?;
        if d > bound {
            return Err(bad(format!("degree {d} exceeds bound {bound}")));
        }
        return Ok(sigma_f2(d, bound));
    }
    if let Some(rest) = name.strip_prefix("F(").and_then(|r| r.strip_suffix(')')) {
        let n = unary(rest, "generator degree")?;
        if n > bound {
            return Err(bad(format!("generator degree {n} exceeds bound {bound}")));
        }
        return Ok(f_n(n, bound));
    }
    match name {
        "H" => Ok(h_ring(bound)),
        "F1" => Ok(f1(bound)),
        "F2" => Ok(sigma_f2(0, bound)),
        _ => Err(bad(format!("unknown module name: {name}"))),
    }
}

/// Resolve a catalog name like `"F(2)@12"` or `"Tensor(F1,SigmaF2(2))@16"`.
/// A missing `@D` suffix falls back to `default_bound`.
pub fn make_catalog(name: &str, default_bound: usize) -> Result<BoundedUnstableModule, UnstableError> {
    let (body, bound) = match name.rsplit_once('@') {
        Some((body, d)) => (
            body,
            d.trim().parse::<usize>().map_err(|_| {
                UnstableError::InvalidParameter(format!("bad bound suffix in {name}"))
            })?,
        ),
        None => (name, default_bound),
    };
    Ok(build(body, bound)?.rename(name.trim()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_module_on_degree_two() {
        // F(2) through degree 6: one basis element in each degree 2..6
        // (i, Sq¹i, Sq²i, Sq³i ~ Sq²Sq¹i, Sq⁴Sq... — excess caps at 2)
        let m = f_n(2, 6);
        assert_eq!(m.dims(), &[0, 0, 1, 1, 1, 1, 1]);
        // Sq¹ Sq¹ = 0
        let x = m.sq(1, &m.basis_element(2, 0)).unwrap();
        assert!(m.sq(1, &x).unwrap().is_zero());
        // Sq² Sq¹ i is the degree-5 basis vector, and Sq¹ of degree 4 is
        // Sq³i + ... let the Adem checker vouch; spot-check nonzero:
        assert!(!m.sq(2, &x).unwrap().is_zero());
    }

    #[test]
    fn f1_equals_free_on_one() {
        let a = f1(16);
        let b = f_n(1, 16);
        assert_eq!(a.dims(), b.dims());
        for j in [1usize, 2, 4, 8] {
            for k in 1..=j {
                if j + k <= 16 {
                    assert_eq!(a.sq_matrix(k, j), b.sq_matrix(k, j), "Sq^{k} on {j}");
                }
                assert_eq!(a.knows_zero(k, j), b.knows_zero(k, j), "zero knowledge ({k},{j})");
            }
        }
    }

    #[test]
    fn h_vanishing_horizon() {
        let h = h_ring(16);
        // Sq¹ u¹⁶ = C(16,1) u¹⁷ = 0: recorded
        assert!(h.knows_zero(1, 16));
        // Sq¹⁶ u¹⁶ = u³²: not zero, not recorded
        assert!(!h.knows_zero(16, 16));
    }

    #[test]
    fn names_round_trip() {
        for name in [
            "H@8",
            "F1@16",
            "F(2)@12",
            "SigmaF1(3)@16",
            "SigmaF2(4)@12",
            "Sigma(F1,2)@16",
            "Tensor(F1,F1)@12",
            "Sum(F2,SigmaF2(2))@8",
            "Tensor(SigmaF1(1),Sigma(H,1))@10",
        ] {
            let m = make_catalog(name, 16).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(m.name(), name);
        }
        assert!(make_catalog("Nope@8", 16).is_err());
        assert!(make_catalog("SigmaF1(16)@16", 16).is_err());
    }

    #[test]
    fn sigma_f1_matches_spec_example() {
        // σ²u lives in degree 3, the tower continues σ²u², σ²u⁴, σ²u⁸
        let m = sigma_f1(2, 16);
        let support: Vec<usize> = (0..=16).filter(|&d| m.dim(d) > 0).collect();
        assert_eq!(support, vec![3, 4, 6, 10]);
    }

    #[test]
    fn default_bound_applies() {
        let m = make_catalog("H", 6).unwrap();
        assert_eq!(m.bound(), 6);
    }
}

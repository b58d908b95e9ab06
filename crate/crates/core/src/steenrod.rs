//! The mod-2 Steenrod algebra in the admissible basis.
//!
//! Words in the generators `Sq^k` (k ≥ 1) are reduced by the Adem relation:
//! for a < 2b,
//!
//! ```text
//! Sq^a Sq^b  =  Σ_{c=0}^{⌊a/2⌋}  binom(b−c−1, a−2c)  Sq^{a+b−c} Sq^c     (mod 2)
//! ```
//!
//! with the c = 0 term read as the single square `Sq^{a+b}`. A word
//! `Sq^{i₁}…Sq^{i_k}` is *admissible* when iⱼ ≥ 2·iⱼ₊₁ for every j; the
//! admissible monomials form a basis of the algebra. Rewriting always
//! terminates: replacing the pair (a, b) by (a+b−c, c) strictly decreases the
//! moment Σ j·iⱼ, since c < b.
//!
//! Binomial parity is evaluated by Lucas' theorem: binom(m, n) is odd exactly
//! when n is a bitwise submask of m.

use std::collections::BTreeSet;
use std::fmt;

use crate::f2::{F2Matrix, F2Vector};

/// binom(m, n) mod 2 via Lucas. Out-of-range pairs give 0.
pub fn binom_mod2(m: i64, n: i64) -> bool {
    if n < 0 || m < 0 || n > m {
        return false;
    }
    (n & !m) == 0
}

/// A word in the generators: a finite sequence of strictly positive
/// exponents, not necessarily admissible. The empty word is the unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SqWord(Vec<u32>);

impl SqWord {
    pub fn new(exponents: Vec<u32>) -> Self {
        assert!(exponents.iter().all(|&e| e > 0), "exponents must be positive");
        SqWord(exponents)
    }

    pub fn unit() -> Self {
        SqWord(Vec::new())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_admissible(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= 2 * w[1])
    }
}

/// An admissible word, kept as the canonical basis representation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AdmissibleMonomial(Vec<u32>);

impl AdmissibleMonomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        let w = SqWord::new(exponents.clone());
        assert!(w.is_admissible(), "not admissible: {:?}", exponents);
        AdmissibleMonomial(exponents)
    }

    pub fn unit() -> Self {
        AdmissibleMonomial(Vec::new())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn word(&self) -> SqWord {
        SqWord(self.0.clone())
    }

    /// Excess i₁ − (i₂ + … + i_k); the unit has excess 0.
    pub fn excess(&self) -> u32 {
        match self.0.split_first() {
            None => 0,
            Some((&i1, rest)) => i1 - rest.iter().sum::<u32>(),
        }
    }
}

/// A sum of admissible monomials of a common degree, i.e. a homogeneous
/// element of the Steenrod algebra in its canonical form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SteenrodElement {
    degree: u32,
    terms: BTreeSet<AdmissibleMonomial>,
}

impl SteenrodElement {
    pub fn zero(degree: u32) -> Self {
        SteenrodElement {
            degree,
            terms: BTreeSet::new(),
        }
    }

    pub fn unit() -> Self {
        Self::from_monomial(AdmissibleMonomial::unit())
    }

    pub fn from_monomial(m: AdmissibleMonomial) -> Self {
        SteenrodElement {
            degree: m.degree(),
            terms: [m].into(),
        }
    }

    pub fn from_terms(degree: u32, terms: BTreeSet<AdmissibleMonomial>) -> Self {
        assert!(terms.iter().all(|m| m.degree() == degree));
        SteenrodElement { degree, terms }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeSet<AdmissibleMonomial> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_assign(&mut self, other: &SteenrodElement) {
        assert_eq!(self.degree, other.degree);
        for t in &other.terms {
            toggle(&mut self.terms, t.clone());
        }
    }

    /// Coordinates with respect to an ordered list of admissible monomials.
    pub fn coordinates(&self, basis: &[AdmissibleMonomial]) -> F2Vector {
        let mut v = F2Vector::zero(basis.len());
        for t in &self.terms {
            let i = basis
                .iter()
                .position(|b| b == t)
                .expect("monomial outside the given basis");
            v.set(i, true);
        }
        v
    }
}

fn toggle<T: Ord>(set: &mut BTreeSet<T>, item: T) {
    if !set.remove(&item) {
        set.insert(item);
    }
}

/// Where to attack inadmissible pairs during rewriting. Both strategies
/// reach the same normal form; having both on hand makes order-independence
/// testable.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RewriteStrategy {
    LeftmostFirst,
    RightmostFirst,
}

/// Expansion of a single inadmissible pair (a, b), a < 2b, into the Adem
/// right-hand side, as raw words.
fn adem_pair(a: u32, b: u32) -> Vec<Vec<u32>> {
    debug_assert!(a < 2 * b);
    let mut out = Vec::new();
    for c in 0..=(a / 2) {
        if binom_mod2(b as i64 - c as i64 - 1, a as i64 - 2 * c as i64) {
            if c == 0 {
                out.push(vec![a + b]);
            } else {
                out.push(vec![a + b - c, c]);
            }
        }
    }
    out
}

fn find_inadmissible(word: &[u32], strategy: RewriteStrategy) -> Option<usize> {
    let positions = 0..word.len().saturating_sub(1);
    let hit = |j: &usize| word[*j] < 2 * word[*j + 1];
    match strategy {
        RewriteStrategy::LeftmostFirst => positions.clone().find(hit),
        RewriteStrategy::RightmostFirst => positions.rev().find(hit),
    }
}

/// Rewrite a word into the admissible basis with a chosen strategy.
pub fn adem_reduce_with(word: &SqWord, strategy: RewriteStrategy) -> SteenrodElement {
    let degree = word.degree();
    let mut pending: BTreeSet<Vec<u32>> = BTreeSet::new();
    pending.insert(word.exponents().to_vec());
    let mut done: BTreeSet<AdmissibleMonomial> = BTreeSet::new();
    while let Some(w) = pending.pop_first() {
        match find_inadmissible(&w, strategy) {
            None => toggle(&mut done, AdmissibleMonomial(w)),
            Some(j) => {
                for repl in adem_pair(w[j], w[j + 1]) {
                    let mut nw = Vec::with_capacity(w.len() + repl.len() - 2);
                    nw.extend_from_slice(&w[..j]);
                    nw.extend_from_slice(&repl);
                    nw.extend_from_slice(&w[j + 2..]);
                    toggle(&mut pending, nw);
                }
            }
        }
    }
    SteenrodElement {
        degree,
        terms: done,
    }
}

/// Rewrite a word into the admissible basis (leftmost inadmissible pair
/// first). The result is a sum of admissible monomials of the same degree.
pub fn adem_reduce(word: &SqWord) -> SteenrodElement {
    adem_reduce_with(word, RewriteStrategy::LeftmostFirst)
}

/// Product of two elements, computed by concatenating words and reducing.
pub fn multiply(x: &SteenrodElement, y: &SteenrodElement) -> SteenrodElement {
    let mut out = SteenrodElement::zero(x.degree + y.degree);
    for a in &x.terms {
        for b in &y.terms {
            let mut w = a.0.clone();
            w.extend_from_slice(&b.0);
            out.add_assign(&adem_reduce(&SqWord(w)));
        }
    }
    out
}

/// All admissible monomials of the given degree whose leading exponent is at
/// most `max_first`, in lexicographic order.
fn admissibles_bounded(degree: u32, max_first: u32) -> Vec<AdmissibleMonomial> {
    if degree == 0 {
        return vec![AdmissibleMonomial::unit()];
    }
    let mut out = Vec::new();
    let lo = degree.div_ceil(2).max(1);
    for i1 in lo..=degree.min(max_first) {
        // tail must be admissible of degree d−i1 with leading exponent ≤ i1/2
        for tail in admissibles_bounded(degree - i1, i1 / 2) {
            let mut w = vec![i1];
            w.extend_from_slice(tail.exponents());
            out.push(AdmissibleMonomial(w));
        }
    }
    out
}

/// The admissible monomials of a given degree, sorted lexicographically on
/// exponent sequences.
pub fn admissible_basis(degree: u32) -> Vec<AdmissibleMonomial> {
    let mut v = admissibles_bounded(degree, degree);
    v.sort();
    v
}

/// Admissible monomials of the given degree with excess at most `max_excess`.
pub fn admissible_basis_excess_at_most(degree: u32, max_excess: u32) -> Vec<AdmissibleMonomial> {
    admissible_basis(degree)
        .into_iter()
        .filter(|m| m.excess() <= max_excess)
        .collect()
}

/// Specification of the finite subalgebra generated by Sq^1, Sq^2, …,
/// Sq^{2^{n−1}}. Only n ≥ 1 denotes a subalgebra here; there is no n = 0
/// variant.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SubalgebraSpec {
    n: u32,
}

impl SubalgebraSpec {
    pub fn new(n: u32) -> Result<Self, SteenrodError> {
        if n == 0 {
            return Err(SteenrodError::InvalidSubalgebra);
        }
        Ok(SubalgebraSpec { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn generators(&self) -> Vec<u32> {
        (0..self.n).map(|i| 1 << i).collect()
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum SteenrodError {
    #[error("the subalgebra family starts at n = 1; n = 0 names nothing here")]
    InvalidSubalgebra,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Basis of the degree-d part of the subalgebra generated by
/// {Sq^{2^i} : 0 ≤ i < n}: every word in the generators of total degree d is
/// reduced, and a maximal independent family is kept (first-seen order over
/// the lexicographic enumeration of generator words, so the output is
/// deterministic).
pub fn an_basis(spec: SubalgebraSpec, degree: u32) -> Vec<SteenrodElement> {
    if degree == 0 {
        return vec![SteenrodElement::unit()];
    }
    let gens = spec.generators();
    let ambient = admissible_basis(degree);
    let mut words: Vec<Vec<u32>> = Vec::new();
    let mut stack: Vec<Vec<u32>> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        let used: u32 = prefix.iter().sum();
        if used == degree {
            words.push(prefix);
            continue;
        }
        // push in reverse so smaller generators are explored first
        for &g in gens.iter().rev() {
            if used + g <= degree {
                let mut nw = prefix.clone();
                nw.push(g);
                stack.push(nw);
            }
        }
    }
    words.sort();
    let mut picked: Vec<SteenrodElement> = Vec::new();
    let mut echelon: Vec<F2Vector> = Vec::new();
    for w in words {
        let elt = adem_reduce(&SqWord(w));
        if elt.is_zero() {
            continue;
        }
        let mut v = elt.coordinates(&ambient);
        for e in &echelon {
            let lead = e.leading().unwrap();
            if v.get(lead) {
                v.xor_assign(e);
            }
        }
        if !v.is_zero() {
            echelon.push(v);
            picked.push(elt);
        }
    }
    picked
}

/// Outcome of the decomposition search for Sq^{2^n}Sq^{2^n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    /// Sq^{2^n}Sq^{2^n} = Σ θᵢ · Sq^{2^n} · θ′ᵢ with θᵢ, θ′ᵢ of positive
    /// degree in the subalgebra generated by Sq^1, …, Sq^{2^{n−1}}.
    Witness {
        triples: Vec<(SteenrodElement, SteenrodElement, SteenrodElement)>,
    },
    NotFound,
}

/// Search for a decomposition of Sq^{2^n}Sq^{2^n} as a sum of products
/// θ · Sq^{2^n} · θ′ with θ, θ′ positive-degree elements of the subalgebra
/// generated by Sq^1, …, Sq^{2^{n−1}}.
///
/// Degrees are forced: the target has degree 2^{n+1} and the middle factor
/// degree 2^n, so deg θ + deg θ′ = 2^n with both summands ≥ 1. The search
/// solves one F₂ linear system over all candidate triples. `search_bound`
/// caps the total degree examined; if 2^{n+1} exceeds it the search space is
/// empty and `NotFound` is returned.
pub fn decompose_sq2n_sq2n(n: u32, search_bound: u32) -> Result<Decomposition, SteenrodError> {
    let spec = SubalgebraSpec::new(n)?;
    let mid_deg = 1u32 << n;
    let total = 2 * mid_deg;
    if total > search_bound {
        return Ok(Decomposition::NotFound);
    }
    let mid = SteenrodElement::from_monomial(AdmissibleMonomial::new(vec![mid_deg]));
    let target = multiply(&mid, &mid);
    let ambient = admissible_basis(total);

    let mut triples: Vec<(SteenrodElement, SteenrodElement, SteenrodElement)> = Vec::new();
    let mut rows: Vec<F2Vector> = Vec::new();
    for d1 in 1..mid_deg {
        let d2 = mid_deg - d1;
        for theta in an_basis(spec, d1) {
            for theta2 in an_basis(spec, d2) {
                let prod = multiply(&multiply(&theta, &mid), &theta2);
                rows.push(prod.coordinates(&ambient));
                triples.push((theta.clone(), mid.clone(), theta2));
            }
        }
    }
    if rows.is_empty() {
        return Ok(Decomposition::NotFound);
    }
    let m = F2Matrix::from_rows(rows, ambient.len());
    match m.solve_left(&target.coordinates(&ambient)) {
        None => Ok(Decomposition::NotFound),
        Some(x) => {
            let chosen = x
                .ones()
                .into_iter()
                .map(|i| triples[i].clone())
                .collect();
            Ok(Decomposition::Witness { triples: chosen })
        }
    }
}

// ---------------------------------------------------------------------------
// text form: words are "Sq<k>" tokens separated by whitespace, the unit is
// "1", elements join words with " + ", and the zero element prints as "0".
// ---------------------------------------------------------------------------

fn fmt_exponents(exps: &[u32], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if exps.is_empty() {
        return write!(f, "1");
    }
    let parts: Vec<String> = exps.iter().map(|e| format!("Sq{}", e)).collect();
    write!(f, "{}", parts.join(" "))
}

impl fmt::Display for AdmissibleMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_exponents(&self.0, f)
    }
}

impl fmt::Display for SqWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_exponents(&self.0, f)
    }
}

impl fmt::Display for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Parse a word: whitespace-separated `Sq<k>` tokens, or `1` for the unit.
pub fn parse_word(input: &str) -> Result<SqWord, SteenrodError> {
    let trimmed = input.trim();
    if trimmed == "1" {
        return Ok(SqWord::unit());
    }
    let mut exps = Vec::new();
    for tok in trimmed.split_whitespace() {
        let rest = tok
            .strip_prefix("Sq")
            .ok_or_else(|| SteenrodError::Parse(format!("expected Sq<k>, got {:?}", tok)))?;
        let k: u32 = rest
            .parse()
            .map_err(|_| SteenrodError::Parse(format!("bad exponent in {:?}", tok)))?;
        if k == 0 {
            return Err(SteenrodError::Parse(
                "Sq0 is the unit; write 1 instead".into(),
            ));
        }
        exps.push(k);
    }
    if exps.is_empty() {
        return Err(SteenrodError::Parse("empty word".into()));
    }
    Ok(SqWord::new(exps))
}

/// Parse an element: `+`-separated words, or `0`.
pub fn parse_element(input: &str) -> Result<SteenrodElement, SteenrodError> {
    let trimmed = input.trim();
    if trimmed == "0" {
        return Ok(SteenrodElement::zero(0));
    }
    let mut acc: Option<SteenrodElement> = None;
    for part in trimmed.split('+') {
        let reduced = adem_reduce(&parse_word(part)?);
        acc = Some(match acc {
            None => reduced,
            Some(mut a) => {
                if a.degree() != reduced.degree() {
                    return Err(SteenrodError::Parse(
                        "mixed degrees in one element".into(),
                    ));
                }
                a.add_assign(&reduced);
                a
            }
        });
    }
    acc.ok_or_else(|| SteenrodError::Parse("empty element".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reduce(exps: &[u32]) -> String {
        adem_reduce(&SqWord::new(exps.to_vec())).to_string()
    }

    #[test]
    fn adem_small_relations() {
        assert_eq!(reduce(&[1, 1]), "0");
        assert_eq!(reduce(&[2, 2]), "Sq3 Sq1");
        assert_eq!(reduce(&[1, 2]), "Sq3");
        assert_eq!(reduce(&[3, 2]), "0");
        assert_eq!(reduce(&[2, 3]), "Sq4 Sq1 + Sq5");
    }

    #[test]
    fn admissible_words_are_fixed() {
        for d in 0..=14u32 {
            for m in admissible_basis(d) {
                let r = adem_reduce(&m.word());
                assert_eq!(r.terms().len(), 1);
                assert!(r.terms().contains(&m));
            }
        }
    }

    #[test]
    fn strategies_agree_small() {
        for d in 0..=10u32 {
            for a in admissible_basis(d) {
                for d2 in 1..=(10 - d) {
                    for b in admissible_basis(d2) {
                        let mut w = a.exponents().to_vec();
                        w.extend_from_slice(b.exponents());
                        let w = SqWord::new(w);
                        assert_eq!(
                            adem_reduce_with(&w, RewriteStrategy::LeftmostFirst),
                            adem_reduce_with(&w, RewriteStrategy::RightmostFirst),
                            "strategy mismatch on {}",
                            w
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn degree_and_excess() {
        let m = AdmissibleMonomial::new(vec![6, 3, 1]);
        assert_eq!(m.degree(), 10);
        assert_eq!(m.excess(), 2);
        assert_eq!(AdmissibleMonomial::unit().excess(), 0);
    }

    #[test]
    fn unit_laws() {
        let x = adem_reduce(&SqWord::new(vec![5, 2]));
        assert_eq!(multiply(&SteenrodElement::unit(), &x), x);
        assert_eq!(multiply(&x, &SteenrodElement::unit()), x);
    }

    #[test]
    fn an_basis_low_degrees() {
        // generated by Sq1 alone: the exterior algebra on Sq1
        let a1 = SubalgebraSpec::new(1).unwrap();
        let dims1: Vec<usize> = (0..=3).map(|d| an_basis(a1, d).len()).collect();
        assert_eq!(dims1, vec![1, 1, 0, 0]);
        // generated by Sq1, Sq2: total dimension 8, top degree 6
        let a2 = SubalgebraSpec::new(2).unwrap();
        let dims2: Vec<usize> = (0..=7).map(|d| an_basis(a2, d).len()).collect();
        assert_eq!(dims2, vec![1, 1, 1, 2, 1, 1, 1, 0]);
    }

    #[test]
    fn decomposition_n1() {
        match decompose_sq2n_sq2n(1, 64).unwrap() {
            Decomposition::Witness { triples } => {
                assert_eq!(triples.len(), 1);
                let (a, m, b) = &triples[0];
                assert_eq!(a.to_string(), "Sq1");
                assert_eq!(m.to_string(), "Sq2");
                assert_eq!(b.to_string(), "Sq1");
            }
            Decomposition::NotFound => panic!("expected a witness for n = 1"),
        }
    }

    #[test]
    fn decomposition_rejects_n0() {
        assert!(decompose_sq2n_sq2n(0, 64).is_err());
    }

    #[test]
    fn decomposition_respects_search_bound() {
        assert_eq!(decompose_sq2n_sq2n(2, 4).unwrap(), Decomposition::NotFound);
    }

    #[test]
    fn parse_display_roundtrip() {
        let e = parse_element("Sq2 Sq2").unwrap();
        assert_eq!(e.to_string(), "Sq3 Sq1");
        let back = parse_element(&e.to_string()).unwrap();
        assert_eq!(back, e);
        assert_eq!(parse_element("0").unwrap().to_string(), "0");
        assert_eq!(parse_element("1").unwrap().to_string(), "1");
        assert!(parse_word("Sq0").is_err());
        assert!(parse_word("Qs3").is_err());
    }
}

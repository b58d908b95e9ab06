//! Behaviour of the nilpotent filtration along short exact sequences.
//!
//! Given 0 → M →f N →g P → 0 of bounded modules and a stage s, the checker
//! verifies four consequences the filtration is supposed to satisfy:
//! injectivity of R_s f, nilpotency of the kernel of coker(R_s f) → R_s P,
//! the iso/epi behaviour of R_s N → R_s P below the nilpotency stage of M,
//! and subadditivity of weights. Everything is computed on certified
//! stages, so a knowledge gap surfaces as an `Undecided` outcome, never as
//! a silent pass.

use crate::f2::{F2Matrix, F2Vector, Subspace};

use super::filtration::{nilpotent_filtration, weight, FiltrationResult};
use super::nilpotency::{nilpotency_degree, NilpotencyVerdict};
use super::{BoundedUnstableModule, ModuleMap, UnstableError};

/// 0 → sub → mid → quo → 0 with verified equivariant maps.
pub struct ShortExactSequence {
    pub sub: BoundedUnstableModule,
    pub mid: BoundedUnstableModule,
    pub quo: BoundedUnstableModule,
    pub f: ModuleMap,
    pub g: ModuleMap,
}

impl ShortExactSequence {
    /// Check degreewise exactness (f injective, g surjective, im f = ker g).
    pub fn verify(&self) -> Result<(), UnstableError> {
        let bound = self.mid.bound();
        if self.sub.bound() != bound || self.quo.bound() != bound {
            return Err(UnstableError::NotExact("bounds differ".into()));
        }
        for d in 0..=bound {
            let fd = self.f.at(d);
            let gd = self.g.at(d);
            if fd.rank() != self.sub.dim(d) {
                return Err(UnstableError::NotExact(format!(
                    "first map not injective in degree {d}"
                )));
            }
            if gd.rank() != self.quo.dim(d) {
                return Err(UnstableError::NotExact(format!(
                    "second map not surjective in degree {d}"
                )));
            }
            if !fd.mul(gd).is_zero() {
                return Err(UnstableError::NotExact(format!(
                    "composite nonzero in degree {d}"
                )));
            }
            if fd.rank() + gd.rank() != self.mid.dim(d) {
                return Err(UnstableError::NotExact(format!(
                    "image smaller than kernel in degree {d}"
                )));
            }
        }
        Ok(())
    }

    /// The split sequence 0 → A → A⊕C → C → 0 twisted by φ ∈ Hom(A, C):
    /// a ↦ (a, φa) and (a, c) ↦ φa + c.
    pub fn twisted_split(
        a: &BoundedUnstableModule,
        c: &BoundedUnstableModule,
        phi: &ModuleMap,
    ) -> Result<ShortExactSequence, UnstableError> {
        let n = a.direct_sum(c);
        let bound = n.bound();
        let mut fs = Vec::new();
        let mut gs = Vec::new();
        for d in 0..=bound {
            let (da, dc) = (a.dim(d), c.dim(d));
            let mut fd = F2Matrix::zero(da, da + dc);
            for i in 0..da {
                fd.set(i, i, true);
                for j in phi.at(d).row(i).ones() {
                    fd.set(i, da + j, true);
                }
            }
            let mut gd = F2Matrix::zero(da + dc, dc);
            for i in 0..da {
                for j in phi.at(d).row(i).ones() {
                    gd.set(i, j, true);
                }
            }
            for j in 0..dc {
                gd.set(da + j, j, true);
            }
            fs.push(fd);
            gs.push(gd);
        }
        let f = ModuleMap::new(a, &n, fs)?;
        let g = ModuleMap::new(&n, c, gs)?;
        let ses = ShortExactSequence {
            sub: a.clone(),
            mid: n,
            quo: c.clone(),
            f,
            g,
        };
        ses.verify()?;
        Ok(ses)
    }

    /// The sequence 0 → W → M → M/W → 0 of a stable family of subspaces.
    pub fn from_stable_subspaces(
        m: &BoundedUnstableModule,
        spaces: &[Subspace],
    ) -> Result<ShortExactSequence, UnstableError> {
        let sub = m.sub_module(format!("sub({})", m.name()), spaces)?;
        let (quo, proj) = m.quotient_module(format!("quo({})", m.name()), spaces)?;
        let incl: Vec<F2Matrix> = (0..=m.bound())
            .map(|d| F2Matrix::from_rows(spaces[d].basis().to_vec(), m.dim(d)))
            .collect();
        let f = ModuleMap::new(&sub, m, incl)?;
        let g = ModuleMap::new(m, &quo, proj)?;
        let ses = ShortExactSequence {
            sub,
            mid: m.clone(),
            quo,
            f,
            g,
        };
        ses.verify()?;
        Ok(ses)
    }
}

/// A basis of the F₂-vector space of equivariant degree-0 maps src → dst.
pub fn hom_basis(src: &BoundedUnstableModule, dst: &BoundedUnstableModule) -> Vec<ModuleMap> {
    let bound = src.bound().min(dst.bound());
    let mut offsets = vec![0usize; bound + 2];
    for d in 0..=bound {
        offsets[d + 1] = offsets[d] + src.dim(d) * dst.dim(d);
    }
    let unknowns = offsets[bound + 1];
    if unknowns == 0 {
        return Vec::new();
    }
    // columns: one per (k, d, source basis i, target basis jt) equation
    let mut cols: Vec<F2Vector> = Vec::new();
    for k in 1..=bound {
        for d in 0..=(bound - k) {
            let ss = src.sq_matrix(k, d);
            let sd = dst.sq_matrix(k, d);
            for i in 0..src.dim(d) {
                for jt in 0..dst.dim(d + k) {
                    let mut col = F2Vector::zero(unknowns);
                    // Σ_j F_d[i,j]·sd[j,jt]
                    for j in 0..dst.dim(d) {
                        if sd.get(j, jt) {
                            let u = offsets[d] + i * dst.dim(d) + j;
                            col.set(u, !col.get(u));
                        }
                    }
                    // Σ_{i'} ss[i,i']·F_{d+k}[i',jt]
                    for ip in ss.row(i).ones() {
                        let u = offsets[d + k] + ip * dst.dim(d + k) + jt;
                        col.set(u, !col.get(u));
                    }
                    if !col.is_zero() {
                        cols.push(col);
                    }
                }
            }
        }
    }
    let constraint = if cols.is_empty() {
        F2Matrix::zero(unknowns, 0)
    } else {
        F2Matrix::from_rows(cols, unknowns).transpose()
    };
    constraint
        .left_null_space()
        .into_iter()
        .map(|sol| {
            let mats: Vec<F2Matrix> = (0..=bound)
                .map(|d| {
                    let mut m = F2Matrix::zero(src.dim(d), dst.dim(d));
                    for i in 0..src.dim(d) {
                        for j in 0..dst.dim(d) {
                            if sol.get(offsets[d] + i * dst.dim(d) + j) {
                                m.set(i, j, true);
                            }
                        }
                    }
                    m
                })
                .collect();
            ModuleMap::new(src, dst, mats).expect("solved maps are equivariant")
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CheckOutcome {
    Pass,
    Fail(String),
    Undecided(String),
}

impl CheckOutcome {
    pub fn is_violation(&self) -> bool {
        matches!(self, CheckOutcome::Fail(_))
    }
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CheckOutcome::Pass => write!(f, "pass"),
            CheckOutcome::Fail(w) => write!(f, "FAIL: {w}"),
            CheckOutcome::Undecided(w) => write!(f, "undecided: {w}"),
        }
    }
}

pub struct ExactnessReport {
    pub stage: usize,
    /// (a) R_s(sub) → R_s(mid) injective
    pub injective_on_stage: CheckOutcome,
    /// (b) ker(coker(R_s f) → R_s quo) has no certified-reduced element
    pub kernel_nilpotent: CheckOutcome,
    /// (c) R_t(mid) → R_t(quo) iso for t < ℓ, epi for t = ℓ (ℓ = certified
    /// nilpotency stage of sub), evaluated at t = s when s ≤ ℓ
    pub stage_iso_below_nilpotency: CheckOutcome,
    /// (d) weight R_s(mid) ≤ max(weight R_s(sub), weight R_s(quo))
    pub weight_bounded: CheckOutcome,
}

impl ExactnessReport {
    pub fn violations(&self) -> usize {
        [
            &self.injective_on_stage,
            &self.kernel_nilpotent,
            &self.stage_iso_below_nilpotency,
            &self.weight_bounded,
        ]
        .iter()
        .filter(|c| c.is_violation())
        .count()
    }
}

/// The matrices of the map R_s(src) → R_s(dst) induced on subquotients, or
/// `None` when certified stages fail to be carried into each other (a
/// knowledge artifact, not a counterexample).
fn induced_stage_matrices(
    src: &FiltrationResult,
    dst: &FiltrationResult,
    map: &ModuleMap,
    s: usize,
    ambient_dst_dims: &[usize],
) -> Option<Vec<F2Matrix>> {
    let bound = src.bound();
    let new_bound = bound - s;
    let mut out = Vec::new();
    for e in 0..=new_bound {
        let d = e + s;
        // containment of both layers
        for v in src.stage(s)[d].basis() {
            let w = map.at(d).act_row(v);
            if !dst.stage(s)[d].contains(&w) {
                return None;
            }
        }
        for v in src.stage(s + 1)[d].basis() {
            let w = map.at(d).act_row(v);
            if !dst.stage(s + 1)[d].contains(&w) {
                return None;
            }
        }
        let src_reps = src.stage(s + 1)[d].complement_in(&src.stage(s)[d]);
        let dst_reps = dst.stage(s + 1)[d].complement_in(&dst.stage(s)[d]);
        let dst_dim = dst_reps.len();
        let mut solver_rows = dst_reps;
        solver_rows.extend(dst.stage(s + 1)[d].basis().iter().cloned());
        let solver = F2Matrix::from_rows(solver_rows, ambient_dst_dims[d]);
        let mut rows = Vec::new();
        for v in &src_reps {
            let w = map.at(d).act_row(v);
            let sol = solver.solve_left(&w).expect("carried into the stage");
            rows.push(sol.slice(0, dst_dim));
        }
        out.push(F2Matrix::from_rows(rows, dst_dim));
    }
    Some(out)
}

/// Certified nilpotency stage of a whole module: the largest s with
/// M_s = M. `None` for the zero module (every stage is everything).
fn certified_module_nilpotency(m: &BoundedUnstableModule, filt: &FiltrationResult) -> Option<usize> {
    if m.total_dim() == 0 {
        return None;
    }
    let mut l = 0;
    for s in 0..filt.depth() {
        if filt.stage_dims(s) == m.dims() {
            l = s;
        } else {
            break;
        }
    }
    Some(l)
}

/// Run the four filtration checks for 0 → sub → mid → quo → 0 at stage s.
#[allow(non_snake_case)]
pub fn check_exactness_A1(
    ses: &ShortExactSequence,
    s: usize,
) -> Result<ExactnessReport, UnstableError> {
    ses.verify()?;
    let bound = ses.mid.bound();
    if s > bound {
        return Err(UnstableError::InvalidParameter(format!(
            "stage {s} exceeds the bound {bound}"
        )));
    }
    let filt_sub = nilpotent_filtration(&ses.sub)?;
    let filt_mid = nilpotent_filtration(&ses.mid)?;
    let filt_quo = nilpotent_filtration(&ses.quo)?;

    // a Fail speaks about certified stages, so it is a counterexample only
    // where certification is exact; an escape in range makes it a gap
    let tainted_at = |e: usize| {
        let d = e + s;
        [&filt_sub, &filt_mid, &filt_quo]
            .iter()
            .any(|f| f.tainted(s, d) || f.tainted(s + 1, d))
    };

    // (a) injectivity of R_s f
    let induced_f = induced_stage_matrices(&filt_sub, &filt_mid, &ses.f, s, ses.mid.dims());
    let induced_g = induced_stage_matrices(&filt_mid, &filt_quo, &ses.g, s, ses.quo.dims());
    let injective_on_stage = match &induced_f {
        None => CheckOutcome::Undecided("certified stages not carried by f".into()),
        Some(mats) => {
            let bad = mats
                .iter()
                .enumerate()
                .find(|(_, m)| m.rank() != m.rows());
            match bad {
                None => CheckOutcome::Pass,
                Some((e, _)) if tainted_at(e) => CheckOutcome::Undecided(format!(
                    "rank drop in shifted degree {e}, inside an escape-tainted range"
                )),
                Some((e, _)) => CheckOutcome::Fail(format!(
                    "R_{s} of the inclusion drops rank in shifted degree {e}"
                )),
            }
        }
    };

    // (b) kernel of coker(R_s f) → R_s quo is nilpotent
    let kernel_nilpotent = (|| {
        let rs_mid = match filt_mid.quotient(s) {
            Some(q) => q.clone(),
            None => return CheckOutcome::Pass, // R_s mid = 0
        };
        let mats_f = match &induced_f {
            None => return CheckOutcome::Undecided("no induced map for f".into()),
            Some(m) => m,
        };
        let mats_g = match &induced_g {
            None => return CheckOutcome::Undecided("certified stages not carried by g".into()),
            Some(m) => m,
        };
        let image: Vec<Subspace> = (0..=rs_mid.bound())
            .map(|e| Subspace::full(mats_f[e].rows()).image_row(&mats_f[e]))
            .collect();
        let (coker, _proj) = match rs_mid.quotient_module("coker", &image) {
            Ok(x) => x,
            Err(e) => return CheckOutcome::Undecided(format!("image not stable: {e}")),
        };
        // coker → R_s quo: the chosen quotient reps map through induced g,
        // and coker coordinates of a rep combination are the combination
        // itself
        for e in 0..=coker.bound() {
            if coker.dim(e) == 0 {
                continue;
            }
            let reps = image[e].complement_in(&Subspace::full(rs_mid.dim(e)));
            let q_rows: Vec<F2Vector> =
                reps.iter().map(|v| mats_g[e].act_row(v)).collect();
            let q = F2Matrix::from_rows(q_rows, mats_g[e].cols());
            for kv in q.left_null_space() {
                let class = coker.element(e, kv);
                if class.is_zero() {
                    continue;
                }
                match nilpotency_degree(&coker, &class) {
                    NilpotencyVerdict::ExactlyNilpotent(0) => {
                        return if tainted_at(e) {
                            CheckOutcome::Undecided(format!(
                                "kernel class at shifted degree {e}, inside an escape-tainted range"
                            ))
                        } else {
                            CheckOutcome::Fail(format!(
                                "reduced class in the kernel at shifted degree {e}"
                            ))
                        };
                    }
                    NilpotencyVerdict::AtLeastNilpotent(0) => {
                        return CheckOutcome::Undecided(format!(
                            "kernel class undecided at shifted degree {e}"
                        ));
                    }
                    _ => {}
                }
            }
        }
        CheckOutcome::Pass
    })();

    // (c) iso below the certified nilpotency stage of sub, epi at it
    let ell = certified_module_nilpotency(&ses.sub, &filt_sub);
    let stage_iso_below_nilpotency = (|| {
        let want_iso = match ell {
            None => true, // sub = 0: all stages iso
            Some(l) if s < l => true,
            Some(l) if s == l => false,
            _ => return CheckOutcome::Pass, // nothing asserted above ℓ
        };
        let mats_g = match &induced_g {
            None => return CheckOutcome::Undecided("certified stages not carried by g".into()),
            Some(m) => m,
        };
        for (e, m) in mats_g.iter().enumerate() {
            if m.rank() != m.cols() {
                return if tainted_at(e) {
                    CheckOutcome::Undecided(format!(
                        "projection rank short in shifted degree {e}, inside an escape-tainted range"
                    ))
                } else {
                    CheckOutcome::Fail(format!(
                        "R_{s} of the projection not surjective in shifted degree {e}"
                    ))
                };
            }
            if want_iso && m.rank() != m.rows() {
                return if tainted_at(e) {
                    CheckOutcome::Undecided(format!(
                        "projection kernel in shifted degree {e}, inside an escape-tainted range"
                    ))
                } else {
                    CheckOutcome::Fail(format!(
                        "R_{s} of the projection not injective in shifted degree {e}"
                    ))
                };
            }
        }
        CheckOutcome::Pass
    })();

    // (d) weight subadditivity
    let weight_bounded = (|| {
        let (rm, rq, rn) = (
            filt_sub.quotient(s),
            filt_quo.quotient(s),
            filt_mid.quotient(s),
        );
        let rn = match rn {
            Some(x) => x,
            None => return CheckOutcome::Pass,
        };
        let wn = match weight(rn) {
            Ok(w) => w,
            Err(UnstableError::NotReduced { d }) if tainted_at(d) => {
                return CheckOutcome::Undecided(format!(
                    "R_{s} of the middle not certifiably reduced at shifted degree {d}, inside an escape-tainted range"
                ))
            }
            Err(e) => return CheckOutcome::Fail(format!("R_{s} of the middle not reduced: {e}")),
        };
        let wm = rm.map(|x| weight(x)).transpose();
        let wq = rq.map(|x| weight(x)).transpose();
        match (wm, wq) {
            (Ok(a), Ok(b)) => {
                let cap = a.unwrap_or(0).max(b.unwrap_or(0));
                if wn <= cap {
                    CheckOutcome::Pass
                } else if (0..=(bound - s)).any(tainted_at) {
                    CheckOutcome::Undecided(format!(
                        "weight {wn} exceeds max({a:?}, {b:?}), but the range is escape-tainted"
                    ))
                } else {
                    CheckOutcome::Fail(format!("weight {wn} exceeds max({a:?}, {b:?})"))
                }
            }
            (Err(UnstableError::NotReduced { d }), _) | (_, Err(UnstableError::NotReduced { d }))
                if tainted_at(d) =>
            {
                CheckOutcome::Undecided(format!(
                    "an outer subquotient not certifiably reduced at shifted degree {d}, inside an escape-tainted range"
                ))
            }
            (Err(e), _) | (_, Err(e)) => {
                CheckOutcome::Fail(format!("an outer subquotient is not reduced: {e}"))
            }
        }
    })();

    Ok(ExactnessReport {
        stage: s,
        injective_on_stage,
        kernel_nilpotent,
        stage_iso_below_nilpotency,
        weight_bounded,
    })
}

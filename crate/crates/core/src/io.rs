//! JSON forms of the workbench's main objects.
//!
//! Every writer produces a `serde_json::Value` whose maps are B-trees, so
//! equal values print to identical bytes — the CLI's determinism guarantee
//! rests on that.  Every reader goes back through the ordinary constructor,
//! so a file that parses satisfies the same invariants as a value built in
//! memory; nothing is trusted on faith.
//!
//! Schemas:
//!
//! * module — `{"bound", "dims", "sq": {"<k>": [matrix per source degree]},
//!   "vanishing": [[k, d], …]}` with matrices as row lists of 0/1 and rows
//!   indexed by the source basis,
//! * algebra — `{"bound", "dims", "mul": [[i, j, k], …], "unit"}` with
//!   global basis indices flattened in degree order and a triple per nonzero
//!   structure constant,
//! * Tor — a bare `{"(s,t)": dim}` map,
//! * EM report — `{"page", "dims": {"(s,t)": n}, "collapse", "corner",
//!   "checks": [{name, pass, witness}]}`; columns are recorded by the
//!   non-negative s of the (−s, t) bidegree,
//! * simplicial set — `{"dims", "faces": {"<n>": [[dᵢx…] per i]},
//!   "degens": …, "basepoint"}`.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};

use crate::em::{CollapseCertificate, CornerMaps, EMPage};
use crate::f2::F2Matrix;
use crate::homological::{AlgebraError, GradedAlgebraPresentation, TorTable};
use crate::simplicial::{FiniteSimplicialSet, SpaceError};
use crate::suites::SuiteReport;
use crate::unstable::filtration::FiltrationResult;
use crate::unstable::{BoundedUnstableModule, UnstableError};

#[derive(thiserror::Error, Debug)]
pub enum IoError {
    #[error("malformed input: {0}")]
    Shape(String),
    #[error(transparent)]
    Module(#[from] UnstableError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

fn shape(msg: impl Into<String>) -> IoError {
    IoError::Shape(msg.into())
}

fn matrix_to_json(m: &F2Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| json!(u8::from(m.get(i, j))))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn matrix_from_json(v: &Value, rows: usize, cols: usize) -> Result<F2Matrix, IoError> {
    let arr = v.as_array().ok_or_else(|| shape("matrix must be an array of rows"))?;
    if arr.len() != rows {
        return Err(shape(format!("matrix has {} rows, expected {rows}", arr.len())));
    }
    let mut m = F2Matrix::zero(rows, cols);
    for (i, rv) in arr.iter().enumerate() {
        let row = rv.as_array().ok_or_else(|| shape("matrix row must be an array"))?;
        if row.len() != cols {
            return Err(shape(format!("row {i} has {} entries, expected {cols}", row.len())));
        }
        for (j, e) in row.iter().enumerate() {
            match e.as_u64() {
                Some(0) => {}
                Some(1) => m.set(i, j, true),
                _ => return Err(shape(format!("entry ({i},{j}) is not 0 or 1"))),
            }
        }
    }
    Ok(m)
}

fn get_usize(v: &Value, key: &str) -> Result<usize, IoError> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|n| n as usize)
        .ok_or_else(|| shape(format!("missing or non-integer field {key:?}")))
}

fn get_usize_array(v: &Value, key: &str) -> Result<Vec<usize>, IoError> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| shape(format!("missing array field {key:?}")))?
        .iter()
        .map(|e| {
            e.as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| shape(format!("non-integer entry in {key:?}")))
        })
        .collect()
}

fn bidegree_map(dims: &BTreeMap<(usize, usize), usize>) -> Value {
    let mut map = Map::new();
    for (&(s, t), &n) in dims {
        map.insert(format!("({s},{t})"), json!(n));
    }
    Value::Object(map)
}

// ---------------------------------------------------------------------------
// unstable modules
// ---------------------------------------------------------------------------

/// A square key appears under `"sq"` only if some in-bound matrix for it is
/// nonzero; absent keys are zero maps, matching the in-memory convention.
pub fn module_to_json(m: &BoundedUnstableModule) -> Value {
    let bound = m.bound();
    let mut sq = Map::new();
    for k in 1..=bound {
        let mats: Vec<F2Matrix> = (0..=bound - k).map(|d| m.sq_matrix(k, d)).collect();
        if mats.iter().all(F2Matrix::is_zero) {
            continue;
        }
        sq.insert(
            k.to_string(),
            Value::Array(mats.iter().map(matrix_to_json).collect()),
        );
    }
    let vanishing: Vec<Value> = m.vanishing().iter().map(|&(k, d)| json!([k, d])).collect();
    json!({
        "bound": bound,
        "dims": m.dims(),
        "sq": sq,
        "vanishing": vanishing,
    })
}

pub fn module_from_json(v: &Value) -> Result<BoundedUnstableModule, IoError> {
    let bound = get_usize(v, "bound")?;
    let dims = get_usize_array(v, "dims")?;
    if dims.len() != bound + 1 {
        return Err(shape(format!("dims lists {} degrees, expected {}", dims.len(), bound + 1)));
    }
    let labels: Vec<Vec<String>> = dims
        .iter()
        .enumerate()
        .map(|(d, &n)| (0..n).map(|i| format!("e{d}_{i}")).collect())
        .collect();
    let mut sq = BTreeMap::new();
    let sq_obj = v
        .get("sq")
        .and_then(Value::as_object)
        .ok_or_else(|| shape("missing object field \"sq\""))?;
    for (ks, per_degree) in sq_obj {
        let k: usize = ks
            .parse()
            .map_err(|_| shape(format!("sq key {ks:?} is not an integer")))?;
        if k == 0 || k > bound {
            return Err(shape(format!("sq key {k} out of range 1..={bound}")));
        }
        let arr = per_degree
            .as_array()
            .ok_or_else(|| shape(format!("sq[{k}] must be an array of matrices")))?;
        if arr.len() != bound - k + 1 {
            return Err(shape(format!(
                "sq[{k}] lists {} source degrees, expected {}",
                arr.len(),
                bound - k + 1
            )));
        }
        for (d, mv) in arr.iter().enumerate() {
            let mat = matrix_from_json(mv, dims[d], dims[d + k])?;
            if !mat.is_zero() {
                sq.insert((k, d), mat);
            }
        }
    }
    let mut vanishing = BTreeSet::new();
    if let Some(vs) = v.get("vanishing") {
        for pair in vs.as_array().ok_or_else(|| shape("\"vanishing\" must be an array"))? {
            let p = pair
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| shape("vanishing entries are [k, d] pairs"))?;
            let k = p[0].as_u64().ok_or_else(|| shape("non-integer vanishing key"))? as usize;
            let d = p[1].as_u64().ok_or_else(|| shape("non-integer vanishing key"))? as usize;
            vanishing.insert((k, d));
        }
    }
    Ok(BoundedUnstableModule::new("loaded", bound, dims, labels, sq, vanishing)?)
}

// ---------------------------------------------------------------------------
// graded algebras and Tor
// ---------------------------------------------------------------------------

/// Global basis indices flatten the degrees in order, so connectedness pins
/// the unit at index 0.
pub fn algebra_to_json(a: &GradedAlgebraPresentation) -> Value {
    let bound = a.bound();
    let mut off = vec![0usize; bound + 2];
    for t in 0..=bound {
        off[t + 1] = off[t] + a.dim(t);
    }
    let mut triples = Vec::new();
    for p in 0..=bound {
        for q in 0..=(bound - p) {
            for i in 0..a.dim(p) {
                for j in 0..a.dim(q) {
                    for c in a.basis_product(p, i, q, j).ones() {
                        triples.push((off[p] + i, off[q] + j, off[p + q] + c));
                    }
                }
            }
        }
    }
    triples.sort_unstable();
    let mul: Vec<Value> = triples.iter().map(|&(i, j, k)| json!([i, j, k])).collect();
    json!({
        "bound": bound,
        "dims": a.dims(),
        "mul": mul,
        "unit": 0,
    })
}

pub fn algebra_from_json(v: &Value) -> Result<GradedAlgebraPresentation, IoError> {
    let bound = get_usize(v, "bound")?;
    let dims = get_usize_array(v, "dims")?;
    if dims.len() != bound + 1 {
        return Err(shape(format!("dims lists {} degrees, expected {}", dims.len(), bound + 1)));
    }
    let mut off = vec![0usize; bound + 2];
    for t in 0..=bound {
        off[t + 1] = off[t] + dims[t];
    }
    let total = off[bound + 1];
    let degree_of = |g: usize| -> Result<(usize, usize), IoError> {
        if g >= total {
            return Err(shape(format!("basis index {g} out of range 0..{total}")));
        }
        let t = (0..=bound).find(|&t| g < off[t + 1]).unwrap();
        Ok((t, g - off[t]))
    };
    if get_usize(v, "unit")? != 0 {
        return Err(shape("a connected algebra has its unit at index 0"));
    }
    let mut mul = BTreeMap::new();
    for p in 0..=bound {
        for q in 0..=(bound - p) {
            if dims[p] > 0 && dims[q] > 0 {
                mul.insert((p, q), F2Matrix::zero(dims[p] * dims[q], dims[p + q]));
            }
        }
    }
    for triple in v
        .get("mul")
        .and_then(Value::as_array)
        .ok_or_else(|| shape("missing array field \"mul\""))?
    {
        let t = triple
            .as_array()
            .filter(|t| t.len() == 3)
            .ok_or_else(|| shape("mul entries are [i, j, k] triples"))?;
        let gi = t[0].as_u64().ok_or_else(|| shape("non-integer mul index"))? as usize;
        let gj = t[1].as_u64().ok_or_else(|| shape("non-integer mul index"))? as usize;
        let gk = t[2].as_u64().ok_or_else(|| shape("non-integer mul index"))? as usize;
        let (p, i) = degree_of(gi)?;
        let (q, j) = degree_of(gj)?;
        let (r, c) = degree_of(gk)?;
        if r != p + q {
            return Err(shape(format!(
                "product of degrees {p} and {q} cannot land in degree {r}"
            )));
        }
        mul.get_mut(&(p, q))
            .expect("factor dims are positive when indices resolved")
            .set(i * dims[q] + j, c, true);
    }
    let labels: Vec<Vec<String>> = dims
        .iter()
        .enumerate()
        .map(|(t, &n)| (0..n).map(|i| format!("e{t}_{i}")).collect())
        .collect();
    Ok(GradedAlgebraPresentation::new("loaded", bound, dims, labels, mul)?)
}

/// The bare `{"(s,t)": dim}` map; representatives stay in memory.
pub fn tor_to_json(t: &TorTable) -> Value {
    bidegree_map(&t.dims)
}

// ---------------------------------------------------------------------------
// EM reports
// ---------------------------------------------------------------------------

pub fn em_report_to_json(
    page: &EMPage,
    cert: &CollapseCertificate,
    corner: Option<&CornerMaps>,
    checks: &[(String, bool, String)],
) -> Value {
    let corner_v = match corner {
        None => Value::Null,
        Some(c) => {
            let mut edge = Map::new();
            for (t, m) in &c.edge {
                edge.insert(t.to_string(), matrix_to_json(m));
            }
            json!({
                "unit_corner_ok": c.unit_corner_ok,
                "d1_vanishes": c.first_differential_vanishes,
                "edge": edge,
                "edge_surjective": c.edge_surjective,
                "loop_degree_shift": c.loop_degree_shift,
            })
        }
    };
    let checks_v: Vec<Value> = checks
        .iter()
        .map(|(name, pass, witness)| json!({"name": name, "pass": pass, "witness": witness}))
        .collect();
    json!({
        "page": format!("E{}", page.r()),
        "dims": bidegree_map(&page.dims()),
        "collapse": cert.holds,
        "corner": corner_v,
        "checks": checks_v,
    })
}

pub fn suite_report_to_json(r: &SuiteReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "pass": c.pass, "witness": c.witness}))
        .collect();
    match r.seed {
        Some(seed) => json!({"suite": r.suite, "seed": seed, "checks": checks}),
        None => json!({"suite": r.suite, "checks": checks}),
    }
}

// ---------------------------------------------------------------------------
// nilpotent filtrations
// ---------------------------------------------------------------------------

/// Stage dimension tables plus the escape ledger; `stages` is the certified
/// filtration, `naive` the raw degreewise fixed points it was cut from.
pub fn filtration_to_json(module: &str, f: &FiltrationResult) -> Value {
    let stages: Vec<Value> = (0..f.depth()).map(|s| json!(f.stage_dims(s))).collect();
    let naive: Vec<Value> = (0..f.depth())
        .map(|s| {
            Value::Array(
                f.naive_stage(s)
                    .iter()
                    .map(|sp| json!(sp.dim()))
                    .collect(),
            )
        })
        .collect();
    let mut escapes = Vec::new();
    for s in 0..f.depth() {
        for d in 0..=f.bound() {
            if f.escaped(s, d) {
                escapes.push(json!([s, d]));
            }
        }
    }
    json!({
        "module": module,
        "bound": f.bound(),
        "stages": stages,
        "naive": naive,
        "escapes": escapes,
        "naive_agrees": f.naive_agrees(),
    })
}

// ---------------------------------------------------------------------------
// simplicial sets
// ---------------------------------------------------------------------------

pub fn space_to_json(x: &FiniteSimplicialSet) -> Value {
    let n_max = x.level_cap();
    let dims: Vec<usize> = (0..=n_max).map(|n| x.cells(n)).collect();
    let mut faces = Map::new();
    for n in 1..=n_max {
        let per_i: Vec<Value> = (0..=n)
            .map(|i| Value::Array((0..x.cells(n)).map(|c| json!(x.face(n, i, c))).collect()))
            .collect();
        faces.insert(n.to_string(), Value::Array(per_i));
    }
    let mut degens = Map::new();
    for n in 0..n_max {
        let per_i: Vec<Value> = (0..=n)
            .map(|i| Value::Array((0..x.cells(n)).map(|c| json!(x.degen(n, i, c))).collect()))
            .collect();
        degens.insert(n.to_string(), Value::Array(per_i));
    }
    json!({
        "dims": dims,
        "faces": faces,
        "degens": degens,
        "basepoint": x.basepoint(),
    })
}

pub fn space_from_json(v: &Value) -> Result<FiniteSimplicialSet, IoError> {
    let cells = get_usize_array(v, "dims")?;
    if cells.is_empty() {
        return Err(shape("\"dims\" must list at least the vertex count"));
    }
    let n_max = cells.len() - 1;
    let basepoint = get_usize(v, "basepoint")?;
    let read_levels = |key: &str, first: usize, last: usize| -> Result<Vec<Vec<Vec<usize>>>, IoError> {
        let obj = v
            .get(key)
            .and_then(Value::as_object)
            .ok_or_else(|| shape(format!("missing object field {key:?}")))?;
        let mut out = vec![Vec::new(); n_max + 1];
        for (ns, per_i) in obj {
            let n: usize = ns
                .parse()
                .map_err(|_| shape(format!("{key} key {ns:?} is not an integer")))?;
            if n < first || n > last {
                return Err(shape(format!("{key} key {n} out of range {first}..={last}")));
            }
            let arr = per_i
                .as_array()
                .ok_or_else(|| shape(format!("{key}[{n}] must be an array")))?;
            out[n] = arr
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| shape(format!("{key}[{n}] rows must be arrays")))?
                        .iter()
                        .map(|e| {
                            e.as_u64()
                                .map(|u| u as usize)
                                .ok_or_else(|| shape(format!("non-integer entry in {key}[{n}]")))
                        })
                        .collect()
                })
                .collect::<Result<_, IoError>>()?;
        }
        Ok(out)
    };
    let faces = read_levels("faces", 1, n_max)?;
    let degens = read_levels("degens", 0, n_max.saturating_sub(1))?;
    let labels: Vec<Vec<String>> = cells
        .iter()
        .enumerate()
        .map(|(n, &c)| (0..c).map(|i| format!("x{n}_{i}")).collect())
        .collect();
    Ok(FiniteSimplicialSet::new("loaded", n_max, cells, labels, faces, degens, basepoint)?)
}

//! Data-file ingestion: JSON loading plus validation against the
//! owning module's invariants, with JSON-pointer-style error locations.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{Map, Value};

use weylchar_core::charformula::{validate_rep, CMatrix, ExpectedRows, RepData, SphericalAssignment};
use weylchar_core::coxeter::{omega_group, AffineDatum, NodeSubset};
use weylchar_core::fourier::{build_mset, Family, FamilyData, MPair, MSet};
use weylchar_core::groups::FiniteGroupTable;
use weylchar_core::scalar::{Cyclotomic, Rational};

use crate::CliError;

fn data_err(ptr: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("{ptr}: {msg}"))
}

pub fn load_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn as_obj<'a>(v: &'a Value, ptr: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| data_err(ptr, "expected an object"))
}

fn as_arr<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| data_err(ptr, "expected an array"))
}

fn as_str<'a>(v: &'a Value, ptr: &str) -> Result<&'a str, CliError> {
    v.as_str().ok_or_else(|| data_err(ptr, "expected a string"))
}

fn as_usize(v: &Value, ptr: &str) -> Result<usize, CliError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| data_err(ptr, "expected a nonnegative integer"))
}

fn as_i64(v: &Value, ptr: &str) -> Result<i64, CliError> {
    v.as_i64().ok_or_else(|| data_err(ptr, "expected an integer"))
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, ptr: &str) -> Result<&'a Value, CliError> {
    obj.get(key)
        .ok_or_else(|| data_err(&format!("{ptr}/{key}"), "missing required field"))
}

/// Resolves a datum spec: a builtin name or a datum file path.
pub fn load_datum(spec: &str) -> Result<Arc<AffineDatum>, CliError> {
    if let Some(d) = AffineDatum::builtin(spec) {
        return Ok(d);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Data(format!(
            "{spec}: not a builtin datum ({}) and not a file",
            AffineDatum::builtin_names().join(", ")
        )));
    }
    let v = load_json(path)?;
    let obj = as_obj(&v, "")?;
    let name = as_str(get(obj, "name", "")?, "/name")?;
    if let Some(affine) = obj.get("affine") {
        if affine != &Value::Bool(true) {
            return Err(data_err("/affine", "only affine data are supported"));
        }
    }
    let ty = get(obj, "type", "")?;
    match ty {
        Value::String(s) => {
            let builtin = match s.as_str() {
                "A1" => "a1aff",
                "A2" => "a2aff",
                "C2" => "c2aff",
                "G2" => "g2aff",
                other => {
                    return Err(data_err("/type", format!("unknown builtin type {other:?}")))
                }
            };
            Ok(AffineDatum::builtin(builtin).unwrap())
        }
        Value::Object(tobj) => {
            let cartan_v = get(tobj, "cartan", "/type")?;
            let rows = as_arr(cartan_v, "/type/cartan")?;
            let mut cartan = Vec::new();
            for (i, row) in rows.iter().enumerate() {
                let ptr = format!("/type/cartan/{i}");
                let row = as_arr(row, &ptr)?;
                let mut out = Vec::new();
                for (j, x) in row.iter().enumerate() {
                    out.push(as_i64(x, &format!("{ptr}/{j}"))?);
                }
                cartan.push(out);
            }
            AffineDatum::from_cartan(name, cartan).map_err(|e| data_err("/type/cartan", e))
        }
        _ => Err(data_err("/type", "expected a builtin name or {\"cartan\": ...}")),
    }
}

/// Group file: full multiplication table or permutation generators.
pub fn load_group(path: &Path) -> Result<FiniteGroupTable, CliError> {
    let v = load_json(path)?;
    group_from_value(&v)
}

/// Same schema, from an in-memory JSON text (embedded data).
pub fn parse_group_str(text: &str, origin: &str) -> Result<FiniteGroupTable, CliError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| CliError::Data(format!("{origin}: {e}")))?;
    group_from_value(&v)
}

fn group_from_value(v: &Value) -> Result<FiniteGroupTable, CliError> {
    let obj = as_obj(v, "")?;
    let labels = match obj.get("labels") {
        None => None,
        Some(l) => {
            let arr = as_arr(l, "/labels")?;
            let mut out = Vec::new();
            for (i, x) in arr.iter().enumerate() {
                out.push(as_str(x, &format!("/labels/{i}"))?.to_string());
            }
            Some(out)
        }
    };
    if let Some(mult_v) = obj.get("mult") {
        let rows = as_arr(mult_v, "/mult")?;
        let mut mult = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let ptr = format!("/mult/{i}");
            let row = as_arr(row, &ptr)?;
            let mut out = Vec::new();
            for (j, x) in row.iter().enumerate() {
                out.push(as_usize(x, &format!("{ptr}/{j}"))?);
            }
            mult.push(out);
        }
        if let Some(order_v) = obj.get("order") {
            let order = as_usize(order_v, "/order")?;
            if order != mult.len() {
                return Err(data_err("/order", "does not match the table size"));
            }
        }
        return FiniteGroupTable::from_mult_table(mult, labels)
            .map_err(|e| data_err("/mult", e));
    }
    if let Some(gens_v) = obj.get("perm_gens") {
        let arr = as_arr(gens_v, "/perm_gens")?;
        let mut gens = Vec::new();
        for (i, g) in arr.iter().enumerate() {
            let ptr = format!("/perm_gens/{i}");
            let g = as_arr(g, &ptr)?;
            let mut out = Vec::new();
            for (j, x) in g.iter().enumerate() {
                out.push(as_usize(x, &format!("{ptr}/{j}"))?);
            }
            gens.push(out);
        }
        return FiniteGroupTable::from_perm_gens(&gens, labels)
            .map_err(|e| data_err("/perm_gens", e));
    }
    Err(data_err("", "group file needs either \"mult\" or \"perm_gens\""))
}

fn parse_matrix(v: &Value, ptr: &str, dim: usize) -> Result<CMatrix, CliError> {
    let rows = as_arr(v, ptr)?;
    if rows.len() != dim {
        return Err(data_err(ptr, format!("matrix is not {dim}x{dim}")));
    }
    let mut out = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let row_ptr = format!("{ptr}/{i}");
        let row = as_arr(row, &row_ptr)?;
        if row.len() != dim {
            return Err(data_err(&row_ptr, format!("matrix is not {dim}x{dim}")));
        }
        let mut entries = Vec::new();
        for (j, x) in row.iter().enumerate() {
            let cell_ptr = format!("{row_ptr}/{j}");
            let lit = as_str(x, &cell_ptr)?;
            let value: Cyclotomic = lit
                .parse()
                .map_err(|e| data_err(&cell_ptr, e))?;
            entries.push(value);
        }
        out.push(entries);
    }
    Ok(out)
}

/// Representation file: scalar-literal generator matrices per node.
pub fn load_rep(path: &Path) -> Result<RepData, CliError> {
    let v = load_json(path)?;
    let obj = as_obj(&v, "")?;
    let datum = load_datum(as_str(get(obj, "datum", "")?, "/datum")?)?;
    let dim = as_usize(get(obj, "dimension", "")?, "/dimension")?;
    let gens_v = as_obj(get(obj, "generators", "")?, "/generators")?;
    let mut generators = BTreeMap::new();
    for i in datum.nodes() {
        let key = i.to_string();
        let Some(m) = gens_v.get(&key) else {
            return Err(data_err(
                &format!("/generators/{key}"),
                "missing generator matrix",
            ));
        };
        generators.insert(i, parse_matrix(m, &format!("/generators/{key}"), dim)?);
    }
    let omega = match obj.get("omega") {
        None => None,
        Some(omega_v) => {
            let omega_obj = as_obj(omega_v, "/omega")?;
            let group = omega_group(&datum);
            let mut out = Vec::new();
            for (key, m) in omega_obj {
                let ptr = format!("/omega/{key}");
                let idx: usize = key
                    .parse()
                    .map_err(|_| data_err(&ptr, "key must be an Omega element index"))?;
                if idx >= group.len() {
                    return Err(data_err(&ptr, "Omega element index out of range"));
                }
                out.push((group[idx].clone(), parse_matrix(m, &ptr, dim)?));
            }
            Some(out)
        }
    };
    let rep = RepData {
        datum,
        dimension: dim,
        generators,
        omega,
    };
    let violations = validate_rep(&rep);
    if !violations.is_empty() {
        return Err(CliError::Data(format!(
            "{}: invalid representation: {}",
            path.display(),
            violations.join("; ")
        )));
    }
    Ok(rep)
}

/// Resolves a class given as an index or as an element label; "1" also
/// names the identity class.
fn resolve_class(v: &Value, ptr: &str, mset: &MSet) -> Result<usize, CliError> {
    match v {
        Value::Number(_) => {
            let c = as_usize(v, ptr)?;
            if c >= mset.classes.len() {
                return Err(data_err(ptr, "class index out of range"));
            }
            Ok(c)
        }
        Value::String(s) => resolve_class_label(s, mset).ok_or_else(|| {
            data_err(ptr, format!("no class with element label {s:?}"))
        }),
        _ => Err(data_err(ptr, "expected a class index or element label")),
    }
}

fn resolve_class_label(s: &str, mset: &MSet) -> Option<usize> {
    if s == "1" || s == "e" {
        return Some(mset.class_of[mset.gamma.identity()]);
    }
    (0..mset.gamma.order())
        .find(|&x| mset.gamma.label(x) == s)
        .map(|x| mset.class_of[x])
}

fn resolve_irr(v: &Value, ptr: &str, mset: &MSet, class: usize) -> Result<usize, CliError> {
    let table = &mset.centralizer_tables[class];
    match v {
        Value::Number(_) => {
            let r = as_usize(v, ptr)?;
            if r >= table.irreducibles.len() {
                return Err(data_err(ptr, "irreducible index out of range"));
            }
            Ok(r)
        }
        Value::String(s) => table
            .row_index_by_label(s)
            .ok_or_else(|| data_err(ptr, format!("no centralizer character labelled {s:?}"))),
        _ => Err(data_err(ptr, "expected an irreducible index or label")),
    }
}

fn parse_pair(v: &Value, ptr: &str, mset: &MSet) -> Result<MPair, CliError> {
    let arr = as_arr(v, ptr)?;
    if arr.len() != 2 {
        return Err(data_err(
            ptr,
            "pair must be [class label or index, irreducible label or index]",
        ));
    }
    let class = resolve_class(&arr[0], &format!("{ptr}/0"), mset)?;
    let irr = resolve_irr(&arr[1], &format!("{ptr}/1"), mset, class)?;
    let pair = (class, irr);
    if !mset.contains(pair) {
        return Err(data_err(ptr, "pair does not belong to M(Gamma)"));
    }
    Ok(pair)
}

/// Parses a pair spec like "(1,eps)", "((0 1),eps)" or "0,1" against
/// M(Gamma). Splits on the last comma so element labels may contain
/// commas only if none do; cycle labels here use spaces.
pub fn parse_pair_spec(spec: &str, mset: &MSet) -> Result<MPair, CliError> {
    let inner = spec
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(spec.trim());
    let (class_part, irr_part) = inner
        .rsplit_once(',')
        .ok_or_else(|| CliError::Usage(format!("invalid pair spec {spec:?}")))?;
    let class_part = class_part.trim();
    let irr_part = irr_part.trim();
    let class = match class_part.parse::<usize>() {
        Ok(c) if c < mset.classes.len() => c,
        _ => resolve_class_label(class_part, mset).ok_or_else(|| {
            CliError::Usage(format!("no class with element label {class_part:?}"))
        })?,
    };
    let table = &mset.centralizer_tables[class];
    let irr = match irr_part.parse::<usize>() {
        Ok(r) if r < table.irreducibles.len() => r,
        _ => table.row_index_by_label(irr_part).ok_or_else(|| {
            CliError::Usage(format!("no centralizer character labelled {irr_part:?}"))
        })?,
    };
    Ok((class, irr))
}

fn resolve_sibling(base: &Path, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.parent().unwrap_or_else(|| Path::new(".")).join(p)
    }
}

/// Family file: weyl group spec "datum#nodes" plus the families.
pub fn load_family(path: &Path) -> Result<(Arc<AffineDatum>, NodeSubset, FamilyData), CliError> {
    let v = load_json(path)?;
    let obj = as_obj(&v, "")?;
    let weyl = as_str(get(obj, "weyl", "")?, "/weyl")?;
    let (datum_spec, nodes_spec) = weyl
        .split_once('#')
        .ok_or_else(|| data_err("/weyl", "expected \"<datum>#<nodes>\""))?;
    let datum = load_datum(datum_spec)?;
    let h = parse_node_set(nodes_spec)
        .map_err(|e| data_err("/weyl", e))?;
    let elements = weylchar_core::coxeter::parabolic_elements(&datum, &h)
        .map_err(|e| data_err("/weyl", e))?;
    let fams_v = as_arr(get(obj, "families", "")?, "/families")?;
    let mut families = Vec::new();
    for (fi, fam_v) in fams_v.iter().enumerate() {
        let ptr = format!("/families/{fi}");
        let fam = as_obj(fam_v, &ptr)?;
        let gamma = match get(fam, "gamma", &ptr)? {
            Value::String(rel) => load_group(&resolve_sibling(path, rel))?,
            other => {
                let tmp = tempfile_group(other, &format!("{ptr}/gamma"))?;
                tmp
            }
        };
        let mset = build_mset(gamma).map_err(|e| data_err(&format!("{ptr}/gamma"), e))?;
        if let Some(sign) = fam.get("sign") {
            if sign.as_i64() != Some(1) {
                return Err(data_err(
                    &format!("{ptr}/sign"),
                    "only the +1 sign convention is supported",
                ));
            }
        }
        let members_v = as_obj(get(fam, "members", &ptr)?, &format!("{ptr}/members"))?;
        let mut members = BTreeMap::new();
        for (key, pair_v) in members_v {
            let mptr = format!("{ptr}/members/{key}");
            let irr: usize = key
                .parse()
                .map_err(|_| data_err(&mptr, "key must be an irreducible index"))?;
            members.insert(irr, parse_pair(pair_v, &mptr, &mset)?);
        }
        families.push(Family { mset, members });
    }
    let fd = FamilyData::from_elements(elements, families)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok((datum, h, fd))
}

// inline group object inside a family file
fn tempfile_group(v: &Value, ptr: &str) -> Result<FiniteGroupTable, CliError> {
    let obj = as_obj(v, ptr)?;
    if let Some(mult_v) = obj.get("mult") {
        let rows = as_arr(mult_v, &format!("{ptr}/mult"))?;
        let mut mult = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let rptr = format!("{ptr}/mult/{i}");
            let row = as_arr(row, &rptr)?;
            let mut out = Vec::new();
            for (j, x) in row.iter().enumerate() {
                out.push(as_usize(x, &format!("{rptr}/{j}"))?);
            }
            mult.push(out);
        }
        return FiniteGroupTable::from_mult_table(mult, None)
            .map_err(|e| data_err(&format!("{ptr}/mult"), e));
    }
    Err(data_err(ptr, "inline group needs \"mult\""))
}

/// Assignment file: M' pairs with their representations.
pub fn load_assignment(
    path: &Path,
    mset: MSet,
) -> Result<(Arc<AffineDatum>, SphericalAssignment), CliError> {
    let v = load_json(path)?;
    let obj = as_obj(&v, "")?;
    let datum = load_datum(as_str(get(obj, "datum", "")?, "/datum")?)?;
    let entries = as_arr(get(obj, "mprime", "")?, "/mprime")?;
    let mut mprime = Vec::new();
    let mut reps = BTreeMap::new();
    for (i, entry) in entries.iter().enumerate() {
        let ptr = format!("/mprime/{i}");
        let entry = as_obj(entry, &ptr)?;
        let pair = parse_pair(get(entry, "pair", &ptr)?, &format!("{ptr}/pair"), &mset)?;
        let rep_spec = as_str(get(entry, "rep", &ptr)?, &format!("{ptr}/rep"))?;
        let rep = load_rep(&resolve_sibling(path, rep_spec))?;
        if rep.datum.name() != datum.name() {
            return Err(data_err(
                &format!("{ptr}/rep"),
                "representation datum differs from the assignment datum",
            ));
        }
        if mprime.contains(&pair) {
            return Err(data_err(&format!("{ptr}/pair"), "duplicate pair in M'"));
        }
        mprime.push(pair);
        reps.insert(pair, rep);
    }
    Ok((datum, SphericalAssignment { mset, mprime, reps }))
}

/// Expected coefficient rows for the rank-2 verification.
pub fn parse_expected_rows(text: &str, origin: &str) -> Result<ExpectedRows, CliError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| CliError::Data(format!("{origin}: {e}")))?;
    let obj = as_obj(&v, "")?;
    let rows_v = as_obj(get(obj, "rows", "")?, "/rows")?;
    let mut rows = BTreeMap::new();
    for (label, row_v) in rows_v {
        let ptr = format!("/rows/{label}");
        let arr = as_arr(row_v, &ptr)?;
        let mut row = Vec::new();
        for (i, x) in arr.iter().enumerate() {
            let cptr = format!("{ptr}/{i}");
            let lit = as_str(x, &cptr)?;
            let value: Cyclotomic = lit.parse().map_err(|e| data_err(&cptr, e))?;
            let rat: Rational = value
                .as_rational()
                .ok_or_else(|| data_err(&cptr, "expected a rational literal"))?;
            row.push(rat);
        }
        rows.insert(label.clone(), row);
    }
    Ok(rows)
}

/// Parses "1,2" (or "" / "none" for the empty set) into a node subset.
pub fn parse_node_set(spec: &str) -> Result<NodeSubset, String> {
    let spec = spec.trim();
    if spec.is_empty() || spec == "none" || spec == "{}" {
        return Ok(NodeSubset::new());
    }
    let mut out = NodeSubset::new();
    for part in spec.split(',') {
        let part = part.trim();
        let n: usize = part
            .parse()
            .map_err(|_| format!("invalid node index {part:?}"))?;
        out.insert(n);
    }
    Ok(out)
}

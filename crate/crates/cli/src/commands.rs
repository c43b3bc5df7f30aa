//! One function per subcommand; each returns the fully rendered output
//! so that assembly stays single-threaded and ordered.

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use weylchar_core::charformula::{
    phi_fourier, phi_multiplicity, tau, vanishing_test, verify_g2, CharError, ExpectedRows,
    G2_LABELS,
};
use weylchar_core::coxeter::{omega_action_on_nodes, omega_group, AffineDatum, NodeSubset,
    WeylElement};
use weylchar_core::fourier::{build_mset, fourier_matrix, MSet};
use weylchar_core::groups::{CharacterTable, FiniteGroupTable};
use weylchar_core::torus::enumerate_finite_order_classes;

use crate::render::{element_str, int_list_str, node_set_str, table, word_str};
use crate::schema;
use crate::{CliError, Format};

fn emit_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn datum_show(spec: &str, format: Format) -> Result<String, CliError> {
    let datum = schema::load_datum(spec)?;
    let nodes = datum.nodes();
    let mut bonds = Vec::new();
    for (ai, &i) in nodes.iter().enumerate() {
        for &j in &nodes[ai + 1..] {
            bonds.push((i, j, datum.bond(i, j)));
        }
    }
    let omega = omega_group(&datum);
    match format {
        Format::Json => {
            let v = json!({
                "name": datum.name(),
                "type": { "cartan": datum.cartan() },
                "affine": true,
                "nodes": nodes,
                "bonds": bonds
                    .iter()
                    .map(|(i, j, m)| json!({ "i": i, "j": j, "m": m.to_string() }))
                    .collect::<Vec<_>>(),
                "omega_order": datum.omega_order(),
                "omega_node_actions": omega
                    .iter()
                    .map(|o| omega_action_on_nodes(o))
                    .collect::<Vec<_>>(),
            });
            Ok(emit_json(&v))
        }
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!("datum: {}\n", datum.name()));
            out.push_str(&format!(
                "nodes: {}\n",
                nodes
                    .iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
            out.push_str("bonds:\n");
            for (i, j, m) in &bonds {
                out.push_str(&format!("  m({i},{j}) = {m}\n"));
            }
            out.push_str(&format!("omega order: {}\n", datum.omega_order()));
            out.push_str("omega node actions:\n");
            for (k, o) in omega.iter().enumerate() {
                out.push_str(&format!(
                    "  w{k}: {}\n",
                    int_list_str(&omega_action_on_nodes(o))
                ));
            }
            Ok(out)
        }
    }
}

pub fn classes(spec: &str, search_length: u64, format: Format) -> Result<String, CliError> {
    let datum = schema::load_datum(spec)?;
    let enumeration = enumerate_finite_order_classes(&datum, search_length)?;
    match format {
        Format::Json => {
            let v = json!({
                "datum": datum.name(),
                "search_length": enumeration.search_length,
                "classes": enumeration
                    .classes
                    .iter()
                    .enumerate()
                    .map(|(i, c)| json!({
                        "index": i,
                        "order": c.order,
                        "anchor_h": c.anchor_h.iter().collect::<Vec<_>>(),
                        "anchor_word": c.anchor_w.reduced_word().0,
                        "min_word": c.min_rep_word,
                        "invariant": c
                            .linear_class_invariant
                            .iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>(),
                        "num_anchors": c.anchors.len(),
                    }))
                    .collect::<Vec<_>>(),
                "unresolved_pairs": enumeration.unresolved_pairs,
            });
            Ok(emit_json(&v))
        }
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!("datum: {}\n", datum.name()));
            out.push_str(&format!("search length: {}\n", enumeration.search_length));
            out.push_str(&format!("classes: {}\n", enumeration.classes.len()));
            let mut rows = vec![vec![
                "idx".to_string(),
                "order".to_string(),
                "anchor H".to_string(),
                "anchor word".to_string(),
                "min word".to_string(),
                "invariant".to_string(),
                "anchors".to_string(),
            ]];
            for (i, c) in enumeration.classes.iter().enumerate() {
                rows.push(vec![
                    i.to_string(),
                    c.order.to_string(),
                    node_set_str(&c.anchor_h),
                    word_str(&c.anchor_w.reduced_word().0),
                    word_str(&c.min_rep_word),
                    int_list_str(&c.linear_class_invariant),
                    c.anchors.len().to_string(),
                ]);
            }
            out.push_str(&table(&rows));
            if enumeration.unresolved_pairs.is_empty() {
                out.push_str("unresolved pairs: none\n");
            } else {
                out.push_str("unresolved pairs:\n");
                for (a, b) in &enumeration.unresolved_pairs {
                    out.push_str(&format!("  {a} ? {b}\n"));
                }
            }
            Ok(out)
        }
    }
}

fn chartable_output(
    group: &FiniteGroupTable,
    ct: &CharacterTable,
    format: Format,
) -> String {
    match format {
        Format::Json => {
            let v = json!({
                "order": group.order(),
                "classes": ct
                    .classes
                    .iter()
                    .enumerate()
                    .map(|(i, &(rep, size))| json!({
                        "index": i,
                        "size": size,
                        "element_order": group.element_order(rep),
                        "rep": group.label(rep),
                    }))
                    .collect::<Vec<_>>(),
                "irreducibles": (0..ct.irreducibles.len())
                    .map(|r| json!({
                        "label": ct.row_label(r),
                        "values": ct.irreducibles[r]
                            .iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>(),
                    }))
                    .collect::<Vec<_>>(),
            });
            emit_json(&v)
        }
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!("order: {}\n", group.order()));
            out.push_str("classes:\n");
            let mut rows = vec![vec![
                "idx".to_string(),
                "size".to_string(),
                "order".to_string(),
                "rep".to_string(),
            ]];
            for (i, &(rep, size)) in ct.classes.iter().enumerate() {
                rows.push(vec![
                    format!("c{i}"),
                    size.to_string(),
                    group.element_order(rep).to_string(),
                    group.label(rep),
                ]);
            }
            out.push_str(&table(&rows));
            out.push_str("irreducibles:\n");
            let mut rows = vec![std::iter::once(String::new())
                .chain((0..ct.num_classes()).map(|i| format!("c{i}")))
                .collect::<Vec<_>>()];
            for r in 0..ct.irreducibles.len() {
                rows.push(
                    std::iter::once(ct.row_label(r))
                        .chain(ct.irreducibles[r].iter().map(|x| x.to_string()))
                        .collect(),
                );
            }
            out.push_str(&table(&rows));
            out
        }
    }
}

pub fn chartable(group_path: &Path, format: Format) -> Result<String, CliError> {
    let group = schema::load_group(group_path)?;
    let ct = weylchar_core::groups::character_table(&group)?;
    Ok(chartable_output(&group, &ct, format))
}

pub fn fourier(group_path: &Path, format: Format) -> Result<String, CliError> {
    let group = schema::load_group(group_path)?;
    let m = build_mset(group)?;
    let fm = fourier_matrix(&m)?;
    match format {
        Format::Json => {
            let v = json!({
                "order": m.gamma.order(),
                "pairs": m
                    .pairs
                    .iter()
                    .map(|&p| json!({
                        "class": p.0,
                        "irr": p.1,
                        "label": m.pair_label(p),
                    }))
                    .collect::<Vec<_>>(),
                "entries": fm
                    .entries
                    .iter()
                    .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            });
            Ok(emit_json(&v))
        }
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!("order: {}\n", m.gamma.order()));
            out.push_str(&format!("pairs: {}\n", m.len()));
            let mut rows = vec![vec!["idx".to_string(), "pair".to_string()]];
            for (i, &p) in m.pairs.iter().enumerate() {
                rows.push(vec![i.to_string(), m.pair_label(p)]);
            }
            out.push_str(&table(&rows));
            out.push_str("matrix:\n");
            let rows: Vec<Vec<String>> = fm
                .entries
                .iter()
                .map(|row| row.iter().map(|x| x.to_string()).collect())
                .collect();
            out.push_str(&table(&rows));
            Ok(out)
        }
    }
}

pub fn tau_cmd(
    datum_spec: Option<&str>,
    rep_path: &Path,
    search_length: u64,
    format: Format,
) -> Result<String, CliError> {
    let rep = schema::load_rep(rep_path)?;
    let datum: Arc<AffineDatum> = match datum_spec {
        None => rep.datum.clone(),
        Some(spec) => {
            let d = schema::load_datum(spec)?;
            if d.name() != rep.datum.name() {
                return Err(CliError::Data(format!(
                    "representation is over datum {} but {} was requested",
                    rep.datum.name(),
                    d.name()
                )));
            }
            d
        }
    };
    let enumeration = enumerate_finite_order_classes(&datum, search_length)?;
    let values: Vec<_> = enumeration
        .classes
        .iter()
        .map(|c| tau(&rep, c))
        .collect::<Result<_, CharError>>()?;
    class_function_output(
        &datum,
        &enumeration.classes,
        &values,
        &[("rep dimension".to_string(), rep.dimension.to_string())],
        "tau",
        search_length,
        format,
    )
}

fn class_function_output(
    datum: &Arc<AffineDatum>,
    classes: &[weylchar_core::torus::FiniteOrderClass],
    values: &[weylchar_core::scalar::Cyclotomic],
    extra: &[(String, String)],
    value_name: &str,
    search_length: u64,
    format: Format,
) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("datum".into(), json!(datum.name()));
            for (k, v) in extra {
                obj.insert(k.replace(' ', "_"), json!(v));
            }
            obj.insert("search_length".into(), json!(search_length));
            let entries: Vec<Value> = classes
                .iter()
                .zip(values)
                .enumerate()
                .map(|(i, (c, x))| {
                    let mut e = serde_json::Map::new();
                    e.insert("class".into(), json!(i));
                    e.insert("order".into(), json!(c.order));
                    e.insert("min_word".into(), json!(c.min_rep_word));
                    e.insert(value_name.to_string(), json!(x.to_string()));
                    Value::Object(e)
                })
                .collect();
            obj.insert("values".into(), json!(entries));
            Ok(emit_json(&Value::Object(obj)))
        }
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!("datum: {}\n", datum.name()));
            for (k, v) in extra {
                out.push_str(&format!("{k}: {v}\n"));
            }
            out.push_str(&format!("search length: {search_length}\n"));
            let mut rows = vec![vec![
                "class".to_string(),
                "order".to_string(),
                "min word".to_string(),
                value_name.to_string(),
            ]];
            for (i, (c, x)) in classes.iter().zip(values).enumerate() {
                rows.push(vec![
                    i.to_string(),
                    c.order.to_string(),
                    word_str(&c.min_rep_word),
                    x.to_string(),
                ]);
            }
            out.push_str(&table(&rows));
            Ok(out)
        }
    }
}

pub fn phi(
    gamma_path: &Path,
    assignment_path: &Path,
    v_spec: &str,
    search_length: u64,
    format: Format,
) -> Result<String, CliError> {
    let gamma = schema::load_group(gamma_path)?;
    let mset: MSet = build_mset(gamma)?;
    let v_pair = schema::parse_pair_spec(v_spec, &mset)?;
    let v_label = mset.pair_label(v_pair);
    let (datum, sa) = schema::load_assignment(assignment_path, mset)?;
    let enumeration = enumerate_finite_order_classes(&datum, search_length)?;
    let cf = phi_fourier(&sa, v_pair, &enumeration.classes)?;
    class_function_output(
        &datum,
        &cf.classes,
        &cf.values,
        &[
            ("gamma order".to_string(), sa.mset.gamma.order().to_string()),
            ("v".to_string(), v_label),
            (
                "m'".to_string(),
                sa.mprime
                    .iter()
                    .map(|&p| sa.mset.pair_label(p))
                    .collect::<Vec<_>>()
                    .join(" "),
            ),
        ],
        "phi",
        search_length,
        format,
    )
}

pub fn vanishing(
    datum_spec: &str,
    j_spec: &str,
    h_spec: &str,
    format: Format,
) -> Result<String, CliError> {
    let datum = schema::load_datum(datum_spec)?;
    let j: NodeSubset = schema::parse_node_set(j_spec).map_err(CliError::Usage)?;
    let h: NodeSubset = schema::parse_node_set(h_spec).map_err(CliError::Usage)?;
    let nodes: NodeSubset = datum.nodes().into_iter().collect();
    for &set in &[&j, &h] {
        if !set.is_subset(&nodes) {
            return Err(CliError::Usage(format!(
                "node set {} is not a subset of the datum nodes {}",
                node_set_str(set),
                node_set_str(&nodes)
            )));
        }
    }
    let report = vanishing_test(&j, &h, &datum);
    let omega = omega_group(&datum);
    let witness_idx = |w: &WeylElement| omega.iter().position(|o| o == w).unwrap_or(0);
    match format {
        Format::Json => {
            let v = json!({
                "datum": datum.name(),
                "J": j.iter().collect::<Vec<_>>(),
                "H": h.iter().collect::<Vec<_>>(),
                "vanishes": report.vanishes,
                "witnesses": report
                    .witnesses
                    .iter()
                    .map(|(w, pulled)| json!({
                        "omega": witness_idx(w),
                        "pulled_h": pulled.iter().collect::<Vec<_>>(),
                    }))
                    .collect::<Vec<_>>(),
            });
            Ok(emit_json(&v))
        }
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!("datum: {}\n", datum.name()));
            out.push_str(&format!("J: {}\n", node_set_str(&j)));
            out.push_str(&format!("H: {}\n", node_set_str(&h)));
            out.push_str(&format!("vanishes: {}\n", report.vanishes));
            if report.witnesses.is_empty() {
                out.push_str("witnesses: none\n");
            } else {
                out.push_str("witnesses:\n");
                for (w, pulled) in &report.witnesses {
                    out.push_str(&format!(
                        "  w{}: omega^-1(H) = {}\n",
                        witness_idx(w),
                        node_set_str(pulled)
                    ));
                }
            }
            Ok(out)
        }
    }
}

pub fn multiplicity(
    family_path: &Path,
    e_spec: &str,
    w_spec: &str,
    format: Format,
) -> Result<String, CliError> {
    let (datum, h, fd) = schema::load_family(family_path)?;
    let mut es = Vec::new();
    for part in e_spec.split(',') {
        let part = part.trim();
        let e: usize = part
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid irreducible index {part:?}")))?;
        es.push(e);
    }
    // the word is read literally, left to right; elements of W_H only
    let mut word: Vec<usize> = Vec::new();
    if w_spec.trim() != "e" {
        for part in w_spec.split(',') {
            let part = part.trim();
            let i: usize = part
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid node index {part:?}")))?;
            word.push(i);
        }
    }
    let mut w = WeylElement::identity(&datum);
    for &i in &word {
        if !h.contains(&i) {
            return Err(CliError::Usage(format!(
                "node {i} is not in H = {}",
                node_set_str(&h)
            )));
        }
        w = w.group_op(&WeylElement::simple_reflection(&datum, i)?)?;
    }
    let per_e: Vec<_> = es
        .iter()
        .map(|&e| weylchar_core::fourier::multiplicity_in_rw(e, &w, &fd))
        .collect::<Result<_, _>>()?;
    let total = phi_multiplicity(&es, &w, &fd)?;
    match format {
        Format::Json => {
            let v = json!({
                "datum": datum.name(),
                "H": h.iter().collect::<Vec<_>>(),
                "w": element_str(&w),
                "terms": es
                    .iter()
                    .zip(&per_e)
                    .map(|(&e, m)| json!({
                        "E": e,
                        "label": fd.weyl_table.row_label(e),
                        "multiplicity": m.to_string(),
                    }))
                    .collect::<Vec<_>>(),
                "total": total.to_string(),
            });
            Ok(emit_json(&v))
        }
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!("datum: {}\n", datum.name()));
            out.push_str(&format!("H: {}\n", node_set_str(&h)));
            out.push_str(&format!("w: {}\n", element_str(&w)));
            let mut rows = vec![vec![
                "E".to_string(),
                "label".to_string(),
                "multiplicity".to_string(),
            ]];
            for (&e, m) in es.iter().zip(&per_e) {
                rows.push(vec![
                    e.to_string(),
                    fd.weyl_table.row_label(e),
                    m.to_string(),
                ]);
            }
            out.push_str(&table(&rows));
            out.push_str(&format!("total: {total}\n"));
            Ok(out)
        }
    }
}

const EMBEDDED_S3: &str = include_str!("../data/s3.json");
const EMBEDDED_ROWS: &str = include_str!("../data/g2_expected_rows.json");

pub fn verify_g2_cmd(
    group_path: Option<&Path>,
    rows_path: Option<&Path>,
    format: Format,
) -> Result<String, CliError> {
    let group = match group_path {
        Some(p) => schema::load_group(p)?,
        None => schema::parse_group_str(EMBEDDED_S3, "embedded s3 group")?,
    };
    let expected: ExpectedRows = match rows_path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
            schema::parse_expected_rows(&text, &p.display().to_string())?
        }
        None => schema::parse_expected_rows(EMBEDDED_ROWS, "embedded expected rows")?,
    };
    let m = build_mset(group)?;
    let report = verify_g2(&m, &expected)?;
    match format {
        Format::Json => {
            let v = json!({
                "solutions": report.solutions,
                "assignment": G2_LABELS
                    .iter()
                    .map(|&l| json!({
                        "label": l,
                        "pair": m.pair_label(report.assignment[l]),
                    }))
                    .collect::<Vec<_>>(),
                "mprime": report
                    .mprime
                    .iter()
                    .map(|&p| m.pair_label(p))
                    .collect::<Vec<_>>(),
                "rows": G2_LABELS
                    .iter()
                    .map(|&l| json!({
                        "label": l,
                        "coefficients": expected[l]
                            .iter()
                            .map(|r| r.to_string())
                            .collect::<Vec<_>>(),
                    }))
                    .collect::<Vec<_>>(),
            });
            Ok(emit_json(&v))
        }
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!("pairs: {}\n", m.len()));
            out.push_str(&format!(
                "solutions: {} (unique up to the S''/S''' swap)\n",
                report.solutions
            ));
            out.push_str(&format!(
                "m': {}\n",
                report
                    .mprime
                    .iter()
                    .map(|&p| m.pair_label(p))
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
            out.push_str("matched rows:\n");
            let mut rows = vec![vec![
                "label".to_string(),
                "pair".to_string(),
                "coefficients".to_string(),
            ]];
            for &l in &G2_LABELS {
                rows.push(vec![
                    l.to_string(),
                    m.pair_label(report.assignment[l]),
                    expected[l]
                        .iter()
                        .map(|r| r.to_string())
                        .collect::<Vec<_>>()
                        .join("  "),
                ]);
            }
            out.push_str(&table(&rows));
            out.push_str("all 8 rows matched exactly\n");
            Ok(out)
        }
    }
}

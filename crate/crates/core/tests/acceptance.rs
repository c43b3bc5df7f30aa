//! Acceptance gate: one test per criterion, each printing a pass line.
//! Criterion 10 (CLI golden stability) lives in the CLI crate's tests.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::sync::Arc;

use weylchar_core::charformula::{
    g2_expected_rows, phi_fourier, tau, vanishing_test, verify_g2, RepData, SphericalAssignment,
};
use weylchar_core::coxeter::{
    elements_up_to_length, good_coset_reps, min_double_coset_rep, normalizes_wj,
    parabolic_elements, parabolic_is_finite, AffineDatum, NodeSubset, WeylElement,
};
use weylchar_core::fourier::{build_mset, fourier_entry, fourier_matrix};
use weylchar_core::groups::{
    character_table, character_table_by_search, samples, FiniteGroupTable,
};
use weylchar_core::scalar::{Cyclotomic, Int};
use weylchar_core::torus::{enumerate_finite_order_classes, is_elliptic};

fn data() -> Vec<Arc<AffineDatum>> {
    ["a1aff", "a2aff", "c2aff", "g2aff"]
        .iter()
        .map(|n| AffineDatum::builtin(n).unwrap())
        .collect()
}

fn proper_subsets(datum: &AffineDatum) -> Vec<NodeSubset> {
    let nodes = datum.nodes();
    let mut subsets: Vec<NodeSubset> = vec![BTreeSet::new()];
    for &i in &nodes {
        let mut more: Vec<NodeSubset> = subsets
            .iter()
            .map(|s| {
                let mut t = s.clone();
                t.insert(i);
                t
            })
            .collect();
        subsets.append(&mut more);
    }
    subsets.retain(|s| s.len() < nodes.len());
    subsets.sort();
    subsets
}

#[test]
fn criterion_01_g2_golden_rows() {
    let start = std::time::Instant::now();
    let m = build_mset(samples::symmetric_3()).unwrap();
    let expected = g2_expected_rows();
    let report = verify_g2(&m, &expected).unwrap();
    // re-check every row of the found assignment against the table
    for (label, &pair) in &report.assignment {
        let row: Vec<Cyclotomic> = report
            .mprime
            .iter()
            .map(|&q| fourier_entry(&m, pair, q).unwrap())
            .collect();
        let want: Vec<Cyclotomic> = expected[label]
            .iter()
            .map(|r| Cyclotomic::from_rational(r.clone()))
            .collect();
        assert_eq!(row, want, "row mismatch at {label}");
    }
    assert!(start.elapsed().as_secs() < 1, "criterion 1 exceeded 1 s");
    println!("criterion 1 (golden coefficient rows): pass");
}

#[test]
fn criterion_02_s2_s3_equal_and_unique() {
    let m = build_mset(samples::symmetric_3()).unwrap();
    let report = verify_g2(&m, &g2_expected_rows()).unwrap();
    let row = |pair| -> Vec<Cyclotomic> {
        report
            .mprime
            .iter()
            .map(|&q| fourier_entry(&m, pair, q).unwrap())
            .collect()
    };
    assert_eq!(
        row(report.assignment["S''"]),
        row(report.assignment["S'''"]),
        "phi rows of S'' and S''' must coincide"
    );
    assert_eq!(report.solutions, 2, "assignment unique up to the S''/S''' swap");
    println!("criterion 2 (S''/S''' coincidence and uniqueness): pass");
}

#[test]
fn criterion_03_fourier_matrix_properties() {
    let start = std::time::Instant::now();
    for gamma in [
        samples::cyclic(1),
        samples::cyclic(2),
        samples::cyclic(3),
        samples::symmetric_3(),
    ] {
        let m = build_mset(gamma).unwrap();
        let fm = fourier_matrix(&m).unwrap();
        let n = m.len();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(fm.entries[i][j], fm.entries[j][i].conjugate());
            }
        }
        // M . adjoint(M) = I
        for i in 0..n {
            for j in 0..n {
                let mut acc = Cyclotomic::zero();
                for k in 0..n {
                    acc = &acc + &(&fm.entries[i][k] * &fm.entries[j][k].conjugate());
                }
                assert_eq!(acc, Cyclotomic::from_integer((i == j) as i64));
            }
        }
    }
    assert!(start.elapsed().as_secs() < 1, "criterion 3 exceeded 1 s");
    println!("criterion 3 (Fourier matrix symmetry and unitarity): pass");
}

#[test]
fn criterion_04_character_tables() {
    let start = std::time::Instant::now();
    let corpus: Vec<(&str, FiniteGroupTable)> = vec![
        ("z2", samples::cyclic(2)),
        ("z3", samples::cyclic(3)),
        ("z4", samples::cyclic(4)),
        ("s3", samples::symmetric_3()),
        ("d4", samples::dihedral(4)),
        ("q8", samples::quaternion_8()),
        ("a4", samples::alternating_4()),
        ("d6", samples::dihedral(6)),
        ("s4", samples::symmetric_4()),
    ];
    for (name, g) in &corpus {
        let dixon = character_table(g).unwrap();
        let oracle = character_table_by_search(g).unwrap();
        assert_eq!(
            dixon.irreducibles, oracle.irreducibles,
            "Dixon and search oracle disagree on {name}"
        );
    }
    // all parabolic Weyl tables are rational-integer valued
    for d in data() {
        for h in proper_subsets(&d) {
            if !parabolic_is_finite(&d, &h) {
                continue;
            }
            let elems = parabolic_elements(&d, &h).unwrap();
            let wg = FiniteGroupTable::from_weyl_elements(&elems).unwrap();
            let t = character_table(&wg).unwrap();
            for row in &t.irreducibles {
                for v in row {
                    assert!(
                        v.as_integer().is_some(),
                        "non-integer value in W_H table for {} {:?}",
                        d.name(),
                        h
                    );
                }
            }
        }
    }
    assert!(start.elapsed().as_secs() < 30, "criterion 4 exceeded 30 s");
    println!("criterion 4 (character tables vs oracle, integrality): pass");
}

#[test]
fn criterion_05_length_and_exchange() {
    let start = std::time::Instant::now();
    // BFS depth equals the root-counting length, per datum
    for d in data() {
        let mut depth: HashMap<WeylElement, u64> = HashMap::new();
        let id = WeylElement::identity(&d);
        depth.insert(id.clone(), 0);
        let mut frontier = vec![id];
        for dist in 1..=10u64 {
            let mut next = Vec::new();
            for e in &frontier {
                for i in d.nodes() {
                    let s = WeylElement::simple_reflection(&d, i).unwrap();
                    let f = e.group_op(&s).unwrap();
                    if !depth.contains_key(&f) {
                        depth.insert(f.clone(), dist);
                        next.push(f);
                    }
                }
            }
            frontier = next;
        }
        for (e, &dist) in &depth {
            assert_eq!(e.length(), dist, "length mismatch in {}", d.name());
        }
    }
    // exchange condition on random words
    let mut state: u64 = 0x243f6a8885a308d3;
    let mut next = |m: u64| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state % m
    };
    let all = data();
    for trial in 0..10_000 {
        let d = &all[(trial % all.len()) as usize];
        let n = d.num_nodes() as u64;
        let len = 1 + next(10) as usize;
        let word: Vec<usize> = (0..len).map(|_| next(n) as usize).collect();
        let gens: Vec<WeylElement> = d
            .nodes()
            .into_iter()
            .map(|i| WeylElement::simple_reflection(d, i).unwrap())
            .collect();
        let mut w = WeylElement::identity(d);
        for &i in &word {
            w = w.group_op(&gens[i]).unwrap();
        }
        let s = next(n) as usize;
        let sw = gens[s].group_op(&w).unwrap();
        if sw.length() <= w.length() {
            // exchange: s w = s_{i1} .. omit j .. s_{ik} for some j
            let found = (0..word.len()).any(|j| {
                let mut prod = WeylElement::identity(d);
                for (k, &i) in word.iter().enumerate() {
                    if k != j {
                        prod = prod.group_op(&gens[i]).unwrap();
                    }
                }
                prod == sw
            });
            assert!(found, "exchange condition failed in {}", d.name());
        }
    }
    assert!(start.elapsed().as_secs() < 60, "criterion 5 exceeded 60 s");
    println!("criterion 5 (length agreement and exchange condition): pass");
}

#[test]
fn criterion_06_good_cosets() {
    let d = AffineDatum::builtin("g2aff").unwrap();
    let bound = 12u64;
    for j in proper_subsets(&d) {
        let reps = good_coset_reps(&d, &j, bound).unwrap();
        for rep in &reps {
            assert!(normalizes_wj(rep, &j));
            // closed under inverse
            let inv_rep = min_double_coset_rep(&rep.invert(), &j);
            assert!(reps.contains(&inv_rep), "inverse of a good rep is good");
        }
        // each good double coset within the bound has a unique
        // minimal-length element
        let mut cosets: HashMap<WeylElement, Vec<WeylElement>> = HashMap::new();
        for e in elements_up_to_length(&d, bound, false) {
            cosets
                .entry(min_double_coset_rep(&e, &j))
                .or_default()
                .push(e);
        }
        for (rep, members) in &cosets {
            if !normalizes_wj(rep, &j) {
                continue;
            }
            let min_len = members.iter().map(|e| e.length()).min().unwrap();
            let count = members.iter().filter(|e| e.length() == min_len).count();
            assert_eq!(count, 1, "good coset must have one minimal element");
        }
    }
    println!("criterion 6 (good double coset combinatorics): pass");
}

#[test]
fn criterion_07_integrality() {
    let d = AffineDatum::builtin("g2aff").unwrap();
    let enumeration = enumerate_finite_order_classes(&d, 12).unwrap();
    let reps = [
        RepData::trivial(&d),
        RepData::sign(&d),
        RepData::reflection_pullback(&d),
    ];
    for rep in &reps {
        for c in &enumeration.classes {
            let v = tau(rep, c).unwrap();
            assert!(v.as_integer().is_some());
        }
    }
    // trivial Gamma collapses phi to tau
    let mset = build_mset(samples::cyclic(1)).unwrap();
    let sa = SphericalAssignment {
        mset,
        mprime: vec![(0, 0)],
        reps: std::collections::BTreeMap::from([(
            (0usize, 0usize),
            RepData::reflection_pullback(&d),
        )]),
    };
    let phi = phi_fourier(&sa, (0, 0), &enumeration.classes).unwrap();
    for (c, v) in phi.classes.iter().zip(&phi.values) {
        assert_eq!(*v, tau(&RepData::reflection_pullback(&d), c).unwrap());
    }
    println!("criterion 7 (integrality of tau and phi): pass");
}

#[test]
fn criterion_08_class_stability() {
    let start = std::time::Instant::now();
    let d = AffineDatum::builtin("g2aff").unwrap();
    let a = enumerate_finite_order_classes(&d, 8).unwrap();
    let b = enumerate_finite_order_classes(&d, 16).unwrap();
    let key = |cs: &[weylchar_core::torus::FiniteOrderClass]| -> Vec<(u64, Vec<Int>, Vec<usize>)> {
        cs.iter()
            .map(|c| (c.order, c.linear_class_invariant.clone(), c.min_rep_word.clone()))
            .collect()
    };
    assert_eq!(key(&a.classes), key(&b.classes), "class lists must be stable");
    for c in &a.classes {
        assert!(is_elliptic(&c.anchor_w, &c.anchor_h).unwrap());
    }
    assert!(start.elapsed().as_secs() < 120, "criterion 8 exceeded 120 s");
    println!("criterion 8 (finite-order class stability): pass");
}

#[test]
fn criterion_09_vanishing() {
    let g2 = AffineDatum::builtin("g2aff").unwrap();
    let subsets = proper_subsets(&g2);
    assert_eq!(subsets.len(), 7);
    for j in &subsets {
        for h in &subsets {
            let report = vanishing_test(j, h, &g2);
            assert_eq!(report.vanishes, !j.is_subset(h), "G2 has trivial Omega");
        }
    }
    let a2 = AffineDatum::builtin("a2aff").unwrap();
    let a2_subsets = proper_subsets(&a2);
    for j in &a2_subsets {
        for h in &a2_subsets {
            let report = vanishing_test(j, h, &a2);
            // Omega = Z/3 rotates the triangle: any singleton covers
            // any singleton
            let expected_witness = weylchar_core::coxeter::omega_group(&a2).iter().any(|o| {
                let action = weylchar_core::coxeter::omega_action_on_nodes(o);
                let image: NodeSubset = h.iter().map(|&i| action[i]).collect();
                j.is_subset(&image)
            });
            assert_eq!(!report.vanishes, expected_witness);
            assert_eq!(!report.witnesses.is_empty(), expected_witness);
        }
    }
    println!("criterion 9 (parahoric vanishing with Omega reduction): pass");
}

//! Finite-order conjugacy classes in W' and their elliptic anchors.
//!
//! Each class is anchored at a pair (H, w): a proper node subset H with
//! finite parabolic W_H and an element w elliptic there. Classes found
//! in different parabolics are fused by a bounded conjugator search
//! after an invariant pre-screen; the verdict provenance is kept,
//! because a failed bounded search is not a proof of non-conjugacy.

use std::collections::BTreeSet;

use num::Zero;

use crate::coxeter::{
    elements_up_to_length, in_parabolic, parabolic_elements, AffineDatum, CoxeterError,
    NodeSubset, WeylElement,
};
use crate::linalg::{self, Rational};
use crate::par;
use crate::scalar::Int;
use std::sync::Arc;

/// A W'-conjugacy class of finite-order elements, with the anchors
/// that were fused into it.
#[derive(Clone, Debug)]
pub struct FiniteOrderClass {
    pub anchor_h: NodeSubset,
    pub anchor_w: WeylElement,
    pub order: u64,
    /// characteristic polynomial of the finite part, low degree first
    pub linear_class_invariant: Vec<Int>,
    /// lexicographically minimal reduced word over stored representatives
    pub min_rep_word: Vec<usize>,
    /// all anchors (H, w) proven conjugate into this class
    pub anchors: Vec<(NodeSubset, WeylElement)>,
}

/// Outcome of a bounded conjugacy test in W'.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjugacyVerdict {
    /// explicit conjugator g with g w1 g^-1 = w2
    Proven(WeylElement),
    /// invariants differ; the elements are not conjugate
    ProvenDistinct,
    /// no conjugator up to the bound; not a proof of non-conjugacy
    NotFoundWithinBound,
}

/// Result of the full enumeration, keeping the honest part of the
/// fusion search: pairs of reported classes whose invariants agree but
/// for which no conjugator was found within the bound.
#[derive(Clone, Debug)]
pub struct ClassEnumeration {
    pub classes: Vec<FiniteOrderClass>,
    /// indices into `classes` of pairs left unresolved by the search
    pub unresolved_pairs: Vec<(usize, usize)>,
    pub search_length: u64,
}

/// gradient directions of the simple affine roots for j in H, in
/// simple-root coordinates; node 0 contributes -theta
fn gradient_columns(datum: &AffineDatum, h: &NodeSubset) -> Vec<Vec<Rational>> {
    let r = datum.rank();
    h.iter()
        .map(|&j| {
            if j == 0 {
                datum
                    .highest_root()
                    .iter()
                    .map(|&x| Rational::from(Int::from(-x)))
                    .collect()
            } else {
                (0..r)
                    .map(|i| Rational::from(Int::from((i == j - 1) as i64)))
                    .collect()
            }
        })
        .collect()
}

/// Tests whether w, an element of W_H, has zero fixed space on the
/// span of the gradients of the simple affine roots indexed by H.
pub fn is_elliptic(w: &WeylElement, h: &NodeSubset) -> Result<bool, CoxeterError> {
    if !in_parabolic(w, h) {
        return Err(CoxeterError::NotInParabolic);
    }
    if h.is_empty() {
        return Ok(true);
    }
    let datum = w.datum();
    let r = datum.rank();
    let cols = gradient_columns(datum, h);
    let fmat = w.finite_part_matrix();
    // restriction M of the finite part: f * b_j = sum_m M[m][j] b_m
    let d = cols.len();
    let mut m = vec![vec![Rational::zero(); d]; d];
    for (j, b) in cols.iter().enumerate() {
        let image: Vec<Rational> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|k| Rational::from(Int::from(fmat[i][k])) * &b[k])
                    .sum()
            })
            .collect();
        let coeffs = linalg::solve_columns(&cols, &image, r)
            .expect("parabolic elements preserve the span of their root gradients");
        for i in 0..d {
            m[i][j] = coeffs[i].clone();
        }
    }
    // elliptic iff det(1 - M) != 0
    let shifted: Vec<Vec<Rational>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let delta = Rational::from(Int::from((i == j) as i64));
                    delta - &m[i][j]
                })
                .collect()
        })
        .collect();
    Ok(!linalg::det(&shifted).is_zero())
}

/// Conjugacy classes of the finite parabolic W_H; each class is sorted
/// by the element sort key, classes ordered by their representative.
pub fn parabolic_conjugacy_classes(
    datum: &Arc<AffineDatum>,
    h: &NodeSubset,
) -> Result<Vec<Vec<WeylElement>>, CoxeterError> {
    let elems = parabolic_elements(datum, h)?;
    let mut remaining: Vec<WeylElement> = elems.clone();
    let mut classes = Vec::new();
    while let Some(x) = remaining.first().cloned() {
        let mut class: Vec<WeylElement> = Vec::new();
        for g in &elems {
            let conj = g
                .group_op(&x)
                .unwrap()
                .group_op(&g.invert())
                .unwrap();
            if !class.contains(&conj) {
                class.push(conj);
            }
        }
        class.sort_by_key(|e| e.sort_key());
        remaining.retain(|e| !class.contains(e));
        classes.push(class);
    }
    classes.sort_by_key(|c| c[0].sort_key());
    Ok(classes)
}

/// Elliptic classes of W_H as (representative, class size).
pub fn elliptic_classes(
    datum: &Arc<AffineDatum>,
    h: &NodeSubset,
) -> Result<Vec<(WeylElement, usize)>, CoxeterError> {
    let classes = parabolic_conjugacy_classes(datum, h)?;
    let mut out = Vec::new();
    for class in classes {
        if is_elliptic(&class[0], h)? {
            let size = class.len();
            out.push((class.into_iter().next().unwrap(), size));
        }
    }
    Ok(out)
}

/// Bounded conjugacy test in W': searches over conjugators of length
/// at most `search_length` after pre-screening by element order and by
/// W_fin-conjugacy of the finite parts.
pub fn conjugate_in_wprime(
    w1: &WeylElement,
    w2: &WeylElement,
    search_length: u64,
) -> Result<ConjugacyVerdict, CoxeterError> {
    let o1 = w1.order().ok_or(CoxeterError::InfiniteOrder)?;
    let o2 = w2.order().ok_or(CoxeterError::InfiniteOrder)?;
    if o1 != o2 {
        return Ok(ConjugacyVerdict::ProvenDistinct);
    }
    if !finite_parts_conjugate(w1, w2) {
        return Ok(ConjugacyVerdict::ProvenDistinct);
    }
    if w1 == w2 {
        return Ok(ConjugacyVerdict::Proven(WeylElement::identity(w1.datum())));
    }
    let candidates = elements_up_to_length(w1.datum(), search_length, false);
    let hits = par::map_collect(candidates, |g| {
        let conj = g.group_op(w1).unwrap().group_op(&g.invert()).unwrap();
        if &conj == w2 { Some(g) } else { None }
    });
    match hits.into_iter().flatten().next() {
        Some(g) => Ok(ConjugacyVerdict::Proven(g)),
        None => Ok(ConjugacyVerdict::NotFoundWithinBound),
    }
}

/// W_fin-conjugacy of the finite parts; a valid pre-screen because the
/// projection W' -> W_fin sends conjugacy to conjugacy.
fn finite_parts_conjugate(w1: &WeylElement, w2: &WeylElement) -> bool {
    let f1 = w1.finite_part_matrix();
    let f2 = w2.finite_part_matrix();
    if linalg::char_poly(f1) != linalg::char_poly(f2) {
        return false;
    }
    let full: NodeSubset = (1..=w1.datum().rank()).collect();
    let wfin = parabolic_elements(w1.datum(), &full).expect("finite Weyl group");
    wfin.iter().any(|g| {
        let gm = g.finite_part_matrix();
        // g f1 g^-1 == f2  <=>  g f1 == f2 g
        let r = gm.len();
        (0..r).all(|i| {
            (0..r).all(|j| {
                let lhs: i64 = (0..r).map(|k| gm[i][k] * f1[k][j]).sum();
                let rhs: i64 = (0..r).map(|k| f2[i][k] * gm[k][j]).sum();
                lhs == rhs
            })
        })
    })
}

fn word_of(e: &WeylElement) -> Vec<usize> {
    e.reduced_word().0
}

/// All finite-order classes seen through their elliptic anchors: one
/// entry per fused class, deterministically ordered.
pub fn enumerate_finite_order_classes(
    datum: &Arc<AffineDatum>,
    search_length: u64,
) -> Result<ClassEnumeration, CoxeterError> {
    // all proper node subsets with finite parabolic, in subset order
    let nodes: Vec<usize> = datum.nodes();
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

    // anchors: (H, class members) for every elliptic parabolic class
    struct Bucket {
        anchors: Vec<(NodeSubset, WeylElement)>,
        members: Vec<WeylElement>,
        order: u64,
        invariant: Vec<Int>,
    }
    let mut buckets: Vec<Bucket> = Vec::new();
    let mut unresolved: Vec<(usize, usize)> = Vec::new();
    for h in &subsets {
        if !crate::coxeter::parabolic_is_finite(datum, h) {
            continue;
        }
        let classes = parabolic_conjugacy_classes(datum, h)?;
        for class in classes {
            if !is_elliptic(&class[0], h)? {
                continue;
            }
            let rep = class[0].clone();
            let order = rep.order().expect("parabolic elements have finite order");
            let invariant = linalg::char_poly(rep.finite_part_matrix());
            // try to fuse into an existing bucket
            let mut fused = false;
            let mut blocked: Vec<usize> = Vec::new();
            for (bi, bucket) in buckets.iter_mut().enumerate() {
                if bucket.order != order || bucket.invariant != invariant {
                    continue;
                }
                if bucket.members.contains(&rep) {
                    bucket.anchors.push((h.clone(), rep.clone()));
                    fused = true;
                    break;
                }
                if !finite_parts_conjugate(&bucket.members[0], &rep) {
                    continue;
                }
                // bounded search: conjugate any member onto any member
                let candidates = elements_up_to_length(datum, search_length, false);
                let target = &bucket.members;
                let found = par::map_collect(candidates, |g| {
                    let conj = g.group_op(&rep).unwrap().group_op(&g.invert()).unwrap();
                    target.contains(&conj)
                })
                .into_iter()
                .any(|x| x);
                if found {
                    bucket.anchors.push((h.clone(), rep.clone()));
                    for m in &class {
                        if !bucket.members.contains(m) {
                            bucket.members.push(m.clone());
                        }
                    }
                    fused = true;
                    break;
                } else {
                    blocked.push(bi);
                }
            }
            if !fused {
                let bi = buckets.len();
                for b in blocked {
                    unresolved.push((b, bi));
                }
                buckets.push(Bucket {
                    anchors: vec![(h.clone(), rep.clone())],
                    members: class,
                    order,
                    invariant,
                });
            }
        }
    }

    let mut indexed: Vec<(usize, FiniteOrderClass)> = buckets
        .into_iter()
        .enumerate()
        .map(|(bi, b)| {
            let min_rep_word = b
                .members
                .iter()
                .map(word_of)
                .min()
                .expect("classes are nonempty");
            let (anchor_h, anchor_w) = b.anchors[0].clone();
            (
                bi,
                FiniteOrderClass {
                    anchor_h,
                    anchor_w,
                    order: b.order,
                    linear_class_invariant: b.invariant,
                    min_rep_word,
                    anchors: b.anchors,
                },
            )
        })
        .collect();
    indexed.sort_by(|(_, a), (_, b)| {
        (a.order, &a.linear_class_invariant, &a.min_rep_word).cmp(&(
            b.order,
            &b.linear_class_invariant,
            &b.min_rep_word,
        ))
    });
    let position: Vec<usize> = {
        let mut pos = vec![0usize; indexed.len()];
        for (new_i, (old_i, _)) in indexed.iter().enumerate() {
            pos[*old_i] = new_i;
        }
        pos
    };
    let mut unresolved_pairs: Vec<(usize, usize)> = unresolved
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (position[a], position[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    unresolved_pairs.sort_unstable();
    unresolved_pairs.dedup();
    let classes = indexed.into_iter().map(|(_, c)| c).collect();
    Ok(ClassEnumeration {
        classes,
        unresolved_pairs,
        search_length,
    })
}

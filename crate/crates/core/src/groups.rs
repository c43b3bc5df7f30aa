//! Finite groups by multiplication table or permutation generators:
//! conjugacy classes, centralizers, and exact character tables.
//!
//! The main character-table path is Dixon-Schneider: split the class
//! matrices over a prime field F_p with p = 1 mod exp(G), read off the
//! central characters, and lift the values to cyclotomic integers. An
//! independent exhaustive-orthogonality search for groups of order at
//! most 24 serves as the test oracle.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::coxeter::WeylElement;
use crate::scalar::{Cyclotomic, Int, Rational};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("group order {order} exceeds the configured bound {bound}")]
    BoundExceeded { order: usize, bound: usize },
    #[error("invalid permutation generators: {0}")]
    InvalidPermutations(String),
}

/// Default order bound for character table computation.
pub const CHARACTER_TABLE_BOUND: usize = 2000;

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroupTable {
    order: usize,
    mult: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteGroupTable {
    pub fn from_mult_table(
        mult: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<FiniteGroupTable, GroupError> {
        let n = mult.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        for (i, row) in mult.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::InvalidTable(format!("row {i} has wrong length")));
            }
            if row.iter().any(|&x| x >= n) {
                return Err(GroupError::InvalidTable(format!("row {i} has an out-of-range entry")));
            }
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(GroupError::InvalidTable("label list length mismatch".into()));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mult[e][x] == x && mult[x][e] == x))
            .ok_or_else(|| GroupError::InvalidTable("no identity element".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| mult[x][y] == identity && mult[y][x] == identity)
                .ok_or_else(|| GroupError::InvalidTable(format!("element {x} has no inverse")))?;
            inverse[x] = inv;
        }
        // associativity: exhaustive at small order, sampled above
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                            return Err(GroupError::InvalidTable(format!(
                                "associativity fails at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut state: u64 = 0x9e3779b97f4a7c15;
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % n as u64) as usize
            };
            for _ in 0..4096 {
                let (a, b, c) = (next(), next(), next());
                if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                    return Err(GroupError::InvalidTable(format!(
                        "associativity fails at ({a},{b},{c})"
                    )));
                }
            }
        }
        Ok(FiniteGroupTable {
            order: n,
            mult,
            identity,
            inverse,
            labels,
        })
    }

    /// Closure of a set of permutations (on 0..degree) under composition.
    pub fn from_perm_gens(
        gens: &[Vec<usize>],
        labels: Option<Vec<String>>,
    ) -> Result<FiniteGroupTable, GroupError> {
        if gens.is_empty() {
            return Err(GroupError::InvalidPermutations("no generators".into()));
        }
        let degree = gens[0].len();
        for (i, g) in gens.iter().enumerate() {
            if g.len() != degree {
                return Err(GroupError::InvalidPermutations(format!(
                    "generator {i} has wrong degree"
                )));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || seen[x] {
                    return Err(GroupError::InvalidPermutations(format!(
                        "generator {i} is not a permutation"
                    )));
                }
                seen[x] = true;
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id.clone(), 0)]);
        let mut elems: Vec<Vec<usize>> = vec![id];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                // (elems[i] then g): x -> g[elems[i][x]]
                let prod: Vec<usize> = elems[i].iter().map(|&x| g[x]).collect();
                if !index.contains_key(&prod) {
                    let idx = elems.len();
                    if idx >= 100_000 {
                        return Err(GroupError::InvalidPermutations(
                            "closure exceeds the desk-scale cap".into(),
                        ));
                    }
                    index.insert(prod.clone(), idx);
                    elems.push(prod);
                    queue.push_back(idx);
                }
            }
        }
        let n = elems.len();
        let mut mult = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let prod: Vec<usize> = elems[b].iter().map(|&x| elems[a][x]).collect();
                mult[a][b] = index[&prod];
            }
        }
        let labels = labels.or_else(|| {
            Some(elems.iter().map(|p| cycle_notation(p)).collect())
        });
        Self::from_mult_table(mult, labels)
    }

    /// Builds a table over a closed list of Weyl group elements; the
    /// index order is the input order.
    pub fn from_weyl_elements(elements: &[WeylElement]) -> Result<FiniteGroupTable, GroupError> {
        let index: HashMap<&WeylElement, usize> =
            elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elements.len();
        let mut mult = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let prod = elements[a]
                    .group_op(&elements[b])
                    .map_err(|e| GroupError::InvalidTable(e.to_string()))?;
                mult[a][b] = *index
                    .get(&prod)
                    .ok_or_else(|| GroupError::InvalidTable("element list is not closed".into()))?;
            }
        }
        let labels = elements
            .iter()
            .map(|e| {
                let (word, omega) = e.reduced_word();
                let mut s = if word.is_empty() {
                    "e".to_string()
                } else {
                    word.iter().map(|i| format!("s{i}")).collect::<Vec<_>>().join("")
                };
                if !omega.is_identity() {
                    s.push_str("*w");
                }
                s
            })
            .collect();
        Self::from_mult_table(mult, Some(labels))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mult(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => format!("g{a}"),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn element_order(&self, x: usize) -> u64 {
        let mut cur = x;
        let mut k = 1;
        while cur != self.identity {
            cur = self.mult[cur][x];
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        (0..self.order).fold(1u64, |acc, x| num::integer::lcm(acc, self.element_order(x)))
    }

    pub fn power(&self, x: usize, k: u64) -> usize {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mult[acc][x];
        }
        acc
    }

    /// Conjugacy classes; each class sorted, classes ordered by their
    /// minimal member, so the identity class comes first.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for x in 0..self.order {
            if seen[x] {
                continue;
            }
            let mut class: HashSet<usize> = HashSet::new();
            for g in 0..self.order {
                class.insert(self.mult[self.mult[g][x]][self.inverse[g]]);
            }
            let mut class: Vec<usize> = class.into_iter().collect();
            class.sort_unstable();
            for &m in &class {
                seen[m] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Centralizer of x as a subgroup with its inclusion map.
    pub fn centralizer(&self, x: usize) -> Subgroup {
        let elems: Vec<usize> = (0..self.order)
            .filter(|&g| self.mult[g][x] == self.mult[x][g])
            .collect();
        self.subgroup(elems)
    }

    /// Subgroup on a closed subset of element indices.
    pub fn subgroup(&self, elems: Vec<usize>) -> Subgroup {
        let mut parent_to_sub = vec![None; self.order];
        for (i, &g) in elems.iter().enumerate() {
            parent_to_sub[g] = Some(i);
        }
        let n = elems.len();
        let mut mult = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                mult[a][b] = parent_to_sub[self.mult[elems[a]][elems[b]]]
                    .expect("subset must be closed under multiplication");
            }
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| elems.iter().map(|&g| l[g].clone()).collect());
        Subgroup {
            table: FiniteGroupTable::from_mult_table(mult, labels)
                .expect("subgroup of a valid group is valid"),
            inclusion: elems,
            parent_to_sub,
        }
    }
}

fn cycle_notation(perm: &[usize]) -> String {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || perm[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut cur = start;
        let mut first = true;
        while !seen[cur] {
            seen[cur] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&cur.to_string());
            first = false;
            cur = perm[cur];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// A subgroup together with its embedding into the parent group.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub table: FiniteGroupTable,
    /// subgroup index -> parent index
    pub inclusion: Vec<usize>,
    /// parent index -> subgroup index, where defined
    pub parent_to_sub: Vec<Option<usize>>,
}

/// Exact character table: rows are irreducible characters in a
/// deterministic order (by dimension, then lexicographically on the
/// canonical forms of the values).
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub classes: Vec<(usize, usize)>, // (representative, size)
    pub class_of: Vec<usize>,         // element index -> class index
    pub irreducibles: Vec<Vec<Cyclotomic>>,
    /// for each prime p dividing |G|: class index -> class of p-th powers
    pub power_map: Vec<(u64, Vec<usize>)>,
}

impl CharacterTable {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn dimension(&self, row: usize) -> Int {
        let id_class = self
            .classes
            .iter()
            .position(|&(_, size)| size == 1)
            .expect("identity class exists");
        // identity class is the one containing the identity; it is the
        // first class by construction
        let _ = id_class;
        self.irreducibles[row][0]
            .as_integer()
            .expect("dimensions are integers")
    }

    pub fn value(&self, row: usize, class: usize) -> &Cyclotomic {
        &self.irreducibles[row][class]
    }

    pub fn value_at_element(&self, row: usize, element: usize) -> &Cyclotomic {
        &self.irreducibles[row][self.class_of[element]]
    }

    /// Human-readable row labels: "1" for the trivial character, "eps"
    /// for a unique nontrivial rational linear character, "r" for a
    /// unique degree-2 character, otherwise "chi<row>".
    pub fn row_label(&self, row: usize) -> String {
        let k = self.num_classes();
        let is_trivial =
            |r: usize| (0..k).all(|c| self.irreducibles[r][c] == Cyclotomic::one());
        let is_rational_linear = |r: usize| {
            self.dimension(r) == Int::from(1)
                && (0..k).all(|c| self.irreducibles[r][c].as_rational().is_some())
        };
        if is_trivial(row) {
            return "1".to_string();
        }
        if is_rational_linear(row) {
            let others = (0..self.irreducibles.len())
                .filter(|&r| r != row && !is_trivial(r) && is_rational_linear(r))
                .count();
            if others == 0 {
                return "eps".to_string();
            }
        }
        if self.dimension(row) == Int::from(2) {
            let others = (0..self.irreducibles.len())
                .filter(|&r| r != row && self.dimension(r) == Int::from(2))
                .count();
            if others == 0 {
                return "r".to_string();
            }
        }
        format!("chi{row}")
    }

    pub fn row_index_by_label(&self, label: &str) -> Option<usize> {
        (0..self.irreducibles.len()).find(|&r| self.row_label(r) == label)
    }
}

// --- modular arithmetic helpers -------------------------------------------

fn mpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn minv(a: u64, p: u64) -> u64 {
    mpow(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn primitive_root(p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| mpow(g, (p - 1) / q, p) != 1))
        .expect("prime fields have primitive roots")
}

// nullspace of an r x c matrix mod p, as a list of basis vectors
fn nullspace_mod(mat: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    if mat.is_empty() {
        return Vec::new();
    }
    let rows = mat.len();
    let cols = mat[0].len();
    let mut m: Vec<Vec<u64>> = mat.to_vec();
    let mut pivot_of_col = vec![None; cols];
    let mut rank = 0;
    for col in 0..cols {
        if let Some(r) = (rank..rows).find(|&r| m[r][col] != 0) {
            m.swap(rank, r);
            let inv = minv(m[rank][col], p);
            for x in m[rank].iter_mut() {
                *x = *x * inv % p;
            }
            for r2 in 0..rows {
                if r2 != rank && m[r2][col] != 0 {
                    let f = m[r2][col];
                    for c2 in 0..cols {
                        m[r2][c2] = (m[r2][c2] + p - f * m[rank][c2] % p) % p;
                    }
                }
            }
            pivot_of_col[col] = Some(rank);
            rank += 1;
        }
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for col in 0..cols {
            if let Some(r) = pivot_of_col[col] {
                v[col] = (p - m[r][free] % p) % p;
            }
        }
        basis.push(v);
    }
    basis
}

// expresses each target row in terms of the basis rows (mod p)
fn express_in_basis(basis: &[Vec<u64>], targets: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let d = basis.len();
    let k = basis[0].len();
    // augmented: columns are basis vectors, then all targets
    let mut m: Vec<Vec<u64>> = (0..k)
        .map(|i| {
            let mut row: Vec<u64> = basis.iter().map(|b| b[i]).collect();
            row.extend(targets.iter().map(|t| t[i]));
            row
        })
        .collect();
    let cols = d + targets.len();
    let mut rank = 0;
    let mut pivot_cols = Vec::new();
    for col in 0..d {
        if let Some(r) = (rank..k).find(|&r| m[r][col] != 0) {
            m.swap(rank, r);
            let inv = minv(m[rank][col], p);
            for x in m[rank].iter_mut() {
                *x = *x * inv % p;
            }
            for r2 in 0..k {
                if r2 != rank && m[r2][col] != 0 {
                    let f = m[r2][col];
                    for c2 in 0..cols {
                        m[r2][c2] = (m[r2][c2] + p - f * m[rank][c2] % p) % p;
                    }
                }
            }
            pivot_cols.push(col);
            rank += 1;
        }
    }
    assert_eq!(rank, d, "basis rows must be independent");
    targets
        .iter()
        .enumerate()
        .map(|(t, _)| {
            let mut coeffs = vec![0u64; d];
            for (r, &col) in pivot_cols.iter().enumerate() {
                coeffs[col] = m[r][d + t];
            }
            coeffs
        })
        .collect()
}

/// Exact character table by the Dixon-Schneider method.
pub fn character_table(g: &FiniteGroupTable) -> Result<CharacterTable, GroupError> {
    character_table_bounded(g, CHARACTER_TABLE_BOUND)
}

pub fn character_table_bounded(
    g: &FiniteGroupTable,
    bound: usize,
) -> Result<CharacterTable, GroupError> {
    let n = g.order();
    if n > bound {
        return Err(GroupError::BoundExceeded { order: n, bound });
    }
    let classes = g.conjugacy_classes();
    let k = classes.len();
    let mut class_of = vec![0usize; n];
    for (ci, class) in classes.iter().enumerate() {
        for &x in class {
            class_of[x] = ci;
        }
    }
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
    let e = g.exponent();

    // prime field: p = 1 mod exp(G), large enough to identify degrees
    let mut p = e + 1;
    while !(is_prime(p) && p > 2 * isqrt(n as u64) + 1) {
        p += e;
    }

    // class matrices: M_i[j][l] = #{(x,y) in C_i x C_j : xy = rep_l}
    let mut class_matrices: Vec<Vec<Vec<u64>>> = vec![vec![vec![0u64; k]; k]; k];
    for i in 0..k {
        let mut counts = vec![vec![0u64; k]; k];
        for &x in &classes[i] {
            for y in 0..n {
                counts[class_of[y]][class_of[g.mult(x, y)]] += 1;
            }
        }
        for j in 0..k {
            for l in 0..k {
                assert_eq!(counts[j][l] % sizes[l] as u64, 0);
                class_matrices[i][j][l] = counts[j][l] / sizes[l] as u64 % p;
            }
        }
    }

    // split the common eigenspaces down to lines
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..k)
        .map(|i| {
            let mut v = vec![0u64; k];
            v[i] = 1;
            v
        })
        .collect()];
    for mat in &class_matrices {
        let mut next = Vec::new();
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            // restriction of the class matrix to the invariant subspace
            let images: Vec<Vec<u64>> = space
                .iter()
                .map(|b| {
                    (0..k)
                        .map(|j| {
                            (0..k).fold(0u64, |acc, l| (acc + mat[j][l] * b[l]) % p)
                        })
                        .collect()
                })
                .collect();
            let restricted_cols = express_in_basis(&space, &images, p);
            let d = space.len();
            // restricted[r][c]: coefficient of basis r in image of basis c
            let restricted: Vec<Vec<u64>> = (0..d)
                .map(|r| (0..d).map(|c| restricted_cols[c][r]).collect())
                .collect();
            let mut split_total = 0;
            for lambda in 0..p {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|r| {
                        (0..d)
                            .map(|c| {
                                let sub = if r == c { lambda } else { 0 };
                                (restricted[r][c] + p - sub) % p
                            })
                            .collect()
                    })
                    .collect();
                let null = nullspace_mod(&shifted, p);
                if !null.is_empty() {
                    split_total += null.len();
                    let sub_basis: Vec<Vec<u64>> = null
                        .iter()
                        .map(|coeffs| {
                            (0..k)
                                .map(|col| {
                                    (0..d).fold(0u64, |acc, m| {
                                        (acc + coeffs[m] * space[m][col]) % p
                                    })
                                })
                                .collect()
                        })
                        .collect();
                    next.push(sub_basis);
                    if split_total == d {
                        break;
                    }
                }
            }
            assert_eq!(split_total, d, "class matrices must be diagonalizable mod p");
        }
        spaces = next;
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
    }
    assert!(spaces.iter().all(|s| s.len() == 1));

    // central character values omega_i, then degrees and lifted values
    let inv_class: Vec<usize> = reps.iter().map(|&r| class_of[g.inverse(r)]).collect();
    let theta = mpow(primitive_root(p), (p - 1) / e, p);
    // class(rep_i^j) for j in 0..e
    let power_classes: Vec<Vec<usize>> = reps
        .iter()
        .map(|&r| (0..e).map(|j| class_of[g.power(r, j)]).collect())
        .collect();

    let mut rows: Vec<Vec<Cyclotomic>> = Vec::with_capacity(k);
    for space in &spaces {
        let v = &space[0];
        let omegas: Vec<u64> = (0..k)
            .map(|i| {
                let pivot = (0..k).find(|&j| v[j] != 0).unwrap();
                let image: u64 = (0..k).fold(0u64, |acc, l| {
                    (acc + class_matrices[i][pivot][l] * v[l]) % p
                });
                image * minv(v[pivot], p) % p
            })
            .collect();
        let denom: u64 = (0..k).fold(0u64, |acc, i| {
            (acc + omegas[i] * omegas[inv_class[i]] % p * minv(sizes[i] as u64 % p, p)) % p
        });
        let d_sq = n as u64 % p * minv(denom, p) % p;
        let root = (1..p).find(|&x| x * x % p == d_sq).expect("degree exists mod p");
        let candidates: Vec<u64> = [root, p - root]
            .iter()
            .copied()
            .filter(|&x| x <= isqrt(n as u64))
            .collect();
        assert_eq!(candidates.len(), 1, "degree must be identifiable mod p");
        let degree = candidates[0];
        let chi_mod: Vec<u64> = (0..k)
            .map(|i| degree * omegas[i] % p * minv(sizes[i] as u64 % p, p) % p)
            .collect();
        // lift each value to a sum of e-th roots of unity
        let e_inv = minv(e % p, p);
        let row: Vec<Cyclotomic> = (0..k)
            .map(|i| {
                let mut value = Cyclotomic::zero();
                let mut total = 0u64;
                for t in 0..e {
                    let mut acc = 0u64;
                    for j in 0..e {
                        let exp = (t * j) % e;
                        acc = (acc + chi_mod[power_classes[i][j as usize]]
                            * mpow(theta, (e - exp) % e, p))
                            % p;
                    }
                    let m_t = acc * e_inv % p;
                    total += m_t;
                    if m_t != 0 {
                        let term = Cyclotomic::root_of_unity(e, t as i64)
                            .scale(&Rational::from(Int::from(m_t)));
                        value = &value + &term;
                    }
                }
                assert_eq!(total, degree, "eigenvalue multiplicities must sum to the degree");
                value
            })
            .collect();
        rows.push(row);
    }

    rows.sort_by(|a, b| {
        let da = a[0].as_integer().unwrap();
        let db = b[0].as_integer().unwrap();
        da.cmp(&db).then_with(|| {
            for (x, y) in a.iter().zip(b.iter()) {
                let c = x.canonical_cmp(y);
                if c != std::cmp::Ordering::Equal {
                    return c;
                }
            }
            std::cmp::Ordering::Equal
        })
    });

    // row orthogonality is a hard internal invariant
    for (r1, row1) in rows.iter().enumerate() {
        for (r2, row2) in rows.iter().enumerate() {
            let mut acc = Cyclotomic::zero();
            for i in 0..k {
                let term = &row1[i] * &row2[i].conjugate();
                acc = &acc + &term.scale(&Rational::from(Int::from(sizes[i])));
            }
            let expected = if r1 == r2 { n as i64 } else { 0 };
            assert_eq!(
                acc,
                Cyclotomic::from_integer(expected),
                "row orthogonality failed"
            );
        }
    }

    // power maps for primes dividing |G|
    let mut power_map = Vec::new();
    let mut m = n as u64;
    let mut q = 2;
    while q * q <= m {
        if m % q == 0 {
            power_map.push((q, reps.iter().map(|&r| class_of[g.power(r, q)]).collect()));
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        power_map.push((m, reps.iter().map(|&r| class_of[g.power(r, m)]).collect()));
    }

    Ok(CharacterTable {
        classes: reps.iter().copied().zip(sizes).collect(),
        class_of,
        irreducibles: rows,
        power_map,
    })
}

// --- independent oracle: exhaustive orthogonality search ------------------

/// Independent character-table computation for groups of order <= 24:
/// enumerate candidate rows whose values are sums of d roots of unity
/// of the right order, then search for a complete mutually-orthonormal
/// set containing the trivial character. Asserts the solution is
/// unique as a set of rows and returns it in the same deterministic
/// order as [`character_table`].
pub fn character_table_by_search(g: &FiniteGroupTable) -> Result<CharacterTable, GroupError> {
    let n = g.order();
    if n > 24 {
        return Err(GroupError::BoundExceeded { order: n, bound: 24 });
    }
    let classes = g.conjugacy_classes();
    let k = classes.len();
    let mut class_of = vec![0usize; n];
    for (ci, class) in classes.iter().enumerate() {
        for &x in class {
            class_of[x] = ci;
        }
    }
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
    let orders: Vec<u64> = reps.iter().map(|&r| g.element_order(r)).collect();
    let inv_class: Vec<usize> = reps.iter().map(|&r| class_of[g.inverse(r)]).collect();

    // degree multisets: nondecreasing, each degree divides n, squares sum to n
    let mut degree_vectors = Vec::new();
    let mut stack = vec![(vec![1u64], n as i64 - 1)];
    while let Some((prefix, remaining)) = stack.pop() {
        if prefix.len() == k {
            if remaining == 0 {
                degree_vectors.push(prefix);
            }
            continue;
        }
        let last = *prefix.last().unwrap();
        let mut d = last;
        while (d * d) as i64 <= remaining {
            if n as u64 % d == 0 {
                let mut next = prefix.clone();
                next.push(d);
                stack.push((next, remaining - (d * d) as i64));
            }
            d += 1;
        }
    }

    // candidate values: all sums of d o-th roots of unity
    let mut value_candidates: HashMap<(u64, u64), Vec<Cyclotomic>> = HashMap::new();
    let mut degrees_needed: HashSet<u64> = HashSet::new();
    for dv in &degree_vectors {
        degrees_needed.extend(dv.iter().copied());
    }
    for &d in &degrees_needed {
        for &o in orders.iter().collect::<HashSet<_>>() {
            let mut sums: HashSet<Cyclotomic> = HashSet::new();
            // multisets of d exponents in 0..o
            let mut stack = vec![(Cyclotomic::zero(), 0u64, 0u64)]; // (sum, count, min exponent)
            while let Some((sum, count, min_e)) = stack.pop() {
                if count == d {
                    sums.insert(sum);
                    continue;
                }
                for exp in min_e..o {
                    let next = &sum + &Cyclotomic::root_of_unity(o, exp as i64);
                    stack.push((next, count + 1, exp));
                }
            }
            value_candidates.insert((d, o), sums.into_iter().collect());
        }
    }

    // all norm-1 candidate rows of a given degree
    let rows_of_degree = |d: u64| -> Vec<Vec<Cyclotomic>> {
        let mut complete = Vec::new();
        let mut stack: Vec<Vec<Cyclotomic>> = vec![vec![Cyclotomic::from_integer(d as i64)]];
        while let Some(partial) = stack.pop() {
            let i = partial.len();
            if i == k {
                // exact norm: sum |C_i| chi_i conj(chi_i) = n
                let mut acc = Cyclotomic::zero();
                for (ci, v) in partial.iter().enumerate() {
                    let term = v * &v.conjugate();
                    acc = &acc + &term.scale(&Rational::from(Int::from(sizes[ci])));
                }
                if acc == Cyclotomic::from_integer(n as i64) {
                    complete.push(partial);
                }
                continue;
            }
            if inv_class[i] < i {
                // value forced by the inverse class
                let forced = partial[inv_class[i]].conjugate();
                let mut next = partial;
                next.push(forced);
                stack.push(next);
                continue;
            }
            for v in &value_candidates[&(d, orders[i])] {
                if inv_class[i] == i && *v != v.conjugate() {
                    continue; // self-inverse classes carry real values
                }
                let mut next = partial.clone();
                next.push(v.clone());
                stack.push(next);
            }
        }
        complete
    };

    let orthogonal = |a: &[Cyclotomic], b: &[Cyclotomic]| -> bool {
        let mut acc = Cyclotomic::zero();
        for i in 0..k {
            let term = &a[i] * &b[i].conjugate();
            acc = &acc + &term.scale(&Rational::from(Int::from(sizes[i])));
        }
        acc.is_zero()
    };

    let mut solutions: Vec<Vec<Vec<Cyclotomic>>> = Vec::new();
    for dv in &degree_vectors {
        let candidate_rows: HashMap<u64, Vec<Vec<Cyclotomic>>> = dv
            .iter()
            .collect::<HashSet<_>>()
            .into_iter()
            .map(|&d| (d, rows_of_degree(d)))
            .collect();
        let trivial: Vec<Cyclotomic> = vec![Cyclotomic::one(); k];
        // depth-first choice of one row per degree slot
        let mut chosen: Vec<Vec<Cyclotomic>> = vec![trivial];
        fn search(
            slot: usize,
            dv: &[u64],
            candidate_rows: &HashMap<u64, Vec<Vec<Cyclotomic>>>,
            chosen: &mut Vec<Vec<Cyclotomic>>,
            orthogonal: &dyn Fn(&[Cyclotomic], &[Cyclotomic]) -> bool,
            solutions: &mut Vec<Vec<Vec<Cyclotomic>>>,
        ) {
            if slot == dv.len() {
                let mut sol = chosen.clone();
                sol.sort_by(|a, b| {
                    for (x, y) in a.iter().zip(b.iter()) {
                        let c = x.canonical_cmp(y);
                        if c != std::cmp::Ordering::Equal {
                            return c;
                        }
                    }
                    std::cmp::Ordering::Equal
                });
                if !solutions.contains(&sol) {
                    solutions.push(sol);
                }
                return;
            }
            let d = dv[slot];
            for row in &candidate_rows[&d] {
                if chosen.contains(row) {
                    continue;
                }
                if chosen.iter().all(|c| orthogonal(c, row)) {
                    chosen.push(row.clone());
                    search(slot + 1, dv, candidate_rows, chosen, orthogonal, solutions);
                    chosen.pop();
                }
            }
        }
        search(1, dv, &candidate_rows, &mut chosen, &orthogonal, &mut solutions);
    }

    assert_eq!(
        solutions.len(),
        1,
        "orthogonality search must identify the character table uniquely"
    );
    let mut rows = solutions.pop().unwrap();
    rows.sort_by(|a, b| {
        let da = a[0].as_integer().unwrap();
        let db = b[0].as_integer().unwrap();
        da.cmp(&db).then_with(|| {
            for (x, y) in a.iter().zip(b.iter()) {
                let c = x.canonical_cmp(y);
                if c != std::cmp::Ordering::Equal {
                    return c;
                }
            }
            std::cmp::Ordering::Equal
        })
    });

    let mut power_map = Vec::new();
    let mut m = n as u64;
    let mut q = 2;
    while q * q <= m {
        if m % q == 0 {
            power_map.push((q, reps.iter().map(|&r| class_of[g.power(r, q)]).collect()));
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        power_map.push((m, reps.iter().map(|&r| class_of[g.power(r, m)]).collect()));
    }

    Ok(CharacterTable {
        classes: reps.iter().copied().zip(sizes).collect(),
        class_of,
        irreducibles: rows,
        power_map,
    })
}

/// Verifies that the row norm-and-orthogonality relations hold; used by
/// tests and by data-file validation.
pub fn check_orthogonality(g: &FiniteGroupTable, t: &CharacterTable) -> bool {
    let n = g.order() as i64;
    let k = t.num_classes();
    for (r1, row1) in t.irreducibles.iter().enumerate() {
        for (r2, row2) in t.irreducibles.iter().enumerate() {
            let mut acc = Cyclotomic::zero();
            for i in 0..k {
                let term = &row1[i] * &row2[i].conjugate();
                acc = &acc + &term.scale(&Rational::from(Int::from(t.classes[i].1)));
            }
            let expected = if r1 == r2 { n } else { 0 };
            if acc != Cyclotomic::from_integer(expected) {
                return false;
            }
        }
    }
    // column orthogonality: sum_chi chi(c1) conj(chi(c2)) = |Z(g_1)| delta
    for c1 in 0..k {
        for c2 in 0..k {
            let mut acc = Cyclotomic::zero();
            for row in &t.irreducibles {
                let term = &row[c1] * &row[c2].conjugate();
                acc = &acc + &term;
            }
            let expected = if c1 == c2 {
                n / t.classes[c1].1 as i64
            } else {
                0
            };
            if acc != Cyclotomic::from_integer(expected) {
                return false;
            }
        }
    }
    true
}

/// Builders for common small groups, used by tests and shipped data.
pub mod samples {
    use super::*;

    pub fn cyclic(n: usize) -> FiniteGroupTable {
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroupTable::from_mult_table(mult, None).unwrap()
    }

    pub fn symmetric_3() -> FiniteGroupTable {
        FiniteGroupTable::from_perm_gens(&[vec![1, 0, 2], vec![1, 2, 0]], None).unwrap()
    }

    pub fn symmetric_4() -> FiniteGroupTable {
        FiniteGroupTable::from_perm_gens(&[vec![1, 0, 2, 3], vec![1, 2, 3, 0]], None).unwrap()
    }

    pub fn alternating_4() -> FiniteGroupTable {
        FiniteGroupTable::from_perm_gens(&[vec![1, 0, 3, 2], vec![1, 2, 0, 3]], None).unwrap()
    }

    pub fn dihedral(m: usize) -> FiniteGroupTable {
        // order 2m: rotation as an m-cycle, one reflection
        let rot: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        let refl: Vec<usize> = (0..m).map(|i| (m - i) % m).collect();
        FiniteGroupTable::from_perm_gens(&[rot, refl], None).unwrap()
    }

    pub fn quaternion_8() -> FiniteGroupTable {
        // indices: 1, -1, i, -i, j, -j, k, -k
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
        let m: Vec<Vec<&str>> = vec![
            vec!["1", "-1", "i", "-i", "j", "-j", "k", "-k"],
            vec!["-1", "1", "-i", "i", "-j", "j", "-k", "k"],
            vec!["i", "-i", "-1", "1", "k", "-k", "-j", "j"],
            vec!["-i", "i", "1", "-1", "-k", "k", "j", "-j"],
            vec!["j", "-j", "-k", "k", "-1", "1", "i", "-i"],
            vec!["-j", "j", "k", "-k", "1", "-1", "-i", "i"],
            vec!["k", "-k", "j", "-j", "-i", "i", "-1", "1"],
            vec!["-k", "k", "-j", "j", "i", "-i", "1", "-1"],
        ];
        let idx = |s: &str| names.iter().position(|&x| x == s).unwrap();
        let mult = m
            .iter()
            .map(|row| row.iter().map(|s| idx(s)).collect())
            .collect();
        FiniteGroupTable::from_mult_table(
            mult,
            Some(names.iter().map(|s| s.to_string()).collect()),
        )
        .unwrap()
    }
}

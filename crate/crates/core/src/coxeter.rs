//! Extended affine Weyl groups W = W' x| Omega with exact element
//! arithmetic.
//!
//! Elements are stored as (coweight translation, finite part), not as
//! words: equality is structural and length is the Iwahori-Matsumoto
//! count over positive affine roots. Words and reduced expressions are
//! derived by descent stripping.
//!
//! Coordinates: finite roots live in simple-root coordinates, coweights
//! in fundamental-coweight coordinates, so the natural pairing of a
//! root `a` with a coweight `l` is the dot product of their coordinate
//! vectors.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num::{BigRational, Zero};

use crate::linalg;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("elements belong to different affine data")]
    DatumMismatch,
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("parabolic subgroup W_{{{0:?}}} is not finite")]
    InfiniteParabolic(Vec<usize>),
    #[error("node subset must be a proper subset of the node set")]
    NotProper,
    #[error("node {0} out of range")]
    NodeOutOfRange(usize),
    #[error("element is not in the parabolic subgroup W_H")]
    NotInParabolic,
    #[error("element has infinite order")]
    InfiniteOrder,
}

/// Coxeter bond label m(i, j).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Bond {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bond::Finite(m) => write!(f, "{}", m),
            Bond::Infinite => write!(f, "inf"),
        }
    }
}

/// A set of affine Dynkin nodes, used as a parahoric label J or H.
pub type NodeSubset = BTreeSet<usize>;

/// A finite Cartan datum together with its affine extension: node set
/// (0 is the affine node), bonds, highest root and the data needed for
/// the affine reflection action.
#[derive(Debug)]
pub struct AffineDatum {
    name: String,
    rank: usize,
    /// cartan[i][j] = <alpha_j, alpha_i^vee>
    cartan: Vec<Vec<i64>>,
    /// symmetrizers d_i with d_i * cartan[i][j] = d_j * cartan[j][i]
    sym: Vec<i64>,
    /// all roots, simple-root coordinates; positives first
    roots: Vec<Vec<i64>>,
    num_positive: usize,
    highest_root: Vec<i64>,
    /// <alpha_j, theta^vee> for each j: coordinates of theta^vee
    theta_covector: Vec<i64>,
    s_theta: Vec<Vec<i64>>,
    /// |P^vee / Q^vee| = |det cartan|
    omega_order: u64,
    bonds: Vec<Vec<Bond>>,
}

impl AffineDatum {
    /// Built-in affine data: `a1aff`, `a2aff`, `c2aff`, `g2aff`.
    pub fn builtin(name: &str) -> Option<Arc<AffineDatum>> {
        let cartan: Vec<Vec<i64>> = match name {
            "a1aff" => vec![vec![2]],
            "a2aff" => vec![vec![2, -1], vec![-1, 2]],
            "c2aff" => vec![vec![2, -1], vec![-2, 2]],
            "g2aff" => vec![vec![2, -1], vec![-3, 2]],
            _ => return None,
        };
        Some(AffineDatum::from_cartan(name, cartan).expect("builtin data are valid"))
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["a1aff", "a2aff", "c2aff", "g2aff"]
    }

    /// Builds the affine datum from a finite-type Cartan matrix with
    /// entries cartan[i][j] = <alpha_j, alpha_i^vee>.
    pub fn from_cartan(name: &str, cartan: Vec<Vec<i64>>) -> Result<Arc<AffineDatum>, CoxeterError> {
        let rank = cartan.len();
        if rank == 0 {
            return Err(CoxeterError::InvalidCartan("empty matrix".into()));
        }
        for (i, row) in cartan.iter().enumerate() {
            if row.len() != rank {
                return Err(CoxeterError::InvalidCartan("matrix is not square".into()));
            }
            if row[i] != 2 {
                return Err(CoxeterError::InvalidCartan(format!("diagonal entry ({i},{i}) is not 2")));
            }
            for (j, &c) in row.iter().enumerate() {
                if i != j {
                    if c > 0 {
                        return Err(CoxeterError::InvalidCartan(format!(
                            "off-diagonal entry ({i},{j}) is positive"
                        )));
                    }
                    if (c == 0) != (cartan[j][i] == 0) {
                        return Err(CoxeterError::InvalidCartan(format!(
                            "zero pattern not symmetric at ({i},{j})"
                        )));
                    }
                }
            }
        }
        if !connected(&cartan) {
            return Err(CoxeterError::InvalidCartan(
                "only irreducible (connected) Cartan matrices are supported".into(),
            ));
        }
        let sym = symmetrizer(&cartan)
            .ok_or_else(|| CoxeterError::InvalidCartan("matrix is not symmetrizable".into()))?;
        // finite type <=> symmetrized matrix positive definite
        let b = bilinear_form(&cartan, &sym);
        if !positive_definite(&b) {
            return Err(CoxeterError::InvalidCartan("matrix is not of finite type".into()));
        }

        let roots = enumerate_roots(&cartan);
        let num_positive = roots.iter().filter(|r| is_positive(r)).count();
        let mut roots_sorted: Vec<Vec<i64>> = roots.iter().filter(|r| is_positive(r)).cloned().collect();
        let negatives: Vec<Vec<i64>> = roots.iter().filter(|r| !is_positive(r)).cloned().collect();
        roots_sorted.sort();
        let mut all = roots_sorted.clone();
        all.extend(negatives);

        let highest_root = roots_sorted
            .iter()
            .max_by_key(|r| r.iter().sum::<i64>())
            .unwrap()
            .clone();

        // theta^vee coordinates: <alpha_j, theta^vee> = 2(alpha_j, theta)/(theta, theta)
        let theta_norm: BigRational = form_value(&b, &highest_root, &highest_root);
        let theta_covector: Vec<i64> = (0..rank)
            .map(|j| {
                let mut e = vec![0i64; rank];
                e[j] = 1;
                let v = form_value(&b, &e, &highest_root) * BigRational::from_integer(2.into())
                    / theta_norm.clone();
                assert!(v.is_integer(), "theta covector must be integral");
                i64::try_from(v.to_integer()).unwrap()
            })
            .collect();

        // s_theta on root coordinates: column j = e_j - <alpha_j, theta^vee> * theta
        let mut s_theta = vec![vec![0i64; rank]; rank];
        for j in 0..rank {
            for i in 0..rank {
                s_theta[i][j] = (i == j) as i64 - theta_covector[j] * highest_root[i];
            }
        }

        let omega_order = {
            let d = linalg::det(&linalg::int_to_rat(&cartan));
            let d = d.to_integer();
            u64::try_from(d.magnitude().clone()).unwrap()
        };

        // affine Cartan entries for bond labels
        let n = rank + 1;
        let mut acm = vec![vec![0i64; n]; n];
        for i in 0..rank {
            for j in 0..rank {
                acm[i + 1][j + 1] = cartan[i][j];
            }
        }
        for j in 0..rank {
            acm[0][j + 1] = -theta_covector[j];
            // <theta, alpha_j^vee> = sum_i theta_i cartan[j][i]
            acm[j + 1][0] = -(0..rank).map(|i| highest_root[i] * cartan[j][i]).sum::<i64>();
        }
        acm[0][0] = 2;
        let mut bonds = vec![vec![Bond::Finite(2); n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    bonds[i][j] = Bond::Finite(1);
                } else {
                    bonds[i][j] = match acm[i][j] * acm[j][i] {
                        0 => Bond::Finite(2),
                        1 => Bond::Finite(3),
                        2 => Bond::Finite(4),
                        3 => Bond::Finite(6),
                        _ => Bond::Infinite,
                    };
                }
            }
        }

        Ok(Arc::new(AffineDatum {
            name: name.to_string(),
            rank,
            cartan,
            sym,
            roots: all,
            num_positive,
            highest_root,
            theta_covector,
            s_theta,
            omega_order,
            bonds,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// All affine nodes, 0 being the affine one.
    pub fn nodes(&self) -> Vec<usize> {
        (0..=self.rank).collect()
    }

    pub fn num_nodes(&self) -> usize {
        self.rank + 1
    }

    pub fn bond(&self, i: usize, j: usize) -> Bond {
        self.bonds[i][j]
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn highest_root(&self) -> &[i64] {
        &self.highest_root
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.roots[..self.num_positive]
    }

    pub fn omega_order(&self) -> u64 {
        self.omega_order
    }

    fn same(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || (self.name == other.name && self.cartan == other.cartan)
    }
}

fn connected(cartan: &[Vec<i64>]) -> bool {
    let n = cartan.len();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if !seen[j] && cartan[i][j] != 0 {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn symmetrizer(cartan: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = cartan.len();
    let mut d: Vec<Option<BigRational>> = vec![None; n];
    d[0] = Some(BigRational::from_integer(1.into()));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if i != j && cartan[i][j] != 0 {
                let dj = d[i].clone().unwrap()
                    * BigRational::new(cartan[i][j].into(), cartan[j][i].into());
                match &d[j] {
                    None => {
                        d[j] = Some(dj);
                        queue.push_back(j);
                    }
                    Some(existing) => {
                        if *existing != dj {
                            return None;
                        }
                    }
                }
            }
        }
    }
    // clear denominators to smallest positive integers
    let vals: Vec<BigRational> = d.into_iter().map(|x| x.unwrap()).collect();
    let lcm_denom = vals
        .iter()
        .fold(num::BigInt::from(1), |acc, v| num::integer::lcm(acc, v.denom().clone()));
    let ints: Vec<num::BigInt> = vals
        .iter()
        .map(|v| (v * BigRational::from_integer(lcm_denom.clone())).to_integer())
        .collect();
    let g = ints
        .iter()
        .fold(num::BigInt::zero(), |acc, v| num::integer::gcd(acc, v.clone()));
    Some(
        ints.iter()
            .map(|v| i64::try_from(v / &g).unwrap())
            .collect(),
    )
}

/// B[i][j] = (alpha_i, alpha_j) up to overall scale.
fn bilinear_form(cartan: &[Vec<i64>], sym: &[i64]) -> Vec<Vec<BigRational>> {
    let n = cartan.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer((sym[i] * cartan[i][j]).into()))
                .collect()
        })
        .collect()
}

fn form_value(b: &[Vec<BigRational>], u: &[i64], v: &[i64]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, &ui) in u.iter().enumerate() {
        if ui == 0 {
            continue;
        }
        for (j, &vj) in v.iter().enumerate() {
            if vj != 0 {
                acc += &b[i][j] * BigRational::from_integer((ui * vj).into());
            }
        }
    }
    acc
}

fn positive_definite(b: &[Vec<BigRational>]) -> bool {
    let n = b.len();
    for k in 1..=n {
        let minor: Vec<Vec<BigRational>> = (0..k).map(|i| b[i][..k].to_vec()).collect();
        if linalg::det(&minor) <= BigRational::zero() {
            return false;
        }
    }
    true
}

fn is_positive(root: &[i64]) -> bool {
    root.iter().sum::<i64>() > 0
}

fn enumerate_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rank = cartan.len();
    let mut set: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..rank {
        let mut e = vec![0i64; rank];
        e[i] = 1;
        set.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(r) = queue.pop_front() {
        for i in 0..rank {
            // s_i(r) = r - <r, alpha_i^vee> alpha_i, <r, alpha_i^vee> = sum_j r_j cartan[i][j]
            let pairing: i64 = (0..rank).map(|j| r[j] * cartan[i][j]).sum();
            let mut img = r.clone();
            img[i] -= pairing;
            if set.insert(img.clone()) {
                queue.push_back(img);
            }
        }
    }
    set.into_iter().collect()
}

/// An element of the extended affine Weyl group W, stored as a coweight
/// translation plus a finite Weyl part.
#[derive(Clone, Debug)]
pub struct WeylElement {
    datum: Arc<AffineDatum>,
    /// fundamental-coweight coordinates of the translation
    translation: Vec<i64>,
    /// finite part acting on simple-root coordinates; column j is the
    /// image of alpha_j
    fmat: Vec<Vec<i64>>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.datum.same(&other.datum) && self.translation == other.translation && self.fmat == other.fmat
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.translation.hash(state);
        self.fmat.hash(state);
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

impl WeylElement {
    pub fn identity(datum: &Arc<AffineDatum>) -> WeylElement {
        let r = datum.rank;
        let mut fmat = vec![vec![0i64; r]; r];
        for i in 0..r {
            fmat[i][i] = 1;
        }
        WeylElement {
            datum: datum.clone(),
            translation: vec![0; r],
            fmat,
        }
    }

    pub fn simple_reflection(datum: &Arc<AffineDatum>, i: usize) -> Result<WeylElement, CoxeterError> {
        let r = datum.rank;
        if i > r {
            return Err(CoxeterError::NodeOutOfRange(i));
        }
        if i == 0 {
            Ok(WeylElement {
                datum: datum.clone(),
                translation: datum.theta_covector.clone(),
                fmat: datum.s_theta.clone(),
            })
        } else {
            let k = i - 1;
            let mut fmat = vec![vec![0i64; r]; r];
            for j in 0..r {
                for row in 0..r {
                    fmat[row][j] = (row == j) as i64;
                }
                fmat[k][j] -= datum.cartan[k][j];
            }
            Ok(WeylElement {
                datum: datum.clone(),
                translation: vec![0; r],
                fmat,
            })
        }
    }

    pub fn datum(&self) -> &Arc<AffineDatum> {
        &self.datum
    }

    pub fn translation(&self) -> &[i64] {
        &self.translation
    }

    pub fn finite_part_matrix(&self) -> &[Vec<i64>] {
        &self.fmat
    }

    pub fn is_identity(&self) -> bool {
        self.translation.iter().all(|&x| x == 0)
            && self
                .fmat
                .iter()
                .enumerate()
                .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == (i == j) as i64))
    }

    /// finite part acting on roots
    fn apply_fmat(&self, v: &[i64]) -> Vec<i64> {
        let r = self.datum.rank;
        (0..r)
            .map(|i| (0..r).map(|j| self.fmat[i][j] * v[j]).sum())
            .collect()
    }

    /// finite part acting on coweights: inverse transpose of fmat
    fn coweight_matrix(&self) -> Vec<Vec<i64>> {
        let r = self.datum.rank;
        let mt: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| self.fmat[j][i]).collect()).collect();
        let inv = linalg::inverse(&linalg::int_to_rat(&mt)).expect("Weyl matrices are invertible");
        inv.iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        assert!(x.is_integer());
                        i64::try_from(x.to_integer()).unwrap()
                    })
                    .collect()
            })
            .collect()
    }

    fn apply_coweight(&self, l: &[i64]) -> Vec<i64> {
        let m = self.coweight_matrix();
        let r = self.datum.rank;
        (0..r).map(|i| (0..r).map(|j| m[i][j] * l[j]).sum()).collect()
    }

    /// (l1, w1)(l2, w2) = (l1 + w1 l2, w1 w2)
    pub fn group_op(&self, other: &WeylElement) -> Result<WeylElement, CoxeterError> {
        if !self.datum.same(&other.datum) {
            return Err(CoxeterError::DatumMismatch);
        }
        let r = self.datum.rank;
        let moved = self.apply_coweight(&other.translation);
        let translation = (0..r).map(|i| self.translation[i] + moved[i]).collect();
        let fmat = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| (0..r).map(|k| self.fmat[i][k] * other.fmat[k][j]).sum())
                    .collect()
            })
            .collect();
        Ok(WeylElement {
            datum: self.datum.clone(),
            translation,
            fmat,
        })
    }

    pub fn invert(&self) -> WeylElement {
        // (l, w)^-1 = (-w^-1 l, w^-1)
        let r = self.datum.rank;
        let inv_f = linalg::inverse(&linalg::int_to_rat(&self.fmat)).expect("invertible");
        let fmat: Vec<Vec<i64>> = inv_f
            .iter()
            .map(|row| row.iter().map(|x| i64::try_from(x.to_integer()).unwrap()).collect())
            .collect();
        let tmp = WeylElement {
            datum: self.datum.clone(),
            translation: vec![0; r],
            fmat,
        };
        let moved = tmp.apply_coweight(&self.translation);
        WeylElement {
            translation: moved.iter().map(|&x| -x).collect(),
            ..tmp
        }
    }

    /// Membership in W': the translation lies in the coroot lattice.
    pub fn in_w_prime(&self) -> bool {
        self.coroot_coordinates().is_some()
    }

    /// Writes the translation in the coroot basis if possible.
    pub fn coroot_coordinates(&self) -> Option<Vec<i64>> {
        let r = self.datum.rank;
        // lambda_j = sum_i c_i cartan[i][j]; columns of the system are
        // the coroots alpha_i^vee in coweight coordinates
        let cols: Vec<Vec<BigRational>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| BigRational::from_integer(self.datum.cartan[i][j].into()))
                    .collect()
            })
            .collect();
        let target: Vec<BigRational> = self
            .translation
            .iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect();
        let sol = linalg::solve_columns(&cols, &target, r)?;
        let mut out = Vec::with_capacity(r);
        for c in sol {
            if !c.is_integer() {
                return None;
            }
            out.push(i64::try_from(c.to_integer()).ok()?);
        }
        Some(out)
    }

    fn pairing(root: &[i64], coweight: &[i64]) -> i64 {
        root.iter().zip(coweight).map(|(a, l)| a * l).sum()
    }

    /// Iwahori-Matsumoto length: the number of positive affine roots
    /// sent negative.
    pub fn length(&self) -> u64 {
        let mut total: i64 = 0;
        for root in &self.datum.roots {
            let beta = self.apply_fmat(root);
            let c = Self::pairing(&beta, &self.translation);
            let k_min = if is_positive(root) { 0 } else { 1 };
            let k_max_neg = if is_positive(&beta) { c - 1 } else { c };
            total += (k_max_neg - k_min + 1).max(0);
        }
        total as u64
    }

    /// Image of the affine root (alpha, k) under this element.
    fn act_affine(&self, root: &[i64], k: i64) -> (Vec<i64>, i64) {
        let beta = self.apply_fmat(root);
        let c = Self::pairing(&beta, &self.translation);
        (beta, k - c)
    }

    fn affine_simple_root(datum: &AffineDatum, i: usize) -> (Vec<i64>, i64) {
        if i == 0 {
            (datum.highest_root.iter().map(|&x| -x).collect(), 1)
        } else {
            let mut e = vec![0i64; datum.rank];
            e[i - 1] = 1;
            (e, 0)
        }
    }

    fn affine_root_negative(root: &[i64], k: i64) -> bool {
        if is_positive(root) {
            k < 0
        } else {
            k <= 0
        }
    }

    pub fn is_descent(&self, i: usize, side: Side) -> bool {
        let (r, k) = Self::affine_simple_root(&self.datum, i);
        let (img, ki) = match side {
            Side::Left => self.invert().act_affine(&r, k),
            Side::Right => self.act_affine(&r, k),
        };
        Self::affine_root_negative(&img, ki)
    }

    pub fn descents(&self, side: Side) -> NodeSubset {
        (0..=self.datum.rank)
            .filter(|&i| self.is_descent(i, side))
            .collect()
    }

    /// Writes the element as s_{i1}...s_{ik} * omega with k = length;
    /// ties in descent choice always break to the smallest node index.
    pub fn reduced_word(&self) -> (Vec<usize>, WeylElement) {
        let mut word = Vec::new();
        let mut cur = self.clone();
        loop {
            let ds = cur.descents(Side::Left);
            match ds.iter().next() {
                None => break,
                Some(&i) => {
                    let s = WeylElement::simple_reflection(&self.datum, i).unwrap();
                    cur = s.group_op(&cur).unwrap();
                    word.push(i);
                }
            }
        }
        debug_assert_eq!(cur.length(), 0);
        (word, cur)
    }

    pub fn from_word(
        datum: &Arc<AffineDatum>,
        word: &[usize],
        omega: Option<&WeylElement>,
    ) -> Result<WeylElement, CoxeterError> {
        let mut acc = WeylElement::identity(datum);
        for &i in word {
            acc = acc.group_op(&WeylElement::simple_reflection(datum, i)?)?;
        }
        if let Some(om) = omega {
            acc = acc.group_op(om)?;
        }
        Ok(acc)
    }

    /// Order of the element; None if infinite.
    pub fn order(&self) -> Option<u64> {
        let mut cur = self.clone();
        // the finite part has order at most |W_fin| <= 1152 at rank <= 4
        for k in 1..=10_000u64 {
            if cur.is_identity() {
                return Some(k);
            }
            if cur.fmat == WeylElement::identity(&self.datum).fmat {
                // pure nonzero translation: infinite order
                return None;
            }
            cur = cur.group_op(self).unwrap();
        }
        None
    }

    pub fn pow(&self, n: u64) -> WeylElement {
        let mut acc = WeylElement::identity(&self.datum);
        for _ in 0..n {
            acc = acc.group_op(self).unwrap();
        }
        acc
    }

    /// Deterministic sort key.
    pub fn sort_key(&self) -> (u64, Vec<usize>, Vec<i64>, Vec<i64>) {
        let (word, omega) = self.reduced_word();
        let flat: Vec<i64> = omega.fmat.iter().flatten().copied().collect();
        (self.length(), word, omega.translation.clone(), flat)
    }
}

/// All length-zero elements of W (the subgroup Omega).
pub fn omega_group(datum: &Arc<AffineDatum>) -> Vec<WeylElement> {
    let r = datum.rank;
    let finite = finite_weyl_group(datum);
    let mut out = Vec::new();
    // translation parts of length-zero elements are 0/1 vectors in the
    // fundamental coweight basis (minuscule coweights)
    for mask in 0..(1u32 << r) {
        let translation: Vec<i64> = (0..r).map(|i| ((mask >> i) & 1) as i64).collect();
        for f in &finite {
            let cand = WeylElement {
                datum: datum.clone(),
                translation: translation.clone(),
                fmat: f.clone(),
            };
            if cand.length() == 0 {
                out.push(cand);
            }
        }
    }
    assert_eq!(
        out.len() as u64,
        datum.omega_order,
        "Omega must have order equal to the coweight/coroot index"
    );
    out.sort_by(|a, b| (&a.translation, &a.fmat).cmp(&(&b.translation, &b.fmat)));
    out
}

/// The conjugation action of a length-zero element on the node set:
/// omega s_i omega^-1 = s_{pi(i)}.
pub fn omega_action_on_nodes(omega: &WeylElement) -> Vec<usize> {
    let datum = &omega.datum;
    let inv = omega.invert();
    (0..=datum.rank)
        .map(|i| {
            let s = WeylElement::simple_reflection(datum, i).unwrap();
            let conj = omega.group_op(&s).unwrap().group_op(&inv).unwrap();
            (0..=datum.rank)
                .find(|&j| conj == WeylElement::simple_reflection(datum, j).unwrap())
                .expect("Omega permutes the simple reflections")
        })
        .collect()
}

fn finite_weyl_group(datum: &Arc<AffineDatum>) -> Vec<Vec<Vec<i64>>> {
    let r = datum.rank;
    let gens: Vec<Vec<Vec<i64>>> = (1..=r)
        .map(|i| {
            WeylElement::simple_reflection(datum, i).unwrap().fmat
        })
        .collect();
    let id: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..r).map(|j| (i == j) as i64).collect())
        .collect();
    let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in &gens {
            let prod: Vec<Vec<i64>> = (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| (0..r).map(|k| m[i][k] * g[k][j]).sum())
                        .collect()
                })
                .collect();
            if seen.insert(prod.clone()) {
                queue.push_back(prod);
            }
        }
    }
    seen.into_iter().collect()
}

/// Checks that the parabolic labelled by H is finite: the Gram matrix
/// of the affine simple roots indexed by H is positive definite.
pub fn parabolic_is_finite(datum: &AffineDatum, h: &NodeSubset) -> bool {
    let b = bilinear_form(&datum.cartan, &datum.sym);
    let nodes: Vec<usize> = h.iter().copied().collect();
    let gradients: Vec<Vec<i64>> = nodes
        .iter()
        .map(|&i| {
            if i == 0 {
                datum.highest_root.iter().map(|&x| -x).collect()
            } else {
                let mut e = vec![0i64; datum.rank];
                e[i - 1] = 1;
                e
            }
        })
        .collect();
    let gram: Vec<Vec<BigRational>> = gradients
        .iter()
        .map(|u| gradients.iter().map(|v| form_value(&b, u, v)).collect())
        .collect();
    positive_definite(&gram)
}

/// Full enumeration of the finite parabolic W_H.
pub fn parabolic_elements(
    datum: &Arc<AffineDatum>,
    h: &NodeSubset,
) -> Result<Vec<WeylElement>, CoxeterError> {
    for &i in h {
        if i > datum.rank {
            return Err(CoxeterError::NodeOutOfRange(i));
        }
    }
    // H = full node set always fails this: the affine Gram matrix is
    // degenerate
    if !parabolic_is_finite(datum, h) {
        return Err(CoxeterError::InfiniteParabolic(h.iter().copied().collect()));
    }
    let gens: Vec<WeylElement> = h
        .iter()
        .map(|&i| WeylElement::simple_reflection(datum, i).unwrap())
        .collect();
    let id = WeylElement::identity(datum);
    let mut seen: HashSet<WeylElement> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    let cap = 1200; // F4 parabolics top out at 1152
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = x.group_op(g).unwrap();
            if seen.insert(y.clone()) {
                assert!(seen.len() <= cap, "parabolic enumeration exceeded desk-scale cap");
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<WeylElement> = seen.into_iter().collect();
    out.sort_by_key(|e| e.sort_key());
    Ok(out)
}

/// Membership test x in W_H by descent stripping inside H.
pub fn in_parabolic(x: &WeylElement, h: &NodeSubset) -> bool {
    let mut cur = x.clone();
    loop {
        if cur.is_identity() {
            return true;
        }
        let ds = cur.descents(Side::Left);
        match ds.intersection(h).next() {
            None => return false,
            Some(&i) => {
                let s = WeylElement::simple_reflection(&cur.datum, i).unwrap();
                cur = s.group_op(&cur).unwrap();
            }
        }
    }
}

/// The minimal-length element of the double coset W_J w W_J, obtained
/// by greedy descent stripping on both sides.
pub fn min_double_coset_rep(w: &WeylElement, j: &NodeSubset) -> WeylElement {
    let mut cur = w.clone();
    loop {
        let left = cur.descents(Side::Left);
        if let Some(&i) = left.intersection(j).next() {
            let s = WeylElement::simple_reflection(&cur.datum, i).unwrap();
            cur = s.group_op(&cur).unwrap();
            continue;
        }
        let right = cur.descents(Side::Right);
        if let Some(&i) = right.intersection(j).next() {
            let s = WeylElement::simple_reflection(&cur.datum, i).unwrap();
            cur = cur.group_op(&s).unwrap();
            continue;
        }
        return cur;
    }
}

/// true iff w W_J w^-1 = W_J, decided generator by generator.
pub fn normalizes_wj(w: &WeylElement, j: &NodeSubset) -> bool {
    let inv = w.invert();
    j.iter().all(|&jj| {
        let s = WeylElement::simple_reflection(&w.datum, jj).unwrap();
        let conj = w.group_op(&s).unwrap().group_op(&inv).unwrap();
        in_parabolic(&conj, j)
    })
}

/// All elements of W (or of W' when `include_omega` is false) with
/// length at most `max_length`, enumerated by breadth-first search.
pub fn elements_up_to_length(
    datum: &Arc<AffineDatum>,
    max_length: u64,
    include_omega: bool,
) -> Vec<WeylElement> {
    let mut seeds = vec![WeylElement::identity(datum)];
    if include_omega {
        seeds = omega_group(datum);
    }
    let mut seen: HashSet<WeylElement> = seeds.iter().cloned().collect();
    let mut queue: VecDeque<WeylElement> = seeds.into_iter().collect();
    let mut out = Vec::new();
    while let Some(x) = queue.pop_front() {
        out.push(x.clone());
        for i in 0..=datum.rank {
            let s = WeylElement::simple_reflection(datum, i).unwrap();
            let y = x.group_op(&s).unwrap();
            if y.length() <= max_length && seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    out.sort_by_key(|e| e.sort_key());
    out
}

/// Minimal-length representatives of the good (W_J, W_J)-double cosets
/// (those contained in the normalizer of W_J), up to the length bound.
pub fn good_coset_reps(
    datum: &Arc<AffineDatum>,
    j: &NodeSubset,
    max_length: u64,
) -> Result<Vec<WeylElement>, CoxeterError> {
    if j.len() > datum.rank {
        return Err(CoxeterError::NotProper);
    }
    let all = elements_up_to_length(datum, max_length, true);
    let mut reps: HashSet<WeylElement> = HashSet::new();
    for w in &all {
        let m = min_double_coset_rep(w, j);
        if m.length() <= max_length {
            reps.insert(m);
        }
    }
    let mut out: Vec<WeylElement> = reps
        .into_iter()
        .filter(|m| normalizes_wj(m, j))
        .collect();
    out.sort_by_key(|e| e.sort_key());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(name: &str) -> Arc<AffineDatum> {
        AffineDatum::builtin(name).unwrap()
    }

    fn s(d: &Arc<AffineDatum>, i: usize) -> WeylElement {
        WeylElement::simple_reflection(d, i).unwrap()
    }

    #[test]
    fn generators_are_involutions() {
        for name in AffineDatum::builtin_names() {
            let d = datum(name);
            for i in 0..=d.rank() {
                let g = s(&d, i);
                assert!(g.group_op(&g).unwrap().is_identity(), "{} s_{}", name, i);
                assert_eq!(g.length(), 1);
                assert_eq!(g.descents(Side::Left), NodeSubset::from([i]));
                assert_eq!(g.descents(Side::Right), NodeSubset::from([i]));
            }
        }
    }

    #[test]
    fn affine_a1_coxeter_relations() {
        let d = datum("a1aff");
        let prod = s(&d, 0).group_op(&s(&d, 1)).unwrap();
        let cubed = prod.pow(3);
        // (s0 s1)^3 = translation by 3 alpha^vee = coords [6]
        assert_eq!(cubed.translation(), &[6]);
        assert_eq!(cubed.fmat, WeylElement::identity(&d).fmat);
        for k in 1..=6u64 {
            assert_eq!(prod.pow(k).length(), 2 * k);
        }
    }

    #[test]
    fn g2_bonds_match_diagram() {
        let d = datum("g2aff");
        assert_eq!(d.bond(0, 1), Bond::Finite(3));
        assert_eq!(d.bond(1, 2), Bond::Finite(6));
        assert_eq!(d.bond(0, 2), Bond::Finite(2));
        assert_eq!(d.omega_order(), 1);
    }

    #[test]
    fn a1_bond_infinite() {
        let d = datum("a1aff");
        assert_eq!(d.bond(0, 1), Bond::Infinite);
    }

    #[test]
    fn omega_groups() {
        assert_eq!(omega_group(&datum("g2aff")).len(), 1);
        assert_eq!(omega_group(&datum("c2aff")).len(), 2);
        let om = omega_group(&datum("a2aff"));
        assert_eq!(om.len(), 3);
        let nontrivial: Vec<_> = om.iter().filter(|o| !o.is_identity()).collect();
        for o in &nontrivial {
            let perm = omega_action_on_nodes(o);
            // 3-cycle on the nodes
            let mut seen = vec![0usize];
            let mut cur = 0;
            for _ in 0..2 {
                cur = perm[cur];
                seen.push(cur);
            }
            seen.sort();
            assert_eq!(seen, vec![0, 1, 2]);
            assert_eq!(o.length(), 0);
            assert!(o.descents(Side::Left).is_empty());
        }
    }

    #[test]
    fn parabolic_orders_g2() {
        let d = datum("g2aff");
        assert_eq!(parabolic_elements(&d, &NodeSubset::new()).unwrap().len(), 1);
        assert_eq!(
            parabolic_elements(&d, &NodeSubset::from([1, 2])).unwrap().len(),
            12
        );
        assert_eq!(
            parabolic_elements(&d, &NodeSubset::from([0, 1])).unwrap().len(),
            6
        );
    }

    #[test]
    fn a1_full_set_refused() {
        let d = datum("a1aff");
        assert!(matches!(
            parabolic_elements(&d, &NodeSubset::from([0, 1])),
            Err(CoxeterError::InfiniteParabolic(_))
        ));
    }

    #[test]
    fn g2_longest_element_length() {
        let d = datum("g2aff");
        let w = s(&d, 1).group_op(&s(&d, 2)).unwrap().pow(3);
        assert_eq!(w.length(), 6);
    }

    #[test]
    fn reduced_word_round_trip() {
        let d = datum("g2aff");
        let w = WeylElement::from_word(&d, &[0, 1, 0, 2, 1, 0], None).unwrap();
        let (word, omega) = w.reduced_word();
        assert_eq!(word.len() as u64, w.length());
        assert_eq!(WeylElement::from_word(&d, &word, Some(&omega)).unwrap(), w);
        // s0 s1 s0 with m(0,1) = 3 has no shortening
        let w = WeylElement::from_word(&d, &[0, 1, 0], None).unwrap();
        assert_eq!(w.length(), 3);
    }

    #[test]
    fn min_coset_rep_a1() {
        let d = datum("a1aff");
        let j = NodeSubset::from([1]);
        let w = s(&d, 0);
        let m = min_double_coset_rep(&w, &j);
        assert_eq!(m, w);
        // every element of the coset {s0, s1 s0, s0 s1, s1 s0 s1}
        // minimizes to s0
        for word in [vec![1, 0], vec![0, 1], vec![1, 0, 1]] {
            let x = WeylElement::from_word(&d, &word, None).unwrap();
            assert_eq!(min_double_coset_rep(&x, &j), w);
        }
        // inside W_J and J empty cases
        assert!(min_double_coset_rep(&s(&d, 1), &j).is_identity());
        assert_eq!(min_double_coset_rep(&w, &NodeSubset::new()), w);
    }

    #[test]
    fn normalizer_checks() {
        let d = datum("g2aff");
        let j = NodeSubset::from([1]);
        assert!(normalizes_wj(&s(&d, 1), &j));
        assert!(!normalizes_wj(&s(&d, 2), &j));
        assert!(normalizes_wj(&WeylElement::identity(&d), &j));
    }

    #[test]
    fn good_cosets_empty_j() {
        let d = datum("g2aff");
        let reps = good_coset_reps(&d, &NodeSubset::new(), 3).unwrap();
        let all = elements_up_to_length(&d, 3, true);
        assert_eq!(reps.len(), all.len());
        assert!(reps.iter().any(|r| r.is_identity()));
    }

    #[test]
    fn length_inverse_invariance() {
        let d = datum("c2aff");
        for word in [vec![0, 1, 2], vec![0, 1, 0, 2, 1], vec![2, 1, 0, 1, 2, 0]] {
            let w = WeylElement::from_word(&d, &word, None).unwrap();
            assert_eq!(w.length(), w.invert().length());
        }
        for om in omega_group(&d) {
            let w = WeylElement::from_word(&d, &[0, 1], Some(&om)).unwrap();
            let conj = om.group_op(&w).unwrap().group_op(&om.invert()).unwrap();
            assert_eq!(conj.length(), w.length());
        }
    }

    #[test]
    fn w_prime_membership() {
        let d = datum("a2aff");
        assert!(WeylElement::identity(&d).in_w_prime());
        assert!(s(&d, 0).in_w_prime());
        for om in omega_group(&d) {
            if !om.is_identity() {
                assert!(!om.in_w_prime());
            }
        }
    }
}

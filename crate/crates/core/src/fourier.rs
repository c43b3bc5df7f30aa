//! The pair set M(Gamma), the nonabelian Fourier transform, and the
//! family pairing used by the multiplicity formulas.
//!
//! The entry at ((x,sigma),(y,tau)) is
//!   (|Z(x)| |Z(y)|)^-1 sum over g with x (g y g^-1) = (g y g^-1) x
//!   of conj(sigma(g y g^-1)) tau(g^-1 x g),
//! evaluated exactly through the centralizer character tables.

use std::collections::BTreeMap;

use crate::coxeter::WeylElement;
use crate::groups::{
    character_table, CharacterTable, FiniteGroupTable, GroupError, Subgroup,
};
use crate::par;
use crate::scalar::{Cyclotomic, Int, Rational};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FourierError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("pair ({0}, {1}) does not belong to the pair set")]
    PairNotInMSet(usize, usize),
    #[error("irreducible index {0} is not covered by the family data")]
    NotCovered(usize),
    #[error("element does not belong to the stored finite group")]
    ElementNotInGroup,
}

/// An M(Gamma) pair: (conjugacy class index, irreducible index of the
/// centralizer character table).
pub type MPair = (usize, usize);

/// The set of all pairs (y, r) with y a class of Gamma and r an
/// irreducible character of Z(y), with the centralizer tables cached.
#[derive(Clone, Debug)]
pub struct MSet {
    pub gamma: FiniteGroupTable,
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub centralizers: Vec<Subgroup>,
    pub centralizer_tables: Vec<CharacterTable>,
    /// canonical order: by class index, then centralizer irr index
    pub pairs: Vec<MPair>,
}

impl MSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, pair: MPair) -> bool {
        self.pairs.contains(&pair)
    }

    pub fn pair_index(&self, pair: MPair) -> Option<usize> {
        self.pairs.iter().position(|&p| p == pair)
    }

    /// "(g<rep>, <irr label>)" with the group's own element labels
    pub fn pair_label(&self, pair: MPair) -> String {
        let rep = self.classes[pair.0][0];
        format!(
            "({}, {})",
            self.gamma.label(rep),
            self.centralizer_tables[pair.0].row_label(pair.1)
        )
    }

    /// class index of the class whose representative has the given
    /// element order and class size; convenience for tests and data
    pub fn class_by_shape(&self, order: u64, size: usize) -> Option<usize> {
        (0..self.classes.len()).find(|&c| {
            self.classes[c].len() == size && self.gamma.element_order(self.classes[c][0]) == order
        })
    }
}

pub fn build_mset(gamma: FiniteGroupTable) -> Result<MSet, FourierError> {
    let classes = gamma.conjugacy_classes();
    let mut class_of = vec![0usize; gamma.order()];
    for (ci, class) in classes.iter().enumerate() {
        for &x in class {
            class_of[x] = ci;
        }
    }
    let centralizers: Vec<Subgroup> = classes.iter().map(|c| gamma.centralizer(c[0])).collect();
    let centralizer_tables: Vec<CharacterTable> = centralizers
        .iter()
        .map(|z| character_table(&z.table))
        .collect::<Result<_, _>>()?;
    let pairs: Vec<MPair> = (0..classes.len())
        .flat_map(|c| (0..centralizer_tables[c].irreducibles.len()).map(move |r| (c, r)))
        .collect();
    Ok(MSet {
        gamma,
        classes,
        class_of,
        centralizers,
        centralizer_tables,
        pairs,
    })
}

/// One entry of the nonabelian Fourier transform matrix.
pub fn fourier_entry(m: &MSet, a: MPair, b: MPair) -> Result<Cyclotomic, FourierError> {
    if !m.contains(a) {
        return Err(FourierError::PairNotInMSet(a.0, a.1));
    }
    if !m.contains(b) {
        return Err(FourierError::PairNotInMSet(b.0, b.1));
    }
    let g_tab = &m.gamma;
    let x = m.classes[a.0][0];
    let y = m.classes[b.0][0];
    let zx = &m.centralizers[a.0];
    let zy = &m.centralizers[b.0];
    let mut acc = Cyclotomic::zero();
    for g in 0..g_tab.order() {
        let gyg = g_tab.mult(g_tab.mult(g, y), g_tab.inverse(g));
        if g_tab.mult(x, gyg) != g_tab.mult(gyg, x) {
            continue;
        }
        let gxg = g_tab.mult(g_tab.mult(g_tab.inverse(g), x), g);
        let s = zx.parent_to_sub[gyg].expect("g y g^-1 commutes with x");
        let t = zy.parent_to_sub[gxg].expect("g^-1 x g commutes with y");
        let sigma = m.centralizer_tables[a.0].value_at_element(a.1, s).conjugate();
        let tau = m.centralizer_tables[b.0].value_at_element(b.1, t);
        acc = &acc + &(&sigma * tau);
    }
    let denom = Int::from(zx.table.order()) * Int::from(zy.table.order());
    Ok(acc.scale(&Rational::new(Int::from(1), denom)))
}

/// The full Fourier matrix in the canonical pair order.
#[derive(Clone, Debug)]
pub struct FourierMatrix {
    pub mset: MSet,
    pub entries: Vec<Vec<Cyclotomic>>,
}

pub fn fourier_matrix(m: &MSet) -> Result<FourierMatrix, FourierError> {
    let rows = par::map_collect(m.pairs.clone(), |a| {
        m.pairs
            .iter()
            .map(|&b| fourier_entry(m, a, b))
            .collect::<Result<Vec<_>, _>>()
    });
    Ok(FourierMatrix {
        mset: m.clone(),
        entries: rows.into_iter().collect::<Result<_, _>>()?,
    })
}

/// Always-sequential variant, kept for the benchmark comparison.
pub fn fourier_matrix_seq(m: &MSet) -> Result<FourierMatrix, FourierError> {
    let rows = par::map_collect_seq(m.pairs.clone(), |a| {
        m.pairs
            .iter()
            .map(|&b| fourier_entry(m, a, b))
            .collect::<Result<Vec<_>, _>>()
    });
    Ok(FourierMatrix {
        mset: m.clone(),
        entries: rows.into_iter().collect::<Result<_, _>>()?,
    })
}

/// One family: a finite group Gamma with an embedding of some
/// irreducibles of W_H into M(Gamma).
#[derive(Clone, Debug)]
pub struct Family {
    pub mset: MSet,
    /// irreducible index of W_H -> pair in M(Gamma)
    pub members: BTreeMap<usize, MPair>,
}

/// Character table of a finite parabolic W_H together with its family
/// decomposition. The W_H group table is positional over
/// `weyl_elements`.
#[derive(Clone, Debug)]
pub struct FamilyData {
    pub weyl_elements: Vec<WeylElement>,
    pub weyl_group: FiniteGroupTable,
    pub weyl_table: CharacterTable,
    pub families: Vec<Family>,
}

impl FamilyData {
    pub fn from_elements(
        weyl_elements: Vec<WeylElement>,
        families: Vec<Family>,
    ) -> Result<FamilyData, FourierError> {
        let weyl_group = FiniteGroupTable::from_weyl_elements(&weyl_elements)?;
        let weyl_table = character_table(&weyl_group)?;
        // members must be distinct pairs of their M set
        for fam in &families {
            let mut seen = Vec::new();
            for (&irr, &pair) in &fam.members {
                if irr >= weyl_table.irreducibles.len() {
                    return Err(FourierError::NotCovered(irr));
                }
                if !fam.mset.contains(pair) || seen.contains(&pair) {
                    return Err(FourierError::PairNotInMSet(pair.0, pair.1));
                }
                seen.push(pair);
            }
        }
        Ok(FamilyData {
            weyl_elements,
            weyl_group,
            weyl_table,
            families,
        })
    }

    pub fn family_of(&self, irr: usize) -> Option<&Family> {
        self.families.iter().find(|f| f.members.contains_key(&irr))
    }

    pub fn class_of_element(&self, w: &WeylElement) -> Result<usize, FourierError> {
        let idx = self
            .weyl_elements
            .iter()
            .position(|e| e == w)
            .ok_or(FourierError::ElementNotInGroup)?;
        Ok(self.weyl_table.class_of[idx])
    }
}

/// (E : R_w) through the family pairing: sum over phi in E's family of
/// phi(w) {x_E, x_phi}; characters outside the family pair to zero.
pub fn multiplicity_in_rw(
    e: usize,
    w: &WeylElement,
    fd: &FamilyData,
) -> Result<Cyclotomic, FourierError> {
    let family = fd.family_of(e).ok_or(FourierError::NotCovered(e))?;
    let x_e = family.members[&e];
    let class = fd.class_of_element(w)?;
    let mut acc = Cyclotomic::zero();
    for (&phi, &x_phi) in &family.members {
        let phi_value = fd.weyl_table.value(phi, class);
        let entry = fourier_entry(&family.mset, x_e, x_phi)?;
        acc = &acc + &(phi_value * &entry);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{parabolic_elements, AffineDatum};
    use crate::groups::samples;

    fn rat(n: i64, d: i64) -> Cyclotomic {
        Cyclotomic::from_rational(Rational::new(Int::from(n), Int::from(d)))
    }

    #[test]
    fn mset_sizes() {
        assert_eq!(build_mset(samples::cyclic(1)).unwrap().len(), 1);
        assert_eq!(build_mset(samples::cyclic(2)).unwrap().len(), 4);
        assert_eq!(build_mset(samples::symmetric_3()).unwrap().len(), 8);
    }

    #[test]
    fn trivial_group_matrix() {
        let m = build_mset(samples::cyclic(1)).unwrap();
        let fm = fourier_matrix(&m).unwrap();
        assert_eq!(fm.entries, vec![vec![Cyclotomic::one()]]);
    }

    #[test]
    fn z2_entries_are_products() {
        // abelian case: {(x,sigma),(y,tau)} = (1/|G|) sigma(y) tau(x)
        let m = build_mset(samples::cyclic(2)).unwrap();
        for &a in &m.pairs {
            for &b in &m.pairs {
                let entry = fourier_entry(&m, a, b).unwrap();
                let sigma_y = m.centralizer_tables[a.0]
                    .value_at_element(a.1, m.centralizers[a.0].parent_to_sub[m.classes[b.0][0]].unwrap())
                    .clone();
                let tau_x = m.centralizer_tables[b.0]
                    .value_at_element(b.1, m.centralizers[b.0].parent_to_sub[m.classes[a.0][0]].unwrap())
                    .clone();
                let expected = (&sigma_y * &tau_x).scale(&Rational::new(Int::from(1), Int::from(2)));
                assert_eq!(entry, expected);
                assert!(entry == rat(1, 2) || entry == rat(-1, 2));
            }
        }
    }

    #[test]
    fn s3_known_entries() {
        let m = build_mset(samples::symmetric_3()).unwrap();
        let c1 = m.class_by_shape(1, 1).unwrap();
        let c2 = m.class_by_shape(2, 3).unwrap();
        let c3 = m.class_by_shape(3, 2).unwrap();
        let one_of = |c: usize| {
            let t = &m.centralizer_tables[c];
            t.row_index_by_label("1").unwrap()
        };
        let id_one = (c1, one_of(c1));
        let g2_one = (c2, one_of(c2));
        let g3_one = (c3, one_of(c3));
        assert_eq!(fourier_entry(&m, id_one, id_one).unwrap(), rat(1, 6));
        assert_eq!(fourier_entry(&m, id_one, g2_one).unwrap(), rat(1, 2));
        assert_eq!(fourier_entry(&m, id_one, g3_one).unwrap(), rat(1, 3));
    }

    #[test]
    fn symmetry_and_unitarity() {
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
            // M is Hermitian, so M . adjoint(M) = M^2; check M^2 = I
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Cyclotomic::zero();
                    for k in 0..n {
                        acc = &acc + &(&fm.entries[i][k] * &fm.entries[k][j]);
                    }
                    let expected = if i == j { 1 } else { 0 };
                    assert_eq!(acc, Cyclotomic::from_integer(expected));
                }
            }
        }
    }

    #[test]
    fn identity_row_is_class_size_times_dim() {
        let m = build_mset(samples::symmetric_3()).unwrap();
        let c1 = m.class_by_shape(1, 1).unwrap();
        let one = m.centralizer_tables[c1].row_index_by_label("1").unwrap();
        let n = m.gamma.order() as i64;
        for &b in &m.pairs {
            let entry = fourier_entry(&m, (c1, one), b).unwrap();
            let size = m.classes[b.0].len() as i64;
            let dim = &m.centralizer_tables[b.0].dimension(b.1);
            let expected = Cyclotomic::from_rational(Rational::new(
                Int::from(size) * dim,
                Int::from(n),
            ));
            assert_eq!(entry, expected);
        }
    }

    #[test]
    fn s3_conductors() {
        // entries are rational except where an order-3 centralizer
        // character of the 3-cycle class is involved
        let m = build_mset(samples::symmetric_3()).unwrap();
        let c3 = m.class_by_shape(3, 2).unwrap();
        let fm = fourier_matrix(&m).unwrap();
        for (i, &a) in m.pairs.iter().enumerate() {
            for (j, &b) in m.pairs.iter().enumerate() {
                let complex = |p: MPair| {
                    p.0 == c3 && m.centralizer_tables[c3].value(p.1, 1).as_rational().is_none()
                };
                let cond = fm.entries[i][j].conductor();
                if complex(a) || complex(b) {
                    assert!(cond == 1 || cond == 3);
                } else {
                    assert_eq!(cond, 1);
                }
            }
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let m = build_mset(samples::symmetric_3()).unwrap();
        assert_eq!(
            fourier_matrix(&m).unwrap().entries,
            fourier_matrix_seq(&m).unwrap().entries
        );
    }

    #[test]
    fn singleton_family_multiplicity_is_character_value() {
        // W_H of type A1 inside affine A1; trivial Gamma makes every
        // family pairing collapse to the character value itself
        let d = AffineDatum::builtin("a1aff").unwrap();
        let h = std::iter::once(1usize).collect();
        let elements = parabolic_elements(&d, &h).unwrap();
        let trivial_mset = || build_mset(samples::cyclic(1)).unwrap();
        let families = vec![
            Family {
                mset: trivial_mset(),
                members: BTreeMap::from([(0usize, (0usize, 0usize))]),
            },
            Family {
                mset: trivial_mset(),
                members: BTreeMap::from([(1usize, (0usize, 0usize))]),
            },
        ];
        let fd = FamilyData::from_elements(elements.clone(), families).unwrap();
        let s = elements.iter().find(|e| !e.is_identity()).unwrap();
        // rows sorted by values: row 0 is the sign character
        let s_class = fd.class_of_element(s).unwrap();
        assert_eq!(fd.weyl_table.value(0, s_class).clone(), Cyclotomic::from_integer(-1));
        assert_eq!(
            multiplicity_in_rw(0, s, &fd).unwrap(),
            Cyclotomic::from_integer(-1)
        );
        assert_eq!(
            multiplicity_in_rw(1, s, &fd).unwrap(),
            Cyclotomic::one()
        );
        assert_eq!(
            multiplicity_in_rw(2, s, &fd),
            Err(FourierError::NotCovered(2))
        );
    }
}

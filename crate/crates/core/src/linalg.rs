//! Sparse exact linear algebra over keyed coordinates.
//!
//! Rows are kept fraction-free (primitive integer vectors) while eliminating;
//! rational reduced row echelon forms are produced on request for canonical
//! output.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{denominator_lcm, Scalar};

pub type SparseVec<K> = BTreeMap<K, Scalar>;

type IntRow<K> = Vec<(K, BigInt)>;

fn to_int_row<K: Ord + Clone>(v: &SparseVec<K>) -> IntRow<K> {
    let l = denominator_lcm(v.values());
    let mut row: IntRow<K> = v
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            (
                k.clone(),
                (c * Scalar::from_integer(l.clone())).to_integer(),
            )
        })
        .collect();
    make_primitive(&mut row);
    row
}

fn make_primitive<K>(row: &mut IntRow<K>) {
    let Some(first) = row.first() else { return };
    let mut g = first.1.abs();
    for (_, c) in row.iter().skip(1) {
        if g.is_one() {
            break;
        }
        g = g.gcd(c);
    }
    let flip = first.1.is_negative();
    if !g.is_one() || flip {
        let g = if flip { -g } else { g };
        for (_, c) in row.iter_mut() {
            *c = &*c / &g;
        }
    }
}

/// `a*w - b*r` merged over sorted keys, zero entries dropped.
fn combine<K: Ord + Clone>(a: &BigInt, w: &IntRow<K>, b: &BigInt, r: &IntRow<K>) -> IntRow<K> {
    let mut out = Vec::with_capacity(w.len() + r.len());
    let (mut i, mut j) = (0, 0);
    while i < w.len() || j < r.len() {
        let ord = match (w.get(i), r.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => unreachable!(),
        };
        match ord {
            std::cmp::Ordering::Less => {
                out.push((w[i].0.clone(), a * &w[i].1));
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((r[j].0.clone(), -(b * &r[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = a * &w[i].1 - b * &r[j].1;
                if !c.is_zero() {
                    out.push((w[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Row echelon basis of a subspace, pivots at each row's least key.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: Vec<IntRow<K>>,
    pivots: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors<'a>(vs: impl IntoIterator<Item = &'a SparseVec<K>>) -> Self
    where
        K: 'a,
    {
        let mut e = Self::new();
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_keys(&self) -> impl Iterator<Item = &K> {
        self.pivots.keys()
    }

    fn reduce_leading(&self, mut w: IntRow<K>) -> IntRow<K> {
        while let Some((k, _)) = w.first() {
            let Some(&idx) = self.pivots.get(k) else {
                break;
            };
            let r = &self.rows[idx];
            let g = w[0].1.gcd(&r[0].1);
            let a = &r[0].1 / &g;
            let b = &w[0].1 / &g;
            w = combine(&a, &w, &b, r);
            make_primitive(&mut w);
        }
        w
    }

    /// Adds `v`; returns `true` if it was independent of the current span.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let w = self.reduce_leading(to_int_row(v));
        if w.is_empty() {
            return false;
        }
        self.pivots.insert(w[0].0.clone(), self.rows.len());
        self.rows.push(w);
        true
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce_leading(to_int_row(v)).is_empty()
    }

    /// Unique representative of `v` modulo the span with no pivot keys.
    /// Linear in `v`.
    pub fn normal_form(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut w: SparseVec<K> = v
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        let mut cursor: Option<K> = None;
        loop {
            let next = w
                .keys()
                .filter(|k| cursor.as_ref().is_none_or(|c| *k > c))
                .find(|k| self.pivots.contains_key(*k))
                .cloned();
            let Some(k) = next else { break };
            let r = &self.rows[self.pivots[&k]];
            let f = &w[&k] / Scalar::from_integer(r[0].1.clone());
            for (rk, rc) in r {
                let e = w.entry(rk.clone()).or_insert_with(Scalar::zero);
                *e -= &f * Scalar::from_integer(rc.clone());
                if e.is_zero() {
                    w.remove(rk);
                }
            }
            cursor = Some(k);
        }
        w
    }

    /// Canonical reduced row echelon basis, pivots normalized to one,
    /// sorted by pivot.
    pub fn rref(&self) -> Vec<SparseVec<K>> {
        let mut order: Vec<usize> = self.pivots.values().copied().collect();
        order.reverse();
        let mut done: Vec<(K, SparseVec<K>)> = Vec::new();
        for idx in order {
            let r = &self.rows[idx];
            let lead = Scalar::from_integer(r[0].1.clone());
            let mut v: SparseVec<K> = r
                .iter()
                .map(|(k, c)| (k.clone(), Scalar::from_integer(c.clone()) / &lead))
                .collect();
            for (pk, pv) in &done {
                if let Some(f) = v.get(pk).cloned() {
                    for (k, c) in pv {
                        let e = v.entry(k.clone()).or_insert_with(Scalar::zero);
                        *e -= &f * c;
                        if e.is_zero() {
                            v.remove(k);
                        }
                    }
                }
            }
            done.push((r[0].0.clone(), v));
        }
        done.into_iter().rev().map(|(_, v)| v).collect()
    }
}

/// Rank of a family of vectors.
pub fn rank<'a, K: Ord + Clone + 'a>(vs: impl IntoIterator<Item = &'a SparseVec<K>>) -> usize {
    Echelon::from_vectors(vs).rank()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Col<K> {
    Image(K),
    Tag(usize),
}

/// Basis of `{x : Σ_j x_j images[j] = 0}` in canonical RREF, as sparse
/// vectors over unknown indices.
pub fn kernel<K: Ord + Clone>(images: &[SparseVec<K>]) -> Vec<SparseVec<usize>> {
    let mut e: Echelon<Col<K>> = Echelon::new();
    for (j, img) in images.iter().enumerate() {
        let mut row: SparseVec<Col<K>> = img
            .iter()
            .map(|(k, c)| (Col::Image(k.clone()), c.clone()))
            .collect();
        row.insert(Col::Tag(j), Scalar::one());
        e.insert(&row);
    }
    let mut ker: Echelon<usize> = Echelon::new();
    for row in &e.rows {
        if let Some((Col::Tag(_), _)) = row.first() {
            let v: SparseVec<usize> = row
                .iter()
                .map(|(k, c)| match k {
                    Col::Tag(j) => (*j, Scalar::from_integer(c.clone())),
                    Col::Image(_) => unreachable!("image entries precede tags"),
                })
                .collect();
            ker.insert(&v);
        }
    }
    ker.rref()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use proptest::prelude::*;

    fn sv(entries: &[(u32, i64)]) -> SparseVec<u32> {
        entries.iter().map(|&(k, c)| (k, int(c))).collect()
    }

    #[test]
    fn rank_and_membership() {
        let a = sv(&[(0, 1), (1, 2)]);
        let b = sv(&[(1, 1), (2, 1)]);
        let c = sv(&[(0, 1), (1, 4), (2, 2)]);
        let mut e = Echelon::new();
        assert!(e.insert(&a));
        assert!(e.insert(&b));
        assert!(!e.insert(&c));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&c));
        assert!(!e.contains(&sv(&[(2, 1)])));
    }

    #[test]
    fn rref_canonical() {
        let e = Echelon::from_vectors(&[sv(&[(0, 2), (1, 2)]), sv(&[(0, 1), (1, 3), (2, 1)])]);
        let r = e.rref();
        assert_eq!(
            r[0],
            [(0, int(1)), (2, Scalar::new((-1).into(), 2.into()))]
                .into_iter()
                .collect()
        );
        assert_eq!(
            r[1],
            [(1, int(1)), (2, Scalar::new(1.into(), 2.into()))]
                .into_iter()
                .collect()
        );
    }

    #[test]
    fn simple_kernel() {
        let imgs = vec![sv(&[(0, 1)]), sv(&[(0, 2)]), sv(&[(1, 1)])];
        let k = kernel(&imgs);
        assert_eq!(k.len(), 1);
        assert_eq!(
            k[0],
            [(0, int(1)), (1, Scalar::new((-1).into(), 2.into()))]
                .into_iter()
                .collect()
        );
    }

    proptest! {
        #[test]
        fn kernel_is_annihilated(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 4), 1..7)) {
            let imgs: Vec<SparseVec<u32>> = rows.iter().map(|r| {
                r.iter().enumerate().filter(|(_, c)| **c != 0).map(|(k, &c)| (k as u32, int(c))).collect()
            }).collect();
            let ker = kernel(&imgs);
            prop_assert_eq!(ker.len() + rank(&imgs), imgs.len());
            for v in &ker {
                let mut acc: SparseVec<u32> = BTreeMap::new();
                for (j, x) in v {
                    for (k, c) in &imgs[*j] {
                        *acc.entry(*k).or_insert_with(Scalar::zero) += x * c;
                    }
                }
                prop_assert!(acc.values().all(|c| c.is_zero()));
            }
        }

        #[test]
        fn normal_form_is_linear(a in prop::collection::vec(-3i64..4, 5), b in prop::collection::vec(-3i64..4, 5)) {
            let basis = Echelon::from_vectors(&[sv(&[(0, 1), (2, 1)]), sv(&[(1, 2), (3, -1), (4, 1)])]);
            let va: SparseVec<u32> = a.iter().enumerate().map(|(k, &c)| (k as u32, int(c))).collect();
            let vb: SparseVec<u32> = b.iter().enumerate().map(|(k, &c)| (k as u32, int(c))).collect();
            let mut vs = va.clone();
            for (k, c) in &vb { *vs.entry(*k).or_insert_with(Scalar::zero) += c; }
            let mut lhs = basis.normal_form(&vs);
            lhs.retain(|_, c| !c.is_zero());
            let mut rhs = basis.normal_form(&va);
            for (k, c) in basis.normal_form(&vb) { *rhs.entry(k).or_insert_with(Scalar::zero) += c; }
            rhs.retain(|_, c| !c.is_zero());
            prop_assert_eq!(lhs, rhs);
        }
    }
}

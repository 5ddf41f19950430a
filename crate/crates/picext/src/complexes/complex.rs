//! Bounded cochain complexes of finitely generated abelian groups.
//!
//! Missing degrees are the trivial group. Differentials raise degree by one
//! and must compose to zero on element classes; this is checked whenever a
//! complex is assembled.

use crate::abelian::{
    factor_through, descend_through, quotient_by, FgAbGroup, GroupMap, IntMatrix,
};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundedComplex {
    terms: BTreeMap<i64, FgAbGroup>,
    diffs: BTreeMap<i64, GroupMap>,
}

impl BoundedComplex {
    pub fn new(terms: BTreeMap<i64, FgAbGroup>, diffs: BTreeMap<i64, GroupMap>) -> Result<Self> {
        let c = BoundedComplex { terms, diffs };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        for (&n, d) in &self.diffs {
            if *d.source() != self.term(n) {
                return Err(Error::Invariant(format!(
                    "differential at {} has wrong source",
                    n
                )));
            }
            if *d.target() != self.term(n + 1) {
                return Err(Error::Invariant(format!(
                    "differential at {} has wrong target",
                    n
                )));
            }
            let next = self.diff(n + 1);
            if !next.compose(d).is_zero_map() {
                return Err(Error::Invariant(format!("d^2 != 0 at degree {}", n)));
            }
        }
        Ok(())
    }

    pub fn zero() -> Self {
        BoundedComplex {
            terms: BTreeMap::new(),
            diffs: BTreeMap::new(),
        }
    }

    /// A single group placed in one degree.
    pub fn concentrated(g: &FgAbGroup, degree: i64) -> Self {
        let mut terms = BTreeMap::new();
        if g.num_generators() > 0 {
            terms.insert(degree, g.clone());
        }
        BoundedComplex {
            terms,
            diffs: BTreeMap::new(),
        }
    }

    /// Two-term complex [source -> target] with the target in `top_degree`.
    pub fn two_term(d: GroupMap, top_degree: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(top_degree - 1, d.source().clone());
        terms.insert(top_degree, d.target().clone());
        let mut diffs = BTreeMap::new();
        diffs.insert(top_degree - 1, d);
        BoundedComplex { terms, diffs }
    }

    pub fn term(&self, n: i64) -> FgAbGroup {
        self.terms
            .get(&n)
            .cloned()
            .unwrap_or_else(FgAbGroup::trivial)
    }

    pub fn diff(&self, n: i64) -> GroupMap {
        self.diffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| GroupMap::zero(self.term(n), self.term(n + 1)))
    }

    /// Degrees with stored terms, ascending; empty for the zero complex.
    pub fn support(&self) -> Vec<i64> {
        self.terms.keys().cloned().collect()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().cloned()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().last().cloned()
    }

    pub fn is_degreewise_free(&self) -> bool {
        self.terms.values().all(|g| g.is_free())
    }

    pub fn is_degreewise_finite(&self) -> bool {
        self.terms.values().all(|g| g.is_finite())
    }

    /// (K[i])^n = K^{i+n}, differential scaled by (-1)^i.
    pub fn shift(&self, i: i64) -> BoundedComplex {
        let sign = if i.rem_euclid(2) == 0 { 1i64 } else { -1 };
        let terms = self
            .terms
            .iter()
            .map(|(&n, g)| (n - i, g.clone()))
            .collect();
        let diffs = self
            .diffs
            .iter()
            .map(|(&n, d)| {
                let d2 = if sign == 1 { d.clone() } else { d.neg() };
                (n - i, d2)
            })
            .collect();
        BoundedComplex { terms, diffs }
    }

    /// Good truncation at or below n: degrees < n unchanged, ker(d^n) at n.
    pub fn truncate_below(&self, n: i64) -> BoundedComplex {
        let (z, incl) = self.diff(n).kernel();
        let mut terms: BTreeMap<i64, FgAbGroup> = self
            .terms
            .iter()
            .filter(|(&k, _)| k < n)
            .map(|(&k, g)| (k, g.clone()))
            .collect();
        if z.num_generators() > 0 || self.terms.contains_key(&n) {
            terms.insert(n, z.clone());
        }
        let mut diffs: BTreeMap<i64, GroupMap> = self
            .diffs
            .iter()
            .filter(|(&k, _)| k < n - 1)
            .map(|(&k, d)| (k, d.clone()))
            .collect();
        if self.diffs.contains_key(&(n - 1)) || !self.term(n - 1).is_trivial() {
            let lowered = factor_through(&incl, &self.diff(n - 1))
                .expect("d^{n-1} lands in ker(d^n)");
            diffs.insert(n - 1, lowered);
        }
        BoundedComplex { terms, diffs }
    }

    /// Good truncation at or above n: coker(d^{n-1}) at n, degrees > n
    /// unchanged.
    pub fn truncate_above(&self, n: i64) -> BoundedComplex {
        let (q, proj) = self.diff(n - 1).cokernel();
        let mut terms: BTreeMap<i64, FgAbGroup> = self
            .terms
            .iter()
            .filter(|(&k, _)| k > n)
            .map(|(&k, g)| (k, g.clone()))
            .collect();
        if q.num_generators() > 0 || self.terms.contains_key(&n) {
            terms.insert(n, q.clone());
        }
        let mut diffs: BTreeMap<i64, GroupMap> = self
            .diffs
            .iter()
            .filter(|(&k, _)| k > n)
            .map(|(&k, d)| (k, d.clone()))
            .collect();
        if self.diffs.contains_key(&n) || !self.term(n + 1).is_trivial() {
            let descended =
                descend_through(&proj, &self.diff(n)).expect("d^n kills im(d^{n-1})");
            diffs.insert(n, descended);
        }
        BoundedComplex { terms, diffs }
    }

    /// H^n = ker(d^n) / im(d^{n-1}) in canonical form.
    pub fn cohomology(&self, n: i64) -> FgAbGroup {
        self.cohomology_data(n).group
    }

    pub fn cohomology_data(&self, n: i64) -> CohomologyData {
        let (z, incl) = self.diff(n).kernel();
        let lifted = factor_through(&incl, &self.diff(n - 1))
            .expect("im(d^{n-1}) lies in ker(d^n)");
        let (h, proj) = quotient_by(&z, lifted.matrix());
        CohomologyData {
            group: h,
            cycles: z,
            cycle_inclusion: incl,
            class_projection: proj,
        }
    }

    pub fn all_cohomology(&self) -> BTreeMap<i64, FgAbGroup> {
        let mut out = BTreeMap::new();
        if let (Some(lo), Some(hi)) = (self.min_degree(), self.max_degree()) {
            for n in lo..=hi {
                out.insert(n, self.cohomology(n));
            }
        }
        out
    }

    pub fn is_acyclic(&self) -> bool {
        self.all_cohomology().values().all(|h| h.is_trivial())
    }

    /// Degreewise direct sum, left summand first.
    pub fn direct_sum(a: &BoundedComplex, b: &BoundedComplex) -> BoundedComplex {
        let mut degrees: Vec<i64> = a.terms.keys().chain(b.terms.keys()).cloned().collect();
        degrees.sort_unstable();
        degrees.dedup();
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for &n in &degrees {
            terms.insert(n, FgAbGroup::direct_sum(&[a.term(n), b.term(n)]));
        }
        for &n in &degrees {
            let src = terms.get(&n).cloned().unwrap();
            let tgt = terms
                .get(&(n + 1))
                .cloned()
                .unwrap_or_else(|| FgAbGroup::direct_sum(&[a.term(n + 1), b.term(n + 1)]));
            let m = a.diff(n).matrix().direct_sum(b.diff(n).matrix());
            diffs.insert(n, GroupMap::new(src, tgt, m).expect("sum differential"));
        }
        BoundedComplex { terms, diffs }
    }

    /// Tensor product with Koszul signs. Summands of degree n are the pairs
    /// (i, j = n - i) in ascending i.
    pub fn tensor(a: &BoundedComplex, b: &BoundedComplex) -> BoundedComplex {
        let (Some(alo), Some(ahi), Some(blo), Some(bhi)) = (
            a.min_degree(),
            a.max_degree(),
            b.min_degree(),
            b.max_degree(),
        ) else {
            return BoundedComplex::zero();
        };
        let mut terms = BTreeMap::new();
        let mut summands: BTreeMap<i64, Vec<i64>> = BTreeMap::new(); // n -> list of i
        for n in (alo + blo)..=(ahi + bhi) {
            let mut parts = Vec::new();
            let mut is = Vec::new();
            for i in alo..=ahi {
                let j = n - i;
                if j < blo || j > bhi {
                    continue;
                }
                parts.push(tensor_group(&a.term(i), &b.term(j)));
                is.push(i);
            }
            terms.insert(n, FgAbGroup::direct_sum(&parts));
            summands.insert(n, is);
        }
        let mut diffs = BTreeMap::new();
        for n in (alo + blo)..(ahi + bhi) {
            let src = terms.get(&n).unwrap().clone();
            let tgt = terms.get(&(n + 1)).unwrap().clone();
            let src_is = summands.get(&n).unwrap();
            let tgt_is = summands.get(&(n + 1)).unwrap();
            let mut blocks: Vec<Vec<IntMatrix>> = Vec::new();
            for &ti in tgt_is {
                let tj = n + 1 - ti;
                let mut row = Vec::new();
                for &si in src_is {
                    let sj = n - si;
                    let rows = tensor_group(&a.term(ti), &b.term(tj)).num_generators();
                    let cols = tensor_group(&a.term(si), &b.term(sj)).num_generators();
                    let blk = if ti == si + 1 && tj == sj {
                        a.diff(si)
                            .matrix()
                            .kronecker(&IntMatrix::identity(b.term(sj).num_generators()))
                    } else if ti == si && tj == sj + 1 {
                        let m = IntMatrix::identity(a.term(si).num_generators())
                            .kronecker(b.diff(sj).matrix());
                        if si.rem_euclid(2) == 0 {
                            m
                        } else {
                            m.neg()
                        }
                    } else {
                        IntMatrix::zero(rows, cols)
                    };
                    debug_assert_eq!((blk.rows(), blk.cols()), (rows, cols));
                    row.push(blk);
                }
                blocks.push(row);
            }
            let m = if blocks.is_empty() {
                IntMatrix::zero(tgt.num_generators(), src.num_generators())
            } else {
                IntMatrix::from_blocks(&blocks)
            };
            diffs.insert(n, GroupMap::new(src, tgt, m).expect("tensor differential"));
        }
        let c = BoundedComplex { terms, diffs };
        debug_assert!(c.validate().is_ok());
        c
    }
}

/// Cohomology at one degree together with the cycle subgroup data needed to
/// push maps through.
pub struct CohomologyData {
    pub group: FgAbGroup,
    pub cycles: FgAbGroup,
    /// cycles -> K^n
    pub cycle_inclusion: GroupMap,
    /// cycles -> H^n (generator-preserving)
    pub class_projection: GroupMap,
}

/// Presentation of A (x) B on pairwise generator products.
pub fn tensor_group(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let na = a.num_generators();
    let nb = b.num_generators();
    let ra = a.relations();
    let rb = b.relations();
    let left = ra.kronecker(&IntMatrix::identity(nb));
    let right = IntMatrix::identity(na).kronecker(rb);
    FgAbGroup::new(na * nb, left.hstack(&right))
}

/// Kronecker product of maps on the generator presentation of the tensor.
pub fn tensor_map(f: &GroupMap, g: &GroupMap) -> GroupMap {
    let src = tensor_group(f.source(), g.source());
    let tgt = tensor_group(f.target(), g.target());
    GroupMap::new(src, tgt, f.matrix().kronecker(g.matrix())).expect("tensor of maps")
}

/// The scalar multiple of a bigint as i64-safe check helper.
pub fn bigint(v: i64) -> BigInt {
    BigInt::from(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::GroupMap;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    fn doubling() -> BoundedComplex {
        // [Z ->2 Z] in degrees -1, 0
        let d = GroupMap::from_i64(z(), z(), &[vec![2]]).unwrap();
        BoundedComplex::two_term(d, 0)
    }

    #[test]
    fn cohomology_of_doubling() {
        let k = doubling();
        assert_eq!(k.cohomology(0).canonical_form().torsion, vec![bigint(2)]);
        assert!(k.cohomology(-1).is_trivial());
    }

    #[test]
    fn cohomology_of_reduction() {
        // [Z/4 -> Z/2] reduction, degrees -1, 0: H^{-1} = Z/2, H^0 = 0
        let d = GroupMap::from_i64(FgAbGroup::cyclic(4), FgAbGroup::cyclic(2), &[vec![1]]).unwrap();
        let k = BoundedComplex::two_term(d, 0);
        assert_eq!(k.cohomology(-1).canonical_form().torsion, vec![bigint(2)]);
        assert!(k.cohomology(0).is_trivial());
    }

    #[test]
    fn exact_complex_is_acyclic() {
        let d = GroupMap::identity(&FgAbGroup::cyclic(6));
        let k = BoundedComplex::two_term(d, 0);
        assert!(k.is_acyclic());
    }

    #[test]
    fn shift_reindexes() {
        let k = doubling();
        assert_eq!(k.shift(0), k);
        let s = k.shift(1);
        assert_eq!(s.support(), vec![-2, -1]);
        for n in -3..=1 {
            assert_eq!(
                s.cohomology(n).canonical_form(),
                k.cohomology(n + 1).canonical_form()
            );
        }
    }

    #[test]
    fn truncate_keeps_low_cohomology() {
        // tau_{<=0} of [Z ->id Z] in degrees 0, 1: kernel at 0 is trivial
        let d = GroupMap::from_i64(z(), z(), &[vec![1]]).unwrap();
        let k = BoundedComplex::two_term(d, 1);
        let t = k.truncate_below(0);
        assert!(t.term(0).is_trivial());
        assert!(t.term(1).is_trivial());

        let k = doubling();
        let t = k.truncate_below(0);
        for n in -2..=0 {
            assert_eq!(
                t.cohomology(n).canonical_form(),
                k.cohomology(n).canonical_form()
            );
        }

        let t = k.truncate_above(-1);
        for n in -1..=1 {
            assert_eq!(
                t.cohomology(n).canonical_form(),
                k.cohomology(n).canonical_form(),
                "degree {}",
                n
            );
        }
    }

    #[test]
    fn tensor_with_unit_is_identity_on_cohomology() {
        let k = doubling();
        let unit = BoundedComplex::concentrated(&z(), 0);
        let t = BoundedComplex::tensor(&k, &unit);
        for n in -2..=1 {
            assert_eq!(
                t.cohomology(n).canonical_form(),
                k.cohomology(n).canonical_form()
            );
        }
    }

    #[test]
    fn tensor_of_coprime_cyclics_vanishes() {
        let a = BoundedComplex::concentrated(&FgAbGroup::cyclic(2), 0);
        let b = BoundedComplex::concentrated(&FgAbGroup::cyclic(3), 0);
        let t = BoundedComplex::tensor(&a, &b);
        assert!(t.cohomology(0).is_trivial());
    }

    #[test]
    fn tensor_of_free_two_terms_has_expected_ranks() {
        // ranks (r1 s1, r1 s0 + r0 s1, r0 s0) in degrees -2, -1, 0
        let a = BoundedComplex::two_term(GroupMap::zero(FgAbGroup::free(2), FgAbGroup::free(3)), 0);
        let b = BoundedComplex::two_term(GroupMap::zero(FgAbGroup::free(1), FgAbGroup::free(2)), 0);
        let t = BoundedComplex::tensor(&a, &b);
        assert_eq!(t.term(-2).num_generators(), 2 * 1);
        assert_eq!(t.term(-1).num_generators(), 2 * 2 + 3 * 1);
        assert_eq!(t.term(0).num_generators(), 3 * 2);
    }

    #[test]
    fn tensor_group_of_cyclics_is_gcd() {
        let t = tensor_group(&FgAbGroup::cyclic(4), &FgAbGroup::cyclic(6));
        assert_eq!(t.canonical_form().torsion, vec![bigint(2)]);
    }
}

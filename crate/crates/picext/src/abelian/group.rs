//! Finitely generated abelian groups given by integer presentations.
//!
//! A group is Z^n modulo the column span of a relation matrix. Every group
//! carries a diagonalizing change of coordinates from construction on: in
//! Smith coordinates the relation lattice is a product of scaled axes, so
//! normalization, membership and element enumeration are per-coordinate
//! arithmetic. Direct sums combine coordinate data blockwise and skip the
//! Smith reduction entirely, which keeps large Hom-space groups cheap.

use super::matrix::IntMatrix;
use super::smith;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

#[derive(Clone)]
pub struct FgAbGroup {
    inner: Arc<GroupInner>,
}

struct GroupInner {
    num_generators: usize,
    relations: IntMatrix,
    /// y = u * x diagonalizes the relation lattice.
    u: IntMatrix,
    u_inv: IntMatrix,
    /// Per Smith coordinate: modulus >= 1 for torsion coordinates, 0 for free.
    moduli: Vec<BigInt>,
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl PartialEq for FgAbGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.num_generators == other.inner.num_generators
                && self.inner.relations == other.inner.relations)
    }
}
impl Eq for FgAbGroup {}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({})", self.canonical_form())
    }
}

/// Canonical isomorphism invariant: Z^free_rank (+) Z/d1 (+) ... with
/// d_i >= 2 and d_i | d_{i+1}.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
pub struct CanonicalForm {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for d in &self.torsion {
            parts.push(format!("Z/{}", d));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl CanonicalForm {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        let mut o = BigInt::one();
        for d in &self.torsion {
            o *= d;
        }
        Some(o)
    }
}

/// Divisibility-chain normalization of a multiset of torsion orders.
/// Factors 0 and 1 are ignored; output is ascending with d_i | d_{i+1}.
fn invariants_from_moduli(moduli: &[BigInt]) -> Vec<BigInt> {
    use std::collections::BTreeMap;
    let mut by_prime: BTreeMap<BigInt, Vec<u32>> = BTreeMap::new();
    for d in moduli {
        if d.is_zero() || d.is_one() {
            continue;
        }
        let mut n = d.abs();
        let mut p = BigInt::from(2);
        while &p * &p <= n {
            if (&n % &p).is_zero() {
                let mut e = 0u32;
                while (&n % &p).is_zero() {
                    n /= &p;
                    e += 1;
                }
                by_prime.entry(p.clone()).or_default().push(e);
            }
            p += 1;
        }
        if n > BigInt::one() {
            by_prime.entry(n).or_default().push(1);
        }
    }
    let mut count = 0usize;
    for exps in by_prime.values_mut() {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        count = count.max(exps.len());
    }
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let mut f = BigInt::one();
        for (p, exps) in &by_prime {
            if let Some(e) = exps.get(k) {
                f *= p.pow(*e);
            }
        }
        out.push(f);
    }
    out.reverse();
    out
}

impl FgAbGroup {
    pub fn new(num_generators: usize, relations: IntMatrix) -> Self {
        assert_eq!(
            relations.rows(),
            num_generators,
            "relation matrix must have one row per generator"
        );
        if relations.cols() == 0 {
            return Self::from_parts(
                num_generators,
                relations,
                IntMatrix::identity(num_generators),
                IntMatrix::identity(num_generators),
                vec![BigInt::zero(); num_generators],
            );
        }
        let snf = smith::smith_normal_form(&relations);
        let mut moduli = vec![BigInt::zero(); num_generators];
        for (i, m) in moduli.iter_mut().enumerate().take(snf.rank) {
            *m = snf.d[(i, i)].clone();
        }
        Self::from_parts(num_generators, relations, snf.u, snf.u_inv, moduli)
    }

    fn from_parts(
        num_generators: usize,
        relations: IntMatrix,
        u: IntMatrix,
        u_inv: IntMatrix,
        moduli: Vec<BigInt>,
    ) -> Self {
        let free_rank = moduli.iter().filter(|d| d.is_zero()).count();
        let invariant_factors = invariants_from_moduli(&moduli);
        FgAbGroup {
            inner: Arc::new(GroupInner {
                num_generators,
                relations,
                u,
                u_inv,
                moduli,
                free_rank,
                invariant_factors,
            }),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup::new(rank, IntMatrix::zero(rank, 0))
    }

    pub fn trivial() -> Self {
        FgAbGroup::free(0)
    }

    pub fn cyclic(d: u64) -> Self {
        FgAbGroup::new(1, IntMatrix::new(1, 1, vec![BigInt::from(d)]))
    }

    /// Z^free_rank (+) Z/d1 (+) ... as a presentation.
    pub fn from_invariants(free_rank: usize, torsion: &[u64]) -> Self {
        let n = free_rank + torsion.len();
        let mut rel = IntMatrix::zero(n, torsion.len());
        let mut moduli = vec![BigInt::zero(); n];
        for (j, d) in torsion.iter().enumerate() {
            rel[(free_rank + j, j)] = BigInt::from(*d);
            moduli[free_rank + j] = BigInt::from(*d);
        }
        Self::from_parts(n, rel, IntMatrix::identity(n), IntMatrix::identity(n), moduli)
    }

    /// Block sum; coordinate data is combined without re-reduction.
    pub fn direct_sum(groups: &[FgAbGroup]) -> Self {
        let mut rel = IntMatrix::zero(0, 0);
        let mut u = IntMatrix::zero(0, 0);
        let mut u_inv = IntMatrix::zero(0, 0);
        let mut moduli = Vec::new();
        for g in groups {
            rel = rel.direct_sum(g.relations());
            u = u.direct_sum(&g.inner.u);
            u_inv = u_inv.direct_sum(&g.inner.u_inv);
            moduli.extend(g.inner.moduli.iter().cloned());
        }
        let n = groups.iter().map(|g| g.num_generators()).sum();
        Self::from_parts(n, rel, u, u_inv, moduli)
    }

    /// n copies of `g`.
    pub fn power(g: &FgAbGroup, n: usize) -> Self {
        Self::direct_sum(&vec![g.clone(); n])
    }

    pub fn num_generators(&self) -> usize {
        self.inner.num_generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.inner.relations
    }

    /// y = u * x diagonalizes the relations; returns (u, u_inv).
    pub(crate) fn coord_change(&self) -> (&IntMatrix, &IntMatrix) {
        (&self.inner.u, &self.inner.u_inv)
    }

    /// Per Smith coordinate: modulus (>= 1 torsion, 0 free).
    pub(crate) fn moduli(&self) -> &[BigInt] {
        &self.inner.moduli
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        CanonicalForm {
            free_rank: self.inner.free_rank,
            torsion: self.inner.invariant_factors.clone(),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.inner.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.inner.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.inner.free_rank == 0 && self.inner.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.inner.free_rank == 0
    }

    /// No torsion at all.
    pub fn is_free(&self) -> bool {
        self.inner.invariant_factors.is_empty()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.canonical_form().order()
    }

    fn to_smith(&self, coords: &[BigInt]) -> Vec<BigInt> {
        self.inner.u.mul_vec(coords)
    }

    fn from_smith(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.inner.u_inv.mul_vec(y)
    }

    /// Canonical representative of a coordinate vector modulo relations.
    pub fn normalize(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.inner.num_generators);
        let mut y = self.to_smith(coords);
        for (yi, d) in y.iter_mut().zip(&self.inner.moduli) {
            if !d.is_zero() {
                *yi = yi.mod_floor(d);
            }
        }
        self.from_smith(&y)
    }

    /// Does the vector lie in the column span of the relations?
    pub fn is_relation(&self, coords: &[BigInt]) -> bool {
        assert_eq!(coords.len(), self.inner.num_generators);
        let y = self.to_smith(coords);
        y.iter().zip(&self.inner.moduli).all(|(yi, d)| {
            if d.is_zero() {
                yi.is_zero()
            } else {
                (yi % d).is_zero()
            }
        })
    }

    pub fn element(&self, coords: Vec<BigInt>) -> GroupElement {
        let coords = self.normalize(&coords);
        GroupElement {
            parent: self.clone(),
            coords,
        }
    }

    pub fn element_i64(&self, coords: &[i64]) -> GroupElement {
        self.element(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(&self) -> GroupElement {
        self.element(vec![BigInt::zero(); self.inner.num_generators])
    }

    /// The i-th generator as an element.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coords = vec![BigInt::zero(); self.inner.num_generators];
        coords[i] = BigInt::one();
        self.element(coords)
    }

    /// Smith coordinates that vary over a finite group, with moduli >= 2.
    fn varying(&self) -> Vec<(usize, BigInt)> {
        self.inner
            .moduli
            .iter()
            .enumerate()
            .filter(|(_, d)| **d > BigInt::one())
            .map(|(i, d)| (i, d.clone()))
            .collect()
    }

    /// Every element class exactly once, in a fixed mixed-radix order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        let order: usize = self
            .order()
            .ok_or_else(|| Error::Unsupported("element enumeration requires a finite group".into()))?
            .try_into()
            .map_err(|_| Error::Unsupported("group too large to enumerate".into()))?;
        let mut out = Vec::with_capacity(order);
        for idx in 0..order {
            out.push(self.element_from_index(idx)?);
        }
        Ok(out)
    }

    /// Inverse of `element_index`; the last varying coordinate moves fastest.
    pub fn element_from_index(&self, mut idx: usize) -> Result<GroupElement> {
        if !self.is_finite() {
            return Err(Error::Unsupported("element indexing requires a finite group".into()));
        }
        let vary = self.varying();
        let mut y = vec![BigInt::zero(); self.inner.num_generators];
        for (i, d) in vary.iter().rev() {
            let d_us: usize = d.try_into().expect("modulus fits usize");
            y[*i] = BigInt::from(idx % d_us);
            idx /= d_us;
        }
        if idx != 0 {
            return Err(Error::Argument("element index out of range".into()));
        }
        Ok(self.element(self.from_smith(&y)))
    }

    pub fn element_index(&self, e: &GroupElement) -> Result<usize> {
        if e.parent != *self {
            return Err(Error::Argument("element of a different group".into()));
        }
        if !self.is_finite() {
            return Err(Error::Unsupported("element indexing requires a finite group".into()));
        }
        let y = self.to_smith(&e.coords);
        let mut idx = 0usize;
        for (i, d) in self.varying() {
            let d_us: usize = (&d).try_into().expect("modulus fits usize");
            let yi = y[i].mod_floor(&d);
            let yi_us: usize = (&yi).try_into().expect("coordinate fits usize");
            idx = idx * d_us + yi_us;
        }
        Ok(idx)
    }
}

#[derive(Clone)]
pub struct GroupElement {
    parent: FgAbGroup,
    coords: Vec<BigInt>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        if self.parent != other.parent {
            return false;
        }
        let diff: Vec<BigInt> = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        self.parent.is_relation(&diff)
    }
}
impl Eq for GroupElement {}

impl GroupElement {
    pub fn parent(&self) -> &FgAbGroup {
        &self.parent
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.parent.is_relation(&self.coords)
    }

    pub fn add(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.parent, other.parent, "elements of different groups");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        self.parent.element(coords)
    }

    pub fn sub(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.parent, other.parent, "elements of different groups");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        self.parent.element(coords)
    }

    pub fn neg(&self) -> GroupElement {
        self.parent.element(self.coords.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &BigInt) -> GroupElement {
        self.parent.element(self.coords.iter().map(|a| a * c).collect())
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}]",
            self.coords
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        // one relation 2*g1, two generators -> Z (+) Z/2
        let g = FgAbGroup::new(2, IntMatrix::from_rows_i64(&[vec![2], vec![0]]));
        let cf = g.canonical_form();
        assert_eq!(cf.free_rank, 1);
        assert_eq!(cf.torsion, vec![BigInt::from(2)]);

        let free3 = FgAbGroup::free(3);
        assert_eq!(free3.canonical_form().free_rank, 3);
        assert!(free3.canonical_form().torsion.is_empty());

        // relations diag(2,3) -> Z/6
        let g = FgAbGroup::new(2, IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 3]]));
        let cf = g.canonical_form();
        assert_eq!(cf.free_rank, 0);
        assert_eq!(cf.torsion, vec![BigInt::from(6)]);
    }

    #[test]
    fn direct_sum_matches_generic_construction() {
        let a = FgAbGroup::cyclic(4);
        let b = FgAbGroup::cyclic(6);
        let s = FgAbGroup::direct_sum(&[a.clone(), b.clone()]);
        let generic = FgAbGroup::new(2, IntMatrix::from_rows_i64(&[vec![4, 0], vec![0, 6]]));
        assert_eq!(s.canonical_form(), generic.canonical_form());
        assert_eq!(s.canonical_form().torsion, vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn element_enumeration() {
        let z3 = FgAbGroup::cyclic(3);
        assert_eq!(z3.elements().unwrap().len(), 3);

        let klein = FgAbGroup::from_invariants(0, &[2, 2]);
        let els = klein.elements().unwrap();
        assert_eq!(els.len(), 4);
        for (i, e) in els.iter().enumerate() {
            assert_eq!(klein.element_index(e).unwrap(), i);
        }

        let triv = FgAbGroup::trivial();
        assert_eq!(triv.elements().unwrap().len(), 1);

        assert!(FgAbGroup::free(1).elements().is_err());
    }

    #[test]
    fn element_equality_mod_relations() {
        let z4 = FgAbGroup::cyclic(4);
        let a = z4.element_i64(&[5]);
        let b = z4.element_i64(&[1]);
        assert_eq!(a, b);
        assert!(z4.element_i64(&[4]).is_zero());
    }

    #[test]
    fn display_of_canonical_form() {
        let g = FgAbGroup::from_invariants(1, &[2, 4]);
        assert_eq!(g.canonical_form().to_string(), "Z + Z/2 + Z/4");
        assert_eq!(FgAbGroup::trivial().canonical_form().to_string(), "0");
    }
}

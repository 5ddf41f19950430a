//! Homomorphisms between presented groups, with kernels and cokernels.

use super::group::{FgAbGroup, GroupElement};
use super::matrix::IntMatrix;
use super::smith::{self, SmithDecomposition};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A homomorphism source -> target, stored as a matrix on generators
/// (target generators x source generators).
#[derive(Clone, PartialEq, Eq)]
pub struct GroupMap {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl fmt::Debug for GroupMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupMap({:?} -> {:?}, {:?})",
            self.source, self.target, self.matrix
        )
    }
}

impl GroupMap {
    /// Checked constructor: the matrix must send every source relation into
    /// the target relation lattice.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.num_generators() || matrix.cols() != source.num_generators() {
            return Err(Error::Argument(format!(
                "map matrix must be {}x{}, got {}x{}",
                target.num_generators(),
                source.num_generators(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        let m = GroupMap {
            source,
            target,
            matrix,
        };
        if !m.is_well_defined() {
            return Err(Error::Invariant(
                "matrix does not send source relations into target relations".into(),
            ));
        }
        Ok(m)
    }

    fn is_well_defined(&self) -> bool {
        let moved = self.matrix.mul(self.source.relations());
        (0..moved.cols()).all(|j| self.target.is_relation(&moved.column(j)))
    }

    pub fn from_i64(source: FgAbGroup, target: FgAbGroup, rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(source, target, IntMatrix::from_rows_i64(rows))
    }

    pub fn zero(source: FgAbGroup, target: FgAbGroup) -> Self {
        let matrix = IntMatrix::zero(target.num_generators(), source.num_generators());
        GroupMap {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        GroupMap {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.num_generators()),
        }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, e: &GroupElement) -> GroupElement {
        assert_eq!(*e.parent(), self.source, "element of the wrong group");
        self.target.element(self.matrix.mul_vec(e.coords()))
    }

    /// self o other (other applied first).
    pub fn compose(&self, other: &GroupMap) -> GroupMap {
        assert_eq!(other.target, self.source, "composition mismatch");
        GroupMap {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn add(&self, other: &GroupMap) -> GroupMap {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        GroupMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.add(&other.matrix),
        }
    }

    pub fn sub(&self, other: &GroupMap) -> GroupMap {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        GroupMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.sub(&other.matrix),
        }
    }

    pub fn neg(&self) -> GroupMap {
        GroupMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.neg(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> GroupMap {
        GroupMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.scale(c),
        }
    }

    /// Equal as maps of element classes.
    pub fn eq_as_maps(&self, other: &GroupMap) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        let diff = self.matrix.sub(&other.matrix);
        (0..diff.cols()).all(|j| self.target.is_relation(&diff.column(j)))
    }

    pub fn is_zero_map(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_relation(&self.matrix.column(j)))
    }

    /// Kernel subgroup with its inclusion. The kernel lattice is carved out
    /// coordinate-by-coordinate in the target's Smith coordinates: free
    /// coordinates give exact integer conditions, torsion coordinates give
    /// congruences that restrict the lattice one row at a time.
    pub fn kernel(&self) -> (FgAbGroup, GroupMap) {
        let n = self.source.num_generators();
        let (u, _) = self.target.coord_change();
        let cond = u.mul(&self.matrix); // rows paired with target moduli
        let moduli = self.target.moduli();

        let exact_rows: Vec<usize> = moduli
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_zero())
            .map(|(i, _)| i)
            .collect();

        let mut basis = if exact_rows.is_empty() {
            IntMatrix::identity(n)
        } else {
            let sub = cond.select_rows(&exact_rows);
            smith::kernel_basis(&smith::smith_normal_form(&sub))
        };

        for (i, d) in moduli.iter().enumerate() {
            if *d <= BigInt::one() {
                continue;
            }
            if basis.cols() == 0 {
                break;
            }
            // condition: (row_i . basis) z == 0 mod d
            let row = cond.select_rows(&[i]);
            let mut v = row.mul(&basis); // 1 x k
            let mut all_zero = true;
            for j in 0..v.cols() {
                let r = v[(0, j)].mod_floor(d);
                all_zero &= r.is_zero();
                v[(0, j)] = r;
            }
            if all_zero {
                continue;
            }
            let snf = smith::smith_normal_form(&v);
            // v * V = (g, 0, ..) modulo sign
            basis = basis.mul(&snf.v);
            let g = v.mul(&snf.v)[(0, 0)].abs();
            let t = d / g.gcd(d);
            for r in 0..basis.rows() {
                let scaled = &basis[(r, 0)] * &t;
                basis[(r, 0)] = scaled;
            }
        }

        let basis = smith::column_hnf(&basis);
        let k = basis.cols();

        // Relations of the kernel group: source relations expressed in the
        // kernel basis (they lie in it because the map is well defined).
        let rel_src = self.source.relations();
        let basis_snf = smith::smith_normal_form(&basis);
        let mut rel_entries = IntMatrix::zero(k, rel_src.cols());
        for j in 0..rel_src.cols() {
            let z = smith::solve(&basis_snf, &rel_src.column(j))
                .expect("source relations must lie in the kernel lattice");
            rel_entries.set_column(j, &z);
        }
        let kernel_group = FgAbGroup::new(k, rel_entries);
        let incl = GroupMap {
            source: kernel_group.clone(),
            target: self.source.clone(),
            matrix: basis,
        };
        (kernel_group, incl)
    }

    /// Cokernel presentation: target generators, relations extended by the
    /// image columns. The projection keeps generators.
    pub fn cokernel(&self) -> (FgAbGroup, GroupMap) {
        let rel = self.target.relations().hstack(&self.matrix);
        let coker = FgAbGroup::new(self.target.num_generators(), rel);
        let proj = GroupMap {
            source: self.target.clone(),
            target: coker.clone(),
            matrix: IntMatrix::identity(self.target.num_generators()),
        };
        (coker, proj)
    }

    /// Image subgroup of the target, with inclusion.
    pub fn image(&self) -> (FgAbGroup, GroupMap) {
        subgroup_generated(&self.target, &self.matrix)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_trivial()
    }

    /// A preimage of `e` under the map, if one exists.
    pub fn preimage(&self, e: &GroupElement) -> Option<GroupElement> {
        assert_eq!(*e.parent(), self.target);
        let stacked = self.matrix.hstack(self.target.relations());
        let snf = smith::smith_normal_form(&stacked);
        let sol = smith::solve(&snf, e.coords())?;
        let x = sol[..self.source.num_generators()].to_vec();
        Some(self.source.element(x))
    }
}

/// Subgroup of `ambient` generated by the columns of `gens`, presented
/// abstractly, with its inclusion map.
pub fn subgroup_generated(ambient: &FgAbGroup, gens: &IntMatrix) -> (FgAbGroup, GroupMap) {
    assert_eq!(gens.rows(), ambient.num_generators());
    // Lattice spanned by generators and relations, canonical basis.
    let lat = smith::column_hnf(&gens.hstack(ambient.relations()));
    let k = lat.cols();
    let lat_snf = smith::smith_normal_form(&lat);
    let rel_amb = ambient.relations();
    let mut rel = IntMatrix::zero(k, rel_amb.cols());
    for j in 0..rel_amb.cols() {
        let z = smith::solve(&lat_snf, &rel_amb.column(j)).expect("relations lie in the lattice");
        rel.set_column(j, &z);
    }
    let sub = FgAbGroup::new(k, rel);
    let incl = GroupMap {
        source: sub.clone(),
        target: ambient.clone(),
        matrix: lat,
    };
    (sub, incl)
}

/// Quotient of `ambient` by the subgroup generated by the columns of `gens`.
pub fn quotient_by(ambient: &FgAbGroup, gens: &IntMatrix) -> (FgAbGroup, GroupMap) {
    assert_eq!(gens.rows(), ambient.num_generators());
    let rel = ambient.relations().hstack(gens);
    let q = FgAbGroup::new(ambient.num_generators(), rel);
    let proj = GroupMap {
        source: ambient.clone(),
        target: q.clone(),
        matrix: IntMatrix::identity(ambient.num_generators()),
    };
    (q, proj)
}

/// Given an inclusion-like map `incl: K -> A` and `f: B -> A` whose image
/// lies in the image of `incl` (as classes), produce g: B -> K with
/// incl o g = f.
pub fn factor_through(incl: &GroupMap, f: &GroupMap) -> Result<GroupMap> {
    if incl.target() != f.target() {
        return Err(Error::Argument("factor_through: targets differ".into()));
    }
    let stacked = incl.matrix().hstack(f.target().relations());
    let snf = smith::smith_normal_form(&stacked);
    let k = incl.source().num_generators();
    let mut m = IntMatrix::zero(k, f.source().num_generators());
    for j in 0..f.matrix().cols() {
        let sol = smith::solve(&snf, &f.matrix().column(j)).ok_or_else(|| {
            Error::Invariant("factor_through: image does not lie in the subobject".into())
        })?;
        m.set_column(j, &sol[..k]);
    }
    GroupMap::new(f.source().clone(), incl.source().clone(), m)
}

/// Given a generator-preserving projection `proj: A -> Q` (cokernel style)
/// and `f: A -> B` that kills the extra relations of Q, produce the induced
/// map Q -> B reusing f's matrix.
pub fn descend_through(proj: &GroupMap, f: &GroupMap) -> Result<GroupMap> {
    if proj.source() != f.source() {
        return Err(Error::Argument("descend_through: sources differ".into()));
    }
    if proj.matrix() != &IntMatrix::identity(proj.source().num_generators()) {
        return Err(Error::Argument(
            "descend_through requires a generator-preserving projection".into(),
        ));
    }
    GroupMap::new(proj.target().clone(), f.target().clone(), f.matrix().clone())
}

/// Hom(A, B) as an abstract group together with maps realizing its
/// generators and a coordinate routine.
pub struct HomGroup {
    pub group: FgAbGroup,
    pub basis: Vec<GroupMap>,
    source: FgAbGroup,
    target: FgAbGroup,
    /// For each source Smith coordinate j: the target subgroup B[a_j] (or B
    /// itself when a_j = 0) in which the image of the j-th Smith generator
    /// lives; stored as (sub, incl).
    slots: Vec<(FgAbGroup, GroupMap)>,
}

impl HomGroup {
    /// Coordinates of a concrete map in the Hom presentation.
    pub fn coords_of(&self, f: &GroupMap) -> Result<Vec<BigInt>> {
        if f.source() != &self.source || f.target() != &self.target {
            return Err(Error::Argument("coords_of: wrong source or target".into()));
        }
        let (_, u_inv) = self.source.coord_change();
        // images of the Smith generators
        let img = f.matrix().mul(u_inv);
        let mut coords = Vec::new();
        for (j, (sub, incl)) in self.slots.iter().enumerate() {
            let w = self.target.element(img.column(j));
            let pre = incl
                .preimage(&w)
                .ok_or_else(|| Error::Invariant("coords_of: image outside torsion slot".into()))?;
            let (su, _) = sub.coord_change();
            let y = su.mul_vec(pre.coords());
            for (yi, d) in y.iter().zip(sub.moduli()) {
                coords.push(if d.is_zero() { yi.clone() } else { yi.mod_floor(d) });
            }
            let _ = j;
        }
        Ok(coords)
    }
}

/// Hom(A, B) via the cyclic decomposition of A: a Smith generator of order a
/// can map to any element of B[a], a free Smith generator to any element of B.
pub fn hom_group(a: &FgAbGroup, b: &FgAbGroup) -> HomGroup {
    let (u_a, _) = a.coord_change();
    let mut slot_groups = Vec::new();
    let mut slots = Vec::new();
    for d in a.moduli() {
        let (sub, incl) = if d.is_zero() {
            // free generator: whole of B
            (b.clone(), GroupMap::identity(b))
        } else {
            let mult = GroupMap {
                source: b.clone(),
                target: b.clone(),
                matrix: IntMatrix::identity(b.num_generators()).scale(d),
            };
            mult.kernel()
        };
        slot_groups.push(sub.clone());
        slots.push((sub, incl));
    }
    let group = FgAbGroup::direct_sum(&slot_groups);

    // Basis map for each generator of the Hom group: send the j-th Smith
    // generator of A to the chosen element of its slot, everything else to 0.
    let mut basis = Vec::new();
    for (j, (sub, incl)) in slots.iter().enumerate() {
        for g in 0..sub.num_generators() {
            let w = incl.matrix().column(g); // element of B
            // matrix on original generators: col_i = w * (u_a row j applied to e_i)
            let mut m = IntMatrix::zero(b.num_generators(), a.num_generators());
            for i in 0..a.num_generators() {
                let c = u_a[(j, i)].clone();
                if c.is_zero() {
                    continue;
                }
                for r in 0..b.num_generators() {
                    m[(r, i)] = &w[r] * &c;
                }
            }
            basis.push(GroupMap {
                source: a.clone(),
                target: b.clone(),
                matrix: m,
            });
        }
    }
    HomGroup {
        group,
        basis,
        source: a.clone(),
        target: b.clone(),
        slots,
    }
}

/// Brute-force count of homomorphisms A -> B for small finite groups.
/// Test oracle only.
pub fn count_homs_brute(a: &FgAbGroup, b: &FgAbGroup) -> Result<usize> {
    let a_els = a.elements()?;
    let b_els = b.elements()?;
    let n = a.num_generators();
    // candidate images per generator
    let mut count = 0usize;
    let total = b_els.len().checked_pow(n as u32).ok_or_else(|| {
        Error::SizeGuard("hom brute force too large".into())
    })?;
    let _ = a_els;
    for mut idx in 0..total {
        let mut cols = Vec::with_capacity(n);
        for _ in 0..n {
            cols.push(b_els[idx % b_els.len()].clone());
            idx /= b_els.len();
        }
        let mut m = IntMatrix::zero(b.num_generators(), n);
        for (j, e) in cols.iter().enumerate() {
            m.set_column(j, e.coords());
        }
        if GroupMap::new(a.clone(), b.clone(), m).is_ok() {
            count += 1;
        }
    }
    Ok(count)
}

/// Cached Smith decomposition for repeated preimage solves against a fixed
/// map-with-relations system.
pub struct Solver {
    snf: SmithDecomposition,
    n: usize,
}

impl Solver {
    pub fn new(m: &GroupMap) -> Solver {
        let stacked = m.matrix().hstack(m.target().relations());
        Solver {
            snf: smith::smith_normal_form(&stacked),
            n: m.source().num_generators(),
        }
    }

    pub fn solve(&self, coords: &[BigInt]) -> Option<Vec<BigInt>> {
        smith::solve(&self.snf, coords).map(|sol| sol[..self.n].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    #[test]
    fn kernel_and_cokernel_of_doubling() {
        let f = GroupMap::from_i64(z(), z(), &[vec![2]]).unwrap();
        let (k, _) = f.kernel();
        assert!(k.is_trivial());
        let (c, proj) = f.cokernel();
        assert_eq!(c.canonical_form().torsion, vec![BigInt::from(2)]);
        assert!(proj.is_surjective());
    }

    #[test]
    fn kernel_of_doubling_on_z4() {
        let z4 = FgAbGroup::cyclic(4);
        let f = GroupMap::from_i64(z4.clone(), z4.clone(), &[vec![2]]).unwrap();
        let (k, incl) = f.kernel();
        assert_eq!(k.canonical_form().torsion, vec![BigInt::from(2)]);
        // the inclusion lands in the honest kernel
        let gen = incl.apply(&k.generator(0));
        assert!(f.apply(&gen).is_zero());

        let (c, _) = f.cokernel();
        assert_eq!(c.canonical_form().torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn kernel_of_projection_to_z2() {
        let f = GroupMap::from_i64(z(), FgAbGroup::cyclic(2), &[vec![1]]).unwrap();
        let (k, incl) = f.kernel();
        assert_eq!(k.canonical_form().free_rank, 1);
        assert!(k.canonical_form().torsion.is_empty());
        assert!(f.compose(&incl).is_zero_map());
    }

    #[test]
    fn cokernel_of_identity_on_z6() {
        let z6 = FgAbGroup::cyclic(6);
        let f = GroupMap::identity(&z6);
        let (c, _) = f.cokernel();
        assert!(c.is_trivial());
    }

    #[test]
    fn hom_groups_match_expectations() {
        let z5 = FgAbGroup::cyclic(5);
        let h = hom_group(&z(), &z5);
        assert_eq!(h.group.canonical_form().torsion, vec![BigInt::from(5)]);

        let h = hom_group(&FgAbGroup::cyclic(2), &FgAbGroup::cyclic(3));
        assert!(h.group.is_trivial());

        let h = hom_group(&FgAbGroup::cyclic(4), &FgAbGroup::cyclic(6));
        assert_eq!(h.group.canonical_form().torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn hom_cardinality_matches_brute_force() {
        let cases = [
            (FgAbGroup::cyclic(4), FgAbGroup::cyclic(6)),
            (FgAbGroup::from_invariants(0, &[2, 2]), FgAbGroup::cyclic(4)),
            (FgAbGroup::cyclic(3), FgAbGroup::from_invariants(0, &[3, 3])),
        ];
        for (a, b) in cases {
            let h = hom_group(&a, &b);
            let brute = count_homs_brute(&a, &b).unwrap();
            let order: usize = h.group.order().unwrap().try_into().unwrap();
            assert_eq!(order, brute, "Hom({:?},{:?})", a, b);
        }
    }

    #[test]
    fn hom_coords_roundtrip() {
        let a = FgAbGroup::cyclic(4);
        let b = FgAbGroup::cyclic(6);
        let h = hom_group(&a, &b);
        for bm in &h.basis {
            let coords = h.coords_of(bm).unwrap();
            // rebuild from coordinates
            let mut acc = GroupMap::zero(a.clone(), b.clone());
            for (c, base) in coords.iter().zip(&h.basis) {
                acc = acc.add(&base.scale(c));
            }
            assert!(acc.eq_as_maps(bm));
        }
    }

    #[test]
    fn subgroup_and_quotient() {
        let z6 = FgAbGroup::cyclic(6);
        let (sub, incl) = subgroup_generated(&z6, &IntMatrix::from_rows_i64(&[vec![2]]));
        assert_eq!(sub.canonical_form().torsion, vec![BigInt::from(3)]);
        assert!(incl.is_injective());
        let (q, _) = quotient_by(&z6, &IntMatrix::from_rows_i64(&[vec![2]]));
        assert_eq!(q.canonical_form().torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn preimage_solving() {
        let f = GroupMap::from_i64(z(), z(), &[vec![2]]).unwrap();
        let four = FgAbGroup::free(1).element_i64(&[4]);
        let pre = f.preimage(&four).unwrap();
        assert_eq!(pre.coords()[0], BigInt::from(2));
        let three = FgAbGroup::free(1).element_i64(&[3]);
        assert!(f.preimage(&three).is_none());
    }
}

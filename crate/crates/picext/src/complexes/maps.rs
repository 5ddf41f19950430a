//! Chain maps, homotopies, mapping cones, induced maps on cohomology.

use super::complex::BoundedComplex;
use crate::abelian::{factor_through, descend_through, FgAbGroup, GroupMap, IntMatrix};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainMap {
    source: BoundedComplex,
    target: BoundedComplex,
    components: BTreeMap<i64, GroupMap>,
}

impl ChainMap {
    pub fn new(
        source: BoundedComplex,
        target: BoundedComplex,
        components: BTreeMap<i64, GroupMap>,
    ) -> Result<Self> {
        let f = ChainMap {
            source,
            target,
            components,
        };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        for (&n, c) in &self.components {
            if *c.source() != self.source.term(n) || *c.target() != self.target.term(n) {
                return Err(Error::Invariant(format!(
                    "chain map component at {} has wrong endpoints",
                    n
                )));
            }
        }
        let degrees: Vec<i64> = self
            .source
            .support()
            .into_iter()
            .chain(self.target.support())
            .collect();
        for n in degrees {
            let lhs = self.target.diff(n).compose(&self.component(n));
            let rhs = self.component(n + 1).compose(&self.source.diff(n));
            if !lhs.eq_as_maps(&rhs) {
                return Err(Error::Invariant(format!(
                    "chain map does not commute with differentials at degree {}",
                    n
                )));
            }
        }
        Ok(())
    }

    pub fn zero(source: BoundedComplex, target: BoundedComplex) -> Self {
        ChainMap {
            source,
            target,
            components: BTreeMap::new(),
        }
    }

    pub fn identity(k: &BoundedComplex) -> Self {
        let components = k
            .support()
            .into_iter()
            .map(|n| (n, GroupMap::identity(&k.term(n))))
            .collect();
        ChainMap {
            source: k.clone(),
            target: k.clone(),
            components,
        }
    }

    pub fn source(&self) -> &BoundedComplex {
        &self.source
    }

    pub fn target(&self) -> &BoundedComplex {
        &self.target
    }

    pub fn component(&self, n: i64) -> GroupMap {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| GroupMap::zero(self.source.term(n), self.target.term(n)))
    }

    /// self o other.
    pub fn compose(&self, other: &ChainMap) -> ChainMap {
        assert_eq!(other.target, self.source, "chain map composition mismatch");
        let degrees: Vec<i64> = other
            .source
            .support()
            .into_iter()
            .chain(self.target.support())
            .collect();
        let mut components = BTreeMap::new();
        for n in degrees {
            components.insert(n, self.component(n).compose(&other.component(n)));
        }
        ChainMap {
            source: other.source.clone(),
            target: self.target.clone(),
            components,
        }
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        let degrees: Vec<i64> = self
            .components
            .keys()
            .chain(other.components.keys())
            .cloned()
            .collect();
        let mut components = BTreeMap::new();
        for n in degrees {
            components.insert(n, self.component(n).add(&other.component(n)));
        }
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components,
        }
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ChainMap {
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self
                .components
                .iter()
                .map(|(&n, c)| (n, c.neg()))
                .collect(),
        }
    }

    /// Reindex both ends by the shift functor.
    pub fn shift(&self, i: i64) -> ChainMap {
        ChainMap {
            source: self.source.shift(i),
            target: self.target.shift(i),
            components: self
                .components
                .iter()
                .map(|(&n, c)| (n - i, c.clone()))
                .collect(),
        }
    }

    /// Induced map on cohomology at degree n.
    pub fn induced_on_cohomology(&self, n: i64) -> GroupMap {
        let src_data = self.source.cohomology_data(n);
        let tgt_data = self.target.cohomology_data(n);
        let moved = self.component(n).compose(&src_data.cycle_inclusion);
        let restricted = factor_through(&tgt_data.cycle_inclusion, &moved)
            .expect("chain maps preserve cycles");
        let to_classes = tgt_data.class_projection.compose(&restricted);
        descend_through(&src_data.class_projection, &to_classes)
            .expect("chain maps preserve boundaries")
    }

    pub fn is_quasi_iso(&self) -> bool {
        mapping_cone(self).is_acyclic()
    }
}

/// MC(f)^n = src^{n+1} (+) tgt^n with differential (-d_src, f + d_tgt).
pub fn mapping_cone(f: &ChainMap) -> BoundedComplex {
    let degrees: Vec<i64> = {
        let mut d: Vec<i64> = f
            .source()
            .support()
            .into_iter()
            .map(|n| n - 1)
            .chain(f.target().support())
            .collect();
        d.sort_unstable();
        d.dedup();
        d
    };
    let mut terms = BTreeMap::new();
    for &n in &degrees {
        terms.insert(
            n,
            FgAbGroup::direct_sum(&[f.source().term(n + 1), f.target().term(n)]),
        );
    }
    let mut diffs = BTreeMap::new();
    for &n in &degrees {
        let src = terms.get(&n).cloned().unwrap();
        let tgt = terms
            .get(&(n + 1))
            .cloned()
            .unwrap_or_else(|| {
                FgAbGroup::direct_sum(&[f.source().term(n + 2), f.target().term(n + 1)])
            });
        let blocks = vec![
            vec![
                f.source().diff(n + 1).matrix().neg(),
                IntMatrix::zero(
                    f.source().term(n + 2).num_generators(),
                    f.target().term(n).num_generators(),
                ),
            ],
            vec![
                f.component(n + 1).matrix().clone(),
                f.target().diff(n).matrix().clone(),
            ],
        ];
        let m = IntMatrix::from_blocks(&blocks);
        diffs.insert(n, GroupMap::new(src, tgt, m).expect("cone differential"));
    }
    BoundedComplex::new(terms, diffs).expect("mapping cone is a complex")
}

/// Canonical inclusion tgt -> MC(f), y |-> (0, y).
pub fn cone_inclusion(f: &ChainMap) -> ChainMap {
    let mc = mapping_cone(f);
    let mut components = BTreeMap::new();
    for n in mc.support() {
        let src_part = f.source().term(n + 1).num_generators();
        let tgt_part = f.target().term(n).num_generators();
        let m = IntMatrix::zero(src_part, tgt_part).vstack(&IntMatrix::identity(tgt_part));
        components.insert(
            n,
            GroupMap::new(f.target().term(n), mc.term(n), m).expect("cone inclusion"),
        );
    }
    ChainMap::new(f.target().clone(), mc, components).expect("cone inclusion chain map")
}

/// Canonical projection MC(f) -> src[1] hits the shifted source summand.
pub fn cone_projection(f: &ChainMap) -> ChainMap {
    let mc = mapping_cone(f);
    let shifted = f.source().shift(1);
    let mut components = BTreeMap::new();
    for n in mc.support() {
        let src_part = f.source().term(n + 1).num_generators();
        let tgt_part = f.target().term(n).num_generators();
        let m = IntMatrix::identity(src_part).hstack(&IntMatrix::zero(src_part, tgt_part));
        components.insert(
            n,
            GroupMap::new(mc.term(n), shifted.term(n), m).expect("cone projection"),
        );
    }
    ChainMap::new(mc, shifted, components).expect("cone projection chain map")
}

#[derive(Clone, Debug)]
pub struct Homotopy {
    from: ChainMap,
    to: ChainMap,
    /// components[n]: src^n -> tgt^{n-1}
    components: BTreeMap<i64, GroupMap>,
}

impl Homotopy {
    /// Witness that `to - from = dH + Hd`.
    pub fn new(from: ChainMap, to: ChainMap, components: BTreeMap<i64, GroupMap>) -> Result<Self> {
        if from.source() != to.source() || from.target() != to.target() {
            return Err(Error::Argument(
                "homotopy endpoints must share source and target".into(),
            ));
        }
        let h = Homotopy {
            from,
            to,
            components,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn zero(from: ChainMap, to: ChainMap) -> Result<Self> {
        Homotopy::new(from, to, BTreeMap::new())
    }

    pub fn component(&self, n: i64) -> GroupMap {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| {
                GroupMap::zero(self.from.source().term(n), self.from.target().term(n - 1))
            })
    }

    pub fn from_map(&self) -> &ChainMap {
        &self.from
    }

    pub fn to_map(&self) -> &ChainMap {
        &self.to
    }

    fn validate(&self) -> Result<()> {
        let src = self.from.source();
        let tgt = self.from.target();
        for (&n, c) in &self.components {
            if *c.source() != src.term(n) || *c.target() != tgt.term(n - 1) {
                return Err(Error::Invariant(format!(
                    "homotopy component at {} has wrong endpoints",
                    n
                )));
            }
        }
        let degrees: Vec<i64> = src.support().into_iter().chain(tgt.support()).collect();
        for n in degrees {
            let dh = tgt.diff(n - 1).compose(&self.component(n));
            let hd = self.component(n + 1).compose(&src.diff(n));
            let lhs = self.to.component(n).sub(&self.from.component(n));
            if !lhs.eq_as_maps(&dh.add(&hd)) {
                return Err(Error::Invariant(format!(
                    "homotopy identity fails at degree {}",
                    n
                )));
            }
        }
        Ok(())
    }
}

/// Exactness of a two-step sequence of maps between finite groups:
/// g o f = 0 and |im f| = |ker g|.
pub fn is_exact_pair(f: &GroupMap, g: &GroupMap) -> Result<bool> {
    if f.target() != g.source() {
        return Err(Error::Argument("exactness check: maps do not compose".into()));
    }
    if !g.compose(f).is_zero_map() {
        return Ok(false);
    }
    let (im, _) = f.image();
    let (ker, _) = g.kernel();
    let (Some(a), Some(b)) = (im.order(), ker.order()) else {
        return Err(Error::Unsupported(
            "exactness check implemented for finite groups".into(),
        ));
    };
    Ok(a == b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    fn doubling() -> BoundedComplex {
        BoundedComplex::two_term(GroupMap::from_i64(z(), z(), &[vec![2]]).unwrap(), 0)
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let k = doubling();
        let id = ChainMap::identity(&k);
        assert!(mapping_cone(&id).is_acyclic());
        assert!(id.is_quasi_iso());
    }

    #[test]
    fn cone_of_zero_from_zero_is_target() {
        let k = doubling();
        let f = ChainMap::zero(BoundedComplex::zero(), k.clone());
        let mc = mapping_cone(&f);
        for n in -2..=1 {
            assert_eq!(
                mc.cohomology(n).canonical_form(),
                k.cohomology(n).canonical_form()
            );
        }
    }

    #[test]
    fn cone_of_doubling_on_z() {
        // f = *2 : Z -> Z in degree 0: H^0(MC) = Z/2, H^{-1}(MC) = 0
        let a = BoundedComplex::concentrated(&z(), 0);
        let f = ChainMap::new(
            a.clone(),
            a.clone(),
            [(0, GroupMap::from_i64(z(), z(), &[vec![2]]).unwrap())].into(),
        )
        .unwrap();
        let mc = mapping_cone(&f);
        assert_eq!(mc.cohomology(0).canonical_form().torsion, vec![BigInt::from(2)]);
        assert!(mc.cohomology(-1).is_trivial());
    }

    #[test]
    fn quasi_iso_detects_resolution() {
        // [Z ->2 Z] -> Z/2 concentrated in degree 0
        let k = doubling();
        let z2 = BoundedComplex::concentrated(&FgAbGroup::cyclic(2), 0);
        let comp = GroupMap::from_i64(z(), FgAbGroup::cyclic(2), &[vec![1]]).unwrap();
        let f = ChainMap::new(k, z2, [(0, comp)].into()).unwrap();
        assert!(f.is_quasi_iso());
    }

    #[test]
    fn induced_map_on_cohomology() {
        let k = doubling();
        let z2 = BoundedComplex::concentrated(&FgAbGroup::cyclic(2), 0);
        let comp = GroupMap::from_i64(z(), FgAbGroup::cyclic(2), &[vec![1]]).unwrap();
        let f = ChainMap::new(k, z2, [(0, comp)].into()).unwrap();
        let h0 = f.induced_on_cohomology(0);
        assert!(h0.is_injective());
        assert!(h0.is_surjective());
    }

    #[test]
    fn homotopy_identity_validated() {
        // f = 0 and g = 0 with a nonzero homotopy on a zero-differential pair
        let a = BoundedComplex::concentrated(&FgAbGroup::cyclic(2), 0);
        let b = BoundedComplex::two_term(
            GroupMap::zero(FgAbGroup::cyclic(2), FgAbGroup::cyclic(2)),
            0,
        );
        let f = ChainMap::zero(a.clone(), b.clone());
        let g = ChainMap::zero(a.clone(), b.clone());
        // H^0: a^0 = Z/2 -> b^{-1} = Z/2; dH + Hd = 0 because both differentials vanish
        let h = GroupMap::identity(&FgAbGroup::cyclic(2));
        assert!(Homotopy::new(f, g, [(0, h)].into()).is_ok());
    }

    #[test]
    fn cone_long_exact_sequence_maps() {
        let k = doubling();
        let id = ChainMap::identity(&k);
        let incl = cone_inclusion(&id);
        let proj = cone_projection(&id);
        // composable and exact in the middle at each degree for this small case
        for n in -2..=0 {
            let a = incl.component(n);
            let b = proj.component(n);
            assert!(b.compose(&a).is_zero_map());
        }
    }
}

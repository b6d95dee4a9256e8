//! Convex chains at refined-lattice resolution.
//!
//! A [`Piece`] is a finite set of refined-lattice points (integer vectors
//! scaled by the chain's denominator `q`, so a stored vector `v` means the
//! point `v/q`). A [`Chain`] is a signed formal combination of pieces on one
//! refined lattice, together with a lattice `shift` recording the non-integral
//! offset of the character lattice `shift + Z^d`.
//!
//! Pieces are point sets rather than inequality systems: operator output
//! includes half-open and virtual regions that are awkward as closed
//! H-polytopes but exact as lattice sets. The parapolytope condition (every
//! fiber in a block direction is a full coordinate box) is checked lazily, in
//! the one direction an operator is about to use.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rational::{denominator_lcm, fractional, Rat};
use crate::string_space::StringSpace;

/// A parapolytope at lattice resolution: a nonempty set of scaled lattice
/// points. Box structure is verified per direction by [`Piece::fibers`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    points: Vec<Vec<i64>>,
}

impl Piece {
    /// Builds a piece from points in scaled integer coordinates; sorts and
    /// deduplicates.
    pub fn new(points: impl IntoIterator<Item = Vec<i64>>) -> Self {
        let mut points: Vec<Vec<i64>> = points.into_iter().collect();
        points.sort();
        points.dedup();
        Piece { points }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Scaled lattice points, lexicographically sorted.
    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn contains(&self, scaled: &[i64]) -> bool {
        self.points
            .binary_search_by(|p| p.as_slice().cmp(scaled))
            .is_ok()
    }

    /// Smallest in-block direction in which the whole piece is flat, i.e. the
    /// smallest slot `j` with all points sharing the coordinate `x^i_j`.
    pub fn degenerate_direction(&self, space: &StringSpace, block: usize) -> Option<usize> {
        let first = self.points.first()?;
        (0..space.block_dim(block)).find(|&j| {
            let f = space.flat_index(block, j);
            self.points.iter().all(|p| p[f] == first[f])
        })
    }

    /// Splits the piece into fibers along `block`: one entry per distinct
    /// complement-coordinate tuple, each verified to be a full integer box
    /// `[lo, hi]` on the refined lattice.
    pub fn fibers(&self, space: &StringSpace, block: usize) -> Result<Vec<Fiber>, Error> {
        let offset = space.block_offset(block);
        let width = space.block_dim(block);
        let mut groups: BTreeMap<Vec<i64>, Vec<Vec<i64>>> = BTreeMap::new();
        for p in &self.points {
            let mut base = p.clone();
            base[offset..offset + width].fill(0);
            groups
                .entry(base)
                .or_default()
                .push(p[offset..offset + width].to_vec());
        }
        let mut fibers = Vec::with_capacity(groups.len());
        for (base, members) in groups {
            let mut lo = members[0].clone();
            let mut hi = members[0].clone();
            for m in &members {
                for k in 0..width {
                    lo[k] = lo[k].min(m[k]);
                    hi[k] = hi[k].max(m[k]);
                }
            }
            let volume: i64 = lo.iter().zip(&hi).map(|(a, b)| b - a + 1).product();
            // members are distinct and lie inside [lo, hi], so matching
            // cardinality means the box is completely filled
            if members.len() as i64 != volume {
                return Err(Error::NotAParapolytope { block, base });
            }
            fibers.push(Fiber { base, lo, hi });
        }
        Ok(fibers)
    }
}

/// One fiber of a piece in a block direction: the complement coordinates
/// (block coordinates zeroed) and the in-block box `[lo, hi]`, all scaled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub base: Vec<i64>,
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawChain", into = "RawChain")]
pub struct Chain {
    space: StringSpace,
    q: i64,
    shift: Vec<Rat>,
    terms: Vec<(i64, Piece)>,
}

#[derive(Serialize, Deserialize)]
struct RawChain {
    space: StringSpace,
    q: i64,
    #[serde(with = "crate::rational::rat_flexible::vec")]
    shift: Vec<Rat>,
    terms: Vec<RawTerm>,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    coeff: i64,
    points: Vec<Vec<i64>>,
}

impl TryFrom<RawChain> for Chain {
    type Error = Error;
    fn try_from(raw: RawChain) -> Result<Self, Error> {
        Chain::new(
            raw.space,
            raw.q,
            raw.shift,
            raw.terms
                .into_iter()
                .map(|t| (t.coeff, Piece::new(t.points)))
                .collect(),
        )
    }
}

impl From<Chain> for RawChain {
    fn from(c: Chain) -> Self {
        RawChain {
            space: c.space,
            q: c.q,
            shift: c.shift,
            terms: c
                .terms
                .into_iter()
                .map(|(coeff, piece)| RawTerm {
                    coeff,
                    points: piece.points,
                })
                .collect(),
        }
    }
}

impl Chain {
    pub fn new(
        space: StringSpace,
        q: i64,
        shift: Vec<Rat>,
        terms: Vec<(i64, Piece)>,
    ) -> Result<Self, Error> {
        if q < 1 {
            return Err(Error::ShapeMismatch(format!(
                "refinement q must be >= 1, got {q}"
            )));
        }
        if shift.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: shift.len(),
            });
        }
        let shift: Vec<Rat> = shift.into_iter().map(fractional).collect();
        if shift.iter().any(|s| q % s.denom() != 0) {
            return Err(Error::RefinementMismatch { q });
        }
        for (coeff, piece) in &terms {
            if *coeff == 0 || piece.is_empty() {
                return Err(Error::ShapeMismatch(
                    "chain terms need nonzero coefficients and nonempty pieces".into(),
                ));
            }
            if piece.points.iter().any(|p| p.len() != space.dim()) {
                return Err(Error::DimensionMismatch {
                    expected: space.dim(),
                    got: piece
                        .points
                        .iter()
                        .map(Vec::len)
                        .find(|&l| l != space.dim())
                        .unwrap_or(0),
                });
            }
        }
        Ok(Chain {
            space,
            q,
            shift,
            terms,
        })
    }

    pub fn empty(space: StringSpace) -> Self {
        let shift = vec![Rat::zero(); space.dim()];
        Chain {
            space,
            q: 1,
            shift,
            terms: Vec::new(),
        }
    }

    /// Indicator chain of a single rational point; `q` becomes the lcm of the
    /// coordinate denominators and `shift` its fractional part.
    pub fn indicator(space: StringSpace, point: &[Rat]) -> Result<Self, Error> {
        let q = denominator_lcm(point);
        Self::indicator_with_refinement(space, point, q)
    }

    /// Indicator at an explicitly chosen refinement; `q` must clear every
    /// coordinate denominator. Word application seeds chains through this so
    /// that `q` can absorb the denominators of later translations up front.
    pub fn indicator_with_refinement(
        space: StringSpace,
        point: &[Rat],
        q: i64,
    ) -> Result<Self, Error> {
        if point.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: point.len(),
            });
        }
        if q < 1 || point.iter().any(|c| q % c.denom() != 0) {
            return Err(Error::RefinementMismatch { q });
        }
        let scaled: Vec<i64> = point
            .iter()
            .map(|c| (c * Rat::from_integer(q)).to_integer())
            .collect();
        let shift = point.iter().map(|&c| fractional(c)).collect();
        Ok(Chain {
            space,
            q,
            shift,
            terms: vec![(1, Piece::new([scaled]))],
        })
    }

    pub fn space(&self) -> &StringSpace {
        &self.space
    }

    pub fn refinement(&self) -> i64 {
        self.q
    }

    pub fn shift(&self) -> &[Rat] {
        &self.shift
    }

    pub fn terms(&self) -> &[(i64, Piece)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Converts a scaled point of this chain back to rational coordinates.
    pub fn to_rational(&self, scaled: &[i64]) -> Vec<Rat> {
        scaled.iter().map(|&v| Rat::new(v, self.q)).collect()
    }

    /// Pointwise value at a rational point; zero off the refined lattice.
    pub fn evaluate(&self, x: &[Rat]) -> i64 {
        if x.len() != self.space.dim() {
            return 0;
        }
        let q = Rat::from_integer(self.q);
        let mut scaled = Vec::with_capacity(x.len());
        for c in x {
            let s = c * q;
            if !s.is_integer() {
                return 0;
            }
            scaled.push(s.to_integer());
        }
        self.terms
            .iter()
            .map(|(coeff, piece)| if piece.contains(&scaled) { *coeff } else { 0 })
            .sum()
    }

    /// The chain as a finitely supported function: scaled point -> value,
    /// zeros dropped.
    pub fn pointwise(&self) -> BTreeMap<Vec<i64>, i64> {
        let mut map = BTreeMap::new();
        for (coeff, piece) in &self.terms {
            for p in &piece.points {
                *map.entry(p.clone()).or_insert(0) += coeff;
            }
        }
        map.retain(|_, v| *v != 0);
        map
    }

    /// Support restricted to the character lattice `shift + Z^d` when
    /// `standard_only` is set, the full refined-lattice support otherwise.
    pub fn support_points(&self, standard_only: bool) -> BTreeMap<Vec<i64>, i64> {
        let mut map = self.pointwise();
        if standard_only {
            let residues: Vec<i64> = self
                .shift
                .iter()
                .map(|s| {
                    (s * Rat::from_integer(self.q))
                        .to_integer()
                        .mod_floor(&self.q)
                })
                .collect();
            map.retain(|p, _| {
                p.iter()
                    .zip(&residues)
                    .all(|(c, r)| c.mod_floor(&self.q) == *r)
            });
        }
        map
    }

    /// Rescales to a finer denominator (`new_q` a multiple of `q`). The
    /// supported function is unchanged: support points are rescaled, never
    /// filled in.
    pub(crate) fn rescaled(&self, new_q: i64) -> Chain {
        debug_assert!(new_q >= self.q && new_q % self.q == 0);
        if new_q == self.q {
            return self.clone();
        }
        let k = new_q / self.q;
        let terms = self
            .terms
            .iter()
            .map(|(coeff, piece)| {
                (
                    *coeff,
                    Piece::new(
                        piece
                            .points
                            .iter()
                            .map(|p| p.iter().map(|&c| c * k).collect::<Vec<_>>()),
                    ),
                )
            })
            .collect();
        Chain {
            space: self.space.clone(),
            q: new_q,
            shift: self.shift.clone(),
            terms,
        }
    }

    /// Pointwise sum. Mixed refinements are reconciled by rescaling to the
    /// lcm; the chains must share the space and the character lattice.
    pub fn add(&self, other: &Chain) -> Result<Chain, Error> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if self.shift != other.shift {
            return Err(Error::ShiftMismatch);
        }
        let q = self.q.lcm(&other.q);
        let a = self.rescaled(q);
        let b = other.rescaled(q);
        let mut terms = a.terms;
        terms.extend(b.terms);
        Ok(Chain {
            space: self.space.clone(),
            q,
            shift: self.shift.clone(),
            terms,
        })
    }

    pub fn scale(&self, k: i64) -> Chain {
        if k == 0 {
            let mut c = Chain::empty(self.space.clone());
            c.q = self.q;
            c.shift = self.shift.clone();
            return c;
        }
        let terms = self.terms.iter().map(|(c, p)| (c * k, p.clone())).collect();
        Chain {
            space: self.space.clone(),
            q: self.q,
            shift: self.shift.clone(),
            terms,
        }
    }

    /// Reassembles raw operator output into a chain whose pieces are exactly
    /// the tagged hint groups. Fails with [`Error::InconsistentHint`] when the
    /// groups do not reproduce `raw` pointwise.
    pub fn regroup(
        space: StringSpace,
        q: i64,
        shift: Vec<Rat>,
        raw: &BTreeMap<Vec<i64>, i64>,
        hint: Vec<(i64, Vec<Vec<i64>>)>,
    ) -> Result<Chain, Error> {
        let mut terms = Vec::new();
        let mut rebuilt: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        for (coeff, points) in hint {
            if points.is_empty() {
                continue;
            }
            let piece = Piece::new(points);
            for p in piece.points() {
                *rebuilt.entry(p.clone()).or_insert(0) += coeff;
            }
            terms.push((coeff, piece));
        }
        rebuilt.retain(|_, v| *v != 0);
        let mut raw = raw.clone();
        raw.retain(|_, v| *v != 0);
        if rebuilt != raw {
            return Err(Error::InconsistentHint);
        }
        Chain::new(space, q, shift, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rat_list;
    use proptest::prelude::*;

    fn sl3() -> StringSpace {
        StringSpace::new(vec![2, 1], vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn line() -> StringSpace {
        StringSpace::new(vec![1], vec![vec![0]]).unwrap()
    }

    fn rats(s: &str) -> Vec<Rat> {
        parse_rat_list(s).unwrap()
    }

    fn seg(lo: i64, hi: i64) -> Piece {
        Piece::new((lo..=hi).map(|v| vec![v]))
    }

    #[test]
    fn indicator_seeds() {
        let c = Chain::indicator(sl3(), &rats("0,-3,-3")).unwrap();
        assert_eq!(c.refinement(), 1);
        assert_eq!(c.terms().len(), 1);
        assert_eq!(c.terms()[0].1.points(), &[vec![0, -3, -3]]);

        let c = Chain::indicator(sl3(), &rats("0,-1/2,0")).unwrap();
        assert_eq!(c.refinement(), 2);
        assert_eq!(c.shift(), rats("0,1/2,0").as_slice());
        assert_eq!(c.terms()[0].1.points(), &[vec![0, -1, 0]]);

        let c = Chain::indicator(line(), &rats("0")).unwrap();
        assert_eq!(c.evaluate(&rats("0")), 1);
    }

    #[test]
    fn refinement_must_clear_denominators() {
        assert!(matches!(
            Chain::indicator_with_refinement(line(), &rats("1/2"), 1),
            Err(Error::RefinementMismatch { q: 1 })
        ));
        assert!(Chain::indicator_with_refinement(line(), &rats("1/2"), 4).is_ok());
        assert!(matches!(
            Chain::new(line(), 1, rats("1/3"), vec![]),
            Err(Error::RefinementMismatch { .. })
        ));
    }

    #[test]
    fn evaluate_hits_and_misses() {
        let c = Chain::indicator(sl3(), &rats("1,2,3")).unwrap();
        assert_eq!(c.evaluate(&rats("1,2,3")), 1);
        assert_eq!(c.evaluate(&rats("1,2,4")), 0);
        assert_eq!(c.evaluate(&rats("1,2,5/2")), 0); // off the refined lattice
    }

    #[test]
    fn add_and_scale_are_pointwise() {
        let p = Chain::indicator(line(), &rats("2")).unwrap();
        let cancel = p.add(&p.scale(-1)).unwrap();
        assert_eq!(cancel.evaluate(&rats("2")), 0);
        assert!(cancel.pointwise().is_empty());

        let q = Chain::indicator(line(), &rats("5")).unwrap();
        assert_eq!(p.add(&q).unwrap().pointwise().len(), 2);

        // 1D inclusion-exclusion: I_[0,2] = I_[0,1] + I_[1,2] - I_{1}
        let whole = Chain::new(line(), 1, rats("0"), vec![(1, seg(0, 2))]).unwrap();
        let sum = Chain::new(line(), 1, rats("0"), vec![(1, seg(0, 1))])
            .unwrap()
            .add(&Chain::new(line(), 1, rats("0"), vec![(1, seg(1, 2))]).unwrap())
            .unwrap()
            .add(&Chain::new(line(), 1, rats("0"), vec![(-1, seg(1, 1))]).unwrap())
            .unwrap();
        assert_eq!(sum.pointwise(), whole.pointwise());
    }

    #[test]
    fn add_requires_same_lattice() {
        let a = Chain::indicator(line(), &rats("0")).unwrap();
        let b = Chain::indicator(line(), &rats("1/2")).unwrap();
        assert!(matches!(a.add(&b), Err(Error::ShiftMismatch)));
        let other = Chain::indicator(sl3(), &rats("0,0,0")).unwrap();
        assert!(matches!(a.add(&other), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn mixed_refinements_rescale_without_filling() {
        let a = Chain::new(line(), 1, rats("0"), vec![(1, seg(0, 1))]).unwrap();
        let b = Chain::indicator(line(), &rats("0")).unwrap().rescaled(2);
        let sum = a.add(&b.scale(1)).unwrap();
        assert_eq!(sum.refinement(), 2);
        // the q=1 segment keeps support {0, 1}, the midpoint 1/2 stays zero
        assert_eq!(sum.evaluate(&rats("1/2")), 0);
        assert_eq!(sum.evaluate(&rats("0")), 2);
        assert_eq!(sum.evaluate(&rats("1")), 1);
    }

    #[test]
    fn fiber_extraction_boxes() {
        let p = seg(0, 2);
        let fibers = p.fibers(&line(), 0).unwrap();
        assert_eq!(fibers.len(), 1);
        assert_eq!(fibers[0].lo, vec![0]);
        assert_eq!(fibers[0].hi, vec![2]);

        // {(0,0),(1,1)} inside a 2-dimensional block is not a box
        let bad = Piece::new([vec![0, 0, 0], vec![1, 1, 0]]);
        assert!(matches!(
            bad.fibers(&sl3(), 0),
            Err(Error::NotAParapolytope { block: 0, .. })
        ));

        // fibers in block 0 of a product piece, grouped by z
        let prod = Piece::new(
            (0..=1i64)
                .flat_map(|x| (2..=3i64).map(move |y| (x, y)))
                .flat_map(|(x, y)| (-1..=0i64).map(move |z| vec![x, y, z])),
        );
        let fibers = prod.fibers(&sl3(), 0).unwrap();
        assert_eq!(fibers.len(), 2);
        for f in &fibers {
            assert_eq!((f.lo.clone(), f.hi.clone()), (vec![0, 2], vec![1, 3]));
        }
    }

    #[test]
    fn fibers_round_trip_points() {
        let prod = Piece::new((0..=2i64).flat_map(|x| (5..=5i64).map(move |y| vec![x, y, 7])));
        let fibers = prod.fibers(&sl3(), 0).unwrap();
        let mut regathered: Vec<Vec<i64>> = Vec::new();
        for f in fibers {
            let mut cur = f.lo.clone();
            loop {
                let mut point = f.base.clone();
                point[0..2].copy_from_slice(&cur);
                regathered.push(point);
                // odometer over the box
                let mut k = 0;
                loop {
                    if k == cur.len() {
                        break;
                    }
                    cur[k] += 1;
                    if cur[k] <= f.hi[k] {
                        break;
                    }
                    cur[k] = f.lo[k];
                    k += 1;
                }
                if k == cur.len() {
                    break;
                }
            }
        }
        regathered.sort();
        assert_eq!(regathered, prod.points());
    }

    #[test]
    fn degenerate_direction_picks_smallest() {
        let point = Piece::new([vec![4, -1, 2, 9]]);
        let sp4 = StringSpace::new(vec![2, 2], vec![vec![0, 2], vec![1, 0]]).unwrap();
        assert_eq!(point.degenerate_direction(&sp4, 0), Some(0));
        assert_eq!(point.degenerate_direction(&sp4, 1), Some(0));

        // segment [(-1,-1),(2,-1)] inside a 2-dimensional block: flat in slot 1
        let segment = Piece::new((-1..=2i64).map(|x| vec![x, -1, 0]));
        assert_eq!(segment.degenerate_direction(&sl3(), 0), Some(1));

        let full = Piece::new((0..=1i64).flat_map(|x| (0..=1i64).map(move |y| vec![x, y, 0])));
        assert_eq!(full.degenerate_direction(&sl3(), 0), None);
    }

    #[test]
    fn regroup_checks_consistency() {
        let raw: BTreeMap<Vec<i64>, i64> = [(vec![3], 1)].into();
        let c = Chain::regroup(line(), 1, rats("0"), &raw, vec![(1, vec![vec![3]])]).unwrap();
        assert_eq!(c.terms().len(), 1);

        // cancelling hint groups against a zero raw map give the empty chain
        let zero: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        let c = Chain::regroup(
            line(),
            1,
            rats("0"),
            &zero,
            vec![(1, vec![vec![5]]), (-1, vec![vec![5]]), (1, vec![])],
        )
        .unwrap();
        assert_eq!(c.terms().len(), 2);
        assert!(c.pointwise().is_empty());

        let raw: BTreeMap<Vec<i64>, i64> = [(vec![3], 2)].into();
        assert!(matches!(
            Chain::regroup(line(), 1, rats("0"), &raw, vec![(1, vec![vec![3]])]),
            Err(Error::InconsistentHint)
        ));
    }

    #[test]
    fn standard_support_filters_by_shift() {
        let c = Chain::new(
            line(),
            2,
            rats("1/2"),
            vec![(1, Piece::new([vec![1], vec![2], vec![3]]))],
        )
        .unwrap();
        let std: Vec<Vec<i64>> = c.support_points(true).into_keys().collect();
        assert_eq!(std, vec![vec![1], vec![3]]);
        assert_eq!(c.support_points(false).len(), 3);
        assert!(Chain::empty(line()).support_points(false).is_empty());
    }

    #[test]
    fn chain_json_round_trip_is_bit_exact() {
        let c = Chain::new(
            sl3(),
            2,
            rats("0,1/2,0"),
            vec![
                (1, Piece::new([vec![0, -3, -2], vec![0, -3, -1]])),
                (-1, Piece::new([vec![2, -3, 0]])),
            ],
        )
        .unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(
            json,
            r#"{"space":{"dims":[2,1],"l_matrix":[[0,1],[1,0]]},"q":2,"shift":[0,"1/2",0],"terms":[{"coeff":1,"points":[[0,-3,-2],[0,-3,-1]]},{"coeff":-1,"points":[[2,-3,0]]}]}"#
        );
        let back: Chain = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }

    proptest! {
        #[test]
        fn evaluate_is_linear(
            pts_a in prop::collection::vec(-6i64..7, 1..6),
            pts_b in prop::collection::vec(-6i64..7, 1..6),
            ka in -3i64..4, kb in -3i64..4,
            probe in -8i64..9,
        ) {
            prop_assume!(ka != 0 && kb != 0);
            let a = Chain::new(line(), 1, vec![Rat::zero()],
                vec![(ka, Piece::new(pts_a.iter().map(|&v| vec![v])))]).unwrap();
            let b = Chain::new(line(), 1, vec![Rat::zero()],
                vec![(kb, Piece::new(pts_b.iter().map(|&v| vec![v])))]).unwrap();
            let x = vec![Rat::from_integer(probe)];
            prop_assert_eq!(
                a.add(&b).unwrap().evaluate(&x),
                a.evaluate(&x) + b.evaluate(&x)
            );
        }

        #[test]
        fn chain_json_round_trips(
            pts in prop::collection::vec((-9i64..10, -9i64..10, -9i64..10), 1..8),
            coeff in -3i64..4,
            q in 1i64..4,
        ) {
            prop_assume!(coeff != 0);
            let shift = vec![Rat::zero(), Rat::new(1, q), Rat::zero()];
            let chain = Chain::new(
                sl3(),
                q,
                shift,
                vec![(coeff, Piece::new(pts.iter().map(|&(x, y, z)| vec![x, y, z])))],
            )
            .unwrap();
            let json = serde_json::to_string(&chain).unwrap();
            let back: Chain = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(&back, &chain);
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
        }

        #[test]
        fn fiber_bounds_are_ordered(lo in -5i64..5, w0 in 0i64..4, w1 in 0i64..4) {
            let piece = Piece::new(
                (lo..=lo + w0).flat_map(|x| (0..=w1).map(move |y| vec![x, y, 3])),
            );
            for f in piece.fibers(&sl3(), 0).unwrap() {
                prop_assert!(f.lo.iter().zip(&f.hi).all(|(a, b)| a <= b));
            }
        }
    }
}

//! String spaces: a block decomposition of `Q^d` together with integral
//! linear forms `l_i`, the weight projection, and affine reflections on
//! weight space.
//!
//! A rank-`r` string space is `Q^d = Q^{d_1} ⊕ … ⊕ Q^{d_r}` with one linear
//! form per block, vanishing on that block. The forms are stored through an
//! `r×r` integer matrix `C` with zero diagonal acting on block sums:
//! `l_i(x) = Σ_{k≠i} C[i][k]·σ_k(x)`, where `σ_k` is the coordinate sum over
//! block `k`. Storing only `C` is lossless because every form used here
//! factors through the weight projection, and it makes degeneration a pure
//! matrix rewrite.
//!
//! Blocks and in-block slots are 0-based throughout the crate; the CLI's
//! `D1`-style tokens are 1-based and converted at the parsing boundary.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace", into = "RawSpace")]
pub struct StringSpace {
    dims: Vec<usize>,
    l_matrix: Vec<Vec<i64>>,
    offsets: Vec<usize>,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct RawSpace {
    dims: Vec<usize>,
    l_matrix: Vec<Vec<i64>>,
}

impl TryFrom<RawSpace> for StringSpace {
    type Error = Error;
    fn try_from(raw: RawSpace) -> Result<Self, Error> {
        StringSpace::new(raw.dims, raw.l_matrix)
    }
}

impl From<StringSpace> for RawSpace {
    fn from(s: StringSpace) -> Self {
        RawSpace {
            dims: s.dims,
            l_matrix: s.l_matrix,
        }
    }
}

impl StringSpace {
    pub fn new(dims: Vec<usize>, l_matrix: Vec<Vec<i64>>) -> Result<Self, Error> {
        let r = dims.len();
        if r == 0 {
            return Err(Error::ShapeMismatch("need at least one block".into()));
        }
        if dims.contains(&0) {
            return Err(Error::ShapeMismatch(
                "block dimensions must be positive".into(),
            ));
        }
        if l_matrix.len() != r || l_matrix.iter().any(|row| row.len() != r) {
            return Err(Error::ShapeMismatch(format!(
                "l-matrix must be {r}x{r} for {r} blocks"
            )));
        }
        for (i, row) in l_matrix.iter().enumerate() {
            if row[i] != 0 {
                return Err(Error::NonZeroDiagonal { block: i });
            }
        }
        let mut offsets = Vec::with_capacity(r);
        let mut acc = 0usize;
        for &d in &dims {
            offsets.push(acc);
            acc += d;
        }
        Ok(StringSpace {
            dims,
            l_matrix,
            offsets,
            dim: acc,
        })
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    /// Total ambient dimension `d = Σ d_i`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn block_dim(&self, block: usize) -> usize {
        self.dims[block]
    }

    pub fn l_matrix(&self) -> &[Vec<i64>] {
        &self.l_matrix
    }

    /// First flat coordinate of `block`; block `i` occupies
    /// `offset(i)..offset(i)+d_i`.
    pub fn block_offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    pub fn flat_index(&self, block: usize, slot: usize) -> usize {
        debug_assert!(slot < self.dims[block]);
        self.offsets[block] + slot
    }

    /// Which `(block, slot)` a flat coordinate belongs to.
    pub fn block_of(&self, flat: usize) -> (usize, usize) {
        debug_assert!(flat < self.dim);
        let block = match self.offsets.binary_search(&flat) {
            Ok(b) => b,
            Err(b) => b - 1,
        };
        (block, flat - self.offsets[block])
    }

    fn check_block(&self, block: usize) -> Result<(), Error> {
        if block >= self.rank() {
            return Err(Error::IndexOutOfRange {
                index: block,
                rank: self.rank(),
            });
        }
        Ok(())
    }

    fn check_point(&self, x: &[Rat]) -> Result<(), Error> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Coordinate sum over `block`: `σ_i(x) = Σ_k x^i_k`.
    pub fn sigma(&self, x: &[Rat], block: usize) -> Result<Rat, Error> {
        self.check_block(block)?;
        self.check_point(x)?;
        let o = self.offsets[block];
        Ok(x[o..o + self.dims[block]].iter().sum())
    }

    /// Weight projection `p(x) = (σ_1(x), …, σ_r(x))`.
    pub fn weight(&self, x: &[Rat]) -> Result<Weight, Error> {
        self.check_point(x)?;
        let coords = (0..self.rank())
            .map(|i| {
                let o = self.offsets[i];
                x[o..o + self.dims[i]].iter().sum()
            })
            .collect();
        Ok(Weight { coords })
    }

    /// `l_i(x) = Σ_{k≠i} C[i][k]·σ_k(x)`. Invariant under translations
    /// supported on block `i`, and a function of `weight(x)` only.
    pub fn eval_l(&self, block: usize, x: &[Rat]) -> Result<Rat, Error> {
        self.check_block(block)?;
        self.check_point(x)?;
        let mut acc = Rat::zero();
        for k in 0..self.rank() {
            let c = self.l_matrix[block][k];
            if c != 0 {
                let o = self.offsets[k];
                let s: Rat = x[o..o + self.dims[k]].iter().sum();
                acc += Rat::from_integer(c) * s;
            }
        }
        Ok(acc)
    }

    /// `l_i` evaluated on weight coordinates `(y_1, …, y_r)`.
    pub fn eval_l_weight(&self, block: usize, y: &[Rat]) -> Result<Rat, Error> {
        self.check_block(block)?;
        if y.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: y.len(),
            });
        }
        Ok((0..self.rank())
            .map(|k| Rat::from_integer(self.l_matrix[block][k]) * y[k])
            .sum())
    }

    /// Same as [`eval_l`](Self::eval_l) on scaled integer coordinates. The
    /// form is linear, so the result is `q·l_i(x/q)` for `x` at refinement `q`.
    pub(crate) fn eval_l_scaled(&self, block: usize, x: &[i64]) -> i64 {
        let mut acc = 0i64;
        for k in 0..self.rank() {
            let c = self.l_matrix[block][k];
            if c != 0 {
                let o = self.offsets[k];
                let s: i64 = x[o..o + self.dims[k]].iter().sum();
                acc += c * s;
            }
        }
        acc
    }

    /// Affine reflection on weight space:
    /// `s_i(y) = (y_1, …, l_i(y) − y_i, …, y_r)`. An involution.
    pub fn reflect(&self, block: usize, y: &Weight) -> Result<Weight, Error> {
        self.check_block(block)?;
        let l = self.eval_l_weight(block, &y.coords)?;
        let mut coords = y.coords.clone();
        coords[block] = l - coords[block];
        Ok(Weight { coords })
    }
}

/// A point of weight space in the basis `α_1, …, α_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weight {
    #[serde(with = "crate::rational::rat_flexible::vec")]
    coords: Vec<Rat>,
}

impl Weight {
    pub fn new(coords: Vec<Rat>) -> Self {
        Weight { coords }
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rat_list;
    use proptest::prelude::*;

    pub(crate) fn sl3_space() -> StringSpace {
        StringSpace::new(vec![2, 1], vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    pub(crate) fn sp4_space() -> StringSpace {
        StringSpace::new(vec![2, 2], vec![vec![0, 2], vec![1, 0]]).unwrap()
    }

    fn rats(s: &str) -> Vec<Rat> {
        parse_rat_list(s).unwrap()
    }

    #[test]
    fn construction_validates_shape() {
        let s = sl3_space();
        assert_eq!(s.rank(), 2);
        assert_eq!(s.dim(), 3);
        // l_1 = sigma_2 = z, l_2 = sigma_1 = x + y
        assert_eq!(s.eval_l(0, &rats("1,2,7")).unwrap(), Rat::from_integer(7));
        assert_eq!(s.eval_l(1, &rats("1,2,7")).unwrap(), Rat::from_integer(3));

        let rank1 = StringSpace::new(vec![1], vec![vec![0]]).unwrap();
        assert_eq!(rank1.eval_l(0, &rats("5")).unwrap(), Rat::zero());

        // Sp(4): l_1 = 2*sigma_2, l_2 = sigma_1
        let sp = sp4_space();
        assert_eq!(
            sp.eval_l(0, &rats("1,1,2,3")).unwrap(),
            Rat::from_integer(10)
        );
        assert_eq!(
            sp.eval_l(1, &rats("1,1,2,3")).unwrap(),
            Rat::from_integer(2)
        );

        assert!(matches!(
            StringSpace::new(vec![2, 1], vec![vec![1, 1], vec![1, 0]]),
            Err(Error::NonZeroDiagonal { block: 0 })
        ));
        assert!(matches!(
            StringSpace::new(vec![2, 1], vec![vec![0, 1]]),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(StringSpace::new(vec![], vec![]).is_err());
        assert!(StringSpace::new(vec![0], vec![vec![0]]).is_err());
    }

    #[test]
    fn sigma_sums_block_coordinates() {
        let s = sl3_space();
        assert_eq!(s.sigma(&rats("1,2,5"), 0).unwrap(), Rat::from_integer(3));
        assert_eq!(s.sigma(&rats("1,2,5"), 1).unwrap(), Rat::from_integer(5));
        assert_eq!(
            sp4_space().sigma(&rats("1,1,2,3"), 1).unwrap(),
            Rat::from_integer(5)
        );
        assert!(matches!(
            s.sigma(&rats("1,2,5"), 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn weight_projection() {
        let s = sl3_space();
        assert_eq!(
            s.weight(&rats("0,-3,-3")).unwrap(),
            Weight::new(rats("-3,-3"))
        );
        assert_eq!(s.weight(&rats("0,0,0")).unwrap(), Weight::new(rats("0,0")));
        // Sp(4): p(a,b,c,d) = (a+b, c+d)
        assert_eq!(
            sp4_space().weight(&rats("1,-4,2,7")).unwrap(),
            Weight::new(rats("-3,9"))
        );
        assert!(matches!(
            s.weight(&rats("1,2")),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reflections_match_worked_values() {
        let s = sl3_space();
        let y = Weight::new(rats("1,0"));
        assert_eq!(s.reflect(0, &y).unwrap(), Weight::new(rats("-1,0")));
        let y = Weight::new(rats("0,1"));
        assert_eq!(s.reflect(0, &y).unwrap(), Weight::new(rats("1,1")));
        // fixed point: y_i = l_i(y)/2
        let y = Weight::new(rats("1/2,1"));
        assert_eq!(s.reflect(0, &y).unwrap(), y);
    }

    #[test]
    fn block_flat_round_trip() {
        let s = StringSpace::new(
            vec![3, 2, 1],
            vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]],
        )
        .unwrap();
        for flat in 0..s.dim() {
            let (b, k) = s.block_of(flat);
            assert_eq!(s.flat_index(b, k), flat);
        }
    }

    #[test]
    fn space_json_round_trip() {
        let s = sp4_space();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"dims":[2,2],"l_matrix":[[0,2],[1,0]]}"#);
        let back: StringSpace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        // validation also runs on deserialize
        assert!(serde_json::from_str::<StringSpace>(r#"{"dims":[2],"l_matrix":[[1]]}"#).is_err());
    }

    prop_compose! {
        fn arb_space()(dims in prop::collection::vec(1usize..4, 1..4))
            (entries in prop::collection::vec(-3i64..4, dims.len() * dims.len()),
             dims in Just(dims))
            -> StringSpace
        {
            let r = dims.len();
            let mut m: Vec<Vec<i64>> = entries.chunks(r).map(|c| c.to_vec()).collect();
            for (i, row) in m.iter_mut().enumerate() { row[i] = 0; }
            StringSpace::new(dims, m).unwrap()
        }
    }

    proptest! {
        #[test]
        fn eval_l_ignores_block_translations(s in arb_space(), seed in any::<u64>()) {
            let mut rng: rand_chacha::ChaCha8Rng = rand::SeedableRng::seed_from_u64(seed);
            let x: Vec<Rat> = (0..s.dim())
                .map(|_| Rat::from_integer(rand::Rng::gen_range(&mut rng, -5i64..6)))
                .collect();
            for i in 0..s.rank() {
                let mut moved = x.clone();
                for k in 0..s.block_dim(i) {
                    moved[s.flat_index(i, k)] += Rat::from_integer(
                        rand::Rng::gen_range(&mut rng, -5i64..6));
                }
                prop_assert_eq!(s.eval_l(i, &moved).unwrap(), s.eval_l(i, &x).unwrap());
                // and it factors through the weight
                prop_assert_eq!(
                    s.eval_l(i, &x).unwrap(),
                    s.eval_l_weight(i, s.weight(&x).unwrap().coords()).unwrap()
                );
            }
        }

        #[test]
        fn reflect_is_an_involution(s in arb_space(), raw in prop::collection::vec((-20i64..20, 1i64..5), 8)) {
            let y = Weight::new(
                raw.into_iter().take(s.rank()).map(|(p, q)| Rat::new(p, q))
                    .chain(std::iter::repeat(Rat::zero())).take(s.rank()).collect());
            for i in 0..s.rank() {
                let twice = s.reflect(i, &s.reflect(i, &y).unwrap()).unwrap();
                prop_assert_eq!(twice, y.clone());
            }
        }

        #[test]
        fn eval_l_integral_on_integer_points(s in arb_space(), seed in any::<u64>()) {
            let mut rng: rand_chacha::ChaCha8Rng = rand::SeedableRng::seed_from_u64(seed);
            let x: Vec<Rat> = (0..s.dim())
                .map(|_| Rat::from_integer(rand::Rng::gen_range(&mut rng, -9i64..10)))
                .collect();
            for i in 0..s.rank() {
                prop_assert!(s.eval_l(i, &x).unwrap().is_integer());
            }
        }
    }
}

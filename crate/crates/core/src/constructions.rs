//! Named builders: Gelfand-Zetlin spaces and polytopes, string spaces from
//! Cartan data and words, the Sp(4) and SL(3) worked examples, string-space
//! degenerations with the word-replacement rule, and Bott-tower spaces.
//!
//! H-polytopes appear only here, as the explicit inequality systems the
//! named constructions are known by, and are compared against operator
//! output at lattice level; the operator pipeline itself never consumes
//! them.

use serde::{Deserialize, Serialize};

use crate::cartan::CartanData;
use crate::chain::Chain;
use crate::error::Error;
use crate::geometry::{maximize_free, LpOutcome};
use crate::ops::OperatorWord;
use crate::rational::Rat;
use crate::string_space::StringSpace;

/// An inequality system `normal · x <= bound` with integer normals and
/// rational bounds, used for the reference descriptions of the named
/// polytopes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHPolytope", into = "RawHPolytope")]
pub struct HPolytope {
    dim: usize,
    ineqs: Vec<(Vec<i64>, Rat)>,
}

#[derive(Serialize, Deserialize)]
struct RawHPolytope {
    ineqs: Vec<RawIneq>,
}

#[derive(Serialize, Deserialize)]
struct RawIneq {
    normal: Vec<i64>,
    #[serde(with = "crate::rational::rat_string")]
    bound: Rat,
}

impl TryFrom<RawHPolytope> for HPolytope {
    type Error = Error;
    fn try_from(raw: RawHPolytope) -> Result<Self, Error> {
        HPolytope::new(raw.ineqs.into_iter().map(|i| (i.normal, i.bound)).collect())
    }
}

impl From<HPolytope> for RawHPolytope {
    fn from(p: HPolytope) -> Self {
        RawHPolytope {
            ineqs: p
                .ineqs
                .into_iter()
                .map(|(normal, bound)| RawIneq { normal, bound })
                .collect(),
        }
    }
}

impl HPolytope {
    pub fn new(ineqs: Vec<(Vec<i64>, Rat)>) -> Result<Self, Error> {
        let Some(first) = ineqs.first() else {
            return Err(Error::ShapeMismatch(
                "polytope needs at least one inequality".into(),
            ));
        };
        let dim = first.0.len();
        if dim == 0 || ineqs.iter().any(|(n, _)| n.len() != dim) {
            return Err(Error::ShapeMismatch(
                "inequality normals must share a dimension".into(),
            ));
        }
        Ok(HPolytope { dim, ineqs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ineqs(&self) -> &[(Vec<i64>, Rat)] {
        &self.ineqs
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        x.len() == self.dim
            && self.ineqs.iter().all(|(normal, bound)| {
                normal
                    .iter()
                    .zip(x)
                    .map(|(&c, v)| Rat::from_integer(c) * v)
                    .sum::<Rat>()
                    <= *bound
            })
    }

    /// Exact per-coordinate bounds, or `None` when the system is infeasible.
    /// Boundedness is certified by linear programming.
    pub fn bounding_box(&self) -> Result<Option<Vec<(Rat, Rat)>>, Error> {
        let rows: Vec<(Vec<Rat>, Rat)> = self
            .ineqs
            .iter()
            .map(|(n, b)| (n.iter().map(|&c| Rat::from_integer(c)).collect(), *b))
            .collect();
        let mut box_ = Vec::with_capacity(self.dim);
        for k in 0..self.dim {
            let mut hi_obj = vec![Rat::from_integer(0); self.dim];
            hi_obj[k] = Rat::from_integer(1);
            let hi = match maximize_free(self.dim, &rows, &hi_obj) {
                LpOutcome::Infeasible => return Ok(None),
                LpOutcome::Unbounded => return Err(Error::Unbounded { direction: k }),
                LpOutcome::Optimal { value, .. } => value,
            };
            hi_obj[k] = Rat::from_integer(-1);
            let lo = match maximize_free(self.dim, &rows, &hi_obj) {
                LpOutcome::Infeasible => return Ok(None),
                LpOutcome::Unbounded => return Err(Error::Unbounded { direction: k }),
                LpOutcome::Optimal { value, .. } => -value,
            };
            box_.push((lo, hi));
        }
        Ok(Some(box_))
    }

    /// Points of the `1/q` lattice inside the polytope, in scaled integer
    /// coordinates, lexicographically sorted.
    pub fn lattice_points(&self, q: i64) -> Result<Vec<Vec<i64>>, Error> {
        let Some(bounds) = self.bounding_box()? else {
            return Ok(Vec::new());
        };
        let ranges: Vec<(i64, i64)> = bounds
            .iter()
            .map(|(lo, hi)| {
                let lo = (lo * Rat::from_integer(q)).ceil().to_integer();
                let hi = (hi * Rat::from_integer(q)).floor().to_integer();
                (lo, hi)
            })
            .collect();
        if ranges.iter().any(|(lo, hi)| lo > hi) {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut cur: Vec<i64> = ranges.iter().map(|&(lo, _)| lo).collect();
        'outer: loop {
            let inside = self.ineqs.iter().all(|(normal, bound)| {
                let lhs: i64 = normal.iter().zip(&cur).map(|(&c, &v)| c * v).sum();
                Rat::from_integer(lhs) <= bound * Rat::from_integer(q)
            });
            if inside {
                out.push(cur.clone());
            }
            for k in (0..cur.len()).rev() {
                cur[k] += 1;
                if cur[k] <= ranges[k].1 {
                    continue 'outer;
                }
                cur[k] = ranges[k].0;
            }
            break;
        }
        out.sort();
        Ok(out)
    }
}

/// The Gelfand-Zetlin string space for `GL_n`: blocks of sizes
/// `n-1, n-2, …, 1` with `l_i = σ_{i-1} + σ_{i+1}` (boundary sums zero).
pub fn gz_space(n: usize) -> Result<StringSpace, Error> {
    if n < 2 {
        return Err(Error::ShapeMismatch("need n >= 2".into()));
    }
    let r = n - 1;
    let dims: Vec<usize> = (1..=r).rev().collect();
    let mut c = vec![vec![0i64; r]; r];
    for i in 0..r {
        if i > 0 {
            c[i][i - 1] = 1;
        }
        if i + 1 < r {
            c[i][i + 1] = 1;
        }
    }
    StringSpace::new(dims, c)
}

/// The Gelfand-Zetlin polytope of a non-increasing integer tuple, as the
/// interlacing inequality system over the rows below `lambda`.
pub fn gz_direct(lambda: &[i64]) -> Result<HPolytope, Error> {
    let n = lambda.len();
    if n < 2 {
        return Err(Error::ShapeMismatch("need n >= 2".into()));
    }
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::NotNonIncreasing);
    }
    let space = gz_space(n)?;
    let dim = space.dim();
    let flat = |row: usize, slot: usize| space.flat_index(row - 1, slot - 1);
    let mut ineqs: Vec<(Vec<i64>, Rat)> = Vec::new();
    for row in 1..n {
        for slot in 1..=(n - row) {
            let mut upper = vec![0i64; dim];
            upper[flat(row, slot)] = 1;
            let mut lower = vec![0i64; dim];
            lower[flat(row, slot)] = -1;
            if row == 1 {
                ineqs.push((upper, Rat::from_integer(lambda[slot - 1])));
                ineqs.push((lower, Rat::from_integer(-lambda[slot])));
            } else {
                upper[flat(row - 1, slot)] = -1;
                ineqs.push((upper, Rat::from_integer(0)));
                lower[flat(row - 1, slot + 1)] = 1;
                ineqs.push((lower, Rat::from_integer(0)));
            }
        }
    }
    HPolytope::new(ineqs)
}

/// The word `(D_1)(D_2 D_1)(D_3 D_2 D_1)…` over 0-based blocks.
pub fn gz_word(n: usize) -> Result<OperatorWord, Error> {
    if n < 2 {
        return Err(Error::ShapeMismatch("need n >= 2".into()));
    }
    let mut blocks = Vec::new();
    for group in 1..n {
        blocks.extend((0..group).rev());
    }
    Ok(OperatorWord::from_blocks(&blocks))
}

/// The seed vertex `(λ_2,…,λ_n; λ_3,…,λ_n; …; λ_n)`.
pub fn gz_seed(lambda: &[i64]) -> Result<Vec<Rat>, Error> {
    let n = lambda.len();
    if n < 2 {
        return Err(Error::ShapeMismatch("need n >= 2".into()));
    }
    let mut seed = Vec::with_capacity(n * (n - 1) / 2);
    for row in 1..n {
        seed.extend(lambda[row..].iter().map(|&v| Rat::from_integer(v)));
    }
    Ok(seed)
}

/// A string space built from a word in simple roots, with the bookkeeping
/// needed to translate word positions into operator tokens and, later, into
/// slots of the fully degenerated space.
#[derive(Clone, Debug)]
pub struct WordSpace {
    pub space: StringSpace,
    /// Which simple root each block came from, in block order.
    pub block_roots: Vec<usize>,
    /// Per word position (left to right): the block it acts on.
    pub position_blocks: Vec<usize>,
    /// Per word position: the in-block slot, counting occurrences from the
    /// right (rightmost occurrence gets slot 0).
    pub position_slots: Vec<usize>,
}

impl WordSpace {
    pub fn operator_word(&self) -> OperatorWord {
        OperatorWord::from_blocks(&self.position_blocks)
    }
}

/// Builds the string space of a (not necessarily reduced) word in simple
/// roots: block sizes are letter multiplicities and
/// `l_i = Σ_{k≠i} (α_k, α_i) σ_k` with the pairing `(α_k, α_i) = −A[k][i]`.
pub fn space_from_word(cartan: &CartanData, word: &[usize]) -> Result<WordSpace, Error> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let rank = cartan.rank();
    if let Some(&bad) = word.iter().find(|&&i| i >= rank) {
        return Err(Error::IndexOutOfRange { index: bad, rank });
    }
    let mut mult = vec![0usize; rank];
    for &i in word {
        mult[i] += 1;
    }
    let roots: Vec<usize> = (0..rank).filter(|&i| mult[i] > 0).collect();
    let block_of_root: Vec<Option<usize>> = {
        let mut map = vec![None; rank];
        for (b, &root) in roots.iter().enumerate() {
            map[root] = Some(b);
        }
        map
    };
    let dims: Vec<usize> = roots.iter().map(|&i| mult[i]).collect();
    let a = cartan.matrix();
    let c: Vec<Vec<i64>> = roots
        .iter()
        .map(|&i| {
            roots
                .iter()
                .map(|&k| if k == i { 0 } else { -a[k][i] })
                .collect()
        })
        .collect();
    let space = StringSpace::new(dims, c)?;
    let position_blocks: Vec<usize> = word.iter().map(|&i| block_of_root[i].unwrap()).collect();
    let mut seen = vec![0usize; rank];
    let mut position_slots = vec![0usize; word.len()];
    for (pos, &i) in word.iter().enumerate().rev() {
        position_slots[pos] = seen[i];
        seen[i] += 1;
    }
    Ok(WordSpace {
        space,
        block_roots: roots,
        position_blocks,
        position_slots,
    })
}

/// The worked Sp(4) construction: space, word, seed, the operator chain,
/// and the six-inequality reference description around the same seed.
#[derive(Clone, Debug)]
pub struct Sp4Example {
    pub space: StringSpace,
    pub word: OperatorWord,
    pub seed: Vec<Rat>,
    pub chain: Chain,
    pub polytope: HPolytope,
}

/// Coordinates are `(x, y; z, t)`; the seed `(a, b, c, d)` must have
/// `λ_1 = (c+d) − (a+b) >= 0` and `λ_2 = (a+b) − 2(c+d) >= 0`.
pub fn sp4_example(a: i64, b: i64, c: i64, d: i64) -> Result<Sp4Example, Error> {
    let p1 = a + b;
    let p2 = c + d;
    let lambda1 = p2 - p1;
    let lambda2 = p1 - 2 * p2;
    if lambda1 < 0 || lambda2 < 0 {
        return Err(Error::NotDominant);
    }
    let cartan = CartanData::from_name("C2")?;
    let ws = space_from_word(&cartan, &[1, 0, 1, 0])?;
    let seed: Vec<Rat> = [a, b, c, d].iter().map(|&v| Rat::from_integer(v)).collect();
    let word = ws.operator_word();
    let chain = word.apply(&ws.space, &seed)?;
    let bound = Rat::from_integer;
    let polytope = HPolytope::new(vec![
        (vec![-1, 0, 0, 0], bound(-a)),              // 0 <= x - a
        (vec![1, 0, 0, 0], bound(a + 2 * lambda1)),  // x - a <= 2 λ_1
        (vec![-1, 0, 1, 0], bound(c - a + lambda2)), // z - c <= x - a + λ_2
        (vec![0, 1, -2, 0], bound(b - 2 * c)),       // y - b <= 2(z - c)
        (vec![0, 1, -1, 0], bound(b - c + lambda2)), // y - b <= z - c + λ_2
        (vec![0, 0, 0, -1], bound(-d)),              // 0 <= t - d
        (vec![0, 0, 0, 1], bound(d + lambda2)),      // t - d <= λ_2
        (vec![0, -1, 0, 2], bound(2 * d - b)),       // t - d <= (y - b)/2
    ])?;
    Ok(Sp4Example {
        space: ws.space,
        word,
        seed,
        chain,
        polytope,
    })
}

/// Splits block `i` into `(d_i − 1, 1)` in place: the leading part keeps
/// `l_i' = l_i − 2 x^i_{d_i}`, the split-off line gets
/// `l_i'' = l_i − 2 Σ_{k<d_i} x^i_k`, and every other form rewrites
/// `σ_i = σ_{i'} + σ_{i''}`.
pub fn degenerate(space: &StringSpace, block: usize) -> Result<StringSpace, Error> {
    let r = space.rank();
    if block >= r {
        return Err(Error::IndexOutOfRange {
            index: block,
            rank: r,
        });
    }
    if space.block_dim(block) < 2 {
        return Err(Error::BlockTooSmall { block });
    }
    let mut dims = Vec::with_capacity(r + 1);
    for (k, &d) in space.block_dims().iter().enumerate() {
        if k == block {
            dims.push(d - 1);
            dims.push(1);
        } else {
            dims.push(d);
        }
    }
    let old = space.l_matrix();
    let split_row = |row: &[i64], minus_two_at: usize| -> Vec<i64> {
        let mut out = Vec::with_capacity(r + 1);
        for (k, &v) in row.iter().enumerate() {
            if k == block {
                out.push(v);
                out.push(v);
            } else {
                out.push(v);
            }
        }
        out[minus_two_at] = -2;
        out
    };
    let mut c = Vec::with_capacity(r + 1);
    for (k, old_row) in old.iter().enumerate() {
        if k == block {
            // leading part: l_i minus twice the split-off coordinate
            c.push(split_row(old_row, block + 1));
            // split-off line: l_i minus twice the leading sum
            c.push(split_row(old_row, block));
        } else {
            let mut row = Vec::with_capacity(r + 1);
            for (m, &v) in old_row.iter().enumerate() {
                if m == block {
                    row.push(v);
                    row.push(v);
                } else {
                    row.push(v);
                }
            }
            c.push(row);
        }
    }
    StringSpace::new(dims, c)
}

/// Degenerates every block down to lines. Flat coordinates never reorder,
/// so coordinate `x^i_j` becomes the rank-1 block at its flat index.
pub fn fully_degenerate(space: &StringSpace) -> StringSpace {
    let mut cur = space.clone();
    loop {
        let Some(block) = (0..cur.rank()).find(|&b| cur.block_dim(b) > 1) else {
            return cur;
        };
        cur = degenerate(&cur, block).expect("block checked to be splittable");
    }
}

/// Rewrites a divided-difference word over `space` into the corresponding
/// word over the fully degenerated space: the rightmost occurrence of each
/// block goes to its slot 0, the next to slot 1, and so on. Multiplicities
/// must match the block sizes exactly.
pub fn tilde_word(space: &StringSpace, blocks: &[usize]) -> Result<OperatorWord, Error> {
    let r = space.rank();
    if let Some(&bad) = blocks.iter().find(|&&i| i >= r) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            rank: r,
        });
    }
    let mut mult = vec![0usize; r];
    for &b in blocks {
        mult[b] += 1;
    }
    if (0..r).any(|i| mult[i] != space.block_dim(i)) {
        return Err(Error::MultiplicityMismatch);
    }
    let mut seen = vec![0usize; r];
    let mut flat = vec![0usize; blocks.len()];
    for (pos, &b) in blocks.iter().enumerate().rev() {
        flat[pos] = space.flat_index(b, seen[b]);
        seen[b] += 1;
    }
    Ok(OperatorWord::from_blocks(&flat))
}

/// The SL(3) twisted-cube construction in the degenerated rank-3 space,
/// with its two reference inequality systems: the chain is `I_P − I_Q`
/// pointwise,
/// and `Q`'s strict bounds are realized at lattice resolution by a `1/q`
/// margin.
#[derive(Clone, Debug)]
pub struct TwistedCube {
    pub space: StringSpace,
    pub word: OperatorWord,
    pub seed: Vec<Rat>,
    pub chain: Chain,
    pub polytope: HPolytope,
    pub removed: HPolytope,
}

pub fn twisted_cube(a: Rat, b: Rat, c: Rat) -> Result<TwistedCube, Error> {
    let base = StringSpace::new(vec![2, 1], vec![vec![0, 1], vec![1, 0]])?;
    let space = degenerate(&base, 0)?;
    let word = tilde_word(&base, &[0, 1, 0])?;
    let seed = vec![a, b, c];
    let chain = word.apply(&space, &seed)?;
    let q = chain.refinement();
    let margin = Rat::new(1, q);
    // coordinates (x, y, z); closed region P per the (GK) block
    let polytope = HPolytope::new(vec![
        (vec![-1, 0, 0], -a),           // a <= x
        (vec![1, 0, 0], c - b - b - a), // x <= c - 2b - a
        (vec![0, 0, -1], -c),           // c <= z
        (vec![-1, 0, 1], b - c),        // z <= x + b - c
        (vec![0, -1, 0], -b),           // b <= y
        (vec![2, 1, -1], -b),           // y <= -2x + z - b
    ])?;
    // removed region Q: same x and z ranges, strict flip of the y pair
    let removed = HPolytope::new(vec![
        (vec![-1, 0, 0], -a),
        (vec![1, 0, 0], c - b - b - a),
        (vec![0, 0, -1], -c),
        (vec![-1, 0, 1], b - c),
        (vec![0, 1, 0], b - margin),   // y < b
        (vec![-2, -1, 1], b - margin), // y > -2x + z - b
    ])?;
    Ok(TwistedCube {
        space,
        word,
        seed,
        chain,
        polytope,
        removed,
    })
}

/// The string space of a Bott tower: rank-1 blocks with
/// `l_i = Σ_{k>i} B[i][k]·y_{k+1}`-style strictly upper-triangular data and
/// `l_d = y_1`.
pub fn bott_tower_space(b: &[Vec<i64>]) -> Result<StringSpace, Error> {
    let d = b.len();
    if d == 0 || b.iter().any(|row| row.len() != d) {
        return Err(Error::ShapeMismatch(
            "matrix must be square and nonempty".into(),
        ));
    }
    for (i, row) in b.iter().enumerate() {
        if row[..=i].iter().any(|&v| v != 0) {
            return Err(Error::ShapeMismatch(
                "matrix must be strictly upper triangular".into(),
            ));
        }
    }
    let mut c = b.to_vec();
    if d >= 2 {
        c[d - 1] = vec![0; d];
        c[d - 1][0] = 1; // the last form reads the first coordinate
    }
    StringSpace::new(vec![1; d], c)
}

/// Simple-root coordinates of a `GL_n` weight given in the `ε` basis.
pub fn a_type_alpha_coords(lambda: &[i64]) -> Vec<Rat> {
    let n = lambda.len() as i64;
    let total: i64 = lambda.iter().sum();
    let mut partial = 0i64;
    lambda[..lambda.len() - 1]
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            partial += v;
            Rat::from_integer(partial) - Rat::new((i as i64 + 1) * total, n)
        })
        .collect()
}

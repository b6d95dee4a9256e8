//! Root-system data backing the independent character oracle: positive-root
//! closure, the Weyl dimension formula, Freudenthal's multiplicity recursion,
//! and reduced-word machinery for the longest Weyl element.
//!
//! Weights are written in the basis of simple roots throughout (`y` in
//! `Q^r`), matching the weight projection of string spaces. The matrix is
//! stored as `A[k][i] = ⟨α_k, α_i^∨⟩`, so the pairing used by the string
//! space construction is `(α_k, α_i) = −A[k][i]`.
//!
//! Freudenthal shares no code with the geometric pipeline or with the `T_i`
//! operators; that independence is what makes it usable as the acceptance
//! oracle for Weyl characters.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::character::WeightForms;
use crate::error::Error;
use crate::rational::{denominator_lcm, Rat};

const ROOT_CLOSURE_BOUND: usize = 600;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    matrix: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    symmetrizers: Vec<i64>,
    rho: Vec<Rat>,
}

impl CartanData {
    /// Validates a generalized Cartan matrix, symmetrizes it, and closes the
    /// simple roots under reflections. Fails with [`Error::NotFiniteType`]
    /// when the closure does not terminate within a generous bound.
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self, Error> {
        let r = matrix.len();
        if r == 0 || matrix.iter().any(|row| row.len() != r) {
            return Err(Error::ShapeMismatch(
                "Cartan matrix must be square and nonempty".into(),
            ));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row[i] != 2 {
                return Err(Error::ShapeMismatch(format!("diagonal entry {i} is not 2")));
            }
            for (k, &entry) in row.iter().enumerate() {
                if k != i {
                    if entry > 0 {
                        return Err(Error::ShapeMismatch(
                            "off-diagonal Cartan entries must be <= 0".into(),
                        ));
                    }
                    if (entry == 0) != (matrix[k][i] == 0) {
                        return Err(Error::ShapeMismatch(
                            "Cartan zero pattern must be symmetric".into(),
                        ));
                    }
                }
            }
        }
        let symmetrizers = symmetrize(&matrix)?;
        let positive_roots = close_roots(&matrix)?;
        let mut rho = vec![Rat::zero(); r];
        for root in &positive_roots {
            for (k, &c) in root.iter().enumerate() {
                rho[k] += Rat::new(c, 2);
            }
        }
        Ok(CartanData {
            matrix,
            positive_roots,
            symmetrizers,
            rho,
        })
    }

    pub fn from_name(name: &str) -> Result<Self, Error> {
        let name = name.trim().to_ascii_uppercase();
        let (letter, digits) = name.split_at(1);
        let n: usize = digits
            .parse()
            .map_err(|_| Error::Parse(format!("invalid Cartan type `{name}`")))?;
        let bad = || Error::Parse(format!("unsupported Cartan type `{name}`"));
        let mut m = chain_matrix(n);
        match (letter, n) {
            ("A", _) if n >= 1 => {}
            ("B", _) if n >= 2 => m[n - 2][n - 1] = -2,
            ("C", _) if n >= 2 => m[n - 1][n - 2] = -2,
            ("D", _) if n >= 3 => {
                m[n - 2][n - 1] = 0;
                m[n - 1][n - 2] = 0;
                m[n - 3][n - 1] = -1;
                m[n - 1][n - 3] = -1;
            }
            ("G", 2) => m[1][0] = -3,
            _ => return Err(bad()),
        }
        CartanData::new(m)
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    /// Positive roots in simple-root coordinates, sorted.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// Half the sum of the positive roots.
    pub fn rho(&self) -> &[Rat] {
        &self.rho
    }

    /// The l-matrix of the string space attached to this root system:
    /// `C[i][k] = (α_k, α_i) = −A[k][i]` off the diagonal.
    pub fn l_matrix(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|k| if k == i { 0 } else { -self.matrix[k][i] })
                    .collect()
            })
            .collect()
    }

    /// `⟨y, α_i^∨⟩` for `y` in simple-root coordinates.
    pub fn coroot_pairing(&self, y: &[Rat], i: usize) -> Rat {
        (0..self.rank())
            .map(|k| y[k] * Rat::from_integer(self.matrix[k][i]))
            .sum()
    }

    pub fn is_dominant(&self, y: &[Rat]) -> bool {
        (0..self.rank()).all(|i| !self.coroot_pairing(y, i).is_negative())
    }

    /// The W-invariant form `(x, y)`, normalized so short roots have square
    /// length 2.
    pub fn inner(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (k, xv) in x.iter().enumerate() {
            if xv.is_zero() {
                continue;
            }
            for (i, yv) in y.iter().enumerate() {
                let b = self.matrix[k][i] * self.symmetrizers[i];
                if b != 0 {
                    acc += xv * yv * Rat::from_integer(b);
                }
            }
        }
        acc
    }

    /// Simple reflection on weight coordinates: `s_i(y) = y − ⟨y, α_i^∨⟩ α_i`.
    pub fn reflect_weight(&self, i: usize, y: &[Rat]) -> Vec<Rat> {
        let mut out = y.to_vec();
        out[i] -= self.coroot_pairing(y, i);
        out
    }

    /// Weyl dimension formula; `lambda` must be dominant.
    pub fn weyl_dimension(&self, lambda: &[Rat]) -> Result<i64, Error> {
        if !self.is_dominant(lambda) {
            return Err(Error::NotDominant);
        }
        let shifted: Vec<Rat> = lambda.iter().zip(&self.rho).map(|(a, b)| a + b).collect();
        let mut dim = Rat::from_integer(1);
        for root in &self.positive_roots {
            let root_r: Vec<Rat> = root.iter().map(|&c| Rat::from_integer(c)).collect();
            dim *= self.inner(&shifted, &root_r) / self.inner(&self.rho, &root_r);
        }
        debug_assert!(dim.is_integer());
        Ok(dim.to_integer())
    }

    /// Weight multiplicities of the irreducible module with highest weight
    /// `lambda`, over the full weight system, by Freudenthal's recursion.
    pub fn freudenthal_multiplicities(
        &self,
        lambda: &[Rat],
    ) -> Result<BTreeMap<Vec<Rat>, i64>, Error> {
        if lambda.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: lambda.len(),
            });
        }
        if !self.is_dominant(lambda) {
            return Err(Error::NotDominant);
        }
        let scale = denominator_lcm(lambda);
        let to_rat = |v: &[i64]| -> Vec<Rat> { v.iter().map(|&c| Rat::new(c, scale)).collect() };
        let top: Vec<i64> = lambda
            .iter()
            .map(|c| (c * Rat::from_integer(scale)).to_integer())
            .collect();
        let lambda_rho: Vec<Rat> = lambda.iter().zip(&self.rho).map(|(a, b)| a + b).collect();
        let top_norm = self.inner(&lambda_rho, &lambda_rho);

        let mut mult: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        mult.insert(top.clone(), 1);
        let mut level: Vec<Vec<i64>> = vec![top.clone()];
        while !level.is_empty() {
            // candidates one simple root below the current weights; every
            // true weight is reachable this way because any weight besides
            // the highest has some mu + alpha_j in the weight system
            let mut candidates: BTreeSet<Vec<i64>> = BTreeSet::new();
            for mu in &level {
                for j in 0..self.rank() {
                    let mut down = mu.clone();
                    down[j] -= scale;
                    candidates.insert(down);
                }
            }
            let mut next = Vec::new();
            for cand in candidates {
                let cand_rat = to_rat(&cand);
                let mut upper_sum = Rat::zero();
                for root in &self.positive_roots {
                    let root_rat: Vec<Rat> = root.iter().map(|&c| Rat::from_integer(c)).collect();
                    // walk the whole string while it can still fit under
                    // lambda; gaps are possible above a non-weight candidate
                    let mut k = 1i64;
                    loop {
                        let above: Vec<i64> = cand
                            .iter()
                            .zip(root)
                            .map(|(c, r)| c + k * r * scale)
                            .collect();
                        if above.iter().zip(&top).any(|(a, t)| a > t) {
                            break;
                        }
                        if let Some(&m) = mult.get(&above) {
                            let above_rat = to_rat(&above);
                            upper_sum += Rat::from_integer(m) * self.inner(&above_rat, &root_rat);
                        }
                        k += 1;
                    }
                }
                let shifted: Vec<Rat> =
                    cand_rat.iter().zip(&self.rho).map(|(a, b)| a + b).collect();
                let denom = top_norm - self.inner(&shifted, &shifted);
                let numer = upper_sum * Rat::from_integer(2);
                if denom.is_zero() {
                    debug_assert!(numer.is_zero(), "Freudenthal numerator at a non-weight");
                    continue;
                }
                let m = numer / denom;
                debug_assert!(m.is_integer() && !m.is_negative());
                let m = m.to_integer();
                if m > 0 {
                    mult.insert(cand.clone(), m);
                    next.push(cand);
                }
            }
            level = next;
        }
        Ok(mult.into_iter().map(|(k, v)| (to_rat(&k), v)).collect())
    }

    /// A reduced word for the longest Weyl element, built by greedy descent
    /// from `rho` and validated against the positive-root count.
    pub fn longest_word(&self) -> Vec<usize> {
        let mut v = self.rho.clone();
        let mut taken = Vec::new();
        let bound = 4 * self.positive_roots.len() + 4;
        while let Some(i) = (0..self.rank()).find(|&i| self.coroot_pairing(&v, i).is_positive()) {
            v = self.reflect_weight(i, &v);
            taken.push(i);
            assert!(taken.len() <= bound, "descent from rho failed to terminate");
        }
        let minus_rho: Vec<Rat> = self.rho.iter().map(|c| -c).collect();
        assert_eq!(v, minus_rho, "descent from rho must end at -rho");
        assert_eq!(taken.len(), self.positive_roots.len());
        taken.reverse();
        taken
    }

    /// The integer matrix of the word's Weyl element on simple-root
    /// coordinates (letters compose left to right, rightmost acting first).
    pub fn word_matrix(&self, word: &[usize]) -> Vec<Vec<i64>> {
        let r = self.rank();
        // columns are images of the basis vectors
        let mut cols: Vec<Vec<i64>> = (0..r)
            .map(|k| (0..r).map(|j| i64::from(j == k)).collect())
            .collect();
        for &i in word.iter().rev() {
            for col in cols.iter_mut() {
                let pairing: i64 = (0..r).map(|k| col[k] * self.matrix[k][i]).sum();
                col[i] -= pairing;
            }
        }
        cols
    }

    /// Coxeter length of the word's element: the number of positive roots it
    /// sends to negative roots.
    pub fn word_length(&self, word: &[usize]) -> usize {
        let cols = self.word_matrix(word);
        let r = self.rank();
        self.positive_roots
            .iter()
            .filter(|root| (0..r).all(|j| (0..r).map(|k| root[k] * cols[k][j]).sum::<i64>() <= 0))
            .count()
    }

    pub fn is_reduced_word(&self, word: &[usize]) -> bool {
        word.iter().all(|&i| i < self.rank()) && self.word_length(word) == word.len()
    }

    /// Whether the word is a reduced expression of the longest element.
    pub fn is_longest_word(&self, word: &[usize]) -> bool {
        self.is_reduced_word(word) && word.len() == self.positive_roots.len()
    }

    /// Action of the longest element on weight coordinates.
    pub fn w0_action(&self, y: &[Rat]) -> Vec<Rat> {
        let mut out = y.to_vec();
        for &i in self.longest_word().iter().rev() {
            out = self.reflect_weight(i, &out);
        }
        out
    }
}

impl WeightForms for CartanData {
    fn rank(&self) -> usize {
        CartanData::rank(self)
    }

    fn l_weight_coeff(&self, i: usize, k: usize) -> i64 {
        if k == i {
            0
        } else {
            -self.matrix[k][i]
        }
    }
}

fn chain_matrix(n: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        m[i][i] = 2;
        if i + 1 < n {
            m[i][i + 1] = -1;
            m[i + 1][i] = -1;
        }
    }
    m
}

/// Positive symmetrizers `c_i` with `A[k][i]·c_i` symmetric, normalized to
/// coprime integers (short roots get 1 in the irreducible cases).
fn symmetrize(matrix: &[Vec<i64>]) -> Result<Vec<i64>, Error> {
    let r = matrix.len();
    let mut c: Vec<Option<Rat>> = vec![None; r];
    for start in 0..r {
        if c[start].is_some() {
            continue;
        }
        c[start] = Some(Rat::from_integer(1));
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let ci = c[i].unwrap();
            for k in 0..r {
                if k == i || matrix[i][k] == 0 {
                    continue;
                }
                // B[k][i] = A[k][i] c_i must equal B[i][k] = A[i][k] c_k
                let want = ci * Rat::new(matrix[k][i], matrix[i][k]);
                match c[k] {
                    None => {
                        c[k] = Some(want);
                        queue.push_back(k);
                    }
                    Some(existing) if existing != want => {
                        return Err(Error::ShapeMismatch(
                            "Cartan matrix is not symmetrizable".into(),
                        ))
                    }
                    _ => {}
                }
            }
        }
    }
    let c: Vec<Rat> = c.into_iter().map(Option::unwrap).collect();
    let scale = c.iter().fold(1i64, |acc, v| acc.lcm(v.denom()));
    let mut ints: Vec<i64> = c
        .iter()
        .map(|v| (v * Rat::from_integer(scale)).to_integer())
        .collect();
    let g = ints.iter().fold(0i64, |acc, &v| acc.gcd(&v));
    if g > 1 {
        ints.iter_mut().for_each(|v| *v /= g);
    }
    if ints.iter().any(|&v| v <= 0) {
        return Err(Error::ShapeMismatch(
            "Cartan symmetrizers must be positive".into(),
        ));
    }
    Ok(ints)
}

/// Closes the simple roots under simple reflections, keeping the positives.
fn close_roots(matrix: &[Vec<i64>]) -> Result<Vec<Vec<i64>>, Error> {
    let r = matrix.len();
    let mut roots: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for k in 0..r {
        let mut e = vec![0i64; r];
        e[k] = 1;
        roots.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(root) = queue.pop_front() {
        for i in 0..r {
            let pairing: i64 = (0..r).map(|k| root[k] * matrix[k][i]).sum();
            let mut image = root.clone();
            image[i] -= pairing;
            if image.iter().all(|&v| v >= 0) && roots.insert(image.clone()) {
                if roots.len() > ROOT_CLOSURE_BOUND {
                    return Err(Error::NotFiniteType);
                }
                queue.push_back(image);
            }
        }
    }
    Ok(roots.into_iter().collect())
}

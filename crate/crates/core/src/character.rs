//! Laurent polynomials over the weight lattice, the character map, and the
//! symbolic divided difference operators that serve as the independent
//! oracle for the geometric pipeline.
//!
//! A polynomial lives in formal exponentials `t_i = e^{α_i}` with integer
//! coefficients and rational exponents sharing one denominator. The operator
//! `T_i` acts monomial-wise: `e^y` maps to the geometric sum of `t_i` powers
//! between `y_i` and `l_i(y) − y_i`, with the meromorphic continuation giving
//! minus the open-interval sum when the endpoints come in reversed order.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::chain::Chain;
use crate::error::Error;
use crate::rational::Rat;
use crate::string_space::StringSpace;

/// Access to the linear forms `l_i` on weight space. Implemented by string
/// spaces (through their l-matrix) and by Cartan data (through the pairing
/// `(α_k, α_i) = −⟨α_k, α_i^∨⟩`).
pub trait WeightForms {
    fn rank(&self) -> usize;
    /// Coefficient of `y_k` in `l_i(y)`; zero when `k == i`.
    fn l_weight_coeff(&self, i: usize, k: usize) -> i64;

    fn l_weight(&self, i: usize, y: &[Rat]) -> Rat {
        (0..self.rank())
            .map(|k| Rat::from_integer(self.l_weight_coeff(i, k)) * y[k])
            .sum()
    }
}

impl WeightForms for StringSpace {
    fn rank(&self) -> usize {
        StringSpace::rank(self)
    }

    fn l_weight_coeff(&self, i: usize, k: usize) -> i64 {
        self.l_matrix()[i][k]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPoly", into = "RawPoly")]
pub struct LaurentPolynomial {
    rank: usize,
    denom: i64,
    terms: BTreeMap<Vec<i64>, i64>,
}

#[derive(Serialize, Deserialize)]
struct RawPoly {
    #[serde(default)]
    rank: Option<usize>,
    denominator: i64,
    terms: Vec<RawTerm>,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    exp: Vec<i64>,
    coeff: i64,
}

impl TryFrom<RawPoly> for LaurentPolynomial {
    type Error = Error;
    fn try_from(raw: RawPoly) -> Result<Self, Error> {
        if raw.denominator < 1 {
            return Err(Error::ShapeMismatch("denominator must be >= 1".into()));
        }
        let rank = match (raw.rank, raw.terms.first()) {
            (Some(r), _) => r,
            (None, Some(t)) => t.exp.len(),
            (None, None) => {
                return Err(Error::ShapeMismatch(
                    "rank is required for a polynomial with no terms".into(),
                ))
            }
        };
        let mut terms = BTreeMap::new();
        for t in raw.terms {
            if t.exp.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    got: t.exp.len(),
                });
            }
            *terms.entry(t.exp).or_insert(0) += t.coeff;
        }
        terms.retain(|_, c| *c != 0);
        let mut poly = LaurentPolynomial {
            rank,
            denom: raw.denominator,
            terms,
        };
        poly.check_single_coset()?;
        poly.normalize();
        Ok(poly)
    }
}

impl From<LaurentPolynomial> for RawPoly {
    fn from(p: LaurentPolynomial) -> Self {
        RawPoly {
            rank: Some(p.rank),
            denominator: p.denom,
            terms: p
                .terms
                .into_iter()
                .map(|(exp, coeff)| RawTerm { exp, coeff })
                .collect(),
        }
    }
}

impl LaurentPolynomial {
    pub fn zero(rank: usize) -> Self {
        LaurentPolynomial {
            rank,
            denom: 1,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exp: &[Rat], coeff: i64) -> Self {
        let denom = crate::rational::denominator_lcm(exp);
        let scaled = exp
            .iter()
            .map(|c| (c * Rat::from_integer(denom)).to_integer())
            .collect::<Vec<_>>();
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(scaled, coeff);
        }
        let mut p = LaurentPolynomial {
            rank: exp.len(),
            denom,
            terms,
        };
        p.normalize();
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of distinct monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(exponent, coefficient)` with rational exponents, in
    /// lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<Rat>, i64)> + '_ {
        self.terms
            .iter()
            .map(move |(e, c)| (e.iter().map(|&v| Rat::new(v, self.denom)).collect(), *c))
    }

    pub fn coeff(&self, exp: &[Rat]) -> i64 {
        let scaled: Option<Vec<i64>> = exp
            .iter()
            .map(|c| {
                let s = c * Rat::from_integer(self.denom);
                s.is_integer().then(|| s.to_integer())
            })
            .collect();
        scaled
            .and_then(|s| self.terms.get(&s).copied())
            .unwrap_or(0)
    }

    /// Value at `t_1 = … = t_r = 1`, i.e. the coefficient sum.
    pub fn eval_at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    fn normalize(&mut self) {
        if self.terms.is_empty() {
            self.denom = 1;
            return;
        }
        let mut g = self.denom;
        for e in self.terms.keys() {
            for &v in e {
                g = g.gcd(&v);
            }
        }
        if g > 1 {
            self.denom /= g;
            self.terms = self
                .terms
                .iter()
                .map(|(e, &c)| (e.iter().map(|&v| v / g).collect(), c))
                .collect();
        }
    }

    fn check_single_coset(&self) -> Result<(), Error> {
        let mut it = self.terms.keys();
        if let Some(first) = it.next() {
            for e in it {
                if e.iter()
                    .zip(first)
                    .any(|(a, b)| (a - b).mod_floor(&self.denom) != 0)
                {
                    return Err(Error::ShapeMismatch(
                        "polynomial exponents span more than one lattice coset".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn merged(&self, other: &Self, flip: i64) -> Result<Self, Error> {
        if self.rank != other.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: other.rank,
            });
        }
        let denom = self.denom.lcm(&other.denom);
        let (ka, kb) = (denom / self.denom, denom / other.denom);
        let mut terms: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        for (e, &c) in &self.terms {
            *terms
                .entry(e.iter().map(|&v| v * ka).collect())
                .or_insert(0) += c;
        }
        for (e, &c) in &other.terms {
            *terms
                .entry(e.iter().map(|&v| v * kb).collect())
                .or_insert(0) += c * flip;
        }
        terms.retain(|_, c| *c != 0);
        let mut out = LaurentPolynomial {
            rank: self.rank,
            denom,
            terms,
        };
        out.check_single_coset()?;
        out.normalize();
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.merged(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.merged(other, -1)
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero(self.rank);
        }
        LaurentPolynomial {
            rank: self.rank,
            denom: self.denom,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| (e.clone(), c * k))
                .collect(),
        }
    }

    /// Multiplication by `coeff·e^{exp}`.
    pub fn mul_monomial(&self, exp: &[Rat], coeff: i64) -> Result<Self, Error> {
        if exp.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: exp.len(),
            });
        }
        if coeff == 0 || self.is_zero() {
            return Ok(Self::zero(self.rank));
        }
        let denom = self.denom.lcm(&crate::rational::denominator_lcm(exp));
        let k = denom / self.denom;
        let shift: Vec<i64> = exp
            .iter()
            .map(|c| (c * Rat::from_integer(denom)).to_integer())
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| {
                (
                    e.iter()
                        .zip(&shift)
                        .map(|(&v, s)| v * k + s)
                        .collect::<Vec<i64>>(),
                    c * coeff,
                )
            })
            .collect();
        let mut out = LaurentPolynomial {
            rank: self.rank,
            denom,
            terms,
        };
        out.normalize();
        Ok(out)
    }

    /// Human-readable sum of `t_i^a` monomials, exponents lexicographic.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (exp, coeff) in self.terms() {
            let mono: Vec<String> = exp
                .iter()
                .enumerate()
                .filter(|(_, e)| !e.is_zero())
                .map(|(i, e)| format!("t_{}^{}", i + 1, crate::rational::format_rat(e)))
                .collect();
            let mono = if mono.is_empty() {
                "1".to_string()
            } else {
                mono.join(" ")
            };
            if out.is_empty() {
                if coeff < 0 {
                    out.push_str("- ");
                }
            } else if coeff < 0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let a = coeff.abs();
            if a == 1 {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        out
    }
}

/// The character of a chain: the sum of `e^{p(x)}` over the support on the
/// character lattice `shift + Z^d`, with multiplicities. Linear in the chain.
pub fn chi(chain: &Chain) -> LaurentPolynomial {
    let space = chain.space();
    let q = chain.refinement();
    let mut terms: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for (point, value) in chain.support_points(true) {
        let exponent: Vec<i64> = (0..space.rank())
            .map(|i| {
                let o = space.block_offset(i);
                point[o..o + space.block_dim(i)].iter().sum()
            })
            .collect();
        *terms.entry(exponent).or_insert(0) += value;
    }
    terms.retain(|_, c| *c != 0);
    let mut poly = LaurentPolynomial {
        rank: space.rank(),
        denom: q,
        terms,
    };
    poly.normalize();
    poly
}

/// Exponential sum over the integer points of `[mu, nu]` in the variable
/// `t_var`, continued to reversed endpoints: zero when `nu = mu − 1`, and
/// minus the open-interval sum when `nu <= mu − 2`. The endpoints must
/// differ by an integer; a common non-integral offset is factored out.
pub fn geometric_segment(rank: usize, var: usize, mu: Rat, nu: Rat) -> LaurentPolynomial {
    assert!(
        (nu - mu).is_integer(),
        "geometric segment endpoints must lie in one integer coset"
    );
    let (sign, from, to) = if mu <= nu {
        (1, mu, nu)
    } else if nu == mu - Rat::from_integer(1) {
        return LaurentPolynomial::zero(rank);
    } else {
        (-1, nu + Rat::from_integer(1), mu - Rat::from_integer(1))
    };
    let steps = (to - from).to_integer();
    let mut acc = LaurentPolynomial::zero(rank);
    for k in 0..=steps {
        let mut exp = vec![Rat::zero(); rank];
        exp[var] = from + Rat::from_integer(k);
        acc = acc
            .add(&LaurentPolynomial::monomial(&exp, sign))
            .expect("same rank");
    }
    acc
}

/// The symbolic divided difference `T_i f = (f − t_i·s_i f)/(1 − t_i)`,
/// computed monomial-wise through [`geometric_segment`]. Idempotent.
pub fn demazure_t<W: WeightForms>(
    forms: &W,
    i: usize,
    f: &LaurentPolynomial,
) -> Result<LaurentPolynomial, Error> {
    if i >= forms.rank() {
        return Err(Error::IndexOutOfRange {
            index: i,
            rank: forms.rank(),
        });
    }
    if f.rank() != forms.rank() {
        return Err(Error::DimensionMismatch {
            expected: forms.rank(),
            got: f.rank(),
        });
    }
    let mut out = LaurentPolynomial::zero(f.rank());
    for (exp, coeff) in f.terms() {
        let m = exp[i];
        let m_reflected = forms.l_weight(i, &exp) - m;
        if !(m_reflected - m).is_integer() {
            return Err(Error::CosetNotStable { index: i });
        }
        let segment = geometric_segment(f.rank(), i, m, m_reflected);
        let mut rest = exp.clone();
        rest[i] = Rat::zero();
        out = out.add(&segment.mul_monomial(&rest, coeff)?)?;
    }
    Ok(out)
}

/// Right-to-left composition of `T` operators over 0-based block indices.
pub fn demazure_t_word<W: WeightForms>(
    forms: &W,
    word: &[usize],
    f: &LaurentPolynomial,
) -> Result<LaurentPolynomial, Error> {
    let mut acc = f.clone();
    for &i in word.iter().rev() {
        acc = demazure_t(forms, i, &acc)?;
    }
    Ok(acc)
}

/// The degeneration projection on characters: merges the adjacent exponent
/// pair at positions `i, i+1` (0-based) by addition. A ring homomorphism on
/// the corresponding group algebras.
pub fn project_degeneration(i: usize, f: &LaurentPolynomial) -> Result<LaurentPolynomial, Error> {
    if f.rank() < 2 || i + 1 >= f.rank() {
        return Err(Error::ShapeMismatch(format!(
            "cannot merge exponents {},{} of a rank-{} polynomial",
            i,
            i + 1,
            f.rank()
        )));
    }
    let mut terms: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for (e, &c) in &f.terms {
        let mut merged = Vec::with_capacity(f.rank - 1);
        merged.extend_from_slice(&e[..i]);
        merged.push(e[i] + e[i + 1]);
        merged.extend_from_slice(&e[i + 2..]);
        *terms.entry(merged).or_insert(0) += c;
    }
    terms.retain(|_, c| *c != 0);
    let mut out = LaurentPolynomial {
        rank: f.rank - 1,
        denom: f.denom,
        terms,
    };
    out.check_single_coset()?;
    out.normalize();
    Ok(out)
}

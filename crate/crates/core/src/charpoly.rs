//! Exact characteristic polynomials of `H_TA/χ`.
//!
//! `H_TA` only couples `m` to `m ± 2`, so in the `|j, m>` basis it splits into
//! two Hermitian tridiagonal chains with zero diagonal: one through
//! `j, j-2, j-4, ...` and one through `j-1, j-3, ...`. A chain with squared
//! couplings `w_1, ..., w_{n-1}` has the monic characteristic polynomial
//! `q_k = λ q_{k-1} - w_{k-1} q_{k-2}`, so the exact polynomial only needs the
//! rationals `w` and never the irrational matrix entries.

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::{HalfInt, Spin};
use crate::poly::{resultant, IntPolynomial, RatPolynomial};
use crate::spin_algebra::pair_coupling_sq;

/// One `Δm = 2` chain of `H_TA/χ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// `m` values along the chain, descending.
    pub labels: Vec<HalfInt>,
    /// `couplings[k] = |<labels[k]|H/χ|labels[k+1]>|²`.
    pub couplings: Vec<Rational>,
}

impl Block {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// `det(T - λI)` of this chain over the rationals.
    pub fn char_poly(&self) -> RatPolynomial {
        let n = self.size();
        if n == 0 {
            return RatPolynomial::one();
        }
        let mut prev = RatPolynomial::one();
        let mut cur = RatPolynomial::one().shift_up();
        for w in &self.couplings {
            let next = cur.shift_up().sub(&prev.scale(w));
            prev = cur;
            cur = next;
        }
        if n % 2 == 1 {
            cur.scale(&Rational::from(-1))
        } else {
            cur
        }
    }

    /// `Σ_k 2 w_k = tr(T²)`.
    pub fn trace_sq(&self) -> Rational {
        self.couplings.iter().fold(Rational::new(), |acc, w| acc + Rational::from(w * 2u32))
    }
}

/// The two chains of `H_TA/χ`. `block_a` starts at `m = j` and is the larger
/// one when `2j + 1` is odd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub j: Spin,
    pub block_a: Block,
    pub block_b: Block,
}

impl BlockDecomposition {
    pub fn blocks(&self) -> [&Block; 2] {
        [&self.block_a, &self.block_b]
    }

    /// `tr((H/χ)²)`, exactly.
    pub fn trace_sq(&self) -> Rational {
        self.block_a.trace_sq() + self.block_b.trace_sq()
    }
}

pub fn block_decompose(j: Spin) -> BlockDecomposition {
    let chain = |start: usize| {
        let labels: Vec<HalfInt> = (start..j.dim()).step_by(2).map(|k| j.label_at(k)).collect();
        // the link between m+2 and m carries w_m
        let couplings = labels.windows(2).map(|w| pair_coupling_sq(j, w[1])).collect();
        Block { labels, couplings }
    };
    BlockDecomposition { j, block_a: chain(0), block_b: chain(1) }
}

/// `det(H_TA/χ - λI)` with exact integer coefficients.
pub fn char_poly_exact(j: Spin) -> Result<IntPolynomial> {
    let d = block_decompose(j);
    let full = d.block_a.char_poly().mul(&d.block_b.char_poly());
    full.to_integer().ok_or_else(|| {
        Error::InternalConsistency(format!("characteristic polynomial of spin {j} is not integral"))
    })
}

/// `disc(p) = (-1)^{n(n-1)/2} Res(p, p') / lc(p)`.
pub fn discriminant(p: &IntPolynomial) -> Result<Integer> {
    let n = match p.degree() {
        None => return Err(Error::InvalidInput("discriminant of the zero polynomial".into())),
        Some(0) => return Err(Error::InvalidInput("discriminant of a constant polynomial".into())),
        Some(n) => n,
    };
    let res = resultant(p, &p.derivative());
    let lc = p.leading().unwrap();
    let mut d = res.div_exact(lc);
    if (n * (n - 1) / 2) % 2 == 1 {
        d = -d;
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    pub j: Spin,
    #[serde(with = "integer_string")]
    pub discriminant_full: Integer,
    /// Discriminants of the primitive integer forms of the two block
    /// polynomials (`None` for an empty or 1-dimensional block).
    #[serde(with = "opt_integer_string_vec")]
    pub discriminant_blocks: Vec<Option<Integer>>,
    pub degenerate: bool,
}

pub fn degeneracy_report(j: Spin) -> Result<DegeneracyReport> {
    if j.twice() < 1 {
        return Err(Error::InvalidInput("degeneracy needs j >= 1/2".into()));
    }
    let full = char_poly_exact(j)?;
    let discriminant_full = discriminant(&full)?;
    let d = block_decompose(j);
    let discriminant_blocks = d
        .blocks()
        .iter()
        .map(|b| {
            let p = b.char_poly().to_primitive_integer();
            match p.degree() {
                Some(n) if n >= 2 => discriminant(&p).map(Some),
                _ => Ok(None),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DegeneracyReport {
        j,
        degenerate: discriminant_full == 0,
        discriminant_full,
        discriminant_blocks,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SolvabilityClass {
    /// The polynomial is a pure power of λ.
    TrivialZero,
    /// Every factor in μ = λ² has degree at most 4.
    Radicals,
    /// A quintic in μ remains; roots are expressible through hypergeometric
    /// functions but not radicals.
    Hypergeometric,
    /// Degree 6 or more in μ.
    NumericOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solvability {
    pub class: SolvabilityClass,
    pub mu_degree: usize,
}

impl SolvabilityClass {
    pub fn from_mu_degree(mu_degree: usize) -> Self {
        match mu_degree {
            0 => SolvabilityClass::TrivialZero,
            1..=4 => SolvabilityClass::Radicals,
            5 => SolvabilityClass::Hypergeometric,
            _ => SolvabilityClass::NumericOnly,
        }
    }
}

/// μ-degree of a block polynomial after removing its λ factors.
pub fn block_mu_degree(block_poly: &RatPolynomial) -> usize {
    let p = block_poly.to_primitive_integer();
    let v = p.lambda_valuation();
    (p.degree().unwrap_or(0) - v) / 2
}

pub fn classify_solvability(j: Spin) -> Result<Solvability> {
    if j.twice() < 1 {
        return Err(Error::InvalidInput("solvability needs j >= 1/2".into()));
    }
    let d = block_decompose(j);
    let mu_degree = d.blocks().iter().map(|b| block_mu_degree(&b.char_poly())).max().unwrap_or(0);
    Ok(Solvability { class: SolvabilityClass::from_mu_degree(mu_degree), mu_degree })
}

pub(crate) mod integer_string {
    use rug::Integer;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Integer, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Integer, D::Error> {
        let s = String::deserialize(d)?;
        Integer::from_str_radix(&s, 10).map_err(serde::de::Error::custom)
    }
}

mod opt_integer_string_vec {
    use rug::Integer;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Option<Integer>], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<Option<String>> = v.iter().map(|x| x.as_ref().map(Integer::to_string)).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Option<Integer>>, D::Error> {
        let strs = Vec::<Option<String>>::deserialize(d)?;
        strs.into_iter()
            .map(|x| x.map(|s| Integer::from_str_radix(&s, 10).map_err(serde::de::Error::custom)).transpose())
            .collect()
    }
}

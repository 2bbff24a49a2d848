//! Weight domains for weighted tree automata.
//!
//! A [`Semiring`] supplies the two monoid structures weighted evaluation
//! needs: addition to sum over runs and multiplication to chain weights along
//! a run. Two instances are built in: exact rationals of arbitrary precision
//! ([`Rational`]) and the boolean semiring ([`Bool`]), under which a weighted
//! automaton collapses to a nondeterministic one.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};

use crate::error::{Error, Result};

/// A commutative semiring with displayable, parseable elements.
pub trait Semiring: Clone + PartialEq + Eq + fmt::Debug + fmt::Display {
    /// Name used in the `wfta <name>` file header.
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    /// Parses a weight literal as written in automaton files.
    fn parse_literal(text: &str) -> Result<Self>
    where
        Self: Sized;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

/// Arbitrary-precision rational numbers, written `2`, `-7` or `1/3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rational(BigRational);

impl Rational {
    /// The integer `n` as a rational.
    pub fn integer(n: i64) -> Rational {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The fraction `numer/denom`; errors on a zero denominator.
    pub fn new(numer: i64, denom: i64) -> Result<Rational> {
        if denom == 0 {
            return Err(Error::invalid("rational with zero denominator"));
        }
        Ok(Rational(BigRational::new(
            BigInt::from(numer),
            BigInt::from(denom),
        )))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // BigRational already prints `n` for integers and `n/d` otherwise
        write!(f, "{}", self.0)
    }
}

impl Semiring for Rational {
    const NAME: &'static str = "rational";

    fn zero() -> Self {
        Rational(BigRational::zero())
    }

    fn one() -> Self {
        Rational(BigRational::one())
    }

    fn add(&self, other: &Self) -> Self {
        Rational(&self.0 + &other.0)
    }

    fn mul(&self, other: &Self) -> Self {
        Rational(&self.0 * &other.0)
    }

    fn parse_literal(text: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("invalid rational literal {text:?}"));
        let (numer, denom) = match text.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (text, None),
        };
        let numer = BigInt::from_str(numer).map_err(|_| bad())?;
        let denom = match denom {
            Some(d) => BigInt::from_str(d).map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if denom.is_zero() {
            return Err(Error::invalid(format!(
                "invalid rational literal {text:?}: zero denominator"
            )));
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }
}

/// The boolean semiring: addition is `or`, multiplication is `and`.
/// Literals are written `0` and `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bool(pub bool);

impl fmt::Display for Bool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.0 { "1" } else { "0" })
    }
}

impl Semiring for Bool {
    const NAME: &'static str = "bool";

    fn zero() -> Self {
        Bool(false)
    }

    fn one() -> Self {
        Bool(true)
    }

    fn add(&self, other: &Self) -> Self {
        Bool(self.0 || other.0)
    }

    fn mul(&self, other: &Self) -> Self {
        Bool(self.0 && other.0)
    }

    fn parse_literal(text: &str) -> Result<Self> {
        match text {
            "0" => Ok(Bool(false)),
            "1" => Ok(Bool(true)),
            _ => Err(Error::invalid(format!(
                "invalid boolean literal {text:?}: expected 0 or 1"
            ))),
        }
    }
}

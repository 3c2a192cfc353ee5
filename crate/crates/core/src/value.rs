//! Series cells: a real number or one of the two null kinds.
//!
//! `!` (empty) means no value exists at that instant, `?` (unknown) means the
//! value is not known or undefined (padding, division by zero). Both absorb
//! real operands, and `?` absorbs `!`:
//!
//! | a    | b    | a + b |
//! |------|------|-------|
//! | `!`  | `!`  | `!`   |
//! | `!`  | `?`  | `?`   |
//! | `?`  | `?`  | `?`   |
//! | real | `!`  | `!`   |
//! | real | `?`  | `?`   |
//!
//! The same rule is used for every k-ary combination (joins, windows), so a
//! fold of pairwise additions and a single k-ary combination agree on nulls.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// Which of the three states a cell is in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Real,
    Empty,
    Unknown,
}

/// One cell of a time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value<T> {
    Real(T),
    /// `!`
    Empty,
    /// `?`
    Unknown,
}

impl<T: Scalar> Value<T> {
    /// Wrap a scalar; non-finite results become `?`.
    pub fn real(x: T) -> Self {
        if x.is_finite_scalar() {
            Value::Real(x)
        } else {
            Value::Unknown
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Value::Real(_) => Kind::Real,
            Value::Empty => Kind::Empty,
            Value::Unknown => Kind::Unknown,
        }
    }

    pub fn as_real(&self) -> Option<T> {
        match *self {
            Value::Real(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, Value::Real(_))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Value::Empty)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Value::Unknown)
    }

    /// Null produced when any of `kinds` is null: `?` beats `!`.
    /// Returns `None` when every input is real.
    pub fn merge_kinds<I: IntoIterator<Item = Kind>>(kinds: I) -> Option<Value<T>> {
        let mut out = None;
        for k in kinds {
            match k {
                Kind::Unknown => return Some(Value::Unknown),
                Kind::Empty => out = Some(Value::Empty),
                Kind::Real => {}
            }
        }
        out
    }

    /// Apply a binary function on reals, propagating nulls.
    pub fn zip_with(self, other: Self, f: impl FnOnce(T, T) -> T) -> Self {
        match (self, other) {
            (Value::Real(a), Value::Real(b)) => Value::real(f(a, b)),
            (Value::Unknown, _) | (_, Value::Unknown) => Value::Unknown,
            _ => Value::Empty,
        }
    }

    /// Apply a unary function to a real cell; nulls pass through.
    pub fn map(self, f: impl FnOnce(T) -> T) -> Self {
        match self {
            Value::Real(x) => Value::real(f(x)),
            n => n,
        }
    }

    /// Scalar multiplication, table (ii): `s*! = !`, `s*? = ?`.
    pub fn scale(self, s: T) -> Self {
        self.map(|x| s * x)
    }
}

impl<T: Scalar> Add for Value<T> {
    type Output = Value<T>;

    fn add(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<T: Scalar> Sub for Value<T> {
    type Output = Value<T>;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Scalar> Neg for Value<T> {
    type Output = Value<T>;

    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Scalar> Mul for Value<T> {
    type Output = Value<T>;

    fn mul(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a * b)
    }
}

impl<T: Scalar> From<T> for Value<T> {
    fn from(x: T) -> Self {
        Value::real(x)
    }
}

impl<T: fmt::Display> fmt::Display for Value<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(x) => write!(f, "{x}"),
            Value::Empty => f.write_str("!"),
            Value::Unknown => f.write_str("?"),
        }
    }
}

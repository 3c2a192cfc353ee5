//! Relational-style operators: selection, projection, union, intersection,
//! k-ary join and the generic window operator.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::{format_number, lit, Real};
use crate::series::TimeSeries;
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareOp {
    Gt,
    Lt,
    Ge,
    Le,
    Eq,
    Ne,
}

impl CompareOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Gt => ">",
            CompareOp::Lt => "<",
            CompareOp::Ge => ">=",
            CompareOp::Le => "<=",
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
        }
    }
}

/// Threshold comparison `value <op> threshold`, e.g. `>0` or `>1.1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Predicate {
    pub op: CompareOp,
    pub threshold: f64,
}

impl Predicate {
    pub fn new(op: CompareOp, threshold: f64) -> Result<Self> {
        if !threshold.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "predicate threshold {threshold} is not finite"
            )));
        }
        Ok(Predicate { op, threshold })
    }

    pub fn holds<T: Real>(&self, x: T) -> bool {
        let th: T = lit(self.threshold);
        match self.op {
            CompareOp::Gt => x > th,
            CompareOp::Lt => x < th,
            CompareOp::Ge => x >= th,
            CompareOp::Le => x <= th,
            CompareOp::Eq => x == th,
            CompareOp::Ne => x != th,
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.op.symbol(), format_number(self.threshold))
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (op, rest) = [
            (">=", CompareOp::Ge),
            ("<=", CompareOp::Le),
            ("!=", CompareOp::Ne),
            (">", CompareOp::Gt),
            ("<", CompareOp::Lt),
            ("=", CompareOp::Eq),
        ]
        .iter()
        .find_map(|(sym, op)| s.strip_prefix(sym).map(|rest| (*op, rest)))
        .ok_or_else(|| Error::InvalidParameter(format!("predicate {s:?}")))?;
        let threshold: f64 = rest
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("predicate threshold {rest:?}")))?;
        Predicate::new(op, threshold)
    }
}

/// Named functions of one value, used by projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapFn {
    Identity,
    Square,
    Abs,
    Exp,
}

impl MapFn {
    pub const ALL: [MapFn; 4] = [MapFn::Identity, MapFn::Square, MapFn::Abs, MapFn::Exp];

    pub fn name(self) -> &'static str {
        match self {
            MapFn::Identity => "IDENTITY",
            MapFn::Square => "SQUARE",
            MapFn::Abs => "ABS",
            MapFn::Exp => "EXP",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        MapFn::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(name))
    }

    /// Nulls map to themselves.
    pub fn apply<T: Real>(self, v: Value<T>) -> Value<T> {
        match self {
            MapFn::Identity => v,
            MapFn::Square => v.map(|x| x * x),
            MapFn::Abs => v.map(|x| x.abs()),
            MapFn::Exp => v.map(|x| x.exp()),
        }
    }
}

/// Named functions of a tuple of values, used by join and window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CombineFn {
    Sum,
    Product,
    Max,
    Min,
    Avg,
    /// Exactly two arguments; a zero denominator yields `?`.
    Divide,
}

impl CombineFn {
    pub const ALL: [CombineFn; 6] = [
        CombineFn::Sum,
        CombineFn::Product,
        CombineFn::Max,
        CombineFn::Min,
        CombineFn::Avg,
        CombineFn::Divide,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CombineFn::Sum => "SUM",
            CombineFn::Product => "PRODUCT",
            CombineFn::Max => "MAX",
            CombineFn::Min => "MIN",
            CombineFn::Avg => "AVG",
            CombineFn::Divide => "DIVIDE",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        CombineFn::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(name))
    }

    /// Required argument count, `None` for variadic functions.
    pub fn arity(self) -> Option<usize> {
        match self {
            CombineFn::Divide => Some(2),
            _ => None,
        }
    }

    /// `f(a, g(b, c)) == f(g(a, b), c)`, so a k-ary application may be split
    /// into a left-deep chain of binary ones.
    pub fn is_associative(self) -> bool {
        matches!(
            self,
            CombineFn::Sum | CombineFn::Product | CombineFn::Max | CombineFn::Min
        )
    }

    pub fn check_arity(self, k: usize) -> Result<()> {
        match self.arity() {
            Some(n) if n != k => Err(Error::ArityMismatch {
                function: self.name().to_string(),
                expected: n,
                got: k,
            }),
            _ if k == 0 => Err(Error::ArityMismatch {
                function: self.name().to_string(),
                expected: 1,
                got: 0,
            }),
            _ => Ok(()),
        }
    }

    /// Combine values in order; any `?` gives `?`, else any `!` gives `!`.
    pub fn apply<T: Real>(self, values: impl IntoIterator<Item = Value<T>> + Clone) -> Value<T> {
        if let Some(null) = Value::merge_kinds(values.clone().into_iter().map(|v| v.kind())) {
            return null;
        }
        let mut it = values.into_iter().filter_map(|v| v.as_real());
        let Some(first) = it.next() else {
            return Value::Unknown;
        };
        match self {
            CombineFn::Sum => Value::real(it.fold(first, |a, b| a + b)),
            CombineFn::Product => Value::real(it.fold(first, |a, b| a * b)),
            CombineFn::Max => Value::real(it.fold(first, |a, b| if b > a { b } else { a })),
            CombineFn::Min => Value::real(it.fold(first, |a, b| if b < a { b } else { a })),
            CombineFn::Avg => {
                let (sum, n) = it.fold((first, 1usize), |(s, n), b| (s + b, n + 1));
                Value::real(sum / lit::<T>(n as f64))
            }
            CombineFn::Divide => match it.next() {
                Some(d) if d != T::zero() => Value::real(first / d),
                _ => Value::Unknown,
            },
        }
    }
}

impl fmt::Display for CombineFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for MapFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Window length in entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WindowSpec {
    w: usize,
}

impl WindowSpec {
    pub fn new(w: usize) -> Result<Self> {
        if w == 0 {
            return Err(Error::InvalidParameter("window length must be >= 1".into()));
        }
        Ok(WindowSpec { w })
    }

    pub fn len(&self) -> usize {
        self.w
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Entry `t - lag` of `values`, reading positions before the first entry as
/// the first entry.
#[inline]
pub(crate) fn padded<T: Copy>(values: &[T], t: usize, lag: usize) -> T {
    values[t.saturating_sub(lag)]
}

/// Keep real values satisfying `pred`; failing reals become `!`, nulls stay.
pub fn sel<T: Real>(pred: &Predicate, s: &TimeSeries<T>) -> TimeSeries<T> {
    s.map_values(format!("SEL({},{})", s.name(), pred), |v| match v {
        Value::Real(x) if pred.holds(x) => v,
        Value::Real(_) => Value::Empty,
        null => null,
    })
}

pub fn proj<T: Real>(fun: MapFn, s: &TimeSeries<T>) -> TimeSeries<T> {
    s.map_values(format!("PROJ({},{})", s.name(), fun), |v| fun.apply(v))
}

/// Outer union: the non-`!` side wins; on conflict the left operand wins.
pub fn union<T: Real>(a: &TimeSeries<T>, b: &TimeSeries<T>) -> Result<TimeSeries<T>> {
    a.zip_values(b, format!("UNION({},{})", a.name(), b.name()), |x, y| {
        if x.is_empty() {
            y
        } else {
            x
        }
    })
}

/// Entries present with the same real value in both series; `!` elsewhere.
pub fn intersect<T: Real>(a: &TimeSeries<T>, b: &TimeSeries<T>) -> Result<TimeSeries<T>> {
    a.zip_values(
        b,
        format!("INTERSECT({},{})", a.name(), b.name()),
        |x, y| match (x, y) {
            (Value::Real(p), Value::Real(q)) if p == q => x,
            _ => Value::Empty,
        },
    )
}

/// Entrywise `fun` over k aligned series, in one pass.
pub fn join<T: Real>(fun: CombineFn, series: &[&TimeSeries<T>]) -> Result<TimeSeries<T>> {
    if series.len() < 2 {
        return Err(Error::ArityMismatch {
            function: "JOIN".into(),
            expected: 2,
            got: series.len(),
        });
    }
    fun.check_arity(series.len())?;
    let first = series[0];
    for s in &series[1..] {
        first.check_aligned(s)?;
    }
    let names: Vec<&str> = series.iter().map(|s| s.name()).collect();
    let values = (0..first.len())
        .map(|i| fun.apply(series.iter().map(|s| s.values()[i])))
        .collect();
    Ok(first.with_values(format!("JOIN({},{})", names.join(","), fun), values))
}

/// `result[t] = fun(s[t-w+1], ..., s[t])`, padding before the first entry
/// with the first entry.
pub fn win<T: Real>(fun: CombineFn, spec: WindowSpec, s: &TimeSeries<T>) -> Result<TimeSeries<T>> {
    if s.is_empty() {
        return Err(Error::EmptySeries);
    }
    fun.check_arity(spec.len())?;
    let w = spec.len();
    let v = s.values();
    let values = (0..v.len())
        .map(|t| fun.apply((0..w).rev().map(|lag| padded(v, t, lag))))
        .collect();
    Ok(s.with_values(format!("WIN({},{},{})", fun, w, s.name()), values))
}

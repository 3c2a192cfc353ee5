//! Centralized evaluator: the reference semantics of an expression.

use std::collections::HashMap;

use crate::algebra::{intersect, join, proj, sel, union, win, CombineFn, WindowSpec};
use crate::error::{Error, Result};
use crate::indicators::{mavg, mom, rsi, shift, xavg, XavgParams};
use crate::scalar::{lit, Real};
use crate::series::TimeSeries;
use crate::vector::{add, minus, mult, scale};

use super::{canonical_name, canonicalize, ExprNode, Op, Param, QueryInterval};

/// Base series by name.
pub type Env<T> = HashMap<String, TimeSeries<T>>;

fn bad_params(op: Op, params: &[Param]) -> Error {
    Error::Arity {
        op: op.name().to_string(),
        message: format!("invalid parameters {params:?}"),
    }
}

fn one<T>(op: Op, children: &[&TimeSeries<T>]) -> Result<usize> {
    if children.len() != 1 {
        return Err(Error::Arity {
            op: op.name().to_string(),
            message: format!("expects 1 series, got {}", children.len()),
        });
    }
    Ok(0)
}

fn two<'a, T>(op: Op, children: &[&'a TimeSeries<T>]) -> Result<(&'a TimeSeries<T>, &'a TimeSeries<T>)> {
    match children {
        [a, b] => Ok((a, b)),
        _ => Err(Error::Arity {
            op: op.name().to_string(),
            message: format!("expects 2 series, got {}", children.len()),
        }),
    }
}

/// Apply one operator to already computed child series. The result carries
/// the operator's own naming; callers rename it to the canonical name.
pub fn apply<T: Real>(op: Op, params: &[Param], children: &[&TimeSeries<T>]) -> Result<TimeSeries<T>> {
    use Param::*;
    match (op, params) {
        (Op::Plus, []) => two(op, children).and_then(|(a, b)| add(a, b)),
        (Op::Minus, []) => two(op, children).and_then(|(a, b)| minus(a, b)),
        (Op::Mult, []) => two(op, children).and_then(|(a, b)| mult(a, b)),
        (Op::Divide, []) => two(op, children).and_then(|(a, b)| join(CombineFn::Divide, &[a, b])),
        (Op::Union, []) => two(op, children).and_then(|(a, b)| union(a, b)),
        (Op::Intersect, []) => two(op, children).and_then(|(a, b)| intersect(a, b)),
        (Op::Join, [Combine(f)]) => join(*f, children),
        (Op::Scale, [Num(x)]) => Ok(scale(lit(*x), children[one(op, children)?])),
        (Op::Sel, [Pred(p)]) => Ok(sel(p, children[one(op, children)?])),
        (Op::Proj, [Map(f)]) => Ok(proj(*f, children[one(op, children)?])),
        (Op::Win, [Combine(f), Int(w)]) => win(*f, WindowSpec::new(*w)?, children[one(op, children)?]),
        (Op::Mavg, [Int(w)]) => mavg(children[one(op, children)?], *w),
        (Op::Xavg, [Int(w)]) => xavg(children[one(op, children)?], XavgParams::new(*w)?),
        (Op::Xavg, [Int(w), Num(alpha)]) => {
            xavg(children[one(op, children)?], XavgParams::with_alpha(*w, *alpha)?)
        }
        (Op::Rsi, [Int(w)]) => rsi(children[one(op, children)?], *w),
        (Op::Mom, [Int(w)]) => mom(children[one(op, children)?], *w),
        (Op::Shift, []) => Ok(shift(children[one(op, children)?])),
        _ => Err(bad_params(op, params)),
    }
}

/// Evaluate over the full extent of the base series. The result is named by
/// the canonical name of `node`.
pub fn evaluate_full<T: Real>(node: &ExprNode, env: &Env<T>) -> Result<TimeSeries<T>> {
    let mut memo = HashMap::new();
    eval_node(&canonicalize(node), env, &mut memo)
}

/// Evaluate and restrict to `interval`. Windows near the start of the
/// interval read real predecessors when the base series has them.
pub fn evaluate<T: Real>(node: &ExprNode, env: &Env<T>, interval: QueryInterval) -> Result<TimeSeries<T>> {
    let full = evaluate_full(node, env)?;
    let cal_len = full.calendar().len();
    if interval.end >= cal_len {
        return Err(Error::IntervalOutOfRange {
            start: interval.start,
            end: interval.end,
            lo: 0,
            hi: cal_len - 1,
        });
    }
    full.slice(interval)
}

fn eval_node<T: Real>(
    node: &ExprNode,
    env: &Env<T>,
    memo: &mut HashMap<String, TimeSeries<T>>,
) -> Result<TimeSeries<T>> {
    let name = node.to_string();
    if let Some(hit) = memo.get(&name) {
        return Ok(hit.clone());
    }
    let result = match node {
        ExprNode::Base(base) => env
            .get(base)
            .cloned()
            .ok_or_else(|| Error::UnknownBaseSeries(base.clone()))?
            .with_name(base.clone()),
        ExprNode::Op {
            op,
            params,
            children,
        } => {
            let inputs = children
                .iter()
                .map(|c| eval_node(c, env, memo))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&TimeSeries<T>> = inputs.iter().collect();
            apply(*op, params, &refs)?.with_name(name.clone())
        }
    };
    memo.insert(name, result.clone());
    Ok(result)
}

/// Canonical name as a convenience for callers holding only text.
pub fn canonical_text(text: &str) -> Result<String> {
    super::parse(text).map(|n| canonical_name(&n))
}

//! Functional expressions: the tree that names a derived series.
//!
//! The canonical string of an expression is both the name of the series it
//! computes and its DHT key.

mod decompose;
mod eval;
mod parse;

use std::fmt;

use crate::algebra::{CombineFn, MapFn, Predicate};
use crate::scalar::format_number;
use crate::series::Interval;

pub use decompose::{decompose, Decomposition, PlanNode};
pub use eval::{apply, canonical_text, evaluate, evaluate_full, Env};
pub use parse::parse;

/// Query time interval over calendar indices, inclusive.
pub type QueryInterval = Interval;

/// Operators known to the parser. Macros (MACD, BUY, SELL) expand into these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Plus,
    Minus,
    Mult,
    Divide,
    Union,
    Intersect,
    Join,
    Scale,
    Sel,
    Proj,
    Win,
    Mavg,
    Xavg,
    Rsi,
    Mom,
    Shift,
}

impl Op {
    pub const ALL: [Op; 16] = [
        Op::Plus,
        Op::Minus,
        Op::Mult,
        Op::Divide,
        Op::Union,
        Op::Intersect,
        Op::Join,
        Op::Scale,
        Op::Sel,
        Op::Proj,
        Op::Win,
        Op::Mavg,
        Op::Xavg,
        Op::Rsi,
        Op::Mom,
        Op::Shift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Op::Plus => "PLUS",
            Op::Minus => "MINUS",
            Op::Mult => "MULT",
            Op::Divide => "DIVIDE",
            Op::Union => "UNION",
            Op::Intersect => "INTERSECT",
            Op::Join => "JOIN",
            Op::Scale => "SCALE",
            Op::Sel => "SEL",
            Op::Proj => "PROJ",
            Op::Win => "WIN",
            Op::Mavg => "MAVG",
            Op::Xavg => "XAVG",
            Op::Rsi => "RSI",
            Op::Mom => "MOM",
            Op::Shift => "SHIFT",
        }
    }

    /// Case-insensitive lookup.
    pub fn from_name(name: &str) -> Option<Op> {
        Op::ALL.into_iter().find(|op| op.name().eq_ignore_ascii_case(name))
    }

    /// Operators over a single series.
    pub fn is_unary(self) -> bool {
        !matches!(
            self,
            Op::Plus | Op::Minus | Op::Mult | Op::Divide | Op::Union | Op::Intersect | Op::Join
        )
    }

    /// Children are sorted in canonical form.
    pub fn is_commutative(self) -> bool {
        matches!(self, Op::Plus | Op::Mult)
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Non-series argument of an operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    Int(usize),
    Num(f64),
    Pred(Predicate),
    Map(MapFn),
    Combine(CombineFn),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Int(n) => write!(f, "{n}"),
            Param::Num(x) => f.write_str(&format_number(*x)),
            Param::Pred(p) => write!(f, "{p}"),
            Param::Map(m) => f.write_str(m.name()),
            Param::Combine(c) => f.write_str(c.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    Base(String),
    Op {
        op: Op,
        params: Vec<Param>,
        children: Vec<ExprNode>,
    },
}

impl ExprNode {
    pub fn base(name: impl Into<String>) -> Self {
        ExprNode::Base(name.into())
    }

    pub fn op(op: Op, params: Vec<Param>, children: Vec<ExprNode>) -> Self {
        ExprNode::Op {
            op,
            params,
            children,
        }
    }

    pub fn children(&self) -> &[ExprNode] {
        match self {
            ExprNode::Base(_) => &[],
            ExprNode::Op { children, .. } => children,
        }
    }

    pub fn operator(&self) -> Option<Op> {
        match self {
            ExprNode::Base(_) => None,
            ExprNode::Op { op, .. } => Some(*op),
        }
    }

    /// A base series or a unary chain ending in one.
    pub fn is_atomic(&self) -> bool {
        match self {
            ExprNode::Base(_) => true,
            ExprNode::Op { op, children, .. } => op.is_unary() && children[0].is_atomic(),
        }
    }

    /// Number of earlier entries this node reads beyond its children's
    /// current entry.
    pub fn lookback(&self) -> usize {
        let ExprNode::Op { op, params, .. } = self else {
            return 0;
        };
        let window = params.iter().find_map(|p| match p {
            Param::Int(w) => Some(*w),
            _ => None,
        });
        match (op, window) {
            (Op::Mavg | Op::Xavg | Op::Win, Some(w)) => w.saturating_sub(1),
            (Op::Rsi | Op::Mom, Some(w)) => w,
            (Op::Shift, _) => 1,
            _ => 0,
        }
    }

    /// Lookback accumulated along the deepest path to a base series.
    pub fn total_lookback(&self) -> usize {
        self.lookback()
            + self
                .children()
                .iter()
                .map(ExprNode::total_lookback)
                .max()
                .unwrap_or(0)
    }

    /// Names of the base series this expression reads, sorted and unique.
    pub fn base_names(&self) -> Vec<String> {
        fn walk(node: &ExprNode, out: &mut Vec<String>) {
            match node {
                ExprNode::Base(name) => out.push(name.clone()),
                ExprNode::Op { children, .. } => children.iter().for_each(|c| walk(c, out)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(ExprNode::node_count).sum::<usize>()
    }
}

/// Children of PLUS and MULT sorted by their serialization, recursively.
pub fn canonicalize(node: &ExprNode) -> ExprNode {
    match node {
        ExprNode::Base(_) => node.clone(),
        ExprNode::Op {
            op,
            params,
            children,
        } => {
            let mut children: Vec<ExprNode> = children.iter().map(canonicalize).collect();
            if op.is_commutative() {
                children.sort_by_cached_key(ExprNode::to_string);
            }
            ExprNode::op(*op, params.clone(), children)
        }
    }
}

pub fn canonical_name(node: &ExprNode) -> String {
    canonicalize(node).to_string()
}

impl fmt::Display for ExprNode {
    /// Serialization without reordering; see [`canonical_name`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprNode::Base(name) => f.write_str(name),
            ExprNode::Op {
                op: Op::Win,
                params,
                children,
            } => {
                write!(f, "WIN(")?;
                for p in params {
                    write!(f, "{p},")?;
                }
                write!(f, "{})", children[0])
            }
            ExprNode::Op {
                op,
                params,
                children,
            } => {
                write!(f, "{op}(")?;
                let args = children
                    .iter()
                    .map(ToString::to_string)
                    .chain(params.iter().map(ToString::to_string));
                for (i, arg) in args.enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    f.write_str(&arg)?;
                }
                f.write_str(")")
            }
        }
    }
}

//! Split a query into atomic sub-queries (unary chains over one base series)
//! and the plan of multi-series operators above them.

use super::{canonicalize, ExprNode, Op, Param};

#[derive(Debug, Clone, PartialEq)]
pub enum PlanNode {
    /// Index into [`Decomposition::atomics`].
    Atomic(usize),
    Op {
        op: Op,
        params: Vec<Param>,
        children: Vec<PlanNode>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// Distinct atomic sub-queries in first-seen order.
    pub atomics: Vec<ExprNode>,
    pub plan: PlanNode,
}

impl Decomposition {
    /// The plan with every hole replaced by its atomic sub-query.
    pub fn plan_expr(&self) -> ExprNode {
        fn rebuild(node: &PlanNode, atomics: &[ExprNode]) -> ExprNode {
            match node {
                PlanNode::Atomic(i) => atomics[*i].clone(),
                PlanNode::Op {
                    op,
                    params,
                    children,
                } => ExprNode::op(
                    *op,
                    params.clone(),
                    children.iter().map(|c| rebuild(c, atomics)).collect(),
                ),
            }
        }
        rebuild(&self.plan, &self.atomics)
    }

    /// Number of operator nodes left for the client.
    pub fn plan_ops(&self) -> usize {
        fn count(node: &PlanNode) -> usize {
            match node {
                PlanNode::Atomic(_) => 0,
                PlanNode::Op { children, .. } => 1 + children.iter().map(count).sum::<usize>(),
            }
        }
        count(&self.plan)
    }
}

/// Canonicalizes `node`, then splits it. N-ary joins with an associative
/// combine function become left-deep chains of binary joins; AVG joins stay
/// n-ary since averaging does not compose pairwise.
pub fn decompose(node: &ExprNode) -> Decomposition {
    let mut atomics = Vec::new();
    let plan = split(&canonicalize(node), &mut atomics);
    Decomposition { atomics, plan }
}

fn split(node: &ExprNode, atomics: &mut Vec<ExprNode>) -> PlanNode {
    if node.is_atomic() {
        let name = node.to_string();
        let index = atomics
            .iter()
            .position(|a| a.to_string() == name)
            .unwrap_or_else(|| {
                atomics.push(node.clone());
                atomics.len() - 1
            });
        return PlanNode::Atomic(index);
    }
    let ExprNode::Op {
        op,
        params,
        children,
    } = node
    else {
        unreachable!("base series are atomic");
    };
    let mut parts: Vec<PlanNode> = children.iter().map(|c| split(c, atomics)).collect();
    if let (Op::Join, [Param::Combine(fun)]) = (op, params.as_slice()) {
        if parts.len() > 2 && fun.is_associative() {
            let mut rest = parts.drain(..);
            let first = rest.next().expect("join has children");
            return rest.fold(first, |acc, next| PlanNode::Op {
                op: Op::Join,
                params: params.clone(),
                children: vec![acc, next],
            });
        }
    }
    PlanNode::Op {
        op: *op,
        params: params.clone(),
        children: parts,
    }
}

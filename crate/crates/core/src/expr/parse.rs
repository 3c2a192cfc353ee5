//! Recursive-descent parser for functional expressions.

use crate::algebra::{CombineFn, CompareOp, MapFn, Predicate};
use crate::error::{Error, Result};
use crate::indicators::XavgParams;

use super::{ExprNode, Op, Param};

/// Parse an expression such as `JOIN(MAVG(CAC40,10),SCALE(RSI(CAC40,14),100),SUM)`.
///
/// Operator names are case-insensitive. `MACD(S,short,long)`, `BUY(S)` and
/// `SELL(S)` are expanded into their defining expressions.
pub fn parse(text: &str) -> Result<ExprNode> {
    let mut p = Parser { src: text, pos: 0 };
    p.skip_ws();
    let node = match p.arg()? {
        Arg::Expr(node) => node,
        Arg::Ident(name, _) => ExprNode::Base(name),
        other => return Err(syntax(other.pos(), "expected a series expression")),
    };
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(syntax(p.pos, "trailing input"));
    }
    Ok(node)
}

fn syntax(pos: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        message: message.into(),
    }
}

enum Arg {
    Expr(ExprNode),
    Ident(String, usize),
    Number { value: f64, integer: bool, pos: usize },
    Pred(Predicate),
}

impl Arg {
    fn pos(&self) -> usize {
        match self {
            Arg::Ident(_, pos) | Arg::Number { pos, .. } => *pos,
            _ => 0,
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += self.peek().map_or(0, char::len_utf8);
        }
    }

    fn take_while(&mut self, mut keep: impl FnMut(char, &str) -> bool) -> &str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !keep(c, &self.src[start..self.pos]) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax(self.pos, format!("expected {c:?}")))
        }
    }

    fn number_text(&mut self) -> &str {
        self.take_while(|c, seen| {
            c.is_ascii_digit()
                || c == '.'
                || matches!(c, 'e' | 'E') && !seen.is_empty()
                || matches!(c, '+' | '-') && (seen.is_empty() || seen.ends_with(['e', 'E']))
        })
    }

    fn arg(&mut self) -> Result<Arg> {
        self.skip_ws();
        let pos = self.pos;
        match self.peek() {
            None => Err(syntax(pos, "unexpected end of input")),
            Some('<' | '>' | '=' | '!') => {
                let op = self.take_while(|c, _| matches!(c, '<' | '>' | '=' | '!')).to_string();
                self.skip_ws();
                let num = self.number_text().to_string();
                format!("{op}{num}")
                    .parse::<Predicate>()
                    .map(Arg::Pred)
                    .map_err(|_| syntax(pos, format!("bad predicate {op}{num:?}")))
            }
            Some(c) if c.is_ascii_digit() || matches!(c, '-' | '+' | '.') => {
                let text = self.number_text();
                let value: f64 = text
                    .parse()
                    .map_err(|_| syntax(pos, format!("bad number {text:?}")))?;
                let integer = text.trim_start_matches('+').bytes().all(|b| b.is_ascii_digit());
                Ok(Arg::Number {
                    value,
                    integer,
                    pos,
                })
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self
                    .take_while(|c, _| c.is_alphanumeric() || matches!(c, '_' | '.' | '$'))
                    .to_string();
                self.skip_ws();
                if self.peek() != Some('(') {
                    return Ok(Arg::Ident(name, pos));
                }
                self.pos += 1;
                let args = self.args()?;
                build(&name, pos, args).map(Arg::Expr)
            }
            Some(c) => Err(syntax(pos, format!("unexpected character {c:?}"))),
        }
    }

    fn args(&mut self) -> Result<Vec<Arg>> {
        let mut args = Vec::new();
        self.skip_ws();
        if self.peek() == Some(')') {
            self.pos += 1;
            return Ok(args);
        }
        loop {
            args.push(self.arg()?);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    return Ok(args);
                }
                _ => return self.expect(')').map(|_| args),
            }
        }
    }
}

struct Builder<'a> {
    op: &'a str,
    args: std::vec::IntoIter<Arg>,
    index: usize,
}

impl Builder<'_> {
    fn arity(&self, message: impl Into<String>) -> Error {
        Error::Arity {
            op: self.op.to_string(),
            message: message.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<Arg> {
        self.index += 1;
        let index = self.index;
        self.args
            .next()
            .ok_or_else(|| self.arity(format!("missing argument {index} ({what})")))
    }

    fn wrong(&self, what: &str) -> Error {
        self.arity(format!("argument {} must be {what}", self.index))
    }

    fn series(&mut self) -> Result<ExprNode> {
        match self.next("series")? {
            Arg::Expr(node) => Ok(node),
            Arg::Ident(name, _) => Ok(ExprNode::Base(name)),
            _ => Err(self.wrong("a series")),
        }
    }

    fn int(&mut self) -> Result<usize> {
        match self.next("window")? {
            Arg::Number {
                value,
                integer: true,
                ..
            } if value >= 1.0 && value <= usize::MAX as f64 => Ok(value as usize),
            _ => Err(self.wrong("a positive integer")),
        }
    }

    fn num(&mut self) -> Result<f64> {
        match self.next("number")? {
            Arg::Number { value, .. } if value.is_finite() => Ok(value),
            _ => Err(self.wrong("a finite number")),
        }
    }

    fn pred(&mut self) -> Result<Predicate> {
        match self.next("predicate")? {
            Arg::Pred(p) => Ok(p),
            _ => Err(self.wrong("a predicate such as >0")),
        }
    }

    fn map_fn(&mut self) -> Result<MapFn> {
        match self.next("function")? {
            Arg::Ident(name, _) => MapFn::from_name(&name)
                .ok_or_else(|| self.arity(format!("unknown map function {name}"))),
            _ => Err(self.wrong("a map function name")),
        }
    }

    fn combine(&mut self) -> Result<CombineFn> {
        match self.next("function")? {
            Arg::Ident(name, _) => CombineFn::from_name(&name)
                .ok_or_else(|| self.arity(format!("unknown combine function {name}"))),
            _ => Err(self.wrong("a combine function name")),
        }
    }

    fn rest_len(&self) -> usize {
        self.args.len()
    }

    fn done(self) -> Result<()> {
        let extra = self.args.len();
        if extra > 0 {
            return Err(self.arity(format!("{extra} unexpected extra argument(s)")));
        }
        Ok(())
    }
}

fn node(op: Op, params: Vec<Param>, children: Vec<ExprNode>) -> ExprNode {
    ExprNode::op(op, params, children)
}

fn mavg(s: ExprNode, w: usize) -> ExprNode {
    node(Op::Mavg, vec![Param::Int(w)], vec![s])
}

fn build(name: &str, pos: usize, args: Vec<Arg>) -> Result<ExprNode> {
    let upper = name.to_ascii_uppercase();
    let mut b = Builder {
        op: &upper,
        args: args.into_iter(),
        index: 0,
    };
    let built = match upper.as_str() {
        "MACD" => {
            let s = b.series()?;
            let (short, long) = (b.int()?, b.int()?);
            if short >= long {
                return Err(b.arity(format!("needs short < long, got {short} and {long}")));
            }
            node(Op::Minus, vec![], vec![mavg(s.clone(), short), mavg(s, long)])
        }
        "BUY" => {
            let s = b.series()?;
            let macd = node(Op::Minus, vec![], vec![mavg(s.clone(), 12), mavg(s, 26)]);
            let gt0 = Predicate::new(CompareOp::Gt, 0.0)?;
            node(Op::Sel, vec![Param::Pred(gt0)], vec![mavg(macd, 9)])
        }
        "SELL" => {
            let s = b.series()?;
            let ratio = node(Op::Divide, vec![], vec![mavg(s.clone(), 26), mavg(s, 12)]);
            let gt = Predicate::new(CompareOp::Gt, 1.1)?;
            node(Op::Sel, vec![Param::Pred(gt)], vec![ratio])
        }
        _ => {
            let op = Op::from_name(&upper).ok_or_else(|| Error::UnknownOperator {
                name: name.to_string(),
                pos,
            })?;
            build_op(op, &mut b)?
        }
    };
    b.done()?;
    Ok(built)
}

fn build_op(op: Op, b: &mut Builder<'_>) -> Result<ExprNode> {
    Ok(match op {
        Op::Plus | Op::Minus | Op::Mult | Op::Divide | Op::Union | Op::Intersect => {
            let children = vec![b.series()?, b.series()?];
            node(op, vec![], children)
        }
        Op::Join => {
            let k = b.rest_len().saturating_sub(1);
            if k < 2 {
                return Err(b.arity("needs at least two series and a combine function"));
            }
            let children = (0..k).map(|_| b.series()).collect::<Result<Vec<_>>>()?;
            let fun = b.combine()?;
            fun.check_arity(k)
                .map_err(|e| b.arity(e.to_string()))?;
            node(op, vec![Param::Combine(fun)], children)
        }
        Op::Scale => {
            let s = b.series()?;
            node(op, vec![Param::Num(b.num()?)], vec![s])
        }
        Op::Sel => {
            let s = b.series()?;
            node(op, vec![Param::Pred(b.pred()?)], vec![s])
        }
        Op::Proj => {
            let s = b.series()?;
            node(op, vec![Param::Map(b.map_fn()?)], vec![s])
        }
        Op::Win => {
            let fun = b.combine()?;
            let w = b.int()?;
            fun.check_arity(w).map_err(|e| b.arity(e.to_string()))?;
            let s = b.series()?;
            node(op, vec![Param::Combine(fun), Param::Int(w)], vec![s])
        }
        Op::Mavg | Op::Rsi | Op::Mom => {
            let s = b.series()?;
            node(op, vec![Param::Int(b.int()?)], vec![s])
        }
        Op::Xavg => {
            let s = b.series()?;
            let w = b.int()?;
            let mut params = vec![Param::Int(w)];
            if b.rest_len() > 0 {
                let alpha = b.num()?;
                let xp = XavgParams::with_alpha(w, alpha).map_err(|e| b.arity(e.to_string()))?;
                if !xp.default_alpha() {
                    params.push(Param::Num(alpha));
                }
            }
            node(op, params, vec![s])
        }
        Op::Shift => node(op, vec![], vec![b.series()?]),
    })
}

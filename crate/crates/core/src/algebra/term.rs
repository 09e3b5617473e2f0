use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Name of the unique nullary operation.
pub const ZERO: &str = "0";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

/// Operation symbols with arities. Exactly one symbol is nullary and it is
/// named `"0"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    ops: Vec<OpSymbol>,
    zero: usize,
}

impl Signature {
    pub fn new<S: Into<String>>(ops: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let ops: Vec<OpSymbol> = ops
            .into_iter()
            .map(|(name, arity)| OpSymbol {
                name: name.into(),
                arity,
            })
            .collect();
        for (i, op) in ops.iter().enumerate() {
            if op.name.is_empty() {
                return Err(Error::InvalidSignature("empty operation name".into()));
            }
            if ops[..i].iter().any(|o| o.name == op.name) {
                return Err(Error::InvalidSignature(format!(
                    "duplicate operation `{}`",
                    op.name
                )));
            }
        }
        let nullary: Vec<usize> = (0..ops.len()).filter(|&i| ops[i].arity == 0).collect();
        match nullary.as_slice() {
            [z] if ops[*z].name == ZERO => Ok(Signature { ops, zero: *z }),
            [z] => Err(Error::InvalidSignature(format!(
                "the nullary operation must be named `0`, found `{}`",
                ops[*z].name
            ))),
            _ => Err(Error::InvalidSignature(format!(
                "expected exactly one nullary operation, found {}",
                nullary.len()
            ))),
        }
    }

    pub fn ops(&self) -> &[OpSymbol] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Index of the constant `0`.
    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn arity(&self, op: usize) -> usize {
        self.ops[op].arity
    }

    pub fn name(&self, op: usize) -> &str {
        &self.ops[op].name
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }
}

/// A term over a signature: a variable or an operation applied to sub-terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    App(usize, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Self {
        Term::Var(i)
    }

    pub fn app(op: usize, args: Vec<Term>) -> Self {
        Term::App(op, args)
    }

    /// Number of variables, i.e. one more than the largest variable index.
    pub fn var_count(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::App(_, args) => args.iter().map(Term::var_count).max().unwrap_or(0),
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            Term::Var(i) => {
                if !out.contains(i) {
                    out.push(*i);
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Checks operation indices and arities against `sig`.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(op, args) => {
                if *op >= sig.len() {
                    return Err(Error::InvalidPresentation(format!(
                        "operation index {op} out of range"
                    )));
                }
                if sig.arity(*op) != args.len() {
                    return Err(Error::ArityMismatch {
                        op: sig.name(*op).to_owned(),
                        expected: sig.arity(*op),
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    /// Renders the term with variables named by `var_name`.
    pub fn display<'a>(
        &'a self,
        sig: &'a Signature,
        var_name: &'a dyn Fn(usize) -> String,
    ) -> TermDisplay<'a> {
        TermDisplay {
            term: self,
            sig,
            var_name,
        }
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
    var_name: &'a dyn Fn(usize) -> String,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(i) => f.write_str(&(self.var_name)(*i)),
            Term::App(op, args) => {
                f.write_str(self.sig.name(*op))?;
                if args.is_empty() {
                    return Ok(());
                }
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", a.display(self.sig, self.var_name))?;
                }
                f.write_str(")")
            }
        }
    }
}

/// How identifiers that are not operation symbols map to variable indices.
pub enum VarScope<'a> {
    /// Variables are numbered in order of first appearance; the vector keeps
    /// the names seen so far and may be shared between both sides of an
    /// equation.
    Open(&'a mut Vec<String>),
    /// Only the listed names are variables, with their list position as index.
    Fixed(&'a [&'a str]),
}

impl VarScope<'_> {
    fn resolve(&mut self, name: &str) -> Result<usize> {
        match self {
            VarScope::Open(seen) => Ok(match seen.iter().position(|s| s == name) {
                Some(i) => i,
                None => {
                    seen.push(name.to_owned());
                    seen.len() - 1
                }
            }),
            VarScope::Fixed(names) => names
                .iter()
                .position(|s| *s == name)
                .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`"))),
        }
    }
}

/// Parses `op(arg, ...)` syntax. Nullary operations are written bare (`0`);
/// every other identifier is a variable.
pub fn parse_term(sig: &Signature, src: &str, vars: &mut VarScope<'_>) -> Result<Term> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let t = p.term(sig, vars)?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Parse(format!(
            "trailing input at byte {} in `{src}`",
            p.pos
        )));
    }
    Ok(t)
}

/// Parses `lhs = rhs`, numbering variables by first appearance across both
/// sides.
pub fn parse_equation(sig: &Signature, src: &str) -> Result<(Term, Term)> {
    let (l, r) = src
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("equation `{src}` has no `=`")))?;
    let mut seen = Vec::new();
    let lhs = parse_term(sig, l, &mut VarScope::Open(&mut seen))?;
    let rhs = parse_term(sig, r, &mut VarScope::Open(&mut seen))?;
    Ok((lhs, rhs))
}

struct Parser<'s> {
    src: &'s [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected identifier at byte {start}")));
        }
        // Identifiers are ASCII by construction.
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.pos < self.src.len() && self.src[self.pos] == c {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn term(&mut self, sig: &Signature, vars: &mut VarScope<'_>) -> Result<Term> {
        let name = self.ident()?;
        if let Some(op) = sig.op_index(&name) {
            let mut args = Vec::new();
            if sig.arity(op) > 0 {
                if !self.eat(b'(') {
                    return Err(Error::Parse(format!("expected `(` after `{name}`")));
                }
                loop {
                    args.push(self.term(sig, vars)?);
                    if self.eat(b')') {
                        break;
                    }
                    if !self.eat(b',') {
                        return Err(Error::Parse(format!(
                            "expected `,` or `)` at byte {}",
                            self.pos
                        )));
                    }
                }
            }
            if args.len() != sig.arity(op) {
                return Err(Error::ArityMismatch {
                    op: name,
                    expected: sig.arity(op),
                    found: args.len(),
                });
            }
            Ok(Term::App(op, args))
        } else {
            Ok(Term::Var(vars.resolve(&name)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group_sig() -> Signature {
        Signature::new([("0", 0), ("mul", 2), ("inv", 1)]).unwrap()
    }

    #[test]
    fn signature_requires_single_zero() {
        assert!(Signature::new([("mul", 2)]).is_err());
        assert!(Signature::new([("0", 0), ("e", 0)]).is_err());
        assert!(Signature::new([("e", 0)]).is_err());
        assert!(Signature::new([("0", 0), ("f", 1), ("f", 2)]).is_err());
        assert_eq!(group_sig().zero(), 0);
    }

    #[test]
    fn parses_nested_terms() {
        let sig = group_sig();
        let (l, r) = parse_equation(&sig, "mul(x, inv(x)) = 0").unwrap();
        assert_eq!(
            l,
            Term::App(1, alloc::vec![Term::Var(0), Term::App(2, alloc::vec![Term::Var(0)])])
        );
        assert_eq!(r, Term::App(0, alloc::vec![]));
        assert!(parse_equation(&sig, "mul(x) = x").is_err());
        assert!(parse_equation(&sig, "mul(x, y").is_err());
    }

    #[test]
    fn fixed_scope_rejects_unknown_names() {
        let sig = group_sig();
        let t = parse_term(&sig, "mul(z, t)", &mut VarScope::Fixed(&["z", "t"])).unwrap();
        assert_eq!(t.var_count(), 2);
        assert!(parse_term(&sig, "mul(z, w)", &mut VarScope::Fixed(&["z", "t"])).is_err());
    }
}

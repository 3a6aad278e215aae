//! Hazard expression language.
//!
//! Expressions are written over the main timescale `{t}`, the state entry
//! time `{t0}`, covariate names, numeric literals, the operators
//! `+ - * / ^` (each optionally in colon form, `:*` and so on) and the
//! functions `log`, `exp`, `sqrt` and `abs`.
//!
//! ```
//! use hazsim_core::expr::{bind, parse};
//!
//! let ast = parse("0.1:*1.2:*{t}:^(1.2:-1)").unwrap();
//! let compiled = bind(&ast, &[] as &[&str]).unwrap();
//! let h = compiled.evaluate(&[1.0], 0.0, &[]).unwrap();
//! assert!((h[0] - 0.12).abs() < 1e-15);
//! ```

mod eval;
mod lexer;
mod parser;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use eval::{bind, CompiledExpr};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

/// The closed set of callable functions. `log` is the natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    Log,
    Exp,
    Sqrt,
    Abs,
}

impl Function {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "log" => Some(Function::Log),
            "exp" => Some(Function::Exp),
            "sqrt" => Some(Function::Sqrt),
            "abs" => Some(Function::Abs),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Function::Log => "log",
            Function::Exp => "exp",
            Function::Sqrt => "sqrt",
            Function::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Constant(f64),
    TimeT,
    TimeT0,
    Covariate(String),
    Neg(Box<ExprAst>),
    Binary(BinaryOp, Box<ExprAst>, Box<ExprAst>),
    Call(Function, Box<ExprAst>),
}

impl ExprAst {
    /// True if `{t0}` appears anywhere in the tree.
    pub fn uses_t0(&self) -> bool {
        match self {
            ExprAst::TimeT0 => true,
            ExprAst::Constant(_) | ExprAst::TimeT | ExprAst::Covariate(_) => false,
            ExprAst::Neg(e) | ExprAst::Call(_, e) => e.uses_t0(),
            ExprAst::Binary(_, l, r) => l.uses_t0() || r.uses_t0(),
        }
    }

    /// True if `{t}` appears anywhere in the tree.
    pub fn uses_t(&self) -> bool {
        match self {
            ExprAst::TimeT => true,
            ExprAst::Constant(_) | ExprAst::TimeT0 | ExprAst::Covariate(_) => false,
            ExprAst::Neg(e) | ExprAst::Call(_, e) => e.uses_t(),
            ExprAst::Binary(_, l, r) => l.uses_t() || r.uses_t(),
        }
    }

    /// Covariate names in first-occurrence order, without duplicates.
    pub fn covariates(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_covariates(&mut out);
        out
    }

    fn collect_covariates<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ExprAst::Covariate(name) => {
                if !out.contains(&name.as_str()) {
                    out.push(name);
                }
            }
            ExprAst::Constant(_) | ExprAst::TimeT | ExprAst::TimeT0 => {}
            ExprAst::Neg(e) | ExprAst::Call(_, e) => e.collect_covariates(out),
            ExprAst::Binary(_, l, r) => {
                l.collect_covariates(out);
                r.collect_covariates(out);
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            ExprAst::Constant(_) | ExprAst::TimeT | ExprAst::TimeT0 | ExprAst::Covariate(_) => 1,
            ExprAst::Neg(e) | ExprAst::Call(_, e) => 1 + e.size(),
            ExprAst::Binary(_, l, r) => 1 + l.size() + r.size(),
        }
    }
}

/// Rewrite every `{t}` as `({t}-{t0})`, putting the expression on a
/// time-since-entry clock.
pub fn substitute_reset(ast: &ExprAst) -> ExprAst {
    match ast {
        ExprAst::TimeT => ExprAst::Binary(
            BinaryOp::Sub,
            Box::new(ExprAst::TimeT),
            Box::new(ExprAst::TimeT0),
        ),
        ExprAst::Constant(_) | ExprAst::TimeT0 | ExprAst::Covariate(_) => ast.clone(),
        ExprAst::Neg(e) => ExprAst::Neg(Box::new(substitute_reset(e))),
        ExprAst::Call(f, e) => ExprAst::Call(*f, Box::new(substitute_reset(e))),
        ExprAst::Binary(op, l, r) => ExprAst::Binary(
            *op,
            Box::new(substitute_reset(l)),
            Box::new(substitute_reset(r)),
        ),
    }
}

/// Prints a fully parenthesised form that parses back to the same tree.
impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprAst::Constant(v) => write!(f, "{v}"),
            ExprAst::TimeT => f.write_str("{t}"),
            ExprAst::TimeT0 => f.write_str("{t0}"),
            ExprAst::Covariate(name) => f.write_str(name),
            ExprAst::Neg(e) => write!(f, "(-{e})"),
            ExprAst::Binary(op, l, r) => write!(f, "({l}{}{r})", op.symbol()),
            ExprAst::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprError {
    EmptySource,
    UnexpectedChar { ch: char, offset: usize },
    UnterminatedBrace { offset: usize },
    InvalidTimeVariable { content: String, offset: usize },
    InvalidNumber { lexeme: String, offset: usize },
    Syntax { message: String, offset: usize },
    UnknownFunction { name: String, offset: usize },
    TrailingTokens { offset: usize },
    UnknownCovariate { name: String },
    RowTooShort { needed: usize, got: usize },
    /// A function or operator was applied outside its domain at time `t`.
    Domain { operation: &'static str, t: f64 },
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::EmptySource => f.write_str("empty expression"),
            ExprError::UnexpectedChar { ch, offset } => {
                write!(f, "unexpected character '{ch}' at offset {offset}")
            }
            ExprError::UnterminatedBrace { offset } => {
                write!(f, "unterminated '{{' at offset {offset}")
            }
            ExprError::InvalidTimeVariable { content, offset } => write!(
                f,
                "unknown time variable '{{{content}}}' at offset {offset} (expected {{t}} or {{t0}})"
            ),
            ExprError::InvalidNumber { lexeme, offset } => {
                write!(f, "invalid number '{lexeme}' at offset {offset}")
            }
            ExprError::Syntax { message, offset } => {
                write!(f, "syntax error at offset {offset}: {message}")
            }
            ExprError::UnknownFunction { name, offset } => write!(
                f,
                "unknown function '{name}' at offset {offset} (allowed: log, exp, sqrt, abs)"
            ),
            ExprError::TrailingTokens { offset } => {
                write!(f, "unexpected trailing input at offset {offset}")
            }
            ExprError::UnknownCovariate { name } => write!(f, "{name} not found"),
            ExprError::RowTooShort { needed, got } => write!(
                f,
                "covariate row has {got} values but the expression needs column {needed}"
            ),
            ExprError::Domain { operation, t } => {
                write!(f, "{operation} outside its domain at t = {t}")
            }
        }
    }
}

impl core::error::Error for ExprError {}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn reset_substitution_examples() {
        let log_t = parse("log({t})").unwrap();
        assert_eq!(substitute_reset(&log_t), parse("log({t}-{t0})").unwrap());

        let t0 = parse("{t0}").unwrap();
        assert_eq!(substitute_reset(&t0), t0);

        let pow = parse("0.1:*{t}:^1.5").unwrap();
        assert_eq!(
            substitute_reset(&pow),
            parse("0.1:*({t}-{t0}):^1.5").unwrap()
        );
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "-1:+0.02:*{t}:-0.03:*{t}:^2:+0.005:*{t}:^3",
            "exp(-2 :+ 0.2:* log({t}) :+ 0.1:*{t})",
            "(-{t})^2",
            "0.1 :* {t} :^ 1.5 :* exp(-0.05 :* ({t}:-{t0}))",
            "--trt/age",
        ] {
            let ast = parse(src).unwrap();
            assert_eq!(parse(&ast.to_string()).unwrap(), ast, "{src}");
        }
    }

    #[test]
    fn tree_queries() {
        let ast = parse("trt*{t} + age*trt + {t0}").unwrap();
        assert!(ast.uses_t0());
        assert!(ast.uses_t());
        assert_eq!(ast.covariates(), vec!["trt", "age"]);
        assert_eq!(parse("2").unwrap().size(), 1);
    }
}

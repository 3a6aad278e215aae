use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::lexer::{tokenize, Token, TokenKind};
use super::{BinaryOp, ExprAst, ExprError, Function};

/// Parse a hazard expression.
///
/// Precedence from loosest to tightest: `+ -`, `* /`, unary minus, `^`.
/// `^` is right-associative, the others left-associative.
pub fn parse(source: &str) -> Result<ExprAst, ExprError> {
    let tokens = tokenize(source)?;
    let end = source.chars().count();
    let mut parser = Parser {
        tokens,
        pos: 0,
        end,
    };
    let ast = parser.additive()?;
    if let Some(tok) = parser.peek() {
        return Err(ExprError::TrailingTokens {
            offset: tok.position,
        });
    }
    Ok(ast)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |t| t.position)
    }

    fn peek_operator(&self) -> Option<char> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Operator => t.lexeme.chars().next(),
            _ => None,
        }
    }

    fn syntax(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            message: message.to_string(),
            offset: self.offset(),
        }
    }

    fn additive(&mut self) -> Result<ExprAst, ExprError> {
        let mut lhs = self.multiplicative()?;
        while let Some(op @ ('+' | '-')) = self.peek_operator() {
            self.pos += 1;
            let rhs = self.multiplicative()?;
            let op = if op == '+' { BinaryOp::Add } else { BinaryOp::Sub };
            lhs = ExprAst::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn multiplicative(&mut self) -> Result<ExprAst, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_operator() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if op == '*' { BinaryOp::Mul } else { BinaryOp::Div };
            lhs = ExprAst::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ExprAst, ExprError> {
        if self.peek_operator() == Some('-') {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(ExprAst::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAst, ExprError> {
        let base = self.primary()?;
        if self.peek_operator() == Some('^') {
            self.pos += 1;
            // The exponent may itself carry a unary minus: 2^-1.
            let exponent = self.unary()?;
            return Ok(ExprAst::Binary(
                BinaryOp::Pow,
                Box::new(base),
                Box::new(exponent),
            ));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<ExprAst, ExprError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.syntax("unexpected end of expression"));
        };
        match tok.kind {
            TokenKind::Number => {
                self.pos += 1;
                let value: f64 = tok.lexeme.parse().map_err(|_| ExprError::InvalidNumber {
                    lexeme: tok.lexeme.clone(),
                    offset: tok.position,
                })?;
                Ok(ExprAst::Constant(value))
            }
            TokenKind::TimeT => {
                self.pos += 1;
                Ok(ExprAst::TimeT)
            }
            TokenKind::TimeT0 => {
                self.pos += 1;
                Ok(ExprAst::TimeT0)
            }
            TokenKind::Identifier => {
                self.pos += 1;
                if matches!(self.peek(), Some(t) if t.kind == TokenKind::LParen) {
                    let func = Function::from_name(&tok.lexeme).ok_or_else(|| {
                        ExprError::UnknownFunction {
                            name: tok.lexeme.clone(),
                            offset: tok.position,
                        }
                    })?;
                    self.pos += 1;
                    let arg = self.additive()?;
                    self.expect_rparen()?;
                    Ok(ExprAst::Call(func, Box::new(arg)))
                } else {
                    Ok(ExprAst::Covariate(tok.lexeme))
                }
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.additive()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            TokenKind::RParen | TokenKind::Comma | TokenKind::Operator => {
                Err(self.syntax(&unexpected(&tok.lexeme)))
            }
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::RParen => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => {
                let msg = alloc::format!("expected ')', found '{}'", t.lexeme);
                Err(self.syntax(&msg))
            }
            None => Err(self.syntax("expected ')' before end of expression")),
        }
    }
}

fn unexpected(lexeme: &str) -> String {
    alloc::format!("unexpected '{lexeme}'")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ExprAst::*;

    fn c(v: f64) -> Box<ExprAst> {
        Box::new(Constant(v))
    }

    fn bin(op: BinaryOp, l: ExprAst, r: ExprAst) -> ExprAst {
        Binary(op, Box::new(l), Box::new(r))
    }

    #[test]
    fn weibull_equivalent_user_hazard() {
        let ast = parse("0.1:*1.2:*{t}:^(1.2:-1)").unwrap();
        let expected = bin(
            BinaryOp::Mul,
            Binary(BinaryOp::Mul, c(0.1), c(1.2)),
            bin(BinaryOp::Pow, TimeT, Binary(BinaryOp::Sub, c(1.2), c(1.0))),
        );
        assert_eq!(ast, expected);
    }

    #[test]
    fn leading_negation_binds_to_constant() {
        let ast = parse("-1:+0.02:*{t}").unwrap();
        let expected = bin(
            BinaryOp::Add,
            Neg(c(1.0)),
            Binary(BinaryOp::Mul, c(0.02), Box::new(TimeT)),
        );
        assert_eq!(ast, expected);
    }

    #[test]
    fn identity() {
        assert_eq!(parse("{t}").unwrap(), TimeT);
    }

    #[test]
    fn power_is_right_associative_and_beats_negation() {
        assert_eq!(
            parse("2^3^2").unwrap(),
            bin(BinaryOp::Pow, Constant(2.0), Binary(BinaryOp::Pow, c(3.0), c(2.0)))
        );
        assert_eq!(
            parse("-{t}^2").unwrap(),
            Neg(Box::new(Binary(BinaryOp::Pow, Box::new(TimeT), c(2.0))))
        );
        assert_eq!(
            parse("2^-1").unwrap(),
            bin(BinaryOp::Pow, Constant(2.0), Neg(c(1.0)))
        );
    }

    #[test]
    fn left_associative_arithmetic() {
        assert_eq!(
            parse("8/4/2").unwrap(),
            bin(BinaryOp::Div, Binary(BinaryOp::Div, c(8.0), c(4.0)), Constant(2.0))
        );
        assert_eq!(
            parse("1-2-3").unwrap(),
            bin(BinaryOp::Sub, Binary(BinaryOp::Sub, c(1.0), c(2.0)), Constant(3.0))
        );
    }

    #[test]
    fn unary_minus_binds_tighter_than_product() {
        assert_eq!(
            parse("-2*{t}").unwrap(),
            bin(BinaryOp::Mul, Neg(c(2.0)), TimeT)
        );
    }

    #[test]
    fn calls_and_covariates() {
        assert_eq!(
            parse("exp(trt)").unwrap(),
            Call(Function::Exp, Box::new(Covariate("trt".into())))
        );
        assert_eq!(
            parse("abs(sqrt({t0}))").unwrap(),
            Call(
                Function::Abs,
                Box::new(Call(Function::Sqrt, Box::new(TimeT0)))
            )
        );
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse("foo({t})"),
            Err(ExprError::UnknownFunction {
                name: "foo".into(),
                offset: 0
            })
        );
        assert_eq!(parse("1 2"), Err(ExprError::TrailingTokens { offset: 2 }));
        assert!(matches!(
            parse("(1+2"),
            Err(ExprError::Syntax { offset: 4, .. })
        ));
        assert!(matches!(parse("1+"), Err(ExprError::Syntax { offset: 2, .. })));
        assert!(matches!(parse("*2"), Err(ExprError::Syntax { offset: 0, .. })));
        assert!(matches!(
            parse("log(1,2)"),
            Err(ExprError::Syntax { offset: 5, .. })
        ));
    }
}

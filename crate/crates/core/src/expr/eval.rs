use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{BinaryOp, ExprAst, ExprError, Function};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Instr {
    Const(f64),
    T,
    T0,
    Column(usize),
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Log,
    Exp,
    Sqrt,
    Abs,
}

/// An expression bound to a covariate schema, lowered to a postfix program.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledExpr {
    ast: ExprAst,
    bindings: BTreeMap<String, usize>,
    uses_t0: bool,
    program: Vec<Instr>,
    stack_depth: usize,
    min_row_len: usize,
}

/// Resolve covariate names against `schema` (column names of the covariate
/// table, in order).
pub fn bind<S: AsRef<str>>(ast: &ExprAst, schema: &[S]) -> Result<CompiledExpr, ExprError> {
    let mut bindings = BTreeMap::new();
    for name in ast.covariates() {
        let index = schema
            .iter()
            .position(|s| s.as_ref() == name)
            .ok_or_else(|| ExprError::UnknownCovariate {
                name: name.to_string(),
            })?;
        bindings.insert(name.to_string(), index);
    }

    let mut program = Vec::with_capacity(ast.size());
    lower(ast, &bindings, &mut program);
    let stack_depth = max_depth(&program);
    let min_row_len = bindings.values().map(|&i| i + 1).max().unwrap_or(0);

    Ok(CompiledExpr {
        ast: ast.clone(),
        uses_t0: ast.uses_t0(),
        bindings,
        program,
        stack_depth,
        min_row_len,
    })
}

fn lower(ast: &ExprAst, bindings: &BTreeMap<String, usize>, out: &mut Vec<Instr>) {
    match ast {
        ExprAst::Constant(v) => out.push(Instr::Const(*v)),
        ExprAst::TimeT => out.push(Instr::T),
        ExprAst::TimeT0 => out.push(Instr::T0),
        ExprAst::Covariate(name) => out.push(Instr::Column(bindings[name])),
        ExprAst::Neg(e) => {
            lower(e, bindings, out);
            out.push(Instr::Neg);
        }
        ExprAst::Call(func, e) => {
            lower(e, bindings, out);
            out.push(match func {
                Function::Log => Instr::Log,
                Function::Exp => Instr::Exp,
                Function::Sqrt => Instr::Sqrt,
                Function::Abs => Instr::Abs,
            });
        }
        ExprAst::Binary(op, l, r) => {
            lower(l, bindings, out);
            lower(r, bindings, out);
            out.push(match op {
                BinaryOp::Add => Instr::Add,
                BinaryOp::Sub => Instr::Sub,
                BinaryOp::Mul => Instr::Mul,
                BinaryOp::Div => Instr::Div,
                BinaryOp::Pow => Instr::Pow,
            });
        }
    }
}

fn max_depth(program: &[Instr]) -> usize {
    let mut depth = 0usize;
    let mut max = 0usize;
    for instr in program {
        match instr {
            Instr::Const(_) | Instr::T | Instr::T0 | Instr::Column(_) => depth += 1,
            Instr::Add | Instr::Sub | Instr::Mul | Instr::Div | Instr::Pow => depth -= 1,
            _ => {}
        }
        max = max.max(depth);
    }
    max
}

impl CompiledExpr {
    pub fn ast(&self) -> &ExprAst {
        &self.ast
    }

    pub fn bindings(&self) -> &BTreeMap<String, usize> {
        &self.bindings
    }

    pub fn uses_t0(&self) -> bool {
        self.uses_t0
    }

    /// True if the expression depends on `{t}`.
    pub fn uses_t(&self) -> bool {
        self.program.contains(&Instr::T)
    }

    /// Evaluate element-wise over `t`; `{t0}` is the scalar `t0` broadcast
    /// across the vector.
    pub fn evaluate(&self, t: &[f64], t0: f64, row: &[f64]) -> Result<Vec<f64>, ExprError> {
        let mut out = vec![0.0; t.len()];
        self.evaluate_into(t, t0, row, &mut out)?;
        Ok(out)
    }

    /// As [`CompiledExpr::evaluate`], writing into `out` (same length as `t`).
    pub fn evaluate_into(
        &self,
        t: &[f64],
        t0: f64,
        row: &[f64],
        out: &mut [f64],
    ) -> Result<(), ExprError> {
        assert_eq!(t.len(), out.len(), "output buffer length mismatch");
        self.check_row(row)?;
        let mut stack = vec![0.0; self.stack_depth];
        for (slot, &ti) in out.iter_mut().zip(t) {
            *slot = self.run(&mut stack, ti, t0, row)?;
        }
        Ok(())
    }

    /// Evaluate at a single time point.
    pub fn eval_at(&self, t: f64, t0: f64, row: &[f64]) -> Result<f64, ExprError> {
        self.check_row(row)?;
        let mut stack = vec![0.0; self.stack_depth];
        self.run(&mut stack, t, t0, row)
    }

    fn check_row(&self, row: &[f64]) -> Result<(), ExprError> {
        if row.len() < self.min_row_len {
            return Err(ExprError::RowTooShort {
                needed: self.min_row_len - 1,
                got: row.len(),
            });
        }
        Ok(())
    }

    fn run(&self, stack: &mut [f64], t: f64, t0: f64, row: &[f64]) -> Result<f64, ExprError> {
        let mut sp = 0usize;
        for instr in &self.program {
            match *instr {
                Instr::Const(v) => {
                    stack[sp] = v;
                    sp += 1;
                }
                Instr::T => {
                    stack[sp] = t;
                    sp += 1;
                }
                Instr::T0 => {
                    stack[sp] = t0;
                    sp += 1;
                }
                Instr::Column(i) => {
                    stack[sp] = row[i];
                    sp += 1;
                }
                Instr::Neg => stack[sp - 1] = -stack[sp - 1],
                Instr::Abs => stack[sp - 1] = stack[sp - 1].abs(),
                Instr::Exp => stack[sp - 1] = math::exp(stack[sp - 1]),
                Instr::Log => {
                    let x = stack[sp - 1];
                    if x < 0.0 {
                        return Err(ExprError::Domain { operation: "log", t });
                    }
                    // log(0) = -inf is allowed; exp() of it is a zero hazard.
                    stack[sp - 1] = math::ln(x);
                }
                Instr::Sqrt => {
                    let x = stack[sp - 1];
                    if x < 0.0 {
                        return Err(ExprError::Domain { operation: "sqrt", t });
                    }
                    stack[sp - 1] = math::sqrt(x);
                }
                Instr::Add | Instr::Sub | Instr::Mul | Instr::Div | Instr::Pow => {
                    let r = stack[sp - 1];
                    let l = stack[sp - 2];
                    sp -= 1;
                    stack[sp - 1] = match *instr {
                        Instr::Add => l + r,
                        Instr::Sub => l - r,
                        Instr::Mul => l * r,
                        Instr::Div => {
                            if r == 0.0 {
                                return Err(ExprError::Domain {
                                    operation: "division by zero",
                                    t,
                                });
                            }
                            l / r
                        }
                        _ => {
                            let v = math::powf(l, r);
                            if v.is_nan() && !l.is_nan() && !r.is_nan() {
                                return Err(ExprError::Domain { operation: "power", t });
                            }
                            v
                        }
                    };
                }
            }
        }
        debug_assert_eq!(sp, 1);
        Ok(stack[0])
    }
}

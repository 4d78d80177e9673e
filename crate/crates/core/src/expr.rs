//! Real-valued expression trees over the variables `x1..xn`.

use std::fmt;
use std::ops;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Abs,
    Sin,
    Cos,
    Sqrt,
    Exp,
    Log,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Abs => "abs",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "abs" => Func::Abs,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "log" => Func::Log,
            _ => return None,
        })
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Abs => v.abs(),
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Sqrt => v.sqrt(),
            Func::Exp => v.exp(),
            Func::Log => v.ln(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Min,
    Max,
}

impl BinOp {
    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
            BinOp::Div => a / b,
            BinOp::Pow => pow(a, b),
            BinOp::Min => a.min(b),
            BinOp::Max => a.max(b),
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
            BinOp::Min | BinOp::Max => 5,
        }
    }
}

fn pow(a: f64, b: f64) -> f64 {
    if b == 2.0 {
        a * a
    } else if b.fract() == 0.0 && b.abs() <= i32::MAX as f64 {
        a.powi(b as i32)
    } else {
        a.powf(b)
    }
}

/// Expression node. Variables are zero-based internally and print as `x1..xn`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// `a · x` with a constant coefficient vector.
    Dot(Vec<f64>),
    /// `xᵀ Q x` with a constant square matrix, row-major.
    Quad { n: usize, q: Vec<f64> },
}

impl Expr {
    pub fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    /// Variable `x{i+1}`.
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn quad(rows: &[Vec<f64>]) -> Expr {
        let n = rows.len();
        let q = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Expr::Quad { n, q }
    }

    pub fn call(self, f: Func) -> Expr {
        Expr::Call(f, Box::new(self))
    }

    pub fn abs(self) -> Expr {
        self.call(Func::Abs)
    }

    pub fn sin(self) -> Expr {
        self.call(Func::Sin)
    }

    pub fn cos(self) -> Expr {
        self.call(Func::Cos)
    }

    pub fn sqrt(self) -> Expr {
        self.call(Func::Sqrt)
    }

    pub fn exp(self) -> Expr {
        self.call(Func::Exp)
    }

    pub fn ln(self) -> Expr {
        self.call(Func::Log)
    }

    pub fn pow(self, e: Expr) -> Expr {
        Expr::Binary(BinOp::Pow, Box::new(self), Box::new(e))
    }

    pub fn min(self, other: Expr) -> Expr {
        Expr::Binary(BinOp::Min, Box::new(self), Box::new(other))
    }

    pub fn max(self, other: Expr) -> Expr {
        Expr::Binary(BinOp::Max, Box::new(self), Box::new(other))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Const(v) => *v,
            Expr::Var(i) => x[*i],
            Expr::Neg(a) => -a.eval(x),
            Expr::Call(f, a) => f.apply(a.eval(x)),
            Expr::Binary(op, a, b) => op.apply(a.eval(x), b.eval(x)),
            Expr::Dot(a) => a.iter().zip(x).map(|(a, x)| a * x).sum(),
            Expr::Quad { n, q } => {
                let mut acc = 0.0;
                for i in 0..*n {
                    let row = &q[i * n..(i + 1) * n];
                    let qx: f64 = row.iter().zip(x).map(|(q, x)| q * x).sum();
                    acc += x[i] * qx;
                }
                acc
            }
        }
    }

    /// Largest variable count the expression needs (`max index + 1`).
    pub fn arity(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Neg(a) | Expr::Call(_, a) => a.arity(),
            Expr::Binary(_, a, b) => a.arity().max(b.arity()),
            Expr::Dot(a) => a.len(),
            Expr::Quad { n, .. } => *n,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Const(v) if *v < 0.0 => 3,
            _ => 5,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

fn fmt_list(f: &mut fmt::Formatter<'_>, v: &[f64]) -> fmt::Result {
    f.write_str("[")?;
    for (i, a) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a:?}")?;
    }
    f.write_str("]")
}

/// Renders in the `.ivf` expression syntax; the output parses back to an
/// equal tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(v) => write!(f, "{v:?}"),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.fmt_child(f, 4)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Binary(BinOp::Min, a, b) => write!(f, "min({a}, {b})"),
            Expr::Binary(BinOp::Max, a, b) => write!(f, "max({a}, {b})"),
            Expr::Binary(op, a, b) => {
                let p = op.precedence();
                let sym = match op {
                    BinOp::Add => " + ",
                    BinOp::Sub => " - ",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    _ => "^",
                };
                if *op == BinOp::Pow {
                    // right-associative
                    a.fmt_child(f, p + 1)?;
                    f.write_str(sym)?;
                    b.fmt_child(f, p)
                } else {
                    a.fmt_child(f, p)?;
                    f.write_str(sym)?;
                    b.fmt_child(f, p + 1)
                }
            }
            Expr::Dot(a) => {
                f.write_str("dot(")?;
                fmt_list(f, a)?;
                f.write_str(")")
            }
            Expr::Quad { n, q } => {
                f.write_str("quad([")?;
                for i in 0..*n {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    fmt_list(f, &q[i * n..(i + 1) * n])?;
                }
                f.write_str("])")
            }
        }
    }
}

macro_rules! bin_op {
    ($trait:ident, $method:ident, $op:expr) => {
        impl ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::Binary($op, Box::new(self), Box::new(rhs))
            }
        }
        impl ops::$trait<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr::Binary($op, Box::new(self), Box::new(Expr::Const(rhs)))
            }
        }
        impl ops::$trait<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::Binary($op, Box::new(Expr::Const(self)), Box::new(rhs))
            }
        }
    };
}

bin_op!(Add, add, BinOp::Add);
bin_op!(Sub, sub, BinOp::Sub);
bin_op!(Mul, mul, BinOp::Mul);
bin_op!(Div, div, BinOp::Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

/// Comparison operator for piecewise predicates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
        }
    }

    fn test(self, a: f64, b: f64) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
        }
    }
}

/// `expr <op> constant`.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub lhs: Expr,
    pub op: CmpOp,
    pub rhs: f64,
}

/// Conjunction of comparisons; the empty conjunction is true.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Predicate {
    pub terms: Vec<Comparison>,
}

impl Predicate {
    pub fn new(terms: Vec<Comparison>) -> Predicate {
        Predicate { terms }
    }

    pub fn cmp(lhs: Expr, op: CmpOp, rhs: f64) -> Predicate {
        Predicate {
            terms: vec![Comparison { lhs, op, rhs }],
        }
    }

    pub fn and(mut self, other: Predicate) -> Predicate {
        self.terms.extend(other.terms);
        self
    }

    pub fn test(&self, x: &[f64]) -> bool {
        self.terms.iter().all(|c| c.op.test(c.lhs.eval(x), c.rhs))
    }

    pub fn arity(&self) -> usize {
        self.terms.iter().map(|c| c.lhs.arity()).max().unwrap_or(0)
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" && ")?;
            }
            write!(f, "{} {} {:?}", c.lhs, c.op.symbol(), c.rhs)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_basic_forms() {
        let x = [3.0, 4.0];
        let e = Expr::var(0).pow(Expr::c(2.0)) * (1.0 + 1.0 / Expr::var(1));
        assert_eq!(e.eval(&x), 9.0 * 1.25);
        let q = Expr::quad(&[vec![1.0, 0.0], vec![0.0, 1.0]]).sqrt();
        assert_eq!(q.eval(&x), 5.0);
        assert_eq!(Expr::Dot(vec![1.0, -2.0]).eval(&x), -5.0);
        assert_eq!((-Expr::var(1)).abs().eval(&x), 4.0);
        assert_eq!(Expr::var(0).min(Expr::var(1)).eval(&x), 3.0);
        assert!(Expr::var(0).ln().eval(&[-1.0]).is_nan());
    }

    #[test]
    fn arity_counts_highest_variable() {
        assert_eq!(Expr::c(1.0).arity(), 0);
        assert_eq!((Expr::var(0) + Expr::var(2)).arity(), 3);
        assert_eq!(Expr::quad(&[vec![2.0, 1.0], vec![1.0, 3.0]]).arity(), 2);
    }

    #[test]
    fn display_respects_precedence() {
        let e = (Expr::var(0) + Expr::c(1.0)) * Expr::var(1);
        assert_eq!(e.to_string(), "(x1 + 1.0)*x2");
        let e = Expr::var(0) - (Expr::var(1) - Expr::c(2.0));
        assert_eq!(e.to_string(), "x1 - (x2 - 2.0)");
        let e = -(Expr::var(0).pow(Expr::c(2.0)));
        assert_eq!(e.to_string(), "-x1^2.0");
        let e = Expr::var(0).pow(Expr::var(1).pow(Expr::c(2.0)));
        assert_eq!(e.to_string(), "x1^x2^2.0");
        let e = Expr::var(0).pow(Expr::var(1)).pow(Expr::c(2.0));
        assert_eq!(e.to_string(), "(x1^x2)^2.0");
    }

    #[test]
    fn predicate_conjunction() {
        let p = Predicate::cmp(Expr::var(0), CmpOp::Eq, 0.0)
            .and(Predicate::cmp(Expr::var(1), CmpOp::Eq, 0.0));
        assert!(p.test(&[0.0, 0.0]));
        assert!(!p.test(&[0.0, 1e-300]));
        assert!(Predicate::default().test(&[1.0]));
        assert_eq!(p.to_string(), "x1 == 0.0 && x2 == 0.0");
    }
}

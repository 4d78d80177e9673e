//! Parser for the `.ivf` text format.
//!
//! ```text
//! ivf {
//!     dom: [-2,2] x [0,2];
//!     where: x2 >= 0;
//!     scale: x1^2 * (1 + 1/x2);
//!     c: [3,8];
//!     branch: x2 == 0 -> { scale: 0; c: [3,8] };
//! }
//! ```
//!
//! Clauses may appear in any order; `lower`/`upper` and `scale`/`c` are the
//! two ways to give the default form. `#` starts a comment.

use crate::expr::{BinOp, CmpOp, Comparison, Expr, Func, Predicate};
use crate::interval::Interval;
use crate::ivf::{Branch, DomainBox, Form, Ivf, IvfError};

pub fn parse_ivf(text: &str) -> Result<Ivf, IvfError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let ivf = p.ivf()?;
    p.expect_end()?;
    Ok(ivf)
}

/// Parses a bare expression such as `2*sqrt(x1)`.
pub fn parse_expr(text: &str) -> Result<Expr, IvfError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

/// Parses a predicate such as `x1 >= 0 && x2 < 1`.
pub fn parse_predicate(text: &str) -> Result<Predicate, IvfError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let pred = p.predicate()?;
    p.expect_end()?;
    Ok(pred)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(&'static str),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 22] = [
    "&&", "->", "<=", ">=", "==", "!=", "{", "}", "[", "]", "(", ")", ";", ":", ",", "+", "-", "*",
    "/", "^", "<", ">",
];

fn lex(text: &str) -> Result<Vec<Token>, IvfError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v: f64 = s.parse().map_err(|_| IvfError::Syntax {
                line,
                col: start_col,
                msg: format!("malformed number `{s}`"),
            })?;
            col += i - start;
            out.push(Token { tok: Tok::Num(v), line, col: start_col });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            let s: String = chars[start..i].iter().collect();
            out.push(Token { tok: Tok::Ident(s), line, col: start_col });
            continue;
        }
        if c == '×' {
            i += 1;
            col += 1;
            out.push(Token { tok: Tok::Ident("x".into()), line, col: start_col });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
            return Err(IvfError::Syntax {
                line,
                col,
                msg: format!("unexpected character `{c}`"),
            });
        };
        i += sym.len();
        col += sym.len();
        out.push(Token { tok: Tok::Sym(sym), line, col: start_col });
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }


    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, msg: impl Into<String>) -> IvfError {
        let t = &self.tokens[self.pos];
        IvfError::Syntax {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        }
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::End => "end of input".into(),
        }
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(s) if *s == sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), IvfError> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.error_here(format!(
                "expected `{sym}`, found {}",
                Self::describe(self.peek())
            )))
        }
    }

    fn expect_ident(&mut self, word: &str) -> Result<(), IvfError> {
        match self.peek() {
            Tok::Ident(s) if s == word => {
                self.bump();
                Ok(())
            }
            other => Err(self.error_here(format!(
                "expected `{word}`, found {}",
                Self::describe(other)
            ))),
        }
    }

    fn expect_end(&mut self) -> Result<(), IvfError> {
        match self.peek() {
            Tok::End => Ok(()),
            other => Err(self.error_here(format!("unexpected {}", Self::describe(other)))),
        }
    }

    fn ivf(&mut self) -> Result<Ivf, IvfError> {
        self.expect_ident("ivf")?;
        self.expect("{")?;
        let open = self.pos;
        let mut domain = None;
        let mut constraint = None;
        let mut branches = Vec::new();
        let mut fields = FormFields::default();
        loop {
            if self.eat("}") {
                break;
            }
            if self.eat(";") {
                continue;
            }
            let key_at = self.pos;
            let key = match self.bump().tok {
                Tok::Ident(s) => s,
                other => {
                    self.pos = key_at;
                    return Err(self.error_here(format!(
                        "expected a clause name, found {}",
                        Self::describe(&other)
                    )));
                }
            };
            self.expect(":")?;
            match key.as_str() {
                "dom" => {
                    if domain.is_some() {
                        self.pos = key_at;
                        return Err(self.error_here("duplicate `dom` clause"));
                    }
                    domain = Some(self.domain()?);
                }
                "where" => {
                    if constraint.is_some() {
                        self.pos = key_at;
                        return Err(self.error_here("duplicate `where` clause"));
                    }
                    constraint = Some(self.predicate()?);
                }
                "branch" => {
                    let when = self.predicate()?;
                    self.expect("->")?;
                    self.expect("{")?;
                    let start = self.pos;
                    let mut inner = FormFields::default();
                    loop {
                        if self.eat("}") {
                            break;
                        }
                        if self.eat(";") {
                            continue;
                        }
                        self.form_field(&mut inner)?;
                    }
                    let form = inner.finish(self, start)?;
                    branches.push(Branch { when, form });
                }
                _ => {
                    self.pos = key_at;
                    self.form_field(&mut fields)?;
                }
            }
            if !matches!(self.peek(), Tok::Sym("}")) {
                self.expect(";")?;
            }
        }
        let Some(domain) = domain else {
            self.pos = open;
            return Err(self.error_here("missing `dom` clause"));
        };
        let default = fields.finish(self, open)?;
        Ivf::new(domain, constraint, branches, default)
    }

    fn form_field(&mut self, fields: &mut FormFields) -> Result<(), IvfError> {
        let key_at = self.pos;
        let key = match self.bump().tok {
            Tok::Ident(s) => s,
            other => {
                self.pos = key_at;
                return Err(self.error_here(format!(
                    "expected a clause name, found {}",
                    Self::describe(&other)
                )));
            }
        };
        self.expect(":")?;
        let slot_taken = match key.as_str() {
            "lower" => fields.lower.replace(self.expr()?).is_some(),
            "upper" => fields.upper.replace(self.expr()?).is_some(),
            "scale" => fields.scale.replace(self.expr()?).is_some(),
            "c" => fields.c.replace(self.interval()?).is_some(),
            _ => {
                self.pos = key_at;
                return Err(self.error_here(format!("unknown clause `{key}`")));
            }
        };
        if slot_taken {
            self.pos = key_at;
            return Err(self.error_here(format!("duplicate `{key}` clause")));
        }
        Ok(())
    }

    fn domain(&mut self) -> Result<DomainBox, IvfError> {
        let start = self.pos;
        let mut bounds = Vec::new();
        loop {
            let (lo, hi) = self.pair()?;
            bounds.push((lo, hi));
            let sep = matches!(self.peek(), Tok::Ident(s) if s == "x") || matches!(self.peek(), Tok::Sym("*"));
            if !sep {
                break;
            }
            self.bump();
        }
        DomainBox::new(bounds).map_err(|e| {
            self.pos = start;
            self.error_here(e.to_string())
        })
    }

    fn interval(&mut self) -> Result<Interval, IvfError> {
        let start = self.pos;
        let (lo, hi) = self.pair()?;
        Interval::new(lo, hi).map_err(|e| {
            self.pos = start;
            self.error_here(e.to_string())
        })
    }

    fn pair(&mut self) -> Result<(f64, f64), IvfError> {
        self.expect("[")?;
        let lo = self.number()?;
        self.expect(",")?;
        let hi = self.number()?;
        self.expect("]")?;
        Ok((lo, hi))
    }

    /// A constant expression, evaluated on the spot.
    fn number(&mut self) -> Result<f64, IvfError> {
        let start = self.pos;
        let e = self.expr()?;
        if e.arity() > 0 {
            self.pos = start;
            return Err(self.error_here("expected a constant"));
        }
        let v = e.eval(&[]);
        if !v.is_finite() {
            self.pos = start;
            return Err(self.error_here("constant is not finite"));
        }
        Ok(v)
    }

    fn predicate(&mut self) -> Result<Predicate, IvfError> {
        let mut terms = vec![self.comparison()?];
        loop {
            let and_word = matches!(self.peek(), Tok::Ident(s) if s == "and");
            if self.eat("&&") || and_word {
                if and_word {
                    self.bump();
                }
                terms.push(self.comparison()?);
            } else {
                return Ok(Predicate::new(terms));
            }
        }
    }

    fn comparison(&mut self) -> Result<Comparison, IvfError> {
        let lhs = self.expr()?;
        let op = match self.peek() {
            Tok::Sym("<") => CmpOp::Lt,
            Tok::Sym("<=") => CmpOp::Le,
            Tok::Sym(">") => CmpOp::Gt,
            Tok::Sym(">=") => CmpOp::Ge,
            Tok::Sym("==") => CmpOp::Eq,
            Tok::Sym("!=") => CmpOp::Ne,
            other => {
                return Err(self.error_here(format!(
                    "expected a comparison operator, found {}",
                    Self::describe(other)
                )))
            }
        };
        self.bump();
        let rhs_at = self.pos;
        let rhs = self.expr()?;
        if rhs.arity() > 0 {
            // move a variable right-hand side over: lhs - rhs op 0
            return Ok(Comparison {
                lhs: lhs - rhs,
                op,
                rhs: 0.0,
            });
        }
        let v = rhs.eval(&[]);
        if !v.is_finite() {
            self.pos = rhs_at;
            return Err(self.error_here("constant is not finite"));
        }
        Ok(Comparison { lhs, op, rhs: v })
    }

    fn expr(&mut self) -> Result<Expr, IvfError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat("+") {
                lhs = lhs + self.term()?;
            } else if self.eat("-") {
                lhs = lhs - self.term()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, IvfError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat("*") {
                lhs = lhs * self.unary()?;
            } else if self.eat("/") {
                lhs = lhs / self.unary()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, IvfError> {
        if self.eat("-") {
            return Ok(match self.unary()? {
                Expr::Const(v) => Expr::Const(-v),
                e => -e,
            });
        }
        if self.eat("+") {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, IvfError> {
        let base = self.atom()?;
        if self.eat("^") {
            // right-associative; the exponent may carry its own sign
            let exp = self.unary()?;
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, IvfError> {
        let t = self.bump();
        match t.tok.clone() {
            Tok::Num(v) => Ok(Expr::Const(v)),
            Tok::Sym("(") => {
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if matches!(self.peek(), Tok::Sym("(")) {
                    return self.call(&name, &t);
                }
                if name == "pi" {
                    return Ok(Expr::Const(std::f64::consts::PI));
                }
                if let Some(idx) = name.strip_prefix('x').filter(|s| !s.is_empty()) {
                    if let Ok(i) = idx.parse::<usize>() {
                        if i >= 1 && !idx.starts_with('0') {
                            return Ok(Expr::var(i - 1));
                        }
                    }
                }
                Err(IvfError::Syntax {
                    line: t.line,
                    col: t.col,
                    msg: format!("unknown variable `{name}`"),
                })
            }
            other => Err(IvfError::Syntax {
                line: t.line,
                col: t.col,
                msg: format!("unexpected {}", Self::describe(&other)),
            }),
        }
    }

    fn call(&mut self, name: &str, at: &Token) -> Result<Expr, IvfError> {
        let arity_error = |expected: &str, found: usize| IvfError::Arity {
            line: at.line,
            col: at.col,
            name: name.to_string(),
            expected: expected.to_string(),
            found,
        };
        self.expect("(")?;
        match name {
            "dot" => {
                let v = self.vector()?;
                self.expect(")")?;
                Ok(Expr::Dot(v))
            }
            "quad" => {
                let rows_at = self.pos;
                self.expect("[")?;
                let mut rows = vec![self.vector()?];
                while self.eat(",") {
                    rows.push(self.vector()?);
                }
                self.expect("]")?;
                self.expect(")")?;
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    self.pos = rows_at;
                    return Err(self.error_here("quad matrix must be square"));
                }
                Ok(Expr::quad(&rows))
            }
            _ => {
                let mut args = Vec::new();
                if !self.eat(")") {
                    args.push(self.expr()?);
                    while self.eat(",") {
                        args.push(self.expr()?);
                    }
                    self.expect(")")?;
                }
                if let Some(func) = Func::from_name(name) {
                    if args.len() != 1 {
                        return Err(arity_error("1", args.len()));
                    }
                    return Ok(args.pop().unwrap().call(func));
                }
                match name {
                    "pow" => {
                        if args.len() != 2 {
                            return Err(arity_error("2", args.len()));
                        }
                        let e = args.pop().unwrap();
                        Ok(args.pop().unwrap().pow(e))
                    }
                    "min" | "max" => {
                        if args.len() < 2 {
                            return Err(arity_error("at least 2", args.len()));
                        }
                        let op = if name == "min" { BinOp::Min } else { BinOp::Max };
                        let mut it = args.into_iter();
                        let first = it.next().unwrap();
                        Ok(it.fold(first, |acc, e| {
                            Expr::Binary(op, Box::new(acc), Box::new(e))
                        }))
                    }
                    _ => Err(IvfError::Syntax {
                        line: at.line,
                        col: at.col,
                        msg: format!("unknown function `{name}`"),
                    }),
                }
            }
        }
    }

    fn vector(&mut self) -> Result<Vec<f64>, IvfError> {
        self.expect("[")?;
        let mut v = vec![self.number()?];
        while self.eat(",") {
            v.push(self.number()?);
        }
        self.expect("]")?;
        Ok(v)
    }
}

#[derive(Default)]
struct FormFields {
    lower: Option<Expr>,
    upper: Option<Expr>,
    scale: Option<Expr>,
    c: Option<Interval>,
}

impl FormFields {
    fn finish(self, p: &mut Parser, at: usize) -> Result<Form, IvfError> {
        let fail = |p: &mut Parser, msg: &str| {
            p.pos = at;
            Err(p.error_here(msg))
        };
        match self {
            FormFields {
                lower: Some(lower),
                upper: Some(upper),
                scale: None,
                c: None,
            } => Ok(Form::Bounds { lower, upper }),
            FormFields {
                lower: None,
                upper: None,
                scale: Some(scale),
                c: Some(c),
            } => Ok(Form::Scale { scale, c }),
            FormFields {
                scale: None,
                c: Some(_),
                ..
            } => fail(p, "`c` needs a `scale` clause"),
            FormFields {
                scale: Some(_),
                c: None,
                ..
            } => fail(p, "`scale` needs a `c` clause"),
            FormFields {
                scale: Some(_),
                c: Some(_),
                ..
            } => fail(p, "give either `lower`/`upper` or `scale`/`c`, not both"),
            _ => fail(p, "expected `lower` and `upper`, or `scale` and `c`"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivf::IntervalFn;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn abs_scale_form() {
        let f = parse_ivf("ivf { dom: [-10,10]; scale: abs(x1); c: [2,5] }").unwrap();
        assert_eq!(f.eval(&[-2.0]).unwrap(), iv(4.0, 10.0));
        let form = f.default_form();
        assert_eq!(form.lower_fn().eval(&[3.0]), 6.0);
        assert_eq!(form.upper_fn().eval(&[3.0]), 15.0);
    }

    #[test]
    fn sqrt_bounds_form() {
        let f = parse_ivf("ivf { dom: [0,10]; lower: 2*sqrt(x1); upper: 5*sqrt(x1) }").unwrap();
        assert_eq!(f.eval(&[4.0]).unwrap(), iv(4.0, 10.0));
    }

    #[test]
    fn validation_error_has_witness() {
        let err = parse_ivf("ivf { dom: [-1,1]; lower: x1; upper: x1 - 1 }").unwrap_err();
        let IvfError::Validation { point, lower, upper } = err else {
            panic!("expected validation error, got {err:?}");
        };
        assert!((-1.0..=1.0).contains(&point[0]));
        assert_eq!(lower, point[0]);
        assert_eq!(upper, point[0] - 1.0);
    }

    #[test]
    fn piecewise_and_constraint() {
        let src = "
            # sin^2(x)/x away from the origin, 5 C at it
            ivf {
                dom: [-1,1];
                scale: sin(x1)^2 / x1;
                c: [1,2];
                branch: x1 == 0 -> { scale: 5; c: [1,2] };
            }";
        let f = parse_ivf(src).unwrap();
        assert_eq!(f.eval(&[0.0]).unwrap(), iv(5.0, 10.0));

        let src = "ivf { dom: [-1,1] x [0,1]; where: x2 >= 0; scale: x1^2*(1 + 1/x2); c: [3,8];
                   branch: x2 == 0 -> { lower: 0; upper: 0 } }";
        let f = parse_ivf(src).unwrap();
        assert_eq!(f.eval(&[1.0, 1.0]).unwrap(), iv(6.0, 16.0));
        assert_eq!(f.eval(&[0.5, 0.0]).unwrap(), Interval::ZERO);
        assert_eq!(f.dims(), 2);
    }

    #[test]
    fn vector_forms() {
        let f = parse_ivf("ivf { dom: [-5,5] x [-5,5]; scale: sqrt(quad([[1,0],[0,1]])); c: [1,2] }")
            .unwrap();
        assert_eq!(f.eval(&[3.0, 4.0]).unwrap(), iv(5.0, 10.0));
        let e = parse_expr("dot([1, -2]) + max(x1, x2, 0)").unwrap();
        assert_eq!(e.eval(&[3.0, 1.0]), 1.0 + 3.0);
    }

    #[test]
    fn precedence_and_signs() {
        let cases = [
            ("-x1^2", -9.0),
            ("2^3^2", 512.0),
            ("x1 - -2", 5.0),
            ("x1*-2", -6.0),
            ("-(x1 + 1)", -4.0),
            ("2*x1/3", 2.0),
            ("x1^-1", 1.0 / 3.0),
            ("pow(x1, 2) - 1e1", -1.0),
            (".5 * x1", 1.5),
        ];
        for (src, want) in cases {
            assert_eq!(parse_expr(src).unwrap().eval(&[3.0]), want, "{src}");
        }
    }

    #[test]
    fn display_round_trips() {
        let srcs = [
            "ivf { dom: [-10,10]; scale: abs(x1); c: [2,5] }",
            "ivf { dom: [-1,1] x [0,1]; where: x2 >= 0 && x1 < 1; scale: x1^2*(1 + 1/x2); c: [3,8]; branch: x2 == 0 -> { lower: 0; upper: 0 } }",
            "ivf { dom: [-2,2]; lower: min(x1, 0) - 2^-x1; upper: exp(x1) + cos(x1)^2 }",
            "ivf { dom: [-5,5] x [-5,5]; scale: sqrt(quad([[2,1],[1,3]])) + dot([1,-2]); c: [-1,2] }",
        ];
        for src in srcs {
            let f = parse_ivf(src).unwrap();
            let again = parse_ivf(&f.to_string()).unwrap();
            assert_eq!(f, again, "{src}");
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_ivf("ivf {\n  dom: [0,1];\n  lower: x1 +;\n  upper: 1 }").unwrap_err();
        assert!(matches!(err, IvfError::Syntax { line: 3, col: 14, .. }), "{err:?}");

        let err = parse_ivf("ivf { dom: [0,1]; lower: y; upper: 1 }").unwrap_err();
        assert!(matches!(err, IvfError::Syntax { line: 1, col: 26, .. }), "{err:?}");

        let err = parse_ivf("ivf { dom: [0,1]; lower: 0 }").unwrap_err();
        assert!(matches!(err, IvfError::Syntax { .. }));

        let err = parse_ivf("ivf { dom: [0,1]; lower: 0; upper: 1 } extra").unwrap_err();
        assert!(matches!(err, IvfError::Syntax { .. }));

        let err = parse_ivf("ivf { dom: [2,1]; lower: 0; upper: 1 }").unwrap_err();
        assert!(matches!(err, IvfError::Syntax { .. }));

        let err = parse_ivf("ivf { dom: [0,1]; lower: 0; upper: 1 $ }").unwrap_err();
        assert!(matches!(err, IvfError::Syntax { .. }));
    }

    #[test]
    fn arity_errors() {
        let err = parse_expr("sin(x1, x2)").unwrap_err();
        assert!(matches!(err, IvfError::Arity { found: 2, .. }), "{err:?}");
        let err = parse_expr("pow(x1)").unwrap_err();
        assert!(matches!(err, IvfError::Arity { found: 1, .. }));
        let err = parse_expr("min(x1)").unwrap_err();
        assert!(matches!(err, IvfError::Arity { .. }));
        let err = parse_ivf("ivf { dom: [0,1]; lower: x2; upper: x2 + 1 }").unwrap_err();
        assert!(matches!(err, IvfError::Variables { used: 2, dims: 1 }));
    }

    #[test]
    fn predicate_with_variable_rhs() {
        let p = parse_predicate("x1 <= x2 and x1 > -1").unwrap();
        assert!(p.test(&[0.0, 1.0]));
        assert!(!p.test(&[2.0, 1.0]));
        assert!(!p.test(&[-2.0, 1.0]));
    }
}

//! Closed-form expressions over chart coordinates with symbolic partial
//! derivatives.

use std::fmt::Write as _;

use super::MetricError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Sinh,
    Cosh,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "ln" | "log" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            _ => return None,
        })
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Ln => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn num(x: f64) -> Self {
        Expr::Num(x)
    }

    pub fn var(i: usize) -> Self {
        Expr::Var(i)
    }

    pub fn zero() -> Self {
        Expr::Num(0.0)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Num(x) if *x == 0.0)
    }

    fn is_one(&self) -> bool {
        matches!(self, Expr::Num(x) if *x == 1.0)
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(x + y),
            (a, b) if a.is_zero() => b,
            (a, b) if b.is_zero() => a,
            (a, b) => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(x - y),
            (a, b) if b.is_zero() => a,
            (a, b) if a.is_zero() => Expr::neg(b),
            (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(x * y),
            (a, b) if a.is_zero() || b.is_zero() => Expr::zero(),
            (a, b) if a.is_one() => b,
            (a, b) if b.is_one() => a,
            (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Num(x), Expr::Num(y)) if y != 0.0 => Expr::Num(x / y),
            (a, _) if a.is_zero() => Expr::zero(),
            (a, b) if b.is_one() => a,
            (a, b) => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Num(x) => Expr::Num(-x),
            Expr::Neg(inner) => *inner,
            a => Expr::Neg(Box::new(a)),
        }
    }

    pub fn pow(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(x.powf(y)),
            (_, b) if b.is_zero() => Expr::Num(1.0),
            (a, b) if b.is_one() => a,
            (a, b) => Expr::Pow(Box::new(a), Box::new(b)),
        }
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        match a {
            Expr::Num(x) => Expr::Num(f.apply(x)),
            a => Expr::Call(f, Box::new(a)),
        }
    }

    /// Sum of terms, `0` when empty.
    pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Expr {
        terms.into_iter().fold(Expr::zero(), Expr::add)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Num(c) => *c,
            Expr::Var(i) => x[*i],
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Neg(a) => -a.eval(x),
            Expr::Pow(a, b) => {
                let base = a.eval(x);
                match **b {
                    Expr::Num(e) if e.fract() == 0.0 && e.abs() < 64.0 => base.powi(e as i32),
                    _ => base.powf(b.eval(x)),
                }
            }
            Expr::Call(f, a) => f.apply(a.eval(x)),
        }
    }

    /// `∂/∂x_v`.
    pub fn diff(&self, v: usize) -> Expr {
        match self {
            Expr::Num(_) => Expr::zero(),
            Expr::Var(i) => Expr::Num(if *i == v { 1.0 } else { 0.0 }),
            Expr::Add(a, b) => Expr::add(a.diff(v), b.diff(v)),
            Expr::Sub(a, b) => Expr::sub(a.diff(v), b.diff(v)),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.diff(v), (**b).clone()),
                Expr::mul((**a).clone(), b.diff(v)),
            ),
            Expr::Div(a, b) => {
                let da = a.diff(v);
                let db = b.diff(v);
                if db.is_zero() {
                    return Expr::div(da, (**b).clone());
                }
                Expr::div(
                    Expr::sub(Expr::mul(da, (**b).clone()), Expr::mul((**a).clone(), db)),
                    Expr::pow((**b).clone(), Expr::Num(2.0)),
                )
            }
            Expr::Neg(a) => Expr::neg(a.diff(v)),
            Expr::Pow(a, b) => {
                let da = a.diff(v);
                if let Expr::Num(c) = **b {
                    return Expr::mul(
                        Expr::mul(Expr::Num(c), Expr::pow((**a).clone(), Expr::Num(c - 1.0))),
                        da,
                    );
                }
                let db = b.diff(v);
                // a^b (b' ln a + b a'/a)
                Expr::mul(
                    self.clone(),
                    Expr::add(
                        Expr::mul(db, Expr::call(Func::Ln, (**a).clone())),
                        Expr::div(Expr::mul((**b).clone(), da), (**a).clone()),
                    ),
                )
            }
            Expr::Call(f, a) => {
                let da = a.diff(v);
                if da.is_zero() {
                    return Expr::zero();
                }
                let inner = (**a).clone();
                let outer = match f {
                    Func::Sin => Expr::call(Func::Cos, inner),
                    Func::Cos => Expr::neg(Expr::call(Func::Sin, inner)),
                    Func::Tan => Expr::div(Expr::Num(1.0), Expr::pow(Expr::call(Func::Cos, inner), Expr::Num(2.0))),
                    Func::Exp => Expr::call(Func::Exp, inner),
                    Func::Ln => Expr::div(Expr::Num(1.0), inner),
                    Func::Sqrt => Expr::div(Expr::Num(0.5), Expr::call(Func::Sqrt, inner)),
                    Func::Sinh => Expr::call(Func::Cosh, inner),
                    Func::Cosh => Expr::call(Func::Sinh, inner),
                };
                Expr::mul(outer, da)
            }
        }
    }

    /// Variables occurring in the expression.
    pub fn variables(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(i) => out.push(*i),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Neg(a) | Expr::Call(_, a) => a.collect_vars(out),
        }
    }

    /// Renames variables through `map` (old index → new index).
    pub fn reindex(&self, map: &dyn Fn(usize) -> usize) -> Expr {
        match self {
            Expr::Num(c) => Expr::Num(*c),
            Expr::Var(i) => Expr::Var(map(*i)),
            Expr::Add(a, b) => Expr::Add(Box::new(a.reindex(map)), Box::new(b.reindex(map))),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.reindex(map)), Box::new(b.reindex(map))),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.reindex(map)), Box::new(b.reindex(map))),
            Expr::Div(a, b) => Expr::Div(Box::new(a.reindex(map)), Box::new(b.reindex(map))),
            Expr::Pow(a, b) => Expr::Pow(Box::new(a.reindex(map)), Box::new(b.reindex(map))),
            Expr::Neg(a) => Expr::Neg(Box::new(a.reindex(map))),
            Expr::Call(f, a) => Expr::Call(*f, Box::new(a.reindex(map))),
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut s = String::new();
        self.write(names, &mut s, 0);
        s
    }

    fn write(&self, names: &[String], out: &mut String, parent: u8) {
        // precedence: 1 additive, 2 multiplicative, 3 unary minus, 4 power
        let (prec, body): (u8, Box<dyn Fn(&mut String)>) = match self {
            Expr::Num(c) => {
                if *c < 0.0 {
                    (3, Box::new(move |o: &mut String| write!(o, "{c}").unwrap()))
                } else {
                    (5, Box::new(move |o: &mut String| write!(o, "{c}").unwrap()))
                }
            }
            Expr::Var(i) => (5, Box::new(move |o: &mut String| o.push_str(&names[*i]))),
            Expr::Add(a, b) => (1, Box::new(move |o: &mut String| {
                a.write(names, o, 1);
                o.push_str(" + ");
                b.write(names, o, 2);
            })),
            Expr::Sub(a, b) => (1, Box::new(move |o: &mut String| {
                a.write(names, o, 1);
                o.push_str(" - ");
                b.write(names, o, 2);
            })),
            Expr::Mul(a, b) => (2, Box::new(move |o: &mut String| {
                a.write(names, o, 2);
                o.push('*');
                b.write(names, o, 3);
            })),
            Expr::Div(a, b) => (2, Box::new(move |o: &mut String| {
                a.write(names, o, 2);
                o.push('/');
                b.write(names, o, 3);
            })),
            Expr::Neg(a) => (3, Box::new(move |o: &mut String| {
                o.push('-');
                a.write(names, o, 3);
            })),
            Expr::Pow(a, b) => (4, Box::new(move |o: &mut String| {
                a.write(names, o, 5);
                o.push('^');
                b.write(names, o, 4);
            })),
            Expr::Call(f, a) => (5, Box::new(move |o: &mut String| {
                o.push_str(f.name());
                o.push('(');
                a.write(names, o, 0);
                o.push(')');
            })),
        };
        if prec < parent {
            out.push('(');
            body(out);
            out.push(')');
        } else {
            body(out);
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, MetricError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let save = i;
                i += 1;
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    i += 1;
                }
                if i < chars.len() && chars[i].is_ascii_digit() {
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                } else {
                    i = save;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse::<f64>()
                .map_err(|_| MetricError::Parse(format!("bad number `{text}` in `{src}`")))?;
            out.push(Tok::Num(v));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if c == '*' && chars.get(i + 1) == Some(&'*') {
            out.push(Tok::Op('^'));
            i += 2;
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(MetricError::Parse(format!("unexpected `{c}` in `{src}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a [String],
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> MetricError {
        MetricError::Parse(format!("{what} in `{}`", self.src))
    }

    fn peek_op(&self, c: char) -> bool {
        self.toks.get(self.pos) == Some(&Tok::Op(c))
    }

    fn expr(&mut self) -> Result<Expr, MetricError> {
        let mut lhs = self.term()?;
        loop {
            if self.peek_op('+') {
                self.pos += 1;
                lhs = Expr::add(lhs, self.term()?);
            } else if self.peek_op('-') {
                self.pos += 1;
                lhs = Expr::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, MetricError> {
        let mut lhs = self.unary()?;
        loop {
            if self.peek_op('*') {
                self.pos += 1;
                lhs = Expr::mul(lhs, self.unary()?);
            } else if self.peek_op('/') {
                self.pos += 1;
                lhs = Expr::div(lhs, self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, MetricError> {
        if self.peek_op('-') {
            self.pos += 1;
            return Ok(Expr::neg(self.unary()?));
        }
        if self.peek_op('+') {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, MetricError> {
        let base = self.atom()?;
        if self.peek_op('^') {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::pow(base, exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, MetricError> {
        let tok = self.toks.get(self.pos).cloned().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.peek_op(')') {
                    return Err(self.err("missing `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(f) = Func::from_name(&name) {
                    if !self.peek_op('(') {
                        return Err(self.err(&format!("`{name}` needs an argument")));
                    }
                    self.pos += 1;
                    let arg = self.expr()?;
                    if !self.peek_op(')') {
                        return Err(self.err("missing `)`"));
                    }
                    self.pos += 1;
                    return Ok(Expr::call(f, arg));
                }
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(Expr::Var(i));
                }
                match name.as_str() {
                    "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                    "e" => Ok(Expr::Num(std::f64::consts::E)),
                    _ => Err(self.err(&format!("unknown symbol `{name}`"))),
                }
            }
            Tok::Op(c) => Err(self.err(&format!("unexpected `{c}`"))),
        }
    }
}

/// Parses `src` with `vars` as the coordinate names (index = position).
pub fn parse_expr(src: &str, vars: &[String]) -> Result<Expr, MetricError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, vars, src };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_and_eval() {
        let vars = names(&["x", "y"]);
        let e = parse_expr("x^2 - 3*y/2 + sin(x)*exp(-y) + 2**3", &vars).unwrap();
        let (x, y) = (0.7_f64, -0.3_f64);
        let expect = x * x - 1.5 * y + x.sin() * (-y).exp() + 8.0;
        assert!((e.eval(&[x, y]) - expect).abs() < 1e-14);
        assert!(parse_expr("x +", &vars).is_err());
        assert!(parse_expr("z", &vars).is_err());
        assert!(parse_expr("sin x", &vars).is_err());
        assert_eq!(parse_expr("-2^2", &vars).unwrap().eval(&[0.0, 0.0]), -4.0);
        assert_eq!(parse_expr("1.5e1", &vars).unwrap().eval(&[0.0, 0.0]), 15.0);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let vars = names(&["x", "y"]);
        for src in ["sin(x)*cos(y)/(1+cos(x))", "x^y", "sqrt(1+x^2)*ln(2+y)", "tan(x*y) - cosh(x)/sinh(1+y)"] {
            let e = parse_expr(src, &vars).unwrap();
            let p = [0.4, 0.9];
            for v in 0..2 {
                let h = 1e-5;
                let mut a = p;
                let mut b = p;
                a[v] += h;
                b[v] -= h;
                let fd = (e.eval(&a) - e.eval(&b)) / (2.0 * h);
                assert!((e.diff(v).eval(&p) - fd).abs() < 1e-7, "{src} d{v}");
            }
        }
    }

    #[test]
    fn render_round_trips() {
        let vars = names(&["u", "v"]);
        for src in ["-(u - v)^2", "u/(v*2)", "2*u*v + sin(u)^2", "u - (v - 1)", "(-u)^3"] {
            let e = parse_expr(src, &vars).unwrap();
            let back = parse_expr(&e.render(&vars), &vars).unwrap();
            for p in [[0.3, 1.7], [-1.1, 0.4]] {
                assert!((e.eval(&p) - back.eval(&p)).abs() < 1e-12, "{src} -> {}", e.render(&vars));
            }
        }
    }
}

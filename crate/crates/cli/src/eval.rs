//! A small expression language over named generators.
//!
//! ```text
//! expr    := unary (('+' | '-') unary)*
//! unary   := '-' unary | number '*' unary | chain
//! chain   := atom ('o_<i>' atom)*
//! atom    := '(' expr ')' | call | name
//! call    := func '(' expr (',' expr)* ')'
//! func    := bullet | bracket | barcirc | B | del | d_<i> | s_<i> | tau | tau^<p>
//! number  := digits ('/' digits)?
//! name    := generator name, optionally qualified as name@arity; also id, e, mu
//!            names with other characters are quoted in backticks: `[x1,Dx2]`
//! ```

use num_rational::BigRational;
use ophh_core::bv::{bar_circ, bracket, bullet, connes_b};
use ophh_core::hochschild::{codegeneracy, coface, hochschild_differential};
use ophh_core::{Error, OperadElement, OperadSpec, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Quoted(String),
    Num(String),
    Sym(char),
}

fn syntax(column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line: 1, column, message: message.into() }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start + 1, Tok::Num(chars[start..i].iter().collect())));
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            if i < chars.len() && chars[i] == '@' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            out.push((start + 1, Tok::Ident(chars[start..i].iter().collect())));
        } else if c == '`' {
            let Some(len) = chars[i + 1..].iter().position(|&d| d == '`') else {
                return Err(syntax(start + 1, "unterminated quoted name"));
            };
            out.push((start + 1, Tok::Quoted(chars[i + 1..i + 1 + len].iter().collect())));
            i += len + 2;
        } else if "+-*/(),^".contains(c) {
            out.push((start + 1, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(syntax(start + 1, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'s> {
    spec: &'s OperadSpec,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

fn add(x: OperadElement, y: OperadElement, column: usize, negate: bool) -> Result<OperadElement> {
    if !x.is_zero() && !y.is_zero() && x.arity() != y.arity() {
        return Err(Error::InvalidInput(format!(
            "column {column}: cannot add elements of arity {} and {}",
            x.arity(),
            y.arity()
        )));
    }
    Ok(if negate { x - y } else { x + y })
}

fn index_suffix(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix).and_then(|s| s.parse().ok())
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(c, _)| *c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.column(), format!("expected {c:?}")))
        }
    }

    fn expr(&mut self) -> Result<OperadElement> {
        let mut acc = self.unary()?;
        loop {
            let column = self.column();
            if self.eat('+') {
                acc = add(acc, self.unary()?, column, false)?;
            } else if self.eat('-') {
                acc = add(acc, self.unary()?, column, true)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn number(&mut self) -> Result<BigRational> {
        let column = self.column();
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return Err(syntax(column, "expected a number"));
        };
        self.pos += 1;
        let mut text = n;
        if self.eat('/') {
            let Some(Tok::Num(d)) = self.peek().cloned() else {
                return Err(syntax(self.column(), "expected a denominator"));
            };
            self.pos += 1;
            text = format!("{text}/{d}");
        }
        text.parse::<BigRational>().map_err(|_| syntax(column, format!("bad number {text:?}")))
    }

    fn unary(&mut self) -> Result<OperadElement> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if matches!(self.peek(), Some(Tok::Num(_))) {
            let c = self.number()?;
            self.expect('*')?;
            return Ok(self.unary()?.scaled(&c));
        }
        self.chain()
    }

    fn chain(&mut self) -> Result<OperadElement> {
        let mut acc = self.atom()?;
        while let Some(Tok::Ident(op)) = self.peek().cloned() {
            let Some(slot) = index_suffix(&op, "o_") else {
                return Err(syntax(self.column(), format!("expected an operator, found {op:?}")));
            };
            self.pos += 1;
            let rhs = self.atom()?;
            acc = self.spec.compose(&acc, slot, &rhs)?;
        }
        Ok(acc)
    }

    fn args(&mut self) -> Result<Vec<OperadElement>> {
        self.expect('(')?;
        let mut args = vec![self.expr()?];
        while self.eat(',') {
            args.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(args)
    }

    fn atom(&mut self) -> Result<OperadElement> {
        let column = self.column();
        if self.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        if let Some(Tok::Quoted(name)) = self.peek().cloned() {
            self.pos += 1;
            return self.spec.element_by_name(&name);
        }
        let Some(Tok::Ident(name)) = self.peek().cloned() else {
            return Err(syntax(column, "expected a generator, a call or '('"));
        };
        self.pos += 1;
        let mut tau_power = None;
        if name == "tau" && self.eat('^') {
            let negative = self.eat('-');
            let p = self.number()?;
            if !p.is_integer() {
                return Err(syntax(column, "tau power must be an integer"));
            }
            let p: i64 = p.to_integer().try_into().map_err(|_| syntax(column, "tau power too large"))?;
            tau_power = Some(if negative { -p } else { p });
        }
        if self.peek() != Some(&Tok::Sym('(')) {
            if tau_power.is_some() {
                return Err(syntax(self.column(), "expected '(' after tau^p"));
            }
            return self.generator(&name);
        }
        let args = self.args()?;
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(syntax(column, format!("{name} takes {n} argument(s), got {}", args.len())))
            }
        };
        let spec = self.spec;
        match name.as_str() {
            "bullet" | "bracket" | "barcirc" => {
                arity(2)?;
                let f = match name.as_str() {
                    "bullet" => bullet,
                    "bracket" => bracket,
                    _ => bar_circ,
                };
                f(spec, &args[0], &args[1])
            }
            "B" => {
                arity(1)?;
                connes_b(spec, &args[0])
            }
            "del" => {
                arity(1)?;
                hochschild_differential(spec, &args[0])
            }
            "tau" => {
                arity(1)?;
                spec.tau_pow(&args[0], tau_power.unwrap_or(1))
            }
            _ => {
                if let Some(i) = index_suffix(&name, "d_") {
                    arity(1)?;
                    coface(spec, i, &args[0])
                } else if let Some(i) = index_suffix(&name, "s_") {
                    arity(1)?;
                    codegeneracy(spec, i, &args[0])
                } else {
                    Err(syntax(column, format!("unknown function {name:?}")))
                }
            }
        }
    }

    fn generator(&self, name: &str) -> Result<OperadElement> {
        match self.spec.element_by_name(name) {
            Ok(x) => Ok(x),
            Err(e) => match name {
                "id" => Ok(self.spec.identity().clone()),
                "e" => Ok(self.spec.unit().clone()),
                "mu" => Ok(self.spec.multiplication().clone()),
                _ => Err(e),
            },
        }
    }
}

/// Parses and evaluates `src` exactly.
pub fn evaluate(spec: &OperadSpec, src: &str) -> Result<OperadElement> {
    let toks = lex(src)?;
    let mut p = Parser { spec, toks, pos: 0, end: src.chars().count() + 1 };
    if p.toks.is_empty() {
        return Err(syntax(1, "empty expression"));
    }
    let value = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.column(), "unexpected trailing input"));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ophh_core::builtin_assoc;

    fn show(src: &str) -> String {
        let spec = builtin_assoc(6).unwrap();
        match evaluate(&spec, src) {
            Ok(x) => spec.display(&x),
            Err(e) => format!("error: {e}"),
        }
    }

    #[test]
    fn assoc_expressions() {
        assert_eq!(show("bracket(a2, a1)"), "a2");
        assert_eq!(show("del(a1)"), "a2");
        assert_eq!(show("a2 o_1 a2 - a2 o_2 a2"), "0");
        assert_eq!(show("2*a2 + 1/2*a2"), "5/2*a2");
        assert_eq!(show("-(a3)"), "-a3");
        assert_eq!(show("tau^-1(a3)"), "a3");
        assert_eq!(show("d_0(a1) + s_1(a3)"), "2*a2");
        assert_eq!(show("bullet(e, mu)"), "a2");
        assert_eq!(show("barcirc(a2, a1)"), "2*a2");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(show("a2 +"), "error: syntax error at line 1, column 5: expected a generator, a call or '('");
        assert!(show("a2 + a3").contains("cannot add"));
        assert!(show("a2 o_3 a1").contains("slot 3"));
        assert!(show("bullet(a2)").contains("takes 2 argument"));
        assert!(show("foo(a2)").contains("unknown function"));
        assert!(show("a2 $").contains("column 4"));
        assert!(show("nope").contains("unknown generator"));
        assert!(show("`a2").contains("unterminated"));
        assert_eq!(show("`a2` o_1 `a1@1`"), "a2");
    }
}

//! Concrete syntax for conditions, number terms and programs.
//!
//! Conditions: `I`, variables `X`, atoms `x0`/`x2+`/`x2-`, products by
//! juxtaposition, postfix exponents `^-`, `^0`, `^1` (or runs such as
//! `^0-`, innermost first), brackets `[A]`, grouping `(A)`.
//!
//! Numbers: `zero{A}`, `suc{A}(a)`, `ann{A,B}(a)`, tuples `(a, b)`,
//! projection `i ! a`, condition application `A -> a`, copies `a^0`/`a^1`,
//! applications `f(a, b)`, number variables `x`.
//!
//! Programs: `fun f : n -> m` declarations and `rule f(pats) => rhs` lines,
//! `#` comments. On right sides `@i` stands for the atom `fi`.

use std::fmt::Write as _;

use crate::error::{CnError, Result};
use crate::rewrite::{CondPattern, Pattern, Program, Rule};
use crate::term::{Condition, NumberTerm};
use crate::Engine;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    line_start: usize,
    /// Function whose `@i` atoms are being read.
    owner: Option<&'a str>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            pos: 0,
            line: 1,
            line_start: 0,
            owner: None,
        }
    }

    fn at_line(src: &'a str, line: usize, owner: Option<&'a str>) -> Self {
        Parser {
            src,
            pos: 0,
            line,
            line_start: 0,
            owner,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(CnError::Syntax {
            line: self.line,
            col: self.src[self.line_start..self.pos].chars().count() + 1,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(k)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.line_start = self.pos;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            for _ in s.chars() {
                self.bump();
            }
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.bump();
            } else {
                break;
            }
        }
        Some(self.src[start..self.pos].to_string())
    }

    fn number(&mut self) -> Option<usize> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        self.src[start..self.pos].parse().ok()
    }

    fn save(&self) -> (usize, usize, usize) {
        (self.pos, self.line, self.line_start)
    }

    fn restore(&mut self, s: (usize, usize, usize)) {
        (self.pos, self.line, self.line_start) = s;
    }

    fn starts_condition(&mut self) -> bool {
        self.skip_ws();
        matches!(self.peek(), Some(c) if c.is_ascii_alphabetic() || c == '[' || c == '(' || c == '@')
    }

    // conditions

    fn condition(&mut self) -> Result<Condition> {
        let mut factors = vec![self.cond_factor()?];
        loop {
            self.skip_ws();
            let save = self.save();
            if self.src[self.pos..].starts_with("->") {
                break;
            }
            if !self.starts_condition() {
                break;
            }
            if self.is_keyword_ahead() {
                self.restore(save);
                break;
            }
            factors.push(self.cond_factor()?);
        }
        let mut it = factors.into_iter();
        let first = it.next().expect("one factor");
        Ok(it.fold(first, Condition::product))
    }

    /// A lowercase identifier followed by `(` or `{` is not a condition factor.
    fn is_keyword_ahead(&mut self) -> bool {
        let save = self.save();
        let r = match self.peek() {
            Some(c) if c.is_ascii_lowercase() => {
                self.ident();
                matches!(self.peek(), Some('(') | Some('{'))
            }
            _ => false,
        };
        self.restore(save);
        r
    }

    fn cond_factor(&mut self) -> Result<Condition> {
        self.skip_ws();
        let mut c = match self.peek() {
            Some('[') => {
                self.bump();
                let inner = self.condition()?;
                self.expect("]")?;
                inner.bracket()
            }
            Some('(') => {
                self.bump();
                let inner = self.condition()?;
                self.expect(")")?;
                inner
            }
            Some('@') => {
                self.bump();
                let Some(owner) = self.owner else {
                    return self.err("`@` atoms are only allowed on rule right sides");
                };
                match self.number() {
                    Some(i) => Condition::atom(&format!("{owner}{i}")),
                    None => return self.err("expected a number after `@`"),
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.ident().expect("identifier");
                if name == "I" {
                    Condition::Neutral
                } else if name.starts_with(|c: char| c.is_ascii_uppercase()) {
                    Condition::var(&name)
                } else {
                    let mut name = name;
                    match (self.peek(), self.peek_at(1)) {
                        (Some('+'), _) => {
                            self.bump();
                            name.push('+');
                        }
                        (Some('-'), next) if next != Some('>') => {
                            self.bump();
                            name.push('-');
                        }
                        _ => {}
                    }
                    Condition::atom(&name)
                }
            }
            _ => return self.err("expected a condition"),
        };
        while self.peek() == Some('^') {
            self.bump();
            let mut any = false;
            while let Some(l) = self.peek() {
                c = match l {
                    '0' => c.copy0(),
                    '1' => c.copy1(),
                    '-' => c.inv(),
                    _ => break,
                };
                self.bump();
                any = true;
            }
            if !any {
                return self.err("expected exponent letters after `^`");
            }
        }
        Ok(c)
    }

    // numbers

    fn num(&mut self) -> Result<NumberTerm> {
        self.skip_ws();
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let i = self.number().expect("digits");
            self.expect("!")?;
            let a = self.num_postfix()?;
            return Ok(NumberTerm::proj(i, a));
        }
        if self.starts_condition() && !self.is_keyword_ahead() {
            let save = self.save();
            if let Ok(c) = self.condition() {
                if self.eat("->") {
                    let a = self.num()?;
                    return Ok(NumberTerm::cond_app(c, a));
                }
            }
            self.restore(save);
        }
        self.num_postfix()
    }

    fn num_postfix(&mut self) -> Result<NumberTerm> {
        let mut a = self.num_primary()?;
        while self.peek() == Some('^') {
            self.bump();
            let mut any = false;
            while let Some(l) = self.peek() {
                a = match l {
                    '0' => a.copy0(),
                    '1' => a.copy1(),
                    _ => break,
                };
                self.bump();
                any = true;
            }
            if !any {
                return self.err("expected copy exponent after `^`");
            }
        }
        Ok(a)
    }

    fn num_primary(&mut self) -> Result<NumberTerm> {
        self.skip_ws();
        if self.peek() == Some('(') {
            self.bump();
            let mut items = vec![self.num()?];
            while self.eat(",") {
                items.push(self.num()?);
            }
            self.expect(")")?;
            return Ok(if items.len() == 1 {
                items.pop().expect("one item")
            } else {
                NumberTerm::Tuple(items)
            });
        }
        let Some(name) = self.ident() else {
            return self.err("expected a number term");
        };
        match name.as_str() {
            "zero" if self.peek() == Some('{') => {
                self.bump();
                let c = self.condition()?;
                self.expect("}")?;
                Ok(NumberTerm::zero(c))
            }
            "suc" if self.peek() == Some('{') => {
                self.bump();
                let c = self.condition()?;
                self.expect("}")?;
                self.expect("(")?;
                let a = self.num()?;
                self.expect(")")?;
                Ok(NumberTerm::suc(c, a))
            }
            "ann" if self.peek() == Some('{') => {
                self.bump();
                let c = self.condition()?;
                self.expect(",")?;
                let d = self.condition()?;
                self.expect("}")?;
                self.expect("(")?;
                let a = self.num()?;
                self.expect(")")?;
                Ok(NumberTerm::ann(c, d, a))
            }
            _ if self.peek() == Some('(') => {
                self.bump();
                let mut args = Vec::new();
                if !self.eat(")") {
                    args.push(self.num()?);
                    while self.eat(",") {
                        args.push(self.num()?);
                    }
                    self.expect(")")?;
                }
                Ok(NumberTerm::App(name, args))
            }
            _ if name.starts_with(|c: char| c.is_ascii_lowercase()) => Ok(NumberTerm::Var(name)),
            _ => self.err(format!("unexpected `{name}`")),
        }
    }

    // patterns

    fn cond_pattern(&mut self) -> Result<CondPattern> {
        self.skip_ws();
        if self.peek() == Some('[') {
            self.bump();
            let mut vars = Vec::new();
            while let Some(v) = self.ident() {
                if !v.starts_with(|c: char| c.is_ascii_uppercase()) || v == "I" {
                    return self.err(format!("`{v}` is not a condition variable"));
                }
                vars.push(v);
            }
            self.expect("]")?;
            return Ok(CondPattern::Bracket(vars));
        }
        match self.ident() {
            Some(v) if v.starts_with(|c: char| c.is_ascii_uppercase()) && v != "I" => Ok(CondPattern::Var(v)),
            _ => self.err("expected a condition variable or `[X Y ...]`"),
        }
    }

    fn pattern(&mut self) -> Result<Pattern> {
        let Some(name) = self.ident() else {
            return self.err("expected a pattern");
        };
        match name.as_str() {
            "zero" if self.peek() == Some('{') => {
                self.bump();
                let c = self.cond_pattern()?;
                self.expect("}")?;
                Ok(Pattern::Zero(c))
            }
            "suc" if self.peek() == Some('{') => {
                self.bump();
                let c = self.cond_pattern()?;
                self.expect("}")?;
                self.expect("(")?;
                let p = self.pattern()?;
                self.expect(")")?;
                Ok(Pattern::Suc(c, Box::new(p)))
            }
            "ann" if self.peek() == Some('{') => {
                self.bump();
                let c = self.cond_pattern()?;
                self.expect(",")?;
                let d = self.cond_pattern()?;
                self.expect("}")?;
                self.expect("(")?;
                let p = self.pattern()?;
                self.expect(")")?;
                Ok(Pattern::Ann(c, d, Box::new(p)))
            }
            _ if name.starts_with(|c: char| c.is_ascii_lowercase()) => Ok(Pattern::Var(name)),
            _ => self.err(format!("`{name}` is not a number variable")),
        }
    }
}

pub fn parse_condition_raw(src: &str) -> Result<Condition> {
    let mut p = Parser::new(src);
    let c = p.condition()?;
    p.finish()?;
    Ok(c)
}

/// Parses a condition and checks it is limited with unique exponents.
pub fn parse_condition(src: &str, e: &Engine) -> Result<Condition> {
    let c = parse_condition_raw(src)?;
    e.algebra().check_condition(&c)?;
    Ok(c)
}

pub fn parse_number_raw(src: &str) -> Result<NumberTerm> {
    let mut p = Parser::new(src);
    let a = p.num()?;
    p.finish()?;
    Ok(a)
}

/// Parses a number term and checks it is well-formed.
pub fn parse_number(src: &str, e: &Engine) -> Result<NumberTerm> {
    let a = parse_number_raw(src)?;
    e.check_number(&a)?;
    Ok(a)
}

/// Parses a program without validating the rule format.
pub fn parse_program_raw(src: &str) -> Result<Program> {
    parse_program_with(src, &[])
}

/// Like [`parse_program_raw`], keeping `optional NAME rule ...` lines only
/// when `NAME` is among `options`.
pub fn parse_program_with(src: &str, options: &[&str]) -> Result<Program> {
    let mut prog = Program::default();
    for (k, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let mut p = Parser::at_line(line, k + 1, None);
        let mut head = p.ident();
        if head.as_deref() == Some("optional") {
            let Some(option) = p.ident() else {
                return p.err("expected an option name");
            };
            if !options.contains(&option.as_str()) {
                continue;
            }
            head = p.ident();
            if head.as_deref() != Some("rule") {
                return p.err("expected `rule` after the option name");
            }
        }
        match head.as_deref() {
            Some("fun") => {
                let Some(name) = p.ident() else {
                    return p.err("expected a function name");
                };
                p.expect(":")?;
                let inputs = p.number().map_or_else(|| p.err("expected an input count"), Ok)?;
                p.expect("->")?;
                let outputs = p.number().map_or_else(|| p.err("expected an output count"), Ok)?;
                p.finish()?;
                if prog.functions.contains_key(&name) {
                    return p.err(format!("function {name} declared twice"));
                }
                prog.declare(&name, inputs, outputs);
            }
            Some("rule") => {
                let Some(name) = p.ident() else {
                    return p.err("expected a function name");
                };
                p.expect("(")?;
                let mut lhs = Vec::new();
                if !p.eat(")") {
                    lhs.push(p.pattern()?);
                    while p.eat(",") {
                        lhs.push(p.pattern()?);
                    }
                    p.expect(")")?;
                }
                p.expect("=>")?;
                let owner: &str = &name;
                let mut q = Parser::at_line(line, k + 1, Some(owner));
                q.pos = p.pos;
                q.line_start = 0;
                let rhs = q.num()?;
                q.finish()?;
                if !prog.functions.contains_key(&name) {
                    return p.err(format!("rule for undeclared function {name}"));
                }
                prog.add_rule(Rule {
                    function: name.clone(),
                    lhs,
                    rhs,
                })?;
            }
            _ => return p.err("expected `fun` or `rule`"),
        }
    }
    Ok(prog)
}

/// Parses a program and rejects it when any rule violates the format.
pub fn parse_program(src: &str, e: &Engine) -> Result<Program> {
    let prog = parse_program_raw(src)?;
    let report = e.validate_program(&prog);
    if !report.is_valid() {
        let msgs: Vec<String> = report.issues.iter().map(|i| i.to_string()).collect();
        return Err(CnError::InvalidProgram(msgs.join("; ")));
    }
    Ok(prog)
}

// rendering

fn exponent_run(c: &Condition) -> (String, &Condition) {
    let mut letters = Vec::new();
    let mut cur = c;
    loop {
        match cur {
            Condition::Inverse(_) => letters.push('-'),
            Condition::Copy0(_) => letters.push('0'),
            Condition::Copy1(_) => letters.push('1'),
            _ => break,
        }
        cur = match cur {
            Condition::Inverse(a) | Condition::Copy0(a) | Condition::Copy1(a) => a,
            _ => unreachable!(),
        };
    }
    letters.reverse();
    (letters.into_iter().collect(), cur)
}

fn write_condition(out: &mut String, c: &Condition, owner: Option<&str>) {
    match c {
        Condition::Var(v) => out.push_str(v),
        Condition::Atom(a) => match owner.and_then(|f| a.strip_prefix(f)) {
            Some(i) if !i.is_empty() && i.chars().all(|d| d.is_ascii_digit()) => {
                let _ = write!(out, "@{i}");
            }
            _ => out.push_str(a),
        },
        Condition::Neutral => out.push('I'),
        Condition::Product(a, b) => {
            write_condition(out, a, owner);
            out.push(' ');
            if matches!(**b, Condition::Product(..)) {
                out.push('(');
                write_condition(out, b, owner);
                out.push(')');
            } else {
                write_condition(out, b, owner);
            }
        }
        Condition::Bracket(a) => {
            out.push('[');
            write_condition(out, a, owner);
            out.push(']');
        }
        Condition::Inverse(_) | Condition::Copy0(_) | Condition::Copy1(_) => {
            let (run, base) = exponent_run(c);
            if matches!(base, Condition::Product(..)) {
                out.push('(');
                write_condition(out, base, owner);
                out.push(')');
            } else {
                write_condition(out, base, owner);
            }
            let _ = write!(out, "^{run}");
        }
    }
}

pub fn render_condition(c: &Condition) -> String {
    let mut s = String::new();
    write_condition(&mut s, c, None);
    s
}

fn write_number(out: &mut String, a: &NumberTerm, owner: Option<&str>) {
    use NumberTerm as N;
    match a {
        N::Var(x) => out.push_str(x),
        N::Zero(c) => {
            out.push_str("zero{");
            write_condition(out, c, owner);
            out.push('}');
        }
        N::Suc(c, b) => {
            out.push_str("suc{");
            write_condition(out, c, owner);
            out.push_str("}(");
            write_number(out, b, owner);
            out.push(')');
        }
        N::Ann(c, d, b) => {
            out.push_str("ann{");
            write_condition(out, c, owner);
            out.push_str(", ");
            write_condition(out, d, owner);
            out.push_str("}(");
            write_number(out, b, owner);
            out.push(')');
        }
        N::Tuple(items) | N::App(_, items) => {
            if let N::App(f, _) = a {
                out.push_str(f);
            }
            out.push('(');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_number(out, item, owner);
            }
            out.push(')');
        }
        N::Proj(i, b) => {
            let _ = write!(out, "{i} ! ");
            write_number_atomic(out, b, owner);
        }
        N::CondApp(c, b) => {
            write_condition(out, c, owner);
            out.push_str(" -> ");
            write_number(out, b, owner);
        }
        N::Copy0(b) | N::Copy1(b) => {
            write_number_atomic(out, b, owner);
            out.push_str(if matches!(a, N::Copy0(_)) { "^0" } else { "^1" });
        }
    }
}

fn write_number_atomic(out: &mut String, a: &NumberTerm, owner: Option<&str>) {
    if matches!(a, NumberTerm::Proj(..) | NumberTerm::CondApp(..)) {
        out.push('(');
        write_number(out, a, owner);
        out.push(')');
    } else {
        write_number(out, a, owner);
    }
}

pub fn render_number(a: &NumberTerm) -> String {
    let mut s = String::new();
    write_number(&mut s, a, None);
    s
}

fn render_cond_pattern(c: &CondPattern) -> String {
    match c {
        CondPattern::Var(v) => v.clone(),
        CondPattern::Bracket(vs) => format!("[{}]", vs.join(" ")),
    }
}

pub fn render_pattern(p: &Pattern) -> String {
    match p {
        Pattern::Var(x) => x.clone(),
        Pattern::Zero(c) => format!("zero{{{}}}", render_cond_pattern(c)),
        Pattern::Suc(c, q) => format!("suc{{{}}}({})", render_cond_pattern(c), render_pattern(q)),
        Pattern::Ann(c, d, q) => format!(
            "ann{{{}, {}}}({})",
            render_cond_pattern(c),
            render_cond_pattern(d),
            render_pattern(q)
        ),
    }
}

pub fn render_rule(r: &Rule) -> String {
    let pats: Vec<String> = r.lhs.iter().map(render_pattern).collect();
    let mut rhs = String::new();
    write_number(&mut rhs, &r.rhs, Some(&r.function));
    format!("rule {}({}) => {}", r.function, pats.join(", "), rhs)
}

pub fn render_program(p: &Program) -> String {
    let mut out = String::new();
    for (name, f) in &p.functions {
        let _ = writeln!(out, "fun {name} : {} -> {}", f.inputs, f.outputs);
    }
    for f in p.functions.values() {
        for r in &f.rules {
            let _ = writeln!(out, "{}", render_rule(r));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_examples() {
        assert_eq!(parse_condition_raw("I").unwrap(), Condition::Neutral);
        let c = parse_condition_raw("[X Y]^-").unwrap();
        assert_eq!(c, Condition::product(Condition::var("X"), Condition::var("Y")).bracket().inv());
        let e = Engine::default();
        assert_eq!(parse_condition("X X^-", &e), Err(CnError::ExponentClash));
    }

    #[test]
    fn exponent_runs_read_innermost_first() {
        let c = parse_condition_raw("X^0-").unwrap();
        assert_eq!(c, Condition::var("X").copy0().inv());
        assert_eq!(render_condition(&c), "X^0-");
    }

    #[test]
    fn atoms_with_signs() {
        let a = parse_number_raw("ann{x2+, x2-}(zero{x0})").unwrap();
        assert_eq!(
            a,
            NumberTerm::ann(Condition::atom("x2+"), Condition::atom("x2-"), NumberTerm::zero(Condition::atom("x0")))
        );
        let b = parse_number_raw("x1- -> zero{x0}").unwrap();
        assert_eq!(b, NumberTerm::cond_app(Condition::atom("x1-"), NumberTerm::zero(Condition::atom("x0"))));
        let c = parse_number_raw("x1->zero{x0}").unwrap();
        assert_eq!(c, NumberTerm::cond_app(Condition::atom("x1"), NumberTerm::zero(Condition::atom("x0"))));
    }

    #[test]
    fn number_examples() {
        let e = Engine::default();
        let one = parse_number("suc{x1}(zero{x0})", &e).unwrap();
        assert_eq!(one, NumberTerm::suc(Condition::atom("x1"), NumberTerm::zero(Condition::atom("x0"))));
        assert!(parse_number("zero{I}", &e).is_err());
        let t = parse_number_raw("2 ! (x, add(x^0, y))^1").unwrap();
        assert!(matches!(t, NumberTerm::Proj(2, _)));
    }

    #[test]
    fn round_trips() {
        for src in [
            "X (Y Z)",
            "(X Y)^0-",
            "[x0 y0^-]^1",
            "I X^1",
            "x2+ x2-^0",
        ] {
            let c = parse_condition_raw(src).unwrap();
            assert_eq!(parse_condition_raw(&render_condition(&c)).unwrap(), c, "{src}");
        }
        for src in [
            "suc{X}(add(x, y))",
            "(1 ! (a, b))^0",
            "A -> suc{B}(x)",
            "(A -> x)^1",
            "f(x^0, ann{[X Y], Z^-}(zero{I}))",
        ] {
            let a = parse_number_raw(src).unwrap();
            assert_eq!(parse_number_raw(&render_number(&a)).unwrap(), a, "{src}");
        }
    }

    #[test]
    fn syntax_errors_carry_location() {
        match parse_condition_raw("X ^") {
            Err(CnError::Syntax { line: 1, col, .. }) => assert_eq!(col, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_program_raw("fun f : 1 -> 1\nrule f(x) => suc{@1}(x\n"),
            Err(CnError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn program_atoms() {
        let p = parse_program_raw("fun g : 1 -> 1\nrule g(x) => suc{@1}(x)\n").unwrap();
        let r = &p.functions["g"].rules[0];
        assert_eq!(r.rhs, NumberTerm::suc(Condition::atom("g1"), NumberTerm::var("x")));
        assert_eq!(render_rule(r), "rule g(x) => suc{@1}(x)");
    }
}

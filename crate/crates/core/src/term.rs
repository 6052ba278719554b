//! Condition and number terms, positions, copy exponents, typing and the
//! extensional value of constructor numbers.

use std::collections::HashMap;
use std::fmt;

use crate::error::{CnError, Result};

/// A term of the condition algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    Var(String),
    Atom(String),
    Product(Box<Condition>, Box<Condition>),
    Neutral,
    Inverse(Box<Condition>),
    Copy0(Box<Condition>),
    Copy1(Box<Condition>),
    Bracket(Box<Condition>),
}

impl Condition {
    pub fn var(name: &str) -> Self {
        Condition::Var(name.to_string())
    }

    pub fn atom(name: &str) -> Self {
        Condition::Atom(name.to_string())
    }

    pub fn product(a: Condition, b: Condition) -> Self {
        Condition::Product(Box::new(a), Box::new(b))
    }

    /// Left-nested product of all factors, `I` when empty.
    pub fn product_of<I: IntoIterator<Item = Condition>>(factors: I) -> Self {
        factors
            .into_iter()
            .reduce(Condition::product)
            .unwrap_or(Condition::Neutral)
    }

    pub fn inv(self) -> Self {
        Condition::Inverse(Box::new(self))
    }

    pub fn copy0(self) -> Self {
        Condition::Copy0(Box::new(self))
    }

    pub fn copy1(self) -> Self {
        Condition::Copy1(Box::new(self))
    }

    pub fn copy(self, bit: u8) -> Self {
        if bit == 0 {
            self.copy0()
        } else {
            self.copy1()
        }
    }

    pub fn bracket(self) -> Self {
        Condition::Bracket(Box::new(self))
    }

    /// Size on the purely syntactic form.
    pub fn size(&self) -> usize {
        match self {
            Condition::Var(_) | Condition::Atom(_) | Condition::Bracket(_) => 1,
            Condition::Neutral => 0,
            Condition::Product(a, b) => a.size() + b.size(),
            Condition::Inverse(a) | Condition::Copy0(a) | Condition::Copy1(a) => a.size(),
        }
    }

    /// Every subterm has size at most `limit`.
    pub fn is_limited(&self, limit: usize) -> bool {
        if self.size() > limit {
            return false;
        }
        match self {
            Condition::Product(a, b) => a.is_limited(limit) && b.is_limited(limit),
            Condition::Inverse(a)
            | Condition::Copy0(a)
            | Condition::Copy1(a)
            | Condition::Bracket(a) => a.is_limited(limit),
            _ => true,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Condition::Var(_) | Condition::Atom(_) | Condition::Neutral => 1,
            Condition::Product(a, b) => 1 + a.depth().max(b.depth()),
            Condition::Inverse(a)
            | Condition::Copy0(a)
            | Condition::Copy1(a)
            | Condition::Bracket(a) => 1 + a.depth(),
        }
    }

    pub fn has_variables(&self) -> bool {
        match self {
            Condition::Var(_) => true,
            Condition::Atom(_) | Condition::Neutral => false,
            Condition::Product(a, b) => a.has_variables() || b.has_variables(),
            Condition::Inverse(a)
            | Condition::Copy0(a)
            | Condition::Copy1(a)
            | Condition::Bracket(a) => a.has_variables(),
        }
    }

    /// Replaces condition variables according to `map`; unmapped variables stay.
    pub fn substitute(&self, map: &HashMap<String, Condition>) -> Condition {
        match self {
            Condition::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Condition::Atom(_) | Condition::Neutral => self.clone(),
            Condition::Product(a, b) => Condition::product(a.substitute(map), b.substitute(map)),
            Condition::Inverse(a) => a.substitute(map).inv(),
            Condition::Copy0(a) => a.substitute(map).copy0(),
            Condition::Copy1(a) => a.substitute(map).copy1(),
            Condition::Bracket(a) => a.substitute(map).bracket(),
        }
    }
}

/// A constructed-number term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NumberTerm {
    Var(String),
    Zero(Condition),
    Suc(Condition, Box<NumberTerm>),
    Ann(Condition, Condition, Box<NumberTerm>),
    Tuple(Vec<NumberTerm>),
    /// 1-based projection.
    Proj(usize, Box<NumberTerm>),
    CondApp(Condition, Box<NumberTerm>),
    Copy0(Box<NumberTerm>),
    Copy1(Box<NumberTerm>),
    App(String, Vec<NumberTerm>),
}

impl NumberTerm {
    pub fn var(name: &str) -> Self {
        NumberTerm::Var(name.to_string())
    }

    pub fn zero(c: Condition) -> Self {
        NumberTerm::Zero(c)
    }

    pub fn suc(c: Condition, a: NumberTerm) -> Self {
        NumberTerm::Suc(c, Box::new(a))
    }

    pub fn ann(c: Condition, d: Condition, a: NumberTerm) -> Self {
        NumberTerm::Ann(c, d, Box::new(a))
    }

    pub fn app(f: &str, args: Vec<NumberTerm>) -> Self {
        NumberTerm::App(f.to_string(), args)
    }

    pub fn proj(i: usize, a: NumberTerm) -> Self {
        NumberTerm::Proj(i, Box::new(a))
    }

    pub fn cond_app(c: Condition, a: NumberTerm) -> Self {
        NumberTerm::CondApp(c, Box::new(a))
    }

    pub fn copy0(self) -> Self {
        NumberTerm::Copy0(Box::new(self))
    }

    pub fn copy1(self) -> Self {
        NumberTerm::Copy1(Box::new(self))
    }

    pub fn copy(self, bit: u8) -> Self {
        if bit == 0 {
            self.copy0()
        } else {
            self.copy1()
        }
    }

    /// Built only from `zero`, `suc` and `ann` (conditions unrestricted).
    pub fn is_constructor_number(&self) -> bool {
        match self {
            NumberTerm::Zero(_) => true,
            NumberTerm::Suc(_, a) | NumberTerm::Ann(_, _, a) => a.is_constructor_number(),
            _ => false,
        }
    }

    /// Constructor number or tuple of constructor numbers.
    pub fn is_constructor_value(&self) -> bool {
        match self {
            NumberTerm::Tuple(items) => items.iter().all(NumberTerm::is_constructor_number),
            _ => self.is_constructor_number(),
        }
    }

    pub fn contains_app(&self) -> bool {
        match self {
            NumberTerm::App(..) => true,
            NumberTerm::Var(_) | NumberTerm::Zero(_) => false,
            NumberTerm::Suc(_, a)
            | NumberTerm::Ann(_, _, a)
            | NumberTerm::Proj(_, a)
            | NumberTerm::CondApp(_, a)
            | NumberTerm::Copy0(a)
            | NumberTerm::Copy1(a) => a.contains_app(),
            NumberTerm::Tuple(items) => items.iter().any(NumberTerm::contains_app),
        }
    }

    /// Number of `zero`/`suc`/`ann` nodes.
    pub fn constructor_count(&self) -> usize {
        match self {
            NumberTerm::Var(_) => 0,
            NumberTerm::Zero(_) => 1,
            NumberTerm::Suc(_, a) | NumberTerm::Ann(_, _, a) => 1 + a.constructor_count(),
            NumberTerm::Proj(_, a)
            | NumberTerm::CondApp(_, a)
            | NumberTerm::Copy0(a)
            | NumberTerm::Copy1(a) => a.constructor_count(),
            NumberTerm::Tuple(items) | NumberTerm::App(_, items) => {
                items.iter().map(NumberTerm::constructor_count).sum()
            }
        }
    }

    /// All conditions attached to `zero`, `suc` and `ann` nodes, outermost first.
    pub fn constructor_conditions(&self) -> Vec<&Condition> {
        let mut out = Vec::new();
        self.collect_constructor_conditions(&mut out);
        out
    }

    fn collect_constructor_conditions<'a>(&'a self, out: &mut Vec<&'a Condition>) {
        match self {
            NumberTerm::Var(_) => {}
            NumberTerm::Zero(c) => out.push(c),
            NumberTerm::Suc(c, a) => {
                out.push(c);
                a.collect_constructor_conditions(out);
            }
            NumberTerm::Ann(c, d, a) => {
                out.push(c);
                out.push(d);
                a.collect_constructor_conditions(out);
            }
            NumberTerm::Proj(_, a)
            | NumberTerm::CondApp(_, a)
            | NumberTerm::Copy0(a)
            | NumberTerm::Copy1(a) => a.collect_constructor_conditions(out),
            NumberTerm::Tuple(items) | NumberTerm::App(_, items) => {
                for item in items {
                    item.collect_constructor_conditions(out);
                }
            }
        }
    }

    /// Every condition occurring anywhere in the term.
    pub fn all_conditions(&self) -> Vec<&Condition> {
        let mut out = Vec::new();
        self.collect_all_conditions(&mut out);
        out
    }

    fn collect_all_conditions<'a>(&'a self, out: &mut Vec<&'a Condition>) {
        if let NumberTerm::CondApp(c, a) = self {
            out.push(c);
            a.collect_all_conditions(out);
            return;
        }
        match self {
            NumberTerm::Var(_) => {}
            NumberTerm::Zero(c) => out.push(c),
            NumberTerm::Suc(c, a) => {
                out.push(c);
                a.collect_all_conditions(out);
            }
            NumberTerm::Ann(c, d, a) => {
                out.push(c);
                out.push(d);
                a.collect_all_conditions(out);
            }
            NumberTerm::Proj(_, a) | NumberTerm::Copy0(a) | NumberTerm::Copy1(a) => {
                a.collect_all_conditions(out)
            }
            NumberTerm::Tuple(items) | NumberTerm::App(_, items) => {
                for item in items {
                    item.collect_all_conditions(out);
                }
            }
            NumberTerm::CondApp(..) => unreachable!(),
        }
    }

    /// Applies `f` to every condition in the term, rebuilding it.
    pub fn map_conditions<F: FnMut(&Condition) -> Condition>(&self, f: &mut F) -> NumberTerm {
        match self {
            NumberTerm::Var(_) => self.clone(),
            NumberTerm::Zero(c) => NumberTerm::Zero(f(c)),
            NumberTerm::Suc(c, a) => {
                let c = f(c);
                NumberTerm::suc(c, a.map_conditions(f))
            }
            NumberTerm::Ann(c, d, a) => {
                let c = f(c);
                let d = f(d);
                NumberTerm::ann(c, d, a.map_conditions(f))
            }
            NumberTerm::Tuple(items) => {
                NumberTerm::Tuple(items.iter().map(|i| i.map_conditions(f)).collect())
            }
            NumberTerm::Proj(i, a) => NumberTerm::proj(*i, a.map_conditions(f)),
            NumberTerm::CondApp(c, a) => {
                let c = f(c);
                NumberTerm::cond_app(c, a.map_conditions(f))
            }
            NumberTerm::Copy0(a) => a.map_conditions(f).copy0(),
            NumberTerm::Copy1(a) => a.map_conditions(f).copy1(),
            NumberTerm::App(g, items) => {
                NumberTerm::App(g.clone(), items.iter().map(|i| i.map_conditions(f)).collect())
            }
        }
    }
}

/// Borrowed view over either kind of term, used for position addressing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermRef<'a> {
    Cond(&'a Condition),
    Num(&'a NumberTerm),
}

/// Owned counterpart of [`TermRef`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Cond(Condition),
    Num(NumberTerm),
}

impl<'a> From<&'a Condition> for TermRef<'a> {
    fn from(c: &'a Condition) -> Self {
        TermRef::Cond(c)
    }
}

impl<'a> From<&'a NumberTerm> for TermRef<'a> {
    fn from(a: &'a NumberTerm) -> Self {
        TermRef::Num(a)
    }
}

impl<'a> TermRef<'a> {
    pub fn children(self) -> Vec<TermRef<'a>> {
        match self {
            TermRef::Cond(c) => match c {
                Condition::Var(_) | Condition::Atom(_) | Condition::Neutral => vec![],
                Condition::Product(a, b) => vec![TermRef::Cond(a), TermRef::Cond(b)],
                Condition::Inverse(a)
                | Condition::Copy0(a)
                | Condition::Copy1(a)
                | Condition::Bracket(a) => vec![TermRef::Cond(a)],
            },
            TermRef::Num(n) => match n {
                NumberTerm::Var(_) => vec![],
                NumberTerm::Zero(c) => vec![TermRef::Cond(c)],
                NumberTerm::Suc(c, a) => vec![TermRef::Cond(c), TermRef::Num(a)],
                NumberTerm::Ann(c, d, a) => {
                    vec![TermRef::Cond(c), TermRef::Cond(d), TermRef::Num(a)]
                }
                NumberTerm::Tuple(items) | NumberTerm::App(_, items) => {
                    items.iter().map(TermRef::Num).collect()
                }
                NumberTerm::Proj(_, a) | NumberTerm::Copy0(a) | NumberTerm::Copy1(a) => {
                    vec![TermRef::Num(a)]
                }
                NumberTerm::CondApp(c, a) => vec![TermRef::Cond(c), TermRef::Num(a)],
            },
        }
    }

    /// The copy letter this node contributes to positions strictly below it.
    fn copy_letter(self) -> Option<u8> {
        match self {
            TermRef::Cond(Condition::Copy0(_)) | TermRef::Num(NumberTerm::Copy0(_)) => Some(0),
            TermRef::Cond(Condition::Copy1(_)) | TermRef::Num(NumberTerm::Copy1(_)) => Some(1),
            _ => None,
        }
    }

    /// Key of a leaf that takes part in the unique-exponent check.
    fn occurrence_key(self) -> Option<(u8, &'a str)> {
        match self {
            TermRef::Cond(Condition::Var(v)) => Some((0, v)),
            TermRef::Cond(Condition::Atom(a)) => Some((1, a)),
            TermRef::Num(NumberTerm::Var(x)) => Some((2, x)),
            _ => None,
        }
    }

    pub fn to_owned(self) -> Term {
        match self {
            TermRef::Cond(c) => Term::Cond(c.clone()),
            TermRef::Num(n) => Term::Num(n.clone()),
        }
    }
}

/// A word of 1-based child indices addressing a subterm.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// A word over the copy letters `0` and `1`, innermost letter first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentWord(pub Vec<u8>);

impl ExponentWord {
    pub fn parse(s: &str) -> Self {
        ExponentWord(s.bytes().map(|b| b - b'0').collect())
    }

    pub fn is_prefix_of(&self, other: &ExponentWord) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn comparable(&self, other: &ExponentWord) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }
}

impl fmt::Display for ExponentWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

pub fn subterm_at<'a>(t: TermRef<'a>, p: &Position) -> Result<TermRef<'a>> {
    let mut cur = t;
    for &i in &p.0 {
        let children = cur.children();
        cur = *i
            .checked_sub(1)
            .and_then(|k| children.get(k))
            .ok_or_else(|| CnError::InvalidPosition(p.to_string()))?;
    }
    Ok(cur)
}

/// Copy letters on the path from `p` up to the root, read from the
/// addressed position upwards (so `t/p` carries the first letter innermost).
pub fn copy_exponent(t: TermRef<'_>, p: &Position) -> Result<ExponentWord> {
    let mut cur = t;
    let mut down = Vec::new();
    for &i in &p.0 {
        if let Some(l) = cur.copy_letter() {
            down.push(l);
        }
        let children = cur.children();
        cur = *i
            .checked_sub(1)
            .and_then(|k| children.get(k))
            .ok_or_else(|| CnError::InvalidPosition(p.to_string()))?;
    }
    down.reverse();
    Ok(ExponentWord(down))
}

/// Every variable/atom occurrence with its copy exponent.
pub fn occurrences(t: TermRef<'_>) -> Vec<((u8, String), ExponentWord, Position)> {
    fn walk(
        t: TermRef<'_>,
        pos: Position,
        path: &mut Vec<u8>,
        out: &mut Vec<((u8, String), ExponentWord, Position)>,
    ) {
        if let Some((k, name)) = t.occurrence_key() {
            let mut w = path.clone();
            w.reverse();
            out.push(((k, name.to_string()), ExponentWord(w), pos.clone()));
        }
        let letter = t.copy_letter();
        if let Some(l) = letter {
            path.push(l);
        }
        for (i, c) in t.children().into_iter().enumerate() {
            walk(c, pos.child(i + 1), path, out);
        }
        if letter.is_some() {
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(t, Position::root(), &mut Vec::new(), &mut out);
    out
}

/// Distinct occurrences of the same variable or atom carry prefix-incomparable exponents.
pub fn has_unique_exponents(t: TermRef<'_>) -> bool {
    let mut by_key: HashMap<(u8, String), Vec<ExponentWord>> = HashMap::new();
    for (k, w, _) in occurrences(t) {
        by_key.entry(k).or_default().push(w);
    }
    by_key.values().all(|ws| {
        ws.iter()
            .enumerate()
            .all(|(i, a)| ws[i + 1..].iter().all(|b| !a.comparable(b)))
    })
}

/// `(t/p)` wrapped in the copy operators of `t↑p`, innermost letter first.
pub fn exponentiated_subterm(t: TermRef<'_>, p: &Position) -> Result<Term> {
    let sub = subterm_at(t, p)?;
    let word = copy_exponent(t, p)?;
    Ok(match sub.to_owned() {
        Term::Cond(c) => Term::Cond(word.0.iter().fold(c, |acc, &b| acc.copy(b))),
        Term::Num(n) => Term::Num(word.0.iter().fold(n, |acc, &b| acc.copy(b))),
    })
}

/// Positions of all conditions attached to constructors.
pub fn constructor_condition_positions(a: &NumberTerm) -> Vec<Position> {
    fn walk(a: &NumberTerm, pos: Position, out: &mut Vec<Position>) {
        match a {
            NumberTerm::Zero(_) => out.push(pos.child(1)),
            NumberTerm::Suc(_, _) => out.push(pos.child(1)),
            NumberTerm::Ann(_, _, _) => {
                out.push(pos.child(1));
                out.push(pos.child(2));
            }
            _ => {}
        }
        for (i, c) in TermRef::Num(a).children().into_iter().enumerate() {
            if let TermRef::Num(n) = c {
                walk(n, pos.child(i + 1), out);
            }
        }
    }
    let mut out = Vec::new();
    walk(a, Position::root(), &mut out);
    out
}

/// ι, ιⁿ and ιⁿ → ιᵐ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CnType {
    Num,
    NumTuple(usize),
    Arrow(usize, usize),
}

impl CnType {
    /// ιⁿ with ι¹ = ι.
    pub fn tuple(n: usize) -> Self {
        if n == 1 {
            CnType::Num
        } else {
            CnType::NumTuple(n)
        }
    }

    fn width(self) -> Option<usize> {
        match self {
            CnType::Num => Some(1),
            CnType::NumTuple(n) => Some(n),
            CnType::Arrow(..) => None,
        }
    }
}

impl fmt::Display for CnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CnType::Num => write!(f, "ι"),
            CnType::NumTuple(n) => write!(f, "ι^{n}"),
            CnType::Arrow(n, m) => write!(f, "ι^{n} → ι^{m}"),
        }
    }
}

pub type TypeEnv = HashMap<String, CnType>;

pub fn typecheck(a: &NumberTerm, env: &TypeEnv) -> Result<CnType> {
    let ill = |msg: String| Err(CnError::IllTyped(msg));
    match a {
        NumberTerm::Var(x) => match env.get(x) {
            Some(t @ (CnType::Num | CnType::NumTuple(_))) => Ok(*t),
            Some(t) => ill(format!("variable {x} has function type {t}")),
            None => ill(format!("untyped variable {x}")),
        },
        NumberTerm::Zero(_) => Ok(CnType::Num),
        NumberTerm::Suc(_, b) | NumberTerm::Ann(_, _, b) => match typecheck(b, env)? {
            CnType::Num => Ok(CnType::Num),
            t => ill(format!("constructor argument has type {t}, expected ι")),
        },
        NumberTerm::Tuple(items) => {
            if items.len() < 2 {
                return ill("tuple of fewer than two components".into());
            }
            for item in items {
                let t = typecheck(item, env)?;
                if t != CnType::Num {
                    return ill(format!("tuple component has type {t}"));
                }
            }
            Ok(CnType::NumTuple(items.len()))
        }
        NumberTerm::Proj(i, b) => {
            let t = typecheck(b, env)?;
            match t.width() {
                Some(n) if *i >= 1 && *i <= n => Ok(CnType::Num),
                _ => ill(format!("projection {i} out of range for {t}")),
            }
        }
        NumberTerm::CondApp(_, b) | NumberTerm::Copy0(b) | NumberTerm::Copy1(b) => {
            let t = typecheck(b, env)?;
            if t.width().is_none() {
                return ill(format!("number operator applied to {t}"));
            }
            Ok(t)
        }
        NumberTerm::App(f, args) => match env.get(f) {
            Some(CnType::Arrow(n, m)) => {
                if args.len() != *n {
                    return ill(format!("{f} expects {n} arguments, got {}", args.len()));
                }
                for arg in args {
                    let t = typecheck(arg, env)?;
                    if t != CnType::Num {
                        return ill(format!("argument of {f} has type {t}"));
                    }
                }
                Ok(CnType::tuple(*m))
            }
            _ => ill(format!("undeclared function {f}")),
        },
    }
}

/// Extensional value of a constructor number or tuple of them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Extension {
    Nat(u64),
    Tuple(Vec<u64>),
}

pub fn extension(a: &NumberTerm) -> Result<Extension> {
    fn count(a: &NumberTerm) -> Result<u64> {
        match a {
            NumberTerm::Zero(_) => Ok(0),
            NumberTerm::Suc(_, b) => Ok(1 + count(b)?),
            NumberTerm::Ann(_, _, b) => count(b),
            _ => Err(CnError::NotConstructorNumber),
        }
    }
    match a {
        NumberTerm::Tuple(items) => Ok(Extension::Tuple(
            items.iter().map(count).collect::<Result<_>>()?,
        )),
        _ => count(a).map(Extension::Nat),
    }
}

//! Condition algebra: the set-condition model, canonical forms and the
//! equality decisions built on them.
//!
//! A bracket-free condition flattens to a multiset of elementary conditions
//! `b^e`, where `b` is a variable or atom and `e` is an exponent word over
//! `0`, `1` and `-` (innermost letter first, `--` cancelled). Brackets are
//! handled by treating `⟨A⟩` as one more kind of base whose content is itself
//! a canonical set condition.
//!
//! Equality is decided by exploring the class of a set condition under the
//! set-level laws (copy merge/split, annihilation/introduction, bracket
//! merge/split) while every intermediate state keeps unique copy exponents
//! and stays within the size limit. The canonical form is the least state of
//! that bounded class. Exponent words are capped at the input's longest word
//! plus [`WORD_SLACK`], and classes at [`CLOSURE_CAP`] states.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use dashmap::DashMap;

use crate::error::{CnError, Result};
use crate::term::{has_unique_exponents, Condition, ExponentWord};

/// Extra exponent-word length the class exploration may use beyond the input.
pub const WORD_SLACK: usize = 2;

/// Upper bound on the number of states explored for one canonical form.
pub const CLOSURE_CAP: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Zero,
    One,
    Minus,
}

impl Letter {
    pub fn bit(b: u8) -> Self {
        if b == 0 {
            Letter::Zero
        } else {
            Letter::One
        }
    }

    fn flipped(self) -> Self {
        match self {
            Letter::Zero => Letter::One,
            Letter::One => Letter::Zero,
            Letter::Minus => Letter::Minus,
        }
    }

    fn is_bit(self) -> bool {
        self != Letter::Minus
    }

    fn symbol(self) -> char {
        match self {
            Letter::Zero => '0',
            Letter::One => '1',
            Letter::Minus => '-',
        }
    }
}

/// Exponent word of an elementary condition, innermost letter first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word without cancelling `--`.
    pub fn raw(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Parses `0`, `1` and `-` characters, without cancelling.
    pub fn parse(s: &str) -> Self {
        Word(
            s.chars()
                .map(|c| match c {
                    '0' => Letter::Zero,
                    '1' => Letter::One,
                    _ => Letter::Minus,
                })
                .collect(),
        )
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Appends at the outer end, cancelling a resulting `--`.
    pub fn push(&mut self, l: Letter) {
        if l == Letter::Minus && self.0.last() == Some(&Letter::Minus) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn appended(&self, l: Letter) -> Word {
        let mut w = self.clone();
        w.push(l);
        w
    }

    pub fn is_reduced(&self) -> bool {
        !self
            .0
            .windows(2)
            .any(|p| p[0] == Letter::Minus && p[1] == Letter::Minus)
    }

    /// Deletes `--` until none is left.
    pub fn reduced(&self) -> Word {
        let mut w = Word::empty();
        for &l in &self.0 {
            w.push(l);
        }
        w
    }

    fn concat(parts: &[&[Letter]]) -> Word {
        let mut w = Word::empty();
        for part in parts {
            for &l in *part {
                w.push(l);
            }
        }
        w
    }

    /// The 0/1 letters only, the copy exponent this word contributes.
    pub fn projection(&self) -> ExponentWord {
        ExponentWord(
            self.0
                .iter()
                .filter_map(|l| match l {
                    Letter::Zero => Some(0),
                    Letter::One => Some(1),
                    Letter::Minus => None,
                })
                .collect(),
        )
    }

    fn ends_with(&self, suffix: &[Letter]) -> Option<Word> {
        if self.0.ends_with(suffix) {
            Some(Word(self.0[..self.0.len() - suffix.len()].to_vec()))
        } else {
            None
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

/// Leading `-` toggled: added when absent, removed when present.
fn toggled(s: &[Letter]) -> Vec<Letter> {
    if s.first() == Some(&Letter::Minus) {
        s[1..].to_vec()
    } else {
        let mut v = Vec::with_capacity(s.len() + 1);
        v.push(Letter::Minus);
        v.extend_from_slice(s);
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    Var(String),
    Atom(String),
    Bracket(Box<SetCondition>),
}

/// `base^word`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elementary {
    pub base: Base,
    pub word: Word,
}

impl Elementary {
    pub fn new(base: Base, word: Word) -> Self {
        Elementary { base, word }
    }

    pub fn to_condition(&self) -> Condition {
        let mut c = match &self.base {
            Base::Var(v) => Condition::Var(v.clone()),
            Base::Atom(a) => Condition::Atom(a.clone()),
            Base::Bracket(inner) => inner.to_condition().bracket(),
        };
        for l in self.word.letters() {
            c = match l {
                Letter::Zero => c.copy0(),
                Letter::One => c.copy1(),
                Letter::Minus => c.inv(),
            };
        }
        c
    }
}

/// A finite multiset of elementary conditions, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetCondition {
    elems: Vec<Elementary>,
}

impl SetCondition {
    pub fn new(mut elems: Vec<Elementary>) -> Self {
        elems.sort();
        SetCondition { elems }
    }

    pub fn empty() -> Self {
        SetCondition::default()
    }

    pub fn elems(&self) -> &[Elementary] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Size of the product term this set stands for.
    pub fn size(&self) -> usize {
        self.elems.len()
    }

    fn total_word_len(&self) -> usize {
        self.elems
            .iter()
            .map(|e| {
                e.word.len()
                    + match &e.base {
                        Base::Bracket(inner) => inner.total_word_len(),
                        _ => 0,
                    }
            })
            .sum()
    }

    pub fn union(a: &SetCondition, b: &SetCondition) -> SetCondition {
        let mut elems = a.elems.clone();
        elems.extend(b.elems.iter().cloned());
        SetCondition::new(elems)
    }

    fn replace(&self, remove: &[usize], add: Vec<Elementary>) -> SetCondition {
        let mut elems: Vec<Elementary> = self
            .elems
            .iter()
            .enumerate()
            .filter(|(i, _)| !remove.contains(i))
            .map(|(_, e)| e.clone())
            .collect();
        elems.extend(add);
        SetCondition::new(elems)
    }

    /// Variable and atom occurrences with their copy exponents, brackets included.
    pub fn occurrences(&self) -> Vec<((u8, String), ExponentWord)> {
        let mut out = Vec::new();
        for e in &self.elems {
            let outer = e.word.projection();
            match &e.base {
                Base::Var(v) => out.push(((0, v.clone()), outer)),
                Base::Atom(a) => out.push(((1, a.clone()), outer)),
                Base::Bracket(inner) => {
                    for (k, mut w) in inner.occurrences() {
                        w.0.extend_from_slice(&outer.0);
                        out.push((k, w));
                    }
                }
            }
        }
        out
    }

    pub fn has_unique_exponents(&self) -> bool {
        let mut by_key: HashMap<(u8, String), Vec<ExponentWord>> = HashMap::new();
        for (k, w) in self.occurrences() {
            by_key.entry(k).or_default().push(w);
        }
        by_key.values().all(|ws| {
            ws.iter()
                .enumerate()
                .all(|(i, a)| ws[i + 1..].iter().all(|b| !a.comparable(b)))
        })
    }

    fn is_limited(&self, limit: usize) -> bool {
        self.size() <= limit
            && self.elems.iter().all(|e| match &e.base {
                Base::Bracket(inner) => inner.is_limited(limit),
                _ => true,
            })
    }

    pub fn max_word_len(&self) -> usize {
        self.elems
            .iter()
            .map(|e| {
                let inner = match &e.base {
                    Base::Bracket(inner) => inner.max_word_len(),
                    _ => 0,
                };
                e.word.len().max(inner)
            })
            .max()
            .unwrap_or(0)
    }

    /// Left-nested product of the elementary terms, `I` when empty.
    pub fn to_condition(&self) -> Condition {
        Condition::product_of(self.elems.iter().map(Elementary::to_condition))
    }
}

impl fmt::Display for SetCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match &e.base {
                Base::Var(v) => write!(f, "{v}")?,
                Base::Atom(a) => write!(f, "{a}")?,
                Base::Bracket(inner) => write!(f, "⟨{inner}⟩")?,
            }
            if !e.word.is_empty() {
                write!(f, "^{}", e.word)?;
            }
        }
        write!(f, "}}")
    }
}

/// One application site of a literal normal-form rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NfRule {
    /// `{u⁰, u¹} → {u}`
    Merge,
    /// `{u⁰, u¹⁻} → ∅`
    AnnihilateLeft,
    /// `{u¹, u⁰⁻} → ∅`
    AnnihilateRight,
}

/// Merge and annihilation redexes of the literal normal form: `(rule, i, j)`.
pub fn nf_redexes(s: &SetCondition) -> Vec<(NfRule, usize, usize)> {
    use Letter::*;
    let mut out = Vec::new();
    let elems = s.elems();
    for i in 0..elems.len() {
        for j in 0..elems.len() {
            if i == j || elems[i].base != elems[j].base {
                continue;
            }
            let (a, b) = (&elems[i].word, &elems[j].word);
            if let (Some(u), Some(v)) = (a.ends_with(&[Zero]), b.ends_with(&[One])) {
                if u == v {
                    out.push((NfRule::Merge, i, j));
                }
            }
            if let (Some(u), Some(v)) = (a.ends_with(&[Zero]), b.ends_with(&[One, Minus])) {
                if u == v {
                    out.push((NfRule::AnnihilateLeft, i, j));
                }
            }
            if let (Some(u), Some(v)) = (a.ends_with(&[One]), b.ends_with(&[Zero, Minus])) {
                if u == v {
                    out.push((NfRule::AnnihilateRight, i, j));
                }
            }
        }
    }
    out
}

fn apply_nf_redex(s: &SetCondition, (rule, i, j): (NfRule, usize, usize)) -> SetCondition {
    match rule {
        NfRule::Merge => {
            let e = &s.elems()[i];
            let w = e.word.ends_with(&[Letter::Zero]).expect("merge redex");
            s.replace(&[i, j], vec![Elementary::new(e.base.clone(), w)])
        }
        NfRule::AnnihilateLeft | NfRule::AnnihilateRight => s.replace(&[i, j], vec![]),
    }
}

/// Normal form under the literal rules: `--` deletion first, then merges
/// and annihilations to a fixpoint. `choose` picks which of the `n` available redexes
/// to rewrite next.
pub fn normal_form_with(s: &SetCondition, choose: &mut dyn FnMut(usize) -> usize) -> SetCondition {
    let mut cur = SetCondition::new(
        s.elems()
            .iter()
            .map(|e| Elementary::new(e.base.clone(), e.word.reduced()))
            .collect(),
    );
    loop {
        let redexes = nf_redexes(&cur);
        if redexes.is_empty() {
            return cur;
        }
        let k = choose(redexes.len()) % redexes.len();
        cur = apply_nf_redex(&cur, redexes[k]);
    }
}

pub fn normal_form(s: &SetCondition) -> SetCondition {
    normal_form_with(s, &mut |_| 0)
}

/// Which equational theory a canonical form is taken in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theory {
    /// All condition laws.
    Full,
    /// Only the symmetric laws: no copy merging or splitting, no annihilation.
    Direct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlgebraConfig {
    pub limit: usize,
    pub bracket_ext: bool,
    pub unsafe_mode: bool,
}

impl Default for AlgebraConfig {
    fn default() -> Self {
        AlgebraConfig {
            limit: 3,
            bracket_ext: false,
            unsafe_mode: false,
        }
    }
}

/// Canonical representative of a condition's class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCondition(pub SetCondition);

impl CanonicalCondition {
    pub fn is_neutral(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_condition(&self) -> Condition {
        self.0.to_condition()
    }
}

impl fmt::Display for CanonicalCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One step of the unrestricted-mode derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemoStep {
    pub from: Condition,
    pub to: Condition,
    pub law: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnsafeDemo {
    /// `AA⁻ = … = I`
    pub annihilation: Vec<DemoStep>,
    /// `A⁰ = … = A¹`
    pub collapse: Vec<DemoStep>,
    /// Both ends of the collapse are already `I`.
    pub degenerate: bool,
}

type ClosureKey = (Theory, SetCondition, usize);

/// The condition algebra at a fixed limit, with memoised canonical forms.
pub struct Algebra {
    cfg: AlgebraConfig,
    canon: DashMap<ClosureKey, SetCondition>,
    reps: DashMap<(Theory, SetCondition, usize, usize), Vec<SetCondition>>,
    intro_pairs: DashMap<usize, Vec<(Word, Word)>>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra").field("cfg", &self.cfg).finish()
    }
}

impl Algebra {
    pub fn new(cfg: AlgebraConfig) -> Self {
        assert!(cfg.limit >= 3, "limit must be at least 3");
        Algebra {
            cfg,
            canon: DashMap::new(),
            reps: DashMap::new(),
            intro_pairs: DashMap::new(),
        }
    }

    pub fn config(&self) -> AlgebraConfig {
        self.cfg
    }

    pub fn limit(&self) -> usize {
        self.cfg.limit
    }

    /// Limited and, outside unsafe mode, with unique exponents.
    pub fn check_condition(&self, c: &Condition) -> Result<()> {
        if !c.is_limited(self.cfg.limit) {
            return Err(CnError::SizeLimitExceeded {
                size: c.size(),
                limit: self.cfg.limit,
            });
        }
        if !self.cfg.unsafe_mode && !has_unique_exponents(c.into()) {
            return Err(CnError::ExponentClash);
        }
        Ok(())
    }

    fn set_ok(&self, s: &SetCondition) -> bool {
        s.is_limited(self.cfg.limit) && (self.cfg.unsafe_mode || s.has_unique_exponents())
    }

    /// The interpretation `int` into set conditions, normalising after
    /// products and inverses. Brackets become opaque bases.
    pub fn to_set_condition(&self, c: &Condition) -> Result<SetCondition> {
        self.check_condition(c)?;
        Ok(self.interpret(c))
    }

    fn interpret(&self, c: &Condition) -> SetCondition {
        match c {
            Condition::Var(v) => SetCondition::new(vec![Elementary::new(Base::Var(v.clone()), Word::empty())]),
            Condition::Atom(a) => SetCondition::new(vec![Elementary::new(Base::Atom(a.clone()), Word::empty())]),
            Condition::Neutral => SetCondition::empty(),
            Condition::Product(a, b) => {
                normal_form(&SetCondition::union(&self.interpret(a), &self.interpret(b)))
            }
            Condition::Inverse(a) => normal_form(&Self::push_plain(&self.interpret(a), Letter::Minus)),
            Condition::Copy0(a) => Self::push_plain(&self.interpret(a), Letter::Zero),
            Condition::Copy1(a) => Self::push_plain(&self.interpret(a), Letter::One),
            Condition::Bracket(a) => {
                let inner = self.interpret(a);
                if inner.is_empty() {
                    SetCondition::empty()
                } else {
                    SetCondition::new(vec![Elementary::new(Base::Bracket(Box::new(inner)), Word::empty())])
                }
            }
        }
    }

    fn push_plain(s: &SetCondition, l: Letter) -> SetCondition {
        SetCondition::new(
            s.elems()
                .iter()
                .map(|e| Elementary::new(e.base.clone(), e.word.appended(l)))
                .collect(),
        )
    }

    /// Syntactic bound on exponent-word length: unary operators on any path.
    fn syntactic_word_len(c: &Condition) -> usize {
        match c {
            Condition::Var(_) | Condition::Atom(_) | Condition::Neutral => 0,
            Condition::Product(a, b) => Self::syntactic_word_len(a).max(Self::syntactic_word_len(b)),
            Condition::Inverse(a) | Condition::Copy0(a) | Condition::Copy1(a) => {
                1 + Self::syntactic_word_len(a)
            }
            Condition::Bracket(a) => Self::syntactic_word_len(a),
        }
    }

    /// Flattens a condition into a set condition with canonical bracket contents.
    fn flatten(&self, c: &Condition, theory: Theory, max_len: usize) -> SetCondition {
        match c {
            Condition::Var(_) | Condition::Atom(_) | Condition::Neutral => self.interpret(c),
            Condition::Product(a, b) => SetCondition::union(
                &self.flatten(a, theory, max_len),
                &self.flatten(b, theory, max_len),
            ),
            Condition::Inverse(a) => self.push_letter(&self.flatten(a, theory, max_len), Letter::Minus, theory, max_len),
            Condition::Copy0(a) => self.push_letter(&self.flatten(a, theory, max_len), Letter::Zero, theory, max_len),
            Condition::Copy1(a) => self.push_letter(&self.flatten(a, theory, max_len), Letter::One, theory, max_len),
            Condition::Bracket(a) => {
                let inner = self.flatten(a, theory, max_len);
                self.bracket_of(inner, Word::empty(), theory, max_len)
            }
        }
    }

    fn bracket_of(&self, content: SetCondition, word: Word, theory: Theory, max_len: usize) -> SetCondition {
        let content = self.closure_min(content, theory, max_len);
        if content.is_empty() {
            SetCondition::empty()
        } else {
            SetCondition::new(vec![Elementary::new(Base::Bracket(Box::new(content)), word)])
        }
    }

    fn push_letter(&self, s: &SetCondition, l: Letter, theory: Theory, max_len: usize) -> SetCondition {
        let mut out = Vec::new();
        for e in s.elems() {
            match &e.base {
                Base::Bracket(inner) if self.cfg.bracket_ext => {
                    let pushed = self.push_letter(inner, l, theory, max_len);
                    out.extend(self.bracket_of(pushed, e.word.clone(), theory, max_len).elems);
                }
                _ => out.push(Elementary::new(e.base.clone(), e.word.appended(l))),
            }
        }
        SetCondition::new(out)
    }

    fn better(a: &SetCondition, b: &SetCondition) -> bool {
        (a.size(), a.total_word_len(), a) < (b.size(), b.total_word_len(), b)
    }

    /// Least state of the bounded class of `start`.
    fn closure_min(&self, start: SetCondition, theory: Theory, max_len: usize) -> SetCondition {
        let key = (theory, start.clone(), max_len);
        if let Some(v) = self.canon.get(&key) {
            return v.clone();
        }
        let mut seen: HashSet<SetCondition> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start.clone());
        let mut best = start;
        let mut capped = false;
        while let Some(s) = queue.pop_front() {
            if Self::better(&s, &best) {
                best = s.clone();
            }
            if capped {
                continue;
            }
            for n in self.moves(&s, theory, max_len) {
                if seen.len() >= CLOSURE_CAP {
                    capped = true;
                    break;
                }
                if seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
        }
        if capped {
            self.canon.insert(key, best.clone());
        } else {
            for s in seen {
                self.canon.insert((theory, s, max_len), best.clone());
            }
        }
        best
    }

    /// Single law applications from `s` that stay well-formed.
    fn moves(&self, s: &SetCondition, theory: Theory, max_len: usize) -> Vec<SetCondition> {
        let limit = self.cfg.limit;
        let elems = s.elems();
        let n = elems.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&elems[i], &elems[j]);
                if theory == Theory::Full && a.base == b.base {
                    for w in merged_words(&a.word, &b.word) {
                        out.push(s.replace(&[i, j], vec![Elementary::new(a.base.clone(), w)]));
                    }
                    if annihilating(&a.word, &b.word) {
                        out.push(s.replace(&[i, j], vec![]));
                    }
                }
                if let (Base::Bracket(ca), Base::Bracket(cb)) = (&a.base, &b.base) {
                    if a.word == b.word {
                        if let Some(union) = self.mergeable(ca, cb, theory, max_len) {
                            let merged = self.bracket_of(union, a.word.clone(), theory, max_len);
                            out.push(s.replace(&[i, j], merged.elems));
                        }
                    }
                }
            }
        }
        for i in 0..n {
            let e = &elems[i];
            if theory == Theory::Full && n < limit {
                for (w0, w1) in split_words(&e.word, max_len) {
                    out.push(s.replace(
                        &[i],
                        vec![Elementary::new(e.base.clone(), w0), Elementary::new(e.base.clone(), w1)],
                    ));
                }
            }
            if let Base::Bracket(content) = &e.base {
                if n < limit && content.len() >= 2 {
                    for (p, q) in bipartitions(content) {
                        let p = self.closure_min(p, theory, max_len);
                        let q = self.closure_min(q, theory, max_len);
                        if p.is_empty() || q.is_empty() {
                            continue;
                        }
                        out.push(s.replace(
                            &[i],
                            vec![
                                Elementary::new(Base::Bracket(Box::new(p)), e.word.clone()),
                                Elementary::new(Base::Bracket(Box::new(q)), e.word.clone()),
                            ],
                        ));
                    }
                }
            }
        }
        if theory == Theory::Full && n + 2 <= limit {
            let mut bases: Vec<&Base> = elems.iter().map(|e| &e.base).collect();
            bases.dedup();
            let pairs = self.intro_pairs(max_len);
            for base in bases {
                for (w0, w1) in pairs.iter() {
                    out.push(s.replace(
                        &[],
                        vec![Elementary::new(base.clone(), w0.clone()), Elementary::new(base.clone(), w1.clone())],
                    ));
                }
            }
        }
        out.retain(|t| self.set_ok(t));
        out
    }

    /// A well-formed product of members of the classes of `a` and `b`.
    fn mergeable(&self, a: &SetCondition, b: &SetCondition, theory: Theory, max_len: usize) -> Option<SetCondition> {
        let union = SetCondition::union(a, b);
        if self.set_ok(&union) {
            return Some(union);
        }
        let limit = self.cfg.limit;
        for ka in 1..limit {
            for ra in self.representations_at(a, theory, ka, max_len) {
                for kb in 1..=limit - ka {
                    for rb in self.representations_at(b, theory, kb, max_len) {
                        let union = SetCondition::union(&ra, &rb);
                        if self.set_ok(&union) {
                            return Some(union);
                        }
                    }
                }
            }
        }
        None
    }

    /// All annihilating word pairs `(p a s, p ā toggle(s))` of length at most `max_len`.
    fn intro_pairs(&self, max_len: usize) -> Vec<(Word, Word)> {
        if let Some(v) = self.intro_pairs.get(&max_len) {
            return v.clone();
        }
        let words = reduced_words(max_len.saturating_sub(1));
        let mut out = Vec::new();
        for p in &words {
            for s in &words {
                if p.len() + 1 + s.len() > max_len {
                    continue;
                }
                for a in [Letter::Zero, Letter::One] {
                    let w0 = Word::concat(&[p.letters(), &[a], s.letters()]);
                    let w1 = Word::concat(&[p.letters(), &[a.flipped()], &toggled(s.letters())]);
                    if w1.len() <= max_len && w0 < w1 {
                        out.push((w0, w1));
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        self.intro_pairs.insert(max_len, out.clone());
        out
    }

    fn canonical_set(&self, c: &Condition, theory: Theory, max_len: usize) -> SetCondition {
        let flat = self.flatten(c, theory, max_len);
        self.closure_min(flat, theory, max_len)
    }

    fn default_len(c: &Condition) -> usize {
        Self::syntactic_word_len(c) + WORD_SLACK
    }

    pub fn canonicalize(&self, c: &Condition) -> Result<CanonicalCondition> {
        self.check_condition(c)?;
        Ok(CanonicalCondition(self.canonical_set(c, Theory::Full, Self::default_len(c))))
    }

    /// Canonical form with an explicit exponent-word bound.
    pub fn canonicalize_bounded(&self, c: &Condition, max_len: usize) -> Result<CanonicalCondition> {
        self.check_condition(c)?;
        Ok(CanonicalCondition(self.canonical_set(c, Theory::Full, max_len)))
    }

    /// Canonical form under the symmetric laws only.
    pub fn canonicalize_direct(&self, c: &Condition) -> Result<CanonicalCondition> {
        self.check_condition(c)?;
        Ok(CanonicalCondition(self.canonical_set(c, Theory::Direct, Self::default_len(c))))
    }

    /// Canonical form in the given theory.
    pub fn canonical_in(&self, c: &Condition, theory: Theory) -> Result<CanonicalCondition> {
        self.check_condition(c)?;
        Ok(CanonicalCondition(self.canonical_set(c, theory, Self::default_len(c))))
    }

    /// Members of the class of `s` with exactly `size` elements. In the
    /// direct theory, copy splitting is the only non-symmetric move.
    pub fn representations(&self, s: &SetCondition, theory: Theory, size: usize) -> Vec<SetCondition> {
        self.representations_at(s, theory, size, s.max_word_len() + WORD_SLACK)
    }

    fn representations_at(&self, s: &SetCondition, theory: Theory, size: usize, max_len: usize) -> Vec<SetCondition> {
        let key = (theory, s.clone(), size, max_len);
        if let Some(v) = self.reps.get(&key) {
            return v.clone();
        }
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        let mut out = Vec::new();
        seen.insert(s.clone());
        queue.push_back(s.clone());
        while let Some(cur) = queue.pop_front() {
            if cur.len() == size {
                out.push(cur.clone());
            }
            let mut next = self.moves(&cur, theory, max_len);
            if theory == Theory::Direct && cur.len() < self.cfg.limit {
                for (i, e) in cur.elems().iter().enumerate() {
                    for (w0, w1) in split_words(&e.word, max_len) {
                        let split = cur.replace(
                            &[i],
                            vec![Elementary::new(e.base.clone(), w0), Elementary::new(e.base.clone(), w1)],
                        );
                        if self.set_ok(&split) {
                            next.push(split);
                        }
                    }
                }
            }
            for n in next {
                if seen.len() >= CLOSURE_CAP {
                    break;
                }
                if seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
        }
        out.sort();
        self.reps.insert(key, out.clone());
        out
    }

    /// Canonical condition term, falling back to `c` for ill-formed input.
    pub fn normalize(&self, c: &Condition, theory: Theory) -> Condition {
        if self.check_condition(c).is_err() {
            return c.clone();
        }
        self.canonical_set(c, theory, Self::default_len(c)).to_condition()
    }

    pub fn cond_equal(&self, a: &Condition, b: &Condition) -> Result<bool> {
        self.check_condition(a)?;
        self.check_condition(b)?;
        if a == b {
            return Ok(true);
        }
        let len = Self::default_len(a).max(Self::default_len(b));
        Ok(self.canonical_set(a, Theory::Full, len) == self.canonical_set(b, Theory::Full, len))
    }

    /// `a` rewrites to `b` without annihilation and using `A = A⁰A¹` only
    /// as a split.
    pub fn cond_equal_direct(&self, a: &Condition, b: &Condition) -> Result<bool> {
        self.check_condition(a)?;
        self.check_condition(b)?;
        let len = Self::default_len(a).max(Self::default_len(b));
        let target = self.canonical_set(b, Theory::Direct, len);
        let start = self.canonical_set(a, Theory::Direct, len);
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(s) = queue.pop_front() {
            if s == target {
                return Ok(true);
            }
            if s.size() >= target.size().max(1) + 1 || seen.len() > CLOSURE_CAP {
                continue;
            }
            for (i, e) in s.elems().iter().enumerate() {
                if s.size() >= self.cfg.limit {
                    break;
                }
                for (w0, w1) in split_words(&e.word, len) {
                    let split = s.replace(
                        &[i],
                        vec![Elementary::new(e.base.clone(), w0), Elementary::new(e.base.clone(), w1)],
                    );
                    if !self.set_ok(&split) {
                        continue;
                    }
                    let split = self.closure_min(split, Theory::Direct, len);
                    if seen.insert(split.clone()) {
                        queue.push_back(split);
                    }
                }
            }
        }
        Ok(false)
    }

    pub fn is_neutral(&self, c: &Condition) -> Result<bool> {
        Ok(self.canonicalize(c)?.is_neutral())
    }

    /// `AB` when the product is limited and keeps unique exponents.
    pub fn cond_product(&self, a: &Condition, b: &Condition) -> Result<Condition> {
        let p = Condition::product(a.clone(), b.clone());
        self.check_condition(&p)?;
        Ok(p)
    }

    /// The derivation of `A⁰ = A¹` that opens up once unique exponents are
    /// no longer enforced.
    pub fn unsafe_closure_demo(&self, a: &Condition) -> Result<UnsafeDemo> {
        if !self.cfg.unsafe_mode {
            return Err(CnError::Refused(
                "the collapse derivation needs unsafe mode (unique-exponent checks disabled)".into(),
            ));
        }
        let a0 = || a.clone().copy0();
        let a1 = || a.clone().copy1();
        let a0m = || a.clone().copy0().inv();
        let a1m = || a.clone().copy1().inv();
        let prod = Condition::product;
        let i = || Condition::Neutral;

        let split = prod(a0(), a1());
        let chain1 = [
            (prod(a.clone(), a.clone().inv()), ""),
            (prod(split.clone(), split.clone().inv()), "A = A⁰A¹"),
            (prod(prod(a0(), a1()), prod(a0m(), a1m())), "(AB)⁻ = A⁻B⁻"),
            (prod(prod(a0(), a1m()), prod(a1(), a0m())), "associativity, commutativity"),
            (prod(i(), i()), "A⁰A¹⁻ = I, A¹A⁰⁻ = I"),
            (i(), "AI = A"),
        ];
        let chain2 = [
            (a0(), ""),
            (prod(a0(), i()), "AI = A"),
            (prod(a0(), prod(a1(), a0m())), "A¹A⁰⁻ = I"),
            (prod(prod(a0(), a0m()), a1()), "associativity, commutativity"),
            (prod(i(), a1()), "AA⁻ = I (first chain, at A⁰)"),
            (a1(), "AI = A"),
        ];
        let steps = |chain: &[(Condition, &'static str)]| {
            chain
                .windows(2)
                .map(|w| DemoStep {
                    from: w[0].0.clone(),
                    to: w[1].0.clone(),
                    law: w[1].1,
                })
                .collect::<Vec<_>>()
        };
        let degenerate = self.interpret(&a0()).is_empty() && self.interpret(&a1()).is_empty();
        Ok(UnsafeDemo {
            annihilation: steps(&chain1),
            collapse: steps(&chain2),
            degenerate,
        })
    }
}

/// Strips brackets around a single unexponentiated element, `⟨A⟩ ↦ A`,
/// as allowed for the condition of a constructor.
pub fn unwrap_brackets(mut s: SetCondition) -> SetCondition {
    loop {
        match s.elems() {
            [Elementary {
                base: Base::Bracket(inner),
                word,
            }] if word.is_empty() && inner.len() == 1 => {
                s = (**inner).clone();
            }
            _ => return s,
        }
    }
}

/// Words `w s` for each split of the pair into `w 0 s` / `w 1 s`.
fn merged_words(x: &Word, y: &Word) -> Vec<Word> {
    let (a, b) = (x.letters(), y.letters());
    if a.len() != b.len() {
        return vec![];
    }
    let mut out = Vec::new();
    for k in 0..a.len() {
        if a[k].is_bit() && b[k].is_bit() && a[k] != b[k] && a[..k] == b[..k] && a[k + 1..] == b[k + 1..] {
            out.push(Word::concat(&[&a[..k], &a[k + 1..]]));
        }
    }
    out
}

/// `x = p a s` and `y = p ā toggle(s)` for some split.
fn annihilating(x: &Word, y: &Word) -> bool {
    let (a, b) = (x.letters(), y.letters());
    (0..a.len()).any(|k| {
        a[k].is_bit()
            && b.len() > k
            && b[..k] == a[..k]
            && b[k] == a[k].flipped()
            && b[k + 1..] == toggled(&a[k + 1..])[..]
    })
}

/// All `(w 0 s, w 1 s)` for `w s = word`, within the length bound.
fn split_words(word: &Word, max_len: usize) -> Vec<(Word, Word)> {
    if word.len() + 1 > max_len {
        return vec![];
    }
    let l = word.letters();
    let mut out: Vec<(Word, Word)> = (0..=l.len())
        .map(|k| {
            (
                Word::concat(&[&l[..k], &[Letter::Zero], &l[k..]]),
                Word::concat(&[&l[..k], &[Letter::One], &l[k..]]),
            )
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn bipartitions(s: &SetCondition) -> Vec<(SetCondition, SetCondition)> {
    let n = s.len();
    let mut out = Vec::new();
    // fix element 0 on the left so each unordered split appears once
    for mask in 0..(1u32 << n) {
        if mask & 1 == 0 || mask == (1u32 << n) - 1 {
            continue;
        }
        let (mut p, mut q) = (Vec::new(), Vec::new());
        for (i, e) in s.elems().iter().enumerate() {
            if mask & (1 << i) != 0 {
                p.push(e.clone());
            } else {
                q.push(e.clone());
            }
        }
        out.push((SetCondition::new(p), SetCondition::new(q)));
    }
    out
}

/// Reduced words over `0`, `1`, `-` of length at most `n`.
fn reduced_words(n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &frontier {
            for l in [Letter::Zero, Letter::One, Letter::Minus] {
                if l == Letter::Minus && w.letters().last() == Some(&Letter::Minus) {
                    continue;
                }
                let mut v = w.letters().to_vec();
                v.push(l);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg() -> Algebra {
        Algebra::new(AlgebraConfig::default())
    }

    fn x() -> Condition {
        Condition::var("X")
    }

    fn y() -> Condition {
        Condition::var("Y")
    }

    fn el(base: &str, w: &str) -> Elementary {
        Elementary::new(Base::Var(base.into()), Word::parse(w))
    }

    #[test]
    fn interpretation_examples() {
        let a = alg();
        assert!(a.to_set_condition(&Condition::Neutral).unwrap().is_empty());
        let s = a
            .to_set_condition(&Condition::product(x().copy0(), x().copy1()))
            .unwrap();
        assert_eq!(s, SetCondition::new(vec![el("X", "")]));
        let s = a
            .to_set_condition(&Condition::product(x().copy0(), x().copy1().inv()))
            .unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn literal_normal_form_examples() {
        let s = SetCondition::new(vec![el("X", "--0")]);
        assert_eq!(normal_form(&s), SetCondition::new(vec![el("X", "0")]));
        let s = SetCondition::new(vec![el("X", "1"), el("X", "0-")]);
        assert!(normal_form(&s).is_empty());
        let s = SetCondition::new(vec![el("X", "0"), el("Y", "1")]);
        assert_eq!(normal_form(&s), s);
    }

    #[test]
    fn equality_examples() {
        let a = alg();
        let big_a = Condition::atom("a");
        assert!(a
            .cond_equal(&Condition::product(big_a.clone().copy0(), big_a.clone().copy1()), &big_a)
            .unwrap());
        assert!(a
            .cond_equal(
                &Condition::product(big_a.clone().copy1(), big_a.clone().copy0().inv()),
                &Condition::Neutral
            )
            .unwrap());
        assert!(!a.cond_equal(&x().copy0(), &x().copy1()).unwrap());
    }

    #[test]
    fn distributed_inverse_merges() {
        // X^{0-} X^{1-} = (X^0 X^1)^- = X^-
        let a = alg();
        let lhs = Condition::product(x().copy0().inv(), x().copy1().inv());
        assert!(a.cond_equal(&lhs, &x().inv()).unwrap());
    }

    #[test]
    fn equality_across_copy_levels() {
        // X^{01} = X^0 X^{1-0}
        let a = alg();
        let lhs = x().copy0().copy1();
        let rhs = Condition::product(x().copy0(), x().copy1().inv().copy0());
        assert!(a.cond_equal(&lhs, &rhs).unwrap());
    }

    #[test]
    fn direct_equality_examples() {
        let a = alg();
        let big_a = Condition::atom("a");
        let annihilating = Condition::product(big_a.clone().copy0(), big_a.clone().copy1().inv());
        assert!(!a.cond_equal_direct(&annihilating, &Condition::Neutral).unwrap());
        assert!(a
            .cond_equal_direct(&Condition::product(x(), y()), &Condition::product(y(), x()))
            .unwrap());
        assert!(a.cond_equal_direct(&big_a, &big_a).unwrap());
        // splitting is allowed, merging is not
        let split = Condition::product(x().copy0(), x().copy1());
        assert!(a.cond_equal_direct(&x(), &split).unwrap());
        assert!(!a.cond_equal_direct(&split, &x()).unwrap());
    }

    #[test]
    fn products() {
        let a = alg();
        assert!(a.cond_product(&x().copy0(), &x().copy1()).is_ok());
        assert_eq!(a.cond_product(&x(), &x().inv()), Err(CnError::ExponentClash));
        let big = Condition::product(x(), y());
        assert!(matches!(
            a.cond_product(&big, &Condition::product(Condition::atom("a"), Condition::atom("b"))),
            Err(CnError::SizeLimitExceeded { .. })
        ));
    }

    #[test]
    fn canonical_examples() {
        let a = alg();
        assert!(a.canonicalize(&Condition::Neutral).unwrap().is_neutral());
        let c = a
            .canonicalize(&Condition::product(Condition::Neutral.copy0(), x()))
            .unwrap();
        assert_eq!(c, a.canonicalize(&x()).unwrap());
        let joined = Condition::product(x(), y()).bracket();
        let split = Condition::product(x().bracket(), y().bracket());
        assert_eq!(a.canonicalize(&joined).unwrap(), a.canonicalize(&split).unwrap());
        assert!(a.is_neutral(&Condition::Neutral.bracket()).unwrap());
    }

    #[test]
    fn bracket_merge_respects_limit() {
        let a = alg();
        let inner = Condition::product(x(), y());
        let joined = Condition::product(inner.clone(), Condition::atom("a")).bracket();
        let split = Condition::product(inner.bracket(), Condition::atom("a").bracket());
        assert!(a.cond_equal(&joined, &split).unwrap());
        let four = Condition::product(
            Condition::product(x(), y()).bracket(),
            Condition::product(Condition::atom("a"), Condition::atom("b")).bracket(),
        );
        // merged content would have size 4
        let c = a.canonicalize(&four).unwrap();
        assert_eq!(c.0.len(), 2);
    }

    #[test]
    fn bracket_extension_flag() {
        let plain = alg();
        let ext = Algebra::new(AlgebraConfig {
            bracket_ext: true,
            ..AlgebraConfig::default()
        });
        let lhs = x().bracket().inv();
        let rhs = x().inv().bracket();
        assert!(!plain.cond_equal(&lhs, &rhs).unwrap());
        assert!(ext.cond_equal(&lhs, &rhs).unwrap());
    }

    #[test]
    fn unsafe_demo() {
        assert!(matches!(alg().unsafe_closure_demo(&x()), Err(CnError::Refused(_))));
        let a = Algebra::new(AlgebraConfig {
            unsafe_mode: true,
            ..AlgebraConfig::default()
        });
        let demo = a.unsafe_closure_demo(&x()).unwrap();
        assert_eq!(demo.annihilation[0].from, Condition::product(x(), x().inv()));
        assert_eq!(demo.annihilation.last().unwrap().to, Condition::Neutral);
        assert_eq!(demo.collapse[0].from, x().copy0());
        assert_eq!(demo.collapse.last().unwrap().to, x().copy1());
        assert!(!demo.degenerate);
        assert!(a.unsafe_closure_demo(&Condition::Neutral).unwrap().degenerate);
        for chain in [&demo.annihilation, &demo.collapse] {
            for w in chain.windows(2) {
                assert_eq!(w[0].to, w[1].from);
            }
        }
    }

    #[test]
    fn reduced_word_counts() {
        // 1, 3, 8 words of length 0, 1, 2
        assert_eq!(reduced_words(2).len(), 12);
        assert!(reduced_words(3).iter().all(Word::is_reduced));
    }
}

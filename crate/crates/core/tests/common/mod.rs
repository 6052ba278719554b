//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use cn_core::{Condition, Engine, NumberTerm};
use rand::Rng;

/// Base of an elementary factor; a bracket holds its closed content.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OBase {
    Var(String),
    Atom(String),
    Br(Vec<(OBase, String)>),
}

/// Sorted multiset of `base^word`, words over `0`, `1`, `-` read innermost first.
pub type OState = Vec<(OBase, String)>;

fn reduce_word(w: &str) -> String {
    let mut s = w.to_string();
    while s.contains("--") {
        s = s.replace("--", "");
    }
    s
}

fn sorted(mut v: OState) -> OState {
    v.sort();
    v
}

pub fn state_to_condition(s: &OState) -> Condition {
    let elem = |(b, w): &(OBase, String)| {
        let mut c = match b {
            OBase::Var(v) => Condition::var(v),
            OBase::Atom(a) => Condition::atom(a),
            OBase::Br(inner) => Condition::bracket(state_to_condition(inner)),
        };
        for ch in w.chars() {
            c = match ch {
                '0' => c.copy0(),
                '1' => c.copy1(),
                _ => c.inv(),
            };
        }
        c
    };
    match s.len() {
        0 => Condition::Neutral,
        _ => Condition::product_of(s.iter().map(elem)),
    }
}

fn word_depth(c: &Condition) -> usize {
    match c {
        Condition::Var(_) | Condition::Atom(_) | Condition::Neutral => 0,
        Condition::Product(a, b) => word_depth(a).max(word_depth(b)),
        Condition::Inverse(a) | Condition::Copy0(a) | Condition::Copy1(a) => 1 + word_depth(a),
        Condition::Bracket(a) => word_depth(a),
    }
}

/// Breadth-first closure of a condition under the laws of the condition
/// algebra, applied as rewrites in both directions, with bounded exponent
/// words. Two conditions are equal iff their closures meet.
pub struct CondOracle<'a> {
    pub engine: &'a Engine,
    pub slack: usize,
    pub cap: usize,
    memo: HashMap<(OState, usize), OState>,
    members_memo: HashMap<(OState, usize), Vec<OState>>,
}

impl<'a> CondOracle<'a> {
    pub fn new(engine: &'a Engine) -> Self {
        CondOracle {
            engine,
            slack: 2,
            cap: 100_000,
            memo: HashMap::new(),
            members_memo: HashMap::new(),
        }
    }

    fn ok(&self, s: &OState) -> bool {
        self.engine.algebra().check_condition(&state_to_condition(s)).is_ok()
    }

    pub fn flatten(&mut self, c: &Condition, len: usize) -> OState {
        match c {
            Condition::Var(v) => vec![(OBase::Var(v.clone()), String::new())],
            Condition::Atom(a) => vec![(OBase::Atom(a.clone()), String::new())],
            Condition::Neutral => vec![],
            Condition::Product(a, b) => {
                let mut v = self.flatten(a, len);
                v.extend(self.flatten(b, len));
                sorted(v)
            }
            Condition::Inverse(a) => self.suffix(a, '-', len),
            Condition::Copy0(a) => self.suffix(a, '0', len),
            Condition::Copy1(a) => self.suffix(a, '1', len),
            Condition::Bracket(a) => {
                let inner = self.flatten(a, len);
                let inner = self.min_of(inner, len);
                if inner.is_empty() {
                    vec![]
                } else {
                    vec![(OBase::Br(inner), String::new())]
                }
            }
        }
    }

    fn suffix(&mut self, a: &Condition, l: char, len: usize) -> OState {
        sorted(
            self.flatten(a, len)
                .into_iter()
                .map(|(b, w)| (b, reduce_word(&format!("{w}{l}"))))
                .collect(),
        )
    }

    fn rank(s: &OState) -> (usize, usize, OState) {
        fn words(s: &OState) -> usize {
            s.iter()
                .map(|(b, w)| {
                    w.len()
                        + match b {
                            OBase::Br(inner) => words(inner),
                            _ => 0,
                        }
                })
                .sum()
        }
        (s.len(), words(s), s.clone())
    }

    pub fn closure(&mut self, start: OState, len: usize) -> (HashSet<OState>, bool) {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(s) = queue.pop_front() {
            for n in self.neighbours(&s, len) {
                if seen.len() >= self.cap {
                    return (seen, false);
                }
                if seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
        }
        (seen, true)
    }

    fn min_of(&mut self, start: OState, len: usize) -> OState {
        if let Some(v) = self.memo.get(&(start.clone(), len)) {
            return v.clone();
        }
        let (seen, _) = self.closure(start.clone(), len);
        let best = seen.into_iter().min_by_key(Self::rank).unwrap();
        self.memo.insert((start, len), best.clone());
        best
    }

    /// Members of the bounded class of a bracket content.
    fn members(&mut self, content: &OState, len: usize) -> Vec<OState> {
        if let Some(v) = self.members_memo.get(&(content.clone(), len)) {
            return v.clone();
        }
        let (seen, _) = self.closure(content.clone(), len);
        let mut v: Vec<OState> = seen.into_iter().collect();
        v.sort_by_key(Self::rank);
        self.members_memo.insert((content.clone(), len), v.clone());
        v
    }

    fn remove(s: &OState, idx: &[usize], add: Vec<(OBase, String)>) -> OState {
        let mut v: OState = s
            .iter()
            .enumerate()
            .filter(|(i, _)| !idx.contains(i))
            .map(|(_, e)| e.clone())
            .collect();
        v.extend(add);
        sorted(v)
    }

    fn neighbours(&mut self, s: &OState, len: usize) -> Vec<OState> {
        let limit = self.engine.config().limit;
        let n = s.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || s[i].0 != s[j].0 {
                    continue;
                }
                let (a, b) = (s[i].1.as_bytes(), s[j].1.as_bytes());
                for k in 0..a.len() {
                    // (A⁰A¹)^v = A^v at prefix u
                    if a[k] == b'0'
                        && a.len() == b.len()
                        && b[k] == b'1'
                        && a[..k] == b[..k]
                        && a[k + 1..] == b[k + 1..]
                    {
                        let w = format!("{}{}", &s[i].1[..k], &s[i].1[k + 1..]);
                        out.push(Self::remove(s, &[i, j], vec![(s[i].0.clone(), w)]));
                    }
                    // (A⁰A¹⁻)^v = I at prefix u
                    if a[k] == b'0' {
                        let partner = reduce_word(&format!("{}1-{}", &s[i].1[..k], &s[i].1[k + 1..]));
                        if partner == s[j].1 {
                            out.push(Self::remove(s, &[i, j], vec![]));
                        }
                    }
                }
            }
        }
        for i in 0..n {
            let (b, w) = &s[i];
            if n < limit && w.len() < len {
                for k in 0..=w.len() {
                    let w0 = format!("{}0{}", &w[..k], &w[k..]);
                    let w1 = format!("{}1{}", &w[..k], &w[k..]);
                    out.push(Self::remove(s, &[i], vec![(b.clone(), w0), (b.clone(), w1)]));
                }
            }
            if let OBase::Br(content) = b {
                for j in i + 1..n {
                    if let OBase::Br(other) = &s[j].0 {
                        if s[j].1 == *w {
                            let (ms, mo) = if content.len() + other.len() <= limit && {
                                let mut u = content.clone();
                                u.extend(other.iter().cloned());
                                self.ok(&sorted(u))
                            } {
                                (vec![content.clone()], vec![other.clone()])
                            } else {
                                (self.members(content, len), self.members(other, len))
                            };
                            let union = ms.iter().flat_map(|p| mo.iter().map(move |q| (p, q))).find_map(|(p, q)| {
                                let mut u = p.clone();
                                u.extend(q.iter().cloned());
                                let u = sorted(u);
                                (u.len() <= limit && self.ok(&u)).then_some(u)
                            });
                            if let Some(u) = union {
                                let u = self.min_of(u, len);
                                let add = if u.is_empty() { vec![] } else { vec![(OBase::Br(u), w.clone())] };
                                out.push(Self::remove(s, &[i, j], add));
                            }
                        }
                    }
                }
                if n < limit && content.len() >= 2 {
                    for mask in 1..(1u32 << content.len()) - 1 {
                        if mask & 1 == 0 {
                            continue;
                        }
                        let (mut p, mut q) = (Vec::new(), Vec::new());
                        for (t, e) in content.iter().enumerate() {
                            if mask & (1 << t) != 0 {
                                p.push(e.clone());
                            } else {
                                q.push(e.clone());
                            }
                        }
                        let p = self.min_of(sorted(p), len);
                        let q = self.min_of(sorted(q), len);
                        if p.is_empty() || q.is_empty() {
                            continue;
                        }
                        out.push(Self::remove(
                            s,
                            &[i],
                            vec![(OBase::Br(p), w.clone()), (OBase::Br(q), w.clone())],
                        ));
                    }
                }
            }
        }
        if n + 2 <= limit {
            let bases: BTreeSet<OBase> = s.iter().map(|(b, _)| b.clone()).collect();
            let words = all_words(len.saturating_sub(1));
            for b in &bases {
                for u in &words {
                    for v in &words {
                        let w0 = reduce_word(&format!("{u}0{v}"));
                        let w1 = reduce_word(&format!("{u}1-{v}"));
                        if w0.len() <= len && w1.len() <= len {
                            out.push(Self::remove(s, &[], vec![(b.clone(), w0), (b.clone(), w1)]));
                        }
                    }
                }
            }
        }
        out.retain(|t| self.ok(t));
        out
    }

    fn bound(c: &Condition) -> usize {
        word_depth(c) + 2
    }

    /// Least element of the bounded class of `c`.
    pub fn canon(&mut self, c: &Condition) -> OState {
        let len = Self::bound(c);
        let flat = self.flatten(c, len);
        self.min_of(flat, len)
    }

    pub fn equal(&mut self, a: &Condition, b: &Condition) -> bool {
        let len = Self::bound(a).max(Self::bound(b));
        let fa = self.flatten(a, len);
        let fb = self.flatten(b, len);
        self.min_of(fa, len) == self.min_of(fb, len)
    }
}

fn all_words(n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..n {
        let next: Vec<String> = layer
            .iter()
            .flat_map(|w| ["0", "1", "-"].map(|l| format!("{w}{l}")))
            .filter(|w| !w.contains("--"))
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Random condition of depth at most `depth` over `X`, `Y`, `a`, `b`.
pub fn random_condition<R: Rng>(rng: &mut R, depth: usize) -> Condition {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..9) {
            0..=2 => Condition::var("X"),
            3..=4 => Condition::var("Y"),
            5..=6 => Condition::atom("a"),
            7 => Condition::atom("b"),
            _ => Condition::Neutral,
        };
    }
    let sub = |rng: &mut R| random_condition(rng, depth - 1);
    match rng.gen_range(0..6) {
        0 => Condition::product(sub(rng), sub(rng)),
        1 => sub(rng).inv(),
        2 => sub(rng).copy0(),
        3 => sub(rng).copy1(),
        4 => sub(rng).bracket(),
        _ => Condition::product(sub(rng).copy0(), sub(rng).copy1()),
    }
}

/// A well-formed random condition, retrying until the engine accepts one.
pub fn random_wf_condition<R: Rng>(rng: &mut R, engine: &Engine, depth: usize) -> Condition {
    loop {
        let c = random_condition(rng, depth);
        if engine.algebra().check_condition(&c).is_ok() {
            return c;
        }
    }
}

/// One constructor of a constructor number, outermost first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layer {
    Suc(OState),
    Ann(OState, OState),
}

/// A constructor number as layers over a zero condition.
pub type ONum = (Vec<Layer>, OState);

/// Breadth-first closure of a constructor number under the exchange laws,
/// constructor brackets, condition equality and forward inversion-simplification.
pub struct SmoothOracle<'a> {
    pub conds: CondOracle<'a>,
}

impl<'a> SmoothOracle<'a> {
    pub fn new(engine: &'a Engine) -> Self {
        SmoothOracle {
            conds: CondOracle::new(engine),
        }
    }

    /// Canonical slot: closed, with single-element brackets stripped.
    fn slot(&mut self, c: &Condition) -> OState {
        let mut s = self.conds.canon(c);
        loop {
            match s.as_slice() {
                [(OBase::Br(inner), w)] if w.is_empty() && inner.len() == 1 => s = inner.clone(),
                _ => return s,
            }
        }
    }

    pub fn lift(&mut self, a: &NumberTerm) -> ONum {
        let mut layers = Vec::new();
        let mut t = a;
        loop {
            match t {
                NumberTerm::Suc(c, b) => {
                    layers.push(Layer::Suc(self.slot(c)));
                    t = b;
                }
                NumberTerm::Ann(c, d, b) => {
                    layers.push(Layer::Ann(self.slot(c), self.slot(d)));
                    t = b;
                }
                NumberTerm::Zero(c) => return (layers, self.slot(c)),
                other => panic!("not a constructor number: {other:?}"),
            }
        }
    }

    fn cancels(&mut self, p: &OState, n: &OState) -> bool {
        let c = Condition::product(state_to_condition(p), state_to_condition(n).inv());
        let len = word_depth(&c) + 2;
        let flat = self.conds.flatten(&c, len);
        self.conds.min_of(flat, len).is_empty()
    }

    fn neighbours(&mut self, (layers, z): &ONum) -> Vec<ONum> {
        let mut out = Vec::new();
        for k in 0..layers.len() {
            if let Layer::Ann(p, n) = &layers[k] {
                if self.cancels(p, n) {
                    let mut v = layers.clone();
                    v.remove(k);
                    out.push((v, z.clone()));
                }
            }
            if k + 1 == layers.len() {
                continue;
            }
            let (outer, inner) = (&layers[k], &layers[k + 1]);
            let mut swaps = vec![(inner.clone(), outer.clone())];
            match (outer, inner) {
                (Layer::Ann(a0, a1), Layer::Ann(b0, b1)) => {
                    swaps.push((Layer::Ann(a0.clone(), b1.clone()), Layer::Ann(b0.clone(), a1.clone())));
                }
                (Layer::Suc(a), Layer::Ann(b0, b1)) => {
                    swaps.push((Layer::Suc(b0.clone()), Layer::Ann(a.clone(), b1.clone())));
                }
                _ => {}
            }
            for (o, i) in swaps {
                let mut v = layers.clone();
                v[k] = o;
                v[k + 1] = i;
                out.push((v, z.clone()));
            }
        }
        out
    }

    pub fn closure(&mut self, a: &NumberTerm, cap: usize) -> (HashSet<ONum>, bool) {
        let start = self.lift(a);
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(s) = queue.pop_front() {
            for n in self.neighbours(&s) {
                if seen.len() >= cap {
                    return (seen, false);
                }
                if seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
        }
        (seen, true)
    }

    /// `a ≃ b` when erasure runs forward from both sides and they meet.
    pub fn equal(&mut self, a: &NumberTerm, b: &NumberTerm) -> bool {
        let (ca, _) = self.closure(a, 50_000);
        let (cb, _) = self.closure(b, 50_000);
        ca.iter().any(|x| cb.contains(x))
    }
}

/// Random constructor number with `n` constructors over the given atoms.
pub fn random_constructor<R: Rng>(rng: &mut R, engine: &Engine, n: usize, atoms: &[&str]) -> NumberTerm {
    loop {
        let pick = |rng: &mut R| {
            let a = Condition::atom(atoms[rng.gen_range(0..atoms.len())]);
            match rng.gen_range(0..5) {
                0 => a.copy0(),
                1 => a.copy1(),
                2 => a.copy1().inv(),
                _ => a,
            }
        };
        let mut t = NumberTerm::zero(pick(rng));
        for _ in 0..n {
            t = if rng.gen_bool(0.5) {
                NumberTerm::suc(pick(rng), t)
            } else {
                NumberTerm::ann(pick(rng), pick(rng), t)
            };
        }
        if engine.is_well_formed_number(&t) {
            return t;
        }
    }
}

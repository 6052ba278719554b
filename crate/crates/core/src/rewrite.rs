//! Programs, rule matching and the equality-reduction searches.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::algebra::{Base, Elementary, Theory};
use crate::error::{CnError, Result};
use crate::par;
use crate::smooth::{for_each_site, ConstructorClassKey};
use crate::term::{typecheck, CnType, Condition, NumberTerm, Position, TypeEnv};
use crate::{Engine, Verdict};

static WF_VIOLATIONS: AtomicUsize = AtomicUsize::new(0);

/// Ill-formed states produced by any search in this process so far.
pub fn wf_violations() -> usize {
    WF_VIOLATIONS.load(Ordering::Relaxed)
}

/// Condition slot of a left-side constructor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CondPattern {
    Var(String),
    /// `⟨X₁ … Xⱼ⟩`
    Bracket(Vec<String>),
}

impl CondPattern {
    pub fn vars(&self) -> Vec<&str> {
        match self {
            CondPattern::Var(v) => vec![v],
            CondPattern::Bracket(vs) => vs.iter().map(String::as_str).collect(),
        }
    }

    pub fn to_condition(&self) -> Condition {
        match self {
            CondPattern::Var(v) => Condition::var(v),
            CondPattern::Bracket(vs) => Condition::product_of(vs.iter().map(|v| Condition::var(v))).bracket(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Var(String),
    Zero(CondPattern),
    Suc(CondPattern, Box<Pattern>),
    Ann(CondPattern, CondPattern, Box<Pattern>),
}

impl Pattern {
    pub fn to_term(&self) -> NumberTerm {
        match self {
            Pattern::Var(x) => NumberTerm::var(x),
            Pattern::Zero(c) => NumberTerm::zero(c.to_condition()),
            Pattern::Suc(c, p) => NumberTerm::suc(c.to_condition(), p.to_term()),
            Pattern::Ann(c, d, p) => NumberTerm::ann(c.to_condition(), d.to_condition(), p.to_term()),
        }
    }

    fn collect(&self, nums: &mut Vec<String>, conds: &mut Vec<String>, suc_like: &mut Vec<String>) {
        match self {
            Pattern::Var(x) => nums.push(x.clone()),
            Pattern::Zero(c) => conds.extend(c.vars().into_iter().map(String::from)),
            Pattern::Suc(c, p) => {
                for v in c.vars() {
                    conds.push(v.into());
                    suc_like.push(v.into());
                }
                p.collect(nums, conds, suc_like);
            }
            Pattern::Ann(c, d, p) => {
                for v in c.vars().into_iter().chain(d.vars()) {
                    conds.push(v.into());
                    suc_like.push(v.into());
                }
                p.collect(nums, conds, suc_like);
            }
        }
    }
}

/// `f(a₁,…,aₙ) ⟶ b`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub function: String,
    pub lhs: Vec<Pattern>,
    pub rhs: NumberTerm,
}

impl Rule {
    pub fn lhs_term(&self) -> NumberTerm {
        NumberTerm::app(&self.function, self.lhs.iter().map(Pattern::to_term).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Function {
    pub inputs: usize,
    pub outputs: usize,
    pub rules: Vec<Rule>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub functions: BTreeMap<String, Function>,
}

impl Program {
    pub fn declare(&mut self, name: &str, inputs: usize, outputs: usize) {
        self.functions.entry(name.to_string()).or_insert(Function {
            inputs,
            outputs,
            rules: Vec::new(),
        });
    }

    pub fn add_rule(&mut self, rule: Rule) -> Result<()> {
        let f = self
            .functions
            .get_mut(&rule.function)
            .ok_or_else(|| CnError::UndeclaredFunction(rule.function.clone()))?;
        f.rules.push(rule);
        Ok(())
    }

    pub fn function(&self, name: &str) -> Result<&Function> {
        self.functions
            .get(name)
            .ok_or_else(|| CnError::UndeclaredFunction(name.to_string()))
    }

    /// Union of two programs; functions of `other` replace those of `self`.
    pub fn merged(&self, other: &Program) -> Program {
        let mut p = self.clone();
        for (k, v) in &other.functions {
            p.functions.insert(k.clone(), v.clone());
        }
        p
    }

    pub fn type_env(&self) -> TypeEnv {
        self.functions
            .iter()
            .map(|(k, f)| (k.clone(), CnType::Arrow(f.inputs, f.outputs)))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IssueKind {
    Arity,
    LeftLinearity,
    BracketPattern,
    FreeVariable,
    AtomName,
    AnnCondition,
    RightSide,
    Typing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Issue {
    pub function: String,
    /// 1-based rule index within the function.
    pub rule: usize,
    pub position: Option<Position>,
    pub kind: IssueKind,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rule {}", self.function, self.rule)?;
        if let Some(p) = &self.position {
            write!(f, " at {p}")?;
        }
        write!(f, ": {:?}: {}", self.kind, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
    /// Overlapping left sides; allowed, reported only.
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Images of number and condition variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution {
    pub nums: BTreeMap<String, NumberTerm>,
    pub conds: BTreeMap<String, Condition>,
}

impl Substitution {
    pub fn apply(&self, t: &NumberTerm) -> NumberTerm {
        let conds: HashMap<String, Condition> = self.conds.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let mapped = t.map_conditions(&mut |c| c.substitute(&conds));
        self.apply_nums(&mapped)
    }

    fn apply_nums(&self, t: &NumberTerm) -> NumberTerm {
        use NumberTerm as N;
        match t {
            N::Var(x) => self.nums.get(x).cloned().unwrap_or_else(|| t.clone()),
            N::Zero(_) => t.clone(),
            N::Suc(c, b) => N::suc(c.clone(), self.apply_nums(b)),
            N::Ann(c, d, b) => N::ann(c.clone(), d.clone(), self.apply_nums(b)),
            N::Tuple(items) => N::Tuple(items.iter().map(|i| self.apply_nums(i)).collect()),
            N::Proj(i, b) => N::proj(*i, self.apply_nums(b)),
            N::CondApp(c, b) => N::cond_app(c.clone(), self.apply_nums(b)),
            N::Copy0(b) => self.apply_nums(b).copy0(),
            N::Copy1(b) => self.apply_nums(b).copy1(),
            N::App(f, items) => N::App(f.clone(), items.iter().map(|i| self.apply_nums(i)).collect()),
        }
    }
}

/// How a left side is matched against a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Matching {
    /// Literal structure only.
    Syntactic,
    /// Condition slots matched up to the theory and constructor brackets.
    Modulo(Theory),
}

/// Which reduction is explored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reduction {
    /// `⟶`
    Equality,
    /// `⟼`
    Direct,
}

impl Reduction {
    fn theory(self) -> Theory {
        match self {
            Reduction::Equality => Theory::Full,
            Reduction::Direct => Theory::Direct,
        }
    }
}

/// Key of a constructor value: one class key per component.
pub type ValueKey = Vec<ConstructorClassKey>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachResult {
    /// Reached constructor values by class, with the first representative found.
    pub classes: BTreeMap<ValueKey, NumberTerm>,
    /// The reachable state space was exhausted within the budget.
    pub complete: bool,
    pub states: usize,
    pub steps: usize,
    /// States dropped for exceeding the constructor budget.
    pub pruned: usize,
    pub wf_violations: usize,
}

impl ReachResult {
    pub fn keys(&self) -> BTreeSet<ValueKey> {
        self.classes.keys().cloned().collect()
    }
}

pub const EQUALITY_WARNING: &str =
    "equality of numbers is only meaningful for programs whose reversed rules are consistent";

fn product_factors(c: &Condition) -> Vec<&Condition> {
    match c {
        Condition::Product(a, b) => {
            let mut v = product_factors(a);
            v.extend(product_factors(b));
            v
        }
        _ => vec![c],
    }
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head.clone());
            out.push(p);
        }
    }
    out
}

fn rhs_atoms(t: &NumberTerm) -> Vec<String> {
    fn walk(c: &Condition, out: &mut Vec<String>) {
        match c {
            Condition::Atom(a) => out.push(a.clone()),
            Condition::Var(_) | Condition::Neutral => {}
            Condition::Product(a, b) => {
                walk(a, out);
                walk(b, out);
            }
            Condition::Inverse(a) | Condition::Copy0(a) | Condition::Copy1(a) | Condition::Bracket(a) => {
                walk(a, out)
            }
        }
    }
    let mut out = Vec::new();
    for c in t.all_conditions() {
        walk(c, &mut out);
    }
    out
}

fn cond_vars(c: &Condition, out: &mut Vec<String>) {
    match c {
        Condition::Var(v) => out.push(v.clone()),
        Condition::Atom(_) | Condition::Neutral => {}
        Condition::Product(a, b) => {
            cond_vars(a, out);
            cond_vars(b, out);
        }
        Condition::Inverse(a) | Condition::Copy0(a) | Condition::Copy1(a) | Condition::Bracket(a) => {
            cond_vars(a, out)
        }
    }
}

fn num_vars(t: &NumberTerm, out: &mut Vec<String>) {
    use NumberTerm as N;
    match t {
        N::Var(x) => out.push(x.clone()),
        N::Zero(_) => {}
        N::Suc(_, b) | N::Ann(_, _, b) | N::Proj(_, b) | N::CondApp(_, b) | N::Copy0(b) | N::Copy1(b) => {
            num_vars(b, out)
        }
        N::Tuple(items) | N::App(_, items) => items.iter().for_each(|i| num_vars(i, out)),
    }
}

/// Positions of `ann` constructors in a number term.
fn ann_sites(t: &NumberTerm) -> Vec<(Position, Condition, Condition)> {
    let mut out = Vec::new();
    for_each_site(t, &Position::root(), false, &|n| n, &mut |s, pos, _, _| {
        if let NumberTerm::Ann(c, d, _) = s {
            out.push((pos.clone(), c.clone(), d.clone()));
        }
    });
    out
}

/// The left sides could match a common term.
fn overlaps(a: &[Pattern], b: &[Pattern]) -> bool {
    fn unify(p: &Pattern, q: &Pattern) -> bool {
        match (p, q) {
            (Pattern::Var(_), _) | (_, Pattern::Var(_)) => true,
            (Pattern::Zero(_), Pattern::Zero(_)) => true,
            (Pattern::Suc(_, p), Pattern::Suc(_, q)) | (Pattern::Ann(_, _, p), Pattern::Ann(_, _, q)) => unify(p, q),
            _ => false,
        }
    }
    a.len() == b.len() && a.iter().zip(b).all(|(p, q)| unify(p, q))
}

impl Engine {
    /// Checks the rule format of every rule in `p`.
    pub fn validate_program(&self, p: &Program) -> ValidationReport {
        let mut report = ValidationReport::default();
        let env_fns = p.type_env();
        for (name, f) in &p.functions {
            let mut atoms_seen: HashMap<String, usize> = HashMap::new();
            for (k, rule) in f.rules.iter().enumerate() {
                let mut issue = |kind, position: Option<Position>, message: String| {
                    report.issues.push(Issue {
                        function: name.clone(),
                        rule: k + 1,
                        position,
                        kind,
                        message,
                    })
                };
                if rule.lhs.len() != f.inputs {
                    issue(
                        IssueKind::Arity,
                        None,
                        format!("{} arguments, declared {}", rule.lhs.len(), f.inputs),
                    );
                }
                let (mut nums, mut conds, mut suc_like) = (Vec::new(), Vec::new(), Vec::new());
                for pat in &rule.lhs {
                    pat.collect(&mut nums, &mut conds, &mut suc_like);
                    check_bracket_patterns(pat, &mut |m| issue(IssueKind::BracketPattern, None, m));
                }
                let mut all: Vec<&String> = nums.iter().chain(conds.iter()).collect();
                all.sort();
                for w in all.windows(2) {
                    if w[0] == w[1] {
                        issue(IssueKind::LeftLinearity, None, format!("variable {} repeated", w[0]));
                    }
                }
                let (mut rn, mut rc) = (Vec::new(), Vec::new());
                num_vars(&rule.rhs, &mut rn);
                for c in rule.rhs.all_conditions() {
                    cond_vars(c, &mut rc);
                }
                for x in rn.iter().filter(|x| !nums.contains(x)) {
                    issue(IssueKind::FreeVariable, None, format!("number variable {x} not on the left"));
                }
                for x in rc.iter().filter(|x| !conds.contains(x)) {
                    issue(IssueKind::FreeVariable, None, format!("condition variable {x} not on the left"));
                }
                for a in rhs_atoms(&rule.rhs) {
                    let ok = a
                        .strip_prefix(name.as_str())
                        .is_some_and(|i| !i.is_empty() && i.chars().all(|c| c.is_ascii_digit()));
                    if !ok {
                        issue(IssueKind::AtomName, None, format!("atom {a} is not of the form {name}i"));
                    } else if let Some(prev) = atoms_seen.insert(a.clone(), k + 1) {
                        if prev != k + 1 {
                            issue(IssueKind::AtomName, None, format!("atom {a} also used in rule {prev}"));
                        }
                    }
                }
                for (pos, c, d) in ann_sites(&rule.rhs) {
                    for x in [&c, &d] {
                        match x {
                            Condition::Var(v) if suc_like.contains(v) => {}
                            _ => issue(
                                IssueKind::AnnCondition,
                                Some(pos.clone()),
                                format!("ann condition {x:?} is not a variable of a left suc or ann"),
                            ),
                        }
                    }
                }
                let mut env: TypeEnv = env_fns.clone();
                for x in &nums {
                    env.insert(x.clone(), CnType::Num);
                }
                match typecheck(&rule.rhs, &env) {
                    Ok(t) if t == CnType::tuple(f.outputs) => {}
                    Ok(t) => issue(IssueKind::Typing, None, format!("right side has type {t}")),
                    Err(e) => issue(IssueKind::Typing, None, e.to_string()),
                }
                if let Err(e) = self.check_number(&rule.rhs) {
                    issue(IssueKind::RightSide, None, e.to_string());
                }
            }
            for i in 0..f.rules.len() {
                for j in i + 1..f.rules.len() {
                    if overlaps(&f.rules[i].lhs, &f.rules[j].lhs) {
                        report
                            .warnings
                            .push(format!("{name}: rules {} and {} overlap", i + 1, j + 1));
                    }
                }
            }
        }
        report
    }

    /// Substitutions making the left side of `r` syntactically equal to `args`.
    pub fn match_rule(&self, r: &Rule, args: &[NumberTerm]) -> Vec<Substitution> {
        self.match_args(r, args, Matching::Syntactic)
    }

    fn match_args(&self, r: &Rule, args: &[NumberTerm], mode: Matching) -> Vec<Substitution> {
        if r.lhs.len() != args.len() {
            return vec![];
        }
        let mut subs = vec![Substitution::default()];
        for (p, a) in r.lhs.iter().zip(args) {
            subs = subs
                .into_iter()
                .flat_map(|s| self.match_pattern(p, a, s, mode))
                .collect();
            if subs.is_empty() {
                break;
            }
        }
        let mut seen = HashSet::new();
        subs.retain(|s| seen.insert(s.clone()));
        subs.retain(|s| {
            let instance = NumberTerm::app(&r.function, r.lhs.iter().map(|p| s.apply(&p.to_term())).collect());
            self.is_well_formed_number(&instance)
        });
        subs
    }

    fn match_pattern(&self, p: &Pattern, t: &NumberTerm, s: Substitution, mode: Matching) -> Vec<Substitution> {
        match (p, t) {
            (Pattern::Var(x), _) => {
                let mut s = s;
                s.nums.insert(x.clone(), t.clone());
                vec![s]
            }
            (Pattern::Zero(cp), NumberTerm::Zero(c)) => self.match_cond(cp, c, s, mode),
            (Pattern::Suc(cp, p), NumberTerm::Suc(c, b)) => self
                .match_cond(cp, c, s, mode)
                .into_iter()
                .flat_map(|s| self.match_pattern(p, b, s, mode))
                .collect(),
            (Pattern::Ann(cp, dp, p), NumberTerm::Ann(c, d, b)) => self
                .match_cond(cp, c, s, mode)
                .into_iter()
                .flat_map(|s| self.match_cond(dp, d, s, mode))
                .flat_map(|s| self.match_pattern(p, b, s, mode))
                .collect(),
            _ => vec![],
        }
    }

    fn match_cond(&self, cp: &CondPattern, c: &Condition, s: Substitution, mode: Matching) -> Vec<Substitution> {
        let bind = |vals: Vec<Condition>, vars: &[String]| {
            let mut s = s.clone();
            for (v, c) in vars.iter().zip(vals) {
                s.conds.insert(v.clone(), c);
            }
            s
        };
        match (cp, mode) {
            (CondPattern::Var(x), Matching::Syntactic) => {
                if c.size() == 1 {
                    vec![bind(vec![c.clone()], std::slice::from_ref(x))]
                } else {
                    vec![]
                }
            }
            (CondPattern::Var(x), Matching::Modulo(_)) => vec![
                bind(vec![c.clone()], std::slice::from_ref(x)),
                bind(vec![c.clone().bracket()], std::slice::from_ref(x)),
            ],
            (CondPattern::Bracket(vars), Matching::Syntactic) => match c {
                Condition::Bracket(inner) => {
                    let factors = product_factors(inner);
                    if factors.len() == vars.len() && factors.iter().all(|f| f.size() == 1) {
                        vec![bind(factors.into_iter().cloned().collect(), vars)]
                    } else {
                        vec![]
                    }
                }
                _ => vec![],
            },
            (CondPattern::Bracket(vars), Matching::Modulo(theory)) => {
                let Some(slot) = self.slot_set(c, theory) else {
                    return vec![];
                };
                let content = match slot.elems() {
                    [Elementary {
                        base: Base::Bracket(inner),
                        word,
                    }] if word.is_empty() => (**inner).clone(),
                    _ => slot,
                };
                let mut out = Vec::new();
                for rep in self.alg.representations(&content, theory, vars.len()) {
                    let elems: Vec<Condition> = rep.elems().iter().map(Elementary::to_condition).collect();
                    for perm in permutations(&elems) {
                        out.push(bind(perm, vars));
                    }
                }
                out
            }
        }
    }

    /// Terms obtained by rewriting one application in `a` with one rule,
    /// matching syntactically.
    pub fn rule_step_neighbors(&self, p: &Program, a: &NumberTerm) -> Result<BTreeSet<NumberTerm>> {
        self.check_number(a)?;
        Ok(self
            .rule_steps(p, a, Matching::Syntactic)
            .into_iter()
            .filter(|t| self.is_well_formed_number(t))
            .collect())
    }

    fn rule_steps(&self, p: &Program, a: &NumberTerm, mode: Matching) -> Vec<NumberTerm> {
        let mut out = Vec::new();
        for_each_site(a, &Position::root(), false, &|n| n, &mut |t, _, _, ctx| {
            if let NumberTerm::App(f, args) = t {
                if let Some(func) = p.functions.get(f) {
                    for rule in &func.rules {
                        for s in self.match_args(rule, args, mode) {
                            out.push(ctx(s.apply(&rule.rhs)));
                        }
                    }
                }
            }
        });
        out
    }

    /// Successor states of a normalised search state.
    fn expand_state(&self, p: &Program, s: &NumberTerm, red: Reduction, violations: &AtomicUsize) -> Vec<NumberTerm> {
        if s.is_constructor_value() {
            return vec![];
        }
        let theory = red.theory();
        let mut raw = self.rule_steps(p, s, Matching::Modulo(theory));
        raw.extend(self.exchange_neighbors(s, true));
        if red == Reduction::Equality {
            raw.extend(self.erasure_neighbors(s, true));
        }
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for r in raw {
            let n = self.normalize_state(&r, theory);
            if !self.is_well_formed_number(&n) {
                violations.fetch_add(1, Ordering::Relaxed);
                WF_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
                continue;
            }
            if seen.insert(n.clone()) {
                out.push(n);
            }
        }
        out
    }

    /// Class key of a constructor value.
    pub(crate) fn value_key(&self, t: &NumberTerm) -> Option<ValueKey> {
        match t {
            NumberTerm::Tuple(items) => items.iter().map(|i| self.class_key(i)).collect(),
            _ => self.class_key(t).map(|k| vec![k]),
        }
    }

    /// Class key of a well-formed constructor value.
    pub fn constructor_value_key(&self, t: &NumberTerm) -> Result<ValueKey> {
        self.check_number(t)?;
        let n = self.normalize_state(t, Theory::Full);
        if !n.is_constructor_value() {
            return Err(CnError::NotConstructorNumber);
        }
        self.value_key(&n).ok_or(CnError::NotConstructorNumber)
    }

    fn search(
        &self,
        p: &Program,
        a: &NumberTerm,
        red: Reduction,
        target: Option<&NumberTerm>,
    ) -> Result<(ReachResult, bool)> {
        self.check_number(a)?;
        let theory = red.theory();
        let violations = AtomicUsize::new(0);
        let start = self.normalize_state(a, theory);
        let target_key = target.and_then(|t| {
            let n = self.normalize_state(t, Theory::Full);
            if n.is_constructor_value() {
                self.value_key(&n)
            } else {
                None
            }
        });
        let target_state = target.map(|t| self.normalize_state(t, theory));
        let mut result = ReachResult {
            classes: BTreeMap::new(),
            complete: true,
            states: 0,
            steps: 0,
            pruned: 0,
            wf_violations: 0,
        };
        let mut seen: HashSet<NumberTerm> = HashSet::new();
        seen.insert(start.clone());
        let mut frontier = vec![start];
        let mut found = false;
        'levels: while !frontier.is_empty() {
            for s in &frontier {
                if target_state.as_ref() == Some(s) {
                    found = true;
                }
                if s.is_constructor_value() {
                    if let Some(k) = self.value_key(s) {
                        if target_key.as_ref() == Some(&k) {
                            found = true;
                        }
                        result.classes.entry(k).or_insert_with(|| s.clone());
                    }
                }
            }
            if found {
                result.complete = false;
                break;
            }
            let expansions = par::map(self.cfg.exec, &frontier, |s| self.expand_state(p, s, red, &violations));
            let mut next = Vec::new();
            for ns in expansions {
                for n in ns {
                    result.steps += 1;
                    if n.constructor_count() > self.cfg.max_term_size {
                        result.pruned += 1;
                        result.complete = false;
                        continue;
                    }
                    if seen.contains(&n) {
                        continue;
                    }
                    if seen.len() >= self.cfg.max_states {
                        result.complete = false;
                        break 'levels;
                    }
                    seen.insert(n.clone());
                    next.push(n);
                }
            }
            frontier = next;
        }
        result.states = seen.len();
        result.wf_violations = violations.load(Ordering::Relaxed);
        Ok((result, found))
    }

    /// Constructor values reachable from `a` under `⟶`, grouped by class.
    pub fn reach_normal_forms(&self, p: &Program, a: &NumberTerm) -> Result<ReachResult> {
        Ok(self.search(p, a, Reduction::Equality, None)?.0)
    }

    /// Constructor values reachable from `a` under `⟼`, grouped by `≃`-class.
    pub fn direct_reach(&self, p: &Program, a: &NumberTerm) -> Result<ReachResult> {
        Ok(self.search(p, a, Reduction::Direct, None)?.0)
    }

    pub fn reach(&self, p: &Program, a: &NumberTerm, red: Reduction) -> Result<ReachResult> {
        Ok(self.search(p, a, red, None)?.0)
    }

    /// `a ⟶ b` found within the budget.
    pub fn reaches(&self, p: &Program, a: &NumberTerm, b: &NumberTerm) -> Result<Verdict> {
        self.check_number(b)?;
        let (_, found) = self.search(p, a, Reduction::Equality, Some(b))?;
        Ok(if found { Verdict::True } else { Verdict::Unknown })
    }

    /// `a ⟶ b` and `b ⟶ a`; never `False`, since failing to find a path
    /// proves nothing. See [`EQUALITY_WARNING`].
    pub fn numbers_equal(&self, p: &Program, a: &NumberTerm, b: &NumberTerm) -> Result<Verdict> {
        let forward = self.reaches(p, a, b)?;
        let backward = self.reaches(p, b, a)?;
        Ok(forward.and(backward))
    }
}

fn check_bracket_patterns(p: &Pattern, report: &mut dyn FnMut(String)) {
    let check = |c: &CondPattern, report: &mut dyn FnMut(String)| {
        if let CondPattern::Bracket(vs) = c {
            if vs.len() < 2 {
                report(format!("bracket pattern with {} variables", vs.len()));
            }
        }
    };
    match p {
        Pattern::Var(_) => {}
        Pattern::Zero(c) => check(c, report),
        Pattern::Suc(c, q) => {
            check(c, report);
            check_bracket_patterns(q, report);
        }
        Pattern::Ann(c, d, q) => {
            check(c, report);
            check(d, report);
            check_bracket_patterns(q, report);
        }
    }
}

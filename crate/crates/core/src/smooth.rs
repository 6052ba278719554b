//! Smooth equality `≃` on number terms.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::algebra::{unwrap_brackets, SetCondition, Theory};
use crate::error::{CnError, Result};
use crate::term::{
    constructor_condition_positions, exponentiated_subterm, has_unique_exponents, Condition, NumberTerm,
    Position, Term,
};
use crate::{Engine, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Law {
    ConditionEquality,
    /// `(A suc)(B suc)a ≃ (B suc)(A suc)a`
    SucSuc,
    /// `(A₀,A₁ ann)(B suc)a ≃ (B suc)(A₀,A₁ ann)a`
    AnnSuc,
    /// `(A₀,A₁ ann)(B₀,B₁ ann)a ≃ (B₀,B₁ ann)(A₀,A₁ ann)a`
    AnnAnn,
    /// `(A₀,A₁ ann)(B₀,B₁ ann)a ≃ (A₀,B₁ ann)(B₀,A₁ ann)a`
    AnnCross,
    /// `(A suc)(B₀,B₁ ann)a ≃ (B₀ suc)(A,B₁ ann)a`
    SucAnn,
    CopyDistribution,
    ConstructorBracket,
    TupleSelection,
    CopyExpansion,
    InversionSimplification,
}

impl Law {
    /// Whether both directions of the law are enumerated.
    pub fn is_symmetric(self) -> bool {
        !matches!(
            self,
            Law::ConditionEquality | Law::TupleSelection | Law::CopyExpansion | Law::InversionSimplification
        )
    }

    pub fn is_exchange(self) -> bool {
        matches!(self, Law::SucSuc | Law::AnnSuc | Law::AnnAnn | Law::AnnCross | Law::SucAnn)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SmoothStep {
    pub law: Law,
    pub position: Position,
    pub direction: Direction,
}

impl fmt::Display for SmoothStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.direction {
            Direction::Forward => "→",
            Direction::Backward => "←",
        };
        write!(f, "{:?} {dir} at {}", self.law, self.position)
    }
}

/// Invariant of a constructor number under the exchange laws, constructor
/// brackets and inversion-simplification.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstructorClassKey {
    pub zero: SetCondition,
    /// `suc` conditions and first `ann` conditions, sorted.
    pub positive: Vec<SetCondition>,
    /// Second `ann` conditions, sorted.
    pub negative: Vec<SetCondition>,
    pub sucs: usize,
    pub anns: usize,
}

impl ConstructorClassKey {
    /// A constructor number with this key: the `ann`s innermost, then the `suc`s.
    pub fn representative(&self) -> NumberTerm {
        let mut t = NumberTerm::zero(self.zero.to_condition());
        let split = self.positive.len() - self.anns;
        for (p, n) in self.positive[split..].iter().zip(&self.negative) {
            t = NumberTerm::ann(p.to_condition(), n.to_condition(), t);
        }
        for p in &self.positive[..split] {
            t = NumberTerm::suc(p.to_condition(), t);
        }
        t
    }
}

pub(crate) type Rebuild<'a> = &'a dyn Fn(NumberTerm) -> NumberTerm;

/// Visits every number subterm with its position, a function putting a
/// replacement back into the whole term, and whether it lies inside the
/// arguments of a function application.
pub(crate) fn for_each_site(
    a: &NumberTerm,
    pos: &Position,
    in_app: bool,
    ctx: Rebuild<'_>,
    visit: &mut dyn FnMut(&NumberTerm, &Position, bool, Rebuild<'_>),
) {
    use NumberTerm as N;
    visit(a, pos, in_app, ctx);
    match a {
        N::Var(_) | N::Zero(_) => {}
        N::Suc(c, b) => for_each_site(b, &pos.child(2), in_app, &|n| ctx(N::Suc(c.clone(), Box::new(n))), visit),
        N::Ann(c, d, b) => for_each_site(
            b,
            &pos.child(3),
            in_app,
            &|n| ctx(N::Ann(c.clone(), d.clone(), Box::new(n))),
            visit,
        ),
        N::Proj(i, b) => for_each_site(b, &pos.child(1), in_app, &|n| ctx(N::Proj(*i, Box::new(n))), visit),
        N::CondApp(c, b) => {
            for_each_site(b, &pos.child(2), in_app, &|n| ctx(N::CondApp(c.clone(), Box::new(n))), visit)
        }
        N::Copy0(b) => for_each_site(b, &pos.child(1), in_app, &|n| ctx(N::Copy0(Box::new(n))), visit),
        N::Copy1(b) => for_each_site(b, &pos.child(1), in_app, &|n| ctx(N::Copy1(Box::new(n))), visit),
        N::Tuple(items) => {
            for (k, item) in items.iter().enumerate() {
                let rebuild = |n| {
                    let mut v = items.clone();
                    v[k] = n;
                    ctx(N::Tuple(v))
                };
                for_each_site(item, &pos.child(k + 1), in_app, &rebuild, visit);
            }
        }
        N::App(f, items) => {
            for (k, item) in items.iter().enumerate() {
                let rebuild = |n| {
                    let mut v = items.clone();
                    v[k] = n;
                    ctx(N::App(f.clone(), v))
                };
                for_each_site(item, &pos.child(k + 1), true, &rebuild, visit);
            }
        }
    }
}

/// Pushes every number-level copy inward onto the conditions it reaches.
pub fn copy_push_term(a: &NumberTerm) -> NumberTerm {
    use NumberTerm as N;
    match a {
        N::Var(_) | N::Zero(_) => a.clone(),
        N::Suc(c, b) => N::suc(c.clone(), copy_push_term(b)),
        N::Ann(c, d, b) => N::ann(c.clone(), d.clone(), copy_push_term(b)),
        N::Tuple(items) => N::Tuple(items.iter().map(copy_push_term).collect()),
        N::Proj(i, b) => N::proj(*i, copy_push_term(b)),
        N::CondApp(c, b) => N::cond_app(c.clone(), copy_push_term(b)),
        N::Copy0(b) => push_copy(copy_push_term(b), 0),
        N::Copy1(b) => push_copy(copy_push_term(b), 1),
        N::App(f, items) => N::App(f.clone(), items.iter().map(copy_push_term).collect()),
    }
}

fn push_copy(a: NumberTerm, bit: u8) -> NumberTerm {
    use NumberTerm as N;
    match a {
        N::Zero(c) => N::Zero(c.copy(bit)),
        N::Suc(c, b) => N::suc(c.copy(bit), push_copy(*b, bit)),
        N::Ann(c, d, b) => N::ann(c.copy(bit), d.copy(bit), push_copy(*b, bit)),
        N::Tuple(items) => N::Tuple(items.into_iter().map(|i| push_copy(i, bit)).collect()),
        other => other.copy(bit),
    }
}

/// The exchange laws applicable at the root of `t`.
fn exchanges(t: &NumberTerm) -> Vec<(Law, Direction, NumberTerm)> {
    use NumberTerm as N;
    let mut out = Vec::new();
    match t {
        N::Suc(a, inner) => match inner.as_ref() {
            N::Suc(b, x) => out.push((
                Law::SucSuc,
                Direction::Forward,
                N::suc(b.clone(), N::suc(a.clone(), (**x).clone())),
            )),
            N::Ann(b0, b1, x) => {
                out.push((
                    Law::AnnSuc,
                    Direction::Backward,
                    N::ann(b0.clone(), b1.clone(), N::suc(a.clone(), (**x).clone())),
                ));
                out.push((
                    Law::SucAnn,
                    Direction::Forward,
                    N::suc(b0.clone(), N::ann(a.clone(), b1.clone(), (**x).clone())),
                ));
            }
            _ => {}
        },
        N::Ann(a0, a1, inner) => match inner.as_ref() {
            N::Suc(b, x) => out.push((
                Law::AnnSuc,
                Direction::Forward,
                N::suc(b.clone(), N::ann(a0.clone(), a1.clone(), (**x).clone())),
            )),
            N::Ann(b0, b1, x) => {
                out.push((
                    Law::AnnAnn,
                    Direction::Forward,
                    N::ann(b0.clone(), b1.clone(), N::ann(a0.clone(), a1.clone(), (**x).clone())),
                ));
                out.push((
                    Law::AnnCross,
                    Direction::Forward,
                    N::ann(a0.clone(), b1.clone(), N::ann(b0.clone(), a1.clone(), (**x).clone())),
                ));
            }
            _ => {}
        },
        _ => {}
    }
    out
}

fn strip_copy(c: &Condition, bit: u8) -> Option<&Condition> {
    match (c, bit) {
        (Condition::Copy0(x), 0) | (Condition::Copy1(x), 1) => Some(x),
        _ => None,
    }
}

fn strip_num_copy(a: &NumberTerm, bit: u8) -> Option<&NumberTerm> {
    match (a, bit) {
        (NumberTerm::Copy0(x), 0) | (NumberTerm::Copy1(x), 1) => Some(x),
        _ => None,
    }
}

/// Both directions of the copy-distribution equations at the root of `t`.
fn copy_distributions(t: &NumberTerm) -> Vec<(Direction, NumberTerm)> {
    use NumberTerm as N;
    let mut out = Vec::new();
    let inner_bit = match t {
        N::Copy0(x) => Some((x, 0)),
        N::Copy1(x) => Some((x, 1)),
        _ => None,
    };
    if let Some((x, bit)) = inner_bit {
        let pushed = match x.as_ref() {
            N::Zero(c) => Some(N::Zero(c.clone().copy(bit))),
            N::Suc(c, b) => Some(N::suc(c.clone().copy(bit), (**b).clone().copy(bit))),
            N::Ann(c, d, b) => Some(N::ann(c.clone().copy(bit), d.clone().copy(bit), (**b).clone().copy(bit))),
            N::Tuple(items) => Some(N::Tuple(items.iter().map(|i| i.clone().copy(bit)).collect())),
            _ => None,
        };
        out.extend(pushed.map(|p| (Direction::Forward, p)));
    }
    for bit in [0u8, 1] {
        let pulled = match t {
            N::Zero(c) => strip_copy(c, bit).map(|c| N::Zero(c.clone()).copy(bit)),
            N::Suc(c, b) => match (strip_copy(c, bit), strip_num_copy(b, bit)) {
                (Some(c), Some(b)) => Some(N::suc(c.clone(), b.clone()).copy(bit)),
                _ => None,
            },
            N::Ann(c, d, b) => match (strip_copy(c, bit), strip_copy(d, bit), strip_num_copy(b, bit)) {
                (Some(c), Some(d), Some(b)) => Some(N::ann(c.clone(), d.clone(), b.clone()).copy(bit)),
                _ => None,
            },
            N::Tuple(items) => items
                .iter()
                .map(|i| strip_num_copy(i, bit).cloned())
                .collect::<Option<Vec<_>>>()
                .map(|v| N::Tuple(v).copy(bit)),
            _ => None,
        };
        out.extend(pulled.map(|p| (Direction::Backward, p)));
    }
    out
}

/// Constructor-condition slots of the root node as (condition, rebuild).
fn constructor_slots(t: &NumberTerm) -> Vec<(Condition, Box<dyn Fn(Condition) -> NumberTerm + '_>)> {
    use NumberTerm as N;
    match t {
        N::Zero(c) => vec![(c.clone(), Box::new(N::Zero))],
        N::Suc(c, b) => vec![(c.clone(), Box::new(move |n| N::Suc(n, b.clone())))],
        N::Ann(c, d, b) => vec![
            (c.clone(), Box::new(move |n| N::Ann(n, d.clone(), b.clone()))),
            (d.clone(), Box::new(move |n| N::Ann(c.clone(), n, b.clone()))),
        ],
        _ => vec![],
    }
}

impl Engine {
    /// Unique exponents, every constructor condition of size 1 and not `I`,
    /// every condition limited.
    pub fn check_number(&self, a: &NumberTerm) -> Result<()> {
        if !self.cfg.unsafe_mode && !has_unique_exponents(a.into()) {
            return Err(CnError::IllFormed("no unique copy exponents".into()));
        }
        for c in a.all_conditions() {
            self.alg.check_condition(c)?;
        }
        for c in a.constructor_conditions() {
            if c.size() != 1 {
                return Err(CnError::IllFormed(format!("constructor condition of size {}", c.size())));
            }
            if self.alg.is_neutral(c)? {
                return Err(CnError::IllFormed("constructor condition equals I".into()));
            }
        }
        Ok(())
    }

    pub fn is_well_formed_number(&self, a: &NumberTerm) -> bool {
        self.check_number(a).is_ok()
    }

    /// Canonical set of a constructor condition, brackets around single
    /// elements removed.
    pub(crate) fn slot_set(&self, c: &Condition, theory: Theory) -> Option<SetCondition> {
        self.alg.canonical_in(c, theory).ok().map(|k| unwrap_brackets(k.0))
    }

    fn slot(&self, c: &Condition, theory: Theory) -> Condition {
        self.slot_set(c, theory)
            .map(|s| s.to_condition())
            .unwrap_or_else(|| c.clone())
    }

    fn plain(&self, c: &Condition, theory: Theory) -> Condition {
        self.alg
            .canonical_in(c, theory)
            .map(|k| k.to_condition())
            .unwrap_or_else(|_| c.clone())
    }

    /// [`copy_push_term`] on a well-formed term.
    pub fn copy_push(&self, a: &NumberTerm) -> Result<NumberTerm> {
        self.check_number(a)?;
        Ok(copy_push_term(a))
    }

    /// Normal form under the oriented copy distribution, tuple-selection and
    /// copy-expansion, with every condition replaced by its canonical form.
    pub fn normalize_number(&self, a: &NumberTerm, theory: Theory) -> NumberTerm {
        use NumberTerm as N;
        match a {
            N::Var(_) => a.clone(),
            N::Zero(c) => N::Zero(self.slot(c, theory)),
            N::Suc(c, b) => N::suc(self.slot(c, theory), self.normalize_number(b, theory)),
            N::Ann(c, d, b) => N::ann(
                self.slot(c, theory),
                self.slot(d, theory),
                self.normalize_number(b, theory),
            ),
            N::Tuple(items) => N::Tuple(items.iter().map(|i| self.normalize_number(i, theory)).collect()),
            N::Proj(i, b) => match self.normalize_number(b, theory) {
                N::Tuple(mut items) if *i >= 1 && *i <= items.len() => items.swap_remove(*i - 1),
                nb => N::proj(*i, nb),
            },
            N::CondApp(c, b) => {
                let c = self.plain(c, theory);
                self.expand(&c, self.normalize_number(b, theory), theory)
            }
            N::Copy0(b) => self.push_normalized(self.normalize_number(b, theory), 0, theory),
            N::Copy1(b) => self.push_normalized(self.normalize_number(b, theory), 1, theory),
            N::App(f, items) => N::App(
                f.clone(),
                items.iter().map(|i| self.normalize_number(i, theory)).collect(),
            ),
        }
    }

    fn push_normalized(&self, a: NumberTerm, bit: u8, theory: Theory) -> NumberTerm {
        use NumberTerm as N;
        match a {
            N::Zero(c) => N::Zero(self.slot(&c.copy(bit), theory)),
            N::Suc(c, b) => N::suc(self.slot(&c.copy(bit), theory), self.push_normalized(*b, bit, theory)),
            N::Ann(c, d, b) => N::ann(
                self.slot(&c.copy(bit), theory),
                self.slot(&d.copy(bit), theory),
                self.push_normalized(*b, bit, theory),
            ),
            N::Tuple(items) => N::Tuple(
                items
                    .into_iter()
                    .map(|i| self.push_normalized(i, bit, theory))
                    .collect(),
            ),
            other => other.copy(bit),
        }
    }

    fn valid(&self, c: &Condition) -> bool {
        self.alg.check_condition(c).is_ok()
    }

    /// `A → a` expanded through the constructors of `a`.
    fn expand(&self, c: &Condition, a: NumberTerm, theory: Theory) -> NumberTerm {
        use NumberTerm as N;
        let joined = |x: Condition, y: &Condition| Condition::product(x, y.clone()).bracket();
        match a {
            N::Zero(b) => {
                let head = joined(c.clone(), &b);
                if self.valid(&head) {
                    N::Zero(self.slot(&head, theory))
                } else {
                    N::cond_app(c.clone(), N::Zero(b))
                }
            }
            N::Suc(b, rest) => {
                let head = joined(c.clone().copy0(), &b);
                if self.valid(&head) {
                    let tail = self.plain(&c.clone().copy1(), theory);
                    N::suc(self.slot(&head, theory), self.expand(&tail, *rest, theory))
                } else {
                    N::cond_app(c.clone(), N::Suc(b, rest))
                }
            }
            N::Ann(b, d, rest) => {
                let h0 = joined(c.clone().copy0().copy0(), &b);
                let h1 = joined(c.clone().copy0().copy1(), &d);
                if self.valid(&h0) && self.valid(&h1) {
                    let tail = self.plain(&c.clone().copy1(), theory);
                    N::ann(
                        self.slot(&h0, theory),
                        self.slot(&h1, theory),
                        self.expand(&tail, *rest, theory),
                    )
                } else {
                    N::cond_app(c.clone(), N::Ann(b, d, rest))
                }
            }
            other => N::cond_app(c.clone(), other),
        }
    }

    /// Normal form that stays well-formed: falls back to the plain copy push
    /// when canonical conditions would clash with the rest of the term.
    pub(crate) fn normalize_state(&self, a: &NumberTerm, theory: Theory) -> NumberTerm {
        let n = self.normalize_number(a, theory);
        if self.is_well_formed_number(&n) {
            n
        } else {
            copy_push_term(a)
        }
    }

    /// `AB⁻ = I`, the guard of inversion-simplification.
    pub(crate) fn cancels(&self, a: &Condition, b: &Condition) -> bool {
        let c = Condition::product(a.clone(), b.clone().inv());
        self.alg.is_neutral(&c).unwrap_or(false)
    }

    /// One-step `≃` rewrites of `a` at every position, well-formed results only.
    pub fn smooth_steps(&self, a: &NumberTerm) -> Result<Vec<(SmoothStep, NumberTerm)>> {
        use NumberTerm as N;
        self.check_number(a)?;
        let mut out = Vec::new();
        for_each_site(a, &Position::root(), false, &|n| n, &mut |t, pos, _, ctx| {
            let mut local: Vec<(Law, Direction, NumberTerm)> = exchanges(t);
            for (dir, r) in copy_distributions(t) {
                local.push((Law::CopyDistribution, dir, r));
            }
            for (c, rebuild) in constructor_slots(t) {
                local.push((Law::ConstructorBracket, Direction::Forward, rebuild(c.clone().bracket())));
                if let Condition::Bracket(inner) = &c {
                    if inner.size() == 1 {
                        local.push((Law::ConstructorBracket, Direction::Backward, rebuild((**inner).clone())));
                    }
                }
                let canon = self.plain(&c, Theory::Full);
                if canon != c {
                    local.push((Law::ConditionEquality, Direction::Forward, rebuild(canon)));
                }
            }
            match t {
                N::CondApp(c, b) => {
                    let canon = self.plain(c, Theory::Full);
                    if &canon != c {
                        local.push((Law::ConditionEquality, Direction::Forward, N::cond_app(canon, (**b).clone())));
                    }
                    let once = self.expand_once(c, b);
                    if let Some(e) = once {
                        local.push((Law::CopyExpansion, Direction::Forward, e));
                    }
                }
                N::Proj(i, b) => {
                    if let N::Tuple(items) = b.as_ref() {
                        if *i >= 1 && *i <= items.len() {
                            local.push((Law::TupleSelection, Direction::Forward, items[*i - 1].clone()));
                        }
                    }
                }
                N::Ann(c, d, b) if self.cancels(c, d) => {
                    local.push((Law::InversionSimplification, Direction::Forward, (**b).clone()));
                }
                _ => {}
            }
            for (law, direction, r) in local {
                out.push((
                    SmoothStep {
                        law,
                        position: pos.clone(),
                        direction,
                    },
                    ctx(r),
                ));
            }
        });
        out.retain(|(_, t)| self.is_well_formed_number(t));
        Ok(out)
    }

    /// One copy-expansion step at the root.
    fn expand_once(&self, c: &Condition, a: &NumberTerm) -> Option<NumberTerm> {
        use NumberTerm as N;
        let joined = |x: Condition, y: &Condition| Condition::product(x, y.clone()).bracket();
        match a {
            N::Zero(b) => Some(N::Zero(joined(c.clone(), b))),
            N::Suc(b, rest) => Some(N::suc(
                joined(c.clone().copy0(), b),
                N::cond_app(c.clone().copy1(), (**rest).clone()),
            )),
            N::Ann(b, d, rest) => Some(N::ann(
                joined(c.clone().copy0().copy0(), b),
                joined(c.clone().copy0().copy1(), d),
                N::cond_app(c.clone().copy1(), (**rest).clone()),
            )),
            _ => None,
        }
    }

    pub fn smooth_neighbors(&self, a: &NumberTerm) -> Result<BTreeSet<NumberTerm>> {
        Ok(self.smooth_steps(a)?.into_iter().map(|(_, t)| t).collect())
    }

    /// Exchange-law rewrites of `a`, optionally only inside function arguments.
    pub(crate) fn exchange_neighbors(&self, a: &NumberTerm, only_in_apps: bool) -> Vec<NumberTerm> {
        let mut out = Vec::new();
        for_each_site(a, &Position::root(), false, &|n| n, &mut |t, _, in_app, ctx| {
            if in_app || !only_in_apps {
                out.extend(exchanges(t).into_iter().map(|(_, _, r)| ctx(r)));
            }
        });
        out
    }

    /// Inversion-simplification applied once in `a`, optionally only inside
    /// function arguments.
    pub(crate) fn erasure_neighbors(&self, a: &NumberTerm, only_in_apps: bool) -> Vec<NumberTerm> {
        let mut out = Vec::new();
        for_each_site(a, &Position::root(), false, &|n| n, &mut |t, _, in_app, ctx| {
            if !in_app && only_in_apps {
                return;
            }
            if let NumberTerm::Ann(c, d, b) = t {
                if self.cancels(c, d) {
                    out.push(ctx((**b).clone()));
                }
            }
        });
        out
    }

    /// Key of a constructor number without well-formedness checks.
    pub(crate) fn class_key(&self, a: &NumberTerm) -> Option<ConstructorClassKey> {
        use NumberTerm as N;
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        let (mut sucs, mut anns) = (0, 0);
        let mut cur = a;
        let zero = loop {
            match cur {
                N::Zero(c) => break self.slot_set(c, Theory::Full)?,
                N::Suc(c, b) => {
                    positive.push(self.slot_set(c, Theory::Full)?);
                    sucs += 1;
                    cur = b;
                }
                N::Ann(c, d, b) => {
                    positive.push(self.slot_set(c, Theory::Full)?);
                    negative.push(self.slot_set(d, Theory::Full)?);
                    anns += 1;
                    cur = b;
                }
                _ => return None,
            }
        };
        positive.sort();
        negative.sort();
        'erase: while anns > 0 {
            for i in 0..positive.len() {
                for j in 0..negative.len() {
                    if self.cancels(&positive[i].to_condition(), &negative[j].to_condition()) {
                        positive.remove(i);
                        negative.remove(j);
                        anns -= 1;
                        continue 'erase;
                    }
                }
            }
            break;
        }
        Some(ConstructorClassKey {
            zero,
            positive,
            negative,
            sucs,
            anns,
        })
    }

    pub fn constructor_canonical(&self, a: &NumberTerm) -> Result<ConstructorClassKey> {
        self.check_number(a)?;
        let n = self.normalize_state(a, Theory::Full);
        if !n.is_constructor_number() {
            return Err(CnError::NotConstructorNumber);
        }
        self.class_key(&n).ok_or(CnError::NotConstructorNumber)
    }

    /// Bounded decision of `a ≃ b`.
    ///
    /// Constructor numbers are compared by key. Other terms are compared by
    /// a search from both sides over exchange steps and inversion-simplification
    /// between normalised states; [`Verdict::Unknown`] when the state budget runs out.
    pub fn smooth_equal(&self, a: &NumberTerm, b: &NumberTerm) -> Result<Verdict> {
        self.check_number(a)?;
        self.check_number(b)?;
        let na = self.normalize_state(a, Theory::Full);
        let nb = self.normalize_state(b, Theory::Full);
        if na == nb {
            return Ok(Verdict::True);
        }
        if na.is_constructor_number() && nb.is_constructor_number() {
            return Ok(Verdict::from_bool(self.class_key(&na) == self.class_key(&nb)));
        }
        let mut sides = [Closure::new(na), Closure::new(nb)];
        let budget = self.cfg.max_states;
        loop {
            let mut progressed = false;
            for k in 0..2 {
                if sides[0].seen.len() + sides[1].seen.len() >= budget {
                    return Ok(Verdict::Unknown);
                }
                if let Some(s) = sides[k].queue.pop_front() {
                    progressed = true;
                    let mut next = self.exchange_neighbors(&s, false);
                    next.extend(self.erasure_neighbors(&s, false));
                    for n in next {
                        let n = self.normalize_state(&n, Theory::Full);
                        if sides[1 - k].seen.contains(&n) {
                            return Ok(Verdict::True);
                        }
                        if sides[k].seen.insert(n.clone()) {
                            sides[k].queue.push_back(n);
                        }
                    }
                }
            }
            if !progressed {
                return Ok(Verdict::False);
            }
        }
    }

    /// Pairs of distinct constructor-condition positions whose exponentiated
    /// subterms are equal conditions.
    pub fn conjecture_audit(&self, a: &NumberTerm) -> Vec<(Position, Position)> {
        let positions = constructor_condition_positions(a);
        let conds: Vec<Option<Condition>> = positions
            .iter()
            .map(|p| match exponentiated_subterm(a.into(), p) {
                Ok(Term::Cond(c)) => Some(c),
                _ => None,
            })
            .collect();
        let mut out = Vec::new();
        for i in 0..positions.len() {
            for j in i + 1..positions.len() {
                if let (Some(ci), Some(cj)) = (&conds[i], &conds[j]) {
                    if self.alg.cond_equal(ci, cj) == Ok(true) {
                        out.push((positions[i].clone(), positions[j].clone()));
                    }
                }
            }
        }
        out
    }
}

struct Closure {
    seen: HashSet<NumberTerm>,
    queue: VecDeque<NumberTerm>,
}

impl Closure {
    fn new(start: NumberTerm) -> Self {
        let mut seen = HashSet::new();
        seen.insert(start.clone());
        Closure {
            seen,
            queue: VecDeque::from([start]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Condition {
        Condition::var(n)
    }

    fn at(n: &str) -> Condition {
        Condition::atom(n)
    }

    fn z() -> NumberTerm {
        NumberTerm::zero(at("z"))
    }

    #[test]
    fn suc_exchange_is_a_neighbor() {
        let e = Engine::default();
        let a = NumberTerm::suc(at("a"), NumberTerm::suc(at("b"), z()));
        let swapped = NumberTerm::suc(at("b"), NumberTerm::suc(at("a"), z()));
        assert!(e.smooth_neighbors(&a).unwrap().contains(&swapped));
    }

    #[test]
    fn inversion_simplification_neighbor() {
        let e = Engine::default();
        let a = NumberTerm::ann(at("y").copy0(), at("y").copy1(), z());
        assert!(e.smooth_neighbors(&a).unwrap().contains(&z()));
    }

    #[test]
    fn tuple_selection_neighbor() {
        let e = Engine::default();
        let b = NumberTerm::zero(at("w"));
        let a = NumberTerm::proj(1, NumberTerm::Tuple(vec![z(), b]));
        assert!(e.smooth_neighbors(&a).unwrap().contains(&z()));
    }

    #[test]
    fn copy_push_examples() {
        let a = NumberTerm::suc(v("A"), NumberTerm::var("a")).copy0();
        assert_eq!(
            copy_push_term(&a),
            NumberTerm::suc(v("A").copy0(), NumberTerm::var("a").copy0())
        );
        assert_eq!(copy_push_term(&NumberTerm::zero(v("A")).copy1()), NumberTerm::zero(v("A").copy1()));
        let t = NumberTerm::Tuple(vec![NumberTerm::var("a"), NumberTerm::var("b")]).copy0();
        assert_eq!(
            copy_push_term(&t),
            NumberTerm::Tuple(vec![NumberTerm::var("a").copy0(), NumberTerm::var("b").copy0()])
        );
    }

    #[test]
    fn keys() {
        let e = Engine::default();
        let a = NumberTerm::suc(at("a"), NumberTerm::suc(at("b"), z()));
        let b = NumberTerm::suc(at("b"), NumberTerm::suc(at("a"), z()));
        assert_eq!(e.constructor_canonical(&a).unwrap(), e.constructor_canonical(&b).unwrap());
        let erased = NumberTerm::ann(at("y").copy0(), at("y").copy1(), z());
        assert_eq!(e.constructor_canonical(&erased).unwrap(), e.constructor_canonical(&z()).unwrap());
        assert_eq!(
            e.constructor_canonical(&NumberTerm::var("x")),
            Err(CnError::NotConstructorNumber)
        );
    }

    #[test]
    fn key_representative_round_trip() {
        let e = Engine::default();
        let a = NumberTerm::suc(
            at("x3"),
            NumberTerm::ann(at("x2+"), at("x2-"), NumberTerm::suc(at("x1"), NumberTerm::zero(at("x0")))),
        );
        let k = e.constructor_canonical(&a).unwrap();
        assert_eq!(e.constructor_canonical(&k.representative()).unwrap(), k);
    }

    #[test]
    fn smooth_equal_examples() {
        let e = Engine::default();
        let x = NumberTerm::zero(at("x"));
        assert_eq!(e.smooth_equal(&x, &x).unwrap(), Verdict::True);
        let wrapped = NumberTerm::zero(at("x").bracket());
        assert_eq!(e.smooth_equal(&x, &wrapped).unwrap(), Verdict::True);
        let y = NumberTerm::zero(at("y"));
        assert_eq!(e.smooth_equal(&x, &y).unwrap(), Verdict::False);
    }

    #[test]
    fn well_formedness() {
        let e = Engine::default();
        assert!(!e.is_well_formed_number(&NumberTerm::zero(Condition::Neutral)));
        assert!(!e.is_well_formed_number(&NumberTerm::zero(Condition::product(at("a"), at("b")))));
        let clash = NumberTerm::suc(at("a"), NumberTerm::zero(at("a")));
        assert!(!e.is_well_formed_number(&clash));
        assert!(e.is_well_formed_number(&NumberTerm::suc(at("a").copy0(), NumberTerm::zero(at("a").copy1()))));
    }
}

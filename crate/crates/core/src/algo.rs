//! Ground numbers, CN-algorithms, refinement, algorithm equality and directness.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{CnError, Result};
use crate::par;
use crate::rewrite::{Program, ValueKey};
use crate::syntax::parse_program_with;
use crate::term::{Condition, NumberTerm};
use crate::{Engine, Verdict};

pub const ADD_SOURCE: &str = include_str!("../programs/add.cn");
pub const SUB_SOURCE: &str = include_str!("../programs/sub.cn");
pub const DEMO_SOURCE: &str = include_str!("../programs/demo.cn");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    Suc,
    Ann,
}

/// The ground number of `var` with the given constructors, innermost first:
/// `var0` on the zero, `vari` on a `suc` at index `i`, `vari+`/`vari-` on an `ann`.
pub fn make_ground(var: &str, shape: &[Shape]) -> NumberTerm {
    let mut t = NumberTerm::zero(Condition::atom(&format!("{var}0")));
    for (k, s) in shape.iter().enumerate() {
        let i = k + 1;
        t = match s {
            Shape::Suc => NumberTerm::suc(Condition::atom(&format!("{var}{i}")), t),
            Shape::Ann => NumberTerm::ann(
                Condition::atom(&format!("{var}{i}+")),
                Condition::atom(&format!("{var}{i}-")),
                t,
            ),
        };
    }
    t
}

/// Shapes with at most `max_constructors` constructors, shorter first.
pub fn shapes(max_constructors: usize, include_ann: bool) -> Vec<Vec<Shape>> {
    let letters: &[Shape] = if include_ann {
        &[Shape::Suc, Shape::Ann]
    } else {
        &[Shape::Suc]
    };
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_constructors {
        let next: Vec<Vec<Shape>> = layer
            .iter()
            .flat_map(|w: &Vec<Shape>| {
                letters.iter().map(move |&l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// All tuples of ground numbers for `vars`, first variable varying slowest.
pub fn enumerate_ground(vars: &[&str], max_constructors: usize, include_ann: bool) -> Vec<Vec<NumberTerm>> {
    let all = shapes(max_constructors, include_ann);
    let mut out: Vec<Vec<NumberTerm>> = vec![vec![]];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                all.iter().map(move |s| {
                    let mut t = prefix.clone();
                    t.push(make_ground(v, s));
                    t
                })
            })
            .collect();
    }
    out
}

/// Argument names `x`, `y`, `z`, then `x4`, `x5`, … for a function of arity `n`.
pub fn default_vars(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match i {
            0 => "x".to_string(),
            1 => "y".to_string(),
            2 => "z".to_string(),
            _ => format!("v{i}"),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgoEntry {
    pub classes: BTreeSet<ValueKey>,
    pub complete: bool,
}

/// Reachable classes per sampled input.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgoMap {
    pub entries: BTreeMap<Vec<NumberTerm>, AlgoEntry>,
}

impl AlgoMap {
    pub fn is_complete(&self) -> bool {
        self.entries.values().all(|e| e.complete)
    }
}

/// The builtin `add` and `sub`, with subtraction rule (s6) when asked for.
pub fn builtin_programs(s6: bool) -> Program {
    let opts: &[&str] = if s6 { &["s6"] } else { &[] };
    let add = parse_program_with(ADD_SOURCE, opts).expect("builtin add parses");
    let sub = parse_program_with(SUB_SOURCE, opts).expect("builtin sub parses");
    add.merged(&sub)
}

/// Builtins together with the example functions.
pub fn demo_program(s6: bool) -> Program {
    let opts: &[&str] = if s6 { &["s6"] } else { &[] };
    builtin_programs(s6).merged(&parse_program_with(DEMO_SOURCE, opts).expect("demo parses"))
}

impl Engine {
    /// `algo(f)` on the given inputs.
    pub fn algo_of(&self, p: &Program, f: &str, inputs: &[Vec<NumberTerm>]) -> Result<AlgoMap> {
        let func = p.function(f)?;
        if let Some(bad) = inputs.iter().find(|i| i.len() != func.inputs) {
            return Err(CnError::ArityMismatch(format!(
                "{f} takes {} arguments, input has {}",
                func.inputs,
                bad.len()
            )));
        }
        let results = par::map(self.cfg.exec, inputs, |args| {
            self.reach_normal_forms(p, &NumberTerm::app(f, args.clone()))
        });
        let mut map = AlgoMap::default();
        for (args, r) in inputs.iter().zip(results) {
            let r = r?;
            map.entries.insert(
                args.clone(),
                AlgoEntry {
                    classes: r.keys(),
                    complete: r.complete,
                },
            );
        }
        Ok(map)
    }

    /// `f ≺ g` over the sampled inputs.
    pub fn algo_refines(&self, m1: &AlgoMap, m2: &AlgoMap) -> Result<Verdict> {
        algo_refines(m1, m2)
    }

    pub fn algo_equal(&self, p: &Program, f: &str, g: &str, inputs: &[Vec<NumberTerm>]) -> Result<Verdict> {
        let (ff, gg) = (p.function(f)?, p.function(g)?);
        if (ff.inputs, ff.outputs) != (gg.inputs, gg.outputs) {
            return Err(CnError::ArityMismatch(format!(
                "{f} : {} -> {} but {g} : {} -> {}",
                ff.inputs, ff.outputs, gg.inputs, gg.outputs
            )));
        }
        let mf = self.algo_of(p, f, inputs)?;
        let mg = self.algo_of(p, g, inputs)?;
        Ok(algo_refines(&mf, &mg)?.and(algo_refines(&mg, &mf)?))
    }

    /// Every `⟶`-reachable class of `f a` is also reached by `⟼`.
    pub fn is_direct(&self, p: &Program, f: &str, inputs: &[Vec<NumberTerm>]) -> Result<Verdict> {
        p.function(f)?;
        let mut verdict = Verdict::True;
        for args in inputs {
            let t = NumberTerm::app(f, args.clone());
            let full = self.reach_normal_forms(p, &t)?;
            let direct = self.direct_reach(p, &t)?;
            let missing = full.classes.keys().any(|k| !direct.classes.contains_key(k));
            let v = if missing {
                if direct.complete {
                    Verdict::False
                } else {
                    Verdict::Unknown
                }
            } else if full.complete {
                Verdict::True
            } else {
                Verdict::Unknown
            };
            verdict = verdict.and(v);
            if verdict == Verdict::False {
                break;
            }
        }
        Ok(verdict)
    }
}

/// Pointwise inclusion of class sets.
pub fn algo_refines(m1: &AlgoMap, m2: &AlgoMap) -> Result<Verdict> {
    if m1.entries.len() != m2.entries.len() || m1.entries.keys().any(|k| !m2.entries.contains_key(k)) {
        return Err(CnError::DomainMismatch);
    }
    let mut verdict = Verdict::True;
    for (k, a) in &m1.entries {
        let b = &m2.entries[k];
        let v = if !a.classes.is_subset(&b.classes) {
            if b.complete {
                Verdict::False
            } else {
                Verdict::Unknown
            }
        } else if a.complete {
            Verdict::True
        } else {
            Verdict::Unknown
        };
        verdict = verdict.and(v);
    }
    Ok(verdict)
}

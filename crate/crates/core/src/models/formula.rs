//! First-order formulas over finite models, Carnap state and structure
//! descriptions, and a satisfaction checker.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::{all_tuples, FiniteModel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// A domain element, denoting itself.
    Name(String),
    /// A variable bound by an enclosing quantifier.
    Var(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn neq(a: Term, b: Term) -> Formula {
        Formula::negate(Formula::Eq(a, b))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    /// Conjuncts if this is a conjunction, otherwise the formula itself.
    pub fn conjuncts(&self) -> &[Formula] {
        match self {
            Formula::And(parts) => parts,
            other => std::slice::from_ref(other),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Name(s) | Term::Var(s) => f.write_str(s),
        }
    }
}

/// S-expression form, e.g. `(and (rel R a1 a2) (not (= a1 a2)))`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Rel(name, args) => {
                write!(f, "(rel {name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::Not(inner) => write!(f, "(not {inner})"),
            Formula::And(parts) | Formula::Or(parts) => {
                f.write_str(if matches!(self, Formula::And(_)) { "(and" } else { "(or" })?;
                for p in parts {
                    write!(f, " {p}")?;
                }
                f.write_str(")")
            }
            Formula::Forall(v, body) => write!(f, "(forall {v} {body})"),
            Formula::Exists(v, body) => write!(f, "(exists {v} {body})"),
        }
    }
}

// Resolved form: names become elements, variables become environment slots.
#[derive(Debug, Clone, Copy)]
enum CTerm {
    Elem(usize),
    Slot(usize),
}

#[derive(Debug)]
enum Compiled {
    Const(bool),
    Rel(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
    Not(Box<Compiled>),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
    Forall(Box<Compiled>),
    Exists(Box<Compiled>),
}

struct RelTable {
    arity: usize,
    dense: Option<Vec<bool>>,
    tuples: BTreeSet<Vec<usize>>,
}

impl RelTable {
    fn contains(&self, n: usize, args: &[usize]) -> bool {
        match &self.dense {
            Some(bits) => bits[args.iter().fold(0, |acc, &x| acc * n + x)],
            None => self.tuples.contains(args),
        }
    }
}

struct Compiler<'a> {
    model: &'a FiniteModel,
    rel_index: HashMap<&'a str, usize>,
    scope: Vec<String>,
}

impl Compiler<'_> {
    fn term(&self, t: &Term) -> Result<CTerm> {
        match t {
            Term::Var(v) => self
                .scope
                .iter()
                .rposition(|s| s == v)
                .map(CTerm::Slot)
                .ok_or_else(|| Error::Formula(format!("unbound variable '{v}'"))),
            Term::Name(n) => {
                self.model.element(n).map(CTerm::Elem).ok_or_else(|| Error::Formula(format!("unknown name '{n}'")))
            }
        }
    }

    fn compile(&mut self, f: &Formula) -> Result<Compiled> {
        Ok(match f {
            Formula::True => Compiled::Const(true),
            Formula::False => Compiled::Const(false),
            Formula::Rel(name, args) => {
                let &idx = self
                    .rel_index
                    .get(name.as_str())
                    .ok_or_else(|| Error::Formula(format!("unknown relation '{name}'")))?;
                let arity = self.model.relation(name).expect("indexed").arity();
                if args.len() != arity {
                    return Err(Error::Formula(format!(
                        "relation '{name}' has arity {arity}, applied to {} terms",
                        args.len()
                    )));
                }
                Compiled::Rel(idx, args.iter().map(|a| self.term(a)).collect::<Result<_>>()?)
            }
            Formula::Eq(a, b) => Compiled::Eq(self.term(a)?, self.term(b)?),
            Formula::Not(inner) => Compiled::Not(Box::new(self.compile(inner)?)),
            Formula::And(parts) => Compiled::And(parts.iter().map(|p| self.compile(p)).collect::<Result<_>>()?),
            Formula::Or(parts) => Compiled::Or(parts.iter().map(|p| self.compile(p)).collect::<Result<_>>()?),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                self.scope.push(v.clone());
                let inner = self.compile(body);
                self.scope.pop();
                let inner = Box::new(inner?);
                if matches!(f, Formula::Forall(..)) {
                    Compiled::Forall(inner)
                } else {
                    Compiled::Exists(inner)
                }
            }
        })
    }
}

struct Evaluator {
    n: usize,
    tables: Vec<RelTable>,
    env: Vec<usize>,
    args: Vec<usize>,
}

impl Evaluator {
    fn value(&self, t: CTerm) -> usize {
        match t {
            CTerm::Elem(e) => e,
            CTerm::Slot(s) => self.env[s],
        }
    }

    fn eval(&mut self, f: &Compiled) -> bool {
        match f {
            Compiled::Const(b) => *b,
            Compiled::Rel(idx, terms) => {
                let mut args = std::mem::take(&mut self.args);
                args.clear();
                args.extend(terms.iter().map(|&t| self.value(t)));
                let table = &self.tables[*idx];
                debug_assert_eq!(table.arity, args.len());
                let hit = table.contains(self.n, &args);
                self.args = args;
                hit
            }
            Compiled::Eq(a, b) => self.value(*a) == self.value(*b),
            Compiled::Not(inner) => !self.eval(inner),
            Compiled::And(parts) => parts.iter().all(|p| self.eval(p)),
            Compiled::Or(parts) => parts.iter().any(|p| self.eval(p)),
            Compiled::Forall(body) => self.quantify(body, true),
            Compiled::Exists(body) => self.quantify(body, false),
        }
    }

    fn quantify(&mut self, body: &Compiled, universal: bool) -> bool {
        self.env.push(0);
        let slot = self.env.len() - 1;
        let mut result = universal;
        for e in 0..self.n {
            self.env[slot] = e;
            if self.eval(body) != universal {
                result = !universal;
                break;
            }
        }
        self.env.pop();
        result
    }
}

/// Finite-model satisfaction of a closed formula; quantifiers range over the
/// model's domain.
pub fn satisfies(model: &FiniteModel, formula: &Formula) -> Result<bool> {
    let names: Vec<&str> = model.relations().keys().map(String::as_str).collect();
    let rel_index = names.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let mut compiler = Compiler { model, rel_index, scope: Vec::new() };
    let compiled = compiler.compile(formula)?;
    let n = model.size();
    let tables = model
        .relations()
        .values()
        .map(|rel| {
            let cells = (n as u64).checked_pow(rel.arity() as u32).filter(|&c| c <= 1 << 20);
            let dense = cells.map(|c| {
                let mut bits = vec![false; c as usize];
                for t in rel.tuples() {
                    bits[t.iter().fold(0, |acc, &x| acc * n + x)] = true;
                }
                bits
            });
            RelTable { arity: rel.arity(), dense, tuples: rel.tuples().clone() }
        })
        .collect();
    let mut eval = Evaluator { n, tables, env: Vec::new(), args: Vec::new() };
    Ok(eval.eval(&compiled))
}

/// Variable names not clashing with any domain name.
fn fresh_vars(model: &FiniteModel) -> (Vec<String>, String) {
    let taken = |s: &str| model.domain().iter().any(|d| d == s);
    let mut prefix = String::new();
    loop {
        let xs: Vec<String> = (1..=model.size()).map(|i| format!("{prefix}x{i}")).collect();
        let y = format!("{prefix}y");
        if !taken(&y) && xs.iter().all(|x| !taken(x)) {
            return (xs, y);
        }
        prefix.push('_');
    }
}

fn description(model: &FiniteModel, term: impl Fn(usize) -> Term, closure_var: &str) -> Formula {
    let n = model.size();
    let mut parts = Vec::new();
    // type 1: every relation atom, signed
    for (name, rel) in model.relations() {
        for t in all_tuples(n, rel.arity()) {
            let atom = Formula::Rel(name.clone(), t.iter().map(|&e| term(e)).collect());
            parts.push(if rel.contains(&t) { atom } else { Formula::negate(atom) });
        }
    }
    // type 2: at least n objects
    for i in 0..n {
        for j in i + 1..n {
            parts.push(Formula::neq(term(i), term(j)));
        }
    }
    // type 3: at most n objects
    let y = Term::Var(closure_var.to_string());
    parts.push(Formula::forall(closure_var, Formula::Or((0..n).map(|i| Formula::Eq(y.clone(), term(i))).collect())));
    Formula::And(parts)
}

/// Conjunction of all signed relation atoms, pairwise distinctness of the
/// named objects, and domain closure.
pub fn state_description(model: &FiniteModel) -> Formula {
    let (_, y) = fresh_vars(model);
    description(model, |e| Term::Name(model.domain()[e].clone()), &y)
}

/// The state description with names replaced by existentially bound
/// variables.
pub fn structure_description(model: &FiniteModel) -> Formula {
    let (xs, y) = fresh_vars(model);
    let body = description(model, |e| Term::Var(xs[e].clone()), &y);
    xs.iter().rev().fold(body, |acc, x| Formula::exists(x.clone(), acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{apply_perm, enumerate_models, permute_class};
    use crate::symgroup::Permutation;

    fn two(tuples: &[&[&str]]) -> FiniteModel {
        FiniteModel::from_names(&["a1", "a2"], &[("R", 2, tuples)]).unwrap()
    }

    fn name(s: &str) -> Term {
        Term::Name(s.into())
    }

    #[test]
    fn state_description_one_object() {
        let m = FiniteModel::from_names(&["a1"], &[("R", 2, &[])]).unwrap();
        assert_eq!(state_description(&m).to_string(), "(and (not (rel R a1 a1)) (forall y (or (= y a1))))");
    }

    #[test]
    fn state_description_two_objects() {
        let m = two(&[&["a1", "a2"]]);
        let sd = state_description(&m);
        let parts = sd.conjuncts();
        let rel = |a: &str, b: &str| Formula::Rel("R".into(), vec![name(a), name(b)]);
        assert!(parts.contains(&rel("a1", "a2")));
        for (a, b) in [("a2", "a1"), ("a1", "a1"), ("a2", "a2")] {
            assert!(parts.contains(&Formula::negate(rel(a, b))));
        }
        assert!(parts.contains(&Formula::neq(name("a1"), name("a2"))));
        assert_eq!(parts.len(), 6);
        assert!(satisfies(&m, &sd).unwrap());
    }

    #[test]
    fn satisfaction_basics() {
        let m = two(&[&["a1", "a2"]]);
        assert!(satisfies(&m, &Formula::Eq(name("a1"), name("a1"))).unwrap());
        assert!(!satisfies(&two(&[&["a2", "a1"]]), &state_description(&m)).unwrap());
        let swapped = apply_perm(&Permutation::new(vec![2, 1]).unwrap(), &m).unwrap();
        assert!(satisfies(&swapped, &structure_description(&m)).unwrap());
    }

    #[test]
    fn formula_errors() {
        let m = two(&[]);
        let unbound = Formula::Eq(Term::Var("x".into()), name("a1"));
        assert!(matches!(satisfies(&m, &unbound), Err(Error::Formula(_))));
        let unknown_rel = Formula::Rel("S".into(), vec![name("a1")]);
        assert!(matches!(satisfies(&m, &unknown_rel), Err(Error::Formula(_))));
        let arity = Formula::Rel("R".into(), vec![name("a1")]);
        assert!(matches!(satisfies(&m, &arity), Err(Error::Formula(_))));
        let unknown_name = Formula::Eq(name("b"), name("a1"));
        assert!(matches!(satisfies(&m, &unknown_name), Err(Error::Formula(_))));
    }

    #[test]
    fn structure_description_of_fully_symmetric_model_is_categorical() {
        let dom: Vec<String> = vec!["a1".into(), "a2".into()];
        let all = enumerate_models(&dom, &[("R".into(), 2)]).unwrap();
        let complete = two(&[&["a1", "a1"], &["a1", "a2"], &["a2", "a1"], &["a2", "a2"]]);
        let sd = structure_description(&complete);
        let hits: Vec<_> = all.iter().filter(|m| satisfies(m, &sd).unwrap()).collect();
        assert_eq!(hits, vec![&complete]);

        let m = two(&[&["a1", "a2"]]);
        let sd = structure_description(&m);
        let hits: BTreeSet<_> = all.iter().filter(|x| satisfies(x, &sd).unwrap()).cloned().collect();
        assert_eq!(hits, permute_class(&m).unwrap());
        assert_eq!(hits.len(), 2);
    }

    #[test]
    fn fresh_variables_avoid_domain_names() {
        let m = FiniteModel::from_names(&["x1", "y"], &[("R", 1, &[&["x1"]])]).unwrap();
        let sd = structure_description(&m);
        assert!(sd.to_string().starts_with("(exists _x1 (exists _x2"));
        assert!(satisfies(&m, &sd).unwrap());
        assert!(satisfies(&m, &state_description(&m)).unwrap());
    }
}

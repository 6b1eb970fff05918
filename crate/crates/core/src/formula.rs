//! Formula ASTs: sorts, terms, separation logic formulas, the invisible-cell
//! measure, functional form and miniscoping.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use thiserror::Error;

/// Name of the distinguished nil constant.
pub const NIL: &str = "nil";

/// Sorts of the two-sorted setting: one location sort, k-tuples of it as
/// data, and booleans for formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    Loc,
    /// Data sort U^k; the arity is fixed per problem.
    DataTuple(usize),
    Bool,
}

/// A location-sorted term: a variable, a constant, or nil.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocTerm {
    Nil,
    Var(String),
    Const(String),
}

impl LocTerm {
    pub fn var(name: &str) -> Self {
        LocTerm::Var(name.to_string())
    }

    pub fn cst(name: &str) -> Self {
        LocTerm::Const(name.to_string())
    }

    /// Symbol name; nil reports as "nil".
    pub fn name(&self) -> &str {
        match self {
            LocTerm::Nil => NIL,
            LocTerm::Var(n) | LocTerm::Const(n) => n,
        }
    }
}

impl fmt::Display for LocTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A k-tuple of location terms, the contents of a heap cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleTerm(pub Vec<LocTerm>);

impl TupleTerm {
    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for TupleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

/// Separation logic formulas. `Or`, `Implies` and `Forall` are derived
/// connectives removed by [`desugar`]; everything downstream of the
/// front end works on the core grammar.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Eq(LocTerm, LocTerm),
    Emp,
    PointsTo(LocTerm, TupleTerm),
    Sep(Box<Formula>, Box<Formula>),
    Wand(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn sep(a: Formula, b: Formula) -> Formula {
        Formula::Sep(Box::new(a), Box::new(b))
    }

    pub fn wand(a: Formula, b: Formula) -> Formula {
        Formula::Wand(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, a: Formula) -> Formula {
        Formula::Exists(x.to_string(), Box::new(a))
    }

    pub fn forall(x: &str, a: Formula) -> Formula {
        Formula::Forall(x.to_string(), Box::new(a))
    }

    pub fn eq(a: LocTerm, b: LocTerm) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn pto(src: LocTerm, data: Vec<LocTerm>) -> Formula {
        Formula::PointsTo(src, TupleTerm(data))
    }

    /// The allocation test `t ↦ (t,..,t) −∗ ⊥`, true exactly when t's
    /// location is in the heap domain (or t is nil, which no cell can have
    /// as a source).
    pub fn alloc(t: LocTerm, k: usize) -> Formula {
        Formula::wand(Formula::pto(t.clone(), vec![t; k]), Formula::False)
    }

    /// Conjunction of a list; empty list is True.
    pub fn and_all(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::True,
            1 => fs.pop().unwrap(),
            _ => {
                let mut it = fs.into_iter().rev();
                let mut acc = it.next().unwrap();
                for f in it {
                    acc = Formula::and(f, acc);
                }
                acc
            }
        }
    }

    /// Disjunction of a list; empty list is False.
    pub fn or_all(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::False,
            1 => fs.pop().unwrap(),
            _ => {
                let mut it = fs.into_iter().rev();
                let mut acc = it.next().unwrap();
                for f in it {
                    acc = Formula::or(f, acc);
                }
                acc
            }
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Emp | Formula::PointsTo(..) => true,
            Formula::Sep(a, b)
            | Formula::Wand(a, b)
            | Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    pub fn contains_wand(&self) -> bool {
        match self {
            Formula::Wand(..) => true,
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Emp | Formula::PointsTo(..) => false,
            Formula::Sep(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.contains_wand() || b.contains_wand()
            }
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.contains_wand(),
        }
    }

    /// Node count, used for growth assertions in tests.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Emp | Formula::PointsTo(..) => 1,
            Formula::Sep(a, b)
            | Formula::Wand(a, b)
            | Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b) => 1 + a.size() + b.size(),
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => 1 + a.size(),
        }
    }

    fn visit_terms(&self, f: &mut impl FnMut(&LocTerm)) {
        match self {
            Formula::True | Formula::False | Formula::Emp => {}
            Formula::Eq(a, b) => {
                f(a);
                f(b);
            }
            Formula::PointsTo(src, tup) => {
                f(src);
                for t in &tup.0 {
                    f(t);
                }
            }
            Formula::Sep(a, b)
            | Formula::Wand(a, b)
            | Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.visit_terms(f),
        }
    }

    /// Free variables (quantified names are bound; constants excluded).
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Exists(x, a) | Formula::Forall(x, a) => {
                    bound.push(x.clone());
                    go(a, bound, out);
                    bound.pop();
                }
                Formula::Not(a) => go(a, bound, out),
                Formula::Sep(a, b)
                | Formula::Wand(a, b)
                | Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                _ => f.visit_terms(&mut |t| {
                    if let LocTerm::Var(n) = t {
                        if !bound.iter().any(|b| b == n) {
                            out.insert(n.clone());
                        }
                    }
                }),
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Constant symbols occurring in the formula, nil excluded.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| {
            if let LocTerm::Const(n) = t {
                out.insert(n.clone());
            }
        });
        out
    }

    pub fn mentions_nil(&self) -> bool {
        let mut seen = false;
        self.visit_terms(&mut |t| {
            if matches!(t, LocTerm::Nil) {
                seen = true;
            }
        });
        seen
    }

    /// All symbol names occurring anywhere (variables, constants, bound
    /// names), used to pick collision-free fresh names.
    pub fn all_names(&self) -> HashSet<String> {
        fn go(f: &Formula, out: &mut HashSet<String>) {
            if let Formula::Exists(x, a) | Formula::Forall(x, a) = f {
                out.insert(x.clone());
                go(a, out);
                return;
            }
            match f {
                Formula::Sep(a, b)
                | Formula::Wand(a, b)
                | Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Formula::Not(a) => go(a, out),
                _ => f.visit_terms(&mut |t| match t {
                    LocTerm::Var(n) | LocTerm::Const(n) => {
                        out.insert(n.clone());
                    }
                    LocTerm::Nil => {}
                }),
            }
        }
        let mut out = HashSet::new();
        go(self, &mut out);
        out
    }

    /// Substitutes free variables by terms. Callers must ensure the
    /// replacement terms cannot be captured by binders (all internal uses
    /// substitute either into quantifier-free formulas or with constants).
    pub fn subst_vars(&self, map: &HashMap<String, LocTerm>) -> Formula {
        let st = |t: &LocTerm| -> LocTerm {
            match t {
                LocTerm::Var(n) => map.get(n).cloned().unwrap_or_else(|| t.clone()),
                _ => t.clone(),
            }
        };
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Emp => Formula::Emp,
            Formula::Eq(a, b) => Formula::Eq(st(a), st(b)),
            Formula::PointsTo(src, tup) => {
                Formula::PointsTo(st(src), TupleTerm(tup.0.iter().map(st).collect()))
            }
            Formula::Sep(a, b) => Formula::sep(a.subst_vars(map), b.subst_vars(map)),
            Formula::Wand(a, b) => Formula::wand(a.subst_vars(map), b.subst_vars(map)),
            Formula::And(a, b) => Formula::and(a.subst_vars(map), b.subst_vars(map)),
            Formula::Or(a, b) => Formula::or(a.subst_vars(map), b.subst_vars(map)),
            Formula::Implies(a, b) => Formula::implies(a.subst_vars(map), b.subst_vars(map)),
            Formula::Not(a) => Formula::not(a.subst_vars(map)),
            Formula::Exists(x, a) => {
                if map.contains_key(x) {
                    let mut inner = map.clone();
                    inner.remove(x);
                    Formula::Exists(x.clone(), Box::new(a.subst_vars(&inner)))
                } else {
                    Formula::Exists(x.clone(), Box::new(a.subst_vars(map)))
                }
            }
            Formula::Forall(x, a) => {
                if map.contains_key(x) {
                    let mut inner = map.clone();
                    inner.remove(x);
                    Formula::Forall(x.clone(), Box::new(a.subst_vars(&inner)))
                } else {
                    Formula::Forall(x.clone(), Box::new(a.subst_vars(map)))
                }
            }
        }
    }
}

/// Rewrites derived connectives into the core grammar: ∨ and ⇒ via
/// De Morgan, ∀x.φ as ¬∃x.¬φ. The result contains only
/// True/False/Eq/Emp/PointsTo/Sep/Wand/And/Not/Exists.
pub fn desugar(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Eq(..) | Formula::Emp | Formula::PointsTo(..) => {
            f.clone()
        }
        Formula::Sep(a, b) => Formula::sep(desugar(a), desugar(b)),
        Formula::Wand(a, b) => Formula::wand(desugar(a), desugar(b)),
        Formula::And(a, b) => Formula::and(desugar(a), desugar(b)),
        Formula::Not(a) => Formula::not(desugar(a)),
        Formula::Or(a, b) => Formula::not(Formula::and(
            Formula::not(desugar(a)),
            Formula::not(desugar(b)),
        )),
        Formula::Implies(a, b) => {
            Formula::not(Formula::and(desugar(a), Formula::not(desugar(b))))
        }
        Formula::Exists(x, a) => Formula::Exists(x.clone(), Box::new(desugar(a))),
        Formula::Forall(x, a) => Formula::not(Formula::Exists(
            x.clone(),
            Box::new(Formula::not(desugar(a))),
        )),
    }
}

/// The measure ⌊φ⌋: the maximum number of invisible heap locations a
/// quantifier-free formula can distinguish.
///
/// Panics on quantifiers or derived connectives (contract: input is
/// desugared and quantifier-free).
pub fn measure(f: &Formula) -> usize {
    match f {
        Formula::True | Formula::False | Formula::Eq(..) => 0,
        Formula::Emp | Formula::PointsTo(..) => 1,
        Formula::Sep(a, b) => measure(a) + measure(b),
        Formula::Wand(_, b) => measure(b),
        Formula::And(a, b) => measure(a).max(measure(b)),
        Formula::Not(a) => measure(a),
        Formula::Or(..) | Formula::Implies(..) => {
            panic!("measure: contract violation, derived connective in input (desugar first)")
        }
        Formula::Exists(..) | Formula::Forall(..) => {
            panic!("measure: contract violation, quantifier in input")
        }
    }
}

/// Error for inputs outside the ∃*∀* fragment.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("formula is not in the exists*forall* fragment: {0}")]
pub struct FragmentError(pub String);

/// Functional form of an ∃*∀* sentence: leading existentials replaced by
/// fresh Skolem constants, universals retained, matrix quantifier-free
/// and miniscoped into conjuncts.
#[derive(Debug, Clone)]
pub struct PrenexInput {
    /// Skolem constants, in prefix order.
    pub skolems: Vec<String>,
    /// Universal variables, in prefix order.
    pub universals: Vec<String>,
    /// Quantifier-free, desugared matrix.
    pub matrix: Formula,
    /// Miniscoped top-level conjuncts of the matrix.
    pub conjuncts: Vec<Conjunct>,
    /// Declared problem constants occurring free, nil excluded.
    pub consts: Vec<String>,
    /// Tuple arity of the data sort.
    pub k: usize,
}

/// One miniscoped conjunct; `ground` records that no universal variable
/// occurs, so quantification over it can be omitted.
#[derive(Debug, Clone)]
pub struct Conjunct {
    pub formula: Formula,
    pub ground: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quant {
    Ex,
    All,
}

/// Polarity-aware prenex extraction. Returns the quantifier prefix (in
/// positive-position terms) and the matrix, or the offending alternation.
fn prenex(f: &Formula, fresh: &mut FreshNames) -> Result<(Vec<(Quant, String)>, Formula), FragmentError> {
    match f {
        Formula::True | Formula::False | Formula::Eq(..) | Formula::Emp | Formula::PointsTo(..) => {
            Ok((Vec::new(), f.clone()))
        }
        Formula::Exists(x, a) => {
            let name = fresh.take(x);
            let mut map = HashMap::new();
            map.insert(x.clone(), LocTerm::Var(name.clone()));
            let (mut pre, m) = prenex(&a.subst_vars(&map), fresh)?;
            pre.insert(0, (Quant::Ex, name));
            Ok((pre, m))
        }
        Formula::Not(a) => {
            let (pre, m) = prenex(a, fresh)?;
            let flipped = pre
                .into_iter()
                .map(|(q, x)| (if q == Quant::Ex { Quant::All } else { Quant::Ex }, x))
                .collect();
            Ok((flipped, Formula::not(m)))
        }
        Formula::And(a, b) => {
            let (pa, ma) = prenex(a, fresh)?;
            let (pb, mb) = prenex(b, fresh)?;
            let pa = require_ea(pa, "∧")?;
            let pb = require_ea(pb, "∧")?;
            Ok((merge_ea(pa, pb), Formula::and(ma, mb)))
        }
        Formula::Sep(a, b) => {
            // ∃ distributes over ∗; a positive ∀ under ∗ leaves the fragment.
            let (pa, ma) = prenex(a, fresh)?;
            let (pb, mb) = prenex(b, fresh)?;
            let pa = require_only(pa, Quant::Ex, "∀ under ∗")?;
            let pb = require_only(pb, Quant::Ex, "∀ under ∗")?;
            Ok((pa.into_iter().chain(pb).collect(), Formula::sep(ma, mb)))
        }
        Formula::Wand(a, b) => {
            // (∃x.a) −∗ b  ≡  ∀x.(a −∗ b); b-side universals commute out.
            let (pa, ma) = prenex(a, fresh)?;
            let (pb, mb) = prenex(b, fresh)?;
            let pa = require_only(pa, Quant::Ex, "∀ on the left of −∗")?;
            let pb = require_only(pb, Quant::All, "∃ on the right of −∗")?;
            let mut pre: Vec<(Quant, String)> =
                pa.into_iter().map(|(_, x)| (Quant::All, x)).collect();
            pre.extend(pb);
            Ok((pre, Formula::wand(ma, mb)))
        }
        Formula::Or(..) | Formula::Implies(..) | Formula::Forall(..) => {
            panic!("prenex: contract violation, input must be desugared")
        }
    }
}

/// Checks that a prefix is ∃*∀*; reports the offending alternation.
fn require_ea(
    pre: Vec<(Quant, String)>,
    ctx: &str,
) -> Result<(Vec<String>, Vec<String>), FragmentError> {
    let mut ex = Vec::new();
    let mut all = Vec::new();
    for (q, x) in pre {
        match q {
            Quant::Ex if all.is_empty() => ex.push(x),
            Quant::Ex => {
                return Err(FragmentError(format!(
                    "existential {x} after a universal under {ctx} yields a ∀∃ alternation"
                )))
            }
            Quant::All => all.push(x),
        }
    }
    Ok((ex, all))
}

fn require_only(
    pre: Vec<(Quant, String)>,
    want: Quant,
    ctx: &str,
) -> Result<Vec<(Quant, String)>, FragmentError> {
    if let Some((_, x)) = pre.iter().find(|(q, _)| *q != want) {
        return Err(FragmentError(format!("quantified variable {x}: {ctx}")));
    }
    Ok(pre)
}

fn merge_ea(a: (Vec<String>, Vec<String>), b: (Vec<String>, Vec<String>)) -> Vec<(Quant, String)> {
    let mut out: Vec<(Quant, String)> = Vec::new();
    out.extend(a.0.into_iter().map(|x| (Quant::Ex, x)));
    out.extend(b.0.into_iter().map(|x| (Quant::Ex, x)));
    out.extend(a.1.into_iter().map(|x| (Quant::All, x)));
    out.extend(b.1.into_iter().map(|x| (Quant::All, x)));
    out
}

/// Fresh-name generation with collision avoidance. Fresh names reuse the
/// requested base and append `!<n>` only on collision; `!` cannot occur in
/// parsed identifiers, so the suffixed namespace is reserved.
#[derive(Debug, Default, Clone)]
pub struct FreshNames {
    used: HashSet<String>,
}

impl FreshNames {
    pub fn reserving<I: IntoIterator<Item = String>>(names: I) -> Self {
        FreshNames {
            used: names.into_iter().collect(),
        }
    }

    /// Claims `base` if unused, otherwise `base!1`, `base!2`, ...
    pub fn take(&mut self, base: &str) -> String {
        if self.used.insert(base.to_string()) {
            return base.to_string();
        }
        let mut i = 1usize;
        loop {
            let cand = format!("{base}!{i}");
            if self.used.insert(cand.clone()) {
                return cand;
            }
            i += 1;
        }
    }
}

/// Converts a sentence (after desugaring) into functional form: prenex
/// normalization, Skolemization of the ∃ prefix, and miniscoping of the
/// matrix. `consts` lists declared problem constants; `k` is the data
/// arity.
pub fn functional_form(
    f: &Formula,
    consts: &[String],
    k: usize,
) -> Result<PrenexInput, FragmentError> {
    let g = desugar(f);
    let mut fresh = FreshNames::reserving(
        g.all_names()
            .into_iter()
            .chain(consts.iter().cloned())
            .chain(std::iter::once(NIL.to_string())),
    );
    let (pre, matrix) = prenex(&g, &mut fresh)?;
    let (ex, all) = require_ea(pre, "the top-level prefix")?;

    // Skolemize: each ∃x becomes a fresh constant named k_<x>.
    let mut map = HashMap::new();
    let mut skolems = Vec::new();
    for x in &ex {
        let name = fresh.take(&format!("k_{x}"));
        map.insert(x.clone(), LocTerm::Const(name.clone()));
        skolems.push(name);
    }
    let matrix = matrix.subst_vars(&map);
    let conjuncts = miniscope(&matrix, &all);
    Ok(PrenexInput {
        skolems,
        universals: all,
        matrix,
        conjuncts,
        consts: consts.to_vec(),
        k,
    })
}

/// Splits the top-level conjunction of a quantifier-free matrix into
/// conjuncts φ₁..φ_p and flags those not containing any universal
/// variable as ground. The conjunction of the result is syntactically the
/// matrix.
pub fn miniscope(matrix: &Formula, universals: &[String]) -> Vec<Conjunct> {
    fn split<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
        if let Formula::And(a, b) = f {
            split(a, out);
            split(b, out);
        } else {
            out.push(f);
        }
    }
    let mut parts = Vec::new();
    split(matrix, &mut parts);
    parts
        .into_iter()
        .map(|p| {
            let fv = p.free_vars();
            Conjunct {
                formula: p.clone(),
                ground: !universals.iter().any(|y| fv.contains(y)),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> LocTerm {
        LocTerm::var(n)
    }

    fn c(n: &str) -> LocTerm {
        LocTerm::cst(n)
    }

    #[test]
    fn desugar_or_is_de_morgan() {
        let a = Formula::eq(c("a"), c("b"));
        let b = Formula::Emp;
        let d = desugar(&Formula::or(a.clone(), b.clone()));
        assert_eq!(
            d,
            Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
        );
    }

    #[test]
    fn desugar_forall_is_not_exists_not() {
        let body = Formula::eq(v("y"), LocTerm::Nil);
        let d = desugar(&Formula::forall("y", body.clone()));
        assert_eq!(
            d,
            Formula::not(Formula::exists("y", Formula::not(body)))
        );
    }

    #[test]
    fn desugar_keeps_core_connectives() {
        let f = Formula::and(Formula::Emp, Formula::eq(c("a"), c("b")));
        assert_eq!(desugar(&f), f);
    }

    #[test]
    fn measure_of_worked_example_matrix_is_one() {
        // x≉y ∧ x↦z ∧ ¬x↦u
        let f = Formula::and(
            Formula::not(Formula::eq(c("x"), c("y"))),
            Formula::and(
                Formula::pto(c("x"), vec![c("z")]),
                Formula::not(Formula::pto(c("x"), vec![c("u")])),
            ),
        );
        assert_eq!(measure(&f), 1);
    }

    #[test]
    fn measure_table_cases() {
        assert_eq!(measure(&Formula::Emp), 1);
        assert_eq!(measure(&Formula::eq(c("x"), c("y"))), 0);
        assert_eq!(
            measure(&Formula::sep(
                Formula::pto(c("x"), vec![c("y")]),
                Formula::pto(c("y"), vec![c("z")]),
            )),
            2
        );
        let w = Formula::wand(Formula::Emp, Formula::eq(c("x"), c("y")));
        assert_eq!(measure(&w), 0);
        assert_eq!(measure(&Formula::True), 0);
    }

    #[test]
    #[should_panic(expected = "contract violation")]
    fn measure_rejects_quantifiers() {
        measure(&Formula::exists("x", Formula::Emp));
    }

    #[test]
    fn functional_form_of_worked_example() {
        // ∃x∃y∃z ∀u. x≉y ∧ x↦z ∧ ¬x↦u
        let body = Formula::and(
            Formula::not(Formula::eq(v("x"), v("y"))),
            Formula::and(
                Formula::pto(v("x"), vec![v("z")]),
                Formula::not(Formula::pto(v("x"), vec![v("u")])),
            ),
        );
        let f = Formula::exists(
            "x",
            Formula::exists(
                "y",
                Formula::exists("z", Formula::forall("u", body)),
            ),
        );
        let pi = functional_form(&f, &[], 1).unwrap();
        assert_eq!(pi.skolems, vec!["k_x", "k_y", "k_z"]);
        assert_eq!(pi.universals, vec!["u"]);
        assert_eq!(pi.conjuncts.len(), 3);
        assert!(pi.conjuncts[0].ground);
        assert!(pi.conjuncts[1].ground);
        assert!(!pi.conjuncts[2].ground);
        assert_eq!(
            pi.conjuncts[1].formula,
            Formula::pto(c("k_x"), vec![c("k_z")])
        );
        assert!(pi.matrix.is_quantifier_free());
    }

    #[test]
    fn functional_form_quantifier_free_input() {
        let f = Formula::Emp;
        let pi = functional_form(&f, &[], 1).unwrap();
        assert!(pi.skolems.is_empty());
        assert!(pi.universals.is_empty());
        assert_eq!(pi.matrix, Formula::Emp);
        assert_eq!(pi.conjuncts.len(), 1);
    }

    #[test]
    fn functional_form_rejects_alternation() {
        // ∃x∀y∃z. x≈z
        let f = Formula::exists(
            "x",
            Formula::forall("y", Formula::exists("z", Formula::eq(v("x"), v("z")))),
        );
        assert!(functional_form(&f, &[], 1).is_err());
    }

    #[test]
    fn prenex_pulls_existentials_out_of_sep() {
        // ∃x. (x↦x) ∗ (∃z. z↦z) is ∃*∀*-convertible
        let f = Formula::exists(
            "x",
            Formula::sep(
                Formula::pto(v("x"), vec![v("x")]),
                Formula::exists("z", Formula::pto(v("z"), vec![v("z")])),
            ),
        );
        let pi = functional_form(&f, &[], 1).unwrap();
        assert_eq!(pi.skolems.len(), 2);
        assert!(pi.universals.is_empty());
    }

    #[test]
    fn prenex_rejects_universal_under_sep() {
        let f = Formula::sep(
            Formula::forall("y", Formula::not(Formula::pto(v("y"), vec![v("y")]))),
            Formula::Emp,
        );
        assert!(functional_form(&f, &[], 1).is_err());
    }

    #[test]
    fn prenex_negated_exists_under_sep_becomes_universal() {
        // ¬(emp ∗ ∃z. z↦z)  ≡  ∀z. ¬(emp ∗ z↦z)
        let f = Formula::not(Formula::sep(
            Formula::Emp,
            Formula::exists("z", Formula::pto(v("z"), vec![v("z")])),
        ));
        let pi = functional_form(&f, &[], 1).unwrap();
        assert!(pi.skolems.is_empty());
        assert_eq!(pi.universals, vec!["z"]);
    }

    #[test]
    fn wand_left_exists_flips_to_universal() {
        let f = Formula::wand(
            Formula::exists("z", Formula::pto(v("z"), vec![v("z")])),
            Formula::False,
        );
        let pi = functional_form(&f, &[], 1).unwrap();
        assert_eq!(pi.universals, vec!["z"]);
    }

    #[test]
    fn miniscope_ground_flags() {
        let matrix = Formula::and(
            Formula::eq(c("p"), c("q")),
            Formula::pto(c("p"), vec![v("y")]),
        );
        let cs = miniscope(&matrix, &["y".to_string()]);
        assert_eq!(cs.len(), 2);
        assert!(cs[0].ground);
        assert!(!cs[1].ground);
        // conjunction of outputs is syntactically the matrix
        let back = Formula::and_all(cs.into_iter().map(|c| c.formula).collect());
        assert_eq!(back, matrix);
    }

    #[test]
    fn miniscope_single_conjunct() {
        let matrix = Formula::not(Formula::Emp);
        let cs = miniscope(&matrix, &[]);
        assert_eq!(cs.len(), 1);
        assert!(cs[0].ground);
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let mut fr = FreshNames::reserving(vec!["k_x".to_string()]);
        assert_eq!(fr.take("k_x"), "k_x!1");
        assert_eq!(fr.take("k_x"), "k_x!2");
        assert_eq!(fr.take("e_u"), "e_u");
    }

    #[test]
    fn shadowed_binders_are_renamed_apart() {
        // ∃x. x↦x ∧ ∃x. x≈nil — inner x must get a fresh name
        let f = Formula::exists(
            "x",
            Formula::and(
                Formula::pto(v("x"), vec![v("x")]),
                Formula::exists("x", Formula::eq(v("x"), LocTerm::Nil)),
            ),
        );
        let pi = functional_form(&f, &[], 1).unwrap();
        assert_eq!(pi.skolems.len(), 2);
        assert_ne!(pi.skolems[0], pi.skolems[1]);
    }
}

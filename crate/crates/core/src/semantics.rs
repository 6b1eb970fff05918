//! Finite interpretations, heaps, the satisfaction relation, and the
//! heap-equivalence machinery (=_S, ∼, prun, heap shrinking) behind the
//! small model property.

use crate::formula::{Formula, LocTerm, TupleTerm, NIL};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A location of the canonicalized universe 0..universe_size-1.
pub type Loc = usize;

/// A finite interpretation of the location sort: a universe size plus
/// valuations for constants (always including nil) and variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    pub universe: usize,
    pub consts: BTreeMap<String, Loc>,
    pub vars: BTreeMap<String, Loc>,
}

impl Interpretation {
    pub fn new(universe: usize) -> Self {
        assert!(universe >= 1, "universe must be non-empty");
        let mut consts = BTreeMap::new();
        consts.insert(NIL.to_string(), 0);
        Interpretation {
            universe,
            consts,
            vars: BTreeMap::new(),
        }
    }

    pub fn with_const(mut self, name: &str, loc: Loc) -> Self {
        self.set_const(name, loc);
        self
    }

    pub fn set_const(&mut self, name: &str, loc: Loc) {
        assert!(loc < self.universe, "location out of universe");
        self.consts.insert(name.to_string(), loc);
    }

    pub fn set_var(&mut self, name: &str, loc: Loc) {
        assert!(loc < self.universe, "location out of universe");
        self.vars.insert(name.to_string(), loc);
    }

    pub fn nil(&self) -> Loc {
        self.consts[NIL]
    }

    /// Value of a term; panics on unassigned symbols (contract violation).
    pub fn term_value(&self, t: &LocTerm) -> Loc {
        match t {
            LocTerm::Nil => self.nil(),
            LocTerm::Var(n) => *self
                .vars
                .get(n)
                .unwrap_or_else(|| panic!("eval: contract violation, unassigned variable {n}")),
            LocTerm::Const(n) => *self
                .consts
                .get(n)
                .unwrap_or_else(|| panic!("eval: contract violation, unassigned constant {n}")),
        }
    }

    /// Values of a set of symbol names (variables or constants).
    pub fn image(&self, names: &BTreeSet<String>) -> BTreeSet<Loc> {
        names
            .iter()
            .map(|n| {
                if n == NIL {
                    self.nil()
                } else if let Some(v) = self.vars.get(n) {
                    *v
                } else if let Some(v) = self.consts.get(n) {
                    *v
                } else {
                    panic!("image: contract violation, unassigned symbol {n}")
                }
            })
            .collect()
    }
}

/// A heap: a finite partial map from locations to k-tuples of locations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Heap {
    cells: BTreeMap<Loc, Vec<Loc>>,
}

impl Heap {
    pub fn empty() -> Self {
        Heap::default()
    }

    pub fn from_cells(cells: impl IntoIterator<Item = (Loc, Vec<Loc>)>) -> Self {
        Heap {
            cells: cells.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, loc: Loc, data: Vec<Loc>) {
        self.cells.insert(loc, data);
    }

    pub fn get(&self, loc: Loc) -> Option<&Vec<Loc>> {
        self.cells.get(&loc)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = Loc> + '_ {
        self.cells.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Loc, &Vec<Loc>)> {
        self.cells.iter().map(|(l, d)| (*l, d))
    }

    pub fn contains(&self, loc: Loc) -> bool {
        self.cells.contains_key(&loc)
    }

    /// Checks every domain location and tuple component is < universe.
    pub fn well_formed(&self, universe: usize) -> bool {
        self.cells
            .iter()
            .all(|(l, d)| *l < universe && d.iter().all(|v| *v < universe))
    }

    /// Disjoint union; panics if the domains overlap.
    pub fn union(&self, other: &Heap) -> Heap {
        let mut out = self.clone();
        for (l, d) in other.iter() {
            let prev = out.cells.insert(l, d.clone());
            assert!(prev.is_none(), "heap union: domains overlap at {l}");
        }
        out
    }
}

impl fmt::Display for Heap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (l, d) in self.iter() {
            write!(f, "heap {l} -> (")?;
            for (i, v) in d.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            writeln!(f, ")")?;
        }
        Ok(())
    }
}

/// A model: an interpretation paired with a heap over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub interp: Interpretation,
    pub heap: Heap,
}

impl Model {
    /// Text dump: `universe N`, `const <name> = <loc>` lines, `heap` lines.
    pub fn dump(&self) -> String {
        let mut out = format!("universe {}\n", self.interp.universe);
        for (name, loc) in &self.interp.consts {
            out.push_str(&format!("const {name} = {loc}\n"));
        }
        for (l, d) in self.heap.iter() {
            let comps: Vec<String> = d.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("heap {l} -> ({})\n", comps.join(",")));
        }
        out
    }
}

/// Evaluation options. The default follows the satisfaction relation
/// literally: heaps (including wand extensions) may allocate nil.
#[derive(Debug, Clone, Copy, Default)]
pub struct EvalOptions {
    /// Restrict wand extension heaps to never allocate nil (SL-COMP
    /// convention). Off by default.
    pub forbid_nil_alloc: bool,
}

/// The satisfaction relation I,h ⊨ f over a finite universe. Total over
/// the sugared grammar as well, so desugaring preservation is testable.
pub fn eval(interp: &Interpretation, heap: &Heap, f: &Formula) -> bool {
    eval_opts(interp, heap, f, EvalOptions::default())
}

pub fn eval_opts(interp: &Interpretation, heap: &Heap, f: &Formula, opts: EvalOptions) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Eq(a, b) => interp.term_value(a) == interp.term_value(b),
        Formula::Emp => heap.is_empty(),
        Formula::PointsTo(src, TupleTerm(data)) => {
            let s = interp.term_value(src);
            if s == interp.nil() || heap.len() != 1 {
                return false;
            }
            match heap.get(s) {
                Some(cell) => {
                    cell.len() == data.len()
                        && cell
                            .iter()
                            .zip(data)
                            .all(|(v, t)| *v == interp.term_value(t))
                }
                None => false,
            }
        }
        Formula::And(a, b) => eval_opts(interp, heap, a, opts) && eval_opts(interp, heap, b, opts),
        Formula::Or(a, b) => eval_opts(interp, heap, a, opts) || eval_opts(interp, heap, b, opts),
        Formula::Not(a) => !eval_opts(interp, heap, a, opts),
        Formula::Implies(a, b) => {
            !eval_opts(interp, heap, a, opts) || eval_opts(interp, heap, b, opts)
        }
        Formula::Sep(a, b) => {
            // all partitions h = h1 ⊎ h2
            let cells: Vec<(Loc, Vec<Loc>)> = heap.iter().map(|(l, d)| (l, d.clone())).collect();
            let n = cells.len();
            for mask in 0..(1usize << n) {
                let mut h1 = Heap::empty();
                let mut h2 = Heap::empty();
                for (i, (l, d)) in cells.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        h1.insert(*l, d.clone());
                    } else {
                        h2.insert(*l, d.clone());
                    }
                }
                if eval_opts(interp, &h1, a, opts) && eval_opts(interp, &h2, b, opts) {
                    return true;
                }
            }
            false
        }
        Formula::Wand(a, b) => {
            // all extension heaps h' disjoint from h, over the finite universe
            let k = wand_arity(a, b).unwrap_or(1);
            let mut free: Vec<Loc> = (0..interp.universe).filter(|l| !heap.contains(*l)).collect();
            if opts.forbid_nil_alloc {
                free.retain(|l| *l != interp.nil());
            }
            all_extensions_hold(interp, heap, a, b, &free, 0, &Heap::empty(), k, opts)
        }
        Formula::Exists(x, a) => {
            let mut i2 = interp.clone();
            (0..interp.universe).any(|v| {
                i2.vars.insert(x.clone(), v);
                eval_opts(&i2, heap, a, opts)
            })
        }
        Formula::Forall(x, a) => {
            let mut i2 = interp.clone();
            (0..interp.universe).all(|v| {
                i2.vars.insert(x.clone(), v);
                eval_opts(&i2, heap, a, opts)
            })
        }
    }
}

/// Tuple arity used for wand extension cells, read off any points-to atom.
fn wand_arity(a: &Formula, b: &Formula) -> Option<usize> {
    fn find(f: &Formula) -> Option<usize> {
        match f {
            Formula::PointsTo(_, t) => Some(t.arity()),
            Formula::Sep(a, b)
            | Formula::Wand(a, b)
            | Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b) => find(a).or_else(|| find(b)),
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => find(a),
            _ => None,
        }
    }
    find(a).or_else(|| find(b))
}

#[allow(clippy::too_many_arguments)]
fn all_extensions_hold(
    interp: &Interpretation,
    heap: &Heap,
    a: &Formula,
    b: &Formula,
    free: &[Loc],
    idx: usize,
    ext: &Heap,
    k: usize,
    opts: EvalOptions,
) -> bool {
    if idx == free.len() {
        if eval_opts(interp, ext, a, opts) {
            let joined = heap.union(ext);
            if !eval_opts(interp, &joined, b, opts) {
                return false;
            }
        }
        return true;
    }
    // location free[idx] stays unallocated ...
    if !all_extensions_hold(interp, heap, a, b, free, idx + 1, ext, k, opts) {
        return false;
    }
    // ... or carries any k-tuple of universe values
    let mut tuple = vec![0usize; k];
    loop {
        let mut ext2 = ext.clone();
        ext2.insert(free[idx], tuple.clone());
        if !all_extensions_hold(interp, heap, a, b, free, idx + 1, &ext2, k, opts) {
            return false;
        }
        // next tuple, odometer-style
        let mut i = 0;
        loop {
            if i == k {
                return true;
            }
            tuple[i] += 1;
            if tuple[i] < interp.universe {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}

/// The equivalence =_S between k-tuples: S-members must match exactly,
/// non-members must map to non-members.
pub fn eq_mod_s(v: &[Loc], w: &[Loc], s: &BTreeSet<Loc>) -> bool {
    assert_eq!(v.len(), w.len(), "eq_mod_s: arity mismatch");
    v.iter().zip(w).all(|(a, b)| {
        if s.contains(a) {
            a == b
        } else {
            !s.contains(b)
        }
    })
}

/// Replaces every tuple component outside S by the location `l`.
pub fn prun(v: &[Loc], s: &BTreeSet<Loc>, l: Loc) -> Vec<Loc> {
    v.iter()
        .map(|x| if s.contains(x) { *x } else { l })
        .collect()
}

/// Parameters of the heap equivalence ∼: the invisible-cell threshold n,
/// the visible symbols X, and the location set S refining tuple equality.
#[derive(Debug, Clone)]
pub struct EquivParams {
    pub n: usize,
    pub x: BTreeSet<String>,
    pub s: BTreeSet<Loc>,
}

/// The heap equivalence h ∼_{n,X,S} h': same visible cells with
/// S-equivalent contents, and matching invisible-cell counts up to the
/// threshold n.
pub fn heap_equiv(interp: &Interpretation, params: &EquivParams, h: &Heap, h2: &Heap) -> bool {
    assert!(params.n >= 1, "heap_equiv: n must be positive");
    let ix = interp.image(&params.x);
    let vis: BTreeSet<Loc> = h.domain().filter(|l| ix.contains(l)).collect();
    let vis2: BTreeSet<Loc> = h2.domain().filter(|l| ix.contains(l)).collect();
    // (1) same visible domain
    if vis != vis2 {
        return false;
    }
    // (2) visible contents equal modulo I(X) ∪ S
    let mut s_all = ix.clone();
    s_all.extend(params.s.iter().copied());
    for l in &vis {
        if !eq_mod_s(h.get(*l).unwrap(), h2.get(*l).unwrap(), &s_all) {
            return false;
        }
    }
    // (3)/(4) invisible-cell counts agree up to n
    let inv = h.domain().filter(|l| !ix.contains(l)).count();
    let inv2 = h2.domain().filter(|l| !ix.contains(l)).count();
    if inv < params.n {
        inv == inv2
    } else {
        inv2 >= params.n
    }
}

/// Shrinks a heap per the small-model construction: visible cells are
/// kept with pruned values; up to n invisible cells survive (selected in
/// ascending location order) and are mapped injectively onto L, also with
/// pruned values.
///
/// Preconditions (panic on violation): L ∩ I(X) = ∅, |L| = n,
/// v ∉ I(X) ∪ {nil} ∪ L.
pub fn shrink_heap(
    interp: &Interpretation,
    h: &Heap,
    n: usize,
    x: &BTreeSet<String>,
    l_set: &BTreeSet<Loc>,
    v: Loc,
) -> Heap {
    let ix = interp.image(x);
    assert!(l_set.is_disjoint(&ix), "shrink_heap: L ∩ I(X) must be empty");
    assert_eq!(l_set.len(), n, "shrink_heap: |L| must equal n");
    assert!(
        !ix.contains(&v) && v != interp.nil() && !l_set.contains(&v),
        "shrink_heap: v must avoid I(X) ∪ {{nil}} ∪ L"
    );

    let mut keep: BTreeSet<Loc> = ix.clone();
    keep.extend(l_set.iter().copied());

    let mut out = Heap::empty();
    for (loc, data) in h.iter() {
        if ix.contains(&loc) {
            out.insert(loc, prun(data, &keep, v));
        }
    }
    // survivors: first n invisible cells in ascending location order,
    // relocated onto L (cells already sitting in L keep their spot)
    let invisible: Vec<Loc> = h.domain().filter(|l| !ix.contains(l)).collect();
    let survivors: Vec<Loc> = invisible.into_iter().take(n).collect();
    let mut targets: Vec<Loc> = l_set
        .iter()
        .copied()
        .filter(|t| !survivors.contains(t))
        .collect();
    targets.reverse();
    for loc in survivors {
        let data = prun(h.get(loc).unwrap(), &keep, v);
        if l_set.contains(&loc) {
            out.insert(loc, data);
        } else {
            out.insert(targets.pop().expect("|L| = n bounds the survivors"), data);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{desugar, measure, Formula};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn interp3() -> Interpretation {
        // universe {0,1,2,3}, nil=0, x=1, y=2, z=3
        Interpretation::new(4)
            .with_const("x", 1)
            .with_const("y", 2)
            .with_const("z", 3)
    }

    fn c(n: &str) -> LocTerm {
        LocTerm::cst(n)
    }

    #[test]
    fn emp_holds_on_empty_heap() {
        let i = Interpretation::new(1);
        assert!(eval(&i, &Heap::empty(), &Formula::Emp));
        let h = Heap::from_cells([(0, vec![0])]);
        assert!(!eval(&i, &h, &Formula::Emp));
    }

    #[test]
    fn points_to_requires_non_nil_source() {
        // nil=0, x=0, y=1; h = {0 ↦ (1)}; x↦y is false because x = nil
        let i = Interpretation::new(2).with_const("x", 0).with_const("y", 1);
        let h = Heap::from_cells([(0, vec![1])]);
        assert!(!eval(&i, &h, &Formula::pto(c("x"), vec![c("y")])));
    }

    #[test]
    fn sep_two_cells() {
        let i = interp3();
        let h = Heap::from_cells([(1, vec![2]), (2, vec![3])]);
        let f = Formula::sep(
            Formula::pto(c("x"), vec![c("y")]),
            Formula::pto(c("y"), vec![c("z")]),
        );
        assert!(eval(&i, &h, &f));
        // and the atoms alone fail on the two-cell heap
        assert!(!eval(&i, &h, &Formula::pto(c("x"), vec![c("y")])));
    }

    #[test]
    fn alloc_macro_tracks_domain_membership() {
        // universe {0,1}, nil=0, x=1
        let i = Interpretation::new(2).with_const("x", 1);
        let alloc_x = Formula::alloc(c("x"), 1);
        assert!(!eval(&i, &Heap::empty(), &alloc_x));
        let h = Heap::from_cells([(1, vec![1])]);
        assert!(eval(&i, &h, &alloc_x));
        // nil counts as allocated: no extension can satisfy nil ↦ _
        let alloc_nil = Formula::alloc(LocTerm::Nil, 1);
        assert!(eval(&i, &Heap::empty(), &alloc_nil));
    }

    #[test]
    fn forbid_nil_alloc_changes_wand_extensions() {
        // ¬emp −∗ ⊥ over universe {nil}: with nil allocation allowed there
        // is a falsifying extension; without it the wand is vacuous.
        let i = Interpretation::new(1);
        let f = Formula::wand(Formula::not(Formula::Emp), Formula::False);
        assert!(!eval(&i, &Heap::empty(), &f));
        let opts = EvalOptions {
            forbid_nil_alloc: true,
        };
        assert!(eval_opts(&i, &Heap::empty(), &f, opts));
    }

    #[test]
    fn quantifiers_range_over_universe() {
        let i = interp3();
        let h = Heap::from_cells([(1, vec![2])]);
        let f = Formula::exists(
            "w",
            Formula::pto(LocTerm::var("w"), vec![LocTerm::var("w")]),
        );
        assert!(!eval(&i, &h, &f));
        let g = Formula::exists("w", Formula::pto(c("x"), vec![LocTerm::var("w")]));
        assert!(eval(&i, &h, &g));
    }

    #[test]
    fn eq_mod_s_examples() {
        let s: BTreeSet<Loc> = [1, 2].into_iter().collect();
        assert!(eq_mod_s(&[1, 5], &[1, 7], &s));
        assert!(!eq_mod_s(&[1, 5], &[2, 5], &s));
        assert!(eq_mod_s(&[3, 4], &[3, 4], &s));
    }

    #[test]
    fn prun_examples() {
        let s: BTreeSet<Loc> = [1, 2].into_iter().collect();
        assert_eq!(prun(&[1, 5], &s, 9), vec![1, 9]);
        assert_eq!(prun(&[1, 2], &s, 9), vec![1, 2]);
        assert_eq!(prun(&[5, 6], &s, 9), vec![9, 9]);
    }

    #[test]
    fn heap_equiv_reflexive() {
        let i = interp3();
        let h = Heap::from_cells([(1, vec![2]), (3, vec![0])]);
        let params = EquivParams {
            n: 2,
            x: ["x".to_string()].into_iter().collect(),
            s: BTreeSet::new(),
        };
        assert!(heap_equiv(&i, &params, &h, &h));
    }

    #[test]
    fn heap_equiv_counts_above_threshold() {
        // invisible-cell counts 1 vs 2 with n=1: equivalent (both ≥ n)
        let i = Interpretation::new(5).with_const("x", 1);
        let x: BTreeSet<String> = ["x".to_string()].into_iter().collect();
        let h1 = Heap::from_cells([(1, vec![0]), (2, vec![0])]);
        let h2 = Heap::from_cells([(1, vec![0]), (3, vec![0]), (4, vec![0])]);
        let p1 = EquivParams {
            n: 1,
            x: x.clone(),
            s: BTreeSet::new(),
        };
        assert!(heap_equiv(&i, &p1, &h1, &h2));
        // with n=3 both counts are below the threshold and differ: not equivalent
        let p3 = EquivParams {
            n: 3,
            x,
            s: BTreeSet::new(),
        };
        assert!(!heap_equiv(&i, &p3, &h1, &h2));
    }

    #[test]
    fn shrink_keeps_visible_cells() {
        let i = Interpretation::new(6).with_const("x", 1);
        let x: BTreeSet<String> = ["x".to_string()].into_iter().collect();
        let h = Heap::from_cells([(1, vec![5])]);
        let l: BTreeSet<Loc> = [2].into_iter().collect();
        let h2 = shrink_heap(&i, &h, 1, &x, &l, 3);
        assert_eq!(h2.len(), 1);
        // value 5 is outside I(X) ∪ L, so it is pruned to v=3
        assert_eq!(h2.get(1), Some(&vec![3]));
    }

    #[test]
    fn shrink_relocates_surplus_invisible_cells() {
        let i = Interpretation::new(10).with_const("x", 1);
        let x: BTreeSet<String> = ["x".to_string()].into_iter().collect();
        // five invisible cells
        let h = Heap::from_cells([
            (2, vec![2]),
            (4, vec![4]),
            (5, vec![5]),
            (6, vec![6]),
            (7, vec![7]),
        ]);
        let l: BTreeSet<Loc> = [2, 3].into_iter().collect();
        let h2 = shrink_heap(&i, &h, 2, &x, &l, 9);
        let dom: Vec<Loc> = h2.domain().collect();
        assert_eq!(dom, vec![2, 3]);
        let params = EquivParams {
            n: 2,
            x,
            s: l.clone(),
        };
        assert!(heap_equiv(&i, &params, &h, &h2));
    }

    #[test]
    fn shrink_empty_heap() {
        let i = Interpretation::new(4).with_const("x", 1);
        let x: BTreeSet<String> = ["x".to_string()].into_iter().collect();
        let l: BTreeSet<Loc> = [2].into_iter().collect();
        let h2 = shrink_heap(&i, &Heap::empty(), 1, &x, &l, 3);
        assert!(h2.is_empty());
    }

    // randomized checks for the equivalence laws and the shrink/transfer
    // lemmas; the acceptance suite runs larger counts

    fn rand_formula(rng: &mut StdRng, depth: usize, syms: &[&str], k: usize) -> Formula {
        let atom = |rng: &mut StdRng| -> Formula {
            let pick = |rng: &mut StdRng| -> LocTerm {
                let i = rng.gen_range(0..syms.len() + 1);
                if i == syms.len() {
                    LocTerm::Nil
                } else {
                    LocTerm::cst(syms[i])
                }
            };
            match rng.gen_range(0..4) {
                0 => Formula::Emp,
                1 => Formula::eq(pick(rng), pick(rng)),
                2 => {
                    let src = pick(rng);
                    let data = (0..k).map(|_| pick(rng)).collect();
                    Formula::pto(src, data)
                }
                _ => Formula::True,
            }
        };
        if depth == 0 {
            return atom(rng);
        }
        match rng.gen_range(0..5) {
            0 => Formula::and(
                rand_formula(rng, depth - 1, syms, k),
                rand_formula(rng, depth - 1, syms, k),
            ),
            1 => Formula::sep(
                rand_formula(rng, depth - 1, syms, k),
                rand_formula(rng, depth - 1, syms, k),
            ),
            2 => Formula::not(rand_formula(rng, depth - 1, syms, k)),
            3 => Formula::wand(atom(rng), rand_formula(rng, depth - 1, syms, k)),
            _ => atom(rng),
        }
    }

    #[test]
    fn lemma_transfer_smoke() {
        // eval is invariant under shrinking to measure-many invisible cells
        let mut rng = StdRng::seed_from_u64(7);
        let syms = ["a", "b"];
        for _ in 0..200 {
            let k = 1 + rng.gen_range(0..2usize);
            let f = desugar(&rand_formula(&mut rng, 2, &syms, k));
            let n = measure(&f).max(1);
            let fv: BTreeSet<String> = f
                .constants()
                .into_iter()
                .chain(std::iter::once(NIL.to_string()))
                .collect();
            // universe: nil + symbols + n cut-off slots + spare v
            let universe = 1 + syms.len() + n + 1 + 2;
            let mut interp = Interpretation::new(universe);
            for s in syms {
                interp.set_const(s, rng.gen_range(0..3));
            }
            let ix = interp.image(&fv);
            let l_set: BTreeSet<Loc> = (0..universe).filter(|l| !ix.contains(l)).take(n).collect();
            let v = (0..universe)
                .find(|l| !ix.contains(l) && !l_set.contains(l) && *l != interp.nil())
                .unwrap();
            let mut h = Heap::empty();
            for loc in 0..universe {
                if rng.gen_bool(0.4) {
                    let data: Vec<Loc> = (0..k).map(|_| rng.gen_range(0..universe)).collect();
                    h.insert(loc, data);
                }
            }
            let h2 = shrink_heap(&interp, &h, n, &fv, &l_set, v);
            assert_eq!(
                eval(&interp, &h, &f),
                eval(&interp, &h2, &f),
                "transfer failed for {f:?}"
            );
        }
    }

    #[test]
    fn sep_exactness_against_naive_enumerator() {
        // eval's partition search agrees with an independent enumerator of
        // all sub-heap pairs on tiny universes
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..300 {
            let k = 1 + rng.gen_range(0..2usize);
            let universe = 1 + rng.gen_range(0..3usize);
            let mut interp = Interpretation::new(universe);
            interp.set_const("a", rng.gen_range(0..universe));
            interp.set_const("b", rng.gen_range(0..universe));
            let mut h = Heap::empty();
            for loc in 0..universe {
                if rng.gen_bool(0.5) {
                    h.insert(loc, (0..k).map(|_| rng.gen_range(0..universe)).collect());
                }
            }
            let fa = desugar(&rand_formula(&mut rng, 1, &["a", "b"], k));
            let fb = desugar(&rand_formula(&mut rng, 1, &["a", "b"], k));
            let f = Formula::sep(fa.clone(), fb.clone());

            // independent: enumerate all (h1, h2) splits via subsets
            let cells: Vec<(Loc, Vec<Loc>)> = h.iter().map(|(l, d)| (l, d.clone())).collect();
            let mut expect = false;
            for mask in 0..(1usize << cells.len()) {
                let mut h1 = Heap::empty();
                let mut h2 = Heap::empty();
                for (i, (l, d)) in cells.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        h1.insert(*l, d.clone());
                    } else {
                        h2.insert(*l, d.clone());
                    }
                }
                if eval(&interp, &h1, &fa) && eval(&interp, &h2, &fb) {
                    expect = true;
                    break;
                }
            }
            assert_eq!(eval(&interp, &h, &f), expect);
        }
    }
}

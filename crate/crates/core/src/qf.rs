//! Ground (quantifier-free, variable-free) satisfiability by
//! small-model-bounded search with minimal-model preference and symmetry
//! breaking over cut-off constants.

use crate::formula::{measure, Formula, LocTerm, NIL};
use crate::semantics::{eval_opts, EvalOptions, Heap, Interpretation, Model};
use std::collections::HashMap;

/// Options controlling a ground satisfiability query.
#[derive(Debug, Clone)]
pub struct QfOptions {
    /// Forbid heaps (and wand extension heaps) from allocating nil.
    pub forbid_nil_alloc: bool,
    /// Step budget; one step per assignment attempt.
    pub budget: u64,
    /// Overrides the computed universe bound when set.
    pub max_universe: Option<usize>,
    /// Restrict heap domains and cell values to constant-denoted locations
    /// (plus one spare), justified by the small model property for queries
    /// produced by the instantiation engine. Standalone queries search the
    /// full universe.
    pub restrict_to_consts: bool,
}

impl Default for QfOptions {
    fn default() -> Self {
        QfOptions {
            forbid_nil_alloc: false,
            budget: 100_000_000,
            max_universe: None,
            restrict_to_consts: false,
        }
    }
}

/// A ground satisfiability query.
#[derive(Debug, Clone)]
pub struct QfQuery {
    /// Desugared, quantifier-free, variable-free formula.
    pub formula: Formula,
    /// Ordered constants of the query; nil is always included.
    pub constants: Vec<String>,
    /// Ordered cut-off constants subject to the symmetry-breaking
    /// directive: allocated cut-offs must form a prefix of this order.
    pub cutoffs: Vec<String>,
    /// Tuple arity of the data sort.
    pub k: usize,
    pub options: QfOptions,
}

impl QfQuery {
    pub fn new(formula: Formula, k: usize) -> Self {
        let mut constants = vec![NIL.to_string()];
        constants.extend(formula.constants());
        QfQuery {
            formula,
            constants,
            cutoffs: Vec::new(),
            k,
            options: QfOptions::default(),
        }
    }
}

/// Answer of a ground query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QfAnswer {
    Sat(Model),
    Unsat,
    ResourceOut,
}

/// The symmetry-breaking predicate: for cut-offs ℓ₁ ≺ ℓ₂, if ℓ₁ is
/// unallocated then so is ℓ₂.
pub fn symmetry_break(cutoffs: &[String], interp: &Interpretation, heap: &Heap) -> bool {
    let mut seen_unalloc = false;
    for c in cutoffs {
        let Some(loc) = interp.consts.get(c) else {
            continue;
        };
        if heap.contains(*loc) {
            if seen_unalloc {
                return false;
            }
        } else {
            seen_unalloc = true;
        }
    }
    true
}

/// Decides (SL,E)-satisfiability of a ground query. Sweeps universe sizes
/// 1..=B with B = ⌊φ⌋ + #constants + 2; the first satisfiable size yields
/// the answer, with the lexicographically least (valuation, heap) model in
/// canonical search order.
pub fn qf_sat(q: &QfQuery) -> QfAnswer {
    assert!(
        q.formula.is_quantifier_free() && q.formula.free_vars().is_empty(),
        "qf_sat: contract violation, query must be ground"
    );
    let mut kernel = Kernel::new(q);
    let bound = q
        .options
        .max_universe
        .unwrap_or_else(|| measure(&q.formula) + kernel.syms.len() + 2)
        .max(1);
    for s in 1..=bound {
        if kernel.wand_free && q.options.restrict_to_consts && s > kernel.syms.len() + 1 {
            // every location of a minimal model is constant-denoted or the
            // one spare; larger universes cannot be covered
            break;
        }
        match kernel.exists(s, &Pins::default()) {
            Outcome::Found => {
                let model = match kernel.lex_minimize(s) {
                    Some(m) => m,
                    None => return QfAnswer::ResourceOut,
                };
                debug_assert!(eval_opts(
                    &model.interp,
                    &model.heap,
                    &q.formula,
                    kernel.eopts
                ));
                return QfAnswer::Sat(model);
            }
            Outcome::Exhausted => continue,
            Outcome::Out => return QfAnswer::ResourceOut,
        }
    }
    QfAnswer::Unsat
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tri {
    F,
    U,
    T,
}

impl Tri {
    fn of(b: bool) -> Tri {
        if b {
            Tri::T
        } else {
            Tri::F
        }
    }

    fn not(self) -> Tri {
        match self {
            Tri::T => Tri::F,
            Tri::F => Tri::T,
            Tri::U => Tri::U,
        }
    }

    fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::F, _) | (_, Tri::F) => Tri::F,
            (Tri::T, Tri::T) => Tri::T,
            _ => Tri::U,
        }
    }

    fn or(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::T, _) | (_, Tri::T) => Tri::T,
            (Tri::F, Tri::F) => Tri::F,
            _ => Tri::U,
        }
    }
}

const INF: usize = usize::MAX / 4;

/// Interval of heap sizes on which a node can be true / false.
#[derive(Debug, Clone, Copy)]
struct SizeIv {
    t_lo: usize,
    t_hi: usize,
}

type NodeId = usize;

/// Negation-normal internal representation; Sep subtrees are flattened.
#[derive(Debug, Clone)]
enum NKind {
    True,
    False,
    Eq(usize, usize),
    Ne(usize, usize),
    Emp,
    NotEmp,
    /// pos: heap is exactly the one cell; neg: it is not.
    Pto {
        src: usize,
        data: Vec<usize>,
        pos: bool,
    },
    /// `t ↦ (..) −∗ ⊥`: source location is allocated (or nil).
    Alloc {
        src: usize,
        pos: bool,
    },
    And(Vec<NodeId>),
    Or(Vec<NodeId>),
    Sep(Vec<NodeId>),
    NotSep(Vec<NodeId>),
    /// General wand, evaluated exactly once the sub-heap is concrete.
    Opaque {
        formula: usize,
        pos: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dom {
    In,
    Out,
    Undec,
}

#[derive(Debug, Default, Clone)]
struct Pins {
    val: Vec<Option<usize>>,
    dom_size: Option<usize>,
    /// (location, must_be_in)
    dom: Vec<(usize, bool)>,
    /// (location, component, value)
    cells: Vec<(usize, usize, usize)>,
}

enum Outcome {
    Found,
    Exhausted,
    Out,
}

enum Res {
    Found,
    Exhausted(u64),
    Out,
}

struct Kernel<'q> {
    q: &'q QfQuery,
    /// Query constants, deduplicated, nil first.
    syms: Vec<String>,
    nodes: Vec<NKind>,
    ivs: Vec<SizeIv>,
    conjuncts: Vec<NodeId>,
    opaque: Vec<Formula>,
    cutoff_idx: Vec<usize>,
    wand_free: bool,
    eopts: EvalOptions,
    steps: u64,
    // per-size search state
    s: usize,
    val: Vec<Option<usize>>,
    cands: Vec<usize>,
    dom: Vec<Dom>,
    cells: Vec<Vec<Option<usize>>>,
}

impl<'q> Kernel<'q> {
    fn new(q: &'q QfQuery) -> Self {
        let mut syms = vec![NIL.to_string()];
        for c in &q.constants {
            if c != NIL && !syms.contains(c) {
                syms.push(c.clone());
            }
        }
        assert!(syms.len() <= 64, "qf_sat supports at most 64 constants");
        let n_syms = syms.len();
        let mut k = Kernel {
            q,
            syms,
            nodes: Vec::new(),
            ivs: Vec::new(),
            conjuncts: Vec::new(),
            opaque: Vec::new(),
            cutoff_idx: Vec::new(),
            wand_free: !q.formula.contains_wand(),
            eopts: EvalOptions {
                forbid_nil_alloc: q.options.forbid_nil_alloc,
            },
            steps: 0,
            s: 0,
            val: vec![None; n_syms],
            cands: Vec::new(),
            dom: Vec::new(),
            cells: Vec::new(),
        };
        let root = k.build(&q.formula, false);
        if let NKind::And(cs) = &k.nodes[root] {
            k.conjuncts = cs.clone();
        } else {
            k.conjuncts = vec![root];
        }
        k.cutoff_idx = q
            .cutoffs
            .iter()
            .filter_map(|c| k.syms.iter().position(|s| s == c))
            .collect();
        k
    }

    fn sym_of(&mut self, t: &LocTerm) -> usize {
        match t {
            LocTerm::Nil => 0,
            LocTerm::Const(n) => self
                .syms
                .iter()
                .position(|s| s == n)
                .unwrap_or_else(|| panic!("qf_sat: constant {n} missing from query constants")),
            LocTerm::Var(n) => panic!("qf_sat: contract violation, free variable {n}"),
        }
    }

    fn push(&mut self, kind: NKind, iv: SizeIv) -> NodeId {
        self.nodes.push(kind);
        self.ivs.push(iv);
        self.nodes.len() - 1
    }

    fn build(&mut self, f: &Formula, neg: bool) -> NodeId {
        match f {
            Formula::True => self.push(
                if neg { NKind::False } else { NKind::True },
                SizeIv {
                    t_lo: if neg { INF } else { 0 },
                    t_hi: if neg { 0 } else { INF },
                },
            ),
            Formula::False => self.push(
                if neg { NKind::True } else { NKind::False },
                SizeIv {
                    t_lo: if neg { 0 } else { INF },
                    t_hi: if neg { INF } else { 0 },
                },
            ),
            Formula::Eq(a, b) => {
                let (x, y) = (self.sym_of(a), self.sym_of(b));
                self.push(
                    if neg { NKind::Ne(x, y) } else { NKind::Eq(x, y) },
                    SizeIv { t_lo: 0, t_hi: INF },
                )
            }
            Formula::Emp => self.push(
                if neg { NKind::NotEmp } else { NKind::Emp },
                SizeIv {
                    t_lo: if neg { 1 } else { 0 },
                    t_hi: if neg { INF } else { 0 },
                },
            ),
            Formula::PointsTo(src, tup) => {
                let s = self.sym_of(src);
                let data: Vec<usize> = tup.0.iter().map(|t| self.sym_of(t)).collect();
                self.push(
                    NKind::Pto {
                        src: s,
                        data,
                        pos: !neg,
                    },
                    SizeIv {
                        t_lo: if neg { 0 } else { 1 },
                        t_hi: if neg { INF } else { 1 },
                    },
                )
            }
            Formula::Not(a) => self.build(a, !neg),
            Formula::And(..) => {
                let mut parts = Vec::new();
                flatten_and(f, &mut parts);
                let ids: Vec<NodeId> = parts.iter().map(|p| self.build(p, neg)).collect();
                if neg {
                    // ¬(a ∧ b) as a disjunction of negations
                    let t_lo = ids.iter().map(|i| self.ivs[*i].t_lo).min().unwrap_or(0);
                    let t_hi = ids.iter().map(|i| self.ivs[*i].t_hi).max().unwrap_or(INF);
                    self.push(NKind::Or(ids), SizeIv { t_lo, t_hi })
                } else {
                    let t_lo = ids.iter().map(|i| self.ivs[*i].t_lo).max().unwrap_or(0);
                    let t_hi = ids.iter().map(|i| self.ivs[*i].t_hi).min().unwrap_or(INF);
                    self.push(NKind::And(ids), SizeIv { t_lo, t_hi })
                }
            }
            Formula::Sep(..) => {
                let mut parts = Vec::new();
                flatten_sep(f, &mut parts);
                let ids: Vec<NodeId> = parts.iter().map(|p| self.build(p, false)).collect();
                let t_lo: usize = ids.iter().map(|i| self.ivs[*i].t_lo).sum();
                let t_hi: usize = ids
                    .iter()
                    .map(|i| self.ivs[*i].t_hi)
                    .fold(0usize, |a, b| a.saturating_add(b).min(INF));
                if neg {
                    self.push(NKind::NotSep(ids), SizeIv { t_lo: 0, t_hi: INF })
                } else {
                    self.push(NKind::Sep(ids), SizeIv { t_lo, t_hi })
                }
            }
            Formula::Wand(a, b) => {
                if matches!(**b, Formula::False) {
                    if let Formula::PointsTo(src, _) = &**a {
                        let s = self.sym_of(src);
                        return self.push(
                            NKind::Alloc { src: s, pos: !neg },
                            SizeIv { t_lo: 0, t_hi: INF },
                        );
                    }
                }
                let idx = self.opaque.len();
                self.opaque.push(f.clone());
                self.push(
                    NKind::Opaque {
                        formula: idx,
                        pos: !neg,
                    },
                    SizeIv { t_lo: 0, t_hi: INF },
                )
            }
            Formula::Or(..) | Formula::Implies(..) | Formula::Exists(..) | Formula::Forall(..) => {
                panic!("qf_sat: contract violation, query must be desugared and ground")
            }
        }
    }

    fn bit(i: usize) -> u64 {
        1u64 << (i.min(63))
    }

    fn tick(&mut self) -> bool {
        self.steps += 1;
        self.steps <= self.q.options.budget
    }

    // ---- valuation phase -------------------------------------------------

    fn exists(&mut self, s: usize, pins: &Pins) -> Outcome {
        self.s = s;
        for v in self.val.iter_mut() {
            *v = None;
        }
        match self.dfs_val(0, pins) {
            Res::Found => Outcome::Found,
            Res::Exhausted(_) => Outcome::Exhausted,
            Res::Out => Outcome::Out,
        }
    }

    fn dfs_val(&mut self, i: usize, pins: &Pins) -> Res {
        if i == self.syms.len() {
            return self.heap_search(pins);
        }
        // canonical cap: one more than the largest value used so far
        let cap = self
            .val[..i]
            .iter()
            .map(|v| v.unwrap())
            .max()
            .map_or(0, |m| m + 1)
            .min(self.s - 1);
        let fixed = if i == 0 {
            Some(0) // nil is canonically the first location
        } else {
            pins.val.get(i).copied().flatten()
        };
        let mut acc: u64 = 0;
        let range: Vec<usize> = match fixed {
            Some(v) => {
                if v > cap {
                    return Res::Exhausted(u64::MAX);
                }
                vec![v]
            }
            None => (0..=cap).collect(),
        };
        for v in range {
            if !self.tick() {
                return Res::Out;
            }
            self.val[i] = Some(v);
            let mut reads: u64 = 0;
            let mut conflict = false;
            for &c in &self.conjuncts.clone() {
                let mut r: u64 = 0;
                if self.free3(c, &mut r) == Tri::F {
                    reads |= r;
                    conflict = true;
                    break;
                }
            }
            if conflict {
                acc |= reads;
                continue;
            }
            match self.dfs_val(i + 1, pins) {
                Res::Found => return Res::Found,
                Res::Out => return Res::Out,
                Res::Exhausted(u) => {
                    acc |= u;
                    if u & Self::bit(i) == 0 && fixed.is_none() {
                        // no failure below consulted this constant: other
                        // values fail identically
                        self.val[i] = None;
                        return Res::Exhausted(acc);
                    }
                }
            }
        }
        self.val[i] = None;
        Res::Exhausted(acc)
    }

    /// Three-valued truth independent of the heap (valuation phase).
    fn free3(&mut self, n: NodeId, reads: &mut u64) -> Tri {
        match &self.nodes[n].clone() {
            NKind::True => Tri::T,
            NKind::False => Tri::F,
            NKind::Eq(a, b) | NKind::Ne(a, b) => {
                *reads |= Self::bit(*a) | Self::bit(*b);
                match (self.val[*a], self.val[*b]) {
                    (Some(x), Some(y)) => {
                        let eq = Tri::of(x == y);
                        if matches!(self.nodes[n], NKind::Ne(..)) {
                            eq.not()
                        } else {
                            eq
                        }
                    }
                    _ => Tri::U,
                }
            }
            NKind::Emp | NKind::NotEmp => Tri::U,
            NKind::Pto { src, pos, .. } => {
                *reads |= Self::bit(*src);
                match self.val[*src] {
                    Some(v) if v == 0 => Tri::of(!pos), // source is nil
                    _ => Tri::U,
                }
            }
            NKind::Alloc { src, pos } => {
                *reads |= Self::bit(*src);
                match self.val[*src] {
                    Some(v) if v == 0 => Tri::of(*pos), // nil counts as allocated
                    _ => Tri::U,
                }
            }
            NKind::And(cs) => {
                let mut acc = Tri::T;
                for c in cs {
                    acc = acc.and(self.free3(*c, reads));
                    if acc == Tri::F {
                        break;
                    }
                }
                acc
            }
            NKind::Or(cs) => {
                let mut acc = Tri::F;
                for c in cs {
                    acc = acc.or(self.free3(*c, reads));
                    if acc == Tri::T {
                        break;
                    }
                }
                acc
            }
            NKind::Sep(cs) => {
                // a child false on every heap, or clashing singleton sources,
                // falsifies the whole separating conjunction
                for c in cs {
                    if self.free3(*c, reads) == Tri::F {
                        return Tri::F;
                    }
                }
                if self.sep_sources_clash(cs, reads) {
                    return Tri::F;
                }
                Tri::U
            }
            NKind::NotSep(cs) => {
                for c in cs {
                    if self.free3(*c, reads) == Tri::F {
                        return Tri::T;
                    }
                }
                if self.sep_sources_clash(cs, reads) {
                    return Tri::T;
                }
                Tri::U
            }
            NKind::Opaque { .. } => Tri::U,
        }
    }

    /// Positive points-to children of a Sep with equal assigned sources
    /// cannot live on disjoint sub-heaps.
    fn sep_sources_clash(&mut self, cs: &[NodeId], reads: &mut u64) -> bool {
        let mut seen: Vec<usize> = Vec::new();
        for c in cs {
            if let NKind::Pto {
                src, pos: true, ..
            } = &self.nodes[*c]
            {
                if let Some(v) = self.val[*src] {
                    *reads |= Self::bit(*src);
                    if seen.contains(&v) {
                        return true;
                    }
                    seen.push(v);
                }
            }
        }
        false
    }

    /// Sound refutations of a separating conjunction usable before the
    /// heap domain is decided: a child false on every heap, clashing
    /// singleton sources, or a points-to source already excluded from the
    /// domain.
    fn sep_impossible(&mut self, cs: &[NodeId], reads: &mut u64) -> bool {
        for c in cs {
            if self.free3(*c, reads) == Tri::F {
                return true;
            }
            if let NKind::Pto {
                src, pos: true, ..
            } = self.nodes[*c].clone()
            {
                let loc = self.val_of(src, reads);
                match self.cand_pos(loc) {
                    Some(p) if self.dom[p] == Dom::Out => return true,
                    Some(_) => {}
                    None => return true,
                }
            }
        }
        self.sep_sources_clash(cs, reads)
    }

    // ---- heap phase ------------------------------------------------------

    fn val_of(&self, sym: usize, reads: &mut u64) -> usize {
        *reads |= Self::bit(sym);
        self.val[sym].expect("heap phase requires a complete valuation")
    }

    fn heap_search(&mut self, pins: &Pins) -> Res {
        // candidate heap-domain locations
        let mut cands: Vec<usize> = if self.q.options.restrict_to_consts {
            let mut v: Vec<usize> = self.val.iter().map(|v| v.unwrap()).collect();
            v.sort_unstable();
            v.dedup();
            v
        } else {
            (0..self.s).collect()
        };
        if self.q.options.forbid_nil_alloc {
            cands.retain(|l| *l != 0);
        }
        self.cands = cands;
        self.dom = vec![Dom::Undec; self.cands.len()];
        self.cells = vec![vec![None; self.q.k]; self.cands.len()];
        let mut reads: u64 = 0;
        // apply pins; a pin outside the candidate set depends on the whole
        // valuation, so report full reads
        for (loc, inside) in &pins.dom {
            match self.cands.iter().position(|l| l == loc) {
                Some(p) => self.dom[p] = if *inside { Dom::In } else { Dom::Out },
                None if *inside => return Res::Exhausted(u64::MAX),
                None => {}
            }
        }
        for (loc, comp, v) in &pins.cells {
            match self.cands.iter().position(|l| l == loc) {
                Some(p) => self.cells[p][*comp] = Some(*v),
                None => return Res::Exhausted(u64::MAX),
            }
        }
        let r = self.heap_dfs(&self.conjuncts.clone(), pins, &mut reads);
        match r {
            HeapRes::Found => Res::Found,
            HeapRes::Exhausted => Res::Exhausted(reads),
            HeapRes::Out => Res::Out,
        }
    }

    fn heap_dfs(&mut self, agenda: &[NodeId], pins: &Pins, reads: &mut u64) -> HeapRes {
        // propagate determinate spatial structure, then split or enumerate
        let trail = self.trail_mark();
        let res = self.propagate(agenda, reads);
        let out = match res {
            Err(()) => HeapRes::Exhausted,
            Ok(residual) => {
                let split = residual
                    .iter()
                    .position(|n| matches!(self.nodes[*n], NKind::Or(_)));
                if let Some(split) = split {
                    // branch on the first disjunctive conjunct
                    let branches = match &self.nodes[residual[split]] {
                        NKind::Or(cs) => cs.clone(),
                        _ => unreachable!(),
                    };
                    let mut r = HeapRes::Exhausted;
                    for b in branches {
                        if self.state3(b, reads) == Tri::F {
                            continue;
                        }
                        let mut agenda2 = residual.clone();
                        agenda2[split] = b;
                        match self.heap_dfs(&agenda2, pins, reads) {
                            HeapRes::Found => {
                                r = HeapRes::Found;
                                break;
                            }
                            HeapRes::Out => {
                                r = HeapRes::Out;
                                break;
                            }
                            HeapRes::Exhausted => {}
                        }
                    }
                    r
                } else {
                    self.enumerate(&residual, 0, pins, reads)
                }
            }
        };
        if !matches!(out, HeapRes::Found) {
            self.trail_undo(trail);
        }
        out
    }

    fn trail_mark(&self) -> (Vec<Dom>, Vec<Vec<Option<usize>>>) {
        (self.dom.clone(), self.cells.clone())
    }

    fn trail_undo(&mut self, mark: (Vec<Dom>, Vec<Vec<Option<usize>>>)) {
        self.dom = mark.0;
        self.cells = mark.1;
    }

    fn cand_pos(&self, loc: usize) -> Option<usize> {
        self.cands.iter().position(|l| *l == loc)
    }

    fn force_in(&mut self, loc: usize) -> Result<usize, ()> {
        match self.cand_pos(loc) {
            Some(p) => {
                if self.dom[p] == Dom::Out {
                    return Err(());
                }
                self.dom[p] = Dom::In;
                Ok(p)
            }
            None => Err(()),
        }
    }

    fn force_out(&mut self, loc: usize) -> Result<(), ()> {
        if let Some(p) = self.cand_pos(loc) {
            if self.dom[p] == Dom::In {
                return Err(());
            }
            self.dom[p] = Dom::Out;
        }
        Ok(())
    }

    fn force_cell(&mut self, pos: usize, data: &[usize]) -> Result<(), ()> {
        for (c, v) in data.iter().enumerate() {
            match self.cells[pos][c] {
                Some(old) if old != *v => return Err(()),
                _ => self.cells[pos][c] = Some(*v),
            }
        }
        Ok(())
    }

    /// Enforces determinate structure of must-hold conjuncts. Returns the
    /// residual agenda (conjuncts still undecided, disjunctions included).
    fn propagate(&mut self, agenda: &[NodeId], reads: &mut u64) -> Result<Vec<NodeId>, ()> {
        let mut queue: Vec<NodeId> = agenda.to_vec();
        loop {
            let mut progressed = false;
            let mut next: Vec<NodeId> = Vec::new();
            for n in queue.drain(..) {
                match self.step_conjunct(n, reads)? {
                    Step::Done => progressed = true,
                    Step::Expand(children) => {
                        next.extend(children);
                        progressed = true;
                    }
                    Step::Keep => next.push(n),
                }
            }
            // a disjunction with a single live branch commits to it
            let mut rebuilt: Vec<NodeId> = Vec::new();
            for n in next {
                if let NKind::Or(cs) = self.nodes[n].clone() {
                    let live: Vec<NodeId> = cs
                        .into_iter()
                        .filter(|c| self.state3(*c, reads) != Tri::F)
                        .collect();
                    match live.len() {
                        0 => return Err(()),
                        1 => {
                            rebuilt.push(live[0]);
                            progressed = true;
                        }
                        _ => rebuilt.push(n),
                    }
                } else {
                    rebuilt.push(n);
                }
            }
            queue = rebuilt;
            // re-check everything against the strengthened heap state
            for i in 0..queue.len() {
                if self.state3(queue[i], reads) == Tri::F {
                    return Err(());
                }
            }
            if !progressed {
                return Ok(queue);
            }
        }
    }

    fn step_conjunct(&mut self, n: NodeId, reads: &mut u64) -> Result<Step, ()> {
        match self.nodes[n].clone() {
            NKind::True => Ok(Step::Done),
            NKind::False => Err(()),
            NKind::Eq(a, b) => {
                if self.val_of(a, reads) == self.val_of(b, reads) {
                    Ok(Step::Done)
                } else {
                    Err(())
                }
            }
            NKind::Ne(a, b) => {
                if self.val_of(a, reads) != self.val_of(b, reads) {
                    Ok(Step::Done)
                } else {
                    Err(())
                }
            }
            NKind::And(cs) => Ok(Step::Expand(cs)),
            NKind::Emp => {
                for p in 0..self.cands.len() {
                    if self.dom[p] == Dom::In {
                        return Err(());
                    }
                    self.dom[p] = Dom::Out;
                }
                Ok(Step::Done)
            }
            NKind::Pto { src, data, pos: true } => {
                let loc = self.val_of(src, reads);
                if loc == 0 {
                    return Err(());
                }
                let vals: Vec<usize> = data.iter().map(|d| self.val_of(*d, reads)).collect();
                let p = self.force_in(loc)?;
                self.force_cell(p, &vals)?;
                for q in 0..self.cands.len() {
                    if q != p {
                        if self.dom[q] == Dom::In {
                            return Err(());
                        }
                        self.dom[q] = Dom::Out;
                    }
                }
                Ok(Step::Done)
            }
            NKind::Alloc { src, pos: true } => {
                let loc = self.val_of(src, reads);
                if loc == 0 {
                    return Ok(Step::Done);
                }
                self.force_in(loc)?;
                Ok(Step::Done)
            }
            NKind::Alloc { src, pos: false } => {
                let loc = self.val_of(src, reads);
                if loc == 0 {
                    return Err(());
                }
                self.force_out(loc)?;
                Ok(Step::Done)
            }
            NKind::Sep(cs) => {
                // force the points-to leaves; exact chains pin the whole domain
                let mut exact = true;
                let mut sources: Vec<usize> = Vec::new();
                for c in &cs {
                    match self.nodes[*c].clone() {
                        NKind::Pto { src, data, pos: true } => {
                            let loc = self.val_of(src, reads);
                            if loc == 0 {
                                return Err(());
                            }
                            if sources.contains(&loc) {
                                return Err(());
                            }
                            let vals: Vec<usize> =
                                data.iter().map(|d| self.val_of(*d, reads)).collect();
                            let p = self.force_in(loc)?;
                            self.force_cell(p, &vals)?;
                            sources.push(loc);
                        }
                        NKind::Emp => {}
                        NKind::True => exact = false,
                        NKind::Eq(a, b) => {
                            if self.val_of(a, reads) != self.val_of(b, reads) {
                                return Err(());
                            }
                        }
                        NKind::Ne(a, b) => {
                            if self.val_of(a, reads) == self.val_of(b, reads) {
                                return Err(());
                            }
                        }
                        NKind::And(inner) => {
                            // pure guards beside one spatial part keep chains exact
                            let mut spatial: Vec<NodeId> = Vec::new();
                            let mut ok = true;
                            for i in &inner {
                                match self.nodes[*i].clone() {
                                    NKind::Eq(a, b) => {
                                        if self.val_of(a, reads) != self.val_of(b, reads) {
                                            return Err(());
                                        }
                                    }
                                    NKind::Ne(a, b) => {
                                        if self.val_of(a, reads) == self.val_of(b, reads) {
                                            return Err(());
                                        }
                                    }
                                    NKind::True => {}
                                    NKind::False => return Err(()),
                                    _ => {
                                        spatial.push(*i);
                                        ok = false;
                                    }
                                }
                            }
                            if !ok {
                                // not a pure-only child: fall back to the
                                // undecomposed conjunct
                                return Ok(Step::Keep);
                            }
                            let _ = spatial;
                        }
                        NKind::False => return Err(()),
                        _ => return Ok(Step::Keep),
                    }
                }
                if exact {
                    for q in 0..self.cands.len() {
                        if !sources.contains(&self.cands[q]) {
                            if self.dom[q] == Dom::In {
                                return Err(());
                            }
                            self.dom[q] = Dom::Out;
                        }
                    }
                }
                Ok(Step::Done)
            }
            NKind::Or(_) => Ok(Step::Keep),
            NKind::NotEmp | NKind::NotSep(_) | NKind::Pto { pos: false, .. } | NKind::Opaque { .. } => {
                Ok(Step::Keep)
            }
        }
    }

    /// Three-valued truth under the current partial heap state.
    fn state3(&mut self, n: NodeId, reads: &mut u64) -> Tri {
        let decided = !self.dom.contains(&Dom::Undec);
        if decided {
            let full = self.full_mask();
            return self.mask3(n, full, reads);
        }
        match self.nodes[n].clone() {
            NKind::True => Tri::T,
            NKind::False => Tri::F,
            NKind::Eq(a, b) => Tri::of(self.val_of(a, reads) == self.val_of(b, reads)),
            NKind::Ne(a, b) => Tri::of(self.val_of(a, reads) != self.val_of(b, reads)),
            NKind::Emp => {
                if self.dom.contains(&Dom::In) {
                    Tri::F
                } else {
                    Tri::U
                }
            }
            NKind::NotEmp => {
                if self.dom.contains(&Dom::In) {
                    Tri::T
                } else {
                    Tri::U
                }
            }
            NKind::Pto { src, data, pos } => {
                let r = self.pto3_partial(src, &data, reads);
                if pos {
                    r
                } else {
                    r.not()
                }
            }
            NKind::Alloc { src, pos } => {
                let loc = self.val_of(src, reads);
                let r = if loc == 0 {
                    Tri::T
                } else {
                    match self.cand_pos(loc) {
                        Some(p) => match self.dom[p] {
                            Dom::In => Tri::T,
                            Dom::Out => Tri::F,
                            Dom::Undec => Tri::U,
                        },
                        None => Tri::F,
                    }
                };
                if pos {
                    r
                } else {
                    r.not()
                }
            }
            NKind::And(cs) => {
                let mut acc = Tri::T;
                for c in cs {
                    acc = acc.and(self.state3(c, reads));
                    if acc == Tri::F {
                        return Tri::F;
                    }
                }
                acc
            }
            NKind::Or(cs) => {
                let mut acc = Tri::F;
                for c in cs {
                    acc = acc.or(self.state3(c, reads));
                    if acc == Tri::T {
                        return Tri::T;
                    }
                }
                acc
            }
            NKind::Sep(cs) => {
                if self.sep_impossible(&cs, reads) {
                    return Tri::F;
                }
                // cardinality against the node interval
                let n_in = self.dom.iter().filter(|d| **d == Dom::In).count();
                let n_max = n_in + self.dom.iter().filter(|d| **d == Dom::Undec).count();
                let iv = self.ivs[n];
                if n_max < iv.t_lo || n_in > iv.t_hi {
                    return Tri::F;
                }
                Tri::U
            }
            NKind::NotSep(cs) => {
                if self.sep_impossible(&cs, reads) {
                    return Tri::T;
                }
                Tri::U
            }
            NKind::Opaque { .. } => Tri::U,
        }
    }

    fn pto3_partial(&mut self, src: usize, data: &[usize], reads: &mut u64) -> Tri {
        let loc = self.val_of(src, reads);
        if loc == 0 {
            return Tri::F;
        }
        let Some(p) = self.cand_pos(loc) else {
            return Tri::F;
        };
        if self.dom[p] == Dom::Out {
            return Tri::F;
        }
        // some other location allocated?
        let mut other_in = false;
        let mut other_undec = false;
        for q in 0..self.cands.len() {
            if q == p {
                continue;
            }
            match self.dom[q] {
                Dom::In => other_in = true,
                Dom::Undec => other_undec = true,
                Dom::Out => {}
            }
        }
        if other_in {
            return Tri::F;
        }
        let mut cell = Tri::T;
        for (c, d) in data.iter().enumerate() {
            let want = self.val_of(*d, reads);
            match self.cells[p][c] {
                Some(v) if v != want => return Tri::F,
                Some(_) => {}
                None => cell = Tri::U,
            }
        }
        if self.dom[p] == Dom::Undec || other_undec {
            return Tri::U;
        }
        cell
    }

    fn full_mask(&self) -> u32 {
        let mut m = 0u32;
        for (p, d) in self.dom.iter().enumerate() {
            if *d == Dom::In {
                m |= 1 << p;
            }
        }
        m
    }

    /// Three-valued truth on the sub-heap given by `mask` (domain decided;
    /// cells may be partial).
    fn mask3(&mut self, n: NodeId, mask: u32, reads: &mut u64) -> Tri {
        match self.nodes[n].clone() {
            NKind::True => Tri::T,
            NKind::False => Tri::F,
            NKind::Eq(a, b) => Tri::of(self.val_of(a, reads) == self.val_of(b, reads)),
            NKind::Ne(a, b) => Tri::of(self.val_of(a, reads) != self.val_of(b, reads)),
            NKind::Emp => Tri::of(mask == 0),
            NKind::NotEmp => Tri::of(mask != 0),
            NKind::Pto { src, data, pos } => {
                let r = self.pto3_mask(src, &data, mask, reads);
                if pos {
                    r
                } else {
                    r.not()
                }
            }
            NKind::Alloc { src, pos } => {
                let loc = self.val_of(src, reads);
                let r = if loc == 0 {
                    Tri::T
                } else {
                    match self.cand_pos(loc) {
                        Some(p) => Tri::of(mask & (1 << p) != 0),
                        None => Tri::F,
                    }
                };
                if pos {
                    r
                } else {
                    r.not()
                }
            }
            NKind::And(cs) => {
                let mut acc = Tri::T;
                for c in cs {
                    acc = acc.and(self.mask3(c, mask, reads));
                    if acc == Tri::F {
                        return Tri::F;
                    }
                }
                acc
            }
            NKind::Or(cs) => {
                let mut acc = Tri::F;
                for c in cs {
                    acc = acc.or(self.mask3(c, mask, reads));
                    if acc == Tri::T {
                        return Tri::T;
                    }
                }
                acc
            }
            NKind::Sep(cs) => self.sep_dp(&cs, 0, mask, reads),
            NKind::NotSep(cs) => self.sep_dp(&cs, 0, mask, reads).not(),
            NKind::Opaque { formula, pos } => {
                // evaluable once every cell of the sub-heap is concrete
                if !self.mask_cells_complete(mask) {
                    return Tri::U;
                }
                *reads |= u64::MAX; // conservative: exact evaluation may read anything
                let (interp, heap) = self.concrete(mask);
                let f = self.opaque[formula].clone();
                let r = Tri::of(eval_opts(&interp, &heap, &f, self.eopts));
                if pos {
                    r
                } else {
                    r.not()
                }
            }
        }
    }

    fn pto3_mask(&mut self, src: usize, data: &[usize], mask: u32, reads: &mut u64) -> Tri {
        let loc = self.val_of(src, reads);
        if loc == 0 {
            return Tri::F;
        }
        let Some(p) = self.cand_pos(loc) else {
            return Tri::F;
        };
        if mask != (1 << p) {
            return Tri::F;
        }
        let mut cell = Tri::T;
        for (c, d) in data.iter().enumerate() {
            let want = self.val_of(*d, reads);
            match self.cells[p][c] {
                Some(v) if v != want => return Tri::F,
                Some(_) => {}
                None => cell = Tri::U,
            }
        }
        cell
    }

    fn sep_dp(&mut self, cs: &[NodeId], i: usize, mask: u32, reads: &mut u64) -> Tri {
        if i + 1 == cs.len() {
            return self.mask3(cs[i], mask, reads);
        }
        // enumerate submasks of mask for child i
        let mut best = Tri::F;
        let mut sub = mask;
        loop {
            let c = self.mask3(cs[i], sub, reads);
            if c != Tri::F {
                let rest = self.sep_dp(cs, i + 1, mask & !sub, reads);
                let combined = c.and(rest);
                if combined == Tri::T {
                    return Tri::T;
                }
                if combined == Tri::U {
                    best = Tri::U;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        best
    }

    fn mask_cells_complete(&self, mask: u32) -> bool {
        (0..self.cands.len())
            .filter(|p| mask & (1 << p) != 0)
            .all(|p| self.cells[p].iter().all(|c| c.is_some()))
    }

    fn concrete(&self, mask: u32) -> (Interpretation, Heap) {
        let mut interp = Interpretation::new(self.s);
        for (i, name) in self.syms.iter().enumerate() {
            interp.set_const(name, self.val[i].unwrap());
        }
        let mut heap = Heap::empty();
        for (p, loc) in self.cands.iter().enumerate() {
            if mask & (1 << p) != 0 {
                let data: Vec<usize> = self.cells[p].iter().map(|c| c.unwrap()).collect();
                heap.insert(*loc, data);
            }
        }
        (interp, heap)
    }

    /// Enumerates the remaining free heap decisions under pruning.
    fn enumerate(&mut self, agenda: &[NodeId], from: usize, pins: &Pins, reads: &mut u64) -> HeapRes {
        // next undecided domain bit
        if let Some(p) = (from..self.cands.len()).find(|p| self.dom[*p] == Dom::Undec) {
            for choice in [Dom::Out, Dom::In] {
                if !self.tick() {
                    return HeapRes::Out;
                }
                self.dom[p] = choice;
                if self.prune(agenda, pins, reads) {
                    self.dom[p] = Dom::Undec;
                    continue;
                }
                match self.enumerate(agenda, p + 1, pins, reads) {
                    HeapRes::Found => return HeapRes::Found,
                    HeapRes::Out => return HeapRes::Out,
                    HeapRes::Exhausted => {}
                }
                self.dom[p] = Dom::Undec;
            }
            return HeapRes::Exhausted;
        }
        // all domain bits decided: fill cells
        if let Some((p, c)) = self.next_free_cell() {
            for v in self.value_candidates() {
                if !self.tick() {
                    return HeapRes::Out;
                }
                self.cells[p][c] = Some(v);
                if self.prune(agenda, pins, reads) {
                    self.cells[p][c] = None;
                    continue;
                }
                match self.enumerate(agenda, from, pins, reads) {
                    HeapRes::Found => return HeapRes::Found,
                    HeapRes::Out => return HeapRes::Out,
                    HeapRes::Exhausted => {}
                }
                self.cells[p][c] = None;
            }
            return HeapRes::Exhausted;
        }
        // complete world: final checks
        if self.leaf_ok(agenda, pins, reads) {
            HeapRes::Found
        } else {
            HeapRes::Exhausted
        }
    }

    fn next_free_cell(&self) -> Option<(usize, usize)> {
        for p in 0..self.cands.len() {
            if self.dom[p] == Dom::In {
                for c in 0..self.q.k {
                    if self.cells[p][c].is_none() {
                        return Some((p, c));
                    }
                }
            }
        }
        None
    }

    fn value_candidates(&self) -> Vec<usize> {
        if self.q.options.restrict_to_consts {
            let mut v: Vec<usize> = self.val.iter().map(|v| v.unwrap()).collect();
            let spare = v.iter().max().map_or(0, |m| m + 1);
            if spare < self.s {
                v.push(spare);
            }
            v.sort_unstable();
            v.dedup();
            v
        } else {
            (0..self.s).collect()
        }
    }

    fn prune(&mut self, agenda: &[NodeId], pins: &Pins, reads: &mut u64) -> bool {
        if let Some(size) = pins.dom_size {
            let n_in = self.dom.iter().filter(|d| **d == Dom::In).count();
            let possible = n_in + self.dom.iter().filter(|d| **d == Dom::Undec).count();
            if n_in > size || possible < size {
                return true;
            }
        }
        for n in agenda {
            if self.state3(*n, reads) == Tri::F {
                return true;
            }
        }
        false
    }

    fn leaf_ok(&mut self, agenda: &[NodeId], pins: &Pins, reads: &mut u64) -> bool {
        for n in agenda {
            match self.state3(*n, reads) {
                Tri::T => {}
                _ => return false,
            }
        }
        if let Some(size) = pins.dom_size {
            if self.dom.iter().filter(|d| **d == Dom::In).count() != size {
                return false;
            }
        }
        // symmetry directive over cut-offs
        let mut dr: u64 = 0;
        let mut seen_unalloc = false;
        for ci in self.cutoff_idx.clone() {
            let loc = self.val_of(ci, &mut dr);
            let inside = self
                .cand_pos(loc)
                .map(|p| self.dom[p] == Dom::In)
                .unwrap_or(false);
            if inside && seen_unalloc {
                *reads |= dr;
                return false;
            }
            if !inside {
                seen_unalloc = true;
            }
        }
        // covering models only: a dead location means the same model exists
        // at a smaller universe (wand-free case)
        if self.wand_free {
            let mut used = vec![false; self.s];
            for v in self.val.iter() {
                used[v.unwrap()] = true;
            }
            for (p, d) in self.dom.iter().enumerate() {
                if *d == Dom::In {
                    used[self.cands[p]] = true;
                    for c in &self.cells[p] {
                        used[c.unwrap()] = true;
                    }
                }
            }
            if used.iter().any(|u| !u) {
                *reads |= u64::MAX;
                return false;
            }
        }
        true
    }

    // ---- canonical model extraction ---------------------------------------

    /// Finds the lexicographically least (valuation, heap) model at size s:
    /// constants in order with ascending values, then domains by ascending
    /// size and lexicographic membership, then cell values ascending.
    fn lex_minimize(&mut self, s: usize) -> Option<Model> {
        let mut pins = Pins {
            val: vec![None; self.syms.len()],
            ..Pins::default()
        };
        for i in 0..self.syms.len() {
            let mut found = false;
            for v in 0..s {
                pins.val[i] = Some(v);
                match self.exists(s, &pins) {
                    Outcome::Found => {
                        found = true;
                        break;
                    }
                    Outcome::Exhausted => continue,
                    Outcome::Out => return None,
                }
            }
            if !found {
                return None;
            }
        }
        // domain size
        let max_dom = self.cands.len();
        let mut size = None;
        for d in 0..=max_dom {
            pins.dom_size = Some(d);
            match self.exists(s, &pins) {
                Outcome::Found => {
                    size = Some(d);
                    break;
                }
                Outcome::Exhausted => continue,
                Outcome::Out => return None,
            }
        }
        let d = size?;
        // lexicographically least domain of that size (greedy include)
        let cand_locs: Vec<usize> = self.cands.clone();
        let mut chosen = 0usize;
        for loc in cand_locs {
            if chosen == d {
                pins.dom.push((loc, false));
                continue;
            }
            pins.dom.push((loc, true));
            match self.exists(s, &pins) {
                Outcome::Found => chosen += 1,
                Outcome::Exhausted => {
                    pins.dom.pop();
                    pins.dom.push((loc, false));
                }
                Outcome::Out => return None,
            }
        }
        // cell values ascending
        let in_locs: Vec<usize> = pins
            .dom
            .iter()
            .filter(|(_, i)| *i)
            .map(|(l, _)| *l)
            .collect();
        for loc in in_locs {
            for comp in 0..self.q.k {
                let mut ok = false;
                for v in 0..s {
                    pins.cells.push((loc, comp, v));
                    match self.exists(s, &pins) {
                        Outcome::Found => {
                            ok = true;
                            break;
                        }
                        Outcome::Exhausted => {
                            pins.cells.pop();
                        }
                        Outcome::Out => return None,
                    }
                }
                if !ok {
                    return None;
                }
            }
        }
        // assemble
        match self.exists(s, &pins) {
            Outcome::Found => {}
            _ => return None,
        }
        let mut interp = Interpretation::new(s);
        for (i, name) in self.syms.iter().enumerate() {
            interp.set_const(name, pins.val[i].unwrap());
        }
        let mut heap = Heap::empty();
        for (loc, inside) in &pins.dom {
            if *inside {
                let data: Vec<usize> = (0..self.q.k)
                    .map(|c| {
                        pins.cells
                            .iter()
                            .find(|(l, cc, _)| l == loc && *cc == c)
                            .map(|(_, _, v)| *v)
                            .unwrap()
                    })
                    .collect();
                heap.insert(*loc, data);
            }
        }
        Some(Model { interp, heap })
    }
}

enum Step {
    Done,
    Keep,
    Expand(Vec<NodeId>),
}

enum HeapRes {
    Found,
    Exhausted,
    Out,
}

fn flatten_and<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    if let Formula::And(a, b) = f {
        flatten_and(a, out);
        flatten_and(b, out);
    } else {
        out.push(f);
    }
}

fn flatten_sep<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    if let Formula::Sep(a, b) = f {
        flatten_sep(a, out);
        flatten_sep(b, out);
    } else {
        out.push(f);
    }
}

/// Reference enumerator: exhaustively searches all canonical valuations
/// and all heaps over all universes up to the bound, with no symmetry
/// breaking or domain restriction. Differential-testing oracle for
/// [`qf_sat`]; exponential, desk-scale inputs only.
pub mod naive {
    use super::*;

    /// First model in (universe, valuation, heap) enumeration order, or
    /// None up to the same bound qf_sat uses.
    pub fn naive_qf_sat(q: &QfQuery) -> Option<Model> {
        let mut syms = vec![NIL.to_string()];
        for c in &q.constants {
            if c != NIL && !syms.contains(c) {
                syms.push(c.clone());
            }
        }
        let bound = q
            .options
            .max_universe
            .unwrap_or_else(|| measure(&q.formula) + syms.len() + 2)
            .max(1);
        let opts = EvalOptions {
            forbid_nil_alloc: q.options.forbid_nil_alloc,
        };
        for s in 1..=bound {
            if let Some(m) = search_size(q, &syms, s, opts) {
                return Some(m);
            }
        }
        None
    }

    /// Minimal universe size admitting a model, if any (same bound).
    pub fn naive_min_universe(q: &QfQuery) -> Option<usize> {
        naive_qf_sat(q).map(|m| m.interp.universe)
    }

    fn search_size(q: &QfQuery, syms: &[String], s: usize, opts: EvalOptions) -> Option<Model> {
        let mut vals = vec![0usize; syms.len()];
        loop {
            // canonical: first occurrences ascending
            let canonical = {
                let mut max = 0usize;
                let mut ok = true;
                for (i, v) in vals.iter().enumerate() {
                    if i == 0 {
                        ok = *v == 0;
                平 } else if *v > max + 1 {
                        ok = false;
                    }
                    if !ok {
                        break;
                    }
                    max = max.max(*v);
                }
                ok
            };
            if canonical {
                let mut interp = Interpretation::new(s);
                for (i, name) in syms.iter().enumerate() {
                    interp.set_const(name, vals[i]);
                }
                if let Some(h) = search_heaps(q, &interp, s, opts) {
                    return Some(Model { interp, heap: h });
                }
            }
            // odometer
            let mut i = syms.len();
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                vals[i] += 1;
                if vals[i] < s {
                    break;
                }
                vals[i] = 0;
            }
        }
    }

    fn search_heaps(
        q: &QfQuery,
        interp: &Interpretation,
        s: usize,
        opts: EvalOptions,
    ) -> Option<Heap> {
        let locs: Vec<usize> = if q.options.forbid_nil_alloc {
            (0..s).filter(|l| *l != interp.nil()).collect()
        } else {
            (0..s).collect()
        };
        // domains by ascending size, then lex; values in ascending order
        for d in 0..=locs.len() {
            let mut combo: Vec<usize> = (0..d).collect();
            loop {
                let dom: Vec<usize> = combo.iter().map(|i| locs[*i]).collect();
                if let Some(h) = search_values(q, interp, &dom, s, opts) {
                    return Some(h);
                }
                // next combination
                let mut i = d;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    if combo[i] + 1 <= locs.len() - (d - i) {
                        combo[i] += 1;
                        for j in i + 1..d {
                            combo[j] = combo[j - 1] + 1;
                        }
                        break;
                    }
                }
                if d == 0 || combo[0] > locs.len() - d {
                    break;
                }
                if i == 0 && combo[0] == 0 {
                    break;
                }
            }
        }
        None
    }

    fn search_values(
        q: &QfQuery,
        interp: &Interpretation,
        dom: &[usize],
        s: usize,
        opts: EvalOptions,
    ) -> Option<Heap> {
        let slots = dom.len() * q.k;
        let mut vals = vec![0usize; slots];
        loop {
            let mut heap = Heap::empty();
            for (i, loc) in dom.iter().enumerate() {
                heap.insert(*loc, vals[i * q.k..(i + 1) * q.k].to_vec());
            }
            if eval_opts(interp, &heap, &q.formula, opts) {
                return Some(heap);
            }
            let mut i = slots;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                vals[i] += 1;
                if vals[i] < s {
                    break;
                }
                vals[i] = 0;
            }
        }
    }
}

//! Incremental CNF SAT solver exposing the four primitives the analyses
//! are written against: `push`, `pop`, `check_sat`, `get_model`.
//!
//! The core is CDCL: two-watched-literal propagation, first-UIP clause
//! learning, VSIDS-style variable activity, Luby restarts, and phase saving
//! with a false-first default polarity. Incrementality uses per-level
//! activation literals: `push` encodes the formula once and guards its
//! asserting clauses with a fresh activation literal, `check_sat` assumes
//! the guards of all live levels, and `pop` retires a guard permanently.
//! Learned clauses mentioning a retired guard are satisfied by its unit
//! and never participate again, so nothing is rebuilt on pop.

use std::collections::BTreeSet;
use std::io::{self, Write};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{tseitin, write_dimacs, Clause, Formula, Literal, VarId, VarName, VarPool};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatError {
    #[error("pop on an empty level stack")]
    PopUnderflow,
    #[error("no model available: last check was not satisfiable or state changed since")]
    NoModel,
}

/// Why a budgeted run stopped early.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum StopReason {
    Timeout,
    Cancelled,
    RefinementLimit,
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("solving stopped early: {0:?}")]
pub struct Stopped(pub StopReason);

/// Wall-clock and cooperative-cancellation limits threaded through solver
/// calls. The default is unlimited.
#[derive(Clone, Default)]
pub struct Budget {
    pub deadline: Option<Instant>,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget::default()
    }

    pub fn with_timeout(limit: Duration) -> Budget {
        Budget { deadline: Some(Instant::now() + limit), cancel: None }
    }

    pub fn exceeded(&self) -> Option<StopReason> {
        if let Some(flag) = &self.cancel {
            if flag.load(Ordering::Relaxed) {
                return Some(StopReason::Cancelled);
            }
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() >= deadline {
                return Some(StopReason::Timeout);
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatVerdict {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolverStats {
    pub sat_calls: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
}

// Internal literal: var index * 2, low bit set for negative polarity.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Lit(u32);

impl Lit {
    fn new(var: u32, positive: bool) -> Lit {
        Lit(var << 1 | u32::from(!positive))
    }
    fn var(self) -> u32 {
        self.0 >> 1
    }
    fn is_pos(self) -> bool {
        self.0 & 1 == 0
    }
    fn negated(self) -> Lit {
        Lit(self.0 ^ 1)
    }
    fn code(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum LBool {
    True,
    False,
    Undef,
}

struct ClauseData {
    lits: Vec<Lit>,
    learnt: bool,
    /// Index of the push event this clause came from; `None` for learnt.
    origin: Option<usize>,
}

#[derive(Clone, Copy)]
struct Watcher {
    clause: u32,
    blocker: Lit,
}

struct PushEvent {
    act_var: u32,
    alive: bool,
}

enum SearchOutcome {
    Sat,
    Unsat,
    Stopped(StopReason),
}

/// Priority queue of unassigned variables ordered by activity, ties broken
/// by variable index for determinism.
#[derive(Default)]
struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<i64>,
}

impl VarHeap {
    fn grow_to(&mut self, n: usize) {
        self.pos.resize(n, -1);
    }

    fn contains(&self, v: u32) -> bool {
        self.pos[v as usize] >= 0
    }

    fn better(a: u32, b: u32, act: &[f64]) -> bool {
        act[a as usize] > act[b as usize] || (act[a as usize] == act[b as usize] && a < b)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) >> 1;
            if Self::better(v, self.heap[parent], act) {
                self.heap[i] = self.heap[parent];
                self.pos[self.heap[i] as usize] = i as i64;
                i = parent;
            } else {
                break;
            }
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as i64;
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let left = 2 * i + 1;
            if left >= self.heap.len() {
                break;
            }
            let right = left + 1;
            let child = if right < self.heap.len()
                && Self::better(self.heap[right], self.heap[left], act)
            {
                right
            } else {
                left
            };
            if Self::better(self.heap[child], v, act) {
                self.heap[i] = self.heap[child];
                self.pos[self.heap[i] as usize] = i as i64;
                i = child;
            } else {
                break;
            }
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as i64;
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn update(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            self.sift_up(self.pos[v as usize] as usize, act);
        }
    }

    fn pop_max(&mut self, act: &[f64]) -> Option<u32> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap[0];
        self.pos[top as usize] = -1;
        let last = self.heap.pop().unwrap();
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn len(&self) -> usize {
        self.heap.len()
    }

    fn peek_at(&self, i: usize) -> u32 {
        self.heap[i]
    }
}

const VAR_DECAY: f64 = 0.95;
const RESTART_BASE: u64 = 100;
const RANDOM_DECISION_ONE_IN: u32 = 100;
const BUDGET_CHECK_MASK: u64 = 127;

/// Incremental SAT solver over named formulas.
pub struct Solver {
    pool: VarPool,
    clauses: Vec<ClauseData>,
    watches: Vec<Vec<Watcher>>,
    assign: Vec<LBool>,
    level: Vec<u32>,
    reason: Vec<Option<u32>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: VarHeap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    is_act: Vec<bool>,
    pushes: Vec<PushEvent>,
    live_levels: Vec<usize>,
    rng: ChaCha8Rng,
    model: Option<Vec<LBool>>,
    ok: bool,
    stats: SolverStats,
}

impl Solver {
    pub fn new(seed: u64) -> Solver {
        Solver {
            pool: VarPool::new(),
            clauses: Vec::new(),
            watches: Vec::new(),
            assign: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            heap: VarHeap::default(),
            phase: Vec::new(),
            seen: Vec::new(),
            is_act: Vec::new(),
            pushes: Vec::new(),
            live_levels: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            model: None,
            ok: true,
            stats: SolverStats::default(),
        }
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    pub fn num_levels(&self) -> usize {
        self.live_levels.len()
    }

    /// Maps a name to an id without constraining it, so it appears in models.
    pub fn ensure_var(&mut self, name: &VarName) {
        self.pool.intern(name);
        self.sync_vars();
    }

    fn sync_vars(&mut self) {
        let n = self.pool.num_vars() as usize;
        if n <= self.assign.len() {
            return;
        }
        let old = self.assign.len();
        self.assign.resize(n, LBool::Undef);
        self.level.resize(n, 0);
        self.reason.resize(n, None);
        self.activity.resize(n, 0.0);
        self.phase.resize(n, false);
        self.seen.resize(n, false);
        self.is_act.resize(n, false);
        self.watches.resize(2 * n, Vec::new());
        self.heap.grow_to(n);
        for v in old..n {
            self.heap.insert(v as u32, &self.activity);
        }
        self.model = None;
    }

    fn value_var(&self, v: u32) -> LBool {
        self.assign[v as usize]
    }

    fn value_lit(&self, l: Lit) -> LBool {
        match self.assign[l.var() as usize] {
            LBool::Undef => LBool::Undef,
            LBool::True => {
                if l.is_pos() {
                    LBool::True
                } else {
                    LBool::False
                }
            }
            LBool::False => {
                if l.is_pos() {
                    LBool::False
                } else {
                    LBool::True
                }
            }
        }
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn new_decision_level(&mut self) {
        self.trail_lim.push(self.trail.len());
    }

    fn unchecked_enqueue(&mut self, l: Lit, reason: Option<u32>) {
        debug_assert_eq!(self.value_lit(l), LBool::Undef);
        let v = l.var() as usize;
        self.assign[v] = if l.is_pos() { LBool::True } else { LBool::False };
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn cancel_until(&mut self, target: usize) {
        if self.decision_level() <= target {
            return;
        }
        let bound = self.trail_lim[target];
        while self.trail.len() > bound {
            let l = self.trail.pop().unwrap();
            let v = l.var() as usize;
            self.phase[v] = self.assign[v] == LBool::True;
            self.assign[v] = LBool::Undef;
            self.reason[v] = None;
            self.heap.insert(l.var(), &self.activity);
        }
        self.trail_lim.truncate(target);
        self.qhead = self.trail.len().min(self.qhead).min(bound);
        self.qhead = bound.min(self.trail.len());
    }

    fn bump_var(&mut self, v: u32) {
        self.activity[v as usize] += self.var_inc;
        if self.activity[v as usize] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.update(v, &self.activity);
    }

    fn decay_activities(&mut self) {
        self.var_inc /= VAR_DECAY;
    }

    fn watch_clause(&mut self, idx: u32) {
        let (l0, l1) = {
            let c = &self.clauses[idx as usize];
            (c.lits[0], c.lits[1])
        };
        self.watches[l0.code()].push(Watcher { clause: idx, blocker: l1 });
        self.watches[l1.code()].push(Watcher { clause: idx, blocker: l0 });
    }

    /// Adds a clause at decision level 0. Assumes current level is 0.
    fn add_clause(&mut self, lits: Vec<Lit>, origin: Option<usize>) {
        debug_assert_eq!(self.decision_level(), 0);
        if !self.ok {
            return;
        }
        // Watches must sit on non-false literals; move them to the front.
        let mut lits = lits;
        let mut free = 0usize;
        for i in 0..lits.len() {
            if self.value_lit(lits[i]) != LBool::False {
                lits.swap(free, i);
                free += 1;
                if free == 2 {
                    break;
                }
            }
        }
        match free {
            0 => {
                // All literals false at level 0 (or clause empty).
                self.ok = false;
                self.clauses.push(ClauseData { lits, learnt: false, origin });
            }
            1 => {
                let unit = lits[0];
                let idx = self.clauses.len() as u32;
                self.clauses.push(ClauseData { lits, learnt: false, origin });
                if self.value_lit(unit) == LBool::Undef {
                    self.unchecked_enqueue(unit, Some(idx));
                }
            }
            _ => {
                let idx = self.clauses.len() as u32;
                self.clauses.push(ClauseData { lits, learnt: false, origin });
                self.watch_clause(idx);
            }
        }
    }

    fn lit_from(&self, ext: Literal) -> Lit {
        Lit::new(ext.var() - 1, ext.sign())
    }

    /// Pushes a formula: opens a new level whose clauses are guarded by a
    /// fresh activation literal.
    pub fn push(&mut self, f: &Formula) {
        self.cancel_until(0);
        self.model = None;
        let enc = tseitin(f, &mut self.pool);
        let act = self.pool.fresh_aux() - 1;
        self.sync_vars();
        self.is_act[act as usize] = true;
        let event = self.pushes.len();
        self.pushes.push(PushEvent { act_var: act, alive: true });
        self.live_levels.push(event);

        // Definitions are pure extensions and stay unguarded; asserting
        // clauses get the guard so pop can retire them.
        for clause in &enc.defs {
            let lits: Vec<Lit> = clause.literals().iter().map(|&l| self.lit_from(l)).collect();
            self.add_clause(lits, Some(event));
        }
        let guard = Lit::new(act, false);
        for clause in &enc.roots {
            let mut lits: Vec<Lit> = vec![guard];
            lits.extend(clause.literals().iter().map(|&l| self.lit_from(l)));
            self.add_clause(lits, Some(event));
        }
    }

    /// Retires the most recent live level.
    pub fn pop(&mut self) -> Result<(), SatError> {
        let event = self.live_levels.pop().ok_or(SatError::PopUnderflow)?;
        self.cancel_until(0);
        self.model = None;
        self.pushes[event].alive = false;
        let act = self.pushes[event].act_var;
        // Permanently disable the guard; its clauses become satisfied.
        match self.value_var(act) {
            LBool::Undef => self.unchecked_enqueue(Lit::new(act, false), None),
            LBool::False => {}
            LBool::True => unreachable!("activation vars are never forced true at level 0"),
        }
        Ok(())
    }

    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p.negated();
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let mut i = 0;
            while i < ws.len() {
                let w = ws[i];
                if self.value_lit(w.blocker) == LBool::True {
                    i += 1;
                    continue;
                }
                let cidx = w.clause as usize;
                // Make sure the false literal is in slot 1.
                if self.clauses[cidx].lits[0] == false_lit {
                    self.clauses[cidx].lits.swap(0, 1);
                }
                let first = self.clauses[cidx].lits[0];
                if first != w.blocker && self.value_lit(first) == LBool::True {
                    ws[i] = Watcher { clause: w.clause, blocker: first };
                    i += 1;
                    continue;
                }
                // Look for a replacement watch.
                let mut moved = false;
                for k in 2..self.clauses[cidx].lits.len() {
                    if self.value_lit(self.clauses[cidx].lits[k]) != LBool::False {
                        self.clauses[cidx].lits.swap(1, k);
                        let new_watch = self.clauses[cidx].lits[1];
                        self.watches[new_watch.code()]
                            .push(Watcher { clause: w.clause, blocker: first });
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                if self.value_lit(first) == LBool::False {
                    // Conflict: restore remaining watchers and bail out.
                    self.watches[false_lit.code()] = ws;
                    self.qhead = self.trail.len();
                    return Some(w.clause);
                }
                self.unchecked_enqueue(first, Some(w.clause));
                i += 1;
            }
            self.watches[false_lit.code()] = ws;
        }
        None
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first) and the backtrack level.
    fn analyze(&mut self, confl: u32) -> (Vec<Lit>, usize) {
        let mut learnt: Vec<Lit> = vec![Lit(0)]; // slot 0 for the asserting literal
        let mut counter = 0usize;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let mut clause = confl as usize;
        let current = self.decision_level() as u32;
        let mut to_clear: Vec<u32> = Vec::new();

        loop {
            let start = usize::from(p.is_some());
            for j in start..self.clauses[clause].lits.len() {
                let q = self.clauses[clause].lits[j];
                let v = q.var();
                if !self.seen[v as usize] && self.level[v as usize] > 0 {
                    self.seen[v as usize] = true;
                    to_clear.push(v);
                    self.bump_var(v);
                    if self.level[v as usize] >= current {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            // Walk back to the next marked trail literal.
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var() as usize] {
                    break;
                }
            }
            let lit = self.trail[idx];
            self.seen[lit.var() as usize] = false;
            counter -= 1;
            p = Some(lit);
            if counter == 0 {
                break;
            }
            clause = self.reason[lit.var() as usize].expect("non-decision on conflict side") as usize;
        }
        learnt[0] = p.unwrap().negated();

        for v in to_clear {
            self.seen[v as usize] = false;
        }

        // Backtrack to the second-highest level in the clause.
        let bt = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i 2..learnt.len() {
                if self.level[learnt[i].var() as usize] > self.level[learnt[max_i].var() as usize] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var() as usize] as usize
        };
        (learnt, bt)
    }

    fn record_learnt(&mut self, learnt: Vec<Lit>) {
        let asserting = learnt[0];
        if learnt.len() == 1 {
            debug_assert_eq!(self.decision_level(), 0);
            if self.value_lit(asserting) == LBool::Undef {
                self.unchecked_enqueue(asserting, None);
            } else if self.value_lit(asserting) == LBool::False {
                self.ok = false;
            }
            return;
        }
        let idx = self.clauses.len() as u32;
        self.clauses.push(ClauseData { lits: learnt, learnt: true, origin: None });
        self.watch_clause(idx);
        self.unchecked_enqueue(asserting, Some(idx));
    }

    fn pick_branch_var(&mut self) -> Option<u32> {
        // Occasional seeded random pick keeps model selection controllable.
        if self.heap.len() > 0 && self.rng.gen_ratio(1, RANDOM_DECISION_ONE_IN) {
            let i = self.rng.gen_range(0..self.heap.len());
            let v = self.heap.peek_at(i);
            if self.value_var(v) == LBool::Undef {
                return Some(v);
            }
        }
        while let Some(v) = self.heap.pop_max(&self.activity) {
            if self.value_var(v) == LBool::Undef {
                return Some(v);
            }
        }
        None
    }

    fn luby(mut x: u64) -> u64 {
        // Luby sequence: 1 1 2 1 1 2 4 ...
        let mut size = 1u64;
        let mut seq = 0u32;
        while size < x + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        while size - 1 != x {
            size = (size - 1) / 2;
            seq -= 1;
            x %= size;
        }
        1u64 << seq
    }

    fn search(&mut self, assumps: &[Lit], budget: &Budget) -> SearchOutcome {
        let mut restarts = 0u64;
        let mut conflict_budget = Self::luby(restarts) * RESTART_BASE;
        let mut conflicts_here = 0u64;
        let mut steps = 0u64;

        loop {
            steps += 1;
            if steps & BUDGET_CHECK_MASK == 0 {
                if let Some(reason) = budget.exceeded() {
                    return SearchOutcome::Stopped(reason);
                }
            }

            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts_here += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SearchOutcome::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                self.record_learnt(learnt);
                self.decay_activities();
                continue;
            }

            if conflicts_here >= conflict_budget {
                conflicts_here = 0;
                restarts += 1;
                conflict_budget = Self::luby(restarts) * RESTART_BASE;
                self.cancel_until(0);
                continue;
            }

            // Place pending assumptions, one decision level each.
            let mut next: Option<Lit> = None;
            loop {
                if self.decision_level() < assumps.len() {
                    let p = assumps[self.decision_level()];
                    match self.value_lit(p) {
                        LBool::True => {
                            self.new_decision_level();
                        }
                        LBool::False => return SearchOutcome::Unsat,
                        LBool::Undef => {
                            next = Some(p);
                            break;
                        }
                    }
                } else {
                    self.stats.decisions += 1;
                    next = self.pick_branch_var().map(|v| Lit::new(v, self.phase[v as usize]));
                    break;
                }
            }
            match next {
                None => return SearchOutcome::Sat,
                Some(p) => {
                    self.new_decision_level();
                    self.unchecked_enqueue(p, None);
                }
            }
        }
    }

    /// Decides satisfiability of the conjunction of all live levels.
    pub fn check_sat_budgeted(&mut self, budget: &Budget) -> Result<SatVerdict, Stopped> {
        self.stats.sat_calls += 1;
        self.model = None;
        self.cancel_until(0);
        if !self.ok {
            return Ok(SatVerdict::Unsat);
        }
        let assumps: Vec<Lit> = self
            .live_levels
            .iter()
            .map(|&e| Lit::new(self.pushes[e].act_var, true))
            .collect();
        let outcome = self.search(&assumps, budget);
        match outcome {
            SearchOutcome::Sat => {
                self.model = Some(self.assign.clone());
                self.cancel_until(0);
                Ok(SatVerdict::Sat)
            }
            SearchOutcome::Unsat => {
                self.cancel_until(0);
                Ok(SatVerdict::Unsat)
            }
            SearchOutcome::Stopped(reason) => {
                self.cancel_until(0);
                Err(Stopped(reason))
            }
        }
    }

    pub fn check_sat(&mut self) -> SatVerdict {
        self.check_sat_budgeted(&Budget::unlimited())
            .expect("unlimited budget cannot stop")
    }

    /// Names assigned true in the cached model; auxiliary and activation
    /// variables are excluded.
    pub fn get_model(&self) -> Result<BTreeSet<VarName>, SatError> {
        let model = self.model.as_ref().ok_or(SatError::NoModel)?;
        Ok(self
            .pool
            .named_vars()
            .filter(|(id, _)| model[(*id - 1) as usize] == LBool::True)
            .map(|(_, n)| n.clone())
            .collect())
    }

    /// Cached truth value for a named variable after a satisfiable check.
    pub fn model_value(&self, name: &VarName) -> Result<bool, SatError> {
        let model = self.model.as_ref().ok_or(SatError::NoModel)?;
        let id = self.pool.id_of(name).ok_or(SatError::NoModel)?;
        Ok(model[(id - 1) as usize] == LBool::True)
    }

    pub fn has_model(&self) -> bool {
        self.model.is_some()
    }

    /// Writes the active clause set (live levels only, guards stripped,
    /// learnt clauses excluded) in DIMACS CNF.
    pub fn dump_dimacs<W: Write>(&self, w: &mut W) -> io::Result<()> {
        let mut clauses = Vec::new();
        for c in &self.clauses {
            let Some(event) = c.origin else { continue };
            if !self.pushes[event].alive {
                continue;
            }
            let lits = c
                .lits
                .iter()
                .filter(|l| !self.is_act[l.var() as usize])
                .map(|l| Literal::new(l.var() + 1, l.is_pos()));
            clauses.push(Clause::normalized(lits).expect("stored clauses are normalized"));
        }
        write_dimacs(w, &self.pool, &clauses)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;

    fn name(s: &str) -> VarName {
        VarName::new(s).unwrap()
    }

    fn p(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn push_single_var_sat() {
        let mut s = Solver::new(0);
        s.push(&p("x"));
        assert_eq!(s.check_sat(), SatVerdict::Sat);
        assert_eq!(s.get_model().unwrap(), [name("x")].into_iter().collect());
    }

    #[test]
    fn push_pop_restores_satisfiability() {
        let mut s = Solver::new(0);
        s.push(&p("x"));
        s.push(&p("!x"));
        assert_eq!(s.check_sat(), SatVerdict::Unsat);
        s.pop().unwrap();
        assert_eq!(s.check_sat(), SatVerdict::Sat);
        assert!(s.get_model().unwrap().contains(&name("x")));
    }

    #[test]
    fn pop_underflow_is_an_error() {
        let mut s = Solver::new(0);
        assert_eq!(s.pop(), Err(SatError::PopUnderflow));
    }

    #[test]
    fn empty_stack_is_sat() {
        let mut s = Solver::new(0);
        assert_eq!(s.check_sat(), SatVerdict::Sat);
        assert!(s.get_model().unwrap().is_empty());
    }

    #[test]
    fn three_unit_conflict() {
        let mut s = Solver::new(0);
        s.push(&p("a | b"));
        s.push(&p("!a"));
        s.push(&p("!b"));
        assert_eq!(s.check_sat(), SatVerdict::Unsat);
        assert_eq!(s.get_model(), Err(SatError::NoModel));
    }

    #[test]
    fn model_excludes_negatives_and_aux() {
        let mut s = Solver::new(0);
        s.push(&p("x & !y"));
        assert_eq!(s.check_sat(), SatVerdict::Sat);
        assert_eq!(s.get_model().unwrap(), [name("x")].into_iter().collect());
    }

    #[test]
    fn model_is_stable_without_state_change() {
        let mut s = Solver::new(7);
        s.push(&p("a | b | c"));
        assert_eq!(s.check_sat(), SatVerdict::Sat);
        let m1 = s.get_model().unwrap();
        let m2 = s.get_model().unwrap();
        assert_eq!(m1, m2);
    }

    #[test]
    fn ecall_formula_is_satisfiable() {
        let mut s = Solver::new(0);
        s.push(crate::model::tests::ecall_fm().formula());
        assert_eq!(s.check_sat(), SatVerdict::Sat);
        // The model must actually satisfy the formula.
        let m = s.get_model().unwrap();
        let f = crate::model::tests::ecall_fm();
        let a = crate::formula::Assignment::from_true_set(f.features(), &m);
        assert_eq!(f.formula().evaluate(&a), Ok(true));
    }

    #[test]
    fn location_forces_ecall_russia() {
        let m = crate::model::tests::ecall_cafm();
        let mut s = Solver::new(0);
        s.push(m.formula());
        s.push(&p("Location"));
        assert_eq!(s.check_sat(), SatVerdict::Sat);
        assert!(s.get_model().unwrap().contains(&name("eCallRussia")));
    }

    #[test]
    fn push_after_unsat_check_then_pop() {
        let mut s = Solver::new(0);
        s.push(&p("x"));
        s.push(&p("!x"));
        assert_eq!(s.check_sat(), SatVerdict::Unsat);
        s.push(&p("y"));
        assert_eq!(s.check_sat(), SatVerdict::Unsat);
        s.pop().unwrap();
        s.pop().unwrap();
        assert_eq!(s.check_sat(), SatVerdict::Sat);
        assert!(s.get_model().unwrap().contains(&name("x")));
    }

    #[test]
    fn determinism_same_seed_same_model() {
        let run = || {
            let mut s = Solver::new(42);
            s.push(&p("(a | b) & (c | d | e) & (!a | !c)"));
            assert_eq!(s.check_sat(), SatVerdict::Sat);
            s.get_model().unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn pushing_constant_false_is_unsat_until_popped() {
        let mut s = Solver::new(0);
        s.push(&p("x"));
        s.push(&Formula::Const(false));
        assert_eq!(s.check_sat(), SatVerdict::Unsat);
        s.pop().unwrap();
        assert_eq!(s.check_sat(), SatVerdict::Sat);
    }

    #[test]
    fn dimacs_dump_lists_active_clauses_only() {
        let mut s = Solver::new(0);
        s.push(&p("a | !b"));
        s.push(&p("b"));
        s.pop().unwrap();
        let mut out = Vec::new();
        s.dump_dimacs(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("c var 1 = a"));
        assert!(text.contains("1 -2 0"));
        // The popped unit clause for b must be gone.
        assert!(!text.lines().any(|l| l.trim() == "2 0"));
    }
}

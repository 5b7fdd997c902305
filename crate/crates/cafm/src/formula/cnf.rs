//! Clause-level representation and CNF conversion.
//!
//! Conversion is Tseitin-style so the output stays linear in the input:
//! every non-clausal subformula gets a fresh auxiliary variable defined by
//! a biconditional (both polarities are emitted, so the same encoding also
//! serves negated queries). Top-level conjuncts that already are clauses
//! (disjunctions of literals) are emitted directly without auxiliaries.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{self, Write};
use std::ops::Range;

use super::{Formula, VarName};

/// 1-based variable identifier at the clause level.
pub type VarId = u32;

/// A signed occurrence of a variable; `sign == true` is the positive literal.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var: VarId,
    sign: bool,
}

impl Literal {
    pub fn new(var: VarId, sign: bool) -> Literal {
        assert!(var >= 1, "variable ids are 1-based");
        Literal { var, sign }
    }

    pub fn positive(var: VarId) -> Literal {
        Literal::new(var, true)
    }

    pub fn negative(var: VarId) -> Literal {
        Literal::new(var, false)
    }

    pub fn var(self) -> VarId {
        self.var
    }

    pub fn sign(self) -> bool {
        self.sign
    }

    pub fn negated(self) -> Literal {
        Literal { var: self.var, sign: !self.sign }
    }

    /// DIMACS convention: positive id for positive literals, negative otherwise.
    pub fn to_dimacs(self) -> i64 {
        if self.sign {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals with no duplicate occurrences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Normalizes a literal list: duplicates are merged (first occurrence
    /// kept), and `None` is returned for tautologies (both polarities of
    /// one variable present).
    pub fn normalized(lits: impl IntoIterator<Item = Literal>) -> Option<Clause> {
        let mut seen: BTreeMap<VarId, bool> = BTreeMap::new();
        let mut literals = Vec::new();
        for lit in lits {
            match seen.get(&lit.var()) {
                Some(&sign) if sign == lit.sign() => continue,
                Some(_) => return None,
                None => {
                    seen.insert(lit.var(), lit.sign());
                    literals.push(lit);
                }
            }
        }
        Some(Clause { literals })
    }

    /// The empty clause, i.e. falsum.
    pub fn empty() -> Clause {
        Clause { literals: Vec::new() }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }
}

/// Bijection between variable names and clause-level ids, plus anonymous
/// auxiliary ids. Append-only: a name keeps its id for the pool's lifetime.
#[derive(Clone, Debug, Default)]
pub struct VarPool {
    names: Vec<Option<VarName>>,
    by_name: HashMap<VarName, VarId>,
}

impl VarPool {
    pub fn new() -> VarPool {
        VarPool::default()
    }

    pub fn num_vars(&self) -> u32 {
        self.names.len() as u32
    }

    pub fn intern(&mut self, name: &VarName) -> VarId {
        if let Some(&id) = self.by_name.get(name) {
            return id;
        }
        self.names.push(Some(name.clone()));
        let id = self.names.len() as VarId;
        self.by_name.insert(name.clone(), id);
        id
    }

    pub fn fresh_aux(&mut self) -> VarId {
        self.names.push(None);
        self.names.len() as VarId
    }

    pub fn id_of(&self, name: &VarName) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn name_of(&self, id: VarId) -> Option<&VarName> {
        self.names.get(id as usize - 1).and_then(|n| n.as_ref())
    }

    pub fn is_named(&self, id: VarId) -> bool {
        self.name_of(id).is_some()
    }

    /// Named variables in id order.
    pub fn named_vars(&self) -> impl Iterator<Item = (VarId, &VarName)> {
        self.names
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.as_ref().map(|n| (i as VarId + 1, n)))
    }
}

/// Result of converting a formula into clause form.
#[derive(Clone, Debug)]
pub struct CnfEncoding {
    /// Tseitin definition clauses; hold unconditionally (pure extensions).
    pub defs: Vec<Clause>,
    /// Clauses asserting the formula itself.
    pub roots: Vec<Clause>,
    /// Name-to-id map for the original variables at the time of encoding.
    pub var_map: BTreeMap<VarName, VarId>,
    /// Ids of the auxiliary variables introduced by this conversion; always
    /// above every id that existed in the pool beforehand.
    pub aux_ids: Range<VarId>,
}

impl CnfEncoding {
    pub fn clauses(&self) -> impl Iterator<Item = &Clause> {
        self.defs.iter().chain(self.roots.iter())
    }

    pub fn num_clauses(&self) -> usize {
        self.defs.len() + self.roots.len()
    }
}

enum ClauseView {
    Clause(Clause),
    Tautology,
    NotClausal,
}

/// Reads a formula as a disjunction of literals, if it is one.
fn as_clause(f: &Formula, pool: &VarPool) -> ClauseView {
    let mut lits = Vec::new();
    fn walk(f: &Formula, pool: &VarPool, out: &mut Vec<Literal>) -> bool {
        match f {
            Formula::Or(l, r) => walk(l, pool, out) && walk(r, pool, out),
            Formula::Var(v) => {
                out.push(Literal::positive(pool.id_of(v).expect("registered var")));
                true
            }
            Formula::Not(c) => match c.as_ref() {
                Formula::Var(v) => {
                    out.push(Literal::negative(pool.id_of(v).expect("registered var")));
                    true
                }
                _ => false,
            },
            _ => false,
        }
    }
    if !walk(f, pool, &mut lits) {
        return ClauseView::NotClausal;
    }
    match Clause::normalized(lits) {
        Some(c) => ClauseView::Clause(c),
        None => ClauseView::Tautology,
    }
}

/// Tseitin encoding of one (constant-free) subformula; returns the literal
/// equivalent to the subformula and appends definition clauses to `defs`.
fn tseitin_literal(f: &Formula, pool: &mut VarPool, defs: &mut Vec<Clause>) -> Literal {
    let mut emit = |lits: Vec<Literal>, defs: &mut Vec<Clause>| {
        if let Some(c) = Clause::normalized(lits) {
            defs.push(c);
        }
    };
    match f {
        Formula::Var(v) => Literal::positive(pool.id_of(v).expect("registered var")),
        Formula::Const(_) => unreachable!("constants are folded before encoding"),
        Formula::Not(c) => tseitin_literal(c, pool, defs).negated(),
        Formula::And(l, r) => {
            let ll = tseitin_literal(l, pool, defs);
            let rl = tseitin_literal(r, pool, defs);
            let a = Literal::positive(pool.fresh_aux());
            emit(vec![a.negated(), ll], defs);
            emit(vec![a.negated(), rl], defs);
            emit(vec![a, ll.negated(), rl.negated()], defs);
            a
        }
        Formula::Or(l, r) => {
            let ll = tseitin_literal(l, pool, defs);
            let rl = tseitin_literal(r, pool, defs);
            let a = Literal::positive(pool.fresh_aux());
            emit(vec![a.negated(), ll, rl], defs);
            emit(vec![a, ll.negated()], defs);
            emit(vec![a, rl.negated()], defs);
            a
        }
        Formula::Implies(l, r) => {
            let ll = tseitin_literal(l, pool, defs);
            let rl = tseitin_literal(r, pool, defs);
            let a = Literal::positive(pool.fresh_aux());
            emit(vec![a.negated(), ll.negated(), rl], defs);
            emit(vec![a, ll], defs);
            emit(vec![a, rl.negated()], defs);
            a
        }
    }
}

/// Converts `f` to clause form, interning its variables in `pool`. Names
/// already present keep their ids; auxiliaries are allocated above all
/// existing ids. The clause set is satisfiable exactly when `f` is, and
/// models project onto models of `f` over the original variables.
pub fn tseitin(f: &Formula, pool: &mut VarPool) -> CnfEncoding {
    // Register every name before allocating auxiliaries so the aux block
    // is contiguous and above all named ids from this formula.
    for name in f.vars_in_order() {
        pool.intern(&name);
    }
    let aux_start = pool.num_vars() + 1;

    let mut defs = Vec::new();
    let mut roots = Vec::new();
    match f.fold_constants() {
        Formula::Const(true) => {}
        Formula::Const(false) => roots.push(Clause::empty()),
        folded => {
            for conjunct in folded.conjuncts() {
                match as_clause(conjunct, pool) {
                    ClauseView::Clause(c) => roots.push(c),
                    ClauseView::Tautology => {}
                    ClauseView::NotClausal => {
                        let lit = tseitin_literal(conjunct, pool, &mut defs);
                        roots.push(Clause::normalized([lit]).expect("unit clause"));
                    }
                }
            }
        }
    }

    let var_map = pool.named_vars().map(|(id, n)| (n.clone(), id)).collect();
    CnfEncoding {
        defs,
        roots,
        var_map,
        aux_ids: aux_start..pool.num_vars() + 1,
    }
}

/// Converts with a fresh pool; see [`tseitin`] to share a pool.
pub fn to_cnf(f: &Formula) -> (CnfEncoding, VarPool) {
    let mut pool = VarPool::new();
    let enc = tseitin(f, &mut pool);
    (enc, pool)
}

/// Writes clauses in DIMACS CNF, with `c` comment lines mapping named ids.
pub fn write_dimacs<W: Write>(
    w: &mut W,
    pool: &VarPool,
    clauses: &[Clause],
) -> io::Result<()> {
    for (id, name) in pool.named_vars() {
        writeln!(w, "c var {id} = {name}")?;
    }
    writeln!(w, "p cnf {} {}", pool.num_vars(), clauses.len())?;
    for clause in clauses {
        for lit in clause.literals() {
            write!(w, "{} ", lit.to_dimacs())?;
        }
        writeln!(w, "0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::{Assignment, Formula, VarName};
    use super::*;

    fn v(s: &str) -> Formula {
        Formula::var(s)
    }

    /// Satisfiability of a clause set by exhaustive enumeration.
    fn brute_sat(num_vars: u32, clauses: &[Clause]) -> Option<Vec<bool>> {
        assert!(num_vars <= 20);
        for mask in 0u64..(1 << num_vars) {
            let value = |id: VarId| mask >> (id - 1) & 1 == 1;
            if clauses.iter().all(|c| {
                c.literals().iter().any(|l| value(l.var()) == l.sign())
            }) {
                return Some((1..=num_vars).map(value).collect());
            }
        }
        None
    }

    #[test]
    fn single_var_is_one_unit_clause() {
        let (enc, _) = to_cnf(&v("x"));
        assert!(enc.defs.is_empty());
        assert_eq!(enc.roots.len(), 1);
        assert_eq!(enc.roots[0].literals(), &[Literal::positive(1)]);
        assert!(enc.aux_ids.is_empty());
    }

    #[test]
    fn conjunction_of_vars_has_no_aux() {
        let (enc, pool) = to_cnf(&Formula::and(v("a"), v("b")));
        assert!(enc.aux_ids.is_empty());
        assert_eq!(enc.num_clauses(), 2);
        let model = brute_sat(pool.num_vars(), &enc.clauses().cloned().collect::<Vec<_>>())
            .expect("satisfiable");
        assert!(model.iter().all(|&b| b));
    }

    #[test]
    fn contradiction_is_unsat() {
        let (enc, pool) = to_cnf(&Formula::and(v("a"), Formula::not(v("a"))));
        let clauses: Vec<_> = enc.clauses().cloned().collect();
        assert!(brute_sat(pool.num_vars(), &clauses).is_none());
    }

    #[test]
    fn tautological_clause_dropped() {
        let (enc, _) = to_cnf(&Formula::or(v("a"), Formula::not(v("a"))));
        assert_eq!(enc.num_clauses(), 0);
    }

    #[test]
    fn duplicate_literals_merged() {
        let (enc, _) = to_cnf(&Formula::or(v("a"), v("a")));
        assert_eq!(enc.roots.len(), 1);
        assert_eq!(enc.roots[0].len(), 1);
    }

    #[test]
    fn shared_pool_reuses_ids_and_stacks_aux() {
        let mut pool = VarPool::new();
        let e1 = tseitin(&Formula::implies(v("a"), v("b")), &mut pool);
        let high_water = pool.num_vars();
        let e2 = tseitin(&Formula::implies(v("b"), v("a")), &mut pool);
        assert_eq!(e1.var_map[&VarName::new("a").unwrap()], e2.var_map[&VarName::new("a").unwrap()]);
        assert!(e2.aux_ids.start > high_water);
        for id in e2.aux_ids.clone() {
            assert!(!e1.aux_ids.contains(&id));
        }
    }

    #[test]
    fn constant_formulas() {
        let (t, _) = to_cnf(&Formula::Const(true));
        assert_eq!(t.num_clauses(), 0);
        let (f, _) = to_cnf(&Formula::Const(false));
        assert_eq!(f.roots.len(), 1);
        assert!(f.roots[0].is_empty());
    }

    /// Equisatisfiability with model projection, brute-forced over every
    /// assignment of original + auxiliary variables.
    fn check_equisat(f: &Formula) {
        let (enc, pool) = to_cnf(f);
        let clauses: Vec<_> = enc.clauses().cloned().collect();
        let names: Vec<VarName> = f.vars().into_iter().collect();

        let formula_sat = {
            let mut found = false;
            for mask in 0u64..(1 << names.len()) {
                let a: Assignment = names
                    .iter()
                    .enumerate()
                    .map(|(i, n)| (n.clone(), mask >> i & 1 == 1))
                    .collect();
                if f.evaluate(&a).unwrap() {
                    found = true;
                    break;
                }
            }
            found
        };

        match brute_sat(pool.num_vars(), &clauses) {
            Some(model) => {
                assert!(formula_sat, "clauses sat but formula unsat: {f}");
                // Projection: the clause model restricted to original vars
                // satisfies the formula.
                let a: Assignment = names
                    .iter()
                    .map(|n| (n.clone(), model[(pool.id_of(n).unwrap() - 1) as usize]))
                    .collect();
                assert_eq!(f.evaluate(&a), Ok(true), "projection failed: {f}");
            }
            None => assert!(!formula_sat, "formula sat but clauses unsat: {f}"),
        }
    }

    #[test]
    fn equisat_on_small_formulas() {
        let cases = [
            "a & b",
            "a & !a",
            "a -> b",
            "(a -> b) & (b -> c) & a & !c",
            "(a | b) & (!a | b) & (a | !b) & (!a | !b)",
            "!(a & b) -> (c | d)",
            "((a -> b) -> a) -> a",
            "!(!(a | b) & (c -> a))",
        ];
        for case in cases {
            check_equisat(&Formula::parse(case).unwrap());
        }
    }
}

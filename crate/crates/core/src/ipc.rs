//! Bounded least-fixpoint provability tables over a finite well-order.
//!
//! A table realizes, within an explicit formula universe and budget, the
//! recursion: φ holds at level λ iff it is in the finitary closure of the
//! recognized axioms (modus ponens and generalization among universe
//! formulas), or some premise family ψ(n̄) sits at a lower level — all
//! numeral instances below the cap plus the free-variable formula itself —
//! with the implication ∀x ψ(x) → φ in the closure.
//!
//! Saturation proceeds in rounds that read only the previous round's state,
//! so the result is independent of scan order.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;

use crate::certificate::{check_certificate, CheckPolicy, OmegaCertificate};
use crate::error::SaturateError;
use crate::formula::Formula;
use crate::godel::{encode_formula, GodelCode};
use crate::ordinal::WellOrder;
use crate::proof::is_logical_axiom;
use crate::term::{SetVar, Term, Var};
use crate::theory::OracleTheory;

/// The formula universe of a table: every formula with Gödel code below the
/// bound, together with explicitly listed extras (closed under subformulas).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniverseSpec {
    pub code_bound: BigUint,
    pub extras: Vec<Formula>,
}

impl UniverseSpec {
    pub fn bounded(code_bound: u64) -> UniverseSpec {
        UniverseSpec {
            code_bound: BigUint::from(code_bound),
            extras: vec![],
        }
    }

    pub fn with_extras(mut self, extras: Vec<Formula>) -> UniverseSpec {
        self.extras = extras;
        self
    }
}

const MAX_UNIVERSE: usize = 400_000;

/// Enumerates every formula whose serialization has at most `max_len` tokens.
fn enumerate_by_length(max_len: usize) -> Vec<Formula> {
    // terms[b] = all terms of exactly b tokens; similarly formulas
    let mut terms: Vec<Vec<Term>> = vec![vec![]; max_len + 1];
    let mut nat_sizes: Vec<Vec<u64>> = vec![vec![]; max_len + 1];
    // encoded naturals: DEnd alone is 0 (1 token); d digits + DEnd for values
    // in [4^(d-1), 4^d)
    for (len, slot) in nat_sizes.iter_mut().enumerate().skip(1) {
        if len == 1 {
            slot.push(0);
        } else {
            let d = (len - 1) as u32;
            let lo = 4u64.pow(d - 1);
            let hi = 4u64.pow(d);
            slot.extend(lo..hi);
        }
        if slot.len() > MAX_UNIVERSE {
            break;
        }
    }
    for b in 1..=max_len {
        let mut out: Vec<Term> = Vec::new();
        if b == 1 {
            out.push(Term::Zero);
            out.push(Term::One);
        }
        // variables: TVar + nat
        if b >= 2 {
            for &i in &nat_sizes[b - 1] {
                if let Ok(idx) = u32::try_from(i) {
                    out.push(Term::var(idx));
                }
            }
        }
        // unary: projections
        if b >= 2 {
            for t in terms[b - 1].clone() {
                out.push(Term::proj(crate::term::ProjSide::Left, t.clone()));
                out.push(Term::proj(crate::term::ProjSide::Right, t));
            }
        }
        // binary operators
        for left in 1..b.saturating_sub(1) {
            let right = b - 1 - left;
            for lt in terms[left].clone() {
                for rt in &terms[right] {
                    out.push(Term::add(lt.clone(), rt.clone()));
                    out.push(Term::mul(lt.clone(), rt.clone()));
                    out.push(Term::exp(lt.clone(), rt.clone()));
                    out.push(Term::pair(lt.clone(), rt.clone()));
                }
            }
        }
        terms[b] = out;
    }
    let mut formulas: Vec<Vec<Formula>> = vec![vec![]; max_len + 1];
    for b in 1..=max_len {
        let mut out: Vec<Formula> = Vec::new();
        // binary term atoms
        for left in 1..b.saturating_sub(1) {
            let right = b - 1 - left;
            for lt in &terms[left] {
                for rt in &terms[right] {
                    out.push(Formula::Eq(lt.clone(), rt.clone()));
                    out.push(Formula::Lt(lt.clone(), rt.clone()));
                }
            }
        }
        // oracle atoms
        if b >= 2 {
            for t in &terms[b - 1] {
                out.push(Formula::Oracle(t.clone()));
            }
        }
        // membership atoms: term + set index
        for tlen in 1..b.saturating_sub(1) {
            let nlen = b - 1 - tlen;
            for t in &terms[tlen] {
                for &i in &nat_sizes[nlen] {
                    if let Ok(idx) = u32::try_from(i) {
                        out.push(Formula::In(t.clone(), SetVar(idx)));
                    }
                }
            }
        }
        // negation
        if b >= 2 {
            for f in formulas[b - 1].clone() {
                out.push(Formula::not(f));
            }
        }
        // binary connectives
        for left in 1..b.saturating_sub(1) {
            let right = b - 1 - left;
            for lf in formulas[left].clone() {
                for rf in &formulas[right] {
                    out.push(Formula::and(lf.clone(), rf.clone()));
                    out.push(Formula::or(lf.clone(), rf.clone()));
                    out.push(Formula::implies(lf.clone(), rf.clone()));
                }
            }
        }
        // unbounded quantifiers: tag + nat + body
        for nlen in 1..b.saturating_sub(1) {
            let blen = b - 1 - nlen;
            for &i in &nat_sizes[nlen] {
                let Ok(idx) = u32::try_from(i) else { continue };
                for f in formulas[blen].clone() {
                    out.push(Formula::forall(Var(idx), f.clone()));
                    out.push(Formula::exists(Var(idx), f.clone()));
                    out.push(Formula::forall_set(SetVar(idx), f.clone()));
                    out.push(Formula::exists_set(SetVar(idx), f));
                }
            }
        }
        // bounded quantifiers: tag + nat + bound term + body
        for nlen in 1..b.saturating_sub(2) {
            for tlen in 1..(b - 1 - nlen) {
                let blen = b - 1 - nlen - tlen;
                if blen == 0 {
                    continue;
                }
                for &i in &nat_sizes[nlen] {
                    let Ok(idx) = u32::try_from(i) else { continue };
                    for t in &terms[tlen] {
                        if t.free_vars().contains(&Var(idx)) {
                            continue;
                        }
                        for f in &formulas[blen] {
                            out.push(Formula::forall_lt(Var(idx), t.clone(), f.clone()));
                            out.push(Formula::exists_lt(Var(idx), t.clone(), f.clone()));
                        }
                    }
                }
            }
        }
        if out.len() > MAX_UNIVERSE {
            out.truncate(MAX_UNIVERSE);
        }
        formulas[b] = out;
    }
    formulas.into_iter().flatten().collect()
}

/// Largest token length whose whole length block starts below the bound.
fn max_len_for_bound(bound: &BigUint) -> usize {
    let k = BigUint::from(crate::godel::ALPHABET_SIZE);
    let mut offset = BigUint::from(0u32);
    let mut power = BigUint::from(1u32);
    let mut len = 0usize;
    loop {
        let next = &offset + &power;
        if next >= *bound || len >= 12 {
            return len;
        }
        offset = next;
        power *= &k;
        len += 1;
    }
}

/// Builds the universe: enumerated formulas with code below the bound, plus
/// the subformula closure of the extras; sorted by code.
pub fn build_universe(spec: &UniverseSpec) -> Vec<Formula> {
    let mut set: BTreeMap<BigUint, Formula> = BTreeMap::new();
    let max_len = max_len_for_bound(&spec.code_bound);
    for f in enumerate_by_length(max_len) {
        let code = encode_formula(&f).0;
        if code < spec.code_bound {
            set.insert(code, f);
        }
    }
    for extra in &spec.extras {
        let mut stack = vec![extra.clone()];
        while let Some(f) = stack.pop() {
            for child in f.children() {
                stack.push(child.clone());
            }
            set.insert(encode_formula(&f).0, f);
        }
    }
    set.into_values().collect()
}

/// A saturated provability table.
#[derive(Debug, Clone)]
pub struct IpcTable {
    pub order: WellOrder,
    pub theory: OracleTheory,
    pub universe: Vec<Formula>,
    pub numeral_cap: u64,
    /// Entries per level (order-element code → universe indices).
    levels: BTreeMap<u64, BTreeSet<usize>>,
    index_of: HashMap<Formula, usize>,
}

impl IpcTable {
    pub fn contains(&self, level: u64, phi: &Formula) -> bool {
        let Some(idx) = self.index_of.get(phi) else {
            return false;
        };
        self.levels
            .get(&level)
            .map(|s| s.contains(idx))
            .unwrap_or(false)
    }

    pub fn level_entries(&self, level: u64) -> Vec<&Formula> {
        self.levels
            .get(&level)
            .map(|s| s.iter().map(|&i| &self.universe[i]).collect())
            .unwrap_or_default()
    }

    pub fn levels(&self) -> Vec<u64> {
        self.levels.keys().copied().collect()
    }

    /// All entries as sorted (level, code, formula) triples.
    pub fn entries(&self) -> Vec<(u64, GodelCode, &Formula)> {
        let mut out = Vec::new();
        for (&lvl, set) in &self.levels {
            for &i in set {
                out.push((lvl, encode_formula(&self.universe[i]), &self.universe[i]));
            }
        }
        out
    }

    pub fn entry_count(&self) -> usize {
        self.levels.values().map(|s| s.len()).sum()
    }

    /// Monotonicity audit: pairs (λ', λ) with λ' <_Λ λ whose entry sets are
    /// not nested.
    pub fn monotonicity_violations(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let levels: Vec<u64> = self.levels();
        for &a in &levels {
            for &b in &levels {
                if self.order.less(a, b) && !self.levels[&a].is_subset(&self.levels[&b]) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Distributivity audit: triples (level, antecedent, implication) where an
    /// implication and its antecedent are entries but the consequent is not.
    pub fn distributivity_violations(&self) -> Vec<(u64, Formula, Formula)> {
        let mut out = Vec::new();
        for (&lvl, set) in &self.levels {
            for &i in set {
                if let Formula::Implies(a, b) = &self.universe[i] {
                    if let (Some(&ai), Some(&bi)) =
                        (self.index_of.get(&**a), self.index_of.get(&**b))
                    {
                        if set.contains(&ai) && !set.contains(&bi) {
                            out.push((lvl, (**a).clone(), self.universe[i].clone()));
                        }
                    }
                }
            }
        }
        out
    }

    /// True iff ⊥ (0 = 1) is not an entry at the level.
    pub fn consistent_at(&self, level: u64) -> bool {
        !self.contains(level, &Formula::falsum())
    }
}

/// Verified certificate seeds: conclusions injected at their stated level
/// before closure.
pub type Seed = (u64, OmegaCertificate);

pub fn saturate_ipc(
    theory: &OracleTheory,
    order: &WellOrder,
    universe: &UniverseSpec,
    numeral_cap: u64,
    budget: u64,
    seeds: &[Seed],
    seed_policy: CheckPolicy,
    scan_order: Option<&[usize]>,
) -> Result<IpcTable, SaturateError> {
    if order.check().is_err() {
        return Err(SaturateError::NotWellOrder);
    }
    let elements = order
        .elements()
        .map_err(|_| SaturateError::InfiniteCarrier)?;
    let universe = build_universe(universe);
    let index_of: HashMap<Formula, usize> = universe
        .iter()
        .enumerate()
        .map(|(i, f)| (f.clone(), i))
        .collect();

    // per-index structural facts
    let axiom_flags: Vec<bool> = universe
        .iter()
        .map(|f| theory.is_axiom(f) || is_logical_axiom(f))
        .collect();
    // modus ponens: consequent index → (implication index, antecedent index)
    let mut mp_into: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    // ω-clause: conclusion index → (implication index, ψ index, var)
    let mut omega_into: HashMap<usize, Vec<(usize, usize, Var)>> = HashMap::new();
    for (i, f) in universe.iter().enumerate() {
        if let Formula::Implies(a, b) = f {
            if let (Some(&ai), Some(&bi)) = (index_of.get(&**a), index_of.get(&**b)) {
                mp_into.entry(bi).or_default().push((i, ai));
                if let Formula::Forall(v, psi) = &**a {
                    if let Some(&pi) = index_of.get(&**psi) {
                        let fv = psi.free_vars();
                        if fv.is_empty() || (fv.len() == 1 && fv.contains(v)) {
                            omega_into.entry(bi).or_default().push((i, pi, *v));
                        }
                    }
                }
            }
        }
    }
    // instance lookup tables for ω-premises: ψ index → indices of ψ(n̄)
    let mut instances: HashMap<(usize, Var), Option<Vec<usize>>> = HashMap::new();
    for lists in omega_into.values() {
        for &(_, pi, v) in lists {
            instances.entry((pi, v)).or_insert_with(|| {
                let mut out = Vec::new();
                for k in 0..numeral_cap {
                    let inst = universe[pi].substitute_numeral(v, k);
                    match index_of.get(&inst) {
                        Some(&idx) => out.push(idx),
                        None => return None,
                    }
                }
                Some(out)
            });
        }
    }

    // verified seeds per level
    let mut seed_sets: BTreeMap<u64, BTreeSet<usize>> = BTreeMap::new();
    for (level, cert) in seeds {
        let Some(concl) = cert.conclusion() else {
            return Err(SaturateError::SeedRejected {
                level: *level,
                reason: "certificate has no conclusion".to_string(),
            });
        };
        let Some(&idx) = index_of.get(concl) else {
            return Err(SaturateError::SeedOutsideUniverse);
        };
        match check_certificate(cert, *level, concl, theory, order, seed_policy) {
            Ok(v) if v.is_accepted() => {}
            Ok(crate::certificate::Verdict::Rejected(r)) => {
                return Err(SaturateError::SeedRejected {
                    level: *level,
                    reason: r,
                })
            }
            Ok(_) => unreachable!(),
            Err(e) => {
                return Err(SaturateError::SeedRejected {
                    level: *level,
                    reason: e.to_string(),
                })
            }
        }
        seed_sets.entry(*level).or_default().insert(idx);
    }

    let default_scan: Vec<usize> = (0..universe.len()).collect();
    let scan: &[usize] = scan_order.unwrap_or(&default_scan);

    let mut additions: u64 = 0;
    let mut levels: BTreeMap<u64, BTreeSet<usize>> = BTreeMap::new();
    for &lambda in &elements {
        let mut current: BTreeSet<usize> = BTreeSet::new();
        // seeds at this level or below
        for (&slevel, set) in &seed_sets {
            if slevel == lambda || order.less(slevel, lambda) {
                current.extend(set.iter().copied());
            }
        }
        loop {
            let mut next_round: Vec<usize> = Vec::new();
            for &i in scan {
                if current.contains(&i) {
                    continue;
                }
                let mut derivable = axiom_flags[i];
                if !derivable {
                    if let Some(pairs) = mp_into.get(&i) {
                        derivable = pairs
                            .iter()
                            .any(|&(imp, ant)| current.contains(&imp) && current.contains(&ant));
                    }
                }
                if !derivable {
                    if let Some(rules) = omega_into.get(&i) {
                        'rule: for &(imp, pi, v) in rules {
                            if !current.contains(&imp) {
                                continue;
                            }
                            let Some(Some(inst)) = instances.get(&(pi, v)) else {
                                continue;
                            };
                            for &xi in &elements {
                                if !order.less(xi, lambda) {
                                    continue;
                                }
                                let Some(lower) = levels.get(&xi) else {
                                    continue;
                                };
                                if lower.contains(&pi)
                                    && inst.iter().all(|k| lower.contains(k))
                                {
                                    derivable = true;
                                    break 'rule;
                                }
                            }
                        }
                    }
                }
                if derivable {
                    next_round.push(i);
                }
            }
            if next_round.is_empty() {
                break;
            }
            additions += next_round.len() as u64;
            if additions > budget {
                return Err(SaturateError::BudgetExhausted(budget));
            }
            current.extend(next_round);
        }
        levels.insert(lambda, current);
    }

    Ok(IpcTable {
        order: order.clone(),
        theory: theory.clone(),
        universe,
        numeral_cap,
        levels,
        index_of,
    })
}

/// Convenience wrapper with no seeds and the natural scan order.
pub fn saturate_simple(
    theory: &OracleTheory,
    order: &WellOrder,
    universe: &UniverseSpec,
    numeral_cap: u64,
    budget: u64,
) -> Result<IpcTable, SaturateError> {
    saturate_ipc(
        theory,
        order,
        universe,
        numeral_cap,
        budget,
        &[],
        CheckPolicy::Sampled(numeral_cap),
        None,
    )
}

/// Consistency query: ⊥ is not an entry at the level.
pub fn consistency_query(table: &IpcTable, level: u64) -> bool {
    table.consistent_at(level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::{OracleSet, SetDescriptor};

    fn theory() -> OracleTheory {
        OracleTheory::new(
            crate::theory::TheorySpec::eca0(),
            OracleSet::Plain(SetDescriptor::singleton(2)),
        )
    }

    #[test]
    fn universe_enumeration_is_code_sound() {
        let spec = UniverseSpec::bounded(4096);
        let universe = build_universe(&spec);
        assert!(!universe.is_empty());
        for f in &universe {
            assert!(encode_formula(f).0 < spec.code_bound);
        }
        // sorted and duplicate-free by code
        let codes: Vec<BigUint> = universe.iter().map(|f| encode_formula(f).0).collect();
        for w in codes.windows(2) {
            assert!(w[0] < w[1]);
        }
        // ⊥ = (0=1) is small enough to live in every universe of this size
        assert!(universe.contains(&Formula::falsum()));
    }

    #[test]
    fn single_level_table_is_finitary_closure_only() {
        let th = theory();
        let order = WellOrder::finite(1);
        let table = saturate_simple(&th, &order, &UniverseSpec::bounded(4096), 4, 100_000)
            .unwrap();
        // level 0 exists and contains e.g. the oracle literal 𝔒(2)… if it is
        // in the universe; (O 2) has a 4-token serialization, outside 4096.
        // The reflexive equality (= 0 0) is present and is a logical axiom.
        assert!(table.contains(0, &Formula::verum()));
        assert!(consistency_query(&table, 0));
        assert!(table.monotonicity_violations().is_empty());
        assert!(table.distributivity_violations().is_empty());
    }

    #[test]
    fn seeded_falsum_shows_up_and_monotonicity_holds() {
        let th = theory().with_extra(vec![Formula::falsum()]);
        let order = WellOrder::finite(3);
        let table = saturate_simple(&th, &order, &UniverseSpec::bounded(4096), 4, 100_000)
            .unwrap();
        for lvl in table.levels() {
            assert!(!consistency_query(&table, lvl));
        }
        assert!(table.monotonicity_violations().is_empty());
    }

    #[test]
    fn omega_clause_fires_with_a_prepared_universe() {
        // premise family ψ(x) := 𝔒(x) over the full oracle: every numeral
        // instance is an axiom, and (∀xψ → ∀xψ) is a tautology, so the
        // ω-clause can conclude ∀x 𝔒(x) — provided ψ(x) itself is derivable
        // at the lower level.
        let full = OracleTheory::new(
            crate::theory::TheorySpec::eca0(),
            OracleSet::Plain(SetDescriptor::full()),
        );
        let psi = Formula::Oracle(Term::var(0));
        let target = Formula::forall(Var(0), psi.clone());
        let imp = Formula::implies(target.clone(), target.clone());
        let cap = 3;
        let mut extras = vec![imp.clone(), target.clone()];
        for k in 0..cap {
            extras.push(psi.substitute_numeral(Var(0), k));
        }
        let spec = UniverseSpec::bounded(2048).with_extras(extras);
        let order = WellOrder::finite(2);
        // ψ(x) is an open atom, not an axiom: the clause must not fire.
        let table = saturate_simple(&full, &order, &spec, cap, 100_000).unwrap();
        assert!(!table.contains(1, &target));

        // With ψ(x) seeded as an extra axiom the clause fires at level 1,
        // but not at level 0 (no ξ below the least element).
        let full_seeded = full.clone().with_extra(vec![psi.clone()]);
        let table2 = saturate_simple(&full_seeded, &order, &spec, cap, 100_000).unwrap();
        assert!(table2.contains(1, &target));
        assert!(!table2.contains(0, &target));
        assert!(table2.monotonicity_violations().is_empty());
        assert!(table2.distributivity_violations().is_empty());
    }

    #[test]
    fn shuffled_scan_orders_agree() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let th = theory().with_extra(vec![Formula::falsum()]);
        let order = WellOrder::finite(2);
        let spec = UniverseSpec::bounded(4096);
        let base = saturate_simple(&th, &order, &spec, 4, 100_000).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            let mut perm: Vec<usize> = (0..base.universe.len()).collect();
            perm.shuffle(&mut rng);
            let shuffled = saturate_ipc(
                &th,
                &order,
                &spec,
                4,
                100_000,
                &[],
                CheckPolicy::Sampled(4),
                Some(&perm),
            )
            .unwrap();
            assert_eq!(base.entries().len(), shuffled.entries().len());
            let a: Vec<_> = base.entries().into_iter().map(|(l, c, _)| (l, c)).collect();
            let b: Vec<_> = shuffled
                .entries()
                .into_iter()
                .map(|(l, c, _)| (l, c))
                .collect();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let th = theory();
        let order = WellOrder::finite(1);
        let r = saturate_simple(&th, &order, &UniverseSpec::bounded(4096), 4, 3);
        assert!(matches!(r, Err(SaturateError::BudgetExhausted(3))));
    }
}

//! Countable coded ω-models and Tarskian satisfaction.
//!
//! A model is a finite list of set descriptors M₀, M₁, …; the oracle symbol
//! is interpreted by M₀ and second-order quantifiers range exactly over the
//! listed family. First-order constants c_n are identified with the numerals
//! and set constants C_n with the set variables of the same index.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::descriptor::{OracleSet, SetDescriptor};
use crate::error::ModelError;
use crate::eval::{Caps, ThreeValued};
use crate::formula::Formula;
use crate::ipc::IpcTable;
use crate::term::{SetVar, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedOmegaModel {
    sets: Vec<SetDescriptor>,
}

impl CodedOmegaModel {
    pub fn new(sets: Vec<SetDescriptor>) -> CodedOmegaModel {
        assert!(!sets.is_empty(), "a coded model lists at least M0");
        CodedOmegaModel { sets }
    }

    pub fn sets(&self) -> &[SetDescriptor] {
        &self.sets
    }

    pub fn set(&self, n: usize) -> Option<&SetDescriptor> {
        self.sets.get(n)
    }

    pub fn oracle(&self) -> &SetDescriptor {
        &self.sets[0]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Value of a closed term of the extended language (constants c_n being the
/// numerals).
pub fn val(t: &Term, caps: &Caps) -> Result<BigUint, ModelError> {
    if !t.is_closed() {
        return Err(ModelError::OpenSentence);
    }
    Ok(t.eval_closed(caps.term_bits)?)
}

struct SatCtx<'a> {
    model: &'a CodedOmegaModel,
    caps: Caps,
}

impl SatCtx<'_> {
    fn term(
        &self,
        t: &Term,
        nums: &BTreeMap<Var, BigUint>,
    ) -> Result<Option<BigUint>, ModelError> {
        match t.eval(&|v| nums.get(&v).cloned(), self.caps.term_bits) {
            Ok(v) => Ok(Some(v)),
            Err(crate::error::EvalError::MagnitudeExceeded { .. }) => Ok(None),
            Err(crate::error::EvalError::UnboundVar(_)) => Err(ModelError::OpenSentence),
            Err(e) => Err(ModelError::Eval(e)),
        }
    }

    fn sat(
        &self,
        phi: &Formula,
        nums: &mut BTreeMap<Var, BigUint>,
        sets: &mut BTreeMap<SetVar, usize>,
    ) -> Result<ThreeValued, ModelError> {
        match phi {
            Formula::Eq(a, b) => Ok(match (self.term(a, nums)?, self.term(b, nums)?) {
                (Some(x), Some(y)) => ThreeValued::from_bool(x == y),
                _ => ThreeValued::Unknown,
            }),
            Formula::Lt(a, b) => Ok(match (self.term(a, nums)?, self.term(b, nums)?) {
                (Some(x), Some(y)) => ThreeValued::from_bool(x < y),
                _ => ThreeValued::Unknown,
            }),
            Formula::In(t, x) => {
                let idx = match sets.get(x) {
                    Some(&i) => i,
                    None => {
                        // a free set variable is read as the constant C_i
                        let i = x.0 as usize;
                        if i >= self.model.len() {
                            return Err(ModelError::UnknownSetConstant(x.0));
                        }
                        i
                    }
                };
                Ok(match self.term(t, nums)? {
                    Some(v) => {
                        ThreeValued::from_bool(self.model.sets[idx].contains(&v))
                    }
                    None => ThreeValued::Unknown,
                })
            }
            Formula::Oracle(t) => Ok(match self.term(t, nums)? {
                Some(v) => ThreeValued::from_bool(self.model.oracle().contains(&v)),
                None => ThreeValued::Unknown,
            }),
            Formula::Not(f) => Ok(self.sat(f, nums, sets)?.negate()),
            Formula::And(a, b) => Ok(self.sat(a, nums, sets)?.and(self.sat(b, nums, sets)?)),
            Formula::Or(a, b) => Ok(self.sat(a, nums, sets)?.or(self.sat(b, nums, sets)?)),
            Formula::Implies(a, b) => {
                Ok(self.sat(a, nums, sets)?.implies(self.sat(b, nums, sets)?))
            }
            Formula::ForallLt(v, bound, body) => {
                let Some(bv) = self.term(bound, nums)? else {
                    return Ok(ThreeValued::Unknown);
                };
                let Ok(bound_small) = u64::try_from(bv) else {
                    return Ok(ThreeValued::Unknown);
                };
                if bound_small > self.caps.bounded_enum {
                    return Ok(ThreeValued::Unknown);
                }
                let saved = nums.get(v).cloned();
                let mut acc = ThreeValued::True;
                for k in 0..bound_small {
                    nums.insert(*v, BigUint::from(k));
                    acc = acc.and(self.sat(body, nums, sets)?);
                    if acc == ThreeValued::False {
                        break;
                    }
                }
                restore(nums, *v, saved);
                Ok(acc)
            }
            Formula::ExistsLt(v, bound, body) => {
                let Some(bv) = self.term(bound, nums)? else {
                    return Ok(ThreeValued::Unknown);
                };
                let Ok(bound_small) = u64::try_from(bv) else {
                    return Ok(ThreeValued::Unknown);
                };
                if bound_small > self.caps.bounded_enum {
                    return Ok(ThreeValued::Unknown);
                }
                let saved = nums.get(v).cloned();
                let mut acc = ThreeValued::False;
                for k in 0..bound_small {
                    nums.insert(*v, BigUint::from(k));
                    acc = acc.or(self.sat(body, nums, sets)?);
                    if acc == ThreeValued::True {
                        break;
                    }
                }
                restore(nums, *v, saved);
                Ok(acc)
            }
            Formula::Forall(v, body) => {
                let saved = nums.get(v).cloned();
                let mut out = ThreeValued::Unknown;
                for k in 0..self.caps.quantifier {
                    nums.insert(*v, BigUint::from(k));
                    if self.sat(body, nums, sets)? == ThreeValued::False {
                        out = ThreeValued::False;
                        break;
                    }
                }
                restore(nums, *v, saved);
                Ok(out)
            }
            Formula::Exists(v, body) => {
                let saved = nums.get(v).cloned();
                let mut out = ThreeValued::Unknown;
                for k in 0..self.caps.quantifier {
                    nums.insert(*v, BigUint::from(k));
                    if self.sat(body, nums, sets)? == ThreeValued::True {
                        out = ThreeValued::True;
                        break;
                    }
                }
                restore(nums, *v, saved);
                Ok(out)
            }
            // second-order quantifiers range over the listed family — exact
            Formula::ForallSet(x, body) => {
                let saved = sets.get(x).copied();
                let mut acc = ThreeValued::True;
                for i in 0..self.model.len() {
                    sets.insert(*x, i);
                    acc = acc.and(self.sat(body, nums, sets)?);
                    if acc == ThreeValued::False {
                        break;
                    }
                }
                restore_set(sets, *x, saved);
                Ok(acc)
            }
            Formula::ExistsSet(x, body) => {
                let saved = sets.get(x).copied();
                let mut acc = ThreeValued::False;
                for i in 0..self.model.len() {
                    sets.insert(*x, i);
                    acc = acc.or(self.sat(body, nums, sets)?);
                    if acc == ThreeValued::True {
                        break;
                    }
                }
                restore_set(sets, *x, saved);
                Ok(acc)
            }
        }
    }
}

fn restore(nums: &mut BTreeMap<Var, BigUint>, v: Var, saved: Option<BigUint>) {
    match saved {
        Some(x) => {
            nums.insert(v, x);
        }
        None => {
            nums.remove(&v);
        }
    }
}

fn restore_set(sets: &mut BTreeMap<SetVar, usize>, v: SetVar, saved: Option<usize>) {
    match saved {
        Some(x) => {
            sets.insert(v, x);
        }
        None => {
            sets.remove(&v);
        }
    }
}

/// Tarskian satisfaction of a sentence of the extended language; exact on
/// bounded structure and the listed second-order family, capped on unbounded
/// first-order quantifiers.
pub fn satisfies(
    model: &CodedOmegaModel,
    sentence: &Formula,
    caps: &Caps,
) -> Result<ThreeValued, ModelError> {
    if !sentence.free_vars().is_empty() {
        return Err(ModelError::OpenSentence);
    }
    for sv in sentence.free_set_vars() {
        if sv.0 as usize >= model.len() {
            return Err(ModelError::UnknownSetConstant(sv.0));
        }
    }
    let ctx = SatCtx { model, caps: *caps };
    ctx.sat(sentence, &mut BTreeMap::new(), &mut BTreeMap::new())
}

/// A partial satisfaction table over a subformula-closed scope of sentences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatTable {
    entries: BTreeMap<Formula, ThreeValued>,
}

impl SatTable {
    /// Generates the table for the given sentences, closing the scope under
    /// subformula instances: quantified bodies contribute their numeral
    /// instances below the cap and their set-constant instances.
    pub fn generate(
        model: &CodedOmegaModel,
        sentences: &[Formula],
        caps: &Caps,
    ) -> Result<SatTable, ModelError> {
        let mut scope: Vec<Formula> = Vec::new();
        let mut stack: Vec<Formula> = sentences.to_vec();
        while let Some(f) = stack.pop() {
            if scope.contains(&f) {
                continue;
            }
            match &f {
                Formula::Not(g) => stack.push((**g).clone()),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    stack.push((**a).clone());
                    stack.push((**b).clone());
                }
                Formula::Forall(v, body) | Formula::Exists(v, body) => {
                    for n in 0..caps.quantifier.min(8) {
                        stack.push(body.substitute_numeral(*v, n));
                    }
                }
                Formula::ForallLt(v, bound, body) | Formula::ExistsLt(v, bound, body) => {
                    if let Ok(b) = bound.eval_closed(caps.term_bits) {
                        if let Ok(b) = u64::try_from(b) {
                            for n in 0..b.min(caps.quantifier) {
                                stack.push(body.substitute_numeral(*v, n));
                            }
                        }
                    }
                }
                Formula::ForallSet(x, body) | Formula::ExistsSet(x, body) => {
                    for i in 0..model.len() as u32 {
                        stack.push(body.substitute_set_var(*x, SetVar(i)));
                    }
                }
                _ => {}
            }
            scope.push(f);
        }
        let mut entries = BTreeMap::new();
        for f in scope {
            let v = satisfies(model, &f, caps)?;
            entries.insert(f, v);
        }
        Ok(SatTable { entries })
    }

    pub fn get(&self, f: &Formula) -> Option<ThreeValued> {
        self.entries.get(f).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Formula, ThreeValued)> {
        self.entries.iter().map(|(f, &v)| (f, v))
    }

    /// Entries on which two tables disagree while both are determinate.
    pub fn determinate_disagreements(&self, other: &SatTable) -> Vec<Formula> {
        self.entries
            .iter()
            .filter_map(|(f, &v)| {
                let w = other.get(f)?;
                if v.is_determinate() && w.is_determinate() && v != w {
                    Some(f.clone())
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn flip_entry(&mut self, f: &Formula) {
        if let Some(v) = self.entries.get_mut(f) {
            *v = v.negate();
        }
    }
}

/// Result of a Tarski-clause audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatAudit {
    pub first_violation: Option<(Formula, String)>,
    pub skipped: usize,
    pub checked: usize,
}

impl SatAudit {
    pub fn ok(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Verifies the recursive truth clauses on every determinate entry of the
/// table; entries whose subformula values are unknown are skipped but
/// counted.
pub fn check_sat_definition(
    model: &CodedOmegaModel,
    table: &SatTable,
    caps: &Caps,
) -> Result<SatAudit, ModelError> {
    let mut audit = SatAudit {
        first_violation: None,
        skipped: 0,
        checked: 0,
    };
    let mut fail = |f: &Formula, why: String, audit: &mut SatAudit| {
        if audit.first_violation.is_none() {
            audit.first_violation = Some((f.clone(), why));
        }
    };
    for (f, v) in table.iter() {
        if !v.is_determinate() {
            audit.skipped += 1;
            continue;
        }
        audit.checked += 1;
        match f {
            Formula::Not(g) => {
                if let Some(w) = table.get(g) {
                    if w.is_determinate() && w.negate() != v {
                        fail(f, "negation clause violated".to_string(), &mut audit);
                    }
                } else {
                    return Err(ModelError::ScopeNotClosed(format!("{g:?}")));
                }
            }
            Formula::And(a, b) => {
                match (table.get(a), table.get(b)) {
                    (Some(x), Some(y)) => {
                        if x.is_determinate() && y.is_determinate() && x.and(y) != v {
                            fail(f, "conjunction clause violated".to_string(), &mut audit);
                        }
                    }
                    _ => return Err(ModelError::ScopeNotClosed(format!("{f:?}"))),
                }
            }
            Formula::Or(a, b) => match (table.get(a), table.get(b)) {
                (Some(x), Some(y)) => {
                    if x.is_determinate() && y.is_determinate() && x.or(y) != v {
                        fail(f, "disjunction clause violated".to_string(), &mut audit);
                    }
                }
                _ => return Err(ModelError::ScopeNotClosed(format!("{f:?}"))),
            },
            Formula::Implies(a, b) => match (table.get(a), table.get(b)) {
                (Some(x), Some(y)) => {
                    if x.is_determinate() && y.is_determinate() && x.implies(y) != v {
                        fail(f, "implication clause violated".to_string(), &mut audit);
                    }
                }
                _ => return Err(ModelError::ScopeNotClosed(format!("{f:?}"))),
            },
            Formula::Forall(var, body) | Formula::Exists(var, body) => {
                let is_forall = matches!(f, Formula::Forall(_, _));
                for n in 0..caps.quantifier.min(8) {
                    let inst = body.substitute_numeral(*var, n);
                    let Some(w) = table.get(&inst) else {
                        return Err(ModelError::ScopeNotClosed(format!("{inst:?}")));
                    };
                    if !w.is_determinate() {
                        continue;
                    }
                    if is_forall && v == ThreeValued::True && w == ThreeValued::False {
                        fail(f, format!("universal clause violated at {n}"), &mut audit);
                    }
                    if !is_forall && v == ThreeValued::False && w == ThreeValued::True {
                        fail(f, format!("existential clause violated at {n}"), &mut audit);
                    }
                }
            }
            Formula::ForallSet(x, body) | Formula::ExistsSet(x, body) => {
                let is_forall = matches!(f, Formula::ForallSet(_, _));
                let mut all = ThreeValued::True;
                let mut any = ThreeValued::False;
                for i in 0..model.len() as u32 {
                    let inst = body.substitute_set_var(*x, SetVar(i));
                    let Some(w) = table.get(&inst) else {
                        return Err(ModelError::ScopeNotClosed(format!("{inst:?}")));
                    };
                    all = all.and(w);
                    any = any.or(w);
                }
                if is_forall && all.is_determinate() && all != v {
                    fail(f, "set-universal clause violated".to_string(), &mut audit);
                }
                if !is_forall && any.is_determinate() && any != v {
                    fail(f, "set-existential clause violated".to_string(), &mut audit);
                }
            }
            _ => {
                // atomic: recompute directly
                let direct = satisfies(model, f, caps)?;
                if direct.is_determinate() && direct != v {
                    fail(f, "atomic clause violated".to_string(), &mut audit);
                }
            }
        }
    }
    Ok(audit)
}

/// Result of an ω-model soundness audit over a table or certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoundnessReport {
    pub violations: Vec<(u64, Formula)>,
    pub unknown: usize,
    pub satisfied: usize,
}

impl SoundnessReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Audits every entry of a saturated table against the model: a determinate
/// false entry is a soundness violation. The model's M₀ must agree with the
/// table's oracle descriptor.
pub fn soundness_audit(
    model: &CodedOmegaModel,
    table: &IpcTable,
    caps: &Caps,
) -> Result<SoundnessReport, ModelError> {
    match &table.theory.oracle {
        OracleSet::Plain(d) => {
            if !d.eq_semantic(model.oracle()) {
                return Err(ModelError::OracleMismatch);
            }
        }
        _ => return Err(ModelError::CompositeOracle),
    }
    let mut report = SoundnessReport {
        violations: vec![],
        unknown: 0,
        satisfied: 0,
    };
    for (level, _, formula) in table.entries() {
        let mut sentence = formula.close_universally();
        for sv in sentence.free_set_vars().into_iter().rev() {
            sentence = Formula::forall_set(sv, sentence);
        }
        match satisfies(model, &sentence, caps)? {
            ThreeValued::False => report.violations.push((level, formula.clone())),
            ThreeValued::True => report.satisfied += 1,
            ThreeValued::Unknown => report.unknown += 1,
        }
    }
    Ok(report)
}

/// Audits a single certificate conclusion.
pub fn soundness_audit_conclusion(
    model: &CodedOmegaModel,
    conclusion: &Formula,
    caps: &Caps,
) -> Result<ThreeValued, ModelError> {
    let mut sentence = conclusion.close_universally();
    for sv in sentence.free_set_vars().into_iter().rev() {
        sentence = Formula::forall_set(sv, sentence);
    }
    satisfies(model, &sentence, caps)
}

/// The bounded jump construction: M₀ = X and each definition carves the next
/// set out of the previous ones, as an explicit finite-prefix descriptor up
/// to the cutoff. An approximation, not the minimal model.
pub fn bounded_jump_model(
    x: &SetDescriptor,
    cutoff: u64,
    defs: &[(Formula, Var)],
    caps: &Caps,
) -> Result<CodedOmegaModel, ModelError> {
    let mut sets = vec![x.clone()];
    for (index, (def, var)) in defs.iter().enumerate() {
        let partial = CodedOmegaModel::new(sets.clone());
        let mut members = Vec::new();
        for n in 0..cutoff {
            let inst = def.substitute_numeral(*var, n);
            match satisfies(&partial, &inst, caps)? {
                ThreeValued::True => members.push(n),
                ThreeValued::False => {}
                ThreeValued::Unknown => {
                    return Err(ModelError::IndeterminateDefinition { index, element: n })
                }
            }
        }
        sets.push(SetDescriptor::from_finite(&members));
    }
    Ok(CodedOmegaModel::new(sets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::q_axioms;

    fn caps() -> Caps {
        Caps::default()
    }

    fn model() -> CodedOmegaModel {
        CodedOmegaModel::new(vec![
            SetDescriptor::singleton(2),
            SetDescriptor::evens(),
        ])
    }

    #[test]
    fn val_evaluates_closed_terms() {
        let t = Term::add(Term::numeral(3), Term::One);
        assert_eq!(val(&t, &caps()).unwrap(), BigUint::from(4u32));
        let p = Term::pair(Term::numeral(1), Term::numeral(2));
        assert_eq!(val(&p, &caps()).unwrap(), BigUint::from(8u32));
        assert!(matches!(
            val(&Term::var(0), &caps()),
            Err(ModelError::OpenSentence)
        ));
    }

    #[test]
    fn membership_clause_reads_the_listed_sets() {
        let m = model();
        // c_4 ∈ C_1 with M₁ the evens
        let f = Formula::In(Term::numeral(4), SetVar(1));
        assert_eq!(satisfies(&m, &f, &caps()).unwrap(), ThreeValued::True);
        let g = Formula::In(Term::numeral(3), SetVar(1));
        assert_eq!(satisfies(&m, &g, &caps()).unwrap(), ThreeValued::False);
        // 𝔒 is M₀
        let o = Formula::Oracle(Term::numeral(2));
        assert_eq!(satisfies(&m, &o, &caps()).unwrap(), ThreeValued::True);
        // unlisted constants are errors
        let bad = Formula::In(Term::Zero, SetVar(7));
        assert!(matches!(
            satisfies(&m, &bad, &caps()),
            Err(ModelError::UnknownSetConstant(7))
        ));
    }

    #[test]
    fn negation_flips_determinate_values() {
        let m = model();
        let f = Formula::Oracle(Term::numeral(2));
        let nf = Formula::not(f.clone());
        assert_eq!(satisfies(&m, &nf, &caps()).unwrap(), ThreeValued::False);
        // unknown propagates
        let u = Formula::exists(Var(0), Formula::Eq(Term::var(0), Term::numeral(999)));
        assert_eq!(satisfies(&m, &u, &caps()).unwrap(), ThreeValued::Unknown);
        assert_eq!(
            satisfies(&m, &Formula::not(u), &caps()).unwrap(),
            ThreeValued::Unknown
        );
    }

    #[test]
    fn q_axioms_are_never_refuted() {
        let m = model();
        for ax in q_axioms() {
            let v = satisfies(&m, &ax, &caps()).unwrap();
            assert_ne!(v, ThreeValued::False, "refuted axiom {ax:?}");
        }
    }

    #[test]
    fn second_order_quantifier_ranges_over_the_family() {
        let m = model();
        // ∃X (2 ∈ X): true, witnessed by M₀ (or M₁)
        let f = Formula::exists_set(SetVar(2), Formula::In(Term::numeral(2), SetVar(2)));
        assert_eq!(satisfies(&m, &f, &caps()).unwrap(), ThreeValued::True);
        // ∀X (3 ∈ X): false
        let g = Formula::forall_set(SetVar(2), Formula::In(Term::numeral(3), SetVar(2)));
        assert_eq!(satisfies(&m, &g, &caps()).unwrap(), ThreeValued::False);
    }

    #[test]
    fn generated_tables_pass_the_clause_audit() {
        let m = model();
        let sentences = vec![
            Formula::and(
                Formula::Oracle(Term::numeral(2)),
                Formula::not(Formula::Oracle(Term::numeral(3))),
            ),
            Formula::exists_set(SetVar(2), Formula::In(Term::numeral(2), SetVar(2))),
            Formula::forall_lt(
                Var(0),
                Term::numeral(4),
                Formula::Lt(Term::var(0), Term::numeral(4)),
            ),
            Formula::exists(Var(0), Formula::Eq(Term::var(0), Term::numeral(3))),
        ];
        let table = SatTable::generate(&m, &sentences, &caps()).unwrap();
        let audit = check_sat_definition(&m, &table, &caps()).unwrap();
        assert!(audit.ok(), "{:?}", audit.first_violation);
        assert!(audit.checked > 0);
    }

    #[test]
    fn clause_audit_catches_a_flipped_negation() {
        let m = model();
        let f = Formula::not(Formula::Oracle(Term::numeral(2)));
        let mut table = SatTable::generate(&m, &[f.clone()], &caps()).unwrap();
        table.flip_entry(&f);
        let audit = check_sat_definition(&m, &table, &caps()).unwrap();
        assert!(!audit.ok());
    }

    #[test]
    fn two_generated_tables_agree_where_determinate() {
        let m = model();
        let sentences = vec![
            Formula::exists(Var(0), Formula::Oracle(Term::var(0))),
            Formula::forall(Var(0), Formula::Lt(Term::var(0), Term::numeral(3))),
        ];
        let t1 = SatTable::generate(&m, &sentences, &Caps::with_quantifier(8)).unwrap();
        let t2 = SatTable::generate(&m, &sentences, &Caps::with_quantifier(32)).unwrap();
        assert!(t1.determinate_disagreements(&t2).is_empty());
    }

    #[test]
    fn jump_model_from_a_definition() {
        // M₁ := {x : x ∈ M₀ ∨ x+1 ∈ M₀} over X = {2}
        let def = Formula::or(
            Formula::Oracle(Term::var(0)),
            Formula::Oracle(Term::add(Term::var(0), Term::One)),
        );
        let m = bounded_jump_model(
            &SetDescriptor::singleton(2),
            8,
            &[(def, Var(0))],
            &caps(),
        )
        .unwrap();
        assert_eq!(m.len(), 2);
        assert!(m.set(1).unwrap().contains_u64(1));
        assert!(m.set(1).unwrap().contains_u64(2));
        assert!(!m.set(1).unwrap().contains_u64(3));
        // empty definition list keeps only M₀
        let m0 = bounded_jump_model(&SetDescriptor::singleton(2), 8, &[], &caps()).unwrap();
        assert_eq!(m0.len(), 1);
    }

    #[test]
    fn jump_model_refuses_indeterminate_definitions() {
        // an unbounded universal with only true instances never confirms
        let def = Formula::forall(
            Var(1),
            Formula::Lt(
                Term::var(0),
                Term::add(Term::add(Term::var(0), Term::var(1)), Term::One),
            ),
        );
        assert!(matches!(
            bounded_jump_model(&SetDescriptor::empty(), 4, &[(def, Var(0))], &caps()),
            Err(ModelError::IndeterminateDefinition { .. })
        ));
    }

    #[test]
    fn soundness_audit_finds_no_false_entries_in_honest_tables() {
        use crate::descriptor::OracleSet;
        use crate::ipc::{saturate_simple, UniverseSpec};
        use crate::ordinal::WellOrder;
        use crate::theory::{OracleTheory, TheorySpec};
        let theory = OracleTheory::new(
            TheorySpec::eca0(),
            OracleSet::Plain(SetDescriptor::singleton(2)),
        );
        let order = WellOrder::finite(2);
        let table =
            saturate_simple(&theory, &order, &UniverseSpec::bounded(4096), 4, 100_000).unwrap();
        let m = CodedOmegaModel::new(vec![SetDescriptor::singleton(2)]);
        let report = soundness_audit(&m, &table, &caps()).unwrap();
        assert!(report.ok(), "violations: {:?}", report.violations);

        // a mismatched oracle is a precondition error
        let wrong = CodedOmegaModel::new(vec![SetDescriptor::evens()]);
        assert!(matches!(
            soundness_audit(&wrong, &table, &caps()),
            Err(ModelError::OracleMismatch)
        ));
    }

    #[test]
    fn soundness_audit_flags_seeded_falsum() {
        use crate::descriptor::OracleSet;
        use crate::ipc::{saturate_simple, UniverseSpec};
        use crate::ordinal::WellOrder;
        use crate::theory::{OracleTheory, TheorySpec};
        let theory = OracleTheory::new(
            TheorySpec::eca0(),
            OracleSet::Plain(SetDescriptor::empty()),
        )
        .with_extra(vec![Formula::falsum()]);
        let order = WellOrder::finite(1);
        let table =
            saturate_simple(&theory, &order, &UniverseSpec::bounded(4096), 4, 100_000).unwrap();
        let m = CodedOmegaModel::new(vec![SetDescriptor::empty()]);
        let report = soundness_audit(&m, &table, &caps()).unwrap();
        assert!(!report.ok());
        assert!(report
            .violations
            .iter()
            .any(|(_, f)| f == &Formula::falsum()));
    }

    #[test]
    fn finite_set_induction_check() {
        let m = model();
        // φ(u, X) := 0 < u+1 — trivially inductive
        let phi = |u: Term| Formula::Lt(Term::Zero, Term::add(u, Term::One));
        let base = phi(Term::Zero);
        assert_eq!(satisfies(&m, &base, &caps()).unwrap(), ThreeValued::True);
        for n in 0..8u64 {
            let step = Formula::implies(phi(Term::numeral(n)), phi(Term::numeral(n + 1)));
            assert_eq!(satisfies(&m, &step, &caps()).unwrap(), ThreeValued::True);
            assert_eq!(
                satisfies(&m, &phi(Term::numeral(n)), &caps()).unwrap(),
                ThreeValued::True
            );
        }
    }
}

//! Finitary Hilbert-style proofs and their line checker.
//!
//! The calculus is classical two-sorted predicate logic with equality:
//! propositional tautology instances as axioms, quantifier axioms for both
//! sorts, equality and congruence axioms, defining axioms for the bounded
//! quantifiers, and the rules modus ponens and generalization. Nonlogical
//! axioms come from an oracle theory's recognizer.


use crate::error::ProofError;
use crate::formula::Formula;
use crate::term::{SetVar, Term, Var};
use crate::theory::OracleTheory;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// Axiom of the ambient oracle theory.
    TheoryAxiom,
    /// Instance of a propositional tautology.
    Taut,
    /// Equality axiom: reflexivity, symmetry, transitivity, or a congruence.
    EqAxiom,
    /// Defining axiom for a bounded quantifier.
    BoundedDef,
    /// ∀x φ → φ[x/t]
    UnivInst,
    /// ∀x (φ → ψ) → (φ → ∀x ψ), x not free in φ
    UnivDistrib,
    /// φ[x/t] → ∃x φ
    ExistsIntro,
    /// ∀x (φ → ψ) → (∃x φ → ψ), x not free in ψ
    ExistsElim,
    /// ∀X φ → φ[X/Y]
    SetUnivInst,
    /// ∀X (φ → ψ) → (φ → ∀X ψ), X not free in φ
    SetUnivDistrib,
    /// φ[X/Y] → ∃X φ
    SetExistsIntro,
    /// ∀X (φ → ψ) → (∃X φ → ψ), X not free in ψ
    SetExistsElim,
    /// From lines `i: φ → ψ` and `j: φ` conclude ψ.
    Mp(usize, usize),
    /// From line `i: φ` conclude ∀x φ.
    Gen(usize, Var),
    GenSet(usize, SetVar),
    /// Hypothesis marker used transiently by proof builders; never valid in a
    /// checked proof.
    Hyp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FinitaryProof {
    pub lines: Vec<ProofLine>,
}

impl FinitaryProof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

/// Checks every line and the conclusion. The first failure is reported with
/// its line number (0-based).
pub fn check_proof(
    theory: &OracleTheory,
    proof: &FinitaryProof,
    conclusion: &Formula,
) -> Result<(), ProofError> {
    if proof.lines.is_empty() {
        return Err(ProofError::Empty);
    }
    for (idx, line) in proof.lines.iter().enumerate() {
        check_line(theory, &proof.lines, idx, line)?;
    }
    if proof.conclusion() != Some(conclusion) {
        return Err(ProofError::ConclusionMismatch);
    }
    Ok(())
}

fn bad(line: usize, reason: impl Into<String>) -> ProofError {
    ProofError::BadJustification {
        line,
        reason: reason.into(),
    }
}

fn check_line(
    theory: &OracleTheory,
    lines: &[ProofLine],
    idx: usize,
    line: &ProofLine,
) -> Result<(), ProofError> {
    let f = &line.formula;
    match &line.justification {
        Justification::Hyp => Err(bad(idx, "undischarged hypothesis")),
        Justification::TheoryAxiom => {
            if theory.is_axiom(f) {
                Ok(())
            } else {
                Err(bad(idx, "not an axiom of the theory"))
            }
        }
        Justification::Taut => {
            if is_tautology(f).map_err(|e| bad(idx, e))? {
                Ok(())
            } else {
                Err(bad(idx, "not a propositional tautology"))
            }
        }
        Justification::EqAxiom => {
            if is_equality_axiom(f) {
                Ok(())
            } else {
                Err(bad(idx, "not an equality axiom"))
            }
        }
        Justification::BoundedDef => {
            if is_bounded_def_axiom(f) {
                Ok(())
            } else {
                Err(bad(idx, "not a bounded-quantifier defining axiom"))
            }
        }
        Justification::UnivInst => {
            if is_univ_inst(f) {
                Ok(())
            } else {
                Err(bad(idx, "not a universal instantiation"))
            }
        }
        Justification::UnivDistrib => {
            if is_univ_distrib(f) {
                Ok(())
            } else {
                Err(bad(idx, "not a universal distribution axiom"))
            }
        }
        Justification::ExistsIntro => {
            if is_exists_intro(f) {
                Ok(())
            } else {
                Err(bad(idx, "not an existential introduction"))
            }
        }
        Justification::ExistsElim => {
            if is_exists_elim(f) {
                Ok(())
            } else {
                Err(bad(idx, "not an existential elimination axiom"))
            }
        }
        Justification::SetUnivInst => {
            if is_set_univ_inst(f) {
                Ok(())
            } else {
                Err(bad(idx, "not a set-universal instantiation"))
            }
        }
        Justification::SetUnivDistrib => {
            if is_set_univ_distrib(f) {
                Ok(())
            } else {
                Err(bad(idx, "not a set-universal distribution axiom"))
            }
        }
        Justification::SetExistsIntro => {
            if is_set_exists_intro(f) {
                Ok(())
            } else {
                Err(bad(idx, "not a set-existential introduction"))
            }
        }
        Justification::SetExistsElim => {
            if is_set_exists_elim(f) {
                Ok(())
            } else {
                Err(bad(idx, "not a set-existential elimination axiom"))
            }
        }
        Justification::Mp(i, j) => {
            let (pi, pj) = (*i, *j);
            for r in [pi, pj] {
                if r >= idx {
                    return Err(ProofError::DanglingReference {
                        line: idx,
                        referenced: r,
                    });
                }
            }
            let Formula::Implies(a, b) = &lines[pi].formula else {
                return Err(bad(idx, format!("line {pi} is not an implication")));
            };
            if lines[pj].formula != **a {
                return Err(bad(idx, format!("line {pj} does not match the antecedent")));
            }
            if **b != *f {
                return Err(bad(idx, "conclusion differs from the consequent"));
            }
            Ok(())
        }
        Justification::Gen(i, v) => {
            if *i >= idx {
                return Err(ProofError::DanglingReference {
                    line: idx,
                    referenced: *i,
                });
            }
            match f {
                Formula::Forall(w, body) if w == v && **body == lines[*i].formula => Ok(()),
                _ => Err(bad(idx, "not a generalization of the cited line")),
            }
        }
        Justification::GenSet(i, v) => {
            if *i >= idx {
                return Err(ProofError::DanglingReference {
                    line: idx,
                    referenced: *i,
                });
            }
            match f {
                Formula::ForallSet(w, body) if w == v && **body == lines[*i].formula => Ok(()),
                _ => Err(bad(idx, "not a set generalization of the cited line")),
            }
        }
    }
}

const TAUT_ATOM_LIMIT: usize = 22;

enum CompiledProp {
    Atom(usize),
    Not(Box<CompiledProp>),
    And(Box<CompiledProp>, Box<CompiledProp>),
    Or(Box<CompiledProp>, Box<CompiledProp>),
    Implies(Box<CompiledProp>, Box<CompiledProp>),
}

impl CompiledProp {
    fn eval(&self, mask: u32) -> bool {
        match self {
            CompiledProp::Atom(i) => mask & (1 << i) != 0,
            CompiledProp::Not(g) => !g.eval(mask),
            CompiledProp::And(a, b) => a.eval(mask) && b.eval(mask),
            CompiledProp::Or(a, b) => a.eval(mask) || b.eval(mask),
            CompiledProp::Implies(a, b) => !a.eval(mask) || b.eval(mask),
        }
    }
}

fn compile_prop<'a>(f: &'a Formula, atoms: &mut Vec<&'a Formula>) -> CompiledProp {
    match f {
        Formula::Not(g) => CompiledProp::Not(Box::new(compile_prop(g, atoms))),
        Formula::And(a, b) => CompiledProp::And(
            Box::new(compile_prop(a, atoms)),
            Box::new(compile_prop(b, atoms)),
        ),
        Formula::Or(a, b) => CompiledProp::Or(
            Box::new(compile_prop(a, atoms)),
            Box::new(compile_prop(b, atoms)),
        ),
        Formula::Implies(a, b) => CompiledProp::Implies(
            Box::new(compile_prop(a, atoms)),
            Box::new(compile_prop(b, atoms)),
        ),
        _ => {
            let idx = match atoms.iter().position(|a| *a == f) {
                Some(i) => i,
                None => {
                    atoms.push(f);
                    atoms.len() - 1
                }
            };
            CompiledProp::Atom(idx)
        }
    }
}

/// Truth-table check over the propositional skeleton. Atoms are the maximal
/// non-connective subformulas.
pub fn is_tautology(f: &Formula) -> Result<bool, String> {
    let mut atoms: Vec<&Formula> = Vec::new();
    let compiled = compile_prop(f, &mut atoms);
    if atoms.len() > TAUT_ATOM_LIMIT {
        return Err(format!(
            "tautology check limited to {TAUT_ATOM_LIMIT} atoms, found {}",
            atoms.len()
        ));
    }
    for mask in 0u32..(1 << atoms.len()) {
        if !compiled.eval(mask) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Recognizes instances of any logical axiom schema of the calculus; used to
/// seed deductive closures.
pub fn is_logical_axiom(f: &Formula) -> bool {
    is_tautology(f).unwrap_or(false)
        || is_equality_axiom(f)
        || is_bounded_def_axiom(f)
        || is_univ_inst(f)
        || is_univ_distrib(f)
        || is_exists_intro(f)
        || is_exists_elim(f)
        || is_set_univ_inst(f)
        || is_set_univ_distrib(f)
        || is_set_exists_intro(f)
        || is_set_exists_elim(f)
}

fn is_equality_axiom(f: &Formula) -> bool {
    // t = t
    if let Formula::Eq(a, b) = f {
        if a == b {
            return true;
        }
    }
    let Formula::Implies(p, q) = f else {
        return false;
    };
    let Formula::Eq(s, t) = &**p else {
        return false;
    };
    // symmetry: (s=t) → (t=s)
    if let Formula::Eq(a, b) = &**q {
        if a == t && b == s {
            return true;
        }
    }
    // transitivity: (r=s) → ((s=t) → (r=t))
    if let Formula::Implies(q1, q2) = &**q {
        if let (Formula::Eq(s2, t2), Formula::Eq(r2, t3)) = (&**q1, &**q2) {
            // p: r=s, q1: s=t, q2: r=t
            if s2 == t && r2 == s && t3 == t2 {
                return true;
            }
        }
        // predicate congruences: (s=t) → (A[s] → A[t]) for atoms
        if congruent_atom(s, t, q1, q2) {
            return true;
        }
    }
    // function congruences: (s=t) → (c[s] = c[t]) one-hole contexts
    if let Formula::Eq(l, r) = &**q {
        if congruent_term(s, t, l, r) {
            return true;
        }
    }
    false
}

/// One-step congruence: `l` and `r` are the same operator and each argument
/// position either matches exactly or holds `s` on the left and `t` on the
/// right.
fn congruent_term(s: &Term, t: &Term, l: &Term, r: &Term) -> bool {
    let arg_pairs: Option<Vec<(&Term, &Term)>> = match (l, r) {
        (Term::Add(a1, b1), Term::Add(a2, b2))
        | (Term::Mul(a1, b1), Term::Mul(a2, b2))
        | (Term::Exp(a1, b1), Term::Exp(a2, b2))
        | (Term::Pair(a1, b1), Term::Pair(a2, b2)) => {
            Some(vec![(&**a1, &**a2), (&**b1, &**b2)])
        }
        (Term::Proj(s1, a1), Term::Proj(s2, a2)) if s1 == s2 => Some(vec![(&**a1, &**a2)]),
        _ => None,
    };
    let Some(pairs) = arg_pairs else { return false };
    pairs.into_iter().all(|(a, b)| a == b || (a == s && b == t))
}

fn congruent_atom(s: &Term, t: &Term, p: &Formula, q: &Formula) -> bool {
    match (p, q) {
        (Formula::Eq(a1, b1), Formula::Eq(a2, b2))
        | (Formula::Lt(a1, b1), Formula::Lt(a2, b2)) => {
            (a1 == s && a2 == t && b1 == b2) || (b1 == s && b2 == t && a1 == a2)
        }
        (Formula::In(a1, x1), Formula::In(a2, x2)) => x1 == x2 && a1 == s && a2 == t,
        (Formula::Oracle(a1), Formula::Oracle(a2)) => a1 == s && a2 == t,
        _ => false,
    }
}

fn is_bounded_def_axiom(f: &Formula) -> bool {
    let Formula::Implies(p, q) = f else {
        return false;
    };
    // (∀x<t φ) ↔-halves ∀x(x<t → φ)
    fn unbounded_forall_form(v: Var, bound: &Term, body: &Formula, g: &Formula) -> bool {
        if bound.free_vars().contains(&v) {
            return false;
        }
        matches!(g, Formula::Forall(w, inner) if *w == v && matches!(&**inner, Formula::Implies(a, b)
            if matches!(&**a, Formula::Lt(Term::Var(x), bt) if *x == v && bt == bound) && **b == *body))
    }
    fn unbounded_exists_form(v: Var, bound: &Term, body: &Formula, g: &Formula) -> bool {
        if bound.free_vars().contains(&v) {
            return false;
        }
        matches!(g, Formula::Exists(w, inner) if *w == v && matches!(&**inner, Formula::And(a, b)
            if matches!(&**a, Formula::Lt(Term::Var(x), bt) if *x == v && bt == bound) && **b == *body))
    }
    match (&**p, &**q) {
        (Formula::ForallLt(v, bound, body), g) => unbounded_forall_form(*v, bound, body, g),
        (g, Formula::ForallLt(v, bound, body)) => unbounded_forall_form(*v, bound, body, g),
        (Formula::ExistsLt(v, bound, body), g) => unbounded_exists_form(*v, bound, body, g),
        (g, Formula::ExistsLt(v, bound, body)) => unbounded_exists_form(*v, bound, body, g),
        _ => false,
    }
}

/// Tries to read `instance` as `pattern[v/t]` for a single term `t`, treating
/// bound occurrences of `v` as rigid.
pub fn infer_term_subst(pattern: &Formula, instance: &Formula, v: Var) -> Option<Option<Term>> {
    let mut found: Option<Term> = None;
    if match_formula(pattern, instance, v, &mut found) {
        Some(found)
    } else {
        None
    }
}

fn match_formula(p: &Formula, i: &Formula, v: Var, found: &mut Option<Term>) -> bool {
    match (p, i) {
        (Formula::Eq(a1, b1), Formula::Eq(a2, b2))
        | (Formula::Lt(a1, b1), Formula::Lt(a2, b2)) => {
            match_term(a1, a2, v, found) && match_term(b1, b2, v, found)
        }
        (Formula::In(t1, x1), Formula::In(t2, x2)) => x1 == x2 && match_term(t1, t2, v, found),
        (Formula::Oracle(t1), Formula::Oracle(t2)) => match_term(t1, t2, v, found),
        (Formula::Not(a), Formula::Not(b)) => match_formula(a, b, v, found),
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => {
            match_formula(a1, a2, v, found) && match_formula(b1, b2, v, found)
        }
        (Formula::ForallLt(v1, t1, b1), Formula::ForallLt(v2, t2, b2))
        | (Formula::ExistsLt(v1, t1, b1), Formula::ExistsLt(v2, t2, b2)) => {
            if v1 != v2 {
                return false;
            }
            if !match_term(t1, t2, v, found) {
                return false;
            }
            if *v1 == v {
                b1 == b2
            } else {
                match_formula(b1, b2, v, found)
            }
        }
        (Formula::Forall(v1, b1), Formula::Forall(v2, b2))
        | (Formula::Exists(v1, b1), Formula::Exists(v2, b2)) => {
            if v1 != v2 {
                return false;
            }
            if *v1 == v {
                b1 == b2
            } else {
                match_formula(b1, b2, v, found)
            }
        }
        (Formula::ForallSet(x1, b1), Formula::ForallSet(x2, b2))
        | (Formula::ExistsSet(x1, b1), Formula::ExistsSet(x2, b2)) => {
            x1 == x2 && match_formula(b1, b2, v, found)
        }
        _ => false,
    }
}

fn match_term(p: &Term, i: &Term, v: Var, found: &mut Option<Term>) -> bool {
    match p {
        Term::Var(w) if *w == v => match found {
            Some(t) => t == i,
            None => {
                *found = Some(i.clone());
                true
            }
        },
        _ => match (p, i) {
            (Term::Zero, Term::Zero) | (Term::One, Term::One) => true,
            (Term::Var(a), Term::Var(b)) => a == b,
            (Term::Add(a1, b1), Term::Add(a2, b2))
            | (Term::Mul(a1, b1), Term::Mul(a2, b2))
            | (Term::Exp(a1, b1), Term::Exp(a2, b2))
            | (Term::Pair(a1, b1), Term::Pair(a2, b2)) => {
                match_term(a1, a2, v, found) && match_term(b1, b2, v, found)
            }
            (Term::Proj(s1, a1), Term::Proj(s2, a2)) => s1 == s2 && match_term(a1, a2, v, found),
            _ => false,
        },
    }
}

fn is_univ_inst(f: &Formula) -> bool {
    let Formula::Implies(p, q) = f else {
        return false;
    };
    let Formula::Forall(v, body) = &**p else {
        return false;
    };
    match infer_term_subst(body, q, *v) {
        Some(Some(t)) => body.free_for(*v, &t),
        Some(None) => true,
        None => false,
    }
}

fn is_exists_intro(f: &Formula) -> bool {
    let Formula::Implies(p, q) = f else {
        return false;
    };
    let Formula::Exists(v, body) = &**q else {
        return false;
    };
    match infer_term_subst(body, p, *v) {
        Some(Some(t)) => body.free_for(*v, &t),
        Some(None) => true,
        None => false,
    }
}

fn is_univ_distrib(f: &Formula) -> bool {
    let Formula::Implies(p, q) = f else {
        return false;
    };
    let Formula::Forall(v, pq) = &**p else {
        return false;
    };
    let Formula::Implies(a, b) = &**pq else {
        return false;
    };
    let Formula::Implies(a2, q2) = &**q else {
        return false;
    };
    let Formula::Forall(v2, b2) = &**q2 else {
        return false;
    };
    v == v2 && a == a2 && b == b2 && !a.free_vars().contains(v)
}

fn is_exists_elim(f: &Formula) -> bool {
    let Formula::Implies(p, q) = f else {
        return false;
    };
    let Formula::Forall(v, pq) = &**p else {
        return false;
    };
    let Formula::Implies(a, b) = &**pq else {
        return false;
    };
    let Formula::Implies(e, b2) = &**q else {
        return false;
    };
    let Formula::Exists(v2, a2) = &**e else {
        return false;
    };
    v == v2 && a == a2 && b == b2 && !b.free_vars().contains(v)
}

fn is_set_univ_inst(f: &Formula) -> bool {
    let Formula::Implies(p, q) = f else {
        return false;
    };
    let Formula::ForallSet(x, body) = &**p else {
        return false;
    };
    // instance by a set variable Y (possibly X itself)
    if **body == **q {
        return true;
    }
    // find Y: compare body[X/Y] with q for each candidate Y occurring in q
    let mut candidates = q.free_set_vars();
    candidates.extend(body.free_set_vars());
    candidates
        .into_iter()
        .any(|y| body.substitute_set_var(*x, y) == **q)
}

fn is_set_exists_intro(f: &Formula) -> bool {
    let Formula::Implies(p, q) = f else {
        return false;
    };
    let Formula::ExistsSet(x, body) = &**q else {
        return false;
    };
    if **body == **p {
        return true;
    }
    let mut candidates = p.free_set_vars();
    candidates.extend(body.free_set_vars());
    candidates
        .into_iter()
        .any(|y| body.substitute_set_var(*x, y) == **p)
}

fn is_set_univ_distrib(f: &Formula) -> bool {
    let Formula::Implies(p, q) = f else {
        return false;
    };
    let Formula::ForallSet(x, pq) = &**p else {
        return false;
    };
    let Formula::Implies(a, b) = &**pq else {
        return false;
    };
    let Formula::Implies(a2, q2) = &**q else {
        return false;
    };
    let Formula::ForallSet(x2, b2) = &**q2 else {
        return false;
    };
    x == x2 && a == a2 && b == b2 && !a.free_set_vars().contains(x)
}

fn is_set_exists_elim(f: &Formula) -> bool {
    let Formula::Implies(p, q) = f else {
        return false;
    };
    let Formula::ForallSet(x, pq) = &**p else {
        return false;
    };
    let Formula::Implies(a, b) = &**pq else {
        return false;
    };
    let Formula::Implies(e, b2) = &**q else {
        return false;
    };
    let Formula::ExistsSet(x2, a2) = &**e else {
        return false;
    };
    x == x2 && a == a2 && b == b2 && !b.free_set_vars().contains(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::{OracleSet, SetDescriptor};
    use crate::theory::TheorySpec;

    fn theory() -> OracleTheory {
        OracleTheory::new(
            TheorySpec::eca0(),
            OracleSet::Plain(SetDescriptor::singleton(2)),
        )
    }

    fn line(f: Formula, j: Justification) -> ProofLine {
        ProofLine {
            formula: f,
            justification: j,
        }
    }

    #[test]
    fn one_line_axiom_proof() {
        let phi = Formula::Oracle(Term::numeral(2));
        let proof = FinitaryProof {
            lines: vec![line(phi.clone(), Justification::TheoryAxiom)],
        };
        assert!(check_proof(&theory(), &proof, &phi).is_ok());
    }

    #[test]
    fn modus_ponens_chains() {
        let a = Formula::Oracle(Term::numeral(2));
        let b = Formula::Eq(Term::Zero, Term::Zero);
        let imp = Formula::implies(a.clone(), Formula::implies(b.clone(), a.clone()));
        let proof = FinitaryProof {
            lines: vec![
                line(a.clone(), Justification::TheoryAxiom),
                line(imp, Justification::Taut),
                line(
                    Formula::implies(b.clone(), a.clone()),
                    Justification::Mp(1, 0),
                ),
            ],
        };
        let goal = Formula::implies(b, a);
        assert!(check_proof(&theory(), &proof, &goal).is_ok());
    }

    #[test]
    fn forward_references_are_dangling() {
        let a = Formula::Oracle(Term::numeral(2));
        let proof = FinitaryProof {
            lines: vec![
                line(a.clone(), Justification::Mp(1, 2)),
                line(a.clone(), Justification::TheoryAxiom),
            ],
        };
        assert!(matches!(
            check_proof(&theory(), &proof, &a),
            Err(ProofError::DanglingReference { line: 0, .. })
        ));
    }

    #[test]
    fn tautology_instances() {
        let a = Formula::Oracle(Term::var(0));
        let b = Formula::Eq(Term::var(0), Term::Zero);
        assert!(is_tautology(&Formula::implies(
            a.clone(),
            Formula::implies(b.clone(), a.clone())
        ))
        .unwrap());
        assert!(is_tautology(&Formula::or(a.clone(), Formula::not(a.clone()))).unwrap());
        assert!(!is_tautology(&Formula::implies(a.clone(), b.clone())).unwrap());
    }

    #[test]
    fn univ_inst_matching() {
        // ∀x (x = x) → (3 = 3)
        let body = Formula::Eq(Term::var(0), Term::var(0));
        let f = Formula::implies(
            Formula::forall(Var(0), body.clone()),
            Formula::Eq(Term::numeral(3), Term::numeral(3)),
        );
        assert!(is_univ_inst(&f));
        // mismatched instance
        let g = Formula::implies(
            Formula::forall(Var(0), body),
            Formula::Eq(Term::numeral(3), Term::numeral(4)),
        );
        assert!(!is_univ_inst(&g));
    }

    #[test]
    fn generalization_checks_the_cited_line() {
        let body = Formula::Eq(Term::var(0), Term::var(0));
        let proof = FinitaryProof {
            lines: vec![
                line(body.clone(), Justification::EqAxiom),
                line(
                    Formula::forall(Var(0), body.clone()),
                    Justification::Gen(0, Var(0)),
                ),
            ],
        };
        let goal = Formula::forall(Var(0), body);
        assert!(check_proof(&theory(), &proof, &goal).is_ok());
    }

    #[test]
    fn congruence_axioms() {
        let s = Term::var(0);
        let t = Term::numeral(2);
        // (x=2) → (x+1 = 2+1)
        let f = Formula::implies(
            Formula::Eq(s.clone(), t.clone()),
            Formula::Eq(
                Term::add(s.clone(), Term::One),
                Term::add(t.clone(), Term::One),
            ),
        );
        assert!(is_equality_axiom(&f));
        // (x=2) → (𝔒(x) → 𝔒(2))
        let g = Formula::implies(
            Formula::Eq(s.clone(), t.clone()),
            Formula::implies(Formula::Oracle(s), Formula::Oracle(t)),
        );
        assert!(is_equality_axiom(&g));
    }
}

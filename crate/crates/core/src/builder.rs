//! Incremental construction of finitary proofs.
//!
//! The builder deduplicates lines, supports scoped hypotheses with a
//! deduction-theorem discharge (compiling natural-deduction style reasoning
//! into the Hilbert calculus), and prunes unused lines on completion.

use std::collections::{BTreeSet, HashMap};

use crate::formula::Formula;
use crate::proof::{FinitaryProof, Justification, ProofLine};
use crate::term::{SetVar, Var};

#[derive(Debug, Clone)]
struct Scope {
    hypothesis: Formula,
    start: usize,
}

#[derive(Debug, Clone)]
pub struct ProofBuilder {
    lines: Vec<ProofLine>,
    index: HashMap<Formula, usize>,
    scopes: Vec<Scope>,
}

impl Default for ProofBuilder {
    fn default() -> Self {
        ProofBuilder::new()
    }
}

impl ProofBuilder {
    pub fn new() -> ProofBuilder {
        ProofBuilder {
            lines: Vec::new(),
            index: HashMap::new(),
            scopes: Vec::new(),
        }
    }

    pub fn formula(&self, idx: usize) -> &Formula {
        &self.lines[idx].formula
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    fn push_line(&mut self, formula: Formula, justification: Justification) -> usize {
        if let Some(&i) = self.index.get(&formula) {
            return i;
        }
        let idx = self.lines.len();
        self.index.insert(formula.clone(), idx);
        self.lines.push(ProofLine {
            formula,
            justification,
        });
        idx
    }

    pub fn axiom(&mut self, f: Formula) -> usize {
        self.push_line(f, Justification::TheoryAxiom)
    }

    pub fn taut(&mut self, f: Formula) -> usize {
        debug_assert!(
            crate::proof::is_tautology(&f).unwrap_or(false),
            "not a tautology: {f:?}"
        );
        self.push_line(f, Justification::Taut)
    }

    pub fn eq_axiom(&mut self, f: Formula) -> usize {
        self.push_line(f, Justification::EqAxiom)
    }

    pub fn bounded_def(&mut self, f: Formula) -> usize {
        self.push_line(f, Justification::BoundedDef)
    }

    pub fn univ_inst(&mut self, f: Formula) -> usize {
        self.push_line(f, Justification::UnivInst)
    }

    pub fn univ_distrib(&mut self, f: Formula) -> usize {
        self.push_line(f, Justification::UnivDistrib)
    }

    pub fn exists_intro(&mut self, f: Formula) -> usize {
        self.push_line(f, Justification::ExistsIntro)
    }

    pub fn exists_elim(&mut self, f: Formula) -> usize {
        self.push_line(f, Justification::ExistsElim)
    }

    pub fn set_univ_inst(&mut self, f: Formula) -> usize {
        self.push_line(f, Justification::SetUnivInst)
    }

    pub fn set_univ_distrib(&mut self, f: Formula) -> usize {
        self.push_line(f, Justification::SetUnivDistrib)
    }

    pub fn set_exists_intro(&mut self, f: Formula) -> usize {
        self.push_line(f, Justification::SetExistsIntro)
    }

    pub fn set_exists_elim(&mut self, f: Formula) -> usize {
        self.push_line(f, Justification::SetExistsElim)
    }

    /// Modus ponens; computes the consequent from the implication line.
    pub fn mp(&mut self, imp: usize, ant: usize) -> usize {
        let Formula::Implies(a, b) = self.formula(imp).clone() else {
            panic!("mp on a non-implication line");
        };
        debug_assert_eq!(*a, *self.formula(ant), "mp antecedent mismatch");
        self.push_line(*b, Justification::Mp(imp, ant))
    }

    pub fn gen(&mut self, premise: usize, v: Var) -> usize {
        let f = Formula::forall(v, self.formula(premise).clone());
        if let Some(scope) = self.scopes.last() {
            debug_assert!(
                !scope.hypothesis.free_vars().contains(&v),
                "generalizing on a variable free in an open hypothesis"
            );
        }
        self.push_line(f, Justification::Gen(premise, v))
    }

    pub fn gen_set(&mut self, premise: usize, v: SetVar) -> usize {
        let f = Formula::forall_set(v, self.formula(premise).clone());
        if let Some(scope) = self.scopes.last() {
            debug_assert!(
                !scope.hypothesis.free_set_vars().contains(&v),
                "generalizing on a set variable free in an open hypothesis"
            );
        }
        self.push_line(f, Justification::GenSet(premise, v))
    }

    /// Splices a complete proof into this builder, remapping its references;
    /// returns the index of its conclusion.
    pub fn absorb(&mut self, proof: &FinitaryProof) -> usize {
        assert!(!proof.is_empty(), "absorbing an empty proof");
        let mut remap: Vec<usize> = Vec::with_capacity(proof.lines.len());
        for line in &proof.lines {
            let j = match &line.justification {
                Justification::Mp(i, k) => Justification::Mp(remap[*i], remap[*k]),
                Justification::Gen(i, v) => Justification::Gen(remap[*i], *v),
                Justification::GenSet(i, v) => Justification::GenSet(remap[*i], *v),
                Justification::Hyp => panic!("absorbing a proof with open hypotheses"),
                other => other.clone(),
            };
            let idx = self.push_line(line.formula.clone(), j);
            remap.push(idx);
        }
        *remap.last().unwrap()
    }

    /// Opens a hypothesis scope; the hypothesis becomes available as a line.
    pub fn assume(&mut self, h: Formula) -> usize {
        let start = self.lines.len();
        let idx = self.lines.len();
        // hypotheses are never deduplicated against earlier lines
        self.lines.push(ProofLine {
            formula: h.clone(),
            justification: Justification::Hyp,
        });
        self.index.insert(h.clone(), idx);
        self.scopes.push(Scope {
            hypothesis: h,
            start,
        });
        idx
    }

    /// Discharges the innermost hypothesis `h`, rewriting the scope into
    /// implications `h → ·` and returning the index of `h → goal`.
    pub fn discharge(&mut self, goal: usize) -> usize {
        let scope = self.scopes.pop().expect("no open hypothesis scope");
        let h = scope.hypothesis;
        let moved: Vec<ProofLine> = self.lines.drain(scope.start..).collect();
        if goal < scope.start {
            // the goal never used the hypothesis; weaken it directly
            self.index.clear();
            for (i, line) in self.lines.iter().enumerate() {
                self.index.entry(line.formula.clone()).or_insert(i);
            }
            let f = self.formula(goal).clone();
            let k = self.taut(Formula::implies(
                f.clone(),
                Formula::implies(h.clone(), f),
            ));
            return self.mp(k, goal);
        }
        // rebuild the dedupe index for the surviving prefix
        self.index.clear();
        for (i, line) in self.lines.iter().enumerate() {
            self.index.entry(line.formula.clone()).or_insert(i);
        }
        let mut remap: HashMap<usize, usize> = HashMap::new();
        for (off, line) in moved.iter().enumerate() {
            let old_idx = scope.start + off;
            let new_idx = self.transform_line(&h, line, &remap, scope.start);
            remap.insert(old_idx, new_idx);
        }
        remap[&goal]
    }

    /// Produces the index of `h → f` for a line `f` of the dissolved scope.
    fn transform_line(
        &mut self,
        h: &Formula,
        line: &ProofLine,
        remap: &HashMap<usize, usize>,
        scope_start: usize,
    ) -> usize {
        let f = &line.formula;
        let target = Formula::implies(h.clone(), f.clone());
        match &line.justification {
            Justification::Hyp => {
                debug_assert_eq!(f, h, "inner hypothesis left undischarged");
                self.taut(target)
            }
            Justification::Mp(i, j) => {
                let ni = self.lift_reference(h, *i, remap, scope_start);
                let nj = self.lift_reference(h, *j, remap, scope_start);
                // (h→(a→b)) → ((h→a) → (h→b))
                let hi = self.formula(ni).clone();
                let hj = self.formula(nj).clone();
                let step = self.taut(Formula::implies(
                    hi,
                    Formula::implies(hj, target),
                ));
                let step2 = self.mp(step, ni);
                self.mp(step2, nj)
            }
            Justification::Gen(i, v) => {
                debug_assert!(!h.free_vars().contains(v), "discharge across a captured variable");
                let ni = self.lift_reference(h, *i, remap, scope_start);
                let all = self.gen(ni, *v);
                // ∀v(h→g) → (h → ∀v g)
                let distrib = self.univ_distrib(Formula::implies(
                    self.formula(all).clone(),
                    target,
                ));
                self.mp(distrib, all)
            }
            Justification::GenSet(i, v) => {
                debug_assert!(
                    !h.free_set_vars().contains(v),
                    "discharge across a captured set variable"
                );
                let ni = self.lift_reference(h, *i, remap, scope_start);
                let all = self.gen_set(ni, *v);
                let distrib = self.set_univ_distrib(Formula::implies(
                    self.formula(all).clone(),
                    target,
                ));
                self.mp(distrib, all)
            }
            // axiom-like lines: restate and weaken
            j => {
                let base = self.push_line(f.clone(), j.clone());
                let k = self.taut(Formula::implies(f.clone(), target.clone()));
                self.mp(k, base)
            }
        }
    }

    /// Index of `h → f_i` where `i` is a pre-discharge reference.
    fn lift_reference(
        &mut self,
        h: &Formula,
        old: usize,
        remap: &HashMap<usize, usize>,
        scope_start: usize,
    ) -> usize {
        if old >= scope_start {
            return remap[&old];
        }
        // the referenced line survived untouched; weaken it
        let f = self.formula(old).clone();
        let k = self.taut(Formula::implies(
            f.clone(),
            Formula::implies(h.clone(), f.clone()),
        ));
        self.mp(k, old)
    }

    pub fn open_scopes(&self) -> usize {
        self.scopes.len()
    }

    /// Finishes the proof of the line `conclusion`, pruning unreferenced lines.
    pub fn finish(mut self, conclusion: usize) -> FinitaryProof {
        assert!(self.scopes.is_empty(), "open hypothesis scopes at finish");
        // ensure the conclusion is the final line
        if conclusion != self.lines.len() - 1 {
            let line = self.lines[conclusion].clone();
            let f = line.formula.clone();
            // duplicate via a trivially removable detour: A, A→A, mp
            let taut = self.taut(Formula::implies(f.clone(), f.clone()));
            self.lines.push(ProofLine {
                formula: f,
                justification: Justification::Mp(taut, conclusion),
            });
        }
        let last = self.lines.len() - 1;
        let mut needed: BTreeSet<usize> = BTreeSet::new();
        let mut stack = vec![last];
        while let Some(i) = stack.pop() {
            if !needed.insert(i) {
                continue;
            }
            match &self.lines[i].justification {
                Justification::Mp(a, b) => {
                    stack.push(*a);
                    stack.push(*b);
                }
                Justification::Gen(a, _) | Justification::GenSet(a, _) => stack.push(*a),
                _ => {}
            }
        }
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut lines = Vec::with_capacity(needed.len());
        for i in needed {
            let mut line = self.lines[i].clone();
            line.justification = match line.justification {
                Justification::Mp(a, b) => Justification::Mp(remap[&a], remap[&b]),
                Justification::Gen(a, v) => Justification::Gen(remap[&a], v),
                Justification::GenSet(a, v) => Justification::GenSet(remap[&a], v),
                other => other,
            };
            remap.insert(i, lines.len());
            lines.push(line);
        }
        FinitaryProof { lines }
    }

    // ---- small propositional helpers -------------------------------------

    /// From `⊢ a → b` and `⊢ b → c`, derive `⊢ a → c`.
    pub fn compose(&mut self, ab: usize, bc: usize) -> usize {
        let fab = self.formula(ab).clone();
        let fbc = self.formula(bc).clone();
        let (a, _b) = split_implication(&fab);
        let (_b2, c) = split_implication(&fbc);
        let goal = Formula::implies(a.clone(), c.clone());
        let t = self.taut(Formula::implies(
            fab,
            Formula::implies(fbc, goal),
        ));
        let s = self.mp(t, ab);
        self.mp(s, bc)
    }

    /// From `⊢ a → (b → c)` and `⊢ b`, derive `⊢ a → c`.
    pub fn apply_with(&mut self, abc: usize, b: usize) -> usize {
        let fabc = self.formula(abc).clone();
        let fb = self.formula(b).clone();
        let (a, bc) = split_implication(&fabc);
        let (_b, c) = split_implication(bc);
        let goal = Formula::implies(a.clone(), c.clone());
        let t = self.taut(Formula::implies(fabc, Formula::implies(fb, goal)));
        let s = self.mp(t, abc);
        self.mp(s, b)
    }

    /// From `⊢ a → b` and `⊢ ¬b`, derive `⊢ ¬a`.
    pub fn contrapose(&mut self, ab: usize, not_b: usize) -> usize {
        let fab = self.formula(ab).clone();
        let fnb = self.formula(not_b).clone();
        let (a, _) = split_implication(&fab);
        let goal = Formula::not(a.clone());
        let t = self.taut(Formula::implies(fab, Formula::implies(fnb, goal)));
        let s = self.mp(t, ab);
        self.mp(s, not_b)
    }

    /// From `⊢ a` and `⊢ b`, derive `⊢ a ∧ b`.
    pub fn and_intro(&mut self, a: usize, b: usize) -> usize {
        let fa = self.formula(a).clone();
        let fb = self.formula(b).clone();
        let goal = Formula::and(fa.clone(), fb.clone());
        let t = self.taut(Formula::implies(fa, Formula::implies(fb, goal)));
        let s = self.mp(t, a);
        self.mp(s, b)
    }

    /// Extracts a conjunct: from `⊢ a ∧ b` derive `⊢ a` (left) or `⊢ b`.
    pub fn and_elim(&mut self, ab: usize, left: bool) -> usize {
        let fab = self.formula(ab).clone();
        let Formula::And(a, b) = &fab else {
            panic!("and_elim on a non-conjunction");
        };
        let goal = if left { (**a).clone() } else { (**b).clone() };
        let t = self.taut(Formula::implies(fab.clone(), goal));
        self.mp(t, ab)
    }

    /// From `⊢ a`, derive `⊢ a ∨ b` or `⊢ b ∨ a`.
    pub fn or_intro(&mut self, a: usize, other: Formula, left: bool) -> usize {
        let fa = self.formula(a).clone();
        let goal = if left {
            Formula::or(fa.clone(), other)
        } else {
            Formula::or(other, fa.clone())
        };
        let t = self.taut(Formula::implies(fa, goal));
        self.mp(t, a)
    }
}

fn split_implication(f: &Formula) -> (&Formula, &Formula) {
    match f {
        Formula::Implies(a, b) => (a, b),
        _ => panic!("expected an implication, found {f:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::{OracleSet, SetDescriptor};
    use crate::proof::check_proof;
    use crate::term::Term;
    use crate::theory::{OracleTheory, TheorySpec};

    fn theory() -> OracleTheory {
        OracleTheory::new(
            TheorySpec::eca0(),
            OracleSet::Plain(SetDescriptor::singleton(2)),
        )
    }

    #[test]
    fn discharge_compiles_a_hypothetical() {
        // prove 𝔒(2) → (0=0 ∧ 𝔒(2))
        let th = theory();
        let mut b = ProofBuilder::new();
        let h = Formula::Oracle(Term::numeral(2));
        let hi = b.assume(h.clone());
        let refl = b.eq_axiom(Formula::Eq(Term::Zero, Term::Zero));
        let both = b.and_intro(refl, hi);
        let goal = b.discharge(both);
        let expected = Formula::implies(
            h,
            Formula::and(
                Formula::Eq(Term::Zero, Term::Zero),
                Formula::Oracle(Term::numeral(2)),
            ),
        );
        assert_eq!(b.formula(goal), &expected);
        let proof = b.finish(goal);
        check_proof(&th, &proof, &expected).unwrap();
    }

    #[test]
    fn discharge_handles_generalization() {
        // prove 𝔒(2) → ∀x (x = x)
        let th = theory();
        let mut b = ProofBuilder::new();
        let h = Formula::Oracle(Term::numeral(2));
        b.assume(h.clone());
        let refl = b.eq_axiom(Formula::Eq(Term::var(0), Term::var(0)));
        let all = b.gen(refl, Var(0));
        let goal = b.discharge(all);
        let proof = b.finish(goal);
        let expected = Formula::implies(
            h,
            Formula::forall(Var(0), Formula::Eq(Term::var(0), Term::var(0))),
        );
        check_proof(&th, &proof, &expected).unwrap();
    }

    #[test]
    fn nested_scopes_discharge_inside_out() {
        // prove a → (b → (a ∧ b)) for atoms a, b
        let th = theory();
        let a = Formula::Oracle(Term::numeral(2));
        let bf = Formula::Eq(Term::Zero, Term::Zero);
        let mut b = ProofBuilder::new();
        let ha = b.assume(a.clone());
        let hb = b.assume(bf.clone());
        let both = b.and_intro(ha, hb);
        let inner = b.discharge(both);
        let outer = b.discharge(inner);
        let proof = b.finish(outer);
        let expected = Formula::implies(
            a.clone(),
            Formula::implies(bf.clone(), Formula::and(a, bf)),
        );
        check_proof(&th, &proof, &expected).unwrap();
    }

    #[test]
    fn pruning_keeps_proofs_checkable() {
        let th = theory();
        let mut b = ProofBuilder::new();
        b.eq_axiom(Formula::Eq(Term::One, Term::One)); // unused
        let used = b.axiom(Formula::Oracle(Term::numeral(2)));
        let proof = b.finish(used);
        assert_eq!(proof.len(), 1);
        check_proof(&th, &proof, &Formula::Oracle(Term::numeral(2))).unwrap();
    }
}

//! Transfinite recursion along well-orders: stage sets, the recursion
//! operator and its checkers, the impredicative reformulation by exhaustive
//! set enumeration, finite unfoldings, and the provability-based construction
//! that reads stages off a saturated table.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use crate::builder::ProofBuilder;
use crate::certificate::OmegaCertificate;
use crate::descriptor::SetDescriptor;
use crate::error::{SynthError, TrError};
use crate::eval::{evaluate, Caps, Env, ThreeValued};
use crate::formula::{classify, Formula};
use crate::ipc::IpcTable;
use crate::ordinal::{nat_left_mul, CnfOrdinal, WellOrder};
use crate::synth::Synth;
use crate::term::{pair_u64, ProjSide, SetVar, Term, Var};
use crate::theory::OracleTheory;

/// A stage-indexed set: `x ∈ X_ξ` is recorded as the pair `(ξ, x)` with
/// ξ a carrier element code and `x` below the cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageSet {
    pub order: WellOrder,
    pub cutoff: u64,
    content: BTreeSet<(u64, u64)>,
}

impl StageSet {
    pub fn empty(order: WellOrder, cutoff: u64) -> StageSet {
        StageSet {
            order,
            cutoff,
            content: BTreeSet::new(),
        }
    }

    pub fn insert(&mut self, stage: u64, x: u64) {
        assert!(self.order.contains(stage) && x < self.cutoff);
        self.content.insert((stage, x));
    }

    pub fn contains(&self, stage: u64, x: u64) -> bool {
        self.content.contains(&(stage, x))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.content.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.content.len()
    }

    pub fn is_empty(&self) -> bool {
        self.content.is_empty()
    }

    /// Membership descriptor over pair codes, for binding the recursion
    /// variable during evaluation.
    pub fn descriptor(&self) -> SetDescriptor {
        let codes: Vec<u64> = self
            .content
            .iter()
            .filter_map(|&(s, x)| pair_u64(s, x).to_u64())
            .collect();
        SetDescriptor::from_finite(&codes)
    }

    /// Restricts to stages strictly below ξ.
    pub fn below(&self, stage: u64) -> StageSet {
        StageSet {
            order: self.order.clone(),
            cutoff: self.cutoff,
            content: self
                .content
                .iter()
                .filter(|&&(s, _)| self.order.less(s, stage))
                .copied()
                .collect(),
        }
    }

    /// Bit-indexed construction over a fixed carrier enumeration, for
    /// exhaustive searches.
    pub fn from_bits(order: &WellOrder, cutoff: u64, bits: u64) -> Result<StageSet, TrError> {
        let elements = order.elements().map_err(|_| TrError::NotWellOrder)?;
        let mut set = StageSet::empty(order.clone(), cutoff);
        let mut i = 0u32;
        for &s in &elements {
            for x in 0..cutoff {
                if bits & (1u64 << i) != 0 {
                    set.insert(s, x);
                }
                i += 1;
            }
        }
        Ok(set)
    }

    /// Deterministic dump: sorted ⟨stage, x⟩ pairs.
    pub fn dump(&self) -> Vec<(u64, u64)> {
        self.content.iter().copied().collect()
    }
}

/// A recursion formula φ with its designated recursion set variable and
/// number variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionFormula {
    pub formula: Formula,
    pub recursion_var: SetVar,
    pub number_var: Var,
}

impl RecursionFormula {
    pub fn new(formula: Formula, recursion_var: SetVar, number_var: Var) -> RecursionFormula {
        RecursionFormula {
            formula,
            recursion_var,
            number_var,
        }
    }

    /// The Π⁰ₘ degree of the matrix, computed after negation normal form.
    pub fn degree(&self) -> u64 {
        match self.formula.nnf_atoms() {
            Ok(nnf) => u64::from(classify(&nnf).degree()),
            Err(_) => u64::from(classify(&self.formula).degree()),
        }
    }
}

/// Renders `(t)₀ <_Λ λ` as an explicit disjunction over the predecessors of λ.
fn stage_guard(order: &WellOrder, lam: u64, t: &Term) -> Formula {
    let elements = order.elements().unwrap_or_default();
    Formula::disj(
        elements
            .into_iter()
            .filter(|&s| order.less(s, lam))
            .map(|s| {
                Formula::Eq(
                    Term::proj(ProjSide::Left, t.clone()),
                    Term::numeral(s),
                )
            })
            .collect(),
    )
}

/// Stage relativization: every occurrence of `t ∈ X` becomes
/// `((t)₀ <_Λ λ) ∧ t ∈ X`, with the order fact rendered finitely.
pub fn relativize(rf: &RecursionFormula, order: &WellOrder, lam: u64) -> Formula {
    rf.formula.map_set_atoms(rf.recursion_var, &|t| {
        Formula::and(
            stage_guard(order, lam, t),
            Formula::In(t.clone(), rf.recursion_var),
        )
    })
}

fn stage_truth(
    rf: &RecursionFormula,
    order: &WellOrder,
    lam: u64,
    x: u64,
    partial: &StageSet,
    params: &Env,
    caps: &Caps,
) -> Result<ThreeValued, TrError> {
    let rel = relativize(rf, order, lam);
    let env = params
        .clone()
        .bind_set(rf.recursion_var, partial.descriptor())
        .bind_num(rf.number_var, x);
    Ok(evaluate(&rel, &env, caps)?)
}

/// Computes the unique stage set satisfying the recursion over the cutoff, by
/// iteration along the order.
pub fn tr_compute(
    rf: &RecursionFormula,
    order: &WellOrder,
    cutoff: u64,
    params: &Env,
    caps: &Caps,
) -> Result<StageSet, TrError> {
    if order.check().is_err() {
        return Err(TrError::NotWellOrder);
    }
    let elements = order.elements().map_err(|_| TrError::NotWellOrder)?;
    let mut set = StageSet::empty(order.clone(), cutoff);
    for &stage in &elements {
        let mut new_members = Vec::new();
        for x in 0..cutoff {
            match stage_truth(rf, order, stage, x, &set, params, caps)? {
                ThreeValued::True => new_members.push(x),
                ThreeValued::False => {}
                ThreeValued::Unknown => {
                    return Err(TrError::Indeterminate { stage, element: x })
                }
            }
        }
        for x in new_members {
            set.insert(stage, x);
        }
    }
    Ok(set)
}

/// Outcome of a recursion check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrVerdict {
    Holds,
    Fails { stage: u64, element: u64 },
}

impl TrVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, TrVerdict::Holds)
    }
}

/// Checks the recursion condition at every stage ξ ≤ λ over the cutoff.
pub fn tr_check(
    rf: &RecursionFormula,
    order: &WellOrder,
    lam: u64,
    set: &StageSet,
    params: &Env,
    caps: &Caps,
) -> Result<TrVerdict, TrError> {
    check_stages(rf, order, set, params, caps, |s| {
        s == lam || order.less(s, lam)
    })
}

/// Checks the recursion condition at every stage ξ < λ.
pub fn tr_check_below(
    rf: &RecursionFormula,
    order: &WellOrder,
    lam: u64,
    set: &StageSet,
    params: &Env,
    caps: &Caps,
) -> Result<TrVerdict, TrError> {
    check_stages(rf, order, set, params, caps, |s| order.less(s, lam))
}

fn check_stages(
    rf: &RecursionFormula,
    order: &WellOrder,
    set: &StageSet,
    params: &Env,
    caps: &Caps,
    include: impl Fn(u64) -> bool,
) -> Result<TrVerdict, TrError> {
    let elements = order.elements().map_err(|_| TrError::NotWellOrder)?;
    for &stage in &elements {
        if !include(stage) {
            continue;
        }
        for x in 0..set.cutoff {
            let expected = stage_truth(rf, order, stage, x, set, params, caps)?;
            let actual = set.contains(stage, x);
            match expected {
                ThreeValued::Unknown => {
                    return Err(TrError::Indeterminate { stage, element: x })
                }
                ThreeValued::True if !actual => {
                    return Ok(TrVerdict::Fails { stage, element: x })
                }
                ThreeValued::False if actual => {
                    return Ok(TrVerdict::Fails { stage, element: x })
                }
                _ => {}
            }
        }
    }
    Ok(TrVerdict::Holds)
}

/// Set equality up to ξ: contents agree on all stages strictly below.
pub fn eq_upto(a: &StageSet, b: &StageSet, stage: u64) -> Result<bool, TrError> {
    if a.order != b.order {
        return Err(TrError::OrderMismatch);
    }
    if a.cutoff != b.cutoff {
        return Err(TrError::CutoffMismatch(a.cutoff, b.cutoff));
    }
    let elements = a.order.elements().map_err(|_| TrError::NotWellOrder)?;
    for &s in &elements {
        if !a.order.less(s, stage) {
            continue;
        }
        for x in 0..a.cutoff {
            if a.contains(s, x) != b.contains(s, x) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The impredicative reformulation, decided by brute force: for each pair
/// ⟨x₀, x₁⟩ with x₀ ≤_Λ λ, membership must agree with
/// `∀Y (TR_{x₀}(φ, Y) → φ(x₁, Y_{<x₀}))` over every candidate stage set on
/// the bounded pair universe.
pub fn hat_tr_check(
    rf: &RecursionFormula,
    order: &WellOrder,
    lam: u64,
    set: &StageSet,
    params: &Env,
    caps: &Caps,
    bit_limit: u64,
) -> Result<TrVerdict, TrError> {
    let elements = order.elements().map_err(|_| TrError::NotWellOrder)?;
    let bits = elements.len() as u64 * set.cutoff;
    if bits > bit_limit {
        return Err(TrError::UniverseTooLarge {
            bits,
            limit: bit_limit,
        });
    }
    for &stage in &elements {
        if !(stage == lam || order.less(stage, lam)) {
            continue;
        }
        for x in 0..set.cutoff {
            let mut rhs = true;
            for candidate_bits in 0u64..(1u64 << bits) {
                let candidate = StageSet::from_bits(order, set.cutoff, candidate_bits)?;
                if tr_check(rf, order, stage, &candidate, params, caps)?.holds() {
                    let holds =
                        stage_truth(rf, order, stage, x, &candidate, params, caps)?;
                    match holds {
                        ThreeValued::True => {}
                        ThreeValued::False => {
                            rhs = false;
                            break;
                        }
                        ThreeValued::Unknown => {
                            return Err(TrError::Indeterminate { stage, element: x })
                        }
                    }
                }
            }
            if rhs != set.contains(stage, x) {
                return Ok(TrVerdict::Fails { stage, element: x });
            }
        }
    }
    Ok(TrVerdict::Holds)
}

/// Finite unfolding: stage-m membership as a formula. The base is ⊥ and each
/// step replaces `t ∈ X` by the stage-indexed disjunction of the earlier
/// unfoldings, so that evaluating the (m+1)-st unfolding agrees with stage m
/// of the recursion over the initial-segment order.
pub fn phi_unfold(rf: &RecursionFormula, n: u64) -> Formula {
    let mut unfoldings: Vec<Formula> = vec![Formula::falsum()];
    for m in 1..=n {
        let next = rf.formula.map_set_atoms(rf.recursion_var, &|t| {
            Formula::disj(
                (0..m - 1)
                    .map(|j| {
                        let stage_eq = Formula::Eq(
                            Term::proj(ProjSide::Left, t.clone()),
                            Term::numeral(j),
                        );
                        let member = unfoldings[(j + 1) as usize].substitute_term(
                            rf.number_var,
                            &Term::proj(ProjSide::Right, t.clone()),
                        );
                        Formula::and(stage_eq, member)
                    })
                    .collect(),
            )
        });
        unfoldings.push(next);
    }
    unfoldings.pop().unwrap()
}

/// The boxed recursion formula for a pair (λ, k): the universal implication
/// whose table membership defines the provability-based stage set.
pub fn tilde_box_formula(
    rf: &RecursionFormula,
    order: &WellOrder,
    lam: u64,
    k: u64,
    cutoff: u64,
) -> Formula {
    let elements = order.elements().unwrap_or_default();
    let xvar = rf.number_var;
    // TR_{<λ}: for every stage ξ < λ, ∀x<N (⟨ξ,x⟩ ∈ X ↔ φ(x, X_{<ξ}))
    let mut conjuncts = Vec::new();
    for &s in &elements {
        if !order.less(s, lam) {
            continue;
        }
        let member = Formula::In(
            Term::pair(Term::numeral(s), Term::Var(xvar)),
            rf.recursion_var,
        );
        let body = Formula::iff(member, relativize(rf, order, s));
        conjuncts.push(Formula::forall_lt(xvar, Term::numeral(cutoff), body));
    }
    let tr_below = Formula::conj(conjuncts);
    let inst = relativize(rf, order, lam).substitute_numeral(xvar, k);
    Formula::forall_set(rf.recursion_var, Formula::implies(tr_below, inst))
}

/// Builds the provability-based stage set from a saturated table: the pair
/// (λ, k) is included exactly when the boxed formula is an entry at level
/// m·λ. Every required formula must be inside the table's universe.
pub fn tilde_tr_build(
    rf: &RecursionFormula,
    order: &WellOrder,
    table: &IpcTable,
    cutoff: u64,
) -> Result<StageSet, TrError> {
    let m = rf.degree();
    let elements = order.elements().map_err(|_| TrError::NotWellOrder)?;
    let mut missing = 0usize;
    let mut set = StageSet::empty(order.clone(), cutoff);
    let universe: std::collections::HashSet<&Formula> = table.universe.iter().collect();
    for &lam in &elements {
        let level = tilde_level(order, m, lam)?;
        for k in 0..cutoff {
            let boxf = tilde_box_formula(rf, order, lam, k, cutoff);
            if !universe.contains(&boxf) {
                missing += 1;
                continue;
            }
            if table.contains(level, &boxf) {
                set.insert(lam, k);
            }
        }
    }
    if missing > 0 {
        return Err(TrError::Coverage { missing });
    }
    Ok(set)
}

/// The level m·λ as an element of the order.
pub fn tilde_level(order: &WellOrder, m: u64, lam: u64) -> Result<u64, TrError> {
    if m == 0 {
        return order.least().ok_or(TrError::NotWellOrder);
    }
    match order {
        WellOrder::Cnf { .. } => {
            let lam_ord = CnfOrdinal::decode_u64(lam).ok_or(TrError::UnsupportedOrder)?;
            let scaled = nat_left_mul(m, &lam_ord);
            let code = scaled.code_u64().ok_or(TrError::UnsupportedOrder)?;
            if order.contains(code) {
                Ok(code)
            } else {
                Err(TrError::UnsupportedOrder)
            }
        }
        WellOrder::Finite(_) => Err(TrError::UnsupportedOrder),
    }
}

/// Synthesizes a finitary certificate of the boxed recursion formula for a
/// pair (λ, k), for bounded-quantifier matrices whose stage evaluations are
/// determinate.
pub fn tilde_seed_certificate(
    rf: &RecursionFormula,
    order: &WellOrder,
    lam: u64,
    k: u64,
    cutoff: u64,
    theory: &OracleTheory,
    caps: &Caps,
) -> Result<OmegaCertificate, SynthError> {
    let synth = Synth::new(theory, *caps);
    let mut b = ProofBuilder::new();
    let goal = tilde_box_formula(rf, order, lam, k, cutoff);
    let Formula::ForallSet(setv, body) = &goal else {
        unreachable!()
    };
    let Formula::Implies(tr_below, inst) = &**body else {
        unreachable!()
    };

    let h = b.assume((**tr_below).clone());
    // split the stage conjunction, in carrier order
    let elements = order
        .elements()
        .map_err(|_| SynthError::Unsupported("infinite carrier".into()))?;
    let below: Vec<u64> = elements
        .iter()
        .copied()
        .filter(|&s| order.less(s, lam))
        .collect();
    let mut stage_conjuncts: Vec<(u64, usize)> = Vec::new();
    if !below.is_empty() {
        let mut flat: Vec<usize> = Vec::new();
        extract_left_fold(&mut b, h, below.len(), &mut flat);
        for (s, idx) in below.iter().zip(flat) {
            stage_conjuncts.push((*s, idx));
        }
    }

    // derive numeral-form membership literals stage by stage
    let mut ctx: BTreeMap<u64, (usize, bool)> = BTreeMap::new();
    for &(s, conj_idx) in &stage_conjuncts {
        for v in 0..cutoff {
            // instance of the bounded universal at v
            let fconj = b.formula(conj_idx).clone();
            let Formula::ForallLt(xv, bound, iff_body) = &fconj else {
                return Err(SynthError::Unsupported("unexpected render shape".into()));
            };
            let unb = Formula::forall(
                *xv,
                Formula::implies(
                    Formula::Lt(Term::Var(*xv), bound.clone()),
                    (**iff_body).clone(),
                ),
            );
            let bdef = b.bounded_def(Formula::implies(fconj.clone(), unb.clone()));
            let opened = b.mp(bdef, conj_idx);
            let instd = synth.forall_elim(&mut b, opened, &Term::numeral(v));
            let vlt = synth.prove_closed(
                &mut b,
                &Formula::Lt(Term::numeral(v), bound.clone()),
                true,
            )?;
            let iff_inst = b.mp(instd, vlt);
            // decide the relativized body under the current context
            let rel_inst = relativize(rf, order, s).substitute_numeral(rf.number_var, v);
            let truth = eval_with_ctx(&synth, &rel_inst, &ctx)?;
            let member_pair = Formula::In(
                Term::pair(Term::numeral(s), Term::numeral(v)),
                rf.recursion_var,
            );
            let code = pair_u64(s, v)
                .to_u64()
                .ok_or_else(|| SynthError::CannotWitness("pair code overflow".into()))?;
            let member_code = Formula::In(Term::numeral(code), rf.recursion_var);
            // bridge: ⟨s̄,v̄⟩ = codē
            let diagram = b.axiom(Formula::Eq(
                Term::pair(Term::numeral(s), Term::numeral(v)),
                Term::numeral(code),
            ));
            if truth {
                let body_proof = prove_with_ctx(&synth, &mut b, &rel_inst, true, &ctx)?;
                // iff gives (rel → member)
                let fiff = b.formula(iff_inst).clone();
                let t = b.taut(Formula::implies(
                    fiff,
                    Formula::implies(rel_inst.clone(), member_pair.clone()),
                ));
                let s1 = b.mp(t, iff_inst);
                let member = b.mp(s1, body_proof);
                let cong = b.eq_axiom(Formula::implies(
                    Formula::Eq(
                        Term::pair(Term::numeral(s), Term::numeral(v)),
                        Term::numeral(code),
                    ),
                    Formula::implies(member_pair.clone(), member_code.clone()),
                ));
                let s2 = b.mp(cong, diagram);
                let lit = b.mp(s2, member);
                ctx.insert(code, (lit, true));
            } else {
                let body_proof = prove_with_ctx(&synth, &mut b, &rel_inst, false, &ctx)?;
                let fiff = b.formula(iff_inst).clone();
                let fneg = b.formula(body_proof).clone();
                let t = b.taut(Formula::implies(
                    fiff,
                    Formula::implies(fneg, Formula::not(member_pair.clone())),
                ));
                let s1 = b.mp(t, iff_inst);
                let notmem = b.mp(s1, body_proof);
                let sym = synth.eq_symm(&mut b, diagram);
                let cong = b.eq_axiom(Formula::implies(
                    Formula::Eq(
                        Term::numeral(code),
                        Term::pair(Term::numeral(s), Term::numeral(v)),
                    ),
                    Formula::implies(member_code.clone(), member_pair.clone()),
                ));
                let s2 = b.mp(cong, sym);
                let lit = b.contrapose(s2, notmem);
                ctx.insert(code, (lit, false));
            }
        }
    }

    // the target instance under the accumulated context
    let target = prove_with_ctx(&synth, &mut b, inst, true, &ctx)?;
    let imp = b.discharge(target);
    let gen = b.gen_set(imp, *setv);
    debug_assert_eq!(b.formula(gen), &goal);
    Ok(OmegaCertificate::Fin(b.finish(gen)))
}

/// Splits a left-folded conjunction line into `count` conjunct lines.
fn extract_left_fold(b: &mut ProofBuilder, idx: usize, count: usize, out: &mut Vec<usize>) {
    if count == 1 {
        out.push(idx);
        return;
    }
    let left = b.and_elim(idx, true);
    let right = b.and_elim(idx, false);
    extract_left_fold(b, left, count - 1, out);
    out.push(right);
}

/// Truth of a closed formula whose membership atoms are all resolved by the
/// context of derived literals.
fn eval_with_ctx(
    synth: &Synth,
    phi: &Formula,
    ctx: &BTreeMap<u64, (usize, bool)>,
) -> Result<bool, SynthError> {
    match phi {
        Formula::In(t, _) => {
            let code = synth.closed_value(t)?;
            ctx.get(&code)
                .map(|&(_, sign)| sign)
                .ok_or_else(|| SynthError::CannotWitness(format!("unresolved literal {code}")))
        }
        Formula::Not(g) => Ok(!eval_with_ctx(synth, g, ctx)?),
        Formula::And(a, c) => Ok(eval_with_ctx(synth, a, ctx)? && eval_with_ctx(synth, c, ctx)?),
        Formula::Or(a, c) => Ok(eval_with_ctx(synth, a, ctx)? || eval_with_ctx(synth, c, ctx)?),
        Formula::Implies(a, c) => {
            Ok(!eval_with_ctx(synth, a, ctx)? || eval_with_ctx(synth, c, ctx)?)
        }
        Formula::ForallLt(v, bound, body) => {
            let m = synth.closed_value(bound)?;
            for x in 0..m {
                if !eval_with_ctx(synth, &body.substitute_numeral(*v, x), ctx)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::ExistsLt(v, bound, body) => {
            let m = synth.closed_value(bound)?;
            for x in 0..m {
                if eval_with_ctx(synth, &body.substitute_numeral(*v, x), ctx)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        _ => match synth.truth(phi)? {
            ThreeValued::True => Ok(true),
            ThreeValued::False => Ok(false),
            ThreeValued::Unknown => Err(SynthError::CannotWitness(
                "indeterminate under caps".into(),
            )),
        },
    }
}

/// Like the closed prover, but membership atoms are discharged through the
/// context of previously derived literals.
fn prove_with_ctx(
    synth: &Synth,
    b: &mut ProofBuilder,
    phi: &Formula,
    want: bool,
    ctx: &BTreeMap<u64, (usize, bool)>,
) -> Result<usize, SynthError> {
    match phi {
        Formula::In(t, setv) => {
            let code = synth.closed_value(t)?;
            let &(lit, sign) = ctx
                .get(&code)
                .ok_or_else(|| SynthError::CannotWitness(format!("unresolved literal {code}")))?;
            if sign != want {
                return Err(SynthError::CannotWitness("literal has the wrong sign".into()));
            }
            let (vt, _) = synth.prove_term_value(b, t)?;
            if want {
                // In(codē) and codē = t … rewrite to In(t)
                let sym = synth.eq_symm(b, vt);
                let cong = b.eq_axiom(Formula::implies(
                    Formula::Eq(Term::numeral(code), t.clone()),
                    Formula::implies(
                        Formula::In(Term::numeral(code), *setv),
                        Formula::In(t.clone(), *setv),
                    ),
                ));
                let s = b.mp(cong, sym);
                Ok(b.mp(s, lit))
            } else {
                let cong = b.eq_axiom(Formula::implies(
                    Formula::Eq(t.clone(), Term::numeral(code)),
                    Formula::implies(
                        Formula::In(t.clone(), *setv),
                        Formula::In(Term::numeral(code), *setv),
                    ),
                ));
                let s = b.mp(cong, vt);
                Ok(b.contrapose(s, lit))
            }
        }
        Formula::Not(g) => {
            if want {
                prove_with_ctx(synth, b, g, false, ctx)
            } else {
                let i = prove_with_ctx(synth, b, g, true, ctx)?;
                let fg = b.formula(i).clone();
                let t = b.taut(Formula::implies(
                    fg.clone(),
                    Formula::not(Formula::not(fg)),
                ));
                Ok(b.mp(t, i))
            }
        }
        Formula::And(p, q) => {
            if want {
                let ip = prove_with_ctx(synth, b, p, true, ctx)?;
                let iq = prove_with_ctx(synth, b, q, true, ctx)?;
                Ok(b.and_intro(ip, iq))
            } else {
                let side = if !eval_with_ctx(synth, p, ctx)? {
                    prove_with_ctx(synth, b, p, false, ctx)?
                } else {
                    prove_with_ctx(synth, b, q, false, ctx)?
                };
                let fs = b.formula(side).clone();
                let t = b.taut(Formula::implies(fs, Formula::not(phi.clone())));
                Ok(b.mp(t, side))
            }
        }
        Formula::Or(p, q) => {
            if want {
                let side = if eval_with_ctx(synth, p, ctx)? {
                    prove_with_ctx(synth, b, p, true, ctx)?
                } else {
                    prove_with_ctx(synth, b, q, true, ctx)?
                };
                let fs = b.formula(side).clone();
                let t = b.taut(Formula::implies(fs, phi.clone()));
                Ok(b.mp(t, side))
            } else {
                let ip = prove_with_ctx(synth, b, p, false, ctx)?;
                let iq = prove_with_ctx(synth, b, q, false, ctx)?;
                let (fp, fq) = (b.formula(ip).clone(), b.formula(iq).clone());
                let t = b.taut(Formula::implies(
                    fp,
                    Formula::implies(fq, Formula::not(phi.clone())),
                ));
                let s = b.mp(t, ip);
                Ok(b.mp(s, iq))
            }
        }
        Formula::Implies(p, q) => {
            if want {
                if !eval_with_ctx(synth, p, ctx)? {
                    let i = prove_with_ctx(synth, b, p, false, ctx)?;
                    let fi = b.formula(i).clone();
                    let t = b.taut(Formula::implies(fi, phi.clone()));
                    Ok(b.mp(t, i))
                } else {
                    let i = prove_with_ctx(synth, b, q, true, ctx)?;
                    let fi = b.formula(i).clone();
                    let t = b.taut(Formula::implies(fi, phi.clone()));
                    Ok(b.mp(t, i))
                }
            } else {
                let ip = prove_with_ctx(synth, b, p, true, ctx)?;
                let iq = prove_with_ctx(synth, b, q, false, ctx)?;
                let (fp, fq) = (b.formula(ip).clone(), b.formula(iq).clone());
                let t = b.taut(Formula::implies(
                    fp,
                    Formula::implies(fq, Formula::not(phi.clone())),
                ));
                let s = b.mp(t, ip);
                Ok(b.mp(s, iq))
            }
        }
        Formula::ForallLt(v, bound, body) => {
            if want {
                synth.prove_bounded_forall(b, *v, bound, body, &mut |s, b2, inst| {
                    prove_with_ctx(s, b2, &inst, true, ctx)
                })
            } else {
                // counterexample route mirrors the closed prover
                let m = synth.closed_value(bound)?;
                for x in 0..m {
                    let inst = body.substitute_numeral(*v, x);
                    if !eval_with_ctx(synth, &inst, ctx)? {
                        let refuted = prove_with_ctx(synth, b, &inst, false, ctx)?;
                        let klt =
                            synth.prove_closed(b, &Formula::Lt(Term::numeral(x), bound.clone()), true)?;
                        let unb = Formula::forall(
                            *v,
                            Formula::implies(
                                Formula::Lt(Term::Var(*v), bound.clone()),
                                (**body).clone(),
                            ),
                        );
                        let bdef = b.bounded_def(Formula::implies(phi.clone(), unb.clone()));
                        let instd = Formula::implies(
                            Formula::Lt(Term::numeral(x), bound.clone()),
                            inst.clone(),
                        );
                        let ui = b.univ_inst(Formula::implies(unb, instd));
                        let chain = b.compose(bdef, ui);
                        let fchain = b.formula(chain).clone();
                        let fk = b.formula(klt).clone();
                        let fni = b.formula(refuted).clone();
                        let t = b.taut(Formula::implies(
                            fchain,
                            Formula::implies(
                                fk,
                                Formula::implies(fni, Formula::not(phi.clone())),
                            ),
                        ));
                        let s = b.mp(t, chain);
                        let s = b.mp(s, klt);
                        return Ok(b.mp(s, refuted));
                    }
                }
                Err(SynthError::CannotWitness("no counterexample".into()))
            }
        }
        Formula::ExistsLt(v, bound, body) => {
            if want {
                let m = synth.closed_value(bound)?;
                for x in 0..m {
                    let inst = body.substitute_numeral(*v, x);
                    if eval_with_ctx(synth, &inst, ctx)? {
                        let proven = prove_with_ctx(synth, b, &inst, true, ctx)?;
                        let klt =
                            synth.prove_closed(b, &Formula::Lt(Term::numeral(x), bound.clone()), true)?;
                        let both = b.and_intro(klt, proven);
                        let unb_body = Formula::and(
                            Formula::Lt(Term::Var(*v), bound.clone()),
                            (**body).clone(),
                        );
                        let unb = Formula::exists(*v, unb_body);
                        let fboth = b.formula(both).clone();
                        let intro = b.exists_intro(Formula::implies(fboth, unb.clone()));
                        let got = b.mp(intro, both);
                        let bdef = b.bounded_def(Formula::implies(unb, phi.clone()));
                        return Ok(b.mp(bdef, got));
                    }
                }
                Err(SynthError::CannotWitness("no witness".into()))
            } else {
                let neg_body = Formula::not((**body).clone());
                let all_neg =
                    synth.prove_bounded_forall(b, *v, bound, &neg_body, &mut |s, b2, inst| {
                        let Formula::Not(inner) = &inst else {
                            unreachable!()
                        };
                        prove_with_ctx(s, b2, inner, false, ctx)
                    })?;
                // reuse the closed-prover shape for the rest
                let unb_body = Formula::and(
                    Formula::Lt(Term::Var(*v), bound.clone()),
                    (**body).clone(),
                );
                let unb = Formula::exists(*v, unb_body.clone());
                let bot = Formula::falsum();
                let hyp = b.assume(unb_body.clone());
                let got_lt = b.and_elim(hyp, true);
                let got_body = b.and_elim(hyp, false);
                let bdefn = b.bounded_def(Formula::implies(
                    b.formula(all_neg).clone(),
                    Formula::forall(
                        *v,
                        Formula::implies(
                            Formula::Lt(Term::Var(*v), bound.clone()),
                            neg_body.clone(),
                        ),
                    ),
                ));
                let unbn = b.mp(bdefn, all_neg);
                let inst_neg = synth.forall_elim(b, unbn, &Term::Var(*v));
                let neg = b.mp(inst_neg, got_lt);
                let fb = b.formula(got_body).clone();
                let fn_ = b.formula(neg).clone();
                let t = b.taut(Formula::implies(fb, Formula::implies(fn_, bot.clone())));
                let s = b.mp(t, got_body);
                let botl = b.mp(s, neg);
                let imp = b.discharge(botl);
                let gen = b.gen(imp, *v);
                let elim = b.exists_elim(Formula::implies(
                    b.formula(gen).clone(),
                    Formula::implies(unb.clone(), bot.clone()),
                ));
                let refute_unb = b.mp(elim, gen);
                let not_bot = synth.prove_numeral_neq(b, 0, 1);
                let fe = b.formula(refute_unb).clone();
                let fnb = b.formula(not_bot).clone();
                let t2 = b.taut(Formula::implies(
                    fe,
                    Formula::implies(fnb, Formula::not(unb.clone())),
                ));
                let s2 = b.mp(t2, refute_unb);
                let not_unb = b.mp(s2, not_bot);
                let bdef = b.bounded_def(Formula::implies(phi.clone(), unb));
                Ok(b.contrapose(bdef, not_unb))
            }
        }
        _ => synth.prove_closed(b, phi, want),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    fn simple(phi: Formula) -> RecursionFormula {
        RecursionFormula::new(phi, SetVar(0), Var(0))
    }

    #[test]
    fn tautological_recursion_fills_everything() {
        let rf = simple(Formula::Eq(Term::var(0), Term::var(0)));
        let order = WellOrder::finite(3);
        let set = tr_compute(&rf, &order, 4, &Env::new(), &caps()).unwrap();
        assert_eq!(set.len(), 12);
        assert!(tr_check(&rf, &order, 2, &set, &Env::new(), &caps())
            .unwrap()
            .holds());
    }

    #[test]
    fn empty_recursion_is_empty() {
        let rf = simple(Formula::falsum());
        let order = WellOrder::finite(3);
        let set = tr_compute(&rf, &order, 4, &Env::new(), &caps()).unwrap();
        assert!(set.is_empty());
    }

    #[test]
    fn negation_of_stage_zero_alternates() {
        // φ(x, X) := ¬(⟨0, x⟩ ∈ X): stage 0 fills, later stages empty
        let rf = simple(Formula::not(Formula::In(
            Term::pair(Term::Zero, Term::var(0)),
            SetVar(0),
        )));
        let order = WellOrder::finite(3);
        let set = tr_compute(&rf, &order, 3, &Env::new(), &caps()).unwrap();
        for x in 0..3 {
            assert!(set.contains(0, x));
            assert!(!set.contains(1, x));
            assert!(!set.contains(2, x));
        }
    }

    #[test]
    fn check_detects_flipped_bits() {
        let rf = simple(Formula::Eq(Term::var(0), Term::var(0)));
        let order = WellOrder::finite(2);
        let mut set = tr_compute(&rf, &order, 2, &Env::new(), &caps()).unwrap();
        assert!(tr_check(&rf, &order, 1, &set, &Env::new(), &caps())
            .unwrap()
            .holds());
        // remove one pair
        set.content.remove(&(1, 0));
        let verdict = tr_check(&rf, &order, 1, &set, &Env::new(), &caps()).unwrap();
        assert_eq!(
            verdict,
            TrVerdict::Fails {
                stage: 1,
                element: 0
            }
        );
        // below 0 nothing is checked
        assert!(tr_check_below(&rf, &order, 0, &set, &Env::new(), &caps())
            .unwrap()
            .holds());
    }

    #[test]
    fn eq_upto_ignores_later_stages() {
        let order = WellOrder::finite(4);
        let mut a = StageSet::empty(order.clone(), 2);
        let mut b = StageSet::empty(order.clone(), 2);
        a.insert(1, 0);
        b.insert(1, 0);
        b.insert(2, 1); // differ at stage 2
        assert!(eq_upto(&a, &b, 2).unwrap());
        assert!(!eq_upto(&a, &b, 3).unwrap());
        assert!(eq_upto(&a, &a, 3).unwrap());
        // mismatched cutoffs are an error
        let c = StageSet::empty(order, 3);
        assert!(matches!(
            eq_upto(&a, &c, 2),
            Err(TrError::CutoffMismatch(2, 3))
        ));
    }

    #[test]
    fn hat_check_matches_direct_check() {
        // 1-stage, cutoff-2 universe: results agree with the plain check on
        // every candidate
        let rf = simple(Formula::Eq(Term::var(0), Term::Zero));
        let order = WellOrder::finite(1);
        for bits in 0..4u64 {
            let candidate = StageSet::from_bits(&order, 2, bits).unwrap();
            let hat = hat_tr_check(&rf, &order, 0, &candidate, &Env::new(), &caps(), 16)
                .unwrap()
                .holds();
            let plain = tr_check(&rf, &order, 0, &candidate, &Env::new(), &caps())
                .unwrap()
                .holds();
            assert_eq!(hat, plain, "bits {bits}");
        }
    }

    #[test]
    fn hat_check_accepts_the_computed_set() {
        let rf = simple(Formula::not(Formula::In(
            Term::pair(Term::Zero, Term::var(0)),
            SetVar(0),
        )));
        let order = WellOrder::finite(2);
        let set = tr_compute(&rf, &order, 2, &Env::new(), &caps()).unwrap();
        assert!(
            hat_tr_check(&rf, &order, 1, &set, &Env::new(), &caps(), 16)
                .unwrap()
                .holds()
        );
    }

    #[test]
    fn hat_check_refuses_large_universes() {
        let rf = simple(Formula::verum());
        let order = WellOrder::finite(3);
        let set = StageSet::empty(order.clone(), 8);
        assert!(matches!(
            hat_tr_check(&rf, &order, 0, &set, &Env::new(), &caps(), 16),
            Err(TrError::UniverseTooLarge { .. })
        ));
    }

    #[test]
    fn unfoldings_match_stages() {
        // spec example shape plus a couple more, n ≤ 3
        let formulas = vec![
            Formula::not(Formula::In(
                Term::pair(Term::Zero, Term::var(0)),
                SetVar(0),
            )),
            Formula::Eq(Term::var(0), Term::var(0)),
            Formula::falsum(),
            // x ∈ X at the previous stage of the same element:
            // ¬(⟨1,x⟩ ∈ X) ∨ ⟨0,x⟩ ∈ X
            Formula::or(
                Formula::not(Formula::In(
                    Term::pair(Term::One, Term::var(0)),
                    SetVar(0),
                )),
                Formula::In(Term::pair(Term::Zero, Term::var(0)), SetVar(0)),
            ),
        ];
        for phi in formulas {
            let rf = simple(phi);
            let n = 3u64;
            let order = WellOrder::finite(n + 1);
            let set = tr_compute(&rf, &order, 4, &Env::new(), &caps()).unwrap();
            for m in 0..=n {
                let unfolded = phi_unfold(&rf, m + 1);
                for x in 0..4u64 {
                    let val = evaluate(
                        &unfolded,
                        &Env::new().bind_num(Var(0), x),
                        &caps(),
                    )
                    .unwrap();
                    assert_eq!(
                        val,
                        ThreeValued::from_bool(set.contains(m, x)),
                        "mismatch at stage {m}, x={x}, φ = {:?}",
                        rf.formula
                    );
                }
            }
        }
    }

    #[test]
    fn unfold_base_cases() {
        let rf = simple(Formula::In(Term::pair(Term::Zero, Term::var(0)), SetVar(0)));
        assert_eq!(phi_unfold(&rf, 0), Formula::falsum());
        // one step replaces the atom by the empty disjunction = ⊥
        assert_eq!(phi_unfold(&rf, 1), Formula::falsum());
    }

    #[test]
    fn tilde_construction_matches_direct_computation() {
        use crate::certificate::CheckPolicy;
        use crate::descriptor::{OracleSet, SetDescriptor};
        use crate::ipc::{saturate_ipc, UniverseSpec};
        use crate::theory::{OracleTheory, TheorySpec};

        let theory = OracleTheory::new(
            TheorySpec::eca0(),
            OracleSet::Plain(SetDescriptor::empty()),
        );
        let order = WellOrder::cnf(CnfOrdinal::one()); // carrier {0, 1}
        let cutoff = 2u64;
        let cases = vec![
            simple(Formula::Eq(Term::var(0), Term::var(0))),
            simple(Formula::not(Formula::In(
                Term::pair(Term::Zero, Term::var(0)),
                SetVar(0),
            ))),
        ];
        for rf in cases {
            let direct = tr_compute(&rf, &order, cutoff, &Env::new(), &caps()).unwrap();
            // seed a table with a certificate for every true boxed pair
            let mut seeds = Vec::new();
            let mut extras = Vec::new();
            let elements = order.elements().unwrap();
            for &lam in &elements {
                let level = tilde_level(&order, rf.degree(), lam).unwrap();
                for k in 0..cutoff {
                    let boxf = tilde_box_formula(&rf, &order, lam, k, cutoff);
                    extras.push(boxf.clone());
                    if direct.contains(lam, k) {
                        let cert = tilde_seed_certificate(
                            &rf, &order, lam, k, cutoff, &theory, &caps(),
                        )
                        .unwrap_or_else(|e| panic!("seed failed for ({lam},{k}): {e}"));
                        assert_eq!(cert.conclusion(), Some(&boxf));
                        seeds.push((level, cert));
                    }
                }
            }
            let spec = UniverseSpec::bounded(64).with_extras(extras);
            let table = saturate_ipc(
                &theory,
                &order,
                &spec,
                3,
                200_000,
                &seeds,
                CheckPolicy::Sampled(2),
                None,
            )
            .unwrap();
            let rebuilt = tilde_tr_build(&rf, &order, &table, cutoff).unwrap();
            assert_eq!(rebuilt, direct, "mismatch for {:?}", rf.formula);
        }
    }

    #[test]
    fn tilde_build_needs_universe_coverage() {
        use crate::descriptor::{OracleSet, SetDescriptor};
        use crate::ipc::{saturate_simple, UniverseSpec};
        use crate::theory::{OracleTheory, TheorySpec};
        let theory = OracleTheory::new(
            TheorySpec::eca0(),
            OracleSet::Plain(SetDescriptor::empty()),
        );
        let order = WellOrder::cnf(CnfOrdinal::one());
        let rf = simple(Formula::Eq(Term::var(0), Term::var(0)));
        let table =
            saturate_simple(&theory, &order, &UniverseSpec::bounded(64), 3, 100_000).unwrap();
        assert!(matches!(
            tilde_tr_build(&rf, &order, &table, 2),
            Err(TrError::Coverage { .. })
        ));
    }

    #[test]
    fn relativize_counts_and_fixpoint() {
        let phi = Formula::and(
            Formula::In(Term::var(0), SetVar(0)),
            Formula::or(
                Formula::In(Term::pair(Term::One, Term::var(0)), SetVar(0)),
                Formula::Eq(Term::var(0), Term::Zero),
            ),
        );
        let rf = simple(phi);
        let order = WellOrder::finite(3);
        let rel = relativize(&rf, &order, 2);
        // both set atoms rewritten: count the guards
        fn count_in(f: &Formula) -> usize {
            match f {
                Formula::In(_, _) => 1,
                _ => f.children().iter().map(|c| count_in(c)).sum(),
            }
        }
        assert_eq!(count_in(&rf.formula), 2);
        assert_eq!(count_in(&rel), 2);
        // formulas with no set atoms are unchanged
        let pure = simple(Formula::Eq(Term::var(0), Term::Zero));
        assert_eq!(relativize(&pure, &order, 1), pure.formula);
    }
}

//! Theory descriptors and axiom recognition.
//!
//! A theory is Robinson arithmetic (with exponentiation and pairing) plus a
//! comprehension schema and an induction form. Oracle theories extend a base
//! theory with the literal diagram of a decidable set and the set-existence
//! axiom for the oracle predicate.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::descriptor::OracleSet;
use crate::error::SchemaError;
use crate::formula::{classify, ClassKind, Formula};
use crate::ordinal::FiniteWellOrder;
use crate::proof::FinitaryProof;
use crate::term::{pair_code, unpair_code, ProjSide, SetVar, Term, Var};

/// Comprehension schema admitted by a theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComprehensionClass {
    Delta00,
    /// Δ⁰₁ instances, recognized through registered certified Σ/Π pairs.
    Delta01Certified,
    PiOmega,
}

/// Induction admitted by a theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InductionForm {
    /// The single set-induction axiom `Ind`.
    SetInduction,
    /// `Ind` plus induction axioms for Σ⁰₁ formulas.
    Sigma01,
}

/// A certified Δ⁰₁ comprehension instance: a Σ⁰₁ payload, a Π⁰₁ equivalent,
/// and a finitary proof of the (closed) equivalence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedDelta1 {
    pub sigma: Formula,
    pub pi: Formula,
    pub var: Var,
    pub proof: FinitaryProof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheorySpec {
    pub name: String,
    base_axioms: Vec<Formula>,
    pub comprehension: Option<ComprehensionClass>,
    pub induction: Option<InductionForm>,
    delta1_pairs: Vec<CertifiedDelta1>,
}

fn v(i: u32) -> Term {
    Term::var(i)
}

/// Named axioms of Q in this language, including the defining equations for
/// exponentiation, the order, and the pairing projections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QAx {
    OneSucc,
    OneNeZero,
    SuccNeZero,
    SuccInj,
    PredEx,
    AddZero,
    AddSucc,
    MulZero,
    MulSucc,
    ExpZero,
    ExpSucc,
    LtZero,
    LtSuccSplit,
    LtSuccWeak,
    LtSuccSelf,
    ProjPairL,
    ProjPairR,
}

pub const Q_AXIOM_LIST: [QAx; 17] = [
    QAx::OneSucc,
    QAx::OneNeZero,
    QAx::SuccNeZero,
    QAx::SuccInj,
    QAx::PredEx,
    QAx::AddZero,
    QAx::AddSucc,
    QAx::MulZero,
    QAx::MulSucc,
    QAx::ExpZero,
    QAx::ExpSucc,
    QAx::LtZero,
    QAx::LtSuccSplit,
    QAx::LtSuccWeak,
    QAx::LtSuccSelf,
    QAx::ProjPairL,
    QAx::ProjPairR,
];

pub fn q_axiom(ax: QAx) -> Formula {
    let x = Var(0);
    let y = Var(1);
    let succ = |t: Term| Term::add(t, Term::One);
    match ax {
        // 1 = 0 + 1
        QAx::OneSucc => Formula::Eq(Term::One, Term::add(Term::Zero, Term::One)),
        // ¬(1 = 0)
        QAx::OneNeZero => Formula::not(Formula::Eq(Term::One, Term::Zero)),
        // ∀x ¬(x + 1 = 0)
        QAx::SuccNeZero => {
            Formula::forall(x, Formula::not(Formula::Eq(succ(v(0)), Term::Zero)))
        }
        // ∀x∀y (x+1 = y+1 → x = y)
        QAx::SuccInj => Formula::forall(
            x,
            Formula::forall(
                y,
                Formula::implies(
                    Formula::Eq(succ(v(0)), succ(v(1))),
                    Formula::Eq(v(0), v(1)),
                ),
            ),
        ),
        // ∀x (¬(x = 0) → ∃y (x = y+1))
        QAx::PredEx => Formula::forall(
            x,
            Formula::implies(
                Formula::not(Formula::Eq(v(0), Term::Zero)),
                Formula::exists(y, Formula::Eq(v(0), succ(v(1)))),
            ),
        ),
        // ∀x (x + 0 = x)
        QAx::AddZero => Formula::forall(x, Formula::Eq(Term::add(v(0), Term::Zero), v(0))),
        // ∀x∀y (x + (y+1) = (x+y)+1)
        QAx::AddSucc => Formula::forall(
            x,
            Formula::forall(
                y,
                Formula::Eq(Term::add(v(0), succ(v(1))), succ(Term::add(v(0), v(1)))),
            ),
        ),
        // ∀x (x · 0 = 0)
        QAx::MulZero => {
            Formula::forall(x, Formula::Eq(Term::mul(v(0), Term::Zero), Term::Zero))
        }
        // ∀x∀y (x · (y+1) = x·y + x)
        QAx::MulSucc => Formula::forall(
            x,
            Formula::forall(
                y,
                Formula::Eq(
                    Term::mul(v(0), succ(v(1))),
                    Term::add(Term::mul(v(0), v(1)), v(0)),
                ),
            ),
        ),
        // ∀x (x ^ 0 = 1)
        QAx::ExpZero => Formula::forall(x, Formula::Eq(Term::exp(v(0), Term::Zero), Term::One)),
        // ∀x∀y (x ^ (y+1) = x^y · x)
        QAx::ExpSucc => Formula::forall(
            x,
            Formula::forall(
                y,
                Formula::Eq(
                    Term::exp(v(0), succ(v(1))),
                    Term::mul(Term::exp(v(0), v(1)), v(0)),
                ),
            ),
        ),
        // ∀x ¬(x < 0)
        QAx::LtZero => Formula::forall(x, Formula::not(Formula::Lt(v(0), Term::Zero))),
        // ∀x∀y (x < y+1 → x < y ∨ x = y)
        QAx::LtSuccSplit => Formula::forall(
            x,
            Formula::forall(
                y,
                Formula::implies(
                    Formula::Lt(v(0), succ(v(1))),
                    Formula::or(Formula::Lt(v(0), v(1)), Formula::Eq(v(0), v(1))),
                ),
            ),
        ),
        // ∀x∀y (x < y → x < y+1)
        QAx::LtSuccWeak => Formula::forall(
            x,
            Formula::forall(
                y,
                Formula::implies(Formula::Lt(v(0), v(1)), Formula::Lt(v(0), succ(v(1)))),
            ),
        ),
        // ∀x (x < x+1)
        QAx::LtSuccSelf => Formula::forall(x, Formula::Lt(v(0), succ(v(0)))),
        // ∀x∀y ((⟨x,y⟩)₀ = x)
        QAx::ProjPairL => Formula::forall(
            x,
            Formula::forall(
                y,
                Formula::Eq(Term::proj(ProjSide::Left, Term::pair(v(0), v(1))), v(0)),
            ),
        ),
        // ∀x∀y ((⟨x,y⟩)₁ = y)
        QAx::ProjPairR => Formula::forall(
            x,
            Formula::forall(
                y,
                Formula::Eq(Term::proj(ProjSide::Right, Term::pair(v(0), v(1))), v(1)),
            ),
        ),
    }
}

/// All Q axioms, universally closed.
pub fn q_axioms() -> Vec<Formula> {
    Q_AXIOM_LIST.iter().map(|ax| q_axiom(*ax)).collect()
}

/// The set-induction axiom `Ind`, closed.
pub fn ind_axiom() -> Formula {
    let x = Var(0);
    let set = SetVar(0);
    Formula::forall_set(
        set,
        Formula::implies(
            Formula::and(
                Formula::In(Term::Zero, set),
                Formula::forall(
                    x,
                    Formula::implies(
                        Formula::In(v(0), set),
                        Formula::In(Term::add(v(0), Term::One), set),
                    ),
                ),
            ),
            Formula::forall(x, Formula::In(v(0), set)),
        ),
    )
}

/// The set-existence axiom `∃X ∀x (x ∈ X ↔ 𝔒(x))` with canonical variables.
pub fn set_existence_axiom() -> Formula {
    let x = Var(0);
    let set = SetVar(0);
    Formula::exists_set(
        set,
        Formula::forall(x, Formula::iff(Formula::In(v(0), set), Formula::Oracle(v(0)))),
    )
}

impl TheorySpec {
    fn new(
        name: &str,
        comprehension: Option<ComprehensionClass>,
        induction: Option<InductionForm>,
    ) -> TheorySpec {
        let mut base_axioms = q_axioms();
        if induction.is_some() {
            base_axioms.push(ind_axiom());
        }
        TheorySpec {
            name: name.to_string(),
            base_axioms,
            comprehension,
            induction,
            delta1_pairs: vec![],
        }
    }

    pub fn q() -> TheorySpec {
        TheorySpec::new("Q", None, None)
    }

    pub fn eca0() -> TheorySpec {
        TheorySpec::new(
            "ECA0",
            Some(ComprehensionClass::Delta00),
            Some(InductionForm::SetInduction),
        )
    }

    pub fn rca0_star() -> TheorySpec {
        TheorySpec::new(
            "RCA0*",
            Some(ComprehensionClass::Delta01Certified),
            Some(InductionForm::SetInduction),
        )
    }

    pub fn rca0() -> TheorySpec {
        TheorySpec::new(
            "RCA0",
            Some(ComprehensionClass::Delta01Certified),
            Some(InductionForm::Sigma01),
        )
    }

    pub fn aca0() -> TheorySpec {
        TheorySpec::new(
            "ACA0",
            Some(ComprehensionClass::PiOmega),
            Some(InductionForm::SetInduction),
        )
    }

    pub fn by_name(name: &str) -> Option<TheorySpec> {
        match name {
            "q" | "Q" => Some(TheorySpec::q()),
            "eca0" | "ECA0" => Some(TheorySpec::eca0()),
            "rca0s" | "rca0*" | "RCA0*" => Some(TheorySpec::rca0_star()),
            "rca0" | "RCA0" => Some(TheorySpec::rca0()),
            "aca0" | "ACA0" => Some(TheorySpec::aca0()),
            _ => None,
        }
    }

    pub fn base_axioms(&self) -> &[Formula] {
        &self.base_axioms
    }

    pub fn delta1_pairs(&self) -> &[CertifiedDelta1] {
        &self.delta1_pairs
    }

    pub(crate) fn push_delta1(&mut self, pair: CertifiedDelta1) {
        self.delta1_pairs.push(pair);
    }

    fn comprehension_admits(&self, payload: &Formula) -> bool {
        let Some(class) = self.comprehension else {
            return false;
        };
        let c = classify(payload);
        if c.oracle_extended || !c.is_arithmetic() {
            return false;
        }
        match class {
            ComprehensionClass::Delta00 => c.is_delta00(),
            ComprehensionClass::Delta01Certified => {
                c.is_delta00() || self.delta1_pairs.iter().any(|p| &p.sigma == payload)
            }
            ComprehensionClass::PiOmega => true,
        }
    }

    fn induction_admits(&self, payload: &Formula) -> bool {
        let Some(form) = self.induction else {
            return false;
        };
        let c = classify(payload);
        if c.oracle_extended {
            return false;
        }
        match form {
            // Only the designated set-induction shape x ∈ X.
            InductionForm::SetInduction => {
                matches!(payload, Formula::In(Term::Var(_), _))
            }
            InductionForm::Sigma01 => {
                c.is_arithmetic() && c.sigma0 <= 1
            }
        }
    }

    /// Recognizes base-theory axioms: the fixed list, pairing diagram facts,
    /// comprehension instances, and induction instances.
    pub fn is_base_axiom(&self, phi: &Formula) -> bool {
        if self.base_axioms.contains(phi) {
            return true;
        }
        if is_pair_diagram_fact(phi) {
            return true;
        }
        if let Some((payload, _x, _set)) = match_comprehension(phi) {
            if self.comprehension_admits(&payload) {
                return true;
            }
        }
        if let Some((payload, _x)) = match_induction(phi) {
            if self.induction_admits(&payload) {
                return true;
            }
        }
        false
    }
}

/// `⟨a̅, b̅⟩ = c̅` with `c` the pairing code of `(a, b)` — the numeral diagram
/// of the pairing pseudo-term.
fn is_pair_diagram_fact(phi: &Formula) -> bool {
    let Formula::Eq(lhs, rhs) = phi else {
        return false;
    };
    let Term::Pair(a, b) = lhs else {
        return false;
    };
    let (Some(a), Some(b)) = (a.as_numeral(), b.as_numeral()) else {
        return false;
    };
    let Some(c) = rhs.as_numeral() else {
        return false;
    };
    pair_code(&BigUint::from(a), &BigUint::from(b)) == BigUint::from(c)
}

/// Strips leading universal closures (both sorts).
fn strip_closure(phi: &Formula) -> &Formula {
    let mut f = phi;
    loop {
        match f {
            Formula::Forall(_, body) | Formula::ForallSet(_, body) => f = body,
            _ => return f,
        }
    }
}

fn match_iff(phi: &Formula) -> Option<(&Formula, &Formula)> {
    let Formula::And(l, r) = phi else { return None };
    let Formula::Implies(a, b) = &**l else {
        return None;
    };
    let Formula::Implies(b2, a2) = &**r else {
        return None;
    };
    if a == a2 && b == b2 {
        Some((a, b))
    } else {
        None
    }
}

/// Matches `∃X ∀x (x ∈ X ↔ ψ(x))` under any universal closure and returns
/// `(ψ, x, X)` when `X` is not free in `ψ`.
pub fn match_comprehension(phi: &Formula) -> Option<(Formula, Var, SetVar)> {
    let core = strip_closure(phi);
    let Formula::ExistsSet(set, body) = core else {
        return None;
    };
    let Formula::Forall(x, inner) = &**body else {
        return None;
    };
    let (lhs, rhs) = match_iff(inner)?;
    let Formula::In(Term::Var(xv), set2) = lhs else {
        return None;
    };
    if xv != x || set2 != set {
        return None;
    }
    if rhs.free_set_vars().contains(set) {
        return None;
    }
    Some((rhs.clone(), *x, *set))
}

/// Matches `(φ(0) ∧ ∀x(φ(x) → φ(x+1))) → ∀x φ(x)` under closure, returning
/// `(φ, x)`.
pub fn match_induction(phi: &Formula) -> Option<(Formula, Var)> {
    let core = strip_closure(phi);
    let Formula::Implies(prem, concl) = core else {
        return None;
    };
    let Formula::Forall(x, body) = &**concl else {
        return None;
    };
    let Formula::And(base, step) = &**prem else {
        return None;
    };
    if **base != body.substitute_term(*x, &Term::Zero) {
        return None;
    }
    let Formula::Forall(x2, step_body) = &**step else {
        return None;
    };
    if x2 != x {
        return None;
    }
    let Formula::Implies(sl, sr) = &**step_body else {
        return None;
    };
    if sl != body {
        return None;
    }
    let succ = Term::add(Term::Var(*x), Term::One);
    if **sr != body.substitute_term(*x, &succ) {
        return None;
    }
    Some(((**body).clone(), *x))
}

/// An oracle theory `T|A`: base theory plus the literal diagram of `A` plus
/// the set-existence axiom. `extra_axioms` is a test hook for seeding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleTheory {
    pub base: TheorySpec,
    pub oracle: OracleSet,
    pub extra_axioms: Vec<Formula>,
}

impl OracleTheory {
    pub fn new(base: TheorySpec, oracle: OracleSet) -> OracleTheory {
        OracleTheory {
            base,
            oracle,
            extra_axioms: vec![],
        }
    }

    pub fn with_extra(mut self, axioms: Vec<Formula>) -> OracleTheory {
        self.extra_axioms = axioms;
        self
    }

    /// The four-clause axiom recognizer: base axiom, positive oracle literal,
    /// negative oracle literal, or the set-existence axiom.
    pub fn is_axiom(&self, phi: &Formula) -> bool {
        if self.base.is_base_axiom(phi) || self.extra_axioms.contains(phi) {
            return true;
        }
        match phi {
            Formula::Oracle(t) => t
                .as_numeral()
                .map(|n| self.oracle.contains_u64(n))
                .unwrap_or(false),
            Formula::Not(inner) => {
                if let Formula::Oracle(t) = &**inner {
                    t.as_numeral()
                        .map(|n| !self.oracle.contains_u64(n))
                        .unwrap_or(false)
                } else {
                    false
                }
            }
            _ => is_set_existence_shape(phi),
        }
    }

    /// Registers a certified Δ⁰₁ comprehension pair after validating the
    /// attached equivalence proof against this theory.
    pub fn register_delta1(&mut self, pair: CertifiedDelta1) -> Result<(), String> {
        let cs = classify(&pair.sigma);
        if !(cs.is_arithmetic() && cs.sigma0 <= 1 && !cs.oracle_extended) {
            return Err(format!("payload is not Sigma^0_1: {}", cs.kind));
        }
        let cp = classify(&pair.pi);
        if !(cp.is_arithmetic() && cp.pi0 <= 1 && !cp.oracle_extended) {
            return Err(format!("companion is not Pi^0_1: {}", cp.kind));
        }
        let goal = Formula::iff(pair.sigma.clone(), pair.pi.clone()).close_universally();
        crate::proof::check_proof(self, &pair.proof, &goal)
            .map_err(|e| format!("equivalence proof rejected: {e}"))?;
        self.base.push_delta1(pair);
        Ok(())
    }
}

fn is_set_existence_shape(phi: &Formula) -> bool {
    let Formula::ExistsSet(set, body) = phi else {
        return false;
    };
    let Formula::Forall(x, inner) = &**body else {
        return false;
    };
    let Some((lhs, rhs)) = match_iff(inner) else {
        return false;
    };
    matches!(lhs, Formula::In(Term::Var(xv), s) if xv == x && s == set)
        && matches!(rhs, Formula::Oracle(Term::Var(xv)) if xv == x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemaKind {
    Comprehension,
    Induction,
    TransfiniteInduction,
}

/// Renders `x ∈ |Λ|` as an explicit equality disjunction over a finite carrier.
pub fn finite_carrier_formula(order: &FiniteWellOrder, t: &Term) -> Formula {
    Formula::disj(
        order
            .carrier
            .iter()
            .map(|&a| Formula::Eq(t.clone(), Term::numeral(a)))
            .collect(),
    )
}

/// Renders `s <_Λ t` as an explicit disjunction of pair equalities.
pub fn finite_less_formula(order: &FiniteWellOrder, s: &Term, t: &Term) -> Formula {
    Formula::disj(
        order
            .relation
            .iter()
            .map(|&(a, b)| {
                Formula::and(
                    Formula::Eq(s.clone(), Term::numeral(a)),
                    Formula::Eq(t.clone(), Term::numeral(b)),
                )
            })
            .collect(),
    )
}

/// Emits the closed schema instance for the requested kind.
///
/// Comprehension: `∃X ∀x (x ∈ X ↔ φ(x))`, universally closed over parameters.
/// Induction: `(φ(0) ∧ ∀x(φ(x) → φ(x+1))) → ∀x φ(x)`, closed.
/// Transfinite induction: the displayed axiom over an explicit finite order,
/// with carrier and order atoms rendered as equality disjunctions.
pub fn schema_instance(
    theory: &TheorySpec,
    kind: SchemaKind,
    payload: &Formula,
    var: Var,
    order: Option<&FiniteWellOrder>,
) -> Result<Formula, SchemaError> {
    let class = classify(payload);
    match kind {
        SchemaKind::Comprehension => {
            if class.oracle_extended {
                return Err(SchemaError::OracleInPayload);
            }
            if !theory.comprehension_admits(payload) {
                return Err(SchemaError::PayloadOutsideClass {
                    schema: format!("{}-CA", theory.name),
                    required: match theory.comprehension {
                        Some(ComprehensionClass::Delta00) => ClassKind::Delta00.to_string(),
                        Some(ComprehensionClass::Delta01Certified) => {
                            "certified Delta^0_1".to_string()
                        }
                        Some(ComprehensionClass::PiOmega) => ClassKind::Pi0Omega.to_string(),
                        None => "(no comprehension)".to_string(),
                    },
                    found: class.kind.to_string(),
                });
            }
            let set = fresh_set_var(payload);
            if payload.free_set_vars().contains(&set) {
                return Err(SchemaError::SetVarFreeInPayload(set));
            }
            let body = Formula::forall(
                var,
                Formula::iff(Formula::In(Term::Var(var), set), payload.clone()),
            );
            let mut out = Formula::exists_set(set, body);
            out = out.close_universally();
            for sv in out.free_set_vars().into_iter().rev() {
                out = Formula::forall_set(sv, out);
            }
            Ok(out)
        }
        SchemaKind::Induction => {
            if !theory.induction_admits(payload) {
                return Err(SchemaError::PayloadOutsideClass {
                    schema: format!("{}-induction", theory.name),
                    required: match theory.induction {
                        Some(InductionForm::SetInduction) => "x ∈ X".to_string(),
                        Some(InductionForm::Sigma01) => "Sigma^0_1".to_string(),
                        None => "(no induction)".to_string(),
                    },
                    found: class.kind.to_string(),
                });
            }
            let base = payload.substitute_term(var, &Term::Zero);
            let step = Formula::forall(
                var,
                Formula::implies(
                    payload.clone(),
                    payload.substitute_term(var, &Term::add(Term::Var(var), Term::One)),
                ),
            );
            let mut out = Formula::implies(
                Formula::and(base, step),
                Formula::forall(var, payload.clone()),
            );
            out = out.close_universally();
            for sv in out.free_set_vars().into_iter().rev() {
                out = Formula::forall_set(sv, out);
            }
            Ok(out)
        }
        SchemaKind::TransfiniteInduction => {
            if !class.is_arithmetic() {
                return Err(SchemaError::PayloadOutsideClass {
                    schema: "TI".to_string(),
                    required: ClassKind::Pi0Omega.to_string(),
                    found: class.kind.to_string(),
                });
            }
            let order = order.ok_or(SchemaError::TiNeedsFiniteOrder)?;
            Ok(ti_formula_finite(order, payload, var))
        }
    }
}

/// The transfinite induction axiom for `φ` along an explicit finite order:
/// `(∀ξ∈|Λ| ((∀ζ (ζ∈|Λ| ∧ ζ<ξ → φ(ζ))) → φ(ξ))) → ∀ξ (ξ∈|Λ| → φ(ξ))`.
pub fn ti_formula_finite(order: &FiniteWellOrder, payload: &Formula, var: Var) -> Formula {
    let free = payload.free_vars();
    let mut pick = var.0 + 1;
    while free.contains(&Var(pick)) {
        pick += 1;
    }
    let zeta = Var(pick);
    let xi_t = Term::Var(var);
    let zeta_t = Term::Var(zeta);
    let phi_zeta = payload.substitute_term(var, &zeta_t);
    let progressive = Formula::forall(
        var,
        Formula::implies(
            finite_carrier_formula(order, &xi_t),
            Formula::implies(
                Formula::forall(
                    zeta,
                    Formula::implies(
                        Formula::and(
                            finite_carrier_formula(order, &zeta_t),
                            finite_less_formula(order, &zeta_t, &xi_t),
                        ),
                        phi_zeta,
                    ),
                ),
                payload.clone(),
            ),
        ),
    );
    let conclusion = Formula::forall(
        var,
        Formula::implies(finite_carrier_formula(order, &xi_t), payload.clone()),
    );
    Formula::implies(progressive, conclusion)
}

fn fresh_set_var(payload: &Formula) -> SetVar {
    let mut max = 0u32;
    for sv in payload.free_set_vars() {
        max = max.max(sv.0 + 1);
    }
    SetVar(max)
}

/// The oracle "bar" substitution: replaces `t ∈ X` atoms by oracle atoms,
/// either plain `𝔒(t)` or tuple-coded `𝔒(⟨i, t⟩)`.
pub fn bar_substitute(phi: &Formula, set: SetVar, component: Option<u64>) -> Formula {
    phi.map_set_atoms(set, &|t| match component {
        None => Formula::Oracle(t.clone()),
        Some(i) => Formula::Oracle(Term::pair(Term::numeral(i), t.clone())),
    })
}

/// Value-level membership in an order-coded oracle is used enough in tests to
/// deserve helpers: codes of `x ∈ |Λ|` and `a <_Λ b` atoms.
pub fn order_atom_values(order_element: u64) -> BigUint {
    OracleSet::order_member_code(order_element)
}

pub fn order_less_values(a: u64, b: u64) -> BigUint {
    OracleSet::order_less_code(a, b)
}

/// Decodes a pairing code into components, for diagnostics.
pub fn unpair_u64(code: u64) -> Option<(u64, u64)> {
    let (a, b) = unpair_code(&BigUint::from(code));
    Some((a.to_u64()?, b.to_u64()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::SetDescriptor;

    fn eca_over(set: SetDescriptor) -> OracleTheory {
        OracleTheory::new(TheorySpec::eca0(), OracleSet::Plain(set))
    }

    #[test]
    fn oracle_literals_follow_the_descriptor() {
        let t = eca_over(SetDescriptor::singleton(2));
        assert!(t.is_axiom(&Formula::Oracle(Term::numeral(2))));
        assert!(!t.is_axiom(&Formula::not(Formula::Oracle(Term::numeral(2)))));
        assert!(t.is_axiom(&Formula::not(Formula::Oracle(Term::numeral(3)))));
        // non-numeral argument is not a literal axiom (0+2 denotes 2 but is
        // not the canonical numeral)
        assert!(!t.is_axiom(&Formula::Oracle(Term::add(Term::Zero, Term::numeral(2)))));
    }

    #[test]
    fn set_existence_is_an_axiom_for_every_oracle() {
        for set in [
            SetDescriptor::singleton(2),
            SetDescriptor::empty(),
            SetDescriptor::evens(),
        ] {
            let t = eca_over(set);
            assert!(t.is_axiom(&set_existence_axiom()));
        }
    }

    #[test]
    fn axiom_recognition_is_stable_under_reencoding() {
        let a = SetDescriptor::evens();
        let b = SetDescriptor::new(vec![true, false], vec![true, false]);
        assert!(a.eq_semantic(&b));
        let ta = eca_over(a);
        let tb = eca_over(b);
        for n in 0..20 {
            let pos = Formula::Oracle(Term::numeral(n));
            let neg = Formula::not(pos.clone());
            assert_eq!(ta.is_axiom(&pos), tb.is_axiom(&pos));
            assert_eq!(ta.is_axiom(&neg), tb.is_axiom(&neg));
        }
    }

    #[test]
    fn comprehension_schema_and_recognition() {
        let eca = TheorySpec::eca0();
        // CA over Δ⁰₀ payload x < 3
        let payload = Formula::Lt(Term::var(0), Term::numeral(3));
        let inst = schema_instance(&eca, SchemaKind::Comprehension, &payload, Var(0), None)
            .expect("Delta00 payload admitted");
        assert!(eca.is_base_axiom(&inst));
        // Σ⁰₁ payload rejected by ECA₀ but admitted by ACA₀
        let sigma = Formula::exists(Var(1), Formula::Eq(Term::var(0), Term::var(1)));
        assert!(matches!(
            schema_instance(&eca, SchemaKind::Comprehension, &sigma, Var(0), None),
            Err(SchemaError::PayloadOutsideClass { .. })
        ));
        let aca = TheorySpec::aca0();
        let inst2 = schema_instance(&aca, SchemaKind::Comprehension, &sigma, Var(0), None).unwrap();
        assert!(aca.is_base_axiom(&inst2));
        assert!(!eca.is_base_axiom(&inst2));
    }

    #[test]
    fn induction_schema_instances() {
        let eca = TheorySpec::eca0();
        let set_payload = Formula::In(Term::var(0), SetVar(0));
        let ind = schema_instance(&eca, SchemaKind::Induction, &set_payload, Var(0), None).unwrap();
        assert!(eca.is_base_axiom(&ind));
        // Σ⁰₁ induction is RCA₀ only
        let sigma = Formula::exists(Var(1), Formula::Eq(Term::var(0), Term::var(1)));
        assert!(schema_instance(&eca, SchemaKind::Induction, &sigma, Var(0), None).is_err());
        let rca = TheorySpec::rca0();
        let ind2 = schema_instance(&rca, SchemaKind::Induction, &sigma, Var(0), None).unwrap();
        assert!(rca.is_base_axiom(&ind2));
    }

    #[test]
    fn recognizers_nest_from_eca0_to_aca0() {
        let eca = TheorySpec::eca0();
        let aca = TheorySpec::aca0();
        let payload = Formula::Lt(Term::var(0), Term::numeral(3));
        let inst =
            schema_instance(&eca, SchemaKind::Comprehension, &payload, Var(0), None).unwrap();
        assert!(aca.is_base_axiom(&inst));
        for ax in eca.base_axioms() {
            assert!(aca.is_base_axiom(ax));
        }
    }

    #[test]
    fn ti_formula_over_finite_order() {
        let order = FiniteWellOrder::initial_segment(2);
        let payload = Formula::Lt(Term::var(0), Term::numeral(5));
        let ti = ti_formula_finite(&order, &payload, Var(0));
        // Evaluates to true in the standard model under a small cap: the
        // progressive premise fails (capped ∀ is never confirmed) or the
        // conclusion holds; just check it is a sentence and evaluates.
        assert!(ti.is_sentence());
    }

    #[test]
    fn pair_diagram_recognition() {
        let t = eca_over(SetDescriptor::empty());
        let fact = Formula::Eq(
            Term::pair(Term::numeral(1), Term::numeral(2)),
            Term::numeral(8),
        );
        assert!(t.is_axiom(&fact));
        let wrong = Formula::Eq(
            Term::pair(Term::numeral(1), Term::numeral(2)),
            Term::numeral(9),
        );
        assert!(!t.is_axiom(&wrong));
    }
}

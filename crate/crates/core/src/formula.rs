//! Two-sorted formulas of second-order arithmetic with an oracle atom, their
//! free-variable bookkeeping, substitution, classification into the
//! arithmetic/analytic hierarchy, and negation normal form.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::ClassifyError;
use crate::term::{SetVar, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// t = s
    Eq(Term, Term),
    /// t < s
    Lt(Term, Term),
    /// t ∈ X
    In(Term, SetVar),
    /// Oracle atom 𝔒(t)
    Oracle(Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// ∀v < bound. body (bound must not contain v)
    ForallLt(Var, Term, Box<Formula>),
    /// ∃v < bound. body
    ExistsLt(Var, Term, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
    ForallSet(SetVar, Box<Formula>),
    ExistsSet(SetVar, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }
    pub fn forall(v: Var, f: Formula) -> Formula {
        Formula::Forall(v, Box::new(f))
    }
    pub fn exists(v: Var, f: Formula) -> Formula {
        Formula::Exists(v, Box::new(f))
    }
    pub fn forall_lt(v: Var, bound: Term, f: Formula) -> Formula {
        Formula::ForallLt(v, bound, Box::new(f))
    }
    pub fn exists_lt(v: Var, bound: Term, f: Formula) -> Formula {
        Formula::ExistsLt(v, bound, Box::new(f))
    }
    pub fn forall_set(v: SetVar, f: Formula) -> Formula {
        Formula::ForallSet(v, Box::new(f))
    }
    pub fn exists_set(v: SetVar, f: Formula) -> Formula {
        Formula::ExistsSet(v, Box::new(f))
    }

    /// ⊥ is fixed as `0 = 1`.
    pub fn falsum() -> Formula {
        Formula::Eq(Term::Zero, Term::One)
    }

    /// ⊤ as `0 = 0`.
    pub fn verum() -> Formula {
        Formula::Eq(Term::Zero, Term::Zero)
    }

    /// Conjunction of a nonempty list; empty list gives ⊤.
    pub fn conj(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::verum(),
            1 => fs.pop().unwrap(),
            _ => {
                let mut it = fs.into_iter();
                let first = it.next().unwrap();
                it.fold(first, Formula::and)
            }
        }
    }

    /// Disjunction of a list; empty list gives ⊥.
    pub fn disj(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::falsum(),
            1 => fs.pop().unwrap(),
            _ => {
                let mut it = fs.into_iter();
                let first = it.next().unwrap();
                it.fold(first, Formula::or)
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    fn collect_free_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Eq(a, b) | Formula::Lt(a, b) => {
                a.collect_free_vars(out);
                b.collect_free_vars(out);
            }
            Formula::In(t, _) | Formula::Oracle(t) => t.collect_free_vars(out),
            Formula::Not(f) => f.collect_free_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free_vars(out);
                b.collect_free_vars(out);
            }
            Formula::ForallLt(v, bound, body) | Formula::ExistsLt(v, bound, body) => {
                bound.collect_free_vars(out);
                let mut inner = BTreeSet::new();
                body.collect_free_vars(&mut inner);
                inner.remove(v);
                out.extend(inner);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let mut inner = BTreeSet::new();
                body.collect_free_vars(&mut inner);
                inner.remove(v);
                out.extend(inner);
            }
            Formula::ForallSet(_, body) | Formula::ExistsSet(_, body) => {
                body.collect_free_vars(out)
            }
        }
    }

    pub fn free_set_vars(&self) -> BTreeSet<SetVar> {
        let mut out = BTreeSet::new();
        self.collect_free_set_vars(&mut out);
        out
    }

    fn collect_free_set_vars(&self, out: &mut BTreeSet<SetVar>) {
        match self {
            Formula::Eq(_, _) | Formula::Lt(_, _) | Formula::Oracle(_) => {}
            Formula::In(_, x) => {
                out.insert(*x);
            }
            Formula::Not(f) => f.collect_free_set_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free_set_vars(out);
                b.collect_free_set_vars(out);
            }
            Formula::ForallLt(_, _, body)
            | Formula::ExistsLt(_, _, body)
            | Formula::Forall(_, body)
            | Formula::Exists(_, body) => body.collect_free_set_vars(out),
            Formula::ForallSet(x, body) | Formula::ExistsSet(x, body) => {
                let mut inner = BTreeSet::new();
                body.collect_free_set_vars(&mut inner);
                inner.remove(x);
                out.extend(inner);
            }
        }
    }

    pub fn contains_oracle(&self) -> bool {
        match self {
            Formula::Oracle(_) => true,
            Formula::Eq(_, _) | Formula::Lt(_, _) | Formula::In(_, _) => false,
            Formula::Not(f) => f.contains_oracle(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.contains_oracle() || b.contains_oracle()
            }
            Formula::ForallLt(_, _, body)
            | Formula::ExistsLt(_, _, body)
            | Formula::Forall(_, body)
            | Formula::Exists(_, body)
            | Formula::ForallSet(_, body)
            | Formula::ExistsSet(_, body) => body.contains_oracle(),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// All bound variables (both quantifier kinds), for freshness choices.
    pub fn bound_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_bound_vars(&mut out);
        out
    }

    fn collect_bound_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Eq(_, _) | Formula::Lt(_, _) | Formula::In(_, _) | Formula::Oracle(_) => {}
            Formula::Not(f) => f.collect_bound_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_bound_vars(out);
                b.collect_bound_vars(out);
            }
            Formula::ForallLt(v, _, body)
            | Formula::ExistsLt(v, _, body)
            | Formula::Forall(v, body)
            | Formula::Exists(v, body) => {
                out.insert(*v);
                body.collect_bound_vars(out);
            }
            Formula::ForallSet(_, body) | Formula::ExistsSet(_, body) => {
                body.collect_bound_vars(out)
            }
        }
    }

    /// A first-order variable index unused anywhere in the formula.
    pub fn fresh_var(&self) -> Var {
        let mut max = 0u32;
        for v in self.free_vars().iter().chain(self.bound_vars().iter()) {
            max = max.max(v.0 + 1);
        }
        Var(max)
    }

    /// Is `t` free for `v` in `self` (substitution causes no capture)?
    pub fn free_for(&self, v: Var, t: &Term) -> bool {
        let tvars = t.free_vars();
        self.free_for_inner(v, &tvars)
    }

    fn free_for_inner(&self, v: Var, tvars: &BTreeSet<Var>) -> bool {
        match self {
            Formula::Eq(_, _) | Formula::Lt(_, _) | Formula::In(_, _) | Formula::Oracle(_) => true,
            Formula::Not(f) => f.free_for_inner(v, tvars),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.free_for_inner(v, tvars) && b.free_for_inner(v, tvars)
            }
            Formula::ForallLt(w, _, body)
            | Formula::ExistsLt(w, _, body)
            | Formula::Forall(w, body)
            | Formula::Exists(w, body) => {
                if *w == v {
                    true // v is not free below
                } else if tvars.contains(w) && body.free_vars().contains(&v) {
                    false
                } else {
                    body.free_for_inner(v, tvars)
                }
            }
            Formula::ForallSet(_, body) | Formula::ExistsSet(_, body) => {
                body.free_for_inner(v, tvars)
            }
        }
    }

    /// Substitutes `t` for every free occurrence of `v`. Panics on capture;
    /// callers substituting open terms must check [`Formula::free_for`] first.
    pub fn substitute_term(&self, v: Var, t: &Term) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(a.substitute(v, t), b.substitute(v, t)),
            Formula::Lt(a, b) => Formula::Lt(a.substitute(v, t), b.substitute(v, t)),
            Formula::In(s, x) => Formula::In(s.substitute(v, t), *x),
            Formula::Oracle(s) => Formula::Oracle(s.substitute(v, t)),
            Formula::Not(f) => Formula::not(f.substitute_term(v, t)),
            Formula::And(a, b) => Formula::and(a.substitute_term(v, t), b.substitute_term(v, t)),
            Formula::Or(a, b) => Formula::or(a.substitute_term(v, t), b.substitute_term(v, t)),
            Formula::Implies(a, b) => {
                Formula::implies(a.substitute_term(v, t), b.substitute_term(v, t))
            }
            Formula::ForallLt(w, bound, body) => {
                let bound = bound.substitute(v, t);
                if *w == v {
                    Formula::ForallLt(*w, bound, body.clone())
                } else {
                    assert!(
                        !t.free_vars().contains(w) || !body.free_vars().contains(&v),
                        "variable capture in substitution"
                    );
                    Formula::forall_lt(*w, bound, body.substitute_term(v, t))
                }
            }
            Formula::ExistsLt(w, bound, body) => {
                let bound = bound.substitute(v, t);
                if *w == v {
                    Formula::ExistsLt(*w, bound, body.clone())
                } else {
                    assert!(
                        !t.free_vars().contains(w) || !body.free_vars().contains(&v),
                        "variable capture in substitution"
                    );
                    Formula::exists_lt(*w, bound, body.substitute_term(v, t))
                }
            }
            Formula::Forall(w, body) => {
                if *w == v {
                    self.clone()
                } else {
                    assert!(
                        !t.free_vars().contains(w) || !body.free_vars().contains(&v),
                        "variable capture in substitution"
                    );
                    Formula::forall(*w, body.substitute_term(v, t))
                }
            }
            Formula::Exists(w, body) => {
                if *w == v {
                    self.clone()
                } else {
                    assert!(
                        !t.free_vars().contains(w) || !body.free_vars().contains(&v),
                        "variable capture in substitution"
                    );
                    Formula::exists(*w, body.substitute_term(v, t))
                }
            }
            Formula::ForallSet(x, body) => Formula::forall_set(*x, body.substitute_term(v, t)),
            Formula::ExistsSet(x, body) => Formula::exists_set(*x, body.substitute_term(v, t)),
        }
    }

    /// Renames a free set variable.
    pub fn substitute_set_var(&self, from: SetVar, to: SetVar) -> Formula {
        match self {
            Formula::Eq(_, _) | Formula::Lt(_, _) | Formula::Oracle(_) => self.clone(),
            Formula::In(t, x) => {
                if *x == from {
                    Formula::In(t.clone(), to)
                } else {
                    self.clone()
                }
            }
            Formula::Not(f) => Formula::not(f.substitute_set_var(from, to)),
            Formula::And(a, b) => {
                Formula::and(a.substitute_set_var(from, to), b.substitute_set_var(from, to))
            }
            Formula::Or(a, b) => {
                Formula::or(a.substitute_set_var(from, to), b.substitute_set_var(from, to))
            }
            Formula::Implies(a, b) => Formula::implies(
                a.substitute_set_var(from, to),
                b.substitute_set_var(from, to),
            ),
            Formula::ForallLt(v, bound, body) => {
                Formula::forall_lt(*v, bound.clone(), body.substitute_set_var(from, to))
            }
            Formula::ExistsLt(v, bound, body) => {
                Formula::exists_lt(*v, bound.clone(), body.substitute_set_var(from, to))
            }
            Formula::Forall(v, body) => Formula::forall(*v, body.substitute_set_var(from, to)),
            Formula::Exists(v, body) => Formula::exists(*v, body.substitute_set_var(from, to)),
            Formula::ForallSet(x, body) => {
                if *x == from {
                    self.clone()
                } else {
                    assert!(*x != to, "set variable capture in renaming");
                    Formula::forall_set(*x, body.substitute_set_var(from, to))
                }
            }
            Formula::ExistsSet(x, body) => {
                if *x == from {
                    self.clone()
                } else {
                    assert!(*x != to, "set variable capture in renaming");
                    Formula::exists_set(*x, body.substitute_set_var(from, to))
                }
            }
        }
    }

    /// Replaces every atom `t ∈ from` by `make(t)`.
    pub fn map_set_atoms(&self, from: SetVar, make: &dyn Fn(&Term) -> Formula) -> Formula {
        match self {
            Formula::Eq(_, _) | Formula::Lt(_, _) | Formula::Oracle(_) => self.clone(),
            Formula::In(t, x) => {
                if *x == from {
                    make(t)
                } else {
                    self.clone()
                }
            }
            Formula::Not(f) => Formula::not(f.map_set_atoms(from, make)),
            Formula::And(a, b) => {
                Formula::and(a.map_set_atoms(from, make), b.map_set_atoms(from, make))
            }
            Formula::Or(a, b) => {
                Formula::or(a.map_set_atoms(from, make), b.map_set_atoms(from, make))
            }
            Formula::Implies(a, b) => {
                Formula::implies(a.map_set_atoms(from, make), b.map_set_atoms(from, make))
            }
            Formula::ForallLt(v, bound, body) => {
                Formula::forall_lt(*v, bound.clone(), body.map_set_atoms(from, make))
            }
            Formula::ExistsLt(v, bound, body) => {
                Formula::exists_lt(*v, bound.clone(), body.map_set_atoms(from, make))
            }
            Formula::Forall(v, body) => Formula::forall(*v, body.map_set_atoms(from, make)),
            Formula::Exists(v, body) => Formula::exists(*v, body.map_set_atoms(from, make)),
            Formula::ForallSet(x, body) => {
                if *x == from {
                    self.clone()
                } else {
                    Formula::forall_set(*x, body.map_set_atoms(from, make))
                }
            }
            Formula::ExistsSet(x, body) => {
                if *x == from {
                    self.clone()
                } else {
                    Formula::exists_set(*x, body.map_set_atoms(from, make))
                }
            }
        }
    }

    /// The dotted-variable pseudo-term: replaces every free occurrence of `v`
    /// by the canonical numeral for `n`.
    pub fn substitute_numeral(&self, v: Var, n: u64) -> Formula {
        self.substitute_term(v, &Term::numeral(n))
    }

    /// Universal closure over the free first-order variables (ascending index).
    pub fn close_universally(&self) -> Formula {
        let mut out = self.clone();
        for v in self.free_vars().into_iter().rev() {
            out = Formula::forall(v, out);
        }
        out
    }

    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::Eq(_, _) | Formula::Lt(_, _) | Formula::In(_, _) | Formula::Oracle(_)
        )
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Eq(_, _) | Formula::Lt(_, _) | Formula::In(_, _) | Formula::Oracle(_) => {
                vec![]
            }
            Formula::Not(f) => vec![f],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => vec![a, b],
            Formula::ForallLt(_, _, body)
            | Formula::ExistsLt(_, _, body)
            | Formula::Forall(_, body)
            | Formula::Exists(_, body)
            | Formula::ForallSet(_, body)
            | Formula::ExistsSet(_, body) => vec![body],
        }
    }

    /// All proper subformulas (not including `self`).
    pub fn proper_subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack: Vec<&Formula> = self.children();
        while let Some(f) = stack.pop() {
            out.push(f);
            stack.extend(f.children());
        }
        out
    }

    /// Negation normal form: drives negations to the atoms. Unsupported for
    /// second-order quantifiers.
    pub fn nnf_atoms(&self) -> Result<Formula, ClassifyError> {
        fn pos(f: &Formula) -> Result<Formula, ClassifyError> {
            match f {
                Formula::Eq(_, _) | Formula::Lt(_, _) | Formula::In(_, _) | Formula::Oracle(_) => {
                    Ok(f.clone())
                }
                Formula::Not(g) => neg(g),
                Formula::And(a, b) => Ok(Formula::and(pos(a)?, pos(b)?)),
                Formula::Or(a, b) => Ok(Formula::or(pos(a)?, pos(b)?)),
                Formula::Implies(a, b) => Ok(Formula::or(neg(a)?, pos(b)?)),
                Formula::ForallLt(v, bound, body) => {
                    Ok(Formula::forall_lt(*v, bound.clone(), pos(body)?))
                }
                Formula::ExistsLt(v, bound, body) => {
                    Ok(Formula::exists_lt(*v, bound.clone(), pos(body)?))
                }
                Formula::Forall(v, body) => Ok(Formula::forall(*v, pos(body)?)),
                Formula::Exists(v, body) => Ok(Formula::exists(*v, pos(body)?)),
                Formula::ForallSet(_, _) | Formula::ExistsSet(_, _) => {
                    Err(ClassifyError::SecondOrderUnsupported)
                }
            }
        }
        fn neg(f: &Formula) -> Result<Formula, ClassifyError> {
            match f {
                Formula::Eq(_, _) | Formula::Lt(_, _) | Formula::In(_, _) | Formula::Oracle(_) => {
                    Ok(Formula::not(f.clone()))
                }
                Formula::Not(g) => pos(g),
                Formula::And(a, b) => Ok(Formula::or(neg(a)?, neg(b)?)),
                Formula::Or(a, b) => Ok(Formula::and(neg(a)?, neg(b)?)),
                Formula::Implies(a, b) => Ok(Formula::and(pos(a)?, neg(b)?)),
                Formula::ForallLt(v, bound, body) => {
                    Ok(Formula::exists_lt(*v, bound.clone(), neg(body)?))
                }
                Formula::ExistsLt(v, bound, body) => {
                    Ok(Formula::forall_lt(*v, bound.clone(), neg(body)?))
                }
                Formula::Forall(v, body) => Ok(Formula::exists(*v, neg(body)?)),
                Formula::Exists(v, body) => Ok(Formula::forall(*v, neg(body)?)),
                Formula::ForallSet(_, _) | Formula::ExistsSet(_, _) => {
                    Err(ClassifyError::SecondOrderUnsupported)
                }
            }
        }
        pos(self)
    }
}

/// Hierarchy kind of a classified formula or of a schema's admitted class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Delta00,
    Sigma0(u32),
    Pi0(u32),
    /// Arithmetic formulas (union of all Σ⁰ₙ/Π⁰ₙ), used as a schema class.
    Pi0Omega,
    Sigma1(u32),
    Pi1(u32),
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKind::Delta00 => write!(f, "Delta^0_0"),
            ClassKind::Sigma0(n) => write!(f, "Sigma^0_{n}"),
            ClassKind::Pi0(n) => write!(f, "Pi^0_{n}"),
            ClassKind::Pi0Omega => write!(f, "Pi^0_omega"),
            ClassKind::Sigma1(n) => write!(f, "Sigma^1_{n}"),
            ClassKind::Pi1(n) => write!(f, "Pi^1_{n}"),
        }
    }
}

/// Classification result: least hierarchy class on the cumulative reading,
/// plus whether the oracle occurs and which set parameters are free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaClass {
    pub kind: ClassKind,
    pub oracle_extended: bool,
    pub set_parameters: Vec<SetVar>,
    /// Least n with membership in Σ⁰ₙ / Π⁰ₙ (meaningful for arithmetic formulas).
    pub sigma0: u32,
    pub pi0: u32,
    /// Least n with membership in Σ¹ₙ / Π¹ₙ; 0 means arithmetic.
    pub sigma1: u32,
    pub pi1: u32,
}

impl FormulaClass {
    /// First-order degree: max of the Σ/Π levels that witness the least class.
    pub fn degree(&self) -> u32 {
        self.sigma0.min(self.pi0)
    }

    pub fn is_arithmetic(&self) -> bool {
        self.sigma1 == 0 && self.pi1 == 0
    }

    pub fn is_delta00(&self) -> bool {
        self.is_arithmetic() && self.sigma0 == 0 && self.pi0 == 0
    }

    /// Does this formula fall within the class `spec` (cumulative reading)?
    pub fn fits(&self, spec: &ClassKind) -> bool {
        match spec {
            ClassKind::Delta00 => self.is_delta00(),
            ClassKind::Sigma0(n) => self.is_arithmetic() && self.sigma0 <= *n,
            ClassKind::Pi0(n) => self.is_arithmetic() && self.pi0 <= *n,
            ClassKind::Pi0Omega => self.is_arithmetic(),
            ClassKind::Sigma1(n) => self.sigma1 <= *n,
            ClassKind::Pi1(n) => self.pi1 <= *n,
        }
    }
}

/// Least-class computation on the given syntactic shape. No prenexing is done:
/// levels are computed structurally, with bounded quantifiers transparent and
/// the hierarchy read cumulatively (Σ⁰ₙ ∪ Π⁰ₙ ⊆ Σ⁰ₙ₊₁ ∩ Π⁰ₙ₊₁).
pub fn classify(phi: &Formula) -> FormulaClass {
    let (s0, p0) = first_order_levels(phi);
    let (s1, p1) = second_order_levels(phi);
    let kind = if s1 > 0 || p1 > 0 {
        if s1 <= p1 {
            ClassKind::Sigma1(s1)
        } else {
            ClassKind::Pi1(p1)
        }
    } else if s0 == 0 && p0 == 0 {
        ClassKind::Delta00
    } else if s0 <= p0 {
        ClassKind::Sigma0(s0)
    } else {
        ClassKind::Pi0(p0)
    };
    FormulaClass {
        kind,
        oracle_extended: phi.contains_oracle(),
        set_parameters: phi.free_set_vars().into_iter().collect(),
        sigma0: s0,
        pi0: p0,
        sigma1: s1,
        pi1: p1,
    }
}

fn first_order_levels(phi: &Formula) -> (u32, u32) {
    match phi {
        Formula::Eq(_, _) | Formula::Lt(_, _) | Formula::In(_, _) | Formula::Oracle(_) => (0, 0),
        Formula::Not(f) => {
            let (s, p) = first_order_levels(f);
            (p, s)
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (sa, pa) = first_order_levels(a);
            let (sb, pb) = first_order_levels(b);
            (sa.max(sb), pa.max(pb))
        }
        Formula::Implies(a, b) => {
            let (sa, pa) = first_order_levels(a);
            let (sb, pb) = first_order_levels(b);
            (pa.max(sb), sa.max(pb))
        }
        Formula::ForallLt(_, _, body) | Formula::ExistsLt(_, _, body) => first_order_levels(body),
        Formula::Exists(_, body) => {
            let (s, p) = first_order_levels(body);
            let s2 = (p + 1).min(s.max(1));
            (s2, s2 + 1)
        }
        Formula::Forall(_, body) => {
            let (s, p) = first_order_levels(body);
            let p2 = (s + 1).min(p.max(1));
            (p2 + 1, p2)
        }
        // Second-order quantifiers reset the first-order count: levels only
        // describe the arithmetic part of arithmetic formulas.
        Formula::ForallSet(_, body) | Formula::ExistsSet(_, body) => first_order_levels(body),
    }
}

fn second_order_levels(phi: &Formula) -> (u32, u32) {
    match phi {
        Formula::Eq(_, _) | Formula::Lt(_, _) | Formula::In(_, _) | Formula::Oracle(_) => (0, 0),
        Formula::Not(f) => {
            let (s, p) = second_order_levels(f);
            (p, s)
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (sa, pa) = second_order_levels(a);
            let (sb, pb) = second_order_levels(b);
            (sa.max(sb), pa.max(pb))
        }
        Formula::Implies(a, b) => {
            let (sa, pa) = second_order_levels(a);
            let (sb, pb) = second_order_levels(b);
            (pa.max(sb), sa.max(pb))
        }
        Formula::ForallLt(_, _, body)
        | Formula::ExistsLt(_, _, body)
        | Formula::Forall(_, body)
        | Formula::Exists(_, body) => second_order_levels(body),
        Formula::ExistsSet(_, body) => {
            let (s, p) = second_order_levels(body);
            let s2 = (p + 1).min(s.max(1));
            (s2, s2 + 1)
        }
        Formula::ForallSet(_, body) => {
            let (s, p) = second_order_levels(body);
            let p2 = (s + 1).min(p.max(1));
            (p2 + 1, p2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Var {
        Var(0)
    }
    fn y() -> Var {
        Var(1)
    }

    #[test]
    fn bounded_only_is_delta00() {
        // ∀x<y (x+0 = x)
        let f = Formula::forall_lt(
            x(),
            Term::var(1),
            Formula::Eq(Term::add(Term::var(0), Term::Zero), Term::var(0)),
        );
        let c = classify(&f);
        assert_eq!(c.kind, ClassKind::Delta00);
        assert!(!c.oracle_extended);
    }

    #[test]
    fn exists_forall_delta00_is_sigma02() {
        // ∃x ∀y (x = y)
        let f = Formula::exists(
            x(),
            Formula::forall(y(), Formula::Eq(Term::var(0), Term::var(1))),
        );
        assert_eq!(classify(&f).kind, ClassKind::Sigma0(2));
    }

    #[test]
    fn exists_set_over_arithmetic_is_sigma11() {
        // ∃Y ∀x (x ∈ Y)
        let f = Formula::exists_set(
            SetVar(0),
            Formula::forall(x(), Formula::In(Term::var(0), SetVar(0))),
        );
        let c = classify(&f);
        assert_eq!(c.kind, ClassKind::Sigma1(1));
    }

    #[test]
    fn negation_swaps_levels() {
        let f = Formula::exists(x(), Formula::Eq(Term::var(0), Term::Zero));
        assert_eq!(classify(&f).kind, ClassKind::Sigma0(1));
        assert_eq!(classify(&Formula::not(f)).kind, ClassKind::Pi0(1));
    }

    #[test]
    fn nnf_moves_negations_to_atoms() {
        let a = Formula::Eq(Term::var(0), Term::Zero);
        let b = Formula::Lt(Term::var(0), Term::One);
        let f = Formula::not(Formula::and(a.clone(), b.clone()));
        let nnf = f.nnf_atoms().unwrap();
        assert_eq!(nnf, Formula::or(Formula::not(a), Formula::not(b)));
    }

    #[test]
    fn nnf_flips_quantifiers() {
        let body = Formula::Eq(Term::var(0), Term::Zero);
        let f = Formula::not(Formula::forall(x(), body.clone()));
        let nnf = f.nnf_atoms().unwrap();
        assert_eq!(nnf, Formula::exists(x(), Formula::not(body)));
    }

    #[test]
    fn nnf_is_fixpoint_on_atomic_negations() {
        let f = Formula::or(
            Formula::not(Formula::Oracle(Term::var(0))),
            Formula::In(Term::var(0), SetVar(0)),
        );
        assert_eq!(f.nnf_atoms().unwrap(), f);
    }

    #[test]
    fn nnf_never_raises_degree() {
        let cases = vec![
            Formula::not(Formula::exists(
                x(),
                Formula::forall(y(), Formula::Eq(Term::var(0), Term::var(1))),
            )),
            Formula::implies(
                Formula::exists(x(), Formula::Eq(Term::var(0), Term::Zero)),
                Formula::forall(y(), Formula::Lt(Term::Zero, Term::var(1))),
            ),
            Formula::not(Formula::not(Formula::exists(
                x(),
                Formula::Eq(Term::var(0), Term::Zero),
            ))),
        ];
        for f in cases {
            let before = classify(&f);
            let after = classify(&f.nnf_atoms().unwrap());
            assert!(
                after.degree() <= before.degree(),
                "degree rose for {f:?}: {} -> {}",
                before.degree(),
                after.degree()
            );
        }
    }

    #[test]
    fn substitution_replaces_only_free_occurrences() {
        // (x = x) with x := 3
        let f = Formula::Eq(Term::var(0), Term::var(0));
        assert_eq!(
            f.substitute_numeral(x(), 3),
            Formula::Eq(Term::numeral(3), Term::numeral(3))
        );
        // (∀x x = x) unchanged
        let g = Formula::forall(x(), f);
        assert_eq!(g.substitute_numeral(x(), 3), g);
    }

    #[test]
    fn substitution_in_oracle_implication() {
        // (𝔒(x) → x ∈ Y)[x := 2]
        let f = Formula::implies(
            Formula::Oracle(Term::var(0)),
            Formula::In(Term::var(0), SetVar(0)),
        );
        let expected = Formula::implies(
            Formula::Oracle(Term::numeral(2)),
            Formula::In(Term::numeral(2), SetVar(0)),
        );
        assert_eq!(f.substitute_numeral(x(), 2), expected);
    }
}

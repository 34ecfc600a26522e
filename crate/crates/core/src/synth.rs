//! Finitary proof synthesis over an oracle theory.
//!
//! Builds actual Hilbert proofs for: numeral computations (values of closed
//! terms), numeral order and inequality facts, truth of closed formulas with
//! bounded quantifiers only, equality replacement inside formulas, and
//! schematic free-variable facts that match theory axioms. These are the
//! finitary leaves the certificate synthesizers assemble.

use num_traits::ToPrimitive;

use crate::builder::ProofBuilder;
use crate::error::SynthError;
use crate::eval::Caps;
use crate::formula::Formula;
use crate::term::{ProjSide, Term, Var};
use crate::theory::{q_axiom, OracleTheory, QAx};

/// Largest value a synthesized numeral may take; canonical numerals are
/// linear-size terms, so this also bounds proof sizes.
pub const MAX_NUMERAL: u64 = 1 << 16;

pub struct Synth<'a> {
    pub theory: &'a OracleTheory,
    pub caps: Caps,
}

fn n(v: u64) -> Term {
    Term::numeral(v)
}

impl<'a> Synth<'a> {
    pub fn new(theory: &'a OracleTheory, caps: Caps) -> Synth<'a> {
        Synth { theory, caps }
    }

    /// Pushes a closed theory axiom and instantiates its leading universals.
    /// When an argument would be captured by a later binder of the prefix, the
    /// prefix is first rebuilt over fresh variables.
    pub fn use_axiom(&self, b: &mut ProofBuilder, ax: Formula, args: &[Term]) -> usize {
        let direct_ok = {
            let mut f = &ax;
            let mut ok = true;
            for t in args {
                match f {
                    Formula::Forall(v, body) => {
                        if !body.free_for(*v, t) {
                            ok = false;
                            break;
                        }
                        f = body;
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            ok
        };
        let mut idx = b.axiom(ax.clone());
        if direct_ok {
            for t in args {
                idx = self.forall_elim(b, idx, t);
            }
            return idx;
        }
        // fresh prefix: instantiate at fresh variables, regeneralize, then
        // instantiate at the intended terms
        let mut max_var = ax.fresh_var().0;
        for t in args {
            for v in t.free_vars() {
                max_var = max_var.max(v.0 + 1);
            }
        }
        let fresh: Vec<Var> = (0..args.len())
            .map(|i| Var(max_var + i as u32))
            .collect();
        for u in &fresh {
            idx = self.forall_elim(b, idx, &Term::Var(*u));
        }
        for u in fresh.iter().rev() {
            idx = b.gen(idx, *u);
        }
        for t in args {
            idx = self.forall_elim(b, idx, t);
        }
        idx
    }

    pub fn use_q(&self, b: &mut ProofBuilder, ax: QAx, args: &[Term]) -> usize {
        self.use_axiom(b, q_axiom(ax), args)
    }

    /// From a line `∀x φ`, derives `φ[x/t]`.
    pub fn forall_elim(&self, b: &mut ProofBuilder, idx: usize, t: &Term) -> usize {
        let f = b.formula(idx).clone();
        let Formula::Forall(v, body) = &f else {
            panic!("forall_elim on a non-universal line: {f:?}");
        };
        debug_assert!(body.free_for(*v, t));
        let inst = body.substitute_term(*v, t);
        let ax = b.univ_inst(Formula::implies(f.clone(), inst));
        b.mp(ax, idx)
    }

    /// Chains equalities `t₀ = t₁, t₁ = t₂, …` into `t₀ = tₖ`.
    pub fn chain_eq(&self, b: &mut ProofBuilder, links: &[usize]) -> usize {
        assert!(!links.is_empty());
        let mut acc = links[0];
        for &next in &links[1..] {
            let Formula::Eq(r, s) = b.formula(acc).clone() else {
                panic!("chain_eq on a non-equality");
            };
            let Formula::Eq(s2, t) = b.formula(next).clone() else {
                panic!("chain_eq on a non-equality");
            };
            debug_assert_eq!(s, s2, "equality chain does not connect");
            // (r=s) → ((s=t) → (r=t))
            let trans = b.eq_axiom(Formula::implies(
                Formula::Eq(r.clone(), s.clone()),
                Formula::implies(Formula::Eq(s2, t.clone()), Formula::Eq(r, t)),
            ));
            let step = b.mp(trans, acc);
            acc = b.mp(step, next);
        }
        acc
    }

    /// From `⊢ s = t`, derives `⊢ t = s`.
    pub fn eq_symm(&self, b: &mut ProofBuilder, idx: usize) -> usize {
        let Formula::Eq(s, t) = b.formula(idx).clone() else {
            panic!("eq_symm on a non-equality");
        };
        let ax = b.eq_axiom(Formula::implies(
            Formula::Eq(s.clone(), t.clone()),
            Formula::Eq(t, s),
        ));
        b.mp(ax, idx)
    }

    /// One-step congruence under a binary operator, on the given argument
    /// position: from `⊢ s = t`, derives `⊢ op(..s..) = op(..t..)`.
    fn cong_step(
        &self,
        b: &mut ProofBuilder,
        eq_idx: usize,
        rebuild: impl Fn(Term) -> Term,
    ) -> usize {
        let Formula::Eq(s, t) = b.formula(eq_idx).clone() else {
            panic!("cong_step on a non-equality");
        };
        let ax = b.eq_axiom(Formula::implies(
            Formula::Eq(s.clone(), t.clone()),
            Formula::Eq(rebuild(s), rebuild(t)),
        ));
        b.mp(ax, eq_idx)
    }

    /// ⊢ N(a) + N(b) = N(a+b)
    pub fn prove_add(&self, b: &mut ProofBuilder, x: u64, y: u64) -> usize {
        match y {
            0 => self.use_q(b, QAx::AddZero, &[n(x)]),
            1 => {
                if x == 0 {
                    // 0 + 1 = 1 from 1 = 0+1
                    let one = b.axiom(q_axiom(QAx::OneSucc));
                    self.eq_symm(b, one)
                } else {
                    // N(x)+1 is the canonical numeral for x+1
                    b.eq_axiom(Formula::Eq(n(x + 1), n(x + 1)))
                }
            }
            _ => {
                // N(x) + (N(y-1)+1) = (N(x)+N(y-1)) + 1
                let step = self.use_q(b, QAx::AddSucc, &[n(x), n(y - 1)]);
                let rec = self.prove_add(b, x, y - 1);
                // (N(x)+N(y-1) = N(x+y-1)) → ((N(x)+N(y-1))+1 = N(x+y-1)+1)
                let lifted = self.cong_step(b, rec, |t| Term::add(t, Term::One));
                self.chain_eq(b, &[step, lifted])
            }
        }
    }

    /// ⊢ N(a) · N(b) = N(a·b)
    pub fn prove_mul(&self, b: &mut ProofBuilder, x: u64, y: u64) -> usize {
        match y {
            0 => self.use_q(b, QAx::MulZero, &[n(x)]),
            1 => {
                // N(x)·1 = N(x)·(0+1) = N(x)·0 + N(x) = 0 + N(x) = N(x)
                let one_succ = b.axiom(q_axiom(QAx::OneSucc));
                let rewrite = self.cong_step(b, one_succ, |t| Term::mul(n(x), t));
                let succ = self.use_q(b, QAx::MulSucc, &[n(x), Term::Zero]);
                let zero = self.use_q(b, QAx::MulZero, &[n(x)]);
                let lifted = self.cong_step(b, zero, |t| Term::add(t, n(x)));
                let add = self.prove_add(b, 0, x);
                self.chain_eq(b, &[rewrite, succ, lifted, add])
            }
            _ => {
                let step = self.use_q(b, QAx::MulSucc, &[n(x), n(y - 1)]);
                let rec = self.prove_mul(b, x, y - 1);
                let lifted = self.cong_step(b, rec, |t| Term::add(t, n(x)));
                let add = self.prove_add(b, x * (y - 1), x);
                self.chain_eq(b, &[step, lifted, add])
            }
        }
    }

    /// ⊢ N(a) ^ N(b) = N(a^b); fails if the value exceeds the numeral guard.
    pub fn prove_exp(&self, b: &mut ProofBuilder, x: u64, y: u64) -> Result<usize, SynthError> {
        let value = checked_pow(x, y).ok_or_else(|| {
            SynthError::CannotWitness(format!("{x}^{y} exceeds the numeral bound"))
        })?;
        if value > MAX_NUMERAL {
            return Err(SynthError::CannotWitness(format!(
                "{x}^{y} exceeds the numeral bound"
            )));
        }
        Ok(match y {
            0 => self.use_q(b, QAx::ExpZero, &[n(x)]),
            1 => {
                // N(x)^1 = N(x)^(0+1) = N(x)^0 · N(x) = 1 · N(x) = N(x)
                let one_succ = b.axiom(q_axiom(QAx::OneSucc));
                let rewrite = self.cong_step(b, one_succ, |t| Term::exp(n(x), t));
                let succ = self.use_q(b, QAx::ExpSucc, &[n(x), Term::Zero]);
                let zero = self.use_q(b, QAx::ExpZero, &[n(x)]);
                let lifted = self.cong_step(b, zero, |t| Term::mul(t, n(x)));
                let mul = self.prove_mul(b, 1, x);
                self.chain_eq(b, &[rewrite, succ, lifted, mul])
            }
            _ => {
                let step = self.use_q(b, QAx::ExpSucc, &[n(x), n(y - 1)]);
                let rec = self.prove_exp(b, x, y - 1)?;
                let lifted = self.cong_step(b, rec, |t| Term::mul(t, n(x)));
                let prev = checked_pow(x, y - 1).unwrap();
                let mul = self.prove_mul(b, prev, x);
                self.chain_eq(b, &[step, lifted, mul])
            }
        })
    }

    /// ⊢ ⟨N(a), N(b)⟩ = N(code) via the pairing diagram.
    pub fn prove_pair(&self, b: &mut ProofBuilder, x: u64, y: u64) -> Result<usize, SynthError> {
        let code = crate::term::pair_u64(x, y)
            .to_u64()
            .filter(|&c| c <= MAX_NUMERAL)
            .ok_or_else(|| {
                SynthError::CannotWitness(format!("pair code of ({x},{y}) exceeds the bound"))
            })?;
        Ok(b.axiom(Formula::Eq(Term::pair(n(x), n(y)), n(code))))
    }

    /// ⊢ (N(code))ᵢ = N(component)
    pub fn prove_proj(
        &self,
        b: &mut ProofBuilder,
        side: ProjSide,
        code: u64,
    ) -> Result<usize, SynthError> {
        let (l, r) = crate::term::unpair_code(&code.into());
        let (l, r) = (l.to_u64().unwrap(), r.to_u64().unwrap());
        let pair = self.prove_pair(b, l, r)?;
        let back = self.eq_symm(b, pair);
        let lifted = self.cong_step(b, back, |t| Term::proj(side, t));
        let ax = match side {
            ProjSide::Left => self.use_q(b, QAx::ProjPairL, &[n(l), n(r)]),
            ProjSide::Right => self.use_q(b, QAx::ProjPairR, &[n(l), n(r)]),
        };
        Ok(self.chain_eq(b, &[lifted, ax]))
    }

    /// Value of a closed term within the synthesis bounds.
    pub fn closed_value(&self, t: &Term) -> Result<u64, SynthError> {
        let v = t.eval_closed(self.caps.term_bits)?;
        v.to_u64()
            .filter(|&x| x <= MAX_NUMERAL)
            .ok_or_else(|| SynthError::CannotWitness("term value exceeds numeral bound".into()))
    }

    /// ⊢ t = N(val(t)) for closed `t`; returns the line and the value.
    pub fn prove_term_value(
        &self,
        b: &mut ProofBuilder,
        t: &Term,
    ) -> Result<(usize, u64), SynthError> {
        if let Some(v) = t.as_numeral() {
            if v > MAX_NUMERAL {
                return Err(SynthError::CannotWitness("numeral exceeds bound".into()));
            }
            return Ok((b.eq_axiom(Formula::Eq(t.clone(), t.clone())), v));
        }
        match t {
            Term::Var(v) => Err(SynthError::Unsupported(format!("open term {v}"))),
            Term::Zero | Term::One => unreachable!("numerals handled above"),
            Term::Add(s1, s2) | Term::Mul(s1, s2) | Term::Exp(s1, s2) | Term::Pair(s1, s2) => {
                let (e1, v1) = self.prove_term_value(b, s1)?;
                let (e2, v2) = self.prove_term_value(b, s2)?;
                let rebuild_right = |x: Term| match t {
                    Term::Add(_, _) => Term::add(x.clone(), (**s2).clone()),
                    Term::Mul(_, _) => Term::mul(x.clone(), (**s2).clone()),
                    Term::Exp(_, _) => Term::exp(x.clone(), (**s2).clone()),
                    Term::Pair(_, _) => Term::pair(x.clone(), (**s2).clone()),
                    _ => unreachable!(),
                };
                let rebuild_left = |x: Term| match t {
                    Term::Add(_, _) => Term::add(n(v1), x.clone()),
                    Term::Mul(_, _) => Term::mul(n(v1), x.clone()),
                    Term::Exp(_, _) => Term::exp(n(v1), x.clone()),
                    Term::Pair(_, _) => Term::pair(n(v1), x.clone()),
                    _ => unreachable!(),
                };
                let step1 = self.cong_step(b, e1, rebuild_right);
                let step2 = self.cong_step(b, e2, rebuild_left);
                let (tail, value) = match t {
                    Term::Add(_, _) => (self.prove_add(b, v1, v2), v1.checked_add(v2)),
                    Term::Mul(_, _) => (self.prove_mul(b, v1, v2), v1.checked_mul(v2)),
                    Term::Exp(_, _) => (self.prove_exp(b, v1, v2)?, checked_pow(v1, v2)),
                    Term::Pair(_, _) => (
                        self.prove_pair(b, v1, v2)?,
                        crate::term::pair_u64(v1, v2).to_u64(),
                    ),
                    _ => unreachable!(),
                };
                let value = value
                    .filter(|&x| x <= MAX_NUMERAL)
                    .ok_or_else(|| SynthError::CannotWitness("value exceeds bound".into()))?;
                Ok((self.chain_eq(b, &[step1, step2, tail]), value))
            }
            Term::Proj(side, inner) => {
                let (e, v) = self.prove_term_value(b, inner)?;
                let step = self.cong_step(b, e, |x| Term::proj(*side, x));
                let tail = self.prove_proj(b, *side, v)?;
                let (l, r) = crate::term::unpair_code(&v.into());
                let comp = match side {
                    ProjSide::Left => l.to_u64().unwrap(),
                    ProjSide::Right => r.to_u64().unwrap(),
                };
                Ok((self.chain_eq(b, &[step, tail]), comp))
            }
        }
    }

    /// ⊢ ¬(N(a) = N(b)) for a ≠ b.
    pub fn prove_numeral_neq(&self, b: &mut ProofBuilder, x: u64, y: u64) -> usize {
        assert_ne!(x, y);
        if x < y {
            // from ¬(N(y)=N(x)): contrapose symmetry
            let inner = self.prove_numeral_neq(b, y, x);
            let sym = b.eq_axiom(Formula::implies(
                Formula::Eq(n(x), n(y)),
                Formula::Eq(n(y), n(x)),
            ));
            return b.contrapose(sym, inner);
        }
        // x > y
        if y == 0 {
            if x == 1 {
                return b.axiom(q_axiom(QAx::OneNeZero));
            }
            // N(x) is N(x-1)+1 syntactically for x ≥ 2
            return self.use_q(b, QAx::SuccNeZero, &[n(x - 1)]);
        }
        // y ≥ 1, x > y ≥ 1 so x ≥ 2
        let rec = self.prove_numeral_neq(b, x - 1, y - 1);
        if y == 1 {
            // (N(x)=1) → (N(x)=0+1) → (N(x-1)=0)
            let trans = b.eq_axiom(Formula::implies(
                Formula::Eq(n(x), Term::One),
                Formula::implies(
                    Formula::Eq(Term::One, Term::add(Term::Zero, Term::One)),
                    Formula::Eq(n(x), Term::add(Term::Zero, Term::One)),
                ),
            ));
            let one_succ = b.axiom(q_axiom(QAx::OneSucc));
            let first = b.apply_with(trans, one_succ);
            let inj = self.use_q(b, QAx::SuccInj, &[n(x - 1), Term::Zero]);
            let composed = b.compose(first, inj);
            b.contrapose(composed, rec)
        } else {
            let inj = self.use_q(b, QAx::SuccInj, &[n(x - 1), n(y - 1)]);
            b.contrapose(inj, rec)
        }
    }

    /// ⊢ N(a) < N(b) for a < b.
    pub fn prove_numeral_lt(&self, b: &mut ProofBuilder, x: u64, y: u64) -> usize {
        assert!(x < y);
        if y == x + 1 {
            let self_lt = self.use_q(b, QAx::LtSuccSelf, &[n(x)]);
            if x == 0 {
                // 0 < 0+1 and 0+1 = 1
                let one_succ = b.axiom(q_axiom(QAx::OneSucc));
                let sym = self.eq_symm(b, one_succ);
                // (0+1 = 1) → ((0 < 0+1) → (0 < 1))
                let cong = b.eq_axiom(Formula::implies(
                    Formula::Eq(Term::add(Term::Zero, Term::One), Term::One),
                    Formula::implies(
                        Formula::Lt(Term::Zero, Term::add(Term::Zero, Term::One)),
                        Formula::Lt(Term::Zero, Term::One),
                    ),
                ));
                let step = b.mp(cong, sym);
                b.mp(step, self_lt)
            } else {
                self_lt
            }
        } else {
            let rec = self.prove_numeral_lt(b, x, y - 1);
            let weak = self.use_q(b, QAx::LtSuccWeak, &[n(x), n(y - 1)]);
            b.mp(weak, rec)
        }
    }

    /// ⊢ ¬(N(a) < N(b)) for a ≥ b.
    pub fn prove_numeral_not_lt(&self, b: &mut ProofBuilder, x: u64, y: u64) -> usize {
        assert!(x >= y);
        if y == 0 {
            return self.use_q(b, QAx::LtZero, &[n(x)]);
        }
        let not_lt = self.prove_numeral_not_lt(b, x, y - 1);
        let not_eq = self.prove_numeral_neq(b, x, y - 1);
        let split = if y == 1 {
            // (N(x)<1) → (N(x)<0+1), then split at 0
            let one_succ = b.axiom(q_axiom(QAx::OneSucc));
            let cong = b.eq_axiom(Formula::implies(
                Formula::Eq(Term::One, Term::add(Term::Zero, Term::One)),
                Formula::implies(
                    Formula::Lt(n(x), Term::One),
                    Formula::Lt(n(x), Term::add(Term::Zero, Term::One)),
                ),
            ));
            let rewrite = b.mp(cong, one_succ);
            let raw = self.use_q(b, QAx::LtSuccSplit, &[n(x), Term::Zero]);
            b.compose(rewrite, raw)
        } else {
            self.use_q(b, QAx::LtSuccSplit, &[n(x), n(y - 1)])
        };
        // ((A → (B ∨ C)) ∧ ¬B ∧ ¬C) → ¬A, as a chain
        let fa = b.formula(split).clone();
        let fb = b.formula(not_lt).clone();
        let fc = b.formula(not_eq).clone();
        let Formula::Implies(a, _) = &fa else {
            unreachable!()
        };
        let goal = Formula::not((**a).clone());
        let t = b.taut(Formula::implies(
            fa.clone(),
            Formula::implies(fb, Formula::implies(fc, goal)),
        ));
        let s1 = b.mp(t, split);
        let s2 = b.mp(s1, not_lt);
        b.mp(s2, not_eq)
    }

    /// ⊢ x < N(m) → (x = N(0) ∨ … ∨ x = N(m-1)) with `x` free; m ≥ 1.
    /// The disjunction folds left, matching [`Formula::disj`].
    pub fn case_split(&self, b: &mut ProofBuilder, x: Var, m: u64) -> usize {
        assert!(m >= 1);
        let xt = Term::Var(x);
        if m == 1 {
            // (x<1) → (x<0+1) → (x<0 ∨ x=0), kill the left disjunct
            let one_succ = b.axiom(q_axiom(QAx::OneSucc));
            let cong = b.eq_axiom(Formula::implies(
                Formula::Eq(Term::One, Term::add(Term::Zero, Term::One)),
                Formula::implies(
                    Formula::Lt(xt.clone(), Term::One),
                    Formula::Lt(xt.clone(), Term::add(Term::Zero, Term::One)),
                ),
            ));
            let rewrite = b.mp(cong, one_succ);
            let split = self.use_q(b, QAx::LtSuccSplit, &[xt.clone(), Term::Zero]);
            let chain = b.compose(rewrite, split);
            let no_zero = self.use_q(b, QAx::LtZero, &[xt.clone()]);
            // ((A→(B∨C)) ∧ ¬B) → (A→C)
            let fchain = b.formula(chain).clone();
            let fnz = b.formula(no_zero).clone();
            let goal = Formula::implies(
                Formula::Lt(xt.clone(), Term::One),
                Formula::Eq(xt, Term::Zero),
            );
            let t = b.taut(Formula::implies(
                fchain,
                Formula::implies(fnz, goal),
            ));
            let s = b.mp(t, chain);
            return b.mp(s, no_zero);
        }
        let rec = self.case_split(b, x, m - 1);
        let split = self.use_q(b, QAx::LtSuccSplit, &[xt.clone(), n(m - 1)]);
        // split: x<N(m) → (x<N(m-1) ∨ x=N(m-1))   [N(m-1)+1 is N(m) since m ≥ 2]
        // rec:   x<N(m-1) → D
        // goal:  x<N(m) → (D ∨ x=N(m-1))
        let fsplit = b.formula(split).clone();
        let frec = b.formula(rec).clone();
        let Formula::Implies(_, d) = &frec else {
            unreachable!()
        };
        let goal = Formula::implies(
            Formula::Lt(xt.clone(), n(m)),
            Formula::or((**d).clone(), Formula::Eq(xt, n(m - 1))),
        );
        let t = b.taut(Formula::implies(
            fsplit,
            Formula::implies(frec, goal),
        ));
        let s = b.mp(t, split);
        b.mp(s, rec)
    }
}

impl Synth<'_> {
    fn env(&self) -> crate::eval::Env {
        crate::eval::Env::new().bind_oracle(self.theory.oracle.clone())
    }

    /// Three-valued truth of a closed formula under this theory's oracle.
    pub fn truth(&self, phi: &Formula) -> Result<crate::eval::ThreeValued, SynthError> {
        Ok(crate::eval::evaluate(phi, &self.env(), &self.caps)?)
    }

    /// Proves (`want` = true) or refutes (`want` = false, producing `¬φ`) a
    /// closed formula whose quantifiers are all bounded.
    pub fn prove_closed(
        &self,
        b: &mut ProofBuilder,
        phi: &Formula,
        want: bool,
    ) -> Result<usize, SynthError> {
        match phi {
            Formula::Eq(s, t) => {
                let (es, vs) = self.prove_term_value(b, s)?;
                let (et, vt) = self.prove_term_value(b, t)?;
                if want {
                    if vs != vt {
                        return Err(SynthError::CannotWitness(format!(
                            "equality is false: {vs} vs {vt}"
                        )));
                    }
                    let back = self.eq_symm(b, et);
                    Ok(self.chain_eq(b, &[es, back]))
                } else {
                    if vs == vt {
                        return Err(SynthError::CannotWitness("equality is true".into()));
                    }
                    // (s=t) → (N(vs)=N(vt)), then contrapose
                    let sym = self.eq_symm(b, es); // N(vs) = s
                    let tr1 = b.eq_axiom(Formula::implies(
                        Formula::Eq(n(vs), s.clone()),
                        Formula::implies(
                            Formula::Eq(s.clone(), t.clone()),
                            Formula::Eq(n(vs), t.clone()),
                        ),
                    ));
                    let step1 = b.mp(tr1, sym); // (s=t) → (N(vs)=t)
                    let tr2 = b.eq_axiom(Formula::implies(
                        Formula::Eq(n(vs), t.clone()),
                        Formula::implies(
                            Formula::Eq(t.clone(), n(vt)),
                            Formula::Eq(n(vs), n(vt)),
                        ),
                    ));
                    let step2 = b.apply_with(tr2, et); // (N(vs)=t) → (N(vs)=N(vt))
                    let chain = b.compose(step1, step2);
                    let neq = self.prove_numeral_neq(b, vs, vt);
                    Ok(b.contrapose(chain, neq))
                }
            }
            Formula::Lt(s, t) => {
                let (es, vs) = self.prove_term_value(b, s)?;
                let (et, vt) = self.prove_term_value(b, t)?;
                if want {
                    if vs >= vt {
                        return Err(SynthError::CannotWitness("inequality is false".into()));
                    }
                    let lt = self.prove_numeral_lt(b, vs, vt);
                    // (N(vs)=s) → (N(vs)<N(vt) → s<N(vt))
                    let sym_s = self.eq_symm(b, es);
                    let c1 = b.eq_axiom(Formula::implies(
                        Formula::Eq(n(vs), s.clone()),
                        Formula::implies(
                            Formula::Lt(n(vs), n(vt)),
                            Formula::Lt(s.clone(), n(vt)),
                        ),
                    ));
                    let i1 = b.mp(c1, sym_s);
                    let step = b.mp(i1, lt);
                    let sym_t = self.eq_symm(b, et);
                    let c2 = b.eq_axiom(Formula::implies(
                        Formula::Eq(n(vt), t.clone()),
                        Formula::implies(
                            Formula::Lt(s.clone(), n(vt)),
                            Formula::Lt(s.clone(), t.clone()),
                        ),
                    ));
                    let i2 = b.mp(c2, sym_t);
                    Ok(b.mp(i2, step))
                } else {
                    if vs < vt {
                        return Err(SynthError::CannotWitness("inequality is true".into()));
                    }
                    // (s<t) → (N(vs)<N(vt)), then contrapose
                    let c1 = b.eq_axiom(Formula::implies(
                        Formula::Eq(s.clone(), n(vs)),
                        Formula::implies(
                            Formula::Lt(s.clone(), t.clone()),
                            Formula::Lt(n(vs), t.clone()),
                        ),
                    ));
                    let i1 = b.mp(c1, es);
                    let c2 = b.eq_axiom(Formula::implies(
                        Formula::Eq(t.clone(), n(vt)),
                        Formula::implies(
                            Formula::Lt(n(vs), t.clone()),
                            Formula::Lt(n(vs), n(vt)),
                        ),
                    ));
                    let i2 = b.mp(c2, et);
                    let chain = b.compose(i1, i2);
                    let nlt = self.prove_numeral_not_lt(b, vs, vt);
                    Ok(b.contrapose(chain, nlt))
                }
            }
            Formula::Oracle(t) => {
                let (et, vt) = self.prove_term_value(b, t)?;
                let member = self.theory.oracle.contains_u64(vt);
                if want {
                    if !member {
                        return Err(SynthError::CannotWitness(format!(
                            "oracle does not contain {vt}"
                        )));
                    }
                    let ax = b.axiom(Formula::Oracle(n(vt)));
                    let sym = self.eq_symm(b, et);
                    let cong = b.eq_axiom(Formula::implies(
                        Formula::Eq(n(vt), t.clone()),
                        Formula::implies(
                            Formula::Oracle(n(vt)),
                            Formula::Oracle(t.clone()),
                        ),
                    ));
                    let step = b.mp(cong, sym);
                    Ok(b.mp(step, ax))
                } else {
                    if member {
                        return Err(SynthError::CannotWitness(format!(
                            "oracle contains {vt}"
                        )));
                    }
                    let ax = b.axiom(Formula::not(Formula::Oracle(n(vt))));
                    let cong = b.eq_axiom(Formula::implies(
                        Formula::Eq(t.clone(), n(vt)),
                        Formula::implies(
                            Formula::Oracle(t.clone()),
                            Formula::Oracle(n(vt)),
                        ),
                    ));
                    let step = b.mp(cong, et);
                    Ok(b.contrapose(step, ax))
                }
            }
            Formula::In(_, x) => Err(SynthError::FreeSetVar(*x)),
            Formula::Not(g) => {
                if want {
                    self.prove_closed(b, g, false)
                } else {
                    let inner = self.prove_closed(b, g, true)?;
                    let fg = b.formula(inner).clone();
                    let t = b.taut(Formula::implies(
                        fg.clone(),
                        Formula::not(Formula::not(fg)),
                    ));
                    Ok(b.mp(t, inner))
                }
            }
            Formula::And(p, q) => {
                if want {
                    let ip = self.prove_closed(b, p, true)?;
                    let iq = self.prove_closed(b, q, true)?;
                    Ok(b.and_intro(ip, iq))
                } else {
                    let target = Formula::not(phi.clone());
                    // refute whichever conjunct is determinately false
                    let side = if self.truth(p)?.is_false() {
                        self.prove_closed(b, p, false)?
                    } else if self.truth(q)?.is_false() {
                        self.prove_closed(b, q, false)?
                    } else {
                        return Err(SynthError::CannotWitness(
                            "no determinately false conjunct".into(),
                        ));
                    };
                    let fs = b.formula(side).clone();
                    let t = b.taut(Formula::implies(fs, target));
                    Ok(b.mp(t, side))
                }
            }
            Formula::Or(p, q) => {
                if want {
                    let side = if self.truth(p)?.is_true() {
                        self.prove_closed(b, p, true)?
                    } else if self.truth(q)?.is_true() {
                        self.prove_closed(b, q, true)?
                    } else {
                        return Err(SynthError::CannotWitness(
                            "no determinately true disjunct".into(),
                        ));
                    };
                    let fs = b.formula(side).clone();
                    let t = b.taut(Formula::implies(fs, phi.clone()));
                    Ok(b.mp(t, side))
                } else {
                    let ip = self.prove_closed(b, p, false)?;
                    let iq = self.prove_closed(b, q, false)?;
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
                    let (side, taut) = if self.truth(p)?.is_false() {
                        let i = self.prove_closed(b, p, false)?;
                        let fi = b.formula(i).clone();
                        (i, Formula::implies(fi, phi.clone()))
                    } else if self.truth(q)?.is_true() {
                        let i = self.prove_closed(b, q, true)?;
                        let fi = b.formula(i).clone();
                        (i, Formula::implies(fi, phi.clone()))
                    } else {
                        return Err(SynthError::CannotWitness(
                            "implication not determinately true".into(),
                        ));
                    };
                    let t = b.taut(taut);
                    Ok(b.mp(t, side))
                } else {
                    let ip = self.prove_closed(b, p, true)?;
                    let iq = self.prove_closed(b, q, false)?;
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
                    self.prove_bounded_forall(b, *v, bound, body, &mut |s, b, inst| {
                        s.prove_closed(b, &inst, true)
                    })
                } else {
                    // find a counterexample k < val(bound)
                    let (ebound, m) = self.prove_term_value(b, bound)?;
                    let mut witness = None;
                    for k in 0..m {
                        let inst = body.substitute_numeral(*v, k);
                        if self.truth(&inst)?.is_false() {
                            witness = Some(k);
                            break;
                        }
                    }
                    let Some(k) = witness else {
                        return Err(SynthError::CannotWitness(
                            "no determinate counterexample below the bound".into(),
                        ));
                    };
                    let inst = body.substitute_numeral(*v, k);
                    let refuted = self.prove_closed(b, &inst, false)?;
                    // k < bound
                    let klt = self.prove_numeral_lt(b, k, m);
                    let sym = self.eq_symm(b, ebound);
                    let cong = b.eq_axiom(Formula::implies(
                        Formula::Eq(n(m), bound.clone()),
                        Formula::implies(
                            Formula::Lt(n(k), n(m)),
                            Formula::Lt(n(k), bound.clone()),
                        ),
                    ));
                    let s1 = b.mp(cong, sym);
                    let kltb = b.mp(s1, klt);
                    // (∀v<bound body) → ∀v(v<bound → body) → (k<bound → body[k])
                    let unb = Formula::forall(
                        *v,
                        Formula::implies(Formula::Lt(Term::Var(*v), bound.clone()), (**body).clone()),
                    );
                    let bdef = b.bounded_def(Formula::implies(phi.clone(), unb.clone()));
                    let instd = Formula::implies(
                        Formula::Lt(n(k), bound.clone()),
                        inst.clone(),
                    );
                    let ui = b.univ_inst(Formula::implies(unb, instd.clone()));
                    let chain = b.compose(bdef, ui);
                    // ((Φ → (K → I)) ∧ K ∧ ¬I) → ¬Φ
                    let fchain = b.formula(chain).clone();
                    let fk = b.formula(kltb).clone();
                    let fni = b.formula(refuted).clone();
                    let t = b.taut(Formula::implies(
                        fchain,
                        Formula::implies(
                            fk,
                            Formula::implies(fni, Formula::not(phi.clone())),
                        ),
                    ));
                    let s = b.mp(t, chain);
                    let s = b.mp(s, kltb);
                    Ok(b.mp(s, refuted))
                }
            }
            Formula::ExistsLt(v, bound, body) => {
                if want {
                    let (ebound, m) = self.prove_term_value(b, bound)?;
                    let mut witness = None;
                    for k in 0..m {
                        let inst = body.substitute_numeral(*v, k);
                        if self.truth(&inst)?.is_true() {
                            witness = Some(k);
                            break;
                        }
                    }
                    let Some(k) = witness else {
                        return Err(SynthError::CannotWitness(
                            "no determinate witness below the bound".into(),
                        ));
                    };
                    let inst = body.substitute_numeral(*v, k);
                    let proven = self.prove_closed(b, &inst, true)?;
                    let klt = self.prove_numeral_lt(b, k, m);
                    let sym = self.eq_symm(b, ebound);
                    let cong = b.eq_axiom(Formula::implies(
                        Formula::Eq(n(m), bound.clone()),
                        Formula::implies(
                            Formula::Lt(n(k), n(m)),
                            Formula::Lt(n(k), bound.clone()),
                        ),
                    ));
                    let s1 = b.mp(cong, sym);
                    let kltb = b.mp(s1, klt);
                    let both = b.and_intro(kltb, proven);
                    // ∃v (v<bound ∧ body) by introduction at k, then the bounded form
                    let unb_body = Formula::and(
                        Formula::Lt(Term::Var(*v), bound.clone()),
                        (**body).clone(),
                    );
                    let unb = Formula::exists(*v, unb_body.clone());
                    let intro =
                        b.exists_intro(Formula::implies(b.formula(both).clone(), unb.clone()));
                    let got = b.mp(intro, both);
                    let bdef = b.bounded_def(Formula::implies(unb, phi.clone()));
                    Ok(b.mp(bdef, got))
                } else {
                    // every instance below the bound refutes; mirror the ∀ case
                    let neg_body = Formula::not((**body).clone());
                    let all_neg = self.prove_bounded_forall(
                        b,
                        *v,
                        bound,
                        &neg_body,
                        &mut |s, b, inst| {
                            let Formula::Not(inner) = &inst else {
                                unreachable!()
                            };
                            s.prove_closed(b, inner, false)
                        },
                    )?;
                    // (∃v<bound body) → ∃v(v<bound ∧ body); and ∀v<bound ¬body
                    // refutes the unbounded existential via elimination to ⊥.
                    let unb_body = Formula::and(
                        Formula::Lt(Term::Var(*v), bound.clone()),
                        (**body).clone(),
                    );
                    let unb = Formula::exists(*v, unb_body.clone());
                    let bot = Formula::falsum();
                    // under hypothesis (v<bound ∧ body): from ∀v<bound ¬body
                    // instantiate and contradict
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
                    let inst_neg = self.forall_elim(b, unbn, &Term::Var(*v));
                    let neg = b.mp(inst_neg, got_lt);
                    // body ∧ ¬body → ⊥
                    let fb = b.formula(got_body).clone();
                    let fn_ = b.formula(neg).clone();
                    let t = b.taut(Formula::implies(
                        fb,
                        Formula::implies(fn_, bot.clone()),
                    ));
                    let s = b.mp(t, got_body);
                    let botl = b.mp(s, neg);
                    let imp = b.discharge(botl);
                    let gen = b.gen(imp, *v);
                    let elim = b.exists_elim(Formula::implies(
                        b.formula(gen).clone(),
                        Formula::implies(unb.clone(), bot.clone()),
                    ));
                    let refute_unb = b.mp(elim, gen);
                    let not_bot = self.prove_numeral_neq(b, 0, 1);
                    // ((E→⊥) ∧ ¬⊥) → ¬E
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
            Formula::Forall(_, _) | Formula::Exists(_, _) => Err(SynthError::Unsupported(
                "unbounded quantifier in finitary synthesis".into(),
            )),
            Formula::ForallSet(_, _) | Formula::ExistsSet(_, _) => Err(SynthError::Unsupported(
                "second-order quantifier in finitary synthesis".into(),
            )),
        }
    }

    /// Proves `∀v<bound body` given a per-instance prover, by the downward
    /// chain `v<N(k) → body` for k = 0..m.
    pub fn prove_bounded_forall(
        &self,
        b: &mut ProofBuilder,
        v: Var,
        bound: &Term,
        body: &Formula,
        prove_instance: &mut dyn FnMut(&Synth, &mut ProofBuilder, Formula) -> Result<usize, SynthError>,
    ) -> Result<usize, SynthError> {
        assert!(!bound.free_vars().contains(&v), "bound captures its own variable");
        let (ebound, m) = self.prove_term_value(b, bound)?;
        let xt = Term::Var(v);
        // chain: v<N(k) → body, upward from the vacuous base
        let lz = self.use_q(b, QAx::LtZero, &[xt.clone()]);
        let base_goal = Formula::implies(Formula::Lt(xt.clone(), n(0)), body.clone());
        let t = b.taut(Formula::implies(b.formula(lz).clone(), base_goal.clone()));
        let mut chain = b.mp(t, lz);
        for k in 0..m {
            let inst = body.substitute_numeral(v, k);
            let inst_idx = prove_instance(self, b, inst.clone())?;
            // v=N(k) → body: via symmetry and replacement
            let leib = self.leibniz(b, v, &n(k), &xt, body)?;
            // leib: (N(k)=v) → (body[k] → body)
            let sym_ax = b.eq_axiom(Formula::implies(
                Formula::Eq(xt.clone(), n(k)),
                Formula::Eq(n(k), xt.clone()),
            ));
            let lifted = b.compose(sym_ax, leib); // (v=N(k)) → (body[k] → body)
            let finst = b.formula(inst_idx).clone();
            let flift = b.formula(lifted).clone();
            let eq_imp_goal =
                Formula::implies(Formula::Eq(xt.clone(), n(k)), body.clone());
            let t = b.taut(Formula::implies(
                flift,
                Formula::implies(finst, eq_imp_goal.clone()),
            ));
            let s = b.mp(t, lifted);
            let eq_imp = b.mp(s, inst_idx);
            // split: v<N(k+1) → (v<N(k) ∨ v=N(k)), with the 0+1 rewrite at k=0
            let split = if k == 0 {
                let one_succ = b.axiom(q_axiom(QAx::OneSucc));
                let cong = b.eq_axiom(Formula::implies(
                    Formula::Eq(Term::One, Term::add(Term::Zero, Term::One)),
                    Formula::implies(
                        Formula::Lt(xt.clone(), Term::One),
                        Formula::Lt(xt.clone(), Term::add(Term::Zero, Term::One)),
                    ),
                ));
                let rewrite = b.mp(cong, one_succ);
                let raw = self.use_q(b, QAx::LtSuccSplit, &[xt.clone(), Term::Zero]);
                b.compose(rewrite, raw)
            } else {
                self.use_q(b, QAx::LtSuccSplit, &[xt.clone(), n(k)])
            };
            // ((A→(B∨C)) ∧ (B→φ) ∧ (C→φ)) → (A→φ)
            let fsplit = b.formula(split).clone();
            let fchain = b.formula(chain).clone();
            let feq = b.formula(eq_imp).clone();
            let goal = Formula::implies(Formula::Lt(xt.clone(), n(k + 1)), body.clone());
            let t = b.taut(Formula::implies(
                fsplit,
                Formula::implies(fchain, Formula::implies(feq, goal.clone())),
            ));
            let s = b.mp(t, split);
            let s = b.mp(s, chain);
            chain = b.mp(s, eq_imp);
        }
        // v<bound → v<N(m) via the bound's value, then compose
        let cong = b.eq_axiom(Formula::implies(
            Formula::Eq(bound.clone(), n(m)),
            Formula::implies(
                Formula::Lt(xt.clone(), bound.clone()),
                Formula::Lt(xt.clone(), n(m)),
            ),
        ));
        let rewrite = b.mp(cong, ebound);
        let full = b.compose(rewrite, chain); // v<bound → body
        let gen = b.gen(full, v);
        let target = Formula::forall_lt(v, bound.clone(), body.clone());
        let bdef = b.bounded_def(Formula::implies(b.formula(gen).clone(), target));
        Ok(b.mp(bdef, gen))
    }

    /// Equality replacement: `⊢ (s=t) → (φ[v/s] → φ[v/t])`. Requires that no
    /// quantifier of φ binds a variable of `s` or `t`.
    pub fn leibniz(
        &self,
        b: &mut ProofBuilder,
        v: Var,
        s: &Term,
        t: &Term,
        phi: &Formula,
    ) -> Result<usize, SynthError> {
        let hyp = Formula::Eq(s.clone(), t.clone());
        let h = b.assume(hyp);
        let inner = match self.leibniz_pos(b, v, s, t, phi, h) {
            Ok(i) => i,
            Err(e) => {
                // close the scope before propagating
                let dummy = b.taut(Formula::implies(
                    Formula::verum(),
                    Formula::verum(),
                ));
                b.discharge(dummy);
                return Err(e);
            }
        };
        Ok(b.discharge(inner))
    }

    /// Under a line `eq: ⊢ s = t`, derives `⊢ φ[v/s] → φ[v/t]`.
    fn leibniz_pos(
        &self,
        b: &mut ProofBuilder,
        v: Var,
        s: &Term,
        t: &Term,
        phi: &Formula,
        eq: usize,
    ) -> Result<usize, SynthError> {
        if !phi.free_vars().contains(&v) {
            let f = phi.clone();
            return Ok(b.taut(Formula::implies(f.clone(), f)));
        }
        match phi {
            Formula::Eq(u1, u2) => {
                let l1 = self.leibniz_term(b, v, s, t, u1, eq);
                let l2 = self.leibniz_term(b, v, s, t, u2, eq);
                let u1s = u1.substitute(v, s);
                let u1t = u1.substitute(v, t);
                let u2s = u2.substitute(v, s);
                let u2t = u2.substitute(v, t);
                // (u1s=u1t) → ((u1s=u2s) → (u1t=u2s))
                let c1 = b.eq_axiom(Formula::implies(
                    Formula::Eq(u1s.clone(), u1t.clone()),
                    Formula::implies(
                        Formula::Eq(u1s.clone(), u2s.clone()),
                        Formula::Eq(u1t.clone(), u2s.clone()),
                    ),
                ));
                let i1 = b.mp(c1, l1);
                // (u2s=u2t) → ((u1t=u2s) → (u1t=u2t))
                let c2 = b.eq_axiom(Formula::implies(
                    Formula::Eq(u2s.clone(), u2t.clone()),
                    Formula::implies(
                        Formula::Eq(u1t.clone(), u2s),
                        Formula::Eq(u1t, u2t),
                    ),
                ));
                let i2 = b.mp(c2, l2);
                Ok(b.compose(i1, i2))
            }
            Formula::Lt(u1, u2) => {
                let l1 = self.leibniz_term(b, v, s, t, u1, eq);
                let l2 = self.leibniz_term(b, v, s, t, u2, eq);
                let u1s = u1.substitute(v, s);
                let u1t = u1.substitute(v, t);
                let u2s = u2.substitute(v, s);
                let u2t = u2.substitute(v, t);
                let c1 = b.eq_axiom(Formula::implies(
                    Formula::Eq(u1s.clone(), u1t.clone()),
                    Formula::implies(
                        Formula::Lt(u1s.clone(), u2s.clone()),
                        Formula::Lt(u1t.clone(), u2s.clone()),
                    ),
                ));
                let i1 = b.mp(c1, l1);
                let c2 = b.eq_axiom(Formula::implies(
                    Formula::Eq(u2s.clone(), u2t.clone()),
                    Formula::implies(
                        Formula::Lt(u1t.clone(), u2s),
                        Formula::Lt(u1t, u2t),
                    ),
                ));
                let i2 = b.mp(c2, l2);
                Ok(b.compose(i1, i2))
            }
            Formula::In(u, x) => {
                let l = self.leibniz_term(b, v, s, t, u, eq);
                let us = u.substitute(v, s);
                let ut = u.substitute(v, t);
                let c = b.eq_axiom(Formula::implies(
                    Formula::Eq(us.clone(), ut.clone()),
                    Formula::implies(Formula::In(us, *x), Formula::In(ut, *x)),
                ));
                Ok(b.mp(c, l))
            }
            Formula::Oracle(u) => {
                let l = self.leibniz_term(b, v, s, t, u, eq);
                let us = u.substitute(v, s);
                let ut = u.substitute(v, t);
                let c = b.eq_axiom(Formula::implies(
                    Formula::Eq(us.clone(), ut.clone()),
                    Formula::implies(Formula::Oracle(us), Formula::Oracle(ut)),
                ));
                Ok(b.mp(c, l))
            }
            Formula::Not(g) => {
                let sym = self.eq_symm(b, eq);
                let rev = self.leibniz_pos(b, v, t, s, g, sym)?;
                let frev = b.formula(rev).clone();
                let goal = Formula::implies(
                    Formula::not(g.substitute_term(v, s)),
                    Formula::not(g.substitute_term(v, t)),
                );
                let tt = b.taut(Formula::implies(frev, goal));
                Ok(b.mp(tt, rev))
            }
            Formula::And(p, q) => {
                let ip = self.leibniz_pos(b, v, s, t, p, eq)?;
                let iq = self.leibniz_pos(b, v, s, t, q, eq)?;
                let (fp, fq) = (b.formula(ip).clone(), b.formula(iq).clone());
                let goal = Formula::implies(
                    phi.substitute_term(v, s),
                    phi.substitute_term(v, t),
                );
                let tt = b.taut(Formula::implies(fp, Formula::implies(fq, goal)));
                let step = b.mp(tt, ip);
                Ok(b.mp(step, iq))
            }
            Formula::Or(p, q) => {
                let ip = self.leibniz_pos(b, v, s, t, p, eq)?;
                let iq = self.leibniz_pos(b, v, s, t, q, eq)?;
                let (fp, fq) = (b.formula(ip).clone(), b.formula(iq).clone());
                let goal = Formula::implies(
                    phi.substitute_term(v, s),
                    phi.substitute_term(v, t),
                );
                let tt = b.taut(Formula::implies(fp, Formula::implies(fq, goal)));
                let step = b.mp(tt, ip);
                Ok(b.mp(step, iq))
            }
            Formula::Implies(p, q) => {
                let sym = self.eq_symm(b, eq);
                let ip = self.leibniz_pos(b, v, t, s, p, sym)?; // contravariant
                let iq = self.leibniz_pos(b, v, s, t, q, eq)?;
                let (fp, fq) = (b.formula(ip).clone(), b.formula(iq).clone());
                let goal = Formula::implies(
                    phi.substitute_term(v, s),
                    phi.substitute_term(v, t),
                );
                let tt = b.taut(Formula::implies(fp, Formula::implies(fq, goal)));
                let step = b.mp(tt, ip);
                Ok(b.mp(step, iq))
            }
            Formula::Forall(w, g) => {
                if s.free_vars().contains(w) || t.free_vars().contains(w) {
                    return Err(SynthError::Unsupported(
                        "replacement under a capturing quantifier".into(),
                    ));
                }
                let pointwise = self.leibniz_pos(b, v, s, t, g, eq)?;
                let gs = Formula::forall(*w, g.substitute_term(v, s));
                let h = b.assume(gs.clone());
                let inst = self.forall_elim(b, h, &Term::Var(*w));
                let step = b.mp(pointwise, inst);
                let gen = b.gen(step, *w);
                Ok(b.discharge(gen))
            }
            Formula::Exists(w, g) => {
                if s.free_vars().contains(w) || t.free_vars().contains(w) {
                    return Err(SynthError::Unsupported(
                        "replacement under a capturing quantifier".into(),
                    ));
                }
                let pointwise = self.leibniz_pos(b, v, s, t, g, eq)?;
                let gt = Formula::exists(*w, g.substitute_term(v, t));
                let intro = b.exists_intro(Formula::implies(
                    g.substitute_term(v, t),
                    gt.clone(),
                ));
                let comp = b.compose(pointwise, intro);
                let gen = b.gen(comp, *w);
                let elim = b.exists_elim(Formula::implies(
                    b.formula(gen).clone(),
                    Formula::implies(Formula::exists(*w, g.substitute_term(v, s)), gt),
                ));
                Ok(b.mp(elim, gen))
            }
            Formula::ForallLt(w, bound, g) => {
                let unb = Formula::forall(
                    *w,
                    Formula::implies(Formula::Lt(Term::Var(*w), bound.clone()), (**g).clone()),
                );
                self.leibniz_via_bounded(b, v, s, t, phi, &unb, eq)
            }
            Formula::ExistsLt(w, bound, g) => {
                let unb = Formula::exists(
                    *w,
                    Formula::and(Formula::Lt(Term::Var(*w), bound.clone()), (**g).clone()),
                );
                self.leibniz_via_bounded(b, v, s, t, phi, &unb, eq)
            }
            Formula::ForallSet(_, _) | Formula::ExistsSet(_, _) => Err(SynthError::Unsupported(
                "second-order quantifier in replacement".into(),
            )),
        }
    }

    fn leibniz_via_bounded(
        &self,
        b: &mut ProofBuilder,
        v: Var,
        s: &Term,
        t: &Term,
        bounded: &Formula,
        unbounded: &Formula,
        eq: usize,
    ) -> Result<usize, SynthError> {
        let inner = self.leibniz_pos(b, v, s, t, unbounded, eq)?;
        let open_s = b.bounded_def(Formula::implies(
            bounded.substitute_term(v, s),
            unbounded.substitute_term(v, s),
        ));
        let close_t = b.bounded_def(Formula::implies(
            unbounded.substitute_term(v, t),
            bounded.substitute_term(v, t),
        ));
        let step = b.compose(open_s, inner);
        Ok(b.compose(step, close_t))
    }

    /// Under `eq: ⊢ s = t`, derives `⊢ u[v/s] = u[v/t]`.
    fn leibniz_term(
        &self,
        b: &mut ProofBuilder,
        v: Var,
        s: &Term,
        t: &Term,
        u: &Term,
        eq: usize,
    ) -> usize {
        if !u.free_vars().contains(&v) {
            let fixed = u.clone();
            return b.eq_axiom(Formula::Eq(fixed.clone(), fixed));
        }
        if *u == Term::Var(v) {
            return eq;
        }
        match u {
            Term::Add(u1, u2) | Term::Mul(u1, u2) | Term::Exp(u1, u2) | Term::Pair(u1, u2) => {
                let rebuild = |a: Term, c: Term| match u {
                    Term::Add(_, _) => Term::add(a, c),
                    Term::Mul(_, _) => Term::mul(a, c),
                    Term::Exp(_, _) => Term::exp(a, c),
                    Term::Pair(_, _) => Term::pair(a, c),
                    _ => unreachable!(),
                };
                let l1 = self.leibniz_term(b, v, s, t, u1, eq);
                let l2 = self.leibniz_term(b, v, s, t, u2, eq);
                let u1s = u1.substitute(v, s);
                let u1t = u1.substitute(v, t);
                let u2s = u2.substitute(v, s);
                let u2t = u2.substitute(v, t);
                // op(u1s,u2s) = op(u1t,u2s) = op(u1t,u2t)
                let c1 = b.eq_axiom(Formula::implies(
                    Formula::Eq(u1s.clone(), u1t.clone()),
                    Formula::Eq(
                        rebuild(u1s.clone(), u2s.clone()),
                        rebuild(u1t.clone(), u2s.clone()),
                    ),
                ));
                let e1 = b.mp(c1, l1);
                let c2 = b.eq_axiom(Formula::implies(
                    Formula::Eq(u2s.clone(), u2t.clone()),
                    Formula::Eq(rebuild(u1t.clone(), u2s), rebuild(u1t, u2t)),
                ));
                let e2 = b.mp(c2, l2);
                self.chain_eq(b, &[e1, e2])
            }
            Term::Proj(side, inner) => {
                let l = self.leibniz_term(b, v, s, t, inner, eq);
                self.cong_step(b, l, |x| Term::proj(*side, x))
            }
            Term::Zero | Term::One | Term::Var(_) => unreachable!("handled above"),
        }
    }
}

impl Synth<'_> {
    /// From `⊢ A → B`, derives `⊢ ∀w A → ∀w B`.
    pub fn forall_mono(&self, b: &mut ProofBuilder, imp: usize, w: Var) -> usize {
        let Formula::Implies(a, _) = b.formula(imp).clone() else {
            panic!("forall_mono on a non-implication");
        };
        let h = b.assume(Formula::forall(w, (*a).clone()));
        let inst = self.forall_elim(b, h, &Term::Var(w));
        let step = b.mp(imp, inst);
        let gen = b.gen(step, w);
        b.discharge(gen)
    }

    /// From `⊢ A → B`, derives `⊢ ∃w A → ∃w B`.
    pub fn exists_mono(&self, b: &mut ProofBuilder, imp: usize, w: Var) -> usize {
        let Formula::Implies(_, bb) = b.formula(imp).clone() else {
            panic!("exists_mono on a non-implication");
        };
        let target = Formula::exists(w, (*bb).clone());
        let intro = b.exists_intro(Formula::implies((*bb).clone(), target.clone()));
        let comp = b.compose(imp, intro);
        let gen = b.gen(comp, w);
        let fgen = b.formula(gen).clone();
        let Formula::Forall(_, inner) = &fgen else {
            unreachable!()
        };
        let Formula::Implies(a, _) = &**inner else {
            unreachable!()
        };
        let elim = b.exists_elim(Formula::implies(
            fgen.clone(),
            Formula::implies(Formula::exists(w, (**a).clone()), target),
        ));
        b.mp(elim, gen)
    }

    /// Attempts a finitary proof of a possibly open formula: closed subgoals
    /// go through the decision route, open ones through tautologies, equality
    /// axioms, theory-axiom matching, and structural recursion (including
    /// generalization, so universally quantified axiom consequences work).
    pub fn prove_schematic(&self, b: &mut ProofBuilder, phi: &Formula) -> Result<usize, SynthError> {
        if phi.is_sentence() && phi.free_set_vars().is_empty() {
            if let Ok(i) = self.prove_closed(b, phi, true) {
                return Ok(i);
            }
        }
        if crate::proof::is_tautology(phi).unwrap_or(false) {
            return Ok(b.taut(phi.clone()));
        }
        if let Formula::Eq(s, t) = phi {
            if s == t {
                return Ok(b.eq_axiom(phi.clone()));
            }
        }
        if let Some(i) = self.try_axiom_match(b, phi) {
            return Ok(i);
        }
        match phi {
            Formula::And(p, q) => {
                let ip = self.prove_schematic(b, p)?;
                let iq = self.prove_schematic(b, q)?;
                Ok(b.and_intro(ip, iq))
            }
            Formula::Or(p, q) => {
                let attempt = self.prove_schematic(b, p).map(|i| (i, true));
                let (side, left) = match attempt {
                    Ok(x) => x,
                    Err(_) => (self.prove_schematic(b, q)?, false),
                };
                Ok(b.or_intro(
                    side,
                    if left { (**q).clone() } else { (**p).clone() },
                    left,
                ))
            }
            Formula::Implies(p, q) => {
                if let Ok(iq) = self.prove_schematic(b, q) {
                    let fq = b.formula(iq).clone();
                    let t = b.taut(Formula::implies(fq, phi.clone()));
                    return Ok(b.mp(t, iq));
                }
                if p.is_sentence() {
                    if let Ok(ip) = self.prove_closed(b, p, false) {
                        let fp = b.formula(ip).clone();
                        let t = b.taut(Formula::implies(fp, phi.clone()));
                        return Ok(b.mp(t, ip));
                    }
                }
                Err(SynthError::CannotWitness(
                    "schematic implication not provable".into(),
                ))
            }
            Formula::Forall(w, body) => {
                let inner = self.prove_schematic(b, body)?;
                Ok(b.gen(inner, *w))
            }
            Formula::Exists(w, body) => {
                for k in 0..self.caps.quantifier {
                    let inst = body.substitute_numeral(*w, k);
                    if let Ok(i) = self.prove_schematic(b, &inst) {
                        let intro =
                            b.exists_intro(Formula::implies(inst, phi.clone()));
                        return Ok(b.mp(intro, i));
                    }
                }
                Err(SynthError::CannotWitness(
                    "no provable witness below the cap".into(),
                ))
            }
            Formula::ForallLt(v, bound, body) => {
                if bound.is_closed() {
                    self.prove_bounded_forall(b, *v, bound, body, &mut |s, b, inst| {
                        s.prove_schematic(b, &inst)
                    })
                } else {
                    Err(SynthError::Unsupported(
                        "schematic bounded quantifier with an open bound".into(),
                    ))
                }
            }
            Formula::ExistsLt(v, bound, body) => {
                if !bound.is_closed() {
                    return Err(SynthError::Unsupported(
                        "schematic bounded quantifier with an open bound".into(),
                    ));
                }
                let (ebound, m) = self.prove_term_value(b, bound)?;
                for k in 0..m {
                    let inst = body.substitute_numeral(*v, k);
                    if let Ok(i) = self.prove_schematic(b, &inst) {
                        let klt = self.prove_numeral_lt(b, k, m);
                        let sym = self.eq_symm(b, ebound);
                        let cong = b.eq_axiom(Formula::implies(
                            Formula::Eq(n(m), bound.clone()),
                            Formula::implies(
                                Formula::Lt(n(k), n(m)),
                                Formula::Lt(n(k), bound.clone()),
                            ),
                        ));
                        let s1 = b.mp(cong, sym);
                        let kltb = b.mp(s1, klt);
                        let both = b.and_intro(kltb, i);
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
                Err(SynthError::CannotWitness(
                    "no provable witness below the bound".into(),
                ))
            }
            Formula::Not(inner) if inner.is_sentence() => self.prove_closed(b, inner, false),
            _ => Err(SynthError::CannotWitness(format!(
                "no schematic route for {phi:?}"
            ))),
        }
    }

    /// Matches `phi` against the body of a universally closed theory axiom and
    /// instantiates it on success.
    fn try_axiom_match(&self, b: &mut ProofBuilder, phi: &Formula) -> Option<usize> {
        let axioms: Vec<Formula> = self
            .theory
            .base
            .base_axioms()
            .iter()
            .chain(self.theory.extra_axioms.iter())
            .cloned()
            .collect();
        for ax in axioms {
            let mut binders = Vec::new();
            let mut body = &ax;
            while let Formula::Forall(v, inner) = body {
                binders.push(*v);
                body = inner;
            }
            if binders.is_empty() {
                continue;
            }
            if let Some(subst) = match_axiom_body(body, phi, &binders) {
                // every binder needs a term; unconstrained ones take 0
                let args: Vec<Term> = binders
                    .iter()
                    .map(|v| subst.get(v).cloned().unwrap_or(Term::Zero))
                    .collect();
                let mut ok = true;
                let mut probe = body.clone();
                for (v, t) in binders.iter().zip(args.iter()) {
                    if !probe.free_for(*v, t) {
                        ok = false;
                        break;
                    }
                    probe = probe.substitute_term(*v, t);
                }
                if ok && &probe == phi {
                    return Some(self.use_axiom(b, ax, &args));
                }
            }
        }
        None
    }

    /// The implication from a formula's negation normal form back to the
    /// formula: `⊢ nnf(φ) → φ`.
    pub fn prove_nnf_bridge(&self, b: &mut ProofBuilder, phi: &Formula) -> Result<usize, SynthError> {
        self.nnf_dir(b, phi, true)
    }

    /// positive: ⊢ nnf(φ) → φ; negative: ⊢ nnf(¬φ) → ¬φ.
    fn nnf_dir(&self, b: &mut ProofBuilder, phi: &Formula, positive: bool) -> Result<usize, SynthError> {
        let target = if positive {
            phi.clone()
        } else {
            Formula::not(phi.clone())
        };
        let source = target.nnf_atoms().map_err(|_| {
            SynthError::Unsupported("second-order quantifier in nnf bridge".into())
        })?;
        if source == target {
            return Ok(b.taut(Formula::implies(source, target)));
        }
        match phi {
            Formula::Eq(_, _) | Formula::Lt(_, _) | Formula::In(_, _) | Formula::Oracle(_) => {
                Ok(b.taut(Formula::implies(source, target)))
            }
            Formula::Not(g) => {
                if positive {
                    // nnf(¬g) → ¬g
                    self.nnf_dir(b, g, false)
                } else {
                    // nnf(g) → ¬¬g
                    let inner = self.nnf_dir(b, g, true)?;
                    let fi = b.formula(inner).clone();
                    let Formula::Implies(_, gpos) = &fi else {
                        unreachable!()
                    };
                    let dn = b.taut(Formula::implies(
                        (**gpos).clone(),
                        Formula::not(Formula::not((**gpos).clone())),
                    ));
                    Ok(b.compose(inner, dn))
                }
            }
            Formula::And(p, q) => {
                let (ip, iq) = if positive {
                    (self.nnf_dir(b, p, true)?, self.nnf_dir(b, q, true)?)
                } else {
                    (self.nnf_dir(b, p, false)?, self.nnf_dir(b, q, false)?)
                };
                let (fp, fq) = (b.formula(ip).clone(), b.formula(iq).clone());
                let goal = Formula::implies(source, target);
                let t = b.taut(Formula::implies(fp, Formula::implies(fq, goal)));
                let s = b.mp(t, ip);
                let s = b.mp(s, iq);
                Ok(s)
            }
            Formula::Or(p, q) => {
                let (ip, iq) = if positive {
                    (self.nnf_dir(b, p, true)?, self.nnf_dir(b, q, true)?)
                } else {
                    (self.nnf_dir(b, p, false)?, self.nnf_dir(b, q, false)?)
                };
                let (fp, fq) = (b.formula(ip).clone(), b.formula(iq).clone());
                let goal = Formula::implies(source, target);
                let t = b.taut(Formula::implies(fp, Formula::implies(fq, goal)));
                let s = b.mp(t, ip);
                Ok(b.mp(s, iq))
            }
            Formula::Implies(p, q) => {
                let (ip, iq) = if positive {
                    // nnf(φ) = nnf(¬p) ∨ nnf(q)
                    (self.nnf_dir(b, p, false)?, self.nnf_dir(b, q, true)?)
                } else {
                    // nnf(¬φ) = nnf(p) ∧ nnf(¬q)
                    (self.nnf_dir(b, p, true)?, self.nnf_dir(b, q, false)?)
                };
                let (fp, fq) = (b.formula(ip).clone(), b.formula(iq).clone());
                let goal = Formula::implies(source, target);
                let t = b.taut(Formula::implies(fp, Formula::implies(fq, goal)));
                let s = b.mp(t, ip);
                Ok(b.mp(s, iq))
            }
            Formula::Forall(w, g) => {
                if positive {
                    // ∀w nnf(g) → ∀w g
                    let inner = self.nnf_dir(b, g, true)?;
                    Ok(self.forall_mono(b, inner, *w))
                } else {
                    // ∃w nnf(¬g) → ¬∀w g
                    let inner = self.nnf_dir(b, g, false)?; // nnf(¬g) → ¬g
                    let ui = b.univ_inst(Formula::implies(phi.clone(), (**g).clone()));
                    let fui = b.formula(ui).clone();
                    let contra = b.taut(Formula::implies(
                        fui,
                        Formula::implies(Formula::not((**g).clone()), target.clone()),
                    ));
                    let lifted = b.mp(contra, ui); // ¬g → ¬∀w g
                    let chained = b.compose(inner, lifted); // nnf(¬g) → ¬∀w g
                    let gen = b.gen(chained, *w);
                    let fgen = b.formula(gen).clone();
                    let elim = b.exists_elim(Formula::implies(
                        fgen,
                        Formula::implies(source, target),
                    ));
                    Ok(b.mp(elim, gen))
                }
            }
            Formula::Exists(w, g) => {
                if positive {
                    let inner = self.nnf_dir(b, g, true)?;
                    Ok(self.exists_mono(b, inner, *w))
                } else {
                    // ∀w nnf(¬g) → ¬∃w g, by refutation through ⊥
                    let inner = self.nnf_dir(b, g, false)?; // nnf(¬g) → ¬g
                    let bot = Formula::falsum();
                    let h = b.assume(source.clone());
                    let inst = self.forall_elim(b, h, &Term::Var(*w));
                    let ng = b.mp(inner, inst); // ¬g under hypothesis
                    let fng = b.formula(ng).clone();
                    let t = b.taut(Formula::implies(
                        fng,
                        Formula::implies((**g).clone(), bot.clone()),
                    ));
                    let s = b.mp(t, ng); // g → ⊥
                    let gen = b.gen(s, *w);
                    let fgen = b.formula(gen).clone();
                    let elim = b.exists_elim(Formula::implies(
                        fgen,
                        Formula::implies(phi.clone(), bot.clone()),
                    ));
                    let got = b.mp(elim, gen); // φ → ⊥, under hypothesis source
                    let not_bot = self.prove_numeral_neq(b, 0, 1);
                    let (fg, fnb) = (b.formula(got).clone(), b.formula(not_bot).clone());
                    let t2 = b.taut(Formula::implies(
                        fg,
                        Formula::implies(fnb, target.clone()),
                    ));
                    let s2 = b.mp(t2, got);
                    let nphi = b.mp(s2, not_bot);
                    Ok(b.discharge(nphi))
                }
            }
            Formula::ForallLt(w, bound, g) => {
                let inner = if positive {
                    self.nnf_dir(b, g, true)?
                } else {
                    return self.nnf_bounded_neg(b, phi, *w, bound, g, true);
                };
                // (∀w<u nnf g) → ∀w(w<u → nnf g) → ∀w(w<u → g) → (∀w<u g)
                let src_unb = Formula::forall(
                    *w,
                    Formula::implies(
                        Formula::Lt(Term::Var(*w), bound.clone()),
                        g.nnf_atoms().unwrap(),
                    ),
                );
                let open = b.bounded_def(Formula::implies(source.clone(), src_unb.clone()));
                let fi = b.formula(inner).clone();
                let Formula::Implies(ng, _) = &fi else {
                    unreachable!()
                };
                let guard_imp = b.taut(Formula::implies(
                    fi.clone(),
                    Formula::implies(
                        Formula::implies(
                            Formula::Lt(Term::Var(*w), bound.clone()),
                            (**ng).clone(),
                        ),
                        Formula::implies(
                            Formula::Lt(Term::Var(*w), bound.clone()),
                            (**g).clone(),
                        ),
                    ),
                ));
                let guarded = b.mp(guard_imp, inner);
                let mono = self.forall_mono(b, guarded, *w);
                let step = b.compose(open, mono);
                let close = b.bounded_def(Formula::implies(
                    Formula::forall(
                        *w,
                        Formula::implies(
                            Formula::Lt(Term::Var(*w), bound.clone()),
                            (**g).clone(),
                        ),
                    ),
                    target.clone(),
                ));
                Ok(b.compose(step, close))
            }
            Formula::ExistsLt(w, bound, g) => {
                if positive {
                    let inner = self.nnf_dir(b, g, true)?;
                    let fi = b.formula(inner).clone();
                    let Formula::Implies(ng, _) = &fi else {
                        unreachable!()
                    };
                    let guard_imp = b.taut(Formula::implies(
                        fi.clone(),
                        Formula::implies(
                            Formula::and(
                                Formula::Lt(Term::Var(*w), bound.clone()),
                                (**ng).clone(),
                            ),
                            Formula::and(
                                Formula::Lt(Term::Var(*w), bound.clone()),
                                (**g).clone(),
                            ),
                        ),
                    ));
                    let guarded = b.mp(guard_imp, inner);
                    let mono = self.exists_mono(b, guarded, *w);
                    let open = b.bounded_def(Formula::implies(
                        source.clone(),
                        Formula::exists(
                            *w,
                            Formula::and(
                                Formula::Lt(Term::Var(*w), bound.clone()),
                                g.nnf_atoms().unwrap(),
                            ),
                        ),
                    ));
                    let step = b.compose(open, mono);
                    let close = b.bounded_def(Formula::implies(
                        Formula::exists(
                            *w,
                            Formula::and(
                                Formula::Lt(Term::Var(*w), bound.clone()),
                                (**g).clone(),
                            ),
                        ),
                        target.clone(),
                    ));
                    Ok(b.compose(step, close))
                } else {
                    self.nnf_bounded_neg(b, phi, *w, bound, g, false)
                }
            }
            Formula::ForallSet(_, _) | Formula::ExistsSet(_, _) => Err(SynthError::Unsupported(
                "second-order quantifier in nnf bridge".into(),
            )),
        }
    }

    /// Negative direction across a bounded quantifier:
    /// `∃w<u nnf(¬g) → ¬∀w<u g` (`was_forall`) or `∀w<u nnf(¬g) → ¬∃w<u g`.
    fn nnf_bounded_neg(
        &self,
        b: &mut ProofBuilder,
        phi: &Formula,
        w: Var,
        bound: &Term,
        g: &Formula,
        was_forall: bool,
    ) -> Result<usize, SynthError> {
        let inner = self.nnf_dir(b, g, false)?; // nnf(¬g) → ¬g
        let fi = b.formula(inner).clone();
        let Formula::Implies(ng_nnf, _) = &fi else {
            unreachable!()
        };
        let ng_nnf = (**ng_nnf).clone();
        let wlt = Formula::Lt(Term::Var(w), bound.clone());
        if was_forall {
            // source: ∃w<u nnf(¬g); target: ¬∀w<u g
            let target = Formula::not(phi.clone());
            let source = Formula::exists_lt(w, bound.clone(), ng_nnf.clone());
            // under hypothesis (w<u ∧ nnf¬g): φ → ⊥-style refutation
            let h = b.assume(Formula::and(wlt.clone(), ng_nnf.clone()));
            let got_lt = b.and_elim(h, true);
            let got_n = b.and_elim(h, false);
            let ng = b.mp(inner, got_n);
            let bdef = b.bounded_def(Formula::implies(
                phi.clone(),
                Formula::forall(w, Formula::implies(wlt.clone(), (*g).clone())),
            ));
            let ui = b.univ_inst(Formula::implies(
                Formula::forall(w, Formula::implies(wlt.clone(), (*g).clone())),
                Formula::implies(wlt.clone(), (*g).clone()),
            ));
            let chain = b.compose(bdef, ui); // φ → (w<u → g)
            let fchain = b.formula(chain).clone();
            let (flt, fng) = (b.formula(got_lt).clone(), b.formula(ng).clone());
            let t = b.taut(Formula::implies(
                fchain,
                Formula::implies(flt, Formula::implies(fng, target.clone())),
            ));
            let s = b.mp(t, chain);
            let s = b.mp(s, got_lt);
            let nphi = b.mp(s, ng);
            let disc = b.discharge(nphi);
            let gen = b.gen(disc, w);
            let fgen = b.formula(gen).clone();
            let elim = b.exists_elim(Formula::implies(
                fgen,
                Formula::implies(
                    Formula::exists(w, Formula::and(wlt.clone(), ng_nnf.clone())),
                    target.clone(),
                ),
            ));
            let from_unb = b.mp(elim, gen);
            let open = b.bounded_def(Formula::implies(
                source,
                Formula::exists(w, Formula::and(wlt, ng_nnf)),
            ));
            Ok(b.compose(open, from_unb))
        } else {
            // source: ∀w<u nnf(¬g); target: ¬∃w<u g
            let _ = &phi;
            let source = Formula::forall_lt(w, bound.clone(), ng_nnf.clone());
            let bot = Formula::falsum();
            // under hypotheses source and (w<u ∧ g): contradiction
            let hs = b.assume(source.clone());
            let h = b.assume(Formula::and(wlt.clone(), (*g).clone()));
            let got_lt = b.and_elim(h, true);
            let got_g = b.and_elim(h, false);
            let bdef = b.bounded_def(Formula::implies(
                source.clone(),
                Formula::forall(w, Formula::implies(wlt.clone(), ng_nnf.clone())),
            ));
            let unb = b.mp(bdef, hs);
            let inst = self.forall_elim(b, unb, &Term::Var(w));
            let got_nnf = b.mp(inst, got_lt);
            let ng = b.mp(inner, got_nnf);
            let (fg, fng) = (b.formula(got_g).clone(), b.formula(ng).clone());
            let t = b.taut(Formula::implies(
                fg,
                Formula::implies(fng, bot.clone()),
            ));
            let s = b.mp(t, got_g);
            let botl = b.mp(s, ng);
            let imp = b.discharge(botl); // (w<u ∧ g) → ⊥, still under hs
            let gen = b.gen(imp, w);
            let fgen = b.formula(gen).clone();
            let elim = b.exists_elim(Formula::implies(
                fgen,
                Formula::implies(
                    Formula::exists(w, Formula::and(wlt.clone(), (*g).clone())),
                    bot.clone(),
                ),
            ));
            let refutes = b.mp(elim, gen);
            let not_bot = self.prove_numeral_neq(b, 0, 1);
            let (fr, fnb) = (b.formula(refutes).clone(), b.formula(not_bot).clone());
            let t2 = b.taut(Formula::implies(
                fr,
                Formula::implies(
                    fnb,
                    Formula::not(Formula::exists(w, Formula::and(wlt.clone(), (*g).clone()))),
                ),
            ));
            let s2 = b.mp(t2, refutes);
            let not_unb = b.mp(s2, not_bot);
            let bdef2 = b.bounded_def(Formula::implies(
                phi.clone(),
                Formula::exists(w, Formula::and(wlt, (*g).clone())),
            ));
            let nphi = b.contrapose(bdef2, not_unb);
            Ok(b.discharge(nphi)) // source → ¬φ
        }
    }
}

/// One-way matching of an axiom body against a goal, instantiating `binders`.
fn match_axiom_body(
    pattern: &Formula,
    goal: &Formula,
    binders: &[Var],
) -> Option<std::collections::BTreeMap<Var, Term>> {
    let mut subst = std::collections::BTreeMap::new();
    let active: std::collections::BTreeSet<Var> = binders.iter().copied().collect();
    if match_f(pattern, goal, &active, &mut subst) {
        Some(subst)
    } else {
        None
    }
}

fn match_f(
    p: &Formula,
    g: &Formula,
    active: &std::collections::BTreeSet<Var>,
    subst: &mut std::collections::BTreeMap<Var, Term>,
) -> bool {
    use Formula::*;
    match (p, g) {
        (Eq(a1, b1), Eq(a2, b2)) | (Lt(a1, b1), Lt(a2, b2)) => {
            match_t(a1, a2, active, subst) && match_t(b1, b2, active, subst)
        }
        (In(t1, x1), In(t2, x2)) => x1 == x2 && match_t(t1, t2, active, subst),
        (Oracle(t1), Oracle(t2)) => match_t(t1, t2, active, subst),
        (Not(a), Not(b)) => match_f(a, b, active, subst),
        (And(a1, b1), And(a2, b2))
        | (Or(a1, b1), Or(a2, b2))
        | (Implies(a1, b1), Implies(a2, b2)) => {
            match_f(a1, a2, active, subst) && match_f(b1, b2, active, subst)
        }
        (ForallLt(v1, t1, b1), ForallLt(v2, t2, b2))
        | (ExistsLt(v1, t1, b1), ExistsLt(v2, t2, b2)) => {
            if v1 != v2 || !match_t(t1, t2, active, subst) {
                return false;
            }
            let mut inner = active.clone();
            inner.remove(v1);
            match_f(b1, b2, &inner, subst)
        }
        (Forall(v1, b1), Forall(v2, b2)) | (Exists(v1, b1), Exists(v2, b2)) => {
            if v1 != v2 {
                return false;
            }
            let mut inner = active.clone();
            inner.remove(v1);
            match_f(b1, b2, &inner, subst)
        }
        (ForallSet(x1, b1), ForallSet(x2, b2)) | (ExistsSet(x1, b1), ExistsSet(x2, b2)) => {
            x1 == x2 && match_f(b1, b2, active, subst)
        }
        _ => false,
    }
}

fn match_t(
    p: &Term,
    g: &Term,
    active: &std::collections::BTreeSet<Var>,
    subst: &mut std::collections::BTreeMap<Var, Term>,
) -> bool {
    match p {
        Term::Var(v) if active.contains(v) => match subst.get(v) {
            Some(t) => t == g,
            None => {
                subst.insert(*v, g.clone());
                true
            }
        },
        _ => match (p, g) {
            (Term::Zero, Term::Zero) | (Term::One, Term::One) => true,
            (Term::Var(a), Term::Var(b)) => a == b,
            (Term::Add(a1, b1), Term::Add(a2, b2))
            | (Term::Mul(a1, b1), Term::Mul(a2, b2))
            | (Term::Exp(a1, b1), Term::Exp(a2, b2))
            | (Term::Pair(a1, b1), Term::Pair(a2, b2)) => {
                match_t(a1, a2, active, subst) && match_t(b1, b2, active, subst)
            }
            (Term::Proj(s1, a1), Term::Proj(s2, a2)) => {
                s1 == s2 && match_t(a1, a2, active, subst)
            }
            _ => false,
        },
    }
}

fn checked_pow(x: u64, y: u64) -> Option<u64> {
    if y == 0 {
        return Some(1);
    }
    if x <= 1 {
        return Some(x);
    }
    let y32 = u32::try_from(y).ok()?;
    x.checked_pow(y32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::{OracleSet, SetDescriptor};
    use crate::proof::check_proof;
    use crate::theory::{OracleTheory, TheorySpec};

    fn theory() -> OracleTheory {
        OracleTheory::new(
            TheorySpec::eca0(),
            OracleSet::Plain(SetDescriptor::singleton(2)),
        )
    }

    fn checked(build: impl FnOnce(&Synth, &mut ProofBuilder) -> usize) -> Formula {
        let th = theory();
        let synth = Synth::new(&th, Caps::default());
        let mut b = ProofBuilder::new();
        let idx = build(&synth, &mut b);
        let goal = b.formula(idx).clone();
        let proof = b.finish(idx);
        check_proof(&th, &proof, &goal).expect("synthesized proof rejected");
        goal
    }

    #[test]
    fn addition_facts() {
        for (x, y) in [(0, 0), (0, 1), (1, 0), (1, 1), (2, 3), (5, 7), (0, 6)] {
            let goal = checked(|s, b| s.prove_add(b, x, y));
            assert_eq!(
                goal,
                Formula::Eq(Term::add(n(x), n(y)), n(x + y)),
                "wrong statement for {x}+{y}"
            );
        }
    }

    #[test]
    fn multiplication_facts() {
        for (x, y) in [(0, 0), (1, 1), (2, 1), (2, 3), (3, 4), (0, 5), (5, 0)] {
            let goal = checked(|s, b| s.prove_mul(b, x, y));
            assert_eq!(goal, Formula::Eq(Term::mul(n(x), n(y)), n(x * y)));
        }
    }

    #[test]
    fn exponentiation_facts() {
        for (x, y) in [(2, 0), (2, 1), (2, 3), (3, 2), (0, 0), (0, 2)] {
            let goal = checked(|s, b| s.prove_exp(b, x, y).unwrap());
            let v = checked_pow(x, y).unwrap();
            assert_eq!(goal, Formula::Eq(Term::exp(n(x), n(y)), n(v)));
        }
    }

    #[test]
    fn term_value_mixed() {
        // (2+3)·2 = 10, with a projection: ((⟨1,2⟩)₁ + 1) = 3
        let goal = checked(|s, b| {
            let t = Term::mul(Term::add(n(2), n(3)), n(2));
            s.prove_term_value(b, &t).unwrap().0
        });
        assert_eq!(
            goal,
            Formula::Eq(Term::mul(Term::add(n(2), n(3)), n(2)), n(10))
        );
        let goal2 = checked(|s, b| {
            let t = Term::add(
                Term::proj(ProjSide::Right, Term::pair(n(1), n(2))),
                Term::One,
            );
            s.prove_term_value(b, &t).unwrap().0
        });
        assert_eq!(
            goal2,
            Formula::Eq(
                Term::add(
                    Term::proj(ProjSide::Right, Term::pair(n(1), n(2))),
                    Term::One
                ),
                n(3)
            )
        );
    }

    #[test]
    fn numeral_order_facts() {
        for (x, y) in [(0u64, 1u64), (0, 5), (2, 3), (3, 7)] {
            let goal = checked(|s, b| s.prove_numeral_lt(b, x, y));
            assert_eq!(goal, Formula::Lt(n(x), n(y)));
        }
        for (x, y) in [(0u64, 0u64), (1, 0), (3, 3), (7, 2), (4, 1)] {
            let goal = checked(|s, b| s.prove_numeral_not_lt(b, x, y));
            assert_eq!(goal, Formula::not(Formula::Lt(n(x), n(y))));
        }
        for (x, y) in [(0u64, 1u64), (1, 0), (2, 5), (5, 2), (1, 2), (2, 1)] {
            let goal = checked(|s, b| s.prove_numeral_neq(b, x, y));
            assert_eq!(goal, Formula::not(Formula::Eq(n(x), n(y))));
        }
    }

    #[test]
    fn closed_prover_handles_bounded_sentences() {
        use crate::formula::Formula as F;
        let cases: Vec<(Formula, bool)> = vec![
            // ∀x<5 (x < 6)
            (
                F::forall_lt(Var(0), n(5), F::Lt(Term::var(0), n(6))),
                true,
            ),
            // ∃x<4 (x = 3)
            (
                F::exists_lt(Var(0), n(4), F::Eq(Term::var(0), n(3))),
                true,
            ),
            // ∃x<3 (x = 3) is false
            (
                F::exists_lt(Var(0), n(3), F::Eq(Term::var(0), n(3))),
                false,
            ),
            // ∀x<4 (x < 3) is false (counterexample 3)
            (
                F::forall_lt(Var(0), n(4), F::Lt(Term::var(0), n(3))),
                false,
            ),
            // 𝔒(2) ∧ ¬𝔒(3)
            (
                F::and(
                    F::Oracle(n(2)),
                    F::not(F::Oracle(n(3))),
                ),
                true,
            ),
            // 𝔒(1+1) computed through the congruence path
            (F::Oracle(Term::add(Term::Zero, n(2))), true),
            // (3 < 2) → 𝔒(7)
            (
                F::implies(F::Lt(n(3), n(2)), F::Oracle(n(7))),
                true,
            ),
            // nested bounded quantifiers: ∀x<3 ∃y<4 (x < y)
            (
                F::forall_lt(
                    Var(0),
                    n(3),
                    F::exists_lt(Var(1), n(4), F::Lt(Term::var(0), Term::var(1))),
                ),
                true,
            ),
            // pairing: (⟨1,2⟩)₀ = 1
            (
                F::Eq(
                    Term::proj(ProjSide::Left, Term::pair(n(1), n(2))),
                    Term::One,
                ),
                true,
            ),
        ];
        let th = theory();
        let synth = Synth::new(&th, Caps::default());
        for (phi, truth) in cases {
            let mut b = ProofBuilder::new();
            let idx = synth
                .prove_closed(&mut b, &phi, truth)
                .unwrap_or_else(|e| panic!("failed on {phi:?}: {e}"));
            let expected = if truth {
                phi.clone()
            } else {
                Formula::not(phi.clone())
            };
            assert_eq!(b.formula(idx), &expected);
            let proof = b.finish(idx);
            check_proof(&th, &proof, &expected)
                .unwrap_or_else(|e| panic!("proof rejected for {phi:?}: {e}"));
        }
    }

    #[test]
    fn closed_prover_refuses_indeterminate_goals() {
        let th = theory();
        let synth = Synth::new(&th, Caps::default());
        let mut b = ProofBuilder::new();
        // refuting a true sentence
        assert!(synth
            .prove_closed(&mut b, &Formula::Oracle(n(2)), false)
            .is_err());
        // free set variable
        assert!(matches!(
            synth.prove_closed(
                &mut b,
                &Formula::In(n(1), crate::term::SetVar(0)),
                true
            ),
            Err(SynthError::FreeSetVar(_))
        ));
    }

    #[test]
    fn leibniz_replacement_checks() {
        let th = theory();
        let synth = Synth::new(&th, Caps::default());
        // φ(x) := ∃y<x+1 (𝔒(y) ∧ ¬(y = x))  — replace x by a numeral
        let phi = Formula::exists_lt(
            Var(1),
            Term::add(Term::var(0), Term::One),
            Formula::and(
                Formula::Oracle(Term::var(1)),
                Formula::not(Formula::Eq(Term::var(1), Term::var(0))),
            ),
        );
        let mut b = ProofBuilder::new();
        let idx = synth
            .leibniz(&mut b, Var(0), &n(3), &n(4), &phi)
            .unwrap();
        let expected = Formula::implies(
            Formula::Eq(n(3), n(4)),
            Formula::implies(
                phi.substitute_term(Var(0), &n(3)),
                phi.substitute_term(Var(0), &n(4)),
            ),
        );
        assert_eq!(b.formula(idx), &expected);
        let proof = b.finish(idx);
        check_proof(&th, &proof, &expected).unwrap();
    }

    #[test]
    fn leibniz_into_unbounded_quantifiers() {
        let th = theory();
        let synth = Synth::new(&th, Caps::default());
        // φ(x) := ∀y (y < x → 𝔒(y))
        let phi = Formula::forall(
            Var(1),
            Formula::implies(
                Formula::Lt(Term::var(1), Term::var(0)),
                Formula::Oracle(Term::var(1)),
            ),
        );
        let mut b = ProofBuilder::new();
        let idx = synth
            .leibniz(&mut b, Var(0), &n(2), &Term::var(2), &phi)
            .unwrap();
        let proof_goal = b.formula(idx).clone();
        let proof = b.finish(idx);
        check_proof(&th, &proof, &proof_goal).unwrap();
    }

    #[test]
    fn schematic_prover_matches_axioms() {
        let th = theory();
        let synth = Synth::new(&th, Caps::default());
        let x = Term::var(0);
        let goals = vec![
            // x + 0 = x  (axiom body instance)
            Formula::Eq(Term::add(x.clone(), Term::Zero), x.clone()),
            // ¬(x + 1 = 0)
            Formula::not(Formula::Eq(Term::add(x.clone(), Term::One), Term::Zero)),
            // x < x + 1
            Formula::Lt(x.clone(), Term::add(x.clone(), Term::One)),
            // 3 + 0 = 3 (instantiated)
            Formula::Eq(Term::add(n(3), Term::Zero), n(3)),
            // 𝔒(x) → 𝔒(x)  (tautology with a free variable)
            Formula::implies(Formula::Oracle(x.clone()), Formula::Oracle(x.clone())),
            // x = x
            Formula::Eq(x.clone(), x.clone()),
            // ∀y (y + 0 = y)  (generalization of an axiom instance)
            Formula::forall(
                Var(1),
                Formula::Eq(Term::add(Term::var(1), Term::Zero), Term::var(1)),
            ),
            // (⟨x, 2⟩)₀ = x
            Formula::Eq(
                Term::proj(ProjSide::Left, Term::pair(x.clone(), n(2))),
                x.clone(),
            ),
        ];
        for phi in goals {
            let mut b = ProofBuilder::new();
            let idx = synth
                .prove_schematic(&mut b, &phi)
                .unwrap_or_else(|e| panic!("schematic failure on {phi:?}: {e}"));
            assert_eq!(b.formula(idx), &phi);
            let proof = b.finish(idx);
            check_proof(&th, &proof, &phi)
                .unwrap_or_else(|e| panic!("schematic proof rejected for {phi:?}: {e}"));
        }
    }

    #[test]
    fn schematic_prover_gives_up_sensibly() {
        let th = theory();
        let synth = Synth::new(&th, Caps::default());
        let mut b = ProofBuilder::new();
        // x < x is not schematic
        assert!(synth
            .prove_schematic(&mut b, &Formula::Lt(Term::var(0), Term::var(0)))
            .is_err());
    }

    #[test]
    fn nnf_bridge_is_provable() {
        let th = theory();
        let synth = Synth::new(&th, Caps::default());
        let x = Var(0);
        let y = Var(1);
        let cases = vec![
            // ¬(𝔒(x) ∧ x = 0)
            Formula::not(Formula::and(
                Formula::Oracle(Term::var(0)),
                Formula::Eq(Term::var(0), Term::Zero),
            )),
            // ¬∀y (y < x)
            Formula::not(Formula::forall(y, Formula::Lt(Term::var(1), Term::var(0)))),
            // ¬∃y (y = x)
            Formula::not(Formula::exists(y, Formula::Eq(Term::var(1), Term::var(0)))),
            // (𝔒(x) → ∃y (y = x)) — implication turns into a disjunction
            Formula::implies(
                Formula::Oracle(Term::var(0)),
                Formula::exists(y, Formula::Eq(Term::var(1), Term::var(0))),
            ),
            // ¬∀y<x ∃z (z = y)
            Formula::not(Formula::forall_lt(
                y,
                Term::var(0),
                Formula::exists(Var(2), Formula::Eq(Term::var(2), Term::var(1))),
            )),
            // ¬∃y<x (y = 0)
            Formula::not(Formula::exists_lt(
                y,
                Term::var(0),
                Formula::Eq(Term::var(1), Term::Zero),
            )),
        ];
        let _ = x;
        for phi in cases {
            let mut b = ProofBuilder::new();
            let idx = synth
                .prove_nnf_bridge(&mut b, &phi)
                .unwrap_or_else(|e| panic!("bridge failure on {phi:?}: {e}"));
            let expected =
                Formula::implies(phi.nnf_atoms().unwrap(), phi.clone());
            assert_eq!(b.formula(idx), &expected);
            let proof = b.finish(idx);
            check_proof(&th, &proof, &expected)
                .unwrap_or_else(|e| panic!("bridge proof rejected for {phi:?}: {e}"));
        }
    }

    #[test]
    fn case_split_statement() {
        let goal = checked(|s, b| s.case_split(b, Var(0), 3));
        let x = Term::var(0);
        let expected = Formula::implies(
            Formula::Lt(x.clone(), n(3)),
            Formula::disj(vec![
                Formula::Eq(x.clone(), n(0)),
                Formula::Eq(x.clone(), n(1)),
                Formula::Eq(x, n(2)),
            ]),
        );
        assert_eq!(goal, expected);
    }
}

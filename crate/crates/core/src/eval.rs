//! Capped evaluation of formulas in the standard model.
//!
//! Bounded-quantifier formulas evaluate exactly; unbounded quantifiers scan
//! witnesses below a cap and answer `Unknown` when the scan is inconclusive.
//! The semantics is Kleene-monotone: raising caps never flips a determinate
//! answer.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::descriptor::{OracleSet, SetDescriptor};
use crate::error::EvalError;
use crate::formula::Formula;
use crate::term::{SetVar, Var};

/// Three-valued truth: `Unknown` records that a cap was exceeded before the
/// value could be determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThreeValued {
    True,
    False,
    Unknown,
}

impl ThreeValued {
    pub fn from_bool(b: bool) -> ThreeValued {
        if b {
            ThreeValued::True
        } else {
            ThreeValued::False
        }
    }

    pub fn negate(self) -> ThreeValued {
        match self {
            ThreeValued::True => ThreeValued::False,
            ThreeValued::False => ThreeValued::True,
            ThreeValued::Unknown => ThreeValued::Unknown,
        }
    }

    pub fn and(self, other: ThreeValued) -> ThreeValued {
        match (self, other) {
            (ThreeValued::False, _) | (_, ThreeValued::False) => ThreeValued::False,
            (ThreeValued::True, ThreeValued::True) => ThreeValued::True,
            _ => ThreeValued::Unknown,
        }
    }

    pub fn or(self, other: ThreeValued) -> ThreeValued {
        match (self, other) {
            (ThreeValued::True, _) | (_, ThreeValued::True) => ThreeValued::True,
            (ThreeValued::False, ThreeValued::False) => ThreeValued::False,
            _ => ThreeValued::Unknown,
        }
    }

    pub fn implies(self, other: ThreeValued) -> ThreeValued {
        self.negate().or(other)
    }

    pub fn is_determinate(self) -> bool {
        self != ThreeValued::Unknown
    }

    pub fn is_true(self) -> bool {
        self == ThreeValued::True
    }

    pub fn is_false(self) -> bool {
        self == ThreeValued::False
    }
}

/// Evaluation caps. `quantifier` bounds the witness scan for unbounded
/// quantifiers, `bounded_enum` guards pathological bounded ranges, and
/// `term_bits` is the term magnitude guard.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub quantifier: u64,
    pub bounded_enum: u64,
    pub term_bits: u64,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps {
            quantifier: 64,
            bounded_enum: 1 << 16,
            term_bits: 4096,
        }
    }
}

impl Caps {
    pub fn with_quantifier(n: u64) -> Caps {
        Caps {
            quantifier: n,
            ..Caps::default()
        }
    }
}

/// First- and second-order environment plus an oracle interpretation.
#[derive(Debug, Clone, Default)]
pub struct Env {
    nums: BTreeMap<Var, BigUint>,
    sets: BTreeMap<SetVar, SetDescriptor>,
    oracle: Option<OracleSet>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn bind_num(mut self, v: Var, n: u64) -> Env {
        self.nums.insert(v, BigUint::from(n));
        self
    }

    pub fn bind_num_big(mut self, v: Var, n: BigUint) -> Env {
        self.nums.insert(v, n);
        self
    }

    pub fn bind_set(mut self, v: SetVar, d: SetDescriptor) -> Env {
        self.sets.insert(v, d);
        self
    }

    pub fn bind_oracle(mut self, o: OracleSet) -> Env {
        self.oracle = Some(o);
        self
    }

    pub fn set_num(&mut self, v: Var, n: BigUint) {
        self.nums.insert(v, n);
    }

    pub fn num(&self, v: Var) -> Option<BigUint> {
        self.nums.get(&v).cloned()
    }

    pub fn set(&self, v: SetVar) -> Option<&SetDescriptor> {
        self.sets.get(&v)
    }

    pub fn oracle(&self) -> Option<&OracleSet> {
        self.oracle.as_ref()
    }
}

/// Evaluates `phi` under `env` with `caps`. Missing bindings for free
/// variables are hard errors; cap exhaustion yields `Unknown`.
pub fn evaluate(phi: &Formula, env: &Env, caps: &Caps) -> Result<ThreeValued, EvalError> {
    let mut scratch = env.clone();
    eval_inner(phi, &mut scratch, caps)
}

fn eval_term(
    t: &crate::term::Term,
    env: &Env,
    caps: &Caps,
) -> Result<Option<BigUint>, EvalError> {
    match t.eval(&|v| env.num(v), caps.term_bits) {
        Ok(v) => Ok(Some(v)),
        Err(EvalError::MagnitudeExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn eval_inner(phi: &Formula, env: &mut Env, caps: &Caps) -> Result<ThreeValued, EvalError> {
    match phi {
        Formula::Eq(a, b) => {
            let (va, vb) = (eval_term(a, env, caps)?, eval_term(b, env, caps)?);
            Ok(match (va, vb) {
                (Some(x), Some(y)) => ThreeValued::from_bool(x == y),
                _ => ThreeValued::Unknown,
            })
        }
        Formula::Lt(a, b) => {
            let (va, vb) = (eval_term(a, env, caps)?, eval_term(b, env, caps)?);
            Ok(match (va, vb) {
                (Some(x), Some(y)) => ThreeValued::from_bool(x < y),
                _ => ThreeValued::Unknown,
            })
        }
        Formula::In(t, x) => {
            let d = env
                .set(*x)
                .cloned()
                .ok_or(EvalError::UnboundSetVar(*x))?;
            Ok(match eval_term(t, env, caps)? {
                Some(v) => ThreeValued::from_bool(d.contains(&v)),
                None => ThreeValued::Unknown,
            })
        }
        Formula::Oracle(t) => {
            let oracle = env.oracle().cloned().ok_or(EvalError::UnboundOracle)?;
            Ok(match eval_term(t, env, caps)? {
                Some(v) => ThreeValued::from_bool(oracle.contains(&v)),
                None => ThreeValued::Unknown,
            })
        }
        Formula::Not(f) => Ok(eval_inner(f, env, caps)?.negate()),
        Formula::And(a, b) => Ok(eval_inner(a, env, caps)?.and(eval_inner(b, env, caps)?)),
        Formula::Or(a, b) => Ok(eval_inner(a, env, caps)?.or(eval_inner(b, env, caps)?)),
        Formula::Implies(a, b) => {
            Ok(eval_inner(a, env, caps)?.implies(eval_inner(b, env, caps)?))
        }
        Formula::ForallLt(v, bound, body) => {
            let bound_val = match eval_term(bound, env, caps)? {
                Some(b) => b,
                None => return Ok(ThreeValued::Unknown),
            };
            let bound_small = match bound_val.to_u64() {
                Some(b) if b <= caps.bounded_enum => b,
                _ => return Ok(ThreeValued::Unknown),
            };
            let saved = env.num(*v);
            let mut acc = ThreeValued::True;
            for k in 0..bound_small {
                env.set_num(*v, BigUint::from(k));
                acc = acc.and(eval_inner(body, env, caps)?);
                if acc == ThreeValued::False {
                    break;
                }
            }
            restore(env, *v, saved);
            Ok(acc)
        }
        Formula::ExistsLt(v, bound, body) => {
            let bound_val = match eval_term(bound, env, caps)? {
                Some(b) => b,
                None => return Ok(ThreeValued::Unknown),
            };
            let bound_small = match bound_val.to_u64() {
                Some(b) if b <= caps.bounded_enum => b,
                _ => return Ok(ThreeValued::Unknown),
            };
            let saved = env.num(*v);
            let mut acc = ThreeValued::False;
            for k in 0..bound_small {
                env.set_num(*v, BigUint::from(k));
                acc = acc.or(eval_inner(body, env, caps)?);
                if acc == ThreeValued::True {
                    break;
                }
            }
            restore(env, *v, saved);
            Ok(acc)
        }
        Formula::Forall(v, body) => {
            let saved = env.num(*v);
            let mut result = ThreeValued::Unknown;
            for k in 0..caps.quantifier {
                env.set_num(*v, BigUint::from(k));
                if eval_inner(body, env, caps)? == ThreeValued::False {
                    result = ThreeValued::False;
                    break;
                }
            }
            restore(env, *v, saved);
            Ok(result)
        }
        Formula::Exists(v, body) => {
            let saved = env.num(*v);
            let mut result = ThreeValued::Unknown;
            for k in 0..caps.quantifier {
                env.set_num(*v, BigUint::from(k));
                if eval_inner(body, env, caps)? == ThreeValued::True {
                    result = ThreeValued::True;
                    break;
                }
            }
            restore(env, *v, saved);
            Ok(result)
        }
        Formula::ForallSet(x, _) | Formula::ExistsSet(x, _) => {
            // Second-order quantification has no standard-model semantics here;
            // coded families are handled by the model module.
            Err(EvalError::UnboundSetVar(*x))
        }
    }
}

fn restore(env: &mut Env, v: Var, saved: Option<BigUint>) {
    match saved {
        Some(n) => {
            env.nums.insert(v, n);
        }
        None => {
            env.nums.remove(&v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Term;

    fn caps(n: u64) -> Caps {
        Caps::with_quantifier(n)
    }

    #[test]
    fn bounded_universal_is_exact() {
        // ∀x<5 (x < 6) is true outright.
        let f = Formula::forall_lt(
            Var(0),
            Term::numeral(5),
            Formula::Lt(Term::var(0), Term::numeral(6)),
        );
        assert_eq!(
            evaluate(&f, &Env::new(), &caps(4)).unwrap(),
            ThreeValued::True
        );
    }

    #[test]
    fn unbounded_exists_respects_the_cap() {
        // ∃x (x = 7): unknown at cap 4, true at cap 8.
        let f = Formula::exists(Var(0), Formula::Eq(Term::var(0), Term::numeral(7)));
        assert_eq!(
            evaluate(&f, &Env::new(), &caps(4)).unwrap(),
            ThreeValued::Unknown
        );
        assert_eq!(
            evaluate(&f, &Env::new(), &caps(8)).unwrap(),
            ThreeValued::True
        );
    }

    #[test]
    fn oracle_atom_reads_the_descriptor() {
        let f = Formula::Oracle(Term::numeral(2));
        let env = Env::new().bind_oracle(OracleSet::Plain(SetDescriptor::singleton(2)));
        assert_eq!(evaluate(&f, &env, &caps(4)).unwrap(), ThreeValued::True);
        let g = Formula::Oracle(Term::numeral(3));
        assert_eq!(evaluate(&g, &env, &caps(4)).unwrap(), ThreeValued::False);
    }

    #[test]
    fn missing_bindings_are_hard_errors() {
        let f = Formula::In(Term::numeral(1), SetVar(0));
        assert_eq!(
            evaluate(&f, &Env::new(), &caps(4)),
            Err(EvalError::UnboundSetVar(SetVar(0)))
        );
        let g = Formula::Eq(Term::var(3), Term::Zero);
        assert_eq!(
            evaluate(&g, &Env::new(), &caps(4)),
            Err(EvalError::UnboundVar(Var(3)))
        );
    }

    #[test]
    fn unbounded_forall_never_confirms() {
        let f = Formula::forall(Var(0), Formula::Lt(Term::var(0), Term::numeral(3)));
        assert_eq!(
            evaluate(&f, &Env::new(), &caps(2)).unwrap(),
            ThreeValued::Unknown
        );
        assert_eq!(
            evaluate(&f, &Env::new(), &caps(16)).unwrap(),
            ThreeValued::False
        );
    }

    #[test]
    fn substitution_commutes_with_evaluation() {
        let phi = Formula::exists_lt(
            Var(1),
            Term::add(Term::var(0), Term::One),
            Formula::Eq(Term::var(1), Term::var(0)),
        );
        for n in 0..6 {
            let lhs = evaluate(
                &phi.substitute_numeral(Var(0), n),
                &Env::new(),
                &caps(8),
            )
            .unwrap();
            let rhs = evaluate(&phi, &Env::new().bind_num(Var(0), n), &caps(8)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

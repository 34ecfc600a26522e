//! First-order terms of the arithmetic language: zero, one, sum, product,
//! exponentiation, pairing and projections, plus variables.
//!
//! Numerals are the canonical closed terms `0, 1, 1+1, (1+1)+1, ...` built by
//! iterated `+1`; there is exactly one numeral per natural number.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use std::fmt;

use crate::error::EvalError;

/// First-order variable, kernel-side identified by index (printed as `x<idx>`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

/// Second-order (set) variable, printed as `X<idx>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetVar(pub u32);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for SetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

/// Projection side for the pairing pseudo-term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjSide {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Zero,
    One,
    Var(Var),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Exp(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Proj(ProjSide, Box<Term>),
}

/// Cantor pairing code of `(x, y)`.
pub fn pair_code(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    (&s * (&s + 1u32)) / 2u32 + y
}

/// Inverse of [`pair_code`]; total on the naturals.
pub fn unpair_code(n: &BigUint) -> (BigUint, BigUint) {
    // w = floor((sqrt(8n+1) - 1) / 2)
    let w = ((n * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let y = n - t;
    let x = &w - &y;
    (x, y)
}

/// Convenience for small values.
pub fn pair_u64(x: u64, y: u64) -> BigUint {
    pair_code(&BigUint::from(x), &BigUint::from(y))
}

impl Term {
    /// The canonical numeral for `n`: `0`, `1`, then iterated `+1`.
    pub fn numeral(n: u64) -> Term {
        match n {
            0 => Term::Zero,
            _ => {
                let mut t = Term::One;
                for _ in 1..n {
                    t = Term::Add(Box::new(t), Box::new(Term::One));
                }
                t
            }
        }
    }

    pub fn var(i: u32) -> Term {
        Term::Var(Var(i))
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn exp(a: Term, b: Term) -> Term {
        Term::Exp(Box::new(a), Box::new(b))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn proj(side: ProjSide, t: Term) -> Term {
        Term::Proj(side, Box::new(t))
    }

    /// Recognizes exactly the canonical numeral shape and returns its value.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut count = 0u64;
        let mut cur = self;
        loop {
            match cur {
                Term::Zero => return if count == 0 { Some(0) } else { None },
                Term::One => return Some(count + 1),
                Term::Add(a, b) if **b == Term::One => {
                    count += 1;
                    cur = a;
                }
                _ => return None,
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Zero | Term::One => true,
            Term::Var(_) => false,
            Term::Add(a, b) | Term::Mul(a, b) | Term::Exp(a, b) | Term::Pair(a, b) => {
                a.is_closed() && b.is_closed()
            }
            Term::Proj(_, t) => t.is_closed(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    pub(crate) fn collect_free_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Zero | Term::One => {}
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::Add(a, b) | Term::Mul(a, b) | Term::Exp(a, b) | Term::Pair(a, b) => {
                a.collect_free_vars(out);
                b.collect_free_vars(out);
            }
            Term::Proj(_, t) => t.collect_free_vars(out),
        }
    }

    /// Replaces every occurrence of `v` by `replacement`.
    pub fn substitute(&self, v: Var, replacement: &Term) -> Term {
        match self {
            Term::Zero | Term::One => self.clone(),
            Term::Var(w) => {
                if *w == v {
                    replacement.clone()
                } else {
                    self.clone()
                }
            }
            Term::Add(a, b) => Term::add(a.substitute(v, replacement), b.substitute(v, replacement)),
            Term::Mul(a, b) => Term::mul(a.substitute(v, replacement), b.substitute(v, replacement)),
            Term::Exp(a, b) => Term::exp(a.substitute(v, replacement), b.substitute(v, replacement)),
            Term::Pair(a, b) => {
                Term::pair(a.substitute(v, replacement), b.substitute(v, replacement))
            }
            Term::Proj(side, t) => Term::proj(*side, t.substitute(v, replacement)),
        }
    }

    /// Evaluates the term under `env`, with a magnitude guard: any intermediate
    /// value whose bit length exceeds `max_bits` aborts the evaluation.
    pub fn eval(
        &self,
        env: &dyn Fn(Var) -> Option<BigUint>,
        max_bits: u64,
    ) -> Result<BigUint, EvalError> {
        let guard = |v: BigUint| -> Result<BigUint, EvalError> {
            if v.bits() > max_bits {
                Err(EvalError::MagnitudeExceeded { bits: v.bits() })
            } else {
                Ok(v)
            }
        };
        match self {
            Term::Zero => Ok(BigUint::zero()),
            Term::One => Ok(BigUint::one()),
            Term::Var(v) => env(*v).ok_or(EvalError::UnboundVar(*v)),
            Term::Add(a, b) => guard(a.eval(env, max_bits)? + b.eval(env, max_bits)?),
            Term::Mul(a, b) => guard(a.eval(env, max_bits)? * b.eval(env, max_bits)?),
            Term::Exp(a, b) => {
                let base = a.eval(env, max_bits)?;
                let exp = b.eval(env, max_bits)?;
                // x^0 = 1 including 0^0.
                if exp.is_zero() {
                    return Ok(BigUint::one());
                }
                if base.is_zero() {
                    return Ok(BigUint::zero());
                }
                if base.is_one() {
                    return Ok(BigUint::one());
                }
                let exp_u64 = u64::try_from(exp.clone())
                    .map_err(|_| EvalError::MagnitudeExceeded { bits: exp.bits() })?;
                if base.bits().saturating_mul(exp_u64) > max_bits + 1 {
                    return Err(EvalError::MagnitudeExceeded {
                        bits: base.bits().saturating_mul(exp_u64),
                    });
                }
                guard(base.pow(exp_u64 as u32))
            }
            Term::Pair(a, b) => guard(pair_code(&a.eval(env, max_bits)?, &b.eval(env, max_bits)?)),
            Term::Proj(side, t) => {
                let v = t.eval(env, max_bits)?;
                let (l, r) = unpair_code(&v);
                Ok(match side {
                    ProjSide::Left => l,
                    ProjSide::Right => r,
                })
            }
        }
    }

    /// Evaluates a closed term with the default guard.
    pub fn eval_closed(&self, max_bits: u64) -> Result<BigUint, EvalError> {
        self.eval(&|_| None, max_bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerals_evaluate_to_their_index() {
        for n in 0..40u64 {
            let t = Term::numeral(n);
            assert_eq!(t.eval_closed(256).unwrap(), BigUint::from(n));
            assert_eq!(t.as_numeral(), Some(n));
        }
    }

    #[test]
    fn numeral_recognition_rejects_non_canonical_shapes() {
        // 0+1 evaluates to 1 but is not the canonical numeral for 1.
        let t = Term::add(Term::Zero, Term::One);
        assert_eq!(t.as_numeral(), None);
        let t = Term::add(Term::One, Term::numeral(2));
        assert_eq!(t.as_numeral(), None);
    }

    #[test]
    fn pairing_round_trips() {
        for x in 0..25u64 {
            for y in 0..25u64 {
                let code = pair_u64(x, y);
                let (a, b) = unpair_code(&code);
                assert_eq!(a, BigUint::from(x));
                assert_eq!(b, BigUint::from(y));
            }
        }
    }

    #[test]
    fn projections_invert_pairing_as_terms() {
        let t = Term::pair(Term::numeral(3), Term::numeral(5));
        let l = Term::proj(ProjSide::Left, t.clone());
        let r = Term::proj(ProjSide::Right, t);
        assert_eq!(l.eval_closed(64).unwrap(), BigUint::from(3u32));
        assert_eq!(r.eval_closed(64).unwrap(), BigUint::from(5u32));
    }

    #[test]
    fn exponentiation_conventions() {
        let z = Term::exp(Term::Zero, Term::Zero);
        assert_eq!(z.eval_closed(64).unwrap(), BigUint::one());
        let t = Term::exp(Term::numeral(2), Term::numeral(10));
        assert_eq!(t.eval_closed(64).unwrap(), BigUint::from(1024u32));
    }

    #[test]
    fn magnitude_guard_aborts_towers() {
        let t = Term::exp(Term::numeral(2), Term::exp(Term::numeral(2), Term::numeral(40)));
        assert!(matches!(
            t.eval_closed(4096),
            Err(EvalError::MagnitudeExceeded { .. })
        ));
    }
}

//! Gödel numbering by length-lexicographic coding of a prefix serialization.
//!
//! Objects serialize to strings over a fixed 28-token alphabet; the code of a
//! string is its rank in the length-lexicographic enumeration of all strings.
//! A proper subterm or subformula serializes to a strictly shorter string and
//! therefore receives a strictly smaller code.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::GodelError;
use crate::formula::Formula;
use crate::term::{ProjSide, SetVar, Term, Var};

pub const ALPHABET_SIZE: u32 = 28;

/// Serialization alphabet. The numeric order of the tokens fixes the
/// lexicographic order and therefore the coding; formula tags come first so
/// that the everyday small sentences get small codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[repr(u8)]
pub enum Token {
    // formulas
    FEq = 0,
    FLt = 1,
    FIn = 2,
    FOracle = 3,
    FNot = 4,
    FAnd = 5,
    FOr = 6,
    FImp = 7,
    FAllB = 8,
    FExB = 9,
    FAll = 10,
    FEx = 11,
    FAllS = 12,
    FExS = 13,
    // terms
    TZero = 14,
    TOne = 15,
    TVar = 16,
    TAdd = 17,
    TMul = 18,
    TExp = 19,
    TPair = 20,
    TProj0 = 21,
    TProj1 = 22,
    // base-4 digits for indices and counters, with an end marker
    D0 = 23,
    D1 = 24,
    D2 = 25,
    D3 = 26,
    DEnd = 27,
}

impl TryFrom<u8> for Token {
    type Error = ();
    fn try_from(v: u8) -> Result<Token, ()> {
        use Token::*;
        Ok(match v {
            0 => FEq,
            1 => FLt,
            2 => FIn,
            3 => FOracle,
            4 => FNot,
            5 => FAnd,
            6 => FOr,
            7 => FImp,
            8 => FAllB,
            9 => FExB,
            10 => FAll,
            11 => FEx,
            12 => FAllS,
            13 => FExS,
            14 => TZero,
            15 => TOne,
            16 => TVar,
            17 => TAdd,
            18 => TMul,
            19 => TExp,
            20 => TPair,
            21 => TProj0,
            22 => TProj1,
            23 => D0,
            24 => D1,
            25 => D2,
            26 => D3,
            27 => DEnd,
            _ => return Err(()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GodelCode(pub BigUint);

impl fmt::Display for GodelCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Appends the base-4 digits of `n` (most significant first) and the end
/// marker; `0` is just the end marker.
pub(crate) fn push_nat(out: &mut Vec<Token>, mut n: u64) {
    let mut digits = Vec::new();
    while n > 0 {
        digits.push((n % 4) as u8);
        n /= 4;
    }
    for d in digits.iter().rev() {
        out.push(match d {
            0 => Token::D0,
            1 => Token::D1,
            2 => Token::D2,
            _ => Token::D3,
        });
    }
    out.push(Token::DEnd);
}

pub(crate) fn serialize_term(t: &Term, out: &mut Vec<Token>) {
    match t {
        Term::Zero => out.push(Token::TZero),
        Term::One => out.push(Token::TOne),
        Term::Var(Var(i)) => {
            out.push(Token::TVar);
            push_nat(out, *i as u64);
        }
        Term::Add(a, b) => {
            out.push(Token::TAdd);
            serialize_term(a, out);
            serialize_term(b, out);
        }
        Term::Mul(a, b) => {
            out.push(Token::TMul);
            serialize_term(a, out);
            serialize_term(b, out);
        }
        Term::Exp(a, b) => {
            out.push(Token::TExp);
            serialize_term(a, out);
            serialize_term(b, out);
        }
        Term::Pair(a, b) => {
            out.push(Token::TPair);
            serialize_term(a, out);
            serialize_term(b, out);
        }
        Term::Proj(side, inner) => {
            out.push(match side {
                ProjSide::Left => Token::TProj0,
                ProjSide::Right => Token::TProj1,
            });
            serialize_term(inner, out);
        }
    }
}

pub(crate) fn serialize_formula(f: &Formula, out: &mut Vec<Token>) {
    match f {
        Formula::Eq(a, b) => {
            out.push(Token::FEq);
            serialize_term(a, out);
            serialize_term(b, out);
        }
        Formula::Lt(a, b) => {
            out.push(Token::FLt);
            serialize_term(a, out);
            serialize_term(b, out);
        }
        Formula::In(t, SetVar(i)) => {
            out.push(Token::FIn);
            serialize_term(t, out);
            push_nat(out, *i as u64);
        }
        Formula::Oracle(t) => {
            out.push(Token::FOracle);
            serialize_term(t, out);
        }
        Formula::Not(g) => {
            out.push(Token::FNot);
            serialize_formula(g, out);
        }
        Formula::And(a, b) => {
            out.push(Token::FAnd);
            serialize_formula(a, out);
            serialize_formula(b, out);
        }
        Formula::Or(a, b) => {
            out.push(Token::FOr);
            serialize_formula(a, out);
            serialize_formula(b, out);
        }
        Formula::Implies(a, b) => {
            out.push(Token::FImp);
            serialize_formula(a, out);
            serialize_formula(b, out);
        }
        Formula::ForallLt(Var(i), bound, body) => {
            out.push(Token::FAllB);
            push_nat(out, *i as u64);
            serialize_term(bound, out);
            serialize_formula(body, out);
        }
        Formula::ExistsLt(Var(i), bound, body) => {
            out.push(Token::FExB);
            push_nat(out, *i as u64);
            serialize_term(bound, out);
            serialize_formula(body, out);
        }
        Formula::Forall(Var(i), body) => {
            out.push(Token::FAll);
            push_nat(out, *i as u64);
            serialize_formula(body, out);
        }
        Formula::Exists(Var(i), body) => {
            out.push(Token::FEx);
            push_nat(out, *i as u64);
            serialize_formula(body, out);
        }
        Formula::ForallSet(SetVar(i), body) => {
            out.push(Token::FAllS);
            push_nat(out, *i as u64);
            serialize_formula(body, out);
        }
        Formula::ExistsSet(SetVar(i), body) => {
            out.push(Token::FExS);
            push_nat(out, *i as u64);
            serialize_formula(body, out);
        }
    }
}

/// Rank of the token string in the length-lexicographic enumeration:
/// all shorter strings first, then base-28 positional order within a length.
pub(crate) fn tokens_to_code(tokens: &[Token]) -> BigUint {
    let k = BigUint::from(ALPHABET_SIZE);
    // offset = (k^L - 1) / (k - 1), the number of strictly shorter strings.
    let mut offset = BigUint::zero();
    let mut power = BigUint::from(1u32);
    for _ in 0..tokens.len() {
        offset += &power;
        power *= &k;
    }
    let mut value = BigUint::zero();
    for t in tokens {
        value = value * &k + BigUint::from(*t as u8);
    }
    offset + value
}

fn code_to_tokens(code: &BigUint) -> Result<Vec<Token>, GodelError> {
    let k = BigUint::from(ALPHABET_SIZE);
    let mut offset = BigUint::zero();
    let mut power = BigUint::from(1u32);
    let mut len = 0usize;
    // find the length block containing the code
    loop {
        let next_offset = &offset + &power;
        if *code < next_offset {
            break;
        }
        offset = next_offset;
        power *= &k;
        len += 1;
        if len > 1_000_000 {
            return Err(GodelError::OutOfRange(code.to_string()));
        }
    }
    let mut rest = code - offset;
    let mut digits = vec![0u8; len];
    for slot in digits.iter_mut().rev() {
        let d = (&rest % &k).to_u8().expect("digit fits u8");
        *slot = d;
        rest /= &k;
    }
    Ok(digits
        .into_iter()
        .map(|d| Token::try_from(d).expect("digit below alphabet size"))
        .collect())
}

pub fn encode_term(t: &Term) -> GodelCode {
    let mut tokens = Vec::new();
    serialize_term(t, &mut tokens);
    GodelCode(tokens_to_code(&tokens))
}

pub fn encode_formula(f: &Formula) -> GodelCode {
    let mut tokens = Vec::new();
    serialize_formula(f, &mut tokens);
    GodelCode(tokens_to_code(&tokens))
}

/// A decoded kernel object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    Term(Term),
    Formula(Formula),
}

pub(crate) struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(tokens: &'a [Token]) -> Cursor<'a> {
        Cursor { tokens, pos: 0 }
    }

    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.peek()?;
        self.pos += 1;
        Some(t)
    }

    pub(crate) fn done(&self) -> bool {
        self.pos == self.tokens.len()
    }

    pub(crate) fn read_nat(&mut self) -> Option<u64> {
        let mut n: u64 = 0;
        let mut any = false;
        loop {
            match self.next()? {
                Token::D0 => n = n.checked_mul(4)?,
                Token::D1 => n = n.checked_mul(4)?.checked_add(1)?,
                Token::D2 => n = n.checked_mul(4)?.checked_add(2)?,
                Token::D3 => n = n.checked_mul(4)?.checked_add(3)?,
                Token::DEnd => return Some(n),
                _ => return None,
            }
            if !any && n == 0 {
                // a leading D0 would duplicate the bare-DEnd encoding of 0
                return None;
            }
            any = true;
        }
    }

    pub(crate) fn read_term(&mut self) -> Option<Term> {
        match self.next()? {
            Token::TZero => Some(Term::Zero),
            Token::TOne => Some(Term::One),
            Token::TVar => {
                let i = self.read_nat()?;
                Some(Term::Var(Var(u32::try_from(i).ok()?)))
            }
            Token::TAdd => Some(Term::add(self.read_term()?, self.read_term()?)),
            Token::TMul => Some(Term::mul(self.read_term()?, self.read_term()?)),
            Token::TExp => Some(Term::exp(self.read_term()?, self.read_term()?)),
            Token::TPair => Some(Term::pair(self.read_term()?, self.read_term()?)),
            Token::TProj0 => Some(Term::proj(ProjSide::Left, self.read_term()?)),
            Token::TProj1 => Some(Term::proj(ProjSide::Right, self.read_term()?)),
            _ => None,
        }
    }

    pub(crate) fn read_formula(&mut self) -> Option<Formula> {
        match self.next()? {
            Token::FEq => Some(Formula::Eq(self.read_term()?, self.read_term()?)),
            Token::FLt => Some(Formula::Lt(self.read_term()?, self.read_term()?)),
            Token::FIn => {
                let t = self.read_term()?;
                let i = self.read_nat()?;
                Some(Formula::In(t, SetVar(u32::try_from(i).ok()?)))
            }
            Token::FOracle => Some(Formula::Oracle(self.read_term()?)),
            Token::FNot => Some(Formula::not(self.read_formula()?)),
            Token::FAnd => Some(Formula::and(self.read_formula()?, self.read_formula()?)),
            Token::FOr => Some(Formula::or(self.read_formula()?, self.read_formula()?)),
            Token::FImp => Some(Formula::implies(self.read_formula()?, self.read_formula()?)),
            Token::FAllB => {
                let i = self.read_nat()?;
                let bound = self.read_term()?;
                let body = self.read_formula()?;
                Some(Formula::forall_lt(Var(u32::try_from(i).ok()?), bound, body))
            }
            Token::FExB => {
                let i = self.read_nat()?;
                let bound = self.read_term()?;
                let body = self.read_formula()?;
                Some(Formula::exists_lt(Var(u32::try_from(i).ok()?), bound, body))
            }
            Token::FAll => {
                let i = self.read_nat()?;
                Some(Formula::forall(
                    Var(u32::try_from(i).ok()?),
                    self.read_formula()?,
                ))
            }
            Token::FEx => {
                let i = self.read_nat()?;
                Some(Formula::exists(
                    Var(u32::try_from(i).ok()?),
                    self.read_formula()?,
                ))
            }
            Token::FAllS => {
                let i = self.read_nat()?;
                Some(Formula::forall_set(
                    SetVar(u32::try_from(i).ok()?),
                    self.read_formula()?,
                ))
            }
            Token::FExS => {
                let i = self.read_nat()?;
                Some(Formula::exists_set(
                    SetVar(u32::try_from(i).ok()?),
                    self.read_formula()?,
                ))
            }
            _ => None,
        }
    }
}

/// Decodes a code into the term or formula it names; codes that do not decode
/// to exactly one object are rejected.
pub fn decode(code: &GodelCode) -> Result<Decoded, GodelError> {
    let tokens = code_to_tokens(&code.0)?;
    if tokens.is_empty() {
        return Err(GodelError::OutOfRange(code.to_string()));
    }
    if (tokens[0] as u8) <= (Token::FExS as u8) {
        let mut cur = Cursor::new(&tokens);
        if let Some(f) = cur.read_formula() {
            if cur.done() {
                return Ok(Decoded::Formula(f));
            }
        }
    } else {
        let mut cur = Cursor::new(&tokens);
        if let Some(t) = cur.read_term() {
            if cur.done() {
                return Ok(Decoded::Term(t));
            }
        }
    }
    Err(GodelError::OutOfRange(code.to_string()))
}

pub fn decode_formula(code: &GodelCode) -> Result<Formula, GodelError> {
    match decode(code)? {
        Decoded::Formula(f) => Ok(f),
        Decoded::Term(_) => Err(GodelError::OutOfRange(code.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_simple() {
        let f = Formula::Eq(Term::Zero, Term::Zero);
        let code = encode_formula(&f);
        assert_eq!(decode(&code).unwrap(), Decoded::Formula(f));
    }

    #[test]
    fn subformula_codes_are_smaller() {
        let inner = Formula::Eq(Term::var(0), Term::numeral(2));
        let f = Formula::forall(
            Var(0),
            Formula::implies(Formula::Oracle(Term::var(0)), inner.clone()),
        );
        let outer = encode_formula(&f);
        for sub in f.proper_subformulas() {
            assert!(encode_formula(sub).0 < outer.0, "subformula not smaller");
        }
    }

    #[test]
    fn decode_rejects_the_empty_code() {
        // code 0 is the empty string, which names nothing
        assert!(decode(&GodelCode(BigUint::zero())).is_err());
    }

    #[test]
    fn decode_rejects_truncated_streams() {
        // FAnd alone: length-1 string starting a binary connective
        let code = GodelCode(tokens_to_code(&[Token::FAnd]));
        assert!(decode(&code).is_err());
    }

    #[test]
    fn terms_and_formulas_do_not_collide() {
        let t = Term::pair(Term::Zero, Term::One);
        let f = Formula::Oracle(Term::One);
        assert_ne!(encode_term(&t), encode_formula(&f));
        assert_eq!(decode(&encode_term(&t)).unwrap(), Decoded::Term(t));
    }

    #[test]
    fn nat_payload_round_trip() {
        for i in [0u32, 1, 3, 4, 17, 100, 1000] {
            let f = Formula::In(Term::var(i), SetVar(i + 1));
            let code = encode_formula(&f);
            assert_eq!(decode(&code).unwrap(), Decoded::Formula(f));
        }
    }
}

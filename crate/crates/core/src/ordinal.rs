//! Ordinal notations in Cantor normal form below ε₀, explicit finite
//! well-orders, and the uniform well-order interface the rest of the kernel
//! consumes (comparison, carrier membership, enumeration, level arithmetic).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::OrdinalError;
use crate::term::{pair_u64, unpair_code};

/// Cantor normal form: a descending list of `(exponent, coefficient)` pairs,
/// `ω^e₁·c₁ + … + ω^eₖ·cₖ` with `e₁ > … > eₖ` and all `cᵢ ≥ 1`. The empty
/// list is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CnfOrdinal {
    terms: Vec<(CnfOrdinal, u64)>,
}

impl CnfOrdinal {
    pub fn zero() -> CnfOrdinal {
        CnfOrdinal { terms: vec![] }
    }

    pub fn from_nat(n: u64) -> CnfOrdinal {
        if n == 0 {
            CnfOrdinal::zero()
        } else {
            CnfOrdinal {
                terms: vec![(CnfOrdinal::zero(), n)],
            }
        }
    }

    pub fn one() -> CnfOrdinal {
        CnfOrdinal::from_nat(1)
    }

    pub fn omega() -> CnfOrdinal {
        omega_power(&CnfOrdinal::one())
    }

    /// Constructs from raw terms, checking the CNF invariant.
    pub fn from_terms(terms: Vec<(CnfOrdinal, u64)>) -> Option<CnfOrdinal> {
        for window in terms.windows(2) {
            if cnf_compare(&window[0].0, &window[1].0) != Ordering::Greater {
                return None;
            }
        }
        if terms.iter().any(|(_, c)| *c == 0) {
            return None;
        }
        Some(CnfOrdinal { terms })
    }

    pub fn terms(&self) -> &[(CnfOrdinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.len() {
            0 => Some(0),
            1 if self.terms[0].0.is_zero() => Some(self.terms[0].1),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    /// Injective numeric code for carrier purposes: 0 ↦ 0 and
    /// `ω^e·c + rest ↦ 1 + ⟨⟨code(e), c-1⟩, code(rest)⟩`.
    pub fn code(&self) -> BigUint {
        if self.terms.is_empty() {
            return BigUint::from(0u32);
        }
        let (e, c) = &self.terms[0];
        let rest = CnfOrdinal {
            terms: self.terms[1..].to_vec(),
        };
        let head = crate::term::pair_code(&e.code(), &BigUint::from(c - 1));
        crate::term::pair_code(&head, &rest.code()) + 1u32
    }

    pub fn code_u64(&self) -> Option<u64> {
        self.code().to_u64()
    }

    pub fn decode(code: &BigUint) -> Option<CnfOrdinal> {
        if code.to_u32() == Some(0) {
            return Some(CnfOrdinal::zero());
        }
        let inner = code - 1u32;
        let (head, rest_code) = unpair_code(&inner);
        let (e_code, c_minus_1) = unpair_code(&head);
        let e = CnfOrdinal::decode(&e_code)?;
        let c = c_minus_1.to_u64()?.checked_add(1)?;
        let rest = CnfOrdinal::decode(&rest_code)?;
        let mut terms = vec![(e, c)];
        terms.extend(rest.terms);
        CnfOrdinal::from_terms(terms)
    }

    pub fn decode_u64(code: u64) -> Option<CnfOrdinal> {
        CnfOrdinal::decode(&BigUint::from(code))
    }
}

impl fmt::Display for CnfOrdinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                if e.is_zero() {
                    format!("{c}")
                } else if e.as_nat() == Some(1) {
                    if *c == 1 {
                        "w".to_string()
                    } else {
                        format!("w*{c}")
                    }
                } else if *c == 1 {
                    format!("w^({e})")
                } else {
                    format!("w^({e})*{c}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Lexicographic CNF comparison; a total order on notations.
pub fn cnf_compare(a: &CnfOrdinal, b: &CnfOrdinal) -> Ordering {
    for i in 0.. {
        match (a.terms.get(i), b.terms.get(i)) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((ea, ca)), Some((eb, cb))) => {
                match cnf_compare(ea, eb) {
                    Ordering::Equal => {}
                    o => return o,
                }
                match ca.cmp(cb) {
                    Ordering::Equal => {}
                    o => return o,
                }
            }
        }
    }
    unreachable!()
}

/// Ordinal addition with left absorption.
pub fn cnf_add(a: &CnfOrdinal, b: &CnfOrdinal) -> CnfOrdinal {
    if b.is_zero() {
        return a.clone();
    }
    let lead = &b.terms[0].0;
    let mut terms: Vec<(CnfOrdinal, u64)> = a
        .terms
        .iter()
        .filter(|(e, _)| cnf_compare(e, lead) == Ordering::Greater)
        .cloned()
        .collect();
    // Merge the boundary term if the exponents coincide.
    if let Some((e, c)) = a
        .terms
        .iter()
        .find(|(e, _)| cnf_compare(e, lead) == Ordering::Equal)
    {
        terms.push((e.clone(), c + b.terms[0].1));
        terms.extend(b.terms[1..].iter().cloned());
    } else {
        terms.extend(b.terms.iter().cloned());
    }
    CnfOrdinal { terms }
}

/// Left multiplication by a natural number: `m·α`, which distributes over the
/// normal form termwise and fixes every infinite term (`m·ω^e·c = ω^e·c` for
/// `e > 0`), scaling only a trailing finite part.
pub fn nat_left_mul(m: u64, a: &CnfOrdinal) -> CnfOrdinal {
    if m == 0 || a.is_zero() {
        return CnfOrdinal::zero();
    }
    let mut terms = a.terms.clone();
    if let Some(last) = terms.last_mut() {
        if last.0.is_zero() {
            last.1 *= m;
        }
    }
    CnfOrdinal { terms }
}

/// ω^α.
pub fn omega_power(a: &CnfOrdinal) -> CnfOrdinal {
    CnfOrdinal {
        terms: vec![(a.clone(), 1)],
    }
}

/// ω·α: left multiplication by ω, shifting every exponent by `1 + e`.
pub fn omega_left_mul(a: &CnfOrdinal) -> CnfOrdinal {
    let terms = a
        .terms
        .iter()
        .map(|(e, c)| (cnf_add(&CnfOrdinal::one(), e), *c))
        .collect();
    CnfOrdinal { terms }
}

/// An explicit finite relation intended as a well-order: carrier, strict
/// relation pairs, and an optional addition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteWellOrder {
    pub carrier: BTreeSet<u64>,
    pub relation: BTreeSet<(u64, u64)>,
    pub addition: Option<BTreeMap<(u64, u64), u64>>,
}

impl FiniteWellOrder {
    /// The order `n` = {0 < 1 < … < n-1}.
    pub fn initial_segment(n: u64) -> FiniteWellOrder {
        let carrier: BTreeSet<u64> = (0..n).collect();
        let relation = (0..n)
            .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
            .collect();
        FiniteWellOrder {
            carrier,
            relation,
            addition: None,
        }
    }

    pub fn from_chain(chain: &[u64]) -> FiniteWellOrder {
        let carrier: BTreeSet<u64> = chain.iter().copied().collect();
        let mut relation = BTreeSet::new();
        for i in 0..chain.len() {
            for j in (i + 1)..chain.len() {
                relation.insert((chain[i], chain[j]));
            }
        }
        FiniteWellOrder {
            carrier,
            relation,
            addition: None,
        }
    }

    pub fn less(&self, a: u64, b: u64) -> bool {
        self.relation.contains(&(a, b))
    }
}

/// Witness for a failed well-order check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WoViolation {
    Reflexive(u64),
    Cycle(Vec<u64>),
    NotTransitive(u64, u64, u64),
    Incomparable(u64, u64),
    RelationOutsideCarrier(u64, u64),
    AdditionViolation(String),
}

/// Decides `wo(Λ)` for an explicit finite relation: linearity plus the least
/// element property (automatic for finite strict linear orders). On failure a
/// concrete witness is returned.
pub fn check_wo(order: &FiniteWellOrder) -> Result<(), WoViolation> {
    for &(a, b) in &order.relation {
        if !order.carrier.contains(&a) || !order.carrier.contains(&b) {
            return Err(WoViolation::RelationOutsideCarrier(a, b));
        }
    }
    for &a in &order.carrier {
        if order.less(a, a) {
            return Err(WoViolation::Reflexive(a));
        }
    }
    for &(a, b) in &order.relation {
        if order.less(b, a) {
            return Err(WoViolation::Cycle(vec![a, b]));
        }
        for &(b2, c) in &order.relation {
            if b2 == b && !order.less(a, c) {
                if a == c {
                    return Err(WoViolation::Cycle(vec![a, b]));
                }
                return Err(WoViolation::NotTransitive(a, b, c));
            }
        }
    }
    for &a in &order.carrier {
        for &b in &order.carrier {
            if a != b && !order.less(a, b) && !order.less(b, a) {
                return Err(WoViolation::Incomparable(a.min(b), a.max(b)));
            }
        }
    }
    if let Some(table) = &order.addition {
        for (&(a, b), &c) in table {
            if !order.carrier.contains(&a)
                || !order.carrier.contains(&b)
                || !order.carrier.contains(&c)
            {
                return Err(WoViolation::AdditionViolation(format!(
                    "{a}+{b}={c} leaves the carrier"
                )));
            }
        }
        // Monotonicity in the right argument and associativity where defined.
        for (&(a, b), &ab) in table {
            for (&(a2, b2), &ab2) in table {
                if a2 == a && order.less(b, b2) && !order.less(ab, ab2) {
                    return Err(WoViolation::AdditionViolation(format!(
                        "addition not monotone: {a}+{b} vs {a}+{b2}"
                    )));
                }
            }
            for (&(c, d), &cd) in table {
                if c == ab {
                    if let Some(&bd) = table.get(&(b, d)) {
                        if let Some(&a_bd) = table.get(&(a, bd)) {
                            if a_bd != cd {
                                return Err(WoViolation::AdditionViolation(format!(
                                    "addition not associative at ({a},{b},{d})"
                                )));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// A well-order exposed to the kernel: either a CNF-notation order (carrier =
/// codes of notations ≤ bound) or an explicit finite relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WellOrder {
    Finite(FiniteWellOrder),
    Cnf { bound: CnfOrdinal },
}

impl WellOrder {
    pub fn finite(n: u64) -> WellOrder {
        WellOrder::Finite(FiniteWellOrder::initial_segment(n))
    }

    pub fn cnf(bound: CnfOrdinal) -> WellOrder {
        WellOrder::Cnf { bound }
    }

    pub fn contains(&self, element: u64) -> bool {
        match self {
            WellOrder::Finite(f) => f.carrier.contains(&element),
            WellOrder::Cnf { bound } => match CnfOrdinal::decode_u64(element) {
                Some(a) => cnf_compare(&a, bound) != Ordering::Greater,
                None => false,
            },
        }
    }

    pub fn less(&self, a: u64, b: u64) -> bool {
        match self {
            WellOrder::Finite(f) => f.less(a, b),
            WellOrder::Cnf { bound } => {
                match (CnfOrdinal::decode_u64(a), CnfOrdinal::decode_u64(b)) {
                    (Some(x), Some(y)) => {
                        cnf_compare(&x, bound) != Ordering::Greater
                            && cnf_compare(&y, bound) != Ordering::Greater
                            && cnf_compare(&x, &y) == Ordering::Less
                    }
                    _ => false,
                }
            }
        }
    }

    pub fn leq(&self, a: u64, b: u64) -> bool {
        (a == b && self.contains(a)) || self.less(a, b)
    }

    /// Ascending enumeration of the carrier, when finite.
    pub fn elements(&self) -> Result<Vec<u64>, OrdinalError> {
        match self {
            WellOrder::Finite(f) => {
                let mut v: Vec<u64> = f.carrier.iter().copied().collect();
                v.sort_by(|a, b| {
                    if f.less(*a, *b) {
                        Ordering::Less
                    } else if f.less(*b, *a) {
                        Ordering::Greater
                    } else {
                        a.cmp(b)
                    }
                });
                Ok(v)
            }
            WellOrder::Cnf { bound } => match bound.as_nat() {
                Some(n) => Ok((0..=n)
                    .map(|k| {
                        CnfOrdinal::from_nat(k)
                            .code_u64()
                            .expect("small finite notation codes")
                    })
                    .collect()),
                None => Err(OrdinalError::NotFinite),
            },
        }
    }

    pub fn least(&self) -> Option<u64> {
        match self {
            WellOrder::Finite(f) => {
                let mut least = None;
                for &a in &f.carrier {
                    match least {
                        None => least = Some(a),
                        Some(l) => {
                            if f.less(a, l) {
                                least = Some(a)
                            }
                        }
                    }
                }
                least
            }
            WellOrder::Cnf { .. } => CnfOrdinal::zero().code_u64(),
        }
    }

    /// Validity of the order as a whole (finite: explicit check; CNF: always).
    pub fn check(&self) -> Result<(), WoViolation> {
        match self {
            WellOrder::Finite(f) => check_wo(f),
            WellOrder::Cnf { .. } => Ok(()),
        }
    }

    /// Element code of the k-th finite position (0, 1, 2, …) of this order,
    /// if the position exists.
    pub fn nth_element(&self, k: u64) -> Option<u64> {
        match self {
            WellOrder::Finite(_) => {
                let elems = self.elements().ok()?;
                elems.get(k as usize).copied()
            }
            WellOrder::Cnf { bound } => {
                let notation = CnfOrdinal::from_nat(k);
                if cnf_compare(&notation, bound) == Ordering::Greater {
                    None
                } else {
                    notation.code_u64()
                }
            }
        }
    }

    /// Predecessor in the carrier enumeration (finite carriers only).
    pub fn predecessor(&self, element: u64) -> Result<Option<u64>, OrdinalError> {
        let elems = self.elements()?;
        let mut prev = None;
        for e in elems {
            if e == element {
                return Ok(prev);
            }
            prev = Some(e);
        }
        Err(OrdinalError::NotAnElement(element))
    }
}

/// Lexicographic product of a finite order Λ with a finite index set `Y` under
/// its numeric order: carrier `⟨x, y⟩`, and `⟨x,y⟩ < ⟨x',y'⟩` iff
/// `x <_Λ x'` or (`x = x'` and `y < y'`).
pub fn lex_product(
    order: &FiniteWellOrder,
    index_set: &BTreeSet<u64>,
) -> Result<FiniteWellOrder, OrdinalError> {
    if index_set.is_empty() {
        return Err(OrdinalError::EmptyIndexSet);
    }
    let mut carrier = BTreeSet::new();
    let mut pairs = Vec::new();
    for &x in &order.carrier {
        for &y in index_set {
            let code = pair_u64(x, y)
                .to_u64()
                .ok_or(OrdinalError::NotFinite)?;
            carrier.insert(code);
            pairs.push((x, y, code));
        }
    }
    let mut relation = BTreeSet::new();
    for &(x, y, c) in &pairs {
        for &(x2, y2, c2) in &pairs {
            if order.less(x, x2) || (x == x2 && y < y2) {
                relation.insert((c, c2));
            }
        }
    }
    Ok(FiniteWellOrder {
        carrier,
        relation,
        addition: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> CnfOrdinal {
        CnfOrdinal::omega()
    }

    #[test]
    fn compare_basics() {
        assert_eq!(cnf_compare(&w(), &CnfOrdinal::one()), Ordering::Greater);
        let w1 = cnf_add(&w(), &CnfOrdinal::one());
        assert_eq!(cnf_compare(&w1, &w1), Ordering::Equal);
        assert_eq!(cnf_compare(&CnfOrdinal::zero(), &w()), Ordering::Less);
    }

    #[test]
    fn addition_absorbs() {
        // 1 + ω = ω
        assert_eq!(cnf_add(&CnfOrdinal::one(), &w()), w());
        // ω + 1 > ω
        let w1 = cnf_add(&w(), &CnfOrdinal::one());
        assert_eq!(cnf_compare(&w1, &w()), Ordering::Greater);
        // α + 0 = α
        assert_eq!(cnf_add(&w1, &CnfOrdinal::zero()), w1);
    }

    #[test]
    fn left_mul_scales_only_the_finite_tail() {
        // 2·(ω+1) = ω+2
        let w1 = cnf_add(&w(), &CnfOrdinal::one());
        let expected = cnf_add(&w(), &CnfOrdinal::from_nat(2));
        assert_eq!(nat_left_mul(2, &w1), expected);
        // 0·α = 0
        assert_eq!(nat_left_mul(0, &w1), CnfOrdinal::zero());
        // 3·5 = 15
        assert_eq!(
            nat_left_mul(3, &CnfOrdinal::from_nat(5)),
            CnfOrdinal::from_nat(15)
        );
    }

    #[test]
    fn omega_power_basics() {
        assert_eq!(omega_power(&CnfOrdinal::zero()), CnfOrdinal::one());
        assert_eq!(omega_power(&CnfOrdinal::one()), w());
        // strict monotonicity on a few pairs
        let a = omega_power(&CnfOrdinal::from_nat(2));
        let b = omega_power(&w());
        assert_eq!(cnf_compare(&a, &b), Ordering::Less);
    }

    #[test]
    fn omega_left_mul_shifts() {
        // ω·2 = ω·2 (as CNF: ω^1·2)
        let two = CnfOrdinal::from_nat(2);
        let w2 = omega_left_mul(&two);
        assert_eq!(
            w2,
            CnfOrdinal::from_terms(vec![(CnfOrdinal::one(), 2)]).unwrap()
        );
        // ω·(ω+1) = ω²+ω
        let w1 = cnf_add(&w(), &CnfOrdinal::one());
        let expect = cnf_add(&omega_power(&CnfOrdinal::from_nat(2)), &w());
        assert_eq!(omega_left_mul(&w1), expect);
    }

    #[test]
    fn notation_codes_round_trip() {
        let samples = vec![
            CnfOrdinal::zero(),
            CnfOrdinal::one(),
            CnfOrdinal::from_nat(7),
            w(),
            cnf_add(&w(), &CnfOrdinal::from_nat(3)),
            omega_power(&w()),
            cnf_add(&omega_power(&CnfOrdinal::from_nat(2)), &w()),
        ];
        for a in samples {
            let code = a.code();
            assert_eq!(CnfOrdinal::decode(&code), Some(a));
        }
    }

    #[test]
    fn check_wo_accepts_chains_and_reports_violations() {
        assert!(check_wo(&FiniteWellOrder::initial_segment(3)).is_ok());

        let mut cyc = FiniteWellOrder::initial_segment(0);
        cyc.carrier = [0, 1].into_iter().collect();
        cyc.relation = [(0, 1), (1, 0)].into_iter().collect();
        assert!(matches!(
            check_wo(&cyc),
            Err(WoViolation::Cycle(_)) | Err(WoViolation::NotTransitive(..))
        ));

        let mut partial = FiniteWellOrder::initial_segment(3);
        partial.relation.remove(&(0, 2));
        let r = check_wo(&partial);
        assert!(r.is_err());
    }

    #[test]
    fn lex_product_small_cases() {
        // Λ = 2, Y = {5}: order of type 2
        let l2 = FiniteWellOrder::initial_segment(2);
        let y: BTreeSet<u64> = [5].into_iter().collect();
        let p = lex_product(&l2, &y).unwrap();
        assert_eq!(p.carrier.len(), 2);
        assert!(check_wo(&p).is_ok());

        // Y = ∅ errors
        let empty = BTreeSet::new();
        assert_eq!(lex_product(&l2, &empty), Err(OrdinalError::EmptyIndexSet));
    }

    #[test]
    fn lex_product_type_four() {
        // Λ = 2, Y = {1,2}: ⟨0,1⟩ < ⟨0,2⟩ < ⟨1,1⟩ < ⟨1,2⟩
        let l2 = FiniteWellOrder::initial_segment(2);
        let y: BTreeSet<u64> = [1, 2].into_iter().collect();
        let p = lex_product(&l2, &y).unwrap();
        assert!(check_wo(&p).is_ok());
        // Independent oracle: enumerate pairs, sort by the quoted rule, and
        // compare the chains.
        let mut pairs: Vec<(u64, u64)> = l2
            .carrier
            .iter()
            .flat_map(|&x| y.iter().map(move |&yy| (x, yy)))
            .collect();
        pairs.sort_by(|(x1, y1), (x2, y2)| x1.cmp(x2).then(y1.cmp(y2)));
        let codes: Vec<u64> = pairs
            .iter()
            .map(|&(x, yv)| pair_u64(x, yv).to_u64().unwrap())
            .collect();
        for i in 0..codes.len() {
            for j in (i + 1)..codes.len() {
                assert!(p.less(codes[i], codes[j]));
                assert!(!p.less(codes[j], codes[i]));
            }
        }
    }

    #[test]
    fn wellorder_uniform_interface() {
        let fin = WellOrder::finite(3);
        assert!(fin.contains(2));
        assert!(!fin.contains(3));
        assert!(fin.less(0, 2));
        assert_eq!(fin.elements().unwrap(), vec![0, 1, 2]);

        let cnf = WellOrder::cnf(CnfOrdinal::from_nat(2));
        let e = cnf.elements().unwrap();
        assert_eq!(e.len(), 3);
        assert!(cnf.less(e[0], e[2]));
        assert_eq!(cnf.least(), Some(CnfOrdinal::zero().code_u64().unwrap()));

        let unbounded = WellOrder::cnf(CnfOrdinal::omega());
        assert!(unbounded.elements().is_err());
        let w_code = CnfOrdinal::omega().code_u64().unwrap();
        let two_code = CnfOrdinal::from_nat(2).code_u64().unwrap();
        assert!(unbounded.less(two_code, w_code));
        assert!(unbounded.contains(w_code));
    }
}

//! Tree-shaped certificates for nested ω-rule provability, and their checker.
//!
//! A certificate is either a finitary proof or an ω-node: a level witness ξ,
//! a premise formula ψ with one distinguished free variable, a finite
//! presentation of the premise family `ψ(n̄)` for all n, and a finitary proof
//! of `∀x ψ(x) → φ`. The node is accepted at level λ when ξ precedes λ in the
//! ambient well-order and the premises verify under the chosen policy.

use crate::builder::ProofBuilder;
use crate::error::CertError;
use crate::formula::Formula;
use crate::ordinal::WellOrder;
use crate::proof::{check_proof, FinitaryProof, Justification, ProofLine};
use crate::term::Var;
use crate::theory::OracleTheory;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OmegaCertificate {
    Fin(FinitaryProof),
    Omega {
        /// ξ: the level the premises are claimed at (an order-element code).
        level_witness: u64,
        /// The distinguished variable of the premise formula.
        premise_var: Var,
        /// ψ: the premise formula, with `premise_var` (possibly) free.
        premise_body: Formula,
        template: PremiseTemplate,
        /// Finitary proof of `∀x ψ(x) → φ`.
        implication: FinitaryProof,
    },
}

/// Finite presentation of the ω-many premises `ψ(n̄)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PremiseTemplate {
    /// One certificate of ψ with the distinguished variable free; covers all
    /// instances at once.
    Uniform(Box<OmegaCertificate>),
    /// Explicit certificates for `n < entries.len()`, with an optional
    /// uniform tail template for the remaining instances.
    Tabulated {
        entries: Vec<OmegaCertificate>,
        tail: Option<Box<OmegaCertificate>>,
    },
}

/// How ω-premises are verified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckPolicy {
    /// Only uniform (free-variable) premise certificates are accepted; sound
    /// relative to the calculus.
    UniformRequired,
    /// Spot-check the first k instances; verdicts are flagged advisory.
    Sampled(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    AcceptedAdvisory,
    Rejected(String),
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted | Verdict::AcceptedAdvisory)
    }

    fn join(self, other: Verdict) -> Verdict {
        match (self, other) {
            (r @ Verdict::Rejected(_), _) | (_, r @ Verdict::Rejected(_)) => r,
            (Verdict::AcceptedAdvisory, _) | (_, Verdict::AcceptedAdvisory) => {
                Verdict::AcceptedAdvisory
            }
            _ => Verdict::Accepted,
        }
    }
}

impl OmegaCertificate {
    /// The formula this certificate concludes, read off the structure.
    pub fn conclusion(&self) -> Option<&Formula> {
        match self {
            OmegaCertificate::Fin(d) => d.conclusion(),
            OmegaCertificate::Omega { implication, .. } => match implication.conclusion()? {
                Formula::Implies(_, c) => Some(c),
                _ => None,
            },
        }
    }

    /// Depth of nested ω-nodes (0 for finitary leaves).
    pub fn omega_depth(&self) -> usize {
        match self {
            OmegaCertificate::Fin(_) => 0,
            OmegaCertificate::Omega { template, .. } => {
                let inner = match template {
                    PremiseTemplate::Uniform(c) => c.omega_depth(),
                    PremiseTemplate::Tabulated { entries, tail } => entries
                        .iter()
                        .map(|c| c.omega_depth())
                        .chain(tail.iter().map(|c| c.omega_depth()))
                        .max()
                        .unwrap_or(0),
                };
                inner + 1
            }
        }
    }

    /// Whether every template in the tree is uniform.
    pub fn is_uniform(&self) -> bool {
        match self {
            OmegaCertificate::Fin(_) => true,
            OmegaCertificate::Omega { template, .. } => match template {
                PremiseTemplate::Uniform(c) => c.is_uniform(),
                PremiseTemplate::Tabulated { .. } => false,
            },
        }
    }
}

/// Wraps a proof of an open formula into a proof of a substitution instance:
/// generalize, instantiate, detach.
pub fn substitute_proof(proof: &FinitaryProof, var: Var, term: &crate::term::Term) -> FinitaryProof {
    let concl = proof
        .conclusion()
        .expect("instantiating an empty proof")
        .clone();
    let mut lines = proof.lines.clone();
    let base = lines.len() - 1;
    let all = Formula::forall(var, concl.clone());
    lines.push(ProofLine {
        formula: all.clone(),
        justification: Justification::Gen(base, var),
    });
    debug_assert!(concl.free_for(var, term));
    let inst = concl.substitute_term(var, term);
    lines.push(ProofLine {
        formula: Formula::implies(all, inst.clone()),
        justification: Justification::UnivInst,
    });
    lines.push(ProofLine {
        formula: inst,
        justification: Justification::Mp(base + 2, base + 1),
    });
    FinitaryProof { lines }
}

pub fn instantiate_proof(proof: &FinitaryProof, var: Var, value: u64) -> FinitaryProof {
    substitute_proof(proof, var, &crate::term::Term::numeral(value))
}

/// Substitutes a term for the hole variable throughout a certificate skeleton.
/// The result concludes `conclusion[var/term]`.
pub fn substitute_certificate(
    cert: &OmegaCertificate,
    var: Var,
    term: &crate::term::Term,
) -> OmegaCertificate {
    match cert {
        OmegaCertificate::Fin(d) => OmegaCertificate::Fin(substitute_proof(d, var, term)),
        OmegaCertificate::Omega {
            level_witness,
            premise_var,
            premise_body,
            template,
            implication,
        } => {
            assert_ne!(
                premise_var, &var,
                "hole variable collides with a premise variable"
            );
            let template = match template {
                PremiseTemplate::Uniform(c) => {
                    PremiseTemplate::Uniform(Box::new(substitute_certificate(c, var, term)))
                }
                PremiseTemplate::Tabulated { entries, tail } => PremiseTemplate::Tabulated {
                    entries: entries
                        .iter()
                        .map(|c| substitute_certificate(c, var, term))
                        .collect(),
                    tail: tail
                        .as_ref()
                        .map(|c| Box::new(substitute_certificate(c, var, term))),
                },
            };
            OmegaCertificate::Omega {
                level_witness: *level_witness,
                premise_var: *premise_var,
                premise_body: premise_body.substitute_term(var, term),
                template,
                implication: substitute_proof(implication, var, term),
            }
        }
    }
}

/// Instantiates a certificate skeleton with a numeral for its hole variable.
pub fn instantiate_certificate(
    cert: &OmegaCertificate,
    var: Var,
    value: u64,
) -> OmegaCertificate {
    substitute_certificate(cert, var, &crate::term::Term::numeral(value))
}

/// Extends a certificate's conclusion through a proved implication: given a
/// certificate of φ and a finitary proof of `φ → χ`, yields a certificate of
/// χ at the same level.
pub fn strengthen(cert: OmegaCertificate, step: &FinitaryProof) -> OmegaCertificate {
    let step_concl = step.conclusion().expect("empty strengthening step");
    let Formula::Implies(from, _to) = step_concl else {
        panic!("strengthening step must prove an implication");
    };
    match cert {
        OmegaCertificate::Fin(d) => {
            debug_assert_eq!(d.conclusion(), Some(&**from));
            let mut b = ProofBuilder::new();
            let got = b.absorb(&d);
            let imp = b.absorb(step);
            let out = b.mp(imp, got);
            OmegaCertificate::Fin(b.finish(out))
        }
        OmegaCertificate::Omega {
            level_witness,
            premise_var,
            premise_body,
            template,
            implication,
        } => {
            // implication: ∀xψ → φ; step: φ → χ; compose to ∀xψ → χ
            let mut b = ProofBuilder::new();
            let first = b.absorb(&implication);
            let second = b.absorb(step);
            let out = b.compose(first, second);
            OmegaCertificate::Omega {
                level_witness,
                premise_var,
                premise_body,
                template,
                implication: b.finish(out),
            }
        }
    }
}

/// Checks a certificate against a conclusion at a level of the ambient order.
pub fn check_certificate(
    cert: &OmegaCertificate,
    level: u64,
    conclusion: &Formula,
    theory: &OracleTheory,
    order: &WellOrder,
    policy: CheckPolicy,
) -> Result<Verdict, CertError> {
    if !order.contains(level) {
        return Err(CertError::CheckLevelNotInCarrier(level));
    }
    check_inner(cert, level, conclusion, theory, order, policy)
}

fn check_inner(
    cert: &OmegaCertificate,
    level: u64,
    conclusion: &Formula,
    theory: &OracleTheory,
    order: &WellOrder,
    policy: CheckPolicy,
) -> Result<Verdict, CertError> {
    match cert {
        OmegaCertificate::Fin(d) => Ok(match check_proof(theory, d, conclusion) {
            Ok(()) => Verdict::Accepted,
            Err(e) => Verdict::Rejected(format!("finitary proof rejected: {e}")),
        }),
        OmegaCertificate::Omega {
            level_witness,
            premise_var,
            premise_body,
            template,
            implication,
        } => {
            let xi = *level_witness;
            if !order.contains(xi) {
                return Err(CertError::LevelNotInCarrier(xi));
            }
            if !order.less(xi, level) {
                return Ok(Verdict::Rejected("ξ <_Λ λ violated".to_string()));
            }
            let all = Formula::forall(*premise_var, premise_body.clone());
            let needed = Formula::implies(all, conclusion.clone());
            if let Err(e) = check_proof(theory, implication, &needed) {
                return Ok(Verdict::Rejected(format!(
                    "side implication rejected: {e}"
                )));
            }
            match policy {
                CheckPolicy::UniformRequired => match template {
                    PremiseTemplate::Uniform(skeleton) => {
                        let inner = check_inner(
                            skeleton,
                            xi,
                            premise_body,
                            theory,
                            order,
                            policy,
                        )?;
                        Ok(match inner {
                            Verdict::Rejected(r) => {
                                Verdict::Rejected(format!("premise skeleton: {r}"))
                            }
                            v => v,
                        })
                    }
                    PremiseTemplate::Tabulated { .. } => Ok(Verdict::Rejected(
                        "uniform premise template required".to_string(),
                    )),
                },
                CheckPolicy::Sampled(k) => {
                    let mut verdict = Verdict::AcceptedAdvisory;
                    for i in 0..k {
                        let expected = premise_body.substitute_numeral(*premise_var, i);
                        let inst = match template {
                            PremiseTemplate::Uniform(skeleton) => {
                                instantiate_certificate(skeleton, *premise_var, i)
                            }
                            PremiseTemplate::Tabulated { entries, tail } => {
                                if let Some(c) = entries.get(i as usize) {
                                    c.clone()
                                } else if let Some(t) = tail {
                                    instantiate_certificate(t, *premise_var, i)
                                } else {
                                    return Ok(Verdict::Rejected(format!(
                                        "no premise certificate for instance {i}"
                                    )));
                                }
                            }
                        };
                        let inner =
                            check_inner(&inst, xi, &expected, theory, order, policy)?;
                        verdict = verdict.join(match inner {
                            Verdict::Rejected(r) => {
                                Verdict::Rejected(format!("premise instance {i}: {r}"))
                            }
                            v => v,
                        });
                        if matches!(verdict, Verdict::Rejected(_)) {
                            break;
                        }
                    }
                    Ok(verdict)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::{OracleSet, SetDescriptor};
    use crate::eval::Caps;
    use crate::synth::Synth;
    use crate::term::Term;
    use crate::theory::{OracleTheory, TheorySpec};

    fn theory() -> OracleTheory {
        OracleTheory::new(
            TheorySpec::eca0(),
            OracleSet::Plain(SetDescriptor::singleton(2)),
        )
    }

    fn fin_axiom_cert(phi: Formula) -> OmegaCertificate {
        OmegaCertificate::Fin(FinitaryProof {
            lines: vec![ProofLine {
                formula: phi,
                justification: Justification::TheoryAxiom,
            }],
        })
    }

    /// An ω-node proving ∀x (x+0 = x) from the uniform premise x+0 = x.
    fn omega_node(theory: &OracleTheory, xi: u64) -> (OmegaCertificate, Formula) {
        let body = Formula::Eq(Term::add(Term::var(0), Term::Zero), Term::var(0));
        let concl = Formula::forall(Var(0), body.clone());
        let synth = Synth::new(theory, Caps::default());
        let mut b = ProofBuilder::new();
        let skel_idx = synth.prove_schematic(&mut b, &body).unwrap();
        let skel = OmegaCertificate::Fin(b.finish(skel_idx));
        let mut ib = ProofBuilder::new();
        let t = ib.taut(Formula::implies(concl.clone(), concl.clone()));
        let implication = ib.finish(t);
        (
            OmegaCertificate::Omega {
                level_witness: xi,
                premise_var: Var(0),
                premise_body: body,
                template: PremiseTemplate::Uniform(Box::new(skel)),
                implication,
            },
            concl,
        )
    }

    #[test]
    fn finitary_leaf_accepted_at_level_zero() {
        let th = theory();
        let order = WellOrder::finite(1);
        let cert = fin_axiom_cert(Formula::Oracle(Term::numeral(2)));
        let v = check_certificate(
            &cert,
            0,
            &Formula::Oracle(Term::numeral(2)),
            &th,
            &order,
            CheckPolicy::UniformRequired,
        )
        .unwrap();
        assert_eq!(v, Verdict::Accepted);
    }

    #[test]
    fn omega_node_needs_a_smaller_witness() {
        let th = theory();
        let order = WellOrder::finite(2);
        let (cert, concl) = omega_node(&th, 1);
        // ξ = λ = 1 violates the side condition
        let v =
            check_certificate(&cert, 1, &concl, &th, &order, CheckPolicy::UniformRequired)
                .unwrap();
        assert_eq!(v, Verdict::Rejected("ξ <_Λ λ violated".to_string()));
    }

    #[test]
    fn omega_node_accepted_uniformly() {
        let th = theory();
        let order = WellOrder::finite(2);
        let (cert, concl) = omega_node(&th, 0);
        let v =
            check_certificate(&cert, 1, &concl, &th, &order, CheckPolicy::UniformRequired)
                .unwrap();
        assert_eq!(v, Verdict::Accepted);
        // sampled checking instantiates the skeleton and is advisory
        let v2 = check_certificate(&cert, 1, &concl, &th, &order, CheckPolicy::Sampled(5))
            .unwrap();
        assert_eq!(v2, Verdict::AcceptedAdvisory);
    }

    #[test]
    fn levels_outside_the_carrier_are_errors() {
        let th = theory();
        let order = WellOrder::finite(2);
        let (cert, concl) = omega_node(&th, 7);
        assert!(matches!(
            check_certificate(&cert, 1, &concl, &th, &order, CheckPolicy::UniformRequired),
            Err(CertError::LevelNotInCarrier(7))
        ));
        assert!(matches!(
            check_certificate(&cert, 9, &concl, &th, &order, CheckPolicy::UniformRequired),
            Err(CertError::CheckLevelNotInCarrier(9))
        ));
    }

    #[test]
    fn instantiation_turns_free_proofs_into_numeral_proofs() {
        let th = theory();
        let synth = Synth::new(&th, Caps::default());
        let body = Formula::Eq(Term::add(Term::var(0), Term::Zero), Term::var(0));
        let mut b = ProofBuilder::new();
        let idx = synth.prove_schematic(&mut b, &body).unwrap();
        let proof = b.finish(idx);
        let inst = instantiate_proof(&proof, Var(0), 5);
        let expected = body.substitute_numeral(Var(0), 5);
        check_proof(&th, &inst, &expected).unwrap();
    }

    #[test]
    fn strengthen_retargets_conclusions() {
        let th = theory();
        let order = WellOrder::finite(2);
        let (cert, concl) = omega_node(&th, 0);
        // strengthen ∀x(x+0=x) to (∀x(x+0=x) ∨ 𝔒(3))
        let target = Formula::or(concl.clone(), Formula::Oracle(Term::numeral(3)));
        let mut b = ProofBuilder::new();
        let t = b.taut(Formula::implies(concl.clone(), target.clone()));
        let step = b.finish(t);
        let stronger = strengthen(cert, &step);
        assert_eq!(stronger.conclusion(), Some(&target));
        let v = check_certificate(
            &stronger,
            1,
            &target,
            &th,
            &order,
            CheckPolicy::UniformRequired,
        )
        .unwrap();
        assert_eq!(v, Verdict::Accepted);
    }
}

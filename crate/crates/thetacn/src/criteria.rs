//! The certification-rule catalogue and the classifier built on it.
//!
//! Each rule pairs three ingredients:
//!
//! * **applicability** — a hypothesis on `n`: its class mod 24, whether 3
//!   divides it, and the residue pattern of its prime divisors mod 3 (or
//!   mod 12 for the two one-directional rules);
//! * **a graph prediction** — an oddness condition on one of the residue
//!   graphs of [`crate::graph`], sometimes restricted to partitions passing a
//!   congruence or Legendre-symbol filter;
//! * **the descent truth** — an exact statement about the groups `S′(E)` or
//!   `S(E)` computed by [`crate::descent::selmer`].
//!
//! A rule *agrees* on `n` when prediction and truth coincide; the two
//! one-directional rules ([`CriterionId::Cor4_3_II`] and
//! [`CriterionId::Cor5_3`]) agree unless the prediction fires while the truth
//! fails. The descent side is always ground truth: [`verify_range`] sweeps an
//! interval and reports every disagreement.
//!
//! Three rules circulate in two inequivalent readings (a published statement
//! form and the form the underlying argument actually supports). The
//! catalogue evaluates the supported form; [`statement_reading_prediction`]
//! exposes the statement form so sweeps can report both.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::arith::{class_of, factor_square_free, legendre_of_class, SquareClass};
use crate::descent::{selmer, torsion_seed, Curve, SelmerReport, Theta};
use crate::graph::{
    build_all_sources, build_mutual_residue, build_unified, check_constrained_oddness,
    is_odd_graph, ResidueGraph, VertexLabel,
};
use crate::witness::{search_point, WitnessPoint};

/// Height bound used by [`classify`] when it searches for a rational point on
/// a curve whose Selmer rank bound is positive.
pub const WITNESS_AUTO_HEIGHT: u64 = 10;

/// [`classify`] skips the automatic point search above this `n`: the search
/// cost grows with `n` and the certificate does not depend on the witness.
pub const WITNESS_AUTO_MAX_N: u64 = 100_000;

/// Scope violations raised by rule evaluation and classification.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CriteriaError {
    /// Rules are stated for odd square-free `n ≥ 5` only.
    #[error("rules are defined for odd square-free n >= 5, got {0}")]
    EvenOrNonSquareFree(u64),
    /// Classification covers the same inputs; smaller, even, or
    /// repeated-factor `n` carry no certificate.
    #[error("n = {0} is out of scope: classification covers odd square-free n >= 5")]
    OutOfScope(u64),
}

/// Stable identifiers for the twenty certification rules. The declaration
/// order is part of the public interface: fired-rule lists and sweep reports
/// follow it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
#[allow(non_camel_case_types)]
pub enum CriterionId {
    Thm4_1_I1,
    Thm4_1_I2,
    Thm4_1_II1,
    Thm4_1_II2,
    Cor4_3_I,
    Cor4_3_II,
    Thm4_4_I,
    Thm4_4_II,
    Cor4_5,
    Thm5_1_I1,
    Thm5_1_I2,
    Thm5_1_II1,
    Thm5_1_II2,
    Thm5_2_I1,
    Thm5_2_I2,
    Thm5_2_II1,
    Thm5_2_II2,
    Cor5_3,
    Thm3_2_I,
    Thm3_2_II,
}

impl CriterionId {
    /// Every rule, in declaration order.
    pub const ALL: [CriterionId; 20] = [
        CriterionId::Thm4_1_I1,
        CriterionId::Thm4_1_I2,
        CriterionId::Thm4_1_II1,
        CriterionId::Thm4_1_II2,
        CriterionId::Cor4_3_I,
        CriterionId::Cor4_3_II,
        CriterionId::Thm4_4_I,
        CriterionId::Thm4_4_II,
        CriterionId::Cor4_5,
        CriterionId::Thm5_1_I1,
        CriterionId::Thm5_1_I2,
        CriterionId::Thm5_1_II1,
        CriterionId::Thm5_1_II2,
        CriterionId::Thm5_2_I1,
        CriterionId::Thm5_2_I2,
        CriterionId::Thm5_2_II1,
        CriterionId::Thm5_2_II2,
        CriterionId::Cor5_3,
        CriterionId::Thm3_2_I,
        CriterionId::Thm3_2_II,
    ];

    /// The rule's stable name, identical to the identifier.
    pub fn name(self) -> &'static str {
        match self {
            CriterionId::Thm4_1_I1 => "Thm4_1_I1",
            CriterionId::Thm4_1_I2 => "Thm4_1_I2",
            CriterionId::Thm4_1_II1 => "Thm4_1_II1",
            CriterionId::Thm4_1_II2 => "Thm4_1_II2",
            CriterionId::Cor4_3_I => "Cor4_3_I",
            CriterionId::Cor4_3_II => "Cor4_3_II",
            CriterionId::Thm4_4_I => "Thm4_4_I",
            CriterionId::Thm4_4_II => "Thm4_4_II",
            CriterionId::Cor4_5 => "Cor4_5",
            CriterionId::Thm5_1_I1 => "Thm5_1_I1",
            CriterionId::Thm5_1_I2 => "Thm5_1_I2",
            CriterionId::Thm5_1_II1 => "Thm5_1_II1",
            CriterionId::Thm5_1_II2 => "Thm5_1_II2",
            CriterionId::Thm5_2_I1 => "Thm5_2_I1",
            CriterionId::Thm5_2_I2 => "Thm5_2_I2",
            CriterionId::Thm5_2_II1 => "Thm5_2_II1",
            CriterionId::Thm5_2_II2 => "Thm5_2_II2",
            CriterionId::Cor5_3 => "Cor5_3",
            CriterionId::Thm3_2_I => "Thm3_2_I",
            CriterionId::Thm3_2_II => "Thm3_2_II",
        }
    }

    /// Parse a rule name produced by [`CriterionId::name`].
    pub fn from_name(name: &str) -> Option<CriterionId> {
        CriterionId::ALL.iter().copied().find(|id| id.name() == name)
    }

    /// `true` for the two rules that claim only "prediction implies truth";
    /// every other rule is a biconditional.
    pub fn is_implication_only(self) -> bool {
        matches!(self, CriterionId::Cor4_3_II | CriterionId::Cor5_3)
    }

    /// `true` when the rule also has a published statement form inequivalent
    /// to the supported form; see [`statement_reading_prediction`].
    pub fn has_statement_reading(self) -> bool {
        matches!(
            self,
            CriterionId::Thm4_1_II2 | CriterionId::Thm5_2_I1 | CriterionId::Thm5_2_I2
        )
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of one rule on one `n`.
///
/// `graph_prediction` is `Some` exactly when the rule is applicable;
/// `descent_truth` is always filled (it is a statement about the Selmer
/// groups, meaningful whether or not the rule's hypotheses hold). `agree` is
/// the per-rule soundness bit and is vacuously `true` when inapplicable.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CriterionVerdict {
    pub id: CriterionId,
    pub applicable: bool,
    pub graph_prediction: Option<bool>,
    pub descent_truth: bool,
    pub agree: bool,
}

/// Certification status of one claim about `n`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CertStatus {
    Certified,
    Unknown,
}

impl CertStatus {
    pub fn is_certified(self) -> bool {
        matches!(self, CertStatus::Certified)
    }
}

impl fmt::Display for CertStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertStatus::Certified => "certified",
            CertStatus::Unknown => "unknown",
        })
    }
}

/// Full classification of one `n`: both descent computations, the derived
/// certificates, an optional rational point witnessing positive rank bound,
/// and every applicable rule's verdict.
#[derive(Clone, Debug)]
pub struct ClassificationRecord {
    pub n: u64,
    pub factorization: Vec<u64>,
    pub n_mod_24: u64,
    pub pi3: SelmerReport,
    pub two_pi3: SelmerReport,
    pub non_pi3_cn: CertStatus,
    pub non_2pi3_cn: CertStatus,
    pub non_tn: CertStatus,
    pub tn_witness: Option<WitnessPoint>,
    pub fired: Vec<CriterionId>,
    pub criteria: Vec<CriterionVerdict>,
}

/// Everything about one `n` the rules consume, computed once: the
/// factorization and the full descent for both curves.
#[derive(Clone, Debug)]
pub struct Profile {
    n: u64,
    factors: Vec<u64>,
    pi3: SelmerReport,
    two_pi3: SelmerReport,
}

impl Profile {
    pub fn new(n: u64) -> Result<Profile, CriteriaError> {
        if n < 5 || n % 2 == 0 {
            return Err(CriteriaError::EvenOrNonSquareFree(n));
        }
        let factors =
            factor_square_free(n).map_err(|_| CriteriaError::EvenOrNonSquareFree(n))?;
        let pi3 = selmer(&Curve::new(n, Theta::PiThird).expect("odd square-free n >= 5"));
        let two_pi3 = selmer(&Curve::new(n, Theta::TwoPiThird).expect("odd square-free n >= 5"));
        Ok(Profile { n, factors, pi3, two_pi3 })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Prime divisors of `n`, ascending.
    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn report(&self, theta: Theta) -> &SelmerReport {
        match theta {
            Theta::PiThird => &self.pi3,
            Theta::TwoPiThird => &self.two_pi3,
        }
    }
}

// ---------------------------------------------------------------------------
// Rule ingredients
// ---------------------------------------------------------------------------

/// Prime divisors other than 3 split by residue mod 3: `(ps, qs)` with
/// `ps` the divisors ≡ 1 and `qs` the divisors ≡ 2, each ascending.
fn split_mod3(factors: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut ps = Vec::new();
    let mut qs = Vec::new();
    for &p in factors {
        match p % 3 {
            1 => ps.push(p),
            2 => qs.push(p),
            _ => {}
        }
    }
    (ps, qs)
}

fn rep_mod(d: &SquareClass, modulus: i128) -> i128 {
    d.representative().rem_euclid(modulus)
}

/// Local condition at the place 3 for the dual map when its congruence
/// trigger is active: classes divisible by 3 pass iff `rep/3 ≡ 2 (mod 3)`,
/// all other classes iff `rep ≡ 1 (mod 3)`.
fn place3_dual_pass(d: &SquareClass) -> bool {
    let r = d.representative();
    if d.contains(3) {
        (r / 3).rem_euclid(3) == 2
    } else {
        r.rem_euclid(3) == 1
    }
}

/// No vertex `−1` on this side; every label is a prime.
fn side_all_primes(side: &[VertexLabel]) -> bool {
    side.iter().all(|l| matches!(l, VertexLabel::Prime(_)))
}

/// Every label is a prime ≡ 1 (mod 3).
fn side_within_ps(side: &[VertexLabel]) -> bool {
    side.iter().all(|l| matches!(l, VertexLabel::Prime(p) if p % 3 == 1))
}

/// Every label is the prime 3 or a prime ≡ 1 (mod 3).
fn side_within_3_and_ps(side: &[VertexLabel]) -> bool {
    side.iter()
        .all(|l| matches!(l, VertexLabel::Prime(p) if *p == 3 || p % 3 == 1))
}

/// The one partition several rules exempt: `{−1, 3}` against the rest.
fn minus_one_three_exception() -> Vec<BTreeSet<VertexLabel>> {
    vec![BTreeSet::from([VertexLabel::MinusOne, VertexLabel::Prime(3)])]
}

/// The unified residue graph of a square-free integer `m` (negative allowed).
/// Callers guarantee `m` is square-free with at least one odd prime factor,
/// so neither construction step can fail.
fn unified(m: i128) -> ResidueGraph {
    build_unified(&class_of(m).expect("m is nonzero and square-free by construction"))
        .expect("m has at least one prime factor")
}

/// Constrained-oddness check specialised to the graphs produced here, whose
/// vertex count stays far below the solver's cap.
fn cco<F>(graph: &ResidueGraph, filter: F, exceptions: &[BTreeSet<VertexLabel>]) -> bool
where
    F: Fn(&SquareClass, &[VertexLabel], &[VertexLabel]) -> bool,
{
    check_constrained_oddness(graph, filter, exceptions)
        .expect("supported inputs keep residue graphs under the vertex cap")
}

fn legendre_against(d: &SquareClass, q: u64) -> i32 {
    legendre_of_class(d, q).expect("partition side avoids q by its filter")
}

fn sprime_is_seeds(profile: &Profile, theta: Theta) -> bool {
    let report = profile.report(theta);
    report.s_prime == torsion_seed(&report.curve)
}

fn s_is_trivial(profile: &Profile, theta: Theta) -> bool {
    profile.report(theta).rk2_s == 0
}

// ---------------------------------------------------------------------------
// Rule evaluation
// ---------------------------------------------------------------------------

/// Evaluate one rule on one `n`.
pub fn eval_criterion(id: CriterionId, n: u64) -> Result<CriterionVerdict, CriteriaError> {
    Ok(eval_with_profile(id, &Profile::new(n)?))
}

/// Evaluate one rule against a precomputed [`Profile`]; use this when
/// evaluating several rules on the same `n`.
pub fn eval_with_profile(id: CriterionId, profile: &Profile) -> CriterionVerdict {
    let n = profile.n;
    let ni = n as i128;
    let mod24 = n % 24;
    let (ps, qs) = split_mod3(&profile.factors);
    let coprime6 = n % 3 != 0;
    let div3 = n % 3 == 0;

    let verdict = |applicable: bool, prediction: bool, truth: bool, agree: bool| CriterionVerdict {
        id,
        applicable,
        graph_prediction: if applicable { Some(prediction) } else { None },
        descent_truth: truth,
        agree: !applicable || agree,
    };
    let bicond = |applicable: bool, prediction: bool, truth: bool| {
        verdict(applicable, prediction, truth, prediction == truth)
    };
    let implic = |applicable: bool, prediction: bool, truth: bool| {
        verdict(applicable, prediction, truth, !prediction || truth)
    };

    match id {
        CriterionId::Thm4_1_I1 => {
            let applicable = coprime6 && matches!(mod24, 1 | 7 | 19);
            let prediction = applicable
                && qs.is_empty()
                && cco(&unified(-3 * ni), |_, _, _| true, &minus_one_three_exception());
            bicond(applicable, prediction, sprime_is_seeds(profile, Theta::PiThird))
        }
        CriterionId::Thm4_1_I2 => {
            let applicable = coprime6 && matches!(mod24, 1 | 7 | 19) && qs.is_empty();
            let prediction = applicable
                && cco(
                    &unified(-ni),
                    |d, side1, _| side_all_primes(side1) && rep_mod(d, 4) == 1,
                    &[],
                );
            bicond(applicable, prediction, s_is_trivial(profile, Theta::PiThird))
        }
        CriterionId::Thm4_1_II1 => {
            let applicable = coprime6 && mod24 == 5;
            let prediction = applicable
                && qs.len() == 1
                && cco(
                    &unified(-3 * ni),
                    |d, _, _| rep_mod(d, 4) == 1,
                    &minus_one_three_exception(),
                );
            bicond(applicable, prediction, sprime_is_seeds(profile, Theta::PiThird))
        }
        CriterionId::Thm4_1_II2 => {
            let applicable = coprime6 && mod24 == 5 && qs.len() == 1;
            let prediction = applicable && {
                let q = qs[0];
                cco(
                    &unified(-ni),
                    |d, side1, _| side_within_ps(side1) && legendre_against(d, q) == 1,
                    &[],
                )
            };
            bicond(applicable, prediction, s_is_trivial(profile, Theta::PiThird))
        }
        CriterionId::Cor4_3_I => {
            let applicable = coprime6 && matches!(mod24, 7 | 19) && qs.is_empty();
            let prediction = applicable && is_odd_graph(&unified(ni));
            bicond(applicable, prediction, profile.pi3.s_rank == 0)
        }
        CriterionId::Cor4_3_II => {
            let applicable = coprime6
                && mod24 == 5
                && qs.len() == 1
                && ps.iter().all(|p| p % 12 == 1)
                && qs[0] % 12 == 5;
            let prediction = applicable && is_odd_graph(&unified(ni));
            implic(applicable, prediction, profile.pi3.s_rank == 0)
        }
        CriterionId::Thm4_4_I => {
            let applicable = coprime6 && matches!(mod24, 1 | 7 | 13);
            let prediction = applicable && qs.is_empty() && is_odd_graph(&unified(-ni));
            bicond(applicable, prediction, sprime_is_seeds(profile, Theta::TwoPiThird))
        }
        CriterionId::Thm4_4_II => {
            let applicable = coprime6 && matches!(mod24, 1 | 7 | 13) && qs.is_empty();
            let prediction = applicable && mod24 == 7 && is_odd_graph(&unified(ni));
            bicond(applicable, prediction, s_is_trivial(profile, Theta::TwoPiThird))
        }
        CriterionId::Cor4_5 => {
            let applicable = coprime6 && mod24 == 7 && qs.is_empty();
            let prediction = applicable && is_odd_graph(&unified(ni));
            let pi3_zero = profile.pi3.s_rank == 0;
            let two_pi3_zero = profile.two_pi3.s_rank == 0;
            verdict(
                applicable,
                prediction,
                pi3_zero && two_pi3_zero,
                prediction == pi3_zero && prediction == two_pi3_zero,
            )
        }
        CriterionId::Thm5_1_I1 => {
            let applicable = div3 && matches!(mod24, 3 | 9 | 15) && (n / 3) % 3 == 1;
            let prediction = applicable && qs.is_empty() && is_odd_graph(&unified(ni));
            bicond(applicable, prediction, sprime_is_seeds(profile, Theta::PiThird))
        }
        CriterionId::Thm5_1_I2 => {
            let applicable = div3 && matches!(mod24, 3 | 9 | 15) && (n / 3) % 3 == 2;
            let prediction = applicable
                && qs.len() == 1
                && cco(&unified(ni), |_, side1, _| side_within_ps(side1), &[]);
            bicond(applicable, prediction, sprime_is_seeds(profile, Theta::PiThird))
        }
        CriterionId::Thm5_1_II1 => {
            let applicable = div3 && matches!(mod24, 3 | 9 | 15) && qs.is_empty();
            let prediction = applicable && mod24 == 9 && is_odd_graph(&unified(ni / 3));
            bicond(applicable, prediction, s_is_trivial(profile, Theta::PiThird))
        }
        CriterionId::Thm5_1_II2 => {
            let applicable = div3 && matches!(mod24, 3 | 9 | 15) && qs.len() == 1;
            let prediction = applicable && {
                let q = qs[0];
                cco(
                    &unified(-ni),
                    |d, side1, _| {
                        side_within_3_and_ps(side1)
                            && rep_mod(d, 4) == 1
                            && legendre_against(d, q) == 1
                    },
                    &[],
                )
            };
            bicond(applicable, prediction, s_is_trivial(profile, Theta::PiThird))
        }
        CriterionId::Thm5_2_I1 => {
            let applicable = div3 && mod24 == 3 && (n / 3) % 3 == 1;
            let prediction = applicable
                && matches!(qs.len(), 0 | 2)
                && cco(
                    &unified(-ni),
                    |d, _, _| rep_mod(d, 4) == 1 && place3_dual_pass(d),
                    &minus_one_three_exception(),
                );
            bicond(applicable, prediction, sprime_is_seeds(profile, Theta::TwoPiThird))
        }
        CriterionId::Thm5_2_I2 => {
            let applicable = div3 && mod24 == 3 && (n / 3) % 3 == 2;
            let prediction = applicable
                && qs.len() == 1
                && cco(
                    &unified(-ni),
                    |d, _, _| rep_mod(d, 4) == 1,
                    &minus_one_three_exception(),
                );
            bicond(applicable, prediction, sprime_is_seeds(profile, Theta::TwoPiThird))
        }
        CriterionId::Thm5_2_II1 => {
            let applicable =
                div3 && mod24 == 3 && (n / 3) % 3 == 1 && matches!(qs.len(), 0 | 2);
            let prediction = applicable && qs.len() == 2 && {
                let (q1, q2) = (qs[0], qs[1]);
                cco(
                    &unified(ni),
                    |d, side1, _| {
                        side_within_3_and_ps(side1)
                            && legendre_against(d, q1) == 1
                            && legendre_against(d, q2) == 1
                    },
                    &[],
                )
            };
            bicond(applicable, prediction, s_is_trivial(profile, Theta::TwoPiThird))
        }
        CriterionId::Thm5_2_II2 => {
            let applicable = div3 && mod24 == 3 && (n / 3) % 3 == 2 && qs.len() == 1;
            let prediction = applicable && {
                let q = qs[0];
                cco(
                    &unified(ni),
                    |d, side1, _| side_within_ps(side1) && legendre_against(d, q) == 1,
                    &[],
                )
            };
            bicond(applicable, prediction, s_is_trivial(profile, Theta::TwoPiThird))
        }
        CriterionId::Cor5_3 => {
            let applicable = div3
                && mod24 == 3
                && qs.len() == 1
                && ps.iter().all(|p| p % 12 == 1)
                && qs[0] % 12 == 5;
            let prediction = applicable && is_odd_graph(&unified(ni / 3));
            implic(
                applicable,
                prediction,
                profile.pi3.s_rank == 0 && profile.two_pi3.s_rank == 0,
            )
        }
        CriterionId::Thm3_2_I => {
            let applicable = coprime6 && matches!(mod24, 1 | 7 | 19);
            let prediction = applicable && qs.is_empty() && {
                let graph =
                    build_all_sources(n).expect("n is odd, square-free, coprime to 3, >= 5");
                cco(&graph, |_, _, _| true, &minus_one_three_exception())
            };
            bicond(applicable, prediction, sprime_is_seeds(profile, Theta::PiThird))
        }
        CriterionId::Thm3_2_II => {
            let applicable = coprime6 && matches!(mod24, 1 | 7 | 19) && qs.is_empty();
            let prediction = applicable && {
                let graph =
                    build_mutual_residue(n).expect("n is odd, square-free, coprime to 3, >= 5");
                is_odd_graph(&graph)
            };
            bicond(applicable, prediction, s_is_trivial(profile, Theta::PiThird))
        }
    }
}

/// Prediction of the published *statement form* for the three rules whose
/// statement and supporting argument differ; `None` when `id` has a single
/// reading or its hypotheses fail on `n`. The catalogue's own verdicts use
/// the supported form; this exists so sweeps can compare both.
pub fn statement_reading_prediction(
    id: CriterionId,
    n: u64,
) -> Result<Option<bool>, CriteriaError> {
    let profile = Profile::new(n)?;
    Ok(statement_reading_with_profile(id, &profile))
}

/// Profile-reusing form of [`statement_reading_prediction`].
pub fn statement_reading_with_profile(id: CriterionId, profile: &Profile) -> Option<bool> {
    if !id.has_statement_reading() || !eval_with_profile(id, profile).applicable {
        return None;
    }
    let ni = profile.n as i128;
    let (_, qs) = split_mod3(&profile.factors);
    match id {
        // Statement form: every partition separating a nonempty set of prime
        // vertices from the rest must be odd — no Legendre-symbol filter and
        // the lone divisor ≡ 2 (mod 3) is allowed on the prime side.
        CriterionId::Thm4_1_II2 => Some(cco(
            &unified(-ni),
            |_, side1, _| side_all_primes(side1),
            &[],
        )),
        // Statement form: with no divisor ≡ 2 (mod 3) the filter keeps only
        // the residue-1 class mod 4; with two such divisors it keeps the
        // residue-1 class mod 4 and mod 12 (both conjuncts verbatim).
        CriterionId::Thm5_2_I1 => Some(
            matches!(qs.len(), 0 | 2)
                && if qs.is_empty() {
                    cco(
                        &unified(-ni),
                        |d, _, _| rep_mod(d, 4) == 1,
                        &minus_one_three_exception(),
                    )
                } else {
                    cco(
                        &unified(-ni),
                        |d, _, _| rep_mod(d, 4) == 1 && rep_mod(d, 12) == 1,
                        &minus_one_three_exception(),
                    )
                },
        ),
        // Statement form: no congruence filter at all.
        CriterionId::Thm5_2_I2 => Some(
            qs.len() == 1 && cco(&unified(-ni), |_, _, _| true, &minus_one_three_exception()),
        ),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

fn cert(zero_rank: bool) -> CertStatus {
    if zero_rank {
        CertStatus::Certified
    } else {
        CertStatus::Unknown
    }
}

/// Search both curves (π/3 first) for a rational point when the descent
/// leaves their rank bound positive; a found point explains the failure to
/// certify. Never runs against a curve whose Selmer rank bound is zero.
fn auto_witness(profile: &Profile) -> Option<WitnessPoint> {
    if profile.n > WITNESS_AUTO_MAX_N {
        return None;
    }
    [Theta::PiThird, Theta::TwoPiThird].iter().find_map(|&theta| {
        let report = profile.report(theta);
        if report.s_rank == 0 {
            return None;
        }
        search_point(&report.curve, WITNESS_AUTO_HEIGHT)
    })
}

/// Classify one `n`: run the descent on both curves, derive the three
/// certificates, evaluate every applicable rule, and, when a rank bound is
/// positive, search for a small rational point explaining it.
pub fn classify(n: u64) -> Result<ClassificationRecord, CriteriaError> {
    let profile = Profile::new(n).map_err(|_| CriteriaError::OutOfScope(n))?;
    Ok(classify_with_profile(&profile))
}

/// Profile-reusing form of [`classify`].
pub fn classify_with_profile(profile: &Profile) -> ClassificationRecord {
    let criteria: Vec<CriterionVerdict> = CriterionId::ALL
        .iter()
        .map(|&id| eval_with_profile(id, profile))
        .filter(|v| v.applicable)
        .collect();
    let fired: Vec<CriterionId> = criteria
        .iter()
        .filter(|v| v.graph_prediction == Some(true))
        .map(|v| v.id)
        .collect();
    let non_pi3_cn = cert(profile.pi3.s_rank == 0);
    let non_2pi3_cn = cert(profile.two_pi3.s_rank == 0);
    let non_tn = cert(profile.pi3.s_rank == 0 && profile.two_pi3.s_rank == 0);
    let tn_witness = auto_witness(profile);
    ClassificationRecord {
        n: profile.n,
        factorization: profile.factors.clone(),
        n_mod_24: profile.n % 24,
        pi3: profile.pi3.clone(),
        two_pi3: profile.two_pi3.clone(),
        non_pi3_cn,
        non_2pi3_cn,
        non_tn,
        tn_witness,
        fired,
        criteria,
    }
}

// ---------------------------------------------------------------------------
// Range verification
// ---------------------------------------------------------------------------

/// One rule failing against the descent on one `n`. For biconditional rules
/// any mismatch is a disagreement; for implication-only rules, only a firing
/// prediction with a failing truth.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Disagreement {
    pub n: u64,
    pub id: CriterionId,
    pub graph_prediction: bool,
    pub descent_truth: bool,
}

/// Per-rule sweep totals.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CriterionTally {
    pub id: CriterionId,
    pub applicable: u64,
    pub fired: u64,
    pub agreements: u64,
    pub disagreements: u64,
}

/// Sweep totals comparing the supported reading of a two-reading rule with
/// its published statement form.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ReadingTally {
    pub id: CriterionId,
    pub production_agreements: u64,
    pub production_disagreements: u64,
    pub statement_agreements: u64,
    pub statement_disagreements: u64,
}

/// Everything a verification sweep learns over `[lo, hi]`.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub lo: u64,
    pub hi: u64,
    /// Number of in-scope `n` (odd, square-free, ≥ 5) examined.
    pub checked: u64,
    pub tallies: Vec<CriterionTally>,
    pub disagreements: Vec<Disagreement>,
    pub readings: Vec<ReadingTally>,
}

/// In-scope profiles over `[max(lo, 5), hi]`, ascending.
fn profiles_in_range(lo: u64, hi: u64) -> impl Iterator<Item = Profile> {
    (lo.max(5)..=hi).filter(|n| n % 2 == 1).filter_map(|n| Profile::new(n).ok())
}

/// Check every rule against the descent on every in-scope `n` in `[lo, hi]`
/// and return the disagreements, ascending by `n` then rule order.
pub fn verify_range(lo: u64, hi: u64) -> Vec<Disagreement> {
    verify_report(lo, hi).disagreements
}

/// The full sweep: disagreements plus per-rule and per-reading totals.
pub fn verify_report(lo: u64, hi: u64) -> VerifyReport {
    let mut tallies: Vec<CriterionTally> = CriterionId::ALL
        .iter()
        .map(|&id| CriterionTally { id, applicable: 0, fired: 0, agreements: 0, disagreements: 0 })
        .collect();
    let mut readings: Vec<ReadingTally> = CriterionId::ALL
        .iter()
        .filter(|id| id.has_statement_reading())
        .map(|&id| ReadingTally {
            id,
            production_agreements: 0,
            production_disagreements: 0,
            statement_agreements: 0,
            statement_disagreements: 0,
        })
        .collect();
    let mut disagreements = Vec::new();
    let mut checked = 0;
    for profile in profiles_in_range(lo, hi) {
        checked += 1;
        for (slot, &id) in tallies.iter_mut().zip(CriterionId::ALL.iter()) {
            let v = eval_with_profile(id, &profile);
            if !v.applicable {
                continue;
            }
            slot.applicable += 1;
            if v.graph_prediction == Some(true) {
                slot.fired += 1;
            }
            if v.agree {
                slot.agreements += 1;
            } else {
                slot.disagreements += 1;
                disagreements.push(Disagreement {
                    n: profile.n(),
                    id,
                    graph_prediction: v.graph_prediction.unwrap_or(false),
                    descent_truth: v.descent_truth,
                });
            }
            if let Some(reading) = readings.iter_mut().find(|r| r.id == id) {
                if v.agree {
                    reading.production_agreements += 1;
                } else {
                    reading.production_disagreements += 1;
                }
                if let Some(statement) = statement_reading_with_profile(id, &profile) {
                    if statement == v.descent_truth {
                        reading.statement_agreements += 1;
                    } else {
                        reading.statement_disagreements += 1;
                    }
                }
            }
        }
    }
    VerifyReport { lo, hi, checked, tallies, disagreements, readings }
}

// ---------------------------------------------------------------------------
// Conjecture scan
// ---------------------------------------------------------------------------

/// Residues mod 24 at which a certified non-congruent number for θ = π/3 is
/// expected; a certificate outside this set is an anomaly worth reporting.
pub const PI3_EXPECTED_RESIDUES: [u64; 7] = [1, 3, 5, 7, 9, 15, 19];

/// Same for θ = 2π/3.
pub const TWO_PI3_EXPECTED_RESIDUES: [u64; 5] = [1, 3, 7, 11, 13];

/// Tally of certificates over a range, with the `n` whose residue mod 24
/// falls outside the expected sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureReport {
    pub lo: u64,
    pub hi: u64,
    pub checked: u64,
    pub non_pi3_certified: Vec<u64>,
    pub non_2pi3_certified: Vec<u64>,
    pub non_tn_certified: Vec<u64>,
    pub pi3_anomalies: Vec<u64>,
    pub two_pi3_anomalies: Vec<u64>,
}

/// Scan `[lo, hi]` and report which `n` are certified, plus any whose
/// residue mod 24 contradicts the expected pattern.
pub fn conjecture_report(lo: u64, hi: u64) -> ConjectureReport {
    let mut report = ConjectureReport {
        lo,
        hi,
        checked: 0,
        non_pi3_certified: Vec::new(),
        non_2pi3_certified: Vec::new(),
        non_tn_certified: Vec::new(),
        pi3_anomalies: Vec::new(),
        two_pi3_anomalies: Vec::new(),
    };
    for profile in profiles_in_range(lo, hi) {
        report.checked += 1;
        let n = profile.n();
        let mod24 = n % 24;
        let pi3_zero = profile.report(Theta::PiThird).s_rank == 0;
        let two_pi3_zero = profile.report(Theta::TwoPiThird).s_rank == 0;
        if pi3_zero {
            report.non_pi3_certified.push(n);
            if !PI3_EXPECTED_RESIDUES.contains(&mod24) {
                report.pi3_anomalies.push(n);
            }
        }
        if two_pi3_zero {
            report.non_2pi3_certified.push(n);
            if !TWO_PI3_EXPECTED_RESIDUES.contains(&mod24) {
                report.two_pi3_anomalies.push(n);
            }
        }
        if pi3_zero && two_pi3_zero {
            report.non_tn_certified.push(n);
        }
    }
    report
}

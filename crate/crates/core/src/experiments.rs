//! Verification campaigns over enumerated diagrams, with structured reports.
//!
//! A [`Report`] separates a canonical section, which is a pure function of
//! the campaign and its parameters, from `meta` (timing, thread count,
//! version). Only the canonical section is hashed.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::canon::canonical_code;
use crate::classify::{classify_irreducible, crystallographic_table, TypeClass};
use crate::enumerate::{
    enumerate_levels, enumerate_minimal_infinite, enumerate_quasi_minimal, minimal_infinite_masks,
    ClassRecord, EnumFilter, LabelSet, MAX_MINIMAL_INFINITE_RANK,
};
use crate::error::{CoreError, Result};
use crate::gram::signature;
use crate::hyperbolic::{
    affine_from_commuting, is_hyperbolic, lemma_dynkin_check, ConstructionCase,
};
use crate::system::{CoxeterLabel, CoxeterSystem, VertexSubset};

/// Counterexamples embedded per failing claim; the total is always counted.
const MAX_EMBEDDED_COUNTEREXAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

/// A diagram on which two computations disagree.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub system: CoxeterSystem,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    pub id: String,
    pub statement: String,
    pub verdict: Verdict,
    /// Number of instances examined.
    pub checked: usize,
    pub failures: usize,
    pub counterexamples: Vec<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Claim {
    fn new(id: &str, statement: &str) -> Self {
        Self {
            id: id.into(),
            statement: statement.into(),
            verdict: Verdict::Pass,
            checked: 0,
            failures: 0,
            counterexamples: Vec::new(),
            note: None,
        }
    }

    fn not_applicable(id: &str, statement: &str, note: &str) -> Self {
        Self {
            verdict: Verdict::NotApplicable,
            note: Some(note.into()),
            ..Self::new(id, statement)
        }
    }

    fn check(&mut self, ok: bool, counterexample: impl FnOnce() -> Counterexample) {
        self.checked += 1;
        if !ok {
            self.fail(counterexample());
        }
    }

    fn fail(&mut self, counterexample: Counterexample) {
        self.verdict = Verdict::Fail;
        self.failures += 1;
        if self.counterexamples.len() < MAX_EMBEDDED_COUNTEREXAMPLES {
            self.counterexamples.push(counterexample);
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Parameters {
    pub max_rank: usize,
    pub labels: LabelSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool_version: String,
    pub jobs: usize,
    pub duration_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub campaign: String,
    pub parameters: Parameters,
    /// Category, then rank, then number of classes.
    pub counts: BTreeMap<String, BTreeMap<usize, usize>>,
    pub claims: Vec<Claim>,
    pub findings: Value,
    pub input_hash: String,
    pub content_hash: String,
    pub meta: Meta,
}

#[derive(Serialize)]
struct CanonicalSection<'a> {
    campaign: &'a str,
    parameters: &'a Parameters,
    counts: &'a BTreeMap<String, BTreeMap<usize, usize>>,
    claims: &'a [Claim],
    findings: &'a Value,
    input_hash: &'a str,
}

fn sha256_hex(value: &impl Serialize) -> String {
    let bytes = serde_json::to_vec(value).expect("report values serialize");
    hex::encode(Sha256::digest(&bytes))
}

impl Report {
    fn assemble(
        campaign: &str,
        parameters: Parameters,
        counts: BTreeMap<String, BTreeMap<usize, usize>>,
        claims: Vec<Claim>,
        findings: Value,
        started: Instant,
    ) -> Self {
        let input_hash = sha256_hex(&json!({ "campaign": campaign, "parameters": &parameters }));
        let mut report = Self {
            campaign: campaign.into(),
            parameters,
            counts,
            claims,
            findings,
            input_hash,
            content_hash: String::new(),
            meta: Meta {
                tool_version: env!("CARGO_PKG_VERSION").into(),
                jobs: rayon::current_num_threads(),
                duration_ms: started.elapsed().as_millis(),
            },
        };
        report.content_hash = sha256_hex(&report.canonical_section());
        report
    }

    fn canonical_section(&self) -> CanonicalSection<'_> {
        CanonicalSection {
            campaign: &self.campaign,
            parameters: &self.parameters,
            counts: &self.counts,
            claims: &self.claims,
            findings: &self.findings,
            input_hash: &self.input_hash,
        }
    }

    /// The hashed part of the report as JSON.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(&self.canonical_section()).expect("report values serialize")
    }

    /// No claim failed.
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }
}

fn per_rank<T>(levels: &[Vec<T>], keep: impl Fn(&T) -> bool) -> BTreeMap<usize, usize> {
    levels
        .iter()
        .enumerate()
        .map(|(r, level)| (r, level.iter().filter(|x| keep(x)).count()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaMode {
    SimplyLaced,
    ThreeSphericalCrystallographic,
}

impl LemmaMode {
    pub fn max_rank(self) -> usize {
        match self {
            Self::SimplyLaced => 7,
            Self::ThreeSphericalCrystallographic => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::SimplyLaced => "simply-laced",
            Self::ThreeSphericalCrystallographic => "three-spherical-crystallographic",
        }
    }

    fn filter(self) -> EnumFilter {
        match self {
            Self::SimplyLaced => EnumFilter::new(LabelSet::simply_laced()).connected(),
            Self::ThreeSphericalCrystallographic => EnumFilter::new(LabelSet::crystallographic())
                .connected()
                .k_spherical(3),
        }
    }
}

/// Per-diagram results of the lemma campaign.
struct LemmaOutcome {
    hypotheses_ok: bool,
    consistent: bool,
    hyperbolic: bool,
    affine: Option<VertexSubset>,
    witness_ok: bool,
    constructions: Vec<std::result::Result<(ConstructionCase, bool), String>>,
}

fn lemma_outcome(system: &CoxeterSystem) -> LemmaOutcome {
    let check = lemma_dynkin_check(system);
    let verdict = is_hyperbolic(system);
    let witness_ok = verdict.witness().is_none_or(|w| w.validate(system));
    let minimal = minimal_infinite_masks(system);
    let mut constructions = Vec::new();
    for (k, &a) in minimal.iter().enumerate() {
        for &b in &minimal[k + 1..] {
            let commuting =
                a & b == 0 && crate::system::bits(a).all(|s| system.neighbors(s) & b == 0);
            if !commuting {
                continue;
            }
            let (i, j) = (
                VertexSubset::from_mask(system.rank(), a),
                VertexSubset::from_mask(system.rank(), b),
            );
            constructions.push(match affine_from_commuting(system, &i, &j) {
                Ok(c) => {
                    let sound =
                        classify_irreducible(&system.restrict(&c.subset).expect("same rank"))
                            .is_ok_and(|t| t.is_affine())
                            && c.subset.len() >= 3;
                    if sound {
                        Ok((c.case, c.fallback_used))
                    } else {
                        Err(format!("{} is not affine", c.subset))
                    }
                }
                Err(e) => Err(e.to_string()),
            });
        }
    }
    LemmaOutcome {
        hypotheses_ok: check.hypotheses_ok,
        consistent: check.lemma_consistent,
        hyperbolic: check.hyperbolic,
        affine: check.affine_parabolic,
        witness_ok,
        constructions,
    }
}

/// Checks, on every connected diagram of the class up to `max_rank`, that
/// Moussong's criterion agrees with the absence of affine parabolics.
pub fn verify_lemma_dynkin(mode: LemmaMode, max_rank: usize) -> Result<Report> {
    let started = Instant::now();
    if max_rank > mode.max_rank() {
        return Err(CoreError::Unsupported {
            op: "verify_lemma_dynkin",
            rank: max_rank,
            max: mode.max_rank(),
        });
    }
    let filter = mode.filter();
    let levels = enumerate_levels(max_rank, &filter)?;
    let outcomes: Vec<Vec<LemmaOutcome>> = levels
        .iter()
        .map(|level| level.par_iter().map(lemma_outcome).collect())
        .collect();

    let mut lemma = Claim::new(
        "lemma_dynkin",
        "W is Gromov hyperbolic if and only if it has no parabolic subgroup of affine type",
    );
    let mut hypotheses = Claim::new(
        "hypotheses_hold",
        "every enumerated diagram satisfies the lemma's hypotheses",
    );
    let mut soundness = Claim::new(
        "witness_soundness",
        "every non-hyperbolic verdict carries a witness that re-validates",
    );
    let mut construction = Claim::new(
        "affine_from_commuting",
        "every commuting pair of minimal infinite subsets yields an affine subdiagram",
    );
    let mut cases: BTreeMap<String, usize> = BTreeMap::new();
    let mut fallback_systems = Vec::new();
    for (system, outcome) in levels.iter().flatten().zip(outcomes.iter().flatten()) {
        hypotheses.check(outcome.hypotheses_ok, || Counterexample {
            system: system.clone(),
            expected: "hypotheses hold".into(),
            actual: "hypotheses fail".into(),
        });
        lemma.check(outcome.consistent, || Counterexample {
            system: system.clone(),
            expected: format!("hyperbolic = {}", outcome.affine.is_none()),
            actual: format!(
                "hyperbolic = {}, affine parabolic = {}",
                outcome.hyperbolic,
                outcome.affine.map_or("none".into(), |s| s.to_string())
            ),
        });
        soundness.check(outcome.witness_ok, || Counterexample {
            system: system.clone(),
            expected: "witness re-validates".into(),
            actual: format!("{:?}", is_hyperbolic(system)),
        });
        for result in &outcome.constructions {
            construction.check(result.is_ok(), || Counterexample {
                system: system.clone(),
                expected: "affine subdiagram".into(),
                actual: result.clone().err().unwrap_or_default(),
            });
            if let Ok((case, fallback)) = result {
                *cases
                    .entry(serde_json::to_value(case).unwrap().as_str().unwrap().into())
                    .or_default() += 1;
                if *fallback {
                    fallback_systems.push(system.clone());
                }
            }
        }
    }
    if !fallback_systems.is_empty() {
        construction = construction.with_note(format!(
            "exhaustive fallback used on {} instances",
            fallback_systems.len()
        ));
    }

    let mut counts = BTreeMap::new();
    counts.insert("diagrams".into(), per_rank(&levels, |_| true));
    counts.insert("hyperbolic".into(), per_rank(&outcomes, |o| o.hyperbolic));
    counts.insert("commuting_pairs".into(), {
        outcomes
            .iter()
            .enumerate()
            .map(|(r, level)| (r, level.iter().map(|o| o.constructions.len()).sum()))
            .collect()
    });
    let findings = json!({
        "construction_cases": cases,
        "fallback_instances": fallback_systems,
    });
    Ok(Report::assemble(
        "lemma-dynkin",
        Parameters {
            max_rank,
            labels: filter.label_set.clone(),
            mode: Some(mode.name().into()),
            scope: None,
        },
        counts,
        vec![lemma, hypotheses, soundness, construction],
        findings,
        started,
    ))
}

/// Which diagrams the engine-agreement campaign visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgreementScope {
    /// Every connected diagram.
    Exhaustive,
    /// Connected diagrams whose proper subdiagrams are all spherical or
    /// affine. Every other connected diagram contains an indefinite proper
    /// subdiagram, so its form has a negative direction by interlacing.
    Frontier,
}

impl AgreementScope {
    pub fn name(self) -> &'static str {
        match self {
            Self::Exhaustive => "exhaustive",
            Self::Frontier => "frontier",
        }
    }
}

/// Largest rank accepted by [`verify_engine_agreement`].
pub const MAX_AGREEMENT_RANK: usize = 8;

fn agreement(system: &CoxeterSystem) -> std::result::Result<(), (String, String)> {
    let pattern = classify_irreducible(system).map_err(|e| ("a class".into(), e.to_string()))?;
    let sig = signature(system).map_err(|e| ("a signature".into(), e.to_string()))?;
    let n = system.rank();
    let agrees = match pattern {
        TypeClass::Spherical(_) => sig.n_plus == n,
        TypeClass::Affine(_) => sig.n_plus == n - 1 && sig.n_zero == 1,
        TypeClass::Indefinite => sig.n_minus >= 1,
    };
    if agrees {
        Ok(())
    } else {
        let expected = match pattern {
            TypeClass::Spherical(_) => format!("signature ({n},0,0)"),
            TypeClass::Affine(_) => format!("signature ({},1,0)", n - 1),
            TypeClass::Indefinite => "a negative eigenvalue".into(),
        };
        Err((
            format!("{pattern} with {expected}"),
            format!("signature {sig}"),
        ))
    }
}

/// Cross-checks the shape recognizer against the exact Gram signature.
pub fn verify_engine_agreement(
    max_rank: usize,
    labels: &LabelSet,
    scope: AgreementScope,
) -> Result<Report> {
    let started = Instant::now();
    if max_rank > MAX_AGREEMENT_RANK {
        return Err(CoreError::Unsupported {
            op: "verify_engine_agreement",
            rank: max_rank,
            max: MAX_AGREEMENT_RANK,
        });
    }
    if !labels.is_crystallographic() {
        return Err(CoreError::Precondition(
            "engine agreement needs a crystallographic label set".into(),
        ));
    }
    let mut filter = EnumFilter::new(labels.clone()).connected();
    if scope == AgreementScope::Frontier {
        filter = filter.proper_spherical_or_affine();
    }
    let levels = enumerate_levels(max_rank, &filter)?;
    let results: Vec<Vec<_>> = levels
        .iter()
        .map(|level| level.par_iter().map(agreement).collect())
        .collect();

    let mut agree = Claim::new(
        "engine_agreement",
        "spherical iff (n,0,0), affine iff (n-1,1,0), indefinite iff a negative eigenvalue",
    );
    for (system, result) in levels.iter().flatten().zip(results.iter().flatten()) {
        agree.check(result.is_ok(), || {
            let (expected, actual) = result.clone().unwrap_err();
            Counterexample {
                system: system.clone(),
                expected,
                actual,
            }
        });
    }
    let mut claims = vec![agree];

    let mut classes: BTreeMap<String, BTreeMap<usize, usize>> = BTreeMap::new();
    for (rank, level) in levels.iter().enumerate() {
        for system in level {
            let kind = classify_irreducible(system).map_or("error", |t| t.kind());
            *classes
                .entry(kind.into())
                .or_default()
                .entry(rank)
                .or_default() += 1;
        }
    }
    for map in classes.values_mut() {
        for rank in 0..=max_rank {
            map.entry(rank).or_default();
        }
    }

    if scope == AgreementScope::Frontier {
        // The interlacing argument covers diagrams outside the frontier only
        // if every spherical or affine diagram lies inside it.
        let found: HashSet<_> = levels
            .iter()
            .flatten()
            .map(|s| canonical_code(s).expect("rank is supported"))
            .collect();
        let mut closed = Claim::new(
            "frontier_contains_tables",
            "every spherical and affine diagram over the labels lies in the frontier",
        );
        for t in crystallographic_table(max_rank) {
            let d = t.diagram().expect("table entries have diagrams");
            let fits = (0..d.rank())
                .flat_map(|i| (0..d.rank()).map(move |j| (i, j)))
                .all(|(i, j)| i == j || labels.contains(d.label(i, j)));
            if fits {
                closed.check(found.contains(&canonical_code(&d)?), || Counterexample {
                    system: d.clone(),
                    expected: "in the frontier".into(),
                    actual: format!("{t} missing"),
                });
            }
        }
        claims.push(closed);
    }

    let mut counts = BTreeMap::new();
    counts.insert("diagrams".into(), per_rank(&levels, |_| true));
    counts.extend(classes);
    Ok(Report::assemble(
        "engine-agreement",
        Parameters {
            max_rank,
            labels: labels.clone(),
            mode: None,
            scope: Some(scope.name().into()),
        },
        counts,
        claims,
        Value::Null,
        started,
    ))
}

fn record_json(r: &ClassRecord) -> Value {
    json!({
        "code": r.code,
        "rank": r.rank,
        "class": r.class,
        "system": r.system,
    })
}

/// Runs the quasi-minimal and minimal-infinite censuses and checks the size
/// bounds and the facts about non-affine minimal infinite diagrams.
pub fn verify_size_bounds(max_rank: usize, labels: &LabelSet) -> Result<Report> {
    let started = Instant::now();
    let base = EnumFilter::new(labels.clone());
    let quasi = enumerate_quasi_minimal(&base.clone().proper_spherical_or_affine(), max_rank)?;
    let mi_rank = max_rank.min(MAX_MINIMAL_INFINITE_RANK);
    let minimal = enumerate_minimal_infinite(&base, mi_rank)?;

    let mut claims = Vec::new();
    let bound_statement = "no quasi-minimal diagram has rank above 10";
    if max_rank > 10 {
        let mut c = Claim::new("quasi_minimal_rank_at_most_10", bound_statement);
        for r in quasi.by_rank.iter().skip(11).flatten() {
            c.fail(Counterexample {
                system: r.system.clone(),
                expected: "rank at most 10".into(),
                actual: format!("quasi-minimal of rank {}", r.rank),
            });
        }
        c.checked = quasi.classes().count();
        claims.push(c);
    } else {
        claims.push(Claim::not_applicable(
            "quasi_minimal_rank_at_most_10",
            bound_statement,
            "needs max rank at least 11",
        ));
    }
    let attained_statement = "some quasi-minimal diagram has rank 10";
    if max_rank >= 10 {
        let mut c = Claim::new("quasi_minimal_rank_10_attained", attained_statement);
        c.checked = quasi.by_rank[10].len();
        if quasi.by_rank[10].is_empty() {
            c.verdict = Verdict::Fail;
            c.note = Some("no class of rank 10 was found".into());
        }
        claims.push(c);
    } else {
        claims.push(Claim::not_applicable(
            "quasi_minimal_rank_10_attained",
            attained_statement,
            "needs max rank at least 10",
        ));
    }

    let non_affine: Vec<&ClassRecord> =
        minimal.classes().filter(|r| !r.class.is_affine()).collect();
    let mut small = Claim::new(
        "minimal_infinite_non_affine_rank_at_most_5",
        "every non-affine minimal infinite diagram has rank at most 5",
    );
    let mut laced = Claim::new(
        "minimal_infinite_non_affine_not_simply_laced",
        "no non-affine minimal infinite diagram is simply laced",
    );
    for r in &non_affine {
        small.check(r.rank <= 5, || Counterexample {
            system: r.system.clone(),
            expected: "rank at most 5".into(),
            actual: format!("rank {}", r.rank),
        });
        laced.check(!r.simply_laced, || Counterexample {
            system: r.system.clone(),
            expected: "not simply laced".into(),
            actual: "simply laced".into(),
        });
    }
    claims.push(small);
    claims.push(laced);

    let three: Vec<&ClassRecord> = non_affine
        .iter()
        .copied()
        .filter(|r| r.crystallographic && r.three_spherical)
        .collect();
    let count_statement =
        "exactly three non-affine minimal infinite diagrams are 3-spherical and crystallographic";
    let full_crystallographic = [2u16, 3, 4, 6]
        .iter()
        .all(|&m| labels.contains(CoxeterLabel::Finite(m)));
    if full_crystallographic && mi_rank >= 5 {
        let mut c = Claim::new("three_spherical_crystallographic_count", count_statement);
        c.checked = non_affine.len();
        if three.len() != 3 {
            c.verdict = Verdict::Fail;
            c.failures = 1;
            c.note = Some(format!("found {}", three.len()));
        }
        claims.push(c);
    } else {
        claims.push(Claim::not_applicable(
            "three_spherical_crystallographic_count",
            count_statement,
            "needs labels 2, 3, 4, 6 and max rank at least 5",
        ));
    }

    let mut counts = BTreeMap::new();
    counts.insert("quasi_minimal".into(), quasi.counts());
    counts.insert(
        "minimal_infinite_affine".into(),
        per_rank(&minimal.by_rank, |r| r.class.is_affine()),
    );
    counts.insert(
        "minimal_infinite_non_affine".into(),
        per_rank(&minimal.by_rank, |r| !r.class.is_affine()),
    );
    let findings = json!({
        "minimal_infinite_max_rank": mi_rank,
        "quasi_minimal_max_rank_attained": quasi.max_rank_attained(),
        "three_spherical_crystallographic": three.iter().map(|r| record_json(r)).collect::<Vec<_>>(),
        "non_affine_minimal_infinite": non_affine.iter().map(|r| record_json(r)).collect::<Vec<_>>(),
        "quasi_minimal": quasi.classes().map(record_json).collect::<Vec<_>>(),
    });
    Ok(Report::assemble(
        "size-bounds",
        Parameters {
            max_rank,
            labels: labels.clone(),
            mode: None,
            scope: None,
        },
        counts,
        claims,
        findings,
        started,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_small_ranks() {
        let r = verify_lemma_dynkin(LemmaMode::SimplyLaced, 5).unwrap();
        assert!(r.passed(), "{}", r.canonical_json());
        assert_eq!(r.counts["diagrams"][&5], 21);
        let r = verify_lemma_dynkin(LemmaMode::SimplyLaced, 2).unwrap();
        assert!(r.passed());
        let r = verify_lemma_dynkin(LemmaMode::ThreeSphericalCrystallographic, 4).unwrap();
        assert!(r.passed(), "{}", r.canonical_json());
        assert!(verify_lemma_dynkin(LemmaMode::ThreeSphericalCrystallographic, 7).is_err());
    }

    #[test]
    fn agreement_small_ranks() {
        let r = verify_engine_agreement(3, &LabelSet::simply_laced(), AgreementScope::Exhaustive)
            .unwrap();
        assert!(r.passed());
        assert_eq!(r.counts["diagrams"][&3], 2);
        let r = verify_engine_agreement(1, &LabelSet::simply_laced(), AgreementScope::Exhaustive)
            .unwrap();
        assert_eq!(r.counts["spherical"][&1], 1);
        let r = verify_engine_agreement(5, &LabelSet::crystallographic(), AgreementScope::Frontier)
            .unwrap();
        assert!(r.passed(), "{}", r.canonical_json());
        assert!("2,5"
            .parse::<LabelSet>()
            .map(|l| verify_engine_agreement(3, &l, AgreementScope::Exhaustive).is_err())
            .unwrap());
    }

    #[test]
    fn size_bounds_small() {
        let r = verify_size_bounds(6, &LabelSet::simply_laced()).unwrap();
        assert!(r.passed(), "{}", r.canonical_json());
        assert!(r.counts["minimal_infinite_non_affine"]
            .values()
            .all(|&n| n == 0));
        assert_eq!(
            r.claim("quasi_minimal_rank_at_most_10").unwrap().verdict,
            Verdict::NotApplicable
        );
    }

    #[test]
    fn hashes_ignore_meta() {
        let a = verify_size_bounds(4, &LabelSet::simply_laced()).unwrap();
        let b = crate::enumerate::with_jobs(3, || {
            verify_size_bounds(4, &LabelSet::simply_laced()).unwrap()
        });
        assert_eq!(a.content_hash, b.content_hash);
        assert_eq!(a.canonical_json(), b.canonical_json());
        assert_eq!(b.meta.jobs, 3);
    }
}

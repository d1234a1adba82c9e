//! Command implementations. Each returns both renderings so that the binary
//! only has to pick one.

use std::collections::BTreeMap;
use std::fmt::Write;

use coxdiag::{
    canonical_code, classify, enumerate_levels, enumerate_minimal_infinite,
    enumerate_quasi_minimal, has_affine_parabolic, is_hyperbolic, is_spherical, kazhdan_threshold,
    kazhdan_threshold_for_rank, lemma_dynkin_check, max_spherical_rank, minimal_infinite_subsets,
    verify_engine_agreement, verify_lemma_dynkin, verify_size_bounds, AgreementScope,
    CanonicalCode, Census, ClassRecord, CoreError, CoxeterSystem, EnumFilter, HyperbolicityVerdict,
    KazhdanThreshold, LabelSet, LemmaCheck, LemmaMode, Report, TypeClass, Verdict, VertexSubset,
    ZxZWitness, MAX_AGREEMENT_RANK, MAX_CANON_RANK,
};
use serde::Serialize;

use crate::diagram::render;

/// Rendered command output.
#[derive(Debug, Clone)]
pub struct Output {
    pub json: String,
    pub text: String,
    /// False when a verification claim failed.
    pub success: bool,
}

impl Output {
    fn new(value: &impl Serialize, text: String) -> Self {
        Self {
            json: serde_json::to_string(value).expect("outputs serialize"),
            text,
            success: true,
        }
    }
}

#[derive(Serialize)]
struct Classification {
    rank: usize,
    components: Vec<TypeClass>,
    component_vertices: Vec<VertexSubset>,
    spherical: bool,
    simply_laced: bool,
    crystallographic: bool,
}

pub fn classify_command(system: &CoxeterSystem) -> Output {
    let parts = classify(system);
    let out = Classification {
        rank: system.rank(),
        components: parts.iter().map(|(_, t)| *t).collect(),
        component_vertices: parts.iter().map(|(s, _)| *s).collect(),
        spherical: is_spherical(system),
        simply_laced: system.is_simply_laced(),
        crystallographic: system.is_crystallographic(),
    };
    let mut text = format!("rank {}\n", system.rank());
    for (s, t) in &parts {
        writeln!(text, "  {t} on {s}").unwrap();
    }
    writeln!(text, "finite: {}", if out.spherical { "yes" } else { "no" }).unwrap();
    Output::new(&out, text)
}

#[derive(Serialize)]
struct Hyperbolicity {
    #[serde(flatten)]
    verdict: HyperbolicityVerdict,
    lemma: LemmaCheck,
}

fn witness_text(w: &ZxZWitness) -> String {
    match w {
        ZxZWitness::AffineSubset { subset } => format!("affine special subgroup on {subset}"),
        ZxZWitness::CommutingInfinitePair { first, second } => {
            format!("commuting infinite special subgroups on {first} and {second}")
        }
    }
}

pub fn hyperbolic_command(system: &CoxeterSystem) -> Output {
    let verdict = is_hyperbolic(system);
    let lemma = lemma_dynkin_check(system);
    let mut text = match verdict.witness() {
        None => "hyperbolic\n".to_string(),
        Some(w) => format!("not hyperbolic: {}\n", witness_text(w)),
    };
    if lemma.hypotheses_ok {
        writeln!(
            text,
            "lemma hypotheses hold; consistent: {}",
            if lemma.lemma_consistent { "yes" } else { "no" }
        )
        .unwrap();
    }
    Output::new(&Hyperbolicity { verdict, lemma }, text)
}

#[derive(Serialize)]
struct MinimalInfinite {
    vertices: VertexSubset,
    #[serde(flatten)]
    class: TypeClass,
}

#[derive(Serialize)]
struct Parabolics {
    rank: usize,
    max_spherical_rank: usize,
    /// Largest `k` such that every special subgroup of rank `k` is finite.
    k_spherical: usize,
    affine_parabolic: Option<VertexSubset>,
    minimal_infinite: Vec<MinimalInfinite>,
}

pub fn parabolics_command(system: &CoxeterSystem) -> Output {
    let minimal: Vec<MinimalInfinite> = minimal_infinite_subsets(system)
        .into_iter()
        .map(|vertices| {
            let sub = system.restrict(&vertices).expect("subset of the system");
            let class = classify(&sub)
                .first()
                .map(|(_, t)| *t)
                .expect("minimal infinite subsets are connected");
            MinimalInfinite { vertices, class }
        })
        .collect();
    let k_spherical = minimal
        .iter()
        .map(|m| m.vertices.len() - 1)
        .min()
        .unwrap_or(system.rank());
    let out = Parabolics {
        rank: system.rank(),
        max_spherical_rank: max_spherical_rank(system),
        k_spherical,
        affine_parabolic: has_affine_parabolic(system, false),
        minimal_infinite: minimal,
    };
    let mut text = format!(
        "largest finite special subgroup: rank {}\n{}-spherical\n",
        out.max_spherical_rank, out.k_spherical
    );
    match &out.affine_parabolic {
        Some(s) => writeln!(text, "affine special subgroup on {s}").unwrap(),
        None => text.push_str("no affine special subgroup of rank at least 3\n"),
    }
    writeln!(
        text,
        "minimal infinite subsets: {}",
        out.minimal_infinite.len()
    )
    .unwrap();
    for m in &out.minimal_infinite {
        writeln!(text, "  {} {}", m.vertices, m.class).unwrap();
    }
    Output::new(&out, text)
}

fn threshold_output(t: &KazhdanThreshold) -> Output {
    let text = format!(
        "d = {}\nbound 1764^{}/25 = {}\nq = {} = {}^{}\n",
        t.d,
        t.d,
        t.bound_decimal(),
        t.q,
        t.prime,
        t.exponent
    );
    Output::new(t, text)
}

pub fn threshold_command(system: &CoxeterSystem) -> Result<Output, CoreError> {
    Ok(threshold_output(&kazhdan_threshold(system)?))
}

pub fn threshold_for_rank_command(d: usize) -> Result<Output, CoreError> {
    Ok(threshold_output(&kazhdan_threshold_for_rank(d)?))
}

/// What `enumerate` lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerateMode {
    All,
    Connected,
    MinimalInfinite,
    QuasiMinimal,
}

impl EnumerateMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::All => "all",
            Self::Connected => "connected",
            Self::MinimalInfinite => "minimal-infinite",
            Self::QuasiMinimal => "quasi-minimal",
        }
    }
}

#[derive(Debug, Clone)]
pub struct EnumerateArgs {
    pub max_rank: usize,
    pub labels: LabelSet,
    pub mode: EnumerateMode,
    pub k_spherical: Option<usize>,
    /// Include every class, not only the counts.
    pub list: bool,
}

#[derive(Serialize)]
struct Listed {
    code: CanonicalCode,
    rank: usize,
    system: CoxeterSystem,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Classes {
    Plain(Vec<Listed>),
    Records(Vec<ClassRecord>),
}

#[derive(Serialize)]
struct Enumeration {
    mode: &'static str,
    max_rank: usize,
    labels: LabelSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_spherical: Option<usize>,
    counts: BTreeMap<usize, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classes: Option<Classes>,
}

pub fn enumerate_command(args: &EnumerateArgs) -> Result<Output, CoreError> {
    let mut filter = EnumFilter::new(args.labels.clone());
    if let Some(k) = args.k_spherical {
        filter = filter.k_spherical(k);
    }
    let census = |c: Census| {
        (
            c.counts(),
            Classes::Records(c.by_rank.into_iter().flatten().collect()),
        )
    };
    let (counts, classes) = match args.mode {
        EnumerateMode::All | EnumerateMode::Connected => {
            if args.mode == EnumerateMode::Connected {
                filter = filter.connected();
            }
            if args.max_rank > MAX_CANON_RANK {
                return Err(CoreError::Unsupported {
                    op: "enumerate",
                    rank: args.max_rank,
                    max: MAX_CANON_RANK,
                });
            }
            let levels = enumerate_levels(args.max_rank, &filter)?;
            let counts = levels
                .iter()
                .enumerate()
                .map(|(r, l)| (r, l.len()))
                .collect();
            let listed = levels
                .into_iter()
                .flatten()
                .map(|system| Listed {
                    code: canonical_code(&system).expect("enumerated ranks are supported"),
                    rank: system.rank(),
                    system,
                })
                .collect();
            (counts, Classes::Plain(listed))
        }
        EnumerateMode::MinimalInfinite => {
            census(enumerate_minimal_infinite(&filter, args.max_rank)?)
        }
        EnumerateMode::QuasiMinimal => census(enumerate_quasi_minimal(
            &filter.proper_spherical_or_affine(),
            args.max_rank,
        )?),
    };

    let mut text = format!("{} diagrams over {{{}}}\n", args.mode.name(), args.labels);
    for (r, n) in &counts {
        writeln!(text, "  rank {r}: {n}").unwrap();
    }
    if args.list {
        let systems: Vec<&CoxeterSystem> = match &classes {
            Classes::Plain(v) => v.iter().map(|l| &l.system).collect(),
            Classes::Records(v) => v.iter().map(|r| &r.system).collect(),
        };
        for s in systems {
            text.push('\n');
            text.push_str(&render(s));
        }
    }
    let out = Enumeration {
        mode: args.mode.name(),
        max_rank: args.max_rank,
        labels: args.labels.clone(),
        k_spherical: args.k_spherical,
        counts,
        classes: args.list.then_some(classes),
    };
    Ok(Output::new(&out, text))
}

/// A verification campaign and its settings.
#[derive(Debug, Clone)]
pub enum Campaign {
    LemmaDynkin(LemmaMode),
    EngineAgreement(AgreementScope),
    SizeBounds,
}

impl Campaign {
    /// Largest rank a campaign runs to when none is given.
    pub fn default_max_rank(&self) -> usize {
        match self {
            Self::LemmaDynkin(mode) => mode.max_rank(),
            Self::EngineAgreement(AgreementScope::Exhaustive) => 5,
            Self::EngineAgreement(AgreementScope::Frontier) => MAX_AGREEMENT_RANK,
            Self::SizeBounds => 11,
        }
    }

    /// Label set used when none is given; lemma campaigns fix theirs.
    pub fn default_labels(&self) -> Option<LabelSet> {
        match self {
            Self::LemmaDynkin(_) => None,
            Self::EngineAgreement(_) => Some(LabelSet::crystallographic_finite()),
            Self::SizeBounds => Some(LabelSet::simply_laced()),
        }
    }
}

/// Runs a campaign. `labels` is ignored by the lemma campaigns.
pub fn verify_command(
    campaign: &Campaign,
    max_rank: usize,
    labels: &LabelSet,
) -> Result<Output, CoreError> {
    let report: Report = match campaign {
        Campaign::LemmaDynkin(mode) => verify_lemma_dynkin(*mode, max_rank)?,
        Campaign::EngineAgreement(scope) => verify_engine_agreement(max_rank, labels, *scope)?,
        Campaign::SizeBounds => verify_size_bounds(max_rank, labels)?,
    };
    let mut text = format!(
        "{} to rank {}\n",
        report.campaign, report.parameters.max_rank
    );
    for claim in &report.claims {
        let verdict = match claim.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "n/a",
        };
        write!(
            text,
            "  {verdict:<4} {} ({} checked",
            claim.id, claim.checked
        )
        .unwrap();
        if claim.failures > 0 {
            write!(text, ", {} failures", claim.failures).unwrap();
        }
        text.push(')');
        if let Some(note) = &claim.note {
            write!(text, ": {note}").unwrap();
        }
        text.push('\n');
    }
    writeln!(text, "content hash {}", report.content_hash).unwrap();
    let mut out = Output::new(&report, text);
    out.success = report.passed();
    Ok(out)
}

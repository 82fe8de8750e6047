//! One function per subcommand. Each returns a filled envelope and a short
//! human-readable summary; the binary decides where both go.

use std::fmt;

use orbhull::group_structure::{
    gelfand_check, normalizer_subalgebra, CenterOfSu2, GroupSampler, HaarSampler, RepEvaluator, So2InSo3, So3Irrep,
    Su2Irrep, RANK_THRESHOLD,
};
use orbhull::haar_numeric::{CompactMatrixGroup, GroupKind, SamplerState};
use orbhull::kempf_ness::{flow_minimize, FlowOutcome};
use orbhull::lattice_cone::{cone_is_pointed, Pointedness};
use orbhull::measure_mult::{
    fixed_point_consistency, multiplicativity_defect, nilcone_test_numeric, DefectVerdict, CONSISTENT_THRESHOLD,
    REFUTED_THRESHOLD,
};
use orbhull::serde_util::rational_to_string;
use orbhull::torus_orbit::{analyze, nilcone_member_exact, OrbitPoint};
use orbhull::Complex64;
use serde_json::json;

use crate::config::{Experiment, GelfandFamily, GelfandSubgroup};
use crate::envelope::ReportEnvelope;

#[derive(Debug)]
pub enum CommandError {
    /// The config does not describe an input this command accepts.
    Validation(String),
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommandError::Validation(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CommandError {}

impl From<orbhull::Error> for CommandError {
    fn from(e: orbhull::Error) -> Self {
        CommandError::Validation(e.to_string())
    }
}

pub struct Outcome {
    pub envelope: ReportEnvelope,
    /// Headline verdict, also stored under `verdicts.<module>.verdict`.
    pub verdict: String,
    pub inconclusive: bool,
    pub summary: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    TorusAnalyze,
    OrbitDefect,
    OrbitFlow,
    GroupCheckF,
    GroupGelfand,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::TorusAnalyze => "torus-analyze",
            Command::OrbitDefect => "orbit-defect",
            Command::OrbitFlow => "orbit-flow",
            Command::GroupCheckF => "group-check-f",
            Command::GroupGelfand => "group-gelfand",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            Command::TorusAnalyze,
            Command::OrbitDefect,
            Command::OrbitFlow,
            Command::GroupCheckF,
            Command::GroupGelfand,
        ]
        .into_iter()
        .find(|c| c.name() == name)
    }

    pub fn run(self, exp: &Experiment) -> Result<Outcome, CommandError> {
        match self {
            Command::TorusAnalyze => torus_analyze(exp),
            Command::OrbitDefect => orbit_defect(exp),
            Command::OrbitFlow => orbit_flow(exp),
            Command::GroupCheckF => group_check_f(exp),
            Command::GroupGelfand => group_gelfand(exp),
        }
    }
}

fn missing(what: &str) -> CommandError {
    CommandError::Validation(format!("config is missing {what}"))
}

fn group_and_vector(exp: &Experiment) -> Result<(&CompactMatrixGroup, &[Complex64]), CommandError> {
    let g = exp.group.as_ref().ok_or_else(|| missing("a [group] section or torus [action]"))?;
    let v = exp.v.as_deref().ok_or_else(|| missing("a [vector] section"))?;
    Ok((g, v))
}

fn pointedness_json(p: &Pointedness) -> serde_json::Value {
    match p {
        Pointedness::Trivial => json!({ "kind": "trivial" }),
        Pointedness::Pointed { functional } => json!({
            "kind": "pointed",
            "functional": functional.iter().map(rational_to_string).collect::<Vec<_>>(),
        }),
        Pointedness::NotPointed { combination } => json!({
            "kind": "not_pointed",
            "combination": combination.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        }),
    }
}

pub fn torus_analyze(exp: &Experiment) -> Result<Outcome, CommandError> {
    let action = exp.torus.as_ref().ok_or_else(|| missing("an [action] weights table"))?;
    let point = match (&exp.v_exact, &exp.v) {
        (Some(p), _) => p.clone(),
        (None, Some(v)) => OrbitPoint::Float(v.clone()),
        (None, None) => return Err(missing("a [vector] section")),
    };
    let report = analyze(action, &point)?;
    let nilcone = nilcone_member_exact(action, &point)?;
    let pointed = cone_is_pointed(&report.spectrum_generators);
    let verdict = if report.antisymmetric { "antisymmetric" } else { "not-antisymmetric" };

    let mut env = ReportEnvelope::new(Command::TorusAnalyze.name(), exp.config.clone());
    if !point.is_exact() {
        env.warn("v has float coordinates; its support was read with a zero test at 1e-12");
    }
    let summary = vec![
        format!("spectrum generators: {}", report.spectrum_generators.generators().len()),
        format!("antisymmetric: {}", report.antisymmetric),
        format!("in nilcone: {}", report.nilpotent),
        format!("lineality rank: {}", report.lineality.rank()),
        format!("fiber coordinates: {:?}, base coordinates: {:?}", report.fiber_coords, report.base_coords),
        format!(
            "hull relations: {}",
            report.hull_relations.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
        ),
    ];
    env.insert(
        "torus_orbit",
        json!({
            "verdict": verdict,
            "antisymmetric": report.antisymmetric,
            "nilpotent": report.nilpotent,
            "exact": point.is_exact(),
            "pointedness": pointedness_json(&pointed),
            "fibration": report,
            "nilcone": nilcone,
        }),
    );
    Ok(Outcome {
        envelope: env,
        verdict: verdict.to_string(),
        inconclusive: false,
        summary,
    })
}

pub fn orbit_defect(exp: &Experiment) -> Result<Outcome, CommandError> {
    let (group, v) = group_and_vector(exp)?;
    let est = &exp.config.estimation;
    let cfg = est.estimation_config();
    let defect = multiplicativity_defect(group, v, est.degree_bound, &cfg)?;
    let fixed = fixed_point_consistency(group, v, est.degree_bound, &cfg)?;
    let probes: Vec<_> = exp.invariants.iter().map(|i| i.polynomial.clone()).collect();
    let nilcone = nilcone_test_numeric(group, v, est.degree_bound, est.nilcone_tolerance, &probes, &cfg)?;

    // A multiplicative-looking measure whose fixed-point identity fails badly
    // is not evidence either way.
    let (verdict, inconclusive) = match defect.verdict {
        DefectVerdict::Multiplicative if fixed.residual >= REFUTED_THRESHOLD => ("inconclusive", true),
        DefectVerdict::Multiplicative => ("antisymmetric-consistent", false),
        DefectVerdict::NotMultiplicative => ("refuted", false),
        DefectVerdict::Inconclusive => ("inconclusive", true),
    };

    let mut env = ReportEnvelope::new(Command::OrbitDefect.name(), exp.config.clone());
    if !group.exact_haar() {
        env.warn("approximate_haar: custom groups are sampled by random words, not exact Haar measure");
    }
    if defect.exact {
        env.warn("torus averages computed in closed form; samples unused");
    }
    if inconclusive {
        env.warn("defect falls between the consistency and refutation thresholds; increase samples");
    }
    let mut summary = vec![
        format!("verdict: {verdict}"),
        format!(
            "multiplicativity defect: {:.6} ± {:.6} (consistent ≤ {CONSISTENT_THRESHOLD}, refuted ≥ {REFUTED_THRESHOLD})",
            defect.defect, defect.defect_std_error
        ),
        format!("fixed-point residual: {:.6}", fixed.residual),
        format!("nilcone (numeric): {:?}", nilcone.verdict),
    ];
    for p in &nilcone.probes {
        summary.push(format!(
            "probe {}: {:.6}{:+.6}i ± {:.6}",
            p.polynomial, p.estimate.value.re, p.estimate.value.im, p.estimate.std_error
        ));
    }
    env.insert(
        "measure_mult",
        json!({
            "verdict": verdict,
            "tolerances": {
                "consistent_threshold": CONSISTENT_THRESHOLD,
                "refuted_threshold": REFUTED_THRESHOLD,
                "nilcone_tolerance": est.nilcone_tolerance,
            },
            "defect": defect,
            "fixed_point": fixed,
            "nilcone": nilcone,
        }),
    );
    Ok(Outcome {
        envelope: env,
        verdict: verdict.to_string(),
        inconclusive,
        summary,
    })
}

pub fn orbit_flow(exp: &Experiment) -> Result<Outcome, CommandError> {
    let (group, v) = group_and_vector(exp)?;
    let opts = exp.flow_options();
    let report = flow_minimize(group, v, &opts)?;
    let (verdict, inconclusive) = match report.outcome {
        FlowOutcome::ConvergedToZero => ("in-nilcone", false),
        FlowOutcome::Stalled => ("not-in-nilcone", false),
        FlowOutcome::IterationLimit => ("inconclusive", true),
    };
    let mut env = ReportEnvelope::new(Command::OrbitFlow.name(), exp.config.clone());
    if let Some(d) = &report.diagnostic {
        env.warn(d.clone());
    }
    if inconclusive {
        env.warn(format!("iteration limit {} reached", opts.max_iter));
    }
    let exact = match (&exp.torus, &exp.v_exact) {
        (Some(t), Some(p)) if group.is_torus() => Some(nilcone_member_exact(t, p)?),
        _ => None,
    };
    if let Some(e) = &exact {
        if !inconclusive && e.member != report.converged_to_zero {
            env.warn("flow verdict disagrees with the exact torus nilcone test");
        }
    }
    let mut summary = vec![
        format!("verdict: {verdict}"),
        format!(
            "|w|^2: {:.6e} -> {:.6e} after {} iterations (zero_tol {:.1e}, grad_tol {:.1e})",
            report.initial_norm_sq, report.final_norm_sq, report.iterations, opts.zero_tol, opts.grad_tol
        ),
        format!("final gradient norm: {:.3e}", report.final_gradient_norm),
    ];
    for r in &report.invariant_residuals {
        summary.push(format!("invariant {}: max drift {:.3e}", r.label, r.max_residual));
    }
    if let Some(e) = &exact {
        summary.push(format!("exact torus nilcone membership: {}", e.member));
    }
    env.insert(
        "kempf_ness",
        json!({
            "verdict": verdict,
            "tolerances": { "zero_tol": opts.zero_tol, "grad_tol": opts.grad_tol, "max_iter": opts.max_iter },
            "flow": report,
            "exact_nilcone": exact,
        }),
    );
    Ok(Outcome {
        envelope: env,
        verdict: verdict.to_string(),
        inconclusive,
        summary,
    })
}

pub fn group_check_f(exp: &Experiment) -> Result<Outcome, CommandError> {
    let pair = exp.lie_pair.as_ref().ok_or_else(|| missing("a [lie_pair] section"))?;
    let report = normalizer_subalgebra(pair);
    let inconclusive = report.max_residual > RANK_THRESHOLD;
    let verdict = match (inconclusive, report.condition_f_infinitesimal) {
        (true, _) => "inconclusive",
        (false, true) => "condition-f-holds",
        (false, false) => "condition-f-fails",
    };
    let mut env = ReportEnvelope::new(Command::GroupCheckF.name(), exp.config.clone());
    env.warn("infinitesimal-only F-check: finiteness is tested on Lie algebras, so a disconnected N(H)/H is not detected");
    let summary = vec![
        format!("verdict: {verdict}"),
        format!(
            "dim g = {}, dim h = {}, dim normalizer = {}",
            report.dim_g, report.dim_h, report.dim_normalizer
        ),
        format!("max residual: {:.3e} (rank threshold {RANK_THRESHOLD:.0e})", report.max_residual),
    ];
    env.insert(
        "group_structure",
        json!({
            "verdict": verdict,
            "tolerances": { "rank_threshold": RANK_THRESHOLD },
            "normalizer": report,
        }),
    );
    Ok(Outcome {
        envelope: env,
        verdict: verdict.to_string(),
        inconclusive,
        summary,
    })
}

pub fn group_gelfand(exp: &Experiment) -> Result<Outcome, CommandError> {
    let spec = exp.config.gelfand.as_ref().ok_or_else(|| missing("a [gelfand] section"))?;
    let samples = spec.samples.unwrap_or(exp.config.estimation.samples);
    let family: Vec<Box<dyn RepEvaluator>> = match spec.family {
        GelfandFamily::So3 => (0..=spec.max_label).map(|ell| Box::new(So3Irrep { ell }) as Box<dyn RepEvaluator>).collect(),
        GelfandFamily::Su2 => {
            (0..=spec.max_label).map(|two_j| Box::new(Su2Irrep { two_j }) as Box<dyn RepEvaluator>).collect()
        }
    };
    let refs: Vec<&dyn RepEvaluator> = family.iter().map(Box::as_ref).collect();
    let h: &dyn HaarSampler = match spec.subgroup {
        GelfandSubgroup::So2InSo3 => &So2InSo3,
        GelfandSubgroup::CenterOfSu2 => &CenterOfSu2,
    };
    let ambient = if spec.check_irreducibility {
        let kind = match spec.family {
            GelfandFamily::So3 => GroupKind::SpecialOrthogonal(3),
            GelfandFamily::Su2 => GroupKind::SpecialUnitary(2),
        };
        Some(GroupSampler(CompactMatrixGroup::defining(kind)?))
    } else {
        None
    };
    let state = SamplerState::new(exp.config.estimation.seed);
    let report = gelfand_check(
        &refs,
        h,
        samples,
        spec.threshold,
        state,
        ambient.as_ref().map(|g| g as &dyn HaarSampler),
    );
    let cutoff = 1.0 + spec.threshold;
    let inconclusive = report
        .entries
        .iter()
        .any(|e| (e.multiplicity.estimate - cutoff).abs() <= 4.0 * e.multiplicity.std_error);
    let verdict = match (inconclusive, report.multiplicity_free) {
        (true, _) => "inconclusive",
        (false, true) => "multiplicity-free",
        (false, false) => "not-multiplicity-free",
    };
    let mut env = ReportEnvelope::new(Command::GroupGelfand.name(), exp.config.clone());
    env.provenance.samples = samples;
    for e in report.entries.iter().filter(|e| e.irreducibility_warning) {
        env.warn(format!("{}: character norm is far from 1; the input may be reducible", e.representation));
    }
    if inconclusive {
        env.warn("an estimate lies within 4 standard errors of the threshold; increase samples");
    }
    let mut summary = vec![format!("verdict: {verdict} (threshold {})", spec.threshold)];
    for e in &report.entries {
        summary.push(format!(
            "{} (dim {}): dim V^H ≈ {:.4} ± {:.4}",
            e.representation, e.dim, e.multiplicity.estimate, e.multiplicity.std_error
        ));
    }
    env.insert(
        "group_structure",
        json!({
            "verdict": verdict,
            "tolerances": { "threshold": spec.threshold, "inconclusive_band_se": 4.0 },
            "gelfand": report,
        }),
    );
    Ok(Outcome {
        envelope: env,
        verdict: verdict.to_string(),
        inconclusive,
        summary,
    })
}

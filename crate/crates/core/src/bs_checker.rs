//! Deciding the (adjusted) Bhatia-Šemrl condition for real functionals.
//!
//! For a functional T and a norming point x₀, `Tx₀ = ±‖T‖ ≠ 0`, and in ℝ a
//! nonzero number is Birkhoff-James orthogonal to `Sx₀` only when
//! `Sx₀ = 0`. The checker therefore looks for a norming element that S
//! annihilates: exactly through the image of the face `M_T` under S on c0
//! and L1, and by construction or sampling on C[0,1].

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::attainment::{
    c0_attainment, c0_base_tail, c0_face_range, l1_affine_attainment, l1_face_range, measure_attainment,
    measure_face_enclosure, plateau_values, AttainmentError, RangeInterval,
};
use crate::certificate::{Certificate, Certified, Relation};
use crate::constructions::{
    baseline_mu, dirac_f_alpha, measure_nu_continuous, ConstructionError, ContinuousConstruction, VerifyOptions,
};
use crate::orthogonality::{dini, is_bj_orthogonal, is_strongly_orthogonal, DiniPair, OrthError, SpaceModel};
use crate::sampling::{self, geometric, stream, SeededRng};
use crate::scalar::{int, sgn, Scalar, Q};
use crate::spaces::{Measure, PLFunction, PiecewiseAffine, SeqNorm, SparseSeq, StepFunction, StepNorm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Premise `T ⊥_B S`.
    Bs,
    /// Premise `T ⊥_S S`.
    AdjustedBs,
}

/// A functional T together with a direction S, both acting on the same
/// space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space")]
pub enum Instance {
    /// Finitely supported functionals on c0.
    #[serde(rename = "c0_sup")]
    C0 { t: SparseSeq, s: SparseSeq },
    /// L∞ functionals on L1.
    #[serde(rename = "L1_step")]
    L1 { g: PiecewiseAffine, h: StepFunction },
    /// Measures acting on C[0,1].
    #[serde(rename = "TV_measure")]
    Measure { mu: Measure, nu: Measure },
}

impl Instance {
    /// Name of the space the functionals act on.
    pub fn space(&self) -> &'static str {
        match self {
            Instance::C0 { .. } => "c0_sup",
            Instance::L1 { .. } => "L1_step",
            Instance::Measure { .. } => "TV_measure",
        }
    }

    /// Model in which T and S themselves are compared.
    pub fn dual_model(&self) -> SpaceModel {
        match self {
            Instance::C0 { .. } => SpaceModel::L1Sum,
            Instance::L1 { .. } => SpaceModel::LinfStep,
            Instance::Measure { .. } => SpaceModel::TvMeasure,
        }
    }

    fn premise(&self, mode: Mode) -> Result<bool, OrthError> {
        let model = self.dual_model();
        match (self, mode) {
            (Instance::C0 { t, s }, Mode::Bs) => is_bj_orthogonal(t, s, model),
            (Instance::C0 { t, s }, Mode::AdjustedBs) => is_strongly_orthogonal(t, s, model),
            (Instance::L1 { g, h }, Mode::Bs) => is_bj_orthogonal(g, &PiecewiseAffine::from_step(h), model),
            (Instance::L1 { g, h }, Mode::AdjustedBs) => {
                is_strongly_orthogonal(g, &PiecewiseAffine::from_step(h), model)
            }
            (Instance::Measure { mu, nu }, Mode::Bs) => is_bj_orthogonal(mu, nu, model),
            (Instance::Measure { mu, nu }, Mode::AdjustedBs) => is_strongly_orthogonal(mu, nu, model),
        }
    }

    fn dini(&self) -> Option<DiniPair> {
        let model = self.dual_model();
        match self {
            Instance::C0 { t, s } => dini(t, s, model).ok(),
            Instance::L1 { g, h } => dini(g, &PiecewiseAffine::from_step(h), model).ok(),
            Instance::Measure { mu, nu } => dini(mu, nu, model).ok(),
        }
    }
}

/// A norming element of T.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "element")]
pub enum Witness {
    #[serde(rename = "c0")]
    C0(SparseSeq),
    #[serde(rename = "L1")]
    L1(StepFunction),
    #[serde(rename = "C01")]
    C01(PLFunction),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Evidence {
    /// The exact image `{S(x) : x ∈ M_T}`.
    FaceRange(RangeInterval),
    /// An outer enclosure of the image.
    Enclosure(RangeInterval),
    /// Values of S on sampled norming elements, all of one sign.
    Samples { count: usize, min: Scalar, max: Scalar },
}

fn range_json(r: &RangeInterval) -> Value {
    json!({"lo": Q::from(&r.lo), "hi": Q::from(&r.hi), "attained": r.attained})
}

impl Evidence {
    pub fn to_json(&self) -> Value {
        match self {
            Evidence::FaceRange(r) => json!({"kind": "face_range", "range": range_json(r)}),
            Evidence::Enclosure(r) => json!({"kind": "enclosure", "range": range_json(r)}),
            Evidence::Samples { count, min, max } => {
                json!({"kind": "samples", "count": count, "min": Q::from(min), "max": Q::from(max)})
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CheckOutcome {
    NotOrthogonal { dini: Option<DiniPair> },
    /// `t_value = ‖T‖` and `s_value = 0`, both verified exactly.
    WitnessFound {
        witness: Witness,
        t_value: Scalar,
        s_value: Scalar,
    },
    /// Authoritative unless `inconclusive`, which marks sample evidence.
    Falsified { evidence: Evidence, inconclusive: bool },
}

impl CheckOutcome {
    pub fn tag(&self) -> &'static str {
        match self {
            CheckOutcome::NotOrthogonal { .. } => "NotOrthogonal",
            CheckOutcome::WitnessFound { .. } => "WitnessFound",
            CheckOutcome::Falsified { .. } => "Falsified",
        }
    }

    pub fn is_witness(&self) -> bool {
        matches!(self, CheckOutcome::WitnessFound { .. })
    }

    pub fn is_falsified(&self) -> bool {
        matches!(self, CheckOutcome::Falsified { .. })
    }

    pub fn evidence_json(&self) -> Value {
        match self {
            CheckOutcome::NotOrthogonal { dini } => json!({ "dini": dini }),
            CheckOutcome::WitnessFound {
                witness,
                t_value,
                s_value,
            } => json!({
                "witness": witness,
                "t_value": Q::from(t_value),
                "s_value": Q::from(s_value),
            }),
            CheckOutcome::Falsified { evidence, inconclusive } => {
                json!({ "evidence": evidence.to_json(), "inconclusive": inconclusive })
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckError {
    #[error(transparent)]
    Attainment(#[from] AttainmentError),
    #[error(transparent)]
    Orthogonality(#[from] OrthError),
}

/// `(‖T‖, T(x), S(x), x ∈ B_X)` for a candidate norming element.
fn evaluate(instance: &Instance, witness: &Witness) -> Option<(Scalar, Scalar, Scalar, bool)> {
    match (instance, witness) {
        (Instance::C0 { t, s }, Witness::C0(x)) => Some((
            t.norm(SeqNorm::Sum),
            t.pair(x),
            s.pair(x),
            x.norm(SeqNorm::Sup) <= Scalar::one(),
        )),
        (Instance::L1 { g, h }, Witness::L1(phi)) => Some((
            g.ess_sup(),
            g.pair(phi),
            h.pair(phi),
            phi.norm(StepNorm::L1) <= Scalar::one(),
        )),
        (Instance::Measure { mu, nu }, Witness::C01(f)) => Some((
            mu.tv_norm(),
            mu.pair(f),
            nu.pair(f),
            f.sup_norm() <= Scalar::one(),
        )),
        _ => None,
    }
}

/// Exact check that `witness` lies in `M_T` and is annihilated by S.
pub fn verify_witness(instance: &Instance, witness: &Witness) -> bool {
    match evaluate(instance, witness) {
        Some((norm, tx, sx, in_ball)) => in_ball && tx == norm && sx.is_zero(),
        None => false,
    }
}

fn found(instance: &Instance, witness: Witness) -> CheckOutcome {
    let (t_value, _, s_value, _) = evaluate(instance, &witness).expect("witness matches the instance");
    debug_assert!(verify_witness(instance, &witness));
    CheckOutcome::WitnessFound {
        witness,
        t_value,
        s_value,
    }
}

/// Decides whether some norming element of T is annihilated by S, given
/// the orthogonality premise of `mode`.
///
/// On c0 and L1 the answer is exact: S maps `M_T` onto an interval and a
/// witness is mixed from the two extreme elements when 0 lies inside. For
/// measures an enclosure of the image may rule 0 out exactly; otherwise a
/// witness is built for purely atomic T, or searched for among sampled
/// norming functions, and a failed search is reported as inconclusive.
pub fn check_pair(instance: &Instance, mode: Mode, opts: &VerifyOptions) -> Result<CheckOutcome, CheckError> {
    match instance {
        Instance::C0 { t, .. } => {
            c0_attainment(t)?;
        }
        Instance::L1 { g, .. } => {
            l1_affine_attainment(g)?;
        }
        Instance::Measure { mu, .. } => {
            measure_attainment(mu)?;
        }
    }
    if !instance.premise(mode)? {
        return Ok(CheckOutcome::NotOrthogonal { dini: instance.dini() });
    }
    match instance {
        Instance::C0 { t, s } => check_c0(instance, t, s),
        Instance::L1 { g, h } => check_l1(instance, g, h),
        Instance::Measure { mu, nu } => check_measure(instance, mu, nu, opts),
    }
}

fn check_c0(instance: &Instance, t: &SparseSeq, s: &SparseSeq) -> Result<CheckOutcome, CheckError> {
    let range = c0_face_range(t, s)?;
    if !range.contains_zero() {
        return Ok(CheckOutcome::Falsified {
            evidence: Evidence::FaceRange(range),
            inconclusive: false,
        });
    }
    let (base, tail) = c0_base_tail(t, s);
    let theta = if tail.is_zero() { Scalar::zero() } else { -base / tail };
    let mut entries: Vec<(usize, Scalar)> = t.entries().map(|(i, v)| (i, sgn(v))).collect();
    entries.extend(
        s.entries()
            .filter(|(i, _)| t.get(*i).is_zero())
            .map(|(i, v)| (i, &theta * sgn(v))),
    );
    let x = SparseSeq::from_entries(entries).expect("indices start at 1");
    Ok(found(instance, Witness::C0(x)))
}

fn check_l1(instance: &Instance, g: &PiecewiseAffine, h: &StepFunction) -> Result<CheckOutcome, CheckError> {
    let face = l1_affine_attainment(g)?;
    let range = l1_face_range(&face, h);
    if !range.contains_zero() {
        return Ok(CheckOutcome::Falsified {
            evidence: Evidence::FaceRange(range),
            inconclusive: false,
        });
    }
    let vals = plateau_values(&face, h);
    if let Some((a, b, _)) = vals.iter().find(|(_, _, v)| v.is_zero()) {
        return Ok(found(instance, Witness::L1(face.concentrated(a, b))));
    }
    let lo = vals.iter().min_by(|x, y| x.2.cmp(&y.2)).expect("nonempty plateau");
    let hi = vals.iter().max_by(|x, y| x.2.cmp(&y.2)).expect("nonempty plateau");
    let spread = &hi.2 - &lo.2;
    let phi = face
        .concentrated(&lo.0, &lo.1)
        .scale(&(&hi.2 / &spread))
        .add_scaled(&face.concentrated(&hi.0, &hi.1), &(-&lo.2 / &spread));
    Ok(found(instance, Witness::L1(phi)))
}

fn check_measure(
    instance: &Instance,
    mu: &Measure,
    nu: &Measure,
    opts: &VerifyOptions,
) -> Result<CheckOutcome, CheckError> {
    let (face, canonical) = measure_attainment(mu)?;
    let enclosure = measure_face_enclosure(&face, nu);
    if !enclosure.contains_zero() {
        return Ok(CheckOutcome::Falsified {
            evidence: Evidence::Enclosure(enclosure),
            inconclusive: false,
        });
    }
    if mu.is_purely_atomic() {
        if let Ok(w) = dirac_f_alpha(mu, nu, &Scalar::one()) {
            return Ok(found(instance, Witness::C01(w.value.f)));
        }
    }
    let mut rng = stream(opts.seed, 0);
    let mut candidates = vec![canonical];
    candidates.extend((0..opts.samples).map(|_| face.sample(&mut rng, 3)));
    let values: Vec<Scalar> = candidates.iter().map(|f| nu.pair(f)).collect();
    if let Some(i) = values.iter().position(|v| v.is_zero()) {
        return Ok(found(instance, Witness::C01(candidates.swap_remove(i))));
    }
    let (imin, min) = values.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)).expect("nonempty");
    let (imax, max) = values.iter().enumerate().max_by(|a, b| a.1.cmp(b.1)).expect("nonempty");
    if min.is_negative() && max.is_positive() {
        // M_μ is convex, so the segment between the two crosses zero
        let w = max / (max - min);
        let f = candidates[imin].scale(&w).add_scaled(&candidates[imax], &(Scalar::one() - &w));
        return Ok(found(instance, Witness::C01(f)));
    }
    Ok(CheckOutcome::Falsified {
        evidence: Evidence::Samples {
            count: values.len(),
            min: min.clone(),
            max: max.clone(),
        },
        inconclusive: true,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    C0,
    L1,
    Measure,
}

/// The T of a stress suite.
#[derive(Clone, Debug, PartialEq)]
pub enum Functional {
    C0(SparseSeq),
    L1(PiecewiseAffine),
    Measure(Measure),
}

impl Functional {
    pub fn space(&self) -> &'static str {
        match self {
            Functional::C0(_) => "c0_sup",
            Functional::L1(_) => "L1_step",
            Functional::Measure(_) => "TV_measure",
        }
    }

    /// Random attaining functional: finitely supported on c0, a nonzero step
    /// function on L1 and a purely atomic measure on C[0,1].
    pub fn random(space: Space, rng: &mut SeededRng) -> Functional {
        match space {
            Space::C0 => loop {
                let len = geometric(rng, 0.4, 6);
                let t = sampling::sparse_seq(rng, len, 8, 4);
                if !t.is_zero() {
                    return Functional::C0(t);
                }
            },
            Space::L1 => loop {
                let pieces = geometric(rng, 0.3, 8);
                let g = sampling::step_function(rng, pieces, 4);
                if !g.is_zero() {
                    return Functional::L1(PiecewiseAffine::from_step(&g));
                }
            },
            Space::Measure => loop {
                let atoms = rng.gen_range(1..=6);
                let mu = sampling::measure(rng, atoms, 1, 4);
                let mu = Measure::new(mu.atoms().to_vec(), StepFunction::zero()).expect("atoms are valid");
                if !mu.is_zero() {
                    return Functional::Measure(mu);
                }
            },
        }
    }

    /// Random direction S: dyadic coefficients in [-1, 1] on a support of
    /// geometric size.
    fn random_instance(&self, rng: &mut SeededRng) -> Instance {
        match self {
            Functional::C0(t) => {
                let len = geometric(rng, 0.4, 8);
                let s = sampling::sparse_seq(rng, len, t.max_index() + 3, 4);
                Instance::C0 { t: t.clone(), s }
            }
            Functional::L1(g) => {
                let pieces = geometric(rng, 0.3, 10);
                Instance::L1 {
                    g: g.clone(),
                    h: sampling::step_function(rng, pieces, 4),
                }
            }
            Functional::Measure(mu) => {
                let atoms = rng.gen_range(0..=3);
                let pieces = geometric(rng, 0.4, 6);
                Instance::Measure {
                    mu: mu.clone(),
                    nu: sampling::measure(rng, atoms, pieces, 4),
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct StressOptions {
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub max_attempts: usize,
    /// Extra instances checked after the random ones.
    pub injected: Vec<Instance>,
}

impl Default for StressOptions {
    fn default() -> Self {
        Self {
            n: 500,
            seed: 0,
            samples: 20,
            max_attempts: 10_000,
            injected: Vec::new(),
        }
    }
}

/// One instance of a stress suite with both modes checked.
#[derive(Clone, Debug)]
pub struct StressCase {
    pub index: usize,
    pub instance: Instance,
    pub attempts: usize,
    pub adjusted: CheckOutcome,
    pub bs: CheckOutcome,
}

#[derive(Clone, Debug)]
pub struct StressReport {
    pub space: &'static str,
    pub n: usize,
    pub seed: u64,
    pub witnesses: usize,
    pub falsified: usize,
    /// Random draws whose premise never held within the attempt cap.
    pub premise_unmet: usize,
    pub rejected_draws: usize,
    /// Cases with a BS witness whose adjusted check was falsified.
    pub inclusion_violations: usize,
    pub cases: Vec<StressCase>,
}

impl StressReport {
    pub fn to_json(&self) -> Value {
        let falsified: Vec<Value> = self
            .cases
            .iter()
            .filter(|c| c.adjusted.is_falsified())
            .map(|c| {
                json!({
                    "index": c.index,
                    "instance": c.instance,
                    "outcome": c.adjusted.tag(),
                    "evidence": c.adjusted.evidence_json(),
                })
            })
            .collect();
        json!({
            "space": self.space,
            "n": self.n,
            "seed": self.seed,
            "witnesses": self.witnesses,
            "falsified": self.falsified,
            "premise_unmet": self.premise_unmet,
            "rejected_draws": self.rejected_draws,
            "inclusion_violations": self.inclusion_violations,
            "falsified_cases": falsified,
        })
    }
}

/// Runs the adjusted check on `n` random directions S with `T ⊥_S S`
/// (rejection sampling, capped per instance) plus any injected instances.
/// The BS check is run alongside to test the inclusion `BS ⊆ BSa`.
pub fn stress_suite(t: &Functional, opts: &StressOptions) -> Result<StressReport, CheckError> {
    let run = |index: usize, instance: Instance, attempts: usize| -> Result<StressCase, CheckError> {
        let verify = VerifyOptions {
            samples: opts.samples,
            seed: opts.seed.wrapping_add(index as u64),
        };
        Ok(StressCase {
            index,
            adjusted: check_pair(&instance, Mode::AdjustedBs, &verify)?,
            bs: check_pair(&instance, Mode::Bs, &verify)?,
            instance,
            attempts,
        })
    };
    let drawn: Vec<Result<Option<StressCase>, CheckError>> = (0..opts.n)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(opts.seed, i as u64);
            for attempt in 1..=opts.max_attempts {
                let instance = t.random_instance(&mut rng);
                if instance.premise(Mode::AdjustedBs)? {
                    return run(i, instance, attempt).map(Some);
                }
            }
            Ok(None)
        })
        .collect();
    let mut cases = Vec::with_capacity(opts.n + opts.injected.len());
    let mut premise_unmet = 0;
    for c in drawn {
        match c? {
            Some(case) => cases.push(case),
            None => premise_unmet += 1,
        }
    }
    for (j, instance) in opts.injected.iter().enumerate() {
        cases.push(run(opts.n + j, instance.clone(), 0)?);
    }
    let rejected_draws = cases.iter().map(|c| c.attempts.saturating_sub(1)).sum::<usize>()
        + premise_unmet * opts.max_attempts;
    Ok(StressReport {
        space: t.space(),
        n: opts.n,
        seed: opts.seed,
        witnesses: cases.iter().filter(|c| c.adjusted.is_witness()).count(),
        falsified: cases.iter().filter(|c| c.adjusted.is_falsified()).count(),
        premise_unmet,
        rejected_draws,
        inclusion_violations: cases
            .iter()
            .filter(|c| c.bs.is_witness() && c.adjusted.is_falsified())
            .count(),
        cases,
    })
}

/// Outcome of [`nondense_certificate`].
#[derive(Clone, Debug, PartialEq)]
pub enum NondenseBranch {
    /// The closed supports of ν⁺ and ν⁻ meet.
    NotAttaining,
    /// ν attains and the construction for a density block applies.
    LacksAdjustedBs {
        a: (Scalar, Scalar),
        c: (Scalar, Scalar),
        construction: Box<ContinuousConstruction>,
    },
    /// ν is purely atomic, hence mutually singular with the baseline.
    DiracFar { distance: Scalar },
}

impl NondenseBranch {
    pub fn tag(&self) -> &'static str {
        match self {
            NondenseBranch::NotAttaining => "NotAttaining",
            NondenseBranch::LacksAdjustedBs { .. } => "LacksAdjustedBS",
            NondenseBranch::DiracFar { .. } => "DiracFar",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NondenseError {
    #[error("‖ν − μ‖ = {0} is not below 1/2")]
    OutOfRadius(Scalar),
    #[error("ν is zero")]
    Zero,
    #[error("no gap in the support of ν")]
    NoGap,
    #[error("no density block of constant sign")]
    NoDensityBlock,
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// Explains why ν, close to the baseline measure, cannot lie in the
/// adjusted class.
///
/// A purely atomic ν is singular to the baseline, so its distance is
/// `1 + ‖ν‖`; this is reported before the radius check. Otherwise ν must
/// be within 1/2. It either fails to attain, or it attains, in which case
/// the supports of ν⁺ and ν⁻ are separated by a gap C and the construction
/// runs on ν's own longest density block A.
pub fn nondense_certificate(
    nu: &Measure,
    depth: usize,
    opts: &VerifyOptions,
) -> Result<Certified<NondenseBranch>, NondenseError> {
    if nu.is_zero() {
        return Err(NondenseError::Zero);
    }
    let mu = baseline_mu();
    let distance = mu.sub(nu).tv_norm();
    let mut cert = Certificate::new("nondense_certificate");
    cert.put("nu", nu);
    cert.put("distance", Q::from(&distance));
    if nu.is_purely_atomic() {
        cert.check_eq("‖μ − ν‖ = ‖μ‖ + ‖ν‖", &distance, &(mu.tv_norm() + nu.tv_norm()));
        cert.compare("‖μ − ν‖ ≥ 1", &distance, Relation::Ge, &Scalar::one());
        return Ok(Certified {
            value: NondenseBranch::DiracFar { distance },
            certificate: cert,
        });
    }
    if distance >= Scalar::one() / int(2) {
        return Err(NondenseError::OutOfRadius(distance));
    }
    cert.check_lt("‖μ − ν‖ < 1/2", &distance, &(Scalar::one() / int(2)));
    let pos = nu.positive_support();
    let neg = nu.negative_support();
    match pos.distance(&neg) {
        Some(d) if d.is_zero() => {
            cert.check_eq("dist(supp ν⁺, supp ν⁻)", &d, &Scalar::zero());
            return Ok(Certified {
                value: NondenseBranch::NotAttaining,
                certificate: cert,
            });
        }
        Some(d) => {
            cert.compare("dist(supp ν⁺, supp ν⁻) > 0", &d, Relation::Gt, &Scalar::zero());
        }
        None => {
            cert.holds("one of ν⁺, ν⁻ vanishes", true);
        }
    }
    let zero = Scalar::zero();
    let one = Scalar::one();
    let c = nu
        .support()
        .gaps(&zero, &one)
        .into_iter()
        .fold(None::<(Scalar, Scalar)>, |best, g| match best {
            Some(b) if &b.1 - &b.0 >= &g.1 - &g.0 => Some(b),
            _ => Some(g),
        })
        .ok_or(NondenseError::NoGap)?;
    let (lo, hi, _) = crate::constructions::density_blocks(nu)
        .into_iter()
        .fold(None::<(Scalar, Scalar, Scalar)>, |best, b| match best {
            Some(x) if &x.1 - &x.0 >= &b.1 - &b.0 => Some(x),
            _ => Some(b),
        })
        .ok_or(NondenseError::NoDensityBlock)?;
    let inner = measure_nu_continuous(nu, (&lo, &hi), (&c.0, &c.1), depth, opts)?;
    cert.absorb("construction", inner.certificate);
    Ok(Certified {
        value: NondenseBranch::LacksAdjustedBs {
            a: (lo, hi),
            c,
            construction: Box::new(inner.value),
        },
        certificate: cert,
    })
}

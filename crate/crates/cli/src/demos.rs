use std::path::PathBuf;

use bsa_core::attainment::measure_attainment;
use bsa_core::bs_checker::{
    check_pair, nondense_certificate, stress_suite, verify_witness, CheckOutcome, Functional, Instance, Mode,
    NondenseBranch, Space, StressOptions, StressReport,
};
use bsa_core::constructions::{
    baseline_mu, c01_no_bsa_perturb, c0_bsa_witness, density_blocks, dirac_f_alpha, l1_phi_witness,
    l1_rnp_counterexample, l1_truncate, measure_nu_atomic, measure_nu_continuous, weak_star_approximate, RnpParams,
    VerifyOptions,
};
use bsa_core::matrix_bs::{self, Matrix, Vector};
use bsa_core::orthogonality::{
    dini, grid_oracle, is_bj_orthogonal, is_strongly_orthogonal, lambda_profile, ModelElement, SpaceModel,
    DEFAULT_GRID_RANGE, DEFAULT_GRID_STEPS,
};
use bsa_core::sampling::{self, stream};
use bsa_core::scalar::{int, rat, to_f64, Scalar, Q};
use bsa_core::spaces::{Measure, PLFunction, PiecewiseAffine, SparseSeq, StepFunction, StepNorm};
use num_traits::{One, Zero};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::input;
use crate::report::Report;
use crate::{Config, Demo, Invalid};

/// Stream reserved for drawing the functional itself; suites use streams
/// `0..n`.
const FUNCTIONAL_STREAM: u64 = u64::MAX;

fn q(x: &Scalar) -> Value {
    json!(Q::from(x))
}

fn verify_opts(cfg: &Config) -> VerifyOptions {
    VerifyOptions {
        samples: cfg.samples,
        seed: cfg.seed,
    }
}

fn stress_opts(cfg: &Config, injected: Vec<Instance>) -> StressOptions {
    StressOptions {
        n: cfg.n,
        seed: cfg.seed,
        samples: cfg.samples,
        injected,
        ..StressOptions::default()
    }
}

fn random_functional(cfg: &Config, space: Space) -> Functional {
    Functional::random(space, &mut stream(cfg.seed, FUNCTIONAL_STREAM))
}

fn stress_checks(r: &mut Report, report: &StressReport, expect_all_witnesses: bool) {
    r.check("no case violates BS ⊆ BSa", report.inclusion_violations == 0);
    if expect_all_witnesses {
        r.check(
            format!("witness in {}/{} cases", report.witnesses, report.cases.len()),
            report.witnesses == report.cases.len() && report.premise_unmet == 0,
        );
    }
}

pub fn check_orth(cfg: &Config, mode: Mode) -> Result<Report, Invalid> {
    let value = input::required(cfg)?;
    let mut r = Report::default();
    if value.get("space").is_some() {
        let instance: Instance = input::parse(value, "an instance")?;
        let outcome = check_pair(&instance, mode, &verify_opts(cfg))?;
        if let CheckOutcome::WitnessFound { witness, .. } = &outcome {
            r.check("witness lies in M_T and is annihilated by S", verify_witness(&instance, witness));
        }
        r.section("instance", json!(instance));
        r.section("mode", json!(mode));
        r.section("outcome", json!(outcome.tag()));
        r.section("evidence", outcome.evidence_json());
        return Ok(r);
    }
    let name = value
        .get("model")
        .and_then(Value::as_str)
        .ok_or_else(|| Invalid("input needs a \"model\" with \"x\" and \"y\", or an instance with \"space\"".into()))?;
    let model = SpaceModel::parse(name).ok_or_else(|| Invalid(format!("unknown model {name:?}")))?;
    let (x, y) = (value["x"].clone(), value["y"].clone());
    match model {
        SpaceModel::C0Sup | SpaceModel::L1Sum => orth_pair::<SparseSeq>(&mut r, model, x, y)?,
        SpaceModel::L1Step => orth_pair::<StepFunction>(&mut r, model, x, y)?,
        SpaceModel::LinfStep => orth_pair::<PiecewiseAffine>(&mut r, model, x, y)?,
        SpaceModel::C01Pl => orth_pair::<PLFunction>(&mut r, model, x, y)?,
        SpaceModel::TvMeasure => orth_pair::<Measure>(&mut r, model, x, y)?,
    }
    Ok(r)
}

fn orth_pair<E: ModelElement + DeserializeOwned + Serialize>(
    r: &mut Report,
    model: SpaceModel,
    x: Value,
    y: Value,
) -> Result<(), Invalid> {
    let x: E = input::parse(x, "x in the model's encoding")?;
    let y: E = input::parse(y, "y in the model's encoding")?;
    let d = dini(&x, &y, model)?;
    let bj = is_bj_orthogonal(&x, &y, model)?;
    let strong = is_strongly_orthogonal(&x, &y, model)?;
    let profile = lambda_profile(&x, &y, model)?;
    let min = profile.minimum();
    let (grid_min, grid_at) = grid_oracle(&x, &y, model, DEFAULT_GRID_RANGE, DEFAULT_GRID_STEPS)?;
    let zero = Scalar::zero();
    r.check(
        "⊥_B agrees with the profile minimizers",
        bj == (min.argmin_lo <= zero && zero <= min.argmin_hi),
    );
    r.check(
        "⊥_S agrees with the profile minimizers",
        strong == (min.argmin_lo.is_zero() && min.argmin_hi.is_zero()),
    );
    r.check("grid minimum is not below the exact minimum", grid_min >= to_f64(&min.value) - 1e-9);
    r.section("model", json!(model));
    r.section("x", json!(x));
    r.section("y", json!(y));
    r.section("dini", json!(d));
    r.section("bj", json!(bj));
    r.section("strong", json!(strong));
    r.section(
        "minimum",
        json!({"value": q(&min.value), "argmin_lo": q(&min.argmin_lo), "argmin_hi": q(&min.argmin_hi)}),
    );
    r.section("profile", json!(profile));
    r.section("grid_oracle", json!({"min": grid_min, "at": grid_at}));
    Ok(())
}

pub fn demo(cfg: &Config, name: Demo) -> Result<Report, Invalid> {
    match name {
        Demo::C0Denseness => c0_denseness(cfg),
        Demo::L1Denseness => l1_denseness(cfg),
        Demo::L1RnpNegative => l1_rnp_negative(cfg),
        Demo::MeasureEx1 => measure_ex1(cfg),
        Demo::MeasureEx2 => measure_ex2(cfg),
        Demo::DiracBs => dirac_bs(cfg),
        Demo::C01Nondense => c01_nondense(cfg),
        Demo::Weakstar => weakstar(cfg),
    }
}

fn c0_denseness(cfg: &Config) -> Result<Report, Invalid> {
    let t = match input::optional::<SparseSeq>(cfg, "a sparse sequence")? {
        Some(t) => t,
        None => match random_functional(cfg, Space::C0) {
            Functional::C0(t) => t,
            _ => unreachable!("c0 draw"),
        },
    };
    let report = stress_suite(&Functional::C0(t.clone()), &stress_opts(cfg, Vec::new()))?;
    let mut r = Report::default();
    r.section("functional", json!(t));
    stress_checks(&mut r, &report, true);
    r.check("no case falsified", report.falsified == 0);
    let mut passed = 0;
    let mut first = None;
    for case in &report.cases {
        if let Instance::C0 { t, s } = &case.instance {
            let w = c0_bsa_witness(t, s)?;
            passed += usize::from(w.certificate.passed());
            first.get_or_insert(w.certificate);
        }
    }
    r.check(
        format!("c0_bsa_witness certificates pass in {passed}/{}", report.cases.len()),
        passed == report.cases.len(),
    );
    r.section("stress", report.to_json());
    if let Some(c) = first {
        r.section("first_witness_certificate", json!(c));
    }
    Ok(r)
}

fn oriented_step(cfg: &Config) -> StepFunction {
    let mut rng = stream(cfg.seed, FUNCTIONAL_STREAM);
    loop {
        let pieces = sampling::geometric(&mut rng, 0.3, 8);
        let f = sampling::step_function(&mut rng, pieces, 4);
        if f.is_zero() {
            continue;
        }
        let m = f.norm(StepNorm::EssSup);
        return if f.values().iter().any(|v| v == &m) {
            f
        } else {
            f.scale(&-Scalar::one())
        };
    }
}

fn l1_denseness(cfg: &Config) -> Result<Report, Invalid> {
    let f = match input::optional::<StepFunction>(cfg, "a step function")? {
        Some(f) => f,
        None => oriented_step(cfg),
    };
    let delta = f.norm(StepNorm::EssSup) / int(4);
    let trunc = l1_truncate(&f, &delta)?;
    let g = trunc.value.g.clone();
    let mut r = Report::default();
    r.section("f", json!(f));
    r.section("delta", q(&delta));
    r.certificate("truncation", &trunc.certificate);
    let report = stress_suite(&Functional::L1(PiecewiseAffine::from_step(&g)), &stress_opts(cfg, Vec::new()))?;
    stress_checks(&mut r, &report, true);
    r.check("no case falsified", report.falsified == 0);
    let mut passed = 0;
    let mut first = None;
    for case in &report.cases {
        if let Instance::L1 { h, .. } = &case.instance {
            let w = l1_phi_witness(&g, h)?;
            passed += usize::from(w.certificate.passed());
            first.get_or_insert(w.certificate);
        }
    }
    r.check(
        format!("l1_phi_witness certificates pass in {passed}/{}", report.cases.len()),
        passed == report.cases.len(),
    );
    r.section("stress", report.to_json());
    if let Some(c) = first {
        r.section("first_phi_certificate", json!(c));
    }
    Ok(r)
}

fn l1_rnp_negative(cfg: &Config) -> Result<Report, Invalid> {
    let f = match input::optional::<StepFunction>(cfg, "a step function")? {
        Some(f) => f,
        None => StepFunction::new(vec![int(0), rat(1, 2), int(1)], vec![int(1), rat(1, 4)])?,
    };
    let eps = f.norm(StepNorm::EssSup) / int(2);
    let params = RnpParams {
        cantor_depth: cfg.depth,
        verify: verify_opts(cfg),
        ..RnpParams::default()
    };
    let built = l1_rnp_counterexample(&f, &eps, &params)?;
    let mut r = Report::default();
    r.section("f", json!(f));
    r.section("epsilon", q(&eps));
    r.certificate("construction", &built.certificate);
    let instance = Instance::L1 {
        g: built.value.g.clone(),
        h: built.value.h.clone(),
    };
    let outcome = check_pair(&instance, Mode::AdjustedBs, &verify_opts(cfg))?;
    r.check(
        "check_pair falsifies (g, h) from the face range",
        matches!(outcome, CheckOutcome::Falsified { inconclusive: false, .. }),
    );
    r.section("check", json!({"outcome": outcome.tag(), "evidence": outcome.evidence_json()}));
    let report = stress_suite(&Functional::L1(built.value.g.clone()), &stress_opts(cfg, vec![instance]))?;
    stress_checks(&mut r, &report, false);
    r.check(
        "injected case is falsified",
        report.cases.last().is_some_and(|c| c.adjusted.is_falsified()),
    );
    r.section("stress", report.to_json());
    Ok(r)
}

type Interval = (Scalar, Scalar);

/// Widest open gap of the support and longest atom-free density block.
fn gap_and_block(mu: &Measure) -> Result<(Interval, Interval), Invalid> {
    let c = mu
        .support()
        .gaps(&Scalar::zero(), &Scalar::one())
        .into_iter()
        .fold(None::<(Scalar, Scalar)>, |best, g| match best {
            Some(b) if &b.1 - &b.0 >= &g.1 - &g.0 => Some(b),
            _ => Some(g),
        })
        .ok_or_else(|| Invalid("μ has full support".into()))?;
    let a = density_blocks(mu)
        .into_iter()
        .fold(None::<(Scalar, Scalar, Scalar)>, |best, b| match best {
            Some(x) if &x.1 - &x.0 >= &b.1 - &b.0 => Some(x),
            _ => Some(b),
        })
        .ok_or_else(|| Invalid("μ has no density block".into()))?;
    Ok(((a.0, a.1), c))
}

fn measure_ex1(cfg: &Config) -> Result<Report, Invalid> {
    let mu = match input::optional::<Measure>(cfg, "a measure")? {
        Some(mu) => mu,
        None => Measure::from_density(StepFunction::new(vec![int(0), rat(1, 2), int(1)], vec![int(1), int(0)])?),
    };
    let (a, c) = gap_and_block(&mu)?;
    let built = measure_nu_continuous(&mu, (&a.0, &a.1), (&c.0, &c.1), cfg.depth, &verify_opts(cfg))?;
    let mut r = Report::default();
    r.section("mu", json!(mu));
    r.section("a", json!([q(&a.0), q(&a.1)]));
    r.section("c", json!([q(&c.0), q(&c.1)]));
    r.certificate("construction", &built.certificate);

    let diracs = Measure::from_atoms([(rat(1, 4), int(1)), (rat(3, 4), int(-1))])?;
    let p = c01_no_bsa_perturb(&diracs, &rat(1, 10), cfg.depth, &verify_opts(cfg))?;
    r.certificate("perturbation", &p.certificate);
    Ok(r)
}

fn measure_ex2(cfg: &Config) -> Result<Report, Invalid> {
    let (mu, c) = match input::optional::<Measure>(cfg, "a measure")? {
        Some(mu) => {
            let c = gap_and_block(&mu).map(|(_, c)| c).or_else(|_| {
                mu.support()
                    .gaps(&Scalar::zero(), &Scalar::one())
                    .into_iter()
                    .next()
                    .ok_or_else(|| Invalid("μ has full support".into()))
            })?;
            (mu, c)
        }
        None => {
            let atoms = (1..=7).map(|k| (rat(k, 8), rat(1, 4i64.pow(k as u32))));
            (Measure::from_atoms(atoms)?, (rat(3, 4), rat(7, 8)))
        }
    };
    let locations: Vec<Scalar> = mu.atoms().iter().map(|a| a.location.clone()).collect();
    let depth = cfg.depth.min(locations.len().saturating_sub(1) / 2).max(1);
    let built = measure_nu_atomic(&mu, &locations, (&c.0, &c.1), depth, &verify_opts(cfg))?;
    let mut r = Report::default();
    r.section("mu", json!(mu));
    r.section("c", json!([q(&c.0), q(&c.1)]));
    r.section("depth", json!(depth));
    r.certificate("construction", &built.certificate);
    Ok(r)
}

fn dirac_bs(cfg: &Config) -> Result<Report, Invalid> {
    let (mu, nu) = match input::optional::<Instance>(cfg, "a TV_measure instance")? {
        Some(Instance::Measure { mu, nu }) => (mu, nu),
        Some(_) => return Err(Invalid("dirac-bs needs a TV_measure instance".into())),
        None => (
            Measure::from_atoms([(rat(1, 4), int(1)), (rat(3, 4), int(-1))])?,
            Measure::from_density(StepFunction::constant(int(1))),
        ),
    };
    let w = dirac_f_alpha(&mu, &nu, &rat(1, 10))?;
    let mut r = Report::default();
    r.certificate("construction", &w.certificate);
    let instance = Instance::Measure { mu, nu };
    let outcome = check_pair(&instance, Mode::AdjustedBs, &verify_opts(cfg))?;
    r.check("check_pair finds a witness", outcome.is_witness());
    r.section("check", json!({"outcome": outcome.tag(), "evidence": outcome.evidence_json()}));
    Ok(r)
}

fn c01_nondense(cfg: &Config) -> Result<Report, Invalid> {
    let nu = input::optional::<Measure>(cfg, "a measure")?.unwrap_or_else(baseline_mu);
    let out = nondense_certificate(&nu, cfg.depth, &verify_opts(cfg))?;
    let mut r = Report::default();
    r.section("nu", json!(nu));
    r.section("branch", json!(out.value.tag()));
    match &out.value {
        NondenseBranch::NotAttaining => {
            r.check("ν does not attain", measure_attainment(&nu).is_err());
        }
        NondenseBranch::LacksAdjustedBs { a, c, .. } => {
            r.section("a", json!([q(&a.0), q(&a.1)]));
            r.section("c", json!([q(&c.0), q(&c.1)]));
        }
        NondenseBranch::DiracFar { distance } => {
            r.section("distance", q(distance));
        }
    }
    r.certificate("certificate", &out.certificate);
    Ok(r)
}

fn weakstar(cfg: &Config) -> Result<Report, Invalid> {
    let nu = input::optional::<Measure>(cfg, "a measure")?.unwrap_or_else(baseline_mu);
    let tests = vec![
        PLFunction::constant(int(1)),
        PLFunction::new(vec![int(0), int(1)], vec![int(0), int(1)])?,
        PLFunction::new(vec![int(0), rat(1, 2), int(1)], vec![int(0), int(1), int(0)])?,
    ];
    let eps = rat(1, 100);
    let w = weak_star_approximate(&nu, &tests, &eps)?;
    let mut r = Report::default();
    r.section("nu", json!(nu));
    r.section("tests", json!(tests));
    r.section("epsilon", q(&eps));
    r.certificate("approximation", &w.certificate);
    let attains = measure_attainment(&w.value).is_ok();
    r.check("approximant attains", attains);
    if attains {
        // every check on a many-atom functional builds a bump witness, so
        // the suite is sized by --samples rather than --n
        let opts = StressOptions {
            n: cfg.samples,
            ..stress_opts(cfg, Vec::new())
        };
        let report = stress_suite(&Functional::Measure(w.value.clone()), &opts)?;
        stress_checks(&mut r, &report, true);
        r.section("stress", report.to_json());
    }
    Ok(r)
}

fn parse_functional(space: Space, value: Value) -> Result<Functional, Invalid> {
    Ok(match space {
        Space::C0 => Functional::C0(input::parse(value, "a sparse sequence")?),
        Space::L1 => match serde_json::from_value::<PiecewiseAffine>(value.clone()) {
            Ok(g) => Functional::L1(g),
            Err(_) => Functional::L1(PiecewiseAffine::from_step(&input::parse::<StepFunction>(
                value,
                "a step or piecewise affine function",
            )?)),
        },
        Space::Measure => Functional::Measure(input::parse(value, "a measure")?),
    })
}

pub fn stress(cfg: &Config, space: Space, inject: &[PathBuf]) -> Result<Report, Invalid> {
    let t = match &cfg.input {
        Some(path) => parse_functional(space, input::read_value(path)?)?,
        None => random_functional(cfg, space),
    };
    let mut injected = Vec::new();
    for path in inject {
        match input::read_value(path)? {
            Value::Array(items) => {
                for item in items {
                    injected.push(input::parse(item, "an instance")?);
                }
            }
            v => injected.push(input::parse(v, "an instance")?),
        }
    }
    let report = stress_suite(&t, &stress_opts(cfg, injected))?;
    let mut r = Report::default();
    stress_checks(&mut r, &report, false);
    r.section("stress", report.to_json());
    Ok(r)
}

fn matrix(v: &Value, key: &str) -> Result<Matrix, Invalid> {
    let rows: Vec<Vec<f64>> = input::parse(v[key].clone(), &format!("\"{key}\" as an array of rows"))?;
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != n) {
        return Err(Invalid(format!("\"{key}\" has ragged rows")));
    }
    let a = Matrix::from_row_iterator(m, n, rows.into_iter().flatten());
    matrix_bs::validate(&a)?;
    Ok(a)
}

fn vector_json(x: &Vector) -> Value {
    json!(x.iter().collect::<Vec<_>>())
}

pub fn matrix_bs(cfg: &Config, tol: f64) -> Result<Report, Invalid> {
    let mut r = Report::default();
    r.section("tol", json!(tol));
    if let Some(path) = &cfg.input {
        let v = input::read_value(path)?;
        let (a, b) = (matrix(&v, "a")?, matrix(&v, "b")?);
        if a.shape() != b.shape() {
            return Err(Invalid("a and b differ in shape".into()));
        }
        let bj = matrix_bs::op_bj_orthogonal(&a, &b, tol);
        let witness = matrix_bs::bs_witness_search(&a, &b, tol)?;
        if witness.is_some() {
            r.check("a witness implies A ⊥_B B", bj);
        }
        r.section("norm_a", json!(matrix_bs::spectral_norm(&a)));
        r.section("norm_b", json!(matrix_bs::spectral_norm(&b)));
        r.section("profile", json!(matrix_bs::op_bj_profile(&a, &b, tol)));
        r.section("bj", json!(bj));
        r.section("witness", witness.as_ref().map_or(Value::Null, vector_json));
        return Ok(r);
    }
    let safe = matrix_bs::safe_direction_suite(cfg.n, cfg.seed, tol);
    r.check("witnesses imply BJ orthogonality", safe.violations == 0);
    r.section("safe_direction", json!(safe));
    // the converse is recorded, not asserted
    r.section("forward_direction", json!(matrix_bs::forward_direction_suite(cfg.n, cfg.seed, tol)));
    let convex = matrix_bs::strict_convexity_suite(cfg.n, cfg.seed, tol);
    let agree = convex.iter().filter(|c| c.agree).count();
    r.check(format!("⊥_B and ⊥_S agree in {agree}/{}", convex.len()), agree == convex.len());
    r.section("strict_convexity", json!({"pairs": convex.len(), "agree": agree}));
    Ok(r)
}

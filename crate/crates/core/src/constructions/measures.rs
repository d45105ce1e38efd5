use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{precondition, ConstructionError, VerifyOptions};
use crate::attainment::{measure_attainment, measure_face_enclosure, MeasureFace};
use crate::certificate::{Certificate, Certified, Relation};
use crate::orthogonality::{dini, SpaceModel};
use crate::sampling::stream;
use crate::scalar::{int, Q, Scalar};
use crate::spaces::{Atom, IntervalSet, Measure, StepFunction};

/// Density 1 on (0, ½) and −1 on (½, 1). Its norming set is empty: the
/// closed supports of the two parts touch at ½.
pub fn baseline_mu() -> Measure {
    let half = Scalar::new(1.into(), 2.into());
    Measure::from_density(
        StepFunction::new(vec![Scalar::zero(), half, Scalar::one()], vec![int(1), int(-1)])
            .expect("valid partition"),
    )
}

fn pow2(i: usize) -> Scalar {
    Scalar::from_integer(BigInt::one() << i)
}

fn open_interval(lo: &Scalar, hi: &Scalar) -> Result<(), ConstructionError> {
    precondition(
        &Scalar::zero() <= lo && lo < hi && hi <= &Scalar::one(),
        || format!("({lo}, {hi}) is not a nonempty interval in [0,1]"),
    )
}

/// `(γ, δ)` with the density ±`scale/(δ − γ)` on its two halves.
fn dipole(gamma: &Scalar, delta: &Scalar, scale: &Scalar) -> StepFunction {
    let mid = (gamma + delta) / int(2);
    let level = scale / (delta - gamma);
    let left = IntervalSet::single(gamma.clone(), mid.clone()).expect("inside [0,1]");
    let right = IntervalSet::single(mid, delta.clone()).expect("inside [0,1]");
    StepFunction::indicator(&left, &level).add_scaled(&StepFunction::indicator(&right, &level), &-Scalar::one())
}

/// |μ|((γ, δ)) for the open interval.
fn open_mass(mu: &Measure, lo: &Scalar, hi: &Scalar) -> Scalar {
    let closed = IntervalSet::single(lo.clone(), hi.clone()).expect("inside [0,1]");
    let ends: Scalar = mu
        .atoms()
        .iter()
        .filter(|a| &a.location == lo || &a.location == hi)
        .map(|a| a.weight.abs())
        .sum();
    mu.abs_mass_on(&closed) - ends
}

/// Checks strong orthogonality and `ν(f) < 0` on sampled norming elements.
/// The enclosure clause covers all of `M_μ` at once.
fn verify_negative_on_face(
    cert: &mut Certificate,
    mu: &Measure,
    nu: &Measure,
    face: &MeasureFace,
    opts: &VerifyOptions,
) {
    let d = dini(mu, nu, SpaceModel::TvMeasure).expect("same model");
    cert.compare("d⁻", &d.d_minus, Relation::Lt, &Scalar::zero());
    cert.compare("d⁺", &d.d_plus, Relation::Gt, &Scalar::zero());
    cert.holds("μ ⊥_S ν", d.strict());
    let canonical = face.canonical_witness();
    cert.check_lt("ν(f) < 0 for the canonical f ∈ M_μ", &nu.pair(&canonical), &Scalar::zero());
    let mut rng = stream(opts.seed, 0);
    for i in 0..opts.samples {
        let f = face.sample(&mut rng, 3);
        let in_face = face.contains(&f);
        cert.holds(format!("sample {i}: f ∈ M_μ"), in_face);
        cert.check_lt(format!("sample {i}: ν(f) < 0"), &nu.pair(&f), &Scalar::zero());
    }
    let enclosure = measure_face_enclosure(face, nu);
    cert.put("enclosure", &enclosure);
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousConstruction {
    pub nu: Measure,
    /// `(Aᵢ, Bᵢ)` for `i = 1..=depth`, consecutive from the left end of A.
    pub blocks: Vec<((Scalar, Scalar), (Scalar, Scalar))>,
    /// `A` minus all blocks.
    pub remainder: (Scalar, Scalar),
    /// Weight and location of the atom `−τδ_p` standing in for the
    /// truncated tail of the series.
    pub tail_atom: (Scalar, Scalar),
}

/// Smallest `t` in `[lo, hi]` with `∫_lo^t ρ = target`, for `ρ ≥ 0`.
fn invert_cumulative(rho: &StepFunction, lo: &Scalar, hi: &Scalar, target: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for (a, b, v) in rho.pieces() {
        if b <= lo || a >= hi {
            continue;
        }
        let a = a.max(lo);
        let b = b.min(hi);
        let piece = v * (b - a);
        if v.is_positive() && &acc + &piece >= *target {
            return a + (target - &acc) / v;
        }
        acc += piece;
    }
    hi.clone()
}

/// Measure `ν` with `μ ⊥_S ν` and `ν(f) < 0` for every `f ∈ M_μ`, built
/// from an interval `A = (α, β)` where μ has a density of constant sign and
/// no atoms, and an open interval `C = (γ, δ)` disjoint from A with
/// `|μ|(C) = 0`.
///
/// On A, `ν = Σ_{i ≤ depth} 2ⁱ(χ_{Aᵢ} − χ_{Bᵢ})μ − χ_R μ` where
/// `μ(Aᵢ) = μ(Bᵢ) = μ(A)/4ⁱ` and R is the rest of A. On C, ν is a dipole of
/// total variation `μ(R)`. The infinite series is what makes the pair
/// strongly orthogonal; at finite depth `d⁺` would be 0, so an atom
/// `−τδ_p` with `τ = μ(A)/2^depth` at a point p of R with positive density
/// replaces the tail. It keeps `ν(f) ≤ −τ` on M_μ.
pub fn measure_nu_continuous(
    mu: &Measure,
    a: (&Scalar, &Scalar),
    c: (&Scalar, &Scalar),
    depth: usize,
    opts: &VerifyOptions,
) -> Result<Certified<ContinuousConstruction>, ConstructionError> {
    let (alpha, beta) = a;
    let (gamma, delta) = c;
    open_interval(alpha, beta)?;
    open_interval(gamma, delta)?;
    precondition(beta <= gamma || delta <= alpha, || "A and C overlap".into())?;
    precondition(depth >= 1, || "depth must be at least 1".into())?;
    let (face, _) = measure_attainment(mu)?;
    precondition(
        !mu.atoms().iter().any(|at| &at.location > alpha && &at.location < beta),
        || "μ has an atom inside A".into(),
    )?;
    precondition(open_mass(mu, gamma, delta).is_zero(), || "|μ|(C) > 0".into())?;
    let rho_on_a: Vec<Scalar> = mu
        .density()
        .pieces()
        .filter(|(lo, hi, _)| *lo < beta && *hi > alpha)
        .map(|(_, _, v)| v.clone())
        .collect();
    let nonneg = rho_on_a.iter().all(|v| !v.is_negative());
    let nonpos = rho_on_a.iter().all(|v| !v.is_positive());
    precondition(nonneg || nonpos, || "density changes sign on A".into())?;
    precondition(rho_on_a.iter().any(|v| !v.is_zero()), || "density vanishes on A".into())?;
    if !nonneg {
        // M_{−μ} = −M_μ, so −ν works for μ when ν works for −μ
        let flipped = measure_nu_continuous(&mu.scale(&-Scalar::one()), a, c, depth, opts)?;
        let mut out = flipped.value;
        out.nu = out.nu.scale(&-Scalar::one());
        out.tail_atom.0 = -out.tail_atom.0.clone();
        let mut cert = Certificate::new("measure_nu_continuous");
        cert.put("negated", true);
        verify_negative_on_face(&mut cert, mu, &out.nu, &face, opts);
        cert.absorb("for −μ", flipped.certificate);
        return Ok(Certified {
            value: out,
            certificate: cert,
        });
    }

    let rho = mu.density();
    let a_set = IntervalSet::single(alpha.clone(), beta.clone()).expect("inside [0,1]");
    let mass_a = rho.integral_over(&a_set);
    let mut cursor = alpha.clone();
    let mut used = Scalar::zero();
    let mut blocks = Vec::with_capacity(depth);
    let mut weights_bp = vec![Scalar::zero()];
    let mut weights = Vec::new();
    let push = |lo: &Scalar, hi: &Scalar, w: Scalar, bp: &mut Vec<Scalar>, ws: &mut Vec<Scalar>| {
        if lo > bp.last().unwrap() {
            bp.push(lo.clone());
            ws.push(Scalar::zero());
        }
        if hi > lo {
            bp.push(hi.clone());
            ws.push(w);
        }
    };
    for i in 1..=depth {
        let share = &mass_a / pow2(2 * i);
        used += &share;
        let t1 = invert_cumulative(rho, alpha, beta, &used);
        used += &share;
        let t2 = invert_cumulative(rho, alpha, beta, &used);
        push(&cursor, &t1, pow2(i), &mut weights_bp, &mut weights);
        push(&t1, &t2, -pow2(i), &mut weights_bp, &mut weights);
        blocks.push(((cursor.clone(), t1.clone()), (t1, t2.clone())));
        cursor = t2;
    }
    push(&cursor, beta, -Scalar::one(), &mut weights_bp, &mut weights);
    if !weights_bp.last().unwrap().is_one() {
        weights_bp.push(Scalar::one());
        weights.push(Scalar::zero());
    }
    let multiplier = StepFunction::new(weights_bp, weights).expect("pieces of A");
    let remainder = (cursor.clone(), beta.clone());
    let r_set = IntervalSet::single(cursor.clone(), beta.clone()).expect("inside A");
    let mass_r = rho.integral_over(&r_set);

    let density = rho
        .combine(&multiplier, |x, y| x * y)
        .add_scaled(&dipole(gamma, delta, &mass_r), &Scalar::one());
    let truncated = Measure::from_density(density.clone());
    let tau = &mass_a / pow2(depth);
    let p = rho
        .pieces()
        .filter(|(lo, hi, v)| v.is_positive() && *hi > &cursor && *lo < beta)
        .map(|(lo, hi, _)| (lo.max(&cursor) + hi.min(beta)) / int(2))
        .next()
        .expect("R carries positive mass");
    let nu = Measure::new(
        vec![Atom {
            location: p.clone(),
            weight: -tau.clone(),
        }],
        density,
    )
    .expect("single atom");

    let mut cert = Certificate::new("measure_nu_continuous");
    for (i, ((a_lo, a_hi), (b_lo, b_hi))) in blocks.iter().enumerate() {
        let share = &mass_a / pow2(2 * (i + 1));
        let ai = IntervalSet::single(a_lo.clone(), a_hi.clone()).expect("inside A");
        let bi = IntervalSet::single(b_lo.clone(), b_hi.clone()).expect("inside A");
        cert.check_eq(format!("μ(A_{})", i + 1), &rho.integral_over(&ai), &share);
        cert.check_eq(format!("μ(B_{})", i + 1), &rho.integral_over(&bi), &share);
    }
    cert.compare("μ(R) > 0", &mass_r, Relation::Gt, &Scalar::zero());
    let bare = dini(mu, &truncated, SpaceModel::TvMeasure).expect("same model");
    cert.put("truncated_d_plus", Q::from(&bare.d_plus));
    verify_negative_on_face(&mut cert, mu, &nu, &face, opts);
    let enclosure = measure_face_enclosure(&face, &nu);
    cert.check_le("sup of ν over M_μ ≤ −τ", &enclosure.hi, &-&tau);
    cert.put("mu", mu);
    cert.put("nu", &nu);
    cert.put("tau", Q::from(&tau));
    Ok(Certified {
        value: ContinuousConstruction {
            nu,
            blocks,
            remainder,
            tail_atom: (-tau, p),
        },
        certificate: cert,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtomicConstruction {
    pub nu: Measure,
    pub z: Scalar,
    /// `(xᵢ, yᵢ)` for `i = 1..=depth`.
    pub pairs: Vec<(Scalar, Scalar)>,
    /// Factor applied to the coefficients `2^{−i}` so that
    /// `max{μ({xᵢ}), μ({yᵢ})} ≤ κ/4ⁱ`.
    pub kappa: Scalar,
}

/// Measure built from atoms of μ of one sign: `z = locations[0]` and
/// `2·depth` further atoms paired as `(xᵢ, yᵢ)`,
/// `ν = Σ κ2^{−i}(δ_{xᵢ} − δ_{yᵢ}) − μ({z})δ_z + dipole on C`.
///
/// Every `f ∈ M_μ` gives `ν(f) < 0`. Strong orthogonality relies on the
/// infinite tail: with finitely many pairs `d⁺ = 0`, and the certificate
/// records that clause as failed. No finite atomic ν can pass both checks,
/// since purely atomic measures with finitely many atoms have the adjusted
/// property.
pub fn measure_nu_atomic(
    mu: &Measure,
    locations: &[Scalar],
    c: (&Scalar, &Scalar),
    depth: usize,
    opts: &VerifyOptions,
) -> Result<Certified<AtomicConstruction>, ConstructionError> {
    let (gamma, delta) = c;
    open_interval(gamma, delta)?;
    precondition(depth >= 1, || "depth must be at least 1".into())?;
    precondition(locations.len() > 2 * depth, || {
        format!("need at least {} atoms, got {}", 2 * depth + 1, locations.len())
    })?;
    let weights: Vec<Scalar> = locations.iter().map(|t| mu.atom_weight(t)).collect();
    precondition(weights.iter().all(|w| !w.is_zero()), || "a listed location is not an atom of μ".into())?;
    let positive = weights.iter().all(|w| w.is_positive());
    precondition(positive || weights.iter().all(|w| w.is_negative()), || {
        "listed atoms do not share a sign".into()
    })?;
    precondition(
        !locations.iter().any(|t| t > gamma && t < delta),
        || "C contains a listed atom".into(),
    )?;
    precondition(open_mass(mu, gamma, delta).is_zero(), || "|μ|(C) > 0".into())?;
    let (face, _) = measure_attainment(mu)?;
    if !positive {
        let flipped = measure_nu_atomic(&mu.scale(&-Scalar::one()), locations, c, depth, opts)?;
        let mut out = flipped.value;
        out.nu = out.nu.scale(&-Scalar::one());
        let mut cert = Certificate::new("measure_nu_atomic");
        cert.put("negated", true);
        verify_negative_on_face(&mut cert, mu, &out.nu, &face, opts);
        cert.absorb("for −μ", flipped.certificate);
        return Ok(Certified {
            value: out,
            certificate: cert,
        });
    }

    let z = locations[0].clone();
    let mu_z = weights[0].clone();
    let mut rest: Vec<(Scalar, Scalar)> = locations[1..]
        .iter()
        .cloned()
        .zip(weights[1..].iter().cloned())
        .map(|(t, w)| (w, t))
        .collect();
    rest.sort();
    rest.truncate(2 * depth);
    rest.reverse();
    let pairs: Vec<(Scalar, Scalar)> = rest.chunks(2).map(|p| (p[0].1.clone(), p[1].1.clone())).collect();
    let kappa = rest
        .chunks(2)
        .enumerate()
        .map(|(i, p)| &p[0].0 * pow2(2 * (i + 1)))
        .fold(Scalar::one(), |acc, v| acc.max(v));

    let mut atoms = vec![Atom {
        location: z.clone(),
        weight: -mu_z.clone(),
    }];
    for (i, (x, y)) in pairs.iter().enumerate() {
        let coef = &kappa / pow2(i + 1);
        atoms.push(Atom {
            location: x.clone(),
            weight: coef.clone(),
        });
        atoms.push(Atom {
            location: y.clone(),
            weight: -coef,
        });
    }
    let nu = Measure::new(atoms, dipole(gamma, delta, &mu_z)).expect("distinct locations");

    let mut cert = Certificate::new("measure_nu_atomic");
    for (i, p) in rest.chunks(2).enumerate() {
        let bound = &kappa / pow2(2 * (i + 1));
        cert.check_le(format!("max μ(x_{0}), μ(y_{0}) ≤ κ/4^{0}", i + 1), &p[0].0, &bound);
    }
    verify_negative_on_face(&mut cert, mu, &nu, &face, opts);
    cert.put("mu", mu);
    cert.put("nu", &nu);
    cert.put("kappa", Q::from(&kappa));
    Ok(Certified {
        value: AtomicConstruction { nu, z, pairs, kappa },
        certificate: cert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attainment::AttainmentError;
    use crate::scalar::rat;
    use crate::spaces::PLFunction;

    #[test]
    fn baseline_facts() {
        let mu = baseline_mu();
        assert_eq!(mu.tv_norm(), int(1));
        assert_eq!(mu.pair(&PLFunction::constant(int(1))), int(0));
        assert_eq!(mu.pair(&PLFunction::constant(int(-1))), int(0));
        assert!(matches!(measure_attainment(&mu), Err(AttainmentError::NotAttaining(_))));
    }

    fn half_lebesgue() -> Measure {
        Measure::from_density(StepFunction::new(vec![int(0), rat(1, 2), int(1)], vec![int(1), int(0)]).unwrap())
    }

    #[test]
    fn continuous_example() {
        let mu = half_lebesgue();
        let r = measure_nu_continuous(&mu, (&int(0), &rat(1, 2)), (&rat(1, 2), &int(1)), 2, &VerifyOptions::default())
            .unwrap();
        assert!(r.certificate.passed(), "{}", r.certificate);
        let b = &r.value.blocks;
        assert_eq!(b[0], ((int(0), rat(1, 8)), (rat(1, 8), rat(1, 4))));
        assert_eq!(b[1], ((rat(1, 4), rat(9, 32)), (rat(9, 32), rat(5, 16))));
        assert_eq!(r.value.remainder, (rat(5, 16), rat(1, 2)));
        let d = dini(&mu, &r.value.nu, SpaceModel::TvMeasure).unwrap();
        // d⁺ = τ and d⁻ = −2μ(R) − τ
        assert_eq!(d.d_plus, rat(1, 8));
        assert_eq!(d.d_minus, -rat(3, 8) - rat(1, 8));
        assert_eq!(r.certificate.data["truncated_d_plus"], serde_json::json!({"num": "0", "den": "1"}));
    }

    #[test]
    fn continuous_negated_and_rejections() {
        let mu = half_lebesgue().scale(&int(-2));
        let r = measure_nu_continuous(&mu, (&int(0), &rat(1, 2)), (&rat(1, 2), &int(1)), 3, &VerifyOptions::default())
            .unwrap();
        assert!(r.certificate.passed(), "{}", r.certificate);

        let lebesgue = Measure::from_density(StepFunction::constant(int(1)));
        let err = measure_nu_continuous(
            &lebesgue,
            (&int(0), &rat(1, 2)),
            (&rat(1, 2), &int(1)),
            2,
            &VerifyOptions::default(),
        );
        assert!(matches!(err, Err(ConstructionError::PreconditionFailed(m)) if m.contains("|μ|(C)")));
    }

    #[test]
    fn atomic_example_fails_only_strictness() {
        let mu = Measure::from_atoms((1..=7).map(|k| (rat(k, 8), Scalar::new(1.into(), BigInt::from(4).pow(k as u32)))))
            .unwrap();
        let locs: Vec<Scalar> = (1..=7).map(|k| rat(k, 8)).collect();
        let r = measure_nu_atomic(&mu, &locs, (&rat(3, 4), &rat(7, 8)), 3, &VerifyOptions::default()).unwrap();
        let failed: Vec<&str> = r.certificate.failures().map(|c| c.label.as_str()).collect();
        assert_eq!(failed, vec!["d⁺", "μ ⊥_S ν"]);
        let d = dini(&mu, &r.value.nu, SpaceModel::TvMeasure).unwrap();
        assert_eq!(d.d_plus, int(0));
    }

    #[test]
    fn atomic_needs_enough_atoms() {
        let mu = Measure::from_atoms([(rat(1, 4), int(1)), (rat(1, 2), int(1))]).unwrap();
        let locs = [rat(1, 4), rat(1, 2)];
        assert!(measure_nu_atomic(&mu, &locs, (&rat(3, 4), &int(1)), 1, &VerifyOptions::default()).is_err());
    }
}

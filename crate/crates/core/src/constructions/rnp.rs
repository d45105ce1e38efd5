use num_traits::{One, Signed, Zero};

use super::{precondition, ConstructionError, VerifyOptions};
use crate::attainment::{l1_affine_attainment, l1_face_range};
use crate::certificate::{Certificate, Certified, Relation};
use crate::constructions::fat_cantor;
use crate::orthogonality::{dini, lambda_profile, SpaceModel};
use crate::sampling::stream;
use crate::scalar::{int, sgn, Q, Scalar};
use crate::spaces::{IntervalSet, PiecewiseAffine, StepFunction, StepNorm};

#[derive(Clone, Debug, PartialEq)]
pub struct RnpParams {
    /// Index of the piece of `f` carrying the ramp; defaults to the first
    /// piece with `|f| = ‖f‖`.
    pub segment: Option<usize>,
    pub cantor_depth: usize,
    /// Number of λ values in `[−1, 1]` at which the lower bound
    /// `‖g + λh‖ ≥ (1 + |λ|)‖g‖` is checked.
    pub lambda_checks: usize,
    pub verify: VerifyOptions,
}

impl Default for RnpParams {
    fn default() -> Self {
        Self {
            segment: None,
            cantor_depth: 4,
            lambda_checks: 101,
            verify: VerifyOptions::default(),
        }
    }
}

/// A norm attaining `g` near `f` and an `h` with `g ⊥_S h` such that
/// `∫hφ = ‖g‖` for every `φ ∈ M_g`.
#[derive(Clone, Debug, PartialEq)]
pub struct RnpConstruction {
    pub g: PiecewiseAffine,
    pub h: StepFunction,
    /// The selected piece `E_k` of `f`.
    pub segment: (Scalar, Scalar),
    /// Left half of `E_k`, where `g` is pushed below the maximum.
    pub e0: (Scalar, Scalar),
    pub t0: Scalar,
    pub eta: Scalar,
    /// Fat Cantor set inside the ramp `[t₀, t₀ + η]`.
    pub cantor: IntervalSet,
    /// `‖f‖·sgn(f)` on `E_k`.
    pub z_k: Scalar,
}

/// For a step function `f` and `0 < ε < ‖f‖`, builds `g` with
/// `‖g − f‖∞ ≤ ε/4` and `h` such that `g ⊥_S h` while no norming element of
/// `g` annihilates `h`.
///
/// On `E_k = [a, b]`, `g` equals `z_k` on the right half, decreases linearly
/// from `z_k` to `(1 − η)z_k` on the ramp `[a, a + η]` and equals
/// `(‖f‖ − ε/4)·sgn(z_k)` on the rest of the left half. Elsewhere
/// `g = (1 − ε/(4‖f‖))·f`. `h` agrees with `g` off the ramp and takes the
/// values `−z_k` on the fat Cantor set `C` and `+z_k` on the ramp minus `C`.
/// Because `C` contains a neighbourhood of `a` from the right at every
/// finite depth, this labelling makes `‖g + λh‖ ≥ (1 + |λ|)|z_k|` hold for
/// all λ.
pub fn l1_rnp_counterexample(
    f: &StepFunction,
    eps: &Scalar,
    params: &RnpParams,
) -> Result<Certified<RnpConstruction>, ConstructionError> {
    precondition(!f.is_zero(), || "f must be nonzero".into())?;
    let m = f.norm(StepNorm::EssSup);
    precondition(eps.is_positive() && eps < &m, || format!("need 0 < ε < ‖f‖ = {m}"))?;
    precondition(params.cantor_depth >= 1, || "cantor depth must be at least 1".into())?;
    let pieces: Vec<(Scalar, Scalar, Scalar)> =
        f.pieces().map(|(a, b, v)| (a.clone(), b.clone(), v.clone())).collect();
    let k = match params.segment {
        Some(k) => {
            precondition(k < pieces.len() && pieces[k].2.abs() == m, || {
                format!("piece {k} does not reach ‖f‖")
            })?;
            k
        }
        None => pieces.iter().position(|p| p.2.abs() == m).expect("some piece attains the max"),
    };
    let (a, b, y_k) = pieces[k].clone();
    let s = sgn(&y_k);
    let z_k = &m * &s;
    let mid = (&a + &b) / int(2);
    let t0 = a.clone();
    let eta = (eps / (int(4) * &m)).min((&mid - &a) / int(2));
    let ramp_end = &t0 + &eta;
    let z0 = (&m - eps / int(4)) * &s;
    let shrink = Scalar::one() - eps / (int(4) * &m);

    let cantor = fat_cantor(&t0, &ramp_end, &(Scalar::one() / int(2)), params.cantor_depth);

    // g and h piece by piece
    let mut g_bp = vec![Scalar::zero()];
    let mut g_lim = Vec::new();
    let mut h_bp = vec![Scalar::zero()];
    let mut h_val = Vec::new();
    for (i, (lo, hi, y)) in pieces.iter().enumerate() {
        if i != k {
            let v = y * &shrink;
            g_bp.push(hi.clone());
            g_lim.push((v.clone(), v.clone()));
            h_bp.push(hi.clone());
            h_val.push(v);
            continue;
        }
        debug_assert_eq!(lo, &a);
        g_bp.push(ramp_end.clone());
        g_lim.push((z_k.clone(), (Scalar::one() - &eta) * &z_k));
        let mut cursor = t0.clone();
        for (c_lo, c_hi) in cantor.intervals() {
            if c_lo > &cursor {
                h_bp.push(c_lo.clone());
                h_val.push(z_k.clone());
            }
            h_bp.push(c_hi.clone());
            h_val.push(-z_k.clone());
            cursor = c_hi.clone();
        }
        if cursor < ramp_end {
            h_bp.push(ramp_end.clone());
            h_val.push(z_k.clone());
        }
        for (end, v) in [(&mid, &z0), (&b, &z_k)] {
            g_bp.push(end.clone());
            g_lim.push((v.clone(), v.clone()));
            h_bp.push(end.clone());
            h_val.push(v.clone());
        }
    }
    let g = PiecewiseAffine::new(g_bp, g_lim).expect("refinement of f's partition");
    let h = StepFunction::new(h_bp, h_val).expect("refinement of f's partition");

    let mut cert = Certificate::new("l1_rnp_counterexample");
    let dist = g.add_scaled(&PiecewiseAffine::from_step(f), &-Scalar::one()).ess_sup();
    cert.check_le("‖g − f‖ ≤ ε/4", &dist, &(eps / int(4)));
    cert.check_lt("‖g − f‖ < ε", &dist, eps);
    cert.check_eq("‖g‖ = ‖f‖", &g.ess_sup(), &m);
    let gh = PiecewiseAffine::from_step(&h);
    let d = dini(&g, &gh, SpaceModel::LinfStep).expect("same model");
    cert.check_eq("d⁺ = |z_k|", &d.d_plus, &m);
    cert.check_eq("d⁻ = −|z_k|", &d.d_minus, &-&m);
    cert.holds("g ⊥_S h (d⁻ < 0 < d⁺)", d.strict());
    let profile = lambda_profile(&g, &gh, SpaceModel::LinfStep).expect("same model");
    let min = profile.minimum();
    cert.check_eq("profile minimum = ‖g‖", &min.value, &m);
    cert.holds("profile minimiser is unique at 0", min.argmin_lo.is_zero() && min.argmin_hi.is_zero());
    let n = params.lambda_checks.max(2);
    let mut worst = None::<Scalar>;
    for j in 0..n {
        let lambda = Scalar::new((2 * j as i64 - (n as i64 - 1)).into(), (n as i64 - 1).into());
        let norm = g.add_scaled(&gh, &lambda).ess_sup();
        let slack = norm - (Scalar::one() + lambda.abs()) * &m;
        if worst.as_ref().is_none_or(|w| &slack < w) {
            worst = Some(slack);
        }
    }
    cert.compare(
        format!("min over {n} λ of ‖g + λh‖ − (1 + |λ|)|z_k|"),
        &worst.unwrap(),
        Relation::Ge,
        &Scalar::zero(),
    );

    let face = l1_affine_attainment(&g)?;
    let right_half = IntervalSet::single(mid.clone(), b.clone()).expect("piece in [0,1]");
    cert.holds("plateau of g is E_k ∖ E₀", face.plateau() == right_half);
    let mut rng = stream(params.verify.seed, 0);
    for i in 0..params.verify.samples {
        let phi = face.sample(&mut rng);
        let ok = face.contains(&phi)
            && phi.level_set(|v| !v.is_zero()).difference(&right_half).measure().is_zero()
            && h.pair(&phi) == m
            && g.pair(&phi) == m;
        cert.holds(format!("sample {i}: φ ∈ M_g on E_k ∖ E₀ with ∫hφ = ∫gφ = ‖g‖"), ok);
    }
    let e0 = IntervalSet::single(a.clone(), mid.clone()).expect("piece in [0,1]");
    let on_e0 = StepFunction::indicator(&e0, &(&s / (&mid - &a)));
    cert.check_lt("φ on E₀ pairs below ‖g‖", &g.pair(&on_e0), &m);
    let range = l1_face_range(&face, &h);
    cert.holds("0 ∉ {∫hφ : φ ∈ M_g}", !range.contains_zero());

    cert.put("f", f);
    cert.put("epsilon", Q::from(eps));
    cert.put("g", &g);
    cert.put("h", &h);
    cert.put("eta", Q::from(&eta));
    cert.put("cantor", &cantor);
    cert.put("face_range", &range);
    Ok(Certified {
        value: RnpConstruction {
            g,
            h,
            segment: (a.clone(), b),
            e0: (a, mid),
            t0,
            eta,
            cantor,
            z_k,
        },
        certificate: cert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn worked_example() {
        let f = StepFunction::new(vec![int(0), rat(1, 2), int(1)], vec![int(1), rat(1, 4)]).unwrap();
        let r = l1_rnp_counterexample(&f, &rat(1, 2), &RnpParams::default()).unwrap();
        assert!(r.certificate.passed(), "{}", r.certificate);
        assert_eq!(r.value.eta, rat(1, 8));
        assert_eq!(r.value.g.value_at(&rat(3, 4)), rat(1, 4) * rat(7, 8));
    }

    #[test]
    fn negative_maximum() {
        let f = StepFunction::new(vec![int(0), rat(1, 3), int(1)], vec![rat(1, 2), int(-2)]).unwrap();
        let r = l1_rnp_counterexample(&f, &rat(1, 3), &RnpParams::default()).unwrap();
        assert!(r.certificate.passed(), "{}", r.certificate);
        assert_eq!(r.value.z_k, int(-2));
    }

    #[test]
    fn rejects_large_epsilon() {
        let f = StepFunction::constant(int(1));
        assert!(l1_rnp_counterexample(&f, &int(1), &RnpParams::default()).is_err());
    }
}

use num_traits::{One, Signed, Zero};

use super::{precondition, ConstructionError};
use crate::attainment::l1_functional_attainment;
use crate::certificate::{Certificate, Certified};
use crate::orthogonality::{is_strongly_orthogonal, SpaceModel};
use crate::scalar::{int, Q, Scalar};
use crate::spaces::{IntervalSet, StepFunction, StepNorm};

/// Output of [`l1_truncate`].
#[derive(Clone, Debug, PartialEq)]
pub struct Truncation {
    pub g: StepFunction,
    /// `{g = ‖g‖}`.
    pub plateau: IntervalSet,
    /// `‖f − g‖∞`.
    pub distance: Scalar,
    /// Every value off the plateau satisfies `|g| ≤ ‖g‖ − gap`.
    pub gap: Scalar,
}

/// Clips `f` to a function with a flat top of positive measure.
///
/// With `M = ‖f‖∞`: values above `M − δ` become `M`, values below
/// `−M + δ` become `−M + δ`, the rest is unchanged. When `f = −M` on a set
/// of positive measure the lower clip is moved to `−M + δ/2` so that
/// `‖f − g‖ < δ` stays strict; the gap below the plateau is then `δ/2`.
pub fn l1_truncate(f: &StepFunction, delta: &Scalar) -> Result<Certified<Truncation>, ConstructionError> {
    precondition(!f.is_zero(), || "f must be nonzero".into())?;
    let m = f.norm(StepNorm::EssSup);
    precondition(delta.is_positive() && delta < &m, || {
        format!("need 0 < δ < ‖f‖ = {m}, got δ = {delta}")
    })?;
    let top = &m - delta;
    precondition(f.values().iter().any(|v| v > &top), || {
        "{f > ‖f‖ − δ} is null; apply to −f".into()
    })?;
    let floor_hit = f.values().iter().any(|v| v == &-&m);
    let gap = if floor_hit { delta / int(2) } else { delta.clone() };
    let floor = -&m + &gap;
    let g = f.map(|v| {
        if v > &top {
            m.clone()
        } else if v < &floor {
            floor.clone()
        } else {
            v.clone()
        }
    });
    let plateau = g.level_set(|v| v == &m);
    let distance = f.add_scaled(&g, &-Scalar::one()).norm(StepNorm::EssSup);

    let mut cert = Certificate::new("l1_truncate");
    cert.check_lt("‖f − g‖ < δ", &distance, delta);
    cert.check_eq("‖g‖ = ‖f‖", &g.norm(StepNorm::EssSup), &m);
    cert.compare("σ(plateau) > 0", &plateau.measure(), crate::certificate::Relation::Gt, &Scalar::zero());
    let off_max = g
        .values()
        .iter()
        .filter(|v| *v != &m)
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(Scalar::zero);
    cert.check_le("|g| ≤ ‖g‖ − gap off the plateau", &off_max, &(&m - &gap));
    cert.put("f", f);
    cert.put("delta", Q::from(delta));
    cert.put("g", &g);
    cert.put("plateau", &plateau);
    Ok(Certified {
        value: Truncation {
            g,
            plateau,
            distance,
            gap,
        },
        certificate: cert,
    })
}

/// Unit-norm `φ` in `M_g` with `∫hφ = 0`, for `g ⊥_S h` in L∞.
///
/// Splits the plateau `{|g| = ‖g‖}` into `Φ⁺` and `Φ⁻` by the sign of
/// `sgn(g)·h` and puts constant mass on each side so the two halves of
/// `∫hφ` cancel.
pub fn l1_phi_witness(g: &StepFunction, h: &StepFunction) -> Result<Certified<StepFunction>, ConstructionError> {
    let face = l1_functional_attainment(g)?;
    let strong = is_strongly_orthogonal(g, h, SpaceModel::LinfStep).unwrap_or(false);
    precondition(strong, || "g is not strongly orthogonal to h".into())?;

    // (a, b, sgn(g), sgn(g)·h) on the plateau refined by h
    let mut parts: Vec<(Scalar, Scalar, Scalar, Scalar)> = Vec::new();
    for (set, s) in [(&face.positive, Scalar::one()), (&face.negative, -Scalar::one())] {
        for (a, b) in set.intervals() {
            let mut cuts = vec![a.clone()];
            cuts.extend(h.breakpoints().iter().filter(|t| *t > a && *t < b).cloned());
            cuts.push(b.clone());
            for w in cuts.windows(2) {
                let v = &s * h.value_at(&((&w[0] + &w[1]) / int(2)));
                parts.push((w[0].clone(), w[1].clone(), s.clone(), v));
            }
        }
    }
    let (mut h_plus, mut h_minus) = (Scalar::zero(), Scalar::zero());
    let (mut s_plus, mut s_minus) = (Scalar::zero(), Scalar::zero());
    for (a, b, _, v) in &parts {
        let len = b - a;
        if v.is_positive() {
            h_plus += v * &len;
            s_plus += len;
        } else if v.is_negative() {
            h_minus -= v * &len;
            s_minus += len;
        }
    }
    precondition(s_plus.is_positive(), || "Φ⁺ is null".into())?;
    precondition(s_minus.is_positive(), || "Φ⁻ is null".into())?;
    let denom = &h_plus * &s_minus + &h_minus * &s_plus;
    let on_plus = &h_minus / &denom;
    let on_minus = &h_plus / &denom;

    let mut bp = vec![Scalar::zero()];
    let mut vals = Vec::new();
    parts.sort();
    for (a, b, s, v) in &parts {
        if a > bp.last().unwrap() {
            vals.push(Scalar::zero());
            bp.push(a.clone());
        }
        let level = if v.is_positive() {
            s * &on_plus
        } else if v.is_negative() {
            s * &on_minus
        } else {
            Scalar::zero()
        };
        vals.push(level);
        bp.push(b.clone());
    }
    if !bp.last().unwrap().is_one() {
        vals.push(Scalar::zero());
        bp.push(Scalar::one());
    }
    let phi = StepFunction::new(bp, vals).expect("sub-pieces of a partition");

    let mut cert = Certificate::new("l1_phi_witness");
    cert.check_eq("‖φ‖₁ = 1", &phi.norm(StepNorm::L1), &Scalar::one());
    cert.check_eq("∫gφ = ‖g‖", &g.pair(&phi), &g.norm(StepNorm::EssSup));
    cert.check_eq("∫hφ = 0", &h.pair(&phi), &Scalar::zero());
    cert.put("g", g);
    cert.put("h", h);
    cert.put("phi", &phi);
    cert.put("H_plus", Q::from(&h_plus));
    cert.put("H_minus", Q::from(&h_minus));
    Ok(Certified {
        value: phi,
        certificate: cert,
    })
}

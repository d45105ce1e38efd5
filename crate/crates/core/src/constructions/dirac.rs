use num_traits::{One, Signed, Zero};

use super::{precondition, ConstructionError};
use crate::certificate::{Certificate, Certified};
use crate::scalar::{int, sgn, Q, Scalar};
use crate::spaces::{IntervalSet, Measure, PLFunction};

/// Output of [`dirac_f_alpha`].
#[derive(Clone, Debug, PartialEq)]
pub struct DiracWitness {
    pub f: PLFunction,
    pub alpha: Scalar,
    /// Half-width of the bump around each atom of μ.
    pub radius: Scalar,
    /// Where the correction term equals ±1.
    pub plateau: IntervalSet,
    /// `ν(Σ sgn(aₖ)hₖ)` and `ν(q)`.
    pub c0: Scalar,
    pub c1: Scalar,
}

const MAX_HALVINGS: usize = 48;

/// Norming element of a finitely atomic `μ = Σ aₖδ_{xₖ}` annihilating `ν`.
///
/// `f_α = Σ sgn(aₖ)hₖ + α·q` where `hₖ` is the hat of height 1 and
/// half-width r at `xₖ` and q is a PL function vanishing on the closed
/// bumps that follows the sign of ν elsewhere (±1 at ν's atoms, ±1 on each
/// density piece inset by 2r, linear in between). Supports are disjoint, so
/// `|f_α| ≤ 1` for `|α| ≤ 1` and `μ(f_α) = ‖μ‖`. α solves
/// `ν(f_α) = c₀ + αc₁ = 0`; r is halved until `|c₀ − base| < ε'` and
/// `c₁ > tail − 3ε'`, which forces `|α| < 1`. Here
/// `base = Σ sgn(aₖ)ν({xₖ})`, `tail = |ν|([0,1] ∖ {xₖ})` and
/// `ε' = min(ε, (tail − |base|)/5)`.
pub fn dirac_f_alpha(mu: &Measure, nu: &Measure, eps: &Scalar) -> Result<Certified<DiracWitness>, ConstructionError> {
    precondition(!mu.is_zero(), || "μ must be nonzero".into())?;
    precondition(mu.is_purely_atomic(), || "μ must be purely atomic".into())?;
    precondition(eps.is_positive(), || "ε must be positive".into())?;
    let xs: Vec<(Scalar, Scalar)> = mu.atoms().iter().map(|a| (a.location.clone(), sgn(&a.weight))).collect();
    let base: Scalar = xs.iter().map(|(x, s)| s * nu.atom_weight(x)).sum();
    let on_atoms: Scalar = xs.iter().map(|(x, _)| nu.atom_weight(x).abs()).sum();
    let tail = nu.tv_norm() - on_atoms;
    precondition(base.abs() < tail, || {
        format!("|Σ sgn(a_k)ν({{x_k}})| = {} is not below |ν|(rest) = {tail}", base.abs())
    })?;
    let margin = eps.clone().min((&tail - base.abs()) / int(5));

    let mut features: Vec<Scalar> = vec![Scalar::zero(), Scalar::one()];
    features.extend(xs.iter().map(|(x, _)| x.clone()));
    features.extend(nu.atoms().iter().map(|a| a.location.clone()));
    features.extend(nu.density().breakpoints().iter().cloned());
    features.sort();
    features.dedup();
    let min_gap = features.windows(2).map(|w| &w[1] - &w[0]).min().expect("at least two features");
    let mut r = min_gap / int(8);

    for _ in 0..MAX_HALVINGS {
        let hats = bumps(&xs, &r);
        let (q, plateau) = correction(&xs, nu, &features, &r);
        let c0 = nu.pair(&hats);
        let c1 = nu.pair(&q);
        if (&c0 - &base).abs() < margin && c1 > &tail - int(3) * &margin {
            let alpha = -&c0 / &c1;
            let f = hats.add_scaled(&q, &alpha);
            let mut cert = Certificate::new("dirac_f_alpha");
            cert.check_lt("|α| < 1", &alpha.abs(), &Scalar::one());
            cert.check_eq("ν(f_α) = 0", &nu.pair(&f), &Scalar::zero());
            cert.check_eq("μ(f_α) = ‖μ‖", &mu.pair(&f), &mu.tv_norm());
            cert.check_le("‖f_α‖∞ ≤ 1", &f.sup_norm(), &Scalar::one());
            cert.put("mu", mu);
            cert.put("nu", nu);
            cert.put("f", &f);
            cert.put("alpha", Q::from(&alpha));
            cert.put("radius", Q::from(&r));
            cert.put("margin", Q::from(&margin));
            return Ok(Certified {
                value: DiracWitness {
                    f,
                    alpha,
                    radius: r,
                    plateau,
                    c0,
                    c1,
                },
                certificate: cert,
            });
        }
        r /= int(2);
    }
    Err(ConstructionError::NoSolution(format!(
        "margins not reached after {MAX_HALVINGS} halvings (ε' = {margin})"
    )))
}

fn bumps(xs: &[(Scalar, Scalar)], r: &Scalar) -> PLFunction {
    let mut pts: Vec<(Scalar, Scalar)> = Vec::new();
    for (x, s) in xs {
        pts.push((x.clone(), s.clone()));
        for t in [x - r, x + r] {
            if t >= Scalar::zero() && t <= Scalar::one() {
                pts.push((t, Scalar::zero()));
            }
        }
    }
    for end in [Scalar::zero(), Scalar::one()] {
        if !pts.iter().any(|(t, _)| t == &end) {
            pts.push((end, Scalar::zero()));
        }
    }
    PLFunction::through(pts).expect("points in [0,1]")
}

/// The sign-following function q and the set where |q| = 1.
fn correction(xs: &[(Scalar, Scalar)], nu: &Measure, features: &[Scalar], r: &Scalar) -> (PLFunction, IntervalSet) {
    let mut pts: Vec<(Scalar, Scalar)> = Vec::new();
    let mut flat: Vec<(Scalar, Scalar)> = Vec::new();
    for (x, _) in xs {
        for t in [x - r, x.clone(), x + r] {
            if t >= Scalar::zero() && t <= Scalar::one() {
                pts.push((t, Scalar::zero()));
            }
        }
    }
    for a in nu.atoms() {
        if !xs.iter().any(|(x, _)| x == &a.location) {
            pts.push((a.location.clone(), sgn(&a.weight)));
            flat.push((a.location.clone(), a.location.clone()));
        }
    }
    let inset = r * int(2);
    for w in features.windows(2) {
        let mid = (&w[0] + &w[1]) / int(2);
        let s = sgn(&nu.density().value_at(&mid));
        if s.is_zero() {
            continue;
        }
        let (lo, hi) = (&w[0] + &inset, &w[1] - &inset);
        pts.push((lo.clone(), s.clone()));
        pts.push((hi.clone(), s));
        flat.push((lo, hi));
    }
    if pts.is_empty() {
        pts.push((Scalar::zero(), Scalar::zero()));
    }
    (
        PLFunction::through(pts).expect("points in [0,1]"),
        IntervalSet::new(flat).expect("points in [0,1]"),
    )
}

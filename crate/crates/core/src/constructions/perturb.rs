use num_traits::{One, Signed, Zero};

use super::{measure_nu_continuous, precondition, ConstructionError, VerifyOptions};
use crate::attainment::measure_attainment;
use crate::certificate::{Certificate, Certified};
use crate::scalar::{int, Q, Scalar};
use crate::spaces::{IntervalSet, Measure, StepFunction};

/// Output of [`c01_no_bsa_perturb`].
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    pub nu: Measure,
    /// Interval where the new measure has a density of constant sign.
    pub a: (Scalar, Scalar),
    /// Open interval of zero variation.
    pub c: (Scalar, Scalar),
}

/// Maximal open intervals with constant nonzero density and no atoms
/// inside, as `(lo, hi, value)`.
pub fn density_blocks(nu: &Measure) -> Vec<(Scalar, Scalar, Scalar)> {
    let mut out = Vec::new();
    for (lo, hi, v) in nu.density().pieces() {
        if v.is_zero() {
            continue;
        }
        let mut cuts = vec![lo.clone()];
        cuts.extend(
            nu.atoms()
                .iter()
                .map(|a| a.location.clone())
                .filter(|t| t > lo && t < hi),
        );
        cuts.push(hi.clone());
        for w in cuts.windows(2) {
            out.push((w[0].clone(), w[1].clone(), v.clone()));
        }
    }
    out
}

fn longest(blocks: Vec<(Scalar, Scalar, Scalar)>) -> Option<(Scalar, Scalar, Scalar)> {
    let mut best: Option<(Scalar, Scalar, Scalar)> = None;
    for b in blocks {
        if best.as_ref().is_none_or(|x| &b.1 - &b.0 > &x.1 - &x.0) {
            best = Some(b);
        }
    }
    best
}

/// A norm attaining ν' within ε of ν that lacks the adjusted property.
///
/// C is the middle third of the widest gap in the support of ν; without a
/// gap, an interval of mass at most ε/4 is cut out of the longest density
/// block. A is the longest atom-free density block of the result; without
/// one, a block of mass ε/4 with the sign of the heaviest atom is placed
/// right next to it. The certificate of [`measure_nu_continuous`] for
/// (ν', A, C) is attached.
pub fn c01_no_bsa_perturb(
    nu: &Measure,
    eps: &Scalar,
    depth: usize,
    opts: &VerifyOptions,
) -> Result<Certified<Perturbation>, ConstructionError> {
    precondition(eps.is_positive(), || "ε must be positive".into())?;
    measure_attainment(nu)?;
    let zero = Scalar::zero();
    let one = Scalar::one();
    let mut nu2 = nu.clone();

    let gap = nu
        .support()
        .gaps(&zero, &one)
        .into_iter()
        .fold(None::<(Scalar, Scalar)>, |best, g| match best {
            Some(b) if &b.1 - &b.0 >= &g.1 - &g.0 => Some(b),
            _ => Some(g),
        });
    let c = match gap {
        Some((lo, hi)) => {
            let third = (&hi - &lo) / int(3);
            (&lo + &third, hi - third)
        }
        None => {
            let (lo, hi, v) = longest(density_blocks(nu)).expect("full support needs a density");
            let width = ((&hi - &lo) / int(3)).min(eps / (int(4) * v.abs()));
            let mid = (&lo + &hi) / int(2);
            let c = (&mid - &width / int(2), &mid + &width / int(2));
            let cut = IntervalSet::single(c.0.clone(), c.1.clone()).expect("inside the block");
            nu2 = nu2.add_scaled(&Measure::from_density(StepFunction::indicator(&cut, &v)), &-Scalar::one());
            c
        }
    };

    let a = match longest(density_blocks(&nu2)) {
        Some((lo, hi, _)) => (lo, hi),
        None => {
            let heaviest = nu2
                .atoms()
                .iter()
                .fold(None::<&crate::spaces::Atom>, |best, at| match best {
                    Some(b) if b.weight.abs() >= at.weight.abs() => Some(b),
                    _ => Some(at),
                })
                .expect("nonzero atomic measure");
            let p = heaviest.location.clone();
            let mut right_room = &one - &p;
            let mut left_room = p.clone();
            let others = nu2
                .atoms()
                .iter()
                .map(|at| at.location.clone())
                .filter(|t| t != &p)
                .chain([c.0.clone(), c.1.clone()]);
            for t in others {
                if t > p {
                    right_room = right_room.min(&t - &p);
                } else {
                    left_room = left_room.min(&p - &t);
                }
            }
            let (lo, hi) = if right_room >= left_room {
                let len = right_room / int(4);
                (p.clone(), &p + len)
            } else {
                let len = left_room / int(4);
                (&p - len, p.clone())
            };
            let level = eps / (int(4) * (&hi - &lo)) * crate::scalar::sgn(&heaviest.weight);
            let block = IntervalSet::single(lo.clone(), hi.clone()).expect("inside [0,1]");
            nu2 = nu2.add_scaled(&Measure::from_density(StepFunction::indicator(&block, &level)), &Scalar::one());
            (lo, hi)
        }
    };

    let mut cert = Certificate::new("c01_no_bsa_perturb");
    let dist = nu.sub(&nu2).tv_norm();
    cert.check_lt("‖ν − ν'‖ < ε", &dist, eps);
    cert.holds("ν' attains", measure_attainment(&nu2).is_ok());
    let inner = measure_nu_continuous(&nu2, (&a.0, &a.1), (&c.0, &c.1), depth, opts)?;
    cert.absorb("ν' lacks the adjusted property", inner.certificate);
    cert.put("nu", nu);
    cert.put("nu_prime", &nu2);
    cert.put("distance", Q::from(&dist));
    Ok(Certified {
        value: Perturbation { nu: nu2, a, c },
        certificate: cert,
    })
}

//! Norm attainment of functionals and the faces M_T of norming elements.
//!
//! * c0 functionals (elements of l1) are finitely supported here and always
//!   attain: x must equal sgn(bᵢ) on supp b and is free in [-1,1] elsewhere.
//! * An L∞ function g, acting on L1, attains iff its plateau
//!   {|g| = ‖g‖∞} has positive measure; M_g is the set of unit-norm L1
//!   functions living on the plateau with the sign of g.
//! * A measure ν, acting on C[0,1], attains iff the closed supports of ν⁺
//!   and ν⁻ are at positive distance; M_ν is the set of f with ‖f‖ = 1,
//!   f = 1 on supp ν⁺ and f = -1 on supp ν⁻.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::sampling::{dyadic, dyadic_open_unit};
use crate::scalar::{int, sgn, Scalar, Q};
use crate::spaces::{IntervalSet, Measure, PLFunction, PiecewiseAffine, SeqNorm, SparseSeq, StepFunction, StepNorm};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AttainmentError {
    #[error("the zero functional is excluded")]
    ZeroFunctional,
    #[error("functional does not attain its norm: {0}")]
    NotAttaining(String),
}

/// Closed interval `[lo, hi]` of values. When `attained` is false the
/// interval is only an outer enclosure of the true image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeInterval {
    pub lo: Scalar,
    pub hi: Scalar,
    pub attained: bool,
}

impl RangeInterval {
    pub fn contains(&self, v: &Scalar) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Scalar::zero())
    }

    /// 0 lies strictly inside.
    pub fn zero_in_interior(&self) -> bool {
        self.lo.is_negative() && self.hi.is_positive()
    }
}

impl Serialize for RangeInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            lo: Q,
            hi: Q,
            attained: bool,
        }
        Repr {
            lo: Q::from(&self.lo),
            hi: Q::from(&self.hi),
            attained: self.attained,
        }
        .serialize(s)
    }
}

/// M_b for a c0 functional b.
#[derive(Clone, Debug, PartialEq)]
pub struct C0Face {
    functional: SparseSeq,
    /// `(index, sign)` forced on supp b.
    pub fixed: Vec<(usize, Scalar)>,
}

impl C0Face {
    pub fn functional(&self) -> &SparseSeq {
        &self.functional
    }

    pub fn contains(&self, x: &SparseSeq) -> bool {
        x.norm(SeqNorm::Sup) <= Scalar::one() && self.functional.pair(x) == self.functional.norm(SeqNorm::Sum)
    }

    /// Random element: forced signs on supp b, random dyadics in [-1,1] on
    /// `free` (indices outside supp b are used, others ignored).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, free: &[usize]) -> SparseSeq {
        let mut entries = self.fixed.clone();
        for &i in free {
            if self.functional.get(i).is_zero() {
                entries.push((i, dyadic(rng, 6)));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        entries.retain(|(i, _)| seen.insert(*i));
        SparseSeq::from_entries(entries).expect("indices start at 1")
    }
}

/// M_g for an L∞ function g acting on L1.
#[derive(Clone, Debug, PartialEq)]
pub struct PlateauFace {
    functional: PiecewiseAffine,
    /// Plateau part where g = ‖g‖.
    pub positive: IntervalSet,
    /// Plateau part where g = -‖g‖.
    pub negative: IntervalSet,
}

impl PlateauFace {
    pub fn functional(&self) -> &PiecewiseAffine {
        &self.functional
    }

    pub fn plateau(&self) -> IntervalSet {
        self.positive.union(&self.negative)
    }

    /// Sign of g on the plateau piece containing `t`.
    fn sign_at(&self, t: &Scalar) -> Scalar {
        if self.positive.contains(t) {
            Scalar::one()
        } else {
            -Scalar::one()
        }
    }

    pub fn contains(&self, phi: &StepFunction) -> bool {
        phi.norm(StepNorm::L1) == Scalar::one() && self.functional.pair(phi) == self.functional.ess_sup()
    }

    /// Random element: a nonnegative step density on a random nonempty
    /// selection of plateau sub-pieces, signed by g and normalised.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> StepFunction {
        let mut parts: Vec<(Scalar, Scalar, Scalar)> = Vec::new();
        for (set, sign) in [(&self.positive, Scalar::one()), (&self.negative, -Scalar::one())] {
            for (a, b) in set.intervals() {
                let cut = a + (b - a) * dyadic_open_unit(rng, 4);
                parts.push((a.clone(), cut.clone(), sign.clone()));
                parts.push((cut, b.clone(), sign.clone()));
            }
        }
        parts.sort();
        let mut weights: Vec<Scalar> = parts
            .iter()
            .map(|_| {
                if rng.gen_bool(0.7) {
                    dyadic_open_unit(rng, 3)
                } else {
                    Scalar::zero()
                }
            })
            .collect();
        if weights.iter().all(|w| w.is_zero()) {
            let k = rng.gen_range(0..weights.len());
            weights[k] = Scalar::one();
        }
        let total: Scalar = parts.iter().zip(&weights).map(|((a, b, _), w)| w * (b - a)).sum();
        let mut bp = vec![Scalar::zero()];
        let mut vals = Vec::new();
        for ((a, b, sign), w) in parts.iter().zip(&weights) {
            if a > bp.last().unwrap() {
                vals.push(Scalar::zero());
                bp.push(a.clone());
            }
            vals.push(sign * w / &total);
            bp.push(b.clone());
        }
        if !bp.last().unwrap().is_one() {
            vals.push(Scalar::zero());
            bp.push(Scalar::one());
        }
        StepFunction::new(bp, vals).expect("sub-pieces of a partition")
    }

    /// Unit-norm element concentrated on the plateau piece `[a, b]`.
    pub fn concentrated(&self, a: &Scalar, b: &Scalar) -> StepFunction {
        let mid = (a + b) / int(2);
        let set = IntervalSet::single(a.clone(), b.clone()).expect("plateau piece");
        StepFunction::indicator(&set, &(self.sign_at(&mid) / (b - a)))
    }
}

/// M_ν for a measure ν acting on C[0,1].
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureFace {
    functional: Measure,
    /// Closed support of ν⁺ (f must be 1 there).
    pub positive: IntervalSet,
    /// Closed support of ν⁻ (f must be -1 there).
    pub negative: IntervalSet,
}

impl MeasureFace {
    pub fn functional(&self) -> &Measure {
        &self.functional
    }

    pub fn contains(&self, f: &PLFunction) -> bool {
        f.sup_norm() == Scalar::one() && self.functional.pair(f) == self.functional.tv_norm()
    }

    /// Components of P ∪ N with the value f must take on each.
    fn anchored(&self) -> Vec<(Scalar, Scalar, Scalar)> {
        let mut comps: Vec<(Scalar, Scalar, Scalar)> = self
            .positive
            .intervals()
            .iter()
            .map(|(a, b)| (a.clone(), b.clone(), Scalar::one()))
            .chain(
                self.negative
                    .intervals()
                    .iter()
                    .map(|(a, b)| (a.clone(), b.clone(), -Scalar::one())),
            )
            .collect();
        comps.sort();
        comps
    }

    /// f = ±1 on the supports, linear across gaps, constant beyond them.
    pub fn canonical_witness(&self) -> PLFunction {
        PLFunction::through(
            self.anchored()
                .into_iter()
                .flat_map(|(a, b, s)| [(a, s.clone()), (b, s)]),
        )
        .expect("supports lie in [0,1]")
    }

    /// Random element: the forced values on the supports and `extra` random
    /// nodes with random dyadic values in each gap and in the two end
    /// regions.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, extra: usize) -> PLFunction {
        let comps = self.anchored();
        let mut pts: Vec<(Scalar, Scalar)> = Vec::new();
        let push_free = |lo: &Scalar, hi: &Scalar, pts: &mut Vec<(Scalar, Scalar)>, rng: &mut R| {
            if lo >= hi {
                return;
            }
            for _ in 0..extra {
                let t = lo + (hi - lo) * dyadic_open_unit(rng, 5);
                pts.push((t, dyadic(rng, 5)));
            }
        };
        let mut cursor = Scalar::zero();
        let mut first = true;
        for (a, b, s) in &comps {
            if first || a > &cursor {
                push_free(&cursor, a, &mut pts, rng);
            }
            first = false;
            pts.push((a.clone(), s.clone()));
            pts.push((b.clone(), s.clone()));
            cursor = b.clone();
        }
        push_free(&cursor, &Scalar::one(), &mut pts, rng);
        if !pts.iter().any(|(t, _)| t.is_zero()) {
            pts.push((Scalar::zero(), dyadic(rng, 5)));
        }
        if !pts.iter().any(|(t, _)| t.is_one()) {
            pts.push((Scalar::one(), dyadic(rng, 5)));
        }
        PLFunction::through(pts).expect("points lie in [0,1]")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FaceDescriptor {
    C0(C0Face),
    Plateau(PlateauFace),
    Measure(MeasureFace),
}

pub fn c0_attainment(b: &SparseSeq) -> Result<C0Face, AttainmentError> {
    if b.is_zero() {
        return Err(AttainmentError::ZeroFunctional);
    }
    Ok(C0Face {
        functional: b.clone(),
        fixed: b.entries().map(|(i, v)| (i, sgn(v))).collect(),
    })
}

pub fn l1_functional_attainment(g: &StepFunction) -> Result<PlateauFace, AttainmentError> {
    l1_affine_attainment(&PiecewiseAffine::from_step(g))
}

/// Attainment for a piecewise affine L∞ function. Sloped pieces never
/// contribute to the plateau.
pub fn l1_affine_attainment(g: &PiecewiseAffine) -> Result<PlateauFace, AttainmentError> {
    if g.is_zero() {
        return Err(AttainmentError::ZeroFunctional);
    }
    let sup = g.ess_sup();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (a, b, (l, r)) in g.pieces() {
        if l == r && l.abs() == sup {
            if l.is_positive() {
                pos.push((a.clone(), b.clone()));
            } else {
                neg.push((a.clone(), b.clone()));
            }
        }
    }
    if pos.is_empty() && neg.is_empty() {
        return Err(AttainmentError::NotAttaining(
            "the plateau {|g| = ess sup} is null".into(),
        ));
    }
    Ok(PlateauFace {
        functional: g.clone(),
        positive: IntervalSet::new(pos).expect("pieces lie in [0,1]"),
        negative: IntervalSet::new(neg).expect("pieces lie in [0,1]"),
    })
}

/// Attainment for a measure, with the canonical norming function verified
/// exactly.
pub fn measure_attainment(nu: &Measure) -> Result<(MeasureFace, PLFunction), AttainmentError> {
    if nu.is_zero() {
        return Err(AttainmentError::ZeroFunctional);
    }
    let p = nu.positive_support();
    let n = nu.negative_support();
    if let Some(d) = p.distance(&n) {
        if d.is_zero() {
            return Err(AttainmentError::NotAttaining(
                "closed supports of the positive and negative parts meet".into(),
            ));
        }
    }
    let face = MeasureFace {
        functional: nu.clone(),
        positive: p,
        negative: n,
    };
    let witness = face.canonical_witness();
    debug_assert!(face.contains(&witness));
    Ok((face, witness))
}

/// `{S(x) : x ∈ M_T}` for c0: `[base - tail, base + tail]` with
/// `base = Σ_{supp T} sgn(Tᵢ)Sᵢ` and `tail = Σ_{i ∉ supp T} |Sᵢ|`.
pub fn c0_face_range(t: &SparseSeq, s: &SparseSeq) -> Result<RangeInterval, AttainmentError> {
    if t.is_zero() {
        return Err(AttainmentError::ZeroFunctional);
    }
    let (base, tail) = c0_base_tail(t, s);
    Ok(RangeInterval {
        lo: &base - &tail,
        hi: base + tail,
        attained: true,
    })
}

pub fn c0_base_tail(t: &SparseSeq, s: &SparseSeq) -> (Scalar, Scalar) {
    let mut base = Scalar::zero();
    let mut tail = Scalar::zero();
    for (i, v) in s.entries() {
        let ti = t.get(i);
        if ti.is_zero() {
            tail += v.abs();
        } else {
            base += sgn(&ti) * v;
        }
    }
    (base, tail)
}

/// `{∫hφ : φ ∈ M_g}`: the convex hull of the values `sgn(g)·h` over the
/// plateau pieces. Each endpoint is attained by concentrating φ on one piece.
pub fn l1_face_range(face: &PlateauFace, h: &StepFunction) -> RangeInterval {
    let vals = plateau_values(face, h);
    RangeInterval {
        lo: vals.iter().map(|(_, _, v)| v).min().cloned().expect("nonempty plateau"),
        hi: vals.iter().map(|(_, _, v)| v).max().cloned().expect("nonempty plateau"),
        attained: true,
    }
}

/// `(a, b, sgn(g)·h)` for each piece of the common refinement of the
/// plateau and h.
pub fn plateau_values(face: &PlateauFace, h: &StepFunction) -> Vec<(Scalar, Scalar, Scalar)> {
    let mut out = Vec::new();
    for (set, s) in [(&face.positive, Scalar::one()), (&face.negative, -Scalar::one())] {
        for (a, b) in set.intervals() {
            let mut cuts: Vec<Scalar> = vec![a.clone()];
            cuts.extend(h.breakpoints().iter().filter(|t| *t > a && *t < b).cloned());
            cuts.push(b.clone());
            for w in cuts.windows(2) {
                let mid = (&w[0] + &w[1]) / int(2);
                out.push((w[0].clone(), w[1].clone(), &s * h.value_at(&mid)));
            }
        }
    }
    out.sort();
    out
}

/// Outer enclosure of `{s(f) : f ∈ M_ν}`. On the supports f is forced to
/// ±1; elsewhere |f| ≤ 1, so the remaining mass of |s| bounds the slack.
/// When 0 lies outside the enclosure no element of M_ν annihilates s.
pub fn measure_face_enclosure(face: &MeasureFace, s: &Measure) -> RangeInterval {
    let forced_set = face.positive.union(&face.negative);
    let forced = s.mass_on(&face.positive) - s.mass_on(&face.negative);
    let free = s.tv_norm() - s.abs_mass_on(&forced_set);
    RangeInterval {
        lo: &forced - &free,
        hi: forced + free,
        attained: false,
    }
}

//! Birkhoff-James and strong orthogonality via one-sided derivatives of the
//! convex map λ ↦ ‖x + λy‖.
//!
//! Every norm handled here becomes, after putting `x` and `y` on a common
//! partition, either a weighted sum `Σ wᵢ|xᵢ + λyᵢ|` or a maximum
//! `maxᵢ |xᵢ + λyᵢ|` over finitely many coordinates. Both are convex and
//! piecewise linear in λ, so 0 is a minimiser iff `d⁻ ≤ 0 ≤ d⁺` and the
//! unique minimiser iff `d⁻ < 0 < d⁺`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{int, one, sgn, to_f64, Scalar, Q};
use crate::spaces::{merge_points, Measure, PLFunction, PiecewiseAffine, SparseSeq, StepFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceModel {
    /// c0 with the sup norm.
    C0Sup,
    /// l1 with the sum norm.
    L1Sum,
    /// L1[0,1] on step functions.
    #[serde(rename = "L1_step")]
    L1Step,
    /// L∞[0,1] on step or piecewise affine functions.
    #[serde(rename = "Linf_step")]
    LinfStep,
    /// C[0,1] on continuous piecewise linear functions.
    #[serde(rename = "C01_pl")]
    C01Pl,
    /// M[0,1] with the total variation norm.
    #[serde(rename = "TV_measure")]
    TvMeasure,
}

impl SpaceModel {
    pub const ALL: [SpaceModel; 6] = [
        SpaceModel::C0Sup,
        SpaceModel::L1Sum,
        SpaceModel::L1Step,
        SpaceModel::LinfStep,
        SpaceModel::C01Pl,
        SpaceModel::TvMeasure,
    ];

    pub fn kind(self) -> NormKind {
        match self {
            SpaceModel::L1Sum | SpaceModel::L1Step | SpaceModel::TvMeasure => NormKind::WeightedSum,
            SpaceModel::C0Sup | SpaceModel::LinfStep | SpaceModel::C01Pl => NormKind::Max,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceModel::C0Sup => "c0_sup",
            SpaceModel::L1Sum => "l1_sum",
            SpaceModel::L1Step => "L1_step",
            SpaceModel::LinfStep => "Linf_step",
            SpaceModel::C01Pl => "C01_pl",
            SpaceModel::TvMeasure => "TV_measure",
        }
    }

    pub fn parse(s: &str) -> Option<SpaceModel> {
        SpaceModel::ALL.into_iter().find(|m| m.name() == s)
    }
}

impl fmt::Display for SpaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    WeightedSum,
    Max,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrthError {
    #[error("{element} elements have no {model} norm")]
    ModelMismatch {
        model: SpaceModel,
        element: &'static str,
    },
    #[error("one-sided derivatives are taken at a nonzero x")]
    ZeroVector,
    #[error("the direction y must be nonzero")]
    ZeroDirection,
}

/// One coordinate of a pair put on a common partition.
#[derive(Clone, Debug, PartialEq)]
pub struct Coord {
    pub x: Scalar,
    pub y: Scalar,
    pub weight: Scalar,
}

/// `x` and `y` as coordinate tables such that
/// `‖x + λy‖ = Σ w|xᵢ + λyᵢ|` (weighted sum) or `max |xᵢ + λyᵢ|` (max).
#[derive(Clone, Debug, PartialEq)]
pub struct AlignedPair {
    pub kind: NormKind,
    pub coords: Vec<Coord>,
}

fn coord(x: Scalar, y: Scalar, weight: Scalar) -> Coord {
    Coord { x, y, weight }
}

impl AlignedPair {
    pub fn norm_at(&self, lambda: &Scalar) -> Scalar {
        let vals = self
            .coords
            .iter()
            .map(|c| (&c.x + lambda * &c.y).abs() * &c.weight);
        match self.kind {
            NormKind::WeightedSum => vals.sum(),
            NormKind::Max => vals.max().unwrap_or_else(Scalar::zero),
        }
    }

    pub fn norm_at_f64(&self, lambda: f64) -> f64 {
        let vals = self
            .coords
            .iter()
            .map(|c| (to_f64(&c.x) + lambda * to_f64(&c.y)).abs() * to_f64(&c.weight));
        match self.kind {
            NormKind::WeightedSum => vals.sum(),
            NormKind::Max => vals.fold(0.0, f64::max),
        }
    }

    pub fn x_norm(&self) -> Scalar {
        self.norm_at(&Scalar::zero())
    }

    fn x_is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.x.is_zero())
    }

    fn y_is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.y.is_zero())
    }

    pub fn dini(&self) -> Result<DiniPair, OrthError> {
        if self.x_is_zero() {
            return Err(OrthError::ZeroVector);
        }
        Ok(match self.kind {
            NormKind::WeightedSum => {
                let mut aligned = Scalar::zero();
                let mut free = Scalar::zero();
                for c in &self.coords {
                    if c.x.is_zero() {
                        free += c.y.abs() * &c.weight;
                    } else {
                        aligned += sgn(&c.x) * &c.y * &c.weight;
                    }
                }
                DiniPair {
                    d_minus: &aligned - &free,
                    d_plus: aligned + free,
                }
            }
            NormKind::Max => {
                let norm = self.x_norm();
                let active: Vec<Scalar> = self
                    .coords
                    .iter()
                    .filter(|c| c.x.abs() == norm)
                    .map(|c| sgn(&c.x) * &c.y)
                    .collect();
                DiniPair {
                    d_minus: active.iter().min().cloned().expect("nonempty active set"),
                    d_plus: active.iter().max().cloned().expect("nonempty active set"),
                }
            }
        })
    }

    pub fn profile(&self) -> Result<LambdaProfile, OrthError> {
        if self.y_is_zero() {
            return Err(OrthError::ZeroDirection);
        }
        Ok(match self.kind {
            NormKind::WeightedSum => self.sum_profile(),
            NormKind::Max => self.max_profile(),
        })
    }

    /// Sweep over the kinks `-xᵢ/yᵢ` from left to right. Left of every kink
    /// the term `w|x + λy|` equals `-w·sgn(y)(x + λy)`; crossing its kink
    /// flips the sign.
    fn sum_profile(&self) -> LambdaProfile {
        let mut slope = Scalar::zero();
        let mut intercept = Scalar::zero();
        let mut kinks: Vec<(Scalar, Scalar, Scalar)> = Vec::new();
        for c in &self.coords {
            if c.y.is_zero() {
                intercept += c.x.abs() * &c.weight;
                continue;
            }
            let s = sgn(&c.y);
            slope -= c.y.abs() * &c.weight;
            intercept -= &s * &c.x * &c.weight;
            kinks.push((
                -&c.x / &c.y,
                c.y.abs() * &c.weight * int(2),
                s * &c.x * &c.weight * int(2),
            ));
        }
        kinks.sort_by(|a, b| a.0.cmp(&b.0));
        let mut breakpoints = Vec::new();
        let mut pieces = vec![AffinePiece {
            slope: slope.clone(),
            intercept: intercept.clone(),
        }];
        let mut i = 0;
        while i < kinks.len() {
            let at = kinks[i].0.clone();
            while i < kinks.len() && kinks[i].0 == at {
                slope += &kinks[i].1;
                intercept += &kinks[i].2;
                i += 1;
            }
            breakpoints.push(at);
            pieces.push(AffinePiece {
                slope: slope.clone(),
                intercept: intercept.clone(),
            });
        }
        LambdaProfile { breakpoints, pieces }
    }

    /// Upper envelope of the lines `±(xᵢ + λyᵢ)`.
    fn max_profile(&self) -> LambdaProfile {
        let mut lines: Vec<AffinePiece> = self
            .coords
            .iter()
            .flat_map(|c| {
                [
                    AffinePiece {
                        slope: c.y.clone(),
                        intercept: c.x.clone(),
                    },
                    AffinePiece {
                        slope: -c.y.clone(),
                        intercept: -c.x.clone(),
                    },
                ]
            })
            .collect();
        lines.sort_by(|a, b| a.slope.cmp(&b.slope).then(b.intercept.cmp(&a.intercept)));
        lines.dedup_by(|b, a| a.slope == b.slope);
        let meet = |a: &AffinePiece, b: &AffinePiece| (&a.intercept - &b.intercept) / (&b.slope - &a.slope);
        let mut hull: Vec<AffinePiece> = Vec::new();
        for line in lines {
            while hull.len() >= 2 {
                let n = hull.len();
                if meet(&hull[n - 2], &line) <= meet(&hull[n - 2], &hull[n - 1]) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(line);
        }
        let breakpoints = hull.windows(2).map(|w| meet(&w[0], &w[1])).collect();
        LambdaProfile {
            breakpoints,
            pieces: hull,
        }
    }
}

/// One-sided derivatives of λ ↦ ‖x + λy‖ at λ = 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiniPair {
    #[serde(with = "q_serde")]
    pub d_minus: Scalar,
    #[serde(with = "q_serde")]
    pub d_plus: Scalar,
}

impl DiniPair {
    pub fn bj(&self) -> bool {
        !self.d_minus.is_positive() && !self.d_plus.is_negative()
    }

    pub fn strict(&self) -> bool {
        self.d_minus.is_negative() && self.d_plus.is_positive()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffinePiece {
    #[serde(with = "q_serde")]
    pub slope: Scalar,
    #[serde(with = "q_serde")]
    pub intercept: Scalar,
}

mod q_serde {
    use serde::{Serialize, Serializer};

    use crate::scalar::{Scalar, Q};

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        Q::from(x).serialize(s)
    }
}

impl AffinePiece {
    pub fn eval(&self, lambda: &Scalar) -> Scalar {
        &self.intercept + &self.slope * lambda
    }
}

/// Exact description of λ ↦ ‖x + λy‖: `pieces[0]` applies left of
/// `breakpoints[0]`, `pieces[i]` between `breakpoints[i-1]` and
/// `breakpoints[i]`, and the last piece right of the last breakpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaProfile {
    #[serde(serialize_with = "ser_points")]
    pub breakpoints: Vec<Scalar>,
    pub pieces: Vec<AffinePiece>,
}

fn ser_points<S: serde::Serializer>(v: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(Q::from))
}

/// Minimum of a profile, attained on `[argmin_lo, argmin_hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileMinimum {
    pub value: Scalar,
    pub argmin_lo: Scalar,
    pub argmin_hi: Scalar,
}

impl LambdaProfile {
    pub fn eval(&self, lambda: &Scalar) -> Scalar {
        let idx = self
            .breakpoints
            .iter()
            .position(|b| lambda < b)
            .unwrap_or(self.breakpoints.len());
        self.pieces[idx].eval(lambda)
    }

    pub fn is_convex(&self) -> bool {
        self.pieces.windows(2).all(|w| w[0].slope <= w[1].slope)
    }

    /// Minimum over ℝ. Requires the outermost slopes to point upwards, which
    /// holds whenever y ≠ 0.
    pub fn minimum(&self) -> ProfileMinimum {
        let first_up = self
            .pieces
            .iter()
            .position(|p| !p.slope.is_negative())
            .expect("profile grows at +infinity");
        let piece = &self.pieces[first_up];
        if piece.slope.is_zero() {
            let lo = self.breakpoints[first_up - 1].clone();
            let hi = self.breakpoints[first_up].clone();
            ProfileMinimum {
                value: piece.eval(&lo),
                argmin_lo: lo,
                argmin_hi: hi,
            }
        } else {
            let at = self.breakpoints[first_up - 1].clone();
            ProfileMinimum {
                value: piece.eval(&at),
                argmin_lo: at.clone(),
                argmin_hi: at,
            }
        }
    }
}

/// Elements that can be put on a common coordinate table with another
/// element of the same type under a given norm.
pub trait ModelElement {
    fn align(&self, other: &Self, model: SpaceModel) -> Result<AlignedPair, OrthError>;
    fn is_zero_element(&self) -> bool;
}

fn mismatch(model: SpaceModel, element: &'static str) -> OrthError {
    OrthError::ModelMismatch { model, element }
}

impl ModelElement for SparseSeq {
    fn align(&self, other: &Self, model: SpaceModel) -> Result<AlignedPair, OrthError> {
        if !matches!(model, SpaceModel::C0Sup | SpaceModel::L1Sum) {
            return Err(mismatch(model, "sequence"));
        }
        let mut idx: Vec<usize> = self.support().chain(other.support()).collect();
        idx.sort_unstable();
        idx.dedup();
        Ok(AlignedPair {
            kind: model.kind(),
            coords: idx
                .into_iter()
                .map(|i| coord(self.get(i), other.get(i), one()))
                .collect(),
        })
    }

    fn is_zero_element(&self) -> bool {
        self.is_zero()
    }
}

impl ModelElement for StepFunction {
    fn align(&self, other: &Self, model: SpaceModel) -> Result<AlignedPair, OrthError> {
        match model {
            SpaceModel::L1Step => {
                let bp = merge_points(self.breakpoints(), other.breakpoints());
                let a = self.values_on(&bp);
                let b = other.values_on(&bp);
                Ok(AlignedPair {
                    kind: NormKind::WeightedSum,
                    coords: bp
                        .windows(2)
                        .zip(a.into_iter().zip(b))
                        .map(|(w, (x, y))| coord(x, y, &w[1] - &w[0]))
                        .collect(),
                })
            }
            SpaceModel::LinfStep => {
                PiecewiseAffine::from_step(self).align(&PiecewiseAffine::from_step(other), model)
            }
            _ => Err(mismatch(model, "step function")),
        }
    }

    fn is_zero_element(&self) -> bool {
        self.is_zero()
    }
}

impl ModelElement for PiecewiseAffine {
    /// Only the L∞ norm is piecewise linear in λ for affine pieces; the ess
    /// sup of an affine piece is the larger endpoint limit, so both limits
    /// become coordinates.
    fn align(&self, other: &Self, model: SpaceModel) -> Result<AlignedPair, OrthError> {
        if model != SpaceModel::LinfStep {
            return Err(mismatch(model, "piecewise affine function"));
        }
        let bp = merge_points(self.breakpoints(), other.breakpoints());
        let a = self.limits_on(&bp);
        let b = other.limits_on(&bp);
        let one = one();
        let mut coords = Vec::with_capacity(2 * a.len());
        for ((xl, xr), (yl, yr)) in a.into_iter().zip(b) {
            if xl == xr && yl == yr {
                coords.push(coord(xl, yl, one.clone()));
            } else {
                coords.push(coord(xl, yl, one.clone()));
                coords.push(coord(xr, yr, one.clone()));
            }
        }
        Ok(AlignedPair {
            kind: NormKind::Max,
            coords,
        })
    }

    fn is_zero_element(&self) -> bool {
        self.is_zero()
    }
}

impl ModelElement for PLFunction {
    fn align(&self, other: &Self, model: SpaceModel) -> Result<AlignedPair, OrthError> {
        if model != SpaceModel::C01Pl {
            return Err(mismatch(model, "PL function"));
        }
        let nodes = merge_points(self.nodes(), other.nodes());
        let one = one();
        Ok(AlignedPair {
            kind: NormKind::Max,
            coords: nodes
                .iter()
                .map(|t| coord(self.eval(t), other.eval(t), one.clone()))
                .collect(),
        })
    }

    fn is_zero_element(&self) -> bool {
        self.sup_norm().is_zero()
    }
}

impl ModelElement for Measure {
    fn align(&self, other: &Self, model: SpaceModel) -> Result<AlignedPair, OrthError> {
        if model != SpaceModel::TvMeasure {
            return Err(mismatch(model, "measure"));
        }
        let one = one();
        let mut locs: Vec<&Scalar> = self
            .atoms()
            .iter()
            .chain(other.atoms())
            .map(|a| &a.location)
            .collect();
        locs.sort();
        locs.dedup();
        let mut coords: Vec<Coord> = locs
            .into_iter()
            .map(|t| coord(self.atom_weight(t), other.atom_weight(t), one.clone()))
            .collect();
        let bp = merge_points(self.density().breakpoints(), other.density().breakpoints());
        let a = self.density().values_on(&bp);
        let b = other.density().values_on(&bp);
        coords.extend(
            bp.windows(2)
                .zip(a.into_iter().zip(b))
                .map(|(w, (x, y))| coord(x, y, &w[1] - &w[0])),
        );
        Ok(AlignedPair {
            kind: NormKind::WeightedSum,
            coords,
        })
    }

    fn is_zero_element(&self) -> bool {
        self.is_zero()
    }
}

/// Norm of `x` in `model`.
pub fn model_norm<E: ModelElement>(x: &E, model: SpaceModel) -> Result<Scalar, OrthError> {
    Ok(x.align(x, model)?.x_norm())
}

/// `‖x + λy‖` computed directly from the aligned coordinates.
pub fn norm_of_combination<E: ModelElement>(
    x: &E,
    y: &E,
    lambda: &Scalar,
    model: SpaceModel,
) -> Result<Scalar, OrthError> {
    Ok(x.align(y, model)?.norm_at(lambda))
}

pub fn dini<E: ModelElement>(x: &E, y: &E, model: SpaceModel) -> Result<DiniPair, OrthError> {
    x.align(y, model)?.dini()
}

/// `x ⊥_B y`: ‖x‖ ≤ ‖x + λy‖ for every λ.
pub fn is_bj_orthogonal<E: ModelElement>(x: &E, y: &E, model: SpaceModel) -> Result<bool, OrthError> {
    let pair = x.align(y, model)?;
    if x.is_zero_element() || y.is_zero_element() {
        return Ok(true);
    }
    Ok(pair.dini()?.bj())
}

/// `x ⊥_S y`: ‖x‖ < ‖x + λy‖ for every λ ≠ 0.
pub fn is_strongly_orthogonal<E: ModelElement>(
    x: &E,
    y: &E,
    model: SpaceModel,
) -> Result<bool, OrthError> {
    let pair = x.align(y, model)?;
    if y.is_zero_element() {
        return Ok(false);
    }
    if x.is_zero_element() {
        return Ok(true);
    }
    Ok(pair.dini()?.strict())
}

pub fn lambda_profile<E: ModelElement>(
    x: &E,
    y: &E,
    model: SpaceModel,
) -> Result<LambdaProfile, OrthError> {
    x.align(y, model)?.profile()
}

/// Floating point minimum of ‖x + λy‖ over a uniform grid of `steps` points
/// in `range`. A heuristic cross-check only.
pub fn grid_oracle<E: ModelElement>(
    x: &E,
    y: &E,
    model: SpaceModel,
    range: (f64, f64),
    steps: usize,
) -> Result<(f64, f64), OrthError> {
    let pair = x.align(y, model)?;
    Ok(grid_min(&pair, range, steps))
}

pub const DEFAULT_GRID_RANGE: (f64, f64) = (-10.0, 10.0);
pub const DEFAULT_GRID_STEPS: usize = 4001;

pub(crate) fn grid_min(pair: &AlignedPair, range: (f64, f64), steps: usize) -> (f64, f64) {
    assert!(steps >= 3, "grid needs at least three points");
    let (lo, hi) = range;
    let h = (hi - lo) / (steps - 1) as f64;
    let mut best = (f64::INFINITY, lo);
    for i in 0..steps {
        let lambda = lo + h * i as f64;
        let v = pair.norm_at_f64(lambda);
        if v.partial_cmp(&best.0) == Some(Ordering::Less) {
            best = (v, lambda);
        }
    }
    best
}

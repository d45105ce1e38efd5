//! Oracles re-derived from the definitions. They read elements only through
//! their raw accessors (entries, pieces, nodes, atoms) and share no
//! arithmetic with the library.

use std::collections::BTreeMap;

use bsa_core::scalar::{to_f64, Scalar};
use bsa_core::spaces::{Measure, PLFunction, PiecewiseAffine, SparseSeq, StepFunction};
use num_traits::{One, Signed, Zero};

pub fn two() -> Scalar {
    Scalar::from_integer(2.into())
}

pub fn sign(x: &Scalar) -> Scalar {
    if x.is_positive() {
        Scalar::one()
    } else if x.is_negative() {
        -Scalar::one()
    } else {
        Scalar::zero()
    }
}

fn seq_map(a: &SparseSeq) -> BTreeMap<usize, Scalar> {
    a.entries().map(|(i, v)| (i, v.clone())).collect()
}

/// `|Σ_{supp a} sgn(aₖ)bₖ| < Σ_{k ∉ supp a} |bₖ|`.
pub fn c0_strict_inequality(a: &SparseSeq, b: &SparseSeq) -> bool {
    let am = seq_map(a);
    let mut on = Scalar::zero();
    let mut off = Scalar::zero();
    for (i, v) in seq_map(b) {
        match am.get(&i) {
            Some(ai) if !ai.is_zero() => on += sign(ai) * v,
            _ => off += v.abs(),
        }
    }
    on.abs() < off
}

pub fn seq_pair(a: &SparseSeq, x: &SparseSeq) -> Scalar {
    let xm = seq_map(x);
    seq_map(a)
        .into_iter()
        .map(|(i, v)| xm.get(&i).map_or_else(Scalar::zero, |xi| v * xi))
        .sum()
}

pub fn seq_sum_norm(a: &SparseSeq) -> Scalar {
    seq_map(a).values().map(|v| v.abs()).sum()
}

pub fn seq_sup_norm(a: &SparseSeq) -> Scalar {
    seq_map(a).values().map(|v| v.abs()).max().unwrap_or_else(Scalar::zero)
}

pub fn merged(lists: &[&[Scalar]]) -> Vec<Scalar> {
    let mut v: Vec<Scalar> = lists.iter().flat_map(|l| l.iter().cloned()).collect();
    v.sort();
    v.dedup();
    v
}

/// Value on the piece whose interior contains `t`.
pub fn step_at(f: &StepFunction, t: &Scalar) -> Scalar {
    for (a, b, v) in f.pieces() {
        if a < t && t < b {
            return v.clone();
        }
    }
    panic!("{t} is a breakpoint or outside [0,1]");
}

pub fn step_integral_product(f: &StepFunction, g: &StepFunction) -> Scalar {
    let cuts = merged(&[f.breakpoints(), g.breakpoints()]);
    cuts.windows(2)
        .map(|w| {
            let mid = (&w[0] + &w[1]) / two();
            step_at(f, &mid) * step_at(g, &mid) * (&w[1] - &w[0])
        })
        .sum()
}

pub fn step_l1(f: &StepFunction) -> Scalar {
    f.pieces().map(|(a, b, v)| v.abs() * (b - a)).sum()
}

pub fn step_sup(f: &StepFunction) -> Scalar {
    f.pieces()
        .filter(|(a, b, _)| a < b)
        .map(|(_, _, v)| v.abs())
        .max()
        .unwrap_or_else(Scalar::zero)
}

/// Affine extension of the piece of g whose closure contains the open
/// interval `(lo, hi)`, evaluated at `t ∈ [lo, hi]`.
pub fn affine_on(g: &PiecewiseAffine, lo: &Scalar, hi: &Scalar, t: &Scalar) -> Scalar {
    for (a, b, (l, r)) in g.pieces() {
        if a <= lo && hi <= b {
            return l + (r - l) * (t - a) / (b - a);
        }
    }
    panic!("({lo}, {hi}) straddles a breakpoint");
}

pub fn affine_step_integral(g: &PiecewiseAffine, phi: &StepFunction) -> Scalar {
    let cuts = merged(&[g.breakpoints(), phi.breakpoints()]);
    cuts.windows(2)
        .map(|w| {
            let (a, b) = (&w[0], &w[1]);
            let mean = (affine_on(g, a, b, a) + affine_on(g, a, b, b)) / two();
            mean * step_at(phi, &((a + b) / two())) * (b - a)
        })
        .sum()
}

/// `ess sup |g − f|`; on each common piece `g − f` is affine, so the
/// supremum is an endpoint limit.
pub fn affine_step_distance(g: &PiecewiseAffine, f: &StepFunction) -> Scalar {
    let cuts = merged(&[g.breakpoints(), f.breakpoints()]);
    cuts.windows(2)
        .flat_map(|w| {
            let (a, b) = (&w[0], &w[1]);
            let fv = step_at(f, &((a + b) / two()));
            [
                (affine_on(g, a, b, a) - &fv).abs(),
                (affine_on(g, a, b, b) - &fv).abs(),
            ]
        })
        .max()
        .unwrap_or_else(Scalar::zero)
}

/// Linear interpolation between the nodes around `t`.
pub fn pl_at(f: &PLFunction, t: &Scalar) -> Scalar {
    let (nodes, values) = (f.nodes(), f.values());
    for k in 0..nodes.len() - 1 {
        if &nodes[k] <= t && t <= &nodes[k + 1] {
            let (a, b) = (&nodes[k], &nodes[k + 1]);
            return &values[k] + (&values[k + 1] - &values[k]) * (t - a) / (b - a);
        }
    }
    panic!("{t} outside [0,1]");
}

pub fn pl_sup(f: &PLFunction) -> Scalar {
    f.values().iter().map(|v| v.abs()).max().unwrap_or_else(Scalar::zero)
}

/// `∫ f dμ`: atoms plus the density, where on each common piece f is
/// linear and the density constant, so the midpoint rule is exact.
pub fn measure_integral(mu: &Measure, f: &PLFunction) -> Scalar {
    let atoms: Scalar = mu.atoms().iter().map(|a| &a.weight * pl_at(f, &a.location)).sum();
    let rho = mu.density();
    let cuts = merged(&[rho.breakpoints(), f.nodes()]);
    let dens: Scalar = cuts
        .windows(2)
        .map(|w| {
            let mid = (&w[0] + &w[1]) / two();
            step_at(rho, &mid) * pl_at(f, &mid) * (&w[1] - &w[0])
        })
        .sum();
    atoms + dens
}

pub fn atom_map(mu: &Measure) -> BTreeMap<Scalar, Scalar> {
    mu.atoms().iter().map(|a| (a.location.clone(), a.weight.clone())).collect()
}

/// Coordinates `(μ-value, ν-value, weight)` of the weighted-sum
/// representation of the pair: atoms with weight 1 and common density
/// pieces with weight equal to their length.
pub fn tv_coordinates(mu: &Measure, nu: &Measure) -> Vec<(Scalar, Scalar, Scalar)> {
    let (am, an) = (atom_map(mu), atom_map(nu));
    let mut locs: Vec<&Scalar> = am.keys().chain(an.keys()).collect();
    locs.sort();
    locs.dedup();
    let mut out: Vec<(Scalar, Scalar, Scalar)> = locs
        .into_iter()
        .map(|x| {
            (
                am.get(x).cloned().unwrap_or_else(Scalar::zero),
                an.get(x).cloned().unwrap_or_else(Scalar::zero),
                Scalar::one(),
            )
        })
        .collect();
    let cuts = merged(&[mu.density().breakpoints(), nu.density().breakpoints()]);
    for w in cuts.windows(2) {
        let mid = (&w[0] + &w[1]) / two();
        out.push((step_at(mu.density(), &mid), step_at(nu.density(), &mid), &w[1] - &w[0]));
    }
    out
}

pub fn tv_norm(mu: &Measure) -> Scalar {
    tv_coordinates(mu, &Measure::zero()).iter().map(|(m, _, w)| m.abs() * w).sum()
}

pub fn tv_distance(mu: &Measure, nu: &Measure) -> Scalar {
    tv_coordinates(mu, nu).iter().map(|(m, n, w)| (m - n).abs() * w).sum()
}

/// One-sided derivatives of `λ ↦ ‖x + λy‖` at 0 for a weighted sum of
/// absolute values.
pub fn weighted_sum_dini(coords: &[(Scalar, Scalar, Scalar)]) -> (Scalar, Scalar) {
    let mut signed = Scalar::zero();
    let mut free = Scalar::zero();
    for (x, y, w) in coords {
        if x.is_zero() {
            free += y.abs() * w;
        } else {
            signed += sign(x) * y * w;
        }
    }
    (&signed - &free, signed + free)
}

pub fn tv_strongly_orthogonal(mu: &Measure, nu: &Measure) -> bool {
    let (dm, dp) = weighted_sum_dini(&tv_coordinates(mu, nu));
    dm.is_negative() && dp.is_positive()
}

type Pieces = Vec<(Scalar, Scalar)>;

/// Closed pieces `[a, b]` (points when `a = b`) where μ is positive,
/// respectively negative.
fn signed_closed_parts(mu: &Measure) -> (Pieces, Pieces) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for a in mu.atoms() {
        let p = (a.location.clone(), a.location.clone());
        if a.weight.is_positive() {
            pos.push(p);
        } else if a.weight.is_negative() {
            neg.push(p);
        }
    }
    for (a, b, v) in mu.density().pieces() {
        if v.is_positive() {
            pos.push((a.clone(), b.clone()));
        } else if v.is_negative() {
            neg.push((a.clone(), b.clone()));
        }
    }
    (pos, neg)
}

/// Whether the closed supports of μ⁺ and μ⁻ meet.
pub fn supports_touch(mu: &Measure) -> bool {
    let (pos, neg) = signed_closed_parts(mu);
    pos.iter().any(|(a, b)| neg.iter().any(|(c, d)| a <= d && c <= b))
}

/// One-sided derivatives at 0 of `λ ↦ max |xᵢ + λyᵢ|`.
pub fn max_dini(coords: &[(Scalar, Scalar, Scalar)]) -> (Scalar, Scalar) {
    let top = coords.iter().map(|(x, _, _)| x.abs()).max().unwrap_or_else(Scalar::zero);
    if top.is_zero() {
        let m = coords.iter().map(|(_, y, _)| y.abs()).max().unwrap_or_else(Scalar::zero);
        return (-m.clone(), m);
    }
    let slopes: Vec<Scalar> = coords
        .iter()
        .filter(|(x, _, _)| x.abs() == top)
        .map(|(x, y, _)| sign(x) * y)
        .collect();
    (slopes.iter().min().unwrap().clone(), slopes.iter().max().unwrap().clone())
}

pub fn seq_coords(x: &SparseSeq, y: &SparseSeq) -> Vec<(Scalar, Scalar, Scalar)> {
    let (xm, ym) = (seq_map(x), seq_map(y));
    let mut idx: Vec<usize> = xm.keys().chain(ym.keys()).cloned().collect();
    idx.sort_unstable();
    idx.dedup();
    let get = |m: &BTreeMap<usize, Scalar>, i: usize| m.get(&i).cloned().unwrap_or_else(Scalar::zero);
    idx.into_iter().map(|i| (get(&xm, i), get(&ym, i), Scalar::one())).collect()
}

/// Values on common pieces, weighted by length.
pub fn step_coords(x: &StepFunction, y: &StepFunction) -> Vec<(Scalar, Scalar, Scalar)> {
    let cuts = merged(&[x.breakpoints(), y.breakpoints()]);
    cuts.windows(2)
        .map(|w| {
            let mid = (&w[0] + &w[1]) / two();
            (step_at(x, &mid), step_at(y, &mid), &w[1] - &w[0])
        })
        .collect()
}

/// Endpoint limits on common pieces; the sup of an affine piece is at an end.
pub fn affine_coords(x: &PiecewiseAffine, y: &PiecewiseAffine) -> Vec<(Scalar, Scalar, Scalar)> {
    let cuts = merged(&[x.breakpoints(), y.breakpoints()]);
    let mut coords = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        for t in [a, b] {
            coords.push((affine_on(x, a, b, t), affine_on(y, a, b, t), Scalar::one()));
        }
    }
    coords
}

/// Node values on the merged nodes; a PL function peaks at a node.
pub fn pl_coords(x: &PLFunction, y: &PLFunction) -> Vec<(Scalar, Scalar, Scalar)> {
    merged(&[x.nodes(), y.nodes()])
        .iter()
        .map(|t| (pl_at(x, t), pl_at(y, t), Scalar::one()))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agg {
    Max,
    Sum,
}

/// A norm `λ ↦ ‖x + λy‖` as an aggregate of weighted coordinates, in
/// floating point.
#[derive(Clone, Debug)]
pub struct FloatNorm {
    pub coords: Vec<(f64, f64, f64)>,
    pub agg: Agg,
}

impl FloatNorm {
    pub fn new(agg: Agg, coords: &[(Scalar, Scalar, Scalar)]) -> Self {
        FloatNorm {
            agg,
            coords: coords.iter().map(|(x, y, w)| (to_f64(x), to_f64(y), to_f64(w))).collect(),
        }
    }

    pub fn at(&self, lambda: f64) -> f64 {
        let terms = self.coords.iter().map(|(x, y, w)| (x + lambda * y).abs() * w);
        match self.agg {
            Agg::Max => terms.fold(0.0, f64::max),
            Agg::Sum => terms.sum(),
        }
    }
}

use num_traits::{One, Zero};

use crate::certificate::{Certificate, Relation};
use crate::scalar::{int, Scalar};
use crate::spaces::IntervalSet;

/// Depth-`depth` Smith-Volterra approximant on `[a, b]`.
///
/// Step `i` removes open middle intervals of total length
/// `(1 − keep)·(b − a)/2ⁱ`, shared equally by the `2^{i−1}` current
/// intervals. The result has measure `(b − a)(keep + (1 − keep)/2^depth)`.
pub fn fat_cantor(a: &Scalar, b: &Scalar, keep: &Scalar, depth: usize) -> IntervalSet {
    assert!(a < b, "empty base interval");
    assert!(keep > &Scalar::zero() && keep < &Scalar::one(), "keep fraction must lie in (0,1)");
    let len = b - a;
    let mut parts = vec![(a.clone(), b.clone())];
    let mut removed_total = (Scalar::one() - keep) * &len;
    for _ in 0..depth {
        removed_total /= int(2);
        let each = &removed_total / Scalar::from_integer(parts.len().into());
        parts = parts
            .into_iter()
            .flat_map(|(lo, hi)| {
                let mid = (&lo + &hi) / int(2);
                let half = &each / int(2);
                [(lo, &mid - &half), (&mid + &half, hi)]
            })
            .collect();
    }
    IntervalSet::new(parts).expect("sub-intervals of the base")
}

/// Checks `0 < σ([t, t+δ] ∩ C) < σ([t, t+δ] ∩ base)` at `samples` values of
/// δ spread over `(r, b − t]`, where `t` is the left end of the base and `r`
/// the length of the first component of `C`. Below `r` the window sits
/// inside `C` and the upper inequality cannot hold at finite depth.
pub fn fat_cantor_window_check(a: &Scalar, b: &Scalar, set: &IntervalSet, samples: usize) -> Certificate {
    let mut cert = Certificate::new("fat_cantor windows");
    let base = IntervalSet::single(a.clone(), b.clone()).expect("base interval");
    let resolution = set.intervals().first().map(|(lo, hi)| hi - lo).unwrap_or_else(Scalar::zero);
    let span = b - a - &resolution;
    for j in 1..=samples {
        let delta = &resolution + &span * Scalar::new(j.into(), samples.into());
        let window = IntervalSet::single(a.clone(), a + &delta).expect("window in base");
        let inside = set.intersection(&window).measure();
        let whole = base.intersection(&window).measure();
        cert.compare(format!("δ = {delta}: σ(window ∩ C) > 0"), &inside, Relation::Gt, &Scalar::zero());
        cert.check_lt(format!("δ = {delta}: σ(window ∩ C) < σ(window)"), &inside, &whole);
    }
    cert.put("resolution", crate::scalar::Q::from(&resolution));
    cert
}

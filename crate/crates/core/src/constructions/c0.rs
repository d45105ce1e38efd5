use num_traits::{One, Signed, Zero};

use super::{precondition, ConstructionError};
use crate::attainment::c0_base_tail;
use crate::certificate::{Certificate, Certified};
use crate::scalar::{sgn, Scalar};
use crate::spaces::{SeqNorm, SparseSeq};

/// Norming element `x` of the c0 functional `a` with `b(x) = 0`.
///
/// `x = sgn(aₖ)` on supp a and `θ·sgn(bₖ)` off it, where
/// `θ = -(Σ_{supp a} sgn(aₖ)bₖ) / (Σ_{k ∉ supp a} |bₖ|)`. The strict
/// inequality `|Σ sgn(aₖ)bₖ| < Σ_{k ∉ supp a} |bₖ|` makes `|θ| < 1`.
pub fn c0_bsa_witness(a: &SparseSeq, b: &SparseSeq) -> Result<Certified<SparseSeq>, ConstructionError> {
    precondition(!a.is_zero(), || "a must be nonzero".into())?;
    let (base, tail) = c0_base_tail(a, b);
    precondition(base.abs() < tail || (base.is_zero() && tail.is_zero()), || {
        format!("|Σ sgn(a_k) b_k| = {} is not below the tail mass {}", base.abs(), tail)
    })?;
    let theta = if tail.is_zero() {
        Scalar::zero()
    } else {
        -&base / &tail
    };
    let mut entries: Vec<(usize, Scalar)> = a.entries().map(|(i, v)| (i, sgn(v))).collect();
    for (i, v) in b.entries() {
        if a.get(i).is_zero() {
            entries.push((i, &theta * sgn(v)));
        }
    }
    let x = SparseSeq::from_entries(entries).expect("indices start at 1");

    let mut cert = Certificate::new("c0_bsa_witness");
    cert.check_lt("|θ| < 1", &theta.abs(), &Scalar::one());
    cert.check_eq("a(x) = ‖a‖₁", &a.pair(&x), &a.norm(SeqNorm::Sum));
    cert.check_eq("b(x) = 0", &b.pair(&x), &Scalar::zero());
    cert.check_le("‖x‖∞ ≤ 1", &x.norm(SeqNorm::Sup), &Scalar::one());
    cert.put("a", a);
    cert.put("b", b);
    cert.put("x", &x);
    cert.put("theta", crate::scalar::Q::from(&theta));
    Ok(Certified {
        value: x,
        certificate: cert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn seq(e: &[(usize, Scalar)]) -> SparseSeq {
        SparseSeq::from_entries(e.iter().cloned()).unwrap()
    }

    #[test]
    fn worked_example() {
        let a = seq(&[(1, int(1)), (2, int(-2))]);
        let b = seq(&[(1, rat(3, 10)), (2, rat(4, 10)), (3, rat(1, 2)), (4, rat(1, 2))]);
        let w = c0_bsa_witness(&a, &b).unwrap();
        assert_eq!(w.value, seq(&[(1, int(1)), (2, int(-1)), (3, rat(1, 10)), (4, rat(1, 10))]));
        assert!(w.certificate.passed());
        assert_eq!(a.pair(&w.value), int(3));
    }

    #[test]
    fn disjoint_supports_give_theta_zero() {
        let w = c0_bsa_witness(&seq(&[(1, int(1))]), &seq(&[(2, int(1))])).unwrap();
        assert_eq!(w.value, seq(&[(1, int(1))]));
        let a = seq(&[(1, int(1)), (2, int(1))]);
        let b = seq(&[(1, int(1)), (2, int(-1)), (3, rat(1, 1000))]);
        let w = c0_bsa_witness(&a, &b).unwrap();
        assert_eq!(w.value, seq(&[(1, int(1)), (2, int(1))]));
    }

    #[test]
    fn equality_case_is_rejected() {
        let a = seq(&[(1, int(1))]);
        let b = seq(&[(1, int(1)), (2, int(1))]);
        assert!(matches!(
            c0_bsa_witness(&a, &b),
            Err(ConstructionError::PreconditionFailed(_))
        ));
    }
}

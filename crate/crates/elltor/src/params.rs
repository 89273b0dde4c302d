//! Exact parameter points for the deformation parameters `q`, `t`.
//!
//! The whole calculus is saturated with quarter and half powers of `t/q`, so a
//! parameter point stores exact rational *quarter roots* of `q` and `t`. Every
//! power `q^{a/4} t^{b/4}` with integer `a, b` is then an exact rational and no
//! algebraic extension is ever needed. The default point is
//! `q^{1/4} = 2/3`, `t^{1/4} = 3/5`, i.e. `q = 16/81`, `t = 81/625`.

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

pub type QQ = BigRational;

/// Rational `n/d` from machine integers.
pub fn qq(n: i64, d: i64) -> QQ {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact integer power of a nonzero rational, negative exponents allowed.
pub fn pow_i64(base: &QQ, e: i64) -> QQ {
    if e == 0 {
        return QQ::one();
    }
    let p = base.pow(e.unsigned_abs() as i32);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("quarter root must be nonzero")]
    ZeroRoot,
    #[error("degenerate parameter point: q^{a} t^{b} = 1 inside guard range")]
    RootOfUnity { a: i64, b: i64 },
}

/// An exact parameter point `(q, t)` stored through quarter roots, together
/// with a guard certifying `q^a t^b != 1` for all `(a, b) != (0, 0)` with
/// `|a|, |b| <= guard_range`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPoint {
    q_quarter: QQ,
    t_quarter: QQ,
    guard_range: u32,
}

impl ParamPoint {
    pub fn new(q_quarter: QQ, t_quarter: QQ, guard_range: u32) -> Result<Self, ParamError> {
        if q_quarter.is_zero() || t_quarter.is_zero() {
            return Err(ParamError::ZeroRoot);
        }
        let p = ParamPoint {
            q_quarter,
            t_quarter,
            guard_range,
        };
        let one = QQ::one();
        let q = p.q();
        let t = p.t();
        for a in -(guard_range as i64)..=guard_range as i64 {
            let qa = pow_i64(&q, a);
            for b in -(guard_range as i64)..=guard_range as i64 {
                if a == 0 && b == 0 {
                    continue;
                }
                if qa.clone() * pow_i64(&t, b) == one {
                    return Err(ParamError::RootOfUnity { a, b });
                }
            }
        }
        Ok(p)
    }

    /// The default point `q^{1/4} = 2/3`, `t^{1/4} = 3/5`, guard range 24.
    pub fn default_point() -> Self {
        ParamPoint::new(qq(2, 3), qq(3, 5), 24).expect("default point is generic")
    }

    pub fn guard_range(&self) -> u32 {
        self.guard_range
    }

    pub fn q(&self) -> QQ {
        pow_i64(&self.q_quarter, 4)
    }

    pub fn t(&self) -> QQ {
        pow_i64(&self.t_quarter, 4)
    }

    /// `q^{k/4}` for any integer `k`.
    pub fn q_quarter_pow(&self, k: i64) -> QQ {
        pow_i64(&self.q_quarter, k)
    }

    /// `t^{k/4}` for any integer `k`.
    pub fn t_quarter_pow(&self, k: i64) -> QQ {
        pow_i64(&self.t_quarter, k)
    }

    /// `(t/q)^{k/4}` for any integer `k`.
    pub fn tq_quarter_pow(&self, k: i64) -> QQ {
        pow_i64(&(self.t_quarter.clone() / self.q_quarter.clone()), k)
    }

    /// `q^a t^b` with integer exponents.
    pub fn qt_pow(&self, a: i64, b: i64) -> QQ {
        pow_i64(&self.q(), a) * pow_i64(&self.t(), b)
    }

    /// `kappa_m = (1 - q^m)(1 - t^{-m})(1 - (t/q)^m)`, m any nonzero integer.
    /// Satisfies `kappa_{-m} = -kappa_m`.
    pub fn kappa(&self, m: i64) -> QQ {
        assert!(m != 0, "kappa_m needs m != 0");
        let one = QQ::one();
        let q = self.q();
        let t = self.t();
        let tq = t.clone() / q.clone();
        (one.clone() - pow_i64(&q, m))
            * (one.clone() - pow_i64(&t, -m))
            * (one - pow_i64(&tq, m))
    }

    /// True when the rational value could hit a zero of `theta_p` at nome
    /// order zero, i.e. equals 1. Used by representation code to assert
    /// expected vanishings.
    pub fn is_unit_value(v: &QQ) -> bool {
        v.is_one() && v.is_positive()
    }
}

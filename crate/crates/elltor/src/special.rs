//! Infinite products and the structure functions of the algebra.
//!
//! Multi-Pochhammer symbols `(z; b_1, ..., b_r)_inf` are always computed
//! through their logarithm: `-sum_{m>=1} z^m/m prod_i 1/(1 - b_i^m)`, with
//! rational bases contributing exact scalars and formal nome bases expanding
//! geometrically inside their windows. Arguments that are radially large
//! (non-positive weight) are peeled off as explicit linear factors by lattice
//! splitting; purely rational arguments against a rational base are a hard
//! error, since such products have no formal handle.

use crate::params::{pow_i64, ParamPoint, QQ};
use crate::series::{Monomial, SeriesError, TruncSeries, VarTable};
use num::{One, Zero};

/// A base of an infinite product: an exact rational inside the guard, or a
/// formal nome variable scaled by a rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PochBase {
    Rational(QQ),
    Nome { var: usize, coeff: QQ },
}

impl PochBase {
    pub fn nome(vt: &VarTable, name: &str) -> Self {
        PochBase::Nome {
            var: vt.index_of(name).expect("unknown nome variable"),
            coeff: QQ::one(),
        }
    }

    pub fn scaled_nome(vt: &VarTable, name: &str, coeff: QQ) -> Self {
        PochBase::Nome {
            var: vt.index_of(name).expect("unknown nome variable"),
            coeff,
        }
    }

    pub fn to_monomial(&self, vt: &VarTable) -> Monomial {
        match self {
            PochBase::Rational(c) => Monomial::constant(vt, c.clone()),
            PochBase::Nome { var, coeff } => {
                let mut m = Monomial::constant(vt, coeff.clone());
                m.exps[*var] = 1;
                m
            }
        }
    }

    /// `1 / (1 - b^m)` as a series (scalar for rational bases, truncated
    /// geometric sum for nome bases).
    fn geometric(&self, vt: &VarTable, m: i64) -> Result<TruncSeries, SeriesError> {
        match self {
            PochBase::Rational(c) => {
                let cm = pow_i64(c, m);
                if cm.is_one() {
                    return Err(SeriesError::NonTruncatable(
                        "rational Pochhammer base is a root of unity".into(),
                    ));
                }
                Ok(vt.constant((QQ::one() - cm).recip()))
            }
            PochBase::Nome { var, coeff } => {
                let hi = vt.specs()[*var].hi as i64;
                let mut acc = vt.zero();
                let mut k = 0i64;
                while k * m <= hi {
                    let mut exps = vec![0; vt.len()];
                    exps[*var] = (k * m) as i32;
                    acc = acc.add(&vt.monomial(pow_i64(coeff, k * m), &exps));
                    k += 1;
                }
                Ok(acc)
            }
        }
    }

    /// Window of the formal base, for the pure-rational-argument bound.
    fn nome_window(&self, vt: &VarTable) -> i64 {
        match self {
            PochBase::Rational(_) => 0,
            PochBase::Nome { var, .. } => vt.specs()[*var].hi as i64,
        }
    }
}

/// Radial weight of a monomial under the table's declaration order.
fn mono_weight(vt: &VarTable, m: &Monomial) -> i128 {
    let mut w: i128 = 0;
    let mut acc: i128 = 1;
    for (i, v) in vt.specs().iter().enumerate() {
        w += m.exps[i] as i128 * acc;
        let span = (v.hi.abs().max(v.lo.abs()) as i128) + 1;
        acc *= 2 * span + 1;
    }
    w
}

/// Largest `m` such that `arg^m` can still meet the window; `None` when the
/// argument provides no handle. Negative exponents of formal-base variables
/// are regenerated by the lattice and give no bound.
fn power_bound(vt: &VarTable, arg: &Monomial, bases: &[PochBase]) -> Option<i64> {
    let mut bound: Option<i64> = None;
    for (i, v) in vt.specs().iter().enumerate() {
        let e = arg.exps[i] as i64;
        if e > 0 {
            let b = v.hi as i64 / e;
            bound = Some(bound.map_or(b, |x: i64| x.min(b)));
        } else if e < 0 {
            let regenerated = bases
                .iter()
                .any(|pb| matches!(pb, PochBase::Nome { var, .. } if *var == i));
            if !regenerated {
                let b = v.lo as i64 / e;
                bound = Some(bound.map_or(b, |x: i64| x.min(b)));
            }
        }
    }
    bound
}

/// `(arg; b_1, ..., b_r)_inf` as an exact truncated series.
pub fn pochhammer(
    vt: &VarTable,
    arg: &Monomial,
    bases: &[PochBase],
) -> Result<TruncSeries, SeriesError> {
    if arg.coeff.is_zero() {
        return Ok(vt.one());
    }
    if bases.is_empty() {
        // empty lattice: the single factor (1 - arg)
        return Ok(vt.one().sub(&arg.to_series(vt)));
    }
    if arg.is_rational() {
        let c = &arg.coeff;
        if bases.iter().any(|b| matches!(b, PochBase::Rational(_))) {
            return Err(SeriesError::NonTruncatable(
                "pure rational argument over a rational base".into(),
            ));
        }
        // peel the origin, then sum over the nonzero lattice: every term
        // carries total nome degree >= m
        let mmax: i64 = bases.iter().map(|b| b.nome_window(vt)).sum();
        let mut logsum = vt.zero();
        for m in 1..=mmax {
            let mut prod = vt.one();
            for b in bases {
                prod = prod.mul(&b.geometric(vt, m)?);
            }
            prod = prod.sub(&vt.one());
            let coeff = -pow_i64(c, m) / QQ::from_integer(m.into());
            logsum = logsum.add(&prod.scale(&coeff));
        }
        let peel = vt.one().sub(&vt.constant(c.clone()));
        return Ok(peel.mul(&logsum.exp_series()?));
    }
    if mono_weight(vt, arg) <= 0 {
        // radially large argument: split the lattice on the first formal base
        let split = bases
            .iter()
            .position(|b| matches!(b, PochBase::Nome { .. }))
            .ok_or_else(|| {
                SeriesError::NonTruncatable("radially large argument with no formal base".into())
            })?;
        let rest: Vec<PochBase> = bases
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != split)
            .map(|(_, b)| b.clone())
            .collect();
        let shifted = arg.mul(&bases[split].to_monomial(vt));
        let zero_slice = pochhammer(vt, arg, &rest)?;
        let shifted_all = pochhammer(vt, &shifted, bases)?;
        return Ok(zero_slice.mul(&shifted_all));
    }
    // generic branch: positive-weight argument, direct log expansion
    let mmax = power_bound(vt, arg, bases).expect("positive weight implies a bound");
    let mut logsum = vt.zero();
    let mut argpow = vt.one();
    for m in 1..=mmax {
        argpow = argpow.mul(&arg.to_series(vt));
        if argpow.is_zero() {
            break;
        }
        let mut prod = argpow.scale(&(-QQ::from_integer(m.into()).recip()));
        for b in bases {
            prod = prod.mul(&b.geometric(vt, m)?);
        }
        logsum = logsum.add(&prod);
    }
    logsum.exp_series()
}

/// Jacobi odd theta `theta_b(arg) = (arg; b)_inf (b/arg; b)_inf` against a
/// formal nome base.
pub fn theta(vt: &VarTable, arg: &Monomial, base: &PochBase) -> Result<TruncSeries, SeriesError> {
    let b = match base {
        PochBase::Nome { .. } => base.clone(),
        PochBase::Rational(_) => {
            return Err(SeriesError::NonTruncatable("theta needs a formal nome".into()))
        }
    };
    let first = pochhammer(vt, arg, std::slice::from_ref(&b))?;
    let second_arg = b.to_monomial(vt).mul(&arg.inv());
    let second = pochhammer(vt, &second_arg, std::slice::from_ref(&b))?;
    Ok(first.mul(&second))
}

/// Convenience: `theta_p(c)` for a plain nome variable and rational argument.
pub fn theta_rational(vt: &VarTable, c: &QQ, nome: &str) -> Result<TruncSeries, SeriesError> {
    theta(
        vt,
        &Monomial::constant(vt, c.clone()),
        &PochBase::nome(vt, nome),
    )
}

/// Multiple elliptic Gamma function
/// `Gamma_r(arg) = (arg; ...)^{(-1)^{r-1}} (b_1...b_r/arg; ...)_inf`.
pub fn elliptic_gamma(
    vt: &VarTable,
    arg: &Monomial,
    bases: &[PochBase],
) -> Result<TruncSeries, SeriesError> {
    assert!(!bases.is_empty());
    let first = pochhammer(vt, arg, bases)?;
    let mut prod = Monomial::constant(vt, QQ::one());
    for b in bases {
        prod = prod.mul(&b.to_monomial(vt));
    }
    let second = pochhammer(vt, &prod.mul(&arg.inv()), bases)?;
    if bases.len() % 2 == 1 {
        Ok(first.mul(&second))
    } else {
        second.div(&first)
    }
}

/// `g(z; s) = exp( sum_{m>0} kappa_m/m s^m/(1-s^m) z^m )`.
pub fn g_struct(
    vt: &VarTable,
    z: &Monomial,
    s: &PochBase,
    params: &ParamPoint,
) -> Result<TruncSeries, SeriesError> {
    let mmax = power_bound(vt, z, &[])
        .ok_or_else(|| SeriesError::NonTruncatable("g(z;s) needs a handle on z".into()))?;
    let mut logsum = vt.zero();
    let mut zpow = vt.one();
    for m in 1..=mmax {
        zpow = zpow.mul(&z.to_series(vt));
        if zpow.is_zero() {
            break;
        }
        let factor = match s {
            PochBase::Rational(c) => {
                let sm = pow_i64(c, m);
                vt.constant(sm.clone() / (QQ::one() - sm))
            }
            PochBase::Nome { var, coeff } => {
                let hi = vt.specs()[*var].hi as i64;
                let mut acc = vt.zero();
                let mut k = 1i64;
                while k * m <= hi {
                    let mut exps = vec![0; vt.len()];
                    exps[*var] = (k * m) as i32;
                    acc = acc.add(&vt.monomial(pow_i64(coeff, k * m), &exps));
                    k += 1;
                }
                acc
            }
        };
        let kap = params.kappa(m) / QQ::from_integer(m.into());
        logsum = logsum.add(&zpow.mul(&factor).scale(&kap));
    }
    logsum.exp_series()
}

/// `g(z) = exp( sum_{m>0} kappa_m/m z^m )`.
pub fn g_plain(vt: &VarTable, z: &Monomial, params: &ParamPoint) -> Result<TruncSeries, SeriesError> {
    let mmax = power_bound(vt, z, &[])
        .ok_or_else(|| SeriesError::NonTruncatable("g(z) needs a handle on z".into()))?;
    let mut logsum = vt.zero();
    let mut zpow = vt.one();
    for m in 1..=mmax {
        zpow = zpow.mul(&z.to_series(vt));
        if zpow.is_zero() {
            break;
        }
        logsum = logsum.add(&zpow.scale(&(params.kappa(m) / QQ::from_integer(m.into()))));
    }
    logsum.exp_series()
}

/// `f(z; s) = (z/q; s)(tz; s)((q/t)z; s) / ((qz; s)(z/t; s)((t/q)z; s))`.
pub fn f_struct(
    vt: &VarTable,
    z: &Monomial,
    s: &PochBase,
    params: &ParamPoint,
) -> Result<TruncSeries, SeriesError> {
    let q = params.q();
    let t = params.t();
    let bases = std::slice::from_ref(s);
    let num = pochhammer(vt, &z.scale(&q.clone().recip()), bases)?
        .mul(&pochhammer(vt, &z.scale(&t), bases)?)
        .mul(&pochhammer(vt, &z.scale(&(q.clone() / t.clone())), bases)?);
    let den = pochhammer(vt, &z.scale(&q), bases)?
        .mul(&pochhammer(vt, &z.scale(&t.clone().recip()), bases)?)
        .mul(&pochhammer(vt, &z.scale(&(t / q)), bases)?);
    num.div(&den)
}

/// `g_theta(z; p) = theta_p(z/q) theta_p((q/t)z) theta_p(tz)
///                / (theta_p(qz) theta_p((t/q)z) theta_p(z/t))`.
pub fn g_theta(
    vt: &VarTable,
    z: &Monomial,
    base: &PochBase,
    params: &ParamPoint,
) -> Result<TruncSeries, SeriesError> {
    let q = params.q();
    let t = params.t();
    let num = theta(vt, &z.scale(&q.clone().recip()), base)?
        .mul(&theta(vt, &z.scale(&(q.clone() / t.clone())), base)?)
        .mul(&theta(vt, &z.scale(&t), base)?);
    let den = theta(vt, &z.scale(&q.clone()), base)?
        .mul(&theta(vt, &z.scale(&(t.clone() / q)), base)?)
        .mul(&theta(vt, &z.scale(&t.recip()), base)?);
    num.div(&den)
}

/// Expansion region for a linear factor `1/(1 - mono)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// `|mono| < 1`: geometric series in `mono`.
    Small,
    /// `|mono| > 1`: `-mono^{-1} sum mono^{-k}`.
    Large,
}

/// `1/(1 - mono)` expanded in the requested region. The monomial must carry
/// at least one formal exponent so the sum terminates inside the window.
pub fn linear_inv_region(
    vt: &VarTable,
    mono: &Monomial,
    region: Region,
) -> Result<TruncSeries, SeriesError> {
    if mono.is_rational() {
        return Err(SeriesError::NonTruncatable(
            "regional expansion of a constant factor".into(),
        ));
    }
    let m = match region {
        Region::Small => mono.clone(),
        Region::Large => mono.inv(),
    };
    let mut acc = vt.zero();
    let mut pow = vt.one();
    loop {
        acc = acc.add(&pow);
        pow = pow.mul(&m.to_series(vt));
        if pow.is_zero() {
            break;
        }
    }
    Ok(match region {
        Region::Small => acc,
        Region::Large => acc.mul(&m.to_series(vt)).neg(),
    })
}

/// Formal delta `delta(mono) = sum_{n in Z} mono^n`, truncated to the window.
pub fn delta_series(vt: &VarTable, mono: &Monomial) -> Result<TruncSeries, SeriesError> {
    if mono.is_rational() {
        return Err(SeriesError::NonTruncatable(
            "delta of a constant has no formal support".into(),
        ));
    }
    let mut acc = vt.one();
    let mut pow = vt.one();
    loop {
        pow = pow.mul(&mono.to_series(vt));
        if pow.is_zero() {
            break;
        }
        acc = acc.add(&pow);
    }
    let inv = mono.inv();
    let mut pow = vt.one();
    loop {
        pow = pow.mul(&inv.to_series(vt));
        if pow.is_zero() {
            break;
        }
        acc = acc.add(&pow);
    }
    Ok(acc)
}

/// Residues of `prod_j (1 - z/b_j) / prod_k (1 - z/a_k)` at its poles:
/// the difference of the two regional expansions equals
/// `sum_k delta(a_k/z) * prod_j (1 - a_k/b_j) / prod_{j != k} (1 - a_k/a_j)`.
pub fn rational_residues(zeros: &[QQ], poles: &[QQ]) -> Vec<QQ> {
    let one = QQ::one();
    poles
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let mut num = QQ::one();
            for b in zeros {
                num *= one.clone() - a.clone() / b.clone();
            }
            let mut den = QQ::one();
            for (j, a2) in poles.iter().enumerate() {
                if j != k {
                    den *= one.clone() - a.clone() / a2.clone();
                }
            }
            num / den
        })
        .collect()
}

/// The partial fraction expansion identity for theta functions:
/// `theta_p(s/b_{m+1}) prod_j theta_p(s/b_j)/theta_p(s/a_j)
///  = -sum_k 1/theta_p(a_k/s) prod_j theta_p(a_k/b_j) / prod_{j!=k} theta_p(a_k/a_j)`
/// under the balancing condition `b_1...b_{m+1} = a_1...a_m s`.
/// All inputs rational; both sides exact nome series. Returns true iff equal.
pub fn pfe_holds(
    vt: &VarTable,
    nome: &str,
    s: &QQ,
    a: &[QQ],
    b: &[QQ],
) -> Result<bool, SeriesError> {
    assert_eq!(b.len(), a.len() + 1, "need m poles and m+1 zeros");
    let prod_b: QQ = b.iter().fold(QQ::one(), |acc, x| acc * x.clone());
    let prod_as: QQ = a.iter().fold(s.clone(), |acc, x| acc * x.clone());
    assert_eq!(prod_b, prod_as, "balancing condition violated");
    let base = PochBase::nome(vt, nome);
    let th = |c: &QQ| theta(vt, &Monomial::constant(vt, c.clone()), &base);
    let mut lhs = th(&(s.clone() / b[a.len()].clone()))?;
    for j in 0..a.len() {
        lhs = lhs.mul(&th(&(s.clone() / b[j].clone()))?);
        lhs = lhs.div(&th(&(s.clone() / a[j].clone()))?)?;
    }
    let mut rhs = vt.zero();
    for k in 0..a.len() {
        let mut term = th(&(a[k].clone() / s.clone()))?.invert()?.neg();
        for bj in b {
            term = term.mul(&th(&(a[k].clone() / bj.clone()))?);
        }
        for (j, aj) in a.iter().enumerate() {
            if j != k {
                term = term.div(&th(&(a[k].clone() / aj.clone()))?)?;
            }
        }
        rhs = rhs.add(&term);
    }
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::qq;

    fn params() -> ParamPoint {
        ParamPoint::default_point()
    }

    #[test]
    fn poch_single_surviving_factor() {
        // (p z; p) at K_p = 1, L_z = 1 -> 1 - p z
        let vt = VarTable::builder().spectral("z", 1).nome("p", 1).build();
        let arg = Monomial::var(&vt, "p", QQ::one()).mul(&Monomial::var(&vt, "z", QQ::one()));
        let s = pochhammer(&vt, &arg, &[PochBase::nome(&vt, "p")]).unwrap();
        assert_eq!(s, vt.one().sub(&vt.monomial(qq(1, 1), &[1, 1])));
    }

    #[test]
    fn poch_rational_arg_factors_out() {
        // (c; p) = (1-c)(cp; p): check at K_p = 1 -> (1-c)(1-cp)
        let vt = VarTable::builder().nome("p", 1).build();
        let c = qq(1, 3);
        let s = pochhammer(
            &vt,
            &Monomial::constant(&vt, c.clone()),
            &[PochBase::nome(&vt, "p")],
        )
        .unwrap();
        let expect = vt
            .constant(QQ::one() - c.clone())
            .mul(&vt.one().sub(&vt.var_pow("p", 1, c)));
        assert_eq!(s, expect);
    }

    #[test]
    fn poch_rejects_rational_on_rational() {
        // (q; q, t, p) with q, t rational: no formal handle
        let vt = VarTable::builder().nome("p", 2).build();
        let p = params();
        let err = pochhammer(
            &vt,
            &Monomial::constant(&vt, p.q()),
            &[
                PochBase::Rational(p.q()),
                PochBase::Rational(p.t()),
                PochBase::nome(&vt, "p"),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, SeriesError::NonTruncatable(_)));
    }

    #[test]
    fn poch_log_route_matches_direct_product() {
        // For nome-degree >= 1 arguments, compare against the literal
        // truncated product over the lattice, for K_p <= 6.
        for k in 1..=6 {
            let vt = VarTable::builder().nome("p", k).build();
            let c = qq(2, 5);
            let arg = Monomial::var(&vt, "p", c.clone());
            let s = pochhammer(&vt, &arg, &[PochBase::nome(&vt, "p")]).unwrap();
            let mut direct = vt.one();
            for n in 0..=k {
                if 1 + n <= k {
                    direct = direct.mul(&vt.one().sub(&vt.var_pow("p", 1 + n, c.clone())));
                }
            }
            assert_eq!(s, direct, "mismatch at K_p = {k}");
        }
    }

    #[test]
    fn theta_leading_order() {
        // theta_p at p-order 0 -> 1 - arg
        let vt = VarTable::builder().spectral("z", 2).nome("p", 0).build();
        let arg = Monomial::var(&vt, "z", qq(1, 1));
        let th = theta(&vt, &arg, &PochBase::nome(&vt, "p")).unwrap();
        assert_eq!(th, vt.one().sub(&vt.var("z")));
    }

    #[test]
    fn theta_first_order() {
        // theta_p(z) = (1-z)(1-pz)(1-p/z) + O(p^2)
        let vt = VarTable::builder().spectral("z", 3).nome("p", 1).build();
        let arg = Monomial::var(&vt, "z", qq(1, 1));
        let th = theta(&vt, &arg, &PochBase::nome(&vt, "p")).unwrap();
        let direct = vt
            .one()
            .sub(&vt.var("z"))
            .mul(&vt.one().sub(&vt.monomial(qq(1, 1), &[1, 1])))
            .mul(&vt.one().sub(&vt.monomial(qq(1, 1), &[-1, 1])));
        assert_eq!(th, direct);
    }

    #[test]
    fn theta_quasi_periodicity() {
        // theta_p(p z) = -z^{-1} theta_p(z), checked for p-order <= 6,
        // z-window <= 8. Storage is padded by the nome budget: a term's
        // negative z-depth never exceeds its p-degree, so coefficients up to
        // the check window are exact.
        for (k, l) in [(3i32, 4i32), (6, 8)] {
            let pad = (l + k + 1) as i32;
            let vt = VarTable::builder().spectral("z", pad).nome("p", k).build();
            let base = PochBase::nome(&vt, "p");
            let z = Monomial::var(&vt, "z", qq(1, 1));
            let pz = z.mul(&base.to_monomial(&vt));
            let lhs = theta(&vt, &pz, &base).unwrap();
            let rhs = theta(&vt, &z, &base)
                .unwrap()
                .mul_monomial(&qq(-1, 1), &[-1, 0]);
            let check = VarTable::builder().spectral("z", l).nome("p", k).build();
            assert!(lhs.eq_within(&rhs, &check), "failed at K={k}, L={l}");
        }
    }

    #[test]
    fn gamma1_is_theta() {
        let vt = VarTable::builder().spectral("z", 3).nome("p", 2).build();
        let z = Monomial::var(&vt, "z", qq(1, 1));
        let base = PochBase::nome(&vt, "p");
        assert_eq!(
            elliptic_gamma(&vt, &z, std::slice::from_ref(&base)).unwrap(),
            theta(&vt, &z, &base).unwrap()
        );
    }

    #[test]
    fn gamma2_quasi_periodicity() {
        // Gamma(Q z; p, Q) = theta_p(z) Gamma(z; p, Q), nome orders <= 4;
        // storage padded by the total nome budget plus the shift
        let vt = VarTable::builder()
            .spectral("z", 12)
            .nome("p", 4)
            .nome("Q", 4)
            .build();
        let z = Monomial::var(&vt, "z", qq(1, 1));
        let bases = [PochBase::nome(&vt, "p"), PochBase::nome(&vt, "Q")];
        let qz = z.mul(&bases[1].to_monomial(&vt));
        let lhs = elliptic_gamma(&vt, &qz, &bases).unwrap();
        let rhs = theta(&vt, &z, &bases[0])
            .unwrap()
            .mul(&elliptic_gamma(&vt, &z, &bases).unwrap());
        let check = VarTable::builder()
            .spectral("z", 3)
            .nome("p", 4)
            .nome("Q", 4)
            .build();
        assert!(lhs.eq_within(&rhs, &check));
    }

    #[test]
    fn gamma3_quasi_periodicity() {
        // Gamma_3(p_3 z; p_1,p_2,p_3) = Gamma_2(z; p_1,p_2) Gamma_3(z; ...)
        let vt = VarTable::builder()
            .spectral("z", 12)
            .nome("a", 3)
            .nome("b", 3)
            .nome("c", 3)
            .build();
        let z = Monomial::var(&vt, "z", qq(1, 1));
        let bases = [
            PochBase::nome(&vt, "a"),
            PochBase::nome(&vt, "b"),
            PochBase::nome(&vt, "c"),
        ];
        let cz = z.mul(&bases[2].to_monomial(&vt));
        let lhs = elliptic_gamma(&vt, &cz, &bases).unwrap();
        let rhs = elliptic_gamma(&vt, &z, &bases[0..2])
            .unwrap()
            .mul(&elliptic_gamma(&vt, &z, &bases).unwrap());
        let check = VarTable::builder()
            .spectral("z", 2)
            .nome("a", 3)
            .nome("b", 3)
            .nome("c", 3)
            .build();
        assert!(lhs.eq_within(&rhs, &check));
    }

    #[test]
    fn gamma2_leading_structure() {
        // at all-nome order 0 the only surviving factor is 1/(1-z)
        let vt = VarTable::builder()
            .spectral("z", 3)
            .nome("p", 0)
            .nome("Q", 0)
            .build();
        let z = Monomial::var(&vt, "z", qq(1, 1));
        let bases = [PochBase::nome(&vt, "p"), PochBase::nome(&vt, "Q")];
        let g = elliptic_gamma(&vt, &z, &bases).unwrap();
        let inv = vt.one().sub(&vt.var("z")).invert().unwrap();
        assert_eq!(g, inv);
    }

    #[test]
    fn g_struct_vanishing_nome() {
        // g(z; s) at s-order 0 -> 1
        let vt = VarTable::builder().spectral("z", 3).nome("s", 0).build();
        let z = Monomial::var(&vt, "z", qq(1, 1));
        let g = g_struct(&vt, &z, &PochBase::nome(&vt, "s"), &params()).unwrap();
        assert_eq!(g, vt.one());
    }

    #[test]
    fn g_plain_first_order() {
        let vt = VarTable::builder().spectral("z", 1).build();
        let p = params();
        let z = Monomial::var(&vt, "z", qq(1, 1));
        let g = g_plain(&vt, &z, &p).unwrap();
        assert_eq!(g.coefficient(&[0]), qq(1, 1));
        assert_eq!(g.coefficient(&[1]), p.kappa(1));
    }

    #[test]
    fn f_two_route_consistency() {
        // f(z;p) from the Pochhammer quotient vs an independently written
        // mode sum.
        let p = params();
        let vt = VarTable::builder().spectral("z", 4).nome("p", 3).build();
        let z = Monomial::var(&vt, "z", qq(1, 1));
        let f = f_struct(&vt, &z, &PochBase::nome(&vt, "p"), &p).unwrap();
        let mut logsum = vt.zero();
        for m in 1..=4i64 {
            let bracket = pow_i64(&p.q(), -m) + pow_i64(&p.t(), m) + pow_i64(&(p.q() / p.t()), m)
                - pow_i64(&p.q(), m)
                - pow_i64(&p.t(), -m)
                - pow_i64(&(p.t() / p.q()), m);
            let mut geom = vt.zero();
            let mut k = 0;
            while k * m <= 3 {
                geom = geom.add(&vt.monomial(QQ::one(), &[0, (k * m) as i32]));
                k += 1;
            }
            let zpow = vt.monomial(QQ::one(), &[m as i32, 0]);
            logsum = logsum.add(
                &zpow
                    .mul(&geom)
                    .scale(&(-bracket / QQ::from_integer(m.into()))),
            );
        }
        let f2 = logsum.exp_series().unwrap();
        assert_eq!(f, f2);
    }

    #[test]
    fn g_theta_properties() {
        let p = params();
        // p-order 0 reduction: rational ratio expanded in z
        let vt0 = VarTable::builder().spectral("z", 4).nome("p", 0).build();
        let z = Monomial::var(&vt0, "z", qq(1, 1));
        let g0 = g_theta(&vt0, &z, &PochBase::nome(&vt0, "p"), &p).unwrap();
        let q = p.q();
        let t = p.t();
        let lin = |c: QQ| vt0.one().sub(&vt0.var_pow("z", 1, c));
        let num = lin(q.clone().recip())
            .mul(&lin(q.clone() / t.clone()))
            .mul(&lin(t.clone()));
        let den = lin(q.clone())
            .mul(&lin(t.clone() / q.clone()))
            .mul(&lin(t.clone().recip()));
        assert_eq!(g0, num.div(&den).unwrap());

        // g_theta(pz; p) = g_theta(z; p), p-order <= 6, z-window <= 8 on the
        // check window with nome-budget padding on storage
        let vt = VarTable::builder().spectral("z", 15).nome("p", 6).build();
        let base = PochBase::nome(&vt, "p");
        let z = Monomial::var(&vt, "z", qq(1, 1));
        let pz = z.mul(&base.to_monomial(&vt));
        let lhs = g_theta(&vt, &pz, &base, &p).unwrap();
        let rhs = g_theta(&vt, &z, &base, &p).unwrap();
        let check = VarTable::builder().spectral("z", 8).nome("p", 6).build();
        assert!(lhs.eq_within(&rhs, &check));

        // g_theta(z^{-1}; p) = g_theta(z; p)^{-1}
        let zinv = z.inv();
        let lhs2 = g_theta(&vt, &zinv, &base, &p).unwrap();
        let rhs2 = g_theta(&vt, &z, &base, &p).unwrap().invert().unwrap();
        assert!(lhs2.eq_within(&rhs2, &check));
    }

    #[test]
    fn pfe_small_cases() {
        let vt = VarTable::builder().nome("p", 4).build();
        // m = 2 with the balancing condition
        let s = qq(7, 5);
        let a = vec![qq(2, 3), qq(5, 7)];
        let b0 = qq(3, 4);
        let b1 = qq(11, 6);
        let b2 = a[0].clone() * a[1].clone() * s.clone() / (b0.clone() * b1.clone());
        assert!(pfe_holds(&vt, "p", &s, &a, &[b0, b1, b2]).unwrap());
    }

    #[test]
    fn delta_and_regions() {
        let vt = VarTable::builder().spectral("z", 3).build();
        let z2 = Monomial::var(&vt, "z", qq(2, 1));
        let d = delta_series(&vt, &z2).unwrap();
        for k in -3..=3 {
            assert_eq!(d.coefficient(&[k]), pow_i64(&qq(2, 1), k as i64));
        }
        // 1/(1-z)|small - 1/(1-z)|large = delta(z)
        let zeros: [QQ; 0] = [];
        let res = rational_residues(&zeros, &[qq(1, 1)]);
        assert_eq!(res, vec![qq(1, 1)]);
        let z = Monomial::var(&vt, "z", qq(1, 1));
        let small = linear_inv_region(&vt, &z, Region::Small).unwrap();
        let large = linear_inv_region(&vt, &z, Region::Large).unwrap();
        let diff = small.sub(&large);
        let delta = delta_series(&vt, &z).unwrap();
        assert_eq!(diff, delta);
    }
}

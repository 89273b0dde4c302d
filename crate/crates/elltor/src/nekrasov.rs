//! Partition-indexed kernels: the combinatorial factors `c`, `c'` and their
//! elliptic versions, the dressing factors `N_lambda(p)`, `N'_lambda(p)`, the
//! Nekrasov function in box and row forms with its theta and elliptic-Gamma
//! analogues, the affine-quiver weight `Z`, the mode coefficients
//! `E_{lambda,m}`, and the ladder coefficients `A`, `B` of the q-Fock action.
//!
//! Every kernel has exactly one canonical form (the box product); the
//! alternative row/quotient/recurrence forms live here too but are only
//! exercised by the verification suites.
//!
//! Ladder products use zero-padded ladders `u_i = q^{lambda_i} t^{1-i} u`
//! (rows beyond the length contribute `lambda_i = 0`); the products are
//! stable under enlarging the padded range, which the suites check.

use crate::params::{pow_i64, ParamPoint, QQ};
use crate::partition::{finite_pochhammer, Partition};
use crate::series::{Monomial, SeriesError, TruncSeries, VarTable};
use crate::special::{elliptic_gamma, pochhammer, theta, PochBase};
use num::{One, Zero};

/// `c_lambda = prod (1 - q^{a} t^{l+1})`, exact rational.
pub fn c_factor(lambda: &Partition, params: &ParamPoint) -> QQ {
    let mut acc = QQ::one();
    for b in lambda.boxes() {
        acc *= QQ::one() - params.qt_pow(lambda.arm(b), lambda.leg(b) + 1);
    }
    acc
}

/// `c'_lambda = prod (1 - q^{a+1} t^{l})`.
pub fn c_prime_factor(lambda: &Partition, params: &ParamPoint) -> QQ {
    let mut acc = QQ::one();
    for b in lambda.boxes() {
        acc *= QQ::one() - params.qt_pow(lambda.arm(b) + 1, lambda.leg(b));
    }
    acc
}

/// Double-index quotient form of `c_lambda`:
/// `prod_{1<=i<=j<=l} (q^{lambda_i-lambda_j} t^{j-i+1}; q)_{lambda_j - lambda_{j+1}}`.
pub fn c_factor_quotient_form(lambda: &Partition, params: &ParamPoint) -> QQ {
    let l = lambda.len();
    let q = params.q();
    let mut acc = QQ::one();
    for i in 1..=l {
        for j in i..=l {
            let x = params.qt_pow(
                lambda.part(i) as i64 - lambda.part(j) as i64,
                j as i64 - i as i64 + 1,
            );
            acc *= finite_pochhammer(&x, &q, lambda.part(j) - lambda.part(j + 1));
        }
    }
    acc
}

/// Double-index quotient form of `c'_lambda`.
pub fn c_prime_factor_quotient_form(lambda: &Partition, params: &ParamPoint) -> QQ {
    let l = lambda.len();
    let q = params.q();
    let mut acc = QQ::one();
    for i in 1..=l {
        for j in i..=l {
            let x = params.qt_pow(
                lambda.part(i) as i64 - lambda.part(j) as i64 + 1,
                j as i64 - i as i64,
            );
            acc *= finite_pochhammer(&x, &q, lambda.part(j) - lambda.part(j + 1));
        }
    }
    acc
}

/// Elliptic `c_lambda(p) = prod theta_p(q^a t^{l+1})`.
pub fn c_factor_elliptic(
    vt: &VarTable,
    lambda: &Partition,
    params: &ParamPoint,
    base: &PochBase,
) -> Result<TruncSeries, SeriesError> {
    let base = base.clone();
    let mut acc = vt.one();
    for b in lambda.boxes() {
        let c = params.qt_pow(lambda.arm(b), lambda.leg(b) + 1);
        acc = acc.mul(&theta(vt, &Monomial::constant(vt, c), &base)?);
    }
    Ok(acc)
}

/// Elliptic `c'_lambda(p) = prod theta_p(q^{a+1} t^{l})`.
pub fn c_prime_factor_elliptic(
    vt: &VarTable,
    lambda: &Partition,
    params: &ParamPoint,
    base: &PochBase,
) -> Result<TruncSeries, SeriesError> {
    let base = base.clone();
    let mut acc = vt.one();
    for b in lambda.boxes() {
        let c = params.qt_pow(lambda.arm(b) + 1, lambda.leg(b));
        acc = acc.mul(&theta(vt, &Monomial::constant(vt, c), &base)?);
    }
    Ok(acc)
}

/// The elliptic-Gamma quotient form of `c_lambda(p)` requires
/// `Gamma(q^{..} t^{..}; q, p)` at purely rational arguments over the
/// rational base `q`; these have no formal handle. The suites record this as
/// a skip, which this probe makes explicit.
pub fn c_factor_elliptic_gamma_form(
    vt: &VarTable,
    lambda: &Partition,
    params: &ParamPoint,
    nome: &str,
) -> Result<TruncSeries, SeriesError> {
    let bases = [PochBase::Rational(params.q()), PochBase::nome(vt, nome)];
    let l = lambda.len();
    let mut acc = vt.one();
    for i in 1..=l {
        for j in i..=l {
            let num = params.qt_pow(
                lambda.part(i) as i64 - lambda.part(j + 1) as i64,
                j as i64 - i as i64 + 1,
            );
            let den = params.qt_pow(
                lambda.part(i) as i64 - lambda.part(j) as i64,
                j as i64 - i as i64 + 1,
            );
            acc = acc.mul(&elliptic_gamma(vt, &Monomial::constant(vt, num), &bases)?);
            acc = acc.div(&elliptic_gamma(vt, &Monomial::constant(vt, den), &bases)?)?;
        }
    }
    Ok(acc)
}

/// `N_lambda(p) = prod_box (p q^{a+1} t^{l}; p)_inf / (p q^{a} t^{l+1}; p)_inf`.
pub fn n_factor(
    vt: &VarTable,
    lambda: &Partition,
    params: &ParamPoint,
    base: &PochBase,
) -> Result<TruncSeries, SeriesError> {
    let base = [base.clone()];
    let p_mono = base[0].to_monomial(vt);
    let mut acc = vt.one();
    for b in lambda.boxes() {
        let num = p_mono.scale(&params.qt_pow(lambda.arm(b) + 1, lambda.leg(b)));
        let den = p_mono.scale(&params.qt_pow(lambda.arm(b), lambda.leg(b) + 1));
        acc = acc.mul(&pochhammer(vt, &num, &base)?);
        acc = acc.div(&pochhammer(vt, &den, &base)?)?;
    }
    Ok(acc)
}

/// `N'_lambda(p) = prod_box (p q^{-a} t^{-l-1}; p)_inf / (p q^{-a-1} t^{-l}; p)_inf`.
pub fn n_prime_factor(
    vt: &VarTable,
    lambda: &Partition,
    params: &ParamPoint,
    base: &PochBase,
) -> Result<TruncSeries, SeriesError> {
    let base = [base.clone()];
    let p_mono = base[0].to_monomial(vt);
    let mut acc = vt.one();
    for b in lambda.boxes() {
        let num = p_mono.scale(&params.qt_pow(-lambda.arm(b), -lambda.leg(b) - 1));
        let den = p_mono.scale(&params.qt_pow(-lambda.arm(b) - 1, -lambda.leg(b)));
        acc = acc.mul(&pochhammer(vt, &num, &base)?);
        acc = acc.div(&pochhammer(vt, &den, &base)?)?;
    }
    Ok(acc)
}

/// Right side of the defining recurrence for `N_lambda(p)/N_{lambda+1_i}(p)`,
/// over the zero-padded ladder of `lambda` with range `max(len, i)`.
pub fn n_factor_recurrence_rhs(
    vt: &VarTable,
    lambda: &Partition,
    i: u32,
    params: &ParamPoint,
    base: &PochBase,
) -> Result<TruncSeries, SeriesError> {
    let base = [base.clone()];
    let p_mono = base[0].to_monomial(vt);
    let q = params.q();
    let t = params.t();
    let l = lambda.len().max(i);
    let r = |j: u32| lambda.ladder_ratio(j, params);
    let mut acc = vt.one();
    let mut mul_poch = |acc: &mut TruncSeries, c: QQ, inverse: bool| -> Result<(), SeriesError> {
        let s = pochhammer(vt, &p_mono.scale(&c), &base)?;
        *acc = if inverse { acc.div(&s)? } else { acc.mul(&s) };
        Ok(())
    };
    for j in 1..i {
        mul_poch(&mut acc, r(j) / (t.clone() * r(i)), false)?;
        mul_poch(&mut acc, t.clone() * r(j) / (q.clone() * r(i)), false)?;
        mul_poch(&mut acc, r(j) / (q.clone() * r(i)), true)?;
        mul_poch(&mut acc, r(j) / r(i), true)?;
    }
    for j in i + 1..=l {
        mul_poch(&mut acc, q.clone() * r(i) / r(j), false)?;
        mul_poch(&mut acc, t.clone() * r(i) / r(j), true)?;
    }
    for j in i + 1..=l + 1 {
        mul_poch(&mut acc, r(i) / r(j), false)?;
        mul_poch(&mut acc, q.clone() * r(i) / (t.clone() * r(j)), true)?;
    }
    Ok(acc)
}

/// The multiset of box weights `e` such that
/// `N_{lambda mu}(x) = prod_e (1 - x e)`.
pub fn nekrasov_weights(lambda: &Partition, mu: &Partition, params: &ParamPoint) -> Vec<QQ> {
    let mut out = Vec::new();
    for b in lambda.boxes() {
        out.push(params.qt_pow(-mu.arm(b) - 1, -lambda.leg(b)));
    }
    for b in mu.boxes() {
        out.push(params.qt_pow(lambda.arm(b), mu.leg(b) + 1));
    }
    out
}

/// Which equivalent expression of the Nekrasov function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NekForm {
    /// canonical box product
    Box,
    /// quotient of infinite q-Pochhammers, double-index form
    RowA,
    /// finite q-Pochhammer double-index form
    RowB,
    /// infinite q-Pochhammer form with the boundary row factors
    RowC,
}

/// 5d Nekrasov function `N_{lambda mu}(x)` for a monomial argument, in any of
/// its four equivalent forms. Row forms take a row bound `ell >=
/// max(len(lambda), len(mu))`; the value is independent of the choice.
pub fn nekrasov_5d(
    vt: &VarTable,
    lambda: &Partition,
    mu: &Partition,
    x: &Monomial,
    params: &ParamPoint,
    form: NekForm,
    row_bound: Option<u32>,
) -> Result<TruncSeries, SeriesError> {
    let q = params.q();
    let ell = row_bound
        .unwrap_or_else(|| lambda.len().max(mu.len()))
        .max(lambda.len())
        .max(mu.len());
    match form {
        NekForm::Box => {
            let mut acc = vt.one();
            for e in nekrasov_weights(lambda, mu, params) {
                acc = acc.mul(&vt.one().sub(&x.scale(&e).to_series(vt)));
            }
            Ok(acc)
        }
        NekForm::RowB => {
            let mut acc = vt.one();
            for i in 1..=ell {
                for j in i..=ell {
                    let c = params.qt_pow(
                        lambda.part(j + 1) as i64 - mu.part(i) as i64,
                        i as i64 - j as i64,
                    );
                    let n = lambda.part(j) - lambda.part(j + 1);
                    let mut cur = x.scale(&c);
                    for _ in 0..n {
                        acc = acc.mul(&vt.one().sub(&cur.to_series(vt)));
                        cur = cur.scale(&q);
                    }
                }
            }
            for r in 1..=ell {
                for s in r..=ell {
                    let c = params.qt_pow(
                        lambda.part(r) as i64 - mu.part(s) as i64,
                        s as i64 - r as i64 + 1,
                    );
                    let n = mu.part(s) - mu.part(s + 1);
                    let mut cur = x.scale(&c);
                    for _ in 0..n {
                        acc = acc.mul(&vt.one().sub(&cur.to_series(vt)));
                        cur = cur.scale(&q);
                    }
                }
            }
            Ok(acc)
        }
        NekForm::RowA => {
            let qb = [PochBase::Rational(q)];
            let mut acc = vt.one();
            for i in 1..=ell {
                for j in i..=ell {
                    let num = params.qt_pow(
                        lambda.part(j + 1) as i64 - mu.part(i) as i64,
                        i as i64 - j as i64,
                    );
                    let den = params.qt_pow(
                        lambda.part(j) as i64 - mu.part(i) as i64,
                        i as i64 - j as i64,
                    );
                    acc = acc.mul(&pochhammer(vt, &x.scale(&num), &qb)?);
                    acc = acc.div(&pochhammer(vt, &x.scale(&den), &qb)?)?;
                }
            }
            for r in 1..=ell {
                for s in r..=ell {
                    let num = params.qt_pow(
                        lambda.part(r) as i64 - mu.part(s) as i64,
                        s as i64 - r as i64 + 1,
                    );
                    let den = params.qt_pow(
                        lambda.part(r) as i64 - mu.part(s + 1) as i64,
                        s as i64 - r as i64 + 1,
                    );
                    acc = acc.mul(&pochhammer(vt, &x.scale(&num), &qb)?);
                    acc = acc.div(&pochhammer(vt, &x.scale(&den), &qb)?)?;
                }
            }
            Ok(acc)
        }
        NekForm::RowC => {
            let qb = [PochBase::Rational(q)];
            let mut acc = vt.one();
            for i in 1..=ell {
                for j in 1..=ell {
                    let num = params.qt_pow(
                        lambda.part(i) as i64 - mu.part(j) as i64,
                        j as i64 - i as i64 + 1,
                    );
                    let den = params.qt_pow(
                        lambda.part(i) as i64 - mu.part(j) as i64,
                        j as i64 - i as i64,
                    );
                    acc = acc.mul(&pochhammer(vt, &x.scale(&num), &qb)?);
                    acc = acc.div(&pochhammer(vt, &x.scale(&den), &qb)?)?;
                }
            }
            for r in 1..=ell {
                let num = params.qt_pow(-(mu.part(r) as i64), r as i64 - ell as i64);
                let den = params.qt_pow(lambda.part(r) as i64, ell as i64 - r as i64 + 1);
                acc = acc.mul(&pochhammer(vt, &x.scale(&num), &qb)?);
                acc = acc.div(&pochhammer(vt, &x.scale(&den), &qb)?)?;
            }
            Ok(acc)
        }
    }
}

/// Box-form Nekrasov function at an exact rational argument.
pub fn nekrasov_5d_rational(
    lambda: &Partition,
    mu: &Partition,
    x: &QQ,
    params: &ParamPoint,
) -> QQ {
    let mut acc = QQ::one();
    for e in nekrasov_weights(lambda, mu, params) {
        acc *= QQ::one() - x.clone() * e;
    }
    acc
}

/// Theta analogue: `N^theta_{lambda mu}(x; nome) = prod_e theta(x e)`.
pub fn nekrasov_theta(
    vt: &VarTable,
    lambda: &Partition,
    mu: &Partition,
    x: &Monomial,
    base: &PochBase,
    params: &ParamPoint,
) -> Result<TruncSeries, SeriesError> {
    let base = base.clone();
    let mut acc = vt.one();
    for e in nekrasov_weights(lambda, mu, params) {
        acc = acc.mul(&theta(vt, &x.scale(&e), &base)?);
    }
    Ok(acc)
}

/// Elliptic-Gamma analogue: `N^Gamma_{lambda mu}(x; b1, b2) = prod_e Gamma(x e)`.
pub fn nekrasov_gamma(
    vt: &VarTable,
    lambda: &Partition,
    mu: &Partition,
    x: &Monomial,
    bases: &[PochBase],
    params: &ParamPoint,
) -> Result<TruncSeries, SeriesError> {
    let mut acc = vt.one();
    for e in nekrasov_weights(lambda, mu, params) {
        acc = acc.mul(&elliptic_gamma(vt, &x.scale(&e), bases)?);
    }
    Ok(acc)
}

/// Affine-quiver weight, box form:
/// `Z_lambda = prod_box (1 - p q^{a+1} t^{l})(1 - p q^{-a} t^{-l-1})
///           / ((1 - q^{a+1} t^{l})(1 - q^{-a} t^{-l-1}))`.
pub fn z_affine(
    vt: &VarTable,
    lambda: &Partition,
    params: &ParamPoint,
    nome: &str,
) -> Result<TruncSeries, SeriesError> {
    z_affine_general(vt, lambda, &params.q(), &params.t(), nome, &QQ::one())
}

/// The same box formula with substituted parameter values `q -> qv`,
/// `t -> tv` and nome scaled by `p_scale` (so the third slot can be
/// `p * q/t` etc. while staying a formal series in the nome).
pub fn z_affine_general(
    vt: &VarTable,
    lambda: &Partition,
    qv: &QQ,
    tv: &QQ,
    nome: &str,
    p_scale: &QQ,
) -> Result<TruncSeries, SeriesError> {
    let p_mono = Monomial::var(vt, nome, p_scale.clone());
    let mut acc = vt.one();
    for b in lambda.boxes() {
        let a = lambda.arm(b);
        let l = lambda.leg(b);
        let e1 = pow_i64(qv, a + 1) * pow_i64(tv, l);
        let e2 = pow_i64(qv, -a) * pow_i64(tv, -l - 1);
        let num = vt
            .one()
            .sub(&p_mono.scale(&e1).to_series(vt))
            .mul(&vt.one().sub(&p_mono.scale(&e2).to_series(vt)));
        let den = (QQ::one() - e1) * (QQ::one() - e2);
        acc = acc.mul(&num).scale(&den.recip());
    }
    Ok(acc)
}

/// Nekrasov-ratio form `Z_lambda = N_{ll}(p q/t) / N_{ll}(q/t)`.
pub fn z_affine_ratio_form(
    vt: &VarTable,
    lambda: &Partition,
    params: &ParamPoint,
    nome: &str,
) -> Result<TruncSeries, SeriesError> {
    let qt = params.q() / params.t();
    let p_arg = Monomial::var(vt, nome, qt.clone());
    let num = nekrasov_5d(vt, lambda, lambda, &p_arg, params, NekForm::Box, None)?;
    let den = nekrasov_5d_rational(lambda, lambda, &qt, params);
    Ok(num.scale(&den.recip()))
}

/// `E_{lambda,m} = 1/(1-t^m) + sum_j (q^{-m lambda_j} - 1) t^{m(j-1)}`.
pub fn e_coefficient(lambda: &Partition, m: i64, params: &ParamPoint) -> QQ {
    assert!(m != 0);
    let t = params.t();
    let q = params.q();
    let mut acc = (QQ::one() - pow_i64(&t, m)).recip();
    for j in 1..=lambda.len() {
        acc += (pow_i64(&q, -m * lambda.part(j) as i64) - QQ::one())
            * pow_i64(&t, m * (j as i64 - 1));
    }
    acc
}

/// Addable/removable-corner form of `E_{lambda,m}`:
/// `1/(1-t^m) (sum_{A} (q^box)^m - (t/q)^m sum_{R} (q^box)^m)`.
pub fn e_coefficient_corner_form(lambda: &Partition, m: i64, params: &ParamPoint) -> QQ {
    assert!(m != 0);
    let t = params.t();
    let tq = params.t() / params.q();
    let mut acc = QQ::zero();
    for b in lambda.addable() {
        acc += pow_i64(&Partition::box_weight(b, params), m);
    }
    let mut rem = QQ::zero();
    for b in lambda.removable() {
        rem += pow_i64(&Partition::box_weight(b, params), m);
    }
    (acc - pow_i64(&tq, m) * rem) * (QQ::one() - pow_i64(&t, m)).recip()
}

/// The pairing identity behind the operator products:
/// `-(1-t^m)/(1-q^m) E_{lambda,-m} E_{mu,m}
///  = t^m/((1-q^m)(1-t^m)) + sum_{box in mu} q^{m a_lambda} t^{m(l_mu+1)}
///    + sum_{box in lambda} q^{-m(a_mu+1)} t^{-m l_lambda}`.
pub fn ce_pairing_holds(lambda: &Partition, mu: &Partition, m: i64, params: &ParamPoint) -> bool {
    assert!(m != 0);
    let q = params.q();
    let t = params.t();
    let lhs = -(QQ::one() - pow_i64(&t, m)) / (QQ::one() - pow_i64(&q, m))
        * e_coefficient(lambda, -m, params)
        * e_coefficient(mu, m, params);
    let mut rhs =
        pow_i64(&t, m) / ((QQ::one() - pow_i64(&q, m)) * (QQ::one() - pow_i64(&t, m)));
    for b in mu.boxes() {
        rhs += pow_i64(&q, m * lambda.arm(b)) * pow_i64(&t, m * (mu.leg(b) + 1));
    }
    for b in lambda.boxes() {
        rhs += pow_i64(&q, -m * (mu.arm(b) + 1)) * pow_i64(&t, -m * lambda.leg(b));
    }
    lhs == rhs
}

/// `A^+_{lambda,i}(p)` for `1 <= i <= len+1`: vanishes exactly when
/// `lambda + 1_i` is not a partition.
pub fn rep_a_plus(
    vt: &VarTable,
    lambda: &Partition,
    i: u32,
    params: &ParamPoint,
    base: &PochBase,
) -> Result<TruncSeries, SeriesError> {
    assert!(i >= 1 && i <= lambda.len() + 1, "index out of range");
    let base = base.clone();
    let q = params.q();
    let t = params.t();
    let r = |j: u32| lambda.ladder_ratio(j, params);
    let mut acc = vt.one();
    for j in 1..i {
        let rij = r(i) / r(j);
        acc = acc.mul(&theta(vt, &Monomial::constant(vt, t.clone() * rij.clone()), &base)?);
        acc = acc.mul(&theta(
            vt,
            &Monomial::constant(vt, q.clone() / t.clone() * rij.clone()),
            &base,
        )?);
        acc = acc.div(&theta(vt, &Monomial::constant(vt, q.clone() * rij.clone()), &base)?)?;
        acc = acc.div(&theta(vt, &Monomial::constant(vt, rij), &base)?)?;
    }
    Ok(acc)
}

/// `A^-_{lambda,i}(p)` for `1 <= i <= len`: vanishes exactly when
/// `lambda - 1_i` is not a partition.
pub fn rep_a_minus(
    vt: &VarTable,
    lambda: &Partition,
    i: u32,
    params: &ParamPoint,
    base: &PochBase,
) -> Result<TruncSeries, SeriesError> {
    rep_a_minus_padded(vt, lambda, i, params, base, lambda.len())
}

/// `A^-` over the zero-padded ladder with explicit bound `ell >= len`;
/// the value is bound-independent.
pub fn rep_a_minus_padded(
    vt: &VarTable,
    lambda: &Partition,
    i: u32,
    params: &ParamPoint,
    base: &PochBase,
    ell: u32,
) -> Result<TruncSeries, SeriesError> {
    assert!(i >= 1 && i <= lambda.len().max(1), "index out of range");
    let ell = ell.max(lambda.len());
    let base = base.clone();
    let q = params.q();
    let t = params.t();
    let r = |j: u32| lambda.ladder_ratio(j, params);
    let mut acc = vt.one();
    for j in i + 1..=ell {
        let rji = r(j) / r(i);
        acc = acc.mul(&theta(
            vt,
            &Monomial::constant(vt, q.clone() / t.clone() * rji.clone()),
            &base,
        )?);
        acc = acc.div(&theta(vt, &Monomial::constant(vt, rji), &base)?)?;
    }
    for j in i + 1..=ell + 1 {
        let rji = r(j) / r(i);
        acc = acc.mul(&theta(vt, &Monomial::constant(vt, t.clone() * rji.clone()), &base)?);
        acc = acc.div(&theta(vt, &Monomial::constant(vt, q.clone() * rji), &base)?)?;
    }
    Ok(acc)
}

/// Primed variant `A^{+'}_{lambda,i}(p)`, padded range `ell >= max(len, i)`.
pub fn rep_a_plus_primed(
    vt: &VarTable,
    lambda: &Partition,
    i: u32,
    params: &ParamPoint,
    base: &PochBase,
) -> Result<TruncSeries, SeriesError> {
    assert!(i >= 1 && i <= lambda.len() + 1, "index out of range");
    let ell = lambda.len().max(i);
    let base = base.clone();
    let q = params.q();
    let t = params.t();
    let r = |j: u32| lambda.ladder_ratio(j, params);
    let mut acc = vt.one();
    for j in i + 1..=ell {
        let rij = r(i) / r(j);
        acc = acc.mul(&theta(vt, &Monomial::constant(vt, t.clone() * rij.clone()), &base)?);
        acc = acc.div(&theta(vt, &Monomial::constant(vt, q.clone() * rij), &base)?)?;
    }
    for j in i + 1..=ell + 1 {
        let rij = r(i) / r(j);
        acc = acc.mul(&theta(
            vt,
            &Monomial::constant(vt, q.clone() / t.clone() * rij.clone()),
            &base,
        )?);
        acc = acc.div(&theta(vt, &Monomial::constant(vt, rij), &base)?)?;
    }
    Ok(acc)
}

/// Primed variant `A^{-'}_{lambda,i}(p)`, defined through the elliptic
/// c-factor dressing of `A^-`:
/// `A^{-'}_{l,i} = c_l(p) c'_{l-1_i}(p) / (c'_l(p) c_{l-1_i}(p)) A^-_{l,i}(p)`.
/// Requires `lambda - 1_i` to be a partition. The bare ladder product over
/// `j < i` equals this up to a factor `t/q`, which the dressing fixes.
pub fn rep_a_minus_primed(
    vt: &VarTable,
    lambda: &Partition,
    i: u32,
    params: &ParamPoint,
    base: &PochBase,
) -> Result<TruncSeries, SeriesError> {
    assert!(i >= 1 && i <= lambda.len(), "index out of range");
    let prev = lambda
        .remove_at(i)
        .expect("A^-' needs a removable row");
    let ratio = c_factor_elliptic(vt, lambda, params, base)?
        .mul(&c_prime_factor_elliptic(vt, &prev, params, base)?)
        .div(&c_prime_factor_elliptic(vt, lambda, params, base)?)?
        .div(&c_factor_elliptic(vt, &prev, params, base)?)?;
    Ok(ratio.mul(&rep_a_minus(vt, lambda, i, params, base)?))
}

/// Bare ladder product over `j < i` paired with `A^{-'}`; kept for the
/// regression that it reproduces `A^+_{lambda-1_i,i}` exactly.
pub fn rep_a_minus_primed_ladder(
    vt: &VarTable,
    lambda: &Partition,
    i: u32,
    params: &ParamPoint,
    base: &PochBase,
) -> Result<TruncSeries, SeriesError> {
    assert!(i >= 1 && i <= lambda.len(), "index out of range");
    let base = base.clone();
    let q = params.q();
    let t = params.t();
    let r = |j: u32| lambda.ladder_ratio(j, params);
    let mut acc = vt.one();
    for j in 1..i {
        let rji = r(j) / r(i);
        acc = acc.mul(&theta(vt, &Monomial::constant(vt, t.clone() * rji.clone()), &base)?);
        acc = acc.mul(&theta(
            vt,
            &Monomial::constant(vt, q.clone() / t.clone() * rji.clone()),
            &base,
        )?);
        acc = acc.div(&theta(vt, &Monomial::constant(vt, q.clone() * rji.clone()), &base)?)?;
        acc = acc.div(&theta(vt, &Monomial::constant(vt, rji), &base)?)?;
    }
    Ok(acc)
}

/// `B^+_lambda(x; p)` with `x` standing for `u/z`:
/// `prod_{i<=ell} theta(r_i x / t)/theta(r_i x / q)
///  prod_{i<=ell+1} theta(t r_i x / q)/theta(r_i x)`.
pub fn rep_b_plus(
    vt: &VarTable,
    lambda: &Partition,
    x: &Monomial,
    params: &ParamPoint,
    base: &PochBase,
) -> Result<TruncSeries, SeriesError> {
    rep_b_plus_padded(vt, lambda, x, params, base, lambda.len())
}

/// `B^+` with explicit padded range.
pub fn rep_b_plus_padded(
    vt: &VarTable,
    lambda: &Partition,
    x: &Monomial,
    params: &ParamPoint,
    base: &PochBase,
    ell: u32,
) -> Result<TruncSeries, SeriesError> {
    let ell = ell.max(lambda.len());
    let base = base.clone();
    let q = params.q();
    let t = params.t();
    let mut acc = vt.one();
    for i in 1..=ell {
        let ri = lambda.ladder_ratio(i, params);
        acc = acc.mul(&theta(vt, &x.scale(&(ri.clone() / t.clone())), &base)?);
        acc = acc.div(&theta(vt, &x.scale(&(ri / q.clone())), &base)?)?;
    }
    for i in 1..=ell + 1 {
        let ri = lambda.ladder_ratio(i, params);
        acc = acc.mul(&theta(vt, &x.scale(&(t.clone() * ri.clone() / q.clone())), &base)?);
        acc = acc.div(&theta(vt, &x.scale(&ri), &base)?)?;
    }
    Ok(acc)
}

/// `B^+` with fixed expansion region for the undamped linear factor of each
/// denominator theta (the numerator thetas are region-free polynomials).
/// `Region::Small` expands `1/(1-arg)` in powers of its own monomial.
pub fn rep_b_plus_regional(
    vt: &VarTable,
    lambda: &Partition,
    x: &Monomial,
    params: &ParamPoint,
    base: &PochBase,
    region: crate::special::Region,
) -> Result<TruncSeries, SeriesError> {
    let ell = lambda.len();
    let q = params.q();
    let t = params.t();
    let mut acc = vt.one();
    for i in 1..=ell {
        let ri = lambda.ladder_ratio(i, params);
        acc = acc.mul(&theta(vt, &x.scale(&(ri.clone() / t.clone())), base)?);
        acc = acc.mul(&theta_inv_regional(vt, &x.scale(&(ri / q.clone())), base, region)?);
    }
    for i in 1..=ell + 1 {
        let ri = lambda.ladder_ratio(i, params);
        acc = acc.mul(&theta(vt, &x.scale(&(t.clone() * ri.clone() / q.clone())), base)?);
        acc = acc.mul(&theta_inv_regional(vt, &x.scale(&ri), base, region)?);
    }
    Ok(acc)
}

/// `1/theta(arg)` with the expansion region of the undamped `(1-arg)` factor
/// fixed by the caller; the nome-damped rest inverts region-free.
fn theta_inv_regional(
    vt: &VarTable,
    arg: &Monomial,
    base: &PochBase,
    region: crate::special::Region,
) -> Result<TruncSeries, SeriesError> {
    let b = base.to_monomial(vt);
    let damped = pochhammer(vt, &arg.mul(&b), std::slice::from_ref(base))?
        .mul(&pochhammer(vt, &b.mul(&arg.inv()), std::slice::from_ref(base))?);
    crate::special::linear_inv_region(vt, arg, region).and_then(|lin| Ok(lin.mul(&damped.invert()?)))
}

/// `B^-_lambda(y; p)` with `y` standing for `z/u`:
/// `prod_{i<=ell} theta(t y / r_i)/theta(q y / r_i)
///  prod_{i<=ell+1} theta(q y / (t r_i))/theta(y / r_i)`.
pub fn rep_b_minus(
    vt: &VarTable,
    lambda: &Partition,
    y: &Monomial,
    params: &ParamPoint,
    base: &PochBase,
) -> Result<TruncSeries, SeriesError> {
    let ell = lambda.len();
    let base = base.clone();
    let q = params.q();
    let t = params.t();
    let mut acc = vt.one();
    for i in 1..=ell {
        let ri = lambda.ladder_ratio(i, params);
        acc = acc.mul(&theta(vt, &y.scale(&(t.clone() / ri.clone())), &base)?);
        acc = acc.div(&theta(vt, &y.scale(&(q.clone() / ri)), &base)?)?;
    }
    for i in 1..=ell + 1 {
        let ri = lambda.ladder_ratio(i, params);
        acc = acc.mul(&theta(
            vt,
            &y.scale(&(q.clone() / (t.clone() * ri.clone()))),
            &base,
        )?);
        acc = acc.div(&theta(vt, &y.scale(&ri.recip()), &base)?)?;
    }
    Ok(acc)
}

/// `c'_lambda/c_lambda * N_lambda(p)/N'_lambda(p) = c'_lambda(p)/c_lambda(p)`.
pub fn clapcplap_holds(
    vt: &VarTable,
    lambda: &Partition,
    params: &ParamPoint,
    base: &PochBase,
) -> Result<bool, SeriesError> {
    let lhs_scalar = c_prime_factor(lambda, params) / c_factor(lambda, params);
    let lhs = n_factor(vt, lambda, params, base)?
        .div(&n_prime_factor(vt, lambda, params, base)?)?
        .scale(&lhs_scalar);
    let rhs = c_prime_factor_elliptic(vt, lambda, params, base)?
        .div(&c_factor_elliptic(vt, lambda, params, base)?)?;
    Ok(lhs == rhs)
}

/// The product-of-g identity behind the `psi^+` intertwining scalar, in its
/// two-sided form: with `x = u/z`,
/// `prod_{(i,j) in lambda} g(x^{-1}/c; p) / ( g(c x) g(c x; p) )
///  = B^+_lambda(x; p) / B^+_empty(x; p)`,
/// `c = q^{j-1} t^{1-i}` per box. Both sides are series in the annulus
/// `|p| < |x| < 1`; the one-sided theta-quotient shorthand for the right
/// side resums this analytically.
pub fn prodg_b_holds(
    vt: &VarTable,
    lambda: &Partition,
    params: &ParamPoint,
    base: &PochBase,
    check: &VarTable,
    x_name: &str,
) -> Result<bool, SeriesError> {
    let x = Monomial::var(vt, x_name, QQ::one());
    let mut lhs = vt.one();
    for b in lambda.boxes() {
        let c = params.qt_pow(b.col as i64 - 1, 1 - b.row as i64);
        let num = crate::special::g_struct(vt, &x.inv().scale(&c.clone().recip()), base, params)?;
        let den = crate::special::g_plain(vt, &x.scale(&c.clone()), params)?
            .mul(&crate::special::g_struct(vt, &x.scale(&c), base, params)?);
        lhs = lhs.mul(&num).mul(&den.invert()?);
    }
    let rhs = rep_b_plus(vt, lambda, &x, params, base)?
        .div(&rep_b_plus(vt, &Partition::empty(), &x, params, base)?)?;
    Ok(lhs.eq_within(&rhs, check))
}

/// Reflection `N^theta_{lambda mu}(x; p) = (x sqrt(t/q))^{|l|+|m|}
/// f_lambda/f_mu N^theta_{mu lambda}(q/(t x); p)`.
pub fn ntheta_reflection_holds(
    vt: &VarTable,
    lambda: &Partition,
    mu: &Partition,
    params: &ParamPoint,
    base: &PochBase,
    check: &VarTable,
    x_name: &str,
) -> Result<bool, SeriesError> {
    let x = Monomial::var(vt, x_name, QQ::one());
    let lhs = nekrasov_theta(vt, lambda, mu, &x, base, params)?;
    let total = (lambda.size() + mu.size()) as i32;
    let scale = pow_i64(&params.tq_quarter_pow(2), total as i64) * lambda.framing_factor(params)
        / mu.framing_factor(params);
    let refl_arg = x.inv().scale(&(params.q() / params.t()));
    let mut exps = vec![0; vt.len()];
    exps[vt.index_of(x_name).unwrap()] = total;
    let rhs = nekrasov_theta(vt, mu, lambda, &refl_arg, base, params)?.mul_monomial(&scale, &exps);
    Ok(lhs.eq_within(&rhs, check))
}

/// Reflection `N^Gamma_{lambda mu}(x; p, Q) N^Gamma_{mu lambda}(pQq/(tx); p, Q) = 1`.
pub fn ngamma_reflection_holds(
    vt: &VarTable,
    lambda: &Partition,
    mu: &Partition,
    params: &ParamPoint,
    p_name: &str,
    q_name: &str,
    check: &VarTable,
    x_name: &str,
) -> Result<bool, SeriesError> {
    let bases = [PochBase::nome(vt, p_name), PochBase::nome(vt, q_name)];
    let x = Monomial::var(vt, x_name, QQ::one());
    let lhs = nekrasov_gamma(vt, lambda, mu, &x, &bases, params)?;
    let refl = bases[0]
        .to_monomial(vt)
        .mul(&bases[1].to_monomial(vt))
        .mul(&x.inv())
        .scale(&(params.q() / params.t()));
    let rhs = nekrasov_gamma(vt, mu, lambda, &refl, &bases, params)?;
    Ok(lhs.mul(&rhs).eq_within(&vt.one(), check))
}

//! Exact truncated multivariate Laurent/power series over the rationals.
//!
//! A series lives over a fixed table of named variables, each carrying an
//! exponent window `[lo, hi]` with `lo <= 0 <= hi`. Nome variables use
//! `[0, K]`, spectral variables symmetric `[-L, L]`; shifted-argument
//! computations may widen a nome window below zero. All arithmetic is exact
//! rational; terms whose exponent vector leaves the window are dropped, and
//! binary operations carry the componentwise intersection of the operand
//! windows.
//!
//! Expansion regions are fixed by declaration order: each variable is
//! radially smaller than every variable declared before it. `invert`,
//! `exp_series` and `log_series` use the induced monomial weight to pick
//! leading terms and to guarantee termination.

use crate::params::QQ;
use num::{BigInt, One, Zero};
use smallvec::SmallVec;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub type Exps = SmallVec<[i32; 4]>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSpec {
    pub name: String,
    pub lo: i32,
    pub hi: i32,
    /// Optional radial weight override. When any variable carries one, all
    /// must; the weights then define the expansion region directly (a
    /// monomial is small iff its total weight is positive), which allows
    /// fractional hierarchies like `|x| ~ |p|^{3/2}`.
    pub weight: Option<i128>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarTable {
    vars: Arc<Vec<VarSpec>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("incompatible variable tables: {0} vs {1}")]
    IncompatibleTables(String, String),
    #[error("non-invertible leading structure: {0}")]
    NonInvertible(String),
    #[error("exp/log argument has a term of non-positive weight: {0}")]
    BadGrading(String),
    #[error("log argument must have constant term 1")]
    LogConstant,
    #[error("non-truncatable argument: {0}")]
    NonTruncatable(String),
    #[error("unknown variable {0}")]
    UnknownVar(String),
}

impl VarTable {
    pub fn builder() -> VarTableBuilder {
        VarTableBuilder { vars: Vec::new() }
    }

    pub fn specs(&self) -> &[VarSpec] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    fn names(&self) -> String {
        let v: Vec<&str> = self.vars.iter().map(|s| s.name.as_str()).collect();
        v.join(",")
    }

    /// Same variable names in the same order (windows may differ).
    pub fn compatible(&self, other: &VarTable) -> bool {
        self.vars.len() == other.vars.len()
            && self
                .vars
                .iter()
                .zip(other.vars.iter())
                .all(|(a, b)| a.name == b.name)
    }

    /// Componentwise window intersection.
    pub fn intersect(&self, other: &VarTable) -> VarTable {
        assert!(self.compatible(other));
        let vars = self
            .vars
            .iter()
            .zip(other.vars.iter())
            .map(|(a, b)| VarSpec {
                name: a.name.clone(),
                lo: a.lo.max(b.lo),
                hi: a.hi.min(b.hi),
                weight: a.weight,
            })
            .collect();
        VarTable {
            vars: Arc::new(vars),
        }
    }

    fn inside(&self, e: &Exps) -> bool {
        e.iter()
            .zip(self.vars.iter())
            .all(|(&x, v)| x >= v.lo && x <= v.hi)
    }

    /// Radial weights: by default variable j strictly outweighs any
    /// window-bounded monomial in variables 0..j, so later-declared
    /// variables are radially smaller; explicit overrides replace the whole
    /// scheme.
    fn weights(&self) -> Vec<i128> {
        if self.vars.iter().any(|v| v.weight.is_some()) {
            return self
                .vars
                .iter()
                .map(|v| v.weight.expect("either all weights or none"))
                .collect();
        }
        let mut w = Vec::with_capacity(self.vars.len());
        let mut acc: i128 = 1;
        for v in self.vars.iter() {
            w.push(acc);
            let span = (v.hi.abs().max(v.lo.abs()) as i128) + 1;
            acc = acc * (2 * span + 1);
        }
        w
    }

    fn weight_of(&self, e: &Exps, w: &[i128]) -> i128 {
        e.iter()
            .zip(w.iter())
            .map(|(&x, &wi)| x as i128 * wi)
            .sum()
    }

    fn max_weight(&self, w: &[i128]) -> i128 {
        self.vars
            .iter()
            .zip(w.iter())
            .map(|(v, &wi)| (v.hi as i128 * wi).max(v.lo as i128 * wi))
            .sum()
    }

    pub fn zero(&self) -> TruncSeries {
        TruncSeries {
            vars: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> TruncSeries {
        self.constant(QQ::one())
    }

    pub fn constant(&self, c: QQ) -> TruncSeries {
        let mut s = self.zero();
        if !c.is_zero() {
            s.terms.insert(self.zero_exps(), c);
        }
        s
    }

    pub fn zero_exps(&self) -> Exps {
        SmallVec::from_elem(0, self.vars.len())
    }

    /// Monomial `c * prod v_i^{e_i}`; terms outside the window give zero.
    pub fn monomial(&self, c: QQ, exps: &[i32]) -> TruncSeries {
        assert_eq!(exps.len(), self.vars.len());
        let mut s = self.zero();
        let e: Exps = SmallVec::from_slice(exps);
        if !c.is_zero() && self.inside(&e) {
            s.terms.insert(e, c);
        }
        s
    }

    /// Single-variable monomial `c * v^e` by name.
    pub fn var_pow(&self, name: &str, e: i32, c: QQ) -> TruncSeries {
        let idx = self
            .index_of(name)
            .unwrap_or_else(|| panic!("unknown variable {name}"));
        let mut exps = vec![0; self.vars.len()];
        exps[idx] = e;
        self.monomial(c, &exps)
    }

    pub fn var(&self, name: &str) -> TruncSeries {
        self.var_pow(name, 1, QQ::one())
    }
}

pub struct VarTableBuilder {
    vars: Vec<VarSpec>,
}

impl VarTableBuilder {
    /// Nome variable with window `[0, order]`.
    pub fn nome(mut self, name: &str, order: i32) -> Self {
        assert!(order >= 0);
        self.vars.push(VarSpec {
            name: name.to_string(),
            lo: 0,
            hi: order,
            weight: None,
        });
        self
    }

    /// Spectral variable with symmetric window `[-window, window]`.
    pub fn spectral(mut self, name: &str, window: i32) -> Self {
        assert!(window >= 0);
        self.vars.push(VarSpec {
            name: name.to_string(),
            lo: -window,
            hi: window,
        weight: None,
        });
        self
    }

    /// Explicit window; must contain 0.
    pub fn range(mut self, name: &str, lo: i32, hi: i32) -> Self {
        assert!(lo <= 0 && hi >= 0);
        self.vars.push(VarSpec {
            name: name.to_string(),
            lo,
            hi,
            weight: None,
        });
        self
    }

    /// Explicit window with an explicit radial weight (all variables of the
    /// table must then carry weights).
    pub fn range_weighted(mut self, name: &str, lo: i32, hi: i32, weight: i128) -> Self {
        assert!(lo <= 0 && hi >= 0 && weight > 0);
        self.vars.push(VarSpec {
            name: name.to_string(),
            lo,
            hi,
            weight: Some(weight),
        });
        self
    }

    pub fn build(self) -> VarTable {
        let mut seen = std::collections::HashSet::new();
        for v in &self.vars {
            assert!(seen.insert(v.name.clone()), "duplicate variable {}", v.name);
        }
        VarTable {
            vars: Arc::new(self.vars),
        }
    }
}

/// A truncated Laurent series: sparse exponent-vector map to exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    vars: VarTable,
    terms: BTreeMap<Exps, QQ>,
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl TruncSeries {
    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &QQ)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[i32]) -> QQ {
        let e: Exps = SmallVec::from_slice(exps);
        self.terms.get(&e).cloned().unwrap_or_else(QQ::zero)
    }

    fn check_compat(&self, other: &TruncSeries) -> Result<VarTable, SeriesError> {
        if !self.vars.compatible(&other.vars) {
            return Err(SeriesError::IncompatibleTables(
                self.vars.names(),
                other.vars.names(),
            ));
        }
        Ok(self.vars.intersect(&other.vars))
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        let vt = self.check_compat(other).expect("series tables must match");
        let mut terms = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            if !vt.inside(e) {
                continue;
            }
            let entry = terms.entry(e.clone()).or_insert_with(QQ::zero);
            *entry += c.clone();
        }
        terms.retain(|_, c: &mut QQ| !c.is_zero());
        TruncSeries { vars: vt, terms }
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &QQ) -> TruncSeries {
        if c.is_zero() {
            return self.vars.zero();
        }
        TruncSeries {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let vt = self.check_compat(other).expect("series tables must match");
        let mut terms: BTreeMap<Exps, QQ> = BTreeMap::new();
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in other.terms.iter() {
                let e: Exps = ea.iter().zip(eb.iter()).map(|(&x, &y)| x + y).collect();
                if !vt.inside(&e) {
                    continue;
                }
                let entry = terms.entry(e).or_insert_with(QQ::zero);
                *entry += ca.clone() * cb.clone();
            }
        }
        terms.retain(|_, c: &mut QQ| !c.is_zero());
        TruncSeries { vars: vt, terms }
    }

    /// Multiply by a single monomial, keeping the variable table.
    pub fn mul_monomial(&self, c: &QQ, exps: &[i32]) -> TruncSeries {
        assert_eq!(exps.len(), self.vars.len());
        if c.is_zero() {
            return self.vars.zero();
        }
        let mut terms = BTreeMap::new();
        for (e, v) in self.terms.iter() {
            let ne: Exps = e.iter().zip(exps.iter()).map(|(&a, &b)| a + b).collect();
            if self.vars.inside(&ne) {
                terms.insert(ne, v.clone() * c.clone());
            }
        }
        TruncSeries {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn pow(&self, n: u32) -> TruncSeries {
        let mut acc = self.vars.one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// True when a Neumann/exponential iteration on these exponent vectors
    /// must terminate inside the window: all weights share a strict sign, or
    /// some single variable appears with the same strict sign in every term.
    fn cone_admissible(vt: &VarTable, exps: &[&Exps]) -> bool {
        if exps.is_empty() {
            return true;
        }
        let w = vt.weights();
        if exps.iter().all(|e| vt.weight_of(e, &w) > 0)
            || exps.iter().all(|e| vt.weight_of(e, &w) < 0)
        {
            return true;
        }
        for i in 0..vt.len() {
            if exps.iter().all(|e| e[i] >= 1) || exps.iter().all(|e| e[i] <= -1) {
                return true;
            }
        }
        false
    }

    /// Inverse: factor out a leading monomial, then a terminating Neumann
    /// series. The minimal-weight monomial is tried first (this fixes the
    /// expansion region per the declaration-order radial convention); the
    /// constant term is the fallback when the remainder is only
    /// cone-admissible around it.
    pub fn invert(&self) -> Result<TruncSeries, SeriesError> {
        if self.terms.is_empty() {
            return Err(SeriesError::NonInvertible("zero series".into()));
        }
        let w = self.vars.weights();
        let min_lead = {
            let mut best: Option<(&Exps, &QQ, i128)> = None;
            let mut tied = false;
            for (e, c) in self.terms.iter() {
                let wt = self.vars.weight_of(e, &w);
                match best {
                    None => best = Some((e, c, wt)),
                    Some((_, _, bw)) => {
                        if wt < bw {
                            best = Some((e, c, wt));
                            tied = false;
                        } else if wt == bw {
                            tied = true;
                        }
                    }
                }
            }
            if tied {
                None
            } else {
                best.map(|(e, c, _)| (e.clone(), c.clone()))
            }
        };
        let zero_e = self.vars.zero_exps();
        let const_lead = self.terms.get(&zero_e).map(|c| (zero_e.clone(), c.clone()));
        let mut candidates: Vec<(Exps, QQ)> = Vec::new();
        if let Some(l) = min_lead {
            candidates.push(l);
        }
        if let Some(l) = const_lead {
            if !candidates.iter().any(|(e, _)| *e == l.0) {
                candidates.push(l);
            }
        }
        let mut last_err =
            SeriesError::NonInvertible("no admissible leading monomial".into());
        for (lead_e, lead_c) in candidates {
            match self.invert_around(&lead_e, &lead_c) {
                Ok(v) => return Ok(v),
                Err(e) => last_err = e,
            }
        }
        Err(last_err)
    }

    fn invert_around(&self, lead_e: &Exps, lead_c: &QQ) -> Result<TruncSeries, SeriesError> {
        // Work in a widened window so that the shift back by -lead_e is exact
        // wherever the original window can see it.
        let wide: Vec<VarSpec> = self
            .vars
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| VarSpec {
                name: v.name.clone(),
                lo: v.lo + lead_e[i].min(0),
                hi: v.hi + lead_e[i].max(0),
                weight: v.weight,
            })
            .collect();
        let wide_vt = VarTable {
            vars: Arc::new(wide),
        };
        // h = s / (lead monomial) - 1, cone-admissible around the lead
        let inv_lead = lead_c.recip();
        let mut h = wide_vt.zero();
        for (e, c) in self.terms.iter() {
            let ne: Exps = e.iter().zip(lead_e.iter()).map(|(&a, &b)| a - b).collect();
            if ne.iter().all(|&x| x == 0) {
                continue;
            }
            if wide_vt.inside(&ne) {
                h.terms.insert(ne, c.clone() * inv_lead.clone());
            }
        }
        {
            let exps: Vec<&Exps> = h.terms.keys().collect();
            if !TruncSeries::cone_admissible(&wide_vt, &exps) {
                return Err(SeriesError::NonInvertible(
                    "remainder does not follow the leading monomial".into(),
                ));
            }
        }
        // 1/(1+h) = sum (-h)^k
        let mut acc = wide_vt.one();
        let mut powh = wide_vt.one();
        let neg_h = h.neg();
        loop {
            powh = powh.mul(&neg_h);
            if powh.is_zero() {
                break;
            }
            acc = acc.add(&powh);
        }
        // shift back by -lead_e, scale by 1/lead_c, restrict to the original window
        let neg_lead: Vec<i32> = lead_e.iter().map(|&x| -x).collect();
        let shifted = TruncSeries {
            vars: self.vars.clone(),
            terms: acc
                .terms
                .into_iter()
                .filter_map(|(e, c)| {
                    let ne: Exps = e
                        .iter()
                        .zip(neg_lead.iter())
                        .map(|(&a, &b)| a + b)
                        .collect();
                    if self.vars.inside(&ne) {
                        Some((ne, c * inv_lead.clone()))
                    } else {
                        None
                    }
                })
                .collect(),
        };
        Ok(shifted)
    }

    pub fn div(&self, other: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        Ok(self.mul(&other.invert()?))
    }

    /// `exp` of a series whose terms form a termination cone (all weights of
    /// one strict sign, or one variable appearing with a strict sign in
    /// every term).
    pub fn exp_series(&self) -> Result<TruncSeries, SeriesError> {
        {
            let exps: Vec<&Exps> = self.terms.keys().collect();
            if !TruncSeries::cone_admissible(&self.vars, &exps) {
                return Err(SeriesError::BadGrading("exp argument".into()));
            }
        }
        let mut acc = self.vars.one();
        let mut term = self.vars.one();
        let mut k: u64 = 0;
        loop {
            k += 1;
            term = term.mul(self).scale(&QQ::new(BigInt::one(), BigInt::from(k)));
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// `log` of a series with constant term 1 and all other terms of positive
    /// weight.
    pub fn log_series(&self) -> Result<TruncSeries, SeriesError> {
        if !self.coefficient(&vec![0; self.vars.len()]).is_one() {
            return Err(SeriesError::LogConstant);
        }
        let mut h = self.clone();
        h.terms.remove(&self.vars.zero_exps());
        {
            let exps: Vec<&Exps> = h.terms.keys().collect();
            if !TruncSeries::cone_admissible(&self.vars, &exps) {
                return Err(SeriesError::BadGrading("log argument".into()));
            }
        }
        let mut acc = self.vars.zero();
        let mut powh = self.vars.one();
        let mut k: i64 = 0;
        loop {
            k += 1;
            powh = powh.mul(&h);
            if powh.is_zero() {
                break;
            }
            let sign = if k % 2 == 0 { -1 } else { 1 };
            acc = acc.add(&powh.scale(&QQ::new(BigInt::from(sign), BigInt::from(k))));
        }
        Ok(acc)
    }

    /// Restrict to a smaller window (same variables), dropping outside terms.
    pub fn restrict(&self, vt: &VarTable) -> TruncSeries {
        assert!(self.vars.compatible(vt));
        TruncSeries {
            vars: vt.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| vt.inside(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Equality of all coefficients inside the given window.
    pub fn eq_within(&self, other: &TruncSeries, vt: &VarTable) -> bool {
        self.restrict(vt).terms == other.restrict(vt).terms
    }

    /// First exponent vector (graded-lex order) where the two differ inside
    /// the window, with both coefficients.
    pub fn first_mismatch(&self, other: &TruncSeries, vt: &VarTable) -> Option<(Exps, QQ, QQ)> {
        let a = self.restrict(vt);
        let b = other.restrict(vt);
        let mut keys: Vec<Exps> = a.terms.keys().chain(b.terms.keys()).cloned().collect();
        keys.sort_by_key(|e| (e.iter().map(|&x| x as i64).sum::<i64>(), e.clone()));
        keys.dedup();
        for e in keys {
            let ca = a.terms.get(&e).cloned().unwrap_or_else(QQ::zero);
            let cb = b.terms.get(&e).cloned().unwrap_or_else(QQ::zero);
            if ca != cb {
                return Some((e, ca, cb));
            }
        }
        None
    }

    /// Extract the sub-series with exponent `e` of the named variable; the
    /// result keeps the table with that variable's exponent set to 0.
    pub fn slice_var(&self, name: &str, e: i32) -> TruncSeries {
        let idx = self.vars.index_of(name).expect("unknown variable");
        let mut terms = BTreeMap::new();
        for (ex, c) in self.terms.iter() {
            if ex[idx] == e {
                let mut ne = ex.clone();
                ne[idx] = 0;
                terms.insert(ne, c.clone());
            }
        }
        TruncSeries {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Substitute a rational value for the named variable (exact; requires
    /// all exponents of that variable to be within the window, which they are
    /// by construction).
    pub fn eval_var(&self, name: &str, value: &QQ) -> TruncSeries {
        let idx = self.vars.index_of(name).expect("unknown variable");
        let mut out = self.vars.zero();
        for (ex, c) in self.terms.iter() {
            let mut ne = ex.clone();
            let e = ne[idx];
            ne[idx] = 0;
            let factor = crate::params::pow_i64(value, e as i64);
            let entry = out.terms.entry(ne).or_insert_with(QQ::zero);
            *entry += c.clone() * factor;
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Human-readable rendering, graded-lex term order.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut keys: Vec<&Exps> = self.terms.keys().collect();
        keys.sort_by_key(|e| (e.iter().map(|&x| x as i64).sum::<i64>(), (*e).clone()));
        let mut out = String::new();
        for (n, e) in keys.iter().enumerate() {
            let c = &self.terms[*e];
            if n > 0 {
                out.push_str(" + ");
            }
            let mut mono = String::new();
            for (i, &ex) in e.iter().enumerate() {
                if ex != 0 {
                    mono.push_str(&format!("{}^{}", self.vars.vars[i].name, ex));
                    mono.push(' ');
                }
            }
            if mono.is_empty() {
                out.push_str(&format!("{}", c));
            } else {
                out.push_str(&format!("{} {}", c, mono.trim_end()));
            }
        }
        out
    }

    /// Canonical JSON: variable table plus `[exponents, numerator,
    /// denominator]` triples sorted by graded-lex exponent order. Bit-exact
    /// for fixed input.
    pub fn to_canonical_json(&self) -> serde_json::Value {
        use serde_json::json;
        let vars: Vec<serde_json::Value> = self
            .vars
            .vars
            .iter()
            .map(|v| {
                json!({
                    "name": v.name,
                    "kind": if v.lo == 0 { "nome" } else { "spectral" },
                    "window": [v.lo, v.hi],
                })
            })
            .collect();
        let mut keys: Vec<&Exps> = self.terms.keys().collect();
        keys.sort_by_key(|e| (e.iter().map(|&x| x as i64).sum::<i64>(), (*e).clone()));
        let terms: Vec<serde_json::Value> = keys
            .iter()
            .map(|e| {
                let c = &self.terms[*e];
                json!([
                    e.iter().collect::<Vec<&i32>>(),
                    c.numer().to_string(),
                    c.denom().to_string()
                ])
            })
            .collect();
        json!({ "vars": vars, "terms": terms })
    }
}

/// A monomial `coeff * prod v_i^{e_i}` over a variable table; the building
/// block for Pochhammer/theta arguments and vertex-operator arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: QQ,
    pub exps: Vec<i32>,
}

impl Monomial {
    pub fn constant(vt: &VarTable, c: QQ) -> Self {
        Monomial {
            coeff: c,
            exps: vec![0; vt.len()],
        }
    }

    pub fn var(vt: &VarTable, name: &str, c: QQ) -> Self {
        let mut m = Monomial::constant(vt, c);
        let idx = vt.index_of(name).expect("unknown variable");
        m.exps[idx] = 1;
        m
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            coeff: self.coeff.clone() * other.coeff.clone(),
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &QQ) -> Monomial {
        Monomial {
            coeff: self.coeff.clone() * c.clone(),
            exps: self.exps.clone(),
        }
    }

    pub fn inv(&self) -> Monomial {
        assert!(!self.coeff.is_zero());
        Monomial {
            coeff: self.coeff.recip(),
            exps: self.exps.iter().map(|&e| -e).collect(),
        }
    }

    pub fn pow(&self, k: i32) -> Monomial {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut m = Monomial {
            coeff: QQ::one(),
            exps: vec![0; self.exps.len()],
        };
        for _ in 0..k.abs() {
            m = m.mul(&base);
        }
        m
    }

    /// Ratio self/other.
    pub fn ratio(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn is_rational(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn to_series(&self, vt: &VarTable) -> TruncSeries {
        vt.monomial(self.coeff.clone(), &self.exps)
    }
}

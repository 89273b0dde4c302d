//! Young-diagram combinatorics.
//!
//! Partitions are immutable weakly-decreasing sequences with trailing zeros
//! stripped; boxes are 1-based `(i, j)` with `(i, j) in lambda` iff
//! `j <= lambda_i`. Arm and leg statistics accept boxes outside the diagram
//! (mixed statistics like `a_mu(box)` for `box in lambda` appear throughout
//! the Nekrasov kernels and may be negative).

use crate::params::{pow_i64, ParamPoint, QQ};
use std::fmt;

/// A partition `lambda_1 >= lambda_2 >= ... >= 0` with trailing zeros stripped.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

/// A 1-based box `(row, col)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoxCoord {
    pub row: u32,
    pub col: u32,
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})", self.parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl Partition {
    /// Build from parts; panics if not weakly decreasing. Trailing zeros are
    /// stripped so equality is structural.
    pub fn new(mut parts: Vec<u32>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "partition parts must be weakly decreasing: {:?}",
            parts
        );
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `lambda_i` with the zero-padding convention (`i` is 1-based).
    pub fn part(&self, i: u32) -> u32 {
        if i == 0 {
            panic!("rows are 1-based");
        }
        self.parts.get(i as usize - 1).copied().unwrap_or(0)
    }

    /// Number of positive parts.
    pub fn len(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `|lambda|`.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn boxes(&self) -> impl Iterator<Item = BoxCoord> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &p)| {
            (1..=p).map(move |j| BoxCoord {
                row: i as u32 + 1,
                col: j,
            })
        })
    }

    pub fn conjugate(&self) -> Partition {
        if self.parts.is_empty() {
            return Partition::empty();
        }
        let cols = self.parts[0];
        let parts = (1..=cols)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32)
            .collect();
        Partition::new(parts)
    }

    /// Arm `a_lambda(box) = lambda_i - j`; may be negative, box need not lie
    /// in the diagram.
    pub fn arm(&self, b: BoxCoord) -> i64 {
        self.part(b.row) as i64 - b.col as i64
    }

    /// Leg `l_lambda(box) = lambda'_j - i`; may be negative.
    pub fn leg(&self, b: BoxCoord) -> i64 {
        let col_height = self.parts.iter().filter(|&&p| p >= b.col).count() as i64;
        col_height - b.row as i64
    }

    /// Addable corners, top row first. Always `removable().len() + 1` entries.
    pub fn addable(&self) -> Vec<BoxCoord> {
        let mut out = Vec::new();
        for i in 1..=self.len() + 1 {
            if i == 1 || self.part(i - 1) > self.part(i) {
                out.push(BoxCoord {
                    row: i,
                    col: self.part(i) + 1,
                });
            }
        }
        out
    }

    /// Removable corners, top row first.
    pub fn removable(&self) -> Vec<BoxCoord> {
        let mut out = Vec::new();
        for i in 1..=self.len() {
            if self.part(i) > self.part(i + 1) {
                out.push(BoxCoord {
                    row: i,
                    col: self.part(i),
                });
            }
        }
        out
    }

    /// `lambda + 1_i` (add one box to row i, 1-based); `None` if the result
    /// is not a partition.
    pub fn add_at(&self, i: u32) -> Option<Partition> {
        if i == 0 || i > self.len() + 1 {
            return None;
        }
        if i > 1 && self.part(i - 1) < self.part(i) + 1 {
            return None;
        }
        let mut parts = self.parts.clone();
        if i as usize > parts.len() {
            parts.push(1);
        } else {
            parts[i as usize - 1] += 1;
        }
        Some(Partition::new(parts))
    }

    /// `lambda - 1_i`; `None` if the result is not a partition.
    pub fn remove_at(&self, i: u32) -> Option<Partition> {
        if i == 0 || i > self.len() {
            return None;
        }
        if self.part(i) == 0 || self.part(i) - 1 < self.part(i + 1) {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[i as usize - 1] -= 1;
        Some(Partition::new(parts))
    }

    /// `n(lambda) = sum (i-1) lambda_i`.
    pub fn n_stat(&self) -> i64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| i as i64 * p as i64)
            .sum()
    }

    /// `n(lambda') = sum lambda_i (lambda_i - 1) / 2`.
    pub fn n_stat_conj(&self) -> i64 {
        self.parts
            .iter()
            .map(|&p| p as i64 * (p as i64 - 1) / 2)
            .sum()
    }

    /// Framing factor `f_lambda(q,t) = (-1)^{|lambda|} q^{n(lambda')+|lambda|/2}
    /// t^{-n(lambda)-|lambda|/2}`, exact through the quarter-root point.
    pub fn framing_factor(&self, params: &ParamPoint) -> QQ {
        let size = self.size() as i64;
        let sign = if size % 2 == 0 { 1 } else { -1 };
        // exponents in quarter units: q^{n(l') + size/2} = q_quarter^{4 n(l') + 2 size}
        let qe = 4 * self.n_stat_conj() + 2 * size;
        let te = -4 * self.n_stat() - 2 * size;
        let v = params.q_quarter_pow(qe) * params.t_quarter_pow(te);
        if sign < 0 {
            -v
        } else {
            v
        }
    }

    /// Ladder coordinate ratio `u_i / u = q^{lambda_i} t^{-i+1}` with the
    /// zero-padding convention for `i > len`.
    pub fn ladder_ratio(&self, i: u32, params: &ParamPoint) -> QQ {
        params.qt_pow(self.part(i) as i64, 1 - i as i64)
    }

    /// `q^box = t^{i-1} q^{-j+1}` for a 1-based box.
    pub fn box_weight(b: BoxCoord, params: &ParamPoint) -> QQ {
        params.qt_pow(1 - b.col as i64, b.row as i64 - 1)
    }
}

/// All partitions of `n`, exactly once, in lexicographically descending order.
pub fn enumerate_partitions(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(remaining: u32, max: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition::new(current.clone()));
            return;
        }
        let hi = remaining.min(max);
        for k in (1..=hi).rev() {
            current.push(k);
            rec(remaining - k, k, current, out);
            current.pop();
        }
    }
    rec(n, n, &mut current, &mut out);
    if n == 0 {
        return vec![Partition::empty()];
    }
    out
}

/// All partitions of size at most `n` (sizes ascending, lex descending within
/// a size).
pub fn partitions_up_to(n: u32) -> Vec<Partition> {
    (0..=n).flat_map(enumerate_partitions).collect()
}

/// All `m`-tuples of partitions with total size `k`, exactly once.
pub fn enumerate_tuples(m: u32, k: u32) -> Vec<Vec<Partition>> {
    assert!(m >= 1, "need at least one slot");
    if m == 1 {
        return enumerate_partitions(k).into_iter().map(|p| vec![p]).collect();
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for head in enumerate_partitions(first) {
            for tail in enumerate_tuples(m - 1, k - first) {
                let mut tuple = Vec::with_capacity(m as usize);
                tuple.push(head.clone());
                tuple.extend(tail);
                out.push(tuple);
            }
        }
    }
    out
}

/// Classical partition-count oracle via Euler's pentagonal recurrence,
/// independent of the enumerator.
pub fn partition_count_oracle(n: u32) -> u64 {
    let n = n as usize;
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut acc = 0i64;
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g1 > m && g2 > m {
                break;
            }
            let sign = if k % 2 == 0 { -1 } else { 1 };
            if g1 <= m {
                acc += sign * p[m - g1];
            }
            if g2 <= m {
                acc += sign * p[m - g2];
            }
            k += 1;
        }
        p[m] = acc;
    }
    p[n] as u64
}

/// Finite q-Pochhammer `(x; q)_n = (1-x)(1-xq)...(1-xq^{n-1})` over rationals.
pub fn finite_pochhammer(x: &QQ, q: &QQ, n: u32) -> QQ {
    let mut acc = QQ::from_integer(1.into());
    let mut cur = x.clone();
    for _ in 0..n {
        acc *= QQ::from_integer(1.into()) - cur.clone();
        cur *= q.clone();
    }
    acc
}

/// Left side of Macdonald's box-sum identity:
/// `(1-q) sum_{(i,j) in lambda} q^{lambda_i - j} t^{lambda'_j - i + 1}`.
pub fn macdonald_lhs(lambda: &Partition, params: &ParamPoint) -> QQ {
    let one = QQ::from_integer(1.into());
    let mut acc = QQ::from_integer(0.into());
    for b in lambda.boxes() {
        acc += params.qt_pow(lambda.arm(b), lambda.leg(b) + 1);
    }
    (one - params.q()) * acc
}

/// Right side: `t sum_{1<=i<=j<=l} q^{lambda_i-lambda_j} t^{j-i}
/// - sum_{1<=i<j<=l+1} q^{lambda_i-lambda_j} t^{j-i}` with `lambda_{l+1}=0`.
pub fn macdonald_rhs(lambda: &Partition, params: &ParamPoint) -> QQ {
    let l = lambda.len();
    let mut s1 = QQ::from_integer(0.into());
    for i in 1..=l {
        for j in i..=l {
            s1 += params.qt_pow(
                lambda.part(i) as i64 - lambda.part(j) as i64,
                j as i64 - i as i64,
            );
        }
    }
    let mut s2 = QQ::from_integer(0.into());
    for i in 1..=l {
        for j in i + 1..=l + 1 {
            s2 += params.qt_pow(
                lambda.part(i) as i64 - lambda.part(j) as i64,
                j as i64 - i as i64,
            );
        }
    }
    params.t() * s1 - s2
}

/// Row identity `(1-q) sum_{j=1}^{lambda_i} q^{-j} t^{lambda'_j}
/// = sum_{j=i}^{l} q^{-lambda_j} t^j (1 - q^{lambda_j - lambda_{j+1}})`,
/// one instance per row `i`.
pub fn row_identity_holds(lambda: &Partition, i: u32, params: &ParamPoint) -> bool {
    let one = QQ::from_integer(1.into());
    let conj = lambda.conjugate();
    let mut lhs = QQ::from_integer(0.into());
    for j in 1..=lambda.part(i) {
        lhs += params.qt_pow(-(j as i64), conj.part(j) as i64);
    }
    lhs *= one.clone() - params.q();
    let mut rhs = QQ::from_integer(0.into());
    for j in i..=lambda.len() {
        let gap = lambda.part(j) as i64 - lambda.part(j + 1) as i64;
        rhs += params.qt_pow(-(lambda.part(j) as i64), j as i64)
            * (one.clone() - pow_i64(&params.q(), gap));
    }
    lhs == rhs
}

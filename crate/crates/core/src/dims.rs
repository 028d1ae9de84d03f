//! Closed-form counts: monoid orders, cell module dimensions, merge
//! diagrams, standard tableaux and the partition simplicity test.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::diagram::Flavor;
use crate::error::{Error, Result};

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `m!!`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(m: i64) -> BigUint {
    let mut acc = BigUint::one();
    let mut i = m;
    while i > 1 {
        acc *= i as u64;
        i -= 2;
    }
    acc
}

/// Row `n` of the Stirling triangle of the second kind.
fn stirling2_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for m in 1..=n {
        let mut next = vec![BigUint::zero(); m + 1];
        for (b, v) in row.iter().enumerate() {
            if b > 0 {
                next[b] += v * b;
            }
            next[b + 1] += v;
        }
        row = next;
    }
    row
}

/// Set partitions of `n` points into exactly `b` blocks.
pub fn stirling2(n: usize, b: usize) -> BigUint {
    stirling2_row(n).get(b).cloned().unwrap_or_default()
}

pub fn catalan(n: usize) -> BigUint {
    binomial(2 * n, n) / (n + 1)
}

pub fn motzkin_number(n: usize) -> BigUint {
    (0..=n / 2).map(|i| binomial(n, 2 * i) * catalan(i)).sum()
}

pub fn bell(n: usize) -> BigUint {
    stirling2_row(n).into_iter().sum()
}

/// Involutions of `n` points (matchings with singletons allowed).
pub fn telephone(n: usize) -> BigUint {
    (0..=n / 2).map(|i| binomial(n, 2 * i) * double_factorial(2 * i as i64 - 1)).sum()
}

/// A partition of `k` as weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PartitionLabel {
    parts: Vec<usize>,
}

impl PartitionLabel {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        parts.retain(|p| *p > 0);
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("parts must be weakly decreasing: {parts:?}")));
        }
        Ok(PartitionLabel { parts })
    }

    pub fn empty() -> Self {
        PartitionLabel::default()
    }

    /// `(k)`
    pub fn row(k: usize) -> Self {
        PartitionLabel { parts: if k == 0 { vec![] } else { vec![k] } }
    }

    /// `(1^k)`
    pub fn column(k: usize) -> Self {
        PartitionLabel { parts: vec![1; k] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Self {
        let width = self.parts.first().copied().unwrap_or(0);
        PartitionLabel { parts: (0..width).map(|c| self.parts.iter().filter(|p| **p > c).count()).collect() }
    }

    /// Hook length of every box, row by row.
    pub fn hooks(&self) -> Vec<Vec<usize>> {
        let conj = self.conjugate();
        self.parts
            .iter()
            .enumerate()
            .map(|(r, &len)| (0..len).map(|c| (len - c - 1) + (conj.parts[c] - r - 1) + 1).collect())
            .collect()
    }

    /// Young diagram containment.
    pub fn contains(&self, other: &PartitionLabel) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for PartitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Accepts `(2,1)`, `2,1`, `()`, `1^3`.
impl FromStr for PartitionLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if body.is_empty() {
            return Ok(PartitionLabel::empty());
        }
        let mut parts = Vec::new();
        for item in body.split(',') {
            let item = item.trim();
            let (part, times) = match item.split_once('^') {
                Some((p, t)) => (p, t.trim().parse::<usize>().map_err(|_| Error::Parse(s.to_string()))?),
                None => (item, 1),
            };
            let part: usize = part.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            parts.extend(std::iter::repeat_n(part, times));
        }
        PartitionLabel::new(parts)
    }
}

impl Serialize for PartitionLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All partitions of `k`, from `(k)` down to `(1^k)` in reverse lexicographic order.
pub fn partitions_of(k: usize) -> Vec<PartitionLabel> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<PartitionLabel>) {
        if rest == 0 {
            out.push(PartitionLabel { parts: prefix.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            prefix.push(p);
            go(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// Standard Young tableaux of the given shape, by the hook-length formula.
pub fn syt_count(shape: &PartitionLabel) -> BigUint {
    let hooks: BigUint = shape.hooks().iter().flatten().fold(BigUint::one(), |acc, h| acc * *h);
    factorial(shape.size()) / hooks
}

fn inadmissible(flavor: Flavor, n: usize, k: usize, label: Option<&PartitionLabel>) -> Error {
    Error::InadmissibleLabel {
        flavor: flavor.name().to_string(),
        n,
        k,
        label: label.map_or_else(|| "none".to_string(), |l| l.to_string()),
    }
}

/// Whether `(k, λ)` labels a cell module of the given flavor.
pub fn is_admissible(flavor: Flavor, n: usize, k: usize, label: Option<&PartitionLabel>) -> bool {
    if k > n {
        return false;
    }
    let parity = (n - k).is_multiple_of(2);
    if flavor.is_planar() {
        return label.is_none() && (parity || !matches!(flavor, Flavor::TemperleyLieb));
    }
    let Some(label) = label else { return false };
    label.size() == k
        && match flavor {
            Flavor::Brauer => parity,
            Flavor::Symmetric => k == n,
            _ => true,
        }
}

/// Number of half diagrams at `k` through strands, without the label factor.
fn half_count(flavor: Flavor, n: usize, k: usize) -> BigUint {
    match flavor {
        Flavor::TemperleyLieb => {
            let c = (n - k) / 2;
            let below = if c == 0 { BigUint::zero() } else { binomial(n, c - 1) };
            binomial(n, c) - below
        }
        Flavor::PlanarPartition => half_count(Flavor::TemperleyLieb, 2 * n, 2 * k),
        Flavor::Motzkin => (0..=(n - k) / 2)
            .map(|t| {
                let m = k + 2 * t;
                let ballot = binomial(m, t) - if t == 0 { BigUint::zero() } else { binomial(m, t - 1) };
                binomial(n, m) * ballot
            })
            .sum(),
        Flavor::PlanarRook | Flavor::Rook => binomial(n, k),
        Flavor::Partition => stirling2_row(n).iter().enumerate().map(|(t, s)| s * binomial(t, k)).sum(),
        Flavor::Brauer => binomial(n, k) * double_factorial((n - k) as i64 - 1),
        Flavor::RookBrauer => binomial(n, k) * telephone(n - k),
        Flavor::Symmetric => BigUint::one(),
    }
}

/// Dimension of the cell module at `k` through strands (and label `λ` for
/// non-planar flavors). `ell` counts decorations of propagating strands;
/// only `ell = 1` is realized by diagrams, and non-planar flavors reject
/// any other value.
pub fn cell_dim(flavor: Flavor, n: usize, k: usize, label: Option<&PartitionLabel>, ell: usize) -> Result<BigUint> {
    if !is_admissible(flavor, n, k, label) || ell == 0 || (ell > 1 && !flavor.is_planar()) {
        return Err(inadmissible(flavor, n, k, label));
    }
    let tableaux = label.map_or_else(BigUint::one, syt_count);
    Ok(half_count(flavor, n, k) * tableaux)
}

/// `C(n, 0), ..., C(n, n)`.
pub fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    for j in 0..=n {
        row.push(c.clone());
        c = c * (n - j) / (j + 1);
    }
    row
}

/// Unlabelled cell dimensions of a planar flavor for every `k = 0..=n`,
/// `None` where `k` is not a label. Linear in `n` for the binomial rows and
/// quadratic for Motzkin, which walks paths step by step.
pub fn planar_cell_dim_row(flavor: Flavor, n: usize) -> Result<Vec<Option<BigUint>>> {
    let tl_row = |n: usize| -> Vec<Option<BigUint>> {
        let row = binomial_row(n);
        (0..=n)
            .map(|k| {
                (n - k).is_multiple_of(2).then(|| {
                    let c = (n - k) / 2;
                    if c == 0 {
                        row[c].clone()
                    } else {
                        &row[c] - &row[c - 1]
                    }
                })
            })
            .collect()
    };
    Ok(match flavor {
        Flavor::TemperleyLieb => tl_row(n),
        Flavor::PlanarPartition => tl_row(2 * n).into_iter().step_by(2).collect(),
        Flavor::PlanarRook => binomial_row(n).into_iter().map(Some).collect(),
        Flavor::Motzkin => {
            let mut paths = vec![BigUint::one()];
            for _ in 0..n {
                let mut next = vec![BigUint::zero(); paths.len() + 1];
                for (k, v) in paths.iter().enumerate() {
                    if k > 0 {
                        next[k - 1] += v;
                    }
                    next[k] += v;
                    next[k + 1] += v;
                }
                paths = next;
            }
            paths.into_iter().map(Some).collect()
        }
        other => return Err(inadmissible(other, n, 0, None)),
    })
}

/// Merge diagrams on `n` points with `k` through strands, each strand
/// carrying one of `ell` colours; unpaired strands are coloured, paired ones
/// are not.
pub fn merge_diagram_count(n: usize, k: usize, ell: usize) -> BigUint {
    let s = stirling2_row(n);
    let blocks: BigUint = (k..=n).map(|b| &s[b] * binomial(b, k)).sum();
    (0..=k / 2)
        .map(|i| BigUint::from(ell).pow((k - 2 * i) as u32) * binomial(k, 2 * i) * double_factorial(2 * i as i64 - 1))
        .sum::<BigUint>()
        * blocks
}

pub fn monoid_order(flavor: Flavor, n: usize) -> BigUint {
    match flavor {
        Flavor::TemperleyLieb => catalan(n),
        Flavor::PlanarPartition => catalan(2 * n),
        Flavor::Brauer => double_factorial(2 * n as i64 - 1),
        Flavor::Partition => bell(2 * n),
        Flavor::Motzkin => motzkin_number(2 * n),
        Flavor::RookBrauer => telephone(2 * n),
        Flavor::Rook => (0..=n).map(|k| binomial(n, k).pow(2) * factorial(k)).sum(),
        Flavor::PlanarRook => binomial(2 * n, n),
        Flavor::Symmetric => factorial(n),
    }
}

/// Every admissible label `(k, λ)` of the flavor, `k` ascending.
pub fn admissible_labels(flavor: Flavor, n: usize) -> Vec<(usize, Option<PartitionLabel>)> {
    let mut out = Vec::new();
    for k in 0..=n {
        if flavor.is_planar() {
            if is_admissible(flavor, n, k, None) {
                out.push((k, None));
            }
        } else {
            for lambda in partitions_of(k) {
                if is_admissible(flavor, n, k, Some(&lambda)) {
                    out.push((k, Some(lambda)));
                }
            }
        }
    }
    out
}

/// Cell module dimensions keyed by `(k, λ)`.
#[derive(Debug, Clone, Serialize)]
pub struct DimTable {
    pub flavor: Flavor,
    pub n: usize,
    #[serde(serialize_with = "entries_as_list")]
    pub entries: BTreeMap<(usize, Option<PartitionLabel>), BigUint>,
}

fn entries_as_list<S: Serializer>(
    entries: &BTreeMap<(usize, Option<PartitionLabel>), BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Row<'a> {
        k: usize,
        lambda: Option<&'a PartitionLabel>,
        dim: String,
    }
    s.collect_seq(entries.iter().map(|((k, l), d)| Row { k: *k, lambda: l.as_ref(), dim: d.to_string() }))
}

impl DimTable {
    pub fn new(flavor: Flavor, n: usize) -> Self {
        let entries = admissible_labels(flavor, n)
            .into_iter()
            .map(|(k, l)| {
                let d = cell_dim(flavor, n, k, l.as_ref(), 1).expect("admissible label");
                ((k, l), d)
            })
            .collect();
        DimTable { flavor, n, entries }
    }

    /// Σ dim² for planar flavors. Non-planar ones use the label-free half
    /// count per `k` instead: Σ (dim/syt)²·k!.
    pub fn sum_of_squares(&self) -> BigUint {
        if self.flavor.is_planar() {
            return self.entries.values().map(|d| d * d).sum();
        }
        let mut by_k: BTreeMap<usize, BigUint> = BTreeMap::new();
        for ((k, l), d) in &self.entries {
            let half = d / syt_count(l.as_ref().expect("labelled"));
            by_k.insert(*k, half);
        }
        by_k.into_iter().map(|(k, h)| &h * &h * factorial(k)).sum()
    }

    /// Rows `flavor,n,k,lambda,dim`.
    pub fn csv_rows(&self) -> Vec<[String; 5]> {
        self.entries
            .iter()
            .map(|((k, l), d)| {
                [
                    self.flavor.short().to_string(),
                    self.n.to_string(),
                    k.to_string(),
                    l.as_ref().map_or_else(String::new, |l| l.to_string()),
                    d.to_string(),
                ]
            })
            .collect()
    }
}

/// Sum of all cell dimensions, the total simple dimension when semisimple.
pub fn b_semisimple(flavor: Flavor, n: usize) -> BigUint {
    DimTable::new(flavor, n).entries.into_values().sum()
}

/// The sequence `(head, λ_1 - 1, λ_2 - 2, ...)` whose coincidences decide
/// simplicity of partition cell modules; the head is `δ - k` for even `n`
/// and `δ - k - 1` for odd `n`.
pub fn phi_delta(n: usize, k: usize, lambda: &PartitionLabel, delta: i64, components: usize) -> Vec<i64> {
    let head = phi_head(n, k, delta);
    std::iter::once(head).chain((1..).map(|j| phi_component(lambda, j))).take(components).collect()
}

fn phi_head(n: usize, k: usize, delta: i64) -> i64 {
    delta - k as i64 - if n % 2 == 1 { 1 } else { 0 }
}

fn phi_component(lambda: &PartitionLabel, j: usize) -> i64 {
    lambda.parts.get(j - 1).copied().unwrap_or(0) as i64 - j as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Simple,
    /// No coincidence: the cell module is not simple once `n` is large.
    EventuallyNotSimple,
    /// The label does not describe a cell module of `Pa(n)`.
    Unknown,
}

/// Simplicity of the partition cell module `Δ(k, λ)` at loop value `δ`.
pub fn partition_cell_is_simple(n: usize, k: usize, lambda: &PartitionLabel, delta: i64) -> Verdict {
    if lambda.size() != k || k > n {
        return Verdict::Unknown;
    }
    let head = phi_head(n, k, delta);
    let len = lambda.len();
    let in_body = (1..=len).any(|j| phi_component(lambda, j) == head);
    // beyond the parts the components are -j, so at most one can match
    let in_tail = head < 0 && (-head) as usize > len;
    if in_body || in_tail {
        Verdict::Simple
    } else {
        Verdict::EventuallyNotSimple
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn numbers() {
        assert_eq!(stirling2(4, 2), big(7));
        assert_eq!(double_factorial(5), big(15));
        assert_eq!(double_factorial(-1), big(1));
        assert_eq!(catalan(4), big(14));
        assert_eq!(motzkin_number(4), big(9));
        assert_eq!(bell(4), big(15));
        assert_eq!(telephone(4), big(10));
        assert_eq!(binomial(3, 5), big(0));
    }

    #[test]
    fn partitions_and_tableaux() {
        let p: PartitionLabel = "(2,1)".parse().unwrap();
        assert_eq!(syt_count(&p), big(2));
        assert_eq!(syt_count(&"2,2".parse().unwrap()), big(2));
        assert_eq!(syt_count(&PartitionLabel::row(6)), big(1));
        assert_eq!("1^3".parse::<PartitionLabel>().unwrap(), PartitionLabel::column(3));
        assert_eq!(PartitionLabel::row(3).conjugate(), PartitionLabel::column(3));
        assert_eq!(p.hooks(), vec![vec![3, 1], vec![1]]);
        assert!(p.contains(&PartitionLabel::row(2)));
        assert!(!p.contains(&PartitionLabel::row(3)));
        assert_eq!(partitions_of(4).len(), 5);
        assert!("(1,2)".parse::<PartitionLabel>().is_err());
    }

    #[test]
    fn cell_dims() {
        let d = |f, n, k, l: Option<&str>| {
            let l = l.map(|s| s.parse::<PartitionLabel>().unwrap());
            cell_dim(f, n, k, l.as_ref(), 1).unwrap()
        };
        assert_eq!(d(Flavor::TemperleyLieb, 4, 2, None), big(3));
        assert_eq!(d(Flavor::TemperleyLieb, 4, 0, None), big(2));
        assert_eq!(d(Flavor::TemperleyLieb, 4, 4, None), big(1));
        assert_eq!(d(Flavor::Motzkin, 2, 0, None), big(2));
        assert_eq!(d(Flavor::Partition, 2, 1, Some("(1)")), big(3));
        assert_eq!(d(Flavor::Brauer, 4, 2, Some("(2)")), big(6));
        assert_eq!(d(Flavor::PlanarRook, 4, 2, None), big(6));
        assert!(cell_dim(Flavor::TemperleyLieb, 4, 1, None, 1).is_err());
        assert!(cell_dim(Flavor::Brauer, 4, 2, None, 1).is_err());
        assert!(cell_dim(Flavor::Symmetric, 3, 2, Some(&PartitionLabel::row(2)), 1).is_err());
        assert!(cell_dim(Flavor::Partition, 2, 1, Some(&PartitionLabel::row(1)), 2).is_err());
    }

    #[test]
    fn merge_counts() {
        assert_eq!(merge_diagram_count(2, 1, 1), big(3));
        for n in 0..7 {
            assert_eq!(merge_diagram_count(n, 0, 3), bell(n));
        }
        assert_eq!(merge_diagram_count(3, 3, 1), big(4));
    }

    #[test]
    fn semisimple_sums() {
        assert_eq!(b_semisimple(Flavor::TemperleyLieb, 4), big(6));
        for n in 0..8 {
            assert_eq!(b_semisimple(Flavor::PlanarRook, n), big(1) << n);
        }
        for f in Flavor::ALL {
            let top = if f == Flavor::Partition { 3 } else { 5 };
            for n in 0..=top {
                assert_eq!(DimTable::new(f, n).sum_of_squares(), monoid_order(f, n), "{f:?} {n}");
            }
        }
    }

    #[test]
    fn tl_closed_forms_agree() {
        for n in 0..=30usize {
            for k in (n % 2..=n).step_by(2) {
                let c = (n - k) / 2;
                let closed = binomial(n, c) * (n - 2 * c + 1) / (n - c + 1);
                assert_eq!(cell_dim(Flavor::TemperleyLieb, n, k, None, 1).unwrap(), closed);
            }
        }
        for n in 0..=6 {
            for k in 0..=n {
                assert_eq!(
                    cell_dim(Flavor::PlanarPartition, n, k, None, 1).unwrap(),
                    cell_dim(Flavor::TemperleyLieb, 2 * n, 2 * k, None, 1).unwrap()
                );
            }
        }
    }

    #[test]
    fn rows_match_pointwise() {
        for f in Flavor::ALL.into_iter().filter(|f| f.is_planar()) {
            for n in 0..=9 {
                let row = planar_cell_dim_row(f, n).unwrap();
                for (k, d) in row.iter().enumerate() {
                    assert_eq!(d.clone(), cell_dim(f, n, k, None, 1).ok(), "{f:?} {n} {k}");
                }
            }
        }
        assert!(planar_cell_dim_row(Flavor::Brauer, 3).is_err());
    }

    #[test]
    fn phi_sequences() {
        assert_eq!(phi_delta(4, 2, &PartitionLabel::row(2), 1, 4), vec![-1, 1, -2, -3]);
        assert_eq!(phi_delta(4, 0, &PartitionLabel::empty(), 0, 4), vec![0, -1, -2, -3]);
        assert_eq!(phi_delta(4, 3, &PartitionLabel::column(3), 1, 5), vec![-2, 0, -1, -2, -4]);
        assert_eq!(phi_delta(5, 2, &PartitionLabel::row(2), 1, 1), vec![-2]);
    }

    #[test]
    fn verdict_table() {
        use Verdict::*;
        let n = 10;
        for k in 0..=10 {
            let row = partition_cell_is_simple(n, k, &PartitionLabel::row(k), 1);
            assert_eq!(row, if k == 0 || k == 2 { EventuallyNotSimple } else { Simple }, "δ=1 ({k})");
            let col = partition_cell_is_simple(n, k, &PartitionLabel::column(k), 1);
            assert_eq!(col, if k == 0 { EventuallyNotSimple } else { Simple }, "δ=1 (1^{k})");
            let row = partition_cell_is_simple(n, k, &PartitionLabel::row(k), 0);
            assert_eq!(row, if k <= 1 { EventuallyNotSimple } else { Simple }, "δ=0 ({k})");
            let col = partition_cell_is_simple(n, k, &PartitionLabel::column(k), 0);
            assert_eq!(col, EventuallyNotSimple, "δ=0 (1^{k})");
        }
        assert_eq!(partition_cell_is_simple(2, 3, &PartitionLabel::row(3), 1), Unknown);
    }
}

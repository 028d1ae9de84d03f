//! Apexes, simple dimensions, representation gap, connectedness and
//! truncation of finite monoids.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagram::{Budget, EvaluationMap, Flavor};
use crate::error::{Error, Result};
use crate::gram::{derive_seed, gram, gram_indicator, gram_symbolic, rank, GramMatrix, ParameterAssignment, RankMode};
use crate::green::{green, GreenStructure};
use crate::monoid::{DiagramProducts, ElementLabel, FiniteMonoid};

/// Where simple dimensions are computed.
#[derive(Debug, Clone)]
pub enum At {
    /// Over the rationals, Gram entries read from the table.
    Table,
    /// Over the field with `p` elements, Gram entries read from the table.
    Prime(u64),
    /// Genus variables at seeded random rationals.
    Generic { seed: u64 },
    /// Genus variables at fixed rationals.
    Assignment(ParameterAssignment),
    /// Exactly over rational functions in the single genus variable.
    Univariate,
}

impl At {
    fn gram(&self, m: &FiniteMonoid, g: &GreenStructure, j: usize) -> Result<GramMatrix> {
        match self {
            At::Table | At::Prime(_) => gram(m, g, j),
            _ => gram_symbolic(m, g, j),
        }
    }

    fn mode(&self, j: usize) -> RankMode {
        match self {
            At::Table => RankMode::Exact(ParameterAssignment::default()),
            At::Prime(p) => RankMode::Prime { p: *p, at: ParameterAssignment::default() },
            At::Generic { seed } => RankMode::Generic { seed: derive_seed(*seed, j) },
            At::Assignment(a) => RankMode::Exact(a.clone()),
            At::Univariate => RankMode::Univariate,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimpleDim {
    pub j: usize,
    /// Through-strand count of the apex, for diagram monoids.
    pub apex: Option<usize>,
    pub dim: usize,
}

/// Rank of every J-class Gram matrix, zero ranks included.
pub fn gram_ranks(m: &FiniteMonoid, g: &GreenStructure, at: &At) -> Result<Vec<(GramMatrix, usize)>> {
    if let Some(eb) = g.eggboxes.iter().find(|e| e.h_size() != 1) {
        return Err(Error::NontrivialHClass(eb.j));
    }
    (0..g.j_count())
        .map(|j| {
            let gm = at.gram(m, g, j)?;
            let r = rank(&gm, &at.mode(j))?;
            Ok((gm, r))
        })
        .collect()
}

/// Simple dimensions of an H-trivial monoid, one per apex.
pub fn simple_dimensions(m: &FiniteMonoid, g: &GreenStructure, at: &At) -> Result<Vec<SimpleDim>> {
    Ok(gram_ranks(m, g, at)?
        .into_iter()
        .enumerate()
        .filter(|(_, (_, r))| *r > 0)
        .map(|(j, (_, dim))| SimpleDim { j, apex: g.through_strands(m, j), dim })
        .collect())
}

/// `through strands -> dimension` for diagram monoids.
pub fn dims_by_apex(dims: &[SimpleDim]) -> BTreeMap<usize, usize> {
    dims.iter().filter_map(|d| d.apex.map(|k| (k, d.dim))).collect()
}

/// J-classes holding an idempotent (the zero excluded), by through-strand
/// count. Works for nontrivial H-classes too.
pub fn apexes(m: &FiniteMonoid, g: &GreenStructure) -> BTreeSet<usize> {
    (0..g.j_count())
        .filter(|&j| !gram_indicator(m, g, j).is_zero())
        .filter_map(|j| g.through_strands(m, j))
        .collect()
}

/// Closed-form apex sets by flavor and parameters.
pub fn expected_apexes(flavor: Flavor, n: usize, a: &EvaluationMap) -> BTreeSet<usize> {
    let all: BTreeSet<usize> = (0..=n).collect();
    let without = |drop: &[usize]| -> BTreeSet<usize> {
        all.iter().copied().filter(|k| !drop.contains(k) || *k == n).collect()
    };
    let n_minus_1 = n.wrapping_sub(1);
    match flavor {
        Flavor::Partition | Flavor::PlanarPartition => {
            if a.value(0) {
                all
            } else if a.any_one_in(1, n as u32) {
                without(&[n_minus_1])
            } else {
                without(&[0, n_minus_1])
            }
        }
        Flavor::Motzkin | Flavor::RookBrauer => {
            if a.value(0) {
                all
            } else if a.value(1) {
                without(&[n_minus_1])
            } else {
                without(&[0, n_minus_1])
            }
        }
        Flavor::TemperleyLieb | Flavor::Brauer => {
            (n % 2..=n).step_by(2).filter(|k| *k != 0 || a.value(1) || n == 0).collect()
        }
        Flavor::Rook | Flavor::PlanarRook => {
            if a.value(0) {
                all
            } else {
                BTreeSet::from([n])
            }
        }
        Flavor::Symmetric => BTreeSet::from([n]),
    }
}

/// Apex sets as they come out of exhaustive computation. They differ from
/// [`expected_apexes`] when `a_0 = 0`: partition-type monoids keep `n - 1`
/// (a merged propagating block squares to itself without closed
/// components), and Motzkin/rook-Brauer lose every `k` of the wrong parity.
pub fn revised_expected_apexes(flavor: Flavor, n: usize, a: &EvaluationMap) -> BTreeSet<usize> {
    if a.value(0) {
        return expected_apexes(flavor, n, a);
    }
    match flavor {
        Flavor::Partition | Flavor::PlanarPartition => {
            let zero_cell = n >= 2 && a.any_one_in(1, n as u32 - 1);
            (0..=n).filter(|&k| k > 0 || zero_cell || n == 0).collect()
        }
        Flavor::Motzkin | Flavor::RookBrauer => expected_apexes(Flavor::TemperleyLieb, n, a),
        _ => expected_apexes(flavor, n, a),
    }
}

/// Parameters as given on a command line: an evaluation map or `generic`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Params {
    Eval(EvaluationMap),
    Generic,
}

impl FromStr for Params {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "generic" {
            Ok(Params::Generic)
        } else {
            EvaluationMap::parse(s).map(Params::Eval)
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Params::Generic => f.write_str("generic"),
            Params::Eval(a) if *a == EvaluationMap::classical() => f.write_str("classical"),
            Params::Eval(a) if *a == EvaluationMap::zero() => f.write_str("zero"),
            Params::Eval(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JClassReport {
    pub j: usize,
    pub apex: Option<usize>,
    pub size: usize,
    pub rows: usize,
    pub cols: usize,
    pub h_size: usize,
    pub idempotents: usize,
    pub gram: Option<GramMatrix>,
    pub rank: Option<usize>,
}

/// Cell structure of one diagram monoid.
#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub flavor: Flavor,
    pub n: usize,
    pub params: String,
    pub size: usize,
    pub has_zero: bool,
    pub h_trivial: bool,
    pub d_equals_j: bool,
    pub j_classes: Vec<JClassReport>,
    pub apexes: BTreeSet<usize>,
    pub expected_apexes: Option<BTreeSet<usize>>,
    /// `None` when H-classes are nontrivial.
    pub simple_dims: Option<BTreeMap<usize, usize>>,
    pub repgap: Option<usize>,
}

/// Monoid for the given parameters; `generic` uses the classical table.
pub fn monoid_for(products: &DiagramProducts, params: &Params) -> FiniteMonoid {
    match params {
        Params::Eval(a) => products.evaluate(a),
        Params::Generic => products.evaluate(&EvaluationMap::classical()),
    }
}

pub fn analyze(flavor: Flavor, n: usize, params: &Params, seed: u64) -> Result<Analysis> {
    analyze_within(flavor, n, params, seed, &Budget::default())
}

pub fn analyze_within(flavor: Flavor, n: usize, params: &Params, seed: u64, budget: &Budget) -> Result<Analysis> {
    let products = DiagramProducts::within(flavor, n, budget)?;
    let m = monoid_for(&products, params);
    let g = green(&m);
    let at = match params {
        Params::Eval(_) => At::Table,
        Params::Generic => At::Generic { seed },
    };
    let h_trivial = g.is_h_trivial();
    let ranks = if h_trivial { Some(gram_ranks(&m, &g, &at)?) } else { None };
    let j_classes = (0..g.j_count())
        .map(|j| {
            let eb = &g.eggboxes[j];
            JClassReport {
                j,
                apex: g.through_strands(&m, j),
                size: g.j_classes[j].len(),
                rows: eb.rows.len(),
                cols: eb.cols.len(),
                h_size: eb.h_size(),
                idempotents: g.j_classes[j].iter().filter(|&&x| m.is_idempotent(x)).count(),
                gram: ranks.as_ref().map(|r| r[j].0.clone()),
                rank: ranks.as_ref().map(|r| r[j].1),
            }
        })
        .collect();
    let simple = ranks.as_ref().map(|r| {
        r.iter()
            .enumerate()
            .filter(|(_, (_, k))| *k > 0)
            .map(|(j, (_, dim))| SimpleDim { j, apex: g.through_strands(&m, j), dim: *dim })
            .collect::<Vec<_>>()
    });
    let repgap = match &simple {
        Some(s) => repgap_from(&m, &g, s).ok().map(|r| r.value),
        None => None,
    };
    let expected = match params {
        Params::Eval(a) => Some(expected_apexes(flavor, n, a)),
        Params::Generic => Some(expected_apexes(flavor, n, &EvaluationMap::classical())),
    };
    Ok(Analysis {
        flavor,
        n,
        params: params.to_string(),
        size: m.size(),
        has_zero: m.zero().is_some(),
        h_trivial,
        d_equals_j: g.d_equals_j(),
        j_classes,
        apexes: apexes(&m, &g),
        expected_apexes: expected,
        simple_dims: simple.as_deref().map(dims_by_apex),
        repgap,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RepGap {
    pub value: usize,
    /// J-classes whose simple was taken to be one of the trivial modules.
    pub excluded: Vec<usize>,
    /// Other one-dimensional simples exist, so the choice of trivial
    /// modules may not be the intended one.
    pub ambiguous: bool,
}

/// Smallest dimension of a simple module other than the two trivial ones.
/// The value equals the representation gap for well-connected monoids
/// whose unit group has vanishing first cohomology; the latter is assumed.
pub fn repgap(m: &FiniteMonoid, g: &GreenStructure, at: &At) -> Result<RepGap> {
    let dims = simple_dimensions(m, g, at)?;
    repgap_from(m, g, &dims)
}

fn repgap_from(m: &FiniteMonoid, g: &GreenStructure, dims: &[SimpleDim]) -> Result<RepGap> {
    let mut excluded = Vec::new();
    // units act by 1, the rest by 0: apex is the unit group's class
    let top = g.j_of[m.identity()];
    if dims.iter().any(|d| d.j == top && d.dim == 1) {
        excluded.push(top);
    }
    // everything acts by 1: a representation iff there is no zero, with
    // apex the unique minimal J-class
    if m.zero().is_none() {
        if let [bottom] = g.minimal_j_classes()[..] {
            if bottom != top && dims.iter().any(|d| d.j == bottom && d.dim == 1) {
                excluded.push(bottom);
            }
        }
    }
    let rest: Vec<&SimpleDim> = dims.iter().filter(|d| !excluded.contains(&d.j)).collect();
    let ambiguous = rest.iter().any(|d| d.dim == 1);
    let value = rest.iter().map(|d| d.dim).min().ok_or(Error::NoNontrivialSimple)?;
    Ok(RepGap { value, excluded, ambiguous })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Connectedness {
    pub null_connected: bool,
    pub right_connected: bool,
    pub left_connected: bool,
    pub is_group: bool,
    pub well_connected: bool,
}

fn single_class(nonunits: &[usize], size: usize, pairs: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, b) in pairs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let roots: BTreeSet<usize> = nonunits.iter().map(|&x| find(&mut parent, x)).collect();
    roots.len() <= 1
}

pub fn is_well_connected(m: &FiniteMonoid) -> Connectedness {
    let units: BTreeSet<usize> = m.units().into_iter().collect();
    let nonunits: Vec<usize> = (0..m.size()).filter(|x| !units.contains(x)).collect();
    let is_group = nonunits.is_empty();
    let mut products = vec![false; m.size()];
    for &a in &nonunits {
        for &b in &nonunits {
            products[m.mul(a, b)] = true;
        }
    }
    let null_connected = nonunits.iter().all(|&x| products[x]);
    let pairs = || nonunits.iter().flat_map(|&a| nonunits.iter().map(move |&b| (a, b)));
    let right_connected = single_class(&nonunits, m.size(), pairs().map(|(a, b)| (a, m.mul(a, b))));
    let left_connected = single_class(&nonunits, m.size(), pairs().map(|(a, b)| (b, m.mul(a, b))));
    Connectedness {
        null_connected,
        right_connected,
        left_connected,
        is_group,
        well_connected: is_group || (null_connected && right_connected && left_connected),
    }
}

/// Rees quotient onto the diagrams with `lo ≤ through strands ≤ hi`: a zero
/// absorbs products leaving the window, and a unit is adjoined when the
/// identity is cut off.
pub fn truncate(m: &FiniteMonoid, lo: usize, hi: usize) -> Result<FiniteMonoid> {
    let kept: Vec<usize> = (0..m.size())
        .filter(|&x| m.through_strands(x).is_some_and(|k| lo <= k && k <= hi))
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyWindow(lo, hi));
    }
    let mut new_id = vec![usize::MAX; m.size()];
    for (i, &x) in kept.iter().enumerate() {
        new_id[x] = i;
    }
    let identity_kept = new_id[m.identity()] != usize::MAX;
    let leaks = kept.iter().any(|&a| kept.iter().any(|&b| new_id[m.mul(a, b)] == usize::MAX));
    let mut labels: Vec<ElementLabel> = kept.iter().map(|&x| m.label(x).cloned().unwrap()).collect();
    let zero = leaks.then(|| {
        labels.push(ElementLabel::Zero);
        labels.len() - 1
    });
    let unit = (!identity_kept).then(|| {
        labels.push(ElementLabel::Unit);
        labels.len() - 1
    });
    let size = labels.len();
    let mut table = vec![0u32; size * size];
    for a in 0..size {
        for b in 0..size {
            let v = if Some(a) == unit {
                b
            } else if Some(b) == unit {
                a
            } else if Some(a) == zero || Some(b) == zero {
                zero.unwrap()
            } else {
                let p = new_id[m.mul(kept[a], kept[b])];
                if p == usize::MAX {
                    zero.unwrap()
                } else {
                    p
                }
            };
            table[a * size + b] = v as u32;
        }
    }
    FiniteMonoid::from_table(size, table)?.with_labels(labels)
}

/// Rank agrees across random simultaneous row and column permutations.
pub fn rank_permutation_invariant(gm: &GramMatrix, mode: &RankMode, trials: usize, seed: u64) -> Result<bool> {
    let base = rank(gm, mode)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<usize> = (0..gm.rows()).collect();
    let mut cols: Vec<usize> = (0..gm.cols()).collect();
    for _ in 0..trials {
        rows.shuffle(&mut rng);
        cols.shuffle(&mut rng);
        if rank(&gm.permuted(&rows, &cols), mode)? != base {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::{GenusMonomial, GramEntry};
    use crate::monoid::build_diagram_monoid;

    fn tl4(a: &EvaluationMap) -> (FiniteMonoid, GreenStructure) {
        let m = build_diagram_monoid(Flavor::TemperleyLieb, 4, a).unwrap();
        let g = green(&m);
        (m, g)
    }

    fn j_with_apex(m: &FiniteMonoid, g: &GreenStructure, k: usize) -> usize {
        (0..g.j_count()).find(|&j| g.through_strands(m, j) == Some(k)).unwrap()
    }

    #[test]
    fn tl4_dimension_triple() {
        let (m, g) = tl4(&EvaluationMap::classical());
        let d = dims_by_apex(&simple_dimensions(&m, &g, &At::Table).unwrap());
        assert_eq!(d, BTreeMap::from([(4, 1), (2, 3), (0, 1)]));
        let gen = dims_by_apex(&simple_dimensions(&m, &g, &At::Generic { seed: 0 }).unwrap());
        assert_eq!(gen, BTreeMap::from([(4, 1), (2, 3), (0, 2)]));
        let uni = dims_by_apex(&simple_dimensions(&m, &g, &At::Univariate).unwrap());
        assert_eq!(uni, gen);
        let (m0, g0) = tl4(&EvaluationMap::zero());
        let d0 = dims_by_apex(&simple_dimensions(&m0, &g0, &At::Table).unwrap());
        assert_eq!(d0, BTreeMap::from([(4, 1), (2, 2)]));
    }

    #[test]
    fn tl4_gram_matrices() {
        let (m, g) = tl4(&EvaluationMap::classical());
        let a = |e: u32| GramEntry::Monomial(GenusMonomial(BTreeMap::from([(1, e)])));
        let g0 = gram_symbolic(&m, &g, j_with_apex(&m, &g, 0)).unwrap();
        assert_eq!(g0.entries, vec![vec![a(2), a(1)], vec![a(1), a(2)]]);
        let g2 = gram(&m, &g, j_with_apex(&m, &g, 2)).unwrap();
        assert_eq!(g2.entries, GramMatrix::from_ints(&[vec![1, 1, 0], vec![1, 1, 1], vec![0, 1, 1]]).entries);
        let (m0, g0z) = tl4(&EvaluationMap::zero());
        let g2z = gram(&m0, &g0z, j_with_apex(&m0, &g0z, 2)).unwrap();
        assert_eq!(g2z.entries, GramMatrix::from_ints(&[vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]]).entries);
    }

    #[test]
    fn repgap_examples() {
        let (m, g) = tl4(&EvaluationMap::classical());
        assert_eq!(repgap(&m, &g, &At::Table).unwrap().value, 3);
        let (m0, g0) = tl4(&EvaluationMap::zero());
        assert_eq!(repgap(&m0, &g0, &At::Table).unwrap().value, 2);
        let s3 = build_diagram_monoid(Flavor::Symmetric, 3, &EvaluationMap::classical()).unwrap();
        assert!(matches!(repgap(&s3, &green(&s3), &At::Table), Err(Error::NontrivialHClass(_))));
    }

    #[test]
    fn connectedness_examples() {
        // TL(4) is null-connected, but the cups at 12/34 and 14/23 never meet
        let (m, _) = tl4(&EvaluationMap::classical());
        let c = is_well_connected(&m);
        assert!(c.null_connected && !c.right_connected && !c.left_connected && !c.well_connected);
        let m5 = build_diagram_monoid(Flavor::TemperleyLieb, 5, &EvaluationMap::classical()).unwrap();
        let c5 = is_well_connected(&m5);
        assert!(c5.null_connected && c5.right_connected && c5.left_connected && c5.well_connected);
        let idem = FiniteMonoid::from_table(2, vec![0, 1, 1, 1]).unwrap();
        assert!(is_well_connected(&idem).null_connected);
        // {1, x, 0} with x² = 0
        let nil = FiniteMonoid::from_table(3, vec![0, 1, 2, 1, 2, 2, 2, 2, 2]).unwrap();
        assert!(!is_well_connected(&nil).null_connected);
    }

    #[test]
    fn truncation_window() {
        let (m, _) = tl4(&EvaluationMap::classical());
        let t = truncate(&m, 2, 4).unwrap();
        assert_eq!(t.size(), 11);
        assert!(t.zero().is_some());
        let full = truncate(&m, 0, 4).unwrap();
        assert_eq!(full.size(), 14);
        assert!(matches!(truncate(&m, 5, 7), Err(Error::EmptyWindow(5, 7))));
        let low = truncate(&m, 0, 2).unwrap();
        assert_eq!(low.label(low.identity()), Some(&ElementLabel::Unit));
    }

    #[test]
    fn expected_apex_examples() {
        let a0 = EvaluationMap::with_value(0, false);
        assert_eq!(expected_apexes(Flavor::Partition, 3, &EvaluationMap::classical()), (0..=3).collect());
        assert_eq!(expected_apexes(Flavor::Partition, 3, &a0), BTreeSet::from([0, 1, 3]));
        assert_eq!(expected_apexes(Flavor::TemperleyLieb, 4, &EvaluationMap::zero()), BTreeSet::from([2, 4]));
        assert_eq!(expected_apexes(Flavor::Rook, 3, &EvaluationMap::zero()), BTreeSet::from([3]));
    }
}

//! Gram matrices of J-classes and their ranks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::diagram::compose;
use crate::error::{Error, Result};
use crate::green::GreenStructure;
use crate::monoid::FiniteMonoid;

/// Product of genus variables, `genus -> exponent`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenusMonomial(pub BTreeMap<u32, u32>);

impl fmt::Display for GenusMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(g, e)| if *e == 1 { format!("a{g}") } else { format!("a{g}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GramEntry {
    Rational(BigRational),
    Monomial(GenusMonomial),
}

impl GramEntry {
    pub fn zero() -> Self {
        GramEntry::Rational(BigRational::zero())
    }

    pub fn int(v: i64) -> Self {
        GramEntry::Rational(BigRational::from_integer(v.into()))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, GramEntry::Rational(r) if r.is_zero())
    }

    fn specialize(&self, at: &ParameterAssignment) -> BigRational {
        match self {
            GramEntry::Rational(r) => r.clone(),
            GramEntry::Monomial(m) => {
                m.0.iter().fold(BigRational::one(), |acc, (g, e)| acc * pow(&at.value(*g), *e))
            }
        }
    }
}

impl fmt::Display for GramEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GramEntry::Rational(r) => write!(f, "{r}"),
            GramEntry::Monomial(m) => write!(f, "{m}"),
        }
    }
}

impl Serialize for GramEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn pow(x: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// Values of the genus variables; unlisted genera take `default`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterAssignment {
    pub values: BTreeMap<u32, BigRational>,
    pub default: BigRational,
}

impl Default for ParameterAssignment {
    fn default() -> Self {
        ParameterAssignment { values: BTreeMap::new(), default: BigRational::one() }
    }
}

impl ParameterAssignment {
    pub fn constant(v: BigRational) -> Self {
        ParameterAssignment { values: BTreeMap::new(), default: v }
    }

    pub fn with(mut self, genus: u32, v: BigRational) -> Self {
        self.values.insert(genus, v);
        self
    }

    pub fn value(&self, genus: u32) -> BigRational {
        self.values.get(&genus).cloned().unwrap_or_else(|| self.default.clone())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GramMatrix {
    pub j: usize,
    pub entries: Vec<Vec<GramEntry>>,
}

impl GramMatrix {
    pub fn from_rows(j: usize, entries: Vec<Vec<GramEntry>>) -> Self {
        GramMatrix { j, entries }
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        let entries = rows.iter().map(|r| r.iter().map(|v| GramEntry::int(*v)).collect()).collect();
        GramMatrix { j: 0, entries }
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(GramEntry::is_zero)
    }

    /// Genera appearing in monomial entries.
    pub fn variables(&self) -> BTreeSet<u32> {
        self.entries
            .iter()
            .flatten()
            .filter_map(|e| match e {
                GramEntry::Monomial(m) => Some(m.0.keys().copied()),
                _ => None,
            })
            .flatten()
            .collect()
    }

    pub fn specialize(&self, at: &ParameterAssignment) -> Vec<Vec<BigRational>> {
        self.entries.iter().map(|r| r.iter().map(|e| e.specialize(at)).collect()).collect()
    }

    pub fn permuted(&self, rows: &[usize], cols: &[usize]) -> GramMatrix {
        let entries = rows.iter().map(|&r| cols.iter().map(|&c| self.entries[r][c].clone()).collect()).collect();
        GramMatrix { j: self.j, entries }
    }
}

fn check_h_trivial(g: &GreenStructure, j: usize) -> Result<()> {
    if g.eggboxes[j].h_size() != 1 {
        return Err(Error::NontrivialHWithoutIndicatorMode(j));
    }
    Ok(())
}

fn is_zero_class(m: &FiniteMonoid, g: &GreenStructure, j: usize) -> bool {
    m.zero().is_some_and(|z| g.j_of[z] == j)
}

/// Gram matrix of an H-trivial J-class read off the table: 1 where the
/// cell's element is idempotent. The adjoined zero gets the matrix `[0]`.
pub fn gram(m: &FiniteMonoid, g: &GreenStructure, j: usize) -> Result<GramMatrix> {
    check_h_trivial(g, j)?;
    let zero_class = is_zero_class(m, g, j);
    let entries = g.eggboxes[j]
        .cells
        .iter()
        .map(|row| {
            row.iter()
                .map(|h| GramEntry::int(i64::from(!zero_class && m.is_idempotent(h[0]))))
                .collect()
        })
        .collect();
    Ok(GramMatrix { j, entries })
}

/// 0/1 matrix marking H-classes that contain an idempotent; allowed for
/// nontrivial H-classes.
pub fn gram_indicator(m: &FiniteMonoid, g: &GreenStructure, j: usize) -> GramMatrix {
    let zero_class = is_zero_class(m, g, j);
    let entries = g.eggboxes[j]
        .idempotent_pattern(m)
        .into_iter()
        .map(|row| row.into_iter().map(|b| GramEntry::int(i64::from(b && !zero_class))).collect())
        .collect();
    GramMatrix { j, entries }
}

/// Gram matrix with genus monomials: for a cell element `h` whose square
/// has underlying diagram `h`, the entry records the closed components of
/// that square. Needs diagram labels.
pub fn gram_symbolic(m: &FiniteMonoid, g: &GreenStructure, j: usize) -> Result<GramMatrix> {
    check_h_trivial(g, j)?;
    let entries = g.eggboxes[j]
        .cells
        .iter()
        .map(|row| {
            row.iter()
                .map(|h| match m.diagram(h[0]) {
                    None => Ok(GramEntry::zero()),
                    Some(d) => {
                        let out = compose(d, d)?;
                        Ok(if out.result == *d {
                            GramEntry::Monomial(GenusMonomial(out.floats.iter().collect()))
                        } else {
                            GramEntry::zero()
                        })
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GramMatrix { j, entries })
}

/// How to turn a Gram matrix into a number.
#[derive(Debug, Clone)]
pub enum RankMode {
    /// Rank over the rationals after substituting the assignment.
    Exact(ParameterAssignment),
    /// Rank over the field with `p` elements after substitution.
    Prime { p: u64, at: ParameterAssignment },
    /// Rank at random rational points; two samples must agree.
    Generic { seed: u64 },
    /// Exact rank over rational functions in the single genus variable.
    Univariate,
}

/// Per-task seed derived from a global seed.
pub fn derive_seed(global: u64, task: usize) -> u64 {
    // splitmix64 finalizer
    let mut z = global ^ (task as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const GENERIC_BOUND: i64 = 1 << 31;
const MAX_DISAGREEMENTS: usize = 3;

fn random_point(vars: &BTreeSet<u32>, rng: &mut ChaCha8Rng) -> ParameterAssignment {
    let mut at = ParameterAssignment::default();
    for g in vars {
        let num = rng.gen_range(-GENERIC_BOUND..=GENERIC_BOUND);
        let den = rng.gen_range(1..=GENERIC_BOUND);
        at.values.insert(*g, BigRational::new(num.into(), den.into()));
    }
    at
}

/// Rank of a Gram matrix. In generic mode a wrong answer needs both random
/// points to be roots of a nonzero minor; for a minor of degree `d` each
/// draw hits one with probability at most `d / 2^32`.
pub fn rank(gm: &GramMatrix, mode: &RankMode) -> Result<usize> {
    match mode {
        RankMode::Exact(at) => Ok(rank_rational(gm.specialize(at))),
        RankMode::Prime { p, at } => rank_mod_p(&gm.specialize(at), *p),
        RankMode::Generic { seed } => {
            let vars = gm.variables();
            if vars.is_empty() {
                return Ok(rank_rational(gm.specialize(&ParameterAssignment::default())));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut disagreements = 0;
            loop {
                let r1 = rank_rational(gm.specialize(&random_point(&vars, &mut rng)));
                let r2 = rank_rational(gm.specialize(&random_point(&vars, &mut rng)));
                if r1 == r2 {
                    return Ok(r1);
                }
                disagreements += 1;
                if disagreements >= MAX_DISAGREEMENTS {
                    return Err(Error::GenericDisagreement(disagreements));
                }
            }
        }
        RankMode::Univariate => {
            let vars = gm.variables();
            if vars.len() > 1 {
                return Err(Error::InvalidEvaluation(format!(
                    "univariate rank needs one genus variable, found {}",
                    vars.len()
                )));
            }
            let var = vars.first().copied();
            let m: Vec<Vec<Poly>> = gm
                .entries
                .iter()
                .map(|r| r.iter().map(|e| Poly::from_entry(e, var)).collect())
                .collect();
            Ok(rank_poly(m))
        }
    }
}

/// Rank over the rationals by Gaussian elimination.
pub fn rank_rational(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for k in c..cols {
                let delta = &f * &m[r][k];
                m[i][k] -= delta;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

fn mod_p(x: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let r = ((x % &pb) + &pb) % &pb;
    r.to_u64().expect("residue fits")
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Rank over the field with `p` elements (`p` assumed prime).
pub fn rank_mod_p(m: &[Vec<BigRational>], p: u64) -> Result<usize> {
    if p < 2 {
        return Err(Error::InvalidEvaluation(format!("{p} is not a prime")));
    }
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let den = mod_p(x.denom(), p);
                    if den == 0 {
                        return Err(Error::InvalidEvaluation(format!("denominator of {x} vanishes mod {p}")));
                    }
                    Ok(mul_mod(mod_p(x.numer(), p), pow_mod(den, p - 2, p), p))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let inv = pow_mod(a[r][c], p - 2, p);
        for i in r + 1..rows {
            if a[i][c] == 0 {
                continue;
            }
            let f = mul_mod(a[i][c], inv, p);
            for k in c..cols {
                let sub = mul_mod(f, a[r][k], p);
                a[i][k] = (a[i][k] + p - sub) % p;
            }
        }
        r += 1;
    }
    Ok(r)
}

/// Dense univariate polynomial over the rationals, lowest degree first,
/// no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Poly(Vec<BigRational>);

impl Poly {
    fn zero() -> Self {
        Poly(Vec::new())
    }

    fn one() -> Self {
        Poly(vec![BigRational::one()])
    }

    fn trimmed(mut v: Vec<BigRational>) -> Self {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        Poly(v)
    }

    fn from_entry(e: &GramEntry, var: Option<u32>) -> Self {
        match e {
            GramEntry::Rational(r) => Self::trimmed(vec![r.clone()]),
            GramEntry::Monomial(m) => {
                let deg = var.map_or(0, |v| m.0.get(&v).copied().unwrap_or(0)) as usize;
                let mut c = vec![BigRational::zero(); deg + 1];
                c[deg] = BigRational::one();
                Poly(c)
            }
        }
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::trimmed(c)
    }

    fn sub(&self, o: &Poly) -> Poly {
        let len = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        let c = (0..len).map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z)).collect();
        Self::trimmed(c)
    }

    /// Quotient of an exact division.
    fn div_exact(&self, d: &Poly) -> Poly {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.0.clone();
        let dl = d.0.len();
        if rem.len() < dl {
            debug_assert!(self.is_zero(), "inexact polynomial division");
            return Poly::zero();
        }
        let lead = d.0[dl - 1].clone();
        let mut q = vec![BigRational::zero(); rem.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let f = &rem[i + dl - 1] / &lead;
            if f.is_zero() {
                continue;
            }
            for (k, dk) in d.0.iter().enumerate() {
                rem[i + k] -= &f * dk;
            }
            q[i] = f;
        }
        debug_assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
        Self::trimmed(q)
    }
}

/// Fraction-free (Bareiss) elimination over polynomials.
fn rank_poly(mut m: Vec<Vec<Poly>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = Poly::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            for k in c + 1..cols {
                let v = m[r][c].mul(&m[i][k]).sub(&m[i][c].mul(&m[r][k]));
                m[i][k] = v.div_exact(&prev);
            }
            m[i][c] = Poly::zero();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(g: u32, e: u32) -> GramEntry {
        GramEntry::Monomial(GenusMonomial(BTreeMap::from([(g, e)])))
    }

    fn pi_matrix() -> GramMatrix {
        GramMatrix::from_rows(0, vec![vec![mono(1, 2), mono(1, 1)], vec![mono(1, 1), mono(1, 2)]])
    }

    #[test]
    fn rational_ranks() {
        assert_eq!(rank(&GramMatrix::from_ints(&[vec![1, 1], vec![1, 1]]), &RankMode::Exact(Default::default())).unwrap(), 1);
        let m = GramMatrix::from_ints(&[vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]]);
        assert_eq!(rank(&m, &RankMode::Exact(Default::default())).unwrap(), 2);
        assert_eq!(rank(&GramMatrix::from_ints(&[vec![0]]), &RankMode::Exact(Default::default())).unwrap(), 0);
    }

    #[test]
    fn symbolic_ranks() {
        let m = pi_matrix();
        assert_eq!(rank(&m, &RankMode::Generic { seed: 0 }).unwrap(), 2);
        assert_eq!(rank(&m, &RankMode::Univariate).unwrap(), 2);
        assert_eq!(rank(&m, &RankMode::Exact(ParameterAssignment::default())).unwrap(), 1);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(rank(&m, &RankMode::Exact(ParameterAssignment::constant(half))).unwrap(), 2);
    }

    #[test]
    fn univariate_detects_singular() {
        // [[a, a^2], [1, a]] has determinant 0
        let one = GramEntry::Monomial(GenusMonomial::default());
        let m = GramMatrix::from_rows(0, vec![vec![mono(1, 1), mono(1, 2)], vec![one, mono(1, 1)]]);
        assert_eq!(rank(&m, &RankMode::Univariate).unwrap(), 1);
        let mixed = GramMatrix::from_rows(0, vec![vec![mono(1, 1), mono(2, 1)]]);
        assert!(rank(&mixed, &RankMode::Univariate).is_err());
    }

    #[test]
    fn prime_rank() {
        let m = GramMatrix::from_ints(&[vec![1, 1], vec![1, 3]]);
        assert_eq!(rank(&m, &RankMode::Prime { p: 2, at: Default::default() }).unwrap(), 1);
        assert_eq!(rank(&m, &RankMode::Prime { p: 3, at: Default::default() }).unwrap(), 2);
    }
}

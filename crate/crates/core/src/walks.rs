//! Highest-weight distributions of tensor powers, their Gaussian profiles,
//! and the tensor walk on simple modules of a symmetric group.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::diagram::Flavor;
use crate::dims::{factorial, planar_cell_dim_row, partitions_of, syt_count, PartitionLabel};
use crate::error::{Error, Result};

/// Natural logarithm of a big integer.
pub fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// The rank-one rows that carry a distribution engine.
pub const WALK_FLAVORS: [Flavor; 4] =
    [Flavor::TemperleyLieb, Flavor::Motzkin, Flavor::PlanarPartition, Flavor::PlanarRook];

/// Weight multiset of the generating module, in the weight coordinate.
fn weight_multiset(flavor: Flavor) -> Result<&'static [i64]> {
    match flavor {
        Flavor::TemperleyLieb => Ok(&[1, -1]),
        Flavor::Motzkin => Ok(&[1, 0, -1]),
        Flavor::PlanarPartition => Ok(&[2, 0, 0, -2]),
        Flavor::PlanarRook => Ok(&[0, 1]),
        other => Err(Error::Parse(format!("no weight distribution for {}", other.name()))),
    }
}

/// Mean and variance of one step, from the weight multiset.
pub fn step_moments(flavor: Flavor) -> Result<(f64, f64)> {
    let w = weight_multiset(flavor)?;
    let len = w.len() as f64;
    let mean = w.iter().sum::<i64>() as f64 / len;
    let var = w.iter().map(|x| (*x as f64 - mean).powi(2)).sum::<f64>() / len;
    Ok((mean, var))
}

/// Label `k` to highest weight: planar partitions use `2k`.
pub fn weight_of(flavor: Flavor, k: usize) -> usize {
    if flavor == Flavor::PlanarPartition {
        2 * k
    } else {
        k
    }
}

/// Dimension of the group module matched with apex `k`.
pub fn group_module_dim(flavor: Flavor, k: usize) -> usize {
    match flavor {
        Flavor::PlanarRook => 1,
        _ => weight_of(flavor, k) + 1,
    }
}

pub fn dim_v(flavor: Flavor) -> Result<usize> {
    Ok(weight_multiset(flavor)?.len())
}

/// Exact probabilities `numerators[k] / denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    pub flavor: Flavor,
    pub n: usize,
    pub numerators: BTreeMap<usize, BigUint>,
    pub denominator: BigUint,
}

impl WeightDistribution {
    pub fn prob(&self, k: usize) -> BigRational {
        let num = self.numerators.get(&k).cloned().unwrap_or_default();
        BigRational::new(BigInt::from(num), BigInt::from(self.denominator.clone()))
    }

    pub fn probs(&self) -> BTreeMap<usize, BigRational> {
        self.numerators.keys().map(|k| (*k, self.prob(*k))).collect()
    }

    pub fn total(&self) -> BigRational {
        let num: BigUint = self.numerators.values().sum();
        BigRational::new(BigInt::from(num), BigInt::from(self.denominator.clone()))
    }

    /// `ln P(k)`, or `-inf` off the support.
    pub fn ln_prob(&self, k: usize) -> f64 {
        match self.numerators.get(&k) {
            Some(x) if !x.is_zero() => big_ln(x) - big_ln(&self.denominator),
            _ => f64::NEG_INFINITY,
        }
    }
}

/// `P_n(k) = dim Δ_k · dim T(k) / (dim V)^n` over the admissible labels.
pub fn exact_distribution(flavor: Flavor, n: usize) -> Result<WeightDistribution> {
    let denominator = BigUint::from(dim_v(flavor)?).pow(n as u32);
    let numerators = planar_cell_dim_row(flavor, n)?
        .into_iter()
        .enumerate()
        .filter_map(|(k, d)| d.map(|d| (k, d * group_module_dim(flavor, k))))
        .collect();
    Ok(WeightDistribution { flavor, n, numerators, denominator })
}

/// Centre `nμ` of the weight distribution.
fn centre(flavor: Flavor, n: usize) -> Result<f64> {
    Ok(step_moments(flavor)?.0 * n as f64)
}

/// Mass of labels whose weight is at least `c·√n` from the centre.
pub fn tail_mass(d: &WeightDistribution, c: f64) -> Result<BigRational> {
    let mid = centre(d.flavor, d.n)?;
    let radius = c * (d.n as f64).sqrt();
    let num: BigUint = d
        .numerators
        .iter()
        .filter(|(k, _)| (weight_of(d.flavor, **k) as f64 - mid).abs() >= radius)
        .map(|(_, v)| v)
        .sum();
    Ok(BigRational::new(BigInt::from(num), BigInt::from(d.denominator.clone())))
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileReport {
    pub flavor: Flavor,
    pub n: usize,
    /// Coefficient `c` of the predicted exponent `-c·(w - nμ)²/n`.
    pub coefficient: f64,
    pub points: usize,
    pub slope_ratio: f64,
}

/// Least-squares fit of the log-profile against the predicted Gaussian
/// exponent, over labels whose weight is within `window·√n` of the centre.
/// The polynomial factor `(w+1)²` of the rank-one rows is divided out first.
pub fn gaussian_profile_check(d: &WeightDistribution, window: f64) -> Result<ProfileReport> {
    let (mu, var) = step_moments(d.flavor)?;
    let mid = mu * d.n as f64;
    let nf = d.n as f64;
    let coefficient = 1.0 / (2.0 * var);
    let power = if d.flavor == Flavor::PlanarRook { 0.0 } else { 2.0 };
    let pts: Vec<(f64, f64)> = d
        .numerators
        .keys()
        .filter(|k| (weight_of(d.flavor, **k) as f64 - mid).abs() <= window * nf.sqrt())
        .map(|&k| {
            let w = weight_of(d.flavor, k) as f64;
            let y = d.ln_prob(k) - power * (w + 1.0).ln();
            (-coefficient * (w - mid).powi(2) / nf, y)
        })
        .collect();
    if pts.len() < 3 {
        return Err(Error::DegenerateWindow(format!("{} points in window {window}", pts.len())));
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateWindow("no spread in predicted exponent".into()));
    }
    Ok(ProfileReport { flavor: d.flavor, n: d.n, coefficient, points: pts.len(), slope_ratio: sxy / sxx })
}

/// Predicted probabilities `∝ (w+1)^p·exp(-c·(w - nμ)²/n)` over the support
/// of `d`, normalised to total one. Same prefactor as the profile fit.
pub fn gaussian_prediction(d: &WeightDistribution) -> Result<BTreeMap<usize, f64>> {
    let (mu, var) = step_moments(d.flavor)?;
    let (mid, nf) = (mu * d.n as f64, d.n.max(1) as f64);
    let power = if d.flavor == Flavor::PlanarRook { 0.0 } else { 2.0 };
    let logs: BTreeMap<usize, f64> = d
        .numerators
        .keys()
        .map(|&k| {
            let w = weight_of(d.flavor, k) as f64;
            (k, power * (w + 1.0).ln() - (w - mid).powi(2) / (2.0 * var * nf))
        })
        .collect();
    let top = logs.values().copied().fold(f64::MIN, f64::max);
    let total: f64 = logs.values().map(|l| (l - top).exp()).sum();
    Ok(logs.into_iter().map(|(k, l)| (k, (l - top).exp() / total)).collect())
}

/// Share of `Σ_k dim Δ_k` carried by labels with weight within `c·√n` of the centre.
pub fn typical_window_share(flavor: Flavor, n: usize, c: f64) -> Result<BigRational> {
    let mid = centre(flavor, n)?;
    let radius = c * (n as f64).sqrt();
    let mut inside = BigUint::zero();
    let mut total = BigUint::zero();
    for (k, d) in planar_cell_dim_row(flavor, n)?.into_iter().enumerate() {
        if let Some(d) = d {
            if (weight_of(flavor, k) as f64 - mid).abs() <= radius {
                inside += &d;
            }
            total += d;
        }
    }
    Ok(BigRational::new(BigInt::from(inside), BigInt::from(total)))
}

/// Multiplicities `m(w, n)` of highest weights in `V^{⊗n}`, by repeated
/// Clebsch-Gordan decomposition (binomial recursion for the planar rook row).
pub fn highest_weight_multiplicities(flavor: Flavor, n: usize) -> Result<BTreeMap<usize, BigUint>> {
    let mut m: BTreeMap<usize, BigUint> = BTreeMap::from([(0, BigUint::one())]);
    for _ in 0..n {
        let mut next: BTreeMap<usize, BigUint> = BTreeMap::new();
        for (w, c) in &m {
            let w = *w;
            let targets: Vec<usize> = match flavor {
                Flavor::PlanarRook => vec![w, w + 1],
                Flavor::TemperleyLieb => clebsch_gordan(w, 1),
                Flavor::Motzkin => {
                    let mut t = clebsch_gordan(w, 1);
                    t.push(w);
                    t
                }
                Flavor::PlanarPartition => {
                    let mut t = clebsch_gordan(w, 2);
                    t.push(w);
                    t
                }
                other => return Err(Error::Parse(format!("no weight distribution for {}", other.name()))),
            };
            for t in targets {
                *next.entry(t).or_default() += c;
            }
        }
        m = next;
    }
    Ok(m)
}

/// `V(a) ⊗ V(b)` for rank one: weights `a+b, a+b-2, ..., |a-b|`.
fn clebsch_gordan(a: usize, b: usize) -> Vec<usize> {
    let lo = a.abs_diff(b);
    (0..=a.min(b)).map(|i| a + b - 2 * i).filter(|w| *w >= lo).collect()
}

/// `P_n(w) = m(w, n) · dim V(w) / (dim V)^n`, keyed by weight.
pub fn highest_weight_distribution(flavor: Flavor, n: usize) -> Result<BTreeMap<usize, BigRational>> {
    let den = BigInt::from(BigUint::from(dim_v(flavor)?).pow(n as u32));
    Ok(highest_weight_multiplicities(flavor, n)?
        .into_iter()
        .map(|(w, m)| {
            let dim = if flavor == Flavor::PlanarRook { 1 } else { w + 1 };
            (w, BigRational::new(BigInt::from(m * dim), den.clone()))
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct PushforwardReport {
    pub flavor: Flavor,
    pub n: usize,
    pub labels: usize,
    /// Weights where the pushed-forward mass differs from `P_n`.
    pub mismatches: Vec<usize>,
    pub holds: bool,
}

/// Pushes the label distribution forward along `k ↦ weight` and compares
/// with an independently computed highest-weight distribution.
pub fn compare_pushforward(d: &WeightDistribution, hw: &BTreeMap<usize, BigRational>) -> PushforwardReport {
    let mut pushed: BTreeMap<usize, BigRational> = BTreeMap::new();
    for k in d.numerators.keys() {
        *pushed.entry(weight_of(d.flavor, *k)).or_insert_with(BigRational::zero) += d.prob(*k);
    }
    pushed.retain(|_, p| !p.is_zero());
    let mut mismatches: Vec<usize> = pushed
        .keys()
        .chain(hw.keys())
        .copied()
        .filter(|w| pushed.get(w).cloned().unwrap_or_default() != hw.get(w).cloned().unwrap_or_default())
        .collect();
    mismatches.sort_unstable();
    mismatches.dedup();
    PushforwardReport { flavor: d.flavor, n: d.n, labels: d.numerators.len(), holds: mismatches.is_empty(), mismatches }
}

pub fn pushforward_identity(flavor: Flavor, n: usize) -> Result<PushforwardReport> {
    Ok(compare_pushforward(&exact_distribution(flavor, n)?, &highest_weight_distribution(flavor, n)?))
}

/// Character `χ_λ(μ)` of the symmetric group by the Murnaghan-Nakayama rule.
pub fn mn_character(lambda: &PartitionLabel, mu: &PartitionLabel) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(lambda.size(), mu.size()));
    }
    let mut memo = HashMap::new();
    Ok(mn_beta(&beta_set(lambda.parts()), mu.parts(), &mut memo))
}

/// First-column hook lengths `λ_i + (len - i)`, increasing.
fn beta_set(parts: &[usize]) -> Vec<usize> {
    let len = parts.len();
    let mut b: Vec<usize> = parts.iter().enumerate().map(|(i, p)| p + len - 1 - i).collect();
    b.sort_unstable();
    b
}

fn mn_beta(beta: &[usize], mu: &[usize], memo: &mut HashMap<(Vec<usize>, Vec<usize>), i64>) -> i64 {
    let Some((&r, rest)) = mu.split_first() else { return 1 };
    let key = (beta.to_vec(), mu.to_vec());
    if let Some(v) = memo.get(&key) {
        return *v;
    }
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        // removing a rim hook moves one bead down by r
        let crossed = beta.iter().filter(|&&x| x > b - r && x < b).count();
        let mut next = beta.to_vec();
        next[i] = b - r;
        next.sort_unstable();
        let sign = if crossed % 2 == 0 { 1 } else { -1 };
        total += sign * mn_beta(&next, rest, memo);
    }
    memo.insert(key, total);
    total
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterTable {
    pub t: usize,
    /// Irreducibles and classes, both indexed by the partitions of `t`.
    pub partitions: Vec<PartitionLabel>,
    /// `values[λ][μ] = χ_λ(μ)`.
    pub values: Vec<Vec<i64>>,
    pub class_sizes: Vec<BigUint>,
    pub dims: Vec<BigUint>,
}

/// Centralizer order `Π i^{m_i} m_i!` of cycle type `μ`.
fn centralizer(mu: &PartitionLabel) -> BigUint {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for p in mu.parts() {
        *counts.entry(*p).or_default() += 1;
    }
    counts.into_iter().map(|(i, m)| BigUint::from(i).pow(m as u32) * factorial(m)).product()
}

impl CharacterTable {
    pub fn new(t: usize) -> Self {
        let partitions = partitions_of(t);
        let mut memo = HashMap::new();
        let values = partitions
            .iter()
            .map(|l| partitions.iter().map(|m| mn_beta(&beta_set(l.parts()), m.parts(), &mut memo)).collect())
            .collect();
        let class_sizes = partitions.iter().map(|m| factorial(t) / centralizer(m)).collect();
        let dims = partitions.iter().map(syt_count).collect();
        CharacterTable { t, partitions, values, class_sizes, dims }
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// `Σ_λ χ_λ(μ) χ_λ(ν) = [μ = ν] · t!/|class μ|`.
    pub fn columns_orthogonal(&self) -> bool {
        let order = factorial(self.t);
        (0..self.len()).all(|a| {
            (0..self.len()).all(|b| {
                let s: i64 = (0..self.len()).map(|l| self.values[l][a] * self.values[l][b]).sum();
                let want = if a == b { BigInt::from(&order / &self.class_sizes[a]) } else { BigInt::zero() };
                BigInt::from(s) == want
            })
        })
    }

    /// Multiplicity of `τ` in `V ⊗ σ` for the permutation module `V`.
    pub fn tensor_multiplicity(&self, tau: usize, sigma: usize) -> BigUint {
        let mut sum = BigInt::zero();
        for (c, mu) in self.partitions.iter().enumerate() {
            let fixed = mu.parts().iter().filter(|p| **p == 1).count() as i64;
            let v = fixed * self.values[sigma][c] * self.values[tau][c];
            sum += BigInt::from(self.class_sizes[c].clone()) * v;
        }
        let (q, r) = (&sum / BigInt::from(factorial(self.t)), &sum % BigInt::from(factorial(self.t)));
        debug_assert!(r.is_zero() && !q.is_negative());
        q.to_biguint().unwrap_or_default()
    }

    pub fn plancherel(&self) -> WalkState {
        let order = BigInt::from(factorial(self.t));
        let dist = self.dims.iter().map(|d| BigRational::new(BigInt::from(d * d), order.clone())).collect();
        WalkState { t: self.t, dist }
    }

    /// Point mass at partition index `i`.
    pub fn point(&self, i: usize) -> WalkState {
        let mut dist = vec![BigRational::zero(); self.len()];
        dist[i] = BigRational::one();
        WalkState { t: self.t, dist }
    }
}

/// A distribution on the simple modules of `S(t)`, indexed like the character table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkState {
    pub t: usize,
    pub dist: Vec<BigRational>,
}

impl WalkState {
    pub fn total(&self) -> BigRational {
        self.dist.iter().sum()
    }
}

/// Transition weights `mult(τ, V⊗σ)·dim τ / (t·dim σ)`, as `[σ][τ]`.
pub fn mckay_matrix(table: &CharacterTable) -> Vec<Vec<BigRational>> {
    let t = BigInt::from(table.t);
    (0..table.len())
        .map(|s| {
            (0..table.len())
                .map(|tau| {
                    let num = BigInt::from(table.tensor_multiplicity(tau, s) * &table.dims[tau]);
                    BigRational::new(num, &t * BigInt::from(table.dims[s].clone()))
                })
                .collect()
        })
        .collect()
}

pub fn mckay_step(w: &WalkState, table: &CharacterTable) -> WalkState {
    mckay_step_with(w, &mckay_matrix(table))
}

pub fn mckay_step_with(w: &WalkState, matrix: &[Vec<BigRational>]) -> WalkState {
    let mut dist = vec![BigRational::zero(); w.dist.len()];
    for (s, p) in w.dist.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        for (tau, m) in matrix[s].iter().enumerate() {
            dist[tau] += p * m;
        }
    }
    WalkState { t: w.t, dist }
}

pub fn total_variation(p: &WalkState, q: &WalkState) -> BigRational {
    let sum: BigRational = p.dist.iter().zip(&q.dist).map(|(a, b)| (a - b).abs()).sum();
    sum / BigInt::from(2)
}

/// Total variation to Plancherel after each of `steps` steps from `start`.
pub fn plancherel_walk(table: &CharacterTable, start: usize, steps: usize) -> Vec<BigRational> {
    let matrix = mckay_matrix(table);
    let target = table.plancherel();
    let mut w = table.point(start);
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        w = mckay_step_with(&w, &matrix);
        out.push(total_variation(&w, &target));
    }
    out
}

/// Float rendering for reports.
pub fn approx(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn small_distributions() {
        let d = exact_distribution(Flavor::TemperleyLieb, 2).unwrap();
        assert_eq!(d.prob(0), q(1, 4));
        assert_eq!(d.prob(2), q(3, 4));
        let d = exact_distribution(Flavor::PlanarRook, 5).unwrap();
        assert_eq!(d.prob(2), q(10, 32));
        for f in WALK_FLAVORS {
            for n in [0, 1, 7, 64] {
                assert_eq!(exact_distribution(f, n).unwrap().total(), BigRational::one(), "{f:?} {n}");
            }
        }
    }

    #[test]
    fn tails() {
        let d = exact_distribution(Flavor::TemperleyLieb, 64).unwrap();
        assert_eq!(tail_mass(&d, 0.0).unwrap(), BigRational::one());
        let mut last = BigRational::one();
        for c in [0.5, 1.0, 2.0, 3.0] {
            let t = tail_mass(&d, c).unwrap();
            assert!(t <= last);
            last = t;
        }
    }

    #[test]
    fn moments_from_weights() {
        assert_eq!(step_moments(Flavor::TemperleyLieb).unwrap(), (0.0, 1.0));
        assert!((step_moments(Flavor::Motzkin).unwrap().1 - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(step_moments(Flavor::PlanarPartition).unwrap(), (0.0, 2.0));
        assert_eq!(step_moments(Flavor::PlanarRook).unwrap(), (0.5, 0.25));
    }

    #[test]
    fn characters() {
        let p = |s: &str| s.parse::<PartitionLabel>().unwrap();
        assert_eq!(mn_character(&p("2,1"), &p("3")).unwrap(), -1);
        assert_eq!(mn_character(&p("2,1"), &p("1,1,1")).unwrap(), 2);
        assert!(mn_character(&p("2,1"), &p("2")).is_err());
        for t in 1..=6 {
            let table = CharacterTable::new(t);
            assert!(table.columns_orthogonal(), "t={t}");
            let ones = table.partitions.iter().position(|m| *m == PartitionLabel::column(t)).unwrap();
            for (l, lambda) in table.partitions.iter().enumerate() {
                assert_eq!(BigUint::from(table.values[l][ones] as u64), syt_count(lambda));
            }
        }
    }

    #[test]
    fn plancherel_is_stationary() {
        for t in 2..=6 {
            let table = CharacterTable::new(t);
            let p = table.plancherel();
            assert_eq!(p.total(), BigRational::one());
            assert_eq!(mckay_step(&p, &table), p, "t={t}");
        }
    }

    #[test]
    fn pushforward() {
        for f in WALK_FLAVORS {
            assert!(pushforward_identity(f, 12).unwrap().holds, "{f:?}");
        }
        let mut d = exact_distribution(Flavor::TemperleyLieb, 6).unwrap();
        *d.numerators.get_mut(&2).unwrap() += 1u32;
        let r = compare_pushforward(&d, &highest_weight_distribution(Flavor::TemperleyLieb, 6).unwrap());
        assert_eq!(r.mismatches, vec![2]);
    }
}

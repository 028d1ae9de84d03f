//! Twistings of finite monoids, twisted products over finite commutative
//! monoids, 0-twisted monoids, and exhaustive checks of how Green's
//! structure, idempotents and simple dimensions behave under twisting.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::cells::{simple_dimensions, At};
use crate::diagram::{EvaluationMap, Flavor};
use crate::error::{Error, Result};
use crate::green::{green, GreenStructure};
use crate::monoid::{DiagramProducts, ElementLabel, FiniteMonoid};

/// Above this size the cocycle identity is checked on random triples only.
pub const EXHAUSTIVE_COCYCLE_LIMIT: usize = 200;
const COCYCLE_SAMPLES: usize = 200_000;

/// A map `S × S → ℕ` satisfying `Φ(a,b) + Φ(ab,c) = Φ(a,bc) + Φ(b,c)`.
#[derive(Debug, Clone)]
pub struct Twisting {
    base: FiniteMonoid,
    phi: Vec<u32>,
    /// Pairs whose product had closed components of both zero- and
    /// one-valued genera (canonical twistings only).
    mixed: Vec<(usize, usize)>,
}

/// A pair `(a, b)` for which no rewriting with zero twist exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LooseWitness {
    pub a: usize,
    pub b: usize,
    /// `"left"`: no `a'` with `a'b = ab` and `Φ(a',b) = 0`; `"right"`: the
    /// same with `b'`.
    pub side: &'static str,
}

impl Twisting {
    /// Checks the cocycle identity, exhaustively when `|S| ≤ 200`.
    pub fn new(base: FiniteMonoid, phi: Vec<u32>) -> Result<Self> {
        let t = Self::unchecked(base, phi)?;
        match t.cocycle_violation(0) {
            Some((a, b, c)) => Err(Error::CocycleViolation(a, b, c)),
            None => Ok(t),
        }
    }

    /// Same as [`Twisting::new`] without the cocycle check.
    pub fn unchecked(base: FiniteMonoid, phi: Vec<u32>) -> Result<Self> {
        let n = base.size();
        if phi.len() != n * n {
            return Err(Error::MalformedTable(format!("twisting needs {} entries, got {}", n * n, phi.len())));
        }
        Ok(Twisting { base, phi, mixed: Vec::new() })
    }

    /// The zero twisting.
    pub fn trivial(base: FiniteMonoid) -> Self {
        let n = base.size();
        Twisting { base, phi: vec![0; n * n], mixed: Vec::new() }
    }

    pub fn base(&self) -> &FiniteMonoid {
        &self.base
    }

    #[inline]
    pub fn phi(&self, a: usize, b: usize) -> u32 {
        self.phi[a * self.base.size() + b]
    }

    /// The common value `Φ(a,b) + Φ(ab,c)`.
    pub fn phi3(&self, a: usize, b: usize, c: usize) -> u32 {
        self.phi(a, b) + self.phi(self.base.mul(a, b), c)
    }

    pub fn is_zero(&self) -> bool {
        self.phi.iter().all(|v| *v == 0)
    }

    pub fn mixed_pairs(&self) -> &[(usize, usize)] {
        &self.mixed
    }

    /// A triple breaking the cocycle identity.
    pub fn cocycle_violation(&self, seed: u64) -> Option<(usize, usize, usize)> {
        let s = &self.base;
        let n = s.size();
        let bad = |a: usize, b: usize, c: usize| self.phi3(a, b, c) != self.phi(a, s.mul(b, c)) + self.phi(b, c);
        if n <= EXHAUSTIVE_COCYCLE_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if bad(a, b, c) {
                            return Some((a, b, c));
                        }
                    }
                }
            }
            None
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..COCYCLE_SAMPLES)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
                .find(|&(a, b, c)| bad(a, b, c))
        }
    }

    /// `Ok(())` when tight, otherwise the first pair without a zero-twist
    /// rewriting.
    pub fn tightness(&self) -> std::result::Result<(), LooseWitness> {
        let s = &self.base;
        let n = s.size();
        // left: for each b, the products a'b reachable with Φ(a',b) = 0
        let mut reach = vec![false; n];
        for b in 0..n {
            reach.iter_mut().for_each(|r| *r = false);
            for a in 0..n {
                if self.phi(a, b) == 0 {
                    reach[s.mul(a, b)] = true;
                }
            }
            if let Some(a) = (0..n).find(|&a| !reach[s.mul(a, b)]) {
                return Err(LooseWitness { a, b, side: "left" });
            }
        }
        for a in 0..n {
            reach.iter_mut().for_each(|r| *r = false);
            for b in 0..n {
                if self.phi(a, b) == 0 {
                    reach[s.mul(a, b)] = true;
                }
            }
            if let Some(b) = (0..n).find(|&b| !reach[s.mul(a, b)]) {
                return Err(LooseWitness { a, b, side: "right" });
            }
        }
        Ok(())
    }

    pub fn is_tight(&self) -> bool {
        self.tightness().is_ok()
    }

    fn require_tight(&self) -> Result<()> {
        self.tightness().map_err(|w| {
            Error::NotTight(format!("no zero-twist rewriting of ({}, {}) on the {}", w.a, w.b, w.side))
        })
    }
}

/// Counting twisting on the classical monoid of `flavor`: `Φ(x,y)` is the
/// number of closed components of `x·y`, or 0 when one of them has a genus
/// that `a` sends to zero.
pub fn canonical_twisting(flavor: Flavor, n: usize, a: &EvaluationMap) -> Result<Twisting> {
    canonical_twisting_from(&DiagramProducts::new(flavor, n)?, a)
}

pub fn canonical_twisting_from(products: &DiagramProducts, a: &EvaluationMap) -> Result<Twisting> {
    let base = products.evaluate(&EvaluationMap::classical());
    let size = products.len();
    let per_set: Vec<(u32, bool)> = products
        .float_sets()
        .iter()
        .map(|f| {
            let killed = f.genera().any(|g| !a.value(g));
            let kept = f.genera().any(|g| a.value(g));
            (if killed { 0 } else { f.total() }, killed && kept)
        })
        .collect();
    let mut phi = Vec::with_capacity(size * size);
    let mut mixed = Vec::new();
    for x in 0..size {
        for y in 0..size {
            let f = products.floats(x, y);
            let id = products.float_sets().iter().position(|s| s == f).expect("float set is listed");
            phi.push(per_set[id].0);
            if per_set[id].1 {
                mixed.push((x, y));
            }
        }
    }
    let mut t = Twisting::new(base, phi)?;
    t.mixed = mixed;
    Ok(t)
}

/// A finite commutative monoid, written additively.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutativeMonoid {
    name: String,
    size: usize,
    add: Vec<usize>,
    neutral: usize,
    d_trivial: bool,
}

impl CommutativeMonoid {
    /// Validates commutativity, associativity and the neutral element.
    pub fn from_table(name: impl Into<String>, size: usize, add: Vec<usize>) -> Result<Self> {
        if size == 0 || add.len() != size * size || add.iter().any(|x| *x >= size) {
            return Err(Error::MalformedTable("commutative monoid table has the wrong shape".into()));
        }
        let at = |a: usize, b: usize| add[a * size + b];
        for a in 0..size {
            for b in 0..size {
                if at(a, b) != at(b, a) {
                    return Err(Error::MalformedTable(format!("{a} + {b} is not commutative")));
                }
                for c in 0..size {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::MalformedTable(format!("({a}, {b}, {c}) breaks associativity")));
                    }
                }
            }
        }
        let neutral = (0..size)
            .find(|&e| (0..size).all(|x| at(e, x) == x))
            .ok_or_else(|| Error::MalformedTable("no neutral element".into()))?;
        // principal ideals a + M; D-trivial iff they are pairwise distinct
        let ideals: Vec<Vec<bool>> = (0..size)
            .map(|a| {
                let mut row = vec![false; size];
                (0..size).for_each(|x| row[at(a, x)] = true);
                row
            })
            .collect();
        let d_trivial = (0..size).all(|a| (a + 1..size).all(|b| ideals[a] != ideals[b]));
        Ok(CommutativeMonoid { name: name.into(), size, add, neutral, d_trivial })
    }

    /// `{0, …, m}` with `a ⊕ b = min(a + b, m)`.
    pub fn saturating(m: usize) -> Self {
        let size = m + 1;
        let add = (0..size).flat_map(|a| (0..size).map(move |b| (a + b).min(m))).collect();
        Self::from_table(format!("saturating({m})"), size, add).expect("saturating table is valid")
    }

    /// `ℤ/m`.
    pub fn cyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::MalformedTable("cyclic(0)".into()));
        }
        let add = (0..m).flat_map(|a| (0..m).map(move |b| (a + b) % m)).collect();
        Self::from_table(format!("cyclic({m})"), m, add)
    }

    /// A finite semilattice given by its operation table (e.g. the join of
    /// a lattice); must be idempotent.
    pub fn semilattice(size: usize, join: Vec<usize>) -> Result<Self> {
        let m = Self::from_table("semilattice", size, join)?;
        if let Some(a) = (0..size).find(|&a| m.add(a, a) != a) {
            return Err(Error::MalformedTable(format!("{a} + {a} != {a}")));
        }
        Ok(m)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b]
    }

    pub fn neutral(&self) -> usize {
        self.neutral
    }

    pub fn is_d_trivial(&self) -> bool {
        self.d_trivial
    }

    /// `k·q = q ⊕ … ⊕ q` (`k` summands, the neutral element for `k = 0`).
    pub fn times(&self, k: u32, q: usize) -> usize {
        (0..k).fold(self.neutral, |acc, _| self.add(acc, q))
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.add(a, a) == a
    }

    pub fn to_monoid(&self) -> FiniteMonoid {
        let table = self.add.iter().map(|x| *x as u32).collect();
        FiniteMonoid::from_table(self.size, table).expect("validated table")
    }
}

/// `M ×_Φ^q S` with `(j,a)(k,b) = (j ⊕ k ⊕ Φ(a,b)·q, ab)`. Element
/// `(j, a)` has index `j·|S| + a`.
#[derive(Debug, Clone)]
pub struct TwistedMonoid {
    pub m: CommutativeMonoid,
    pub twisting: Twisting,
    pub q: usize,
    pub monoid: FiniteMonoid,
    pub tight: bool,
}

impl TwistedMonoid {
    pub fn index(&self, j: usize, a: usize) -> usize {
        j * self.twisting.base().size() + a
    }

    pub fn split(&self, x: usize) -> (usize, usize) {
        let s = self.twisting.base().size();
        (x / s, x % s)
    }

    pub fn base(&self) -> &FiniteMonoid {
        self.twisting.base()
    }
}

/// Builds the twisted product; associativity is checked exhaustively up to
/// 500 elements.
pub fn twisted_product(m: &CommutativeMonoid, t: &Twisting, q: usize) -> Result<TwistedMonoid> {
    if q >= m.size() {
        return Err(Error::MalformedTable(format!("q = {q} is not an element of {}", m.name())));
    }
    let s = t.base();
    let (ms, ss) = (m.size(), s.size());
    let size = ms * ss;
    let max_phi = t.phi.iter().copied().max().unwrap_or(0);
    let multiples: Vec<usize> = (0..=max_phi).map(|k| m.times(k, q)).collect();
    let mut table = Vec::with_capacity(size * size);
    for j in 0..ms {
        for a in 0..ss {
            for k in 0..ms {
                for b in 0..ss {
                    let i = m.add(m.add(j, k), multiples[t.phi(a, b) as usize]);
                    table.push((i * ss + s.mul(a, b)) as u32);
                }
            }
        }
    }
    let labels = (0..ms).flat_map(|j| (0..ss).map(move |a| ElementLabel::Pair { m: j, s: a })).collect();
    let monoid = FiniteMonoid::from_table(size, table)?.with_labels(labels)?;
    if let Some((a, b, c)) = monoid.associativity_violation(500, 100_000, 0) {
        return Err(Error::MalformedTable(format!("twisted product not associative at ({a}, {b}, {c})")));
    }
    Ok(TwistedMonoid { m: m.clone(), twisting: t.clone(), q, monoid, tight: t.is_tight() })
}

/// `S ⊔ {0}` with `a * b = ab` when `Φ(a,b) = 0` and `0` otherwise.
#[derive(Debug, Clone)]
pub struct ZeroTwisted {
    pub monoid: FiniteMonoid,
    /// Index of the zero.
    pub zero: usize,
    /// The base already had an absorbing zero, which now serves as the zero
    /// (no element adjoined).
    pub reused_zero: bool,
}

pub fn zero_twisted(t: &Twisting) -> Result<ZeroTwisted> {
    let s = t.base();
    let n = s.size();
    let (size, zero, reused_zero) = match s.zero() {
        Some(z) => (n, z, true),
        None => (n + 1, n, false),
    };
    let mut table = Vec::with_capacity(size * size);
    for a in 0..size {
        for b in 0..size {
            let v = if a == zero || b == zero || a >= n || b >= n || t.phi(a, b) != 0 { zero } else { s.mul(a, b) };
            table.push(v as u32);
        }
    }
    let mut labels: Vec<ElementLabel> = match s.labels() {
        Some(l) => l.to_vec(),
        None => (0..n).map(|i| ElementLabel::Name(i.to_string())).collect(),
    };
    if !reused_zero {
        labels.push(ElementLabel::Zero);
    }
    let monoid = FiniteMonoid::from_table(size, table)?.with_labels(labels)?;
    Ok(ZeroTwisted { monoid, zero, reused_zero })
}

/// Verification outcome: `{"theorem", "instances", "violations"}`.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub instances: Vec<serde_json::Value>,
    pub violations: Vec<String>,
}

impl TheoremReport {
    fn new(theorem: &str) -> Self {
        TheoremReport { theorem: theorem.into(), instances: Vec::new(), violations: Vec::new() }
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn tightness_instance(t: &Twisting) -> serde_json::Value {
    match t.tightness() {
        Ok(()) => json!({"tight": true, "evidence": "finite check"}),
        Err(w) => json!({"tight": false, "witness": w}),
    }
}

/// Tightness of a twisting, reported with its evidence.
pub fn tightness_report(label: &str, t: &Twisting) -> TheoremReport {
    let mut r = TheoremReport::new("tightness");
    let mut inst = tightness_instance(t);
    inst["monoid"] = json!(label);
    inst["size"] = json!(t.base().size());
    inst["mixed_pairs"] = json!(t.mixed_pairs().len());
    r.instances.push(inst);
    r
}

fn principal_ideals(m: &FiniteMonoid) -> (Vec<Vec<bool>>, Vec<Vec<bool>>, Vec<Vec<bool>>) {
    let n = m.size();
    let mut right = vec![vec![false; n]; n];
    let mut left = vec![vec![false; n]; n];
    let mut two = vec![vec![false; n]; n];
    for b in 0..n {
        for x in 0..n {
            right[b][m.mul(b, x)] = true;
            left[b][m.mul(x, b)] = true;
        }
        for x in 0..n {
            let xb = m.mul(x, b);
            for y in 0..n {
                two[b][m.mul(xb, y)] = true;
            }
        }
    }
    (right, left, two)
}

/// For tight `Φ`: every Green's relation and preorder of `T⁰` restricted to
/// `S` is that of `S`, and `0` is alone in its classes.
pub fn verify_zero_twisted_green(t: &Twisting) -> Result<TheoremReport> {
    t.require_tight()?;
    let s = t.base();
    let z = zero_twisted(t)?;
    let mut r = TheoremReport::new("zero-twisted Green's relations");
    let (rs, ls, js) = principal_ideals(s);
    let (rt, lt, jt) = principal_ideals(&z.monoid);
    let n = s.size();
    for (name, a_s, a_t) in [("<=R", &rs, &rt), ("<=L", &ls, &lt), ("<=J", &js, &jt)] {
        for b in 0..n {
            for a in 0..n {
                if a_s[b][a] != a_t[b][a] {
                    r.violations.push(format!("{name} differs at ({a}, {b})"));
                }
            }
        }
    }
    let gs = green(s);
    let gt = green(&z.monoid);
    let same = |x: &[usize], y: &[usize]| {
        (0..n).all(|a| (0..n).all(|b| (x[a] == x[b]) == (y[a] == y[b])))
            && (0..n).all(|a| a == z.zero || y[a] != y[z.zero])
    };
    let h_of = |g: &GreenStructure| -> Vec<usize> {
        let k = g.l_classes.len();
        g.r_of.iter().zip(&g.l_of).map(|(r, l)| r * k + l).collect()
    };
    for (name, x, y) in [
        ("R", gs.r_of.clone(), gt.r_of.clone()),
        ("L", gs.l_of.clone(), gt.l_of.clone()),
        ("J", gs.j_of.clone(), gt.j_of.clone()),
        ("D", gs.d_of.clone(), gt.d_of.clone()),
        ("H", h_of(&gs), h_of(&gt)),
    ] {
        if !same(&x, &y) {
            r.violations.push(format!("{name}-classes differ"));
        }
    }
    r.instances.push(json!({
        "size": n,
        "zero_size": z.monoid.size(),
        "reused_zero": z.reused_zero,
        "j_classes": [gs.j_count(), gt.j_count()],
    }));
    Ok(r)
}

/// `K_{(j,a)} = K_j^M × K_a^S` for K ∈ {R, L, J, H}.
pub fn verify_green_product(tm: &TwistedMonoid) -> Result<TheoremReport> {
    tm.twisting.require_tight()?;
    let mut r = TheoremReport::new("Green's classes of a tight twisted product");
    let gt = green(&tm.monoid);
    let gm = green(&tm.m.to_monoid());
    let gs = green(tm.base());
    let size = tm.monoid.size();
    let h = |g: &GreenStructure, x: usize, y: usize| g.r_of[x] == g.r_of[y] && g.l_of[x] == g.l_of[y];
    let mut checked = 0usize;
    for x in 0..size {
        let (j, a) = tm.split(x);
        for y in 0..size {
            let (k, b) = tm.split(y);
            let cases = [
                ("R", gt.r_of[x] == gt.r_of[y], gm.r_of[j] == gm.r_of[k] && gs.r_of[a] == gs.r_of[b]),
                ("L", gt.l_of[x] == gt.l_of[y], gm.l_of[j] == gm.l_of[k] && gs.l_of[a] == gs.l_of[b]),
                ("J", gt.j_of[x] == gt.j_of[y], gm.j_of[j] == gm.j_of[k] && gs.j_of[a] == gs.j_of[b]),
                ("H", h(&gt, x, y), h(&gm, j, k) && h(&gs, a, b)),
            ];
            for (name, lhs, rhs) in cases {
                checked += 1;
                if lhs != rhs && r.violations.len() < 50 {
                    r.violations.push(format!("{name}: ({j},{a}) vs ({k},{b}): twisted {lhs}, product {rhs}"));
                }
            }
        }
    }
    r.instances.push(json!({
        "m": tm.m.name(),
        "q": tm.q,
        "size": size,
        "pairs_checked": checked,
        "j_classes": gt.j_count(),
    }));
    Ok(r)
}

fn require_d_trivial(m: &CommutativeMonoid) -> Result<()> {
    if m.is_d_trivial() {
        Ok(())
    } else {
        Err(Error::HypothesisFailed(format!("{} is not D-trivial", m.name())))
    }
}

/// The idempotents of the formula `{(i,e) : i, e idempotent, i = i ⊕ Φ(e,e)q}`.
pub fn idempotent_formula(tm: &TwistedMonoid) -> Vec<usize> {
    let s = tm.base();
    let mut out = Vec::new();
    for i in (0..tm.m.size()).filter(|&i| tm.m.is_idempotent(i)) {
        for e in s.idempotents() {
            if tm.m.add(i, tm.m.times(tm.twisting.phi(e, e), tm.q)) == i {
                out.push(tm.index(i, e));
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn verify_idempotent_formula(tm: &TwistedMonoid) -> Result<TheoremReport> {
    require_d_trivial(&tm.m)?;
    tm.twisting.require_tight()?;
    let mut r = TheoremReport::new("idempotents of a tight twisted product");
    let computed = tm.monoid.idempotents();
    let formula = idempotent_formula(tm);
    let pairs = |v: &[usize]| v.iter().map(|x| tm.split(*x)).collect::<Vec<_>>();
    if computed != formula {
        r.violations.push(format!("computed {:?} vs formula {:?}", pairs(&computed), pairs(&formula)));
    }
    r.instances.push(json!({"m": tm.m.name(), "q": tm.q, "idempotents": computed.len()}));
    Ok(r)
}

/// Whether two 0/1 grids agree up to independent row and column
/// permutations.
pub fn dclass_equivalent(a: &[Vec<bool>], b: &[Vec<bool>]) -> bool {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    if b.len() != rows || b.first().map_or(0, Vec::len) != cols {
        return false;
    }
    if a.iter().chain(b).any(|r| r.len() != cols) {
        return false;
    }
    let sums = |g: &[Vec<bool>]| {
        let mut r: Vec<usize> = g.iter().map(|row| row.iter().filter(|x| **x).count()).collect();
        let mut c: Vec<usize> = (0..cols).map(|j| g.iter().filter(|row| row[j]).count()).collect();
        r.sort_unstable();
        c.sort_unstable();
        (r, c)
    };
    if sums(a) != sums(b) {
        return false;
    }
    // place rows of a in order, choosing rows of b; the multisets of partial
    // column vectors must agree at every depth
    let row_sum = |g: &[Vec<bool>], i: usize| g[i].iter().filter(|x| **x).count();
    let mut used = vec![false; rows];
    let mut chosen = Vec::with_capacity(rows);
    fn column_profile(g: &[Vec<bool>], order: &[usize], cols: usize) -> Vec<Vec<bool>> {
        let mut v: Vec<Vec<bool>> = (0..cols).map(|j| order.iter().map(|&i| g[i][j]).collect()).collect();
        v.sort_unstable();
        v
    }
    fn search(
        a: &[Vec<bool>],
        b: &[Vec<bool>],
        depth: usize,
        used: &mut [bool],
        chosen: &mut Vec<usize>,
        row_sum: &dyn Fn(&[Vec<bool>], usize) -> usize,
    ) -> bool {
        let rows = a.len();
        let cols = a[0].len();
        if depth == rows {
            return true;
        }
        let a_order: Vec<usize> = (0..=depth).collect();
        let target = column_profile(a, &a_order, cols);
        for cand in 0..rows {
            if used[cand] || row_sum(b, cand) != row_sum(a, depth) {
                continue;
            }
            chosen.push(cand);
            if column_profile(b, chosen, cols) == target {
                used[cand] = true;
                if search(a, b, depth + 1, used, chosen, row_sum) {
                    return true;
                }
                used[cand] = false;
            }
            chosen.pop();
        }
        false
    }
    rows == 0 || cols == 0 || search(a, b, 0, &mut used, &mut chosen, &row_sum)
}

/// Idempotent grid of the D-class (= J-class) holding `x`.
fn grid_of(m: &FiniteMonoid, g: &GreenStructure, x: usize) -> Vec<Vec<bool>> {
    g.eggboxes[g.j_of[x]].idempotent_pattern(m)
}

/// Per idempotent-bearing D-class of `T`: equivalent to the D-class of `S`
/// or of `T⁰`, exactly one of the two precisely when some idempotent `e` of
/// the `S`-class has `Φ(e,e) > 0`.
pub fn verify_main_theorem(tm: &TwistedMonoid) -> Result<TheoremReport> {
    require_d_trivial(&tm.m)?;
    tm.twisting.require_tight()?;
    let mut r = TheoremReport::new("D-classes of a tight twisted product");
    let s = tm.base();
    let t0 = zero_twisted(&tm.twisting)?;
    let (gt, gs, g0) = (green(&tm.monoid), green(s), green(&t0.monoid));
    let m = &tm.m;
    for (d, members) in gt.j_classes.iter().enumerate() {
        if !members.iter().any(|&x| tm.monoid.is_idempotent(x)) {
            continue;
        }
        let (j, a) = tm.split(members[0]);
        let es: Vec<usize> = gs.j_classes[gs.j_of[a]].iter().copied().filter(|&e| s.is_idempotent(e)).collect();
        let fixes = |e: usize| m.add(j, m.times(tm.twisting.phi(e, e), tm.q)) == j;
        let antecedent = es.iter().any(|&e| tm.twisting.phi(e, e) > 0 && fixes(e));
        let condition = !antecedent || es.iter().all(|&f| tm.twisting.phi(f, f) == 0 || fixes(f));
        if !condition {
            return Err(Error::HypothesisFailed(format!(
                "idempotent condition fails for the D-class of ({j}, {a})"
            )));
        }
        let sufficient = m.is_idempotent(m.add(j, tm.q));
        let grid_t = grid_of(&tm.monoid, &gt, members[0]);
        let matches_s = dclass_equivalent(&grid_t, &grid_of(s, &gs, a));
        let matches_t0 = dclass_equivalent(&grid_t, &grid_of(&t0.monoid, &g0, a));
        let positive = es.iter().any(|&e| tm.twisting.phi(e, e) > 0);
        if !(matches_s || matches_t0) {
            r.violations.push(format!("D-class of ({j}, {a}) matches neither S nor the 0-twist"));
        } else if (matches_s != matches_t0) != positive {
            r.violations.push(format!(
                "D-class of ({j}, {a}): exclusive match {} but positive idempotent twist {positive}",
                matches_s != matches_t0
            ));
        }
        r.instances.push(json!({
            "d_class": d,
            "m": j,
            "s_rep": a,
            "size": members.len(),
            "matches_untwisted": matches_s,
            "matches_zero_twisted": matches_t0,
            "positive_idempotent_twist": positive,
            "sufficient_condition": sufficient,
        }));
    }
    Ok(r)
}

/// Simple dimension of one idempotent-bearing J-class of a twisted product
/// next to the dimensions of the matching classes of `S` and `T⁰`.
#[derive(Debug, Clone, Serialize)]
pub struct TwistedDim {
    pub m: usize,
    pub s_rep: usize,
    pub apex: Option<usize>,
    pub dim: usize,
    pub untwisted: usize,
    pub zero_twisted: usize,
}

impl TwistedDim {
    pub fn matches(&self) -> bool {
        self.dim == self.untwisted || self.dim == self.zero_twisted
    }
}

/// Simple dimensions of `T`, keyed by `(m-coordinate, apex of S-class)`.
pub fn twisted_simple_dims(tm: &TwistedMonoid, at: &At) -> Result<BTreeMap<(usize, usize), TwistedDim>> {
    // the hypotheses of the main theorem, including the idempotent condition
    verify_main_theorem(tm)?;
    let s = tm.base();
    let t0 = zero_twisted(&tm.twisting)?;
    let (gt, gs, g0) = (green(&tm.monoid), green(s), green(&t0.monoid));
    let by_class = |m: &FiniteMonoid, g: &GreenStructure| -> Result<HashMap<usize, usize>> {
        Ok(simple_dimensions(m, g, at)?.into_iter().map(|d| (d.j, d.dim)).collect())
    };
    let (dt, ds, d0) = (by_class(&tm.monoid, &gt)?, by_class(s, &gs)?, by_class(&t0.monoid, &g0)?);
    let mut out = BTreeMap::new();
    for (j_class, dim) in dt {
        let (j, a) = tm.split(gt.j_classes[j_class][0]);
        let apex = s.through_strands(a);
        out.insert(
            (j, apex.unwrap_or(gs.j_of[a])),
            TwistedDim {
                m: j,
                s_rep: a,
                apex,
                dim,
                untwisted: ds.get(&gs.j_of[a]).copied().unwrap_or(0),
                zero_twisted: d0.get(&g0.j_of[a]).copied().unwrap_or(0),
            },
        );
    }
    Ok(out)
}

pub fn verify_simple_dims(tm: &TwistedMonoid, at: &At) -> Result<TheoremReport> {
    let dims = twisted_simple_dims(tm, at)?;
    let mut r = TheoremReport::new("simple dimensions of a tight twisted product");
    for d in dims.values() {
        if !d.matches() {
            r.violations.push(format!(
                "({}, apex {:?}): dim {} not in {{{}, {}}}",
                d.m, d.apex, d.dim, d.untwisted, d.zero_twisted
            ));
        }
        r.instances.push(serde_json::to_value(d).expect("serializable"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::build_diagram_monoid;

    fn a0_zero() -> EvaluationMap {
        EvaluationMap::new(vec![false, true], 1).unwrap()
    }

    #[test]
    fn tl2_phi() {
        let p = DiagramProducts::new(Flavor::TemperleyLieb, 2).unwrap();
        let t = canonical_twisting_from(&p, &EvaluationMap::classical()).unwrap();
        let id = t.base().identity();
        let e = 1 - id;
        assert_eq!(t.phi(e, e), 1);
        assert!((0..2).all(|x| t.phi(id, x) == 0 && t.phi(x, id) == 0));
    }

    #[test]
    fn cocycle_and_tightness_small() {
        for (f, n) in [(Flavor::TemperleyLieb, 3), (Flavor::Rook, 2), (Flavor::Brauer, 3)] {
            let t = canonical_twisting(f, n, &EvaluationMap::classical()).unwrap();
            assert_eq!(t.cocycle_violation(0), None);
            assert!(t.is_tight(), "{f}");
        }
        // the cap-cup times the top-singleton diagram leaves one closed
        // path; the only other left factor with a top cap leaves two dots
        let p = DiagramProducts::new(Flavor::Motzkin, 2).unwrap();
        let t = canonical_twisting_from(&p, &EvaluationMap::classical()).unwrap();
        let w = t.tightness().unwrap_err();
        assert_eq!(format!("{:?}", p.diagrams()[w.a]), "Mo(2)[{B1,B2} {T1,T2}]");
        assert_eq!(t.phi(w.a, w.b), 1);
        // with a0 = 0 every pair meeting a dot is untwisted
        let t0 = canonical_twisting_from(&p, &a0_zero()).unwrap();
        assert!(t0.is_tight());
        assert!(matches!(canonical_twisting(Flavor::Partition, 2, &a0_zero()), Err(Error::CocycleViolation(..))));
    }

    #[test]
    fn saturating_tl2() {
        let t = canonical_twisting(Flavor::TemperleyLieb, 2, &EvaluationMap::classical()).unwrap();
        let m = CommutativeMonoid::saturating(2);
        assert!(m.is_d_trivial());
        let tm = twisted_product(&m, &t, 1).unwrap();
        assert_eq!(tm.monoid.size(), 6);
        let id = t.base().identity();
        let e = 1 - id;
        let got: Vec<(usize, usize)> = tm.monoid.idempotents().into_iter().map(|x| tm.split(x)).collect();
        let mut want = vec![(0, id), (2, id), (2, e)];
        want.sort_by_key(|&(j, a)| tm.index(j, a));
        assert_eq!(got, want);
        assert!(verify_idempotent_formula(&tm).unwrap().holds());
    }

    #[test]
    fn neutral_q_is_direct_product() {
        let t = canonical_twisting(Flavor::TemperleyLieb, 3, &EvaluationMap::classical()).unwrap();
        let m = CommutativeMonoid::saturating(3);
        let tm = twisted_product(&m, &t, m.neutral()).unwrap();
        let s = t.base();
        for x in 0..tm.monoid.size() {
            for y in 0..tm.monoid.size() {
                let ((j, a), (k, b)) = (tm.split(x), tm.split(y));
                assert_eq!(tm.split(tm.monoid.mul(x, y)), (m.add(j, k), s.mul(a, b)));
            }
        }
        let e = verify_idempotent_formula(&tm).unwrap();
        assert!(e.holds());
        assert_eq!(e.instances[0]["idempotents"], json!(2 * s.idempotents().len()));
    }

    #[test]
    fn cyclic_rejected() {
        let t = canonical_twisting(Flavor::TemperleyLieb, 2, &EvaluationMap::classical()).unwrap();
        let m = CommutativeMonoid::cyclic(3).unwrap();
        assert!(!m.is_d_trivial());
        let tm = twisted_product(&m, &t, 1).unwrap();
        assert!(matches!(verify_idempotent_formula(&tm), Err(Error::HypothesisFailed(_))));
    }

    #[test]
    fn zero_twist_of_tl4_is_zero_parameter_monoid() {
        let t = canonical_twisting(Flavor::TemperleyLieb, 4, &EvaluationMap::classical()).unwrap();
        let z = zero_twisted(&t).unwrap();
        let direct = build_diagram_monoid(Flavor::TemperleyLieb, 4, &EvaluationMap::zero()).unwrap();
        let map: Vec<usize> = (0..z.monoid.size()).collect();
        assert!(z.monoid.is_isomorphic_via(&direct, &map));
        assert!(!z.reused_zero);
        let e0: Vec<usize> = z.monoid.idempotents().into_iter().filter(|x| *x != z.zero).collect();
        assert!(e0.iter().all(|e| t.base().is_idempotent(*e)));
        assert!(verify_zero_twisted_green(&t).unwrap().holds());
    }

    #[test]
    fn grids_up_to_permutation() {
        let g = vec![vec![true, false, true], vec![false, true, false], vec![true, true, false]];
        assert!(dclass_equivalent(&g, &g));
        let swapped = vec![g[2].clone(), g[0].clone(), g[1].clone()];
        assert!(dclass_equivalent(&g, &swapped));
        let cols: Vec<Vec<bool>> = swapped.iter().map(|r| vec![r[1], r[2], r[0]]).collect();
        assert!(dclass_equivalent(&g, &cols));
        let other = vec![vec![true, true, false], vec![false, false, true], vec![true, false, true]];
        assert_eq!(dclass_equivalent(&g, &other), dclass_equivalent(&other, &g));
        assert!(!dclass_equivalent(&g, &[vec![true; 3], vec![false; 3], vec![true, false, false]]));
        // same row and column sums, not equivalent
        let c6 = |shift: usize| -> Vec<Vec<bool>> {
            (0..6).map(|i| (0..6).map(|j| j == i || j == (i + shift) % 6).collect()).collect()
        };
        let two_triangles: Vec<Vec<bool>> =
            (0..6).map(|i| (0..6).map(|j| i / 3 == j / 3 && (j == i || j == (i / 3) * 3 + (i + 1) % 3)).collect()).collect();
        assert!(!dclass_equivalent(&c6(1), &two_triangles));
        assert!(dclass_equivalent(&c6(1), &c6(5)));
    }

    #[test]
    fn tl4_middle_class_differs_from_zero_parameter() {
        let classical = build_diagram_monoid(Flavor::TemperleyLieb, 4, &EvaluationMap::classical()).unwrap();
        let zero = build_diagram_monoid(Flavor::TemperleyLieb, 4, &EvaluationMap::zero()).unwrap();
        let (gc, gz) = (green(&classical), green(&zero));
        let e = (0..classical.size()).find(|&x| classical.through_strands(x) == Some(2)).unwrap();
        assert!(dclass_equivalent(&grid_of(&classical, &gc, e), &grid_of(&classical, &gc, e)));
        assert!(!dclass_equivalent(&grid_of(&classical, &gc, e), &grid_of(&zero, &gz, e)));
    }

    #[test]
    fn tl3_theorems() {
        let t = canonical_twisting(Flavor::TemperleyLieb, 3, &EvaluationMap::classical()).unwrap();
        let tm = twisted_product(&CommutativeMonoid::saturating(3), &t, 1).unwrap();
        assert!(verify_green_product(&tm).unwrap().holds());
        let main = verify_main_theorem(&tm).unwrap();
        assert!(main.holds(), "{:?}", main.violations);
    }

    #[test]
    fn tl4_twisted_dims() {
        let t = canonical_twisting(Flavor::TemperleyLieb, 4, &EvaluationMap::classical()).unwrap();
        let tm = twisted_product(&CommutativeMonoid::saturating(2), &t, 1).unwrap();
        let r = verify_simple_dims(&tm, &At::Table).unwrap();
        assert!(r.holds(), "{:?}", r.violations);
        let z = zero_twisted(&t).unwrap();
        let dims: Vec<usize> =
            simple_dimensions(&z.monoid, &green(&z.monoid), &At::Table).unwrap().iter().map(|d| d.dim).collect();
        let mut sorted = dims.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 2]);
    }

    #[test]
    fn loose_is_refused() {
        // {1, x, z}: x·x = z, z absorbing; the coboundary of f(x) = 1
        let s = FiniteMonoid::from_table(3, vec![0, 1, 2, 1, 2, 2, 2, 2, 2]).unwrap();
        let f = [0i64, 1, 0];
        let phi = (0..9).map(|i| (f[i / 3] + f[i % 3] - f[s.mul(i / 3, i % 3)]) as u32).collect();
        let t = Twisting::new(s.clone(), phi).unwrap();
        assert_eq!(t.tightness(), Err(LooseWitness { a: 1, b: 1, side: "left" }));
        let tm = twisted_product(&CommutativeMonoid::saturating(2), &t, 1).unwrap();
        assert!(matches!(verify_green_product(&tm), Err(Error::NotTight(_))));
        assert!(matches!(verify_main_theorem(&tm), Err(Error::NotTight(_))));
        assert!(Twisting::new(s, vec![0, 0, 0, 0, 1, 0, 0, 0, 0]).is_err());
    }
}

//! Finite monoids given by multiplication tables, and the tables of
//! diagram monoids under an evaluation map.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diagram::{compose_raw, enumerate_within, Budget, ComposeScratch, Diagram, EvaluationMap, Flavor, GenusMultiset};
use crate::error::{Error, Result};

/// What an element of a [`FiniteMonoid`] stands for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementLabel {
    Diagram(Diagram),
    /// Adjoined absorbing element.
    Zero,
    /// Adjoined identity.
    Unit,
    /// Element `(j, a)` of a twisted product, by indices into its factors.
    Pair { m: usize, s: usize },
    Name(String),
}

/// A finite monoid stored as a dense row-major multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    size: usize,
    table: Vec<u32>,
    identity: usize,
    zero: Option<usize>,
    labels: Option<Vec<ElementLabel>>,
}

impl FiniteMonoid {
    /// Builds a monoid from a row-major table; the identity is located and
    /// an absorbing zero, if any, is recorded. Associativity is not checked
    /// here, see [`FiniteMonoid::associativity_violation`].
    pub fn from_table(size: usize, table: Vec<u32>) -> Result<Self> {
        if table.len() != size * size {
            return Err(Error::MalformedTable(format!(
                "expected {} entries, got {}",
                size * size,
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|x| **x as usize >= size) {
            return Err(Error::MalformedTable(format!("entry {bad} out of range")));
        }
        let row = |a: usize| &table[a * size..(a + 1) * size];
        let identity = (0..size)
            .find(|&e| (0..size).all(|x| row(e)[x] as usize == x && table[x * size + e] as usize == x))
            .ok_or_else(|| Error::MalformedTable("no identity element".into()))?;
        let zero = (0..size)
            .find(|&z| (0..size).all(|x| row(z)[x] as usize == z && table[x * size + z] as usize == z))
            .filter(|z| size > 1 || *z != identity);
        Ok(FiniteMonoid { size, table, identity, zero, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<ElementLabel>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::MalformedTable(format!(
                "{} labels for {} elements",
                labels.len(),
                self.size
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b] as usize
    }

    pub fn row(&self, a: usize) -> &[u32] {
        &self.table[a * self.size..(a + 1) * self.size]
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn labels(&self) -> Option<&[ElementLabel]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> Option<&ElementLabel> {
        self.labels.as_ref().map(|l| &l[i])
    }

    pub fn diagram(&self, i: usize) -> Option<&Diagram> {
        match self.label(i) {
            Some(ElementLabel::Diagram(d)) => Some(d),
            _ => None,
        }
    }

    /// Through-strand count of a diagram element.
    pub fn through_strands(&self, i: usize) -> Option<usize> {
        self.diagram(i).map(Diagram::through_strands)
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.mul(a, a) == a
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.size).filter(|&a| self.is_idempotent(a)).collect()
    }

    /// Elements with a two-sided inverse.
    pub fn units(&self) -> Vec<usize> {
        let e = self.identity;
        (0..self.size)
            .filter(|&u| (0..self.size).any(|v| self.mul(u, v) == e && self.mul(v, u) == e))
            .collect()
    }

    pub fn is_group(&self) -> bool {
        self.units().len() == self.size
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size).all(|a| (a..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A triple breaking associativity: exhaustive up to `exhaustive_limit`
    /// elements, otherwise `samples` random triples.
    pub fn associativity_violation(
        &self,
        exhaustive_limit: usize,
        samples: usize,
        seed: u64,
    ) -> Option<(usize, usize, usize)> {
        let n = self.size;
        let bad = |a: usize, b: usize, c: usize| self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c));
        if n <= exhaustive_limit {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Some((a, b, c));
                        }
                    }
                }
            }
            None
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
                .find(|&(a, b, c)| bad(a, b, c))
        }
    }

    /// Same table up to relabelling by `map` (an injective map from self's
    /// ids to other's ids).
    pub fn is_isomorphic_via(&self, other: &FiniteMonoid, map: &[usize]) -> bool {
        self.size == other.size
            && map.len() == self.size
            && (0..self.size)
                .all(|a| (0..self.size).all(|b| map[self.mul(a, b)] == other.mul(map[a], map[b])))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TableRepr {
            size: self.size,
            table: self.table.clone(),
            identity: Some(self.identity),
            zero: self.zero,
            labels: self.labels.clone(),
        })
        .expect("table serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let repr: TableRepr =
            serde_json::from_value(value.clone()).map_err(|e| Error::MalformedTable(e.to_string()))?;
        let m = FiniteMonoid::from_table(repr.size, repr.table)?;
        if repr.identity.is_some_and(|i| i != m.identity) {
            return Err(Error::MalformedTable("declared identity is not the identity".into()));
        }
        match repr.labels {
            Some(l) => m.with_labels(l),
            None => Ok(m),
        }
    }

    /// Flat little-endian binary: magic, size, then the table.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 4 * self.table.len());
        out.extend_from_slice(BINARY_MAGIC);
        out.extend_from_slice(&(self.size as u32).to_le_bytes());
        for x in &self.table {
            out.extend_from_slice(&x.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 8 || &bytes[..4] != BINARY_MAGIC {
            return Err(Error::MalformedTable("bad binary header".into()));
        }
        let size = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
        let body = &bytes[8..];
        if body.len() != 4 * size * size {
            return Err(Error::MalformedTable("truncated binary table".into()));
        }
        let table = body.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect();
        FiniteMonoid::from_table(size, table)
    }
}

const BINARY_MAGIC: &[u8; 4] = b"DMT1";

#[derive(Serialize, Deserialize)]
struct TableRepr {
    size: usize,
    table: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    identity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zero: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<ElementLabel>>,
}

/// All products of a diagram family before evaluation: result diagram and
/// closed components for every ordered pair.
#[derive(Debug, Clone)]
pub struct DiagramProducts {
    flavor: Flavor,
    n: usize,
    diagrams: Vec<Diagram>,
    index: HashMap<Diagram, usize>,
    results: Vec<u32>,
    float_ids: Vec<u32>,
    float_sets: Vec<GenusMultiset>,
}

impl DiagramProducts {
    pub fn new(flavor: Flavor, n: usize) -> Result<Self> {
        Self::within(flavor, n, &Budget::default())
    }

    pub fn within(flavor: Flavor, n: usize, budget: &Budget) -> Result<Self> {
        let diagrams = enumerate_within(flavor, n, budget)?;
        let index: HashMap<Diagram, usize> = diagrams.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        let by_rgs: HashMap<&[u8], u32> =
            diagrams.iter().enumerate().map(|(i, d)| (d.assignment(), i as u32)).collect();
        let size = diagrams.len();
        let mut results = Vec::with_capacity(size * size);
        let mut float_ids = Vec::with_capacity(size * size);
        let mut float_sets = vec![GenusMultiset::new()];
        let mut float_index: HashMap<Vec<u32>, u32> = HashMap::from([(Vec::new(), 0)]);
        let mut scratch = ComposeScratch::default();
        let (mut rgs, mut genera) = (Vec::new(), Vec::new());
        for x in &diagrams {
            for y in &diagrams {
                compose_raw(n, x.assignment(), y.assignment(), &mut scratch, &mut rgs, &mut genera);
                results.push(by_rgs[rgs.as_slice()]);
                let id = match float_index.get(genera.as_slice()) {
                    Some(id) => *id,
                    None => {
                        let id = float_sets.len() as u32;
                        float_sets.push(genera.iter().fold(GenusMultiset::new(), |mut m, g| {
                            m.insert(*g);
                            m
                        }));
                        float_index.insert(genera.clone(), id);
                        id
                    }
                };
                float_ids.push(id);
            }
        }
        Ok(DiagramProducts { flavor, n, diagrams, index, results, float_ids, float_sets })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.diagrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagrams.is_empty()
    }

    pub fn diagrams(&self) -> &[Diagram] {
        &self.diagrams
    }

    pub fn index_of(&self, d: &Diagram) -> Option<usize> {
        self.index.get(d).copied()
    }

    /// Underlying product `x·y`, i.e. `x` stacked on top of `y`.
    pub fn product(&self, x: usize, y: usize) -> usize {
        self.results[x * self.len() + y] as usize
    }

    pub fn floats(&self, x: usize, y: usize) -> &GenusMultiset {
        &self.float_sets[self.float_ids[x * self.len() + y] as usize]
    }

    /// Distinct float multisets that occur.
    pub fn float_sets(&self) -> &[GenusMultiset] {
        &self.float_sets
    }

    /// The monoid obtained by evaluating closed components with `a`; a zero
    /// is adjoined (as the last element) iff some product evaluates to it.
    pub fn evaluate(&self, a: &EvaluationMap) -> FiniteMonoid {
        let size = self.len();
        let killed: Vec<bool> = self.float_sets.iter().map(|f| !f.genera().all(|g| a.value(g))).collect();
        let needs_zero = self.float_ids.iter().any(|id| killed[*id as usize]);
        let total = size + usize::from(needs_zero);
        let zero = size as u32;
        let mut table = Vec::with_capacity(total * total);
        for x in 0..size {
            for y in 0..size {
                let i = x * size + y;
                table.push(if killed[self.float_ids[i] as usize] { zero } else { self.results[i] });
            }
            if needs_zero {
                table.push(zero);
            }
        }
        if needs_zero {
            table.extend(std::iter::repeat_n(zero, total));
        }
        let mut labels: Vec<ElementLabel> = self.diagrams.iter().cloned().map(ElementLabel::Diagram).collect();
        if needs_zero {
            labels.push(ElementLabel::Zero);
        }
        let identity = self.index[&Diagram::identity(self.flavor, self.n)];
        FiniteMonoid {
            size: total,
            table,
            identity,
            zero: needs_zero.then_some(size),
            labels: Some(labels),
        }
    }
}

/// The diagram monoid of `flavor` on `n` strands with parameters `a`.
pub fn build_diagram_monoid(flavor: Flavor, n: usize, a: &EvaluationMap) -> Result<FiniteMonoid> {
    Ok(DiagramProducts::new(flavor, n)?.evaluate(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tl4_sizes() {
        let p = DiagramProducts::new(Flavor::TemperleyLieb, 4).unwrap();
        let classical = p.evaluate(&EvaluationMap::classical());
        assert_eq!(classical.size(), 14);
        assert_eq!(classical.zero(), None);
        let zero = p.evaluate(&EvaluationMap::zero());
        assert_eq!(zero.size(), 15);
        assert_eq!(zero.zero(), Some(14));
        assert_eq!(zero.label(14), Some(&ElementLabel::Zero));
    }

    #[test]
    fn rook2_size() {
        let m = build_diagram_monoid(Flavor::Rook, 2, &EvaluationMap::classical()).unwrap();
        assert_eq!(m.size(), 7);
        assert_eq!(m.associativity_violation(200, 0, 0), None);
    }

    #[test]
    fn table_roundtrips() {
        let m = build_diagram_monoid(Flavor::Motzkin, 2, &EvaluationMap::zero()).unwrap();
        let back = FiniteMonoid::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        let bin = FiniteMonoid::from_bytes(&m.to_bytes()).unwrap();
        assert_eq!(bin.table(), m.table());
        assert_eq!(bin.identity(), m.identity());
        assert_eq!(bin.zero(), m.zero());
    }

    #[test]
    fn malformed_tables_rejected() {
        assert!(FiniteMonoid::from_table(2, vec![0, 1, 1]).is_err());
        assert!(FiniteMonoid::from_table(2, vec![0, 0, 0, 0]).is_err());
        assert!(FiniteMonoid::from_table(2, vec![0, 1, 1, 2]).is_err());
        assert!(FiniteMonoid::from_bytes(b"nope").is_err());
    }

    #[test]
    fn small_table_monoid() {
        // {1, x} with x² = x
        let m = FiniteMonoid::from_table(2, vec![0, 1, 1, 1]).unwrap();
        assert_eq!(m.identity(), 0);
        assert_eq!(m.zero(), Some(1));
        assert_eq!(m.idempotents(), vec![0, 1]);
        assert_eq!(m.units(), vec![0]);
    }
}

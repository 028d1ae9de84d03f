//! Flavored partition diagrams and their stacking product.
//!
//! A diagram on `n` strands is a set partition of the `2n` boundary points
//! `B1..Bn` (bottom row) and `T1..Tn` (top row). Internally the partition is
//! stored as a restricted-growth string over the points in the order
//! `B1 < .. < Bn < T1 < .. < Tn`, which is exactly the canonical form "blocks
//! sorted by least label, labels sorted within blocks".

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Which family of diagrams a [`Diagram`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Partition,
    PlanarPartition,
    Brauer,
    TemperleyLieb,
    RookBrauer,
    Motzkin,
    Rook,
    PlanarRook,
    Symmetric,
}

impl Flavor {
    pub const ALL: [Flavor; 9] = [
        Flavor::Partition,
        Flavor::PlanarPartition,
        Flavor::Brauer,
        Flavor::TemperleyLieb,
        Flavor::RookBrauer,
        Flavor::Motzkin,
        Flavor::Rook,
        Flavor::PlanarRook,
        Flavor::Symmetric,
    ];

    pub fn is_planar(self) -> bool {
        matches!(
            self,
            Flavor::PlanarPartition | Flavor::TemperleyLieb | Flavor::Motzkin | Flavor::PlanarRook
        )
    }

    /// Largest block allowed, `None` for unrestricted.
    pub fn max_block(self) -> Option<usize> {
        match self {
            Flavor::Partition | Flavor::PlanarPartition => None,
            _ => Some(2),
        }
    }

    fn min_block(self) -> usize {
        match self {
            Flavor::Brauer | Flavor::TemperleyLieb | Flavor::Symmetric => 2,
            _ => 1,
        }
    }

    /// Size-2 blocks must join one bottom and one top point.
    fn pairs_are_through(self) -> bool {
        matches!(self, Flavor::Rook | Flavor::PlanarRook | Flavor::Symmetric)
    }

    /// The non-planar flavor with the same block rules.
    pub fn symmetric_counterpart(self) -> Flavor {
        match self {
            Flavor::PlanarPartition => Flavor::Partition,
            Flavor::TemperleyLieb => Flavor::Brauer,
            Flavor::Motzkin => Flavor::RookBrauer,
            Flavor::PlanarRook => Flavor::Rook,
            f => f,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Flavor::Partition => "partition",
            Flavor::PlanarPartition => "planar-partition",
            Flavor::Brauer => "brauer",
            Flavor::TemperleyLieb => "temperley-lieb",
            Flavor::RookBrauer => "rook-brauer",
            Flavor::Motzkin => "motzkin",
            Flavor::Rook => "rook",
            Flavor::PlanarRook => "planar-rook",
            Flavor::Symmetric => "symmetric",
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            Flavor::Partition => "Pa",
            Flavor::PlanarPartition => "pPa",
            Flavor::Brauer => "Br",
            Flavor::TemperleyLieb => "TL",
            Flavor::RookBrauer => "RoBr",
            Flavor::Motzkin => "Mo",
            Flavor::Rook => "Ro",
            Flavor::PlanarRook => "pRo",
            Flavor::Symmetric => "S",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace(['_', ' '], "-");
        let flavor = match key.as_str() {
            "partition" | "pa" => Flavor::Partition,
            "planar-partition" | "ppa" => Flavor::PlanarPartition,
            "brauer" | "br" => Flavor::Brauer,
            "temperley-lieb" | "tl" => Flavor::TemperleyLieb,
            "rook-brauer" | "robr" => Flavor::RookBrauer,
            "motzkin" | "mo" => Flavor::Motzkin,
            "rook" | "ro" => Flavor::Rook,
            "planar-rook" | "pro" => Flavor::PlanarRook,
            "symmetric" | "sym" | "s" => Flavor::Symmetric,
            _ => return Err(Error::Parse(format!("unknown flavor `{s}`"))),
        };
        Ok(flavor)
    }
}

/// A boundary point, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Bottom(usize),
    Top(usize),
}

impl Label {
    fn index(self, n: usize) -> Option<usize> {
        match self {
            Label::Bottom(i) if (1..=n).contains(&i) => Some(i - 1),
            Label::Top(i) if (1..=n).contains(&i) => Some(n + i - 1),
            _ => None,
        }
    }

    fn from_index(idx: usize, n: usize) -> Label {
        if idx < n {
            Label::Bottom(idx + 1)
        } else {
            Label::Top(idx - n + 1)
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Bottom(i) => write!(f, "B{i}"),
            Label::Top(i) => write!(f, "T{i}"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad label `{s}`"));
        let (side, num) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let i: usize = num.parse().map_err(|_| bad())?;
        match side {
            "B" | "b" => Ok(Label::Bottom(i)),
            "T" | "t" => Ok(Label::Top(i)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A flavored diagram in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    n: usize,
    flavor: Flavor,
    rgs: Vec<u8>,
}

/// Relabels an arbitrary block assignment into a restricted-growth string.
fn canonical_rgs(assign: &[usize]) -> Vec<u8> {
    let bound = assign.iter().max().map_or(0, |m| m + 1);
    let mut map = vec![u8::MAX; bound];
    let mut next = 0u8;
    assign
        .iter()
        .map(|a| {
            if map[*a] == u8::MAX {
                map[*a] = next;
                next += 1;
            }
            map[*a]
        })
        .collect()
}

impl Diagram {
    /// Builds a diagram from blocks, checking that they partition the `2n`
    /// labels but not that the flavor's constraints hold.
    pub fn from_blocks_unchecked(n: usize, flavor: Flavor, blocks: &[Vec<Label>]) -> Result<Self> {
        if 2 * n > u8::MAX as usize {
            return Err(Error::InvalidDiagram(format!("n = {n} is too large")));
        }
        let mut assign = vec![usize::MAX; 2 * n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidDiagram("empty block".into()));
            }
            for label in block {
                let idx = label
                    .index(n)
                    .ok_or_else(|| Error::InvalidDiagram(format!("label {label} out of range")))?;
                if assign[idx] != usize::MAX {
                    return Err(Error::InvalidDiagram(format!("label {label} repeated")));
                }
                assign[idx] = b;
            }
        }
        if let Some(idx) = assign.iter().position(|a| *a == usize::MAX) {
            return Err(Error::InvalidDiagram(format!(
                "label {} missing",
                Label::from_index(idx, n)
            )));
        }
        Ok(Diagram { n, flavor, rgs: canonical_rgs(&assign) })
    }

    /// Builds a diagram and checks the flavor's constraints.
    pub fn from_blocks(n: usize, flavor: Flavor, blocks: &[Vec<Label>]) -> Result<Self> {
        let d = Self::from_blocks_unchecked(n, flavor, blocks)?;
        if d.validate_flavor() {
            Ok(d)
        } else {
            Err(Error::InvalidDiagram(format!("{d:?} violates the {flavor} constraints")))
        }
    }

    pub(crate) fn from_assignment(n: usize, flavor: Flavor, assign: &[usize]) -> Self {
        debug_assert_eq!(assign.len(), 2 * n);
        Diagram { n, flavor, rgs: canonical_rgs(assign) }
    }

    pub fn identity(flavor: Flavor, n: usize) -> Self {
        let assign: Vec<usize> = (0..n).chain(0..n).collect();
        Self::from_assignment(n, flavor, &assign)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Block id of each point, `B1..Bn` then `T1..Tn`.
    pub fn assignment(&self) -> &[u8] {
        &self.rgs
    }

    pub fn block_count(&self) -> usize {
        self.rgs.iter().map(|b| *b as usize + 1).max().unwrap_or(0)
    }

    pub fn blocks(&self) -> Vec<Vec<Label>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (idx, b) in self.rgs.iter().enumerate() {
            blocks[*b as usize].push(Label::from_index(idx, self.n));
        }
        blocks
    }

    /// Per block: (bottom points, top points).
    fn block_profile(&self) -> Vec<(usize, usize)> {
        let mut prof = vec![(0, 0); self.block_count()];
        for (idx, b) in self.rgs.iter().enumerate() {
            if idx < self.n {
                prof[*b as usize].0 += 1;
            } else {
                prof[*b as usize].1 += 1;
            }
        }
        prof
    }

    /// Number of blocks meeting both rows.
    pub fn through_strands(&self) -> usize {
        self.block_profile().iter().filter(|(b, t)| *b > 0 && *t > 0).count()
    }

    /// Noncrossing with respect to the cyclic order `B1..Bn, Tn..T1`.
    pub fn is_planar(&self) -> bool {
        let n = self.n;
        // position on the boundary circle
        let pos = |idx: usize| if idx < n { idx } else { 3 * n - 1 - idx };
        let mut around = vec![0u8; 2 * n];
        for (idx, b) in self.rgs.iter().enumerate() {
            around[pos(idx)] = *b;
        }
        let blocks = self.block_count();
        for a in 0..blocks as u8 {
            for b in (a + 1)..blocks as u8 {
                let seq: Vec<u8> = around.iter().copied().filter(|x| *x == a || *x == b).collect();
                let mut runs = 1 + seq.windows(2).filter(|w| w[0] != w[1]).count();
                if runs > 1 && seq.first() == seq.last() {
                    runs -= 1;
                }
                if runs >= 4 {
                    return false;
                }
            }
        }
        true
    }

    /// Checks block sizes, through-strand and planarity rules of the flavor.
    pub fn validate_flavor(&self) -> bool {
        let f = self.flavor;
        for (b, t) in self.block_profile() {
            let size = b + t;
            if size < f.min_block() || f.max_block().is_some_and(|m| size > m) {
                return false;
            }
            if f.pairs_are_through() && size == 2 && (b != 1 || t != 1) {
                return false;
            }
            if f == Flavor::Symmetric && (b != 1 || t != 1) {
                return false;
            }
        }
        !f.is_planar() || self.is_planar()
    }

    /// Top half: block pattern of the top row (restricted-growth ids) and
    /// whether each of those blocks reaches the bottom row.
    pub fn top_half(&self) -> Vec<(u8, bool)> {
        let n = self.n;
        let mut through = vec![false; self.block_count()];
        for b in &self.rgs[..n] {
            through[*b as usize] = true;
        }
        let mut relabel = vec![u8::MAX; self.block_count()];
        let mut next = 0u8;
        self.rgs[n..]
            .iter()
            .map(|b| {
                if relabel[*b as usize] == u8::MAX {
                    relabel[*b as usize] = next;
                    next += 1;
                }
                (relabel[*b as usize], through[*b as usize])
            })
            .collect()
    }

    /// Upside-down flip `Bi <-> Ti`.
    pub fn involute(&self) -> Diagram {
        let n = self.n;
        let assign: Vec<usize> = (0..2 * n)
            .map(|idx| self.rgs[if idx < n { idx + n } else { idx - n }] as usize)
            .collect();
        Self::from_assignment(n, self.flavor, &assign)
    }

    /// Juxtaposition, `other` placed to the right.
    pub fn tensor(&self, other: &Diagram) -> Result<Diagram> {
        if self.flavor != other.flavor {
            return Err(Error::MismatchedFlavor(self.flavor.to_string(), other.flavor.to_string()));
        }
        let (n1, n2) = (self.n, other.n);
        let n = n1 + n2;
        let off = self.block_count();
        let mut assign = vec![0usize; 2 * n];
        for i in 0..n1 {
            assign[i] = self.rgs[i] as usize;
            assign[n + i] = self.rgs[n1 + i] as usize;
        }
        for i in 0..n2 {
            assign[n1 + i] = off + other.rgs[i] as usize;
            assign[n + n1 + i] = off + other.rgs[n2 + i] as usize;
        }
        Ok(Self::from_assignment(n, self.flavor, &assign))
    }

    /// Stacks `self` on top of `bottom`. See [`compose`].
    pub fn stack_on(&self, bottom: &Diagram) -> Result<ProductOutcome> {
        compose(self, bottom)
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `Mo(2)[{B1,B2} {T1,T2}]`.
impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})[", self.flavor.short(), self.n)?;
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str("{")?;
            for (j, l) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{l}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("]")
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    n: usize,
    flavor: Flavor,
    blocks: Vec<Vec<Label>>,
}

impl Serialize for Diagram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiagramRepr { n: self.n, flavor: self.flavor, blocks: self.blocks() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DiagramRepr::deserialize(d)?;
        Diagram::from_blocks(r.n, r.flavor, &r.blocks).map_err(serde::de::Error::custom)
    }
}

/// Multiset of genera of the closed components produced by one product.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GenusMultiset {
    counts: BTreeMap<u32, u32>,
}

impl GenusMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, genus: u32) {
        *self.counts.entry(genus).or_insert(0) += 1;
    }

    pub fn count(&self, genus: u32) -> u32 {
        self.counts.get(&genus).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u32 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn genera(&self) -> impl Iterator<Item = u32> + '_ {
        self.counts.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.counts.iter().map(|(g, c)| (*g, *c))
    }

    /// Multiset sum.
    pub fn merged(&self, other: &GenusMultiset) -> GenusMultiset {
        let mut out = self.clone();
        for (g, c) in other.iter() {
            *out.counts.entry(g).or_insert(0) += c;
        }
        out
    }
}

impl FromIterator<(u32, u32)> for GenusMultiset {
    fn from_iter<I: IntoIterator<Item = (u32, u32)>>(iter: I) -> Self {
        let counts = iter.into_iter().filter(|(_, c)| *c > 0).collect();
        GenusMultiset { counts }
    }
}

/// Result diagram of a product together with its closed components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductOutcome {
    pub result: Diagram,
    pub floats: GenusMultiset,
}

/// Reusable buffers for [`compose_raw`].
#[derive(Default)]
pub(crate) struct ComposeScratch {
    parent: Vec<usize>,
    first: Vec<usize>,
    boundary: Vec<bool>,
    blocks_in: Vec<i64>,
    middle_in: Vec<i64>,
    relabel: Vec<u8>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Stacking on restricted-growth strings. Writes the result's string to
/// `out` and the genera of the closed components, sorted, to `genera`.
pub(crate) fn compose_raw(
    n: usize,
    top: &[u8],
    bottom: &[u8],
    s: &mut ComposeScratch,
    out: &mut Vec<u8>,
    genera: &mut Vec<u32>,
) {
    // nodes: 0..n outer bottom, n..2n middle, 2n..3n outer top
    let nodes = 3 * n;
    s.parent.clear();
    s.parent.extend(0..nodes);
    // blocks of `bottom` sit on nodes 0..2n, blocks of `top` on n..3n
    for (diagram, offset) in [(bottom, 0), (top, n)] {
        s.first.clear();
        s.first.resize(2 * n, usize::MAX);
        for (idx, b) in diagram.iter().enumerate() {
            let node = idx + offset;
            let slot = &mut s.first[*b as usize];
            if *slot == usize::MAX {
                *slot = node;
            } else {
                union(&mut s.parent, *slot, node);
            }
        }
    }
    s.boundary.clear();
    s.boundary.resize(nodes, false);
    s.blocks_in.clear();
    s.blocks_in.resize(nodes, 0);
    s.middle_in.clear();
    s.middle_in.resize(nodes, 0);
    for node in (0..n).chain(2 * n..nodes) {
        let r = find(&mut s.parent, node);
        s.boundary[r] = true;
    }
    for (diagram, offset) in [(bottom, 0), (top, n)] {
        s.first.clear();
        s.first.resize(2 * n, usize::MAX);
        for (idx, b) in diagram.iter().enumerate() {
            if s.first[*b as usize] == usize::MAX {
                s.first[*b as usize] = idx;
                let r = find(&mut s.parent, idx + offset);
                s.blocks_in[r] += 1;
            }
        }
    }
    for node in n..2 * n {
        let r = find(&mut s.parent, node);
        s.middle_in[r] += 1;
    }
    genera.clear();
    for r in n..2 * n {
        if s.parent[r] == r && !s.boundary[r] {
            let genus = s.middle_in[r] - s.blocks_in[r] + 1;
            debug_assert!(genus >= 0);
            genera.push(genus as u32);
        }
    }
    genera.sort_unstable();

    s.relabel.clear();
    s.relabel.resize(nodes, u8::MAX);
    out.clear();
    let mut next = 0u8;
    for node in (0..n).chain(2 * n..nodes) {
        let r = find(&mut s.parent, node);
        if s.relabel[r] == u8::MAX {
            s.relabel[r] = next;
            next += 1;
        }
        out.push(s.relabel[r]);
    }
}

/// Stacks `top` above `bottom`: the top row of `bottom` is glued to the
/// bottom row of `top`. Every closed component in the middle is recorded by
/// its genus `E - B + 1`, where `E` counts its middle points and `B` the
/// blocks (of either diagram) it is made of.
pub fn compose(top: &Diagram, bottom: &Diagram) -> Result<ProductOutcome> {
    if top.n != bottom.n {
        return Err(Error::MismatchedStrands(top.n, bottom.n));
    }
    if top.flavor != bottom.flavor {
        return Err(Error::MismatchedFlavor(top.flavor.to_string(), bottom.flavor.to_string()));
    }
    let mut rgs = Vec::with_capacity(2 * top.n);
    let mut genera = Vec::new();
    compose_raw(top.n, &top.rgs, &bottom.rgs, &mut ComposeScratch::default(), &mut rgs, &mut genera);
    let mut floats = GenusMultiset::new();
    for g in genera {
        floats.insert(g);
    }
    let result = Diagram { n: top.n, flavor: top.flavor, rgs };
    debug_assert!(result.validate_flavor(), "{result:?} escaped its flavor");
    Ok(ProductOutcome { result, floats })
}

/// Eventually periodic `{0,1}`-valued evaluation of genera.
///
/// The value at genus `g >= prefix.len()` repeats the last `period` entries
/// of the prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EvaluationMap {
    prefix: Vec<bool>,
    period: usize,
}

impl EvaluationMap {
    pub fn new(prefix: Vec<bool>, period: usize) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidEvaluation("period must be positive".into()));
        }
        if prefix.len() < period {
            return Err(Error::InvalidEvaluation(format!(
                "prefix of length {} shorter than period {period}",
                prefix.len()
            )));
        }
        Ok(EvaluationMap { prefix, period })
    }

    pub fn classical() -> Self {
        EvaluationMap { prefix: vec![true], period: 1 }
    }

    pub fn zero() -> Self {
        EvaluationMap { prefix: vec![false], period: 1 }
    }

    /// All ones except `a_genus = value`.
    pub fn with_value(genus: usize, value: bool) -> Self {
        let mut prefix = vec![true; genus + 2];
        prefix[genus] = value;
        EvaluationMap { prefix, period: 1 }
    }

    pub fn value(&self, genus: u32) -> bool {
        let g = genus as usize;
        let len = self.prefix.len();
        if g < len {
            self.prefix[g]
        } else {
            self.prefix[len - self.period + (g - len) % self.period]
        }
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn is_classical(&self) -> bool {
        self.prefix.iter().all(|v| *v)
    }

    /// True when some `a_g` with `lo <= g <= hi` is one.
    pub fn any_one_in(&self, lo: u32, hi: u32) -> bool {
        (lo..=hi).any(|g| self.value(g))
    }

    /// Parses `classical`, `zero`, `prefix=1,0,1;period=2` or `aI=V`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "classical" | "one" | "1" => return Ok(Self::classical()),
            "zero" | "0" => return Ok(Self::zero()),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix('a') {
            if let Some((g, v)) = rest.split_once('=') {
                let g: usize = g.parse().map_err(|_| Error::Parse(format!("bad genus in `{s}`")))?;
                let v = parse_bit(v)?;
                return Ok(Self::with_value(g, v));
            }
        }
        let mut prefix = None;
        let mut period = 1;
        for part in s.split(';') {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad parameter spec `{s}`")))?;
            match key.trim() {
                "prefix" => {
                    prefix = Some(val.split(',').map(parse_bit).collect::<Result<Vec<_>>>()?);
                }
                "period" => {
                    period = val.trim().parse().map_err(|_| Error::Parse(format!("bad period `{val}`")))?;
                }
                other => return Err(Error::Parse(format!("unknown key `{other}`"))),
            }
        }
        let prefix = prefix.ok_or_else(|| Error::Parse(format!("missing prefix in `{s}`")))?;
        Self::new(prefix, period)
    }
}

impl FromStr for EvaluationMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

fn parse_bit(v: &str) -> Result<bool> {
    match v.trim() {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(Error::Parse(format!("expected 0 or 1, got `{other}`"))),
    }
}

impl fmt::Display for EvaluationMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: Vec<&str> = self.prefix.iter().map(|b| if *b { "1" } else { "0" }).collect();
        write!(f, "prefix={};period={}", bits.join(","), self.period)
    }
}

/// Applies the evaluation: `None` stands for the adjoined zero.
pub fn evaluate(outcome: &ProductOutcome, a: &EvaluationMap) -> Option<Diagram> {
    if outcome.floats.genera().all(|g| a.value(g)) {
        Some(outcome.result.clone())
    } else {
        None
    }
}

/// Guard against enumerations that would not fit in memory.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub partition_max_n: usize,
    pub other_max_n: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { partition_max_n: 6, other_max_n: 8 }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { partition_max_n: usize::MAX, other_max_n: usize::MAX }
    }

    fn max_for(&self, flavor: Flavor) -> usize {
        match flavor {
            Flavor::Partition | Flavor::PlanarPartition => self.partition_max_n,
            _ => self.other_max_n,
        }
    }
}

/// All diagrams of a flavor, in canonical (restricted-growth) order.
pub fn enumerate(flavor: Flavor, n: usize) -> Result<Vec<Diagram>> {
    enumerate_within(flavor, n, &Budget::default())
}

pub fn enumerate_within(flavor: Flavor, n: usize, budget: &Budget) -> Result<Vec<Diagram>> {
    let max = budget.max_for(flavor);
    if n > max || 2 * n > u8::MAX as usize {
        return Err(Error::BudgetExceeded { flavor: flavor.to_string(), n, max });
    }
    let mut out = Vec::new();
    let mut rgs = vec![0u8; 2 * n];
    let mut sizes: Vec<usize> = Vec::new();
    grow(flavor, n, 0, &mut rgs, &mut sizes, &mut out);
    Ok(out)
}

fn grow(
    flavor: Flavor,
    n: usize,
    idx: usize,
    rgs: &mut Vec<u8>,
    sizes: &mut Vec<usize>,
    out: &mut Vec<Diagram>,
) {
    if idx == 2 * n {
        let d = Diagram { n, flavor, rgs: rgs.clone() };
        if d.validate_flavor() {
            out.push(d);
        }
        return;
    }
    let max_block = flavor.max_block().unwrap_or(usize::MAX);
    // bottom points come first, so joining an existing block from the
    // bottom row would put two bottom points together
    let may_join = !(flavor.pairs_are_through() && idx < n);
    if may_join {
        for b in 0..sizes.len() {
            if sizes[b] < max_block {
                sizes[b] += 1;
                rgs[idx] = b as u8;
                grow(flavor, n, idx + 1, rgs, sizes, out);
                sizes[b] -= 1;
            }
        }
    }
    rgs[idx] = sizes.len() as u8;
    sizes.push(1);
    grow(flavor, n, idx + 1, rgs, sizes, out);
    sizes.pop();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize, flavor: Flavor, blocks: &[&[&str]]) -> Diagram {
        let blocks: Vec<Vec<Label>> =
            blocks.iter().map(|b| b.iter().map(|l| l.parse().unwrap()).collect()).collect();
        Diagram::from_blocks_unchecked(n, flavor, &blocks).unwrap()
    }

    #[test]
    fn flavor_validation_examples() {
        assert!(d(1, Flavor::TemperleyLieb, &[&["B1", "T1"]]).validate_flavor());
        assert!(!d(2, Flavor::Rook, &[&["B1", "B2"], &["T1", "T2"]]).validate_flavor());
        assert!(!d(2, Flavor::TemperleyLieb, &[&["B1", "T2"], &["B2", "T1"]]).validate_flavor());
        assert!(d(2, Flavor::Brauer, &[&["B1", "T2"], &["B2", "T1"]]).validate_flavor());
        assert!(!d(2, Flavor::Symmetric, &[&["B1", "B2"], &["T1", "T2"]]).validate_flavor());
        assert!(!d(1, Flavor::Brauer, &[&["B1"], &["T1"]]).validate_flavor());
    }

    #[test]
    fn planarity_examples() {
        assert!(d(2, Flavor::Partition, &[&["B1", "T1"], &["B2", "T2"]]).is_planar());
        assert!(!d(2, Flavor::Partition, &[&["B1", "T2"], &["B2", "T1"]]).is_planar());
        assert!(d(2, Flavor::Partition, &[&["B1", "B2"], &["T1", "T2"]]).is_planar());
        // nested cups are fine, B1-B3 with B2-T1 crosses
        assert!(d(2, Flavor::Partition, &[&["B1", "T1"], &["B2"], &["T2"]]).is_planar());
        assert!(!d(3, Flavor::Partition, &[&["B1", "B3"], &["B2", "T1"], &["T2"], &["T3"]]).is_planar());
    }

    #[test]
    fn bad_blocks_rejected() {
        let l = |s: &str| s.parse::<Label>().unwrap();
        assert!(Diagram::from_blocks_unchecked(1, Flavor::Partition, &[vec![l("B1")]]).is_err());
        assert!(Diagram::from_blocks_unchecked(1, Flavor::Partition, &[vec![l("B1"), l("T1"), l("B1")]]).is_err());
        assert!(Diagram::from_blocks_unchecked(1, Flavor::Partition, &[vec![l("B1"), l("T2")]]).is_err());
        assert!(Diagram::from_blocks(2, Flavor::TemperleyLieb, &[vec![l("B1"), l("T2")], vec![l("B2"), l("T1")]]).is_err());
    }

    #[test]
    fn compose_examples() {
        let e = d(2, Flavor::TemperleyLieb, &[&["B1", "B2"], &["T1", "T2"]]);
        let o = compose(&e, &e).unwrap();
        assert_eq!(o.result, e);
        assert_eq!(o.floats, [(1, 1)].into_iter().collect());

        let s = d(1, Flavor::Rook, &[&["B1"], &["T1"]]);
        let o = compose(&s, &s).unwrap();
        assert_eq!(o.result, s);
        assert_eq!(o.floats, [(0, 1)].into_iter().collect());

        let f = d(4, Flavor::Partition, &[&["B1", "B2", "B3", "B4"], &["T1", "T2", "T3", "T4"]]);
        let o = compose(&f, &f).unwrap();
        assert_eq!(o.result, f);
        assert_eq!(o.floats, [(3, 1)].into_iter().collect());
    }

    #[test]
    fn compose_errors() {
        let a = Diagram::identity(Flavor::TemperleyLieb, 2);
        let b = Diagram::identity(Flavor::TemperleyLieb, 3);
        assert_eq!(compose(&a, &b), Err(Error::MismatchedStrands(2, 3)));
        let c = Diagram::identity(Flavor::Motzkin, 2);
        assert!(matches!(compose(&a, &c), Err(Error::MismatchedFlavor(..))));
    }

    #[test]
    fn evaluate_examples() {
        let e = d(2, Flavor::TemperleyLieb, &[&["B1", "B2"], &["T1", "T2"]]);
        let o = compose(&e, &e).unwrap();
        assert_eq!(evaluate(&o, &EvaluationMap::classical()), Some(e.clone()));
        assert_eq!(evaluate(&o, &EvaluationMap::zero()), None);
        let id = Diagram::identity(Flavor::TemperleyLieb, 2);
        let o = compose(&id, &e).unwrap();
        assert!(o.floats.is_empty());
        assert_eq!(evaluate(&o, &EvaluationMap::zero()), Some(e));
    }

    #[test]
    fn evaluation_map_periodicity() {
        let a = EvaluationMap::new(vec![false, true, true, false], 2).unwrap();
        let vals: Vec<bool> = (0..8).map(|g| a.value(g)).collect();
        assert_eq!(vals, [false, true, true, false, true, false, true, false]);
        assert!(EvaluationMap::new(vec![true], 0).is_err());
        assert!(EvaluationMap::new(vec![true], 2).is_err());
        assert_eq!(EvaluationMap::parse("prefix=0,1,1,0;period=2").unwrap(), a);
        let a1 = EvaluationMap::parse("a1=0").unwrap();
        assert!(a1.value(0) && !a1.value(1) && a1.value(2) && a1.value(7));
    }

    #[test]
    fn tensor_and_involute_examples() {
        let id1 = Diagram::identity(Flavor::TemperleyLieb, 1);
        assert_eq!(id1.tensor(&id1).unwrap(), Diagram::identity(Flavor::TemperleyLieb, 2));
        let e = d(2, Flavor::TemperleyLieb, &[&["B1", "B2"], &["T1", "T2"]]);
        let expected = d(3, Flavor::TemperleyLieb, &[&["B1", "B2"], &["T1", "T2"], &["B3", "T3"]]);
        let t = e.tensor(&id1).unwrap();
        assert_eq!(t, expected);
        assert_eq!(t.involute(), t);
        assert_eq!(Diagram::identity(Flavor::Partition, 3).involute(), Diagram::identity(Flavor::Partition, 3));
        assert!(e.tensor(&Diagram::identity(Flavor::Motzkin, 1)).is_err());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate(Flavor::TemperleyLieb, 4).unwrap().len(), 14);
        assert_eq!(enumerate(Flavor::Partition, 2).unwrap().len(), 15);
        assert_eq!(enumerate(Flavor::Symmetric, 3).unwrap().len(), 6);
        assert_eq!(enumerate(Flavor::TemperleyLieb, 0).unwrap().len(), 1);
        assert!(matches!(enumerate(Flavor::Partition, 7), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(enumerate(Flavor::Rook, 9), Err(Error::BudgetExceeded { .. })));
        let all = enumerate(Flavor::Motzkin, 3).unwrap();
        assert!(all.windows(2).all(|w| w[0] < w[1]), "canonical order");
    }

    #[test]
    fn through_strand_examples() {
        assert_eq!(Diagram::identity(Flavor::Brauer, 5).through_strands(), 5);
        let e = d(2, Flavor::TemperleyLieb, &[&["B1", "B2"], &["T1", "T2"]]);
        assert_eq!(e.through_strands(), 0);
    }

    #[test]
    fn json_shape() {
        let e = d(2, Flavor::TemperleyLieb, &[&["B1", "B2"], &["T1", "T2"]]);
        let js = serde_json::to_string(&e).unwrap();
        assert_eq!(js, r#"{"n":2,"flavor":"temperley-lieb","blocks":[["B1","B2"],["T1","T2"]]}"#);
        let back: Diagram = serde_json::from_str(&js).unwrap();
        assert_eq!(back, e);
        let bad = r#"{"n":2,"flavor":"temperley-lieb","blocks":[["B1","T2"],["B2","T1"]]}"#;
        assert!(serde_json::from_str::<Diagram>(bad).is_err());
        let floats: GenusMultiset = [(1, 2), (3, 1)].into_iter().collect();
        assert_eq!(serde_json::to_string(&floats).unwrap(), r#"{"1":2,"3":1}"#);
    }
}

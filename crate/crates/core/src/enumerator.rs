//! Literal construction of the iterated partition sets.
//!
//! An order-`m` partition of `{1, ..., n}` is built by partitioning the atoms,
//! then partitioning the resulting blocks, and so on `m` times. Each step is
//! driven by a restricted growth string (RGS), so a whole element is a stack
//! of `m` strings: the first over the `n` atoms, each later one over the
//! blocks produced by the one before. Stepping that stack like an odometer
//! visits every element exactly once with `O(n m)` state.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::Nat;
use crate::triangles::{bell, BellMethod};

/// Default cap on the number of elements an enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Restricted growth string `a` with `a[0] = 0` and
/// `a[i] <= 1 + max(a[..i])`. Label `j` names the block first used at the
/// position where `j` first appears.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedGrowth {
    labels: Vec<usize>,
    prefix_max: Vec<usize>,
}

impl RestrictedGrowth {
    /// All items in one block.
    pub fn first(len: usize) -> RestrictedGrowth {
        RestrictedGrowth {
            labels: vec![0; len],
            prefix_max: vec![0; len],
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.prefix_max.last().map_or(0, |m| m + 1)
    }

    /// Steps to the lexicographic successor. Returns `false` (leaving the
    /// string unchanged) when this is the all-singletons string.
    pub fn advance(&mut self) -> bool {
        for i in (1..self.labels.len()).rev() {
            if self.labels[i] <= self.prefix_max[i - 1] {
                self.labels[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.labels[i]);
                let pm = self.prefix_max[i];
                for j in i + 1..self.labels.len() {
                    self.labels[j] = 0;
                    self.prefix_max[j] = pm;
                }
                return true;
            }
        }
        false
    }

    /// Groups `items` into blocks by label, blocks in label order.
    pub fn apply<T>(&self, items: impl IntoIterator<Item = T>) -> Vec<Vec<T>> {
        let mut blocks: Vec<Vec<T>> = (0..self.block_count()).map(|_| Vec::new()).collect();
        for (item, &label) in items.into_iter().zip(&self.labels) {
            blocks[label].push(item);
        }
        blocks
    }
}

/// Every set partition of `items`, each as a list of blocks.
pub fn partitions_of<T: Clone>(items: &[T]) -> Result<PartitionsOf<'_, T>> {
    if items.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(PartitionsOf {
        items,
        rgs: Some(RestrictedGrowth::first(items.len())),
    })
}

#[derive(Debug)]
pub struct PartitionsOf<'a, T> {
    items: &'a [T],
    rgs: Option<RestrictedGrowth>,
}

impl<T: Clone> Iterator for PartitionsOf<'_, T> {
    type Item = Vec<Vec<T>>;

    fn next(&mut self) -> Option<Vec<Vec<T>>> {
        let rgs = self.rgs.as_mut()?;
        let out = rgs.apply(self.items.iter().cloned());
        if !rgs.advance() {
            self.rgs = None;
        }
        Some(out)
    }
}

/// A node of a nested partition: an atom, or a box of equal-depth nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Atom(u32),
    Box(Vec<Node>),
}

impl Node {
    fn depth(&self) -> Result<usize> {
        match self {
            Node::Atom(_) => Ok(0),
            Node::Box(children) => {
                let mut depths = children.iter().map(Node::depth);
                let first = depths
                    .next()
                    .ok_or_else(|| Error::Malformed("empty box".into()))??;
                for d in depths {
                    if d? != first {
                        return Err(Error::Malformed("boxes of unequal depth".into()));
                    }
                }
                Ok(first + 1)
            }
        }
    }

    fn collect_atoms(&self, out: &mut Vec<u32>) {
        match self {
            Node::Atom(a) => out.push(*a),
            Node::Box(children) => children.iter().for_each(|c| c.collect_atoms(out)),
        }
    }

    /// Canonical text and the smallest atom below this node.
    fn render(&self) -> (u32, String) {
        match self {
            Node::Atom(a) => (*a, a.to_string()),
            Node::Box(children) => {
                let rendered = render_sorted(children);
                let min = rendered.first().map_or(u32::MAX, |(m, _)| *m);
                let body: Vec<&str> = rendered.iter().map(|(_, s)| s.as_str()).collect();
                (min, format!("{{{}}}", body.join(",")))
            }
        }
    }
}

fn render_sorted(children: &[Node]) -> Vec<(u32, String)> {
    let mut rendered: Vec<(u32, String)> = children.iter().map(Node::render).collect();
    rendered.sort();
    rendered
}

/// An element of the order-`m` partition set of `{1, ..., n}`: a set of
/// outer boxes, each of depth `m`, whose atoms are exactly `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedPartition {
    order: usize,
    boxes: Vec<Node>,
}

impl NestedPartition {
    /// Checks uniform depth, nonempty boxes, and that the atoms are exactly
    /// `1..=n` with no repeats.
    pub fn new(order: usize, boxes: Vec<Node>) -> Result<NestedPartition> {
        if order == 0 {
            return Err(Error::Malformed("order must be at least 1".into()));
        }
        let root = Node::Box(boxes);
        let depth = root.depth()?;
        if depth != order + 1 {
            return Err(Error::Malformed(format!(
                "outer boxes have depth {}, expected {order}",
                depth - 1
            )));
        }
        let mut atoms = Vec::new();
        root.collect_atoms(&mut atoms);
        atoms.sort_unstable();
        for (i, &a) in atoms.iter().enumerate() {
            if a as usize != i + 1 {
                return Err(Error::Malformed(format!(
                    "atoms must be exactly 1..={} without repeats",
                    atoms.len()
                )));
            }
        }
        let Node::Box(boxes) = root else { unreachable!() };
        Ok(NestedPartition { order, boxes })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of atoms.
    pub fn n(&self) -> usize {
        let mut atoms = Vec::new();
        self.boxes.iter().for_each(|b| b.collect_atoms(&mut atoms));
        atoms.len()
    }

    /// Number of outer boxes; the `k` of a `k`-set.
    pub fn outer_cardinality(&self) -> usize {
        self.boxes.len()
    }

    pub fn boxes(&self) -> &[Node] {
        &self.boxes
    }

    /// The order `m - 1` element this one was built from: the outer level
    /// removed. `None` at order 1.
    pub fn parent(&self) -> Option<NestedPartition> {
        if self.order == 1 {
            return None;
        }
        let inner = self
            .boxes
            .iter()
            .flat_map(|b| match b {
                Node::Box(children) => children.clone(),
                Node::Atom(_) => unreachable!("validated depth"),
            })
            .collect();
        Some(NestedPartition {
            order: self.order - 1,
            boxes: inner,
        })
    }

    /// Canonical text: atoms in decimal, boxes as `{a,b,...}` with children
    /// ordered by smallest atom. Equal structures give equal strings.
    pub fn serialize(&self) -> String {
        let body: Vec<String> = render_sorted(&self.boxes).into_iter().map(|(_, s)| s).collect();
        format!("{{{}}}", body.join(","))
    }

    pub fn parse(text: &str) -> Result<NestedPartition> {
        let mut parser = Parser { bytes: text.as_bytes(), pos: 0 };
        let root = parser.node()?;
        if parser.pos != parser.bytes.len() {
            return Err(Error::Malformed(format!("trailing input at byte {}", parser.pos)));
        }
        let Node::Box(boxes) = root else {
            return Err(Error::Malformed("top level must be a box".into()));
        };
        let order = Node::Box(boxes.clone()).depth()?.saturating_sub(1);
        NestedPartition::new(order, boxes)
    }
}

impl fmt::Display for NestedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl FromStr for NestedPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<NestedPartition> {
        NestedPartition::parse(s)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn node(&mut self) -> Result<Node> {
        match self.bytes.get(self.pos) {
            Some(b'{') => {
                self.pos += 1;
                let mut children = vec![self.node()?];
                loop {
                    match self.bytes.get(self.pos) {
                        Some(b',') => {
                            self.pos += 1;
                            children.push(self.node()?);
                        }
                        Some(b'}') => {
                            self.pos += 1;
                            return Ok(Node::Box(children));
                        }
                        _ => return Err(self.unexpected()),
                    }
                }
            }
            Some(b'1'..=b'9') => {
                let start = self.pos;
                while matches!(self.bytes.get(self.pos), Some(b'0'..=b'9')) {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
                digits
                    .parse()
                    .map(Node::Atom)
                    .map_err(|_| Error::Malformed(format!("atom `{digits}` out of range")))
            }
            _ => Err(self.unexpected()),
        }
    }

    fn unexpected(&self) -> Error {
        match self.bytes.get(self.pos) {
            Some(&b) => Error::Malformed(format!("unexpected `{}` at byte {}", b as char, self.pos)),
            None => Error::Malformed("unexpected end of input".into()),
        }
    }
}

/// Odometer over RGS stacks: level 0 partitions the atoms, level `j`
/// partitions the blocks of level `j - 1`.
#[derive(Debug, Clone)]
pub struct Tower {
    levels: Vec<RestrictedGrowth>,
}

impl Tower {
    fn first(n: usize, m: usize) -> Tower {
        let mut levels = Vec::with_capacity(m);
        levels.push(RestrictedGrowth::first(n));
        for _ in 1..m {
            levels.push(RestrictedGrowth::first(1));
        }
        Tower { levels }
    }

    fn advance(&mut self) -> bool {
        for j in (0..self.levels.len()).rev() {
            if self.levels[j].advance() {
                for i in j + 1..self.levels.len() {
                    let len = self.levels[i - 1].block_count();
                    self.levels[i] = RestrictedGrowth::first(len);
                }
                return true;
            }
        }
        false
    }

    pub fn levels(&self) -> &[RestrictedGrowth] {
        &self.levels
    }

    /// Outer box count of the element.
    pub fn outer_cardinality(&self) -> usize {
        self.levels.last().expect("m >= 1").block_count()
    }

    /// Block count of the underlying first-order partition.
    pub fn ground_cardinality(&self) -> usize {
        self.levels[0].block_count()
    }

    pub fn to_partition(&self) -> NestedPartition {
        let n = self.levels[0].len() as u32;
        let mut items: Vec<Node> = (1..=n).map(Node::Atom).collect();
        for rgs in &self.levels {
            items = rgs.apply(items).into_iter().map(Node::Box).collect();
        }
        NestedPartition {
            order: self.levels.len(),
            boxes: items,
        }
    }
}

/// Streams RGS stacks without building trees.
#[derive(Debug, Clone)]
pub struct Towers {
    next: Option<Tower>,
}

impl Iterator for Towers {
    type Item = Tower;

    fn next(&mut self) -> Option<Tower> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if succ.advance() {
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// Predicted size of the order-`m` partition set of an `n`-set.
pub fn predicted_count(n: usize, m: usize) -> Nat {
    bell(n, m, BellMethod::TriangleRecurrence)
}

fn check_request(n: usize, m: usize, budget: u64) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "enumeration needs n >= 1 and m >= 1, got n = {n}, m = {m}"
        )));
    }
    if n > u32::MAX as usize {
        return Err(Error::InvalidArgument("n does not fit atom labels".into()));
    }
    let predicted = predicted_count(n, m);
    if predicted.to_u64().is_none_or(|p| p > budget) {
        return Err(Error::BudgetExceeded { predicted, budget });
    }
    Ok(())
}

/// RGS stacks for every order-`m` partition of an `n`-set.
pub fn towers(n: usize, m: usize, budget: u64) -> Result<Towers> {
    check_request(n, m, budget)?;
    Ok(Towers {
        next: Some(Tower::first(n, m)),
    })
}

/// Every element of the order-`m` partition set of `{1, ..., n}`, parents in
/// RGS order and the children of each parent likewise.
pub fn iterate_partitions(
    n: usize,
    m: usize,
    budget: u64,
) -> Result<impl Iterator<Item = NestedPartition>> {
    Ok(towers(n, m, budget)?.map(|t| t.to_partition()))
}

/// Element counts by outer cardinality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub n: usize,
    pub m: usize,
    /// `counts[k]` for `k = 0..=n`; `counts[0]` is always zero.
    pub counts: Vec<Nat>,
    pub total: Nat,
}

impl Census {
    pub fn count(&self, k: usize) -> Nat {
        self.counts.get(k).cloned().unwrap_or_default()
    }

    /// `sum_k k counts[k]`.
    pub fn weighted_total(&self) -> Nat {
        self.counts.iter().enumerate().map(|(k, c)| c * k as u64).sum()
    }

    fn from_u64(n: usize, m: usize, raw: Vec<u64>) -> Census {
        let counts: Vec<Nat> = raw.into_iter().map(Nat::from).collect();
        let total = counts.iter().sum();
        Census { n, m, counts, total }
    }
}

/// Counts elements by number of outer boxes.
pub fn census(n: usize, m: usize, budget: u64) -> Result<Census> {
    let mut raw = vec![0u64; n + 1];
    for t in towers(n, m, budget)? {
        raw[t.outer_cardinality()] += 1;
    }
    Ok(Census::from_u64(n, m, raw))
}

/// Counts elements by the block count of their first-order partition.
pub fn ground_census(n: usize, m: usize, budget: u64) -> Result<Census> {
    let mut raw = vec![0u64; n + 1];
    for t in towers(n, m, budget)? {
        raw[t.ground_cardinality()] += 1;
    }
    Ok(Census::from_u64(n, m, raw))
}

/// Number of elements visited and number of distinct canonical strings.
pub fn distinct_serializations(n: usize, m: usize, budget: u64) -> Result<(u64, usize)> {
    let mut seen = HashSet::new();
    let mut total = 0u64;
    for p in iterate_partitions(n, m, budget)? {
        total += 1;
        seen.insert(p.serialize());
    }
    Ok((total, seen.len()))
}

/// True when no two parents produce the same child, i.e. the union building
/// the order-`m` set is disjoint.
pub fn verify_distinct_children(n: usize, m: usize, budget: u64) -> Result<bool> {
    let (total, distinct) = distinct_serializations(n, m, budget)?;
    Ok(total == distinct as u64)
}

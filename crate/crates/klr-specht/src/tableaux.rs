//! Multipartitions, Young diagrams, tableaux, residues, degrees and
//! codegrees, dominance and Bruhat orders, and tableau enumeration.
//!
//! Nodes are compared by (component, row): larger pairs sit lower in the
//! column-of-diagrams picture. "Strictly below/above" always refers to this
//! order.

pub mod garnir;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::ground::{GroundData, Residue, RootElement};
use crate::perm::{min_coset_reps, Permutation};

/// Errors from tableau combinatorics.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableauxError {
    #[error("component {0} is not weakly decreasing")]
    InvalidPartition(usize),
    #[error("node {0} does not lie in the shape")]
    NotInShape(Node),
    #[error("component index {comp} exceeds level {level}")]
    BadComponent { comp: usize, level: usize },
    #[error("tableau is not standard")]
    NotStandard,
    #[error("sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("tableaux have different shapes")]
    ShapeMismatch,
    #[error("entries are not a bijection onto 1..=d")]
    NotBijective,
    #[error("{0} is not a Garnir node for this orientation")]
    NotGarnirNode(Node),
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

/// A node `(row, col, comp)`, all 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Node {
    pub row: usize,
    pub col: usize,
    pub comp: usize,
}

impl Node {
    pub fn new(row: usize, col: usize, comp: usize) -> Self {
        Self { row, col, comp }
    }

    /// Whether `self` lies strictly below `other` in the (component, row)
    /// order.
    pub fn strictly_below(&self, other: &Node) -> bool {
        (self.comp, self.row) > (other.comp, other.row)
    }

    /// Whether `self` lies strictly above `other`.
    pub fn strictly_above(&self, other: &Node) -> bool {
        (self.comp, self.row) < (other.comp, other.row)
    }

    /// The image under component-reversing transposition at level `l`:
    /// `(a, b, m)` goes to `(b, a, l - m + 1)`.
    pub fn conjugate(&self, level: usize) -> Node {
        Node::new(self.col, self.row, level - self.comp + 1)
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.row, self.col, self.comp)
    }
}

/// Parses node syntax `(row,col,comp)`.
pub fn parse_node(input: &str) -> Result<Node, TableauxError> {
    let err = || TableauxError::Parse {
        what: "node",
        input: input.to_string(),
    };
    let inner = input
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(err)?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 3 {
        return Err(err());
    }
    let mut nums = [0usize; 3];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = part.trim().parse::<usize>().map_err(|_| err())?;
        if *slot == 0 {
            return Err(err());
        }
    }
    Ok(Node::new(nums[0], nums[1], nums[2]))
}

/// An `l`-multipartition: an ordered tuple of partitions, one per component.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Multipartition {
    components: Vec<Vec<usize>>,
}

impl Multipartition {
    /// Validates and canonicalizes (strips trailing zero parts).
    pub fn new(components: Vec<Vec<usize>>) -> Result<Self, TableauxError> {
        let mut canon = Vec::with_capacity(components.len());
        for (m, comp) in components.into_iter().enumerate() {
            let mut comp = comp;
            while comp.last() == Some(&0) {
                comp.pop();
            }
            if comp.windows(2).any(|w| w[0] < w[1]) || comp.contains(&0) {
                return Err(TableauxError::InvalidPartition(m + 1));
            }
            canon.push(comp);
        }
        Ok(Self { components: canon })
    }

    /// The level (number of components).
    pub fn level(&self) -> usize {
        self.components.len()
    }

    /// The components as partitions.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Total number of nodes.
    pub fn size(&self) -> usize {
        self.components.iter().map(|c| c.iter().sum::<usize>()).sum()
    }

    /// Whether the diagram has no nodes.
    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    /// Row length at (row, comp), zero outside the diagram.
    pub fn row_len(&self, row: usize, comp: usize) -> usize {
        self.components
            .get(comp - 1)
            .and_then(|c| c.get(row - 1))
            .copied()
            .unwrap_or(0)
    }

    /// Column length at (col, comp): the number of rows reaching that column.
    pub fn col_len(&self, col: usize, comp: usize) -> usize {
        self.components[comp - 1]
            .iter()
            .take_while(|&&part| part >= col)
            .count()
    }

    /// Whether the node lies in the diagram.
    pub fn contains(&self, node: &Node) -> bool {
        node.comp >= 1
            && node.comp <= self.level()
            && node.row >= 1
            && node.col >= 1
            && node.col <= self.row_len(node.row, node.comp)
    }

    /// Nodes in row-reading order: component by component, top row to bottom
    /// row, left to right.
    pub fn row_reading_nodes(&self) -> Vec<Node> {
        let mut out = Vec::with_capacity(self.size());
        for (mi, comp) in self.components.iter().enumerate() {
            for (ri, &len) in comp.iter().enumerate() {
                for col in 1..=len {
                    out.push(Node::new(ri + 1, col, mi + 1));
                }
            }
        }
        out
    }

    /// Nodes in column-reading order: components from the last up to the
    /// first, columns left to right within a component, top to bottom within
    /// a column.
    pub fn column_reading_nodes(&self) -> Vec<Node> {
        let mut out = Vec::with_capacity(self.size());
        for mi in (0..self.components.len()).rev() {
            let comp = &self.components[mi];
            let width = comp.first().copied().unwrap_or(0);
            for col in 1..=width {
                for row in 1..=self.col_len(col, mi + 1) {
                    out.push(Node::new(row, col, mi + 1));
                }
            }
        }
        out
    }

    /// Row lengths of all nonempty rows in row-reading order.
    pub fn rows_composition(&self) -> Vec<usize> {
        self.components.iter().flatten().copied().collect()
    }

    /// Column lengths of all nonempty columns in column-reading order.
    pub fn columns_composition(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for mi in (0..self.components.len()).rev() {
            let width = self.components[mi].first().copied().unwrap_or(0);
            for col in 1..=width {
                out.push(self.col_len(col, mi + 1));
            }
        }
        out
    }

    /// Removable nodes, top to bottom.
    pub fn removable_nodes(&self) -> Vec<Node> {
        let mut out = Vec::new();
        for (mi, comp) in self.components.iter().enumerate() {
            for (ri, &len) in comp.iter().enumerate() {
                let next = comp.get(ri + 1).copied().unwrap_or(0);
                if len > next {
                    out.push(Node::new(ri + 1, len, mi + 1));
                }
            }
        }
        out
    }

    /// Addable nodes, top to bottom.
    pub fn addable_nodes(&self) -> Vec<Node> {
        let mut out = Vec::new();
        for (mi, comp) in self.components.iter().enumerate() {
            for row in 1..=comp.len() + 1 {
                let here = comp.get(row - 1).copied().unwrap_or(0);
                let prev = if row == 1 {
                    usize::MAX
                } else {
                    comp[row - 2]
                };
                if here < prev {
                    out.push(Node::new(row, here + 1, mi + 1));
                }
            }
        }
        out
    }

    /// The shape with one removable node removed.
    pub fn remove_node(&self, node: &Node) -> Result<Multipartition, TableauxError> {
        if !self.contains(node) || self.row_len(node.row, node.comp) != node.col {
            return Err(TableauxError::NotInShape(*node));
        }
        let mut components = self.components.clone();
        components[node.comp - 1][node.row - 1] -= 1;
        Multipartition::new(components)
    }

    /// The conjugate multipartition: component order reversed, each partition
    /// transposed.
    pub fn conjugate(&self) -> Multipartition {
        let components = self
            .components
            .iter()
            .rev()
            .map(|comp| {
                let width = comp.first().copied().unwrap_or(0);
                (1..=width)
                    .map(|col| comp.iter().take_while(|&&p| p >= col).count())
                    .collect()
            })
            .collect();
        Multipartition { components }
    }
}

impl fmt::Display for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|comp| {
                if comp.is_empty() {
                    "-".to_string()
                } else {
                    comp.iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                }
            })
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// Parses shape syntax: components separated by `|`, parts by `,`, empty
/// component written `0` or `-`.
pub fn parse_shape(input: &str) -> Result<Multipartition, TableauxError> {
    let err = || TableauxError::Parse {
        what: "shape",
        input: input.to_string(),
    };
    let mut components = Vec::new();
    for chunk in input.trim().split('|') {
        let chunk = chunk.trim();
        if chunk == "-" || chunk == "0" {
            components.push(Vec::new());
            continue;
        }
        if chunk.is_empty() {
            return Err(err());
        }
        let mut parts = Vec::new();
        for p in chunk.split(',') {
            let v: usize = p.trim().parse().map_err(|_| err())?;
            parts.push(v);
        }
        components.push(parts);
    }
    Multipartition::new(components)
}

/// The residue of a node: `k_m + (col - row)` taken mod `e` when `e > 0`.
pub fn residue(node: &Node, g: &GroundData) -> Residue {
    let base = g.charge()[node.comp - 1];
    g.residue_shift(base, node.col as i64 - node.row as i64)
}

/// The residue content of a shape: the sum of simple roots over its nodes.
pub fn content(mu: &Multipartition, g: &GroundData) -> RootElement {
    let mut alpha = RootElement::zero();
    for node in mu.row_reading_nodes() {
        alpha.add_assign_simple(residue(&node, g), 1);
    }
    alpha
}

/// A filling of a multipartition shape with `1..=d`, no repeats.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tableau {
    shape: Multipartition,
    // Entries mirror the shape: entries[comp][row][col], all 0-based indices.
    entries: Vec<Vec<Vec<usize>>>,
    // positions[r - 1] is the node holding entry r.
    positions: Vec<Node>,
}

impl Serialize for Tableau {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

impl Tableau {
    /// Builds a tableau from per-component row lists; the shape is inferred.
    pub fn from_rows(entries: Vec<Vec<Vec<usize>>>) -> Result<Self, TableauxError> {
        let shape = Multipartition::new(
            entries
                .iter()
                .map(|comp| comp.iter().map(|row| row.len()).collect())
                .collect(),
        )?;
        // Normalize away empty trailing rows the shape dropped.
        let entries: Vec<Vec<Vec<usize>>> = entries
            .into_iter()
            .map(|comp| comp.into_iter().filter(|r| !r.is_empty()).collect())
            .collect();
        let d = shape.size();
        let mut positions = vec![None; d];
        for (mi, comp) in entries.iter().enumerate() {
            for (ri, row) in comp.iter().enumerate() {
                for (ci, &v) in row.iter().enumerate() {
                    if v == 0 || v > d || positions[v - 1].is_some() {
                        return Err(TableauxError::NotBijective);
                    }
                    positions[v - 1] = Some(Node::new(ri + 1, ci + 1, mi + 1));
                }
            }
        }
        let positions = positions.into_iter().map(|p| p.unwrap()).collect();
        Ok(Self {
            shape,
            entries,
            positions,
        })
    }

    /// Builds a tableau by assigning entries to nodes in a given node order.
    pub fn from_filling(shape: &Multipartition, order: &[Node]) -> Self {
        assert_eq!(order.len(), shape.size());
        let mut entries: Vec<Vec<Vec<usize>>> = shape
            .components()
            .iter()
            .map(|comp| comp.iter().map(|&len| vec![0; len]).collect())
            .collect();
        for (idx, node) in order.iter().enumerate() {
            entries[node.comp - 1][node.row - 1][node.col - 1] = idx + 1;
        }
        Self {
            shape: shape.clone(),
            entries,
            positions: order.to_vec(),
        }
    }

    pub fn shape(&self) -> &Multipartition {
        &self.shape
    }

    pub fn size(&self) -> usize {
        self.positions.len()
    }

    /// Per-component row lists of entries.
    pub fn rows(&self) -> &[Vec<Vec<usize>>] {
        &self.entries
    }

    /// The entry at a node.
    pub fn entry(&self, node: &Node) -> Option<usize> {
        self.entries
            .get(node.comp - 1)?
            .get(node.row - 1)?
            .get(node.col - 1)
            .copied()
    }

    /// The node holding entry `r`.
    pub fn node_of(&self, r: usize) -> Node {
        self.positions[r - 1]
    }

    /// Entries in row-reading node order.
    pub fn row_reading_word(&self) -> Vec<usize> {
        self.shape
            .row_reading_nodes()
            .iter()
            .map(|n| self.entry(n).unwrap())
            .collect()
    }

    /// Whether entries increase left to right along every row.
    pub fn is_row_strict(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|row| row.windows(2).all(|w| w[0] < w[1]))
    }

    /// Whether entries increase top to bottom along every column.
    pub fn is_column_strict(&self) -> bool {
        self.entries.iter().all(|comp| {
            comp.windows(2).all(|rows| {
                rows[1]
                    .iter()
                    .zip(rows[0].iter())
                    .all(|(below, above)| above < below)
            })
        })
    }

    /// Standard: row- and column-strict.
    pub fn is_standard(&self) -> bool {
        self.is_row_strict() && self.is_column_strict()
    }

    /// The tableau with entries permuted: entry `r` becomes `w(r)`.
    pub fn permute(&self, w: &Permutation) -> Tableau {
        assert_eq!(w.degree(), self.size());
        let entries = self
            .entries
            .iter()
            .map(|comp| {
                comp.iter()
                    .map(|row| row.iter().map(|&v| w.apply(v)).collect())
                    .collect()
            })
            .collect();
        let mut positions = vec![Node::new(1, 1, 1); self.size()];
        for (r, node) in self.positions.iter().enumerate() {
            positions[w.apply(r + 1) - 1] = *node;
        }
        Tableau {
            shape: self.shape.clone(),
            entries,
            positions,
        }
    }

    /// The conjugate tableau on the conjugate shape.
    pub fn conjugate(&self) -> Tableau {
        let shape = self.shape.conjugate();
        let level = self.shape.level();
        let order: Vec<Node> = (1..=self.size())
            .map(|r| self.node_of(r).conjugate(level))
            .collect();
        Tableau::from_filling(&shape, &order)
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps: Vec<String> = self
            .entries
            .iter()
            .map(|comp| {
                if comp.is_empty() {
                    "-".to_string()
                } else {
                    comp.iter()
                        .map(|row| {
                            row.iter()
                                .map(|v| v.to_string())
                                .collect::<Vec<_>>()
                                .join(",")
                        })
                        .collect::<Vec<_>>()
                        .join("|")
                }
            })
            .collect();
        write!(f, "{}", comps.join(";"))
    }
}

/// Parses tableau syntax: entries comma-separated within a row, `|` between
/// rows, `;` between components, `-` or `0` for an empty component.
pub fn parse_tableau(input: &str) -> Result<Tableau, TableauxError> {
    let err = || TableauxError::Parse {
        what: "tableau",
        input: input.to_string(),
    };
    let mut components = Vec::new();
    for chunk in input.trim().split(';') {
        let chunk = chunk.trim();
        if chunk == "-" || chunk == "0" {
            components.push(Vec::new());
            continue;
        }
        let mut rows = Vec::new();
        for row in chunk.split('|') {
            let mut entries = Vec::new();
            for p in row.split(',') {
                let v: usize = p.trim().parse().map_err(|_| err())?;
                entries.push(v);
            }
            rows.push(entries);
        }
        components.push(rows);
    }
    Tableau::from_rows(components)
}

/// The residue sequence: position `r` carries the residue of the node
/// holding entry `r`.
pub fn residue_sequence(t: &Tableau, g: &GroundData) -> Vec<Residue> {
    (1..=t.size()).map(|r| residue(&t.node_of(r), g)).collect()
}

// Counts addable minus removable nodes of `mu` with residue `i`, restricted
// by a node filter.
fn addable_removable_count(
    mu: &Multipartition,
    i: Residue,
    g: &GroundData,
    filter: impl Fn(&Node) -> bool,
) -> i64 {
    let addable = mu
        .addable_nodes()
        .iter()
        .filter(|n| residue(n, g) == i && filter(n))
        .count() as i64;
    let removable = mu
        .removable_nodes()
        .iter()
        .filter(|n| residue(n, g) == i && filter(n))
        .count() as i64;
    addable - removable
}

/// The degree of a standard tableau: strip the largest entry, counting
/// addable minus removable nodes of the same residue strictly below it.
pub fn degree(t: &Tableau, g: &GroundData) -> Result<i64, TableauxError> {
    if !t.is_standard() {
        return Err(TableauxError::NotStandard);
    }
    let mut shape = t.shape().clone();
    let mut total = 0;
    for r in (1..=t.size()).rev() {
        let node = t.node_of(r);
        let i = residue(&node, g);
        total += addable_removable_count(&shape, i, g, |n| n.strictly_below(&node));
        shape = shape.remove_node(&node).expect("standard tableau strips");
    }
    Ok(total)
}

/// The codegree of a standard tableau: strip the largest entry, counting
/// addable minus removable nodes of the same residue strictly above it in
/// the shape with the node removed.
pub fn codegree(t: &Tableau, g: &GroundData) -> Result<i64, TableauxError> {
    if !t.is_standard() {
        return Err(TableauxError::NotStandard);
    }
    let mut shape = t.shape().clone();
    let mut total = 0;
    for r in (1..=t.size()).rev() {
        let node = t.node_of(r);
        let i = residue(&node, g);
        shape = shape.remove_node(&node).expect("standard tableau strips");
        total += addable_removable_count(&shape, i, g, |n| n.strictly_above(&node));
    }
    Ok(total)
}

/// The initial tableaux: the row-reading filling and the column-reading
/// filling of the shape.
pub fn initial_tableaux(mu: &Multipartition) -> (Tableau, Tableau) {
    (
        Tableau::from_filling(mu, &mu.row_reading_nodes()),
        Tableau::from_filling(mu, &mu.column_reading_nodes()),
    )
}

/// The permutations `(w_row, w_col)` with `w_row * T_row = T = w_col * T_col`
/// where `T_row`, `T_col` are the initial tableaux of the shape.
pub fn tableau_permutations(t: &Tableau) -> (Permutation, Permutation) {
    let (t_row, t_col) = initial_tableaux(t.shape());
    let d = t.size();
    let solve = |base: &Tableau| {
        let mut line = vec![0; d];
        for r in 1..=d {
            line[base.entry(&t.node_of(r)).unwrap() - 1] = r;
        }
        Permutation::from_one_line(line).expect("entry bijections compose")
    };
    (solve(&t_row), solve(&t_col))
}

/// Verdict for a partial-order comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrderVerdict {
    Less,
    Greater,
    Equal,
    Incomparable,
}

/// Dominance order on multipartitions of the same size: cumulative node
/// counts down the component/row list.
pub fn dominance(mu: &Multipartition, nu: &Multipartition) -> Result<OrderVerdict, TableauxError> {
    if mu.size() != nu.size() {
        return Err(TableauxError::SizeMismatch(mu.size(), nu.size()));
    }
    let level = mu.level().max(nu.level());
    let rows = |p: &Multipartition| {
        (1..=level)
            .flat_map(|m| {
                let depth = if m <= p.level() {
                    p.components()[m - 1].len()
                } else {
                    0
                };
                (1..=depth.max(1)).map(move |r| (m, r))
            })
            .collect::<Vec<_>>()
    };
    let mut keys: Vec<(usize, usize)> = rows(mu);
    keys.extend(rows(nu));
    keys.sort_unstable();
    keys.dedup();
    let cumulative = |p: &Multipartition, m: usize, r: usize| -> usize {
        let mut total = 0;
        for mm in 1..m {
            if mm <= p.level() {
                total += p.components()[mm - 1].iter().sum::<usize>();
            }
        }
        if m <= p.level() {
            total += p.components()[m - 1].iter().take(r).sum::<usize>();
        }
        total
    };
    let mut ge = true;
    let mut le = true;
    for (m, r) in keys {
        let a = cumulative(mu, m, r);
        let b = cumulative(nu, m, r);
        if a < b {
            ge = false;
        }
        if a > b {
            le = false;
        }
    }
    Ok(match (ge, le) {
        (true, true) => OrderVerdict::Equal,
        (true, false) => OrderVerdict::Greater,
        (false, true) => OrderVerdict::Less,
        (false, false) => OrderVerdict::Incomparable,
    })
}

/// The tableau order defined through the column permutations: `S` is less
/// than `T` when `w_col(S) <= w_col(T)` in Bruhat order. The column-initial
/// tableau is the minimum and the row-initial tableau the maximum.
pub fn bruhat(s: &Tableau, t: &Tableau) -> Result<OrderVerdict, TableauxError> {
    if s.shape() != t.shape() {
        return Err(TableauxError::ShapeMismatch);
    }
    let ws = tableau_permutations(s).1;
    let wt = tableau_permutations(t).1;
    let le = ws.bruhat_leq(&wt);
    let ge = wt.bruhat_leq(&ws);
    Ok(match (le, ge) {
        (true, true) => OrderVerdict::Equal,
        (true, false) => OrderVerdict::Less,
        (false, true) => OrderVerdict::Greater,
        (false, false) => OrderVerdict::Incomparable,
    })
}

/// Which fillings to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FillingKind {
    Standard,
    RowStrict,
    ColumnStrict,
}

/// Enumerates fillings of the shape, sorted by row-reading word.
pub fn enumerate(mu: &Multipartition, kind: FillingKind) -> Vec<Tableau> {
    let mut out = match kind {
        FillingKind::Standard => enumerate_standard(mu),
        FillingKind::RowStrict => {
            let (t_row, _) = initial_tableaux(mu);
            min_coset_reps(&mu.rows_composition())
                .into_iter()
                .map(|w| t_row.permute(&w))
                .collect()
        }
        FillingKind::ColumnStrict => {
            let (_, t_col) = initial_tableaux(mu);
            min_coset_reps(&mu.columns_composition())
                .into_iter()
                .map(|w| t_col.permute(&w))
                .collect()
        }
    };
    out.sort_by_key(|t| t.row_reading_word());
    out
}

// Standard tableaux as chains of shapes: place 1..=d in turn on an addable
// node of the growing subshape that lies in the target shape.
fn enumerate_standard(mu: &Multipartition) -> Vec<Tableau> {
    let d = mu.size();
    let mut out = Vec::new();
    let empty = Multipartition::new(vec![Vec::new(); mu.level()]).unwrap();
    let mut order: Vec<Node> = Vec::with_capacity(d);
    grow_standard(mu, &empty, &mut order, &mut out);
    out
}

fn grow_standard(
    mu: &Multipartition,
    sub: &Multipartition,
    order: &mut Vec<Node>,
    out: &mut Vec<Tableau>,
) {
    if order.len() == mu.size() {
        out.push(Tableau::from_filling(mu, order));
        return;
    }
    for node in sub.addable_nodes() {
        if mu.contains(&node) {
            let mut components = sub.components().to_vec();
            if components[node.comp - 1].len() < node.row {
                components[node.comp - 1].push(1);
            } else {
                components[node.comp - 1][node.row - 1] += 1;
            }
            let grown = Multipartition::new(components).unwrap();
            order.push(node);
            grow_standard(mu, &grown, order, out);
            order.pop();
        }
    }
}

/// The partitions of `d`, each written as a weakly decreasing list.
pub fn partitions_of(d: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if d == 0 {
            out.push(acc.clone());
            return;
        }
        for part in (1..=d.min(max)).rev() {
            acc.push(part);
            rec(d - part, part, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}

/// All multipartitions of size at most `max_size` with the given level.
pub fn all_shapes(max_size: usize, level: usize) -> Vec<Multipartition> {
    let mut out = Vec::new();
    for d in 0..=max_size {
        append_shapes(d, level, &mut Vec::new(), &mut out);
    }
    out
}

fn append_shapes(
    remaining: usize,
    level: usize,
    acc: &mut Vec<Vec<usize>>,
    out: &mut Vec<Multipartition>,
) {
    if acc.len() == level {
        if remaining == 0 {
            out.push(Multipartition::new(acc.clone()).unwrap());
        }
        return;
    }
    for d in 0..=remaining {
        for part in partitions_of(d) {
            acc.push(part);
            append_shapes(remaining - d, level, acc, out);
            acc.pop();
        }
    }
}

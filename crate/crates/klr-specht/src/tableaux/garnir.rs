//! Garnir combinatorics: belts, bricks, Garnir tableaux, and the brick
//! permutation coset data, in both row and column orientations.

use serde::Serialize;

use crate::ground::{GroundData, Residue};
use crate::perm::{min_coset_reps, Permutation};
use crate::tableaux::{
    initial_tableaux, residue, residue_sequence, Multipartition, Node, Tableau, TableauxError,
};

/// Row or column orientation for Garnir data and Specht constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Row,
    Column,
}

impl std::fmt::Display for Orientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Orientation::Row => write!(f, "row"),
            Orientation::Column => write!(f, "column"),
        }
    }
}

/// Full combinatorial data attached to a Garnir node.
///
/// `coset_words` and `gar_tableaux` align: the tableau at index `t` is the
/// word at index `t` (in the brick generators) applied to `top_tableau`.
/// The last pair is always the Garnir tableau itself.
#[derive(Clone, Debug, Serialize)]
pub struct GarnirData {
    pub node: Node,
    pub orientation: Orientation,
    /// Belt nodes in filling order.
    pub belt: Vec<Node>,
    /// Bricks in label order, each brick a run of `e` nodes.
    pub bricks: Vec<Vec<Node>>,
    /// Number of bricks.
    pub k: usize,
    /// Number of bricks in the first row (resp. first column) of the belt.
    pub f: usize,
    /// Smallest entry of the Garnir tableau lying in a brick, when bricks
    /// exist.
    pub n: Option<usize>,
    pub garnir_tableau: Tableau,
    /// The extreme standard member of the orbit on the other end from the
    /// Garnir tableau (equal to it when the orbit is a single tableau).
    pub top_tableau: Tableau,
    /// Minimal coset representative words in the brick generators, sorted by
    /// (length, letters).
    pub coset_words: Vec<Vec<usize>>,
    /// The brick-permutation orbit, aligned with `coset_words`.
    pub gar_tableaux: Vec<Tableau>,
    /// The common residue sequence of the orbit.
    pub residue_seq: Vec<Residue>,
}

impl GarnirData {
    /// The brick generator `w_r` (`1 <= r < k`) as a permutation of entries:
    /// it swaps the `r`-th and `(r+1)`-th brick entry blocks.
    pub fn brick_generator(&self, r: usize, d: usize) -> Permutation {
        let e = self.bricks[0].len();
        let n = self.n.expect("bricks exist");
        let mut line: Vec<usize> = (1..=d).collect();
        for j in 0..e {
            let a = n + r * e - e + j;
            line.swap(a - 1, a + e - 1);
        }
        Permutation::from_one_line(line).expect("swap of disjoint blocks")
    }

    /// A coset word evaluated to a permutation of entries.
    pub fn coset_permutation(&self, word: &[usize], d: usize) -> Permutation {
        let mut w = Permutation::identity(d);
        for &r in word {
            w = w.compose(&self.brick_generator(r, d));
        }
        w
    }
}

/// All Garnir nodes of the shape in the given orientation: nodes with a
/// neighbor directly below (row) or directly to the right (column).
pub fn garnir_nodes(mu: &Multipartition, orientation: Orientation) -> Vec<Node> {
    let mut out = Vec::new();
    for (m, comp) in mu.components().iter().enumerate() {
        for (a, &len) in comp.iter().enumerate() {
            for b in 1..=len {
                let neighbor = match orientation {
                    Orientation::Row => Node::new(a + 2, b, m + 1),
                    Orientation::Column => Node::new(a + 1, b + 1, m + 1),
                };
                if mu.contains(&neighbor) {
                    out.push(Node::new(a + 1, b, m + 1));
                }
            }
        }
    }
    out
}

/// Builds the Garnir data for a node of the shape in the given orientation.
pub fn garnir_data(
    mu: &Multipartition,
    node: &Node,
    orientation: Orientation,
    g: &GroundData,
) -> Result<GarnirData, TableauxError> {
    let (a, b, m) = (node.row, node.col, node.comp);
    if !mu.contains(node) {
        return Err(TableauxError::NotGarnirNode(*node));
    }
    let d = mu.size();
    let e = g.e();
    let (t_row, t_col) = initial_tableaux(mu);

    // Belt in filling order, brick start positions, and the base tableau the
    // Garnir filling overrides.
    let (belt, brick_runs, f, base) = match orientation {
        Orientation::Row => {
            if !mu.contains(&Node::new(a + 1, b, m)) {
                return Err(TableauxError::NotGarnirNode(*node));
            }
            let row_len = mu.row_len(a, m);
            let mut belt: Vec<Node> = (1..=b).map(|c| Node::new(a + 1, c, m)).collect();
            belt.extend((b..=row_len).map(|c| Node::new(a, c, m)));
            // Bricks tile the lower row ending at column b and the upper row
            // starting at column b; leading residue matches the node.
            let mut runs: Vec<Vec<Node>> = Vec::new();
            let mut lower = 0;
            if e > 0 {
                let e = e as usize;
                let mut c = (b % e) + 1;
                while c + e - 1 <= b {
                    runs.push((c..c + e).map(|cc| Node::new(a + 1, cc, m)).collect());
                    c += e;
                }
                lower = runs.len();
                let mut c = b;
                while c + e - 1 <= row_len {
                    runs.push((c..c + e).map(|cc| Node::new(a, cc, m)).collect());
                    c += e;
                }
            }
            let f = runs.len() - lower;
            (belt, runs, f, t_row)
        }
        Orientation::Column => {
            if !mu.contains(&Node::new(a, b + 1, m)) {
                return Err(TableauxError::NotGarnirNode(*node));
            }
            let col_len = mu.col_len(b, m);
            let mut belt: Vec<Node> = (1..=a).map(|r| Node::new(r, b + 1, m)).collect();
            belt.extend((a..=col_len).map(|r| Node::new(r, b, m)));
            let mut runs: Vec<Vec<Node>> = Vec::new();
            let mut upper = 0;
            if e > 0 {
                let e = e as usize;
                let mut r = (a % e) + 1;
                while r + e - 1 <= a {
                    runs.push((r..r + e).map(|rr| Node::new(rr, b + 1, m)).collect());
                    r += e;
                }
                upper = runs.len();
                let mut r = a;
                while r + e - 1 <= col_len {
                    runs.push((r..r + e).map(|rr| Node::new(rr, b, m)).collect());
                    r += e;
                }
            }
            let f = runs.len() - upper;
            (belt, runs, f, t_col)
        }
    };

    // The Garnir tableau: refill the belt with its own entry range in belt
    // order; everything else keeps the base filling.
    let u = base.entry(node).unwrap();
    let mut order: Vec<Node> = (1..=d).map(|r| base.node_of(r)).collect();
    for (j, belt_node) in belt.iter().enumerate() {
        order[u + j - 1] = *belt_node;
    }
    let garnir_tableau = Tableau::from_filling(mu, &order);
    debug_assert!(!garnir_tableau.is_standard());

    let k = brick_runs.len();
    let n = if k > 0 {
        let n = garnir_tableau.entry(&brick_runs[0][0]).unwrap();
        // Brick entry blocks are consecutive in label order, and each brick
        // leads with the node's residue.
        for (r, run) in brick_runs.iter().enumerate() {
            debug_assert_eq!(residue(&run[0], g), residue(node, g));
            for (j, brick_node) in run.iter().enumerate() {
                debug_assert_eq!(
                    garnir_tableau.entry(brick_node),
                    Some(n + r * (e as usize) + j)
                );
            }
        }
        Some(n)
    } else {
        None
    };

    // The opposite extreme of the orbit: first-of-belt brick positions take
    // the smallest entry blocks.
    let top_tableau = if k == 0 {
        garnir_tableau.clone()
    } else {
        let e = e as usize;
        let n = n.unwrap();
        let mut order: Vec<Node> = (1..=d).map(|r| garnir_tableau.node_of(r)).collect();
        let positions: Vec<&Vec<Node>> = brick_runs[k - f..]
            .iter()
            .chain(&brick_runs[..k - f])
            .collect();
        for (block, run) in positions.into_iter().enumerate() {
            for (j, brick_node) in run.iter().enumerate() {
                order[n + block * e + j - 1] = *brick_node;
            }
        }
        Tableau::from_filling(mu, &order)
    };

    let mut stub = GarnirData {
        node: *node,
        orientation,
        belt,
        bricks: brick_runs,
        k,
        f,
        n,
        residue_seq: residue_sequence(&garnir_tableau, g),
        garnir_tableau,
        top_tableau,
        coset_words: Vec::new(),
        gar_tableaux: Vec::new(),
    };

    // Orbit enumeration through minimal coset representatives of the brick
    // subgroup fixing each side of the belt.
    let mut reps: Vec<Permutation> = if k == 0 {
        vec![Permutation::identity(0)]
    } else {
        min_coset_reps(&[f, k - f])
    };
    reps.sort_by_key(|w| (w.length(), w.preferred_word()));
    for rep in reps {
        let word = rep.preferred_word();
        let u = stub.coset_permutation(&word, d);
        let tab = stub.top_tableau.permute(&u);
        stub.coset_words.push(word);
        stub.gar_tableaux.push(tab);
    }
    debug_assert_eq!(
        stub.gar_tableaux.last().unwrap(),
        &stub.garnir_tableau,
        "longest coset word reaches the Garnir tableau"
    );
    Ok(stub)
}

//! Symmetric group combinatorics: permutations in one-line notation, reduced
//! words with a deterministic preferred form, Bruhat order, minimal coset
//! representatives, and the graph of reduced words under commutation and
//! braid moves.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

/// Errors from permutation and word operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("one-line notation {0:?} is not a permutation of 1..=n")]
    NotAPermutation(Vec<usize>),
    #[error("simple generator index {index} out of range for degree {degree}")]
    GeneratorOutOfRange { index: usize, degree: usize },
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<usize>),
    #[error("braid graph exceeded the vertex budget {cap}")]
    BraidGraphBudget { cap: usize },
    #[error("letter {0} is not a descent on the requested side")]
    NotADescent(usize),
}

/// A permutation of `{1, ..., d}` in one-line notation: `one_line[k]` is the
/// image of `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Permutation {
    one_line: Vec<usize>,
}

impl Permutation {
    /// The identity permutation of degree `d`.
    pub fn identity(d: usize) -> Self {
        Self {
            one_line: (1..=d).collect(),
        }
    }

    /// Validates one-line notation.
    pub fn from_one_line(one_line: Vec<usize>) -> Result<Self, PermError> {
        let d = one_line.len();
        let mut seen = vec![false; d + 1];
        for &v in &one_line {
            if v == 0 || v > d || seen[v] {
                return Err(PermError::NotAPermutation(one_line));
            }
            seen[v] = true;
        }
        Ok(Self { one_line })
    }

    /// The simple transposition `s_r` swapping `r` and `r + 1`, `1 <= r < d`.
    pub fn simple(r: usize, d: usize) -> Result<Self, PermError> {
        if r == 0 || r + 1 > d {
            return Err(PermError::GeneratorOutOfRange { index: r, degree: d });
        }
        let mut w = Self::identity(d);
        w.one_line.swap(r - 1, r);
        Ok(w)
    }

    /// The degree (size of the underlying set).
    pub fn degree(&self) -> usize {
        self.one_line.len()
    }

    /// The image of `x`, `1 <= x <= d`.
    pub fn apply(&self, x: usize) -> usize {
        self.one_line[x - 1]
    }

    /// One-line notation.
    pub fn one_line(&self) -> &[usize] {
        &self.one_line
    }

    /// Composition `self * other`: first apply `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            one_line: other.one_line.iter().map(|&x| self.apply(x)).collect(),
        }
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (k, &v) in self.one_line.iter().enumerate() {
            inv[v - 1] = k + 1;
        }
        Permutation { one_line: inv }
    }

    /// Whether this is the identity.
    pub fn is_identity(&self) -> bool {
        self.one_line.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    /// Coxeter length: the number of inversions.
    pub fn length(&self) -> usize {
        let n = self.degree();
        let mut len = 0;
        for a in 0..n {
            for b in a + 1..n {
                if self.one_line[a] > self.one_line[b] {
                    len += 1;
                }
            }
        }
        len
    }

    /// Whether `r` is a left descent: `l(s_r * w) < l(w)`.
    pub fn is_left_descent(&self, r: usize) -> bool {
        // s_r * w swaps the values r and r + 1; it shortens w exactly when
        // r appears after r + 1 in one-line notation.
        let inv = self.position_of(r);
        let inv1 = self.position_of(r + 1);
        inv > inv1
    }

    /// Whether `r` is a right descent: `l(w * s_r) < l(w)`.
    pub fn is_right_descent(&self, r: usize) -> bool {
        self.one_line[r - 1] > self.one_line[r]
    }

    /// The smallest left descent, or `None` for the identity.
    pub fn min_left_descent(&self) -> Option<usize> {
        (1..self.degree()).find(|&r| self.is_left_descent(r))
    }

    /// The preimage of the value `v`.
    pub fn position_of(&self, v: usize) -> usize {
        self.one_line.iter().position(|&x| x == v).unwrap() + 1
    }

    /// Left-multiplies by `s_r` in place (swaps the values `r`, `r + 1`).
    pub fn left_multiply_simple(&mut self, r: usize) {
        for v in self.one_line.iter_mut() {
            if *v == r {
                *v = r + 1;
            } else if *v == r + 1 {
                *v = r;
            }
        }
    }

    /// Right-multiplies by `s_r` in place (swaps positions `r`, `r + 1`).
    pub fn right_multiply_simple(&mut self, r: usize) {
        self.one_line.swap(r - 1, r);
    }

    /// The preferred reduced word: repeatedly strip the smallest left
    /// descent. The same permutation always yields the same word.
    pub fn preferred_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::with_capacity(w.length());
        while let Some(r) = w.min_left_descent() {
            word.push(r);
            w.left_multiply_simple(r);
        }
        word
    }

    /// Evaluates a word in the simple generators to a permutation of degree
    /// `d`. The word need not be reduced.
    pub fn from_word(word: &[usize], d: usize) -> Result<Permutation, PermError> {
        let mut w = Permutation::identity(d);
        for &r in word.iter().rev() {
            if r == 0 || r + 1 > d {
                return Err(PermError::GeneratorOutOfRange { index: r, degree: d });
            }
            w.left_multiply_simple(r);
        }
        Ok(w)
    }

    /// Applies the place action to a sequence: entry at position `p` moves to
    /// position `w(p)`.
    pub fn apply_to_seq<T: Clone>(&self, seq: &[T]) -> Vec<T> {
        assert_eq!(seq.len(), self.degree());
        let mut out = vec![None; seq.len()];
        for (p, item) in seq.iter().enumerate() {
            out[self.one_line[p] - 1] = Some(item.clone());
        }
        out.into_iter().map(|x| x.unwrap()).collect()
    }

    /// Whether `self <= other` in Bruhat order, by the greedy subword scan of
    /// a reduced word for `other`.
    pub fn bruhat_leq(&self, other: &Permutation) -> bool {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        let word = other.preferred_word();
        let mut x = self.clone();
        for &r in word.iter().rev() {
            if x.is_right_descent(r) {
                x.right_multiply_simple(r);
            }
        }
        x.is_identity()
    }

    /// Whether the permutation is fully commutative (321-avoiding), i.e. all
    /// its reduced words are related by commutation moves alone.
    pub fn is_fully_commutative(&self) -> bool {
        // 321-avoidance: scan for a descent value pair with a smaller value
        // after it. Track the best (largest) candidate "middle" seen so far.
        let n = self.degree();
        let mut best_middle = 0;
        let mut max_so_far = 0;
        for k in 0..n {
            let v = self.one_line[k];
            if v < best_middle {
                return false;
            }
            if v < max_so_far && v > best_middle {
                best_middle = v;
            }
            if v > max_so_far {
                max_so_far = v;
            }
        }
        true
    }
}

/// A composition of `d` into positive parts, indexing a standard parabolic
/// (Young) subgroup.
pub fn blocks_of_composition(lambda: &[usize]) -> Vec<std::ops::Range<usize>> {
    let mut blocks = Vec::with_capacity(lambda.len());
    let mut start = 1;
    for &part in lambda {
        blocks.push(start..start + part);
        start += part;
    }
    blocks
}

/// Minimal length left coset representatives for the parabolic subgroup of
/// the composition `lambda` in the symmetric group of degree `sum(lambda)`:
/// exactly the permutations increasing on each block of positions. Returned
/// sorted by one-line notation.
pub fn min_coset_reps(lambda: &[usize]) -> Vec<Permutation> {
    let d: usize = lambda.iter().sum();
    let blocks = blocks_of_composition(lambda);
    let mut out = Vec::new();
    let mut current = vec![0usize; d];
    let mut used = vec![false; d + 1];
    fill_reps(&blocks, 0, &mut current, &mut used, &mut out);
    out.sort_by(|a, b| a.one_line.cmp(&b.one_line));
    out
}

// Chooses an increasing subsequence of unused values for each block of
// positions in turn.
fn fill_reps(
    blocks: &[std::ops::Range<usize>],
    bi: usize,
    current: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Permutation>,
) {
    if bi == blocks.len() {
        out.push(Permutation {
            one_line: current.clone(),
        });
        return;
    }
    let block = blocks[bi].clone();
    choose_increasing(blocks, bi, block.start, 1, current, used, out);
}

fn choose_increasing(
    blocks: &[std::ops::Range<usize>],
    bi: usize,
    pos: usize,
    min_value: usize,
    current: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Permutation>,
) {
    let block = blocks[bi].clone();
    if pos == block.end {
        fill_reps(blocks, bi + 1, current, used, out);
        return;
    }
    let d = current.len();
    let remaining = block.end - pos;
    for v in min_value..=d {
        if used[v] {
            continue;
        }
        // Enough larger unused values must remain for the rest of the block.
        if d - v + 1 < remaining {
            break;
        }
        used[v] = true;
        current[pos - 1] = v;
        choose_increasing(blocks, bi, pos + 1, v + 1, current, used, out);
        used[v] = false;
    }
}

/// Whether `w` is a minimal length left coset representative for the
/// parabolic of `lambda`: increasing on each block of positions.
pub fn is_min_coset_rep(w: &Permutation, lambda: &[usize]) -> bool {
    blocks_of_composition(lambda).into_iter().all(|block| {
        block
            .clone()
            .zip(block.skip(1))
            .all(|(a, b)| w.apply(a) < w.apply(b))
    })
}

/// Factors `w = d * p` with `d` the minimal coset representative of `w`'s
/// coset and `p` in the parabolic of `lambda`; the factorization is length
/// additive.
pub fn coset_factor(w: &Permutation, lambda: &[usize]) -> (Permutation, Permutation) {
    // d sorts the values within each block of positions.
    let mut d_line = w.one_line.to_vec();
    for block in blocks_of_composition(lambda) {
        d_line[block.start - 1..block.end - 1].sort_unstable();
    }
    let d = Permutation { one_line: d_line };
    let p = d.inverse().compose(w);
    debug_assert!(is_min_coset_rep(&d, lambda));
    debug_assert_eq!(d.length() + p.length(), w.length());
    (d, p)
}

/// A move between reduced words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MoveKind {
    /// Swap adjacent commuting letters at the position.
    Commute,
    /// Rewrite letters `(a, b, a)` at the position as `(b, a, b)`.
    Braid,
}

/// A move applied at a 0-based position in a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WordMove {
    pub pos: usize,
    pub kind: MoveKind,
}

/// Applies a move to a word in place. Panics if the move does not apply.
pub fn apply_move(word: &mut [usize], mv: WordMove) {
    match mv.kind {
        MoveKind::Commute => {
            let (a, b) = (word[mv.pos], word[mv.pos + 1]);
            assert!(a.abs_diff(b) > 1, "letters do not commute");
            word.swap(mv.pos, mv.pos + 1);
        }
        MoveKind::Braid => {
            let (a, b, c) = (word[mv.pos], word[mv.pos + 1], word[mv.pos + 2]);
            assert!(a == c && a.abs_diff(b) == 1, "not a braid pattern");
            word[mv.pos] = b;
            word[mv.pos + 1] = a;
            word[mv.pos + 2] = b;
        }
    }
}

/// Rewrites a reduced word into the preferred word of the same permutation
/// using only commutation and braid moves, returning the move sequence.
/// The moves let callers replay the rewriting while tracking side data.
pub fn moves_to_preferred(word: &[usize], d: usize) -> Result<Vec<WordMove>, PermError> {
    let w = Permutation::from_word(word, d)?;
    if w.length() != word.len() {
        return Err(PermError::NotReduced(word.to_vec()));
    }
    let mut work = word.to_vec();
    let mut moves = Vec::new();
    let mut offset = 0;
    let mut tail = w;
    while offset < work.len() {
        let r0 = tail.min_left_descent().expect("nonempty reduced word");
        make_first(&mut work, offset, r0, &mut moves);
        debug_assert_eq!(work[offset], r0);
        tail.left_multiply_simple(r0);
        offset += 1;
    }
    debug_assert_eq!(
        work,
        Permutation::from_word(word, d).unwrap().preferred_word()
    );
    Ok(moves)
}

/// Rewrites a reduced word, by commutation and braid moves, into a reduced
/// word of the same permutation whose first letter is `r`, which must be a
/// left descent. Returns the move sequence; callers replay it to track side
/// data.
pub fn moves_making_first(word: &[usize], d: usize, r: usize) -> Result<Vec<WordMove>, PermError> {
    let w = Permutation::from_word(word, d)?;
    if w.length() != word.len() {
        return Err(PermError::NotReduced(word.to_vec()));
    }
    if !w.is_left_descent(r) {
        return Err(PermError::NotADescent(r));
    }
    let mut work = word.to_vec();
    let mut moves = Vec::new();
    make_first(&mut work, 0, r, &mut moves);
    Ok(moves)
}

/// Mirror of [`moves_making_first`]: rewrites a reduced word to end with the
/// letter `r`, which must be a right descent. Works by reversing the word
/// (a reduced word of the inverse) and mirroring the move positions; both
/// move patterns are palindromic, so each mirrored move applies verbatim.
pub fn moves_making_last(word: &[usize], d: usize, r: usize) -> Result<Vec<WordMove>, PermError> {
    let reversed: Vec<usize> = word.iter().rev().copied().collect();
    let moves = moves_making_first(&reversed, d, r)?;
    let n = word.len();
    Ok(moves
        .into_iter()
        .map(|mv| WordMove {
            pos: match mv.kind {
                MoveKind::Commute => n - 2 - mv.pos,
                MoveKind::Braid => n - 3 - mv.pos,
            },
            kind: mv.kind,
        })
        .collect())
}

// Rearranges the reduced suffix `word[offset..]` to start with the letter r0,
// which must be a left descent of the suffix's permutation. If the first
// letter differs from r0 then both are left descents, so the suffix factors
// through the longest element of the rank-2 parabolic they generate; r0 stays
// a left descent after stripping the first letter, which drives the
// recursion.
fn make_first(word: &mut Vec<usize>, offset: usize, r0: usize, moves: &mut Vec<WordMove>) {
    let a = word[offset];
    if a == r0 {
        return;
    }
    make_first(word, offset + 1, r0, moves);
    if a.abs_diff(r0) > 1 {
        let mv = WordMove {
            pos: offset,
            kind: MoveKind::Commute,
        };
        apply_move(word, mv);
        moves.push(mv);
    } else {
        // Need the pattern (a, r0, a): the suffix after r0 admits a in front.
        make_first(word, offset + 2, a, moves);
        let mv = WordMove {
            pos: offset,
            kind: MoveKind::Braid,
        };
        apply_move(word, mv);
        moves.push(mv);
    }
}

/// The graph of all reduced words of a permutation: vertices are words,
/// edges are single commutation or braid moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BraidGraph {
    pub words: Vec<Vec<usize>>,
    /// Edges as (word index, word index, move) with the move applying to the
    /// first word.
    pub edges: Vec<(usize, usize, WordMove)>,
}

/// Breadth-first exploration of the reduced word graph starting from the
/// preferred word, failing once more than `cap` vertices appear.
pub fn braid_graph(w: &Permutation, cap: usize) -> Result<BraidGraph, PermError> {
    let start = w.preferred_word();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut words = vec![start.clone()];
    index.insert(start.clone(), 0);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(wi) = queue.pop_front() {
        let word = words[wi].clone();
        let mut candidates = Vec::new();
        for pos in 0..word.len().saturating_sub(1) {
            if word[pos].abs_diff(word[pos + 1]) > 1 {
                candidates.push(WordMove {
                    pos,
                    kind: MoveKind::Commute,
                });
            }
        }
        for pos in 0..word.len().saturating_sub(2) {
            if word[pos] == word[pos + 2] && word[pos].abs_diff(word[pos + 1]) == 1 {
                candidates.push(WordMove {
                    pos,
                    kind: MoveKind::Braid,
                });
            }
        }
        for mv in candidates {
            let mut next = word.clone();
            apply_move(&mut next, mv);
            let ni = match index.get(&next) {
                Some(&ni) => ni,
                None => {
                    let ni = words.len();
                    if ni >= cap {
                        return Err(PermError::BraidGraphBudget { cap });
                    }
                    index.insert(next.clone(), ni);
                    words.push(next);
                    queue.push_back(ni);
                    ni
                }
            };
            // Record each undirected edge once, from the smaller index.
            if wi < ni {
                edges.push((wi, ni, mv));
            }
        }
    }
    Ok(BraidGraph { words, edges })
}

/// Enumerates all permutations of degree `d` in lexicographic one-line order.
pub fn all_permutations(d: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (1..=d).collect();
    loop {
        out.push(Permutation {
            one_line: current.clone(),
        });
        // Next lexicographic permutation.
        let Some(i) = (0..d.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1])
        else {
            break;
        };
        let j = (i + 1..d).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

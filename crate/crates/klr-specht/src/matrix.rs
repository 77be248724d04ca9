//! Sparse exact integer linear algebra: vectors and matrices over the
//! integers, plus lattice (integer row echelon) computations used for rank,
//! membership, submodule closure, and exact solving.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A sparse integer vector: index -> nonzero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: BTreeMap<usize, BigInt>,
}

impl SparseVec {
    /// The zero vector.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit vector at `i`.
    pub fn unit(i: usize) -> Self {
        let mut v = Self::zero();
        v.add_term(i, BigInt::one());
        v
    }

    /// Builds a vector from `(index, coefficient)` pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, BigInt)>) -> Self {
        let mut v = Self::zero();
        for (i, c) in pairs {
            v.add_term(i, c);
        }
        v
    }

    /// Adds `c` at index `i`, dropping the entry if it cancels.
    pub fn add_term(&mut self, i: usize, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.entries.entry(i).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.entries.remove(&i);
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &SparseVec, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for (&i, v) in &other.entries {
            self.add_term(i, v * c);
        }
    }

    /// The coefficient at index `i`.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.entries.get(&i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Whether the vector is zero.
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Iterates over nonzero `(index, coefficient)` pairs in index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigInt)> + '_ {
        self.entries.iter().map(|(&i, c)| (i, c))
    }

    /// The number of nonzero entries.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// The smallest index with a nonzero coefficient.
    pub fn leading_index(&self) -> Option<usize> {
        self.entries.keys().next().copied()
    }

    /// Scales every entry by `c`.
    pub fn scale(&mut self, c: &BigInt) {
        if c.is_zero() {
            self.entries.clear();
            return;
        }
        for v in self.entries.values_mut() {
            *v *= c;
        }
    }
}

/// A sparse integer matrix stored column-major: column `j` is the image of
/// the `j`-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMat {
    /// The zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols: vec![SparseVec::zero(); cols],
        }
    }

    /// The identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for j in 0..n {
            m.cols[j] = SparseVec::unit(j);
        }
        m
    }

    /// Row count.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Column count.
    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    /// Sets column `j`.
    pub fn set_col(&mut self, j: usize, v: SparseVec) {
        self.cols[j] = v;
    }

    /// Column `j`.
    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    /// The entry at `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> BigInt {
        self.cols[j].coeff(i)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::zero();
        for (j, c) in v.iter() {
            out.add_scaled(&self.cols[j], c);
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.cols(), other.rows, "shape mismatch in matrix product");
        let mut out = SparseMat::zero(self.rows, other.cols());
        for j in 0..other.cols() {
            out.cols[j] = self.apply(&other.cols[j]);
        }
        out
    }

    /// Matrix sum.
    pub fn add(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols(), other.cols());
        let mut out = self.clone();
        for j in 0..self.cols() {
            out.cols[j].add_scaled(&other.cols[j], &BigInt::one());
        }
        out
    }

    /// Scales every entry.
    pub fn scale(&self, c: &BigInt) -> SparseMat {
        let mut out = self.clone();
        for col in &mut out.cols {
            col.scale(c);
        }
        out
    }

    /// The transpose.
    pub fn transpose(&self) -> SparseMat {
        let mut out = SparseMat::zero(self.cols(), self.rows);
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col.iter() {
                out.cols[i].add_term(j, c.clone());
            }
        }
        out
    }

    /// Whether every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }
}

/// An integer lattice (Z-submodule of Z^n) maintained as a row-echelon basis:
/// rows have strictly increasing leading indices, and inserting a vector
/// performs exact gcd elimination, so the rows always form a Z-basis of the
/// span of everything inserted.
#[derive(Clone, Debug, Default)]
pub struct IntLattice {
    rows: Vec<SparseVec>,
}

impl IntLattice {
    /// The zero lattice.
    pub fn new() -> Self {
        Self::default()
    }

    /// The rank of the lattice.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The echelon basis rows.
    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// The leading (pivot) indices of the basis rows.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.leading_index().unwrap()).collect()
    }

    /// Whether every pivot value is a unit, which makes the inclusion of the
    /// lattice into Z^n split off the pivot coordinates; together with full
    /// reduction this is exactly "the quotient by the lattice is free".
    pub fn pivots_are_units(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.iter().next().map(|(_, c)| c.abs().is_one()).unwrap_or(false))
    }

    /// Inserts a vector, returning `true` when the lattice grew (the vector
    /// was not already a member).
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut queue = vec![v];
        let mut grew = false;
        while let Some(mut v) = queue.pop() {
            let mut pos = 0;
            loop {
                let Some(lead) = v.leading_index() else {
                    break;
                };
                // Find the first row whose pivot is >= lead.
                while pos < self.rows.len()
                    && self.rows[pos].leading_index().unwrap() < lead
                {
                    pos += 1;
                }
                if pos == self.rows.len()
                    || self.rows[pos].leading_index().unwrap() > lead
                {
                    // New pivot column.
                    self.rows.insert(pos, v);
                    grew = true;
                    break;
                }
                let p = self.rows[pos].coeff(lead);
                let c = v.coeff(lead);
                let (q, r) = c.div_rem(&p);
                if r.is_zero() {
                    v.add_scaled(&self.rows[pos].clone(), &(-q));
                } else {
                    // gcd combine: replace the pivot row, requeue the remainder
                    // of the old pivot row.
                    let egcd = p.extended_gcd(&c);
                    let mut new_row = self.rows[pos].clone();
                    new_row.scale(&egcd.x);
                    new_row.add_scaled(&v, &egcd.y);
                    debug_assert_eq!(new_row.coeff(lead), egcd.gcd);
                    let old_row = std::mem::replace(&mut self.rows[pos], new_row.clone());
                    grew = true;
                    let mut reduced_old = old_row;
                    let factor = -(&p / &egcd.gcd);
                    reduced_old.add_scaled(&new_row, &factor);
                    debug_assert!(reduced_old.coeff(lead).is_zero());
                    if !reduced_old.is_zero() {
                        queue.push(reduced_old);
                    }
                    let vfact = -(&c / &egcd.gcd);
                    v.add_scaled(&new_row, &vfact);
                    debug_assert!(v.coeff(lead).is_zero());
                }
            }
        }
        grew
    }

    /// Exact membership test: whether `v` lies in the lattice.
    pub fn contains(&self, v: &SparseVec) -> bool {
        let mut v = v.clone();
        for row in &self.rows {
            let lead = row.leading_index().unwrap();
            let c = v.coeff(lead);
            if c.is_zero() {
                continue;
            }
            let p = row.coeff(lead);
            let (q, r) = c.div_rem(&p);
            if !r.is_zero() {
                return false;
            }
            v.add_scaled(row, &(-q));
        }
        v.is_zero()
    }
}

/// Exact linear solving over the integers: expresses targets as integer
/// combinations of an ordered list of basis vectors.
#[derive(Clone, Debug, Default)]
pub struct IntSolver {
    // Echelon rows paired with their expression in the inserted vectors.
    rows: Vec<(SparseVec, SparseVec)>,
    inserted: usize,
}

impl IntSolver {
    /// An empty solver.
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of vectors inserted so far.
    pub fn len(&self) -> usize {
        self.inserted
    }

    /// Whether no vectors have been inserted.
    pub fn is_empty(&self) -> bool {
        self.inserted == 0
    }

    /// The rank of the span of the inserted vectors.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts a basis vector; returns `false` when it was linearly dependent
    /// over the rationals on the earlier ones (it is then not usable as a
    /// pivot and solving may still succeed without it).
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let tag = SparseVec::unit(self.inserted);
        self.inserted += 1;
        match self.reduce(v, tag) {
            Some((v, tag)) => {
                let lead = v.leading_index().unwrap();
                let pos = self
                    .rows
                    .partition_point(|(r, _)| r.leading_index().unwrap() < lead);
                self.rows.insert(pos, (v, tag));
                true
            }
            None => false,
        }
    }

    // Reduces v against the echelon rows over Q while keeping exact integer
    // arithmetic: cross-multiplies when pivots do not divide. Returns None
    // when v reduces to zero. The tag tracks a rational multiple: the pair
    // (v, tag) satisfies scale * v_original = combination + v, with the same
    // scale applied to the tag, so zero remainder means rational dependence.
    fn reduce(&self, mut v: SparseVec, mut tag: SparseVec) -> Option<(SparseVec, SparseVec)> {
        for (row, row_tag) in &self.rows {
            let lead = row.leading_index().unwrap();
            let c = v.coeff(lead);
            if c.is_zero() {
                continue;
            }
            let p = row.coeff(lead);
            let g = p.gcd(&c);
            let scale = &p / &g;
            let factor = -(&c / &g);
            v.scale(&scale);
            tag.scale(&scale);
            v.add_scaled(row, &factor);
            tag.add_scaled(row_tag, &factor);
            debug_assert!(v.coeff(lead).is_zero());
        }
        if v.is_zero() {
            None
        } else {
            Some((v, tag))
        }
    }

    /// Solves `sum_j x_j * basis_j = target` exactly over the integers.
    /// Returns the dense coefficient vector, or `None` when no integer
    /// solution exists.
    pub fn solve(&self, target: &SparseVec) -> Option<Vec<BigInt>> {
        // Back-substitution over echelon rows, collecting rational steps as
        // an integer combination with a common denominator.
        let mut v = target.clone();
        let mut combo = vec![BigInt::zero(); self.inserted];
        let mut denom = BigInt::one();
        for (row, row_tag) in &self.rows {
            let lead = row.leading_index().unwrap();
            let c = v.coeff(lead);
            if c.is_zero() {
                continue;
            }
            let p = row.coeff(lead);
            let g = p.gcd(&c);
            let scale = &p / &g;
            let factor = &c / &g;
            v.scale(&scale);
            v.add_scaled(row, &(-&factor));
            for x in combo.iter_mut() {
                *x *= &scale;
            }
            denom *= &scale;
            for (i, t) in row_tag.iter() {
                combo[i] += &factor * t;
            }
        }
        if !v.is_zero() {
            return None;
        }
        // combo / denom must be integral entrywise.
        let mut out = Vec::with_capacity(self.inserted);
        for x in combo {
            let (q, r) = x.div_rem(&denom);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(out)
    }
}

//! Block intertwiners: on the permutation module built from k bricks of e
//! strands grouped by a composition lambda, the crossings sigma_r that swap
//! adjacent bricks and the shifted elements tau_r = sigma_r + 1 acting on
//! the brick subspace T = e(j)M inside degree zero. The tau operators
//! satisfy the Coxeter relations of the symmetric group on k letters even
//! though the sigma's do not; every claimed identity is checked as an exact
//! integer matrix identity.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::ground::{GroundData, Residue};
use crate::klr::{degree_of, sign_map, CheckReport, KlrElement, Token};
use crate::matrix::{IntLattice, SparseMat, SparseVec};
use crate::modules::{permutation_module, segment, CyclicModule, ModuleError};
use crate::perm::{min_coset_reps, Permutation};
use crate::tableaux::garnir::Orientation;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BrickError {
    #[error("brick spaces need e > 0, got {0}")]
    InvalidQuiver(i64),
    #[error("composition must be nonempty with positive parts")]
    InvalidComposition,
    #[error("sigma index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("operator does not preserve the brick subspace")]
    NotClosed,
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// The brick space T(i, lambda) (row) or T(i, -lambda) (column) inside its
/// base permutation module: k bricks of e strands starting at residue i,
/// grouped by the composition lambda.
pub struct BrickSpace<'g> {
    g: &'g GroundData,
    pub start: Residue,
    pub lambda: Vec<usize>,
    pub k: usize,
    pub orientation: Orientation,
    module: CyclicModule<'g>,
    idem: Vec<Residue>,
    brick_indices: Vec<usize>,
}

/// Builds the brick space for the given start residue, composition, and
/// orientation. The base module is materialized with its full basis.
pub fn brick_space<'g>(
    start: Residue,
    lambda: &[usize],
    orientation: Orientation,
    g: &'g GroundData,
) -> Result<BrickSpace<'g>, BrickError> {
    if g.e() <= 0 {
        return Err(BrickError::InvalidQuiver(g.e()));
    }
    if lambda.is_empty() || lambda.iter().any(|&p| p == 0) {
        return Err(BrickError::InvalidComposition);
    }
    let e = g.e();
    let k: usize = lambda.iter().sum();
    let sign = match orientation {
        Orientation::Row => 1,
        Orientation::Column => -1,
    };
    let segments = lambda
        .iter()
        .map(|&part| segment(start, sign * e * part as i64, g))
        .collect::<Result<Vec<_>, _>>()?;
    let module = permutation_module(&segments, 0, g);
    let idem = module.presentation().generator_residues.clone();
    let brick_indices: Vec<usize> = module
        .basis()
        .iter()
        .enumerate()
        .filter(|(_, b)| b.residue_seq == idem)
        .map(|(n, _)| n)
        .collect();
    Ok(BrickSpace {
        g,
        start,
        lambda: lambda.to_vec(),
        k,
        orientation,
        module,
        idem,
        brick_indices,
    })
}

impl<'g> BrickSpace<'g> {
    pub fn base(&self) -> &CyclicModule<'g> {
        &self.module
    }

    /// The dimension of the brick subspace.
    pub fn dimension(&self) -> usize {
        self.brick_indices.len()
    }

    /// Base-module basis indices spanning the brick subspace.
    pub fn brick_indices(&self) -> &[usize] {
        &self.brick_indices
    }

    /// The block transposition w_r swapping bricks r and r+1 as strands.
    pub fn block_transposition(&self, r: usize) -> Result<Permutation, BrickError> {
        if r == 0 || r + 1 > self.k {
            return Err(BrickError::IndexOutOfRange(r));
        }
        let e = self.g.e() as usize;
        let d = self.k * e;
        let lo = r * e - e;
        let one_line: Vec<usize> = (1..=d)
            .map(|p| {
                if p > lo && p <= lo + e {
                    p + e
                } else if p > lo + e && p <= lo + 2 * e {
                    p - e
                } else {
                    p
                }
            })
            .collect();
        Ok(Permutation::from_one_line(one_line).expect("block swap is a permutation"))
    }

    /// sigma_r as an algebra element: psi_{w_r} e(j), negated for column
    /// orientation when e is odd.
    pub fn sigma_element(&self, r: usize) -> Result<KlrElement, BrickError> {
        let w = self.block_transposition(r)?;
        let d = self.idem.len();
        let coeff = match self.orientation {
            Orientation::Row => BigInt::one(),
            Orientation::Column => {
                if self.g.e() % 2 == 0 {
                    BigInt::one()
                } else {
                    BigInt::from(-1)
                }
            }
        };
        Ok(
            KlrElement::monomial(&w.preferred_word(), &vec![0; d], &self.idem, coeff)
                .expect("block transpositions have preferred words"),
        )
    }

    fn token_matrix(&self, tok: &Token) -> Result<SparseMat, BrickError> {
        Ok(self.module.action_matrix(tok)?)
    }

    /// The matrix of sigma_r on the full base module.
    pub fn sigma(&self, r: usize) -> Result<SparseMat, BrickError> {
        let w = self.block_transposition(r)?;
        let mut acc = self.token_matrix(&Token::E(self.idem.clone()))?;
        for &t in w.preferred_word().iter().rev() {
            acc = self.token_matrix(&Token::Psi(t))?.mul(&acc);
        }
        if self.orientation == Orientation::Column && self.g.e() % 2 != 0 {
            acc = acc.scale(&BigInt::from(-1));
        }
        Ok(acc)
    }

    /// The matrix of tau_r = sigma_r + e(j) on the full base module.
    pub fn tau(&self, r: usize) -> Result<SparseMat, BrickError> {
        let e_mat = self.token_matrix(&Token::E(self.idem.clone()))?;
        Ok(self.sigma(r)?.add(&e_mat))
    }

    /// The generator m as a vector in the base module.
    pub fn generator(&self) -> SparseVec {
        self.module.generator()
    }

    /// Restricts a full-module matrix to the brick subspace, failing if any
    /// brick column leaks outside it.
    pub fn restrict(&self, mat: &SparseMat) -> Result<SparseMat, BrickError> {
        let pos: HashMap<usize, usize> = self
            .brick_indices
            .iter()
            .enumerate()
            .map(|(n, &b)| (b, n))
            .collect();
        let n = self.brick_indices.len();
        let mut out = SparseMat::zero(n, n);
        for (col, &b) in self.brick_indices.iter().enumerate() {
            let mut v = SparseVec::zero();
            for (row, c) in mat.col(b).iter() {
                match pos.get(&row) {
                    Some(&p) => v.add_term(p, c.clone()),
                    None => return Err(BrickError::NotClosed),
                }
            }
            out.set_col(col, v);
        }
        Ok(out)
    }

    // Whether s_r lies in the parabolic subgroup of S_k given by lambda.
    fn is_internal(&self, r: usize) -> bool {
        let mut sum = 0;
        for &part in &self.lambda {
            sum += part;
            if r == sum {
                return false;
            }
            if r < sum {
                return true;
            }
        }
        false
    }
}

/// Checks every theorem about the brick operators as exact matrix
/// identities on the brick subspace: annihilation, the quadratic and braid
/// identities of sigma, the Coxeter relations of tau, the dimension and
/// basis of the subspace, and unitriangularity of the tau-to-sigma
/// transition. Identities are checked on the spanning basis of T; linearity
/// extends them to the whole subspace.
pub fn verify_brick_theorems(space: &BrickSpace) -> Result<Vec<CheckReport>, BrickError> {
    let mut reports = Vec::new();
    let mut report = |name: &str, cases: usize, failures: Vec<String>| {
        reports.push(CheckReport {
            name: name.to_string(),
            cases,
            failures,
        });
    };
    let g = space.g;
    let e = g.e() as usize;
    let k = space.k;
    let d = k * e;
    let module = space.base();

    // Dimension k!/prod(lambda_m!), inside degree zero, constant residues.
    let mut failures = Vec::new();
    let mut expected: u64 = (1..=k as u64).product();
    for &part in &space.lambda {
        expected /= (1..=part as u64).product::<u64>();
    }
    if space.dimension() as u64 != expected {
        failures.push(format!(
            "dimension {} differs from {expected}",
            space.dimension()
        ));
    }
    for &b in space.brick_indices() {
        let elt = &module.basis()[b];
        if elt.degree != 0 {
            failures.push(format!("basis element {b} has degree {}", elt.degree));
        }
    }
    report("brick-dimension", 1 + space.dimension(), failures);

    // Degree of every sigma summand is zero.
    let mut failures = Vec::new();
    for r in 1..k {
        let sig = space.sigma_element(r)?;
        for m in sig.iter() {
            if degree_of(&m, g) != 0 {
                failures.push(format!("sigma_{r} has degree {}", degree_of(&m, g)));
            }
        }
    }
    report("sigma-degree-zero", k.saturating_sub(1), failures);

    // All y's and all psi's off the brick boundaries annihilate T.
    let mut failures = Vec::new();
    let mut cases = 0;
    for &b in space.brick_indices() {
        let v = SparseVec::unit(b);
        for s in 1..=d {
            cases += 1;
            if !module.act(&Token::Y(s), &v)?.is_zero() {
                failures.push(format!("y_{s} does not kill brick vector {b}"));
            }
        }
        for t in (1..d).filter(|t| t % e != 0) {
            cases += 1;
            if !module.act(&Token::Psi(t), &v)?.is_zero() {
                failures.push(format!("psi_{t} does not kill brick vector {b}"));
            }
        }
    }
    report("annihilation", cases, failures);

    // Parabolic sigma's kill the generator; the matching tau's fix it.
    let mut failures = Vec::new();
    let mut cases = 0;
    let m_vec = space.generator();
    for r in 1..k {
        if space.is_internal(r) {
            cases += 1;
            if !space.sigma(r)?.apply(&m_vec).is_zero() {
                failures.push(format!("sigma_{r} does not kill the generator"));
            }
            if space.tau(r)?.apply(&m_vec) != m_vec {
                failures.push(format!("tau_{r} does not fix the generator"));
            }
        }
    }
    report("parabolic-fixes-generator", cases, failures);

    let sigma: Vec<SparseMat> = (1..k).map(|r| space.sigma(r)).collect::<Result<_, _>>()?;
    let tau: Vec<SparseMat> = (1..k).map(|r| space.tau(r)).collect::<Result<_, _>>()?;
    let minus_one = BigInt::from(-1);
    let two = BigInt::from(2);
    // Columns of the brick subspace vanish in the given full-module matrix.
    let kills_bricks = |mat: &SparseMat| -> Vec<usize> {
        space
            .brick_indices()
            .iter()
            .copied()
            .filter(|&b| !mat.col(b).is_zero())
            .collect()
    };

    // psi_{re} sigma_r v = -2 psi_{re} v.
    let mut failures = Vec::new();
    for r in 1..k {
        let p_re = space.token_matrix(&Token::Psi(r * e))?;
        let diff = p_re.mul(&sigma[r - 1]).add(&p_re.scale(&two));
        for b in kills_bricks(&diff) {
            failures.push(format!("psi-sigma quadratic fails at r={r}, vector {b}"));
        }
    }
    report("psi-sigma-quadratic", k.saturating_sub(1), failures);

    // sigma_r^2 v = -2 sigma_r v.
    let mut failures = Vec::new();
    for r in 1..k {
        let diff = sigma[r - 1]
            .mul(&sigma[r - 1])
            .add(&sigma[r - 1].scale(&two));
        for b in kills_bricks(&diff) {
            failures.push(format!("sigma quadratic fails at r={r}, vector {b}"));
        }
    }
    report("sigma-quadratic", k.saturating_sub(1), failures);

    // sigma_r sigma_{r+1} sigma_r - sigma_{r+1} sigma_r sigma_{r+1}
    //   - sigma_r + sigma_{r+1} kills T.
    let mut failures = Vec::new();
    for r in 1..k.saturating_sub(1) {
        let a = &sigma[r - 1];
        let b = &sigma[r];
        let diff = a
            .mul(&b.mul(a))
            .add(&b.mul(&a.mul(b)).scale(&minus_one))
            .add(&a.scale(&minus_one))
            .add(b);
        for w in kills_bricks(&diff) {
            failures.push(format!("sigma braid fails at r={r}, vector {w}"));
        }
    }
    report("sigma-braid", k.saturating_sub(2), failures);

    // tau Coxeter relations on T.
    let mut failures = Vec::new();
    let mut cases = 0;
    let eye = space.restrict(&space.token_matrix(&Token::E(space.idem.clone()))?)?;
    for r in 1..k {
        cases += 1;
        let sq = space.restrict(&tau[r - 1].mul(&tau[r - 1]))?;
        if sq.add(&eye.scale(&minus_one)).is_zero() == false {
            failures.push(format!("tau_{r}^2 is not the identity"));
        }
    }
    for r in 1..k {
        for s in r + 2..k {
            cases += 1;
            let lhs = space.restrict(&tau[r - 1].mul(&tau[s - 1]))?;
            let rhs = space.restrict(&tau[s - 1].mul(&tau[r - 1]))?;
            if lhs.add(&rhs.scale(&minus_one)).is_zero() == false {
                failures.push(format!("tau_{r} tau_{s} do not commute"));
            }
        }
    }
    for r in 1..k.saturating_sub(1) {
        cases += 1;
        let a = &tau[r - 1];
        let b = &tau[r];
        let lhs = space.restrict(&a.mul(&b.mul(a)))?;
        let rhs = space.restrict(&b.mul(&a.mul(b)))?;
        if lhs.add(&rhs.scale(&minus_one)).is_zero() == false {
            failures.push(format!("tau braid fails at r={r}"));
        }
    }
    report("tau-coxeter", cases, failures);

    // {tau_u m : u in D_lambda} is a basis of T; unitriangular against the
    // sigma products, inserted in increasing length order.
    let mut failures = Vec::new();
    let mut reps = min_coset_reps(&space.lambda);
    reps.sort_by_key(|w| (w.length(), w.one_line().to_vec()));
    let mut tau_span = IntLattice::new();
    let mut sigma_span = IntLattice::new();
    for u in &reps {
        let mut tau_vec = m_vec.clone();
        let mut sigma_vec = m_vec.clone();
        for &r in u.preferred_word().iter().rev() {
            tau_vec = tau[r - 1].apply(&tau_vec);
            sigma_vec = sigma[r - 1].apply(&sigma_vec);
        }
        let mut diff = tau_vec.clone();
        diff.add_scaled(&sigma_vec, &minus_one);
        if !sigma_span.contains(&diff) {
            failures.push(format!(
                "tau product at {:?} is not unitriangular over shorter sigma products",
                u.one_line()
            ));
        }
        tau_span.insert(tau_vec);
        sigma_span.insert(sigma_vec);
    }
    if tau_span.rank() != reps.len() {
        failures.push(format!(
            "tau products span rank {} instead of {}",
            tau_span.rank(),
            reps.len()
        ));
    }
    if reps.len() != space.dimension() {
        failures.push(format!(
            "coset count {} differs from brick dimension {}",
            reps.len(),
            space.dimension()
        ));
    }
    report("tau-basis", reps.len(), failures);

    // Closure: every sigma preserves the brick subspace (restrict errors
    // surface as failures rather than panics).
    let mut failures = Vec::new();
    for r in 1..k {
        if space.restrict(&sigma[r - 1]).is_err() {
            failures.push(format!("sigma_{r} leaks outside the brick subspace"));
        }
    }
    report("brick-closure", k.saturating_sub(1), failures);

    Ok(reports)
}

/// Checks that the sign map carries each column sigma to the row sigma at
/// the negated residue, as algebra elements.
pub fn verify_sign_translation(
    start: Residue,
    lambda: &[usize],
    g: &GroundData,
) -> Result<CheckReport, BrickError> {
    let column = brick_space(start, lambda, Orientation::Column, g)?;
    let row = brick_space(g.residue(-start.value()), lambda, Orientation::Row, g)?;
    let mut failures = Vec::new();
    let k = column.k;
    for r in 1..k {
        let lhs = sign_map(&column.sigma_element(r)?, g);
        let rhs = row.sigma_element(r)?;
        if lhs != rhs {
            failures.push(format!("sign of column sigma_{r} differs from row sigma_{r}"));
        }
    }
    Ok(CheckReport {
        name: "sign-translation".to_string(),
        cases: k.saturating_sub(1),
        failures,
    })
}

/// All compositions of k (ordered positive parts).
pub fn compositions_of(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=k {
        for mut rest in compositions_of(k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

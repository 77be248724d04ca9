//! Graded Specht modules, constructed as explicit quotients of row (or
//! column) permutation modules by Garnir elements. The quotient carries a
//! standard-tableau basis with a straightening table, exact integer action
//! matrices, and graded characters; the verification operations check the
//! defining relations, degree formulas, sign twist, duality, and induction
//! factorization as exact identities.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};
use thiserror::Error;

use crate::ground::{GroundData, GroundError, Residue};
use crate::klr::{sign_map, CheckReport, KlrElement, KlrError, Rewriter, Token};
use crate::laurent::LaurentPoly;
use crate::matrix::{SparseMat, SparseVec};
use crate::modules::{
    basis_index_to_tableau, column_permutation_module, induced_graded_dimension,
    row_permutation_module, tableau_to_basis_index, CyclicModule, GradedCharacter, ModuleError,
    ModuleVector,
};
use crate::tableaux::garnir::{garnir_data, garnir_nodes, GarnirData, Orientation};
use crate::tableaux::{
    codegree, content, degree, enumerate, initial_tableaux, residue_sequence,
    tableau_permutations, FillingKind, Multipartition, Node, Tableau, TableauxError,
};

/// Default bound on the permutation-module rank a build will attempt.
pub const DEFAULT_SIZE_CAP: u64 = 200_000;

#[derive(Debug, Error)]
pub enum SpechtError {
    #[error("permutation module would have rank {0}, over the cap {1}")]
    SizeCap(BigInt, u64),
    #[error("tableau shape does not match the module shape")]
    ShapeMismatch,
    #[error("tableau is not standard")]
    NotStandard,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Klr(#[from] KlrError),
    #[error(transparent)]
    Tableaux(#[from] TableauxError),
}

fn inconsistent(msg: impl Into<String>) -> SpechtError {
    SpechtError::Inconsistent(msg.into())
}

/// n! / (p_1! ... p_k!) for a composition of n: the rank of the permutation
/// module with that parabolic, computable without building it.
pub fn multinomial(n: usize, parts: &[usize]) -> BigInt {
    let mut num = BigInt::one();
    for k in 2..=n {
        num *= k;
    }
    for &p in parts {
        for k in 2..=p {
            num /= k;
        }
    }
    num
}

/// The scalar on the brick crossing: -1 on column intertwiners for odd e,
/// +1 otherwise.
fn brick_sign(orientation: Orientation, g: &GroundData) -> BigInt {
    if orientation == Orientation::Column && g.e().rem_euclid(2) == 1 {
        BigInt::from(-1)
    } else {
        BigInt::one()
    }
}

/// Whether entry r+1 sits immediately to the right of entry r.
pub fn right_adjacent(t: &Tableau, r: usize) -> bool {
    let a = t.node_of(r);
    let b = t.node_of(r + 1);
    a.comp == b.comp && a.row == b.row && b.col == a.col + 1
}

/// Whether entry r+1 sits immediately below entry r.
pub fn below_adjacent(t: &Tableau, r: usize) -> bool {
    let a = t.node_of(r);
    let b = t.node_of(r + 1);
    a.comp == b.comp && a.col == b.col && b.row == a.row + 1
}

/// A Garnir element in normal form: the sum over brick coset words of
/// tau-products applied to the monomial of the top tableau. Every summand is
/// homogeneous of the same degree.
pub struct GarnirElement {
    pub data: GarnirData,
    pub element: KlrElement,
    pub degree: i64,
}

/// Builds the Garnir element of a node: sum over the brick coset transversal
/// of tau_u psi_(top) e(initial residues), where tau_r = sigma_r + e(belt
/// residues) and sigma_r is the signed brick crossing.
pub fn garnir_element(
    mu: &Multipartition,
    node: Node,
    orientation: Orientation,
    g: &GroundData,
) -> Result<GarnirElement, SpechtError> {
    let data = garnir_data(mu, &node, orientation, g)?;
    let d = mu.size();
    let (t_row, t_col) = initial_tableaux(mu);
    let initial = match orientation {
        Orientation::Row => t_row,
        Orientation::Column => t_col,
    };
    let idem = residue_sequence(&initial, g);
    let perms = tableau_permutations(&data.top_tableau);
    let w_top = match orientation {
        Orientation::Row => perms.0,
        Orientation::Column => perms.1,
    };
    if !w_top.is_fully_commutative() {
        return Err(inconsistent("top tableau permutation must be fully commutative"));
    }
    let base = KlrElement::monomial(&w_top.preferred_word(), &vec![0; d], &idem, BigInt::one())?;
    let rewriter = Rewriter::new(g);
    let sign = brick_sign(orientation, g);
    let mut total = KlrElement::zero(d);
    let mut degree = None;
    for word in &data.coset_words {
        if !data.coset_permutation(word, d).is_fully_commutative() {
            return Err(inconsistent("brick coset permutation must be fully commutative"));
        }
        let mut x = base.clone();
        for &r in word.iter().rev() {
            x = tau_multiply(&rewriter, &data, r, &sign, d, &x)?;
        }
        let term_degree = x
            .degree(g)
            .ok_or_else(|| inconsistent("Garnir summand must be homogeneous and nonzero"))?;
        if *degree.get_or_insert(term_degree) != term_degree {
            return Err(inconsistent("Garnir summands must share one degree"));
        }
        total = total.add(&x)?;
    }
    let degree = degree.ok_or_else(|| inconsistent("Garnir element has no summands"))?;
    Ok(GarnirElement { data, element: total, degree })
}

// tau_r x = e(i_A) x + sign * psi_(brick swap r) e(i_A) x, in normal form.
fn tau_multiply(
    rewriter: &Rewriter,
    data: &GarnirData,
    r: usize,
    sign: &BigInt,
    d: usize,
    x: &KlrElement,
) -> Result<KlrElement, SpechtError> {
    let idem = Token::E(data.residue_seq.clone());
    let mut tokens: Vec<Token> = data
        .brick_generator(r, d)
        .preferred_word()
        .iter()
        .map(|&t| Token::Psi(t))
        .collect();
    tokens.push(idem.clone());
    let crossed = rewriter.left_multiply(&tokens, x)?;
    let projected = rewriter.left_multiply(&[idem], x)?;
    Ok(projected.add(&crossed.scaled(sign))?)
}

// tau_r v on the permutation module, through cached action matrices.
fn tau_apply(
    base: &CyclicModule,
    data: &GarnirData,
    r: usize,
    sign: &BigInt,
    v: &ModuleVector,
) -> Result<ModuleVector, ModuleError> {
    let d = base.strand_count();
    let projected = base.act(&Token::E(data.residue_seq.clone()), v)?;
    let mut crossed = projected.clone();
    for &t in data.brick_generator(r, d).preferred_word().iter().rev() {
        crossed = base.act(&Token::Psi(t), &crossed)?;
    }
    let mut out = projected;
    out.add_scaled(&crossed, sign);
    Ok(out)
}

// psi_w v on the permutation module, letters applied right to left.
fn act_word(
    base: &CyclicModule,
    word: &[usize],
    v: &ModuleVector,
) -> Result<ModuleVector, ModuleError> {
    let mut out = v.clone();
    for &t in word.iter().rev() {
        out = base.act(&Token::Psi(t), &out)?;
    }
    Ok(out)
}

// x v on the permutation module, one normal-form monomial at a time.
fn apply_to_base(
    base: &CyclicModule,
    x: &KlrElement,
    v: &ModuleVector,
) -> Result<ModuleVector, ModuleError> {
    let mut out = SparseVec::zero();
    for m in x.iter() {
        let mut u = base.act(&Token::E(m.idem.clone()), v)?;
        for (k, &count) in m.y_exponents.iter().enumerate() {
            for _ in 0..count {
                u = base.act(&Token::Y(k + 1), &u)?;
            }
        }
        for &r in m.word.iter().rev() {
            u = base.act(&Token::Psi(r), &u)?;
        }
        out.add_scaled(&u, &m.coefficient);
    }
    Ok(out)
}

// The image of the Garnir element on the generator, expanded in the basis of
// the permutation module: the sum of tau_u m^(top) over the coset
// transversal. Its leading coefficient at the Garnir tableau is 1 and all
// other support is standard, so it yields the expansion of the Garnir
// tableau's image over standard images.
fn garnir_rule(
    base: &CyclicModule,
    ge: &GarnirElement,
    row_module: bool,
    std_of_base: &HashMap<usize, usize>,
) -> Result<(usize, SparseVec), SpechtError> {
    let data = &ge.data;
    let g_index = tableau_to_basis_index(base, &data.garnir_tableau, row_module)?;
    let a_index = tableau_to_basis_index(base, &data.top_tableau, row_module)?;
    let sign = brick_sign(data.orientation, base.ground());
    let mut total = SparseVec::zero();
    for word in &data.coset_words {
        let mut v = SparseVec::unit(a_index);
        for &r in word.iter().rev() {
            v = tau_apply(base, data, r, &sign, &v)?;
        }
        total.add_scaled(&v, &BigInt::one());
    }
    if total.coeff(g_index) != BigInt::one() {
        return Err(inconsistent(format!(
            "Garnir image at {} has leading coefficient {}, expected 1",
            data.node,
            total.coeff(g_index)
        )));
    }
    let mut expansion = SparseVec::zero();
    for (i, c) in total.iter() {
        if i == g_index {
            continue;
        }
        let Some(&s) = std_of_base.get(&i) else {
            return Err(inconsistent(format!(
                "Garnir image at {} meets a non-standard basis element",
                data.node
            )));
        };
        expansion.add_term(s, -c.clone());
    }
    Ok((g_index, expansion))
}

/// A graded Specht module with its standard basis: the quotient of the row
/// (or column) permutation module of the shape by all Garnir elements. The
/// straightening table sends every basis tableau of the permutation module
/// to its image in standard coordinates.
pub struct SpechtModule<'g> {
    g: &'g GroundData,
    shape: Multipartition,
    orientation: Orientation,
    base: CyclicModule<'g>,
    standard: Vec<usize>,
    std_of_base: HashMap<usize, usize>,
    table: Vec<SparseVec>,
    garnir: Vec<GarnirElement>,
    matrices: Mutex<HashMap<Token, SparseMat>>,
}

/// Builds the Specht module under the default size cap.
pub fn build_specht<'g>(
    mu: &Multipartition,
    orientation: Orientation,
    g: &'g GroundData,
) -> Result<SpechtModule<'g>, SpechtError> {
    build_specht_with_cap(mu, orientation, g, DEFAULT_SIZE_CAP)
}

/// Builds the Specht module, refusing shapes whose permutation module rank
/// exceeds the cap. The rank check runs before any heavy work.
pub fn build_specht_with_cap<'g>(
    mu: &Multipartition,
    orientation: Orientation,
    g: &'g GroundData,
    cap: u64,
) -> Result<SpechtModule<'g>, SpechtError> {
    let parts = match orientation {
        Orientation::Row => mu.rows_composition(),
        Orientation::Column => mu.columns_composition(),
    };
    let base_rank = multinomial(mu.size(), &parts);
    if base_rank > BigInt::from(cap) {
        return Err(SpechtError::SizeCap(base_rank, cap));
    }
    let row_module = orientation == Orientation::Row;
    let base = if row_module {
        row_permutation_module(mu, g)?
    } else {
        column_permutation_module(mu, g)?
    };

    let mut standard: Vec<usize> = enumerate(mu, FillingKind::Standard)
        .iter()
        .map(|t| tableau_to_basis_index(&base, t, row_module))
        .collect::<Result<_, _>>()?;
    standard.sort_unstable();
    if standard.windows(2).any(|w| w[0] == w[1]) {
        return Err(inconsistent("standard tableaux must index distinct basis elements"));
    }
    let std_of_base: HashMap<usize, usize> =
        standard.iter().enumerate().map(|(s, &b)| (b, s)).collect();

    let mut garnir = Vec::new();
    let mut rules = Vec::new();
    for node in garnir_nodes(mu, orientation) {
        let ge = garnir_element(mu, node, orientation, g)?;
        rules.push(garnir_rule(&base, &ge, row_module, &std_of_base)?);
        garnir.push(ge);
    }

    // Straightening table over the length-sorted basis. A non-standard index
    // factors length-additively through some Garnir tableau; the difference
    // of psi_w images of the Garnir tableau and its standard expansion lies
    // in the kernel and has all other support strictly below, so the entry
    // solves against already-filled rows.
    let mut table: Vec<SparseVec> = Vec::with_capacity(base.rank());
    for b in 0..base.rank() {
        if let Some(&s) = std_of_base.get(&b) {
            table.push(SparseVec::unit(s));
            continue;
        }
        let w_t = &base.basis()[b].coset_rep;
        let mut hit = None;
        for (g_index, expansion) in &rules {
            let w_g = &base.basis()[*g_index].coset_rep;
            let w = w_t.compose(&w_g.inverse());
            if w.length() + w_g.length() == w_t.length() {
                hit = Some((w, *g_index, expansion));
                break;
            }
        }
        let Some((w, g_index, expansion)) = hit else {
            return Err(inconsistent(format!(
                "no length-additive Garnir factorization for basis element {b}"
            )));
        };
        let word = w.preferred_word();
        let mut kernel = act_word(&base, &word, &SparseVec::unit(g_index))?;
        for (s, c) in expansion.iter() {
            let image = act_word(&base, &word, &SparseVec::unit(standard[s]))?;
            kernel.add_scaled(&image, &-c.clone());
        }
        if kernel.coeff(b) != BigInt::one() {
            return Err(inconsistent(format!(
                "straightening pivot at basis element {b} is {}, expected 1",
                kernel.coeff(b)
            )));
        }
        kernel.add_term(b, BigInt::from(-1));
        let mut entry = SparseVec::zero();
        for (i, c) in kernel.iter() {
            if i >= b {
                return Err(inconsistent(format!(
                    "straightening support at basis element {b} is not strictly lower"
                )));
            }
            entry.add_scaled(&table[i], &-c.clone());
        }
        table.push(entry);
    }

    Ok(SpechtModule {
        g,
        shape: mu.clone(),
        orientation,
        base,
        standard,
        std_of_base,
        table,
        garnir,
        matrices: Mutex::new(HashMap::new()),
    })
}

impl<'g> SpechtModule<'g> {
    pub fn ground(&self) -> &GroundData {
        self.g
    }

    pub fn shape(&self) -> &Multipartition {
        &self.shape
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// The underlying permutation module.
    pub fn base(&self) -> &CyclicModule<'g> {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.standard.len()
    }

    pub fn strand_count(&self) -> usize {
        self.base.strand_count()
    }

    pub fn garnir_elements(&self) -> &[GarnirElement] {
        &self.garnir
    }

    fn row_module(&self) -> bool {
        self.orientation == Orientation::Row
    }

    /// The standard tableau at a standard coordinate.
    pub fn standard_tableau(&self, s: usize) -> Tableau {
        basis_index_to_tableau(&self.base, &self.shape, self.standard[s], self.row_module())
    }

    /// The degree of the basis vector at a standard coordinate.
    pub fn basis_degree(&self, s: usize) -> i64 {
        self.base.basis()[self.standard[s]].degree
    }

    /// The residue sequence of the basis vector at a standard coordinate.
    pub fn basis_residues(&self, s: usize) -> &[Residue] {
        &self.base.basis()[self.standard[s]].residue_seq
    }

    /// The standard coordinate of a standard tableau.
    pub fn standard_coordinate(&self, t: &Tableau) -> Result<usize, SpechtError> {
        if t.shape() != &self.shape {
            return Err(SpechtError::ShapeMismatch);
        }
        let b = tableau_to_basis_index(&self.base, t, self.row_module())?;
        self.std_of_base
            .get(&b)
            .copied()
            .ok_or(SpechtError::NotStandard)
    }

    /// The image of the cyclic generator: the initial tableau's coordinate.
    pub fn generator(&self) -> SparseVec {
        self.project(&self.base.generator())
    }

    /// Projects a permutation-module vector to standard coordinates through
    /// the straightening table.
    pub fn project(&self, v: &ModuleVector) -> SparseVec {
        let mut out = SparseVec::zero();
        for (b, c) in v.iter() {
            out.add_scaled(&self.table[b], c);
        }
        out
    }

    /// The image of a basis tableau of the permutation module (row-strict
    /// for row orientation, column-strict for column) in standard
    /// coordinates.
    pub fn straighten(&self, t: &Tableau) -> Result<SparseVec, SpechtError> {
        if t.shape() != &self.shape {
            return Err(SpechtError::ShapeMismatch);
        }
        let b = tableau_to_basis_index(&self.base, t, self.row_module())?;
        Ok(self.table[b].clone())
    }

    /// The action matrix of a generator on standard coordinates.
    pub fn action_matrix(&self, gen: &Token) -> Result<SparseMat, SpechtError> {
        if let Some(hit) = self.matrices.lock().unwrap().get(gen) {
            return Ok(hit.clone());
        }
        let n = self.rank();
        let mut m = SparseMat::zero(n, n);
        for s in 0..n {
            let image = self.base.act(gen, &SparseVec::unit(self.standard[s]))?;
            m.set_col(s, self.project(&image));
        }
        self.matrices.lock().unwrap().insert(gen.clone(), m.clone());
        Ok(m)
    }

    /// Applies a generator to a vector in standard coordinates.
    pub fn act(&self, gen: &Token, v: &SparseVec) -> Result<SparseVec, SpechtError> {
        Ok(self.action_matrix(gen)?.apply(v))
    }

    /// Applies a normal-form element to a vector in standard coordinates.
    pub fn apply_element(&self, x: &KlrElement, v: &SparseVec) -> Result<SparseVec, SpechtError> {
        let mut out = SparseVec::zero();
        for m in x.iter() {
            let mut u = self.act(&Token::E(m.idem.clone()), v)?;
            for (k, &count) in m.y_exponents.iter().enumerate() {
                for _ in 0..count {
                    u = self.act(&Token::Y(k + 1), &u)?;
                }
            }
            for &r in m.word.iter().rev() {
                u = self.act(&Token::Psi(r), &u)?;
            }
            out.add_scaled(&u, &m.coefficient);
        }
        Ok(out)
    }

    pub fn graded_dimension(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for s in 0..self.rank() {
            p.add_term(self.basis_degree(s), BigInt::one());
        }
        p
    }

    pub fn graded_character(&self) -> GradedCharacter {
        let mut character = GradedCharacter::empty();
        for s in 0..self.rank() {
            character.add(self.basis_degree(s), self.basis_residues(s).to_vec(), 1);
        }
        character
    }

    /// The defect of the shape's content.
    pub fn defect(&self) -> Result<i64, SpechtError> {
        Ok(self.g.defect(&content(&self.shape, self.g))?)
    }

    pub fn to_json(&self) -> Value {
        let basis: Vec<Value> = (0..self.rank())
            .map(|s| {
                json!({
                    "tableau": self.standard_tableau(s).rows(),
                    "degree": self.basis_degree(s),
                    "residues": self.basis_residues(s).iter().map(|i| i.value()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "shape": self.shape.components(),
            "e": self.g.e(),
            "charge": self.g.charge().iter().map(|k| k.value()).collect::<Vec<_>>(),
            "orientation": self.orientation.to_string(),
            "strands": self.strand_count(),
            "rank": self.rank(),
            "graded_dimension": self.graded_dimension().to_json(),
            "basis": basis,
            "garnir_nodes": self.garnir.len(),
        })
    }
}

fn report(name: &str, cases: usize, failures: Vec<String>) -> CheckReport {
    CheckReport {
        name: name.to_string(),
        cases,
        failures,
    }
}

// Defining relations and the cyclotomic relation as exact matrix identities
// on standard coordinates, refined per residue subspace.
fn relation_reports(
    specht: &SpechtModule,
    reports: &mut Vec<CheckReport>,
) -> Result<(), SpechtError> {
    let g = specht.ground();
    let d = specht.strand_count();
    let n = specht.rank();
    let mut cases = 0usize;
    let mut failures = Vec::new();
    let mut seqs: Vec<Vec<Residue>> = (0..n).map(|s| specht.basis_residues(s).to_vec()).collect();
    seqs.sort();
    seqs.dedup();
    let e_mats: Vec<(Vec<Residue>, SparseMat)> = seqs
        .iter()
        .map(|s| Ok((s.clone(), specht.action_matrix(&Token::E(s.clone()))?)))
        .collect::<Result<_, SpechtError>>()?;
    let y: Vec<SparseMat> = (1..=d)
        .map(|r| specht.action_matrix(&Token::Y(r)))
        .collect::<Result<_, _>>()?;
    let p: Vec<SparseMat> = (1..d)
        .map(|r| specht.action_matrix(&Token::Psi(r)))
        .collect::<Result<_, _>>()?;
    let minus_one = BigInt::from(-1);
    let diff = |a: &SparseMat, b: &SparseMat| a.add(&b.scale(&minus_one));
    let check = |ok: bool, cases: &mut usize, failures: &mut Vec<String>, msg: &str| {
        *cases += 1;
        if !ok {
            failures.push(msg.to_string());
        }
    };

    // Idempotents are orthogonal and sum to the identity.
    let mut sum = SparseMat::zero(n, n);
    for (seq, m) in &e_mats {
        for (seq2, m2) in &e_mats {
            let prod = m.mul(m2);
            let ok = if seq == seq2 {
                diff(&prod, m).is_zero()
            } else {
                prod.is_zero()
            };
            check(ok, &mut cases, &mut failures, "idempotent orthogonality");
        }
        sum = sum.add(m);
    }
    check(
        diff(&sum, &SparseMat::identity(n)).is_zero(),
        &mut cases,
        &mut failures,
        "idempotent decomposition of the identity",
    );

    // Idempotent intertwining: psi and y preserve or permute residue
    // subspaces.
    for (seq, e_mat) in &e_mats {
        for r in 1..=d {
            check(
                diff(&y[r - 1].mul(e_mat), &e_mat.mul(&y[r - 1])).is_zero(),
                &mut cases,
                &mut failures,
                "y commutes with idempotents",
            );
        }
        for r in 1..d {
            let mut swapped = seq.clone();
            swapped.swap(r - 1, r);
            let lhs = p[r - 1].mul(e_mat);
            let rhs = match e_mats.iter().find(|(s, _)| *s == swapped) {
                Some((_, m)) => m.mul(&p[r - 1]),
                None => SparseMat::zero(n, n).mul(&p[r - 1]),
            };
            check(
                diff(&lhs, &rhs).is_zero(),
                &mut cases,
                &mut failures,
                "psi intertwines idempotents",
            );
        }
    }

    // Commutations.
    for r in 0..d {
        for s in 0..d {
            check(
                diff(&y[r].mul(&y[s]), &y[s].mul(&y[r])).is_zero(),
                &mut cases,
                &mut failures,
                "y-y commutation",
            );
        }
    }
    for r in 1..d {
        for s in 1..=d {
            if s != r && s != r + 1 {
                check(
                    diff(&p[r - 1].mul(&y[s - 1]), &y[s - 1].mul(&p[r - 1])).is_zero(),
                    &mut cases,
                    &mut failures,
                    "distant psi-y commutation",
                );
            }
        }
        for t in 1..d {
            if t.abs_diff(r) > 1 {
                check(
                    diff(&p[r - 1].mul(&p[t - 1]), &p[t - 1].mul(&p[r - 1])).is_zero(),
                    &mut cases,
                    &mut failures,
                    "distant psi-psi commutation",
                );
            }
        }
    }

    // Dot-crossing straightening and the quadratic relation per residue
    // subspace.
    for r in 1..d {
        let mut delta_sum = SparseMat::zero(n, n);
        for (seq, e_mat) in &e_mats {
            if seq[r - 1] == seq[r] {
                delta_sum = delta_sum.add(e_mat);
            }
        }
        let lhs = p[r - 1].mul(&y[r]).add(&y[r - 1].mul(&p[r - 1]).scale(&minus_one));
        check(
            diff(&lhs, &delta_sum).is_zero(),
            &mut cases,
            &mut failures,
            "psi-y straightening",
        );
        let lhs = y[r].mul(&p[r - 1]).add(&p[r - 1].mul(&y[r - 1]).scale(&minus_one));
        check(
            diff(&lhs, &delta_sum).is_zero(),
            &mut cases,
            &mut failures,
            "y-psi straightening",
        );

        let mut quad = SparseMat::zero(n, n);
        for (seq, e_mat) in &e_mats {
            for (c, ys) in crate::klr::quadratic_coefficients(g, seq, r) {
                let mut m = e_mat.clone();
                for s in ys {
                    m = y[s - 1].mul(&m);
                }
                quad = quad.add(&m.scale(&c));
            }
        }
        check(
            diff(&p[r - 1].mul(&p[r - 1]), &quad).is_zero(),
            &mut cases,
            &mut failures,
            "quadratic relation",
        );
    }

    // Braid relation with correction terms.
    for r in 1..d.saturating_sub(1) {
        let lhs = p[r - 1].mul(&p[r].mul(&p[r - 1]));
        let mut rhs = p[r].mul(&p[r - 1].mul(&p[r]));
        for (seq, e_mat) in &e_mats {
            for (c, ys) in crate::klr::braid_coefficients(g, seq, r) {
                let mut m = e_mat.clone();
                for s in ys {
                    m = y[s - 1].mul(&m);
                }
                rhs = rhs.add(&m.scale(&c));
            }
        }
        check(
            diff(&lhs, &rhs).is_zero(),
            &mut cases,
            &mut failures,
            "braid relation",
        );
    }
    reports.push(report("defining-relations", cases, failures));

    // Cyclotomic relation: y_1 to the weight multiplicity kills each residue
    // subspace.
    let mut cases = 0usize;
    let mut failures = Vec::new();
    if d > 0 {
        let weight = g.weight();
        for (seq, e_mat) in &e_mats {
            let mut m = e_mat.clone();
            for _ in 0..weight.coeff(seq[0]) {
                m = y[0].mul(&m);
            }
            cases += 1;
            if !m.is_zero() {
                failures.push(format!("cyclotomic power at residue {}", seq[0].value()));
            }
        }
    }
    reports.push(report("cyclotomic-relation", cases, failures));
    Ok(())
}

/// Verifies the Specht module of a shape: standard rank, basis degrees
/// against the combinatorial degree (row) or codegree (column), vanishing of
/// Garnir elements through two independent evaluation paths, all defining
/// relations plus the cyclotomic relation as matrix identities, and Bruhat
/// triangularity of the straightening table.
pub fn verify_specht(
    mu: &Multipartition,
    orientation: Orientation,
    g: &GroundData,
) -> Result<Vec<CheckReport>, SpechtError> {
    let specht = build_specht(mu, orientation, g)?;
    let row_module = orientation == Orientation::Row;
    let mut reports = Vec::new();

    let count = enumerate(mu, FillingKind::Standard).len();
    let failures = if specht.rank() == count {
        Vec::new()
    } else {
        vec![format!("rank {} differs from {} standard tableaux", specht.rank(), count)]
    };
    reports.push(report("standard-rank", 1, failures));

    let mut failures = Vec::new();
    for s in 0..specht.rank() {
        let t = specht.standard_tableau(s);
        let expected = if row_module { degree(&t, g)? } else { codegree(&t, g)? };
        if specht.basis_degree(s) != expected {
            failures.push(format!(
                "basis degree {} at coordinate {s}, tableau degree {expected}",
                specht.basis_degree(s)
            ));
        }
        if specht.basis_residues(s) != residue_sequence(&t, g) {
            failures.push(format!("residue sequence mismatch at coordinate {s}"));
        }
    }
    reports.push(report("basis-degrees", specht.rank(), failures));

    // Garnir elements vanish: once through the rewriter's normal form
    // applied on the permutation module, once through tau-products of module
    // action matrices. The two base vectors must also agree.
    let mut cases = 0usize;
    let mut failures = Vec::new();
    for ge in specht.garnir_elements() {
        let via_element = apply_to_base(&specht.base, &ge.element, &specht.base.generator())?;
        let sign = brick_sign(orientation, g);
        let a_index = tableau_to_basis_index(&specht.base, &ge.data.top_tableau, row_module)?;
        let mut via_tau = SparseVec::zero();
        for word in &ge.data.coset_words {
            let mut v = SparseVec::unit(a_index);
            for &r in word.iter().rev() {
                v = tau_apply(&specht.base, &ge.data, r, &sign, &v)?;
            }
            via_tau.add_scaled(&v, &BigInt::one());
        }
        cases += 1;
        let mut agree = via_element.clone();
        agree.add_scaled(&via_tau, &BigInt::from(-1));
        if !agree.is_zero() {
            failures.push(format!("evaluation paths disagree at {}", ge.data.node));
        }
        cases += 1;
        if !specht.project(&via_element).is_zero() {
            failures.push(format!("Garnir image survives at {}", ge.data.node));
        }
        cases += 1;
        if !specht.apply_element(&ge.element, &specht.generator())?.is_zero() {
            failures.push(format!("Garnir element acts nonzero at {}", ge.data.node));
        }
    }
    reports.push(report("garnir-kill", cases, failures));

    relation_reports(&specht, &mut reports)?;

    // Straightening triangularity: every non-standard basis tableau expands
    // over standard ones with Bruhat-smaller coset representatives and the
    // same residue sequence.
    let mut cases = 0usize;
    let mut failures = Vec::new();
    for b in 0..specht.base.rank() {
        if specht.std_of_base.contains_key(&b) {
            continue;
        }
        cases += 1;
        let w_t = &specht.base.basis()[b].coset_rep;
        let seq = &specht.base.basis()[b].residue_seq;
        for (s, _) in specht.table[b].iter() {
            let w_s = &specht.base.basis()[specht.standard[s]].coset_rep;
            if !w_s.bruhat_leq(w_t) {
                failures.push(format!("support above basis element {b} in Bruhat order"));
            }
            if specht.basis_residues(s) != &seq[..] {
                failures.push(format!("support residue mismatch at basis element {b}"));
            }
        }
    }
    reports.push(report("straightening-triangular", cases, failures));

    Ok(reports)
}

/// Verifies the sign twist: conjugating the shape, negating the multicharge,
/// and switching orientation matches degrees with codegrees, negates residue
/// sequences, matches graded characters, and carries each Garnir element to
/// the conjugate node's Garnir element under the sign isomorphism.
pub fn verify_sign_twist(
    mu: &Multipartition,
    g: &GroundData,
) -> Result<Vec<CheckReport>, SpechtError> {
    let gc = g.conjugate();
    let muc = mu.conjugate();
    let mut reports = Vec::new();

    let mut cases = 0usize;
    let mut failures = Vec::new();
    for t in enumerate(mu, FillingKind::Standard) {
        let tc = t.conjugate();
        cases += 1;
        if degree(&t, g)? != codegree(&tc, &gc)? {
            failures.push(format!("degree does not conjugate to codegree"));
        }
        cases += 1;
        let negated: Vec<Residue> = residue_sequence(&t, g)
            .iter()
            .map(|i| gc.residue(-i.value()))
            .collect();
        if residue_sequence(&tc, &gc) != negated {
            failures.push(format!("residue sequence does not negate"));
        }
    }
    reports.push(report("conjugate-degrees", cases, failures));

    let row = build_specht(mu, Orientation::Row, g)?;
    let col = build_specht(&muc, Orientation::Column, &gc)?;
    let failures = if col.graded_character() == row.graded_character().negated_residues(g) {
        Vec::new()
    } else {
        vec!["graded characters differ under residue negation".to_string()]
    };
    reports.push(report("sign-character", 1, failures));

    // The sign map carries each row Garnir element to the conjugate node's
    // column Garnir element, up to the parity of the top tableau's word: the
    // tau factors map on the nose, while each psi letter of the top monomial
    // picks up -1.
    let mut cases = 0usize;
    let mut failures = Vec::new();
    for node in garnir_nodes(mu, Orientation::Row) {
        let ge = garnir_element(mu, node, Orientation::Row, g)?;
        let conjugate_node = node.conjugate(mu.level());
        let gec = garnir_element(&muc, conjugate_node, Orientation::Column, &gc)?;
        cases += 1;
        if gec.data.garnir_tableau != ge.data.garnir_tableau.conjugate()
            || gec.data.top_tableau != ge.data.top_tableau.conjugate()
            || gec.data.k != ge.data.k
        {
            failures.push(format!("Garnir data at {node} does not conjugate to {conjugate_node}"));
        }
        let parity = tableau_permutations(&ge.data.top_tableau).0.length() % 2;
        let scale = if parity == 1 { BigInt::from(-1) } else { BigInt::one() };
        cases += 1;
        if !sign_map(&ge.element, g).sub(&gec.element.scaled(&scale))?.is_zero() {
            failures.push(format!("Garnir element at {node} does not map to {conjugate_node}"));
        }
    }
    reports.push(report("garnir-sign", cases, failures));

    Ok(reports)
}

// The matrix of the dual action of x on the column module's dual basis:
// the transpose of the action of star(x).
fn dual_matrix(
    specht: &SpechtModule,
    rewriter: &Rewriter,
    x: &KlrElement,
) -> Result<SparseMat, SpechtError> {
    let starred = rewriter.star(x)?;
    let n = specht.rank();
    let mut m = SparseMat::zero(n, n);
    for s in 0..n {
        m.set_col(s, specht.apply_element(&starred, &SparseVec::unit(s))?);
    }
    Ok(m.transpose())
}

/// Verifies duality: the graded dimensions of the row and column modules of
/// one shape agree after inverting q and shifting by the defect, characters
/// match termwise, and the dual basis vector of the initial row tableau
/// satisfies the row module's defining relations under the dual action.
pub fn verify_duality(mu: &Multipartition, g: &GroundData) -> Result<Vec<CheckReport>, SpechtError> {
    let row = build_specht(mu, Orientation::Row, g)?;
    let col = build_specht(mu, Orientation::Column, g)?;
    let defect = row.defect()?;
    let mut reports = Vec::new();

    let failures = if row.graded_dimension() == col.graded_dimension().invert_q().shift(defect) {
        Vec::new()
    } else {
        vec!["graded dimension is not defect-shifted self-dual".to_string()]
    };
    reports.push(report("dual-graded-dimension", 1, failures));

    let mut dual = GradedCharacter::empty();
    for (&(deg, ref seq), &mult) in &col.graded_character().terms {
        dual.add(defect - deg, seq.clone(), mult);
    }
    let failures = if dual == row.graded_character() {
        Vec::new()
    } else {
        vec!["dual character does not match".to_string()]
    };
    reports.push(report("dual-character", 1, failures));

    // The dual generator: the functional dual to the initial row tableau's
    // basis vector in the column module.
    let rewriter = Rewriter::new(g);
    let d = col.strand_count();
    let (t_init, _) = initial_tableaux(mu);
    let f = SparseVec::unit(col.standard_coordinate(&t_init)?);
    let idem = residue_sequence(&t_init, g);
    let mut cases = 0usize;
    let mut failures = Vec::new();

    let mut seqs: Vec<Vec<Residue>> = (0..col.rank()).map(|s| col.basis_residues(s).to_vec()).collect();
    seqs.push(idem.clone());
    seqs.sort();
    seqs.dedup();
    for seq in &seqs {
        let image = col.action_matrix(&Token::E(seq.clone()))?.transpose().apply(&f);
        let expected = if *seq == idem { f.clone() } else { SparseVec::zero() };
        let mut delta = image;
        delta.add_scaled(&expected, &BigInt::from(-1));
        cases += 1;
        if !delta.is_zero() {
            failures.push("dual generator has the wrong residue".to_string());
        }
    }
    for r in 1..=d {
        cases += 1;
        if !col.action_matrix(&Token::Y(r))?.transpose().apply(&f).is_zero() {
            failures.push(format!("y_{r} does not kill the dual generator"));
        }
    }
    for r in 1..d {
        if right_adjacent(&t_init, r) {
            cases += 1;
            if !col.action_matrix(&Token::Psi(r))?.transpose().apply(&f).is_zero() {
                failures.push(format!("psi_{r} does not kill the dual generator"));
            }
        }
    }
    for node in garnir_nodes(mu, Orientation::Row) {
        let ge = garnir_element(mu, node, Orientation::Row, g)?;
        cases += 1;
        if !dual_matrix(&col, &rewriter, &ge.element)?.apply(&f).is_zero() {
            failures.push(format!("Garnir element at {node} does not kill the dual generator"));
        }
    }
    cases += 1;
    if defect - codegree(&t_init, g)? != degree(&t_init, g)? {
        failures.push("dual generator degree mismatch".to_string());
    }
    reports.push(report("dual-generator-relations", cases, failures));

    Ok(reports)
}

/// Verifies the induction factorization: the graded dimension of the Specht
/// module over the full multicharge equals the induced product of the
/// components' level-one Specht characters, shifted by the degree offset of
/// the initial tableaux, and specializes at q = 1 to the multinomial count.
pub fn verify_induction(
    mu: &Multipartition,
    g: &GroundData,
) -> Result<Vec<CheckReport>, SpechtError> {
    let row = build_specht(mu, Orientation::Row, g)?;
    let lhs = row.graded_dimension();
    let (t_init, _) = initial_tableaux(mu);
    let mut shift = degree(&t_init, g)?;
    let mut chars = Vec::new();
    let mut sizes = Vec::new();
    let mut std_product = BigInt::one();
    for (m, comp) in mu.components().iter().enumerate() {
        let factor = Multipartition::new(vec![comp.clone()])?;
        if factor.size() == 0 {
            continue;
        }
        let gm = GroundData::new(g.e(), &[g.charge()[m].value()])?;
        let sm = build_specht(&factor, Orientation::Row, &gm)?;
        shift -= degree(&initial_tableaux(&factor).0, &gm)?;
        chars.push(sm.graded_character());
        sizes.push(factor.size());
        std_product *= BigInt::from(enumerate(&factor, FillingKind::Standard).len());
    }
    let refs: Vec<&GradedCharacter> = chars.iter().collect();
    let rhs = induced_graded_dimension(&refs, g).shift(shift);

    let mut reports = Vec::new();
    let failures = if lhs == rhs {
        Vec::new()
    } else {
        vec!["graded dimension does not factor through induction".to_string()]
    };
    reports.push(report("induced-graded-dimension", 1, failures));

    let expected = multinomial(mu.size(), &sizes) * std_product;
    let count = BigInt::from(enumerate(mu, FillingKind::Standard).len());
    let mut failures = Vec::new();
    if lhs.eval_at_one() != expected {
        failures.push("dimension at q=1 differs from the multinomial count".to_string());
    }
    if lhs.eval_at_one() != count {
        failures.push("dimension at q=1 differs from the standard count".to_string());
    }
    reports.push(report("induced-dimension-at-one", 2, failures));

    Ok(reports)
}

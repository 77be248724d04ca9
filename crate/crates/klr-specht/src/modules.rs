//! Cyclic graded modules over R_alpha presented by a single generator z with
//! relations e(j)z = z, y_r z = 0, and psi_t z = 0 for t in a parabolic set:
//! segment and permutation modules, the row and column modules attached to a
//! multipartition, generator actions through the rewriter, and graded
//! dimensions of induced products.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};
use thiserror::Error;

use crate::ground::{GroundData, Residue, RootElement};
use crate::klr::{degree_of, KlrElement, KlrError, KlrMonomial, Rewriter, Token};
use crate::laurent::LaurentPoly;
use crate::matrix::{SparseMat, SparseVec};
use crate::perm::{coset_factor, is_min_coset_rep, min_coset_reps, PermError, Permutation};
use crate::tableaux::{
    codegree, degree, initial_tableaux, residue, residue_sequence, tableau_permutations,
    Multipartition, Node, Tableau, TableauxError,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error("segment length must be nonzero")]
    EmptySegment,
    #[error("tableau is not {0}-strict for this module")]
    NotStrict(&'static str),
    #[error(transparent)]
    Klr(#[from] KlrError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Tableaux(#[from] TableauxError),
}

/// A cyclic presentation: the generator's residue sequence, the psi indices
/// annihilating it, and an overall grading shift. All y's annihilate the
/// generator implicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicPresentation {
    pub generator_residues: Vec<Residue>,
    pub parabolic: Vec<usize>,
    pub grading_shift: i64,
}

impl CyclicPresentation {
    pub fn rank(&self) -> usize {
        self.generator_residues.len()
    }

    /// The root-lattice content: the residue multiset of the generator.
    pub fn content(&self) -> RootElement {
        RootElement::from_pairs(self.generator_residues.iter().map(|&i| (i, 1)))
    }

    // The composition whose internal indices are exactly the parabolic set.
    fn composition(&self) -> Vec<usize> {
        let d = self.rank();
        let mut parts = Vec::new();
        let mut len = 0usize;
        for t in 1..=d {
            len += 1;
            if t == d || !self.parabolic.contains(&t) {
                parts.push(len);
                len = 0;
            }
        }
        parts
    }
}

/// The segment of length |n| starting at residue i: ascending for n > 0,
/// descending for n < 0. Its generator is annihilated by every internal psi.
pub fn segment(i: Residue, n: i64, g: &GroundData) -> Result<CyclicPresentation, ModuleError> {
    if n == 0 {
        return Err(ModuleError::EmptySegment);
    }
    let len = n.unsigned_abs() as usize;
    let step = if n > 0 { 1 } else { -1 };
    let generator_residues = (0..len)
        .map(|k| g.residue_shift(i, step * k as i64))
        .collect();
    Ok(CyclicPresentation {
        generator_residues,
        parabolic: (1..len).collect(),
        grading_shift: 0,
    })
}

/// One basis element psi_w z of a cyclic module: the minimal-length coset
/// representative, the degree of psi_w e(j) plus the module shift, and the
/// residue sequence w acting by place permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub coset_rep: Permutation,
    pub degree: i64,
    pub residue_seq: Vec<Residue>,
}

/// A module vector as sparse integer coordinates over the basis.
pub type ModuleVector = SparseVec;

/// A cyclic graded module with enumerated basis. Immutable after
/// construction; expansions and action matrices are cached internally.
pub struct CyclicModule<'g> {
    g: &'g GroundData,
    presentation: CyclicPresentation,
    composition: Vec<usize>,
    basis: Vec<BasisElement>,
    index: HashMap<Vec<usize>, usize>,
    rewriter: Rewriter<'g>,
    expansions: Mutex<HashMap<Vec<usize>, SparseVec>>,
    matrices: Mutex<HashMap<Token, SparseMat>>,
}

/// Concatenates the segments into one presentation and enumerates the basis
/// over minimal coset representatives of the segment-length composition.
pub fn permutation_module<'g>(
    segments: &[CyclicPresentation],
    shift: i64,
    g: &'g GroundData,
) -> CyclicModule<'g> {
    let mut generator_residues = Vec::new();
    let mut parabolic = Vec::new();
    for seg in segments {
        let offset = generator_residues.len();
        parabolic.extend(seg.parabolic.iter().map(|t| t + offset));
        generator_residues.extend(seg.generator_residues.iter().copied());
    }
    CyclicModule::new(
        CyclicPresentation {
            generator_residues,
            parabolic,
            grading_shift: shift,
        },
        g,
    )
}

/// The row permutation module of a multipartition: one ascending segment per
/// row in row-reading order, shifted by the degree of the row-reading
/// tableau.
pub fn row_permutation_module<'g>(
    mu: &Multipartition,
    g: &'g GroundData,
) -> Result<CyclicModule<'g>, ModuleError> {
    let (t_row, _) = initial_tableaux(mu);
    let shift = degree(&t_row, g)?;
    let mut segments = Vec::new();
    for (m, comp) in mu.components().iter().enumerate() {
        for (a, &len) in comp.iter().enumerate() {
            if len > 0 {
                let start = residue(&Node::new(a + 1, 1, m + 1), g);
                segments.push(segment(start, len as i64, g)?);
            }
        }
    }
    let module = permutation_module(&segments, shift, g);
    debug_assert_eq!(
        module.presentation.generator_residues,
        residue_sequence(&t_row, g)
    );
    Ok(module)
}

/// The column permutation module: one descending segment per column, taken
/// component by component from the last component up, shifted by the
/// codegree of the column-reading tableau.
pub fn column_permutation_module<'g>(
    mu: &Multipartition,
    g: &'g GroundData,
) -> Result<CyclicModule<'g>, ModuleError> {
    let (_, t_col) = initial_tableaux(mu);
    let shift = codegree(&t_col, g)?;
    let mut segments = Vec::new();
    for (m, comp) in mu.components().iter().enumerate().rev() {
        let width = comp.first().copied().unwrap_or(0);
        for b in 1..=width {
            let len = comp.iter().filter(|&&row| row >= b).count();
            if len > 0 {
                let start = residue(&Node::new(1, b, m + 1), g);
                segments.push(segment(start, -(len as i64), g)?);
            }
        }
    }
    let module = permutation_module(&segments, shift, g);
    debug_assert_eq!(
        module.presentation.generator_residues,
        residue_sequence(&t_col, g)
    );
    Ok(module)
}

impl<'g> CyclicModule<'g> {
    pub fn new(presentation: CyclicPresentation, g: &'g GroundData) -> Self {
        let d = presentation.rank();
        let j = presentation.generator_residues.clone();
        let composition = presentation.composition();
        let mut reps = min_coset_reps(&composition);
        reps.sort_by_key(|w| (w.length(), w.one_line().to_vec()));
        let zeros = vec![0u64; d];
        let basis: Vec<BasisElement> = reps
            .into_iter()
            .map(|w| {
                let mon = KlrMonomial {
                    word: w.preferred_word(),
                    y_exponents: zeros.clone(),
                    idem: j.clone(),
                    coefficient: BigInt::one(),
                };
                let degree = degree_of(&mon, g) + presentation.grading_shift;
                let residue_seq = w.apply_to_seq(&j);
                BasisElement {
                    coset_rep: w,
                    degree,
                    residue_seq,
                }
            })
            .collect();
        let index = basis
            .iter()
            .enumerate()
            .map(|(n, b)| (b.coset_rep.one_line().to_vec(), n))
            .collect();
        CyclicModule {
            g,
            presentation,
            composition,
            basis,
            index,
            rewriter: Rewriter::new(g),
            expansions: Mutex::new(HashMap::new()),
            matrices: Mutex::new(HashMap::new()),
        }
    }

    pub fn ground(&self) -> &'g GroundData {
        self.g
    }

    pub fn presentation(&self) -> &CyclicPresentation {
        &self.presentation
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn strand_count(&self) -> usize {
        self.presentation.rank()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    /// The index of the basis element with the given coset representative.
    pub fn index_of(&self, w: &Permutation) -> Option<usize> {
        self.index.get(w.one_line()).copied()
    }

    /// The generator z as a module vector (the identity coset).
    pub fn generator(&self) -> ModuleVector {
        SparseVec::unit(self.index[Permutation::identity(self.strand_count()).one_line()])
    }

    // Expands psi_u z in the basis. For u outside the coset transversal,
    // psi_u e(j) is rewritten through the reduced word (coset)(parabolic):
    // that spelling annihilates z because its rightmost letters are
    // parabolic, so psi_u z equals minus the Bruhat-lower remainder, which
    // expands recursively.
    fn expand_word(&self, u: &Permutation) -> Result<SparseVec, ModuleError> {
        if let Some(hit) = self.expansions.lock().unwrap().get(u.one_line()) {
            return Ok(hit.clone());
        }
        let d = self.strand_count();
        let j = &self.presentation.generator_residues;
        let (coset, parab) = coset_factor(u, &self.composition);
        let result = if parab.is_identity() {
            SparseVec::unit(self.index[coset.one_line()])
        } else {
            let mut word = coset.preferred_word();
            word.extend(parab.preferred_word());
            let mut tokens: Vec<Token> = word.into_iter().map(Token::Psi).collect();
            tokens.push(Token::E(j.clone()));
            let nf = self.rewriter.normal_form_tokens(&tokens, d)?;
            let lead = u.preferred_word();
            let zeros = vec![0u64; d];
            assert!(
                nf.coefficient_of(&lead, &zeros, j).is_one(),
                "split word must stay monic"
            );
            let mut acc = SparseVec::zero();
            for m in nf.iter() {
                if m.word == lead || m.y_exponents.iter().any(|&c| c > 0) {
                    continue;
                }
                let v = Permutation::from_word(&m.word, d)?;
                debug_assert!(v.bruhat_leq(u) && v != *u);
                let part = self.expand_word(&v)?;
                acc.add_scaled(&part, &(-m.coefficient));
            }
            acc
        };
        self.expansions
            .lock()
            .unwrap()
            .insert(u.one_line().to_vec(), result.clone());
        Ok(result)
    }

    // Maps a normalized algebra element (with right idempotent j) to module
    // coordinates: monomials with dots die on z, the rest expand.
    fn project(&self, x: &KlrElement) -> Result<SparseVec, ModuleError> {
        let d = self.strand_count();
        let mut out = SparseVec::zero();
        for m in x.iter() {
            debug_assert_eq!(m.idem, self.presentation.generator_residues);
            if m.y_exponents.iter().any(|&c| c > 0) {
                continue;
            }
            let u = Permutation::from_word(&m.word, d)?;
            out.add_scaled(&self.expand_word(&u)?, &m.coefficient);
        }
        Ok(out)
    }

    /// Acts by a single generator token on a module vector.
    pub fn act(&self, gen: &Token, v: &ModuleVector) -> Result<ModuleVector, ModuleError> {
        let matrix = self.action_matrix(gen)?;
        Ok(matrix.apply(v))
    }

    /// The matrix of a generator token over the basis (columns = images of
    /// basis vectors), cached per token.
    pub fn action_matrix(&self, gen: &Token) -> Result<SparseMat, ModuleError> {
        if let Some(hit) = self.matrices.lock().unwrap().get(gen) {
            return Ok(hit.clone());
        }
        let d = self.strand_count();
        let j = &self.presentation.generator_residues;
        let zeros = vec![0u64; d];
        let n = self.rank();
        let mut matrix = SparseMat::zero(n, n);
        for (b, elt) in self.basis.iter().enumerate() {
            let mon = KlrElement::monomial(
                &elt.coset_rep.preferred_word(),
                &zeros,
                j,
                BigInt::one(),
            )?;
            let image = self
                .rewriter
                .left_multiply(std::slice::from_ref(gen), &mon)?;
            matrix.set_col(b, self.project(&image)?);
        }
        self.matrices
            .lock()
            .unwrap()
            .insert(gen.clone(), matrix.clone());
        Ok(matrix)
    }

    /// The graded dimension: the sum of q^degree over the basis.
    pub fn graded_dimension(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for b in &self.basis {
            p.add_term(b.degree, BigInt::one());
        }
        p
    }

    /// The graded character: multiplicities of (degree, residue sequence)
    /// pairs over the basis.
    pub fn graded_character(&self) -> GradedCharacter {
        let mut terms: BTreeMap<(i64, Vec<Residue>), u64> = BTreeMap::new();
        for b in &self.basis {
            *terms.entry((b.degree, b.residue_seq.clone())).or_insert(0) += 1;
        }
        GradedCharacter { terms }
    }

    pub fn to_json(&self) -> Value {
        let basis: Vec<Value> = self
            .basis
            .iter()
            .map(|b| {
                json!({
                    "rep": b.coset_rep.one_line(),
                    "degree": b.degree,
                    "residues": b.residue_seq.iter().map(|i| i.value()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "basis": basis, "gradeddim": self.graded_dimension().to_json() })
    }
}

/// Row-strict tableau to basis index in the row module (and column-strict in
/// the column module): the coset representative carrying the initial tableau
/// to the given one.
pub fn tableau_to_basis_index(
    module: &CyclicModule,
    t: &Tableau,
    row_module: bool,
) -> Result<usize, ModuleError> {
    let (w_row, w_col) = tableau_permutations(t);
    let w = if row_module { w_row } else { w_col };
    if !is_min_coset_rep(&w, &module.composition) {
        return Err(ModuleError::NotStrict(if row_module { "row" } else { "column" }));
    }
    module
        .index_of(&w)
        .ok_or(ModuleError::NotStrict("shape"))
}

/// The tableau indexed by a basis element: the coset representative applied
/// to the initial row-reading (or column-reading) tableau.
pub fn basis_index_to_tableau(
    module: &CyclicModule,
    mu: &Multipartition,
    b: usize,
    row_module: bool,
) -> Tableau {
    let (t_row, t_col) = initial_tableaux(mu);
    let initial = if row_module { t_row } else { t_col };
    initial.permute(&module.basis[b].coset_rep)
}

/// A multiset of (degree, residue sequence) pairs: the shape of a graded
/// module refined by idempotent decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCharacter {
    pub terms: BTreeMap<(i64, Vec<Residue>), u64>,
}

impl GradedCharacter {
    pub fn empty() -> Self {
        GradedCharacter {
            terms: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, degree: i64, residues: Vec<Residue>, mult: u64) {
        *self.terms.entry((degree, residues)).or_insert(0) += mult;
    }

    /// Total multiplicity: the ungraded rank.
    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn graded_dimension(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (&(deg, _), &mult) in &self.terms {
            p.add_term(deg, BigInt::from(mult));
        }
        p
    }

    /// Shifts every degree by n.
    pub fn shifted(&self, n: i64) -> GradedCharacter {
        GradedCharacter {
            terms: self
                .terms
                .iter()
                .map(|((deg, seq), &mult)| ((deg + n, seq.clone()), mult))
                .collect(),
        }
    }

    /// Negates every residue entry, the character image under the sign map.
    pub fn negated_residues(&self, g: &GroundData) -> GradedCharacter {
        GradedCharacter {
            terms: self
                .terms
                .iter()
                .map(|((deg, seq), &mult)| {
                    let flipped = seq.iter().map(|i| g.residue(-i.value())).collect();
                    ((*deg, flipped), mult)
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|((deg, seq), mult)| {
                json!({
                    "degree": deg,
                    "residues": seq.iter().map(|i| i.value()).collect::<Vec<_>>(),
                    "multiplicity": mult,
                })
            })
            .collect();
        json!(terms)
    }

    /// CSV rows `degree,residues,multiplicity` with the residue sequence
    /// rendered as a dot-separated string.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,residues,multiplicity\n");
        for ((deg, seq), mult) in &self.terms {
            let residues: Vec<String> = seq.iter().map(|i| i.value().to_string()).collect();
            out.push_str(&format!("{},{},{}\n", deg, residues.join("."), mult));
        }
        out
    }
}

/// The graded dimension of the induced product of modules given by their
/// graded characters: a sum over minimal coset representatives of the
/// block-length composition and over basis tuples, of q to the crossing
/// degree at the concatenated residue sequence plus the tuple degree.
pub fn induced_graded_dimension(factors: &[&GradedCharacter], g: &GroundData) -> LaurentPoly {
    // Tuple iteration over factor terms; block lengths are read off the
    // residue sequences (constant within each factor).
    let mut result = LaurentPoly::zero();
    let terms: Vec<Vec<(&(i64, Vec<Residue>), &u64)>> =
        factors.iter().map(|c| c.terms.iter().collect()).collect();
    if terms.iter().any(|t| t.is_empty()) {
        return result;
    }
    let blocks: Vec<usize> = terms.iter().map(|t| t[0].0 .1.len()).collect();
    let reps = min_coset_reps(&blocks);
    let mut choice = vec![0usize; terms.len()];
    loop {
        let mut concat: Vec<Residue> = Vec::new();
        let mut base = 0i64;
        let mut mult = BigInt::one();
        for (f, &c) in choice.iter().enumerate() {
            let ((deg, seq), m) = terms[f][c];
            concat.extend(seq.iter().copied());
            base += deg;
            mult *= BigInt::from(*m);
        }
        let zeros = vec![0u64; concat.len()];
        for w in &reps {
            let mon = KlrMonomial {
                word: w.preferred_word(),
                y_exponents: zeros.clone(),
                idem: concat.clone(),
                coefficient: BigInt::one(),
            };
            result.add_term(base + degree_of(&mon, g), mult.clone());
        }
        // Odometer over the factor terms.
        let mut f = 0;
        loop {
            if f == choice.len() {
                return result;
            }
            choice[f] += 1;
            if choice[f] < terms[f].len() {
                break;
            }
            choice[f] = 0;
            f += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::klr::{Strategy, DEFAULT_BUDGET};
    use num_traits::Zero;
    use crate::tableaux::{all_shapes, enumerate, parse_shape, FillingKind};

    fn ground(e: i64, charge: &[i64]) -> GroundData {
        GroundData::new(e, charge).unwrap()
    }

    #[test]
    fn segment_residue_runs() {
        let g = ground(3, &[0]);
        let asc = segment(g.residue(0), 3, &g).unwrap();
        assert_eq!(
            asc.generator_residues,
            vec![g.residue(0), g.residue(1), g.residue(2)]
        );
        assert_eq!(asc.parabolic, vec![1, 2]);
        let desc = segment(g.residue(0), -3, &g).unwrap();
        assert_eq!(
            desc.generator_residues,
            vec![g.residue(0), g.residue(2), g.residue(1)]
        );
        let single = segment(g.residue(1), 1, &g).unwrap();
        assert_eq!(single.generator_residues, vec![g.residue(1)]);
        assert!(single.parabolic.is_empty());
        assert_eq!(segment(g.residue(0), 0, &g), Err(ModuleError::EmptySegment));
    }

    #[test]
    fn single_segment_module_is_rank_one() {
        let g = ground(3, &[0]);
        let seg = segment(g.residue(0), 3, &g).unwrap();
        let m = permutation_module(&[seg], 0, &g);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.graded_dimension(), LaurentPoly::one());
    }

    #[test]
    fn row_module_ranks_match_row_strict_counts() {
        for e in [0, 2, 3] {
            let g1 = ground(e, &[0]);
            let g2 = ground(e, &[0, 1]);
            for (g, level) in [(&g1, 1), (&g2, 2)] {
                for mu in all_shapes(4, level) {
                    let m = row_permutation_module(&mu, g).unwrap();
                    let strict = enumerate(&mu, FillingKind::RowStrict);
                    assert_eq!(m.rank(), strict.len(), "mu = {mu}, e = {e}");
                    let mc = column_permutation_module(&mu, g).unwrap();
                    let cstrict = enumerate(&mu, FillingKind::ColumnStrict);
                    assert_eq!(mc.rank(), cstrict.len(), "mu = {mu}, e = {e}");
                }
            }
        }
    }

    #[test]
    fn row_module_example_rank_three() {
        let g = ground(2, &[0]);
        let mu = parse_shape("2,1").unwrap();
        let m = row_permutation_module(&mu, &g).unwrap();
        assert_eq!(m.rank(), 3);
        // Segments (0,1),(1): generator residues 0,1,1.
        assert_eq!(
            m.presentation().generator_residues,
            vec![g.residue(0), g.residue(1), g.residue(1)]
        );
        assert_eq!(m.presentation().parabolic, vec![1]);
    }

    #[test]
    fn generator_annihilators_are_exact() {
        let g = ground(2, &[0, 1]);
        let mu = parse_shape("2,1|2").unwrap();
        for module in [
            row_permutation_module(&mu, &g).unwrap(),
            column_permutation_module(&mu, &g).unwrap(),
        ] {
            let d = module.strand_count();
            let z = module.generator();
            for r in 1..=d {
                let out = module.act(&Token::Y(r), &z).unwrap();
                assert!(out.is_zero(), "y_{r} must kill the generator");
            }
            for t in 1..d {
                let out = module.act(&Token::Psi(t), &z).unwrap();
                let parabolic = module.presentation().parabolic.contains(&t);
                assert_eq!(
                    out.is_zero(),
                    parabolic,
                    "psi_{t} annihilation must match the parabolic set"
                );
            }
            let j = module.presentation().generator_residues.clone();
            let fixed = module.act(&Token::E(j), &z).unwrap();
            assert_eq!(fixed, z);
        }
    }

    #[test]
    fn idempotent_matrices_decompose_identity() {
        let g = ground(3, &[0]);
        let mu = parse_shape("2,2").unwrap();
        let module = row_permutation_module(&mu, &g).unwrap();
        let mut seqs: Vec<Vec<Residue>> = module.basis().iter().map(|b| b.residue_seq.clone()).collect();
        seqs.sort();
        seqs.dedup();
        let n = module.rank();
        let mut sum = SparseMat::zero(n, n);
        for seq in &seqs {
            let m = module.action_matrix(&Token::E(seq.clone())).unwrap();
            // Diagonal 0/1 with support on matching residue sequences.
            for b in 0..n {
                let expected = if &module.basis()[b].residue_seq == seq {
                    BigInt::one()
                } else {
                    BigInt::zero()
                };
                assert_eq!(m.entry(b, b), expected);
                assert_eq!(m.col(b).support_len(), usize::from(!expected.is_zero()));
            }
            sum = sum.add(&m);
        }
        // The idempotent matrices sum to the identity.
        for b in 0..n {
            assert_eq!(sum.col(b).coeff(b), BigInt::one());
            assert_eq!(sum.col(b).support_len(), 1);
        }
    }

    // Full relation soundness on action matrices: every defining relation
    // holds as an exact matrix identity, with idempotent matrices refining
    // the checks per residue subspace.
    fn assert_relations_hold(module: &CyclicModule) {
        let d = module.strand_count();
        let n = module.rank();
        let mut seqs: Vec<Vec<Residue>> = module.basis().iter().map(|b| b.residue_seq.clone()).collect();
        seqs.sort();
        seqs.dedup();
        let e_mats: Vec<(Vec<Residue>, SparseMat)> = seqs
            .iter()
            .map(|s| (s.clone(), module.action_matrix(&Token::E(s.clone())).unwrap()))
            .collect();
        let y: Vec<SparseMat> = (1..=d)
            .map(|r| module.action_matrix(&Token::Y(r)).unwrap())
            .collect();
        let p: Vec<SparseMat> = (1..d)
            .map(|r| module.action_matrix(&Token::Psi(r)).unwrap())
            .collect();
        let minus_one = BigInt::from(-1);
        let diff = |a: &SparseMat, b: &SparseMat| a.add(&b.scale(&minus_one));
        // y's commute; distant generators commute.
        for r in 0..d {
            for s in 0..d {
                assert!(diff(&y[r].mul(&y[s]), &y[s].mul(&y[r])).is_zero());
            }
        }
        for r in 1..=d.saturating_sub(1) {
            for s in 1..=d {
                if s != r && s != r + 1 {
                    assert!(diff(&p[r - 1].mul(&y[s - 1]), &y[s - 1].mul(&p[r - 1])).is_zero());
                }
            }
            for t in 1..d {
                if t.abs_diff(r) > 1 {
                    assert!(diff(&p[r - 1].mul(&p[t - 1]), &p[t - 1].mul(&p[r - 1])).is_zero());
                }
            }
        }
        let g = module.ground();
        // Dot-crossing straightening and the quadratic and braid relations,
        // checked against each residue subspace.
        for r in 1..d {
            let mut delta_sum = SparseMat::zero(n, n);
            for (seq, e_mat) in &e_mats {
                if seq[r - 1] == seq[r] {
                    delta_sum = delta_sum.add(e_mat);
                }
            }
            let lhs = p[r - 1].mul(&y[r]).add(&y[r - 1].mul(&p[r - 1]).scale(&minus_one));
            assert!(diff(&lhs, &delta_sum).is_zero(), "psi-y straightening at {r}");
            let lhs = y[r].mul(&p[r - 1]).add(&p[r - 1].mul(&y[r - 1]).scale(&minus_one));
            assert!(diff(&lhs, &delta_sum).is_zero(), "y-psi straightening at {r}");

            let mut quad = SparseMat::zero(n, n);
            for (seq, e_mat) in &e_mats {
                let terms = crate::klr::quadratic_coefficients(g, seq, r);
                for (c, ys) in terms {
                    let mut m = e_mat.clone();
                    for s in ys {
                        m = y[s - 1].mul(&m);
                    }
                    quad = quad.add(&m.scale(&c));
                }
            }
            assert!(
                diff(&p[r - 1].mul(&p[r - 1]), &quad).is_zero(),
                "quadratic relation at {r}"
            );
        }
        for r in 1..d.saturating_sub(1) {
            let lhs = p[r - 1].mul(&p[r].mul(&p[r - 1]));
            let mut rhs = p[r].mul(&p[r - 1].mul(&p[r]));
            for (seq, e_mat) in &e_mats {
                let terms = crate::klr::braid_coefficients(g, seq, r);
                for (c, ys) in terms {
                    let mut m = e_mat.clone();
                    for s in ys {
                        m = y[s - 1].mul(&m);
                    }
                    rhs = rhs.add(&m.scale(&c));
                }
            }
            assert!(diff(&lhs, &rhs).is_zero(), "braid relation at {r}");
        }
    }

    #[test]
    fn action_matrices_satisfy_all_relations() {
        for e in [0, 2, 3] {
            let g1 = ground(e, &[0]);
            let g2 = ground(e, &[0, 1]);
            for (g, level) in [(&g1, 1usize), (&g2, 2)] {
                for mu in all_shapes(4, level) {
                    if mu.size() < 2 {
                        continue;
                    }
                    let module = row_permutation_module(&mu, g).unwrap();
                    assert_relations_hold(&module);
                    let module = column_permutation_module(&mu, g).unwrap();
                    assert_relations_hold(&module);
                }
            }
        }
    }

    #[test]
    fn actions_are_degree_homogeneous() {
        let g = ground(2, &[0, 1]);
        for mu in all_shapes(4, 2) {
            let module = row_permutation_module(&mu, &g).unwrap();
            let d = module.strand_count();
            for b in 0..module.rank() {
                let v = SparseVec::unit(b);
                let deg = module.basis()[b].degree;
                let seq = &module.basis()[b].residue_seq.clone();
                for r in 1..=d {
                    let out = module.act(&Token::Y(r), &v).unwrap();
                    for (t, _) in out.iter() {
                        assert_eq!(module.basis()[t].degree, deg + 2);
                    }
                }
                for r in 1..d {
                    let gen_deg = -g.cartan_pairing(seq[r - 1], seq[r]);
                    let out = module.act(&Token::Psi(r), &v).unwrap();
                    for (t, _) in out.iter() {
                        assert_eq!(module.basis()[t].degree, deg + gen_deg);
                    }
                }
            }
        }
    }

    #[test]
    fn expansion_agrees_across_strategies() {
        // The same module built with the opposite rewriting strategy gives
        // identical action matrices.
        let g = ground(2, &[0]);
        let mu = parse_shape("2,2,1").unwrap();
        let row = row_permutation_module(&mu, &g).unwrap();
        let mut alt = row_permutation_module(&mu, &g).unwrap();
        alt.rewriter = Rewriter::with_options(&g, Strategy::LeftFold, DEFAULT_BUDGET);
        let d = row.strand_count();
        for r in 1..d {
            let a = row.action_matrix(&Token::Psi(r)).unwrap();
            let b = alt.action_matrix(&Token::Psi(r)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn tableau_maps_are_mutually_inverse() {
        let g = ground(3, &[0, 2]);
        let mu = parse_shape("2,1|2").unwrap();
        let row = row_permutation_module(&mu, &g).unwrap();
        let strict = enumerate(&mu, FillingKind::RowStrict);
        assert_eq!(row.rank(), strict.len());
        for t in &strict {
            let b = tableau_to_basis_index(&row, t, true).unwrap();
            let back = basis_index_to_tableau(&row, &mu, b, true);
            assert_eq!(&back, t);
        }
        let col = column_permutation_module(&mu, &g).unwrap();
        for t in &enumerate(&mu, FillingKind::ColumnStrict) {
            let b = tableau_to_basis_index(&col, t, false).unwrap();
            let back = basis_index_to_tableau(&col, &mu, b, false);
            assert_eq!(&back, t);
        }
        // A merely row-strict tableau is rejected by the column module.
        let column_strict = enumerate(&mu, FillingKind::ColumnStrict);
        let not_col = strict.iter().find(|t| !column_strict.contains(t));
        if let Some(t) = not_col {
            assert!(tableau_to_basis_index(&col, t, false).is_err());
        }
    }

    #[test]
    fn graded_dimension_tracks_basis_degrees() {
        let g = ground(2, &[0]);
        let mu = parse_shape("2,1").unwrap();
        let module = row_permutation_module(&mu, &g).unwrap();
        let p = module.graded_dimension();
        assert_eq!(p.eval_at_one(), BigInt::from(module.rank()));
        let character = module.graded_character();
        assert_eq!(character.total() as usize, module.rank());
        assert_eq!(character.graded_dimension(), p);
    }

    #[test]
    fn induced_dimension_of_two_points() {
        // Two rank-1 factors over one strand each, equal residues, e=2:
        // coset reps {1, s_1}, deg psi_1 e(i,i) = -2: dimension q^0 + q^-2.
        let g = ground(2, &[0]);
        let mut a = GradedCharacter::empty();
        a.add(0, vec![g.residue(0)], 1);
        let p = induced_graded_dimension(&[&a, &a], &g);
        let mut expected = LaurentPoly::monomial(0, BigInt::one());
        expected.add_term(-2, BigInt::one());
        assert_eq!(p, expected);
        // A single factor passes through unchanged.
        let q = induced_graded_dimension(&[&a], &g);
        assert_eq!(q, LaurentPoly::one());
    }

    #[test]
    fn induced_dimension_at_one_is_multinomial() {
        let g = ground(3, &[0]);
        let mu1 = parse_shape("2").unwrap();
        let mu2 = parse_shape("1,1").unwrap();
        let m1 = row_permutation_module(&mu1, &g).unwrap();
        let m2 = row_permutation_module(&mu2, &g).unwrap();
        let c1 = m1.graded_character();
        let c2 = m2.graded_character();
        let p = induced_graded_dimension(&[&c1, &c2], &g);
        // multinomial(4; 2,2) = 6 times the product of ranks.
        let expected = BigInt::from(6) * BigInt::from(m1.rank()) * BigInt::from(m2.rank());
        assert_eq!(p.eval_at_one(), expected);
    }

    #[test]
    fn module_json_shape() {
        let g = ground(2, &[0]);
        let mu = parse_shape("2,1").unwrap();
        let module = row_permutation_module(&mu, &g).unwrap();
        let v = module.to_json();
        assert!(v["basis"].is_array());
        assert_eq!(v["basis"].as_array().unwrap().len(), 3);
        assert!(v["gradeddim"].is_object());
    }
}

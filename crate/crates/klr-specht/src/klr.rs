//! Exact rewriting engine for the quiver Hecke algebra R_alpha: elements are
//! kept in normal form on the basis of monomials psi_w y^m e(i), where each
//! permutation w carries its preferred reduced word. Products of generator
//! tokens are folded into normal form by applying the defining relations; the
//! fold direction is selectable so that independent reduction strategies can
//! be compared on the same input.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::ground::{GroundData, Residue};
use crate::perm::{
    apply_move, moves_making_last, moves_to_preferred, MoveKind, PermError, Permutation, WordMove,
};

/// Default limit on rule applications per public rewriter call.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Errors from element construction and rewriting.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum KlrError {
    #[error("element has rank {found}, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("term has no idempotent to anchor its residue content")]
    NoIdempotent,
    #[error("cannot add terms with different residue content")]
    ContentMismatch,
    #[error("word {0:?} is not a preferred reduced word")]
    NotPreferred(Vec<usize>),
    #[error("rewrite budget of {limit} rule applications exhausted")]
    BudgetExhausted { limit: u64 },
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A generator token; products of tokens present elements for rewriting.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Token {
    /// Idempotent e(i).
    E(Vec<Residue>),
    /// Polynomial generator y_r (1-based).
    Y(usize),
    /// Crossing psi_r (1-based).
    Psi(usize),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::E(i) => {
                write!(f, "e(")?;
                for (k, v) in i.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", v.value())?;
                }
                write!(f, ")")
            }
            Token::Y(r) => write!(f, "y{r}"),
            Token::Psi(r) => write!(f, "p{r}"),
        }
    }
}

/// A sum of token products with integer coefficients, the raw input to
/// normalization.
pub type RawElement = Vec<(BigInt, Vec<Token>)>;

/// A basis monomial psi_w y^m e(i) with coefficient: `word` is the preferred
/// reduced word of w, `y_exponents[r-1]` the exponent of y_r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KlrMonomial {
    pub word: Vec<usize>,
    pub y_exponents: Vec<u64>,
    pub idem: Vec<Residue>,
    pub coefficient: BigInt,
}

impl KlrMonomial {
    /// The token spelling psi-letters, then y's, then the idempotent.
    pub fn tokens(&self) -> Vec<Token> {
        let mut toks: Vec<Token> = self.word.iter().map(|&r| Token::Psi(r)).collect();
        for (k, &m) in self.y_exponents.iter().enumerate() {
            for _ in 0..m {
                toks.push(Token::Y(k + 1));
            }
        }
        toks.push(Token::E(self.idem.clone()));
        toks
    }
}

/// The degree of a basis monomial: 2 per y plus, letter by letter along the
/// word, the degree -a_{i_r, i_{r+1}} of each crossing at its own residue
/// sequence.
pub fn degree_of(m: &KlrMonomial, g: &GroundData) -> i64 {
    raw_degree(&m.word, &m.y_exponents, &m.idem, g)
}

fn raw_degree(word: &[usize], ys: &[u64], idem: &[Residue], g: &GroundData) -> i64 {
    let mut deg: i64 = ys.iter().map(|&m| 2 * m as i64).sum();
    let mut seq = idem.to_vec();
    for &r in word.iter().rev() {
        deg -= g.cartan_pairing(seq[r - 1], seq[r]);
        seq.swap(r - 1, r);
    }
    deg
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct MonKey {
    word: Vec<usize>,
    ys: Vec<u64>,
    idem: Vec<Residue>,
}

/// An element of R_alpha in normal form: a finite integer combination of
/// basis monomials, all of the same rank and residue content. Zero is the
/// empty combination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KlrElement {
    d: usize,
    terms: BTreeMap<MonKey, BigInt>,
}

impl KlrElement {
    pub fn zero(d: usize) -> Self {
        KlrElement {
            d,
            terms: BTreeMap::new(),
        }
    }

    /// The idempotent e(i) as an element.
    pub fn idempotent(i: &[Residue]) -> Self {
        let key = MonKey {
            word: Vec::new(),
            ys: vec![0; i.len()],
            idem: i.to_vec(),
        };
        let mut terms = BTreeMap::new();
        terms.insert(key, BigInt::one());
        KlrElement { d: i.len(), terms }
    }

    /// A single basis monomial; the word must be a preferred reduced word.
    pub fn monomial(
        word: &[usize],
        ys: &[u64],
        idem: &[Residue],
        coefficient: BigInt,
    ) -> Result<Self, KlrError> {
        let d = idem.len();
        if ys.len() != d {
            return Err(KlrError::RankMismatch {
                expected: d,
                found: ys.len(),
            });
        }
        let w = Permutation::from_word(word, d.max(1))?;
        if w.preferred_word() != word {
            return Err(KlrError::NotPreferred(word.to_vec()));
        }
        let mut el = KlrElement::zero(d);
        if !coefficient.is_zero() {
            el.terms.insert(
                MonKey {
                    word: word.to_vec(),
                    ys: ys.to_vec(),
                    idem: idem.to_vec(),
                },
                coefficient,
            );
        }
        Ok(el)
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = KlrMonomial> + '_ {
        self.terms.iter().map(|(k, c)| KlrMonomial {
            word: k.word.clone(),
            y_exponents: k.ys.clone(),
            idem: k.idem.clone(),
            coefficient: c.clone(),
        })
    }

    /// The coefficient of the basis monomial with the given data.
    pub fn coefficient_of(&self, word: &[usize], ys: &[u64], idem: &[Residue]) -> BigInt {
        let key = MonKey {
            word: word.to_vec(),
            ys: ys.to_vec(),
            idem: idem.to_vec(),
        };
        self.terms.get(&key).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Sorted residue multiset shared by all monomials; None when zero.
    pub fn content(&self) -> Option<Vec<Residue>> {
        self.terms.keys().next().map(|k| {
            let mut c = k.idem.clone();
            c.sort();
            c
        })
    }

    /// The common degree of all monomials; None when zero or inhomogeneous.
    pub fn degree(&self, g: &GroundData) -> Option<i64> {
        let mut deg = None;
        for (k, _) in &self.terms {
            let d = raw_degree(&k.word, &k.ys, &k.idem, g);
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn is_homogeneous(&self, g: &GroundData) -> bool {
        self.is_zero() || self.degree(g).is_some()
    }

    fn insert(&mut self, key: MonKey, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn merge_scaled(&mut self, other: &KlrElement, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.insert(k.clone(), v * c);
        }
    }

    fn merge(&mut self, other: KlrElement) {
        for (k, v) in other.terms {
            self.insert(k, v);
        }
    }

    pub fn scaled(&self, c: &BigInt) -> KlrElement {
        let mut out = KlrElement::zero(self.d);
        out.merge_scaled(self, c);
        out
    }

    pub fn negated(&self) -> KlrElement {
        self.scaled(&BigInt::from(-1))
    }

    fn check_compatible(&self, other: &KlrElement) -> Result<(), KlrError> {
        if self.d != other.d {
            return Err(KlrError::RankMismatch {
                expected: self.d,
                found: other.d,
            });
        }
        if let (Some(a), Some(b)) = (self.content(), other.content()) {
            if a != b {
                return Err(KlrError::ContentMismatch);
            }
        }
        Ok(())
    }

    /// Sum within a single block: ranks and residue contents must agree.
    pub fn add(&self, other: &KlrElement) -> Result<KlrElement, KlrError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.merge(other.clone());
        Ok(out)
    }

    pub fn sub(&self, other: &KlrElement) -> Result<KlrElement, KlrError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.merge_scaled(other, &BigInt::from(-1));
        Ok(out)
    }

    /// Appends y exponents on the right of every monomial (valid because
    /// y^m commutes with the right idempotent).
    fn with_ys_added(&self, extra: &[u64]) -> KlrElement {
        if extra.iter().all(|&m| m == 0) {
            return self.clone();
        }
        let mut out = KlrElement::zero(self.d);
        for (k, c) in &self.terms {
            let mut key = k.clone();
            for (slot, &m) in key.ys.iter_mut().zip(extra) {
                *slot += m;
            }
            out.insert(key, c.clone());
        }
        out
    }

    /// The raw token spelling of the element, one product per monomial.
    pub fn to_raw(&self) -> RawElement {
        self.iter()
            .map(|m| {
                let c = m.coefficient.clone();
                (c, m.tokens())
            })
            .collect()
    }
}

impl fmt::Display for KlrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.magnitude();
            if !mag.is_one() {
                write!(f, "{mag} ")?;
            }
            let mon = KlrMonomial {
                word: k.word.clone(),
                y_exponents: k.ys.clone(),
                idem: k.idem.clone(),
                coefficient: BigInt::one(),
            };
            let toks: Vec<String> = mon.tokens().iter().map(|t| t.to_string()).collect();
            write!(f, "{}", toks.join(" "))?;
        }
        Ok(())
    }
}

/// The sign isomorphism R_alpha -> R_alpha': e(i) -> e(-i), y -> -y,
/// psi -> -psi. On a basis monomial this negates the idempotent entries and
/// scales by (-1)^(word length + total y degree); no rewriting is needed.
pub fn sign_map(x: &KlrElement, g: &GroundData) -> KlrElement {
    let mut out = KlrElement::zero(x.d);
    for (k, c) in &x.terms {
        let flips = k.word.len() as u64 + k.ys.iter().sum::<u64>();
        let sign = if flips % 2 == 0 {
            BigInt::one()
        } else {
            BigInt::from(-1)
        };
        let key = MonKey {
            word: k.word.clone(),
            ys: k.ys.clone(),
            idem: k.idem.iter().map(|i| g.residue(-i.value())).collect(),
        };
        out.insert(key, c * sign);
    }
    out
}

// Edge classification in the quiver on I: an arrow i -> j iff j = i - 1,
// doubled in both directions when e = 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Arrow {
    Equal,
    Distant,
    To,
    From,
    Both,
}

fn arrow(g: &GroundData, i: Residue, j: Residue) -> Arrow {
    if i == j {
        return Arrow::Equal;
    }
    let to = j == g.residue_shift(i, -1);
    let from = j == g.residue_shift(i, 1);
    match (to, from) {
        (true, true) => Arrow::Both,
        (true, false) => Arrow::To,
        (false, true) => Arrow::From,
        (false, false) => Arrow::Distant,
    }
}

/// Fold direction for reducing a token product to normal form. The two
/// directions resolve redexes in independent orders but must agree exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Strategy {
    /// Fold tokens right to left, reducing at the left end of the product.
    RightFold,
    /// Fold tokens left to right, reducing at the right end.
    LeftFold,
}

#[derive(Clone, Hash, PartialEq, Eq)]
enum CacheKey {
    /// Normal form of psi_r psi_u e(j), keyed by (r, one-line of u, j).
    Left(usize, Vec<usize>, Vec<Residue>),
    /// Normal form of psi_u psi_r e(j), keyed by (one-line of u, r, j).
    Right(Vec<usize>, usize, Vec<Residue>),
}

struct Ctx {
    used: u64,
    limit: u64,
}

impl Ctx {
    fn spend(&mut self, n: u64) -> Result<(), KlrError> {
        self.used = self.used.saturating_add(n);
        if self.used > self.limit {
            Err(KlrError::BudgetExhausted { limit: self.limit })
        } else {
            Ok(())
        }
    }
}

/// The rewriting engine: holds the ground data, the fold strategy, the
/// per-call budget, and a cache of single-crossing products.
pub struct Rewriter<'g> {
    g: &'g GroundData,
    strategy: Strategy,
    budget: u64,
    cache: Mutex<HashMap<CacheKey, KlrElement>>,
}

impl<'g> Rewriter<'g> {
    pub fn new(g: &'g GroundData) -> Self {
        Self::with_options(g, Strategy::RightFold, DEFAULT_BUDGET)
    }

    pub fn with_options(g: &'g GroundData, strategy: Strategy, budget: u64) -> Self {
        Rewriter {
            g,
            strategy,
            budget,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn ground(&self) -> &GroundData {
        self.g
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    fn cache_get(&self, key: &CacheKey) -> Option<KlrElement> {
        self.cache.lock().unwrap().get(key).cloned()
    }

    fn cache_put(&self, key: CacheKey, value: KlrElement) {
        self.cache.lock().unwrap().insert(key, value);
    }

    /// Normalizes a sum of token products of the given rank.
    pub fn normal_form(&self, terms: &[(BigInt, Vec<Token>)], d: usize) -> Result<KlrElement, KlrError> {
        let mut ctx = Ctx {
            used: 0,
            limit: self.budget,
        };
        let mut acc = KlrElement::zero(d);
        for (c, toks) in terms {
            let x = self.fold_term(toks, d, &mut ctx)?;
            let scaled = x.scaled(c);
            acc.check_compatible(&scaled)?;
            acc.merge(scaled);
        }
        Ok(acc)
    }

    /// Normalizes a single token product with coefficient 1.
    pub fn normal_form_tokens(&self, tokens: &[Token], d: usize) -> Result<KlrElement, KlrError> {
        self.normal_form(&[(BigInt::one(), tokens.to_vec())], d)
    }

    /// Left-multiplies a normalized element by a token product.
    pub fn left_multiply(&self, tokens: &[Token], x: &KlrElement) -> Result<KlrElement, KlrError> {
        validate_tokens(tokens, x.d)?;
        let mut ctx = Ctx {
            used: 0,
            limit: self.budget,
        };
        let mut acc = x.clone();
        for tok in tokens.iter().rev() {
            acc = self.lmul_token(tok, &acc, &mut ctx)?;
        }
        Ok(acc)
    }

    /// The product of two normalized elements. Ranks must agree; elements of
    /// different residue content multiply to zero.
    pub fn multiply(&self, a: &KlrElement, b: &KlrElement) -> Result<KlrElement, KlrError> {
        if a.d != b.d {
            return Err(KlrError::RankMismatch {
                expected: a.d,
                found: b.d,
            });
        }
        let mut ctx = Ctx {
            used: 0,
            limit: self.budget,
        };
        let mut acc = KlrElement::zero(a.d);
        match self.strategy {
            Strategy::RightFold => {
                for m in a.iter() {
                    let mut x = self.lmul_e(&m.idem, b, &mut ctx)?;
                    for (k, &cnt) in m.y_exponents.iter().enumerate() {
                        for _ in 0..cnt {
                            x = self.lmul_y(k + 1, &x, &mut ctx)?;
                        }
                    }
                    for &r in m.word.iter().rev() {
                        x = self.lmul_psi(r, &x, &mut ctx)?;
                    }
                    acc.merge_scaled(&x, &m.coefficient);
                }
            }
            Strategy::LeftFold => {
                for m in b.iter() {
                    let mut x = a.clone();
                    for &r in &m.word {
                        x = self.rmul_psi(r, &x, &mut ctx)?;
                    }
                    for (k, &cnt) in m.y_exponents.iter().enumerate() {
                        let mut extra = vec![0u64; a.d];
                        extra[k] = cnt;
                        x = x.with_ys_added(&extra);
                    }
                    x = rmul_e(&m.idem, &x);
                    acc.merge_scaled(&x, &m.coefficient);
                }
            }
        }
        Ok(acc)
    }

    /// The star anti-involution: fixes every generator and reverses products.
    pub fn star(&self, x: &KlrElement) -> Result<KlrElement, KlrError> {
        let raw: RawElement = x
            .iter()
            .map(|m| {
                let mut toks = vec![Token::E(m.idem.clone())];
                for (k, &cnt) in m.y_exponents.iter().enumerate() {
                    for _ in 0..cnt {
                        toks.push(Token::Y(k + 1));
                    }
                }
                toks.extend(m.word.iter().rev().map(|&r| Token::Psi(r)));
                (m.coefficient.clone(), toks)
            })
            .collect();
        self.normal_form(&raw, x.d)
    }

    fn fold_term(&self, tokens: &[Token], d: usize, ctx: &mut Ctx) -> Result<KlrElement, KlrError> {
        validate_tokens(tokens, d)?;
        match self.strategy {
            Strategy::RightFold => self.fold_right(tokens, ctx),
            Strategy::LeftFold => self.fold_left(tokens, ctx),
        }
    }

    // Seeds from the rightmost idempotent, transported to the right end
    // through the crossings after it, then left-multiplies the remaining
    // tokens from right to left.
    fn fold_right(&self, tokens: &[Token], ctx: &mut Ctx) -> Result<KlrElement, KlrError> {
        let p = tokens
            .iter()
            .rposition(|t| matches!(t, Token::E(_)))
            .ok_or(KlrError::NoIdempotent)?;
        let mut j = match &tokens[p] {
            Token::E(i) => i.clone(),
            _ => unreachable!(),
        };
        for tok in &tokens[p + 1..] {
            if let Token::Psi(r) = tok {
                j.swap(r - 1, *r);
            }
        }
        let mut x = KlrElement::idempotent(&j);
        for (q, tok) in tokens.iter().enumerate().rev() {
            if q == p {
                continue;
            }
            x = self.lmul_token(tok, &x, ctx)?;
        }
        Ok(x)
    }

    // Mirror image: seeds from the leftmost idempotent transported to the
    // front, then right-multiplies the remaining tokens left to right.
    fn fold_left(&self, tokens: &[Token], ctx: &mut Ctx) -> Result<KlrElement, KlrError> {
        let p = tokens
            .iter()
            .position(|t| matches!(t, Token::E(_)))
            .ok_or(KlrError::NoIdempotent)?;
        let mut j = match &tokens[p] {
            Token::E(i) => i.clone(),
            _ => unreachable!(),
        };
        for tok in tokens[..p].iter().rev() {
            if let Token::Psi(r) = tok {
                j.swap(r - 1, *r);
            }
        }
        let mut x = KlrElement::idempotent(&j);
        for (q, tok) in tokens.iter().enumerate() {
            if q == p {
                continue;
            }
            x = self.rmul_token(tok, &x, ctx)?;
        }
        Ok(x)
    }

    fn lmul_token(&self, tok: &Token, x: &KlrElement, ctx: &mut Ctx) -> Result<KlrElement, KlrError> {
        match tok {
            Token::E(i) => self.lmul_e(i, x, ctx),
            Token::Y(s) => self.lmul_y(*s, x, ctx),
            Token::Psi(r) => self.lmul_psi(*r, x, ctx),
        }
    }

    fn rmul_token(&self, tok: &Token, x: &KlrElement, ctx: &mut Ctx) -> Result<KlrElement, KlrError> {
        match tok {
            Token::E(i) => {
                ctx.spend(x.term_count() as u64)?;
                Ok(rmul_e(i, x))
            }
            Token::Y(s) => {
                let mut extra = vec![0u64; x.d];
                extra[s - 1] = 1;
                Ok(x.with_ys_added(&extra))
            }
            Token::Psi(r) => self.rmul_psi(*r, x, ctx),
        }
    }

    // e(i) . psi_w y^m e(j) = psi_w y^m e(j) when i = w(j) (place action),
    // else 0.
    fn lmul_e(&self, i: &[Residue], x: &KlrElement, ctx: &mut Ctx) -> Result<KlrElement, KlrError> {
        let mut out = KlrElement::zero(x.d);
        for (k, c) in &x.terms {
            ctx.spend(1)?;
            let w = Permutation::from_word(&k.word, x.d.max(1))?;
            if w.apply_to_seq(&k.idem) == i {
                out.insert(k.clone(), c.clone());
            }
        }
        Ok(out)
    }

    // y_s . psi_w y^m e(j): walks the y rightward through the word. Passing
    // a crossing psi_t flips the index s between t and t+1 and, when the two
    // residues crossed are equal, emits a correction with that crossing
    // deleted: psi y_{t+1} = y_t psi + delta and psi y_t = y_{t+1} psi - delta
    // read from the right.
    fn lmul_y(&self, s: usize, x: &KlrElement, ctx: &mut Ctx) -> Result<KlrElement, KlrError> {
        let mut out = KlrElement::zero(x.d);
        for (k, c) in &x.terms {
            self.lmul_y_mon(s, k, c, &mut out, ctx)?;
        }
        Ok(out)
    }

    fn lmul_y_mon(
        &self,
        s: usize,
        k: &MonKey,
        c: &BigInt,
        out: &mut KlrElement,
        ctx: &mut Ctx,
    ) -> Result<(), KlrError> {
        let len = k.word.len();
        // seqs[p] = residue sequence immediately right of letter p.
        let mut seqs: Vec<Vec<Residue>> = vec![Vec::new(); len + 1];
        seqs[len] = k.idem.clone();
        for p in (0..len).rev() {
            let mut s2 = seqs[p + 1].clone();
            s2.swap(k.word[p] - 1, k.word[p]);
            seqs[p] = s2;
        }
        let mut cur = s;
        for p in 0..len {
            ctx.spend(1)?;
            let t = k.word[p];
            if cur != t && cur != t + 1 {
                continue;
            }
            let ip = &seqs[p + 1];
            let delta = ip[t - 1] == ip[t];
            let sign = if cur == t {
                cur = t + 1;
                -1
            } else {
                cur = t;
                1
            };
            if delta {
                // The crossing and the y both vanish in the correction.
                let mut toks: Vec<Token> = Vec::with_capacity(len);
                toks.extend(k.word[..p].iter().map(|&r| Token::Psi(r)));
                toks.extend(k.word[p + 1..].iter().map(|&r| Token::Psi(r)));
                toks.push(Token::E(k.idem.clone()));
                let corr = self.fold_term(&toks, k.idem.len(), ctx)?;
                out.merge_scaled(&corr.with_ys_added(&k.ys), &(c * BigInt::from(sign)));
            }
        }
        let mut key = k.clone();
        key.ys[cur - 1] += 1;
        out.insert(key, c.clone());
        Ok(())
    }

    // psi_r . psi_w y^m e(j) = (psi_r psi_w e(j)) y^m.
    fn lmul_psi(&self, r: usize, x: &KlrElement, ctx: &mut Ctx) -> Result<KlrElement, KlrError> {
        let mut out = KlrElement::zero(x.d);
        for (k, c) in &x.terms {
            let w = Permutation::from_word(&k.word, x.d.max(1))?;
            let core = self.psi_times_word(r, &w, &k.idem, ctx)?;
            out.merge_scaled(&core.with_ys_added(&k.ys), c);
        }
        Ok(out)
    }

    // Normal form of psi_r psi_u e(j), the left-fold primitive. On an ascent
    // the concatenated word is canonicalized to the preferred word of s_r u,
    // braid moves emitting lower corrections. On a descent the identity
    // psi_r psi_v e(j) = psi_u e(j) + L (v = s_r u, computed by the ascent
    // case) is inverted: psi_r psi_u = psi_r^2 psi_v - psi_r L, and psi_r^2
    // collapses through the quadratic relation at the residues v(j).
    fn psi_times_word(
        &self,
        r: usize,
        u: &Permutation,
        j: &[Residue],
        ctx: &mut Ctx,
    ) -> Result<KlrElement, KlrError> {
        let d = j.len();
        let key = CacheKey::Left(r, u.one_line().to_vec(), j.to_vec());
        if let Some(hit) = self.cache_get(&key) {
            return Ok(hit);
        }
        ctx.spend(1)?;
        let mut v = u.clone();
        v.left_multiply_simple(r);
        let result = if v.length() > u.length() {
            let mut word = vec![r];
            word.extend(u.preferred_word());
            let target = v.preferred_word();
            if word == target {
                KlrElement::monomial(&word, &vec![0; d], j, BigInt::one())?
            } else {
                let moves = moves_to_preferred(&word, d.max(1))?;
                let (final_word, corr) = self.apply_word_moves(word, &moves, j, ctx)?;
                debug_assert_eq!(final_word, target);
                let mut out = KlrElement::monomial(&final_word, &vec![0; d], j, BigInt::one())?;
                out.merge(corr);
                out
            }
        } else {
            let a = self.psi_times_word(r, &v, j, ctx)?;
            let zeros = vec![0u64; d];
            let main = u.preferred_word();
            let lead = a.coefficient_of(&main, &zeros, j);
            assert!(lead.is_one(), "ascent normal form must be monic");
            let mut low = a;
            low.insert(
                MonKey {
                    word: main,
                    ys: zeros.clone(),
                    idem: j.to_vec(),
                },
                BigInt::from(-1),
            );
            // Quadratic part at the residues seen by the doubled crossing.
            let i2 = v.apply_to_seq(j);
            let base = KlrElement::monomial(&v.preferred_word(), &zeros, j, BigInt::one())?;
            let part1 = match arrow(self.g, i2[r - 1], i2[r]) {
                Arrow::Equal => KlrElement::zero(d),
                Arrow::Distant => base,
                Arrow::To => {
                    let hi = self.lmul_y(r + 1, &base, ctx)?;
                    let lo = self.lmul_y(r, &base, ctx)?;
                    hi.sub(&lo)?
                }
                Arrow::From => {
                    let hi = self.lmul_y(r + 1, &base, ctx)?;
                    let lo = self.lmul_y(r, &base, ctx)?;
                    lo.sub(&hi)?
                }
                Arrow::Both => {
                    // (y_{r+1} - y_r)(y_r - y_{r+1}) = -y_r^2 + 2 y_r y_{r+1} - y_{r+1}^2
                    let yr = self.lmul_y(r, &base, ctx)?;
                    let yr1 = self.lmul_y(r + 1, &base, ctx)?;
                    let mut acc = self.lmul_y(r, &yr, ctx)?.negated();
                    acc.merge_scaled(&self.lmul_y(r + 1, &yr, ctx)?, &BigInt::from(2));
                    acc.merge_scaled(&self.lmul_y(r + 1, &yr1, ctx)?, &BigInt::from(-1));
                    acc
                }
            };
            let part2 = self.lmul_psi(r, &low, ctx)?;
            part1.sub(&part2)?
        };
        self.cache_put(key, result.clone());
        Ok(result)
    }

    // psi_w y^m e(j) . psi_r: strips y_r / y_{r+1} factors off the right of
    // y^m through the crossing (emitting delta corrections), then multiplies
    // the words through the cached right primitive.
    fn rmul_psi(&self, r: usize, x: &KlrElement, ctx: &mut Ctx) -> Result<KlrElement, KlrError> {
        let mut out = KlrElement::zero(x.d);
        for (k, c) in &x.terms {
            let part = self.rmul_psi_mon(r, k, ctx)?;
            out.merge_scaled(&part, c);
        }
        Ok(out)
    }

    fn rmul_psi_mon(&self, r: usize, k: &MonKey, ctx: &mut Ctx) -> Result<KlrElement, KlrError> {
        ctx.spend(1)?;
        let d = k.idem.len();
        let mut j2 = k.idem.clone();
        j2.swap(r - 1, r);
        let delta = k.idem[r - 1] == k.idem[r];
        if k.ys[r - 1] > 0 {
            // y_r psi_r e = psi_r y_{r+1} e - delta e.
            let mut k1 = k.clone();
            k1.ys[r - 1] -= 1;
            let mut a = self.rmul_psi_mon(r, &k1, ctx)?;
            let mut bump = vec![0u64; d];
            bump[r] = 1;
            a = a.with_ys_added(&bump);
            if delta {
                a.insert(
                    MonKey {
                        word: k1.word,
                        ys: k1.ys,
                        idem: j2,
                    },
                    BigInt::from(-1),
                );
            }
            Ok(a)
        } else if k.ys[r] > 0 {
            // y_{r+1} psi_r e = psi_r y_r e + delta e.
            let mut k1 = k.clone();
            k1.ys[r] -= 1;
            let mut a = self.rmul_psi_mon(r, &k1, ctx)?;
            let mut bump = vec![0u64; d];
            bump[r - 1] = 1;
            a = a.with_ys_added(&bump);
            if delta {
                a.insert(
                    MonKey {
                        word: k1.word,
                        ys: k1.ys,
                        idem: j2,
                    },
                    BigInt::one(),
                );
            }
            Ok(a)
        } else {
            let w = Permutation::from_word(&k.word, d.max(1))?;
            let core = self.word_times_psi(&w, r, &j2, ctx)?;
            Ok(core.with_ys_added(&k.ys))
        }
    }

    // Normal form of psi_w psi_r e(j2), the right-fold primitive. Descents
    // move the letter r to the end of the word by moves, then collapse the
    // doubled crossing through the quadratic relation.
    fn word_times_psi(
        &self,
        w: &Permutation,
        r: usize,
        j2: &[Residue],
        ctx: &mut Ctx,
    ) -> Result<KlrElement, KlrError> {
        let d = j2.len();
        let key = CacheKey::Right(w.one_line().to_vec(), r, j2.to_vec());
        if let Some(hit) = self.cache_get(&key) {
            return Ok(hit);
        }
        ctx.spend(1)?;
        let mut u = w.clone();
        u.right_multiply_simple(r);
        let result = if u.length() > w.length() {
            let mut word = w.preferred_word();
            word.push(r);
            let target = u.preferred_word();
            if word == target {
                KlrElement::monomial(&word, &vec![0; d], j2, BigInt::one())?
            } else {
                let moves = moves_to_preferred(&word, d.max(1))?;
                let (final_word, corr) = self.apply_word_moves(word, &moves, j2, ctx)?;
                debug_assert_eq!(final_word, target);
                let mut out = KlrElement::monomial(&final_word, &vec![0; d], j2, BigInt::one())?;
                out.merge(corr);
                out
            }
        } else {
            // Rearrange w's word to end with r, then psi_r psi_r collapses.
            let base = w.preferred_word();
            let moves = moves_making_last(&base, d.max(1), r)?;
            let mut word = base;
            word.push(r);
            let (word2, corr) = self.apply_word_moves(word, &moves, j2, ctx)?;
            debug_assert_eq!(word2[word2.len() - 1], r);
            debug_assert_eq!(word2[word2.len() - 2], r);
            let stem = &word2[..word2.len() - 2];
            let mut out = corr;
            for (coeff, ys) in quadratic_coefficients(self.g, j2, r) {
                let mut toks: Vec<Token> = stem.iter().map(|&t| Token::Psi(t)).collect();
                toks.extend(ys.iter().map(|&s| Token::Y(s)));
                toks.push(Token::E(j2.to_vec()));
                let part = self.fold_term(&toks, d, ctx)?;
                out.merge_scaled(&part, &coeff);
            }
            out
        };
        self.cache_put(key, result.clone());
        Ok(result)
    }

    // Replays a move sequence on a word with fixed right idempotent j,
    // emitting for each braid move the correction dictated by the braid
    // relation at the residues right of the rewritten triple. Corrections
    // re-enter the fold with strictly fewer crossings.
    fn apply_word_moves(
        &self,
        mut word: Vec<usize>,
        moves: &[WordMove],
        j: &[Residue],
        ctx: &mut Ctx,
    ) -> Result<(Vec<usize>, KlrElement), KlrError> {
        let d = j.len();
        let mut corr = KlrElement::zero(d);
        for mv in moves {
            ctx.spend(1)?;
            if mv.kind == MoveKind::Braid {
                let a = word[mv.pos];
                let b = word[mv.pos + 1];
                let r0 = a.min(b);
                let suffix = Permutation::from_word(&word[mv.pos + 3..], d.max(1))?;
                let ip = suffix.apply_to_seq(j);
                // Replacing (r,r+1,r) by (r+1,r,r+1) adds the correction;
                // the reverse replacement subtracts it.
                let sign = if a == r0 { 1 } else { -1 };
                for (coeff, ys) in braid_coefficients(self.g, &ip, r0) {
                    let mut toks: Vec<Token> =
                        word[..mv.pos].iter().map(|&t| Token::Psi(t)).collect();
                    toks.extend(ys.iter().map(|&s| Token::Y(s)));
                    toks.extend(word[mv.pos + 3..].iter().map(|&t| Token::Psi(t)));
                    toks.push(Token::E(j.to_vec()));
                    let part = self.fold_term(&toks, d, ctx)?;
                    corr.merge_scaled(&part, &(coeff * BigInt::from(sign)));
                }
            }
            apply_move(&mut word, *mv);
        }
        Ok((word, corr))
    }
}

/// The quadratic relation psi_r^2 e(j) as (coefficient, y-factor list)
/// pairs, selected by the adjacency of the two crossed residues.
pub fn quadratic_coefficients(g: &GroundData, j: &[Residue], r: usize) -> Vec<(BigInt, Vec<usize>)> {
    match arrow(g, j[r - 1], j[r]) {
        Arrow::Equal => vec![],
        Arrow::Distant => vec![(BigInt::one(), vec![])],
        Arrow::To => vec![
            (BigInt::one(), vec![r + 1]),
            (BigInt::from(-1), vec![r]),
        ],
        Arrow::From => vec![
            (BigInt::one(), vec![r]),
            (BigInt::from(-1), vec![r + 1]),
        ],
        Arrow::Both => vec![
            (BigInt::from(-1), vec![r, r]),
            (BigInt::from(2), vec![r, r + 1]),
            (BigInt::from(-1), vec![r + 1, r + 1]),
        ],
    }
}

/// The braid defect psi_r psi_{r+1} psi_r e(i) - psi_{r+1} psi_r psi_{r+1} e(i)
/// as (coefficient, y-factor list) pairs at the residue sequence i.
pub fn braid_coefficients(g: &GroundData, i: &[Residue], r: usize) -> Vec<(BigInt, Vec<usize>)> {
    if i[r + 1] != i[r - 1] {
        return vec![];
    }
    match arrow(g, i[r - 1], i[r]) {
        Arrow::To => vec![(BigInt::one(), vec![])],
        Arrow::From => vec![(BigInt::from(-1), vec![])],
        Arrow::Both => vec![
            (BigInt::from(-2), vec![r + 1]),
            (BigInt::one(), vec![r]),
            (BigInt::one(), vec![r + 2]),
        ],
        Arrow::Equal | Arrow::Distant => vec![],
    }
}

fn rmul_e(i: &[Residue], x: &KlrElement) -> KlrElement {
    let mut out = KlrElement::zero(x.d);
    for (k, c) in &x.terms {
        if k.idem == i {
            out.insert(k.clone(), c.clone());
        }
    }
    out
}

fn validate_tokens(tokens: &[Token], d: usize) -> Result<(), KlrError> {
    for tok in tokens {
        match tok {
            Token::E(i) => {
                if i.len() != d {
                    return Err(KlrError::RankMismatch {
                        expected: d,
                        found: i.len(),
                    });
                }
            }
            Token::Y(r) => {
                if *r == 0 || *r > d {
                    return Err(KlrError::IndexOutOfRange { index: *r, rank: d });
                }
            }
            Token::Psi(r) => {
                if *r == 0 || *r + 1 > d {
                    return Err(KlrError::IndexOutOfRange { index: *r, rank: d });
                }
            }
        }
    }
    Ok(())
}

/// Parses the textual element syntax: `e(0,1,1)` for idempotents, `y3` and
/// `p2` for generators, juxtaposition for products, `+`/`-` and integer
/// coefficients for sums. Residue entries are canonicalized through the
/// ground data. `0` denotes the zero element.
pub fn parse_element(input: &str, g: &GroundData) -> Result<RawElement, KlrError> {
    let bytes = input.as_bytes();
    let mut pos = 0usize;
    let err = |what: &'static str| KlrError::Parse {
        what,
        input: input.to_string(),
    };
    let mut terms: RawElement = Vec::new();
    skip_ws(bytes, &mut pos);
    if pos == bytes.len() {
        return Err(err("element"));
    }
    if bytes[pos] == b'0' && {
        let mut q = pos + 1;
        skip_ws(bytes, &mut q);
        q == bytes.len()
    } {
        return Ok(terms);
    }
    let mut first = true;
    loop {
        skip_ws(bytes, &mut pos);
        if pos == bytes.len() {
            if first {
                return Err(err("element"));
            }
            break;
        }
        let mut sign = BigInt::one();
        match bytes[pos] {
            b'+' => {
                pos += 1;
            }
            b'-' => {
                sign = BigInt::from(-1);
                pos += 1;
            }
            _ if !first => return Err(err("term separator")),
            _ => {}
        }
        skip_ws(bytes, &mut pos);
        let mut coeff = sign;
        if pos < bytes.len() && bytes[pos].is_ascii_digit() {
            let n = parse_uint(bytes, &mut pos).ok_or_else(|| err("coefficient"))?;
            coeff *= BigInt::from(n);
        }
        let mut toks = Vec::new();
        loop {
            skip_ws(bytes, &mut pos);
            if pos == bytes.len() || bytes[pos] == b'+' || bytes[pos] == b'-' {
                break;
            }
            match bytes[pos] {
                b'e' => {
                    pos += 1;
                    skip_ws(bytes, &mut pos);
                    if pos == bytes.len() || bytes[pos] != b'(' {
                        return Err(err("idempotent"));
                    }
                    pos += 1;
                    let mut vals = Vec::new();
                    skip_ws(bytes, &mut pos);
                    if pos < bytes.len() && bytes[pos] == b')' {
                        pos += 1;
                    } else {
                        loop {
                            skip_ws(bytes, &mut pos);
                            let v = parse_int(bytes, &mut pos).ok_or_else(|| err("residue"))?;
                            vals.push(g.residue(v));
                            skip_ws(bytes, &mut pos);
                            if pos < bytes.len() && bytes[pos] == b',' {
                                pos += 1;
                            } else if pos < bytes.len() && bytes[pos] == b')' {
                                pos += 1;
                                break;
                            } else {
                                return Err(err("idempotent"));
                            }
                        }
                    }
                    toks.push(Token::E(vals));
                }
                b'y' => {
                    pos += 1;
                    let n = parse_uint(bytes, &mut pos).ok_or_else(|| err("y index"))?;
                    toks.push(Token::Y(n as usize));
                }
                b'p' => {
                    pos += 1;
                    let n = parse_uint(bytes, &mut pos).ok_or_else(|| err("psi index"))?;
                    toks.push(Token::Psi(n as usize));
                }
                _ => return Err(err("factor")),
            }
        }
        if toks.is_empty() {
            return Err(err("term"));
        }
        terms.push((coeff, toks));
        first = false;
    }
    Ok(terms)
}

/// The rank of a raw element read off its first idempotent, when any.
pub fn element_rank(terms: &RawElement) -> Option<usize> {
    terms.iter().find_map(|(_, toks)| {
        toks.iter().find_map(|t| match t {
            Token::E(i) => Some(i.len()),
            _ => None,
        })
    })
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_uint(bytes: &[u8], pos: &mut usize) -> Option<u64> {
    let start = *pos;
    while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == start {
        return None;
    }
    std::str::from_utf8(&bytes[start..*pos]).ok()?.parse().ok()
}

fn parse_int(bytes: &[u8], pos: &mut usize) -> Option<i64> {
    let neg = *pos < bytes.len() && bytes[*pos] == b'-';
    if neg {
        *pos += 1;
    }
    let n = parse_uint(bytes, pos)? as i64;
    Some(if neg { -n } else { n })
}

/// One verification check: name, number of cases run, and the witnesses of
/// any failures.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_residue(g: &GroundData, rng: &mut ChaCha8Rng) -> Residue {
    if g.e() == 0 {
        g.residue(rng.gen_range(-2..=2))
    } else {
        g.residue(rng.gen_range(0..g.e()))
    }
}

fn random_idem(g: &GroundData, d: usize, rng: &mut ChaCha8Rng) -> Vec<Residue> {
    (0..d).map(|_| random_residue(g, rng)).collect()
}

// A shared random left context so each identity is also exercised deep
// inside longer products.
fn random_context(d: usize, rng: &mut ChaCha8Rng) -> Vec<Token> {
    let n = rng.gen_range(0..=3);
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) && d >= 2 {
                Token::Psi(rng.gen_range(1..d))
            } else {
                Token::Y(rng.gen_range(1..=d))
            }
        })
        .collect()
}

fn prefixed(ctx: &[Token], terms: RawElement) -> RawElement {
    terms
        .into_iter()
        .map(|(c, toks)| {
            let mut full = ctx.to_vec();
            full.extend(toks);
            (c, full)
        })
        .collect()
}

/// Checks every defining relation as an identity on random data: both sides
/// are normalized (under a shared random left context) and compared. Returns
/// one report per relation family.
pub fn verify_relations(
    g: &GroundData,
    d: usize,
    samples: usize,
    seed: u64,
    budget: u64,
) -> Result<Vec<CheckReport>, KlrError> {
    assert!(d >= 3, "relation sweep needs rank at least 3");
    let rw = Rewriter::with_options(g, Strategy::RightFold, budget);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = BigInt::one;
    let families = [
        "idempotents",
        "idempotent-commutation",
        "y-commutation",
        "psi-y-distant",
        "psi-psi-distant",
        "psi-y-straightening",
        "y-psi-straightening",
        "quadratic",
        "braid",
    ];
    let mut reports: Vec<CheckReport> = families
        .iter()
        .map(|&name| CheckReport {
            name: name.to_string(),
            cases: 0,
            failures: Vec::new(),
        })
        .collect();
    for case in 0..samples {
        let ctx = random_context(d, &mut rng);
        let mut i = random_idem(g, d, &mut rng);
        // Force each adjacency pattern in turn so special cases always occur.
        let r = rng.gen_range(1..d);
        match rng.gen_range(0..4) {
            0 => i[r] = i[r - 1],
            1 => i[r] = g.residue_shift(i[r - 1], -1),
            2 => i[r] = g.residue_shift(i[r - 1], 1),
            _ => {}
        }
        if r + 1 < d && rng.gen_bool(0.5) {
            i[r + 1] = i[r - 1];
        }
        let e_i = Token::E(i.clone());
        let delta = i[r - 1] == i[r];

        let mut check = |slot: usize, lhs: RawElement, rhs: RawElement| {
            let lhs = prefixed(&ctx, lhs);
            let rhs = prefixed(&ctx, rhs);
            reports[slot].cases += 1;
            match (rw.normal_form(&lhs, d), rw.normal_form(&rhs, d)) {
                (Ok(a), Ok(b)) => {
                    if a != b {
                        reports[slot].failures.push(format!(
                            "case {case}: r={r}, i={:?}: {a} != {b}",
                            i.iter().map(|x| x.value()).collect::<Vec<_>>()
                        ));
                    }
                }
                (Err(e), _) | (_, Err(e)) => {
                    reports[slot].failures.push(format!("case {case}: {e}"));
                }
            }
        };

        // e(i)e(j) = delta e(i).
        let jdem = if rng.gen_bool(0.5) {
            i.clone()
        } else {
            random_idem(g, d, &mut rng)
        };
        check(
            0,
            vec![(one(), vec![e_i.clone(), Token::E(jdem.clone())])],
            if jdem == i {
                vec![(one(), vec![e_i.clone()])]
            } else {
                vec![]
            },
        );

        // y_r e(i) = e(i) y_r and psi_r e(i) = e(s_r i) psi_r.
        let s = rng.gen_range(1..=d);
        check(
            1,
            vec![(one(), vec![Token::Y(s), e_i.clone()])],
            vec![(one(), vec![e_i.clone(), Token::Y(s)])],
        );
        let mut si = i.clone();
        si.swap(r - 1, r);
        check(
            1,
            vec![(one(), vec![Token::Psi(r), e_i.clone()])],
            vec![(one(), vec![Token::E(si), Token::Psi(r)])],
        );

        // y_r y_s = y_s y_r.
        let s2 = rng.gen_range(1..=d);
        check(
            2,
            vec![(one(), vec![Token::Y(s), Token::Y(s2), e_i.clone()])],
            vec![(one(), vec![Token::Y(s2), Token::Y(s), e_i.clone()])],
        );

        // psi_r y_s = y_s psi_r for s away from r, r+1.
        let far: Vec<usize> = (1..=d).filter(|&t| t != r && t != r + 1).collect();
        if let Some(&s3) = far.as_slice().choose(&mut rng) {
            check(
                3,
                vec![(one(), vec![Token::Psi(r), Token::Y(s3), e_i.clone()])],
                vec![(one(), vec![Token::Y(s3), Token::Psi(r), e_i.clone()])],
            );
        }

        // psi_r psi_t = psi_t psi_r for |r - t| > 1.
        let distant: Vec<usize> = (1..d).filter(|&t| t.abs_diff(r) > 1).collect();
        if let Some(&t) = distant.as_slice().choose(&mut rng) {
            check(
                4,
                vec![(one(), vec![Token::Psi(r), Token::Psi(t), e_i.clone()])],
                vec![(one(), vec![Token::Psi(t), Token::Psi(r), e_i.clone()])],
            );
        }

        // psi_r y_{r+1} e(i) = (y_r psi_r + delta) e(i).
        let mut rhs = vec![(one(), vec![Token::Y(r), Token::Psi(r), e_i.clone()])];
        if delta {
            rhs.push((one(), vec![e_i.clone()]));
        }
        check(
            5,
            vec![(one(), vec![Token::Psi(r), Token::Y(r + 1), e_i.clone()])],
            rhs,
        );

        // y_{r+1} psi_r e(i) = (psi_r y_r + delta) e(i).
        let mut rhs = vec![(one(), vec![Token::Psi(r), Token::Y(r), e_i.clone()])];
        if delta {
            rhs.push((one(), vec![e_i.clone()]));
        }
        check(
            6,
            vec![(one(), vec![Token::Y(r + 1), Token::Psi(r), e_i.clone()])],
            rhs,
        );

        // psi_r^2 e(i) by adjacency case.
        let rhs: RawElement = quadratic_coefficients(g, &i, r)
            .into_iter()
            .map(|(c, ys)| {
                let mut toks: Vec<Token> = ys.into_iter().map(Token::Y).collect();
                toks.push(e_i.clone());
                (c, toks)
            })
            .collect();
        check(
            7,
            vec![(one(), vec![Token::Psi(r), Token::Psi(r), e_i.clone()])],
            rhs,
        );

        // Braid relation at r, r+1 when both crossings exist.
        if r + 1 < d {
            let mut rhs: RawElement = vec![(
                one(),
                vec![
                    Token::Psi(r + 1),
                    Token::Psi(r),
                    Token::Psi(r + 1),
                    e_i.clone(),
                ],
            )];
            for (c, ys) in braid_coefficients(g, &i, r) {
                let mut toks: Vec<Token> = ys.into_iter().map(Token::Y).collect();
                toks.push(e_i.clone());
                rhs.push((c, toks));
            }
            check(
                8,
                vec![(
                    one(),
                    vec![Token::Psi(r), Token::Psi(r + 1), Token::Psi(r), e_i.clone()],
                )],
                rhs,
            );
        }
    }
    Ok(reports)
}

/// Normalizes random token products under both fold strategies and compares
/// the results exactly. Contents are drawn from random small multipartitions
/// so the residue strings match those arising in module computations.
pub fn verify_confluence(
    samples: usize,
    seed: u64,
    budget: u64,
) -> Result<Vec<CheckReport>, KlrError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport {
        name: "confluence".to_string(),
        cases: 0,
        failures: Vec::new(),
    };
    for case in 0..samples {
        let e = *[0i64, 2, 3].choose(&mut rng).unwrap();
        let level = rng.gen_range(1..=2);
        let charge: Vec<i64> = (0..level)
            .map(|_| {
                if e == 0 {
                    rng.gen_range(-1..=1)
                } else {
                    rng.gen_range(0..e)
                }
            })
            .collect();
        let g = GroundData::new(e, &charge).unwrap();
        let d = rng.gen_range(1..=5usize);
        let shapes = crate::tableaux::all_shapes(d, level);
        let mu = shapes
            .iter()
            .filter(|m| m.size() == d)
            .choose(&mut rng)
            .unwrap()
            .clone();
        let mut base: Vec<Residue> = mu
            .row_reading_nodes()
            .iter()
            .map(|n| crate::tableaux::residue(n, &g))
            .collect();
        base.shuffle(&mut rng);
        // Build leftward from the base idempotent, tracking the left residue
        // string so most inserted idempotents keep the term alive.
        let mut tokens = vec![Token::E(base.clone())];
        let mut cur = base.clone();
        for _ in 0..rng.gen_range(1..=10usize) {
            let roll: f64 = rng.gen();
            let tok = if roll < 0.45 && d >= 2 {
                let r = rng.gen_range(1..d);
                cur.swap(r - 1, r);
                Token::Psi(r)
            } else if roll < 0.8 {
                Token::Y(rng.gen_range(1..=d))
            } else if rng.gen_bool(0.8) {
                Token::E(cur.clone())
            } else {
                let mut other = cur.clone();
                other.shuffle(&mut rng);
                Token::E(other)
            };
            tokens.insert(0, tok);
        }
        let right = Rewriter::with_options(&g, Strategy::RightFold, budget);
        let left = Rewriter::with_options(&g, Strategy::LeftFold, budget);
        report.cases += 1;
        match (
            right.normal_form_tokens(&tokens, d),
            left.normal_form_tokens(&tokens, d),
        ) {
            (Ok(a), Ok(b)) => {
                if a != b {
                    let spelling: Vec<String> = tokens.iter().map(|t| t.to_string()).collect();
                    report.failures.push(format!(
                        "case {case}: e={e}, input {}: {a} != {b}",
                        spelling.join(" ")
                    ));
                }
            }
            (Err(err), _) | (_, Err(err)) => {
                report.failures.push(format!("case {case}: {err}"));
            }
        }
    }
    Ok(vec![report])
}

/// Checks that two reduced words of the same permutation give psi-products
/// differing only by strictly Bruhat-lower terms of the same degree.
pub fn verify_word_independence(
    g: &GroundData,
    d: usize,
    samples: usize,
    seed: u64,
    budget: u64,
) -> Result<Vec<CheckReport>, KlrError> {
    let rw = Rewriter::with_options(g, Strategy::RightFold, budget);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport {
        name: "word-independence".to_string(),
        cases: 0,
        failures: Vec::new(),
    };
    for case in 0..samples {
        let mut line: Vec<usize> = (1..=d).collect();
        line.shuffle(&mut rng);
        let w = Permutation::from_one_line(line).unwrap();
        if w.length() < 2 {
            continue;
        }
        let graph = crate::perm::braid_graph(&w, 100_000)?;
        if graph.words.len() < 2 {
            continue;
        }
        let a = rng.gen_range(0..graph.words.len());
        let mut b = rng.gen_range(0..graph.words.len());
        if a == b {
            b = (b + 1) % graph.words.len();
        }
        let i = random_idem(g, d, &mut rng);
        let to_tokens = |word: &[usize]| -> Vec<Token> {
            let mut toks: Vec<Token> = word.iter().map(|&r| Token::Psi(r)).collect();
            toks.push(Token::E(i.clone()));
            toks
        };
        report.cases += 1;
        let xa = rw.normal_form_tokens(&to_tokens(&graph.words[a]), d)?;
        let xb = rw.normal_form_tokens(&to_tokens(&graph.words[b]), d)?;
        let expected_degree = raw_degree(&w.preferred_word(), &vec![0; d], &i, g);
        let diff = xa.sub(&xb).unwrap();
        for m in diff.iter() {
            let u = Permutation::from_word(&m.word, d).unwrap();
            if !(u.bruhat_leq(&w) && u != w) {
                report
                    .failures
                    .push(format!("case {case}: term {:?} not below {:?}", m.word, w));
            }
            if degree_of(&m, g) != expected_degree {
                report
                    .failures
                    .push(format!("case {case}: term {:?} has wrong degree", m.word));
            }
        }
        // The leading coefficients match: the difference has no psi_w term.
        if !diff
            .coefficient_of(&w.preferred_word(), &vec![0; d], &i)
            .is_zero()
        {
            report
                .failures
                .push(format!("case {case}: difference not triangular"));
        }
    }
    Ok(vec![report])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ground(e: i64, charge: &[i64]) -> GroundData {
        GroundData::new(e, charge).unwrap()
    }

    fn res(g: &GroundData, vals: &[i64]) -> Vec<Residue> {
        vals.iter().map(|&v| g.residue(v)).collect()
    }

    fn nf(rw: &Rewriter, toks: &[Token], d: usize) -> KlrElement {
        rw.normal_form_tokens(toks, d).unwrap()
    }

    #[test]
    fn idempotent_products_collapse() {
        let g = ground(2, &[0]);
        let rw = Rewriter::new(&g);
        let i = res(&g, &[0, 1]);
        let j = res(&g, &[1, 0]);
        let ee = nf(
            &rw,
            &[Token::E(i.clone()), Token::E(i.clone())],
            2,
        );
        assert_eq!(ee, KlrElement::idempotent(&i));
        let zero = nf(&rw, &[Token::E(i.clone()), Token::E(j)], 2);
        assert!(zero.is_zero());
    }

    #[test]
    fn degree_of_generators() {
        let g = ground(2, &[0]);
        let i = res(&g, &[0, 0, 1]);
        let y3 = KlrMonomial {
            word: vec![],
            y_exponents: vec![0, 0, 1],
            idem: i.clone(),
            coefficient: BigInt::one(),
        };
        assert_eq!(degree_of(&y3, &g), 2);
        // psi_1 e((0,0,...)) has degree -a_{00} = -2.
        let p1 = KlrMonomial {
            word: vec![1],
            y_exponents: vec![0, 0, 0],
            idem: i.clone(),
            coefficient: BigInt::one(),
        };
        assert_eq!(degree_of(&p1, &g), -2);
        // psi_2 crosses residues 0 and 1, doubled edge at e = 2: degree 2.
        let p2 = KlrMonomial {
            word: vec![2],
            y_exponents: vec![0, 0, 0],
            idem: i,
            coefficient: BigInt::one(),
        };
        assert_eq!(degree_of(&p2, &g), 2);
        let e = KlrMonomial {
            word: vec![],
            y_exponents: vec![0, 0, 0],
            idem: res(&g, &[0, 1, 0]),
            coefficient: BigInt::one(),
        };
        assert_eq!(degree_of(&e, &g), 0);
    }

    #[test]
    fn quadratic_relation_equal_residues_vanishes() {
        let g = ground(3, &[0]);
        let rw = Rewriter::new(&g);
        let i = res(&g, &[1, 1, 0]);
        let x = nf(
            &rw,
            &[Token::Psi(1), Token::Psi(1), Token::E(i)],
            3,
        );
        assert!(x.is_zero());
    }

    #[test]
    fn dot_past_crossing_straightens() {
        // psi_1 y_2 e(i) with i_1 = i_2 equals y_1 psi_1 e(i) + e(i).
        let g = ground(3, &[0]);
        let rw = Rewriter::new(&g);
        let i = res(&g, &[0, 0]);
        let lhs = nf(
            &rw,
            &[Token::Psi(1), Token::Y(2), Token::E(i.clone())],
            2,
        );
        let rhs = rw
            .normal_form(
                &[
                    (BigInt::one(), vec![Token::Y(1), Token::Psi(1), Token::E(i.clone())]),
                    (BigInt::one(), vec![Token::E(i.clone())]),
                ],
                2,
            )
            .unwrap();
        assert_eq!(lhs, rhs);
        // The left side is already a basis monomial.
        assert_eq!(lhs.coefficient_of(&[1], &[0, 1], &i), BigInt::one());
        assert_eq!(lhs.term_count(), 1);
    }

    #[test]
    fn braid_relation_with_single_edge_correction() {
        // (psi_1 psi_2 psi_1 - psi_2 psi_1 psi_2) e(i) = e(i) for
        // i = (i_1, i_1 - 1, i_1).
        let g = ground(3, &[0]);
        let rw = Rewriter::new(&g);
        let i = res(&g, &[1, 0, 1]);
        let diff = rw
            .normal_form(
                &[
                    (
                        BigInt::one(),
                        vec![Token::Psi(1), Token::Psi(2), Token::Psi(1), Token::E(i.clone())],
                    ),
                    (
                        BigInt::from(-1),
                        vec![Token::Psi(2), Token::Psi(1), Token::Psi(2), Token::E(i.clone())],
                    ),
                ],
                3,
            )
            .unwrap();
        assert_eq!(diff, KlrElement::idempotent(&i));
    }

    #[test]
    fn multiply_is_unital_and_matches_tokens() {
        let g = ground(2, &[0]);
        let rw = Rewriter::new(&g);
        let i = res(&g, &[0, 0, 1]);
        let x = nf(
            &rw,
            &[Token::Psi(2), Token::Y(1), Token::E(i.clone())],
            3,
        );
        let e = KlrElement::idempotent(&i);
        // The left residue string of psi_2 y_1 e(i) is s_2 i, so e(s_2 i)
        // fixes x and e(i) kills it.
        let mut left = i.clone();
        left.swap(1, 2);
        let unit = KlrElement::idempotent(&left);
        assert_eq!(rw.multiply(&unit, &x).unwrap(), x);
        assert_eq!(rw.multiply(&e, &x).unwrap(), KlrElement::zero(3));
        // y_r e(i) absorbed: multiply(e(i), y_r e(i)) = y_r e(i).
        let y = nf(&rw, &[Token::Y(2), Token::E(i.clone())], 3);
        assert_eq!(rw.multiply(&e, &y).unwrap(), y);
    }

    #[test]
    fn multiply_agrees_with_single_fold() {
        let g = ground(2, &[0]);
        let rw = Rewriter::new(&g);
        let i = res(&g, &[0, 1, 0, 1]);
        let a = nf(
            &rw,
            &[Token::Psi(1), Token::Psi(2), Token::E(i.clone())],
            4,
        );
        let b = nf(
            &rw,
            &[Token::Psi(3), Token::Y(2), Token::E(i.clone())],
            4,
        );
        let prod = rw.multiply(&a, &b).unwrap();
        let direct = nf(
            &rw,
            &[
                Token::Psi(1),
                Token::Psi(2),
                Token::E(i.clone()),
                Token::Psi(3),
                Token::Y(2),
                Token::E(i.clone()),
            ],
            4,
        );
        assert_eq!(prod, direct);
    }

    #[test]
    fn star_reverses_products() {
        let g = ground(3, &[0]);
        let rw = Rewriter::new(&g);
        let i = res(&g, &[0, 1, 2]);
        let x = nf(
            &rw,
            &[Token::Psi(1), Token::Psi(2), Token::E(i.clone())],
            3,
        );
        let starred = rw.star(&x).unwrap();
        let direct = nf(
            &rw,
            &[Token::E(i.clone()), Token::Psi(2), Token::Psi(1)],
            3,
        );
        assert_eq!(starred, direct);
    }

    #[test]
    fn star_is_an_involution_and_antihomomorphism() {
        let g = ground(2, &[0]);
        let rw = Rewriter::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let d = rng.gen_range(2..=4);
            let i = random_idem(&g, d, &mut rng);
            let mut toks = Vec::new();
            let mut cur = i.clone();
            for _ in 0..rng.gen_range(1..=6usize) {
                if rng.gen_bool(0.5) && d >= 2 {
                    let r = rng.gen_range(1..d);
                    cur.swap(r - 1, r);
                    toks.insert(0, Token::Psi(r));
                } else {
                    toks.insert(0, Token::Y(rng.gen_range(1..=d)));
                }
            }
            toks.push(Token::E(i.clone()));
            let x = nf(&rw, &toks, d);
            let xs = rw.star(&x).unwrap();
            assert_eq!(rw.star(&xs).unwrap(), x);
            // star(ab) = star(b) star(a) on a random pair.
            let y = nf(&rw, &[Token::Y(1), Token::E(i.clone())], d);
            let xy = rw.multiply(&x, &y).unwrap();
            let lhs = rw.star(&xy).unwrap();
            let rhs = rw.multiply(&rw.star(&y).unwrap(), &xs).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn sign_map_is_a_degree_preserving_isomorphism() {
        let g = ground(3, &[0]);
        let rw = Rewriter::new(&g);
        let i = res(&g, &[0, 1, 2]);
        let e = KlrElement::idempotent(&i);
        assert_eq!(
            sign_map(&e, &g),
            KlrElement::idempotent(&res(&g, &[0, -1, -2]))
        );
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let d = 3;
            let idem = random_idem(&g, d, &mut rng);
            let x = nf(
                &rw,
                &[
                    Token::Psi(rng.gen_range(1..d)),
                    Token::Y(rng.gen_range(1..=d)),
                    Token::E(idem.clone()),
                ],
                d,
            );
            let y = nf(
                &rw,
                &[Token::Psi(rng.gen_range(1..d)), Token::E(idem.clone())],
                d,
            );
            // Involution and homomorphism property.
            assert_eq!(sign_map(&sign_map(&x, &g), &g), x);
            let lhs = sign_map(&rw.multiply(&x, &y).unwrap(), &g);
            let rhs = rw
                .multiply(&sign_map(&x, &g), &sign_map(&y, &g))
                .unwrap();
            assert_eq!(lhs, rhs);
            // Degrees are preserved monomial by monomial.
            for m in x.iter() {
                let mut flipped = m.clone();
                flipped.idem = m.idem.iter().map(|t| g.residue(-t.value())).collect();
                assert_eq!(degree_of(&flipped, &g), degree_of(&m, &g));
            }
        }
    }

    #[test]
    fn normal_form_is_homogeneous() {
        let g = ground(2, &[0]);
        let rw = Rewriter::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let d = rng.gen_range(2..=5);
            let i = random_idem(&g, d, &mut rng);
            let mut toks = vec![Token::E(i)];
            for _ in 0..rng.gen_range(1..=8usize) {
                let tok = if rng.gen_bool(0.5) {
                    Token::Psi(rng.gen_range(1..d))
                } else {
                    Token::Y(rng.gen_range(1..=d))
                };
                toks.insert(0, tok);
            }
            let x = nf(&rw, &toks, d);
            assert!(x.is_homogeneous(&g), "inhomogeneous: {x}");
        }
    }

    #[test]
    fn relation_sweep_passes() {
        for (e, d) in [(0i64, 4usize), (2, 4), (3, 5)] {
            let g = ground(e, &[0]);
            let reports = verify_relations(&g, d, 40, 17, DEFAULT_BUDGET).unwrap();
            for rep in reports {
                assert!(rep.failures.is_empty(), "{}: {:?}", rep.name, rep.failures);
                assert!(rep.cases > 0);
            }
        }
    }

    #[test]
    fn confluence_sweep_passes() {
        let reports = verify_confluence(80, 23, DEFAULT_BUDGET).unwrap();
        for rep in reports {
            assert!(rep.failures.is_empty(), "{:?}", rep.failures);
            assert_eq!(rep.cases, 80);
        }
    }

    #[test]
    fn word_independence_is_triangular() {
        for e in [0i64, 2, 3] {
            let g = ground(e, &[0]);
            let reports = verify_word_independence(&g, 5, 40, 31, DEFAULT_BUDGET).unwrap();
            for rep in reports {
                assert!(rep.failures.is_empty(), "{:?}", rep.failures);
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let g = ground(2, &[0]);
        let rw = Rewriter::with_options(&g, Strategy::RightFold, 3);
        let i = res(&g, &[0, 1, 0, 1]);
        let toks = [
            Token::Psi(1),
            Token::Psi(2),
            Token::Psi(1),
            Token::Psi(3),
            Token::Psi(2),
            Token::Psi(1),
            Token::E(i),
        ];
        assert_eq!(
            rw.normal_form_tokens(&toks, 4),
            Err(KlrError::BudgetExhausted { limit: 3 })
        );
    }

    #[test]
    fn parser_round_trips() {
        let g = ground(2, &[0]);
        let rw = Rewriter::new(&g);
        let raw = parse_element("p1 y2 e(0,1) - 3 e(1,0)", &g).unwrap();
        assert_eq!(element_rank(&raw), Some(2));
        let x = rw.normal_form(&raw, 2).unwrap();
        let reparsed = parse_element(&x.to_string(), &g).unwrap();
        assert_eq!(rw.normal_form(&reparsed, 2).unwrap(), x);
        // Zero round trip.
        assert!(parse_element("0", &g).unwrap().is_empty());
        assert_eq!(KlrElement::zero(2).to_string(), "0");
        // Residues canonicalize modulo e.
        let raw = parse_element("e(2,-1)", &g).unwrap();
        let x = rw.normal_form(&raw, 2).unwrap();
        assert_eq!(x, KlrElement::idempotent(&res(&g, &[0, 1])));
    }

    #[test]
    fn parser_rejects_malformed_input() {
        let g = ground(2, &[0]);
        for bad in ["", "e(", "q1", "1 +", "e(0,1) ** 2", "y e(0)"] {
            assert!(parse_element(bad, &g).is_err(), "accepted {bad:?}");
        }
        // Terms without any idempotent fail at normalization.
        let raw = parse_element("y1 p1", &g).unwrap();
        let rw = Rewriter::new(&g);
        assert_eq!(rw.normal_form(&raw, 2), Err(KlrError::NoIdempotent));
    }

    #[test]
    fn cross_content_sums_are_rejected() {
        let g = ground(3, &[0]);
        let rw = Rewriter::new(&g);
        let raw = parse_element("e(0,0) + e(0,1)", &g).unwrap();
        assert_eq!(rw.normal_form(&raw, 2), Err(KlrError::ContentMismatch));
    }

    #[test]
    fn monomial_constructor_validates_words() {
        let g = ground(2, &[0]);
        let i = res(&g, &[0, 1, 0]);
        assert!(KlrElement::monomial(&[1, 2], &[0, 0, 0], &i, BigInt::one()).is_ok());
        // (2,1) is reduced but not the preferred word of its permutation
        // unless it is... s_2 s_1 has preferred word [1, 2]? No: s_2 s_1
        // sends 1 -> 3: min left descent is 2, so preferred is [2, 1].
        assert!(KlrElement::monomial(&[1, 1], &[0, 0, 0], &i, BigInt::one()).is_err());
    }

    #[test]
    fn left_multiply_matches_token_fold() {
        let g = ground(3, &[0]);
        let rw = Rewriter::new(&g);
        let i = res(&g, &[0, 1, 2, 0]);
        let x = nf(
            &rw,
            &[Token::Psi(2), Token::Psi(3), Token::E(i.clone())],
            4,
        );
        let lhs = rw
            .left_multiply(&[Token::Psi(1), Token::Y(2)], &x)
            .unwrap();
        let rhs = nf(
            &rw,
            &[
                Token::Psi(1),
                Token::Y(2),
                Token::Psi(2),
                Token::Psi(3),
                Token::E(i),
            ],
            4,
        );
        assert_eq!(lhs, rhs);
    }
}

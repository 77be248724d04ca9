//! Ground Lie-theoretic data.
//!
//! The quiver is of type `A_infinity` when `e = 0` and `A^(1)_{e-1}` when
//! `e >= 2`, with vertex set `I = Z/eZ` and a directed edge `i -> j` exactly
//! when `j = i - 1`. Everything downstream (residues of nodes, contents,
//! defects, degrees of KLR generators) is driven by the data collected here:
//! the parameter `e`, the multicharge, the Cartan pairing, and the derived
//! weight `Lambda`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Errors arising from ground-data construction and the pairing operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    /// The quiver parameter must satisfy `e = 0` or `e >= 2`.
    #[error("quiver parameter e must be 0 or >= 2, got {0}")]
    InvalidE(i64),
    /// The multicharge must have at least one entry.
    #[error("multicharge must be nonempty")]
    EmptyMulticharge,
    /// There is no null root in type `A_infinity`.
    #[error("the null root requires e > 0 (type A_infinity has none)")]
    NullRootUndefined,
    /// `(Lambda, alpha) - (alpha, alpha)/2` failed to be an integer; the
    /// payload is twice the exact value, so the diagnostic rational is
    /// `twice_value / 2`.
    #[error("defect is not an integer: exact value {twice_value}/2")]
    NonIntegralDefect { twice_value: i64 },
}

/// A canonical residue: an element of `I = Z/eZ` stored as its least
/// nonnegative representative, or a plain integer when `e = 0`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Residue(i64);

impl Residue {
    /// The stored canonical representative.
    pub fn value(self) -> i64 {
        self.0
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of the positive root lattice `Q_+`: a finitely supported map
/// `Residue -> nonnegative coefficient`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RootElement {
    coeffs: BTreeMap<Residue, u64>,
}

impl RootElement {
    /// The zero element of `Q_+`.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The simple root `alpha_i`.
    pub fn simple(i: Residue) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(i, 1);
        Self { coeffs }
    }

    /// Builds an element from `(residue, coefficient)` pairs, dropping zeros
    /// and summing repeats.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Residue, u64)>) -> Self {
        let mut out = Self::zero();
        for (i, c) in pairs {
            out.add_assign_simple(i, c);
        }
        out
    }

    /// Adds `c * alpha_i` in place.
    pub fn add_assign_simple(&mut self, i: Residue, c: u64) {
        if c == 0 {
            return;
        }
        *self.coeffs.entry(i).or_insert(0) += c;
    }

    /// The coefficient of `alpha_i`.
    pub fn coeff(&self, i: Residue) -> u64 {
        self.coeffs.get(&i).copied().unwrap_or(0)
    }

    /// Iterates over the nonzero `(residue, coefficient)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (Residue, u64)> + '_ {
        self.coeffs.iter().map(|(&i, &c)| (i, c))
    }

    /// The height `ht(alpha)`: the sum of the coefficients.
    pub fn height(&self) -> u64 {
        self.coeffs.values().sum()
    }

    /// Sum of two lattice elements.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, c) in other.iter() {
            out.add_assign_simple(i, c);
        }
        out
    }
}

/// A dominant weight of the form `Lambda = sum_m Lambda_{k_m}`: a finitely
/// supported map `Residue -> multiplicity`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WeightElement {
    coeffs: BTreeMap<Residue, u64>,
}

impl WeightElement {
    /// The fundamental weight `Lambda_i`.
    pub fn fundamental(i: Residue) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(i, 1);
        Self { coeffs }
    }

    /// The coefficient of `Lambda_i`.
    pub fn coeff(&self, i: Residue) -> u64 {
        self.coeffs.get(&i).copied().unwrap_or(0)
    }

    /// Iterates over the nonzero `(residue, multiplicity)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (Residue, u64)> + '_ {
        self.coeffs.iter().map(|(&i, &c)| (i, c))
    }

    /// The level: total multiplicity.
    pub fn level(&self) -> u64 {
        self.coeffs.values().sum()
    }
}

/// The quiver parameter `e`, the multicharge, and the pairings derived from
/// them. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroundData {
    e: i64,
    charge: Vec<Residue>,
}

impl GroundData {
    /// Validates `e` (zero or at least two) and canonicalizes the multicharge.
    pub fn new(e: i64, charge: &[i64]) -> Result<Self, GroundError> {
        if e < 0 || e == 1 {
            return Err(GroundError::InvalidE(e));
        }
        if charge.is_empty() {
            return Err(GroundError::EmptyMulticharge);
        }
        let mut g = GroundData { e, charge: Vec::new() };
        g.charge = charge.iter().map(|&k| g.residue(k)).collect();
        Ok(g)
    }

    /// The quiver parameter.
    pub fn e(&self) -> i64 {
        self.e
    }

    /// The level `l`: the number of multicharge entries.
    pub fn level(&self) -> usize {
        self.charge.len()
    }

    /// The canonicalized multicharge `(k_1, ..., k_l)`.
    pub fn charge(&self) -> &[Residue] {
        &self.charge
    }

    /// Canonicalizes an integer to its residue: reduction mod `e` when
    /// `e > 0`, the integer itself when `e = 0`.
    pub fn residue(&self, v: i64) -> Residue {
        if self.e == 0 {
            Residue(v)
        } else {
            Residue(v.rem_euclid(self.e))
        }
    }

    /// The residue `i + n`.
    pub fn residue_shift(&self, i: Residue, n: i64) -> Residue {
        self.residue(i.0 + n)
    }

    /// The derived weight `Lambda = Lambda_{k_1} + ... + Lambda_{k_l}`.
    pub fn weight(&self) -> WeightElement {
        let mut coeffs = BTreeMap::new();
        for &k in &self.charge {
            *coeffs.entry(k).or_insert(0) += 1;
        }
        WeightElement { coeffs }
    }

    /// The Cartan pairing `a_{ij} = (alpha_i, alpha_j)`: `2` on the diagonal,
    /// `-1` for a single edge either way, `-2` for the doubled edge of the
    /// two-vertex cycle (`e = 2` only), `0` otherwise.
    pub fn cartan_pairing(&self, i: Residue, j: Residue) -> i64 {
        if i == j {
            return 2;
        }
        let neighbor_up = self.residue_shift(i, 1) == j;
        let neighbor_down = self.residue_shift(i, -1) == j;
        match (neighbor_up, neighbor_down) {
            (true, true) => -2,
            (true, false) | (false, true) => -1,
            (false, false) => 0,
        }
    }

    /// Bilinear extension of the Cartan pairing to `Q_+ x Q_+`.
    pub fn root_pairing(&self, alpha: &RootElement, beta: &RootElement) -> i64 {
        let mut total = 0;
        for (i, a) in alpha.iter() {
            for (j, b) in beta.iter() {
                total += (a as i64) * (b as i64) * self.cartan_pairing(i, j);
            }
        }
        total
    }

    /// Bilinear extension of `(Lambda_i, alpha_j) = delta_{ij}`.
    pub fn weight_root_pairing(&self, weight: &WeightElement, alpha: &RootElement) -> i64 {
        let mut total = 0;
        for (i, c) in weight.iter() {
            total += (c as i64) * (alpha.coeff(i) as i64);
        }
        total
    }

    /// The defect `def(alpha) = (Lambda, alpha) - (alpha, alpha)/2` for the
    /// derived weight `Lambda`. Errors when the value is not an integer (the
    /// exact rational is reported in the error), which signals that `alpha`
    /// is not the content of any multipartition for this multicharge.
    pub fn defect(&self, alpha: &RootElement) -> Result<i64, GroundError> {
        let twice = 2 * self.weight_root_pairing(&self.weight(), alpha)
            - self.root_pairing(alpha, alpha);
        if twice % 2 != 0 {
            return Err(GroundError::NonIntegralDefect { twice_value: twice });
        }
        Ok(twice / 2)
    }

    /// The null root `delta = alpha_0 + alpha_1 + ... + alpha_{e-1}`.
    /// Defined only for `e > 0`.
    pub fn null_root(&self) -> Result<RootElement, GroundError> {
        if self.e == 0 {
            return Err(GroundError::NullRootUndefined);
        }
        Ok(RootElement::from_pairs(
            (0..self.e).map(|v| (Residue(v), 1)),
        ))
    }

    /// The conjugate multicharge `kappa' = (-k_l, ..., -k_1)`, canonicalized.
    pub fn conjugate_multicharge(&self) -> Vec<Residue> {
        self.charge
            .iter()
            .rev()
            .map(|&k| self.residue(-k.0))
            .collect()
    }

    /// Ground data with the same `e` and the conjugate multicharge.
    pub fn conjugate(&self) -> GroundData {
        GroundData {
            e: self.e,
            charge: self.conjugate_multicharge(),
        }
    }

    /// The conjugate root `alpha' = sum_i a_i alpha_{-i}`.
    pub fn conjugate_root(&self, alpha: &RootElement) -> RootElement {
        RootElement::from_pairs(alpha.iter().map(|(i, c)| (self.residue(-i.0), c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(e: i64, charge: &[i64]) -> GroundData {
        GroundData::new(e, charge).unwrap()
    }

    /// Independent four-case table for the Cartan pairing, written directly
    /// from the quiver: `i -> j` iff `j = i - 1`, so the doubled edge occurs
    /// exactly when `i + 1 = j = i - 1` mod `e`, which forces `e = 2`.
    fn cartan_oracle(e: i64, i: i64, j: i64) -> i64 {
        let eq = |a: i64, b: i64| {
            if e == 0 {
                a == b
            } else {
                (a - b).rem_euclid(e) == 0
            }
        };
        if eq(i, j) {
            2
        } else if eq(i + 1, j) && eq(i - 1, j) {
            -2
        } else if eq(i + 1, j) || eq(i - 1, j) {
            -1
        } else {
            0
        }
    }

    #[test]
    fn e_validation() {
        assert_eq!(GroundData::new(1, &[0]), Err(GroundError::InvalidE(1)));
        assert_eq!(GroundData::new(-3, &[0]), Err(GroundError::InvalidE(-3)));
        assert_eq!(GroundData::new(2, &[]), Err(GroundError::EmptyMulticharge));
        assert!(GroundData::new(0, &[5]).is_ok());
        assert!(GroundData::new(2, &[0, 1]).is_ok());
    }

    #[test]
    fn residues_are_canonical() {
        let g2 = g(2, &[0]);
        assert_eq!(g2.residue(-1).value(), 1);
        assert_eq!(g2.residue(7).value(), 1);
        let g0 = g(0, &[0]);
        assert_eq!(g0.residue(-13).value(), -13);
        assert_eq!(g(3, &[5]).charge()[0].value(), 2);
    }

    #[test]
    fn cartan_pairing_table() {
        let g3 = g(3, &[0]);
        assert_eq!(g3.cartan_pairing(g3.residue(0), g3.residue(0)), 2);
        assert_eq!(g3.cartan_pairing(g3.residue(0), g3.residue(2)), -1);
        assert_eq!(g3.cartan_pairing(g3.residue(0), g3.residue(1)), -1);
        let g2 = g(2, &[0]);
        assert_eq!(g2.cartan_pairing(g2.residue(0), g2.residue(1)), -2);
        let g0 = g(0, &[0]);
        assert_eq!(g0.cartan_pairing(g0.residue(4), g0.residue(5)), -1);
        assert_eq!(g0.cartan_pairing(g0.residue(4), g0.residue(6)), 0);
    }

    #[test]
    fn cartan_pairing_matches_oracle_and_is_symmetric() {
        for e in [0, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12] {
            let gd = g(e, &[0]);
            let range: Vec<i64> = if e == 0 { (-6..=6).collect() } else { (0..e).collect() };
            for &i in &range {
                for &j in &range {
                    let (ri, rj) = (gd.residue(i), gd.residue(j));
                    assert_eq!(gd.cartan_pairing(ri, rj), cartan_oracle(e, i, j), "e={e} i={i} j={j}");
                    assert_eq!(
                        gd.cartan_pairing(ri, rj),
                        gd.cartan_pairing(rj, ri),
                        "symmetry e={e} i={i} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn root_pairing_bilinear() {
        let g2 = g(2, &[0]);
        let delta = g2.null_root().unwrap();
        // Oracle: expand (delta, delta) bilinearly with a_00 = a_11 = 2 and
        // a_01 = a_10 = -2.
        assert_eq!(2 + 2 - 2 - 2, 0);
        assert_eq!(g2.root_pairing(&delta, &delta), 0);
        let zero = RootElement::zero();
        assert_eq!(g2.root_pairing(&delta, &zero), 0);
        let alpha0 = RootElement::simple(g2.residue(0));
        assert_eq!(
            g2.weight_root_pairing(&WeightElement::fundamental(g2.residue(0)), &alpha0),
            1
        );
    }

    #[test]
    fn null_root_isotropy_all_e() {
        for e in [2, 3, 4, 5, 6] {
            let gd = g(e, &[0]);
            let delta = gd.null_root().unwrap();
            assert_eq!(delta.height(), e as u64);
            assert_eq!(gd.root_pairing(&delta, &delta), 0, "e={e}");
            for i in 0..e {
                let li = WeightElement::fundamental(gd.residue(i));
                assert_eq!(gd.weight_root_pairing(&li, &delta), 1, "e={e} i={i}");
            }
        }
        assert_eq!(g(0, &[0]).null_root(), Err(GroundError::NullRootUndefined));
    }

    #[test]
    fn defect_values() {
        let g2 = g(2, &[0]);
        assert_eq!(g2.defect(&RootElement::zero()), Ok(0));
        // Oracle: (Lambda_0, delta) = 1 and (delta, delta) = 0.
        assert_eq!(g2.defect(&g2.null_root().unwrap()), Ok(1));
        // Oracle: (Lambda_0, alpha_0) = 1 and (alpha_0, alpha_0)/2 = 1.
        assert_eq!(g2.defect(&RootElement::simple(g2.residue(0))), Ok(0));
        // A single alpha_1 under charge (0): (Lambda, alpha_1) = 0, so the
        // defect is -1; still an integer.
        assert_eq!(g2.defect(&RootElement::simple(g2.residue(1))), Ok(-1));
    }

    #[test]
    fn conjugate_multicharge_cases() {
        assert_eq!(
            g(2, &[0, 0]).conjugate_multicharge(),
            vec![g(2, &[0]).residue(0), g(2, &[0]).residue(0)]
        );
        // Negate-and-reverse: (1,2) -> (-2,-1) -> (1,2) mod 3.
        let g3 = g(3, &[1, 2]);
        assert_eq!(
            g3.conjugate_multicharge(),
            vec![g3.residue(1), g3.residue(2)]
        );
        let g0 = g(0, &[3]);
        assert_eq!(g0.conjugate_multicharge(), vec![g0.residue(-3)]);
    }

    #[test]
    fn conjugation_involutions() {
        for (e, charge) in [(2i64, vec![0i64, 1]), (3, vec![1, 2, 0]), (0, vec![3, -2])] {
            let gd = g(e, &charge);
            assert_eq!(gd.conjugate().conjugate(), gd);
            let alpha = RootElement::from_pairs([
                (gd.residue(0), 2),
                (gd.residue(1), 1),
                (gd.residue(-1), 3),
            ]);
            assert_eq!(gd.conjugate_root(&gd.conjugate_root(&alpha)), alpha);
        }
    }

    #[test]
    fn conjugate_root_cases() {
        let g3 = g(3, &[0]);
        let two_alpha1 = RootElement::from_pairs([(g3.residue(1), 2)]);
        let two_alpha2 = RootElement::from_pairs([(g3.residue(2), 2)]);
        assert_eq!(g3.conjugate_root(&two_alpha1), two_alpha2);
        for e in [2, 3, 5] {
            let gd = g(e, &[0]);
            let delta = gd.null_root().unwrap();
            assert_eq!(gd.conjugate_root(&delta), delta, "delta is self-conjugate, e={e}");
        }
        assert_eq!(g3.conjugate_root(&RootElement::zero()), RootElement::zero());
        let alpha = RootElement::from_pairs([(g3.residue(1), 4)]);
        assert_eq!(g3.conjugate_root(&alpha).height(), alpha.height());
    }
}

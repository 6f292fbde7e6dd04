//! Canonical witness mappings and pair-level criteria.
//!
//! On an MV-effect algebra the lattice meet `⋀` is a witness mapping for every
//! finite subset. For pairwise commuting Hermitian effects the ordered
//! matrix product `Π` is one. For pairs, a witness mapping is the same thing
//! as a witness element `c ≤ a, b` with `a ⊥ b ⊖ c`.

use alloc::vec::Vec;

use crate::effects::{Effect, IntervalEffectAlgebra};
use crate::groups::{Group, GroupElement, HermitianMatrix};
use crate::witness::{d_value, BetaTable, GroundSet, SubsetKey};
use crate::{Error, Result};

pub const DEFAULT_COMMUTE_TOLERANCE: f64 = 1e-10;

/// Bound on `‖D_Π(X, A∪{c}) − (I−c)·D_Π(X, A)‖_max`.
pub const FACTORIZATION_TOLERANCE: f64 = 1e-12;

// Products of commuting effects are only Hermitian up to rounding.
const PRODUCT_HERMITICITY_TOLERANCE: f64 = 1e-8;

/// An interval effect algebra that passed [`IntervalEffectAlgebra::mv_check`].
#[derive(Clone, Copy, Debug)]
pub struct MvEffectAlgebra<'a> {
    alg: &'a IntervalEffectAlgebra,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeetMismatch {
    pub x: SubsetKey,
    pub a: SubsetKey,
    pub closed_form: Effect,
    pub mobius: GroupElement,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeetCheckReport {
    pub comparisons: usize,
    pub mismatch: Option<MeetMismatch>,
}

impl MeetCheckReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl<'a> MvEffectAlgebra<'a> {
    pub fn new(alg: &'a IntervalEffectAlgebra) -> Result<Self> {
        match alg.mv_check() {
            Ok(report) if report.passed() => Ok(MvEffectAlgebra { alg }),
            Ok(_) | Err(Error::NotLattice) => Err(Error::NotMV),
            Err(e) => Err(e),
        }
    }

    pub fn algebra(&self) -> &'a IntervalEffectAlgebra {
        self.alg
    }

    /// `β(X) = ⋀X`, with `β(∅) = u`.
    pub fn meet_witness(&self, ground: GroundSet) -> Result<BetaTable> {
        let elems = ground.elements().to_vec();
        BetaTable::from_fn(ground, |x| self.alg.meet_all(x.indices().map(|i| &elems[i])))
    }

    /// `D_∧(X, A) = ⋀X ⊖ (⋀X ∧ ⋁(A∖X))`.
    pub fn dwedge_closed_form(&self, ground: &GroundSet, x: SubsetKey, a: SubsetKey) -> Result<Effect> {
        if !x.is_subset_of(a) {
            return Err(Error::NotComparable);
        }
        if !a.is_subset_of(ground.full()) {
            return Err(Error::Precondition("index set is not a subset of the ground set"));
        }
        let elems = ground.elements();
        let mx = self.alg.meet_all(x.indices().map(|i| &elems[i]))?;
        let jr = self.alg.join_all(a.difference(x).indices().map(|i| &elems[i]))?;
        self.alg.ominus(&mx, &self.alg.meet(&mx, &jr)?)
    }

    /// Compares the closed form with the Möbius sum of `⋀` for every `X ⊆ A ⊆ S`.
    pub fn meet_witness_check(&self, ground: GroundSet) -> Result<MeetCheckReport> {
        let beta = self.meet_witness(ground)?;
        self.closed_form_check(&beta)
    }

    /// Compares the closed form with the Möbius sum of an arbitrary table on
    /// the same ground set; stops at the first mismatch in `(A, X)` order.
    pub fn closed_form_check(&self, beta: &BetaTable) -> Result<MeetCheckReport> {
        let ground = beta.ground();
        let mut comparisons = 0;
        for a in ground.subsets() {
            for x in a.subsets() {
                comparisons += 1;
                let closed_form = self.dwedge_closed_form(ground, x, a)?;
                let mobius = d_value(beta, x, a)?;
                if !self.alg.group().equals(closed_form.value(), &mobius)? {
                    return Ok(MeetCheckReport { comparisons, mismatch: Some(MeetMismatch { x, a, closed_form, mobius }) });
                }
            }
        }
        Ok(MeetCheckReport { comparisons, mismatch: None })
    }
}

fn hermitian_parts<'e>(alg: &IntervalEffectAlgebra, effects: &'e [Effect]) -> Result<Vec<&'e HermitianMatrix>> {
    if !matches!(alg.group(), Group::Hermitian(_)) {
        return Err(Error::UnsupportedCarrier("expected a Hermitian carrier"));
    }
    effects.iter().map(|e| e.value().as_hermitian().ok_or(Error::GroupMismatch)).collect()
}

/// `(first, second, ‖xy − yx‖_max)`
type OffendingPair = (usize, usize, f64);

/// Largest commutator norm over all pairs, with the first pair exceeding `tol`.
fn commutation_scan(mats: &[&HermitianMatrix], tol: f64) -> Result<(f64, Option<OffendingPair>)> {
    let mut max = 0.0f64;
    let mut first = None;
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let r = mats[i].commutator_norm(mats[j])?;
            max = max.max(r);
            if r > tol && first.is_none() {
                first = Some((i, j, r));
            }
        }
    }
    Ok((max, first))
}

/// `β(X) = x_{i_1}·…·x_{i_k}` in ascending index order, `β(∅) = I`.
pub fn product_witness(alg: &IntervalEffectAlgebra, ground: GroundSet, commute_tol: f64) -> Result<BetaTable> {
    let mats: Vec<HermitianMatrix> = hermitian_parts(alg, ground.elements())?.into_iter().cloned().collect();
    let refs: Vec<&HermitianMatrix> = mats.iter().collect();
    if let (_, Some((first, second, residual))) = commutation_scan(&refs, commute_tol)? {
        return Err(Error::NotCommuting { first, second, residual });
    }
    let dim = alg.group().dimension();
    BetaTable::from_fn(ground, |x| {
        let mut acc = HermitianMatrix::identity(dim);
        for i in x.indices() {
            acc = acc.hermitian_product(&mats[i], PRODUCT_HERMITICITY_TOLERANCE)?;
        }
        alg.make_effect(GroupElement::Hermitian(acc))
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationCheck {
    pub residual: f64,
    pub tolerance: f64,
}

impl FactorizationCheck {
    pub fn holds(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// `D_Π(X, A∪{c}) = (I − c)·D_Π(X, A)` for `X ⊆ A`, `c ∉ A`; `c` is a ground index.
pub fn product_factorization_check(
    alg: &IntervalEffectAlgebra,
    beta: &BetaTable,
    x: SubsetKey,
    a: SubsetKey,
    c: usize,
) -> Result<FactorizationCheck> {
    let mats = hermitian_parts(alg, beta.ground().elements())?;
    if !x.is_subset_of(a) {
        return Err(Error::NotComparable);
    }
    if c >= mats.len() || a.contains(c) {
        return Err(Error::Precondition("c must be a ground element outside A"));
    }
    let dim = alg.group().dimension();
    let lhs = d_value(beta, x, a.union(SubsetKey::singleton(c)))?;
    let lhs = lhs.as_hermitian().ok_or(Error::GroupMismatch)?;
    let d = d_value(beta, x, a)?;
    let rhs = HermitianMatrix::identity(dim).sub(mats[c])?.mul_raw(d.as_hermitian().ok_or(Error::GroupMismatch)?)?;
    let residual = lhs
        .entries()
        .iter()
        .zip(&rhs)
        .map(|(p, q)| libm::hypot(p.re - q.re, p.im - q.im))
        .fold(0.0, f64::max);
    Ok(FactorizationCheck { residual, tolerance: FACTORIZATION_TOLERANCE })
}

/// `c ≤ a`, `c ≤ b` and `a + (b − c) ≤ u`.
pub fn pair_witness_condition(alg: &IntervalEffectAlgebra, a: &Effect, b: &Effect, c: &Effect) -> bool {
    if !(alg.leq(c, a) && alg.leq(c, b)) {
        return false;
    }
    match alg.ominus(b, c) {
        Ok(bc) => alg.is_perp(a, &bc),
        Err(_) => false,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairWitnessResult {
    pub pair: (Effect, Effect),
    pub witnesses: Vec<Effect>,
    /// True iff every element of the algebra was tried.
    pub exhaustive: bool,
}

impl PairWitnessResult {
    pub fn found(&self) -> bool {
        !self.witnesses.is_empty()
    }
}

/// All witness elements for `{a, b}`, in the carrier's enumeration order.
pub fn pair_witness_search(alg: &IntervalEffectAlgebra, a: &Effect, b: &Effect) -> Result<PairWitnessResult> {
    let all = alg.elements()?;
    let witnesses = all.iter().filter(|c| pair_witness_condition(alg, a, b, c)).cloned().collect();
    Ok(PairWitnessResult { pair: (a.clone(), b.clone()), witnesses, exhaustive: true })
}

/// Tries only the given candidates. An empty result is inconclusive.
pub fn pair_witness_candidates(alg: &IntervalEffectAlgebra, a: &Effect, b: &Effect, candidates: &[Effect]) -> PairWitnessResult {
    let witnesses = candidates.iter().filter(|c| pair_witness_condition(alg, a, b, c)).cloned().collect();
    PairWitnessResult { pair: (a.clone(), b.clone()), witnesses, exhaustive: false }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionReport {
    pub coexistent: bool,
    /// First pair (by index) whose commutator norm exceeds the tolerance.
    pub non_commuting: Option<(usize, usize, f64)>,
    pub max_commutator: f64,
    pub max_idempotence_residual: f64,
    pub tolerance: f64,
}

/// A set of projections is coexistent iff its elements pairwise commute.
pub fn projection_set_coexistence(alg: &IntervalEffectAlgebra, effects: &[Effect], tol: f64) -> Result<ProjectionReport> {
    let mats = hermitian_parts(alg, effects)?;
    let mut max_idem = 0.0f64;
    for (index, m) in mats.iter().enumerate() {
        let sq = HermitianMatrix::new(m.dimension(), m.mul_raw(m)?, f64::INFINITY)?;
        let residual = sq.max_abs_diff(m)?;
        if residual > tol {
            return Err(Error::NotProjection { index, residual });
        }
        max_idem = max_idem.max(residual);
    }
    let (max_commutator, non_commuting) = commutation_scan(&mats, tol)?;
    Ok(ProjectionReport {
        coexistent: non_commuting.is_none(),
        non_commuting,
        max_commutator,
        max_idempotence_residual: max_idem,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::witness::verify_witness;
    use alloc::vec;

    fn int(alg: &IntervalEffectAlgebra, v: &[i64]) -> Effect {
        alg.make_effect(GroupElement::int(v)).unwrap()
    }

    fn herm(alg: &IntervalEffectAlgebra, rows: &[&[f64]]) -> Effect {
        alg.make_effect(GroupElement::Hermitian(HermitianMatrix::from_real_rows(rows, 1e-12).unwrap())).unwrap()
    }

    #[test]
    fn meet_witness_values() {
        let alg = fixtures::c2xc3();
        let mv = MvEffectAlgebra::new(&alg).unwrap();
        let ground = GroundSet::new(&alg, vec![int(&alg, &[1, 1]), int(&alg, &[0, 2])]).unwrap();
        let beta = mv.meet_witness(ground).unwrap();
        assert_eq!(beta.get(SubsetKey::EMPTY), &alg.unit_effect());
        assert_eq!(beta.get(SubsetKey::from_bits(0b11)), &int(&alg, &[0, 1]));
        assert!(verify_witness(&alg, &beta).unwrap().passed());
    }

    #[test]
    fn closed_form_examples() {
        let alg = fixtures::c2xc3();
        let mv = MvEffectAlgebra::new(&alg).unwrap();
        let ground = GroundSet::new(&alg, vec![int(&alg, &[1, 1]), int(&alg, &[0, 2])]).unwrap();
        let d = mv.dwedge_closed_form(&ground, SubsetKey::singleton(0), SubsetKey::from_bits(0b11)).unwrap();
        assert_eq!(d, int(&alg, &[1, 0]));
        // A = X gives ⋀X
        let d = mv.dwedge_closed_form(&ground, SubsetKey::from_bits(0b11), SubsetKey::from_bits(0b11)).unwrap();
        assert_eq!(d, int(&alg, &[0, 1]));

        let alg = fixtures::bool2();
        let mv = MvEffectAlgebra::new(&alg).unwrap();
        let ground = GroundSet::new(&alg, vec![int(&alg, &[1, 0]), int(&alg, &[0, 1])]).unwrap();
        let d = mv.dwedge_closed_form(&ground, SubsetKey::EMPTY, SubsetKey::from_bits(0b11)).unwrap();
        assert_eq!(d, alg.zero_effect());
    }

    #[test]
    fn closed_form_check_locates_corruption() {
        let alg = fixtures::chain4();
        let mv = MvEffectAlgebra::new(&alg).unwrap();
        let ground = GroundSet::new(&alg, vec![int(&alg, &[1]), int(&alg, &[2]), int(&alg, &[3])]).unwrap();
        let report = mv.meet_witness_check(ground.clone()).unwrap();
        assert!(report.passed());
        assert_eq!(report.comparisons, 27);

        let mut beta = mv.meet_witness(ground).unwrap();
        beta.set(SubsetKey::from_bits(0b110), int(&alg, &[1]));
        let report = mv.closed_form_check(&beta).unwrap();
        let m = report.mismatch.unwrap();
        assert_eq!(m.a, SubsetKey::from_bits(0b110));
    }

    #[test]
    fn penta_is_not_mv() {
        let alg = fixtures::penta();
        assert_eq!(MvEffectAlgebra::new(&alg).unwrap_err(), Error::NotMV);
    }

    #[test]
    fn pair_conditions() {
        let alg = fixtures::chain4();
        let (a, b) = (int(&alg, &[1]), int(&alg, &[2]));
        assert!(pair_witness_condition(&alg, &a, &b, &alg.zero_effect()));
        let r = pair_witness_search(&alg, &a, &b).unwrap();
        assert_eq!(r.witnesses, vec![int(&alg, &[0]), int(&alg, &[1])]);
        assert!(r.exhaustive);
        assert!(pair_witness_search(&alg, &b, &b).unwrap().witnesses.contains(&b));

        let alg = fixtures::penta();
        let (a, b) = (int(&alg, &[1, 0]), int(&alg, &[1, 1]));
        assert!(!pair_witness_condition(&alg, &a, &b, &alg.zero_effect()));
        let r = pair_witness_search(&alg, &a, &b).unwrap();
        assert!(r.witnesses.is_empty() && r.exhaustive);
    }

    #[test]
    fn product_witness_diagonal() {
        let alg = fixtures::qubit();
        let a = herm(&alg, &[&[0.5, 0.0], &[0.0, 1.0]]);
        let b = herm(&alg, &[&[0.5, 0.0], &[0.0, 0.5]]);
        let ground = GroundSet::new(&alg, vec![a, b]).unwrap();
        let beta = product_witness(&alg, ground, DEFAULT_COMMUTE_TOLERANCE).unwrap();
        assert_eq!(beta.get(SubsetKey::EMPTY), &alg.unit_effect());
        let d = d_value(&beta, SubsetKey::EMPTY, SubsetKey::from_bits(0b11)).unwrap();
        let want = GroupElement::Hermitian(HermitianMatrix::diagonal(&[0.25, 0.0]));
        assert!(alg.group().residual(&d, &want).unwrap() < 1e-15);
        assert!(verify_witness(&alg, &beta).unwrap().passed());
        for (x, a, c) in [(0b00, 0b00, 0), (0b01, 0b01, 1), (0b00, 0b01, 1), (0b00, 0b10, 0)] {
            let f = product_factorization_check(&alg, &beta, SubsetKey::from_bits(x), SubsetKey::from_bits(a), c).unwrap();
            assert!(f.holds(), "{x} {a} {c}: {}", f.residual);
        }
    }

    #[test]
    fn product_witness_rejects_non_commuting() {
        let alg = fixtures::qubit();
        let p = herm(&alg, &[&[1.0, 0.0], &[0.0, 0.0]]);
        let q = herm(&alg, &[&[0.5, 0.5], &[0.5, 0.5]]);
        let ground = GroundSet::new(&alg, vec![p, q]).unwrap();
        match product_witness(&alg, ground, DEFAULT_COMMUTE_TOLERANCE) {
            Err(Error::NotCommuting { first: 0, second: 1, residual }) => assert!((residual - 0.5).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn projections() {
        let alg = fixtures::qubit();
        let p = herm(&alg, &[&[1.0, 0.0], &[0.0, 0.0]]);
        let q = herm(&alg, &[&[0.5, 0.5], &[0.5, 0.5]]);
        let r = projection_set_coexistence(&alg, &[p.clone(), q], 1e-12).unwrap();
        assert!(!r.coexistent);
        assert_eq!(r.non_commuting.map(|t| (t.0, t.1)), Some((0, 1)));
        assert!(projection_set_coexistence(&alg, core::slice::from_ref(&p), 1e-12).unwrap().coexistent);
        let p2 = herm(&alg, &[&[0.0, 0.0], &[0.0, 1.0]]);
        assert!(projection_set_coexistence(&alg, &[p, p2], 1e-12).unwrap().coexistent);
        let half = herm(&alg, &[&[0.5, 0.0], &[0.0, 0.5]]);
        assert!(matches!(projection_set_coexistence(&alg, &[half], 1e-12), Err(Error::NotProjection { index: 0, .. })));
    }
}

//! Simple observables induced by a witness mapping, and the projective
//! system they form.
//!
//! For a verified witness β and `A ⊆ S`, the family `(D_β(X, A))_{X ⊆ A}` is a
//! decomposition of unit, so `α_A(𝕏) = ⊕_{X ∈ 𝕏} D_β(X, A)` is a simple
//! observable on the powerset of `2^A`. Over all `A ⊆ S`, with connecting
//! maps `g_{U,V}(X) = X ∩ U`, these observables form a projective system
//! whose ranges cover `S`. That is the constructive certificate of
//! coexistence.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::effects::{Effect, IntervalEffectAlgebra};
use crate::witness::{verify_witness_capped, BetaTable, SubsetKey, VerifiedWitness, WitnessReport};
use crate::{Error, Result};

/// Largest outcome set that [`range_contains`] scans exhaustively.
pub const MAX_RANGE_OUTCOMES: usize = 20;

/// Compatibility condition (iii) is checked over every event `𝕏 ⊆ 2^U` when
/// `|2^U|` is at most this; larger `U` are checked atom by atom.
pub const DEFAULT_EXHAUSTIVE_OUTCOMES: usize = 8;

/// A morphism from the powerset of a finite outcome set into `E`, given by
/// its atoms. Outcomes are labelled by subsets of the ground set.
#[derive(Clone, Debug, PartialEq)]
pub struct SimpleObservable {
    outcomes: Vec<SubsetKey>,
    atoms: Vec<Effect>,
}

impl SimpleObservable {
    /// Validates that the atom values form a decomposition of unit.
    pub fn new(alg: &IntervalEffectAlgebra, outcomes: Vec<SubsetKey>, atoms: Vec<Effect>) -> Result<Self> {
        if outcomes.len() != atoms.len() {
            return Err(Error::TableSize { expected: outcomes.len(), actual: atoms.len() });
        }
        if !alg.decomposition_check(&atoms) {
            return Err(Error::Precondition("atoms do not form a decomposition of unit"));
        }
        Ok(SimpleObservable { outcomes, atoms })
    }

    pub fn outcomes(&self) -> &[SubsetKey] {
        &self.outcomes
    }

    pub fn atoms(&self) -> &[Effect] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcome_index(&self, key: SubsetKey) -> Option<usize> {
        self.outcomes.iter().position(|&o| o == key)
    }

    /// `α(𝕏)` for an event given as outcome indices; repeated indices count once.
    pub fn eval(&self, alg: &IntervalEffectAlgebra, event: &[usize]) -> Result<Effect> {
        let mut seen = alloc::vec![false; self.len()];
        let mut acc = alg.group().zero();
        for &i in event {
            if i >= self.len() {
                return Err(Error::UnknownOutcome(i));
            }
            if !core::mem::replace(&mut seen[i], true) {
                acc = acc.add(self.atoms[i].value())?;
            }
        }
        Ok(Effect::trusted(acc))
    }

    /// `α(𝕏)` for an event given by outcome labels.
    pub fn eval_keys(&self, alg: &IntervalEffectAlgebra, event: &[SubsetKey]) -> Result<Effect> {
        let idx = event
            .iter()
            .map(|&k| self.outcome_index(k).ok_or(Error::UnknownOutcome(k.bits() as usize)))
            .collect::<Result<Vec<_>>>()?;
        self.eval(alg, &idx)
    }
}

/// `α_A` with atoms `{X} ↦ D_β(X, A)` for `X ⊆ A`, outcomes in increasing order.
pub fn observable_from_witness(alg: &IntervalEffectAlgebra, witness: &VerifiedWitness, a: SubsetKey) -> Result<SimpleObservable> {
    if !a.is_subset_of(witness.ground().full()) {
        return Err(Error::Precondition("index set is not a subset of the ground set"));
    }
    let outcomes: Vec<SubsetKey> = a.subsets().collect();
    let atoms = outcomes
        .iter()
        .map(|&x| alg.make_effect(witness.d(x, a).ok_or(Error::NotComparable)?.clone()))
        .collect::<Result<Vec<_>>>()?;
    SimpleObservable::new(alg, outcomes, atoms)
}

/// Connecting map `g_{U,V}: 2^V → 2^U`, `X ↦ X ∩ U`.
pub fn connecting_map(u: SubsetKey, _v: SubsetKey, x: SubsetKey) -> SubsetKey {
    x.intersection(u)
}

/// The family `{α_A : A ⊆ S}` indexed by subset bitmask.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveSystem {
    ground_size: usize,
    observables: Vec<SimpleObservable>,
}

impl ProjectiveSystem {
    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn observable(&self, a: SubsetKey) -> Option<&SimpleObservable> {
        self.observables.get(a.bits() as usize)
    }

    pub fn indices(&self) -> impl Iterator<Item = SubsetKey> {
        SubsetKey::full(self.ground_size).subsets()
    }

    /// `(A, α_A)` in increasing order of `A`.
    pub fn iter(&self) -> impl Iterator<Item = (SubsetKey, &SimpleObservable)> {
        self.indices().zip(&self.observables)
    }
}

pub fn projective_system_from_witness(
    alg: &IntervalEffectAlgebra,
    witness: &VerifiedWitness,
    max_ground: usize,
) -> Result<ProjectiveSystem> {
    let n = witness.ground().len();
    if n > max_ground {
        return Err(Error::SizeExceeded { what: "ground set", limit: max_ground, actual: n });
    }
    let observables = SubsetKey::full(n)
        .subsets()
        .map(|a| observable_from_witness(alg, witness, a))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProjectiveSystem { ground_size: n, observables })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectiveCondition {
    /// `g_{U,U}` is the identity
    Identity,
    /// `g_{U,V} ∘ g_{V,W} = g_{U,W}`
    Composition,
    /// `α_U(𝕏) = α_V(g_{U,V}⁻¹(𝕏))`
    Compatibility,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveFailure {
    pub condition: ProjectiveCondition,
    pub u: SubsetKey,
    pub v: SubsetKey,
    /// The outcome (conditions i, ii) or the event's outcomes (iii).
    pub event: Vec<SubsetKey>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveReport {
    pub identity_checks: usize,
    pub composition_checks: usize,
    /// Number of `(U, V, 𝕏)` evaluations of condition (iii).
    pub compatibility_checks: usize,
    /// `(U, V)` pairs whose events were only checked atom by atom.
    pub atomwise_pairs: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub failures: Vec<ProjectiveFailure>,
}

impl ProjectiveReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn holds(&self, condition: ProjectiveCondition) -> bool {
        !self.failures.iter().any(|f| f.condition == condition)
    }
}

/// Verifies conditions (i)–(iii) of a projective system of simple observables.
///
/// (i) and (ii) are checked for every outcome. (iii) is checked for every
/// event `𝕏 ⊆ 2^U` when `2^|U| ≤ exhaustive_outcomes`, otherwise for every
/// atom (which implies the rest by additivity). The preimage `g⁻¹(𝕏)` is
/// computed directly as `{Y ⊆ V : Y ∩ U ∈ 𝕏}`.
pub fn check_projective(alg: &IntervalEffectAlgebra, sys: &ProjectiveSystem, exhaustive_outcomes: usize) -> Result<ProjectiveReport> {
    let g = alg.group();
    let full = SubsetKey::full(sys.ground_size);
    let mut report = ProjectiveReport {
        identity_checks: 0,
        composition_checks: 0,
        compatibility_checks: 0,
        atomwise_pairs: 0,
        max_residual: 0.0,
        tolerance: g.tolerance(),
        failures: Vec::new(),
    };

    for u in full.subsets() {
        for x in u.subsets() {
            report.identity_checks += 1;
            if connecting_map(u, u, x) != x {
                report.failures.push(ProjectiveFailure { condition: ProjectiveCondition::Identity, u, v: u, event: alloc::vec![x] });
            }
        }
    }

    for w in full.subsets() {
        for v in w.subsets() {
            for u in v.subsets() {
                for x in w.subsets() {
                    report.composition_checks += 1;
                    if connecting_map(u, v, connecting_map(v, w, x)) != connecting_map(u, w, x) {
                        report.failures.push(ProjectiveFailure { condition: ProjectiveCondition::Composition, u, v: w, event: alloc::vec![x] });
                    }
                }
            }
        }
    }

    for v in full.subsets() {
        let alpha_v = sys.observable(v).ok_or(Error::NotComparable)?;
        for u in v.subsets() {
            let alpha_u = sys.observable(u).ok_or(Error::NotComparable)?;
            // image[j]: index in α_U's outcomes of g(Y_j)
            let image: Vec<usize> = alpha_v
                .outcomes()
                .iter()
                .map(|&y| alpha_u.outcome_index(connecting_map(u, v, y)).ok_or(Error::UnknownOutcome(y.bits() as usize)))
                .collect::<Result<_>>()?;
            let m = alpha_u.len();
            let events: Vec<Vec<usize>> = if m <= exhaustive_outcomes && m < 64 {
                (0..(1u64 << m)).map(|mask| (0..m).filter(|&k| mask >> k & 1 == 1).collect()).collect()
            } else {
                report.atomwise_pairs += 1;
                let mut ev: Vec<Vec<usize>> = (0..m).map(|k| alloc::vec![k]).collect();
                ev.push((0..m).collect());
                ev
            };
            for event in events {
                report.compatibility_checks += 1;
                let lhs = alpha_u.eval(alg, &event)?;
                let preimage: Vec<usize> = (0..alpha_v.len()).filter(|&j| event.contains(&image[j])).collect();
                let rhs = alpha_v.eval(alg, &preimage)?;
                let residual = g.residual(lhs.value(), rhs.value())?;
                report.max_residual = report.max_residual.max(residual);
                if !g.equals(lhs.value(), rhs.value())? {
                    report.failures.push(ProjectiveFailure {
                        condition: ProjectiveCondition::Compatibility,
                        u,
                        v,
                        event: event.iter().map(|&k| alpha_u.outcomes()[k]).collect(),
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Finds an event whose value equals `e`, scanning events in increasing
/// bitmask order. Returns the event's outcome indices.
pub fn range_contains(alg: &IntervalEffectAlgebra, alpha: &SimpleObservable, e: &Effect) -> Result<Option<Vec<usize>>> {
    let m = alpha.len();
    if m > MAX_RANGE_OUTCOMES {
        return Err(Error::SizeExceeded { what: "observable outcomes", limit: MAX_RANGE_OUTCOMES, actual: m });
    }
    for mask in 0..(1u64 << m) {
        let event: Vec<usize> = (0..m).filter(|&k| mask >> k & 1 == 1).collect();
        if alg.effects_equal(&alpha.eval(alg, &event)?, e) {
            return Ok(Some(event));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RangeWitness {
    /// Index of the element in the ground set.
    pub element: usize,
    /// Index set `A` of the observable.
    pub index: SubsetKey,
    /// Outcomes of `α_A` whose value is the element.
    pub outcome_set: Vec<SubsetKey>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoexistenceCertificate {
    pub witness: VerifiedWitness,
    pub system: ProjectiveSystem,
    pub projective: ProjectiveReport,
    pub range_witnesses: Vec<RangeWitness>,
}

impl CoexistenceCertificate {
    /// All projective conditions hold and every element has a range witness.
    pub fn is_sound(&self) -> bool {
        self.projective.passed() && self.range_witnesses.len() == self.witness.ground().len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certification {
    Certified(Box<CoexistenceCertificate>),
    Refuted(WitnessReport),
}

/// Verifies β and, when it is a witness mapping, builds and checks the
/// projective system and the per-element range witnesses.
pub fn certify_coexistent(alg: &IntervalEffectAlgebra, beta: BetaTable, max_ground: usize) -> Result<Certification> {
    let report = verify_witness_capped(alg, &beta, max_ground)?;
    let witness = match VerifiedWitness::from_report(beta, report) {
        Ok(w) => w,
        Err(report) => return Ok(Certification::Refuted(report)),
    };
    let system = projective_system_from_witness(alg, &witness, max_ground)?;
    let projective = check_projective(alg, &system, DEFAULT_EXHAUSTIVE_OUTCOMES)?;
    let mut range_witnesses = Vec::new();
    for (i, a) in witness.ground().elements().iter().enumerate() {
        let index = SubsetKey::singleton(i);
        let alpha = system.observable(index).ok_or(Error::NotComparable)?;
        if let Some(event) = range_contains(alg, alpha, a)? {
            range_witnesses.push(RangeWitness {
                element: i,
                index,
                outcome_set: event.iter().map(|&k| alpha.outcomes()[k]).collect(),
            });
        }
    }
    Ok(Certification::Certified(Box::new(CoexistenceCertificate { witness, system, projective, range_witnesses })))
}

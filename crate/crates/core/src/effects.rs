//! Interval effect algebras `[0, u]` and their partial operations.
//!
//! `a ⊕ b` is defined iff `a + b ≤ u`, `b ⊖ a` iff `a ≤ b`, and
//! `a' = u − a`. On integer carriers the algebra is finite and can be
//! enumerated, which unlocks the lattice, MV and morphism diagnostics.

use alloc::borrow::Cow;
use alloc::vec::Vec;

use crate::groups::{Group, GroupElement, IntOrder, UnitalGroup};
use crate::{Error, Result};

/// Refuse to materialize carriers with more elements than this.
pub const MAX_ENUMERATED_EFFECTS: usize = 1 << 20;

/// A group element known to lie in `[0, u]`. Only [`IntervalEffectAlgebra::make_effect`]
/// (and operations of the algebra) produce these.
#[derive(Clone, Debug, PartialEq)]
pub struct Effect(GroupElement);

impl Effect {
    pub fn value(&self) -> &GroupElement {
        &self.0
    }

    pub fn into_value(self) -> GroupElement {
        self.0
    }

    // Callers guarantee 0 ≤ value ≤ u (e.g. a sub-sum of a decomposition of unit).
    pub(crate) fn trusted(value: GroupElement) -> Self {
        Effect(value)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalEffectAlgebra {
    ambient: UnitalGroup,
    elements: Option<Vec<Effect>>,
}

impl IntervalEffectAlgebra {
    pub fn new(ambient: UnitalGroup) -> Self {
        IntervalEffectAlgebra { ambient, elements: None }
    }

    /// Enumerates the carrier once and keeps the list (integer carriers only).
    pub fn with_cached_elements(mut self) -> Result<Self> {
        let elements = self.compute_elements()?;
        self.elements = Some(elements);
        Ok(self)
    }

    pub fn ambient(&self) -> &UnitalGroup {
        &self.ambient
    }

    pub fn group(&self) -> &Group {
        self.ambient.group()
    }

    pub fn unit(&self) -> &GroupElement {
        self.ambient.unit()
    }

    pub fn zero_effect(&self) -> Effect {
        Effect(self.group().zero())
    }

    pub fn unit_effect(&self) -> Effect {
        Effect(self.unit().clone())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.group(), Group::Int(_))
    }

    pub fn make_effect(&self, x: GroupElement) -> Result<Effect> {
        let g = self.group();
        if !g.contains(&x) {
            return Err(Error::GroupMismatch);
        }
        if g.is_positive(&x) && g.leq(&x, self.unit())? {
            Ok(Effect(x))
        } else {
            Err(Error::OutOfInterval)
        }
    }

    /// Equality under the algebra's identity semantics (exact or tolerance ball).
    pub fn effects_equal(&self, a: &Effect, b: &Effect) -> bool {
        self.group().equals(&a.0, &b.0).unwrap_or(false)
    }

    pub fn oplus(&self, a: &Effect, b: &Effect) -> Result<Effect> {
        let sum = a.0.add(&b.0)?;
        if self.group().leq(&sum, self.unit())? {
            Ok(Effect(sum))
        } else {
            Err(Error::Undefined)
        }
    }

    /// `b ⊖ a`, defined iff `a ≤ b`.
    pub fn ominus(&self, b: &Effect, a: &Effect) -> Result<Effect> {
        if self.group().leq(&a.0, &b.0)? {
            Ok(Effect(b.0.subtract(&a.0)?))
        } else {
            Err(Error::Undefined)
        }
    }

    pub fn orthosupplement(&self, a: &Effect) -> Result<Effect> {
        Ok(Effect(self.unit().subtract(&a.0)?))
    }

    pub fn is_perp(&self, a: &Effect, b: &Effect) -> bool {
        self.oplus(a, b).is_ok()
    }

    pub fn leq(&self, a: &Effect, b: &Effect) -> bool {
        self.group().leq(&a.0, &b.0).unwrap_or(false)
    }

    /// Group sum of a family of effects (not checked against `u`).
    pub fn sum<'a>(&self, parts: impl IntoIterator<Item = &'a Effect>) -> Result<GroupElement> {
        parts.into_iter().try_fold(self.group().zero(), |acc, p| acc.add(&p.0))
    }

    /// All effects in lexicographic order. Hermitian carriers are rejected.
    pub fn elements(&self) -> Result<Cow<'_, [Effect]>> {
        match &self.elements {
            Some(list) => Ok(Cow::Borrowed(list)),
            None => self.compute_elements().map(Cow::Owned),
        }
    }

    /// Same as [`elements`](Self::elements), always owned.
    pub fn enumerate_effects(&self) -> Result<Vec<Effect>> {
        self.elements().map(Cow::into_owned)
    }

    fn compute_elements(&self) -> Result<Vec<Effect>> {
        let Group::Int(g) = self.group() else {
            return Err(Error::UnsupportedCarrier("Hermitian carriers cannot be enumerated"));
        };
        let u = self.unit().as_int().ok_or(Error::GroupMismatch)?;
        let mut values = match g.order() {
            IntOrder::Coordinatewise => {
                let mut count: usize = 1;
                for &e in u.entries() {
                    count = count.saturating_mul(e as usize + 1);
                }
                if count > MAX_ENUMERATED_EFFECTS {
                    return Err(Error::SizeExceeded {
                        what: "effect algebra",
                        limit: MAX_ENUMERATED_EFFECTS,
                        actual: count,
                    });
                }
                let mut out = Vec::with_capacity(count);
                let mut cur = alloc::vec![0i64; u.dimension()];
                loop {
                    out.push(GroupElement::int(&cur));
                    // odometer, last coordinate fastest
                    let mut carried = true;
                    for i in (0..cur.len()).rev() {
                        if cur[i] < u.entries()[i] {
                            cur[i] += 1;
                            carried = false;
                            break;
                        }
                        cur[i] = 0;
                    }
                    if carried {
                        break;
                    }
                }
                out
            }
            IntOrder::Cone(cone) => {
                let members = cone.members_up_to(cone.weight(u));
                if members.len() > MAX_ENUMERATED_EFFECTS {
                    return Err(Error::SizeExceeded {
                        what: "effect algebra",
                        limit: MAX_ENUMERATED_EFFECTS,
                        actual: members.len(),
                    });
                }
                let mut out = Vec::new();
                for x in members {
                    if cone.contains(&u.checked_sub(&x)?) {
                        out.push(GroupElement::Int(x));
                    }
                }
                out
            }
        };
        values.sort_by(|a, b| a.as_int().cmp(&b.as_int()));
        Ok(values.into_iter().map(Effect).collect())
    }

    /// Greatest lower bound of `a` and `b` inside the algebra.
    pub fn meet(&self, a: &Effect, b: &Effect) -> Result<Effect> {
        if let (Group::Int(g), Some(x), Some(y)) = (self.group(), a.0.as_int(), b.0.as_int()) {
            if matches!(g.order(), IntOrder::Coordinatewise) {
                let v: Vec<i64> = x.entries().iter().zip(y.entries()).map(|(&p, &q)| p.min(q)).collect();
                return Ok(Effect(GroupElement::int(&v)));
            }
        }
        let all = self.elements()?;
        let lower: Vec<&Effect> = all.iter().filter(|c| self.leq(c, a) && self.leq(c, b)).collect();
        self.extremal(&lower, |l, m| self.leq(l, m))
    }

    /// Least upper bound of `a` and `b` inside the algebra.
    pub fn join(&self, a: &Effect, b: &Effect) -> Result<Effect> {
        if let (Group::Int(g), Some(x), Some(y)) = (self.group(), a.0.as_int(), b.0.as_int()) {
            if matches!(g.order(), IntOrder::Coordinatewise) {
                let v: Vec<i64> = x.entries().iter().zip(y.entries()).map(|(&p, &q)| p.max(q)).collect();
                return Ok(Effect(GroupElement::int(&v)));
            }
        }
        let all = self.elements()?;
        let upper: Vec<&Effect> = all.iter().filter(|c| self.leq(a, c) && self.leq(b, c)).collect();
        self.extremal(&upper, |l, m| self.leq(m, l))
    }

    // The unique candidate dominating every other one under `below(other, candidate)`.
    fn extremal(&self, candidates: &[&Effect], below: impl Fn(&Effect, &Effect) -> bool) -> Result<Effect> {
        let mut found = candidates.iter().filter(|&&c| candidates.iter().all(|&o| below(o, c)));
        match (found.next(), found.next()) {
            (Some(&c), None) => Ok(c.clone()),
            _ => Err(Error::NotLattice),
        }
    }

    /// Meet of a finite family; the empty meet is `u`.
    pub fn meet_all<'a>(&self, items: impl IntoIterator<Item = &'a Effect>) -> Result<Effect> {
        items.into_iter().try_fold(self.unit_effect(), |acc, x| self.meet(&acc, x))
    }

    /// Join of a finite family; the empty join is `0`.
    pub fn join_all<'a>(&self, items: impl IntoIterator<Item = &'a Effect>) -> Result<Effect> {
        items.into_iter().try_fold(self.zero_effect(), |acc, x| self.join(&acc, x))
    }

    /// Checks that the algebra is a lattice satisfying `(a∨b)⊖a = b⊖(a∧b)`
    /// for all ordered pairs, stopping at the first counterexample.
    pub fn mv_check(&self) -> Result<MvReport> {
        let all = self.elements()?;
        let mut pairs_checked = 0;
        for a in all.iter() {
            for b in all.iter() {
                pairs_checked += 1;
                let fail = |kind| {
                    Ok(MvReport { pairs_checked, counterexample: Some(MvCounterexample { a: a.clone(), b: b.clone(), kind }) })
                };
                let (join, meet) = match (self.join(a, b), self.meet(a, b)) {
                    (Ok(j), Ok(m)) => (j, m),
                    (Err(Error::NotLattice), _) | (_, Err(Error::NotLattice)) => return fail(MvFailure::NotLattice),
                    (Err(e), _) | (_, Err(e)) => return Err(e),
                };
                let lhs = self.ominus(&join, a)?;
                let rhs = self.ominus(b, &meet)?;
                if !self.effects_equal(&lhs, &rhs) {
                    return fail(MvFailure::Identity { lhs, rhs });
                }
            }
        }
        Ok(MvReport { pairs_checked, counterexample: None })
    }

    /// True iff the parts sum to `u`, with every prefix sum staying below `u`.
    pub fn decomposition_check(&self, parts: &[Effect]) -> bool {
        if parts.is_empty() {
            return false;
        }
        let g = self.group();
        let mut acc = g.zero();
        for p in parts {
            acc = match acc.add(&p.0) {
                Ok(s) => s,
                Err(_) => return false,
            };
            if !g.leq(&acc, self.unit()).unwrap_or(false) {
                return false;
            }
        }
        g.equals(&acc, self.unit()).unwrap_or(false)
    }

    /// Wraps `parts` as a decomposition of unit, dropping zero parts.
    pub fn decomposition(&self, parts: Vec<Effect>) -> Result<DecompositionOfUnit> {
        if !self.decomposition_check(&parts) {
            return Err(Error::Precondition("parts do not sum to the unit"));
        }
        let zero = self.zero_effect();
        let parts = parts.into_iter().filter(|p| !self.effects_equal(p, &zero)).collect();
        Ok(DecompositionOfUnit { parts })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MvFailure {
    NotLattice,
    Identity { lhs: Effect, rhs: Effect },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MvCounterexample {
    pub a: Effect,
    pub b: Effect,
    pub kind: MvFailure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MvReport {
    pub pairs_checked: usize,
    pub counterexample: Option<MvCounterexample>,
}

impl MvReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// A finite orthogonal family of nonzero effects summing to `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionOfUnit {
    parts: Vec<Effect>,
}

impl DecompositionOfUnit {
    pub fn parts(&self) -> &[Effect] {
        &self.parts
    }
}

/// A morphism of effect algebras given by its finite table.
#[derive(Clone, Debug)]
pub struct EAMorphism {
    source: IntervalEffectAlgebra,
    target: IntervalEffectAlgebra,
    pairs: Vec<(Effect, Effect)>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MorphismReport {
    /// Source elements with no image in the table.
    pub missing: Vec<Effect>,
    pub preserves_unit: bool,
    /// Orthogonal pairs `(a, b)` where `φ(a ⊕ b) = φ(a) ⊕ φ(b)` fails.
    pub additivity_violations: Vec<(Effect, Effect)>,
}

impl MorphismReport {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.preserves_unit && self.additivity_violations.is_empty()
    }
}

impl EAMorphism {
    /// Builds the table from raw group elements, validating that every
    /// entry lies in its respective interval.
    pub fn from_pairs(
        source: IntervalEffectAlgebra,
        target: IntervalEffectAlgebra,
        pairs: Vec<(GroupElement, GroupElement)>,
    ) -> Result<Self> {
        let pairs = pairs
            .into_iter()
            .map(|(s, t)| Ok((source.make_effect(s)?, target.make_effect(t)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(EAMorphism { source, target, pairs })
    }

    /// Tabulates `f` over the (finite) source algebra.
    pub fn from_fn(
        source: IntervalEffectAlgebra,
        target: IntervalEffectAlgebra,
        f: impl Fn(&Effect) -> Result<GroupElement>,
    ) -> Result<Self> {
        let pairs = source
            .elements()?
            .iter()
            .map(|a| Ok((a.clone(), target.make_effect(f(a)?)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(EAMorphism { source, target, pairs })
    }

    pub fn source(&self) -> &IntervalEffectAlgebra {
        &self.source
    }

    pub fn target(&self) -> &IntervalEffectAlgebra {
        &self.target
    }

    pub fn pairs(&self) -> &[(Effect, Effect)] {
        &self.pairs
    }

    pub fn apply(&self, a: &Effect) -> Option<&Effect> {
        self.pairs.iter().find(|(s, _)| self.source.effects_equal(s, a)).map(|(_, t)| t)
    }

    /// Checks `φ(1) = 1` and additivity over every orthogonal pair of the source.
    pub fn check(&self) -> Result<MorphismReport> {
        let src = &self.source;
        let tgt = &self.target;
        let all = src.elements()?;
        let mut report = MorphismReport::default();
        for a in all.iter() {
            if self.apply(a).is_none() {
                report.missing.push(a.clone());
            }
        }
        if !report.missing.is_empty() {
            return Ok(report);
        }
        let image = |a: &Effect| self.apply(a).expect("table is total");
        report.preserves_unit = tgt.effects_equal(image(&src.unit_effect()), &tgt.unit_effect());
        for a in all.iter() {
            for b in all.iter() {
                let Ok(ab) = src.oplus(a, b) else { continue };
                let ok = match tgt.oplus(image(a), image(b)) {
                    Ok(s) => tgt.effects_equal(&s, image(&ab)),
                    Err(_) => false,
                };
                if !ok {
                    report.additivity_violations.push((a.clone(), b.clone()));
                }
            }
        }
        Ok(report)
    }
}

/// The powerset Boolean algebra of an `n`-element set, subsets as bitmasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiniteBooleanAlgebra {
    size: u32,
}

impl FiniteBooleanAlgebra {
    pub const MAX_SIZE: u32 = 63;

    pub fn new(size: u32) -> Result<Self> {
        if size > Self::MAX_SIZE {
            return Err(Error::SizeExceeded { what: "Boolean algebra atoms", limit: Self::MAX_SIZE as usize, actual: size as usize });
        }
        Ok(FiniteBooleanAlgebra { size })
    }

    pub fn atoms(&self) -> u32 {
        self.size
    }

    pub fn top(&self) -> u64 {
        (1u64 << self.size) - 1
    }

    pub fn complement(&self, x: u64) -> u64 {
        self.top() & !x
    }

    /// `x ⊕ y` is defined iff `x ∧ y = 0`, and equals `x ∨ y`.
    pub fn oplus(&self, x: u64, y: u64) -> Option<u64> {
        (x & y == 0).then_some(x | y)
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..=self.top()
    }
}

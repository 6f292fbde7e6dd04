//! Witness mappings and their inclusion–exclusion tables.
//!
//! A β-table assigns an effect to every subset of a finite ground set `S`.
//! Its Möbius inversion over the subset lattice is
//!
//! ```text
//! D_β(X, A) = Σ_{X ⊆ Z ⊆ A} (−1)^{|Z∖X|} β(Z)        (X ⊆ A ⊆ S)
//! ```
//!
//! and β is a witness mapping when `β(∅) = u` (A1), `β({c}) = c` (A2) and
//! every `D_β(X, A)` is positive (A3). Subsets are bitmasks over the fixed
//! element order of the ground set.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::effects::{EAMorphism, Effect, IntervalEffectAlgebra};
use crate::groups::GroupElement;
use crate::{Error, Result};

/// Default cap on `|S|`: a full table has `3^|S|` entries.
pub const DEFAULT_MAX_GROUND: usize = 12;

/// Hard limit imposed by the bitmask width.
pub const MAX_GROUND_BITS: usize = 24;

/// A subset of the ground set, as a bitmask over element indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetKey(u32);

impl SubsetKey {
    pub const EMPTY: SubsetKey = SubsetKey(0);

    pub const fn from_bits(bits: u32) -> Self {
        SubsetKey(bits)
    }

    pub fn singleton(index: usize) -> Self {
        SubsetKey(1 << index)
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        SubsetKey(indices.iter().fold(0, |acc, &i| acc | (1 << i)))
    }

    /// The full subset of an `n`-element ground set.
    pub fn full(n: usize) -> Self {
        SubsetKey(((1u64 << n) - 1) as u32)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn is_subset_of(self, other: SubsetKey) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SubsetKey) -> Self {
        SubsetKey(self.0 | other.0)
    }

    pub fn intersection(self, other: SubsetKey) -> Self {
        SubsetKey(self.0 & other.0)
    }

    pub fn difference(self, other: SubsetKey) -> Self {
        SubsetKey(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: SubsetKey) -> bool {
        self.0 & other.0 == 0
    }

    /// Member indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits >> i & 1 == 1)
    }

    /// All subsets of `self`, in increasing numeric order.
    pub fn subsets(self) -> impl Iterator<Item = SubsetKey> {
        let mask = self.0;
        let mut next = Some(0u32);
        core::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask { None } else { Some((cur | !mask).wrapping_add(1) & mask) };
            Some(SubsetKey(cur))
        })
    }

    /// All `Z` with `self ⊆ Z ⊆ upper`, in increasing numeric order.
    pub fn interval_to(self, upper: SubsetKey) -> impl Iterator<Item = SubsetKey> {
        let base = self;
        upper.difference(self).subsets().map(move |y| base.union(y))
    }
}

impl fmt::Display for SubsetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, i) in self.indices().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("]")
    }
}

/// An ordered list of pairwise-distinct effects.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundSet {
    elements: Vec<Effect>,
}

impl GroundSet {
    pub fn new(alg: &IntervalEffectAlgebra, elements: Vec<Effect>) -> Result<Self> {
        if elements.len() > MAX_GROUND_BITS {
            return Err(Error::SizeExceeded { what: "ground set", limit: MAX_GROUND_BITS, actual: elements.len() });
        }
        for (i, a) in elements.iter().enumerate() {
            if !alg.group().contains(a.value()) {
                return Err(Error::GroupMismatch);
            }
            if let Some(j) = elements[..i].iter().position(|b| alg.effects_equal(a, b)) {
                return Err(Error::DuplicateGroundElement { first: j, second: i });
            }
        }
        Ok(GroundSet { elements })
    }

    pub fn from_values(alg: &IntervalEffectAlgebra, values: Vec<GroupElement>) -> Result<Self> {
        let effects = values.into_iter().map(|v| alg.make_effect(v)).collect::<Result<Vec<_>>>()?;
        Self::new(alg, effects)
    }

    pub fn empty() -> Self {
        GroundSet { elements: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Effect] {
        &self.elements
    }

    pub fn get(&self, index: usize) -> Option<&Effect> {
        self.elements.get(index)
    }

    pub fn full(&self) -> SubsetKey {
        SubsetKey::full(self.len())
    }

    pub fn index_of(&self, alg: &IntervalEffectAlgebra, e: &Effect) -> Option<usize> {
        self.elements.iter().position(|x| alg.effects_equal(x, e))
    }

    /// Every subset of the ground set, in increasing numeric order.
    pub fn subsets(&self) -> impl Iterator<Item = SubsetKey> {
        self.full().subsets()
    }

    fn check_key(&self, key: SubsetKey) -> Result<()> {
        if key.is_subset_of(self.full()) {
            Ok(())
        } else {
            Err(Error::Precondition("subset refers to indices outside the ground set"))
        }
    }
}

/// A candidate witness mapping: one effect per subset of the ground set.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaTable {
    ground: GroundSet,
    values: Vec<Effect>,
}

impl BetaTable {
    /// `values[k]` is β of the subset with bitmask `k`.
    pub fn new(ground: GroundSet, values: Vec<Effect>) -> Result<Self> {
        let expected = 1usize << ground.len();
        if values.len() != expected {
            return Err(Error::TableSize { expected, actual: values.len() });
        }
        Ok(BetaTable { ground, values })
    }

    pub fn from_fn(ground: GroundSet, mut f: impl FnMut(SubsetKey) -> Result<Effect>) -> Result<Self> {
        let values = ground.subsets().map(&mut f).collect::<Result<Vec<_>>>()?;
        Ok(BetaTable { ground, values })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn get(&self, key: SubsetKey) -> &Effect {
        &self.values[key.bits() as usize]
    }

    pub fn set(&mut self, key: SubsetKey, value: Effect) {
        self.values[key.bits() as usize] = value;
    }

    /// `(subset, β(subset))` in increasing subset order.
    pub fn entries(&self) -> impl Iterator<Item = (SubsetKey, &Effect)> {
        self.values.iter().enumerate().map(|(k, v)| (SubsetKey(k as u32), v))
    }
}

/// `μ(X, Z) = (−1)^{|Z∖X|}` on the subset lattice.
pub fn mobius_mu(x: SubsetKey, z: SubsetKey) -> Result<i64> {
    if !x.is_subset_of(z) {
        return Err(Error::NotComparable);
    }
    Ok(if z.difference(x).len().is_multiple_of(2) { 1 } else { -1 })
}

fn check_pair(beta: &BetaTable, x: SubsetKey, a: SubsetKey) -> Result<()> {
    beta.ground.check_key(a)?;
    if x.is_subset_of(a) { Ok(()) } else { Err(Error::NotComparable) }
}

/// `D_β(X, A)` by direct alternating summation over the interval `[X, A]`.
pub fn d_value(beta: &BetaTable, x: SubsetKey, a: SubsetKey) -> Result<GroupElement> {
    check_pair(beta, x, a)?;
    let mut acc = beta.get(x).value().clone();
    for z in x.interval_to(a).skip(1) {
        let term = beta.get(z).value();
        acc = if mobius_mu(x, z)? > 0 { acc.add(term)? } else { acc.subtract(term)? };
    }
    Ok(acc)
}

/// `D_β(X, A)` through the peeling recurrence
/// `D(X, A) = D(X, A∖{c}) − D(X ∪ {c}, A)` for `c ∈ A∖X`, bottoming out at
/// `D(X, X) = β(X)`.
pub fn d_value_rec(beta: &BetaTable, x: SubsetKey, a: SubsetKey) -> Result<GroupElement> {
    check_pair(beta, x, a)?;
    fn go(beta: &BetaTable, x: SubsetKey, a: SubsetKey) -> Result<GroupElement> {
        let free = a.difference(x);
        if free.is_empty() {
            return Ok(beta.get(x).value().clone());
        }
        let c = SubsetKey::singleton(free.bits().trailing_zeros() as usize);
        go(beta, x, a.difference(c))?.subtract(&go(beta, x.union(c), a)?)
    }
    go(beta, x, a)
}

/// All `D_β(X, A)` values for `X ⊆ A ⊆ S`, `3^|S|` entries.
#[derive(Clone, Debug, PartialEq)]
pub struct DTable {
    ground_size: usize,
    // ternary[mask] = Σ_{i ∈ mask} 3^i; the entry for (X, A) sits at ternary[A] + ternary[X]
    ternary: Vec<usize>,
    entries: Vec<GroupElement>,
}

impl DTable {
    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, x: SubsetKey, a: SubsetKey) -> Option<&GroupElement> {
        if !x.is_subset_of(a) || !a.is_subset_of(SubsetKey::full(self.ground_size)) {
            return None;
        }
        self.entries.get(self.index(x, a))
    }

    fn index(&self, x: SubsetKey, a: SubsetKey) -> usize {
        self.ternary[a.bits() as usize] + self.ternary[x.bits() as usize]
    }

    /// `(X, A, D(X, A))` ordered lexicographically by `(X, A)`.
    pub fn iter(&self) -> impl Iterator<Item = (SubsetKey, SubsetKey, &GroupElement)> {
        let full = SubsetKey::full(self.ground_size);
        full.subsets()
            .flat_map(move |x| x.interval_to(full).map(move |a| (x, a)))
            .map(move |(x, a)| (x, a, &self.entries[self.index(x, a)]))
    }
}

/// Tabulates `D_β` over every admissible pair, refusing `|S| > max_ground`.
pub fn d_table(beta: &BetaTable, max_ground: usize) -> Result<DTable> {
    let n = beta.ground.len();
    if n > max_ground.min(MAX_GROUND_BITS) {
        return Err(Error::SizeExceeded { what: "ground set", limit: max_ground, actual: n });
    }
    let masks = 1usize << n;
    let mut ternary = vec![0usize; masks];
    for m in 1..masks {
        let low = m.trailing_zeros();
        ternary[m] = ternary[m & (m - 1)] + 3usize.pow(low);
    }
    let mut slots: Vec<Option<GroupElement>> = vec![None; 3usize.pow(n as u32)];
    // A ascending, X descending within A: both D(X, A∖{c}) and D(X ∪ {c}, A)
    // are filled before D(X, A).
    for a in 0..masks {
        let mut x = a;
        loop {
            let value = if x == a {
                beta.values[a].value().clone()
            } else {
                let c = 1usize << (a & !x).trailing_zeros();
                let left = slots[ternary[a & !c] + ternary[x]].as_ref().expect("filled");
                let right = slots[ternary[a] + ternary[x | c]].as_ref().expect("filled");
                left.subtract(right)?
            };
            slots[ternary[a] + ternary[x]] = Some(value);
            if x == 0 {
                break;
            }
            x = (x - 1) & a;
        }
    }
    let entries = slots.into_iter().map(|s| s.expect("every admissible pair is filled")).collect();
    Ok(DTable { ground_size: n, ternary, entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// `β(∅) = u`
    A1,
    /// `β({c}) = c`
    A2,
    /// `D_β(X, A) ≥ 0`
    A3,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::A1 => "A1",
            Axiom::A2 => "A2",
            Axiom::A3 => "A3",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub axiom: Axiom,
    /// `X` for A3, the offending subset for A1/A2.
    pub subset: SubsetKey,
    /// `A` for A3 violations.
    pub superset: Option<SubsetKey>,
    /// β-value (A1/A2) or `D_β(X, A)` (A3).
    pub value: GroupElement,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    /// A1 first, then A2 by element index, then A3 by `(X, A)`.
    pub violations: Vec<Violation>,
    pub pairs_checked: usize,
    /// When no axiom fails: whether `D(X, A) ≤ β(X) ≤ u` held for every pair.
    pub upper_bound: Option<bool>,
    pub tolerance: f64,
    pub d_table: DTable,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_witness(alg: &IntervalEffectAlgebra, beta: &BetaTable) -> Result<WitnessReport> {
    verify_witness_capped(alg, beta, DEFAULT_MAX_GROUND)
}

/// Checks (A1), (A2) and (A3) exhaustively. Violations are data, not errors.
pub fn verify_witness_capped(alg: &IntervalEffectAlgebra, beta: &BetaTable, max_ground: usize) -> Result<WitnessReport> {
    let g = alg.group();
    let table = d_table(beta, max_ground)?;
    let mut violations = Vec::new();

    let empty = beta.get(SubsetKey::EMPTY);
    if !alg.effects_equal(empty, &alg.unit_effect()) {
        violations.push(Violation { axiom: Axiom::A1, subset: SubsetKey::EMPTY, superset: None, value: empty.value().clone() });
    }
    for (i, c) in beta.ground.elements.iter().enumerate() {
        let key = SubsetKey::singleton(i);
        if !alg.effects_equal(beta.get(key), c) {
            violations.push(Violation { axiom: Axiom::A2, subset: key, superset: None, value: beta.get(key).value().clone() });
        }
    }
    let mut pairs_checked = 0;
    for (x, a, d) in table.iter() {
        pairs_checked += 1;
        if !g.is_positive(d) {
            violations.push(Violation { axiom: Axiom::A3, subset: x, superset: Some(a), value: d.clone() });
        }
    }

    let upper_bound = if violations.is_empty() {
        let mut ok = true;
        for (x, _, d) in table.iter() {
            let bx = beta.get(x).value();
            if !(g.leq(d, bx)? && g.leq(bx, alg.unit())?) {
                ok = false;
                break;
            }
        }
        Some(ok)
    } else {
        None
    };
    Ok(WitnessReport { violations, pairs_checked, upper_bound, tolerance: g.tolerance(), d_table: table })
}

/// A β-table that passed [`verify_witness`], with its D-table.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifiedWitness {
    beta: BetaTable,
    report: WitnessReport,
}

impl VerifiedWitness {
    pub fn new(alg: &IntervalEffectAlgebra, beta: BetaTable) -> Result<Self> {
        let report = verify_witness(alg, &beta)?;
        Self::from_report(beta, report).map_err(|_| Error::UnverifiedWitness)
    }

    /// Pairs a table with its verification report; hands the report back if it failed.
    pub fn from_report(beta: BetaTable, report: WitnessReport) -> core::result::Result<Self, WitnessReport> {
        if report.passed() && report.d_table.ground_size() == beta.ground.len() {
            Ok(VerifiedWitness { beta, report })
        } else {
            Err(report)
        }
    }

    pub fn beta(&self) -> &BetaTable {
        &self.beta
    }

    pub fn report(&self) -> &WitnessReport {
        &self.report
    }

    pub fn ground(&self) -> &GroundSet {
        &self.beta.ground
    }

    pub fn d(&self, x: SubsetKey, a: SubsetKey) -> Option<&GroupElement> {
        self.report.d_table.get(x, a)
    }
}

/// Whether `β(X) = Σ_{X ⊆ Z ⊆ A} D_β(Z, A)`.
pub fn beta_recovery_check(alg: &IntervalEffectAlgebra, beta: &BetaTable, x: SubsetKey, a: SubsetKey) -> Result<bool> {
    check_pair(beta, x, a)?;
    let mut acc = alg.group().zero();
    for z in x.interval_to(a) {
        acc = acc.add(&d_value(beta, z, a)?)?;
    }
    alg.group().equals(&acc, beta.get(x).value())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionCheck {
    /// `Σ_{Y ⊆ C} D(X ∪ Y, A ∪ C) = D(X, A)`
    pub sum_matches: bool,
    pub terms_positive: bool,
    pub residual: f64,
}

impl PartitionCheck {
    pub fn holds(&self) -> bool {
        self.sum_matches && self.terms_positive
    }
}

/// Splits `D(X, A)` over the `2^|C|` refinements `D(X ∪ Y, A ∪ C)`, `Y ⊆ C`.
pub fn partition_check(
    alg: &IntervalEffectAlgebra,
    beta: &BetaTable,
    x: SubsetKey,
    a: SubsetKey,
    c: SubsetKey,
) -> Result<PartitionCheck> {
    check_pair(beta, x, a)?;
    beta.ground.check_key(c)?;
    if !c.is_disjoint(a) {
        return Err(Error::Precondition("C must be disjoint from A"));
    }
    let g = alg.group();
    let big = a.union(c);
    let mut acc = g.zero();
    let mut terms_positive = true;
    for y in c.subsets() {
        let d = d_value(beta, x.union(y), big)?;
        terms_positive &= g.is_positive(&d);
        acc = acc.add(&d)?;
    }
    let whole = d_value(beta, x, a)?;
    Ok(PartitionCheck { sum_matches: g.equals(&acc, &whole)?, terms_positive, residual: g.residual(&acc, &whole)? })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropertyStatus {
    Holds,
    /// First failing location.
    Fails { subset: SubsetKey, superset: SubsetKey },
    /// The property needs `0 ∈ S` or `u ∈ S`.
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructuralReport {
    /// `X ⊆ Y ⟹ β(Y) ≤ β(X)`
    pub antitone: PropertyStatus,
    /// `c ∈ X ⟹ β(X) ≤ c`
    pub lower_bound: PropertyStatus,
    /// `0 ∈ X ⟹ β(X) = 0`
    pub zero_absorption: PropertyStatus,
    /// `β(X) = β(X ∪ {u})`
    pub unit_extension: PropertyStatus,
    /// `D(X, X ∪ {u}) = 0` for `u ∉ X`
    pub unit_lemma: PropertyStatus,
}

impl StructuralReport {
    pub fn all_hold(&self) -> bool {
        [self.antitone, self.lower_bound, self.zero_absorption, self.unit_extension, self.unit_lemma]
            .iter()
            .all(|s| !matches!(s, PropertyStatus::Fails { .. }))
    }
}

/// Exhaustively checks the order properties every witness mapping has.
pub fn structural_properties(alg: &IntervalEffectAlgebra, witness: &VerifiedWitness) -> Result<StructuralReport> {
    let g = alg.group();
    let beta = witness.beta();
    let ground = beta.ground();
    let full = ground.full();
    let mut antitone = PropertyStatus::Holds;
    'outer: for x in full.subsets() {
        for y in x.interval_to(full) {
            if !g.leq(beta.get(y).value(), beta.get(x).value())? {
                antitone = PropertyStatus::Fails { subset: x, superset: y };
                break 'outer;
            }
        }
    }

    let mut lower_bound = PropertyStatus::Holds;
    'outer: for x in full.subsets() {
        for i in x.indices() {
            if !g.leq(beta.get(x).value(), ground.elements[i].value())? {
                lower_bound = PropertyStatus::Fails { subset: SubsetKey::singleton(i), superset: x };
                break 'outer;
            }
        }
    }

    let zero_absorption = match ground.index_of(alg, &alg.zero_effect()) {
        None => PropertyStatus::NotApplicable,
        Some(z) => {
            let zero = SubsetKey::singleton(z);
            zero.interval_to(full)
                .find(|&x| !alg.effects_equal(beta.get(x), &alg.zero_effect()))
                .map_or(PropertyStatus::Holds, |x| PropertyStatus::Fails { subset: zero, superset: x })
        }
    };

    let (unit_extension, unit_lemma) = match ground.index_of(alg, &alg.unit_effect()) {
        None => (PropertyStatus::NotApplicable, PropertyStatus::NotApplicable),
        Some(w) => {
            let unit = SubsetKey::singleton(w);
            let rest = full.difference(unit);
            let ext = rest
                .subsets()
                .find(|&x| !alg.effects_equal(beta.get(x), beta.get(x.union(unit))))
                .map_or(PropertyStatus::Holds, |x| PropertyStatus::Fails { subset: x, superset: x.union(unit) });
            let zero = g.zero();
            let mut lemma = PropertyStatus::Holds;
            for x in rest.subsets() {
                let d = witness.d(x, x.union(unit)).ok_or(Error::NotComparable)?;
                if !g.equals(d, &zero)? {
                    lemma = PropertyStatus::Fails { subset: x, superset: x.union(unit) };
                    break;
                }
            }
            (ext, lemma)
        }
    };

    Ok(StructuralReport { antitone, lower_bound, zero_absorption, unit_extension, unit_lemma })
}

/// Transports a witness mapping along a morphism: `β₂(X) = φ(β₁(p(X)))`
/// where the section `p` picks a preimage in `S₁` for each image element.
/// The new ground set is `φ(S₁)` with duplicates removed, in order of first
/// occurrence. Without an explicit section, `p` picks the first preimage.
pub fn pushforward(beta: &BetaTable, phi: &EAMorphism, section: Option<&[(Effect, Effect)]>) -> Result<BetaTable> {
    let src = phi.source();
    let tgt = phi.target();
    if !phi.check()?.passed() {
        return Err(Error::NotMorphism);
    }
    let apply = |e: &Effect| -> Result<Effect> {
        phi.apply(e).cloned().ok_or_else(|| Error::InvalidSection(alloc::string::String::from("element outside the morphism's source")))
    };

    let mut images: Vec<Effect> = Vec::new();
    let mut preimage: Vec<usize> = Vec::new();
    for (i, s) in beta.ground().elements().iter().enumerate() {
        let img = apply(s)?;
        if !images.iter().any(|x| tgt.effects_equal(x, &img)) {
            images.push(img);
            preimage.push(i);
        }
    }
    if let Some(pairs) = section {
        for (k, img) in images.iter().enumerate() {
            let (_, chosen) = pairs
                .iter()
                .find(|(a, _)| tgt.effects_equal(a, img))
                .ok_or_else(|| Error::InvalidSection(alloc::format!("no preimage given for image element {k}")))?;
            let idx = beta
                .ground()
                .index_of(src, chosen)
                .ok_or_else(|| Error::InvalidSection(alloc::format!("preimage of image element {k} is not in the ground set")))?;
            if !tgt.effects_equal(&apply(chosen)?, img) {
                return Err(Error::InvalidSection(alloc::format!("preimage of image element {k} does not map onto it")));
            }
            preimage[k] = idx;
        }
    }

    let ground = GroundSet::new(tgt, images)?;
    BetaTable::from_fn(ground, |key| {
        let lifted = SubsetKey::from_indices(&key.indices().map(|k| preimage[k]).collect::<Vec<_>>());
        apply(beta.get(lifted))
    })
}

/// Restriction of β to the subsets of `s0`; the new ground set keeps the
/// elements of `s0` in their original order.
pub fn restrict(beta: &BetaTable, s0: SubsetKey) -> Result<BetaTable> {
    beta.ground.check_key(s0)?;
    let kept: Vec<usize> = s0.indices().collect();
    let ground = GroundSet { elements: kept.iter().map(|&i| beta.ground.elements[i].clone()).collect() };
    BetaTable::from_fn(ground, |key| {
        let lifted = SubsetKey::from_indices(&key.indices().map(|k| kept[k]).collect::<Vec<_>>());
        Ok(beta.get(lifted).clone())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn int(alg: &IntervalEffectAlgebra, v: &[i64]) -> Effect {
        alg.make_effect(GroupElement::int(v)).unwrap()
    }

    /// β on CHAIN4 with S = {1, 2}, β(S) = top.
    fn chain_beta(top: i64) -> (IntervalEffectAlgebra, BetaTable) {
        let alg = fixtures::chain4();
        let ground = GroundSet::new(&alg, vec![int(&alg, &[1]), int(&alg, &[2])]).unwrap();
        let values = vec![int(&alg, &[3]), int(&alg, &[1]), int(&alg, &[2]), int(&alg, &[top])];
        let beta = BetaTable::new(ground, values).unwrap();
        (alg, beta)
    }

    const S0: SubsetKey = SubsetKey::from_bits(0b01);
    const S: SubsetKey = SubsetKey::from_bits(0b11);

    #[test]
    fn subset_iteration() {
        let k = SubsetKey::from_bits(0b1010);
        let subs: Vec<u32> = k.subsets().map(SubsetKey::bits).collect();
        assert_eq!(subs, vec![0b0000, 0b0010, 0b1000, 0b1010]);
        let between: Vec<u32> = SubsetKey::from_bits(0b10).interval_to(SubsetKey::from_bits(0b111)).map(SubsetKey::bits).collect();
        assert_eq!(between, vec![0b010, 0b011, 0b110, 0b111]);
        assert_eq!(alloc::format!("{}", SubsetKey::from_bits(0b101)), "[0, 2]");
        assert_eq!(SubsetKey::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn mobius_function() {
        let x = SubsetKey::from_bits(0b1);
        assert_eq!(mobius_mu(x, x).unwrap(), 1);
        assert_eq!(mobius_mu(x, SubsetKey::from_bits(0b11)).unwrap(), -1);
        assert_eq!(mobius_mu(SubsetKey::from_bits(0b10), x), Err(Error::NotComparable));
        // Σ_{X⊆Z⊆Y} μ(X, Z) = δ(X, Y)
        let y = SubsetKey::from_bits(0b1111);
        let total: i64 = x.interval_to(y).map(|z| mobius_mu(x, z).unwrap()).sum();
        assert_eq!(total, 0);
        let total: i64 = y.interval_to(y).map(|z| mobius_mu(y, z).unwrap()).sum();
        assert_eq!(total, 1);
    }

    #[test]
    fn d_values_on_chain() {
        let (_, beta) = chain_beta(0);
        assert_eq!(d_value(&beta, SubsetKey::EMPTY, S).unwrap(), GroupElement::int(&[0]));
        assert_eq!(d_value(&beta, S0, S0).unwrap(), GroupElement::int(&[1]));
        let (_, beta) = chain_beta(1);
        assert_eq!(d_value(&beta, S0, S).unwrap(), GroupElement::int(&[0]));
        assert_eq!(d_value(&beta, SubsetKey::EMPTY, S).unwrap(), GroupElement::int(&[1]));
        assert_eq!(d_value(&beta, S, S0), Err(Error::NotComparable));
        assert!(d_value(&beta, SubsetKey::EMPTY, SubsetKey::from_bits(0b100)).is_err());
    }

    #[test]
    fn recurrence_matches_direct_sum() {
        for top in 0..=3 {
            let (_, beta) = chain_beta(top);
            for a in S.subsets() {
                for x in a.subsets() {
                    assert_eq!(d_value(&beta, x, a).unwrap(), d_value_rec(&beta, x, a).unwrap());
                }
            }
        }
    }

    #[test]
    fn d_table_sizes() {
        let (alg, beta) = chain_beta(0);
        let t = d_table(&beta, DEFAULT_MAX_GROUND).unwrap();
        assert_eq!(t.len(), 9);
        assert_eq!(t.iter().count(), 9);
        for (x, a, d) in t.iter() {
            assert_eq!(*d, d_value(&beta, x, a).unwrap());
        }
        assert_eq!(t.get(S, S0), None);

        let empty = BetaTable::new(GroundSet::empty(), vec![alg.unit_effect()]).unwrap();
        let t = d_table(&empty, DEFAULT_MAX_GROUND).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.get(SubsetKey::EMPTY, SubsetKey::EMPTY), Some(&GroupElement::int(&[3])));

        let ground = GroundSet::new(&alg, alg.enumerate_effects().unwrap()[1..].to_vec()).unwrap();
        let beta3 = BetaTable::from_fn(ground, |_| Ok(alg.zero_effect())).unwrap();
        assert_eq!(d_table(&beta3, DEFAULT_MAX_GROUND).unwrap().len(), 27);
        assert!(matches!(d_table(&beta3, 2), Err(Error::SizeExceeded { .. })));
    }

    #[test]
    fn verification_outcomes() {
        for top in [0, 1] {
            let (alg, beta) = chain_beta(top);
            let report = verify_witness(&alg, &beta).unwrap();
            assert!(report.passed(), "β(S)={top}: {:?}", report.violations);
            assert_eq!(report.upper_bound, Some(true));
            assert_eq!(report.pairs_checked, 9);
        }
        // β(S) = 2 > 1 violates D({2}... ) : D({1}, S) = 1 − 2 < 0
        let (alg, beta) = chain_beta(2);
        let report = verify_witness(&alg, &beta).unwrap();
        assert!(!report.passed());
        assert!(report.violations.iter().all(|v| v.axiom == Axiom::A3));
        assert_eq!(report.violations[0].subset, S0);

        let (alg, mut beta) = chain_beta(0);
        beta.set(SubsetKey::EMPTY, int(&alg, &[2]));
        let report = verify_witness(&alg, &beta).unwrap();
        assert_eq!(report.violations[0].axiom, Axiom::A1);
        beta.set(SubsetKey::EMPTY, int(&alg, &[3]));
        beta.set(S0, int(&alg, &[0]));
        let report = verify_witness(&alg, &beta).unwrap();
        assert_eq!(report.violations[0].axiom, Axiom::A2);
        assert_eq!(report.violations[0].subset, S0);
    }

    #[test]
    fn penta_pair_violates_a3_at_empty_set() {
        let alg = fixtures::penta();
        let ground = GroundSet::new(&alg, vec![int(&alg, &[1, 0]), int(&alg, &[1, 1])]).unwrap();
        let beta = BetaTable::new(
            ground,
            vec![alg.unit_effect(), int(&alg, &[1, 0]), int(&alg, &[1, 1]), alg.zero_effect()],
        )
        .unwrap();
        let report = verify_witness(&alg, &beta).unwrap();
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!((v.axiom, v.subset, v.superset), (Axiom::A3, SubsetKey::EMPTY, Some(S)));
        assert_eq!(v.value, GroupElement::int(&[0, 1]));
        assert_eq!(VerifiedWitness::new(&alg, beta).unwrap_err(), Error::UnverifiedWitness);
    }

    #[test]
    fn recovery_and_partition() {
        let (alg, beta) = chain_beta(1);
        for a in S.subsets() {
            for x in a.subsets() {
                assert!(beta_recovery_check(&alg, &beta, x, a).unwrap());
            }
        }
        let p = partition_check(&alg, &beta, S0, S0, SubsetKey::EMPTY).unwrap();
        assert!(p.holds());
        let p = partition_check(&alg, &beta, SubsetKey::EMPTY, SubsetKey::EMPTY, S).unwrap();
        assert!(p.holds() && p.residual == 0.0);
        assert!(partition_check(&alg, &beta, SubsetKey::EMPTY, S0, S).is_err());
    }

    #[test]
    fn structural_properties_with_zero_and_unit() {
        let alg = fixtures::chain4();
        let all = alg.enumerate_effects().unwrap();
        let ground = GroundSet::new(&alg, all.clone()).unwrap();
        let beta = BetaTable::from_fn(ground, |k| {
            alg.meet_all(k.indices().map(|i| &all[i]))
        })
        .unwrap();
        let w = VerifiedWitness::new(&alg, beta).unwrap();
        let report = structural_properties(&alg, &w).unwrap();
        assert_eq!(report.antitone, PropertyStatus::Holds);
        assert_eq!(report.lower_bound, PropertyStatus::Holds);
        assert_eq!(report.zero_absorption, PropertyStatus::Holds);
        assert_eq!(report.unit_extension, PropertyStatus::Holds);
        assert_eq!(report.unit_lemma, PropertyStatus::Holds);

        let (alg, beta) = chain_beta(0);
        let w = VerifiedWitness::new(&alg, beta).unwrap();
        let report = structural_properties(&alg, &w).unwrap();
        assert_eq!(report.zero_absorption, PropertyStatus::NotApplicable);
        assert_eq!(report.unit_lemma, PropertyStatus::NotApplicable);
        assert!(report.all_hold());
    }

    #[test]
    fn restriction() {
        let (alg, beta) = chain_beta(1);
        assert_eq!(restrict(&beta, S).unwrap(), beta);
        let empty = restrict(&beta, SubsetKey::EMPTY).unwrap();
        assert_eq!(empty.ground().len(), 0);
        assert_eq!(empty.get(SubsetKey::EMPTY), &alg.unit_effect());
        let second = restrict(&beta, SubsetKey::from_bits(0b10)).unwrap();
        assert_eq!(second.get(SubsetKey::from_bits(1)), &int(&alg, &[2]));
        assert!(verify_witness(&alg, &second).unwrap().passed());
    }

    #[test]
    fn pushforward_along_doubling() {
        let (alg, beta) = chain_beta(1);
        let target = fixtures::chain7();
        let phi = EAMorphism::from_fn(alg.clone(), target.clone(), |a| a.value().scalar_multiply(2)).unwrap();
        let pushed = pushforward(&beta, &phi, None).unwrap();
        assert_eq!(pushed.ground().elements(), &[int(&target, &[2]), int(&target, &[4])]);
        assert_eq!(pushed.get(S), &int(&target, &[2]));
        assert!(verify_witness(&target, &pushed).unwrap().passed());

        let id = EAMorphism::from_fn(alg.clone(), alg.clone(), |a| Ok(a.value().clone())).unwrap();
        assert_eq!(pushforward(&beta, &id, None).unwrap(), beta);

        let bad_section = [(int(&target, &[2]), int(&alg, &[2]))];
        assert!(matches!(pushforward(&beta, &phi, Some(&bad_section)), Err(Error::InvalidSection(_))));
    }
}

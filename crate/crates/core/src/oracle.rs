//! Brute-force ground truth on finite carriers.
//!
//! Coexistence is decided by enumerating every decomposition of unit and
//! looking for sub-multiset sums; witness existence by depth-first search
//! over β-tables. Both are exponential and meant for tiny inputs.

use alloc::vec::Vec;

use crate::effects::{DecompositionOfUnit, Effect, IntervalEffectAlgebra};
use crate::groups::{Group, GroupElement};
use crate::observables::{certify_coexistent, Certification};
use crate::witness::{verify_witness_capped, BetaTable, GroundSet, SubsetKey};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    /// Cap on decomposition length; `None` uses the bound `f(u) / min f(g)`.
    pub max_parts: Option<usize>,
    pub max_ground: usize,
    /// Cap on search nodes per witness search.
    pub node_budget: u64,
    /// Cut branches as soon as a fully assigned `D_β(X, A)` is negative.
    pub prune: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_parts: None, max_ground: 3, node_budget: 50_000_000, prune: true }
    }
}

impl OracleConfig {
    fn validate(&self) -> Result<()> {
        if self.max_parts == Some(0) || self.max_ground == 0 || self.node_budget == 0 {
            return Err(Error::Precondition("oracle caps must be positive"));
        }
        Ok(())
    }
}

/// Upper bound on the number of nonzero parts in any decomposition of unit.
pub fn natural_part_bound(alg: &IntervalEffectAlgebra) -> Result<usize> {
    let Group::Int(g) = alg.group() else {
        return Err(Error::UnsupportedCarrier("Hermitian carriers cannot be enumerated"));
    };
    let u = alg.unit().as_int().ok_or(Error::GroupMismatch)?;
    let bound = match g.order() {
        crate::groups::IntOrder::Coordinatewise => u.entries().iter().map(|&e| e as i128).sum::<i128>(),
        crate::groups::IntOrder::Cone(c) => c.weight(u) / c.min_weight(),
    };
    usize::try_from(bound).map_err(|_| Error::Overflow)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionEnumeration {
    /// Parts in non-decreasing carrier order; no permutation duplicates.
    pub decompositions: Vec<DecompositionOfUnit>,
    pub max_parts: usize,
    /// Some branch was cut by `max_parts` before reaching `u`.
    pub truncated: bool,
}

/// All multisets of nonzero effects summing to `u`, with at most `max_parts` parts.
pub fn enumerate_decompositions(alg: &IntervalEffectAlgebra, max_parts: Option<usize>) -> Result<DecompositionEnumeration> {
    let natural = natural_part_bound(alg)?;
    let max_parts = max_parts.unwrap_or(natural);
    if max_parts == 0 {
        return Err(Error::Precondition("max_parts must be positive"));
    }
    let g = alg.group();
    let all = alg.elements()?;
    let zero = alg.zero_effect();
    let atoms: Vec<&Effect> = all.iter().filter(|e| !alg.effects_equal(e, &zero)).collect();

    struct Walk<'a> {
        alg: &'a IntervalEffectAlgebra,
        atoms: &'a [&'a Effect],
        max_parts: usize,
        out: Vec<DecompositionOfUnit>,
        truncated: bool,
    }
    fn go(w: &mut Walk<'_>, start: usize, acc: &GroupElement, parts: &mut Vec<Effect>) -> Result<()> {
        let g = w.alg.group();
        if g.equals(acc, w.alg.unit())? {
            w.out.push(w.alg.decomposition(parts.clone())?);
            return Ok(());
        }
        if parts.len() == w.max_parts {
            w.truncated = true;
            return Ok(());
        }
        for k in start..w.atoms.len() {
            let next = acc.add(w.atoms[k].value())?;
            if g.leq(&next, w.alg.unit())? {
                parts.push(w.atoms[k].clone());
                go(w, k, &next, parts)?;
                parts.pop();
            }
        }
        Ok(())
    }

    let mut w = Walk { alg, atoms: &atoms, max_parts, out: Vec::new(), truncated: false };
    go(&mut w, 0, &g.zero(), &mut Vec::new())?;
    Ok(DecompositionEnumeration { decompositions: w.out, max_parts, truncated: w.truncated })
}

/// Positions of parts (within `parts`) summing to `target`, via bounded
/// multiplicity counters over runs of equal parts.
fn sub_multiset_sum(alg: &IntervalEffectAlgebra, parts: &[Effect], target: &Effect) -> Result<Option<Vec<usize>>> {
    let g = alg.group();
    // runs of equal adjacent parts: (first position, multiplicity)
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        match runs.last_mut() {
            Some((first, m)) if alg.effects_equal(&parts[*first], p) => *m += 1,
            _ => runs.push((i, 1)),
        }
    }
    let mut counts = alloc::vec![0usize; runs.len()];
    loop {
        let mut acc = g.zero();
        for (r, &c) in runs.iter().zip(&counts) {
            if c > 0 {
                acc = acc.add(&parts[r.0].value().scalar_multiply(c as i64)?)?;
            }
        }
        if g.equals(&acc, target.value())? {
            let picked = runs.iter().zip(&counts).flat_map(|(r, &c)| r.0..r.0 + c).collect();
            return Ok(Some(picked));
        }
        let mut k = 0;
        loop {
            if k == runs.len() {
                return Ok(None);
            }
            if counts[k] < runs[k].1 {
                counts[k] += 1;
                break;
            }
            counts[k] = 0;
            k += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoexistenceVerdict {
    pub coexistent: bool,
    pub decomposition: Option<DecompositionOfUnit>,
    /// For each element of `S`, positions in the decomposition summing to it.
    pub subsums: Vec<Vec<usize>>,
    pub decompositions_checked: usize,
    pub max_parts: usize,
    /// A negative verdict is only conclusive when this is false.
    pub truncated: bool,
}

/// `S` is coexistent iff some decomposition of unit has every element of
/// `S` as a sub-multiset sum.
pub fn coexistent_bruteforce(alg: &IntervalEffectAlgebra, ground: &GroundSet, cfg: &OracleConfig) -> Result<CoexistenceVerdict> {
    cfg.validate()?;
    check_ground(ground, cfg)?;
    let en = enumerate_decompositions(alg, cfg.max_parts)?;
    coexistent_among(alg, ground, &en)
}

fn coexistent_among(alg: &IntervalEffectAlgebra, ground: &GroundSet, en: &DecompositionEnumeration) -> Result<CoexistenceVerdict> {
    let mut checked = 0;
    'outer: for dec in &en.decompositions {
        checked += 1;
        let mut subsums = Vec::with_capacity(ground.len());
        for s in ground.elements() {
            match sub_multiset_sum(alg, dec.parts(), s)? {
                Some(p) => subsums.push(p),
                None => continue 'outer,
            }
        }
        return Ok(CoexistenceVerdict {
            coexistent: true,
            decomposition: Some(dec.clone()),
            subsums,
            decompositions_checked: checked,
            max_parts: en.max_parts,
            truncated: en.truncated,
        });
    }
    Ok(CoexistenceVerdict {
        coexistent: false,
        decomposition: None,
        subsums: Vec::new(),
        decompositions_checked: checked,
        max_parts: en.max_parts,
        truncated: en.truncated,
    })
}

fn check_ground(ground: &GroundSet, cfg: &OracleConfig) -> Result<()> {
    if ground.len() > cfg.max_ground {
        return Err(Error::SizeExceeded { what: "ground set", limit: cfg.max_ground, actual: ground.len() });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessSearchVerdict {
    /// The first witness found, in carrier order of the free slots.
    pub witness: Option<BetaTable>,
    /// `|E|^(2^n − n − 1)`, saturating.
    pub search_space: u128,
    /// Branches cut by a negative `D`.
    pub pruned: u64,
    pub nodes: u64,
}

impl WitnessSearchVerdict {
    pub fn exists(&self) -> bool {
        self.witness.is_some()
    }
}

// D(X, A) over a table whose entries below A are all assigned.
fn d_partial(table: &[Option<GroupElement>], x: SubsetKey, a: SubsetKey) -> Result<GroupElement> {
    let mut acc: Option<GroupElement> = None;
    for z in x.interval_to(a) {
        let v = table[z.bits() as usize].as_ref().ok_or(Error::Precondition("unassigned table entry"))?;
        let term = if z.difference(x).len().is_multiple_of(2) { v.clone() } else { v.negate()? };
        acc = Some(match acc {
            None => term,
            Some(s) => s.add(&term)?,
        });
    }
    acc.ok_or(Error::NotComparable)
}

/// Searches all assignments of effects to the slots `|Z| ≥ 2` (∅ and
/// singletons are forced), depth-first in increasing slot order.
pub fn witness_bruteforce(alg: &IntervalEffectAlgebra, ground: &GroundSet, cfg: &OracleConfig) -> Result<WitnessSearchVerdict> {
    cfg.validate()?;
    check_ground(ground, cfg)?;
    let g = alg.group();
    let values = alg.elements()?;
    let n = ground.len();
    let full = ground.full();
    let free: Vec<SubsetKey> = full.subsets().filter(|z| z.len() >= 2).collect();
    let search_space = (values.len() as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);

    let mut table: Vec<Option<GroupElement>> = alloc::vec![None; 1 << n];
    table[0] = Some(alg.unit().clone());
    for (i, e) in ground.elements().iter().enumerate() {
        table[1 << i] = Some(e.value().clone());
    }

    // For each slot A: the X ⊆ A by increasing |A∖X|.
    let checks: Vec<Vec<SubsetKey>> = free
        .iter()
        .map(|&a| {
            let mut xs: Vec<SubsetKey> = a.subsets().collect();
            xs.sort_by_key(|x| (a.difference(*x).len(), x.bits()));
            xs
        })
        .collect();

    struct Search<'a> {
        g: &'a Group,
        values: &'a [Effect],
        free: &'a [SubsetKey],
        checks: &'a [Vec<SubsetKey>],
        table: Vec<Option<GroupElement>>,
        full: SubsetKey,
        prune: bool,
        budget: u64,
        nodes: u64,
        pruned: u64,
    }

    impl Search<'_> {
        fn slot_ok(&self, k: usize) -> Result<bool> {
            let a = self.free[k];
            for &x in &self.checks[k] {
                if !self.g.is_positive(&d_partial(&self.table, x, a)?) {
                    return Ok(false);
                }
            }
            Ok(true)
        }

        fn all_ok(&self) -> Result<bool> {
            for a in self.full.subsets() {
                for x in a.subsets() {
                    if !self.g.is_positive(&d_partial(&self.table, x, a)?) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }

        fn go(&mut self, k: usize) -> Result<bool> {
            if k == self.free.len() {
                return if self.prune { Ok(true) } else { self.all_ok() };
            }
            let slot = self.free[k].bits() as usize;
            for v in self.values {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::BudgetExhausted { nodes: self.budget });
                }
                self.table[slot] = Some(v.value().clone());
                if self.prune && !self.slot_ok(k)? {
                    self.pruned += 1;
                    continue;
                }
                if self.go(k + 1)? {
                    return Ok(true);
                }
            }
            self.table[slot] = None;
            Ok(false)
        }
    }

    let mut s = Search {
        g,
        values: &values,
        free: &free,
        checks: &checks,
        table,
        full,
        prune: cfg.prune,
        budget: cfg.node_budget,
        nodes: 0,
        pruned: 0,
    };
    // singleton and empty slots are fixed, but their D values still need checking
    let base_ok = full.subsets().filter(|a| a.len() <= 1).all(|a| {
        a.subsets().all(|x| d_partial(&s.table, x, a).map(|d| g.is_positive(&d)).unwrap_or(false))
    });
    let found = base_ok && s.go(0)?;
    let witness = if found {
        let entries = s
            .table
            .iter()
            .map(|v| alg.make_effect(v.clone().ok_or(Error::Precondition("unassigned table entry"))?))
            .collect::<Result<Vec<_>>>()?;
        let beta = BetaTable::new(ground.clone(), entries)?;
        debug_assert!(verify_witness_capped(alg, &beta, cfg.max_ground).map(|r| r.passed()).unwrap_or(false));
        Some(beta)
    } else {
        None
    };
    Ok(WitnessSearchVerdict { witness, search_space, pruned: s.pruned, nodes: s.nodes })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarnessRow {
    /// Indices of `S` into the carrier's enumeration.
    pub indices: Vec<usize>,
    pub witness_exists: bool,
    pub coexistent: bool,
    /// End-to-end certificate soundness, when a witness was found.
    pub certified: Option<bool>,
    pub search_space: u128,
    pub pruned: u64,
    pub agree: bool,
    pub witness: Option<BetaTable>,
    pub decomposition: Option<DecompositionOfUnit>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarnessReport {
    pub rows: Vec<HarnessRow>,
    pub max_ground: usize,
    pub max_parts: usize,
    /// Decomposition enumeration was not truncated.
    pub complete: bool,
}

impl HarnessReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agree && r.certified != Some(false))
    }
}

/// Every `S ⊆ E` with `|S| ≤ max_ground`, by size then lexicographic index order.
pub fn subsets_up_to(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 0..=max.min(n) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(idx.clone());
            // next combination
            let mut i = k;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if idx[i] < n - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if k == 0 || i == usize::MAX {
                break;
            }
        }
    }
    out
}

/// Runs both oracles on every small `S` and compares verdicts; positive
/// witness verdicts are also certified end to end.
pub fn theoremmain_harness(alg: &IntervalEffectAlgebra, cfg: &OracleConfig) -> Result<HarnessReport> {
    let mut report = HarnessReport { rows: Vec::new(), max_ground: cfg.max_ground, max_parts: 0, complete: true };
    harness_with(alg, cfg, |row| {
        report.rows.push(row);
        true
    })
    .map(|(max_parts, complete)| {
        report.max_parts = max_parts;
        report.complete = complete;
    })?;
    Ok(report)
}

/// Streaming form of [`theoremmain_harness`]; `sink` returns false to stop.
/// Returns the effective part cap and whether enumeration was complete.
pub fn harness_with(
    alg: &IntervalEffectAlgebra,
    cfg: &OracleConfig,
    mut sink: impl FnMut(HarnessRow) -> bool,
) -> Result<(usize, bool)> {
    cfg.validate()?;
    let all = alg.elements()?.into_owned();
    let en = enumerate_decompositions(alg, cfg.max_parts)?;
    for indices in subsets_up_to(all.len(), cfg.max_ground) {
        let ground = GroundSet::new(alg, indices.iter().map(|&i| all[i].clone()).collect())?;
        let coex = coexistent_among(alg, &ground, &en)?;
        let wit = witness_bruteforce(alg, &ground, cfg)?;
        let certified = match &wit.witness {
            Some(beta) => Some(match certify_coexistent(alg, beta.clone(), cfg.max_ground)? {
                Certification::Certified(c) => c.is_sound(),
                Certification::Refuted(_) => false,
            }),
            None => None,
        };
        let row = HarnessRow {
            indices,
            witness_exists: wit.exists(),
            coexistent: coex.coexistent,
            certified,
            search_space: wit.search_space,
            pruned: wit.pruned,
            agree: wit.exists() == coex.coexistent,
            witness: wit.witness,
            decomposition: coex.decomposition,
        };
        if !sink(row) {
            break;
        }
    }
    Ok((en.max_parts, !en.truncated))
}

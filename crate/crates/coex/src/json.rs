//! JSON encodings of carriers, effects, β-tables and reports.
//!
//! Output is built from `serde_json::Value`, whose maps are ordered by key,
//! so every emitted document is byte-stable.

use std::fmt;

use coex_core::effects::{DecompositionOfUnit, Effect, IntervalEffectAlgebra, MvFailure, MvReport};
use coex_core::groups::{
    ConeSpec, Group, GroupElement, HermitianGroup, HermitianMatrix, IntOrder, IntVector, IntVectorGroup, UnitalGroup,
    DEFAULT_PSD_TOLERANCE,
};
use coex_core::witness::{BetaTable, GroundSet, PropertyStatus, StructuralReport, SubsetKey, Violation, WitnessReport};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

pub const FORMAT_VERSION: u64 = 1;

pub const DEFAULT_EQ_TOLERANCE: f64 = 1e-9;

/// A malformed or schema-violating document.
#[derive(Clone, Debug, PartialEq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

impl From<coex_core::Error> for InputError {
    fn from(e: coex_core::Error) -> Self {
        InputError(e.to_string())
    }
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        InputError(format!("malformed JSON: {e}"))
    }
}

pub type InputResult<T> = Result<T, InputError>;

fn bad(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Eigenvalue cutoff and equality tolerance for Hermitian effects.
    pub psd: f64,
    /// Hermiticity tolerance applied when parsing matrices.
    pub eq: f64,
    pub commute: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            psd: DEFAULT_PSD_TOLERANCE,
            eq: DEFAULT_EQ_TOLERANCE,
            commute: coex_core::canonical::DEFAULT_COMMUTE_TOLERANCE,
        }
    }
}

impl Tolerances {
    pub fn to_json(&self) -> Value {
        json!({ "psd": self.psd, "eq": self.eq, "commute": self.commute })
    }
}

fn field<'a>(obj: &'a Value, key: &str) -> InputResult<&'a Value> {
    obj.get(key).ok_or_else(|| bad(format!("missing field \"{key}\"")))
}

fn as_usize(v: &Value, what: &str) -> InputResult<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| bad(format!("{what} must be a non-negative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> InputResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

fn int_vector(v: &Value, what: &str) -> InputResult<IntVector> {
    let entries = as_array(v, what)?
        .iter()
        .map(|e| e.as_i64().ok_or_else(|| bad(format!("{what} must contain integers"))))
        .collect::<InputResult<Vec<_>>>()?;
    Ok(IntVector::new(entries)?)
}

fn finite(v: &Value, what: &str) -> InputResult<f64> {
    match v.as_f64() {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(bad(format!("{what} must be a finite number"))),
    }
}

pub fn encode_group(g: &Group) -> Value {
    match g {
        Group::Int(g) => match g.order() {
            IntOrder::Coordinatewise => json!({ "kind": "int_coordinatewise", "dimension": g.dimension() }),
            IntOrder::Cone(c) => json!({
                "kind": "int_cone",
                "generators": c.generators().iter().map(|v| json!(v.entries())).collect::<Vec<_>>(),
                "functional": c.functional().entries(),
            }),
        },
        Group::Hermitian(g) => json!({ "kind": "hermitian", "dimension": g.dimension() }),
    }
}

pub fn decode_group(v: &Value, tol: &Tolerances) -> InputResult<Group> {
    let kind = field(v, "kind")?.as_str().ok_or_else(|| bad("group kind must be a string"))?;
    match kind {
        "int_coordinatewise" => {
            let dim = as_usize(field(v, "dimension")?, "dimension")?;
            Ok(Group::Int(IntVectorGroup::coordinatewise(dim)?))
        }
        "int_cone" => {
            let gens = as_array(field(v, "generators")?, "generators")?
                .iter()
                .map(|g| int_vector(g, "generator"))
                .collect::<InputResult<Vec<_>>>()?;
            let functional = v.get("functional").map(|f| int_vector(f, "functional")).transpose()?;
            Ok(Group::Int(IntVectorGroup::cone(ConeSpec::new(gens, functional)?)))
        }
        "hermitian" => {
            let dim = as_usize(field(v, "dimension")?, "dimension")?;
            Ok(Group::Hermitian(HermitianGroup::new(dim, tol.psd)?))
        }
        other => Err(bad(format!("unknown group kind \"{other}\""))),
    }
}

pub fn encode_element(x: &GroupElement) -> Value {
    match x {
        GroupElement::Int(v) => json!(v.entries()),
        GroupElement::Hermitian(m) => {
            let d = m.dimension();
            let rows: Vec<Value> =
                (0..d).map(|i| Value::Array((0..d).map(|j| json!([m.at(i, j).re, m.at(i, j).im])).collect())).collect();
            Value::Array(rows)
        }
    }
}

/// Integer vectors as arrays of integers; Hermitian matrices as rows whose
/// entries are `[re, im]` pairs or plain real numbers.
pub fn decode_element(g: &Group, v: &Value, tol: &Tolerances) -> InputResult<GroupElement> {
    let x = match g {
        Group::Int(_) => GroupElement::Int(int_vector(v, "integer vector")?),
        Group::Hermitian(_) => {
            let rows = as_array(v, "matrix")?;
            let d = rows.len();
            let mut entries = Vec::with_capacity(d * d);
            for row in rows {
                let row = as_array(row, "matrix row")?;
                if row.len() != d {
                    return Err(bad("matrix must be square"));
                }
                for e in row {
                    entries.push(match e {
                        Value::Array(p) if p.len() == 2 => Complex64::new(finite(&p[0], "entry")?, finite(&p[1], "entry")?),
                        _ => Complex64::new(finite(e, "entry")?, 0.0),
                    });
                }
            }
            GroupElement::Hermitian(HermitianMatrix::new(d, entries, tol.eq)?)
        }
    };
    if !g.contains(&x) {
        return Err(bad("element does not match the group's dimension"));
    }
    Ok(x)
}

pub fn encode_effect(e: &Effect) -> Value {
    encode_element(e.value())
}

pub fn decode_effect(alg: &IntervalEffectAlgebra, v: &Value, tol: &Tolerances) -> InputResult<Effect> {
    Ok(alg.make_effect(decode_element(alg.group(), v, tol)?)?)
}

pub fn encode_algebra(alg: &IntervalEffectAlgebra) -> Value {
    json!({ "group": encode_group(alg.group()), "unit": encode_element(alg.unit()) })
}

/// Integer carriers are enumerated up front when small enough.
pub fn decode_algebra(v: &Value, tol: &Tolerances) -> InputResult<IntervalEffectAlgebra> {
    let group = decode_group(field(v, "group")?, tol)?;
    let unit = decode_element(&group, field(v, "unit")?, tol)?;
    let alg = IntervalEffectAlgebra::new(UnitalGroup::new(group, unit)?);
    if matches!(alg.group(), Group::Int(_)) {
        if let Ok(cached) = alg.clone().with_cached_elements() {
            return Ok(cached);
        }
    }
    Ok(alg)
}

pub fn encode_subset(s: SubsetKey) -> Value {
    json!(s.indices().collect::<Vec<_>>())
}

/// A subset as a list of distinct indices below `n`, in any order.
pub fn decode_subset(v: &Value, n: usize) -> InputResult<SubsetKey> {
    let mut key = SubsetKey::EMPTY;
    for e in as_array(v, "subset")? {
        let i = as_usize(e, "subset index")?;
        if i >= n {
            return Err(bad(format!("subset index {i} out of range for a ground set of size {n}")));
        }
        if key.contains(i) {
            return Err(bad(format!("subset index {i} repeated")));
        }
        key = key.union(SubsetKey::singleton(i));
    }
    Ok(key)
}

pub fn encode_effects(es: &[Effect]) -> Value {
    Value::Array(es.iter().map(encode_effect).collect())
}

pub fn decode_ground(alg: &IntervalEffectAlgebra, v: &Value, tol: &Tolerances) -> InputResult<GroundSet> {
    let elems = as_array(v, "ground")?.iter().map(|e| decode_effect(alg, e, tol)).collect::<InputResult<Vec<_>>>()?;
    if elems.len() > coex_core::witness::MAX_GROUND_BITS {
        return Err(bad(format!("ground set larger than {}", coex_core::witness::MAX_GROUND_BITS)));
    }
    Ok(GroundSet::new(alg, elems)?)
}

#[derive(Clone, Debug)]
pub struct BetaDocument {
    pub algebra: IntervalEffectAlgebra,
    pub beta: BetaTable,
    /// ∅ and singleton entries filled in from (A1) and (A2).
    pub implied: Vec<SubsetKey>,
}

/// `{"version", "algebra", "ground", "beta": [{"subset", "value"}]}`, entries in increasing subset order.
pub fn encode_beta_document(alg: &IntervalEffectAlgebra, beta: &BetaTable) -> Value {
    let entries: Vec<Value> =
        beta.entries().map(|(k, v)| json!({ "subset": encode_subset(k), "value": encode_effect(v) })).collect();
    json!({
        "version": FORMAT_VERSION,
        "algebra": encode_algebra(alg),
        "ground": encode_effects(beta.ground().elements()),
        "beta": entries,
    })
}

pub fn decode_beta_document(v: &Value, tol: &Tolerances) -> InputResult<BetaDocument> {
    check_version(v)?;
    let algebra = decode_algebra(field(v, "algebra")?, tol)?;
    let ground = decode_ground(&algebra, field(v, "ground")?, tol)?;
    let n = ground.len();
    let mut values: Vec<Option<Effect>> = vec![None; 1 << n];
    for entry in as_array(field(v, "beta")?, "beta")? {
        let key = decode_subset(field(entry, "subset")?, n)?;
        let slot = &mut values[key.bits() as usize];
        if slot.is_some() {
            return Err(bad(format!("β entry for {key} given twice")));
        }
        *slot = Some(decode_effect(&algebra, field(entry, "value")?, tol)?);
    }
    let mut implied = Vec::new();
    let mut table = Vec::with_capacity(values.len());
    for (bits, slot) in values.into_iter().enumerate() {
        let key = SubsetKey::from_bits(bits as u32);
        table.push(match slot {
            Some(e) => e,
            None if key.is_empty() => {
                implied.push(key);
                algebra.unit_effect()
            }
            None if key.len() == 1 => {
                implied.push(key);
                ground.elements()[bits.trailing_zeros() as usize].clone()
            }
            None => return Err(bad(format!("β entry for {key} missing"))),
        });
    }
    let beta = BetaTable::new(ground, table)?;
    Ok(BetaDocument { algebra, beta, implied })
}

/// Documents may omit the version; a present one must match.
pub fn check_version(v: &Value) -> InputResult<()> {
    match v.get("version") {
        None => Ok(()),
        Some(x) if x.as_u64() == Some(FORMAT_VERSION) => Ok(()),
        Some(x) => Err(bad(format!("unsupported document version {x}"))),
    }
}

pub fn encode_violation(v: &Violation) -> Value {
    json!({
        "axiom": v.axiom.to_string(),
        "X": encode_subset(v.subset),
        "A": v.superset.map(encode_subset),
        "value": encode_element(&v.value),
    })
}

fn encode_status(s: &PropertyStatus) -> Value {
    match s {
        PropertyStatus::Holds => json!("holds"),
        PropertyStatus::NotApplicable => json!("not_applicable"),
        PropertyStatus::Fails { subset, superset } => {
            json!({ "fails": { "X": encode_subset(*subset), "A": encode_subset(*superset) } })
        }
    }
}

pub fn encode_structural(r: &StructuralReport) -> Value {
    json!({
        "antitone": encode_status(&r.antitone),
        "lower_bound": encode_status(&r.lower_bound),
        "zero_absorption": encode_status(&r.zero_absorption),
        "unit_extension": encode_status(&r.unit_extension),
        "unit_lemma": encode_status(&r.unit_lemma),
    })
}

pub fn encode_witness_report(r: &WitnessReport) -> Value {
    json!({
        "passed": r.passed(),
        "violations": r.violations.iter().map(encode_violation).collect::<Vec<_>>(),
        "pairs_checked": r.pairs_checked,
        "upper_bound": r.upper_bound,
    })
}

pub fn encode_decomposition(d: &DecompositionOfUnit) -> Value {
    encode_effects(d.parts())
}

pub fn encode_mv_report(r: &MvReport) -> Value {
    let counterexample = r.counterexample.as_ref().map(|c| {
        let mut m = Map::new();
        m.insert("a".into(), encode_effect(&c.a));
        m.insert("b".into(), encode_effect(&c.b));
        match &c.kind {
            MvFailure::NotLattice => {
                m.insert("kind".into(), json!("not_lattice"));
            }
            MvFailure::Identity { lhs, rhs } => {
                m.insert("kind".into(), json!("identity"));
                m.insert("lhs".into(), encode_effect(lhs));
                m.insert("rhs".into(), encode_effect(rhs));
            }
        }
        Value::Object(m)
    });
    json!({ "passed": r.passed(), "pairs_checked": r.pairs_checked, "counterexample": counterexample })
}

/// Pretty-printed with a trailing newline.
pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("Value serialization cannot fail");
    s.push('\n');
    s
}

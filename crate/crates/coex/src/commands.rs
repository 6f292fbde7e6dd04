//! The subcommands, as functions from parsed documents to a JSON report and
//! an exit status. `main` only does argument parsing and IO.

use coex_core::canonical::{
    pair_witness_candidates, pair_witness_search, product_factorization_check, product_witness, MvEffectAlgebra,
    PairWitnessResult, FACTORIZATION_TOLERANCE,
};
use coex_core::effects::IntervalEffectAlgebra;
use coex_core::fixtures;
use coex_core::groups::Group;
use coex_core::observables::{certify_coexistent, Certification, CoexistenceCertificate, ProjectiveCondition};
use coex_core::oracle::{harness_with, HarnessRow, OracleConfig};
use coex_core::witness::{structural_properties, verify_witness_capped, GroundSet, SubsetKey, VerifiedWitness};
use serde_json::{json, Value};

use crate::json::{
    decode_algebra, decode_beta_document, decode_effect, decode_ground, encode_algebra, encode_beta_document,
    encode_decomposition, encode_effect, encode_effects, encode_mv_report, encode_structural, encode_subset,
    encode_witness_report, InputError, Tolerances,
};

/// Process exit status; the numeric values are a stable contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    /// Violations, non-coexistence, or disagreement.
    Failure = 1,
    Input = 2,
    Cap = 3,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub exit: Exit,
    pub report: Value,
}

impl Outcome {
    fn new(pass: bool, report: Value) -> Self {
        Outcome { exit: if pass { Exit::Pass } else { Exit::Failure }, report }
    }

    pub fn input_error(message: impl Into<String>) -> Self {
        Outcome { exit: Exit::Input, report: json!({ "error": { "kind": "input", "message": message.into() } }) }
    }
}

/// Cap violations map to exit 3, everything else a core op rejects to exit 2.
pub fn core_error(e: coex_core::Error) -> Outcome {
    use coex_core::Error as E;
    let (exit, kind) = match &e {
        E::SizeExceeded { .. } => (Exit::Cap, "size_exceeded"),
        E::BudgetExhausted { .. } => (Exit::Cap, "budget_exhausted"),
        E::UnsupportedCarrier(_) => (Exit::Input, "unsupported_carrier"),
        _ => (Exit::Input, "input"),
    };
    Outcome { exit, report: json!({ "error": { "kind": kind, "message": e.to_string() } }) }
}

impl From<InputError> for Outcome {
    fn from(e: InputError) -> Self {
        Outcome::input_error(e.0)
    }
}

impl From<coex_core::Error> for Outcome {
    fn from(e: coex_core::Error) -> Self {
        core_error(e)
    }
}

type Cmd = Result<Outcome, Outcome>;

pub fn verify(doc: &Value, tol: &Tolerances, max_ground: usize) -> Cmd {
    let parsed = decode_beta_document(doc, tol)?;
    let alg = &parsed.algebra;
    let report = verify_witness_capped(alg, &parsed.beta, max_ground)?;
    let passed = report.passed();
    let structural = match VerifiedWitness::from_report(parsed.beta.clone(), report.clone()) {
        Ok(w) => encode_structural(&structural_properties(alg, &w)?),
        Err(_) => Value::Null,
    };
    Ok(Outcome::new(
        passed,
        json!({
            "command": "verify",
            "ground_size": parsed.beta.ground().len(),
            "implied": parsed.implied.iter().map(|k| encode_subset(*k)).collect::<Vec<_>>(),
            "max_ground": max_ground,
            "report": encode_witness_report(&report),
            "structural": structural,
            "tolerances": tol.to_json(),
        }),
    ))
}

fn encode_certificate(alg: &IntervalEffectAlgebra, cert: &CoexistenceCertificate) -> Value {
    let observables: Vec<Value> = cert
        .system
        .iter()
        .map(|(a, alpha)| {
            let atoms: Vec<Value> = alpha
                .outcomes()
                .iter()
                .zip(alpha.atoms())
                .map(|(x, v)| json!({ "X": encode_subset(*x), "value": encode_effect(v) }))
                .collect();
            json!({ "A": encode_subset(a), "atoms": atoms })
        })
        .collect();
    let p = &cert.projective;
    let failures: Vec<Value> = p
        .failures
        .iter()
        .map(|f| {
            let condition = match f.condition {
                ProjectiveCondition::Identity => "identity",
                ProjectiveCondition::Composition => "composition",
                ProjectiveCondition::Compatibility => "compatibility",
            };
            json!({
                "condition": condition,
                "U": encode_subset(f.u),
                "V": encode_subset(f.v),
                "event": f.event.iter().map(|k| encode_subset(*k)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let range: Vec<Value> = cert
        .range_witnesses
        .iter()
        .map(|r| {
            json!({
                "element": r.element,
                "A": encode_subset(r.index),
                "outcome_set": r.outcome_set.iter().map(|k| encode_subset(*k)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "S": encode_effects(cert.witness.ground().elements()),
        "beta": encode_beta_document(alg, cert.witness.beta()),
        "observables": observables,
        "projective_checks": {
            "identity": p.identity_checks,
            "composition": p.composition_checks,
            "compatibility": p.compatibility_checks,
            "atomwise_pairs": p.atomwise_pairs,
            "max_residual": p.max_residual,
            "tolerance": p.tolerance,
            "passed": p.passed(),
            "failures": failures,
        },
        "range_witnesses": range,
    })
}

pub fn certify(doc: &Value, tol: &Tolerances, max_ground: usize) -> Cmd {
    let parsed = decode_beta_document(doc, tol)?;
    let alg = &parsed.algebra;
    let mut report = match certify_coexistent(alg, parsed.beta, max_ground)? {
        Certification::Certified(cert) => {
            let sound = cert.is_sound();
            let mut v = json!({ "certified": sound, "certificate": encode_certificate(alg, &cert) });
            if !sound {
                v["reason"] = json!("certificate checks failed");
            }
            v
        }
        Certification::Refuted(r) => json!({ "certified": false, "report": encode_witness_report(&r) }),
    };
    let certified = report["certified"] == json!(true);
    report["command"] = json!("certify");
    report["implied"] = json!(parsed.implied.iter().map(|k| encode_subset(*k)).collect::<Vec<_>>());
    report["max_ground"] = json!(max_ground);
    report["tolerances"] = tol.to_json();
    Ok(Outcome::new(certified, report))
}

fn encode_row(alg: &IntervalEffectAlgebra, all: &[coex_core::effects::Effect], row: &HarnessRow) -> Value {
    json!({
        "S": row.indices.iter().map(|&i| encode_effect(&all[i])).collect::<Vec<_>>(),
        "indices": row.indices,
        "witness_exists": row.witness_exists,
        "coexistent": row.coexistent,
        "agree": row.agree,
        "certified": row.certified,
        "witness": row.witness.as_ref().map(|b| encode_beta_document(alg, b)["beta"].clone()),
        "decomposition": row.decomposition.as_ref().map(encode_decomposition),
        "search_space": u64::try_from(row.search_space).unwrap_or(u64::MAX),
        "pruned": row.pruned,
    })
}

/// Runs the oracle harness; on a cap error the rows computed so far are kept.
pub fn oracle(alg: &IntervalEffectAlgebra, cfg: &OracleConfig) -> Cmd {
    if !matches!(alg.group(), Group::Int(_)) {
        return Err(core_error(coex_core::Error::UnsupportedCarrier("the oracle needs a finite integer carrier")));
    }
    let all = alg.enumerate_effects()?;
    let mut rows = Vec::new();
    let mut all_agree = true;
    let result = harness_with(alg, cfg, |row| {
        all_agree &= row.agree && row.certified != Some(false);
        rows.push(encode_row(alg, &all, &row));
        true
    });
    let mut report = json!({
        "command": "oracle",
        "algebra": encode_algebra(alg),
        "max_ground": cfg.max_ground,
        "node_budget": cfg.node_budget,
        "rows": rows,
    });
    match result {
        Ok((max_parts, complete)) => {
            report["max_parts"] = json!(max_parts);
            report["complete"] = json!(complete);
            report["all_agree"] = json!(all_agree);
            Ok(Outcome::new(all_agree, report))
        }
        Err(e) => {
            let mut out = core_error(e);
            report["error"] = out.report["error"].take();
            report["all_agree"] = json!(all_agree);
            out.report = report;
            Err(out)
        }
    }
}

fn encode_pair_result(r: &PairWitnessResult) -> Value {
    json!({
        "pair": [encode_effect(&r.pair.0), encode_effect(&r.pair.1)],
        "witnesses": encode_effects(&r.witnesses),
        "exhaustive": r.exhaustive,
        "found": r.found(),
    })
}

/// Exhaustive on integer carriers; Hermitian carriers only try `candidates`
/// (plus 0), so a miss there is inconclusive.
pub fn pair(alg: &IntervalEffectAlgebra, a: &Value, b: &Value, candidates: Option<&Value>, tol: &Tolerances) -> Cmd {
    let a = decode_effect(alg, a, tol)?;
    let b = decode_effect(alg, b, tol)?;
    let result = match (alg.group(), candidates) {
        (Group::Int(_), None) => pair_witness_search(alg, &a, &b)?,
        (_, cands) => {
            let mut list = vec![alg.zero_effect()];
            if let Some(c) = cands {
                let arr = c.as_array().ok_or_else(|| InputError("candidates must be an array".into()))?;
                for v in arr {
                    list.push(decode_effect(alg, v, tol)?);
                }
            }
            pair_witness_candidates(alg, &a, &b, &list)
        }
    };
    let mut report = encode_pair_result(&result);
    report["command"] = json!("pair");
    report["tolerances"] = tol.to_json();
    Ok(Outcome::new(result.found(), report))
}

/// `{"algebra", "ground"}` over a Hermitian carrier.
pub fn product(doc: &Value, tol: &Tolerances, max_ground: usize) -> Cmd {
    crate::json::check_version(doc)?;
    let alg = decode_algebra(doc.get("algebra").ok_or_else(|| InputError("missing field \"algebra\"".into()))?, tol)?;
    let ground = decode_ground(&alg, doc.get("ground").ok_or_else(|| InputError("missing field \"ground\"".into()))?, tol)?;
    if ground.len() > max_ground {
        return Err(core_error(coex_core::Error::SizeExceeded {
            what: "ground set",
            limit: max_ground,
            actual: ground.len(),
        }));
    }
    let n = ground.len();
    let beta = match product_witness(&alg, ground, tol.commute) {
        Ok(b) => b,
        Err(coex_core::Error::NotCommuting { first, second, residual }) => {
            return Ok(Outcome::new(
                false,
                json!({
                    "command": "product",
                    "commuting": false,
                    "non_commuting": { "first": first, "second": second, "residual": residual },
                    "tolerances": tol.to_json(),
                }),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let report = verify_witness_capped(&alg, &beta, max_ground)?;
    let mut checked = 0usize;
    let mut worst = 0.0f64;
    let full = SubsetKey::full(n);
    for a in full.subsets() {
        for x in a.subsets() {
            for c in (0..n).filter(|&c| !a.contains(c)) {
                let f = product_factorization_check(&alg, &beta, x, a, c)?;
                checked += 1;
                worst = worst.max(f.residual);
            }
        }
    }
    let factorization_ok = worst <= FACTORIZATION_TOLERANCE;
    Ok(Outcome::new(
        report.passed() && factorization_ok,
        json!({
            "command": "product",
            "commuting": true,
            "beta": encode_beta_document(&alg, &beta),
            "report": encode_witness_report(&report),
            "factorization": {
                "checked": checked,
                "max_residual": worst,
                "tolerance": FACTORIZATION_TOLERANCE,
                "passed": factorization_ok,
            },
            "tolerances": tol.to_json(),
        }),
    ))
}

/// Emits the meet witness as a β-document.
pub fn meet(alg: &IntervalEffectAlgebra, s: &Value, tol: &Tolerances) -> Cmd {
    let ground: GroundSet = decode_ground(alg, s, tol)?;
    match MvEffectAlgebra::new(alg) {
        Ok(mv) => Ok(Outcome::new(true, encode_beta_document(alg, &mv.meet_witness(ground)?))),
        Err(coex_core::Error::NotMV) => Ok(Outcome::new(
            false,
            json!({ "command": "meet", "error": { "kind": "not_mv" }, "mv_check": encode_mv_report(&alg.mv_check()?) }),
        )),
        Err(e) => Err(e.into()),
    }
}

pub fn fixture_list() -> Outcome {
    let list: Vec<Value> = fixtures::NAMES
        .iter()
        .map(|&name| {
            let alg = fixtures::by_name(name).expect("bundled fixture");
            json!({ "name": name, "algebra": encode_algebra(&alg), "finite": alg.is_finite() })
        })
        .collect();
    Outcome::new(true, json!({ "command": "fixtures", "fixtures": list }))
}

pub fn fixture(name: &str) -> Cmd {
    let alg = fixtures::by_name(name).ok_or_else(|| Outcome::input_error(format!("unknown fixture \"{name}\"")))?;
    Ok(Outcome::new(true, encode_algebra(&alg)))
}

/// `--fixture NAME` or a parsed algebra document.
pub fn resolve_algebra(fixture: Option<&str>, doc: Option<&Value>, tol: &Tolerances) -> Result<IntervalEffectAlgebra, Outcome> {
    match (fixture, doc) {
        (Some(name), None) => {
            let alg = fixtures::by_name(name).ok_or_else(|| Outcome::input_error(format!("unknown fixture \"{name}\"")))?;
            // rebuild Hermitian fixtures with the requested tolerance
            match alg.group() {
                Group::Hermitian(_) => Ok(decode_algebra(&encode_algebra(&alg), tol)?),
                Group::Int(_) => Ok(alg),
            }
        }
        (None, Some(doc)) => Ok(decode_algebra(doc, tol)?),
        _ => Err(Outcome::input_error("give exactly one of --fixture or --algebra")),
    }
}

//! One function per subcommand; each returns the `result` object of the report.

use serde_json::{json, Value};

use qortho::algebra::{has_separating_vector, induced_partition};
use qortho::commutative::{
    block_sum_matrix, is_complex_hadamard, is_unistochastic_3x3, masa_quasiorthogonal, quasiable_scan,
    quasiable_violation, DoublyStochasticMatrix, QuasiableViolation,
};
use qortho::general::{is_quasiorthogonal_general, q_general, sample_masa_pairs, MemberPair, Witness};
use qortho::latin::{are_orthogonal_latin, pair_counts, q_latin};
use qortho::matcore::is_unitary;
use qortho::mum::{self, Measurement};
use qortho::oracle::{is_quasiorthogonal_oracle, privacy_bound, privacy_norm};
use qortho::{random, AlgebraSpec, Execution, Partition, Tolerance};

use crate::error::CliError;
use crate::input;

type Out = Result<Value, CliError>;

fn violation_json(v: &QuasiableViolation) -> Value {
    json!({
        "row_block": v.row_block + 1,
        "col_block": v.col_block + 1,
        "block_sum": v.block_sum,
        "target": v.target,
    })
}

fn pair_json(p: &MemberPair) -> Value {
    json!({
        "cell": [p.k + 1, p.l + 1],
        "first": [p.first.0 + 1, p.first.1 + 1],
        "second": [p.second.0 + 1, p.second.1 + 1],
    })
}

fn witness_json(w: &Option<Witness>) -> Value {
    match w {
        None => Value::Null,
        Some(Witness::NotQuasiable(v)) => json!({"condition": "not quasiable", "block": violation_json(v)}),
        Some(Witness::Multiplicity(p)) => json!({"condition": "repeated member", "members": pair_json(p)}),
        Some(Witness::NonOrthogonal { pair, inner_abs }) => json!({
            "condition": "non-orthogonal members",
            "members": pair_json(pair),
            "inner_abs": inner_abs,
        }),
    }
}

fn rows(m: &qortho::commutative::RealMatrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn parts(p: &Partition) -> Value {
    json!(p.parts())
}

/// `Q` from the block formulas, the structural verdict, and a seeded
/// sample of maximal commutative subalgebra pairs.
pub fn q(a: &str, b: &str, samples: usize, seed: u64, tol: &Tolerance) -> Out {
    let (a, b) = (input::algebra("--a", a, tol)?, input::algebra("--b", b, tol)?);
    let q = q_general(&a, &b, tol)?;
    let verdict = is_quasiorthogonal_general(&a, &b, tol)?;
    let s = sample_masa_pairs(&a, &b, samples, &mut random::rng(seed), tol)?;
    Ok(json!({
        "Q": q,
        "quasiorthogonal": verdict.quasiorthogonal,
        "witness": witness_json(&verdict.witness),
        "commutative": a.is_commutative() && b.is_commutative(),
        "r": parts(&induced_partition(&a)),
        "c": parts(&induced_partition(&b)),
        "masa_sampling": {
            "samples": s.samples,
            "max_Q": if samples == 0 { Value::Null } else { json!(s.max_q) },
            "first_excess": s.first_excess,
            "consistent": !verdict.quasiorthogonal || s.first_excess.is_none(),
        },
    }))
}

/// With `--r` and `--c`: the verdict and `Y`. Without them: every pair of
/// compositions for which `X` is quasiable.
pub fn quasiable(x: &str, r: Option<&str>, c: Option<&str>, tol: &Tolerance) -> Out {
    let x = DoublyStochasticMatrix::new(input::real_matrix("--x", x)?, tol)?;
    match (r, c) {
        (Some(r), Some(c)) => {
            let (r, c) = (input::partition("--r", r)?, input::partition("--c", c)?);
            let y = block_sum_matrix(&x, &r, &c)?;
            let v = quasiable_violation(&x, &r, &c, tol)?;
            Ok(json!({
                "quasiable": v.is_none(),
                "violation": v.as_ref().map(violation_json),
                "Y": rows(y.entries()),
                "Y_norm_sq": y.frobenius_norm_sq(),
                "r": parts(&r),
                "c": parts(&c),
            }))
        }
        (None, None) => {
            let hits = quasiable_scan(&x, tol, Execution::default())?;
            let list: Vec<Value> = hits.iter().map(|(r, c)| json!({"r": parts(r), "c": parts(c)})).collect();
            Ok(json!({"quasiable_pairs": list, "count": hits.len()}))
        }
        _ => Err(CliError::input("--r and --c must be given together")),
    }
}

/// Complex Hadamard test on `H`; if `H/√n` is unitary, also the MASA verdict.
pub fn hadamard(x: &str, tol: &Tolerance) -> Out {
    let h = input::complex("--x", x)?;
    let hadamard = is_complex_hadamard(&h, tol);
    let masa = if h.is_square() {
        let u = h.scale(1.0 / (h.rows() as f64).sqrt());
        if is_unitary(&u, tol)? {
            json!(masa_quasiorthogonal(&u, tol)?)
        } else {
            Value::Null
        }
    } else {
        Value::Null
    };
    Ok(json!({"complex_hadamard": hadamard, "masa_quasiorthogonal": masa, "n": h.rows()}))
}

/// 3×3 unistochasticity; indices in the report are 1-based.
pub fn unistochastic3(x: &str, tol: &Tolerance) -> Out {
    let x = DoublyStochasticMatrix::new(input::real_matrix("--x", x)?, tol)?;
    let v = is_unistochastic_3x3(&x, tol)?;
    let pairs: Vec<Value> = v
        .pairs
        .iter()
        .map(|p| {
            json!({
                "columns": [p.columns.0 + 1, p.columns.1 + 1],
                "holds": p.holds(),
                "violated_rows": p.violated_rows.iter().map(|r| r + 1).collect::<Vec<_>>(),
            })
        })
        .collect();
    let first = v
        .first_violation()
        .map(|((j, k), l)| json!({"columns": [j + 1, k + 1], "row": l + 1}));
    Ok(json!({"unistochastic": v.unistochastic, "pairs": pairs, "first_violation": first}))
}

pub fn separating(a: &str, tol: &Tolerance) -> Out {
    let a = input::algebra("--a", a, tol)?;
    let failing: Vec<usize> = a
        .blocks()
        .iter()
        .enumerate()
        .filter(|(_, b)| b.a > b.m)
        .map(|(k, _)| k + 1)
        .collect();
    Ok(json!({
        "separating_vector": has_separating_vector(&a),
        "failing_blocks": failing,
        "dim": a.dim(),
    }))
}

pub fn latin_q(l1: &str, l2: &str, tol: &Tolerance) -> Out {
    let (l1, l2) = (input::latin("--l1", l1)?, input::latin("--l2", l2)?);
    Ok(json!({
        "Q": q_latin(&l1, &l2)?,
        "orthogonal": are_orthogonal_latin(&l1, &l2, tol)?,
        "counts": pair_counts(&l1, &l2)?,
        "order": l1.order(),
    }))
}

fn measurements(a: &str, b: &str, tol: &Tolerance) -> Result<(Measurement, Measurement), CliError> {
    Ok((input::measurement("--a", a, tol)?, input::measurement("--b", b, tol)?))
}

pub fn mum_check(a: &str, b: &str, generalized: bool, tol: &Tolerance) -> Out {
    let (p, q) = measurements(a, b, tol)?;
    if generalized {
        let m = mum::is_mum_generalized(&p, &q, tol)?;
        return Ok(json!({"mode": "generalized", "mum": m.mum, "max_residual": m.max_residual}));
    }
    let m = mum::is_mum(&p, &q, tol)?;
    let d = mum::mum_via_quasiorthogonality(&p, &q, tol)?;
    Ok(json!({
        "mode": "uniform",
        "mum": m.mum,
        "max_residual": m.max_residual,
        "quasiorthogonal": d.quasiorthogonal,
        "products_in_algebra": d.products_in_algebra,
        "max_membership_residual": d.max_membership_residual,
        "diagnosis": d.diagnosis(),
        "routes_agree": m.mum == d.mum(),
    }))
}

pub fn amum(a: &str, b: &str, tol: &Tolerance) -> Out {
    let (p, q) = measurements(a, b, tol)?;
    let r = mum::q_bound_check(&p, &q, tol)?;
    Ok(json!({
        "epsilon": r.epsilon,
        "Q": r.q,
        "bound": (1.0 + r.epsilon).powi(2),
        "holds": r.holds,
    }))
}

pub fn privacy(a: &str, b: &str, epsilon: Option<f64>, tol: &Tolerance) -> Out {
    let (a, b): (AlgebraSpec, AlgebraSpec) = (input::algebra("--a", a, tol)?, input::algebra("--b", b, tol)?);
    let norm = privacy_norm(&a, &b)?;
    let bound = match epsilon {
        Some(e) => json!(privacy_bound(e, a.dim())?),
        None => Value::Null,
    };
    Ok(json!({
        "privacy_norm": norm,
        "zero": norm <= tol.decision_tol,
        "epsilon": epsilon,
        "bound": bound,
        "d": a.dim(),
    }))
}

pub fn oracle_q(a: &str, b: &str, tol: &Tolerance) -> Out {
    let (a, b) = (input::algebra("--a", a, tol)?, input::algebra("--b", b, tol)?);
    let c = is_quasiorthogonal_oracle(&a, &b, tol)?;
    Ok(json!({
        "Q": c.q,
        "quasiorthogonal": c.quasiorthogonal,
        "max_deviation": c.max_deviation,
        "consistent": c.consistent,
    }))
}


//! The element-level quasi-ordering of every type constructor, and bounded
//! enumeration of values (the oracle substrate for every other module's
//! tests).

use std::collections::BTreeSet;

use crate::error::Result;
use crate::matching::has_perfect_left_matching;
use crate::types::TypeExpr;
use crate::value::Value;

/// Decides `a <= b` in the quasi-ordering of `ty`: numerically on naturals,
/// by table on finite alphabets, pointwise on products, same-branch on sums,
/// by subword embedding on words and by injective domination on multisets.
pub fn value_leq(ty: &TypeExpr, a: &Value, b: &Value) -> Result<bool> {
    a.conforms(ty)?;
    b.conforms(ty)?;
    Ok(leq_unchecked(ty, a, b))
}

/// As [`value_leq`] but assumes both values conform to `ty`.
pub(crate) fn leq_unchecked(ty: &TypeExpr, a: &Value, b: &Value) -> bool {
    match (ty, a, b) {
        (TypeExpr::Nat, Value::Nat(x), Value::Nat(y)) => x <= y,
        (TypeExpr::Fin(fin), Value::Fin(x), Value::Fin(y)) => {
            fin.symbol_leq(x, y).expect("conforming symbols")
        }
        (TypeExpr::Prod(parts), Value::Tuple(xs), Value::Tuple(ys)) => parts
            .iter()
            .zip(xs.iter().zip(ys))
            .all(|(part, (x, y))| leq_unchecked(part, x, y)),
        (TypeExpr::Sum(branches), Value::Tag(i, x), Value::Tag(j, y)) => {
            i == j && leq_unchecked(&branches[*i], x, y)
        }
        (TypeExpr::Star(inner), Value::Word(xs), Value::Word(ys)) => {
            word_embeds(inner, xs, ys)
        }
        (TypeExpr::MSet(inner), Value::MSet(xs), Value::MSet(ys)) => {
            // An injective map r with x_i <= y_r(i) exists iff the
            // compatibility graph has a matching saturating the left side.
            let adjacency: Vec<Vec<usize>> = xs
                .items()
                .iter()
                .map(|x| {
                    ys.items()
                        .iter()
                        .enumerate()
                        .filter(|(_, y)| leq_unchecked(inner, x, y))
                        .map(|(j, _)| j)
                        .collect()
                })
                .collect();
            has_perfect_left_matching(&adjacency, ys.len())
        }
        _ => unreachable!("mismatching shapes survived conformance"),
    }
}

/// Greedy subword embedding: match each letter of `xs` against the earliest
/// compatible letter of `ys`. The greedy choice is optimal for embeddings.
fn word_embeds(inner: &TypeExpr, xs: &[Value], ys: &[Value]) -> bool {
    let mut j = 0;
    'outer: for x in xs {
        while j < ys.len() {
            let candidate = &ys[j];
            j += 1;
            if leq_unchecked(inner, x, candidate) {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Enumerates exactly the conforming values of [`Value::size`] at most
/// `size_bound`, in the deterministic order of the value's total ordering.
pub fn enumerate_values(ty: &TypeExpr, size_bound: u64) -> BTreeSet<Value> {
    enumerate(ty, size_bound).into_iter().collect()
}

fn enumerate(ty: &TypeExpr, budget: u64) -> Vec<Value> {
    match ty {
        TypeExpr::Nat => (0..budget).map(Value::Nat).collect(),
        TypeExpr::Fin(fin) => {
            if budget >= 1 {
                fin.carrier().iter().map(|s| Value::fin(s.clone())).collect()
            } else {
                Vec::new()
            }
        }
        TypeExpr::Prod(parts) => {
            if budget < 1 {
                return Vec::new();
            }
            let mut tuples = vec![Vec::new()];
            for part in parts {
                let mut next = Vec::new();
                for prefix in &tuples {
                    let used: u64 = prefix.iter().map(Value::size).sum();
                    for item in enumerate(part, budget - 1 - used) {
                        let mut tuple = prefix.clone();
                        tuple.push(item);
                        next.push(tuple);
                    }
                }
                tuples = next;
            }
            tuples.into_iter().map(Value::Tuple).collect()
        }
        TypeExpr::Sum(branches) => {
            if budget < 1 {
                return Vec::new();
            }
            branches
                .iter()
                .enumerate()
                .flat_map(|(i, branch)| {
                    enumerate(branch, budget - 1)
                        .into_iter()
                        .map(move |v| Value::tag(i, v))
                })
                .collect()
        }
        TypeExpr::Star(inner) => {
            if budget < 1 {
                return Vec::new();
            }
            sequences(inner, budget - 1)
                .into_iter()
                .map(Value::Word)
                .collect()
        }
        TypeExpr::MSet(inner) => {
            if budget < 1 {
                return Vec::new();
            }
            let set: BTreeSet<Value> = sequences(inner, budget - 1)
                .into_iter()
                .map(Value::mset)
                .collect();
            set.into_iter().collect()
        }
    }
}

/// All finite sequences of conforming values with total size at most
/// `budget`.
fn sequences(inner: &TypeExpr, budget: u64) -> Vec<Vec<Value>> {
    let mut out = vec![Vec::new()];
    for head in enumerate(inner, budget) {
        let head_size = head.size();
        for tail in sequences(inner, budget - head_size) {
            let mut seq = vec![head.clone()];
            seq.extend(tail);
            out.push(seq);
        }
    }
    out
}

//! Shared generators and independent oracles for the integration suites.
//! Everything here is deterministic under a fixed seed.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wsts_core::engine::Model;
use wsts_core::ideal::{self, Atom, Ideal, MSetIdeal};
use wsts_core::models::{PetriNet, PetriTransition};
use wsts_core::order::value_leq;
use wsts_core::text;
use wsts_core::types::TypeExpr;
use wsts_core::value::Value;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ty(text: &str) -> TypeExpr {
    text::parse_type(text).expect("menu type")
}

/// Types used to generate random canonical ideals: every constructor, depth
/// up to three, base alphabets of at most three symbols.
pub fn generation_menu() -> Vec<TypeExpr> {
    [
        "nat",
        "fin{a,b}",
        "fin{a,b,c | a<b}",
        "(nat * fin{a,b})",
        "(nat + fin{a,b})",
        "fin{a,b}*",
        "nat*",
        "fin{a,b}@",
        "nat@",
        "(nat * fin{a,b})*",
        "fin{a,b}@*",
        "fin{a,b}*@",
    ]
    .iter()
    .map(|t| ty(t))
    .collect()
}

/// A random canonical ideal conforming to `ty`.
pub fn random_ideal(rng: &mut ChaCha8Rng, ty: &TypeExpr) -> Ideal {
    let raw = random_raw_ideal(rng, ty);
    ideal::canonicalize(ty, &raw).expect("generated ideal conforms")
}

/// A random conforming ideal that may violate the canonical-form rules
/// (redundant star members, absorbed atoms and singles).
pub fn random_raw_ideal(rng: &mut ChaCha8Rng, ty: &TypeExpr) -> Ideal {
    match ty {
        TypeExpr::Nat => {
            if rng.gen_bool(0.3) {
                Ideal::omega()
            } else {
                Ideal::nat(rng.gen_range(0..=3))
            }
        }
        TypeExpr::Fin(fin) => {
            let k = rng.gen_range(0..fin.carrier().len());
            Ideal::fin(fin.carrier()[k].clone())
        }
        TypeExpr::Prod(parts) => {
            Ideal::Tuple(parts.iter().map(|p| random_raw_ideal(rng, p)).collect())
        }
        TypeExpr::Sum(branches) => {
            let k = rng.gen_range(0..branches.len());
            Ideal::tag(k, random_raw_ideal(rng, &branches[k]))
        }
        TypeExpr::Star(inner) => {
            let atom_count = rng.gen_range(0..=4);
            let atoms = (0..atom_count)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        Atom::Opt(random_raw_ideal(rng, inner))
                    } else {
                        let member_count = rng.gen_range(1..=3);
                        Atom::Star(
                            (0..member_count)
                                .map(|_| random_raw_ideal(rng, inner))
                                .collect(),
                        )
                    }
                })
                .collect();
            Ideal::Word(atoms)
        }
        TypeExpr::MSet(inner) => {
            let star_count = rng.gen_range(0..=2);
            let single_count = rng.gen_range(0..=4);
            Ideal::MSet(MSetIdeal {
                star: (0..star_count)
                    .map(|_| random_raw_ideal(rng, inner))
                    .collect(),
                singles: (0..single_count)
                    .map(|_| random_raw_ideal(rng, inner))
                    .collect(),
            })
        }
    }
}

/// A random conforming value of size at most `bound`, drawn uniformly from
/// the bounded universe.
pub fn random_value(rng: &mut ChaCha8Rng, ty: &TypeExpr, bound: u64) -> Value {
    let universe: Vec<Value> = wsts_core::order::enumerate_values(ty, bound)
        .into_iter()
        .collect();
    universe[rng.gen_range(0..universe.len())].clone()
}

/// A random downward-closed subset of the bounded universe, as the closure
/// of a random sample.
pub fn random_downward_closed(
    rng: &mut ChaCha8Rng,
    ty: &TypeExpr,
    universe: &[Value],
) -> BTreeSet<Value> {
    let mut closed: BTreeSet<Value> = BTreeSet::new();
    for v in universe {
        if rng.gen_bool(0.25) {
            closed.insert(v.clone());
        }
    }
    let sample: Vec<Value> = closed.iter().cloned().collect();
    for v in universe {
        if sample
            .iter()
            .any(|upper| value_leq(ty, v, upper).expect("conforming"))
        {
            closed.insert(v.clone());
        }
    }
    closed
}

/// Concrete breadth-first reachability through a model, keeping only states
/// accepted by `keep`. Starts may be several states (e.g. a bounded slice of
/// a downward closure).
pub fn bfs_closure(
    model: &Model,
    starts: &[Value],
    depth: usize,
    keep: &dyn Fn(&Value) -> bool,
) -> BTreeSet<Value> {
    let mut seen: BTreeSet<Value> = starts.iter().filter(|v| keep(v)).cloned().collect();
    let mut frontier: Vec<Value> = seen.iter().cloned().collect();
    for _ in 0..depth {
        let mut next = Vec::new();
        for state in &frontier {
            for transition in model.transitions() {
                if let Some(image) = transition.apply(state).expect("conforming state") {
                    if keep(&image) && seen.insert(image.clone()) {
                        next.push(image);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}

/// Marking-level breadth-first reachability for Petri nets with a
/// coordinate cap.
pub fn petri_bfs(
    net: &PetriNet,
    x0: &[u64],
    depth: usize,
    coordinate_cap: u64,
) -> BTreeSet<Vec<u64>> {
    let keep = |m: &Vec<u64>| m.iter().all(|&c| c <= coordinate_cap);
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    if keep(&x0.to_vec()) {
        seen.insert(x0.to_vec());
    }
    let mut frontier: Vec<Vec<u64>> = seen.iter().cloned().collect();
    for _ in 0..depth {
        let mut next = Vec::new();
        for marking in &frontier {
            for t in 0..net.transitions().len() {
                if let Some(image) = net.step(marking, t).expect("marking arity") {
                    if keep(&image) && seen.insert(image.clone()) {
                        next.push(image);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}

/// A random Petri net with at most `max_places` places, `max_transitions`
/// transitions and vector entries up to `max_entry`.
pub fn random_net(
    rng: &mut ChaCha8Rng,
    max_places: usize,
    max_transitions: usize,
    max_entry: u64,
) -> PetriNet {
    let places = rng.gen_range(1..=max_places);
    let transition_count = rng.gen_range(1..=max_transitions);
    let transitions = (0..transition_count)
        .map(|i| PetriTransition {
            name: format!("t{i}"),
            pre: (0..places).map(|_| rng.gen_range(0..=max_entry)).collect(),
            post: (0..places).map(|_| rng.gen_range(0..=max_entry)).collect(),
        })
        .collect();
    PetriNet::new(places, transitions).expect("generated net is well-formed")
}

/// Curated non-inclusions: type, left product, right product, and a witness
/// value in the left denotation but not the right one. Every entry is
/// verified from scratch by the suites (inclusion decision, membership of
/// the witness on both sides).
pub fn curated_false_pairs() -> Vec<(TypeExpr, Ideal, Ideal, Value)> {
    let eq2 = "fin{a,b}*";
    let eq3 = "fin{a,b,c}*";
    let ord3 = "fin{a,b,c | a<b}*";
    let word_cases: Vec<(&str, &str, &str, &str)> = vec![
        // two-letter discrete alphabet
        (eq2, "{a,b}*", "{a}* {b}*", "\"b a\""),
        (eq2, "a?", "b?", "\"a\""),
        (eq2, "a? a?", "a?", "\"a a\""),
        (eq2, "{a}*", "a? a? a?", "\"a a a a\""),
        (eq2, "{a}*", "b?", "\"a\""),
        (eq2, "{a,b}*", "{a}*", "\"b\""),
        (eq2, "a? b?", "b? a?", "\"a b\""),
        (eq2, "b? a? b?", "a? b?", "\"b a b\""),
        (eq2, "{a}* b? {a}*", "{a}*", "\"b\""),
        (eq2, "{a,b}*", "{b}* {a}* {b}*", "\"a b a\""),
        (eq2, "a? {b}*", "{b}* a?", "\"a b\""),
        (eq2, "{a}* {b}*", "{b}* {a}*", "\"a b\""),
        (eq2, "b?", "{a}*", "\"b\""),
        (eq2, "a? b? a?", "a? b?", "\"a b a\""),
        (eq2, "{a,b}*", "{a}* b? {a}*", "\"b b\""),
        (eq2, "{a}* {b}* {a}*", "{a}* {b}*", "\"b a\""),
        (eq2, "a? a? b?", "a? b? a?", "\"a a b\""),
        (eq2, "{b}* a?", "a? {b}*", "\"b a\""),
        // three-letter discrete alphabet
        (eq3, "{a,b,c}*", "{a,b}* {c}* {a,b}*", "\"c a c\""),
        (eq3, "c? {a,b}*", "{a,b}* c?", "\"c a\""),
        (eq3, "{a,c}*", "{a,b}*", "\"c\""),
        (eq3, "a? b? c?", "c? b? a?", "\"a b c\""),
        (eq3, "{c}* a?", "a? {c}*", "\"c a\""),
        (eq3, "{a,b}* c?", "{a,b}*", "\"c\""),
        // ordered alphabet, a below b
        (ord3, "b?", "a?", "\"b\""),
        (ord3, "{b}*", "{a}* b?", "\"b b\""),
        (ord3, "b? a?", "a? b?", "\"b a\""),
        (ord3, "a? b?", "b?", "\"a b\""),
        (ord3, "{b}*", "{a}*", "\"b\""),
        (ord3, "b? b?", "b? a?", "\"b b\""),
        // infinite letter alphabet (naturals)
        ("nat*", "{2}*", "1? 2?", "\"2 2\""),
        ("nat*", "5?", "4?", "\"5\""),
        ("nat*", "{1}* 4?", "4? {1}*", "\"1 4\""),
        ("(nat * nat)*", "(1, w)?", "(w, 1)?", "\"(0, 2)\""),
    ];
    let mset_cases: Vec<(&str, &str, &str, &str)> = vec![
        ("fin{a,b}@", "{}@ <a? a?>", "{}@ <a?>", "[| a, a |]"),
        ("fin{a,b}@", "{a}@ <>", "{}@ <a? a?>", "[| a, a, a |]"),
        ("fin{a,b}@", "{}@ <b?>", "{}@ <a?>", "[| b |]"),
        ("fin{a,b}@", "{a}@ <>", "{b}@ <>", "[| a |]"),
        ("fin{a,b}@", "{a,b}@ <>", "{a}@ <b? b?>", "[| b, b, b |]"),
        ("fin{a,b | a<b}@", "{}@ <b?>", "{}@ <a?>", "[| b |]"),
        ("fin{a,b | a<b}@", "{b}@ <>", "{a}@ <b?>", "[| b, b |]"),
        ("nat@", "{}@ <3?>", "{}@ <2?>", "[| 3 |]"),
        ("nat@", "{1}@ <>", "{}@ <1? 1?>", "[| 1, 1, 1 |]"),
        ("nat@", "{}@ <w?>", "{}@ <3? 3?>", "[| 4 |]"),
    ];
    word_cases
        .into_iter()
        .chain(mset_cases)
        .map(|(ty_text, lhs, rhs, witness)| {
            let t = ty(ty_text);
            let lhs = text::parse_ideal(&t, lhs).expect("curated lhs");
            let rhs = text::parse_ideal(&t, rhs).expect("curated rhs");
            let witness = text::parse_value(&t, witness).expect("curated witness");
            (t, lhs, rhs, witness)
        })
        .collect()
}

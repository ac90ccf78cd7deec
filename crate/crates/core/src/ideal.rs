//! Canonical representations of the irreducible downward-closed subsets of
//! every data type: omega-extended numbers, alphabet symbols, tuple and
//! tagged ideals, word products and multiset products.
//!
//! Inclusion between word products is the atom/product recursion evaluated
//! by dynamic programming over suffix pairs; inclusion between multiset
//! products reduces the injective-map condition to bipartite matching.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::matching::has_perfect_left_matching;
use crate::order::enumerate_values;
use crate::types::TypeExpr;
use crate::value::Value;

/// An ideal of the naturals: a finite down-set or the whole line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NatIdeal {
    Fin(u64),
    Omega,
}

/// One atom of a word product: an optional element of an ideal (`C?`) or
/// arbitrary repetition over a finite set of ideals (`A*`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Opt(Ideal),
    Star(Vec<Ideal>),
}

/// A multiset product: unbounded elements drawn from `star` members plus at
/// most one element under each entry of `singles`. `star` may be empty (it
/// then contributes only the empty multiset).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MSetIdeal {
    pub star: Vec<Ideal>,
    pub singles: Vec<Ideal>,
}

/// An irreducible downward-closed set, shaped by a type expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ideal {
    Nat(NatIdeal),
    Fin(String),
    Tuple(Vec<Ideal>),
    Tag(usize, Box<Ideal>),
    Word(Vec<Atom>),
    MSet(MSetIdeal),
}

impl Ideal {
    pub fn nat(n: u64) -> Ideal {
        Ideal::Nat(NatIdeal::Fin(n))
    }

    pub fn omega() -> Ideal {
        Ideal::Nat(NatIdeal::Omega)
    }

    pub fn fin(symbol: impl Into<String>) -> Ideal {
        Ideal::Fin(symbol.into())
    }

    pub fn tag(branch: usize, inner: Ideal) -> Ideal {
        Ideal::Tag(branch, Box::new(inner))
    }

    /// Checks that the ideal is shaped by `ty`; word-product star atoms must
    /// carry a non-empty set.
    pub fn conforms(&self, ty: &TypeExpr) -> Result<()> {
        self.conforms_at(ty, "root")
    }

    fn conforms_at(&self, ty: &TypeExpr, path: &str) -> Result<()> {
        match (ty, self) {
            (TypeExpr::Nat, Ideal::Nat(_)) => Ok(()),
            (TypeExpr::Fin(fin), Ideal::Fin(symbol)) => {
                if fin.index_of(symbol).is_some() {
                    Ok(())
                } else {
                    Err(Error::shape(path, format!("symbol `{symbol}` not in carrier")))
                }
            }
            (TypeExpr::Prod(parts), Ideal::Tuple(items)) => {
                if parts.len() != items.len() {
                    return Err(Error::shape(
                        path,
                        format!("expected {}-tuple, found {}-tuple", parts.len(), items.len()),
                    ));
                }
                for (i, (part, item)) in parts.iter().zip(items).enumerate() {
                    item.conforms_at(part, &format!("{path}.{i}"))?;
                }
                Ok(())
            }
            (TypeExpr::Sum(branches), Ideal::Tag(branch, inner)) => {
                let part = branches.get(*branch).ok_or_else(|| {
                    Error::shape(path, format!("branch index {branch} out of range"))
                })?;
                inner.conforms_at(part, &format!("{path}.#{}", branch + 1))
            }
            (TypeExpr::Star(inner), Ideal::Word(atoms)) => {
                for (i, atom) in atoms.iter().enumerate() {
                    match atom {
                        Atom::Opt(c) => c.conforms_at(inner, &format!("{path}[{i}]"))?,
                        Atom::Star(members) => {
                            if members.is_empty() {
                                return Err(Error::shape(
                                    format!("{path}[{i}]"),
                                    "star atom with empty set".to_string(),
                                ));
                            }
                            for (k, member) in members.iter().enumerate() {
                                member.conforms_at(inner, &format!("{path}[{i}].{k}"))?;
                            }
                        }
                    }
                }
                Ok(())
            }
            (TypeExpr::MSet(inner), Ideal::MSet(m)) => {
                for (k, member) in m.star.iter().enumerate() {
                    member.conforms_at(inner, &format!("{path}.star.{k}"))?;
                }
                for (k, single) in m.singles.iter().enumerate() {
                    single.conforms_at(inner, &format!("{path}.single.{k}"))?;
                }
                Ok(())
            }
            _ => Err(Error::shape(path, "ideal does not match type constructor".to_string())),
        }
    }
}

/// The canonical ideal denoting the downward closure of a single value.
pub fn principal(ty: &TypeExpr, v: &Value) -> Result<Ideal> {
    v.conforms(ty)?;
    Ok(canon(ty, principal_unchecked(ty, v)))
}

fn principal_unchecked(ty: &TypeExpr, v: &Value) -> Ideal {
    match (ty, v) {
        (TypeExpr::Nat, Value::Nat(n)) => Ideal::nat(*n),
        (TypeExpr::Fin(_), Value::Fin(symbol)) => Ideal::fin(symbol.clone()),
        (TypeExpr::Prod(parts), Value::Tuple(items)) => Ideal::Tuple(
            parts
                .iter()
                .zip(items)
                .map(|(part, item)| principal_unchecked(part, item))
                .collect(),
        ),
        (TypeExpr::Sum(branches), Value::Tag(branch, inner)) => {
            Ideal::tag(*branch, principal_unchecked(&branches[*branch], inner))
        }
        (TypeExpr::Star(inner), Value::Word(letters)) => Ideal::Word(
            letters
                .iter()
                .map(|letter| Atom::Opt(principal_unchecked(inner, letter)))
                .collect(),
        ),
        (TypeExpr::MSet(inner), Value::MSet(bag)) => Ideal::MSet(MSetIdeal {
            star: Vec::new(),
            singles: bag
                .items()
                .iter()
                .map(|item| principal_unchecked(inner, item))
                .collect(),
        }),
        _ => unreachable!("mismatching shapes survived conformance"),
    }
}

/// Decides denotational inclusion between two conforming ideals.
pub fn leq(ty: &TypeExpr, lhs: &Ideal, rhs: &Ideal) -> Result<bool> {
    lhs.conforms(ty)?;
    rhs.conforms(ty)?;
    Ok(ileq(ty, lhs, rhs))
}

pub(crate) fn ileq(ty: &TypeExpr, lhs: &Ideal, rhs: &Ideal) -> bool {
    match (ty, lhs, rhs) {
        (TypeExpr::Nat, Ideal::Nat(x), Ideal::Nat(y)) => match (x, y) {
            (_, NatIdeal::Omega) => true,
            (NatIdeal::Omega, NatIdeal::Fin(_)) => false,
            (NatIdeal::Fin(n), NatIdeal::Fin(m)) => n <= m,
        },
        (TypeExpr::Fin(fin), Ideal::Fin(x), Ideal::Fin(y)) => {
            fin.symbol_leq(x, y).expect("conforming symbols")
        }
        (TypeExpr::Prod(parts), Ideal::Tuple(xs), Ideal::Tuple(ys)) => parts
            .iter()
            .zip(xs.iter().zip(ys))
            .all(|(part, (x, y))| ileq(part, x, y)),
        (TypeExpr::Sum(branches), Ideal::Tag(i, x), Ideal::Tag(j, y)) => {
            i == j && ileq(&branches[*i], x, y)
        }
        (TypeExpr::Star(inner), Ideal::Word(xs), Ideal::Word(ys)) => word_leq(inner, xs, ys),
        (TypeExpr::MSet(inner), Ideal::MSet(x), Ideal::MSet(y)) => mset_leq(inner, x, y),
        _ => unreachable!("mismatching shapes survived conformance"),
    }
}

/// `lhs ≡ rhs`: mutual inclusion. Ideal equality is always taken up to this
/// relation, never syntactically.
pub fn equivalent(ty: &TypeExpr, lhs: &Ideal, rhs: &Ideal) -> Result<bool> {
    Ok(leq(ty, lhs, rhs)? && leq(ty, rhs, lhs)?)
}

fn atom_leq(inner: &TypeExpr, lhs: &Atom, rhs: &Atom) -> bool {
    match (lhs, rhs) {
        (Atom::Opt(c), Atom::Opt(c2)) => ileq(inner, c, c2),
        (Atom::Opt(c), Atom::Star(a2)) => a2.iter().any(|c2| ileq(inner, c, c2)),
        (Atom::Star(_), Atom::Opt(_)) => false,
        (Atom::Star(a), Atom::Star(a2)) => a
            .iter()
            .all(|c| a2.iter().any(|c2| ileq(inner, c, c2))),
    }
}

/// Word-product inclusion: the atom/product recursion, memoized over suffix
/// index pairs. The base cases are forced by denotations: the empty product
/// (denoting the singleton of the empty word) is below everything, and a
/// non-empty product is never below the empty one.
fn word_leq(inner: &TypeExpr, lhs: &[Atom], rhs: &[Atom]) -> bool {
    let mut memo = vec![vec![None; rhs.len() + 1]; lhs.len() + 1];
    word_leq_at(inner, lhs, rhs, 0, 0, &mut memo)
}

fn word_leq_at(
    inner: &TypeExpr,
    lhs: &[Atom],
    rhs: &[Atom],
    i: usize,
    j: usize,
    memo: &mut Vec<Vec<Option<bool>>>,
) -> bool {
    if i == lhs.len() {
        return true;
    }
    if j == rhs.len() {
        return false;
    }
    if let Some(known) = memo[i][j] {
        return known;
    }
    let e = &lhs[i];
    let e2 = &rhs[j];
    let head_leq = atom_leq(inner, e, e2);
    let mut result = false;
    // (1) skip the right atom when the heads are unrelated
    if !head_leq {
        result = word_leq_at(inner, lhs, rhs, i, j + 1, memo);
    }
    // (2) consume both atoms when both are optional and included
    if !result {
        if let (Atom::Opt(c), Atom::Opt(c2)) = (e, e2) {
            if ileq(inner, c, c2) {
                result = word_leq_at(inner, lhs, rhs, i + 1, j + 1, memo);
            }
        }
    }
    // (3) absorb the left atom into a star on the right
    if !result && matches!(e2, Atom::Star(_)) && head_leq {
        result = word_leq_at(inner, lhs, rhs, i + 1, j, memo);
    }
    memo[i][j] = Some(result);
    result
}

/// Multiset-product inclusion: the star members must embed into the right
/// star, and the singles not absorbed by the right star must map injectively
/// into the right singles.
fn mset_leq(inner: &TypeExpr, lhs: &MSetIdeal, rhs: &MSetIdeal) -> bool {
    if !lhs
        .star
        .iter()
        .all(|c| rhs.star.iter().any(|c2| ileq(inner, c, c2)))
    {
        return false;
    }
    let unabsorbed: Vec<&Ideal> = lhs
        .singles
        .iter()
        .filter(|c| !rhs.star.iter().any(|c2| ileq(inner, c, c2)))
        .collect();
    let adjacency: Vec<Vec<usize>> = unabsorbed
        .iter()
        .map(|c| {
            rhs.singles
                .iter()
                .enumerate()
                .filter(|(_, c2)| ileq(inner, c, c2))
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    has_perfect_left_matching(&adjacency, rhs.singles.len())
}

/// Decides `v` in the denotation of `ideal`.
pub fn member(ty: &TypeExpr, v: &Value, ideal: &Ideal) -> Result<bool> {
    v.conforms(ty)?;
    ideal.conforms(ty)?;
    Ok(imember(ty, v, ideal))
}

pub(crate) fn imember(ty: &TypeExpr, v: &Value, ideal: &Ideal) -> bool {
    match (ty, v, ideal) {
        (TypeExpr::Nat, Value::Nat(n), Ideal::Nat(i)) => match i {
            NatIdeal::Omega => true,
            NatIdeal::Fin(bound) => n <= bound,
        },
        (TypeExpr::Fin(fin), Value::Fin(x), Ideal::Fin(y)) => {
            fin.symbol_leq(x, y).expect("conforming symbols")
        }
        (TypeExpr::Prod(parts), Value::Tuple(xs), Ideal::Tuple(is)) => parts
            .iter()
            .zip(xs.iter().zip(is))
            .all(|(part, (x, i))| imember(part, x, i)),
        (TypeExpr::Sum(branches), Value::Tag(b, x), Ideal::Tag(c, i)) => {
            b == c && imember(&branches[*b], x, i)
        }
        (TypeExpr::Star(inner), Value::Word(letters), Ideal::Word(atoms)) => {
            word_member(inner, letters, atoms)
        }
        (TypeExpr::MSet(inner), Value::MSet(bag), Ideal::MSet(m)) => {
            let unabsorbed: Vec<&Value> = bag
                .items()
                .iter()
                .filter(|x| !m.star.iter().any(|c| imember(inner, x, c)))
                .collect();
            let adjacency: Vec<Vec<usize>> = unabsorbed
                .iter()
                .map(|x| {
                    m.singles
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| imember(inner, x, c))
                        .map(|(k, _)| k)
                        .collect()
                })
                .collect();
            has_perfect_left_matching(&adjacency, m.singles.len())
        }
        _ => unreachable!("mismatching shapes survived conformance"),
    }
}

/// Membership of a word in a word product, by dynamic programming over
/// (letter position, atom position) pairs.
fn word_member(inner: &TypeExpr, letters: &[Value], atoms: &[Atom]) -> bool {
    let mut memo = vec![vec![None; atoms.len() + 1]; letters.len() + 1];
    word_member_at(inner, letters, atoms, 0, 0, &mut memo)
}

fn word_member_at(
    inner: &TypeExpr,
    letters: &[Value],
    atoms: &[Atom],
    i: usize,
    j: usize,
    memo: &mut Vec<Vec<Option<bool>>>,
) -> bool {
    if i == letters.len() {
        return true;
    }
    if j == atoms.len() {
        return false;
    }
    if let Some(known) = memo[i][j] {
        return known;
    }
    let letter = &letters[i];
    let mut result = word_member_at(inner, letters, atoms, i, j + 1, memo);
    if !result {
        result = match &atoms[j] {
            Atom::Opt(c) => {
                imember(inner, letter, c) && word_member_at(inner, letters, atoms, i + 1, j + 1, memo)
            }
            Atom::Star(members) => {
                members.iter().any(|c| imember(inner, letter, c))
                    && word_member_at(inner, letters, atoms, i + 1, j, memo)
            }
        };
    }
    memo[i][j] = Some(result);
    result
}

/// Reduces a list of ideals over `ty` to a sorted inclusion antichain,
/// keeping the first representative of each equivalence class.
pub(crate) fn antichain(ty: &TypeExpr, items: Vec<Ideal>) -> Vec<Ideal> {
    let mut kept: Vec<Ideal> = Vec::new();
    for item in items {
        if kept.iter().any(|k| ileq(ty, &item, k)) {
            continue;
        }
        kept.retain(|k| !ileq(ty, k, &item));
        kept.push(item);
    }
    kept.sort();
    kept
}

/// Rewrites an ideal into canonical form: star sets are inclusion
/// antichains, word atoms adjacent to a star that includes them are dropped,
/// multiset singles included in a star member are dropped, and every
/// sub-ideal is canonical. The result is equivalent to the input.
pub fn canonicalize(ty: &TypeExpr, ideal: &Ideal) -> Result<Ideal> {
    ideal.conforms(ty)?;
    Ok(canon(ty, ideal.clone()))
}

pub(crate) fn canon(ty: &TypeExpr, ideal: Ideal) -> Ideal {
    match (ty, ideal) {
        (TypeExpr::Nat, i) | (TypeExpr::Fin(_), i) => i,
        (TypeExpr::Prod(parts), Ideal::Tuple(items)) => Ideal::Tuple(
            parts
                .iter()
                .zip(items)
                .map(|(part, item)| canon(part, item))
                .collect(),
        ),
        (TypeExpr::Sum(branches), Ideal::Tag(branch, inner)) => {
            Ideal::tag(branch, canon(&branches[branch], *inner))
        }
        (TypeExpr::Star(inner), Ideal::Word(atoms)) => {
            let mut atoms: Vec<Atom> = atoms
                .into_iter()
                .map(|atom| match atom {
                    Atom::Opt(c) => Atom::Opt(canon(inner, c)),
                    Atom::Star(members) => {
                        let members = members.into_iter().map(|m| canon(inner, m)).collect();
                        Atom::Star(antichain(inner, members))
                    }
                })
                .collect();
            // Drop atoms included in an adjacent star, to fixpoint.
            loop {
                let redundant = (0..atoms.len()).find(|&i| {
                    let against_star = |k: usize| {
                        matches!(atoms[k], Atom::Star(_)) && atom_leq(inner, &atoms[i], &atoms[k])
                    };
                    (i > 0 && against_star(i - 1)) || (i + 1 < atoms.len() && against_star(i + 1))
                });
                match redundant {
                    Some(i) => {
                        atoms.remove(i);
                    }
                    None => break,
                }
            }
            Ideal::Word(atoms)
        }
        (TypeExpr::MSet(inner), Ideal::MSet(m)) => {
            let star = antichain(
                inner,
                m.star.into_iter().map(|c| canon(inner, c)).collect(),
            );
            let mut singles: Vec<Ideal> = m
                .singles
                .into_iter()
                .map(|c| canon(inner, c))
                .filter(|c| !star.iter().any(|s| ileq(inner, c, s)))
                .collect();
            singles.sort();
            Ideal::MSet(MSetIdeal { star, singles })
        }
        _ => unreachable!("mismatching shapes survived conformance"),
    }
}

/// A canonical antichain whose denotations union to the whole space of `ty`.
pub fn full_ideals(ty: &TypeExpr) -> Vec<Ideal> {
    match ty {
        TypeExpr::Nat => vec![Ideal::omega()],
        TypeExpr::Fin(fin) => {
            let maximal = fin
                .maximal_indices()
                .into_iter()
                .map(|i| Ideal::fin(fin.carrier()[i].clone()))
                .collect();
            antichain(ty, maximal)
        }
        TypeExpr::Prod(parts) => {
            let mut tuples: Vec<Vec<Ideal>> = vec![Vec::new()];
            for part in parts {
                let fulls = full_ideals(part);
                let mut next = Vec::new();
                for prefix in &tuples {
                    for f in &fulls {
                        let mut tuple = prefix.clone();
                        tuple.push(f.clone());
                        next.push(tuple);
                    }
                }
                tuples = next;
            }
            let mut out: Vec<Ideal> = tuples.into_iter().map(Ideal::Tuple).collect();
            out.sort();
            out
        }
        TypeExpr::Sum(branches) => {
            let mut out: Vec<Ideal> = branches
                .iter()
                .enumerate()
                .flat_map(|(i, branch)| {
                    full_ideals(branch).into_iter().map(move |f| Ideal::tag(i, f))
                })
                .collect();
            out.sort();
            out
        }
        TypeExpr::Star(inner) => vec![Ideal::Word(vec![Atom::Star(full_ideals(inner))])],
        TypeExpr::MSet(inner) => vec![Ideal::MSet(MSetIdeal {
            star: full_ideals(inner),
            singles: Vec::new(),
        })],
    }
}

/// The denotation of an ideal restricted to the bounded value universe,
/// computed by enumeration plus membership. This is the oracle that
/// cross-checks the inclusion decision.
pub fn denote_bounded(ty: &TypeExpr, ideal: &Ideal, size_bound: u64) -> Result<BTreeSet<Value>> {
    ideal.conforms(ty)?;
    Ok(enumerate_values(ty, size_bound)
        .into_iter()
        .filter(|v| imember(ty, v, ideal))
        .collect())
}

//! Arbitrary downward-closed sets as finite inclusion antichains of ideals.
//! Inclusion between antichains reduces to part-wise inclusion, which is
//! what keeps the whole algebra polynomial.

use crate::error::{Error, Result};
use crate::ideal::{self, Ideal};
use crate::order::leq_unchecked;
use crate::types::TypeExpr;
use crate::value::Value;

/// A finite antichain of canonical ideals, denoting their union. The empty
/// antichain denotes the empty set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DownSet {
    ty: TypeExpr,
    parts: Vec<Ideal>,
}

impl DownSet {
    /// The empty downward-closed set.
    pub fn empty(ty: TypeExpr) -> DownSet {
        DownSet { ty, parts: Vec::new() }
    }

    /// The whole space.
    pub fn full(ty: TypeExpr) -> DownSet {
        let parts = ideal::full_ideals(&ty);
        DownSet { ty, parts }
    }

    /// Builds a downset from arbitrary ideals: each is canonicalized, then
    /// the antichain is reduced eagerly.
    pub fn from_ideals(ty: TypeExpr, ideals: Vec<Ideal>) -> Result<DownSet> {
        for i in &ideals {
            i.conforms(&ty)?;
        }
        let canonical: Vec<Ideal> = ideals.into_iter().map(|i| ideal::canon(&ty, i)).collect();
        let parts = ideal::antichain(&ty, canonical);
        Ok(DownSet { ty, parts })
    }

    /// The downward closure of a finite set of values: principal ideals of
    /// the maximal members.
    pub fn from_values(ty: TypeExpr, values: &[Value]) -> Result<DownSet> {
        for v in values {
            v.conforms(&ty)?;
        }
        let maximal: Vec<&Value> = values
            .iter()
            .enumerate()
            .filter(|(i, v)| {
                values.iter().enumerate().all(|(j, w)| {
                    if !leq_unchecked(&ty, v, w) {
                        return true;
                    }
                    // keep v unless some w strictly dominates it, or an
                    // equivalent w comes earlier
                    leq_unchecked(&ty, w, v) && *i <= j
                })
            })
            .map(|(_, v)| v)
            .collect();
        let ideals = maximal
            .into_iter()
            .map(|v| ideal::principal(&ty, v))
            .collect::<Result<Vec<_>>>()?;
        DownSet::from_ideals(ty, ideals)
    }

    pub fn ty(&self) -> &TypeExpr {
        &self.ty
    }

    pub fn parts(&self) -> &[Ideal] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Union of two downsets over the same type.
    pub fn union(&self, other: &DownSet) -> Result<DownSet> {
        self.check_same_type(other)?;
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Ok(DownSet {
            ty: self.ty.clone(),
            parts: ideal::antichain(&self.ty, parts),
        })
    }

    /// Adds one ideal, reducing the antichain. Returns whether the downset
    /// grew (false when the ideal was already included).
    pub fn insert(&mut self, ideal_: Ideal) -> Result<bool> {
        ideal_.conforms(&self.ty)?;
        let canonical = ideal::canon(&self.ty, ideal_);
        if self.parts.iter().any(|p| ideal::ileq(&self.ty, &canonical, p)) {
            return Ok(false);
        }
        self.parts.retain(|p| !ideal::ileq(&self.ty, p, &canonical));
        self.parts.push(canonical);
        self.parts.sort();
        Ok(true)
    }

    /// Denotational inclusion: every part of `self` included in some part of
    /// `other`.
    pub fn leq(&self, other: &DownSet) -> Result<bool> {
        self.check_same_type(other)?;
        Ok(self
            .parts
            .iter()
            .all(|p| other.parts.iter().any(|q| ideal::ileq(&self.ty, p, q))))
    }

    /// Mutual inclusion.
    pub fn equivalent(&self, other: &DownSet) -> Result<bool> {
        Ok(self.leq(other)? && other.leq(self)?)
    }

    /// `v` in the denotation: membership in some part.
    pub fn member(&self, v: &Value) -> Result<bool> {
        v.conforms(&self.ty)?;
        Ok(self.parts.iter().any(|p| ideal::imember(&self.ty, v, p)))
    }

    fn check_same_type(&self, other: &DownSet) -> Result<()> {
        if self.ty != other.ty {
            return Err(Error::TypeMismatch(
                "downsets are declared against different types".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{Atom, Ideal};
    use crate::order::enumerate_values;
    use crate::types::FinType;

    fn fin_ab() -> TypeExpr {
        TypeExpr::Fin(FinType::discrete(&["a", "b"]))
    }

    fn word_ty() -> TypeExpr {
        TypeExpr::star(fin_ab())
    }

    fn word_val(symbols: &str) -> Value {
        Value::Word(symbols.chars().map(|c| Value::fin(c.to_string())).collect())
    }

    fn opt(sym: &str) -> Atom {
        Atom::Opt(Ideal::fin(sym))
    }

    fn star(symbols: &[&str]) -> Atom {
        Atom::Star(symbols.iter().map(|s| Ideal::fin(*s)).collect())
    }

    #[test]
    fn from_values_keeps_maximal_elements() {
        let d = DownSet::from_values(
            TypeExpr::Nat,
            &[Value::nat(1), Value::nat(3), Value::nat(2)],
        )
        .unwrap();
        assert_eq!(d.parts(), &[Ideal::nat(3)]);

        let empty = DownSet::from_values(TypeExpr::Nat, &[]).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn from_values_keeps_incomparable_words() {
        let ty = word_ty();
        let d = DownSet::from_values(ty.clone(), &[word_val("ab"), word_val("ba")]).unwrap();
        assert_eq!(
            d.parts(),
            &[
                Ideal::Word(vec![opt("a"), opt("b")]),
                Ideal::Word(vec![opt("b"), opt("a")]),
            ]
        );
        // mutual non-inclusion confirmed by enumeration
        let da = ideal::denote_bounded(&ty, &d.parts()[0], 6).unwrap();
        let db = ideal::denote_bounded(&ty, &d.parts()[1], 6).unwrap();
        assert!(!da.is_subset(&db) && !db.is_subset(&da));
    }

    #[test]
    fn union_absorbs() {
        let ty = TypeExpr::Nat;
        let three = DownSet::from_ideals(ty.clone(), vec![Ideal::nat(3)]).unwrap();
        let top = DownSet::from_ideals(ty.clone(), vec![Ideal::omega()]).unwrap();
        assert_eq!(three.union(&top).unwrap(), top);

        let ty = word_ty();
        let a_opt = DownSet::from_ideals(ty.clone(), vec![Ideal::Word(vec![opt("a")])]).unwrap();
        let a_star =
            DownSet::from_ideals(ty.clone(), vec![Ideal::Word(vec![star(&["a"])])]).unwrap();
        assert_eq!(a_opt.union(&a_star).unwrap(), a_star);

        let ab = DownSet::from_ideals(ty.clone(), vec![Ideal::Word(vec![opt("a"), opt("b")])])
            .unwrap();
        let ba = DownSet::from_ideals(ty.clone(), vec![Ideal::Word(vec![opt("b"), opt("a")])])
            .unwrap();
        assert_eq!(ab.union(&ba).unwrap().parts().len(), 2);
    }

    #[test]
    fn leq_is_partwise() {
        let ty = word_ty();
        let a = DownSet::from_ideals(ty.clone(), vec![Ideal::Word(vec![opt("a")])]).unwrap();
        let ab = DownSet::from_ideals(
            ty.clone(),
            vec![Ideal::Word(vec![opt("a")]), Ideal::Word(vec![opt("b")])],
        )
        .unwrap();
        assert!(a.leq(&ab).unwrap());

        let joint =
            DownSet::from_ideals(ty.clone(), vec![Ideal::Word(vec![star(&["a", "b"])])]).unwrap();
        let split = DownSet::from_ideals(
            ty.clone(),
            vec![
                Ideal::Word(vec![star(&["a"])]),
                Ideal::Word(vec![star(&["b"])]),
            ],
        )
        .unwrap();
        assert!(!joint.leq(&split).unwrap());
        // witness for the strict inclusion failure
        assert!(joint.member(&word_val("ab")).unwrap());
        assert!(!split.member(&word_val("ab")).unwrap());

        let nats = DownSet::from_ideals(TypeExpr::Nat, vec![Ideal::nat(3), Ideal::nat(5)]).unwrap();
        let top = DownSet::from_ideals(TypeExpr::Nat, vec![Ideal::omega()]).unwrap();
        assert!(nats.leq(&top).unwrap());
    }

    #[test]
    fn membership_delegates_to_parts() {
        let three = DownSet::from_ideals(TypeExpr::Nat, vec![Ideal::nat(3)]).unwrap();
        assert!(three.member(&Value::nat(2)).unwrap());
        assert!(!three.member(&Value::nat(4)).unwrap());

        let ty = word_ty();
        let split = DownSet::from_ideals(
            ty.clone(),
            vec![Ideal::Word(vec![star(&["a"]), star(&["b"])])],
        )
        .unwrap();
        assert!(!split.member(&word_val("ba")).unwrap());

        let mty = TypeExpr::mset(fin_ab());
        let some_mset = DownSet::from_ideals(
            mty.clone(),
            vec![Ideal::MSet(crate::ideal::MSetIdeal {
                star: vec![],
                singles: vec![Ideal::fin("b")],
            })],
        )
        .unwrap();
        assert!(some_mset.member(&Value::mset(vec![])).unwrap());
    }

    #[test]
    fn full_downset_contains_every_bounded_value() {
        for ty in [
            TypeExpr::Prod(vec![TypeExpr::Nat, TypeExpr::Nat]),
            word_ty(),
            TypeExpr::Sum(vec![TypeExpr::Nat, TypeExpr::Nat]),
            TypeExpr::mset(fin_ab()),
        ] {
            let full = DownSet::full(ty.clone());
            for v in enumerate_values(&ty, 5) {
                assert!(full.member(&v).unwrap());
            }
        }
    }

    #[test]
    fn union_laws_up_to_equivalence() {
        let ty = word_ty();
        let parts = [
            DownSet::from_ideals(ty.clone(), vec![Ideal::Word(vec![opt("a")])]).unwrap(),
            DownSet::from_ideals(ty.clone(), vec![Ideal::Word(vec![star(&["b"])])]).unwrap(),
            DownSet::from_ideals(ty.clone(), vec![Ideal::Word(vec![opt("b"), opt("a")])]).unwrap(),
        ];
        let empty = DownSet::empty(ty.clone());
        let full = DownSet::full(ty.clone());
        for x in &parts {
            for y in &parts {
                let xy = x.union(y).unwrap();
                let yx = y.union(x).unwrap();
                assert!(xy.equivalent(&yx).unwrap(), "commutativity");
                for z in &parts {
                    let a = xy.union(z).unwrap();
                    let b = x.union(&y.union(z).unwrap()).unwrap();
                    assert!(a.equivalent(&b).unwrap(), "associativity");
                }
            }
            assert!(x.union(x).unwrap().equivalent(x).unwrap(), "idempotence");
            assert!(x.union(&empty).unwrap().equivalent(x).unwrap(), "neutral");
            assert!(x.union(&full).unwrap().equivalent(&full).unwrap(), "absorbing");
        }
    }

    #[test]
    fn type_mismatch_is_an_error() {
        let a = DownSet::empty(TypeExpr::Nat);
        let b = DownSet::empty(word_ty());
        assert!(a.leq(&b).is_err());
        assert!(a.union(&b).is_err());
    }
}

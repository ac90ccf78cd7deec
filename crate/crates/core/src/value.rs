//! Concrete elements of data types.

use crate::error::{Error, Result};
use crate::types::TypeExpr;

/// A finite bag of values, kept sorted so that bags with equal
/// multiplicities compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bag(Vec<Value>);

impl Bag {
    pub fn new(mut items: Vec<Value>) -> Self {
        items.sort();
        Bag(items)
    }

    pub fn items(&self) -> &[Value] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A concrete element of a data type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Nat(u64),
    Fin(String),
    Tuple(Vec<Value>),
    Tag(usize, Box<Value>),
    Word(Vec<Value>),
    MSet(Bag),
}

impl Value {
    pub fn nat(n: u64) -> Value {
        Value::Nat(n)
    }

    pub fn fin(symbol: impl Into<String>) -> Value {
        Value::Fin(symbol.into())
    }

    pub fn tag(branch: usize, inner: Value) -> Value {
        Value::Tag(branch, Box::new(inner))
    }

    pub fn mset(items: Vec<Value>) -> Value {
        Value::MSet(Bag::new(items))
    }

    /// The size metric used by bounded enumeration: a `Nat(n)` leaf costs
    /// `n + 1`, a `Fin` leaf costs 1, and every constructor node (tuple,
    /// tag, word, multiset) costs 1 plus the sizes of its children.
    pub fn size(&self) -> u64 {
        match self {
            Value::Nat(n) => n + 1,
            Value::Fin(_) => 1,
            Value::Tuple(parts) => 1 + parts.iter().map(Value::size).sum::<u64>(),
            Value::Tag(_, inner) => 1 + inner.size(),
            Value::Word(letters) => 1 + letters.iter().map(Value::size).sum::<u64>(),
            Value::MSet(bag) => 1 + bag.items().iter().map(Value::size).sum::<u64>(),
        }
    }

    /// Checks that the value is shaped by `ty`; on mismatch the error names
    /// the path of the offending sub-value.
    pub fn conforms(&self, ty: &TypeExpr) -> Result<()> {
        self.conforms_at(ty, "root")
    }

    fn conforms_at(&self, ty: &TypeExpr, path: &str) -> Result<()> {
        match (ty, self) {
            (TypeExpr::Nat, Value::Nat(_)) => Ok(()),
            (TypeExpr::Fin(fin), Value::Fin(symbol)) => {
                if fin.index_of(symbol).is_some() {
                    Ok(())
                } else {
                    Err(Error::shape(path, format!("symbol `{symbol}` not in carrier")))
                }
            }
            (TypeExpr::Prod(parts), Value::Tuple(items)) => {
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
            (TypeExpr::Sum(branches), Value::Tag(branch, inner)) => {
                let part = branches.get(*branch).ok_or_else(|| {
                    Error::shape(path, format!("branch index {branch} out of range"))
                })?;
                inner.conforms_at(part, &format!("{path}.#{}", branch + 1))
            }
            (TypeExpr::Star(inner), Value::Word(letters)) => {
                for (i, letter) in letters.iter().enumerate() {
                    letter.conforms_at(inner, &format!("{path}[{i}]"))?;
                }
                Ok(())
            }
            (TypeExpr::MSet(inner), Value::MSet(bag)) => {
                for (i, item) in bag.items().iter().enumerate() {
                    item.conforms_at(inner, &format!("{path}[{i}]"))?;
                }
                Ok(())
            }
            _ => Err(Error::shape(
                path,
                format!("value does not match type constructor {:?}", constructor_name(ty)),
            )),
        }
    }
}

fn constructor_name(ty: &TypeExpr) -> &'static str {
    match ty {
        TypeExpr::Nat => "nat",
        TypeExpr::Fin(_) => "fin",
        TypeExpr::Prod(_) => "prod",
        TypeExpr::Sum(_) => "sum",
        TypeExpr::Star(_) => "star",
        TypeExpr::MSet(_) => "mset",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::FinType;

    #[test]
    fn bags_are_order_insensitive() {
        let x = Value::mset(vec![Value::fin("a"), Value::fin("b")]);
        let y = Value::mset(vec![Value::fin("b"), Value::fin("a")]);
        assert_eq!(x, y);
    }

    #[test]
    fn size_metric() {
        assert_eq!(Value::nat(0).size(), 1);
        assert_eq!(Value::nat(3).size(), 4);
        assert_eq!(Value::fin("a").size(), 1);
        // word "aaa": node + 3 letters
        let w = Value::Word(vec![Value::fin("a"); 3]);
        assert_eq!(w.size(), 4);
        // (1, 2): node + 2 + 3
        let t = Value::Tuple(vec![Value::nat(1), Value::nat(2)]);
        assert_eq!(t.size(), 6);
        assert_eq!(Value::tag(0, Value::nat(0)).size(), 2);
        assert_eq!(Value::mset(vec![]).size(), 1);
    }

    #[test]
    fn conformance_reports_path() {
        let ty = TypeExpr::Prod(vec![
            TypeExpr::Nat,
            TypeExpr::Fin(FinType::discrete(&["a", "b"])),
        ]);
        let good = Value::Tuple(vec![Value::nat(1), Value::fin("b")]);
        assert!(good.conforms(&ty).is_ok());

        let bad = Value::Tuple(vec![Value::nat(1), Value::fin("z")]);
        let err = bad.conforms(&ty).unwrap_err();
        match err {
            Error::Shape { path, .. } => assert_eq!(path, "root.1"),
            other => panic!("unexpected error {other:?}"),
        }
    }
}

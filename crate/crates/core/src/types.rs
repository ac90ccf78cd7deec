//! The data-type grammar: naturals, finite quasi-ordered alphabets, finite
//! products and sums, finite words, finite multisets.

use crate::error::{Error, Result};

/// A finite alphabet together with a quasi-ordering given as a relation
/// table over carrier indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinType {
    carrier: Vec<String>,
    /// `leq[i][j]` holds iff `carrier[i] <= carrier[j]`.
    leq: Vec<Vec<bool>>,
}

impl FinType {
    /// Builds an alphabet from explicit `x <= y` pairs, closing the relation
    /// reflexively and transitively. This is the constructor the textual
    /// grammar uses; it cannot produce an invalid table.
    pub fn closure(carrier: Vec<String>, pairs: &[(String, String)]) -> Result<Self> {
        let n = carrier.len();
        if n == 0 {
            return Err(Error::Semantic("fin carrier must be non-empty".into()));
        }
        for (i, s) in carrier.iter().enumerate() {
            if carrier[..i].contains(s) {
                return Err(Error::Semantic(format!("duplicate fin symbol `{s}`")));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (x, y) in pairs {
            let i = carrier
                .iter()
                .position(|s| s == x)
                .ok_or_else(|| Error::Semantic(format!("unknown fin symbol `{x}`")))?;
            let j = carrier
                .iter()
                .position(|s| s == y)
                .ok_or_else(|| Error::Semantic(format!("unknown fin symbol `{y}`")))?;
            leq[i][j] = true;
        }
        // Floyd-Warshall style transitive closure.
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        Ok(FinType { carrier, leq })
    }

    /// Builds an alphabet from a raw relation table, unchecked. Invariants
    /// are reported by [`validate`], not enforced here.
    pub fn from_table(carrier: Vec<String>, leq: Vec<Vec<bool>>) -> Self {
        FinType { carrier, leq }
    }

    /// Alphabet ordered by equality only.
    pub fn discrete(carrier: &[&str]) -> Self {
        let carrier: Vec<String> = carrier.iter().map(|s| s.to_string()).collect();
        FinType::closure(carrier, &[]).expect("discrete carrier")
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.carrier.iter().position(|s| s == symbol)
    }

    /// `symbol_leq(x, y)` looks the pair up in the table.
    pub fn symbol_leq(&self, x: &str, y: &str) -> Option<bool> {
        let i = self.index_of(x)?;
        let j = self.index_of(y)?;
        Some(self.leq[i][j])
    }

    pub fn leq_by_index(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    /// Indices of the maximal symbols: those q with every q' above them
    /// also below them.
    pub fn maximal_indices(&self) -> Vec<usize> {
        (0..self.carrier.len())
            .filter(|&i| (0..self.carrier.len()).all(|j| !self.leq[i][j] || self.leq[j][i]))
            .collect()
    }

    /// Ordered pairs `(i, j)` with `i != j` and `carrier[i] <= carrier[j]`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.carrier.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.leq[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// A node of the data-type grammar.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeExpr {
    /// Natural numbers with their usual order.
    Nat,
    /// A finite quasi-ordered alphabet.
    Fin(FinType),
    /// Finite product, ordered pointwise.
    Prod(Vec<TypeExpr>),
    /// Finite disjoint sum; elements of different branches are incomparable.
    Sum(Vec<TypeExpr>),
    /// Finite words over the inner type, ordered by embedding.
    Star(Box<TypeExpr>),
    /// Finite multisets over the inner type, ordered by injective domination.
    MSet(Box<TypeExpr>),
}

impl TypeExpr {
    pub fn star(inner: TypeExpr) -> TypeExpr {
        TypeExpr::Star(Box::new(inner))
    }

    pub fn mset(inner: TypeExpr) -> TypeExpr {
        TypeExpr::MSet(Box::new(inner))
    }
}

/// A single invariant violation, locating the offending node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Checks every structural invariant of a type expression and returns the
/// violations found; an empty list means the type is well-formed.
pub fn validate_type(ty: &TypeExpr) -> Vec<Violation> {
    let mut out = Vec::new();
    walk(ty, "root", &mut out);
    out
}

fn walk(ty: &TypeExpr, path: &str, out: &mut Vec<Violation>) {
    match ty {
        TypeExpr::Nat => {}
        TypeExpr::Fin(fin) => {
            let n = fin.carrier.len();
            if n == 0 {
                out.push(Violation {
                    path: path.into(),
                    message: "fin carrier is empty".into(),
                });
                return;
            }
            for (i, s) in fin.carrier.iter().enumerate() {
                if fin.carrier[..i].contains(s) {
                    out.push(Violation {
                        path: path.into(),
                        message: format!("duplicate symbol `{s}` in carrier"),
                    });
                }
            }
            if fin.leq.len() != n || fin.leq.iter().any(|row| row.len() != n) {
                out.push(Violation {
                    path: path.into(),
                    message: "relation table does not match carrier size".into(),
                });
                return;
            }
            for i in 0..n {
                if !fin.leq[i][i] {
                    out.push(Violation {
                        path: path.into(),
                        message: format!("non-reflexive at `{}`", fin.carrier[i]),
                    });
                }
            }
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if fin.leq[i][j] && fin.leq[j][k] && !fin.leq[i][k] {
                            out.push(Violation {
                                path: path.into(),
                                message: format!(
                                    "non-transitive at `{}`,`{}`,`{}`",
                                    fin.carrier[i], fin.carrier[j], fin.carrier[k]
                                ),
                            });
                        }
                    }
                }
            }
        }
        TypeExpr::Prod(parts) | TypeExpr::Sum(parts) => {
            if parts.is_empty() {
                out.push(Violation {
                    path: path.into(),
                    message: "component list is empty".into(),
                });
            }
            for (i, part) in parts.iter().enumerate() {
                walk(part, &format!("{path}.{i}"), out);
            }
        }
        TypeExpr::Star(inner) | TypeExpr::MSet(inner) => {
            walk(inner, &format!("{path}.inner"), out);
        }
    }
}

//! Textual grammar for types, values, ideals and sums of ideals, with
//! canonical printers satisfying `parse(print(x)) = x`.
//!
//! Types: `nat`, `fin{a,b | a<b}` (omitted pairs incomparable, reflexivity
//! implicit, transitive closure applied), `(T1 * T2)`, `(T1 + T2)`, postfix
//! `*` for words and `@` for multisets. A parenthesized single type `(T)` is
//! a one-component product.
//!
//! Values: naturals `3`, bare symbols, tuples `(v1, v2)`, sums `#1:v`
//! (1-based branch), words `"a b c"` with `""` for the empty word, multisets
//! `[| v1, v2 |]` with `[||]` for the empty bag.
//!
//! Ideals: `3` or `w` over naturals, bare symbols, `(I1, I2)`, `#1:I`, word
//! products as space-separated atoms `C?` / `{C1,C2}*` with `eps` for the
//! empty product, and multiset products `{C1,C2}@ <D1? D2?>` with `{}@ <>`
//! for the empty one. Sums of ideals are joined by `+`; `empty` denotes the
//! empty sum. Parsing is directed by the declared type.

use crate::error::{Error, Result};
use crate::ideal::{Atom, Ideal, MSetIdeal, NatIdeal};
use crate::types::{FinType, TypeExpr};
use crate::value::Value;

// ---------------------------------------------------------------------------
// cursor

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Cursor {
    fn new(text: &str) -> Cursor {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn eat(&mut self, expected: char) -> bool {
        if self.peek() == Some(expected) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, expected: char) -> Result<()> {
        if self.eat(expected) {
            Ok(())
        } else {
            Err(self.error(format!(
                "expected `{expected}`, found {}",
                describe(self.peek())
            )))
        }
    }

    fn is_done(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(c) if c.is_alphabetic() || c == '_' => {}
            other => return Err(self.error(format!("expected identifier, found {}", describe(other)))),
        }
        let mut out = String::new();
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
            out.push(self.bump().unwrap());
        }
        Ok(out)
    }

    fn number(&mut self) -> Result<u64> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {}
            other => return Err(self.error(format!("expected number, found {}", describe(other)))),
        }
        let mut out = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            out.push(self.bump().unwrap());
        }
        out.parse::<u64>().map_err(|_| self.error("number out of range"))
    }

    /// Reads a quoted string, honoring `\"` and `\\` escapes, returning the
    /// unescaped content.
    fn quoted(&mut self) -> Result<String> {
        self.expect('"')?;
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated string")),
                Some('"') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some('"') => out.push('"'),
                    Some('\\') => out.push('\\'),
                    other => {
                        return Err(self.error(format!("bad escape {}", describe(other))))
                    }
                },
                Some(c) => out.push(c),
            }
        }
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.is_done() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected trailing {}", describe(self.peek()))))
        }
    }
}

fn describe(c: Option<char>) -> String {
    match c {
        Some(c) => format!("`{c}`"),
        None => "end of input".to_string(),
    }
}

// ---------------------------------------------------------------------------
// types

pub fn parse_type(text: &str) -> Result<TypeExpr> {
    let mut cursor = Cursor::new(text);
    let ty = type_expr(&mut cursor)?;
    cursor.finish()?;
    Ok(ty)
}

fn type_expr(cursor: &mut Cursor) -> Result<TypeExpr> {
    let mut ty = type_primary(cursor)?;
    // postfix `*` / `@`; a `*` whose next token begins a type is the product
    // separator instead, handled by the caller
    loop {
        cursor.skip_ws();
        match cursor.peek() {
            Some('*') if !separates_types(cursor) => {
                cursor.bump();
                ty = TypeExpr::star(ty);
            }
            Some('@') => {
                cursor.bump();
                ty = TypeExpr::mset(ty);
            }
            _ => return Ok(ty),
        }
    }
}

/// True when the `*` at the cursor is followed (ignoring whitespace) by the
/// start of a type, i.e. acts as a product separator.
fn separates_types(cursor: &Cursor) -> bool {
    let mut offset = 1;
    loop {
        match cursor.peek_at(offset) {
            Some(c) if c.is_whitespace() => offset += 1,
            Some(c) => return c.is_alphabetic() || c == '(',
            None => return false,
        }
    }
}

fn type_primary(cursor: &mut Cursor) -> Result<TypeExpr> {
    cursor.skip_ws();
    match cursor.peek() {
        Some('(') => {
            cursor.bump();
            let first = type_expr(cursor)?;
            cursor.skip_ws();
            match cursor.peek() {
                Some(')') => {
                    cursor.bump();
                    Ok(TypeExpr::Prod(vec![first]))
                }
                Some(sep @ ('*' | '+')) => {
                    let mut parts = vec![first];
                    while cursor.eat(sep) {
                        parts.push(type_expr(cursor)?);
                        cursor.skip_ws();
                    }
                    cursor.expect(')')?;
                    Ok(match sep {
                        '*' => TypeExpr::Prod(parts),
                        _ => TypeExpr::Sum(parts),
                    })
                }
                other => Err(cursor.error(format!(
                    "expected `*`, `+` or `)`, found {}",
                    describe(other)
                ))),
            }
        }
        _ => {
            let word = cursor.ident()?;
            match word.as_str() {
                "nat" => Ok(TypeExpr::Nat),
                "fin" => fin_body(cursor),
                other => Err(cursor.error(format!("unknown type `{other}`"))),
            }
        }
    }
}

fn fin_body(cursor: &mut Cursor) -> Result<TypeExpr> {
    cursor.skip_ws();
    cursor.expect('{')?;
    let mut carrier = Vec::new();
    loop {
        cursor.skip_ws();
        carrier.push(cursor.ident()?);
        cursor.skip_ws();
        if !cursor.eat(',') {
            break;
        }
    }
    let mut pairs = Vec::new();
    cursor.skip_ws();
    if cursor.eat('|') {
        loop {
            cursor.skip_ws();
            let low = cursor.ident()?;
            cursor.skip_ws();
            cursor.expect('<')?;
            cursor.skip_ws();
            let high = cursor.ident()?;
            pairs.push((low, high));
            cursor.skip_ws();
            if !cursor.eat(',') {
                break;
            }
        }
    }
    cursor.skip_ws();
    cursor.expect('}')?;
    let fin = FinType::closure(carrier, &pairs).map_err(|e| match e {
        Error::Semantic(msg) => cursor.error(msg),
        other => other,
    })?;
    Ok(TypeExpr::Fin(fin))
}

pub fn print_type(ty: &TypeExpr) -> String {
    match ty {
        TypeExpr::Nat => "nat".to_string(),
        TypeExpr::Fin(fin) => {
            let carrier = fin.carrier().join(",");
            let pairs: Vec<String> = fin
                .strict_pairs()
                .into_iter()
                .map(|(i, j)| format!("{}<{}", fin.carrier()[i], fin.carrier()[j]))
                .collect();
            if pairs.is_empty() {
                format!("fin{{{carrier}}}")
            } else {
                format!("fin{{{carrier} | {}}}", pairs.join(", "))
            }
        }
        TypeExpr::Prod(parts) => {
            let inner: Vec<String> = parts.iter().map(print_type).collect();
            format!("({})", inner.join(" * "))
        }
        TypeExpr::Sum(parts) => {
            let inner: Vec<String> = parts.iter().map(print_type).collect();
            format!("({})", inner.join(" + "))
        }
        TypeExpr::Star(inner) => format!("{}*", print_type(inner)),
        TypeExpr::MSet(inner) => format!("{}@", print_type(inner)),
    }
}

// ---------------------------------------------------------------------------
// values

pub fn parse_value(ty: &TypeExpr, text: &str) -> Result<Value> {
    let mut cursor = Cursor::new(text);
    let v = value_expr(&mut cursor, ty)?;
    cursor.finish()?;
    Ok(v)
}

fn value_expr(cursor: &mut Cursor, ty: &TypeExpr) -> Result<Value> {
    cursor.skip_ws();
    match ty {
        TypeExpr::Nat => Ok(Value::Nat(cursor.number()?)),
        TypeExpr::Fin(fin) => {
            let symbol = cursor.ident()?;
            if fin.index_of(&symbol).is_none() {
                return Err(cursor.error(format!("symbol `{symbol}` not in carrier")));
            }
            Ok(Value::Fin(symbol))
        }
        TypeExpr::Prod(parts) => {
            if cursor.peek() != Some('(') {
                // bare component form, accepted for one-component products
                if parts.len() == 1 {
                    let inner = value_expr(cursor, &parts[0])?;
                    return Ok(Value::Tuple(vec![inner]));
                }
                return Err(cursor.error("expected `(`"));
            }
            cursor.bump();
            let mut items = Vec::new();
            for (i, part) in parts.iter().enumerate() {
                if i > 0 {
                    cursor.skip_ws();
                    cursor.expect(',')?;
                }
                items.push(value_expr(cursor, part)?);
            }
            cursor.skip_ws();
            cursor.expect(')')?;
            Ok(Value::Tuple(items))
        }
        TypeExpr::Sum(branches) => {
            cursor.expect('#')?;
            let k = cursor.number()? as usize;
            if k == 0 || k > branches.len() {
                return Err(cursor.error(format!("branch #{k} out of range")));
            }
            cursor.expect(':')?;
            let inner = value_expr(cursor, &branches[k - 1])?;
            Ok(Value::tag(k - 1, inner))
        }
        TypeExpr::Star(inner) => {
            let (line, col) = (cursor.line, cursor.col);
            let content = cursor.quoted()?;
            let mut word_cursor = Cursor::new(&content);
            let mut letters = Vec::new();
            loop {
                word_cursor.skip_ws();
                if word_cursor.is_done() {
                    break;
                }
                letters.push(value_expr(&mut word_cursor, inner).map_err(|e| match e {
                    Error::Parse { message, .. } => Error::Parse {
                        line,
                        col,
                        message: format!("in word literal: {message}"),
                    },
                    other => other,
                })?);
            }
            Ok(Value::Word(letters))
        }
        TypeExpr::MSet(inner) => {
            cursor.expect('[')?;
            cursor.expect('|')?;
            cursor.skip_ws();
            if cursor.eat('|') {
                cursor.expect(']')?;
                return Ok(Value::mset(Vec::new()));
            }
            let mut items = vec![value_expr(cursor, inner)?];
            loop {
                cursor.skip_ws();
                if cursor.eat(',') {
                    items.push(value_expr(cursor, inner)?);
                } else {
                    break;
                }
            }
            cursor.expect('|')?;
            cursor.expect(']')?;
            Ok(Value::mset(items))
        }
    }
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn print_value(value: &Value) -> String {
    match value {
        Value::Nat(n) => n.to_string(),
        Value::Fin(symbol) => symbol.clone(),
        Value::Tuple(items) => {
            let inner: Vec<String> = items.iter().map(print_value).collect();
            format!("({})", inner.join(", "))
        }
        Value::Tag(branch, inner) => format!("#{}:{}", branch + 1, print_value(inner)),
        Value::Word(letters) => {
            let inner: Vec<String> = letters.iter().map(print_value).collect();
            format!("\"{}\"", escape(&inner.join(" ")))
        }
        Value::MSet(bag) => {
            if bag.is_empty() {
                "[||]".to_string()
            } else {
                let inner: Vec<String> = bag.items().iter().map(print_value).collect();
                format!("[| {} |]", inner.join(", "))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// ideals

pub fn parse_ideal(ty: &TypeExpr, text: &str) -> Result<Ideal> {
    let mut cursor = Cursor::new(text);
    let ideal = ideal_expr(&mut cursor, ty)?;
    cursor.finish()?;
    Ok(ideal)
}

/// Characters that end a word product in every context it can appear in.
fn at_terminator(cursor: &Cursor) -> bool {
    matches!(cursor.peek(), None | Some(')' | '}' | ',' | '+' | '>' | '|'))
}

fn ideal_expr(cursor: &mut Cursor, ty: &TypeExpr) -> Result<Ideal> {
    cursor.skip_ws();
    match ty {
        TypeExpr::Nat => {
            if matches!(cursor.peek(), Some(c) if c.is_ascii_digit()) {
                Ok(Ideal::nat(cursor.number()?))
            } else {
                let word = cursor.ident()?;
                if word == "w" {
                    Ok(Ideal::omega())
                } else {
                    Err(cursor.error(format!("expected number or `w`, found `{word}`")))
                }
            }
        }
        TypeExpr::Fin(fin) => {
            let symbol = cursor.ident()?;
            if fin.index_of(&symbol).is_none() {
                return Err(cursor.error(format!("symbol `{symbol}` not in carrier")));
            }
            Ok(Ideal::Fin(symbol))
        }
        TypeExpr::Prod(parts) => {
            if cursor.peek() != Some('(') {
                if parts.len() == 1 {
                    let inner = ideal_expr(cursor, &parts[0])?;
                    return Ok(Ideal::Tuple(vec![inner]));
                }
                return Err(cursor.error("expected `(`"));
            }
            cursor.bump();
            let mut items = Vec::new();
            for (i, part) in parts.iter().enumerate() {
                if i > 0 {
                    cursor.skip_ws();
                    cursor.expect(',')?;
                }
                items.push(ideal_expr(cursor, part)?);
            }
            cursor.skip_ws();
            cursor.expect(')')?;
            Ok(Ideal::Tuple(items))
        }
        TypeExpr::Sum(branches) => {
            cursor.expect('#')?;
            let k = cursor.number()? as usize;
            if k == 0 || k > branches.len() {
                return Err(cursor.error(format!("branch #{k} out of range")));
            }
            cursor.expect(':')?;
            // word and multiset payloads are printed parenthesized, since
            // nothing else delimits them after the `:`
            let inner = grouped_ideal(cursor, &branches[k - 1])?;
            Ok(Ideal::tag(k - 1, inner))
        }
        TypeExpr::Star(inner) => word_product(cursor, inner),
        TypeExpr::MSet(inner) => mset_product(cursor, inner),
    }
}

/// Parses an ideal in a position followed by more input (an atom's `?`, a
/// sum payload): parentheses group word and multiset ideals whose own
/// syntax would not stop there.
fn grouped_ideal(cursor: &mut Cursor, inner: &TypeExpr) -> Result<Ideal> {
    cursor.skip_ws();
    if cursor.peek() == Some('(') && matches!(inner, TypeExpr::Star(_) | TypeExpr::MSet(_)) {
        cursor.bump();
        let ideal = ideal_expr(cursor, inner)?;
        cursor.skip_ws();
        cursor.expect(')')?;
        Ok(ideal)
    } else {
        ideal_expr(cursor, inner)
    }
}

fn word_product(cursor: &mut Cursor, inner: &TypeExpr) -> Result<Ideal> {
    cursor.skip_ws();
    // `eps` alone denotes the empty product, unless it reads as an atom
    if matches!(cursor.peek(), Some(c) if c.is_alphabetic()) {
        let saved = (cursor.pos, cursor.line, cursor.col);
        let word = cursor.ident()?;
        cursor.skip_ws();
        if word == "eps" && at_terminator(cursor) {
            return Ok(Ideal::Word(Vec::new()));
        }
        (cursor.pos, cursor.line, cursor.col) = saved;
    }
    let mut atoms = Vec::new();
    loop {
        cursor.skip_ws();
        if at_terminator(cursor) {
            break;
        }
        atoms.push(word_atom(cursor, inner)?);
    }
    if atoms.is_empty() {
        return Err(cursor.error("expected a word product (use `eps` for the empty product)"));
    }
    Ok(Ideal::Word(atoms))
}

fn word_atom(cursor: &mut Cursor, inner: &TypeExpr) -> Result<Atom> {
    cursor.skip_ws();
    if cursor.peek() == Some('{') {
        cursor.bump();
        let mut members = Vec::new();
        loop {
            cursor.skip_ws();
            members.push(ideal_expr(cursor, inner)?);
            cursor.skip_ws();
            if !cursor.eat(',') {
                break;
            }
        }
        cursor.skip_ws();
        cursor.expect('}')?;
        cursor.expect('*')?;
        Ok(Atom::Star(members))
    } else {
        let ideal = grouped_ideal(cursor, inner)?;
        cursor.skip_ws();
        cursor.expect('?')?;
        Ok(Atom::Opt(ideal))
    }
}

fn mset_product(cursor: &mut Cursor, inner: &TypeExpr) -> Result<Ideal> {
    cursor.skip_ws();
    cursor.expect('{')?;
    cursor.skip_ws();
    let mut star = Vec::new();
    if !cursor.eat('}') {
        loop {
            cursor.skip_ws();
            star.push(ideal_expr(cursor, inner)?);
            cursor.skip_ws();
            if !cursor.eat(',') {
                break;
            }
        }
        cursor.skip_ws();
        cursor.expect('}')?;
    }
    cursor.expect('@')?;
    cursor.skip_ws();
    cursor.expect('<')?;
    let mut singles = Vec::new();
    loop {
        cursor.skip_ws();
        if cursor.eat('>') {
            break;
        }
        let ideal = grouped_ideal(cursor, inner)?;
        cursor.skip_ws();
        cursor.expect('?')?;
        singles.push(ideal);
    }
    Ok(Ideal::MSet(MSetIdeal { star, singles }))
}

/// Wraps word and multiset products in parentheses where an atom's `?`
/// follows.
fn print_ideal_grouped(ideal: &Ideal) -> String {
    match ideal {
        Ideal::Word(_) | Ideal::MSet(_) => format!("({})", print_ideal(ideal)),
        other => print_ideal(other),
    }
}

pub fn print_ideal(ideal: &Ideal) -> String {
    match ideal {
        Ideal::Nat(NatIdeal::Fin(n)) => n.to_string(),
        Ideal::Nat(NatIdeal::Omega) => "w".to_string(),
        Ideal::Fin(symbol) => symbol.clone(),
        Ideal::Tuple(items) => {
            let inner: Vec<String> = items.iter().map(print_ideal).collect();
            format!("({})", inner.join(", "))
        }
        Ideal::Tag(branch, inner) => {
            format!("#{}:{}", branch + 1, print_ideal_grouped(inner))
        }
        Ideal::Word(atoms) => {
            if atoms.is_empty() {
                return "eps".to_string();
            }
            let printed: Vec<String> = atoms
                .iter()
                .map(|atom| match atom {
                    Atom::Opt(c) => format!("{}?", print_ideal_grouped(c)),
                    Atom::Star(members) => {
                        let inner: Vec<String> = members.iter().map(print_ideal).collect();
                        format!("{{{}}}*", inner.join(","))
                    }
                })
                .collect();
            printed.join(" ")
        }
        Ideal::MSet(m) => {
            let star: Vec<String> = m.star.iter().map(print_ideal).collect();
            let singles: Vec<String> = m
                .singles
                .iter()
                .map(|c| format!("{}?", print_ideal_grouped(c)))
                .collect();
            format!("{{{}}}@ <{}>", star.join(","), singles.join(" "))
        }
    }
}

// ---------------------------------------------------------------------------
// sums of ideals

/// Parses a sum of products over `ty`; `empty` denotes the empty sum.
pub fn parse_sre(ty: &TypeExpr, text: &str) -> Result<Vec<Ideal>> {
    let mut cursor = Cursor::new(text);
    cursor.skip_ws();
    if matches!(cursor.peek(), Some(c) if c.is_alphabetic()) {
        let saved = (cursor.pos, cursor.line, cursor.col);
        let word = cursor.ident().unwrap_or_default();
        cursor.skip_ws();
        if word == "empty" && cursor.is_done() {
            return Ok(Vec::new());
        }
        (cursor.pos, cursor.line, cursor.col) = saved;
    }
    let mut ideals = vec![ideal_expr(&mut cursor, ty)?];
    loop {
        cursor.skip_ws();
        if cursor.eat('+') {
            ideals.push(ideal_expr(&mut cursor, ty)?);
        } else {
            break;
        }
    }
    cursor.finish()?;
    Ok(ideals)
}

pub fn print_sre(ideals: &[Ideal]) -> String {
    if ideals.is_empty() {
        return "empty".to_string();
    }
    let printed: Vec<String> = ideals.iter().map(print_ideal).collect();
    printed.join(" + ")
}

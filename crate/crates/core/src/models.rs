//! Concrete system instances: Petri nets over `(nat * ... * nat)` markings
//! and single-channel functional-lossy channel systems over words, with
//! their concrete steps, lifted steps and acceleration widenings, plus the
//! line-oriented model file parser.

use std::sync::Arc;

use crate::engine::{Model, Transition, Widening};
use crate::error::{Error, Result};
use crate::ideal::{Atom, Ideal, NatIdeal};
use crate::types::{FinType, TypeExpr};
use crate::value::Value;

// ---------------------------------------------------------------------------
// Petri nets

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PetriTransition {
    pub name: String,
    pub pre: Vec<u64>,
    pub post: Vec<u64>,
}

/// A place/transition net. Transitions are (pre, post) vector pairs; the
/// pure effect-vector form is the special case pre = max(0, -d),
/// post = max(0, d).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PetriNet {
    places: usize,
    transitions: Vec<PetriTransition>,
}

impl PetriNet {
    pub fn new(places: usize, transitions: Vec<PetriTransition>) -> Result<PetriNet> {
        if places == 0 {
            return Err(Error::Semantic("a net needs at least one place".into()));
        }
        for t in &transitions {
            if t.pre.len() != places || t.post.len() != places {
                return Err(Error::Semantic(format!(
                    "transition `{}` has wrong arity (expected {places} places)",
                    t.name
                )));
            }
        }
        for (i, t) in transitions.iter().enumerate() {
            if transitions[..i].iter().any(|u| u.name == t.name) {
                return Err(Error::Semantic(format!(
                    "duplicate transition name `{}`",
                    t.name
                )));
            }
        }
        Ok(PetriNet { places, transitions })
    }

    pub fn places(&self) -> usize {
        self.places
    }

    pub fn transitions(&self) -> &[PetriTransition] {
        &self.transitions
    }

    /// Markings live in a product of naturals.
    pub fn state_type(&self) -> TypeExpr {
        TypeExpr::Prod(vec![TypeExpr::Nat; self.places])
    }

    /// Fires transition `t` at `m`: defined iff `m >= pre` pointwise.
    pub fn step(&self, m: &[u64], t: usize) -> Result<Option<Vec<u64>>> {
        let transition = self
            .transitions
            .get(t)
            .ok_or_else(|| Error::Semantic(format!("transition index {t} out of range")))?;
        if m.len() != self.places {
            return Err(Error::Dimension(format!(
                "marking length {} differs from {} places",
                m.len(),
                self.places
            )));
        }
        if m.iter().zip(&transition.pre).any(|(have, need)| have < need) {
            return Ok(None);
        }
        Ok(Some(
            m.iter()
                .zip(&transition.pre)
                .zip(&transition.post)
                .map(|((have, pre), post)| have - pre + post)
                .collect(),
        ))
    }

    /// Fires transition `t` on an omega-marking: finite coordinates must
    /// satisfy the guard, omega coordinates always do and absorb arithmetic.
    pub fn lift(&self, t: usize, ideal_: &Ideal) -> Result<Option<Ideal>> {
        let transition = self
            .transitions
            .get(t)
            .ok_or_else(|| Error::Semantic(format!("transition index {t} out of range")))?;
        let coords = self.ideal_coords(ideal_)?;
        for (coord, pre) in coords.iter().zip(&transition.pre) {
            if let NatIdeal::Fin(n) = coord {
                if n < pre {
                    return Ok(None);
                }
            }
        }
        let result: Vec<Ideal> = coords
            .iter()
            .zip(&transition.pre)
            .zip(&transition.post)
            .map(|((coord, pre), post)| match coord {
                NatIdeal::Omega => Ideal::omega(),
                NatIdeal::Fin(n) => Ideal::nat(n - pre + post),
            })
            .collect();
        Ok(Some(Ideal::Tuple(result)))
    }

    pub fn marking_value(&self, m: &[u64]) -> Value {
        Value::Tuple(m.iter().map(|&n| Value::Nat(n)).collect())
    }

    pub fn value_marking(&self, v: &Value) -> Result<Vec<u64>> {
        match v {
            Value::Tuple(items) if items.len() == self.places => items
                .iter()
                .map(|item| match item {
                    Value::Nat(n) => Ok(*n),
                    _ => Err(Error::shape("marking", "expected a natural coordinate")),
                })
                .collect(),
            _ => Err(Error::shape(
                "marking",
                format!("expected a {}-tuple of naturals", self.places),
            )),
        }
    }

    fn ideal_coords(&self, ideal_: &Ideal) -> Result<Vec<NatIdeal>> {
        match ideal_ {
            Ideal::Tuple(items) if items.len() == self.places => items
                .iter()
                .map(|item| match item {
                    Ideal::Nat(c) => Ok(*c),
                    _ => Err(Error::shape("marking ideal", "expected a nat coordinate")),
                })
                .collect(),
            _ => Err(Error::shape(
                "marking ideal",
                format!("expected a {}-tuple of nat ideals", self.places),
            )),
        }
    }

    /// Wraps the net as a generic model with the omega widening.
    pub fn to_model(&self) -> Model {
        let transitions: Vec<Arc<dyn Transition>> = (0..self.transitions.len())
            .map(|t| {
                Arc::new(PetriAdapter {
                    net: self.clone(),
                    index: t,
                }) as Arc<dyn Transition>
            })
            .collect();
        Model::new(
            self.state_type(),
            transitions,
            Some(Arc::new(OmegaWidening)),
        )
    }
}

struct PetriAdapter {
    net: PetriNet,
    index: usize,
}

impl Transition for PetriAdapter {
    fn name(&self) -> &str {
        &self.net.transitions[self.index].name
    }

    fn apply(&self, v: &Value) -> Result<Option<Value>> {
        let m = self.net.value_marking(v)?;
        Ok(self
            .net
            .step(&m, self.index)?
            .map(|next| self.net.marking_value(&next)))
    }

    fn apply_ideal(&self, ideal_: &Ideal) -> Result<Option<Ideal>> {
        self.net.lift(self.index, ideal_)
    }
}

/// Omega widening for markings: every strictly increased coordinate of a
/// strictly increasing composite goes to omega. This is the exact least
/// upper bound of the iterated chain, because a composite defined along the
/// chain adds a constant effect vector each turn.
struct OmegaWidening;

impl Widening for OmegaWidening {
    fn widen(&self, before: &Ideal, after: &Ideal) -> Option<Ideal> {
        let (Ideal::Tuple(xs), Ideal::Tuple(ys)) = (before, after) else {
            return None;
        };
        if xs.len() != ys.len() {
            return None;
        }
        let widened: Option<Vec<Ideal>> = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| match (x, y) {
                (Ideal::Nat(NatIdeal::Fin(n)), Ideal::Nat(NatIdeal::Fin(m))) => {
                    Some(if m > n { Ideal::omega() } else { Ideal::nat(*m) })
                }
                (Ideal::Nat(_), Ideal::Nat(c)) => Some(Ideal::Nat(*c)),
                _ => None,
            })
            .collect();
        widened.map(Ideal::Tuple)
    }
}

// ---------------------------------------------------------------------------
// functional-lossy channel systems

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlcsAction {
    Send(String),
    Recv(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlcsTransition {
    pub name: String,
    pub action: FlcsAction,
}

/// A single-channel functional-lossy channel system: receives drop exactly
/// the prefix up to the first occurrence of the expected letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flcs {
    alphabet: Vec<String>,
    transitions: Vec<FlcsTransition>,
}

impl Flcs {
    pub fn new(alphabet: Vec<String>, transitions: Vec<FlcsTransition>) -> Result<Flcs> {
        if alphabet.is_empty() {
            return Err(Error::Semantic("alphabet must be non-empty".into()));
        }
        for (i, a) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(a) {
                return Err(Error::Semantic(format!("duplicate letter `{a}`")));
            }
        }
        for t in &transitions {
            let letter = match &t.action {
                FlcsAction::Send(a) | FlcsAction::Recv(a) => a,
            };
            if !alphabet.contains(letter) {
                return Err(Error::Semantic(format!(
                    "transition `{}` uses undeclared letter `{letter}`",
                    t.name
                )));
            }
        }
        for (i, t) in transitions.iter().enumerate() {
            if transitions[..i].iter().any(|u| u.name == t.name) {
                return Err(Error::Semantic(format!(
                    "duplicate transition name `{}`",
                    t.name
                )));
            }
        }
        Ok(Flcs { alphabet, transitions })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn transitions(&self) -> &[FlcsTransition] {
        &self.transitions
    }

    /// Channel contents live in words over the discrete alphabet.
    pub fn state_type(&self) -> TypeExpr {
        let carrier: Vec<&str> = self.alphabet.iter().map(String::as_str).collect();
        TypeExpr::star(TypeExpr::Fin(FinType::discrete(&carrier)))
    }

    /// Concrete step: send appends; receive drops through the first
    /// occurrence of the letter and is undefined when the letter is absent.
    pub fn step(&self, w: &[String], t: usize) -> Result<Option<Vec<String>>> {
        let transition = self
            .transitions
            .get(t)
            .ok_or_else(|| Error::Semantic(format!("transition index {t} out of range")))?;
        for letter in w {
            if !self.alphabet.contains(letter) {
                return Err(Error::Semantic(format!("letter `{letter}` outside alphabet")));
            }
        }
        Ok(match &transition.action {
            FlcsAction::Send(a) => {
                let mut next = w.to_vec();
                next.push(a.clone());
                Some(next)
            }
            FlcsAction::Recv(a) => w
                .iter()
                .position(|letter| letter == a)
                .map(|i| w[i + 1..].to_vec()),
        })
    }

    /// Lifted step on word products, canonicalized.
    pub fn lift(&self, t: usize, product: &Ideal) -> Result<Option<Ideal>> {
        let transition = self
            .transitions
            .get(t)
            .ok_or_else(|| Error::Semantic(format!("transition index {t} out of range")))?;
        let Ideal::Word(atoms) = product else {
            return Err(Error::shape("channel ideal", "expected a word product"));
        };
        let lifted = match &transition.action {
            FlcsAction::Send(a) => {
                let mut next = atoms.clone();
                next.push(Atom::Opt(Ideal::fin(a.clone())));
                Some(next)
            }
            FlcsAction::Recv(a) => recv_lift(a, atoms),
        };
        Ok(lifted.map(|atoms| crate::ideal::canon(&self.state_type(), Ideal::Word(atoms))))
    }

    pub fn word_value(&self, w: &[String]) -> Value {
        Value::Word(w.iter().map(|a| Value::fin(a.clone())).collect())
    }

    pub fn value_word(&self, v: &Value) -> Result<Vec<String>> {
        match v {
            Value::Word(letters) => letters
                .iter()
                .map(|letter| match letter {
                    Value::Fin(a) => Ok(a.clone()),
                    _ => Err(Error::shape("channel word", "expected a letter")),
                })
                .collect(),
            _ => Err(Error::shape("channel word", "expected a word value")),
        }
    }

    /// Wraps the system as a generic model with the append-star widening.
    pub fn to_model(&self) -> Model {
        let transitions: Vec<Arc<dyn Transition>> = (0..self.transitions.len())
            .map(|t| {
                Arc::new(FlcsAdapter {
                    sys: self.clone(),
                    index: t,
                }) as Arc<dyn Transition>
            })
            .collect();
        Model::new(
            self.state_type(),
            transitions,
            Some(Arc::new(AppendStarWidening)),
        )
    }
}

/// Receive on a word product, recursing on the first atom: an optional atom
/// for another letter is dropped, an optional atom for the expected letter
/// is consumed, a star without the letter is dropped, and a star containing
/// it leaves the product unchanged. Undefined on the empty product.
fn recv_lift(letter: &str, atoms: &[Atom]) -> Option<Vec<Atom>> {
    let first = atoms.first()?;
    match first {
        Atom::Opt(Ideal::Fin(sym)) if sym == letter => Some(atoms[1..].to_vec()),
        Atom::Opt(_) => recv_lift(letter, &atoms[1..]),
        Atom::Star(members) => {
            let has_letter = members
                .iter()
                .any(|m| matches!(m, Ideal::Fin(sym) if sym == letter));
            if has_letter {
                Some(atoms.to_vec())
            } else {
                recv_lift(letter, &atoms[1..])
            }
        }
    }
}

struct FlcsAdapter {
    sys: Flcs,
    index: usize,
}

impl Transition for FlcsAdapter {
    fn name(&self) -> &str {
        &self.sys.transitions[self.index].name
    }

    fn apply(&self, v: &Value) -> Result<Option<Value>> {
        let w = self.sys.value_word(v)?;
        Ok(self
            .sys
            .step(&w, self.index)?
            .map(|next| self.sys.word_value(&next)))
    }

    fn apply_ideal(&self, ideal_: &Ideal) -> Result<Option<Ideal>> {
        self.sys.lift(self.index, ideal_)
    }
}

/// Append-star widening for channel products: when a strictly increasing
/// composite appends atoms `e1..em` after an unchanged prefix, the least
/// upper bound of the iterated chain appends a star over the base ideals
/// occurring in `e1..em`. Other increasing shapes are left to the bounded
/// iteration fallback.
struct AppendStarWidening;

impl Widening for AppendStarWidening {
    fn widen(&self, before: &Ideal, after: &Ideal) -> Option<Ideal> {
        let (Ideal::Word(xs), Ideal::Word(ys)) = (before, after) else {
            return None;
        };
        if ys.len() <= xs.len() || ys[..xs.len()] != xs[..] {
            return None;
        }
        let mut bases = Vec::new();
        for atom in &ys[xs.len()..] {
            match atom {
                Atom::Opt(c) => bases.push(c.clone()),
                Atom::Star(members) => bases.extend(members.iter().cloned()),
            }
        }
        let mut widened = xs.clone();
        widened.push(Atom::Star(bases));
        Some(Ideal::Word(widened))
    }
}

// ---------------------------------------------------------------------------
// model files

/// A parsed model file: either kind wraps into a generic [`Model`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedModel {
    Petri(PetriNet),
    Flcs(Flcs),
}

impl ParsedModel {
    pub fn to_model(&self) -> Model {
        match self {
            ParsedModel::Petri(net) => net.to_model(),
            ParsedModel::Flcs(sys) => sys.to_model(),
        }
    }

    pub fn state_type(&self) -> TypeExpr {
        match self {
            ParsedModel::Petri(net) => net.state_type(),
            ParsedModel::Flcs(sys) => sys.state_type(),
        }
    }

    pub fn as_petri(&self) -> Option<&PetriNet> {
        match self {
            ParsedModel::Petri(net) => Some(net),
            ParsedModel::Flcs(_) => None,
        }
    }
}

/// Parses the line-oriented model format. `#` starts a comment; the first
/// significant line is a `petri places=K` or `flcs alphabet={..}` header;
/// each following line declares one transition.
pub fn parse_model(text: &str) -> Result<ParsedModel> {
    let mut lines = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if !content.trim().is_empty() {
            lines.push((index + 1, content));
        }
    }
    let Some(&(header_line, header)) = lines.first() else {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            message: "empty model file".into(),
        });
    };
    let mut header_cursor = LineCursor::new(header, header_line);
    let kind = header_cursor.ident()?;
    match kind.as_str() {
        "petri" => {
            header_cursor.key("places")?;
            let places = header_cursor.number()? as usize;
            header_cursor.finish()?;
            let mut transitions = Vec::new();
            for &(line, content) in &lines[1..] {
                let mut cursor = LineCursor::new(content, line);
                cursor.keyword("trans")?;
                let name = cursor.ident()?;
                cursor.key("pre")?;
                let pre = cursor.vector()?;
                cursor.key("post")?;
                let post = cursor.vector()?;
                cursor.finish()?;
                transitions.push(PetriTransition { name, pre, post });
            }
            PetriNet::new(places, transitions).map(ParsedModel::Petri)
        }
        "flcs" => {
            header_cursor.key("alphabet")?;
            let alphabet = header_cursor.symbol_set()?;
            header_cursor.finish()?;
            let mut transitions = Vec::new();
            for &(line, content) in &lines[1..] {
                let mut cursor = LineCursor::new(content, line);
                cursor.keyword("trans")?;
                let name = cursor.ident()?;
                let verb = cursor.ident()?;
                let letter = cursor.ident()?;
                cursor.finish()?;
                let action = match verb.as_str() {
                    "send" => FlcsAction::Send(letter),
                    "recv" => FlcsAction::Recv(letter),
                    other => {
                        return Err(Error::Parse {
                            line,
                            col: 1,
                            message: format!("expected `send` or `recv`, found `{other}`"),
                        })
                    }
                };
                transitions.push(FlcsTransition { name, action });
            }
            Flcs::new(alphabet, transitions).map(ParsedModel::Flcs)
        }
        other => Err(Error::Parse {
            line: header_line,
            col: 1,
            message: format!("expected `petri` or `flcs` header, found `{other}`"),
        }),
    }
}

/// Minimal cursor over one model-file line.
struct LineCursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl LineCursor {
    fn new(content: &str, line: usize) -> LineCursor {
        LineCursor {
            chars: content.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.get(self.pos), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, expected: char) -> Result<()> {
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&expected) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{expected}`")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.chars.get(self.pos), Some(c) if c.is_alphanumeric() || *c == '_') {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected identifier"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn keyword(&mut self, expected: &str) -> Result<()> {
        let word = self.ident()?;
        if word == expected {
            Ok(())
        } else {
            Err(self.error(format!("expected `{expected}`, found `{word}`")))
        }
    }

    fn key(&mut self, name: &str) -> Result<()> {
        self.keyword(name)?;
        self.expect('=')
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.chars.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected number"));
        }
        self.chars[start..self.pos]
            .iter()
            .collect::<String>()
            .parse()
            .map_err(|_| self.error("number out of range"))
    }

    fn vector(&mut self) -> Result<Vec<u64>> {
        self.expect('(')?;
        let mut out = vec![self.number()?];
        loop {
            self.skip_ws();
            if self.chars.get(self.pos) == Some(&',') {
                self.pos += 1;
                out.push(self.number()?);
            } else {
                break;
            }
        }
        self.expect(')')?;
        Ok(out)
    }

    fn symbol_set(&mut self) -> Result<Vec<String>> {
        self.expect('{')?;
        let mut out = vec![self.ident()?];
        loop {
            self.skip_ws();
            if self.chars.get(self.pos) == Some(&',') {
                self.pos += 1;
                out.push(self.ident()?);
            } else {
                break;
            }
        }
        self.expect('}')?;
        Ok(out)
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos >= self.chars.len() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing content"))
        }
    }
}

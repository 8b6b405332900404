//! The text file format for DGLAs, Artinian cdgas, bigraded algebras,
//! complexes, extensions and elements, with a JSON mirror.
//!
//! ```text
//! # comment
//! [meta]
//! kind = dgla            # dgla | artin | bigraded | complex | extension | element
//! name = Lobs
//! [space]
//! u 1                    # label and degree(s)
//! v 2
//! [differential]
//! u -> 0                 # d(label) = linear combination
//! [bracket]
//! u, u -> 2*v            # [u, u] = 2 v
//! ```
//!
//! Degrees are cochain degrees for `dgla`, chain degrees for `artin`,
//! `complex` and `extension`, and `i j` (cochain, chain) for `bigraded`.
//! Coefficients are integers or `p/q`; a term is `[-][coeff*]label`. Labels
//! start with a letter or `_` and may contain letters, digits and `_^().'{}|@`;
//! anything else goes in double quotes. `[multiplication]` (and `[bracket]`)
//! entries listed in one order only are completed by graded (anti)symmetry.
//! `bigraded` files use `[horizontal]` and `[vertical]` for the two
//! differentials. `extension` files describe `A` and list the kernel of
//! `A -> B` in `[kernel]`, one linear combination per line. `element` files
//! carry one linear combination in `[element]`; labels are `l@a` for an
//! element of `L (x) m(A)` and plain `l` for an element of `L`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::artin::{quotient, ArtinCdga, CdgaMap};
use crate::complexes::CochainComplex;
use crate::dgla::{Dgla, NilpotentDgla};
use crate::error::{Error, Result};
use crate::qlinalg::{fmt_q, sign, zero_vec, Q};
use crate::simplicial::BigradedArtin;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

fn perr<T>(pos: Pos, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line: pos.line,
        column: pos.column,
        message: msg.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Term {
    #[serde(serialize_with = "ser_q")]
    pub coeff: Q,
    pub label: String,
    #[serde(skip)]
    pub pos: Pos,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Entry {
    Meta { key: String, value: String },
    Space { label: String, degrees: Vec<i32> },
    Map { source: String, terms: Vec<Term> },
    Binary { left: String, right: String, terms: Vec<Term> },
    Vector { terms: Vec<Term> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Section {
    pub name: String,
    pub entries: Vec<Entry>,
    #[serde(skip)]
    pub positions: Vec<Pos>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Document {
    pub sections: Vec<Section>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(Q),
    Arrow,
    Comma,
    Star,
    Plus,
    Minus,
    Eq,
}

fn is_label_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_label_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "_^().'{}|@".contains(c)
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos {
            line: line_no,
            column: i + 1,
        };
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            break;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Arrow, pos));
            i += 2;
        } else if c == ',' {
            out.push((Tok::Comma, pos));
            i += 1;
        } else if c == '*' {
            out.push((Tok::Star, pos));
            i += 1;
        } else if c == '+' {
            out.push((Tok::Plus, pos));
            i += 1;
        } else if c == '-' {
            out.push((Tok::Minus, pos));
            i += 1;
        } else if c == '=' {
            out.push((Tok::Eq, pos));
            i += 1;
        } else if c == '"' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j] != '"' {
                j += 1;
            }
            if j == chars.len() {
                return perr(pos, "unterminated quoted label");
            }
            out.push((Tok::Ident(chars[start..j].iter().collect()), pos));
            i = j + 1;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let num: String = chars[i..j].iter().collect();
            let mut x = Q::from_integer(num.parse().expect("digits"));
            if j < chars.len() && chars[j] == '/' {
                let k0 = j + 1;
                let mut k = k0;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                if k == k0 {
                    return perr(Pos { line: line_no, column: j + 1 }, "expected a denominator after '/'");
                }
                let den: num_bigint::BigInt = chars[k0..k].iter().collect::<String>().parse().expect("digits");
                if den.is_zero() {
                    return perr(Pos { line: line_no, column: k0 + 1 }, "zero denominator");
                }
                x /= Q::from_integer(den);
                j = k;
            }
            if j < chars.len() && is_label_start(chars[j]) {
                return perr(Pos { line: line_no, column: j + 1 }, "labels may not start with a digit; quote them");
            }
            out.push((Tok::Num(x), pos));
            i = j;
        } else if is_label_start(c) {
            let mut j = i;
            while j < chars.len() && is_label_char(chars[j]) {
                j += 1;
            }
            out.push((Tok::Ident(chars[i..j].iter().collect()), pos));
            i = j;
        } else {
            return perr(pos, format!("unexpected character '{c}'"));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [(Tok, Pos)],
    i: usize,
    end: Pos,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.0)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map(|t| t.1).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.i).cloned();
        self.i += 1;
        t
    }

    fn label(&mut self, what: &str) -> Result<String> {
        let pos = self.pos();
        match self.next() {
            Some((Tok::Ident(s), _)) => Ok(s),
            _ => perr(pos, format!("expected {what}")),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        let pos = self.pos();
        match self.next() {
            Some((t, _)) if t == tok => Ok(()),
            _ => perr(pos, format!("expected {what}")),
        }
    }

    fn int(&mut self) -> Result<i32> {
        let pos = self.pos();
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.i += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some((Tok::Num(x), _)) if x.is_integer() => {
                let v: i32 = x
                    .numer()
                    .try_into()
                    .or_else(|_| perr(pos, "degree out of range"))?;
                Ok(if neg { -v } else { v })
            }
            _ => perr(pos, "expected an integer degree"),
        }
    }

    fn done(&self) -> Result<()> {
        if self.i < self.toks.len() {
            perr(self.pos(), "unexpected trailing input")
        } else {
            Ok(())
        }
    }

    /// `term (('+' | '-') term)*` or `0`
    fn terms(&mut self) -> Result<Vec<Term>> {
        let mut out = Vec::new();
        if let Some(Tok::Num(x)) = self.peek() {
            if x.is_zero() && self.i + 1 == self.toks.len() {
                self.i += 1;
                return Ok(out);
            }
        }
        let mut negate = false;
        loop {
            match self.peek() {
                Some(Tok::Minus) => {
                    self.i += 1;
                    negate = !negate;
                    continue;
                }
                Some(Tok::Plus) if !out.is_empty() => {
                    self.i += 1;
                    continue;
                }
                _ => {}
            }
            let pos = self.pos();
            let coeff = match self.peek() {
                Some(Tok::Num(x)) => {
                    let x = x.clone();
                    self.i += 1;
                    self.expect(Tok::Star, "'*' after a coefficient")?;
                    x
                }
                _ => Q::one(),
            };
            let label = self.label("a label")?;
            out.push(Term {
                coeff: if negate { -coeff } else { coeff },
                label,
                pos,
            });
            negate = false;
            match self.peek() {
                None => break,
                Some(Tok::Plus) => {
                    self.i += 1;
                }
                Some(Tok::Minus) => {}
                _ => return perr(self.pos(), "expected '+', '-' or end of line"),
            }
        }
        Ok(out)
    }
}

const SECTIONS: &[&str] = &[
    "meta",
    "space",
    "differential",
    "bracket",
    "multiplication",
    "horizontal",
    "vertical",
    "kernel",
    "element",
];

/// Parses a document; errors carry line and column.
pub fn parse(text: &str) -> Result<Document> {
    let mut doc = Document::default();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let trimmed = raw.trim_start();
        let indent = raw.len() - trimmed.len();
        if trimmed.starts_with('[') {
            let close = trimmed.find(']').ok_or(Error::Parse {
                line: line_no,
                column: indent + 1,
                message: "unterminated section header".into(),
            })?;
            let name = trimmed[1..close].trim().to_string();
            if !SECTIONS.contains(&name.as_str()) {
                return perr(Pos { line: line_no, column: indent + 2 }, format!("unknown section [{name}]"));
            }
            let rest = trimmed[close + 1..].trim();
            if !rest.is_empty() && !rest.starts_with('#') {
                return perr(
                    Pos { line: line_no, column: indent + close + 2 },
                    "unexpected input after section header",
                );
            }
            if doc.sections.iter().any(|s| s.name == name) {
                return perr(Pos { line: line_no, column: indent + 1 }, format!("duplicate section [{name}]"));
            }
            doc.sections.push(Section {
                name,
                entries: Vec::new(),
                positions: Vec::new(),
            });
            continue;
        }
        if doc.sections.last().is_some_and(|s| s.name == "meta") {
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let pos = Pos { line: line_no, column: indent + 1 };
            let Some((key, value)) = body.split_once('=') else {
                return perr(pos, "expected key = value");
            };
            let key = key.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                return perr(pos, "expected a key");
            }
            let section = doc.sections.last_mut().expect("meta section");
            section.entries.push(Entry::Meta {
                key: key.to_string(),
                value: value.trim().to_string(),
            });
            section.positions.push(pos);
            continue;
        }
        let toks = tokenize(raw, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let start = toks[0].1;
        let Some(section) = doc.sections.last_mut() else {
            return perr(start, "entry outside of a section");
        };
        let mut c = Cursor {
            toks: &toks,
            i: 0,
            end: Pos {
                line: line_no,
                column: raw.len() + 1,
            },
        };
        let entry = match section.name.as_str() {
            "space" => {
                let label = c.label("a label")?;
                let mut degrees = vec![c.int()?];
                while c.peek().is_some() {
                    degrees.push(c.int()?);
                }
                Entry::Space { label, degrees }
            }
            "differential" | "horizontal" | "vertical" => {
                let source = c.label("a label")?;
                c.expect(Tok::Arrow, "'->'")?;
                let terms = c.terms()?;
                c.done()?;
                Entry::Map { source, terms }
            }
            "bracket" | "multiplication" => {
                let left = c.label("a label")?;
                c.expect(Tok::Comma, "','")?;
                let right = c.label("a label")?;
                c.expect(Tok::Arrow, "'->'")?;
                let terms = c.terms()?;
                c.done()?;
                Entry::Binary { left, right, terms }
            }
            _ => {
                let terms = c.terms()?;
                c.done()?;
                Entry::Vector { terms }
            }
        };
        section.entries.push(entry);
        section.positions.push(start);
    }
    Ok(doc)
}

impl Document {
    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.section("meta")?.entries.iter().find_map(|e| match e {
            Entry::Meta { key: k, value } if k == key => Some(value.as_str()),
            _ => None,
        })
    }

    pub fn kind(&self) -> Result<&str> {
        self.meta("kind").ok_or(Error::Parse {
            line: 1,
            column: 1,
            message: "missing 'kind' in [meta]".into(),
        })
    }

    fn expect_kind(&self, kinds: &[&str]) -> Result<()> {
        let k = self.kind()?;
        if kinds.contains(&k) {
            Ok(())
        } else {
            let pos = self
                .section("meta")
                .and_then(|s| s.positions.first().copied())
                .unwrap_or(Pos { line: 1, column: 1 });
            perr(pos, format!("expected kind {}, found {k}", kinds.join(" or ")))
        }
    }

    fn name_or(&self, default: &str) -> String {
        self.meta("name").unwrap_or(default).to_string()
    }

    fn entries(&self, name: &str) -> Vec<(&Entry, Pos)> {
        self.section(name)
            .map(|s| s.entries.iter().zip(s.positions.iter().copied()).collect())
            .unwrap_or_default()
    }

    /// Space entries with the required number of degrees.
    fn space(&self, arity: usize) -> Result<(Vec<(String, Vec<i32>)>, HashMap<String, usize>)> {
        let mut out = Vec::new();
        let mut index = HashMap::new();
        for (e, pos) in self.entries("space") {
            let Entry::Space { label, degrees } = e else { unreachable!() };
            if degrees.len() != arity {
                return perr(pos, format!("expected {arity} degree(s) for {label}"));
            }
            if index.insert(label.clone(), out.len()).is_some() {
                return perr(pos, format!("duplicate label {label}"));
            }
            out.push((label.clone(), degrees.clone()));
        }
        Ok((out, index))
    }
}

fn lookup(index: &HashMap<String, usize>, label: &str, pos: Pos) -> Result<usize> {
    match index.get(label) {
        Some(&i) => Ok(i),
        None => perr(pos, format!("unknown label {label}")),
    }
}

fn linear_entries(
    doc: &Document,
    section: &str,
    index: &HashMap<String, usize>,
) -> Result<Vec<(usize, usize, Q)>> {
    let mut out = Vec::new();
    for (e, pos) in doc.entries(section) {
        let Entry::Map { source, terms } = e else { unreachable!() };
        let s = lookup(index, source, pos)?;
        for t in terms {
            out.push((s, lookup(index, &t.label, t.pos)?, t.coeff.clone()));
        }
    }
    Ok(out)
}

/// Binary entries; pairs listed in one order only are completed with the
/// sign `symmetry * (-1)^{|a||b|}`.
fn binary_entries(
    doc: &Document,
    section: &str,
    index: &HashMap<String, usize>,
    parity: &[i32],
    symmetry: i64,
) -> Result<Vec<(usize, usize, usize, Q)>> {
    let mut given: BTreeMap<(usize, usize), Vec<(usize, Q)>> = BTreeMap::new();
    for (e, pos) in doc.entries(section) {
        let Entry::Binary { left, right, terms } = e else { unreachable!() };
        let a = lookup(index, left, pos)?;
        let b = lookup(index, right, pos)?;
        let v = given.entry((a, b)).or_default();
        for t in terms {
            v.push((lookup(index, &t.label, t.pos)?, t.coeff.clone()));
        }
    }
    let mut out = Vec::new();
    for (&(a, b), v) in &given {
        for (c, x) in v {
            out.push((a, b, *c, x.clone()));
            if a != b && !given.contains_key(&(b, a)) {
                let s = sign((parity[a] * parity[b]) as i64) * Q::from_integer(symmetry.into());
                out.push((b, a, *c, s * x));
            }
        }
    }
    Ok(out)
}

pub fn to_dgla(doc: &Document) -> Result<Dgla> {
    doc.expect_kind(&["dgla"])?;
    let (space, index) = doc.space(1)?;
    let basis: Vec<(String, i32)> = space.iter().map(|(l, d)| (l.clone(), d[0])).collect();
    let parity: Vec<i32> = basis.iter().map(|b| b.1).collect();
    let d = linear_entries(doc, "differential", &index)?;
    let br = binary_entries(doc, "bracket", &index, &parity, -1)?;
    Dgla::new(doc.name_or("L"), basis, &d, &br)
}

pub fn to_artin(doc: &Document) -> Result<ArtinCdga> {
    doc.expect_kind(&["artin", "extension"])?;
    let (space, index) = doc.space(1)?;
    let basis: Vec<(String, i32)> = space.iter().map(|(l, d)| (l.clone(), d[0])).collect();
    let parity: Vec<i32> = basis.iter().map(|b| b.1).collect();
    let d = linear_entries(doc, "differential", &index)?;
    let m = binary_entries(doc, "multiplication", &index, &parity, 1)?;
    ArtinCdga::new(doc.name_or("A"), basis, &d, &m)
}

/// A chain complex (chain degrees) in the crate's cochain convention.
pub fn to_complex(doc: &Document) -> Result<CochainComplex> {
    doc.expect_kind(&["complex"])?;
    let (space, _) = doc.space(1)?;
    let mut d = BTreeMap::new();
    let (_, index) = doc.space(1)?;
    for (s, t, x) in linear_entries(doc, "differential", &index)? {
        d.insert((space[s].0.clone(), space[t].0.clone()), x);
    }
    CochainComplex::from_chain(space.iter().map(|(l, dg)| (dg[0], l.clone())).collect(), &d)
}

pub fn to_bigraded(doc: &Document) -> Result<BigradedArtin> {
    doc.expect_kind(&["bigraded"])?;
    let (space, index) = doc.space(2)?;
    let basis: Vec<(String, i32, i32)> = space.iter().map(|(l, d)| (l.clone(), d[0], d[1])).collect();
    let parity: Vec<i32> = basis.iter().map(|b| b.1 + b.2).collect();
    let dh = linear_entries(doc, "horizontal", &index)?;
    let dv = linear_entries(doc, "vertical", &index)?;
    let m = binary_entries(doc, "multiplication", &index, &parity, 1)?;
    BigradedArtin::new(doc.name_or("B"), basis, &dh, &dv, &m)
}

/// The small extension `A -> A / I` of an `extension` document.
pub fn to_extension(doc: &Document) -> Result<CdgaMap> {
    doc.expect_kind(&["extension"])?;
    let a = to_artin(doc)?;
    let mut span = Vec::new();
    for (e, _) in doc.entries("kernel") {
        let Entry::Vector { terms } = e else { unreachable!() };
        let mut v = zero_vec(a.dim());
        for t in terms {
            let i = a
                .index_of(&t.label)
                .map_or_else(|| perr(t.pos, format!("unknown label {}", t.label)), Ok)?;
            v[i] += &t.coeff;
        }
        span.push(v);
    }
    quotient(&a, &span, &format!("{}/I", a.name()))
}

fn element_terms(doc: &Document) -> Result<Vec<Term>> {
    doc.expect_kind(&["element"])?;
    let mut out = Vec::new();
    for (e, _) in doc.entries("element") {
        let Entry::Vector { terms } = e else { unreachable!() };
        out.extend(terms.iter().cloned());
    }
    Ok(out)
}

/// An element of `L` with plain labels.
pub fn to_lie_element(doc: &Document, l: &Dgla) -> Result<Vec<Q>> {
    let mut v = zero_vec(l.dim());
    for t in element_terms(doc)? {
        let i = l
            .index_of(&t.label)
            .map_or_else(|| perr(t.pos, format!("unknown label {}", t.label)), Ok)?;
        v[i] += &t.coeff;
    }
    Ok(v)
}

/// An element of `L (x) m(A)` with labels `l@a`.
pub fn to_host_element(doc: &Document, host: &NilpotentDgla) -> Result<Vec<Q>> {
    let mut v = zero_vec(host.dim());
    for t in element_terms(doc)? {
        let Some((ll, al)) = t.label.split_once('@') else {
            return perr(t.pos, format!("expected l@a, found {}", t.label));
        };
        let li = host.l.index_of(ll);
        let ai = host.a.index_of(al);
        let idx = match (li, ai) {
            (Some(li), Some(ai)) => host.index_of_pair(li, ai),
            _ => None,
        };
        match idx {
            Some(i) => v[i] += &t.coeff,
            None => return perr(t.pos, format!("unknown label {}", t.label)),
        }
    }
    Ok(v)
}

pub fn quote(label: &str) -> String {
    let bare = label.chars().next().is_some_and(is_label_start) && label.chars().all(is_label_char);
    if bare {
        label.to_string()
    } else {
        format!("\"{label}\"")
    }
}

/// `c*label + ...`, or `0`.
pub fn format_terms(terms: &[(String, Q)]) -> String {
    let t: Vec<(Q, String)> = terms.iter().map(|(l, x)| (x.clone(), quote(l))).collect();
    crate::qlinalg::fmt_linear(&t)
}

fn header(kind: &str, name: &str) -> String {
    format!("[meta]\nkind = {kind}\nname = {name}\n")
}

fn grouped_linear(entries: &[(usize, usize, Q)], label: impl Fn(usize) -> String) -> String {
    let mut by_src: BTreeMap<usize, Vec<(String, Q)>> = BTreeMap::new();
    for (s, t, x) in entries {
        by_src.entry(*s).or_default().push((label(*t), x.clone()));
    }
    by_src
        .iter()
        .map(|(s, v)| format!("{} -> {}\n", quote(&label(*s)), format_terms(v)))
        .collect()
}

fn grouped_binary(entries: &[(usize, usize, usize, Q)], label: impl Fn(usize) -> String) -> String {
    let mut by_pair: BTreeMap<(usize, usize), Vec<(String, Q)>> = BTreeMap::new();
    for (a, b, c, x) in entries {
        by_pair.entry((*a, *b)).or_default().push((label(*c), x.clone()));
    }
    by_pair
        .iter()
        .map(|((a, b), v)| format!("{}, {} -> {}\n", quote(&label(*a)), quote(&label(*b)), format_terms(v)))
        .collect()
}

pub fn dgla_to_text(l: &Dgla) -> String {
    let mut s = header("dgla", l.name());
    s.push_str("[space]\n");
    for (lab, d) in l.basis_pairs() {
        s.push_str(&format!("{} {}\n", quote(&lab), d));
    }
    let label = |i: usize| l.label(i).to_string();
    s.push_str("[differential]\n");
    s.push_str(&grouped_linear(&l.d_entries(), label));
    s.push_str("[bracket]\n");
    let half: Vec<_> = l.bracket_entries().into_iter().filter(|(a, b, _, _)| a <= b).collect();
    s.push_str(&grouped_binary(&half, label));
    s
}

pub fn artin_to_text(a: &ArtinCdga) -> String {
    let mut s = header("artin", a.name());
    s.push_str("[space]\n");
    for (lab, d) in a.basis_pairs() {
        s.push_str(&format!("{} {}\n", quote(&lab), d));
    }
    let label = |i: usize| a.label(i).to_string();
    s.push_str("[differential]\n");
    s.push_str(&grouped_linear(&a.d_entries(), label));
    s.push_str("[multiplication]\n");
    let half: Vec<_> = a.mult_entries().into_iter().filter(|(x, y, _, _)| x <= y).collect();
    s.push_str(&grouped_binary(&half, label));
    s
}

pub fn bigraded_to_text(b: &BigradedArtin) -> String {
    let mut s = header("bigraded", &b.name);
    s.push_str("[space]\n");
    for (lab, i, j) in &b.basis {
        s.push_str(&format!("{} {} {}\n", quote(lab), i, j));
    }
    let label = |i: usize| b.label(i).to_string();
    let lin = |f: &dyn Fn(usize) -> Vec<(usize, Q)>| -> Vec<(usize, usize, Q)> {
        (0..b.dim()).flat_map(|a| f(a).into_iter().map(move |(c, x)| (a, c, x))).collect()
    };
    s.push_str("[horizontal]\n");
    s.push_str(&grouped_linear(&lin(&|a| b.d_h_basis(a)), label));
    s.push_str("[vertical]\n");
    s.push_str(&grouped_linear(&lin(&|a| b.d_v_basis(a)), label));
    s.push_str("[multiplication]\n");
    let mut half = Vec::new();
    for x in 0..b.dim() {
        for y in x..b.dim() {
            for (c, v) in b.mul_basis(x, y) {
                half.push((x, y, *c, v.clone()));
            }
        }
    }
    s.push_str(&grouped_binary(&half, label));
    s
}

pub fn host_element_to_text(host: &NilpotentDgla, v: &[Q], name: &str) -> String {
    let terms: Vec<(String, Q)> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| {
            let (li, ai) = host.pairs[i];
            (format!("{}@{}", host.l.label(li), host.a.label(ai)), x.clone())
        })
        .collect();
    format!("{}[element]\n{}\n", header("element", name), format_terms(&terms))
}

pub fn lie_element_to_text(l: &Dgla, v: &[Q], name: &str) -> String {
    let terms: Vec<(String, Q)> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (l.label(i).to_string(), x.clone()))
        .collect();
    format!("{}[element]\n{}\n", header("element", name), format_terms(&terms))
}

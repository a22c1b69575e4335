//! Instance files and exact literals.
//!
//! ```text
//! [field]
//! char = 0
//! [K]
//! kind = sqrt
//! d = -1
//! [quaternion]
//! b = -1
//! [form]
//! n = 2
//! S = [[0, 1],
//!      [0, 0]]
//! [vector]
//! w = [t, t]
//! [options]
//! seed = 7
//! ```
//!
//! Literals are arithmetic expressions in `s` (the transcendental of
//! 𝔽_p(s)), `l` (also `i`), `j` and `t`, with `+ - * /`, integer powers
//! `x^n` (`n` may be negative) and parentheses. Values spanning several lines
//! continue until their brackets balance. `#` starts a comment.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::ParseError;
use crate::field::{Algebra, BaseField, Desc, Ext, ExtKind, FunctionScalar, RatFn, TowerScalar};
use crate::forms::GramForm;
use crate::linalg::Matrix;
use crate::quaternion::{Quat, QuatK};

/// A character with its 1-based source position.
type Located = (char, usize, usize);

#[derive(Clone, Debug)]
pub struct Entry {
    pub key: String,
    pub line: usize,
    pub col: usize,
    value: Vec<Located>,
}

impl Entry {
    pub fn text(&self) -> String {
        self.value.iter().map(|c| c.0).collect::<String>().trim().to_string()
    }

    fn at(&self) -> (usize, usize) {
        self.value.iter().find(|c| !c.0.is_whitespace()).map_or((self.line, self.col), |c| (c.1, c.2))
    }
}

/// Sections and `key = value` entries, before any literal is interpreted.
#[derive(Clone, Debug, Default)]
pub struct RawInstance {
    sections: BTreeMap<String, Vec<Entry>>,
    section_lines: BTreeMap<String, usize>,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::new(line, col, msg)
}

fn depth_change(c: char) -> i64 {
    match c {
        '[' | '(' => 1,
        ']' | ')' => -1,
        _ => 0,
    }
}

pub fn parse_raw(text: &str) -> Result<RawInstance, ParseError> {
    let mut raw = RawInstance::default();
    let mut current: Option<String> = None;
    let mut open: Option<(Entry, i64)> = None;
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let body = line.split('#').next().unwrap_or("");
        if let Some((mut entry, mut depth)) = open.take() {
            for (c0, ch) in body.chars().enumerate() {
                depth += depth_change(ch);
                entry.value.push((ch, ln, c0 + 1));
            }
            entry.value.push((' ', ln, body.chars().count() + 1));
            if depth > 0 {
                open = Some((entry, depth));
            } else {
                let sec = current.clone().expect("entries only open inside sections");
                raw.sections.entry(sec).or_default().push(entry);
            }
            continue;
        }
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = body.chars().take_while(|c| c.is_whitespace()).count() + 1;
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| err(ln, indent, "unterminated section header"))?.trim();
            if name.is_empty() {
                return Err(err(ln, indent, "empty section name"));
            }
            if raw.section_lines.contains_key(name) {
                return Err(err(ln, indent, format!("duplicate section [{name}]")));
            }
            raw.section_lines.insert(name.to_string(), ln);
            raw.sections.entry(name.to_string()).or_default();
            current = Some(name.to_string());
            continue;
        }
        let Some(sec) = current.clone() else {
            return Err(err(ln, indent, "entry outside of any section"));
        };
        let eq = body.find('=').ok_or_else(|| err(ln, indent, "expected `key = value`"))?;
        let key = body[..eq].trim().to_string();
        if key.is_empty() {
            return Err(err(ln, indent, "missing key"));
        }
        if raw.sections[&sec].iter().any(|e| e.key == key) {
            return Err(err(ln, indent, format!("duplicate key `{key}` in [{sec}]")));
        }
        let start = body[..eq].chars().count() + 2;
        let mut entry = Entry { key, line: ln, col: indent, value: Vec::new() };
        let mut depth = 0;
        for (c0, ch) in body[eq + 1..].chars().enumerate() {
            depth += depth_change(ch);
            entry.value.push((ch, ln, start + c0));
        }
        if entry.value.iter().all(|c| c.0.is_whitespace()) {
            return Err(err(ln, indent, format!("empty value for `{}`", entry.key)));
        }
        if depth > 0 {
            entry.value.push((' ', ln, body.chars().count() + 1));
            open = Some((entry, depth));
        } else {
            raw.sections.entry(sec).or_default().push(entry);
        }
    }
    if let Some((entry, _)) = open {
        return Err(err(entry.line, entry.col, format!("unbalanced brackets in `{}`", entry.key)));
    }
    Ok(raw)
}

impl RawInstance {
    pub fn has_section(&self, name: &str) -> bool {
        self.sections.contains_key(name)
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.sections.get(section)?.iter().find(|e| e.key == key)
    }

    fn require(&self, section: &str, key: &str) -> Result<&Entry, ParseError> {
        if !self.has_section(section) {
            return Err(err(1, 1, format!("missing section [{section}]")));
        }
        self.get(section, key).ok_or_else(|| {
            let line = self.section_lines.get(section).copied().unwrap_or(1);
            err(line, 1, format!("missing `{key}` in [{section}]"))
        })
    }

    /// The characteristic declared in `[field]`: `0` or a prime.
    pub fn characteristic(&self) -> Result<u64, ParseError> {
        let e = self.require("field", "char")?;
        let (line, col) = e.at();
        let c: u64 = e.text().parse().map_err(|_| err(line, col, format!("invalid characteristic `{}`", e.text())))?;
        if let Some(base) = self.get("field", "base") {
            let expected = if c == 0 { "Q".to_string() } else { format!("F{c}(s)") };
            let b = base.text().replace(['_', ' '], "");
            if !b.eq_ignore_ascii_case(&expected) {
                let (l, c2) = base.at();
                return Err(err(l, c2, format!("base `{}` does not match char = {c}", base.text())));
            }
        }
        Ok(c)
    }

    fn int_option<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ParseError> {
        match self.get("options", key) {
            None => Ok(None),
            Some(e) => {
                let (line, col) = e.at();
                e.text().parse().map(Some).map_err(|_| err(line, col, format!("invalid integer for `{key}`")))
            }
        }
    }

    pub fn options(&self) -> Result<Options, ParseError> {
        let assume_division = match self.get("options", "assume-division") {
            None => false,
            Some(e) => match e.text().as_str() {
                "true" => true,
                "false" => false,
                _ => {
                    let (line, col) = e.at();
                    return Err(err(line, col, "expected `true` or `false`"));
                }
            },
        };
        Ok(Options {
            seed: self.int_option("seed")?,
            height: self.int_option("height")?,
            filtration: self.int_option("filtration")?,
            support: self.int_option("support")?,
            samples: self.int_option("samples")?,
            assume_division,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub seed: Option<u64>,
    pub height: Option<u32>,
    pub filtration: Option<usize>,
    pub support: Option<usize>,
    pub samples: Option<usize>,
    pub assume_division: bool,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Sym(char),
    Op(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(src: &[Located]) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < src.len() {
        let (c, line, col) = src[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut digits = String::new();
            while i < src.len() && src[i].0.is_ascii_digit() {
                digits.push(src[i].0);
                i += 1;
            }
            out.push(Token { tok: Tok::Num(digits.parse().expect("digits")), line, col });
        } else if matches!(c, 's' | 'l' | 'i' | 'j' | 't') {
            if i + 1 < src.len() && src[i + 1].0.is_ascii_alphanumeric() {
                return Err(err(line, col, "unknown identifier"));
            }
            out.push(Token { tok: Tok::Sym(if c == 'i' { 'l' } else { c }), line, col });
            i += 1;
        } else if "+-*/^()[],".contains(c) {
            out.push(Token { tok: Tok::Op(c), line, col });
            i += 1;
        } else {
            return Err(err(line, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// Recursive-descent evaluation into `Q_{K(t)}`, the top of the tower.
struct Parser<'a, B: BaseField> {
    alg: &'a Desc<B>,
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

type Value<B> = Quat<RatFn<B>>;

impl<'a, B: BaseField> Parser<'a, B> {
    fn new(alg: &'a Desc<B>, src: &[Located], fallback: (usize, usize)) -> Result<Self, ParseError> {
        let toks = tokenize(src)?;
        let end = src.iter().rev().find(|c| !c.0.is_whitespace()).map_or(fallback, |c| (c.1, c.2 + 1));
        Ok(Parser { alg, toks, pos: 0, end })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col))
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (l, c) = self.here();
        Err(err(l, c, msg))
    }

    fn expect(&mut self, op: char) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected `{op}`"))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            self.fail("unexpected trailing input")
        } else {
            Ok(())
        }
    }

    fn expr(&mut self) -> Result<Value<B>, ParseError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value<B>, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            let at = self.here();
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' {
                acc * rhs
            } else {
                let inv = rhs.inverse().ok_or_else(|| err(at.0, at.1, "division by a non-invertible element"))?;
                acc * inv
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Value<B>, ParseError> {
        if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        if self.peek() == Some(&Tok::Op('+')) {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value<B>, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            true
        } else {
            false
        };
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return self.fail("expected an integer exponent");
        };
        let at = self.here();
        self.pos += 1;
        let e: u32 = n.try_into().map_err(|_| err(at.0, at.1, "exponent too large"))?;
        let mut b = base;
        if neg {
            b = b.inverse().ok_or_else(|| err(at.0, at.1, "negative power of a non-invertible element"))?;
        }
        let mut acc: Value<B> = Quat::one(self.alg);
        for _ in 0..e {
            acc = acc * b.clone();
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Value<B>, ParseError> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let c = B::from_decimal(&n.to_string()).ok_or_else(|| err(at.0, at.1, "invalid number"))?;
                Ok(Quat::from_base(self.alg, c))
            }
            Some(Tok::Sym(c)) => {
                self.pos += 1;
                let alg = self.alg;
                Ok(match c {
                    's' => {
                        let g = B::generator().ok_or_else(|| err(at.0, at.1, "`s` is only defined in positive characteristic"))?;
                        Quat::from_base(alg, g)
                    }
                    'l' => Quat::ell(alg),
                    'j' => Quat::j(alg),
                    't' => Quat::scalar(<RatFn<B> as FunctionScalar>::t(alg)),
                    _ => unreachable!("tokenizer only emits known symbols"),
                })
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(_) => self.fail("expected a number, symbol or `(`"),
            None => self.fail("unexpected end of literal"),
        }
    }

    /// `[e, e, …]`.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        self.expect('[')?;
        let mut out = vec![item(self)?];
        while self.peek() == Some(&Tok::Op(',')) {
            self.pos += 1;
            out.push(item(self)?);
        }
        self.expect(']')?;
        Ok(out)
    }
}

fn located(text: &str) -> Vec<Located> {
    text.chars().enumerate().map(|(i, c)| (c, 1, i + 1)).collect()
}

fn constant_quat<B: BaseField>(v: &Value<B>, at: (usize, usize)) -> Result<QuatK<B>, ParseError> {
    match (v.x0.as_constant(), v.x1.as_constant()) {
        (Some(a), Some(b)) => Ok(Quat::new(a, b)),
        _ => Err(err(at.0, at.1, "expected a constant quaternion (no `t`)")),
    }
}

fn kt_scalar<B: BaseField>(v: &Value<B>, at: (usize, usize)) -> Result<RatFn<B>, ParseError> {
    if v.x1.is_zero() {
        Ok(v.x0.clone())
    } else {
        Err(err(at.0, at.1, "expected an element of K(t) (no `j`)"))
    }
}

fn base_scalar<B: BaseField>(v: &Value<B>, at: (usize, usize)) -> Result<B, ParseError> {
    let q = constant_quat(v, at)?;
    if q.is_in_k() {
        Ok(q.x0.c0().clone())
    } else {
        Err(err(at.0, at.1, "expected an element of the base field"))
    }
}

/// Parses a base-field literal before any algebra exists, through the
/// placeholder algebra `ℓ² = d₀` for a non-square or non-Artin–Schreier `d₀`.
pub fn parse_base<B: BaseField>(src: &str) -> Result<B, ParseError> {
    parse_base_located(&located(src), (1, 1))
}

fn scratch_algebra<B: BaseField>() -> Desc<B> {
    let kind = if B::CHARACTERISTIC == 2 { ExtKind::ArtinSchreier } else { ExtKind::Sqrt };
    let d = (1..).map(B::from_i64).chain(B::generator()).find_map(|c| {
        let d = if B::CHARACTERISTIC == 2 { B::generator().expect("𝔽₂(s)") } else { -c };
        Algebra::new(kind, d, B::one()).ok()
    });
    d.expect("a separable quadratic extension exists")
}

fn parse_base_located<B: BaseField>(src: &[Located], fallback: (usize, usize)) -> Result<B, ParseError> {
    let alg = scratch_algebra::<B>();
    let mut p = Parser::new(&alg, src, fallback)?;
    let at = p.here();
    let v = p.expr()?;
    p.finish()?;
    base_scalar(&v, at)
}

pub fn parse_quat<B: BaseField>(alg: &Desc<B>, src: &str) -> Result<QuatK<B>, ParseError> {
    let mut p = Parser::new(alg, &located(src), (1, 1))?;
    let at = p.here();
    let v = p.expr()?;
    p.finish()?;
    constant_quat(&v, at)
}

pub fn parse_ext<B: BaseField>(alg: &Desc<B>, src: &str) -> Result<Ext<B>, ParseError> {
    let q = parse_quat(alg, src)?;
    if q.x1.is_zero() {
        Ok(q.x0)
    } else {
        Err(err(1, 1, "expected an element of K (no `j`)"))
    }
}

pub fn parse_kt<B: BaseField>(alg: &Desc<B>, src: &str) -> Result<RatFn<B>, ParseError> {
    let mut p = Parser::new(alg, &located(src), (1, 1))?;
    let at = p.here();
    let v = p.expr()?;
    p.finish()?;
    kt_scalar(&v, at)
}

pub fn parse_quat_matrix<B: BaseField>(alg: &Desc<B>, src: &str) -> Result<Matrix<QuatK<B>>, ParseError> {
    quat_matrix_located(alg, &located(src), (1, 1))
}

fn quat_matrix_located<B: BaseField>(alg: &Desc<B>, src: &[Located], fallback: (usize, usize)) -> Result<Matrix<QuatK<B>>, ParseError> {
    let mut p = Parser::new(alg, src, fallback)?;
    let start = p.here();
    let rows = p.list(|p| {
        p.list(|p| {
            let at = p.here();
            let v = p.expr()?;
            constant_quat(&v, at)
        })
    })?;
    p.finish()?;
    let n = rows[0].len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(err(start.0, start.1, "rows of different lengths"));
    }
    Ok(Matrix::from_rows(rows))
}

fn kt_list_located<B: BaseField>(alg: &Desc<B>, src: &[Located], fallback: (usize, usize)) -> Result<Vec<RatFn<B>>, ParseError> {
    let mut p = Parser::new(alg, src, fallback)?;
    let v = p.list(|p| {
        let at = p.here();
        let v = p.expr()?;
        kt_scalar(&v, at)
    })?;
    p.finish()?;
    Ok(v)
}

fn kt_matrix_located<B: BaseField>(alg: &Desc<B>, src: &[Located], fallback: (usize, usize)) -> Result<Vec<Vec<RatFn<B>>>, ParseError> {
    let mut p = Parser::new(alg, src, fallback)?;
    let v = p.list(|p| {
        p.list(|p| {
            let at = p.here();
            let v = p.expr()?;
            kt_scalar(&v, at)
        })
    })?;
    p.finish()?;
    Ok(v)
}

pub fn parse_kt_list<B: BaseField>(alg: &Desc<B>, src: &str) -> Result<Vec<RatFn<B>>, ParseError> {
    kt_list_located(alg, &located(src), (1, 1))
}

/// A parsed and validated instance over the base field `B`.
#[derive(Clone, Debug)]
pub struct InstanceFile<B: BaseField> {
    pub alg: Desc<B>,
    pub form: GramForm<B>,
    pub vector: Option<Vec<RatFn<B>>>,
    pub options: Options,
}

pub fn parse_algebra<B: BaseField>(raw: &RawInstance) -> Result<Desc<B>, ParseError> {
    let kind_e = raw.require("K", "kind")?;
    let kind = match kind_e.text().as_str() {
        "sqrt" => ExtKind::Sqrt,
        "artin-schreier" => ExtKind::ArtinSchreier,
        other => {
            let (l, c) = kind_e.at();
            return Err(err(l, c, format!("unknown kind `{other}` (expected sqrt or artin-schreier)")));
        }
    };
    let d_e = raw.require("K", "d")?;
    let d: B = parse_base_located(&d_e.value, d_e.at())?;
    let b_e = raw.require("quaternion", "b")?;
    let b: B = parse_base_located(&b_e.value, b_e.at())?;
    Algebra::new(kind, d, b).map_err(|e| {
        let (l, c) = kind_e.at();
        err(l, c, e.to_string())
    })
}

impl<B: BaseField> InstanceFile<B> {
    pub fn from_raw(raw: &RawInstance) -> Result<Self, ParseError> {
        let c = raw.characteristic()?;
        if c != B::CHARACTERISTIC {
            let e = raw.require("field", "char")?;
            let (l, col) = e.at();
            return Err(err(l, col, format!("characteristic {c} does not match the base field")));
        }
        let alg = parse_algebra::<B>(raw)?;
        let n_e = raw.require("form", "n")?;
        let (nl, nc) = n_e.at();
        let n: usize = n_e.text().parse().map_err(|_| err(nl, nc, "`n` must be a positive integer"))?;
        if n == 0 {
            return Err(err(nl, nc, "`n` must be at least 1"));
        }
        let s_e = raw.require("form", "S")?;
        let s = quat_matrix_located(&alg, &s_e.value, s_e.at())?;
        if s.rows() != n || s.cols() != n {
            let (l, col) = s_e.at();
            return Err(err(l, col, format!("`S` is {}×{}, expected {n}×{n}", s.rows(), s.cols())));
        }
        let vector = match raw.get("vector", "w") {
            None if raw.has_section("vector") => {
                let line = raw.section_lines["vector"];
                return Err(err(line, 1, "missing `w` in [vector]"));
            }
            None => None,
            Some(e) => {
                let w = kt_list_located(&alg, &e.value, e.at())?;
                if w.len() != n {
                    let (l, col) = e.at();
                    return Err(err(l, col, format!("`w` has {} entries, expected {n}", w.len())));
                }
                Some(w)
            }
        };
        Ok(InstanceFile { alg, form: GramForm::new(s), vector, options: raw.options()? })
    }
}

pub fn parse_instance<B: BaseField>(text: &str) -> Result<InstanceFile<B>, ParseError> {
    InstanceFile::from_raw(&parse_raw(text)?)
}

/// Emits an instance file that [`parse_instance`] reads back.
pub fn emit_instance<B: BaseField>(alg: &Desc<B>, form: &GramForm<B>, vector: Option<&[RatFn<B>]>) -> String {
    let kind = match alg.kind() {
        ExtKind::Sqrt => "sqrt",
        ExtKind::ArtinSchreier => "artin-schreier",
    };
    let mut out = format!(
        "[field]\nchar = {}\n[K]\nkind = {kind}\nd = {}\n[quaternion]\nb = {}\n[form]\nn = {}\nS = {}\n",
        B::CHARACTERISTIC,
        alg.d(),
        alg.b(),
        form.n(),
        form.gram()
    );
    if let Some(w) = vector {
        let items: Vec<String> = w.iter().map(|f| f.to_string()).collect();
        out.push_str(&format!("[vector]\nw = [{}]\n", items.join(", ")));
    }
    out
}

/// Reads the `[morita]` block written by the `morita` report.
pub fn parse_morita_block<B: BaseField>(alg: &Desc<B>, text: &str) -> Result<(Vec<RatFn<B>>, Vec<Vec<RatFn<B>>>), ParseError> {
    let raw = parse_raw(text)?;
    let q = raw.require("morita", "q")?;
    let g = raw.require("morita", "G")?;
    Ok((kt_list_located(alg, &q.value, q.at())?, kt_matrix_located(alg, &g.value, g.at())?))
}

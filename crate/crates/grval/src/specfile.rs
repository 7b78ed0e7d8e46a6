//! The algebra-spec file format: a small key/value + array text format
//! with `[field]`, `[algebra]` and `[lie]` sections, plus the JSON format
//! for Lie structure constants. Validation errors carry line numbers.
//!
//! ```text
//! format_version = 1
//!
//! [field]
//! kind = "rationals"          # or "rational_functions"
//! valuation = "p-adic"        # or "t-adic"
//! p = 2                       # p-adic prime
//! # q = 3                     # coefficient prime for rational_functions;
//! #                             omit it for rational coefficients
//!
//! [algebra]
//! kind = "pbw"                # or "presentation"
//! generators = ["x", "D"]
//! relations = ["D*x = x*D + 1"]
//!
//! [lie]
//! basis = ["e", "f", "h"]
//! brackets = ["[e,f] = h", "[h,e] = 2*e", "[h,f] = -2*f"]
//! ```
//!
//! For `kind = "pbw"` each relation is a rewrite equation whose left side
//! is exactly `x_j*x_i` with `j > i` in the generator order and whose
//! right side is a combination of standard monomials containing
//! `x_i*x_j`; pairs without an equation commute. For
//! `kind = "presentation"` the relations are plain polynomials.

use serde::Deserialize;

use crate::field::{Field, PrimeField, Rationals};
use crate::ncpoly::{FreeAlgebra, Presentation};
use crate::parser::ParseError;
use crate::pbw::{Mono, PBWElement, PBWSpec};
use crate::reduction::LieData;
use crate::valued_field::{PAdic, TAdic, ValuedField};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("line {line}: {msg}")]
    File { line: usize, msg: String },
    #[error("in {context}: {err}")]
    Expr { context: String, err: ParseError },
    #[error("{0}")]
    Validation(String),
}

fn file_err(line: usize, msg: impl Into<String>) -> SpecError {
    SpecError::File {
        line,
        msg: msg.into(),
    }
}

// ---------------------------------------------------------------------------
// Raw file scanning
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Str(String),
    Int(i64),
    Arr(Vec<Value>),
}

#[derive(Debug, Default)]
struct RawFile {
    // section name -> (key, value, line); top-level keys live in ""
    sections: Vec<(String, Vec<(String, Value, usize)>)>,
}

impl RawFile {
    fn section(&self, name: &str) -> Option<&[(String, Value, usize)]> {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, kvs)| kvs.as_slice())
    }
}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
        }
        Some(c)
    }

    fn skip_ws_and_comments(&mut self) {
        while let Some(c) = self.peek() {
            if c == b'#' {
                while let Some(c) = self.bump() {
                    if c == b'\n' {
                        break;
                    }
                }
            } else if c.is_ascii_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn ident(&mut self) -> Result<String, SpecError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'-' {
                self.bump();
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(file_err(self.line, "expected a name"));
        }
        Ok(String::from_utf8(self.src[start..self.pos].to_vec()).expect("ascii"))
    }

    fn value(&mut self) -> Result<Value, SpecError> {
        let anchor = self.line;
        self.skip_ws_and_comments();
        if self.peek().is_none() {
            return Err(file_err(anchor, "expected a value"));
        }
        match self.peek() {
            Some(b'"') => {
                self.bump();
                let start = self.pos;
                let start_line = self.line;
                loop {
                    match self.bump() {
                        Some(b'"') => break,
                        Some(_) => {}
                        None => return Err(file_err(start_line, "unterminated string")),
                    }
                }
                Ok(Value::Str(
                    String::from_utf8(self.src[start..self.pos - 1].to_vec())
                        .map_err(|_| file_err(start_line, "string is not UTF-8"))?,
                ))
            }
            Some(b'[') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_ws_and_comments();
                    match self.peek() {
                        Some(b']') => {
                            self.bump();
                            return Ok(Value::Arr(items));
                        }
                        None => return Err(file_err(self.line, "unterminated array")),
                        _ => {
                            items.push(self.value()?);
                            self.skip_ws_and_comments();
                            match self.peek() {
                                Some(b',') => {
                                    self.bump();
                                }
                                Some(b']') => {}
                                _ => {
                                    return Err(file_err(self.line, "expected ',' or ']' in array"))
                                }
                            }
                        }
                    }
                }
            }
            Some(c) if c == b'-' || c.is_ascii_digit() => {
                let start = self.pos;
                if c == b'-' {
                    self.bump();
                }
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.bump();
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                text.parse::<i64>()
                    .map(Value::Int)
                    .map_err(|_| file_err(self.line, format!("bad integer {text:?}")))
            }
            _ => Err(file_err(self.line, "expected a value")),
        }
    }
}

fn scan_file(src: &str) -> Result<RawFile, SpecError> {
    let mut s = Scanner::new(src);
    let mut out = RawFile::default();
    out.sections.push((String::new(), Vec::new()));
    let mut current = 0usize;
    loop {
        s.skip_ws_and_comments();
        let Some(c) = s.peek() else {
            return Ok(out);
        };
        if c == b'[' {
            s.bump();
            let name = s.ident()?;
            s.skip_ws_and_comments();
            if s.bump() != Some(b']') {
                return Err(file_err(s.line, "expected ']' after section name"));
            }
            if out.sections.iter().any(|(n, _)| *n == name) {
                return Err(file_err(s.line, format!("duplicate section [{name}]")));
            }
            out.sections.push((name, Vec::new()));
            current = out.sections.len() - 1;
        } else {
            let line = s.line;
            let key = s.ident()?;
            s.skip_ws_and_comments();
            if s.bump() != Some(b'=') {
                return Err(file_err(line, format!("expected '=' after key {key:?}")));
            }
            let value = s.value()?;
            let kvs = &mut out.sections[current].1;
            if kvs.iter().any(|(k, _, _)| *k == key) {
                return Err(file_err(line, format!("duplicate key {key:?}")));
            }
            kvs.push((key, value, line));
        }
    }
}

// ---------------------------------------------------------------------------
// Typed sections
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSection {
    pub kind: String,
    pub valuation: String,
    pub p: Option<u64>,
    pub q: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    Pbw,
    Presentation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSection {
    pub kind: AlgebraKind,
    pub generators: Vec<String>,
    pub relations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieSection {
    pub basis: Vec<String>,
    pub brackets: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecFile {
    pub format_version: u32,
    pub field: FieldSection,
    pub algebra: Option<AlgebraSection>,
    pub lie: Option<LieSection>,
}

struct SectionReader<'a> {
    name: &'a str,
    kvs: &'a [(String, Value, usize)],
}

impl<'a> SectionReader<'a> {
    fn get(&self, key: &str) -> Option<&(String, Value, usize)> {
        self.kvs.iter().find(|(k, _, _)| k == key)
    }

    fn require_known(&self, known: &[&str]) -> Result<(), SpecError> {
        for (k, _, line) in self.kvs {
            if !known.contains(&k.as_str()) {
                return Err(file_err(
                    *line,
                    format!("unknown key {:?} in section [{}]", k, self.name),
                ));
            }
        }
        Ok(())
    }

    fn str(&self, key: &str) -> Result<String, SpecError> {
        match self.get(key) {
            Some((_, Value::Str(s), _)) => Ok(s.clone()),
            Some((_, _, line)) => Err(file_err(*line, format!("{key:?} must be a string"))),
            None => Err(SpecError::Validation(format!(
                "missing key {:?} in section [{}]",
                key, self.name
            ))),
        }
    }

    fn opt_u64(&self, key: &str) -> Result<Option<u64>, SpecError> {
        match self.get(key) {
            None => Ok(None),
            Some((_, Value::Int(n), line)) => u64::try_from(*n)
                .map(Some)
                .map_err(|_| file_err(*line, format!("{key:?} must be nonnegative"))),
            Some((_, _, line)) => Err(file_err(*line, format!("{key:?} must be an integer"))),
        }
    }

    fn str_array(&self, key: &str) -> Result<Option<Vec<String>>, SpecError> {
        match self.get(key) {
            None => Ok(None),
            Some((_, Value::Arr(items), line)) => {
                let mut out = Vec::new();
                for it in items {
                    match it {
                        Value::Str(s) => out.push(s.clone()),
                        _ => {
                            return Err(file_err(
                                *line,
                                format!("{key:?} must be an array of strings"),
                            ))
                        }
                    }
                }
                Ok(Some(out))
            }
            Some((_, _, line)) => Err(file_err(*line, format!("{key:?} must be an array"))),
        }
    }
}

/// Parses and shape-checks an algebra-spec file.
pub fn parse_spec_file(src: &str) -> Result<SpecFile, SpecError> {
    let raw = scan_file(src)?;
    for (name, _) in &raw.sections {
        if !matches!(name.as_str(), "" | "field" | "algebra" | "lie") {
            return Err(SpecError::Validation(format!("unknown section [{name}]")));
        }
    }
    let top = SectionReader {
        name: "",
        kvs: raw.section("").unwrap_or(&[]),
    };
    top.require_known(&["format_version"])?;
    let format_version = top.opt_u64("format_version")?.unwrap_or(1) as u32;
    if format_version != crate::FORMAT_VERSION {
        return Err(SpecError::Validation(format!(
            "unsupported format_version {format_version}"
        )));
    }

    let field_kvs = raw
        .section("field")
        .ok_or_else(|| SpecError::Validation("missing [field] section".into()))?;
    let fr = SectionReader {
        name: "field",
        kvs: field_kvs,
    };
    fr.require_known(&["kind", "valuation", "p", "q"])?;
    let field = FieldSection {
        kind: fr.str("kind")?,
        valuation: fr.str("valuation")?,
        p: fr.opt_u64("p")?,
        q: fr.opt_u64("q")?,
    };

    let algebra = match raw.section("algebra") {
        None => None,
        Some(kvs) => {
            let ar = SectionReader {
                name: "algebra",
                kvs,
            };
            ar.require_known(&["kind", "generators", "relations"])?;
            let kind = match ar.str("kind")?.as_str() {
                "pbw" => AlgebraKind::Pbw,
                "presentation" => AlgebraKind::Presentation,
                other => {
                    return Err(SpecError::Validation(format!(
                        "algebra kind must be \"pbw\" or \"presentation\", got {other:?}"
                    )))
                }
            };
            let generators = ar
                .str_array("generators")?
                .ok_or_else(|| SpecError::Validation("missing generators".into()))?;
            if generators.is_empty() {
                return Err(SpecError::Validation("generators must be nonempty".into()));
            }
            let relations = ar.str_array("relations")?.unwrap_or_default();
            Some(AlgebraSection {
                kind,
                generators,
                relations,
            })
        }
    };

    let lie = match raw.section("lie") {
        None => None,
        Some(kvs) => {
            let lr = SectionReader { name: "lie", kvs };
            lr.require_known(&["basis", "brackets"])?;
            let basis = lr
                .str_array("basis")?
                .ok_or_else(|| SpecError::Validation("missing basis".into()))?;
            let brackets = lr.str_array("brackets")?.unwrap_or_default();
            Some(LieSection { basis, brackets })
        }
    };

    Ok(SpecFile {
        format_version,
        field,
        algebra,
        lie,
    })
}

// ---------------------------------------------------------------------------
// Field dispatch
// ---------------------------------------------------------------------------

/// The concrete valued fields the file format can name.
#[derive(Clone, Debug)]
pub enum FieldChoice {
    PAdic(PAdic),
    TAdicPrime(TAdic<PrimeField>),
    TAdicRationals(TAdic<Rationals>),
}

impl FieldChoice {
    pub fn from_section(s: &FieldSection) -> Result<Self, SpecError> {
        match (s.kind.as_str(), s.valuation.as_str()) {
            ("rationals", "p-adic") => {
                let p =
                    s.p.ok_or_else(|| SpecError::Validation("p-adic valuation requires p".into()))?;
                if s.q.is_some() {
                    return Err(SpecError::Validation(
                        "q is only meaningful for rational_functions".into(),
                    ));
                }
                let k = PAdic::new(p).map_err(|e| SpecError::Validation(e.to_string()))?;
                Ok(FieldChoice::PAdic(k))
            }
            ("rational_functions", "t-adic") => {
                if s.p.is_some() {
                    return Err(SpecError::Validation(
                        "p is only meaningful for the p-adic valuation".into(),
                    ));
                }
                match s.q {
                    Some(q) => {
                        let c =
                            PrimeField::new(q).map_err(|e| SpecError::Validation(e.to_string()))?;
                        Ok(FieldChoice::TAdicPrime(TAdic::new(c)))
                    }
                    None => Ok(FieldChoice::TAdicRationals(TAdic::new(Rationals))),
                }
            }
            ("rationals", v) => Err(SpecError::Validation(format!(
                "rationals require the p-adic valuation, got {v:?}"
            ))),
            ("rational_functions", v) => Err(SpecError::Validation(format!(
                "rational_functions require the t-adic valuation, got {v:?}"
            ))),
            (k, _) => Err(SpecError::Validation(format!(
                "field kind must be \"rationals\" or \"rational_functions\", got {k:?}"
            ))),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FieldChoice::PAdic(k) => k.describe(),
            FieldChoice::TAdicPrime(k) => k.describe(),
            FieldChoice::TAdicRationals(k) => k.describe(),
        }
    }
}

// ---------------------------------------------------------------------------
// Building algebra objects
// ---------------------------------------------------------------------------

fn expr_err(context: &str, err: ParseError) -> SpecError {
    SpecError::Expr {
        context: context.to_string(),
        err,
    }
}

/// Parses a scalar literal ("3", "-1/2", "1+t") in the given field.
pub fn parse_scalar<F: Field>(field: &F, src: &str) -> Result<F::Elem, SpecError> {
    let alg = FreeAlgebra::new(field.clone(), Vec::new()).expect("no generator names to validate");
    let p = alg.parse(src).map_err(|e| expr_err(src, e))?;
    p.as_scalar(field)
        .ok_or_else(|| SpecError::Validation(format!("{src:?} is not a scalar")))
}

/// Builds the rewrite system of a `kind = "pbw"` section.
pub fn build_pbw<K: ValuedField>(
    field: &K,
    section: &AlgebraSection,
) -> Result<PBWSpec<K>, SpecError> {
    let mut spec = PBWSpec::commutative(field.clone(), section.generators.clone())
        .map_err(|e| SpecError::Validation(e.to_string()))?;
    let alg = spec.free_algebra();
    let g = spec.arity();
    let mut seen = vec![false; g * g];
    for rel in &section.relations {
        let Some((lhs_src, rhs_src)) = rel.split_once('=') else {
            return Err(SpecError::Validation(format!(
                "pbw relation {rel:?} must be a rewrite equation \"x_j*x_i = ...\""
            )));
        };
        let lhs = alg.parse(lhs_src).map_err(|e| expr_err(rel, e))?;
        let rhs = alg.parse(rhs_src).map_err(|e| expr_err(rel, e))?;
        // left side must be exactly one out-of-order pair with coefficient 1
        let mut lhs_terms = lhs.terms();
        let (j, i) = match (lhs_terms.next(), lhs_terms.next()) {
            (Some((w, c)), None)
                if w.len() == 2 && field.is_one(c) && w.letters()[0] > w.letters()[1] =>
            {
                (w.letters()[0], w.letters()[1])
            }
            _ => {
                return Err(SpecError::Validation(format!(
                    "left side of {rel:?} must be exactly x_j*x_i with j > i in the generator order"
                )))
            }
        };
        if seen[j * g + i] {
            return Err(SpecError::Validation(format!(
                "duplicate rule for the pair in {rel:?}"
            )));
        }
        seen[j * g + i] = true;
        // right side must be a combination of standard monomials
        let mut rhs_el: PBWElement<K> = PBWElement::zero();
        for (w, c) in rhs.terms() {
            if w.letters().windows(2).any(|p| p[0] > p[1]) {
                return Err(SpecError::Validation(format!(
                    "right side of {rel:?} must use standard monomials (nondecreasing generators)"
                )));
            }
            let mut exps = vec![0u32; g];
            for &l in w.letters() {
                exps[l] += 1;
            }
            rhs_el = rhs_el.add(
                field,
                &PBWElement::monomial(field, Mono::from_exponents(exps), c.clone()),
            );
        }
        let lead = Mono::gen(g, i).mul(&Mono::gen(g, j));
        let swap = rhs_el.coeff(&lead).cloned().unwrap_or_else(|| field.zero());
        let tail = rhs_el.sub(field, &PBWElement::monomial(field, lead, swap.clone()));
        spec.set_rule(j, i, swap, tail)
            .map_err(|e| SpecError::Validation(format!("in {rel:?}: {e}")))?;
    }
    Ok(spec)
}

/// Builds the presentation of a `kind = "presentation"` section.
pub fn build_presentation<K: ValuedField>(
    field: &K,
    section: &AlgebraSection,
) -> Result<Presentation<K>, SpecError> {
    let alg = FreeAlgebra::new(field.clone(), section.generators.clone())
        .map_err(|e| SpecError::Validation(e.to_string()))?;
    let mut relations = Vec::new();
    for rel in &section.relations {
        relations.push(alg.parse(rel).map_err(|e| expr_err(rel, e))?);
    }
    Presentation::new(alg, relations).map_err(|e| SpecError::Validation(e.to_string()))
}

/// Builds Lie structure constants from a `[lie]` section with bracket
/// equations `[a,b] = linear combination of basis names`.
pub fn build_lie<K: ValuedField>(field: &K, section: &LieSection) -> Result<LieData<K>, SpecError> {
    let g = section.basis.len();
    let alg = FreeAlgebra::new(field.clone(), section.basis.clone())
        .map_err(|e| SpecError::Validation(e.to_string()))?;
    let mut constants = vec![vec![vec![field.zero(); g]; g]; g];
    let mut seen = vec![false; g * g];
    for b in &section.brackets {
        let rest = b.trim_start();
        let Some(rest) = rest.strip_prefix('[') else {
            return Err(SpecError::Validation(format!(
                "bracket {b:?} must look like \"[a,b] = ...\""
            )));
        };
        let Some((pair, rhs)) = rest.split_once(']') else {
            return Err(SpecError::Validation(format!("missing ']' in {b:?}")));
        };
        let Some((an, bn)) = pair.split_once(',') else {
            return Err(SpecError::Validation(format!(
                "bracket {b:?} must name two basis elements"
            )));
        };
        let idx = |name: &str| {
            section
                .basis
                .iter()
                .position(|x| x == name.trim())
                .ok_or_else(|| {
                    SpecError::Validation(format!("unknown basis element {:?}", name.trim()))
                })
        };
        let (i, j) = (idx(an)?, idx(bn)?);
        if i == j {
            return Err(SpecError::Validation(format!(
                "bracket {b:?} repeats a basis element; [x,x] = 0 is implicit"
            )));
        }
        let Some(rhs) = rhs.trim_start().strip_prefix('=') else {
            return Err(SpecError::Validation(format!("missing '=' in {b:?}")));
        };
        if seen[i * g + j] || seen[j * g + i] {
            return Err(SpecError::Validation(format!(
                "duplicate bracket for the pair in {b:?}"
            )));
        }
        seen[i * g + j] = true;
        seen[j * g + i] = true;
        let p = alg.parse(rhs).map_err(|e| expr_err(b, e))?;
        for (w, c) in p.terms() {
            if w.len() != 1 {
                return Err(SpecError::Validation(format!(
                    "right side of {b:?} must be a linear combination of basis elements"
                )));
            }
            let k = w.letters()[0];
            constants[i][j][k] = c.clone();
            constants[j][i][k] = field.neg(c);
        }
    }
    LieData::new(field, section.basis.clone(), constants)
        .map_err(|e| SpecError::Validation(e.to_string()))
}

/// JSON form of Lie structure constants: `constants[i][j]` is the
/// coefficient list of `[x_i, x_j]` (1-based in the mathematics, nested
/// 0-based arrays in the JSON). The upper triangle is sufficient; rows may
/// be truncated and lists may be empty, and antisymmetry completes them.
#[derive(Deserialize)]
struct LieJson {
    format_version: Option<u32>,
    dim: usize,
    basis: Option<Vec<String>>,
    constants: Vec<Vec<Vec<String>>>,
}

pub fn parse_lie_json<K: ValuedField>(field: &K, src: &str) -> Result<LieData<K>, SpecError> {
    let raw: LieJson =
        serde_json::from_str(src).map_err(|e| SpecError::Validation(format!("bad JSON: {e}")))?;
    if let Some(v) = raw.format_version {
        if v != crate::FORMAT_VERSION {
            return Err(SpecError::Validation(format!(
                "unsupported format_version {v}"
            )));
        }
    }
    let g = raw.dim;
    if g == 0 {
        return Err(SpecError::Validation("dim must be positive".into()));
    }
    let basis = match raw.basis {
        Some(b) => {
            if b.len() != g {
                return Err(SpecError::Validation("basis length must match dim".into()));
            }
            b
        }
        None => (1..=g).map(|i| format!("x{i}")).collect(),
    };
    if raw.constants.len() > g || raw.constants.iter().any(|r| r.len() > g) {
        return Err(SpecError::Validation(
            "constants array larger than dim x dim".into(),
        ));
    }
    // parse given entries; None = omitted
    let mut given: Vec<Vec<Option<Vec<K::Elem>>>> = vec![vec![None; g]; g];
    for (i, row) in raw.constants.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            if entry.is_empty() {
                continue;
            }
            if entry.len() != g {
                return Err(SpecError::Validation(format!(
                    "constants[{i}][{j}] must have {g} entries"
                )));
            }
            let parsed: Result<Vec<K::Elem>, SpecError> =
                entry.iter().map(|s| parse_scalar(field, s)).collect();
            given[i][j] = Some(parsed?);
        }
    }
    let zero_row = vec![field.zero(); g];
    let mut constants = vec![vec![zero_row.clone(); g]; g];
    for i in 0..g {
        for j in 0..g {
            match (&given[i][j], &given[j][i]) {
                (Some(v), _) => constants[i][j] = v.clone(),
                (None, Some(w)) => {
                    constants[i][j] = w.iter().map(|c| field.neg(c)).collect();
                }
                (None, None) => {}
            }
        }
    }
    LieData::new(field, basis, constants).map_err(|e| SpecError::Validation(e.to_string()))
}

/// How a residue field re-enters the spec-file format: a bare residue
/// field carries no surjective Z-valuation, so a rewrite system over it is
/// embedded as the constants of a rational function field with the t-adic
/// valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidueEmbedding {
    /// Residue field `F_q`, embedded in `F_q(t)`.
    PrimeField(u64),
    /// Residue field `Q`, embedded in `Q(t)`.
    Rationals,
}

/// Renders an algebra-spec file for a rewrite system over a residue field.
pub fn render_residue_pbw_spec<F: Field>(
    embedding: &ResidueEmbedding,
    spec: &PBWSpec<F>,
) -> String {
    let mut out = String::new();
    out.push_str("format_version = 1\n\n[field]\nkind = \"rational_functions\"\n");
    out.push_str("valuation = \"t-adic\"\n");
    if let ResidueEmbedding::PrimeField(q) = embedding {
        out.push_str(&format!("q = {q}\n"));
    }
    out.push_str("\n[algebra]\nkind = \"pbw\"\n");
    let quoted: Vec<String> = spec
        .gen_names()
        .iter()
        .map(|n| format!("\"{n}\""))
        .collect();
    out.push_str(&format!("generators = [{}]\n", quoted.join(", ")));
    let field = spec.field();
    let mut relations = Vec::new();
    for j in 0..spec.arity() {
        for i in 0..j {
            let rule = spec.rule(j, i);
            if field.is_one(&rule.swap) && rule.tail.is_zero() {
                continue; // commuting pairs are the default
            }
            let lead = Mono::gen(spec.arity(), i).mul(&Mono::gen(spec.arity(), j));
            let rhs = rule
                .tail
                .add(field, &PBWElement::monomial(field, lead, rule.swap.clone()));
            relations.push(format!(
                "\"{}*{} = {}\"",
                spec.gen_names()[j],
                spec.gen_names()[i],
                spec.format(&rhs)
            ));
        }
    }
    out.push_str(&format!("relations = [{}]\n", relations.join(", ")));
    out
}

/// Parses lattice vectors given as JSON arrays of coefficient strings.
pub fn parse_vectors<K: ValuedField>(
    field: &K,
    src: &serde_json::Value,
) -> Result<Vec<Vec<K::Elem>>, SpecError> {
    let rows = src
        .as_array()
        .ok_or_else(|| SpecError::Validation("vectors must be a JSON array".into()))?;
    let mut out = Vec::new();
    for row in rows {
        let items = row.as_array().ok_or_else(|| {
            SpecError::Validation("each vector must be a JSON array of strings".into())
        })?;
        let mut v = Vec::new();
        for it in items {
            let s = it.as_str().ok_or_else(|| {
                SpecError::Validation("vector entries must be coefficient strings".into())
            })?;
            v.push(parse_scalar(field, s)?);
        }
        out.push(v);
    }
    Ok(out)
}

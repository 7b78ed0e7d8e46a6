//! Free-algebra engine: noncommutative polynomials over an exact field,
//! homogeneous components, and bounded-degree linear algebra on two-sided
//! ideals (degreewise ideal spans and Hilbert functions).
//!
//! None of this computes Groebner bases. For homogeneous ideals the span of
//! the degree-n multiples `w1 * g * w2` is exactly the degree-n part of the
//! two-sided ideal, because two-sided multiples of homogeneous generators
//! cannot cancel down from higher degree.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::field::Field;
use crate::parser::{self, ParseError};
use crate::util;

/// Word in the free monoid on the generators; the empty word is 1.
#[derive(Clone, PartialEq, Eq, Debug, Hash, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn single(i: usize) -> Self {
        Word(vec![i])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, rhs: &Word) -> Word {
        let mut out = Vec::with_capacity(self.len() + rhs.len());
        out.extend_from_slice(&self.0);
        out.extend_from_slice(&rhs.0);
        Word(out)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree-lexicographic order: shorter words first, then lexicographic
/// by generator index.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NcError {
    #[error("operands belong to different algebras (arity {0} vs {1})")]
    FieldMismatch(usize, usize),
    #[error("ideal generator {0} is not homogeneous")]
    NonHomogeneousGenerator(usize),
    #[error("presentation is not homogeneous")]
    NonHomogeneousPresentation,
    #[error("zero relation at index {0}")]
    ZeroRelation(usize),
    #[error("relation at index {0} is a nonzero constant and presents the zero ring")]
    ConstantRelation(usize),
    #[error("bad generator name {0:?}")]
    BadGeneratorName(String),
}

/// Noncommutative polynomial: finite word-to-coefficient map with no zero
/// coefficients stored, so equality is map equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreePoly<F: Field> {
    arity: usize,
    terms: BTreeMap<Word, F::Elem>,
}

impl<F: Field> FreePoly<F> {
    pub fn zero(arity: usize) -> Self {
        FreePoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Option<&F::Elem> {
        self.terms.get(w)
    }

    /// Total degree (length of the longest word); `None` for 0.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// Smallest word with nonzero coefficient, in deglex order.
    pub fn leading_word(&self) -> Option<(&Word, &F::Elem)> {
        self.terms.iter().next()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut lens = self.terms.keys().map(Word::len);
        match lens.next() {
            None => true,
            Some(first) => lens.all(|l| l == first),
        }
    }

    /// The value of a scalar polynomial (constant multiple of the empty
    /// word); `None` if any generator occurs.
    pub fn as_scalar(&self, field: &F) -> Option<F::Elem> {
        match self.terms.len() {
            0 => Some(field.zero()),
            1 => {
                let (w, c) = self.terms.iter().next().expect("one term");
                w.is_empty().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, field: &F, w: Word, c: F::Elem) {
        if field.is_zero(&c) {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = field.add(e.get(), &c);
                if field.is_zero(&s) {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }
}

/// The free algebra on named generators over a fixed field; all polynomial
/// operations go through it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeAlgebra<F: Field> {
    field: F,
    gens: Vec<String>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl<F: Field> FreeAlgebra<F> {
    pub fn new(field: F, gens: Vec<String>) -> Result<Self, NcError> {
        for (i, g) in gens.iter().enumerate() {
            if !valid_name(g) || field.symbol(g).is_some() {
                return Err(NcError::BadGeneratorName(g.clone()));
            }
            if gens[..i].contains(g) {
                return Err(NcError::BadGeneratorName(g.clone()));
            }
        }
        Ok(FreeAlgebra { field, gens })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gens
    }

    pub fn zero(&self) -> FreePoly<F> {
        FreePoly::zero(self.arity())
    }

    pub fn one(&self) -> FreePoly<F> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> FreePoly<F> {
        self.monomial(Word::empty(), c)
    }

    pub fn gen(&self, i: usize) -> FreePoly<F> {
        assert!(i < self.arity(), "generator index out of range");
        self.monomial(Word::single(i), self.field.one())
    }

    pub fn monomial(&self, w: Word, c: F::Elem) -> FreePoly<F> {
        let mut p = self.zero();
        p.add_term(&self.field, w, c);
        p
    }

    fn check(&self, p: &FreePoly<F>) -> Result<(), NcError> {
        if p.arity != self.arity() {
            return Err(NcError::FieldMismatch(self.arity(), p.arity));
        }
        Ok(())
    }

    pub fn add(&self, a: &FreePoly<F>, b: &FreePoly<F>) -> Result<FreePoly<F>, NcError> {
        self.check(a)?;
        self.check(b)?;
        let mut out = a.clone();
        for (w, c) in &b.terms {
            out.add_term(&self.field, w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self, a: &FreePoly<F>) -> FreePoly<F> {
        let mut out = FreePoly::zero(a.arity);
        for (w, c) in &a.terms {
            out.terms.insert(w.clone(), self.field.neg(c));
        }
        out
    }

    pub fn sub(&self, a: &FreePoly<F>, b: &FreePoly<F>) -> Result<FreePoly<F>, NcError> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, c: &F::Elem, a: &FreePoly<F>) -> FreePoly<F> {
        let mut out = FreePoly::zero(a.arity);
        for (w, k) in &a.terms {
            let s = self.field.mul(c, k);
            if !self.field.is_zero(&s) {
                out.terms.insert(w.clone(), s);
            }
        }
        out
    }

    /// Free-algebra product; words concatenate.
    pub fn mul(&self, a: &FreePoly<F>, b: &FreePoly<F>) -> Result<FreePoly<F>, NcError> {
        self.check(a)?;
        self.check(b)?;
        let mut out = self.zero();
        for (wa, ca) in &a.terms {
            for (wb, cb) in &b.terms {
                out.add_term(&self.field, wa.concat(wb), self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    /// Sum of the terms of `f` whose words have length exactly `n`.
    pub fn homogeneous_component(&self, f: &FreePoly<F>, n: usize) -> FreePoly<F> {
        let mut out = FreePoly::zero(f.arity);
        for (w, c) in &f.terms {
            if w.len() == n {
                out.terms.insert(w.clone(), c.clone());
            }
        }
        out
    }

    /// Top-degree homogeneous component of a polynomial.
    pub fn leading_component(&self, f: &FreePoly<F>) -> FreePoly<F> {
        match f.degree() {
            None => FreePoly::zero(f.arity),
            Some(d) => self.homogeneous_component(f, d),
        }
    }

    pub fn parse(&self, src: &str) -> Result<FreePoly<F>, ParseError> {
        parser::parse_poly(src, self)
    }

    /// Canonical text form in the expression grammar; highest degree first.
    pub fn format(&self, p: &FreePoly<F>) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (w, c) in p.terms.iter().rev() {
            let (neg, abs) = match self.field.sign_split(c) {
                Some((neg, abs)) => (neg, abs),
                None => (false, c.clone()),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.format_word(w);
            if w.is_empty() {
                out.push_str(&self.coeff_string(&abs));
            } else if self.field.is_one(&abs) {
                out.push_str(&mono);
            } else {
                out.push_str(&self.coeff_string(&abs));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    fn coeff_string(&self, c: &F::Elem) -> String {
        let s = self.field.format(c);
        if s.len() > 1 && s[1..].contains(['+', '-']) {
            format!("({s})")
        } else {
            s
        }
    }

    /// Word as a product of named generators with powers for consecutive
    /// repeats, e.g. `x*y^2*x`.
    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        let mut run: Option<(usize, usize)> = None;
        let flush = |out: &mut String, run: Option<(usize, usize)>| {
            if let Some((g, k)) = run {
                if !out.is_empty() {
                    out.push('*');
                }
                out.push_str(&self.gens[g]);
                if k > 1 {
                    out.push_str(&format!("^{k}"));
                }
            }
        };
        for &g in w.letters() {
            match run {
                Some((g0, k)) if g0 == g => run = Some((g0, k + 1)),
                _ => {
                    flush(&mut out, run);
                    run = Some((g, 1));
                }
            }
        }
        flush(&mut out, run);
        out
    }

    pub fn words_of_length(&self, n: usize) -> Vec<Word> {
        let a = self.arity();
        if n == 0 {
            return vec![Word::empty()];
        }
        if a == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut w = vec![0usize; n];
        loop {
            out.push(Word::from_letters(w.clone()));
            // increment as a base-a counter
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                w[i] += 1;
                if w[i] < a {
                    break;
                }
                w[i] = 0;
            }
        }
    }

    /// Rank and reduced echelon basis of the degree-`n` slice of the
    /// two-sided ideal generated by homogeneous `gens`.
    pub fn ideal_component_rank(
        &self,
        gens: &[FreePoly<F>],
        n: usize,
    ) -> Result<(usize, Vec<FreePoly<F>>), NcError> {
        for (i, g) in gens.iter().enumerate() {
            self.check(g)?;
            if !g.is_homogeneous() || g.is_zero() {
                return Err(NcError::NonHomogeneousGenerator(i));
            }
        }
        let mut ech = Echelon::new(self);
        for g in gens {
            let d = g.degree().expect("nonzero generator");
            if d > n {
                continue;
            }
            for left_len in 0..=(n - d) {
                let right_len = n - d - left_len;
                for w1 in self.words_of_length(left_len) {
                    for w2 in self.words_of_length(right_len) {
                        let mut row = self.zero();
                        for (m, c) in &g.terms {
                            row.terms.insert(w1.concat(m).concat(&w2), c.clone());
                        }
                        ech.insert(row);
                    }
                }
            }
        }
        Ok(ech.into_basis())
    }
}

/// Sparse reduced row-echelon form over the word space; pivots are the
/// deglex-smallest words.
struct Echelon<'a, F: Field> {
    algebra: &'a FreeAlgebra<F>,
    rows: BTreeMap<Word, FreePoly<F>>,
}

impl<'a, F: Field> Echelon<'a, F> {
    fn new(algebra: &'a FreeAlgebra<F>) -> Self {
        Echelon {
            algebra,
            rows: BTreeMap::new(),
        }
    }

    /// Reduces `row` against the current basis and inserts the remainder if
    /// nonzero. Returns whether the rank grew.
    fn insert(&mut self, mut row: FreePoly<F>) -> bool {
        let field = self.algebra.field();
        loop {
            let Some((w, c)) = row.leading_word().map(|(w, c)| (w.clone(), c.clone())) else {
                return false;
            };
            let Some(pivot_row) = self.rows.get(&w) else {
                // new pivot: normalize, then eliminate it from older rows
                let ci = field.inv(&c).expect("leading coefficient is nonzero");
                row = self.algebra.scale(&ci, &row);
                let updates: Vec<Word> = self
                    .rows
                    .iter()
                    .filter(|(_, r)| r.terms.contains_key(&w))
                    .map(|(p, _)| p.clone())
                    .collect();
                for p in updates {
                    let r = self.rows.get(&p).expect("pivot row exists");
                    let k = r.terms.get(&w).expect("checked above").clone();
                    let reduced = self
                        .algebra
                        .sub(r, &self.algebra.scale(&k, &row))
                        .expect("same algebra");
                    self.rows.insert(p, reduced);
                }
                self.rows.insert(w, row);
                return true;
            };
            let k = c;
            row = self
                .algebra
                .sub(&row, &self.algebra.scale(&k, pivot_row))
                .expect("same algebra");
        }
    }

    fn into_basis(self) -> (usize, Vec<FreePoly<F>>) {
        let rank = self.rows.len();
        (rank, self.rows.into_values().collect())
    }
}

/// Generators-and-relations data for an algebra presented as a quotient of
/// the free algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation<F: Field> {
    algebra: FreeAlgebra<F>,
    relations: Vec<FreePoly<F>>,
    homogeneous: bool,
}

impl<F: Field> Presentation<F> {
    pub fn new(algebra: FreeAlgebra<F>, relations: Vec<FreePoly<F>>) -> Result<Self, NcError> {
        for (i, r) in relations.iter().enumerate() {
            if r.is_zero() {
                return Err(NcError::ZeroRelation(i));
            }
            // a nonzero constant relation presents the zero ring and would
            // break dim_0 = 1
            if r.degree() == Some(0) {
                return Err(NcError::ConstantRelation(i));
            }
            if r.arity() != algebra.arity() {
                return Err(NcError::FieldMismatch(algebra.arity(), r.arity()));
            }
        }
        let homogeneous = relations.iter().all(FreePoly::is_homogeneous);
        Ok(Presentation {
            algebra,
            relations,
            homogeneous,
        })
    }

    pub fn algebra(&self) -> &FreeAlgebra<F> {
        &self.algebra
    }

    pub fn relations(&self) -> &[FreePoly<F>] {
        &self.relations
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    /// Dimensions of the graded quotient algebra in degrees `0..=max_degree`:
    /// `dim_n = arity^n - rank` of the degree-n ideal slice.
    pub fn hilbert_graded(&self, max_degree: usize) -> Result<Vec<u64>, NcError> {
        if !self.homogeneous {
            return Err(NcError::NonHomogeneousPresentation);
        }
        let dims = util::parallel_map(max_degree + 1, |n| {
            let (rank, _) = self
                .algebra
                .ideal_component_rank(&self.relations, n)
                .expect("relations validated at construction");
            let total = (self.algebra.arity() as u64)
                .checked_pow(n as u32)
                .expect("word space dimension fits in u64");
            total - rank as u64
        });
        Ok(dims)
    }
}

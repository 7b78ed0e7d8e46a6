//! PBW algebras as confluent rewriting systems on ordered monomials.
//!
//! A spec fixes ordered generators `x_1 < ... < x_g` and, for every pair
//! `j > i`, a rule `x_j * x_i -> c * x_i x_j + tail` with `c` nonzero and
//! every tail monomial deglex-smaller than `x_i x_j` of total degree at
//! most 2. Rewriting an out-of-order adjacent pair strictly decreases the
//! deglex order on words, so normal forms terminate; whether the standard
//! monomials really form a basis is decided by `confluence_check`, not
//! assumed. Degrees, filtrations and gradations are always by total degree
//! of standard monomials.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::field::Field;
use crate::ncpoly::{FreeAlgebra, FreePoly, NcError, Word};

/// Exponent vector of a standard monomial `x_1^{a_1} ... x_g^{a_g}`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Mono(Vec<u32>);

impl Mono {
    pub fn one(arity: usize) -> Self {
        Mono(vec![0; arity])
    }

    pub fn gen(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Mono(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Mono(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, rhs: &Mono) -> Mono {
        Mono(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    /// The standard word `x_1^{a_1} ... x_g^{a_g}` (letters ascending).
    pub fn to_word(&self) -> Word {
        let mut letters = Vec::with_capacity(self.degree() as usize);
        for (i, &e) in self.0.iter().enumerate() {
            letters.extend(std::iter::repeat_n(i, e as usize));
        }
        Word::from_letters(letters)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Deglex on exponent vectors: total degree first, ties broken by the
/// exponent of the largest generator, so `x^2 < x*y < y^2` for `x < y`.
impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

/// Element of a PBW algebra in the standard-monomial basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PBWElement<F: Field> {
    terms: BTreeMap<Mono, F::Elem>,
}

impl<F: Field> PBWElement<F> {
    pub fn zero() -> Self {
        PBWElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: &F, m: Mono, c: F::Elem) -> Self {
        let mut out = Self::zero();
        out.add_term(field, m, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Option<&F::Elem> {
        self.terms.get(m)
    }

    /// Total degree of the element; `None` for 0.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(Mono::degree).max()
    }

    pub fn add(&self, field: &F, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(field, m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self, field: &F) -> Self {
        PBWElement {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, field: &F, rhs: &Self) -> Self {
        self.add(field, &rhs.neg(field))
    }

    pub fn scale(&self, field: &F, c: &F::Elem) -> Self {
        let mut out = Self::zero();
        for (m, k) in &self.terms {
            let s = field.mul(c, k);
            if !field.is_zero(&s) {
                out.terms.insert(m.clone(), s);
            }
        }
        out
    }

    pub fn map_coeffs<G: Field>(
        &self,
        target: &G,
        mut f: impl FnMut(&F::Elem) -> G::Elem,
    ) -> PBWElement<G> {
        let mut out = PBWElement::zero();
        for (m, c) in &self.terms {
            let v = f(c);
            if !target.is_zero(&v) {
                out.terms.insert(m.clone(), v);
            }
        }
        out
    }

    fn add_term(&mut self, field: &F, m: Mono, c: F::Elem) {
        if field.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
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

/// The rewrite target for one out-of-order pair: `x_j x_i = swap * x_i x_j + tail`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule<F: Field> {
    pub swap: F::Elem,
    pub tail: PBWElement<F>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PbwError {
    #[error("at least one generator is required")]
    InvalidArity,
    #[error("rule for pair ({j}, {i}) must have a nonzero coefficient on x_{i}*x_{j}")]
    ZeroLeadingCoeff { j: usize, i: usize },
    #[error("tail of rule ({j}, {i}) contains a monomial that is not deglex-smaller than x_{i}*x_{j} or has degree > 2")]
    BadTail { j: usize, i: usize },
    #[error("structure constants are not antisymmetric at ({i}, {j}, {k})")]
    NotAntisymmetric { i: usize, j: usize, k: usize },
    #[error("element does not live in this algebra (arity {spec} vs {elem})")]
    SpecMismatch { spec: usize, elem: usize },
    #[error(transparent)]
    Nc(#[from] NcError),
}

/// Outcome of the diamond-lemma overlap check.
#[derive(Clone, PartialEq, Debug)]
pub enum Confluence<F: Field> {
    Pass,
    Fail {
        /// Generator indices `(k, j, i)` of the overlap word `x_k x_j x_i`.
        witness: (usize, usize, usize),
        /// Normal form after rewriting the left pair `(x_k, x_j)` first.
        left: PBWElement<F>,
        /// Normal form after rewriting the right pair `(x_j, x_i)` first.
        right: PBWElement<F>,
    },
}

impl<F: Field> Confluence<F> {
    pub fn passed(&self) -> bool {
        matches!(self, Confluence::Pass)
    }
}

/// Ordered generators with one rewrite rule per out-of-order pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PBWSpec<F: Field> {
    field: F,
    gens: Vec<String>,
    // rule for pair (j, i), j > i, at triangular index j*(j-1)/2 + i
    rules: Vec<Rule<F>>,
}

impl<F: Field> PBWSpec<F> {
    /// The commutative template: every pair swaps with coefficient 1 and no
    /// tail. Rules are then adjusted with `set_rule`.
    pub fn commutative(field: F, gens: Vec<String>) -> Result<Self, PbwError> {
        if gens.is_empty() {
            return Err(PbwError::InvalidArity);
        }
        // reuse the generator-name validation of the free algebra
        FreeAlgebra::new(field.clone(), gens.clone())?;
        let g = gens.len();
        let rules = (0..g * (g - 1) / 2)
            .map(|_| Rule {
                swap: field.one(),
                tail: PBWElement::zero(),
            })
            .collect();
        Ok(PBWSpec { field, gens, rules })
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

    /// The free algebra this spec rewrites over.
    pub fn free_algebra(&self) -> FreeAlgebra<F> {
        FreeAlgebra::new(self.field.clone(), self.gens.clone())
            .expect("names validated at construction")
    }

    fn pair_index(&self, j: usize, i: usize) -> usize {
        debug_assert!(j > i && j < self.arity());
        j * (j - 1) / 2 + i
    }

    pub fn rule(&self, j: usize, i: usize) -> &Rule<F> {
        &self.rules[self.pair_index(j, i)]
    }

    /// Installs `x_j x_i = swap * x_i x_j + tail`, enforcing the
    /// termination shape of the tail.
    pub fn set_rule(
        &mut self,
        j: usize,
        i: usize,
        swap: F::Elem,
        tail: PBWElement<F>,
    ) -> Result<(), PbwError> {
        assert!(j > i && j < self.arity(), "rule index out of range");
        if self.field.is_zero(&swap) {
            return Err(PbwError::ZeroLeadingCoeff { j, i });
        }
        let lead = Mono::gen(self.arity(), i).mul(&Mono::gen(self.arity(), j));
        for (m, _) in tail.terms() {
            if m.arity() != self.arity() || *m >= lead || m.degree() > 2 {
                return Err(PbwError::BadTail { j, i });
            }
        }
        let idx = self.pair_index(j, i);
        self.rules[idx] = Rule { swap, tail };
        Ok(())
    }

    fn check_elem(&self, a: &PBWElement<F>) -> Result<(), PbwError> {
        for (m, _) in a.terms() {
            if m.arity() != self.arity() {
                return Err(PbwError::SpecMismatch {
                    spec: self.arity(),
                    elem: m.arity(),
                });
            }
        }
        Ok(())
    }

    /// Rewrites a free polynomial to its normal form on standard monomials.
    /// Terminates for every input by the tail-order condition; linear over
    /// the field and the identity on standard monomials.
    pub fn normal_form(&self, f: &FreePoly<F>) -> Result<PBWElement<F>, PbwError> {
        if f.arity() != self.arity() {
            return Err(PbwError::SpecMismatch {
                spec: self.arity(),
                elem: f.arity(),
            });
        }
        let mut work: BTreeMap<Word, F::Elem> = BTreeMap::new();
        for (w, c) in f.terms() {
            work.insert(w.clone(), c.clone());
        }
        Ok(self.rewrite(work))
    }

    fn rewrite(&self, mut work: BTreeMap<Word, F::Elem>) -> PBWElement<F> {
        let field = &self.field;
        let mut result = PBWElement::zero();
        let push = |work: &mut BTreeMap<Word, F::Elem>, w: Word, c: F::Elem| {
            if field.is_zero(&c) {
                return;
            }
            match work.entry(w) {
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
        };
        while let Some((w, c)) = work.pop_last() {
            let letters = w.letters();
            // leftmost adjacent out-of-order pair
            let redex = letters.windows(2).position(|p| p[0] > p[1]);
            match redex {
                None => {
                    let mut exps = vec![0u32; self.arity()];
                    for &l in letters {
                        exps[l] += 1;
                    }
                    result.add_term(field, Mono::from_exponents(exps), c);
                }
                Some(k) => {
                    let (j, i) = (letters[k], letters[k + 1]);
                    let rule = self.rule(j, i);
                    let prefix = &letters[..k];
                    let suffix = &letters[k + 2..];
                    let glue = |mid: &[usize]| {
                        let mut v = Vec::with_capacity(letters.len() + 1);
                        v.extend_from_slice(prefix);
                        v.extend_from_slice(mid);
                        v.extend_from_slice(suffix);
                        Word::from_letters(v)
                    };
                    push(&mut work, glue(&[i, j]), field.mul(&c, &rule.swap));
                    for (m, tc) in rule.tail.terms() {
                        push(&mut work, glue(m.to_word().letters()), field.mul(&c, tc));
                    }
                }
            }
        }
        result
    }

    /// Product in the quotient algebra: concatenate standard words, then
    /// rewrite to normal form.
    pub fn multiply(
        &self,
        a: &PBWElement<F>,
        b: &PBWElement<F>,
    ) -> Result<PBWElement<F>, PbwError> {
        self.check_elem(a)?;
        self.check_elem(b)?;
        let field = &self.field;
        let mut work: BTreeMap<Word, F::Elem> = BTreeMap::new();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let w = ma.to_word().concat(&mb.to_word());
                let c = field.mul(ca, cb);
                if field.is_zero(&c) {
                    continue;
                }
                match work.entry(w) {
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
        Ok(self.rewrite(work))
    }

    /// Checks every length-3 overlap `x_k x_j x_i` (k > j > i) by rewriting
    /// the left and the right pair first and comparing normal forms. For
    /// the admitted rule shape this is the complete overlap set.
    pub fn confluence_check(&self) -> Confluence<F> {
        let field = &self.field;
        let g = self.arity();
        for k in 0..g {
            for j in 0..k {
                for i in 0..j {
                    // left: x_k x_j -> swap_kj x_j x_k + tail_kj, times x_i
                    let rule_kj = self.rule(k, j);
                    let mut left: BTreeMap<Word, F::Elem> = BTreeMap::new();
                    left.insert(Word::from_letters(vec![j, k, i]), rule_kj.swap.clone());
                    for (m, c) in rule_kj.tail.terms() {
                        let w = m.to_word().concat(&Word::single(i));
                        merge(field, &mut left, w, c.clone());
                    }
                    // right: x_k times (x_j x_i -> swap_ji x_i x_j + tail_ji)
                    let rule_ji = self.rule(j, i);
                    let mut right: BTreeMap<Word, F::Elem> = BTreeMap::new();
                    right.insert(Word::from_letters(vec![k, i, j]), rule_ji.swap.clone());
                    for (m, c) in rule_ji.tail.terms() {
                        let w = Word::single(k).concat(&m.to_word());
                        merge(field, &mut right, w, c.clone());
                    }
                    let nf_left = self.rewrite(left);
                    let nf_right = self.rewrite(right);
                    if nf_left != nf_right {
                        return Confluence::Fail {
                            witness: (k, j, i),
                            left: nf_left,
                            right: nf_right,
                        };
                    }
                }
            }
        }
        Confluence::Pass
    }

    /// `dim F_n A` for `n = 0..=max_degree`: the number of standard
    /// monomials of total degree at most n, i.e. `C(n + g, g)`.
    pub fn filtered_dims(&self, max_degree: usize) -> Vec<u64> {
        let g = self.arity() as u128;
        (0..=max_degree as u128)
            .map(|n| {
                let mut acc: u128 = 1;
                for k in 1..=g {
                    acc = acc * (n + k) / k;
                }
                u64::try_from(acc).expect("filtered dimension fits in u64")
            })
            .collect()
    }

    /// The defining equations read as relations of the free algebra:
    /// `x_j x_i - swap * x_i x_j - tail` for every pair.
    pub fn defining_relations(&self) -> Vec<FreePoly<F>> {
        let alg = self.free_algebra();
        let field = &self.field;
        let mut out = Vec::new();
        for j in 0..self.arity() {
            for i in 0..j {
                let rule = self.rule(j, i);
                let mut rel = alg.monomial(Word::from_letters(vec![j, i]), field.one());
                rel = alg
                    .sub(
                        &rel,
                        &alg.monomial(Word::from_letters(vec![i, j]), rule.swap.clone()),
                    )
                    .expect("same algebra");
                for (m, c) in rule.tail.terms() {
                    rel = alg
                        .sub(&rel, &alg.monomial(m.to_word(), c.clone()))
                        .expect("same algebra");
                }
                out.push(rel);
            }
        }
        out
    }

    /// Formats an element in the expression grammar, highest degree first.
    pub fn format(&self, a: &PBWElement<F>) -> String {
        let alg = self.free_algebra();
        let mut p = alg.zero();
        for (m, c) in a.terms() {
            p = alg
                .add(&p, &alg.monomial(m.to_word(), c.clone()))
                .expect("same algebra");
        }
        alg.format(&p)
    }

    /// Parses an expression and rewrites it into the standard basis.
    pub fn parse(&self, src: &str) -> Result<PBWElement<F>, PbwError> {
        let alg = self.free_algebra();
        let p = alg
            .parse(src)
            .map_err(|e| NcError::BadGeneratorName(e.to_string()))?;
        self.normal_form(&p)
    }
}

fn merge<F: Field>(field: &F, map: &mut BTreeMap<Word, F::Elem>, w: Word, c: F::Elem) {
    if field.is_zero(&c) {
        return;
    }
    match map.entry(w) {
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

/// The Weyl algebra A_n: generators `x_1..x_n, D_1..D_n` with
/// `D_i x_i = x_i D_i + 1` and all other pairs commuting.
pub fn make_weyl<F: Field>(n: usize, field: F) -> Result<PBWSpec<F>, PbwError> {
    if n == 0 {
        return Err(PbwError::InvalidArity);
    }
    let gens: Vec<String> = if n == 1 {
        vec!["x".to_string(), "D".to_string()]
    } else {
        (1..=n)
            .map(|i| format!("x{i}"))
            .chain((1..=n).map(|i| format!("D{i}")))
            .collect()
    };
    let one = field.one();
    let mut spec = PBWSpec::commutative(field.clone(), gens)?;
    for i in 0..n {
        let tail = PBWElement::monomial(&field, Mono::one(2 * n), one.clone());
        spec.set_rule(n + i, i, one.clone(), tail)?;
    }
    Ok(spec)
}

/// Enveloping-algebra spec from structure constants:
/// `x_j x_i = x_i x_j + sum_k constants[j][i][k] x_k` for `j > i`.
/// Antisymmetry is enforced here; the Jacobi identity is exactly what
/// `confluence_check` decides afterwards.
pub fn make_enveloping<F: Field>(
    field: F,
    names: Vec<String>,
    constants: &[Vec<Vec<F::Elem>>],
) -> Result<PBWSpec<F>, PbwError> {
    let g = names.len();
    if g == 0 {
        return Err(PbwError::InvalidArity);
    }
    let shape_ok = constants.len() == g
        && constants
            .iter()
            .all(|row| row.len() == g && row.iter().all(|v| v.len() == g));
    if !shape_ok {
        return Err(PbwError::NotAntisymmetric { i: 0, j: 0, k: 0 });
    }
    for i in 0..g {
        for j in 0..g {
            for k in 0..g {
                let lhs = &constants[i][j][k];
                let rhs = field.neg(&constants[j][i][k]);
                if *lhs != rhs {
                    return Err(PbwError::NotAntisymmetric { i, j, k });
                }
            }
        }
    }
    let mut spec = PBWSpec::commutative(field.clone(), names)?;
    for j in 0..g {
        for i in 0..j {
            let mut tail = PBWElement::zero();
            for (k, c) in constants[j][i].iter().enumerate() {
                tail = tail.add(
                    &field,
                    &PBWElement::monomial(&field, Mono::gen(g, k), c.clone()),
                );
            }
            spec.set_rule(j, i, field.one(), tail)?;
        }
    }
    Ok(spec)
}

/// Quantum-plane spec `y x = q * x y` on two generators.
pub fn make_q_plane<F: Field>(field: F, q: F::Elem) -> Result<PBWSpec<F>, PbwError> {
    let mut spec = PBWSpec::commutative(field, vec!["x".to_string(), "y".to_string()])?;
    spec.set_rule(1, 0, q, PBWElement::zero())?;
    Ok(spec)
}

/// Structure constants of sl2 in the basis (e, f, h):
/// `[e,f] = h`, `[h,e] = 2e`, `[h,f] = -2f`.
pub fn sl2_constants<F: Field>(field: &F) -> Vec<Vec<Vec<F::Elem>>> {
    let mut c = vec![vec![vec![field.zero(); 3]; 3]; 3];
    // [e,f] = h
    c[0][1][2] = field.one();
    c[1][0][2] = field.neg(&field.one());
    // [h,e] = 2e
    c[2][0][0] = field.from_int(2);
    c[0][2][0] = field.from_int(-2);
    // [h,f] = -2f
    c[2][1][1] = field.from_int(-2);
    c[1][2][1] = field.from_int(2);
    c
}

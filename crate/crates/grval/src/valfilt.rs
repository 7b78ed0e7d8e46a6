//! The valuation filtration on a PBW algebra whose structure constants lie
//! in the valuation ring: Gauss value function, principal symbols, the
//! Laurent model of the associated graded ring, fraction valuations, and
//! the double-graded compatibility table.
//!
//! The key fact used throughout: the valuation-ring span of the standard
//! monomials is a free module, so the minimum of the coefficient valuations
//! is the value function of the valuation filtration, and reduction of an
//! element is coefficientwise reduction.
//!
//! The base field is assumed central in the algebra, which makes the
//! twist of the Laurent model trivial. Rings of fractions are not modeled
//! as data: the one localization-level quantity exposed is
//! [`GaussContext::fraction_valuation`], the value the extended valuation
//! assigns to a left fraction.

use std::collections::BTreeMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[cfg(test)]
use crate::field::Field;
use crate::pbw::{Confluence, Mono, PBWElement, PBWSpec, PbwError};
use crate::util;
use crate::valued_field::{Val, ValuedField};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GaussError {
    #[error("structure coefficient of rule ({j}, {i}) has negative valuation {v}")]
    NonIntegralCoefficient { j: usize, i: usize, v: i64 },
    #[error("rewrite system is not confluent; overlap at generators ({0}, {1}, {2})")]
    NotConfluent(String, String, String),
    #[error("zero element has no principal symbol")]
    ZeroElement,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("residue product is zero: the reduction has zero divisors")]
    DomainFailure,
    #[error("no reduced rewrite system: a swap coefficient reduces to zero")]
    NoReducedSpec,
    #[error(transparent)]
    Pbw(#[from] PbwError),
}

/// Principal symbol: Laurent degree plus a nonzero residue element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Symbol<K: ValuedField> {
    pub degree: i64,
    pub residue: PBWElement<K::Residue>,
}

/// Finitely supported element of the Laurent model `Abar[t, t^-1]` of the
/// associated graded ring; one residue component per degree.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentGraded<K: ValuedField> {
    components: BTreeMap<i64, PBWElement<K::Residue>>,
}

impl<K: ValuedField> LaurentGraded<K> {
    pub fn zero() -> Self {
        LaurentGraded {
            components: BTreeMap::new(),
        }
    }

    pub fn from_symbol(s: &Symbol<K>) -> Self {
        let mut components = BTreeMap::new();
        components.insert(s.degree, s.residue.clone());
        LaurentGraded { components }
    }

    pub fn component(&self, gamma: i64) -> Option<&PBWElement<K::Residue>> {
        self.components.get(&gamma)
    }

    pub fn components(&self) -> impl Iterator<Item = (&i64, &PBWElement<K::Residue>)> {
        self.components.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, residue_field: &K::Residue, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (gamma, el) in &rhs.components {
            let sum = match out.components.get(gamma) {
                None => el.clone(),
                Some(cur) => cur.add(residue_field, el),
            };
            if sum.is_zero() {
                out.components.remove(gamma);
            } else {
                out.components.insert(*gamma, sum);
            }
        }
        out
    }
}

/// Per-check failure record; polynomials are printed in the expression
/// grammar so they can be re-parsed.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CheckFailure {
    pub check: String,
    pub a: String,
    pub b: String,
    pub expected: String,
    pub got: String,
}

/// Result of the randomized value-function suite.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ValueFunctionReport {
    pub format_version: u32,
    pub field: String,
    pub algebra: String,
    pub checks: u64,
    pub samples: u64,
    pub seed: u64,
    pub height: u64,
    pub max_degree: u32,
    pub failures: Vec<CheckFailure>,
}

/// One bidegree of the double-graded comparison.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DoubleGradedRow {
    pub n: usize,
    pub gamma: i64,
    /// Dimension of the (gamma, n) component of the filtration-graded
    /// Laurent model, counted by enumerating standard monomials.
    pub graded_of_valuation: u64,
    /// Dimension of the (n, gamma) component computed from the filtered
    /// dimension increments of the base algebra.
    pub valuation_of_graded: u64,
    pub equal: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DoubleGradedTable {
    pub gamma_window: (i64, i64),
    pub max_degree: usize,
    pub rows: Vec<DoubleGradedRow>,
    pub all_equal: bool,
}

/// A PBW algebra over a valued field whose structure constants lie in the
/// valuation ring, together with its cached reduction.
#[derive(Clone, Debug)]
pub struct GaussContext<K: ValuedField> {
    field: K,
    spec: PBWSpec<K>,
    reduced: Option<PBWSpec<K::Residue>>,
}

impl<K: ValuedField> GaussContext<K> {
    /// Validates integrality of all structure constants and confluence of
    /// the rewrite system, and caches the reduced system when every swap
    /// coefficient is a unit.
    pub fn new(field: K, spec: PBWSpec<K>) -> Result<Self, GaussError> {
        let g = spec.arity();
        let mut units = true;
        for j in 0..g {
            for i in 0..j {
                let rule = spec.rule(j, i);
                match field.valuation(&rule.swap) {
                    Val::Finite(0) => {}
                    Val::Finite(v) if v > 0 => units = false,
                    Val::Finite(v) => {
                        return Err(GaussError::NonIntegralCoefficient { j, i, v });
                    }
                    Val::Infinity => unreachable!("swap coefficients are nonzero"),
                }
                for (_, c) in rule.tail.terms() {
                    if let Val::Finite(v) = field.valuation(c) {
                        if v < 0 {
                            return Err(GaussError::NonIntegralCoefficient { j, i, v });
                        }
                    }
                }
            }
        }
        if let Confluence::Fail { witness, .. } = spec.confluence_check() {
            let names = spec.gen_names();
            return Err(GaussError::NotConfluent(
                names[witness.0].clone(),
                names[witness.1].clone(),
                names[witness.2].clone(),
            ));
        }
        let reduced = if units {
            let rf = field.residue_field().clone();
            let mut red = PBWSpec::commutative(rf.clone(), spec.gen_names().to_vec())?;
            for j in 0..g {
                for i in 0..j {
                    let rule = spec.rule(j, i);
                    let swap = field
                        .residue(&rule.swap)
                        .expect("unit coefficient has a residue");
                    let tail = rule
                        .tail
                        .map_coeffs(&rf, |c| field.residue(c).expect("integral coefficient"));
                    red.set_rule(j, i, swap, tail)?;
                }
            }
            Some(red)
        } else {
            None
        };
        Ok(GaussContext {
            field,
            spec,
            reduced,
        })
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn spec(&self) -> &PBWSpec<K> {
        &self.spec
    }

    /// The rewrite system over the residue field. Only defined when every
    /// swap coefficient is a unit; otherwise the reduction has zero
    /// divisors and is not a PBW system (residue arithmetic still works
    /// through [`GaussContext::residue_multiply`]).
    pub fn reduced_spec(&self) -> Result<&PBWSpec<K::Residue>, GaussError> {
        self.reduced.as_ref().ok_or(GaussError::NoReducedSpec)
    }

    /// The Gauss value function: minimum coefficient valuation in the
    /// standard basis; infinity exactly for 0.
    pub fn gauss_valuation(&self, a: &PBWElement<K>) -> Val {
        a.terms()
            .map(|(_, c)| self.field.valuation(c))
            .min()
            .unwrap_or(Val::Infinity)
    }

    /// Principal symbol of a nonzero element: degree `-v(a)` and the
    /// reduction of `pi^{-v(a)} * a`, which is nonzero by construction.
    pub fn principal_symbol(&self, a: &PBWElement<K>) -> Result<Symbol<K>, GaussError> {
        let Val::Finite(m) = self.gauss_valuation(a) else {
            return Err(GaussError::ZeroElement);
        };
        let shift = self.field.pi_pow(-m);
        let rf = self.field.residue_field().clone();
        let residue = a.map_coeffs(&rf, |c| {
            self.field
                .residue(&self.field.mul(&shift, c))
                .expect("shifted coefficient is integral")
        });
        debug_assert!(!residue.is_zero());
        Ok(Symbol {
            degree: -m,
            residue,
        })
    }

    /// Product in the reduction: lift to the monomial span of the
    /// valuation ring, multiply there, reduce coefficientwise. Agrees with
    /// multiplication in `reduced_spec` when the latter exists, and is
    /// defined even when it does not.
    pub fn residue_multiply(
        &self,
        a: &PBWElement<K::Residue>,
        b: &PBWElement<K::Residue>,
    ) -> PBWElement<K::Residue> {
        let lift_a = a.map_coeffs(&self.field, |c| self.field.lift(c));
        let lift_b = b.map_coeffs(&self.field, |c| self.field.lift(c));
        let prod = self.spec.multiply(&lift_a, &lift_b).expect("same algebra");
        let rf = self.field.residue_field().clone();
        prod.map_coeffs(&rf, |c| {
            self.field
                .residue(c)
                .expect("product of integral elements is integral")
        })
    }

    /// Symbol product: degrees add, residues multiply in the reduction.
    /// Fails with `DomainFailure` when the residue product vanishes, i.e.
    /// when the reduction has zero divisors.
    pub fn symbol_multiply(&self, s: &Symbol<K>, u: &Symbol<K>) -> Result<Symbol<K>, GaussError> {
        let residue = self.residue_multiply(&s.residue, &u.residue);
        if residue.is_zero() {
            return Err(GaussError::DomainFailure);
        }
        Ok(Symbol {
            degree: s.degree + u.degree,
            residue,
        })
    }

    /// Componentwise product in the Laurent model; zero components are
    /// dropped rather than reported, so this is total.
    pub fn laurent_multiply(&self, a: &LaurentGraded<K>, b: &LaurentGraded<K>) -> LaurentGraded<K> {
        let rf = self.field.residue_field().clone();
        let mut out = LaurentGraded::zero();
        for (ga, ea) in a.components() {
            for (gb, eb) in b.components() {
                let prod = self.residue_multiply(ea, eb);
                if prod.is_zero() {
                    continue;
                }
                let single = {
                    let mut m = BTreeMap::new();
                    m.insert(ga + gb, prod);
                    LaurentGraded { components: m }
                };
                out = out.add(&rf, &single);
            }
        }
        out
    }

    /// Value of the extended valuation at the left fraction `s^{-1} a`.
    pub fn fraction_valuation(
        &self,
        a: &PBWElement<K>,
        s: &PBWElement<K>,
    ) -> Result<Val, GaussError> {
        if s.is_zero() {
            return Err(GaussError::ZeroDenominator);
        }
        let Val::Finite(vs) = self.gauss_valuation(s) else {
            unreachable!("nonzero element has finite valuation")
        };
        Ok(match self.gauss_valuation(a) {
            Val::Infinity => Val::Infinity,
            Val::Finite(va) => Val::Finite(va - vs),
        })
    }

    /// Filtration compatibility in both readings: `v(a) >= -gamma` and
    /// `deg a <= n` versus membership of every coefficient in
    /// `pi^{-gamma} O_v` on monomials of degree `<= n`. Returns whether
    /// the two sides agree.
    pub fn filtration_compatibility(&self, a: &PBWElement<K>, gamma: i64, n: u64) -> bool {
        let lhs = self.gauss_valuation(a) >= Val::Finite(-gamma) && a.degree().unwrap_or(0) <= n;
        let rhs = a
            .terms()
            .all(|(m, c)| m.degree() <= n && self.field.valuation(c) >= Val::Finite(-gamma));
        lhs == rhs
    }

    /// Draws a random element: up to three standard monomials of total
    /// degree at most `max_degree` with random coefficients of the given
    /// height. May return zero.
    pub fn random_element(
        &self,
        rng: &mut dyn RngCore,
        height: u64,
        max_degree: u32,
    ) -> PBWElement<K> {
        let g = self.spec.arity();
        let mut el = PBWElement::zero();
        let terms = rng.random_range(0..=3u32);
        for _ in 0..terms {
            let mut exps = vec![0u32; g];
            for _ in 0..8 {
                for e in exps.iter_mut() {
                    *e = rng.random_range(0..=max_degree);
                }
                if exps.iter().map(|&e| e as u64).sum::<u64>() <= max_degree as u64 {
                    break;
                }
                exps.fill(0);
            }
            let c = self.field.random(rng, height);
            el = el.add(
                &self.field,
                &PBWElement::monomial(&self.field, Mono::from_exponents(exps), c),
            );
        }
        el
    }

    /// Randomized check of the value-function axioms and symbol
    /// multiplicativity. Each sample draws an independent pair from a
    /// per-sample stream of the seed, so the report does not depend on the
    /// worker count. Failures are data, not errors.
    pub fn verify_value_function(
        &self,
        samples: u64,
        seed: u64,
        height: u64,
        max_degree: u32,
    ) -> ValueFunctionReport {
        let per_sample: Vec<Vec<CheckFailure>> = util::parallel_map(samples as usize, |idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx as u64 + 1);
            let a = self.random_element(&mut rng, height, max_degree);
            let b = self.random_element(&mut rng, height, max_degree);
            self.check_pair(&a, &b)
        });
        let checks = per_sample.len() as u64 * 3;
        ValueFunctionReport {
            format_version: crate::FORMAT_VERSION,
            field: self.field.describe(),
            algebra: format!("PBW algebra on {}", self.spec.gen_names().join(", ")),
            checks,
            samples,
            seed,
            height,
            max_degree,
            failures: per_sample.into_iter().flatten().collect(),
        }
    }

    fn check_pair(&self, a: &PBWElement<K>, b: &PBWElement<K>) -> Vec<CheckFailure> {
        let mut failures = Vec::new();
        let fmt = |el: &PBWElement<K>| self.spec.format(el);
        let ab = self.spec.multiply(a, b).expect("same algebra");

        // (a) multiplicativity of the value function
        let expected = self.gauss_valuation(a) + self.gauss_valuation(b);
        let got = self.gauss_valuation(&ab);
        if got != expected {
            failures.push(CheckFailure {
                check: "multiplicativity".to_string(),
                a: fmt(a),
                b: fmt(b),
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }

        // (b) ultrametric inequality
        let sum = a.add(&self.field, b);
        let bound = self.gauss_valuation(a).min(self.gauss_valuation(b));
        let got = self.gauss_valuation(&sum);
        if got < bound {
            failures.push(CheckFailure {
                check: "ultrametric".to_string(),
                a: fmt(a),
                b: fmt(b),
                expected: format!(">= {bound}"),
                got: got.to_string(),
            });
        }

        // (c) symbol multiplicativity
        if !a.is_zero() && !b.is_zero() {
            let sa = self.principal_symbol(a).expect("nonzero");
            let sb = self.principal_symbol(b).expect("nonzero");
            let sab = self.principal_symbol(&ab).expect("products are nonzero");
            match self.symbol_multiply(&sa, &sb) {
                Err(GaussError::DomainFailure) => failures.push(CheckFailure {
                    check: "symbol".to_string(),
                    a: fmt(a),
                    b: fmt(b),
                    expected: format!("({}, {})", sab.degree, self.format_residue(&sab.residue)),
                    got: "DomainFailure".to_string(),
                }),
                Err(e) => unreachable!("unexpected error {e}"),
                Ok(prod) => {
                    if prod != sab {
                        failures.push(CheckFailure {
                            check: "symbol".to_string(),
                            a: fmt(a),
                            b: fmt(b),
                            expected: format!(
                                "({}, {})",
                                sab.degree,
                                self.format_residue(&sab.residue)
                            ),
                            got: format!(
                                "({}, {})",
                                prod.degree,
                                self.format_residue(&prod.residue)
                            ),
                        });
                    }
                }
            }
        }
        failures
    }

    /// Formats a residue element in the expression grammar.
    pub fn format_residue(&self, el: &PBWElement<K::Residue>) -> String {
        // formatting only needs names and the residue field
        let rf = self.field.residue_field().clone();
        let spec = PBWSpec::commutative(rf, self.spec.gen_names().to_vec())
            .expect("names validated at construction");
        spec.format(el)
    }

    pub fn format_symbol(&self, s: &Symbol<K>) -> String {
        format!("({}, {})", s.degree, self.format_residue(&s.residue))
    }

    /// Compares, for each bidegree in the window, the dimension of the
    /// (gamma, n) component of the filtration-graded Laurent model with
    /// the (n, gamma) component of the valuation-graded associated ring.
    /// The first is counted by enumerating standard monomials of exact
    /// degree n; the second comes from filtered dimension increments.
    pub fn double_graded_dims(
        &self,
        max_degree: usize,
        gamma_window: (i64, i64),
    ) -> DoubleGradedTable {
        let g = self.spec.arity();
        let filtered = self.spec.filtered_dims(max_degree);
        let mut rows = Vec::new();
        let mut all_equal = true;
        for n in 0..=max_degree {
            let left = count_monomials_of_degree(g, n as u64);
            let right = if n == 0 {
                filtered[0]
            } else {
                filtered[n] - filtered[n - 1]
            };
            for gamma in gamma_window.0..=gamma_window.1 {
                let equal = left == right;
                all_equal &= equal;
                rows.push(DoubleGradedRow {
                    n,
                    gamma,
                    graded_of_valuation: left,
                    valuation_of_graded: right,
                    equal,
                });
            }
        }
        DoubleGradedTable {
            gamma_window,
            max_degree,
            rows,
            all_equal,
        }
    }
}

/// Number of exponent vectors of length `arity` and exact total degree
/// `n`, counted by direct enumeration.
fn count_monomials_of_degree(arity: usize, n: u64) -> u64 {
    if arity == 0 {
        return u64::from(n == 0);
    }
    if arity == 1 {
        return 1;
    }
    (0..=n)
        .map(|e| count_monomials_of_degree(arity - 1, n - e))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::pbw::{make_enveloping, make_q_plane, make_weyl, sl2_constants};
    use crate::valued_field::{PAdic, TAdic};
    use num_rational::BigRational;

    fn weyl_ctx(p: u64) -> GaussContext<PAdic> {
        let k = PAdic::new(p).unwrap();
        GaussContext::new(k, make_weyl(1, PAdic::new(p).unwrap()).unwrap()).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gauss_valuation_examples() {
        let ctx = weyl_ctx(2);
        let f = ctx.field().clone();
        // 2x + 4D has valuation 1
        let a = PBWElement::monomial(&f, Mono::gen(2, 0), rat(2, 1))
            .add(&f, &PBWElement::monomial(&f, Mono::gen(2, 1), rat(4, 1)));
        assert_eq!(ctx.gauss_valuation(&a), Val::Finite(1));
        assert_eq!(ctx.gauss_valuation(&PBWElement::zero()), Val::Infinity);
        // v(NF(Dx)) = 0 = v(D) + v(x)
        let alg = ctx.spec().free_algebra();
        let nf = ctx.spec().normal_form(&alg.parse("D*x").unwrap()).unwrap();
        assert_eq!(ctx.gauss_valuation(&nf), Val::Finite(0));
    }

    #[test]
    fn principal_symbol_examples() {
        let ctx = weyl_ctx(2);
        let f = ctx.field().clone();
        let a = PBWElement::monomial(&f, Mono::gen(2, 0), rat(2, 1))
            .add(&f, &PBWElement::monomial(&f, Mono::gen(2, 1), rat(4, 1)));
        let s = ctx.principal_symbol(&a).unwrap();
        assert_eq!(s.degree, -1);
        assert_eq!(ctx.format_residue(&s.residue), "x");
        // x itself has degree 0
        let x = PBWElement::monomial(&f, Mono::gen(2, 0), rat(1, 1));
        let sx = ctx.principal_symbol(&x).unwrap();
        assert_eq!(
            (sx.degree, ctx.format_residue(&sx.residue).as_str()),
            (0, "x")
        );
        // 1/2 has valuation -1, so degree 1
        let half = PBWElement::monomial(&f, Mono::one(2), rat(1, 2));
        let sh = ctx.principal_symbol(&half).unwrap();
        assert_eq!(
            (sh.degree, ctx.format_residue(&sh.residue).as_str()),
            (1, "1")
        );
        assert_eq!(
            ctx.principal_symbol(&PBWElement::zero()).err(),
            Some(GaussError::ZeroElement)
        );
    }

    #[test]
    fn symbol_multiply_examples() {
        let ctx = weyl_ctx(2);
        let f = ctx.field().clone();
        let x = PBWElement::monomial(&f, Mono::gen(2, 0), rat(1, 1));
        let d = PBWElement::monomial(&f, Mono::gen(2, 1), rat(1, 1));
        let sx = ctx.principal_symbol(&x).unwrap();
        let sd = ctx.principal_symbol(&d).unwrap();
        let prod = ctx.symbol_multiply(&sx, &sd).unwrap();
        assert_eq!(prod.degree, 0);
        assert_eq!(ctx.format_residue(&prod.residue), "x*D");
        // degrees add
        let s1 = Symbol::<PAdic> {
            degree: -1,
            residue: sx.residue.clone(),
        };
        let s2 = Symbol::<PAdic> {
            degree: 2,
            residue: sd.residue.clone(),
        };
        assert_eq!(ctx.symbol_multiply(&s1, &s2).unwrap().degree, 1);
    }

    #[test]
    fn domain_failure_for_zero_divisor_reduction() {
        // y x = 2 x y over the 2-adics: the reduction is F_2<x,y>/(y x)
        let k = PAdic::new(2).unwrap();
        let spec = make_q_plane(k.clone(), rat(2, 1)).unwrap();
        let ctx = GaussContext::new(k, spec).unwrap();
        assert!(ctx.reduced_spec().is_err());
        let f = ctx.field().clone();
        let x = PBWElement::monomial(&f, Mono::gen(2, 0), rat(1, 1));
        let y = PBWElement::monomial(&f, Mono::gen(2, 1), rat(1, 1));
        let sx = ctx.principal_symbol(&x).unwrap();
        let sy = ctx.principal_symbol(&y).unwrap();
        // x*y is fine, y*x dies
        assert!(ctx.symbol_multiply(&sx, &sy).is_ok());
        assert_eq!(
            ctx.symbol_multiply(&sy, &sx).err(),
            Some(GaussError::DomainFailure)
        );
        // and the suite records rather than errors
        let report = ctx.verify_value_function(60, 7, 8, 2);
        assert!(!report.failures.is_empty());
    }

    #[test]
    fn reduced_spec_examples() {
        // Weyl over Q at p=2 reduces to Weyl over F_2
        let ctx = weyl_ctx(2);
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(ctx.reduced_spec().unwrap(), &make_weyl(1, f2).unwrap());

        // q-plane with q = 1 + p reduces to the commutative plane
        let k = PAdic::new(3).unwrap();
        let spec = make_q_plane(k.clone(), rat(4, 1)).unwrap();
        let ctx = GaussContext::new(k, spec).unwrap();
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(
            ctx.reduced_spec().unwrap(),
            &PBWSpec::commutative(f3, vec!["x".into(), "y".into()]).unwrap()
        );

        // U(sl2) at p=2: reduced constants (1, 0, 0)
        let k = PAdic::new(2).unwrap();
        let spec = make_enveloping(
            k.clone(),
            vec!["e".into(), "f".into(), "h".into()],
            &sl2_constants(&k),
        )
        .unwrap();
        let ctx = GaussContext::new(k, spec).unwrap();
        let red = ctx.reduced_spec().unwrap();
        let f2 = PrimeField::new(2).unwrap();
        let expected = {
            let mut c = vec![vec![vec![0u64; 3]; 3]; 3];
            c[0][1][2] = 1;
            c[1][0][2] = 1; // -1 == 1 mod 2
            make_enveloping(f2, vec!["e".into(), "f".into(), "h".into()], &c).unwrap()
        };
        assert_eq!(red, &expected);
    }

    #[test]
    fn residue_multiply_agrees_with_reduced_spec() {
        use rand::SeedableRng;
        let ctx = weyl_ctx(2);
        let red = ctx.reduced_spec().unwrap().clone();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let a = ctx.random_element(&mut rng, 30, 3);
            let b = ctx.random_element(&mut rng, 30, 3);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let sa = ctx.principal_symbol(&a).unwrap();
            let sb = ctx.principal_symbol(&b).unwrap();
            let via_ctx = ctx.residue_multiply(&sa.residue, &sb.residue);
            let via_red = red.multiply(&sa.residue, &sb.residue).unwrap();
            assert_eq!(via_ctx, via_red);
        }
    }

    #[test]
    fn rejects_negative_valuation_constants() {
        let k = PAdic::new(2).unwrap();
        let spec = make_q_plane(k.clone(), rat(1, 2)).unwrap();
        assert!(matches!(
            GaussContext::new(k, spec).err(),
            Some(GaussError::NonIntegralCoefficient { v: -1, .. })
        ));
    }

    #[test]
    fn rejects_nonconfluent_spec() {
        let k = PAdic::new(5).unwrap();
        let mut c = sl2_constants(&k);
        c[2][1][1] = rat(2, 1);
        c[1][2][1] = rat(-2, 1);
        let spec =
            make_enveloping(k.clone(), vec!["e".into(), "f".into(), "h".into()], &c).unwrap();
        assert!(matches!(
            GaussContext::new(k, spec).err(),
            Some(GaussError::NotConfluent(..))
        ));
    }

    #[test]
    fn value_function_suite_weyl() {
        let ctx = weyl_ctx(2);
        let report = ctx.verify_value_function(150, 42, 20, 3);
        assert_eq!(report.failures, Vec::new());
        assert_eq!(report.samples, 150);
        assert_eq!(report.checks, 450);
    }

    #[test]
    fn value_function_suite_q_plane_unit_q() {
        // the reduction is the commutative plane, a domain
        for p in [2u64, 5] {
            let k = PAdic::new(p).unwrap();
            let q = rat(1 + p as i64, 1);
            let spec = make_q_plane(k.clone(), q).unwrap();
            let ctx = GaussContext::new(k, spec).unwrap();
            let report = ctx.verify_value_function(200, 11, 12, 3);
            assert_eq!(report.failures, Vec::new());
        }
    }

    #[test]
    fn value_function_suite_t_adic() {
        let f3 = PrimeField::new(3).unwrap();
        let k = TAdic::new(f3);
        // q-plane with q = 1 + t, a unit of the valuation ring
        let kt = k.function_field().clone();
        let q = kt.add(&kt.one(), &kt.t());
        let spec = make_q_plane(k.clone(), q).unwrap();
        let ctx = GaussContext::new(k, spec).unwrap();
        let report = ctx.verify_value_function(60, 13, 4, 2);
        assert_eq!(report.failures, Vec::new());
    }

    #[test]
    fn equal_characteristic_context_over_q_of_t() {
        // residue field Q: characteristic-zero reduction of the Weyl
        // algebra over Q(t) is the Weyl algebra over Q
        let k = TAdic::new(Rationals);
        let spec = make_weyl(1, k.clone()).unwrap();
        let ctx = GaussContext::new(k.clone(), spec).unwrap();
        assert_eq!(
            ctx.reduced_spec().unwrap(),
            &make_weyl(1, Rationals).unwrap()
        );
        let report = ctx.verify_value_function(60, 19, 4, 2);
        assert_eq!(report.failures, Vec::new());
        // symbols see the t-degree: v(t^2 x) = 2, residue x over Q
        let kt = k.function_field().clone();
        let t2 = kt.mul(&kt.t(), &kt.t());
        let a = PBWElement::monomial(&k, Mono::gen(2, 0), t2);
        let s = ctx.principal_symbol(&a).unwrap();
        assert_eq!(s.degree, -2);
        assert_eq!(ctx.format_residue(&s.residue), "x");
    }

    #[test]
    fn zero_pair_is_vacuous() {
        let ctx = weyl_ctx(2);
        let failures = ctx.check_pair(&PBWElement::zero(), &PBWElement::zero());
        assert_eq!(failures, Vec::new());
        assert_eq!(
            ctx.gauss_valuation(
                &ctx.spec()
                    .multiply(&PBWElement::zero(), &PBWElement::zero())
                    .unwrap()
            ),
            Val::Infinity
        );
    }

    #[test]
    fn fraction_valuation_examples() {
        let ctx = weyl_ctx(2);
        let f = ctx.field().clone();
        let x = PBWElement::monomial(&f, Mono::gen(2, 0), rat(1, 1));
        let two = PBWElement::monomial(&f, Mono::one(2), rat(2, 1));
        assert_eq!(ctx.fraction_valuation(&x, &two).unwrap(), Val::Finite(-1));
        assert_eq!(ctx.fraction_valuation(&x, &x).unwrap(), Val::Finite(0));
        assert_eq!(
            ctx.fraction_valuation(&x, &PBWElement::zero()).err(),
            Some(GaussError::ZeroDenominator)
        );
        // invariance under left multiplication by a common nonzero factor
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..40 {
            let a = ctx.random_element(&mut rng, 12, 2);
            let s = ctx.random_element(&mut rng, 12, 2);
            let u = ctx.random_element(&mut rng, 12, 2);
            if s.is_zero() || u.is_zero() {
                continue;
            }
            let ua = ctx.spec().multiply(&u, &a).unwrap();
            let us = ctx.spec().multiply(&u, &s).unwrap();
            assert_eq!(
                ctx.fraction_valuation(&a, &s).unwrap(),
                ctx.fraction_valuation(&ua, &us).unwrap()
            );
        }
    }

    #[test]
    fn laurent_model_sums_and_products() {
        let ctx = weyl_ctx(2);
        let f = ctx.field().clone();
        let rf = ctx.field().residue_field().clone();
        let a = PBWElement::monomial(&f, Mono::gen(2, 0), rat(2, 1));
        let b = PBWElement::monomial(&f, Mono::gen(2, 1), rat(1, 1));
        let sa = ctx.principal_symbol(&a).unwrap(); // degree -1
        let sb = ctx.principal_symbol(&b).unwrap(); // degree 0
        let la = LaurentGraded::from_symbol(&sa);
        let lb = LaurentGraded::from_symbol(&sb);
        let sum = la.add(&rf, &lb);
        assert_eq!(sum.components().count(), 2);
        let prod = ctx.laurent_multiply(&sum, &lb);
        assert_eq!(prod.components().count(), 2);
        assert!(prod.component(-1).is_some());
        assert!(prod.component(0).is_some());
        // adding the negative of a component cancels it
        let neg = LaurentGraded::from_symbol(&Symbol::<PAdic> {
            degree: -1,
            residue: sa.residue.neg(&rf),
        });
        let cancelled = sum.add(&rf, &neg);
        assert_eq!(cancelled.components().count(), 1);
    }

    #[test]
    fn filtration_compatibility_random() {
        use rand::{Rng, SeedableRng};
        let ctx = weyl_ctx(2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let a = ctx.random_element(&mut rng, 25, 4);
            let gamma = rng.random_range(-3..=3);
            let n = rng.random_range(0..=4u64);
            assert!(ctx.filtration_compatibility(&a, gamma, n));
        }
    }

    #[test]
    fn strong_filtration_on_scalars() {
        use rand::SeedableRng;
        let k = PAdic::new(2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let x = k.random(&mut rng, 50);
            let Val::Finite(v) = k.valuation(&x) else {
                continue;
            };
            // x in f_gamma K with gamma = -v(x): x * pi^{-gamma} is integral
            let gamma = -v;
            let shifted = k.mul(&x, &k.pi_pow(gamma));
            assert!(k.valuation(&shifted) >= Val::Finite(0));
        }
    }

    #[test]
    fn double_graded_examples() {
        let ctx = weyl_ctx(2);
        let table = ctx.double_graded_dims(3, (-2, 2));
        assert!(table.all_equal);
        for row in &table.rows {
            // A_1 has n+1 standard monomials in exact degree n
            assert_eq!(row.graded_of_valuation, row.n as u64 + 1);
        }
        let zero = ctx.double_graded_dims(0, (-2, 2));
        assert!(zero.all_equal);
        assert!(zero.rows.iter().all(|r| r.graded_of_valuation == 1));

        let k = PAdic::new(3).unwrap();
        let comm = PBWSpec::commutative(k.clone(), vec!["x".into(), "y".into()]).unwrap();
        let ctx = GaussContext::new(k, comm).unwrap();
        let table = ctx.double_graded_dims(2, (0, 0));
        let dims: Vec<u64> = table.rows.iter().map(|r| r.graded_of_valuation).collect();
        assert_eq!(dims, vec![1, 2, 3]);
        assert!(table.all_equal);
    }

    #[test]
    fn monomial_count_matches_binomial() {
        for g in 1..=4usize {
            for n in 0..=6u64 {
                // C(n + g - 1, g - 1)
                let mut expect: u128 = 1;
                for k in 1..=(g as u128 - 1) {
                    expect = expect * (n as u128 + k) / k;
                }
                assert_eq!(count_monomials_of_degree(g, n) as u128, expect);
            }
        }
    }
}

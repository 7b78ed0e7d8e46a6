//! Exact coefficient fields: the rationals, prime fields `F_p`, and
//! univariate rational function fields over either. Arithmetic goes through
//! a field object (the [`Field`] trait) so the same polynomial and linear
//! algebra code runs over a base field and over its residue field.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore};

/// Arithmetic interface of an exact field. Elements are plain values;
/// the field object carries whatever parameters (a modulus, a coefficient
/// field) the operations need.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly for the zero element.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
    fn from_int(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    /// Named field constant usable in expressions (`t` for rational
    /// function fields); `None` if the field has no such symbol.
    fn symbol(&self, name: &str) -> Option<Self::Elem> {
        let _ = name;
        None
    }

    /// Canonical text form, re-parseable by the expression grammar.
    fn format(&self, a: &Self::Elem) -> String;

    /// Splits off a sign for pretty-printing (`Some((negative, abs))`),
    /// or `None` when the field has no useful notion of sign.
    fn sign_split(&self, a: &Self::Elem) -> Option<(bool, Self::Elem)> {
        let _ = a;
        None
    }

    /// Short human-readable name of the field ("Q", "F_5", "F_3(t)").
    fn name(&self) -> String;

    /// Draws an element with numerator/denominator data bounded by
    /// `height`. May return zero.
    fn random(&self, rng: &mut dyn RngCore, height: u64) -> Self::Elem;
}

/// Deterministic Miller-Rabin for u64 moduli.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let pow = |mut b: u64, mut e: u64| -> u64 {
        let mut acc: u64 = 1;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = ((acc as u128 * b as u128) % n as u128) as u64;
            }
            b = ((b as u128 * b as u128) % n as u128) as u64;
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

/// The field of rational numbers with arbitrary-precision arithmetic.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn sign_split(&self, a: &BigRational) -> Option<(bool, BigRational)> {
        Some((a.is_negative(), a.abs()))
    }
    fn name(&self) -> String {
        "Q".to_string()
    }
    fn random(&self, rng: &mut dyn RngCore, height: u64) -> BigRational {
        let h = height.max(1) as i64;
        let num = rng.random_range(-h..=h);
        let den = rng.random_range(1..=h);
        BigRational::new(num.into(), den.into())
    }
}

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

/// The prime field `F_p`, elements canonically `0..p-1`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Fails unless `p` is prime.
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

fn mod_inv(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    // extended Euclid on (a, p)
    let (mut r0, mut r1) = (a as i128 % p as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    Some(s0.rem_euclid(p as i128) as u64)
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        mod_inv(*a, self.p)
    }
    fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        let m = n.mod_floor(&BigInt::from(self.p));
        u64::try_from(m).expect("mod_floor result fits in u64")
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        format!("F_{}", self.p)
    }
    fn random(&self, rng: &mut dyn RngCore, _height: u64) -> u64 {
        rng.random_range(0..self.p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
}

// ---------------------------------------------------------------------------
// Univariate polynomials and rational functions in t
// ---------------------------------------------------------------------------

/// Dense univariate polynomial in `t` over `C`; no trailing zero
/// coefficients are stored, so equality is structural.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<C: Field> {
    coeffs: Vec<C::Elem>,
}

impl<C: Field> Poly<C> {
    pub fn new(field: &C, mut coeffs: Vec<C::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(field: &C, c: C::Elem) -> Self {
        Poly::new(field, vec![c])
    }

    pub fn t(field: &C) -> Self {
        Poly {
            coeffs: vec![field.zero(), field.one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient (the t-adic order).
    pub fn ord(&self, field: &C) -> Option<usize> {
        self.coeffs.iter().position(|c| !field.is_zero(c))
    }

    pub fn coeff(&self, i: usize) -> Option<&C::Elem> {
        self.coeffs.get(i)
    }

    pub fn lead(&self) -> Option<&C::Elem> {
        self.coeffs.last()
    }

    pub fn add(&self, field: &C, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero());
            let b = rhs.coeffs.get(i).cloned().unwrap_or_else(|| field.zero());
            out.push(field.add(&a, &b));
        }
        Poly::new(field, out)
    }

    pub fn neg(&self, field: &C) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, field: &C, rhs: &Self) -> Self {
        self.add(field, &rhs.neg(field))
    }

    pub fn mul(&self, field: &C, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = field.add(&out[i + j], &field.mul(a, b));
            }
        }
        Poly::new(field, out)
    }

    pub fn scale(&self, field: &C, c: &C::Elem) -> Self {
        Poly::new(field, self.coeffs.iter().map(|a| field.mul(a, c)).collect())
    }

    /// Euclidean division by a nonzero divisor.
    pub fn divrem(&self, field: &C, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero(), "polynomial division by zero");
        let mut rem = self.clone();
        let dl = rhs.coeffs.len() - 1;
        let lead_inv = field
            .inv(rhs.lead().expect("nonzero divisor"))
            .expect("unit lead");
        let mut quot = vec![field.zero(); self.coeffs.len().saturating_sub(dl)];
        while !rem.is_zero() && rem.coeffs.len() - 1 >= dl {
            let shift = rem.coeffs.len() - 1 - dl;
            let q = field.mul(rem.lead().expect("nonzero remainder"), &lead_inv);
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let idx = shift + j;
                let delta = field.mul(&q, b);
                rem.coeffs[idx] = field.sub(&rem.coeffs[idx], &delta);
            }
            quot[shift] = q;
            while rem.coeffs.last().is_some_and(|c| field.is_zero(c)) {
                rem.coeffs.pop();
            }
        }
        (Poly::new(field, quot), rem)
    }

    /// Monic gcd.
    pub fn gcd(&self, field: &C, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(field, &b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let li = field.inv(a.lead().expect("nonzero")).expect("unit lead");
        a.scale(field, &li)
    }

    pub fn format(&self, field: &C) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            let (neg, abs) = match field.sign_split(c) {
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
            let cs = field.format(&abs);
            let needs_parens = cs[1..].contains(['+', '-']) || cs.contains('/');
            let cs = if needs_parens { format!("({cs})") } else { cs };
            match i {
                0 => out.push_str(&cs),
                _ => {
                    if field.is_one(&abs) {
                        out.push('t');
                    } else {
                        out.push_str(&cs);
                        out.push_str("*t");
                    }
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        out
    }
}

/// Canonical fraction of polynomials in `t`: gcd-reduced, monic denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc<C: Field> {
    num: Poly<C>,
    den: Poly<C>,
}

impl<C: Field> RatFunc<C> {
    pub fn new(field: &C, num: Poly<C>, den: Poly<C>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc {
                num: Poly::zero(),
                den: Poly::constant(field, field.one()),
            };
        }
        let g = num.gcd(field, &den);
        let (num, _) = num.divrem(field, &g);
        let (den, _) = den.divrem(field, &g);
        let li = field
            .inv(den.lead().expect("nonzero den"))
            .expect("unit lead");
        RatFunc {
            num: num.scale(field, &li),
            den: den.scale(field, &li),
        }
    }

    pub fn num(&self) -> &Poly<C> {
        &self.num
    }

    pub fn den(&self) -> &Poly<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

/// Rational functions `C(t)` as a field object.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunctions<C: Field> {
    coeff: C,
}

impl<C: Field> RationalFunctions<C> {
    pub fn new(coeff: C) -> Self {
        RationalFunctions { coeff }
    }

    pub fn coeff_field(&self) -> &C {
        &self.coeff
    }

    pub fn t(&self) -> RatFunc<C> {
        RatFunc::new(
            &self.coeff,
            Poly::t(&self.coeff),
            Poly::constant(&self.coeff, self.coeff.one()),
        )
    }

    /// t-adic order of a nonzero element.
    pub fn t_order(&self, x: &RatFunc<C>) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        let n = x.num.ord(&self.coeff).expect("nonzero numerator") as i64;
        let d = x.den.ord(&self.coeff).expect("nonzero denominator") as i64;
        Some(n - d)
    }

    /// Multiplies by `t^k` (any sign of `k`).
    pub fn shift(&self, x: &RatFunc<C>, k: i64) -> RatFunc<C> {
        if x.is_zero() || k == 0 {
            return x.clone();
        }
        let mut tpow = vec![self.coeff.zero(); k.unsigned_abs() as usize];
        tpow.push(self.coeff.one());
        let tpow = Poly::new(&self.coeff, tpow);
        if k > 0 {
            RatFunc::new(&self.coeff, x.num.mul(&self.coeff, &tpow), x.den.clone())
        } else {
            RatFunc::new(&self.coeff, x.num.clone(), x.den.mul(&self.coeff, &tpow))
        }
    }
}

impl<C: Field> Field for RationalFunctions<C> {
    type Elem = RatFunc<C>;

    fn zero(&self) -> RatFunc<C> {
        RatFunc {
            num: Poly::zero(),
            den: Poly::constant(&self.coeff, self.coeff.one()),
        }
    }
    fn one(&self) -> RatFunc<C> {
        RatFunc {
            num: Poly::constant(&self.coeff, self.coeff.one()),
            den: Poly::constant(&self.coeff, self.coeff.one()),
        }
    }
    fn is_zero(&self, a: &RatFunc<C>) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &RatFunc<C>, b: &RatFunc<C>) -> RatFunc<C> {
        let f = &self.coeff;
        let num = a.num.mul(f, &b.den).add(f, &b.num.mul(f, &a.den));
        RatFunc::new(f, num, a.den.mul(f, &b.den))
    }
    fn neg(&self, a: &RatFunc<C>) -> RatFunc<C> {
        RatFunc {
            num: a.num.neg(&self.coeff),
            den: a.den.clone(),
        }
    }
    fn mul(&self, a: &RatFunc<C>, b: &RatFunc<C>) -> RatFunc<C> {
        let f = &self.coeff;
        RatFunc::new(f, a.num.mul(f, &b.num), a.den.mul(f, &b.den))
    }
    fn inv(&self, a: &RatFunc<C>) -> Option<RatFunc<C>> {
        if a.is_zero() {
            None
        } else {
            Some(RatFunc::new(&self.coeff, a.den.clone(), a.num.clone()))
        }
    }
    fn from_int(&self, n: i64) -> RatFunc<C> {
        RatFunc::new(
            &self.coeff,
            Poly::constant(&self.coeff, self.coeff.from_int(n)),
            Poly::constant(&self.coeff, self.coeff.one()),
        )
    }
    fn from_bigint(&self, n: &BigInt) -> RatFunc<C> {
        RatFunc::new(
            &self.coeff,
            Poly::constant(&self.coeff, self.coeff.from_bigint(n)),
            Poly::constant(&self.coeff, self.coeff.one()),
        )
    }
    fn symbol(&self, name: &str) -> Option<RatFunc<C>> {
        (name == "t").then(|| self.t())
    }
    fn format(&self, a: &RatFunc<C>) -> String {
        let num = a.num.format(&self.coeff);
        if a.den.degree() == Some(0) {
            // canonical form has monic denominator, so this is den == 1
            num
        } else {
            let num = if num[1..].contains(['+', '-']) {
                format!("({num})")
            } else {
                num
            };
            format!("{num}/({})", a.den.format(&self.coeff))
        }
    }
    fn name(&self) -> String {
        format!("{}(t)", self.coeff.name())
    }
    fn random(&self, rng: &mut dyn RngCore, height: u64) -> RatFunc<C> {
        let f = &self.coeff;
        let num = Poly::new(
            f,
            (0..=2).map(|_| f.random(rng, height)).collect::<Vec<_>>(),
        );
        // denominator with nonzero constant term, so only the explicit
        // shift below moves the valuation
        let mut den_c1 = f.random(rng, height);
        if num.is_zero() {
            den_c1 = f.zero();
        }
        let den = Poly::new(f, vec![f.one(), den_c1]);
        let x = RatFunc::new(f, num, den);
        let k = rng.random_range(-2i64..=2);
        self.shift(&x, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(5));
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1));
        assert!(!is_prime(4));
        assert!(!is_prime(1_000_000_007u64 * 3));
    }

    #[test]
    fn prime_field_arithmetic() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.add(&3, &4), 2);
        assert_eq!(f5.mul(&3, &4), 2);
        assert_eq!(f5.inv(&3), Some(2));
        assert_eq!(f5.inv(&0), None);
        assert_eq!(f5.from_int(-1), 4);
        assert!(PrimeField::new(6).is_err());
    }

    #[test]
    fn rational_format() {
        let q = Rationals;
        assert_eq!(q.format(&q.from_int(7)), "7");
        let half = q.div(&q.from_int(1), &q.from_int(2)).unwrap();
        assert_eq!(q.format(&half), "1/2");
    }

    #[test]
    fn poly_divrem_and_gcd() {
        let q = Rationals;
        // (t^2 - 1) / (t - 1) = t + 1
        let t = Poly::t(&q);
        let one = Poly::constant(&q, q.one());
        let t2m1 = t.mul(&q, &t).sub(&q, &one);
        let tm1 = t.sub(&q, &one);
        let (quot, rem) = t2m1.divrem(&q, &tm1);
        assert!(rem.is_zero());
        assert_eq!(quot, t.add(&q, &one));
        let g = t2m1.gcd(&q, &tm1);
        assert_eq!(g, tm1);
    }

    #[test]
    fn ratfunc_canonical() {
        let q = Rationals;
        let kt = RationalFunctions::new(q);
        let t = kt.t();
        // t^2/t == t
        let t2 = kt.mul(&t, &t);
        let red = kt.div(&t2, &t).unwrap();
        assert_eq!(red, t);
        // (2t + 2)/2 normalizes
        let two = kt.from_int(2);
        let x = kt.div(&kt.mul(&two, &kt.add(&t, &kt.one())), &two).unwrap();
        assert_eq!(x, kt.add(&t, &kt.one()));
        assert_eq!(kt.t_order(&t2), Some(2));
        assert_eq!(kt.t_order(&kt.inv(&t).unwrap()), Some(-1));
    }

    #[test]
    fn ratfunc_field_axioms_random() {
        let f3 = PrimeField::new(3).unwrap();
        let kt = RationalFunctions::new(f3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = kt.random(&mut rng, 4);
            let b = kt.random(&mut rng, 4);
            let c = kt.random(&mut rng, 4);
            let ab_c = kt.mul(&kt.mul(&a, &b), &c);
            let a_bc = kt.mul(&a, &kt.mul(&b, &c));
            assert_eq!(ab_c, a_bc);
            let dist = kt.mul(&a, &kt.add(&b, &c));
            let dist2 = kt.add(&kt.mul(&a, &b), &kt.mul(&a, &c));
            assert_eq!(dist, dist2);
            if !kt.is_zero(&a) {
                let ai = kt.inv(&a).unwrap();
                assert_eq!(kt.mul(&a, &ai), kt.one());
            }
        }
    }
}

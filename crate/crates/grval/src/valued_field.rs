//! Valued fields with a surjective Z-valuation: the rationals with a p-adic
//! valuation and rational function fields with the t-adic valuation. Each
//! carries its valuation ring, canonical uniformizer, residue field and the
//! reduction map onto it.

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::field::{Field, FieldError, PrimeField, RatFunc, RationalFunctions, Rationals};

/// Element of the value group Z together with the absorbing value of v(0).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Val {
    Finite(i64),
    Infinity,
}

impl Val {
    pub fn finite(self) -> Option<i64> {
        match self {
            Val::Finite(n) => Some(n),
            Val::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Val::Infinity
    }
}

impl Add for Val {
    type Output = Val;
    fn add(self, rhs: Val) -> Val {
        match (self, rhs) {
            (Val::Finite(a), Val::Finite(b)) => Val::Finite(a + b),
            _ => Val::Infinity,
        }
    }
}

impl From<i64> for Val {
    fn from(n: i64) -> Val {
        Val::Finite(n)
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(n) => write!(f, "{n}"),
            Val::Infinity => write!(f, "infinity"),
        }
    }
}

impl Serialize for Val {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Val::Finite(n) => s.serialize_i64(*n),
            Val::Infinity => s.serialize_str("infinity"),
        }
    }
}

impl<'de> Deserialize<'de> for Val {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Val, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => Ok(Val::Finite(n)),
            Raw::Str(s) if s == "infinity" => Ok(Val::Infinity),
            Raw::Str(s) => Err(D::Error::custom(format!("bad valuation value {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValuedFieldError {
    #[error("element has negative valuation {0} and no residue")]
    NegativeValuation(i64),
    #[error("zero input")]
    ZeroInput,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A field together with a surjective valuation onto Z.
pub trait ValuedField: Field {
    type Residue: Field;

    fn residue_field(&self) -> &Self::Residue;
    fn valuation(&self, x: &Self::Elem) -> Val;
    /// The canonical uniformizer (p or t), of valuation 1.
    fn uniformizer(&self) -> Self::Elem;
    /// Reduction modulo the maximal ideal; defined on the valuation ring.
    fn residue(&self, x: &Self::Elem) -> Result<<Self::Residue as Field>::Elem, ValuedFieldError>;
    /// Canonical section of the residue map (an element of the valuation
    /// ring reducing to the given residue).
    fn lift(&self, r: &<Self::Residue as Field>::Elem) -> Self::Elem;

    fn pi_pow(&self, k: i64) -> Self::Elem {
        let pi = self.uniformizer();
        let base = if k >= 0 {
            pi
        } else {
            self.inv(&pi).expect("uniformizer is a unit of the field")
        };
        let mut acc = self.one();
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    /// Writes a nonzero `x` as `pi^gamma * u` with `v(u) = 0`.
    fn unit_normalize(&self, x: &Self::Elem) -> Result<(i64, Self::Elem), ValuedFieldError> {
        match self.valuation(x) {
            Val::Infinity => Err(ValuedFieldError::ZeroInput),
            Val::Finite(gamma) => {
                let u = self.mul(x, &self.pi_pow(-gamma));
                debug_assert_eq!(self.valuation(&u), Val::Finite(0));
                Ok((gamma, u))
            }
        }
    }

    /// Human-readable description, e.g. "Q with the 2-adic valuation".
    fn describe(&self) -> String;
}

// ---------------------------------------------------------------------------
// p-adic valuation on Q
// ---------------------------------------------------------------------------

/// The rationals with the p-adic valuation; residue field `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PAdic {
    p: u64,
    residue: PrimeField,
}

impl PAdic {
    pub fn new(p: u64) -> Result<Self, ValuedFieldError> {
        Ok(PAdic {
            p,
            residue: PrimeField::new(p)?,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn int_ord(&self, n: &BigInt) -> i64 {
        debug_assert!(!n.is_zero());
        let p = BigInt::from(self.p);
        let mut k = 0i64;
        let mut m = n.abs();
        loop {
            let (q, r) = m.div_rem(&p);
            if !r.is_zero() {
                return k;
            }
            m = q;
            k += 1;
        }
    }
}

impl Field for PAdic {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        Rationals.zero()
    }
    fn one(&self) -> BigRational {
        Rationals.one()
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
        Rationals.inv(a)
    }
    fn from_int(&self, n: i64) -> BigRational {
        Rationals.from_int(n)
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        Rationals.from_bigint(n)
    }
    fn format(&self, a: &BigRational) -> String {
        Rationals.format(a)
    }
    fn sign_split(&self, a: &BigRational) -> Option<(bool, BigRational)> {
        Rationals.sign_split(a)
    }
    fn name(&self) -> String {
        "Q".to_string()
    }
    fn random(&self, rng: &mut dyn rand::RngCore, height: u64) -> BigRational {
        Rationals.random(rng, height)
    }
}

impl ValuedField for PAdic {
    type Residue = PrimeField;

    fn residue_field(&self) -> &PrimeField {
        &self.residue
    }

    fn valuation(&self, x: &BigRational) -> Val {
        if x.is_zero() {
            return Val::Infinity;
        }
        Val::Finite(self.int_ord(x.numer()) - self.int_ord(x.denom()))
    }

    fn uniformizer(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.p))
    }

    fn residue(&self, x: &BigRational) -> Result<u64, ValuedFieldError> {
        match self.valuation(x) {
            Val::Infinity => Ok(0),
            Val::Finite(v) if v < 0 => Err(ValuedFieldError::NegativeValuation(v)),
            Val::Finite(_) => {
                // reduced fraction with v >= 0 has denominator prime to p
                let num = self.residue.from_bigint(x.numer());
                let den = self.residue.from_bigint(x.denom());
                let di = self
                    .residue
                    .inv(&den)
                    .expect("denominator is a unit modulo p");
                Ok(self.residue.mul(&num, &di))
            }
        }
    }

    fn lift(&self, r: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from(*r))
    }

    fn describe(&self) -> String {
        format!("Q with the {}-adic valuation", self.p)
    }
}

// ---------------------------------------------------------------------------
// t-adic valuation on C(t)
// ---------------------------------------------------------------------------

/// A rational function field `C(t)` with the t-adic valuation; the residue
/// field is the coefficient field `C` itself.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TAdic<C: Field> {
    base: RationalFunctions<C>,
    residue: C,
}

impl<C: Field> TAdic<C> {
    pub fn new(coeff: C) -> Self {
        TAdic {
            base: RationalFunctions::new(coeff.clone()),
            residue: coeff,
        }
    }

    pub fn function_field(&self) -> &RationalFunctions<C> {
        &self.base
    }
}

impl<C: Field> Field for TAdic<C> {
    type Elem = RatFunc<C>;

    fn zero(&self) -> RatFunc<C> {
        self.base.zero()
    }
    fn one(&self) -> RatFunc<C> {
        self.base.one()
    }
    fn is_zero(&self, a: &RatFunc<C>) -> bool {
        self.base.is_zero(a)
    }
    fn add(&self, a: &RatFunc<C>, b: &RatFunc<C>) -> RatFunc<C> {
        self.base.add(a, b)
    }
    fn neg(&self, a: &RatFunc<C>) -> RatFunc<C> {
        self.base.neg(a)
    }
    fn mul(&self, a: &RatFunc<C>, b: &RatFunc<C>) -> RatFunc<C> {
        self.base.mul(a, b)
    }
    fn inv(&self, a: &RatFunc<C>) -> Option<RatFunc<C>> {
        self.base.inv(a)
    }
    fn from_int(&self, n: i64) -> RatFunc<C> {
        self.base.from_int(n)
    }
    fn from_bigint(&self, n: &BigInt) -> RatFunc<C> {
        self.base.from_bigint(n)
    }
    fn symbol(&self, name: &str) -> Option<RatFunc<C>> {
        self.base.symbol(name)
    }
    fn format(&self, a: &RatFunc<C>) -> String {
        self.base.format(a)
    }
    fn name(&self) -> String {
        self.base.name()
    }
    fn random(&self, rng: &mut dyn rand::RngCore, height: u64) -> RatFunc<C> {
        self.base.random(rng, height)
    }
}

impl<C: Field> ValuedField for TAdic<C> {
    type Residue = C;

    fn residue_field(&self) -> &C {
        &self.residue
    }

    fn valuation(&self, x: &RatFunc<C>) -> Val {
        match self.base.t_order(x) {
            None => Val::Infinity,
            Some(k) => Val::Finite(k),
        }
    }

    fn uniformizer(&self) -> RatFunc<C> {
        self.base.t()
    }

    fn residue(&self, x: &RatFunc<C>) -> Result<C::Elem, ValuedFieldError> {
        match self.valuation(x) {
            Val::Infinity => Ok(self.residue.zero()),
            Val::Finite(v) if v < 0 => Err(ValuedFieldError::NegativeValuation(v)),
            Val::Finite(v) if v > 0 => Ok(self.residue.zero()),
            Val::Finite(_) => {
                // reduced fraction with v = 0: both orders are 0, so this
                // is evaluation at t = 0
                let n0 = x.num().coeff(0).expect("nonzero numerator").clone();
                let d0 = x.den().coeff(0).expect("unit denominator").clone();
                let di = self
                    .residue
                    .inv(&d0)
                    .expect("denominator constant term is nonzero");
                Ok(self.residue.mul(&n0, &di))
            }
        }
    }

    fn lift(&self, r: &C::Elem) -> RatFunc<C> {
        use crate::field::Poly;
        let c = self.residue.clone();
        RatFunc::new(
            &c,
            Poly::constant(&c, r.clone()),
            Poly::constant(&c, c.one()),
        )
    }

    fn describe(&self) -> String {
        format!("{} with the t-adic valuation", self.base.name())
    }
}

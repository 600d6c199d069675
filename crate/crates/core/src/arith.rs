//! Exact arithmetic: big integers, lowest-terms rationals, and a prime field
//! used for the fast modular backend.
//!
//! The counting engines are written against the [`Field`] trait so the same
//! recursion can run over [`Rationals`] (exact answers) or a [`ModField`]
//! (residues only, with no big-number growth). [`Counted`] wraps either one and
//! tallies the field operations performed.

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

pub use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("product {0} is not an integer")]
    NotInteger(ExactRational),
    #[error("invalid rational literal {0:?}")]
    Parse(String),
    #[error("no usable prime found after {0} attempts")]
    PrimeRetriesExhausted(usize),
}

/// A rational number, always reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, ArithError> {
        let den = den.into();
        if den.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        // BigRational::new reduces and normalizes the sign.
        Ok(ExactRational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn checked_div(&self, rhs: &ExactRational) -> Result<ExactRational, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(ExactRational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<ExactRational, ArithError> {
        ExactRational::one().checked_div(self)
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, exp: i64) -> Result<ExactRational, ArithError> {
        let mag = big_pow_rational(&self.0, exp.unsigned_abs());
        if exp >= 0 {
            Ok(ExactRational(mag))
        } else if mag.is_zero() {
            Err(ArithError::DivisionByZero)
        } else {
            Ok(ExactRational(mag.recip()))
        }
    }

    /// Residue of this value in `field`, or `None` if the denominator vanishes there.
    pub fn to_residue(&self, field: &ModField) -> Option<Residue> {
        let num = field.reduce_big(self.numer());
        let den = field.reduce_big(self.denom());
        field.div(&num, &den)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactRational {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArithError::Parse(s.to_string());
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                ExactRational::new(n, d)
            }
            None => Ok(ExactRational::from_integer(
                s.trim().parse::<BigInt>().map_err(|_| bad())?,
            )),
        }
    }
}

impl From<i64> for ExactRational {
    fn from(v: i64) -> Self {
        ExactRational::from_integer(v)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational($trait::$method(self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

/// Rational form of `n^e` for possibly negative `e`.
pub fn pow_n(n: u64, e: i64) -> ExactRational {
    ExactRational::from_integer(n)
        .powi(e)
        .expect("n >= 1 has an inverse")
}

/// `base^exp` by binary exponentiation.
pub fn big_pow(base: &BigInt, exp: u64) -> BigInt {
    let mut result = BigInt::one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    result
}

fn big_pow_rational(base: &BigRational, exp: u64) -> BigRational {
    BigRational::new_raw(big_pow(base.numer(), exp), big_pow(base.denom(), exp))
}

/// `scale * product(rs)`, which must come out integral.
pub fn product_to_integer(rs: &[ExactRational], scale: &BigInt) -> Result<BigInt, ArithError> {
    let mut acc = ExactRational::from_integer(scale.clone());
    for r in rs {
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        acc = &acc * r;
    }
    if acc.is_integer() {
        Ok(acc.numer().clone())
    } else {
        Err(ArithError::NotInteger(acc))
    }
}

/// A field the engines can compute in.
pub trait Field {
    type Elem: Clone + fmt::Debug;

    fn int(&self, v: u64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` when `b` is zero.
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn zero(&self) -> Self::Elem {
        self.int(0)
    }

    fn one(&self) -> Self::Elem {
        self.int(1)
    }
}

/// The exact rationals.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = ExactRational;

    fn int(&self, v: u64) -> ExactRational {
        ExactRational::from_integer(v)
    }
    fn add(&self, a: &ExactRational, b: &ExactRational) -> ExactRational {
        a + b
    }
    fn sub(&self, a: &ExactRational, b: &ExactRational) -> ExactRational {
        a - b
    }
    fn mul(&self, a: &ExactRational, b: &ExactRational) -> ExactRational {
        a * b
    }
    fn div(&self, a: &ExactRational, b: &ExactRational) -> Option<ExactRational> {
        a.checked_div(b).ok()
    }
    fn is_zero(&self, a: &ExactRational) -> bool {
        a.is_zero()
    }
}

/// A residue modulo the prime of the [`ModField`] that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue(pub u64);

/// Integers modulo a prime below 2^62.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModField {
    modulus: u64,
}

impl ModField {
    /// Returns `None` unless `modulus` is a prime below 2^62.
    pub fn new(modulus: u64) -> Option<Self> {
        (modulus < (1 << 62) && is_prime_u64(modulus)).then_some(ModField { modulus })
    }

    /// A uniformly drawn prime in `[2^61, 2^62)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let candidate = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
            if is_prime_u64(candidate) {
                return ModField { modulus: candidate };
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce_big(&self, v: &BigInt) -> Residue {
        let m = BigInt::from(self.modulus);
        let r = v.mod_floor(&m);
        Residue(r.try_into().expect("residue fits in u64"))
    }

    pub fn pow(&self, base: Residue, mut exp: u64) -> Residue {
        let mut acc = 1u64;
        let mut sq = base.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_mod(acc, sq, self.modulus);
            }
            sq = mul_mod(sq, sq, self.modulus);
            exp >>= 1;
        }
        Residue(acc)
    }

    fn inverse(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let (mut old_r, mut r) = (a as i128, self.modulus as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1);
        Some(old_s.rem_euclid(self.modulus as i128) as u64)
    }
}

impl Field for ModField {
    type Elem = Residue;

    fn int(&self, v: u64) -> Residue {
        Residue(v % self.modulus)
    }
    fn add(&self, a: &Residue, b: &Residue) -> Residue {
        // Both operands are below 2^62, so the sum cannot overflow.
        let s = a.0 + b.0;
        Residue(if s >= self.modulus {
            s - self.modulus
        } else {
            s
        })
    }
    fn sub(&self, a: &Residue, b: &Residue) -> Residue {
        Residue(if a.0 >= b.0 {
            a.0 - b.0
        } else {
            a.0 + self.modulus - b.0
        })
    }
    fn mul(&self, a: &Residue, b: &Residue) -> Residue {
        Residue(mul_mod(a.0, b.0, self.modulus))
    }
    fn div(&self, a: &Residue, b: &Residue) -> Option<Residue> {
        self.inverse(b.0)
            .map(|inv| Residue(mul_mod(a.0, inv, self.modulus)))
    }
    fn is_zero(&self, a: &Residue) -> bool {
        a.0 == 0
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Wraps a field and counts every add, sub, mul, and div issued through it.
#[derive(Debug)]
pub struct Counted<'a, F> {
    inner: &'a F,
    ops: Cell<u64>,
}

impl<'a, F: Field> Counted<'a, F> {
    pub fn new(inner: &'a F) -> Self {
        Counted {
            inner,
            ops: Cell::new(0),
        }
    }

    pub fn ops(&self) -> u64 {
        self.ops.get()
    }

    fn tick(&self) {
        self.ops.set(self.ops.get() + 1);
    }
}

impl<F: Field> Field for Counted<'_, F> {
    type Elem = F::Elem;

    fn int(&self, v: u64) -> F::Elem {
        self.inner.int(v)
    }
    fn add(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.tick();
        self.inner.add(a, b)
    }
    fn sub(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.tick();
        self.inner.sub(a, b)
    }
    fn mul(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.tick();
        self.inner.mul(a, b)
    }
    fn div(&self, a: &F::Elem, b: &F::Elem) -> Option<F::Elem> {
        self.tick();
        self.inner.div(a, b)
    }
    fn is_zero(&self, a: &F::Elem) -> bool {
        self.inner.is_zero(a)
    }
}

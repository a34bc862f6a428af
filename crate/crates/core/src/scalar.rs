//! Scalar backends.
//!
//! Every container in the crate is generic over [`Scalar`]. Three backends are
//! provided: exact rationals [`Q`], exact quadratic extensions [`Quad`] (used
//! where an orthonormal frame needs one square root, e.g. `Q(sqrt 3)`), and
//! `f64` for eigenvalue work and float-mode runs.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Q = BigRational;

/// Default float tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Float => write!(f, "float"),
        }
    }
}

pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_q(q: &Q) -> Self;
    /// Exact zero test; within [`DEFAULT_TOL`] for floats.
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Sign as -1, 0 or 1.
    fn signum_i(&self) -> i8;
    /// Galois conjugate (identity except for [`Quad`]).
    fn conj(&self) -> Self;
    /// Square root inside the field, if it exists.
    fn sqrt_exact(&self) -> Option<Self>;
    /// Recover an exact element from a float approximation `x` and an
    /// approximation `xc` of its conjugate.
    fn recognize(x: f64, xc: f64) -> Option<Self>;
    fn to_q(&self) -> Option<Q>;

    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn div_ref(&self, o: &Self) -> Self;

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_q(&Q::new(BigInt::from(n), BigInt::from(d)))
    }
    fn inv(&self) -> Self {
        Self::one().div_ref(self)
    }
    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
    fn add_assign_ref(&mut self, o: &Self) {
        *self = self.add_ref(o);
    }
    fn sub_assign_ref(&mut self, o: &Self) {
        *self = self.sub_ref(o);
    }
    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self = self.add_ref(&a.mul_ref(b));
    }
    /// `self -= a * b`
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self = self.sub_ref(&a.mul_ref(b));
    }
    fn neg_ref(&self) -> Self {
        Self::zero().sub_ref(self)
    }
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn q_to_f64(x: &Q) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // very large entries: scale by bit length
            let nb = x.numer().bits() as i64;
            let db = x.denom().bits() as i64;
            let shift = (nb.max(db) - 60).max(0) as usize;
            let n = (x.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (x.denom() >> shift).to_f64().unwrap_or(1.0);
            if d == 0.0 {
                f64::INFINITY
            } else {
                n / d
            }
        }
    }
}

fn bigint_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

fn q_sqrt_exact(x: &Q) -> Option<Q> {
    let n = bigint_sqrt_exact(x.numer())?;
    let d = bigint_sqrt_exact(x.denom())?;
    Some(Q::new(n, d))
}

/// Best rational approximation with bounded denominator, accepted only if it
/// reproduces `x` to near machine precision.
pub fn rationalize(x: f64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let tol = 1e-10 * x.abs().max(1.0);
    let max_den: i128 = 10_000;
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let approx = h1 as f64 / k1 as f64;
        if (approx - x).abs() <= tol {
            return Some(Q::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

impl Scalar for Q {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        qi(v)
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        q_to_f64(self)
    }
    fn signum_i(&self) -> i8 {
        if Zero::is_zero(self) {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn sqrt_exact(&self) -> Option<Self> {
        q_sqrt_exact(self)
    }
    fn recognize(x: f64, _xc: f64) -> Option<Self> {
        rationalize(x)
    }
    fn to_q(&self) -> Option<Q> {
        Some(self.clone())
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_ref(&self, o: &Self) -> Self {
        self / o
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_q(q: &Q) -> Self {
        q_to_f64(q)
    }
    fn is_zero(&self) -> bool {
        self.abs() <= DEFAULT_TOL
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn signum_i(&self) -> i8 {
        if self.abs() <= DEFAULT_TOL {
            0
        } else if *self > 0.0 {
            1
        } else {
            -1
        }
    }
    fn conj(&self) -> Self {
        *self
    }
    fn sqrt_exact(&self) -> Option<Self> {
        if *self < -DEFAULT_TOL {
            None
        } else {
            Some(self.max(0.0).sqrt())
        }
    }
    fn recognize(x: f64, _xc: f64) -> Option<Self> {
        Some(x)
    }
    fn to_q(&self) -> Option<Q> {
        Q::from_float(*self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_ref(&self, o: &Self) -> Self {
        self / o
    }
}

/// Element `a + b*sqrt(D)` of the real quadratic field `Q(sqrt D)`.
/// `D` must be a positive non-square integer.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quad<const D: i64> {
    pub a: Q,
    pub b: Q,
}

pub type Q2 = Quad<2>;
pub type Q3 = Quad<3>;
pub type Q5 = Quad<5>;

impl<const D: i64> Quad<D> {
    pub fn new(a: Q, b: Q) -> Self {
        Quad { a, b }
    }
    /// `sqrt(D)` itself.
    pub fn root() -> Self {
        Quad { a: qi(0), b: qi(1) }
    }
    fn d() -> Q {
        qi(D)
    }
}

impl<const D: i64> fmt::Debug for Quad<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<const D: i64> fmt::Display for Quad<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            write!(f, "{}", self.a)
        } else if Zero::is_zero(&self.a) {
            write!(f, "{}*sqrt({})", self.b, D)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, D)
        }
    }
}

impl<const D: i64> Add for Quad<D> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Quad { a: self.a + o.a, b: self.b + o.b }
    }
}
impl<const D: i64> Sub for Quad<D> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Quad { a: self.a - o.a, b: self.b - o.b }
    }
}
impl<const D: i64> Mul for Quad<D> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}
impl<const D: i64> Div for Quad<D> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self.div_ref(&o)
    }
}
impl<const D: i64> Neg for Quad<D> {
    type Output = Self;
    fn neg(self) -> Self {
        Quad { a: -self.a, b: -self.b }
    }
}

impl<const D: i64> Scalar for Quad<D> {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Quad { a: qi(0), b: qi(0) }
    }
    fn one() -> Self {
        Quad { a: qi(1), b: qi(0) }
    }
    fn from_i64(v: i64) -> Self {
        Quad { a: qi(v), b: qi(0) }
    }
    fn from_q(q: &Q) -> Self {
        Quad { a: q.clone(), b: qi(0) }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn to_f64(&self) -> f64 {
        q_to_f64(&self.a) + q_to_f64(&self.b) * (D as f64).sqrt()
    }
    fn signum_i(&self) -> i8 {
        let sa = self.a.signum_i();
        let sb = self.b.signum_i();
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let db2 = Self::d() * &self.b * &self.b;
        if a2 > db2 {
            sa
        } else {
            sb
        }
    }
    fn conj(&self) -> Self {
        Quad { a: self.a.clone(), b: -self.b.clone() }
    }
    fn sqrt_exact(&self) -> Option<Self> {
        if self.signum_i() < 0 {
            return None;
        }
        if Zero::is_zero(&self.b) {
            if let Some(r) = q_sqrt_exact(&self.a) {
                return Some(Quad { a: r, b: qi(0) });
            }
            let r = q_sqrt_exact(&(&self.a / Self::d()))?;
            return Some(Quad { a: qi(0), b: r });
        }
        // (p + r sqrt D)^2 = p^2 + D r^2 + 2 p r sqrt D
        let disc = &self.a * &self.a - Self::d() * &self.b * &self.b;
        let s = q_sqrt_exact(&disc)?;
        let two = qi(2);
        for p2 in [(&self.a + &s) / &two, (&self.a - &s) / &two] {
            if let Some(p) = q_sqrt_exact(&p2) {
                if Zero::is_zero(&p) {
                    continue;
                }
                let r = &self.b / (&two * &p);
                let cand = Quad { a: p, b: r };
                if cand.mul_ref(&cand) == *self {
                    return Some(if cand.signum_i() < 0 { -cand } else { cand });
                }
            }
        }
        None
    }
    fn recognize(x: f64, xc: f64) -> Option<Self> {
        let a = rationalize((x + xc) / 2.0)?;
        let b = rationalize((x - xc) / (2.0 * (D as f64).sqrt()))?;
        Some(Quad { a, b })
    }
    fn to_q(&self) -> Option<Q> {
        if Zero::is_zero(&self.b) {
            Some(self.a.clone())
        } else {
            None
        }
    }
    fn add_ref(&self, o: &Self) -> Self {
        Quad { a: &self.a + &o.a, b: &self.b + &o.b }
    }
    fn sub_ref(&self, o: &Self) -> Self {
        Quad { a: &self.a - &o.a, b: &self.b - &o.b }
    }
    fn mul_ref(&self, o: &Self) -> Self {
        Quad {
            a: &self.a * &o.a + Self::d() * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
    fn div_ref(&self, o: &Self) -> Self {
        let n = &o.a * &o.a - Self::d() * &o.b * &o.b;
        let c = o.conj();
        let p = self.mul_ref(&c);
        Quad { a: p.a / &n, b: p.b / n }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(-0.75), Some(q(-3, 4)));
        assert_eq!(rationalize(48.0 / 5.0), Some(q(48, 5)));
        assert_eq!(rationalize(std::f64::consts::PI), None);
    }

    #[test]
    fn quad_arithmetic() {
        let s = Q3::root();
        assert_eq!(s.mul_ref(&s), Q3::from_i64(3));
        let x = Q3::new(q(1, 2), q(1, 3));
        assert_eq!(x.mul_ref(&x.inv()), Q3::one());
        let y = x.mul_ref(&x);
        let r = y.sqrt_exact().unwrap();
        assert_eq!(r.mul_ref(&r), y);
        assert_eq!(Q3::new(qi(1), qi(-1)).signum_i(), -1);
        assert_eq!(Q3::new(qi(2), qi(-1)).signum_i(), 1);
        assert_eq!(Q5::from_i64(5).sqrt_exact(), Some(Q5::root()));
    }

    #[test]
    fn quad_recognize() {
        let x = Q5::new(q(3, 2), q(-1, 5));
        let r = Q5::recognize(x.to_f64(), x.conj().to_f64()).unwrap();
        assert_eq!(r, x);
    }
}

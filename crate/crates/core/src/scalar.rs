//! Exact scalars: arbitrary-precision rationals and cyclotomic numbers.
//!
//! A [`Cyclotomic`] is an element of Q(zeta_n) stored in the power basis
//! 1, zeta, ..., zeta^(phi(n)-1) modulo the cyclotomic polynomial Phi_n.
//! Values are kept in canonical form: reduced modulo Phi_n with the
//! conductor minimized over the divisors of n, so structural equality is
//! value equality. A value lying in Q always has conductor 1.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num::{BigInt, BigRational, One, Signed, Zero};
use once_cell::sync::Lazy;

pub type Int = BigInt;
pub type Rational = BigRational;

/// Euler totient.
pub fn phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Divisors of n in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

static CYCLO_CACHE: Lazy<Mutex<HashMap<u64, Arc<Vec<Int>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Coefficients of the n-th cyclotomic polynomial Phi_n, low degree
/// first, monic of degree phi(n). Computed by dividing x^n - 1 by the
/// Phi_d for proper divisors d, with memoization.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<Int>> {
    if let Some(p) = CYCLO_CACHE.lock().unwrap().get(&n) {
        return p.clone();
    }
    let poly = if n == 1 {
        vec![Int::from(-1), Int::from(1)]
    } else {
        // x^n - 1
        let mut num = vec![Int::zero(); n as usize + 1];
        num[0] = Int::from(-1);
        num[n as usize] = Int::one();
        for d in divisors(n) {
            if d < n {
                let phi_d = cyclotomic_polynomial(d);
                num = divide_monic_int(&num, &phi_d);
            }
        }
        num
    };
    let arc = Arc::new(poly);
    CYCLO_CACHE
        .lock()
        .unwrap()
        .insert(n, arc.clone());
    arc
}

/// Exact division of integer polynomials by a monic divisor.
fn divide_monic_int(num: &[Int], div: &[Int]) -> Vec<Int> {
    let dn = num.len() - 1;
    let dd = div.len() - 1;
    assert!(dn >= dd);
    let mut rem: Vec<Int> = num.to_vec();
    let mut quot = vec![Int::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            quot[k] = c.clone();
            for (i, dc) in div.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

/// Reduces a rational coefficient vector modulo the monic Phi_n.
fn reduce_mod_phi(mut coeffs: Vec<Rational>, n: u64) -> Vec<Rational> {
    let phi_n = cyclotomic_polynomial(n);
    let deg = phi_n.len() - 1;
    while coeffs.len() > deg {
        let top = coeffs.pop().unwrap();
        if !top.is_zero() {
            let k = coeffs.len() - deg;
            for (i, c) in phi_n.iter().take(deg).enumerate() {
                let sub = &top * Rational::from(c.clone());
                coeffs[k + i] -= sub;
            }
        }
    }
    coeffs.resize(deg, Rational::zero());
    coeffs
}

/// An element of a cyclotomic field Q(zeta_n), always in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<Rational>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![Rational::zero()],
        }
    }

    pub fn one() -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![Rational::one()],
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_integer<T: Into<Int>>(i: T) -> Self {
        Self::from_rational(Rational::from(i.into()))
    }

    /// zeta_n^k.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let k = k.rem_euclid(n as i64) as u64;
        let g = gcd(k, n);
        // reduce to a primitive root: zeta_n^k = zeta_{n/g}^{k/g}
        let (n, k) = if k == 0 { (1, 0) } else { (n / g, k / g) };
        let mut coeffs = vec![Rational::zero(); k as usize + 1];
        coeffs[k as usize] = Rational::one();
        Self::build(n, coeffs)
    }

    /// Canonicalizes an arbitrary coefficient vector in Q(zeta_n).
    fn build(n: u64, coeffs: Vec<Rational>) -> Self {
        let coeffs = reduce_mod_phi(coeffs, n);
        Cyclotomic {
            conductor: n,
            coeffs,
        }
        .minimize_conductor()
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Returns self; values are already canonical by construction.
    pub fn normalize(&self) -> Cyclotomic {
        self.clone()
    }

    /// Conductor minimization: finds the least divisor d of the current
    /// conductor with the value inside Q(zeta_d). Any subfield of
    /// Q(zeta_n) that is itself cyclotomic has conductor dividing n, so
    /// scanning divisors is exhaustive.
    fn minimize_conductor(self) -> Cyclotomic {
        let n = self.conductor;
        if n == 1 {
            return self;
        }
        for d in divisors(n) {
            if d == n {
                break;
            }
            let step = n / d;
            let deg_d = phi(d) as usize;
            let deg_n = phi(n) as usize;
            // columns: zeta_n^(j*step) reduced mod Phi_n, j = 0..phi(d)
            let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(deg_d);
            for j in 0..deg_d {
                let e = (j as u64 * step) as usize;
                let mut v = vec![Rational::zero(); e + 1];
                v[e] = Rational::one();
                cols.push(reduce_mod_phi(v, n));
            }
            if let Some(sol) = crate::linalg::solve_columns(&cols, &self.coeffs, deg_n) {
                return Cyclotomic {
                    conductor: d,
                    coeffs: sol,
                };
            }
        }
        self
    }

    /// Raises the representation to the larger conductor `target`
    /// (a multiple of the current one), without re-minimizing.
    fn raised(&self, target: u64) -> Vec<Rational> {
        assert_eq!(target % self.conductor, 0);
        let step = (target / self.conductor) as usize;
        let mut v = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k * step] = c.clone();
        }
        reduce_mod_phi(v, target)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational, if it lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.conductor == 1 {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<Int> {
        let r = self.as_rational()?;
        if r.is_integer() {
            Some(r.to_integer())
        } else {
            None
        }
    }

    /// Complex conjugation, zeta_n -> zeta_n^(n-1).
    pub fn conjugate(&self) -> Cyclotomic {
        self.galois(self.conductor as i64 - 1)
    }

    /// The Galois automorphism zeta_n -> zeta_n^t; requires gcd(t, n) = 1.
    pub fn galois(&self, t: i64) -> Cyclotomic {
        let n = self.conductor;
        if n == 1 {
            return self.clone();
        }
        let t = t.rem_euclid(n as i64) as u64;
        assert_eq!(gcd(t, n), 1, "galois exponent not coprime to conductor");
        let mut v = vec![Rational::zero(); n as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            let e = (k as u64 * t % n) as usize;
            v[e] += c;
        }
        Cyclotomic::build(n, v)
    }

    /// Scales by a rational.
    pub fn scale(&self, r: &Rational) -> Cyclotomic {
        if r.is_zero() {
            return Cyclotomic::zero();
        }
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    fn add_impl(&self, other: &Cyclotomic, sub: bool) -> Cyclotomic {
        let l = lcm(self.conductor, other.conductor);
        let mut a = self.raised(l);
        let b = other.raised(l);
        for (x, y) in a.iter_mut().zip(b.iter()) {
            if sub {
                *x -= y;
            } else {
                *x += y;
            }
        }
        Cyclotomic { conductor: l, coeffs: a }.minimize_conductor()
    }

    fn mul_impl(&self, other: &Cyclotomic) -> Cyclotomic {
        let l = lcm(self.conductor, other.conductor);
        let a = self.raised(l);
        let b = other.raised(l);
        let mut prod = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Cyclotomic::build(l, prod)
    }

    /// Deterministic total order for canonical output: by conductor,
    /// then lexicographically on coefficients. This is a structural
    /// order, not a numeric one.
    pub fn canonical_cmp(&self, other: &Cyclotomic) -> Ordering {
        self.conductor
            .cmp(&other.conductor)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.add_impl(rhs, false)
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.add_impl(rhs, true)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.mul_impl(rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Scalar literal grammar shared by data files and CLI output:
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := rational | zeta
//   rational := int ['/' int]
//   zeta   := 'z' int ['^' int]
// ---------------------------------------------------------------------------

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", format_rational(&r));
        }
        let n = self.conductor;
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let a = c.abs();
            if k == 0 {
                write!(f, "{}", format_rational(&a))?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", format_rational(&a))?;
                }
                if k == 1 {
                    write!(f, "z{}", n)?;
                } else {
                    write!(f, "z{}^{}", n, k)?;
                }
            }
        }
        Ok(())
    }
}

fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, ScalarError> {
        Err(ScalarError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<Int, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(Int::from_str(s).unwrap())
    }

    fn factor(&mut self) -> Result<Cyclotomic, ScalarError> {
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                let n = self.integer()?;
                let n: u64 = match n.try_into() {
                    Ok(v) if v >= 1 => v,
                    _ => return self.err("root-of-unity order must be a positive integer"),
                };
                let k = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let k = self.integer()?;
                    match i64::try_from(k) {
                        Ok(v) => v,
                        Err(_) => return self.err("exponent out of range"),
                    }
                } else {
                    1
                };
                Ok(Cyclotomic::root_of_unity(n, k))
            }
            Some(c) if c == b'-' || c.is_ascii_digit() => {
                let numer = self.integer()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let denom = self.integer()?;
                    if denom.is_zero() {
                        return self.err("zero denominator");
                    }
                    Ok(Cyclotomic::from_rational(Rational::new(numer, denom)))
                } else {
                    Ok(Cyclotomic::from_integer(numer))
                }
            }
            _ => self.err("expected rational or z<n>"),
        }
    }

    fn term(&mut self) -> Result<Cyclotomic, ScalarError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn expr(&mut self) -> Result<Cyclotomic, ScalarError> {
        let mut negate_first = false;
        if self.peek() == Some(b'-') {
            // leading sign belongs to the first term unless it starts a number
            let save = self.pos;
            self.pos += 1;
            if self.peek() == Some(b'z') {
                negate_first = true;
            } else {
                self.pos = save;
            }
        }
        let mut acc = self.term()?;
        if negate_first {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }
}

impl FromStr for Cyclotomic {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser::new(s);
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return p.err("trailing input");
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    #[test]
    fn zeta3_trace_is_minus_one() {
        let v = &z(3, 1) + &z(3, 2);
        assert_eq!(v, Cyclotomic::from_integer(-1));
        assert_eq!(v.conductor(), 1);
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        assert_eq!(&z(4, 1) * &z(4, 1), Cyclotomic::from_integer(-1));
    }

    #[test]
    fn zeta6_equals_one_plus_zeta3() {
        // both expanded in Q(zeta_12) agree
        let lhs = z(12, 2); // zeta_6 as zeta_12^2
        let rhs = &Cyclotomic::one() + &z(12, 4);
        assert_eq!(lhs, rhs);
        // and the canonical form lives in Q(zeta_3)
        assert_eq!(z(6, 1), &Cyclotomic::one() + &z(3, 1));
        assert_eq!(z(6, 1).conductor(), 3);
    }

    #[test]
    fn conjugation() {
        assert_eq!(z(5, 1).conjugate(), z(5, 4));
        let r = Cyclotomic::from_rational(Rational::new(Int::from(3), Int::from(7)));
        assert_eq!(r.conjugate(), r);
        assert_eq!(&z(3, 1).conjugate() + &z(3, 1), Cyclotomic::from_integer(-1));
        let w = &z(7, 3) + &z(5, 2).scale(&Rational::new(Int::from(2), Int::from(3)));
        assert_eq!(w.conjugate().conjugate(), w);
    }

    #[test]
    fn as_integer_cases() {
        let v = &(&z(4, 1) * &z(4, 1)) + &Cyclotomic::from_integer(2);
        assert_eq!(v.as_integer(), Some(Int::from(1)));
        let half = Cyclotomic::from_rational(Rational::new(Int::from(1), Int::from(2)));
        assert_eq!(half.as_integer(), None);
        let v = &(&z(3, 1) + &z(3, 2)) + &Cyclotomic::one();
        assert_eq!(v.as_integer(), Some(Int::from(0)));
    }

    #[test]
    fn power_conductor_divides_order() {
        for n in 1..=16u64 {
            for m in 0..(2 * n as i64) {
                let c = z(n, m);
                assert_eq!(n % c.conductor(), 0, "zeta_{}^{}", n, m);
            }
        }
    }

    #[test]
    fn parse_print_round_trip() {
        for s in ["1/6", "-z3^2", "1/2*z4", "0", "-7", "z5+z5^4", "2*z8^3-1/3"] {
            let v: Cyclotomic = s.parse().unwrap();
            let printed = v.to_string();
            let back: Cyclotomic = printed.parse().unwrap();
            assert_eq!(v, back, "{} -> {}", s, printed);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("z".parse::<Cyclotomic>().is_err());
        assert!("1/0".parse::<Cyclotomic>().is_err());
        assert!("1 + ".parse::<Cyclotomic>().is_err());
        assert!("z3^".parse::<Cyclotomic>().is_err());
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![Int::from(-1), Int::from(1)]);
        assert_eq!(
            *cyclotomic_polynomial(6),
            vec![Int::from(1), Int::from(-1), Int::from(1)]
        );
        assert_eq!(
            *cyclotomic_polynomial(12),
            vec![Int::from(1), Int::from(0), Int::from(-1), Int::from(0), Int::from(1)]
        );
    }
}

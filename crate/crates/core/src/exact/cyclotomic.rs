use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Coefficient, Rational};
use crate::error::{Error, Result};

/// The cyclotomic field ℚ(ζ_m), with Φ_m and the reduced powers of ζ_m cached.
///
/// Fields are interned: [`CyclotomicField::new`] returns the same `Arc` for
/// the same conductor, so contexts compare cheaply.
pub struct CyclotomicField {
    order: u64,
    degree: usize,
    modulus: Vec<BigInt>,
    // Nonzero lower coefficients of Φ_m as (exponent, coefficient).
    tail: Vec<(usize, i64)>,
    powers: OnceLock<Vec<Vec<BigInt>>>,
}

fn field_cache() -> &'static Mutex<HashMap<u64, Arc<CyclotomicField>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl CyclotomicField {
    /// Returns the (interned) field of conductor `m`.
    ///
    /// # Panics
    ///
    /// Panics if `m == 0`.
    pub fn new(m: u64) -> Arc<CyclotomicField> {
        assert!(m >= 1, "cyclotomic conductor must be positive");
        if let Some(f) = field_cache().lock().unwrap().get(&m) {
            return Arc::clone(f);
        }
        // Built outside the lock: construction recurses into the divisors.
        let modulus = phi_integer(m);
        let degree = modulus.len() - 1;
        let tail = modulus[..degree]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j, c.to_i64().expect("cyclotomic coefficient exceeds i64")))
            .collect();
        let field = Arc::new(CyclotomicField {
            order: m,
            degree,
            modulus,
            tail,
            powers: OnceLock::new(),
        });
        let mut cache = field_cache().lock().unwrap();
        Arc::clone(cache.entry(m).or_insert(field))
    }

    /// The conductor m.
    pub fn conductor(&self) -> u64 {
        self.order
    }

    /// The degree φ(m) of the field over ℚ.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Integer coefficients of Φ_m, lowest degree first.
    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    fn powers(&self) -> &[Vec<BigInt>] {
        self.powers.get_or_init(|| {
            let m = self.order as usize;
            let mut out = Vec::with_capacity(m);
            let mut cur = vec![BigInt::zero(); self.degree];
            cur[0] = BigInt::one();
            if self.degree == 1 {
                // Φ_1 = x - 1 or Φ_2 = x + 1: ζ is the rational -tail[0].
                let zeta = -BigInt::from(self.tail.first().map_or(0, |t| t.1));
                for _ in 0..m {
                    out.push(cur.clone());
                    cur[0] = &cur[0] * &zeta;
                }
                return out;
            }
            for _ in 0..m {
                out.push(cur.clone());
                // multiply by ζ: shift up one and fold the top coefficient back
                let top = cur.pop().unwrap();
                cur.insert(0, BigInt::zero());
                if !top.is_zero() {
                    for &(j, c) in &self.tail {
                        cur[j] -= &top * c;
                    }
                }
            }
            out
        })
    }

    pub fn zero(self: &Arc<Self>) -> Cyclotomic {
        Cyclotomic {
            field: Arc::clone(self),
            num: vec![BigInt::zero(); self.degree],
            den: BigInt::one(),
        }
    }

    pub fn one(self: &Arc<Self>) -> Cyclotomic {
        self.from_rational(&Rational::one())
    }

    pub fn from_rational(self: &Arc<Self>, r: &Rational) -> Cyclotomic {
        let mut num = vec![BigInt::zero(); self.degree];
        num[0] = r.numer().clone();
        Cyclotomic {
            field: Arc::clone(self),
            num,
            den: r.denom().clone(),
        }
    }

    /// ζ_m raised to `j` (any integer, taken mod m).
    pub fn root_of_unity(self: &Arc<Self>, j: i64) -> Cyclotomic {
        let idx = j.rem_euclid(self.order as i64) as usize;
        Cyclotomic {
            field: Arc::clone(self),
            num: self.powers()[idx].clone(),
            den: BigInt::one(),
        }
    }

    /// Builds an element from its power-basis coordinates (length φ(m)).
    pub fn from_coords(self: &Arc<Self>, coords: &[Rational]) -> Result<Cyclotomic> {
        if coords.len() != self.degree {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates for conductor {}, got {}",
                self.degree,
                self.order,
                coords.len()
            )));
        }
        let den = coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coords
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Cyclotomic::normalized(Arc::clone(self), num, den))
    }

    /// Builds `Σ c_j ζ_m^j` from a group-ring vector; exponents are taken mod m.
    pub fn from_powers(self: &Arc<Self>, terms: &[(i64, Rational)]) -> Cyclotomic {
        let den = terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let m = self.order as i64;
        let mut num = vec![BigInt::zero(); self.order as usize];
        for (j, c) in terms {
            num[j.rem_euclid(m) as usize] += c.numer() * (&den / c.denom());
        }
        self.from_int_poly(num, den)
    }

    /// `(Σ num_j x^j) / den` reduced to canonical form; `num` may have any length.
    pub(crate) fn from_int_poly(self: &Arc<Self>, mut num: Vec<BigInt>, den: BigInt) -> Cyclotomic {
        let m = self.order as usize;
        if num.len() > m {
            // x^m = 1 first: cheap and keeps the Φ_m reduction short
            let extra = num.split_off(m);
            for (i, c) in extra.into_iter().enumerate() {
                num[i % m] += c;
            }
        }
        self.reduce_big(&mut num);
        Cyclotomic::normalized(Arc::clone(self), num, den)
    }

    fn reduce_big(&self, p: &mut Vec<BigInt>) {
        let d = self.degree;
        if p.len() < d {
            p.resize(d, BigInt::zero());
            return;
        }
        for i in (d..p.len()).rev() {
            let c = std::mem::take(&mut p[i]);
            if c.is_zero() {
                continue;
            }
            let base = i - d;
            for &(j, t) in &self.tail {
                p[base + j] -= &c * t;
            }
        }
        p.truncate(d);
    }

    fn reduce_small(&self, p: &mut Vec<i128>) -> Option<()> {
        let d = self.degree;
        if p.len() < d {
            p.resize(d, 0);
            return Some(());
        }
        for i in (d..p.len()).rev() {
            let c = std::mem::take(&mut p[i]);
            if c == 0 {
                continue;
            }
            let base = i - d;
            for &(j, t) in &self.tail {
                let delta = c.checked_mul(t as i128)?;
                p[base + j] = p[base + j].checked_sub(delta)?;
            }
        }
        p.truncate(d);
        Some(())
    }
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta{})", self.order)
    }
}

/// Integer coefficients of Φ_m: x^m - 1 divided by Φ_d for every proper divisor d.
fn phi_integer(m: u64) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); m as usize + 1];
    p[0] = -BigInt::one();
    p[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            let divisor = CyclotomicField::new(d);
            p = divide_monic(&p, &divisor.modulus);
        }
    }
    p
}

// Exact quotient by a monic integer polynomial; the remainder must vanish.
fn divide_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Coefficients of the m-th cyclotomic polynomial Φ_m, lowest degree first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<Rational> {
    CyclotomicField::new(m)
        .modulus
        .iter()
        .map(|c| Rational::from_integer(c.clone()))
        .collect()
}

/// ζ_m^j as an element of ℚ(ζ_m).
pub fn root_of_unity(m: u64, j: i64) -> Cyclotomic {
    CyclotomicField::new(m).root_of_unity(j)
}

/// An element of ℚ(ζ_m) in canonical power-basis form.
///
/// Stored as integer numerators over one positive common denominator, with
/// the content of the numerators coprime to the denominator. Two elements
/// are equal iff their stored forms are equal.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclotomic {
    fn normalized(field: Arc<CyclotomicField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert_eq!(num.len(), field.degree);
        assert!(!den.is_zero());
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= &g;
        }
        Cyclotomic { field, num, den }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.field.order
    }

    /// Power-basis coordinates, `φ(m)` rationals.
    pub fn coords(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// The rational value, if this element lies in ℚ.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(Rational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.field.order == other.field.order {
            Ok(())
        } else {
            Err(Error::ConductorMismatch {
                left: self.field.order,
                right: other.field.order,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.combine(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.combine(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.product(other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.product(&other.inverse()?))
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                let (a, b) = (a * &fa, b * &fb);
                if subtract {
                    a - b
                } else {
                    a + b
                }
            })
            .collect();
        Cyclotomic::normalized(Arc::clone(&self.field), num, den)
    }

    fn product(&self, other: &Self) -> Self {
        let mut acc = Accumulator::new(&self.field);
        acc.add_product(self, other);
        acc.finish(&self.field)
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, r: &Rational) -> Self {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Cyclotomic::normalized(Arc::clone(&self.field), num, &self.den * r.denom())
    }

    /// Multiplicative inverse; fails only on zero.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.to_rational() {
            return Ok(self.field.from_rational(&r.recip()));
        }
        let a: Vec<Rational> = self.coords();
        let modulus: Vec<Rational> = self
            .field
            .modulus
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let inv = poly_inverse_mod(&a, &modulus).ok_or(Error::DivisionByZero)?;
        let mut coords = inv;
        coords.resize(self.field.degree, Rational::zero());
        self.field.from_coords(&coords)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut out = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                out = out.product(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base);
            }
        }
        Ok(out)
    }

    /// Complex conjugation, the automorphism ζ ↦ ζ⁻¹.
    pub fn conjugate(&self) -> Self {
        let m = self.field.order as usize;
        let powers = self.field.powers();
        let mut num = vec![BigInt::zero(); self.field.degree];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, p) in num.iter_mut().zip(&powers[(m - j) % m]) {
                if !p.is_zero() {
                    *slot += c * p;
                }
            }
        }
        Cyclotomic::normalized(Arc::clone(&self.field), num, self.den.clone())
    }

    /// True iff the element is fixed by complex conjugation.
    pub fn is_real(&self) -> bool {
        *self == self.conjugate()
    }

    /// The same number in ℚ(ζ_M), via ζ_m = ζ_M^{M/m}.
    pub fn embed(&self, big_m: u64) -> Result<Self> {
        let m = self.field.order;
        if big_m == 0 || !big_m.is_multiple_of(m) {
            return Err(Error::ConductorNotDivisible { from: m, to: big_m });
        }
        if big_m == m {
            return Ok(self.clone());
        }
        let target = CyclotomicField::new(big_m);
        let step = (big_m / m) as usize;
        let mut num = vec![BigInt::zero(); big_m as usize];
        for (j, c) in self.num.iter().enumerate() {
            num[j * step] = c.clone();
        }
        Ok(target.from_int_poly(num, self.den.clone()))
    }

    /// Recovers this number as an element of the subfield ℚ(ζ_d), d | m.
    ///
    /// Fails with [`Error::InvalidArgument`] if the element does not lie in
    /// that subfield.
    pub fn restrict(&self, d: u64) -> Result<Self> {
        let m = self.field.order;
        if d == 0 || !m.is_multiple_of(d) {
            return Err(Error::ConductorNotDivisible { from: d, to: m });
        }
        let sub = CyclotomicField::new(d);
        let step = (m / d) as usize;
        let powers = self.field.powers();
        // columns: images of the subfield basis ζ_d^j = ζ_m^{j·step}
        let cols: Vec<Vec<Rational>> = (0..sub.degree)
            .map(|j| {
                powers[j * step]
                    .iter()
                    .map(|c| Rational::from_integer(c.clone()))
                    .collect()
            })
            .collect();
        let coords = solve_columns(&cols, &self.coords())
            .ok_or_else(|| Error::InvalidArgument(format!("element does not lie in Q(zeta{d})")))?;
        sub.from_coords(&coords)
    }

    pub(crate) fn small_numerators(&self) -> Option<Vec<i64>> {
        self.num.iter().map(ToPrimitive::to_i64).collect()
    }
}

// Fused accumulator for Σ a·b: integer numerators over a running common
// denominator, in i128 until something overflows, then in BigInt.
pub(crate) struct Accumulator {
    small: Option<(Vec<i128>, i128)>,
    big: Option<(Vec<BigInt>, BigInt)>,
}

impl Accumulator {
    pub(crate) fn new(field: &CyclotomicField) -> Self {
        let len = 2 * field.degree - 1;
        Accumulator {
            small: Some((vec![0; len], 1)),
            big: None,
        }
    }

    pub(crate) fn add_product(&mut self, a: &Cyclotomic, b: &Cyclotomic) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        if let Some((buf, den)) = self.small.as_mut() {
            if Self::try_small(buf, den, a, b).is_some() {
                return;
            }
            let (buf, den) = self.small.take().unwrap();
            self.big = Some((
                buf.into_iter().map(BigInt::from).collect(),
                BigInt::from(den),
            ));
        }
        let (buf, den) = self.big.as_mut().unwrap();
        let pden = &a.den * &b.den;
        let l = den.lcm(&pden);
        let fa = &l / &*den;
        let fb = &l / &pden;
        if !fa.is_one() {
            for c in buf.iter_mut() {
                *c *= &fa;
            }
        }
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let xf = x * &fb;
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    buf[i + j] += &xf * y;
                }
            }
        }
        *den = l;
    }

    fn try_small(
        buf: &mut Vec<i128>,
        den: &mut i128,
        a: &Cyclotomic,
        b: &Cyclotomic,
    ) -> Option<()> {
        let an = a.small_numerators()?;
        let bn = b.small_numerators()?;
        let pden = (a.den.to_i64()? as i128).checked_mul(b.den.to_i64()? as i128)?;
        let l = lcm_i128(*den, pden)?;
        let fa = l / *den;
        let fb = l / pden;
        let mut next = if fa == 1 {
            buf.clone()
        } else {
            buf.iter()
                .map(|c| c.checked_mul(fa))
                .collect::<Option<Vec<_>>>()?
        };
        for (i, &x) in an.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let xf = (x as i128).checked_mul(fb)?;
            for (j, &y) in bn.iter().enumerate() {
                if y != 0 {
                    let t = xf.checked_mul(y as i128)?;
                    next[i + j] = next[i + j].checked_add(t)?;
                }
            }
        }
        *buf = next;
        *den = l;
        Some(())
    }

    pub(crate) fn finish(self, field: &Arc<CyclotomicField>) -> Cyclotomic {
        if let Some((mut buf, den)) = self.small {
            let saved = buf.clone();
            if field.reduce_small(&mut buf).is_some() {
                let num = buf.into_iter().map(BigInt::from).collect();
                return Cyclotomic::normalized(Arc::clone(field), num, BigInt::from(den));
            }
            let mut num: Vec<BigInt> = saved.into_iter().map(BigInt::from).collect();
            field.reduce_big(&mut num);
            return Cyclotomic::normalized(Arc::clone(field), num, BigInt::from(den));
        }
        let (mut num, den) = self.big.unwrap();
        field.reduce_big(&mut num);
        Cyclotomic::normalized(Arc::clone(field), num, den)
    }
}

fn lcm_i128(a: i128, b: i128) -> Option<i128> {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    (a / x).checked_mul(b)
}

// Rational polynomial helpers for inversion, lowest degree first.

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        quot[i] = c;
    }
    rem.truncate(db);
    trim(&mut rem);
    (quot, rem)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out: Vec<Rational> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

// u with a·u ≡ 1 (mod modulus) by the extended Euclidean algorithm.
fn poly_inverse_mod(a: &[Rational], modulus: &[Rational]) -> Option<Vec<Rational>> {
    let mut r0 = modulus.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    let mut s0: Vec<Rational> = Vec::new();
    let mut s1: Vec<Rational> = vec![Rational::one()];
    loop {
        if r1.is_empty() {
            return None;
        }
        if r1.len() == 1 {
            let c = r1[0].recip();
            return Some(s1.into_iter().map(|x| x * &c).collect());
        }
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        let (_, reduced) = poly_divrem(&s1, modulus);
        s1 = reduced;
    }
}

// Solves Σ x_j · cols[j] = rhs exactly; None if inconsistent.
fn solve_columns(cols: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let rows = rhs.len();
    let n = cols.len();
    let mut mat: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].recip();
        for x in mat[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = mat[r].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x -= y * &f;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if mat[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = mat[i][n].clone();
    }
    Some(x)
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.den == other.den && self.num == other.num
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = Rational::new(c.clone(), self.den.clone());
            let mag = r.abs();
            if first {
                if r.is_negative() {
                    write!(f, "-")?;
                }
            } else if r.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "zeta{}^{j}", self.field.order)?,
                (_, false) => write!(f, "{mag}*zeta{}^{j}", self.field.order)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {:?}", self.field)
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_add(rhs).expect("cyclotomic addition")
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_sub(rhs).expect("cyclotomic subtraction")
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_mul(rhs).expect("cyclotomic multiplication")
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: Arc::clone(&self.field),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Coefficient for Cyclotomic {
    type Ctx = Arc<CyclotomicField>;

    fn ctx(&self) -> Self::Ctx {
        Arc::clone(&self.field)
    }

    fn zero_of(ctx: &Self::Ctx) -> Self {
        ctx.zero()
    }

    fn from_rational(ctx: &Self::Ctx, r: &Rational) -> Self {
        ctx.from_rational(r)
    }

    fn vanishes(&self) -> bool {
        Cyclotomic::is_zero(self)
    }

    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn negated(&self) -> Self {
        -self
    }

    fn scaled(&self, r: &Rational) -> Self {
        self.scale(r)
    }

    fn inverse(&self) -> Result<Self> {
        Cyclotomic::inverse(self)
    }

    fn ctx_id(ctx: &Self::Ctx) -> u64 {
        ctx.order
    }

    fn sum_of_products<'a, I>(ctx: &Self::Ctx, pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a Self, &'a Self)>,
    {
        let mut acc = Accumulator::new(ctx);
        for (a, b) in pairs {
            acc.add_product(a, b);
        }
        acc.finish(ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn poly_from_roots(m: u64) -> Vec<Cyclotomic> {
        // Π_{gcd(j,m)=1} (x - ζ^j), coefficients in ℚ(ζ_m)
        let f = CyclotomicField::new(m);
        let mut poly = vec![f.one()];
        for j in 0..m {
            if crate::exact::gcd_u64(j, m) != 1 {
                continue;
            }
            let root = f.root_of_unity(j as i64);
            let mut next = vec![f.zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = &next[i + 1] + c;
                next[i] = &next[i] - &(c * &root);
            }
            poly = next;
        }
        poly
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![int(-1), int(1)]);
        assert_eq!(cyclotomic_polynomial(4), vec![int(1), int(0), int(1)]);
        assert_eq!(
            cyclotomic_polynomial(12),
            vec![int(1), int(0), int(-1), int(0), int(1)]
        );
    }

    #[test]
    fn phi12_by_division_oracle() {
        // x^12 - 1 divided by Φ1 Φ2 Φ3 Φ4 Φ6, using plain rational long division
        let mut p = vec![int(0); 13];
        p[0] = int(-1);
        p[12] = int(1);
        let divisors: [&[i64]; 5] = [&[-1, 1], &[1, 1], &[1, 1, 1], &[1, 0, 1], &[1, -1, 1]];
        for d in divisors {
            let d: Vec<Rational> = d.iter().map(|&c| int(c)).collect();
            let (q, r) = poly_divrem(&p, &d);
            assert!(r.is_empty());
            p = q;
        }
        assert_eq!(p, cyclotomic_polynomial(12));
    }

    #[test]
    fn roots_of_unity_basics() {
        let i = root_of_unity(4, 1);
        assert_eq!(&i * &i, CyclotomicField::new(4).from_rational(&int(-1)));
        for m in [1u64, 2, 5, 12, 30] {
            assert_eq!(root_of_unity(m, m as i64), CyclotomicField::new(m).one());
            assert_eq!(root_of_unity(m, 0), CyclotomicField::new(m).one());
        }
        let s = &root_of_unity(8, 1) + &root_of_unity(8, -1);
        assert_eq!(&s * &s, CyclotomicField::new(8).from_rational(&int(2)));
    }

    #[test]
    fn root_powers_and_minimal_polynomial() {
        for m in 1..=64u64 {
            let f = CyclotomicField::new(m);
            for j in 0..m as i64 {
                assert_eq!(
                    f.root_of_unity(j).pow(m as i64).unwrap(),
                    f.one(),
                    "m={m} j={j}"
                );
            }
            let expected: Vec<Cyclotomic> = cyclotomic_polynomial(m)
                .iter()
                .map(|c| f.from_rational(c))
                .collect();
            assert_eq!(poly_from_roots(m), expected, "m={m}");
        }
    }

    #[test]
    fn field_operations() {
        let f = CyclotomicField::new(4);
        let a = &f.one() + &f.root_of_unity(1);
        assert_eq!(&a * &a.inverse().unwrap(), f.one());
        assert_eq!(root_of_unity(5, 1).conjugate(), root_of_unity(5, 4));
        let z3 = &root_of_unity(3, 1) + &root_of_unity(3, 2);
        assert_eq!(z3, CyclotomicField::new(3).from_rational(&int(-1)));
        assert_eq!(f.zero().inverse(), Err(Error::DivisionByZero));
        assert_eq!(
            root_of_unity(4, 1).checked_mul(&root_of_unity(8, 1)),
            Err(Error::ConductorMismatch { left: 4, right: 8 })
        );
    }

    #[test]
    fn embedding() {
        assert_eq!(root_of_unity(4, 1).embed(8).unwrap(), root_of_unity(8, 2));
        let half = CyclotomicField::new(3).from_rational(&rat(1, 2));
        assert_eq!(half.embed(36).unwrap().coords()[0], rat(1, 2));
        assert_eq!(half.embed(36).unwrap().to_rational(), Some(rat(1, 2)));
        let z3 = root_of_unity(3, 1);
        let up = z3.embed(12).unwrap();
        assert_eq!(up.restrict(3).unwrap(), z3);
        assert!(root_of_unity(12, 1).restrict(3).is_err());
        assert_eq!(
            z3.embed(10),
            Err(Error::ConductorNotDivisible { from: 3, to: 10 })
        );
    }

    #[test]
    fn coords_round_trip_and_display() {
        let f = CyclotomicField::new(12);
        let x = f
            .from_coords(&[rat(1, 2), int(0), int(-3), rat(2, 3)])
            .unwrap();
        assert_eq!(f.from_coords(&x.coords()).unwrap(), x);
        assert_eq!(x.to_string(), "1/2 - 3*zeta12^2 + 2/3*zeta12^3");
        assert_eq!(f.zero().to_string(), "0");
    }

    #[test]
    fn big_fallback_matches_small_path() {
        let f = CyclotomicField::new(7);
        let big = f.from_rational(&Rational::from_integer(BigInt::from(1u64 << 62) * 7));
        let x = &big + &f.root_of_unity(3);
        let y = x.scale(&int(5));
        let lhs = &x * &y;
        let sq = &x * &x;
        assert_eq!(lhs, sq.scale(&int(5)));
        let fused = Cyclotomic::sum_of_products(&f, [(&x, &y), (&x, &x)]);
        assert_eq!(fused, sq.scale(&int(6)));
    }
}

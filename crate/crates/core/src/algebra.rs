//! Scalar rings: reals, complexes and the multicomplex algebra.
//!
//! The multicomplex algebra on `n` generators has basis `i_S` for subsets
//! `S` of the generators, with `i_k^2 = -1` and all generators commuting, so
//! `i_S i_T = (-1)^{|S & T|} i_{S ^ T}`. Subsets are stored as bitmasks with
//! generator `k` (0-based) at bit `k`.

use crate::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Largest supported generator count.
pub const MAX_GENERATORS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ring {
    Real,
    Complex,
    Multicomplex(usize),
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Real => write!(f, "real"),
            Ring::Complex => write!(f, "complex"),
            Ring::Multicomplex(n) => write!(f, "multicomplex({n})"),
        }
    }
}

/// Commutative ring elements the matrix code is generic over.
pub trait Scalar:
    Clone
    + fmt::Debug
    + Send
    + Sync
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn scale(&self, x: f64) -> Self;
    /// Largest absolute value of a real coordinate.
    fn magnitude(&self) -> f64;
    fn ring(&self) -> Ring;

    fn is_zero(&self) -> bool {
        self.magnitude() == 0.0
    }
}

/// Scalars with division, where Gaussian-type elimination is safe.
pub trait Field: Scalar + Copy + Div<Output = Self> {
    fn abs(&self) -> f64;
}

impl Scalar for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
    fn scale(&self, x: f64) -> Self {
        self * x
    }
    fn magnitude(&self) -> f64 {
        f64::abs(*self)
    }
    fn ring(&self) -> Ring {
        Ring::Real
    }
}

impl Field for f64 {
    fn abs(&self) -> f64 {
        f64::abs(*self)
    }
}

impl Scalar for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn scale(&self, x: f64) -> Self {
        self * x
    }
    fn magnitude(&self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
    fn ring(&self) -> Ring {
        Ring::Complex
    }
}

impl Field for Complex64 {
    fn abs(&self) -> f64 {
        self.norm()
    }
}

/// Element of the multicomplex algebra on `n` generators.
#[derive(Clone, PartialEq)]
pub struct Multicomplex {
    n: usize,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Multicomplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Multicomplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 && !(s == 0 && self.coeffs.iter().all(|&x| x == 0.0)) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for k in 0..self.n {
                if s >> k & 1 == 1 {
                    write!(f, "*i{}", k + 1)?;
                }
            }
        }
        Ok(())
    }
}

fn check_n(n: usize) {
    assert!(
        n <= MAX_GENERATORS,
        "at most {MAX_GENERATORS} generators are supported, got {n}"
    );
}

impl Multicomplex {
    pub fn zero(n: usize) -> Self {
        check_n(n);
        Multicomplex {
            n,
            coeffs: vec![0.0; 1 << n],
        }
    }

    pub fn real(n: usize, x: f64) -> Self {
        let mut z = Multicomplex::zero(n);
        z.coeffs[0] = x;
        z
    }

    pub fn one(n: usize) -> Self {
        Multicomplex::real(n, 1.0)
    }

    /// `c * i_S` for the subset with bitmask `mask`.
    pub fn monomial(n: usize, mask: usize, c: f64) -> Self {
        let mut z = Multicomplex::zero(n);
        z.coeffs[mask] = c;
        z
    }

    /// The generator `i_{k+1}` (0-based `k`).
    pub fn generator(n: usize, k: usize) -> Self {
        assert!(k < n);
        Multicomplex::monomial(n, 1 << k, 1.0)
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if n > MAX_GENERATORS {
            return Err(Error::SizeGuard {
                what: "generator count",
                limit: MAX_GENERATORS,
                got: n,
            });
        }
        if coeffs.len() != 1 << n {
            return Err(Error::RingMismatch(format!(
                "{} coefficients for {n} generators",
                coeffs.len()
            )));
        }
        Ok(Multicomplex { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    /// The real part: coefficient of the empty subset.
    pub fn re(&self) -> f64 {
        self.coeffs[0]
    }

    fn same_n(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "multicomplex generator counts differ ({} vs {})",
                self.n, other.n
            )))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_n(other)?;
        Ok(Multicomplex {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_n(other)?;
        let mut out = vec![0.0; self.coeffs.len()];
        for (s, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (t, &b) in other.coeffs.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let sign = if (s & t).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                out[s ^ t] += sign * a * b;
            }
        }
        Ok(Multicomplex { n: self.n, coeffs: out })
    }

    /// The automorphism `i_{k+1} -> -i_{k+1}`.
    pub fn flip_generator(&self, k: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, &c)| if s >> k & 1 == 1 { -c } else { c })
            .collect();
        Multicomplex { n: self.n, coeffs }
    }

    /// Whether every nonzero coefficient sits on an even subset.
    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(s, &c)| c == 0.0 || s.count_ones() % 2 == 0)
    }

    /// The single nonzero monomial, if there is exactly one.
    pub fn as_monomial(&self, tol: f64) -> Option<(usize, f64)> {
        let scale = self.magnitude();
        let mut it = self.coeffs.iter().enumerate().filter(|(_, &c)| c.abs() > tol * scale);
        let first = it.next()?;
        if it.next().is_some() {
            return None;
        }
        Some((first.0, *first.1))
    }
}

macro_rules! mc_binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl $tr for Multicomplex {
            type Output = Multicomplex;
            fn $f(self, rhs: Multicomplex) -> Multicomplex {
                $body(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Multicomplex> for &'a Multicomplex {
            type Output = Multicomplex;
            fn $f(self, rhs: &'a Multicomplex) -> Multicomplex {
                $body(self, rhs)
            }
        }
    };
}

mc_binop!(Add, add, |a: &Multicomplex, b: &Multicomplex| a
    .try_add(b)
    .expect("ring mismatch"));
mc_binop!(Sub, sub, |a: &Multicomplex, b: &Multicomplex| a
    .try_add(&-b)
    .expect("ring mismatch"));
mc_binop!(Mul, mul, |a: &Multicomplex, b: &Multicomplex| a
    .try_mul(b)
    .expect("ring mismatch"));

impl Neg for Multicomplex {
    type Output = Multicomplex;
    fn neg(self) -> Multicomplex {
        -&self
    }
}

impl Neg for &Multicomplex {
    type Output = Multicomplex;
    fn neg(self) -> Multicomplex {
        Multicomplex {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Scalar for Multicomplex {
    fn zero_like(&self) -> Self {
        Multicomplex::zero(self.n)
    }
    fn one_like(&self) -> Self {
        Multicomplex::one(self.n)
    }
    fn scale(&self, x: f64) -> Self {
        Multicomplex {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * x).collect(),
        }
    }
    fn magnitude(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
    fn ring(&self) -> Ring {
        Ring::Multicomplex(self.n)
    }
}

impl Multicomplex {
    /// Multiplicative inverse, when no character vanishes on `self`.
    pub fn try_inverse(&self) -> Result<Self> {
        let values: Vec<Complex64> = CharacterMap::all(self.n)
            .iter()
            .map(|h| h.apply(self).map(|z| 1.0 / z))
            .collect::<Result<_>>()?;
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::RingMismatch("element is a zero divisor".into()));
        }
        from_character_values(self.n, &values)
    }
}

/// Scalars with a (possibly failing) multiplicative inverse.
pub trait Invertible: Sized {
    fn try_inv(&self) -> Result<Self>;
}

impl Invertible for f64 {
    fn try_inv(&self) -> Result<Self> {
        if *self == 0.0 {
            return Err(Error::RingMismatch("division by zero".into()));
        }
        Ok(1.0 / self)
    }
}

impl Invertible for Complex64 {
    fn try_inv(&self) -> Result<Self> {
        if self.norm() == 0.0 {
            return Err(Error::RingMismatch("division by zero".into()));
        }
        Ok(1.0 / self)
    }
}

impl Invertible for Multicomplex {
    fn try_inv(&self) -> Result<Self> {
        self.try_inverse()
    }
}

/// Scalar component: the real part, or the coefficient of the empty monomial.
pub trait RealPart {
    fn real_part(&self) -> f64;
}

impl RealPart for f64 {
    fn real_part(&self) -> f64 {
        *self
    }
}

impl RealPart for Complex64 {
    fn real_part(&self) -> f64 {
        self.re
    }
}

impl RealPart for Multicomplex {
    fn real_part(&self) -> f64 {
        self.re()
    }
}

/// Ring homomorphism to the complex numbers sending `i_k` to `signs[k] * i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterMap {
    pub signs: Vec<i8>,
}

impl CharacterMap {
    /// Character number `index`: bit `k` set means generator `k` maps to `-i`.
    pub fn from_index(n: usize, index: usize) -> Self {
        CharacterMap {
            signs: (0..n).map(|k| if index >> k & 1 == 1 { -1 } else { 1 }).collect(),
        }
    }

    pub fn all(n: usize) -> Vec<Self> {
        check_n(n);
        (0..1 << n).map(|i| CharacterMap::from_index(n, i)).collect()
    }

    pub fn index(&self) -> usize {
        self.signs
            .iter()
            .enumerate()
            .map(|(k, &s)| if s < 0 { 1 << k } else { 0 })
            .sum()
    }

    /// `prod_{k in S} signs[k]`.
    pub fn chi(&self, mask: usize) -> f64 {
        let neg = (mask & self.index()).count_ones();
        if neg.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn apply(&self, x: &Multicomplex) -> Result<Complex64> {
        if x.n != self.signs.len() {
            return Err(Error::RingMismatch(format!(
                "character on {} generators applied to element on {}",
                self.signs.len(),
                x.n
            )));
        }
        let mut z = Complex64::new(0.0, 0.0);
        for (s, &c) in x.coeffs.iter().enumerate() {
            if c != 0.0 {
                z += i_pow(s.count_ones()) * (c * self.chi(s));
            }
        }
        Ok(z)
    }
}

pub fn apply_character(h: &CharacterMap, x: &Multicomplex) -> Result<Complex64> {
    h.apply(x)
}

/// `i^k`.
pub fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Recovers an element from its images under all `2^n` characters, given in
/// `CharacterMap::from_index` order. Imaginary residues are discarded.
pub fn from_character_values(n: usize, values: &[Complex64]) -> Result<Multicomplex> {
    if values.len() != 1 << n {
        return Err(Error::RingMismatch(format!(
            "{} character values for n = {n}",
            values.len()
        )));
    }
    let chars = CharacterMap::all(n);
    let norm = 1.0 / (1u64 << n) as f64;
    let coeffs = (0..1usize << n)
        .map(|s| {
            let sum: Complex64 = chars.iter().zip(values).map(|(h, y)| y * h.chi(s)).sum();
            (sum * i_pow(s.count_ones()).conj() * norm).re
        })
        .collect();
    Multicomplex::from_coeffs(n, coeffs)
}

/// Element of the real commutative algebra generated by `e_1..e_m` with
/// `e_k^2 = 1`; subsets of the `e_k` are bitmasks with `e_{k+1}` at bit `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenElement {
    m: usize,
    coeffs: Vec<f64>,
}

impl EvenElement {
    pub fn n_generators(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    pub fn generator(m: usize, k: usize) -> Self {
        let mut coeffs = vec![0.0; 1 << m];
        coeffs[1 << k] = 1.0;
        EvenElement { m, coeffs }
    }

    pub fn mul(&self, other: &EvenElement) -> EvenElement {
        assert_eq!(self.m, other.m);
        let mut out = vec![0.0; self.coeffs.len()];
        for (s, &a) in self.coeffs.iter().enumerate() {
            for (t, &b) in other.coeffs.iter().enumerate() {
                out[s ^ t] += a * b;
            }
        }
        EvenElement { m: self.m, coeffs: out }
    }

    /// Real character sending `e_{k+1}` to `signs[k]`.
    pub fn real_character(&self, signs: &[i8]) -> f64 {
        assert_eq!(signs.len(), self.m);
        let neg: usize = signs
            .iter()
            .enumerate()
            .map(|(k, &s)| if s < 0 { 1 << k } else { 0 })
            .sum();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(s, &c)| {
                if (s & neg).count_ones().is_multiple_of(2) {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }
}

/// Rewrites an even element over `i_0..i_{n-1}` in the generators
/// `e_k = i_0 i_k`, `k = 1..n-1`.
///
/// With `R = S \ {0}`, the basis element `i_S` equals `(-1)^{floor(|R|/2)} e_R`.
pub fn even_subalgebra_embed(x: &Multicomplex) -> Result<EvenElement> {
    if x.n == 0 {
        return Ok(EvenElement {
            m: 0,
            coeffs: vec![x.coeffs[0]],
        });
    }
    if !x.is_even() {
        return Err(Error::NotInEvenSubalgebra);
    }
    let m = x.n - 1;
    let mut coeffs = vec![0.0; 1 << m];
    for (s, &c) in x.coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let r = s >> 1;
        let sign = if (r.count_ones() / 2) % 2 == 0 { 1.0 } else { -1.0 };
        coeffs[r] += sign * c;
    }
    Ok(EvenElement { m, coeffs })
}

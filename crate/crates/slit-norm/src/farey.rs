//! Exact rational arithmetic and Farey-sequence combinatorics.
//!
//! Everything here is exact: rationals are auto-reduced fractions over
//! arbitrary-precision integers, and all predicates (neighborhood, parent
//! descent, crossing order of cutting words) are decided in integer
//! arithmetic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Float;

type BigRational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FareyError {
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("could not parse rational from {0:?}")]
    Parse(String),
    #[error("integers have no Farey parents")]
    IntegerHasNoParents,
    #[error("{0} and {1} are not Farey neighbors")]
    NotNeighbors(Rational, Rational),
    #[error("neighborhood is undefined for equal fractions")]
    EqualArguments,
    #[error("({0}, {1}) is not coprime")]
    NotCoprime(i64, i64),
    #[error("cutting words are defined for m, n >= 1 and the base classes (1,0), (0,1)")]
    OutOfRange(i64, i64),
}

/// An exact reduced fraction. The denominator is always positive and the
/// representation is always in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self, FareyError> {
        if den == 0 {
            return Err(FareyError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self, FareyError> {
        if den.is_zero() {
            return Err(FareyError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract(&self) -> Rational {
        Rational(&self.0 - BigRational::from_integer(self.0.floor().to_integer()))
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Rational, FareyError> {
        if self.is_zero() {
            return Err(FareyError::ZeroDenominator);
        }
        Ok(Rational(self.0.recip()))
    }

    /// The mediant (a+c)/(b+d), reduced. When the inputs are Farey
    /// neighbors the raw mediant is already in lowest terms.
    pub fn mediant(&self, other: &Rational) -> Rational {
        Rational(BigRational::new(
            self.numer() + other.numer(),
            self.denom() + other.denom(),
        ))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("rational converts to f64")
    }

    pub fn to_float<F: Float>(&self) -> F {
        F::from_f64_lossy(self.to_f64())
    }

    /// Signed determinant `other.num * self.den - self.num * other.den`.
    /// Its absolute value is 1 exactly for Farey neighbors.
    pub fn det(&self, other: &Rational) -> BigInt {
        other.numer() * self.denom() - self.numer() * other.denom()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Rational {
    type Err = FareyError;

    /// Parses `"p/q"` or a bare integer `"p"`, with an optional leading `-`.
    fn from_str(s: &str) -> Result<Self, FareyError> {
        let bad = || FareyError::Parse(s.to_owned());
        match s.split_once('/') {
            Some((p, q)) => {
                let num: BigInt = p.trim().parse().map_err(|_| bad())?;
                let den: BigInt = q.trim().parse().map_err(|_| bad())?;
                Self::from_big(num, den)
            }
            None => {
                let num: BigInt = s.trim().parse().map_err(|_| bad())?;
                Ok(Rational(BigRational::from_integer(num)))
            }
        }
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational(&self.0 - &rhs.0)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational(&self.0 * &rhs.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0.clone())
    }
}

/// The pair of Farey parents of a non-integer rational: `low < x < high`,
/// both neighbors of `x`, with `mediant(low, high) = x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareyParents {
    pub low: Rational,
    pub high: Rational,
}

/// True iff the determinant `|bc - ad|` of the two reduced fractions is 1.
/// Equal inputs are rejected.
pub fn are_neighbors(a: &Rational, b: &Rational) -> Result<bool, FareyError> {
    if a == b {
        return Err(FareyError::EqualArguments);
    }
    Ok(a.det(b).abs().is_one())
}

/// Farey parents via the continued-fraction descent: the second-to-last
/// convergent is one parent, the difference of the last two is the other.
/// Negative and large inputs are handled by integer translation, since the
/// Farey structure is periodic under translation by integers.
pub fn farey_parents(x: &Rational) -> Result<FareyParents, FareyError> {
    if x.is_integer() {
        return Err(FareyError::IntegerHasNoParents);
    }
    let shift = x.floor_int();
    let frac = x.fract();
    let cf = continued_fraction(&frac);
    let k = cf.convergents.len();
    debug_assert!(k >= 2);
    let last = &cf.convergents[k - 1];
    let prev = &cf.convergents[k - 2];
    let other = Rational::from_big(
        last.numer() - prev.numer(),
        last.denom() - prev.denom(),
    )
    .expect("denominators of consecutive convergents differ");
    let unshift = Rational(BigRational::from_integer(shift));
    let (low, high) = if prev < &frac {
        (prev.clone(), other)
    } else {
        (other, prev.clone())
    };
    Ok(FareyParents {
        low: &low + &unshift,
        high: &high + &unshift,
    })
}

/// The k-th Farey child of `base` along the chain toward `neighbor`:
/// `(k*base.num + neighbor.num) / (k*base.den + neighbor.den)`.
pub fn child_toward(base: &Rational, neighbor: &Rational, k: u64) -> Result<Rational, FareyError> {
    if !are_neighbors(base, neighbor)? {
        return Err(FareyError::NotNeighbors(base.clone(), neighbor.clone()));
    }
    let k = BigInt::from(k);
    Ok(Rational::from_big(
        &k * base.numer() + neighbor.numer(),
        &k * base.denom() + neighbor.denom(),
    )
    .expect("positive denominator"))
}

/// A continued-fraction expansion `[a0; a1, a2, ...]` together with its
/// convergents. Canonical form: all partial quotients after `a0` are >= 1,
/// and the final quotient of a rational expansion is >= 2 (so expansions
/// are unique).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub quotients: Vec<BigInt>,
    pub convergents: Vec<Rational>,
}

fn convergents_of(quotients: &[BigInt]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(quotients.len());
    let (mut p_prev, mut q_prev) = (BigInt::zero(), BigInt::one());
    let (mut p, mut q) = (BigInt::one(), BigInt::zero());
    for a in quotients {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(Rational::from_big(p.clone(), q.clone()).expect("positive denominator"));
    }
    out
}

/// Exact continued fraction of a rational; terminates with the input as its
/// last convergent.
pub fn continued_fraction(x: &Rational) -> ContinuedFraction {
    let mut quotients = Vec::new();
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    loop {
        let (q, r) = num_integer::Integer::div_mod_floor(&num, &den);
        quotients.push(q);
        if r.is_zero() {
            break;
        }
        num = den;
        den = r;
    }
    let convergents = convergents_of(&quotients);
    ContinuedFraction { quotients, convergents }
}

/// Continued fraction of a real number, stopping at `max_depth` quotients or
/// once the remaining tail is below `tol`.
pub fn continued_fraction_real(x: f64, max_depth: usize, tol: f64) -> ContinuedFraction {
    assert!(max_depth >= 1, "max_depth must be >= 1");
    let mut quotients = Vec::new();
    let mut t = x;
    for _ in 0..max_depth {
        let a = t.floor();
        quotients.push(BigInt::from(a as i64));
        let frac = t - a;
        if frac.abs() < tol {
            break;
        }
        t = 1.0 / frac;
    }
    let convergents = convergents_of(&quotients);
    ContinuedFraction { quotients, convergents }
}

/// Parses a finite decimal literal (e.g. "0.3", "-1.25") into an exact
/// rational. Returns None for anything else, including plain integers and
/// "p/q" forms, which `Rational::from_str` already handles.
pub fn decimal_to_rational(s: &str) -> Option<Rational> {
    let t = s.trim();
    let (sign, t) = match t.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, t),
    };
    let (int_part, frac_part) = t.split_once('.')?;
    if !int_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) || frac_part.len() > 15 {
        return None;
    }
    let int_val: i64 = if int_part.is_empty() { 0 } else { int_part.parse().ok()? };
    let frac_val: i64 = frac_part.parse().ok()?;
    let den = 10i64.checked_pow(frac_part.len() as u32)?;
    Rational::new(sign * (int_val * den + frac_val), den).ok()
}

/// Parses "p/q", a bare integer, or a finite decimal into an exact rational.
pub fn parse_exact(s: &str) -> Result<Rational, FareyError> {
    if let Some(r) = decimal_to_rational(s) {
        return Ok(r);
    }
    s.parse()
}

/// Letters of a cutting word: `s` marks a vertical grid-line crossing,
/// `t` a horizontal one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    S,
    T,
}

/// The word over `{s, t}` recording the grid crossings of a primitive
/// class, prefixed by `st`. Its abelianization is the class itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuttingWord {
    letters: Vec<Letter>,
}

impl CuttingWord {
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Letter counts `(#s, #t)`; equals `(m, n)` for the class the word encodes.
    pub fn abelianization(&self) -> (usize, usize) {
        let s = self.letters.iter().filter(|l| matches!(l, Letter::S)).count();
        (s, self.letters.len() - s)
    }

    pub fn concat(&self, other: &CuttingWord) -> CuttingWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        CuttingWord { letters }
    }
}

impl fmt::Display for CuttingWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            f.write_str(match l {
                Letter::S => "s",
                Letter::T => "t",
            })?;
        }
        Ok(())
    }
}

/// Cutting word of a coprime class `(m, n)` with `m, n >= 1`: the prefix
/// `st` followed by one `s` per interior vertical-line crossing and one `t`
/// per interior horizontal-line crossing of the open segment from the
/// origin to `(m, n)`, in traversal order.
///
/// The base classes follow the conventions `word(1, 0) = "s"` and
/// `word(0, 1) = "t"`, which make both the abelianization and the parent
/// concatenation identity hold.
pub fn cutting_word(m: i64, n: i64) -> Result<CuttingWord, FareyError> {
    match (m, n) {
        (1, 0) => return Ok(CuttingWord { letters: vec![Letter::S] }),
        (0, 1) => return Ok(CuttingWord { letters: vec![Letter::T] }),
        _ if m < 1 || n < 1 => return Err(FareyError::OutOfRange(m, n)),
        _ => {}
    }
    if num_integer::gcd(m, n) != 1 {
        return Err(FareyError::NotCoprime(m, n));
    }
    let mut letters = vec![Letter::S, Letter::T];
    // Vertical crossing x = i happens at parameter i/m, horizontal y = j at
    // j/n; coprimality rules out simultaneous crossings, so the merge order
    // is decided by comparing i*n with j*m.
    let (mut i, mut j) = (1i64, 1i64);
    while i < m || j < n {
        if j >= n || (i < m && i * n < j * m) {
            letters.push(Letter::S);
            i += 1;
        } else {
            letters.push(Letter::T);
            j += 1;
        }
    }
    Ok(CuttingWord { letters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    /// Test-only oracle: all reduced fractions with denominator <= k in
    /// [lo, hi], in increasing order (a window of the Farey sequence F_k).
    fn farey_sequence(k: i64, lo: &Rational, hi: &Rational) -> Vec<Rational> {
        let mut out = Vec::new();
        for den in 1..=k {
            let lo_num = (lo.to_f64() * den as f64).floor() as i64 - 2;
            let hi_num = (hi.to_f64() * den as f64).ceil() as i64 + 2;
            for num in lo_num..=hi_num {
                if num_integer::gcd(num.abs(), den) == 1 {
                    let r = rat(num, den);
                    if &r >= lo && &r <= hi {
                        out.push(r);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn mediant_examples() {
        assert_eq!(rat(1, 2).mediant(&rat(2, 3)), rat(3, 5));
        assert_eq!(rat(0, 1).mediant(&rat(0, 1)), rat(0, 1));
        // First fraction strictly between 0/1 and 1/2 in Farey order <= 3.
        let seq = farey_sequence(3, &rat(0, 1), &rat(1, 2));
        let inner: Vec<_> = seq
            .iter()
            .filter(|r| **r > rat(0, 1) && **r < rat(1, 2))
            .collect();
        assert_eq!(inner, vec![&rat(1, 3)]);
        assert_eq!(rat(0, 1).mediant(&rat(1, 2)), rat(1, 3));
    }

    #[test]
    fn neighbor_examples() {
        assert!(are_neighbors(&rat(1, 2), &rat(2, 3)).unwrap());
        assert!(!are_neighbors(&rat(1, 3), &rat(2, 3)).unwrap());
        // 0/1 and 1/1 are consecutive in the Farey sequence of order 1.
        let seq = farey_sequence(1, &rat(0, 1), &rat(1, 1));
        assert_eq!(seq, vec![rat(0, 1), rat(1, 1)]);
        assert!(are_neighbors(&rat(0, 1), &rat(1, 1)).unwrap());
        assert_eq!(
            are_neighbors(&rat(1, 2), &rat(1, 2)),
            Err(FareyError::EqualArguments)
        );
    }

    /// Exhaustive parent oracle: the two neighbors of x in the Farey
    /// sequence of order den(x), restricted around x.
    fn parents_by_enumeration(x: &Rational) -> (Rational, Rational) {
        let k = x.denom().to_i64().unwrap();
        let lo = &(x.fract()) - &Rational::one();
        let hi = &(x.fract()) + &Rational::one();
        let shift = Rational(num_rational::BigRational::from_integer(x.floor_int()));
        let frac = x.fract();
        let seq = farey_sequence(k, &lo, &hi);
        let pos = seq.iter().position(|r| *r == frac).unwrap();
        // Neighbors in F_k of x itself are its parents (x has the largest
        // denominator in the window).
        (&seq[pos - 1] + &shift, &seq[pos + 1] + &shift)
    }

    #[test]
    fn parent_examples() {
        let p = farey_parents(&rat(3, 5)).unwrap();
        assert_eq!((p.low.clone(), p.high.clone()), (rat(1, 2), rat(2, 3)));
        assert_eq!(parents_by_enumeration(&rat(3, 5)), (rat(1, 2), rat(2, 3)));

        let p = farey_parents(&rat(1, 3)).unwrap();
        assert_eq!((p.low.clone(), p.high.clone()), (rat(0, 1), rat(1, 2)));
        assert_eq!(parents_by_enumeration(&rat(1, 3)), (rat(0, 1), rat(1, 2)));

        assert_eq!(
            farey_parents(&rat(5, 1)),
            Err(FareyError::IntegerHasNoParents)
        );
    }

    #[test]
    fn parents_of_negative_rationals_translate() {
        for (num, den) in [(-1i64, 3i64), (-7, 5), (-13, 8), (9, 7), (22, 7)] {
            let x = rat(num, den);
            let p = farey_parents(&x).unwrap();
            assert!(p.low < x && x < p.high);
            assert!(are_neighbors(&p.low, &p.high).unwrap());
            assert_eq!(p.low.mediant(&p.high), x);
            let (lo, hi) = parents_by_enumeration(&x);
            assert_eq!((p.low, p.high), (lo, hi));
        }
    }

    #[test]
    fn child_toward_examples() {
        assert_eq!(child_toward(&rat(0, 1), &rat(1, 1), 1).unwrap(), rat(1, 2));
        assert_eq!(child_toward(&rat(1, 2), &rat(1, 3), 2).unwrap(), rat(3, 7));
        assert_eq!(child_toward(&rat(1, 2), &rat(0, 1), 3).unwrap(), rat(3, 7));
        assert_eq!(
            child_toward(&rat(1, 3), &rat(2, 3), 1),
            Err(FareyError::NotNeighbors(rat(1, 3), rat(2, 3)))
        );
        // Children stay neighbors of the base, and are Stern-Brocot nodes
        // whose parents include the base.
        for k in 1..=6 {
            let c = child_toward(&rat(1, 2), &rat(1, 3), k).unwrap();
            assert!(are_neighbors(&rat(1, 2), &c).unwrap());
            let p = farey_parents(&c).unwrap();
            assert!(p.low == rat(1, 2) || p.high == rat(1, 2));
        }
    }

    #[test]
    fn continued_fraction_examples() {
        let cf = continued_fraction(&rat(3, 5));
        let quots: Vec<i64> = cf.quotients.iter().map(|q| q.to_i64().unwrap()).collect();
        assert_eq!(quots, vec![0, 1, 1, 2]);
        assert_eq!(
            cf.convergents,
            vec![rat(0, 1), rat(1, 1), rat(1, 2), rat(3, 5)]
        );

        let cf = continued_fraction(&rat(2, 1));
        assert_eq!(cf.quotients, vec![num_bigint::BigInt::from(2)]);
        assert_eq!(cf.convergents, vec![rat(2, 1)]);

        // A truncated square-root value on purpose: the expansion must stop
        // at the requested depth with convergent 17/12.
        #[allow(clippy::approx_constant)]
        let x = 1.4142135f64;
        let cf = continued_fraction_real(x, 4, 1e-9);
        let quots: Vec<i64> = cf.quotients.iter().map(|q| q.to_i64().unwrap()).collect();
        assert_eq!(quots, vec![1, 2, 2, 2]);
        let last = cf.convergents.last().unwrap();
        assert_eq!(last, &rat(17, 12));
        assert!((x - last.to_f64()).abs() < 1.0 / 144.0);
    }

    #[test]
    fn cutting_word_examples() {
        assert_eq!(cutting_word(1, 1).unwrap().to_string(), "st");
        assert_eq!(cutting_word(2, 1).unwrap().to_string(), "sts");
        assert_eq!(cutting_word(3, 2).unwrap().to_string(), "ststs");
        assert_eq!(cutting_word(1, 0).unwrap().to_string(), "s");
        assert_eq!(cutting_word(0, 1).unwrap().to_string(), "t");
        assert_eq!(cutting_word(2, 4), Err(FareyError::NotCoprime(2, 4)));
        assert_eq!(cutting_word(-1, 2), Err(FareyError::OutOfRange(-1, 2)));
        // Concatenation identity for (3,2): parents of 2/3 are 1/2 < 1/1.
        let whole = cutting_word(3, 2).unwrap();
        let high = cutting_word(1, 1).unwrap();
        let low = cutting_word(2, 1).unwrap();
        assert_eq!(whole, high.concat(&low));
    }

    #[test]
    fn rational_round_trip() {
        for s in ["3/5", "-3/5", "7", "-7", "6/10"] {
            let r: Rational = s.parse().unwrap();
            let back: Rational = r.to_string().parse().unwrap();
            assert_eq!(r, back);
        }
        assert_eq!("6/10".parse::<Rational>().unwrap(), rat(3, 5));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x/2".parse::<Rational>().is_err());
    }

    /// Walks the Stern-Brocot tree between 0/1 and 1/1 down to `depth`,
    /// calling `f` on each (left, node, right) triple.
    fn walk_stern_brocot(depth: usize, f: &mut impl FnMut(&Rational, &Rational, &Rational)) {
        fn rec(
            lo: &Rational,
            hi: &Rational,
            depth: usize,
            f: &mut impl FnMut(&Rational, &Rational, &Rational),
        ) {
            if depth == 0 {
                return;
            }
            let mid = lo.mediant(hi);
            f(lo, &mid, hi);
            rec(lo, &mid, depth - 1, f);
            rec(&mid, hi, depth - 1, f);
        }
        rec(&Rational::zero(), &Rational::one(), depth, f);
    }

    #[test]
    fn mediant_lies_between_neighbors_and_parents_invert_it() {
        let mut count = 0usize;
        let mut check = |lo: &Rational, mid: &Rational, hi: &Rational| {
            count += 1;
            assert!(lo < mid && mid < hi);
            assert!(are_neighbors(lo, mid).unwrap());
            assert!(are_neighbors(mid, hi).unwrap());
            if !mid.is_integer() {
                let p = farey_parents(mid).unwrap();
                assert_eq!((&p.low, &p.high), (lo, hi));
            }
        };
        walk_stern_brocot(8, &mut check);
        // Dense sample of deeper nodes: pseudo-random descents to depth 20.
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..200 {
            let mut lo = Rational::zero();
            let mut hi = Rational::one();
            for _ in 0..20 {
                let mid = lo.mediant(&hi);
                check(&lo, &mid, &hi);
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                if state.is_multiple_of(2) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
        }
        assert!(count > 4000);
    }

    proptest! {
        #[test]
        fn cf_reconstructs_input_and_convergents_are_neighbors(num in -400i64..400, den in 1i64..120) {
            let x = rat(num, den);
            let cf = continued_fraction(&x);
            prop_assert_eq!(cf.convergents.last().unwrap(), &x);
            for w in cf.convergents.windows(2) {
                prop_assert!(are_neighbors(&w[0], &w[1]).unwrap());
            }
            if let Some(last) = cf.quotients.last() {
                if cf.quotients.len() > 1 {
                    prop_assert!(last >= &num_bigint::BigInt::from(2));
                }
            }
        }

        #[test]
        fn word_abelianization_matches_class(m in 1i64..40, n in 1i64..40) {
            prop_assume!(num_integer::gcd(m, n) == 1);
            let w = cutting_word(m, n).unwrap();
            let (s, t) = w.abelianization();
            prop_assert_eq!((s as i64, t as i64), (m, n));
        }
    }
}

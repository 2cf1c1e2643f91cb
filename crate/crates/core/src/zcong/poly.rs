//! Integer-valued polynomials in the binomial basis.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Σ λ_k · C(x, k)`. Trailing zero coefficients are stripped, so the zero
/// polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolyDoc", into = "PolyDoc")]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct PolyDoc {
    binomial: Vec<String>,
}

impl TryFrom<PolyDoc> for IntPoly {
    type Error = Error;

    fn try_from(doc: PolyDoc) -> Result<IntPoly> {
        let coeffs = doc
            .binomial
            .iter()
            .map(|s| s.trim().parse::<BigInt>().map_err(|e| Error::Parse(format!("{s}: {e}"))))
            .collect::<Result<_>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

impl From<IntPoly> for PolyDoc {
    fn from(p: IntPoly) -> PolyDoc {
        PolyDoc { binomial: p.coeffs.iter().map(ToString::to_string).collect() }
    }
}

/// `lcm(1, …, n)`, with `lcm_upto(0) = 1`.
pub fn lcm_upto(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)))
}

/// `C(x, k)` for any integer `x`.
pub fn binomial(x: &BigInt, k: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        // the product of i+1 consecutive integers is divisible by (i+1)!
        c = c * (x - BigInt::from(i)) / BigInt::from(i + 1);
    }
    c
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> IntPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPoly {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> IntPoly {
        IntPoly { coeffs: Vec::new() }
    }

    /// `C(x, k)`.
    pub fn basis(k: usize) -> IntPoly {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Degree, with the zero polynomial given degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut c = BigInt::one();
        let mut sum = BigInt::zero();
        for (k, l) in self.coeffs.iter().enumerate() {
            if k > 0 {
                c = c * (x - BigInt::from(k - 1)) / BigInt::from(k);
            }
            sum += l * &c;
        }
        sum
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|l| l * c).collect())
    }

    /// Converts standard-basis coefficients `c_0 + c_1 x + …` by forward
    /// differences at `0, …, n`.
    pub fn from_standard(standard: &[BigRational]) -> Result<IntPoly> {
        let n = standard.len();
        let mut row: Vec<BigRational> = (0..n).map(|x| eval_standard(standard, &BigRational::from_integer(x.into()))).collect();
        let mut coeffs = Vec::with_capacity(n);
        for _ in 0..n {
            let head = row[0].clone();
            if !head.is_integer() {
                return Err(Error::NotIntegerValued(format!("binomial coefficient {head}")));
            }
            coeffs.push(head.to_integer());
            row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        Ok(IntPoly::new(coeffs))
    }

    /// Standard-basis coefficients.
    pub fn to_standard(&self) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = Vec::new();
        // falling factorial x(x-1)…(x-k+1) in the standard basis
        let mut falling = vec![BigRational::one()];
        let mut factorial = BigInt::one();
        for (k, l) in self.coeffs.iter().enumerate() {
            if k > 0 {
                let shift = BigRational::from_integer(BigInt::from(k - 1));
                let mut next = vec![BigRational::zero(); falling.len() + 1];
                for (i, c) in falling.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= c * &shift;
                }
                falling = next;
                factorial *= BigInt::from(k);
            }
            if out.len() < falling.len() {
                out.resize(falling.len(), BigRational::zero());
            }
            let w = BigRational::new(l.clone(), factorial.clone());
            for (i, c) in falling.iter().enumerate() {
                out[i] += c * &w;
            }
        }
        while out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }

    /// Parses a polynomial expression in `x`: integers, `+ - * /`, `^` with a
    /// natural exponent, parentheses and `C(expr, k)`. Division is by
    /// constants only. The result must be integer valued.
    pub fn parse(s: &str) -> Result<IntPoly> {
        let standard = Parser::new(s).parse()?;
        IntPoly::from_standard(&standard)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, l) in self.coeffs.iter().enumerate() {
            if l.is_zero() {
                continue;
            }
            let sign = if l.is_negative() { "-" } else { "+" };
            if first {
                if l.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = l.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "C(x,{k})")?,
                (_, false) => write!(f, "{a}*C(x,{k})")?,
            }
        }
        Ok(())
    }
}

fn eval_standard(c: &[BigRational], x: &BigRational) -> BigRational {
    c.iter().rev().fold(BigRational::zero(), |acc, a| acc * x + a)
}

/// `lcm(n) · C(x, n)`.
pub fn cgg_generator(n: usize) -> IntPoly {
    IntPoly::basis(n).scale(&lcm_upto(n as u32))
}

/// Whether each `λ_k` is a multiple of `lcm(k)`; if not, a pair `(x, k)` with
/// `k ∤ P(x + k) − P(x)` found among `k ≤ deg`, `x ∈ [0, deg]`.
pub fn is_congruence_preserving(p: &IntPoly) -> (bool, Option<(i64, i64)>) {
    let ok = p.coeffs().iter().enumerate().all(|(k, l)| (l % lcm_upto(k as u32)).is_zero());
    if ok {
        return (true, None);
    }
    let d = p.degree() as i64;
    let witness = divisibility_scan(p, 1..=d, 0..=d);
    debug_assert!(witness.is_some(), "coefficient test failed without a small witness");
    (false, witness)
}

/// First `(x, k)` in the given ranges with `k ∤ P(x + k) − P(x)`, scanning `k`
/// in the outer loop.
pub fn divisibility_scan(
    p: &IntPoly,
    ks: impl IntoIterator<Item = i64>,
    xs: impl IntoIterator<Item = i64> + Clone,
) -> Option<(i64, i64)> {
    for k in ks {
        if k == 0 {
            continue;
        }
        for x in xs.clone() {
            let diff = p.eval_i64(x + k) - p.eval_i64(x);
            if !(diff % BigInt::from(k)).is_zero() {
                return Some((x, k));
            }
        }
    }
    None
}

/// `P_{2k} = C(x + k, 2k)` and `P_{2k+1} = C(x + k, 2k + 1)` in the binomial
/// basis, via `C(x + k, m) = Σ_j C(k, m − j) C(x, j)`.
pub fn pn_basis(n: usize) -> IntPoly {
    let k = n / 2;
    let kk = BigInt::from(k);
    IntPoly::new((0..=n).map(|j| binomial(&kk, n - j)).collect())
}

/// The point at which `P_n` first becomes nonzero: `0, −1, 1, −2, 2, …`.
/// `P_n` vanishes at all earlier points and equals `+1` there for even `n`,
/// `−1` for odd `n`.
pub fn pn_point(n: usize) -> i64 {
    let h = n.div_ceil(2) as i64;
    if n % 2 == 1 {
        -h
    } else {
        h
    }
}

/// Coefficients `a_0 … a_{2m}` with `f = Σ a_n P_n` on `[−m, m]`; `values[i]`
/// is `f(i − m)`.
pub fn pn_expand(values: &[BigInt]) -> Result<Vec<BigInt>> {
    if values.len().is_multiple_of(2) {
        return Err(Error::Malformed(format!("window of {} points is not symmetric around 0", values.len())));
    }
    let m = (values.len() / 2) as i64;
    let basis: Vec<IntPoly> = (0..values.len()).map(pn_basis).collect();
    let mut a: Vec<BigInt> = Vec::with_capacity(values.len());
    for (n, p) in basis.iter().enumerate() {
        let t = pn_point(n);
        for j in 0..n {
            if !p.eval_i64(pn_point(j)).is_zero() {
                return Err(Error::Internal(format!("P_{n} does not vanish at {}", pn_point(j))));
            }
        }
        let pivot = p.eval_i64(t);
        if pivot.abs() != BigInt::one() {
            return Err(Error::Internal(format!("P_{n}({t}) = {pivot}")));
        }
        let partial: BigInt = a.iter().zip(&basis).map(|(c, q)| c * q.eval_i64(t)).sum();
        a.push((&values[(t + m) as usize] - partial) * pivot);
    }
    Ok(a)
}

/// `Σ a_n P_n(x)`.
pub fn pn_reconstruct(a: &[BigInt], x: i64) -> BigInt {
    a.iter().enumerate().map(|(n, c)| c * pn_basis(n).eval_i64(x)).sum()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

type Std = Vec<BigRational>;

fn std_const(c: BigRational) -> Std {
    vec![c]
}

fn std_add(a: &Std, b: &Std, sign: i32) -> Std {
    let n = a.len().max(b.len());
    let get = |v: &Std, i: usize| v.get(i).cloned().unwrap_or_else(BigRational::zero);
    (0..n)
        .map(|i| if sign > 0 { get(a, i) + get(b, i) } else { get(a, i) - get(b, i) })
        .collect()
}

fn std_mul(a: &Std, b: &Std) -> Std {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn std_constant_value(a: &Std) -> Option<BigRational> {
    if a.iter().skip(1).all(Zero::is_zero) {
        Some(a.first().cloned().unwrap_or_else(BigRational::zero))
    } else {
        None
    }
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Parser<'a> {
        Parser { src, pos: 0 }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }

    fn peek(&mut self) -> Option<char> {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                return Some(c);
            }
        }
        None
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn parse(mut self) -> Result<Std> {
        let e = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Std> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = std_add(&acc, &self.term()?, 1);
            } else if self.eat('-') {
                acc = std_add(&acc, &self.term()?, -1);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Std> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = std_mul(&acc, &self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = std_constant_value(&d).ok_or_else(|| self.err("division by a non-constant"))?;
                if c.is_zero() {
                    return Err(self.err("division by zero"));
                }
                acc = acc.iter().map(|a| a / &c).collect();
            } else if matches!(self.peek(), Some(c) if c == '(' || c == 'x' || c == 'C' || c.is_ascii_digit()) {
                // implicit product, as in 3x or 2(x+1)
                acc = std_mul(&acc, &self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Std> {
        if self.eat('-') {
            let v = self.unary()?;
            return Ok(v.iter().map(|a| -a).collect());
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.natural()?;
            let mut out = std_const(BigRational::one());
            for _ in 0..e {
                out = std_mul(&out, &base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn natural(&mut self) -> Result<usize> {
        self.peek();
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| self.err("expected a natural number"))
    }

    fn atom(&mut self) -> Result<Std> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected )"));
                }
                Ok(e)
            }
            Some('x') | Some('X') => {
                self.pos += 1;
                Ok(vec![BigRational::zero(), BigRational::one()])
            }
            Some('C') => {
                self.pos += 1;
                if !self.eat('(') {
                    return Err(self.err("expected ( after C"));
                }
                let arg = self.expr()?;
                if !self.eat(',') {
                    return Err(self.err("expected ,"));
                }
                let k = self.natural()?;
                if !self.eat(')') {
                    return Err(self.err("expected )"));
                }
                let mut out = std_const(BigRational::one());
                for i in 0..k {
                    let shifted = std_add(&arg, &std_const(BigRational::from_integer(BigInt::from(i))), -1);
                    out = std_mul(&out, &shifted);
                    let d = BigRational::from_integer(BigInt::from(i + 1));
                    out = out.iter().map(|a| a / &d).collect();
                }
                Ok(out)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let n: BigInt = self.src[start..self.pos].parse().map_err(|_| self.err("bad integer"))?;
                Ok(std_const(BigRational::from_integer(n)))
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

//! Exact dense linear algebra over a prime field `F_p` or the rationals.
//!
//! A [`Matrix`] stores its entries in a representation specialised to its
//! field, so every operation dispatches on the field once and then runs a
//! monomorphic inner loop. [`Scalar`] is the field-tagged element type used at
//! API boundaries.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// The coefficient field of every computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    /// `F_p`, `p` prime.
    Prime(u32),
    Rational,
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if p < 2 || p > 65_521 || !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Mod(v.rem_euclid(p as i64) as u32, p),
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(self) -> Option<u64> {
        match self {
            Field::Prime(p) => Some(p as u64),
            Field::Rational => None,
        }
    }

    /// Parses an element written as `"3"`, `"-1"` or `"-1/2"`.
    pub fn parse_scalar(self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::Invalid(format!("`{text}` is not a field element"));
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (
                BigInt::from_str(n.trim()).map_err(|_| bad())?,
                BigInt::from_str(d.trim()).map_err(|_| bad())?,
            ),
            None => (BigInt::from_str(text).map_err(|_| bad())?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(bad());
        }
        match self {
            Field::Rational => Ok(Scalar::Rat(BigRational::new(num, den))),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| -> u32 {
                    let r = ((x % &pb) + &pb) % &pb;
                    r.to_string().parse().unwrap()
                };
                let d = reduce(&den);
                if d == 0 {
                    return Err(Error::Invalid(format!("`{text}`: denominator vanishes mod {p}")));
                }
                let f = FpArith(p);
                Ok(Scalar::Mod(f.mul(&reduce(&num), &f.inv(&d)), p))
            }
        }
    }

    /// Uniform element for finite fields; small integers in `[-3, 3]` for the rationals.
    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Mod(rng.random_range(0..p), p),
            Field::Rational => self.from_i64(rng.random_range(-3..=3)),
        }
    }

    /// Uniform nonzero element (rationals: nonzero integer in `[-3, 3]`).
    pub fn random_nonzero<R: Rng + ?Sized>(self, rng: &mut R) -> Scalar {
        loop {
            let s = self.random(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Every element of a finite field, in increasing order of representative.
    pub fn elements(self) -> Option<Vec<Scalar>> {
        match self {
            Field::Prime(p) => Some((0..p).map(|v| Scalar::Mod(v, p)).collect()),
            Field::Rational => None,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "Fp:{p}"),
            Field::Rational => write!(f, "Q"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "Q" || s.eq_ignore_ascii_case("rational") {
            return Ok(Field::Rational);
        }
        let digits = s
            .strip_prefix("Fp:")
            .or_else(|| s.strip_prefix("F_"))
            .or_else(|| s.strip_prefix('F'))
            .ok_or_else(|| Error::Invalid(format!("unknown field `{s}`")))?;
        let p = digits
            .parse::<u32>()
            .map_err(|_| Error::Invalid(format!("unknown field `{s}`")))?;
        Field::prime(p)
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d: &u32| d * d <= p).all(|d| p % d != 0)
}

/// A field element tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod(u32, u32),
    Rat(BigRational),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod(_, p) => Field::Prime(*p),
            Scalar::Rat(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod(v, _) => *v == 0,
            Scalar::Rat(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod(v, _) => *v == 1,
            Scalar::Rat(q) => q.is_one(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) if p == q => Scalar::Mod(FpArith(*p).add(a, b), *p),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => panic!("scalars from different fields"),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) if p == q => Scalar::Mod(FpArith(*p).mul(a, b), *p),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => panic!("scalars from different fields"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Mod(a, p) => Scalar::Mod(FpArith(*p).neg(a), *p),
            Scalar::Rat(a) => Scalar::Rat(-a),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Mod(a, p) => Scalar::Mod(FpArith(*p).inv(a), *p),
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(v, _) => write!(f, "{v}"),
            Scalar::Rat(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Rat(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

trait Arith {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
}

#[derive(Clone, Copy)]
struct FpArith(u32);

impl Arith for FpArith {
    type E = u32;
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.0 as u64) as u32
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.0 - a
        }
    }
    fn inv(&self, a: &u32) -> u32 {
        // Fermat: a^(p-2)
        let p = self.0 as u64;
        let (mut base, mut exp, mut acc) = (*a as u64 % p, p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        acc as u32
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
}

#[derive(Clone, Copy)]
struct QArith;

impl Arith for QArith {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Data {
    Fp(Vec<u32>),
    Q(Vec<BigRational>),
}

/// Dispatches a generic kernel over the field-specialised storage of one or more matrices.
macro_rules! dispatch {
    ($field:expr, |$ar:ident| $fp:expr, $q:expr) => {
        match $field {
            Field::Prime(p) => {
                let $ar = FpArith(p);
                $fp
            }
            Field::Rational => {
                let $ar = QArith;
                $q
            }
        }
    };
}

/// A dense row-major matrix over a [`Field`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Data,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        let data = match field {
            Field::Prime(_) => Data::Fp(vec![0; rows * cols]),
            Field::Rational => Data::Q(vec![BigRational::zero(); rows * cols]),
        };
        Matrix { field, rows, cols, data }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        let one = field.one();
        for i in 0..n {
            m.set(i, i, &one);
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, &f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from integer rows (reduced into the field).
    pub fn from_i64(field: Field, rows: &[Vec<i64>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    /// Builds an `rows x cols` matrix from row vectors of scalars.
    pub fn from_rows(field: Field, rows: usize, cols: usize, entries: &[Vec<Scalar>]) -> Result<Matrix> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!("expected a {rows}x{cols} matrix")));
        }
        if entries.iter().flatten().any(|s| s.field() != field) {
            return Err(Error::Invalid(format!("entry outside {field}")));
        }
        Ok(Matrix::from_fn(field, rows, cols, |i, j| entries[i][j].clone()))
    }

    pub fn column_vector(field: Field, entries: &[Scalar]) -> Matrix {
        Matrix::from_fn(field, entries.len(), 1, |i, _| entries[i].clone())
    }

    /// The standard basis vector `e_k` of length `n`, as a column.
    pub fn unit_vector(field: Field, n: usize, k: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, 1);
        m.set(k, 0, &field.one());
        m
    }

    pub fn random<R: Rng + ?Sized>(field: Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
        Matrix::from_fn(field, rows, cols, |_, _| field.random(rng))
    }

    pub fn random_invertible<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Matrix {
        loop {
            let m = Matrix::random(field, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        let k = i * self.cols + j;
        match (&self.data, self.field) {
            (Data::Fp(v), Field::Prime(p)) => Scalar::Mod(v[k], p),
            (Data::Q(v), _) => Scalar::Rat(v[k].clone()),
            _ => unreachable!(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, s: &Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        let k = i * self.cols + j;
        match (&mut self.data, s) {
            (Data::Fp(v), Scalar::Mod(x, p)) if Field::Prime(*p) == self.field => v[k] = *x,
            (Data::Q(v), Scalar::Rat(x)) => v[k] = x.clone(),
            _ => panic!("scalar from a different field"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Data::Fp(v) => v.iter().all(|x| *x == 0),
            Data::Q(v) => v.iter().all(|x| x.is_zero()),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.field, self.rows)
    }

    /// Rows of the matrix as displayed scalars.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    fn same_field(&self, other: &Matrix) {
        assert_eq!(self.field, other.field, "matrices over different fields");
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.same_field(other);
        assert_eq!(self.cols, other.rows, "shape mismatch in product {:?} * {:?}", self.shape(), other.shape());
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let data = dispatch!(self.field, |ar| {
            let (Data::Fp(a), Data::Fp(b)) = (&self.data, &other.data) else { unreachable!() };
            let p = ar.0 as u64;
            let mut out = vec![0u32; n * m];
            let mut acc = vec![0u64; m];
            for i in 0..n {
                acc.iter_mut().for_each(|x| *x = 0);
                for t in 0..k {
                    let x = a[i * k + t] as u64;
                    if x == 0 {
                        continue;
                    }
                    let row = &b[t * m..(t + 1) * m];
                    for (slot, y) in acc.iter_mut().zip(row) {
                        *slot = (*slot + x * *y as u64) % p;
                    }
                }
                for j in 0..m {
                    out[i * m + j] = acc[j] as u32;
                }
            }
            Data::Fp(out)
        }, {
            let (Data::Q(a), Data::Q(b)) = (&self.data, &other.data) else { unreachable!() };
            let mut out = vec![ar.zero(); n * m];
            for i in 0..n {
                for t in 0..k {
                    let x = &a[i * k + t];
                    if x.is_zero() {
                        continue;
                    }
                    for j in 0..m {
                        let y = &b[t * m + j];
                        if !y.is_zero() {
                            out[i * m + j] += x * y;
                        }
                    }
                }
            }
            Data::Q(out)
        });
        Matrix { field: self.field, rows: n, cols: m, data }
    }

    fn zip_with(&self, other: &Matrix, sub: bool) -> Matrix {
        self.same_field(other);
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sum");
        let data = dispatch!(self.field, |ar| {
            let (Data::Fp(a), Data::Fp(b)) = (&self.data, &other.data) else { unreachable!() };
            Data::Fp(a.iter().zip(b).map(|(x, y)| if sub { ar.sub(x, y) } else { ar.add(x, y) }).collect())
        }, {
            let (Data::Q(a), Data::Q(b)) = (&self.data, &other.data) else { unreachable!() };
            Data::Q(a.iter().zip(b).map(|(x, y)| if sub { ar.sub(x, y) } else { ar.add(x, y) }).collect())
        });
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, false)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, true)
    }

    pub fn add_assign(&mut self, other: &Matrix) {
        *self = self.add(other);
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        assert_eq!(s.field(), self.field, "scalar from a different field");
        let data = match (&self.data, s) {
            (Data::Fp(a), Scalar::Mod(x, p)) => {
                let ar = FpArith(*p);
                Data::Fp(a.iter().map(|y| ar.mul(x, y)).collect())
            }
            (Data::Q(a), Scalar::Rat(x)) => Data::Q(a.iter().map(|y| x * y).collect()),
            _ => unreachable!(),
        };
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        let (r, c) = (self.rows, self.cols);
        match (&self.data, &mut t.data) {
            (Data::Fp(a), Data::Fp(b)) => {
                for i in 0..r {
                    for j in 0..c {
                        b[j * r + i] = a[i * c + j];
                    }
                }
            }
            (Data::Q(a), Data::Q(b)) => {
                for i in 0..r {
                    for j in 0..c {
                        b[j * r + i] = a[i * c + j].clone();
                    }
                }
            }
            _ => unreachable!(),
        }
        t
    }

    /// Kronecker product; row `(i, k)` of the result is `i * other.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        self.same_field(other);
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        let mut out = Matrix::zeros(self.field, r1 * r2, c1 * c2);
        let cols = c1 * c2;
        match (&self.data, &other.data, &mut out.data) {
            (Data::Fp(a), Data::Fp(b), Data::Fp(o)) => {
                let ar = FpArith(match self.field {
                    Field::Prime(p) => p,
                    _ => unreachable!(),
                });
                for i in 0..r1 {
                    for j in 0..c1 {
                        let x = a[i * c1 + j];
                        if x == 0 {
                            continue;
                        }
                        for k in 0..r2 {
                            for l in 0..c2 {
                                o[(i * r2 + k) * cols + j * c2 + l] = ar.mul(&x, &b[k * c2 + l]);
                            }
                        }
                    }
                }
            }
            (Data::Q(a), Data::Q(b), Data::Q(o)) => {
                for i in 0..r1 {
                    for j in 0..c1 {
                        let x = &a[i * c1 + j];
                        if x.is_zero() {
                            continue;
                        }
                        for k in 0..r2 {
                            for l in 0..c2 {
                                o[(i * r2 + k) * cols + j * c2 + l] = x * &b[k * c2 + l];
                            }
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &Matrix) {
        self.same_field(block);
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols, "block out of bounds");
        let c = self.cols;
        match (&mut self.data, &block.data) {
            (Data::Fp(a), Data::Fp(b)) => {
                for i in 0..block.rows {
                    a[(row + i) * c + col..(row + i) * c + col + block.cols]
                        .copy_from_slice(&b[i * block.cols..(i + 1) * block.cols]);
                }
            }
            (Data::Q(a), Data::Q(b)) => {
                for i in 0..block.rows {
                    a[(row + i) * c + col..(row + i) * c + col + block.cols]
                        .clone_from_slice(&b[i * block.cols..(i + 1) * block.cols]);
                }
            }
            _ => unreachable!(),
        }
    }

    pub fn block(&self, row: usize, col: usize, rows: usize, cols: usize) -> Matrix {
        assert!(row + rows <= self.rows && col + cols <= self.cols, "block out of bounds");
        let idx_r: Vec<usize> = (row..row + rows).collect();
        let idx_c: Vec<usize> = (col..col + cols).collect();
        self.select(&idx_r, &idx_c)
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let c = self.cols;
        let data = match &self.data {
            Data::Fp(a) => Data::Fp(rows.iter().flat_map(|i| cols.iter().map(move |j| a[i * c + j])).collect()),
            Data::Q(a) => Data::Q(rows.iter().flat_map(|i| cols.iter().map(move |j| a[i * c + j].clone())).collect()),
        };
        Matrix { field: self.field, rows: rows.len(), cols: cols.len(), data }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    pub fn column(&self, j: usize) -> Matrix {
        self.select_columns(&[j])
    }

    pub fn hstack(field: Field, rows: usize, parts: &[Matrix]) -> Matrix {
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut c = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "hstack row mismatch");
            out.set_block(0, c, m);
            c += m.cols;
        }
        out
    }

    pub fn vstack(field: Field, cols: usize, parts: &[Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut r = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "vstack column mismatch");
            out.set_block(r, 0, m);
            r += m.rows;
        }
        out
    }

    pub fn block_diag(field: Field, parts: &[Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for m in parts {
            out.set_block(r, c, m);
            r += m.rows;
            c += m.cols;
        }
        out
    }

    /// Column-major flattening `vec(X)`, matching `vec(AXB) = (B^T ⊗ A) vec(X)`.
    pub fn vectorize(&self) -> Matrix {
        self.transpose().reshape(self.rows * self.cols, 1)
    }

    /// Inverse of [`Matrix::vectorize`].
    pub fn unvectorize(v: &Matrix, rows: usize, cols: usize) -> Matrix {
        assert_eq!(v.rows * v.cols, rows * cols);
        v.reshape(cols, rows).transpose()
    }

    /// Reinterprets the row-major storage with a new shape.
    pub fn reshape(&self, rows: usize, cols: usize) -> Matrix {
        assert_eq!(self.rows * self.cols, rows * cols, "reshape size mismatch");
        Matrix { field: self.field, rows, cols, data: self.data.clone() }
    }

    /// Reduced row echelon form and pivot columns.
    ///
    /// Pivots are chosen at the leftmost available column, using the smallest
    /// remaining row index with a nonzero entry, so the result is fully
    /// deterministic.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut out = self.clone();
        let (r, c) = (self.rows, self.cols);
        let pivots = match &mut out.data {
            Data::Fp(a) => match self.field {
                Field::Prime(p) => rref_kernel(&FpArith(p), a, r, c),
                Field::Rational => unreachable!(),
            },
            Data::Q(a) => rref_kernel(&QArith, a, r, c),
        };
        (out, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().1.len()
    }

    /// Basis of the null space `{x : A x = 0}` as the columns of the result.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let n = self.cols;
        let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
        let mut k = Matrix::zeros(self.field, n, free.len());
        let one = self.field.one();
        for (col, &f) in free.iter().enumerate() {
            k.set(f, col, &one);
            for (row, &p) in pivots.iter().enumerate() {
                k.set(p, col, &r.get(row, f).neg());
            }
        }
        k
    }

    /// Indices of a deterministic maximal set of independent columns.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Basis of the column space, taken from the columns of `self`.
    pub fn image(&self) -> Matrix {
        self.select_columns(&self.independent_columns())
    }

    /// One solution `X` of `A X = B`; free variables are set to zero.
    pub fn solve(&self, b: &Matrix) -> Result<Matrix> {
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: {}x{} system with {}-row right-hand side",
                self.rows, self.cols, b.rows
            )));
        }
        self.same_field(b);
        let aug = Matrix::hstack(self.field, self.rows, &[self.clone(), b.clone()]);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(Error::Inconsistent);
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, &r.get(row, self.cols + j));
            }
        }
        Ok(x)
    }

    /// One solution `X` of `X A = B`.
    pub fn solve_left(&self, b: &Matrix) -> Result<Matrix> {
        Ok(self.transpose().solve(&b.transpose())?.transpose())
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = Matrix::hstack(self.field, n, &[self.clone(), Matrix::identity(self.field, n)]);
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// For a matrix with independent columns, a left inverse `L` with `L A = I`.
    ///
    /// `L` reads coordinates with respect to the columns of `A` off a fixed
    /// set of rows, so it is exact on the column space and arbitrary elsewhere.
    pub fn left_inverse(&self) -> Option<Matrix> {
        let rows = self.transpose().independent_columns();
        if rows.len() != self.cols {
            return None;
        }
        let square = self.select_rows(&rows);
        let inv = square.inverse()?;
        let mut selector = Matrix::zeros(self.field, self.cols, self.rows);
        let one = self.field.one();
        for (k, &r) in rows.iter().enumerate() {
            selector.set(k, r, &one);
        }
        Some(inv.mul(&selector))
    }

    /// For a matrix with independent rows, a right inverse `R` with `A R = I`.
    pub fn right_inverse(&self) -> Option<Matrix> {
        Some(self.transpose().left_inverse()?.transpose())
    }

    /// Whether every column of `other` lies in the column space of `self`.
    pub fn spans(&self, other: &Matrix) -> bool {
        other.cols == 0 || self.solve(other).is_ok()
    }
}

fn rref_kernel<A: Arith>(ar: &A, a: &mut [A::E], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut lead = 0;
    for col in 0..cols {
        if lead == rows {
            break;
        }
        let Some(pr) = (lead..rows).find(|&r| !ar.is_zero(&a[r * cols + col])) else {
            continue;
        };
        if pr != lead {
            for j in 0..cols {
                a.swap(pr * cols + j, lead * cols + j);
            }
        }
        let inv = ar.inv(&a[lead * cols + col]);
        for j in col..cols {
            a[lead * cols + j] = ar.mul(&a[lead * cols + j], &inv);
        }
        for r in 0..rows {
            if r == lead {
                continue;
            }
            let factor = a[r * cols + col].clone();
            if ar.is_zero(&factor) {
                continue;
            }
            for j in col..cols {
                let t = ar.mul(&factor, &a[lead * cols + j]);
                a[r * cols + j] = ar.sub(&a[r * cols + j], &t);
            }
        }
        pivots.push(col);
        lead += 1;
    }
    pivots
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{:?}", self.field, self.to_strings())
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

/// A quotient map `π: V → V/W` with a section `σ` satisfying `π σ = 1`.
///
/// The complement of `W` is spanned by the standard basis vectors at the
/// non-pivot columns of the echelon form of `W^T`, so the quotient basis is
/// deterministic.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub projection: Matrix,
    pub section: Matrix,
}

impl Quotient {
    /// Quotient of `field^n` by the column span of `relations` (`n x r`).
    pub fn of(field: Field, n: usize, relations: &Matrix) -> Quotient {
        assert_eq!(relations.rows(), n);
        let (r, pivots) = if relations.cols() == 0 {
            (Matrix::zeros(field, 0, n), Vec::new())
        } else {
            relations.transpose().rref()
        };
        let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
        let q = free.len();
        let mut projection = Matrix::zeros(field, q, n);
        let mut section = Matrix::zeros(field, n, q);
        let one = field.one();
        for (k, &f) in free.iter().enumerate() {
            projection.set(k, f, &one);
            section.set(f, k, &one);
        }
        for (row, &p) in pivots.iter().enumerate() {
            for (k, &f) in free.iter().enumerate() {
                projection.set(k, p, &r.get(row, f).neg());
            }
        }
        Quotient { projection, section }
    }

    pub fn dim(&self) -> usize {
        self.projection.rows()
    }
}

/// Signed integer view of a rational, used by tests and generators.
pub fn rational_to_i64(q: &BigRational) -> Option<i64> {
    if !q.is_integer() {
        return None;
    }
    let n = q.numer();
    if n.abs() > BigInt::from(i64::MAX) {
        return None;
    }
    n.to_string().parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn kernel_of_identity_is_zero() {
        for f in [Field::Prime(2), Field::Prime(3), Q] {
            assert_eq!(Matrix::identity(f, 3).kernel().cols(), 0);
        }
    }

    #[test]
    fn rank_of_zero_matrix() {
        assert_eq!(Matrix::zeros(Q, 3, 4).rank(), 0);
        assert_eq!(Matrix::zeros(Q, 0, 4).rank(), 0);
    }

    #[test]
    fn solve_forced_rational_system() {
        // x + y = 1, x - y = 0
        let a = Matrix::from_i64(Q, &[vec![1, 1], vec![1, -1]]);
        let b = Matrix::from_i64(Q, &[vec![1], vec![0]]);
        let x = a.solve(&b).unwrap();
        let half = Q.parse_scalar("1/2").unwrap();
        assert_eq!(x.get(0, 0), half);
        assert_eq!(x.get(1, 0), half);
    }

    #[test]
    fn inconsistent_system() {
        let a = Matrix::from_i64(Q, &[vec![1, 1], vec![1, 1]]);
        let b = Matrix::from_i64(Q, &[vec![1], vec![0]]);
        assert_eq!(a.solve(&b), Err(Error::Inconsistent));
        let c = Matrix::from_i64(Q, &[vec![1]]);
        assert!(matches!(a.solve(&c), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn parse_scalars_in_prime_fields() {
        let f = Field::Prime(5);
        assert_eq!(f.parse_scalar("-1").unwrap(), Scalar::Mod(4, 5));
        assert_eq!(f.parse_scalar("1/2").unwrap(), Scalar::Mod(3, 5));
        assert!(f.parse_scalar("1/5").is_err());
        assert_eq!("Fp:7".parse::<Field>().unwrap(), Field::Prime(7));
        assert!("Fp:8".parse::<Field>().is_err());
    }

    #[test]
    fn quotient_kills_relations() {
        let f = Field::Prime(3);
        let w = Matrix::from_i64(f, &[vec![1], vec![1], vec![0]]);
        let q = Quotient::of(f, 3, &w);
        assert_eq!(q.dim(), 2);
        assert!(q.projection.mul(&w).is_zero());
        assert!(q.projection.mul(&q.section).is_identity());
    }

    #[test]
    fn left_inverse_reads_coordinates() {
        let f = Field::Prime(101);
        let a = Matrix::from_i64(f, &[vec![1, 0], vec![2, 1], vec![0, 5]]);
        let l = a.left_inverse().unwrap();
        assert!(l.mul(&a).is_identity());
    }

    #[test]
    fn vectorize_matches_kronecker_identity() {
        let f = Q;
        let a = Matrix::from_i64(f, &[vec![1, 2], vec![3, 4], vec![0, 1]]);
        let x = Matrix::from_i64(f, &[vec![1, -1, 2], vec![0, 3, 1]]);
        let b = Matrix::from_i64(f, &[vec![2], vec![1], vec![-1]]);
        let lhs = a.mul(&x).mul(&b).vectorize();
        let rhs = b.transpose().kron(&a).mul(&x.vectorize());
        assert_eq!(lhs, rhs);
        assert_eq!(Matrix::unvectorize(&x.vectorize(), 2, 3), x);
    }
}

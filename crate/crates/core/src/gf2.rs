//! Bit-packed linear algebra over GF(2).
//!
//! Vectors hold at most 128 bits so that a symplectic vector `(x|z)` for up
//! to 64 qubits fits in a single word. Matrix rows are stored the same way and
//! every row operation is a word-wise XOR.

use std::fmt;

use crate::error::{Error, Result};

/// Maximum number of bits in a [`BitVec`] or columns in a [`BitMatrix`].
pub const MAX_BITS: usize = 128;

fn mask(len: usize) -> u128 {
    if len >= 128 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

/// A fixed-length vector over GF(2). Component `i` is bit `i` of the word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    bits: u128,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        assert!(len <= MAX_BITS, "BitVec length {len} exceeds {MAX_BITS}");
        Self { bits: 0, len }
    }

    /// Builds a vector from the low `len` bits of `bits`; higher bits are dropped.
    pub fn from_bits(bits: u128, len: usize) -> Self {
        assert!(len <= MAX_BITS, "BitVec length {len} exceeds {MAX_BITS}");
        Self {
            bits: bits & mask(len),
            len,
        }
    }

    pub fn from_slice(values: &[u8]) -> Self {
        let mut v = Self::zeros(values.len());
        for (i, &b) in values.iter().enumerate() {
            v.assign(i, b & 1 == 1);
        }
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "index {i} out of range for BitVec of length {}",
            self.len
        );
        (self.bits >> i) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        self.assign(i, true);
    }

    pub fn assign(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "index {i} out of range for BitVec of length {}",
            self.len
        );
        if value {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "index {i} out of range for BitVec of length {}",
            self.len
        );
        self.bits ^= 1 << i;
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        (self.bits & other.bits).count_ones() & 1 == 1
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        BitVec {
            bits: self.bits ^ other.bits,
            len: self.len,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| (self.bits >> i) & 1 == 1)
    }

    /// Splits a `2n`-bit symplectic vector into its `x` and `z` halves.
    pub fn split_symplectic(&self) -> (BitVec, BitVec) {
        assert!(
            self.len.is_multiple_of(2),
            "symplectic vectors have even length"
        );
        let n = self.len / 2;
        (
            BitVec::from_bits(self.bits, n),
            BitVec::from_bits(self.bits >> n, n),
        )
    }

    /// Concatenates `x` and `z` into the symplectic vector `(x|z)`.
    pub fn symplectic(x: &BitVec, z: &BitVec) -> BitVec {
        assert_eq!(x.len, z.len);
        BitVec::from_bits(x.bits | (z.bits << x.len), 2 * x.len)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec(")?;
        for b in self.iter() {
            write!(f, "{}", b as u8)?;
        }
        write!(f, ")")
    }
}

/// The standard symplectic form `x·z' + x'·z` on `(x|z)` vectors.
pub fn symplectic_form(a: &BitVec, b: &BitVec) -> bool {
    assert_eq!(a.len, b.len, "symplectic form needs equal lengths");
    assert!(
        a.len.is_multiple_of(2),
        "symplectic vectors have even length"
    );
    let (ax, az) = a.split_symplectic();
    let (bx, bz) = b.split_symplectic();
    ax.dot(&bz) ^ bx.dot(&az)
}

/// A dense `rows × cols` matrix over GF(2); row `r` column `c` is bit `c` of
/// `rows[r]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<u128>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols <= MAX_BITS, "at most {MAX_BITS} columns supported");
        Self {
            rows: vec![0; rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i] = 1 << i;
        }
        m
    }

    /// Builds a matrix from 0/1 rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if cols > MAX_BITS {
            return Err(Error::OutOfRange(format!(
                "{cols} columns exceeds {MAX_BITS}"
            )));
        }
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if v & 1 == 1 {
                    m.rows[r] |= 1 << c;
                }
            }
        }
        Ok(m)
    }

    pub fn from_row_vecs(rows: &[BitVec]) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            if v.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: v.len(),
                });
            }
            m.rows[r] = v.bits();
        }
        Ok(m)
    }

    pub fn from_col_vecs(cols: &[BitVec]) -> Result<Self> {
        let nrows = cols.first().map_or(0, BitVec::len);
        let mut m = Self::zeros(nrows, cols.len());
        for (c, v) in cols.iter().enumerate() {
            if v.len() != nrows {
                return Err(Error::DimensionMismatch {
                    expected: nrows,
                    found: v.len(),
                });
            }
            for r in 0..nrows {
                if v.get(r) {
                    m.rows[r] |= 1 << c;
                }
            }
        }
        Ok(m)
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(c < self.cols);
        (self.rows[r] >> c) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(c < self.cols);
        if value {
            self.rows[r] |= 1 << c;
        } else {
            self.rows[r] &= !(1 << c);
        }
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_bits(self.rows[r], self.cols)
    }

    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows.len());
        for (r, &row) in self.rows.iter().enumerate() {
            if (row >> c) & 1 == 1 {
                v.set(r);
            }
        }
        v
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, &row) in self.rows.iter().enumerate() {
            for c in 0..self.cols {
                if (row >> c) & 1 == 1 {
                    t.rows[c] |= 1 << r;
                }
            }
        }
        t
    }

    /// Reduced row echelon form. Columns are scanned left to right and the
    /// pivot is the first row (from the top) with a one in that column.
    pub fn rref(&self) -> (BitMatrix, usize, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == m.rows.len() {
                break;
            }
            let bit = 1u128 << c;
            let Some(p) = (next..m.rows.len()).find(|&r| m.rows[r] & bit != 0) else {
                continue;
            };
            m.rows.swap(next, p);
            let pivot_row = m.rows[next];
            for r in 0..m.rows.len() {
                if r != next && m.rows[r] & bit != 0 {
                    m.rows[r] ^= pivot_row;
                }
            }
            pivots.push(c);
            next += 1;
        }
        (m, next, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    pub fn is_rref(&self) -> bool {
        let (r, _, _) = self.rref();
        &r == self
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = BitVec::zeros(self.rows.len());
        for (r, &row) in self.rows.iter().enumerate() {
            if (row & v.bits()).count_ones() & 1 == 1 {
                out.set(r);
            }
        }
        Ok(out)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if other.rows.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows.len(),
            });
        }
        let mut out = BitMatrix::zeros(self.rows.len(), other.cols);
        for (r, &row) in self.rows.iter().enumerate() {
            let mut acc = 0u128;
            for k in 0..self.cols {
                if (row >> k) & 1 == 1 {
                    acc ^= other.rows[k];
                }
            }
            out.rows[r] = acc;
        }
        Ok(out)
    }

    /// Inverse by Gauss-Jordan elimination on `[A | I]`, or `None` if singular.
    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.rows.len();
        if n == 0 && self.cols == 0 {
            return Some(self.clone());
        }
        if n != self.cols || 2 * n > MAX_BITS {
            if n != self.cols {
                return None;
            }
            return self.inverse_wide();
        }
        let aug: Vec<u128> = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, &row)| row | (1u128 << (n + r)))
            .collect();
        let (red, _, pivots) = BitMatrix {
            rows: aug,
            cols: 2 * n,
        }
        .rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let rows = red.rows.iter().map(|&row| row >> n).collect();
        Some(BitMatrix { rows, cols: n })
    }

    fn inverse_wide(&self) -> Option<BitMatrix> {
        let n = self.rows.len();
        let mut a = self.rows.clone();
        let mut inv: Vec<u128> = (0..n).map(|i| 1u128 << i).collect();
        for c in 0..n {
            let bit = 1u128 << c;
            let p = (c..n).find(|&r| a[r] & bit != 0)?;
            a.swap(c, p);
            inv.swap(c, p);
            for r in 0..n {
                if r != c && a[r] & bit != 0 {
                    a[r] ^= a[c];
                    inv[r] ^= inv[c];
                }
            }
        }
        Some(BitMatrix { rows: inv, cols: n })
    }

    pub fn is_invertible(&self) -> bool {
        self.rows.len() == self.cols && self.rank() == self.cols
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows.len(), self.cols)?;
        for r in 0..self.rows.len() {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{}", self.get(r, c) as u8)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// An invertible affine map `v ↦ A v + b` over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineMap {
    linear: BitMatrix,
    shift: BitVec,
}

impl AffineMap {
    pub fn new(linear: BitMatrix, shift: BitVec) -> Result<Self> {
        if linear.num_rows() != linear.num_cols() {
            return Err(Error::DimensionMismatch {
                expected: linear.num_rows(),
                found: linear.num_cols(),
            });
        }
        if shift.len() != linear.num_rows() {
            return Err(Error::DimensionMismatch {
                expected: linear.num_rows(),
                found: shift.len(),
            });
        }
        if !linear.is_invertible() {
            return Err(Error::NotInvertible);
        }
        Ok(Self { linear, shift })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            linear: BitMatrix::identity(n),
            shift: BitVec::zeros(n),
        }
    }

    pub fn translation(shift: BitVec) -> Self {
        Self {
            linear: BitMatrix::identity(shift.len()),
            shift,
        }
    }

    /// CNOT with the given control and target components (`v_t += v_c`).
    pub fn cnot(n: usize, control: usize, target: usize) -> Self {
        assert!(control != target && control < n && target < n);
        let mut linear = BitMatrix::identity(n);
        linear.set(target, control, true);
        Self {
            linear,
            shift: BitVec::zeros(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn linear(&self) -> &BitMatrix {
        &self.linear
    }

    pub fn shift(&self) -> &BitVec {
        &self.shift
    }

    pub fn apply(&self, v: &BitVec) -> Result<BitVec> {
        Ok(self.linear.mul_vec(v)?.xor(&self.shift))
    }

    /// `self ∘ other`, i.e. `v ↦ self(other(v))`.
    pub fn compose(&self, other: &AffineMap) -> Result<AffineMap> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let linear = self.linear.mul(&other.linear)?;
        let shift = self.linear.mul_vec(&other.shift)?.xor(&self.shift);
        Ok(AffineMap { linear, shift })
    }

    pub fn invert(&self) -> AffineMap {
        let linear = self
            .linear
            .inverse()
            .expect("AffineMap invariant: linear part is invertible");
        let shift = linear.mul_vec(&self.shift).expect("square");
        AffineMap { linear, shift }
    }
}

/// Dimension of a maximal isotropic subspace inside `span(basis)`, where the
/// vectors live in the `2n`-dimensional symplectic space `(x|z)`.
///
/// Equals `dim V - rank(ω|_V) / 2`.
pub fn max_isotropic_dim(basis: &[BitVec]) -> usize {
    if basis.is_empty() {
        return 0;
    }
    let m = BitMatrix::from_row_vecs(basis).expect("vectors of equal length");
    let (red, dim, _) = m.rref();
    let independent: Vec<BitVec> = (0..dim).map(|r| red.row(r)).collect();
    let mut gram = BitMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in (i + 1)..dim {
            if symplectic_form(&independent[i], &independent[j]) {
                gram.set(i, j, true);
                gram.set(j, i, true);
            }
        }
    }
    dim - gram.rank() / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> BitMatrix {
        BitMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rref_examples() {
        let (_, rank, pivots) = m(&[&[1, 1], &[1, 1], &[0, 1]]).rref();
        assert_eq!(rank, 2);
        assert_eq!(pivots, vec![0, 1]);

        let (z, rank, pivots) = BitMatrix::zeros(3, 4).rref();
        assert_eq!(rank, 0);
        assert!(pivots.is_empty());
        assert_eq!(z, BitMatrix::zeros(3, 4));

        let id = BitMatrix::identity(4);
        let (r, rank, _) = id.rref();
        assert_eq!(r, id);
        assert_eq!(rank, 4);
    }

    #[test]
    fn rref_is_reduced() {
        let a = m(&[&[0, 1, 1, 0], &[1, 1, 0, 1], &[1, 0, 1, 1]]);
        let (r, rank, pivots) = a.rref();
        assert_eq!(rank, 2);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(r.row(0), BitVec::from_slice(&[1, 0, 1, 1]));
        assert_eq!(r.row(1), BitVec::from_slice(&[0, 1, 1, 0]));
        assert!(r.row(2).is_zero());
    }

    #[test]
    fn affine_examples() {
        let v = BitVec::from_slice(&[1, 0, 1]);
        assert_eq!(AffineMap::identity(3).apply(&v).unwrap(), v);

        let b = BitVec::from_slice(&[0, 1, 1]);
        let shift = AffineMap::translation(b);
        assert_eq!(shift.apply(&BitVec::zeros(3)).unwrap(), b);

        let cx = AffineMap::cnot(2, 0, 1);
        let out = cx.apply(&BitVec::from_slice(&[1, 0])).unwrap();
        assert_eq!(out, BitVec::from_slice(&[1, 1]));

        assert!(cx.apply(&BitVec::zeros(3)).is_err());
    }

    #[test]
    fn affine_compose_and_invert() {
        let f = AffineMap::cnot(3, 0, 2)
            .compose(&AffineMap::translation(BitVec::from_slice(&[1, 1, 0])))
            .unwrap();
        assert_eq!(f.compose(&AffineMap::identity(3)).unwrap(), f);
        assert_eq!(AffineMap::identity(3).invert(), AffineMap::identity(3));
        let x = AffineMap::translation(BitVec::from_slice(&[0, 1, 0]));
        assert_eq!(x.invert(), x);
        assert_eq!(f.compose(&f.invert()).unwrap(), AffineMap::identity(3));
        assert!(f.compose(&AffineMap::identity(2)).is_err());
    }

    #[test]
    fn singular_linear_part_rejected() {
        let singular = m(&[&[1, 1], &[1, 1]]);
        assert!(matches!(
            AffineMap::new(singular, BitVec::zeros(2)),
            Err(Error::NotInvertible)
        ));
    }

    #[test]
    fn isotropic_examples() {
        let n = 3;
        let full: Vec<BitVec> = (0..2 * n).map(|i| BitVec::unit(2 * n, i)).collect();
        assert_eq!(max_isotropic_dim(&full), n);
        assert_eq!(max_isotropic_dim(&[BitVec::unit(2 * n, 0)]), 1);
        // X_0 and Z_0 anticommute: only one of them fits.
        assert_eq!(
            max_isotropic_dim(&[BitVec::unit(2 * n, 0), BitVec::unit(2 * n, n)]),
            1
        );
    }

    #[test]
    fn wide_inverse() {
        let mut a = BitMatrix::identity(100);
        a.set(5, 70, true);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), BitMatrix::identity(100));
    }
}

//! Square matrices over GF(2) of size at most 192, rows stored as bitsets.

use std::fmt;

/// Maximum supported dimension: three coordinates of a degree-64 field.
pub const MAX_DIM: usize = 192;

/// A vector of GF(2)^n, n <= 192, bit `i` of word `i / 64`.
pub type Bits = [u64; 3];

#[inline]
pub fn bit(v: &Bits, i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
pub fn flip(v: &mut Bits, i: usize) {
    v[i / 64] ^= 1 << (i % 64);
}

#[inline]
pub fn xor(a: &Bits, b: &Bits) -> Bits {
    [a[0] ^ b[0], a[1] ^ b[1], a[2] ^ b[2]]
}

#[inline]
pub fn is_zero(v: &Bits) -> bool {
    v.iter().all(|w| *w == 0)
}

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<Bits>,
}

impl BitMatrix {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        BitMatrix {
            n,
            rows: vec![[0; 3]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds the matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(cols: &[Bits]) -> Self {
        let n = cols.len();
        let mut m = Self::zero(n);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                if bit(c, i) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        bit(&self.rows[r], c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        if self.get(r, c) != value {
            flip(&mut self.rows[r], c);
        }
    }

    pub fn column(&self, c: usize) -> Bits {
        let mut out = [0; 3];
        for r in 0..self.n {
            if self.get(r, c) {
                flip(&mut out, r);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(is_zero)
    }

    pub fn apply(&self, v: &Bits) -> Bits {
        let mut out = [0; 3];
        for (r, row) in self.rows.iter().enumerate() {
            let parity = (row[0] & v[0]).count_ones()
                + (row[1] & v[1]).count_ones()
                + (row[2] & v[2]).count_ones();
            if parity & 1 == 1 {
                flip(&mut out, r);
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    fn rref(&self) -> (Vec<Bits>, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.n {
            let Some(p) = (next..self.n).find(|&r| bit(&rows[r], c)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && bit(row, c) {
                    *row = xor(row, &pivot_row);
                }
            }
            pivots.push(c);
            next += 1;
        }
        rows.truncate(next);
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.n - self.rank()
    }

    /// A basis of the null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Bits> {
        let (rows, pivots) = self.rref();
        let mut is_pivot = vec![false; self.n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.n)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = [0; 3];
                flip(&mut v, f);
                for (row, &p) in rows.iter().zip(&pivots) {
                    if bit(row, f) {
                        flip(&mut v, p);
                    }
                }
                v
            })
            .collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({}x{})", self.n, self.n)?;
        for r in 0..self.n {
            let line: String = (0..self.n)
                .map(|c| if self.get(r, c) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Rank of a set of vectors of at most 64 bits, by insertion into an
/// echelon basis keyed on the highest set bit.
pub fn rank_u64(vectors: &[u64]) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for &v in vectors {
        let mut v = v;
        while v != 0 {
            let h = 63 - v.leading_zeros() as usize;
            if basis[h] == 0 {
                basis[h] = v;
                rank += 1;
                break;
            }
            v ^= basis[h];
        }
    }
    rank
}

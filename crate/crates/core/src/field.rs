//! Arithmetic and Gaussian elimination over the prime field `F_p`.
//!
//! Residues are stored as `u32` in `[0, p)`. The qudit dimensions handled by
//! this crate are small, so products fit comfortably in `u64` before reduction.

/// Returns `true` when `d` is a prime number.
pub fn is_prime(d: u32) -> bool {
    if d < 2 {
        return false;
    }
    let mut i = 2u32;
    while (i as u64) * (i as u64) <= d as u64 {
        if d.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

#[inline]
pub fn add(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn neg(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

/// Multiplicative inverse by Fermat's little theorem. `a` must be non-zero.
pub fn inv(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p), "zero has no inverse");
    pow(a, p - 2, p)
}

pub fn pow(mut base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, p)`.
#[inline]
pub fn reduce_signed(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

/// `dst += factor * src` elementwise.
fn axpy(dst: &mut [u32], src: &[u32], factor: u32, p: u32) {
    if factor == 0 {
        return;
    }
    if p == 2 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d ^= *s;
        }
        return;
    }
    let f = factor as u64;
    let pp = p as u64;
    for (d, s) in dst.iter_mut().zip(src) {
        if *s != 0 {
            *d = ((*d as u64 + f * *s as u64) % pp) as u32;
        }
    }
}

fn scale(row: &mut [u32], factor: u32, p: u32) {
    for v in row.iter_mut() {
        *v = mul(*v, factor, p);
    }
}

/// Rank of a list of row vectors over `F_p`.
pub fn rank(rows: &[Vec<u32>], p: u32) -> usize {
    RowSpace::new(rows, p).rank()
}

/// Row space of a fixed list of vectors, kept in reduced row echelon form
/// together with the combination of original rows producing each basis row.
///
/// Supports membership tests, solving `c · M = v`, and listing the left
/// null space (linear dependencies among the original rows).
#[derive(Debug, Clone)]
pub struct RowSpace {
    p: u32,
    cols: usize,
    original_rows: usize,
    /// Reduced basis rows, pivot entry normalised to 1.
    basis: Vec<Vec<u32>>,
    /// `coefficients[j] · M = basis[j]`.
    coefficients: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    /// Basis of `{c : c · M = 0}`.
    dependencies: Vec<Vec<u32>>,
}

impl RowSpace {
    pub fn new(rows: &[Vec<u32>], p: u32) -> Self {
        let m = rows.len();
        let cols = rows.first().map_or(0, |r| r.len());
        let mut work: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|v| v % p).collect()).collect();
        let mut coeff: Vec<Vec<u32>> = (0..m)
            .map(|i| {
                let mut c = vec![0; m];
                c[i] = 1 % p;
                c
            })
            .collect();

        let mut pivots = Vec::new();
        let mut rank = 0usize;
        for col in 0..cols {
            if rank == m {
                break;
            }
            let Some(found) = (rank..m).find(|&r| work[r][col] != 0) else {
                continue;
            };
            work.swap(rank, found);
            coeff.swap(rank, found);
            let pivot_inv = inv(work[rank][col], p);
            scale(&mut work[rank], pivot_inv, p);
            scale(&mut coeff[rank], pivot_inv, p);

            let (head, tail) = work.split_at_mut(rank);
            let (pivot_row, rest) = tail.split_first_mut().expect("pivot row exists");
            let (chead, ctail) = coeff.split_at_mut(rank);
            let (pivot_coeff, crest) = ctail.split_first_mut().expect("pivot row exists");
            for (row, c) in head.iter_mut().zip(chead.iter_mut()).chain(rest.iter_mut().zip(crest.iter_mut())) {
                let f = row[col];
                if f != 0 {
                    let factor = neg(f, p);
                    axpy(row, pivot_row, factor, p);
                    axpy(c, pivot_coeff, factor, p);
                }
            }
            pivots.push(col);
            rank += 1;
        }

        let dependencies = coeff.split_off(rank);
        work.truncate(rank);
        RowSpace {
            p,
            cols,
            original_rows: m,
            basis: work,
            coefficients: coeff,
            pivots,
            dependencies,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Basis of the left null space: vectors `c` with `c · M = 0`.
    pub fn dependencies(&self) -> &[Vec<u32>] {
        &self.dependencies
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &[u32]) -> bool {
        self.residual(v).iter().all(|&x| x == 0)
    }

    fn residual(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "vector length must match row length");
        let mut r: Vec<u32> = v.iter().map(|x| x % self.p).collect();
        for (row, &piv) in self.basis.iter().zip(&self.pivots) {
            let f = r[piv];
            if f != 0 {
                axpy(&mut r, row, neg(f, self.p), self.p);
            }
        }
        r
    }

    /// Solves `c · M = v`, returning some solution `c` when one exists.
    pub fn solve(&self, v: &[u32]) -> Option<Vec<u32>> {
        let r = self.residual(v);
        if r.iter().any(|&x| x != 0) {
            return None;
        }
        let mut c = vec![0u32; self.original_rows];
        for (coeffs, &piv) in self.coefficients.iter().zip(&self.pivots) {
            let f = v[piv] % self.p;
            axpy(&mut c, coeffs, f, self.p);
        }
        Some(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_vec_left(c: &[u32], rows: &[Vec<u32>], p: u32) -> Vec<u32> {
        let mut out = vec![0; rows[0].len()];
        for (ci, row) in c.iter().zip(rows) {
            for (o, r) in out.iter_mut().zip(row) {
                *o = (*o + ci * r) % p;
            }
        }
        out
    }

    #[test]
    fn primes() {
        let primes: Vec<u32> = (0..30).filter(|&d| is_prime(d)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn inverses_mod_7() {
        for a in 1..7 {
            assert_eq!(mul(a, inv(a, 7), 7), 1);
        }
    }

    #[test]
    fn rank_with_dependency_mod_3() {
        let rows = vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]];
        // second row is 2 * first mod 3
        let space = RowSpace::new(&rows, 3);
        assert_eq!(space.rank(), 2);
        assert_eq!(space.dependencies().len(), 1);
        let dep = &space.dependencies()[0];
        assert_eq!(mat_vec_left(dep, &rows, 3), vec![0, 0, 0]);
    }

    #[test]
    fn solve_finds_combination() {
        let rows = vec![vec![1, 0, 1, 1], vec![0, 1, 1, 0], vec![1, 1, 0, 1]];
        let space = RowSpace::new(&rows, 2);
        assert_eq!(space.rank(), 2);
        let target = vec![1, 1, 0, 1];
        let c = space.solve(&target).unwrap();
        assert_eq!(mat_vec_left(&c, &rows, 2), target);
        assert!(space.solve(&[0, 0, 0, 1]).is_none());
    }

    #[test]
    fn empty_and_zero_rows() {
        let rows = vec![vec![0, 0], vec![0, 0]];
        let space = RowSpace::new(&rows, 5);
        assert_eq!(space.rank(), 0);
        assert_eq!(space.dependencies().len(), 2);
        assert!(space.contains(&[0, 0]));
    }
}

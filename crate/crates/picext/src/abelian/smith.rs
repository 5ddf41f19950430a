//! Smith and Hermite reductions, integer solving, integer kernels.
//!
//! Pivoting is deterministic: smallest absolute nonzero entry wins, ties
//! broken lexicographically by (row, col). This makes every decomposition in
//! the crate reproducible for a fixed input.

use super::matrix::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// U * A * V = D with U, V unimodular and D diagonal with a divisibility
/// chain d1 | d2 | ... Inverses are tracked alongside so callers never have
/// to invert a unimodular matrix themselves.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Diagonal entries d1..=d_rank (all positive).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct Workspace {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Workspace {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row[i] += c * row[j]
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        self.a.add_row_multiple(i, j, c);
        self.u.add_row_multiple(i, j, c);
        let neg = -c;
        self.u_inv.add_col_multiple(j, i, &neg);
    }

    /// col[i] += c * col[j]
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        self.a.add_col_multiple(i, j, c);
        self.v.add_col_multiple(i, j, c);
        let neg = -c;
        self.v_inv.add_row_multiple(j, i, &neg);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

fn find_pivot(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            if a[(i, j)].is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some(b) => {
                    let cur = a[(i, j)].abs();
                    let bst = a[b].abs();
                    if cur < bst {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let rows = a.rows();
    let cols = a.cols();
    let mut ws = Workspace {
        a: a.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };

    let min_dim = rows.min(cols);
    let mut rank = 0;

    for k in 0..min_dim {
        'position: loop {
            let Some((pi, pj)) = find_pivot(&ws.a, k) else {
                break;
            };
            ws.swap_rows(k, pi);
            ws.swap_cols(k, pj);

            // Clear column k below pivot, then row k to the right. Each
            // reduction either zeroes an entry or strictly shrinks the pivot,
            // so this terminates.
            let mut dirty = false;
            for i in k + 1..rows {
                if !ws.a[(i, k)].is_zero() {
                    let q = div_round(&ws.a[(i, k)], &ws.a[(k, k)]);
                    let neg = -q;
                    ws.add_row(i, k, &neg);
                    if !ws.a[(i, k)].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in k + 1..cols {
                if !ws.a[(k, j)].is_zero() {
                    let q = div_round(&ws.a[(k, j)], &ws.a[(k, k)]);
                    let neg = -q;
                    ws.add_col(j, k, &neg);
                    if !ws.a[(k, j)].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'position;
            }

            // Pivot divides every entry of the trailing block, or we fold the
            // offending row in and restart.
            for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(&ws.a[(i, j)] % &ws.a[(k, k)]).is_zero() {
                        let one = BigInt::from(1);
                        ws.add_row(k, i, &one);
                        continue 'position;
                    }
                }
            }
            break;
        }
        if ws.a[(k, k)].is_zero() {
            break;
        }
        if ws.a[(k, k)].is_negative() {
            ws.negate_row(k);
        }
        rank += 1;
    }

    SmithDecomposition {
        u: ws.u,
        u_inv: ws.u_inv,
        d: ws.a,
        v: ws.v,
        v_inv: ws.v_inv,
        rank,
    }
}

/// Quotient rounded to nearest (ties toward zero); keeps remainders small
/// during reduction.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = r.abs() * 2;
    if two_r > b.abs() {
        if (a.is_negative() && b.is_negative()) || (!a.is_negative() && !b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Solve A x = b over the integers. Returns None when no integral solution
/// exists.
pub fn solve(snf: &SmithDecomposition, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let y = snf.u.mul_vec(b);
    let cols = snf.v.rows();
    let mut x_prime = vec![BigInt::zero(); cols];
    for (i, yi) in y.iter().enumerate() {
        if i < snf.rank {
            let d = &snf.d[(i, i)];
            let (q, r) = yi.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            x_prime[i] = q;
        } else if !yi.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&x_prime))
}

/// Basis of the integer kernel of A, as columns.
pub fn kernel_basis(snf: &SmithDecomposition) -> IntMatrix {
    let cols = snf.v.rows();
    let free: Vec<usize> = (snf.rank..cols).collect();
    snf.v.select_cols(&free)
}

/// Column-style Hermite form of the column lattice of `m`: echelon columns,
/// positive pivots, entries left of a pivot reduced into [0, pivot). Zero
/// columns are dropped, so the result is a canonical basis of the lattice.
pub fn column_hnf(m: &IntMatrix) -> IntMatrix {
    let rows = m.rows();
    let mut w = m.clone();
    let mut pc = 0usize;
    for r in 0..rows {
        if pc >= w.cols() {
            break;
        }
        // Gcd-eliminate row r across columns pc.. until at most one nonzero.
        loop {
            let mut best: Option<usize> = None;
            for j in pc..w.cols() {
                if w[(r, j)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(j),
                    Some(b) => {
                        if w[(r, j)].abs() < w[(r, b)].abs() {
                            best = Some(j);
                        }
                    }
                }
            }
            let Some(jb) = best else { break };
            w.swap_cols(pc, jb);
            let mut any = false;
            for j in pc + 1..w.cols() {
                if !w[(r, j)].is_zero() {
                    let q = div_round(&w[(r, j)], &w[(r, pc)]);
                    let neg = -q;
                    w.add_col_multiple(j, pc, &neg);
                    if !w[(r, j)].is_zero() {
                        any = true;
                    }
                }
            }
            if !any {
                break;
            }
        }
        if w[(r, pc)].is_zero() {
            continue;
        }
        if w[(r, pc)].is_negative() {
            w.negate_col(pc);
        }
        // Canonical reduction of previously fixed columns at this row.
        for j in 0..pc {
            if !w[(r, j)].is_zero() {
                let q = w[(r, j)].div_floor(&w[(r, pc)]);
                let neg = -q;
                w.add_col_multiple(j, pc, &neg);
            }
        }
        pc += 1;
    }
    w.select_cols(&(0..pc).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check_decomposition(a: &IntMatrix) {
        let snf = smith_normal_form(a);
        // U A V = D
        let lhs = snf.u.mul(a).mul(&snf.v);
        assert_eq!(lhs, snf.d, "UAV != D");
        // inverses
        assert_eq!(snf.u.mul(&snf.u_inv), IntMatrix::identity(a.rows()));
        assert_eq!(snf.u_inv.mul(&snf.u), IntMatrix::identity(a.rows()));
        assert_eq!(snf.v.mul(&snf.v_inv), IntMatrix::identity(a.cols()));
        // diagonal, chain
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j {
                    assert!(snf.d[(i, j)].is_zero());
                }
            }
        }
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
        }
    }

    #[test]
    fn identity_is_fixed() {
        let a = IntMatrix::identity(2);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.d, IntMatrix::identity(2));
        assert_eq!(snf.rank, 2);
    }

    #[test]
    fn diag_2_3_gives_1_6() {
        // d1 = gcd of entries = 1, d1*d2 = |det| = 6
        let a = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 3]]);
        check_decomposition(&a);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal(), vec![BigInt::one(), BigInt::from(6)]);
    }

    #[test]
    fn gcd_of_minors_example() {
        // gcd(2,4,6,8) = 2, d1*d2 = |det| = 8
        let a = IntMatrix::from_rows_i64(&[vec![2, 4], vec![6, 8]]);
        check_decomposition(&a);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn solve_even_and_odd() {
        let a = IntMatrix::from_rows_i64(&[vec![2]]);
        let snf = smith_normal_form(&a);
        assert_eq!(solve(&snf, &[BigInt::from(4)]), Some(vec![BigInt::from(2)]));
        assert_eq!(solve(&snf, &[BigInt::from(3)]), None);
    }

    #[test]
    fn solve_rectangular() {
        let a = IntMatrix::from_rows_i64(&[vec![2, 4], vec![6, 8]]);
        let snf = smith_normal_form(&a);
        let x = solve(&snf, &[BigInt::from(2), BigInt::from(6)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![BigInt::from(2), BigInt::from(6)]);
    }

    #[test]
    fn kernel_of_projection() {
        let a = IntMatrix::from_rows_i64(&[vec![1, 1]]);
        let snf = smith_normal_form(&a);
        let k = kernel_basis(&snf);
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn hnf_canonicalizes() {
        let m = IntMatrix::from_rows_i64(&[vec![2, 4, 1], vec![0, 2, 0]]);
        let h = column_hnf(&m);
        // lattice is all of Z^2 except index 2 in second row: pivots 1 and 2
        assert_eq!(h.cols(), 2);
        assert_eq!(h[(0, 0)], BigInt::one());
        // membership unchanged
        let snf_m = smith_normal_form(&m);
        let snf_h = smith_normal_form(&h);
        assert_eq!(snf_m.diagonal(), snf_h.diagonal());
    }
}

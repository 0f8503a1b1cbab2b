use num_complex::Complex64;

use crate::algebra::POLE_EPS;
use crate::error::{Error, Result};

pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[inline]
pub(crate) fn coth(z: Complex64) -> Complex64 {
    z.cosh() / z.sinh()
}

/// `sinh(z)`, failing on a zero.
pub(crate) fn sinh_nz(z: Complex64, what: &'static str) -> Result<Complex64> {
    let s = z.sinh();
    if s.norm() < POLE_EPS {
        Err(Error::Pole { what, at: z })
    } else {
        Ok(s)
    }
}

/// Errors if two rapidities coincide modulo `i pi`.
pub(crate) fn require_distinct(points: &[Complex64], what: &str) -> Result<()> {
    for j in 0..points.len() {
        for i in 0..j {
            if (points[j] - points[i]).sinh().norm() < POLE_EPS {
                return Err(Error::singular(format!(
                    "{what}: entries {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// All ordered tuples `(i_1, ..., i_n)` of distinct indices with
/// `i_l < bound(l)` (0-based `l`), in lexicographic order.
pub(crate) fn ordered_tuples(n: usize, bound: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
    fn rec(
        l: usize,
        n: usize,
        bound: &dyn Fn(usize) -> usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if l == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..bound(l) {
            if !cur.contains(&i) {
                cur.push(i);
                rec(l + 1, n, bound, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, n, &bound, &mut Vec::with_capacity(n), &mut out);
    out
}

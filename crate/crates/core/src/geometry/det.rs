//! Determinant sign evaluation: floating-point filters with certified error
//! bounds, and the exact integer fallback.
//!
//! The orientation determinant of points `p_1, ..., p_{d+1}` (the sign of the
//! `(d+1) x (d+1)` matrix whose row i is `(p_i, 1)`) equals the determinant of
//! the `d x d` matrix whose rows are `p_i - p_{d+1}`. All float paths work on
//! that translated form; the error bounds below account for the rounding of
//! the translation itself.

use num::{BigInt, Integer, One, Signed, Zero};

use super::{Point, Sign};

/// Unit roundoff of f64 (half an ulp of 1.0). The Shewchuk-style constants
/// below are expressed in terms of this quantity.
const U: f64 = f64::EPSILON * 0.5;

/// Forward error bound coefficient for the 2x2 translated determinant,
/// relative to the sum of the absolute values of its two products.
const ORIENT2_BOUND: f64 = (3.0 + 16.0 * U) * U;

/// Forward error bound coefficient for the 3x3 translated determinant,
/// relative to its permanent.
const ORIENT3_BOUND: f64 = (7.0 + 56.0 * U) * U;

/// Absolute slack added to every relative bound. Rounding of subnormal
/// intermediates escapes the relative-error model; any determinant this close
/// to zero is sent to the exact path instead.
const ABS_SLACK: f64 = 1.0e-300;

/// Largest dimension for which the generic subset-sum filter is attempted
/// (its tables have 2^d entries).
const MAX_FILTER_DIM: usize = 12;

/// Filtered orientation sign. `coords` holds d+1 points of dimension d,
/// flattened row-major; the last row is the point being located. Returns
/// `None` when the floating-point result cannot be certified.
pub(crate) fn orient_filtered(coords: &[f64], d: usize) -> Option<Sign> {
    debug_assert_eq!(coords.len(), (d + 1) * d);
    match d {
        1 => {
            // An IEEE subtraction of exact inputs has the exact sign: the
            // result underflows to zero only when the operands are equal.
            Some(Sign::of_f64(coords[0] - coords[1]))
        }
        2 => {
            let adx = coords[0] - coords[4];
            let ady = coords[1] - coords[5];
            let bdx = coords[2] - coords[4];
            let bdy = coords[3] - coords[5];
            let left = adx * bdy;
            let right = ady * bdx;
            let det = left - right;
            let bound = ORIENT2_BOUND * (left.abs() + right.abs()) + ABS_SLACK;
            certify(det, bound)
        }
        3 => {
            let adx = coords[0] - coords[9];
            let ady = coords[1] - coords[10];
            let adz = coords[2] - coords[11];
            let bdx = coords[3] - coords[9];
            let bdy = coords[4] - coords[10];
            let bdz = coords[5] - coords[11];
            let cdx = coords[6] - coords[9];
            let cdy = coords[7] - coords[10];
            let cdz = coords[8] - coords[11];

            let bdxcdy = bdx * cdy;
            let cdxbdy = cdx * bdy;
            let cdxady = cdx * ady;
            let adxcdy = adx * cdy;
            let adxbdy = adx * bdy;
            let bdxady = bdx * ady;

            let det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
            let permanent = (bdxcdy.abs() + cdxbdy.abs()) * adz.abs()
                + (cdxady.abs() + adxcdy.abs()) * bdz.abs()
                + (adxbdy.abs() + bdxady.abs()) * cdz.abs();
            let bound = ORIENT3_BOUND * permanent + ABS_SLACK;
            certify(det, bound)
        }
        _ if d <= MAX_FILTER_DIM => {
            let (det, permanent) = translated_det_and_permanent(coords, d);
            let bound = dp_bound(d) * permanent + ABS_SLACK;
            certify(det, bound)
        }
        _ => None,
    }
}

/// Unfiltered floating-point orientation sign: whatever sign the rounded
/// computation produces, zero included. Exists so the cost of skipping the
/// exact fallback can be demonstrated; never used by the default strategy.
pub(crate) fn orient_unfiltered(coords: &[f64], d: usize) -> Sign {
    debug_assert_eq!(coords.len(), (d + 1) * d);
    let det = match d {
        1 => coords[0] - coords[1],
        2 => {
            let adx = coords[0] - coords[4];
            let ady = coords[1] - coords[5];
            let bdx = coords[2] - coords[4];
            let bdy = coords[3] - coords[5];
            adx * bdy - ady * bdx
        }
        3 => {
            let adx = coords[0] - coords[9];
            let ady = coords[1] - coords[10];
            let adz = coords[2] - coords[11];
            let bdx = coords[3] - coords[9];
            let bdy = coords[4] - coords[10];
            let bdz = coords[5] - coords[11];
            let cdx = coords[6] - coords[9];
            let cdy = coords[7] - coords[10];
            let cdz = coords[8] - coords[11];
            adz * (bdx * cdy - cdx * bdy) + bdz * (cdx * ady - adx * cdy)
                + cdz * (adx * bdy - bdx * ady)
        }
        _ => translated_det_and_permanent(coords, d).0,
    };
    Sign::of_f64(det)
}

fn certify(det: f64, bound: f64) -> Option<Sign> {
    // NaN/infinite determinants fail both comparisons and fall through.
    if det > bound {
        Some(Sign::Positive)
    } else if det < -bound {
        Some(Sign::Negative)
    } else {
        None
    }
}

/// Conservative relative bound for the Laplace-expansion determinant of a
/// d x d matrix of once-rounded entries: each expansion term accumulates at
/// most d subtraction errors, d-1 products, and d levels of additions, so
/// gamma_{d^2/2 + 2d} suffices; the quadratic coefficient below dominates it
/// for every d handled here.
fn dp_bound(d: usize) -> f64 {
    ((d * d + 4 * d + 16) as f64) * U
}

/// Determinant and permanent of the translated d x d matrix, both computed by
/// dynamic programming over column subsets (O(d 2^d) products).
fn translated_det_and_permanent(coords: &[f64], d: usize) -> (f64, f64) {
    let mut m = vec![0.0f64; d * d];
    for i in 0..d {
        for j in 0..d {
            m[i * d + j] = coords[i * d + j] - coords[d * d + j];
        }
    }
    let size = 1usize << d;
    let mut det = vec![0.0f64; size];
    let mut perm = vec![0.0f64; size];
    det[0] = 1.0;
    perm[0] = 1.0;
    for mask in 1..size {
        let row = (mask as u32).count_ones() as usize - 1;
        let mut dsum = 0.0;
        let mut psum = 0.0;
        // Expanding along `row`: cofactor signs alternate over the set bits
        // of `mask` in ascending order, starting at (-1)^row.
        let mut sign = if row % 2 == 0 { 1.0 } else { -1.0 };
        for j in 0..d {
            if mask & (1 << j) == 0 {
                continue;
            }
            let sub = mask & !(1 << j);
            let a = m[row * d + j];
            dsum += sign * a * det[sub];
            psum += a.abs() * perm[sub];
            sign = -sign;
        }
        det[mask] = dsum;
        perm[mask] = psum;
    }
    (det[size - 1], perm[size - 1])
}

/// Exact orientation sign over rational points. Each row of the homogeneous
/// matrix is scaled by the (positive) common denominator of its coordinates,
/// which preserves the sign and yields an all-integer matrix for Bareiss
/// elimination.
pub(crate) fn orient_exact(points: &[&Point]) -> Sign {
    let rows = points.len();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(rows);
    for p in points {
        let mut common = BigInt::one();
        for c in p.coords() {
            common = common.lcm(c.denom());
        }
        let mut row: Vec<BigInt> = p
            .coords()
            .iter()
            .map(|c| c.numer() * (&common / c.denom()))
            .collect();
        row.push(common);
        m.push(row);
    }
    bigint_det_sign(m)
}

/// Sign of the determinant of a square integer matrix, by fraction-free
/// (Bareiss) elimination with row pivoting.
pub(crate) fn bigint_det_sign(mut m: Vec<Vec<BigInt>>) -> Sign {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    if n == 0 {
        return Sign::Positive;
    }
    let mut flipped = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    flipped = !flipped;
                }
                None => return Sign::Zero,
            }
        }
        if k + 1 == n {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                // Exact division: Bareiss guarantees divisibility.
                m[i][j] = t / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let sign = if m[n - 1][n - 1].is_positive() {
        Sign::Positive
    } else if m[n - 1][n - 1].is_negative() {
        Sign::Negative
    } else {
        Sign::Zero
    };
    if flipped { sign.flip() } else { sign }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det_of(rows: &[&[i64]]) -> Sign {
        let m: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        bigint_det_sign(m)
    }

    #[test]
    fn bareiss_small_matrices() {
        assert_eq!(det_of(&[&[2]]), Sign::Positive);
        assert_eq!(det_of(&[&[0]]), Sign::Zero);
        assert_eq!(det_of(&[&[1, 2], &[3, 4]]), Sign::Negative);
        assert_eq!(det_of(&[&[1, 2], &[2, 4]]), Sign::Zero);
        // Needs a pivot swap in the first column.
        assert_eq!(det_of(&[&[0, 1], &[1, 0]]), Sign::Negative);
        assert_eq!(
            det_of(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
            Sign::Positive
        );
        assert_eq!(
            det_of(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]),
            Sign::Negative
        );
    }

    #[test]
    fn filter_certifies_clear_cases() {
        // d=2, points (0,0),(1,0),(0,1): positively oriented.
        let coords = [0.0, 0.0, 1.0, 0.0, 0.0, 1.0];
        assert_eq!(orient_filtered(&coords, 2), Some(Sign::Positive));
        // Collinear points cannot be certified by the filter.
        let collinear = [0.0, 0.0, 1.0, 1.0, 2.0, 2.0];
        assert_eq!(orient_filtered(&collinear, 2), None);
        assert_eq!(orient_unfiltered(&collinear, 2), Sign::Zero);
    }

    #[test]
    fn dp_agrees_with_hardcoded_formulas() {
        let coords = [3.0, -1.0, 2.0, 5.0, -4.0, 0.5];
        let (det, _) = translated_det_and_permanent(&coords, 2);
        let adx = coords[0] - coords[4];
        let ady = coords[1] - coords[5];
        let bdx = coords[2] - coords[4];
        let bdy = coords[3] - coords[5];
        assert_eq!(det, adx * bdy - ady * bdx);
    }
}

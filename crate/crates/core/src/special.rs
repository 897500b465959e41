//! Complex dilogarithm on the closed unit disc.

use num_complex::Complex64;

// B_n / (n+1)! for the Bernoulli expansion Li2 = sum B_n u^{n+1} / (n+1)!,
// u = -ln(1 - z); odd Bernoulli numbers beyond B_1 vanish.
const BERNOULLI: [f64; 10] = [
    -1.0 / 4.0,
    1.0 / 36.0,
    -1.0 / 3600.0,
    1.0 / 211680.0,
    -1.0 / 10886400.0,
    1.0 / 526901760.0,
    -4.0647616451442255e-11,
    8.9216910204564526e-13,
    -1.9939295860721076e-14,
    4.5189800296199182e-16,
];

fn bernoulli_series(u: Complex64) -> Complex64 {
    let u2 = u * u;
    let u4 = u2 * u2;
    let b = &BERNOULLI;
    u + u2
        * (b[0]
            + u * (b[1]
                + u2 * (b[2]
                    + u2 * b[3]
                    + u4 * (b[4] + u2 * b[5])
                    + u4 * u4 * (b[6] + u2 * b[7] + u4 * (b[8] + u2 * b[9])))))
}

/// `Li2(z) = sum_{k>=1} z^k / k^2` for `|z| <= 1`.
pub fn li2(z: Complex64) -> Complex64 {
    use std::f64::consts::PI;
    let zeta2 = PI * PI / 6.0;
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    if z == Complex64::new(1.0, 0.0) {
        return Complex64::new(zeta2, 0.0);
    }
    debug_assert!(z.norm_sqr() <= 1.0 + 1e-12, "li2 called outside the unit disc");
    if z.re <= 0.5 {
        bernoulli_series(-(1.0 - z).ln())
    } else {
        // reflection z -> 1 - z; |1 - z| < 1 here
        -bernoulli_series(-z.ln()) + zeta2 - z.ln() * (1.0 - z).ln()
    }
}

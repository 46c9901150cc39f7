//! Jacobi polynomials P_n^{(a,b)}(x) for real (possibly negative) parameters.

/// Three-term recurrence in x. Falls back to the explicit sum when a
/// recurrence denominator vanishes, which happens for some negative integer
/// combinations of a and b.
pub fn jacobi(n: u32, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    if n == 1 {
        return p1;
    }
    let ab = a + b;
    let (mut pm1, mut p) = (1.0, p1);
    for k in 2..=n {
        let k = f64::from(k);
        let c = 2.0 * k + ab;
        let denom = 2.0 * k * (k + ab) * (c - 2.0);
        if denom.abs() < 1e-12 * (1.0 + c * c * c) {
            return jacobi_sum(n, a, b, x);
        }
        let c1 = (c - 1.0) * (c * (c - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
        let next = (c1 * p - c2 * pm1) / denom;
        pm1 = p;
        p = next;
    }
    p
}

/// Generalized binomial coefficient C(z, k) for real z.
fn binom(z: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (z - f64::from(j)) / f64::from(j + 1))
}

/// P_n^{(a,b)}(x) = sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^{n-s}.
pub fn jacobi_sum(n: u32, a: f64, b: f64, x: f64) -> f64 {
    let nf = f64::from(n);
    let lo = 0.5 * (x - 1.0);
    let hi = 0.5 * (x + 1.0);
    (0..=n)
        .map(|s| binom(nf + a, n - s) * binom(nf + b, s) * lo.powi(s as i32) * hi.powi((n - s) as i32))
        .sum()
}

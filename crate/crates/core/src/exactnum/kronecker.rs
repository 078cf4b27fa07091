//! Kronecker symbol (a|n), the standard extension of the Legendre and Jacobi
//! symbols to all integers.

/// Kronecker symbol `(a|n)` for `n >= 0`.
///
/// Agrees with the Legendre symbol when `n` is an odd prime not dividing `a`.
pub fn kronecker(a: i64, n: u64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut result: i32 = 1;

    // factor out twos from n; (a|2) = 0 for even a, else chi_8(a)
    while n.is_multiple_of(2) {
        if a % 2 == 0 {
            return 0;
        }
        n /= 2;
        let r = a.rem_euclid(8);
        if r == 3 || r == 5 {
            result = -result;
        }
    }
    if n == 1 {
        return result;
    }
    // now n odd > 1; handle sign of a: (-1|n) = (-1)^((n-1)/2)
    if a < 0 {
        a = -a;
        if n % 4 == 3 {
            result = -result;
        }
    }
    let mut a = (a as u64) % n;
    // Jacobi symbol by quadratic reciprocity
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

//! Exact integer and rational arithmetic for cusps, plus the arithmetic
//! constants of the half-integral automorphy factor: Shimura's extended
//! Jacobi symbol, ε_d, the real Hilbert symbol, and β_{p/q}.
//!
//! Roots of unity e(np/q) are tabulated once per twist with the angle
//! reduced mod q in integer arithmetic, so the table is exactly q-periodic.

use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub enum ArithError {
    ZeroDenominator,
    NotCoprime { p: i64, q: i64 },
    EvenDenominator { d: i64 },
    EvenInput { d: i64 },
    ZeroArgument,
    EvenP { p: i64 },
}

impl std::fmt::Display for ArithError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ArithError::ZeroDenominator => write!(f, "zero denominator"),
            ArithError::NotCoprime { p, q } => write!(f, "{} and {} are not coprime", p, q),
            ArithError::EvenDenominator { d } => {
                write!(f, "Jacobi symbol requires odd denominator, got {}", d)
            }
            ArithError::EvenInput { d } => write!(f, "epsilon_d requires odd d, got {}", d),
            ArithError::ZeroArgument => write!(f, "Hilbert symbol arguments must be nonzero"),
            ArithError::EvenP { p } => write!(f, "beta_{{p/q}} requires odd p, got {}", p),
        }
    }
}

impl std::error::Error for ArithError {}

/// A rational p/q with q > 0 and gcd(p,q) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducedRational {
    pub p: i64,
    pub q: i64,
}

impl std::fmt::Display for ReducedRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// An SL_2(Z) matrix (a b; c d), ad − bc = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CuspMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl CuspMatrix {
    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    /// Möbius action γz = (az+b)/(cz+d).
    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a as f64 * z + self.b as f64) / (self.c as f64 * z + self.d as f64)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Reduce p/q to lowest terms with positive denominator.
pub fn reduce(p: i64, q: i64) -> Result<ReducedRational, ArithError> {
    if q == 0 {
        return Err(ArithError::ZeroDenominator);
    }
    let sign = if q < 0 { -1 } else { 1 };
    let g = gcd(p, q).max(1);
    Ok(ReducedRational {
        p: sign * p / g,
        q: sign * q / g,
    })
}

/// Multiplicative inverse of p mod q, in [0, q).
pub fn mod_inverse(p: i64, q: i64) -> Result<i64, ArithError> {
    assert!(q > 0);
    let pr = p.rem_euclid(q);
    if gcd(pr, q) != 1 {
        return Err(ArithError::NotCoprime { p, q });
    }
    // extended Euclid
    let (mut r0, mut r1) = (q, pr);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let quo = r0 / r1;
        let r = r0 - quo * r1;
        r0 = r1;
        r1 = r;
        let t = t0 - quo * t1;
        t0 = t1;
        t1 = t;
    }
    Ok(t0.rem_euclid(q))
}

/// True iff p² ≡ 1 (mod q).
pub fn is_self_inverse(p: i64, q: i64) -> Result<bool, ArithError> {
    if gcd(p, q) != 1 {
        return Err(ArithError::NotCoprime { p, q });
    }
    let pr = p.rem_euclid(q);
    Ok((pr * pr).rem_euclid(q) == 1 % q)
}

/// Scaling matrix γ = (p r; q p̃) ∈ SL_2(Z) sending ∞ to p/q.
pub fn cusp_matrix(cusp: ReducedRational) -> Result<CuspMatrix, ArithError> {
    let p_tilde = mod_inverse(cusp.p, cusp.q)?;
    let r = (cusp.p * p_tilde - 1) / cusp.q;
    let m = CuspMatrix {
        a: cusp.p,
        b: r,
        c: cusp.q,
        d: p_tilde,
    };
    debug_assert_eq!(m.det(), 1);
    Ok(m)
}

/// True iff p/q is Γ_0(N)-equivalent to i∞, i.e. N | q.
pub fn is_equiv_infinity(cusp: ReducedRational, level: i64) -> bool {
    cusp.q % level == 0
}

fn jacobi_odd_positive(mut a: i64, mut n: i64) -> i64 {
    debug_assert!(n > 0 && n % 2 == 1);
    a = a.rem_euclid(n);
    let mut r = 1i64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                r = -r;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            r = -r;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        r
    } else {
        0
    }
}

/// Shimura's extended Jacobi symbol (c/d) for odd d.
///
/// For d > 0 the usual Jacobi symbol with (c/1) = 1.  For d < 0 it is
/// (c/|d|) multiplied by −1 exactly when c < 0; (0/±1) = 1.
pub fn jacobi_extended(c: i64, d: i64) -> Result<i64, ArithError> {
    if d % 2 == 0 {
        return Err(ArithError::EvenDenominator { d });
    }
    if d > 0 {
        if d == 1 {
            return Ok(1);
        }
        Ok(jacobi_odd_positive(c, d))
    } else {
        let sign = if c < 0 { -1 } else { 1 };
        if d == -1 {
            return Ok(sign);
        }
        Ok(sign * jacobi_odd_positive(c, -d))
    }
}

/// ε_d = 1 for d ≡ 1 (mod 4), i for d ≡ 3 (mod 4).
pub fn epsilon_d(d: i64) -> Result<Complex64, ArithError> {
    if d % 2 == 0 {
        return Err(ArithError::EvenInput { d });
    }
    Ok(if d.rem_euclid(4) == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 1.0)
    })
}

/// Real Hilbert symbol: −1 iff both arguments are negative.
pub fn hilbert_real(x: f64, y: f64) -> Result<i64, ArithError> {
    if x == 0.0 || y == 0.0 {
        return Err(ArithError::ZeroArgument);
    }
    Ok(if x < 0.0 && y < 0.0 { -1 } else { 1 })
}

/// i^n for any integer n.
pub fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// β_{p/q} = ((−q/p))^{2k+1} · ε_p^{−1−2k} for half-integral weight k + 1/2.
pub fn beta_pq(p: i64, q: i64, k: i64) -> Result<Complex64, ArithError> {
    if p % 2 == 0 {
        return Err(ArithError::EvenP { p });
    }
    if gcd(p, q) != 1 {
        return Err(ArithError::NotCoprime { p, q });
    }
    // (±1)^{2k+1} = ±1 since the exponent is odd
    let jac = jacobi_extended(-q, p)? as f64;
    // ε_p ∈ {1, i}: ε^{−1−2k} = i^{m(−1−2k)} with ε = i^m
    let eps = epsilon_d(p)?;
    let m = if eps.im == 1.0 { 1 } else { 0 };
    Ok(jac * i_pow(m * (-1 - 2 * k)))
}

/// A reduced cusp with its level, modular inverse, reflected cusp, and the
/// cached table of e(np/q) for n mod q.
#[derive(Debug, Clone)]
pub struct Twist {
    pub cusp: ReducedRational,
    pub level: i64,
    pub p_tilde: i64,
    pub reflected: ReducedRational,
    pub unit_roots: Vec<Complex64>,
}

impl Twist {
    pub fn new(p: i64, q: i64, level: i64) -> Result<Twist, ArithError> {
        let cusp = reduce(p, q)?;
        let p_tilde = mod_inverse(cusp.p, cusp.q)?;
        let reflected = reduce(-p_tilde, cusp.q)?;
        let unit_roots = root_of_unity_table(cusp.p, cusp.q);
        Ok(Twist {
            cusp,
            level,
            p_tilde,
            reflected,
            unit_roots,
        })
    }

    /// e(np/q) for any integer n ≥ 0, via the cached table.
    pub fn root(&self, n: i64) -> Complex64 {
        self.unit_roots[n.rem_euclid(self.cusp.q) as usize]
    }

    pub fn is_equiv_infinity(&self) -> bool {
        is_equiv_infinity(self.cusp, self.level)
    }

    pub fn is_self_inverse(&self) -> bool {
        is_self_inverse(self.cusp.p, self.cusp.q).unwrap_or(false)
    }
}

/// table[r] = e(rp/q), r = 0..q−1, angle reduced mod q exactly.
pub fn root_of_unity_table(p: i64, q: i64) -> Vec<Complex64> {
    (0..q)
        .map(|r| {
            let m = (r * p).rem_euclid(q);
            let theta = 2.0 * PI * m as f64 / q as f64;
            Complex64::new(theta.cos(), theta.sin())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_basic() {
        assert_eq!(reduce(2, 4).unwrap(), ReducedRational { p: 1, q: 2 });
        assert_eq!(reduce(3, -5).unwrap(), ReducedRational { p: -3, q: 5 });
        assert_eq!(reduce(0, 7).unwrap(), ReducedRational { p: 0, q: 1 });
        assert!(matches!(reduce(1, 0), Err(ArithError::ZeroDenominator)));
    }

    #[test]
    fn mod_inverse_basic() {
        assert_eq!(mod_inverse(2, 5).unwrap(), 3);
        assert_eq!(mod_inverse(3, 8).unwrap(), 3);
        assert_eq!(mod_inverse(1, 7).unwrap(), 1);
        assert!(mod_inverse(2, 4).is_err());
    }

    #[test]
    fn mod_inverse_involution() {
        for q in 1..=200 {
            for p in 0..q {
                if gcd(p, q) == 1 {
                    let inv = mod_inverse(p, q).unwrap();
                    assert_eq!(mod_inverse(inv, q).unwrap(), p % q);
                }
            }
        }
    }

    #[test]
    fn self_inverse_matches_inverse() {
        for q in 1..=200 {
            for p in 0..q {
                if gcd(p, q) == 1 {
                    let a = is_self_inverse(p, q).unwrap();
                    let b = mod_inverse(p, q).unwrap() == p % q;
                    assert_eq!(a, b, "p={p}, q={q}");
                }
            }
        }
        assert!(is_self_inverse(1, 5).unwrap());
        assert!(!is_self_inverse(2, 5).unwrap());
        assert!(is_self_inverse(4, 15).unwrap());
    }

    #[test]
    fn cusp_matrix_unimodular() {
        for &(p, q) in &[(1, 5), (1, 16), (3, 16), (4, 15), (-3, 7)] {
            let m = cusp_matrix(ReducedRational { p, q }).unwrap();
            assert_eq!(m.det(), 1);
            assert_eq!(m.a, p);
            assert_eq!(m.c, q);
        }
    }

    #[test]
    fn equiv_infinity() {
        assert!(is_equiv_infinity(ReducedRational { p: 1, q: 5 }, 1));
        assert!(is_equiv_infinity(ReducedRational { p: 1, q: 16 }, 16));
        assert!(!is_equiv_infinity(ReducedRational { p: 1, q: 2 }, 4));
    }

    #[test]
    fn jacobi_values() {
        assert_eq!(jacobi_extended(2, 3).unwrap(), -1);
        assert_eq!(jacobi_extended(1, 9).unwrap(), 1);
        assert_eq!(jacobi_extended(17, 1).unwrap(), 1);
        assert_eq!(jacobi_extended(6, 9).unwrap(), 0);
        assert!(jacobi_extended(3, 4).is_err());
        // brute-force quadratic residue oracle for odd primes
        for &p in &[3i64, 5, 7, 11, 13] {
            for c in 1..p {
                let is_qr = (1..p).any(|x| (x * x) % p == c);
                assert_eq!(jacobi_extended(c, p).unwrap(), if is_qr { 1 } else { -1 });
            }
        }
    }

    #[test]
    fn jacobi_multiplicative_in_d() {
        for d1 in (1..=99i64).step_by(2) {
            for d2 in (1..=99i64).step_by(2) {
                for c in 0..=99i64 {
                    let lhs = jacobi_extended(c, d1 * d2).unwrap();
                    let rhs = jacobi_extended(c, d1).unwrap() * jacobi_extended(c, d2).unwrap();
                    assert_eq!(lhs, rhs, "c={c}, d1={d1}, d2={d2}");
                }
            }
        }
    }

    #[test]
    fn epsilon_values() {
        assert_eq!(epsilon_d(1).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(epsilon_d(3).unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(epsilon_d(-5).unwrap(), Complex64::new(0.0, 1.0));
        assert!(epsilon_d(4).is_err());
        // ε_d² = χ_{−4}(d)
        for d in (-99i64..=99).filter(|d| d % 2 != 0) {
            let sq = epsilon_d(d).unwrap().powi(2);
            let expect = if d.rem_euclid(4) == 1 { 1.0 } else { -1.0 };
            assert!((sq - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn hilbert_symbol() {
        assert_eq!(hilbert_real(-1.0, -2.0).unwrap(), -1);
        assert_eq!(hilbert_real(-1.0, 3.0).unwrap(), 1);
        assert_eq!(hilbert_real(5.0, 7.0).unwrap(), 1);
        assert!(hilbert_real(0.0, 1.0).is_err());
        // symmetry and bimultiplicativity on sign classes
        for &x in &[-2.0, 3.0] {
            for &y in &[-1.5, 4.0] {
                assert_eq!(
                    hilbert_real(x, y).unwrap(),
                    hilbert_real(y, x).unwrap()
                );
                for &z in &[-1.0, 2.0] {
                    assert_eq!(
                        hilbert_real(x * z, y).unwrap(),
                        hilbert_real(x, y).unwrap() * hilbert_real(z, y).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn beta_values() {
        let b = beta_pq(1, 16, 3).unwrap();
        assert!((b - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let b2 = beta_pq(3, 8, 1).unwrap();
        assert!((b2 - Complex64::new(0.0, 1.0)).norm() < 1e-15, "got {b2}");
        // frozen from the half-integral functional-equation consistency run
        let b3 = beta_pq(15, 16, 3).unwrap();
        assert!((b3 - Complex64::new(0.0, -1.0)).norm() < 1e-15, "got {b3}");
        for &(p, q, k) in &[(1, 16, 3), (3, 8, 1), (5, 16, 3), (7, 4, 2), (15, 16, 3)] {
            assert!((beta_pq(p, q, k).unwrap().norm() - 1.0).abs() < 1e-15);
        }
        assert!(beta_pq(2, 5, 1).is_err());
    }

    #[test]
    fn unit_roots_table() {
        let t0 = Twist::new(0, 1, 1).unwrap();
        assert!((t0.root(17) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let t2 = Twist::new(1, 2, 1).unwrap();
        assert!((t2.root(3) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let t4 = Twist::new(1, 4, 4).unwrap();
        assert!((t4.root(1) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((t4.root(3) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        // periodicity is exact by construction
        let t5 = Twist::new(2, 7, 1).unwrap();
        for n in 0..7 {
            assert_eq!(t5.root(n), t5.root(n + 7));
        }
    }

    #[test]
    fn twist_reflection() {
        let t = Twist::new(1, 5, 1).unwrap();
        assert_eq!(t.p_tilde, 1);
        assert_eq!(t.reflected, ReducedRational { p: -1, q: 5 });
        assert!(t.is_self_inverse());
        let t2 = Twist::new(2, 5, 1).unwrap();
        assert_eq!(t2.p_tilde, 3);
        assert!(!t2.is_self_inverse());
    }
}

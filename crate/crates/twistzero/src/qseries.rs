//! Fourier-coefficient generation for the bundled cusp forms: eta quotients,
//! theta-times-eta products, and coefficient files; analytic normalization
//! a_n = c_n n^{−(ν−1)/2}; direct evaluation of the form on the upper
//! half-plane; and numerical verification of the automorphy law.
//!
//! Eta expansion runs in exact integer arithmetic: checked 128-bit first,
//! restarted with big integers if any coefficient overflows.  Nothing ever
//! wraps silently.

use crate::arith::{epsilon_d, i_pow, jacobi_extended, CuspMatrix};
use num_bigint::BigInt;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub enum QSeriesError {
    /// Σ m·e / 24 is not a nonnegative integer ≥ 1.
    NonIntegralPrefactor { num: i64 },
    /// Im z too small for the table length: certified tail bound too large.
    InsufficientTruncation { needed_m: usize },
    ParseError { line: usize, what: String },
    WeightMismatch { file_weight2: i64, spec_weight2: i64 },
    Io { what: String },
}

impl std::fmt::Display for QSeriesError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QSeriesError::NonIntegralPrefactor { num } => {
                write!(f, "eta prefactor {}/24 is not a positive integer", num)
            }
            QSeriesError::InsufficientTruncation { needed_m } => {
                write!(f, "truncation too short; about {} terms needed", needed_m)
            }
            QSeriesError::ParseError { line, what } => {
                write!(f, "coefficient file parse error at line {}: {}", line, what)
            }
            QSeriesError::WeightMismatch {
                file_weight2,
                spec_weight2,
            } => write!(
                f,
                "file weight2={} does not match requested weight2={}",
                file_weight2, spec_weight2
            ),
            QSeriesError::Io { what } => write!(f, "i/o error: {}", what),
        }
    }
}

impl std::error::Error for QSeriesError {}

/// Coefficient source of a bundled or user-specified form.
#[derive(Debug, Clone, PartialEq)]
pub enum FormSource {
    /// ∏ η(mz)^e over the listed (m, e) pairs.
    EtaQuotient(Vec<(i64, i64)>),
    /// θ(z) · ∏ η(mz)^e.
    ThetaTimesEta(Vec<(i64, i64)>),
    CoefficientFile(PathBuf),
}

/// A cusp form: weight2 = 2ν (even for integral, odd for half-integral),
/// level, coefficient source, and a display label.
#[derive(Debug, Clone, PartialEq)]
pub struct FormSpec {
    pub weight2: i64,
    pub level: i64,
    pub source: FormSource,
    pub label: String,
}

impl FormSpec {
    /// Δ = η(z)^24 ∈ S_12(Γ_0(1)).
    pub fn delta() -> FormSpec {
        FormSpec {
            weight2: 24,
            level: 1,
            source: FormSource::EtaQuotient(vec![(1, 24)]),
            label: "eta:1^24".to_string(),
        }
    }

    /// g = θ(z)·η(4z)^6, weight 7/2 on Γ_0(16).
    pub fn theta_eta() -> FormSpec {
        FormSpec {
            weight2: 7,
            level: 16,
            source: FormSource::ThetaTimesEta(vec![(4, 6)]),
            label: "theta*eta:4^6".to_string(),
        }
    }

    /// ν = weight2 / 2 as a float.
    pub fn nu(&self) -> f64 {
        self.weight2 as f64 / 2.0
    }

    pub fn is_half_integral(&self) -> bool {
        self.weight2 % 2 != 0
    }

    /// Generate the coefficient table with M terms.
    pub fn coeffs(&self, m: usize) -> Result<CoeffTable, QSeriesError> {
        match &self.source {
            FormSource::EtaQuotient(pairs) => {
                let c = eta_quotient_coeffs(pairs, m)?;
                Ok(CoeffTable::from_integers(&c, self.weight2))
            }
            FormSource::ThetaTimesEta(pairs) => {
                let eta = eta_quotient_coeffs(pairs, m)?;
                let theta = theta_coeffs(m);
                // convolution over square indices: c_n = Σ_{j² ≤ n} θ_{j²} e_{n−j²}
                let mut c = vec![BigInt::from(0); m + 1];
                for n in 0..=m {
                    let mut acc = BigInt::from(0);
                    let mut j = 0usize;
                    while j * j <= n {
                        let t = theta[j * j];
                        if t != 0 {
                            acc += &eta[n - j * j] * t;
                        }
                        j += 1;
                    }
                    c[n] = acc;
                }
                Ok(CoeffTable::from_integers(&c, self.weight2))
            }
            FormSource::CoefficientFile(path) => {
                let (header, table) = load_coeffs(path)?;
                if header.weight2 != self.weight2 {
                    return Err(QSeriesError::WeightMismatch {
                        file_weight2: header.weight2,
                        spec_weight2: self.weight2,
                    });
                }
                if table.count < m {
                    return Err(QSeriesError::InsufficientTruncation { needed_m: m });
                }
                Ok(table)
            }
        }
    }
}

/// Cached coefficients: raw c_n of e(nz) and normalized a_n = c_n n^{−(ν−1)/2}.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    pub count: usize,
    c: Vec<Complex64>,
    a: Vec<Complex64>,
}

impl CoeffTable {
    pub fn from_complex(c_by_n: Vec<Complex64>, weight2: i64) -> CoeffTable {
        let a = normalize(&c_by_n, weight2);
        CoeffTable {
            count: c_by_n.len(),
            c: c_by_n,
            a,
        }
    }

    fn from_integers(c_with_zero: &[BigInt], weight2: i64) -> CoeffTable {
        // drop the constant term (zero for cusp forms)
        let c: Vec<Complex64> = c_with_zero[1..]
            .iter()
            .map(|v| Complex64::new(bigint_to_f64(v), 0.0))
            .collect();
        CoeffTable::from_complex(c, weight2)
    }

    /// c_n, 1-based.
    pub fn c(&self, n: usize) -> Complex64 {
        self.c[n - 1]
    }

    /// a_n = c_n n^{−(ν−1)/2}, 1-based.
    pub fn a(&self, n: usize) -> Complex64 {
        self.a[n - 1]
    }

    /// Crude growth constant C with |c_n| ≤ C n^ν over the table.
    pub fn growth_constant(&self, nu: f64) -> f64 {
        self.c
            .iter()
            .enumerate()
            .map(|(i, v)| v.norm() / ((i + 1) as f64).powf(nu))
            .fold(1e-30, f64::max)
    }
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    use num_bigint::Sign;
    let (sign, digits) = v.to_u64_digits();
    let mut x = 0.0f64;
    for &d in digits.iter().rev() {
        x = x * 1.8446744073709552e19 + d as f64;
    }
    if sign == Sign::Minus {
        -x
    } else {
        x
    }
}

/// a_n = c_n · n^{−(weight2−2)/4} (exponent (ν−1)/2 with ν = weight2/2).
pub fn normalize(c: &[Complex64], weight2: i64) -> Vec<Complex64> {
    let expo = (weight2 as f64 - 2.0) / 4.0;
    c.iter()
        .enumerate()
        .map(|(i, v)| v * ((i + 1) as f64).powf(-expo))
        .collect()
}

fn eta_block_passes_i128(pairs: &[(i64, i64)], m: usize) -> Option<Vec<i128>> {
    let mut a = vec![0i128; m + 1];
    a[0] = 1;
    for &(mm, e) in pairs {
        let mm = mm as usize;
        for n in 1..=(m / mm).max(0) {
            let j = mm * n;
            if j > m {
                break;
            }
            if e > 0 {
                for _ in 0..e {
                    for i in (j..=m).rev() {
                        a[i] = a[i].checked_sub(a[i - j])?;
                    }
                }
            } else {
                for _ in 0..(-e) {
                    for i in j..=m {
                        a[i] = a[i].checked_add(a[i - j])?;
                    }
                }
            }
        }
    }
    Some(a)
}

fn eta_block_passes_big(pairs: &[(i64, i64)], m: usize) -> Vec<BigInt> {
    let mut a = vec![BigInt::from(0); m + 1];
    a[0] = BigInt::from(1);
    for &(mm, e) in pairs {
        let mm = mm as usize;
        for n in 1..=(m / mm).max(0) {
            let j = mm * n;
            if j > m {
                break;
            }
            if e > 0 {
                for _ in 0..e {
                    for i in (j..=m).rev() {
                        let s = &a[i] - &a[i - j];
                        a[i] = s;
                    }
                }
            } else {
                for _ in 0..(-e) {
                    for i in j..=m {
                        let s = &a[i] + &a[i - j];
                        a[i] = s;
                    }
                }
            }
        }
    }
    a
}

/// Coefficients (index = exponent of e(nz), 0..=M) of ∏ η(mz)^e.
///
/// The q^{Σme/24} prefactor must be a positive integer (cusp at ∞).
pub fn eta_quotient_coeffs(pairs: &[(i64, i64)], m: usize) -> Result<Vec<BigInt>, QSeriesError> {
    let num: i64 = pairs.iter().map(|&(mm, e)| mm * e).sum();
    if num <= 0 || num % 24 != 0 {
        return Err(QSeriesError::NonIntegralPrefactor { num });
    }
    let p = (num / 24) as usize;
    if m < p {
        // degenerate: expansion starts beyond the requested truncation
        return Ok(vec![BigInt::from(0); m + 1]);
    }
    let inner = m - p;
    let block: Vec<BigInt> = match eta_block_passes_i128(pairs, inner) {
        Some(v) => v.into_iter().map(BigInt::from).collect(),
        None => eta_block_passes_big(pairs, inner),
    };
    let mut out = vec![BigInt::from(0); m + 1];
    for (i, v) in block.into_iter().enumerate() {
        out[i + p] = v;
    }
    Ok(out)
}

/// Coefficients of θ(z) = Σ_{n∈ℤ} e(n²z) up to exponent M.
pub fn theta_coeffs(m: usize) -> Vec<i64> {
    let mut t = vec![0i64; m + 1];
    t[0] = 1;
    let mut n = 1usize;
    while n * n <= m {
        t[n * n] = 2;
        n += 1;
    }
    t
}

/// Partial sum Σ_{n≤M} c_n e(nz) with a certified truncation bound.
pub fn eval_form(
    spec: &FormSpec,
    table: &CoeffTable,
    z: Complex64,
) -> Result<Complex64, QSeriesError> {
    assert!(z.im > 0.0, "eval_form requires Im z > 0");
    let r = (Complex64::new(0.0, 2.0 * PI) * z).exp();
    let rho = r.norm();
    let m = table.count;
    let nu = spec.nu();
    // tail bound from |c_n| ≤ C n^ν: Σ_{n>M} C n^ν ρ^n ≤ 2 C (M+1)^ν ρ^{M+1}/(1−ρ)
    let c_growth = table.growth_constant(nu);
    let tail = 2.0 * c_growth * ((m + 1) as f64).powf(nu) * rho.powi(m as i32 + 1) / (1.0 - rho);
    let leading = rho;
    if !(tail <= 1e-10 * leading) {
        // solve C n^ν ρ^n ≈ 1e-12 crudely for a suggested table length
        let needed = ((nu * (m.max(2) as f64).ln() + 30.0) / (2.0 * PI * z.im)).ceil() as usize;
        return Err(QSeriesError::InsufficientTruncation {
            needed_m: needed.max(2 * m),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut pw = Complex64::new(1.0, 0.0);
    for n in 1..=m {
        pw *= r;
        acc += table.c(n) * pw;
    }
    Ok(acc)
}

/// |f(γz) − J(γ,z) f(z)| / |f(γz)| with the weight-appropriate factor J.
pub fn verify_automorphy(
    spec: &FormSpec,
    table: &CoeffTable,
    gamma: &CuspMatrix,
    z: Complex64,
) -> Result<f64, QSeriesError> {
    assert_eq!(gamma.det(), 1, "gamma must be unimodular");
    assert_eq!(
        gamma.c.rem_euclid(spec.level),
        0,
        "gamma must lie in Gamma_0(level)"
    );
    let gz = gamma.apply(z);
    let fz = eval_form(spec, table, z)?;
    let fgz = eval_form(spec, table, gz)?;
    let czd = gamma.c as f64 * z + gamma.d as f64;
    let j = if spec.is_half_integral() {
        // (c/d)^{2k+1} ε_d^{−1−2k} (cz+d)^{k+1/2}, principal branch
        let two_k1 = spec.weight2; // 2k+1
        let jac = jacobi_extended(gamma.c, gamma.d).expect("odd d in Gamma_0(4|N)") as f64;
        let eps = epsilon_d(gamma.d).expect("odd d");
        let eps_pow = if eps.im == 1.0 {
            i_pow(-two_k1)
        } else {
            Complex64::new(1.0, 0.0)
        };
        // jac^{2k+1} = jac (odd exponent, jac = ±1)
        jac * eps_pow * (Complex64::new(two_k1 as f64 / 2.0, 0.0) * czd.ln()).exp()
    } else {
        czd.powi((spec.weight2 / 2) as i32)
    };
    Ok((fgz - j * fz).norm() / fgz.norm())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffHeader {
    pub weight2: i64,
    pub level: i64,
    pub label: String,
    pub count: usize,
}

/// Write the table in the `twistzero-coeffs v1` text format.
pub fn save_coeffs(
    spec: &FormSpec,
    table: &CoeffTable,
    path: &Path,
) -> Result<(), QSeriesError> {
    let mut out = String::new();
    writeln!(
        out,
        "# twistzero-coeffs v1 weight2={} level={} label={} count={}",
        spec.weight2, spec.level, spec.label, table.count
    )
    .expect("string write");
    for n in 1..=table.count {
        let c = table.c(n);
        writeln!(out, "{} {:.16e} {:.16e}", n, c.re, c.im).expect("string write");
    }
    std::fs::write(path, out).map_err(|e| QSeriesError::Io {
        what: format!("{}: {}", path.display(), e),
    })
}

/// Parse a `twistzero-coeffs v1` file.
pub fn load_coeffs(path: &Path) -> Result<(CoeffHeader, CoeffTable), QSeriesError> {
    let text = std::fs::read_to_string(path).map_err(|e| QSeriesError::Io {
        what: format!("{}: {}", path.display(), e),
    })?;
    let mut lines = text.lines().enumerate();
    let (_, header_line) = lines.next().ok_or(QSeriesError::ParseError {
        line: 1,
        what: "empty file".to_string(),
    })?;
    let header = parse_header(header_line)?;
    let mut c = vec![Complex64::new(0.0, 0.0); header.count];
    let mut seen = 0usize;
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let err = |what: &str| QSeriesError::ParseError {
            line: line_no,
            what: what.to_string(),
        };
        let n: usize = parts
            .next()
            .ok_or_else(|| err("missing index"))?
            .parse()
            .map_err(|_| err("bad index"))?;
        let re: f64 = parts
            .next()
            .ok_or_else(|| err("missing real part"))?
            .parse()
            .map_err(|_| err("bad real part"))?;
        let im: f64 = parts
            .next()
            .ok_or_else(|| err("missing imaginary part"))?
            .parse()
            .map_err(|_| err("bad imaginary part"))?;
        if n == 0 || n > header.count {
            return Err(err("index out of range"));
        }
        c[n - 1] = Complex64::new(re, im);
        seen += 1;
    }
    if seen != header.count {
        return Err(QSeriesError::ParseError {
            line: seen + 1,
            what: format!("expected {} coefficient lines, found {}", header.count, seen),
        });
    }
    let weight2 = header.weight2;
    Ok((header, CoeffTable::from_complex(c, weight2)))
}

fn parse_header(line: &str) -> Result<CoeffHeader, QSeriesError> {
    let err = |what: &str| QSeriesError::ParseError {
        line: 1,
        what: what.to_string(),
    };
    if !line.starts_with("# twistzero-coeffs v1 ") {
        return Err(err("missing `# twistzero-coeffs v1` magic"));
    }
    let mut weight2 = None;
    let mut level = None;
    let mut label = None;
    let mut count = None;
    for field in line["# twistzero-coeffs v1 ".len()..].split_whitespace() {
        let (key, value) = field.split_once('=').ok_or_else(|| err("bad header field"))?;
        match key {
            "weight2" => weight2 = Some(value.parse().map_err(|_| err("bad weight2"))?),
            "level" => level = Some(value.parse().map_err(|_| err("bad level"))?),
            "label" => label = Some(value.to_string()),
            "count" => count = Some(value.parse().map_err(|_| err("bad count"))?),
            _ => return Err(err("unknown header key")),
        }
    }
    Ok(CoeffHeader {
        weight2: weight2.ok_or_else(|| err("missing weight2"))?,
        level: level.ok_or_else(|| err("missing level"))?,
        label: label.ok_or_else(|| err("missing label"))?,
        count: count.ok_or_else(|| err("missing count"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::cusp_matrix;
    use crate::arith::ReducedRational;

    const TAU: [i64; 12] = [
        1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944,
    ];

    #[test]
    fn delta_coefficients() {
        let t = FormSpec::delta().coeffs(30).unwrap();
        for (i, &tau) in TAU.iter().enumerate() {
            assert_eq!(t.c(i + 1), Complex64::new(tau as f64, 0.0));
        }
    }

    #[test]
    fn delta_multiplicativity() {
        let t = FormSpec::delta().coeffs(3000).unwrap();
        let pairs = [
            (2usize, 3usize),
            (2, 5),
            (3, 4),
            (3, 5),
            (4, 5),
            (2, 9),
            (5, 7),
            (4, 9),
            (8, 9),
            (25, 27),
        ];
        for &(m, n) in &pairs {
            assert_eq!(t.c(m * n), t.c(m) * t.c(n), "m={m}, n={n}");
        }
    }

    #[test]
    fn theta_eta_coefficients() {
        let t = FormSpec::theta_eta().coeffs(16).unwrap();
        let expect = [1.0, 2.0, 0.0, 0.0, -4.0, -12.0, 0.0, 0.0, -3.0, 20.0, 0.0, 0.0, 28.0, 8.0, 0.0, 0.0];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(t.c(i + 1).re, e, "n = {}", i + 1);
        }
    }

    #[test]
    fn theta_squared_is_r2() {
        let th = theta_coeffs(100);
        for n in 0..=100usize {
            let conv: i64 = (0..=n)
                .map(|j| th[j] * th[n - j])
                .sum();
            let mut r2 = 0i64;
            for x in -10i64..=10 {
                for y in -10i64..=10 {
                    if x * x + y * y == n as i64 {
                        r2 += 1;
                    }
                }
            }
            assert_eq!(conv, r2, "n = {n}");
        }
    }

    #[test]
    fn prefactor_validation() {
        assert!(matches!(
            eta_quotient_coeffs(&[(1, 23)], 10),
            Err(QSeriesError::NonIntegralPrefactor { .. })
        ));
        assert!(matches!(
            eta_quotient_coeffs(&[(1, -24)], 10),
            Err(QSeriesError::NonIntegralPrefactor { .. })
        ));
    }

    #[test]
    fn normalize_roundtrip() {
        let spec = FormSpec::delta();
        let t = spec.coeffs(50).unwrap();
        for n in 1..=50usize {
            let back = t.a(n) * (n as f64).powf((spec.weight2 as f64 - 2.0) / 4.0);
            assert!((back - t.c(n)).norm() <= 1e-14 * t.c(n).norm().max(1.0));
        }
        assert_eq!(t.a(1), t.c(1));
        // Δ: a_2 = −24·2^{−11/2}
        assert!((t.a(2).re - (-24.0 * 2.0f64.powf(-5.5))).abs() < 1e-12);
        assert!((t.a(2).re - (-0.5303300858899106)).abs() < 1e-9);
    }

    #[test]
    fn eval_delta_at_i() {
        let spec = FormSpec::delta();
        let t = spec.coeffs(60).unwrap();
        let v = eval_form(&spec, &t, Complex64::new(0.0, 1.0)).unwrap();
        assert!((v.re - 0.0017853698506421519).abs() < 1e-15, "got {}", v.re);
        assert!(v.im.abs() < 1e-18);
    }

    #[test]
    fn eval_leading_term_and_periodicity() {
        let spec = FormSpec::delta();
        let t = spec.coeffs(60).unwrap();
        let z = Complex64::new(0.3, 5.0);
        let v = eval_form(&spec, &t, z).unwrap();
        let lead = (Complex64::new(0.0, 2.0 * PI) * z).exp();
        assert!((v / lead - 1.0).norm() < 1e-8);
        let v1 = eval_form(&spec, &t, z + 1.0).unwrap();
        assert!((v - v1).norm() <= 1e-12 * v.norm());
    }

    #[test]
    fn eval_insufficient_truncation() {
        let spec = FormSpec::delta();
        let t = spec.coeffs(40).unwrap();
        let r = eval_form(&spec, &t, Complex64::new(0.0, 0.01));
        assert!(matches!(r, Err(QSeriesError::InsufficientTruncation { .. })));
    }

    #[test]
    fn theta_eta_value_oracle() {
        // frozen high-precision partial sum at z = i/3
        let spec = FormSpec::theta_eta();
        let t = spec.coeffs(400).unwrap();
        let v = eval_form(&spec, &t, Complex64::new(0.0, 1.0 / 3.0)).unwrap();
        assert!(
            (v.re - 0.15331882299992146629).abs() < 1e-12,
            "got {}",
            v.re
        );
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn automorphy_integral_weight() {
        let spec = FormSpec::delta();
        let t = spec.coeffs(400).unwrap();
        let z = Complex64::new(0.37, 0.9);
        let shift = CuspMatrix { a: 1, b: 1, c: 0, d: 1 };
        assert!(verify_automorphy(&spec, &t, &shift, z).unwrap() < 1e-10);
        let s_mat = CuspMatrix { a: 0, b: -1, c: 1, d: 0 };
        assert!(verify_automorphy(&spec, &t, &s_mat, z).unwrap() < 1e-9);
        // γ = (3 2; 7 5): pick z near the pole −5/7 so γz keeps a usable height
        let gamma = cusp_matrix(ReducedRational { p: 3, q: 7 }).unwrap();
        let z2 = Complex64::new(-5.0 / 7.0, 0.15);
        let res = verify_automorphy(&spec, &t, &gamma, z2).unwrap();
        assert!(res < 1e-9, "residual {res}");
    }

    #[test]
    fn automorphy_half_integral_base_case() {
        let spec = FormSpec::theta_eta();
        let t = spec.coeffs(5000).unwrap();
        let z = Complex64::new(1.0 / 7.0, 0.9);
        let gamma = CuspMatrix { a: 1, b: 0, c: 16, d: 1 };
        let res = verify_automorphy(&spec, &t, &gamma, z).unwrap();
        assert!(res < 1e-9, "residual {res}");
    }

    #[test]
    fn coeff_file_roundtrip() {
        let spec = FormSpec::delta();
        let t = spec.coeffs(1000).unwrap();
        let dir = std::env::temp_dir();
        let path = dir.join("twistzero_test_delta_coeffs.txt");
        save_coeffs(&spec, &t, &path).unwrap();
        let (header, back) = load_coeffs(&path).unwrap();
        assert_eq!(header.weight2, 24);
        assert_eq!(header.level, 1);
        assert_eq!(header.label, "eta:1^24");
        assert_eq!(back.count, 1000);
        for n in 1..=1000usize {
            assert_eq!(back.c(n), t.c(n), "n = {n}");
        }
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn coeff_file_weight_mismatch_and_parse_errors() {
        let dir = std::env::temp_dir();
        let path = dir.join("twistzero_test_bad_coeffs.txt");
        std::fs::write(
            &path,
            "# twistzero-coeffs v1 weight2=24 level=1 label=x count=2\n1 1.0 0.0\n",
        )
        .unwrap();
        assert!(matches!(
            load_coeffs(&path),
            Err(QSeriesError::ParseError { .. })
        ));
        std::fs::write(
            &path,
            "# twistzero-coeffs v1 weight2=24 level=1 label=x count=1\n1 1.0 0.0\n",
        )
        .unwrap();
        let spec = FormSpec {
            weight2: 7,
            level: 16,
            source: FormSource::CoefficientFile(path.clone()),
            label: "file".to_string(),
        };
        assert!(matches!(
            spec.coeffs(1),
            Err(QSeriesError::WeightMismatch { .. })
        ));
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn eta_engine_matches_convolution_oracle() {
        // direct polynomial multiplication oracle, exact big integers
        fn oracle(pairs: &[(i64, i64)], m: usize) -> Vec<BigInt> {
            let p: i64 = pairs.iter().map(|&(mm, e)| mm * e).sum::<i64>() / 24;
            let inner = m - p as usize;
            let mut acc = vec![BigInt::from(0); inner + 1];
            acc[0] = BigInt::from(1);
            for &(mm, e) in pairs {
                for n in 1..=(inner / mm as usize).max(0) {
                    // factor (1 − q^{mn})^{±1} applied |e| times via full products
                    for _ in 0..e.abs() {
                        let mut next = vec![BigInt::from(0); inner + 1];
                        if e > 0 {
                            for i in 0..=inner {
                                let mut v = acc[i].clone();
                                if i >= mm as usize * n {
                                    v -= &acc[i - mm as usize * n];
                                }
                                next[i] = v;
                            }
                        } else {
                            // (1−x)^{−1} = Σ x^j
                            for i in 0..=inner {
                                let mut v = acc[i].clone();
                                if i >= mm as usize * n {
                                    v += &next[i - mm as usize * n];
                                }
                                next[i] = v;
                            }
                        }
                        acc = next;
                    }
                }
            }
            let mut out = vec![BigInt::from(0); m + 1];
            for (i, v) in acc.into_iter().enumerate() {
                out[i + p as usize] = v;
            }
            out
        }
        let quotients: Vec<Vec<(i64, i64)>> = vec![
            vec![(1, 24)],
            vec![(4, 6)],
            vec![(2, 12)],
            vec![(1, 12), (2, 6)],
            vec![(1, 48), (2, -12)],
        ];
        for pairs in &quotients {
            let engine = eta_quotient_coeffs(pairs, 120).unwrap();
            let brute = oracle(pairs, 120);
            assert_eq!(engine, brute, "pairs {:?}", pairs);
        }
    }
}

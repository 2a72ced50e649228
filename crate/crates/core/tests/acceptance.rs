//! Acceptance run: one PASS/FAIL line per criterion. Reference values come
//! from the published table and closed forms, and from plain `f64`
//! oracles written independently of the library.
//!
//! Exits 0 after reporting; set `ACCEPTANCE_STRICT=1` to exit 1 when any
//! criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use countertwist::charpoly::{char_poly_exact, classify_solvability, discriminant, SolvabilityClass};
use countertwist::evolution::{time_series, SeriesConfig, SpectralPropagator, TimeSeries};
use countertwist::poly::IntPolynomial;
use countertwist::spectrum::spectrum;
use countertwist::spin_algebra::build_h_ta;
use countertwist::table1::{table1_reference, TABLE1_TWICE_J};
use countertwist::verify::{verify, VerifyConfig};
use countertwist::{Precision, Spin};
use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn spin(twice: i64) -> Spin {
    Spin::from_twice(twice).unwrap()
}

// ---------------------------------------------------------------- oracles

/// `H/χ` in `f64`, straight from `<m+2|H|m> = -(i/2) sqrt((j-m)(j+m+1)(j-m-1)(j+m+2))`,
/// basis ordered `m = j, j-1, ..., -j`.
fn h_f64(twice_j: i64) -> DMatrix<Complex<f64>> {
    let n = (twice_j + 1) as usize;
    let j = twice_j as f64 / 2.0;
    let mut h = DMatrix::from_element(n, n, Complex::new(0.0, 0.0));
    for c in 2..n {
        let m = j - c as f64;
        let a = ((j - m) * (j + m + 1.0) * (j - m - 1.0) * (j + m + 2.0)).sqrt() / 2.0;
        h[(c - 2, c)] = Complex::new(0.0, -a);
        h[(c, c - 2)] = Complex::new(0.0, a);
    }
    h
}

/// Characteristic polynomial `det(H - λ)` rebuilt from `f64` Hermitian
/// eigenvalues, ascending coefficients. Paired roots are combined into
/// `λ² - μ` factors so that no coefficient suffers cancellation.
fn charpoly_from_eigenvalues(twice_j: i64) -> Vec<f64> {
    let h = h_f64(twice_j);
    let n = h.nrows();
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut poly = vec![1.0];
    let mut mul = |f: &[f64]| {
        let mut out = vec![0.0; poly.len() + f.len() - 1];
        for (i, a) in poly.iter().enumerate() {
            for (k, b) in f.iter().enumerate() {
                out[i + k] += a * b;
            }
        }
        poly = out;
    };
    for k in 0..n / 2 {
        let mu = (ev[n - 1 - k].powi(2) + ev[k].powi(2)) / 2.0;
        mul(&[-mu, 0.0, 1.0]);
    }
    if n % 2 == 1 {
        mul(&[0.0, 1.0]);
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    poly.iter().map(|c| c * sign).collect()
}

fn rat_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let q = Rational::from(r.last().unwrap() / b.last().unwrap());
        let shift = r.len() - 1 - db;
        for (k, c) in b.iter().enumerate() {
            r[shift + k] -= Rational::from(&q * c);
        }
        r.pop();
        while r.last().is_some_and(|c| *c == 0) {
            r.pop();
        }
    }
    r
}

/// Whether every root of `p` is real, by a Sturm sequence: the number of
/// distinct real roots must equal `deg p - deg gcd(p, p')`.
fn all_roots_real(p: &IntPolynomial) -> bool {
    let p0: Vec<Rational> = p.coeffs().iter().map(Rational::from).collect();
    let p1: Vec<Rational> = p0.iter().enumerate().skip(1).map(|(k, c)| Rational::from(c * k as u32)).collect();
    let mut seq = vec![p0, p1];
    loop {
        let r = rat_rem(&seq[seq.len() - 2], &seq[seq.len() - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let changes = |signs: Vec<i32>| signs.windows(2).filter(|w| w[0] != w[1]).count();
    let at_pos = |q: &Vec<Rational>| q.last().unwrap().cmp0() as i32;
    let at_neg = |q: &Vec<Rational>| {
        let s = q.last().unwrap().cmp0() as i32;
        if (q.len() - 1).is_multiple_of(2) { s } else { -s }
    };
    let distinct_real = changes(seq.iter().map(at_neg).collect()) - changes(seq.iter().map(at_pos).collect());
    let gcd_degree = seq.last().unwrap().len() - 1;
    distinct_real == p.degree().unwrap_or(0) - gcd_degree
}

/// Propagator of the j = 2 example as printed.
fn eq15_printed(t: f64) -> [[f64; 5]; 5] {
    let s3 = 3f64.sqrt();
    let (c1, s1) = ((s3 * t).cos(), (s3 * t).sin());
    let (c2, s2) = ((2.0 * s3 * t).cos(), (2.0 * s3 * t).sin());
    let (c3, s3t) = ((3.0 * t).cos(), (3.0 * t).sin());
    [
        [c1 * c1, 0.0, -s2 / 2.0, 0.0, s1 * s1],
        [0.0, c3, 0.0, -s3t, 0.0],
        [s2 / 2.0, 0.0, c2, 0.0, -s2 / 2.0],
        [0.0, s3t, 0.0, c3, 0.0],
        [s1 * s1, 0.0, s2 / 2.0, 0.0, c1 * c1],
    ]
}

/// The same matrix with the `sin(2√3χt)` entries over `√2`.
fn eq15_unitary(t: f64) -> [[f64; 5]; 5] {
    let mut m = eq15_printed(t);
    for (r, c) in [(0, 2), (2, 0), (2, 4), (4, 2)] {
        m[r][c] *= 2.0 / 2f64.sqrt();
    }
    m
}

fn denominator(t: f64) -> f64 {
    let s3 = 3f64.sqrt();
    ((3.0 * t).cos() * (1.0 + 3.0 * (2.0 * s3 * t).cos()) + s3 * (3.0 * t).sin() * (2.0 * s3 * t).sin()).abs()
}

fn xi_y_closed(t: f64) -> f64 {
    let s3 = 3f64.sqrt();
    let num = 17.0 - 6.0 * (6.0 * t).cos() - 6.0 * (2.0 * s3 * t).cos() + 3.0 * (4.0 * s3 * t).cos();
    2f64.sqrt() * num.sqrt() / denominator(t)
}

fn xi_z_closed(t: f64) -> f64 {
    let s3 = 3f64.sqrt();
    let inner = (6.0 * t).sin() + s3 * (2.0 * s3 * t).sin();
    let num = 7.0 - 3.0 * (4.0 * s3 * t).cos() - inner * inner;
    2.0 * num.sqrt() / denominator(t)
}

fn corr_closed(t: f64) -> f64 {
    let s3 = 3f64.sqrt();
    1.5 * (s3 * t).cos() * ((1.0 - s3) * ((3.0 - s3) * t).sin() + (1.0 + s3) * ((3.0 + s3) * t).sin())
}

// ------------------------------------------------------------- criteria

fn criterion_1() -> Outcome {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    for t in TABLE1_TWICE_J {
        let j = spin(t);
        let start = Instant::now();
        let computed = char_poly_exact(j).unwrap();
        slowest = slowest.max(start.elapsed());
        let entry = table1_reference(j).unwrap();
        if t == 16 || t == 22 {
            let n = (t + 1) as usize;
            let parity_ok = if n.is_multiple_of(2) { computed.is_even() } else { computed.is_odd() };
            let lead_ok = *computed.leading().unwrap() == if n.is_multiple_of(2) { 1 } else { -1 };
            let real_ok = all_roots_real(&computed);
            let oracle = charpoly_from_eigenvalues(t);
            let worst = computed
                .coeffs()
                .iter()
                .zip(&oracle)
                .filter(|(c, _)| **c != 0)
                .map(|(c, o)| ((c.to_f64() - o) / c.to_f64()).abs())
                .fold(0.0, f64::max);
            let zeros_ok = computed.coeffs().iter().zip(&oracle).all(|(c, o)| *c != 0 || *o == 0.0);
            if !(parity_ok && lead_ok && real_ok && worst < 1e-8 && zeros_ok && oracle.len() == n + 1) {
                failures.push(format!(
                    "j={j}: parity {parity_ok}, leading {lead_ok}, real roots {real_ok}, oracle rel {worst:.1e}"
                ));
            }
        } else if computed != entry.literal {
            failures.push(format!("j={j}: printed {} but computed {computed}", entry.printed));
        }
    }
    let ok = failures.is_empty() && slowest < Duration::from_secs(1);
    let mut detail = format!("slowest row {:.1} ms", slowest.as_secs_f64() * 1e3);
    for f in failures {
        detail += &format!("; {f}");
    }
    outcome(ok, detail)
}

fn criterion_2() -> Outcome {
    let mut bad = Vec::new();
    for t in TABLE1_TWICE_J {
        let j = spin(t);
        let d = discriminant(&char_poly_exact(j).unwrap()).unwrap();
        let zero = d == 0;
        let column = table1_reference(j).unwrap().degenerate;
        if zero != (t % 2 == 1) || zero != column {
            bad.push(format!("j={j}"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "22 rows agree".into() } else { bad.join(", ") })
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    for t in 1..=22 {
        let want = match t {
            // λ² is a pure power of λ; its roots need no radicals at all
            1 => SolvabilityClass::TrivialZero,
            2..=17 => SolvabilityClass::Radicals,
            18..=21 => SolvabilityClass::Hypergeometric,
            _ => SolvabilityClass::NumericOnly,
        };
        let got = classify_solvability(spin(t)).unwrap().class;
        if got != want {
            bad.push(format!("j={}: {got:?}", spin(t)));
        }
    }
    let detail = if bad.is_empty() { "j = 1 .. 17/2 radicals, j = 1/2 trivial, 9 .. 21/2 hypergeometric, 11 numeric".into() } else { bad.join(", ") };
    outcome(bad.is_empty(), detail)
}

fn criterion_4() -> Outcome {
    let report = spectrum(spin(4), Precision::default()).unwrap();
    let got: Vec<f64> = report.expanded().iter().map(|x| x.to_f64()).collect();
    let r12 = 12f64.sqrt();
    let want = [-r12, -3.0, 0.0, 3.0, r12];
    let worst = if got.len() == 5 {
        got.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    outcome(worst < 1e-12, format!("max deviation {worst:.1e}"))
}

fn propagator_deviation(closed: fn(f64) -> [[f64; 5]; 5]) -> f64 {
    let sp = SpectralPropagator::new(spin(4), Precision::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let t = rng.gen_range(0.0..=5.0);
        let u = sp.at_f64(t).matrix.to_f64_rows();
        let c = closed(t);
        for r in 0..5 {
            for k in 0..5 {
                let (re, im) = u[r][k];
                worst = worst.max(((re - c[r][k]).powi(2) + im * im).sqrt());
            }
        }
    }
    worst
}

fn criterion_5() -> Outcome {
    let printed = propagator_deviation(eq15_printed);
    let unitary = propagator_deviation(eq15_unitary);
    outcome(
        printed < 1e-12,
        format!("max entry deviation {printed:.1e} from the printed matrix; {unitary:.1e} with sin(2√3χt)/√2 entries"),
    )
}

fn j2_series(t_max: f64, steps: usize) -> TimeSeries {
    time_series(&SeriesConfig { j: spin(4), chi: 1.0, omega: 0.0, t_max, steps, precision: Precision::default() })
        .unwrap()
}

fn max_rel(got: &[Option<f64>], grid: &[f64], f: fn(f64) -> f64) -> f64 {
    got.iter()
        .zip(grid)
        .map(|(g, &t)| match g {
            Some(g) => {
                let w = f(t);
                (g - w).abs() / w.abs().max(1.0)
            }
            None => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

fn criterion_6(series: &TimeSeries) -> Outcome {
    let grid = series.grid();
    let xy = series.column("xi_y").unwrap();
    let xz = series.column("xi_z").unwrap();
    let dy = max_rel(&xy[1..], &grid[1..], xi_y_closed);
    let dz = max_rel(&xz[1..], &grid[1..], xi_z_closed);
    let at0 = (xy[0].unwrap_or(f64::NAN) - 1.0).abs().max((xz[0].unwrap_or(f64::NAN) - 1.0).abs());
    outcome(
        dy < 1e-10 && dz < 1e-10 && at0 < 1e-12,
        format!("ξ_y {dy:.1e}, ξ_z {dz:.1e} on 200 points; |ξ(0) - 1| = {at0:.1e}"),
    )
}

fn criterion_7(series: &TimeSeries) -> Outcome {
    let grid = series.grid();
    let c = series.column("corr_xz").unwrap();
    let worst = c[1..].iter().zip(&grid[1..]).map(|(g, &t)| (g.unwrap() - corr_closed(t)).abs()).fold(0.0, f64::max);
    let at0 = c[0].unwrap().abs();
    outcome(worst < 1e-10 && at0 < 1e-12, format!("max deviation {worst:.1e}; value at 0 is {at0:.1e}"))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let series = j2_series(10.0, 10_001);
    let elapsed = start.elapsed();
    let tol = Precision::default().tolerance() * 1e5;
    let xy = series.column("xi_y").unwrap();
    let xz = series.column("xi_z").unwrap();
    let y_ok = xy[1..].iter().all(|v| v.is_some_and(|v| v >= 1.0 - tol));
    let below: Vec<bool> = xz[1..].iter().map(|v| v.is_some_and(|v| v < 1.0)).collect();
    let runs = below.windows(2).filter(|w| w[1] && !w[0]).count() + usize::from(below[0]);
    outcome(
        y_ok && runs == 2 && elapsed < Duration::from_secs(10),
        format!(
            "window (0, 10], 10⁴ points: ξ_y ≥ 1 {y_ok}, ξ_z < 1 on {runs} intervals, {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for t in (1..=30).chain([60]) {
        let report = verify(&VerifyConfig::new(spin(t), Precision::default())).unwrap();
        for p in report.properties.iter().filter(|p| !p.passed && !p.informational) {
            bad.push(format!("j={}: {} {:.1e}", spin(t), p.name, p.metric));
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(60);
    let mut detail = format!("j = 1/2 .. 15 and 30 in {:.1} s", elapsed.as_secs_f64());
    for b in bad {
        detail += &format!("; {b}");
    }
    outcome(ok, detail)
}

fn criterion_10() -> Outcome {
    let h = build_h_ta(spin(1), 1.0, Precision::default());
    let zero = h.max_abs() == 0.0;
    let series = time_series(&SeriesConfig {
        j: spin(1),
        chi: 1.0,
        omega: 0.0,
        t_max: 2.0 * PI,
        steps: 50,
        precision: Precision::default(),
    })
    .unwrap();
    let constant = ["jx_mean", "var_jy", "var_jz", "xi_y", "xi_z", "corr_xz", "xi_opt", "opt_angle"]
        .iter()
        .all(|c| {
            let col = series.column(c).unwrap();
            col.iter().all(|v| *v == col[0])
        });
    outcome(zero && constant, format!("H = 0: {zero}; observables constant: {constant}"))
}

fn main() {
    let series = j2_series(3.0, 201);
    let checks: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("Table 1 reproduction", Box::new(criterion_1)),
        ("degeneracy column", Box::new(criterion_2)),
        ("solvability ladder", Box::new(criterion_3)),
        ("J=2 spectrum", Box::new(criterion_4)),
        ("J=2 propagator entries", Box::new(criterion_5)),
        ("ξ_y, ξ_z closed forms", Box::new(|| criterion_6(&series))),
        ("⟨JxJz+JzJx⟩ closed form", Box::new(|| criterion_7(&series))),
        ("figure-level squeezing checks", Box::new(criterion_8)),
        ("property suites", Box::new(criterion_9)),
        ("J=1/2 triviality", Box::new(criterion_10)),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in checks.iter().enumerate() {
        let o = check();
        println!("{} criterion {:>2} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, k + 1, o.detail);
        if !o.passed {
            failed.push(k + 1);
        }
    }
    println!(
        "acceptance: {} of {} criteria pass{}",
        checks.len() - failed.len(),
        checks.len(),
        if failed.is_empty() { String::new() } else { format!("; failing: {failed:?}") }
    );
    if !failed.is_empty() && std::env::var_os("ACCEPTANCE_STRICT").is_some_and(|v| v == "1") {
        std::process::exit(1);
    }
}

//! Acceptance suite. Prints one PASS/FAIL (or SKIP) line per criterion and
//! exits nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use flatcolor::catalog::{Catalog, EntryCheck};
use flatcolor::coloring::{
    build_matrix, check_consistency, defined_polys, f1_equals_u_identity, invariant, quasidet_kk,
    ConsistencyConfig,
};
use flatcolor::gauss::{random_diagram_with, GaussDiagram, Side};
use flatcolor::laurent::LaurentPoly;
use flatcolor::ncmatrix::{MatrixError, NcMatrix};
use flatcolor::semiquandle::{check_axioms, op_o, op_u, random_selem, SnSemiquandle};
use flatcolor::sring::{SElem, SRing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TREFOIL_LIKE: &str = "-1 -2 -3 1 3 2";

enum Outcome {
    Pass(String),
    Skip(String),
}

type Check = Result<Outcome, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn gd(code: &str) -> GaussDiagram {
    code.parse().unwrap()
}

fn lp(text: &str) -> LaurentPoly {
    text.parse().unwrap()
}

fn s_pow(k: i64, order: usize) -> SElem {
    SElem::from_laurent(LaurentPoly::monomial(1, k), order)
}

fn random_unit(rng: &mut ChaCha8Rng, order: usize) -> SElem {
    let mut c = random_selem(rng, order).coeffs().to_vec();
    c[0] = LaurentPoly::monomial(if rng.gen() { 1 } else { -1 }, rng.gen_range(-2..=2));
    SElem::from_coeffs(c)
}

// Entries whose degree-zero part is 0 or a unit, so that many minors are
// invertible.
fn random_matrix(rng: &mut ChaCha8Rng, m: usize, order: usize) -> NcMatrix {
    let rows = (0..m)
        .map(|_| {
            (0..m)
                .map(|_| {
                    if rng.gen_bool(0.45) {
                        let mut c = random_selem(rng, order).coeffs().to_vec();
                        c[0] = LaurentPoly::zero();
                        SElem::from_coeffs(c)
                    } else {
                        random_unit(rng, order)
                    }
                })
                .collect()
        })
        .collect();
    NcMatrix::from_rows(rows, order).unwrap()
}

fn quasi(a: &NcMatrix, i: usize, j: usize) -> Result<Option<SElem>, String> {
    match a.quasideterminant(i, j) {
        Ok(q) => Ok(Some(q)),
        Err(MatrixError::MinorNotInvertible { .. }) => Ok(None),
        Err(e) => Err(format!("quasideterminant ({i},{j}): {e}")),
    }
}

fn ring_correctness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for order in 0..=3 {
        let ring = SRing::new(order);
        let one = SElem::one(order);
        for trial in 0..1000 {
            let [x, y, z] = [(); 3].map(|_| random_selem(&mut rng, order));
            let ctx = || format!("order {order}, trial {trial}: x={x}, y={y}, z={z}");
            ensure!(&(&x * &y) * &z == &x * &(&y * &z), "associativity fails, {}", ctx());
            ensure!(&x * &(&y + &z) == &(&x * &y) + &(&x * &z), "left distributivity fails, {}", ctx());
            ensure!(&(&x + &y) * &z == &(&x * &z) + &(&y * &z), "right distributivity fails, {}", ctx());
            ensure!(&one * &x == x && &x * &one == x, "unit law fails, {}", ctx());
            let xy = &x * &y;
            ensure!(
                ring.mul_by_rewriting(&x, &y).map_err(|e| e.to_string())? == xy,
                "closed form and rewriting disagree, {}",
                ctx()
            );
            if let (Some(vx), Some(vy)) = (x.valuation(), y.valuation()) {
                ensure!(
                    xy.valuation().map_or(true, |v| v >= vx + vy),
                    "valuation not superadditive, {}",
                    ctx()
                );
            }
            for m in 0..=order {
                let p = |e: &SElem| e.project(m).unwrap();
                ensure!(p(&xy) == &p(&x) * &p(&y), "projection not multiplicative, {}", ctx());
                ensure!(p(&(&x + &y)) == &p(&x) + &p(&y), "projection not additive, {}", ctx());
                let p0 = |e: &SElem| e.project(0).unwrap();
                ensure!(p0(&p(&x)) == p0(&x), "projections do not compose, {}", ctx());
            }
        }
    }
    // For n = 0 the element t is already 0 in S_0, so the witness starts at n = 1.
    for n in 1..=4usize {
        let t = SElem::t(n);
        let tn = t.pow(n as u32);
        ensure!((&t * &tn).is_zero(), "t * t^{n} is not 0 in S_{n}");
        let (t1, tn1) = (t.embed(n + 1).unwrap(), tn.embed(n + 1).unwrap());
        let big = &t1 * &tn1;
        ensure!(
            big == SElem::monomial(0, n + 1, n + 1).unwrap(),
            "t * t^{n} in S_{} is {big}, expected t^{}",
            n + 1,
            n + 1
        );
    }
    Ok(Outcome::Pass("4 x 1000 triples; t*t^n witness for n = 1..4".into()))
}

fn unit_theory() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut units = 0;
    for order in 0..=3 {
        let one = SElem::one(order);
        for i in 0..500 {
            // Half the samples get a unit constant term so both branches are exercised.
            let x = if i % 2 == 0 { random_unit(&mut rng, order) } else { random_selem(&mut rng, order) };
            match x.inverse() {
                Ok(y) => {
                    ensure!(x.is_unit(), "inverse found for non-unit {x}");
                    ensure!(&x * &y == one && &y * &x == one, "bad inverse {y} of {x}");
                    units += 1;
                }
                Err(_) => ensure!(!x.is_unit(), "no inverse for unit {x}"),
            }
        }
        let t = SElem::t(order);
        let geometric = |sign: i64| {
            (0..=order).fold(SElem::zero(order), |acc, i| {
                let c = if i % 2 == 1 { sign } else { 1 };
                &acc + &SElem::term(LaurentPoly::constant(c), i, order).unwrap()
            })
        };
        let a = (&one - &t).inverse().map_err(|e| e.to_string())?;
        ensure!(a == geometric(1), "(1-t)^-1 = {a} at order {order}");
        let b = (&one + &t).inverse().map_err(|e| e.to_string())?;
        ensure!(b == geometric(-1), "(1+t)^-1 = {b} at order {order}");
    }
    Ok(Outcome::Pass(format!("4 x 500 elements, {units} units inverted two-sided")))
}

fn semiquandle_axioms() -> Check {
    for order in 0..=3 {
        let report = check_axioms(&SnSemiquandle::new(order), 1000, 3 + order as u64);
        ensure!(report.passed(), "order {order}: {report}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for order in 1..=3 {
        for _ in 0..200 {
            let x = random_selem(&mut rng, order);
            let y = random_selem(&mut rng, order);
            for m in 0..order {
                let p = |e: &SElem| e.project(m).unwrap();
                for (name, op) in [("o", op_o as fn(&SElem, &SElem) -> _), ("u", op_u)] {
                    let lhs = p(&op(&x, &y).unwrap());
                    let rhs = op(&p(&x), &p(&y)).unwrap();
                    ensure!(lhs == rhs, "projection to S_{m} does not commute with op_{name} on {x}, {y}");
                }
            }
        }
    }
    Ok(Outcome::Pass("axioms (0)-(3), 1000 trials at n = 0..3; projections compatible".into()))
}

fn quasideterminant_lemmas() -> Check {
    let order = 2;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let relabel = |x: usize, k: usize| if x == k { k + 1 } else if x == k + 1 { k } else { x };
    let mut summary = Vec::new();
    for m in [3usize, 4] {
        let (mut accepted, mut rejected, mut comparisons) = (0, 0, 0);
        while accepted < 200 {
            let a = random_matrix(&mut rng, m, order);
            let mut q = vec![vec![None; m]; m];
            for (i, row) in q.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = quasi(&a, i, j)?;
                }
            }
            if q.iter().flatten().all(Option::is_none) {
                rejected += 1;
                continue;
            }
            accepted += 1;

            // Adding a left multiple of row l to row k leaves rows other than l alone.
            let k = rng.gen_range(0..m);
            let l = (k + rng.gen_range(1..m)) % m;
            let b = a.row_add_left(k, l, &random_selem(&mut rng, order)).map_err(|e| e.to_string())?;
            // Left-scaling row k by a unit scales its quasideterminants.
            let u = random_unit(&mut rng, order);
            let c = a.row_scale_left(k, &u).map_err(|e| e.to_string())?;
            // Adjacent swaps relabel.
            let p = rng.gen_range(0..m - 1);
            let rows = a.swap_rows(p, p + 1).map_err(|e| e.to_string())?;
            let cols = a.swap_cols(p, p + 1).map_err(|e| e.to_string())?;

            for i in 0..m {
                for j in 0..m {
                    let Some(qa) = &q[i][j] else { continue };
                    comparisons += 1;
                    if i != l {
                        ensure!(quasi(&b, i, j)?.as_ref() == Some(qa), "row addition changed |A|_({i},{j})\n{a}");
                    }
                    let scaled = if i == k { &u * qa } else { qa.clone() };
                    ensure!(quasi(&c, i, j)? == Some(scaled), "unit scaling broke |A|_({i},{j})\n{a}");
                    ensure!(quasi(&rows, relabel(i, p), j)?.as_ref() == Some(qa), "row swap broke |A|_({i},{j})\n{a}");
                    ensure!(quasi(&cols, i, relabel(j, p))?.as_ref() == Some(qa), "column swap broke |A|_({i},{j})\n{a}");
                }
            }
        }
        summary.push(format!("{m}x{m}: 200 matrices, {rejected} rejected, {comparisons} positions"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut agreed = 0;
    for _ in 0..100 {
        let d = random_diagram_with(rng.gen_range(1..=5), &mut rng);
        let sys = build_matrix(&d, order, rng.gen_range(0..d.len()));
        let k = sys.size();
        let by_elimination = quasidet_kk(&sys).map_err(|e| format!("{d}: {e}"))?;
        match quasi(sys.matrix(), k - 1, k - 1)? {
            Some(q) => ensure!(q == by_elimination, "elimination disagrees with definition on {d}"),
            None => return Err(format!("minor of coloring matrix for {d} is not invertible")),
        }
        agreed += 1;
    }
    summary.push(format!("quasidet_kk agrees on {agreed}/100 coloring matrices"));
    Ok(Outcome::Pass(summary.join("; ")))
}

// The printed example matrix and closed form, written out term by term.
struct Kit {
    order: usize,
}

impl Kit {
    fn one(&self) -> SElem {
        SElem::one(self.order)
    }
    fn zero(&self) -> SElem {
        SElem::zero(self.order)
    }
    fn s(&self, k: i64) -> SElem {
        s_pow(k, self.order)
    }
    fn t(&self) -> SElem {
        SElem::t(self.order)
    }
    fn inv(&self, x: &SElem) -> SElem {
        x.inverse().unwrap()
    }
    fn prod(&self, xs: &[&SElem]) -> SElem {
        xs.iter().fold(self.one(), |acc, x| &acc * *x)
    }
    fn one_minus_t2(&self) -> SElem {
        &self.one() - &(&self.t() * &self.t())
    }
    // (1 - s^2 t)^-1
    fn q(&self) -> SElem {
        self.inv(&(&self.one() - &(&self.s(2) * &self.t())))
    }

    fn matrix(&self) -> NcMatrix {
        let (z, one, t, s) = (self.zero(), self.one(), self.t(), self.s(1));
        let a = self.prod(&[&self.s(-1), &t, &s]);
        let b = -&self.prod(&[&self.s(-1), &self.one_minus_t2()]);
        let rows = vec![
            vec![one.clone(), z.clone(), -&t, z.clone(), z.clone(), -&s],
            vec![-&s, one.clone(), z.clone(), z.clone(), -&t, z.clone()],
            vec![z.clone(), -&s, one.clone(), -&t, z.clone(), z.clone()],
            vec![z.clone(), z.clone(), b.clone(), one.clone(), z.clone(), a.clone()],
            vec![z.clone(), a.clone(), z.clone(), b.clone(), one.clone(), z.clone()],
            vec![a, z.clone(), z.clone(), z, b, one],
        ];
        NcMatrix::from_rows(rows, self.order).unwrap()
    }

    fn closed_form(&self) -> SElem {
        let (one, t, si, omt, q) = (self.one(), self.t(), self.s(-1), self.one_minus_t2(), self.q());
        let s = |e| self.s(e);
        let a = &one - &self.prod(&[&si, &omt, &q, &t]);
        let b = -&self.prod(&[&si, &omt, &q, &s(1), &t]);
        let c = self.prod(&[&si, &(&t - &self.prod(&[&omt, &q, &s(2)])), &s(1)]);
        let d = self.prod(&[&si, &(&self.prod(&[&t, &s(2), &t, &q, &t]) - &omt)]);
        let inner = &one + &self.prod(&[&s(2), &t, &q]);
        let e = &one + &self.prod(&[&si, &t, &inner, &s(1), &t]);
        let f = self.prod(&[&si, &t, &inner, &s(3)]);
        let g = self.prod(&[&si, &t, &s(1), &t, &q, &t]);
        let h = self.prod(&[&si, &(&self.prod(&[&t, &s(1), &t, &q, &s(1), &t]) - &omt)]);
        let i = &one + &self.prod(&[&si, &t, &s(1), &(&one + &self.prod(&[&t, &q, &s(2)])), &s(1)]);

        let ai = self.inv(&a);
        let left = &h - &self.prod(&[&g, &ai, &b]);
        let mid = self.inv(&(&e - &self.prod(&[&d, &ai, &b])));
        let right = &f - &self.prod(&[&d, &ai, &c]);
        &(&i - &self.prod(&[&g, &ai, &c])) - &self.prod(&[&left, &mid, &right])
    }
}

fn example_fixture() -> Check {
    let d = gd(TREFOIL_LIKE);
    for order in 0..=3 {
        let sys = build_matrix(&d, order, 0);
        let want = Kit { order }.matrix();
        ensure!(sys.matrix() == &want, "matrix at order {order}:\n{}\nexpected\n{want}", sys.matrix());
    }
    for order in 1..=3 {
        let got = quasidet_kk(&build_matrix(&d, order, 0)).map_err(|e| e.to_string())?;
        let want = Kit { order }.closed_form();
        ensure!(got == want, "order {order}: F = {got}, closed form gives {want}");
    }
    Ok(Outcome::Pass("6x6 matrix at n = 0..3; closed form at n = 1..3".into()))
}

fn f1_identity() -> Check {
    let side = Side::default();
    ensure!(f1_equals_u_identity(&gd(TREFOIL_LIKE), side), "fails on {TREFOIL_LIKE}");
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..200 {
        let d = random_diagram_with(rng.gen_range(0..=6), &mut rng);
        ensure!(f1_equals_u_identity(&d, side), "fails on {d}");
    }
    Ok(Outcome::Pass(format!("3.1 and 200 random diagrams, side {side:?}")))
}

fn independence() -> Check {
    let cfg = ConsistencyConfig { order: 2, seed: 7, ..ConsistencyConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut arrows = 0;
    for i in 0..50 {
        let d = random_diagram_with(rng.gen_range(0..=5), &mut rng);
        arrows += d.arrow_count();
        let report = check_consistency(&d, &ConsistencyConfig { seed: cfg.seed + i, ..cfg });
        ensure!(report.passed(), "{d}: {:#?}", report.mismatches);
    }
    Ok(Outcome::Pass(format!(
        "50 diagrams ({arrows} arrows total), {} fake placements and {} move sequences each",
        cfg.fake_trials, cfg.move_sequences
    )))
}

fn vanishing() -> Check {
    for code in ["", "-1 1", "1 -1", "1 -2 -1 2", "1 2 -2 -1", "1 2 -1 -2 3 4 -3 -4"] {
        let d = gd(code);
        for order in 1..=3 {
            let r = invariant(&d, order);
            ensure!(r.representative.is_zero(), "'{code}' at n = {order}: F = {}", r.representative);
        }
    }
    Ok(Outcome::Pass("empty, kinks, FR2 pairs, composite at n = 1..3".into()))
}

fn separation() -> Check {
    let catalog = Catalog::load().map_err(|e| e.to_string())?;
    let entry = catalog.lookup("4.11").map_err(|e| e.to_string())?;
    let Some(d) = &entry.code else {
        return Ok(Outcome::Skip(format!(
            "no Gauss code for 4.11; supply one via {}",
            flatcolor::catalog::EXTERNAL_ENV
        )));
    };
    let r = invariant(d, 2);
    let want = [lp("0"), lp("s^2 - 2s - 1 + 2s^-1 - s^-2")];
    ensure!(r.defined_polys == want, "4.11 ({d}): got {:?}", r.defined_polys);
    ensure!(defined_polys(&r.representative) == want, "inconsistent result for {d}");
    match entry.check(2) {
        EntryCheck::Pass => Ok(Outcome::Pass(format!("4.11 = {d}: f1 = 0, f2 = {}", want[1]))),
        other => Err(format!("catalog check: {other}")),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("ring correctness", ring_correctness),
        ("unit theory", unit_theory),
        ("semiquandle axioms", semiquandle_axioms),
        ("quasideterminant lemmas", quasideterminant_lemmas),
        ("example 3.1 fixture", example_fixture),
        ("f1 = u(s) - u(1/s)", f1_identity),
        ("independence of choices", independence),
        ("vanishing results", vanishing),
        ("separation by f2 (4.11)", separation),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
        let secs = started.elapsed().as_secs_f64();
        match result {
            Ok(Outcome::Pass(detail)) => println!("PASS criterion {}: {name} ({detail}) [{secs:.2}s]", n + 1),
            Ok(Outcome::Skip(why)) => println!("SKIP criterion {}: {name} ({why})", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why} [{secs:.2}s]", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! The measured checks come from the library's verification families at
//! default settings; each criterion adds frozen reference values computed
//! independently at 30 significant digits.

#![allow(clippy::excessive_precision)]

use std::process::ExitCode;
use std::time::{Duration, Instant};

use metamono::basis::{BasisFunction, BasisIndex, DiskPoint, FieldFunction};
use metamono::bessel::{bessel_j, bessel_zero};
use metamono::config::RunConfig;
use metamono::diskquad::{inner_product_h, norm2, QuadratureRule};
use metamono::evolution::{evolve_eval, WaveState};
use metamono::quatnum::Quaternion;
use metamono::verify::{run_verify, Family};

struct Outcome {
    passed: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            passed: true,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, note: String) {
        if !ok {
            self.passed = false;
            self.notes.push(note);
        }
    }

    fn family(&mut self, cfg: &RunConfig, families: &[Family]) {
        let rep = run_verify(cfg, families);
        for c in &rep.checks {
            let shown = c.measured.map_or_else(
                || c.error.clone().unwrap_or_default(),
                |m| format!("{m:.3e}"),
            );
            self.check(
                c.passed,
                format!("{} = {shown} (threshold {:e})", c.name, c.threshold),
            );
        }
        if rep.checks.is_empty() {
            self.check(false, "no checks ran".into());
        }
    }

    fn close(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        self.check(
            (got - want).abs() <= tol,
            format!("{what}: {got:.17e} vs reference {want:.17e}"),
        );
    }
}

fn oracle_zeros(o: &mut Outcome) {
    let zeros = [
        (0, 1, 2.40482555769577276862),
        (1, 1, 3.83170597020751231561),
        (2, 1, 5.13562230184068255630),
        (3, 2, 9.76102312998166967854),
        (10, 10, 45.2315741035350448535727604794),
        (30, 1, 36.0983369567477247999268147978),
        (32, 64, 248.479138369377969497649098002),
    ];
    for (n, m, want) in zeros {
        let got = bessel_zero(n, m).unwrap_or(f64::NAN);
        o.close(&format!("j({n},{m})"), got, want, 1e-12 * want);
    }
    o.close(
        "J0(1)",
        bessel_j(0, 1.0).unwrap_or(f64::NAN),
        0.765197686557966551449717526103,
        1e-15,
    );
    o.close(
        "J1(1)",
        bessel_j(1, 1.0).unwrap_or(f64::NAN),
        0.440050585744933515959682203719,
        1e-15,
    );
}

fn oracle_norms(o: &mut Outcome, rule: &QuadratureRule) {
    for (idx, want) in [
        (BasisIndex::new(0, 1), 1.69340718362923044373164116694),
        (BasisIndex::new(2, 1), 0.724921592607218449340474906181),
        (BasisIndex::new(3, 2), 0.390869027880038767645650317619),
    ] {
        let got = BasisFunction::new(idx)
            .and_then(|f| norm2(&f, rule))
            .unwrap_or(f64::NAN);
        o.close(&format!("|F{idx}|^2"), got, want, 1e-8 * want);
    }
}

fn oracle_cross(o: &mut Outcome, rule: &QuadratureRule) {
    let got = (|| {
        let a = BasisFunction::new(BasisIndex::new(0, 1))?;
        let b = BasisFunction::new(BasisIndex::new(1, 1))?;
        inner_product_h(&a, &b, rule)
    })()
    .unwrap_or(Quaternion::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN));
    o.close(
        "<F(0,1), F(1,1)> i-part",
        got.i,
        -0.920722459999313599550794313458,
        1e-8,
    );
    let rest = got.s.abs().max(got.j.abs()).max(got.k.abs());
    o.check(
        rest < 1e-8,
        format!("<F(0,1), F(1,1)> non-i parts {rest:e}"),
    );
}

fn oracle_evolution(o: &mut Outcome) {
    let state = WaveState::new(
        &[(BasisIndex::new(0, 1), Quaternion::ONE)]
            .into_iter()
            .collect(),
        1.0,
    )
    .map(|s| s.with_time(0.1));
    let got = state
        .and_then(|s| evolve_eval(&s, &DiskPoint::ORIGIN))
        .unwrap_or(Quaternion::ONE);
    o.close(
        "v at origin, mode (0,1), t = 0.1, i-part",
        got.i,
        1.27186274696885686051590836201,
        1e-13,
    );
    o.check(
        got.s == 0.0 && got.j == 0.0 && got.k == 0.0,
        format!("v at origin not pure i: {got}"),
    );
}

fn oracle_origin_values(o: &mut Outcome) {
    let f01 = BasisFunction::new(BasisIndex::new(0, 1)).map(|f| f.eval(&DiskPoint::ORIGIN));
    let f11 = BasisFunction::new(BasisIndex::new(1, 1)).map(|f| f.eval(&DiskPoint::ORIGIN));
    let f21 = BasisFunction::new(BasisIndex::new(2, 1)).map(|f| f.eval(&DiskPoint::ORIGIN));
    o.check(f01.ok() == Some(Quaternion::I), "F(0,1)(0) != i".into());
    o.check(f11.ok() == Some(Quaternion::ONE), "F(1,1)(0) != 1".into());
    o.check(f21.ok() == Some(Quaternion::ZERO), "F(2,1)(0) != 0".into());
}

fn main() -> ExitCode {
    let cfg = RunConfig::default();
    let rule = QuadratureRule::default();
    type Body<'a> = Box<dyn Fn(&mut Outcome) + 'a>;
    let criteria: Vec<(u32, &str, Duration, Body)> = vec![
        (
            1,
            "Bessel recurrences and zeros",
            Duration::from_secs(5),
            Box::new(|o| {
                o.family(&cfg, &[Family::Bessel]);
                oracle_zeros(o);
            }),
        ),
        (
            2,
            "kernel property (D + j)F = 0",
            Duration::from_secs(10),
            Box::new(|o| o.family(&cfg, &[Family::Kernel])),
        ),
        (
            3,
            "orthogonality",
            Duration::from_secs(60),
            Box::new(|o| o.family(&cfg, &[Family::Orthogonality])),
        ),
        (
            4,
            "norms",
            Duration::from_secs(60),
            Box::new(|o| {
                o.family(&cfg, &[Family::Norms]);
                oracle_norms(o, &rule);
            }),
        ),
        (
            5,
            "{0,1} cross products",
            Duration::from_secs(60),
            Box::new(|o| {
                o.family(&cfg, &[Family::Cross]);
                oracle_cross(o, &rule);
            }),
        ),
        (
            6,
            "completeness",
            Duration::from_secs(120),
            Box::new(|o| o.family(&cfg, &[Family::Completeness])),
        ),
        (
            7,
            "Gram-Schmidt block",
            Duration::from_secs(60),
            Box::new(|o| o.family(&cfg, &[Family::GramSchmidt])),
        ),
        (
            8,
            "evolution",
            Duration::from_secs(60),
            Box::new(|o| {
                o.family(&cfg, &[Family::Evolution]);
                oracle_evolution(o);
            }),
        ),
        (
            9,
            "parity and high-mode emergence",
            Duration::from_secs(60),
            Box::new(|o| {
                o.family(&cfg, &[Family::Symmetry]);
                oracle_origin_values(o);
            }),
        ),
    ];

    let mut failed = 0;
    for (k, title, limit, body) in &criteria {
        let start = Instant::now();
        let mut o = Outcome::new();
        body(&mut o);
        let took = start.elapsed();
        o.check(
            took <= *limit,
            format!(
                "runtime {:.2} s exceeds {} s",
                took.as_secs_f64(),
                limit.as_secs()
            ),
        );
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {k} [{tag}] {title} ({:.2} s)",
            took.as_secs_f64()
        );
        for n in &o.notes {
            println!("    {n}");
        }
        if !o.passed {
            failed += 1;
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

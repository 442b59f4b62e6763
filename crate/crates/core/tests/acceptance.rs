//! Acceptance suite. Prints one PASS/FAIL line per check and fails if any
//! check disagrees with its expected outcome.

use std::process::Command;
use std::time::Instant;

use fracdarboux::classifier::{equivalent_beta0, equivalent_beta1, invariant_beta1, regenerate_table2, Table2Verdict};
use fracdarboux::cole_hopf::{
    burgers_residual, classic_cole_hopf, constant_map_reduction, generalized_burgers_residual, generalized_map,
    manufactured_heat_levels, nonlinear_ode_form, variable_coeff_residual, ColeHopfMap, Convention, VariableForm,
};
use fracdarboux::errata::{errata_report, TOPIC_INVERSION_TABLE, TOPIC_NONLINEAR};
use fracdarboux::expr::{q, Polynomial, RationalExpr, Q};
use fracdarboux::numeric::{
    heat_crank_nicolson, observed_order, ode_residual, pde_residual_study, rk4_ivp, Grid, GridField, GridFn, PdePoint,
};
use fracdarboux::riccati::{
    conformal_transform, inversion_invariance_check, mobius_apply, ode_to_riccati, reproduce_table1,
    transport_solution, LinearODE2, MobiusMap, Table1Verdict,
};
use fracdarboux::schrodinger::{fractional_darboux, schrodinger_qr_exact, Potential, SchrodingerProblem};
use fracdarboux::Result;
use rand::{Rng, SeedableRng};

const ANALYTIC: f64 = 1e-8;
const TRANSPORT: f64 = 1e-6;
const ORDER_2: (f64, f64) = (1.8, 2.2);
const ORDER_4: (f64, f64) = (3.8, 4.2);
const MIN_TRANSPORT_ORDER: f64 = 1.9;
const NEGATIVE_CONTROL: f64 = 1e-2;

/// Checks that cannot pass as printed; see the errata report.
const KNOWN_FAILURES: &[&str] = &["6.4"];

struct Check {
    id: &'static str,
    what: &'static str,
    pass: bool,
    detail: String,
}

struct Suite(Vec<Check>);

impl Suite {
    fn run(&mut self, id: &'static str, what: &'static str, f: impl FnOnce() -> Result<(bool, String)>) {
        let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        let mark = match (pass, KNOWN_FAILURES.contains(&id)) {
            (true, _) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FAIL (known)",
        };
        println!("{mark:<12} [{id}] {what}: {detail}");
        self.0.push(Check { id, what, pass, detail });
    }
}

fn poly(cs: &[i64]) -> RationalExpr {
    RationalExpr::from_poly(Polynomial::from_i64s(cs))
}

fn ode(p: RationalExpr, qq: RationalExpr, r: RationalExpr) -> LinearODE2 {
    LinearODE2::new(p, qq, r).unwrap()
}

fn bessel(n: Q) -> LinearODE2 {
    let n2 = &n * &n;
    ode(poly(&[0, 0, 1]), RationalExpr::x(), &poly(&[0, 0, 1]) - &RationalExpr::constant(n2))
}

fn within(v: Option<f64>, (lo, hi): (f64, f64)) -> bool {
    v.is_some_and(|o| (lo..=hi).contains(&o))
}

fn fmt_order(v: Option<f64>) -> String {
    v.map_or("n/a".into(), |o| format!("{o:.3}"))
}

fn criterion_1(s: &mut Suite) {
    s.run("1.1", "inversion images of the classical rows", || {
        let rows = reproduce_table1()?;
        let classes = ["Legendre", "Hermite", "Bessel", "Laguerre", "Chebyshev", "hypergeometric"];
        let mut seen = 0;
        for r in rows.iter().filter(|r| classes.contains(&r.class)) {
            seen += 1;
            if r.verdict != Table1Verdict::Exact {
                return Ok((false, format!("{} {}: {:?}", r.class, r.params, r.verdict)));
            }
        }
        let all_classes = classes.iter().all(|c| rows.iter().any(|r| r.class == *c));
        Ok((all_classes, format!("{seen} instances exact")))
    });
    s.run("1.2", "constant-coefficient row equals the source with b -> -b", || {
        let rows = reproduce_table1()?;
        let consts: Vec<_> = rows.iter().filter(|r| r.class == "constant coefficient").collect();
        let ok = !consts.is_empty()
            && consts.iter().all(|r| match r.verdict {
                Table1Verdict::SameUpToDampingSign => true,
                Table1Verdict::Exact => r.params.contains("b = 0,"),
                Table1Verdict::Mismatch => false,
            });
        Ok((ok, format!("{} instances", consts.len())))
    });
    s.run("1.3", "errata report lists the constant-coefficient row", || {
        let rep = errata_report()?;
        let n = rep.find(TOPIC_INVERSION_TABLE).filter(|e| e.topic.contains("constant coefficient")).count();
        Ok((n > 0, format!("{n} entries")))
    });
}

fn criterion_2(s: &mut Suite) {
    s.run("2.1", "w'' - n^2 w = 0 is inversion invariant, n = 1, 2", || {
        let mut ok = true;
        for n in 1..=2 {
            ok &=
                inversion_invariance_check(&ode(RationalExpr::one(), RationalExpr::zero(), RationalExpr::int(-n * n)))?;
        }
        Ok((ok, String::new()))
    });
    s.run("2.2", "(1 - x^2) w'' - x w' + h0 w = 0 is inversion invariant, h0 = 1, 2", || {
        let mut ok = true;
        for h in 1..=2 {
            ok &= inversion_invariance_check(&ode(poly(&[1, 0, -1]), poly(&[0, -1]), RationalExpr::int(h)))?;
        }
        Ok((ok, String::new()))
    });
    s.run("2.3", "x(x - 1) w'' + w'/2 + h0 x^2 w = 0 is inversion invariant, h0 = 1, 2", || {
        let mut ok = true;
        for h in 1..=2 {
            ok &= inversion_invariance_check(&ode(poly(&[0, -1, 1]), RationalExpr::frac(1, 2), poly(&[0, 0, h])))?;
        }
        Ok((ok, String::new()))
    });
    s.run("2.4", "negative control: Legendre is not inversion invariant", || {
        let legendre = ode(poly(&[1, 0, -1]), poly(&[0, -2]), RationalExpr::int(6));
        Ok((!inversion_invariance_check(&legendre)?, String::new()))
    });
}

fn transported(src: &LinearODE2, w: &GridFn) -> Result<(GridFn, LinearODE2)> {
    let m = MobiusMap::inversion();
    let f = mobius_apply(&ode_to_riccati(src)?, &m)?.f;
    let t = transport_solution(src, &m, w, &f)?;
    Ok((t.u, conformal_transform(src, &m)?))
}

/// Largest deviation of `u / u(x0)` from `g / g(x0)`.
fn proportional_gap(u: &GridFn, g: impl Fn(f64) -> f64) -> f64 {
    let x0 = u.grid.x(0);
    (0..u.len()).map(|i| (u.values[i] / u.values[0] - g(u.grid.x(i)) / g(x0)).abs()).fold(0.0, f64::max)
}

fn numeric_transport_order(src: &LinearODE2, a: f64, b: f64, w: fn(f64) -> f64) -> Result<(Option<f64>, Vec<f64>)> {
    let mut hs = Vec::new();
    let mut es = Vec::new();
    for n in [21, 41, 81] {
        let g = Grid::new(a, b, n)?;
        let (u, target) = transported(src, &GridFn::sample(g, w))?;
        let bare = GridFn::new(g, u.values)?;
        hs.push(g.h());
        es.push(ode_residual(&target.q, &target.r, &bare)?.linf);
    }
    Ok((observed_order(&hs, &es), es))
}

fn criterion_3(s: &mut Suite) {
    let harmonic = ode(RationalExpr::one(), RationalExpr::zero(), RationalExpr::one());
    let hermite1 = ode(RationalExpr::one(), poly(&[0, -2]), RationalExpr::int(2));
    s.run("3.1", "w = sin x under inversion gives u proportional to cos x", || {
        let g = Grid::new(0.2, 1.2, 201)?;
        let w = GridFn::sample_analytic(g, f64::sin, f64::cos, |x| -x.sin());
        let (u, target) = transported(&harmonic, &w)?;
        let res = ode_residual(&target.q, &target.r, &u)?.linf;
        let gap = proportional_gap(&u, f64::cos);
        Ok((res <= TRANSPORT && gap <= TRANSPORT, format!("residual {res:.2e}, shape gap {gap:.2e}")))
    });
    s.run("3.2", "Hermite n = 1 under inversion gives u proportional to exp(-x^2)", || {
        let g = Grid::new(0.5, 2.0, 201)?;
        let w = GridFn::sample_analytic(g, |x| x, |_| 1.0, |_| 0.0);
        let (u, target) = transported(&hermite1, &w)?;
        let res = ode_residual(&target.q, &target.r, &u)?.linf;
        let gap = proportional_gap(&u, |x| (-x * x).exp());
        Ok((res <= TRANSPORT && gap <= TRANSPORT, format!("residual {res:.2e}, shape gap {gap:.2e}")))
    });
    s.run("3.3", "numeric-derivative transport of sin x converges at order >= 1.9", || {
        let (o, es) = numeric_transport_order(&harmonic, 0.2, 1.2, f64::sin)?;
        Ok((
            o.is_some_and(|v| v >= MIN_TRANSPORT_ORDER),
            format!("order {}, finest residual {:.2e}", fmt_order(o), es.last().copied().unwrap_or(f64::NAN)),
        ))
    });
    s.run("3.4", "numeric-derivative transport of Hermite n = 1 converges at order >= 1.9", || {
        let (o, es) = numeric_transport_order(&hermite1, 0.5, 2.0, |x| x)?;
        Ok((
            o.is_some_and(|v| v >= MIN_TRANSPORT_ORDER),
            format!("order {}, finest residual {:.2e}", fmt_order(o), es.last().copied().unwrap_or(f64::NAN)),
        ))
    });
}

fn criterion_4(s: &mut Suite) {
    let oscillator = ode(RationalExpr::one(), RationalExpr::zero(), RationalExpr::one());
    s.run("4.1", "w'' + w = 0 is equivalent to Bessel 1/2 (beta = 0)", || {
        let v = equivalent_beta0(&oscillator, &bessel(q(1, 2)))?;
        Ok((v.equivalent, format!("invariants {} and {}", v.witness.0, v.witness.1)))
    });
    s.run("4.2", "Bessel 0 is equivalent to Bessel 1 (beta = 1, alpha = 0)", || {
        let v = equivalent_beta1(&bessel(q(0, 1)), &bessel(q(1, 1)), &RationalExpr::zero())?;
        Ok((v.equivalent, format!("invariants {} and {}", v.witness.0, v.witness.1)))
    });
    s.run("4.3", "alpha = 0 collapse of the beta = 1 invariant, three families", || {
        let k = RationalExpr::int;
        let families = [
            oscillator.clone(),
            bessel(q(0, 1)),
            ode(RationalExpr::one(), poly(&[0, -2]), RationalExpr::int(4)),
            ode(poly(&[1, 0, -1]), poly(&[0, -2]), RationalExpr::int(6)),
        ];
        for f in &families {
            let m = f.monic();
            let (qq, r) = (&m.q, &m.r);
            let (q1, r1, r2) = (qq.derivative(), r.derivative(), r.nth_derivative(2));
            let n = &(&(&(&k(4) * &(r * &(r * r))) + &(&(&(&k(2) * &q1) - &(qq * qq)) * &(r * r)))
                + &(&(&(&k(2) * &r2) - &(&k(2) * &(qq * &r1))) * r))
                - &(&k(3) * &(&r1 * &r1));
            let d = &k(4) * r;
            let rep = invariant_beta1(f, &RationalExpr::zero())?;
            if rep.n1.as_ref() != Some(&n) || rep.d1.as_ref() != Some(&d) {
                return Ok((false, format!("mismatch on p = {}, q = {}, r = {}", f.p, f.q, f.r)));
            }
        }
        Ok((true, format!("{} families", families.len())))
    });
    s.run("4.4", "invariant table: Constant and Bessel n = 0 concordant, Hermite discrepant", || {
        let rep = regenerate_table2()?;
        let constant = rep.row("Constant").map(|r| r.verdict);
        let bessel0 = rep.entry("Bessel", "n=0").map(|e| e.verdict);
        let hermite = rep.row("Hermite");
        let ok = constant == Some(Table2Verdict::Concordant)
            && bessel0 == Some(Table2Verdict::Concordant)
            && hermite.is_some_and(|h| h.verdict == Table2Verdict::Discrepant && h.derived_beta0 == "-x^2 + 2n + 1")
            && rep.text().contains("Hermite          DISCREPANT");
        Ok((ok, format!("Hermite computed {}", hermite.map_or("?", |h| h.derived_beta0))))
    });
}

fn exp_fn(g: Grid, k: f64) -> GridFn {
    GridFn::sample_analytic(g, move |x| (k * x).exp(), move |x| k * (k * x).exp(), move |x| k * k * (k * x).exp())
}

fn criterion_5(s: &mut Suite) {
    let g = Grid::new(-1.0, 1.0, 201).unwrap();
    let free = SchrodingerProblem::new(Potential::zero(), 1.0);
    s.run("5.1", "closed form: v = 3, delta u = 3, psi = -exp(2x), psi'' = (v + c) psi", || {
        let cosh = GridFn::sample_analytic(g, f64::cosh, f64::sinh, f64::cosh);
        let res = fractional_darboux(&free, 1.0, &exp_fn(g, -1.0), &exp_fn(g, 1.0))?.with_phi(&cosh)?;
        let psi = res.psi.as_ref().expect("phi supplied");
        let d2 = psi.second_derivative();
        let mut worst = [0.0f64; 4];
        for (i, d2i) in d2.iter().enumerate() {
            worst[0] = worst[0].max((res.v.values[i] - 3.0).abs());
            worst[1] = worst[1].max((res.delta_u.values[i] - 3.0).abs());
            worst[2] = worst[2].max((psi.values[i] + (2.0 * g.x(i)).exp()).abs());
            worst[3] = worst[3].max((d2i - (res.v.values[i] + 1.0) * psi.values[i]).abs());
        }
        let ok = worst.iter().all(|&w| w <= ANALYTIC);
        Ok((
            ok,
            format!(
                "errors v {:.1e}, delta u {:.1e}, psi {:.1e}, residual {:.1e}",
                worst[0], worst[1], worst[2], worst[3]
            ),
        ))
    });
    let pairs: [(&str, GridFn, GridFn); 3] = [
        ("exp(-x), exp(x)", exp_fn(g, -1.0), exp_fn(g, 1.0)),
        ("cosh x, exp(x)", GridFn::sample_analytic(g, f64::cosh, f64::sinh, f64::cosh), exp_fn(g, 1.0)),
        (
            "2 cosh x + sinh x, exp(-x)",
            GridFn::sample_analytic(
                g,
                |x| 2.0 * x.cosh() + x.sinh(),
                |x| 2.0 * x.sinh() + x.cosh(),
                |x| 2.0 * x.cosh() + x.sinh(),
            ),
            exp_fn(g, -1.0),
        ),
    ];
    s.run("5.2", "two delta-u forms agree on three seed pairs", || {
        let mut worst = 0.0f64;
        for (_, z1, z2) in &pairs {
            worst = worst.max(fractional_darboux(&free, 1.0, z1, z2)?.cross_check);
        }
        Ok((worst <= ANALYTIC, format!("max disagreement {worst:.1e}")))
    });
    s.run("5.3", "ansatz identity (B - A)' = B^2 - A^2 on three seed pairs", || {
        let mut worst = 0.0f64;
        for (_, z1, z2) in &pairs {
            worst = worst.max(fractional_darboux(&free, 1.0, z1, z2)?.seeds.ansatz_residual());
        }
        Ok((worst <= ANALYTIC, format!("max residual {worst:.1e}")))
    });
    s.run("5.4", "transformed Q, R equal the Riccati pipeline for five random maps with det 1", || {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20);
        let potentials = [
            poly(&[1, 0, 1]),
            poly(&[0, 2, 0, 1]),
            RationalExpr::one().try_div(&poly(&[1, 0, 1]))?,
            poly(&[-3, 1]),
            poly(&[0, 0, 0, 0, 1]),
        ];
        let mut done = Vec::new();
        while done.len() < 5 {
            let (a, b, c) = (rng.gen_range(-4i64..=4), rng.gen_range(-4i64..=4), rng.gen_range(-4i64..=4));
            if a == 0 {
                continue;
            }
            // alpha delta - beta gamma = 1
            let d = q(1 + b * c, a);
            let m = MobiusMap::constant(q(a, 1), q(b, 1), q(c, 1), d.clone())?;
            let u = &potentials[done.len()];
            let lambda = q(rng.gen_range(-5i64..=5), 2);
            let (qq, rr) = schrodinger_qr_exact(u, &lambda, &m)?;
            let source = ode(RationalExpr::one(), RationalExpr::zero(), -(u + &RationalExpr::constant(lambda)));
            if conformal_transform(&source, &m)?.normalized() != (qq, rr) {
                return Ok((false, format!("map ({a}, {b}, {c}, {d}) on u = {u}")));
            }
            done.push(format!("({a},{b},{c},{d})"));
        }
        Ok((true, format!("maps {}", done.join(" "))))
    });
}

fn criterion_6(s: &mut Suite) {
    let mapped = |m: &ColeHopfMap, x: (f64, f64)| -> Result<Vec<GridField>> {
        manufactured_heat_levels(x)?.iter().map(|phi| generalized_map(m, phi)).collect()
    };
    s.run("6.1", "classic traveling wave satisfies Burgers at order 2", || {
        let psis = manufactured_heat_levels((0.0, 1.0))?
            .iter()
            .map(|phi| classic_cole_hopf(phi, 1.0))
            .collect::<Result<Vec<_>>>()?;
        let rep = burgers_residual(&psis, 1.0)?;
        Ok((within(rep.order, ORDER_2), format!("order {}", fmt_order(rep.order))))
    });
    s.run("6.2", "constant map (0, 1, -2, 0) reduces to Burgers; (0, 1, 1, 0) residual at order 2", || {
        let classic = ColeHopfMap::constant(q(0, 1), q(1, 1), q(-2, 1), q(0, 1))?;
        let reduces = constant_map_reduction(&classic)?.is_some_and(|r| r.is_burgers);
        let m = ColeHopfMap::constant(q(0, 1), q(1, 1), q(1, 1), q(0, 1))?;
        let rep = generalized_burgers_residual(&m, &mapped(&m, (0.0, 1.0))?)?;
        Ok((reduces && within(rep.order, ORDER_2), format!("reduces {reduces}, order {}", fmt_order(rep.order))))
    });
    let variable = |a: RationalExpr, c: RationalExpr, x: (f64, f64), form: VariableForm| -> Result<(bool, String)> {
        let psis = mapped(&ColeHopfMap::variable(a.clone(), c.clone()), x)?;
        let rep = variable_coeff_residual(&a, &c, &psis, form)?;
        Ok((
            within(rep.order, ORDER_2),
            format!("finest linf {:.2e}, order {}", rep.finest().linf, fmt_order(rep.order)),
        ))
    };
    s.run("6.3", "variable-coefficient equation as printed, C = 1 with A = 0 and A = 1", || {
        let (ok0, d0) = variable(RationalExpr::zero(), RationalExpr::one(), (0.0, 1.0), VariableForm::Printed)?;
        let (ok1, d1) = variable(RationalExpr::one(), RationalExpr::one(), (0.0, 1.0), VariableForm::Printed)?;
        Ok((ok0 && ok1, format!("A = 0: {d0}; A = 1: {d1}")))
    });
    s.run("6.4", "variable-coefficient equation as printed, C = x, A = 0", || {
        variable(RationalExpr::zero(), RationalExpr::x(), (1.0, 2.0), VariableForm::Printed)
    });
    s.run("6.5", "variable-coefficient equation as derived, C = x, A = 0", || {
        variable(RationalExpr::zero(), RationalExpr::x(), (1.0, 2.0), VariableForm::Derived)
    });
    s.run("6.6", "sign oracle on q = 0, r = -1, A = 0, C = 1 selects the derived form", || {
        let form = nonlinear_ode_form(
            &RationalExpr::zero(),
            &RationalExpr::int(-1),
            &RationalExpr::zero(),
            &RationalExpr::one(),
            (-1.0, 1.0),
        )?;
        let o = &form.oracle;
        let ok = form.sign_convention == Convention::Derived
            && o.derived_residual <= ANALYTIC
            && o.fit.residual <= ANALYTIC
            && o.printed_residual > o.tolerance;
        Ok((
            ok,
            format!(
                "derived residual {:.1e}, fit residual {:.1e}, printed residual {:.1e}",
                o.derived_residual, o.fit.residual, o.printed_residual
            ),
        ))
    });
    s.run("6.7", "errata report records the printed nonlinear form failure", || {
        let rep = errata_report()?;
        let e = rep.find(TOPIC_NONLINEAR).next();
        Ok((e.is_some_and(|e| e.evidence.contains("selected Derived")), e.map_or(String::new(), |e| e.printed.clone())))
    });
}

fn criterion_7(s: &mut Suite) {
    let zero = |_: f64| 0.0;
    let one = |_: f64| 1.0;
    s.run("7.1", "RK4 observed order on w'' + w = 0", || {
        let mut hs = Vec::new();
        let mut es = Vec::new();
        for n in [11usize, 21, 41, 81] {
            let g = Grid::new(0.0, 2.0, n)?;
            let w = rk4_ivp(&zero, &one, 0.0, 0.0, 1.0, &g)?;
            hs.push(g.h());
            es.push((0..n).map(|i| (w.values[i] - g.x(i).sin()).abs()).fold(0.0, f64::max));
        }
        let o = observed_order(&hs, &es);
        Ok((within(o, ORDER_4), format!("order {}", fmt_order(o))))
    });
    s.run("7.2", "Crank-Nicolson observed order on exp(-t) sin x", || {
        let mut hs = Vec::new();
        let mut es = Vec::new();
        for n in [11usize, 21, 41] {
            let x = Grid::new(0.0, std::f64::consts::PI, n)?;
            let t = Grid::new(0.0, 0.5, n)?;
            let zeros = vec![0.0; n];
            let f = heat_crank_nicolson(&GridFn::sample(x, f64::sin), &zeros, &zeros, &t, 1.0)?;
            let mut err = 0.0f64;
            for k in 0..n {
                for i in 0..n {
                    err = err.max((f.at(i, k) - (-t.x(k)).exp() * x.x(i).sin()).abs());
                }
            }
            hs.push(x.h());
            es.push(err);
        }
        let o = observed_order(&hs, &es);
        Ok((within(o, ORDER_2), format!("order {}", fmt_order(o))))
    });
    s.run("7.3", "negative controls give residuals >= 1e-2", || {
        let g = Grid::new(0.0, 3.0, 61)?;
        let cosine = GridFn::sample_analytic(g, f64::cos, |x| -x.sin(), |x| -x.cos());
        let minus_one = |_: f64| -1.0;
        let ode_res = ode_residual(&zero, &minus_one, &cosine)?.linf;
        let fields: Vec<GridField> = [21usize, 41, 81]
            .iter()
            .map(|&n| {
                Ok(GridField::sample(Grid::new(0.0, 1.0, n)?, Grid::new(0.0, 0.5, n)?, |x, t| (x + 2.0 * t).sin()))
            })
            .collect::<Result<_>>()?;
        let heat = pde_residual_study(&fields, &|p: &PdePoint| Ok(p.u_t - p.u_xx))?;
        let burgers = burgers_residual(&fields, 1.0)?;
        let ok = ode_res >= NEGATIVE_CONTROL
            && heat.finest().linf >= NEGATIVE_CONTROL
            && burgers.finest().linf >= NEGATIVE_CONTROL;
        Ok((ok, format!("ode {ode_res:.2e}, heat {:.2e}, Burgers {:.2e}", heat.finest().linf, burgers.finest().linf)))
    });
}

fn criterion_8(s: &mut Suite) {
    s.run("8.1", "every documented CLI example is byte-identical across two runs", || {
        let examples: &[&[&str]] = &[
            &["transform", "--p", "1-x^2", "--q", "-2*x", "--r", "n*(n+1)", "--param", "n=2", "--map", "0,1,1,0"],
            &["classify", "--branch", "beta0", "--eq1", "1,0,1", "--eq2-bessel-order", "1/2"],
            &["table2", "--report"],
            &["table1"],
            &["transport", "--r", "1", "--map", "0,1,1,0", "--grid", "1,1.5,41", "--init", "1,1,1"],
            &["decompose", "--map", "1,2,3,4"],
            &["invariant", "--q", "-2*x", "--r", "4"],
            &[
                "darboux", "--u", "0", "--nu", "1", "--seed", "0,1,1", "--grid", "0,1,21", "--phi", "0,1,0",
                "--lambda", "4",
            ],
            &[
                "frac-darboux",
                "--u",
                "0",
                "--c",
                "1",
                "--seed1",
                "0,1,-1",
                "--seed2",
                "0,1,1",
                "--grid",
                "-1,1,101",
                "--phi",
                "0,1,0",
            ],
            &["cole-hopf", "--suite", "all", "--c", "x"],
            &["errata"],
            &["verify"],
        ];
        for args in examples {
            let run = || {
                Command::new(env!("CARGO_BIN_EXE_fracdarboux"))
                    .args(*args)
                    .env_remove("DARBOUX_TOL")
                    .output()
                    .expect("binary runs")
            };
            let (a, b) = (run(), run());
            if a.stdout != b.stdout || a.stdout.is_empty() || a.status.code() != Some(0) {
                return Ok((false, format!("{} differs or failed", args[0])));
            }
        }
        Ok((true, format!("{} examples", examples.len())))
    });
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let mut s = Suite(Vec::new());
    criterion_1(&mut s);
    criterion_2(&mut s);
    criterion_3(&mut s);
    criterion_4(&mut s);
    criterion_5(&mut s);
    criterion_6(&mut s);
    criterion_7(&mut s);
    criterion_8(&mut s);
    let passed = s.0.iter().filter(|c| c.pass).count();
    println!("{passed}/{} checks passed in {:.1?}", s.0.len(), start.elapsed());

    let unexpected: Vec<String> =
        s.0.iter()
            .filter(|c| c.pass == KNOWN_FAILURES.contains(&c.id))
            .map(|c| format!("[{}] {} ({})", c.id, c.what, c.detail))
            .collect();
    assert!(unexpected.is_empty(), "unexpected outcomes:\n{}", unexpected.join("\n"));
}

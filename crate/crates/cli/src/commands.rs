use std::io::Write;

use anyhow::{bail, Context, Result};
use nazeta::cone::{i_cone, parse_problem, sharp_integral, Hyperplane};
use nazeta::eisenstein::{
    closed_truncated_period, compact_region_period, rank2_zeta, rank2_zeta_closed_digits, truncated_period, zero_scan, EisensteinConfig,
};
use nazeta::lattice::{canonical_filtration, canonical_polygon, fundamental_relation_check};
use nazeta::polygon::{bridge_check, cone_matrix, indicator_cone_coefficients, indicator_cone_forms};
use nazeta::root_data::{coroot, fundamental_weight, half_sum_positive_roots, simple_root, standard_parabolics};
use nazeta::sampling::{self, SeededRng};
use nazeta::trunc::{gamma, langlands_lemma, lemma2_expected, lemma2_sum, nabla, sigma, sigma_characterization, tau};
use nazeta::{ApartmentVector, LinearForm, ParabolicIndex, Rational};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::{input, Cli, Format, PeriodMethod, Status, Verb, ZetaMethod};

const MAX_VERIFY_RANK: usize = 24;

fn q(x: &Rational) -> Value {
    Value::String(x.to_string())
}

fn qs(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

fn c(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{v}")?;
    Ok(())
}

pub fn run(cli: &Cli, mut out: Box<dyn Write>) -> Result<Status> {
    if cli.format == Format::Csv && !matches!(cli.verb, Verb::Zeta2Scan { .. }) {
        bail!("csv output is only available for zeta2-scan");
    }
    let status = match &cli.verb {
        Verb::Roots { r } => roots(*r, &mut out)?,
        Verb::VerifyLemma { r } => verify_lemma(*r, cli.trials, cli.seed, &mut out)?,
        Verb::Bridge { polygon, parabolic, h } => {
            let p = input::polygon(&input::read_text(polygon.as_deref())?)?;
            let pars = match parabolic {
                Some(s) => vec![input::parabolic(s)?],
                None => standard_parabolics(p.rank())?,
            };
            let h = h.as_deref().map(input::apartment).transpose()?;
            bridge(&p, &pars, h.as_ref(), cli.trials, cli.seed, &mut out)?
        }
        Verb::ConeForms { polygon, parabolic } => {
            let p = input::polygon(&input::read_text(polygon.as_deref())?)?;
            cone_forms(&p, &input::parabolic(parabolic)?, &mut out)?
        }
        Verb::Hn { input: path } => hn(&input::lattice(&input::read_text(path.as_deref())?)?, &mut out)?,
        Verb::Fundrel { input: path, polygon } => {
            let l = input::lattice(&input::read_text(path.as_deref())?)?;
            let p = input::polygon(&input::read_text(Some(polygon))?)?;
            let fr = fundamental_relation_check(&l, &p)?;
            let counts: Vec<Value> = fr.counts.iter().map(|(par, n)| json!({"parabolic": par.to_string(), "flags": n})).collect();
            emit(&mut out, &json!({"lhs": fr.lhs, "rhs": fr.rhs, "counts": counts}))?;
            if fr.lhs as i64 == fr.rhs {
                Status::Ok
            } else {
                Status::Counterexample
            }
        }
        Verb::ConeInt { input: path } => cone_int(&input::read_text(path.as_deref())?, &mut out)?,
        Verb::Period { s, t, method } => {
            let s = input::complex(s)?;
            let (value, est) = match method {
                PeriodMethod::Closed => (closed_truncated_period(s, *t)?, None),
                PeriodMethod::Analytic | PeriodMethod::Geometric => {
                    let cfg = EisensteinConfig::new(s, *t)?.with_digits(cli.precision);
                    let v = if *method == PeriodMethod::Analytic { truncated_period(&cfg)? } else { compact_region_period(&cfg)? };
                    (v.value, Some(v.est_error))
                }
            };
            let name = format!("{method:?}").to_lowercase();
            emit(&mut out, &json!({"s": c(s), "T": t, "value": c(value), "method": name, "est_error": est}))?;
            Status::Ok
        }
        Verb::Zeta2 { re, im, method } => {
            let s = Complex64::new(*re, *im);
            let (value, est) = match method {
                ZetaMethod::Closed => (rank2_zeta_closed_digits(s, cli.precision)?, None),
                ZetaMethod::Quadrature => {
                    let v = rank2_zeta(s, cli.precision)?;
                    (v.value, Some(v.est_error))
                }
            };
            let name = format!("{method:?}").to_lowercase();
            emit(&mut out, &json!({"s": c(s), "value": c(value), "method": name, "est_error": est}))?;
            Status::Ok
        }
        Verb::Zeta2Scan { t0, t1, step, csv } => {
            let scan = zero_scan(*t0, *t1, *step, cli.precision)?;
            let table = |w: &mut dyn Write| -> Result<()> {
                writeln!(w, "t,Re,Im")?;
                for (t, z) in &scan.samples {
                    writeln!(w, "{t},{},{}", z.re, z.im)?;
                }
                Ok(())
            };
            if let Some(path) = csv {
                let mut f = std::io::BufWriter::new(std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?);
                table(&mut f)?;
                f.flush()?;
            }
            if cli.format == Format::Csv {
                table(&mut out)?;
            } else {
                let summary = json!({
                    "zeros": scan.zeros,
                    "sign_changes": scan.zeros.len(),
                    "argument_count": scan.argument_count,
                    "value_at_t0": scan.value_at_t_min,
                });
                emit(&mut out, &summary)?;
            }
            Status::Ok
        }
    };
    out.flush()?;
    Ok(status)
}

fn form(f: &LinearForm<Rational>) -> Value {
    qs(f.coeffs())
}

fn roots(r: usize, out: &mut dyn Write) -> Result<Status> {
    if !(1..=MAX_VERIFY_RANK).contains(&r) {
        bail!("rank must be between 1 and {MAX_VERIFY_RANK}");
    }
    let simple: Vec<Value> = (1..r).map(|i| simple_root::<Rational>(i, r).map(|f| form(&f))).collect::<nazeta::Result<_>>()?;
    let weights: Vec<Value> = (1..r).map(|i| fundamental_weight::<Rational>(i, r).map(|f| form(&f))).collect::<nazeta::Result<_>>()?;
    let coroots: Vec<Value> = (1..r).map(|i| coroot::<Rational>(i, r).map(|v| qs(v.coords()))).collect::<nazeta::Result<_>>()?;
    let parabolics: Vec<Value> = if r <= 12 {
        standard_parabolics(r)?.iter().map(|p| json!({"blocks": p.blocks(), "cuts": p.cuts()})).collect()
    } else {
        Vec::new()
    };
    emit(
        out,
        &json!({
            "rank": r,
            "simple_roots": simple,
            "fundamental_weights": weights,
            "coroots": coroots,
            "rho": form(&half_sum_positive_roots::<Rational>(r)?),
            "parabolics": parabolics,
        }),
    )?;
    Ok(Status::Ok)
}

fn nested_pair(g: &mut SeededRng, r: usize) -> Result<(ParabolicIndex, ParabolicIndex)> {
    let p = sampling::parabolic(g, r);
    let mut cuts = p.cuts();
    cuts.extend(sampling::parabolic(g, r).cuts());
    Ok((ParabolicIndex::from_cuts(r, &cuts)?, p))
}

fn verify_lemma(r: usize, trials: usize, seed: u64, out: &mut dyn Write) -> Result<Status> {
    if !(2..=MAX_VERIFY_RANK).contains(&r) {
        bail!("rank must be between 2 and {MAX_VERIFY_RANK}");
    }
    let mut g = sampling::rng(seed);
    let mut found = 0usize;
    for trial in 0..trials {
        let (qq, p) = nested_pair(&mut g, r)?;
        let h = sampling::rational_apartment::<Rational>(&mut g, r, 9, 7);
        let x = sampling::rational_apartment::<Rational>(&mut g, r, 9, 7);
        let lambda = LinearForm::new((0..r).map(|_| sampling::rational::<Rational>(&mut g, 4, 2)).collect())?;
        let delta = (qq == p) as i64;
        let mut report = |check: &str, got: Value, expected: Value| -> Result<()> {
            found += 1;
            let v = json!({
                "trial": trial, "check": check, "q": qq.to_string(), "p": p.to_string(),
                "h": qs(h.coords()), "x": qs(x.coords()), "lambda": form(&lambda),
                "got": got, "expected": expected,
            });
            emit(out, &v)
        };
        let (a, b) = langlands_lemma(&qq, &p, &h)?;
        if (a, b) != (delta, delta) {
            report("langlands", json!([a, b]), json!([delta, delta]))?;
        }
        let s = sigma(&qq, &p, &h)?;
        let chi = sigma_characterization(&qq, &p, &h)? as i64;
        if s != chi {
            report("sigma", json!(s), json!(chi))?;
        }
        let (sum, expected) = (lemma2_sum(&qq, &p, &lambda, &h)?, lemma2_expected(&qq, &p, &lambda)?);
        if sum != expected {
            report("lemma2", json!(sum), json!(expected))?;
        }
        let hmx = h.sub(&x)?;
        let sgn = if (qq.len() + p.len()) % 2 == 0 { 1 } else { -1 };
        let (lhs, rhs) = (gamma(&qq, &p, &hmx, &x.neg())?, sgn * nabla(&qq, &p, &h, &x)?);
        if lhs != rhs {
            report("gamma-nabla", json!(lhs), json!(rhs))?;
        }
        let mut split = 0;
        for rr in qq.between(&p)? {
            split += gamma(&qq, &rr, &hmx, &x.neg())? * tau(&rr, &p, &h)? as i64;
        }
        let direct = tau(&qq, &p, &hmx)? as i64;
        if split != direct {
            report("gamma-tau", json!(split), json!(direct))?;
        }
    }
    eprintln!("verify-lemma: {trials} trials at rank {r}, {found} counterexamples");
    Ok(if found == 0 { Status::Ok } else { Status::Counterexample })
}

fn bridge(
    p: &nazeta::polygon::Polygon<Rational>,
    pars: &[ParabolicIndex],
    h: Option<&ApartmentVector<Rational>>,
    trials: usize,
    seed: u64,
    out: &mut dyn Write,
) -> Result<Status> {
    let r = p.rank();
    let mut found = 0usize;
    let mut g = sampling::rng(seed);
    for par in pars {
        if par.rank() != r {
            bail!("parabolic {par} has rank {}, polygon has rank {r}", par.rank());
        }
        match h {
            Some(h) => {
                let (lhs, rhs) = bridge_check(h, p, par)?;
                found += (lhs != rhs) as usize;
                emit(out, &json!({"parabolic": par.to_string(), "h": qs(h.coords()), "lhs": lhs, "rhs": rhs}))?;
            }
            None => {
                for _ in 0..trials {
                    let h = sampling::rational_apartment::<Rational>(&mut g, r, 6, 4);
                    let (lhs, rhs) = bridge_check(&h, p, par)?;
                    if lhs != rhs {
                        found += 1;
                        emit(out, &json!({"parabolic": par.to_string(), "h": qs(h.coords()), "lhs": lhs, "rhs": rhs}))?;
                    }
                }
            }
        }
    }
    if h.is_none() {
        eprintln!("bridge: {} points, {found} counterexamples", trials * pars.len());
    }
    Ok(if found == 0 { Status::Ok } else { Status::Counterexample })
}

fn cone_forms(p: &nazeta::polygon::Polygon<Rational>, par: &ParabolicIndex, out: &mut dyn Write) -> Result<Status> {
    let (m, inv) = cone_matrix::<Rational>(par)?;
    let rows = |a: &Vec<Vec<Rational>>| Value::Array(a.iter().map(|row| qs(row)).collect());
    let coeffs = indicator_cone_coefficients::<Rational>(par)?;
    let forms: Vec<Value> = indicator_cone_forms(par, p)?
        .iter()
        .zip(&coeffs)
        .map(|((f, t), a)| json!({"root_coefficients": qs(a), "form": form(f), "threshold": q(t)}))
        .collect();
    emit(
        out,
        &json!({"parabolic": par.to_string(), "cuts": par.cuts(), "matrix": rows(&m), "inverse": rows(&inv), "forms": forms}),
    )?;
    Ok(Status::Ok)
}

fn hn(l: &nazeta::lattice::LatticeRecord, out: &mut dyn Write) -> Result<Status> {
    let f = canonical_filtration(l)?;
    let poly = canonical_polygon(l)?;
    let chain: Vec<Value> = f.chain.iter().map(|s| json!(s.rows())).collect();
    emit(out, &json!({"filtration": chain, "polygon": poly.polygon.values(), "semistable": f.chain.len() == 1}))?;
    Ok(Status::Ok)
}

fn hyperplanes(h: &[Hyperplane]) -> Value {
    Value::Array(h.iter().map(|h| json!({"direction": h.direction, "term": h.term})).collect())
}

fn cone_int(text: &str, out: &mut dyn Write) -> Result<Status> {
    let problem = parse_problem(text)?;
    let v = match &problem.lambda {
        Some(lambda) => {
            let m = i_cone(&problem.f, &problem.cone, lambda)?;
            match m.finite() {
                Some(x) => json!({
                    "value": [x.to_f64(), 0.0], "exact": x.to_string(), "singular_hyperplanes": [],
                }),
                None => json!({"value": null, "exact": null, "singular_hyperplanes": hyperplanes(m.hyperplanes())}),
            }
        }
        None => {
            let m = sharp_integral(&problem.f, &problem.cone)?;
            match m.finite() {
                Some(x) => json!({"value": c(x.value()), "exact": x.to_string(), "singular_hyperplanes": []}),
                None => json!({"value": null, "exact": null, "singular_hyperplanes": hyperplanes(m.hyperplanes())}),
            }
        }
    };
    emit(out, &v)?;
    Ok(Status::Ok)
}

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kneadzeta::combinatorics::{
    classify_points, generate_vu, is_expanding, is_framed, is_own_combinatorics, is_pm,
    is_virtually_unimodal, orbit, periodic_counts_of_pl, periodic_orbits_of_pl, pl_model,
    turning_points, Combinatorics, OwnCheck, PmCheck,
};
use kneadzeta::cubicfam::{
    build_branch_system, count_periodic, critical_value, filled_julia_endpoints,
    pairwise_disjoint, repeller_pieces, CubicMap, CubicParam,
};
use kneadzeta::fibmap::{
    c_unit_increasing, diameter_ratios, find_fib_lambda, interval_families, verify_structure,
    FibLambda,
};
use kneadzeta::kneading::{
    column_determinants, kneading_determinant, kneading_matrix, unimodal_kneading,
    unimodal_rational_form, unimodal_signs,
};
use kneadzeta::series::{
    detect_eventual_periodicity, parse_q, q, rational_from_eventually_periodic, Poly,
    PeriodicityLimits, RationalFn, TruncSeries, Q,
};
use kneadzeta::subshift::{sft_periodic_counts, AdjMatrix};
use kneadzeta::zeta::{
    counts_from_zeta, mt_relation_check, mt_relation_report, zeta_from_counts,
    zeta_vu_closed_form,
};
use num::{BigInt, ToPrimitive};
use serde_json::{json, Value};

use output::{emit, failure_json, render, to_value, Failure, Format, Report, Table};

#[derive(Parser)]
#[command(
    name = "kneadzeta",
    version,
    about = "Kneading determinants, zeta functions and worked examples of interval maps",
    long_about = "Kneading determinants, zeta functions and worked examples of interval maps.\n\n\
        Output is JSON with sorted keys unless --format csv is given. Exit status is 0 on \
        success, 1 when a computed predicate fails (the reason is printed), and 2 on a usage error."
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunConfig {
    /// Truncation order of power series.
    #[arg(long, global = true, default_value_t = 64, value_parser = parse_order)]
    order: usize,
    /// Numerical tolerance; each subcommand documents its default.
    #[arg(long, global = true, value_parser = parse_tol)]
    tol: Option<f64>,
    /// Output format. Only `cubic sweep` and `fib check` have CSV output.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

fn parse_order(text: &str) -> Result<usize, String> {
    let n: usize = text.parse().map_err(|e| format!("{e}"))?;
    if n < 8 {
        return Err(format!("order must be at least 8, got {n}"));
    }
    Ok(n)
}

fn parse_tol(text: &str) -> Result<f64, String> {
    let t: f64 = text.parse().map_err(|e| format!("{e}"))?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(format!("tolerance must be positive, got {text}"));
    }
    Ok(t)
}

#[derive(Subcommand)]
enum Command {
    /// Combinatorics of piecewise monotone maps.
    #[command(subcommand)]
    Comb(CombCmd),
    /// Kneading matrices and determinants of PL models.
    #[command(subcommand)]
    Knead(KneadCmd),
    /// Artin-Mazur zeta functions.
    #[command(subcommand)]
    Zeta(ZetaCmd),
    /// The cubic family F_s.
    #[command(subcommand)]
    Cubic(CubicCmd),
    /// The Fibonacci tent map.
    #[command(subcommand)]
    Fib(FibCmd),
    /// Power series utilities.
    #[command(subcommand)]
    Series(SeriesCmd),
}

#[derive(Subcommand)]
enum CombCmd {
    /// Check conditions (1) piecewise monotone and (2) own combinatorics, then
    /// report framing, virtual unimodality and expansion.
    Validate {
        /// Combinatorics such as 0,2,3,1,0.
        #[arg(long)]
        rho: Combinatorics,
    },
    /// Build the virtually unimodal combinatorics with parameter nu.
    Generate {
        #[arg(long)]
        nu: usize,
    },
    /// Orbits of the marked points; with --n also the periodic orbits of the
    /// PL model of exact period n.
    Orbit {
        #[arg(long)]
        rho: Combinatorics,
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Subcommand)]
enum KneadCmd {
    /// Kneading determinant and the determinant from every deletable column.
    Det {
        #[arg(long)]
        rho: Combinatorics,
    },
    /// Kneading matrix entries as truncated series.
    Matrix {
        #[arg(long)]
        rho: Combinatorics,
    },
    /// Sign sequence and kneading series of a unimodal PL model, with its
    /// rational form.
    Unimodal {
        #[arg(long)]
        rho: Combinatorics,
    },
}

#[derive(Subcommand)]
enum ZetaCmd {
    /// Zeta series from periodic point counts N_1..N_n.
    FromCounts {
        /// Comma-separated counts, e.g. 1,3,4,7.
        #[arg(long)]
        counts: String,
    },
    /// Periodic counts and zeta of the edge shift of a 0-1 matrix.
    Sft {
        /// Rows separated by `;`, e.g. "0,1;1,1".
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Closed-form zeta of the virtually unimodal family, with the cyclotomic
    /// factors left after dividing by the kneading determinant of its PL model.
    ClosedForm {
        #[arg(long)]
        nu: usize,
        /// Number of counts to list.
        #[arg(long, default_value_t = 12)]
        n: usize,
    },
    /// Checks that 1/zeta = Phi * D with Phi a product of factors 1 - t^p,
    /// using exact periodic counts of the PL model.
    MtCheck {
        #[arg(long)]
        rho: Combinatorics,
        /// Highest period counted; also the series order.
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum CubicCmd {
    /// Exact identities, Julia endpoints, periodic counts and repeller
    /// pieces at one parameter. --tol (default 1e-9) is the branch margin.
    Report {
        /// Parameter as an integer, fraction or decimal.
        #[arg(long)]
        s: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// CSV columns: s, critical_value, alpha, beta, N1..Nn.
    Sweep {
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// Periodic point counts N_1..N_n; --tol (default 1e-12) is the root
    /// tolerance.
    Count {
        #[arg(long)]
        s: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// Repeller pieces labelled by Fibonacci words; --tol (default 1e-9) is
    /// the branch margin.
    Repeller {
        #[arg(long)]
        s: String,
        #[arg(long, default_value_t = 5)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum FibCmd {
    /// Bisect the slope of the Fibonacci tent map. --tol defaults to 1e-10.
    FindLambda {
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Structure and diameter report. CSV columns: k, nu, C, residual,
    /// one_minus_C.
    Check {
        /// Slope as a decimal string; all digits are used. Without it the
        /// slope is bisected at --depth.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
    },
}

#[derive(Subcommand)]
enum SeriesCmd {
    /// Smallest preperiod and period of an integer sequence, and its rational
    /// generating function.
    DetectPeriod {
        /// Comma-separated integers.
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        max_preperiod: Option<usize>,
        #[arg(long)]
        max_period: Option<usize>,
    },
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, Failure> {
    text.split(',')
        .map(|e| e.trim().parse::<T>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::usage(format!("cannot parse {what} `{text}`")))
}

fn parse_s(text: &str) -> Result<Q, Failure> {
    parse_q(text).map_err(Failure::usage)
}

fn q_str(x: &Q) -> String {
    x.to_string()
}

fn run(cmd: Command, cfg: &RunConfig) -> Result<Report, Failure> {
    match cmd {
        Command::Comb(c) => comb(c),
        Command::Knead(c) => knead(c, cfg.order),
        Command::Zeta(c) => zeta(c, cfg.order),
        Command::Cubic(c) => cubic(c, cfg.tol),
        Command::Fib(c) => fib(c, cfg.tol),
        Command::Series(c) => series(c),
    }
}

fn comb(cmd: CombCmd) -> Result<Report, Failure> {
    match cmd {
        CombCmd::Validate { rho } => {
            if let PmCheck::EqualAdjacent(i) = is_pm(&rho) {
                return Err(Failure::with_detail(
                    format!("adjacent equal entries at {i}"),
                    json!({ "rho": rho.entries(), "pm": false }),
                ));
            }
            if let OwnCheck::Induced { rho: induced, marked } = is_own_combinatorics(&rho) {
                return Err(Failure::with_detail(
                    format!("not its own combinatorics: induces ({induced}) on {marked:?}"),
                    json!({ "rho": rho.entries(), "pm": true, "own": false,
                            "induced": induced.entries(), "marked": marked }),
                ));
            }
            let dominant = is_virtually_unimodal(&rho);
            Ok(Report::json(json!({
                "rho": rho.entries(),
                "pm": true,
                "own": true,
                "framed": is_framed(&rho),
                "turning": turning_points(&rho),
                "vu": dominant.is_some(),
                "dominant": dominant,
                "expanding": is_expanding(&rho).expanding,
            })))
        }
        CombCmd::Generate { nu } => {
            let rho = generate_vu(nu).map_err(Failure::domain)?;
            Ok(Report::json(json!({
                "rho": rho.entries(),
                "vu": is_virtually_unimodal(&rho).is_some(),
                "expanding": is_expanding(&rho).expanding,
            })))
        }
        CombCmd::Orbit { rho, n } => {
            let kinds = classify_points(&rho);
            let orbits: Vec<Value> = (0..=rho.n())
                .map(|i| {
                    let o = orbit(&rho, i);
                    json!({ "point": i, "preperiod": o.preperiod, "tail": o.tail,
                            "cycle": o.cycle, "kind": to_value(&kinds[i]) })
                })
                .collect();
            let mut out = json!({ "rho": rho.entries(), "turning": turning_points(&rho), "orbits": orbits });
            if let Some(p) = n {
                let found = periodic_orbits_of_pl(&pl_model(&rho), p).map_err(Failure::domain)?;
                let cycles: Vec<Vec<String>> =
                    found.orbits.iter().map(|o| o.cycle.iter().map(q_str).collect()).collect();
                out["periodic"] = json!({ "period": p, "orbits": cycles,
                                          "degenerate": to_value(&found.degenerate) });
            }
            Ok(Report::json(out))
        }
    }
}

fn knead(cmd: KneadCmd, order: usize) -> Result<Report, Failure> {
    match cmd {
        KneadCmd::Det { rho } | KneadCmd::Matrix { rho } | KneadCmd::Unimodal { rho }
            if !is_pm(&rho).is_pm() =>
        {
            let PmCheck::EqualAdjacent(i) = is_pm(&rho) else { unreachable!() };
            Err(Failure::domain(format!("adjacent equal entries at {i}")))
        }
        KneadCmd::Det { rho } => {
            let kd = kneading_matrix(&pl_model(&rho), order).map_err(Failure::domain)?;
            let det = kneading_determinant(&kd).map_err(Failure::domain)?;
            let rational = det.to_i64().and_then(|c| rational_of(&c));
            Ok(Report::json(json!({
                "shape": kd.shape,
                "determinant": to_value(&det),
                "columns": to_value(&column_determinants(&kd)),
                "rational": to_value(&rational),
            })))
        }
        KneadCmd::Matrix { rho } => {
            let kd = kneading_matrix(&pl_model(&rho), order).map_err(Failure::domain)?;
            Ok(Report::json(json!({ "shape": kd.shape, "order": order, "matrix": to_value(&kd.matrix) })))
        }
        KneadCmd::Unimodal { rho } => {
            let signs = unimodal_signs(&pl_model(&rho), order).map_err(Failure::domain)?;
            let series = unimodal_kneading(&signs, order).map_err(Failure::domain)?;
            let as_i64: Vec<i64> = signs.iter().map(|&e| e as i64).collect();
            let cert = detect_eventual_periodicity(&as_i64, PeriodicityLimits::default());
            let rational = match cert {
                Some(c) => {
                    let (prefix, rest) = signs.split_at(c.preperiod);
                    let rf = unimodal_rational_form(prefix, &rest[..c.period]).map_err(Failure::domain)?;
                    if rf.to_series(order) != series {
                        return Err(Failure::domain("rational form disagrees with the kneading series"));
                    }
                    Some(rf)
                }
                None => None,
            };
            Ok(Report::json(json!({
                "signs": signs,
                "kneading": to_value(&series),
                "periodicity": to_value(&cert),
                "rational": to_value(&rational),
            })))
        }
    }
}

/// Rational function of an integer sequence that is eventually periodic on
/// the given range.
fn rational_of(coeffs: &[i64]) -> Option<RationalFn> {
    let cert = detect_eventual_periodicity(coeffs, PeriodicityLimits::default())?;
    let to_q = |v: &[i64]| v.iter().map(|&x| q(x)).collect::<Vec<_>>();
    let (prefix, rest) = coeffs.split_at(cert.preperiod);
    rational_from_eventually_periodic(&to_q(prefix), &to_q(&rest[..cert.period])).ok()
}

fn big(v: &[usize]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn zeta(cmd: ZetaCmd, order: usize) -> Result<Report, Failure> {
    let strs = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    let counts_json = |v: &[BigInt]| -> Value {
        match v.iter().map(|x| x.to_u64()).collect::<Option<Vec<_>>>() {
            Some(small) => json!(small),
            None => json!(strs(v)),
        }
    };
    match cmd {
        ZetaCmd::FromCounts { counts } => {
            let counts: Vec<BigInt> = parse_list(&counts, "counts")?;
            let z = zeta_from_counts(&counts, counts.len()).map_err(Failure::domain)?;
            Ok(Report::json(json!({ "counts": counts_json(&counts), "zeta": to_value(&z), "phi_factors": null })))
        }
        ZetaCmd::Sft { matrix, n } => {
            let a = AdjMatrix::parse(&matrix).map_err(Failure::usage)?;
            let counts = sft_periodic_counts(&a, n);
            let z = zeta_from_counts(&counts, n).map_err(Failure::domain)?;
            Ok(Report::json(json!({ "counts": counts_json(&counts), "zeta": to_value(&z), "phi_factors": null })))
        }
        ZetaCmd::ClosedForm { nu, n } => {
            let rf = zeta_vu_closed_form(nu).map_err(Failure::domain)?;
            let counts = counts_from_zeta(&rf, n).map_err(Failure::domain)?;
            let rho = generate_vu(nu).map_err(Failure::domain)?;
            let kd = kneading_matrix(&pl_model(&rho), order).map_err(Failure::domain)?;
            let d = kneading_determinant(&kd).map_err(Failure::domain)?;
            let factors = mt_relation_check(&rf, &d, order);
            Ok(Report::json(json!({ "counts": counts_json(&counts), "zeta": to_value(&rf), "phi_factors": factors })))
        }
        ZetaCmd::MtCheck { rho, n } => {
            if n == 0 {
                return Err(Failure::usage("n must be positive"));
            }
            let model = pl_model(&rho);
            let counts = big(&periodic_counts_of_pl(&model, n).map_err(Failure::domain)?);
            let z = zeta_from_counts(&counts, n).map_err(Failure::domain)?;
            let kd = kneading_matrix(&model, n).map_err(Failure::domain)?;
            let d = kneading_determinant(&kd).map_err(Failure::domain)?;
            let report = mt_relation_report(&z, &d).map_err(Failure::domain)?;
            let out = json!({
                "counts": counts_json(&counts),
                "zeta": to_value(&z),
                "determinant": to_value(&d),
                "phi": to_value(&report.phi),
                "phi_factors": report.phi_factors,
            });
            if report.phi_factors.is_none() {
                return Err(Failure::with_detail(
                    "1/(zeta D) is not a product of factors 1 - t^p at this order",
                    out,
                ));
            }
            Ok(Report::json(out))
        }
    }
}

/// `1 / ((1 - t^3)(1 - t^2)(1 - t - t^2))`.
fn cubic_zeta() -> RationalFn {
    let den = Poly::one_minus_t_pow(3)
        .mul(&Poly::one_minus_t_pow(2))
        .mul(&Poly::from_ints(&[1, -1, -1]));
    RationalFn::reciprocal_of(den).expect("denominator is 1 at t = 0")
}

fn counts_for(map: &CubicMap, n: usize, tol: f64) -> Result<Vec<usize>, Failure> {
    (1..=n).map(|k| count_periodic(map, k, tol).map_err(Failure::domain)).collect()
}

fn cubic(cmd: CubicCmd, tol: Option<f64>) -> Result<Report, Failure> {
    match cmd {
        CubicCmd::Report { s, n, depth } => {
            let s = parse_s(&s)?;
            let p = CubicParam::new(s.clone()).map_err(Failure::domain)?;
            let cv = critical_value(&s).map_err(Failure::domain)?;
            let identities = json!({
                "f_at_0_is_1": p.eval(&q(0)) == q(1),
                "f_at_1_is_minus_s": p.eval(&q(1)) == -s.clone(),
                "f_at_minus_s_is_0": p.eval(&-s.clone()) == q(0),
                "critical_value_factored": cv.direct == cv.factored,
            });
            let map = p.to_map();
            let (alpha, beta) = filled_julia_endpoints(&map).map_err(Failure::domain)?;
            let counts = counts_for(&map, n, 1e-12)?;
            let expected = counts_from_zeta(&cubic_zeta(), n).map_err(Failure::domain)?;
            let matches = counts.iter().zip(&expected).all(|(a, b)| BigInt::from(*a) == *b);
            let bs = build_branch_system(&map, tol.unwrap_or(1e-9)).map_err(Failure::domain)?;
            let pieces = repeller_pieces(&bs, depth).map_err(Failure::domain)?;
            let max_diameter = pieces.iter().map(|x| x.diameter()).fold(0.0, f64::max);
            let out = json!({
                "s": q_str(&s), "a": q_str(&p.a), "b": q_str(&p.b), "c": q_str(&p.c),
                "identities": identities,
                "critical_value": q_str(&cv.direct),
                "critical_value_f64": cv.direct.to_f64(),
                "endpoints": [alpha, beta],
                "counts": counts,
                "closed_form_counts": expected.iter().map(|x| x.to_u64()).collect::<Vec<_>>(),
                "counts_match_closed_form": matches,
                "pieces": { "depth": depth, "count": pieces.len(),
                            "disjoint": pairwise_disjoint(&pieces), "max_diameter": max_diameter },
            });
            if identities.as_object().unwrap().values().any(|v| v != &Value::Bool(true)) {
                return Err(Failure::with_detail("an exact identity failed", out));
            }
            Ok(Report::json(out))
        }
        CubicCmd::Sweep { from, to, steps, n } => {
            if steps == 0 || !(from <= to) {
                return Err(Failure::usage("need --steps >= 1 and --from <= --to"));
            }
            let mut rows = Vec::with_capacity(steps + 1);
            for i in 0..=steps {
                let s = from + (to - from) * i as f64 / steps as f64;
                let map = CubicMap::new(s).map_err(Failure::domain)?;
                let (alpha, beta) = filled_julia_endpoints(&map).map_err(Failure::domain)?;
                let counts = counts_for(&map, n, tol.unwrap_or(1e-12))?;
                let cv = map.eval(map.turning_points()[0]);
                let mut row = vec![s.to_string(), cv.to_string(), alpha.to_string(), beta.to_string()];
                row.extend(counts.iter().map(ToString::to_string));
                rows.push(row);
            }
            let mut header = vec!["s", "critical_value", "alpha", "beta"];
            const NAMES: [&str; 8] = ["N1", "N2", "N3", "N4", "N5", "N6", "N7", "N8"];
            header.extend(&NAMES[..n.min(8)]);
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let f = |i: usize| r[i].parse::<f64>().unwrap();
                    let counts: Vec<u64> = r[4..].iter().map(|x| x.parse().unwrap()).collect();
                    json!({ "s": f(0), "critical_value": f(1), "alpha": f(2), "beta": f(3), "counts": counts })
                })
                .collect();
            Ok(Report::csv_first(json!({ "rows": json_rows }), Table { header, rows }))
        }
        CubicCmd::Count { s, n } => {
            let s = parse_s(&s)?;
            let map = CubicParam::new(s.clone()).map_err(Failure::domain)?.to_map();
            let counts = counts_for(&map, n, tol.unwrap_or(1e-12))?;
            Ok(Report::json(json!({ "s": q_str(&s), "counts": counts })))
        }
        CubicCmd::Repeller { s, depth } => {
            let s = parse_s(&s)?;
            let map = CubicParam::new(s.clone()).map_err(Failure::domain)?.to_map();
            let bs = build_branch_system(&map, tol.unwrap_or(1e-9)).map_err(Failure::domain)?;
            let levels: Vec<Value> = (1..=depth)
                .map(|d| {
                    let pieces = repeller_pieces(&bs, d).map_err(Failure::domain)?;
                    let max = pieces.iter().map(|x| x.diameter()).fold(0.0, f64::max);
                    Ok(json!({ "depth": d, "count": pieces.len(),
                               "disjoint": pairwise_disjoint(&pieces), "max_diameter": max }))
                })
                .collect::<Result<_, Failure>>()?;
            let pieces = repeller_pieces(&bs, depth).map_err(Failure::domain)?;
            Ok(Report::json(json!({
                "s": q_str(&s),
                "j": [bs.j.0, bs.j.1], "j1": [bs.j1.0, bs.j1.1], "j2": [bs.j2.0, bs.j2.1],
                "levels": levels,
                "pieces": to_value(&pieces),
            })))
        }
    }
}

fn fib(cmd: FibCmd, tol: Option<f64>) -> Result<Report, Failure> {
    let tol = tol.unwrap_or(1e-10);
    let find = |depth| find_fib_lambda(depth, tol).map_err(Failure::domain);
    match cmd {
        FibCmd::FindLambda { depth } => {
            let lam = find(depth)?;
            let mut out = to_value(&lam);
            out["decimal"] = json!(lam.decimal((lam.bits() as f64 * std::f64::consts::LOG10_2) as usize));
            Ok(Report::json(out))
        }
        FibCmd::Check { lambda, depth, kmax } => {
            let lam = match lambda {
                Some(text) => FibLambda::from_decimal(&text).map_err(Failure::domain)?,
                None => find(depth)?,
            };
            let fam = interval_families(&lam, kmax).map_err(Failure::domain)?;
            let structure = verify_structure(&fam, kmax);
            let ratios = diameter_ratios(&fam, kmax);
            let c_ok = c_unit_increasing(&fam, kmax);
            let residuals_ok = ratios.iter().all(|r| r.relative_residual.is_none_or(|x| x < 1e-8));
            let levels: Vec<Value> = fam
                .levels
                .iter()
                .take(kmax + 1)
                .map(|l| json!({ "k": l.k, "m": l.m.iter().map(|p| p.label()).collect::<Vec<_>>() }))
                .collect();
            let out = json!({
                "lambda": lam.value,
                "matched": lam.matched,
                "kmax": kmax,
                "structure": to_value(&structure),
                "levels": levels,
                "ratios": to_value(&ratios),
                "c_unit_increasing": c_ok,
                "residuals_ok": residuals_ok,
            });
            if !(structure.all() && c_ok && residuals_ok) {
                return Err(Failure::with_detail("a structural property failed", out));
            }
            let rows = ratios
                .iter()
                .map(|r| {
                    vec![
                        r.k.to_string(),
                        r.nu.to_string(),
                        r.c.to_string(),
                        r.residual.map_or(String::new(), |x| x.to_string()),
                        r.one_minus_c.to_string(),
                    ]
                })
                .collect();
            Ok(Report::with_table(out, Table { header: vec!["k", "nu", "C", "residual", "one_minus_C"], rows }))
        }
    }
}

fn series(cmd: SeriesCmd) -> Result<Report, Failure> {
    match cmd {
        SeriesCmd::DetectPeriod { coeffs, max_preperiod, max_period } => {
            let coeffs: Vec<i64> = parse_list(&coeffs, "coefficients")?;
            let limits = PeriodicityLimits { max_preperiod, max_period };
            let cert = detect_eventual_periodicity(&coeffs, limits);
            let rational = cert.and_then(|_| rational_of(&coeffs));
            let series = TruncSeries::from_ints(&coeffs, coeffs.len().saturating_sub(1));
            Ok(Report::json(json!({
                "series": to_value(&series),
                "certificate": to_value(&cert),
                "rational": to_value(&rational),
            })))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command, &cli.config).and_then(|report| {
        render(&report, cli.config.format.unwrap_or(report.default_format))
    });
    match result {
        Ok(text) => match emit(&text, cli.config.out.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                ExitCode::from(1)
            }
        },
        Err(Failure::Domain { reason, detail }) => {
            println!("{}", failure_json(&reason, &detail));
            eprintln!("error: {reason}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(reason)) => {
            eprintln!("error: {reason}");
            ExitCode::from(2)
        }
    }
}

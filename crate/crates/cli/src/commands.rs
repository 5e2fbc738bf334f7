use std::io::Write;

use ellprim_core::bounds::{
    arith_inequalities, case_split_report, main_theorem_log_bound, phin_log_check, pprime_bound_report, thresholds,
};
use ellprim_core::primitive::crt::small_divisor_census;
use ellprim_core::primitive::prime_class;
use ellprim_core::sunit::theta_bound_interval;
use ellprim_core::{
    crt_class, crt_class_even, gamma_class, order_value, theta_exact, BoundReport, FrobeniusParams, Interval,
    OrderFactorizer, ParityBranch, Quantity, SUnitInstance, ThetaVariant, Verdict,
};
use rug::Integer;
use serde_json::json;

use crate::args::{BranchArg, CrtArgs, PointArgs, SunitArgs, VerifyArgs};
use crate::config::{ConfigFile, Settings};
use crate::error::{exit, CliError, CliResult};
use crate::scan::factor_string;
use crate::verify::{format_line, run_suite, VerifyOptions};

fn params_of(point: &PointArgs) -> CliResult<FrobeniusParams> {
    let params = FrobeniusParams::new(point.q, point.a)?;
    if point.n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    Ok(params)
}

fn degeneracy_warning(params: &FrobeniusParams) {
    let g = gamma_class(params);
    if g.is_degenerate() {
        let relation = match g.order_of_unity {
            2 => "a^2 = 0",
            3 => "a^2 = q",
            4 => "a^2 = 2q",
            _ => "a^2 = 3q",
        };
        eprintln!(
            "warning: gamma = conj(alpha)/alpha is a root of unity of order {} for {params} ({relation}); \
             gamma-valuation reports are unavailable",
            g.order_of_unity
        );
    }
}

pub fn order(point: &PointArgs, settings: &Settings, out: &mut dyn Write) -> CliResult<i32> {
    let params = params_of(point)?;
    degeneracy_warning(&params);
    let n = point.n;
    let value = order_value(&params, n);
    let mut f = OrderFactorizer::new(params.clone(), settings.budget());
    let report = f.primitive_primes(n)?;
    let primitive: Vec<(String, &str)> = report.primitive.iter().map(|r| (r.p.to_string(), r.kind.as_str())).collect();
    let complete = report.is_complete();
    if settings.json {
        let doc = json!({
            "q": point.q,
            "a": point.a,
            "n": n,
            "t_n": value.t_n.to_string(),
            "order": value.order.to_string(),
            "order_factors": factor_string(&report.order),
            "psi": report.psi.value.to_string(),
            "psi_factors": factor_string(&report.psi),
            "complete": complete,
            "primitive": primitive.iter().map(|(p, k)| json!({"p": p, "kind": k})).collect::<Vec<_>>(),
            "gamma_degenerate": gamma_class(&params).is_degenerate(),
        });
        writeln!(out, "{doc}")?;
    } else {
        writeln!(out, "{params}, n = {n}")?;
        writeln!(out, "t_n   = {}", value.t_n)?;
        writeln!(out, "N_n   = {} = {}", value.order, factor_string(&report.order).replace('*', " * "))?;
        writeln!(out, "Psi_n = {} = {}", report.psi.value, factor_string(&report.psi).replace('*', " * "))?;
        let listed: Vec<String> = primitive.iter().map(|(p, k)| format!("{p} ({k})")).collect();
        writeln!(out, "primitive primes: {}", if listed.is_empty() { "none known".into() } else { listed.join(", ") })?;
        writeln!(out, "complete: {complete}")?;
    }
    if !complete {
        return Err(CliError::Budget(format!("factorization of N_{n} for {params} is incomplete")));
    }
    Ok(exit::OK)
}

pub fn sunit_theta(args: &SunitArgs, settings: &Settings, out: &mut dyn Write) -> CliResult<i32> {
    let inst = SUnitInstance::new(args.x, args.primes.clone())?;
    let variants: Vec<ThetaVariant> = match &args.variant {
        Some(name) => vec![name.parse::<ThetaVariant>()?],
        None => ThetaVariant::ALL.into_iter().filter(|v| v.applies_to(&inst)).collect(),
    };
    let exact = theta_exact(&inst)?;
    let exact_iv = Interval::from_int(&Integer::from(exact), settings.precision_bits);
    let mut bounds = Vec::new();
    for v in variants {
        let b = theta_bound_interval(&inst, v, settings.precision_bits)?;
        bounds.push((v, b.mid_f64(), exact_iv.le(&b)));
    }
    if settings.json {
        let doc = json!({
            "x": args.x,
            "primes": inst.primes(),
            "theta": exact,
            "bounds": bounds.iter().map(|(v, b, verdict)| json!({"variant": v, "bound": b, "verdict": verdict})).collect::<Vec<_>>(),
        });
        writeln!(out, "{doc}")?;
    } else {
        writeln!(out, "theta({}, {:?}) = {exact}", args.x, inst.primes())?;
        for (v, b, verdict) in &bounds {
            writeln!(out, "{:<13} bound = {b:.6e}  {verdict}", v.as_str())?;
        }
    }
    Ok(if bounds.iter().any(|(.., v)| *v != Verdict::Holds) { exit::FAILED } else { exit::OK })
}

pub fn crt(args: &CrtArgs, settings: &Settings, out: &mut dyn Write) -> CliResult<i32> {
    let class = match (args.p, args.d) {
        (Some(p), _) => prime_class(args.n, p)?,
        (None, Some(d)) if args.n % 2 == 1 => crt_class(args.n, d)?,
        (None, Some(d)) => {
            let branch = match args.branch {
                Some(BranchArg::ThreeMod4) => ParityBranch::ThreeMod4,
                Some(BranchArg::OneMod4) => ParityBranch::OneMod4,
                Some(BranchArg::Odd) | None => {
                    return Err(CliError::Usage("even n needs --branch 3mod4 or --branch 1mod4".into()));
                }
            };
            crt_class_even(args.n, d, branch)?
        }
        (None, None) => return Err(CliError::Usage("give --d or --p".into())),
    };
    if settings.json {
        writeln!(out, "{}", serde_json::to_string(&class)?)?;
    } else {
        writeln!(
            out,
            "n = {}, d = {}, branch = {:?}: p = {} mod {}",
            class.n, class.d, class.branch, class.residue, class.modulus
        )?;
    }
    Ok(exit::OK)
}

fn main_bound_report(f: &mut OrderFactorizer, n: u64, prec: u32) -> CliResult<BoundReport> {
    let order = f.order(n)?;
    let (largest, complete) = order.largest_known_prime_factor();
    let bound = main_theorem_log_bound(n, prec)?;
    let log_p = Interval::from_int(&largest, prec).ln();
    let mut details = std::collections::BTreeMap::new();
    details.insert("largest_prime".to_string(), largest.to_string());
    details.insert("complete".to_string(), complete.to_string());
    Ok(BoundReport {
        name: "main_theorem_log_bound",
        lhs: Quantity::Real(bound.mid_f64()),
        rhs: Quantity::Real(log_p.mid_f64()),
        verdict: if complete { bound.le(&log_p) } else { Verdict::Inconclusive },
        slack: Some(log_p.sub(&bound).mid_f64()),
        in_proven_range: false,
        details,
    })
}

pub fn bound_report(point: &PointArgs, settings: &Settings, out: &mut dyn Write) -> CliResult<i32> {
    let params = params_of(point)?;
    degeneracy_warning(&params);
    let (n, prec) = (point.n, settings.precision_bits);
    let mut f = OrderFactorizer::new(params.clone(), settings.budget());
    let mut reports = vec![phin_log_check(&params, n, prec)?];
    let mut skipped = Vec::new();
    if n >= 3 {
        reports.extend(arith_inequalities(n, prec)?);
        match case_split_report(&mut f, n, prec) {
            Ok(r) => reports.push(r),
            Err(e) => skipped.push(("split_inert_dichotomy", CliError::from(e))),
        }
        if !gamma_class(&params).is_degenerate() {
            match pprime_bound_report(&mut f, n, prec) {
                Ok((r, _)) => reports.push(r),
                Err(e) => skipped.push(("large_inert_prime_count", CliError::from(e))),
            }
        }
        let census = small_divisor_census(n, prec)?;
        let mut details = std::collections::BTreeMap::new();
        details.insert("count".to_string(), census.count.to_string());
        details.insert("tau".to_string(), census.tau.to_string());
        reports.push(BoundReport {
            name: "small_divisor_census",
            lhs: Quantity::Real((census.count as f64).ln()),
            rhs: Quantity::Real(census.log_bound),
            verdict: census.verdict,
            slack: Some(census.log_bound - (census.count as f64).ln()),
            in_proven_range: census.in_proven_range,
            details,
        });
    }
    if n >= 16 {
        reports.push(main_bound_report(&mut f, n, prec)?);
    }
    let t = thresholds(&params);
    if settings.json {
        for r in &reports {
            writeln!(out, "{}", serde_json::to_string(r)?)?;
        }
        writeln!(out, "{}", json!({"thresholds": t}))?;
    } else {
        writeln!(out, "{params}, n = {n}")?;
        writeln!(out, "{:<34} {:<12} {:>14} {:>14}  proven-range", "report", "verdict", "lhs", "rhs")?;
        for r in &reports {
            writeln!(
                out,
                "{:<34} {:<12} {:>14} {:>14}  {}",
                r.name,
                r.verdict.as_str(),
                short(&r.lhs),
                short(&r.rhs),
                if r.in_proven_range { "yes" } else { "no" }
            )?;
        }
        writeln!(out, "n0 = {}, p0(quadratic) = {}, p0(rational) = {}", t.n0, t.p0_quad, t.p0_rat)?;
    }
    for (name, err) in &skipped {
        eprintln!("{name}: skipped: {err}");
    }
    if reports.iter().any(BoundReport::is_failure) {
        return Ok(exit::FAILED);
    }
    if let Some((_, err)) = skipped.into_iter().find(|(_, e)| e.exit_code() == exit::BUDGET) {
        return Err(err);
    }
    Ok(exit::OK)
}

fn short(q: &Quantity) -> String {
    match q {
        Quantity::Real(x) => format!("{x:.6}"),
        Quantity::Tower(t) => t.to_string(),
    }
}

pub fn verify_options(args: &VerifyArgs, file: &ConfigFile, settings: &Settings) -> CliResult<VerifyOptions> {
    let defaults = VerifyOptions::default();
    let n_max = args.n_max.or(file.get("n-max")?);
    let mut opts = VerifyOptions {
        q_max: args.q_max.or(file.get("q-max")?).unwrap_or(defaults.q_max),
        instances: args.instances.or(file.get("instances")?).unwrap_or(defaults.instances),
        x_max: args.x_max.or(file.get("x-max")?).unwrap_or(defaults.x_max),
        seed: settings.seed,
        prec: settings.precision_bits,
        budget: settings.budget(),
        ..defaults
    };
    match args.suite {
        crate::args::Suite::Pprim => opts.n_max = n_max.unwrap_or(opts.n_max),
        _ => opts.arith_n_max = n_max.unwrap_or(opts.arith_n_max),
    }
    if opts.q_max < 2 {
        return Err(CliError::Usage(format!("q-max = {} is below 2", opts.q_max)));
    }
    if opts.x_max == 0 || opts.x_max > u64::from(u32::MAX) {
        return Err(CliError::Usage(format!("x-max = {} is outside [1, 2^32)", opts.x_max)));
    }
    Ok(opts)
}

pub fn verify(args: &VerifyArgs, file: &ConfigFile, settings: &Settings, out: &mut dyn Write) -> CliResult<i32> {
    let opts = verify_options(args, file, settings)?;
    let lines = run_suite(args.suite, &opts, &settings.pool()?)?;
    for line in &lines {
        if settings.json {
            writeln!(out, "{}", serde_json::to_string(line)?)?;
        } else {
            writeln!(out, "{}", format_line(line))?;
        }
    }
    let failed: Vec<&str> = lines.iter().filter(|l| l.is_failure()).map(|l| l.name.as_str()).collect();
    if failed.is_empty() {
        Ok(exit::OK)
    } else {
        eprintln!("failed: {}", failed.join(", "));
        Ok(exit::FAILED)
    }
}

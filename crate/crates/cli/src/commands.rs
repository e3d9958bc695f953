use std::collections::HashSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use stickel_core::arith::{gcd, is_prime};
use stickel_core::bernoulli::{
    annihilation_consistency, global_cache, irregular_indices, kummer_check, minus_class_number,
    odd_primitive_root, stick_eval_identity_check, BernoulliCache,
};
use stickel_core::field::{minus_idempotent, plus_idempotent, AbelianField};
use stickel_core::logval::degree_zero_check;
use stickel_core::serial::Json;
use stickel_core::stickelberger::{
    check_restriction, check_twist, stickelberger, twist_factor, twisted_stickelberger,
};
use stickel_core::tower::{
    ideal_index, limit_stickelberger, mirror_diagnostic, IwasawaElement, TowerContext,
};
use stickel_core::Error;

use crate::render::{field_name, yes_no};
use crate::{Cli, Command, ElementArgs, FieldArgs, IwasawaAction, Suite};

pub struct Outcome {
    pub report: Value,
    pub text: String,
    pub passed: bool,
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: 3,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn parse_field(f: u64, h: &[i64]) -> Res<AbelianField> {
    AbelianField::new(f, h).map_err(|e| usage(format!("bad field descriptor: {}", e)))
}

fn field_of(args: &FieldArgs) -> Res<AbelianField> {
    parse_field(args.f, &args.h)
}

fn ell_of(cli: &Cli) -> Res<u64> {
    cli.ell.ok_or_else(|| usage("--ell is required"))
}

pub fn run(cli: &Cli) -> Res<Outcome> {
    let file_cache = match &cli.cache_dir {
        Some(dir) => {
            let cache = BernoulliCache::open(dir.join("bernoulli.json"))?;
            global_cache().merge_from(&cache);
            Some(cache)
        }
        None => None,
    };
    let out = match &cli.command {
        Command::Stick {
            field,
            c,
            restrict,
            restrict_h,
        } => stick(field, *c, *restrict, restrict_h),
        Command::Iwasawa { field, action } => iwasawa(cli, field, action),
        Command::Verify { suite } => verify(cli, suite),
    }?;
    if let Some(cache) = file_cache {
        cache.merge_from(global_cache());
        cache.save()?;
    }
    Ok(out)
}

fn stick(
    args: &FieldArgs,
    c: Option<i64>,
    restrict: Option<u64>,
    restrict_h: &[i64],
) -> Res<Outcome> {
    let field = field_of(args)?;
    let sigma = stickelberger(&field)?;
    let mut text = String::new();
    let mut report = json!({ "field": field.to_json(), "real": !field.is_imaginary(), "sigma": sigma.to_json() });
    writeln!(text, "field: {}", field_name(&field)).unwrap();
    if sigma.is_zero() && !field.is_imaginary() {
        writeln!(text, "sigma = 0 (real field)").unwrap();
    } else {
        writeln!(text, "sigma = {}", sigma).unwrap();
    }
    if let Some(c) = c {
        let delta = twist_factor(&field, c)?;
        let sc = twisted_stickelberger(&field, c)?;
        writeln!(text, "delta^{} = {}", c, delta).unwrap();
        writeln!(text, "sigma^{} = {}", c, sc).unwrap();
        report["c"] = json!(c);
        report["delta"] = delta.to_json();
        report["sigma_c"] = sc.to_json();
    }
    let mut passed = true;
    if let Some(k) = restrict {
        let small = parse_field(k, restrict_h)?;
        let r = check_restriction(&field, &small, c)?;
        writeln!(text, "restriction to {}:", field_name(&small)).unwrap();
        writeln!(text, "  euler primes: {:?}", r.euler_primes).unwrap();
        writeln!(text, "  norm of sigma = {}", r.left).unwrap();
        writeln!(text, "  euler product = {}", r.right).unwrap();
        writeln!(text, "  holds: {}", yes_no(r.holds)).unwrap();
        report["restriction"] = json!({
            "K": small.to_json(),
            "euler_primes": r.euler_primes,
            "left": r.left.to_json(),
            "right": r.right.to_json(),
            "holds": r.holds,
        });
        passed = r.holds;
    }
    Ok(Outcome {
        report,
        text,
        passed,
    })
}

fn default_twist(f: u64) -> i64 {
    (3..).step_by(2).find(|&c| gcd(c as u64, f) == 1).unwrap()
}

fn element(ctx: &TowerContext, args: &ElementArgs) -> Res<(IwasawaElement, Option<i64>)> {
    if args.gamma {
        return Ok((IwasawaElement::gamma_minus_one(ctx), None));
    }
    let c = args
        .c
        .unwrap_or_else(|| default_twist(ctx.level_conductor(0)));
    Ok((limit_stickelberger(ctx, c)?, Some(c)))
}

fn iwasawa(cli: &Cli, args: &FieldArgs, action: &IwasawaAction) -> Res<Outcome> {
    let field = field_of(args)?;
    let ell = ell_of(cli)?;
    let ctx = TowerContext::new(ell, &field, cli.prec_m, cli.tdeg_n)?;
    let mut text = String::new();
    writeln!(
        text,
        "tower: l={} over {} (Delta of order {}, offset {})",
        ell,
        field_name(&field),
        ctx.delta_order(),
        ctx.offset()
    )
    .unwrap();
    let mut report =
        json!({ "ell": ell, "M": cli.prec_m, "N": cli.tdeg_n, "field": field.to_json() });
    let mut passed = true;
    match action {
        IwasawaAction::Mirror {
            element: e,
            selftest,
        } => {
            let (x, c) = element(&ctx, e)?;
            let y = x.mirror();
            report["c"] = json!(c);
            report["input"] = x.to_json();
            report["output"] = y.to_json();
            writeln!(text, "x = {}", x).unwrap();
            writeln!(text, "mirror(x) = {}", y).unwrap();
            if *selftest {
                let involution = y.mirror() == x;
                let t = IwasawaElement::gamma_minus_one(&ctx);
                let product = x.mul(&t)?;
                let multiplicative = product.mirror() == y.mul(&t.mirror())?;
                let kappa = ctx.kappa_delta(ctx.conjugation_rep()).signed() == -1;
                writeln!(text, "mirror(mirror(x)) = x: {}", yes_no(involution)).unwrap();
                writeln!(
                    text,
                    "mirror(x T) = mirror(x) mirror(T): {}",
                    yes_no(multiplicative)
                )
                .unwrap();
                writeln!(text, "kappa(conj) = -1: {}", yes_no(kappa)).unwrap();
                report["selftest"] = json!({ "involution": involution, "multiplicative": multiplicative, "kappa_conj": kappa });
                passed = involution && multiplicative && kappa;
            }
        }
        IwasawaAction::Twist { element: e, i } => {
            let (x, c) = element(&ctx, e)?;
            let y = x.tate_twist(*i);
            let back = y.tate_twist(-*i) == x;
            report["c"] = json!(c);
            report["i"] = json!(i);
            report["input"] = x.to_json();
            report["output"] = y.to_json();
            report["round_trip"] = json!(back);
            writeln!(text, "x = {}", x).unwrap();
            writeln!(text, "twist(x, {}) = {}", i, y).unwrap();
            writeln!(text, "twist(twist(x, {}), {}) = x: {}", i, -i, yes_no(back)).unwrap();
            passed = back;
        }
        IwasawaAction::Symmetrize { element: e } => {
            let (x, c) = element(&ctx, e)?;
            let s = x.symmetrize();
            report["c"] = json!(c);
            report["input"] = x.to_json();
            report["output"] = s.to_json();
            writeln!(text, "x = {}", x).unwrap();
            writeln!(text, "x + mirror(x) = {}", s).unwrap();
            if c.is_some() {
                let delta = ctx.delta_field();
                let em = IwasawaElement::constant(&ctx, &minus_idempotent(delta, ctx.ring()))?;
                let ep = IwasawaElement::constant(&ctx, &plus_idempotent(delta, ctx.ring()))?;
                let minus_ok = em.mul(&s)? == x;
                let plus_ok = ep.mul(&s)? == x.mirror();
                writeln!(text, "e_- (x + mirror(x)) = x: {}", yes_no(minus_ok)).unwrap();
                writeln!(text, "e_+ (x + mirror(x)) = mirror(x): {}", yes_no(plus_ok)).unwrap();
                report["minus_part"] = json!(minus_ok);
                report["plus_part"] = json!(plus_ok);
                passed = minus_ok && plus_ok;
            }
        }
        IwasawaAction::Reduce { element: e, n } => {
            let (x, c) = element(&ctx, e)?;
            let r = x.reduce_mod_level(*n)?;
            let d = mirror_diagnostic(&x, *n)?;
            report["c"] = json!(c);
            report["n"] = json!(n);
            report["level_element"] = r.to_json();
            report["precision"] = json!(r.ring().precision);
            report["mirror_diagnostic"] =
                json!({ "precision": d.precision, "congruent": d.congruent });
            writeln!(
                text,
                "level {} element (mod l^{}): {}",
                n,
                r.ring().precision,
                r
            )
            .unwrap();
            writeln!(
                text,
                "reduce(mirror(x)) vs reflect(reduce(x)) mod l^{}: {}",
                d.precision,
                if d.congruent { "congruent" } else { "differ" }
            )
            .unwrap();
        }
        IwasawaAction::Index { c, n, i } => {
            let r = ideal_index(&ctx, *n, c, *i)?;
            report["c"] = json!(c);
            report["n"] = json!(n);
            report["i"] = json!(i);
            report["index"] = r.to_json();
            match r.valuation {
                Some(v) => {
                    writeln!(text, "v_l(index) = {} (certified mod l^{})", v, r.precision).unwrap()
                }
                None => writeln!(
                    text,
                    "index not certified finite at precision l^{}",
                    r.precision
                )
                .unwrap(),
            }
        }
    }
    Ok(Outcome {
        report,
        text,
        passed,
    })
}

fn odd_primes(upto: u64) -> Vec<u64> {
    (3..=upto).filter(|&p| is_prime(p)).collect()
}

fn all_subfields(fmax: u64) -> Vec<AbelianField> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for f in 1..=fmax {
        if f % 4 == 2 {
            continue;
        }
        for k in AbelianField::cyclotomic(f).subfields() {
            if seen.insert(k.clone()) {
                out.push(k);
            }
        }
    }
    out
}

fn verify(cli: &Cli, suite: &Suite) -> Res<Outcome> {
    let mut text = String::new();
    let (report, passed) = match suite {
        Suite::Bernoulli { fmax } => {
            let mut failures = Vec::new();
            let mut signs = HashSet::new();
            let mut count = 0;
            for field in all_subfields(*fmax)
                .into_iter()
                .filter(|k| k.is_imaginary())
            {
                let r = stick_eval_identity_check(&field)?;
                count += 1;
                signs.insert(r.sign);
                if !r.holds {
                    failures.push(field.to_json());
                }
            }
            let signs: Vec<i32> = signs.into_iter().collect();
            let ok = failures.is_empty() && signs.len() == 1;
            writeln!(text, "imaginary fields checked: {}", count).unwrap();
            writeln!(text, "sign: {:?}", signs).unwrap();
            writeln!(text, "failures: {}", failures.len()).unwrap();
            (
                json!({ "fields": count, "signs": signs, "failures": failures }),
                ok,
            )
        }
        Suite::Kummer => {
            let ells = match cli.ell {
                Some(l) => vec![l],
                None => odd_primes(100),
            };
            let mut rows = Vec::new();
            let mut ok = true;
            for ell in ells {
                let mut flagged = Vec::new();
                let mut failed = Vec::new();
                for k in (2..ell.saturating_sub(2)).step_by(2) {
                    let r = kummer_check(ell, k)?;
                    if !r.holds {
                        failed.push(k);
                    }
                    if r.irregular {
                        flagged.push(k);
                    }
                }
                let oracle = irregular_indices(ell)?;
                let row_ok = failed.is_empty() && flagged == oracle;
                ok &= row_ok;
                writeln!(
                    text,
                    "l = {}: {} irregular {:?}",
                    ell,
                    if row_ok { "pass" } else { "FAIL" },
                    flagged
                )
                .unwrap();
                rows.push(
                    json!({ "ell": ell, "irregular": flagged, "failures": failed, "pass": row_ok }),
                );
            }
            (json!({ "rows": rows }), ok)
        }
        Suite::Hminus { p } => {
            let ps = match p {
                Some(p) => vec![*p],
                None => odd_primes(67),
            };
            let mut rows = Vec::new();
            let mut ok = true;
            for p in ps {
                let h = minus_class_number(p)?;
                let row_ok = p > 19 || h == BigInt::from(1);
                ok &= row_ok;
                writeln!(text, "h^-(Q(zeta_{})) = {}", p, h).unwrap();
                rows.push(json!({ "p": p, "h_minus": h.to_string() }));
            }
            (json!({ "rows": rows }), ok)
        }
        Suite::Consistency { c } => {
            let ell = ell_of(cli)?;
            let c = match c {
                Some(c) => *c,
                None => odd_primitive_root(ell)?,
            };
            let t = annihilation_consistency(ell, c, cli.prec_m.min(60))?;
            for r in &t.rows {
                let v = r.valuation.map_or("inf".to_string(), |v| v.to_string());
                writeln!(
                    text,
                    "{:>10}  v = {:>3}  irregular = {}",
                    r.chi,
                    v,
                    yes_no(r.irregular)
                )
                .unwrap();
            }
            writeln!(text, "excluded: {:?}", t.excluded).unwrap();
            writeln!(
                text,
                "flagged indices {:?}, Bernoulli oracle {:?}",
                t.flagged, t.kummer_irregular
            )
            .unwrap();
            let report = serde_json::to_value(&t).map_err(|e| Failure {
                code: 3,
                message: e.to_string(),
            })?;
            (report, t.consistent)
        }
        Suite::DegreeZero { count, seed } => {
            let ell = ell_of(cli)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut failures = Vec::new();
            for idx in 0..*count {
                let num: i64 =
                    rng.gen_range(1..=1_000_000) * if rng.gen_bool(0.5) { -1 } else { 1 };
                let den: i64 = rng.gen_range(1..=1_000_000);
                let x = BigRational::new(num.into(), den.into());
                let r = degree_zero_check(&x, ell, cli.prec_m)?;
                if !r.holds {
                    failures.push(json!({ "index": idx, "seed": seed, "x": x.to_json() }));
                }
            }
            writeln!(
                text,
                "l = {}, {} rationals (seed {}), modulo l^{}: {} failures",
                ell,
                count,
                seed,
                cli.prec_m,
                failures.len()
            )
            .unwrap();
            let ok = failures.is_empty();
            (
                json!({ "ell": ell, "count": count, "seed": seed, "M": cli.prec_m, "failures": failures }),
                ok,
            )
        }
        Suite::Restriction { fmax } => {
            let mut pairs = 0;
            let mut failures = Vec::new();
            for big in all_subfields(*fmax)
                .into_iter()
                .filter(|k| !k.is_rationals())
            {
                let f = big.conductor();
                let c = default_twist(f);
                check_twist(f, c)?;
                for small in big.subfields().into_iter().filter(|k| !k.is_rationals()) {
                    for twist in [None, Some(c)] {
                        let r = check_restriction(&big, &small, twist)?;
                        pairs += 1;
                        if !r.holds {
                            failures.push(
                                json!({ "F": big.to_json(), "K": small.to_json(), "c": twist }),
                            );
                        }
                    }
                }
            }
            writeln!(
                text,
                "pairs checked: {}, failures: {}",
                pairs,
                failures.len()
            )
            .unwrap();
            let ok = failures.is_empty();
            (json!({ "checked": pairs, "failures": failures }), ok)
        }
    };
    writeln!(text, "{}", if passed { "PASS" } else { "FAIL" }).unwrap();
    Ok(Outcome {
        report,
        text,
        passed,
    })
}

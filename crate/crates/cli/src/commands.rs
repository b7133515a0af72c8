use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use lotto_core::bench::{design_vs_random, reference_table, BenchRow, Guarantee};
use lotto_core::construct::{greedy_cover_with_progress, CandidateStrategy, GreedyConfig};
use lotto_core::design::{enumerate_full_design, parse_design, parse_design_with_kind, write_design};
use lotto_core::myth::{myth_comparison, pool_cover_comparison, reference_pool_cover};
use lotto_core::prob::{
    hit_spectrum, pmf_exact_hits, prob_at_least_one_high_hit, prob_at_least_one_high_hit_with,
    prob_at_least_s_high_hits, prob_jackpot, prob_no_high_hit,
};
use lotto_core::simulate::{expected_probability, run_simulation, SimConfig, SimTarget};
use lotto_core::verify::{schonheim_bound, schonheim_chain, verify, Method, VerificationReport, VerifyConfig};
use lotto_core::{Design, DesignKind, Error, Probability, Regime, Scheme, TicketModel};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::render::{group, probability_json, rational_json, table, Output};
use crate::{
    BenchCommand, Cli, Command, DesignCommand, Failure, GlobalOpts, GreedyArgs, KindArg, MythCommand, PortfolioArgs,
    ProbCommand, SimulateArgs, TargetKind, VerifyArgs,
};

type Res = Result<(), Failure>;

pub fn run(cli: &Cli, out: &mut impl Write) -> Res {
    let g = &cli.global;
    match &cli.command {
        Command::Prob(ProbCommand::Spectrum { scheme }) => spectrum(g, scheme, out),
        Command::Prob(ProbCommand::Portfolio(args)) => portfolio(g, args, out),
        Command::Prob(ProbCommand::ApproxCompare { scheme, tickets }) => approx_compare(g, scheme, tickets, out),
        Command::Design(DesignCommand::Verify(args)) => design_verify(g, args, out),
        Command::Design(DesignCommand::Schonheim { n, k, t }) => schonheim(g, *n, *k, *t, out),
        Command::Design(DesignCommand::Greedy(args)) => greedy(g, args, out),
        Command::Design(DesignCommand::Enumerate { n, k, cap, output }) => {
            let design = enumerate_full_design(*n, *k, *cap)?;
            emit_design(&design, output.as_deref(), out)
        }
        Command::Myth(MythCommand::Pool { scheme, n_star }) => myth_pool(g, scheme, *n_star, out),
        Command::Myth(MythCommand::Compare {
            scheme,
            n_star,
            cover_size,
        }) => myth_compare(g, scheme, *n_star, *cover_size, out),
        Command::Simulate(args) => simulate(g, args, out),
        Command::Bench(BenchCommand::DesignVsRandom {
            designs,
            scheme,
            blocks,
            kind,
        }) => bench(g, designs, scheme, *blocks, *kind, out),
    }
}

fn emit(g: &GlobalOpts, output: Output, out: &mut impl Write) -> Res {
    output.write(g.format, out)?;
    Ok(())
}

fn scheme_json(s: &Scheme) -> Value {
    json!({"n": s.n, "k": s.k, "p": s.p, "t": s.t})
}

fn spectrum(g: &GlobalOpts, scheme: &Scheme, out: &mut impl Write) -> Res {
    let s = hit_spectrum(scheme)?;
    let d = g.decimals;
    let mut rows = Vec::new();
    let mut levels = Vec::new();
    let mut csv = vec![vec!["hits".into(), "count".into(), "numerator".into(), "denominator".into(), "percent".into()]];
    for level in &s.levels {
        let p = Probability::Exact(level.probability.clone());
        let shown = p.render_percent_significant(d, 2);
        rows.push(vec![level.hits.to_string(), group(&level.count), format!("{shown}%")]);
        let mut pj = rational_json(&level.probability, d);
        pj["percent"] = json!(shown);
        levels.push(json!({"hits": level.hits, "count": level.count.to_string(), "probability": pj}));
        csv.push(vec![
            level.hits.to_string(),
            level.count.to_string(),
            level.probability.numer().to_string(),
            level.probability.denom().to_string(),
            shown,
        ]);
    }
    let text = format!(
        "scheme {scheme}, N = {}\n{}",
        group(&s.total),
        table(&["t", "M_t", "P(t)"], &rows)
    );
    let json = json!({"scheme": scheme_json(scheme), "total": s.total.to_string(), "levels": levels});
    emit(g, Output::new("prob spectrum", text, json, csv), out)
}

struct Row {
    quantity: String,
    form: &'static str,
    p: Probability,
}

fn rows_output(g: &GlobalOpts, command: &str, title: String, mut json: Value, rows: &[Row]) -> Output {
    let d = g.decimals;
    let text_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.quantity.clone(), r.form.to_string(), format!("{}%", r.p.render_percent_significant(d, 2))])
        .collect();
    let text = format!("{title}\n{}", table(&["quantity", "form", "probability"], &text_rows));
    json["results"] = rows
        .iter()
        .map(|r| json!({"quantity": r.quantity, "form": r.form, "probability": probability_json(&r.p, d)}))
        .collect();
    let mut csv = vec![vec![
        "quantity".into(),
        "form".into(),
        "numerator".into(),
        "denominator".into(),
        "percent".into(),
        "exact".into(),
    ]];
    for r in rows {
        let q = r.p.to_rational();
        csv.push(vec![
            r.quantity.clone(),
            r.form.into(),
            q.numer().to_string(),
            q.denom().to_string(),
            r.p.render_percent(d),
            r.p.is_exact().to_string(),
        ]);
    }
    Output::new(command, text, json, csv)
}

fn portfolio(g: &GlobalOpts, a: &PortfolioArgs, out: &mut impl Write) -> Res {
    let model = if a.doubles { TicketModel::Doubles } else { TicketModel::Unique };
    let s = &a.scheme;
    let v = a.tickets;
    let mut rows = Vec::new();
    let high = format!("at least one ticket with >= {} hits", s.t);
    match model {
        TicketModel::Unique => {
            rows.push(Row { quantity: high.clone(), form: "exact", p: prob_at_least_one_high_hit(s, v, model)? });
            rows.push(Row {
                quantity: high,
                form: "winner-power",
                p: prob_at_least_one_high_hit_with(s, v, Regime::WinnerPower)?,
            });
        }
        TicketModel::Doubles => {
            rows.push(Row { quantity: high, form: "exact", p: prob_at_least_one_high_hit(s, v, model)? });
        }
    }
    rows.push(Row { quantity: "jackpot".into(), form: "exact", p: prob_jackpot(s, v, model)? });
    if let Some(need) = a.at_least {
        require_unique(model, "--at-least")?;
        rows.push(Row {
            quantity: format!("at least {need} tickets with >= {} hits", s.t),
            form: "exact",
            p: prob_at_least_s_high_hits(s, need, v)?,
        });
    }
    if let (Some(hits), Some(m)) = (a.exact_hits, a.count) {
        require_unique(model, "--exact-hits")?;
        rows.push(Row {
            quantity: format!("exactly {m} tickets with exactly {hits} hits"),
            form: "exact",
            p: pmf_exact_hits(s, hits, m, v)?,
        });
    }
    let model_name = if a.doubles { "doubles" } else { "unique" };
    let title = format!("scheme {s}, {} {model_name} tickets", group(v));
    let json = json!({"scheme": scheme_json(s), "tickets": v, "model": model_name});
    emit(g, rows_output(g, "prob portfolio", title, json, &rows), out)
}

fn require_unique(model: TicketModel, flag: &str) -> Result<(), Failure> {
    if model == TicketModel::Doubles {
        return Err(Error::Unsupported(format!("{flag} is only available for unique tickets")).into());
    }
    Ok(())
}

fn approx_compare(g: &GlobalOpts, s: &Scheme, tickets: &[u64], out: &mut impl Write) -> Res {
    let d = g.decimals;
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut csv = vec![vec![
        "tickets".into(),
        "exact".into(),
        "ticket_power".into(),
        "winner_power".into(),
        "gap_ticket_power".into(),
        "gap_winner_power".into(),
    ]];
    for &v in tickets {
        let exact = prob_no_high_hit(s, v, Regime::Exact)?;
        let tp = prob_no_high_hit(s, v, Regime::TicketPower)?;
        let wp = prob_no_high_hit(s, v, Regime::WinnerPower)?;
        let (gt, gw) = (exact.abs_diff(&tp), exact.abs_diff(&wp));
        let pc = |p: &Probability| p.render_percent(d);
        rows.push(vec![group(v), pc(&exact), pc(&tp), pc(&wp), format!("{gt:.3e}"), format!("{gw:.3e}")]);
        csv.push(vec![v.to_string(), pc(&exact), pc(&tp), pc(&wp), format!("{gt:e}"), format!("{gw:e}")]);
        items.push(json!({
            "tickets": v,
            "exact": probability_json(&exact, d),
            "ticket_power": probability_json(&tp, d),
            "winner_power": probability_json(&wp, d),
            "gap_ticket_power": gt,
            "gap_winner_power": gw,
        }));
    }
    let text = format!(
        "scheme {s}: probability of no ticket with >= {} hits (percent)\n{}",
        s.t,
        table(&["v", "exact", "ticket-power", "winner-power", "|exact-ticket|", "|exact-winner|"], &rows)
    );
    let json = json!({"scheme": scheme_json(s), "rows": items});
    emit(g, Output::new("prob approx-compare", text, json, csv), out)
}

fn read_design(path: &Path, header: Option<&[u32]>) -> Result<Design, Failure> {
    let kind = header.map(DesignKind::from_fields).transpose()?;
    let parse = |r: Box<dyn io::BufRead>| match kind {
        Some(kind) => parse_design_with_kind(r, kind),
        None => parse_design(r),
    };
    let design = if path == Path::new("-") {
        parse(Box::new(io::stdin().lock()))?
    } else {
        let file = File::open(path).map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
        parse(Box::new(BufReader::new(file)))?
    };
    Ok(design)
}

fn kind_matches(kind: &DesignKind, want: KindArg) -> bool {
    kind.is_covering() == (want == KindArg::Covering)
}

fn design_verify(g: &GlobalOpts, a: &VerifyArgs, out: &mut impl Write) -> Res {
    let design = read_design(&a.file, a.header.as_deref())?;
    if let Some(want) = a.kind {
        if !kind_matches(&design.kind(), want) {
            return Err(Error::Invalid(format!("expected a {want:?} design, the header says {}", design.kind())).into());
        }
    }
    let cfg = VerifyConfig {
        witness_cap: a.witnesses,
        memory_cap_bits: a.memory_cap_bits,
        work_cap: a.work_cap,
        workers: g.workers,
    };
    let report = verify(&design, &cfg)?;
    let bound = match design.kind() {
        DesignKind::Covering { n, k, t } => Some(schonheim_bound(n, k, t)?),
        DesignKind::Lottery { .. } => None,
    };
    emit(g, verify_output(&report, bound.as_ref()), out)?;
    if !report.is_valid() {
        return Err(Failure {
            code: 1,
            kind: "invalid-design",
            message: format!("{} of {} targets uncovered", report.uncovered, report.total_targets),
        });
    }
    Ok(())
}

fn verify_output(r: &VerificationReport, bound: Option<&BigUint>) -> Output {
    let target = match r.kind {
        DesignKind::Covering { t, .. } => format!("{t}-subsets"),
        DesignKind::Lottery { p, .. } => format!("{p}-subsets"),
    };
    let method = match r.method {
        Method::RankBitset => "rank-bitset",
        Method::BruteForce => "brute-force",
    };
    let mut text = format!(
        "design {}: {} blocks ({} duplicates)\ntargets: {} {target}, covered {}, uncovered {}\nresult: {}\n",
        r.kind,
        group(r.blocks),
        group(r.duplicate_blocks),
        group(r.total_targets),
        group(r.covered),
        group(r.uncovered),
        if r.is_valid() { "VALID" } else { "NOT VALID" }
    );
    if let Some(b) = bound {
        text += &format!("Schonheim bound: {}\n", group(b));
    }
    text += &format!("method: {method}, {} marks, {:.3} s\n", group(r.marks), r.elapsed.as_secs_f64());
    for w in &r.witnesses {
        text += &format!("uncovered: {}\n", join(w));
    }
    let json = json!({
        "design": r.kind,
        "blocks": r.blocks,
        "duplicate_blocks": r.duplicate_blocks,
        "total_targets": r.total_targets,
        "covered": r.covered,
        "uncovered": r.uncovered,
        "valid": r.is_valid(),
        "witnesses": r.witnesses,
        "schonheim_bound": bound.map(|b| b.to_string()),
        "method": method,
        "marks": r.marks,
        "elapsed_seconds": r.elapsed.as_secs_f64(),
    });
    let mut csv = vec![vec!["uncovered_target".to_string()]];
    csv.extend(r.witnesses.iter().map(|w| vec![join(w)]));
    Output::new("design verify", text, json, csv)
}

fn join(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn schonheim(g: &GlobalOpts, n: u32, k: u32, t: u32, out: &mut impl Write) -> Res {
    let chain = schonheim_chain(n, k, t)?;
    let bound = chain.last().expect("non-empty chain").clone();
    let text = format!(
        "{bound}\nchain: {}\n",
        chain.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" -> ")
    );
    let json = json!({
        "n": n, "k": k, "t": t,
        "bound": bound.to_string(),
        "chain": chain.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    });
    let mut csv = vec![vec!["level".to_string(), "value".to_string()]];
    csv.extend(chain.iter().enumerate().map(|(i, x)| vec![(i + 1).to_string(), x.to_string()]));
    emit(g, Output::new("design schonheim", text, json, csv), out)
}

fn emit_design(design: &Design, path: Option<&Path>, out: &mut impl Write) -> Res {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            write_design(design, &mut w)?;
            w.flush()?;
        }
        None => write_design(design, &mut *out)?,
    }
    Ok(())
}

fn greedy(g: &GlobalOpts, a: &GreedyArgs, out: &mut impl Write) -> Res {
    let cfg = GreedyConfig {
        strategy: match a.sampled {
            Some(count) => CandidateStrategy::Sampled { count, seed: a.seed },
            None => CandidateStrategy::Exhaustive,
        },
        max_blocks: a.max_blocks,
        workers: g.workers,
    };
    let quiet = a.quiet;
    let result = greedy_cover_with_progress(a.n, a.k, a.t, &cfg, move |p| {
        if !quiet && (p.blocks % 1000 == 0 || p.covered == p.total) {
            eprintln!("progress: {} blocks, {}/{} covered", p.blocks, p.covered, p.total);
        }
    });
    let design = match result {
        Ok(d) => d,
        Err(Error::Construction { reason, partial }) => {
            if let Some(p) = &a.output {
                emit_design(&partial, Some(p), out)?;
            }
            return Err(Error::Construction { reason, partial }.into());
        }
        Err(e) => return Err(e.into()),
    };
    let bound = schonheim_bound(a.n, a.k, a.t)?;
    let summary = format!(
        "greedy ({}, {}, {}) cover: {} blocks, Schonheim bound {bound}",
        a.n,
        a.k,
        a.t,
        design.block_count()
    );
    match g.format {
        crate::render::Format::Text if a.output.is_none() => {
            if !quiet {
                eprintln!("{summary}");
            }
            emit_design(&design, None, out)
        }
        _ => {
            if let Some(p) = &a.output {
                emit_design(&design, Some(p), out)?;
            }
            let blocks: Vec<Vec<u8>> = design.blocks().map(<[u8]>::to_vec).collect();
            let json = json!({
                "design": design.kind(),
                "blocks": design.block_count(),
                "schonheim_bound": bound.to_string(),
                "output": a.output.as_ref().map(|p| p.display().to_string()),
                "block_list": if a.output.is_some() { Value::Null } else { json!(blocks) },
            });
            let mut csv = vec![(1..=a.k).map(|i| format!("x{i}")).collect::<Vec<_>>()];
            csv.extend(blocks.iter().map(|b| b.iter().map(u8::to_string).collect()));
            emit(g, Output::new("design greedy", summary + "\n", json, csv), out)
        }
    }
}

fn myth_pool(g: &GlobalOpts, s: &Scheme, n_star: u32, out: &mut impl Write) -> Res {
    let r = myth_comparison(s, n_star)?;
    let d = g.decimals;
    let pool = Probability::Exact(r.pool.clone());
    let rows = vec![
        Row {
            quantity: format!("at least {} winners inside the {n_star}-pool", s.t),
            form: "exact",
            p: pool,
        },
        Row {
            quantity: format!("{} distinct tickets over the field: >= {} hits", group(r.ticket_budget), s.t),
            form: "exact",
            p: r.full_field.clone(),
        },
        Row {
            quantity: format!("{} distinct tickets over the field: >= {} hits", group(r.ticket_budget), s.t),
            form: "winner-power",
            p: r.full_field_winner_power.clone(),
        },
    ];
    let title = format!(
        "pool of n* = {n_star} numbers, every ticket inside it: {} tickets\nfull field is {:.3}x as likely to give a high hit",
        group(r.ticket_budget),
        r.advantage()
    );
    let json = json!({
        "scheme": scheme_json(s),
        "n_star": n_star,
        "ticket_budget": r.ticket_budget,
        "pool": rational_json(&r.pool, d),
        "full_field": probability_json(&r.full_field, d),
        "full_field_winner_power": probability_json(&r.full_field_winner_power, d),
        "advantage": r.advantage(),
    });
    emit(g, rows_output(g, "myth pool", title, json, &rows), out)
}

fn myth_compare(g: &GlobalOpts, s: &Scheme, n_star: u32, cover_size: Option<u64>, out: &mut impl Write) -> Res {
    let size = cover_size
        .or_else(|| if *s == Scheme::LOTTO_6_49 { reference_pool_cover(n_star) } else { None })
        .ok_or_else(|| Error::Invalid(format!("no reference covering size for n* = {n_star}; pass --cover-size")))?;
    let r = pool_cover_comparison(s, n_star, size)?;
    let d = g.decimals;
    let rows = vec![
        Row {
            quantity: format!("{}-block cover of the {n_star}-pool: >= {} hits", group(size), s.t),
            form: "exact",
            p: Probability::Exact(r.pool.clone()),
        },
        Row {
            quantity: format!("{} distinct tickets over the field: >= {} hits", group(size), s.t),
            form: "exact",
            p: r.full_field.clone(),
        },
        Row {
            quantity: format!("{} distinct tickets over the field: >= {} hits", group(size), s.t),
            form: "winner-power",
            p: r.full_field_winner_power.clone(),
        },
    ];
    let title = format!("pool of n* = {n_star} numbers covered by {} blocks", group(size));
    let json = json!({
        "scheme": scheme_json(s),
        "n_star": n_star,
        "cover_size": size,
        "pool": rational_json(&r.pool, d),
        "full_field": probability_json(&r.full_field, d),
        "full_field_winner_power": probability_json(&r.full_field_winner_power, d),
    });
    emit(g, rows_output(g, "myth compare", title, json, &rows), out)
}

fn simulate(g: &GlobalOpts, a: &SimulateArgs, out: &mut impl Write) -> Res {
    let target = match a.target {
        TargetKind::AtLeastOne => SimTarget::AtLeastOneHigh,
        TargetKind::Jackpot => SimTarget::Jackpot,
        TargetKind::AtLeast => SimTarget::AtLeastSHigh(a.s),
        TargetKind::ExactHits => SimTarget::ExactHits { hits: a.hits, m: a.m },
    };
    let cfg = SimConfig {
        scheme: a.scheme,
        v: a.tickets,
        model: if a.doubles { TicketModel::Doubles } else { TicketModel::Unique },
        trials: a.trials,
        seed: a.seed,
        target,
        workers: g.workers,
    };
    let r = run_simulation(&cfg)?;
    let expected = expected_probability(&cfg).ok();
    let d = g.decimals;
    let (lo, hi) = r.wilson95;
    let pct = |x: f64| format!("{:.*}%", d as usize, 100.0 * x);
    let mut text = format!(
        "scheme {}, {} {} tickets, target {target:?}, seed {}\nfrequency: {}/{} = {}%\n95% Wilson interval: [{}, {}]\n",
        a.scheme,
        group(a.tickets),
        if a.doubles { "doubles" } else { "unique" },
        a.seed,
        r.successes,
        r.trials,
        r.frequency.render_percent(d),
        pct(lo),
        pct(hi)
    );
    if let Some(p) = &expected {
        let inside = r.contains(p.to_f64());
        text += &format!(
            "closed form: {}% ({})\n",
            p.render_percent(d),
            if inside { "inside the interval" } else { "outside the interval" }
        );
    }
    let json = json!({
        "scheme": scheme_json(&a.scheme),
        "tickets": a.tickets,
        "model": if a.doubles { "doubles" } else { "unique" },
        "target": format!("{target:?}"),
        "seed": a.seed,
        "trials": r.trials,
        "successes": r.successes,
        "frequency": rational_json(&r.frequency, d),
        "wilson95": [lo, hi],
        "expected": expected.as_ref().map(|p| probability_json(p, d)),
    });
    let csv = vec![
        vec!["seed".into(), "trials".into(), "successes".into(), "wilson_low".into(), "wilson_high".into()],
        vec![a.seed.to_string(), r.trials.to_string(), r.successes.to_string(), lo.to_string(), hi.to_string()],
    ];
    emit(g, Output::new("simulate", text, json, csv), out)
}

fn bench(
    g: &GlobalOpts,
    designs: &[std::path::PathBuf],
    s: &Scheme,
    blocks: Option<u64>,
    kind: KindArg,
    out: &mut impl Write,
) -> Res {
    let mut rows: Vec<(BenchRow, Option<bool>)> = Vec::new();
    if let Some(v) = blocks {
        let guarantee = if kind == KindArg::Covering { Guarantee::Covering } else { Guarantee::Lottery };
        rows.push((design_vs_random(s, format!("{} blocks", group(v)), v, guarantee)?, None));
    } else if designs.is_empty() {
        rows.extend(reference_table()?.into_iter().map(|r| (r, None)));
    } else {
        let cfg = VerifyConfig { workers: g.workers, ..VerifyConfig::default() };
        for path in designs {
            let design = read_design(path, None)?;
            let valid = verify(&design, &cfg)?.is_valid();
            let label = path.display().to_string();
            let row = design_vs_random(s, label, design.block_count() as u64, Guarantee::of(&design.kind()))?;
            rows.push((row, Some(valid)));
        }
    }
    let d = g.decimals;
    let pc = |p: &Probability| format!("{}%", p.render_percent(d));
    let mut text_rows = Vec::new();
    let mut items = Vec::new();
    let mut csv = vec![vec![
        "design".into(),
        "blocks".into(),
        "guarantee".into(),
        "at_least_one_exact".into(),
        "at_least_one_winner_power".into(),
        "jackpot".into(),
        "at_least_s".into(),
    ]];
    for (r, valid) in &rows {
        let guarantee = match (r.guarantee, valid) {
            (_, Some(false)) => "none (not valid)".to_string(),
            (Guarantee::Lottery, _) => format!(">= 1 with {} hits", s.t),
            (Guarantee::Covering, _) => format!("every {}-subset", s.t),
        };
        let s_col = r
            .at_least_s
            .as_ref()
            .map(|(need, p)| format!("{} (s={need})", pc(p)))
            .unwrap_or_else(|| "-".into());
        text_rows.push(vec![
            r.label.clone(),
            group(r.blocks),
            guarantee.clone(),
            pc(&r.at_least_one),
            pc(&r.at_least_one_winner_power),
            pc(&r.jackpot),
            s_col.clone(),
        ]);
        csv.push(vec![
            r.label.clone(),
            r.blocks.to_string(),
            guarantee.clone(),
            r.at_least_one.render_percent(d),
            r.at_least_one_winner_power.render_percent(d),
            r.jackpot.render_percent(d),
            r.at_least_s.as_ref().map(|(_, p)| p.render_percent(d)).unwrap_or_default(),
        ]);
        items.push(json!({
            "design": r.label,
            "blocks": r.blocks,
            "valid": valid,
            "guarantee": guarantee,
            "at_least_one": probability_json(&r.at_least_one, d),
            "at_least_one_winner_power": probability_json(&r.at_least_one_winner_power, d),
            "jackpot": probability_json(&r.jackpot, d),
            "at_least_s": r.at_least_s.as_ref().map(|(need, p)| json!({"s": need, "probability": probability_json(p, d)})),
        }));
    }
    let text = format!(
        "scheme {s}: design guarantee against the same number of random distinct tickets\n{}",
        table(
            &["design", "blocks", "guarantee", "random >=1 exact", "random >=1 winner-power", "random jackpot", "random >=s"],
            &text_rows
        )
    );
    let json = json!({"scheme": scheme_json(s), "rows": items});
    emit(g, Output::new("bench design-vs-random", text, json, csv), out)
}

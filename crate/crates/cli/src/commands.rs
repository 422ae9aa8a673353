use sseq_core::abgroup::Resolution;
use sseq_core::couple::{page_turn, Abutment, Differential, Slot, TriPage};
use sseq_core::serre::{
    build_bbgm_ss, build_bpgl_ss, build_sb_ss, ch2_severi_brauer, invert_n_check, solve_unknowns, vanishing_region_check, KnowledgeBase,
    SerreSS,
};
use sseq_core::steenrod::{ClassKind, CpMupRing};

use crate::config::{BrauerConfig, Command, InstanceConfig, RunConfig};
use crate::report::{Report, Status, Table};
use crate::Failure;

pub fn execute(command: Command, cfg: &RunConfig, hash: &str) -> Result<Report, Failure> {
    match command {
        Command::Pages => pages(cfg, hash),
        Command::Solve => solve(cfg, hash),
        Command::SbChow => {
            let Some(InstanceConfig::Sb(b)) = &cfg.instance else { unreachable!("validated") };
            let mut r = Report::new(command.name(), hash, sb_name(b));
            chow(cfg, b, &mut r)?;
            Ok(r)
        }
        Command::Torsion => torsion(cfg, hash),
    }
}

fn sb_name(b: &BrauerConfig) -> String {
    format!("SB(A), deg {} order {}", b.n, b.order)
}

fn solved(cfg: &RunConfig) -> Result<(SerreSS, KnowledgeBase), Failure> {
    let w = cfg.solve_window()?;
    let (ss, kb) = match cfg.instance {
        Some(InstanceConfig::Bpgl { n }) => build_bpgl_ss(n, cfg.field_model(), w)?,
        Some(InstanceConfig::Bbgm) => build_bbgm_ss(cfg.field_model(), w)?,
        _ => unreachable!("caller matched the instance"),
    };
    let kb = solve_unknowns(&ss, kb)?;
    Ok((ss, kb))
}

fn show_order(o: &num_bigint::BigUint) -> String {
    if *o == num_bigint::BigUint::from(0u32) {
        "∞".into()
    } else {
        o.to_string()
    }
}

fn log_kb(cfg: &RunConfig, kb: &KnowledgeBase, r: &mut Report) {
    for n in kb.notes() {
        r.note(n);
    }
    if cfg.verbosity > 0 {
        for (i, d) in kb.log().iter().enumerate() {
            r.log(format!("{i}: {d}"));
        }
    }
}

fn facts_table(title: String, kb: &KnowledgeBase, points: impl Iterator<Item = (i64, i64)>, r: &mut Report) {
    let mut t = Table::new(title, &["p", "q", "group", "rule", "step"]);
    for (p, q) in points {
        let slot = kb.slot(p, q);
        let step = kb.fact(p, q).and_then(|f| f.provenance);
        let rule = step.map_or("-".to_string(), |i| kb.log()[i].rule.to_string());
        if let Slot::Unknown(why) = &slot {
            r.note(format!("open: H^{{{p},{q}}}: {why}"));
            r.raise(Status::Ambiguous);
        }
        t.push(vec![p.to_string(), q.to_string(), slot.to_string(), rule, step.map_or("-".to_string(), |i| i.to_string())]);
    }
    r.tables.push(t);
}

fn solve(cfg: &RunConfig, hash: &str) -> Result<Report, Failure> {
    let w = &cfg.window;
    if let Some(InstanceConfig::Sb(b)) = &cfg.instance {
        let data = cfg.brauer_data(b)?;
        let inst = build_sb_ss(data, cfg.field_model(), (w.p_min, w.p_max), (w.q_min, w.q_max))?;
        let mut r = Report::new("solve", hash, sb_name(b));
        let seeded: Vec<(i64, i64)> = inst.kb.facts().map(|(k, _)| *k).collect();
        facts_table("H^{p,q}(X_A)".into(), &inst.kb, seeded.into_iter(), &mut r);
        log_kb(cfg, &inst.kb, &mut r);
        chow(cfg, b, &mut r)?;
        return Ok(r);
    }
    let (ss, kb) = solved(cfg)?;
    let name = ss.instance.name();
    let mut r = Report::new("solve", hash, &name);
    let points = (0..=w.q_max).flat_map(|q| (w.p_min..=w.p_max).map(move |p| (p, q)));
    facts_table(format!("H^{{p,q}}({name})"), &kb, points, &mut r);
    let mut classes = Table::new("classes", &["name", "p", "q", "order"]);
    for c in kb.classes() {
        classes.push(vec![c.name.clone(), c.at.0.to_string(), c.at.1.to_string(), show_order(&c.order)]);
    }
    r.tables.push(classes);
    checks(cfg, &ss, &kb, &mut r)?;
    log_kb(cfg, &kb, &mut r);
    Ok(r)
}

fn checks(cfg: &RunConfig, ss: &SerreSS, kb: &KnowledgeBase, r: &mut Report) -> Result<(), Failure> {
    let c = &cfg.checks;
    if !(c.vanishing || c.invert_n || c.abutment) {
        return Ok(());
    }
    let mut t = Table::new("checks", &["check", "checked", "failures", "undecided", "passed"]);
    let n = match cfg.instance {
        Some(InstanceConfig::Bpgl { n }) => Some(n),
        _ => None,
    };
    match (n, c.vanishing) {
        (Some(n), true) => {
            let v = vanishing_region_check(kb, n, &ss.window);
            check_row(r, &mut t, "vanishing", v.checked, v.nonzero.len(), v.undecided.len(), v.passed());
        }
        (None, true) => r.note("vanishing check skipped: it is stated for BPGL_n"),
        _ => {}
    }
    match (n, c.invert_n) {
        (Some(n), true) => {
            let v = invert_n_check(kb, n, &ss.field, &ss.window);
            check_row(r, &mut t, "invert-n", v.checked, v.mismatches.len(), v.undecided.len(), v.passed());
            for (at, got, want) in &v.mismatches {
                r.note(format!("invert-n mismatch at H^{{{},{}}}: {got} vs {want}", at.0, at.1));
            }
        }
        (None, true) => r.note("invert-n check skipped: it is stated for BPGL_n"),
        _ => {}
    }
    if c.abutment {
        let reports = ss.verify_abutment(kb)?;
        let checked = reports.len();
        let failures = reports.iter().filter(|f| f.declared_match == Some(false) && matches!(f.abutment, Abutment::Resolved(_))).count();
        let undecided = reports.iter().filter(|f| f.declared_match != Some(true)).count() - failures;
        for f in reports.iter().filter(|f| f.declared_match != Some(true)) {
            r.note(format!("abutment at ({}, {}) not confirmed: {}", f.p, f.q, show_abutment(&f.abutment)));
        }
        check_row(r, &mut t, "abutment", checked, failures, undecided, failures == 0 && undecided == 0);
    }
    r.tables.push(t);
    Ok(())
}

fn show_abutment(a: &Abutment) -> String {
    match a {
        Abutment::Resolved(g) => g.to_string(),
        Abutment::Ambiguous(p) => format!("ambiguous: {p}"),
        Abutment::Undetermined(why) => format!("undetermined: {why}"),
    }
}

fn check_row(r: &mut Report, t: &mut Table, name: &str, checked: usize, failures: usize, undecided: usize, passed: bool) {
    if !passed {
        r.raise(if failures > 0 { Status::Inconsistent } else { Status::Ambiguous });
    }
    t.push(vec![name.into(), checked.to_string(), failures.to_string(), undecided.to_string(), if passed { "yes" } else { "no" }.into()]);
}

fn chow(cfg: &RunConfig, b: &BrauerConfig, r: &mut Report) -> Result<(), Failure> {
    let data = cfg.brauer_data(b)?;
    let ch = ch2_severi_brauer(&data, &cfg.field_model())?;
    let mut pieces = Table::new("CH^2 filtration", &["s", "piece", "settles_on"]);
    for (s, v, at) in &ch.pieces {
        pieces.push(vec![s.to_string(), v.to_string(), at.to_string()]);
    }
    r.tables.push(pieces);
    let show = show_abutment;
    let mut t = Table::new("CH^2", &["item", "value"]);
    t.push(vec!["sub".into(), ch.sub.to_string()]);
    t.push(vec!["quotient".into(), show(&ch.quot)]);
    t.push(vec![
        "resolution".into(),
        match &ch.resolution {
            Some(Resolution::Resolved { rule, .. }) => rule.to_string(),
            Some(Resolution::Ambiguous(_)) => "ambiguous".into(),
            None => "-".into(),
        },
    ]);
    t.push(vec!["group".into(), show(&ch.group)]);
    t.push(vec!["sequence".into(), ch.sequence.clone()]);
    r.tables.push(t);
    if !matches!(ch.group, Abutment::Resolved(_)) {
        r.raise(Status::Ambiguous);
    }
    Ok(())
}

fn point(x: (i64, i64, i64)) -> String {
    format!("({},{},{})", x.0, x.1, x.2)
}

/// One table per page, `E_1` up to the page where every differential has
/// left the filtration range. Only columns `p` in `shown` are printed.
fn render_pages(mut page: TriPage, last: u32, shown: (i64, i64), r: &mut Report) -> Result<(), Failure> {
    loop {
        let final_page = page.r >= last;
        let label = if final_page { "∞".to_string() } else { page.r.to_string() };
        let mut t = Table::new(format!("E_{label}"), &["p", "q", "s", "entry", "d", "target", "note"]);
        for (x, e) in page.support().into_iter().filter(|(x, _)| (shown.0..=shown.1).contains(&x.0)) {
            let (d, target, note) = if final_page {
                ("-".to_string(), "-".to_string(), String::new())
            } else {
                match page.differential(x) {
                    Differential::Known(h) if h.is_evidently_zero() => ("0".into(), "-".into(), String::new()),
                    Differential::Known(h) => {
                        let note = h
                            .to_concrete()
                            .ok()
                            .and_then(|c| c.image().group.order())
                            .filter(|m| *m > num_bigint::BigUint::from(1u32))
                            .map_or(String::new(), |m| format!("ker d_{} has index {m}", page.r));
                        (h.rule.to_string(), point(page.target_of(x)), note)
                    }
                    Differential::Unknown(_) => ("?".into(), point(page.target_of(x)), String::new()),
                }
            };
            t.push(vec![x.0.to_string(), x.1.to_string(), x.2.to_string(), e.to_string(), d, target, note]);
        }
        r.tables.push(t);
        if final_page {
            return Ok(());
        }
        page = page_turn(&page)?;
    }
}

fn pages(cfg: &RunConfig, hash: &str) -> Result<Report, Failure> {
    let w = &cfg.window;
    if let Some(InstanceConfig::Sb(b)) = &cfg.instance {
        let data = cfg.brauer_data(b)?;
        // Differentials into the window start up to `n` columns to its left.
        let margin = b.n as i64;
        let inst = build_sb_ss(data, cfg.field_model(), (w.p_min - margin, w.p_max + margin), (w.q_min, w.q_max))?;
        let mut r = Report::new("pages", hash, sb_name(b));
        if inst.page.is_degenerate() {
            r.note("every d_1 is zero: the sequence degenerates at E_1");
        }
        render_pages(inst.page, b.n + 1, (w.p_min, w.p_max), &mut r)?;
        return Ok(r);
    }
    let (ss, kb) = solved(cfg)?;
    let mut r = Report::new("pages", hash, ss.instance.name());
    for (at, why) in kb.open_slots() {
        r.note(format!("open: H^{{{},{}}}: {why}", at.0, at.1));
    }
    render_pages(ss.page_from(&kb), w.q_max as u32 + 2, (w.p_min, w.p_max), &mut r)?;
    log_kb(cfg, &kb, &mut r);
    Ok(r)
}

fn odd_prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            if d != 2 {
                out.push(d);
            }
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 2 {
        out.push(n);
    }
    out
}

fn torsion(cfg: &RunConfig, hash: &str) -> Result<Report, Failure> {
    let t = cfg.torsion.as_ref().expect("validated");
    let primes = match (&t.primes, t.n) {
        (Some(ps), _) => ps.clone(),
        (None, Some(n)) => odd_prime_divisors(n),
        (None, None) => unreachable!("validated"),
    };
    let name = match t.n {
        Some(n) => format!("BPGL_{n}, odd primes {primes:?}"),
        None => format!("primes {primes:?}"),
    };
    let mut r = Report::new("torsion", hash, name);
    if primes.is_empty() {
        r.note(format!("n = {} has no odd prime divisor; there is nothing to compute", t.n.unwrap_or(0)));
    }
    let mut table = Table::new("torsion classes", &["class", "p", "k", "element", "weight", "degree", "nonzero", "tau_free", "tau_checked_to", "closed_form"]);
    for &p in &primes {
        let ring = CpMupRing::new(p)?;
        for k in 0..=t.k_max {
            for kind in [ClassKind::Z, ClassKind::Y, ClassKind::Upsilon] {
                match ring.torsion_class_image(kind, k, t.max_degree) {
                    Ok(c) => {
                        let matches = c.element == ring.closed_form(kind, k);
                        if !c.certificate.passed() || !matches {
                            r.raise(Status::Inconsistent);
                        }
                        let yes = |b: bool| if b { "yes" } else { "no" }.to_string();
                        table.push(vec![
                            kind.to_string(),
                            p.to_string(),
                            k.to_string(),
                            ring.show(&c.element),
                            c.degree.q.to_string(),
                            c.degree.p.to_string(),
                            yes(c.certificate.nonzero),
                            yes(c.certificate.tau_free),
                            c.certificate.tau_checked_to.to_string(),
                            yes(matches),
                        ]);
                    }
                    Err(sseq_core::Error::OutOfWindow(why)) => r.note(format!("skipped: {why}")),
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    r.tables.push(table);
    if t.n.is_some_and(|n| n % 2 == 0 && !primes.is_empty()) {
        r.note("the prime 2 is outside this computation; only the odd primes dividing n are reported");
    }
    Ok(r)
}

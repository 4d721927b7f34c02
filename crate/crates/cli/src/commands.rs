use std::fmt::Display;
use std::path::Path;

use serde_json::{json, Value};
use submax_core::jet::fields::{is_symmetry, parse_fields, span_report};
use submax_core::jet::invariants::{c_class, wilczynski};
use submax_core::jet::{minus_model_symmetries, OdeSystem};
use submax_core::liealg::{AlgebraParams, GVector, LieAlgebra};
use submax_core::linalg::Echelon;
use submax_core::lwv::{annihilator_basis, closed_form_lwv, solve_lwv, verify_harmonic, ModuleId};
use submax_core::models::{build_model, closed_form_params, solve_model_params, Branch};
use submax_core::reproduce::{run_criterion, CRITERIA};
use submax_core::scalar::to_pq;
use submax_core::tanaka::{
    annihilator, is_prolongation_rigid, submax_bound, submax_bound_computed,
};

use crate::args::{Cli, Command, Global, Grid, OdeSource};
use crate::output::{table, Outcome};

/// Usage-level failure: bad arguments, unreadable input, incompatible request.
pub type Usage = String;

fn usage(e: impl Display) -> Usage {
    e.to_string()
}

pub fn run(cli: &Cli) -> Result<Outcome, Usage> {
    let g = &cli.global;
    match &cli.command {
        Command::Structure(grid) => structure(&cells(g, grid)?),
        Command::Lwv { module, grid } => lwv(*module, &compatible(*module, cells(g, grid)?)?),
        Command::Ann { module, grid } => ann(*module, &compatible(*module, cells(g, grid)?)?),
        Command::Dims {
            grid,
            module,
            verify,
        } => dims(&cells(g, grid)?, *module, *verify),
        Command::Model {
            module,
            grid,
            branch,
            solve_params,
            verify,
        } => model(
            *module,
            &compatible(*module, cells(g, grid)?)?,
            *branch,
            *solve_params,
            *verify,
        ),
        Command::Invariants { source } => invariants(g, source),
        Command::Symmetry { source, fields } => symmetry(g, source, fields.as_deref()),
        Command::ReproducePaper { criteria } => reproduce(criteria),
    }
}

fn check_bounds(g: &Global, n: usize, m: usize) -> Result<AlgebraParams, Usage> {
    if n > g.max_n || m > g.max_m {
        return Err(format!(
            "n={n}, m={m} exceeds the limits n <= {}, m <= {} (raise with --max-n/--max-m)",
            g.max_n, g.max_m
        ));
    }
    AlgebraParams::new(n, m).map_err(usage)
}

fn cells(g: &Global, grid: &Grid) -> Result<Vec<AlgebraParams>, Usage> {
    let mut out = Vec::new();
    for n in grid.n.0.clone() {
        for m in grid.m.0.clone() {
            out.push(check_bounds(g, n, m)?);
        }
    }
    Ok(out)
}

/// Drops cells where the module does not exist; errors if none remain.
fn compatible(id: ModuleId, cells: Vec<AlgebraParams>) -> Result<Vec<AlgebraParams>, Usage> {
    let first = cells.first().copied();
    let kept: Vec<_> = cells.into_iter().filter(|p| id.supports(p.n)).collect();
    match (kept.is_empty(), first) {
        (true, Some(p)) => Err(id.check(p).err().map(usage).unwrap_or_default()),
        (true, None) => Err("no cells requested".into()),
        _ => Ok(kept),
    }
}

fn alg(p: AlgebraParams) -> LieAlgebra {
    LieAlgebra::new(p)
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn structure(cells: &[AlgebraParams]) -> Result<Outcome, Usage> {
    let mut results = Vec::new();
    let mut rows = Vec::new();
    for &p in cells {
        let r = alg(p).check_structure();
        results.push(json!({
            "n": p.n,
            "m": p.m,
            "dim": r.dim,
            "expected_dim": r.expected_dim,
            "passed": r.passed(),
            "violations": r.violations,
        }));
        rows.push(vec![
            p.n.to_string(),
            p.m.to_string(),
            r.dim.to_string(),
            r.expected_dim.to_string(),
            r.violations.len().to_string(),
            yes(r.passed()),
        ]);
    }
    Ok(finish(
        "structure",
        results,
        table(&["n", "m", "dim", "expected", "violations", "ok"], &rows),
    ))
}

fn finish(command: &'static str, results: Vec<Value>, text: Vec<String>) -> Outcome {
    let passed = results.iter().all(|r| r["passed"] != json!(false));
    Outcome {
        command,
        passed,
        results,
        text,
    }
}

fn lwv(id: ModuleId, cells: &[AlgebraParams]) -> Result<Outcome, Usage> {
    let mut results = Vec::new();
    let mut text = Vec::new();
    for &p in cells {
        let g = alg(p);
        let sol = solve_lwv(&g, id).map_err(usage)?;
        let closed = closed_form_lwv(&g, id).map_err(usage)?;
        let matches = sol.cochain.ratio_to(&closed.cochain).is_some();
        let checks = verify_harmonic(&sol).map_err(usage)?;
        let mut r = sol.to_json();
        r["matches_closed_form"] = json!(matches);
        r["checks"] = checks.to_json();
        r["passed"] = json!(matches && checks.passed());
        let mut line = format!(
            "{id} n={} m={}: closed form {}, harmonic checks {}",
            p.n,
            p.m,
            if matches { "matches" } else { "DIFFERS" },
            if checks.passed() { "pass" } else { "FAIL" }
        );
        if let (Some(a), Some(b)) = (&sol.alpha, &sol.beta) {
            let ratio = to_pq(&(a / b));
            line.push_str(&format!(", alpha/beta = {ratio}"));
            r["alpha_over_beta"] = json!(ratio);
        }
        text.push(line);
        text.push(format!("  {}", sol.cochain));
        results.push(r);
    }
    Ok(finish("lwv", results, text))
}

fn same_span(a: &[GVector], b: &[GVector]) -> bool {
    let ech = |v: &[GVector]| {
        Echelon::from_vectors(v.iter().map(GVector::to_sparse).collect::<Vec<_>>().iter())
    };
    let (ea, eb) = (ech(a), ech(b));
    ea.rank() == eb.rank() && a.iter().all(|x| eb.contains(&x.to_sparse()))
}

fn ann(id: ModuleId, cells: &[AlgebraParams]) -> Result<Outcome, Usage> {
    let mut results = Vec::new();
    let mut text = Vec::new();
    for &p in cells {
        let g = alg(p);
        let phi = closed_form_lwv(&g, id).map_err(usage)?.cochain;
        let computed = annihilator(&g, &phi).map_err(usage)?;
        let listed = annihilator_basis(&g, id).map_err(usage)?;
        let equal = same_span(&computed, &listed);
        let strs = |v: &[GVector]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        results.push(json!({
            "module": id.label(),
            "n": p.n,
            "m": p.m,
            "dim": computed.len(),
            "computed": strs(&computed),
            "listed": strs(&listed),
            "passed": equal,
        }));
        text.push(format!(
            "{id} n={} m={}: dim {}, equals listed generators: {}",
            p.n,
            p.m,
            computed.len(),
            yes(equal)
        ));
        text.extend(strs(&computed).into_iter().map(|s| format!("  {s}")));
    }
    Ok(finish("ann", results, text))
}

fn dims(cells: &[AlgebraParams], only: Option<ModuleId>, verify: bool) -> Result<Outcome, Usage> {
    let mut results = Vec::new();
    let mut rows = Vec::new();
    for &p in cells {
        for id in ModuleId::ALL {
            if only.is_some_and(|o| o != id) || !id.supports(p.n) {
                continue;
            }
            let bound = submax_bound(p, id).map_err(usage)?;
            let rigid = is_prolongation_rigid(p, id).map_err(usage)?;
            let mut r = json!({
                "module": id.label(),
                "n": p.n,
                "m": p.m,
                "max_dim": p.dim(),
                "bound": bound,
                "rigid": rigid,
            });
            let mut row = vec![
                id.label().to_string(),
                p.n.to_string(),
                p.m.to_string(),
                p.dim().to_string(),
                bound.to_string(),
                yes(rigid),
            ];
            if verify {
                let computed = submax_bound_computed(&alg(p), id).map_err(usage)?;
                r["computed_bound"] = json!(computed);
                r["passed"] = json!(computed == bound);
                row.push(computed.to_string());
            }
            results.push(r);
            rows.push(row);
        }
    }
    if results.is_empty() {
        return Err("no module is defined on the requested cells".into());
    }
    let mut header = vec!["module", "n", "m", "fM", "bound", "rigid"];
    if verify {
        header.push("computed");
    }
    Ok(finish("dims", results, table(&header, &rows)))
}

fn model(
    id: ModuleId,
    cells: &[AlgebraParams],
    branch: Option<Branch>,
    solve: bool,
    verify: bool,
) -> Result<Outcome, Usage> {
    let mut results = Vec::new();
    let mut text = Vec::new();
    for &p in cells {
        let g = alg(p);
        let m = build_model(&g, id, branch).map_err(usage)?;
        let mut r = m.to_json();
        let mut line = format!(
            "{id}{} n={} m={}: dim {}",
            m.branch.map(|b| format!(" {b}")).unwrap_or_default(),
            p.n,
            p.m,
            m.dim()
        );
        let mut passed = true;
        if solve && id == ModuleId::A2tr {
            let s = solve_model_params(&g).map_err(usage)?;
            let ok = s == closed_form_params(p).map_err(usage)?;
            passed &= ok;
            r["solved_parameters"] = s.to_json();
            r["parameters_match_closed_form"] = json!(ok);
            line.push_str(&format!(
                ", solved zeta={} mu1={} mu2={} mu3={}",
                to_pq(&s.zeta),
                to_pq(&s.mu1),
                to_pq(&s.mu2),
                to_pq(&s.mu3)
            ));
        }
        if verify {
            let rep = m.verify(&g).map_err(usage)?;
            passed &= rep.passed();
            line.push_str(&format!(
                ", verification {}",
                if rep.passed() { "pass" } else { "FAIL" }
            ));
            r["checks"] = rep.to_json();
        }
        r["passed"] = json!(passed);
        text.push(line);
        results.push(r);
    }
    Ok(finish("model", results, text))
}

fn load_ode(g: &Global, src: &OdeSource) -> Result<(OdeSystem, Option<ModuleId>), Usage> {
    if let Some(path) = &src.ode {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let ode = OdeSystem::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        check_bounds(g, ode.n(), ode.m())?;
        return Ok((ode, None));
    }
    let id = src.model.ok_or("either --ode or --model is required")?;
    let (n, m) = match (src.n, src.m) {
        (Some(n), Some(m)) => (n, m),
        _ => return Err("--model needs --n and --m".into()),
    };
    let p = check_bounds(g, n, m)?;
    Ok((
        OdeSystem::builtin(p, id, src.branch).map_err(usage)?,
        Some(id),
    ))
}

fn invariants(g: &Global, src: &OdeSource) -> Result<Outcome, Usage> {
    let (ode, expected) = load_ode(g, src)?;
    let space = ode.space();
    let cc = c_class(&ode).map_err(usage)?;
    let nonzero: Vec<&str> = cc
        .iter()
        .filter(|(_, i)| !i.is_zero())
        .map(|(id, _)| id.label())
        .collect();
    let mut text = vec![format!("n={} m={}", ode.n(), ode.m())];
    let mut verdicts = serde_json::Map::new();
    for (id, inv) in &cc {
        let v = if inv.is_zero() { "zero" } else { "nonzero" };
        verdicts.insert(id.label().to_string(), json!(v));
        text.push(format!("{id}: {v}"));
    }
    let w = wilczynski(&ode).map_err(usage)?;
    for e in &w.entries {
        text.push(format!(
            "{}: {}",
            e.name,
            if e.is_zero() { "zero" } else { "nonzero" }
        ));
    }
    if let Some(f) = w.normalized {
        text.push(format!("Laguerre-Forsyth normal form: {}", yes(f)));
    }
    let mut r = json!({
        "n": ode.n(),
        "m": ode.m(),
        "ode": ode.to_text(),
        "verdicts": Value::Object(verdicts),
        "nonvanishing": nonzero,
        "c_class": cc.iter().map(|(id, inv)| json!({"module": id.label(), "invariant": inv.to_json(space)})).collect::<Vec<_>>(),
        "wilczynski": w.to_json(space),
    });
    if let Some(id) = expected {
        let ok = nonzero == [id.label()];
        r["expected_branch"] = json!(id.label());
        r["passed"] = json!(ok);
        text.push(format!(
            "branch {id} is the only nonvanishing C-class invariant: {}",
            yes(ok)
        ));
    }
    Ok(finish("invariants", vec![r], text))
}

fn symmetry(g: &Global, src: &OdeSource, fields: Option<&Path>) -> Result<Outcome, Usage> {
    let (ode, _) = load_ode(g, src)?;
    let list = match fields {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            parse_fields(ode.m(), &text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => minus_model_symmetries(ode.m()),
    };
    let mut text = Vec::new();
    let mut entries = Vec::new();
    let mut all = true;
    for (i, f) in list.iter().enumerate() {
        let ok = is_symmetry(&ode, f).map_err(usage)?;
        all &= ok;
        let desc = f.to_text().replace('\n', "; ");
        text.push(format!(
            "{:>3}  {}  {desc}",
            i + 1,
            if ok { "symmetry    " } else { "NOT symmetry" }
        ));
        entries.push(json!({"index": i + 1, "field": f.to_text(), "symmetry": ok}));
    }
    let span = span_report(&list);
    text.push(format!(
        "span dimension {}, closed under brackets: {}",
        span.dim,
        yes(span.closed)
    ));
    let r = json!({
        "n": ode.n(),
        "m": ode.m(),
        "fields": entries,
        "all_symmetries": all,
        "span_dim": span.dim,
        "closed": span.closed,
        "open_pairs": span.open_pairs.iter().map(|&(a, b)| [a + 1, b + 1]).collect::<Vec<_>>(),
        "passed": all && span.closed,
    });
    Ok(finish("symmetry", vec![r], text))
}

fn reproduce(selected: &[u8]) -> Result<Outcome, Usage> {
    for id in selected {
        if !CRITERIA.iter().any(|c| c.0 == *id) {
            return Err(format!("unknown criterion {id}; valid ids are 1..=10"));
        }
    }
    let mut results = Vec::new();
    let mut text = Vec::new();
    for &(id, _, _) in &CRITERIA {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let r = run_criterion(id).expect("listed criterion");
        text.push(r.line());
        let mut j = r.to_json();
        j.as_object_mut().expect("object").remove("millis");
        results.push(j);
    }
    Ok(finish("reproduce-paper", results, text))
}

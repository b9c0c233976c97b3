//! One handler per subcommand.

use serde_json::{json, Value};

use qnil_core::bialgebra::{component_data, dual_word, gram_pairing, DualElement};
use qnil_core::cartan::{format_word, CartanData, Word};
use qnil_core::extremal::{extremal_monomial_check, verify_action, ActionContext};
use qnil_core::feigin::{
    feigin_eval, grouplike_series, kernel_basis, rational_inverse_with, torus_for_word, universal_check,
};
use qnil_core::skewform::{equivalent, s_matrix, skew_normal_form};
use qnil_core::torus::OreFraction;
use qnil_core::transition::{exp_identity_report, global_transition};
use qnil_core::typea::{build_x_matrix, check_relations, check_type_a, factorization_check, lemma_check};
use qnil_core::{Error, RatFun};

use crate::suite::run_suite;
use crate::{parse_list, CliError, Command, Report, RunConfig};

type Outcome = Result<Report, CliError>;

pub fn execute(config: &RunConfig, command: &Command) -> Outcome {
    if let Command::Suite { only } = command {
        return suite(only.as_deref());
    }
    let data = config.load_cartan()?;
    let words = &config.words;
    match command {
        Command::Pair { .. } => pair(&data, &words[0], &words[1]),
        Command::Component { gamma, .. } => component(&data, gamma),
        Command::Feigin { x, .. } => feigin(&data, &words[0], x),
        Command::Grouplike { degree, scalar, .. } => grouplike(&data, &words[0], *degree, scalar),
        Command::Kernel { gamma, .. } => kernel(&data, &words[0], gamma),
        Command::Universal { degree, .. } => universal(&data, &words[0], *degree),
        Command::Transition { .. } => transition(&data, &words[0], &words[1]),
        Command::VerifyIdentity { degree, scalar, .. } => verify_identity(&data, &words[0], &words[1], *degree, scalar),
        Command::Skewform { .. } => skewform(&data, &words[0], words.get(1)),
        Command::Extremal { .. } => {
            extremal(&data, &words[0], config.lambda.clone().unwrap_or_default(), config.degree)
        }
        Command::Typea { .. } => typea(&data, words.first(), config.degree),
        Command::Inverse { .. } => {
            let lambda = config.lambda.clone().unwrap_or_else(|| vec![1; data.rank()]);
            inverse(&data, &words[0], &lambda)
        }
        Command::Suite { .. } => unreachable!("handled above"),
    }
}

fn degree_arg(data: &CartanData, s: &str) -> Result<Vec<u32>, CliError> {
    let gamma: Vec<u32> = parse_list("gamma", s)?;
    if gamma.len() != data.rank() {
        return Err(CliError::Usage(format!("--gamma: expected {} entries, got {}", data.rank(), gamma.len())));
    }
    Ok(gamma)
}

fn scalars_arg(values: &[String], expected: usize) -> Result<Vec<RatFun>, CliError> {
    if values.is_empty() {
        return Ok(vec![RatFun::one(); expected]);
    }
    if values.len() != expected {
        return Err(CliError::Usage(format!("--scalar: expected {} values, got {}", expected, values.len())));
    }
    values
        .iter()
        .map(|s| s.parse::<RatFun>().map_err(|e| CliError::Usage(format!("--scalar: {}", e))))
        .collect()
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn pair(data: &CartanData, u: &Word, v: &Word) -> Outcome {
    let value = gram_pairing(data, u, v);
    Ok(Report {
        passed: true,
        text: value.to_string(),
        json: json!({ "u": format_word(u), "v": format_word(v), "pairing": value.to_string() }),
    })
}

fn component(data: &CartanData, gamma: &str) -> Outcome {
    let gamma = degree_arg(data, gamma)?;
    let comp = component_data(data, &gamma);
    let words: Vec<String> = comp.words.iter().map(|w| format_word(w)).collect();
    let basis: Vec<String> = comp.u_words().iter().map(|w| format_word(w)).collect();
    let radical = strings(&comp.radical_basis);
    let mut text = format!("degree {:?}: dimension {} ({} words)\nbasis: {}\n", gamma, comp.dim(), words.len(), basis.join("; "));
    if radical.is_empty() {
        text.push_str("radical: 0");
    } else {
        text.push_str(&format!("radical:\n  {}", radical.join("\n  ")));
    }
    Ok(Report {
        passed: true,
        text,
        json: json!({ "degree": gamma, "dimension": comp.dim(), "words": words, "basis": basis, "radical": radical }),
    })
}

/// `x<i>` names a generator; anything else is read as a word.
fn dual_arg(data: &CartanData, x: &str) -> Result<DualElement, CliError> {
    if let Some(rest) = x.strip_prefix('x') {
        let i: usize = rest.parse().map_err(|_| CliError::Usage(format!("--x: cannot parse '{}'", x)))?;
        if i == 0 || i > data.rank() {
            return Err(Error::IndexOutOfRange { index: i, rank: data.rank() }.into());
        }
        return Ok(DualElement::generator(data.rank(), i - 1));
    }
    let w = qnil_core::cartan::parse_word(x).map_err(|e| CliError::Usage(format!("--x: {}", e)))?;
    data.check_word(&w)?;
    Ok(dual_word(data, &w))
}

fn feigin(data: &CartanData, w: &Word, x: &str) -> Outcome {
    let element = dual_arg(data, x)?;
    let image = feigin_eval(data, &element, w);
    Ok(Report {
        passed: true,
        text: image.to_string(),
        json: json!({ "word": format_word(w), "x": x, "image": image.to_string() }),
    })
}

fn grouplike(data: &CartanData, w: &Word, degree: u32, scalars: &[String]) -> Outcome {
    let c = scalars_arg(scalars, w.len())?;
    let series = grouplike_series(data, w, &c, degree);
    let status = if series.grouplike { "OK" } else { "FAILED" };
    let mut text = format!("group-like: {} (heights 0..{})", status, degree);
    for f in &series.failures {
        text.push_str(&format!("\n  {}", f));
    }
    Ok(Report {
        passed: series.grouplike,
        text,
        json: json!({
            "word": format_word(w),
            "degree": degree,
            "scalars": strings(&c),
            "grouplike": series.grouplike,
            "failures": series.failures,
        }),
    })
}

fn kernel(data: &CartanData, w: &Word, gamma: &str) -> Outcome {
    let gamma = degree_arg(data, gamma)?;
    let k = kernel_basis(data, w, &gamma);
    let elements = strings(&k.elements);
    let mut text = format!("kernel in degree {:?}: dimension {} of {}", gamma, k.dim(), component_data(data, &gamma).dim());
    for e in &elements {
        text.push_str(&format!("\n  {}", e));
    }
    Ok(Report {
        passed: true,
        text,
        json: json!({ "word": format_word(w), "degree": gamma, "dimension": k.dim(), "elements": elements }),
    })
}

fn universal(data: &CartanData, w: &Word, degree: u32) -> Outcome {
    let ok = universal_check(data, w, degree);
    Ok(Report {
        passed: ok,
        text: format!("universal element: {} (heights 0..{})", if ok { "OK" } else { "FAILED" }, degree),
        json: json!({ "word": format_word(w), "degree": degree, "universal": ok }),
    })
}

fn transition(data: &CartanData, src: &Word, dst: &Word) -> Outcome {
    let map = global_transition(data, src, dst)?;
    let images = map.image_strings();
    let preserved = map.preserves_relations(data)?;
    let mut text: Vec<String> = images.iter().enumerate().map(|(k, p)| format!("p{} = {}", k + 1, p)).collect();
    text.push(format!("relations preserved: {}", if preserved { "yes" } else { "no" }));
    Ok(Report {
        passed: preserved,
        text: text.join("\n"),
        json: json!({
            "source": format_word(src),
            "target": format_word(dst),
            "images": images,
            "relations_preserved": preserved,
        }),
    })
}

fn verify_identity(data: &CartanData, src: &Word, dst: &Word, degree: u32, scalars: &[String]) -> Outcome {
    let c = scalars_arg(scalars, data.rank())?;
    let report = exp_identity_report(data, src, dst, degree, &c)?;
    let mismatches: Vec<Value> =
        report.mismatches.iter().map(|(g, j)| json!({ "degree": g, "basis_index": j })).collect();
    let mut text = format!(
        "exponential identity: {} (heights 0..{}, {} degrees, fraction cap {})",
        if report.holds() { "OK" } else { "FAILED" },
        degree,
        report.degrees_checked,
        report.ore_cap
    );
    for (g, j) in &report.mismatches {
        text.push_str(&format!("\n  degree {:?}, basis element {}: sides differ", g, j + 1));
    }
    Ok(Report {
        passed: report.holds(),
        text,
        json: json!({
            "source": format_word(src),
            "target": format_word(dst),
            "degree": degree,
            "scalars": strings(&c),
            "degrees_checked": report.degrees_checked,
            "ore_cap": report.ore_cap,
            "holds": report.holds(),
            "mismatches": mismatches,
        }),
    })
}

fn skewform(data: &CartanData, w: &Word, other: Option<&Word>) -> Outcome {
    let s = s_matrix(data, w);
    if let Some(o) = other {
        let e = equivalent(&s, &s_matrix(data, o))?;
        let summary = json!({ "equivalent": e.equivalent, "sl_equivalent": e.sl_equivalent });
        return Ok(Report {
            passed: true,
            text: summary.to_string(),
            json: json!({
                "word": format_word(w),
                "other": format_word(o),
                "equivalent": e.equivalent,
                "sl_equivalent": e.sl_equivalent,
                "witness": e.witness.map(|t| t.rows),
            }),
        });
    }
    let nf = skew_normal_form(&s);
    let summary = json!({ "divisors": nf.divisors.divisors, "rank": nf.rank() });
    Ok(Report {
        passed: true,
        text: summary.to_string(),
        json: json!({
            "word": format_word(w),
            "matrix": s.entries(),
            "divisors": nf.divisors.divisors,
            "rank": nf.rank(),
            "pfaffian": nf.pfaffian(),
            "transform": nf.transform.rows,
            "block": nf.block,
            "antidiagonal": nf.antidiagonal.map(|a| json!({ "transform": a.transform.rows, "matrix": a.matrix })),
        }),
    })
}

fn extremal(data: &CartanData, w: &Word, lambda: Vec<i64>, relations: Option<u32>) -> Outcome {
    let ctx = ActionContext::new(data.clone(), lambda.clone())?;
    let check = extremal_monomial_check(&ctx, w)?;
    let mut passed = check.passed();
    let mut text = format!(
        "image of v({}) = ({}) t^{:?}\nweight sequence {:?}; exponent vector unique: {}\nextremal monomial: {}",
        check.word,
        check.scalar,
        check.exponents,
        check.weight_sequence,
        if check.unique { "yes" } else { "no" },
        if check.passed() { "OK" } else { "FAILED" }
    );
    let mut json = json!({
        "word": check.word,
        "lambda": lambda,
        "scalar": check.scalar.to_string(),
        "exponents": check.exponents,
        "weight_sequence": check.weight_sequence,
        "unique": check.unique,
        "monomial": check.passed(),
    });
    if let Some(h) = relations {
        let report = verify_action(&ctx, h);
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.relation.as_str()).collect();
        passed &= failed.is_empty();
        text.push_str(&format!(
            "\naction relations: {} ({} checks through height {})",
            if failed.is_empty() { "OK" } else { "FAILED" },
            report.checks.len(),
            h
        ));
        for f in &failed {
            text.push_str(&format!("\n  {}", f));
        }
        json["relations"] = json!({ "height": h, "checks": report.checks.len(), "failed": failed });
    }
    Ok(Report { passed, text, json })
}

fn typea(data: &CartanData, w: Option<&Word>, degree: Option<u32>) -> Outcome {
    check_type_a(data)?;
    let n = data.rank() + 1;
    let x = build_x_matrix(data)?;
    let relations = check_relations(data, &x);
    let failed: Vec<&str> = relations.iter().filter(|c| !c.passed).map(|c| c.relation.as_str()).collect();
    let mut passed = failed.is_empty();
    let mut lines = vec![format!(
        "relations: {} ({} checks, n = {})",
        if failed.is_empty() { "OK" } else { "FAILED" },
        relations.len(),
        n
    )];
    lines.extend(failed.iter().map(|f| format!("  {}", f)));
    let mut json = json!({ "n": n, "relations": relations.len(), "failed_relations": failed });
    if let Some(w) = w {
        let ok = factorization_check(data, w, n)?;
        passed &= ok;
        lines.push(format!("factorization along {}: {}", format_word(w), if ok { "OK" } else { "FAILED" }));
        json["word"] = json!(format_word(w));
        json["factorization"] = json!(ok);
    }
    if let Some(h) = degree {
        let ok = lemma_check(data, h)?;
        passed &= ok;
        lines.push(format!("pushed universal element: {} (heights 0..{})", if ok { "OK" } else { "FAILED" }, h));
        json["degree"] = json!(h);
        json["pushed_universal"] = json!(ok);
    }
    Ok(Report { passed, text: lines.join("\n"), json })
}

fn inverse(data: &CartanData, w: &Word, lambda: &[i64]) -> Outcome {
    let formulas = rational_inverse_with(data, w, lambda)?;
    let skew = torus_for_word(data, w);
    let mut passed = true;
    let mut lines = Vec::new();
    let mut entries = Vec::new();
    for f in &formulas {
        let got = f.tree.evaluate(data, w)?;
        let ok = got.equiv(&OreFraction::var(&skew, f.index))?;
        passed &= ok;
        lines.push(format!(
            "t{}: scalar {}, exponents {:?}, {} nodes, reproduced: {}",
            f.index + 1,
            f.scalar,
            f.exponents,
            f.tree.size(),
            if ok { "yes" } else { "no" }
        ));
        entries.push(json!({
            "generator": f.index + 1,
            "scalar": f.scalar.to_string(),
            "exponents": f.exponents,
            "nodes": f.tree.size(),
            "reproduced": ok,
        }));
    }
    Ok(Report {
        passed,
        text: lines.join("\n"),
        json: json!({ "word": format_word(w), "lambda": lambda, "generators": entries }),
    })
}

fn suite(only: Option<&str>) -> Outcome {
    let ids: Vec<u32> = only.map(|s| parse_list("only", s)).transpose()?.unwrap_or_default();
    let known: Vec<u32> = crate::suite::criteria().iter().map(|c| c.id).collect();
    if let Some(bad) = ids.iter().find(|i| !known.contains(i)) {
        return Err(CliError::Usage(format!("--only: no criterion {}", bad)));
    }
    let results = run_suite(&ids);
    let passed = results.iter().filter(|r| r.passed).count();
    let mut lines: Vec<String> = results
        .iter()
        .map(|r| format!("criterion {:>2} {} {}: {}", r.id, if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail))
        .collect();
    lines.push(format!("{} of {} criteria passed", passed, results.len()));
    Ok(Report {
        passed: passed == results.len(),
        text: lines.join("\n"),
        json: json!({ "criteria": results, "passed": passed, "total": results.len() }),
    })
}

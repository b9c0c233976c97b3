use qnil_cli::suite::run_suite;

fn main() {
    let results = run_suite(&[]);
    let mut failed = 0;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let timing = if r.seconds > r.budget as f64 {
            format!("{:.1}s, over the {}s budget", r.seconds, r.budget)
        } else {
            format!("{:.1}s", r.seconds)
        };
        println!("criterion {:>2} {} {} ({}): {}", r.id, status, r.name, timing, r.detail);
        if !r.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

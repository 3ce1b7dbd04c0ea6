use std::io::Write;

use torsionlab::suite;

#[test]
fn acceptance_criteria() {
    let outcomes = suite::run_all();
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    for o in &outcomes {
        writeln!(out, "{}", o.line()).unwrap();
        for d in &o.details {
            writeln!(out, "        {d}").unwrap();
        }
    }
    drop(out);
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

//! Runs every acceptance criterion and prints one line per criterion.
//! Fails if any criterion fails.

use sigma_cli::suite;

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for id in 1..=13 {
        let r = suite::run(id, 1);
        println!("{}", r.line());
        if !r.pass {
            for d in &r.details {
                println!("    {d}");
            }
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

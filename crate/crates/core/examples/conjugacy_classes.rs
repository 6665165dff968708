//! Counting conjugacy classes of main cardioids three ways.
//!
//! cargo run --example conjugacy_classes

use checkerboard::classes::{burnside_fix_counts, class_report};

fn main() -> checkerboard::Result<()> {
    for (n, d) in [(13, 7), (11, 4), (3, 3), (4, 3)] {
        let report = class_report(n, d)?;
        let fixes: Vec<usize> = burnside_fix_counts(n, d)?.into_iter().map(|(_, f)| f).collect();
        println!(
            "n={n:>2} d={d}: g={} a={} classes={} fix counts {:?}\n       {:?}",
            report.g, report.a, report.count_closed_form, fixes, report.classes
        );
    }
    Ok(())
}

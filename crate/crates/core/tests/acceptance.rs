use orthoreal::reality::SearchOptions;
use orthoreal::verify::{self, Budget, CRITERIA};

/// Criteria that fail on their literal statement; see the census of Ω⁺(6,2),
/// whose elements of order 7 meet the strong-reality condition without being real.
const KNOWN_FAILURES: [u8; 1] = [4];

fn main() {
    let opts = SearchOptions::default();
    let mut unexpected = Vec::new();
    for &id in &CRITERIA {
        let r = verify::run_criterion(id, Budget::Desk, &opts);
        println!(
            "criterion {:>2} {:<40} {} ({:.1}s) {}",
            r.id,
            r.label,
            if r.passed { "PASS" } else { "FAIL" },
            r.seconds,
            r.detail
        );
        if r.passed == KNOWN_FAILURES.contains(&id) {
            unexpected.push(id);
        }
        // the failure must be exactly the two classes of 7-cycles in Ω⁺(6,2)
        if id == 4
            && !r.passed
            && !(r.detail.contains("Omega-(6,2) (25920 elements, 20 classes): 0 mismatched")
                && r.detail.contains("Omega+(6,2) (20160 elements, 14 classes): 2 mismatched classes: order 7 size 2880 real=false"))
        {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria with unexpected outcome: {unexpected:?}");
        std::process::exit(1);
    }
    println!("acceptance: {} of {} criteria pass; expected failures {KNOWN_FAILURES:?}", CRITERIA.len() - KNOWN_FAILURES.len(), CRITERIA.len());
}

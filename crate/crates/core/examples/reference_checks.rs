//! Runs the reference assertions for all built-in fixtures and prints the
//! table; the same suite backs `capreq paper-examples`.

use capreq::checks::run_checks;

fn main() {
    let summary = run_checks(None);
    print!("{}", summary.table());
    if !summary.all_passed() {
        std::process::exit(1);
    }
}

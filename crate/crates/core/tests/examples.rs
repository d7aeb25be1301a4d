//! Every program under `examples/` runs to completion.

#[allow(dead_code)]
#[path = "../examples/discrepancy.rs"]
mod discrepancy;

#[test]
fn discrepancy_runs() {
    discrepancy::run_example().expect("example runs");
}

#[allow(dead_code)]
#[path = "../examples/table.rs"]
mod table;

#[test]
fn table_runs() {
    table::run_example().expect("example runs");
}

#[allow(dead_code)]
#[path = "../examples/census.rs"]
mod census;

#[test]
fn census_runs() {
    census::run_example().expect("example runs");
}

#[allow(dead_code)]
#[path = "../examples/fluctuation.rs"]
mod fluctuation;

#[test]
fn fluctuation_runs() {
    fluctuation::run_example().expect("example runs");
}

#[allow(dead_code)]
#[path = "../examples/reversal.rs"]
mod reversal;

#[test]
fn reversal_runs() {
    reversal::run_example().expect("example runs");
}

#[allow(dead_code)]
#[path = "../examples/stern.rs"]
mod stern;

#[test]
fn stern_runs() {
    stern::run_example().expect("example runs");
}

#[allow(dead_code)]
#[path = "../examples/clt.rs"]
mod clt;

#[test]
fn clt_runs() {
    clt::run_example().expect("example runs");
}

#[allow(dead_code)]
#[path = "../examples/certified.rs"]
mod certified;

#[test]
fn certified_runs() {
    certified::run_example().expect("example runs");
}

//! Query counts of the three routes across temperatures, as CSV.

use fourier_qsp::approx::compare::to_csv;
use fourier_qsp::approx::{compare_methods, crossover_beta, ApproxOptions};

fn main() {
    let betas = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0];
    let eps_list = [1e-2, 1e-4];
    let rows = compare_methods(&betas, &eps_list, &ApproxOptions::default());
    print!("{}", to_csv(&rows));
    for note in rows.iter().flat_map(|r| r.notes()) {
        println!("# {note}");
    }
    for eps in eps_list {
        println!("# eps = {eps}: analytic beats the Taylor route from beta = {:?}", crossover_beta(&rows, eps));
    }
}

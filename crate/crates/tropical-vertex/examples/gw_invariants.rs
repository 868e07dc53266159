// Relative invariants read off the slope-(1,2) ray of the completed matrix
// seed, the degeneration formula for the class the matrix part cannot see,
// and the tropical re-count.

use tropical_vertex::cli::{invariant_chain, summary_line};
use tropical_vertex::coeff::Coeff;
use tropical_vertex::gw::GwSeed;
use tropical_vertex::lattice::LatticeVector;
use tropical_vertex::perturbation::{complete_by_perturbation, matrix_two_line_example};
use tropical_vertex::Result;

pub fn run_example() -> Result<String> {
    let (std, _) = matrix_two_line_example();
    let seed = GwSeed::new(
        std.ring(),
        vec![(LatticeVector::new(0, 1), Coeff::elementary(2, 0, 1)), (LatticeVector::new(1, 0), Coeff::zero(2))],
    )?;
    let done = complete_by_perturbation(&std, 7)?;
    let chain = invariant_chain(&seed, &done, LatticeVector::new(1, 2), 7)?;
    let mut out = summary_line(&chain, &seed.directions());
    out.push('\n');
    out.push_str(&chain.table.render());
    for (w, n) in &chain.degenerate {
        out.push_str(&format!("degeneration: {} -> {}\n", tropical_vertex::gw::render_class(w), n));
    }
    out.push_str(&format!("tropical re-count agrees: {}\n", chain.ok()));
    Ok(out)
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example().expect("invariant chain"));
}

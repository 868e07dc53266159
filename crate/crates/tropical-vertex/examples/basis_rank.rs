// Span of the relative-invariant generating vectors for small line
// configurations: rank, kernel relations and witness monomials.

use tropical_vertex::gw::analyze_basis;
use tropical_vertex::Result;

pub fn run_example() -> Result<String> {
    let mut out = String::new();
    for (ell, target) in [((1, 1), (2, 2)), ((1, 1), (2, 4)), ((2, 2), (2, 2)), ((2, 2), (2, 4))] {
        let a = analyze_basis(ell.0, ell.1, target)?;
        out.push_str(&a.render());
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example().expect("basis analysis"));
}

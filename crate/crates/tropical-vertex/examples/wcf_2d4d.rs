// The two worked 2d-4d wall-crossing identities checked in the groupoid
// ring, with the scattering round trip and the collapsed adjoint series.

use tropical_vertex::wcf::{adjoint_series, example_k_s, example_s_s, render_report, round_trip, verify_wcf};
use tropical_vertex::Result;

pub fn run_example() -> Result<String> {
    let mut out = String::new();
    for (name, (d, lhs, rhs)) in [("K S = S S' K", example_k_s(6)), ("S S = S S' S", example_s_s(1, 1, 4))] {
        let rep = verify_wcf(&d, &lhs, &rhs, &d.generators(1));
        let (rays, same) = round_trip(&d, &lhs, &rhs)?;
        let rays: Vec<String> = rays.iter().map(|f| f.to_string()).collect();
        out.push_str(&format!("{name}: {} to order {}; new rays [{}], match {same}\n", render_report(&rep), d.order, rays.join(", ")));
    }
    let a = adjoint_series(6)?;
    out.push_str(&format!("adjoint series collapses: {}\n", a.holds()));
    Ok(out)
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example().expect("wall-crossing identities"));
}

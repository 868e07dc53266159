// Counts rational tropical curves with prescribed ends by scattering and
// by brute-force enumeration of trees.

use tropical_vertex::cli::tropical_table;
use tropical_vertex::gw::render_class;
use tropical_vertex::lattice::LatticeVector;
use tropical_vertex::rational::fmt_q;
use tropical_vertex::Result;

pub fn run_example() -> Result<String> {
    let m = vec![LatticeVector::new(1, 0), LatticeVector::new(0, 1)];
    let mut out = String::new();
    for p in [vec![2, 1], vec![2, 2], vec![2, 4]] {
        out.push_str(&format!("P = {p:?}\n"));
        for r in tropical_table(p, m.clone(), 7)? {
            let oracle = r.oracle.map_or("-".into(), |o| o.to_string());
            out.push_str(&format!(
                "  {}: N^trop = {}, oracle = {oracle}, N_0,w = {}\n",
                render_class(&r.weights),
                r.n_trop,
                fmt_q(&r.relative)
            ));
        }
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example().expect("tropical counts"));
}

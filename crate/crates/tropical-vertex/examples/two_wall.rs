// Completes the two-wall seed `y -> y(1+tx)`, `x -> x/(1+ty)` and reads
// off the single new ray.

use tropical_vertex::io::{emit_diagram, parse_diagram, series_lines};
use tropical_vertex::Result;

pub const SEED: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/two_wall.toml"));

pub fn run_example() -> Result<String> {
    let seed = parse_diagram(SEED)?;
    let done = seed.complete_ks(2)?.canonical();
    let mut out = String::new();
    for w in done.new_rays(&seed) {
        let (_, f) = w.functions()?;
        out.push_str(&format!("new ray {} with f = {}\n", w.m, series_lines(&f).join(" + ")));
    }
    out.push_str(&format!("consistent to order 2: {}\n", done.is_consistent(2)?));
    out.push_str(&emit_diagram(&done));
    Ok(out)
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example().expect("two-wall completion"));
}

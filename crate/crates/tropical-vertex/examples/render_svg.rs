// Draws the perturbed matrix seed with one colour per slope.

use tropical_vertex::perturbation::{deform_with_offsets, matrix_two_line_example};
use tropical_vertex::svg::render_perturbed;
use tropical_vertex::Result;

pub fn run_example() -> Result<String> {
    let (std, offsets) = matrix_two_line_example();
    let done = deform_with_offsets(&std, &offsets)?.complete()?;
    Ok(render_perturbed(&done, "deformed matrix seed"))
}

#[allow(dead_code)]
fn main() {
    let svg = run_example().expect("render");
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(path, svg).expect("write svg"),
        None => print!("{svg}"),
    }
}

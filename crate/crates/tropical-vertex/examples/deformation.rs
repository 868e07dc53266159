// Deforms the two-line matrix seed into general position, scatters round
// by round and compares the asymptotic diagram with the direct completion.

use tropical_vertex::io::series_lines;
use tropical_vertex::perturbation::{deform_with_offsets, matrix_two_line_example};
use tropical_vertex::Result;

pub fn run_example() -> Result<String> {
    let (std, offsets) = matrix_two_line_example();
    let deformed = deform_with_offsets(&std, &offsets)?;
    let done = deformed.complete()?;
    done.check_genericity()?;
    let mut out = String::new();
    for g in 1..=done.rounds() {
        out.push_str(&format!("round {g}: {} rays\n", done.generation(g).len()));
    }
    let asymptotic = done.asymptotic()?.canonical();
    let direct = std.diagram().complete_ks(std.ring().max_degree())?.canonical();
    for w in asymptotic.new_rays(std.diagram()) {
        let (mat, sca) = w.functions()?;
        out.push_str(&format!("ray {}: F = {}, f = {}\n", w.m, series_lines(&mat).join(" + "), series_lines(&sca).join(" + ")));
    }
    out.push_str(&format!("agrees with direct completion: {}\n", asymptotic == direct));
    Ok(out)
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example().expect("deformation"));
}

//! The polar factor graph: girth, stopping trees, and which code bits hang
//! off the fewest information-rooted trees.

use polarfec::polar::{build_factor_graph, code_bit_tree_counts, girth, stopping_tree};
use polarfec::PolarCode;

fn main() -> polarfec::Result<()> {
    for n in 3..=7 {
        let g = build_factor_graph(n)?;
        println!(
            "N={:4}: {} variables, {} checks, {} edges, girth {:?}",
            g.len(),
            g.num_variables(),
            g.num_checks(),
            g.num_edges(),
            girth(&g)
        );
    }

    let code = PolarCode::from_info_set(3, [3, 5, 6, 7])?;
    let g = build_factor_graph(3)?;
    for &i in code.info_set() {
        let t = stopping_tree(&g, &code, i)?;
        println!("tree of u{i}: leaves {:?}", t.leaves);
    }
    println!("trees per code bit: {:?}", code_bit_tree_counts(&g, &code)?);
    Ok(())
}

//! Prints the curation report and golden diff of the DCASE initialization.

use taxograph::dcase;

fn main() {
    let data = dcase::DcaseData::embedded();
    let (graph, report) = dcase::init_from(&data, &dcase::thesaurus(), &dcase::rules());
    print!("{report}");
    let diff = dcase::golden_diff(&graph, &data.goldens);
    println!("# |T| = {}", graph.len());
    if diff.is_empty() {
        println!("# all golden sets reproduced");
    } else {
        print!("{diff}");
    }
}

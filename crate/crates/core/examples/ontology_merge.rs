//! Parses two small concept forests, merges them and prints the leaf
//! concept sets of each knowledge block.
//!
//! cargo run --example ontology_merge

use blockwmd::ontology::{merge_ontologies, CoreBlock, Ontology};

const TRAFFIC: &str = "\
oa\tobjective aspect\t-\tobjective_aspect
vt\tvehicle type\toa\t-
car\tcar\tvt\t-
truck\ttruck\tvt\t-
sa\tsubjective aspect\t-\tsubjective_aspect
neg\tnegligence\tsa\t-
jr\tjudgment result\t-\tjudgment_result
det\tdetention\tjr\t-
";

// Shares `vehicle type` with the first forest and adds a new leaf under it.
const EXTRA: &str = "\
oa\tobjective aspect\t-\tobjective_aspect
vt\tvehicle type\toa\t-
bus\tbus\tvt\t-
jr\tjudgment result\t-\tjudgment_result
fine\tfine\tjr\t-
";

fn main() -> blockwmd::Result<()> {
    let a = Ontology::parse(TRAFFIC)?;
    let b = Ontology::parse(EXTRA)?;
    let merged = merge_ontologies(&a, &b)?;
    println!("{} + {} concepts -> {}", a.len(), b.len(), merged.len());
    print!("{}", merged.to_text());

    let sets = merged.leaf_concepts();
    for block in CoreBlock::ALL {
        let words: Vec<&str> = sets.get(block).iter().map(String::as_str).collect();
        println!("{}: {}", block.short_name(), words.join(", "));
    }
    Ok(())
}

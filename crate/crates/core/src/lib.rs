pub mod analyses;
pub mod artifact;
pub mod cli;
pub mod corpus;
pub mod excellence;
pub mod indicators;
pub mod pipeline;
pub mod report;
pub mod stats;
pub mod syngen;

// Runs the guide's code blocks as doctests.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $file:literal) => {
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            mod $name {}
        };
    }
    chapter!(introduction, "introduction.md");
    chapter!(corpus, "corpus.md");
    chapter!(fss, "fss.md");
    chapter!(weights, "weights.md");
    chapter!(excellence, "excellence.md");
    chapter!(statistics, "statistics.md");
    chapter!(analyses, "analyses.md");
    chapter!(synthetic, "synthetic.md");
    chapter!(cli, "cli.md");
}

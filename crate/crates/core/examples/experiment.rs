//! Run a small repeated-split experiment and print the CSV report.

use kdda::harness::report::{report_csv, table1};
use kdda::harness::{run_experiment, ExperimentConfig};

const CONFIG: &str = "
dataset = rings
synthetic.classes = 3
synthetic.per_class = 30
methods = kdda+svm-ovr, kdda+nn, kpca+nn
extractor_kernel = rbf:4
k_train = 5, 15
repeats = 5
";

fn main() -> kdda::Result<()> {
    let cfg: ExperimentConfig = CONFIG.parse()?;
    let report = run_experiment(&cfg)?;
    print!("{}", report_csv(&report));
    println!();
    print!("{}", table1(&report));
    Ok(())
}

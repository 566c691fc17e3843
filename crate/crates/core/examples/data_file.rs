//! Reading a delimited data file with comments and a header.

use efda::efda::MulticlassModel;
use efda::expfam::FamilySpec;
use efda::io::read_table;

const DATA: &str = "# wait times in minutes\nminutes;queue\n1.2;0\n0.4;0\n2.2;0\n5.1;1\n3.9;1\n7.7;1\n";

fn main() -> efda::Result<()> {
    let table = read_table(DATA)?;
    println!("header: {:?}", table.header);
    let data = table.labeled()?;
    println!("{} rows, {} feature(s), class counts {:?}", data.len(), data.dim(), data.class_counts(2)?);
    let model = MulticlassModel::fit(FamilySpec::Exponential, &data, 2)?;
    println!("posteriors at 3 minutes: {:.4?}", model.posteriors(3.0)?);
    Ok(())
}

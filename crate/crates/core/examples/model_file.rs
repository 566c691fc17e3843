//! Saving a fitted model to the text format and reading it back.

use efda::efda::BinaryModel;
use efda::expfam::FamilySpec;
use efda::io::Model;
use efda::Dataset;

fn main() -> efda::Result<()> {
    let data = Dataset::from_scalar(vec![0.4, 1.1, 0.7, 2.9, 4.2, 3.3], vec![0, 0, 0, 1, 1, 1])?;
    let model = Model::Binary(BinaryModel::fit(FamilySpec::Exponential, &data)?);
    let text = model.to_text();
    print!("{text}");
    let back = Model::from_text(&text)?;
    assert_eq!(back, model);
    println!("# reloaded; posteriors at x = 2: {:?}", back.posteriors(&[2.0])?);
    Ok(())
}

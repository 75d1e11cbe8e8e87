// Gender-indicator and first-name substitution.
//
// Run with `cargo run --example debias`.

use std::error::Error;

use fairgauge::debias::{neutralize, neutralize_dataset, DebiasConfig};
use fairgauge::{AuditDataset, LabeledRecord};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let to_male = DebiasConfig::for_target("m")?;
    for text in [
        "She sold her car to Mr Smith.",
        "Mary met Bob.",
        "Dr. Jane Adams completed her residency; she now leads the team herself.",
    ] {
        let (out, report) = neutralize(text, &to_male);
        println!("{text}\n  -> {out}  ({} replacements)", report.total());
    }

    let ds = AuditDataset::from_labeled(
        "bios",
        [
            LabeledRecord::new("1", "F", "surgeon").with_text("She is a surgeon. Her patients trust her."),
            LabeledRecord::new("2", "M", "nurse").with_text("He trained in Leeds."),
            LabeledRecord::new("3", "M", "surgeon"),
        ],
    )?;
    let to_female = DebiasConfig::for_target("f")?;
    let (neutral, report) = neutralize_dataset(&ds, &to_female);
    for r in neutral.records() {
        println!("{}: {}", r.id, r.text.as_deref().unwrap_or("<no text>"));
    }
    println!(
        "indicators {} names {} per token {:?} without text {:?}",
        report.replaced_indicator_count, report.replaced_name_count, report.per_token, report.records_without_text
    );

    let (again, second) = neutralize_dataset(&neutral, &to_female);
    assert_eq!(second.total(), 0);
    assert_eq!(again.records(), neutral.records());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

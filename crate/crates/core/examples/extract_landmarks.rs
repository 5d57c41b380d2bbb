//! Turn route instructions into ordered landmark phrases with the rule-based extractor.

use landnav::providers::{instruction_from_landmarks, LandmarkExtractor, RuleBasedExtractor};

fn main() -> landnav::Result<()> {
    let instructions = [
        "Walk past the couch, go through the hallway and stop next to the fireplace.",
        "Exit the bedroom, turn left into the kitchen, then wait by the sink.",
        "Go up the stairs.",
    ];
    for text in instructions {
        match RuleBasedExtractor.extract_landmarks(text) {
            Ok(seq) => println!("{text}\n  -> {:?}", seq.phrases()),
            Err(e) => println!("{text}\n  -> {e}"),
        }
    }

    let landmarks = ["hallway", "dining table", "patio"].map(String::from);
    let generated = instruction_from_landmarks(&landmarks);
    let back = RuleBasedExtractor.extract_landmarks(&generated)?;
    println!("{generated}\n  -> {:?}", back.phrases());
    Ok(())
}

//! Versioned prompt templates shipped with the crate.

pub const PROMPT_VERSION: &str = "v1";

pub const EXTRACT_PROMPT: &str = include_str!("../../assets/prompts/extract_landmarks.v1.txt");
pub const GROUND_PROMPT: &str = include_str!("../../assets/prompts/ground_landmark.v1.txt");
pub const RATE_PROMPT: &str = include_str!("../../assets/prompts/rate_path.v1.txt");

/// Substitutes `{name}` placeholders.
pub(crate) fn render(template: &str, vars: &[(&str, &str)]) -> String {
    vars.iter()
        .fold(template.to_string(), |text, (name, value)| {
            text.replace(&format!("{{{name}}}"), value)
        })
}

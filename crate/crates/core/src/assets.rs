//! Frame sets, coding schemas and the demo lexicon shipped with the crate.

use crate::coding::CodingSchema;
use crate::stats::FrameSetSpec;

const DANGER_FRAMESET: &str = include_str!("../data/framesets/danger.json");
const ANTHRO_FRAMESET: &str = include_str!("../data/framesets/anthropomorphism.json");
const DANGER_SCHEMA: &str = include_str!("../data/schemas/danger.json");
const ANTHRO_SCHEMA: &str = include_str!("../data/schemas/anthropomorphism.json");

pub const FRAMESET_NAMES: [&str; 2] = ["danger", "anthropomorphism"];
pub const SCHEMA_NAMES: [&str; 2] = ["danger", "anthropomorphism"];

pub fn frameset_json(name: &str) -> Option<&'static str> {
    match name {
        "danger" => Some(DANGER_FRAMESET),
        "anthropomorphism" => Some(ANTHRO_FRAMESET),
        _ => None,
    }
}

pub fn frameset(name: &str) -> Option<FrameSetSpec> {
    frameset_json(name).map(|t| FrameSetSpec::from_json(t).expect("shipped frame set is valid"))
}

pub fn schema_json(name: &str) -> Option<&'static str> {
    match name {
        "danger" => Some(DANGER_SCHEMA),
        "anthropomorphism" => Some(ANTHRO_SCHEMA),
        _ => None,
    }
}

pub fn schema(name: &str) -> Option<CodingSchema> {
    schema_json(name).map(|t| CodingSchema::from_json(t).expect("shipped schema is valid"))
}

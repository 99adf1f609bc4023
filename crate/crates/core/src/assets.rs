//! Target and ring-table documents shipped with the crate.

const BUNDLED: &[(&str, &str)] = &[
    ("p1", include_str!("../targets/p1.json")),
    ("p2", include_str!("../targets/p2.json")),
    ("p4_quintic", include_str!("../targets/p4_quintic.json")),
    ("p1xp1", include_str!("../targets/p1xp1.json")),
    ("g25.ring", include_str!("../targets/g25.ring.json")),
    ("g24.ring", include_str!("../targets/g24.ring.json")),
];

/// Contents of a bundled document, by file stem (`"p2"`, `"g25.ring"`).
pub fn bundled(name: &str) -> Option<&'static str> {
    let stem = name.strip_suffix(".json").unwrap_or(name);
    BUNDLED.iter().find(|(n, _)| *n == stem).map(|(_, s)| *s)
}

pub fn bundled_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

use super::Scenario;

const BUILTINS: [(&str, &str); 12] = [
    ("gold-foils-volume", include_str!("../../scenarios/gold-foils-volume.json")),
    ("gold-foils-divergence", include_str!("../../scenarios/gold-foils-divergence.json")),
    ("many-splines-divergence", include_str!("../../scenarios/many-splines-divergence.json")),
    ("many-splines-inner-limit", include_str!("../../scenarios/many-splines-inner-limit.json")),
    ("restricted-vs-intrinsic", include_str!("../../scenarios/restricted-vs-intrinsic.json")),
    ("gh-sandwich", include_str!("../../scenarios/gh-sandwich.json")),
    ("chain-counting", include_str!("../../scenarios/chain-counting.json")),
    ("glued-annulus-tower", include_str!("../../scenarios/glued-annulus-tower.json")),
    ("bad-balls", include_str!("../../scenarios/bad-balls.json")),
    ("nonunique-growth", include_str!("../../scenarios/nonunique-growth.json")),
    ("spline-disk-inner-union", include_str!("../../scenarios/spline-disk-inner-union.json")),
    ("lemma-suites", include_str!("../../scenarios/lemma-suites.json")),
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|(name, _)| *name)
}

pub fn builtin(name: &str) -> Option<Scenario> {
    let (_, text) = BUILTINS.iter().find(|(n, _)| *n == name)?;
    Some(Scenario::from_json(text).expect("builtin scenarios parse"))
}

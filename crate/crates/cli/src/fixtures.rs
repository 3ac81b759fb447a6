const FIXTURES: &[(&str, &str, &str)] = &[
    ("hak3", "three-stage HAK scheme that passes every condition", include_str!("../fixtures/hak3.ini")),
    (
        "hak3-wide-support",
        "mutant failing the support condition (3)",
        include_str!("../fixtures/hak3-wide-support.ini"),
    ),
    ("hak3-tall-box", "mutant failing the box-height condition (2)", include_str!("../fixtures/hak3-tall-box.ini")),
    ("hak3-wide-band", "mutant failing the band-nesting condition (1)", include_str!("../fixtures/hak3-wide-band.ini")),
    ("tent", "full tent map with a 7-link chain, horseshoe negative case", include_str!("../fixtures/tent.ini")),
    ("pl3", "piecewise-linear map with 3 full branches", include_str!("../fixtures/pl3.ini")),
    ("pl5", "piecewise-linear map with 5 full branches", include_str!("../fixtures/pl5.ini")),
    ("golden-mean", "golden-mean shift over the half-turn rotation", include_str!("../fixtures/golden-mean.ini")),
    ("thue-morse", "Thue-Morse substitution over the half-turn rotation", include_str!("../fixtures/thue-morse.ini")),
    ("odometer222", "(2,2,2)-odometer over the half-turn rotation", include_str!("../fixtures/odometer222.ini")),
    ("fullshift2", "full 2-shift over the half-turn rotation", include_str!("../fixtures/fullshift2.ini")),
    ("kfold3", "essential chain refined twice by the 3-fold pattern", include_str!("../fixtures/kfold3.levels")),
];

pub fn get(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _, _)| *n == name).map(|(_, _, text)| *text)
}

pub fn listing() -> String {
    FIXTURES.iter().map(|(name, about, _)| format!("{name:<18} {about}\n")).collect()
}

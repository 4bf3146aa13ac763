//! Named configs shipped with the binary. The files live in `presets/`.

const PRESETS: &[(&str, &str)] = &[
    ("ce-450", include_str!("../presets/ce-450.conf")),
    ("ce-1000", include_str!("../presets/ce-1000.conf")),
    ("coherent-sweep", include_str!("../presets/coherent-sweep.conf")),
    ("cumulants-gaussian", include_str!("../presets/cumulants-gaussian.conf")),
    ("cumulants-kerr", include_str!("../presets/cumulants-kerr.conf")),
    ("sqvac-sweep", include_str!("../presets/sqvac-sweep.conf")),
    ("thg-coherent", include_str!("../presets/thg-coherent.conf")),
    ("thg-squeezed", include_str!("../presets/thg-squeezed.conf")),
    ("tmsv-mz", include_str!("../presets/tmsv-mz.conf")),
    ("vacuum", include_str!("../presets/vacuum.conf")),
];

pub fn get(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

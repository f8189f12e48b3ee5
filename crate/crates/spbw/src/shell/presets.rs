//! Built-in presentation files, available through `--preset NAME` and
//! `use NAME;`.

#[derive(Clone, Copy, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    /// Whether the presentation is expected to pass the confluence check.
    /// Ring-only presets have no extension and report `None`.
    pub confluent: Option<bool>,
    pub source: &'static str,
}

macro_rules! preset {
    ($name:literal, $summary:literal, $confluent:expr) => {
        Preset {
            name: $name,
            summary: $summary,
            confluent: $confluent,
            source: include_str!(concat!("../../presets/", $name, ".spbw")),
        }
    };
}

pub const CATALOG: &[Preset] = &[
    preset!("zmod4", "Z/4", None),
    preset!("trivial-zmod4", "trivial extension of Z/4", None),
    preset!("f4z2", "GF(4)[z]/(z^2)", None),
    preset!("f4z2-ext", "two twisted variables over GF(4)[z]/(z^2)", Some(true)),
    preset!("f4z2-six", "six twisted commuting variables over GF(4)[z]/(z^2)", Some(false)),
    preset!("qplane5", "quantum plane yx = 2xy over GF(5)", Some(true)),
    preset!("s2z4", "three twists of trivial(Z/4), weakly but not strictly compatible", Some(true)),
    preset!("t2z-symbolic", "T2(Z) and trivial(Z) with maps, symbolic only", None),
    preset!("mat-kt2", "Ore extension over the trivial extension of GF(2)[t]/(t^2)", Some(true)),
    preset!("usoq3-gf9", "q-deformed so(3) over GF(9)", Some(true)),
    preset!("conformal-sl2-gf5", "conformal sl(2) over GF(5)", Some(true)),
    preset!("bq3-gf7", "bi-quadratic three-generator algebra over GF(7)", Some(true)),
    preset!("broken-zyx", "three variables with an inconsistent overlap", Some(false)),
];

pub fn find(name: &str) -> Option<&'static Preset> {
    CATALOG.iter().find(|p| p.name == name)
}

pub fn source(name: &str) -> Option<&'static str> {
    find(name).map(|p| p.source)
}

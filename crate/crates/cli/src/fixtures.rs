//! Nets bundled with the crate, one per figure plus the two-transition
//! conflict net.

use petri_causal_core::Net;

use crate::format::parse_net;

const FIXTURES: &[(&str, &str)] = &[
    ("fig1.net", include_str!("../fixtures/fig1.net")),
    ("fig2.net", include_str!("../fixtures/fig2.net")),
    ("fig4.net", include_str!("../fixtures/fig4.net")),
    ("fig5.net", include_str!("../fixtures/fig5.net")),
    ("remark.net", include_str!("../fixtures/remark.net")),
];

/// File names and contents of the bundled nets.
pub fn fixtures() -> &'static [(&'static str, &'static str)] {
    FIXTURES
}

/// Parses a bundled net; `name` may omit the `.net` suffix.
pub fn fixture(name: &str) -> Option<Net> {
    let file = if name.ends_with(".net") { name.to_string() } else { format!("{name}.net") };
    let (_, text) = FIXTURES.iter().find(|(f, _)| *f == file)?;
    Some(parse_net(text).expect("bundled fixtures parse"))
}

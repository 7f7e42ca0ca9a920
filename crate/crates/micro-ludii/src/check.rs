//! Compile check plus the QR-code size lint.

use serde::Serialize;

use micro_ludii_core::lud::{self, QR_CAPACITY_BYTES};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub game: String,
    pub formatted_bytes: usize,
    pub qr_capacity_bytes: usize,
    pub fits_qr: bool,
}

/// Compiles `source` and measures its canonical formatting.
pub fn check(source: &str) -> anyhow::Result<CheckReport> {
    let tree = lud::parse_str(source).map_err(|e| anyhow::anyhow!("parse failure: {e}"))?;
    let desc = lud::compile(&tree, &lud::LudemeRegistry::standard())
        .map_err(|e| anyhow::anyhow!("compile failure: {e}"))?;
    let formatted_bytes = lud::format(&tree).len();
    Ok(CheckReport {
        game: desc.name,
        formatted_bytes,
        qr_capacity_bytes: QR_CAPACITY_BYTES,
        fits_qr: formatted_bytes <= QR_CAPACITY_BYTES,
    })
}

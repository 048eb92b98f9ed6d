//! Which even orders admit 3-MNOLS, and which of them this crate builds.
//!
//! Every even order from 6 to 356 is listed in exactly one of the groups
//! below except 146, which is still open. Orders built by a direct
//! construction here are `internal`; orders whose arrays or square sets come
//! from ingredients not implemented here (HDM families, GDDs, earlier
//! computer searches) are `covered-externally`.

use serde::Serialize;

use super::{applicable_methods, Method};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PaperStatus {
    Internal,
    CoveredExternally,
    Open,
}

impl PaperStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            PaperStatus::Internal => "internal",
            PaperStatus::CoveredExternally => "covered-externally",
            PaperStatus::Open => "open",
        }
    }
}

/// Orders with a stored searched column, plus the 6 example.
const TABLE: &[u32] = &[6, 24, 28, 32, 36, 44, 48, 52, 54];
const ODD_F: &[u32] = &[26, 266];
const FOUR_M: &[u32] = &[
    40, 56, 88, 104, 136, 152, 184, 200, 232, 248, 280, 296, 328, 344,
];
const SIX_MU: &[u32] = &[
    34, 58, 82, 106, 130, 154, 178, 202, 226, 250, 274, 298, 322, 346,
];

/// Cyclic arrays from earlier searches and direct constructions.
const EARLIER_CYCLIC: &[u32] = &[
    8, 10, 12, 14, 16, 18, 20, 22, 38, 46, 62, 70, 86, 94, 110, 118, 134, 142, 158, 166, 182, 190,
    206, 214, 230, 238, 254, 262, 278, 286, 302, 310, 326, 334, 350,
];
/// Hole insertion into products of a cyclic HDM with prime-order DMs.
const HDM_PRODUCT: &[u32] = &[
    50, 98, 170, 242, 290, 338, // HDM(4,2n;2), n prime
    90, 126, 198, 234, 306, 342, // HDM(4,2n;2), n odd
    60, 80, 84, 100, 112, 120, 132, 156, 160, 168, 176, 180, 204, 208, 224, 228, 240, 252, 264,
    272, 276, 300, 304, 312, 320, 336, 352, // HDM(4,2n;2), general n
    140, 196, 220, 260, 308, 340, // HDM(4,4n;4)
    216, 270, 324, // DM(3^i,5;1)
];
/// Hole insertion into HDM(4,6n;6) with the order-6 array in the hole.
const HDM_SIX: &[u32] = &[
    30, 42, 66, 78, 102, 114, 138, 150, 174, 186, 210, 222, 246, 258, 282, 294, 318, 330, 354,
];
/// Square sets from group divisible designs; no cyclic array is known.
const GDD: &[u32] = &[
    76, 92, 96, 108, 116, 124, 128, 144, 148, 164, 172, 188, 192, 212, 236, 244, 256, 268, 284,
    288, 292, 316, 332, 348, 356, // 5-GDDs
    64, 68, 72, 74, 122, 162, 194, 218, 314, // other GDDs
];
const OPEN: &[u32] = &[146];

/// Largest order the tabulated groups cover; above it every even order is
/// settled by the general existence result.
pub const LISTED_MAX: u32 = 356;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumRow {
    pub order: u32,
    /// Direct methods of this crate that reach the order.
    pub constructible_by: Vec<String>,
    pub paper_status: PaperStatus,
    /// Which group of results settles the order.
    pub paper_source: &'static str,
}

/// Status and source group for one even order.
pub fn paper_status(order: u32) -> (PaperStatus, &'static str) {
    let groups: [(&[u32], PaperStatus, &'static str); 9] = [
        (TABLE, PaperStatus::Internal, "table"),
        (ODD_F, PaperStatus::Internal, "odd-f"),
        (FOUR_M, PaperStatus::Internal, "four-m"),
        (SIX_MU, PaperStatus::Internal, "six-mu"),
        (EARLIER_CYCLIC, PaperStatus::CoveredExternally, "earlier-cyclic"),
        (HDM_PRODUCT, PaperStatus::CoveredExternally, "hdm-product"),
        (HDM_SIX, PaperStatus::CoveredExternally, "hdm-hole-6"),
        (GDD, PaperStatus::CoveredExternally, "gdd"),
        (OPEN, PaperStatus::Open, "none"),
    ];
    for (list, status, source) in groups {
        if list.contains(&order) {
            return (status, source);
        }
    }
    (PaperStatus::CoveredExternally, "general")
}

/// One row per even order in `[min, max]`.
pub fn spectrum_report(min: u32, max: u32) -> Vec<SpectrumRow> {
    let start = min.max(6) + min.max(6) % 2;
    (start..=max)
        .step_by(2)
        .map(|order| {
            let (paper_status, paper_source) = paper_status(order);
            SpectrumRow {
                order,
                constructible_by: applicable_methods(order).iter().map(Method::to_string).collect(),
                paper_status,
                paper_source,
            }
        })
        .collect()
}

pub fn to_csv(rows: &[SpectrumRow]) -> String {
    let mut out = String::from("order,paper_status,paper_source,constructible_by\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.order,
            r.paper_status.as_str(),
            r.paper_source,
            r.constructible_by.join(";")
        ));
    }
    out
}

pub fn to_json(rows: &[SpectrumRow]) -> String {
    serde_json::to_string_pretty(rows).expect("spectrum rows always serialize")
}

//! Per-slot transmission tables in the layout `s | chi | S1 | S2 | U^a | content`.

use std::fmt::Write as _;

use fogcache::{
    run_delivery, AnalyticRecords, DeliveryOptions, FapSet, Outcome, RequestSchedule, SubfileKey,
};

use crate::config::{RunSpec, ScheduleMode};

fn set_text(s: FapSet) -> String {
    if s.is_empty() {
        "∅".to_string()
    } else {
        s.to_string()
    }
}

fn key_text(key: SubfileKey) -> String {
    format!("W{},{}", key.requester, set_text(key.exclusivity))
}

/// One table row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub slot: usize,
    pub kind: usize,
    pub chi: usize,
    pub first: FapSet,
    pub second: FapSet,
    pub active: FapSet,
    /// `None` for a skipped pair.
    pub content: Option<String>,
}

/// Rows for every considered `(S1, S2)` pair, in delivery order.
///
/// A transmitted content lists each active member's piece; pieces already
/// delivered earlier are shown with a `(∅)` suffix and are not in the XOR.
pub fn table_rows(outcome: &Outcome) -> Vec<TableRow> {
    outcome
        .trace
        .iter()
        .map(|d| {
            let content = d.transmission.map(|i| {
                let record = &outcome.log[i];
                let s = record.encoding_set();
                record
                    .collapsed
                    .iter()
                    .map(|k| {
                        let key = SubfileKey::new(k, s.without(k));
                        if record.included.contains(&key) {
                            key_text(key)
                        } else {
                            format!("{}(∅)", key_text(key))
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" ⊕ ")
            });
            TableRow {
                slot: d.slot,
                kind: d.kind(),
                chi: d.chi(),
                first: d.first,
                second: d.second,
                active: d.active,
                content,
            }
        })
        .collect()
}

/// Runs an analytic delivery with the full decision trace.
pub fn traced_outcome(spec: &RunSpec) -> fogcache::Result<Outcome> {
    let params = spec.validate()?;
    let schedule = match spec.schedule {
        ScheduleMode::FixedL(l) => RequestSchedule::fixed_l(spec.k, spec.b, l, None)?,
        ScheduleMode::Random => RequestSchedule::random(spec.k, spec.b, spec.seed)?,
    };
    let records = AnalyticRecords::analytic(&params, &schedule)?;
    run_delivery(&params, &schedule, records, DeliveryOptions::traced())
}

/// Plain-text tables, one per slot that considers any pair.
pub fn render_tables(outcome: &Outcome) -> String {
    let rows = table_rows(outcome);
    let mut out = String::new();
    let mut slot = 0;
    let mut sent = 0;
    for row in &rows {
        if row.slot != slot {
            if slot != 0 {
                writeln!(out, "transmitted: {sent}\n").unwrap();
            }
            slot = row.slot;
            sent = 0;
            writeln!(out, "slot {slot}").unwrap();
            writeln!(out, "{:<3} {:<3} {:<10} {:<10} {:<10} content", "s", "chi", "S1", "S2", "Ua").unwrap();
        }
        sent += row.content.is_some() as usize;
        writeln!(
            out,
            "{:<3} {:<3} {:<10} {:<10} {:<10} {}",
            row.kind,
            row.chi,
            set_text(row.first),
            set_text(row.second),
            set_text(row.active),
            row.content.as_deref().unwrap_or("∅")
        )
        .unwrap();
    }
    if slot != 0 {
        writeln!(out, "transmitted: {sent}").unwrap();
    }
    writeln!(out, "total transmissions: {}", outcome.log.len()).unwrap();
    out
}

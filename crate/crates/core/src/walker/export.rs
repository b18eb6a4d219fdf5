use std::io::{self, Write};

use super::WalkTrace;
use crate::fmt::num;

pub const TRACE_CSV_HEADER: &str = "step,kind,displacement,position,time,action";

/// One row per event; `time` is the elapsed time at the end of the event.
pub fn write_trace_csv<W: Write>(trace: &WalkTrace, mut out: W) -> io::Result<()> {
    writeln!(out, "{TRACE_CSV_HEADER}")?;
    for (i, (event, position)) in trace.events.iter().zip(trace.positions()).enumerate() {
        let step = i as u64 + 1;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            step,
            event.kind.code(),
            num(event.displacement),
            num(position),
            num(step as f64 * event.duration),
            num(event.action),
        )?;
    }
    Ok(())
}

//! Simulated timing of one query execution.

/// All times in milliseconds of simulated clock, except `wall_ms`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TimingProbe {
    pub peers: usize,
    /// Index time per segment of the query interval.
    pub t_index: f64,
    /// Total DHT lookup time; lookups are issued one after another.
    pub t_r: f64,
    /// Slowest peer's compute time plus the client's own compute.
    pub t_p: f64,
    pub t_q: f64,
    pub t_net: f64,
    pub t_p2p: f64,
    /// Host wall-clock time of the simulation run.
    pub wall_ms: f64,
}

impl TimingProbe {
    pub const CSV_HEADER: &'static str = "P,T_INDEX,T_R,T_P,T_Q,T_NET,T_P2P";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.1},{:.1},{:.1},{:.1},{:.1},{:.1}",
            self.peers, self.t_index, self.t_r, self.t_p, self.t_q, self.t_net, self.t_p2p
        )
    }
}

/// Work counters of one execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExecStats {
    /// Operator applications, per segment or at the client.
    pub op_executions: usize,
    pub lookups: usize,
    pub hits: usize,
    pub bytes_shipped: usize,
    /// Segments overlapping the query interval.
    pub segments: usize,
}

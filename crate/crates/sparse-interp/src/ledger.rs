//! Per-run accounting of probe degrees: count, maximum degree, and the
//! total degree sum that the cost comparisons are based on.

use std::sync::Mutex;

/// Append-only multiset of probe degrees. Recording is linearizable, so
/// concurrent probes may share one ledger; all derived totals are
/// independent of the order in which probes ran.
#[derive(Debug, Default)]
pub struct ProbeLedger {
    records: Mutex<Vec<u64>>,
}

impl ProbeLedger {
    pub fn new() -> Self {
        ProbeLedger::default()
    }

    pub fn record(&self, degree: u64) {
        self.records.lock().unwrap().push(degree);
    }

    pub fn count(&self) -> usize {
        self.records.lock().unwrap().len()
    }

    pub fn max_degree(&self) -> u64 {
        self.records.lock().unwrap().iter().copied().max().unwrap_or(0)
    }

    /// Sum of all probe degrees.
    pub fn total_cost(&self) -> u128 {
        self.records.lock().unwrap().iter().map(|&d| d as u128).sum()
    }

    /// Snapshot of the recorded degrees, in recording order.
    pub fn degrees(&self) -> Vec<u64> {
        self.records.lock().unwrap().clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_are_order_independent() {
        let a = ProbeLedger::new();
        for d in [5u64, 7, 11] {
            a.record(d);
        }
        let b = ProbeLedger::new();
        for d in [11u64, 5, 7] {
            b.record(d);
        }
        assert_eq!(a.count(), b.count());
        assert_eq!(a.max_degree(), b.max_degree());
        assert_eq!(a.total_cost(), b.total_cost());
        assert_eq!(a.total_cost(), 23);
    }

    #[test]
    fn records_from_many_threads_all_land() {
        let ledger = std::sync::Arc::new(ProbeLedger::new());
        let mut handles = Vec::new();
        for t in 0..8u64 {
            let ledger = ledger.clone();
            handles.push(std::thread::spawn(move || {
                for i in 0..100 {
                    ledger.record(t * 100 + i);
                }
            }));
        }
        for h in handles {
            h.join().unwrap();
        }
        assert_eq!(ledger.count(), 800);
        assert_eq!(ledger.max_degree(), 799);
    }
}

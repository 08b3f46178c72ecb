/// Default ceiling on the number of summands any single sum may visit.
pub const DEFAULT_BUDGET_TERMS: u64 = 10_000_000;

/// Default ceiling on the weight of Macdonald functions built by Gram–Schmidt.
pub const DEFAULT_DEGREE_CEILING: usize = 8;

/// Cost guards shared by the expensive operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub budget_terms: u64,
    pub degree_ceiling: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            budget_terms: DEFAULT_BUDGET_TERMS,
            degree_ceiling: DEFAULT_DEGREE_CEILING,
        }
    }
}

impl Limits {
    pub(crate) fn check(&self, what: &'static str, estimate: u128) -> crate::Result<()> {
        if estimate > self.budget_terms as u128 {
            return Err(crate::Error::BudgetExceeded {
                what,
                estimate,
                budget: self.budget_terms,
            });
        }
        Ok(())
    }
}

/// Caps for the exhaustive searches.
///
/// Every cap bounds the size of something a search would otherwise enumerate
/// without limit on adversarial input. Hitting a cap raises
/// [`Error::BudgetExceeded`](crate::error::Error::BudgetExceeded); it never
/// silently truncates a search, so verdicts computed under any budget are
/// trustworthy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBudget {
    /// Candidate objects examined per corepresentability search.
    pub comma_objects: usize,
    /// Cocones examined per colimit search.
    pub cocones: usize,
    /// Objects admitted into a pseudopullback category.
    pub pspb_objects: usize,
    /// Morphisms admitted into a pseudopullback category.
    pub pspb_morphisms: usize,
    /// Objects per category in an equivalence search.
    pub equiv_objects: usize,
    /// Morphisms per category in an equivalence search.
    pub equiv_morphisms: usize,
    /// Functor candidates examined per equivalence search.
    pub equiv_candidates: usize,
    /// Stages before descent reports `NotStabilized`.
    pub descent_max_stages: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            comma_objects: 200,
            cocones: 20_000,
            pspb_objects: 600,
            pspb_morphisms: 50_000,
            equiv_objects: 5,
            equiv_morphisms: 40,
            equiv_candidates: 200_000,
            descent_max_stages: 16,
        }
    }
}

impl SearchBudget {
    /// Scale every cap by `factor/base` (saturating), keeping the caps'
    /// relative proportions. Used by callers that expose one knob.
    pub fn scaled(factor: usize, base: usize) -> Self {
        let d = SearchBudget::default();
        let s = |v: usize| -> usize {
            ((v as u128).saturating_mul(factor as u128) / (base.max(1) as u128))
                .min(usize::MAX as u128) as usize
        };
        SearchBudget {
            comma_objects: s(d.comma_objects).max(1),
            cocones: s(d.cocones).max(1),
            pspb_objects: s(d.pspb_objects).max(1),
            pspb_morphisms: s(d.pspb_morphisms).max(1),
            equiv_objects: s(d.equiv_objects).max(1),
            equiv_morphisms: s(d.equiv_morphisms).max(1),
            equiv_candidates: s(d.equiv_candidates).max(1),
            descent_max_stages: s(d.descent_max_stages).max(1),
        }
    }

    /// A budget large enough for anything the test suites construct.
    /// Still finite, so runaway searches fail loudly instead of hanging.
    pub fn generous() -> Self {
        SearchBudget::scaled(4000, 200)
    }
}

/// Running counters reported alongside results so callers can see how much
/// of the budget a computation actually consumed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BudgetUse {
    pub comma_objects: usize,
    pub cocones: usize,
    pub pspb_objects: usize,
    pub pspb_morphisms: usize,
    pub equiv_candidates: usize,
    pub descent_stages: usize,
}

impl BudgetUse {
    /// Pointwise max: total use of two sub-computations that share a budget.
    pub fn merge(&self, other: &BudgetUse) -> BudgetUse {
        BudgetUse {
            comma_objects: self.comma_objects.max(other.comma_objects),
            cocones: self.cocones.max(other.cocones),
            pspb_objects: self.pspb_objects.max(other.pspb_objects),
            pspb_morphisms: self.pspb_morphisms.max(other.pspb_morphisms),
            equiv_candidates: self.equiv_candidates.max(other.equiv_candidates),
            descent_stages: self.descent_stages.max(other.descent_stages),
        }
    }
}

//! Deliberate formula corruptions used as negative controls by the oracle
//! runner. Production code paths always run with `None`.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// `(n-1)!` replaced by `n!` in the closed weighted formula.
    WNumeratorFactorial,
    /// `k_j^a!` dropped from the closed weighted formula.
    WMultiplicityFactorial,
    /// `(j+1)!` replaced by `(j+2)!` in the closed weighted formula.
    WFertilityFactorial,
    /// The `+1` in the shift-coefficient recursion replaced by `+2`.
    CRecursionOffset,
}

impl Mutation {
    pub const ALL: [Mutation; 4] = [
        Mutation::WNumeratorFactorial,
        Mutation::WMultiplicityFactorial,
        Mutation::WFertilityFactorial,
        Mutation::CRecursionOffset,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::WNumeratorFactorial => "w-numerator",
            Mutation::WMultiplicityFactorial => "w-multiplicity",
            Mutation::WFertilityFactorial => "w-fertility",
            Mutation::CRecursionOffset => "c-offset",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }
}

use thiserror::Error;

/// Everything that can go wrong in the library, shared across modules so the
/// CLI can classify failures uniformly.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be even, got {0}")]
    OddDimension(usize),
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("duplicate hypersurface id `{0}`")]
    DuplicateHypersurface(String),
    #[error("unknown hypersurface id `{0}`")]
    UnknownHypersurface(String),
    #[error("id `{0}` listed more than once in subset")]
    DuplicateInSubset(String),
    #[error("coordinate {coordinate} out of range for dimension {dim}")]
    CoordinateOutOfRange { coordinate: usize, dim: usize },
    #[error("coordinate {0} declared for more than one hypersurface")]
    DuplicateCoordinate(usize),
    #[error("{count} hypersurfaces exceed the limit of {limit}")]
    TooManyHypersurfaces { count: usize, limit: usize },
    #[error("hypersurface `{0}` carries no defining coordinate")]
    NoDefiningCoordinate(String),
    #[error("stratum table has no entry for subset {{{0}}}")]
    MissingStratum(String),
    #[error("duplicate stratum entry for subset {{{0}}}")]
    DuplicateStratum(String),
    #[error("stratum {{{subset}}}: betti[0] = {betti0} but components = {components}")]
    ComponentMismatch {
        subset: String,
        betti0: String,
        components: u64,
    },
    #[error("empty stratum {{{empty}}} lies under non-empty stratum {{{superset}}}")]
    EmptinessNotMonotone { empty: String, superset: String },
    #[error("component count overflow in stratum {{{0}}}")]
    ComponentOverflow(String),

    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("expected degree {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("form has no log pole along coordinate {0}")]
    NoLogPole(usize),
    #[error(
        "cannot drop the log pole along coordinate {0}: coefficient is not divisible by its sine"
    )]
    PoleNotRemovable(usize),
    #[error("non-cancelling denominator at matrix entry ({row}, {col})")]
    NonCancellingDenominator { row: usize, col: usize },
    #[error("form has a log pole away from the divisor: coordinate {0}")]
    PoleOutsideDivisor(usize),
    #[error("residual form touches partition coordinate {0}")]
    CoordinateCollision(usize),
    #[error("pole-free input required, found log pole along coordinate {0}")]
    UnexpectedPole(usize),
    #[error("top-degree product spreads over several coordinate tuples; inputs do not live on one {dim}-dimensional sub-torus")]
    NotASubtorusForm { dim: usize },
    #[error("dim − k must be even: dim {dim}, k {k}")]
    CosymplecticParity { dim: usize, k: usize },

    #[error("form is not closed")]
    NotClosed,
    #[error("decomposition is not partitionable")]
    NotPartitionable(crate::decomposition::PartitionabilityReport),
    #[error(
        "hypersurface `{0}` has zero residue class and no partner with nonzero pairing scalar"
    )]
    PairingMissing(String),
    #[error("hypersurface `{0}` pairs with more than one partner: {1:?}")]
    PairingAmbiguous(String, Vec<String>),
    #[error("partition does not cover hypersurface `{0}`")]
    PartitionIncomplete(String),
    #[error("partition references `{0}` more than once")]
    PartitionOverlap(String),
    #[error("stratum {{{0}}} is empty")]
    EmptyStratumSelected(String),
    #[error("pairing scalars for ({s}, {t}) have length {got}, expected {expected}")]
    ScalarVectorLength {
        s: String,
        t: String,
        got: usize,
        expected: u64,
    },
    #[error("alpha count {got} does not match the partition's z-type count {expected}")]
    AlphaCount { got: usize, expected: usize },

    #[error("[π, π] ≠ 0: bivector is not Poisson")]
    NotPoisson,
    #[error("matrix with {columns} columns exceeds the cap {cap}")]
    ResourceCap { columns: usize, cap: usize },
    #[error("cutoff {cutoff} too small for frequency reach {reach} of the bivector")]
    CutoffTooSmall { cutoff: i64, reach: i64 },
    #[error("oracle supports dimension ≤ {max}, got {got}")]
    OracleDimension { got: usize, max: usize },
}

use thiserror::Error;

/// Every failure the kernel can report. The `Display` form is the bare
/// variant name so front ends can print it verbatim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("InvalidInput")]
    InvalidInput,
    #[error("ConcentricCircles")]
    ConcentricCircles,
    #[error("DegenerateImage")]
    DegenerateImage,
    #[error("CenterPole")]
    CenterPole,
    #[error("CollinearPoints")]
    CollinearPoints,
    #[error("IdenticalObjects")]
    IdenticalObjects,
    #[error("DegenerateTriangle")]
    DegenerateTriangle,
    #[error("PointsNotOnCircle")]
    PointsNotOnCircle,
    #[error("IntersectingCircles")]
    IntersectingCircles,
    #[error("OnRadicalAxis")]
    OnRadicalAxis,
    #[error("ZeroDenominator")]
    ZeroDenominator,
    #[error("LineMissesCircle")]
    LineMissesCircle,
    #[error("InconsistentPairs")]
    InconsistentPairs,
    #[error("NoCommonTangentAxis")]
    NoCommonTangentAxis,
    #[error("SpeedOutOfRange")]
    SpeedOutOfRange,
    #[error("OutsideDisk")]
    OutsideDisk,
    #[error("NotAHyperbolicCircle")]
    NotAHyperbolicCircle,
    #[error("NotACircle")]
    NotACircle,
    #[error("NoIntersection")]
    NoIntersection,
    #[error("NonGeneric")]
    NonGeneric,
    #[error("NonCentralConic")]
    NonCentralConic,
    #[error("NoRealBitangent")]
    NoRealBitangent,
    #[error("EmptyFamily")]
    EmptyFamily,
    #[error("GenerationExhausted")]
    GenerationExhausted,
    #[error("GammaNotAdmissible")]
    GammaNotAdmissible,
    #[error("ConicCenterOutside")]
    ConicCenterOutside,
    #[error("SearchDiverged")]
    SearchDiverged,
    #[error("MissingObject")]
    MissingObject,
}

pub type Result<T> = std::result::Result<T, Error>;

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pathdec {

enum class Errc {
    LoopEdge,
    SameSideEdge,
    UnknownVertex,
    UnknownEdge,
    ForeignEdge,
    DuplicateId,
    ParseError,
    SameVertex,
    TooFewVertices,
    NotEulerian,
    SpecViolation,
    BudgetExhausted,
    WouldCreateLoop,
    NotLiftable,
    CutVertex,
    DepthExceeded,
    NoPacking,
    BoundNotMet,
    DivisibilityViolation,
    DivisibilityError,
    PreconditionViolation,
    NoPerfectMatching,
    NotRegular,
    EdgeMismatch,
    RepeatedEdge,
    NotVanilla,
    NotComplete,
    NotPrecomplete,
    ExtensionMismatch,
    InternalExhaustion,
    InvariantBroken,
    TooLarge,
    BadPartition,
    DegreeMismatch,
    MissingEdge,
    WrongDegree,
    NoAdmissiblePair,
    NotConnected,
    PackingFailed,
    NotEvenRegular,
    ShapeMismatch,
    AlreadyPaths,
    NotFullSequence,
    VerificationFailed,
    NoPath,
    UnknownFixture,
    BadOffset,
};

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::LoopEdge: return "LoopEdge";
    case Errc::SameSideEdge: return "SameSideEdge";
    case Errc::UnknownVertex: return "UnknownVertex";
    case Errc::UnknownEdge: return "UnknownEdge";
    case Errc::ForeignEdge: return "ForeignEdge";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::ParseError: return "ParseError";
    case Errc::SameVertex: return "SameVertex";
    case Errc::TooFewVertices: return "TooFewVertices";
    case Errc::NotEulerian: return "NotEulerian";
    case Errc::SpecViolation: return "SpecViolation";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::WouldCreateLoop: return "WouldCreateLoop";
    case Errc::NotLiftable: return "NotLiftable";
    case Errc::CutVertex: return "CutVertex";
    case Errc::DepthExceeded: return "DepthExceeded";
    case Errc::NoPacking: return "NoPacking";
    case Errc::BoundNotMet: return "BoundNotMet";
    case Errc::DivisibilityViolation: return "DivisibilityViolation";
    case Errc::DivisibilityError: return "DivisibilityError";
    case Errc::PreconditionViolation: return "PreconditionViolation";
    case Errc::NoPerfectMatching: return "NoPerfectMatching";
    case Errc::NotRegular: return "NotRegular";
    case Errc::EdgeMismatch: return "EdgeMismatch";
    case Errc::RepeatedEdge: return "RepeatedEdge";
    case Errc::NotVanilla: return "NotVanilla";
    case Errc::NotComplete: return "NotComplete";
    case Errc::NotPrecomplete: return "NotPrecomplete";
    case Errc::ExtensionMismatch: return "ExtensionMismatch";
    case Errc::InternalExhaustion: return "InternalExhaustion";
    case Errc::InvariantBroken: return "InvariantBroken";
    case Errc::TooLarge: return "TooLarge";
    case Errc::BadPartition: return "BadPartition";
    case Errc::DegreeMismatch: return "DegreeMismatch";
    case Errc::MissingEdge: return "MissingEdge";
    case Errc::WrongDegree: return "WrongDegree";
    case Errc::NoAdmissiblePair: return "NoAdmissiblePair";
    case Errc::NotConnected: return "NotConnected";
    case Errc::PackingFailed: return "PackingFailed";
    case Errc::NotEvenRegular: return "NotEvenRegular";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::AlreadyPaths: return "AlreadyPaths";
    case Errc::NotFullSequence: return "NotFullSequence";
    case Errc::VerificationFailed: return "VerificationFailed";
    case Errc::NoPath: return "NoPath";
    case Errc::UnknownFixture: return "UnknownFixture";
    case Errc::BadOffset: return "BadOffset";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, std::string_view what) {
    if (!cond) throw Error(code, std::string(what));
}

} // namespace pathdec

#include "codewe/error.hpp"

namespace codewe {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EncodingUnsupported: return "EncodingUnsupported";
    case ErrorCode::InvalidSeed: return "InvalidSeed";
    case ErrorCode::InvalidKeyMaterial: return "InvalidKeyMaterial";
    case ErrorCode::InvalidHex: return "InvalidHex";
    case ErrorCode::EmptyTree: return "EmptyTree";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidSignature: return "InvalidSignature";
    case ErrorCode::UnknownContract: return "UnknownContract";
    case ErrorCode::MalformedTransaction: return "MalformedTransaction";
    case ErrorCode::SnapshotCorrupt: return "SnapshotCorrupt";
    case ErrorCode::BlobTooLarge: return "BlobTooLarge";
    case ErrorCode::EmptyBlob: return "EmptyBlob";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::IntegrityViolation: return "IntegrityViolation";
    case ErrorCode::AlreadyErased: return "AlreadyErased";
    case ErrorCode::StoreUnavailable: return "StoreUnavailable";
    case ErrorCode::StigmaGateFailed: return "StigmaGateFailed";
    case ErrorCode::CoProductionMissing: return "CoProductionMissing";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::DuplicateContract: return "DuplicateContract";
    case ErrorCode::InvalidTransition: return "InvalidTransition";
    case ErrorCode::Unauthorized: return "Unauthorized";
    case ErrorCode::TokenReplay: return "TokenReplay";
    case ErrorCode::UnknownToken: return "UnknownToken";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::SurveyClosed: return "SurveyClosed";
    case ErrorCode::SurveyFull: return "SurveyFull";
    case ErrorCode::AlreadyAnalyzed: return "AlreadyAnalyzed";
    case ErrorCode::UnknownCommitment: return "UnknownCommitment";
    case ErrorCode::DuplicateStakeholder: return "DuplicateStakeholder";
    case ErrorCode::EmptyPanel: return "EmptyPanel";
    case ErrorCode::UnknownStakeholder: return "UnknownStakeholder";
    case ErrorCode::RecordFinalized: return "RecordFinalized";
    case ErrorCode::UnknownItem: return "UnknownItem";
    case ErrorCode::UnknownFlag: return "UnknownFlag";
    case ErrorCode::StaleResolution: return "StaleResolution";
    case ErrorCode::QuorumNotMet: return "QuorumNotMet";
    case ErrorCode::FinalizationBlocked: return "FinalizationBlocked";
    case ErrorCode::StaleSignOff: return "StaleSignOff";
    case ErrorCode::ConflictRetry: return "ConflictRetry";
    case ErrorCode::WrongPhase: return "WrongPhase";
    case ErrorCode::InvalidResponse: return "InvalidResponse";
    case ErrorCode::ReportUnavailable: return "ReportUnavailable";
    case ErrorCode::NotYetAnalyzed: return "NotYetAnalyzed";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::RateLimited: return "RateLimited";
  }
  return "Unknown";
}

Error::Error(ErrorCode code) : std::runtime_error(std::string(to_string(code))), code_(code) {}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace codewe

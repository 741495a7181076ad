#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace codewe {

// One code space for every module so that CLI exit codes, HTTP statuses and
// ledger rejection reasons share names.
enum class ErrorCode {
  // crypto_core
  EncodingUnsupported,
  InvalidSeed,
  InvalidKeyMaterial,
  InvalidHex,
  EmptyTree,
  IndexOutOfRange,
  // ledger_sim
  InvalidSignature,
  UnknownContract,
  MalformedTransaction,
  SnapshotCorrupt,
  // cas_store
  BlobTooLarge,
  EmptyBlob,
  NotFound,
  IntegrityViolation,
  AlreadyErased,
  StoreUnavailable,
  // survey_contract
  StigmaGateFailed,
  CoProductionMissing,
  InvalidParameters,
  DuplicateContract,
  InvalidTransition,
  Unauthorized,
  TokenReplay,
  UnknownToken,
  DuplicateKey,
  SurveyClosed,
  SurveyFull,
  AlreadyAnalyzed,
  UnknownCommitment,
  // coproduction
  DuplicateStakeholder,
  EmptyPanel,
  UnknownStakeholder,
  RecordFinalized,
  UnknownItem,
  UnknownFlag,
  StaleResolution,
  QuorumNotMet,
  FinalizationBlocked,
  StaleSignOff,
  ConflictRetry,
  // analysis_engine
  WrongPhase,
  InvalidResponse,
  // audit_verify
  ReportUnavailable,
  NotYetAnalyzed,
  // service
  InvalidConfig,
  RateLimited,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  explicit Error(ErrorCode code);
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace codewe

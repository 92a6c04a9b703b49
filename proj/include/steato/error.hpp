// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace steato {

enum class ErrorCode {
    FileNotFound,
    DecodeError,
    InvalidPolygon,
    InvalidDimensions,
    ParseError,
    DuplicatePatientId,
    DimensionMismatch,
    EmptyVeinMask,
    InvalidBinCount,
    InvalidConfig,
    NoPatches,
    EmptyDataset,
    TooFewSamples,
    EmptyCluster,
    SingleClassTraining,
    LengthMismatch,
    EmptyConfusion,
    TooFewPerClass,
    MissingMask,
    DegenerateData,
    InvalidSpec,
    IoError,
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::FileNotFound:        return "FileNotFound";
        case ErrorCode::DecodeError:         return "DecodeError";
        case ErrorCode::InvalidPolygon:      return "InvalidPolygon";
        case ErrorCode::InvalidDimensions:   return "InvalidDimensions";
        case ErrorCode::ParseError:          return "ParseError";
        case ErrorCode::DuplicatePatientId:  return "DuplicatePatientId";
        case ErrorCode::DimensionMismatch:   return "DimensionMismatch";
        case ErrorCode::EmptyVeinMask:       return "EmptyVeinMask";
        case ErrorCode::InvalidBinCount:     return "InvalidBinCount";
        case ErrorCode::InvalidConfig:       return "InvalidConfig";
        case ErrorCode::NoPatches:           return "NoPatches";
        case ErrorCode::EmptyDataset:        return "EmptyDataset";
        case ErrorCode::TooFewSamples:       return "TooFewSamples";
        case ErrorCode::EmptyCluster:        return "EmptyCluster";
        case ErrorCode::SingleClassTraining: return "SingleClassTraining";
        case ErrorCode::LengthMismatch:      return "LengthMismatch";
        case ErrorCode::EmptyConfusion:      return "EmptyConfusion";
        case ErrorCode::TooFewPerClass:      return "TooFewPerClass";
        case ErrorCode::MissingMask:         return "MissingMask";
        case ErrorCode::DegenerateData:      return "DegenerateData";
        case ErrorCode::InvalidSpec:         return "InvalidSpec";
        case ErrorCode::IoError:             return "IoError";
    }
    return "Unknown";
}

/// Exception type used across the library. Carries a machine-checkable code
/// next to the human-readable message, plus the patient id and pipeline stage
/// when the failure happened inside per-patient processing.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code), raw_message_(message) {}

    Error(ErrorCode code, const std::string& message, std::string patient, std::string stage)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message +
                             " [patient=" + patient + " stage=" + stage + "]"),
          code_(code), raw_message_(message), patient_(std::move(patient)),
          stage_(std::move(stage)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& raw_message() const noexcept { return raw_message_; }
    const std::string& patient() const noexcept { return patient_; }
    const std::string& stage() const noexcept { return stage_; }

private:
    ErrorCode code_;
    std::string raw_message_;
    std::string patient_;
    std::string stage_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace steato

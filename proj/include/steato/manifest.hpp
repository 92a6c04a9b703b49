// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "steato/error.hpp"

namespace steato {

enum class Label { Normal = 0, Fatty = 1 };

inline const char* label_name(Label l) { return l == Label::Fatty ? "fatty" : "normal"; }

struct PatientRecord {
    std::string patient_id;
    std::string image_path;
    std::string pancreas_mask_path;
    std::string vein_mask_path;
    std::optional<Label> label;  // absent for unlabeled patients
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace detail

inline constexpr const char* kManifestHeader =
    "patient_id,image_path,pancreas_mask_path,vein_mask_path,label";

/// Parse a patient manifest CSV. One record per row; an empty label field
/// yields an unlabeled record. Row numbers in errors are 1-based and include
/// the header line.
inline std::vector<PatientRecord> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::FileNotFound, path);

    std::string line;
    if (!std::getline(in, line)) raise(ErrorCode::ParseError, path + ": empty file (row 1)");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kManifestHeader)
        raise(ErrorCode::ParseError, path + ": bad header (row 1): '" + line + "'");

    std::vector<PatientRecord> records;
    std::unordered_set<std::string> seen;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 5)
            raise(ErrorCode::ParseError,
                  path + ": expected 5 fields, got " + std::to_string(fields.size()) +
                      " (row " + std::to_string(row) + ")");
        PatientRecord rec;
        rec.patient_id = fields[0];
        rec.image_path = fields[1];
        rec.pancreas_mask_path = fields[2];
        rec.vein_mask_path = fields[3];
        if (fields[4] == "normal") {
            rec.label = Label::Normal;
        } else if (fields[4] == "fatty") {
            rec.label = Label::Fatty;
        } else if (!fields[4].empty()) {
            raise(ErrorCode::ParseError,
                  path + ": unknown label '" + fields[4] + "' (row " + std::to_string(row) + ")");
        }
        if (rec.patient_id.empty())
            raise(ErrorCode::ParseError, path + ": empty patient_id (row " + std::to_string(row) + ")");
        if (!seen.insert(rec.patient_id).second)
            raise(ErrorCode::DuplicatePatientId,
                  rec.patient_id + " (row " + std::to_string(row) + ")");
        records.push_back(std::move(rec));
    }
    return records;
}

inline void save_manifest(const std::vector<PatientRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "cannot write " + path);
    out << kManifestHeader << "\n";
    for (const auto& r : records) {
        out << r.patient_id << ',' << r.image_path << ',' << r.pancreas_mask_path << ','
            << r.vein_mask_path << ',' << (r.label ? label_name(*r.label) : "") << "\n";
    }
    if (!out) raise(ErrorCode::IoError, "write failed: " + path);
}

}  // namespace steato

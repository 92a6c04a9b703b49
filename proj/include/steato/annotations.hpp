// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "steato/error.hpp"
#include "steato/polygon.hpp"

namespace steato {

/// Read polygon annotations from a JSON file of the form
///   [{"structure": "pancreas"|"splenic_vein", "points": [[x,y], ...]}, ...]
inline std::vector<PolygonAnnotation> load_annotations(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::FileNotFound, path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::ParseError, path + ": " + e.what());
    }
    if (!doc.is_array()) raise(ErrorCode::ParseError, path + ": expected a top-level array");

    std::vector<PolygonAnnotation> annotations;
    for (const auto& entry : doc) {
        try {
            PolygonAnnotation ann;
            ann.structure = structure_from_name(entry.at("structure").get<std::string>());
            for (const auto& pt : entry.at("points")) {
                if (!pt.is_array() || pt.size() != 2)
                    raise(ErrorCode::ParseError, path + ": each point must be [x, y]");
                ann.vertices.push_back({pt[0].get<double>(), pt[1].get<double>()});
            }
            if (ann.vertices.size() < 3)
                raise(ErrorCode::InvalidPolygon,
                      path + ": polygon with " + std::to_string(ann.vertices.size()) + " vertices");
            annotations.push_back(std::move(ann));
        } catch (const nlohmann::json::exception& e) {
            raise(ErrorCode::ParseError, path + ": " + e.what());
        }
    }
    return annotations;
}

}  // namespace steato

#pragma once

// JSON and human-readable renderings of the library's reports. Field names
// in the JSON documents match the C++ struct members.

#include <optional>
#include <string>

#include <json.hpp>

#include "coupled_fp/certificate.hpp"
#include "coupled_fp/coupled_map.hpp"
#include "coupled_fp/iteration.hpp"
#include "coupled_fp/space.hpp"

namespace cfp {

nlohmann::json to_json(const Point& p);
nlohmann::json to_json(const PairPoint& p);
nlohmann::json to_json(const ContractionParams& p);
nlohmann::json to_json(const SamplePair& s);
nlohmann::json to_json(const CertificateReport& r);
nlohmann::json to_json(const ParamEstimate& e);
nlohmann::json to_json(const MonotoneReport& r);
nlohmann::json to_json(const SolveResult& r);
nlohmann::json to_json(const ChainReport& r);
nlohmann::json to_json(const UniquenessReport& r);

/// Inverse of to_json(CertificateReport). Throws InputError on a malformed
/// document.
CertificateReport certificate_from_json(const nlohmann::json& doc);

std::string format_text(const CertificateReport& r);
std::string format_text(const ParamEstimate& e);
std::string format_text(const MonotoneReport& r);
std::string format_text(const SolveResult& r, const std::optional<ChainReport>& chain);
std::string format_text(const UniquenessReport& r);

}  // namespace cfp

#pragma once

#include "wwnf/polynomial.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace wwnf {

using json = nlohmann::ordered_json;

/// fixed, locale-independent float formatting for deterministic outputs
std::string fmt_double(double v);

/// FNV-1a over a canonical text serialization; used as the content hash for
/// coefficient-table caching and run manifests
std::uint64_t fnv1a(const std::string& s);

/// canonical JSON layout of a coefficient table:
///   [ {"degree": d, "modes": [[j, sigma], ...], "re": ..., "im": ...}, ... ]
/// sorted canonically (degree, then monomial order)
json polynomial_to_json(const Poly& p);
Poly polynomial_from_json(const json& j);

std::uint64_t content_hash(const Poly& p);

/// CSV with RFC-4180 quoting
std::string csv_field(const std::string& s);

/// run manifest written next to every CLI output
json make_manifest(const json& config, std::uint64_t seed,
                   const std::vector<std::pair<std::string, std::uint64_t>>& input_hashes,
                   double wall_seconds);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace wwnf

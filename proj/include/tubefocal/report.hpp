#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "tubefocal/config.hpp"
#include "tubefocal/verify.hpp"

namespace tubefocal {

// "tubefocal <semver>"
std::string tool_version();

// FNV-1a over the verbatim config text, quoted in reports as provenance
std::uint64_t fnv1a64(std::string_view data);
std::string hash_hex(std::uint64_t h);

// ISO 8601 UTC, second resolution
std::string current_timestamp_utc();

// Machine-readable verification record.  Key order is fixed; two runs of the
// same job differ only in the timestamp line.  The timestamp is a parameter
// so replays can pin it.
nlohmann::ordered_json build_report(const JobConfig& job, const TheoremReport& rep,
                                    const std::string& timestamp);

// two-space indented dump with a trailing newline
void write_report(const nlohmann::ordered_json& doc, const std::string& path);

}  // namespace tubefocal

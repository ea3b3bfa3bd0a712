#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "jackmc/charpoly_mc.hpp"

namespace jackmc {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

// FNV-1a 64-bit hash of a configuration string; reports embed it so a file
// can be traced back to the exact invocation that produced it.
std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t value);

// Round-trip-safe decimal formatting (17 significant digits).
std::string format_full(double v);
std::string format_complex(cplx v);  // "re,im"

ordered_json to_json(const MCEstimate& est);
ordered_json to_json(const DualityReport& report);

// Complete output documents: payload wrapped in a schema/version/config-hash
// envelope so files are self-describing.
ordered_json report_document(const DualityReport& report,
                             const std::string& config_hash);
ordered_json ratio_document(const std::vector<RatioRow>& rows,
                            const std::string& config_hash,
                            const std::optional<RatioFit>& fit);

// CSV renderings: a comment header line with version + config hash, a stable
// column header, then data rows.
std::string report_csv(const DualityReport& report,
                       const std::string& config_hash);
std::string ratio_csv(const std::vector<RatioRow>& rows,
                      const std::string& config_hash,
                      const std::optional<RatioFit>& fit);

// Writes via a temporary file in the same directory plus rename, so readers
// never observe a partially written report.
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace jackmc

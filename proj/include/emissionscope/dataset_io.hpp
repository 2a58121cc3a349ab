#pragma once

#include <istream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <string>

#include "emissionscope/windowing.hpp"

namespace emissionscope {

/// Header: window_center_t,<feature names...>,y_co,y_no,...
/// Values use the shortest exact decimal form, so re-reading is lossless.
void write_dataset_csv(std::ostream& out, const Dataset& ds);
std::string dataset_csv(const Dataset& ds);

/// Sidecar with windowing, labeling and mask settings plus drop counts.
nlohmann::json dataset_sidecar(const Dataset& ds);

/// Parses the CSV and, when given, restores provenance from the sidecar.
Dataset read_dataset_csv(std::istream& in, const std::optional<nlohmann::json>& sidecar = {});

/// 64-bit FNV-1a of the canonical CSV, as 16 hex digits.
std::string fingerprint(const Dataset& ds);
std::string fnv1a_hex(std::string_view bytes);

}  // namespace emissionscope

#include "emissionscope/dataset_io.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>

#include "emissionscope/csv.hpp"
#include "emissionscope/error.hpp"

namespace emissionscope {

void write_dataset_csv(std::ostream& out, const Dataset& ds) {
  out << "window_center_t";
  for (const std::string& name : ds.feature_names) out << ',' << name;
  for (const auto& [gas, values] : ds.y) out << ",y_" << gas_token(gas);
  out << '\n';
  for (Eigen::Index r = 0; r < ds.X.rows(); ++r) {
    out << csv::format_exact(ds.rows[static_cast<std::size_t>(r)].window_center_t);
    for (Eigen::Index c = 0; c < ds.X.cols(); ++c) out << ',' << csv::format_exact(ds.X(r, c));
    for (const auto& [gas, values] : ds.y) out << ',' << csv::format_exact(values(r));
    out << '\n';
  }
}

std::string dataset_csv(const Dataset& ds) {
  std::ostringstream os;
  write_dataset_csv(os, ds);
  return os.str();
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string fingerprint(const Dataset& ds) { return fnv1a_hex(dataset_csv(ds)); }

nlohmann::json dataset_sidecar(const Dataset& ds) {
  nlohmann::json j;
  j["window"] = {{"window_len", ds.window.window_len},
                 {"overlap_fraction", ds.window.overlap_fraction},
                 {"stride", ds.window.stride()}};
  j["label_policy"] = {{"mode", label_mode_name(ds.labels.mode)},
                       {"max_gap_s", ds.labels.max_gap_s}};
  j["channel_mask"] = ds.mask.to_string();
  j["sensor_ids"] = ds.sensor_ids;
  j["windows_total"] = ds.windows_total;
  j["dropped"] = ds.dropped;
  j["rows"] = ds.size();
  j["fingerprint"] = fingerprint(ds);
  return j;
}

Dataset read_dataset_csv(std::istream& in, const std::optional<nlohmann::json>& sidecar) {
  std::string line;
  if (!csv::read_line(in, line)) throw Error(Errc::MalformedHeader, "dataset has no header");
  const auto header = csv::split(line);
  if (header.empty() || header[0] != "window_center_t") {
    throw Error(Errc::MalformedHeader, "dataset header must start with window_center_t");
  }
  Dataset ds;
  std::vector<GasId> gases;
  for (std::size_t i = 1; i < header.size(); ++i) {
    const std::string_view name = header[i];
    if (name.rfind("y_", 0) == 0) {
      auto gas = parse_gas(name.substr(2));
      if (!gas) throw Error(Errc::MalformedHeader, "unknown target column " + std::string(name));
      gases.push_back(*gas);
    } else {
      if (!gases.empty()) {
        throw Error(Errc::MalformedHeader, "feature column after target columns");
      }
      ds.feature_names.emplace_back(name);
    }
  }
  if (gases.empty()) throw Error(Errc::MalformedHeader, "dataset has no y_ target columns");

  std::vector<std::vector<double>> values;
  std::size_t line_no = 1;
  while (csv::read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = csv::split(line);
    if (fields.size() != header.size()) {
      throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": field count");
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::string_view f : fields) {
      auto v = csv::parse_double(f);
      if (!v) throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": '" +
                                                  std::string(f) + "' is not a number");
      row.push_back(*v);
    }
    values.push_back(std::move(row));
  }
  if (values.empty()) throw Error(Errc::EmptyStream, "dataset has no rows");

  const auto n = static_cast<Eigen::Index>(values.size());
  const auto p = static_cast<Eigen::Index>(ds.feature_names.size());
  ds.X.resize(n, p);
  for (GasId gas : gases) ds.y[gas].resize(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = values[static_cast<std::size_t>(r)];
    ds.rows.push_back({row[0], row[0]});
    for (Eigen::Index c = 0; c < p; ++c) ds.X(r, c) = row[static_cast<std::size_t>(c) + 1];
    for (std::size_t g = 0; g < gases.size(); ++g) {
      ds.y[gases[g]](r) = row[1 + static_cast<std::size_t>(p) + g];
    }
  }
  ds.windows_total = values.size();

  if (sidecar) {
    const auto& j = *sidecar;
    try {
      ds.window.window_len = j.at("window").at("window_len").get<std::size_t>();
      ds.window.overlap_fraction = j.at("window").at("overlap_fraction").get<double>();
      auto mode = parse_label_mode(j.at("label_policy").at("mode").get<std::string>());
      if (!mode) throw Error(Errc::MalformedHeader, "sidecar: unknown label mode");
      ds.labels.mode = *mode;
      ds.labels.max_gap_s = j.at("label_policy").at("max_gap_s").get<double>();
      ds.mask = ChannelMask::parse(j.at("channel_mask").get<std::string>());
      ds.sensor_ids = j.at("sensor_ids").get<std::vector<std::string>>();
      ds.windows_total = j.at("windows_total").get<std::size_t>();
      ds.dropped = j.at("dropped").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::MalformedHeader, std::string("dataset sidecar: ") + e.what());
    }
  }
  ds.validate();
  return ds;
}

}  // namespace emissionscope

#include "grushin/estimates.hpp"

#include <fstream>
#include <sstream>

namespace grushin::estimates {

json ExperimentReport::to_json() const {
  json j;
  j["schema_version"] = 1;
  j["experiment"] = experiment;
  j["verdict"] = verdict;
  j["config"] = config;
  j["inputs"] = inputs;
  j["hypothesis"] = hypothesis;
  j["series"] = series;
  j["fit"] = fit;
  j["extras"] = extras;
  return j;
}

void ExperimentReport::save(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("report save: cannot open " + path.string());
  os << to_json().dump(2) << "\n";
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  if (series.empty()) return "";
  // Header from the first row's scalar keys; nested values are skipped.
  std::vector<std::string> keys;
  for (auto it = series.front().begin(); it != series.front().end(); ++it)
    if (!it.value().is_structured()) keys.push_back(it.key());
  for (std::size_t i = 0; i < keys.size(); ++i)
    os << keys[i] << (i + 1 < keys.size() ? "," : "\n");
  for (const auto& row : series) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (row.contains(keys[i])) os << row[keys[i]].dump();
      os << (i + 1 < keys.size() ? "," : "\n");
    }
  }
  return os.str();
}

}  // namespace grushin::estimates

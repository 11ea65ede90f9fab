#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace spbwe {

// Records which stage produced each artifact and the digests of every
// stage's inputs and outputs. A stage may run only while its inputs
// still carry the digests the manifest recorded for them; a mismatch
// names the stage to rerun.
class PipelineManifest {
 public:
  static PipelineManifest load(const std::string& path);  // missing file -> empty manifest
  void save(const std::string& path) const;

  // Throws IoError for missing inputs and StaleInputError for digest
  // mismatches against recorded artifacts.
  void check_inputs(const std::string& stage, const std::vector<std::string>& inputs) const;
  void record_stage(const std::string& stage, const nlohmann::json& params,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs);

  // Human-readable stage/artifact summary with per-file freshness.
  std::string report() const;
  const nlohmann::json& data() const { return data_; }

 private:
  nlohmann::json data_ = {{"version", 1},
                          {"artifacts", nlohmann::json::object()},
                          {"stages", nlohmann::json::object()}};
};

}  // namespace spbwe
